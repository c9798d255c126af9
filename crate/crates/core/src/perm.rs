//! Value-semantic permutations in one-line notation.
//!
//! A [`Permutation`] is a bijection on `[1, n]`, stored as the word
//! `w(1) … w(n)`. Positions and values are 1-based everywhere in the public
//! interface. Products are compositions of maps: `(u ∘ v)(x) = u(v(x))`, so
//! the right factor acts first.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported permutation size.
pub const MAX_SIZE: usize = 64;

/// A permutation of `[1, n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    one_line: Vec<u8>,
}

/// A 21-pattern occurrence straddling an index, as returned by
/// [`Permutation::support_witness`]. `values` are listed in position order,
/// so `values.0 > values.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness21 {
    pub positions: (usize, usize),
    pub values: (usize, usize),
}

impl Permutation {
    /// The identity permutation `1 2 … n`.
    pub fn identity(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(Permutation {
            one_line: (1..=n as u8).collect(),
        })
    }

    /// Builds a permutation from one-line notation, validating that the
    /// values are a bijection on `[1, n]`.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        let n = values.len();
        check_size(n)?;
        let mut seen = vec![false; n + 1];
        for &v in values {
            if v < 1 || v > n {
                return Err(Error::InvalidOneLine {
                    n,
                    reason: format!("value {v} out of range"),
                });
            }
            if seen[v] {
                return Err(Error::InvalidOneLine {
                    n,
                    reason: format!("value {v} repeats"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation {
            one_line: values.iter().map(|&v| v as u8).collect(),
        })
    }

    /// The adjacent transposition swapping values `i` and `i+1`.
    pub fn simple_reflection(n: usize, i: usize) -> Result<Self> {
        let mut p = Permutation::identity(n)?;
        if i < 1 || i >= n {
            return Err(Error::LetterOutOfRange { letter: i, max: n.saturating_sub(1) });
        }
        p.one_line.swap(i - 1, i);
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.one_line.len()
    }

    /// `w(x)` for a 1-based position `x`. Panics if `x` is out of range.
    pub fn value(&self, x: usize) -> usize {
        self.one_line[x - 1] as usize
    }

    /// The 1-based position holding value `y`. Panics if `y` is out of range.
    pub fn position_of(&self, y: usize) -> usize {
        self.one_line
            .iter()
            .position(|&v| v as usize == y)
            .map(|p| p + 1)
            .expect("value out of range")
    }

    /// One-line notation as 1-based values.
    pub fn one_line(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.one_line.iter().map(|&v| v as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.one_line.iter().enumerate().all(|(x, &v)| v as usize == x + 1)
    }

    /// Composition `self ∘ v`: the right factor `v` is applied first.
    pub fn compose(&self, v: &Permutation) -> Result<Permutation> {
        if self.size() != v.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: v.size() });
        }
        let one_line = v.one_line.iter().map(|&x| self.one_line[x as usize - 1]).collect();
        Ok(Permutation { one_line })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.size()];
        for (x, &v) in self.one_line.iter().enumerate() {
            inv[v as usize - 1] = x as u8 + 1;
        }
        Permutation { one_line: inv }
    }

    /// Number of pairs `x < y` with `w(x) > w(y)`; equals the Coxeter length.
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for x in 0..self.one_line.len() {
            for y in x + 1..self.one_line.len() {
                if self.one_line[x] > self.one_line[y] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `i ∈ supp(w)` via the prefix criterion: `{w(1), …, w(i)} ≠ {1, …, i}`,
    /// equivalently the running maximum of the prefix exceeds `i`.
    pub fn in_support(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i < self.size());
        self.one_line[..i].iter().max().map(|&m| m as usize > i).unwrap_or(false)
    }

    /// The set of generator indices appearing in the reduced words of `w`.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut supp = BTreeSet::new();
        let mut running_max = 0usize;
        for i in 1..self.size() {
            running_max = running_max.max(self.one_line[i - 1] as usize);
            if running_max > i {
                supp.insert(i);
            }
        }
        supp
    }

    /// A 21-pattern in positions `{x1, x2}` with `x1 ≤ i < x2` and values
    /// `{y1, y2}` with `y1 ≤ i < y2`, when `i ∈ supp(w)`. The first such pair
    /// in lexicographic position order is returned.
    pub fn support_witness(&self, i: usize) -> Result<Option<Witness21>> {
        let n = self.size();
        if i < 1 || i >= n {
            return Err(Error::IndexOutOfRange { index: i, max: n.saturating_sub(1) });
        }
        for x1 in 1..=i {
            let v1 = self.value(x1);
            if v1 <= i {
                continue;
            }
            for x2 in i + 1..=n {
                let v2 = self.value(x2);
                if v2 <= i {
                    return Ok(Some(Witness21 { positions: (x1, x2), values: (v1, v2) }));
                }
            }
        }
        Ok(None)
    }

    /// Right descents: positions `i` with `w(i) > w(i+1)`.
    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.size()).filter(|&i| self.one_line[i - 1] > self.one_line[i]).collect()
    }

    pub(crate) fn smallest_right_descent(&self) -> Option<usize> {
        (1..self.size()).find(|&i| self.one_line[i - 1] > self.one_line[i])
    }

    /// Right multiplication by the transposition of positions `a` and `b`.
    pub(crate) fn with_positions_swapped(&self, a: usize, b: usize) -> Permutation {
        let mut p = self.clone();
        p.one_line.swap(a - 1, b - 1);
        p
    }

    /// Exchanges the values `a` and `b` wherever they sit.
    pub(crate) fn with_values_swapped(&self, a: usize, b: usize) -> Permutation {
        let pa = self.position_of(a);
        let pb = self.position_of(b);
        self.with_positions_swapped(pa, pb)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SIZE {
        return Err(Error::InvalidSize(n));
    }
    Ok(())
}

impl fmt::Display for Permutation {
    /// One digit per value when `n ≤ 9`, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() <= 9 {
            for v in self.one_line() {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Comma-separated integers if the token contains a comma, otherwise one
    /// digit per character (which limits digit form to `n ≤ 9`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::from_one_line(&values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn identity_one_line() {
        assert_eq!(Permutation::identity(4).unwrap().to_string(), "1234");
        assert_eq!(Permutation::identity(1).unwrap().to_string(), "1");
        assert_eq!(Permutation::identity(9).unwrap().to_string(), "123456789");
        assert!(matches!(Permutation::identity(0), Err(Error::InvalidSize(0))));
        assert!(Permutation::identity(MAX_SIZE).is_ok());
        assert!(Permutation::identity(MAX_SIZE + 1).is_err());
    }

    #[test]
    fn compose_right_factor_first() {
        let s1 = Permutation::simple_reflection(4, 1).unwrap();
        assert_eq!(s1.compose(&p("1432")).unwrap(), p("2431"));

        let w = p("3142");
        assert_eq!(w.compose(&Permutation::identity(4).unwrap()).unwrap(), w);

        // σ3 ∘ σ2 ∘ σ1 = 4123
        let s2 = Permutation::simple_reflection(4, 2).unwrap();
        let s3 = Permutation::simple_reflection(4, 3).unwrap();
        let chain = s3.compose(&s2).unwrap().compose(&s1).unwrap();
        assert_eq!(chain, p("4123"));
    }

    #[test]
    fn compose_size_mismatch() {
        let u = p("21");
        let v = p("213");
        assert!(matches!(u.compose(&v), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(p("2431").inversions(), 4);
        assert_eq!(Permutation::identity(6).unwrap().inversions(), 0);
        assert_eq!(p("4321").inversions(), 6);
    }

    #[test]
    fn support_prefix_criterion() {
        assert_eq!(p("2431").support(), [1, 2, 3].into_iter().collect());
        assert_eq!(p("1432").support(), [2, 3].into_iter().collect());
        assert!(Permutation::identity(5).unwrap().support().is_empty());
    }

    #[test]
    fn support_witness_examples() {
        assert_eq!(
            p("2431").support_witness(1).unwrap(),
            Some(Witness21 { positions: (1, 4), values: (2, 1) })
        );
        let id = Permutation::identity(4).unwrap();
        for i in 1..4 {
            assert_eq!(id.support_witness(i).unwrap(), None);
        }
        assert_eq!(p("1432").support_witness(1).unwrap(), None);
        assert!(p("1432").support_witness(4).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let w = p("24153");
        assert_eq!(w.compose(&w.inverse()).unwrap(), Permutation::identity(5).unwrap());
        assert_eq!(w.inverse().compose(&w).unwrap(), Permutation::identity(5).unwrap());
    }

    #[test]
    fn text_format() {
        assert_eq!(p("2,4,3,1"), p("2431"));
        let long: Vec<usize> = (1..=12).rev().collect();
        let w = Permutation::from_one_line(&long).unwrap();
        let text = w.to_string();
        assert!(text.contains(','));
        assert_eq!(text.parse::<Permutation>().unwrap(), w);
        assert!("2430".parse::<Permutation>().is_err());
        assert!("2441".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }
}
