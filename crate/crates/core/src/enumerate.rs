//! Exhaustive enumeration of `S_n` with per-class counts, and the Fibonacci
//! check on boolean counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::posets;
use crate::prism;
use crate::{patterns, words};

/// Largest `n` accepted by the word and pattern enumerators.
pub const MAX_ENUM_N: usize = 10;
/// Largest `n` accepted by the poset enumerator.
pub const MAX_ENUM_POSET_N: usize = 6;

/// Which classifier backs an enumeration sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ReducedWord,
    Pattern,
    Poset,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rw" => Ok(Method::ReducedWord),
            "pattern" => Ok(Method::Pattern),
            "poset" => Ok(Method::Poset),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ReducedWord => "rw",
            Method::Pattern => "pattern",
            Method::Poset => "poset",
        })
    }
}

/// Counts over all of `S_n`. Construction checks both counting identities:
/// the three classes partition `S_n`, and the prisms are exactly the
/// non-boolean prisms plus the non-identity booleans.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    pub boolean_count: u64,
    pub prism_count: u64,
    pub prism_not_boolean_count: u64,
    pub neither_count: u64,
}

impl CountRow {
    pub const CSV_HEADER: &'static str = "n,boolean,prism,prism_not_boolean,neither";

    pub fn checked(
        n: usize,
        boolean_count: u64,
        prism_count: u64,
        prism_not_boolean_count: u64,
        neither_count: u64,
    ) -> Result<Self> {
        let total = factorial(n);
        if boolean_count + prism_not_boolean_count + neither_count != total {
            return Err(Error::Verification(format!(
                "class counts {boolean_count}+{prism_not_boolean_count}+{neither_count} != {n}! = {total}"
            )));
        }
        if prism_count != boolean_count - 1 + prism_not_boolean_count {
            return Err(Error::Verification(format!(
                "prism count {prism_count} breaks the identity-exclusion rule"
            )));
        }
        Ok(CountRow { n, boolean_count, prism_count, prism_not_boolean_count, neither_count })
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n,
            self.boolean_count,
            self.prism_count,
            self.prism_not_boolean_count,
            self.neither_count
        )
    }
}

pub fn factorial(n: usize) -> u64 {
    assert!(n <= 20, "factorial overflow");
    (1..=n as u64).product()
}

/// The `rank`-th permutation of `[1, n]` in lexicographic order, by the
/// factorial number system.
pub fn lehmer_unrank(n: usize, mut rank: u64) -> Permutation {
    assert!(n >= 1 && rank < factorial(n));
    let mut pool: Vec<usize> = (1..=n).collect();
    let mut values = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k);
        let d = (rank / f) as usize;
        rank %= f;
        values.push(pool.remove(d));
    }
    Permutation::from_one_line(&values).expect("unranking yields a permutation")
}

/// All of `S_n` in lexicographic one-line order.
pub fn lex_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    assert!(n >= 1);
    let mut state: Option<Vec<usize>> = Some((1..=n).collect());
    std::iter::from_fn(move || {
        let current = state.take()?;
        let out = Permutation::from_one_line(&current).expect("valid by construction");
        let mut next = current;
        if next_permutation(&mut next) {
            state = Some(next);
        }
        Some(out)
    })
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// (boolean, prism) verdicts for one permutation under one method.
fn verdicts(w: &Permutation, method: Method) -> Result<(bool, bool)> {
    match method {
        Method::ReducedWord => {
            let word = words::some_reduced_word(w);
            let distinct: std::collections::BTreeSet<usize> = word.letters().collect();
            let boolean = distinct.len() == word.len();
            let prism = distinct.iter().any(|&i| word.is_unconfined(i));
            Ok((boolean, prism))
        }
        Method::Pattern => Ok((
            patterns::is_boolean_by_pattern(w),
            prism::first_pattern_witness(w).is_some(),
        )),
        Method::Poset => {
            let ell = w.inversions();
            let bw = posets::ideal(w)?;
            let boolean = ell < 64 && bw.len() as u128 == 1u128 << ell;
            let prism = posets::prism_oracle_on(w, &bw)?.is_some();
            Ok((boolean, prism))
        }
    }
}

/// Counts the classes over all of `S_n` with the chosen classifier.
/// Permutations are visited in lexicographic rank order, partitioned into
/// contiguous ranges across the worker pool; the merged sums do not depend
/// on the partition.
pub fn enumerate(n: usize, method: Method) -> Result<CountRow> {
    if n == 0 {
        return Err(Error::InvalidSize(0));
    }
    let cap = match method {
        Method::Poset => MAX_ENUM_POSET_N,
        _ => MAX_ENUM_N,
    };
    if n > cap {
        return Err(Error::CapExceeded { what: "enumeration size", cap });
    }
    let total = factorial(n);
    let sums = (0..total)
        .into_par_iter()
        .try_fold(
            || (0u64, 0u64, 0u64, 0u64),
            |mut acc, rank| -> Result<(u64, u64, u64, u64)> {
                let w = lehmer_unrank(n, rank);
                let (boolean, prism) = verdicts(&w, method)?;
                acc.0 += boolean as u64;
                acc.1 += prism as u64;
                acc.2 += (prism && !boolean) as u64;
                acc.3 += (!prism && !boolean) as u64;
                Ok(acc)
            },
        )
        .try_reduce(
            || (0, 0, 0, 0),
            |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3)),
        )?;
    CountRow::checked(n, sums.0, sums.1, sums.2, sums.3)
}

/// One row of the Fibonacci comparison.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct FibRow {
    pub n: usize,
    pub boolean_count: u64,
    pub expected: u64,
}

impl FibRow {
    pub fn matches(&self) -> bool {
        self.boolean_count == self.expected
    }
}

/// Boolean counts for `n = 1..=max_n` against `1, 2, 5, 13, 34, …` (with
/// `a(n) = 3a(n-1) - a(n-2)` past the seed). Runs single-threaded, counting
/// by 321/3412-avoidance.
pub fn fibonacci_check(max_n: usize) -> Result<Vec<FibRow>> {
    if max_n == 0 {
        return Err(Error::InvalidSize(0));
    }
    if max_n > MAX_ENUM_N {
        return Err(Error::CapExceeded { what: "fibonacci check size", cap: MAX_ENUM_N });
    }
    let mut expected = vec![0u64; max_n + 1];
    for n in 1..=max_n {
        expected[n] = match n {
            1 => 1,
            2 => 2,
            _ => 3 * expected[n - 1] - expected[n - 2],
        };
    }
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let boolean_count =
            lex_permutations(n).filter(patterns::is_boolean_by_pattern).count() as u64;
        rows.push(FibRow { n, boolean_count, expected: expected[n] });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unranking_is_lexicographic() {
        let listed: Vec<String> =
            (0..6).map(|r| lehmer_unrank(3, r).to_string()).collect();
        assert_eq!(listed, vec!["123", "132", "213", "231", "312", "321"]);

        let iterated: Vec<Permutation> = lex_permutations(5).collect();
        assert_eq!(iterated.len(), 120);
        for (rank, w) in iterated.iter().enumerate() {
            assert_eq!(&lehmer_unrank(5, rank as u64), w);
        }
    }

    #[test]
    fn small_rows() {
        let r1 = enumerate(1, Method::ReducedWord).unwrap();
        assert_eq!((r1.boolean_count, r1.prism_count, r1.neither_count), (1, 0, 0));

        let r3 = enumerate(3, Method::ReducedWord).unwrap();
        assert_eq!(
            (r3.boolean_count, r3.prism_count, r3.prism_not_boolean_count, r3.neither_count),
            (5, 4, 0, 1)
        );

        for method in [Method::ReducedWord, Method::Pattern, Method::Poset] {
            let r4 = enumerate(4, method).unwrap();
            assert_eq!(r4.boolean_count, 13, "method {method}");
            assert_eq!(r4.prism_count, 16, "method {method}");
            assert_eq!(r4.prism_not_boolean_count, 4, "method {method}");
            assert_eq!(r4.neither_count, 7, "method {method}");
        }
    }

    #[test]
    fn csv_format() {
        let row = enumerate(4, Method::ReducedWord).unwrap();
        assert_eq!(row.csv_line(), "4,13,16,4,7");
        assert_eq!(CountRow::CSV_HEADER, "n,boolean,prism,prism_not_boolean,neither");
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(enumerate(0, Method::ReducedWord), Err(Error::InvalidSize(0))));
        assert!(matches!(
            enumerate(7, Method::Poset),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            enumerate(11, Method::ReducedWord),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(fibonacci_check(11), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn row_identities_checked() {
        assert!(CountRow::checked(3, 5, 4, 0, 1).is_ok());
        assert!(matches!(CountRow::checked(3, 5, 5, 0, 1), Err(Error::Verification(_))));
        assert!(matches!(CountRow::checked(3, 5, 4, 0, 2), Err(Error::Verification(_))));
    }

    #[test]
    fn fibonacci_small() {
        let rows = fibonacci_check(5).unwrap();
        let counts: Vec<u64> = rows.iter().map(|r| r.boolean_count).collect();
        let expected: Vec<u64> = rows.iter().map(|r| r.expected).collect();
        assert_eq!(counts, vec![1, 2, 5, 13, 34]);
        assert_eq!(expected, vec![1, 2, 5, 13, 34]);
        assert!(rows.iter().all(FibRow::matches));
    }
}
