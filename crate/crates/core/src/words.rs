//! Reduced words: generation, braid/commutation moves, unconfined letters,
//! letter deletion, and the four canonical word forms of prisms.
//!
//! A [`Word`] is a sequence of generator indices, carried together with the
//! size context `n` it acts in: the word `321` in context 4 evaluates to
//! `4123`, in context 5 to `41235`, and those are distinct values. A word
//! `i1 … ik` evaluates to the composition `σ_{i1} ∘ … ∘ σ_{ik}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on `|R(w)|` for [`all_reduced_words`].
pub const DEFAULT_RWORDS_CAP: usize = 1_000_000;

/// A word in the generators `σ_1 … σ_{n-1}`, not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    n: usize,
}

impl Word {
    pub fn new(letters: &[usize], n: usize) -> Result<Self> {
        // reuse the permutation size check
        Permutation::identity(n)?;
        for &i in letters {
            if i < 1 || i >= n {
                return Err(Error::LetterOutOfRange { letter: i, max: n.saturating_sub(1) });
            }
        }
        Ok(Word { letters: letters.iter().map(|&i| i as u8).collect(), n })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Word::new(&[], n)
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.letters.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The size context `n` the word acts in.
    pub fn size_context(&self) -> usize {
        self.n
    }

    /// Evaluates the word as a composition of simple reflections.
    pub fn to_perm(&self) -> Permutation {
        let mut p = Permutation::identity(self.n).expect("validated at construction");
        // appending a letter multiplies on the right, i.e. swaps two positions
        for &i in &self.letters {
            p = p.with_positions_swapped(i as usize, i as usize + 1);
        }
        p
    }

    /// A word is reduced when its length equals the length of its product.
    pub fn is_reduced(&self) -> bool {
        self.to_perm().inversions() == self.len()
    }

    /// Number of occurrences of the letter `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.letters.iter().filter(|&&l| l as usize == i).count()
    }

    /// A letter `i` is unconfined in a word when it appears exactly once and
    /// that appearance is neither between two copies of `i+1` nor between two
    /// copies of `i-1`. Any multiplicity other than one yields `false`.
    pub fn is_unconfined(&self, i: usize) -> bool {
        if self.multiplicity(i) != 1 {
            return false;
        }
        let at = self.letters.iter().position(|&l| l as usize == i).unwrap();
        let between = |j: usize| -> bool {
            self.letters[..at].iter().any(|&l| l as usize == j)
                && self.letters[at + 1..].iter().any(|&l| l as usize == j)
        };
        if between(i + 1) {
            return false;
        }
        if i > 1 && between(i - 1) {
            return false;
        }
        true
    }

    /// Parses a word in an explicit size context. An optional `s:` prefix is
    /// accepted; the comma rule is the same as for permutations.
    pub fn parse_in(text: &str, n: usize) -> Result<Self> {
        let s = text.trim();
        let s = s.strip_prefix("s:").unwrap_or(s);
        if s.is_empty() {
            return Word::empty(n);
        }
        let letters: Vec<usize> = if s.contains(',') {
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
        Word::new(&letters, n)
    }

    fn concat(parts: &[&[u8]], n: usize) -> Word {
        let mut letters = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for part in parts {
            letters.extend_from_slice(part);
        }
        Word { letters, n }
    }
}

impl fmt::Display for Word {
    /// One digit per letter when every letter is below ten, comma-separated
    /// otherwise. The empty word prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.iter().all(|&l| l <= 9) {
            for l in self.letters() {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({} in S_{})", self, self.n)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses with the minimal size context, `max letter + 1`.
    fn from_str(s: &str) -> Result<Self> {
        let probe = Word::parse_in(s, crate::perm::MAX_SIZE)?;
        let n = probe.letters().max().map_or(1, |m| m + 1);
        Word::new(&probe.letters.iter().map(|&l| l as usize).collect::<Vec<_>>(), n)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All words reachable from `s` by a single commutation (`ij → ji` when
/// `|i-j| > 1`) or braid (`i(i+1)i ↔ (i+1)i(i+1)`) move.
pub fn move_neighbors(s: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    let ls = &s.letters;
    for j in 0..ls.len().saturating_sub(1) {
        let (a, b) = (ls[j], ls[j + 1]);
        if a.abs_diff(b) > 1 {
            let mut t = ls.clone();
            t.swap(j, j + 1);
            out.push(Word { letters: t, n: s.n });
        }
    }
    for j in 0..ls.len().saturating_sub(2) {
        let (a, b, c) = (ls[j], ls[j + 1], ls[j + 2]);
        if a == c && a.abs_diff(b) == 1 {
            let mut t = ls.clone();
            t[j] = b;
            t[j + 1] = a;
            t[j + 2] = b;
            out.push(Word { letters: t, n: s.n });
        }
    }
    out
}

/// A deterministic reduced word for `w`: repeatedly peel the smallest right
/// descent. The peeled letters are accumulated last-letter-first, so the
/// output is their reversal.
pub fn some_reduced_word(w: &Permutation) -> Word {
    let mut p = w.clone();
    let mut acc: Vec<u8> = Vec::with_capacity(w.inversions());
    while let Some(i) = p.smallest_right_descent() {
        acc.push(i as u8);
        p = p.with_positions_swapped(i, i + 1);
    }
    acc.reverse();
    Word { letters: acc, n: w.size() }
}

/// Exactly `R(w)`, by recursion on right descents: every reduced word ends in
/// a descent letter, and distinct branches yield distinct words.
pub fn all_reduced_words(w: &Permutation) -> Result<BTreeSet<Word>> {
    all_reduced_words_capped(w, DEFAULT_RWORDS_CAP)
}

pub fn all_reduced_words_capped(w: &Permutation, cap: usize) -> Result<BTreeSet<Word>> {
    fn rec(
        p: &Permutation,
        memo: &mut HashMap<Permutation, Rc<Vec<Vec<u8>>>>,
        cap: usize,
    ) -> Result<Rc<Vec<Vec<u8>>>> {
        if let Some(hit) = memo.get(p) {
            return Ok(hit.clone());
        }
        let mut words: Vec<Vec<u8>> = Vec::new();
        if p.is_identity() {
            words.push(Vec::new());
        } else {
            for i in p.right_descents() {
                let q = p.with_positions_swapped(i, i + 1);
                let sub = rec(&q, memo, cap)?;
                for s in sub.iter() {
                    let mut s2 = Vec::with_capacity(s.len() + 1);
                    s2.extend_from_slice(s);
                    s2.push(i as u8);
                    words.push(s2);
                    if words.len() > cap {
                        return Err(Error::CapExceeded { what: "|R(w)|", cap });
                    }
                }
            }
        }
        let rc = Rc::new(words);
        memo.insert(p.clone(), rc.clone());
        Ok(rc)
    }

    let mut memo = HashMap::new();
    let words = rec(w, &mut memo, cap)?;
    let n = w.size();
    Ok(words.iter().map(|ls| Word { letters: ls.clone(), n }).collect())
}

/// Whether `i` appears exactly once in every element of `R(w)`, decided by
/// pattern containment: `w` must have no 321 occurrence spanning `i` in both
/// positions and values, and no 3412 occurrence whose two middle columns and
/// two middle values straddle `i`.
pub fn appears_once_in_all(w: &Permutation, i: usize) -> Result<bool> {
    if i < 1 || i >= w.size() || !w.in_support(i) {
        return Err(Error::NotInSupport(i));
    }
    Ok(!has_spanning_321(w, i) && !has_spanning_3412(w, i))
}

/// 321 occurrence with positions `x1 < x2 < x3`, `x1 ≤ i < x3`, and values
/// `w(x3) ≤ i < w(x1)`.
fn has_spanning_321(w: &Permutation, i: usize) -> bool {
    let n = w.size();
    for x1 in 1..=i {
        let v1 = w.value(x1);
        if v1 <= i {
            continue;
        }
        for x2 in x1 + 1..n {
            let v2 = w.value(x2);
            if v2 >= v1 {
                continue;
            }
            for x3 in (x2 + 1).max(i + 1)..=n {
                let v3 = w.value(x3);
                if v3 < v2 && v3 <= i {
                    return true;
                }
            }
        }
    }
    false
}

/// 3412 occurrence with positions `x2 ≤ i < x3` and values `w(x4) ≤ i < w(x1)`.
fn has_spanning_3412(w: &Permutation, i: usize) -> bool {
    let n = w.size();
    for x2 in 2..=i {
        let v2 = w.value(x2);
        for x1 in 1..x2 {
            let v1 = w.value(x1);
            // pattern 3412: w(x1) < w(x2) with w(x1) ranked third
            if v1 >= v2 || v1 <= i {
                continue;
            }
            for x3 in i + 1..n {
                let v3 = w.value(x3);
                if v3 >= v1 {
                    continue;
                }
                for x4 in x3 + 1..=n {
                    let v4 = w.value(x4);
                    if v4 > v3 && v4 < v1 && v4 <= i {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// The letters that are unconfined in elements of `R(w)`, read off a single
/// reduced word: a letter unconfined in one word is unconfined in all of
/// them, and a letter repeated or confined in one word is unconfined in none.
pub fn unconfined_letters(w: &Permutation) -> BTreeSet<usize> {
    let word = some_reduced_word(w);
    let distinct: BTreeSet<usize> = word.letters().collect();
    distinct.into_iter().filter(|&i| word.is_unconfined(i)).collect()
}

/// The permutation obtained by deleting the copy of `i` from any reduced word
/// of `w`, computed directly on one-line notation: swap the values
/// `b = max{w(1..i)}` and `a = min{w(i+1..n)}`.
///
/// Requires `i ∈ supp(w)` and that `i` appears exactly once in all reduced
/// words; all deletions then agree.
pub fn delete_letter_perm(w: &Permutation, i: usize) -> Result<Permutation> {
    if !appears_once_in_all(w, i)? {
        return Err(Error::NotDeletable(i));
    }
    let b = (1..=i).map(|x| w.value(x)).max().expect("nonempty prefix");
    let a = (i + 1..=w.size()).map(|x| w.value(x)).min().expect("nonempty suffix");
    let v = w.with_values_swapped(a, b);
    if v.inversions() + 1 != w.inversions() {
        return Err(Error::Verification(format!(
            "deleting {i} from {w} gave {v}, which is not one cover step down"
        )));
    }
    Ok(v)
}

/// The four word formats a prism admits, named by where the isolated letter
/// `i` sits relative to the blocks of letters above and below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordForm {
    /// (a) `(letters > i) i (letters < i)`
    GreaterIsolatedLesser,
    /// (b) `(letters < i) i (letters > i)`
    LesserIsolatedGreater,
    /// (c) `i (letters > i) (letters < i)`
    IsolatedFirst,
    /// (d) `(letters < i) (letters > i) i`
    IsolatedLast,
}

impl WordForm {
    pub fn tag(self) -> char {
        match self {
            WordForm::GreaterIsolatedLesser => 'a',
            WordForm::LesserIsolatedGreater => 'b',
            WordForm::IsolatedFirst => 'c',
            WordForm::IsolatedLast => 'd',
        }
    }
}

impl fmt::Display for WordForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Literal format check for [`WordForm`]: the word must contain `i` exactly
/// once, with the surrounding letters arranged in the tagged shape.
pub fn matches_form(word: &Word, i: usize, form: WordForm) -> bool {
    if word.multiplicity(i) != 1 {
        return false;
    }
    let letters: Vec<usize> = word.letters().collect();
    let at = letters.iter().position(|&l| l == i).unwrap();
    let before = &letters[..at];
    let after = &letters[at + 1..];
    let all_gt = |ls: &[usize]| ls.iter().all(|&l| l > i);
    let all_lt = |ls: &[usize]| ls.iter().all(|&l| l < i);
    // "block of > i then block of < i": no small letter may precede a big one
    let gt_then_lt = |ls: &[usize]| {
        let first_small = ls.iter().position(|&l| l < i).unwrap_or(ls.len());
        ls[first_small..].iter().all(|&l| l < i)
    };
    let lt_then_gt = |ls: &[usize]| {
        let first_big = ls.iter().position(|&l| l > i).unwrap_or(ls.len());
        ls[first_big..].iter().all(|&l| l > i)
    };
    match form {
        WordForm::GreaterIsolatedLesser => all_gt(before) && all_lt(after),
        WordForm::LesserIsolatedGreater => all_lt(before) && all_gt(after),
        WordForm::IsolatedFirst => before.is_empty() && gt_then_lt(after),
        WordForm::IsolatedLast => after.is_empty() && lt_then_gt(before),
    }
}

/// A reduced word for `w` in one of the four prism formats, together with its
/// tag. Candidates are assembled from the deletion `v` of `i`, whose support
/// splits into letters below and above `i`, and are tried in the order
/// (d), (c), (b), (a); the first one evaluating back to `w` is returned.
pub fn canonical_prism_word(w: &Permutation, i: usize) -> Result<(Word, WordForm)> {
    if !unconfined_letters(w).contains(&i) {
        return Err(Error::NotUnconfined(i));
    }
    let n = w.size();
    let v = delete_letter_perm(w, i)?;

    // i ∉ supp(v), so v splits into a block on [1, i] and a block on [i+1, n]
    if v.in_support(i) {
        return Err(Error::Verification(format!(
            "deletion of {i} from {w} left {i} in the support of {v}"
        )));
    }
    let mut lower: Vec<usize> = (1..=n).collect();
    let mut upper: Vec<usize> = (1..=n).collect();
    for x in 1..=n {
        if x <= i {
            lower[x - 1] = v.value(x);
        } else {
            upper[x - 1] = v.value(x);
        }
    }
    let low_word = some_reduced_word(&Permutation::from_one_line(&lower)?);
    let high_word = some_reduced_word(&Permutation::from_one_line(&upper)?);
    let low: Vec<u8> = low_word.letters().map(|l| l as u8).collect();
    let high: Vec<u8> = high_word.letters().map(|l| l as u8).collect();
    let li = [i as u8];

    let candidates = [
        (Word::concat(&[&low, &high, &li], n), WordForm::IsolatedLast),
        (Word::concat(&[&li, &high, &low], n), WordForm::IsolatedFirst),
        (Word::concat(&[&low, &li, &high], n), WordForm::LesserIsolatedGreater),
        (Word::concat(&[&high, &li, &low], n), WordForm::GreaterIsolatedLesser),
    ];
    for (word, form) in candidates {
        if word.to_perm() == *w {
            debug_assert!(matches_form(&word, i, form));
            return Ok((word, form));
        }
    }
    Err(Error::Verification(format!(
        "no prism word form found for {w} at unconfined letter {i}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn word(s: &str, n: usize) -> Word {
        Word::parse_in(s, n).unwrap()
    }

    #[test]
    fn word_evaluation() {
        assert_eq!(word("1232", 4).to_perm(), p("2431"));
        assert_eq!(Word::empty(4).unwrap().to_perm(), p("1234"));
        assert_eq!(word("321", 4).to_perm(), p("4123"));
        assert_eq!(word("321", 5).to_perm(), p("41235"));
        assert_ne!(word("321", 4), word("321", 5));
    }

    #[test]
    fn reducedness() {
        assert!(word("1232", 4).is_reduced());
        assert!(!word("11", 4).is_reduced());
        assert!(word("121", 4).is_reduced());
        assert_eq!(word("121", 4).to_perm(), p("3214"));
    }

    #[test]
    fn letter_range_checked() {
        assert!(Word::new(&[4], 4).is_err());
        assert!(Word::new(&[0], 4).is_err());
        assert!(Word::new(&[3], 4).is_ok());
    }

    #[test]
    fn some_word_is_deterministic_and_reduced() {
        assert!(some_reduced_word(&p("1234")).is_empty());
        assert_eq!(some_reduced_word(&p("2431")), word("1232", 4));
        assert_eq!(some_reduced_word(&p("1432")), word("232", 4));
        for s in ["24153", "53241", "45321"] {
            let w = p(s);
            let r = some_reduced_word(&w);
            assert!(r.is_reduced());
            assert_eq!(r.to_perm(), w);
        }
    }

    #[test]
    fn all_words_worked_examples() {
        let r2431 = all_reduced_words(&p("2431")).unwrap();
        let expect: BTreeSet<Word> =
            ["1232", "1323", "3123"].iter().map(|s| word(s, 4)).collect();
        assert_eq!(r2431, expect);

        let r1432 = all_reduced_words(&p("1432")).unwrap();
        let expect: BTreeSet<Word> = ["232", "323"].iter().map(|s| word(s, 4)).collect();
        assert_eq!(r1432, expect);

        let rid = all_reduced_words(&Permutation::identity(4).unwrap()).unwrap();
        assert_eq!(rid.len(), 1);
        assert!(rid.iter().next().unwrap().is_empty());

        assert_eq!(all_reduced_words(&p("4321")).unwrap().len(), 16);
    }

    #[test]
    fn all_words_cap_guard() {
        let err = all_reduced_words_capped(&p("4321"), 10).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn multiplicities() {
        let s = word("1232", 4);
        assert_eq!(s.multiplicity(2), 2);
        assert_eq!(s.multiplicity(1), 1);
        assert_eq!(s.multiplicity(4), 0);
    }

    #[test]
    fn unconfined_in_single_words() {
        assert!(word("1232", 4).is_unconfined(1));
        assert!(!word("1232", 4).is_unconfined(3)); // between the two 2s
        assert!(!word("232", 4).is_unconfined(3));
        assert!(!word("1232", 4).is_unconfined(2)); // repeated letter
    }

    #[test]
    fn appears_once_examples() {
        assert!(appears_once_in_all(&p("2431"), 1).unwrap());
        assert!(!appears_once_in_all(&p("2431"), 2).unwrap());
        assert!(appears_once_in_all(&p("3412"), 1).unwrap());
        assert!(matches!(appears_once_in_all(&p("1432"), 1), Err(Error::NotInSupport(1))));
    }

    #[test]
    fn unconfined_letter_sets() {
        assert_eq!(unconfined_letters(&p("2431")), [1].into_iter().collect());
        assert_eq!(unconfined_letters(&p("2143")), [1, 3].into_iter().collect());
        assert!(unconfined_letters(&p("1432")).is_empty());
        assert!(unconfined_letters(&p("4321")).is_empty());
    }

    #[test]
    fn deletion_examples() {
        assert_eq!(delete_letter_perm(&p("2431"), 1).unwrap(), p("1432"));
        assert_eq!(delete_letter_perm(&p("4213"), 3).unwrap(), p("3214"));
        assert_eq!(delete_letter_perm(&p("2134"), 1).unwrap(), p("1234"));
        assert!(matches!(delete_letter_perm(&p("2431"), 2), Err(Error::NotDeletable(2))));
        assert!(matches!(delete_letter_perm(&p("1432"), 1), Err(Error::NotInSupport(1))));
    }

    #[test]
    fn canonical_words() {
        let (w1, f1) = canonical_prism_word(&p("2431"), 1).unwrap();
        assert_eq!((w1.to_string().as_str(), f1.tag()), ("1232", 'c'));

        let (w2, f2) = canonical_prism_word(&p("4213"), 3).unwrap();
        assert_eq!((w2.to_string().as_str(), f2.tag()), ("3121", 'c'));

        let (w3, f3) = canonical_prism_word(&p("2143"), 3).unwrap();
        assert_eq!((w3.to_string().as_str(), f3.tag()), ("13", 'd'));

        for (perm, i) in [("2431", 1), ("4213", 3), ("2143", 1), ("2143", 3)] {
            let w = p(perm);
            let (s, form) = canonical_prism_word(&w, i).unwrap();
            assert!(s.is_reduced());
            assert_eq!(s.to_perm(), w);
            assert!(matches_form(&s, i, form));
        }

        assert!(matches!(canonical_prism_word(&p("2431"), 2), Err(Error::NotUnconfined(2))));
    }

    #[test]
    fn neighbor_moves() {
        // 13 <-> 31 by commutation
        let nbrs = move_neighbors(&word("13", 4));
        assert_eq!(nbrs, vec![word("31", 4)]);
        // 121 <-> 212 by braid
        let nbrs = move_neighbors(&word("121", 4));
        assert_eq!(nbrs, vec![word("212", 4)]);
        // braid moves preserve the product
        for nb in move_neighbors(&word("1232", 4)) {
            assert_eq!(nb.to_perm(), p("2431"));
        }
    }

    #[test]
    fn word_text_format() {
        assert_eq!(word("s:1,2,3,2", 4), word("1232", 4));
        assert_eq!(word("1232", 4).to_string(), "1232");
        let big = Word::new(&[11, 2], 13).unwrap();
        assert_eq!(big.to_string(), "11,2");
        assert_eq!("1232".parse::<Word>().unwrap().size_context(), 4);
    }
}
