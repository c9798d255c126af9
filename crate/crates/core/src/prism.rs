//! Three independent prism classifiers, the boolean degree and core
//! decomposition, and an explicit check of the `B(w) ≅ chain2 × B(v)`
//! isomorphism.
//!
//! A permutation is a prism exactly when some support letter is unconfined
//! in its reduced words, equivalently when it contains one of the eight
//! calibrated catalog patterns, equivalently when its Bruhat ideal splits
//! off a two-element chain factor. The classifiers here implement the three
//! routes independently; [`classify`] cross-checks them and treats any
//! disagreement as an internal error.

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::patterns::{self, Occurrence};
use crate::perm::Permutation;
use crate::posets::{self, Poset};
use crate::words::{self, Word};

/// Which classifiers to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MethodSet {
    pub rw: bool,
    pub pattern: bool,
    pub poset: bool,
}

impl MethodSet {
    pub const ALL: MethodSet = MethodSet { rw: true, pattern: true, poset: true };
    pub const FAST: MethodSet = MethodSet { rw: true, pattern: true, poset: false };
    pub const RW: MethodSet = MethodSet { rw: true, pattern: false, poset: false };

    pub fn is_empty(&self) -> bool {
        !(self.rw || self.pattern || self.poset)
    }
}

impl FromStr for MethodSet {
    type Err = Error;

    /// Comma-separated subset of `rw`, `pattern`, `poset`.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = MethodSet { rw: false, pattern: false, poset: false };
        for part in s.split(',') {
            match part.trim() {
                "rw" => set.rw = true,
                "pattern" => set.pattern = true,
                "poset" => set.poset = true,
                other => return Err(Error::Parse(format!("unknown method {other:?}"))),
            }
        }
        if set.is_empty() {
            return Err(Error::Parse("no methods selected".into()));
        }
        Ok(set)
    }
}

/// Evidence from the reduced-word classifier.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RwWitness {
    pub word: Word,
    pub unconfined: BTreeSet<usize>,
}

/// Evidence from the pattern classifier: catalog pattern `P<k>` instantiated
/// at `i`, with its first occurrence.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PatternWitness {
    pub i: usize,
    pub pattern: String,
    pub occurrence: Occurrence,
}

/// Evidence from the poset classifier: `B(w) ≅ chain2 × B(factor)` with
/// `supp(w) ∖ supp(factor) = {i}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PosetWitness {
    pub i: usize,
    pub factor: Permutation,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rw: Option<RwWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetWitness>,
}

/// Per-permutation verdicts from all requested methods.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub perm: Permutation,
    pub is_boolean: bool,
    pub is_prism: bool,
    pub unconfined: BTreeSet<usize>,
    pub degree_d: usize,
    pub core: Permutation,
    pub witnesses: Witnesses,
}

/// Boolean test on words: some (equivalently, every) reduced word of a
/// boolean permutation is repeat-free.
pub fn is_boolean_by_word(w: &Permutation) -> bool {
    let word = words::some_reduced_word(w);
    let distinct: BTreeSet<usize> = word.letters().collect();
    distinct.len() == word.len()
}

/// Prism test by unconfined letters in reduced words.
pub fn classify_by_reduced_word(w: &Permutation) -> (bool, BTreeSet<usize>) {
    let unconfined = words::unconfined_letters(w);
    (!unconfined.is_empty(), unconfined)
}

/// Prism test by catalog containment: scans `i = 1..n-1` and the eight
/// patterns in order, collecting one witness (the lexicographically first
/// occurrence) per matching `(i, pattern)` pair.
pub fn classify_by_pattern(w: &Permutation) -> (bool, Vec<PatternWitness>) {
    let mut witnesses = Vec::new();
    for i in 1..w.size() {
        for (idx, pat) in patterns::prism_catalog(i).iter().enumerate() {
            if let Some(occurrence) = patterns::first_occurrence(w, pat) {
                witnesses.push(PatternWitness {
                    i,
                    pattern: format!("P{}", idx + 1),
                    occurrence,
                });
            }
        }
    }
    (!witnesses.is_empty(), witnesses)
}

/// First catalog witness only, short-circuiting the scan.
pub fn first_pattern_witness(w: &Permutation) -> Option<PatternWitness> {
    for i in 1..w.size() {
        for (idx, pat) in patterns::prism_catalog(i).iter().enumerate() {
            if let Some(occurrence) = patterns::first_occurrence(w, pat) {
                return Some(PatternWitness {
                    i,
                    pattern: format!("P{}", idx + 1),
                    occurrence,
                });
            }
        }
    }
    None
}

/// Prism test by the Bruhat ideal decomposition.
pub fn classify_by_poset(w: &Permutation) -> Result<(bool, Option<(usize, Permutation)>)> {
    let witness = posets::prism_oracle(w)?;
    Ok((witness.is_some(), witness))
}

/// The boolean degree `d` and the core `w'`: repeatedly delete the smallest
/// unconfined letter until none remain. The number of deletions must equal
/// the initial count of unconfined letters, and is verified.
pub fn boolean_degree(w: &Permutation) -> Result<(usize, Permutation)> {
    let d = words::unconfined_letters(w).len();
    let mut core = w.clone();
    let mut deletions = 0usize;
    loop {
        let letters = words::unconfined_letters(&core);
        let Some(&i) = letters.iter().next() else { break };
        core = words::delete_letter_perm(&core, i)?;
        deletions += 1;
        if deletions > d {
            break;
        }
    }
    if deletions != d {
        return Err(Error::Verification(format!(
            "deleting unconfined letters of {w} took {deletions} steps, expected {d}"
        )));
    }
    if !words::unconfined_letters(&core).is_empty() {
        return Err(Error::Verification(format!("core {core} of {w} still has unconfined letters")));
    }
    Ok((d, core))
}

/// Checks the explicit map `φ : B(w) → chain2 × B(v)` for an unconfined `i`,
/// where `φ(u) = (0, u)` if `i ∉ supp(u)` and `(1, q(u))` otherwise, with
/// `q` deleting `i`. Returns `true` when `φ` is a bijection matching covers
/// in both directions; any `false` indicates a bug in this library.
pub fn verify_prism_iso(w: &Permutation, i: usize) -> Result<bool> {
    if !words::unconfined_letters(w).contains(&i) {
        return Err(Error::NotUnconfined(i));
    }
    let v = words::delete_letter_perm(w, i)?;
    let bw = posets::ideal(w)?;
    let bv = posets::ideal(&v)?;
    if bw.len() != 2 * bv.len() {
        return Ok(false);
    }

    let index_v: HashMap<&Permutation, usize> =
        bv.elements().iter().enumerate().map(|(idx, u)| (u, idx)).collect();

    // φ as (chain coordinate, index into B(v)), for every element of B(w)
    let mut images: Vec<(u8, usize)> = Vec::with_capacity(bw.len());
    for u in bw.elements() {
        let in_supp = i < u.size() && u.in_support(i);
        let (coord, q_u) = if in_supp {
            match words::delete_letter_perm(u, i) {
                Ok(q) => (1u8, q),
                Err(_) => return Ok(false),
            }
        } else {
            (0u8, u.clone())
        };
        match index_v.get(&q_u) {
            Some(&idx) => images.push((coord, idx)),
            None => return Ok(false),
        }
    }

    // injectivity
    let distinct: BTreeSet<(u8, usize)> = images.iter().copied().collect();
    if distinct.len() != bw.len() {
        return Ok(false);
    }

    // covers map to covers; equal counts force the converse direction
    let cover_set: BTreeSet<(usize, usize)> = bv.covers().collect();
    for (a, b) in bw.covers() {
        let (ca, qa) = images[a];
        let (cb, qb) = images[b];
        let is_cover = (ca == cb && cover_set.contains(&(qa, qb)))
            || (qa == qb && ca == 0 && cb == 1);
        if !is_cover {
            return Ok(false);
        }
    }
    Ok(bw.cover_count() == 2 * bv.cover_count() + bv.len())
}

/// Runs the requested classifiers, cross-checks their verdicts, and builds
/// the record. Any disagreement raises a verification error.
pub fn classify(w: &Permutation, methods: MethodSet) -> Result<ClassificationRecord> {
    if methods.is_empty() {
        return Err(Error::Parse("no methods selected".into()));
    }
    let mut witnesses = Witnesses::default();
    let mut prism_votes: Vec<(&str, bool)> = Vec::new();
    let mut boolean_votes: Vec<(&str, bool)> = Vec::new();

    let (rw_prism, unconfined) = classify_by_reduced_word(w);
    let degree_d = unconfined.len();
    let (_, core) = boolean_degree(w)?;

    if methods.rw {
        prism_votes.push(("rw", rw_prism));
        boolean_votes.push(("rw", is_boolean_by_word(w)));
        witnesses.rw = Some(RwWitness {
            word: words::some_reduced_word(w),
            unconfined: unconfined.clone(),
        });
    }
    if methods.pattern {
        let witness = first_pattern_witness(w);
        prism_votes.push(("pattern", witness.is_some()));
        boolean_votes.push(("pattern", patterns::is_boolean_by_pattern(w)));
        witnesses.pattern = witness;
    }
    if methods.poset {
        let (is_prism, witness) = classify_by_poset(w)?;
        prism_votes.push(("poset", is_prism));
        boolean_votes.push(("poset", posets::is_boolean_ideal(w)?));
        witnesses.poset = witness.map(|(i, factor)| PosetWitness { i, factor });
    }

    let is_prism = prism_votes[0].1;
    if prism_votes.iter().any(|&(_, vote)| vote != is_prism) {
        return Err(Error::Verification(format!("prism classifiers disagree on {w}: {prism_votes:?}")));
    }
    let is_boolean = boolean_votes[0].1;
    if boolean_votes.iter().any(|&(_, vote)| vote != is_boolean) {
        return Err(Error::Verification(format!(
            "boolean classifiers disagree on {w}: {boolean_votes:?}"
        )));
    }

    Ok(ClassificationRecord {
        perm: w.clone(),
        is_boolean,
        is_prism,
        unconfined,
        degree_d,
        core,
        witnesses,
    })
}

/// Downward propagation inside an ideal: with `i` unconfined in the top
/// element, every member either omits `i` from its support or has it
/// unconfined. Used by the test suites; kept here because it documents the
/// structure `verify_prism_iso` relies on.
pub fn unconfined_propagates(i: usize, bw: &Poset<Permutation>) -> bool {
    bw.elements().iter().all(|u| {
        !(i < u.size() && u.in_support(i)) || words::unconfined_letters(u).contains(&i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn reduced_word_classifier() {
        assert_eq!(classify_by_reduced_word(&p("2431")), (true, [1].into_iter().collect()));
        assert_eq!(classify_by_reduced_word(&p("4321")), (false, BTreeSet::new()));
        assert_eq!(classify_by_reduced_word(&p("2143")), (true, [1, 3].into_iter().collect()));
    }

    #[test]
    fn pattern_classifier() {
        let (is_prism, witnesses) = classify_by_pattern(&p("2431"));
        assert!(is_prism);
        assert_eq!(witnesses[0].i, 1);
        assert_eq!(witnesses[0].pattern, "P3");
        assert_eq!(witnesses[0].occurrence.positions, vec![1, 4]);
        assert_eq!(witnesses[0].occurrence.values, vec![2, 1]);

        let first = first_pattern_witness(&p("4213")).unwrap();
        assert_eq!((first.i, first.pattern.as_str()), (3, "P1"));
        assert_eq!(first.occurrence.positions, vec![1, 4]);
        assert_eq!(first.occurrence.values, vec![4, 3]);

        let (is_prism, witnesses) = classify_by_pattern(&p("41235"));
        assert!(is_prism);
        assert!(witnesses
            .iter()
            .any(|wit| wit.i == 2
                && wit.pattern == "P5"
                && wit.occurrence.positions == vec![1, 2, 3, 4]
                && wit.occurrence.values == vec![4, 1, 2, 3]));

        assert!(!classify_by_pattern(&p("3412")).0);
        assert!(first_pattern_witness(&p("1432")).is_none());
    }

    #[test]
    fn poset_classifier() {
        assert_eq!(classify_by_poset(&p("2431")).unwrap(), (true, Some((1, p("1432")))));
        assert_eq!(classify_by_poset(&p("1432")).unwrap(), (false, None));
        assert_eq!(
            classify_by_poset(&Permutation::identity(4).unwrap()).unwrap(),
            (false, None)
        );
    }

    #[test]
    fn degrees_and_cores() {
        assert_eq!(boolean_degree(&p("2431")).unwrap(), (1, p("1432")));
        assert_eq!(boolean_degree(&p("2143")).unwrap(), (2, Permutation::identity(4).unwrap()));
        assert_eq!(boolean_degree(&p("4321")).unwrap(), (0, p("4321")));
    }

    #[test]
    fn explicit_isomorphism() {
        assert!(verify_prism_iso(&p("2431"), 1).unwrap());
        assert!(verify_prism_iso(&p("4213"), 3).unwrap());
        assert!(verify_prism_iso(&p("2143"), 1).unwrap());
        assert!(verify_prism_iso(&p("2143"), 3).unwrap());
        assert!(matches!(verify_prism_iso(&p("2431"), 2), Err(Error::NotUnconfined(2))));
    }

    #[test]
    fn classify_records() {
        let rec = classify(&p("2431"), MethodSet::ALL).unwrap();
        assert!(!rec.is_boolean);
        assert!(rec.is_prism);
        assert_eq!(rec.unconfined, [1].into_iter().collect());
        assert_eq!(rec.degree_d, 1);
        assert_eq!(rec.core, p("1432"));
        assert!(rec.witnesses.rw.is_some());
        assert!(rec.witnesses.pattern.is_some());
        assert_eq!(rec.witnesses.poset, Some(PosetWitness { i: 1, factor: p("1432") }));

        let rec = classify(&p("2341"), MethodSet::FAST).unwrap();
        assert!(rec.is_boolean);
        assert!(rec.is_prism);

        let rec = classify(&p("3412"), MethodSet::ALL).unwrap();
        assert!(!rec.is_boolean);
        assert!(!rec.is_prism);
        assert!(rec.witnesses.pattern.is_none());
    }

    #[test]
    fn identity_record() {
        let id = Permutation::identity(5).unwrap();
        let rec = classify(&id, MethodSet::ALL).unwrap();
        assert!(rec.is_boolean);
        assert!(!rec.is_prism);
        assert_eq!(rec.degree_d, 0);
        assert_eq!(rec.core, id);
    }

    #[test]
    fn record_serialization() {
        let rec = classify(&p("2431"), MethodSet::FAST).unwrap();
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["perm"], "2431");
        assert_eq!(json["is_prism"], true);
        assert_eq!(json["degree_d"], 1);
        assert_eq!(json["core"], "1432");
        assert_eq!(json["unconfined"][0], 1);
        assert!(json["witnesses"].get("poset").is_none());
    }

    #[test]
    fn method_set_parsing() {
        assert_eq!("rw,pattern".parse::<MethodSet>().unwrap(), MethodSet::FAST);
        assert_eq!("rw,pattern,poset".parse::<MethodSet>().unwrap(), MethodSet::ALL);
        assert!("nope".parse::<MethodSet>().is_err());
    }
}
