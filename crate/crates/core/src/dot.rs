//! DOT emission for Hasse diagrams of Bruhat ideals.
//!
//! Nodes are labeled with one-line notation. Boolean permutations get a
//! thick ring (`penwidth=2`), prisms a double ring (`peripheries=2`); a
//! non-identity boolean permutation carries both. Output is stable across
//! runs: elements come out of [`posets::ideal`] canonically sorted.

use std::fmt::Write as _;

use crate::error::Result;
use crate::perm::Permutation;
use crate::posets;
use crate::prism;

pub fn ideal_dot(w: &Permutation) -> Result<String> {
    let bw = posets::ideal(w)?;
    let mut out = String::new();
    out.push_str("digraph bruhat_ideal {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for v in 0..bw.len() {
        let u = bw.element(v);
        let mut attrs: Vec<&str> = Vec::new();
        if prism::is_boolean_by_word(u) {
            attrs.push("penwidth=2");
        }
        if prism::classify_by_reduced_word(u).0 {
            attrs.push("peripheries=2");
        }
        if attrs.is_empty() {
            writeln!(out, "  \"{u}\";").expect("write to string");
        } else {
            writeln!(out, "  \"{u}\" [{}];", attrs.join(", ")).expect("write to string");
        }
    }
    for (lo, hi) in bw.covers() {
        writeln!(out, "  \"{}\" -> \"{}\";", bw.element(lo), bw.element(hi))
            .expect("write to string");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_markings() {
        let dot = ideal_dot(&"2431".parse().unwrap()).unwrap();
        assert!(dot.starts_with("digraph"));
        // B(2431) has 12 elements: ten booleans, the prism 2431 itself, and
        // 1432 which is neither
        assert_eq!(dot.matches("penwidth=2").count(), 10);
        assert_eq!(dot.matches("peripheries=2").count(), 10);
        assert!(dot.contains("\"1432\";"));
        assert!(dot.contains("\"2431\" [peripheries=2];"));
        assert!(dot.contains("\"1432\" -> \"2431\";"));

        // bit-stable
        assert_eq!(dot, ideal_dot(&"2431".parse().unwrap()).unwrap());
    }
}
