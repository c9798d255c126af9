//! Occurrence engine for classical, mesh, and calibrated mesh patterns.
//!
//! A mesh pattern is a small permutation `p ∈ S_k` drawn on the grid
//! `[0, k+1]²` together with a set of shaded cells. Cell `(a, b)` with
//! `0 ≤ a, b ≤ k` denotes the open box between the `a`-th and `(a+1)`-th
//! chosen positions and the `b`-th and `(b+1)`-th smallest chosen values,
//! with sentinels `x_0 = y_0 = 0` and `x_{k+1} = y_{k+1} = n+1`. An
//! occurrence must keep every shaded box free of points of the host.
//!
//! A calibrated mesh pattern additionally pins columns to absolute positions
//! and value ranks to absolute values in the host permutation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshPattern {
    p: Permutation,
    mesh: BTreeSet<(usize, usize)>,
}

impl MeshPattern {
    pub fn new(p: Permutation, mesh: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let k = p.size();
        let mesh: BTreeSet<(usize, usize)> = mesh.into_iter().collect();
        for &(a, b) in &mesh {
            if a > k || b > k {
                return Err(Error::InvalidPattern(format!(
                    "mesh cell ({a},{b}) outside [0,{k}]²"
                )));
            }
        }
        Ok(MeshPattern { p, mesh })
    }

    pub fn classical(p: Permutation) -> Self {
        MeshPattern { p, mesh: BTreeSet::new() }
    }

    pub fn pattern(&self) -> &Permutation {
        &self.p
    }

    pub fn mesh(&self) -> &BTreeSet<(usize, usize)> {
        &self.mesh
    }
}

/// A mesh pattern with absolute pins. `pos_cal` maps a column index in
/// `[1, k]` to the position the column must occupy in the host; `val_cal`
/// maps a value rank in `[1, k]` to the absolute value that rank must take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibratedMeshPattern {
    base: MeshPattern,
    pos_cal: BTreeMap<usize, usize>,
    val_cal: BTreeMap<usize, usize>,
}

impl CalibratedMeshPattern {
    pub fn new(
        base: MeshPattern,
        pos_cal: BTreeMap<usize, usize>,
        val_cal: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        let k = base.p.size();
        for (cal, kind) in [(&pos_cal, "position"), (&val_cal, "value")] {
            let mut last = 0usize;
            for (&key, &pin) in cal.iter() {
                if key < 1 || key > k {
                    return Err(Error::InvalidPattern(format!(
                        "{kind} calibration key {key} outside [1,{k}]"
                    )));
                }
                if pin < 1 {
                    return Err(Error::InvalidPattern(format!("{kind} pin {pin} must be positive")));
                }
                if pin <= last {
                    return Err(Error::InvalidPattern(format!(
                        "{kind} pins must be strictly increasing"
                    )));
                }
                last = pin;
            }
        }
        Ok(CalibratedMeshPattern { base, pos_cal, val_cal })
    }

    pub fn classical(p: Permutation) -> Self {
        CalibratedMeshPattern {
            base: MeshPattern::classical(p),
            pos_cal: BTreeMap::new(),
            val_cal: BTreeMap::new(),
        }
    }

    pub fn mesh_only(base: MeshPattern) -> Self {
        CalibratedMeshPattern { base, pos_cal: BTreeMap::new(), val_cal: BTreeMap::new() }
    }

    pub fn base(&self) -> &MeshPattern {
        &self.base
    }

    pub fn pos_cal(&self) -> &BTreeMap<usize, usize> {
        &self.pos_cal
    }

    pub fn val_cal(&self) -> &BTreeMap<usize, usize> {
        &self.val_cal
    }

    fn k(&self) -> usize {
        self.base.p.size()
    }
}

/// One occurrence: the chosen positions `x_1 < … < x_k` and their values in
/// position order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub positions: Vec<usize>,
    pub values: Vec<usize>,
}

/// All occurrences of `c` in `w`, in lexicographic order of their position
/// vectors. A pattern longer than the host, or a pin outside `[1, n]`,
/// yields the empty list.
pub fn occurrences(w: &Permutation, c: &CalibratedMeshPattern) -> Vec<Occurrence> {
    search(w, c, None)
}

/// First occurrence in lexicographic position order, if any.
pub fn first_occurrence(w: &Permutation, c: &CalibratedMeshPattern) -> Option<Occurrence> {
    search(w, c, Some(1)).pop()
}

pub fn contains(w: &Permutation, c: &CalibratedMeshPattern) -> bool {
    first_occurrence(w, c).is_some()
}

fn search(w: &Permutation, c: &CalibratedMeshPattern, limit: Option<usize>) -> Vec<Occurrence> {
    let n = w.size();
    let k = c.k();
    let mut out = Vec::new();
    if k > n {
        return out;
    }

    // Per-column constraints. A value pin on rank r lands on the column
    // whose pattern value is r, so both kinds of pin fix one column.
    let mut pin_pos: Vec<Option<usize>> = vec![None; k];
    for (&col, &pos) in &c.pos_cal {
        if pos > n {
            return out;
        }
        pin_pos[col - 1] = Some(pos);
    }
    let mut pin_val: Vec<Option<usize>> = vec![None; k];
    for (&rank, &val) in &c.val_cal {
        if val > n {
            return out;
        }
        pin_val[c.base.p.position_of(rank) - 1] = Some(val);
    }

    let host: Vec<usize> = w.one_line().collect();
    let mut pos_of = vec![0usize; n + 1];
    for (x, &v) in host.iter().enumerate() {
        pos_of[v] = x + 1;
    }
    let pat: Vec<usize> = c.base.p.one_line().collect();

    let mut xs: Vec<usize> = Vec::with_capacity(k);
    extend(&host, &pos_of, &pat, &pin_pos, &pin_val, &c.base.mesh, &mut xs, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    host: &[usize],
    pos_of: &[usize],
    pat: &[usize],
    pin_pos: &[Option<usize>],
    pin_val: &[Option<usize>],
    mesh: &BTreeSet<(usize, usize)>,
    xs: &mut Vec<usize>,
    out: &mut Vec<Occurrence>,
    limit: Option<usize>,
) -> bool {
    let n = host.len();
    let k = pat.len();
    let j = xs.len();
    if j == k {
        if mesh_clear(host, xs, mesh) {
            let values = xs.iter().map(|&x| host[x - 1]).collect();
            out.push(Occurrence { positions: xs.clone(), values });
            if limit.is_some_and(|cap| out.len() >= cap) {
                return true;
            }
        }
        return false;
    }

    let lo = xs.last().map_or(1, |&x| x + 1);
    let hi = n - (k - j - 1);
    // a pinned column has a single candidate position
    let (start, end) = match (pin_pos[j], pin_val[j]) {
        (Some(p), _) => (p, p),
        (None, Some(v)) => (pos_of[v], pos_of[v]),
        (None, None) => (lo, hi),
    };
    for x in start.max(lo)..=end.min(hi) {
        let vx = host[x - 1];
        if pin_val[j].is_some_and(|v| v != vx) {
            continue;
        }
        let iso = xs
            .iter()
            .enumerate()
            .all(|(t, &xt)| (pat[t] < pat[j]) == (host[xt - 1] < vx));
        if !iso {
            continue;
        }
        xs.push(x);
        let stop = extend(host, pos_of, pat, pin_pos, pin_val, mesh, xs, out, limit);
        xs.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Checks every shaded cell's open box for host points; bails on the first
/// violation.
fn mesh_clear(host: &[usize], xs: &[usize], mesh: &BTreeSet<(usize, usize)>) -> bool {
    if mesh.is_empty() {
        return true;
    }
    let n = host.len();
    let k = xs.len();
    let mut ys: Vec<usize> = xs.iter().map(|&x| host[x - 1]).collect();
    ys.sort_unstable();
    let xline = |a: usize| if a == 0 { 0 } else if a <= k { xs[a - 1] } else { n + 1 };
    let yline = |b: usize| if b == 0 { 0 } else if b <= k { ys[b - 1] } else { n + 1 };
    for &(a, b) in mesh {
        let (xlo, xhi) = (xline(a), xline(a + 1));
        let (ylo, yhi) = (yline(b), yline(b + 1));
        for t in xlo + 1..xhi {
            let v = host[t - 1];
            if v > ylo && v < yhi {
                return false;
            }
        }
    }
    true
}

fn small_perm(values: &[usize]) -> Permutation {
    Permutation::from_one_line(values).expect("catalog pattern is valid")
}

fn calibrated(
    p: &[usize],
    mesh: &[(usize, usize)],
    pos_cal: &[(usize, usize)],
    val_cal: &[(usize, usize)],
) -> CalibratedMeshPattern {
    CalibratedMeshPattern::new(
        MeshPattern::new(small_perm(p), mesh.iter().copied()).expect("catalog mesh is valid"),
        pos_cal.iter().copied().collect(),
        val_cal.iter().copied().collect(),
    )
    .expect("catalog calibration is valid")
}

const ROW_BAND: [(usize, usize); 5] = [(0, 2), (1, 2), (2, 2), (3, 2), (4, 2)];
const COL_BAND: [(usize, usize); 5] = [(2, 0), (2, 1), (2, 2), (2, 3), (2, 4)];
const LOW_RIGHT_BLOCK: [(usize, usize); 6] = [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2)];
const UP_LEFT_BLOCK: [(usize, usize); 6] = [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)];

/// The eight calibrated patterns whose containment (for some `i`) is
/// equivalent to being a prism, instantiated at parameter `i ≥ 1` and listed
/// in order `P1..P8`.
pub fn prism_catalog(i: usize) -> Vec<CalibratedMeshPattern> {
    assert!(i >= 1, "catalog parameter must be at least 1");
    let band4 = |extra: &[(usize, usize)]| -> Vec<(usize, usize)> {
        ROW_BAND.iter().chain(COL_BAND.iter()).chain(extra.iter()).copied().collect()
    };
    let both: Vec<(usize, usize)> =
        LOW_RIGHT_BLOCK.iter().chain(UP_LEFT_BLOCK.iter()).copied().collect();
    vec![
        calibrated(
            &[2, 1],
            &[(0, 1), (1, 1), (2, 1), (2, 0)],
            &[(2, i + 1)],
            &[(2, i + 1)],
        ),
        calibrated(
            &[2, 1],
            &[(1, 0), (1, 1), (1, 2), (0, 2)],
            &[(2, i + 1)],
            &[(2, i + 1)],
        ),
        calibrated(&[2, 1], &[(0, 1), (1, 1), (2, 1), (0, 2)], &[(1, i)], &[(1, i)]),
        calibrated(&[2, 1], &[(1, 0), (1, 1), (1, 2), (2, 0)], &[(1, i)], &[(1, i)]),
        calibrated(&[4, 1, 2, 3], &band4(&LOW_RIGHT_BLOCK), &[(2, i)], &[(2, i)]),
        calibrated(&[2, 3, 4, 1], &band4(&UP_LEFT_BLOCK), &[(2, i)], &[(2, i)]),
        calibrated(&[3, 1, 4, 2], &band4(&both), &[(2, i)], &[(2, i)]),
        calibrated(&[2, 4, 1, 3], &band4(&both), &[(2, i)], &[(2, i)]),
    ]
}

/// The four band-only 21 patterns forced when at most one of `i±1` lies in
/// the support, in display order `A1..A4`.
pub fn proposition_catalog(i: usize) -> Vec<CalibratedMeshPattern> {
    assert!(i >= 1, "catalog parameter must be at least 1");
    vec![
        calibrated(&[2, 1], &[(0, 1), (1, 1), (2, 1)], &[(2, i + 1)], &[(2, i + 1)]),
        calibrated(&[2, 1], &[(1, 0), (1, 1), (1, 2)], &[(2, i + 1)], &[(2, i + 1)]),
        calibrated(&[2, 1], &[(0, 1), (1, 1), (2, 1)], &[(1, i)], &[(1, i)]),
        calibrated(&[2, 1], &[(1, 0), (1, 1), (1, 2)], &[(1, i)], &[(1, i)]),
    ]
}

/// Looks up a catalog pattern by name: `P1..P8` or `A1..A4`.
pub fn catalog_pattern(name: &str, i: usize) -> Option<CalibratedMeshPattern> {
    let idx: usize = name[1..].parse().ok()?;
    match name.as_bytes().first()? {
        b'P' if (1..=8).contains(&idx) => Some(prism_catalog(i).swap_remove(idx - 1)),
        b'A' if (1..=4).contains(&idx) => Some(proposition_catalog(i).swap_remove(idx - 1)),
        _ => None,
    }
}

/// Boolean test by classical pattern avoidance: `w` avoids both 321 and 3412.
pub fn is_boolean_by_pattern(w: &Permutation) -> bool {
    !contains(w, &CalibratedMeshPattern::classical(small_perm(&[3, 2, 1])))
        && !contains(w, &CalibratedMeshPattern::classical(small_perm(&[3, 4, 1, 2])))
}

/// On-disk pattern description:
/// `{ "pattern": [2,1], "mesh": [[0,1]], "pos_cal": {"2": 4}, "val_cal": {"2": 4} }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternFile {
    pub pattern: Vec<usize>,
    #[serde(default)]
    pub mesh: Vec<(usize, usize)>,
    #[serde(default)]
    pub pos_cal: BTreeMap<String, usize>,
    #[serde(default)]
    pub val_cal: BTreeMap<String, usize>,
}

impl PatternFile {
    pub fn parse_json(text: &str) -> Result<CalibratedMeshPattern> {
        let file: PatternFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("pattern json: {e}")))?;
        file.build()
    }

    pub fn build(&self) -> Result<CalibratedMeshPattern> {
        let p = Permutation::from_one_line(&self.pattern)?;
        let base = MeshPattern::new(p, self.mesh.iter().copied())?;
        let keyed = |m: &BTreeMap<String, usize>| -> Result<BTreeMap<usize, usize>> {
            m.iter()
                .map(|(k, &v)| {
                    k.parse::<usize>()
                        .map(|key| (key, v))
                        .map_err(|_| Error::Parse(format!("calibration key {k:?}")))
                })
                .collect()
        };
        CalibratedMeshPattern::new(base, keyed(&self.pos_cal)?, keyed(&self.val_cal)?)
    }
}
