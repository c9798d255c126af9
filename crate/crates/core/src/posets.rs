//! Bruhat order, principal order ideals, poset products, isomorphism
//! testing, and the poset-side prism and boolean oracles.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on the number of elements of a principal order ideal.
pub const DEFAULT_IDEAL_CAP: usize = 50_000;

/// Default cap on poset sizes accepted by [`isomorphic`].
pub const DEFAULT_ISO_CAP: usize = 20_000;

/// A finite graded poset given by its cover relations.
///
/// Invariants enforced at construction: every cover raises the rank by
/// exactly one (so the covers form a DAG), and there is a unique minimal
/// element.
#[derive(Clone, Debug)]
pub struct Poset<L> {
    elements: Vec<L>,
    ranks: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    cover_count: usize,
}

impl<L> Poset<L> {
    pub fn new(elements: Vec<L>, ranks: Vec<usize>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidPoset("no elements".into()));
        }
        if ranks.len() != n {
            return Err(Error::InvalidPoset("rank vector length mismatch".into()));
        }
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
        let dedup: BTreeSet<(usize, usize)> = covers.iter().copied().collect();
        for &(lo, hi) in &dedup {
            if lo >= n || hi >= n {
                return Err(Error::InvalidPoset(format!("cover ({lo},{hi}) out of bounds")));
            }
            if ranks[hi] != ranks[lo] + 1 {
                return Err(Error::InvalidPoset(format!(
                    "cover ({lo},{hi}) changes rank by more than one"
                )));
            }
            up[lo].push(hi);
            down[hi].push(lo);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }
        let minima = (0..n).filter(|&v| down[v].is_empty()).count();
        if minima != 1 {
            return Err(Error::InvalidPoset(format!("{minima} minimal elements, expected 1")));
        }
        Ok(Poset { elements, ranks, up, down, cover_count: dedup.len() })
    }

    pub fn singleton(label: L) -> Poset<L> {
        Poset {
            elements: vec![label],
            ranks: vec![0],
            up: vec![Vec::new()],
            down: vec![Vec::new()],
            cover_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, v: usize) -> &L {
        &self.elements[v]
    }

    pub fn elements(&self) -> &[L] {
        &self.elements
    }

    pub fn rank(&self, v: usize) -> usize {
        self.ranks[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn up_covers(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    pub fn down_covers(&self, v: usize) -> &[usize] {
        &self.down[v]
    }

    /// Cover pairs `(lower, upper)`.
    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up.iter().enumerate().flat_map(|(v, us)| us.iter().map(move |&u| (v, u)))
    }

    pub fn cover_count(&self) -> usize {
        self.cover_count
    }

    pub fn height(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Number of elements at each rank, indexed from rank 0.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.height() + 1];
        for &r in &self.ranks {
            sizes[r] += 1;
        }
        sizes
    }

    /// Index of the unique minimal element.
    pub fn minimum(&self) -> usize {
        (0..self.len()).find(|&v| self.down[v].is_empty()).expect("validated at construction")
    }
}

/// The two-element chain.
pub fn chain2() -> Poset<u8> {
    Poset::new(vec![0, 1], vec![0, 1], &[(0, 1)]).expect("chain is valid")
}

/// Direct product with componentwise order. The element `(p_i, q_j)` sits at
/// index `i * q.len() + j`, and covers change exactly one coordinate by a
/// cover of its factor.
pub fn product<A: Clone, B: Clone>(p: &Poset<A>, q: &Poset<B>) -> Poset<(A, B)> {
    let qn = q.len();
    let mut elements = Vec::with_capacity(p.len() * qn);
    let mut ranks = Vec::with_capacity(p.len() * qn);
    for i in 0..p.len() {
        for j in 0..qn {
            elements.push((p.element(i).clone(), q.element(j).clone()));
            ranks.push(p.rank(i) + q.rank(j));
        }
    }
    let mut covers = Vec::with_capacity(p.cover_count() * qn + q.cover_count() * p.len());
    for (a, b) in p.covers() {
        for j in 0..qn {
            covers.push((a * qn + j, b * qn + j));
        }
    }
    for (c, d) in q.covers() {
        for i in 0..p.len() {
            covers.push((i * qn + c, i * qn + d));
        }
    }
    Poset::new(elements, ranks, &covers).expect("product of valid posets is valid")
}

/// Bruhat comparison by the prefix-dominance criterion: `v ≼ w` iff for every
/// `k`, the sorted prefix `{v(1..k)}` is entrywise at most the sorted prefix
/// `{w(1..k)}`.
pub fn bruhat_leq(v: &Permutation, w: &Permutation) -> Result<bool> {
    if v.size() != w.size() {
        return Err(Error::SizeMismatch { left: v.size(), right: w.size() });
    }
    let n = v.size();
    let mut sv: Vec<usize> = Vec::with_capacity(n);
    let mut sw: Vec<usize> = Vec::with_capacity(n);
    for k in 1..=n {
        let (a, b) = (v.value(k), w.value(k));
        sv.insert(sv.partition_point(|&x| x < a), a);
        sw.insert(sw.partition_point(|&x| x < b), b);
        if sv.iter().zip(&sw).any(|(x, y)| x > y) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The principal order ideal `B(w)` with its Hasse covers, built by downward
/// closure: from each element, apply every transposition that drops the
/// length by exactly one. Elements are sorted by (rank, one-line notation).
pub fn ideal(w: &Permutation) -> Result<Poset<Permutation>> {
    ideal_capped(w, DEFAULT_IDEAL_CAP)
}

pub fn ideal_capped(w: &Permutation, cap: usize) -> Result<Poset<Permutation>> {
    if cap == 0 {
        return Err(Error::CapExceeded { what: "|B(w)|", cap });
    }
    let n = w.size();
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    let mut elements: Vec<Permutation> = vec![w.clone()];
    let mut lengths: Vec<usize> = vec![w.inversions()];
    index.insert(w.clone(), 0);
    let mut covers: Vec<(usize, usize)> = Vec::new();

    let mut head = 0;
    while head < elements.len() {
        let u = elements[head].clone();
        for a in 1..n {
            for b in a + 1..=n {
                let (va, vb) = (u.value(a), u.value(b));
                if va <= vb {
                    continue;
                }
                // u · t(a,b) is a cover step iff no value strictly between
                // sits strictly between the two positions
                if (a + 1..b).any(|c| {
                    let vc = u.value(c);
                    vb < vc && vc < va
                }) {
                    continue;
                }
                let v = u.with_positions_swapped(a, b);
                let vi = match index.get(&v) {
                    Some(&vi) => vi,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { what: "|B(w)|", cap });
                        }
                        let vi = elements.len();
                        index.insert(v.clone(), vi);
                        elements.push(v);
                        lengths.push(lengths[head] - 1);
                        vi
                    }
                };
                covers.push((vi, head));
            }
        }
        head += 1;
    }

    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&x, &y| (lengths[x], &elements[x]).cmp(&(lengths[y], &elements[y])));
    let mut newpos = vec![0usize; elements.len()];
    for (new, &old) in order.iter().enumerate() {
        newpos[old] = new;
    }
    let sorted_elements: Vec<Permutation> = order.iter().map(|&o| elements[o].clone()).collect();
    let sorted_ranks: Vec<usize> = order.iter().map(|&o| lengths[o]).collect();
    let remapped: Vec<(usize, usize)> =
        covers.iter().map(|&(lo, hi)| (newpos[lo], newpos[hi])).collect();
    Poset::new(sorted_elements, sorted_ranks, &remapped)
}

/// Order isomorphism via color refinement and cover-preserving backtracking.
pub fn isomorphic<A, B>(p: &Poset<A>, q: &Poset<B>) -> Result<bool> {
    isomorphic_capped(p, q, DEFAULT_ISO_CAP)
}

pub fn isomorphic_capped<A, B>(p: &Poset<A>, q: &Poset<B>, cap: usize) -> Result<bool> {
    if p.len() > cap || q.len() > cap {
        return Err(Error::CapExceeded { what: "poset size for isomorphism", cap });
    }
    if p.len() != q.len()
        || p.cover_count() != q.cover_count()
        || p.rank_sizes() != q.rank_sizes()
    {
        return Ok(false);
    }
    let (colors_p, colors_q) = match refine_colors(p, q) {
        Some(pair) => pair,
        None => return Ok(false),
    };
    Ok(find_mapping(p, q, &colors_p, &colors_q))
}

/// Shared-palette color refinement on (rank, degrees, neighbor colors).
/// Returns `None` as soon as the color class sizes diverge.
fn refine_colors<A, B>(p: &Poset<A>, q: &Poset<B>) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = p.len();
    let mut palette: HashMap<(usize, usize, usize), u32> = HashMap::new();
    let mut assign_initial = |poset_ranks: &[usize], up: &dyn Fn(usize) -> usize, down: &dyn Fn(usize) -> usize| -> Vec<u32> {
        (0..n)
            .map(|v| {
                let key = (poset_ranks[v], up(v), down(v));
                let next = palette.len() as u32;
                *palette.entry(key).or_insert(next)
            })
            .collect()
    };
    let mut colors_p = assign_initial(p.ranks(), &|v| p.up_covers(v).len(), &|v| p.down_covers(v).len());
    let mut colors_q = assign_initial(q.ranks(), &|v| q.up_covers(v).len(), &|v| q.down_covers(v).len());
    if !class_sizes_match(&colors_p, &colors_q) {
        return None;
    }

    let mut distinct = count_distinct(&colors_p);
    loop {
        let mut palette: HashMap<(u32, Vec<u32>, Vec<u32>), u32> = HashMap::new();
        let mut next = |colors: &[u32], up: &[Vec<usize>], down: &[Vec<usize>]| -> Vec<u32> {
            (0..n)
                .map(|v| {
                    let mut ups: Vec<u32> = up[v].iter().map(|&u| colors[u]).collect();
                    let mut downs: Vec<u32> = down[v].iter().map(|&u| colors[u]).collect();
                    ups.sort_unstable();
                    downs.sort_unstable();
                    let key = (colors[v], ups, downs);
                    let fresh = palette.len() as u32;
                    *palette.entry(key).or_insert(fresh)
                })
                .collect()
        };
        let new_p = next(&colors_p, &p.up, &p.down);
        let new_q = next(&colors_q, &q.up, &q.down);
        if !class_sizes_match(&new_p, &new_q) {
            return None;
        }
        let new_distinct = count_distinct(&new_p);
        colors_p = new_p;
        colors_q = new_q;
        if new_distinct == distinct {
            return Some((colors_p, colors_q));
        }
        distinct = new_distinct;
    }
}

fn class_sizes_match(a: &[u32], b: &[u32]) -> bool {
    let mut ca: HashMap<u32, usize> = HashMap::new();
    let mut cb: HashMap<u32, usize> = HashMap::new();
    for &c in a {
        *ca.entry(c).or_default() += 1;
    }
    for &c in b {
        *cb.entry(c).or_default() += 1;
    }
    ca == cb
}

fn count_distinct(colors: &[u32]) -> usize {
    let set: BTreeSet<u32> = colors.iter().copied().collect();
    set.len()
}

/// Bottom-up backtracking. Vertices are placed in rank order, so all
/// down-covers of the vertex being placed are mapped already; checking cover
/// preservation in both directions at each placement makes a completed map a
/// cover bijection, hence an order isomorphism.
fn find_mapping<A, B>(
    p: &Poset<A>,
    q: &Poset<B>,
    colors_p: &[u32],
    colors_q: &[u32],
) -> bool {
    let n = p.len();
    let mut class_size: HashMap<u32, usize> = HashMap::new();
    for &c in colors_p {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (p.rank(v), class_size[&colors_p[v]], v));
    let mut by_color: HashMap<u32, Vec<usize>> = HashMap::new();
    for x in 0..n {
        by_color.entry(colors_q[x]).or_default().push(x);
    }

    let mut f: Vec<Option<usize>> = vec![None; n];
    let mut g: Vec<Option<usize>> = vec![None; n];

    fn place<A, B>(
        step: usize,
        order: &[usize],
        p: &Poset<A>,
        q: &Poset<B>,
        by_color: &HashMap<u32, Vec<usize>>,
        colors_p: &[u32],
        f: &mut Vec<Option<usize>>,
        g: &mut Vec<Option<usize>>,
    ) -> bool {
        if step == order.len() {
            return true;
        }
        let v = order[step];
        let Some(candidates) = by_color.get(&colors_p[v]) else {
            return false;
        };
        'cands: for &x in candidates {
            if g[x].is_some() {
                continue;
            }
            for &u in p.down_covers(v) {
                let fu = f[u].expect("lower ranks are placed first");
                if q.down_covers(x).binary_search(&fu).is_err() {
                    continue 'cands;
                }
            }
            for &y in q.down_covers(x) {
                match g[y] {
                    Some(u) => {
                        if p.down_covers(v).binary_search(&u).is_err() {
                            continue 'cands;
                        }
                    }
                    None => continue 'cands,
                }
            }
            f[v] = Some(x);
            g[x] = Some(v);
            if place(step + 1, order, p, q, by_color, colors_p, f, g) {
                return true;
            }
            f[v] = None;
            g[x] = None;
        }
        false
    }

    place(0, &order, p, q, &by_color, colors_p, &mut f, &mut g)
}

/// Boolean test on the ideal: `B(w)` is graded with `ℓ(w)+1` ranks, so it is
/// a boolean algebra exactly when it has `2^ℓ(w)` elements.
pub fn is_boolean_ideal(w: &Permutation) -> Result<bool> {
    let ell = w.inversions();
    let bw = ideal(w)?;
    if ell >= 64 {
        return Ok(false);
    }
    Ok(bw.len() as u128 == 1u128 << ell)
}

/// Searches for the decomposition `B(w) ≅ chain2 × B(v)` among the coatoms
/// `v` of `B(w)` whose support drops exactly one generator, returning the
/// dropped generator and the factor. Coatoms are tried in one-line
/// lexicographic order.
pub fn prism_oracle(w: &Permutation) -> Result<Option<(usize, Permutation)>> {
    let bw = ideal(w)?;
    prism_oracle_on(w, &bw)
}

pub(crate) fn prism_oracle_on(
    w: &Permutation,
    bw: &Poset<Permutation>,
) -> Result<Option<(usize, Permutation)>> {
    if w.is_identity() {
        return Ok(None);
    }
    let top = bw.len() - 1;
    debug_assert_eq!(bw.element(top), w);
    let supp_w = w.support();
    for &ci in bw.down_covers(top) {
        let v = bw.element(ci).clone();
        let supp_v = v.support();
        if supp_v.len() + 1 != supp_w.len() || !supp_v.is_subset(&supp_w) {
            continue;
        }
        let i = *supp_w.difference(&supp_v).next().expect("difference is a singleton");
        let bv = ideal(&v)?;
        if bw.len() != 2 * bv.len() {
            continue;
        }
        // a chain2 product has rank sizes r(j) + r(j-1)
        let rs_v = bv.rank_sizes();
        let mut expected = vec![0usize; rs_v.len() + 1];
        for (r, &c) in rs_v.iter().enumerate() {
            expected[r] += c;
            expected[r + 1] += c;
        }
        if expected != bw.rank_sizes() {
            continue;
        }
        if isomorphic(bw, &product(&chain2(), &bv))? {
            return Ok(Some((i, v)));
        }
    }
    Ok(None)
}
