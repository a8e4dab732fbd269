//! Representations of multiples of one ternary form by another, the
//! correspondences they induce between genera, the explicit ascent/descent
//! maps between canonical shapes, and involution scans.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::enumerate::{canonical, reduce, shell, vectors_up_to};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::SpinorPartition;
use crate::lattice::{self, BasisChange, Mat3, Vector};

/// A witness `P` with `Pᵀ·Gram(source)·P = k·Gram(target)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepMatrix {
    pub p: Mat3,
    pub source: TernaryForm,
    pub target: TernaryForm,
    pub k: u64,
}

impl RepMatrix {
    pub fn new(p: Mat3, source: TernaryForm, target: TernaryForm, k: u64) -> Result<Self> {
        let m = RepMatrix { p, source, target, k };
        if !m.verify() {
            return Err(Error::usage(format!("matrix {p:?} does not carry {source} to {k}·{target}")));
        }
        Ok(m)
    }

    pub fn verify(&self) -> bool {
        self.source.transform(&self.p).gram() == lattice::scale(&self.target.gram(), self.k as i64)
    }

    pub fn det(&self) -> i128 {
        lattice::det(&self.p)
    }
}

/// Shell and reduction cache shared by the searches of one correspondence
/// computation.
#[derive(Default)]
pub struct RepSearch {
    shells: RwLock<HashMap<(TernaryForm, u64), Arc<Vec<Vector>>>>,
    reductions: RwLock<HashMap<TernaryForm, (TernaryForm, BasisChange)>>,
}

impl RepSearch {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, f: &TernaryForm) -> (TernaryForm, BasisChange) {
        if let Some(x) = self.reductions.read().expect("lock").get(f) {
            return *x;
        }
        let x = reduce(f);
        self.reductions.write().expect("lock").insert(*f, x);
        x
    }

    fn shell(&self, f: &TernaryForm, n: u64) -> Arc<Vec<Vector>> {
        if let Some(s) = self.shells.read().expect("lock").get(&(*f, n)) {
            return s.clone();
        }
        let mut s = shell(f, n);
        s.sort_unstable();
        let s = Arc::new(s);
        self.shells.write().expect("lock").insert((*f, n), s.clone());
        s
    }

    /// Witness matrices for "`f` represents `k·g`", at most `limit` of them
    /// (up to the overall sign of `P`).
    pub fn find(&self, f: &TernaryForm, g: &TernaryForm, k: u64, limit: usize) -> Vec<RepMatrix> {
        let (rf, uf) = self.reduce(f);
        let (rg, ug) = self.reduce(g);
        let k64 = k as i64;
        let s1 = self.shell(&rf, k * rg.a as u64);
        let s2 = self.shell(&rf, k * rg.b as u64);
        let s3 = self.shell(&rf, k * rg.c as u64);
        let back = ug.inverse();
        let mut out = Vec::new();
        for v1 in s1.iter().filter(|v| leading_positive(v)) {
            for v2 in s2.iter().filter(|v2| rf.bilinear(v1, v2) == k64 * rg.t) {
                for v3 in s3.iter() {
                    if rf.bilinear(v1, v3) != k64 * rg.s || rf.bilinear(v2, v3) != k64 * rg.r {
                        continue;
                    }
                    let p_red = lattice::from_columns(*v1, *v2, *v3);
                    let p = lattice::mul(&lattice::mul(uf.matrix(), &p_red), back.matrix());
                    out.push(RepMatrix::new(p, *f, *g, k).expect("search constraints imply the identity"));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    pub fn represents_multiple(&self, f: &TernaryForm, g: &TernaryForm, k: u64) -> Option<RepMatrix> {
        self.find(f, g, k, 1).into_iter().next()
    }

    /// Witnesses in both directions, without any discriminant-ratio condition.
    pub fn mutual(&self, f: &TernaryForm, g: &TernaryForm, k: u64) -> Option<(RepMatrix, RepMatrix)> {
        let p = self.represents_multiple(f, g, k)?;
        let q = self.represents_multiple(g, f, k)?;
        Some((p, q))
    }
}

fn leading_positive(v: &Vector) -> bool {
    v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// A witness that `f` represents `k·g`, if one exists.
pub fn represents_multiple(f: &TernaryForm, g: &TernaryForm, k: u64) -> Result<Option<RepMatrix>> {
    if k == 0 {
        return Err(Error::usage("multiplier must be positive"));
    }
    Ok(RepSearch::new().represents_multiple(f, g, k))
}

/// Every witness for "`f` represents `k·g`" up to sign, at most `limit`.
pub fn represents_multiple_all(f: &TernaryForm, g: &TernaryForm, k: u64, limit: usize) -> Result<Vec<RepMatrix>> {
    if k == 0 {
        return Err(Error::usage("multiplier must be positive"));
    }
    Ok(RepSearch::new().find(f, g, k, limit))
}

fn check_ratio(f: &TernaryForm, g: &TernaryForm, k: u64) -> Result<()> {
    let (df, dg) = (f.discriminant(), g.discriminant());
    if k == 0 || (df != k * dg && dg != k * df) {
        return Err(Error::usage(format!("discriminants {df} and {dg} do not have ratio {k}")));
    }
    Ok(())
}

/// Both directions of a correspondence between `f` and `g` whose
/// discriminants have ratio exactly `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChanPair {
    pub forward: RepMatrix,
    pub backward: RepMatrix,
    /// Whether `P·Q = k·I`, as for the adjoint pairs of the model construction.
    pub product_is_scalar: bool,
}

pub fn chan_pair(f: &TernaryForm, g: &TernaryForm, k: u64) -> Result<Option<ChanPair>> {
    check_ratio(f, g, k)?;
    Ok(RepSearch::new().mutual(f, g, k).map(|(p, q)| pair_with_diagnostic(p, q)))
}

fn pair_with_diagnostic(p: RepMatrix, q: RepMatrix) -> ChanPair {
    let k = p.k as i64;
    let product_is_scalar = lattice::mul(&p.p, &q.p) == lattice::scale(&lattice::IDENTITY, k);
    ChanPair { forward: p, backward: q, product_is_scalar }
}

/// The model pair `P = [[u,v,0],[−v,u,0],[0,0,1]]` and its adjugate `Q` for
/// `n = u² + v²`, relating `⟨1,1,16n⟩` and `⟨1,1,16⟩`.
pub fn model_matrices(u: i64, v: i64) -> (Mat3, Mat3) {
    let p = [[u, v, 0], [-v, u, 0], [0, 0, 1]];
    (p, lattice::adjugate(&p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub left: usize,
    pub right: usize,
    pub forward: RepMatrix,
    pub backward: RepMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceGraph {
    pub left: Vec<TernaryForm>,
    pub right: Vec<TernaryForm>,
    pub k: u64,
    pub edges: Vec<Edge>,
}

impl CorrespondenceGraph {
    pub fn left_degrees(&self) -> Vec<usize> {
        (0..self.left.len()).map(|i| self.edges.iter().filter(|e| e.left == i).count()).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        (0..self.right.len()).map(|j| self.edges.iter().filter(|e| e.right == j).count()).collect()
    }

    /// Every node on both sides has an edge.
    pub fn covers(&self) -> bool {
        self.left_degrees().iter().all(|&d| d > 0) && self.right_degrees().iter().all(|&d| d > 0)
    }

    pub fn has_edge(&self, f: &TernaryForm, g: &TernaryForm) -> bool {
        let (f, g) = (canonical(f), canonical(g));
        self.edges.iter().any(|e| canonical(&self.left[e.left]) == f && canonical(&self.right[e.right]) == g)
    }
}

/// All pairs `(f, g)` with `f` representing `k·g` and `g` representing `k·f`.
pub fn correspondence_graph(left: &[TernaryForm], right: &[TernaryForm], k: u64) -> Result<CorrespondenceGraph> {
    let (Some(f0), Some(g0)) = (left.first(), right.first()) else {
        return Err(Error::usage("correspondence graph needs classes on both sides"));
    };
    check_ratio(f0, g0, k)?;
    let search = RepSearch::new();
    let pairs: Vec<(usize, usize)> = (0..left.len()).flat_map(|i| (0..right.len()).map(move |j| (i, j))).collect();
    let edges = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            search.mutual(&left[i], &right[j], k).map(|(forward, backward)| Edge { left: i, right: j, forward, backward })
        })
        .collect();
    Ok(CorrespondenceGraph { left: left.to_vec(), right: right.to_vec(), k, edges })
}

/// No left block meets two right blocks through edges, and vice versa.
pub fn respects_spinor(graph: &CorrespondenceGraph, left: &SpinorPartition, right: &SpinorPartition) -> Result<bool> {
    let block = |part: &SpinorPartition, f: &TernaryForm| {
        part.block_of(f).ok_or_else(|| Error::usage(format!("class {f} is not covered by the partition")))
    };
    let mut l2r: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    let mut r2l: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for e in &graph.edges {
        let lb = block(left, &graph.left[e.left])?;
        let rb = block(right, &graph.right[e.right])?;
        l2r.entry(lb).or_default().insert(rb);
        r2l.entry(rb).or_default().insert(lb);
    }
    Ok(l2r.values().chain(r2l.values()).all(|s| s.len() == 1))
}

/// How a form was moved into a canonical shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeTrace {
    pub input: TernaryForm,
    pub prime: u64,
    /// The primitive vector placed in the basis, or `None` when the input
    /// already had the shape.
    pub vector: Option<Vector>,
    pub swapped: bool,
    pub shear_k: i64,
    pub basis_change: BasisChange,
    pub shaped: TernaryForm,
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 || !arith::is_prime(p) {
        return Err(Error::usage(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn inverse_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|x| (a.rem_euclid(p) * x) % p == 1).expect("unit modulo p")
}

pub fn in_ascent_shape(f: &TernaryForm, p: u64) -> bool {
    let p = p as i64;
    f.a % p == 0 && f.c % p == 0 && f.s % p != 0
}

pub fn in_descent_shape(g: &TernaryForm, p: u64) -> bool {
    let p = p as i64;
    g.a % (p * p) == 0 && g.b % p == 0 && g.t % p == 0 && g.s % p != 0
}

/// Smallest-value primitive vector with value divisible by `modulus`, ties
/// broken towards the lexicographically greatest vector.
fn least_vector(f: &TernaryForm, modulus: u64, max_bound: u64) -> Option<Vector> {
    let mut bound = modulus.max(4 * f.a.max(f.b).max(f.c) as u64);
    loop {
        let bound_now = bound.min(max_bound);
        let best = vectors_up_to(f, bound_now)
            .into_iter()
            .filter(|(v, n)| *n > 0 && n % modulus == 0 && lattice::is_primitive_vector(v))
            .min_by(|(v, n), (w, m)| n.cmp(m).then(w.cmp(v)));
        if let Some((v, _)) = best {
            return Some(v);
        }
        if bound_now >= max_bound {
            return None;
        }
        bound *= 2;
    }
}

fn coefficient_sum(f: &TernaryForm) -> u64 {
    (f.a + f.b + f.c + f.r.abs() + f.s.abs() + f.t.abs()) as u64
}

/// Moves `f` (with `p ∤ Δ`) to an equivalent form with `p | a`, `p | c`,
/// `p ∤ s`: a vector of value `≡ 0 (mod p)` becomes the third basis vector,
/// `x,y` are swapped if needed, then `x ↦ x + kz` with `a + sk ≡ 0`.
pub fn ascent_shape_trace(f: &TernaryForm, p: u64) -> Result<ShapeTrace> {
    check_odd_prime(p)?;
    if f.discriminant() % p == 0 {
        return Err(Error::usage(format!("{p} divides Δ = {}", f.discriminant())));
    }
    if in_ascent_shape(f, p) {
        return Ok(ShapeTrace {
            input: *f,
            prime: p,
            vector: None,
            swapped: false,
            shear_k: 0,
            basis_change: BasisChange::identity(),
            shaped: *f,
        });
    }
    let v = least_vector(f, p, p * p * coefficient_sum(f))
        .ok_or_else(|| Error::SearchExhausted(format!("no vector of {f} with value divisible by {p}")))?;
    let mut u = lattice::complete_basis(&v, 2)?;
    let mut h = f.apply_basis_change(&u);
    let pi = p as i64;
    let swapped = h.s % pi == 0;
    if swapped {
        let swap = BasisChange::permutation([1, 0, 2]);
        u = u.then(&swap);
        h = h.apply_basis_change(&swap);
    }
    let k = (-h.a * inverse_mod(h.s, pi)).rem_euclid(pi);
    let shear = BasisChange::new([[1, 0, 0], [0, 1, 0], [k, 0, 1]])?;
    u = u.then(&shear);
    let shaped = h.apply_basis_change(&shear);
    debug_assert!(in_ascent_shape(&shaped, p));
    Ok(ShapeTrace { input: *f, prime: p, vector: Some(v), swapped, shear_k: k, basis_change: u, shaped })
}

pub fn ascent_canonical_shape(f: &TernaryForm, p: u64) -> Result<(TernaryForm, BasisChange)> {
    let t = ascent_shape_trace(f, p)?;
    Ok((t.shaped, t.basis_change))
}

/// `⟨a,b,c,r,s,t⟩ ↦ ⟨pa, pb, c/p, r, s, pt⟩` on a form in ascent shape.
pub fn ascent_map(f: &TernaryForm, p: u64) -> Result<TernaryForm> {
    if !in_ascent_shape(f, p) {
        return Err(Error::usage(format!("{f} is not in ascent shape at {p}")));
    }
    let p = p as i64;
    TernaryForm::new(p * f.a, p * f.b, f.c / p, f.r, f.s, p * f.t)
}

/// Ascent to discriminant `p·Δ`.
pub fn ascend(f: &TernaryForm, p: u64) -> Result<TernaryForm> {
    ascent_map(&ascent_canonical_shape(f, p)?.0, p)
}

fn check_descent(g: &TernaryForm, p: u64) -> Result<()> {
    check_odd_prime(p)?;
    let d = g.discriminant();
    if d % p != 0 || d % (p * p) == 0 {
        return Err(Error::usage(format!("{p} does not divide Δ = {d} exactly once")));
    }
    if !g.local_isotropy(p)? {
        return Err(Error::NotIsotropic(p));
    }
    Ok(())
}

/// Second half of the descent shape: swap `y,z` if `p | s`, then `y ↦ y + kz`
/// with `t + sk ≡ 0`.
fn finish_descent_shape(h: TernaryForm, u: BasisChange, p: u64) -> Result<(TernaryForm, BasisChange, bool, i64)> {
    let pi = p as i64;
    let (mut h, mut u) = (h, u);
    let swapped = h.s % pi == 0;
    if swapped {
        let swap = BasisChange::permutation([0, 2, 1]);
        u = u.then(&swap);
        h = h.apply_basis_change(&swap);
    }
    let k = (-h.t * inverse_mod(h.s, pi)).rem_euclid(pi);
    let shear = BasisChange::new([[1, 0, 0], [0, 1, 0], [0, k, 1]])?;
    let shaped = h.apply_basis_change(&shear);
    Ok((shaped, u.then(&shear), swapped, k))
}

/// Moves `g` (with `p ∥ Δ`, isotropic at `p`) to an equivalent form with
/// `p² | a`, `p | b`, `p | t`, `p ∤ s`.
pub fn descent_shape_trace(g: &TernaryForm, p: u64) -> Result<ShapeTrace> {
    check_descent(g, p)?;
    if in_descent_shape(g, p) {
        return Ok(ShapeTrace {
            input: *g,
            prime: p,
            vector: None,
            swapped: false,
            shear_k: 0,
            basis_change: BasisChange::identity(),
            shaped: *g,
        });
    }
    let bound = p * p * coefficient_sum(g);
    let v = least_vector(g, p * p, bound).ok_or_else(|| {
        Error::SearchExhausted(format!("no primitive vector of {g} with value ≡ 0 mod {} up to {bound}", p * p))
    })?;
    let u = lattice::complete_basis(&v, 0)?;
    let (shaped, basis_change, swapped, shear_k) = finish_descent_shape(g.apply_basis_change(&u), u, p)?;
    debug_assert!(in_descent_shape(&shaped, p));
    Ok(ShapeTrace { input: *g, prime: p, vector: Some(v), swapped, shear_k, basis_change, shaped })
}

pub fn descent_canonical_shape(g: &TernaryForm, p: u64) -> Result<(TernaryForm, BasisChange)> {
    let t = descent_shape_trace(g, p)?;
    Ok((t.shaped, t.basis_change))
}

/// `⟨a,b,c,r,s,t⟩ ↦ ⟨a/p, b/p, pc, r, s, t/p⟩` on a form in descent shape.
pub fn descent_map(g: &TernaryForm, p: u64) -> Result<TernaryForm> {
    if !in_descent_shape(g, p) {
        return Err(Error::usage(format!("{g} is not in descent shape at {p}")));
    }
    let p = p as i64;
    TernaryForm::new(g.a / p, g.b / p, p * g.c, g.r, g.s, g.t / p)
}

/// Descent to discriminant `Δ/p`.
pub fn descend(g: &TernaryForm, p: u64) -> Result<TernaryForm> {
    descent_map(&descent_canonical_shape(g, p)?.0, p)
}

/// Classes of all descents, one per qualifying primitive vector up to the
/// documented search bound.
pub fn descend_all(g: &TernaryForm, p: u64) -> Result<BTreeSet<TernaryForm>> {
    check_descent(g, p)?;
    let modulus = p * p;
    let bound = modulus * coefficient_sum(g);
    let mut out = BTreeSet::new();
    for (v, n) in vectors_up_to(g, bound) {
        if n == 0 || n % modulus != 0 || !lattice::is_primitive_vector(&v) || !leading_positive(&v) {
            continue;
        }
        let u = lattice::complete_basis(&v, 0)?;
        let (shaped, _, _, _) = finish_descent_shape(g.apply_basis_change(&u), u, p)?;
        out.insert(canonical(&descent_map(&shaped, p)?));
    }
    Ok(out)
}

/// Result of pairing classes of one genus by mutual representation of
/// `k`-multiples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionReport {
    pub k: u64,
    pub classes: Vec<TernaryForm>,
    /// Block of each class in the supplied partition.
    pub block_of: Vec<usize>,
    /// For each class, the other classes it pairs with.
    pub partners: Vec<Vec<usize>>,
    pub perfect_matching: bool,
    /// Every pair joins different blocks.
    pub crosses_blocks: bool,
}

impl InvolutionReport {
    /// Number of partners of class `i` lying in each block.
    pub fn partner_blocks(&self, i: usize) -> Vec<usize> {
        let blocks = self.block_of.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![0; blocks];
        for &j in &self.partners[i] {
            counts[self.block_of[j]] += 1;
        }
        counts
    }
}

/// Pairs `f ≠ g` in one genus with `f` representing `k·g` and `g`
/// representing `k·f`.
pub fn involution_scan(partition: &SpinorPartition, k: u64) -> Result<InvolutionReport> {
    if k == 0 {
        return Err(Error::usage("multiplier must be positive"));
    }
    let classes: Vec<TernaryForm> = partition.genus.iter().map(|&i| partition.class(i)).collect();
    let block_of: Vec<usize> = classes.iter().map(|f| partition.block_of(f).expect("class of the partition")).collect();
    let n = classes.len();
    let search = RepSearch::new();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let linked: Vec<(usize, usize)> = pairs
        .into_par_iter()
        .filter(|&(i, j)| search.mutual(&classes[i], &classes[j], k).is_some())
        .collect();
    let mut partners = vec![Vec::new(); n];
    for (i, j) in linked {
        partners[i].push(j);
        partners[j].push(i);
    }
    let perfect_matching = partners.iter().all(|p| p.len() == 1);
    let crosses_blocks = partners.iter().enumerate().all(|(i, p)| p.iter().all(|&j| block_of[i] != block_of[j]));
    Ok(InvolutionReport { k, classes, block_of, partners, perfect_matching, crosses_blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form;
    use crate::genus::{enumerate_discriminant, same_genus, spinor_partition};
    use proptest::prelude::*;

    #[test]
    fn represents_multiple_examples() {
        let f = form!(5, 9, 17, 6, 5, 3);
        let id = represents_multiple(&f, &f, 1).unwrap().unwrap();
        assert_eq!(id.det().abs(), 1);
        let two = represents_multiple(&f, &f, 4).unwrap().unwrap();
        assert_eq!(two.det().abs(), 8);
        let m = represents_multiple(&form!(1, 1, 80), &form!(1, 1, 16), 5).unwrap().unwrap();
        assert!(m.verify());
        assert_eq!(m.det().abs(), 5);
        assert!(represents_multiple(&form!(2, 2, 5, 2, 2, 0), &form!(2, 2, 5, 2, 2, 0), 1).unwrap().is_some());
        assert!(represents_multiple(&form!(2, 2, 5, 2, 2, 0), &form!(1, 1, 16), 1).unwrap().is_none());
    }

    #[test]
    fn all_witnesses_are_verified_and_distinct() {
        let all = represents_multiple_all(&form!(1, 1, 16), &form!(1, 1, 16), 1, 1000).unwrap();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(RepMatrix::verify));
    }

    #[test]
    fn chan_pair_examples() {
        let pair = chan_pair(&form!(1, 1, 80), &form!(1, 1, 16), 5).unwrap().unwrap();
        assert!(pair.forward.verify() && pair.backward.verify());
        let f = form!(1, 1, 16);
        assert!(chan_pair(&f, &f, 1).unwrap().is_some());
        assert!(chan_pair(&form!(1, 1, 80), &form!(1, 1, 16), 3).is_err());
        assert_eq!(crate::enumerate::rep_count(&form!(2, 2, 5, 2, 2, 0), 25), 0);
        let pair = chan_pair(&form!(2, 2, 21, 2, 2, 0), &form!(2, 2, 5, 2, 2, 0), 5).unwrap().unwrap();
        assert!(pair.forward.verify() && pair.backward.verify());
    }

    #[test]
    fn model_matrices_identities() {
        let (p, q) = model_matrices(1, 2);
        let g0 = form!(1, 1, 80).gram();
        let f0 = form!(1, 1, 16).gram();
        let pt = lattice::transpose(&p);
        assert_eq!(lattice::mul(&lattice::mul(&pt, &g0), &p), lattice::scale(&f0, 5));
        let qt = lattice::transpose(&q);
        assert_eq!(lattice::mul(&lattice::mul(&qt, &f0), &q), lattice::scale(&g0, 5));
        assert_eq!(lattice::mul(&p, &q), lattice::scale(&lattice::IDENTITY, 5));
        assert_eq!(lattice::det(&p), 5);
        assert_eq!(lattice::det(&q), 25);
    }

    #[test]
    fn graph_and_respects_spinor() {
        let left_table = enumerate_discriminant(320).unwrap();
        let lg = left_table.genus_index_of(&form!(1, 1, 80)).unwrap();
        let right_table = enumerate_discriminant(64).unwrap();
        let rg = right_table.genus_index_of(&form!(1, 1, 16)).unwrap();
        let graph =
            correspondence_graph(&left_table.genus_classes(lg), &right_table.genus_classes(rg), 5).unwrap();
        assert!(graph.covers());
        let lp = spinor_partition(&left_table, lg, 500).unwrap();
        let rp = spinor_partition(&right_table, rg, 500).unwrap();
        assert!(respects_spinor(&graph, &lp, &rp).unwrap());

        let f = form!(1, 1, 16);
        let single = correspondence_graph(&[f], &[f], 1).unwrap();
        assert_eq!(single.edges.len(), 1);
    }

    #[test]
    fn ascent_examples() {
        let (g, u) = ascent_canonical_shape(&form!(1, 1, 16), 5).unwrap();
        assert!(in_ascent_shape(&g, 5));
        assert_eq!(form!(1, 1, 16).apply_basis_change(&u), g);
        let up = ascend(&form!(1, 1, 16), 5).unwrap();
        assert_eq!(up.discriminant(), 320);
        assert_eq!(up.a % 25, 0);
        let (g, _) = ascent_canonical_shape(&form!(1, 1, 1), 5).unwrap();
        assert!(in_ascent_shape(&g, 5));
        assert!(ascent_canonical_shape(&form!(1, 1, 80), 5).is_err());
    }

    #[test]
    fn descent_examples() {
        let g = form!(1, 1, 80);
        let down = descend(&g, 5).unwrap();
        assert_eq!(down.discriminant(), 64);
        assert!(same_genus(&down, &form!(1, 1, 16)).unwrap());
        assert!(g.evaluate(&[1, 12, 1]) % 25 == 0);
        assert!(matches!(descend(&form!(1, 1, 16), 5), Err(Error::Usage(_))));
        // ⟨1,1,3⟩ has Δ = 12 and x² + y² + 3z² is anisotropic over Q_3.
        assert!(matches!(descend(&form!(1, 1, 3), 3), Err(Error::NotIsotropic(3))));
        let all = descend_all(&g, 5).unwrap();
        assert!(all.iter().all(|f| f.discriminant() == 64));
    }

    #[test]
    fn involution_for_n_5() {
        let table = enumerate_discriminant(320).unwrap();
        let gi = table.genus_index_of(&form!(1, 1, 80)).unwrap();
        let part = spinor_partition(&table, gi, 500).unwrap();
        let report = involution_scan(&part, 4).unwrap();
        assert!(report.perfect_matching && report.crosses_blocks);
    }

    fn arb_small_form() -> impl Strategy<Value = TernaryForm> {
        (1i64..8, 1i64..8, 1i64..12, -4i64..5, -4i64..5, -4i64..5)
            .prop_filter_map("positive definite primitive", |(a, b, c, r, s, t)| TernaryForm::new(a, b, c, r, s, t).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn ascent_descent_roundtrip(f in arb_small_form(), i in 0usize..5) {
            let p = [3u64, 5, 7, 11, 13][i];
            prop_assume!(f.discriminant() % p != 0);
            let (shaped, u) = ascent_canonical_shape(&f, p).unwrap();
            prop_assert_eq!(f.apply_basis_change(&u), shaped);
            let up = ascent_map(&shaped, p).unwrap();
            prop_assert_eq!(up.discriminant(), p * f.discriminant());
            prop_assert!(in_descent_shape(&up, p));
            let (again, v) = descent_canonical_shape(&up, p).unwrap();
            prop_assert_eq!(v, BasisChange::identity());
            prop_assert_eq!(descent_map(&again, p).unwrap(), shaped);
        }

        #[test]
        fn descent_discriminant_law(f in arb_small_form(), i in 0usize..4) {
            let p = [3u64, 5, 7, 11][i];
            let d = f.discriminant();
            prop_assume!(d % p == 0 && d % (p * p) != 0 && f.local_isotropy(p).unwrap());
            let (shaped, u) = descent_canonical_shape(&f, p).unwrap();
            prop_assert_eq!(f.apply_basis_change(&u), shaped);
            prop_assert_eq!(descend(&f, p).unwrap().discriminant(), d / p);
        }
    }
}
