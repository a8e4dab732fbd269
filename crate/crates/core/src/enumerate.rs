//! Exact lattice point enumeration and everything built on it: representation
//! counts, Minkowski reduction, canonical class representatives, automorphism
//! groups and equivalence testing.
//!
//! Enumeration completes the square twice with integer arithmetic:
//!
//! ```text
//! 4a·f      = (2ax + ty + sz)² + Q(y, z)
//! 4A'·Q     = (2A'y + B'z)² + 16aΔ·z²
//! A' = 4ab − t²,  B' = 2(2ar − st),  Q = A'y² + B'yz + (4ac − s²)z²
//! ```
//!
//! so `f ≤ B` bounds `z`, then `y`, then `x` exactly, without floating point.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, isqrt};
use crate::form::TernaryForm;
use crate::lattice::{self, BasisChange, Mat3, Vector};

/// Precomputed completing-the-square data for one form.
struct Kernel {
    a: i128,
    t: i128,
    s: i128,
    ap: i128,
    bp: i128,
    cp: i128,
    delta: i128,
}

impl Kernel {
    fn new(f: &TernaryForm) -> Self {
        let (a, b, c, r, s, t) = (f.a as i128, f.b as i128, f.c as i128, f.r as i128, f.s as i128, f.t as i128);
        let ap = 4 * a * b - t * t;
        let bp = 2 * (2 * a * r - s * t);
        let cp = 4 * a * c - s * s;
        let delta = f.discriminant() as i128;
        debug_assert_eq!(4 * ap * cp - bp * bp, 16 * a * delta);
        Kernel { a, t, s, ap, bp, cp, delta }
    }

    /// Calls `visit(y, z, Q(y,z))` for every `(y, z)` that can extend to a
    /// vector with `f ≤ bound`.
    fn for_each_yz(&self, bound: u64, mut visit: impl FnMut(i128, i128, i128)) {
        let bound = bound as i128;
        let zmax = isqrt((self.ap * bound / self.delta) as u128) as i128;
        for z in -zmax..=zmax {
            let rem = 16 * self.a * self.ap * bound - 16 * self.a * self.delta * z * z;
            if rem < 0 {
                continue;
            }
            let root = isqrt(rem as u128) as i128;
            let lo = Integer::div_ceil(&(-root - self.bp * z), &(2 * self.ap));
            let hi = Integer::div_floor(&(root - self.bp * z), &(2 * self.ap));
            for y in lo..=hi {
                let q = self.ap * y * y + self.bp * y * z + self.cp * z * z;
                visit(y, z, q);
            }
        }
    }

    fn x_range(&self, bound: u64, y: i128, z: i128, q: i128) -> Option<(i128, i128)> {
        let rem = 4 * self.a * bound as i128 - q;
        if rem < 0 {
            return None;
        }
        let root = isqrt(rem as u128) as i128;
        let shift = self.t * y + self.s * z;
        let lo = Integer::div_ceil(&(-root - shift), &(2 * self.a));
        let hi = Integer::div_floor(&(root - shift), &(2 * self.a));
        (lo <= hi).then_some((lo, hi))
    }

    /// Solutions `x` of `f(x, y, z) = n` for fixed `(y, z)`.
    fn shell_x(&self, n: u64, y: i128, z: i128, q: i128, mut emit: impl FnMut(i128)) {
        let d = 4 * self.a * n as i128 - q;
        let Some(root) = exact_sqrt(d) else { return };
        let shift = self.t * y + self.s * z;
        for l in if root == 0 { vec![0] } else { vec![root, -root] } {
            let num = l - shift;
            if num % (2 * self.a) == 0 {
                emit(num / (2 * self.a));
            }
        }
    }
}

fn to_vector(x: i128, y: i128, z: i128) -> Vector {
    [x as i64, y as i64, z as i64]
}

/// Every `v` with `f(v) ≤ bound`, paired with its value.
pub fn vectors_up_to(f: &TernaryForm, bound: u64) -> Vec<(Vector, u64)> {
    let k = Kernel::new(f);
    let mut out = Vec::new();
    k.for_each_yz(bound, |y, z, q| {
        if let Some((lo, hi)) = k.x_range(bound, y, z, q) {
            for x in lo..=hi {
                let l = 2 * k.a * x + k.t * y + k.s * z;
                let value = ((l * l + q) / (4 * k.a)) as u64;
                out.push((to_vector(x, y, z), value));
            }
        }
    });
    out
}

/// All `v` with `f(v) = n`.
pub fn shell(f: &TernaryForm, n: u64) -> Vec<Vector> {
    if n == 0 {
        return vec![[0, 0, 0]];
    }
    let k = Kernel::new(f);
    let mut out = Vec::new();
    k.for_each_yz(n, |y, z, q| k.shell_x(n, y, z, q, |x| out.push(to_vector(x, y, z))));
    out
}

/// `r_f(n)`: integer vectors with `f(v) = n`, signs counted, `r_f(0) = 1`.
pub fn rep_count(f: &TernaryForm, n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let k = Kernel::new(f);
    let mut count = 0u64;
    k.for_each_yz(n, |y, z, q| k.shell_x(n, y, z, q, |_| count += 1));
    count
}

/// Whether `f` represents `n`, stopping at the first solution.
pub fn represents(f: &TernaryForm, n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let k = Kernel::new(f);
    let bound = n as i128;
    let zmax = isqrt((k.ap * bound / k.delta) as u128) as i128;
    for z in 0..=zmax {
        let rem = 16 * k.a * k.ap * bound - 16 * k.a * k.delta * z * z;
        let root = isqrt(rem as u128) as i128;
        let lo = Integer::div_ceil(&(-root - k.bp * z), &(2 * k.ap));
        let hi = Integer::div_floor(&(root - k.bp * z), &(2 * k.ap));
        for y in lo..=hi {
            let q = k.ap * y * y + k.bp * y * z + k.cp * z * z;
            let d = 4 * k.a * bound - q;
            if let Some(root) = exact_sqrt(d) {
                let shift = k.t * y + k.s * z;
                if (root - shift) % (2 * k.a) == 0 || (-root - shift) % (2 * k.a) == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// `[r_f(0), r_f(1), …, r_f(bound)]`.
pub fn theta_series(f: &TernaryForm, bound: u64) -> Vec<u64> {
    let k = Kernel::new(f);
    let mut counts = vec![0u64; bound as usize + 1];
    k.for_each_yz(bound, |y, z, q| {
        if let Some((lo, hi)) = k.x_range(bound, y, z, q) {
            for x in lo..=hi {
                let l = 2 * k.a * x + k.t * y + k.s * z;
                counts[((l * l + q) / (4 * k.a)) as usize] += 1;
            }
        }
    });
    counts
}

/// The representations of `target` by `form`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSet {
    pub form: TernaryForm,
    pub target: u64,
    pub vectors: Vec<Vector>,
}

/// Representations with coprime coordinates.
pub fn primitive_reps(f: &TernaryForm, n: u64) -> RepSet {
    let mut vectors: Vec<Vector> = shell(f, n).into_iter().filter(lattice::is_primitive_vector).collect();
    vectors.sort_unstable();
    RepSet { form: *f, target: n, vectors }
}

pub fn primitive_rep_count(f: &TernaryForm, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let k = Kernel::new(f);
    let mut count = 0u64;
    k.for_each_yz(n, |y, z, q| {
        k.shell_x(n, y, z, q, |x| {
            if lattice::is_primitive_vector(&to_vector(x, y, z)) {
                count += 1;
            }
        })
    });
    count
}

// ---------------------------------------------------------------------------
// Reduction

fn sub_scaled(v: &Vector, w: &Vector, k: i64) -> Vector {
    [v[0] - k * w[0], v[1] - k * w[1], v[2] - k * w[2]]
}

/// Lagrange reduction of a pair of basis vectors.
fn lagrange(f: &TernaryForm, b: &mut [Vector; 3]) {
    loop {
        if f.evaluate(&b[1]) < f.evaluate(&b[0]) {
            b.swap(0, 1);
        }
        let n0 = 2 * f.evaluate(&b[0]) as i128;
        let mu = round_div(f.bilinear(&b[0], &b[1]) as i128, n0) as i64;
        if mu == 0 {
            return;
        }
        b[1] = sub_scaled(&b[1], &b[0], mu);
        if f.evaluate(&b[1]) >= f.evaluate(&b[0]) {
            return;
        }
    }
}

fn round_div(num: i128, den: i128) -> i128 {
    Integer::div_floor(&(2 * num + den), &(2 * den))
}

/// Moves `b[2]` to its shortest translate modulo the plane of `b[0], b[1]`.
fn closest_translate(f: &TernaryForm, b: &mut [Vector; 3]) {
    let g = |i: usize, j: usize| f.bilinear(&b[i], &b[j]) as i128;
    let (g00, g01, g11, g02, g12) = (g(0, 0), g(0, 1), g(1, 1), g(0, 2), g(1, 2));
    let det = g00 * g11 - g01 * g01;
    let xn = g02 * g11 - g12 * g01;
    let yn = g00 * g12 - g01 * g02;
    let x0 = Integer::div_floor(&xn, &det);
    let y0 = Integer::div_floor(&yn, &det);
    let mut best = (f.evaluate(&b[2]), 0i64, 0i64);
    for x in x0 - 2..=x0 + 3 {
        for y in y0 - 2..=y0 + 3 {
            let cand = sub_scaled(&sub_scaled(&b[2], &b[0], x as i64), &b[1], y as i64);
            let value = f.evaluate(&cand);
            if value < best.0 {
                best = (value, x as i64, y as i64);
            }
        }
    }
    b[2] = sub_scaled(&sub_scaled(&b[2], &b[0], best.1), &b[1], best.2);
}

/// Greedy reduction; in dimension three the output is Minkowski reduced, so
/// the diagonal is the sequence of successive minima.
pub fn minkowski_basis(f: &TernaryForm) -> BasisChange {
    let mut b: [Vector; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    loop {
        b.sort_by_key(|v| f.evaluate(v));
        lagrange(f, &mut b);
        closest_translate(f, &mut b);
        if f.evaluate(&b[2]) >= f.evaluate(&b[1]) {
            break;
        }
    }
    let mut m = lattice::from_columns(b[0], b[1], b[2]);
    if lattice::det(&m) < 0 {
        for row in m.iter_mut() {
            row[2] = -row[2];
        }
    }
    BasisChange::new(m).expect("reduction keeps a basis")
}

/// Successive minima `λ₁ ≤ λ₂ ≤ λ₃`.
pub fn successive_minima(f: &TernaryForm) -> [u64; 3] {
    let red = f.apply_basis_change(&minkowski_basis(f));
    [red.a as u64, red.b as u64, red.c as u64]
}

/// Bases of `h` whose vectors have values `(h.a, h.b, h.c)`, grouped for the
/// canonical-form and automorphism searches.
struct MinimalBases {
    shells: [Vec<Vector>; 3],
}

impl MinimalBases {
    fn new(h: &TernaryForm) -> Self {
        let s1 = shell(h, h.a as u64);
        let s2 = if h.b == h.a { s1.clone() } else { shell(h, h.b as u64) };
        let s3 = if h.c == h.b { s2.clone() } else { shell(h, h.c as u64) };
        MinimalBases { shells: [s1, s2, s3] }
    }

    /// Calls `visit` with every unimodular `(v1, v2, v3)` drawn from the shells
    /// whose pairwise bilinear values pass `accept_pair` / `accept_triple`.
    fn for_each(
        &self,
        h: &TernaryForm,
        mut accept_pair: impl FnMut(i64) -> bool,
        mut visit: impl FnMut(&Vector, &Vector, &Vector, i64, i64, i64),
    ) {
        for v1 in &self.shells[0] {
            for v2 in &self.shells[1] {
                let t = h.bilinear(v1, v2);
                if !accept_pair(t) {
                    continue;
                }
                for v3 in &self.shells[2] {
                    let m = lattice::from_columns(*v1, *v2, *v3);
                    if lattice::det(&m).abs() != 1 {
                        continue;
                    }
                    let r = h.bilinear(v2, v3);
                    let s = h.bilinear(v3, v1);
                    visit(v1, v2, v3, r, s, t);
                }
            }
        }
    }
}

/// Canonical representative of the class of `f` and a basis change `U` with
/// `Uᵀ·Gram(f)·U = Gram(canonical)`.
///
/// The canonical form is Minkowski reduced (`a ≤ b ≤ c` are the successive
/// minima) and, among all bases realising the minima, has the
/// lexicographically greatest `(r, s, t)`.
pub fn reduce(f: &TernaryForm) -> (TernaryForm, BasisChange) {
    let red_basis = minkowski_basis(f);
    let h = f.apply_basis_change(&red_basis);
    let bases = MinimalBases::new(&h);
    let mut best: Option<((i64, i64, i64), Mat3)> = None;
    bases.for_each(
        &h,
        |_| true,
        |v1, v2, v3, r, s, t| {
            let key = (r, s, t);
            if best.as_ref().map_or(true, |(k, _)| key > *k) {
                best = Some((key, lattice::from_columns(*v1, *v2, *v3)));
            }
        },
    );
    let (_, m) = best.expect("the reduced basis itself qualifies");
    let u = red_basis.then(&BasisChange::new(m).expect("unimodular"));
    let canon = f.apply_basis_change(&u);
    if canon == *f {
        return (canon, BasisChange::identity());
    }
    (canon, u)
}

pub fn canonical(f: &TernaryForm) -> TernaryForm {
    reduce(f).0
}

/// All `U` with `Uᵀ·Gram·U = Gram`.
pub fn automorphisms(f: &TernaryForm) -> Vec<BasisChange> {
    let red_basis = minkowski_basis(f);
    let h = f.apply_basis_change(&red_basis);
    let bases = MinimalBases::new(&h);
    let inv = red_basis.inverse();
    let mut out = Vec::new();
    bases.for_each(
        &h,
        |t| t == h.t,
        |v1, v2, v3, r, s, _| {
            if r == h.r && s == h.s {
                let m = BasisChange::new(lattice::from_columns(*v1, *v2, *v3)).expect("unimodular");
                out.push(red_basis.then(&m).then(&inv));
            }
        },
    );
    out
}

pub fn automorphism_count(f: &TernaryForm) -> u64 {
    let h = canonical(f);
    let bases = MinimalBases::new(&h);
    let mut count = 0u64;
    bases.for_each(&h, |t| t == h.t, |_, _, _, r, s, _| {
        if r == h.r && s == h.s {
            count += 1;
        }
    });
    count
}

/// `U` with `Uᵀ·Gram(f)·U = Gram(g)` when the forms are integrally equivalent.
pub fn is_equivalent(f: &TernaryForm, g: &TernaryForm) -> Option<BasisChange> {
    if f.discriminant() != g.discriminant() {
        return None;
    }
    let (cf, uf) = reduce(f);
    let (cg, ug) = reduce(g);
    (cf == cg).then(|| uf.then(&ug.inverse()))
}
