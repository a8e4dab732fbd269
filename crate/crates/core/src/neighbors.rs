//! Kneser `p`-neighbours of a ternary lattice at an odd prime `p ∤ Δ`.
//!
//! For an isotropic line `v` of `L/pL`, lifted so that `f(v) ≡ 0 (mod p²)`,
//! the neighbour is `L' = L_v + ℤ·v/p` with `L_v = {x : B(x, v) ≡ 0 (mod p)}`.
//! Neighbours stay in the genus of `L`. Walking two steps at a fixed `p`
//! stays inside the spinor genus, and every class of the spinor genus is
//! reached that way, because the spin group acts transitively on the lattices
//! at even distance in the `p`-neighbour tree.

use std::collections::{BTreeSet, VecDeque};

use crate::arith;
use crate::enumerate::canonical;
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::lattice::{self, Vector};

fn inv_mod(a: i64, p: i64) -> i64 {
    let (g, x, _) = ext_gcd(a.rem_euclid(p), p);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Representatives of the isotropic lines of `f` modulo `p`.
fn isotropic_lines(f: &TernaryForm, p: i64) -> Vec<Vector> {
    let mut reps = Vec::new();
    let mut push = |v: Vector| {
        if f.evaluate(&v) % p as u64 == 0 {
            reps.push(v);
        }
    };
    for y in 0..p {
        for z in 0..p {
            push([1, y, z]);
        }
    }
    for z in 0..p {
        push([0, 1, z]);
    }
    push([0, 0, 1]);
    reps
}

/// The `p`-neighbour of `f` along the isotropic line through `v`.
fn neighbor_along(f: &TernaryForm, v: Vector, p: i64) -> Result<TernaryForm> {
    let g = f.gram();
    let gv = lattice::mul_vec(&g, &v);
    let i = (0..3)
        .find(|&i| gv[i].rem_euclid(p) != 0)
        .ok_or_else(|| Error::usage(format!("{p} divides the discriminant of {f}")))?;
    // lift: f(v + pλe_i) ≡ 0 (mod p²)
    let half = (f.evaluate(&v) as i64 / p).rem_euclid(p);
    let lambda = (-half * inv_mod(gv[i], p)).rem_euclid(p);
    let mut v = v;
    v[i] += p * lambda;
    debug_assert_eq!(f.evaluate(&v) % (p * p) as u64, 0);

    let gv = lattice::mul_vec(&g, &v);
    let inv = inv_mod(gv[i], p);
    let mut gens: Vec<Vector> = Vec::with_capacity(4);
    let mut pe = [0i64; 3];
    pe[i] = p * p;
    gens.push(pe);
    for j in (0..3).filter(|&j| j != i) {
        let mut w = [0i64; 3];
        w[j] = p;
        w[i] = -p * (gv[j] * inv).rem_euclid(p);
        gens.push(w);
    }
    gens.push(v);
    let basis_rows = lattice::hermite_basis(&gens)?;
    let basis = lattice::transpose(&basis_rows);
    let scaled = f.transform(&basis);
    let arr = scaled.to_array();
    let pp = p * p;
    if arr.iter().any(|x| x % pp != 0) {
        return Err(Error::usage(format!("neighbour construction for {f} at {p} is not integral")));
    }
    let out = arr.map(|x| x / pp);
    TernaryForm::new_imprimitive(out[0], out[1], out[2], out[3], out[4], out[5])
}

/// Canonical forms of all `p`-neighbours (one per isotropic line, `p + 1` in
/// total), deduplicated.
pub fn p_neighbors(f: &TernaryForm, p: u64) -> Result<BTreeSet<TernaryForm>> {
    if p % 2 == 0 || !arith::is_prime(p) || f.discriminant() % p == 0 {
        return Err(Error::usage(format!("p-neighbours need an odd prime not dividing Δ = {}, got {p}", f.discriminant())));
    }
    let p = p as i64;
    isotropic_lines(f, p)
        .into_iter()
        .map(|v| neighbor_along(f, v, p).map(|n| canonical(&n)))
        .collect()
}

/// Smallest odd prime not dividing `delta`.
pub fn default_prime(delta: u64) -> u64 {
    arith::odd_primes().find(|p| delta % p != 0).expect("infinitely many primes")
}

/// Odd primes below `limit` not dividing `delta`.
pub fn genus_primes(delta: u64, limit: u64) -> Vec<u64> {
    arith::odd_primes().take_while(|&p| p < limit).filter(|p| delta % p != 0).collect()
}

/// Classes reachable from `f` through neighbour steps at the given primes,
/// sorted. With enough primes this is the whole genus of `f`.
pub fn neighbor_closure(f: &TernaryForm, primes: &[u64], limit: usize) -> Result<Vec<TernaryForm>> {
    let start = canonical(f);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(g) = queue.pop_front() {
        for &p in primes {
            for n in p_neighbors(&g, p)? {
                if seen.insert(n) {
                    if seen.len() > limit {
                        return Err(Error::SearchExhausted(format!(
                            "neighbour closure of {f} exceeded {limit} classes"
                        )));
                    }
                    queue.push_back(n);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form;

    #[test]
    fn neighbors_preserve_discriminant_and_count_lines() {
        for f in [form!(1, 1, 16), form!(2, 2, 5, 2, 2, 0), form!(5, 9, 17, 6, 5, 3)] {
            for p in [3u64, 5, 7, 11] {
                if f.discriminant() % p == 0 {
                    continue;
                }
                assert_eq!(isotropic_lines(&f, p as i64).len() as u64, p + 1, "{f} at {p}");
                for n in p_neighbors(&f, p).unwrap() {
                    assert_eq!(n.discriminant(), f.discriminant());
                    assert!(n.is_primitive());
                }
            }
        }
    }

    #[test]
    fn closure_of_disc_64_genus() {
        let classes = neighbor_closure(&form!(1, 1, 16), &genus_primes(64, 20), 100).unwrap();
        assert_eq!(classes, vec![form!(1, 1, 16), form!(2, 2, 5, 2, 2, 0)]);
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(p_neighbors(&form!(1, 1, 80), 5).is_err());
        assert!(p_neighbors(&form!(1, 1, 16), 9).is_err());
        assert!(p_neighbors(&form!(1, 1, 16), 2).is_err());
    }
}
