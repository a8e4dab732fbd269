//! Elementary integer arithmetic: residue symbols, factorization,
//! two-squares decompositions and Hilbert symbols.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prime factorization of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Divisors that are products of distinct primes, ascending.
    pub fn squarefree_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, _) in &self.factors {
            let len = divs.len();
            for i in 0..len {
                divs.push(divs[i] * p);
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::usage("cannot factorize 0"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: n, factors })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

/// True iff every prime factor of `m` is 1 mod 4 (vacuously true for 1).
pub fn all_prime_factors_one_mod_four(m: u64) -> Result<bool> {
    Ok(factorize(m)?.primes().all(|p| p % 4 == 1))
}

/// Odd primes in increasing order, starting at 3.
pub fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| is_prime(n))
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

/// Primitive representation `n = u² + v²` with `gcd(u, v) = 1` and `0 ≤ u ≤ v`,
/// smallest `u` first.
pub fn sum_two_squares_primitive(n: u64) -> Option<(u64, u64)> {
    let n = n as u128;
    let mut u = 0u128;
    while 2 * u * u <= n {
        if let Some(v) = exact_sqrt((n - u * u) as i128) {
            let v = v as u128;
            if u.gcd(&v) == 1 {
                return Some((u as u64, v as u64));
            }
        }
        u += 1;
    }
    None
}

/// All `(u, v)` with `u² + v² = n`, `0 ≤ u ≤ v`, without the coprimality
/// requirement.
pub fn sum_two_squares_all(n: u64) -> Vec<(u64, u64)> {
    let n = n as u128;
    let mut out = Vec::new();
    let mut u = 0u128;
    while 2 * u * u <= n {
        if let Some(v) = exact_sqrt((n - u * u) as i128) {
            out.push((u as u64, v as u64));
        }
        u += 1;
    }
    out
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi_symbol(a: i64, n: i64) -> Result<i32> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::usage(format!(
            "jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Legendre-style character used throughout: `(a | p)` for an odd prime.
pub(crate) fn legendre(a: i128, p: u64) -> i32 {
    let p = p as i128;
    jacobi_symbol(a.rem_euclid(p) as i64, p as i64).expect("odd prime modulus")
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    Real,
    Prime(u64),
}

/// An integer in the same square class as a nonzero rational: n/d ~ n·d.
fn square_class_integer(x: &Ratio<i128>) -> i128 {
    *x.numer() * *x.denom()
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &Ratio<i128>, b: &Ratio<i128>, place: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::usage("hilbert symbol of zero"));
    }
    let a = square_class_integer(a);
    let b = square_class_integer(b);
    Ok(match place {
        Place::Real => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => hilbert_integer(a, b, p),
    })
}

fn split_p(n: i128, p: u64) -> (u32, i128) {
    let v = valuation(n, p);
    (v, n / (p as i128).pow(v))
}

fn hilbert_integer(a: i128, b: i128, p: u64) -> i32 {
    let (alpha, u) = split_p(a, p);
    let (beta, v) = split_p(b, p);
    if p == 2 {
        let eps = |x: i128| (x.rem_euclid(4) == 3) as u32;
        let omega = |x: i128| matches!(x.rem_euclid(8), 3 | 5) as u32;
        let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (alpha * beta) % 2 == 1 && p % 4 == 3 {
            -1
        } else {
            1
        };
        if beta % 2 == 1 {
            s *= legendre(u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(v, p);
        }
        s
    }
}

/// Convenience wrapper for integer arguments.
pub fn hilbert_symbol_int(a: i128, b: i128, place: Place) -> Result<i32> {
    hilbert_symbol(&Ratio::from_integer(a), &Ratio::from_integer(b), place)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residue_table_symbol(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 7).unwrap(), 1);
        assert_eq!(jacobi_symbol(-1, 5).unwrap(), 1);
        assert_eq!(jacobi_symbol(-1, 3).unwrap(), residue_table_symbol(-1, 3));
        assert_eq!(jacobi_symbol(-1, 3).unwrap(), -1);
        assert!(jacobi_symbol(3, 8).is_err());
        assert!(jacobi_symbol(3, -3).is_err());
        assert!(jacobi_symbol(3, 0).is_err());
    }

    #[test]
    fn jacobi_matches_residue_table_for_primes() {
        for p in odd_primes().take_while(|&p| p < 60) {
            for a in -70..70 {
                assert_eq!(
                    jacobi_symbol(a, p as i64).unwrap(),
                    residue_table_symbol(a, p as i64),
                    "({a}|{p})"
                );
            }
        }
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(1375).unwrap().factors, vec![(5, 3), (11, 1)]);
        assert_eq!(factorize(64).unwrap().factors, vec![(2, 6)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(5).unwrap());
        assert!(!is_squarefree(45).unwrap());
        assert!(is_squarefree(1189).unwrap());
    }

    #[test]
    fn two_squares_examples() {
        assert_eq!(sum_two_squares_primitive(5), Some((1, 2)));
        assert_eq!(sum_two_squares_primitive(25), Some((3, 4)));
        assert_eq!(sum_two_squares_primitive(21), None);
        assert_eq!(sum_two_squares_primitive(1), Some((0, 1)));
        assert_eq!(sum_two_squares_primitive(2), Some((1, 1)));
    }

    #[test]
    fn one_mod_four_examples() {
        assert!(all_prime_factors_one_mod_four(1).unwrap());
        assert!(all_prime_factors_one_mod_four(65).unwrap());
        assert!(!all_prime_factors_one_mod_four(6).unwrap());
    }

    #[test]
    fn primitive_two_squares_exist_for_one_mod_four_products() {
        for n in 1..=10_000u64 {
            if all_prime_factors_one_mod_four(n).unwrap() {
                let (u, v) = sum_two_squares_primitive(n).expect("primitive rep");
                assert_eq!(u * u + v * v, n);
                assert_eq!(u.gcd(&v), 1);
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        for p in [2, 3, 5, 7, 11] {
            assert_eq!(hilbert_symbol_int(1, 7, Place::Prime(p)).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol_int(1, 7, Place::Real).unwrap(), 1);
        assert_eq!(hilbert_symbol_int(-1, -1, Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol_int(-1, -1, Place::Real).unwrap(), -1);
        assert!(hilbert_symbol_int(0, 3, Place::Real).is_err());
    }

    /// x² + y² = -1 over Q₂: solvable iff a primitive solution to
    /// x² + y² + z² ≡ 0 (mod 8) exists, which it never does.
    #[test]
    fn hilbert_minus_one_minus_one_at_two_by_mod_eight_search() {
        let solvable = (0..8)
            .flat_map(|x| (0..8).flat_map(move |y| (0..8).map(move |z| (x, y, z))))
            .filter(|&(x, y, z)| x % 2 == 1 || y % 2 == 1 || z % 2 == 1)
            .any(|(x, y, z)| (x * x + y * y + z * z) % 8 == 0);
        assert!(!solvable);
        assert_eq!(hilbert_symbol_int(-1, -1, Place::Prime(2)).unwrap(), -1);
    }

    #[test]
    fn hilbert_rationals_use_square_class() {
        let a = Ratio::new(3, 4);
        let b = Ratio::new(-5, 9);
        for p in [2, 3, 5, 7] {
            assert_eq!(
                hilbert_symbol(&a, &b, Place::Prime(p)).unwrap(),
                hilbert_symbol_int(3, -5, Place::Prime(p)).unwrap()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn jacobi_is_multiplicative(a in -500i64..500, b in -500i64..500, k in 0i64..300) {
            let n = 2 * k + 1;
            prop_assert_eq!(
                jacobi_symbol(a * b, n).unwrap(),
                jacobi_symbol(a, n).unwrap() * jacobi_symbol(b, n).unwrap()
            );
        }

        #[test]
        fn factorize_reconstructs(n in 1u64..1_000_000) {
            let f = factorize(n).unwrap();
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.factors.iter().all(|&(p, _)| is_prime(p)));
        }

        #[test]
        fn hilbert_reciprocity(a in -2000i128..2000, b in -2000i128..2000) {
            prop_assume!(a != 0 && b != 0);
            let mut places = vec![Place::Real, Place::Prime(2)];
            for p in factorize((a * b).unsigned_abs() as u64).unwrap().primes() {
                if p != 2 {
                    places.push(Place::Prime(p));
                }
            }
            let product: i32 = places
                .iter()
                .map(|&v| hilbert_symbol_int(a, b, v).unwrap())
                .product();
            prop_assert_eq!(product, 1);
            prop_assert_eq!(hilbert_symbol_int(a, -a, Place::Prime(2)).unwrap(), 1);
            prop_assert_eq!(
                hilbert_symbol_int(a, b, Place::Prime(3)).unwrap(),
                hilbert_symbol_int(b, a, Place::Prime(3)).unwrap()
            );
        }
    }
}
