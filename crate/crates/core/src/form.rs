//! Integral positive definite ternary forms `ax² + by² + cz² + ryz + szx + txy`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{hilbert_symbol, Place};
use crate::error::{Error, Result};
use crate::lattice::{self, BasisChange, Mat3, Vector};

/// The sextuple `⟨a,b,c,r,s,t⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 6]", try_from = "[i64; 6]")]
pub struct TernaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
}

/// Gram matrix of second partial derivatives: even diagonal, determinant `2Δ`.
pub type GramMatrix = Mat3;

impl TernaryForm {
    /// Primitive positive definite form.
    pub fn new(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        let f = Self::new_imprimitive(a, b, c, r, s, t)?;
        if f.content() != 1 {
            return Err(f.invalid("not primitive"));
        }
        Ok(f)
    }

    /// Positive definite, but possibly with a common factor (adjoint values).
    pub fn new_imprimitive(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        let f = TernaryForm { a, b, c, r, s, t };
        let minor = 4 * a as i128 * b as i128 - t as i128 * t as i128;
        if a <= 0 || minor <= 0 || f.discriminant_i128() <= 0 {
            return Err(f.invalid("not positive definite"));
        }
        Ok(f)
    }

    pub fn from_array(v: [i64; 6]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn from_gram(g: &GramMatrix) -> Result<Self> {
        if (0..3).any(|i| g[i][i] % 2 != 0) || (0..3).any(|i| (0..3).any(|j| g[i][j] != g[j][i])) {
            return Err(Error::usage(format!("{g:?} is not an even symmetric matrix")));
        }
        Self::new_imprimitive(g[0][0] / 2, g[1][1] / 2, g[2][2] / 2, g[1][2], g[0][2], g[0][1])
    }

    pub fn to_array(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.r, self.s, self.t]
    }

    fn invalid(&self, reason: &str) -> Error {
        Error::InvalidForm { form: self.to_string(), reason: reason.to_string() }
    }

    pub fn content(&self) -> i64 {
        lattice::content(&self.to_array())
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// `f / content(f)`.
    pub fn primitive_part(&self) -> TernaryForm {
        let g = self.content();
        let v = self.to_array().map(|x| x / g);
        TernaryForm { a: v[0], b: v[1], c: v[2], r: v[3], s: v[4], t: v[5] }
    }

    /// `k · f` (not primitive for `k > 1`).
    pub fn scaled(&self, k: i64) -> TernaryForm {
        let v = self.to_array().map(|x| x * k);
        TernaryForm { a: v[0], b: v[1], c: v[2], r: v[3], s: v[4], t: v[5] }
    }

    pub fn gram(&self) -> GramMatrix {
        [
            [2 * self.a, self.t, self.s],
            [self.t, 2 * self.b, self.r],
            [self.s, self.r, 2 * self.c],
        ]
    }

    fn discriminant_i128(&self) -> i128 {
        let (a, b, c, r, s, t) =
            (self.a as i128, self.b as i128, self.c as i128, self.r as i128, self.s as i128, self.t as i128);
        4 * a * b * c + r * s * t - a * r * r - b * s * s - c * t * t
    }

    /// `Δ = 4abc + rst − ar² − bs² − ct²`, half the Gram determinant.
    pub fn discriminant(&self) -> u64 {
        self.discriminant_i128() as u64
    }

    pub fn evaluate(&self, v: &Vector) -> u64 {
        let [x, y, z] = v.map(|e| e as i128);
        let val = self.a as i128 * x * x
            + self.b as i128 * y * y
            + self.c as i128 * z * z
            + self.r as i128 * y * z
            + self.s as i128 * z * x
            + self.t as i128 * x * y;
        debug_assert!(val >= 0);
        val as u64
    }

    /// `B(v, w) = f(v + w) − f(v) − f(w) = vᵀ·Gram·w`.
    pub fn bilinear(&self, v: &Vector, w: &Vector) -> i64 {
        let g = self.gram();
        let mut acc: i128 = 0;
        for i in 0..3 {
            for j in 0..3 {
                acc += v[i] as i128 * g[i][j] as i128 * w[j] as i128;
            }
        }
        i64::try_from(acc).expect("bilinear overflow")
    }

    /// The form with Gram matrix `Uᵀ·Gram·U`.
    pub fn apply_basis_change(&self, u: &BasisChange) -> TernaryForm {
        self.transform(u.matrix())
    }

    /// `Pᵀ·Gram·P` for an arbitrary nonsingular integral `P`.
    pub(crate) fn transform(&self, p: &Mat3) -> TernaryForm {
        let g = lattice::mul(&lattice::transpose(p), &lattice::mul(&self.gram(), p));
        TernaryForm { a: g[0][0] / 2, b: g[1][1] / 2, c: g[2][2] / 2, r: g[1][2], s: g[0][2], t: g[0][1] }
    }

    /// `⟨4bc−r², 4ca−s², 4ab−t², 2(st−2ar), 2(rt−2bs), 2(rs−2ct)⟩`.
    pub fn adjoint(&self) -> TernaryForm {
        let TernaryForm { a, b, c, r, s, t } = *self;
        TernaryForm {
            a: 4 * b * c - r * r,
            b: 4 * c * a - s * s,
            c: 4 * a * b - t * t,
            r: 2 * (s * t - 2 * a * r),
            s: 2 * (r * t - 2 * b * s),
            t: 2 * (r * s - 2 * c * t),
        }
    }

    /// Reciprocal form and divisor: `adjoint = m · φ` with `φ` primitive.
    pub fn reciprocal_and_divisor(&self) -> (TernaryForm, u64) {
        let adj = self.adjoint();
        let m = adj.content();
        (adj.primitive_part(), m as u64)
    }

    pub fn reciprocal(&self) -> TernaryForm {
        self.reciprocal_and_divisor().0
    }

    pub fn divisor(&self) -> u64 {
        self.reciprocal_and_divisor().1
    }

    /// Least `N` such that `N·Gram⁻¹` is integral with even diagonal.
    pub fn level(&self) -> u64 {
        let g = self.gram();
        let adj = lattice::adjugate(&g);
        let two_delta = 2 * self.discriminant() as i128;
        let mut n: i128 = 1;
        for i in 0..3 {
            for j in 0..3 {
                let modulus = if i == j { 2 * two_delta } else { two_delta };
                let e = adj[i][j] as i128;
                n = n.lcm(&(modulus / modulus.gcd(&e)));
            }
        }
        n as u64
    }

    /// Whether `f = 0` has a nonzero solution over `Q_p`.
    pub fn local_isotropy(&self, p: u64) -> Result<bool> {
        if !crate::arith::is_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        // Leading-minor diagonalization of the half-Gram matrix.
        let a = self.a as i128;
        let minor = 4 * a * self.b as i128 - (self.t as i128).pow(2);
        let delta = self.discriminant() as i128;
        let d = [
            Ratio::from_integer(a),
            Ratio::new(minor, 4 * a),
            Ratio::new(delta, minor),
        ];
        let place = Place::Prime(p);
        let mut hasse = 1;
        for i in 0..3 {
            for j in i + 1..3 {
                hasse *= hilbert_symbol(&d[i], &d[j], place)?;
            }
        }
        let minus_det = -(d[0] * d[1] * d[2]);
        Ok(hasse == hilbert_symbol(&Ratio::from_integer(-1), &minus_det, place)?)
    }

    /// Cyclic relabeling `⟨a,b,c,r,s,t⟩ → ⟨c,a,b,t,r,s⟩`, e.g.
    /// `⟨2,2,4k+1,2,2,0⟩ → ⟨4k+1,2,2,0,2,2⟩`.
    pub fn cyclic_relabel(&self) -> TernaryForm {
        TernaryForm { a: self.c, b: self.a, c: self.b, r: self.t, s: self.r, t: self.s }
    }
}

impl From<TernaryForm> for [i64; 6] {
    fn from(f: TernaryForm) -> Self {
        f.to_array()
    }
}

impl TryFrom<[i64; 6]> for TernaryForm {
    type Error = Error;

    fn try_from(v: [i64; 6]) -> Result<Self> {
        TernaryForm::new_imprimitive(v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.a, self.b, self.c, self.r, self.s, self.t)
    }
}

impl FromStr for TernaryForm {
    type Err = Error;

    /// Parses `"a,b,c,r,s,t"`; the result must be primitive and positive definite.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::usage(format!("expected six comma-separated integers, got {text:?}")));
        }
        let mut v = [0i64; 6];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| Error::usage(format!("bad coefficient {p:?} in {text:?}")))?;
        }
        TernaryForm::from_array(v)
    }
}

/// Shorthand for forms known to be valid, used by tests and examples.
#[macro_export]
macro_rules! form {
    ($a:expr, $b:expr, $c:expr, $r:expr, $s:expr, $t:expr) => {
        $crate::TernaryForm::new($a, $b, $c, $r, $s, $t).expect("valid ternary form")
    };
    ($a:expr, $b:expr, $c:expr) => {
        $crate::TernaryForm::new($a, $b, $c, 0, 0, 0).expect("valid ternary form")
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sextuple(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> TernaryForm {
        TernaryForm::new_imprimitive(a, b, c, r, s, t).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(form!(1, 1, 16).discriminant(), 64);
        assert_eq!(form!(2, 2, 5, 2, 2, 0).discriminant(), 64);
        assert_eq!(form!(1, 5, 70, 5, 0, 0).discriminant(), 1375);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(form!(2, 2, 5, 2, 2, 0).evaluate(&[1, 0, 0]), 2);
        assert_eq!(form!(2, 2, 21, 2, 2, 0).evaluate(&[1, 1, 1]), 29);
        assert_eq!(form!(5, 9, 17, 6, 5, 3).evaluate(&[0, 0, 0]), 0);
    }

    #[test]
    fn bilinear_examples() {
        let f = form!(2, 2, 5, 2, 2, 0);
        assert_eq!(f.bilinear(&[1, 2, 3], &[1, 2, 3]), 2 * f.evaluate(&[1, 2, 3]) as i64);
        assert_eq!(form!(1, 1, 16).bilinear(&[1, 0, 0], &[0, 1, 0]), 0);
        assert_eq!(f.bilinear(&[1, 0, 0], &[0, 0, 1]), 2);
    }

    #[test]
    fn basis_change_examples() {
        let f = form!(1, 1, 16);
        assert_eq!(f.apply_basis_change(&BasisChange::identity()), f);
        let swap = BasisChange::permutation([1, 0, 2]);
        assert_eq!(f.apply_basis_change(&swap), f);
        let g = form!(5, 9, 17, 6, 5, 3);
        assert_eq!(g.apply_basis_change(&swap), form!(9, 5, 17, 5, 6, 3));
        assert!(BasisChange::new([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(form!(1, 1, 16).adjoint(), sextuple(64, 64, 4, 0, 0, 0));
        assert_eq!(form!(1, 1, 1).adjoint(), sextuple(4, 4, 4, 0, 0, 0));
        assert_eq!(form!(5, 2, 2, 0, 2, 2).adjoint(), sextuple(16, 36, 36, 8, -16, -16));
    }

    #[test]
    fn adjoint_half_gram_is_four_times_adjugate() {
        // half-Gram(adjoint) = 4·adj(half-Gram) = adjugate(Gram)
        let f = form!(5, 9, 17, 6, 5, 3);
        assert_eq!(f.adjoint().gram(), lattice::scale(&lattice::adjugate(&f.gram()), 2));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(form!(1, 1, 16).reciprocal_and_divisor(), (form!(16, 16, 1), 4));
        assert_eq!(form!(16, 16, 1).reciprocal_and_divisor(), (form!(1, 1, 16), 64));
        assert_eq!(form!(1, 1, 1).reciprocal_and_divisor(), (form!(1, 1, 1), 4));
    }

    #[test]
    fn level_examples() {
        assert_eq!(form!(1, 1, 16).level(), 64);
        assert_eq!(form!(1, 1, 1).level(), 4);
        assert_eq!(form!(5, 2, 2, 0, 2, 2).level(), 64);
    }

    /// Level by direct search: the least N with N·Gram⁻¹ integral and even on
    /// the diagonal, using the inverse as exact rationals.
    fn level_by_search(f: &TernaryForm) -> u64 {
        let g = f.gram();
        let adj = lattice::adjugate(&g);
        let det = lattice::det(&g);
        (1u64..)
            .find(|&n| {
                (0..3).all(|i| {
                    (0..3).all(|j| {
                        let num = n as i128 * adj[i][j] as i128;
                        num % det == 0 && (i != j || (num / det) % 2 == 0)
                    })
                })
            })
            .unwrap()
    }

    #[test]
    fn level_oracle_agrees() {
        for f in [form!(1, 1, 1), form!(1, 1, 16), form!(2, 2, 5, 2, 2, 0), form!(1, 5, 70, 5, 0, 0), form!(6, 6, 25, 0, 0, 3)] {
            assert_eq!(f.level(), level_by_search(&f), "{f}");
        }
    }

    #[test]
    fn parse_and_render() {
        let f: TernaryForm = "1,1,16,0,0,0".parse().unwrap();
        assert_eq!(f, form!(1, 1, 16));
        assert_eq!(f.to_string(), "1,1,16,0,0,0");
        assert!("2,2,2,0,0,0".parse::<TernaryForm>().is_err());
        assert!("1,1,-1,0,0,0".parse::<TernaryForm>().is_err());
        assert!("1,1,1".parse::<TernaryForm>().is_err());
        assert_eq!(serde_json::to_string(&f).unwrap(), "[1,1,16,0,0,0]");
    }

    #[test]
    fn cyclic_relabel_shape() {
        assert_eq!(form!(2, 2, 5, 2, 2, 0).cyclic_relabel(), form!(5, 2, 2, 0, 2, 2));
    }

    #[test]
    fn local_isotropy_examples() {
        assert!(sextuple(1, 1, 80, 0, 0, 0).local_isotropy(5).unwrap());
        assert!(!sextuple(1, 1, 1, 0, 0, 0).local_isotropy(2).unwrap());
        assert!(sextuple(1, 1, 16, 0, 0, 0).local_isotropy(7).unwrap());
        assert!(sextuple(1, 1, 16, 0, 0, 0).local_isotropy(9).is_err());
    }

    pub(crate) fn arb_form() -> impl Strategy<Value = TernaryForm> {
        (1i64..12, 1i64..12, 1i64..40, -12i64..12, -12i64..12, -12i64..12).prop_filter_map(
            "positive definite primitive",
            |(a, b, c, r, s, t)| TernaryForm::new(a, b, c, r, s, t).ok(),
        )
    }

    proptest! {
        #[test]
        fn kaplansky_identity(n in 1i64..400, x in -300i64..300, y in -300i64..300, z in -300i64..300) {
            let f = TernaryForm::new(2, 2, 4 * n + 1, 2, 2, 0).unwrap();
            let rhs = (x + y + z).pow(2) + (x - y).pow(2) + 4 * n * z * z;
            prop_assert_eq!(f.evaluate(&[x, y, z]) as i64, rhs);
        }

        #[test]
        fn gram_determinant_is_twice_discriminant(f in arb_form()) {
            prop_assert_eq!(lattice::det(&f.gram()), 2 * f.discriminant() as i128);
        }

        #[test]
        fn reciprocal_is_involution(f in arb_form()) {
            let phi = f.reciprocal();
            prop_assert_eq!(phi.reciprocal(), f);
            let (_, m) = f.reciprocal_and_divisor();
            let delta = f.discriminant() as u128;
            prop_assert_eq!(phi.discriminant() as u128 * (m as u128).pow(3), 16 * delta * delta);
        }

        #[test]
        fn isotropic_away_from_two_delta(f in arb_form(), i in 0usize..8) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23][i];
            prop_assume!(f.discriminant() % p != 0);
            prop_assert!(f.local_isotropy(p).unwrap());
        }

        #[test]
        fn anisotropic_places_are_even(f in arb_form()) {
            // The real place is anisotropic, so an odd number of primes must be.
            let bad = crate::arith::factorize(2 * f.discriminant()).unwrap().primes()
                .filter(|&p| !f.local_isotropy(p).unwrap())
                .count();
            prop_assert_eq!(bad % 2, 1);
        }

        #[test]
        fn bilinear_polarizes(f in arb_form(), v in prop::array::uniform3(-20i64..20), w in prop::array::uniform3(-20i64..20)) {
            let sum = [v[0] + w[0], v[1] + w[1], v[2] + w[2]];
            prop_assert_eq!(
                f.bilinear(&v, &w),
                f.evaluate(&sum) as i64 - f.evaluate(&v) as i64 - f.evaluate(&w) as i64
            );
        }
    }
}
