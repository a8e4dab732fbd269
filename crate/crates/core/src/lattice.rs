//! Small exact integer linear algebra on 3×3 matrices.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector = [i64; 3];

/// Row-major 3×3 integer matrix.
pub type Mat3 = [[i64; 3]; 3];

pub const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let v: i128 = (0..3).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
            out[i][j] = i64::try_from(v).expect("matrix entry overflow");
        }
    }
    out
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn scale(a: &Mat3, k: i64) -> Mat3 {
    a.map(|row| row.map(|x| x * k))
}

pub fn det(a: &Mat3) -> i128 {
    let m = |i: usize, j: usize| a[i][j] as i128;
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Classical adjugate: `a · adj(a) = det(a) · I`.
pub fn adjugate(a: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = a[r0][c0] as i128 * a[r1][c1] as i128 - a[r0][c1] as i128 * a[r1][c0] as i128;
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            out[i][j] = i64::try_from(sign * minor).expect("adjugate overflow");
        }
    }
    out
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub fn column(a: &Mat3, j: usize) -> Vector {
    [a[0][j], a[1][j], a[2][j]]
}

pub fn from_columns(c0: Vector, c1: Vector, c2: Vector) -> Mat3 {
    [[c0[0], c1[0], c2[0]], [c0[1], c1[1], c2[1]], [c0[2], c1[2], c2[2]]]
}

pub fn mul_vec(a: &Mat3, v: &Vector) -> Vector {
    let mut out = [0i64; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive_vector(v: &Vector) -> bool {
    content(v) == 1
}

/// A unimodular change of basis; columns are the new basis vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisChange(Mat3);

impl BasisChange {
    pub fn new(m: Mat3) -> Result<Self> {
        match det(&m) {
            1 | -1 => Ok(BasisChange(m)),
            d => Err(Error::usage(format!("basis change has determinant {d}, expected ±1"))),
        }
    }

    pub fn identity() -> Self {
        BasisChange(IDENTITY)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn det(&self) -> i64 {
        det(&self.0) as i64
    }

    /// `self` followed by `other`: the matrix product `self · other`.
    pub fn then(&self, other: &BasisChange) -> BasisChange {
        BasisChange(mul(&self.0, &other.0))
    }

    pub fn inverse(&self) -> BasisChange {
        let d = self.det();
        BasisChange(scale(&adjugate(&self.0), d))
    }

    /// Permutation matrix whose column `j` is `e_{perm[j]}`.
    pub fn permutation(perm: [usize; 3]) -> Self {
        let mut m = [[0i64; 3]; 3];
        for (j, &i) in perm.iter().enumerate() {
            m[i][j] = 1;
        }
        BasisChange(m)
    }
}

/// Unimodular matrix whose column `position` is the primitive vector `v`.
pub fn complete_basis(v: &Vector, position: usize) -> Result<BasisChange> {
    if !is_primitive_vector(v) {
        return Err(Error::usage(format!("vector {v:?} is not primitive")));
    }
    // Row-reduce v to e_0 while tracking the operations: U·v = e_0, so
    // U⁻¹ has v as its first column.
    let mut w = *v;
    let mut u = IDENTITY;
    // Euclid on pairs (0,1) then (0,2).
    for k in [1usize, 2] {
        while w[k] != 0 {
            let q = Integer::div_floor(&w[0], &w[k]);
            w[0] -= q * w[k];
            for j in 0..3 {
                u[0][j] -= q * u[k][j];
            }
            w.swap(0, k);
            u.swap(0, k);
        }
    }
    if w[0] == -1 {
        w[0] = 1;
        for j in 0..3 {
            u[0][j] = -u[0][j];
        }
    }
    debug_assert_eq!(w, [1, 0, 0]);
    let inv = BasisChange::new(u)?.inverse();
    let mut m = *inv.matrix();
    if position != 0 {
        for row in m.iter_mut() {
            row.swap(0, position);
        }
    }
    let out = BasisChange::new(m)?;
    debug_assert_eq!(column(out.matrix(), position), *v);
    Ok(out)
}

/// Row basis (lower-triangular Hermite form) of the full-rank lattice
/// generated by `gens`.
pub fn hermite_basis(gens: &[Vector]) -> Result<Mat3> {
    let mut rows: Vec<[i128; 3]> = gens.iter().map(|g| g.map(|x| x as i128)).collect();
    let mut basis = [[0i64; 3]; 3];
    for col in (0..3).rev() {
        // Collapse column `col` onto a single pivot row via Euclid.
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let pivot = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != pivot {
                    let q = Integer::div_floor(&rows[i][col], &rows[pivot][col]);
                    for j in 0..3 {
                        rows[i][j] -= q * rows[pivot][j];
                    }
                }
            }
        }
        let idx = (0..rows.len())
            .find(|&i| rows[i][col] != 0)
            .ok_or_else(|| Error::usage("generators do not span a full-rank lattice"))?;
        let mut row = rows.swap_remove(idx);
        if row[col] < 0 {
            row = row.map(|x| -x);
        }
        basis[col] = row.map(|x| i64::try_from(x).expect("hermite overflow"));
    }
    // Reduce below-diagonal entries modulo the pivots.
    for col in 0..3 {
        for other in col + 1..3 {
            let q = Integer::div_floor(&basis[other][col], &basis[col][col]);
            for j in 0..3 {
                basis[other][j] -= q * basis[col][j];
            }
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn adjugate_identity() {
        let a = [[2, 1, 0], [1, 4, 3], [0, 3, 10]];
        let d = det(&a) as i64;
        assert_eq!(mul(&a, &adjugate(&a)), scale(&IDENTITY, d));
    }

    #[test]
    fn completion_of_small_vectors() {
        for v in [[1, 2, 0], [3, 4, 0], [1, 12, 1], [0, 0, 1], [-5, 3, 7], [6, 10, 15]] {
            for pos in 0..3 {
                let u = complete_basis(&v, pos).unwrap();
                assert_eq!(u.det().abs(), 1);
                assert_eq!(column(u.matrix(), pos), v);
            }
        }
        assert!(complete_basis(&[2, 4, 0], 0).is_err());
    }

    #[test]
    fn hermite_of_index_p_sublattice() {
        let gens = [[5, 0, 0], [0, 5, 0], [0, 0, 5], [1, 2, 0]];
        let b = hermite_basis(&gens).unwrap();
        assert_eq!(det(&b).abs(), 25);
    }

    proptest! {
        #[test]
        fn completion_is_unimodular(x in -40i64..40, y in -40i64..40, z in -40i64..40) {
            let v = [x, y, z];
            prop_assume!(content(&v) == 1);
            let u = complete_basis(&v, 2).unwrap();
            prop_assert_eq!(u.det().abs(), 1);
            prop_assert_eq!(column(u.matrix(), 2), v);
            prop_assert_eq!(*u.then(&u.inverse()).matrix(), IDENTITY);
        }
    }
}
