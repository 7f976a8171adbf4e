//! Dense linear algebra over an abstract field (exact rationals,
//! cyclotomic numbers): reduced row echelon form, solving, kernel bases.
//!
//! These kernels are for the small exact systems that show up in character
//! and eigenform manipulation (dimensions in the tens); the big mod-p
//! relation matrices use the specialized routines in [`crate::fp`].

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::CycloNum;

pub trait Field {
    type Elem: Clone + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// The rational field Q.
pub struct QQ;

impl Field for QQ {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The cyclotomic closure: elements promote to common orders on demand.
pub struct CycloField;

impl Field for CycloField {
    type Elem = CycloNum;
    fn zero(&self) -> CycloNum {
        CycloNum::zero()
    }
    fn one(&self) -> CycloNum {
        CycloNum::one()
    }
    fn add(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a.add(b)
    }
    fn sub(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a.sub(b)
    }
    fn mul(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a.mul(b)
    }
    fn neg(&self, a: &CycloNum) -> CycloNum {
        a.neg()
    }
    fn inv(&self, a: &CycloNum) -> CycloNum {
        a.inv()
    }
    fn is_zero(&self, a: &CycloNum) -> bool {
        a.is_zero()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..nrows {
            if i != r && !f.is_zero(&rows[i][c]) {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = f.mul(&factor, &rows[r][j]);
                    rows[i][j] = f.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    rref(f, &mut rows).len()
}

/// Determinant of a square matrix by fraction-full Gaussian elimination.
pub fn determinant<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n));
    let mut det = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(&rows[i][c])) else {
            return f.zero();
        };
        if pr != c {
            rows.swap(c, pr);
            det = f.neg(&det);
        }
        let pivot = rows[c][c].clone();
        det = f.mul(&det, &pivot);
        let inv = f.inv(&pivot);
        for i in c + 1..n {
            if !f.is_zero(&rows[i][c]) {
                let factor = f.mul(&rows[i][c], &inv);
                for j in c..n {
                    let t = f.mul(&factor, &rows[c][j]);
                    rows[i][j] = f.sub(&rows[i][j], &t);
                }
            }
        }
    }
    det
}

/// A basis of the right kernel of the matrix (rows x cols).
pub fn kernel_basis<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>) -> Vec<Vec<F::Elem>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let pivots = rref(f, &mut rows);
    let pivot_row: std::collections::HashMap<usize, usize> =
        pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_row.contains_key(&free) {
            continue;
        }
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (&c, &i) in pivot_row.iter() {
            v[c] = f.neg(&rows[i][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b (A given as rows); returns one solution if consistent.
pub fn solve<F: Field>(
    f: &F,
    mut rows: Vec<Vec<F::Elem>>,
    b: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let nrows = rows.len();
    assert_eq!(nrows, b.len());
    if nrows == 0 {
        return Some(Vec::new());
    }
    let ncols = rows[0].len();
    for (row, rhs) in rows.iter_mut().zip(b.iter()) {
        row.push(rhs.clone());
    }
    let pivots = rref(f, &mut rows);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solve_rational_system() {
        // x + 2y = 5; 3x - y = 1  => x = 1, y = 2
        let rows = vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(-1, 1)]];
        let b = vec![q(5, 1), q(1, 1)];
        let x = solve(&QQ, rows, &b).unwrap();
        assert_eq!(x, vec![q(1, 1), q(2, 1)]);
    }

    #[test]
    fn inconsistent_detected() {
        let rows = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        let b = vec![q(1, 1), q(3, 1)];
        assert!(solve(&QQ, rows, &b).is_none());
    }

    #[test]
    fn kernel_over_cyclotomics() {
        // columns v0, v1, v2 = zeta_3 v0 + v1 over Q(zeta_3)
        let z = CycloNum::zeta(3, 1);
        let v0 = [CycloNum::one(), CycloNum::zeta(3, 2)];
        let v1 = [CycloNum::from_i64(2), CycloNum::one()];
        let rows: Vec<Vec<CycloNum>> = (0..2)
            .map(|i| vec![v0[i].clone(), v1[i].clone(), z.mul(&v0[i]).add(&v1[i])])
            .collect();
        let basis = kernel_basis(&CycloField, rows);
        assert_eq!(basis.len(), 1);
        let k = &basis[0];
        assert!(k[2].equals(&CycloNum::one()));
        assert!(k[0].equals(&z.neg()));
        assert!(k[1].equals(&CycloNum::from_i64(-1)));
    }
}
