//! Small dense linear algebra: float helpers over nalgebra and exact
//! Gaussian elimination over the rationals.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};

use crate::Q;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).fold(0.0, f64::max)
}

/// Column-major matrix from a list of column vectors.
pub fn from_columns(rows: usize, cols: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Smallest singular value; 0 for an empty matrix.
pub fn min_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    if m.ncols() > m.nrows() {
        return 0.0;
    }
    sv.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Least-squares solution of `m x = b` and its residual norm.
pub fn least_squares(m: &DMatrix<f64>, b: &[f64]) -> Option<(Vec<f64>, f64)> {
    let svd = m.clone().svd(true, true);
    let rhs = DVector::from_column_slice(b);
    let x = svd.solve(&rhs, 1e-14).ok()?;
    let r = (m * &x - rhs).norm();
    Some((x.iter().copied().collect(), r))
}

/// Orthonormal basis of the row space of `m`, dropping directions whose
/// singular value is below `tol`.
pub fn row_space_basis(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol)
        .map(|(i, _)| vt.row(i).iter().copied().collect())
        .collect()
}

/// Householder reflection sending `e_1` to the unit vector `w`, as a matrix.
pub fn reflection_to(w: &[f64]) -> DMatrix<f64> {
    let n = w.len();
    let mut v: Vec<f64> = w.to_vec();
    v[0] -= 1.0;
    let vv = dot(&v, &v);
    if vv < 1e-30 {
        return DMatrix::identity(n, n);
    }
    DMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 2.0 * v[i] * v[j] / vv
    })
}

/// Row echelon form in place; returns pivot columns and the determinant
/// sign/scale accumulated from row swaps and pivots.
fn eliminate(m: &mut [Vec<Q>]) -> (Vec<usize>, Q) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut det = Q::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            det = Q::zero();
            continue;
        };
        if p != r {
            m.swap(p, r);
            det = -det;
        }
        let piv = m[r][c].clone();
        det *= &piv;
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            let (top, bottom) = m.split_at_mut(i);
            for (x, p) in bottom[0][c..cols].iter_mut().zip(&top[r][c..cols]) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, det)
}

pub fn rank_q(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    eliminate(&mut a).0.len()
}

/// Determinant of a square rational matrix.
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    let mut a = m.to_vec();
    let (pivots, det) = eliminate(&mut a);
    if pivots.len() < n {
        Q::zero()
    } else {
        det
    }
}

/// Solves `m x = b` exactly when `m` has at least as many rows as columns;
/// `None` if the columns are dependent or the system is inconsistent.
pub fn solve_q(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (pivots, _) = eliminate(&mut a);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = alloc::vec![Q::zero(); n];
    for i in (0..n).rev() {
        let mut s = a[i][n].clone();
        for j in (i + 1)..n {
            s -= &a[i][j] * &x[j];
        }
        x[i] = s / &a[i][i];
    }
    Some(x)
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn exact_det_and_solve() {
        let m = alloc::vec![
            alloc::vec![q(2, 1), q(1, 1)],
            alloc::vec![q(1, 1), q(3, 1)],
        ];
        assert_eq!(det_q(&m), q(5, 1));
        let x = solve_q(&m, &[q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(x, alloc::vec![q(1, 5), q(3, 5)]);
        let sing = alloc::vec![
            alloc::vec![q(1, 1), q(2, 1)],
            alloc::vec![q(2, 1), q(4, 1)],
        ];
        assert_eq!(det_q(&sing), Q::zero());
        assert!(solve_q(&sing, &[q(1, 1), q(1, 1)]).is_none());
        assert_eq!(rank_q(&sing), 1);
    }

    #[test]
    fn householder_maps_e1() {
        let w = [0.6, 0.0, 0.8];
        let h = reflection_to(&w);
        let e1 = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        let img = &h * e1;
        for i in 0..3 {
            assert!((img[i] - w[i]).abs() < 1e-15);
        }
    }
}
