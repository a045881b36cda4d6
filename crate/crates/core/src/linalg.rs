//! Small dense linear algebra: SVD-based numeric rank, kernels and
//! cokernels over ℝ, and exact Gaussian elimination over ℚ.

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::expr::Rational;

/// Singular values at or below `rel_tol · σ_max` (or below `ABS_FLOOR`)
/// count as zero.
pub const RANK_REL_TOL: f64 = 1e-8;
pub const ABS_FLOOR: f64 = 1e-10;

fn threshold(sv: &[f64], rel_tol: f64) -> f64 {
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    (rel_tol * smax).max(ABS_FLOOR)
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .collect()
}

pub fn numeric_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let t = threshold(&sv, rel_tol);
    sv.iter().filter(|&&s| s > t).count()
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn kernel_basis(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // Pad to a square-or-tall matrix so the SVD returns a full V.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let t = threshold(&sv, rel_tol);
    let cols: Vec<usize> = (0..n).filter(|&i| sv[i] <= t).collect();
    let mut out = DMatrix::zeros(n, cols.len());
    for (k, &i) in cols.iter().enumerate() {
        for j in 0..n {
            out[(j, k)] = v_t[(i, j)];
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the column space of
/// `m` (a `g × r` matrix); its columns represent a basis of `ℝ^g / im(m)`.
pub fn cokernel_basis(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let g = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::identity(g, g);
    }
    kernel_basis(&m.transpose(), rel_tol)
}

/// Minimum-norm least-squares solution of `a · x = b`.
pub fn lstsq(a: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.ncols();
    if a.nrows() == 0 || n == 0 {
        return Some(vec![0.0; n]);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Some(vec![0.0; n]);
    }
    let rhs = nalgebra::DVector::from_column_slice(b);
    svd.solve(&rhs, smax * 1e-13)
        .ok()
        .map(|x| x.iter().cloned().collect())
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Exact row reduction over ℚ. Returns the reduced row-echelon form and
/// the pivot column of each non-zero row.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn exact_rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Solve `Σ_k c_k · rows[k] = target` exactly; `None` when inconsistent.
pub fn solve_combination(rows: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let len = target.len();
    // Augmented system with unknowns c_k: column k is rows[k].
    let system: Vec<Vec<Rational>> = (0..len)
        .map(|j| {
            let mut row: Vec<Rational> = rows.iter().map(|r| r[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&system);
    if pivots.contains(&n) {
        return None;
    }
    let mut sol = vec![Rational::zero(); n];
    for (row, &p) in red.iter().zip(&pivots) {
        sol[p] = row[n].clone();
    }
    Some(sol)
}

/// Basis of the exact null space `{c : Σ_k c_k · rows[k] = 0}`.
pub fn left_kernel(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let len = rows[0].len();
    let system: Vec<Vec<Rational>> = (0..len)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let (red, pivots) = rref(&system);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}
