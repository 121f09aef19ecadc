//! Dense 6x6 kernels used by the boundary-matrix machinery: LU determinant,
//! linear solves, and a one-sided Jacobi SVD.
//!
//! Everything here is fixed-size and generic over the scalar; the sizes are
//! small enough that hand-rolled kernels beat pulling in a matrix crate and
//! keep the oracle eigensolvers (nalgebra, test-only) independent of the
//! implementation path.

use crate::scalar::{real, Real, C};
use num_complex::Complex;

pub const N: usize = 6;

pub type CMat<T> = [[C<T>; N]; N];
pub type CVec<T> = [C<T>; N];
pub type RMat<T> = [[T; N]; N];
pub type RVec<T> = [T; N];

pub fn czero_mat<T: Real>() -> CMat<T> {
    [[Complex::new(T::zero(), T::zero()); N]; N]
}

/// Determinant by LU with partial pivoting. Returns `0` when the matrix is
/// exactly singular under the pivoting tolerance.
pub fn det<T: Real>(m: &CMat<T>) -> C<T> {
    let mut a = *m;
    let mut result = Complex::new(T::one(), T::zero());
    for k in 0..N {
        let mut piv = k;
        let mut max = a[k][k].norm_sqr();
        for r in (k + 1)..N {
            let v = a[r][k].norm_sqr();
            if v > max {
                max = v;
                piv = r;
            }
        }
        if max == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        if piv != k {
            a.swap(piv, k);
            result = -result;
        }
        result = result * a[k][k];
        for r in (k + 1)..N {
            let f = a[r][k] / a[k][k];
            for c in (k + 1)..N {
                a[r][c] = a[r][c] - f * a[k][c];
            }
        }
    }
    result
}

/// Solve a real 6x6 system by LU with partial pivoting.
/// Returns the solution together with a crude condition estimate
/// (max |pivot| / min |pivot|).
pub fn solve_real<T: Real>(m: &RMat<T>, rhs: &RVec<T>) -> Option<(RVec<T>, T)> {
    let mut a = *m;
    let mut b = *rhs;
    let mut piv_max = T::zero();
    let mut piv_min = T::infinity();
    for k in 0..N {
        let mut piv = k;
        let mut max = a[k][k].abs();
        for r in (k + 1)..N {
            if a[r][k].abs() > max {
                max = a[r][k].abs();
                piv = r;
            }
        }
        if max == T::zero() {
            return None;
        }
        piv_max = piv_max.max(max);
        piv_min = piv_min.min(max);
        if piv != k {
            a.swap(piv, k);
            b.swap(piv, k);
        }
        for r in (k + 1)..N {
            let f = a[r][k] / a[k][k];
            b[r] = b[r] - f * b[k];
            for c in k..N {
                a[r][c] = a[r][c] - f * a[k][c];
            }
        }
    }
    let mut x = [T::zero(); N];
    for k in (0..N).rev() {
        let mut acc = b[k];
        for c in (k + 1)..N {
            acc = acc - a[k][c] * x[c];
        }
        x[k] = acc / a[k][k];
    }
    Some((x, piv_max / piv_min))
}

/// Singular values (descending) and right singular vectors of a 6x6 complex
/// matrix by one-sided Jacobi on the columns.
///
/// The right vectors come out orthonormal by construction, which is what the
/// null-space extraction needs: the smallest singular value's vector stays
/// accurate even when sigma_6/sigma_1 is at roundoff level.
pub struct Svd<T: Real> {
    /// Singular values, descending.
    pub sigma: RVec<T>,
    /// Right singular vectors; `v[j]` is the column paired with `sigma[j]`.
    pub v: [CVec<T>; N],
}

pub fn svd<T: Real>(m: &CMat<T>) -> Svd<T> {
    // work on columns: cols[j][i] = m[i][j]
    let mut cols: [CVec<T>; N] = [[Complex::new(T::zero(), T::zero()); N]; N];
    for (i, row) in m.iter().enumerate() {
        for (j, mij) in row.iter().enumerate() {
            cols[j][i] = *mij;
        }
    }
    let mut v: [CVec<T>; N] = [[Complex::new(T::zero(), T::zero()); N]; N];
    for (j, vj) in v.iter_mut().enumerate() {
        vj[j] = Complex::new(T::one(), T::zero());
    }
    let tol = T::epsilon() * real::<T>(32.0);
    for _sweep in 0..60 {
        let mut off = T::zero();
        for i in 0..N {
            for j in (i + 1)..N {
                let (alpha, beta, gamma) = column_moments(&cols, i, j);
                let denom = (alpha * beta).sqrt();
                if denom == T::zero() {
                    continue;
                }
                let cosine = gamma.norm() / denom;
                off = off.max(cosine);
                if cosine <= tol {
                    continue;
                }
                rotate_pair(&mut cols, &mut v, i, j, alpha, beta, gamma);
            }
        }
        if off <= tol {
            break;
        }
    }
    let mut order: [usize; N] = [0, 1, 2, 3, 4, 5];
    let norms: [T; N] = core::array::from_fn(|j| col_norm(&cols[j]));
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    let sigma = core::array::from_fn(|k| norms[order[k]]);
    let vv = core::array::from_fn(|k| v[order[k]]);
    Svd { sigma, v: vv }
}

fn column_moments<T: Real>(cols: &[CVec<T>; N], i: usize, j: usize) -> (T, T, C<T>) {
    let mut alpha = T::zero();
    let mut beta = T::zero();
    let mut gamma = Complex::new(T::zero(), T::zero());
    for r in 0..N {
        alpha = alpha + cols[i][r].norm_sqr();
        beta = beta + cols[j][r].norm_sqr();
        gamma = gamma + cols[i][r].conj() * cols[j][r];
    }
    (alpha, beta, gamma)
}

fn rotate_pair<T: Real>(
    cols: &mut [CVec<T>; N],
    v: &mut [CVec<T>; N],
    i: usize,
    j: usize,
    alpha: T,
    beta: T,
    gamma: C<T>,
) {
    // phase that makes <col_i, col_j> real positive, then a real Jacobi
    // rotation annihilating it
    let g = gamma / Complex::new(gamma.norm(), T::zero());
    let tau = (alpha - beta) / (real::<T>(2.0) * gamma.norm());
    let t = {
        let s = if tau >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        -s / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = c * t;
    let (cc, ss) = (c_from(c), c_from(s));
    let gbar = g.conj();
    for r in 0..N {
        let p = cols[i][r];
        let q = cols[j][r];
        cols[i][r] = cc * p - ss * gbar * q;
        cols[j][r] = ss * g * p + cc * q;
        let pv = v[i][r];
        let qv = v[j][r];
        v[i][r] = cc * pv - ss * gbar * qv;
        v[j][r] = ss * g * pv + cc * qv;
    }
}

fn c_from<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

fn col_norm<T: Real>(col: &CVec<T>) -> T {
    col.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}
