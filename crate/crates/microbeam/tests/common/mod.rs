//! Independent numerical oracles shared by the integration suites.
//!
//! Everything here deliberately avoids the library's own linear algebra and
//! root-finding: matrices are assembled from the boundary conditions
//! directly and eigen/determinant work goes through nalgebra.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};

/// Chebyshev-Lobatto nodes on [0, 1] (increasing) and the first-derivative
/// collocation matrix, built with trig-identity differences.
pub fn cheb_d1(m: usize) -> (Vec<f64>, DMatrix<f64>) {
    let n = m + 1;
    let theta: Vec<f64> = (0..n)
        .map(|k| k as f64 * std::f64::consts::PI / m as f64)
        .collect();
    // descending nodes on [-1,1]
    let mut c = vec![1.0; n];
    c[0] = 2.0;
    c[m] = 2.0;
    for (k, ck) in c.iter_mut().enumerate() {
        if k % 2 == 1 {
            *ck = -*ck;
        }
    }
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let dx =
                    2.0 * ((theta[i] + theta[j]) / 2.0).sin() * ((theta[j] - theta[i]) / 2.0).sin();
                d[(i, j)] = (c[i] / c[j]) / dx;
            }
        }
    }
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            if i != j {
                s += d[(i, j)];
            }
        }
        d[(i, i)] = -s;
    }
    // map to [0,1] increasing: x01 = (1 - x)/2, flip order, scale by -2
    let mut d01 = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d01[(i, j)] = -2.0 * d[(m - i, m - j)];
        }
    }
    let x01: Vec<f64> = (0..n).map(|k| 0.5 * (1.0 - theta[m - k].cos())).collect();
    (x01, d01)
}

/// Collocation eigenvalues of the sixth-order operator with the clamped/free
/// boundary conditions, via the equivalent first-order system
/// u = (f, f', ..., f^(5)). Only first-derivative matrices appear, which
/// keeps the pencil norms at O(m^2) and the low modes clean.
pub fn collocation_eigenvalues(zeta: f64, m: usize, count: usize) -> Vec<f64> {
    let n = m + 1;
    let (_, d) = cheb_d1(m);
    let size = 6 * n;
    let mut a = DMatrix::<f64>::zeros(size, size);
    let mut b = DMatrix::<f64>::zeros(size, size);
    // chain rows D u_k - u_{k+1} = 0
    for k in 0..5 {
        for i in 0..n {
            for j in 0..n {
                a[(k * n + i, k * n + j)] = d[(i, j)];
            }
            a[(k * n + i, (k + 1) * n + i)] = -1.0;
        }
    }
    // operator row: u4 - zeta D u5 = lambda^2 u0
    for i in 0..n {
        a[(5 * n + i, 4 * n + i)] = 1.0;
        for j in 0..n {
            a[(5 * n + i, 5 * n + j)] = -zeta * d[(i, j)];
        }
        b[(5 * n + i, i)] = 1.0;
    }
    // boundary rows replace one collocation row per chain block
    let clear = |mat: &mut DMatrix<f64>, r: usize| {
        for j in 0..size {
            mat[(r, j)] = 0.0;
        }
    };
    // x = 0 (node 0): f = f' = f'' = 0
    for (blk, du) in [(0usize, 0usize), (1, 1), (2, 2)] {
        let r = blk * n;
        clear(&mut a, r);
        clear(&mut b, r);
        a[(r, du * n)] = 1.0;
    }
    // x = 1 (node m): f'' - zeta f'''' = 0, zeta f^(5) - f''' = 0, zeta f''' = 0
    let specs: [(usize, &[(usize, f64)]); 3] = [
        (3, &[(2, 1.0), (4, -zeta)]),
        (4, &[(5, zeta), (3, -1.0)]),
        (5, &[(3, zeta)]),
    ];
    for (blk, terms) in specs {
        let r = blk * n + m;
        clear(&mut a, r);
        clear(&mut b, r);
        for (du, cf) in terms {
            a[(r, du * n + m)] = *cf;
        }
    }
    // row scaling (left equivalence: spectrum unchanged)
    for r in 0..size {
        let mut mx = 0.0f64;
        for c in 0..size {
            mx = mx.max(a[(r, c)].abs());
        }
        if mx > 0.0 {
            for c in 0..size {
                a[(r, c)] /= mx;
                b[(r, c)] /= mx;
            }
        }
    }
    let lu = a.lu();
    let c = lu
        .solve(&b)
        .expect("collocation operator must be invertible");
    let eigs = c.complex_eigenvalues();
    let mut mus: Vec<f64> = eigs
        .iter()
        .filter(|z| z.im.abs() <= 1e-8 * z.re.abs().max(1e-300) && z.re > 1e-300)
        .map(|z| z.re)
        .collect();
    mus.sort_by(|p, q| q.partial_cmp(p).unwrap());
    // the unbalanced Schur iteration leaves ~1e-6 relative error on the
    // smaller target eigenvalues; polish each with Rayleigh-quotient
    // inverse iteration on C
    mus.iter()
        .take(count)
        .map(|mu| (1.0 / rqi_polish(&c, *mu)).sqrt())
        .collect()
}

/// Rayleigh-quotient inverse iteration for an isolated real eigenvalue of a
/// real matrix, starting from a Schur estimate.
fn rqi_polish(c: &DMatrix<f64>, mu0: f64) -> f64 {
    let n = c.nrows();
    let mut mu = mu0;
    let mut x = DMatrix::<f64>::from_fn(n, 1, |i, _| ((i * 2654435761 + 1) as f64).sin());
    x /= x.norm();
    for _ in 0..4 {
        let shifted = c - DMatrix::identity(n, n) * mu;
        let Some(y) = shifted.lu().solve(&x) else {
            break;
        };
        let ny = y.norm();
        if !ny.is_finite() || ny == 0.0 {
            break;
        }
        x = y / ny;
        let cx = c * &x;
        let rq = (x.transpose() * &cx)[(0, 0)];
        if !rq.is_finite() {
            break;
        }
        mu = rq;
    }
    mu
}

/// All six roots of zeta s^6 - s^4 + lambda^2 via the companion matrix of
/// the degree-6 polynomial directly. nalgebra's real Schur iteration fails
/// to converge on this companion form when the root pair is complex, so
/// this variant is only usable in the low-lambda (all-real-u) regime;
/// [`companion_roots_via_cubic`] covers the rest.
pub fn companion_roots_deg6(zeta: f64, lambda: f64) -> Vec<Complex<f64>> {
    // s^6 + 0 s^5 - (1/zeta) s^4 + 0 s^3 + 0 s^2 + 0 s + lambda^2/zeta
    let coeffs = [lambda * lambda / zeta, 0.0, 0.0, 0.0, -1.0 / zeta, 0.0];
    let mut m = DMatrix::<f64>::zeros(6, 6);
    for i in 1..6 {
        m[(i, i - 1)] = 1.0;
    }
    for (i, c) in coeffs.iter().enumerate() {
        m[(i, 5)] = -c;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// All six roots via the 3x3 companion matrix of the cubic in u = s^2,
/// followed by principal square roots. Independent of the library's
/// closed-form solver at every step. The raw companion eigenvalues lose
/// accuracy when the coefficient spread is large (unbalanced matrix), so
/// each is polished with two Newton steps on the cubic itself.
pub fn companion_roots_via_cubic(zeta: f64, lambda: f64) -> Vec<Complex<f64>> {
    let mut m = DMatrix::<f64>::zeros(3, 3);
    m[(1, 0)] = 1.0;
    m[(2, 1)] = 1.0;
    // u^3 - (1/zeta) u^2 + 0 u + lambda^2/zeta
    m[(0, 2)] = -lambda * lambda / zeta;
    m[(1, 2)] = 0.0;
    m[(2, 2)] = 1.0 / zeta;
    let p = |u: Complex<f64>| u * u * u - u * u / zeta + lambda * lambda / zeta;
    let dp = |u: Complex<f64>| 3.0 * u * u - 2.0 * u / zeta;
    let mut out = Vec::with_capacity(6);
    for u0 in m.complex_eigenvalues().iter() {
        let mut u = *u0;
        for _ in 0..2 {
            let d = dp(u);
            if d.norm() > 0.0 {
                u -= p(u) / d;
            }
        }
        let s = u.sqrt();
        out.push(s);
        out.push(-s);
    }
    out
}

/// Brute-force eigenvalue scan, fully independent of the library: cubic
/// roots via a 3x3 companion matrix, boundary matrix assembled raw,
/// determinant via nalgebra, indicator = Im(det) with the same
/// principal-branch conventions derived here from scratch.
pub fn brute_first_eigenvalue(zeta: f64, lo: f64, hi: f64, step: f64) -> Option<f64> {
    let f = |lambda: f64| brute_indicator(zeta, lambda);
    let mut prev_x = lo;
    let mut prev = f(prev_x);
    let mut x = lo + step;
    let lambda_c = 2.0 / (27.0f64.sqrt() * zeta);
    while x <= hi {
        let cur = f(x);
        if prev.signum() != cur.signum() {
            // bisect
            let (mut a, mut b) = (prev_x, x);
            let mut fa = prev;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if (b - a) < 1e-13 * b.abs() {
                    break;
                }
            }
            let root = 0.5 * (a + b);
            if (root - lambda_c).abs() > 1e-5 * lambda_c.max(1.0) {
                return Some(root);
            }
        }
        prev = cur;
        prev_x = x;
        x += step;
    }
    None
}

fn brute_indicator(zeta: f64, lambda: f64) -> f64 {
    // cubic u^3 - u^2/zeta + lambda^2/zeta = 0 by companion eigenvalues
    let mut m = DMatrix::<f64>::zeros(3, 3);
    m[(1, 0)] = 1.0;
    m[(2, 1)] = 1.0;
    m[(0, 2)] = -lambda * lambda / zeta;
    m[(1, 2)] = 0.0;
    m[(2, 2)] = 1.0 / zeta;
    let us: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    // classify: u1 = real root with smallest real part; s2 from the
    // upper-half member of the remaining pair (or smaller real sqrt)
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&p, &q| us[p].re.partial_cmp(&us[q].re).unwrap());
    let u1 = us[idx[0]].re.min(0.0);
    let (ub, uc) = (us[idx[1]], us[idx[2]]);
    let s1 = Complex::new(0.0, (-u1).sqrt());
    let (s2, s3) = if ub.im.abs().max(uc.im.abs())
        > 1e-9 * us.iter().map(|z| z.norm()).fold(1e-300, f64::max)
    {
        let upper = if ub.im > 0.0 { ub } else { uc };
        let s2 = upper.sqrt();
        (s2, s2.conj())
    } else {
        let mut p = ub.re.max(0.0);
        let mut q = uc.re.max(0.0);
        if p > q {
            std::mem::swap(&mut p, &mut q);
        }
        (Complex::new(p.sqrt(), 0.0), Complex::new(q.sqrt(), 0.0))
    };
    let sigmas = [s1, -s1, s2, -s2, s3, -s3];
    let mut bmat = DMatrix::<Complex<f64>>::zeros(6, 6);
    for (j, s) in sigmas.iter().enumerate() {
        let e1 = s.exp();
        let z = Complex::new(zeta, 0.0);
        let col = [
            Complex::new(1.0, 0.0),
            *s,
            s * s,
            (s * s - z * s.powu(4)) * e1,
            (z * s.powu(5) - s.powu(3)) * e1,
            z * s.powu(3) * e1,
        ];
        let scale = col.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (r, v) in col.iter().enumerate() {
            bmat[(r, j)] = v / Complex::new(scale, 0.0);
        }
    }
    bmat.lu().determinant().im
}

/// Trapezoid integral of y(t)^2 from dense samples.
pub fn trapezoid_integral(times: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..times.len() {
        let dt = times[i] - times[i - 1];
        acc += 0.5 * dt * (y[i] * y[i] + y[i - 1] * y[i - 1]);
    }
    acc
}

/// Deterministic smooth test functions for Green's-solve positivity checks.
pub fn smooth_rhs(seed: u64) -> impl Fn(f64) -> f64 {
    // simple LCG for reproducible coefficients
    let mut state = seed
        .wrapping_mul(2862933555777941757)
        .wrapping_add(3037000493);
    let mut next = move || {
        state = state
            .wrapping_mul(2862933555777941757)
            .wrapping_add(3037000493);
        ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
    };
    let c: Vec<f64> = (0..5).map(|_| next()).collect();
    move |x: f64| c[0] + c[1] * (3.0 * x).sin() + c[2] * (7.0 * x).cos() + c[3] * x * x + c[4] * x
}

pub fn l2_distance(quadw: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        acc += quadw[i] * d * d;
    }
    acc.sqrt()
}
