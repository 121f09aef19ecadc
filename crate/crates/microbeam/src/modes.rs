//! Eigenfunction construction, stable evaluation, normalization, integral
//! identities, and the inverse-operator (Green's) solve.
//!
//! A mode is stored as six anchored exponential terms
//! `amp_j * e^{sigma_j (x - anchor_j)}`: growing exponentials (Re sigma > 0)
//! are anchored at x = 1 so no intermediate ever exceeds the coefficient
//! scale. The raw nullspace coefficients c_j would under/overflow past
//! n ~ 25; the anchored form stays bounded for all computed modes and gives
//! every consumer the identical evaluation path.

use crate::charpoly::CharRoots;
use crate::error::{Error, Result};
use crate::linalg::{self, RMat, RVec};
use crate::quadrature::Quadrature;
use crate::scalar::{as_f64, c_real, real, Real, C};
use crate::spectrum::{self, BoundaryMatrix};
use num_complex::Complex;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
struct ModeTerm<T> {
    amp: C<T>,
    sigma: C<T>,
    /// 0 for decaying/neutral exponentials, 1 for growing ones.
    anchor: T,
}

/// One normalized eigenpair (lambda_n, phi_n).
#[derive(Debug, Clone, PartialEq)]
pub struct Mode<T> {
    /// 1-based ordinal in the spectrum (0 when built standalone).
    pub n: usize,
    pub lambda: T,
    pub roots: CharRoots<T>,
    /// Scalar applied to the nullspace vector to reach unit L2 norm.
    pub norm_factor: T,
    /// Orientation flag: +1 once phi'''(0) > 0 is enforced.
    pub sign: i8,
    terms: [ModeTerm<T>; 6],
    /// sum_j |amp_j| |sigma_j|^m for m = 0..=6; magnitude reference for the
    /// imaginary-residue check at each derivative order.
    order_mags: [T; 7],
}

/// Relative imaginary-residue tolerance for mode evaluation.
fn imag_tol<T: Real>() -> T {
    real::<T>(1e-6).max(T::epsilon() * real::<T>(1e4))
}

impl<T: Real> Mode<T> {
    /// Raw fundamental-solution coefficients c_1..c_6 of e^{±s_i x}.
    /// May underflow for high modes; the anchored terms are the stable
    /// representation.
    pub fn coefficients(&self) -> [C<T>; 6] {
        core::array::from_fn(|j| {
            let t = &self.terms[j];
            t.amp * (-t.sigma * c_real(t.anchor)).exp()
        })
    }

    /// Complex evaluation of the m-th derivative (no realness check).
    fn eval_complex(&self, x: T, m: usize) -> C<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for t in &self.terms {
            let mut p = Complex::new(T::one(), T::zero());
            for _ in 0..m {
                p = p * t.sigma;
            }
            acc = acc + t.amp * p * (t.sigma * c_real(x - t.anchor)).exp();
        }
        acc
    }

    /// Evaluate the m-th derivative (m in 0..=6) at x in [0, 1].
    pub fn evaluate(&self, x: T, m: usize) -> Result<T> {
        debug_assert!(m <= 6, "derivative order out of range");
        debug_assert!(x >= T::zero() && x <= T::one(), "x outside [0, 1]");
        let z = self.eval_complex(x, m);
        let scale = self.order_mags[m].max(T::min_positive_value());
        if z.im.abs() > imag_tol::<T>() * scale {
            return Err(Error::ImaginaryResidue {
                magnitude: as_f64(z.im.abs() / scale),
                tol: as_f64(imag_tol::<T>()),
            });
        }
        Ok(z.re)
    }

    /// Evaluate on many points (shared residue check, one pass).
    pub fn evaluate_many(&self, xs: &[T], m: usize) -> Result<Vec<T>> {
        xs.iter().map(|x| self.evaluate(*x, m)).collect()
    }

    /// The six boundary-condition residuals, each relative to the magnitude
    /// scale of its row.
    pub fn bc_residuals(&self) -> [T; 6] {
        let z = self.roots.zeta;
        let at = |x: T, m: usize| self.eval_complex(x, m);
        let rows: [C<T>; 6] = [
            at(T::zero(), 0),
            at(T::zero(), 1),
            at(T::zero(), 2),
            at(T::one(), 2) - c_real(z) * at(T::one(), 4),
            c_real(z) * at(T::one(), 5) - at(T::one(), 3),
            c_real(z) * at(T::one(), 3),
        ];
        let scales: [T; 6] = [
            self.order_mags[0],
            self.order_mags[1],
            self.order_mags[2],
            self.order_mags[2] + z * self.order_mags[4],
            z * self.order_mags[5] + self.order_mags[3],
            z * self.order_mags[3],
        ];
        core::array::from_fn(|r| rows[r].norm() / scales[r].max(T::min_positive_value()))
    }

    /// ODE residual ||phi'''' - zeta phi^(6) - lambda^2 phi||_2 / lambda^2
    /// with analytic derivatives.
    pub fn ode_residual(&self, quad: &Quadrature<T>) -> Result<T> {
        let z = self.roots.zeta;
        let lam2 = self.lambda * self.lambda;
        let mut acc = T::zero();
        for (x, w) in quad.nodes().iter().zip(quad.weights()) {
            let r = self.eval_complex(*x, 4)
                - c_real(z) * self.eval_complex(*x, 6)
                - c_real(lam2) * self.eval_complex(*x, 0);
            acc = acc + *w * r.norm_sqr();
        }
        Ok(acc.sqrt() / lam2)
    }

    fn rescale(&mut self, factor: T) {
        for t in self.terms.iter_mut() {
            t.amp = t.amp * c_real(factor);
        }
        for m in self.order_mags.iter_mut() {
            *m = *m * factor.abs();
        }
    }
}

/// Evaluate the m-th derivative of a mode at x; free-function form of
/// [`Mode::evaluate`].
pub fn evaluate_mode<T: Real>(mode: &Mode<T>, x: T, m: usize) -> Result<T> {
    mode.evaluate(x, m)
}

/// Nullspace coefficients of the boundary matrix at a converged eigenvalue.
/// The result is unnormalized; pass it through [`normalize`].
pub fn mode_coefficients<T: Real>(zeta: T, lambda: T) -> Result<Mode<T>> {
    mode_coefficients_with(zeta, lambda, 0, real::<T>(1e6))
}

pub fn mode_coefficients_with<T: Real>(
    zeta: T,
    lambda: T,
    ordinal: usize,
    simplicity_ratio: T,
) -> Result<Mode<T>> {
    let b = spectrum::boundary_matrix(zeta, lambda)?;
    mode_from_boundary(&b, ordinal, simplicity_ratio)
}

fn mode_from_boundary<T: Real>(
    b: &BoundaryMatrix<T>,
    ordinal: usize,
    simplicity_ratio: T,
) -> Result<Mode<T>> {
    let svd = b.svd();
    // numerical nullspace must be one-dimensional: smallest singular value
    // well separated from the second smallest
    let s5 = svd.sigma[4];
    let s6 = svd.sigma[5];
    if s6 * simplicity_ratio > s5 {
        return Err(Error::NonSimpleEigenvalue {
            n: ordinal,
            sv_ratio: as_f64(s5 / s6.max(T::min_positive_value())),
        });
    }
    let v = svd.v[5];
    let sigmas = b.roots.all_six();
    let mut terms: [ModeTerm<T>; 6] = core::array::from_fn(|j| {
        let sigma = sigmas[j];
        let anchor = if sigma.re > T::zero() {
            T::one()
        } else {
            T::zero()
        };
        // c_j = v_j / exp(column_scales_j); amp_j = c_j e^{sigma_j anchor_j},
        // assembled in log space so nothing overflows
        let exponent = sigma * c_real(anchor) - c_real(b.column_scales[j]);
        ModeTerm {
            amp: v[j] * exponent.exp(),
            sigma,
            anchor,
        }
    });
    // largest coefficient magnitude normalized to 1 before L2 normalization
    let max_amp = terms.iter().map(|t| t.amp.norm()).fold(T::zero(), T::max);
    if !(max_amp > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    for t in terms.iter_mut() {
        t.amp = t.amp / c_real(max_amp);
    }
    let mut mode = Mode {
        n: ordinal,
        lambda: b.roots.lambda,
        roots: b.roots,
        norm_factor: T::one() / max_amp,
        sign: 0,
        terms,
        order_mags: [T::zero(); 7],
    };
    mode.order_mags = order_mags(&mode.terms);
    // rotate the global phase so phi'''(0) is real and positive; a simple
    // eigenvalue of the real operator admits a real eigenfunction, so this
    // single rotation makes the whole mode real up to roundoff
    let z3 = mode.eval_complex(T::zero(), 3);
    if !(z3.norm() > T::min_positive_value() * real::<T>(1e8) * mode.order_mags[3]) {
        // phi'''(0) = 0 forces phi = 0: solver failure
        return Err(Error::ZeroNorm);
    }
    let phase = z3.conj() / c_real(z3.norm());
    for t in mode.terms.iter_mut() {
        t.amp = t.amp * phase;
    }
    mode.sign = 1;
    Ok(mode)
}

fn order_mags<T: Real>(terms: &[ModeTerm<T>; 6]) -> [T; 7] {
    let mut mags = [T::zero(); 7];
    for t in terms {
        let mut p = T::one();
        let sn = t.sigma.norm();
        for m in 0..7 {
            mags[m] = mags[m] + t.amp.norm() * p;
            p = p * sn;
        }
    }
    mags
}

/// Scale to unit L2 norm, keeping the phi'''(0) > 0 orientation.
/// Idempotent up to roundoff.
pub fn normalize<T: Real>(mut mode: Mode<T>, quad: &Quadrature<T>) -> Result<Mode<T>> {
    let mut acc = T::zero();
    for (x, w) in quad.nodes().iter().zip(quad.weights()) {
        let v = mode.evaluate(*x, 0)?;
        acc = acc + *w * v * v;
    }
    let norm = acc.sqrt();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    mode.rescale(T::one() / norm);
    mode.norm_factor = mode.norm_factor / norm;
    // orientation: phase rotation already put phi'''(0) on the positive axis
    if mode.evaluate(T::zero(), 3)? < T::zero() {
        mode.rescale(-T::one());
        mode.norm_factor = -mode.norm_factor;
    }
    mode.sign = 1;
    Ok(mode)
}

/// Gram matrix G_ij = ∫ phi_i phi_j, exactly symmetric by construction.
pub fn gram_matrix<T: Real>(basis: &spectrum::SpectralBasis<T>) -> Result<Vec<Vec<T>>> {
    let quad = basis.quadrature();
    let n = basis.len();
    let mut samples = Vec::with_capacity(n);
    for mode in basis.modes() {
        samples.push(mode.evaluate_many(quad.nodes(), 0)?);
    }
    let mut g = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = quad.inner(&samples[i], &samples[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Residuals of the eigenfunction integral identities for one normalized
/// mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport<T> {
    /// zeta (phi'''(0))^2 - lambda^2 - ∫[5 zeta (phi''')^2 + 3 (phi'')^2]
    pub r_root_moment: T,
    /// ∫[zeta (phi''')^2 + (phi'')^2] - lambda^2
    pub r_strain: T,
    /// Violation of 4 lambda^2 <= zeta (phi'''(0))^2 <= 6 lambda^2
    /// (zero when the bounds hold).
    pub bound_violation: T,
    /// zeta (phi'''(0))^2 / lambda^2, the bounded ratio itself.
    pub ratio: T,
    pub lambda: T,
}

pub fn boundary_identities<T: Real>(
    mode: &Mode<T>,
    quad: &Quadrature<T>,
) -> Result<IdentityReport<T>> {
    let zeta = mode.roots.zeta;
    let lam2 = mode.lambda * mode.lambda;
    let mut i_strain = T::zero();
    let mut i_moment = T::zero();
    for (x, w) in quad.nodes().iter().zip(quad.weights()) {
        let d2 = mode.evaluate(*x, 2)?;
        let d3 = mode.evaluate(*x, 3)?;
        i_strain = i_strain + *w * (zeta * d3 * d3 + d2 * d2);
        i_moment = i_moment + *w * (real::<T>(5.0) * zeta * d3 * d3 + real::<T>(3.0) * d2 * d2);
    }
    let p3 = mode.evaluate(T::zero(), 3)?;
    let v = zeta * p3 * p3;
    let four = real::<T>(4.0);
    let six = real::<T>(6.0);
    let violation = (four * lam2 - v).max(v - six * lam2).max(T::zero());
    Ok(IdentityReport {
        r_root_moment: v - lam2 - i_moment,
        r_strain: i_strain - lam2,
        bound_violation: violation,
        ratio: v / lam2,
        lambda: mode.lambda,
    })
}

/// f^(m) at x=0 and x=1 for m = 0..=6 (grid nodes exclude the endpoints).
type Ends<T> = [[T; 2]; 7];

/// Solution of A0 f = h as variation of parameters over the lambda = 0
/// fundamental set plus a homogeneous boundary correction.
#[derive(Debug, Clone)]
pub struct GreensSolve<T> {
    /// f^(m) on the quadrature grid, m = 0..=6.
    values: [Vec<T>; 7],
    ends: Ends<T>,
    /// Homogeneous coefficients against {1, x, x^2, x^3, e^{x/sqrt(z)}, e^{-x/sqrt(z)}}.
    pub homogeneous: RVec<T>,
    /// Condition estimate of the boundary-condition system.
    pub bc_condition: T,
    /// Right-hand side sampled on the grid.
    pub rhs: Vec<T>,
    zeta: T,
}

impl<T: Real> GreensSolve<T> {
    /// Grid samples of the m-th derivative of the solution.
    pub fn derivative(&self, m: usize) -> &[T] {
        &self.values[m]
    }

    /// L2 residual ||A0 f - h|| relative to ||h||, derivatives analytic.
    pub fn residual_l2(&self, quad: &Quadrature<T>) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 0..quad.len() {
            let a0f = self.values[4][i] - self.zeta * self.values[6][i];
            let d = a0f - self.rhs[i];
            let w = quad.weights()[i];
            num = num + w * d * d;
            den = den + w * self.rhs[i] * self.rhs[i];
        }
        (num / den.max(T::min_positive_value())).sqrt()
    }

    /// <A0 f, f> = <h, f> by quadrature.
    pub fn energy_pairing(&self, quad: &Quadrature<T>) -> T {
        quad.inner(&self.rhs, &self.values[0])
    }

    /// Residuals of the six boundary conditions of D(A0), relative to the
    /// solution's derivative scale.
    pub fn bc_residuals(&self, _quad: &Quadrature<T>) -> [T; 6] {
        let z = self.zeta;
        let e = &self.ends;
        let scale = |m: usize| {
            let vals = &self.values[m];
            vals.iter()
                .fold(T::zero(), |a, b| a.max(b.abs()))
                .max(T::min_positive_value())
        };
        [
            e[0][0].abs() / scale(0),
            e[1][0].abs() / scale(1),
            e[2][0].abs() / scale(2),
            (e[2][1] - z * e[4][1]).abs() / (scale(2) + z * scale(4)),
            (z * e[5][1] - e[3][1]).abs() / (z * scale(5) + scale(3)),
            (z * e[3][1]).abs() / (z * scale(3)),
        ]
    }
}

/// Apply the inverse operator: solve A0 f = h for h given as a function.
pub fn greens_apply<T: Real>(
    zeta: T,
    quad: &Quadrature<T>,
    h: impl Fn(T) -> T,
) -> Result<GreensSolve<T>> {
    if !(zeta > T::zero()) || !zeta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "zeta",
            value: as_f64(zeta),
        });
    }
    let r = T::one() / zeta.sqrt();
    if !(r.exp()).is_finite() {
        return Err(Error::IllConditioned {
            cond: f64::INFINITY,
        });
    }
    let nodes = quad.nodes().to_vec();
    let n = nodes.len();

    // I_j(x) = ∫_0^x C_j(s) h(s) ds, C from W(s) C = -e6/zeta, accumulated
    // panel by panel with a nested rule for the partial panel
    let c_at = |s: T| -> Result<RVec<T>> {
        let w = wronskian_matrix(zeta, s);
        let mut rhs = [T::zero(); 6];
        rhs[5] = -T::one() / zeta;
        let (c, _cond) = linalg::solve_real(&w, &rhs).ok_or(Error::IllConditioned {
            cond: f64::INFINITY,
        })?;
        Ok(c)
    };
    let mut ivals: Vec<RVec<T>> = Vec::with_capacity(n);
    let mut cum = [T::zero(); 6];
    let mut idx = 0;
    let per_panel = quad.config().nodes_per_panel;
    let panels = quad.config().panels;
    let h_panel = T::one() / real::<T>(panels as f64);
    for p in 0..panels {
        let a = real::<T>(p as f64) * h_panel;
        for _q in 0..per_panel {
            let xq = nodes[idx];
            let mut acc = cum;
            integrate_sub_vec(quad, a, xq, &c_at, &h, &mut acc)?;
            ivals.push(acc);
            idx += 1;
        }
        integrate_sub_vec(quad, a, a + h_panel, &c_at, &h, &mut cum)?;
    }
    let i_one = cum;

    // homogeneous correction from the six boundary conditions
    let y0: [RVec<T>; 7] = core::array::from_fn(|m| fundamental_derivs(zeta, T::zero(), m));
    let y1: [RVec<T>; 7] = core::array::from_fn(|m| fundamental_derivs(zeta, T::one(), m));
    let fp1 = |m: usize| -> T {
        let mut acc = T::zero();
        for j in 0..6 {
            acc = acc + y1[m][j] * i_one[j];
        }
        acc
    };
    let mut mat: RMat<T> = [[T::zero(); 6]; 6];
    for j in 0..6 {
        mat[0][j] = y0[0][j];
        mat[1][j] = y0[1][j];
        mat[2][j] = y0[2][j];
        mat[3][j] = y1[2][j] - zeta * y1[4][j];
        mat[4][j] = zeta * y1[5][j] - y1[3][j];
        mat[5][j] = zeta * y1[3][j];
    }
    let rhs: RVec<T> = [
        T::zero(),
        T::zero(),
        T::zero(),
        -(fp1(2) - zeta * fp1(4)),
        -(zeta * fp1(5) - fp1(3)),
        -(zeta * fp1(3)),
    ];
    let (gamma, cond) = linalg::solve_real(&mat, &rhs).ok_or(Error::IllConditioned {
        cond: f64::INFINITY,
    })?;
    if cond > real::<T>(1e14) {
        return Err(Error::IllConditioned { cond: as_f64(cond) });
    }

    // assemble f^(m) on the grid and at the endpoints
    let mut values: [Vec<T>; 7] = core::array::from_fn(|_| vec![T::zero(); n]);
    let mut rhs_samples = vec![T::zero(); n];
    for (i, x) in nodes.iter().enumerate() {
        let hv = h(*x);
        rhs_samples[i] = hv;
        for m in 0..7 {
            let y: RVec<T> = fundamental_derivs(zeta, *x, m);
            let mut acc = T::zero();
            for j in 0..6 {
                acc = acc + y[j] * (gamma[j] + ivals[i][j]);
            }
            if m == 6 {
                acc = acc - hv / zeta;
            }
            values[m][i] = acc;
        }
    }
    let mut ends: Ends<T> = [[T::zero(); 2]; 7];
    for m in 0..7 {
        // I(0) = 0, I(1) = i_one
        let mut at0 = T::zero();
        let mut at1 = T::zero();
        for j in 0..6 {
            at0 = at0 + y0[m][j] * gamma[j];
            at1 = at1 + y1[m][j] * (gamma[j] + i_one[j]);
        }
        if m == 6 {
            at0 = at0 - h(T::zero()) / zeta;
            at1 = at1 - h(T::one()) / zeta;
        }
        ends[m] = [at0, at1];
    }

    Ok(GreensSolve {
        values,
        ends,
        homogeneous: gamma,
        bc_condition: cond,
        rhs: rhs_samples,
        zeta,
    })
}

/// Solve A0 f = h with h given as modal coefficients sum_k c_k phi_k.
pub fn greens_apply_modal<T: Real>(
    basis: &spectrum::SpectralBasis<T>,
    coeffs: &[T],
) -> Result<GreensSolve<T>> {
    if coeffs.len() > basis.len() {
        return Err(Error::InsufficientModes {
            needed: coeffs.len(),
            got: basis.len(),
        });
    }
    let modes = basis.modes();
    let h = |x: T| {
        let mut acc = T::zero();
        for (c, m) in coeffs.iter().zip(modes) {
            acc = acc + *c * m.eval_complex(x, 0).re;
        }
        acc
    };
    greens_apply(basis.zeta(), basis.quadrature(), h)
}

/// Solve A0 f = h with h given as samples on the quadrature grid; off-node
/// values come from barycentric interpolation through the panel's nodes
/// (degree nodes-1 per panel, consistent with the grid's own accuracy).
pub fn greens_apply_samples<T: Real>(
    zeta: T,
    quad: &Quadrature<T>,
    samples: &[T],
) -> Result<GreensSolve<T>> {
    if samples.len() != quad.len() {
        return Err(Error::MismatchedGrids {
            expected: quad.len(),
            got: samples.len(),
        });
    }
    let per = quad.config().nodes_per_panel;
    let panels = quad.config().panels;
    // barycentric weights of the panel-local node layout (same every panel)
    let local: Vec<T> = quad.unit_rule().map(|(x, _)| x).collect();
    let mut wts = vec![T::one(); per];
    for i in 0..per {
        for j in 0..per {
            if i != j {
                wts[i] = wts[i] / (local[i] - local[j]);
            }
        }
    }
    let h_panel = T::one() / real::<T>(panels as f64);
    let h = move |x: T| {
        let p = ((x * real::<T>(panels as f64))
            .floor()
            .to_usize()
            .unwrap_or(0))
        .min(panels - 1);
        let start = real::<T>(p as f64) * h_panel;
        let u = (x - start) / h_panel;
        let base = p * per;
        let mut num = T::zero();
        let mut den = T::zero();
        for q in 0..per {
            let d = u - local[q];
            if d == T::zero() {
                return samples[base + q];
            }
            let w = wts[q] / d;
            num = num + w * samples[base + q];
            den = den + w;
        }
        num / den
    };
    greens_apply(zeta, quad, h)
}

fn integrate_sub_vec<T: Real>(
    quad: &Quadrature<T>,
    a: T,
    b: T,
    c_at: &impl Fn(T) -> Result<RVec<T>>,
    h: &impl Fn(T) -> T,
    acc: &mut RVec<T>,
) -> Result<()> {
    let span = b - a;
    if span == T::zero() {
        return Ok(());
    }
    for (xu, wu) in quad.unit_rule() {
        let t = a + span * xu;
        let c = c_at(t)?;
        let hw = h(t) * span * wu;
        for j in 0..6 {
            acc[j] = acc[j] + c[j] * hw;
        }
    }
    Ok(())
}

/// m-th derivatives of the lambda = 0 fundamental set
/// {1, x, x^2, x^3, e^{x/sqrt(zeta)}, e^{-x/sqrt(zeta)}}.
fn fundamental_derivs<T: Real>(zeta: T, x: T, m: usize) -> RVec<T> {
    let r = T::one() / zeta.sqrt();
    let mut out = [T::zero(); 6];
    // polynomial part: d^m/dx^m of x^p
    for (p, slot) in (0usize..4).zip(0..4) {
        out[slot] = if m > p {
            T::zero()
        } else {
            let mut coef = T::one();
            for k in 0..m {
                coef = coef * real::<T>((p - k) as f64);
            }
            coef * x.powi((p - m) as i32)
        };
    }
    let mut rp = T::one();
    for _ in 0..m {
        rp = rp * r;
    }
    out[4] = rp * (r * x).exp();
    out[5] = rp
        * (-r * x).exp()
        * if m.is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
    out
}

/// Wronskian matrix of the fundamental set at s: W[m][j] = y_j^(m)(s).
fn wronskian_matrix<T: Real>(zeta: T, s: T) -> RMat<T> {
    core::array::from_fn(|m| fundamental_derivs(zeta, s, m))
}
