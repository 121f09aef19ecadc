//! Exact modal time evolution of the zero-input beam, output traces
//! y(t) = zeta w_xxx(0, t), and the multiplier-identity / observability
//! verifications.
//!
//! The semigroup is diagonal in the eigenbasis, so time never gets
//! discretized: every mode rotates as w_k(t) = a_k cos(lambda_k t) +
//! (b_k / lambda_k) sin(lambda_k t), and time integrals of products are
//! evaluated from the closed forms for ∫ cos cos, ∫ cos sin, ∫ sin sin.

use crate::error::{Error, Result};
use crate::model::EnergySnapshot;
use crate::observability::observability_constants;
use crate::scalar::{as_f64, real, Real};
use crate::spectrum::SpectralBasis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Initial-condition projection onto the computed modes: displacement
/// coefficients a_k = <w0, phi_k> and velocity coefficients b_k = <v0, phi_k>.
#[derive(Debug, Clone)]
pub struct ModalState<'a, T> {
    basis: &'a SpectralBasis<T>,
    a: Vec<T>,
    b: Vec<T>,
    /// L2 residuals ||w0 - sum a_k phi_k||, ||v0 - sum b_k phi_k||.
    pub residual_w: T,
    pub residual_v: T,
}

impl<'a, T: Real> ModalState<'a, T> {
    /// Build directly from modal coefficients (exactly representable state).
    pub fn from_coefficients(basis: &'a SpectralBasis<T>, a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if a.len() != basis.len() || b.len() != basis.len() {
            return Err(Error::MismatchedGrids {
                expected: basis.len(),
                got: a.len().max(b.len()),
            });
        }
        Ok(Self {
            basis,
            a,
            b,
            residual_w: T::zero(),
            residual_v: T::zero(),
        })
    }

    pub fn basis(&self) -> &'a SpectralBasis<T> {
        self.basis
    }

    pub fn displacement_coefficients(&self) -> &[T] {
        &self.a
    }

    pub fn velocity_coefficients(&self) -> &[T] {
        &self.b
    }

    /// Conserved total energy E = 1/2 sum (a_k^2 lambda_k^2 + b_k^2),
    /// equal to the squared state-space norm of the initial state.
    pub fn energy(&self) -> T {
        let mut acc = T::zero();
        for ((a, b), m) in self.a.iter().zip(&self.b).zip(self.basis.modes()) {
            acc = acc + *a * *a * m.lambda * m.lambda + *b * *b;
        }
        real::<T>(0.5) * acc
    }

    /// Per-mode trig factors at time t: (w_k(t), w_k'(t)).
    fn factors(&self, t: T) -> Vec<(T, T)> {
        self.basis
            .modes()
            .iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(m, (a, b))| {
                let (s, c) = (m.lambda * t).sin_cos();
                (*a * c + *b / m.lambda * s, -*a * m.lambda * s + *b * c)
            })
            .collect()
    }
}

/// Project initial fields given as functions onto the basis.
pub fn project_initial<'a, T: Real>(
    w0: impl Fn(T) -> T,
    v0: impl Fn(T) -> T,
    basis: &'a SpectralBasis<T>,
) -> Result<ModalState<'a, T>> {
    let quad = basis.quadrature();
    let w_samples: Vec<T> = quad.nodes().iter().map(|x| w0(*x)).collect();
    let v_samples: Vec<T> = quad.nodes().iter().map(|x| v0(*x)).collect();
    project_samples(&w_samples, &v_samples, basis)
}

/// Project initial fields sampled on the basis quadrature grid.
pub fn project_samples<'a, T: Real>(
    w0: &[T],
    v0: &[T],
    basis: &'a SpectralBasis<T>,
) -> Result<ModalState<'a, T>> {
    let quad = basis.quadrature();
    if w0.len() != quad.len() || v0.len() != quad.len() {
        return Err(Error::MismatchedGrids {
            expected: quad.len(),
            got: w0.len().max(v0.len()),
        });
    }
    let n = basis.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut phi = Vec::with_capacity(n);
    for mode in basis.modes() {
        let p = mode.evaluate_many(quad.nodes(), 0)?;
        a.push(quad.inner(w0, &p));
        b.push(quad.inner(v0, &p));
        phi.push(p);
    }
    let resid = |samples: &[T], coeffs: &[T]| {
        let mut acc = T::zero();
        for i in 0..quad.len() {
            let mut rec = T::zero();
            for (c, p) in coeffs.iter().zip(&phi) {
                rec = rec + *c * p[i];
            }
            let d = samples[i] - rec;
            acc = acc + quad.weights()[i] * d * d;
        }
        acc.sqrt()
    };
    let residual_w = resid(w0, &a);
    let residual_v = resid(v0, &b);
    Ok(ModalState {
        basis,
        a,
        b,
        residual_w,
        residual_v,
    })
}

impl<'a, T: Real> ModalState<'a, T> {
    /// Error out when the projection left more than `tol` of either field
    /// unresolved.
    pub fn ensure_resolved(&self, tol: T) -> Result<()> {
        let r = self.residual_w.max(self.residual_v);
        if r > tol {
            return Err(Error::TruncationResidual {
                residual: as_f64(r),
                tol: as_f64(tol),
            });
        }
        Ok(())
    }
}

/// Field snapshot at one time: modal coefficients of displacement and
/// velocity, evaluable at any x with analytic spatial derivatives.
#[derive(Debug, Clone)]
pub struct Evolved<'a, T> {
    basis: &'a SpectralBasis<T>,
    pub t: T,
    pub w_coeffs: Vec<T>,
    pub v_coeffs: Vec<T>,
}

impl<'a, T: Real> Evolved<'a, T> {
    /// (d^m w / dx^m, d^m w_t / dx^m) at x.
    pub fn eval(&self, x: T, m: usize) -> Result<(T, T)> {
        let mut w = T::zero();
        let mut v = T::zero();
        for ((mode, wc), vc) in self
            .basis
            .modes()
            .iter()
            .zip(&self.w_coeffs)
            .zip(&self.v_coeffs)
        {
            let p = mode.evaluate(x, m)?;
            w = w + *wc * p;
            v = v + *vc * p;
        }
        Ok((w, v))
    }

    /// Samples of (d^m w/dx^m, d^m w_t/dx^m) on the quadrature grid.
    pub fn sample_grid(&self, m: usize) -> Result<(Vec<T>, Vec<T>)> {
        let nodes = self.basis.quadrature().nodes();
        let mut w = vec![T::zero(); nodes.len()];
        let mut v = vec![T::zero(); nodes.len()];
        for ((mode, wc), vc) in self
            .basis
            .modes()
            .iter()
            .zip(&self.w_coeffs)
            .zip(&self.v_coeffs)
        {
            let p = mode.evaluate_many(nodes, m)?;
            for i in 0..nodes.len() {
                w[i] = w[i] + *wc * p[i];
                v[i] = v[i] + *vc * p[i];
            }
        }
        Ok((w, v))
    }
}

/// Exact modal evolution to time t.
pub fn evolve<'a, T: Real>(state: &ModalState<'a, T>, t: T) -> Evolved<'a, T> {
    let f = state.factors(t);
    Evolved {
        basis: state.basis,
        t,
        w_coeffs: f.iter().map(|p| p.0).collect(),
        v_coeffs: f.iter().map(|p| p.1).collect(),
    }
}

/// Output trace y(t) = zeta w_xxx(0, t) with its exact squared integral.
#[derive(Debug, Clone, Serialize)]
pub struct OutputSeries<T> {
    pub times: Vec<T>,
    pub y: Vec<T>,
    /// ∫_0^T y^2 dt from closed-form pairwise trig integrals (exact for the
    /// truncated expansion, independent of the sampling).
    pub integral_y2: T,
}

/// y(t) samples plus the closed-form ∫ y^2 over [0, horizon].
pub fn output_series<T: Real>(
    state: &ModalState<'_, T>,
    horizon: T,
    samples: usize,
) -> Result<OutputSeries<T>> {
    if !(horizon > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: as_f64(horizon),
        });
    }
    let basis = state.basis;
    let zeta = basis.zeta();
    let n = basis.len();
    // g_k = zeta phi_k'''(0)
    let mut g = Vec::with_capacity(n);
    for mode in basis.modes() {
        g.push(zeta * mode.evaluate(T::zero(), 3)?);
    }
    let mut times = Vec::with_capacity(samples.max(2));
    let mut y = Vec::with_capacity(samples.max(2));
    let steps = samples.max(2) - 1;
    for i in 0..=steps {
        let t = horizon * real::<T>(i as f64) / real::<T>(steps as f64);
        let f = state.factors(t);
        let mut acc = T::zero();
        for (gk, (wk, _)) in g.iter().zip(&f) {
            acc = acc + *gk * *wk;
        }
        times.push(t);
        y.push(acc);
    }
    let integral_y2 = integral_y_squared(state, &g, horizon);
    Ok(OutputSeries {
        times,
        y,
        integral_y2,
    })
}

/// ∫_0^T (sum_k g_k w_k(t))^2 dt in closed form.
fn integral_y_squared<T: Real>(state: &ModalState<'_, T>, g: &[T], horizon: T) -> T {
    let modes = state.basis.modes();
    let n = modes.len();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let li = modes[i].lambda;
            let lj = modes[j].lambda;
            let ints = trig_pair_integrals(li, lj, horizon, i == j);
            let (ai, bi) = (state.a[i], state.b[i] / li);
            let (aj, bj) = (state.a[j], state.b[j] / lj);
            let wiwj =
                ai * aj * ints.cc + ai * bj * ints.cs + bi * aj * ints.sc + bi * bj * ints.ss;
            acc = acc + g[i] * g[j] * wiwj;
        }
    }
    acc
}

/// Closed-form ∫_0^T of cos(a t)cos(b t), cos(a t)sin(b t), sin(a t)cos(b t),
/// sin(a t)sin(b t).
struct TrigIntegrals<T> {
    cc: T,
    cs: T,
    sc: T,
    ss: T,
}

fn trig_pair_integrals<T: Real>(a: T, b: T, t: T, equal: bool) -> TrigIntegrals<T> {
    let half = real::<T>(0.5);
    if equal {
        // a == b exactly (same mode index)
        let two_a = real::<T>(2.0) * a;
        let s2 = (two_a * t).sin();
        let c2 = (two_a * t).cos();
        TrigIntegrals {
            cc: half * t + s2 / (real::<T>(2.0) * two_a),
            ss: half * t - s2 / (real::<T>(2.0) * two_a),
            cs: (T::one() - c2) / (real::<T>(2.0) * two_a),
            sc: (T::one() - c2) / (real::<T>(2.0) * two_a),
        }
    } else {
        let d = a - b;
        let s = a + b;
        let sd = (d * t).sin();
        let ss_ = (s * t).sin();
        let cd = (d * t).cos();
        let cs_ = (s * t).cos();
        TrigIntegrals {
            cc: half * (sd / d + ss_ / s),
            ss: half * (sd / d - ss_ / s),
            // ∫ cos(a t) sin(b t) = (1 - cs)/(2s) - (1 - cd)/(2d) ... with
            // d = a - b: ∫ cos a sin b = [ (1-cos((a+b)t))/(a+b) - (1-cos((a-b)t))/(a-b) ] / 2
            cs: half * ((T::one() - cs_) / s - (T::one() - cd) / d),
            sc: half * ((T::one() - cs_) / s + (T::one() - cd) / d),
        }
    }
}

/// Energy at one sampled time, from the modal closed form and independently
/// from quadrature of the reconstructed fields.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyTracePoint<T> {
    pub t: T,
    pub modal: EnergySnapshot<T>,
    pub quadrature: EnergySnapshot<T>,
}

pub fn energy_trace<T: Real>(
    state: &ModalState<'_, T>,
    times: &[T],
) -> Result<Vec<EnergyTracePoint<T>>> {
    let basis = state.basis;
    let quad = basis.quadrature();
    let zeta = basis.zeta();
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let ev = evolve(state, t);
        // modal closed form
        let mut kin = T::zero();
        let mut strain = T::zero();
        for ((m, wk), vk) in basis.modes().iter().zip(&ev.w_coeffs).zip(&ev.v_coeffs) {
            strain = strain + *wk * *wk * m.lambda * m.lambda;
            kin = kin + *vk * *vk;
        }
        let modal = EnergySnapshot {
            kinetic: real::<T>(0.5) * kin,
            strain: real::<T>(0.5) * strain,
            total: real::<T>(0.5) * (kin + strain),
        };
        // quadrature of reconstructed fields
        let (w2, _) = ev.sample_grid(2)?;
        let (w3, _) = ev.sample_grid(3)?;
        let (_, v) = ev.sample_grid(0)?;
        let quadrature = crate::model::energy(quad, &w2, &w3, &v, zeta)?;
        out.push(EnergyTracePoint {
            t,
            modal,
            quadrature,
        });
    }
    Ok(out)
}

/// Both sides of the multiplier identity
/// ∫_0^T zeta (w_xxx)^2|_{x=0} dt
///   = ∫_0^T ∫_0^1 [w_t^2 + 3 w_xx^2 + 5 zeta w_xxx^2] dx dt
///     + 2 ∫_0^1 [(x - 1) w_x w_t]_0^T dx,
/// with time integrals closed-form per mode pair and space integrals on the
/// shared grid (time-first order).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MultiplierCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub relative_residual: T,
}

pub fn multiplier_identity_check<T: Real>(
    state: &ModalState<'_, T>,
    horizon: T,
) -> Result<MultiplierCheck<T>> {
    if !(horizon > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: as_f64(horizon),
        });
    }
    let basis = state.basis;
    let quad = basis.quadrature();
    let zeta = basis.zeta();
    let n = basis.len();
    let modes = basis.modes();

    // boundary third derivatives and grid samples per mode
    let mut p3 = Vec::with_capacity(n);
    let mut s0 = Vec::with_capacity(n);
    let mut s2 = Vec::with_capacity(n);
    let mut s3 = Vec::with_capacity(n);
    for m in modes {
        p3.push(m.evaluate(T::zero(), 3)?);
        s0.push(m.evaluate_many(quad.nodes(), 0)?);
        s2.push(m.evaluate_many(quad.nodes(), 2)?);
        s3.push(m.evaluate_many(quad.nodes(), 3)?);
    }

    let mut lhs = T::zero();
    let mut rhs_double = T::zero();
    for i in 0..n {
        for j in 0..n {
            let li = modes[i].lambda;
            let lj = modes[j].lambda;
            let ints = trig_pair_integrals(li, lj, horizon, i == j);
            let (ai, bi) = (state.a[i], state.b[i] / li);
            let (aj, bj) = (state.a[j], state.b[j] / lj);
            // ∫ w_i w_j dt
            let wiwj =
                ai * aj * ints.cc + ai * bj * ints.cs + bi * aj * ints.sc + bi * bj * ints.ss;
            // ∫ w_i' w_j' dt with w_k' = -a_k l_k sin + b_k cos
            let (ci, di) = (-state.a[i] * li, state.b[i]);
            let (cj, dj) = (-state.a[j] * lj, state.b[j]);
            let vivj =
                ci * cj * ints.ss + ci * dj * ints.sc + di * cj * ints.cs + di * dj * ints.cc;
            lhs = lhs + zeta * p3[i] * p3[j] * wiwj;
            let gram = quad.inner(&s0[i], &s0[j]);
            let a2 = quad.inner(&s2[i], &s2[j]);
            let a3 = quad.inner(&s3[i], &s3[j]);
            rhs_double = rhs_double
                + vivj * gram
                + wiwj * (real::<T>(3.0) * a2 + real::<T>(5.0) * zeta * a3);
        }
    }

    // boundary term 2 ∫ (x-1) w_x w_t dx at t = T minus t = 0
    let bterm = |t: T| -> Result<T> {
        let ev = evolve(state, t);
        let (w1, _) = ev.sample_grid(1)?;
        let (_, v) = ev.sample_grid(0)?;
        let mut acc = T::zero();
        for ((x, w), (wx, vt)) in quad
            .nodes()
            .iter()
            .zip(quad.weights())
            .zip(w1.iter().zip(&v))
        {
            acc = acc + *w * (*x - T::one()) * *wx * *vt;
        }
        Ok(acc)
    };
    let rhs = rhs_double + real::<T>(2.0) * (bterm(horizon)? - bterm(T::zero())?);
    let scale = lhs.abs().max(rhs.abs()).max(T::min_positive_value());
    Ok(MultiplierCheck {
        lhs,
        rhs,
        relative_residual: (lhs - rhs).abs() / scale,
    })
}

/// Verdict of the two-sided observability estimate for one state:
/// lower E <= ∫ y^2 <= upper E.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SandwichReport<T> {
    pub energy: T,
    pub integral_y2: T,
    pub lower_constant: T,
    pub upper_constant: T,
    /// integral - lower * E (meaningful when the lower constant is positive).
    pub lower_margin: T,
    /// upper * E - integral.
    pub upper_margin: T,
    pub lower_applicable: bool,
    pub holds: bool,
}

pub fn observability_check<T: Real>(
    state: &ModalState<'_, T>,
    horizon: T,
) -> Result<SandwichReport<T>> {
    let consts = observability_constants(state.basis.zeta(), horizon);
    let energy = state.energy();
    let series = output_series(state, horizon, 2)?;
    let integral = series.integral_y2;
    let lower_margin = integral - consts.lower * energy;
    let upper_margin = consts.upper * energy - integral;
    let holds =
        upper_margin >= T::zero() && (!consts.lower_is_positive || lower_margin >= T::zero());
    Ok(SandwichReport {
        energy,
        integral_y2: integral,
        lower_constant: consts.lower,
        upper_constant: consts.upper,
        lower_margin,
        upper_margin,
        lower_applicable: consts.lower_is_positive,
        holds,
    })
}

/// Random unit-energy state: coefficients drawn uniformly on the unit sphere
/// of the energy norm, deterministically from the seed.
///
/// Sampling is fixed to f64 internally so a given seed produces the same
/// state for every scalar type.
pub fn random_state<'a, T: Real>(
    basis: &'a SpectralBasis<T>,
    n_modes: usize,
    seed: u64,
) -> Result<ModalState<'a, T>> {
    if n_modes > basis.len() {
        return Err(Error::InsufficientModes {
            needed: n_modes,
            got: basis.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // gaussian via Box-Muller on uniform draws (deterministic across types)
    let mut gauss = || {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    // energy coordinates u_k = a_k lambda_k / sqrt(2), v_k = b_k / sqrt(2)
    let mut u = vec![0.0f64; n_modes];
    let mut v = vec![0.0f64; n_modes];
    let mut norm_sq = 0.0;
    for k in 0..n_modes {
        u[k] = gauss();
        v[k] = gauss();
        norm_sq += u[k] * u[k] + v[k] * v[k];
    }
    let norm = norm_sq.sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut a = vec![T::zero(); basis.len()];
    let mut b = vec![T::zero(); basis.len()];
    for k in 0..n_modes {
        let lambda = basis.modes()[k].lambda;
        a[k] = real::<T>(sqrt2 * u[k] / norm) / lambda;
        b[k] = real::<T>(sqrt2 * v[k] / norm);
    }
    ModalState::from_coefficients(basis, a, b)
}
