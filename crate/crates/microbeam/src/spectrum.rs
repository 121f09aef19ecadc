//! Boundary matrix, scaled characteristic determinant, and eigenvalue
//! localization/refinement.
//!
//! The eigenvalues lambda_n^2 of the spatial operator are the zeros of
//! det B(lambda), where B applies the six boundary conditions to the six
//! exponentials e^{±s_i x}. Two numerical facts shape the implementation:
//!
//! - entries grow like e^{a_n/2} (a_n the rescaled spectral variable), so
//!   every column is assembled with its dominant exponential factored out
//!   and the determinant is tracked as (mantissa, log-scale);
//! - with the root conventions of [`crate::charpoly`], the determinant is
//!   purely imaginary along the real lambda axis (complex conjugation maps
//!   the column set to itself through an odd permutation/negation), so
//!   Im(det) is a real, sign-changing root indicator and no per-bracket
//!   phase reference is needed. The real part doubles as a per-point noise
//!   probe: it is analytically zero, and its magnitude tracks the rounding
//!   error of the scaled determinant.
//!
//! One zero of the determinant is not an eigenvalue: at
//! lambda_c = 2/(sqrt(27) zeta) the characteristic cubic has a double root,
//! the six exponentials stop being a fundamental set, and det B vanishes
//! with a sign change even though the operator has no eigenpair there
//! (confirmed against variational bounds and a collocation discretization).
//! The scan discards refined roots that land on lambda_c.

use crate::charpoly::{self, CharRoots};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::modes::{self, Mode};
use crate::quadrature::{QuadConfig, Quadrature};
use crate::scalar::{as_f64, c_real, real, Real, C};
use num_complex::Complex;
use serde::Serialize;

/// Boundary-condition rows applied to the six fundamental exponentials,
/// column-scaled so the largest entry magnitude per column is one.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix<T> {
    /// Column-scaled entries; row r is the r-th boundary condition.
    pub entries: CMat<T>,
    /// Log magnitudes removed per column: the unscaled determinant equals
    /// the scaled determinant times exp(sum of these).
    pub column_scales: [T; 6],
    /// The roots the columns were built from.
    pub roots: CharRoots<T>,
}

/// Fraction of the u-root scale below which two roots count as coincident.
const DEGENERACY_TOL: f64 = 1e-9;

/// Assemble the scaled boundary matrix at (zeta, lambda).
///
/// Row order: phi(0), phi'(0), phi''(0), phi''(1) - zeta phi''''(1),
/// zeta phi^(5)(1) - phi^(3)(1), zeta phi^(3)(1).
/// Column order: [s1, -s1, s2, -s2, s3, -s3].
pub fn boundary_matrix<T: Real>(zeta: T, lambda: T) -> Result<BoundaryMatrix<T>> {
    let roots = charpoly::roots(zeta, lambda)?;
    boundary_matrix_from_roots(roots)
}

pub fn boundary_matrix_from_roots<T: Real>(roots: CharRoots<T>) -> Result<BoundaryMatrix<T>> {
    if roots.min_u_separation() < real::<T>(DEGENERACY_TOL) {
        return Err(Error::DegenerateRoots {
            lambda: as_f64(roots.lambda),
        });
    }
    let zeta = roots.zeta;
    let mut entries = linalg::czero_mat::<T>();
    let mut column_scales = [T::zero(); 6];
    for (j, sigma) in roots.all_six().iter().enumerate() {
        let s = *sigma;
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s2 * s2;
        let s5 = s4 * s;
        let zc = c_real(zeta);
        // dominant exponential over the column: rows at x=0 carry e^{0},
        // rows at x=1 carry e^{s}; factor out max(0, Re s)
        let shift = s.re.max(T::zero());
        let e0 = (-shift).exp(); // |e^{s*0 - shift}|
        let e1 = (s - c_real(shift)).exp();
        let one = Complex::new(T::one(), T::zero());
        let col = [
            one * c_real(e0),
            s * c_real(e0),
            s2 * c_real(e0),
            (s2 - zc * s4) * e1,
            (zc * s5 - s3) * e1,
            zc * s3 * e1,
        ];
        let max = col.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        if max == T::zero() {
            return Err(Error::DegenerateRoots {
                lambda: as_f64(roots.lambda),
            });
        }
        for (r, v) in col.iter().enumerate() {
            entries[r][j] = *v / c_real(max);
        }
        column_scales[j] = shift + max.ln();
    }
    Ok(BoundaryMatrix {
        entries,
        column_scales,
        roots,
    })
}

impl<T: Real> BoundaryMatrix<T> {
    /// Total log magnitude removed by scaling.
    pub fn log_scale(&self) -> T {
        self.column_scales.iter().fold(T::zero(), |a, b| a + *b)
    }

    /// Singular values (descending) and right singular vectors of the
    /// scaled matrix.
    pub fn svd(&self) -> linalg::Svd<T> {
        linalg::svd(&self.entries)
    }
}

/// Scaled characteristic determinant at one lambda.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharDet<T> {
    /// Real root indicator: the imaginary part of the scaled determinant
    /// (the determinant's phase is constant ±i between zeros, so the
    /// bracket-local phase normalization reduces to taking this part).
    pub indicator: T,
    /// Log magnitude removed by column scaling; the unscaled determinant is
    /// `i * indicator * exp(log_scale)` up to roundoff in the real part.
    pub log_scale: T,
    /// Real residue of the scaled determinant; analytically zero, reported
    /// as a noise probe.
    pub phase_residue: T,
}

/// Absolute real-part magnitude that signals a broken phase convention
/// rather than roundoff (measured noise is < 1e-19 on a unit-scaled matrix).
const PHASE_BREAK: f64 = 1e-6;

/// Signal-to-noise factor required to trust the indicator's sign.
const SIGN_SNR: f64 = 64.0;

pub fn char_det<T: Real>(zeta: T, lambda: T) -> Result<CharDet<T>> {
    let b = boundary_matrix(zeta, lambda)?;
    let d = linalg::det(&b.entries);
    if d.re.abs() > real::<T>(PHASE_BREAK) && d.re.abs() > d.im.abs() {
        return Err(Error::PhaseTracking {
            lambda: as_f64(lambda),
            residue: as_f64(d.re.abs()),
        });
    }
    Ok(CharDet {
        indicator: d.im,
        log_scale: b.log_scale(),
        phase_residue: d.re,
    })
}

fn sign_reliable<T: Real>(d: &CharDet<T>) -> bool {
    d.indicator.abs() > real::<T>(SIGN_SNR) * d.phase_residue.abs()
        && d.indicator.abs() > T::min_positive_value() * real::<T>(1e8)
}

/// Rescaled spectral variable and the constants of the asymptotic
/// characteristic equation (derived in closed form for zeta = 1; for other
/// zeta the same a-variable is used heuristically and every seed is
/// confirmed by the bracket sign test).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCharEq<T> {
    /// a = (27 lambda^2 / zeta - 2 / zeta^3)^(1/6)
    pub a: T,
    /// q = (1/2 + sqrt(3) i / 6) a
    pub q: C<T>,
    /// m = 1/2 + sqrt(3) i / 2
    pub m: C<T>,
}

impl<T: Real> AsymptoticCharEq<T> {
    pub fn new(zeta: T, lambda: T) -> Result<Self> {
        let a = a_of_lambda(zeta, lambda)?;
        Ok(Self::from_a(a))
    }

    pub fn from_a(a: T) -> Self {
        let sqrt3 = real::<T>(3.0).sqrt();
        let half = real::<T>(0.5);
        Self {
            a,
            q: Complex::new(half * a, sqrt3 / real::<T>(6.0) * a),
            m: Complex::new(half, sqrt3 * half),
        }
    }

    /// Dominant group of the asymptotic characteristic equation, reduced to
    /// real form: cos(sqrt(3) a / 3) + 8 e^{-a/2} cos(sqrt(3) a / 6).
    /// Its zeros seed the eigenvalue brackets.
    pub fn reduced_dominant(a: T) -> T {
        let sqrt3 = real::<T>(3.0).sqrt();
        (sqrt3 * a / real::<T>(3.0)).cos()
            + real::<T>(8.0) * (-a * real::<T>(0.5)).exp() * (sqrt3 * a / real::<T>(6.0)).cos()
    }
}

/// `a` as a function of lambda; requires 27 zeta^2 lambda^2 > 2.
pub fn a_of_lambda<T: Real>(zeta: T, lambda: T) -> Result<T> {
    let v = real::<T>(27.0) * lambda * lambda / zeta - real::<T>(2.0) / (zeta * zeta * zeta);
    if !(v > T::zero()) {
        return Err(Error::RadicandNegative {
            lambda: as_f64(lambda),
        });
    }
    Ok(v.powf(T::one() / real::<T>(6.0)))
}

/// Inverse of [`a_of_lambda`]: lambda^2 = zeta a^6 / 27 + 2 / (27 zeta^2).
pub fn lambda_of_a<T: Real>(zeta: T, a: T) -> T {
    let a2 = a * a;
    let a6 = a2 * a2 * a2;
    (zeta * a6 / real::<T>(27.0) + real::<T>(2.0) / (real::<T>(27.0) * zeta * zeta)).sqrt()
}

/// Closed-form asymptotic seed: a_n = sqrt(3) pi (n + 1/2) + (2/pi^2)(n + 1/2)^{-2},
/// with lambda_n recovered by inverting the a-definition.
///
/// The seed index n counts the zeros of the dominant cosine group; the j-th
/// smallest eigenvalue sits in slot n = j - 1 (measured; the closed form's
/// natural indexing is zero-based in the eigenvalue ordinal).
pub fn asymptotic_seed<T: Real>(n: usize, zeta: T) -> (T, T) {
    assert!(n >= 1, "asymptotic_seed is specified for n >= 1");
    seed_slot(n, zeta)
}

/// Seed for slot index >= 0 (slot j - 1 hosts the j-th smallest eigenvalue).
pub fn seed_slot<T: Real>(idx: usize, zeta: T) -> (T, T) {
    let sqrt3 = real::<T>(3.0).sqrt();
    let half = real::<T>(0.5);
    let nh = real::<T>(idx as f64) + half;
    let a = sqrt3 * T::PI() * nh + real::<T>(2.0) / (T::PI() * T::PI()) / (nh * nh);
    (a, lambda_of_a(zeta, a))
}

/// Tolerances and sizing for a spectrum computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumParams<T> {
    pub zeta: T,
    pub n_modes: usize,
    /// Relative eigenvalue tolerance |dlambda / lambda|.
    pub tol: T,
    pub quadrature: QuadConfig,
    /// Required sigma_5/sigma_6 separation for geometric simplicity.
    pub simplicity_ratio: T,
    /// Default projection residual tolerance for initial states.
    pub projection_tol: T,
}

impl<T: Real> SpectrumParams<T> {
    pub fn new(zeta: T, n_modes: usize) -> Self {
        Self {
            zeta,
            n_modes,
            tol: real::<T>(1e-12).max(T::epsilon() * real::<T>(100.0)),
            quadrature: QuadConfig::default(),
            simplicity_ratio: real::<T>(1e6),
            projection_tol: real::<T>(1e-6),
        }
    }
}

/// Ordered, normalized eigenpairs for one zeta.
#[derive(Debug, Clone)]
pub struct SpectralBasis<T> {
    zeta: T,
    modes: Vec<Mode<T>>,
    quad: Quadrature<T>,
    params: SpectrumParams<T>,
    seed_errors: Vec<T>,
    /// First 1-based ordinal from which the asymptotic seed alone would have
    /// bracketed the eigenvalue (|seed - refined| < gap/4).
    asymptotic_start: usize,
}

impl<T: Real> SpectralBasis<T> {
    pub fn zeta(&self) -> T {
        self.zeta
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode<T>] {
        &self.modes
    }

    /// Mode by 1-based ordinal.
    pub fn mode(&self, n: usize) -> Result<&Mode<T>> {
        self.modes
            .get(n.wrapping_sub(1))
            .ok_or(Error::IndexOutOfRange {
                index: n as i64,
                len: self.modes.len(),
            })
    }

    pub fn lambda(&self, n: usize) -> Result<T> {
        Ok(self.mode(n)?.lambda)
    }

    pub fn lambdas(&self) -> Vec<T> {
        self.modes.iter().map(|m| m.lambda).collect()
    }

    pub fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    pub fn params(&self) -> &SpectrumParams<T> {
        &self.params
    }

    /// |a(lambda_n) - seed slot (n-1)| per mode.
    pub fn seed_errors(&self) -> &[T] {
        &self.seed_errors
    }

    pub fn asymptotic_start(&self) -> usize {
        self.asymptotic_start
    }

    pub fn gaps(&self) -> Vec<T> {
        self.modes
            .windows(2)
            .map(|w| w[1].lambda - w[0].lambda)
            .collect()
    }
}

/// Compute the first `n` eigenpairs with default settings.
pub fn compute_spectrum<T: Real>(zeta: T, n: usize, tol: T) -> Result<SpectralBasis<T>> {
    let mut params = SpectrumParams::new(zeta, n);
    params.tol = tol.max(T::epsilon() * real::<T>(8.0));
    compute_spectrum_with(&params)
}

pub fn compute_spectrum_with<T: Real>(params: &SpectrumParams<T>) -> Result<SpectralBasis<T>> {
    let zeta = params.zeta;
    if !(zeta > T::zero()) || !zeta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "zeta",
            value: as_f64(zeta),
        });
    }
    if params.n_modes == 0 {
        return Err(Error::InvalidParameter {
            name: "n_modes",
            value: 0.0,
        });
    }
    let n = params.n_modes;
    let lambda_c = lambda_degenerate(zeta);
    // slot landmarks: eigenvalue ordinal j lives between the midpoints of
    // slots (j-2, j-1) and (j-1, j)
    let slot_lambda: Vec<T> = (0..=n).map(|idx| seed_slot(idx, zeta).1).collect();
    let half = real::<T>(0.5);
    let mut boundaries = Vec::with_capacity(n + 1);
    boundaries.push(scan_start(zeta, slot_lambda[0], lambda_c)?);
    for j in 1..=n {
        boundaries.push(half * (slot_lambda[j - 1] + slot_lambda[j]));
    }

    let mut lambdas = Vec::with_capacity(n);
    for j in 1..=n {
        let lo = boundaries[j - 1];
        let hi = boundaries[j];
        // predicted gap / 16 resolution => 32 subdivisions of the window
        let found = scan_window(zeta, lo, hi, 32, lambda_c, lambdas.len())?;
        if found.len() != 1 {
            return Err(Error::MissedRoot {
                slot: j - 1,
                found: found.len(),
            });
        }
        // the detection bracket must hold exactly one sign change
        let inner = scan_window(zeta, found[0].0, found[0].1, 8, lambda_c, lambdas.len())?;
        if inner.len() != 1 {
            return Err(Error::MissedRoot {
                slot: j - 1,
                found: inner.len(),
            });
        }
        let lambda = refine_root(zeta, inner[0], params.tol, lambdas.len())?;
        lambdas.push(lambda);
    }

    // strict ordering and gap growth over the computed range
    for w in lambdas.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::MissedRoot {
                slot: 0,
                found: lambdas.len(),
            });
        }
    }

    let quad = Quadrature::new(params.quadrature);
    let mut modes = Vec::with_capacity(n);
    let mut seed_errors = Vec::with_capacity(n);
    let mut asymptotic_start = n + 1;
    for (j, lambda) in lambdas.iter().enumerate() {
        let ordinal = j + 1;
        let mode = modes::mode_coefficients_with(zeta, *lambda, ordinal, params.simplicity_ratio)?;
        let mode = modes::normalize(mode, &quad)?;
        modes.push(mode);
        let (seed_a, seed_lam) = seed_slot(j, zeta);
        let a = a_of_lambda(zeta, *lambda).unwrap_or(T::nan());
        seed_errors.push((a - seed_a).abs());
        let gap = if j + 1 < n {
            slot_lambda[j + 1] - slot_lambda[j]
        } else {
            slot_lambda[j] - slot_lambda[j.saturating_sub(1)]
        };
        if asymptotic_start > n && (*lambda - seed_lam).abs() < gap / real::<T>(4.0) {
            asymptotic_start = ordinal;
        }
    }

    Ok(SpectralBasis {
        zeta,
        modes,
        quad,
        params: *params,
        seed_errors,
        asymptotic_start,
    })
}

/// lambda at which the characteristic cubic degenerates: 2 / (sqrt(27) zeta).
pub fn lambda_degenerate<T: Real>(zeta: T) -> T {
    real::<T>(2.0) / (real::<T>(27.0).sqrt() * zeta)
}

/// Pick a scan start below the first eigenvalue where the indicator is
/// solidly above its noise.
///
/// The quadratic form bounds the first eigenvalue from below by the
/// classical clamped-beam value (lambda_1^2 >= beta_1^4 ~ 12.36 for every
/// zeta), so starting at min(3, ...) can never skip a root.
fn scan_start<T: Real>(zeta: T, first_slot: T, lambda_c: T) -> Result<T> {
    let quarter = real::<T>(0.25);
    let mut lo = real::<T>(3.0).min(quarter * first_slot.min(lambda_c));
    for _ in 0..60 {
        let d = char_det(zeta, lo)?;
        if sign_reliable(&d) && !near_degenerate(lo, lambda_c) {
            return Ok(lo);
        }
        lo = lo * real::<T>(1.3);
        if lo > half_of(first_slot) {
            break;
        }
    }
    Err(Error::PrecisionExhausted { max_usable: 0 })
}

fn half_of<T: Real>(x: T) -> T {
    x * real::<T>(0.5)
}

fn near_degenerate<T: Real>(lambda: T, lambda_c: T) -> bool {
    (lambda - lambda_c).abs() < real::<T>(1e-6) * lambda_c.max(T::one())
}

/// Scan a window for indicator sign changes; returns candidate brackets,
/// discarding the known degeneracy crossing at lambda_c.
fn scan_window<T: Real>(
    zeta: T,
    lo: T,
    hi: T,
    steps: usize,
    lambda_c: T,
    found_so_far: usize,
) -> Result<Vec<(T, T)>> {
    let stepsf = real::<T>(steps as f64);
    let h = (hi - lo) / stepsf;
    let mut brackets = Vec::new();
    let mut prev_lambda = lo;
    let mut prev = checked_indicator(zeta, lo, found_so_far)?;
    for i in 1..=steps {
        let lambda = lo + h * real::<T>(i as f64);
        let cur = checked_indicator(zeta, lambda, found_so_far)?;
        if prev.signum() != cur.signum() {
            if is_degeneracy_crossing(zeta, prev_lambda, lambda, lambda_c, found_so_far)? {
                // even-order dip through the Wronskian degeneracy
            } else {
                brackets.push((prev_lambda, lambda));
            }
        }
        prev = cur;
        prev_lambda = lambda;
    }
    Ok(brackets)
}

/// Indicator value whose sign is safe to use; errors out when the scaled
/// determinant has no significant digits left at this precision.
fn checked_indicator<T: Real>(zeta: T, lambda: T, found_so_far: usize) -> Result<T> {
    let d = char_det(zeta, lambda)?;
    if !sign_reliable(&d) {
        return Err(Error::PrecisionExhausted {
            max_usable: found_so_far,
        });
    }
    Ok(d.indicator)
}

/// A sign change whose root refines onto lambda_c is the fundamental-set
/// degeneracy, not an eigenvalue.
fn is_degeneracy_crossing<T: Real>(
    zeta: T,
    lo: T,
    hi: T,
    lambda_c: T,
    found_so_far: usize,
) -> Result<bool> {
    if !(lo <= lambda_c && lambda_c <= hi) {
        return Ok(false);
    }
    // bisect coarsely and compare against lambda_c; converging into the
    // degenerate fundamental set is itself a positive identification
    match refine_root(zeta, (lo, hi), real::<T>(1e-9), found_so_far) {
        Ok(root) => Ok(near_degenerate(root, lambda_c)),
        Err(Error::DegenerateRoots { .. }) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Bisection to a safe width, then secant polish, on the sign indicator.
fn refine_root<T: Real>(zeta: T, bracket: (T, T), tol: T, found_so_far: usize) -> Result<T> {
    let (mut lo, mut hi) = bracket;
    let mut f_lo = checked_indicator(zeta, lo, found_so_far)?;
    let mut f_hi = checked_indicator(zeta, hi, found_so_far)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::MissedRoot {
            slot: found_so_far,
            found: 0,
        });
    }
    let half = real::<T>(0.5);
    let target = |lo: T, hi: T| (hi - lo) < tol * half * (lo.abs() + hi.abs());
    for _ in 0..200 {
        if target(lo, hi) {
            break;
        }
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // spacing limit
        }
        let d = char_det(zeta, mid)?;
        if !sign_reliable(&d) {
            // sign lost inside the final bracket: accept the midpoint, the
            // residual is below the resolvable level
            return Ok(mid);
        }
        if d.indicator.signum() == f_lo.signum() {
            lo = mid;
            f_lo = d.indicator;
        } else {
            hi = mid;
            f_hi = d.indicator;
        }
    }
    // secant polish inside the final bracket
    let mut a = lo;
    let mut b = hi;
    let mut fa = f_lo;
    let mut fb = f_hi;
    for _ in 0..8 {
        let denom = fb - fa;
        if denom == T::zero() {
            break;
        }
        let x = b - fb * (b - a) / denom;
        if !(x > lo && x < hi) {
            break;
        }
        let d = char_det(zeta, x)?;
        if !sign_reliable(&d) {
            return Ok(x);
        }
        let fx = d.indicator;
        a = b;
        fa = fb;
        b = x;
        fb = fx;
        if (b - a).abs() < tol * b.abs() {
            break;
        }
    }
    Ok((half * (a + b)).min(hi).max(lo))
}

/// Consecutive gaps plus fitted growth exponents.
#[derive(Debug, Clone, Serialize)]
pub struct GapProfile<T> {
    pub gaps: Vec<T>,
    /// log-gap vs log-index slope over the upper half (expected -> 2).
    pub gap_exponent: T,
    /// log-lambda vs log-index slope over the upper half (expected -> 3).
    pub lambda_exponent: T,
    /// Gaps strictly increase over the upper half of the computed range.
    pub gaps_diverging: bool,
}

pub fn gap_profile<T: Real>(basis: &SpectralBasis<T>) -> Result<GapProfile<T>> {
    if basis.len() < 3 {
        return Err(Error::InsufficientModes {
            needed: 3,
            got: basis.len(),
        });
    }
    let gaps = basis.gaps();
    let n = basis.len();
    let lo = n / 2;
    let ks: Vec<T> = (lo..n).map(|k| real::<T>((k + 1) as f64)).collect();
    let ls: Vec<T> = (lo..n).map(|k| basis.modes()[k].lambda).collect();
    let (lambda_exponent, _) = crate::stats::loglog_slope(&ks, &ls);
    let gk: Vec<T> = (lo..gaps.len())
        .map(|k| real::<T>((k + 1) as f64))
        .collect();
    let gv: Vec<T> = (lo..gaps.len()).map(|k| gaps[k]).collect();
    let (gap_exponent, _) = crate::stats::loglog_slope(&gk, &gv);
    let upper = &gaps[gaps.len() / 2..];
    let gaps_diverging = upper.windows(2).all(|w| w[1] > w[0]);
    Ok(GapProfile {
        gaps,
        gap_exponent,
        lambda_exponent,
        gaps_diverging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn boundary_rows_before_scaling() {
        // row 1 raw entries are all 1; row 2 raw entries are the signed roots
        let zeta = 1.0f64;
        let lambda = 10.0;
        let b = boundary_matrix(zeta, lambda).unwrap();
        let six = b.roots.all_six();
        for j in 0..6 {
            let scale = b.column_scales[j].exp();
            let raw_r0 = b.entries[0][j] * scale;
            assert_abs_diff_eq!(raw_r0.re, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(raw_r0.im, 0.0, epsilon = 1e-10);
            let raw_r1 = b.entries[1][j] * scale;
            assert_abs_diff_eq!(
                raw_r1.re,
                six[j].re,
                epsilon = 1e-10 * six[j].norm().max(1.0)
            );
            assert_abs_diff_eq!(
                raw_r1.im,
                six[j].im,
                epsilon = 1e-10 * six[j].norm().max(1.0)
            );
        }
        // columns scaled to unit max magnitude
        for j in 0..6 {
            let max = (0..6).map(|r| b.entries[r][j].norm()).fold(0.0, f64::max);
            assert_abs_diff_eq!(max, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn boundary_matrix_rejects_degenerate_roots() {
        // at lambda = 0 the cubic has a double root u = 0
        assert!(matches!(
            boundary_matrix(1.0f64, 0.0).unwrap_err(),
            Error::DegenerateRoots { .. }
        ));
    }

    #[test]
    fn indicator_nonzero_above_zero() {
        // 0 is not an eigenvalue: the operator is strictly positive
        let d = char_det(1.0f64, 0.19).unwrap();
        assert!(d.indicator.abs() > 1e-8);
        assert!(d.phase_residue.abs() < 1e-12);
    }

    #[test]
    fn determinant_is_purely_imaginary() {
        for &lambda in &[0.1, 5.0, 31.0, 500.0, 2.1e4] {
            let d = char_det(1.0f64, lambda).unwrap();
            assert!(
                d.phase_residue.abs() <= 1e-10 * d.indicator.abs().max(1e-30),
                "phase residue too large at lambda={lambda}: {d:?}"
            );
        }
    }

    #[test]
    fn seed_formula_value() {
        // frozen from the closed form: a_10 = sqrt(3) pi 10.5 + (2/pi^2) 10.5^-2
        let (a, _) = asymptotic_seed(10, 1.0f64);
        assert_abs_diff_eq!(a, 57.1365180, epsilon = 1e-6);
        // lambda <-> a inversion is exact
        let (a5, lam5) = asymptotic_seed(5, 0.7f64);
        assert_abs_diff_eq!(a_of_lambda(0.7, lam5).unwrap(), a5, epsilon = 1e-10);
    }

    #[test]
    fn seed_leading_correction() {
        // |a_n - sqrt(3) pi (n+1/2)| (n+1/2)^2 -> 2/pi^2
        // (extraction is cancellation-limited: error ~ eps * a * (n+1/2)^2)
        let sqrt3pi = 3.0f64.sqrt() * std::f64::consts::PI;
        for n in [20usize, 60, 100] {
            let (a, _) = asymptotic_seed(n, 1.0f64);
            let nh = n as f64 + 0.5;
            let corr = (a - sqrt3pi * nh) * nh * nh;
            assert_abs_diff_eq!(corr, 2.0 / std::f64::consts::PI.powi(2), epsilon = 5e-9);
        }
    }

    #[test]
    fn reduced_dominant_equation_roots_near_seeds() {
        // the dominant-group equation has roots within O(n^-2) of the seeds
        for n in [3usize, 6, 9] {
            let (a_seed, _) = asymptotic_seed(n, 1.0f64);
            let mut lo = a_seed - 0.5;
            let mut hi = a_seed + 0.5;
            let mut f_lo = AsymptoticCharEq::<f64>::reduced_dominant(lo);
            assert!(f_lo * AsymptoticCharEq::<f64>::reduced_dominant(hi) < 0.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = AsymptoticCharEq::<f64>::reduced_dominant(mid);
                if fm.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            assert!(
                (root - a_seed).abs() < 0.5 / ((n as f64 + 0.5).powi(2)),
                "reduced-equation root {root} vs seed {a_seed}"
            );
        }
    }

    #[test]
    fn asymptotic_char_eq_fields() {
        let eq = AsymptoticCharEq::new(1.0f64, 100.0).unwrap();
        assert!(eq.a > 0.0);
        assert_abs_diff_eq!(eq.q.re, 0.5 * eq.a, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.q.im, 3.0f64.sqrt() / 6.0 * eq.a, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.m.norm(), 1.0, epsilon = 1e-14);
        assert!(AsymptoticCharEq::new(1.0f64, 0.01).is_err());
    }

    #[test]
    fn degeneracy_crossing_is_not_an_eigenvalue() {
        // the indicator flips sign at lambda_c but compute_spectrum skips it
        let zeta = 1.0f64;
        let lc = lambda_degenerate(zeta);
        let before = char_det(zeta, lc * 0.99).unwrap().indicator;
        let after = char_det(zeta, lc * 1.01).unwrap().indicator;
        assert!(before.signum() != after.signum());
        let basis = compute_spectrum(zeta, 2, 1e-10).unwrap();
        assert!(
            basis.lambda(1).unwrap() > 10.0,
            "lambda_c must not be reported"
        );
    }

    #[test]
    fn first_eigenvalues_strictly_increasing() {
        let basis = compute_spectrum(1.0f64, 6, 1e-10).unwrap();
        let ls = basis.lambdas();
        assert!(ls.windows(2).all(|w| w[1] > w[0]));
        assert!(ls[0] > 0.0);
    }

    #[test]
    fn gap_profile_needs_three_modes() {
        let basis = compute_spectrum(1.0f64, 2, 1e-9).unwrap();
        assert!(matches!(
            gap_profile(&basis).unwrap_err(),
            Error::InsufficientModes { .. }
        ));
    }
}
