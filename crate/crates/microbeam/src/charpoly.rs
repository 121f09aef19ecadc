//! Roots of the characteristic polynomial `zeta s^6 - s^4 + lambda^2 = 0`,
//! exactly (closed-form cubic in u = s^2) and in the large-lambda
//! approximation.
//!
//! Root conventions, relied on by the boundary-matrix determinant:
//! - `s1` is the branch continuous with the purely imaginary asymptote
//!   (its `u = s1^2` is the real root with smallest real part, always <= 0
//!   for lambda > 0), taken with Im(s1) >= 0;
//! - `s2` is the member of the remaining pair with positive imaginary part
//!   when that pair is complex, and the smaller square root when it is real;
//! - `s3` is exactly `conj(s2)` in the complex regime.
//!
//! With these conventions the multiset {±s1, ±s2, ±s3} is closed under
//! negation and conjugation, and the boundary determinant built from them is
//! purely imaginary along the real lambda axis.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, c_real, real, Real, C};
use num_complex::Complex;
use serde::Serialize;

/// Default relative tolerance for the residual check on returned roots.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// The three root representatives of `zeta s^6 - s^4 + lambda^2 = 0`
/// (one per ± pair), plus the squared roots `u = s^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharRoots<T> {
    pub s1: C<T>,
    pub s2: C<T>,
    pub s3: C<T>,
    pub lambda: T,
    pub zeta: T,
}

impl<T: Real> CharRoots<T> {
    /// All six roots in the column order used by the boundary matrix:
    /// `[s1, -s1, s2, -s2, s3, -s3]`.
    pub fn all_six(&self) -> [C<T>; 6] {
        [self.s1, -self.s1, self.s2, -self.s2, self.s3, -self.s3]
    }

    pub fn representatives(&self) -> [C<T>; 3] {
        [self.s1, self.s2, self.s3]
    }

    /// Squared representatives `u_i = s_i^2`.
    pub fn u(&self) -> [C<T>; 3] {
        [self.s1 * self.s1, self.s2 * self.s2, self.s3 * self.s3]
    }

    /// Polynomial residual `|zeta s^6 - s^4 + lambda^2|` relative to the
    /// dominant term magnitude. The scale is floored by the dominant terms
    /// of the largest root so that a root cluster at the origin (lambda = 0)
    /// is not judged against its own vanishing scale.
    pub fn relative_residual(&self, s: C<T>) -> T {
        let val = self.poly_at(s).norm();
        let scale = self
            .term_scale(s)
            .max(self.global_scale())
            .max(T::min_positive_value());
        val / scale
    }

    fn poly_at(&self, s: C<T>) -> C<T> {
        let s2 = s * s;
        let s4 = s2 * s2;
        c_real(self.zeta) * s4 * s2 - s4 + c_real(self.lambda * self.lambda)
    }

    fn term_scale(&self, s: C<T>) -> T {
        let s2 = s * s;
        let s4 = s2 * s2;
        (c_real(self.zeta) * s4 * s2)
            .norm()
            .max(s4.norm())
            .max(self.lambda * self.lambda)
    }

    fn global_scale(&self) -> T {
        self.representatives()
            .iter()
            .map(|s| self.term_scale(*s))
            .fold(T::zero(), T::max)
    }

    pub fn max_relative_residual(&self) -> T {
        self.representatives()
            .iter()
            .map(|s| self.relative_residual(*s))
            .fold(T::zero(), T::max)
    }

    /// Minimum pairwise separation of the `u_i`, as a fraction of their
    /// largest magnitude; near zero means the fundamental set degenerates.
    pub fn min_u_separation(&self) -> T {
        let u = self.u();
        let scale = u
            .iter()
            .map(|z| z.norm())
            .fold(T::min_positive_value(), T::max);
        let mut min = T::infinity();
        for i in 0..3 {
            for j in (i + 1)..3 {
                min = min.min((u[i] - u[j]).norm());
            }
        }
        min / scale
    }
}

/// Exact roots via the cubic in `u = s^2`, solved in trigonometric form.
///
/// The unified complex-arccosine branch keeps the representatives continuous
/// as lambda crosses the regime boundary where the two non-negative real
/// roots collide and turn into a conjugate pair.
pub fn roots<T: Real>(zeta: T, lambda: T) -> Result<CharRoots<T>> {
    // precision-aware default: 1e-12 in f64, correspondingly looser in f32
    let tol = real::<T>(DEFAULT_ROOT_TOL).max(T::epsilon() * real::<T>(1e3));
    roots_with_tol(zeta, lambda, tol)
}

pub fn roots_with_tol<T: Real>(zeta: T, lambda: T, tol: T) -> Result<CharRoots<T>> {
    if !(zeta > T::zero()) || !zeta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "zeta",
            value: as_f64(zeta),
        });
    }
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: as_f64(lambda),
        });
    }
    // monic cubic u^3 - u^2/zeta + lambda^2/zeta; depressed with u = v + 1/(3 zeta):
    // v^3 + p v + q, p = -1/(3 zeta^2), q = lambda^2/zeta - 2/(27 zeta^3)
    let third = T::one() / real::<T>(3.0);
    let shift = third / zeta;
    let lam2 = lambda * lambda;
    let q = lam2 / zeta - real::<T>(2.0 / 27.0) / (zeta * zeta * zeta);
    // amplitude 2 sqrt(-p/3) = 2/(3 zeta); cos(theta) = 1 - 27 zeta^2 lam^2 / 2
    let amp = real::<T>(2.0) * third / zeta;
    let h = -real::<T>(13.5) * zeta * zeta * zeta * q;
    let theta = Complex::new(h, T::zero()).acos();
    let two_pi_3 = real::<T>(2.0) * T::PI() * third;
    let mut us: [C<T>; 3] = core::array::from_fn(|k| {
        let angle = theta * c_real(third) - c_real(two_pi_3 * real::<T>(k as f64));
        c_real(amp) * angle.cos() + c_real(shift)
    });
    // Newton polish recovers full precision after the trig branch (two steps
    // cover the slow first step near the double-root transition)
    for u in us.iter_mut() {
        *u = newton_cubic(zeta, lam2, *u);
        *u = newton_cubic(zeta, lam2, *u);
    }
    let classified = classify(us, zeta, lambda);
    let out = CharRoots {
        s1: classified[0],
        s2: classified[1],
        s3: classified[2],
        lambda,
        zeta,
    };
    let residual = out.max_relative_residual();
    if residual > tol {
        return Err(Error::RepresentativePairing {
            residual: as_f64(residual),
            tol: as_f64(tol),
        });
    }
    Ok(out)
}

fn newton_cubic<T: Real>(zeta: T, lam2: T, u: C<T>) -> C<T> {
    // P(u) = u^3 - u^2/zeta + lam2/zeta
    let inv_zeta = c_real(T::one() / zeta);
    let p = u * u * u - u * u * inv_zeta + c_real(lam2) * inv_zeta;
    let dp = c_real(real::<T>(3.0)) * u * u - c_real(real::<T>(2.0)) * u * inv_zeta;
    if dp.norm() == T::zero() {
        return u;
    }
    u - p / dp
}

/// Sort the cubic roots into the (s1, s2, s3) convention and take
/// representatives with the principal square root.
fn classify<T: Real>(us: [C<T>; 3], _zeta: T, _lambda: T) -> [C<T>; 3] {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| us[a].re.partial_cmp(&us[b].re).unwrap());
    let scale = us
        .iter()
        .map(|z| z.norm())
        .fold(T::min_positive_value(), T::max);
    // roundoff-level magnitudes are exact zeros of the factored cubic
    // (the lambda = 0 double root)
    let snap = |v: T| {
        if v.abs() < T::epsilon() * real::<T>(16.0) * scale {
            T::zero()
        } else {
            v
        }
    };
    // u1: smallest real part, forced exactly real (it is real for all
    // lambda >= 0; the imaginary residue is roundoff)
    let u1 = snap(us[idx[0]].re.min(T::zero()));
    let (ub, uc) = (us[idx[1]], us[idx[2]]);
    let imag_mag = ub.im.abs().max(uc.im.abs());
    let s1 = Complex::new(T::zero(), (-u1).sqrt());
    if imag_mag > real::<T>(1e-7) * scale {
        // conjugate pair: u2 in the upper half plane, symmetrized exactly
        let upper = if ub.im > T::zero() { ub } else { uc };
        let lower = if ub.im > T::zero() { uc } else { ub };
        let u2 = (upper + lower.conj()) * c_real(real::<T>(0.5));
        let s2 = u2.sqrt();
        [s1, s2, s2.conj()]
    } else {
        // both real (non-negative); representatives are real square roots
        let mut b = snap(ub.re).max(T::zero());
        let mut c = snap(uc.re).max(T::zero());
        if b > c {
            core::mem::swap(&mut b, &mut c);
        }
        [s1, c_real(b.sqrt()), c_real(c.sqrt())]
    }
}

/// Closed-form large-lambda approximations of the squared roots:
/// `s1^2 = -(1/3z) X`, `s2^2, s3^2 = (1/6z) X (1 ± sqrt(3) i)` with
/// `X = (27 z^2 lam^2 - 2)^(1/3)`.
pub fn asymptotic_roots<T: Real>(zeta: T, lambda: T) -> Result<CharRoots<T>> {
    if !(zeta > T::zero()) || !zeta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "zeta",
            value: as_f64(zeta),
        });
    }
    let radicand = real::<T>(27.0) * zeta * zeta * lambda * lambda - real::<T>(2.0);
    if !(radicand > T::zero()) {
        return Err(Error::RadicandNegative {
            lambda: as_f64(lambda),
        });
    }
    let x = radicand.cbrt();
    let u1 = -x / (real::<T>(3.0) * zeta);
    let re = x / (real::<T>(6.0) * zeta);
    let im = real::<T>(3.0).sqrt() * re;
    let s1 = Complex::new(T::zero(), (-u1).sqrt());
    let u2 = Complex::new(re, im);
    let s2 = u2.sqrt();
    Ok(CharRoots {
        s1,
        s2,
        s3: s2.conj(),
        lambda,
        zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lambda_zero_factorization() {
        // zeta=1, lambda=0: s^4 (s^2 - 1) = 0 -> {0 x4, ±1}
        let r = roots(1.0f64, 0.0).unwrap();
        assert_abs_diff_eq!(r.s1.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.s2.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.s3.re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.s3.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn residuals_below_tolerance() {
        for &(zeta, lambda) in &[
            (1.0f64, 10.0),
            (1.0, 1e4),
            (0.5, 3.0),
            (2.0, 123.0),
            (0.05, 0.2),
            (7.0, 0.01),
        ] {
            let r = roots(zeta, lambda).unwrap();
            assert!(
                r.max_relative_residual() < 1e-12,
                "residual too large at zeta={zeta} lambda={lambda}"
            );
        }
    }

    #[test]
    fn vieta_in_u() {
        // u1+u2+u3 = 1/zeta, u1 u2 u3 = -lambda^2/zeta (e2 vanishes)
        for &(zeta, lambda) in &[(1.0f64, 10.0), (0.5, 77.0), (2.0, 0.3), (1.0, 0.01)] {
            let r = roots(zeta, lambda).unwrap();
            let [u1, u2, u3] = r.u();
            let sum = u1 + u2 + u3;
            let prod = u1 * u2 * u3;
            let scale = u1.norm().max(u2.norm()).max(u3.norm()).max(1.0);
            assert_abs_diff_eq!(sum.re, 1.0 / zeta, epsilon = 1e-10 * scale);
            assert_abs_diff_eq!(sum.im, 0.0, epsilon = 1e-10 * scale);
            let lhs = prod.re;
            let rhs = -lambda * lambda / zeta;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10 * rhs.abs().max(scale));
        }
    }

    #[test]
    fn closed_under_negation_and_conjugation() {
        let r = roots(1.0f64, 50.0).unwrap();
        let six = r.all_six();
        // negation closure is structural; conjugation closure needs s3 = conj(s2)
        assert_eq!(six[1], -six[0]);
        assert_abs_diff_eq!(r.s3.re, r.s2.re, epsilon = 1e-14 * r.s2.norm());
        assert_abs_diff_eq!(r.s3.im, -r.s2.im, epsilon = 1e-14 * r.s2.norm());
        assert!(r.s1.re.abs() < 1e-14 * r.s1.norm());
        assert!(r.s2.im > 0.0);
    }

    #[test]
    fn low_lambda_regime_real_pair() {
        // below lambda_c = 2/(3 sqrt(3) zeta) the pair (s2, s3) is real
        let lambda_c = 2.0 / (27.0f64).sqrt();
        let r = roots(1.0f64, 0.5 * lambda_c).unwrap();
        assert_abs_diff_eq!(r.s2.im, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.s3.im, 0.0, epsilon = 1e-12);
        assert!(r.s2.re <= r.s3.re);
        assert!(r.max_relative_residual() < 1e-12);
    }

    #[test]
    fn asymptotic_branch_structure() {
        // zeta=1, lambda=10: Re(s2^2) = (1/6)(2698)^(1/3), s3^2 = conj(s2^2)
        let r = asymptotic_roots(1.0f64, 10.0).unwrap();
        let x = (27.0 * 100.0f64 - 2.0).cbrt();
        let u2 = r.s2 * r.s2;
        assert_abs_diff_eq!(u2.re, x / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u2.im, 3.0f64.sqrt() * x / 6.0, epsilon = 1e-12);
        // s1 purely imaginary with s1^2 = -(1/3) X
        assert_eq!(r.s1.re, 0.0);
        assert_abs_diff_eq!(r.s1.im * r.s1.im, x / 3.0, epsilon = 1e-12);
        // the three asymptotic u's sum to zero identically (their defect
        // from the exact Vieta sum 1/zeta)
        let [u1, u2, u3] = r.u();
        let sum = u1 + u2 + u3;
        assert_abs_diff_eq!(sum.norm(), 0.0, epsilon = 1e-12 * x);
    }

    #[test]
    fn asymptotic_radicand_guard() {
        assert!(matches!(
            asymptotic_roots(1.0f64, 0.1).unwrap_err(),
            Error::RadicandNegative { .. }
        ));
    }

    #[test]
    fn asymptotic_gap_shrinks_with_lambda() {
        // relative gap decays like (27 zeta^2 lambda^2)^(-1/3): o(1), not fast
        let mut prev = f64::INFINITY;
        for &lambda in &[10.0, 100.0, 1000.0] {
            let exact = roots(1.0f64, lambda).unwrap();
            let asym = asymptotic_roots(1.0f64, lambda).unwrap();
            let gap = (exact.s1 - asym.s1).norm() / exact.s1.norm()
                + (exact.s2 - asym.s2).norm() / exact.s2.norm();
            assert!(gap < prev, "asymptotic gap must shrink: {gap} !< {prev}");
            prev = gap;
        }
        assert!(prev < 5e-3);
    }

    #[test]
    fn large_lambda_matches_asymptote() {
        // spec'd structure: s1 purely imaginary with s1^2 -> -(1/3 z) X,
        // relative error ~ 1/X
        let lambda = 1e5;
        let exact = roots(1.0f64, lambda).unwrap();
        let x = (27.0 * lambda * lambda - 2.0f64).cbrt();
        let u1 = exact.s1 * exact.s1;
        assert!(((u1.re + x / 3.0) / (x / 3.0)).abs() < 2.0 / x);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(roots(0.0f64, 1.0).is_err());
        assert!(roots(-1.0f64, 1.0).is_err());
        assert!(roots(1.0f64, -1.0).is_err());
        assert!(roots(1.0f64, f64::NAN).is_err());
    }

    #[test]
    fn works_in_f32() {
        let r = roots(1.0f32, 10.0).unwrap();
        assert!(r.max_relative_residual() < 1e-5);
    }
}
