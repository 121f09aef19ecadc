//! Boundary observation operators on the lifted eigenmodes and the
//! spectral (Hautus-type) admissibility / exact-observability classifier.
//!
//! The state operator's eigenpairs are mu_k = i lambda_k with
//! psi_k = (phi_k / (i lambda_k), phi_k) / sqrt(2) for k in Z \ {0}. The
//! three root-of-beam observations act on the position component, so their
//! images reduce to boundary derivatives of phi over sqrt(2) lambda_k.
//!
//! Note on normalization: under the energy norm with its 1/2 prefactor,
//! ||psi_k||_H^2 = 1/2 exactly (the 1/sqrt(2) factor normalizes psi against
//! the unweighted integrand). The observation formulas below are the ones
//! the bounds sqrt(2 zeta) <= |C3 psi_k| <= sqrt(3 zeta) are stated for.

use crate::error::{Error, Result};
use crate::modes::Mode;
use crate::scalar::{real, Real, C};
use crate::spectrum::{a_of_lambda, gap_profile, SpectralBasis};
use crate::stats::loglog_slope;
use num_complex::Complex;
use serde::Serialize;

/// The three root-of-beam observation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorId {
    /// Shear force: zeta w_xxxxx(0) - w_xxx(0).
    C1,
    /// Classical moment: w_xx(0) - zeta w_xxxx(0).
    C2,
    /// Non-classical moment: zeta w_xxx(0).
    C3,
}

impl std::str::FromStr for OperatorId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(Self::C1),
            "C2" => Ok(Self::C2),
            "C3" => Ok(Self::C3),
            other => Err(format!(
                "unknown operator `{other}` (expected C1, C2, or C3)"
            )),
        }
    }
}

/// Eigenpair of the first-order state operator, lifted from a spatial mode.
#[derive(Debug, Clone, Copy)]
pub struct LiftedMode<'a, T> {
    /// Signed index in Z \ {0}.
    pub k: i32,
    /// Eigenvalue mu_k = i lambda_k (lambda_{-k} = -lambda_k).
    pub mu: C<T>,
    /// The underlying spatial mode phi_{|k|}.
    pub base: &'a Mode<T>,
}

impl<'a, T: Real> LiftedMode<'a, T> {
    pub fn new(basis: &'a SpectralBasis<T>, k: i32) -> Result<Self> {
        if k == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                len: basis.len(),
            });
        }
        let base = basis.mode(k.unsigned_abs() as usize)?;
        let lambda = if k > 0 { base.lambda } else { -base.lambda };
        Ok(Self {
            k,
            mu: Complex::new(T::zero(), lambda),
            base,
        })
    }

    /// Squared state-space norm of psi_k under the 1/2-weighted energy
    /// inner product; equals 1/2 for a normalized base mode.
    pub fn norm_h_sq(&self, basis: &SpectralBasis<T>) -> Result<T> {
        let quad = basis.quadrature();
        let zeta = basis.zeta();
        let lam2 = self.base.lambda * self.base.lambda;
        let mut pos = T::zero(); // ∫ (f'')^2 + zeta (f''')^2 for f = phi/lambda
        let mut vel = T::zero(); // ∫ phi^2
        for (x, w) in quad.nodes().iter().zip(quad.weights()) {
            let d2 = self.base.evaluate(*x, 2)?;
            let d3 = self.base.evaluate(*x, 3)?;
            let v = self.base.evaluate(*x, 0)?;
            pos = pos + *w * (d2 * d2 + zeta * d3 * d3) / lam2;
            vel = vel + *w * v * v;
        }
        // psi = (phi/(i lambda), phi)/sqrt(2); 1/2-weighted norm
        Ok(real::<T>(0.25) * (pos + vel))
    }
}

/// |C_i psi_k| from analytic boundary derivatives of the normalized mode.
pub fn observe_mode<T: Real>(basis: &SpectralBasis<T>, k: i32, operator: OperatorId) -> Result<T> {
    let lifted = LiftedMode::new(basis, k)?;
    let mode = lifted.base;
    let zeta = basis.zeta();
    let lambda = mode.lambda;
    let sqrt2 = real::<T>(2.0).sqrt();
    let p3 = mode.evaluate(T::zero(), 3)?;
    let value = match operator {
        OperatorId::C1 => {
            let p5 = mode.evaluate(T::zero(), 5)?;
            (zeta * p5 - p3).abs()
        }
        OperatorId::C2 => {
            let p2 = mode.evaluate(T::zero(), 2)?;
            let p4 = mode.evaluate(T::zero(), 4)?;
            (p2 - zeta * p4).abs()
        }
        OperatorId::C3 => zeta * p3.abs(),
    };
    Ok(value / (sqrt2 * lambda))
}

/// Classification verdict for an observation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AdmissibleExact,
    NotAdmissible,
    Inconclusive,
}

/// Per-operator observation data over the computed modes.
#[derive(Debug, Clone, Serialize)]
pub struct ObservationReport<T> {
    pub operator_id: OperatorId,
    /// |C psi_k| for k = 1..N.
    pub values: Vec<T>,
    /// log-log slope of the values against a_k, with its R^2.
    pub growth_slope: T,
    pub growth_r2: T,
    pub verdict: Verdict,
    /// Empirical (min, max) over the computed range.
    pub bounds: (T, T),
    /// Theoretical bounds [sqrt(2 zeta), sqrt(3 zeta)] for C3, None otherwise.
    pub theoretical_bounds: Option<(T, T)>,
    /// Eigenvalue gaps diverge over the computed range.
    pub gaps_diverging: bool,
}

/// Growth slope above which monotone values are classified unbounded.
const UNBOUNDED_SLOPE: f64 = 0.5;
/// Fit quality required for the unbounded verdict.
const UNBOUNDED_R2: f64 = 0.99;
/// |slope| below which the values count as bounded.
const BOUNDED_SLOPE: f64 = 0.1;

/// Spectral admissibility / exact observability classification.
///
/// Unboundedness cannot be proven from finitely many modes; the operational
/// rule is: values strictly increasing over the last half of the range AND
/// fitted growth slope > 0.5 with R^2 > 0.99 counts as not admissible.
/// Bounded (|slope| < 0.1), positive values with diverging gaps count as
/// admissible and exactly observable in any positive time.
pub fn classify<T: Real>(
    basis: &SpectralBasis<T>,
    operator: OperatorId,
) -> Result<ObservationReport<T>> {
    if basis.len() < 10 {
        return Err(Error::InsufficientModes {
            needed: 10,
            got: basis.len(),
        });
    }
    let n = basis.len();
    let mut values = Vec::with_capacity(n);
    let mut avals = Vec::with_capacity(n);
    for k in 1..=n {
        values.push(observe_mode(basis, k as i32, operator)?);
        avals.push(a_of_lambda(basis.zeta(), basis.mode(k)?.lambda)?);
    }
    let (slope, r2) = loglog_slope(&avals, &values);
    let min = values.iter().cloned().fold(T::infinity(), T::min);
    let max = values.iter().cloned().fold(T::neg_infinity(), T::max);
    let gaps_diverging = gap_profile(basis)?.gaps_diverging;

    let last_half = &values[n - n.div_ceil(2)..];
    let increasing = last_half.windows(2).all(|w| w[1] > w[0]);
    let verdict =
        if increasing && slope > real::<T>(UNBOUNDED_SLOPE) && r2 > real::<T>(UNBOUNDED_R2) {
            Verdict::NotAdmissible
        } else if slope.abs() < real::<T>(BOUNDED_SLOPE) && min > T::zero() && gaps_diverging {
            Verdict::AdmissibleExact
        } else {
            Verdict::Inconclusive
        };

    let theoretical_bounds = match operator {
        OperatorId::C3 => Some((
            (real::<T>(2.0) * basis.zeta()).sqrt(),
            (real::<T>(3.0) * basis.zeta()).sqrt(),
        )),
        _ => None,
    };
    Ok(ObservationReport {
        operator_id: operator,
        values,
        growth_slope: slope,
        growth_r2: r2,
        verdict,
        bounds: (min, max),
        theoretical_bounds,
        gaps_diverging,
    })
}

/// The explicit constants of the time-domain observability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservabilityConstants<T> {
    /// Minimal horizon max(2, 32/(4 + zeta)) for a positive lower constant.
    pub threshold: T,
    /// 2 zeta (T - threshold); a guarantee only when positive.
    pub lower: T,
    /// zeta (10 T + 2 threshold).
    pub upper: T,
    /// Whether the lower constant is a meaningful (positive) bound.
    pub lower_is_positive: bool,
}

pub fn observability_constants<T: Real>(zeta: T, horizon: T) -> ObservabilityConstants<T> {
    let threshold = real::<T>(2.0).max(real::<T>(32.0) / (real::<T>(4.0) + zeta));
    let lower = real::<T>(2.0) * zeta * (horizon - threshold);
    let upper = zeta * (real::<T>(10.0) * horizon + real::<T>(2.0) * threshold);
    ObservabilityConstants {
        threshold,
        lower,
        upper,
        lower_is_positive: lower > T::zero(),
    }
}
