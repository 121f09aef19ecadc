//! Physical and dimensionless beam parameters, the state-space norm, and the
//! kinetic/strain energy functionals.
//!
//! The dimensionless model is governed by the single stiffness ratio
//! `zeta = K2 / (K1 L^2)`; `zeta = 0` collapses the sixth-order term and is
//! rejected everywhere as the degenerate classical limit.

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::scalar::{as_f64, real, Real};
use serde::Serialize;

/// Material and geometric constants of the dimensional model.
///
/// `l0`, `l1`, `l2` are the higher-order length-scale constants; everything
/// else is the usual Euler-Bernoulli data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialParams<T> {
    pub e_young: T,
    pub mu_shear: T,
    pub i_area: T,
    pub a_section: T,
    pub rho: T,
    pub length: T,
    pub l0: T,
    pub l1: T,
    pub l2: T,
}

impl<T: Real> MaterialParams<T> {
    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, T); 6] = [
            ("e_young", self.e_young),
            ("mu_shear", self.mu_shear),
            ("i_area", self.i_area),
            ("a_section", self.a_section),
            ("rho", self.rho),
            ("length", self.length),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: as_f64(v),
                });
            }
        }
        let nonneg: [(&'static str, T); 3] = [("l0", self.l0), ("l1", self.l1), ("l2", self.l2)];
        for (name, v) in nonneg {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: as_f64(v),
                });
            }
        }
        Ok(())
    }

    /// Classical-plus-gradient bending stiffness
    /// `K1 = E I + mu A (2 l0^2 + (8/15) l1^2 + l2^2)`.
    pub fn k1(&self) -> T {
        self.e_young * self.i_area
            + self.mu_shear
                * self.a_section
                * (real::<T>(2.0) * self.l0 * self.l0
                    + real::<T>(8.0 / 15.0) * self.l1 * self.l1
                    + self.l2 * self.l2)
    }

    /// Higher-order stiffness `K2 = mu I (2 l0^2 + (4/5) l1^2)`.
    pub fn k2(&self) -> T {
        self.mu_shear
            * self.i_area
            * (real::<T>(2.0) * self.l0 * self.l0 + real::<T>(0.8) * self.l1 * self.l1)
    }
}

/// Dimensionless model data: the stiffness ratio `zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamParams<T> {
    zeta: T,
}

impl<T: Real> BeamParams<T> {
    /// Wrap a dimensionless stiffness ratio, rejecting the degenerate limit.
    pub fn new(zeta: T) -> Result<Self> {
        if !zeta.is_finite() || !(zeta > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "zeta",
                value: as_f64(zeta),
            });
        }
        Ok(Self { zeta })
    }

    pub fn zeta(&self) -> T {
        self.zeta
    }
}

/// Map material constants to the dimensionless ratio `zeta = K2/(K1 L^2)`.
pub fn nondimensionalize<T: Real>(material: &MaterialParams<T>) -> Result<BeamParams<T>> {
    material.validate()?;
    let k2 = material.k2();
    if k2 == T::zero() {
        // l0 = l1 = 0: classical Euler-Bernoulli limit
        return Err(Error::DegenerateModel);
    }
    let k1 = material.k1();
    BeamParams::new(k2 / (k1 * material.length * material.length))
}

/// Kinetic, strain, and total energy of one field snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySnapshot<T> {
    #[serde(rename = "K")]
    pub kinetic: T,
    #[serde(rename = "U")]
    pub strain: T,
    #[serde(rename = "E")]
    pub total: T,
}

/// Energies from second/third spatial derivative samples and velocity
/// samples on the shared quadrature grid:
/// `K = 1/2 ∫ v^2`, `U = 1/2 ∫ [(w'')^2 + zeta (w''')^2]`.
///
/// Derivative samples must come from analytic mode evaluation; the strain
/// integrand amplifies grid noise far too strongly for finite differencing.
pub fn energy<T: Real>(
    quad: &Quadrature<T>,
    w_xx: &[T],
    w_xxx: &[T],
    velocity: &[T],
    zeta: T,
) -> Result<EnergySnapshot<T>> {
    for samples in [w_xx, w_xxx, velocity] {
        if samples.len() != quad.len() {
            return Err(Error::MismatchedGrids {
                expected: quad.len(),
                got: samples.len(),
            });
        }
    }
    let half = real::<T>(0.5);
    let mut kin = T::zero();
    let mut strain = T::zero();
    for (((w2, w3), v), w) in w_xx.iter().zip(w_xxx).zip(velocity).zip(quad.weights()) {
        kin = kin + *w * *v * *v;
        strain = strain + *w * (*w2 * *w2 + zeta * *w3 * *w3);
    }
    let kinetic = half * kin;
    let strain = half * strain;
    Ok(EnergySnapshot {
        kinetic,
        strain,
        total: kinetic + strain,
    })
}

/// Squared state-space norm `||(w, w_t)||^2_H`, same integrand as the energy:
/// `1/2 ∫ [(w'')^2 + zeta (w''')^2 + v^2]`.
pub fn state_norm_sq<T: Real>(
    quad: &Quadrature<T>,
    w_xx: &[T],
    w_xxx: &[T],
    velocity: &[T],
    zeta: T,
) -> Result<T> {
    for samples in [w_xx, w_xxx, velocity] {
        if samples.len() != quad.len() {
            return Err(Error::MismatchedGrids {
                expected: quad.len(),
                got: samples.len(),
            });
        }
    }
    let mut acc = T::zero();
    for (((w2, w3), v), w) in w_xx.iter().zip(w_xxx).zip(velocity).zip(quad.weights()) {
        acc = acc + *w * (*w2 * *w2 + zeta * *w3 * *w3 + *v * *v);
    }
    Ok(real::<T>(0.5) * acc)
}
