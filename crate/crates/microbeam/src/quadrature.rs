//! Composite Gauss-Legendre quadrature on [0, 1].
//!
//! All integrals in the crate share one rule so that identities that are
//! exact for the continuous operator ("total = K + U", Parseval splits)
//! stay exact at the discrete level. Eigenfunctions oscillate with spatial
//! frequency ~a_n, so the panel count must resolve the highest requested
//! mode; the default (64 panels x 8 nodes) keeps the highest acceptance
//! mode far inside the exponential-accuracy regime.

use crate::scalar::{real, Real};
use serde::Serialize;

/// Panel/node configuration for the shared rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadConfig {
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            panels: 64,
            nodes_per_panel: 8,
        }
    }
}

/// Composite Gauss-Legendre rule on [0, 1].
#[derive(Debug, Clone)]
pub struct Quadrature<T> {
    config: QuadConfig,
    nodes: Vec<T>,
    weights: Vec<T>,
    panel_nodes: Vec<T>,
    panel_weights: Vec<T>,
}

impl<T: Real> Quadrature<T> {
    pub fn new(config: QuadConfig) -> Self {
        let (xg, wg) = gauss_legendre_unit(config.nodes_per_panel);
        let h = T::one() / real::<T>(config.panels as f64);
        let mut nodes = Vec::with_capacity(config.panels * config.nodes_per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in 0..config.panels {
            let a = real::<T>(p as f64) * h;
            for (x, w) in xg.iter().zip(&wg) {
                nodes.push(a + h * *x);
                weights.push(h * *w);
            }
        }
        Self {
            config,
            nodes,
            weights,
            panel_nodes: xg,
            panel_weights: wg,
        }
    }

    pub fn config(&self) -> QuadConfig {
        self.config
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Integrate a function over [0, 1].
    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + *w * f(*x);
        }
        acc
    }

    /// Integrate grid samples aligned with `nodes()`.
    pub fn integrate_samples(&self, samples: &[T]) -> T {
        debug_assert_eq!(samples.len(), self.len());
        let mut acc = T::zero();
        for (s, w) in samples.iter().zip(&self.weights) {
            acc = acc + *w * *s;
        }
        acc
    }

    /// L2 inner product of two sample vectors on the grid.
    pub fn inner(&self, a: &[T], b: &[T]) -> T {
        let mut acc = T::zero();
        for ((x, y), w) in a.iter().zip(b).zip(&self.weights) {
            acc = acc + *w * *x * *y;
        }
        acc
    }

    /// Integrate a function over a sub-interval [a, b] with one fresh panel
    /// of the same node count (used for partial-panel cumulative integrals).
    pub fn integrate_sub(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let h = b - a;
        let mut acc = T::zero();
        for (x, w) in self.panel_nodes.iter().zip(&self.panel_weights) {
            acc = acc + h * *w * f(a + h * *x);
        }
        acc
    }

    /// Left edge of the panel containing grid node `idx`.
    pub fn panel_start(&self, idx: usize) -> T {
        let p = idx / self.config.nodes_per_panel;
        real::<T>(p as f64) / real::<T>(self.config.panels as f64)
    }

    /// The single-panel rule on [0, 1]: (node, weight) pairs.
    pub fn unit_rule(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.panel_nodes
            .iter()
            .copied()
            .zip(self.panel_weights.iter().copied())
    }
}

impl<T: Real> Default for Quadrature<T> {
    fn default() -> Self {
        Self::new(QuadConfig::default())
    }
}

/// Gauss-Legendre nodes/weights on [0, 1].
///
/// Newton iteration on P_n with the Bonnet recurrence; symmetric-pair seeds
/// from the Chebyshev approximation of the roots.
fn gauss_legendre_unit<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "at least one node per panel");
    let mut xs = vec![T::zero(); n];
    let mut ws = vec![T::zero(); n];
    let half = real::<T>(0.5);
    for i in 0..n.div_ceil(2) {
        let guess = (T::PI() * (real::<T>(i as f64) + real::<T>(0.75))
            / (real::<T>(n as f64) + half))
            .cos();
        let mut x = guess;
        let mut dp = T::one();
        for _ in 0..60 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let step = p / d;
            x = x - step;
            if step.abs() <= T::epsilon() * (T::one() + x.abs()) {
                break;
            }
        }
        let w = real::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        xs[i] = half * (T::one() - x);
        ws[i] = half * w;
        xs[n - 1 - i] = half * (T::one() + x);
        ws[n - 1 - i] = half * w;
    }
    (xs, ws)
}

fn legendre_with_deriv<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = real::<T>(k as f64);
        let p2 = ((real::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = real::<T>(n as f64) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}
