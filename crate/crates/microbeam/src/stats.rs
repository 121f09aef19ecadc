//! Small fitting helpers shared by the spectrum and observability reports.

use crate::scalar::Real;

/// Least-squares line fit `y = a + b x`; returns `(slope, r_squared)`.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "fit needs at least two points");
    let n = T::from_usize(xs.len()).unwrap();
    let mean = |v: &[T]| v.iter().fold(T::zero(), |a, b| a + *b) / n;
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    let mut syy = T::zero();
    for (x, y) in xs.iter().zip(ys) {
        let dx = *x - mx;
        let dy = *y - my;
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let r2 = if syy > T::zero() {
        (sxy * sxy) / (sxx * syy)
    } else {
        T::one()
    };
    (slope, r2)
}

/// Fit of `log y` against `log x`; inputs must be strictly positive.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> (T, T) {
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}
