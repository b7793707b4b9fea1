//! Dense vector helpers.
//!
//! Sums run strictly left to right so results are bit-reproducible across
//! targets.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// `y <- y * scale + alpha * x`
#[inline]
pub fn scale_add(y: &mut [f64], scale: f64, alpha: f64, x: &[f64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi * scale + alpha * xi;
    }
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
