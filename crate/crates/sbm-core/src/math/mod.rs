pub mod dd;
pub mod interp;
pub mod invlap;
pub mod quad;

/// Gamma function (positive arguments throughout this crate).
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub fn log1p_exp(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln(1 + z)` for complex `z`, accurate for tiny `|z|`.
pub fn c_ln1p(z: num_complex::Complex64) -> num_complex::Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        z - z2 * 0.5 + z2 * z / 3.0 - z2 * z2 * 0.25 + z2 * z2 * z * 0.2
    } else {
        (num_complex::Complex64::new(1.0, 0.0) + z).ln()
    }
}

/// `e^z - 1` for complex `z`, accurate for tiny `|z|`.
pub fn c_expm1(z: num_complex::Complex64) -> num_complex::Complex64 {
    if z.norm() < 1e-4 {
        z + z * z * 0.5 + z * z * z / 6.0 + z * z * z * z / 24.0
    } else {
        z.exp() - 1.0
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert!(x.len() == y.len() && x.len() >= 2);
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Log-spaced grid with `n` points covering `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
