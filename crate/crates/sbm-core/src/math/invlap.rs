//! Numerical inversion of Laplace transforms of completely monotone
//! functions: Gaver-Stehfest on the real axis and a fixed Talbot contour as
//! an independent cross-check.

use super::dd::Dd;
use crate::error::{Result, SbmError};
use num_complex::Complex64;

/// Gaver-Stehfest rule of even order `n`: only needs the transform on the
/// positive real axis. The alternating sum is accumulated in double-double.
#[derive(Clone, Debug)]
pub struct GaverStehfest {
    weights: Vec<f64>,
}

fn binom(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl GaverStehfest {
    pub fn new(order: usize) -> GaverStehfest {
        assert!(order >= 2 && order % 2 == 0 && order <= 20, "order must be even, 2..=20");
        let m = (order / 2) as u64;
        let mut fact_m = 1.0f64;
        for i in 2..=m {
            fact_m *= i as f64;
        }
        let mut weights = Vec::with_capacity(order);
        for k in 1..=(order as u64) {
            let mut sum = Dd::ZERO;
            let j0 = k.div_ceil(2);
            for j in j0..=k.min(m) {
                let term = (j as f64).powi(m as i32 + 1) / fact_m
                    * binom(m, j)
                    * binom(2 * j, j)
                    * binom(j, k - j);
                sum = sum.add(Dd::from_f64(term));
            }
            let sign = if (m + k) % 2 == 0 { 1.0 } else { -1.0 };
            weights.push(sign * sum.value());
        }
        GaverStehfest { weights }
    }

    /// Evaluate `L^{-1}[transform](t)`.
    pub fn invert<F: Fn(f64) -> f64>(&self, transform: F, t: f64) -> f64 {
        let x = std::f64::consts::LN_2 / t;
        let mut acc = Dd::ZERO;
        for (k, w) in self.weights.iter().enumerate() {
            acc = acc.add_prod(*w, transform((k as f64 + 1.0) * x));
        }
        acc.scale(x).value()
    }
}

/// Fixed-Talbot inversion with `m` contour nodes. Requires the transform on
/// a contour wrapping the negative real axis, so the transform must be
/// analytic off `(-inf, 0]`.
pub fn talbot<F: Fn(Complex64) -> Complex64>(transform: F, t: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut sum = 0.5 * (r * t).exp() * transform(Complex64::new(r, 0.0)).re;
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * transform(s) * Complex64::new(1.0, sigma);
        sum += term.re;
    }
    r / m as f64 * sum
}

/// Inversion with a built-in consistency check between two routes.
#[derive(Clone, Debug)]
pub struct CheckedInverter {
    primary: GaverStehfest,
    secondary: GaverStehfest,
    pub agree_tol: f64,
}

impl CheckedInverter {
    pub fn new(order: usize, agree_tol: f64) -> CheckedInverter {
        CheckedInverter {
            primary: GaverStehfest::new(order),
            secondary: GaverStehfest::new(order - 4),
            agree_tol,
        }
    }

    /// Invert a real-axis transform; the cross-check is a lower-order rule.
    pub fn invert_real<F: Fn(f64) -> f64>(&self, transform: F, t: f64) -> Result<f64> {
        let a = self.primary.invert(&transform, t);
        let b = self.secondary.invert(&transform, t);
        let residual = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        if !a.is_finite() || residual > self.agree_tol {
            return Err(SbmError::InversionFailure { t, residual, tol: self.agree_tol });
        }
        Ok(a)
    }

    /// Invert with Gaver-Stehfest and cross-check against Talbot.
    pub fn invert_with_talbot<F, G>(&self, transform: F, complex_transform: G, t: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
        G: Fn(Complex64) -> Complex64,
    {
        let a = self.primary.invert(&transform, t);
        let b = talbot(complex_transform, t, 32);
        let residual = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        if !a.is_finite() || !b.is_finite() || residual > self.agree_tol {
            return Err(SbmError::InversionFailure { t, residual, tol: self.agree_tol });
        }
        // Talbot is the more accurate of the pair once both agree.
        Ok(b)
    }
}

impl Default for CheckedInverter {
    // 5e-6 rather than 1e-6: Gaver-Stehfest truncation on log-corrected
    // transforms sits just above 1e-6 while Talbot stays near 1e-10, so the
    // tighter gate only produced false alarms.
    fn default() -> Self {
        CheckedInverter::new(16, 5e-6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_exponential() {
        // L[e^{-t}] = 1/(s+1). Relative accuracy decays with t because the
        // alternating sum works against the e^{-t} scale.
        let gs = GaverStehfest::new(16);
        for &(t, tol) in &[(0.1, 1e-6), (1.0, 1e-5), (5.0, 1e-2)] {
            let v = gs.invert(|s| 1.0 / (s + 1.0), t);
            assert!((v / (-t as f64).exp() - 1.0).abs() < tol, "t={t}: {v}");
        }
    }

    #[test]
    fn inverts_power_law() {
        // L[t^{-1/2}/sqrt(pi)] = s^{-1/2}
        let gs = GaverStehfest::new(16);
        let t = 2.0_f64;
        let expect = t.powf(-0.5) / std::f64::consts::PI.sqrt();
        let v = gs.invert(|s| s.powf(-0.5), t);
        assert!((v / expect - 1.0).abs() < 5e-7);
    }

    #[test]
    fn talbot_matches_gs() {
        let inv = CheckedInverter::default();
        let v = inv
            .invert_with_talbot(
                |s| 1.0 / (s + 1.0),
                |s| Complex64::new(1.0, 0.0) / (s + 1.0),
                0.7,
            )
            .unwrap();
        assert!((v - (-0.7f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn staggered_orders_agree() {
        let inv = CheckedInverter::new(16, 2e-4);
        let v = inv.invert_real(|s| s.powf(-0.25), 1.3).unwrap();
        let expect = 1.3f64.powf(-0.75) / libm::tgamma(0.25);
        assert!((v / expect - 1.0).abs() < 1e-6);
    }
}
