//! The five complete Bernstein function families `phi(lambda) =
//! lambda^{alpha/2} ell(lambda)` driving every subordinator in this crate,
//! together with their potential and Levy densities.

use crate::error::{require_positive, Result, SbmError};
use crate::math::invlap::CheckedInverter;
use crate::math::{c_expm1, c_ln1p, gamma, log1p_exp, quad};
use num_complex::Complex64;
use std::fmt;

/// Which concrete Laplace exponent family a model uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `lambda^{alpha/2}`
    Stable,
    /// `(lambda+1)^{alpha/2} - 1`
    Relativistic,
    /// `lambda^{alpha/2} + lambda^{beta/2}`, `0 < beta < alpha`
    #[serde(rename = "mixture")]
    StableMixture,
    /// `lambda^{alpha/2} (log(1+lambda))^{beta/2}`, `beta in (0, 2-alpha)`
    #[serde(rename = "logpos")]
    LogWeightPos,
    /// `lambda^{alpha/2} (log(1+lambda))^{-beta/2}`, `beta in (0, alpha)`
    #[serde(rename = "logneg")]
    LogWeightNeg,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<FamilyKind> {
        match s {
            "stable" => Ok(FamilyKind::Stable),
            "relativistic" => Ok(FamilyKind::Relativistic),
            "mixture" => Ok(FamilyKind::StableMixture),
            "logpos" => Ok(FamilyKind::LogWeightPos),
            "logneg" => Ok(FamilyKind::LogWeightNeg),
            other => Err(SbmError::Parameter(format!(
                "unknown family '{other}' (expected stable|relativistic|mixture|logpos|logneg)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Stable => "stable",
            FamilyKind::Relativistic => "relativistic",
            FamilyKind::StableMixture => "mixture",
            FamilyKind::LogWeightPos => "logpos",
            FamilyKind::LogWeightNeg => "logneg",
        }
    }

    pub fn all() -> [FamilyKind; 5] {
        [
            FamilyKind::Stable,
            FamilyKind::Relativistic,
            FamilyKind::StableMixture,
            FamilyKind::LogWeightPos,
            FamilyKind::LogWeightNeg,
        ]
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A concrete complete Bernstein function with index `alpha` and slowly
/// varying correction `ell`. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinFamily {
    kind: FamilyKind,
    alpha: f64,
    beta: Option<f64>,
}

impl BernsteinFamily {
    pub fn new(kind: FamilyKind, alpha: f64, beta: Option<f64>) -> Result<BernsteinFamily> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(SbmError::Parameter(format!("alpha must lie in (0,2), got {alpha}")));
        }
        match (kind, beta) {
            (FamilyKind::Stable | FamilyKind::Relativistic, None) => {}
            (FamilyKind::Stable | FamilyKind::Relativistic, Some(_)) => {
                return Err(SbmError::Parameter(format!("{kind} takes no beta parameter")));
            }
            (FamilyKind::StableMixture, Some(b)) if b > 0.0 && b < alpha => {}
            (FamilyKind::LogWeightPos, Some(b)) if b > 0.0 && b < 2.0 - alpha => {}
            (FamilyKind::LogWeightNeg, Some(b)) if b > 0.0 && b < alpha => {}
            (k, Some(b)) => {
                return Err(SbmError::Parameter(format!("beta={b} out of range for family {k}")));
            }
            (k, None) => {
                return Err(SbmError::Parameter(format!("family {k} requires a beta parameter")));
            }
        }
        Ok(BernsteinFamily { kind, alpha, beta })
    }

    pub fn stable(alpha: f64) -> Result<BernsteinFamily> {
        Self::new(FamilyKind::Stable, alpha, None)
    }
    pub fn relativistic(alpha: f64) -> Result<BernsteinFamily> {
        Self::new(FamilyKind::Relativistic, alpha, None)
    }
    pub fn mixture(alpha: f64, beta: f64) -> Result<BernsteinFamily> {
        Self::new(FamilyKind::StableMixture, alpha, Some(beta))
    }
    pub fn log_pos(alpha: f64, beta: f64) -> Result<BernsteinFamily> {
        Self::new(FamilyKind::LogWeightPos, alpha, Some(beta))
    }
    pub fn log_neg(alpha: f64, beta: f64) -> Result<BernsteinFamily> {
        Self::new(FamilyKind::LogWeightNeg, alpha, Some(beta))
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn label(&self) -> String {
        match self.beta {
            Some(b) => format!("{}(alpha={}, beta={})", self.kind, self.alpha, b),
            None => format!("{}(alpha={})", self.kind, self.alpha),
        }
    }

    /// The Laplace exponent `phi(lambda)`.
    pub fn phi(&self, lambda: f64) -> Result<f64> {
        let lambda = require_positive("lambda", lambda)?;
        let a2 = 0.5 * self.alpha;
        Ok(match self.kind {
            FamilyKind::Stable => lambda.powf(a2),
            // expm1/ln_1p keep the small-lambda regime cancellation-free.
            FamilyKind::Relativistic => (a2 * lambda.ln_1p()).exp_m1(),
            FamilyKind::StableMixture => lambda.powf(a2) + lambda.powf(0.5 * self.beta.unwrap()),
            FamilyKind::LogWeightPos => {
                lambda.powf(a2) * lambda.ln_1p().powf(0.5 * self.beta.unwrap())
            }
            FamilyKind::LogWeightNeg => {
                lambda.powf(a2) * lambda.ln_1p().powf(-0.5 * self.beta.unwrap())
            }
        })
    }

    /// The slowly varying factor `ell(lambda) = phi(lambda) / lambda^{alpha/2}`.
    pub fn ell(&self, lambda: f64) -> Result<f64> {
        let lambda = require_positive("lambda", lambda)?;
        Ok(self.log_ell_ln(lambda.ln()).exp())
    }

    /// `log ell(e^t)`, stable over the whole double range of `t`. This is the
    /// form every quadrature in the crate consumes, since arguments like
    /// `lambda^2 theta^2` overflow long before their logarithms do.
    pub fn log_ell_ln(&self, t: f64) -> f64 {
        match self.kind {
            FamilyKind::Stable => 0.0,
            FamilyKind::Relativistic => {
                let a2 = 0.5 * self.alpha;
                // log ell = a2*(log(lambda+1) - log lambda) + log(1 - (lambda+1)^{-a2})
                let ln_lp1 = log1p_exp(t);
                let a = a2 * ln_lp1;
                // log(1 - e^{-a}) via expm1; a > 0 always.
                let tail = (-(-a).exp_m1()).ln();
                a2 * (ln_lp1 - t) + tail
            }
            FamilyKind::StableMixture => {
                let c = 0.5 * (self.beta.unwrap() - self.alpha);
                log1p_exp(c * t)
            }
            FamilyKind::LogWeightPos => 0.5 * self.beta.unwrap() * log1p_exp(t).ln(),
            FamilyKind::LogWeightNeg => -0.5 * self.beta.unwrap() * log1p_exp(t).ln(),
        }
    }

    /// `ell(s^{-2})` as a function of a length scale `s`, the combination the
    /// spatial estimates use everywhere.
    pub fn ell_inv_sq(&self, s: f64) -> f64 {
        self.log_ell_ln(-2.0 * s.ln()).exp()
    }

    /// Derivative `phi'(lambda)` (closed form; completely monotone).
    pub fn phi_prime(&self, lambda: f64) -> f64 {
        let a2 = 0.5 * self.alpha;
        match self.kind {
            FamilyKind::Stable => a2 * lambda.powf(a2 - 1.0),
            FamilyKind::Relativistic => a2 * ((a2 - 1.0) * lambda.ln_1p()).exp(),
            FamilyKind::StableMixture => {
                let b2 = 0.5 * self.beta.unwrap();
                a2 * lambda.powf(a2 - 1.0) + b2 * lambda.powf(b2 - 1.0)
            }
            FamilyKind::LogWeightPos => {
                let b2 = 0.5 * self.beta.unwrap();
                let l = lambda.ln_1p();
                lambda.powf(a2 - 1.0) * l.powf(b2) * (a2 + b2 * lambda / ((1.0 + lambda) * l))
            }
            FamilyKind::LogWeightNeg => {
                let b2 = 0.5 * self.beta.unwrap();
                let l = lambda.ln_1p();
                lambda.powf(a2 - 1.0) * l.powf(-b2) * (a2 - b2 * lambda / ((1.0 + lambda) * l))
            }
        }
    }

    /// `phi` continued to the cut plane (principal branches), for Talbot
    /// contours.
    pub fn phi_complex(&self, s: Complex64) -> Complex64 {
        let a2 = 0.5 * self.alpha;
        match self.kind {
            FamilyKind::Stable => s.powf(a2),
            FamilyKind::Relativistic => c_expm1(c_ln1p(s) * a2),
            FamilyKind::StableMixture => s.powf(a2) + s.powf(0.5 * self.beta.unwrap()),
            FamilyKind::LogWeightPos => s.powf(a2) * c_ln1p(s).powf(0.5 * self.beta.unwrap()),
            FamilyKind::LogWeightNeg => s.powf(a2) * c_ln1p(s).powf(-0.5 * self.beta.unwrap()),
        }
    }

    /// `phi'` on the cut plane.
    pub fn phi_prime_complex(&self, s: Complex64) -> Complex64 {
        let a2 = 0.5 * self.alpha;
        let one = Complex64::new(1.0, 0.0);
        match self.kind {
            FamilyKind::Stable => s.powf(a2 - 1.0) * a2,
            FamilyKind::Relativistic => (c_ln1p(s) * (a2 - 1.0)).exp() * a2,
            FamilyKind::StableMixture => {
                let b2 = 0.5 * self.beta.unwrap();
                s.powf(a2 - 1.0) * a2 + s.powf(b2 - 1.0) * b2
            }
            FamilyKind::LogWeightPos => {
                let b2 = 0.5 * self.beta.unwrap();
                let l = c_ln1p(s);
                s.powf(a2 - 1.0) * l.powf(b2) * (a2 + s / ((one + s) * l) * b2)
            }
            FamilyKind::LogWeightNeg => {
                let b2 = 0.5 * self.beta.unwrap();
                let l = c_ln1p(s);
                s.powf(a2 - 1.0) * l.powf(-b2) * (a2 - s / ((one + s) * l) * b2)
            }
        }
    }
}

/// A subordinator with Laplace exponent from a [`BernsteinFamily`]: evaluates
/// its potential density `u` and Levy density `mu`, with closed forms where
/// they exist and checked Laplace inversion otherwise.
#[derive(Clone, Debug)]
pub struct SubordinatorModel {
    family: BernsteinFamily,
    gamma_tail: Option<f64>,
    inverter: CheckedInverter,
}

impl SubordinatorModel {
    pub fn new(family: BernsteinFamily) -> SubordinatorModel {
        let gamma_tail = match family.kind() {
            FamilyKind::Stable => Some(0.5 * family.alpha()),
            FamilyKind::StableMixture => Some(0.5 * family.beta().unwrap()),
            FamilyKind::LogWeightPos => Some(0.5 * (family.alpha() + family.beta().unwrap())),
            FamilyKind::LogWeightNeg => Some(0.5 * (family.alpha() - family.beta().unwrap())),
            // u(t) tends to a positive constant (gamma = 1), so the planar
            // process is not transient and no admissible exponent exists.
            FamilyKind::Relativistic => None,
        };
        // Gaver-Stehfest truncation error on the log-weight transforms peaks
        // near 6e-5 in the crossover region (Talbot stays at ~1e-10 there),
        // so those families get a wider agreement gate.
        let agree_tol = match family.kind() {
            FamilyKind::LogWeightPos | FamilyKind::LogWeightNeg => 2e-4,
            _ => 5e-6,
        };
        SubordinatorModel { family, gamma_tail, inverter: CheckedInverter::new(16, agree_tol) }
    }

    /// Override the potential-tail exponent (must be `< 1`).
    pub fn with_gamma_tail(mut self, gamma: f64) -> Result<SubordinatorModel> {
        if !(gamma < 1.0) {
            return Err(SbmError::Parameter(format!("tail exponent gamma must be < 1, got {gamma}")));
        }
        self.gamma_tail = Some(gamma);
        Ok(self)
    }

    pub fn family(&self) -> &BernsteinFamily {
        &self.family
    }

    /// Exponent `gamma` of the `u(t) ~ c t^{gamma-1}` tail, when one below 1
    /// exists.
    pub fn gamma_tail(&self) -> Option<f64> {
        self.gamma_tail
    }

    /// Whether the two-dimensional subordinate process is transient (needed
    /// before any planar Green-function work).
    pub fn transient_in_plane(&self) -> bool {
        matches!(self.gamma_tail, Some(g) if g < 1.0)
    }

    fn closed_u(&self, t: f64) -> f64 {
        let a2 = 0.5 * self.family.alpha();
        t.powf(a2 - 1.0) / gamma(a2)
    }

    fn closed_mu(&self, t: f64) -> f64 {
        let alpha = self.family.alpha();
        let stable = |a: f64| 0.5 * a / gamma(1.0 - 0.5 * a) * t.powf(-1.0 - 0.5 * a);
        match self.family.kind() {
            FamilyKind::Stable => stable(alpha),
            FamilyKind::Relativistic => (-t).exp() * stable(alpha),
            FamilyKind::StableMixture => stable(alpha) + stable(self.family.beta().unwrap()),
            _ => unreachable!("log-weight Levy densities have no closed form"),
        }
    }

    /// Potential density `u(t)` of the subordinator: exact for the stable
    /// family, otherwise the checked Laplace inversion of `1/phi`.
    pub fn potential_density(&self, t: f64) -> Result<f64> {
        let t = require_positive("t", t)?;
        if self.family.kind() == FamilyKind::Stable {
            return Ok(self.closed_u(t));
        }
        let f = &self.family;
        self.inverter.invert_with_talbot(
            |s| 1.0 / f.phi(s).expect("positive axis"),
            |s| f.phi_complex(s).inv(),
            t,
        )
    }

    /// Levy density `mu(t)` of the subordinator. Closed form except for the
    /// log-weight families, whose density comes from inverting `phi'` (the
    /// transform of `t mu(t)`).
    pub fn levy_density(&self, t: f64) -> Result<f64> {
        let t = require_positive("t", t)?;
        match self.family.kind() {
            FamilyKind::Stable | FamilyKind::Relativistic | FamilyKind::StableMixture => {
                Ok(self.closed_mu(t))
            }
            FamilyKind::LogWeightPos | FamilyKind::LogWeightNeg => {
                let f = &self.family;
                let v = self.inverter.invert_with_talbot(
                    |s| f.phi_prime(s),
                    |s| f.phi_prime_complex(s),
                    t,
                )?;
                Ok(v / t)
            }
        }
    }

    /// Relative residual of `int_0^inf e^{-lambda t} u(t) dt = 1/phi(lambda)`.
    /// Uses a fixed composite rule: the inverted densities carry ~1e-8
    /// evaluator noise that defeats error-driven refinement.
    pub fn potential_laplace_residual(&self, lambda: f64) -> Result<f64> {
        let lambda = require_positive("lambda", lambda)?;
        let target = 1.0 / self.family.phi(lambda)?;
        let value = quad::halfline_log_fixed(
            |t| (-lambda * t).exp() * self.potential_density(t).unwrap_or(0.0),
            1.0 / lambda,
            250.0,
            1.0,
        );
        Ok((value - target).abs() / target)
    }

    /// Relative residual of `int_0^inf (1 - e^{-lambda t}) mu(t) dt = phi(lambda)`.
    pub fn levy_laplace_residual(&self, lambda: f64) -> Result<f64> {
        let lambda = require_positive("lambda", lambda)?;
        let target = self.family.phi(lambda)?;
        let value = quad::halfline_log_fixed(
            |t| -(-lambda * t).exp_m1() * self.levy_density(t).unwrap_or(0.0),
            1.0 / lambda,
            250.0,
            1.0,
        );
        Ok((value - target).abs() / target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::log_grid;

    fn all_families() -> Vec<BernsteinFamily> {
        vec![
            BernsteinFamily::stable(1.0).unwrap(),
            BernsteinFamily::relativistic(1.0).unwrap(),
            BernsteinFamily::mixture(1.0, 0.5).unwrap(),
            BernsteinFamily::log_pos(1.0, 0.5).unwrap(),
            BernsteinFamily::log_neg(1.0, 0.5).unwrap(),
        ]
    }

    #[test]
    fn phi_closed_form_values() {
        let rel = BernsteinFamily::relativistic(1.0).unwrap();
        assert!((rel.phi(3.0).unwrap() - 1.0).abs() < 1e-14);
        let st = BernsteinFamily::stable(1.0).unwrap();
        assert!((st.phi(4.0).unwrap() - 2.0).abs() < 1e-14);
        let mix = BernsteinFamily::mixture(1.0, 0.5).unwrap();
        assert!((mix.phi(1.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ell_values() {
        let st = BernsteinFamily::stable(1.3).unwrap();
        assert!((st.ell(17.0).unwrap() - 1.0).abs() < 1e-14);
        let mix = BernsteinFamily::mixture(1.0, 0.5).unwrap();
        assert!((mix.ell(16.0).unwrap() - 1.5).abs() < 1e-12);
        let rel = BernsteinFamily::relativistic(1.0).unwrap();
        assert!((rel.ell(1e8).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn phi_rejects_bad_arguments() {
        let st = BernsteinFamily::stable(1.0).unwrap();
        assert!(st.phi(0.0).is_err());
        assert!(st.phi(-1.0).is_err());
        assert!(st.phi(f64::NAN).is_err());
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(BernsteinFamily::stable(2.0).is_err());
        assert!(BernsteinFamily::stable(0.0).is_err());
        assert!(BernsteinFamily::mixture(1.0, 1.0).is_err());
        assert!(BernsteinFamily::mixture(1.0, 0.0).is_err());
        assert!(BernsteinFamily::log_pos(1.5, 0.6).is_err());
        assert!(BernsteinFamily::log_neg(0.5, 0.6).is_err());
        assert!(BernsteinFamily::new(FamilyKind::Stable, 1.0, Some(0.3)).is_err());
    }

    #[test]
    fn log_ell_matches_direct_evaluation() {
        for fam in all_families() {
            for &lam in &[1e-4, 0.3, 1.0, 7.0, 1e4, 1e10] {
                let direct = fam.phi(lam).unwrap() / lam.powf(0.5 * fam.alpha());
                let vialn = fam.ell(lam).unwrap();
                assert!(
                    (direct / vialn - 1.0).abs() < 1e-11,
                    "{}: lambda={lam} direct={direct} ln={vialn}",
                    fam.label()
                );
            }
        }
    }

    #[test]
    fn ell_tends_to_positive_limit() {
        // ell -> 1 for all closed forms except the log-weight pair, whose
        // ell is slowly varying but unbounded/vanishing; check the defining
        // ratio property instead.
        for fam in all_families() {
            let r = fam.ell(2.0 * 1e12).unwrap() / fam.ell(1e12).unwrap();
            assert!((r - 1.0).abs() < 1e-2, "{}: ratio {r}", fam.label());
        }
    }

    #[test]
    fn phi_increasing_and_concave_on_grid() {
        for fam in all_families() {
            let grid = log_grid(1e-6, 1e12, 400);
            let vals: Vec<f64> = grid.iter().map(|&l| fam.phi(l).unwrap()).collect();
            let mut prev_slope = f64::INFINITY;
            for i in 0..grid.len() - 1 {
                assert!(vals[i + 1] > vals[i], "{} not increasing", fam.label());
                let slope = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]);
                assert!(
                    slope <= prev_slope * (1.0 + 1e-9),
                    "{} not concave at {}",
                    fam.label(),
                    grid[i]
                );
                prev_slope = slope;
            }
        }
    }

    #[test]
    fn stable_potential_density_exact() {
        let m = SubordinatorModel::new(BernsteinFamily::stable(1.0).unwrap());
        let expect = 1.0 / std::f64::consts::PI.sqrt();
        assert!((m.potential_density(1.0).unwrap() - expect).abs() < 1e-15);
        // u(t) t^{1/2} Gamma(1/2) -> 1 as t -> 0
        let t = 1e-8;
        let v = m.potential_density(t).unwrap() * t.sqrt() * gamma(0.5);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stable_levy_density_exact() {
        let m = SubordinatorModel::new(BernsteinFamily::stable(1.0).unwrap());
        let expect = 1.0 / (2.0 * std::f64::consts::PI.sqrt());
        assert!((m.levy_density(1.0).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn mixture_levy_density_is_sum_of_stables() {
        let m = SubordinatorModel::new(BernsteinFamily::mixture(1.0, 0.5).unwrap());
        let s1 = SubordinatorModel::new(BernsteinFamily::stable(1.0).unwrap());
        let s2 = SubordinatorModel::new(BernsteinFamily::stable(0.5).unwrap());
        let expect = s1.levy_density(1.0).unwrap() + s2.levy_density(1.0).unwrap();
        assert!((m.levy_density(1.0).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn relativistic_levy_density_small_t_scaling() {
        let m = SubordinatorModel::new(BernsteinFamily::relativistic(1.0).unwrap());
        let t = 1e-6;
        let v = m.levy_density(t).unwrap() * t.powf(1.5) * 2.0 * gamma(0.5);
        assert!((v - 1.0).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn relativistic_potential_density_matches_asymptotic() {
        let m = SubordinatorModel::new(BernsteinFamily::relativistic(1.0).unwrap());
        let t = 1e-4_f64;
        let fam = m.family();
        let asym = t.powf(-0.5) / gamma(0.5) / fam.ell(1.0 / t).unwrap();
        let v = m.potential_density(t).unwrap();
        assert!((v / asym - 1.0).abs() < 0.03, "v={v} asym={asym}");
    }

    #[test]
    fn laplace_consistency_both_directions() {
        for fam in all_families() {
            let m = SubordinatorModel::new(fam.clone());
            let tol = match fam.kind() {
                FamilyKind::Stable | FamilyKind::StableMixture => 1e-6,
                _ => 1e-4,
            };
            for &lam in &[0.5, 3.0, 40.0] {
                let ru = m.potential_laplace_residual(lam).unwrap();
                let rm = m.levy_laplace_residual(lam).unwrap();
                assert!(ru < tol, "{} u-residual {ru} at lambda={lam}", fam.label());
                assert!(rm < tol, "{} mu-residual {rm} at lambda={lam}", fam.label());
            }
        }
    }

    #[test]
    fn densities_decrease() {
        for fam in all_families() {
            let m = SubordinatorModel::new(fam.clone());
            let ts = log_grid(1e-6, 1e6, 120);
            let mut pu = f64::INFINITY;
            let mut pm = f64::INFINITY;
            // 1e-7 slack: the inverted densities carry Talbot noise.
            for &t in &ts {
                let u = m.potential_density(t).unwrap();
                let mu = m.levy_density(t).unwrap();
                assert!(u <= pu * (1.0 + 1e-7), "{} u increases at t={t}", fam.label());
                assert!(mu <= pm * (1.0 + 1e-7), "{} mu increases at t={t}", fam.label());
                pu = u;
                pm = mu;
            }
        }
    }

    #[test]
    fn planar_transience_flags() {
        assert!(SubordinatorModel::new(BernsteinFamily::stable(1.0).unwrap()).transient_in_plane());
        assert!(!SubordinatorModel::new(BernsteinFamily::relativistic(1.0).unwrap())
            .transient_in_plane());
        assert!(SubordinatorModel::new(BernsteinFamily::mixture(1.0, 0.5).unwrap())
            .transient_in_plane());
    }
}
