//! One-dimensional fluctuation theory for the subordinate Brownian motion
//! with characteristic exponent `Phi(theta) = phi(theta^2) = |theta|^alpha
//! ell(theta^2)`: the ladder-height Laplace exponent `chi`, its conjugate
//! `rho`, the ladder potential `V` and its density `v`, the half-line Green
//! function, and the explicit interval exit-time majorant.

use crate::bernstein::{BernsteinFamily, FamilyKind};
use crate::error::{require_positive, Result, SbmError};
use crate::math::interp::MonotoneCubic;
use crate::math::invlap::CheckedInverter;
use crate::math::{gamma, quad};
use std::sync::OnceLock;

/// Ladder-height Laplace exponent evaluator.
///
/// `chi(lambda) = exp((1/pi) int_0^inf log Phi(lambda theta) / (1 + theta^2)
/// dtheta)`. The power part of `log Phi` integrates in closed form to
/// `lambda^{alpha/2}` and `ell(lambda^2)^{1/2}`; only the slowly varying
/// remainder `log(ell(lambda^2 theta^2)/ell(lambda^2))` is quadratured,
/// on the log axis `theta = e^s` where it decays like `|s| e^{-|s|}`.
#[derive(Clone, Debug)]
pub struct LadderExponent {
    family: BernsteinFamily,
    quad_rel_tol: f64,
}

impl LadderExponent {
    pub fn new(family: BernsteinFamily) -> LadderExponent {
        LadderExponent { family, quad_rel_tol: 1e-10 }
    }

    pub fn family(&self) -> &BernsteinFamily {
        &self.family
    }

    fn remainder_integral(&self, lambda: f64, flip_sign: bool) -> Result<f64> {
        let l2 = 2.0 * lambda.ln();
        let base = self.family.log_ell_ln(l2);
        let fam = &self.family;
        let integrand = move |s: f64| {
            let delta = fam.log_ell_ln(l2 + 2.0 * s) - base;
            let delta = if flip_sign { -delta } else { delta };
            // e^s/(1+e^{2s}) = 1/(2 cosh s), written to avoid overflow.
            delta / (2.0 * s.cosh())
        };
        let pts = [-60.0, -30.0, -12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0, 30.0, 60.0];
        let q = quad::integrate_segments(integrand, &pts, self.quad_rel_tol, 1e-14, 4000)?;
        Ok(q.value)
    }

    /// `chi(lambda)`.
    pub fn chi(&self, lambda: f64) -> Result<f64> {
        let lambda = require_positive("lambda", lambda)?;
        let rem = self.remainder_integral(lambda, false)?;
        let half_log_ell = 0.5 * self.family.log_ell_ln(2.0 * lambda.ln());
        Ok((0.5 * self.family.alpha() * lambda.ln() + half_log_ell
            + rem / std::f64::consts::PI)
            .exp())
    }

    /// `rho(lambda)`: the ladder exponent of the conjugate subordinate
    /// Brownian motion driven by `psi(lambda) = lambda / phi(lambda)`, whose
    /// index is `2 - alpha` and whose slowly varying factor is `1/ell`.
    pub fn rho(&self, lambda: f64) -> Result<f64> {
        let lambda = require_positive("lambda", lambda)?;
        let rem = self.remainder_integral(lambda, true)?;
        let half_log_ell = -0.5 * self.family.log_ell_ln(2.0 * lambda.ln());
        Ok(((1.0 - 0.5 * self.family.alpha()) * lambda.ln() + half_log_ell
            + rem / std::f64::consts::PI)
            .exp())
    }

    /// Deviation of `chi(lambda)` from its large-`lambda` form
    /// `lambda^{alpha/2} ell(lambda^2)^{1/2}`, as a ratio.
    pub fn ladder_asymptotic_ratio(&self, lambda: f64) -> Result<f64> {
        let rem = self.remainder_integral(lambda, false)?;
        Ok((rem / std::f64::consts::PI).exp())
    }
}

/// Ladder potential `V((0, x))` and its density `v(x)`, exact for the stable
/// family and by staggered-order Gaver-Stehfest inversion of `1/(lambda
/// chi(lambda))` and `1/chi(lambda)` otherwise. Inverted values are cached
/// on a log grid; construction is lazy and the object is immutable
/// afterwards.
pub struct LadderPotential {
    exponent: LadderExponent,
    inverter: CheckedInverter,
    v_cache: OnceLock<Result<MonotoneCubic>>,
    big_v_cache: OnceLock<Result<MonotoneCubic>>,
}

const LADDER_CACHE_LO: f64 = 1e-7;
const LADDER_CACHE_HI: f64 = 1e4;
const LADDER_CACHE_PER_DECADE: usize = 16;

impl LadderPotential {
    pub fn new(family: BernsteinFamily) -> LadderPotential {
        LadderPotential {
            exponent: LadderExponent::new(family),
            // Stagger-order agreement gate; see the ladder asymptotics notes.
            inverter: CheckedInverter::new(16, 2e-4),
            v_cache: OnceLock::new(),
            big_v_cache: OnceLock::new(),
        }
    }

    pub fn exponent(&self) -> &LadderExponent {
        &self.exponent
    }

    pub fn family(&self) -> &BernsteinFamily {
        self.exponent.family()
    }

    fn is_stable(&self) -> bool {
        self.family().kind() == FamilyKind::Stable
    }

    fn build_cache(&self, with_extra_lambda: bool) -> Result<MonotoneCubic> {
        let decades = (LADDER_CACHE_HI / LADDER_CACHE_LO).log10().round() as usize;
        let n = decades * LADDER_CACHE_PER_DECADE + 1;
        let xs = crate::math::log_grid(LADDER_CACHE_LO, LADDER_CACHE_HI, n);
        let exponent = &self.exponent;
        let transform = move |s: f64| -> f64 {
            let chi = exponent.chi(s).unwrap_or(f64::NAN);
            if with_extra_lambda {
                1.0 / (s * chi)
            } else {
                1.0 / chi
            }
        };
        let mut lx = Vec::with_capacity(n);
        let mut ly = Vec::with_capacity(n);
        for &x in &xs {
            let v = self.inverter.invert_real(&transform, x)?;
            if !(v > 0.0) {
                return Err(SbmError::InversionFailure { t: x, residual: f64::NAN, tol: 0.0 });
            }
            lx.push(x.ln());
            ly.push(v.ln());
        }
        Ok(MonotoneCubic::new(lx, ly))
    }

    /// Ladder potential density `v(x)`.
    pub fn density(&self, x: f64) -> Result<f64> {
        let x = require_positive("x", x)?;
        if self.is_stable() {
            let a2 = 0.5 * self.family().alpha();
            return Ok(x.powf(a2 - 1.0) / gamma(a2));
        }
        match self.v_cache.get_or_init(|| self.build_cache(false)) {
            Ok(c) => Ok(c.eval(x.ln()).exp()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Ladder potential `V((0, x))`.
    pub fn potential(&self, x: f64) -> Result<f64> {
        let x = require_positive("x", x)?;
        if self.is_stable() {
            let a2 = 0.5 * self.family().alpha();
            return Ok(x.powf(a2) / gamma(1.0 + a2));
        }
        match self.big_v_cache.get_or_init(|| self.build_cache(true)) {
            Ok(c) => Ok(c.eval(x.ln()).exp()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Both at once, as `(V((0,x)), v(x))`.
    pub fn ladder_potential(&self, x: f64) -> Result<(f64, f64)> {
        Ok((self.potential(x)?, self.density(x)?))
    }

    /// Green function of the process killed on leaving `(0, inf)`:
    /// `int_0^x v(z) v(y + z - x) dz` for `x <= y` and
    /// `int_{x-y}^x v(z) v(y + z - x) dz` for `x > y`.
    pub fn half_line_green(&self, x: f64, y: f64) -> Result<f64> {
        let x = require_positive("x", x)?;
        let y = require_positive("y", y)?;
        let alpha = self.family().alpha();
        if x == y && alpha <= 1.0 {
            // v(z)^2 ~ z^{alpha-2} is not integrable at 0.
            return Ok(f64::INFINITY);
        }
        // Both branches have their integrable singularity where the first
        // factor's argument vanishes; z = w^{2/alpha} flattens it since
        // v(z) ~ z^{alpha/2 - 1}.
        let p = 2.0 / alpha;
        if x <= y {
            let gap = y - x;
            let w_hi = x.powf(1.0 / p);
            let f = |w: f64| {
                let z = w.powf(p);
                let va = self.density(z).unwrap_or(0.0);
                let vb = self.density(gap + z).unwrap_or(0.0);
                va * vb * p * w.powf(p - 1.0)
            };
            let pts: Vec<f64> = [0.0, 1e-8, 1e-4, 1e-2, 0.25, 0.5, 1.0]
                .iter()
                .map(|&q| q * w_hi)
                .collect();
            Ok(quad::integrate_segments(f, &pts, 1e-9, 1e-14, 4000)?.value)
        } else {
            // Substitute z = (x - y) + w^p so the singular factor
            // v(y + z - x) = v(w^p) is flattened at w = 0.
            let base = x - y;
            let w_hi = y.powf(1.0 / p);
            let f = |w: f64| {
                let z = base + w.powf(p);
                let va = self.density(z).unwrap_or(0.0);
                let vb = self.density(w.powf(p)).unwrap_or(0.0);
                va * vb * p * w.powf(p - 1.0)
            };
            let pts: Vec<f64> = [0.0, 1e-8, 1e-4, 1e-2, 0.25, 0.5, 1.0]
                .iter()
                .map(|&q| q * w_hi)
                .collect();
            Ok(quad::integrate_segments(f, &pts, 1e-9, 1e-14, 4000)?.value)
        }
    }

    /// Explicit exit-time majorants for the interval `(0, r)` started at
    /// `x`: `2 V((0,r)) V((0,x))`, and the tighter two-sided form using the
    /// reflected endpoint.
    pub fn interval_exit_bound(&self, r: f64, x: f64) -> Result<ExitBound> {
        let r = require_positive("r", r)?;
        let x = require_positive("x", x)?;
        if x >= r {
            return Err(SbmError::Domain(format!("x={x} must lie inside (0, r={r})")));
        }
        let vr = self.potential(r)?;
        let vx = self.potential(x)?;
        let vrx = self.potential(r - x)?;
        Ok(ExitBound { majorant: 2.0 * vr * vx, two_sided: 2.0 * vr * vx.min(vrx) })
    }
}

/// Exit-time majorants returned by [`LadderPotential::interval_exit_bound`].
#[derive(Clone, Copy, Debug)]
pub struct ExitBound {
    /// `2 V((0,r)) V((0,x))`
    pub majorant: f64,
    /// `2 V((0,r)) (V((0,x)) /\ V((0,r-x)))`
    pub two_sided: f64,
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
    fn stable_chi_is_exact_power() {
        let le = LadderExponent::new(BernsteinFamily::stable(1.0).unwrap());
        assert!((le.chi(4.0).unwrap() - 2.0).abs() < 1e-6);
        assert!((le.chi(9.0).unwrap() - 3.0).abs() < 1e-6);
    }

    #[test]
    fn conjugate_identity_on_log_grid() {
        for fam in all_families() {
            let le = LadderExponent::new(fam.clone());
            for &lam in &log_grid(1e-3, 1e6, 19) {
                let p = le.chi(lam).unwrap() * le.rho(lam).unwrap() / lam;
                assert!((p - 1.0).abs() < 1e-4, "{} lambda={lam}: {p}", fam.label());
            }
        }
    }

    #[test]
    fn ladder_asymptotic_ratio_tends_to_one() {
        for fam in all_families() {
            let le = LadderExponent::new(fam.clone());
            let lam = 1e8;
            let chi = le.chi(lam).unwrap();
            let form = lam.powf(0.5 * fam.alpha()) * fam.ell(lam * lam).unwrap().sqrt();
            assert!(
                (chi / form - 1.0).abs() < 1e-2,
                "{}: ratio {}",
                fam.label(),
                chi / form
            );
        }
    }

    #[test]
    fn stable_ladder_potential_closed_forms() {
        let lp = LadderPotential::new(BernsteinFamily::stable(1.0).unwrap());
        let (big_v, v) = lp.ladder_potential(1.0).unwrap();
        assert!((big_v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((v - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn inverted_ladder_potential_is_laplace_consistent() {
        // For the mixture family check int_0^inf e^{-lambda x} v(x) dx =
        // 1/chi(lambda) directly.
        let lp = LadderPotential::new(BernsteinFamily::mixture(1.0, 0.5).unwrap());
        for &lam in &[0.7, 5.0] {
            let target = 1.0 / lp.exponent().chi(lam).unwrap();
            let got = quad::halfline_log_fixed(
                |x| (-lam * x).exp() * lp.density(x).unwrap_or(0.0),
                1.0 / lam,
                60.0,
                1.0,
            );
            assert!((got / target - 1.0).abs() < 1e-3, "lambda={lam}: {got} vs {target}");
        }
    }

    #[test]
    fn relativistic_density_matches_small_x_asymptotic() {
        let lp = LadderPotential::new(BernsteinFamily::relativistic(1.0).unwrap());
        let x = 1e-3;
        let fam = lp.family();
        let v = lp.density(x).unwrap();
        let scaled = v * gamma(0.5) * x.sqrt() * fam.ell(x.powi(-2)).unwrap().sqrt();
        assert!((0.97..=1.03).contains(&scaled), "scaled v = {scaled}");
    }

    #[test]
    fn half_line_green_symmetry_and_monotonicity() {
        let lp = LadderPotential::new(BernsteinFamily::stable(1.0).unwrap());
        for &(x, y) in &[(0.3, 1.1), (0.9, 2.4), (1.7, 0.2), (0.05, 0.06)] {
            let a = lp.half_line_green(x, y).unwrap();
            let b = lp.half_line_green(y, x).unwrap();
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "({x},{y}): {a} vs {b}");
        }
        // Increasing in x for fixed y >= x; vanishing as x -> 0.
        let g1 = lp.half_line_green(0.1, 2.0).unwrap();
        let g2 = lp.half_line_green(0.5, 2.0).unwrap();
        let g3 = lp.half_line_green(1.5, 2.0).unwrap();
        assert!(g1 < g2 && g2 < g3);
        assert!(lp.half_line_green(1e-6, 2.0).unwrap() < 1e-3);
    }

    #[test]
    fn half_line_green_matches_riesz_kernel_oracle() {
        // Independent route: the classical half-line kernel for the
        // alpha-stable process, kappa |x-y|^{alpha-1} int_0^{4xy/(x-y)^2}
        // s^{alpha/2-1} (1+s)^{-1/2} ds with kappa = 1/(2^alpha
        // Gamma(alpha/2)^2).
        for &alpha in &[0.7, 1.0, 1.4] {
            let lp = LadderPotential::new(BernsteinFamily::stable(alpha).unwrap());
            let kappa = 1.0 / (2f64.powf(alpha) * gamma(0.5 * alpha).powi(2));
            for &(x, y) in &[(1.0f64, 2.0f64), (0.4, 0.5), (3.0, 0.7)] {
                let r_max = 4.0 * x * y / (x - y) / (x - y);
                let oracle = kappa
                    * (x - y).abs().powf(alpha - 1.0)
                    * quad::integrate_segments(
                        |s: f64| s.powf(0.5 * alpha - 1.0) / (1.0 + s).sqrt(),
                        &[0.0, r_max.min(1e-6), r_max.min(1e-2), r_max.min(1.0), r_max],
                        1e-10,
                        1e-14,
                        4000,
                    )
                    .unwrap()
                    .value;
                let got = lp.half_line_green(x, y).unwrap();
                assert!(
                    (got / oracle - 1.0).abs() < 1e-6,
                    "alpha={alpha} ({x},{y}): {got} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn exit_bound_examples() {
        let lp = LadderPotential::new(BernsteinFamily::stable(1.0).unwrap());
        let b = lp.interval_exit_bound(1.0, 0.5).unwrap();
        let expect = 2.0 * (2.0 / std::f64::consts::PI.sqrt())
            * (2.0 / std::f64::consts::PI.sqrt())
            * 0.5f64.sqrt();
        assert!((b.majorant - expect).abs() < 1e-10);
        assert!((b.majorant - 1.80063).abs() < 1e-4);
        assert!(b.two_sided <= b.majorant);
        // Bound vanishes with x.
        assert!(lp.interval_exit_bound(1.0, 1e-9).unwrap().majorant < 1e-4);
        assert!(lp.interval_exit_bound(1.0, 1.0).is_err());
    }
}
