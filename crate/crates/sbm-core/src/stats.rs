//! Small statistical helpers shared by the Monte Carlo verifiers.

/// Streaming mean and variance (Welford).
#[derive(Clone, Copy, Debug, Default)]
pub struct MeanSe {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanSe {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn from_slice(xs: &[f64]) -> MeanSe {
        let mut acc = MeanSe::default();
        for &x in xs {
            acc.push(x);
        }
        acc
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (0 when fewer than two samples).
    pub fn variance(&self) -> f64 {
        if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        }
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        if self.n > 1 {
            (self.variance() / self.n as f64).sqrt()
        } else {
            f64::INFINITY
        }
    }
}

/// Pairwise summation: reduction order is fixed, so parallel runs that
/// collect per-path values in path order reproduce the same total bit for
/// bit.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Standard error of a binomial proportion estimate.
pub fn binomial_se(p_hat: f64, n: u64) -> f64 {
    if n == 0 {
        f64::INFINITY
    } else {
        (p_hat * (1.0 - p_hat) / n as f64).sqrt()
    }
}

/// Uniformity-in-`r` proxy for a sequence of empirical constants: the
/// least-squares slope of `ln c` against `ln r` and the max/min ratio.
/// Passing means no upward trend as `r` shrinks (slope >= -0.1) and total
/// variation bounded by a factor 3.
pub fn trend(r_grid: &[f64], constants: &[f64]) -> (f64, f64, bool) {
    assert_eq!(r_grid.len(), constants.len());
    let lx: Vec<f64> = r_grid.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = constants.iter().map(|c| c.ln()).collect();
    let (slope, _) = crate::math::linear_fit(&lx, &ly);
    let max = constants.iter().cloned().fold(f64::MIN, f64::max);
    let min = constants.iter().cloned().fold(f64::MAX, f64::min);
    let ratio = max / min;
    (slope, ratio, slope >= -0.1 && ratio <= 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_direct() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let acc = MeanSe::from_slice(&xs);
        assert!((acc.mean() - 3.75).abs() < 1e-14);
        let var = xs.iter().map(|x| (x - 3.75) * (x - 3.75)).sum::<f64>() / 3.0;
        assert!((acc.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn pairwise_sum_is_exact_on_small_input() {
        let xs: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
    }

    #[test]
    fn trend_flags_upward_drift() {
        let r = [0.5, 0.25, 0.125, 0.0625];
        let flat = [2.0, 2.1, 1.9, 2.05];
        assert!(trend(&r, &flat).2);
        let blowup = [1.0, 2.0, 4.0, 8.0];
        let (slope, _, pass) = trend(&r, &blowup);
        assert!(slope < -0.9 && !pass);
    }
}
