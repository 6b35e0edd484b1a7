//! Monotone cubic interpolation (Fritsch-Carlson) on a fixed grid, used to
//! cache densities that are expensive to evaluate pointwise.

/// Piecewise-cubic Hermite interpolant whose slopes are limited so that
/// monotone data produce a monotone interpolant. Outside the grid it
/// extrapolates linearly with the edge slope.
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> MonotoneCubic {
        assert!(x.len() == y.len() && x.len() >= 2, "need at least two points");
        assert!(x.windows(2).all(|w| w[1] > w[0]), "abscissae must be strictly increasing");
        let n = x.len();
        let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut slope = vec![0.0; n];
        slope[0] = d[0];
        slope[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                slope[i] = 0.0;
            } else {
                let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                slope[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // Fritsch-Carlson limiter on the interval ends.
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                slope[i] = 0.0;
                slope[i + 1] = 0.0;
            } else {
                let a = slope[i] / d[i];
                let b = slope[i + 1] / d[i];
                let s = (a * a + b * b).sqrt();
                if s > 3.0 {
                    slope[i] = 3.0 * a / s * d[i];
                    slope[i + 1] = 3.0 * b / s * d[i];
                }
            }
        }
        MonotoneCubic { x, y, slope }
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        if xq <= self.x[0] {
            return self.y[0] + self.slope[0] * (xq - self.x[0]);
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1] + self.slope[n - 1] * (xq - self.x[n - 1]);
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        h00 * self.y[i] + h10 * h * self.slope[i] + h01 * self.y[i + 1] + h11 * h * self.slope[i + 1]
    }
}
