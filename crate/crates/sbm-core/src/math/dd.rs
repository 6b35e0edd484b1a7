//! Double-double accumulation for ill-conditioned sums.
//!
//! The Gaver-Stehfest weights alternate in sign and grow to ~1e8 at order 16,
//! so the inversion sum cancels about nine digits. Accumulating in
//! double-double keeps the summation error below the error of the transform
//! evaluations themselves.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    // mul_add is exact even through the soft-float fallback.
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    /// Accumulate the exact product `a * b`.
    #[inline]
    pub fn add_prod(self, a: f64, b: f64) -> Dd {
        let (p, e) = two_prod(a, b);
        self.add(Dd { hi: p, lo: e })
    }

    #[inline]
    pub fn scale(self, k: f64) -> Dd {
        let (p, e) = two_prod(self.hi, k);
        let lo = self.lo * k + e;
        let (hi, lo) = two_sum(p, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_survives() {
        // 1 + 1e17 - 1e17 is 0 in f64 but 1 in double-double.
        let s = Dd::from_f64(1.0).add(Dd::from_f64(1e17)).add(Dd::from_f64(-1e17));
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn product_accumulation() {
        let mut acc = Dd::ZERO;
        for _ in 0..1000 {
            acc = acc.add_prod(0.1, 0.1);
        }
        assert!((acc.value() - 10.0).abs() < 1e-13);
    }
}
