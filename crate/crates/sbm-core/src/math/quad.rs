//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7/15 pair on a worklist ordered by error estimate. Callers provide seed
//! break points when the integrand has known structure (endpoint
//! singularities after substitution, widely separated scales).

use crate::error::{Result, SbmError};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Kronrod abscissae (positive half) and weights; the embedded
// 7-point Gauss rule sits on the odd-indexed nodes.
const XK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XK[i];
        let fs = f(c - x) + f(c + x);
        kron += WK[i] * fs;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fs;
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).abs();
    // QUADPACK-style sharpening of the raw difference.
    let scaled = (200.0 * err / value.abs().max(f64::MIN_POSITIVE)).min(1.0);
    let error = if scaled < 1.0 { err * scaled.powf(0.5) } else { err };
    (value, error.max(value.abs() * 1e-16))
}

/// Integrate `f` over the union of `[pts[0], pts[1]], [pts[1], pts[2]], ...`
/// refining until `sum(err) <= max(abs_tol, rel_tol * |sum(value)|)`.
pub fn integrate_segments<F: Fn(f64) -> f64>(
    f: F,
    pts: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<QuadResult> {
    assert!(pts.len() >= 2, "need at least one segment");
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in pts.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        evaluations += 15;
        heap.push(Segment { a: w[0], b: w[1], value, error });
    }
    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let err: f64 = heap.iter().map(|s| s.error).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target {
            return Ok(QuadResult { value: total, abs_error: err, evaluations });
        }
        if heap.len() >= max_segments {
            return Err(SbmError::QuadratureNonConvergence { achieved: err, requested: target });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; keep its estimate.
            let mut rest: Vec<Segment> = heap.into_vec();
            rest.push(Segment { error: 0.0, ..worst });
            heap = rest.into();
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        evaluations += 30;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

/// Integrate over `[a, b]` with no interior seeds.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    integrate_segments(f, &[a, b], rel_tol, abs_tol, 2000)
}

/// Composite (non-adaptive) Kronrod sum over the given break points. For
/// integrands carrying evaluator noise, where error-driven refinement would
/// chase the noise floor instead of converging.
pub fn integrate_fixed<F: Fn(f64) -> f64>(f: F, pts: &[f64]) -> f64 {
    pts.windows(2).map(|w| gk15(&f, w[0], w[1]).0).sum()
}

/// Fixed-grid version of [`integrate_halfline_log`]: `t = e^y` over
/// `y in [ln t_scale - span, ln t_scale + span]` with the given step.
pub fn halfline_log_fixed<F: Fn(f64) -> f64>(g: F, t_scale: f64, span: f64, step: f64) -> f64 {
    let y0 = t_scale.ln();
    let n = (2.0 * span / step).ceil() as usize;
    let pts: Vec<f64> = (0..=n).map(|i| y0 - span + i as f64 * step).collect();
    integrate_fixed(|y| { let t = y.exp(); g(t) * t }, &pts)
}

/// Integrate `g(t)` over `t in (0, inf)` through the substitution `t = e^y`,
/// with seed points placed around `y = ln(t_scale)`. The wide outer seeds
/// cover slowly decaying power-law heads and tails.
pub fn integrate_halfline_log<F: Fn(f64) -> f64>(
    g: F,
    t_scale: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let y0 = t_scale.ln();
    let offsets = [
        -250.0, -120.0, -60.0, -30.0, -14.0, -6.0, -2.0, 0.0, 2.0, 6.0, 14.0, 30.0, 60.0, 120.0,
        250.0,
    ];
    let pts: Vec<f64> = offsets.iter().map(|o| y0 + o).collect();
    integrate_segments(|y| { let t = y.exp(); g(t) * t }, &pts, rel_tol, 1e-300, 4000)
}
