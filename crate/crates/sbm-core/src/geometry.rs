//! Test domains with exact membership tests, fatness witnesses, and
//! boundary-point catalogs. Dimension is a compile-time parameter; points
//! are plain arrays.

use crate::error::{Result, SbmError};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
pub type Point<const D: usize> = [f64; D];

#[inline]
pub fn sub<const D: usize>(a: &Point<D>, b: &Point<D>) -> Point<D> {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn add_scaled<const D: usize>(a: &Point<D>, s: f64, dir: &Point<D>) -> Point<D> {
    std::array::from_fn(|i| a[i] + s * dir[i])
}

#[inline]
pub fn norm<const D: usize>(a: &Point<D>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[inline]
pub fn dist<const D: usize>(a: &Point<D>, b: &Point<D>) -> f64 {
    norm(&sub(a, b))
}

#[inline]
pub fn normalize<const D: usize>(a: &Point<D>) -> Point<D> {
    let n = norm(a);
    std::array::from_fn(|i| a[i] / n)
}

/// Shape catalog. `LShape` removes the quadrant `{x0 > 0, x1 < 0}` from a
/// cube, producing a re-entrant edge; `SlitBall` removes a half-slab from a
/// ball; `TwoBalls` is a disconnected union.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape<const D: usize> {
    Ball { center: Point<D>, radius: f64 },
    Box { min: Point<D>, max: Point<D> },
    LShape { half_size: f64 },
    SlitBall { radius: f64, slit_half_width: f64 },
    TwoBalls { centers: [Point<D>; 2], radii: [f64; 2] },
}

/// A kappa-fat test domain: shape plus fatness characteristics `(R, kappa)`
/// and a witness constructor `A_r(Q)`. Construction verifies the witness
/// property by rejection sampling over boundary points and dyadic radii.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain<const D: usize> {
    shape: Shape<D>,
    kappa: f64,
    r_char: f64,
}

impl<const D: usize> Domain<D> {
    pub fn ball(center: Point<D>, radius: f64) -> Result<Domain<D>> {
        if radius <= 0.0 {
            return Err(SbmError::Parameter("ball radius must be positive".into()));
        }
        Domain::checked(Shape::Ball { center, radius }, 0.5, radius)
    }

    pub fn unit_ball() -> Result<Domain<D>> {
        Domain::ball([0.0; D], 1.0)
    }

    pub fn cube(half_size: f64) -> Result<Domain<D>> {
        let min = [-half_size; D];
        let max = [half_size; D];
        let kappa = 0.5 / (D as f64).sqrt();
        Domain::checked(Shape::Box { min, max }, kappa, half_size)
    }

    pub fn box_domain(min: Point<D>, max: Point<D>) -> Result<Domain<D>> {
        let side = (0..D).map(|i| max[i] - min[i]).fold(f64::INFINITY, f64::min);
        if side <= 0.0 {
            return Err(SbmError::Parameter("box must have positive extent".into()));
        }
        let kappa = 0.5 / (D as f64).sqrt();
        Domain::checked(Shape::Box { min, max }, kappa, side)
    }

    pub fn l_shape(half_size: f64) -> Result<Domain<D>> {
        if D < 2 {
            return Err(SbmError::Parameter("the L-shaped domain needs d >= 2".into()));
        }
        let kappa = 0.5 / (D as f64).sqrt();
        Domain::checked(Shape::LShape { half_size }, kappa, half_size)
    }

    pub fn slit_ball(radius: f64, slit_half_width: f64) -> Result<Domain<D>> {
        if D < 2 {
            return Err(SbmError::Parameter("the slit ball needs d >= 2".into()));
        }
        if !(slit_half_width > 0.0 && slit_half_width < 0.5 * radius) {
            return Err(SbmError::Parameter("slit half-width must lie in (0, radius/2)".into()));
        }
        let kappa = 0.25 / (D as f64).sqrt();
        Domain::checked(Shape::SlitBall { radius, slit_half_width }, kappa, 0.5 * radius)
    }

    pub fn two_balls(centers: [Point<D>; 2], radii: [f64; 2]) -> Result<Domain<D>> {
        let gap = dist(&centers[0], &centers[1]);
        if gap <= radii[0] + radii[1] {
            return Err(SbmError::Parameter("the two balls must be disjoint".into()));
        }
        let r_char = radii[0].min(radii[1]);
        Domain::checked(Shape::TwoBalls { centers, radii }, 0.5, r_char)
    }

    fn checked(shape: Shape<D>, kappa: f64, r_char: f64) -> Result<Domain<D>> {
        let domain = Domain { shape, kappa, r_char };
        domain.verify_witnesses()?;
        Ok(domain)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn r_char(&self) -> f64 {
        self.r_char
    }

    pub fn shape(&self) -> &Shape<D> {
        &self.shape
    }

    pub fn kind_name(&self) -> &'static str {
        match self.shape {
            Shape::Ball { .. } => "ball",
            Shape::Box { .. } => "box",
            Shape::LShape { .. } => "lshape",
            Shape::SlitBall { .. } => "slitball",
            Shape::TwoBalls { .. } => "twoballs",
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Box { min, max } => dist(min, max),
            Shape::LShape { half_size } => 2.0 * half_size * (D as f64).sqrt(),
            Shape::SlitBall { radius, .. } => 2.0 * radius,
            Shape::TwoBalls { centers, radii } => {
                dist(&centers[0], &centers[1]) + radii[0] + radii[1]
            }
        }
    }

    /// Exact membership test (open set).
    pub fn contains(&self, p: &Point<D>) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => dist(p, center) < *radius,
            Shape::Box { min, max } => (0..D).all(|i| p[i] > min[i] && p[i] < max[i]),
            Shape::LShape { half_size } => {
                let inside_box = p.iter().all(|&v| v.abs() < *half_size);
                inside_box && !(p[0] >= 0.0 && p[1] <= 0.0)
            }
            Shape::SlitBall { radius, slit_half_width } => {
                norm(p) < *radius && !(p[0] >= 0.0 && p[1].abs() <= *slit_half_width)
            }
            Shape::TwoBalls { centers, radii } => {
                dist(p, &centers[0]) < radii[0] || dist(p, &centers[1]) < radii[1]
            }
        }
    }

    /// Distance to the boundary from an interior point (exact analytic
    /// geometry per shape; returns 0 outside).
    pub fn dist_to_boundary(&self, p: &Point<D>) -> f64 {
        if !self.contains(p) {
            return 0.0;
        }
        match &self.shape {
            Shape::Ball { center, radius } => radius - dist(p, center),
            Shape::Box { min, max } => (0..D)
                .map(|i| (p[i] - min[i]).min(max[i] - p[i]))
                .fold(f64::INFINITY, f64::min),
            Shape::LShape { half_size } => {
                let to_box = p.iter().map(|&v| half_size - v.abs()).fold(f64::INFINITY, f64::min);
                // Distance to the removed quadrant {x0 >= 0, x1 <= 0}.
                let dx0 = (-p[0]).max(0.0);
                let dx1 = p[1].max(0.0);
                let to_notch = if p[0] < 0.0 && p[1] > 0.0 {
                    (dx0 * dx0 + dx1 * dx1).sqrt()
                } else {
                    dx0.max(dx1)
                };
                to_box.min(to_notch)
            }
            Shape::SlitBall { radius, slit_half_width } => {
                let to_sphere = radius - norm(p);
                let dy = (p[1].abs() - slit_half_width).max(0.0);
                let to_slab = if p[0] >= 0.0 {
                    dy
                } else {
                    (p[0] * p[0] + dy * dy).sqrt()
                };
                to_sphere.min(to_slab)
            }
            Shape::TwoBalls { centers, radii } => {
                let d0 = radii[0] - dist(p, &centers[0]);
                let d1 = radii[1] - dist(p, &centers[1]);
                d0.max(d1)
            }
        }
    }

    /// Fatness witness `A_r(Q)`: a point with `B(A, kappa r) subset
    /// D intersect B(Q, r)` for boundary points `Q` and `r <= r_char`.
    ///
    /// Balls use the inward radial point at distance `r/2`; box-like shapes
    /// use the best of a fixed candidate fan at distance `r/2` from `Q`,
    /// which handles faces, convex corners and the re-entrant edge alike.
    pub fn witness(&self, q: &Point<D>, r: f64) -> Point<D> {
        match &self.shape {
            Shape::Ball { center, .. } => {
                let dir = normalize(&sub(center, q));
                add_scaled(q, 0.5 * r, &dir)
            }
            Shape::TwoBalls { centers, radii } => {
                let which = if (dist(q, &centers[0]) - radii[0]).abs()
                    <= (dist(q, &centers[1]) - radii[1]).abs()
                {
                    0
                } else {
                    1
                };
                let dir = normalize(&sub(&centers[which], q));
                add_scaled(q, 0.5 * r, &dir)
            }
            _ => {
                let mut best = *q;
                let mut best_clearance = f64::MIN;
                for dir in candidate_directions::<D>() {
                    let cand = add_scaled(q, 0.5 * r, &dir);
                    let clearance = self.dist_to_boundary(&cand);
                    if clearance > best_clearance {
                        best_clearance = clearance;
                        best = cand;
                    }
                }
                best
            }
        }
    }

    /// A deterministic catalog of representative boundary points: face
    /// centers, convex corners, and for the non-smooth shapes the re-entrant
    /// feature itself.
    pub fn boundary_points(&self, extra: usize) -> Vec<Point<D>> {
        let mut out: Vec<Point<D>> = Vec::new();
        match &self.shape {
            Shape::Ball { center, radius } => {
                for i in 0..D {
                    for sign in [1.0, -1.0] {
                        let mut p = *center;
                        p[i] += sign * radius;
                        out.push(p);
                    }
                }
                let diag = normalize(&[1.0; D]);
                out.push(add_scaled(center, *radius, &diag));
            }
            Shape::Box { min, max } => {
                let mid: Point<D> = std::array::from_fn(|i| 0.5 * (min[i] + max[i]));
                for i in 0..D {
                    let mut lo = mid;
                    lo[i] = min[i];
                    out.push(lo);
                    let mut hi = mid;
                    hi[i] = max[i];
                    out.push(hi);
                }
                out.push(*min);
                out.push(*max);
            }
            Shape::LShape { half_size } => {
                // The re-entrant edge point first.
                out.push([0.0; D]);
                let s = *half_size;
                let mut p = [0.0; D];
                p[0] = -s;
                out.push(p);
                let mut p = [0.0; D];
                p[1] = s;
                out.push(p);
                let mut p = [0.0; D];
                p[0] = -s;
                p[1] = s;
                out.push(p);
                let mut p = [0.0; D];
                p[0] = 0.5 * s;
                p[1] = 0.0;
                out.push(p);
            }
            Shape::SlitBall { radius, slit_half_width } => {
                // Slit tip edge, slit face, and the smooth sphere.
                let mut p = [0.0; D];
                p[1] = *slit_half_width;
                out.push(p);
                let mut p = [0.0; D];
                p[0] = 0.5 * radius;
                p[1] = *slit_half_width;
                out.push(p);
                let mut p = [0.0; D];
                p[0] = -radius;
                out.push(p);
                let mut p = [0.0; D];
                p[1] = *radius;
                out.push(p);
            }
            Shape::TwoBalls { centers, radii } => {
                for which in 0..2 {
                    for sign in [1.0, -1.0] {
                        let mut p = centers[which];
                        p[0] += sign * radii[which];
                        out.push(p);
                    }
                }
            }
        }
        if extra > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(GEOMETRY_SEED);
            for _ in 0..extra {
                out.push(self.random_boundary_point(&mut rng));
            }
        }
        out
    }

    fn random_boundary_point(&self, rng: &mut ChaCha8Rng) -> Point<D> {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let dir = random_unit(rng);
                add_scaled(center, *radius, &dir)
            }
            Shape::TwoBalls { centers, radii } => {
                let which = usize::from(rng.random::<f64>() < 0.5);
                let dir = random_unit(rng);
                add_scaled(&centers[which], radii[which], &dir)
            }
            _ => {
                // Project a random interior ray onto the boundary by
                // bisection between an inside and an outside point.
                loop {
                    let inside = self.sample_interior(rng);
                    let dir = random_unit::<D>(rng);
                    let mut lo = 0.0;
                    let mut hi = self.diameter() * 2.0;
                    if self.contains(&add_scaled(&inside, hi, &dir)) {
                        continue;
                    }
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if self.contains(&add_scaled(&inside, mid, &dir)) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    return add_scaled(&inside, hi, &dir);
                }
            }
        }
    }

    /// Uniform sample from the interior by rejection from a bounding box.
    pub fn sample_interior(&self, rng: &mut ChaCha8Rng) -> Point<D> {
        let (lo, hi) = self.bounding_box();
        loop {
            let p: Point<D> =
                std::array::from_fn(|i| lo[i] + (hi[i] - lo[i]) * rng.random::<f64>());
            if self.contains(&p) {
                return p;
            }
        }
    }

    pub fn bounding_box(&self) -> (Point<D>, Point<D>) {
        match &self.shape {
            Shape::Ball { center, radius } => (
                std::array::from_fn(|i| center[i] - radius),
                std::array::from_fn(|i| center[i] + radius),
            ),
            Shape::Box { min, max } => (*min, *max),
            Shape::LShape { half_size } => ([-half_size; D], [*half_size; D]),
            Shape::SlitBall { radius, .. } => ([-radius; D], [*radius; D]),
            Shape::TwoBalls { centers, radii } => (
                std::array::from_fn(|i| {
                    (centers[0][i] - radii[0]).min(centers[1][i] - radii[1])
                }),
                std::array::from_fn(|i| {
                    (centers[0][i] + radii[0]).max(centers[1][i] + radii[1])
                }),
            ),
        }
    }

    /// Construction-time witness verification: for catalog boundary points
    /// and dyadic radii, sample the claimed ball `B(A_r(Q), kappa r)` and
    /// check it stays inside `D intersect B(Q, r)`.
    fn verify_witnesses(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(GEOMETRY_SEED ^ 0x77);
        let qs = self.boundary_points(8);
        for q in &qs {
            let mut r = self.r_char;
            for _ in 0..6 {
                let a = self.witness(q, r);
                let kr = self.kappa * r;
                for _ in 0..160 {
                    let dir = random_unit::<D>(&mut rng);
                    let radius = kr * rng.random::<f64>().powf(1.0 / D as f64);
                    let p = add_scaled(&a, radius * (1.0 - 1e-12), &dir);
                    if !self.contains(&p) || dist(&p, q) >= r {
                        return Err(SbmError::Geometry(format!(
                            "witness ball escapes at Q={q:?}, r={r}: offending point {p:?}"
                        )));
                    }
                }
                r *= 0.5;
            }
        }
        Ok(())
    }
}

fn random_unit<const D: usize>(rng: &mut ChaCha8Rng) -> Point<D> {
    loop {
        let p: Point<D> = std::array::from_fn(|_| {
            let u: f64 = rng.random();
            2.0 * u - 1.0
        });
        let n = norm(&p);
        if n > 1e-3 && n <= 1.0 {
            return std::array::from_fn(|i| p[i] / n);
        }
    }
}

/// Candidate witness directions: all nonzero sign patterns over the
/// coordinates, normalized.
fn candidate_directions<const D: usize>() -> Vec<Point<D>> {
    let mut out = Vec::new();
    let n: usize = 3usize.pow(D as u32);
    for code in 1..n {
        let mut c = code;
        let mut dir = [0.0; D];
        let mut nonzero = false;
        for item in dir.iter_mut() {
            let digit = c % 3;
            c /= 3;
            *item = match digit {
                0 => 0.0,
                1 => 1.0,
                _ => -1.0,
            };
            nonzero |= *item != 0.0;
        }
        if nonzero {
            out.push(normalize(&dir));
        }
    }
    out
}

// Internal seed for the deterministic geometry RNG (witness verification
// and boundary-point sampling).
const GEOMETRY_SEED: u64 = 0x6b1f_3a2d_9c07_4e55;

/// Anything a path can be killed on leaving. Verifiers simulate in
/// intersections of a catalog domain with a localization ball.
pub trait Region<const D: usize>: Sync {
    fn region_contains(&self, p: &Point<D>) -> bool;
}

impl<const D: usize> Region<D> for Domain<D> {
    fn region_contains(&self, p: &Point<D>) -> bool {
        self.contains(p)
    }
}

/// `domain intersect B(center, radius)`.
pub struct BallIntersection<'a, const D: usize> {
    pub domain: &'a Domain<D>,
    pub center: Point<D>,
    pub radius: f64,
}

impl<const D: usize> Region<D> for BallIntersection<'_, D> {
    fn region_contains(&self, p: &Point<D>) -> bool {
        dist(p, &self.center) < self.radius && self.domain.contains(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_membership_and_witness() {
        let d: Domain<3> = Domain::unit_ball().unwrap();
        assert!(d.contains(&[0.0, 0.0, 0.0]));
        assert!(!d.contains(&[1.0, 0.0, 0.0]));
        let q = [1.0, 0.0, 0.0];
        let a = d.witness(&q, 0.5);
        assert!((dist(&a, &q) - 0.25).abs() < 1e-12);
        assert!(d.contains(&a));
    }

    #[test]
    fn lshape_excludes_notch() {
        let d: Domain<2> = Domain::l_shape(1.0).unwrap();
        assert!(d.contains(&[-0.5, 0.5]));
        assert!(d.contains(&[-0.5, -0.5]));
        assert!(d.contains(&[0.5, 0.5]));
        assert!(!d.contains(&[0.5, -0.5]));
        assert!(!d.contains(&[0.5, 0.0]));
    }

    #[test]
    fn slit_ball_excludes_slab() {
        let d: Domain<2> = Domain::slit_ball(1.0, 0.05).unwrap();
        assert!(d.contains(&[-0.5, 0.0]));
        assert!(!d.contains(&[0.5, 0.0]));
        assert!(!d.contains(&[0.5, 0.04]));
        assert!(d.contains(&[0.5, 0.2]));
    }

    #[test]
    fn two_balls_disconnected() {
        let d: Domain<2> =
            Domain::two_balls([[-2.0, 0.0], [2.0, 0.0]], [1.0, 1.0]).unwrap();
        assert!(d.contains(&[-2.0, 0.5]));
        assert!(d.contains(&[2.0, 0.5]));
        assert!(!d.contains(&[0.0, 0.0]));
        assert!(Domain::<2>::two_balls([[-0.5, 0.0], [0.5, 0.0]], [1.0, 1.0]).is_err());
    }

    #[test]
    fn all_domains_pass_witness_verification() {
        // Construction runs the rejection-sampling witness check.
        let _: Domain<2> = Domain::unit_ball().unwrap();
        let _: Domain<3> = Domain::unit_ball().unwrap();
        let _: Domain<2> = Domain::cube(1.0).unwrap();
        let _: Domain<3> = Domain::cube(1.0).unwrap();
        let _: Domain<2> = Domain::l_shape(1.0).unwrap();
        let _: Domain<3> = Domain::l_shape(1.0).unwrap();
        let _: Domain<2> = Domain::slit_ball(1.0, 0.05).unwrap();
        let _: Domain<2> = Domain::two_balls([[-2.0, 0.0], [2.0, 0.0]], [1.0, 1.0]).unwrap();
    }

    #[test]
    fn dist_to_boundary_is_consistent_with_membership() {
        let d: Domain<2> = Domain::l_shape(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p = d.sample_interior(&mut rng);
            let clearance = d.dist_to_boundary(&p);
            assert!(clearance > 0.0);
            // A ball of radius `clearance` stays inside.
            for _ in 0..10 {
                let dir = random_unit::<2>(&mut rng);
                let q = add_scaled(&p, clearance * 0.999, &dir);
                assert!(d.contains(&q), "p={p:?} clearance={clearance} q={q:?}");
            }
        }
    }
}
