//! Planar primitives: points, diametral disks, circle intersections and the
//! tolerance-aware predicates every other module builds on.
//!
//! All predicates on a diametral disk `D_ab` measure their tolerance relative
//! to that disk (`tau * |ab|^2` for the dot-product test, `tau * |ab|` for
//! endpoint coincidence), so that drawings whose features span many orders of
//! magnitude keep meaningful answers at every level.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("degenerate circles: the two boundary circles coincide")]
    DegenerateCircles,
}

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at `angle` radians.
    pub fn polar(angle: f64) -> Self {
        Point::new(angle.cos(), angle.sin())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        (self - other).norm_sq()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Counter-clockwise rotation by 90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Returns the unit vector in this direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

fn check_finite(points: &[Point]) -> Result<(), GeomError> {
    match points.iter().find(|p| !p.is_finite()) {
        Some(p) => Err(GeomError::InvalidGeometry(format!("non-finite point {p}"))),
        None => Ok(()),
    }
}

/// Relative tolerance together with the characteristic length of an instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    tau_rel: f64,
    scale: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            tau_rel: Self::DEFAULT_TAU,
            scale: 1.0,
        }
    }
}

impl Tolerance {
    pub const DEFAULT_TAU: f64 = 1e-9;

    pub fn new(tau_rel: f64, scale: f64) -> Result<Self, GeomError> {
        if !(tau_rel.is_finite() && tau_rel > 0.0) {
            return Err(GeomError::InvalidGeometry(format!(
                "tolerance must be positive, got {tau_rel}"
            )));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(GeomError::InvalidGeometry(format!(
                "scale must be positive, got {scale}"
            )));
        }
        Ok(Tolerance { tau_rel, scale })
    }

    /// Default relative tolerance with `scale` set to the larger coordinate
    /// spread of `points` (1.0 when the points do not spread at all).
    pub fn for_points<'a, I>(points: I) -> Self
    where
        I: IntoIterator<Item = &'a Point>,
    {
        let scale = coordinate_spread(points);
        Tolerance {
            tau_rel: Self::DEFAULT_TAU,
            scale: if scale > 0.0 && scale.is_finite() {
                scale
            } else {
                1.0
            },
        }
    }

    pub fn with_tau(self, tau_rel: f64) -> Result<Self, GeomError> {
        Tolerance::new(tau_rel, self.scale)
    }

    pub fn tau(&self) -> f64 {
        self.tau_rel
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Absolute length tolerance at the instance scale.
    pub fn abs(&self) -> f64 {
        self.tau_rel * self.scale
    }
}

/// Largest of the x and y extents of `points`.
pub fn coordinate_spread<'a, I>(points: I) -> f64
where
    I: IntoIterator<Item = &'a Point>,
{
    let mut it = points.into_iter();
    let Some(first) = it.next() else {
        return 0.0;
    };
    let (mut lo, mut hi) = (*first, *first);
    for p in it {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (hi.x - lo.x).max(hi.y - lo.y)
}

/// A circle given by center and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn point_at(&self, angle: f64) -> Point {
        self.center + Point::polar(angle) * self.radius
    }

    pub fn angle_of(&self, p: Point) -> f64 {
        (p - self.center).angle()
    }
}

/// The closed disk whose diameter is the segment `ab`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiametralDisk {
    a: Point,
    b: Point,
}

impl DiametralDisk {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        check_finite(&[a, b])?;
        if a == b {
            return Err(GeomError::InvalidGeometry(format!(
                "diametral disk needs distinct endpoints, got {a} twice"
            )));
        }
        Ok(DiametralDisk { a, b })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn center(&self) -> Point {
        self.a.midpoint(self.b)
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.a.dist(self.b)
    }

    pub fn diameter_sq(&self) -> f64 {
        self.a.dist_sq(self.b)
    }

    pub fn circle(&self) -> Circle {
        Circle {
            center: self.center(),
            radius: self.radius(),
        }
    }

    /// `dot(a - q, b - q)`: negative inside, zero on the circle, positive outside.
    pub fn power(&self, q: Point) -> f64 {
        (self.a - q).dot(self.b - q)
    }

    /// Unchecked form of [`in_blocking_region`].
    pub fn blocks(&self, q: Point, tol: &Tolerance) -> bool {
        blocks(self.a, self.b, q, tol.tau())
    }
}

/// Core membership rule: `q` blocks the pair `(a, b)` when it lies in the
/// closed disk with diameter `ab` and is not (within tolerance) `a` or `b`.
#[inline]
pub(crate) fn blocks(a: Point, b: Point, q: Point, tau: f64) -> bool {
    let l2 = a.dist_sq(b);
    let coincide = tau * tau * l2;
    if a.dist_sq(q) <= coincide || b.dist_sq(q) <= coincide {
        return false;
    }
    (a - q).dot(b - q) <= tau * l2
}

/// Whether `q` lies in `D_ab \ {a, b}`. Boundary points block (closed disk).
pub fn in_blocking_region(d: &DiametralDisk, q: Point, tol: &Tolerance) -> Result<bool, GeomError> {
    check_finite(&[d.a, d.b, q])?;
    Ok(d.blocks(q, tol))
}

/// Intersection points of the two boundary circles.
pub fn circle_circle_intersections(
    d1: &DiametralDisk,
    d2: &DiametralDisk,
    tol: &Tolerance,
) -> Result<Vec<Point>, GeomError> {
    check_finite(&[d1.a, d1.b, d2.a, d2.b])?;
    circle_intersections(&d1.circle(), &d2.circle(), tol.tau())
}

pub(crate) fn circle_intersections(
    c1: &Circle,
    c2: &Circle,
    tau: f64,
) -> Result<Vec<Point>, GeomError> {
    let s = c1.radius.max(c2.radius);
    let delta = c2.center - c1.center;
    let d = delta.norm();
    let eps = tau * s;
    if d <= eps && (c1.radius - c2.radius).abs() <= eps {
        return Err(GeomError::DegenerateCircles);
    }
    if d > c1.radius + c2.radius + eps || d < (c1.radius - c2.radius).abs() - eps || d == 0.0 {
        return Ok(Vec::new());
    }
    // Distance from c1 along the center line to the chord, and half-chord.
    let along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    let h2 = c1.radius * c1.radius - along * along;
    let u = delta * (1.0 / d);
    let foot = c1.center + u * along;
    if h2 <= eps * eps {
        return Ok(vec![foot]);
    }
    let off = u.perp() * h2.sqrt();
    Ok(vec![foot + off, foot - off])
}

/// `cross(b - a, c - a)`; positive when `a, b, c` turn counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Whether segments `ab` and `cd` meet anywhere other than a shared endpoint.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let shared = if a == c || a == d {
        Some((a, b, if a == c { d } else { c }))
    } else if b == c || b == d {
        Some((b, a, if b == c { d } else { c }))
    } else {
        None
    };
    if let Some((s, x, y)) = shared {
        // Segments sharing an endpoint only cross when they overlap.
        return o1 == 0.0 && o2 == 0.0 && (x - s).dot(y - s) > 0.0;
    }
    if (o1 > 0.0 && o2 < 0.0 || o1 < 0.0 && o2 > 0.0)
        && (o3 > 0.0 && o4 < 0.0 || o3 < 0.0 && o4 > 0.0)
    {
        return true;
    }
    let on = |p: Point, q: Point, r: Point, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// A departure from general position, identified by point indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PositionViolation {
    Collinear([usize; 3]),
    Cocircular([usize; 4]),
}

/// Sine of the largest angle of triangle `abc` (0 for degenerate triangles).
fn collinearity_measure(a: Point, b: Point, c: Point) -> f64 {
    let mut sides = [a.dist(b), b.dist(c), c.dist(a)];
    sides.sort_by(f64::total_cmp);
    let denom = sides[0] * sides[1];
    if denom == 0.0 {
        return 0.0;
    }
    orient(a, b, c).abs() / denom
}

/// Distance of `d` from the circle through `a, b, c`, relative to the spread
/// of the four points. Uses the incircle determinant over the product of the
/// support triangle's sides, which stays stable for nearly flat triangles.
fn cocircularity_measure(q: [Point; 4]) -> f64 {
    let [a, b, c, d] = q;
    let rows = [a - d, b - d, c - d];
    let lift = |p: Point| p.norm_sq();
    let det = rows[0].x * (rows[1].y * lift(rows[2]) - lift(rows[1]) * rows[2].y)
        - rows[0].y * (rows[1].x * lift(rows[2]) - lift(rows[1]) * rows[2].x)
        + lift(rows[0]) * (rows[1].x * rows[2].y - rows[1].y * rows[2].x);
    let mut dist = [[0.0f64; 4]; 4];
    let mut spread = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            dist[i][j] = q[i].dist(q[j]);
            dist[j][i] = dist[i][j];
            spread = spread.max(dist[i][j]);
        }
    }
    let support = [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)]
        .iter()
        .map(|&(i, j, k)| dist[i][j] * dist[j][k] * dist[k][i])
        .fold(0.0f64, f64::max);
    if support == 0.0 {
        return 0.0;
    }
    det.abs() / (support * spread)
}

/// Every collinear triple and cocircular quadruple of `points`, within tolerance.
///
/// A triple is collinear when the sine of its largest angle is at most `tau`.
/// A quadruple is cocircular when one point lies within `tau * D` of the
/// circle through the other three, `D` being the quadruple's diameter.
/// Quadruples containing a collinear triple are reported only as collinear.
pub fn general_position_check(points: &[Point], tol: &Tolerance) -> Vec<PositionViolation> {
    let tau = tol.tau();
    let n = points.len();
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let triples: Vec<Vec<[usize; 3]>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    if collinearity_measure(points[i], points[j], points[k]) <= tau {
                        out.push([i, j, k]);
                    }
                }
            }
            out
        })
        .collect();
    let mut collinear = vec![false; n * n * n];
    for &[i, j, k] in triples.iter().flatten() {
        collinear[idx(i, j, k)] = true;
    }
    let collinear = &collinear;
    let quads: Vec<Vec<[usize; 4]>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    if collinear[idx(i, j, k)] {
                        continue;
                    }
                    for l in k + 1..n {
                        if collinear[idx(i, j, l)]
                            || collinear[idx(i, k, l)]
                            || collinear[idx(j, k, l)]
                        {
                            continue;
                        }
                        if cocircularity_measure([points[i], points[j], points[k], points[l]])
                            <= tau
                        {
                            out.push([i, j, k, l]);
                        }
                    }
                }
            }
            out
        })
        .collect();
    triples
        .into_iter()
        .flatten()
        .map(PositionViolation::Collinear)
        .chain(
            quads
                .into_iter()
                .flatten()
                .map(PositionViolation::Cocircular),
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn blocking_region_examples() {
        let d = DiametralDisk::new(p(0.0, 0.0), p(2.0, 0.0)).unwrap();
        let t = tol();
        assert!(in_blocking_region(&d, p(1.0, 0.5), &t).unwrap());
        assert!(!in_blocking_region(&d, p(0.0, 0.0), &t).unwrap());
        assert!(!in_blocking_region(&d, p(2.0, 0.0), &t).unwrap());
        assert!(in_blocking_region(&d, p(1.0, 1.0), &t).unwrap());
        assert!(!in_blocking_region(&d, p(3.0, 0.0), &t).unwrap());
    }

    #[test]
    fn non_finite_inputs_are_rejected() {
        let d = DiametralDisk::new(p(0.0, 0.0), p(2.0, 0.0)).unwrap();
        assert!(matches!(
            in_blocking_region(&d, p(f64::NAN, 0.0), &tol()),
            Err(GeomError::InvalidGeometry(_))
        ));
        assert!(DiametralDisk::new(p(f64::INFINITY, 0.0), p(1.0, 0.0)).is_err());
        assert!(DiametralDisk::new(p(1.0, 1.0), p(1.0, 1.0)).is_err());
        assert!(Tolerance::new(0.0, 1.0).is_err());
        assert!(Tolerance::new(1e-9, -1.0).is_err());
    }

    #[test]
    fn near_endpoint_counts_as_endpoint() {
        let d = DiametralDisk::new(p(0.0, 0.0), p(2.0, 0.0)).unwrap();
        assert!(!d.blocks(p(1e-12, 1e-12), &tol()));
        assert!(d.blocks(p(1e-6, 1e-7), &tol()));
    }

    #[test]
    fn disjoint_circles_do_not_intersect() {
        let d1 = DiametralDisk::new(p(-0.5, 0.0), p(0.5, 0.0)).unwrap();
        let d2 = DiametralDisk::new(p(1.5, 0.0), p(2.5, 0.0)).unwrap();
        assert!(circle_circle_intersections(&d1, &d2, &tol())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn identical_circles_are_degenerate() {
        let d1 = DiametralDisk::new(p(-1.0, 0.0), p(1.0, 0.0)).unwrap();
        let d2 = DiametralDisk::new(p(0.0, -1.0), p(0.0, 1.0)).unwrap();
        assert_eq!(
            circle_circle_intersections(&d1, &d2, &tol()),
            Err(GeomError::DegenerateCircles)
        );
    }

    #[test]
    fn overlapping_circles_meet_twice() {
        let d1 = DiametralDisk::new(p(0.0, 0.0), p(2.0, 0.0)).unwrap();
        let d2 = DiametralDisk::new(p(1.0, 0.0), p(3.0, 0.0)).unwrap();
        let mut pts = circle_circle_intersections(&d1, &d2, &tol()).unwrap();
        pts.sort_by(|a, b| a.y.total_cmp(&b.y));
        assert_eq!(pts.len(), 2);
        // Oracle: radial distance to both centers equals the radius.
        for q in &pts {
            assert!((q.dist(p(1.0, 0.0)) - 1.0).abs() < 1e-9);
            assert!((q.dist(p(2.0, 0.0)) - 1.0).abs() < 1e-9);
            assert!((q.x - 1.5).abs() < 1e-9);
        }
        assert!((pts[1].y - 0.75f64.sqrt()).abs() < 1e-9);
        assert!((pts[0].y + 0.75f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn tangent_and_nested_circles() {
        let d1 = DiametralDisk::new(p(0.0, 0.0), p(2.0, 0.0)).unwrap();
        let d2 = DiametralDisk::new(p(2.0, 0.0), p(4.0, 0.0)).unwrap();
        let pts = circle_circle_intersections(&d1, &d2, &tol()).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].dist(p(2.0, 0.0)) < 1e-9);
        let inner = DiametralDisk::new(p(0.8, 0.0), p(1.2, 0.0)).unwrap();
        assert!(circle_circle_intersections(&d1, &inner, &tol())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn cocircularity_tracks_radial_offset() {
        let on = |deg: f64| Point::polar(deg.to_radians());
        for delta in [1e-3, 1e-5, 1e-7] {
            let m =
                cocircularity_measure([on(10.0), on(100.0), on(200.0), on(300.0) * (1.0 + delta)]);
            assert!(m > 0.1 * delta && m < 10.0 * delta, "{delta}: {m}");
        }
        // Nearly flat support triangles still give a small, finite measure.
        let m = cocircularity_measure([p(0.0, 0.0), p(1.0, 1e-7), p(2.0, 0.0), p(3.0, -1e-7)]);
        assert!(m > 1e-9 && m < 1e-6, "{m}");
    }

    #[test]
    fn general_position_examples() {
        let t = tol();
        assert_eq!(
            general_position_check(&[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)], &t),
            vec![PositionViolation::Collinear([0, 1, 2])]
        );
        assert!(general_position_check(&[p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)], &t).is_empty());
        assert_eq!(
            general_position_check(&[p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0), p(0.0, -1.0)], &t),
            vec![PositionViolation::Cocircular([0, 1, 2, 3])]
        );
    }

    #[test]
    fn segment_crossing() {
        assert!(segments_cross(
            p(0.0, 0.0),
            p(2.0, 2.0),
            p(0.0, 2.0),
            p(2.0, 0.0)
        ));
        assert!(!segments_cross(
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(1.0, 0.0),
            p(1.0, 1.0)
        ));
        assert!(!segments_cross(
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(0.0, 1.0),
            p(1.0, 1.0)
        ));
        assert!(segments_cross(
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(0.0, 0.0),
            p(1.0, 0.0)
        ));
        assert!(segments_cross(
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(1.0, 0.0),
            p(1.0, 1.0)
        ));
    }

    fn coord() -> impl Strategy<Value = f64> {
        -10.0..10.0f64
    }

    fn point() -> impl Strategy<Value = Point> {
        (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn blocking_is_symmetric(a in point(), b in point(), q in point()) {
            prop_assume!(a != b);
            let t = Tolerance::for_points([a, b, q].iter());
            let d1 = DiametralDisk::new(a, b).unwrap();
            let d2 = DiametralDisk::new(b, a).unwrap();
            prop_assert_eq!(d1.blocks(q, &t), d2.blocks(q, &t));
        }

        #[test]
        fn interior_is_stable_toward_center(a in point(), b in point(), q in point(), f in 0.0..1.0f64) {
            prop_assume!(a.dist(b) > 1e-3);
            let t = Tolerance::for_points([a, b, q].iter());
            let d = DiametralDisk::new(a, b).unwrap();
            prop_assume!(d.power(q) < 0.0 && d.blocks(q, &t));
            let c = d.center();
            let step = t.abs() * 0.5 * f;
            if let Some(dir) = (c - q).normalized() {
                let moved = q + dir * step.min(q.dist(c));
                prop_assert!(d.blocks(moved, &t));
            }
        }

        #[test]
        fn intersections_lie_on_both_circles(a in point(), b in point(), c in point(), e in point()) {
            prop_assume!(a.dist(b) > 1e-2 && c.dist(e) > 1e-2);
            let t = Tolerance::for_points([a, b, c, e].iter());
            let d1 = DiametralDisk::new(a, b).unwrap();
            let d2 = DiametralDisk::new(c, e).unwrap();
            if let Ok(pts) = circle_circle_intersections(&d1, &d2, &t) {
                for q in pts {
                    let bound = 10.0 * t.tau() * t.scale();
                    prop_assert!((q.dist(d1.center()) - d1.radius()).abs() <= bound);
                    prop_assert!((q.dist(d2.center()) - d2.radius()).abs() <= bound);
                }
            }
        }
    }
}
