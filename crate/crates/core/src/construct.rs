//! The two construction algorithms for `GG⁻(P, W)`: per-vertex half-plane
//! intersection, and the nearest-witness test at pair midpoints.
//!
//! Both are exact with respect to [`oracle_construct`]: whenever a geometric
//! shortcut cannot decide a pair with a clear margin, the pair is resolved by
//! the direct disk predicate.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rstar::primitives::GeomWithData;
use rstar::RTree;
use thiserror::Error;

use crate::gabriel::{midpoint_clear, oracle_construct, EdgeSet, Instance, WitnessGabrielGraph};
use crate::geom::{blocks, orient, Point, Tolerance};
use crate::sample::random_instance;

/// Half-side of the frame standing in for the unbounded plane, in units of the
/// instance scale (the frame side is 8x the scale).
const FRAME_HALF_SIDE: f64 = 4.0;

/// The open half-plane `{x : dot(x - boundary_point, inward_normal) > 0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    pub boundary_point: Point,
    pub inward_normal: Point,
}

impl HalfPlane {
    /// Half-plane bounded by the line through `q` perpendicular to `pq`,
    /// containing `p`. `None` when `p == q`.
    pub fn facing(p: Point, q: Point) -> Option<Self> {
        (p - q).normalized().map(|n| HalfPlane {
            boundary_point: q,
            inward_normal: n,
        })
    }

    /// Signed distance to the boundary line, positive on the inner side.
    pub fn signed_distance(&self, x: Point) -> f64 {
        (x - self.boundary_point).dot(self.inward_normal)
    }

    fn intersect_segment(&self, a: Point, b: Point) -> Point {
        let (fa, fb) = (self.signed_distance(a), self.signed_distance(b));
        let t = fa / (fa - fb);
        a + (b - a) * t
    }
}

/// Which constraint bounds an edge of a [`ConvexRegion`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSource {
    /// Index into the witness list the region was built from.
    Witness(usize),
    /// Artificial frame edge.
    Frame,
}

/// Convex polygon `I_p`, counter-clockwise; edge `i` runs from `vertices[i]`
/// to `vertices[i + 1]` and lies on `planes[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexRegion {
    vertices: Vec<Point>,
    planes: Vec<HalfPlane>,
    sources: Vec<EdgeSource>,
}

/// The feasible region of a vertex: the points `r` for which no considered
/// witness blocks `pr`.
#[derive(Clone, Debug, PartialEq)]
pub enum FeasibleRegion {
    Empty,
    Polygon(ConvexRegion),
}

/// Outcome of a membership query against a region with a tolerance band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Within the band of some constraint, or outside the frame.
    Uncertain,
}

impl ConvexRegion {
    fn frame(center: Point, half: f64) -> Self {
        let c = [
            Point::new(center.x - half, center.y - half),
            Point::new(center.x + half, center.y - half),
            Point::new(center.x + half, center.y + half),
            Point::new(center.x - half, center.y + half),
        ];
        let planes = (0..4)
            .map(|i| {
                let (a, b) = (c[i], c[(i + 1) % 4]);
                HalfPlane {
                    boundary_point: a,
                    inward_normal: (b - a).perp().normalized().expect("non-degenerate frame"),
                }
            })
            .collect();
        ConvexRegion {
            vertices: c.to_vec(),
            planes,
            sources: vec![EdgeSource::Frame; 4],
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn sources(&self) -> &[EdgeSource] {
        &self.sources
    }

    /// True when no witness contributes an edge (the region is the whole plane
    /// as far as the frame can tell).
    pub fn is_whole_plane(&self) -> bool {
        self.sources.iter().all(|s| *s == EdgeSource::Frame)
    }

    /// Clips by `h`, returning `None` when nothing of positive area survives.
    fn clip(self, h: HalfPlane, source: EdgeSource) -> Option<Self> {
        let k = self.vertices.len();
        let mut out: Vec<(Point, HalfPlane, EdgeSource)> = Vec::with_capacity(k + 1);
        for i in 0..k {
            let (cur, nxt) = (self.vertices[i], self.vertices[(i + 1) % k]);
            let (fc, fn_) = (h.signed_distance(cur), h.signed_distance(nxt));
            if fc >= 0.0 {
                out.push((cur, self.planes[i], self.sources[i]));
                if fn_ < 0.0 {
                    out.push((h.intersect_segment(cur, nxt), h, source));
                }
            } else if fn_ >= 0.0 {
                out.push((
                    h.intersect_segment(cur, nxt),
                    self.planes[i],
                    self.sources[i],
                ));
            }
        }
        // Collapse repeated points; the later entry carries the outgoing edge.
        let mut dedup: Vec<(Point, HalfPlane, EdgeSource)> = Vec::with_capacity(out.len());
        for item in out {
            match dedup.last_mut() {
                Some(last) if last.0 == item.0 => *last = item,
                _ => dedup.push(item),
            }
        }
        while dedup.len() > 1 && dedup[0].0 == dedup[dedup.len() - 1].0 {
            dedup.remove(0);
        }
        if dedup.len() < 3 {
            return None;
        }
        let region = ConvexRegion {
            vertices: dedup.iter().map(|t| t.0).collect(),
            planes: dedup.iter().map(|t| t.1).collect(),
            sources: dedup.iter().map(|t| t.2).collect(),
        };
        (region.twice_area() > 0.0).then_some(region)
    }

    fn twice_area(&self) -> f64 {
        let v = &self.vertices;
        let k = v.len();
        (0..k).map(|i| v[i].cross(v[(i + 1) % k])).sum()
    }

    /// Exact (tolerance-free) interior test against the region's own edges.
    pub fn contains(&self, x: Point) -> bool {
        self.planes.iter().all(|h| h.signed_distance(x) > 0.0)
    }

    /// Locates `x` by binary search over the fan from `vertices[0]`, then
    /// checks its margin against the edges and fan diagonals of that sector.
    /// `band` is a distance: anything closer than `band` to a bounding line is
    /// reported as [`Membership::Uncertain`].
    pub fn classify(&self, x: Point, band: f64) -> Membership {
        let v = &self.vertices;
        let k = v.len();
        let v0 = v[0];
        let outside_via = |edge: usize| -> Membership {
            match self.sources[edge] {
                EdgeSource::Witness(_) if self.planes[edge].signed_distance(x) < -band => {
                    Membership::Outside
                }
                _ => Membership::Uncertain,
            }
        };
        if orient(v0, v[1], x) < 0.0 {
            return outside_via(0);
        }
        if orient(v0, v[k - 1], x) > 0.0 {
            return outside_via(k - 1);
        }
        // Largest i in [1, k-2] with x left of (or on) ray v0 -> v[i].
        let (mut lo, mut hi) = (1usize, k - 2);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if orient(v0, v[mid], x) >= 0.0 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let i = lo;
        let outer = self.planes[i].signed_distance(x);
        if outer < -band {
            return outside_via(i);
        }
        if outer <= band {
            return Membership::Uncertain;
        }
        let margin = segment_distance(x, v0, v[i]).min(segment_distance(x, v0, v[i + 1]));
        if margin > band {
            Membership::Inside
        } else {
            Membership::Uncertain
        }
    }
}

fn segment_distance(x: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return x.dist(a);
    }
    let t = ((x - a).dot(ab) / len2).clamp(0.0, 1.0);
    x.dist(a + ab * t)
}

impl FeasibleRegion {
    pub fn is_empty(&self) -> bool {
        matches!(self, FeasibleRegion::Empty)
    }

    pub fn classify(&self, x: Point, band: f64) -> Membership {
        match self {
            FeasibleRegion::Empty => Membership::Uncertain,
            FeasibleRegion::Polygon(poly) => poly.classify(x, band),
        }
    }
}

fn build_region(
    p: Point,
    witnesses: &[Point],
    drop_radius: f64,
    frame_half_side: f64,
) -> FeasibleRegion {
    let mut region = ConvexRegion::frame(p, frame_half_side);
    for (idx, &q) in witnesses.iter().enumerate() {
        if p.dist(q) <= drop_radius {
            continue;
        }
        let Some(h) = HalfPlane::facing(p, q) else {
            continue;
        };
        match region.clip(h, EdgeSource::Witness(idx)) {
            Some(r) => region = r,
            None => return FeasibleRegion::Empty,
        }
    }
    FeasibleRegion::Polygon(region)
}

/// Intersection `I_p` of the half-planes bounded by the lines through each
/// witness `q` perpendicular to `pq`, on the side of `p`. Witnesses within
/// `tol.abs()` of `p` are treated as `p` itself and dropped.
pub fn feasible_region(p: Point, witnesses: &[Point], tol: &Tolerance) -> FeasibleRegion {
    build_region(p, witnesses, tol.abs(), FRAME_HALF_SIDE * tol.scale())
}

fn direct_clear(p: Point, r: Point, witnesses: &[Point], tau: f64) -> bool {
    !witnesses.iter().any(|&q| blocks(p, r, q, tau))
}

/// First algorithm: for every vertex build `I_p`, then test each other vertex
/// by convex-region membership.
pub fn construct_halfplane(inst: &Instance, tol: &Tolerance) -> WitnessGabrielGraph {
    let p = &inst.vertices;
    let w = &inst.witnesses;
    let n = p.len();
    let tau = tol.tau();
    let frame = FRAME_HALF_SIDE * tol.scale();
    let pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let nearest_vertex = (0..n)
                .filter(|&j| j != i)
                .map(|j| p[i].dist(p[j]))
                .fold(f64::INFINITY, f64::min);
            // Witnesses this close to p_i coincide with it for every pair.
            let drop_radius = if nearest_vertex.is_finite() {
                tau * nearest_vertex
            } else {
                0.0
            };
            let region = build_region(p[i], w, drop_radius, frame);
            let closest_witness = w
                .iter()
                .map(|&q| p[i].dist(q))
                .filter(|&d| d > drop_radius)
                .fold(f64::INFINITY, f64::min);
            (i + 1..n)
                .filter(move |&j| {
                    let l2 = p[i].dist_sq(p[j]);
                    let band = 4.0 * tau * l2 / closest_witness;
                    match region.classify(p[j], band) {
                        Membership::Inside => true,
                        Membership::Outside => false,
                        Membership::Uncertain => direct_clear(p[i], p[j], w, tau),
                    }
                })
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    WitnessGabrielGraph {
        vertices: p.clone(),
        edges: EdgeSet::from_pairs(n, pairs).expect("pairs are canonical and in range"),
    }
}

type IndexedPoint = GeomWithData<[f64; 2], usize>;

/// Immutable nearest-neighbor index over the witnesses.
pub struct NearestWitnessIndex {
    tree: RTree<IndexedPoint>,
    points: Vec<Point>,
}

impl NearestWitnessIndex {
    pub fn new(witnesses: &[Point]) -> Self {
        let items = witnesses
            .iter()
            .enumerate()
            .map(|(i, q)| GeomWithData::new([q.x, q.y], i))
            .collect();
        NearestWitnessIndex {
            tree: RTree::bulk_load(items),
            points: witnesses.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nearest witness and its distance; ties go to the lowest index.
    pub fn nearest(&self, x: Point) -> Option<(usize, f64)> {
        self.nearest_where(x, |_| true)
    }

    /// Nearest witness accepted by `keep`; ties go to the lowest index.
    pub fn nearest_where<F>(&self, x: Point, keep: F) -> Option<(usize, f64)>
    where
        F: Fn(Point) -> bool,
    {
        let mut best: Option<(usize, f64)> = None;
        for (item, d2) in self.tree.nearest_neighbor_iter_with_distance_2(&[x.x, x.y]) {
            if let Some((_, bd2)) = best {
                if d2 > bd2 {
                    break;
                }
            }
            if !keep(self.points[item.data]) {
                continue;
            }
            best = match best {
                Some((bi, bd2)) if d2 == bd2 && bi < item.data => Some((bi, bd2)),
                _ => Some((item.data, d2)),
            };
        }
        best.map(|(i, d2)| (i, d2.sqrt()))
    }
}

/// Second algorithm: query the nearest witness at each pair midpoint and
/// apply the midpoint edge test.
pub fn construct_voronoi(inst: &Instance, tol: &Tolerance) -> WitnessGabrielGraph {
    let p = &inst.vertices;
    let n = p.len();
    let tau = tol.tau();
    let index = NearestWitnessIndex::new(&inst.witnesses);
    let pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let index = &index;
            (i + 1..n)
                .filter(move |&j| {
                    let (a, b) = (p[i], p[j]);
                    let coincide = tau * tau * a.dist_sq(b);
                    let nearest = index.nearest_where(a.midpoint(b), |q| {
                        a.dist_sq(q) > coincide && b.dist_sq(q) > coincide
                    });
                    match nearest {
                        None => true,
                        Some((_, d)) => midpoint_clear(a, b, d, tau),
                    }
                })
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    WitnessGabrielGraph {
        vertices: p.clone(),
        edges: EdgeSet::from_pairs(n, pairs).expect("pairs are canonical and in range"),
    }
}

/// Construction route selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Brute,
    HalfPlane,
    Voronoi,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Brute, Algorithm::HalfPlane, Algorithm::Voronoi];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::HalfPlane => "halfplane",
            Algorithm::Voronoi => "voronoi",
        }
    }

    pub fn run(self, inst: &Instance, tol: &Tolerance) -> WitnessGabrielGraph {
        match self {
            Algorithm::Brute => oracle_construct(inst, tol),
            Algorithm::HalfPlane => construct_halfplane(inst, tol),
            Algorithm::Voronoi => construct_voronoi(inst, tol),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!("unknown algorithm `{s}` (expected brute, halfplane or voronoi)")
            })
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("size ({0}, {1}) is invalid: vertex count must be positive")]
    InvalidSize(usize, usize),
    #[error("{first} and {second} disagree on instance {instance}")]
    Disagreement {
        first: Algorithm,
        second: Algorithm,
        /// The offending instance, serialized as JSON.
        instance: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub w: usize,
    pub trial: usize,
    pub milliseconds: f64,
    pub edges: usize,
}

/// Times the three construction routes on seeded random instances and checks
/// that they agree on every one.
pub fn bench_constructions(
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, BenchError> {
    if let Some(&(n, w)) = sizes.iter().find(|s| s.0 == 0) {
        return Err(BenchError::InvalidSize(n, w));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(sizes.len() * trials * 3);
    for &(n, w) in sizes {
        for trial in 0..trials {
            let inst = random_instance(&mut rng, n, w);
            let tol = inst.tolerance();
            let mut reference: Option<(Algorithm, EdgeSet)> = None;
            for algorithm in Algorithm::ALL {
                let start = Instant::now();
                let g = algorithm.run(&inst, &tol);
                let milliseconds = start.elapsed().as_secs_f64() * 1e3;
                match &reference {
                    None => reference = Some((algorithm, g.edges.clone())),
                    Some((first, edges)) if *edges != g.edges => {
                        return Err(BenchError::Disagreement {
                            first: *first,
                            second: algorithm,
                            instance: serde_json::to_string(&inst)
                                .unwrap_or_else(|e| format!("<unserializable: {e}>")),
                        });
                    }
                    Some(_) => {}
                }
                rows.push(BenchRow {
                    algorithm,
                    n,
                    w,
                    trial,
                    milliseconds,
                    edges: g.edges.len(),
                });
            }
        }
    }
    Ok(rows)
}

/// Median wall-clock time per algorithm and size, in first-seen order.
pub fn bench_medians(rows: &[BenchRow]) -> Vec<(Algorithm, usize, usize, f64)> {
    let mut keys: Vec<(Algorithm, usize, usize)> = Vec::new();
    for r in rows {
        let key = (r.algorithm, r.n, r.w);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(a, n, w)| {
            let mut times: Vec<f64> = rows
                .iter()
                .filter(|r| r.algorithm == a && r.n == n && r.w == w)
                .map(|r| r.milliseconds)
                .collect();
            times.sort_by(f64::total_cmp);
            let m = times.len();
            let median = if m % 2 == 1 {
                times[m / 2]
            } else {
                0.5 * (times[m / 2 - 1] + times[m / 2])
            };
            (a, n, w, median)
        })
        .collect()
}
