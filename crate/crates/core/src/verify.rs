//! Realizability of an embedded straight-line graph as `GG⁻(V, W)`.
//!
//! A non-edge `rs` can be killed exactly when its diametral disk `D_rs` is not
//! covered by the union `U` of the edge disks: any point of `D_rs \ U` is a
//! witness for it that spares every edge. The search for such a point tries a
//! fixed candidate list built from the arrangement of `∂U` and the target
//! circle, then a dense grid, before declaring the disk covered.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gabriel::{
    canonical_pair, oracle_construct, EdgeSet, GraphError, Instance, WitnessGabrielGraph,
};
use crate::geom::{
    circle_intersections, general_position_check, orient, Circle, DiametralDisk, GeomError, Point,
    Tolerance,
};

/// Vertex count above which the quartic general-position scan is skipped.
const GENERAL_POSITION_SCAN_LIMIT: usize = 120;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertices(usize, usize),
    #[error("target edge count {target} exceeds the {max} available pairs")]
    InvalidTarget { target: usize, max: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Tuning knobs for the free-point search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    /// Candidate points are moved off circles by `nudge_factor * tau * d`,
    /// where `d` is the largest diameter among the circles involved.
    pub nudge_factor: f64,
    /// Side of the fallback sampling grid over the target's bounding box.
    pub grid_resolution: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nudge_factor: 10.0,
            grid_resolution: 200,
        }
    }
}

/// A straight-line drawing: vertex positions and the required edge set.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedGraph {
    pub vertices: Vec<Point>,
    pub edges: EdgeSet,
}

impl EmbeddedGraph {
    pub fn new(vertices: Vec<Point>, edges: EdgeSet) -> Result<Self, VerifyError> {
        if edges.vertex_count() != vertices.len() {
            return Err(
                GraphError::VertexCountMismatch(vertices.len(), edges.vertex_count()).into(),
            );
        }
        if !vertices.iter().all(Point::is_finite) {
            return Err(GraphError::NonFinite("vertices").into());
        }
        Ok(EmbeddedGraph { vertices, edges })
    }

    fn check_distinct(&self, tol: &Tolerance) -> Result<(), VerifyError> {
        let eps2 = tol.abs() * tol.abs();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if self.vertices[i].dist_sq(self.vertices[j]) <= eps2 {
                    return Err(VerifyError::DuplicateVertices(i, j));
                }
            }
        }
        Ok(())
    }
}

/// A maximal piece of `∂U` on one circle: the arc from angle `start`
/// counter-clockwise through `sweep` radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryArc {
    pub disk: usize,
    pub start: f64,
    pub sweep: f64,
    /// Disks whose circles cut this one at the arc's two ends (`None` for a
    /// full circle).
    pub start_neighbor: Option<usize>,
    pub end_neighbor: Option<usize>,
}

impl BoundaryArc {
    pub fn point_at_fraction(&self, circle: &Circle, t: f64) -> Point {
        circle.point_at(self.start + t * self.sweep)
    }
}

/// Union of diametral disks with the arcs of its boundary.
#[derive(Clone, Debug)]
pub struct DiskUnion {
    pub disks: Vec<DiametralDisk>,
    pub boundary_arcs: Vec<BoundaryArc>,
    circles: Vec<Circle>,
}

impl DiskUnion {
    pub fn circle(&self, disk: usize) -> Circle {
        self.circles[disk]
    }

    /// Whether `q` is blocked by (lies in, off the endpoints of) any disk.
    pub fn covers(&self, q: Point, tol: &Tolerance) -> bool {
        self.disks.iter().any(|d| d.blocks(q, tol))
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }
}

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn strictly_inside(d: &DiametralDisk, q: Point, tau: f64) -> bool {
    d.power(q) < -tau * d.diameter_sq()
}

/// Splits every circle at its crossings with the others and keeps the pieces
/// whose midpoints lie in no other disk's interior.
pub fn union_boundary_arcs(
    disks: &[DiametralDisk],
    tol: &Tolerance,
) -> Result<DiskUnion, VerifyError> {
    let tau = tol.tau();
    let circles: Vec<Circle> = disks.iter().map(DiametralDisk::circle).collect();
    let covered_elsewhere = |i: usize, q: Point| {
        disks
            .iter()
            .enumerate()
            .any(|(j, d)| j != i && strictly_inside(d, q, tau))
    };
    let mut arcs = Vec::new();
    for (i, ci) in circles.iter().enumerate() {
        let mut cuts: Vec<(f64, usize)> = Vec::new();
        for (j, cj) in circles.iter().enumerate() {
            if j == i {
                continue;
            }
            for q in circle_intersections(ci, cj, tau)? {
                cuts.push((normalize_angle(ci.angle_of(q)), j));
            }
        }
        if cuts.is_empty() {
            if !covered_elsewhere(i, ci.point_at(0.0)) {
                arcs.push(BoundaryArc {
                    disk: i,
                    start: 0.0,
                    sweep: TAU,
                    start_neighbor: None,
                    end_neighbor: None,
                });
            }
            continue;
        }
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let m = cuts.len();
        for k in 0..m {
            let (start, sn) = cuts[k];
            let (mut end, en) = cuts[(k + 1) % m];
            if k + 1 == m {
                end += TAU;
            }
            let sweep = end - start;
            if sweep <= 0.0 {
                continue;
            }
            if !covered_elsewhere(i, ci.point_at(start + 0.5 * sweep)) {
                arcs.push(BoundaryArc {
                    disk: i,
                    start,
                    sweep,
                    start_neighbor: Some(sn),
                    end_neighbor: Some(en),
                });
            }
        }
    }
    Ok(DiskUnion {
        disks: disks.to_vec(),
        boundary_arcs: arcs,
        circles,
    })
}

/// Why a target disk was declared covered.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverEvidence {
    /// Arrangement candidates tested before the grid fallback.
    pub candidates_tried: usize,
    /// Side of the sampling grid that found no free point (0 when the target
    /// coincides with a union disk and no search was needed).
    pub grid_resolution: usize,
    /// Grid samples that fell inside the target.
    pub grid_points_in_target: usize,
    /// Union disks whose circles reach the target.
    pub overlapping_edges: usize,
    /// Set when the target is itself one of the union disks.
    pub identical_to_union_disk: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FreePoint {
    Found(Point),
    Covered(CoverEvidence),
}

/// Allocation-free scratch view of the union disks relevant to one target.
struct TargetSearch<'a> {
    target: DiametralDisk,
    tcircle: Circle,
    union: &'a DiskUnion,
    relevant: Vec<usize>,
    tol: Tolerance,
    config: VerifyConfig,
    tried: usize,
}

impl TargetSearch<'_> {
    fn is_free(&self, q: Point) -> bool {
        self.target.blocks(q, &self.tol)
            && !self
                .relevant
                .iter()
                .any(|&i| self.union.disks[i].blocks(q, &self.tol))
    }

    fn nudge(&self, diameters: &[f64]) -> f64 {
        let d = diameters
            .iter()
            .copied()
            .fold(2.0 * self.tcircle.radius, f64::max);
        self.config.nudge_factor * self.tol.tau() * d
    }

    fn try_point(&mut self, q: Point) -> Option<Point> {
        self.tried += 1;
        self.is_free(q).then_some(q)
    }

    fn try_nudged(&mut self, base: Point, normals: &[Point], delta: f64) -> Option<Point> {
        match normals {
            [n] => {
                for s in [1.0, -1.0] {
                    if let Some(q) = self.try_point(base + *n * (s * delta)) {
                        return Some(q);
                    }
                }
            }
            [n1, n2] => {
                for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let dir = (*n1 * s1 + *n2 * s2).normalized().unwrap_or(*n1 * s1);
                    if let Some(q) = self.try_point(base + dir * delta) {
                        return Some(q);
                    }
                }
            }
            _ => {}
        }
        None
    }

    fn outward(circle: &Circle, q: Point) -> Point {
        (q - circle.center)
            .normalized()
            .unwrap_or(Point::new(1.0, 0.0))
    }

    fn run(&mut self) -> Result<FreePoint, VerifyError> {
        let tau = self.tol.tau();
        if let Some(q) = self.try_point(self.tcircle.center) {
            return Ok(FreePoint::Found(q));
        }
        let tcircle = self.tcircle;
        let tdiam = 2.0 * tcircle.radius;

        // Arcs of the target circle between its crossings with union circles.
        let mut cuts: Vec<(f64, usize, Point)> = Vec::new();
        for &i in &self.relevant {
            for q in circle_intersections(&tcircle, &self.union.circles[i], tau)? {
                cuts.push((normalize_angle(tcircle.angle_of(q)), i, q));
            }
        }
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let delta_t = self.nudge(&[]);
        if cuts.is_empty() {
            for k in 0..8 {
                let q = tcircle.point_at(k as f64 * TAU / 8.0);
                let n = Self::outward(&tcircle, q);
                if let Some(f) = self.try_nudged(q, &[n], delta_t) {
                    return Ok(FreePoint::Found(f));
                }
            }
        }
        for k in 0..cuts.len() {
            let start = cuts[k].0;
            let mut end = cuts[(k + 1) % cuts.len()].0;
            if k + 1 == cuts.len() {
                end += TAU;
            }
            let (a, b) = (cuts[k].1, cuts[(k + 1) % cuts.len()].1);
            let q = tcircle.point_at(0.5 * (start + end));
            let n = Self::outward(&tcircle, q);
            let delta = self.nudge(&[
                self.union.disks[a].radius() * 2.0,
                self.union.disks[b].radius() * 2.0,
            ]);
            if let Some(f) = self.try_nudged(q, &[n], delta) {
                return Ok(FreePoint::Found(f));
            }
        }

        // Boundary arcs of the union, split where they cross the target circle.
        let arcs: Vec<BoundaryArc> = self
            .union
            .boundary_arcs
            .iter()
            .filter(|a| self.relevant.contains(&a.disk))
            .copied()
            .collect();
        for arc in &arcs {
            let c = self.union.circles[arc.disk];
            let mut splits = vec![0.0, 1.0];
            for q in circle_intersections(&c, &tcircle, tau)? {
                let rel = normalize_angle(c.angle_of(q) - arc.start);
                if rel > 0.0 && rel < arc.sweep {
                    splits.push(rel / arc.sweep);
                }
            }
            splits.sort_by(f64::total_cmp);
            let delta = self.nudge(&[2.0 * c.radius]);
            for w in splits.windows(2) {
                let q = arc.point_at_fraction(&c, 0.5 * (w[0] + w[1]));
                if self.target.power(q) > tau * tdiam * tdiam {
                    continue;
                }
                let n = Self::outward(&c, q);
                if let Some(f) = self.try_nudged(q, &[n], delta) {
                    return Ok(FreePoint::Found(f));
                }
            }
        }

        // Crossing points: target circle with union circles, then the
        // vertices of the union boundary that fall inside the target.
        for &(_, i, q) in &cuts {
            let c = self.union.circles[i];
            let normals = [Self::outward(&tcircle, q), Self::outward(&c, q)];
            let delta = self.nudge(&[2.0 * c.radius]);
            if let Some(f) = self.try_nudged(q, &normals, delta) {
                return Ok(FreePoint::Found(f));
            }
        }
        for arc in &arcs {
            let (Some(j), c) = (arc.start_neighbor, self.union.circles[arc.disk]) else {
                continue;
            };
            let q = c.point_at(arc.start);
            if self.target.power(q) > tau * tdiam * tdiam {
                continue;
            }
            let cj = self.union.circles[j];
            let normals = [Self::outward(&c, q), Self::outward(&cj, q)];
            let delta = self.nudge(&[2.0 * c.radius, 2.0 * cj.radius]);
            if let Some(f) = self.try_nudged(q, &normals, delta) {
                return Ok(FreePoint::Found(f));
            }
        }

        // Dense grid over the target's bounding box.
        let g = self.config.grid_resolution.max(1);
        let (cx, cy, r) = (tcircle.center.x, tcircle.center.y, tcircle.radius);
        let mut in_target = 0;
        for ix in 0..g {
            for iy in 0..g {
                let q = Point::new(
                    cx - r + 2.0 * r * (ix as f64 + 0.5) / g as f64,
                    cy - r + 2.0 * r * (iy as f64 + 0.5) / g as f64,
                );
                if !self.target.blocks(q, &self.tol) {
                    continue;
                }
                in_target += 1;
                if self.is_free(q) {
                    return Ok(FreePoint::Found(q));
                }
            }
        }
        Ok(FreePoint::Covered(CoverEvidence {
            candidates_tried: self.tried,
            grid_resolution: g,
            grid_points_in_target: in_target,
            overlapping_edges: self.relevant.len(),
            identical_to_union_disk: false,
        }))
    }
}

fn same_circle(a: &Circle, b: &Circle, tau: f64) -> bool {
    let s = a.radius.max(b.radius);
    a.center.dist(b.center) <= tau * s && (a.radius - b.radius).abs() <= tau * s
}

/// Searches for a point strictly inside `target` (off its endpoints) that no
/// union disk blocks.
pub fn find_free_point(
    target: &DiametralDisk,
    union: &DiskUnion,
    tol: &Tolerance,
) -> Result<FreePoint, VerifyError> {
    find_free_point_with(target, union, tol, &VerifyConfig::default())
}

pub fn find_free_point_with(
    target: &DiametralDisk,
    union: &DiskUnion,
    tol: &Tolerance,
    config: &VerifyConfig,
) -> Result<FreePoint, VerifyError> {
    let tau = tol.tau();
    let tcircle = target.circle();
    let mut relevant = Vec::new();
    for (i, c) in union.circles.iter().enumerate() {
        if same_circle(c, &tcircle, tau) {
            return Ok(FreePoint::Covered(CoverEvidence {
                candidates_tried: 0,
                grid_resolution: 0,
                grid_points_in_target: 0,
                overlapping_edges: 1,
                identical_to_union_disk: true,
            }));
        }
        if c.center.dist(tcircle.center) < c.radius + tcircle.radius {
            relevant.push(i);
        }
    }
    TargetSearch {
        target: *target,
        tcircle,
        union,
        relevant,
        tol: *tol,
        config: *config,
        tried: 0,
    }
    .run()
}

/// One witness per non-edge, each verified to spare every edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessCertificate {
    pub witnesses: Vec<Point>,
    /// Maps each non-edge to the index of the witness that removes it.
    pub per_nonedge: BTreeMap<(usize, usize), usize>,
}

/// A non-edge whose disk is covered by the union of the edge disks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RejectionReport {
    pub nonedge: (usize, usize),
    pub evidence: CoverEvidence,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Accepted(WitnessCertificate),
    Rejected(RejectionReport),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }
}

/// Edge disks with coincident circles collapsed to the first occurrence.
fn edge_disks(g: &EmbeddedGraph, tol: &Tolerance) -> Result<Vec<DiametralDisk>, VerifyError> {
    let mut disks: Vec<DiametralDisk> = Vec::with_capacity(g.edges.len());
    for (i, j) in g.edges.iter() {
        let d = DiametralDisk::new(g.vertices[i], g.vertices[j])?;
        if !disks
            .iter()
            .any(|e| same_circle(&e.circle(), &d.circle(), tol.tau()))
        {
            disks.push(d);
        }
    }
    Ok(disks)
}

/// Decides whether the drawing is `GG⁻(V, W)` for some `W`, producing `W` on success.
pub fn verify_drawing(g: &EmbeddedGraph, tol: &Tolerance) -> Result<Verdict, VerifyError> {
    verify_drawing_with(g, tol, &VerifyConfig::default())
}

pub fn verify_drawing_with(
    g: &EmbeddedGraph,
    tol: &Tolerance,
    config: &VerifyConfig,
) -> Result<Verdict, VerifyError> {
    g.check_distinct(tol)?;
    if g.vertices.len() <= GENERAL_POSITION_SCAN_LIMIT {
        let violations = general_position_check(&g.vertices, tol);
        if !violations.is_empty() {
            log::warn!(
                "drawing is not in general position ({} violations, first {:?})",
                violations.len(),
                violations[0]
            );
        }
    }
    let union = union_boundary_arcs(&edge_disks(g, tol)?, tol)?;
    let non_edges: Vec<(usize, usize)> = g.edges.non_edges().collect();
    let results: Vec<Result<FreePoint, VerifyError>> = non_edges
        .par_iter()
        .map(|&(r, s)| {
            let target = DiametralDisk::new(g.vertices[r], g.vertices[s])?;
            find_free_point_with(&target, &union, tol, config)
        })
        .collect();
    let mut witnesses = Vec::with_capacity(non_edges.len());
    let mut per_nonedge = BTreeMap::new();
    for (&pair, result) in non_edges.iter().zip(results) {
        match result? {
            FreePoint::Found(q) => {
                per_nonedge.insert(pair, witnesses.len());
                witnesses.push(q);
            }
            FreePoint::Covered(evidence) => {
                return Ok(Verdict::Rejected(RejectionReport {
                    nonedge: pair,
                    evidence,
                }));
            }
        }
    }
    let inst = Instance {
        vertices: g.vertices.clone(),
        witnesses: witnesses.clone(),
        label: None,
    };
    let check = oracle_construct(&inst, tol);
    if check.edges != g.edges {
        let diff: Vec<_> = check.edges.symmetric_difference(&g.edges).take(5).collect();
        return Err(VerifyError::Internal(format!(
            "certificate fails the oracle self-check; differing pairs {diff:?}"
        )));
    }
    Ok(Verdict::Accepted(WitnessCertificate {
        witnesses,
        per_nonedge,
    }))
}

/// A certified violation of the wedge condition: `inside` lies in triangle
/// `(a, apex, c)` spanned by edges `a-apex` and `apex-c`, but is not adjacent to `apex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeViolation {
    pub apex: usize,
    pub a: usize,
    pub c: usize,
    pub inside: usize,
}

fn strictly_in_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    let (o1, o2, o3) = (orient(a, b, p), orient(b, c, p), orient(c, a, p));
    (o1 > 0.0 && o2 > 0.0 && o3 > 0.0) || (o1 < 0.0 && o2 < 0.0 && o3 < 0.0)
}

/// Fast necessary-condition filter: for incident edges `ab`, `bc`, every
/// vertex inside triangle `abc` must be adjacent to `b`. Sound, not complete.
pub fn quick_reject(g: &EmbeddedGraph) -> Option<WedgeViolation> {
    let adj = g.edges.adjacency();
    let v = &g.vertices;
    for b in 0..v.len() {
        let nbrs = &adj[b];
        for (x, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[x + 1..] {
                for p in 0..v.len() {
                    if p == a || p == b || p == c {
                        continue;
                    }
                    if strictly_in_triangle(v[a], v[b], v[c], v[p]) && !g.edges.contains(p, b) {
                        return Some(WedgeViolation {
                            apex: b,
                            a,
                            c,
                            inside: p,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Removes edges of `K_n` one at a time by placing a witness just inside a
/// boundary arc of the union of the remaining edge disks, until exactly
/// `target_count` edges remain.
pub fn reduce_edge_count(
    vertices: &[Point],
    target_count: usize,
    tol: &Tolerance,
) -> Result<(Vec<Point>, WitnessGabrielGraph), VerifyError> {
    reduce_edge_count_with(vertices, target_count, tol, &VerifyConfig::default())
}

pub fn reduce_edge_count_with(
    vertices: &[Point],
    target_count: usize,
    tol: &Tolerance,
    config: &VerifyConfig,
) -> Result<(Vec<Point>, WitnessGabrielGraph), VerifyError> {
    let n = vertices.len();
    let max = n * n.saturating_sub(1) / 2;
    if target_count > max {
        return Err(VerifyError::InvalidTarget {
            target: target_count,
            max,
        });
    }
    let base = EmbeddedGraph::new(vertices.to_vec(), EdgeSet::complete(n))?;
    base.check_distinct(tol)?;
    let tau = tol.tau();
    let mut inst = Instance {
        vertices: vertices.to_vec(),
        witnesses: Vec::new(),
        label: None,
    };
    let mut graph = oracle_construct(&inst, tol);
    while graph.edges.len() > target_count {
        let edges: Vec<(usize, usize)> = graph.edges.iter().collect();
        let disks: Vec<DiametralDisk> = edges
            .iter()
            .map(|&(i, j)| DiametralDisk::new(vertices[i], vertices[j]))
            .collect::<Result<_, _>>()?;
        let union = union_boundary_arcs(&disks, tol)?;
        let mut arcs = union.boundary_arcs.clone();
        arcs.sort_by(|a, b| a.disk.cmp(&b.disk).then(b.sweep.total_cmp(&a.sweep)));
        let mut placed = None;
        for arc in &arcs {
            let c = union.circle(arc.disk);
            let on_arc = arc.point_at_fraction(&c, 0.5);
            let inward = (c.center - on_arc)
                .normalized()
                .unwrap_or(Point::new(1.0, 0.0));
            let q = on_arc + inward * (config.nudge_factor * tau * 2.0 * c.radius);
            let kills: Vec<usize> = disks
                .iter()
                .enumerate()
                .filter(|(_, e)| e.blocks(q, tol))
                .map(|(k, _)| k)
                .collect();
            if kills == [arc.disk] {
                placed = Some((q, edges[arc.disk]));
                break;
            }
        }
        let Some((q, removed)) = placed else {
            return Err(VerifyError::Internal(format!(
                "no boundary arc removes exactly one edge ({} edges left)",
                graph.edges.len()
            )));
        };
        inst.witnesses.push(q);
        let next = oracle_construct(&inst, tol);
        let mut expected = graph.edges.clone();
        expected.remove(removed.0, removed.1);
        if next.edges != expected {
            return Err(VerifyError::Internal(format!(
                "witness {q} was meant to remove only {:?}",
                canonical_pair(removed.0, removed.1)
            )));
        }
        graph = next;
    }
    Ok((inst.witnesses, graph))
}
