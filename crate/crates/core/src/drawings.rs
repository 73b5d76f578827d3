//! Constructive drawers: each returns an instance together with the edge set
//! its witness Gabriel graph is meant to have, checked against the oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use thiserror::Error;

use crate::gabriel::{canonical_pair, oracle_construct, EdgeSet, GraphError, Instance};
use crate::geom::{
    circle_intersections, general_position_check, Circle, DiametralDisk, GeomError, Point,
    PositionViolation, Tolerance,
};
use crate::verify::EmbeddedGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DrawError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// An instance and the graph it should realize.
#[derive(Clone, Debug, PartialEq)]
pub struct Drawing {
    pub instance: Instance,
    pub expected: EdgeSet,
}

impl Drawing {
    /// Whether the oracle reproduces the expected edge set.
    pub fn round_trips(&self, tol: &Tolerance) -> bool {
        oracle_construct(&self.instance, tol).edges == self.expected
    }

    pub fn embedded(&self) -> EmbeddedGraph {
        EmbeddedGraph {
            vertices: self.instance.vertices.clone(),
            edges: self.expected.clone(),
        }
    }
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Moves point `i` by `1000 * tau` times its distance to its third-nearest
/// neighbour, in direction `i * golden angle`.
pub fn perturb(points: &mut [Point], tol: &Tolerance) {
    let reach = third_nearest(points, tol);
    for (i, p) in points.iter_mut().enumerate() {
        *p = *p + Point::polar(i as f64 * GOLDEN_ANGLE) * (1000.0 * tol.tau() * reach[i]);
    }
}

fn third_nearest(points: &[Point], tol: &Tolerance) -> Vec<f64> {
    (0..points.len())
        .map(|i| {
            let mut d: Vec<f64> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.dist(points[i]))
                .filter(|&d| d > 0.0)
                .collect();
            d.sort_by(f64::total_cmp);
            d.get(2).or(d.last()).copied().unwrap_or(tol.scale())
        })
        .collect()
}

/// Point count above which the quartic general-position scan is skipped.
const GENERAL_POSITION_LIMIT: usize = 150;

/// Applies [`perturb`], then [`repair_general_position`].
pub fn perturb_to_general_position(points: &mut [Point], tol: &Tolerance) -> bool {
    perturb(points, tol);
    repair_general_position(points, tol)
}

/// Pushes points still involved in collinear or cocircular tuples further,
/// three times harder each round, for up to three rounds. Returns whether
/// the points end in general position (always `true` above the scan limit).
pub fn repair_general_position(points: &mut [Point], tol: &Tolerance) -> bool {
    if points.len() > GENERAL_POSITION_LIMIT {
        return true;
    }
    let spread = Tolerance::for_points(points.iter())
        .with_tau(tol.tau())
        .unwrap_or(*tol);
    let mut magnitude = 1e4 * tol.tau();
    for round in 0..=3 {
        let violations = general_position_check(points, &spread);
        if violations.is_empty() {
            return true;
        }
        if round == 3 {
            break;
        }
        let mut involved = BTreeSet::new();
        for v in &violations {
            match v {
                PositionViolation::Collinear(t) => involved.extend(t.iter().copied()),
                PositionViolation::Cocircular(q) => involved.extend(q.iter().copied()),
            }
        }
        let reach = third_nearest(points, tol);
        for i in involved {
            let angle = (i + 7 * (round + 1)) as f64 * GOLDEN_ANGLE;
            points[i] = points[i] + Point::polar(angle) * (magnitude * reach[i]);
        }
        magnitude *= 3.0;
    }
    false
}

/// Perturbs the vertices and witnesses of an instance as one list, vertices first.
fn perturb_instance(inst: &mut Instance, tol: &Tolerance) {
    let n = inst.vertices.len();
    let mut all: Vec<Point> = inst
        .vertices
        .iter()
        .chain(&inst.witnesses)
        .copied()
        .collect();
    perturb(&mut all, tol);
    inst.witnesses = all.split_off(n);
    inst.vertices = all;
}

/// Repairs general position of a round-tripping drawing, keeping the repair
/// only if the oracle still reproduces the expected graph.
fn settle(d: Drawing, tol: &Tolerance) -> Drawing {
    let n = d.instance.vertices.len();
    let mut all: Vec<Point> = d
        .instance
        .vertices
        .iter()
        .chain(&d.instance.witnesses)
        .copied()
        .collect();
    let clean = repair_general_position(&mut all, tol);
    let witnesses = all.split_off(n);
    let repaired = Drawing {
        instance: Instance {
            vertices: all,
            witnesses,
            label: d.instance.label.clone(),
        },
        expected: d.expected.clone(),
    };
    if repaired.round_trips(tol) {
        if !clean {
            log::warn!("drawing left with degenerate tuples after repair");
        }
        repaired
    } else {
        log::warn!("general-position repair broke the drawing; keeping the plain perturbation");
        d
    }
}

/// A rooted tree on nodes `0..n`, rooted at 0 unless re-rooted; children
/// keep index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Tree {
    /// `parent[0]` must be `None`; every other node names its parent.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self, DrawError> {
        let n = parent.len();
        if n == 0 {
            return Err(DrawError::InvalidParameter("tree has no nodes".into()));
        }
        if parent[0].is_some() {
            return Err(DrawError::InvalidParameter(
                "node 0 must be the root".into(),
            ));
        }
        let mut children = vec![Vec::new(); n];
        for (k, p) in parent.iter().enumerate().skip(1) {
            match *p {
                None => {
                    return Err(DrawError::InvalidParameter(format!(
                        "node {k} has no parent"
                    )))
                }
                Some(p) if p >= n || p == k => {
                    return Err(DrawError::InvalidParameter(format!(
                        "node {k} has invalid parent {p}"
                    )))
                }
                Some(p) => children[p].push(k),
            }
        }
        let tree = Tree {
            root: 0,
            parent,
            children,
        };
        if tree.preorder().len() != n {
            return Err(DrawError::InvalidParameter(
                "parent links contain a cycle".into(),
            ));
        }
        Ok(tree)
    }

    pub fn path(n: usize) -> Result<Self, DrawError> {
        Self::from_parents((0..n).map(|k| k.checked_sub(1)).collect())
    }

    pub fn star(leaves: usize) -> Result<Self, DrawError> {
        Self::from_parents((0..=leaves).map(|k| (k > 0).then_some(0)).collect())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// The same undirected tree hanging from `root`; children stay in index order.
    pub fn rerooted(&self, root: usize) -> Tree {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for (k, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                adj[k].push(p);
                adj[p].push(k);
            }
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            adj[v].sort_unstable();
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    children[v].push(u);
                    stack.push(u);
                }
            }
        }
        Tree {
            root,
            parent,
            children,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, k: usize) -> Option<usize> {
        self.parent[k]
    }

    pub fn children(&self, k: usize) -> &[usize] {
        &self.children[k]
    }

    pub fn edges(&self) -> EdgeSet {
        let mut e = EdgeSet::new(self.len());
        for (k, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                e.insert(*p, k).expect("tree edges are valid");
            }
        }
        e
    }

    /// Nodes reachable from the root, parents before children.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            if order.len() > self.len() {
                break;
            }
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    pub fn descendants(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = self.children[k].clone();
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(&self.children[v]);
        }
        out
    }
}

/// Per-node layout quantities, angles in degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeLayoutState {
    pub alpha: f64,
    pub child_count: usize,
    /// Length of the edge to the parent (0 for the root).
    pub edge_length: f64,
    /// `|hj| sin(alpha_h / 2)` for parent `h`; infinite at the root.
    pub reach: f64,
}

/// Positions and layout states of the tree before witnesses are placed.
pub fn tree_layout(t: &Tree) -> (Vec<Point>, Vec<TreeLayoutState>) {
    let n = t.len();
    let mut pos = vec![Point::default(); n];
    let mut state = vec![
        TreeLayoutState {
            alpha: 0.0,
            child_count: 0,
            edge_length: 0.0,
            reach: f64::INFINITY,
        };
        n
    ];
    // Direction from each node toward its parent, in degrees.
    let mut back = vec![180.0; n];
    for j in t.preorder() {
        let d = t.children(j).len();
        let alpha = match t.parent(j) {
            None if d == 1 => 120.0,
            None => 360.0 / (d as f64 + 1.0),
            Some(h) => state[h].alpha / d.max(1) as f64,
        };
        state[j].alpha = alpha;
        state[j].child_count = d;
        let len = match t.parent(j) {
            None => 1.0,
            Some(_) => state[j].reach / 2.0,
        };
        let extremal = (360.0 - alpha * (d as f64 - 1.0)) / 2.0;
        for (i, &k) in t.children(j).iter().enumerate() {
            let theta = back[j] + extremal + i as f64 * alpha;
            pos[k] = pos[j] + Point::polar(theta.to_radians()) * len;
            back[k] = theta + 180.0;
            state[k].edge_length = len;
            state[k].reach = len * (alpha / 2.0).to_radians().sin();
        }
    }
    (pos, state)
}

/// Two witnesses per non-root node `j` with parent `h`, just outside `D_jh`
/// on the rays from `h` at `±alpha_h / 2` to `hj`.
fn tree_witnesses(
    t: &Tree,
    pos: &[Point],
    state: &[TreeLayoutState],
    eps: f64,
) -> Option<Vec<Point>> {
    let mut w = Vec::with_capacity(2 * t.len().saturating_sub(1));
    for j in (0..t.len()).filter(|&j| j != t.root()) {
        let h = t.parent(j).expect("non-root");
        let hj = pos[j] - pos[h];
        let half = (state[h].alpha / 2.0).to_radians();
        let dist = hj.norm() * half.cos() * (1.0 + eps);
        let dir = hj.normalized()?;
        for s in [1.0, -1.0] {
            w.push(pos[h] + dir.rotate(s * half * (1.0 - eps / 4.0)) * dist);
        }
    }
    Some(w)
}

/// Straight-line witness Gabriel drawing of `t`.
///
/// Edge lengths shrink geometrically with depth, so a deep tree can fall
/// below double precision when hung from its given root. The layout is then
/// retried from the other roots, longest shortest-edge first; the drawn
/// labeled graph is the same.
pub fn draw_tree(t: &Tree, tol: &Tolerance) -> Result<Drawing, DrawError> {
    let expected = t.edges();
    if t.len() == 1 {
        return Ok(Drawing {
            instance: Instance::new(vec![Point::default()], Vec::new())?,
            expected,
        });
    }
    let shortest = |r: &Tree| {
        tree_layout(r)
            .1
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != r.root())
            .map(|(_, s)| s.edge_length)
            .fold(f64::INFINITY, f64::min)
    };
    let mut roots: Vec<(f64, usize)> = (1..t.len())
        .map(|r| (shortest(&t.rerooted(r)), r))
        .collect();
    roots.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut last = None;
    for root in std::iter::once(0).chain(roots.into_iter().map(|(_, r)| r)) {
        match draw_rooted(&t.rerooted(root), &expected, tol) {
            Ok(d) => return Ok(d),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one root tried"))
}

fn draw_rooted(t: &Tree, expected: &EdgeSet, tol: &Tolerance) -> Result<Drawing, DrawError> {
    let (pos, state) = tree_layout(t);
    let mut eps = 1e-4;
    let mut mismatch = Vec::new();
    for _ in 0..=40 {
        let Some(witnesses) = tree_witnesses(t, &pos, &state, eps) else {
            return Err(DrawError::ConstructionFailure(format!(
                "edges underflow to zero length from root {}",
                t.root()
            )));
        };
        let mut inst = Instance::new(pos.clone(), witnesses)?;
        perturb_instance(&mut inst, tol);
        let got = oracle_construct(&inst, tol).edges;
        if got == *expected {
            let d = Drawing {
                instance: inst,
                expected: expected.clone(),
            };
            return Ok(settle(d, tol));
        }
        mismatch = got.symmetric_difference(expected).take(4).collect();
        eps /= 2.0;
    }
    let (a, b) = mismatch.first().copied().unwrap_or((t.root(), t.root()));
    let sub = if t.parent(b) == Some(a) { b } else { a };
    let mut nodes = t.descendants(sub);
    nodes.push(sub);
    nodes.sort_unstable();
    Err(DrawError::ConstructionFailure(format!(
        "witness offset exhausted after 40 halvings from root {}; pairs {mismatch:?} wrong, subtree {nodes:?}",
        t.root()
    )))
}

/// Rectangle layout for `K_{m,n}`: part A on the bottom side `ab`, part B on
/// the top side `cd`, with `|ad| = |cb| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteLayout {
    pub m: usize,
    pub n: usize,
    pub x: f64,
    pub height: f64,
    pub bottom: Vec<Point>,
    pub top: Vec<Point>,
}

/// Ratio of the two sides of the stick-out condition
/// `1/(m-1) > (1 - sqrt(1 - x^2)) / x`; above 1 when it holds.
pub fn separation_margin(m: usize, x: f64) -> f64 {
    let rhs = (1.0 - (1.0 - x * x).sqrt()) / x;
    (1.0 / (m as f64 - 1.0)) / rhs
}

pub fn bipartite_layout(m: usize, n: usize) -> Result<BipartiteLayout, DrawError> {
    if m < 2 || n < 1 || n > m {
        return Err(DrawError::InvalidParameter(format!(
            "need m >= n >= 1 and m >= 2, got m = {m}, n = {n}"
        )));
    }
    let x = (1..64)
        .map(|i| 0.5f64.powi(i))
        .find(|&x| separation_margin(m, x) >= 1.1)
        .ok_or_else(|| DrawError::InvalidParameter(format!("no width fits m = {m}")))?;
    let height = (1.0 - x * x).sqrt();
    let row = |k: usize, y: f64| -> Vec<Point> {
        if k == 1 {
            return vec![Point::new(x / 2.0, y)];
        }
        (0..k)
            .map(|i| Point::new(x * i as f64 / (k as f64 - 1.0), y))
            .collect()
    };
    Ok(BipartiteLayout {
        m,
        n,
        x,
        height,
        bottom: row(m, 0.0),
        top: row(n, height),
    })
}

/// `K_{m,n}` with vertices `0..m` forming the bottom part.
pub fn draw_complete_bipartite(m: usize, n: usize, tol: &Tolerance) -> Result<Drawing, DrawError> {
    let layout = bipartite_layout(m, n)?;
    let (x, h) = (layout.x, layout.height);
    let big = Circle {
        center: Point::new(x / 2.0, h / 2.0),
        radius: 0.5,
    };
    let mut witnesses = Vec::new();
    for (row, outward) in [(&layout.bottom, -1.0), (&layout.top, 1.0)] {
        let base_y = row.first().map_or(0.0, |p| p.y);
        for i in 0..row.len() {
            for j in i + 1..row.len() {
                let cx = 0.5 * (row[i].x + row[j].x);
                let r = 0.5 * (row[j].x - row[i].x);
                // Depth past the strip at which the vertical through cx leaves `big`.
                let dx = cx - big.center.x;
                let exit = (big.radius * big.radius - dx * dx).sqrt() - h / 2.0;
                if exit >= r {
                    return Err(DrawError::ConstructionFailure(format!(
                        "disk of same-side pair ({i}, {j}) does not leave D and S"
                    )));
                }
                let depth = 0.5 * (r + exit);
                witnesses.push(Point::new(cx, base_y + outward * depth));
            }
        }
    }
    let vertices: Vec<Point> = layout.bottom.iter().chain(&layout.top).copied().collect();
    let expected =
        EdgeSet::from_pairs(m + n, (0..m).flat_map(|i| (m..m + n).map(move |j| (i, j))))?;
    let mut instance = Instance::new(vertices, witnesses)?;
    perturb_instance(&mut instance, tol);
    let drawing = Drawing { instance, expected };
    if !drawing.round_trips(tol) {
        return Err(DrawError::ConstructionFailure(format!(
            "K_{{{m},{n}}} witnesses do not reproduce the graph"
        )));
    }
    Ok(settle(drawing, tol))
}

/// One witness just right of each point except the rightmost; every pair's
/// disk then contains the witness of its left endpoint.
pub fn eliminate_all_witnesses(points: &[Point]) -> Result<Vec<Point>, DrawError> {
    if points.len() < 2 {
        return Ok(Vec::new());
    }
    let tol = Tolerance::for_points(points.iter());
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x));
    let gap = min_x_gap(points);
    if gap <= tol.abs() {
        return Err(DrawError::InvalidParameter(
            "two points share an x-coordinate".into(),
        ));
    }
    let delta = 1e-4 * gap;
    Ok(order[..order.len() - 1]
        .iter()
        .map(|&i| points[i] + Point::new(delta, 0.0))
        .collect())
}

fn min_x_gap(points: &[Point]) -> f64 {
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Rotation angle, among 360 evenly spaced candidates, that maximizes the
/// smallest gap between x-coordinates.
pub fn separating_rotation(points: &[Point]) -> f64 {
    (0..360)
        .map(|k| (k as f64 + 0.5) * PI / 360.0)
        .map(|a| {
            let rotated: Vec<Point> = points.iter().map(|p| p.rotate(a)).collect();
            (a, min_x_gap(&rotated))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(0.0, |(a, _)| a)
}

/// Rotates into distinct x-coordinates, places the witnesses, rotates back.
pub fn eliminate_all_witnesses_rotated(points: &[Point]) -> Result<Vec<Point>, DrawError> {
    let a = separating_rotation(points);
    let rotated: Vec<Point> = points.iter().map(|p| p.rotate(a)).collect();
    Ok(eliminate_all_witnesses(&rotated)?
        .into_iter()
        .map(|w| w.rotate(-a))
        .collect())
}

/// Honeycomb patch with unit edges, and the diametral disks of those edges.
#[derive(Clone, Debug, PartialEq)]
pub struct HexagonalPatch {
    pub points: Vec<Point>,
    pub disks: Vec<(usize, usize)>,
}

impl HexagonalPatch {
    pub fn diametral_disks(&self) -> Vec<DiametralDisk> {
        self.disks
            .iter()
            .map(|&(i, j)| DiametralDisk::new(self.points[i], self.points[j]).expect("distinct"))
            .collect()
    }

    /// Number of designated disks blocked by `q`.
    pub fn hits(&self, q: Point, tol: &Tolerance) -> usize {
        self.diametral_disks()
            .iter()
            .filter(|d| d.blocks(q, tol))
            .count()
    }
}

/// Hexagons within hex distance `rings - 1` of a central one.
pub fn hexagonal_instance(rings: usize) -> Result<HexagonalPatch, DrawError> {
    if rings == 0 {
        return Err(DrawError::InvalidParameter(
            "rings must be at least 1".into(),
        ));
    }
    let r = rings as i64 - 1;
    let key = |p: Point| ((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64);
    let mut index: BTreeMap<(i64, i64), Point> = BTreeMap::new();
    let mut sides = Vec::new();
    let sq3 = 3f64.sqrt();
    for q in -r..=r {
        for s in (-r).max(-q - r)..=r.min(-q + r) {
            let center = Point::new(sq3 * (q as f64 + s as f64 / 2.0), 1.5 * s as f64);
            let corners: Vec<Point> = (0..6)
                .map(|k| center + Point::polar((30.0 + 60.0 * k as f64).to_radians()))
                .collect();
            for k in 0..6 {
                let (a, b) = (corners[k], corners[(k + 1) % 6]);
                index.entry(key(a)).or_insert(a);
                sides.push((key(a), key(b)));
            }
        }
    }
    let ids: BTreeMap<(i64, i64), usize> = index.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut points: Vec<Point> = index.into_values().collect();
    let disks: EdgeSet = sides.iter().map(|(a, b)| (ids[a], ids[b])).collect();
    let tol = Tolerance::for_points(points.iter());
    perturb_to_general_position(&mut points, &tol);
    Ok(HexagonalPatch {
        points,
        disks: disks.iter().collect(),
    })
}

/// Smallest number of points that together block every disk, searched over
/// disk centers and nudged pairwise circle crossings. `None` above 64 disks.
pub fn min_piercing(disks: &[DiametralDisk], tol: &Tolerance) -> Option<usize> {
    if disks.len() > 64 {
        return None;
    }
    let mut candidates: Vec<Point> = disks.iter().map(DiametralDisk::center).collect();
    for (i, a) in disks.iter().enumerate() {
        for b in &disks[i + 1..] {
            let (ca, cb) = (a.circle(), b.circle());
            let nudge = 1e-6 * (ca.radius + cb.radius);
            for q in circle_intersections(&ca, &cb, tol.tau()).unwrap_or_default() {
                let na = (q - ca.center).normalized().unwrap_or_default();
                let nb = (q - cb.center).normalized().unwrap_or_default();
                for (s, t) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    candidates.push(q + (na * s + nb * t) * nudge);
                }
            }
        }
    }
    let mut masks: Vec<u64> = candidates
        .iter()
        .map(|&q| {
            disks
                .iter()
                .enumerate()
                .filter(|(_, d)| d.blocks(q, tol))
                .fold(0u64, |m, (k, _)| m | (1 << k))
        })
        .filter(|&m| m != 0)
        .collect();
    masks.sort_unstable();
    masks.dedup();
    let maximal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
        .collect();
    let full = if disks.len() == 64 {
        u64::MAX
    } else {
        (1u64 << disks.len()) - 1
    };
    if maximal.iter().fold(0, |acc, m| acc | m) != full {
        return None;
    }
    fn search(covered: u64, full: u64, sets: &[u64], left: usize) -> bool {
        if covered == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        let first = (!covered & full).trailing_zeros();
        sets.iter()
            .filter(|&&m| m >> first & 1 == 1)
            .any(|&m| search(covered | m, full, sets, left - 1))
    }
    (0..=disks.len()).find(|&k| search(0, full, &maximal, k))
}

/// Vertices on concentric circles, sixteen per circle, numbered clockwise
/// from the top; circle `c` joins consecutive vertices of parity `c mod 2`.
pub fn concentric_instance(circles: usize, ratio: f64) -> Result<Drawing, DrawError> {
    if circles < 2 {
        return Err(DrawError::InvalidParameter(
            "need at least two circles".into(),
        ));
    }
    if !(ratio > 1.82 && ratio < 1.92) {
        return Err(DrawError::InvalidParameter(format!(
            "radius ratio {ratio} outside (1.82, 1.92)"
        )));
    }
    let mut vertices = Vec::with_capacity(16 * circles);
    let mut expected = EdgeSet::new(16 * circles);
    for c in 0..circles {
        let radius = ratio.powi(c as i32);
        for k in 0..16 {
            vertices.push(Point::polar((90.0 - 22.5 * k as f64).to_radians()) * radius);
        }
        for k in (c % 2..16).step_by(2) {
            expected.insert(16 * c + k, 16 * c + (k + 2) % 16)?;
        }
    }
    let tol = Tolerance::for_points(vertices.iter());
    perturb_to_general_position(&mut vertices, &tol);
    Ok(Drawing {
        instance: Instance::new(vertices, Vec::new())?,
        expected,
    })
}

/// Twelve vertices in convex position coloured 0,1,2,3 repeatedly, with all
/// bichromatic pairs as edges.
pub fn k3333_candidate() -> EmbeddedGraph {
    let vertices: Vec<Point> = (0..12)
        .map(|i| {
            let t = i as f64;
            let angle = 30.0 * t + 4.0 * (2.3 * t + 0.7).sin();
            Point::polar(angle.to_radians()) * (1.0 + 0.03 * (1.7 * t).cos())
        })
        .collect();
    let edges = (0..12)
        .flat_map(|i| (i + 1..12).map(move |j| (i, j)))
        .filter(|&(i, j)| i % 4 != j % 4)
        .map(|(i, j)| canonical_pair(i, j))
        .collect::<EdgeSet>();
    EmbeddedGraph { vertices, edges }
}
