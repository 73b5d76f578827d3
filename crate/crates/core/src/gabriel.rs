//! Graph model, the brute-force oracle that defines `GG⁻(P, W)`, the
//! midpoint edge test and the witness k-Gabriel generalization.

use std::collections::BTreeSet;
use std::num::NonZeroUsize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{blocks, Point, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("instance has no vertices")]
    NoVertices,
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("edge ({0}, {1}) out of range for {2} vertices")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("invalid pair: endpoints coincide")]
    InvalidPair,
    #[error("k must be at least 1")]
    InvalidK,
}

/// Canonical undirected edge set over `0..vertex_count`; pairs stored as `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct EdgeSet {
    vertex_count: usize,
    pairs: BTreeSet<(usize, usize)>,
}

/// Orders a pair so the smaller index comes first.
pub fn canonical_pair(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl EdgeSet {
    pub fn new(vertex_count: usize) -> Self {
        EdgeSet {
            vertex_count,
            pairs: BTreeSet::new(),
        }
    }

    pub fn complete(vertex_count: usize) -> Self {
        let mut e = EdgeSet::new(vertex_count);
        for i in 0..vertex_count {
            for j in i + 1..vertex_count {
                e.pairs.insert((i, j));
            }
        }
        e
    }

    /// Builds an edge set, rejecting out-of-range indices, self-loops and
    /// duplicates (in either orientation).
    pub fn from_pairs<I>(vertex_count: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut e = EdgeSet::new(vertex_count);
        for (i, j) in pairs {
            if !e.insert(i, j)? {
                let (a, b) = canonical_pair(i, j);
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(e)
    }

    /// Inserts `{i, j}`; returns whether it was new.
    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool, GraphError> {
        if i >= self.vertex_count || j >= self.vertex_count {
            return Err(GraphError::EdgeOutOfRange(i, j, self.vertex_count));
        }
        if i == j {
            return Err(GraphError::SelfLoop(i));
        }
        Ok(self.pairs.insert(canonical_pair(i, j)))
    }

    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        self.pairs.remove(&canonical_pair(i, j))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&canonical_pair(i, j))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// Pairs of distinct vertices that are not edges, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertex_count;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.pairs.contains(&(i, j)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.pairs
            .iter()
            .filter(|&&(i, j)| i == v || j == v)
            .count()
    }

    /// Adjacency lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(i, j) in &self.pairs {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Pairs present in exactly one of the two sets.
    pub fn symmetric_difference<'a>(
        &'a self,
        other: &'a EdgeSet,
    ) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.pairs.symmetric_difference(&other.pairs).copied()
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    /// Collects pairs, sizing the vertex range to the largest index seen.
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        let pairs: BTreeSet<_> = iter
            .into_iter()
            .map(|(i, j)| canonical_pair(i, j))
            .collect();
        let vertex_count = pairs.iter().map(|&(_, j)| j + 1).max().unwrap_or(0);
        EdgeSet {
            vertex_count,
            pairs,
        }
    }
}

/// The graph `GG⁻(P, W)` over vertex indices of `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessGabrielGraph {
    pub vertices: Vec<Point>,
    pub edges: EdgeSet,
}

/// A vertex set `P` with a witness set `W`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub vertices: Vec<Point>,
    #[serde(default)]
    pub witnesses: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Instance {
    pub fn new(vertices: Vec<Point>, witnesses: Vec<Point>) -> Result<Self, GraphError> {
        let inst = Instance {
            vertices,
            witnesses,
            label: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        if !self.vertices.iter().all(Point::is_finite) {
            return Err(GraphError::NonFinite("vertices"));
        }
        if !self.witnesses.iter().all(Point::is_finite) {
            return Err(GraphError::NonFinite("witnesses"));
        }
        Ok(())
    }

    /// Default tolerance for this instance, scaled to its vertices and witnesses.
    pub fn tolerance(&self) -> Tolerance {
        Tolerance::for_points(self.vertices.iter().chain(&self.witnesses))
    }
}

/// Witness count threshold for the k-Gabriel variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KOrder(NonZeroUsize);

impl KOrder {
    pub const ONE: KOrder = KOrder(NonZeroUsize::MIN);

    pub fn new(k: usize) -> Result<Self, GraphError> {
        NonZeroUsize::new(k).map(KOrder).ok_or(GraphError::InvalidK)
    }

    pub fn get(self) -> usize {
        self.0.get()
    }
}

fn pairwise_edges<F>(n: usize, keep: F) -> BTreeSet<(usize, usize)>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let keep = &keep;
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..n).filter(move |&j| keep(i, j)).map(move |j| (i, j)))
        .collect()
}

/// Ground-truth construction: `ij` is an edge iff no witness lies in
/// `D_{p_i p_j}` minus its endpoints. `O(n² |W|)`.
pub fn oracle_construct(inst: &Instance, tol: &Tolerance) -> WitnessGabrielGraph {
    let p = &inst.vertices;
    let tau = tol.tau();
    let pairs = pairwise_edges(p.len(), |i, j| {
        !inst.witnesses.iter().any(|&q| blocks(p[i], p[j], q, tau))
    });
    WitnessGabrielGraph {
        vertices: p.clone(),
        edges: EdgeSet {
            vertex_count: p.len(),
            pairs,
        },
    }
}

/// Midpoint form of the edge rule: with `m` the midpoint of `pr` and the
/// nearest witness at distance `d` from `m`, the edge survives iff `d` exceeds
/// `|pr| / 2`. A witness on the circle blocks. The comparison uses the same
/// relative tolerance as the disk predicate, since
/// `dot(p - q, r - q) = |q - m|² - |pr|² / 4`.
pub fn edge_test_midpoint(
    p: Point,
    r: Point,
    nearest_witness_distance: f64,
    tol: &Tolerance,
) -> Result<bool, GraphError> {
    if p == r {
        return Err(GraphError::InvalidPair);
    }
    Ok(midpoint_clear(p, r, nearest_witness_distance, tol.tau()))
}

#[inline]
pub(crate) fn midpoint_clear(p: Point, r: Point, nearest: f64, tau: f64) -> bool {
    let l2 = p.dist_sq(r);
    nearest * nearest - 0.25 * l2 > tau * l2
}

/// Removes witnesses within `tol.abs()` of an earlier witness.
pub fn dedup_witnesses(witnesses: &[Point], tol: &Tolerance) -> Vec<Point> {
    let eps2 = tol.abs() * tol.abs();
    let mut out: Vec<Point> = Vec::with_capacity(witnesses.len());
    for &w in witnesses {
        if !out.iter().any(|u| u.dist_sq(w) <= eps2) {
            out.push(w);
        }
    }
    out
}

/// Witness k-Gabriel graph: `ij` is an edge iff fewer than `k` distinct
/// witnesses lie in `D_{p_i p_j}` minus its endpoints.
pub fn construct_k_gabriel(inst: &Instance, k: KOrder, tol: &Tolerance) -> WitnessGabrielGraph {
    let p = &inst.vertices;
    let w = dedup_witnesses(&inst.witnesses, tol);
    let tau = tol.tau();
    let k = k.get();
    let pairs = pairwise_edges(p.len(), |i, j| {
        w.iter()
            .filter(|&&q| blocks(p[i], p[j], q, tau))
            .take(k)
            .count()
            < k
    });
    WitnessGabrielGraph {
        vertices: p.clone(),
        edges: EdgeSet {
            vertex_count: p.len(),
            pairs,
        },
    }
}

/// Edge-set equality under the identity labeling.
pub fn graph_isomorphic_as_labeled(g1: &EdgeSet, g2: &EdgeSet) -> Result<bool, GraphError> {
    if g1.vertex_count != g2.vertex_count {
        return Err(GraphError::VertexCountMismatch(
            g1.vertex_count,
            g2.vertex_count,
        ));
    }
    Ok(g1.pairs == g2.pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_instance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn no_witnesses_gives_complete_graph() {
        let inst = Instance::new(
            vec![
                p(0.0, 0.0),
                p(1.0, 0.3),
                p(2.1, -0.4),
                p(0.7, 1.9),
                p(-1.2, 0.8),
            ],
            vec![],
        )
        .unwrap();
        let g = oracle_construct(&inst, &inst.tolerance());
        assert_eq!(g.edges.len(), 10);
        assert_eq!(g.edges, EdgeSet::complete(5));
    }

    #[test]
    fn interior_witness_kills_only_edge() {
        let inst = Instance::new(vec![p(0.0, 0.0), p(2.0, 0.0)], vec![p(1.0, 0.1)]).unwrap();
        assert!(oracle_construct(&inst, &inst.tolerance()).edges.is_empty());
    }

    #[test]
    fn witness_at_right_angle_blocks_all_three_pairs() {
        // q = (1, 0) sees (0,0)-(2,0) at 180 degrees and both other pairs at
        // exactly 90 degrees, so every dot product is <= 0 and the closed
        // disk rule removes all three edges.
        let v = [p(0.0, 0.0), p(2.0, 0.0), p(1.0, 2.0)];
        let q = p(1.0, 0.0);
        let dots: Vec<f64> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (v[i] - q).dot(v[j] - q))
            .collect();
        assert_eq!(dots, vec![-1.0, 0.0, 0.0]);
        let inst = Instance::new(v.to_vec(), vec![q]).unwrap();
        let g = oracle_construct(&inst, &inst.tolerance());
        assert!(g.edges.is_empty());
        // Lifting the witness off the circles restores the two slanted edges.
        let inst = Instance::new(v.to_vec(), vec![p(1.0, -0.05)]).unwrap();
        let g = oracle_construct(&inst, &inst.tolerance());
        assert_eq!(g.edges, EdgeSet::from_pairs(3, [(0, 2), (1, 2)]).unwrap());
    }

    #[test]
    fn k_gabriel_examples() {
        let inst = Instance::new(
            vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 2.0)],
            vec![p(1.0, 0.0)],
        )
        .unwrap();
        let t = inst.tolerance();
        let g = construct_k_gabriel(&inst, KOrder::new(2).unwrap(), &t);
        assert_eq!(g.edges, EdgeSet::complete(3));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, 12, 9);
            let t = inst.tolerance();
            let k1 = construct_k_gabriel(&inst, KOrder::ONE, &t);
            assert_eq!(k1, oracle_construct(&inst, &t));
            let big = KOrder::new(inst.witnesses.len() + 1).unwrap();
            assert_eq!(
                construct_k_gabriel(&inst, big, &t).edges,
                EdgeSet::complete(12)
            );
        }
        assert_eq!(KOrder::new(0), Err(GraphError::InvalidK));
    }

    #[test]
    fn k_gabriel_counts_duplicates_once() {
        let inst = Instance::new(
            vec![p(0.0, 0.0), p(2.0, 0.0)],
            vec![p(1.0, 0.1), p(1.0, 0.1)],
        )
        .unwrap();
        let g = construct_k_gabriel(&inst, KOrder::new(2).unwrap(), &inst.tolerance());
        assert!(g.edges.contains(0, 1));
    }

    #[test]
    fn midpoint_test_examples() {
        let t = Tolerance::default();
        let (a, b) = (p(0.0, 0.0), p(2.0, 0.0));
        assert!(edge_test_midpoint(a, b, 1.5, &t).unwrap());
        assert!(!edge_test_midpoint(a, b, 0.5, &t).unwrap());
        assert!(!edge_test_midpoint(a, b, 1.0, &t).unwrap());
        assert_eq!(
            edge_test_midpoint(a, a, 1.0, &t),
            Err(GraphError::InvalidPair)
        );
    }

    #[test]
    fn labeled_comparison() {
        let a = EdgeSet::from_pairs(2, [(0, 1)]).unwrap();
        let b = EdgeSet::from_pairs(2, [(1, 0)]).unwrap();
        assert!(graph_isomorphic_as_labeled(&a, &b).unwrap());
        assert!(!graph_isomorphic_as_labeled(&a, &EdgeSet::new(2)).unwrap());
        let k4 = EdgeSet::complete(4);
        let shuffled =
            EdgeSet::from_pairs(4, [(2, 3), (0, 3), (1, 2), (0, 1), (1, 3), (0, 2)]).unwrap();
        assert!(graph_isomorphic_as_labeled(&k4, &shuffled).unwrap());
        assert!(graph_isomorphic_as_labeled(&k4, &EdgeSet::complete(5)).is_err());
    }

    #[test]
    fn edge_set_validation() {
        assert_eq!(
            EdgeSet::from_pairs(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            EdgeSet::from_pairs(3, [(2, 2)]),
            Err(GraphError::SelfLoop(2))
        );
        assert_eq!(
            EdgeSet::from_pairs(3, [(0, 3)]),
            Err(GraphError::EdgeOutOfRange(0, 3, 3))
        );
        let e = EdgeSet::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            e.non_edges().collect::<Vec<_>>(),
            vec![(0, 2), (0, 3), (1, 2), (1, 3)]
        );
    }

    #[test]
    fn instance_validation() {
        assert_eq!(Instance::new(vec![], vec![]), Err(GraphError::NoVertices));
        assert_eq!(
            Instance::new(vec![p(f64::NAN, 0.0)], vec![]),
            Err(GraphError::NonFinite("vertices"))
        );
    }

    #[test]
    fn self_witness_reproduces_gabriel_rule() {
        // Square plus an off-center point: it kills both diagonals and the
        // top side, which it sees at more than 90 degrees.
        let pts = vec![
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(1.0, 1.0),
            p(0.0, 1.0),
            p(0.5, 0.6),
        ];
        let inst = Instance::new(pts.clone(), pts).unwrap();
        let g = oracle_construct(&inst, &inst.tolerance());
        assert!(!g.edges.contains(0, 2));
        assert!(!g.edges.contains(1, 3));
        assert!(!g.edges.contains(2, 3));
        assert!(g.edges.contains(0, 1));
        assert!(g.edges.contains(0, 4));
    }
}
