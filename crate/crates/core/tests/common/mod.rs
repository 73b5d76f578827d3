#![allow(dead_code)]

use std::collections::BTreeSet;

use petgraph::algo::min_spanning_tree;
use petgraph::data::Element;
use petgraph::graph::UnGraph;
use rand::Rng;
use wgg_core::drawings::Tree;
use wgg_core::gabriel::EdgeSet;
use wgg_core::geom::{orient, Point};

/// AHU canonical string of the subtree rooted at `v`.
fn canonical(children: &[Vec<usize>], v: usize) -> String {
    let mut subs: Vec<String> = children[v]
        .iter()
        .map(|&c| canonical(children, c))
        .collect();
    subs.sort();
    format!("({})", subs.concat())
}

/// One parent array (`parent[k] < k`) per isomorphism class of rooted trees on `n` nodes.
pub fn rooted_trees(n: usize) -> Vec<Vec<usize>> {
    let mut level: Vec<Vec<usize>> = vec![vec![]];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for p in 0..size - 1 {
                let mut u = t.clone();
                u.push(p);
                let mut children = vec![Vec::new(); size];
                for (k, &par) in u.iter().enumerate() {
                    children[par].push(k + 1);
                }
                if seen.insert(canonical(&children, 0)) {
                    next.push(u);
                }
            }
        }
        level = next;
    }
    if n == 0 {
        Vec::new()
    } else {
        level
    }
}

/// `parents[k - 1]` is the parent of node `k`.
pub fn tree_from(parents: &[usize]) -> Tree {
    let mut p = vec![None];
    p.extend(parents.iter().map(|&x| Some(x)));
    Tree::from_parents(p).expect("valid tree")
}

/// Parent list of nodes `1..n`, kept for readable failure messages.
#[derive(Clone, Debug)]
pub enum TreeSpec {
    Parents(Vec<usize>),
}

impl TreeSpec {
    pub fn tree(&self) -> Tree {
        let TreeSpec::Parents(p) = self;
        tree_from(p)
    }

    pub fn random_parent<R: Rng>(rng: &mut R, n: usize) -> Self {
        TreeSpec::Parents((1..n).map(|k| rng.gen_range(0..k)).collect())
    }

    /// Uniform labeled tree via a Prüfer sequence, rooted at node 0.
    pub fn prufer<R: Rng>(rng: &mut R, n: usize) -> Self {
        let parent = prufer_parents(rng, n);
        TreeSpec::Parents(parent[1..].iter().map(|p| p.unwrap()).collect())
    }
}

fn prufer_parents<R: Rng>(rng: &mut R, n: usize) -> Vec<Option<usize>> {
    if n <= 2 {
        return (0..n).map(|k| k.checked_sub(1)).collect();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut adj = vec![Vec::new(); n];
    for &s in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        adj[leaf].push(s);
        adj[s].push(leaf);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    adj[rest[0]].push(rest[1]);
    adj[rest[1]].push(rest[0]);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                stack.push(u);
            }
        }
    }
    parent
}

pub fn non_crossing(points: &[Point], edges: &EdgeSet) -> bool {
    let e: Vec<_> = edges.iter().collect();
    (0..e.len()).all(|x| {
        (x + 1..e.len()).all(|y| {
            let ((a, b), (c, d)) = (e[x], e[y]);
            !wgg_core::geom::segments_cross(points[a], points[b], points[c], points[d])
        })
    })
}

/// Edges of a Euclidean minimum spanning tree of the complete graph.
pub fn euclidean_mst(points: &[Point]) -> EdgeSet {
    let mut g = UnGraph::<(), f64>::new_undirected();
    let nodes: Vec<_> = points.iter().map(|_| g.add_node(())).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            g.add_edge(nodes[i], nodes[j], points[i].dist(points[j]));
        }
    }
    let mut out = EdgeSet::new(points.len());
    for el in min_spanning_tree(&g) {
        if let Element::Edge { source, target, .. } = el {
            out.insert(source, target).unwrap();
        }
    }
    out
}

fn in_circle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let det =
        ad.norm_sq() * bd.cross(cd) - bd.norm_sq() * ad.cross(cd) + cd.norm_sq() * ad.cross(bd);
    det * orient(a, b, c).signum()
}

/// Delaunay edges by brute force: `ab` is kept when some third point spans an
/// empty circumcircle with it.
pub fn delaunay_brute(points: &[Point]) -> EdgeSet {
    let n = points.len();
    let mut out = EdgeSet::new(n);
    for a in 0..n {
        for b in a + 1..n {
            let empty = (0..n).filter(|&c| c != a && c != b).any(|c| {
                orient(points[a], points[b], points[c]) != 0.0
                    && (0..n)
                        .filter(|&d| d != a && d != b && d != c)
                        .all(|d| in_circle(points[a], points[b], points[c], points[d]) <= 0.0)
            });
            if empty || n == 2 {
                out.insert(a, b).unwrap();
            }
        }
    }
    out
}
