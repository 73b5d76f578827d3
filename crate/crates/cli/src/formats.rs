//! On-disk formats: JSON instances, flat-text graphs and parent-list trees.

use std::fmt::Write as _;

use thiserror::Error;
use wgg_core::drawings::Tree;
use wgg_core::gabriel::{EdgeSet, Instance};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let inst: Instance = serde_json::from_str(text)?;
    inst.validate()
        .map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok(inst)
}

pub fn format_instance(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(inst).expect("instances serialize");
    s.push('\n');
    s
}

/// Nonblank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_usize(line: usize, field: &str) -> Result<usize, FormatError> {
    field.parse().map_err(|_| {
        syntax(
            line,
            format!("expected a non-negative integer, found `{field}`"),
        )
    })
}

/// Parses a graph file; edge lines may come in any order and either orientation.
pub fn parse_graph(text: &str) -> Result<EdgeSet, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing `n m` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return Err(syntax(hl, "header must be `n m`"));
    };
    let (n, m) = (parse_usize(hl, n)?, parse_usize(hl, m)?);
    let mut edges = EdgeSet::new(n);
    for (ln, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [i, j] = fields[..] else {
            return Err(syntax(ln, "edge line must be `i j`"));
        };
        let (i, j) = (parse_usize(ln, i)?, parse_usize(ln, j)?);
        match edges.insert(i, j) {
            Ok(true) => {}
            Ok(false) => return Err(syntax(ln, format!("duplicate edge ({i}, {j})"))),
            Err(e) => return Err(syntax(ln, e.to_string())),
        }
    }
    if edges.len() != m {
        return Err(FormatError::Invalid(format!(
            "header declares {m} edges but {} were listed",
            edges.len()
        )));
    }
    Ok(edges)
}

/// Canonical text: header, then `i j` with `i < j` in lexicographic order.
pub fn format_graph(edges: &EdgeSet) -> String {
    let mut s = format!("{} {}\n", edges.vertex_count(), edges.len());
    for (i, j) in edges.iter() {
        writeln!(s, "{i} {j}").unwrap();
    }
    s
}

/// Parses `n` followed by the 1-based parents of nodes `2..=n`; node 1 is the root.
pub fn parse_tree(text: &str) -> Result<Tree, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing node count"))?;
    let n = parse_usize(hl, header)?;
    if n == 0 {
        return Err(syntax(hl, "a tree needs at least one node"));
    }
    let mut parents = Vec::with_capacity(n - 1);
    for (ln, l) in lines {
        for field in l.split_whitespace() {
            let p = parse_usize(ln, field)?;
            if p == 0 || p > n {
                return Err(syntax(ln, format!("parent {p} outside 1..={n}")));
            }
            parents.push(p - 1);
        }
    }
    if parents.len() != n - 1 {
        return Err(FormatError::Invalid(format!(
            "expected {} parent indices, found {}",
            n - 1,
            parents.len()
        )));
    }
    let parent = std::iter::once(None)
        .chain(parents.into_iter().map(Some))
        .collect();
    Tree::from_parents(parent).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn format_tree(t: &Tree) -> String {
    let mut s = format!("{}\n", t.len());
    let parents: Vec<String> = (1..t.len())
        .map(|k| (t.parent(k).expect("non-root") + 1).to_string())
        .collect();
    s.push_str(&parents.join(" "));
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_is_identity() {
        let text = "4 3\n0 1\n0 3\n2 3\n";
        assert_eq!(format_graph(&parse_graph(text).unwrap()), text);
    }

    #[test]
    fn graph_parse_is_lenient_about_order() {
        let g = parse_graph("3 2\n2 1\n0 1\n\n").unwrap();
        assert_eq!(format_graph(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn graph_errors() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("3 1\n0 3\n").is_err());
        assert!(parse_graph("3 2\n0 1\n1 0\n").is_err());
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n1 1\n").is_err());
        assert!(parse_graph("3 x\n").is_err());
    }

    #[test]
    fn tree_parse() {
        let t = parse_tree("5\n1 2 3 4\n").unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.parent(4), Some(3));
        assert_eq!(format_tree(&t), "5\n1 2 3 4\n");
        assert_eq!(parse_tree("1\n").unwrap().len(), 1);
    }

    #[test]
    fn tree_accepts_late_parents() {
        let t = parse_tree("4\n3 1 3\n").unwrap();
        assert_eq!(t.parent(1), Some(2));
        assert_eq!(t.children(2), &[1, 3]);
    }

    #[test]
    fn tree_errors() {
        assert!(parse_tree("3\n3 2\n").is_err());
        assert!(parse_tree("3\n1\n").is_err());
        assert!(parse_tree("3\n1 4\n").is_err());
        assert!(parse_tree("0\n").is_err());
    }

    #[test]
    fn instance_validation() {
        let inst = parse_instance(r#"{"vertices": [[0, 0], [1, 0]], "witnesses": []}"#).unwrap();
        assert_eq!(inst.vertices.len(), 2);
        assert!(parse_instance(r#"{"vertices": []}"#).is_err());
        assert!(parse_instance(r#"{"vertices": [[0]]}"#).is_err());
        assert!(parse_instance("{").is_err());
    }
}
