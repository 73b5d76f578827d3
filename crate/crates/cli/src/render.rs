//! SVG output: black filled vertices, white stroked witnesses, edge segments
//! and optional gray diametral disks.

use svg::node::element::{Circle, Group, Line, Rectangle};
use svg::Document;
use wgg_core::gabriel::{EdgeSet, Instance};
use wgg_core::geom::{DiametralDisk, Point};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Maps instance coordinates onto the canvas with the y axis pointing up.
struct Frame {
    min: Point,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a Point>, disks: &[DiametralDisk]) -> Frame {
        let (mut lo, mut hi) = (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        let mut grow = |p: Point, r: f64| {
            lo = Point::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Point::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for p in points {
            grow(*p, 0.0);
        }
        for d in disks {
            grow(d.center(), d.radius());
        }
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        let scale = if extent > 0.0 {
            (CANVAS - 2.0 * MARGIN) / extent
        } else {
            1.0
        };
        Frame {
            min: lo,
            max_y: hi.y,
            scale,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min.x) * self.scale,
            MARGIN + (self.max_y - p.y) * self.scale,
        )
    }
}

/// Renders `inst` with `edges`; `disks` are drawn underneath everything else.
pub fn render(inst: &Instance, edges: &EdgeSet, disks: &[DiametralDisk]) -> String {
    let frame = Frame::fit(inst.vertices.iter().chain(&inst.witnesses), disks);
    let marker = 4.0;
    let mut doc = Document::new()
        .set("viewBox", (0, 0, CANVAS, CANVAS))
        .set("width", CANVAS)
        .set("height", CANVAS)
        .add(
            Rectangle::new()
                .set("width", "100%")
                .set("height", "100%")
                .set("fill", "white"),
        );

    let mut disk_layer = Group::new().set("id", "disks");
    for d in disks {
        let (cx, cy) = frame.map(d.center());
        disk_layer = disk_layer.add(
            Circle::new()
                .set("class", "disk")
                .set("cx", cx)
                .set("cy", cy)
                .set("r", d.radius() * frame.scale)
                .set("fill", "gray")
                .set("fill-opacity", 0.15)
                .set("stroke", "gray")
                .set("stroke-width", 0.5),
        );
    }

    let mut edge_layer = Group::new().set("id", "edges");
    for (i, j) in edges.iter() {
        let (x1, y1) = frame.map(inst.vertices[i]);
        let (x2, y2) = frame.map(inst.vertices[j]);
        edge_layer = edge_layer.add(
            Line::new()
                .set("class", "edge")
                .set("x1", x1)
                .set("y1", y1)
                .set("x2", x2)
                .set("y2", y2)
                .set("stroke", "black")
                .set("stroke-width", 1),
        );
    }

    let mut witness_layer = Group::new().set("id", "witnesses");
    for w in &inst.witnesses {
        let (cx, cy) = frame.map(*w);
        witness_layer = witness_layer.add(
            Circle::new()
                .set("class", "witness")
                .set("cx", cx)
                .set("cy", cy)
                .set("r", marker)
                .set("fill", "white")
                .set("stroke", "black")
                .set("stroke-width", 1),
        );
    }

    let mut vertex_layer = Group::new().set("id", "vertices");
    for v in &inst.vertices {
        let (cx, cy) = frame.map(*v);
        vertex_layer = vertex_layer.add(
            Circle::new()
                .set("class", "vertex")
                .set("cx", cx)
                .set("cy", cy)
                .set("r", marker)
                .set("fill", "black"),
        );
    }

    doc = doc
        .add(disk_layer)
        .add(edge_layer)
        .add(witness_layer)
        .add(vertex_layer);
    let mut s = doc.to_string();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str, class: &str) -> usize {
        s.matches(&format!("class=\"{class}\"")).count()
    }

    #[test]
    fn element_counts_match_instance() {
        let inst = Instance::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 2.0),
            ],
            vec![Point::new(0.5, 0.5)],
        )
        .unwrap();
        let edges = EdgeSet::from_pairs(3, [(0, 1), (0, 2)]).unwrap();
        let disks = vec![DiametralDisk::new(inst.vertices[0], inst.vertices[1]).unwrap()];
        let s = render(&inst, &edges, &disks);
        assert_eq!(count(&s, "vertex"), 3);
        assert_eq!(count(&s, "witness"), 1);
        assert_eq!(count(&s, "edge"), 2);
        assert_eq!(count(&s, "disk"), 1);
        assert!(s.starts_with("<svg"));
    }

    #[test]
    fn single_point_does_not_divide_by_zero() {
        let inst = Instance::new(vec![Point::new(3.0, 3.0)], vec![]).unwrap();
        let s = render(&inst, &EdgeSet::new(1), &[]);
        assert!(!s.contains("NaN"));
    }
}
