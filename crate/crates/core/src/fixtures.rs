//! Hand-built graphs used by examples, tests and the CLI.
//!
//! Grid-like fixtures use the compass port convention n = 1, s = 2,
//! e = 3, w = 4.

use crate::graph::{CayleyGraph, PortGraph, VertexName};

pub const NORTH: u8 = 1;
pub const SOUTH: u8 = 2;
pub const EAST: u8 = 3;
pub const WEST: u8 = 4;

fn raw_graph(ports: u8, labels: &[u16]) -> PortGraph<u16> {
    let mut g = PortGraph::new(ports);
    for (i, &l) in labels.iter().enumerate() {
        g.add_vertex(VertexName::Raw(i as u64), l).unwrap();
    }
    g
}

/// The four-vertex example graph over Σ = {0, 1} whose DFS code is
/// `$1;(1,1)$0;(2,3)$0(2,3)||;(1,1)$1(2,3)||;`.
pub fn fig4() -> CayleyGraph<u16> {
    let (a, b, c, d) = (0, 1, 2, 3);
    let mut g = raw_graph(3, &[1, 0, 0, 1]);
    g.add_edge(a, 1, b, 1).unwrap();
    g.add_edge(b, 2, c, 3).unwrap();
    g.add_edge(c, 2, a, 3).unwrap();
    g.add_edge(c, 1, d, 1).unwrap();
    g.add_edge(d, 2, b, 3).unwrap();
    CayleyGraph::canonicalize_at(&g, a).unwrap()
}

pub fn single(ports: u8, label: u16) -> CayleyGraph<u16> {
    CayleyGraph::single(ports, label)
}

/// A `width` × `height` grid over compass ports, pointed at its north-west
/// corner.
pub fn grid(width: usize, height: usize) -> CayleyGraph<u16> {
    assert!(width > 0 && height > 0);
    let mut g = raw_graph(4, &vec![0; width * height]);
    let at = |x: usize, y: usize| y * width + x;
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                g.add_edge(at(x, y), EAST, at(x + 1, y), WEST).unwrap();
            }
            if y + 1 < height {
                g.add_edge(at(x, y), SOUTH, at(x, y + 1), NORTH).unwrap();
            }
        }
    }
    CayleyGraph::canonicalize_at(&g, 0).unwrap()
}

/// Two vertices side by side, wired east to west.
pub fn pair() -> CayleyGraph<u16> {
    grid(2, 1)
}

/// A cycle over ports {1, 2}: vertex `i` port 2 meets vertex `i + 1` port 1.
pub fn cycle(labels: &[u16]) -> CayleyGraph<u16> {
    assert!(!labels.is_empty());
    let n = labels.len();
    let mut g = raw_graph(2, labels);
    for i in 0..n {
        g.add_edge(i, 2, (i + 1) % n, 1).unwrap();
    }
    CayleyGraph::canonicalize_at(&g, 0).unwrap()
}

/// A path over ports {1, 2} pointed at its first vertex.
pub fn path(labels: &[u16]) -> CayleyGraph<u16> {
    assert!(!labels.is_empty());
    let mut g = raw_graph(2, labels);
    for i in 0..labels.len() - 1 {
        g.add_edge(i, 2, i + 1, 1).unwrap();
    }
    CayleyGraph::canonicalize_at(&g, 0).unwrap()
}

/// Looks a fixture up by its CLI name.
pub fn by_name(name: &str) -> Option<CayleyGraph<u16>> {
    Some(match name {
        "fig4" => fig4(),
        "single-vertex-0" => single(4, 0),
        "single-vertex-1" => single(2, 1),
        "pair" => pair(),
        "grid2" => grid(2, 2),
        "grid3" => grid(3, 3),
        "cycle4" => cycle(&[1, 0, 0, 0]),
        "cycle8" => cycle(&[0, 1, 1, 0, 1, 0, 0, 0]),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &[
    "fig4",
    "single-vertex-0",
    "single-vertex-1",
    "pair",
    "grid2",
    "grid3",
    "cycle4",
    "cycle8",
];
