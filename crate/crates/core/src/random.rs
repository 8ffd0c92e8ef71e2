//! Seeded random graphs for corpora, sampling and property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{CayleyGraph, End, PortGraph, VertexName};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random connected graph with at most `vertices` vertices.
///
/// A random spanning tree is grown port by port, then about
/// `density * vertices` extra edges are added between free ports, which
/// may create loops, multi-edges and unusual port pairings. The pointer is
/// a uniformly chosen vertex.
pub fn random_graph<R: Rng>(rng: &mut R, ports: u8, labels: u16, vertices: usize, density: f64) -> CayleyGraph<u16> {
    assert!(ports >= 1 && labels >= 1 && vertices >= 1);
    let mut g = PortGraph::new(ports);
    g.add_vertex(VertexName::Raw(0), rng.gen_range(0..labels)).unwrap();
    for v in 1..vertices {
        let free = free_ends(&g);
        let Some(&anchor) = free.choose(rng) else { break };
        let w = g
            .add_vertex(VertexName::Raw(v as u64), rng.gen_range(0..labels))
            .unwrap();
        let q = rng.gen_range(1..=ports);
        g.add_edge(anchor.vertex, anchor.port, w, q).unwrap();
    }
    let extra = (density * g.vertex_count() as f64).round() as usize;
    for _ in 0..extra {
        let free = free_ends(&g);
        if free.len() < 2 {
            break;
        }
        let a = *free.choose(rng).unwrap();
        let b = *free.choose(rng).unwrap();
        if a != b {
            g.add_edge(a.vertex, a.port, b.vertex, b.port).unwrap();
        }
    }
    let pointer = rng.gen_range(0..g.vertex_count());
    CayleyGraph::canonicalize_at(&g, pointer).unwrap()
}

fn free_ends(g: &PortGraph<u16>) -> Vec<End> {
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        for p in 1..=g.ports() {
            if g.neighbor(v, p).is_none() {
                out.push(End::new(v, p));
            }
        }
    }
    out
}

/// A random graph whose size is drawn uniformly from `1..=max_vertices`.
pub fn random_graph_upto<R: Rng>(rng: &mut R, ports: u8, labels: u16, max_vertices: usize) -> CayleyGraph<u16> {
    let n = rng.gen_range(1..=max_vertices);
    let density = rng.gen_range(0.0..0.6);
    random_graph(rng, ports, labels, n, density)
}

/// A random disk of radius `radius`: the disk around a random vertex of a
/// random graph.
pub fn random_disk<R: Rng>(
    rng: &mut R,
    ports: u8,
    labels: u16,
    radius: usize,
    max_vertices: usize,
) -> CayleyGraph<u16> {
    let x = random_graph_upto(rng, ports, labels, max_vertices);
    let v = rng.gen_range(0..x.vertex_count());
    x.disk_around(v, radius).0.into_graph()
}

/// A second graph that agrees with `x` on the disk of radius `k`.
///
/// Only vertices at distance at least `k + 1` are touched: labels beyond
/// `k + 1` are redrawn, and fresh vertices are hung on free ports of
/// vertices at distance `k + 1` or more. Returns `None` when `x` has
/// nothing beyond the disk to perturb.
pub fn agreeing_graph<R: Rng>(rng: &mut R, x: &CayleyGraph<u16>, k: usize, labels: u16) -> Option<CayleyGraph<u16>> {
    let depth = x.depths();
    let far: Vec<usize> = (0..x.vertex_count()).filter(|&v| depth[v] > k).collect();
    if far.is_empty() {
        return None;
    }
    let mut g = x.to_port_graph();
    let mut changed = false;
    for &v in &far {
        if depth[v] > k + 1 && labels > 1 && rng.gen_bool(0.5) {
            g.set_label(v, rng.gen_range(0..labels));
            changed = true;
        }
    }
    let hangs = rng.gen_range(1..=3);
    for i in 0..hangs {
        let &v = far.choose(rng).unwrap();
        let free: Vec<u8> = (1..=g.ports()).filter(|&p| g.neighbor(v, p).is_none()).collect();
        if let Some(&p) = free.choose(rng) {
            let w = g
                .add_vertex(VertexName::Raw(1_000_000 + i as u64), rng.gen_range(0..labels))
                .unwrap();
            g.add_edge(v, p, w, rng.gen_range(1..=g.ports())).unwrap();
            changed = true;
        }
    }
    if !changed {
        return None;
    }
    Some(CayleyGraph::canonicalize_at(&g, 0).unwrap())
}
