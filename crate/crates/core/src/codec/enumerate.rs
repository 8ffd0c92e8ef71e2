//! Exhaustive generation of canonical disks and small canonical graphs.
//!
//! Shapes are grown directly in canonical numbering: vertices are completed
//! in index order and, within a vertex, ports ascending. Each free port is
//! left free, looped to a later free port of the same vertex, wired to a
//! free port of an already discovered later vertex, or wired to a brand new
//! vertex. New vertices are appended in discovery order, so every shape is
//! produced exactly once and already in canonical form.

use crate::graph::{CayleyGraph, Disk, End, Port};

use super::{encode_graph, CodecError};

struct Grower {
    ports: Port,
    radius: Option<usize>,
    max_vertices: usize,
    adj: Vec<Vec<Option<End>>>,
    depth: Vec<usize>,
    shapes: Vec<Vec<Vec<Option<End>>>>,
    labels: u16,
    count: u128,
    budget: u128,
}

impl Grower {
    fn active(&self, v: usize) -> bool {
        v < self.adj.len() && self.radius.is_none_or(|r| self.depth[v] <= r)
    }

    fn emit(&mut self) -> Result<(), CodecError> {
        self.count += u128::from(self.labels).saturating_pow(self.adj.len() as u32);
        if self.count > self.budget {
            return Err(CodecError::BudgetExceeded {
                reached: self.count.min(usize::MAX as u128) as usize,
            });
        }
        self.shapes.push(self.adj.clone());
        Ok(())
    }

    fn free(&self, v: usize, p: Port) -> bool {
        self.adj[v][usize::from(p) - 1].is_none()
    }

    fn link(&mut self, a: End, b: End) {
        self.adj[a.vertex][usize::from(a.port) - 1] = Some(b);
        self.adj[b.vertex][usize::from(b.port) - 1] = Some(a);
    }

    fn unlink(&mut self, a: End, b: End) {
        self.adj[a.vertex][usize::from(a.port) - 1] = None;
        self.adj[b.vertex][usize::from(b.port) - 1] = None;
    }

    fn grow(&mut self, v: usize, p: Port) -> Result<(), CodecError> {
        if !self.active(v) {
            return self.emit();
        }
        if p > self.ports {
            return self.grow(v + 1, 1);
        }
        if !self.free(v, p) {
            return self.grow(v, p + 1);
        }
        let here = End::new(v, p);
        // leave the port free
        self.grow(v, p + 1)?;
        // loop to a later port of v
        for q in p + 1..=self.ports {
            if self.free(v, q) {
                let there = End::new(v, q);
                self.link(here, there);
                self.grow(v, p + 1)?;
                self.unlink(here, there);
            }
        }
        // an already discovered later vertex
        for w in v + 1..self.adj.len() {
            for q in 1..=self.ports {
                if self.free(w, q) {
                    let there = End::new(w, q);
                    self.link(here, there);
                    self.grow(v, p + 1)?;
                    self.unlink(here, there);
                }
            }
        }
        // a new vertex
        if self.adj.len() < self.max_vertices {
            let w = self.adj.len();
            self.adj.push(vec![None; usize::from(self.ports)]);
            self.depth.push(self.depth[v] + 1);
            for q in 1..=self.ports {
                let there = End::new(w, q);
                self.link(here, there);
                self.grow(v, p + 1)?;
                self.unlink(here, there);
            }
            self.adj.pop();
            self.depth.pop();
        }
        Ok(())
    }
}

fn labelings(shapes: Vec<Vec<Vec<Option<End>>>>, ports: Port, labels: u16) -> Vec<CayleyGraph<u16>> {
    let mut out = Vec::new();
    for adj in shapes {
        let n = adj.len();
        let mut lab = vec![0u16; n];
        loop {
            out.push(CayleyGraph::from_canonical_parts(ports, lab.clone(), adj.clone()));
            let mut i = 0;
            while i < n && lab[i] + 1 == labels {
                lab[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            lab[i] += 1;
        }
    }
    out.sort_by_cached_key(|x| encode_graph(x).to_string());
    out
}

/// Every canonical disk of radius `radius` over `ports` ports and `labels`
/// labels, ordered by code string. Fails once more than `budget` disks
/// would be produced.
pub fn enumerate_disks(ports: Port, labels: u16, radius: usize, budget: usize) -> Result<Vec<Disk<u16>>, CodecError> {
    let shapes = grow(ports, labels, Some(radius), usize::MAX, budget)?;
    Ok(labelings(shapes, ports, labels)
        .into_iter()
        .map(|g| Disk::new_unchecked(g, radius))
        .collect())
}

/// Every canonical graph with at most `max_vertices` vertices, ordered by
/// code string.
pub fn enumerate_graphs(
    ports: Port,
    labels: u16,
    max_vertices: usize,
    budget: usize,
) -> Result<Vec<CayleyGraph<u16>>, CodecError> {
    let shapes = grow(ports, labels, None, max_vertices, budget)?;
    Ok(labelings(shapes, ports, labels))
}

fn grow(
    ports: Port,
    labels: u16,
    radius: Option<usize>,
    max_vertices: usize,
    budget: usize,
) -> Result<Vec<Vec<Vec<Option<End>>>>, CodecError> {
    assert!(ports >= 1 && labels >= 1);
    let mut g = Grower {
        ports,
        radius,
        max_vertices,
        adj: vec![vec![None; usize::from(ports)]],
        depth: vec![0],
        shapes: Vec::new(),
        labels,
        count: 0,
        budget: budget as u128,
    };
    g.grow(0, 1)?;
    Ok(g.shapes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn tiny_counts() {
        assert_eq!(enumerate_disks(1, 1, 0, 100).unwrap().len(), 2);
        assert_eq!(enumerate_disks(1, 2, 0, 100).unwrap().len(), 6);
    }

    #[test]
    fn disks_are_disks_and_distinct() {
        let disks = enumerate_disks(2, 2, 1, 100_000).unwrap();
        let mut seen = HashSet::new();
        for d in &disks {
            assert!(d.graph().is_disk_of_radius(1), "{}", encode_graph(d));
            assert!(seen.insert(d.graph().clone()));
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_disks(3, 2, 1, 50),
            Err(CodecError::BudgetExceeded { .. })
        ));
    }
}
