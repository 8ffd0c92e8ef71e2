use std::fmt;

use super::word::{NameKey, Port, VertexName};
use super::{GraphError, Label};

/// One end of an edge: vertex index and port.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub vertex: usize,
    pub port: Port,
}

impl End {
    pub const fn new(vertex: usize, port: Port) -> Self {
        End { vertex, port }
    }
}

/// An edge `{u:i, v:j}`, stored with the smaller end first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub End, pub End);

impl Edge {
    pub fn new(a: End, b: End) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// A labeled port graph with named vertices.
///
/// Each port of each vertex carries at most one edge end; the adjacency is
/// stored per port so the invariant holds by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortGraph<L> {
    ports: Port,
    names: Vec<VertexName>,
    labels: Vec<L>,
    adj: Vec<Vec<Option<End>>>,
}

impl<L: Label> PortGraph<L> {
    pub fn new(ports: Port) -> Self {
        PortGraph {
            ports,
            names: Vec::new(),
            labels: Vec::new(),
            adj: Vec::new(),
        }
    }

    pub fn ports(&self) -> Port {
        self.ports
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &VertexName {
        &self.names[v]
    }

    pub fn names(&self) -> &[VertexName] {
        &self.names
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn neighbor(&self, v: usize, port: Port) -> Option<End> {
        self.adj[v][usize::from(port) - 1]
    }

    pub(crate) fn adjacency(&self) -> &[Vec<Option<End>>] {
        &self.adj
    }

    pub fn find(&self, name: &VertexName) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Adds a vertex. Names must be unique and name sets nonempty and
    /// pairwise disjoint.
    pub fn add_vertex(&mut self, name: VertexName, label: L) -> Result<usize, GraphError> {
        if let VertexName::Set(s) = &name {
            if s.is_empty() {
                return Err(GraphError::EmptyNameSet);
            }
        }
        let keys = name.elements();
        for (i, other) in self.names.iter().enumerate() {
            if other == &name {
                return Err(GraphError::DuplicateName(name.to_string()));
            }
            let ok = other.elements();
            if keys.iter().any(|k| ok.contains(k)) {
                return Err(GraphError::NameOverlap {
                    first: self.names[i].to_string(),
                    second: name.to_string(),
                });
            }
        }
        self.names.push(name);
        self.labels.push(label);
        self.adj.push(vec![None; usize::from(self.ports)]);
        Ok(self.names.len() - 1)
    }

    fn check_end(&self, e: End) -> Result<(), GraphError> {
        if e.vertex >= self.names.len() {
            return Err(GraphError::NoSuchVertex(e.vertex));
        }
        if e.port == 0 || e.port > self.ports {
            return Err(GraphError::BadPort {
                port: e.port,
                ports: self.ports,
            });
        }
        Ok(())
    }

    /// Adds the edge `{u:i, v:j}`. Re-adding an identical edge is a no-op.
    pub fn add_edge(&mut self, u: usize, i: Port, v: usize, j: Port) -> Result<(), GraphError> {
        let a = End::new(u, i);
        let b = End::new(v, j);
        self.check_end(a)?;
        self.check_end(b)?;
        if a == b {
            return Err(GraphError::PortConflict {
                vertex: self.names[u].to_string(),
                port: i,
            });
        }
        match (self.neighbor(u, i), self.neighbor(v, j)) {
            (Some(x), Some(y)) if x == b && y == a => return Ok(()),
            (None, None) => {}
            (Some(_), _) => {
                return Err(GraphError::PortConflict {
                    vertex: self.names[u].to_string(),
                    port: i,
                })
            }
            (_, Some(_)) => {
                return Err(GraphError::PortConflict {
                    vertex: self.names[v].to_string(),
                    port: j,
                })
            }
        }
        self.adj[u][usize::from(i) - 1] = Some(b);
        self.adj[v][usize::from(j) - 1] = Some(a);
        Ok(())
    }

    pub fn set_label(&mut self, v: usize, label: L) {
        self.labels[v] = label;
    }

    /// Every edge once, smaller end first, in ascending order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (v, ports) in self.adj.iter().enumerate() {
            for (p, e) in ports.iter().enumerate() {
                if let Some(e) = e {
                    let here = End::new(v, p as Port + 1);
                    if here < *e {
                        out.push(Edge(here, *e));
                    }
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Maps labels, keeping names and structure.
    pub fn map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> M) -> PortGraph<M> {
        PortGraph {
            ports: self.ports,
            names: self.names.clone(),
            labels: self.labels.iter().map(&mut f).collect(),
            adj: self.adj.clone(),
        }
    }

    /// Same graph with its vertices sorted by name, so that equal images
    /// compare equal regardless of construction order.
    pub fn normalized(&self) -> PortGraph<L> {
        let mut order: Vec<usize> = (0..self.vertex_count()).collect();
        order.sort_by(|&a, &b| name_sort_key(&self.names[a]).cmp(&name_sort_key(&self.names[b])));
        self.permuted(&order)
    }

    /// Vertex `order[k]` of `self` becomes vertex `k`.
    pub(crate) fn permuted(&self, order: &[usize]) -> PortGraph<L> {
        let mut inv = vec![0; order.len()];
        for (k, &v) in order.iter().enumerate() {
            inv[v] = k;
        }
        PortGraph {
            ports: self.ports,
            names: order.iter().map(|&v| self.names[v].clone()).collect(),
            labels: order.iter().map(|&v| self.labels[v].clone()).collect(),
            adj: order
                .iter()
                .map(|&v| {
                    self.adj[v]
                        .iter()
                        .map(|e| e.map(|e| End::new(inv[e.vertex], e.port)))
                        .collect()
                })
                .collect(),
        }
    }

    pub(crate) fn from_parts(ports: Port, names: Vec<VertexName>, labels: Vec<L>, adj: Vec<Vec<Option<End>>>) -> Self {
        PortGraph {
            ports,
            names,
            labels,
            adj,
        }
    }
}

fn name_sort_key(n: &VertexName) -> Vec<NameKey> {
    let mut k = n.elements();
    k.sort();
    k
}

impl<L: Label> fmt::Display for PortGraph<L> {
    /// Structured text record: one line per vertex, then one per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ports {}", self.ports)?;
        for (v, n) in self.names.iter().enumerate() {
            writeln!(f, "vertex {n} label {}", self.labels[v])?;
        }
        for Edge(a, b) in self.edges() {
            writeln!(
                f,
                "edge {}:{} -- {}:{}",
                self.names[a.vertex], a.port, self.names[b.vertex], b.port
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::word::Word;

    #[test]
    fn port_used_once() {
        let mut g = PortGraph::<u16>::new(2);
        let a = g.add_vertex(VertexName::Raw(0), 0).unwrap();
        let b = g.add_vertex(VertexName::Raw(1), 0).unwrap();
        let c = g.add_vertex(VertexName::Raw(2), 0).unwrap();
        g.add_edge(a, 1, b, 2).unwrap();
        g.add_edge(b, 2, a, 1).unwrap();
        assert!(matches!(g.add_edge(a, 1, c, 1), Err(GraphError::PortConflict { .. })));
        assert!(matches!(g.add_edge(a, 3, c, 1), Err(GraphError::BadPort { .. })));
        assert!(matches!(g.add_edge(c, 1, c, 1), Err(GraphError::PortConflict { .. })));
        g.add_edge(c, 1, c, 2).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn name_sets_are_disjoint() {
        let mut g = PortGraph::<u16>::new(1);
        g.add_vertex(VertexName::elem(Word::empty(), 1), 0).unwrap();
        let clash = VertexName::set([
            crate::graph::NameElem::new(Word::empty(), 1),
            crate::graph::NameElem::new(Word::empty(), 2),
        ]);
        assert!(matches!(g.add_vertex(clash, 0), Err(GraphError::NameOverlap { .. })));
        // a path name `ε` and the set {ε} denote the same vertex
        g.add_vertex(VertexName::epsilon(), 0).unwrap();
        assert!(g.add_vertex(VertexName::elem(Word::empty(), 0), 0).is_err());
    }
}
