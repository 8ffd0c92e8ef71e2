//! Consistency, union and gluing of name-set graphs.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use super::port_graph::{End, PortGraph};
use super::word::{NameElem, NameKey, Port, VertexName, Word};
use super::{GraphError, Label};

/// Disjoint sets over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Adds a singleton and returns its id.
    pub fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.size.push(1);
        self.parent.len() - 1
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClashKind {
    /// The shared vertex carries different labels.
    Label,
    /// The shared port leads to different places.
    Port(Port),
}

/// Witness that a family of graphs cannot be glued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clash {
    pub kind: ClashKind,
    /// Name of the offending vertex in the first part that mentions it.
    pub vertex: String,
    /// The two parts that disagree (indices into the glued family).
    pub parts: (usize, usize),
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ClashKind::Label => write!(
                f,
                "label clash at {} between parts {} and {}",
                self.vertex, self.parts.0, self.parts.1
            ),
            ClashKind::Port(p) => write!(
                f,
                "port {}:{p} double-booked between parts {} and {}",
                self.vertex, self.parts.0, self.parts.1
            ),
        }
    }
}

/// Outcome of [`consistent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent { overlapping: bool },
    Inconsistent(Clash),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }

    /// Consistent with a nonempty overlap.
    pub fn is_non_trivial(&self) -> bool {
        matches!(self, Consistency::Consistent { overlapping: true })
    }
}

/// A glued family: one entry per merged vertex.
pub(crate) struct Glued<L, K> {
    pub keys: Vec<Vec<K>>,
    pub labels: Vec<L>,
    pub adj: Vec<Vec<Option<End>>>,
    /// `(part, vertex)` pairs merged into each class.
    pub members: Vec<Vec<(usize, usize)>>,
    pub class_of: HashMap<K, usize>,
}

/// Glues `parts`, identifying vertices that share a key. `keys(p, v)` lists
/// the keys of vertex `v` of part `p`.
pub(crate) fn glue_keyed<L, K>(
    ports: Port,
    parts: &[PortGraph<L>],
    mut keys: impl FnMut(usize, usize) -> Vec<K>,
) -> Result<Glued<L, K>, Clash>
where
    L: Label,
    K: Clone + Eq + Hash,
{
    let mut ids: HashMap<K, usize> = HashMap::new();
    let mut sets = DisjointSets::new(0);
    let mut first_id: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
    for (p, g) in parts.iter().enumerate() {
        let mut row = Vec::with_capacity(g.vertex_count());
        for v in 0..g.vertex_count() {
            let ks = keys(p, v);
            assert!(!ks.is_empty(), "every vertex has at least one name element");
            let mut head = None;
            for k in ks {
                let id = *ids.entry(k).or_insert_with(|| sets.push());
                match head {
                    None => head = Some(id),
                    Some(h) => {
                        sets.union(h, id);
                    }
                }
            }
            row.push(head.unwrap());
        }
        first_id.push(row);
    }

    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut vclass: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
    for (p, g) in parts.iter().enumerate() {
        let mut row = Vec::with_capacity(g.vertex_count());
        for (v, &id) in first_id[p].iter().enumerate().take(g.vertex_count()) {
            let root = sets.find(id);
            let next = class_index.len();
            let c = *class_index.entry(root).or_insert(next);
            if c == members.len() {
                members.push(Vec::new());
            }
            members[c].push((p, v));
            row.push(c);
        }
        vclass.push(row);
    }
    let n = members.len();

    let mut labels: Vec<Option<(L, usize)>> = vec![None; n];
    let mut adj: Vec<Vec<Option<(End, usize)>>> = vec![vec![None; usize::from(ports)]; n];
    for (p, g) in parts.iter().enumerate() {
        for v in 0..g.vertex_count() {
            let c = vclass[p][v];
            match &labels[c] {
                None => labels[c] = Some((g.label(v).clone(), p)),
                Some((l, q)) if l != g.label(v) => {
                    return Err(Clash {
                        kind: ClashKind::Label,
                        vertex: g.name(v).to_string(),
                        parts: (*q, p),
                    })
                }
                Some(_) => {}
            }
            for port in 1..=g.ports() {
                let Some(e) = g.neighbor(v, port) else { continue };
                let target = End::new(vclass[p][e.vertex], e.port);
                let slot = &mut adj[c][usize::from(port) - 1];
                let conflict = |q| Clash {
                    kind: ClashKind::Port(port),
                    vertex: g.name(v).to_string(),
                    parts: (q, p),
                };
                if target == End::new(c, port) {
                    return Err(conflict(p));
                }
                match slot {
                    None => *slot = Some((target, p)),
                    Some((t, q)) if *t != target => return Err(conflict(*q)),
                    Some(_) => {}
                }
            }
        }
    }

    let mut class_keys: Vec<Vec<K>> = vec![Vec::new(); n];
    let mut class_of = HashMap::with_capacity(ids.len());
    for (k, id) in ids {
        let c = class_index[&sets.find(id)];
        class_keys[c].push(k.clone());
        class_of.insert(k, c);
    }
    Ok(Glued {
        keys: class_keys,
        labels: labels.into_iter().map(|l| l.unwrap().0).collect(),
        adj: adj
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.map(|(t, _)| t)).collect())
            .collect(),
        members,
        class_of,
    })
}

fn common_ports<L: Label>(parts: &[PortGraph<L>]) -> Result<Port, GraphError> {
    let ports = parts.first().map_or(0, |g| g.ports());
    if let Some(g) = parts.iter().find(|g| g.ports() != ports) {
        return Err(GraphError::PortCountMismatch(ports, g.ports()));
    }
    Ok(ports)
}

/// Whether `g` and `h` agree on labels and port usage wherever they share a
/// vertex. Vertices are shared when their name sets intersect.
pub fn consistent<L: Label>(g: &PortGraph<L>, h: &PortGraph<L>) -> Consistency {
    let parts = [g.clone(), h.clone()];
    let Ok(ports) = common_ports(&parts) else {
        return Consistency::Inconsistent(Clash {
            kind: ClashKind::Port(0),
            vertex: "<port count>".into(),
            parts: (0, 1),
        });
    };
    match glue_keyed(ports, &parts, |p, v| parts[p].name(v).elements()) {
        Err(c) => Consistency::Inconsistent(c),
        Ok(glued) => Consistency::Consistent {
            overlapping: glued
                .members
                .iter()
                .any(|m| m.iter().any(|x| x.0 == 0) && m.iter().any(|x| x.0 == 1)),
        },
    }
}

/// The union of two consistent graphs.
pub fn union<L: Label>(g: &PortGraph<L>, h: &PortGraph<L>) -> Result<PortGraph<L>, GraphError> {
    glue_all(&[g.clone(), h.clone()])
}

/// Union of a whole family. Vertices whose name sets intersect are merged
/// into one vertex carrying the union of the names; the result does not
/// depend on the order of `parts`, up to vertex order.
pub fn glue_all<L: Label>(parts: &[PortGraph<L>]) -> Result<PortGraph<L>, GraphError> {
    let ports = common_ports(parts)?;
    let glued = glue_keyed(ports, parts, |p, v| parts[p].name(v).elements()).map_err(GraphError::InconsistentUnion)?;
    let names = glued
        .members
        .iter()
        .zip(&glued.keys)
        .map(|(members, keys)| {
            let (p0, v0) = members[0];
            let first = parts[p0].name(v0);
            if members.iter().all(|&(p, v)| parts[p].name(v) == first) {
                first.clone()
            } else {
                VertexName::set(keys.iter().filter_map(|k| match k {
                    NameKey::Elem(e) => Some(e.clone()),
                    NameKey::Raw(_) => None,
                }))
            }
        })
        .collect();
    Ok(PortGraph::from_parts(ports, names, glued.labels, glued.adj))
}

/// Prefixes every name of `g` with the path `u` (written u.G).
pub fn prefix<L: Label>(u: &Word, g: &PortGraph<L>) -> Result<PortGraph<L>, GraphError> {
    let names = g
        .names()
        .iter()
        .map(|n| match n {
            VertexName::Path(w) => Ok(VertexName::Path(u.concat(w))),
            VertexName::Set(s) => Ok(VertexName::set(
                s.iter().map(|e| NameElem::new(u.concat(&e.path), e.suffix)),
            )),
            VertexName::Raw(_) => Err(GraphError::RawNameUnprefixable(n.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PortGraph::from_parts(
        g.ports(),
        names,
        g.labels().to_vec(),
        g.adjacency().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(path: &str, z: u8) -> NameElem {
        NameElem::new(path.parse().unwrap(), z)
    }

    #[test]
    fn disjoint_sets_merge() {
        let mut s = DisjointSets::new(4);
        assert!(s.union(0, 1));
        assert!(s.union(2, 3));
        assert!(!s.union(1, 0));
        assert_ne!(s.find(0), s.find(2));
        s.union(1, 3);
        assert_eq!(s.find(0), s.find(2));
    }

    #[test]
    fn self_consistent() {
        let mut g = PortGraph::<u16>::new(2);
        let a = g.add_vertex(VertexName::elem(Word::empty(), 0), 0).unwrap();
        let b = g.add_vertex(VertexName::elem(Word::empty(), 1), 0).unwrap();
        g.add_edge(a, 1, b, 2).unwrap();
        assert_eq!(consistent(&g, &g), Consistency::Consistent { overlapping: true });
        assert_eq!(union(&g, &g).unwrap(), g);
    }

    #[test]
    fn label_clash() {
        let mut g = PortGraph::<u16>::new(1);
        g.add_vertex(VertexName::set([elem("", 1)]), 0).unwrap();
        let mut h = PortGraph::<u16>::new(1);
        h.add_vertex(VertexName::set([elem("", 1)]), 1).unwrap();
        match consistent(&g, &h) {
            Consistency::Inconsistent(c) => {
                assert_eq!(c.kind, ClashKind::Label);
                assert_eq!(c.vertex, "{1}");
            }
            other => panic!("expected clash, got {other:?}"),
        }
        assert!(matches!(union(&g, &h), Err(GraphError::InconsistentUnion(_))));
    }

    #[test]
    fn port_double_booked() {
        // g: {ε}:1 -- {1}:2, h: {ε}:1 -- {2}:3
        let mut g = PortGraph::<u16>::new(3);
        let e = g.add_vertex(VertexName::elem(Word::empty(), 0), 0).unwrap();
        let one = g.add_vertex(VertexName::elem(Word::empty(), 1), 0).unwrap();
        g.add_edge(e, 1, one, 2).unwrap();
        let mut h = PortGraph::<u16>::new(3);
        let e = h.add_vertex(VertexName::elem(Word::empty(), 0), 0).unwrap();
        let two = h.add_vertex(VertexName::elem(Word::empty(), 2), 0).unwrap();
        h.add_edge(e, 1, two, 3).unwrap();
        match consistent(&g, &h) {
            Consistency::Inconsistent(c) => {
                assert_eq!(c.kind, ClashKind::Port(1));
                assert_eq!(c.vertex, "{ε}");
            }
            other => panic!("expected clash, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_union() {
        let mut g = PortGraph::<u16>::new(1);
        g.add_vertex(VertexName::elem(Word::empty(), 1), 0).unwrap();
        let mut h = PortGraph::<u16>::new(1);
        h.add_vertex(VertexName::elem(Word::empty(), 2), 0).unwrap();
        assert_eq!(consistent(&g, &h), Consistency::Consistent { overlapping: false });
        let u = union(&g, &h).unwrap();
        assert_eq!(u.vertex_count(), 2);
        assert_eq!(u.edge_count(), 0);
    }

    #[test]
    fn intersecting_sets_merge() {
        let mut g = PortGraph::<u16>::new(1);
        g.add_vertex(VertexName::set([elem("", 1), elem("12", 2)]), 0).unwrap();
        let mut h = PortGraph::<u16>::new(1);
        h.add_vertex(VertexName::set([elem("12", 2), elem("34", 0)]), 0)
            .unwrap();
        let u = union(&g, &h).unwrap();
        assert_eq!(u.vertex_count(), 1);
        assert_eq!(u.name(0), &VertexName::set([elem("", 1), elem("12", 2), elem("34", 0)]));
    }

    #[test]
    fn glue_empty_and_single() {
        let empty: Vec<PortGraph<u16>> = Vec::new();
        assert!(glue_all(&empty).unwrap().is_empty());
        let mut g = PortGraph::<u16>::new(2);
        g.add_vertex(VertexName::epsilon(), 3).unwrap();
        assert_eq!(glue_all(&[g.clone()]).unwrap(), g);
    }

    #[test]
    fn prefix_examples() {
        let mut g = PortGraph::<u16>::new(4);
        g.add_vertex(VertexName::set([elem("", 0), elem("34", 1)]), 0).unwrap();
        assert_eq!(prefix(&Word::empty(), &g).unwrap(), g);
        let p = prefix(&"12".parse().unwrap(), &g).unwrap();
        assert_eq!(p.name(0), &VertexName::set([elem("12", 0), elem("12.34", 1)]));
        let mut raw = PortGraph::<u16>::new(1);
        raw.add_vertex(VertexName::Raw(7), 0).unwrap();
        assert!(matches!(
            prefix(&Word::empty(), &raw),
            Err(GraphError::RawNameUnprefixable(_))
        ));
    }
}
