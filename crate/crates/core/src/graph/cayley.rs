use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use super::port_graph::{Edge, End, PortGraph};
use super::word::{Port, Step, VertexName, Word};
use super::{GraphError, Label};

/// A pointed, connected port graph in canonical form.
///
/// Vertex `0` is the pointer. Vertices are numbered in the order of their
/// canonical names, the least path (length first, then lexicographic on
/// port pairs) reaching them from the pointer. Two pointed graphs related by
/// a port- and label-preserving isomorphism fixing the pointer have equal
/// canonical forms, so `==` is pointed isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CayleyGraph<L> {
    ports: Port,
    labels: Vec<L>,
    adj: Vec<Vec<Option<End>>>,
}

/// Result of a canonical breadth-first traversal: the graph plus, for every
/// canonical vertex, the source vertex it came from.
pub(crate) struct Canon<L> {
    pub graph: CayleyGraph<L>,
    pub origin: Vec<usize>,
}

/// Canonical traversal from `start`.
///
/// With `radius = Some(r)` this builds the disk of radius `r`: every vertex
/// within distance `r`, every edge incident to one of them, and the far
/// endpoints of those edges. Edges between two vertices at distance `r + 1`
/// are not part of the disk.
pub(crate) fn canonical_from<L: Clone>(
    ports: Port,
    neighbor: impl Fn(usize, Port) -> Option<End>,
    label: impl Fn(usize) -> L,
    start: usize,
    radius: Option<usize>,
) -> Canon<L> {
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut origin = vec![start];
    let mut depth = vec![0usize];
    index.insert(start, 0);
    let mut cursor = 0;
    while cursor < origin.len() {
        let d = depth[cursor];
        if radius.is_some_and(|r| d > r) {
            break;
        }
        let src = origin[cursor];
        for p in 1..=ports {
            if let Some(e) = neighbor(src, p) {
                if let Entry::Vacant(slot) = index.entry(e.vertex) {
                    slot.insert(origin.len());
                    origin.push(e.vertex);
                    depth.push(d + 1);
                }
            }
        }
        cursor += 1;
    }
    let interior = |k: usize| radius.is_none_or(|r| depth[k] <= r);
    let mut adj = Vec::with_capacity(origin.len());
    for (k, &src) in origin.iter().enumerate() {
        let mut row = vec![None; usize::from(ports)];
        for p in 1..=ports {
            if let Some(e) = neighbor(src, p) {
                let Some(&w) = index.get(&e.vertex) else {
                    continue;
                };
                if interior(k) || interior(w) {
                    row[usize::from(p) - 1] = Some(End::new(w, e.port));
                }
            }
        }
        adj.push(row);
    }
    let labels = origin.iter().map(|&v| label(v)).collect();
    Canon {
        graph: CayleyGraph { ports, labels, adj },
        origin,
    }
}

impl<L: Label> CayleyGraph<L> {
    /// The one-vertex graph.
    pub fn single(ports: Port, label: L) -> Self {
        CayleyGraph {
            ports,
            labels: vec![label],
            adj: vec![vec![None; usize::from(ports)]],
        }
    }

    /// Canonical form of `g` pointed at `pointer`.
    ///
    /// Fails if `pointer` is missing or some vertex of `g` is unreachable
    /// from it.
    pub fn canonicalize(g: &PortGraph<L>, pointer: &VertexName) -> Result<Self, GraphError> {
        let start = g
            .find(pointer)
            .ok_or_else(|| GraphError::NoPointer(pointer.to_string()))?;
        Self::canonicalize_at(g, start)
    }

    pub fn canonicalize_at(g: &PortGraph<L>, start: usize) -> Result<Self, GraphError> {
        if start >= g.vertex_count() {
            return Err(GraphError::NoSuchVertex(start));
        }
        let c = canonical_from(g.ports(), |v, p| g.neighbor(v, p), |v| g.label(v).clone(), start, None);
        if c.origin.len() != g.vertex_count() {
            let seen: HashSet<usize> = c.origin.iter().copied().collect();
            let missing = (0..g.vertex_count()).find(|v| !seen.contains(v)).unwrap();
            return Err(GraphError::DisconnectedInput(g.name(missing).to_string()));
        }
        Ok(c.graph)
    }

    pub(crate) fn from_canonical_parts(ports: Port, labels: Vec<L>, adj: Vec<Vec<Option<End>>>) -> Self {
        CayleyGraph { ports, labels, adj }
    }

    pub fn ports(&self) -> Port {
        self.ports
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn pointer_label(&self) -> &L {
        &self.labels[0]
    }

    pub fn neighbor(&self, v: usize, port: Port) -> Option<End> {
        self.adj[v][usize::from(port) - 1]
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (v, row) in self.adj.iter().enumerate() {
            for (p, e) in row.iter().enumerate() {
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

    /// Canonical name of every vertex.
    pub fn names(&self) -> Vec<Word> {
        let mut names: Vec<Word> = Vec::with_capacity(self.vertex_count());
        names.push(Word::empty());
        for v in 1..self.vertex_count() {
            let (parent, step) = self.parent(v);
            names.push(names[parent].then(step));
        }
        names
    }

    pub fn name(&self, v: usize) -> Word {
        let mut steps = Vec::new();
        let mut cur = v;
        while cur != 0 {
            let (parent, step) = self.parent(cur);
            steps.push(step);
            cur = parent;
        }
        steps.reverse();
        Word::from_steps(steps)
    }

    /// Discovering vertex and step of `v > 0` in the canonical traversal:
    /// its least-indexed neighbour, left through that neighbour's least port
    /// leading to `v`.
    fn parent(&self, v: usize) -> (usize, Step) {
        let mut best: Option<(usize, Step)> = None;
        for e in self.adj[v].iter().flatten() {
            if e.vertex == v {
                continue;
            }
            let u = e.vertex;
            let p = e.port;
            let b = self.adj[u][usize::from(p) - 1].unwrap().port;
            let cand = (u, Step::new(p, b));
            if best.is_none_or(|x| cand < x) {
                best = Some(cand);
            }
        }
        best.expect("canonical graphs are connected")
    }

    /// Breadth-first distance of every vertex from the pointer.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.vertex_count()];
        for v in 1..self.vertex_count() {
            depth[v] = depth[self.parent(v).0] + 1;
        }
        depth
    }

    /// Largest distance from the pointer.
    pub fn eccentricity(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Endpoint of the path `w` from the pointer.
    pub fn vertex_at(&self, w: &Word) -> Option<usize> {
        self.walk_from(0, w)
    }

    pub fn walk_from(&self, start: usize, w: &Word) -> Option<usize> {
        let mut v = start;
        for s in w.steps() {
            if s.out == 0 || s.out > self.ports {
                return None;
            }
            match self.neighbor(v, s.out) {
                Some(e) if e.port == s.into => v = e.vertex,
                _ => return None,
            }
        }
        Some(v)
    }

    /// The same graph pointed at the endpoint of `u` (written X_u).
    pub fn shift(&self, u: &Word) -> Result<Self, GraphError> {
        let v = self.vertex_at(u).ok_or_else(|| GraphError::NoSuchPath(u.to_string()))?;
        Ok(self.repoint(v))
    }

    /// The same graph pointed at vertex `v`.
    pub fn repoint(&self, v: usize) -> Self {
        canonical_from(
            self.ports,
            |x, p| self.neighbor(x, p),
            |x| self.labels[x].clone(),
            v,
            None,
        )
        .graph
    }

    /// The disk of radius `r` around the pointer (written X^r).
    pub fn disk(&self, r: usize) -> Disk<L> {
        self.disk_around(0, r).0
    }

    /// The disk of radius `r` around vertex `v`, together with the vertex of
    /// `self` each disk vertex came from.
    pub fn disk_around(&self, v: usize, r: usize) -> (Disk<L>, Vec<usize>) {
        let c = canonical_from(
            self.ports,
            |x, p| self.neighbor(x, p),
            |x| self.labels[x].clone(),
            v,
            Some(r),
        );
        (
            Disk {
                graph: c.graph,
                radius: r,
            },
            c.origin,
        )
    }

    /// Whether this graph is its own disk of radius `r`.
    pub fn is_disk_of_radius(&self, r: usize) -> bool {
        self.disk(r).graph == *self
    }

    /// Gromov-Hausdorff-Cantor distance: `0` when equal, otherwise `2^-r`
    /// for the least radius `r` at which the disks differ.
    pub fn distance(&self, other: &Self) -> DyadicDistance {
        if self == other {
            return DyadicDistance::ZERO;
        }
        let limit = self.eccentricity().max(other.eccentricity()) + 1;
        for r in 0..=limit {
            if self.disk(r) != other.disk(r) {
                return DyadicDistance::pow2(r as u32);
            }
        }
        unreachable!("disks past both eccentricities are the whole graphs")
    }

    pub fn map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> M) -> CayleyGraph<M> {
        CayleyGraph {
            ports: self.ports,
            labels: self.labels.iter().map(&mut f).collect(),
            adj: self.adj.clone(),
        }
    }

    /// Port graph whose vertices are named by their canonical paths.
    pub fn to_port_graph(&self) -> PortGraph<L> {
        PortGraph::from_parts(
            self.ports,
            self.names().into_iter().map(VertexName::Path).collect(),
            self.labels.clone(),
            self.adj.clone(),
        )
    }

    /// Brute-force check of the four generalized Cayley graph conditions on
    /// the path language truncated at `max_len`. Returns the violations.
    pub fn cayley_violations(&self, max_len: usize) -> Vec<String> {
        let mut out = Vec::new();
        // language: word -> endpoint
        let mut lang: HashMap<Word, usize> = HashMap::new();
        let mut frontier = vec![(Word::empty(), 0usize)];
        lang.insert(Word::empty(), 0);
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, v) in &frontier {
                for a in 1..=self.ports {
                    for b in 1..=self.ports {
                        let s = Step::new(a, b);
                        if let Some(x) = self.walk_from(*v, &Word::from_steps([s])) {
                            let wx = w.then(s);
                            lang.insert(wx.clone(), x);
                            next.push((wx, x));
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut by_end: HashMap<usize, Vec<&Word>> = HashMap::new();
        for (w, &v) in &lang {
            // 1: prefix closure
            if !w.is_empty() {
                let prefix = Word::from_steps(w.steps()[..w.len() - 1].iter().copied());
                if !lang.contains_key(&prefix) {
                    out.push(format!("condition 1: {w} in L but not its prefix"));
                }
            }
            by_end.entry(v).or_default().push(w);
        }
        for (w, &v) in &lang {
            // 3: every step can be undone
            if let Some(last) = w.steps().last() {
                if w.len() < max_len {
                    let back = w.then(last.reversed());
                    let prefix = Word::from_steps(w.steps()[..w.len() - 1].iter().copied());
                    match lang.get(&back) {
                        Some(&x) if x == lang[&prefix] => {}
                        _ => out.push(format!("condition 3: {w} cannot be undone")),
                    }
                }
            }
            let _ = v;
        }
        for (v, words) in &by_end {
            // 2 and 4: equivalent words have identical one-step continuations,
            // and a port leads to one entry port only.
            let cont = |w: &Word| {
                let mut c: Vec<(Step, usize)> = Vec::new();
                for a in 1..=self.ports {
                    for b in 1..=self.ports {
                        let s = Step::new(a, b);
                        if let Some(&x) = lang.get(&w.then(s)) {
                            c.push((s, x));
                        }
                    }
                }
                c
            };
            let short: Vec<&&Word> = words.iter().filter(|w| w.len() < max_len).collect();
            if let Some(first) = short.first() {
                let reference = cont(first);
                for a in 1..=self.ports {
                    let targets: Vec<_> = reference.iter().filter(|(s, _)| s.out == a).collect();
                    if targets.len() > 1 {
                        out.push(format!("condition 4: port {a} of vertex {v} has two targets"));
                    }
                }
                for w in short.iter().skip(1) {
                    if cont(w) != reference {
                        out.push(format!("condition 2: {w} and {first} disagree"));
                    }
                }
            }
        }
        out
    }
}

impl<L: Label> fmt::Display for CayleyGraph<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        writeln!(f, "ports {}", self.ports)?;
        writeln!(f, "pointer ε")?;
        for (v, n) in names.iter().enumerate() {
            writeln!(f, "vertex {n} label {}", self.labels[v])?;
        }
        for Edge(a, b) in self.edges() {
            writeln!(
                f,
                "edge {}:{} -- {}:{}",
                names[a.vertex], a.port, names[b.vertex], b.port
            )?;
        }
        Ok(())
    }
}

/// A canonical disk together with its radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disk<L> {
    graph: CayleyGraph<L>,
    radius: usize,
}

impl<L: Label> Disk<L> {
    /// Wraps `graph` if it is a disk of radius `radius`.
    pub fn new(graph: CayleyGraph<L>, radius: usize) -> Result<Self, GraphError> {
        if !graph.is_disk_of_radius(radius) {
            return Err(GraphError::NotADisk(radius));
        }
        Ok(Disk { graph, radius })
    }

    pub(crate) fn new_unchecked(graph: CayleyGraph<L>, radius: usize) -> Self {
        Disk { graph, radius }
    }

    pub fn graph(&self) -> &CayleyGraph<L> {
        &self.graph
    }

    pub fn into_graph(self) -> CayleyGraph<L> {
        self.graph
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

impl<L> Deref for Disk<L> {
    type Target = CayleyGraph<L>;

    fn deref(&self) -> &CayleyGraph<L> {
        &self.graph
    }
}

/// A distance value `0` or `2^-r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicDistance(Option<u32>);

impl DyadicDistance {
    pub const ZERO: DyadicDistance = DyadicDistance(None);

    pub const fn pow2(r: u32) -> Self {
        DyadicDistance(Some(r))
    }

    /// `Some(r)` for `2^-r`, `None` for zero.
    pub fn exponent(self) -> Option<u32> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    pub fn value(self) -> f64 {
        match self.0 {
            None => 0.0,
            Some(r) => (-(r as f64)).exp2(),
        }
    }
}

impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(r) => write!(f, "1/2^{r}"),
        }
    }
}

/// Shortest-path distances from `start` over an arbitrary adjacency.
pub(crate) fn bfs_depths(
    ports: Port,
    neighbor: impl Fn(usize, Port) -> Option<End>,
    start: usize,
    limit: Option<usize>,
) -> HashMap<usize, usize> {
    let mut seen = HashMap::new();
    seen.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = seen[&v];
        if limit.is_some_and(|l| d >= l) {
            continue;
        }
        for p in 1..=ports {
            if let Some(e) = neighbor(v, p) {
                if let Entry::Vacant(slot) = seen.entry(e.vertex) {
                    slot.insert(d + 1);
                    queue.push_back(e.vertex);
                }
            }
        }
    }
    seen
}
