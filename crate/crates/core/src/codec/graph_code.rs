//! Depth-first string codes for canonical graphs.
//!
//! A code is one word per vertex in DFS order (ports ascending):
//!
//! ```text
//! $ label (i,j)|…| … ; (a,b)(a,b)…
//! ```
//!
//! After the label come the back edges of the vertex, each written as its
//! port pair followed by one bar per step up the DFS tree to the other end
//! (no bars for a self-loop, which is written once from its lower port).
//! After `;` comes the path to the next vertex in DFS order: steps up the
//! tree, then the tree edge creating that vertex.

use std::fmt;
use std::str::FromStr;

use crate::graph::{canonical_from, CayleyGraph, End, Label, Port};

use super::CodecError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphToken {
    Dollar,
    Semicolon,
    Bar,
    Label(u16),
    Pair(Port, Port),
}

impl fmt::Display for GraphToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphToken::Dollar => f.write_str("$"),
            GraphToken::Semicolon => f.write_str(";"),
            GraphToken::Bar => f.write_str("|"),
            GraphToken::Label(l) => write!(f, "{l}"),
            GraphToken::Pair(i, j) => write!(f, "({i},{j})"),
        }
    }
}

/// A token sequence. `Display` and `FromStr` use the byte format
/// `$`, `;`, `|`, `(i,j)` and decimal labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GraphCode(Vec<GraphToken>);

impl GraphCode {
    pub fn new(tokens: Vec<GraphToken>) -> Self {
        GraphCode(tokens)
    }

    pub fn tokens(&self) -> &[GraphToken] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for GraphCode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, CodecError> {
        let bytes = s.trim_end().as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        let err = |position: usize, expected: &str| CodecError::Parse {
            position,
            expected: expected.to_string(),
        };
        let number = |i: &mut usize| -> Option<u32> {
            let start = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            std::str::from_utf8(&bytes[start..*i]).ok()?.parse().ok()
        };
        while i < bytes.len() {
            match bytes[i] {
                b'$' => {
                    out.push(GraphToken::Dollar);
                    i += 1;
                }
                b';' => {
                    out.push(GraphToken::Semicolon);
                    i += 1;
                }
                b'|' => {
                    out.push(GraphToken::Bar);
                    i += 1;
                }
                b'(' => {
                    i += 1;
                    let a = number(&mut i).ok_or_else(|| err(i, "port number"))?;
                    if bytes.get(i) != Some(&b',') {
                        return Err(err(i, "','"));
                    }
                    i += 1;
                    let b = number(&mut i).ok_or_else(|| err(i, "port number"))?;
                    if bytes.get(i) != Some(&b')') {
                        return Err(err(i, "')'"));
                    }
                    i += 1;
                    let port = |p: u32, at| Port::try_from(p).map_err(|_| err(at, "port below 256"));
                    out.push(GraphToken::Pair(port(a, i)?, port(b, i)?));
                }
                c if c.is_ascii_digit() => {
                    let at = i;
                    let l = number(&mut i).ok_or_else(|| err(at, "label"))?;
                    let l = u16::try_from(l).map_err(|_| err(at, "label below 65536"))?;
                    out.push(GraphToken::Label(l));
                }
                _ => return Err(err(i, "one of $ ; | ( or a digit")),
            }
        }
        Ok(GraphCode(out))
    }
}

/// DFS skeleton shared by the numeric and the generic encoders.
struct Dfs {
    order: Vec<usize>,
    /// `(parent, parent port, own port)` of the tree edge entering a vertex.
    tree: Vec<Option<(usize, Port, Port)>>,
    depth: Vec<usize>,
    pre: Vec<usize>,
}

fn dfs<L: Label>(x: &CayleyGraph<L>) -> Dfs {
    let n = x.vertex_count();
    let mut pre = vec![usize::MAX; n];
    let mut tree = vec![None; n];
    let mut depth = vec![0; n];
    let mut order = vec![0];
    pre[0] = 0;
    let mut stack: Vec<(usize, Port)> = vec![(0, 1)];
    while let Some(top) = stack.last_mut() {
        let (v, p) = *top;
        if p > x.ports() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        if let Some(e) = x.neighbor(v, p) {
            if pre[e.vertex] == usize::MAX {
                pre[e.vertex] = order.len();
                order.push(e.vertex);
                tree[e.vertex] = Some((v, p, e.port));
                depth[e.vertex] = depth[v] + 1;
                stack.push((e.vertex, 1));
            }
        }
    }
    Dfs {
        order,
        tree,
        depth,
        pre,
    }
}

fn encode_with<L: Label>(x: &CayleyGraph<L>, mut label: impl FnMut(&L, &mut Vec<GraphToken>)) -> Vec<GraphToken> {
    let d = dfs(x);
    let mut out = Vec::new();
    for (k, &v) in d.order.iter().enumerate() {
        out.push(GraphToken::Dollar);
        label(x.label(v), &mut out);
        for i in 1..=x.ports() {
            let Some(e) = x.neighbor(v, i) else { continue };
            if d.tree[v].is_some_and(|(p, _, b)| p == e.vertex && b == i) {
                continue;
            }
            let bars = if e.vertex == v {
                if i > e.port {
                    continue;
                }
                0
            } else if d.pre[e.vertex] < d.pre[v] {
                d.depth[v] - d.depth[e.vertex]
            } else {
                continue;
            };
            out.push(GraphToken::Pair(i, e.port));
            out.extend(std::iter::repeat_n(GraphToken::Bar, bars));
        }
        out.push(GraphToken::Semicolon);
        if let Some(&next) = d.order.get(k + 1) {
            let (parent, a, b) = d.tree[next].unwrap();
            let mut cur = v;
            while cur != parent {
                let (up, pa, pb) = d.tree[cur].unwrap();
                out.push(GraphToken::Pair(pb, pa));
                cur = up;
            }
            out.push(GraphToken::Pair(a, b));
        }
    }
    out
}

/// DFS code of a graph labelled by indices into Σ.
pub fn encode_graph(x: &CayleyGraph<u16>) -> GraphCode {
    GraphCode(encode_with(x, |l, out| out.push(GraphToken::Label(*l))))
}

/// DFS code of a graph with arbitrary labels, written with their `Display`
/// form in place of the label index. Used to key and sort disks whose
/// labels are not plain indices.
pub fn code_string<L: Label>(x: &CayleyGraph<L>) -> String {
    let mut s = String::new();
    let mut labels = Vec::new();
    let tokens = encode_with(x, |l, out| {
        labels.push(l.to_string());
        out.push(GraphToken::Label(0));
    });
    let mut next = labels.into_iter();
    for t in tokens {
        match t {
            GraphToken::Label(_) => s.push_str(&next.next().unwrap()),
            t => s.push_str(&t.to_string()),
        }
    }
    s
}

/// Rebuilds the canonical graph of a code over `ports` ports.
pub fn decode_graph(code: &GraphCode, ports: Port) -> Result<CayleyGraph<u16>, CodecError> {
    let t = code.tokens();
    let mut adj: Vec<Vec<Option<End>>> = Vec::new();
    let mut labels: Vec<u16> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();
    let mut pending: Option<usize> = None;
    let mut pos = 0;

    let expect = |pos: usize, what: &str| CodecError::Parse {
        position: pos,
        expected: what.to_string(),
    };
    let check_port = |p: Port, pos: usize| {
        if p == 0 || p > ports {
            Err(expect(pos, &format!("ports in 1..={ports}")))
        } else {
            Ok(())
        }
    };
    let new_vertex = |adj: &mut Vec<Vec<Option<End>>>, labels: &mut Vec<u16>| {
        adj.push(vec![None; usize::from(ports)]);
        labels.push(0);
        adj.len() - 1
    };

    if t.is_empty() {
        return Err(expect(0, "'$'"));
    }
    while pos < t.len() {
        if t[pos] != GraphToken::Dollar {
            return Err(expect(pos, "'$'"));
        }
        pos += 1;
        let GraphToken::Label(label) = t.get(pos).copied().ok_or_else(|| expect(pos, "label"))? else {
            return Err(expect(pos, "label"));
        };
        pos += 1;
        let v = if adj.is_empty() {
            parent.push(None);
            depth.push(0);
            new_vertex(&mut adj, &mut labels)
        } else {
            pending
                .take()
                .ok_or_else(|| expect(pos - 2, "a path to a new vertex before '$'"))?
        };
        labels[v] = label;

        while let Some(&GraphToken::Pair(i, j)) = t.get(pos) {
            check_port(i, pos)?;
            check_port(j, pos)?;
            pos += 1;
            let mut bars = 0;
            while t.get(pos) == Some(&GraphToken::Bar) {
                bars += 1;
                pos += 1;
            }
            if bars > depth[v] {
                return Err(CodecError::DanglingBacktrack {
                    position: pos,
                    bars,
                    depth: depth[v],
                });
            }
            let mut w = v;
            for _ in 0..bars {
                w = parent[w].unwrap();
            }
            if (w == v && i == j) || adj[v][usize::from(i) - 1].is_some() || adj[w][usize::from(j) - 1].is_some() {
                return Err(CodecError::PortReuse {
                    position: pos,
                    vertex: v,
                    port: i,
                });
            }
            adj[v][usize::from(i) - 1] = Some(End::new(w, j));
            adj[w][usize::from(j) - 1] = Some(End::new(v, i));
        }
        if t.get(pos) != Some(&GraphToken::Semicolon) {
            return Err(expect(pos, "'(' or ';'"));
        }
        pos += 1;

        let mut cur = v;
        while let Some(&GraphToken::Pair(s, q)) = t.get(pos) {
            check_port(s, pos)?;
            check_port(q, pos)?;
            if pending.is_some() {
                return Err(expect(pos, "'$' after the new vertex"));
            }
            match adj[cur][usize::from(s) - 1] {
                Some(e) if e.port == q => cur = e.vertex,
                Some(_) => return Err(CodecError::BadPath { position: pos }),
                None => {
                    let n = new_vertex(&mut adj, &mut labels);
                    parent.push(Some(cur));
                    depth.push(depth[cur] + 1);
                    adj[cur][usize::from(s) - 1] = Some(End::new(n, q));
                    adj[n][usize::from(q) - 1] = Some(End::new(cur, s));
                    pending = Some(n);
                }
            }
            pos += 1;
        }
        if pending.is_none() && pos < t.len() {
            return Err(expect(pos, "a path to a new vertex"));
        }
    }
    if pending.is_some() {
        return Err(expect(t.len(), "'$' starting the word of the new vertex"));
    }
    let graph = canonical_from(ports, |v, p| adj[v][usize::from(p) - 1], |v| labels[v], 0, None).graph;
    Ok(graph)
}

/// Token check: every pair uses ports in `1..=ports`.
pub fn uses_alphabet(code: &GraphCode, ports: Port, labels: u16) -> bool {
    code.tokens().iter().all(|t| match *t {
        GraphToken::Pair(i, j) => (1..=ports).contains(&i) && (1..=ports).contains(&j),
        GraphToken::Label(l) => l < labels,
        _ => true,
    })
}

/// A code file: a header line `ports=<d> labels=<σ0,σ1,...>` then the code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub ports: Port,
    pub labels: Vec<String>,
    pub code: GraphCode,
}

impl GraphFile {
    /// Wraps a graph, naming labels `0..labels`.
    pub fn from_graph(x: &CayleyGraph<u16>, labels: u16) -> Self {
        GraphFile {
            ports: x.ports(),
            labels: (0..labels).map(|l| l.to_string()).collect(),
            code: encode_graph(x),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CodecError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| CodecError::Header("empty file".into()))?;
        let mut ports = None;
        let mut labels = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("ports", v)) => {
                    ports = Some(
                        v.parse()
                            .map_err(|_| CodecError::Header(format!("bad port count {v}")))?,
                    )
                }
                Some(("labels", v)) => labels = Some(v.split(',').map(str::to_string).collect::<Vec<_>>()),
                _ => return Err(CodecError::Header(format!("unknown field {field}"))),
            }
        }
        let ports = ports.ok_or_else(|| CodecError::Header("missing ports=".into()))?;
        let labels = labels.ok_or_else(|| CodecError::Header("missing labels=".into()))?;
        let code: GraphCode = lines.collect::<Vec<_>>().join("").parse()?;
        Ok(GraphFile { ports, labels, code })
    }

    pub fn graph(&self) -> Result<CayleyGraph<u16>, CodecError> {
        let sigma = self.labels.len();
        if let Some(l) = self.code.tokens().iter().find_map(|t| match t {
            GraphToken::Label(l) if usize::from(*l) >= sigma => Some(*l),
            _ => None,
        }) {
            return Err(CodecError::Header(format!("label {l} not declared (|Σ| = {sigma})")));
        }
        decode_graph(&self.code, self.ports)
    }
}

impl fmt::Display for GraphFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ports={} labels={}", self.ports, self.labels.join(","))?;
        writeln!(f, "{}", self.code)
    }
}
