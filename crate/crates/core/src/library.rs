//! Ready-made local rules.

use std::collections::BTreeMap;

use crate::fixtures::{EAST, NORTH, SOUTH, WEST};
use crate::graph::{CayleyGraph, Disk, NameElem, Port, PortGraph, Suffix, VertexName, Word};
use crate::rule::{LocalRule, RuleParams};

/// The rule whose global step is the identity.
///
/// Each vertex reproduces itself together with its neighbours and incident
/// edges, so that neighbouring images overlap and the edges survive the
/// gluing.
pub fn identity_rule(ports: Port, labels: u16) -> LocalRule<u16> {
    let params = RuleParams::new(ports, labels, 0, usize::from(ports) + 1, 0).expect("valid identity parameters");
    LocalRule::from_fn("identity", params, |disk: &Disk<u16>| {
        let g = disk.to_port_graph();
        Some(rename(&g, |w| VertexName::elem(w.clone(), 0)))
    })
}

fn rename(g: &PortGraph<u16>, f: impl Fn(&Word) -> VertexName) -> PortGraph<u16> {
    let mut out = PortGraph::new(g.ports());
    for v in 0..g.vertex_count() {
        let VertexName::Path(w) = g.name(v) else { unreachable!() };
        out.add_vertex(f(w), *g.label(v)).unwrap();
    }
    for e in g.edges() {
        out.add_edge(e.0.vertex, e.0.port, e.1.vertex, e.1.port).unwrap();
    }
    out
}

/// Quadrants of an inflated vertex, as name suffixes.
const NW: Suffix = 0;
const NE: Suffix = 1;
const SW: Suffix = 2;
const SE: Suffix = 3;

/// The two quadrants facing side `p`, in a fixed order shared by both ends
/// of an edge.
fn side(p: Port) -> [Suffix; 2] {
    match p {
        NORTH => [NW, NE],
        SOUTH => [SW, SE],
        EAST => [NE, SE],
        WEST => [NW, SW],
        _ => unreachable!("compass ports are 1..=4"),
    }
}

/// Every vertex splits into a 2×2 block, and each edge `u:p - w:q` becomes
/// two edges between the quadrants of `u` facing `p` and those of `w`
/// facing `q`. On a grid this doubles both sides.
///
/// The image of a vertex is its own block plus, for every incident edge,
/// the two facing quadrants of the neighbour: at most 12 vertices.
pub fn inflating_grid_rule() -> LocalRule<u16> {
    let params = RuleParams::new(4, 1, 0, 12, 3).expect("valid grid parameters");
    LocalRule::from_fn("inflating-grid", params, |disk: &Disk<u16>| Some(inflate(disk)))
}

fn inflate(disk: &CayleyGraph<u16>) -> PortGraph<u16> {
    let names = disk.names();
    let mut g = PortGraph::new(4);
    let mut index: BTreeMap<(usize, Suffix), usize> = BTreeMap::new();
    let mut vertex = |g: &mut PortGraph<u16>, v: usize, z: Suffix| {
        *index.entry((v, z)).or_insert_with(|| {
            g.add_vertex(VertexName::Set([NameElem::new(names[v].clone(), z)].into()), 0)
                .unwrap()
        })
    };
    let [nw, ne, sw, se] = [NW, NE, SW, SE].map(|z| vertex(&mut g, 0, z));
    g.add_edge(nw, EAST, ne, WEST).unwrap();
    g.add_edge(sw, EAST, se, WEST).unwrap();
    g.add_edge(nw, SOUTH, sw, NORTH).unwrap();
    g.add_edge(ne, SOUTH, se, NORTH).unwrap();
    for p in 1..=4 {
        let Some(e) = disk.neighbor(0, p) else { continue };
        for (a, b) in side(p).into_iter().zip(side(e.port)) {
            let here = vertex(&mut g, 0, a);
            let there = vertex(&mut g, e.vertex, b);
            g.add_edge(here, p, there, e.port).unwrap();
        }
    }
    g
}

/// Over a two-port family with labels {0, 1}: every vertex takes the
/// parity of the labels of itself and its distinct neighbours.
///
/// Images carry the neighbours with their own new labels, which the
/// radius-1 disk determines, so that overlaps agree.
pub fn xor_label_rule() -> LocalRule<u16> {
    let params = RuleParams::new(2, 2, 1, 3, 0).expect("valid xor parameters");
    LocalRule::from_fn("xor", params, |disk: &Disk<u16>| {
        let names = disk.names();
        let depth = disk.depths();
        let parity = |v: usize| {
            let mut seen = vec![v];
            for p in 1..=2 {
                if let Some(e) = disk.neighbor(v, p) {
                    if !seen.contains(&e.vertex) {
                        seen.push(e.vertex);
                    }
                }
            }
            seen.iter().map(|&w| *disk.label(w)).sum::<u16>() % 2
        };
        let mut g = PortGraph::new(2);
        let mut index = BTreeMap::new();
        for v in (0..disk.vertex_count()).filter(|&v| depth[v] <= 1) {
            index.insert(
                v,
                g.add_vertex(VertexName::elem(names[v].clone(), 0), parity(v)).unwrap(),
            );
        }
        for p in 1..=2 {
            if let Some(e) = disk.neighbor(0, p) {
                g.add_edge(index[&0], p, index[&e.vertex], e.port).unwrap();
            }
        }
        Some(g)
    })
}

/// A broken variant of the identity: neighbours are copied with label 0.
/// Overlapping images then disagree on the label of any vertex labelled 1
/// next to another vertex, so the rule is not consistent.
pub fn mislabelling_rule(ports: Port) -> LocalRule<u16> {
    let params = RuleParams::new(ports, 2, 0, usize::from(ports) + 1, 0).expect("valid parameters");
    LocalRule::from_fn("mislabel", params, |disk: &Disk<u16>| {
        let mut g = rename(&disk.to_port_graph(), |w| VertexName::elem(w.clone(), 0));
        for v in 1..g.vertex_count() {
            g.set_label(v, 0);
        }
        Some(g)
    })
}

/// Looks a rule up by its CLI name. `identity` adapts to the given port
/// and label counts; `identity:<ports>:<labels>` fixes them.
pub fn by_name(name: &str, ports: Port, labels: u16) -> Option<LocalRule<u16>> {
    match name {
        "identity" => Some(identity_rule(ports, labels)),
        "inflating-grid" => Some(inflating_grid_rule()),
        "xor" => Some(xor_label_rule()),
        "mislabel" => Some(mislabelling_rule(ports)),
        _ => {
            let rest = name.strip_prefix("identity:")?;
            let (p, l) = rest.split_once(':')?;
            Some(identity_rule(p.parse().ok()?, l.parse().ok()?))
        }
    }
}

/// The consistent rules.
pub const NAMES: &[&str] = &["identity", "inflating-grid", "xor"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rule::{apply_localizable, iterate};

    #[test]
    fn identity_is_identity() {
        let f = identity_rule(3, 2);
        let x = fixtures::fig4();
        assert_eq!(apply_localizable(&f, &x).unwrap(), x);
    }

    #[test]
    fn grid_doubles() {
        let f = inflating_grid_rule();
        assert_eq!(apply_localizable(&f, &fixtures::pair()).unwrap(), fixtures::grid(4, 2));
        let sizes: Vec<usize> = iterate(&f, &fixtures::single(4, 0), 2)
            .unwrap()
            .iter()
            .map(|g| g.vertex_count())
            .collect();
        assert_eq!(sizes, [1, 4, 16]);
    }

    #[test]
    fn grid_image_has_twelve_vertices() {
        let x = fixtures::grid(3, 3);
        let centre = x.vertex_at(&"34.21".parse().unwrap()).unwrap();
        let disk = x.disk_around(centre, 0).0;
        let img = inflating_grid_rule().apply(&disk).unwrap().unwrap();
        assert_eq!(img.vertex_count(), 12);
        assert_eq!(img.edge_count(), 4 + 8);
    }

    #[test]
    fn xor_on_cycle() {
        let f = xor_label_rule();
        let x = fixtures::cycle(&[1, 0, 0, 0]);
        let y = apply_localizable(&f, &x).unwrap();
        assert_eq!(y.labels(), &[1, 1, 1, 0]);
    }
}
