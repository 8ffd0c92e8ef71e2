use std::collections::HashSet;

use cgd::codec::{decode_graph, encode_graph, enumerate_disks, enumerate_graphs, GraphCode};
use cgd::graph::{glue_all, prefix, CayleyGraph, DyadicDistance, End, PortGraph, VertexName};
use cgd::library::identity_rule;
use cgd::random::{agreeing_graph, random_graph_upto, seeded};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn graph_from_seed(seed: u64, ports: u8, labels: u16, max: usize) -> CayleyGraph<u16> {
    random_graph_upto(&mut seeded(seed), ports, labels, max)
}

/// Every port graph on `n` vertices: each partial matching of the
/// `n * ports` port ends, with every labelling.
fn all_port_graphs(ports: u8, labels: u16, n: usize, out: &mut dyn FnMut(&PortGraph<u16>)) {
    let ends: Vec<End> = (0..n).flat_map(|v| (1..=ports).map(move |p| End::new(v, p))).collect();
    let mut matchings = Vec::new();
    let mut partner: Vec<Option<usize>> = vec![None; ends.len()];
    fn matchings_from(i: usize, partner: &mut Vec<Option<usize>>, acc: &mut Vec<Vec<Option<usize>>>) {
        if i == partner.len() {
            acc.push(partner.clone());
            return;
        }
        if partner[i].is_some() {
            return matchings_from(i + 1, partner, acc);
        }
        matchings_from(i + 1, partner, acc);
        for j in i + 1..partner.len() {
            if partner[j].is_none() {
                partner[i] = Some(j);
                partner[j] = Some(i);
                matchings_from(i + 1, partner, acc);
                partner[i] = None;
                partner[j] = None;
            }
        }
    }
    matchings_from(0, &mut partner, &mut matchings);
    let labellings = (labels as usize).pow(n as u32);
    for m in &matchings {
        for code in 0..labellings {
            let mut g = PortGraph::new(ports);
            let mut c = code;
            for v in 0..n {
                g.add_vertex(VertexName::Raw(v as u64), (c % labels as usize) as u16)
                    .unwrap();
                c /= labels as usize;
            }
            for (i, j) in m.iter().enumerate() {
                if let Some(j) = *j {
                    if i < j {
                        g.add_edge(ends[i].vertex, ends[i].port, ends[j].vertex, ends[j].port)
                            .unwrap();
                    }
                }
            }
            out(&g);
        }
    }
}

/// Disks cut out of every small port graph. A disk of radius `r` has at
/// most `1 + p + p(p-1) + ...` vertices up to depth `r + 1`.
fn brute_force_disks(ports: u8, labels: u16, radius: usize) -> HashSet<CayleyGraph<u16>> {
    let p = ports as usize;
    let mut max = 1;
    let mut layer = p;
    for _ in 0..=radius {
        max += layer;
        layer *= p.saturating_sub(1).max(1);
    }
    let mut set = HashSet::new();
    for n in 1..=max {
        all_port_graphs(ports, labels, n, &mut |g| {
            // disconnected graphs are covered by their components
            let Ok(x) = CayleyGraph::canonicalize_at(g, 0) else {
                return;
            };
            set.insert(x.disk(radius).into_graph());
        });
    }
    set
}

#[test]
fn disk_catalog_matches_brute_force() {
    for (p, l, r) in [(1, 1, 0), (1, 2, 0), (2, 1, 0), (2, 2, 0), (1, 2, 1), (2, 1, 1)] {
        let listed: Vec<_> = enumerate_disks(p, l, r, 1_000_000)
            .unwrap()
            .into_iter()
            .map(|d| d.into_graph())
            .collect();
        let set: HashSet<_> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len(), "duplicates at {p},{l},{r}");
        assert_eq!(set, brute_force_disks(p, l, r), "catalog differs at {p},{l},{r}");
    }
}

#[test]
fn two_port_two_label_radius_zero_has_sixty_disks() {
    assert_eq!(enumerate_disks(2, 2, 0, 1_000).unwrap().len(), 60);
}

#[test]
fn graph_catalog_matches_brute_force() {
    for (p, l, n) in [(1, 2, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2)] {
        let listed = enumerate_graphs(p, l, n, 1_000_000).unwrap();
        let set: HashSet<_> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len());
        let mut oracle = HashSet::new();
        for k in 1..=n {
            all_port_graphs(p, l, k, &mut |g| {
                if let Ok(x) = CayleyGraph::canonicalize_at(g, 0) {
                    oracle.insert(x);
                }
            });
        }
        assert_eq!(set, oracle, "catalog differs at {p},{l},{n}");
    }
}

#[test]
fn codes_are_injective_on_small_graphs() {
    let all = enumerate_graphs(2, 1, 5, 1_000_000).unwrap();
    let codes: HashSet<String> = all.iter().map(|x| encode_graph(x).to_string()).collect();
    assert_eq!(codes.len(), all.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn codec_round_trip(seed: u64, ports in 1u8..=4, labels in 1u16..=3) {
        let x = graph_from_seed(seed, ports, labels, 30);
        let code = encode_graph(&x);
        prop_assert_eq!(decode_graph(&code, ports).unwrap(), x);
        let reparsed: GraphCode = code.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, code);
    }

    #[test]
    fn canonical_form_ignores_vertex_order(seed: u64, ports in 1u8..=4) {
        let x = graph_from_seed(seed, ports, 3, 20);
        let n = x.vertex_count();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seeded(seed ^ 1));
        let mut place = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            place[v] = i;
        }
        let mut g = PortGraph::new(ports);
        for &v in &order {
            g.add_vertex(VertexName::Raw(v as u64), *x.label(v)).unwrap();
        }
        for e in x.edges() {
            g.add_edge(place[e.0.vertex], e.0.port, place[e.1.vertex], e.1.port).unwrap();
        }
        prop_assert_eq!(CayleyGraph::canonicalize_at(&g, place[0]).unwrap(), x);
    }

    #[test]
    fn shifts_compose(seed: u64, ports in 1u8..=4) {
        let x = graph_from_seed(seed, ports, 2, 15);
        let names = x.names();
        let u = &names[seed as usize % names.len()];
        let xu = x.shift(u).unwrap();
        let names_u = xu.names();
        let v = &names_u[(seed >> 8) as usize % names_u.len()];
        prop_assert_eq!(xu.shift(v).unwrap(), x.shift(&u.concat(v)).unwrap());
        prop_assert_eq!(xu.shift(&u.inverse()).unwrap(), x);
    }

    #[test]
    fn canonical_graphs_satisfy_path_conditions(seed: u64, ports in 1u8..=3) {
        let x = graph_from_seed(seed, ports, 2, 10);
        prop_assert!(x.cayley_violations(4).is_empty());
    }

    #[test]
    fn disks_are_idempotent(seed: u64, ports in 1u8..=4, r in 0usize..3) {
        let x = graph_from_seed(seed, ports, 2, 25);
        let d = x.disk(r).into_graph();
        prop_assert!(d.is_disk_of_radius(r));
        prop_assert_eq!(d.disk(r).into_graph(), d.clone());
        if r > 0 {
            prop_assert_eq!(d.disk(r - 1).into_graph(), x.disk(r - 1).into_graph());
        }
    }

    #[test]
    fn distance_is_an_ultrametric(seed: u64, ports in 1u8..=3) {
        let mut rng = seeded(seed);
        let x = random_graph_upto(&mut rng, ports, 2, 15);
        let y = agreeing_graph(&mut rng, &x, (seed % 3) as usize, 2).unwrap_or_else(|| x.clone());
        let z = agreeing_graph(&mut rng, &y, (seed % 2) as usize, 2).unwrap_or_else(|| y.clone());
        prop_assert_eq!(x.distance(&y), y.distance(&x));
        prop_assert_eq!(x.distance(&x), DyadicDistance::ZERO);
        prop_assert_eq!(x.distance(&y).is_zero(), x == y);
        prop_assert!(x.distance(&z) <= x.distance(&y).max(y.distance(&z)));
    }

    #[test]
    fn gluing_ignores_part_order(seed: u64, ports in 1u8..=3) {
        let x = graph_from_seed(seed, ports, 2, 8);
        let f = identity_rule(ports, 2);
        let parts: Vec<PortGraph<u16>> = (0..x.vertex_count())
            .map(|u| {
                let (disk, _) = x.disk_around(u, 0);
                prefix(&x.name(u), &f.apply(&disk).unwrap().unwrap()).unwrap()
            })
            .collect();
        let mut shuffled = parts.clone();
        shuffled.shuffle(&mut seeded(seed));
        let pointed = |g: PortGraph<u16>| {
            let v = g.names().iter().position(|n| n.contains_epsilon()).unwrap();
            CayleyGraph::canonicalize_at(&g, v).ok()
        };
        let a = glue_all(&parts).ok().map(pointed);
        let b = glue_all(&shuffled).ok().map(pointed);
        prop_assert_eq!(a, b);
    }
}
