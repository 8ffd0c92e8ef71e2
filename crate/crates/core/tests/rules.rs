use cgd::codec::{decode_rule, encode_rule, enumerate_disks, CodecError, RuleDescription};
use cgd::fixtures;
use cgd::graph::{PortGraph, VertexName, Word};
use cgd::library::{identity_rule, inflating_grid_rule, mislabelling_rule, xor_label_rule};
use cgd::random::{agreeing_graph, random_graph_upto, seeded};
use cgd::rule::{
    apply_localizable, check_modulus, continuity_modulus, iterate, validate_local_rule, Condition, LocalRule,
    RuleError, RuleParams, ValidationMode,
};
use proptest::prelude::*;

const AUTO: ValidationMode = ValidationMode::Auto {
    budget: 10_000,
    samples: 300,
    seed: 11,
};

fn library() -> Vec<LocalRule<u16>> {
    vec![identity_rule(3, 2), inflating_grid_rule(), xor_label_rule()]
}

#[test]
fn library_rules_validate() {
    for f in library() {
        let report = validate_local_rule(&f, AUTO).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.coverage.exhaustive[0]);
        assert!(report.max_image <= f.params().bound);
    }
}

#[test]
fn mislabelling_is_rejected_with_a_witness() {
    let report = validate_local_rule(&mislabelling_rule(2), AUTO).unwrap();
    assert!(!report.passed());
    assert!(report.failures > 0);
    let w = &report.witnesses[0];
    assert_ne!(w.condition, Condition::Image);
    assert!(w.verdict.contains("label"), "{w}");
}

#[test]
fn oversized_images_fail_the_bound() {
    let params = RuleParams::new(2, 1, 0, 1, 0).unwrap();
    let f = LocalRule::from_fn_unchecked("too-big", params, |disk| {
        let g = identity_rule(2, 1).apply(disk).ok()??;
        Some(g)
    });
    let report = validate_local_rule(&f, ValidationMode::Exhaustive { budget: 1000 }).unwrap();
    assert!(!report.bound_ok);
    assert!(!report.passed());
}

#[test]
fn exhaustive_mode_reports_budget() {
    let err = validate_local_rule(&identity_rule(3, 2), ValidationMode::Exhaustive { budget: 100 }).unwrap_err();
    assert!(matches!(err, RuleError::Codec(CodecError::BudgetExceeded { .. })));
}

#[test]
fn grid_pair_glues_to_eight_vertices() {
    let y = apply_localizable(&inflating_grid_rule(), &fixtures::pair()).unwrap();
    assert_eq!(y.vertex_count(), 8);
    assert_eq!(y.edge_count(), 10);
    assert_eq!(y, fixtures::grid(4, 2));
}

#[test]
fn grid_sizes_quadruple() {
    let sizes: Vec<usize> = iterate(&inflating_grid_rule(), &fixtures::grid(3, 3), 2)
        .unwrap()
        .iter()
        .map(|g| g.vertex_count())
        .collect();
    assert_eq!(sizes, [9, 36, 144]);
}

#[test]
fn holes_are_reported() {
    let params = RuleParams::new(2, 2, 0, 3, 0).unwrap();
    let f = LocalRule::from_fn("only-zero", params, |disk| {
        (*disk.pointer_label() == 0).then(|| identity_rule(2, 2).apply(disk).unwrap().unwrap())
    });
    let err = apply_localizable(&f, &fixtures::cycle(&[0, 1, 0])).unwrap_err();
    assert!(matches!(err, RuleError::PartialRuleHole { .. }));
    let err = iterate(&f, &fixtures::cycle(&[0, 1, 0]), 2).unwrap_err();
    assert!(matches!(err, RuleError::AtStep { step: 1, .. }));
}

#[test]
fn descriptions_round_trip() {
    for f in library() {
        let d = encode_rule(&f, 100_000).unwrap();
        assert_eq!(d.table.len(), d.disk_count);
        assert!(d.images.len() <= d.disk_count);
        assert!(d.images.iter().all(|g| g.vertex_count() <= f.params().bound));
        let text = d.to_string();
        let back: RuleDescription = text.parse().unwrap();
        assert_eq!(back, d);
        let g = decode_rule(&back, 100_000).unwrap();
        // the decoded table agrees with the rule everywhere
        let p = f.params();
        for disk in enumerate_disks(p.ports, p.labels, p.radius, 100_000).unwrap() {
            assert_eq!(g.apply(&disk).unwrap(), f.apply(&disk).unwrap());
        }
        assert_eq!(encode_rule(&g, 100_000).unwrap(), d);
    }
}

#[test]
fn tampered_descriptions_are_rejected() {
    let d = encode_rule(&xor_label_rule(), 100_000).unwrap();
    let mut bad = d.clone();
    bad.disk_hash = "00".repeat(32);
    assert!(matches!(
        decode_rule(&bad, 100_000),
        Err(CodecError::CatalogMismatch(_))
    ));
    let mut bad = d.clone();
    bad.table[0] = Some(d.images.len());
    assert!(matches!(decode_rule(&bad, 100_000), Err(CodecError::BadIndex { .. })));
    let mut bad = d.clone();
    let mut img = PortGraph::new(2);
    img.add_vertex(VertexName::elem(Word::default(), 0), 0).unwrap();
    img.add_vertex(VertexName::elem("99".parse().unwrap(), 0), 0).unwrap();
    bad.images[0] = img;
    assert!(matches!(
        decode_rule(&bad, 100_000),
        Err(CodecError::NamingConstraintViolated { .. })
    ));
}

#[test]
fn continuity_modulus_is_tight_enough_to_refute_a_smaller_one() {
    // agreement up to radius r + radius(f) + 1 suffices; radius 0 does not
    let f = xor_label_rule();
    let mut rng = seeded(3);
    let mut pairs = Vec::new();
    while pairs.len() < 200 {
        let x = random_graph_upto(&mut rng, 2, 2, 10);
        if let Some(y) = agreeing_graph(&mut rng, &x, 0, 2) {
            pairs.push((x, y));
        }
    }
    let certified = continuity_modulus(&f, 0, &pairs).unwrap();
    assert!(certified.is_certified(), "{certified}");
    let too_small = check_modulus(|x| apply_localizable(&f, x), 1, 0, &pairs).unwrap();
    assert!(!too_small.is_certified(), "{too_small}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_fixes_every_graph(seed: u64, ports in 1u8..=4) {
        let x = random_graph_upto(&mut seeded(seed), ports, 2, 20);
        prop_assert_eq!(apply_localizable(&identity_rule(ports, 2), &x).unwrap(), x);
    }

    #[test]
    fn dynamics_commute_with_shifts(seed: u64) {
        let x = random_graph_upto(&mut seeded(seed), 2, 2, 16);
        let f = xor_label_rule();
        let fx = apply_localizable(&f, &x).unwrap();
        // xor keeps the vertex set, so shifting before or after agrees
        for u in x.names() {
            let a = apply_localizable(&f, &x.shift(&u).unwrap()).unwrap();
            prop_assert_eq!(a, fx.shift(&u).unwrap());
        }
    }

    #[test]
    fn grid_quadruples_any_grid(w in 1usize..4, h in 1usize..4) {
        let y = apply_localizable(&inflating_grid_rule(), &fixtures::grid(w, h)).unwrap();
        prop_assert_eq!(y, fixtures::grid(2 * w, 2 * h));
    }

    #[test]
    fn xor_matches_direct_parity(seed: u64) {
        let x = random_graph_upto(&mut seeded(seed), 2, 2, 16);
        let y = apply_localizable(&xor_label_rule(), &x).unwrap();
        prop_assert_eq!(y.vertex_count(), x.vertex_count());
        for v in 0..x.vertex_count() {
            let mut seen = vec![v];
            for p in 1..=2 {
                if let Some(e) = x.neighbor(v, p) {
                    if !seen.contains(&e.vertex) {
                        seen.push(e.vertex);
                    }
                }
            }
            let parity = seen.iter().map(|&w| *x.label(w)).sum::<u16>() % 2;
            prop_assert_eq!(*y.label(v), parity);
        }
    }
}
