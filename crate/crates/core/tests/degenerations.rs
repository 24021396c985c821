use std::collections::BTreeMap;

use tyurin_core::degen::{
    classify_gamma, enumerate_degenerations, flop, seed_e6e12, triple_point_check, EnumerationOptions, Side,
};
use tyurin_core::ns::{generator_pairing, Generator};

fn root_gram() -> Vec<Vec<i64>> {
    (0..19u8)
        .map(|i| {
            (0..19u8)
                .map(|j| generator_pairing(Generator::E(i), Generator::E(j)))
                .collect()
        })
        .collect()
}

fn options(quotient: bool) -> EnumerationOptions {
    EnumerationOptions {
        reflection_quotient: quotient,
        ..EnumerationOptions::default()
    }
}

fn expected_k2() -> BTreeMap<&'static str, i64> {
    BTreeMap::from([
        ("E9E9", 0),
        ("E8E10", 1),
        ("E7E11", 2),
        ("E6E12", 3),
        ("D5E13", 4),
        ("A4E14", 5),
        ("A1A2E15", 6),
        ("A1E16", 7),
        ("A1E17", 8),
        ("E17", 8),
        ("E18", 9),
    ])
}

#[test]
fn eleven_states_modulo_reflection() {
    let g = enumerate_degenerations(&seed_e6e12(), options(true));
    assert!(!g.truncated);
    assert!(g.discrepancies().is_empty());
    let labels: Vec<String> = g.nodes.iter().map(|n| n.gamma_text()).collect();
    let expected = expected_k2();
    assert_eq!(labels.len(), 11, "{labels:?}");
    for n in &g.nodes {
        let label = n.gamma_text();
        let k = expected
            .get(label.as_str())
            .unwrap_or_else(|| panic!("unexpected label {label}"));
        let (a, b) = n.state.k_squared();
        assert_eq!(a.abs(), *k, "{label}");
        assert_eq!(a + b, 0);
    }
    let distinct: std::collections::BTreeSet<_> = labels.iter().collect();
    assert_eq!(distinct.len(), 11);
}

#[test]
fn twenty_one_states_without_quotient() {
    let g = enumerate_degenerations(&seed_e6e12(), options(false));
    assert_eq!(g.nodes.len(), 21);
    assert!(g.discrepancies().is_empty());
}

#[test]
fn graph_is_connected_with_branches() {
    let g = enumerate_degenerations(&seed_e6e12(), options(true));
    let deg = |label: &str| {
        let i = g.nodes.iter().position(|n| n.gamma_text() == label).unwrap();
        g.neighbours(i).len()
    };
    assert_eq!(deg("A1E16"), 3);
    assert_eq!(deg("E18"), 1);
    assert_eq!(deg("A1E17"), 1);
    assert_eq!(deg("E17"), 2);
    assert_eq!(g.edges.len(), 10);
}

#[test]
fn every_state_satisfies_invariants() {
    let gram = root_gram();
    let g = enumerate_degenerations(&seed_e6e12(), options(false));
    for n in &g.nodes {
        let st = &n.state;
        let label = n.gamma_text();
        assert!(triple_point_check(st), "{label}");
        assert!(
            st.v1.consistency_errors().is_empty(),
            "{label}: {:?}",
            st.v1.consistency_errors()
        );
        assert!(st.v2.consistency_errors().is_empty(), "{label}");
        assert_eq!(st.tag_gram(), gram, "{label}");
        assert_eq!(st.full_tags().len() + st.broken_tags().len(), 19);
        for i in 0..19 {
            let z = st.tag_cycle(i);
            assert_eq!(
                st.cycle_degree(z, Side::V1),
                st.cycle_degree(z, Side::V2),
                "{label} E{i}"
            );
        }
        let rank: u32 = classify_gamma(st).unwrap().labels().iter().map(|l| l.rank()).sum();
        assert_eq!(rank as usize, st.tagged_minus_two().len());
    }
}

#[test]
fn flops_are_reversible_and_change_few_tags() {
    let g = enumerate_degenerations(&seed_e6e12(), options(false));
    for n in &g.nodes {
        let st = &n.state;
        for (side, c) in st.eligible_flops() {
            let next = flop(st, side, c).unwrap();
            let before = st.tagged_minus_two().len() as i64;
            let after = next.tagged_minus_two().len() as i64;
            assert!((before - after).abs() <= 2);
            let back = next
                .eligible_flops()
                .into_iter()
                .filter(|&(s, _)| s == side.other())
                .map(|(s, d)| flop(&next, s, d).unwrap())
                .any(|b| b.is_isomorphic(st));
            assert!(back, "flop from {} is not undone", n.gamma_text());
        }
    }
}

#[test]
fn reflection_pairs_states() {
    let g = enumerate_degenerations(&seed_e6e12(), options(false));
    let forms: Vec<Vec<i64>> = g.nodes.iter().map(|n| n.state.canonical_form()).collect();
    let mut fixed = 0;
    for n in &g.nodes {
        let r = n.state.reflect().canonical_form();
        let j = forms.iter().position(|f| *f == r).expect("mirror state is reachable");
        if forms[j] == n.state.canonical_form() {
            fixed += 1;
        }
    }
    assert_eq!(fixed, 1);
}

#[test]
fn dot_output_lists_all_nodes() {
    let g = enumerate_degenerations(&seed_e6e12(), options(true));
    let dot = g.to_dot();
    assert!(dot.starts_with("graph flops {"));
    assert_eq!(dot.matches(" -- ").count(), g.edges.len());
    assert!(dot.contains("E9E9\\n(0,0)"));
}

mod round_trips {
    use proptest::prelude::*;
    use tyurin_core::degen::{blow_down, blow_up, ComponentSurface, PointId};

    #[derive(Debug, Clone)]
    struct Config {
        curves: Vec<(i64, i64)>,
        pairs: Vec<i64>,
        incidences: Vec<(u8, i64)>,
        k_squared: i64,
    }

    fn config() -> impl Strategy<Value = Config> {
        (1usize..=6).prop_flat_map(|n| {
            (
                proptest::collection::vec((-3i64..=1, 0i64..=3), n),
                proptest::collection::vec(0i64..=2, n * (n - 1) / 2),
                proptest::collection::vec((0u8..=3, 1i64..=3), n),
                -9i64..=9,
            )
                .prop_map(|(curves, pairs, incidences, k_squared)| Config {
                    curves,
                    pairs,
                    incidences,
                    k_squared,
                })
        })
    }

    /// Curves may sit at one of three marked points (code 3 = none).
    fn build(c: &Config) -> ComponentSurface {
        let mut s = ComponentSurface::empty(c.k_squared);
        let ids: Vec<_> = c.curves.iter().map(|&(a, d)| s.add_curve(a, d)).collect();
        let mut k = 0;
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                s.set_intersection(ids[i], ids[j], c.pairs[k]).unwrap();
                k += 1;
            }
        }
        for p in 0..3 {
            s.add_point(p);
        }
        for (&id, &(p, contact)) in ids.iter().zip(&c.incidences) {
            if p < 3 {
                s.set_incidence(PointId::from(p), id, 1, contact).unwrap();
            }
        }
        s
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn blow_down_undoes_blow_up(c in config(), p in 0u32..3) {
            let s = build(&c);
            let (up, e) = blow_up(&s, p).unwrap();
            prop_assert_eq!(up.k_squared(), s.k_squared() - 1);
            let (down, image) = blow_down(&up, e).unwrap();
            prop_assert_eq!(image, Some(p));
            prop_assert_eq!(&down, &s);
            prop_assert_eq!(down.canonical_form(), s.canonical_form());
        }

        #[test]
        fn blow_up_undoes_blow_down(c in config(), p in 0u32..3) {
            let (s, e) = blow_up(&build(&c), p).unwrap();
            let (down, image) = blow_down(&s, e).unwrap();
            let (again, e2) = blow_up(&down, image.unwrap()).unwrap();
            prop_assert_eq!(again.canonical_form(), s.canonical_form());
            prop_assert_eq!(again.curve(e2).map(|n| (n.self_int, n.d_mult)), Some((-1, 1)));
        }
    }
}
