use std::collections::BTreeMap;

use tyurin::catalog::{bundled, parse_catalog, Catalog, CatalogError, Coeff, BUNDLED_CATALOG};
use tyurin::report::Status;
use tyurin::verify::{combination_is_invariant, flop_graph, verify_model};
use tyurin_core::degen::seed_e6e12;
use tyurin_core::lattice::{dynkin_classify, parse_dynkin_multiset};
use tyurin_core::ns::{generator_pairing, pairing, pairing_with, verify_section, DivisorClass, Generator};
use tyurin_core::rational::{frac, q, Q};

fn with_json(edit: impl FnOnce(&mut serde_json::Value)) -> Result<Catalog, CatalogError> {
    let mut v: serde_json::Value = serde_json::from_str(BUNDLED_CATALOG).unwrap();
    edit(&mut v);
    parse_catalog(&v.to_string())
}

fn model_json<'a>(v: &'a mut serde_json::Value, name: &str) -> &'a mut serde_json::Value {
    v["models"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|m| m["name"] == name)
        .unwrap()
}

#[test]
fn bundled_catalog_loads() {
    let c = bundled();
    assert_eq!(c.models.len(), 10);
    assert_eq!(c.rows().len(), 11);
    assert_eq!(c.fibrations.len(), 2);
}

#[test]
fn catalog_round_trips() {
    let c = bundled();
    assert_eq!(parse_catalog(&c.to_json()).unwrap(), c);
}

#[test]
fn empty_input_is_a_parse_error() {
    assert!(matches!(parse_catalog(""), Err(CatalogError::Parse { .. })));
}

#[test]
fn unknown_field_is_rejected_with_its_path() {
    let err = with_json(|v| {
        model_json(v, "E6E12")["colour"] = "blue".into();
    })
    .unwrap_err();
    match err {
        CatalogError::Parse { field, message, .. } => {
            assert!(field.starts_with("models"), "{field}");
            assert!(message.contains("colour"), "{message}");
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn singularities_must_match_contractions() {
    let err = with_json(|v| {
        model_json(v, "E6E12")["singularities"] = "A11E7".into();
    })
    .unwrap_err();
    assert!(matches!(err, CatalogError::Schema { .. }), "{err}");
}

#[test]
fn bad_coefficient_is_a_schema_violation() {
    let err = with_json(|v| {
        model_json(v, "E6E12")["polarising_divisor"]["e"][3] = "1/0".into();
    })
    .unwrap_err();
    assert!(matches!(err, CatalogError::Schema { .. }), "{err}");
}

#[test]
fn duplicate_gamma_is_rejected() {
    let err = with_json(|v| {
        model_json(v, "E7E11")["degenerations"][0]["gamma"] = "E6E12".into();
    })
    .unwrap_err();
    assert!(matches!(err, CatalogError::Schema { .. }), "{err}");
}

#[test]
fn corrupted_section_fails_check_d() {
    let mut c = bundled();
    let m = c.models.iter_mut().find(|m| m.name == "E6E12").unwrap();
    let s = m.sections.iter_mut().find(|s| s.name == "w").unwrap();
    let e = &mut s.class.as_mut().unwrap().e;
    e[5] = Coeff::Int(match e[5] {
        Coeff::Int(n) => n + 1,
        _ => unreachable!(),
    });
    let records = verify_model(m, &flop_graph(&bundled(), true));
    let r = records.iter().find(|r| r.id == "d-section[w]").unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(records
        .iter()
        .filter(|r| r.id != "d-section[w]")
        .all(|r| r.status != Status::Fail));
}

fn classify(c: &Catalog, name: &str) -> String {
    let m = c.model(name).unwrap();
    let mut labels = Vec::new();
    for spec in &m.contractions {
        let gens: Vec<Generator> = spec.generators.iter().map(|g| Generator::parse(g).unwrap()).collect();
        labels.extend(dynkin_classify(&gens, |a, b| generator_pairing(*a, *b)).unwrap());
    }
    labels.sort();
    tyurin_core::lattice::format_dynkin_multiset(&labels)
}

#[test]
fn contraction_sets_classify_as_recorded() {
    let c = bundled();
    assert_eq!(classify(&c, "A4E14"), "A4D13");
    assert_eq!(
        parse_dynkin_multiset(&classify(&c, "E6E12")).unwrap(),
        parse_dynkin_multiset("A11E6").unwrap()
    );
    for m in &c.models {
        assert_eq!(
            parse_dynkin_multiset(&classify(&c, &m.name)).unwrap(),
            m.singularity_labels(),
            "{}",
            m.name
        );
    }
}

#[test]
fn seed_state_is_the_builtin_seed() {
    let c = bundled();
    assert!(c.seed_state.state().unwrap().is_isomorphic(&seed_e6e12()));
}

fn shifted(c: &DivisorClass, g: Generator, k: &Q) -> DivisorClass {
    let mut unit = DivisorClass::zero();
    unit.set_coeff(g, q(1));
    c + &unit.scale(k)
}

/// All `±k·g` corrections (`k` in `steps`) to `printed` accepted by `ok`.
fn single_fixes(printed: &DivisorClass, steps: &[Q], ok: impl Fn(&DivisorClass) -> bool) -> Vec<DivisorClass> {
    let mut found = Vec::new();
    for g in Generator::all() {
        for k in steps {
            for k in [k.clone(), -k.clone()] {
                let c = shifted(printed, g, &k);
                if ok(&c) {
                    found.push(c);
                }
            }
        }
    }
    found
}

fn section_class(c: &Catalog, model: &str, name: &str) -> (DivisorClass, u32) {
    let s = c
        .model(model)
        .unwrap()
        .sections
        .iter()
        .find(|s| s.name == name)
        .unwrap();
    (s.class.as_ref().unwrap().to_class().unwrap(), s.degree)
}

fn integer_steps() -> Vec<Q> {
    (1..=3).map(q).collect()
}

#[test]
fn printed_a4e14_z_needs_its_unique_fix() {
    let c = bundled();
    let d = c.model("A4E14").unwrap().divisor().unwrap();
    let (fixed, n) = section_class(&c, "A4E14", "z");
    let mut printed = fixed.clone();
    printed.set_coeff(Generator::E(2), q(5));
    assert_ne!(verify_section(&printed, n, &d), Ok(true));
    let fixes = single_fixes(&printed, &integer_steps(), |s| verify_section(s, n, &d) == Ok(true));
    assert_eq!(fixes, vec![fixed]);
}

#[test]
fn printed_e17_y_needs_its_unique_fix() {
    let c = bundled();
    let d = c.model("E17").unwrap().divisor().unwrap();
    let (fixed, n) = section_class(&c, "E17", "y");
    let mut printed = fixed.clone();
    printed.set_coeff(Generator::E(0), q(1));
    assert_ne!(verify_section(&printed, n, &d), Ok(true));
    let fixes = single_fixes(&printed, &integer_steps(), |s| verify_section(s, n, &d) == Ok(true));
    assert_eq!(fixes, vec![fixed]);
}

#[test]
fn printed_a1a2e15_divisor_needs_its_unique_fix() {
    let c = bundled();
    let m = c.model("A1A2E15").unwrap();
    let fixed = m.divisor().unwrap();
    let stated = frac(2, 3);
    let contracted: Vec<Generator> = m
        .contractions
        .iter()
        .flat_map(|s| s.generators.iter().map(|g| Generator::parse(g).unwrap()))
        .collect();
    let mut printed = fixed.clone();
    printed.set_coeff(Generator::E(17), frac(1, 3));
    let ok = |d: &DivisorClass| pairing(d, d) == stated && contracted.iter().all(|&g| pairing_with(d, g) == q(0));
    assert!(!ok(&printed));
    let steps: Vec<Q> = (1..=6).map(|k| frac(k, 3)).collect();
    assert_eq!(single_fixes(&printed, &steps, ok), vec![fixed]);
}

#[test]
fn printed_a1e17_divisor_is_not_orthogonal_to_its_contraction() {
    let c = bundled();
    let m = c.model("A1E17").unwrap();
    let fixed = m.divisor().unwrap();
    let contracted: Vec<Generator> = m
        .contractions
        .iter()
        .flat_map(|s| s.generators.iter().map(|g| Generator::parse(g).unwrap()))
        .collect();
    let mut printed = fixed.clone();
    for i in 3..=16 {
        printed.set_coeff(Generator::E(i), q(2));
    }
    printed.set_coeff(Generator::E(17), q(1));
    let orthogonal = |d: &DivisorClass| contracted.iter().all(|&g| pairing_with(d, g) == q(0));
    assert_eq!(pairing(&fixed, &fixed), frac(1, 2));
    assert!(orthogonal(&fixed));
    assert!(!orthogonal(&printed));
}

#[test]
fn printed_b_denominators_are_not_invariant() {
    let c = bundled();
    let printed: [&[(&str, i32)]; 5] = [
        &[("a0", 1), ("a1", 1), ("a2", 4), ("a3", 6), ("a4", -12)],
        &[("a2", 2), ("a3", 3), ("a4", -5)],
        &[("a2", 1), ("a3", 2), ("a5", 1), ("a4", -4)],
        &[("a3", 1), ("a6", 1), ("a4", -2)],
        &[("a2", 1), ("a3", 1), ("a8", 1), ("a4", -3)],
    ];
    for p in printed {
        let combo: BTreeMap<String, i32> = p.iter().map(|&(k, v)| (k.to_owned(), v)).collect();
        assert!(!combination_is_invariant(&c.toric, &combo), "{combo:?}");
    }
    for combo in c.toric.invariants.values() {
        assert!(combination_is_invariant(&c.toric, combo), "{combo:?}");
    }
}
