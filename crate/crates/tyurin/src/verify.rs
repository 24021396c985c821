//! The verification harness: every numerically checkable consequence of
//! the catalog, gathered into a [`CheckReport`].

use std::collections::{BTreeMap, BTreeSet};

use tyurin_core::degen::{
    classify_gamma, enumerate_degenerations, seed_e6e12, triple_point_check, CurveId, DegenerationState,
    EnumerationOptions, FlopGraph, GammaLabel, Side, TagCycle,
};
use tyurin_core::lattice::{dynkin_classify, format_dynkin_multiset, lattice_quotient, IntMatrix};
use tyurin_core::ns::{
    fibration_check, floor_multiple, generator_pairing, is_big_nef, pairing, pairing_with, quotient_self_intersection,
    rr_sections, verify_m_identification, verify_section, FibrationName, FibrationRecord, FixedLocusTable, Generator,
    RelationSet,
};
use tyurin_core::poly::{
    clear_denominators, complete_power, invariance_check, is_weighted_homogeneous, substitute, LaurentPolynomial,
    ParamMonomial, TorusAction,
};
use tyurin_core::rational::{q, sign, Q};
use tyurin_core::toric::{cox_degree, enumerate_monomials, sublattice_index, GElement, LatticePolytope};
use tyurin_core::Clause;

use crate::catalog::{hyperplane_vars, Catalog, ModelRecord, OutcomeSpec, Pipeline, ToricData};
use crate::report::{overall_of, CheckRecord, CheckReport, GraphSummary, Status};

fn from_clauses(scope: &str, prefix: &str, clauses: Vec<Clause>) -> Vec<CheckRecord> {
    clauses
        .into_iter()
        .map(|c| {
            CheckRecord::new(
                scope,
                format!("{prefix}{}", c.id),
                Status::from_bool(c.passed),
                c.detail,
            )
        })
        .collect()
}

fn check(scope: &str, id: impl Into<String>, ok: bool, detail: impl Into<String>) -> CheckRecord {
    CheckRecord::new(scope, id, Status::from_bool(ok), detail)
}

fn generator(name: &str) -> Generator {
    Generator::parse(name).expect("validated generator")
}

fn root_index(name: &str) -> usize {
    match generator(name) {
        Generator::E(i) => usize::from(i),
        g => panic!("{g} is not a root"),
    }
}

/// Unimodularity and signature of `M`, the three relations and the
/// quotient self-intersections.
pub fn lattice_checks() -> Vec<CheckRecord> {
    let scope = "lattice";
    let mut out = from_clauses(scope, "m-", verify_m_identification());
    for (k, r) in RelationSet::standard().as_array().into_iter().enumerate() {
        let bad: Vec<String> = Generator::all()
            .filter(|&g| sign(&pairing_with(r, g)) != 0)
            .map(|g| g.to_string())
            .collect();
        let detail = if bad.is_empty() {
            String::from("pairs to 0 with all 21 generators")
        } else {
            format!("nonzero pairing with {}", bad.join(","))
        };
        out.push(check(scope, format!("relation-R{}", k + 1), bad.is_empty(), detail));
    }
    let table = FixedLocusTable::standard();
    let mut values = Vec::new();
    let mut ok = true;
    for g in Generator::all() {
        let v = quotient_self_intersection(g, &table);
        let expected = match g {
            Generator::T => 4,
            Generator::S => 0,
            Generator::E(i) if i % 2 == 1 => -4,
            Generator::E(_) => -1,
        };
        ok &= v == q(expected);
        values.push(format!("{g}:{v}"));
    }
    out.push(check(scope, "quotient-self-intersections", ok, values.join(" ")));
    out
}

pub fn fibration_checks(catalog: &Catalog) -> Vec<CheckRecord> {
    let scope = "fibrations";
    let mut out = Vec::new();
    for f in &catalog.fibrations {
        let rec = f.record().expect("validated fibration");
        let builtin = match rec.name {
            FibrationName::Standard => FibrationRecord::standard(),
            FibrationName::Alternate => FibrationRecord::alternate(),
        };
        out.push(check(
            scope,
            format!("{}-matches-builtin", f.name),
            rec == builtin,
            "catalog entry equals the built-in fibration data",
        ));
        out.extend(from_clauses(scope, &format!("{}-", f.name), fibration_check(&rec)));
    }
    out
}

fn contracted_set(specs: &[crate::catalog::ContractionSpec]) -> BTreeSet<Generator> {
    specs
        .iter()
        .flat_map(|c| c.generators.iter().map(|g| generator(g)))
        .collect()
}

fn outcome_records(scope: &str, o: &OutcomeSpec, graph: &FlopGraph) -> Vec<CheckRecord> {
    let rows = [o.gamma.clone()];
    let mut out = Vec::new();
    let vars = o.vars();
    for (j, (eq, spec)) in o.parsed_equations().iter().zip(&o.equations).enumerate() {
        let found = is_weighted_homogeneous(eq, &o.weights);
        let ok = found == Some(spec.degree);
        let weights: Vec<String> = o.weights.iter().map(|w| w.to_string()).collect();
        let detail = match found {
            Some(d) => format!("degree {d} at weights ({}), stated {}", weights.join(","), spec.degree),
            None => format!("not weighted homogeneous at weights ({})", weights.join(",")),
        };
        out.push(check(scope, format!("a-homogeneous[{}#{}]", o.gamma, j + 1), ok, detail).with_rows(&rows));
    }
    if let Some(chart) = &o.affine_chart {
        let eq = &o.parsed_equations()[0];
        let mut map = BTreeMap::new();
        map.insert(chart.variable.clone(), LaurentPolynomial::constant(&vars, q(1)));
        let got = substitute(eq, &map, &vars).expect("same variables");
        let want = LaurentPolynomial::parse_equation(&chart.expected, &vars).expect("validated");
        let detail = format!("{} = 1 gives {got}", chart.variable);
        out.push(check(scope, format!("affine-chart[{}]", o.gamma), got == want, detail).with_rows(&rows));
    }
    let (ok, detail) = match match_outcome(o, graph) {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    out.push(check(scope, format!("f-outcome[{}]", o.gamma), ok, detail).with_rows(&rows));
    out
}

/// Checks (a) to (f) and the structural extras for one record.
pub fn verify_model(record: &ModelRecord, graph: &FlopGraph) -> Vec<CheckRecord> {
    let scope = record.name.as_str();
    let rows = record.rows();
    let mut out = Vec::new();
    for o in &record.degenerations {
        out.extend(outcome_records(scope, o, graph));
    }
    let push = |out: &mut Vec<CheckRecord>, r: CheckRecord| out.push(r.with_rows(&rows));

    let divisor = record.divisor();
    match &divisor {
        None => {
            let why = "unverifiable from the recorded data: no polarising divisor is recorded";
            for id in ["b-big-nef", "c-h0", "d-sections"] {
                push(&mut out, CheckRecord::new(scope, id, Status::Skipped, why));
            }
        }
        Some(d) => {
            let d2 = pairing(d, d);
            push(
                &mut out,
                check(scope, "b-big-nef", is_big_nef(d), format!("D = {d}, D² = {d2}")),
            );
            if let Some(stated) = &record.stated_self_intersection {
                let s = stated.value().expect("validated");
                push(
                    &mut out,
                    check(scope, "b-self-intersection", d2 == s, format!("D² = {d2}, stated {s}")),
                );
            }
            for h in &record.stated_h0 {
                let f = floor_multiple(d, h.multiple);
                let id = format!("c-h0[{}D]", h.multiple);
                let r = match rr_sections(&f) {
                    Ok(v) => check(
                        scope,
                        id,
                        v == h.value,
                        format!("h⁰(⌊{}D⌋) = {v}, stated {}", h.multiple, h.value),
                    ),
                    Err(e) => check(scope, id, false, format!("⌊{}D⌋ = {f}: {e}", h.multiple)),
                };
                push(&mut out, r);
            }
            for s in &record.sections {
                let id = format!("d-section[{}]", s.name);
                if let Some(c) = &s.class {
                    let c = c.to_class().expect("validated");
                    let r = match verify_section(&c, s.degree, d) {
                        Ok(true) => check(scope, id, true, format!("{c} ∈ |⌊{}D⌋|", s.degree)),
                        Ok(false) => check(
                            scope,
                            id,
                            false,
                            format!("{c} is not linearly equivalent to ⌊{}D⌋", s.degree),
                        ),
                        Err(e) => check(scope, id, false, format!("{c}: {e}")),
                    };
                    push(&mut out, r);
                } else if let Some(map) = &s.intersections {
                    push(
                        &mut out,
                        CheckRecord::new(
                            scope,
                            id,
                            Status::Skipped,
                            "unverifiable from the recorded data: only intersection numbers are recorded",
                        ),
                    );
                    let f = floor_multiple(d, s.degree);
                    let bad: Vec<String> = map
                        .iter()
                        .filter(|(g, v)| pairing_with(&f, generator(g)) != q(**v))
                        .map(|(g, v)| {
                            format!(
                                "{g}: stated {v}, ⌊{}D⌋ gives {}",
                                s.degree,
                                pairing_with(&f, generator(g))
                            )
                        })
                        .collect();
                    let detail = if bad.is_empty() {
                        format!(
                            "all {} stated intersection numbers agree with ⌊{}D⌋",
                            map.len(),
                            s.degree
                        )
                    } else {
                        bad.join("; ")
                    };
                    push(
                        &mut out,
                        check(
                            scope,
                            format!("section-intersections[{}]", s.name),
                            bad.is_empty(),
                            detail,
                        ),
                    );
                }
            }
        }
    }

    for (kind, specs) in [
        ("e-contraction", &record.contractions),
        ("e-base-contraction", &record.base_contractions),
    ] {
        for c in specs {
            let gens: Vec<Generator> = c.generators.iter().map(|g| generator(g)).collect();
            let id = format!("{kind}[{}]", c.label);
            let want = crate::catalog::parse_labels(&c.label, "").expect("validated");
            let r = match dynkin_classify(&gens, |a, b| generator_pairing(*a, *b)) {
                Ok(got) => check(
                    scope,
                    id,
                    got == want,
                    format!("{} roots classify as {}", gens.len(), format_dynkin_multiset(&got)),
                ),
                Err(e) => check(scope, id, false, e.to_string()),
            };
            push(&mut out, r);
        }
    }

    let contracted = contracted_set(&record.contractions);
    let base = if record.base_contractions.is_empty() {
        contracted.clone()
    } else {
        contracted_set(&record.base_contractions)
    };
    if !record.base_contractions.is_empty() {
        let extra: Vec<String> = contracted.difference(&base).map(|g| g.to_string()).collect();
        let detail = if extra.is_empty() {
            String::from("every contracted root is contracted on the base model")
        } else {
            format!("not contracted on the base model: {}", extra.join(","))
        };
        push(&mut out, check(scope, "partial-resolution", extra.is_empty(), detail));
    }
    if let Some(d) = &divisor {
        let bad: Vec<String> = base
            .iter()
            .filter(|&&g| sign(&pairing_with(d, g)) != 0)
            .map(|g| format!("{g}·D = {}", pairing_with(d, *g)))
            .collect();
        let detail = if bad.is_empty() {
            format!("D is orthogonal to all {} contracted roots", base.len())
        } else {
            bad.join("; ")
        };
        push(&mut out, check(scope, "contracted-orthogonal", bad.is_empty(), detail));
    }
    for (g, curve) in &record.strict_transforms {
        let gen = generator(g);
        let mut problems = Vec::new();
        if contracted.contains(&gen) {
            problems.push(String::from("is contracted"));
        }
        let mut detail = format!("{g} ↦ {curve}");
        if let Some(d) = &divisor {
            let p = pairing_with(d, gen);
            if sign(&p) <= 0 {
                problems.push(format!("D·{g} = {p} is not positive"));
            }
            detail.push_str(&format!(", D·{g} = {p}"));
        }
        if !problems.is_empty() {
            detail = format!("{g} {}", problems.join("; "));
        }
        push(
            &mut out,
            check(scope, format!("strict-transform[{g}]"), problems.is_empty(), detail),
        );
    }
    out
}

const ORIENTATIONS: [&str; 4] = [
    "as enumerated",
    "sides swapped",
    "reflected",
    "reflected with sides swapped",
];
// reflect() already exchanges the sides, so index 2 undoes that exchange.

fn orientations(st: &DegenerationState) -> [DegenerationState; 4] {
    let r = st.reflect();
    [st.clone(), st.swap_sides(), r.swap_sides(), r]
}

/// Finds the flop-graph state with the outcome's `Γ` and matches its
/// numerical data under one of the four relabellings.
pub fn match_outcome(o: &OutcomeSpec, graph: &FlopGraph) -> Result<String, String> {
    let gamma = GammaLabel::parse(&o.gamma).expect("validated");
    let i = graph
        .find(&gamma)
        .ok_or_else(|| format!("Γ = {} does not occur in the flop graph", o.gamma))?;
    let mut reasons = Vec::new();
    let variants = orientations(&graph.nodes[i].state);
    for k in 0..4 {
        match match_orientation(o, &variants[k]) {
            Ok(()) => {
                return Ok(format!(
                    "state {i} ({}): K² = ({}, {}), {} composites match",
                    ORIENTATIONS[k],
                    o.k_squared[0],
                    o.k_squared[1],
                    o.composites.len()
                ))
            }
            Err(e) => reasons.push(format!("{}: {e}", ORIENTATIONS[k])),
        }
    }
    Err(format!("state {i}: {}", reasons.join("; ")))
}

fn match_orientation(o: &OutcomeSpec, st: &DegenerationState) -> Result<(), String> {
    let (a, b) = st.k_squared();
    if [a, b] != o.k_squared {
        return Err(format!("K² = ({a}, {b})"));
    }
    for (k, side) in [Side::V1, Side::V2].into_iter().enumerate() {
        let have: BTreeSet<usize> = st
            .full_tags()
            .into_iter()
            .filter(|&i| match st.full_tag_curve(i) {
                Some((s, c)) => s == side && st.component(s).curve(c).is_some_and(|n| n.self_int == -2),
                None => false,
            })
            .collect();
        let want: BTreeSet<usize> = o.minus_two_tags[k].iter().map(|g| root_index(g)).collect();
        if have != want {
            return Err(format!("(−2) tags on {side} differ"));
        }
    }
    let broken: BTreeSet<usize> = st.broken_tags().into_iter().collect();
    let listed: BTreeSet<usize> = o.composites.iter().map(|c| root_index(&c.tag)).collect();
    if broken != listed {
        return Err(String::from("the split tags differ from the listed composites"));
    }
    for comp in &o.composites {
        let mut cycle = TagCycle::new();
        for (coef, name) in &comp.terms {
            let curve = resolve(o, st, name)?;
            *cycle.entry(curve).or_insert(0) += coef;
        }
        cycle.retain(|_, v| *v != 0);
        if &cycle != st.tag_cycle(root_index(&comp.tag)) {
            return Err(format!("the limit of {} differs", comp.tag));
        }
    }
    Ok(())
}

fn resolve(o: &OutcomeSpec, st: &DegenerationState, name: &str) -> Result<(Side, CurveId), String> {
    let nc = o.curves.iter().find(|c| c.name == name).expect("validated");
    let side = nc.side.side();
    let comp = st.component(side);
    let tag_curve = |g: &str| st.full_tag_curve(root_index(g)).filter(|(s, _)| *s == side);
    let hits: Vec<CurveId> = comp
        .curves()
        .filter(|c| c.self_int == nc.self_int)
        .filter(|c| nc.d_mult.is_none_or(|d| c.d_mult == d))
        .filter(|c| nc.tag.as_deref().is_none_or(|t| tag_curve(t) == Some((side, c.id))))
        .filter(|c| {
            nc.meets
                .iter()
                .all(|(g, v)| tag_curve(g).is_some_and(|(_, other)| comp.intersection(c.id, other) == *v))
        })
        .map(|c| c.id)
        .collect();
    match hits.as_slice() {
        [one] => Ok((side, *one)),
        [] => Err(format!("no curve matches {name}")),
        _ => Err(format!("{} curves match {name}", hits.len())),
    }
}

type QMap = BTreeMap<String, Q>;

fn add_scaled(into: &mut QMap, from: &QMap, k: &Q) {
    for (name, e) in from {
        *into.entry(name.clone()).or_insert_with(|| q(0)) += e * k;
    }
    into.retain(|_, v| sign(v) != 0);
}

/// Polytope, grading, rescaling, invariance and the chart pipelines.
pub fn toric_checks(t: &ToricData) -> Vec<CheckRecord> {
    let scope = "toric";
    let mut out = Vec::new();
    let listed: BTreeSet<[i64; 4]> = t.monomials.iter().map(|m| m.exponents).collect();

    match LatticePolytope::new(&t.vertices).and_then(|p| Ok((p.is_reflexive()?, p.polar_dual()?))) {
        Ok((reflexive, dual)) => {
            out.push(check(scope, "reflexive", reflexive, "the simplex is reflexive"));
            let points = dual.to_lattice().map(|l| l.lattice_points());
            let ok = match points {
                Some(Ok(points)) => {
                    let degrees: BTreeSet<[i64; 4]> = points
                        .iter()
                        .map(|m| {
                            let mut d = [0i64; 4];
                            for (di, u) in d.iter_mut().zip(&t.vertices) {
                                *di = m[0] * u[0] + m[1] * u[1] + m[2] * u[2] + 1;
                            }
                            d
                        })
                        .collect();
                    degrees == listed
                }
                _ => false,
            };
            out.push(check(
                scope,
                "dual-lattice-points",
                ok,
                "lattice points of the polar dual are the listed monomials",
            ));
        }
        Err(e) => out.push(check(scope, "reflexive", false, e.to_string())),
    }

    let rows = IntMatrix::from_rows(&t.vertices[1..]);
    let r = match sublattice_index(&rows) {
        Ok(i) => check(
            scope,
            "sublattice-index",
            i == t.sublattice_index,
            format!("index {i}, stated {}", t.sublattice_index),
        ),
        Err(e) => check(scope, "sublattice-index", false, e.to_string()),
    };
    out.push(r);
    let r = match lattice_quotient(&rows) {
        Ok(g) => check(
            scope,
            "quotient-group-order",
            g.order() == t.group_order,
            format!("invariant factors {:?}, order {}", g.invariant_factors, g.order()),
        ),
        Err(e) => check(scope, "quotient-group-order", false, e.to_string()),
    };
    out.push(r);

    let deg = cox_degree(t.anticanonical_exponents);
    out.push(check(
        scope,
        "anticanonical-degree",
        deg.z_degree == t.anticanonical_degree && deg.g_element == GElement::identity(),
        format!(
            "deg{:?} = ({}, {:?})",
            t.anticanonical_exponents,
            deg.z_degree,
            deg.g_element.tuple()
        ),
    ));
    let found: BTreeSet<[i64; 4]> = enumerate_monomials(deg).into_iter().collect();
    out.push(check(
        scope,
        "anticanonical-monomials",
        found == listed && found.len() == t.monomials.len(),
        format!("{} monomials enumerated, {} listed", found.len(), t.monomials.len()),
    ));
    let bad: Vec<String> = t
        .monomials
        .iter()
        .filter(|m| m.exponents.iter().zip(&t.weights).map(|(e, w)| e * w).sum::<i64>() != t.anticanonical_degree)
        .map(|m| m.coefficient.clone())
        .collect();
    let detail = if bad.is_empty() {
        format!(
            "every monomial has degree {} at weights {:?}",
            t.anticanonical_degree, t.weights
        )
    } else {
        format!("off-degree monomials: {}", bad.join(", "))
    };
    out.push(check(scope, "weighted-degree", bad.is_empty(), detail));

    out.push(rescaling_check(t));
    out.extend(invariance_checks(t));
    for p in &t.pipelines {
        out.extend(pipeline_checks(t, p));
    }
    out
}

/// Coefficient of each monomial after applying the rescaling factors.
pub fn rescaled_coefficients(t: &ToricData) -> Vec<QMap> {
    let factors: BTreeMap<&str, QMap> = t
        .rescaling
        .iter()
        .map(|(v, f)| {
            (
                v.as_str(),
                f.iter()
                    .map(|(a, c)| (a.clone(), c.value().expect("validated")))
                    .collect(),
            )
        })
        .collect();
    t.monomials
        .iter()
        .map(|m| {
            let mut total = QMap::new();
            total.insert(m.coefficient.clone(), q(1));
            for (i, &e) in m.exponents.iter().enumerate() {
                if let Some(f) = factors.get(format!("x{i}").as_str()) {
                    add_scaled(&mut total, f, &q(e));
                }
            }
            total
        })
        .collect()
}

fn rescaling_check(t: &ToricData) -> CheckRecord {
    let mut bad = Vec::new();
    let mut used = BTreeSet::new();
    for ((m, got), name) in t
        .monomials
        .iter()
        .zip(rescaled_coefficients(t))
        .zip(&t.normalized_coefficients)
    {
        let want: QMap = if name == "1" {
            QMap::new()
        } else {
            used.insert(name.as_str());
            match t.invariants.get(name) {
                Some(inv) => inv.iter().map(|(a, e)| (a.clone(), q(i64::from(*e)))).collect(),
                None => {
                    bad.push(format!("{name} has no invariant"));
                    continue;
                }
            }
        };
        if got != want {
            let text: Vec<String> = got.iter().map(|(a, e)| format!("{a}^{e}")).collect();
            bad.push(format!("{} becomes {}", m.coefficient, text.join("*")));
        }
    }
    let unused: Vec<&String> = t.invariants.keys().filter(|k| !used.contains(k.as_str())).collect();
    if !unused.is_empty() {
        bad.push(format!("unused invariants {unused:?}"));
    }
    let detail = if bad.is_empty() {
        format!("rescaling yields coefficients {}", t.normalized_coefficients.join(", "))
    } else {
        bad.join("; ")
    };
    check("toric", "rescaling", bad.is_empty(), detail)
}

/// Weights of the monomial coefficients under `(C*)⁴` and overall scaling.
pub fn coefficient_weights(t: &ToricData) -> BTreeMap<String, Vec<i64>> {
    let attached: BTreeMap<String, Vec<i32>> = t
        .monomials
        .iter()
        .map(|m| (m.coefficient.clone(), m.exponents.iter().map(|&e| e as i32).collect()))
        .collect();
    TorusAction::full(4)
        .induced_parameter_weights(&attached, true)
        .expect("four exponents per monomial")
}

pub fn combination_is_invariant(t: &ToricData, combination: &BTreeMap<String, i32>) -> bool {
    let pm = ParamMonomial::from_pairs(combination.iter().map(|(a, e)| (a.as_str(), *e)));
    invariance_check(&pm, &TorusAction::full(4), &coefficient_weights(t)).unwrap_or(false)
}

fn invariance_checks(t: &ToricData) -> Vec<CheckRecord> {
    t.invariants
        .iter()
        .map(|(b, inv)| {
            let pm = ParamMonomial::from_pairs(inv.iter().map(|(a, e)| (a.as_str(), *e)));
            check(
                "toric",
                format!("invariant[{b}]"),
                combination_is_invariant(t, inv),
                format!("{b} = {pm} has weight zero"),
            )
        })
        .collect()
}

/// The intermediate polynomials of one chart pipeline.
#[derive(Debug, Clone)]
pub struct PipelineTrace {
    pub cleared: LaurentPolynomial,
    pub minimal_multiplier: Vec<i32>,
    pub changed: LaurentPolynomial,
    pub reduced: LaurentPolynomial,
}

pub fn run_pipeline(p: &Pipeline) -> Result<PipelineTrace, String> {
    let y = hyperplane_vars();
    let yv: Vec<&str> = y.iter().map(String::as_str).collect();
    let parse = |t: &str, vars: &[&str]| LaurentPolynomial::parse_equation(t, vars).map_err(|e| e.to_string());
    let h = parse(&p.hyperplane, &yv)?;
    let mut map = BTreeMap::new();
    map.insert(p.chart.clone(), LaurentPolynomial::constant(&yv, q(1)));
    for (v, r) in &p.relations {
        map.insert(v.clone(), parse(r, &yv)?);
    }
    let restricted = substitute(&h, &map, &yv).map_err(|e| e.to_string())?;
    let (minimal, minimal_multiplier) = clear_denominators(&restricted);
    let cleared = match &p.multiplier {
        Some(m) => restricted.try_mul(&parse(m, &yv)?).map_err(|e| e.to_string())?,
        None => minimal,
    };
    if cleared.terms().any(|(k, _)| k.exps.iter().any(|&e| e < 0)) {
        return Err(String::from("the multiplier leaves negative exponents"));
    }
    let cv: Vec<&str> = p.coordinates.iter().map(String::as_str).collect();
    let support = cleared.support();
    let mut change = BTreeMap::new();
    for (i, v) in yv.iter().enumerate() {
        let image = match p.change.get(*v) {
            Some(text) => parse(text, &cv)?,
            None if support.iter().all(|e| e[i] == 0) => LaurentPolynomial::constant(&cv, q(1)),
            None => return Err(format!("{v} occurs but has no image")),
        };
        change.insert((*v).to_owned(), image);
    }
    let changed = substitute(&cleared, &change, &cv).map_err(|e| e.to_string())?;
    let mut reduced = changed.clone();
    for (v, k) in &p.completions {
        reduced = complete_power(&reduced, v, *k)
            .map_err(|e| format!("completing {v}^{k}: {e}"))?
            .0;
    }
    Ok(PipelineTrace {
        cleared,
        minimal_multiplier,
        changed,
        reduced,
    })
}

fn pipeline_checks(t: &ToricData, p: &Pipeline) -> Vec<CheckRecord> {
    let scope = "toric";
    let id = |what: &str| format!("pipeline[{}].{what}", p.name);
    let mut out = vec![relation_consistency(t, p)];
    let trace = match run_pipeline(p) {
        Ok(tr) => tr,
        Err(e) => {
            out.push(check(scope, id("run"), false, e));
            return out;
        }
    };
    let y = hyperplane_vars();
    let yv: Vec<&str> = y.iter().map(String::as_str).collect();
    let cv: Vec<&str> = p.coordinates.iter().map(String::as_str).collect();
    let parse = |text: &str, vars: &[&str]| LaurentPolynomial::parse_equation(text, vars).expect("validated");

    let mut detail = format!("{} = 0", trace.cleared);
    let minimal = LaurentPolynomial::monomial(&yv, &trace.minimal_multiplier, ParamMonomial::one(), q(1))
        .expect("nine exponents");
    if p.multiplier.is_some() {
        detail.push_str(&format!(" (explicit multiplier; the minimal one is {minimal})"));
    }
    out.push(check(
        scope,
        id("cleared"),
        trace.cleared == parse(&p.expected_cleared, &yv),
        detail,
    ));
    out.push(check(
        scope,
        id("changed"),
        trace.changed == parse(&p.expected_changed, &cv),
        format!("{} = 0", trace.changed),
    ));
    let want: BTreeSet<Vec<i32>> = parse(&p.expected_support, &cv).support().into_iter().collect();
    let got: BTreeSet<Vec<i32>> = trace.reduced.support().into_iter().collect();
    out.push(check(
        scope,
        id("normal-form-support"),
        got == want,
        format!("{} = 0", trace.reduced),
    ));
    let polynomial = trace.reduced.terms().all(|(k, _)| k.params.iter().all(|(_, e)| e >= 0));
    out.push(check(
        scope,
        id("normal-form-coefficients"),
        polynomial,
        "the new coefficients are polynomials in the old parameters",
    ));
    out
}

/// Each relation must hold for `y_i = ψ_i / ψ_chart`.
fn relation_consistency(t: &ToricData, p: &Pipeline) -> CheckRecord {
    let y = hyperplane_vars();
    let yv: Vec<&str> = y.iter().map(String::as_str).collect();
    let index = |v: &str| yv.iter().position(|w| *w == v).expect("validated variable");
    let c = t.monomials[index(&p.chart)].exponents;
    let chart_ratio = |j: usize| {
        let m = t.monomials[j].exponents;
        [m[0] - c[0], m[1] - c[1], m[2] - c[2], m[3] - c[3]]
    };
    let mut bad = Vec::new();
    for (v, rhs) in &p.relations {
        let r = LaurentPolynomial::parse_equation(rhs, &yv).expect("validated");
        let terms: Vec<_> = r.terms().collect();
        let ok = match terms.as_slice() {
            [(k, coef)] if **coef == q(1) && k.params.is_one() => {
                let mut total = [0i64; 4];
                for (j, &e) in k.exps.iter().enumerate() {
                    for (tot, d) in total.iter_mut().zip(chart_ratio(j)) {
                        *tot += i64::from(e) * d;
                    }
                }
                total == chart_ratio(index(v))
            }
            _ => false,
        };
        if !ok {
            bad.push(format!("{v} = {rhs}"));
        }
    }
    let detail = if bad.is_empty() {
        format!("all {} relations hold for the monomial ratios", p.relations.len())
    } else {
        format!("relations failing on the torus: {}", bad.join(", "))
    };
    check(
        "toric",
        format!("pipeline[{}].relations", p.name),
        bad.is_empty(),
        detail,
    )
}

pub fn flop_graph(catalog: &Catalog, reflection_quotient: bool) -> FlopGraph {
    let seed = catalog.seed_state.state().expect("validated seed");
    enumerate_degenerations(
        &seed,
        EnumerationOptions {
            reflection_quotient,
            ..EnumerationOptions::default()
        },
    )
}

fn gamma_text(text: &str) -> String {
    GammaLabel::parse(text).map_or_else(|| text.to_owned(), |g| g.to_string())
}

pub fn flop_checks(catalog: &Catalog, graph: &FlopGraph) -> Vec<CheckRecord> {
    let scope = "flops";
    let mut out = Vec::new();
    let seed = catalog.seed_state.state().expect("validated seed");
    out.push(check(
        scope,
        "seed-builtin",
        seed.is_isomorphic(&seed_e6e12()),
        "the catalog seed is isomorphic to the built-in central fibre",
    ));
    let g = classify_gamma(&seed)
        .map(|g| g.to_string())
        .unwrap_or_else(|e| e.to_string());
    out.push(check(
        scope,
        "seed-gamma",
        g == gamma_text(&catalog.seed_state.gamma),
        format!("seed Γ = {g}"),
    ));
    out.push(check(
        scope,
        "closure",
        !graph.truncated && graph.discrepancies().is_empty(),
        format!(
            "{} states, truncated: {}, unclassified: {}",
            graph.nodes.len(),
            graph.truncated,
            graph.discrepancies().len()
        ),
    ));
    let rows: BTreeSet<String> = catalog.rows().iter().map(|(_, o)| gamma_text(&o.gamma)).collect();
    let labels: Vec<String> = graph.nodes.iter().map(|n| n.gamma_text()).collect();
    let distinct: BTreeSet<String> = labels.iter().cloned().collect();
    out.push(check(
        scope,
        "state-count",
        graph.nodes.len() == rows.len() && distinct.len() == labels.len(),
        format!("{} states, {} table rows", graph.nodes.len(), rows.len()),
    ));
    out.push(check(
        scope,
        "table-coverage",
        distinct == rows,
        format!("Γ labels: {}", labels.join(", ")),
    ));
    let pair = |a: String, b: String| if a <= b { (a, b) } else { (b, a) };
    let have: BTreeSet<(String, String)> = graph
        .edges
        .iter()
        .map(|&(a, b)| pair(labels[a].clone(), labels[b].clone()))
        .collect();
    let want: BTreeSet<(String, String)> = catalog
        .seed_state
        .adjacency
        .iter()
        .map(|(a, b)| pair(gamma_text(a), gamma_text(b)))
        .collect();
    let edges: Vec<String> = have.iter().map(|(a, b)| format!("{a}–{b}")).collect();
    out.push(check(
        scope,
        "adjacency",
        have == want,
        format!("edges: {}", edges.join(", ")),
    ));
    let bad: Vec<String> = graph
        .nodes
        .iter()
        .filter(|n| {
            !triple_point_check(&n.state)
                || !n.state.v1.consistency_errors().is_empty()
                || !n.state.v2.consistency_errors().is_empty()
        })
        .map(|n| n.gamma_text())
        .collect();
    out.push(check(
        scope,
        "triple-point",
        bad.is_empty(),
        if bad.is_empty() {
            String::from("K²(V1) + K²(V2) = 0 and D² = K² on every component of every state")
        } else {
            format!("failing states: {}", bad.join(", "))
        },
    ));
    out
}

/// Every check, in a fixed order: lattice, fibrations, toric, flops, then
/// the models in catalog order.
pub fn run_all(catalog: &Catalog) -> CheckReport {
    let graph = flop_graph(catalog, true);
    let mut records = lattice_checks();
    records.extend(fibration_checks(catalog));
    records.extend(toric_checks(&catalog.toric));
    records.extend(flop_checks(catalog, &graph));
    for m in &catalog.models {
        records.extend(verify_model(m, &graph));
    }
    let mut report = CheckReport::new(records);
    report.rows = catalog.rows().iter().map(|(_, o)| o.gamma.clone()).collect();
    report.flop_graph = Some(GraphSummary::from_graph(&graph));
    report
}

/// The checks for a single model, with the flop graph they need.
pub fn verify_model_report(catalog: &Catalog, record: &ModelRecord) -> CheckReport {
    let graph = flop_graph(catalog, true);
    let mut report = CheckReport::new(verify_model(record, &graph));
    report.rows = record.rows();
    report.overall = overall_of(&report.records);
    report
}
