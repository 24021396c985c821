//! The machine-readable catalog of projective models, fibrations, the
//! seed central fibre and the toric data.
//!
//! The on-disk format is JSON. Every object rejects unknown fields. Divisor
//! classes are written as `{"e": [19 coefficients], "s": .., "t": ..}` with
//! the root coefficients in the order `E0, E1, …, E18`; a coefficient is a
//! JSON integer or a string holding a fraction such as `"3/2"`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tyurin_core::degen::{ComponentSurface, DegenerationState, GammaLabel, PointId, Side, TagCycle, TAG_COUNT};
use tyurin_core::lattice::{parse_dynkin_multiset, DynkinLabel};
use tyurin_core::ns::{DivisorClass, FibrationName, FibrationRecord, Generator, KodairaType, ReducibleFibre};
use tyurin_core::poly::LaurentPolynomial;
use tyurin_core::rational::{parse_q, Q};

/// The catalog shipped with the crate.
pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.json");

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column} (field `{field}`): {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("schema violation in {location}: {message}")]
    Schema { location: String, message: String },
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> CatalogError {
    CatalogError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

/// An exact rational written as a JSON integer or a fraction string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::Int(0)
    }
}

impl Coeff {
    pub fn value(&self) -> Result<Q, String> {
        match self {
            Coeff::Int(n) => Ok(Q::from_integer((*n).into())),
            Coeff::Text(s) => parse_q(s).map_err(|e| e.to_string()),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coeff::Int(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub e: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Coeff::is_zero")]
    pub s: Coeff,
    #[serde(default, skip_serializing_if = "Coeff::is_zero")]
    pub t: Coeff,
}

impl ClassSpec {
    pub fn to_class(&self) -> Result<DivisorClass, String> {
        if self.e.len() != 19 {
            return Err(format!("expected 19 root coefficients, found {}", self.e.len()));
        }
        let roots = self.e.iter().map(Coeff::value).collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorClass::from_parts(&roots, self.s.value()?, self.t.value()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    LinearSystem,
    Toric,
    Both,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::LinearSystem => "linear system",
            Construction::Toric => "toric",
            Construction::Both => "linear system and toric",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub models: Vec<ModelRecord>,
    pub fibrations: Vec<FibrationEntry>,
    pub seed_state: SeedState,
    pub toric: ToricData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelRecord {
    /// The `Γ` tag of the first listed degeneration.
    pub name: String,
    pub construction: Construction,
    /// Absent when the source gives no divisor for the model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarising_divisor: Option<ClassSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stated_self_intersection: Option<Coeff>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stated_h0: Vec<StatedH0>,
    #[serde(default)]
    pub sections: Vec<SectionSpec>,
    pub contractions: Vec<ContractionSpec>,
    /// Contractions of the model before a partial resolution, if any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_contractions: Vec<ContractionSpec>,
    #[serde(default)]
    pub strict_transforms: BTreeMap<String, String>,
    pub singularities: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    pub degenerations: Vec<OutcomeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatedH0 {
    pub multiple: u32,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub name: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassSpec>,
    /// Intersection numbers with generators, for sections given only that way.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersections: Option<BTreeMap<String, i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionSpec {
    pub generators: Vec<String>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeSpec {
    pub gamma: String,
    /// Table description such as `X12 ⊂ WP(1,1,4,6)`.
    pub model: String,
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    pub equations: Vec<EquationSpec>,
    pub degeneration_parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine_chart: Option<AffineChart>,
    pub k_squared: [i64; 2],
    /// Full tags that are `(−2)`-curves on `V1` and on `V2`.
    pub minus_two_tags: [Vec<String>; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<NamedCurve>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composites: Vec<Composite>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSpec {
    pub text: String,
    pub degree: i64,
}

/// Setting `variable = 1` must reproduce `expected` term for term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineChart {
    pub variable: String,
    pub expected: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SideName {
    V1,
    V2,
}

impl SideName {
    pub fn side(self) -> Side {
        match self {
            SideName::V1 => Side::V1,
            SideName::V2 => Side::V2,
        }
    }
}

/// A curve of the central fibre singled out by its numerical data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedCurve {
    pub name: String,
    pub side: SideName,
    pub self_int: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_mult: Option<i64>,
    /// The tag this curve carries on its own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    /// Intersection numbers with the curves carrying the given tags.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meets: BTreeMap<String, i64>,
}

/// The limit of a polarisation class as a combination of named curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Composite {
    pub tag: String,
    pub terms: Vec<(i64, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationEntry {
    pub name: String,
    pub fibre_class: ClassSpec,
    pub sections: Vec<String>,
    pub reducible_fibres: Vec<FibreSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreSpec {
    pub kodaira: String,
    pub components: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedState {
    pub gamma: String,
    pub components: Vec<SeedComponent>,
    pub shared_points: Vec<PointId>,
    /// Each tag as a combination `[side, curve, multiplicity]`.
    pub tags: BTreeMap<String, Vec<(SideName, String, i64)>>,
    /// Expected flop adjacency between `Γ` labels, up to reflection.
    #[serde(default)]
    pub adjacency: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedComponent {
    pub side: SideName,
    pub k_squared: i64,
    pub curves: Vec<SeedCurve>,
    pub intersections: Vec<(String, String, i64)>,
    pub points: Vec<SeedPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedCurve {
    pub name: String,
    pub self_int: i64,
    pub d_mult: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedPoint {
    pub id: PointId,
    pub incidences: Vec<SeedIncidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedIncidence {
    pub curve: String,
    pub mult: i64,
    pub contact: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricData {
    pub vertices: Vec<[i64; 3]>,
    pub weights: Vec<i64>,
    pub sublattice_index: u64,
    pub group_order: u64,
    pub anticanonical_exponents: [i64; 4],
    pub anticanonical_degree: i64,
    /// The monomials of the anticanonical system, in the order of the
    /// components of the quotient map to `P⁸`.
    pub monomials: Vec<ToricMonomial>,
    /// Exponents of the coefficients in each variable's rescaling factor.
    pub rescaling: BTreeMap<String, BTreeMap<String, Coeff>>,
    /// Coefficient of each monomial after rescaling (`1` or a `b_i`).
    pub normalized_coefficients: Vec<String>,
    pub invariants: BTreeMap<String, BTreeMap<String, i32>>,
    pub pipelines: Vec<Pipeline>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricMonomial {
    pub coefficient: String,
    pub exponents: [i64; 4],
}

/// Restriction of the hyperplane to a torus chart and the reduction to
/// an affine normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pipeline {
    pub name: String,
    pub hyperplane: String,
    /// Variable set to 1.
    pub chart: String,
    pub relations: BTreeMap<String, String>,
    /// Explicit multiplier; the minimal one is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<String>,
    pub expected_cleared: String,
    pub coordinates: Vec<String>,
    /// Old variables in terms of the new coordinates.
    pub change: BTreeMap<String, String>,
    pub expected_changed: String,
    /// `(variable, power)` completions in order.
    pub completions: Vec<(String, u32)>,
    /// Final form; compared by monomial support.
    pub expected_support: String,
}

/// Names of the nine ambient coordinates of `P⁸`.
pub fn hyperplane_vars() -> Vec<String> {
    (0..9).map(|i| format!("y{i}")).collect()
}

pub fn parse_generator(name: &str, location: &str) -> Result<Generator, CatalogError> {
    Generator::parse(name).ok_or_else(|| schema(location, format!("unknown generator `{name}`")))
}

pub fn parse_labels(text: &str, location: &str) -> Result<Vec<DynkinLabel>, CatalogError> {
    parse_dynkin_multiset(text).ok_or_else(|| schema(location, format!("bad Dynkin label `{text}`")))
}

pub fn parse_gamma(text: &str, location: &str) -> Result<GammaLabel, CatalogError> {
    GammaLabel::parse(text).ok_or_else(|| schema(location, format!("bad Γ label `{text}`")))
}

fn class(spec: &ClassSpec, location: &str) -> Result<DivisorClass, CatalogError> {
    spec.to_class().map_err(|m| schema(location, m))
}

fn kodaira(text: &str, location: &str) -> Result<KodairaType, CatalogError> {
    let bad = || schema(location, format!("unknown Kodaira type `{text}`"));
    if text == "II*" {
        return Ok(KodairaType::IIStar);
    }
    let rest = text.strip_prefix('I').ok_or_else(bad)?;
    match rest.strip_suffix('*') {
        Some(n) => n.parse().map(KodairaType::InStar).map_err(|_| bad()),
        None => rest.parse().map(KodairaType::In).map_err(|_| bad()),
    }
}

impl ModelRecord {
    pub fn divisor(&self) -> Option<DivisorClass> {
        self.polarising_divisor
            .as_ref()
            .map(|d| d.to_class().expect("validated"))
    }

    pub fn singularity_labels(&self) -> Vec<DynkinLabel> {
        parse_dynkin_multiset(&self.singularities).expect("validated")
    }

    pub fn rows(&self) -> Vec<String> {
        self.degenerations.iter().map(|o| o.gamma.clone()).collect()
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let at = |what: &str| format!("model {}: {what}", self.name);
        if let Some(d) = &self.polarising_divisor {
            class(d, &at("polarising_divisor"))?;
        }
        if let Some(c) = &self.stated_self_intersection {
            c.value().map_err(|m| schema(at("stated_self_intersection"), m))?;
        }
        for s in &self.sections {
            let loc = at(&format!("section {}", s.name));
            match (&s.class, &s.intersections) {
                (Some(c), None) => {
                    class(c, &loc)?;
                }
                (None, Some(map)) => {
                    for g in map.keys() {
                        parse_generator(g, &loc)?;
                    }
                }
                _ => return Err(schema(loc, "give exactly one of `class` and `intersections`")),
            }
            if s.degree == 0 {
                return Err(schema(loc, "degree must be positive"));
            }
        }
        let mut union = Vec::new();
        for c in self.contractions.iter().chain(&self.base_contractions) {
            let loc = at(&format!("contraction {}", c.label));
            for g in &c.generators {
                parse_generator(g, &loc)?;
            }
            parse_labels(&c.label, &loc)?;
        }
        for c in &self.contractions {
            union.extend(parse_labels(&c.label, "")?);
        }
        union.sort();
        let sing = parse_labels(&self.singularities, &at("singularities"))?;
        if sing != union {
            return Err(schema(
                at("singularities"),
                format!(
                    "`{}` is not the union of the contraction labels `{}`",
                    self.singularities,
                    tyurin_core::lattice::format_dynkin_multiset(&union)
                ),
            ));
        }
        for g in self.strict_transforms.keys() {
            parse_generator(g, &at("strict_transforms"))?;
        }
        if self.degenerations.is_empty() {
            return Err(schema(at("degenerations"), "at least one outcome is required"));
        }
        if self.degenerations[0].gamma != self.name {
            return Err(schema(at("name"), "the name must be the Γ of the first outcome"));
        }
        for o in &self.degenerations {
            o.validate(&at(&format!("outcome {}", o.gamma)))?;
        }
        Ok(())
    }
}

impl OutcomeSpec {
    pub fn vars(&self) -> Vec<&str> {
        self.variables.iter().map(String::as_str).collect()
    }

    pub fn parsed_equations(&self) -> Vec<LaurentPolynomial> {
        let vars = self.vars();
        self.equations
            .iter()
            .map(|e| LaurentPolynomial::parse_equation(&e.text, &vars).expect("validated"))
            .collect()
    }

    fn validate(&self, loc: &str) -> Result<(), CatalogError> {
        parse_gamma(&self.gamma, loc)?;
        if self.variables.len() != self.weights.len() {
            return Err(schema(loc, "one weight per variable is required"));
        }
        if self.equations.is_empty() {
            return Err(schema(loc, "at least one equation is required"));
        }
        let vars = self.vars();
        for e in &self.equations {
            LaurentPolynomial::parse_equation(&e.text, &vars).map_err(|err| schema(loc, format!("equation: {err}")))?;
        }
        if let Some(chart) = &self.affine_chart {
            if !self.variables.contains(&chart.variable) {
                return Err(schema(
                    loc,
                    format!("affine chart variable `{}` is not a coordinate", chart.variable),
                ));
            }
            LaurentPolynomial::parse_equation(&chart.expected, &vars)
                .map_err(|err| schema(loc, format!("affine chart: {err}")))?;
        }
        let params: BTreeSet<String> = self.parsed_equations().iter().flat_map(|p| p.parameters()).collect();
        if !params.contains(&self.degeneration_parameter) {
            return Err(schema(
                loc,
                format!(
                    "degeneration parameter `{}` does not occur in the equations",
                    self.degeneration_parameter
                ),
            ));
        }
        for list in &self.minus_two_tags {
            for g in list {
                parse_generator(g, loc)?;
            }
        }
        let names: BTreeSet<&str> = self.curves.iter().map(|c| c.name.as_str()).collect();
        for c in &self.curves {
            for g in c.tag.iter().chain(c.meets.keys()) {
                parse_generator(g, loc)?;
            }
        }
        for c in &self.composites {
            parse_generator(&c.tag, loc)?;
            for (_, n) in &c.terms {
                if !names.contains(n.as_str()) {
                    return Err(schema(
                        loc,
                        format!("composite for {} names unknown curve `{n}`", c.tag),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl FibrationEntry {
    pub fn record(&self) -> Result<FibrationRecord, CatalogError> {
        let loc = format!("fibration {}", self.name);
        let name = match self.name.as_str() {
            "standard" => FibrationName::Standard,
            "alternate" => FibrationName::Alternate,
            other => return Err(schema(&loc, format!("unknown fibration `{other}`"))),
        };
        let sections = self
            .sections
            .iter()
            .map(|g| parse_generator(g, &loc))
            .collect::<Result<_, _>>()?;
        let mut fibres = Vec::new();
        for f in &self.reducible_fibres {
            let components = f
                .components
                .iter()
                .map(|(g, m)| parse_generator(g, &loc).map(|g| (g, *m)))
                .collect::<Result<_, _>>()?;
            fibres.push(ReducibleFibre {
                kodaira: kodaira(&f.kodaira, &loc)?,
                components,
            });
        }
        Ok(FibrationRecord {
            name,
            fibre_class: class(&self.fibre_class, &loc)?,
            sections,
            reducible_fibres: fibres,
        })
    }
}

impl SeedState {
    /// Builds the central fibre; curve ids follow the listed order.
    pub fn state(&self) -> Result<DegenerationState, CatalogError> {
        let loc = "seed_state";
        let mut built: BTreeMap<SideName, (ComponentSurface, BTreeMap<String, u32>)> = BTreeMap::new();
        for comp in &self.components {
            let mut s = ComponentSurface::empty(comp.k_squared);
            let mut ids = BTreeMap::new();
            for c in &comp.curves {
                let id = s.add_curve(c.self_int, c.d_mult);
                if ids.insert(c.name.clone(), id).is_some() {
                    return Err(schema(loc, format!("duplicate curve `{}`", c.name)));
                }
            }
            let lookup = |n: &str| {
                ids.get(n)
                    .copied()
                    .ok_or_else(|| schema(loc, format!("unknown curve `{n}` on {:?}", comp.side)))
            };
            for (a, b, v) in &comp.intersections {
                s.set_intersection(lookup(a)?, lookup(b)?, *v)
                    .map_err(|e| schema(loc, e.to_string()))?;
            }
            for p in &comp.points {
                s.add_point(p.id);
                for inc in &p.incidences {
                    s.set_incidence(p.id, lookup(&inc.curve)?, inc.mult, inc.contact)
                        .map_err(|e| schema(loc, e.to_string()))?;
                }
            }
            let errors = s.consistency_errors();
            if !errors.is_empty() {
                return Err(schema(loc, errors.join("; ")));
            }
            if built.insert(comp.side, (s, ids)).is_some() {
                return Err(schema(loc, format!("component {:?} listed twice", comp.side)));
            }
        }
        let (Some((v1, ids1)), Some((v2, ids2))) = (built.remove(&SideName::V1), built.remove(&SideName::V2)) else {
            return Err(schema(loc, "both components V1 and V2 are required"));
        };
        let mut tags = vec![TagCycle::new(); TAG_COUNT];
        for (name, terms) in &self.tags {
            let Generator::E(i) = parse_generator(name, loc)? else {
                return Err(schema(loc, format!("`{name}` is not a root")));
            };
            for (side, curve, m) in terms {
                let ids = if *side == SideName::V1 { &ids1 } else { &ids2 };
                let id = ids
                    .get(curve)
                    .ok_or_else(|| schema(loc, format!("tag {name} names unknown curve `{curve}`")))?;
                *tags[i as usize].entry((side.side(), *id)).or_insert(0) += m;
            }
        }
        if let Some(i) = tags.iter().position(TagCycle::is_empty) {
            return Err(schema(loc, format!("tag E{i} has no curves")));
        }
        DegenerationState::new(v1, v2, self.shared_points.iter().copied().collect(), tags)
            .map_err(|e| schema(loc, e.to_string()))
    }
}

impl ToricData {
    fn validate(&self) -> Result<(), CatalogError> {
        let loc = "toric";
        if self.vertices.len() != 4 || self.weights.len() != 4 {
            return Err(schema(loc, "expected four vertices and four weights"));
        }
        if self.monomials.len() != self.normalized_coefficients.len() {
            return Err(schema(loc, "one normalized coefficient per monomial is required"));
        }
        let x: Vec<String> = (0..4).map(|i| format!("x{i}")).collect();
        for (v, factor) in &self.rescaling {
            if !x.contains(v) {
                return Err(schema(loc, format!("rescaling of unknown variable `{v}`")));
            }
            for c in factor.values() {
                c.value().map_err(|m| schema(loc, m))?;
            }
        }
        let y = hyperplane_vars();
        let yv: Vec<&str> = y.iter().map(String::as_str).collect();
        for p in &self.pipelines {
            let ploc = format!("toric pipeline {}", p.name);
            let parse = |t: &str, vars: &[&str]| {
                LaurentPolynomial::parse_equation(t, vars).map_err(|e| schema(&ploc, format!("`{t}`: {e}")))
            };
            parse(&p.hyperplane, &yv)?;
            parse(&p.expected_cleared, &yv)?;
            for r in p.relations.values() {
                parse(r, &yv)?;
            }
            if let Some(m) = &p.multiplier {
                parse(m, &yv)?;
            }
            let cv: Vec<&str> = p.coordinates.iter().map(String::as_str).collect();
            for c in p.change.values() {
                parse(c, &cv)?;
            }
            parse(&p.expected_changed, &cv)?;
            parse(&p.expected_support, &cv)?;
        }
        Ok(())
    }
}

impl Catalog {
    pub fn model(&self, name: &str) -> Option<&ModelRecord> {
        self.models.iter().find(|m| m.name == name)
    }

    /// Table rows in catalog order: `(Γ, record, outcome)`.
    pub fn rows(&self) -> Vec<(&ModelRecord, &OutcomeSpec)> {
        self.models
            .iter()
            .flat_map(|m| m.degenerations.iter().map(move |o| (m, o)))
            .collect()
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let mut names = BTreeSet::new();
        let mut gammas = BTreeSet::new();
        for m in &self.models {
            if !names.insert(m.name.as_str()) {
                return Err(schema(format!("model {}", m.name), "duplicate model name"));
            }
            m.validate()?;
            for o in &m.degenerations {
                let g = parse_gamma(&o.gamma, &m.name)?;
                if !gammas.insert(g) {
                    return Err(schema(
                        format!("model {}", m.name),
                        format!("Γ {} appears twice", o.gamma),
                    ));
                }
            }
        }
        for f in &self.fibrations {
            f.record()?;
        }
        parse_gamma(&self.seed_state.gamma, "seed_state")?;
        for (a, b) in &self.seed_state.adjacency {
            parse_gamma(a, "seed_state adjacency")?;
            parse_gamma(b, "seed_state adjacency")?;
        }
        self.seed_state.state()?;
        self.toric.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes") + "\n"
    }
}

pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let catalog: Catalog = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CatalogError::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })?;
    catalog.validate()?;
    Ok(catalog)
}

pub fn load_catalog(path: &Path) -> Result<Catalog, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

pub fn bundled() -> Catalog {
    parse_catalog(BUNDLED_CATALOG).expect("bundled catalog is valid")
}
