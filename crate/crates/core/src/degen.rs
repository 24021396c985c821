//! Numerical model of Tyurin central fibres `V1 ∪_D V2` and the flop move.
//!
//! Each component is recorded by its curves (self-intersection and degree
//! on `D`), their pairwise intersections, `K²` and `D²`, and the incidence
//! of curves with marked points of `D`. Marked points are positions on the
//! double curve, so a [`PointId`] has the same meaning on both components.
//! Every polarisation class `E_i` is tracked as an integral 1-cycle
//! supported on both components.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{dynkin_classify, format_dynkin_multiset, DynkinError, DynkinLabel};

pub type CurveId = u32;
pub type PointId = u32;

/// Number of polarisation tags `E0..E18`.
pub const TAG_COUNT: usize = 19;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegenError {
    UnknownCurve(CurveId),
    UnknownPoint(PointId),
    NotMinusOne(CurveId),
    Malformed(String),
    Ineligible(String),
    Dynkin(DynkinError),
}

impl fmt::Display for DegenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegenError::UnknownCurve(c) => write!(f, "no curve with id {c}"),
            DegenError::UnknownPoint(p) => write!(f, "no marked point with id {p}"),
            DegenError::NotMinusOne(c) => write!(f, "curve {c} is not a (-1)-curve"),
            DegenError::Malformed(m) => write!(f, "malformed configuration: {m}"),
            DegenError::Ineligible(m) => write!(f, "ineligible flop: {m}"),
            DegenError::Dynkin(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DegenError {}

impl From<DynkinError> for DegenError {
    fn from(e: DynkinError) -> Self {
        DegenError::Dynkin(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    V1,
    V2,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::V1 => Side::V2,
            Side::V2 => Side::V1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::V1 => 0,
            Side::V2 => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::V1 => "V1",
            Side::V2 => "V2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveNode {
    pub id: CurveId,
    pub self_int: i64,
    /// Intersection number with `D`.
    pub d_mult: i64,
    /// Polarisation tag `E_i` carried by this curve alone, if any.
    pub label: Option<u8>,
}

/// Local data of a curve at a marked point of `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Incidence {
    /// Multiplicity of the curve at the point.
    pub mult: i64,
    /// Local intersection number with `D` at the point.
    pub contact: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MarkedPoint {
    pub incidences: BTreeMap<CurveId, Incidence>,
}

/// One component `(V, D)` of the central fibre.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentSurface {
    curves: BTreeMap<CurveId, CurveNode>,
    /// Keyed by `(a, b)` with `a < b`; zero entries are not stored.
    intersections: BTreeMap<(CurveId, CurveId), i64>,
    k_squared: i64,
    d_squared: i64,
    points: BTreeMap<PointId, MarkedPoint>,
}

fn key(a: CurveId, b: CurveId) -> (CurveId, CurveId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl ComponentSurface {
    /// `P²` with `D` a smooth cubic: no curves, `K² = D² = 9`.
    pub fn projective_plane() -> Self {
        Self::empty(9)
    }

    pub fn empty(k_squared: i64) -> Self {
        ComponentSurface {
            curves: BTreeMap::new(),
            intersections: BTreeMap::new(),
            k_squared,
            d_squared: k_squared,
            points: BTreeMap::new(),
        }
    }

    pub fn k_squared(&self) -> i64 {
        self.k_squared
    }

    pub fn d_squared(&self) -> i64 {
        self.d_squared
    }

    /// Overrides `K²`; only meant for building inconsistent test fixtures.
    pub fn set_k_squared(&mut self, k: i64) {
        self.k_squared = k;
    }

    fn fresh_curve_id(&self) -> CurveId {
        self.curves.keys().next_back().map_or(0, |&c| c + 1)
    }

    pub fn add_curve(&mut self, self_int: i64, d_mult: i64) -> CurveId {
        let id = self.fresh_curve_id();
        self.curves.insert(
            id,
            CurveNode {
                id,
                self_int,
                d_mult,
                label: None,
            },
        );
        id
    }

    pub fn set_intersection(&mut self, a: CurveId, b: CurveId, value: i64) -> Result<(), DegenError> {
        for c in [a, b] {
            if !self.curves.contains_key(&c) {
                return Err(DegenError::UnknownCurve(c));
            }
        }
        if a == b {
            return Err(DegenError::Malformed(String::from(
                "use the curve's self_int for self-intersection",
            )));
        }
        if value == 0 {
            self.intersections.remove(&key(a, b));
        } else {
            self.intersections.insert(key(a, b), value);
        }
        Ok(())
    }

    pub fn add_point(&mut self, id: PointId) {
        self.points.entry(id).or_default();
    }

    pub fn set_incidence(&mut self, p: PointId, c: CurveId, mult: i64, contact: i64) -> Result<(), DegenError> {
        if !self.curves.contains_key(&c) {
            return Err(DegenError::UnknownCurve(c));
        }
        self.points
            .entry(p)
            .or_default()
            .incidences
            .insert(c, Incidence { mult, contact });
        Ok(())
    }

    pub fn curve(&self, c: CurveId) -> Option<&CurveNode> {
        self.curves.get(&c)
    }

    pub fn curves(&self) -> impl Iterator<Item = &CurveNode> {
        self.curves.values()
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn points(&self) -> impl Iterator<Item = (PointId, &MarkedPoint)> {
        self.points.iter().map(|(&p, m)| (p, m))
    }

    pub fn point(&self, p: PointId) -> Option<&MarkedPoint> {
        self.points.get(&p)
    }

    /// Intersection number; the diagonal is the self-intersection.
    pub fn intersection(&self, a: CurveId, b: CurveId) -> i64 {
        if a == b {
            return self.curves.get(&a).map_or(0, |c| c.self_int);
        }
        self.intersections.get(&key(a, b)).copied().unwrap_or(0)
    }

    /// Nonzero intersections of distinct curves.
    pub fn intersection_pairs(&self) -> impl Iterator<Item = ((CurveId, CurveId), i64)> + '_ {
        self.intersections.iter().map(|(&k, &v)| (k, v))
    }

    /// First marked point at which `c` is registered.
    pub fn point_of(&self, c: CurveId) -> Option<PointId> {
        self.points
            .iter()
            .find(|(_, m)| m.incidences.contains_key(&c))
            .map(|(&p, _)| p)
    }

    /// `(−1)`-curves meeting `D` once.
    pub fn flop_candidates(&self) -> Vec<CurveId> {
        self.curves
            .values()
            .filter(|c| c.self_int == -1 && c.d_mult == 1)
            .map(|c| c.id)
            .collect()
    }

    /// Adjunction (`C² − C·D = −2`), `D² = K²`, and incidence sanity.
    pub fn consistency_errors(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.d_squared != self.k_squared {
            out.push(format!("D^2 = {} but K^2 = {}", self.d_squared, self.k_squared));
        }
        for c in self.curves.values() {
            if c.self_int - c.d_mult != -2 {
                out.push(format!("curve {} has C^2 = {}, C.D = {}", c.id, c.self_int, c.d_mult));
            }
        }
        for (p, m) in &self.points {
            for (c, inc) in &m.incidences {
                if inc.mult < 1 || inc.contact < inc.mult {
                    out.push(format!(
                        "point {p}: curve {c} has mult {}, contact {}",
                        inc.mult, inc.contact
                    ));
                }
            }
        }
        for c in self.curves.values() {
            let total: i64 = self
                .points
                .values()
                .filter_map(|m| m.incidences.get(&c.id))
                .map(|i| i.contact)
                .sum();
            if total > c.d_mult {
                out.push(format!(
                    "curve {} has contact {total} at marked points but C.D = {}",
                    c.id, c.d_mult
                ));
            }
        }
        out
    }

    pub(crate) fn set_label(&mut self, c: CurveId, label: Option<u8>) {
        if let Some(n) = self.curves.get_mut(&c) {
            n.label = label;
        }
    }

    fn clear_labels(&mut self) {
        for n in self.curves.values_mut() {
            n.label = None;
        }
    }

    /// Canonical encoding up to relabelling of curves and points.
    pub fn canonical_form(&self) -> Vec<i64> {
        let mut g = canon::Graph::default();
        let mut index = BTreeMap::new();
        for c in self.curves.values() {
            index.insert(c.id, g.node(vec![0, c.self_int, c.d_mult]));
        }
        for ((a, b), v) in self.intersection_pairs() {
            g.edge(index[&a], index[&b], vec![v]);
        }
        for (_, m) in self.points() {
            let p = g.node(vec![1]);
            for (c, inc) in &m.incidences {
                g.edge(p, index[c], vec![inc.mult, inc.contact]);
            }
        }
        let mut enc = vec![self.k_squared, self.d_squared];
        enc.extend(g.canonical_encoding());
        enc
    }
}

/// Contracts the `(−1)`-curve `c`. Returns the new surface and, when `c`
/// meets `D` once, the marked point it is contracted to (reusing the point
/// where `c` was registered, or a fresh id).
pub fn blow_down(s: &ComponentSurface, c: CurveId) -> Result<(ComponentSurface, Option<PointId>), DegenError> {
    let node = s.curve(c).ok_or(DegenError::UnknownCurve(c))?.clone();
    if node.self_int != -1 {
        return Err(DegenError::NotMinusOne(c));
    }
    let meets: BTreeMap<CurveId, i64> = s
        .curves
        .keys()
        .filter(|&&e| e != c)
        .map(|&e| (e, s.intersection(e, c)))
        .filter(|&(_, m)| m != 0)
        .collect();
    let home = s.point_of(c);

    let mut r = s.clone();
    r.curves.remove(&c);
    r.intersections.retain(|&(a, b), _| a != c && b != c);
    let list: Vec<(CurveId, i64)> = meets.iter().map(|(&e, &m)| (e, m)).collect();
    for (i, &(e, me)) in list.iter().enumerate() {
        for &(f, mf) in &list[i + 1..] {
            let v = r.intersection(e, f) + me * mf;
            r.set_intersection(e, f, v)?;
        }
        let n = r.curves.get_mut(&e).expect("listed curve exists");
        n.self_int += me * me;
        n.d_mult += me * node.d_mult;
    }
    r.k_squared += 1;
    r.d_squared += node.d_mult * node.d_mult;
    for m in r.points.values_mut() {
        m.incidences.remove(&c);
    }

    if node.d_mult != 1 {
        return Ok((r, None));
    }
    let p = home.unwrap_or_else(|| s.points.keys().next_back().map_or(0, |&p| p + 1));
    let old = s.points.get(&p).cloned().unwrap_or_default();
    let mut point = MarkedPoint::default();
    for (&e, &m) in &meets {
        let before = old.incidences.get(&e).map_or(0, |i| i.contact);
        point.incidences.insert(
            e,
            Incidence {
                mult: m,
                contact: m + before,
            },
        );
    }
    for (&e, &inc) in &old.incidences {
        if e != c && !meets.contains_key(&e) {
            point.incidences.insert(e, inc);
        }
    }
    r.points.insert(p, point);
    Ok((r, Some(p)))
}

/// Blows up the marked point `p`. Returns the new surface and the id of
/// the exceptional curve.
pub fn blow_up(s: &ComponentSurface, p: PointId) -> Result<(ComponentSurface, CurveId), DegenError> {
    let point = s.points.get(&p).ok_or(DegenError::UnknownPoint(p))?.clone();
    for (&c, inc) in &point.incidences {
        if !s.curves.contains_key(&c) {
            return Err(DegenError::UnknownCurve(c));
        }
        if inc.mult < 1 || inc.contact < inc.mult {
            return Err(DegenError::Malformed(format!(
                "curve {c} at point {p} has mult {} and contact {}",
                inc.mult, inc.contact
            )));
        }
    }
    let mut r = s.clone();
    let e = r.add_curve(-1, 1);
    let list: Vec<(CurveId, Incidence)> = point.incidences.iter().map(|(&c, &i)| (c, i)).collect();
    for (i, &(a, ia)) in list.iter().enumerate() {
        for &(b, ib) in &list[i + 1..] {
            let v = r.intersection(a, b) - ia.mult * ib.mult;
            r.set_intersection(a, b, v)?;
        }
        let n = r.curves.get_mut(&a).expect("incident curve exists");
        n.self_int -= ia.mult * ia.mult;
        n.d_mult -= ia.mult;
        r.set_intersection(a, e, ia.mult)?;
    }
    r.k_squared -= 1;
    r.d_squared -= 1;
    let mut lifted = MarkedPoint::default();
    lifted.incidences.insert(e, Incidence { mult: 1, contact: 1 });
    for &(c, inc) in &list {
        let rest = inc.contact - inc.mult;
        if rest > 0 {
            lifted.incidences.insert(
                c,
                Incidence {
                    mult: inc.mult.min(rest),
                    contact: rest,
                },
            );
        }
    }
    r.points.insert(p, lifted);
    Ok((r, e))
}

/// `P²` with an inflectional tangent line `L` to `D` at the point `p`,
/// blown up `n` times at the successive points over `p`.
/// Returns the surface and the curve ids `[L, Ex1, …, Exn]`.
pub fn inflection_blowup(n: usize, p: PointId) -> (ComponentSurface, Vec<CurveId>) {
    let mut s = ComponentSurface::projective_plane();
    let line = s.add_curve(1, 3);
    s.set_incidence(p, line, 1, 3).expect("line exists");
    let mut ids = vec![line];
    for _ in 0..n {
        let (t, e) = blow_up(&s, p).expect("well-formed inflection data");
        s = t;
        ids.push(e);
    }
    (s, ids)
}

/// An integral 1-cycle on the central fibre.
pub type TagCycle = BTreeMap<(Side, CurveId), i64>;

/// A central fibre `V1 ∪_D V2` together with the limits of `E0..E18`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegenerationState {
    pub v1: ComponentSurface,
    pub v2: ComponentSurface,
    /// Marked points of `D` usable by a flop.
    pub shared_points: BTreeSet<PointId>,
    tags: Vec<TagCycle>,
}

impl DegenerationState {
    pub fn new(
        v1: ComponentSurface,
        v2: ComponentSurface,
        shared_points: BTreeSet<PointId>,
        tags: Vec<TagCycle>,
    ) -> Result<Self, DegenError> {
        if tags.len() != TAG_COUNT {
            return Err(DegenError::Malformed(format!(
                "expected {TAG_COUNT} tag cycles, found {}",
                tags.len()
            )));
        }
        let mut st = DegenerationState {
            v1,
            v2,
            shared_points,
            tags,
        };
        for cycle in &st.tags {
            for &(side, c) in cycle.keys() {
                if st.component(side).curve(c).is_none() {
                    return Err(DegenError::UnknownCurve(c));
                }
            }
        }
        st.refresh_labels();
        Ok(st)
    }

    pub fn component(&self, side: Side) -> &ComponentSurface {
        match side {
            Side::V1 => &self.v1,
            Side::V2 => &self.v2,
        }
    }

    fn component_mut(&mut self, side: Side) -> &mut ComponentSurface {
        match side {
            Side::V1 => &mut self.v1,
            Side::V2 => &mut self.v2,
        }
    }

    pub fn tag_cycle(&self, i: usize) -> &TagCycle {
        &self.tags[i]
    }

    pub fn tag_cycles(&self) -> &[TagCycle] {
        &self.tags
    }

    pub fn k_squared(&self) -> (i64, i64) {
        (self.v1.k_squared, self.v2.k_squared)
    }

    fn refresh_labels(&mut self) {
        self.v1.clear_labels();
        self.v2.clear_labels();
        for i in 0..TAG_COUNT {
            if let Some((side, c)) = self.full_tag_curve(i) {
                self.component_mut(side).set_label(c, Some(i as u8));
            }
        }
    }

    /// The curve carrying `E_i` on its own, if the cycle is a single curve.
    pub fn full_tag_curve(&self, i: usize) -> Option<(Side, CurveId)> {
        let cycle = &self.tags[i];
        match (cycle.len(), cycle.iter().next()) {
            (1, Some((&k, &1))) => Some(k),
            _ => None,
        }
    }

    /// Tags whose limit is a single curve.
    pub fn full_tags(&self) -> Vec<usize> {
        (0..TAG_COUNT).filter(|&i| self.full_tag_curve(i).is_some()).collect()
    }

    /// Tags whose limit is a composite cycle.
    pub fn broken_tags(&self) -> Vec<usize> {
        (0..TAG_COUNT).filter(|&i| self.full_tag_curve(i).is_none()).collect()
    }

    /// Tagged curves of self-intersection −2.
    pub fn tagged_minus_two(&self) -> Vec<(Side, CurveId)> {
        self.full_tags()
            .into_iter()
            .filter_map(|i| self.full_tag_curve(i))
            .filter(|&(s, c)| self.component(s).intersection(c, c) == -2)
            .collect()
    }

    /// `Z_i · Z_j`, computed on each component and summed.
    pub fn cycle_pairing(&self, a: &TagCycle, b: &TagCycle) -> i64 {
        let mut total = 0;
        for (&(sa, ca), &ma) in a {
            for (&(sb, cb), &mb) in b {
                if sa == sb {
                    total += ma * mb * self.component(sa).intersection(ca, cb);
                }
            }
        }
        total
    }

    /// `Z · D` on one side.
    pub fn cycle_degree(&self, z: &TagCycle, side: Side) -> i64 {
        z.iter()
            .filter(|((s, _), _)| *s == side)
            .map(|(&(s, c), &m)| m * self.component(s).curve(c).map_or(0, |n| n.d_mult))
            .sum()
    }

    /// Gram matrix of the 19 tag cycles.
    pub fn tag_gram(&self) -> Vec<Vec<i64>> {
        (0..TAG_COUNT)
            .map(|i| {
                (0..TAG_COUNT)
                    .map(|j| self.cycle_pairing(&self.tags[i], &self.tags[j]))
                    .collect()
            })
            .collect()
    }

    /// The same fibre with the component names exchanged.
    pub fn swap_sides(&self) -> DegenerationState {
        let tags = self
            .tags
            .iter()
            .map(|z| z.iter().map(|(&(s, c), &m)| ((s.other(), c), m)).collect())
            .collect();
        let mut st = DegenerationState {
            v1: self.v2.clone(),
            v2: self.v1.clone(),
            shared_points: self.shared_points.clone(),
            tags,
        };
        st.refresh_labels();
        st
    }

    /// Left-right mirror: swaps the components and relabels `E_i ↦ E_{18−i}`.
    pub fn reflect(&self) -> DegenerationState {
        let tags: Vec<TagCycle> = (0..TAG_COUNT)
            .map(|i| {
                self.tags[TAG_COUNT - 1 - i]
                    .iter()
                    .map(|(&(s, c), &m)| ((s.other(), c), m))
                    .collect()
            })
            .collect();
        let mut st = DegenerationState {
            v1: self.v2.clone(),
            v2: self.v1.clone(),
            shared_points: self.shared_points.clone(),
            tags,
        };
        st.refresh_labels();
        st
    }

    /// `(side, curve)` pairs eligible for a flop, in a fixed order.
    pub fn eligible_flops(&self) -> Vec<(Side, CurveId)> {
        let mut out = Vec::new();
        for side in [Side::V1, Side::V2] {
            let comp = self.component(side);
            for c in comp.flop_candidates() {
                if comp.point_of(c).is_some_and(|p| self.shared_points.contains(&p)) {
                    out.push((side, c));
                }
            }
        }
        out
    }

    /// Encoding invariant under relabelling of curves and points and
    /// under exchanging the names of the two components.
    pub fn canonical_form(&self) -> Vec<i64> {
        let mut g = canon::Graph::default();
        let mut index = BTreeMap::new();
        for side in [Side::V1, Side::V2] {
            let comp = self.component(side);
            let v = g.node(vec![3, comp.k_squared, comp.d_squared]);
            for c in comp.curves() {
                let n = g.node(vec![0, c.self_int, c.d_mult]);
                g.edge(v, n, vec![]);
                index.insert((side, c.id), n);
            }
            for ((a, b), w) in comp.intersection_pairs() {
                g.edge(index[&(side, a)], index[&(side, b)], vec![w]);
            }
        }
        let mut point_nodes = BTreeMap::new();
        let all_points: BTreeSet<PointId> = self.v1.points.keys().chain(self.v2.points.keys()).copied().collect();
        for p in all_points {
            let shared = i64::from(self.shared_points.contains(&p));
            point_nodes.insert(p, g.node(vec![1, shared]));
        }
        for side in [Side::V1, Side::V2] {
            for (p, m) in self.component(side).points() {
                for (c, inc) in &m.incidences {
                    g.edge(point_nodes[&p], index[&(side, *c)], vec![inc.mult, inc.contact]);
                }
            }
        }
        for (i, cycle) in self.tags.iter().enumerate() {
            let t = g.node(vec![2, i as i64]);
            for (k, &m) in cycle {
                g.edge(t, index[k], vec![m]);
            }
        }
        g.canonical_encoding()
    }

    /// Canonical form of the state or its mirror, whichever is smaller.
    pub fn canonical_form_mod_reflection(&self) -> Vec<i64> {
        let a = self.canonical_form();
        let b = self.reflect().canonical_form();
        a.min(b)
    }

    pub fn is_isomorphic(&self, other: &DegenerationState) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

/// Moves the `(−1)`-curve `c` from `side` to the other component.
pub fn flop(st: &DegenerationState, side: Side, c: CurveId) -> Result<DegenerationState, DegenError> {
    let src = st.component(side);
    let node = src.curve(c).ok_or(DegenError::UnknownCurve(c))?;
    if node.self_int != -1 || node.d_mult != 1 {
        return Err(DegenError::Ineligible(format!(
            "curve {c} on {side} has C^2 = {}, C.D = {}",
            node.self_int, node.d_mult
        )));
    }
    let p = src
        .point_of(c)
        .filter(|p| st.shared_points.contains(p))
        .ok_or_else(|| DegenError::Ineligible(format!("curve {c} on {side} does not meet D at a shared point")))?;
    let (new_src, image) = blow_down(src, c)?;
    debug_assert_eq!(image, Some(p));
    let mut tgt = st.component(side.other()).clone();
    tgt.add_point(p);
    let (new_tgt, flopped) = blow_up(&tgt, p)?;

    let mut next = st.clone();
    *next.component_mut(side) = new_src;
    *next.component_mut(side.other()) = new_tgt;

    // Each cycle loses its c-term; the new curve absorbs the D-degree
    // mismatch so both restrictions to D agree again.
    let mut tags = Vec::with_capacity(TAG_COUNT);
    for cycle in &st.tags {
        let mut z: TagCycle = cycle
            .iter()
            .filter(|(k, _)| **k != (side, c))
            .map(|(&k, &m)| (k, m))
            .collect();
        let k = next.cycle_degree(&z, side) - next.cycle_degree(&z, side.other());
        if k != 0 {
            z.insert((side.other(), flopped), k);
        }
        tags.push(z);
    }
    next.tags = tags;
    next.refresh_labels();
    Ok(next)
}

/// `Γ`: the A/D/E configuration of the tagged `(−2)`-curves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaLabel(pub Vec<DynkinLabel>);

impl GammaLabel {
    pub fn new(mut labels: Vec<DynkinLabel>) -> Self {
        labels.sort();
        GammaLabel(labels)
    }

    pub fn parse(text: &str) -> Option<Self> {
        crate::lattice::parse_dynkin_multiset(text).map(GammaLabel)
    }

    pub fn labels(&self) -> &[DynkinLabel] {
        &self.0
    }
}

impl fmt::Display for GammaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("(empty)")
        } else {
            f.write_str(&format_dynkin_multiset(&self.0))
        }
    }
}

pub fn classify_gamma(st: &DegenerationState) -> Result<GammaLabel, DegenError> {
    let nodes = st.tagged_minus_two();
    let labels = dynkin_classify(&nodes, |a, b| {
        if a.0 == b.0 {
            st.component(a.0).intersection(a.1, b.1)
        } else {
            0
        }
    })?;
    Ok(GammaLabel::new(labels))
}

/// `K²(V1) + K²(V2) = 0` and `D² = K²` on each component.
pub fn triple_point_check(st: &DegenerationState) -> bool {
    st.v1.k_squared + st.v2.k_squared == 0 && st.v1.d_squared == st.v1.k_squared && st.v2.d_squared == st.v2.k_squared
}

/// The marked point of the seed where every flop takes place.
pub const SEED_POINT: PointId = 0;

/// The `E6E12` central fibre: `V1` is `P²` blown up twelve times and `V2`
/// six times at an inflection point of `D`.
pub fn seed_e6e12() -> DegenerationState {
    let (v1, a) = inflection_blowup(12, SEED_POINT);
    let (v2, b) = inflection_blowup(6, SEED_POINT);
    let mut tags = vec![TagCycle::new(); TAG_COUNT];
    // V1: E0 = L, E_i = Ex_i for 1 ≤ i ≤ 11.
    for i in 0..=11 {
        tags[i].insert((Side::V1, a[i]), 1);
    }
    // E12 splits into the last exceptional curve on each side.
    tags[12].insert((Side::V1, a[12]), 1);
    tags[12].insert((Side::V2, b[6]), 1);
    // V2: E18 = L, E_{18−k} = Ex_k for 1 ≤ k ≤ 5.
    tags[18].insert((Side::V2, b[0]), 1);
    for k in 1..=5 {
        tags[18 - k].insert((Side::V2, b[k]), 1);
    }
    DegenerationState::new(v1, v2, BTreeSet::from([SEED_POINT]), tags).expect("seed cycles reference existing curves")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub reflection_quotient: bool,
    /// Stop exploring after this many states (reported as truncation).
    pub max_states: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            reflection_quotient: true,
            max_states: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlopNode {
    pub state: DegenerationState,
    pub gamma: Result<GammaLabel, DegenError>,
}

impl FlopNode {
    pub fn gamma_text(&self) -> String {
        match &self.gamma {
            Ok(g) => format!("{g}"),
            Err(e) => format!("unclassified: {e}"),
        }
    }
}

/// States up to isomorphism, joined by single flops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlopGraph {
    pub nodes: Vec<FlopNode>,
    /// Undirected, each `(a, b)` with `a < b`; self-loops are dropped.
    pub edges: BTreeSet<(usize, usize)>,
    pub reflection_quotient: bool,
    pub truncated: bool,
}

impl FlopGraph {
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == i, b == i) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Index of the first node with the given `Γ`.
    pub fn find(&self, gamma: &GammaLabel) -> Option<usize> {
        self.nodes.iter().position(|n| n.gamma.as_ref().ok() == Some(gamma))
    }

    /// Nodes whose `Γ` could not be classified.
    pub fn discrepancies(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].gamma.is_err())
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flops {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let (a, b) = n.state.k_squared();
            s.push_str(&format!("  n{i} [label=\"{}\\n({a},{b})\"];\n", n.gamma_text()));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("  n{a} -- n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Breadth-first closure of `seed` under all eligible flops.
pub fn enumerate_degenerations(seed: &DegenerationState, options: EnumerationOptions) -> FlopGraph {
    let form = |st: &DegenerationState| {
        if options.reflection_quotient {
            st.canonical_form_mod_reflection()
        } else {
            st.canonical_form()
        }
    };
    let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut edges = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut truncated = false;

    seen.insert(form(seed), 0);
    nodes.push(FlopNode {
        state: seed.clone(),
        gamma: classify_gamma(seed),
    });
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        let st = nodes[i].state.clone();
        for (side, c) in st.eligible_flops() {
            let Ok(next) = flop(&st, side, c) else { continue };
            let f = form(&next);
            let j = match seen.get(&f) {
                Some(&j) => j,
                None => {
                    if nodes.len() >= options.max_states {
                        truncated = true;
                        continue;
                    }
                    let j = nodes.len();
                    seen.insert(f, j);
                    nodes.push(FlopNode {
                        gamma: classify_gamma(&next),
                        state: next,
                    });
                    queue.push_back(j);
                    j
                }
            };
            if i != j {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    FlopGraph {
        nodes,
        edges,
        reflection_quotient: options.reflection_quotient,
        truncated,
    }
}

/// Canonical labelling of small vertex- and edge-labelled graphs by colour
/// refinement with individualisation.
mod canon {
    use alloc::collections::BTreeMap;
    use alloc::vec;
    use alloc::vec::Vec;

    #[derive(Debug, Default)]
    pub struct Graph {
        attrs: Vec<Vec<i64>>,
        adj: Vec<BTreeMap<usize, Vec<i64>>>,
    }

    impl Graph {
        pub fn node(&mut self, attrs: Vec<i64>) -> usize {
            self.attrs.push(attrs);
            self.adj.push(BTreeMap::new());
            self.attrs.len() - 1
        }

        pub fn edge(&mut self, a: usize, b: usize, w: Vec<i64>) {
            self.adj[a].insert(b, w.clone());
            self.adj[b].insert(a, w);
        }

        pub fn canonical_encoding(&self) -> Vec<i64> {
            let init = rank(&self.attrs);
            self.search(init)
        }

        fn refine(&self, mut colours: Vec<usize>) -> Vec<usize> {
            /// A vertex colour with its sorted (edge weight, neighbour colour) list.
            type Signature = (usize, Vec<(Vec<i64>, usize)>);
            let mut classes = count(&colours);
            loop {
                let sigs: Vec<Signature> = (0..colours.len())
                    .map(|v| {
                        let mut nb: Vec<(Vec<i64>, usize)> =
                            self.adj[v].iter().map(|(&u, w)| (w.clone(), colours[u])).collect();
                        nb.sort();
                        (colours[v], nb)
                    })
                    .collect();
                let next = rank(&sigs);
                let n = count(&next);
                colours = next;
                if n == classes {
                    return colours;
                }
                classes = n;
            }
        }

        fn search(&self, colours: Vec<usize>) -> Vec<i64> {
            let colours = self.refine(colours);
            let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
            for &c in &colours {
                *sizes.entry(c).or_default() += 1;
            }
            let target = sizes
                .iter()
                .filter(|(_, &n)| n > 1)
                .min_by_key(|(&c, &n)| (n, c))
                .map(|(&c, _)| c);
            let Some(cell) = target else {
                return self.encode(&colours);
            };
            let mut best: Option<Vec<i64>> = None;
            for v in (0..colours.len()).filter(|&v| colours[v] == cell) {
                let split: Vec<usize> = colours
                    .iter()
                    .enumerate()
                    .map(|(u, &c)| 2 * c + usize::from(u != v))
                    .collect();
                let enc = self.search(split);
                if best.as_ref().is_none_or(|b| enc < *b) {
                    best = Some(enc);
                }
            }
            best.expect("cell is non-empty")
        }

        fn encode(&self, colours: &[usize]) -> Vec<i64> {
            let n = colours.len();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| colours[v]);
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            let mut enc = vec![n as i64];
            for &v in &order {
                enc.push(self.attrs[v].len() as i64);
                enc.extend_from_slice(&self.attrs[v]);
                let mut nb: Vec<(usize, &Vec<i64>)> = self.adj[v].iter().map(|(&u, w)| (pos[u], w)).collect();
                nb.sort();
                enc.push(nb.len() as i64);
                for (p, w) in nb {
                    enc.push(p as i64);
                    enc.push(w.len() as i64);
                    enc.extend_from_slice(w);
                }
            }
            enc
        }
    }

    fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
        let mut sorted: Vec<T> = items.to_vec();
        sorted.sort();
        sorted.dedup();
        items
            .iter()
            .map(|x| sorted.binary_search(x).expect("present"))
            .collect()
    }

    fn count(colours: &[usize]) -> usize {
        let mut c = colours.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma(st: &DegenerationState) -> String {
        format!("{}", classify_gamma(st).unwrap())
    }

    fn only_flop(st: &DegenerationState, side: Side) -> DegenerationState {
        let c = st.component(side).flop_candidates();
        assert_eq!(c.len(), 1, "expected a single candidate on {side}");
        flop(st, side, c[0]).unwrap()
    }

    #[test]
    fn chain_blow_down() {
        let mut s = ComponentSurface::empty(0);
        let a = s.add_curve(-2, 0);
        let b = s.add_curve(-1, 1);
        s.set_intersection(a, b, 1).unwrap();
        s.set_incidence(7, b, 1, 1).unwrap();
        let (r, p) = blow_down(&s, b).unwrap();
        assert_eq!(p, Some(7));
        let n = r.curve(a).unwrap();
        assert_eq!((n.self_int, n.d_mult), (-1, 1));
        assert_eq!((r.k_squared(), r.d_squared()), (1, 1));
        assert_eq!(r.point(7).unwrap().incidences[&a], Incidence { mult: 1, contact: 1 });
        assert_eq!(blow_down(&s, a), Err(DegenError::NotMinusOne(a)));
    }

    #[test]
    fn blow_up_cases() {
        let mut s = ComponentSurface::empty(5);
        s.add_point(3);
        let (r, e) = blow_up(&s, 3).unwrap();
        let n = r.curve(e).unwrap();
        assert_eq!((n.self_int, n.d_mult, r.k_squared()), (-1, 1, 4));
        let (r2, e2) = blow_up(&r, 3).unwrap();
        let old = r2.curve(e).unwrap();
        assert_eq!((old.self_int, old.d_mult), (-2, 0));
        assert_eq!(r2.intersection(e, e2), 1);
        assert!(!r2.point(3).unwrap().incidences.contains_key(&e));
        assert!(blow_up(&s, 9).is_err());
    }

    #[test]
    fn seed_properties() {
        let seed = seed_e6e12();
        assert_eq!(seed.k_squared(), (-3, 3));
        assert!(triple_point_check(&seed));
        assert_eq!(gamma(&seed), "E6E12");
        assert!(seed.v1.consistency_errors().is_empty() && seed.v2.consistency_errors().is_empty());
        assert_eq!(seed.broken_tags(), vec![12]);
    }

    #[test]
    fn first_flops() {
        let seed = seed_e6e12();
        let left = only_flop(&seed, Side::V1);
        assert_eq!(gamma(&left), "E7E11");
        let right = only_flop(&seed, Side::V2);
        assert_eq!(gamma(&right), "D5E13");
        assert_eq!(right.v1.k_squared(), -4);
        let e9 = only_flop(&left, Side::V1);
        let e9 = only_flop(&e9, Side::V1);
        assert_eq!(gamma(&e9), "E9E9");
        assert_eq!(e9.k_squared(), (0, 0));
        let back = only_flop(&left, Side::V2);
        assert!(back.is_isomorphic(&seed));
    }

    #[test]
    fn empty_gamma() {
        let st = DegenerationState::new(
            ComponentSurface::projective_plane(),
            ComponentSurface::empty(-9),
            BTreeSet::new(),
            vec![TagCycle::new(); TAG_COUNT],
        )
        .unwrap();
        assert_eq!(classify_gamma(&st).unwrap(), GammaLabel::new(vec![]));
    }

    #[test]
    fn perturbed_state_fails_triple_point() {
        let mut st = seed_e6e12();
        st.v2.set_k_squared(4);
        assert!(!triple_point_check(&st));
    }

    #[test]
    fn component_names_do_not_matter() {
        let seed = seed_e6e12();
        assert!(seed.swap_sides().is_isomorphic(&seed));
        assert!(!seed.reflect().is_isomorphic(&seed));
    }

    #[test]
    fn reflection_is_involution() {
        let seed = seed_e6e12();
        assert_eq!(seed.reflect().reflect(), seed);
        assert_eq!(seed.reflect().k_squared(), (3, -3));
    }
}
