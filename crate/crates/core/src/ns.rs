//! The Néron–Severi lattice of a generic `M`-polarised K3 surface, modelled
//! on the 21 curve classes `E0..E18`, `S` and `T` modulo three relations.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::lattice::{GramMatrix, InertiaTriple, IntMatrix};
use crate::rational::{parse_q, q, to_i64, write_q, Q};
use crate::Clause;

pub const GENERATOR_COUNT: usize = 21;
pub const ROOT_COUNT: usize = 19;

/// One of the 21 named curve classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// Simple root `E_i`, `0 ≤ i ≤ 18`.
    E(u8),
    /// Smooth fibre of the alternate fibration.
    S,
    /// 2-torsion curve of the standard fibration.
    T,
}

impl Generator {
    pub fn index(self) -> usize {
        match self {
            Generator::E(i) => i as usize,
            Generator::S => 19,
            Generator::T => 20,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            0..=18 => Some(Generator::E(i as u8)),
            19 => Some(Generator::S),
            20 => Some(Generator::T),
            _ => None,
        }
    }

    pub fn all() -> impl Iterator<Item = Generator> {
        (0..GENERATOR_COUNT).filter_map(Generator::from_index)
    }

    pub fn roots() -> impl Iterator<Item = Generator> {
        (0..ROOT_COUNT as u8).map(Generator::E)
    }

    pub fn is_root(self) -> bool {
        matches!(self, Generator::E(_))
    }

    /// Parses `E7`, `E_7`, `S`, `T`.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "S" => Some(Generator::S),
            "T" => Some(Generator::T),
            t => {
                let rest = t.strip_prefix('E')?.trim_start_matches('_');
                if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                let i: u8 = rest.parse().ok()?;
                (i <= 18).then_some(Generator::E(i))
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(i) => write!(f, "E{i}"),
            Generator::S => write!(f, "S"),
            Generator::T => write!(f, "T"),
        }
    }
}

/// Intersection number of two generators (Fig. 2 dual graph data).
pub fn generator_pairing(a: Generator, b: Generator) -> i64 {
    use Generator::*;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match (a, b) {
        (E(i), E(j)) if i == j => -2,
        (E(i), E(j)) => {
            let adjacent = (i == 0 && j == 3) || (i == 15 && j == 18) || (i >= 1 && j == i + 1 && j <= 17);
            i64::from(adjacent)
        }
        (E(i), S) => i64::from(i == 1 || i == 17),
        (E(i), T) => i64::from(i == 0 || i == 18),
        (S, S) => 0,
        (S, T) => 2,
        (T, T) => 2,
        _ => unreachable!("ordered pair"),
    }
}

/// Gram matrix of all 21 generators (degenerate, rank 18).
pub fn generator_gram() -> GramMatrix {
    let m = IntMatrix::from_fn(GENERATOR_COUNT, GENERATOR_COUNT, |i, j| {
        generator_pairing(
            Generator::from_index(i).expect("index < 21"),
            Generator::from_index(j).expect("index < 21"),
        )
    });
    GramMatrix::new(m).expect("generator pairing is symmetric")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NsError {
    Parse(String),
    NonIntegral,
    NotBigNef,
    InvalidWitness(String),
}

impl fmt::Display for NsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsError::Parse(msg) => write!(f, "cannot parse divisor class: {msg}"),
            NsError::NonIntegral => write!(f, "class is not integral"),
            NsError::NotBigNef => write!(f, "class is not nef and big"),
            NsError::InvalidWitness(msg) => write!(f, "invalid section witness: {msg}"),
        }
    }
}

impl core::error::Error for NsError {}

/// Rational combination `Σ a_i E_i + s S + t T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    coeffs: Vec<Q>,
}

impl Default for DivisorClass {
    fn default() -> Self {
        Self::zero()
    }
}

impl DivisorClass {
    pub fn zero() -> Self {
        DivisorClass {
            coeffs: vec![Q::zero(); GENERATOR_COUNT],
        }
    }

    pub fn generator(g: Generator) -> Self {
        let mut c = Self::zero();
        c.coeffs[g.index()] = q(1);
        c
    }

    /// From the 19 root coefficients and the `S`, `T` coefficients.
    pub fn from_parts(roots: &[Q], s: Q, t: Q) -> Self {
        assert_eq!(roots.len(), ROOT_COUNT, "need 19 root coefficients");
        let mut coeffs = roots.to_vec();
        coeffs.push(s);
        coeffs.push(t);
        DivisorClass { coeffs }
    }

    pub fn from_integers(roots: &[i64], s: i64, t: i64) -> Self {
        let r: Vec<Q> = roots.iter().map(|&x| q(x)).collect();
        Self::from_parts(&r, q(s), q(t))
    }

    pub fn coeff(&self, g: Generator) -> &Q {
        &self.coeffs[g.index()]
    }

    pub fn set_coeff(&mut self, g: Generator, value: Q) {
        self.coeffs[g.index()] = value;
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Q) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Generators with nonzero coefficient, in index order.
    pub fn support(&self) -> Vec<Generator> {
        Generator::all().filter(|g| !self.coeff(*g).is_zero()).collect()
    }

    /// Parses `(a0;a1,…,a17;a18)` or `(a0;a1,…,a17;a18 | s,t)`.
    pub fn parse(text: &str) -> Result<Self, NsError> {
        let err = |m: &str| NsError::Parse(alloc::format!("{m} in `{}`", text.trim()));
        let body = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err("expected parentheses"))?;
        let (roots, extra) = match body.split_once('|') {
            Some((r, e)) => (r, Some(e)),
            None => (body, None),
        };
        let parts: Vec<&str> = roots.split(';').collect();
        let [first, middle, last] = parts[..] else {
            return Err(err("expected two `;` separators"));
        };
        let mut vals = Vec::with_capacity(ROOT_COUNT);
        let num = |s: &str| parse_q(s).map_err(|_| err("bad coefficient"));
        vals.push(num(first)?);
        for m in middle.split(',') {
            vals.push(num(m)?);
        }
        vals.push(num(last)?);
        if vals.len() != ROOT_COUNT {
            return Err(err("expected 19 root coefficients"));
        }
        let (s, t) = match extra {
            None => (Q::zero(), Q::zero()),
            Some(e) => {
                let st: Vec<&str> = e.split(',').collect();
                let [s, t] = st[..] else {
                    return Err(err("expected `s,t` after `|`"));
                };
                (num(s)?, num(t)?)
            }
        };
        Ok(Self::from_parts(&vals, s, t))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coeffs[..ROOT_COUNT].iter().enumerate() {
            match i {
                0 => {}
                1 | 18 => f.write_str(";")?,
                _ => f.write_str(",")?,
            }
            write_q(f, c)?;
        }
        f.write_str("|")?;
        write_q(f, &self.coeffs[19])?;
        f.write_str(",")?;
        write_q(f, &self.coeffs[20])?;
        f.write_str(")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul<&DivisorClass> for &Q {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

pub fn pairing(c1: &DivisorClass, c2: &DivisorClass) -> Q {
    let mut total = Q::zero();
    for a in Generator::all() {
        let x = c1.coeff(a);
        if x.is_zero() {
            continue;
        }
        for b in Generator::all() {
            let y = c2.coeff(b);
            let p = generator_pairing(a, b);
            if p != 0 && !y.is_zero() {
                total += x * y * q(p);
            }
        }
    }
    total
}

pub fn pairing_with(c: &DivisorClass, g: Generator) -> Q {
    pairing(c, &DivisorClass::generator(g))
}

/// The three relations among the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    pub r1: DivisorClass,
    pub r2: DivisorClass,
    pub r3: DivisorClass,
}

impl RelationSet {
    pub fn standard() -> Self {
        RelationSet {
            // difference of the two II* fibres
            r1: DivisorClass::from_integers(
                &[3, 2, 4, 6, 5, 4, 3, 2, 1, 0, -1, -2, -3, -4, -5, -6, -4, -2, -3],
                0,
                0,
            ),
            // I12* fibre minus S
            r2: DivisorClass::from_integers(&[1, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 1, 0, 1], -1, 0),
            r3: DivisorClass::from_integers(&[1, 1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 1, 1], 0, -1),
        }
    }

    pub fn as_array(&self) -> [&DivisorClass; 3] {
        [&self.r1, &self.r2, &self.r3]
    }
}

/// Coordinates over `(E0..E9, E11..E18)` after eliminating `T`, `S`, `E10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalCoordinates {
    pub coefficients: Vec<Q>,
}

/// Basis order of [`CanonicalCoordinates`].
pub fn canonical_basis() -> Vec<Generator> {
    (0..ROOT_COUNT as u8).filter(|&i| i != 10).map(Generator::E).collect()
}

impl CanonicalCoordinates {
    pub fn to_class(&self) -> DivisorClass {
        let mut c = DivisorClass::zero();
        for (g, v) in canonical_basis().into_iter().zip(&self.coefficients) {
            c.set_coeff(g, v.clone());
        }
        c
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }
}

pub fn canonicalize(c: &DivisorClass) -> CanonicalCoordinates {
    let rel = RelationSet::standard();
    // Each relation has coefficient -1 at the eliminated generator and 0 at
    // those eliminated before it.
    let mut x = c.clone();
    for (r, g) in [
        (&rel.r3, Generator::T),
        (&rel.r2, Generator::S),
        (&rel.r1, Generator::E(10)),
    ] {
        let k = x.coeff(g).clone();
        if !k.is_zero() {
            x = &x + &r.scale(&k);
        }
        debug_assert!(x.coeff(g).is_zero());
    }
    CanonicalCoordinates {
        coefficients: canonical_basis().into_iter().map(|g| x.coeff(g).clone()).collect(),
    }
}

pub fn lin_equiv(c1: &DivisorClass, c2: &DivisorClass) -> bool {
    canonicalize(c1) == canonicalize(c2)
}

pub fn is_nef(c: &DivisorClass) -> bool {
    Generator::roots().all(|g| !pairing_with(c, g).is_negative())
}

pub fn is_big_nef(c: &DivisorClass) -> bool {
    is_nef(c) && pairing(c, c).is_positive()
}

/// `h⁰(D) = 2 + D²/2` for an integral nef and big class.
pub fn rr_sections(c: &DivisorClass) -> Result<i64, NsError> {
    if !canonicalize(c).is_integral() {
        return Err(NsError::NonIntegral);
    }
    if !is_big_nef(c) {
        return Err(NsError::NotBigNef);
    }
    let d2 = to_i64(&pairing(c, c)).ok_or(NsError::NonIntegral)?;
    Ok(2 + d2 / 2)
}

/// Coefficient-wise `⌊n·d⌋` in the given representation.
pub fn floor_multiple(d: &DivisorClass, n: u32) -> DivisorClass {
    let k = q(i64::from(n));
    DivisorClass {
        coeffs: d.coeffs.iter().map(|c| (c * &k).floor()).collect(),
    }
}

/// Checks an effective witness for a section of `⌊n·d⌋`.
pub fn verify_section(section: &DivisorClass, n: u32, d: &DivisorClass) -> Result<bool, NsError> {
    for g in Generator::all() {
        let c = section.coeff(g);
        if !c.is_integer() {
            return Err(NsError::InvalidWitness(alloc::format!(
                "coefficient of {g} is not an integer"
            )));
        }
        if c.is_negative() {
            return Err(NsError::InvalidWitness(alloc::format!(
                "coefficient of {g} is negative"
            )));
        }
    }
    Ok(lin_equiv(section, &floor_multiple(d, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaType {
    /// `I_n`, `n ≥ 1`.
    In(u32),
    /// `I_n*`, `n ≥ 0`.
    InStar(u32),
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components of the fibre.
    pub fn component_count(self) -> u32 {
        match self {
            KodairaType::In(n) => n,
            KodairaType::InStar(n) => n + 5,
            KodairaType::IIStar => 9,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::In(n) => write!(f, "I{n}"),
            KodairaType::InStar(n) => write!(f, "I{n}*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducibleFibre {
    pub kodaira: KodairaType,
    /// Components with their multiplicities in the fibre.
    pub components: Vec<(Generator, u32)>,
}

impl ReducibleFibre {
    pub fn class(&self) -> DivisorClass {
        let mut c = DivisorClass::zero();
        for &(g, m) in &self.components {
            let v = c.coeff(g) + q(i64::from(m));
            c.set_coeff(g, v);
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FibrationName {
    Standard,
    Alternate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationRecord {
    pub name: FibrationName,
    pub fibre_class: DivisorClass,
    pub sections: Vec<Generator>,
    pub reducible_fibres: Vec<ReducibleFibre>,
}

fn fibre(kodaira: KodairaType, comps: &[(u8, u32)]) -> ReducibleFibre {
    ReducibleFibre {
        kodaira,
        components: comps.iter().map(|&(i, m)| (Generator::E(i), m)).collect(),
    }
}

impl FibrationRecord {
    /// Two II* fibres and the section `E9`.
    pub fn standard() -> Self {
        let first = fibre(
            KodairaType::IIStar,
            &[(0, 3), (1, 2), (2, 4), (3, 6), (4, 5), (5, 4), (6, 3), (7, 2), (8, 1)],
        );
        let second = fibre(
            KodairaType::IIStar,
            &[
                (10, 1),
                (11, 2),
                (12, 3),
                (13, 4),
                (14, 5),
                (15, 6),
                (16, 4),
                (17, 2),
                (18, 3),
            ],
        );
        FibrationRecord {
            name: FibrationName::Standard,
            fibre_class: first.class(),
            sections: vec![Generator::E(9)],
            reducible_fibres: vec![first, second],
        }
    }

    /// One I12* fibre and the sections `E1`, `E17`.
    pub fn alternate() -> Self {
        let mut comps = vec![(0u8, 1u32), (2, 1), (16, 1), (18, 1)];
        comps.extend((3..=15).map(|i| (i, 2)));
        comps.sort_unstable();
        let f = fibre(KodairaType::InStar(12), &comps);
        FibrationRecord {
            name: FibrationName::Alternate,
            fibre_class: f.class(),
            sections: vec![Generator::E(1), Generator::E(17)],
            reducible_fibres: vec![f],
        }
    }
}

pub fn fibration_check(f: &FibrationRecord) -> Vec<Clause> {
    let fc = &f.fibre_class;
    let sq = pairing(fc, fc);
    let mut out = vec![
        Clause::new("fibre-square-zero", sq.is_zero(), alloc::format!("F^2 = {sq}")),
        Clause::new("fibre-nef", is_nef(fc), "F pairs non-negatively with every root"),
    ];
    for &s in &f.sections {
        let p = pairing_with(fc, s);
        out.push(Clause::new(
            alloc::format!("section-{s}"),
            p == q(1),
            alloc::format!("F.{s} = {p}"),
        ));
    }
    for (k, rf) in f.reducible_fibres.iter().enumerate() {
        let id = |what: &str| alloc::format!("fibre{k}-{}-{what}", rf.kodaira);
        out.push(Clause::new(
            id("class"),
            lin_equiv(&rf.class(), fc),
            "weighted component sum is linearly equivalent to F",
        ));
        let bad: Vec<String> = rf
            .components
            .iter()
            .filter(|(g, _)| !pairing_with(fc, *g).is_zero())
            .map(|(g, _)| alloc::format!("{g}"))
            .collect();
        out.push(Clause::new(
            id("components-vertical"),
            bad.is_empty(),
            if bad.is_empty() {
                String::from("every component pairs 0 with F")
            } else {
                alloc::format!("components meeting F: {}", bad.join(","))
            },
        ));
        let n = rf.components.len() as u32;
        out.push(Clause::new(
            id("component-count"),
            n == rf.kodaira.component_count(),
            alloc::format!("{n} components, {} expected", rf.kodaira.component_count()),
        ));
    }
    out
}

/// Curves fixed by the fibrewise elliptic involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocusTable {
    pub fixed: Vec<Generator>,
}

impl FixedLocusTable {
    /// `T` and the odd-indexed roots.
    pub fn standard() -> Self {
        let mut fixed = vec![Generator::T];
        fixed.extend((1..=17).step_by(2).map(|i| Generator::E(i as u8)));
        FixedLocusTable { fixed }
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.fixed.contains(&g)
    }
}

/// Self-intersection of the image of `c` on the quotient surface.
pub fn quotient_self_intersection(c: Generator, table: &FixedLocusTable) -> Q {
    let sq = q(generator_pairing(c, c));
    if table.contains(c) {
        sq * q(2)
    } else {
        sq / q(2)
    }
}

/// The two listed generators of the hyperbolic summand.
pub fn h_generators() -> (DivisorClass, DivisorClass) {
    let h1 = FibrationRecord::standard().fibre_class;
    let h2 = &h1 + &DivisorClass::generator(Generator::E(9));
    (h1, h2)
}

/// Gram matrix of the 18 roots other than `E10`.
pub fn root_basis_gram() -> GramMatrix {
    let basis = canonical_basis();
    let m = IntMatrix::from_fn(basis.len(), basis.len(), |i, j| generator_pairing(basis[i], basis[j]));
    GramMatrix::new(m).expect("symmetric")
}

pub fn verify_m_identification() -> Vec<Clause> {
    let g = root_basis_gram();
    let det = g.determinant();
    let inertia = g.inertia();
    let expected = InertiaTriple {
        n_plus: 1,
        n_zero: 0,
        n_minus: 17,
    };
    let (h1, h2) = h_generators();
    let hg = [
        [pairing(&h1, &h1), pairing(&h1, &h2)],
        [pairing(&h2, &h1), pairing(&h2, &h2)],
    ];
    let hyperbolic = hg == [[q(0), q(1)], [q(1), q(0)]];
    let block: Vec<Generator> = (0..=7).chain(11..=18).map(Generator::E).collect();
    let orthogonal = block
        .iter()
        .all(|&e| pairing_with(&h1, e).is_zero() && pairing_with(&h2, e).is_zero());
    vec![
        Clause::new("rank", g.rank() == 18, alloc::format!("rank {}", g.rank())),
        Clause::new("unimodular", det.abs() == 1.into(), alloc::format!("det = {det}")),
        Clause::new("even", g.is_even(), "all diagonal entries are even"),
        Clause::new(
            "signature",
            inertia == expected,
            alloc::format!("inertia ({}, {}, {})", inertia.n_plus, inertia.n_zero, inertia.n_minus),
        ),
        Clause::new(
            "h-gram",
            hyperbolic,
            alloc::format!("[[{}, {}], [{}, {}]]", hg[0][0], hg[0][1], hg[1][0], hg[1][1]),
        ),
        Clause::new(
            "h-orthogonal-e8-blocks",
            orthogonal,
            "both H generators annihilate E0..E7 and E11..E18",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn cls(s: &str) -> DivisorClass {
        DivisorClass::parse(s).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let e3 = DivisorClass::generator(Generator::E(3));
        assert_eq!(pairing(&e3, &e3), q(-2));
        let s = DivisorClass::generator(Generator::S);
        let t = DivisorClass::generator(Generator::T);
        assert_eq!(pairing(&s, &t), q(2));
        let f = FibrationRecord::standard().fibre_class;
        assert_eq!(pairing(&f, &t), q(3));
    }

    #[test]
    fn relations_orthogonal() {
        for r in RelationSet::standard().as_array() {
            for g in Generator::all() {
                assert!(pairing_with(r, g).is_zero(), "{r} . {g}");
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let rel = RelationSet::standard();
        assert!(canonicalize(&rel.r1).coefficients.iter().all(Zero::is_zero));
        let e5 = canonicalize(&DivisorClass::generator(Generator::E(5)));
        assert_eq!(e5.to_class(), DivisorClass::generator(Generator::E(5)));
        let s = DivisorClass::generator(Generator::S);
        let cs = canonicalize(&s);
        assert!(lin_equiv(&cs.to_class(), &s));
        for g in Generator::all() {
            assert_eq!(pairing_with(&cs.to_class(), g), pairing_with(&s, g));
        }
        assert_eq!(canonicalize(&cs.to_class()), cs);
    }

    #[test]
    fn equivalences() {
        let std = FibrationRecord::standard();
        assert!(lin_equiv(
            &std.reducible_fibres[0].class(),
            &std.reducible_fibres[1].class()
        ));
        assert!(!lin_equiv(
            &DivisorClass::generator(Generator::E(0)),
            &DivisorClass::generator(Generator::E(1))
        ));
        let s = DivisorClass::generator(Generator::S);
        let r2 = RelationSet::standard().r2;
        assert!(lin_equiv(&(&s + &r2), &s));
    }

    #[test]
    fn nef_and_rr() {
        let d = cls("(4;3,6,9,8,7,6,5,4,3,2,1,0,0,0,0,0,0;0|0,0)");
        assert!(is_nef(&d) && is_big_nef(&d));
        assert_eq!(pairing(&d, &d), q(4));
        assert_eq!(rr_sections(&d), Ok(4));
        assert_eq!(rr_sections(&d.scale(&q(2))), Ok(10));
        assert!(!is_nef(&-&DivisorClass::generator(Generator::E(0))));
        let half = cls("(1;1,2,3,3,3,3,3,3,3,3,3,3,3,3,3,3/2,0;3/2)");
        assert_eq!(rr_sections(&half), Err(NsError::NonIntegral));
        assert_eq!(rr_sections(&half.scale(&q(2))), Ok(4));
        let fibre = FibrationRecord::standard().fibre_class;
        assert_eq!(rr_sections(&fibre), Err(NsError::NotBigNef));
    }

    #[test]
    fn floors_and_sections() {
        let d = cls("(3;2,4,6,5,4,3,2,1,1/2,0,0,0,0,0,0,0,0;0)");
        let fl = floor_multiple(&d, 1);
        assert_eq!(fl.coeff(Generator::E(9)), &q(0));
        assert_eq!(fl.coeff(Generator::E(0)), &q(3));
        let w = cls("(8;5,10,15,12,9,6,3,0,0,0,3,6,9,12,15,10,5;8|0,1)");
        assert_eq!(verify_section(&w, 6, &d), Ok(true));
        let d2 = cls("(1;0,1,2,2,2,2,2,2,2,2,2,2,2,5/2,3,2,1;3/2)");
        assert!(floor_multiple(&d2, 2).is_integral());
        assert_eq!(floor_multiple(&d2, 2), d2.scale(&q(2)));
        let e5 = DivisorClass::generator(Generator::E(5));
        assert_eq!(verify_section(&e5, 1, &e5), Ok(true));
        assert!(verify_section(&-&e5, 1, &e5).is_err());
        assert!(verify_section(&e5.scale(&frac(1, 2)), 1, &e5).is_err());
    }

    #[test]
    fn fibrations() {
        assert!(crate::all_passed(&fibration_check(&FibrationRecord::standard())));
        let alt = FibrationRecord::alternate();
        assert_eq!(alt.reducible_fibres[0].components.len(), 17);
        assert!(crate::all_passed(&fibration_check(&alt)));
        let mut bad = FibrationRecord::standard();
        bad.fibre_class = DivisorClass::generator(Generator::E(0));
        let clauses = fibration_check(&bad);
        assert!(!clauses.iter().find(|c| c.id == "fibre-square-zero").unwrap().passed);
    }

    #[test]
    fn quotient_values() {
        let t = FixedLocusTable::standard();
        assert_eq!(t.fixed.len(), 10);
        assert_eq!(quotient_self_intersection(Generator::E(1), &t), q(-4));
        assert_eq!(quotient_self_intersection(Generator::E(2), &t), q(-1));
        assert_eq!(quotient_self_intersection(Generator::T, &t), q(4));
        assert_eq!(quotient_self_intersection(Generator::S, &t), q(0));
    }

    #[test]
    fn m_identification() {
        let clauses = verify_m_identification();
        assert!(crate::all_passed(&clauses), "{clauses:?}");
    }

    #[test]
    fn text_round_trip() {
        let c = cls("(1/2;0,1/2,1,1,1,1,1,1,1,1,1,1,1,1,6/5,4/5,2/5;3/5|0,0)");
        assert_eq!(DivisorClass::parse(&alloc::format!("{c}")).unwrap(), c);
        assert!(DivisorClass::parse("(1;2;3)").is_err());
        assert!(DivisorClass::parse("1;0,0;0").is_err());
        assert_eq!(Generator::parse("E_17"), Some(Generator::E(17)));
        assert_eq!(Generator::parse("E19"), None);
    }
}
