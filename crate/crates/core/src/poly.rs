//! Exact Laurent polynomials over `Q` with opaque symbolic parameters.
//!
//! A term is `c · Π pⱼ^fⱼ · Π xᵢ^eᵢ` with `c` rational and both exponent
//! families allowed to be negative. Everything outside the declared
//! variable list is a parameter.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{q, write_q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    Parse {
        position: usize,
        message: String,
    },
    UnknownVariable(String),
    UnknownParameter(String),
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    VariableMismatch,
    /// A negative power or division needs a single-term operand.
    NotInvertible,
    /// `complete_power` preconditions failed.
    Degree {
        var: String,
        expected: u32,
        found: String,
    },
    NotDivisible {
        var: String,
    },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::Parse { position, message } => {
                write!(f, "parse error at offset {position}: {message}")
            }
            PolyError::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            PolyError::UnknownParameter(p) => write!(f, "unknown parameter `{p}`"),
            PolyError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            PolyError::VariableMismatch => write!(f, "polynomials use different variable lists"),
            PolyError::NotInvertible => write!(f, "only monomials can be inverted"),
            PolyError::Degree { var, expected, found } => {
                write!(f, "expected degree {expected} in `{var}`, found {found}")
            }
            PolyError::NotDivisible { var } => {
                write!(
                    f,
                    "subleading coefficient in `{var}` is not divisible by the leading one"
                )
            }
        }
    }
}

impl core::error::Error for PolyError {}

/// Product of named parameters with integer exponents; never stores a zero exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMonomial(BTreeMap<String, i32>);

impl ParamMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(name: &str, exp: i32) -> Self {
        let mut m = Self::default();
        m.push(name, exp);
        m
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i32)>) -> Self {
        let mut m = Self::default();
        for (n, e) in pairs {
            m.push(n, e);
        }
        m
    }

    fn push(&mut self, name: &str, exp: i32) {
        let e = self.0.get(name).copied().unwrap_or(0) + exp;
        if e == 0 {
            self.0.remove(name);
        } else {
            self.0.insert(name.to_owned(), e);
        }
    }

    pub fn mul(&self, other: &ParamMonomial) -> ParamMonomial {
        let mut m = self.clone();
        for (n, &e) in &other.0 {
            m.push(n, e);
        }
        m
    }

    pub fn pow(&self, k: i32) -> ParamMonomial {
        ParamMonomial(
            self.0
                .iter()
                .map(|(n, &e)| (n.clone(), e * k))
                .filter(|(_, e)| *e != 0)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i32)> {
        self.0.iter().map(|(n, &e)| (n.as_str(), e))
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.0.get(name).copied().unwrap_or(0)
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, e) in self.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write_power(f, n, e)?;
        }
        Ok(())
    }
}

fn write_power(f: &mut impl fmt::Write, name: &str, e: i32) -> fmt::Result {
    match e {
        1 => write!(f, "{name}"),
        e if e < 0 => write!(f, "{name}^({e})"),
        e => write!(f, "{name}^{e}"),
    }
}

/// Variable exponents together with the parameter part of a term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub exps: Vec<i32>,
    pub params: ParamMonomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<TermKey, Q>,
}

impl LaurentPolynomial {
    pub fn zero(vars: &[&str]) -> Self {
        LaurentPolynomial {
            vars: vars.iter().map(|&v| v.to_owned()).collect(),
            terms: BTreeMap::new(),
        }
    }

    fn zero_like(&self) -> Self {
        LaurentPolynomial {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Q) -> Self {
        let mut p = Self::zero(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], ParamMonomial::one(), c);
        p
    }

    pub fn monomial(vars: &[&str], exps: &[i32], params: ParamMonomial, c: Q) -> Result<Self, PolyError> {
        if exps.len() != vars.len() {
            return Err(PolyError::LengthMismatch {
                expected: vars.len(),
                found: exps.len(),
            });
        }
        let mut p = Self::zero(vars);
        p.add_term(exps.to_vec(), params, c);
        Ok(p)
    }

    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let i = vars
            .iter()
            .position(|&v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_owned()))?;
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::monomial(vars, &exps, ParamMonomial::one(), q(1))
    }

    pub fn param(vars: &[&str], name: &str) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        p.add_term(vec![0; n], ParamMonomial::single(name, 1), q(1));
        p
    }

    fn add_term(&mut self, exps: Vec<i32>, params: ParamMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = TermKey { exps, params };
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct variable exponent vectors, ignoring coefficients.
    pub fn support(&self) -> Vec<Vec<i32>> {
        let mut s: Vec<Vec<i32>> = self.terms.keys().map(|k| k.exps.clone()).collect();
        s.dedup();
        s.sort();
        s.dedup();
        s
    }

    fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_owned()))
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut r = self.clone();
        for (k, c) in &other.terms {
            r.add_term(k.exps.clone(), k.params.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut r = self.zero_like();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                r.add_term(exps, a.params.mul(&b.params), ca * cb);
            }
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut r = self.zero_like();
        if c.is_zero() {
            return r;
        }
        for (k, v) in &self.terms {
            r.terms.insert(k.clone(), v * c);
        }
        r
    }

    /// Multiplies every term by `Π xᵢ^{exps[i]}`.
    pub fn mul_monomial(&self, exps: &[i32]) -> Result<Self, PolyError> {
        if exps.len() != self.vars.len() {
            return Err(PolyError::LengthMismatch {
                expected: self.vars.len(),
                found: exps.len(),
            });
        }
        let mut r = self.zero_like();
        for (k, v) in &self.terms {
            let e = k.exps.iter().zip(exps).map(|(a, b)| a + b).collect();
            r.terms.insert(
                TermKey {
                    exps: e,
                    params: k.params.clone(),
                },
                v.clone(),
            );
        }
        Ok(r)
    }

    /// Inverse of a single-term polynomial.
    pub fn inverse(&self) -> Result<Self, PolyError> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((k, c)), None) => {
                let mut r = self.zero_like();
                r.add_term(k.exps.iter().map(|e| -e).collect(), k.params.pow(-1), c.recip());
                Ok(r)
            }
            _ => Err(PolyError::NotInvertible),
        }
    }

    pub fn pow(&self, k: i32) -> Result<Self, PolyError> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let n = self.vars.len();
        let mut result = self.zero_like();
        result.add_term(vec![0; n], ParamMonomial::one(), q(1));
        let mut base = self.clone();
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Coefficients of `var^j` as polynomials in the remaining variables
    /// (with `var` exponent zero), keyed by `j`.
    pub fn coefficients_in(&self, var: &str) -> Result<BTreeMap<i32, LaurentPolynomial>, PolyError> {
        let i = self.var_index(var)?;
        let mut out: BTreeMap<i32, LaurentPolynomial> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut exps = k.exps.clone();
            let j = exps[i];
            exps[i] = 0;
            out.entry(j)
                .or_insert_with(|| self.zero_like())
                .add_term(exps, k.params.clone(), c.clone());
        }
        Ok(out)
    }

    /// Same terms over a different variable list; every used variable must survive.
    pub fn with_vars(&self, vars: &[&str]) -> Result<Self, PolyError> {
        let mut r = Self::zero(vars);
        for (k, c) in &self.terms {
            let mut exps = vec![0; vars.len()];
            for (i, &e) in k.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = vars
                    .iter()
                    .position(|v| *v == self.vars[i])
                    .ok_or_else(|| PolyError::UnknownVariable(self.vars[i].clone()))?;
                exps[j] = e;
            }
            r.add_term(exps, k.params.clone(), c.clone());
        }
        Ok(r)
    }

    /// Parameter names used by any term.
    pub fn parameters(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .keys()
            .flat_map(|k| k.params.iter().map(|(n, _)| n.to_owned()))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    /// Replaces each listed parameter by a rational value.
    pub fn specialize(&self, values: &BTreeMap<String, Q>) -> Result<Self, PolyError> {
        let mut r = self.zero_like();
        for (k, c) in &self.terms {
            let mut coeff = c.clone();
            let mut params = ParamMonomial::one();
            for (n, e) in k.params.iter() {
                match values.get(n) {
                    Some(v) => {
                        if v.is_zero() && e < 0 {
                            return Err(PolyError::NotInvertible);
                        }
                        let pv = if e >= 0 {
                            num_traits::pow(v.clone(), e as usize)
                        } else {
                            num_traits::pow(v.recip(), (-e) as usize)
                        };
                        coeff *= pv;
                    }
                    None => params.push(n, e),
                }
            }
            r.add_term(k.exps.clone(), params, coeff);
        }
        Ok(r)
    }

    pub fn parse(text: &str, vars: &[&str]) -> Result<Self, PolyError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            vars,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Parses `lhs = rhs` as `lhs - rhs`; a bare expression is taken as `expr = 0`.
    pub fn parse_equation(text: &str, vars: &[&str]) -> Result<Self, PolyError> {
        match text.split_once('=') {
            Some((l, r)) => Self::parse(l, vars)?.try_sub(&Self::parse(r, vars)?),
            None => Self::parse(text, vars),
        }
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let trivial = k.params.is_one() && k.exps.iter().all(|&e| e == 0);
            if !a.is_one() || trivial {
                let mut s = String::new();
                write_q(&mut s, &a)?;
                if !a.is_integer() {
                    s = alloc::format!("({s})");
                }
                factors.push(s);
            }
            if !k.params.is_one() {
                factors.push(alloc::format!("{}", k.params));
            }
            for (v, &e) in self.vars.iter().zip(&k.exps) {
                if e != 0 {
                    let mut s = String::new();
                    write_power(&mut s, v, e)?;
                    factors.push(s);
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PolyError {
        PolyError::Parse {
            position: self.pos,
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.unary()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.try_mul(&d.inverse().map_err(|_| self.error("divisor must be a single term"))?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPolynomial, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LaurentPolynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let k = if self.peek() == Some(b'(') {
            self.pos += 1;
            let k = self.int()?;
            if self.peek() != Some(b')') {
                return Err(self.error("expected `)` after exponent"));
            }
            self.pos += 1;
            k
        } else {
            self.int()?
        };
        base.pow(k).map_err(|_| self.error("negative power of a non-monomial"))
    }

    fn int(&mut self) -> Result<i32, PolyError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                self.pos = start;
                self.error("expected an integer exponent")
            })
    }

    fn atom(&mut self) -> Result<LaurentPolynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let n: num_bigint::BigInt = s.parse().map_err(|_| self.error("bad number"))?;
                Ok(LaurentPolynomial::constant(self.vars, Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if self.vars.contains(&name) {
                    LaurentPolynomial::var(self.vars, name)
                } else {
                    Ok(LaurentPolynomial::param(self.vars, name))
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

pub fn weighted_degree(exps: &[i32], weights: &[i64]) -> Result<i64, PolyError> {
    if exps.len() != weights.len() {
        return Err(PolyError::LengthMismatch {
            expected: weights.len(),
            found: exps.len(),
        });
    }
    Ok(exps.iter().zip(weights).map(|(&e, &w)| i64::from(e) * w).sum())
}

/// The common weighted degree of all terms, if there is one.
pub fn is_weighted_homogeneous(p: &LaurentPolynomial, weights: &[i64]) -> Option<i64> {
    let mut degree = None;
    for (k, _) in p.terms() {
        let d = weighted_degree(&k.exps, weights).ok()?;
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => return None,
            _ => {}
        }
    }
    degree
}

/// Replaces each mapped variable by its image, over `target_vars`.
/// Unmapped variables must also appear in `target_vars`.
pub fn substitute(
    p: &LaurentPolynomial,
    map: &BTreeMap<String, LaurentPolynomial>,
    target_vars: &[&str],
) -> Result<LaurentPolynomial, PolyError> {
    let mut images = Vec::with_capacity(p.vars.len());
    for v in &p.vars {
        let img = match map.get(v) {
            Some(img) => img.with_vars(target_vars)?,
            None => LaurentPolynomial::var(target_vars, v)?,
        };
        images.push(img);
    }
    let mut out = LaurentPolynomial::zero(target_vars);
    for (k, c) in p.terms() {
        let mut t = LaurentPolynomial::zero(target_vars);
        t.add_term(vec![0; target_vars.len()], k.params.clone(), c.clone());
        for (img, &e) in images.iter().zip(&k.exps) {
            if e != 0 {
                t = t.try_mul(&img.pow(e)?)?;
            }
        }
        out = out.try_add(&t)?;
    }
    Ok(out)
}

/// Multiplies by the smallest monomial making every exponent non-negative;
/// returns the result and that monomial's exponents.
pub fn clear_denominators(p: &LaurentPolynomial) -> (LaurentPolynomial, Vec<i32>) {
    let n = p.vars.len();
    let mut m = vec![0; n];
    for (k, _) in p.terms() {
        for (mi, &e) in m.iter_mut().zip(&k.exps) {
            *mi = (*mi).max(-e);
        }
    }
    let r = p.mul_monomial(&m).expect("lengths agree");
    (r, m)
}

/// Tschirnhaus shift in `var`: for `p = c_k v^k + c_{k-1} v^{k-1} + …` with
/// `c_k` a single term, returns `p(v - s)` with `s = c_{k-1} / (k c_k)`, and `s`.
pub fn complete_power(
    p: &LaurentPolynomial,
    var: &str,
    k: u32,
) -> Result<(LaurentPolynomial, LaurentPolynomial), PolyError> {
    let coeffs = p.coefficients_in(var)?;
    let degree_err = |found: String| PolyError::Degree {
        var: var.to_owned(),
        expected: k,
        found,
    };
    let (&lo, _) = coeffs
        .first_key_value()
        .ok_or_else(|| degree_err(String::from("zero polynomial")))?;
    let (&hi, lead) = coeffs.last_key_value().expect("non-empty");
    if hi != k as i32 || lo < 0 {
        return Err(degree_err(alloc::format!("exponents {lo}..{hi}")));
    }
    let inv = lead
        .inverse()
        .map_err(|_| PolyError::NotDivisible { var: var.to_owned() })?;
    let shift = match coeffs.get(&(k as i32 - 1)) {
        Some(sub) => sub.try_mul(&inv)?.scale(&Q::new(1.into(), (k as i64).into())),
        None => p.zero_like(),
    };
    let vi = p.var_index(var)?;
    if shift
        .terms()
        .any(|(t, _)| t.exps.iter().any(|&e| e < 0) || t.exps[vi] != 0)
    {
        return Err(PolyError::NotDivisible { var: var.to_owned() });
    }
    let vars = p.vars();
    let image = LaurentPolynomial::var(&vars, var)?.try_sub(&shift)?;
    let mut map = BTreeMap::new();
    map.insert(var.to_owned(), image);
    let reduced = substitute(p, &map, &vars)?;
    Ok((reduced, shift))
}

/// Diagonal torus: variable `i` is rescaled by `Π_r λ_r^{weights[i][r]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusAction {
    pub weights: Vec<Vec<i64>>,
}

impl TorusAction {
    /// The full torus `(C*)^n` acting on each variable separately.
    pub fn full(n: usize) -> Self {
        TorusAction {
            weights: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Weight vector of a monomial.
    pub fn monomial_weight(&self, exps: &[i32]) -> Result<Vec<i64>, PolyError> {
        if exps.len() != self.weights.len() {
            return Err(PolyError::LengthMismatch {
                expected: self.weights.len(),
                found: exps.len(),
            });
        }
        let mut w = vec![0; self.rank()];
        for (row, &e) in self.weights.iter().zip(exps) {
            for (wi, &r) in w.iter_mut().zip(row) {
                *wi += i64::from(e) * r;
            }
        }
        Ok(w)
    }

    /// Weights of coefficients attached to monomials, so that each term is
    /// invariant. With `overall_scale`, an extra coordinate records the
    /// rescaling of the whole equation (weight 1 on every coefficient).
    pub fn induced_parameter_weights(
        &self,
        attached: &BTreeMap<String, Vec<i32>>,
        overall_scale: bool,
    ) -> Result<BTreeMap<String, Vec<i64>>, PolyError> {
        let mut out = BTreeMap::new();
        for (name, exps) in attached {
            let mut w: Vec<i64> = self.monomial_weight(exps)?.into_iter().map(|x| -x).collect();
            if overall_scale {
                w.push(1);
            }
            out.insert(name.clone(), w);
        }
        Ok(out)
    }
}

/// True iff `combination` has total weight zero.
pub fn invariance_check(
    combination: &ParamMonomial,
    action: &TorusAction,
    parameter_weights: &BTreeMap<String, Vec<i64>>,
) -> Result<bool, PolyError> {
    let dim = parameter_weights.values().next().map_or(action.rank(), Vec::len);
    let mut total = vec![0i64; dim];
    for (name, e) in combination.iter() {
        let w = parameter_weights
            .get(name)
            .ok_or_else(|| PolyError::UnknownParameter(name.to_owned()))?;
        if w.len() != dim {
            return Err(PolyError::LengthMismatch {
                expected: dim,
                found: w.len(),
            });
        }
        for (t, &x) in total.iter_mut().zip(w) {
            *t += i64::from(e) * x;
        }
    }
    Ok(total.iter().all(|&t| t == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, vars: &[&str]) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, vars).unwrap()
    }

    #[test]
    fn parse_display_round_trip() {
        let v = ["x", "y"];
        let a = p("3/4*a^2*x^-2 - b*y + x*(y - 1)^2", &v);
        let b = p(&alloc::format!("{a}"), &v);
        assert_eq!(a, b);
        assert_eq!(p("x^(-2)", &v), p("1/x^2", &v));
        assert!(LaurentPolynomial::parse("x +", &v).is_err());
        assert!(LaurentPolynomial::parse("1/(x+y)", &v).is_err());
        assert!(LaurentPolynomial::parse("x ) ", &v).is_err());
        assert_eq!(p("x - x", &v).len(), 0);
    }

    #[test]
    fn degrees() {
        let v = ["x", "y", "z", "w"];
        let w = [1, 1, 4, 6];
        assert_eq!(weighted_degree(&[0, 0, 0, 2], &w), Ok(12));
        assert_eq!(weighted_degree(&[0, 0, 0, 0], &w), Ok(0));
        assert!(weighted_degree(&[1], &w).is_err());
        let e41 = LaurentPolynomial::parse_equation("w^2 = z^3 + a1*x^4*y^4*z + a2*x^5*y^7 + a3*x^6*y^6 + x^7*y^5", &v)
            .unwrap();
        assert_eq!(is_weighted_homogeneous(&e41, &w), Some(12));
        let cd = p("y^2*z*w - 4*x^3*z + 3*a*x*z*w^2 + b*z*w^3 - 1/2*(d*z^2*w^2 + w^4)", &v);
        assert_eq!(is_weighted_homogeneous(&cd, &[1, 1, 1, 1]), Some(4));
        assert_eq!(is_weighted_homogeneous(&p("x + y^2", &["x", "y"]), &[1, 1]), None);
    }

    #[test]
    fn complete_square_small() {
        let v = ["w"];
        let (r, s) = complete_power(&p("w^2 + 2*w", &v), "w", 2).unwrap();
        assert_eq!(r, p("w^2 - 1", &v));
        assert_eq!(s, p("1", &v));
        assert!(complete_power(&p("w^3 + w", &v), "w", 2).is_err());
        let v2 = ["x", "y"];
        assert!(matches!(
            complete_power(&p("x*y^2 + y", &v2), "y", 2),
            Err(PolyError::NotDivisible { .. })
        ));
    }

    #[test]
    fn substitution_identity() {
        let v = ["x", "y"];
        let a = p("x^2*y^-1 + c*x", &v);
        assert_eq!(substitute(&a, &BTreeMap::new(), &v).unwrap(), a);
    }

    #[test]
    fn invariance_trivial() {
        let mut attached = BTreeMap::new();
        attached.insert(String::from("a0"), vec![12, 0]);
        let t = TorusAction::full(2);
        let w = t.induced_parameter_weights(&attached, true).unwrap();
        let c = ParamMonomial::from_pairs([("a0", 1), ("a0", -1)]);
        assert!(c.is_one());
        assert_eq!(invariance_check(&c, &t, &w), Ok(true));
        assert_eq!(invariance_check(&ParamMonomial::single("a0", 1), &t, &w), Ok(false));
        assert!(invariance_check(&ParamMonomial::single("zz", 1), &t, &w).is_err());
    }
}
