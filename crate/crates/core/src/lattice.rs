//! Integer symmetric bilinear forms, Smith normal form, finite lattice
//! quotients and A/D/E classification of (−2)-curve configurations.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{q, sign, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    NotSquare,
    NotSymmetric { row: usize, col: usize },
    InvalidFamily { family: LatticeFamily, rank: usize },
    NotFiniteIndex,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotSquare => write!(f, "matrix is not square"),
            LatticeError::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at ({row}, {col})")
            }
            LatticeError::InvalidFamily { family, rank } => {
                write!(f, "no standard lattice {family:?}{rank}")
            }
            LatticeError::NotFiniteIndex => {
                write!(f, "rows do not span a finite-index sublattice")
            }
        }
    }
}

impl core::error::Error for LatticeError {}

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from its rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::from(1));
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut negate = false;
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += k * v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += k * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Integer symmetric bilinear form on `Z^rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    entries: IntMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LatticeFamily {
    A,
    D,
    E,
    /// The hyperbolic plane; its rank argument is ignored.
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InertiaTriple {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl GramMatrix {
    pub fn new(entries: IntMatrix) -> Result<Self, LatticeError> {
        if entries.rows() != entries.cols() {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..entries.rows() {
            for j in 0..i {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(LatticeError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(GramMatrix { entries })
    }

    /// Gram matrix of a simply-laced root configuration: `-2` on the
    /// diagonal and `1` for every listed edge.
    pub fn from_root_graph(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = -2;
        }
        for &(a, b) in edges {
            m[(a, b)] = 1;
            m[(b, a)] = 1;
        }
        GramMatrix { entries: m }
    }

    pub fn rank(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.get(i, i) % 2 == 0)
    }

    pub fn determinant(&self) -> BigInt {
        self.entries.determinant().expect("gram matrices are square")
    }

    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let (a, b) = (self.rank(), other.rank());
        let m = IntMatrix::from_fn(a + b, a + b, |i, j| {
            if i < a && j < a {
                self.get(i, j)
            } else if i >= a && j >= a {
                other.get(i - a, j - a)
            } else {
                0
            }
        });
        GramMatrix { entries: m }
    }

    /// Pairing `xᵀ G y` of two integer vectors.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * self.get(i, j) * y[j];
            }
        }
        s
    }

    /// Sylvester inertia by exact congruence diagonalisation over `Q`.
    pub fn inertia(&self) -> InertiaTriple {
        let n = self.rank();
        let mut a: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| q(self.get(i, j))).collect()).collect();
        let mut t = InertiaTriple {
            n_plus: 0,
            n_zero: 0,
            n_minus: 0,
        };
        let mut k = 0;
        while k < n {
            // Bring a nonzero diagonal entry to position k.
            if a[k][k].is_zero() {
                if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                    a.swap(k, p);
                    for row in a.iter_mut() {
                        row.swap(k, p);
                    }
                } else if let Some(p) = (k + 1..n).find(|&p| !a[k][p].is_zero()) {
                    // Replace e_k by e_k + e_p: new diagonal is 2 a[k][p] != 0.
                    for j in 0..n {
                        let v = a[p][j].clone();
                        a[k][j] += v;
                    }
                    for i in 0..n {
                        let v = a[i][p].clone();
                        a[i][k] += v;
                    }
                } else {
                    // Row k vanishes on the remaining block.
                    if (k + 1..n).any(|p| !a[k][p].is_zero()) {
                        unreachable!("row k is zero by construction");
                    }
                    t.n_zero += 1;
                    k += 1;
                    continue;
                }
            }
            let pivot = a[k][k].clone();
            match sign(&pivot) {
                1 => t.n_plus += 1,
                -1 => t.n_minus += 1,
                _ => unreachable!(),
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k..n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
                for r in a.iter_mut().skip(k) {
                    let v = &f * &r[k];
                    r[i] -= v;
                }
            }
            k += 1;
        }
        t
    }
}

impl InertiaTriple {
    pub fn total(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }
}

/// Standard Gram matrices: `H`, and negative definite `A_n`, `D_n`, `E_n`.
/// `E_n` for `n ≥ 9` uses the same T-shaped diagram (no longer definite).
pub fn standard_gram(family: LatticeFamily, n: usize) -> Result<GramMatrix, LatticeError> {
    let invalid = Err(LatticeError::InvalidFamily { family, rank: n });
    match family {
        LatticeFamily::H => Ok(GramMatrix {
            entries: IntMatrix::from_rows(&[[0, 1], [1, 0]]),
        }),
        LatticeFamily::A => {
            if n < 1 {
                return invalid;
            }
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Ok(GramMatrix::from_root_graph(n, &edges))
        }
        LatticeFamily::D => {
            if n < 4 {
                return invalid;
            }
            // chain 0..n-2, node n-1 attached to node 1
            let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            edges.push((1, n - 1));
            Ok(GramMatrix::from_root_graph(n, &edges))
        }
        LatticeFamily::E => {
            if n < 6 {
                return invalid;
            }
            // chain 0..n-2, node n-1 attached to node 2
            let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            edges.push((2, n - 1));
            Ok(GramMatrix::from_root_graph(n, &edges))
        }
    }
}

pub fn direct_sum(a: &GramMatrix, b: &GramMatrix) -> GramMatrix {
    a.direct_sum(b)
}

/// `left · m · right = diag(factors)` with `left`, `right` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` diagonal entries, non-negative, each dividing the next.
    pub factors: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)] != 0 && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        u.swap_rows(t, bi);
        a.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let k = a[(i, t)].div_euclid(a[(t, t)]);
                if k != 0 {
                    a.add_row(i, t, -k);
                    u.add_row(i, t, -k);
                }
                if a[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let k = a[(t, j)].div_euclid(a[(t, t)]);
                if k != 0 {
                    a.add_col(j, t, -k);
                    v.add_col(j, t, -k);
                }
                if a[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot; move it in
                let mut best = (t, t);
                for i in t + 1..rows {
                    if a[(i, t)] != 0 && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if a[(t, j)] != 0 && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // pivot must divide the whole trailing block
            let p = a[(t, t)];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[(i, j)] % p != 0));
            match bad {
                Some(i) => {
                    a.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if a[(t, t)] < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let factors = (0..steps).map(|i| a[(i, i)]).collect();
    SmithForm {
        factors,
        left: u,
        right: v,
    }
}

/// Finite abelian group `Z/d1 ⊕ … ⊕ Z/dk` with `d1 | d2 | … | dk`, all `≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }
}

/// `Z^n / (row span)` for a square integer matrix of nonzero determinant.
pub fn lattice_quotient(rows: &IntMatrix) -> Result<FiniteAbelianGroup, LatticeError> {
    if rows.rows() != rows.cols() {
        return Err(LatticeError::NotSquare);
    }
    if rows.determinant()?.is_zero() {
        return Err(LatticeError::NotFiniteIndex);
    }
    let snf = smith_normal_form(rows);
    Ok(FiniteAbelianGroup {
        invariant_factors: snf.factors.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

/// `A_n (n≥1)`, `D_n (n≥4)` or `E_n (n≥6)`; `E_n` for `n≥9` is the
/// T-shaped diagram with arms of lengths 1, 2 and `n-4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynkinLabel {
    family: DynkinFamily,
    index: u32,
}

impl DynkinLabel {
    pub fn new(family: DynkinFamily, index: u32) -> Option<Self> {
        let min = match family {
            DynkinFamily::A => 1,
            DynkinFamily::D => 4,
            DynkinFamily::E => 6,
        };
        (index >= min).then_some(DynkinLabel { family, index })
    }

    pub fn a(n: u32) -> Self {
        Self::new(DynkinFamily::A, n).expect("A_n needs n >= 1")
    }

    pub fn d(n: u32) -> Self {
        Self::new(DynkinFamily::D, n).expect("D_n needs n >= 4")
    }

    pub fn e(n: u32) -> Self {
        Self::new(DynkinFamily::E, n).expect("E_n needs n >= 6")
    }

    pub fn family(&self) -> DynkinFamily {
        self.family
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Number of nodes in the diagram.
    pub fn rank(&self) -> u32 {
        self.index
    }

    /// Parses `A11`, `D5`, `E17`, also accepting `E_17`.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let mut chars = t.chars();
        let family = match chars.next()? {
            'A' => DynkinFamily::A,
            'D' => DynkinFamily::D,
            'E' => DynkinFamily::E,
            _ => return None,
        };
        let rest = chars.as_str().trim_start_matches('_');
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        Self::new(family, rest.parse().ok()?)
    }
}

impl fmt::Display for DynkinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            DynkinFamily::A => 'A',
            DynkinFamily::D => 'D',
            DynkinFamily::E => 'E',
        };
        write!(f, "{c}{}", self.index)
    }
}

/// Parses a concatenated label such as `A1A2E15` into sorted components.
pub fn parse_dynkin_multiset(text: &str) -> Option<Vec<DynkinLabel>> {
    let t = text.trim();
    let mut out = Vec::new();
    let bytes = t.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        i += 1;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
            i += 1;
        }
        out.push(DynkinLabel::parse(&t[start..i])?);
    }
    out.sort();
    Some(out)
}

/// Joins labels into the concatenated form (`A1E17`); empty for no labels.
pub fn format_dynkin_multiset(labels: &[DynkinLabel]) -> alloc::string::String {
    use core::fmt::Write;
    let mut sorted = labels.to_vec();
    sorted.sort();
    let mut s = alloc::string::String::new();
    for l in sorted {
        let _ = write!(s, "{l}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DynkinError {
    /// Node (by position in the input) does not have self-pairing −2.
    NotARoot { node: usize, self_pairing: i64 },
    /// Two distinct nodes pair to something other than 0 or 1.
    BadPairing { a: usize, b: usize, value: i64 },
    /// A connected component is not of A/D/E shape.
    UnrecognizedShape { nodes: Vec<usize> },
}

impl fmt::Display for DynkinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinError::NotARoot { node, self_pairing } => {
                write!(f, "node {node} has self-pairing {self_pairing}, expected -2")
            }
            DynkinError::BadPairing { a, b, value } => {
                write!(f, "nodes {a} and {b} pair to {value}, expected 0 or 1")
            }
            DynkinError::UnrecognizedShape { nodes } => {
                write!(f, "component {nodes:?} is not an A/D/E diagram")
            }
        }
    }
}

impl core::error::Error for DynkinError {}

/// Classifies the incidence graph of a set of roots. Duplicate nodes are
/// ignored. The result is sorted.
pub fn dynkin_classify<N: Ord + Clone>(
    nodes: &[N],
    pairing: impl Fn(&N, &N) -> i64,
) -> Result<Vec<DynkinLabel>, DynkinError> {
    let uniq: Vec<N> = nodes.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let n = uniq.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let s = pairing(&uniq[i], &uniq[i]);
        if s != -2 {
            return Err(DynkinError::NotARoot {
                node: i,
                self_pairing: s,
            });
        }
        for j in i + 1..n {
            match pairing(&uniq[i], &uniq[j]) {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                value => return Err(DynkinError::BadPairing { a: i, b: j, value }),
            }
        }
    }

    let mut seen = vec![false; n];
    let mut labels = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        labels.push(classify_tree(&comp, &adj).ok_or(DynkinError::UnrecognizedShape { nodes: comp })?);
    }
    labels.sort();
    Ok(labels)
}

fn classify_tree(comp: &[usize], adj: &[Vec<usize>]) -> Option<DynkinLabel> {
    let k = comp.len();
    let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges + 1 != k {
        return None;
    }
    let branches: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
    match branches.as_slice() {
        [] => DynkinLabel::new(DynkinFamily::A, k as u32),
        [b] if adj[*b].len() == 3 => {
            let mut arms: Vec<usize> = adj[*b]
                .iter()
                .map(|&first| {
                    let (mut prev, mut cur, mut len) = (*b, first, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&y| y != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms[..] {
                [1, 1, _] => DynkinLabel::new(DynkinFamily::D, k as u32),
                [1, 2, _] => DynkinLabel::new(DynkinFamily::E, k as u32),
                _ => None,
            }
        }
        _ => None,
    }
}
