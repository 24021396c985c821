//! Polytopes in a rank-3 lattice and the Cox grading of `WP(1,1,4,6)°`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::lattice::IntMatrix;
use crate::rational::{q, to_i64, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToricError {
    NotFullDimensional,
    OriginNotInterior,
    Singular,
    DuplicateVertex,
}

impl fmt::Display for ToricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricError::NotFullDimensional => write!(f, "polytope is not full-dimensional"),
            ToricError::OriginNotInterior => write!(f, "origin is not an interior point"),
            ToricError::Singular => write!(f, "matrix is singular"),
            ToricError::DuplicateVertex => write!(f, "vertices are not distinct"),
        }
    }
}

impl core::error::Error for ToricError {}

pub type Point = [Q; 3];

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &Point, b: &Point) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn is_zero(a: &Point) -> bool {
    a.iter().all(Zero::is_zero)
}

fn lift(v: [i64; 3]) -> Point {
    [q(v[0]), q(v[1]), q(v[2])]
}

/// Convex hull of finitely many rational points in `Q^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolytope {
    vertices: Vec<Point>,
}

/// A facet inequality `⟨normal, x⟩ ≥ -1` (origin-interior normalisation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Point,
}

impl RationalPolytope {
    /// Takes the convex hull of `points`, keeping only the extreme points.
    pub fn new(points: Vec<Point>) -> Result<Self, ToricError> {
        let mut pts = points;
        pts.sort();
        let n = pts.len();
        pts.dedup();
        if pts.len() != n {
            return Err(ToricError::DuplicateVertex);
        }
        let planes = supporting_planes(&pts)?;
        // A point is extreme iff the planes through it cut out only that point.
        let extreme: Vec<Point> = pts
            .iter()
            .filter(|p| {
                let through: Vec<&Point> = planes
                    .iter()
                    .filter(|(nrm, c)| dot(nrm, p) == *c)
                    .map(|(nrm, _)| nrm)
                    .collect();
                // three independent normals through p
                through.iter().enumerate().any(|(i, a)| {
                    through[i + 1..]
                        .iter()
                        .enumerate()
                        .any(|(j, b)| through[i + 1 + j + 1..].iter().any(|c| !dot(&cross(a, b), c).is_zero()))
                })
            })
            .cloned()
            .collect();
        Ok(RationalPolytope { vertices: extreme })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Facets as normals with `⟨n, x⟩ ≥ -1`, requiring the origin in the interior.
    pub fn facets(&self) -> Result<Vec<Facet>, ToricError> {
        let mut out = Vec::new();
        for (nrm, c) in supporting_planes(&self.vertices)? {
            // ⟨n, x⟩ ≥ c on the polytope; origin strictly inside means c < 0.
            if !c.is_negative() {
                return Err(ToricError::OriginNotInterior);
            }
            let k = -c;
            out.push(Facet {
                normal: [&nrm[0] / &k, &nrm[1] / &k, &nrm[2] / &k],
            });
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn polar_dual(&self) -> Result<RationalPolytope, ToricError> {
        let verts = self.facets()?.into_iter().map(|f| f.normal).collect();
        RationalPolytope::new(verts)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|c| c.is_integer()))
    }

    pub fn to_lattice(&self) -> Option<LatticePolytope> {
        let vs: Option<Vec<[i64; 3]>> = self
            .vertices
            .iter()
            .map(|v| Some([to_i64(&v[0])?, to_i64(&v[1])?, to_i64(&v[2])?]))
            .collect();
        vs.map(|vertices| LatticePolytope { vertices })
    }

    pub fn contains(&self, p: &Point) -> Result<bool, ToricError> {
        Ok(supporting_planes(&self.vertices)?.iter().all(|(n, c)| dot(n, p) >= *c))
    }
}

/// All planes `⟨n,x⟩ = c` spanned by three points with every point on the
/// side `⟨n,x⟩ ≥ c`, with `n` primitive-ish (deduplicated up to positive scale).
fn supporting_planes(pts: &[Point]) -> Result<Vec<(Point, Q)>, ToricError> {
    let n = pts.len();
    let mut planes: Vec<(Point, Q)> = Vec::new();
    let mut full_dim = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                if is_zero(&nrm) {
                    continue;
                }
                let c = dot(&nrm, &pts[i]);
                let (mut above, mut below) = (false, false);
                for p in pts {
                    let v = dot(&nrm, p);
                    if v > c {
                        above = true;
                    } else if v < c {
                        below = true;
                    }
                }
                if above || below {
                    full_dim = true;
                }
                let oriented = match (above, below) {
                    (true, true) | (false, false) => continue,
                    (true, false) => (nrm, c),
                    (false, true) => ([-&nrm[0], -&nrm[1], -&nrm[2]], -c),
                };
                planes.push(normalise(oriented));
            }
        }
    }
    if !full_dim {
        return Err(ToricError::NotFullDimensional);
    }
    planes.sort();
    planes.dedup();
    Ok(planes)
}

/// Scales so the first nonzero normal coordinate has absolute value 1.
fn normalise((n, c): (Point, Q)) -> (Point, Q) {
    let lead = n.iter().find(|x| !x.is_zero()).expect("nonzero normal").abs();
    ([&n[0] / &lead, &n[1] / &lead, &n[2] / &lead], c / lead)
}

/// Polytope with integer vertices in `Z^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    vertices: Vec<[i64; 3]>,
}

impl LatticePolytope {
    /// Vertices are sorted lexicographically; non-extreme input points are dropped.
    pub fn new(vertices: &[[i64; 3]]) -> Result<Self, ToricError> {
        let r = RationalPolytope::new(vertices.iter().map(|&v| lift(v)).collect())?;
        Ok(r.to_lattice().expect("integer input"))
    }

    pub fn vertices(&self) -> &[[i64; 3]] {
        &self.vertices
    }

    pub fn to_rational(&self) -> RationalPolytope {
        RationalPolytope {
            vertices: self.vertices.iter().map(|&v| lift(v)).collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> Result<Self, ToricError> {
        let vs: Vec<[i64; 3]> = self.vertices.iter().map(|v| [k * v[0], k * v[1], k * v[2]]).collect();
        Self::new(&vs)
    }

    pub fn facets(&self) -> Result<Vec<Facet>, ToricError> {
        self.to_rational().facets()
    }

    pub fn polar_dual(&self) -> Result<RationalPolytope, ToricError> {
        self.to_rational().polar_dual()
    }

    pub fn is_reflexive(&self) -> Result<bool, ToricError> {
        Ok(self.polar_dual()?.is_integral())
    }

    /// All integer points of the polytope, sorted.
    pub fn lattice_points(&self) -> Result<Vec<[i64; 3]>, ToricError> {
        let planes = supporting_planes(&self.to_rational().vertices)?;
        let lo = |i: usize| self.vertices.iter().map(|v| v[i]).min().unwrap_or(0);
        let hi = |i: usize| self.vertices.iter().map(|v| v[i]).max().unwrap_or(0);
        let mut out = Vec::new();
        for x in lo(0)..=hi(0) {
            for y in lo(1)..=hi(1) {
                for z in lo(2)..=hi(2) {
                    let p = lift([x, y, z]);
                    if planes.iter().all(|(n, c)| dot(n, &p) >= *c) {
                        out.push([x, y, z]);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The simplex whose fan gives `WP(1,1,4,6)°`.
pub fn wp1146_simplex() -> [[i64; 3]; 4] {
    [[-1, -1, -1], [11, -1, -1], [-1, 2, -1], [-1, -1, 1]]
}

/// `|det|` of a square integer matrix.
pub fn sublattice_index(rows: &IntMatrix) -> Result<u64, ToricError> {
    let d = rows.determinant().map_err(|_| ToricError::Singular)?;
    if d.is_zero() {
        return Err(ToricError::Singular);
    }
    use num_traits::ToPrimitive;
    d.abs().to_u64().ok_or(ToricError::Singular)
}

/// Orders of the factors of `Z12² ⊕ Z3 ⊕ Z2` containing `G`.
pub const G_MODULI: [i64; 4] = [12, 12, 3, 2];

/// An element of `G`, stored as the representative with first entry 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GElement([i64; 4]);

impl GElement {
    /// Reduces `(d0,d1,d2,d3)` modulo the diagonal `Z12`.
    pub fn normalize(d: [i64; 4]) -> Self {
        let d0 = d[0];
        let mut r = [0; 4];
        for i in 0..4 {
            r[i] = (d[i] - d0).rem_euclid(G_MODULI[i]);
        }
        GElement(r)
    }

    pub fn identity() -> Self {
        GElement([0; 4])
    }

    pub fn tuple(&self) -> [i64; 4] {
        self.0
    }

    pub fn add(&self, other: &GElement) -> GElement {
        let mut r = [0; 4];
        for i in 0..4 {
            r[i] = self.0[i] + other.0[i];
        }
        Self::normalize(r)
    }

    /// `d0 + d1 + 4 d2 + 6 d3 ≡ 0 (mod 12)`.
    pub fn satisfies_constraint(d: [i64; 4]) -> bool {
        (d[0] + d[1] + 4 * d[2] + 6 * d[3]).rem_euclid(12) == 0
    }
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Degree in `Z ⊕ G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoxDegree {
    pub z_degree: i64,
    pub g_element: GElement,
}

impl CoxDegree {
    pub fn add(&self, other: &CoxDegree) -> CoxDegree {
        CoxDegree {
            z_degree: self.z_degree + other.z_degree,
            g_element: self.g_element.add(&other.g_element),
        }
    }
}

impl fmt::Display for CoxDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z_degree, self.g_element)
    }
}

pub fn cox_degree(d: [i64; 4]) -> CoxDegree {
    let z = d[0] + d[1] + 4 * d[2] + 6 * d[3];
    CoxDegree {
        z_degree: z,
        g_element: GElement::normalize([-d[1] - 4 * d[2] - 6 * d[3], d[1], d[2], d[3]]),
    }
}

/// All exponent vectors of the given degree, lexicographically sorted.
pub fn enumerate_monomials(target: CoxDegree) -> Vec<[i64; 4]> {
    let z = target.z_degree;
    let mut out = Vec::new();
    if z < 0 {
        return out;
    }
    for d3 in 0..=z / 6 {
        for d2 in 0..=(z - 6 * d3) / 4 {
            for d1 in 0..=(z - 6 * d3 - 4 * d2) {
                let d0 = z - 6 * d3 - 4 * d2 - d1;
                let d = [d0, d1, d2, d3];
                if cox_degree(d) == target {
                    out.push(d);
                }
            }
        }
    }
    out.sort();
    out
}
