//! Scaled monomial bases and Gauss quadrature on triangles and segments.
//!
//! Each element carries monomial bases in locally shifted and scaled
//! coordinates `X = (x - c) / h`, where `c` is the element centroid and `h`
//! its diameter; this keeps mass-matrix conditioning independent of the mesh
//! level. Basis functions are ordered by total degree, and within a degree by
//! descending x-power: `1, X, Y, X², XY, Y², …`.
//!
//! Quadrature rules are generated table-free for any requested polynomial
//! exactness: Gauss–Legendre nodes come from Newton iteration on the Legendre
//! recurrence, and triangle rules collapse a tensor rule through the Duffy
//! transform `(s, t) ↦ (s(1-t), st)`, whose Jacobian `s` raises the required
//! per-direction count to `⌈(q+2)/2⌉` for exactness `q`.

use crate::mesh::{Mesh, Point2, Vec2};
use nalgebra::{DMatrix, DVector};

/// Monomial basis of total degree ≤ `degree` in centered, scaled coordinates.
///
/// A negative degree yields the empty basis (dimension 0), which is how
/// degree `k - 2` test spaces degenerate for `k = 1`.
#[derive(Debug, Clone)]
pub struct BasisSet {
    center: Point2,
    scale: f64,
    /// Exponent pairs (x-power, y-power) in evaluation order.
    exps: Vec<(u32, u32)>,
}

/// Dimension of the polynomial space of total degree ≤ `degree` in 2D.
pub fn poly_dim(degree: i64) -> usize {
    if degree < 0 {
        0
    } else {
        let d = degree as usize;
        (d + 1) * (d + 2) / 2
    }
}

impl BasisSet {
    pub fn new(degree: i64, center: Point2, scale: f64) -> BasisSet {
        assert!(scale > 0.0, "basis scale must be positive");
        let mut exps = Vec::with_capacity(poly_dim(degree));
        if degree >= 0 {
            for d in 0..=degree as u32 {
                for a in (0..=d).rev() {
                    exps.push((a, d - a));
                }
            }
        }
        BasisSet {
            center,
            scale,
            exps,
        }
    }

    /// Basis for element `e` of `mesh`, centered at its centroid and scaled
    /// by its diameter.
    pub fn for_element(mesh: &Mesh, e: usize, degree: i64) -> BasisSet {
        BasisSet::new(degree, mesh.centroid(e), mesh.diameter(e))
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    fn local(&self, p: Point2) -> (f64, f64) {
        (
            (p.x - self.center.x) / self.scale,
            (p.y - self.center.y) / self.scale,
        )
    }

    fn max_power(&self) -> usize {
        self.exps
            .iter()
            .map(|&(a, b)| a.max(b) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Powers X^0..X^m of one local coordinate.
    fn powers(v: f64, m: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(m + 1);
        let mut acc = 1.0;
        for _ in 0..=m {
            out.push(acc);
            acc *= v;
        }
        out
    }

    /// Values of all basis functions at `p`.
    pub fn values(&self, p: Point2) -> DVector<f64> {
        let (x, y) = self.local(p);
        let m = self.max_power();
        let (xp, yp) = (Self::powers(x, m), Self::powers(y, m));
        DVector::from_iterator(
            self.exps.len(),
            self.exps
                .iter()
                .map(|&(a, b)| xp[a as usize] * yp[b as usize]),
        )
    }

    /// Gradients of all basis functions at `p` (physical coordinates).
    pub fn gradients(&self, p: Point2) -> Vec<Vec2> {
        let (x, y) = self.local(p);
        let m = self.max_power();
        let (xp, yp) = (Self::powers(x, m), Self::powers(y, m));
        self.exps
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (a as usize, b as usize);
                let gx = if a == 0 {
                    0.0
                } else {
                    a as f64 * xp[a - 1] * yp[b]
                };
                let gy = if b == 0 {
                    0.0
                } else {
                    b as f64 * xp[a] * yp[b - 1]
                };
                Vec2::new(gx, gy) / self.scale
            })
            .collect()
    }

    /// Laplacians of all basis functions at `p`.
    pub fn laplacians(&self, p: Point2) -> DVector<f64> {
        let (x, y) = self.local(p);
        let m = self.max_power();
        let (xp, yp) = (Self::powers(x, m), Self::powers(y, m));
        let s2 = self.scale * self.scale;
        DVector::from_iterator(
            self.exps.len(),
            self.exps.iter().map(|&(a, b)| {
                let (a, b) = (a as usize, b as usize);
                let mut v = 0.0;
                if a >= 2 {
                    v += (a * (a - 1)) as f64 * xp[a - 2] * yp[b];
                }
                if b >= 2 {
                    v += (b * (b - 1)) as f64 * xp[a] * yp[b - 2];
                }
                v / s2
            }),
        )
    }

    /// Value matrix (one row per point, one column per basis function).
    pub fn tabulate(&self, points: &[Point2]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(points.len(), self.len());
        for (q, &p) in points.iter().enumerate() {
            out.row_mut(q).copy_from(&self.values(p).transpose());
        }
        out
    }
}

/// Quadrature on the reference triangle (0,0), (1,0), (0,1).
/// Weights sum to the reference area 1/2.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

/// Quadrature on the reference segment [0, 1]. Weights sum to 1.
#[derive(Debug, Clone)]
pub struct SegmentRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Quadrature mapped onto a physical element or facet.
#[derive(Debug, Clone)]
pub struct MappedRule {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// three-term Legendre recurrence. Deterministic and accurate to machine
/// precision for the small counts used here.
fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    // Only the lower half is computed; the rest follows by symmetry.
    for i in 0..m.div_ceil(2) {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (pm, pm1) = legendre_pair(m, x);
            let dpm = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dpm;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (pm, pm1) = legendre_pair(m, x);
        let dpm = m as f64 * (x * pm - pm1) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dpm * dpm);
        nodes[i] = x;
        weights[i] = w;
        nodes[m - 1 - i] = -x;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        // The middle node is exactly zero; Newton from the cosine guess
        // already lands there, but pin it to avoid -0.0 artifacts.
        nodes[m / 2] = 0.0;
        let (_, pm1) = legendre_pair(m, 0.0);
        let dpm = m as f64 * (0.0 - pm1) / (0.0 - 1.0);
        weights[m / 2] = 2.0 / (dpm * dpm);
    }
    (nodes, weights)
}

/// Returns (P_m(x), P_{m-1}(x)).
fn legendre_pair(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 1..m {
        let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Gauss rule on [0, 1] exact for polynomials of degree ≤ `exactness`.
pub fn segment_rule(exactness: usize) -> SegmentRule {
    let m = (exactness + 2) / 2; // ⌈(q+1)/2⌉
    let (nodes, weights) = gauss_legendre(m);
    SegmentRule {
        points: nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: weights.iter().map(|w| 0.5 * w).collect(),
    }
}

/// Collapsed tensor rule on the reference triangle, exact for total degree
/// ≤ `exactness`.
pub fn triangle_rule(exactness: usize) -> TriangleRule {
    let m = (exactness + 3) / 2; // ⌈(q+2)/2⌉, one extra for the Jacobian
    let (nodes, weights) = gauss_legendre(m);
    let s: Vec<f64> = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w: Vec<f64> = weights.iter().map(|w| 0.5 * w).collect();
    let mut points = Vec::with_capacity(m * m);
    let mut wts = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            points.push((s[i] * (1.0 - s[j]), s[i] * s[j]));
            wts.push(w[i] * w[j] * s[i]);
        }
    }
    TriangleRule {
        points,
        weights: wts,
    }
}

/// Maps a reference-triangle rule onto the triangle with the given vertices.
pub fn map_to_triangle(rule: &TriangleRule, verts: [Point2; 3]) -> MappedRule {
    let [a, b, c] = verts;
    let (e1, e2) = (b - a, c - a);
    let jac = (e1.x * e2.y - e2.x * e1.y).abs();
    MappedRule {
        points: rule
            .points
            .iter()
            .map(|&(x, y)| a + e1 * x + e2 * y)
            .collect(),
        weights: rule.weights.iter().map(|w| w * jac).collect(),
    }
}

/// Maps a reference-segment rule onto the segment from `a` to `b`.
pub fn map_to_segment(rule: &SegmentRule, endpoints: [Point2; 2]) -> MappedRule {
    let [a, b] = endpoints;
    let t = b - a;
    let len = t.norm();
    MappedRule {
        points: rule.points.iter().map(|&s| a + t * s).collect(),
        weights: rule.weights.iter().map(|w| w * len).collect(),
    }
}

/// Mass matrix of `basis` over the triangle `verts`.
pub fn mass_matrix(basis: &BasisSet, verts: [Point2; 3], rule: &TriangleRule) -> DMatrix<f64> {
    let mapped = map_to_triangle(rule, verts);
    let vals = basis.tabulate(&mapped.points);
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for q in 0..mapped.points.len() {
        let row = vals.row(q);
        let w = mapped.weights[q];
        for i in 0..n {
            let wi = w * row[i];
            for j in 0..=i {
                m[(i, j)] += wi * row[j];
            }
        }
    }
    m.fill_upper_triangle_with_lower_triangle();
    m
}

/// L² projection of `f` onto `basis` over the triangle `verts`.
///
/// The quadrature must be exact for products of `f` with the basis; callers
/// pass an oversampled rule when `f` is not polynomial of known degree.
pub fn l2_project<F: Fn(Point2) -> f64>(
    f: F,
    basis: &BasisSet,
    verts: [Point2; 3],
    rule: &TriangleRule,
) -> DVector<f64> {
    if basis.is_empty() {
        return DVector::zeros(0);
    }
    let mapped = map_to_triangle(rule, verts);
    let vals = basis.tabulate(&mapped.points);
    let n = basis.len();
    let mut mass = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for q in 0..mapped.points.len() {
        let row = vals.row(q);
        let w = mapped.weights[q];
        let fv = f(mapped.points[q]);
        for i in 0..n {
            rhs[i] += w * fv * row[i];
            let wi = w * row[i];
            for j in 0..=i {
                mass[(i, j)] += wi * row[j];
            }
        }
    }
    mass.fill_upper_triangle_with_lower_triangle();
    mass.cholesky()
        .expect("element mass matrix must be positive definite")
        .solve(&rhs)
}
