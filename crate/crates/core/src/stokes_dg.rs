//! Discontinuous Galerkin discretization of the Stokes saddle-point problem.
//!
//! Velocity components live in broken ℙ^k, pressure in broken ℙ^{k-1}. The
//! viscous block is the symmetric interior-penalty form
//!
//! ```text
//! a(u,v) = (ν∇u,∇v) − ({{ν∂ₙu}},[[v]]) − ({{ν∂ₙv}},[[u]]) + (αν/h)([[u]],[[v]]),
//! ```
//!
//! the coupling form is `b(v,p) = −(div v, p) + ([[v·n]],{{p}})`, and both
//! facet sums run over interior and boundary facets, with `[[v]] = {{v}} = v`
//! on the boundary. Dirichlet data enters through the right-hand side à la
//! Nitsche, so the assembled matrix depends only on the mesh, `k`, `ν`, and
//! the penalty `α`.
//!
//! Degrees of freedom are laid out element by element as
//! `[u_x | u_y | p]`, which keeps the matrix block-banded on structured
//! meshes; the global zero-mean pressure constraint is appended as a single
//! bordered row/column rather than folded into the band.

use crate::mesh::{Mesh, Point2, Vec2};
use crate::polybasis::{
    map_to_segment, map_to_triangle, segment_rule, triangle_rule, BasisSet, SegmentRule,
};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

/// The broken velocity/pressure product space on a fixed mesh.
pub struct DGSpace<'a> {
    mesh: &'a Mesh,
    k: usize,
    /// dim ℙ^k (one velocity component per element).
    nk: usize,
    /// dim ℙ^{k-1} (pressure per element).
    npk: usize,
}

impl<'a> DGSpace<'a> {
    pub fn new(mesh: &'a Mesh, k: usize) -> Result<DGSpace<'a>> {
        if k < 1 {
            return Err(Error::InvalidArgument(
                "polynomial degree k must be at least 1".into(),
            ));
        }
        Ok(DGSpace {
            mesh,
            k,
            nk: crate::polybasis::poly_dim(k as i64),
            npk: crate::polybasis::poly_dim(k as i64 - 1),
        })
    }

    pub fn mesh(&self) -> &Mesh {
        self.mesh
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// dim ℙ^k, the per-component velocity block.
    pub fn velocity_block(&self) -> usize {
        self.nk
    }

    /// dim ℙ^{k-1}, the pressure block.
    pub fn pressure_block(&self) -> usize {
        self.npk
    }

    /// Dofs per element: 2·dim ℙ^k + dim ℙ^{k-1} = (3k² + 7k + 4)/2.
    pub fn block_size(&self) -> usize {
        2 * self.nk + self.npk
    }

    /// Total dof count, excluding the mean-constraint multiplier.
    pub fn n_dofs(&self) -> usize {
        self.mesh.n_elements() * self.block_size()
    }

    pub fn elem_offset(&self, e: usize) -> usize {
        e * self.block_size()
    }

    /// Global index of velocity dof `i` of component `comp` on element `e`.
    pub fn u_dof(&self, e: usize, comp: usize, i: usize) -> usize {
        debug_assert!(comp < 2 && i < self.nk);
        self.elem_offset(e) + comp * self.nk + i
    }

    /// Global index of pressure dof `i` on element `e`.
    pub fn p_dof(&self, e: usize, i: usize) -> usize {
        debug_assert!(i < self.npk);
        self.elem_offset(e) + 2 * self.nk + i
    }

    pub fn velocity_basis(&self, e: usize) -> BasisSet {
        BasisSet::for_element(self.mesh, e, self.k as i64)
    }

    pub fn pressure_basis(&self, e: usize) -> BasisSet {
        BasisSet::for_element(self.mesh, e, self.k as i64 - 1)
    }

    /// Evaluates the discrete velocity at a point of element `e`.
    pub fn velocity_at(&self, coeffs: &DVector<f64>, e: usize, p: Point2) -> Vec2 {
        let vals = self.velocity_basis(e).values(p);
        let mut out = Vec2::zeros();
        for i in 0..self.nk {
            out.x += coeffs[self.u_dof(e, 0, i)] * vals[i];
            out.y += coeffs[self.u_dof(e, 1, i)] * vals[i];
        }
        out
    }

    /// Evaluates the discrete pressure at a point of element `e`.
    pub fn pressure_at(&self, coeffs: &DVector<f64>, e: usize, p: Point2) -> f64 {
        let vals = self.pressure_basis(e).values(p);
        (0..self.npk)
            .map(|i| coeffs[self.p_dof(e, i)] * vals[i])
            .sum()
    }

    /// Elementwise L² interpolant of a velocity field, as a coefficient
    /// vector (pressure dofs zero).
    pub fn project_velocity(&self, f: &dyn Fn(Point2) -> Vec2, exactness: usize) -> DVector<f64> {
        let rule = triangle_rule(exactness);
        let mut x = DVector::zeros(self.n_dofs());
        for e in 0..self.mesh.n_elements() {
            let verts = self.mesh.element_vertices(e);
            let basis = self.velocity_basis(e);
            let cx = crate::polybasis::l2_project(|p| f(p).x, &basis, verts, &rule);
            let cy = crate::polybasis::l2_project(|p| f(p).y, &basis, verts, &rule);
            for i in 0..self.nk {
                x[self.u_dof(e, 0, i)] = cx[i];
                x[self.u_dof(e, 1, i)] = cy[i];
            }
        }
        x
    }

    /// Elementwise L² interpolant of a pressure field (velocity dofs zero).
    pub fn project_pressure(&self, f: &dyn Fn(Point2) -> f64, exactness: usize) -> DVector<f64> {
        let rule = triangle_rule(exactness);
        let mut x = DVector::zeros(self.n_dofs());
        for e in 0..self.mesh.n_elements() {
            let verts = self.mesh.element_vertices(e);
            let basis = self.pressure_basis(e);
            let c = crate::polybasis::l2_project(f, &basis, verts, &rule);
            for i in 0..self.npk {
                x[self.p_dof(e, i)] = c[i];
            }
        }
        x
    }
}

/// Symmetric sparse matrix stored as dense blocks over element pairs.
///
/// `offsets[i]..offsets[i+1]` is the dof range of element `i`; the map key
/// `(a, b)` holds the coupling block of element pair `(a, b)`. A `BTreeMap`
/// keeps every iteration order deterministic.
#[derive(Debug, Clone)]
pub struct BlockSparse {
    offsets: Vec<usize>,
    blocks: BTreeMap<(usize, usize), DMatrix<f64>>,
}

impl BlockSparse {
    pub fn new(offsets: Vec<usize>) -> BlockSparse {
        assert!(!offsets.is_empty() && offsets[0] == 0);
        BlockSparse {
            offsets,
            blocks: BTreeMap::new(),
        }
    }

    /// Uniform layout: `count` blocks of `size` dofs each.
    pub fn uniform(count: usize, size: usize) -> BlockSparse {
        BlockSparse::new((0..=count).map(|i| i * size).collect())
    }

    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn n_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn block_rows(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Accumulates `m` into the coupling block of `(a, b)`.
    pub fn add_block(&mut self, a: usize, b: usize, m: &DMatrix<f64>) {
        debug_assert_eq!(m.nrows(), self.block_rows(a));
        debug_assert_eq!(m.ncols(), self.block_rows(b));
        self.blocks
            .entry((a, b))
            .and_modify(|existing| *existing += m)
            .or_insert_with(|| m.clone());
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &DMatrix<f64>)> {
        self.blocks.iter()
    }

    pub fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n());
        for (&(a, b), m) in &self.blocks {
            let (ra, rb) = (self.offsets[a], self.offsets[b]);
            let xb = x.rows(rb, m.ncols());
            let mut ya = y.rows_mut(ra, m.nrows());
            ya.gemv(1.0, m, &xb, 1.0);
        }
        y
    }

    /// Sum of two matrices over the same layout.
    pub fn add(&self, other: &BlockSparse) -> BlockSparse {
        assert_eq!(self.offsets, other.offsets);
        let mut out = self.clone();
        for (&(a, b), m) in &other.blocks {
            out.add_block(a, b, m);
        }
        out
    }

    /// Matrix with blocks transposed (both within and across the pair grid).
    pub fn transpose(&self) -> BlockSparse {
        let mut out = BlockSparse::new(self.offsets.clone());
        for (&(a, b), m) in &self.blocks {
            out.add_block(b, a, &m.transpose());
        }
        out
    }

    /// Largest |A - Aᵀ| entry.
    pub fn symmetry_error(&self) -> f64 {
        let mut err = 0.0f64;
        for (&(a, b), m) in &self.blocks {
            let mt = match self.blocks.get(&(b, a)) {
                Some(mt) => mt.transpose(),
                None => DMatrix::zeros(m.nrows(), m.ncols()),
            };
            err = err.max((m - mt).amax());
        }
        err
    }

    /// Half bandwidth of the scattered matrix: max |i - j| over stored
    /// entries (structurally, ignoring numeric zeros inside blocks).
    pub fn half_bandwidth(&self) -> usize {
        let mut hbw = 0usize;
        for (&(a, b), m) in &self.blocks {
            let (ra, rb) = (self.offsets[a], self.offsets[b]);
            let lo = ra.min(rb);
            let hi = (ra + m.nrows() - 1).max(rb + m.ncols() - 1);
            hbw = hbw.max(hi - lo);
        }
        hbw.min(self.n().saturating_sub(1))
    }

    /// All stored entries as (row, col, value) triplets in row-major block
    /// order.
    pub fn to_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (&(a, b), m) in &self.blocks {
            let (ra, rb) = (self.offsets[a], self.offsets[b]);
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    out.push((ra + i, rb + j, m[(i, j)]));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n(), self.n());
        for (&(a, b), m) in &self.blocks {
            let (ra, rb) = (self.offsets[a], self.offsets[b]);
            out.view_mut((ra, rb), (m.nrows(), m.ncols())).copy_from(m);
        }
        out
    }
}

/// The assembled saddle-point system with its bordered zero-mean constraint.
///
/// The full operator is the symmetric (N+1)×(N+1) matrix
/// `[[K, c], [cᵀ, 0]]` where `c` holds the pressure means; it is stored as
/// the core `matrix` plus the border so solvers can exploit the band.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub matrix: BlockSparse,
    /// Border column: `c[i] = ∫ ψ_i` on pressure dofs, zero elsewhere.
    pub constraint: DVector<f64>,
    pub rhs: DVector<f64>,
    /// Right-hand side of the constraint row (zero unless a particular
    /// solution shifted the pressure mean).
    pub constraint_rhs: f64,
    pub nu: f64,
    pub alpha: f64,
}

impl SparseSystem {
    /// Dimension including the multiplier.
    pub fn n_total(&self) -> usize {
        self.matrix.n() + 1
    }

    /// Dense bordered matrix and right-hand side, for oracle comparisons and
    /// coordinate dumps.
    pub fn to_dense_bordered(&self) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.matrix.n();
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.matrix.to_dense());
        for i in 0..n {
            m[(i, n)] = self.constraint[i];
            m[(n, i)] = self.constraint[i];
        }
        let mut b = DVector::zeros(n + 1);
        b.rows_mut(0, n).copy_from(&self.rhs);
        b[n] = self.constraint_rhs;
        (m, b)
    }

    /// Relative residual ‖Ax − b‖ / max(‖b‖, ε) of a candidate solution
    /// (`x` core unknowns, `lambda` the multiplier).
    pub fn relative_residual(&self, x: &DVector<f64>, lambda: f64) -> f64 {
        let mut r = self.matrix.matvec(x);
        r += &self.constraint * lambda;
        r -= &self.rhs;
        let row = self.constraint.dot(x) - self.constraint_rhs;
        let num = (r.norm_squared() + row * row).sqrt();
        let den = (self.rhs.norm_squared() + self.constraint_rhs.powi(2))
            .sqrt()
            .max(1e-300);
        num / den
    }
}

/// Velocity and pressure data entering the right-hand side.
pub struct LoadData<'f> {
    /// Volume forcing in the momentum equation.
    pub f: &'f dyn Fn(Point2) -> Vec2,
    /// Volume source in the (negative) divergence equation.
    pub g: &'f dyn Fn(Point2) -> f64,
    /// Dirichlet trace of the velocity.
    pub dirichlet: &'f dyn Fn(Point2) -> Vec2,
}

struct FacetSide {
    elem: usize,
    /// Jump sign: +1 on the first element, −1 on the second.
    sign: f64,
    /// Average weight: ½ on interior facets, 1 on the boundary.
    avg: f64,
}

/// Runs `body` over all facets, handing it the sides, quadrature points,
/// weights, normal, and facet h.
fn for_each_facet<F>(mesh: &Mesh, rule: &SegmentRule, mut body: F)
where
    F: FnMut(&[FacetSide], &[Point2], &[f64], Vec2, f64),
{
    for f in mesh.interior_facets() {
        let mapped = map_to_segment(rule, f.geometry.endpoints);
        let sides = [
            FacetSide {
                elem: f.elem_a,
                sign: 1.0,
                avg: 0.5,
            },
            FacetSide {
                elem: f.elem_b,
                sign: -1.0,
                avg: 0.5,
            },
        ];
        body(
            &sides,
            &mapped.points,
            &mapped.weights,
            f.geometry.normal,
            f.geometry.h,
        );
    }
    for f in mesh.boundary_facets() {
        let mapped = map_to_segment(rule, f.geometry.endpoints);
        let sides = [FacetSide {
            elem: f.elem,
            sign: 1.0,
            avg: 1.0,
        }];
        body(
            &sides,
            &mapped.points,
            &mapped.weights,
            f.geometry.normal,
            f.geometry.h,
        );
    }
}

/// Values and normal derivatives of the velocity basis of one facet side.
struct SideTrace {
    vals: DMatrix<f64>,
    dnorm: DMatrix<f64>,
}

fn velocity_trace(space: &DGSpace, elem: usize, points: &[Point2], normal: Vec2) -> SideTrace {
    let basis = space.velocity_basis(elem);
    let nq = points.len();
    let mut vals = DMatrix::zeros(nq, basis.len());
    let mut dnorm = DMatrix::zeros(nq, basis.len());
    for (q, &p) in points.iter().enumerate() {
        let v = basis.values(p);
        let g = basis.gradients(p);
        for i in 0..basis.len() {
            vals[(q, i)] = v[i];
            dnorm[(q, i)] = g[i].dot(&normal);
        }
    }
    SideTrace { vals, dnorm }
}

/// Interior-penalty viscous form on the velocity dofs, in the full layout.
pub fn assemble_a(space: &DGSpace, nu: f64, alpha: f64) -> BlockSparse {
    let mesh = space.mesh();
    let bs = space.block_size();
    let nk = space.velocity_block();
    let mut a = BlockSparse::uniform(mesh.n_elements(), bs);

    // Volume term (ν∇u, ∇v), identical for both velocity components.
    let vol_rule = triangle_rule(2 * space.k());
    for e in 0..mesh.n_elements() {
        let verts = mesh.element_vertices(e);
        let basis = space.velocity_basis(e);
        let mapped = map_to_triangle(&vol_rule, verts);
        let mut s = DMatrix::zeros(nk, nk);
        for (q, &p) in mapped.points.iter().enumerate() {
            let g = basis.gradients(p);
            let w = nu * mapped.weights[q];
            for i in 0..nk {
                for j in 0..=i {
                    s[(i, j)] += w * g[i].dot(&g[j]);
                }
            }
        }
        s.fill_upper_triangle_with_lower_triangle();
        let mut block = DMatrix::zeros(bs, bs);
        block.view_mut((0, 0), (nk, nk)).copy_from(&s);
        block.view_mut((nk, nk), (nk, nk)).copy_from(&s);
        a.add_block(e, e, &block);
    }

    // Facet terms: consistency, symmetry, and penalty.
    let facet_rule = segment_rule(2 * space.k());
    for_each_facet(mesh, &facet_rule, |sides, points, weights, normal, h| {
        let traces: Vec<SideTrace> = sides
            .iter()
            .map(|s| velocity_trace(space, s.elem, points, normal))
            .collect();
        let pen = alpha / h;
        for (s, side_s) in sides.iter().enumerate() {
            for (t, side_t) in sides.iter().enumerate() {
                let mut m = DMatrix::zeros(nk, nk);
                for (q, &w) in weights.iter().enumerate() {
                    let wn = w * nu;
                    for i in 0..nk {
                        let jump_i = side_s.sign * traces[s].vals[(q, i)];
                        let avg_dn_i = side_s.avg * traces[s].dnorm[(q, i)];
                        for j in 0..nk {
                            let jump_j = side_t.sign * traces[t].vals[(q, j)];
                            let avg_dn_j = side_t.avg * traces[t].dnorm[(q, j)];
                            // Grouped so the (i,j) and transposed (j,i)
                            // entries round identically, keeping the
                            // assembled matrix symmetric to the bit.
                            m[(i, j)] += wn
                                * (-(avg_dn_j * jump_i) - (avg_dn_i * jump_j)
                                    + pen * (jump_i * jump_j));
                        }
                    }
                }
                let mut block = DMatrix::zeros(bs, bs);
                block.view_mut((0, 0), (nk, nk)).copy_from(&m);
                block.view_mut((nk, nk), (nk, nk)).copy_from(&m);
                a.add_block(side_s.elem, side_t.elem, &block);
            }
        }
    });
    a
}

/// Pressure-velocity coupling `b(v, p) = −(div v, p) + ([[v·n]], {{p}})`,
/// assembled into pressure rows × velocity columns of the full layout.
pub fn assemble_b(space: &DGSpace) -> BlockSparse {
    let mesh = space.mesh();
    let bs = space.block_size();
    let nk = space.velocity_block();
    let npk = space.pressure_block();
    let mut b = BlockSparse::uniform(mesh.n_elements(), bs);

    // Volume term −(div v, p).
    let vol_rule = triangle_rule(2 * space.k());
    for e in 0..mesh.n_elements() {
        let verts = mesh.element_vertices(e);
        let vbasis = space.velocity_basis(e);
        let pbasis = space.pressure_basis(e);
        let mapped = map_to_triangle(&vol_rule, verts);
        let mut block = DMatrix::zeros(bs, bs);
        for (q, &p) in mapped.points.iter().enumerate() {
            let g = vbasis.gradients(p);
            let pv = pbasis.values(p);
            let w = mapped.weights[q];
            for m in 0..npk {
                let row = 2 * nk + m;
                for j in 0..nk {
                    block[(row, j)] -= w * pv[m] * g[j].x;
                    block[(row, nk + j)] -= w * pv[m] * g[j].y;
                }
            }
        }
        b.add_block(e, e, &block);
    }

    // Facet term ([[v·n]], {{p}}).
    let facet_rule = segment_rule(2 * space.k());
    for_each_facet(mesh, &facet_rule, |sides, points, weights, normal, _h| {
        let vtraces: Vec<DMatrix<f64>> = sides
            .iter()
            .map(|s| {
                let basis = space.velocity_basis(s.elem);
                basis.tabulate(points)
            })
            .collect();
        let ptraces: Vec<DMatrix<f64>> = sides
            .iter()
            .map(|s| {
                let basis = space.pressure_basis(s.elem);
                basis.tabulate(points)
            })
            .collect();
        for (s, side_s) in sides.iter().enumerate() {
            for (t, side_t) in sides.iter().enumerate() {
                let mut block = DMatrix::zeros(bs, bs);
                for (q, &w) in weights.iter().enumerate() {
                    for m in 0..npk {
                        let avg_p = side_s.avg * ptraces[s][(q, m)];
                        let row = 2 * nk + m;
                        for j in 0..nk {
                            let jump_vn = side_t.sign * vtraces[t][(q, j)];
                            block[(row, j)] += w * avg_p * jump_vn * normal.x;
                            block[(row, nk + j)] += w * avg_p * jump_vn * normal.y;
                        }
                    }
                }
                b.add_block(side_s.elem, side_t.elem, &block);
            }
        }
    });
    b
}

/// Full symmetric Stokes operator `K = a + b + bᵀ`.
pub fn assemble_k(space: &DGSpace, nu: f64, alpha: f64) -> BlockSparse {
    let b = assemble_b(space);
    assemble_a(space, nu, alpha).add(&b).add(&b.transpose())
}

/// Right-hand side: volume forcing plus Nitsche boundary terms.
pub fn assemble_load(space: &DGSpace, data: &LoadData, nu: f64, alpha: f64) -> DVector<f64> {
    let mesh = space.mesh();
    let nk = space.velocity_block();
    let npk = space.pressure_block();
    let mut l = DVector::zeros(space.n_dofs());

    // (f, v) and (g, q).
    let vol_rule = triangle_rule(2 * space.k() + 6);
    for e in 0..mesh.n_elements() {
        let verts = mesh.element_vertices(e);
        let vbasis = space.velocity_basis(e);
        let pbasis = space.pressure_basis(e);
        let mapped = map_to_triangle(&vol_rule, verts);
        for (q, &p) in mapped.points.iter().enumerate() {
            let w = mapped.weights[q];
            let fv = (data.f)(p);
            let gv = (data.g)(p);
            let vv = vbasis.values(p);
            let pv = pbasis.values(p);
            for i in 0..nk {
                l[space.u_dof(e, 0, i)] += w * fv.x * vv[i];
                l[space.u_dof(e, 1, i)] += w * fv.y * vv[i];
            }
            for m in 0..npk {
                l[space.p_dof(e, m)] += w * gv * pv[m];
            }
        }
    }

    // Nitsche data: −({{ν∂ₙv}}, u_D) + (αν/h)(u_D, v) + (u_D·n, q) on ∂Ω.
    let facet_rule = segment_rule(2 * space.k() + 6);
    for f in mesh.boundary_facets() {
        let e = f.elem;
        let mapped = map_to_segment(&facet_rule, f.geometry.endpoints);
        let normal = f.geometry.normal;
        let h = f.geometry.h;
        let vbasis = space.velocity_basis(e);
        let pbasis = space.pressure_basis(e);
        for (q, &p) in mapped.points.iter().enumerate() {
            let w = mapped.weights[q];
            let ud = (data.dirichlet)(p);
            let vv = vbasis.values(p);
            let grads = vbasis.gradients(p);
            let pv = pbasis.values(p);
            for i in 0..nk {
                let dn = grads[i].dot(&normal);
                let contrib = w * (-nu * dn + alpha * nu / h * vv[i]);
                l[space.u_dof(e, 0, i)] += contrib * ud.x;
                l[space.u_dof(e, 1, i)] += contrib * ud.y;
            }
            let udn = ud.dot(&normal);
            for m in 0..npk {
                l[space.p_dof(e, m)] += w * udn * pv[m];
            }
        }
    }
    l
}

/// Pressure-mean border column: `c[i] = ∫_T ψ_i` for each pressure dof.
pub fn mean_vector(space: &DGSpace) -> DVector<f64> {
    let mesh = space.mesh();
    let rule = triangle_rule(2 * space.k());
    let mut c = DVector::zeros(space.n_dofs());
    for e in 0..mesh.n_elements() {
        let verts = mesh.element_vertices(e);
        let basis = space.pressure_basis(e);
        let mapped = map_to_triangle(&rule, verts);
        for (q, &p) in mapped.points.iter().enumerate() {
            let pv = basis.values(p);
            for m in 0..space.pressure_block() {
                c[space.p_dof(e, m)] += mapped.weights[q] * pv[m];
            }
        }
    }
    c
}

/// Assembles the complete bordered system for the given data.
pub fn build_system(
    space: &DGSpace,
    data: &LoadData,
    nu: f64,
    alpha: f64,
) -> SparseSystem {
    SparseSystem {
        matrix: assemble_k(space, nu, alpha),
        constraint: mean_vector(space),
        rhs: assemble_load(space, data, nu, alpha),
        constraint_rhs: 0.0,
        nu,
        alpha,
    }
}
