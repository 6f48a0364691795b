//! Embedded Trefftz reduction of the discrete Stokes operator.
//!
//! Each element carries local constraints: the strong momentum residual
//! −νΔu + ∇p − f tested against 𝒫^{k−2} and the strong divergence residual
//! div u + g tested against 𝒫^{k−1}. The nullspace of the constraint matrix
//! spans the local fields that satisfy the equations exactly; collecting an
//! orthonormal basis T per element and a particular solution for the
//! inhomogeneous part lets the global saddle system be condensed to
//! T'KT, which is much smaller and inherits symmetry. The condensed solution
//! y recovers the full field as x = T y + x_p.
//!
//! Kernels are extracted by singular value decomposition with a relative
//! cutoff; the code refuses to guess when singular values crowd the cutoff.

use crate::polybasis::{map_to_triangle, triangle_rule, BasisSet};
use crate::stokes_dg::{BlockSparse, DGSpace, LoadData, SparseSystem};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Relative singular value cutoff separating range from kernel.
pub const RANK_TOL: f64 = 1e-10;

/// Kept singular values closer than this to the cutoff abort the reduction.
const AMBIGUITY_GUARD: f64 = 10.0 * RANK_TOL;

/// Dimension of the polynomial space 𝒫^degree in `d` variables.
pub fn poly_space_dim(degree: i64, d: u32) -> usize {
    if degree < 0 {
        return 0;
    }
    (1..=d as usize).fold(1usize, |acc, i| acc * (degree as usize + i) / i)
}

/// Unknowns per element of the full discretization in `d` dimensions:
/// d velocity components of degree k plus a pressure of degree k−1.
pub fn local_full_dim(k: usize, d: u32) -> usize {
    d as usize * poly_space_dim(k as i64, d) + poly_space_dim(k as i64 - 1, d)
}

/// Unknowns per element after the reduction: the full count minus one
/// constraint per momentum test (d copies of 𝒫^{k−2}) and per divergence
/// test (𝒫^{k−1}). In 2D this collapses to 4k + 2.
pub fn local_kernel_dim(k: usize, d: u32) -> usize {
    local_full_dim(k, d)
        - d as usize * poly_space_dim(k as i64 - 2, d)
        - poly_space_dim(k as i64 - 1, d)
}

/// Constraint matrix of one element.
///
/// Rows: momentum-x tests, momentum-y tests (each dim 𝒫^{k−2}), then
/// divergence tests (dim 𝒫^{k−1}). Columns follow the element dof layout
/// `[u_x | u_y | p]`. All integrands are polynomials of degree ≤ 2k − 2, so
/// the 2k rule is exact.
pub fn assemble_local_w(space: &DGSpace, e: usize, nu: f64) -> DMatrix<f64> {
    let mesh = space.mesh();
    let k = space.k() as i64;
    let vbasis = space.velocity_basis(e);
    let pbasis = space.pressure_basis(e);
    let test_m = BasisSet::for_element(mesh, e, k - 2);
    let test_d = BasisSet::for_element(mesh, e, k - 1);
    let (nk, npk) = (vbasis.len(), pbasis.len());
    let (nm, nd) = (test_m.len(), test_d.len());
    let mut w = DMatrix::zeros(2 * nm + nd, space.block_size());

    let rule = triangle_rule(2 * space.k());
    let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
    for (q, &pt) in mapped.points.iter().enumerate() {
        let wq = mapped.weights[q];
        let lap = vbasis.laplacians(pt);
        let vgrads = vbasis.gradients(pt);
        let pgrads = pbasis.gradients(pt);
        let tm = test_m.values(pt);
        let td = test_d.values(pt);
        for i in 0..nm {
            let wt = wq * tm[i];
            for j in 0..nk {
                let visc = wt * (-nu * lap[j]);
                w[(i, j)] += visc;
                w[(nm + i, nk + j)] += visc;
            }
            for j in 0..npk {
                w[(i, 2 * nk + j)] += wt * pgrads[j].x;
                w[(nm + i, 2 * nk + j)] += wt * pgrads[j].y;
            }
        }
        for i in 0..nd {
            let wt = wq * td[i];
            for j in 0..nk {
                w[(2 * nm + i, j)] += wt * vgrads[j].x;
                w[(2 * nm + i, nk + j)] += wt * vgrads[j].y;
            }
        }
    }
    w
}

/// Right-hand side moments matching [`assemble_local_w`]: momentum rows get
/// (f, φ̃), divergence rows get −(g, ψ̃) since the strong form is div u = −g.
pub fn assemble_local_rhs(space: &DGSpace, e: usize, data: &LoadData) -> DVector<f64> {
    let mesh = space.mesh();
    let k = space.k() as i64;
    let test_m = BasisSet::for_element(mesh, e, k - 2);
    let test_d = BasisSet::for_element(mesh, e, k - 1);
    let (nm, nd) = (test_m.len(), test_d.len());
    let mut r = DVector::zeros(2 * nm + nd);

    let rule = triangle_rule(2 * space.k() + 6);
    let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
    for (q, &pt) in mapped.points.iter().enumerate() {
        let wq = mapped.weights[q];
        let fv = (data.f)(pt);
        let gv = (data.g)(pt);
        let tm = test_m.values(pt);
        let td = test_d.values(pt);
        for i in 0..nm {
            r[i] += wq * fv.x * tm[i];
            r[nm + i] += wq * fv.y * tm[i];
        }
        for i in 0..nd {
            r[2 * nm + i] -= wq * gv * td[i];
        }
    }
    r
}

/// Orthonormal kernel basis of a constraint matrix, with the relative sizes
/// of the smallest kept and largest discarded singular values.
#[derive(Debug)]
pub struct LocalKernel {
    /// Columns span ker W and are orthonormal.
    pub basis: DMatrix<f64>,
    pub rank: usize,
    /// Smallest kept singular value over the largest (∞ when W = 0).
    pub min_kept_rel: f64,
    /// Largest discarded singular value over the largest (0 when none).
    pub max_cut_rel: f64,
}

/// Zero-pads `w` to at least square so the decomposition exposes the full
/// right factor, then splits singular values at [`RANK_TOL`] relative to the
/// largest. Values in the decade above the cutoff make the rank decision
/// unreliable and are reported as an error instead of being resolved by fiat.
pub fn local_kernel(w: &DMatrix<f64>) -> Result<LocalKernel> {
    let (nr, nc) = w.shape();
    let mut work = DMatrix::zeros(nr.max(nc), nc);
    work.view_mut((0, 0), (nr, nc)).copy_from(w);
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("SVD was asked for the right factor");
    let sv = &svd.singular_values;

    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap().then(a.cmp(&b)));
    let smax = sv[order[0]];
    if smax == 0.0 {
        return Ok(LocalKernel {
            basis: DMatrix::identity(nc, nc),
            rank: 0,
            min_kept_rel: f64::INFINITY,
            max_cut_rel: 0.0,
        });
    }
    let tol = RANK_TOL * smax;
    let rank = order.iter().filter(|&&i| sv[i] > tol).count();
    let min_kept_rel = sv[order[rank - 1]] / smax;
    let max_cut_rel = if rank < nc { sv[order[rank]] / smax } else { 0.0 };
    if min_kept_rel < AMBIGUITY_GUARD {
        return Err(Error::AmbiguousRank(format!(
            "smallest kept singular value is {min_kept_rel:.3e} of the largest, \
             within a decade of the {RANK_TOL:.0e} cutoff"
        )));
    }
    let mut basis = DMatrix::zeros(nc, nc - rank);
    for (col, &i) in order[rank..].iter().enumerate() {
        basis.column_mut(col).copy_from(&v_t.row(i).transpose());
    }
    Ok(LocalKernel {
        basis,
        rank,
        min_kept_rel,
        max_cut_rel,
    })
}

/// Minimum-norm solution of W x = r via the truncated pseudoinverse, using
/// the same relative cutoff as the kernel split. The constraint rows are
/// linearly independent in exact arithmetic, so the system is consistent for
/// any right-hand side.
pub fn local_particular(w: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    let (nr, nc) = w.shape();
    let rows = nr.max(nc);
    let mut work = DMatrix::zeros(rows, nc);
    work.view_mut((0, 0), (nr, nc)).copy_from(w);
    let mut rhs = DVector::zeros(rows);
    rhs.rows_mut(0, nr).copy_from(r);
    let svd = work.svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return DVector::zeros(nc);
    }
    svd.solve(&rhs, RANK_TOL * smax)
        .expect("decomposition carries both factors")
        .column(0)
        .into_owned()
}

/// Per-element kernel bases and the global particular solution.
pub struct TrefftzEmbedding {
    blocks: Vec<DMatrix<f64>>,
    ranks: Vec<usize>,
    x_p: DVector<f64>,
    block_size: usize,
    kernel_dim: usize,
    min_kept_rel: f64,
    max_cut_rel: f64,
}

impl TrefftzEmbedding {
    pub fn n_elements(&self) -> usize {
        self.blocks.len()
    }

    /// Columns of the kernel basis on each element.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// Unknowns of the condensed system, multiplier not included.
    pub fn n_condensed(&self) -> usize {
        self.blocks.len() * self.kernel_dim
    }

    pub fn block(&self, e: usize) -> &DMatrix<f64> {
        &self.blocks[e]
    }

    pub fn rank(&self, e: usize) -> usize {
        self.ranks[e]
    }

    pub fn particular(&self) -> &DVector<f64> {
        &self.x_p
    }

    /// Worst relative singular value margins across all elements:
    /// (smallest kept, largest discarded).
    pub fn singular_margins(&self) -> (f64, f64) {
        (self.min_kept_rel, self.max_cut_rel)
    }

    /// Maps condensed coefficients back to the full space: x = T y + x_p.
    pub fn recover(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut x = self.x_p.clone();
        for (e, t) in self.blocks.iter().enumerate() {
            let ye = y.rows(e * self.kernel_dim, self.kernel_dim);
            x.rows_mut(e * self.block_size, self.block_size)
                .gemv(1.0, t, &ye, 1.0);
        }
        x
    }

    /// Applies T' to a full-space vector, e.g. to restrict residuals.
    pub fn reduce(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n_condensed());
        for (e, t) in self.blocks.iter().enumerate() {
            let xe = x.rows(e * self.block_size, self.block_size);
            y.rows_mut(e * self.kernel_dim, self.kernel_dim)
                .gemv_tr(1.0, t, &xe, 0.0);
        }
        y
    }
}

/// Builds the embedding for a space and load: one SVD pair per element.
/// Fails if any element's kernel dimension deviates from the closed-form
/// count, which would indicate a rank-deficient constraint matrix.
pub fn build_embedding(space: &DGSpace, data: &LoadData, nu: f64) -> Result<TrefftzEmbedding> {
    let ne = space.mesh().n_elements();
    let expected = local_kernel_dim(space.k(), 2);
    let mut blocks = Vec::with_capacity(ne);
    let mut ranks = Vec::with_capacity(ne);
    let mut x_p = DVector::zeros(space.n_dofs());
    let (mut min_kept, mut max_cut) = (f64::INFINITY, 0.0f64);
    for e in 0..ne {
        let w = assemble_local_w(space, e, nu);
        let kern = local_kernel(&w)?;
        if kern.basis.ncols() != expected {
            return Err(Error::DimensionMismatch(format!(
                "element {e}: constraint kernel has dimension {}, expected {expected}",
                kern.basis.ncols()
            )));
        }
        let r = assemble_local_rhs(space, e, data);
        x_p.rows_mut(space.elem_offset(e), space.block_size())
            .copy_from(&local_particular(&w, &r));
        min_kept = min_kept.min(kern.min_kept_rel);
        max_cut = max_cut.max(kern.max_cut_rel);
        ranks.push(kern.rank);
        blocks.push(kern.basis);
    }
    Ok(TrefftzEmbedding {
        blocks,
        ranks,
        x_p,
        block_size: space.block_size(),
        kernel_dim: expected,
        min_kept_rel: min_kept,
        max_cut_rel: max_cut,
    })
}

/// Condenses the bordered system onto the embedded space:
/// matrix T'KT, load T'(l − K x_p), constraint T'c with right-hand side
/// shifted by −c·x_p so that recovered solutions keep zero pressure mean.
pub fn condense(system: &SparseSystem, emb: &TrefftzEmbedding) -> SparseSystem {
    let m = emb.kernel_dim();
    let mut matrix = BlockSparse::uniform(emb.n_elements(), m);
    for (&(a, b), block) in system.matrix.blocks() {
        matrix.add_block(a, b, &(emb.block(a).transpose() * block * emb.block(b)));
    }
    let residual = &system.rhs - system.matrix.matvec(emb.particular());
    SparseSystem {
        matrix,
        constraint: emb.reduce(&system.constraint),
        rhs: emb.reduce(&residual),
        constraint_rhs: system.constraint_rhs - system.constraint.dot(emb.particular()),
        nu: system.nu,
        alpha: system.alpha,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Mesh, Vec2};
    use crate::stokes_dg::{build_system, mean_vector};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    fn zero_load() -> LoadData<'static> {
        LoadData {
            f: &|_| Vec2::zeros(),
            g: &|_| 0.0,
            dirichlet: &|_| Vec2::zeros(),
        }
    }

    /// Row-echelon rank with partial pivoting, independent of the SVD path.
    fn elimination_rank(m: &DMatrix<f64>, tol: f64) -> usize {
        let mut a = m.clone();
        let (nr, nc) = a.shape();
        let mut rank = 0;
        for col in 0..nc {
            if rank == nr {
                break;
            }
            let (pivot, mag) = (rank..nr)
                .map(|r| (r, a[(r, col)].abs()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap();
            if mag <= tol {
                continue;
            }
            a.swap_rows(rank, pivot);
            for r in (rank + 1)..nr {
                let factor = a[(r, col)] / a[(rank, col)];
                for c in col..nc {
                    a[(r, c)] -= factor * a[(rank, c)];
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn dimension_formulas_match_frozen_tables() {
        let full_2d = [7, 15, 26, 40, 57, 77];
        let kernel_2d = [6, 10, 14, 18, 22, 26];
        let full_3d = [13, 34, 70, 125, 203, 308];
        let kernel_3d = [12, 27, 48, 75, 108, 147];
        for k in 1..=6usize {
            assert_eq!(local_full_dim(k, 2), full_2d[k - 1]);
            assert_eq!(local_kernel_dim(k, 2), kernel_2d[k - 1]);
            assert_eq!(local_full_dim(k, 3), full_3d[k - 1]);
            assert_eq!(local_kernel_dim(k, 3), kernel_3d[k - 1]);
            // Equivalent closed form: d · (dim 𝒫^k − dim 𝒫^{k−2}).
            for d in [2u32, 3] {
                let alt = d as usize
                    * (poly_space_dim(k as i64, d) - poly_space_dim(k as i64 - 2, d));
                assert_eq!(local_kernel_dim(k, d), alt);
            }
        }
        assert_eq!(poly_space_dim(-1, 2), 0);
        assert_eq!(poly_space_dim(0, 3), 1);
        for k in 0..=6 {
            assert_eq!(poly_space_dim(k, 2), crate::polybasis::poly_dim(k));
        }
    }

    /// For k = 1 there are no momentum tests and one divergence test against
    /// the constant, so W is a single row: ∫∂x of the linear x-mode gives
    /// area/h in the u_x block, likewise for u_y, and the pressure column is
    /// zero.
    #[test]
    fn lowest_order_constraint_matrix_by_hand() {
        let mesh = Mesh::structured(1).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        let w = assemble_local_w(&space, 0, 1.0);
        assert_eq!(w.shape(), (1, 7));
        let expected = mesh.area(0) / mesh.diameter(0);
        let hand = [0.0, expected, 0.0, 0.0, 0.0, expected, 0.0];
        for (j, &v) in hand.iter().enumerate() {
            assert_abs_diff_eq!(w[(0, j)], v, epsilon = 1e-14);
        }
    }

    #[test]
    fn constraint_rank_matches_elimination_oracle() {
        let mesh = Mesh::structured(2).unwrap();
        for k in [2usize, 3] {
            let space = DGSpace::new(&mesh, k).unwrap();
            let w = assemble_local_w(&space, 3, 1.5);
            let expected_rows = 2 * poly_space_dim(k as i64 - 2, 2) + poly_space_dim(k as i64 - 1, 2);
            assert_eq!(w.nrows(), expected_rows);
            assert_eq!(elimination_rank(&w, 1e-12), expected_rows);
            let kern = local_kernel(&w).unwrap();
            assert_eq!(kern.rank, expected_rows);
            assert_eq!(kern.basis.ncols(), 4 * k + 2);
            // Orthonormal columns annihilated by W.
            let gram = kern.basis.transpose() * &kern.basis;
            assert_relative_eq!(
                gram,
                DMatrix::identity(4 * k + 2, 4 * k + 2),
                epsilon = 1e-12
            );
            assert!((&w * &kern.basis).norm() < 1e-12 * w.norm());
        }
    }

    #[test]
    fn zero_constraint_matrix_keeps_everything() {
        let w = DMatrix::zeros(3, 7);
        let kern = local_kernel(&w).unwrap();
        assert_eq!(kern.basis, DMatrix::identity(7, 7));
        assert_eq!(kern.rank, 0);
        assert_eq!(kern.min_kept_rel, f64::INFINITY);
        assert_eq!(kern.max_cut_rel, 0.0);
    }

    #[test]
    fn near_cutoff_singular_value_is_rejected() {
        let mut w = DMatrix::zeros(2, 3);
        w[(0, 0)] = 1.0;
        w[(1, 1)] = 5e-10;
        match local_kernel(&w) {
            Err(Error::AmbiguousRank(_)) => {}
            other => panic!("expected ambiguity error, got {other:?}"),
        }
        // A decade lower the value falls clearly below the cutoff.
        w[(1, 1)] = 5e-11;
        let kern = local_kernel(&w).unwrap();
        assert_eq!(kern.basis.ncols(), 2);
        assert_relative_eq!(kern.max_cut_rel, 5e-11, max_relative = 1e-8);
    }

    /// Constant velocities and elementwise-constant pressures never violate
    /// the strong equations, so their coefficient directions must lie in the
    /// kernel exactly; a linear shear has nonzero divergence and must not.
    #[test]
    fn rigid_modes_lie_in_kernel_exactly() {
        let mesh = Mesh::structured(1).unwrap();
        let space = DGSpace::new(&mesh, 3).unwrap();
        let w = assemble_local_w(&space, 0, 1.0);
        let bs = space.block_size();
        let nk = space.velocity_block();
        for dof in [0, nk, 2 * nk] {
            let mut x = DVector::zeros(bs);
            x[dof] = 1.0;
            assert_eq!((&w * &x).norm(), 0.0, "column {dof} must vanish");
        }
        // u = (X, 0): divergence rows see ∫(1/h)ψ̃ ≠ 0.
        let mut shear = DVector::zeros(bs);
        shear[1] = 1.0;
        assert!((&w * &shear).norm() > 1e-6);
    }

    /// With constant forcing the strong momentum residual of the particular
    /// solution is itself a polynomial inside the test space, so vanishing
    /// moments force it to vanish pointwise. Likewise the divergence residual
    /// for g = 1. This checks the matrix and right-hand side jointly against
    /// the strong equations.
    #[test]
    fn particular_solution_satisfies_strong_equations_pointwise() {
        let mesh = Mesh::structured(1).unwrap();
        let nu = 2.0;
        let space = DGSpace::new(&mesh, 3).unwrap();
        let data = LoadData {
            f: &|_| Vec2::new(1.0, 2.0),
            g: &|_| 1.0,
            dirichlet: &|_| Vec2::zeros(),
        };
        let e = 1;
        let w = assemble_local_w(&space, e, nu);
        let r = assemble_local_rhs(&space, e, &data);
        let xp = local_particular(&w, &r);
        assert!((&w * &xp - &r).norm() < 1e-12 * r.norm());

        let vbasis = space.velocity_basis(e);
        let pbasis = space.pressure_basis(e);
        let nk = vbasis.len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let verts = mesh.element_vertices(e);
        for _ in 0..8 {
            // Random barycentric point inside the element.
            let (mut a, mut b) = (rng.random::<f64>(), rng.random::<f64>());
            if a + b > 1.0 {
                (a, b) = (1.0 - a, 1.0 - b);
            }
            let pt = verts[0] + (verts[1] - verts[0]) * a + (verts[2] - verts[0]) * b;
            let lap = vbasis.laplacians(pt);
            let vgrads = vbasis.gradients(pt);
            let pgrads = pbasis.gradients(pt);
            let mut lap_u = Vec2::zeros();
            let mut div_u = 0.0;
            for j in 0..nk {
                lap_u.x += lap[j] * xp[j];
                lap_u.y += lap[j] * xp[nk + j];
                div_u += vgrads[j].x * xp[j] + vgrads[j].y * xp[nk + j];
            }
            let mut grad_p = Vec2::zeros();
            for j in 0..pbasis.len() {
                grad_p += pgrads[j] * xp[2 * nk + j];
            }
            let momentum = -nu * lap_u + grad_p - Vec2::new(1.0, 2.0);
            assert_abs_diff_eq!(momentum.norm(), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(div_u + 1.0, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn embedding_dimensions_and_homogeneous_data() {
        let mesh = Mesh::structured(2).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let data = zero_load();
        let emb = build_embedding(&space, &data, 1.0).unwrap();
        assert_eq!(emb.n_elements(), 8);
        assert_eq!(emb.kernel_dim(), 10);
        assert_eq!(emb.n_condensed(), 80);
        assert_eq!(space.n_dofs(), 120);
        assert_eq!(emb.particular().norm(), 0.0);
        let (min_kept, max_cut) = emb.singular_margins();
        assert!(min_kept > 1e-6, "kept margin {min_kept}");
        assert!(max_cut < 1e-12, "cut margin {max_cut}");
        for e in 0..emb.n_elements() {
            assert_eq!(emb.rank(e), 5);
        }
        // Recovery of y = 0 returns the particular solution (here zero),
        // and reduce ∘ recover is the identity by orthonormality.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let y = DVector::from_fn(emb.n_condensed(), |_, _| rng.random::<f64>() - 0.5);
        let x = emb.recover(&y);
        assert_relative_eq!(emb.reduce(&x), y, epsilon = 1e-12);
    }

    #[test]
    fn condensed_system_matches_full_quadratic_form() {
        let mesh = Mesh::structured(2).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let prob = crate::analysis::Problem::vortex(1.0);
        let data = LoadData {
            f: &|p| prob.forcing(p),
            g: &|p| prob.divergence_source(p),
            dirichlet: &|p| prob.dirichlet(p),
        };
        let alpha = 10.0 * 4.0;
        let system = build_system(&space, &data, 1.0, alpha);
        let emb = build_embedding(&space, &data, 1.0).unwrap();
        let cond = condense(&system, &emb);

        assert_eq!(cond.matrix.n(), 80);
        assert_eq!(cond.n_total(), 81);
        let rel_sym = cond.matrix.symmetry_error()
            / cond.matrix.to_triplets().iter().map(|t| t.2.abs()).fold(0.0, f64::max);
        assert!(rel_sym < 1e-13, "condensed symmetry {rel_sym}");

        // Quadratic form and load agree with the full system through the
        // embedding, evaluated on random condensed vectors.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let kxp = system.matrix.matvec(emb.particular());
        for _ in 0..3 {
            let y = DVector::from_fn(cond.matrix.n(), |_, _| rng.random::<f64>() - 0.5);
            let ty = emb.recover(&y) - emb.particular();
            let full_form = ty.dot(&system.matrix.matvec(&ty));
            let cond_form = y.dot(&cond.matrix.matvec(&y));
            assert_relative_eq!(full_form, cond_form, max_relative = 1e-11);
            let full_load = ty.dot(&(&system.rhs - &kxp));
            assert_relative_eq!(full_load, y.dot(&cond.rhs), max_relative = 1e-11);
        }
        let c = mean_vector(&space);
        assert_relative_eq!(
            cond.constraint_rhs,
            -c.dot(emb.particular()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn condensation_ratios_follow_closed_forms() {
        let mesh = Mesh::structured(1).unwrap();
        for k in 2..=4usize {
            let space = DGSpace::new(&mesh, k).unwrap();
            let data = zero_load();
            let emb = build_embedding(&space, &data, 1.0).unwrap();
            assert_eq!(emb.kernel_dim(), local_kernel_dim(k, 2));
            assert_eq!(space.block_size(), local_full_dim(k, 2));
        }
    }
}