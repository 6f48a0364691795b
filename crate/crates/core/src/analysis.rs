//! Manufactured problems, mesh-dependent norms, and convergence reporting.
//!
//! The built-in benchmark problem drives the solver with a smooth polynomial
//! field: the velocity is the curl of the biquartic bump
//! `ζ = x²(1-x)² y²(1-y)²` (hence pointwise divergence free and zero on the
//! boundary) and the pressure is `x⁶ + y⁶ - 2/7`, which integrates to zero
//! over the unit square. Because everything is polynomial, forcing terms and
//! gradients come from exact symbolic differentiation, and error quadrature
//! can be made exact rather than merely accurate.

use crate::mesh::{Point2, Vec2};
use crate::polybasis::{
    l2_project, map_to_segment, map_to_triangle, segment_rule, triangle_rule, BasisSet,
};
use crate::stokes_dg::DGSpace;
use crate::{Error, Result};
use nalgebra::{DVector, Matrix2};
use std::collections::BTreeMap;

/// A sparse bivariate polynomial with exact coefficient arithmetic in f64.
///
/// Small enough for manufactured data (degrees ≤ 8); exponents map to
/// coefficients, and differentiation is exact.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly2 {
    coeffs: BTreeMap<(u32, u32), f64>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn monomial(a: u32, b: u32, c: f64) -> Poly2 {
        let mut p = Poly2::zero();
        if c != 0.0 {
            p.coeffs.insert((a, b), c);
        }
        p
    }

    pub fn constant(c: f64) -> Poly2 {
        Poly2::monomial(0, 0, c)
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&e, &c) in &other.coeffs {
            *out.coeffs.entry(e).or_insert(0.0) += c;
        }
        out.prune()
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c *= s;
        }
        out.prune()
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a1, b1), &c1) in &self.coeffs {
            for (&(a2, b2), &c2) in &other.coeffs {
                *out.coeffs.entry((a1 + a2, b1 + b2)).or_insert(0.0) += c1 * c2;
            }
        }
        out.prune()
    }

    pub fn dx(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a, b), &c) in &self.coeffs {
            if a > 0 {
                out.coeffs.insert((a - 1, b), c * a as f64);
            }
        }
        out
    }

    pub fn dy(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a, b), &c) in &self.coeffs {
            if b > 0 {
                out.coeffs.insert((a, b - 1), c * b as f64);
            }
        }
        out
    }

    pub fn laplacian(&self) -> Poly2 {
        self.dx().dx().add(&self.dy().dy())
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.coeffs
            .iter()
            .map(|(&(a, b), &c)| c * p.x.powi(a as i32) * p.y.powi(b as i32))
            .sum()
    }

    fn prune(mut self) -> Poly2 {
        self.coeffs.retain(|_, c| *c != 0.0);
        self
    }
}

/// A Stokes problem with exact polynomial solution, used both to drive the
/// discretization (forcing, Dirichlet data) and to measure errors.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: &'static str,
    pub nu: f64,
    u: [Poly2; 2],
    p: Poly2,
    grad_u: [[Poly2; 2]; 2],
    f: [Poly2; 2],
    g: Poly2,
}

impl Problem {
    fn from_solution(name: &'static str, nu: f64, u: [Poly2; 2], p: Poly2) -> Problem {
        let f = [
            u[0].laplacian().scale(-nu).add(&p.dx()),
            u[1].laplacian().scale(-nu).add(&p.dy()),
        ];
        let g = u[0].dx().add(&u[1].dy()).scale(-1.0);
        let grad_u = [
            [u[0].dx(), u[0].dy()],
            [u[1].dx(), u[1].dy()],
        ];
        Problem {
            name,
            nu,
            u,
            p,
            grad_u,
            f,
            g,
        }
    }

    /// Curl of the biquartic bump with a degree-6 zero-mean pressure; the
    /// standard smooth benchmark with homogeneous Dirichlet data.
    pub fn vortex(nu: f64) -> Problem {
        let bump_x = Poly2::monomial(2, 0, 1.0)
            .add(&Poly2::monomial(3, 0, -2.0))
            .add(&Poly2::monomial(4, 0, 1.0));
        let bump_y = Poly2::monomial(0, 2, 1.0)
            .add(&Poly2::monomial(0, 3, -2.0))
            .add(&Poly2::monomial(0, 4, 1.0));
        let zeta = bump_x.mul(&bump_y);
        let u = [zeta.dy(), zeta.dx().scale(-1.0)];
        let p = Poly2::monomial(6, 0, 1.0)
            .add(&Poly2::monomial(0, 6, 1.0))
            .add(&Poly2::constant(-2.0 / 7.0));
        Problem::from_solution("vortex", nu, u, p)
    }

    /// Linear patch test: u = (y, x), p = 0, zero forcing. Any consistent
    /// method with k ≥ 1 must reproduce it to solver precision.
    pub fn taylor_patch(nu: f64) -> Problem {
        let u = [Poly2::monomial(0, 1, 1.0), Poly2::monomial(1, 0, 1.0)];
        Problem::from_solution("taylor-patch", nu, u, Poly2::zero())
    }

    /// Fully homogeneous data; the solution is identically zero.
    pub fn zero(nu: f64) -> Problem {
        Problem::from_solution("zero", nu, [Poly2::zero(), Poly2::zero()], Poly2::zero())
    }

    pub fn by_name(name: &str, nu: f64) -> Result<Problem> {
        match name {
            "vortex" => Ok(Problem::vortex(nu)),
            "taylor-patch" => Ok(Problem::taylor_patch(nu)),
            "zero" => Ok(Problem::zero(nu)),
            other => Err(Error::InvalidArgument(format!(
                "unknown problem '{other}' (expected vortex, taylor-patch, or zero)"
            ))),
        }
    }

    pub fn velocity(&self, p: Point2) -> Vec2 {
        Vec2::new(self.u[0].eval(p), self.u[1].eval(p))
    }

    /// Exact velocity gradient; row c holds ∇u_c.
    pub fn velocity_gradient(&self, p: Point2) -> Matrix2<f64> {
        Matrix2::new(
            self.grad_u[0][0].eval(p),
            self.grad_u[0][1].eval(p),
            self.grad_u[1][0].eval(p),
            self.grad_u[1][1].eval(p),
        )
    }

    pub fn pressure(&self, p: Point2) -> f64 {
        self.p.eval(p)
    }

    /// Momentum forcing f = −νΔu + ∇p.
    pub fn forcing(&self, p: Point2) -> Vec2 {
        Vec2::new(self.f[0].eval(p), self.f[1].eval(p))
    }

    /// Mass source g = −div u (zero for all built-in problems).
    pub fn divergence_source(&self, p: Point2) -> f64 {
        self.g.eval(p)
    }

    /// Dirichlet trace (the exact velocity).
    pub fn dirichlet(&self, p: Point2) -> Vec2 {
        self.velocity(p)
    }
}

/// Quadrature exactness for error norms: every error integrand here is a
/// polynomial of degree ≤ max(14, 2k), so this removes quadrature error from
/// reported rates entirely.
pub fn error_exactness(k: usize) -> usize {
    (2 * k + 8).max(16)
}

/// Broken H¹ norm with jump penalty,
/// ‖v‖² = Σ_T ‖∇v‖²_T + Σ_F h_F⁻¹‖[[v]]‖²_F (boundary facets included),
/// of a discrete velocity field given by its coefficient vector.
pub fn norm_1h(space: &DGSpace, coeffs: &DVector<f64>) -> f64 {
    let mesh = space.mesh();
    let rule = triangle_rule(2 * space.k());
    let mut total = 0.0;
    for e in 0..mesh.n_elements() {
        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
        let basis = space.velocity_basis(e);
        for (q, &p) in mapped.points.iter().enumerate() {
            let grads = basis.gradients(p);
            let mut gx = Vec2::zeros();
            let mut gy = Vec2::zeros();
            for i in 0..basis.len() {
                gx += grads[i] * coeffs[space.u_dof(e, 0, i)];
                gy += grads[i] * coeffs[space.u_dof(e, 1, i)];
            }
            total += mapped.weights[q] * (gx.norm_squared() + gy.norm_squared());
        }
    }
    let seg = segment_rule(2 * space.k());
    for f in mesh.interior_facets() {
        let mapped = map_to_segment(&seg, f.geometry.endpoints);
        for (q, &p) in mapped.points.iter().enumerate() {
            let jump = space.velocity_at(coeffs, f.elem_a, p) - space.velocity_at(coeffs, f.elem_b, p);
            total += mapped.weights[q] / f.geometry.h * jump.norm_squared();
        }
    }
    for f in mesh.boundary_facets() {
        let mapped = map_to_segment(&seg, f.geometry.endpoints);
        for (q, &p) in mapped.points.iter().enumerate() {
            let trace = space.velocity_at(coeffs, f.elem, p);
            total += mapped.weights[q] / f.geometry.h * trace.norm_squared();
        }
    }
    total.sqrt()
}

/// Discrete pressure seminorm
/// ‖q‖² = Σ_T ‖h ∇q‖²_T + Σ_{F interior} h_F ‖[[Π⁰q]]‖²_F,
/// of a discrete pressure field given by its coefficient vector.
pub fn norm_0h(space: &DGSpace, coeffs: &DVector<f64>) -> f64 {
    let mesh = space.mesh();
    let rule = triangle_rule(2 * space.k());
    let mut total = 0.0;
    let mut means = vec![0.0; mesh.n_elements()];
    for e in 0..mesh.n_elements() {
        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
        let basis = space.pressure_basis(e);
        let h2 = mesh.diameter(e) * mesh.diameter(e);
        let mut integral = 0.0;
        for (q, &p) in mapped.points.iter().enumerate() {
            let grads = basis.gradients(p);
            let vals = basis.values(p);
            let mut g = Vec2::zeros();
            let mut v = 0.0;
            for i in 0..basis.len() {
                let c = coeffs[space.p_dof(e, i)];
                g += grads[i] * c;
                v += vals[i] * c;
            }
            total += mapped.weights[q] * h2 * g.norm_squared();
            integral += mapped.weights[q] * v;
        }
        means[e] = integral / mesh.area(e);
    }
    for f in mesh.interior_facets() {
        let jump = means[f.elem_a] - means[f.elem_b];
        total += f.geometry.h * f.geometry.length * jump * jump;
    }
    total.sqrt()
}

/// L² errors of velocity and pressure against the exact solution.
pub fn l2_errors(space: &DGSpace, problem: &Problem, coeffs: &DVector<f64>) -> (f64, f64) {
    let mesh = space.mesh();
    let rule = triangle_rule(error_exactness(space.k()));
    let (mut u2, mut p2) = (0.0, 0.0);
    for e in 0..mesh.n_elements() {
        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
        for (q, &pt) in mapped.points.iter().enumerate() {
            let w = mapped.weights[q];
            let du = problem.velocity(pt) - space.velocity_at(coeffs, e, pt);
            let dp = problem.pressure(pt) - space.pressure_at(coeffs, e, pt);
            u2 += w * du.norm_squared();
            p2 += w * dp * dp;
        }
    }
    (u2.sqrt(), p2.sqrt())
}

/// Velocity error in the broken H¹/jump norm (boundary facets measure the
/// deviation from the Dirichlet trace).
pub fn u_1h_error(space: &DGSpace, problem: &Problem, coeffs: &DVector<f64>) -> f64 {
    let mesh = space.mesh();
    let q_err = error_exactness(space.k());
    let rule = triangle_rule(q_err);
    let mut total = 0.0;
    for e in 0..mesh.n_elements() {
        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
        let basis = space.velocity_basis(e);
        for (q, &pt) in mapped.points.iter().enumerate() {
            let grads = basis.gradients(pt);
            let mut gx = Vec2::zeros();
            let mut gy = Vec2::zeros();
            for i in 0..basis.len() {
                gx += grads[i] * coeffs[space.u_dof(e, 0, i)];
                gy += grads[i] * coeffs[space.u_dof(e, 1, i)];
            }
            let exact = problem.velocity_gradient(pt);
            let dx = Vec2::new(exact[(0, 0)], exact[(0, 1)]) - gx;
            let dy = Vec2::new(exact[(1, 0)], exact[(1, 1)]) - gy;
            total += mapped.weights[q] * (dx.norm_squared() + dy.norm_squared());
        }
    }
    let seg = segment_rule(q_err);
    for f in mesh.interior_facets() {
        let mapped = map_to_segment(&seg, f.geometry.endpoints);
        for (q, &pt) in mapped.points.iter().enumerate() {
            // The exact velocity is continuous, so the error jump is the
            // negated jump of the discrete field.
            let jump =
                space.velocity_at(coeffs, f.elem_a, pt) - space.velocity_at(coeffs, f.elem_b, pt);
            total += mapped.weights[q] / f.geometry.h * jump.norm_squared();
        }
    }
    for f in mesh.boundary_facets() {
        let mapped = map_to_segment(&seg, f.geometry.endpoints);
        for (q, &pt) in mapped.points.iter().enumerate() {
            let diff = problem.dirichlet(pt) - space.velocity_at(coeffs, f.elem, pt);
            total += mapped.weights[q] / f.geometry.h * diff.norm_squared();
        }
    }
    total.sqrt()
}

/// Pressure error in the h-weighted gradient/mean-jump seminorm.
pub fn p_0h_error(space: &DGSpace, problem: &Problem, coeffs: &DVector<f64>) -> f64 {
    let mesh = space.mesh();
    let rule = triangle_rule(error_exactness(space.k()));
    let mut total = 0.0;
    let mut mean_err = vec![0.0; mesh.n_elements()];
    let (pdx, pdy) = (problem.p.dx(), problem.p.dy());
    for e in 0..mesh.n_elements() {
        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
        let basis = space.pressure_basis(e);
        let h2 = mesh.diameter(e) * mesh.diameter(e);
        let mut integral = 0.0;
        for (q, &pt) in mapped.points.iter().enumerate() {
            let grads = basis.gradients(pt);
            let vals = basis.values(pt);
            let mut g = Vec2::zeros();
            let mut v = 0.0;
            for i in 0..basis.len() {
                let c = coeffs[space.p_dof(e, i)];
                g += grads[i] * c;
                v += vals[i] * c;
            }
            let exact_grad = Vec2::new(pdx.eval(pt), pdy.eval(pt));
            let diff = exact_grad - g;
            total += mapped.weights[q] * h2 * diff.norm_squared();
            integral += mapped.weights[q] * (problem.pressure(pt) - v);
        }
        mean_err[e] = integral / mesh.area(e);
    }
    for f in mesh.interior_facets() {
        let jump = mean_err[f.elem_a] - mean_err[f.elem_b];
        total += f.geometry.h * f.geometry.length * jump * jump;
    }
    total.sqrt()
}

/// L²(Ω) norms of the elementwise residuals of the strong constraint:
/// momentum ‖−νΔu_h + ∇p_h − Π^{k-2}f‖ and divergence ‖div u_h + Π^{k-1}g‖.
///
/// Both vanish (to rounding) for solutions recovered from the Trefftz
/// embedding, and the momentum residual is genuinely positive for a plain DG
/// solution.
pub fn structural_residuals(
    space: &DGSpace,
    problem: &Problem,
    coeffs: &DVector<f64>,
) -> (f64, f64) {
    let mesh = space.mesh();
    let k = space.k() as i64;
    let project_rule = triangle_rule(2 * space.k() + 6);
    let eval_rule = triangle_rule(2 * space.k());
    let (mut mom2, mut div2) = (0.0, 0.0);
    for e in 0..mesh.n_elements() {
        let verts = mesh.element_vertices(e);
        let vbasis = space.velocity_basis(e);
        let pbasis = space.pressure_basis(e);
        let test_m = BasisSet::for_element(mesh, e, k - 2);
        let test_d = BasisSet::for_element(mesh, e, k - 1);
        let pf = [
            l2_project(|p| problem.forcing(p).x, &test_m, verts, &project_rule),
            l2_project(|p| problem.forcing(p).y, &test_m, verts, &project_rule),
        ];
        let pg = l2_project(|p| problem.divergence_source(p), &test_d, verts, &project_rule);

        let mapped = map_to_triangle(&eval_rule, verts);
        for (q, &pt) in mapped.points.iter().enumerate() {
            let w = mapped.weights[q];
            let lap = vbasis.laplacians(pt);
            let vgrads = vbasis.gradients(pt);
            let pgrads = pbasis.gradients(pt);
            let mut lap_u = Vec2::zeros();
            let mut div_u = 0.0;
            for i in 0..vbasis.len() {
                lap_u.x += lap[i] * coeffs[space.u_dof(e, 0, i)];
                lap_u.y += lap[i] * coeffs[space.u_dof(e, 1, i)];
                div_u += vgrads[i].x * coeffs[space.u_dof(e, 0, i)]
                    + vgrads[i].y * coeffs[space.u_dof(e, 1, i)];
            }
            let mut grad_p = Vec2::zeros();
            for i in 0..pbasis.len() {
                grad_p += pgrads[i] * coeffs[space.p_dof(e, i)];
            }
            let (mut proj_f, mut proj_g) = (Vec2::zeros(), 0.0);
            if !test_m.is_empty() {
                let tv = test_m.values(pt);
                for i in 0..test_m.len() {
                    proj_f.x += pf[0][i] * tv[i];
                    proj_f.y += pf[1][i] * tv[i];
                }
            }
            let dv = test_d.values(pt);
            for i in 0..test_d.len() {
                proj_g += pg[i] * dv[i];
            }
            let mom = -problem.nu * lap_u + grad_p - proj_f;
            let div = div_u + proj_g;
            mom2 += w * mom.norm_squared();
            div2 += w * div * div;
        }
    }
    (mom2.sqrt(), div2.sqrt())
}

/// Largest |div u_h| over all volume quadrature points; the pointwise
/// counterpart of the divergence residual.
pub fn max_pointwise_divergence(space: &DGSpace, coeffs: &DVector<f64>) -> f64 {
    let mesh = space.mesh();
    let rule = triangle_rule(2 * space.k());
    let mut worst = 0.0f64;
    for e in 0..mesh.n_elements() {
        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
        let basis = space.velocity_basis(e);
        for &pt in &mapped.points {
            let grads = basis.gradients(pt);
            let mut div = 0.0;
            for i in 0..basis.len() {
                div += grads[i].x * coeffs[space.u_dof(e, 0, i)]
                    + grads[i].y * coeffs[space.u_dof(e, 1, i)];
            }
            worst = worst.max(div.abs());
        }
    }
    worst
}

/// Estimated orders of convergence from consecutive (h, error) pairs:
/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
pub fn eoc(samples: &[(f64, f64)]) -> Vec<f64> {
    samples
        .windows(2)
        .map(|w| {
            let (h0, e0) = w[0];
            let (h1, e1) = w[1];
            (e0 / e1).ln() / (h0 / h1).ln()
        })
        .collect()
}

/// Per-run error summary; one CSV row of a convergence study.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub k: usize,
    pub nu: f64,
    pub n: usize,
    pub h: f64,
    /// Unknowns of the full system, multiplier included.
    pub ndof_full: usize,
    /// Unknowns of the condensed system, multiplier included.
    pub ndof_condensed: usize,
    pub ul2_error: f64,
    pub pl2_error: f64,
    pub u1h_error: f64,
    pub p0h_error: f64,
    pub momentum_residual: f64,
    pub div_residual: f64,
}

/// Computes the full error report for a solved coefficient vector.
pub fn error_report(
    space: &DGSpace,
    problem: &Problem,
    coeffs: &DVector<f64>,
    ndof_full: usize,
    ndof_condensed: usize,
) -> ErrorReport {
    let (ul2, pl2) = l2_errors(space, problem, coeffs);
    let (mom, div) = structural_residuals(space, problem, coeffs);
    ErrorReport {
        k: space.k(),
        nu: problem.nu,
        n: space.mesh().n(),
        h: space.mesh().h_max(),
        ndof_full,
        ndof_condensed,
        ul2_error: ul2,
        pl2_error: pl2,
        u1h_error: u_1h_error(space, problem, coeffs),
        p0h_error: p_0h_error(space, problem, coeffs),
        momentum_residual: mom,
        div_residual: div,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    #[test]
    fn poly_arithmetic_and_derivatives() {
        // (1 + 2x)(y - x²) = y + 2xy - x² - 2x³
        let a = Poly2::constant(1.0).add(&Poly2::monomial(1, 0, 2.0));
        let b = Poly2::monomial(0, 1, 1.0).sub(&Poly2::monomial(2, 0, 1.0));
        let prod = a.mul(&b);
        let p = Point2::new(0.7, -1.3);
        assert_relative_eq!(
            prod.eval(p),
            (1.0 + 2.0 * p.x) * (p.y - p.x * p.x),
            epsilon = 1e-14
        );
        // d/dx: 2y - 2x - 6x²
        assert_relative_eq!(
            prod.dx().eval(p),
            2.0 * p.y - 2.0 * p.x - 6.0 * p.x * p.x,
            epsilon = 1e-14
        );
        assert_relative_eq!(prod.dy().eval(p), 1.0 + 2.0 * p.x, epsilon = 1e-14);
    }

    #[test]
    fn vortex_solution_is_divergence_free_and_boundary_zero() {
        let prob = Problem::vortex(1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let p = Point2::new(rng.random::<f64>(), rng.random::<f64>());
            assert_abs_diff_eq!(prob.divergence_source(p), 0.0, epsilon = 1e-15);
            // div u from the exact gradient.
            let g = prob.velocity_gradient(p);
            assert_abs_diff_eq!(g[(0, 0)] + g[(1, 1)], 0.0, epsilon = 1e-15);
        }
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            for p in [
                Point2::new(t, 0.0),
                Point2::new(t, 1.0),
                Point2::new(0.0, t),
                Point2::new(1.0, t),
            ] {
                assert_abs_diff_eq!(prob.velocity(p).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn vortex_center_values_match_hand_computation() {
        // At (1/2, 1/2): Δu = 0 there, so f = ∇p = (6/2⁵, 6/2⁵) = (0.1875, 0.1875),
        // and p = 2·(1/2)⁶ − 2/7 = −57/224.
        let prob = Problem::vortex(1.0);
        let c = Point2::new(0.5, 0.5);
        let f = prob.forcing(c);
        assert_relative_eq!(f.x, 0.1875, epsilon = 1e-15);
        assert_relative_eq!(f.y, 0.1875, epsilon = 1e-15);
        assert_relative_eq!(prob.pressure(c), -57.0 / 224.0, epsilon = 1e-15);
    }

    #[test]
    fn vortex_velocity_matches_finite_difference_of_potential() {
        // Independent route to u = curl ζ: difference the bump directly.
        let zeta = |p: Point2| {
            let bx = p.x * p.x * (1.0 - p.x) * (1.0 - p.x);
            let by = p.y * p.y * (1.0 - p.y) * (1.0 - p.y);
            bx * by
        };
        let prob = Problem::vortex(1.0);
        let d = 1e-6;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let p = Point2::new(rng.random::<f64>(), rng.random::<f64>());
            let dzdy = (zeta(Point2::new(p.x, p.y + d)) - zeta(Point2::new(p.x, p.y - d))) / (2.0 * d);
            let dzdx = (zeta(Point2::new(p.x + d, p.y)) - zeta(Point2::new(p.x - d, p.y))) / (2.0 * d);
            let u = prob.velocity(p);
            assert_abs_diff_eq!(u.x, dzdy, epsilon = 1e-9);
            assert_abs_diff_eq!(u.y, -dzdx, epsilon = 1e-9);
        }
    }

    #[test]
    fn vortex_pressure_has_zero_mean() {
        let prob = Problem::vortex(1.0);
        let mesh = Mesh::structured(4).unwrap();
        let rule = triangle_rule(8);
        let mut integral = 0.0;
        for e in 0..mesh.n_elements() {
            let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
            for (q, &p) in mapped.points.iter().enumerate() {
                integral += mapped.weights[q] * prob.pressure(p);
            }
        }
        assert_abs_diff_eq!(integral, 0.0, epsilon = 1e-14);
    }

    /// Frozen norms of the exact solution, derived by rational integration:
    /// ∫(x⁶+y⁶−2/7)² = 2/13 − 2/49 = 72/637, and with X = x²(1−x)²,
    /// ∫X² = 1/630, ∫(X′)² = 2/105, so ∫|u|² = 2·(1/630)·(2/105) = 2/33075.
    #[test]
    fn exact_solution_norms_match_rational_oracle() {
        let prob = Problem::vortex(1.0);
        let mesh = Mesh::structured(3).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let zero = DVector::zeros(space.n_dofs());
        let (ul2, pl2) = l2_errors(&space, &prob, &zero);
        assert_relative_eq!(pl2, (72.0f64 / 637.0).sqrt(), epsilon = 1e-13);
        assert_relative_eq!(ul2, (2.0f64 / 33075.0).sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn taylor_patch_has_zero_forcing() {
        let prob = Problem::taylor_patch(3.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let p = Point2::new(rng.random::<f64>(), rng.random::<f64>());
            assert_eq!(prob.forcing(p).norm(), 0.0);
            assert_eq!(prob.divergence_source(p), 0.0);
            assert_eq!(prob.velocity(p), Vec2::new(p.y, p.x));
        }
        assert!(Problem::by_name("no-such-problem", 1.0).is_err());
    }

    /// Hand value: constant (1,0) on element 0 of the n = 1 mesh, zero
    /// elsewhere. Gradients vanish; the three facets of element 0 contribute
    /// (1/√2)(1 + 1 + √2), so the norm is sqrt(1 + √2).
    #[test]
    fn jump_norm_of_single_element_constant() {
        let mesh = Mesh::structured(1).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        let mut x = DVector::zeros(space.n_dofs());
        x[space.u_dof(0, 0, 0)] = 1.0;
        assert_relative_eq!(
            norm_1h(&space, &x),
            (1.0 + 2.0f64.sqrt()).sqrt(),
            epsilon = 1e-13
        );
        let zero = DVector::zeros(space.n_dofs());
        assert_eq!(norm_1h(&space, &zero), 0.0);
    }

    /// Hand value for q = x on the n = 1 mesh: ‖h∇q‖² = 2, and the single
    /// interior facet sees the mean jump 2/3 − 1/3 with weight h_F·length = 2,
    /// giving sqrt(2 + 2/9).
    #[test]
    fn pressure_seminorm_hand_value() {
        let mesh = Mesh::structured(1).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let x = space.project_pressure(&|p| p.x, 6);
        assert_relative_eq!(norm_0h(&space, &x), (2.0 + 2.0 / 9.0f64).sqrt(), epsilon = 1e-13);
        // Constants have no gradient and no mean jump.
        let mut c = DVector::zeros(space.n_dofs());
        for e in 0..mesh.n_elements() {
            c[space.p_dof(e, 0)] = 4.2;
        }
        assert_abs_diff_eq!(norm_0h(&space, &c), 0.0, epsilon = 1e-14);
    }

    /// The seminorm and the plain L² norm are equivalent on discrete
    /// zero-mean pressures with constants independent of the mesh level.
    #[test]
    fn pressure_norm_equivalence_ratios_stay_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut extremes = Vec::new();
        for n in [2usize, 4, 8] {
            let mesh = Mesh::structured(n).unwrap();
            let space = DGSpace::new(&mesh, 2).unwrap();
            let c = crate::stokes_dg::mean_vector(&space);
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for _ in 0..20 {
                let mut x = DVector::zeros(space.n_dofs());
                for e in 0..mesh.n_elements() {
                    for i in 0..space.pressure_block() {
                        x[space.p_dof(e, i)] = rng.random::<f64>() - 0.5;
                    }
                }
                // Remove the global mean (direction of the constraint).
                let mean = c.dot(&x);
                for e in 0..mesh.n_elements() {
                    x[space.p_dof(e, 0)] -= mean;
                }
                let l2: f64 = {
                    let rule = triangle_rule(2 * space.k());
                    let mut acc = 0.0;
                    for e in 0..mesh.n_elements() {
                        let mapped = map_to_triangle(&rule, mesh.element_vertices(e));
                        for (q, &p) in mapped.points.iter().enumerate() {
                            let v = space.pressure_at(&x, e, p);
                            acc += mapped.weights[q] * v * v;
                        }
                    }
                    acc.sqrt()
                };
                let ratio = norm_0h(&space, &x) / l2;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
            extremes.push((lo, hi));
        }
        for &(lo, hi) in &extremes {
            assert!(lo > 0.05 && hi < 20.0, "ratio range [{lo}, {hi}]");
        }
        // The observed range must not drift by more than a small factor
        // across levels.
        let (lo0, hi0) = extremes[0];
        for &(lo, hi) in &extremes[1..] {
            assert!(hi / hi0 < 3.0 && lo0 / lo < 3.0);
        }
    }

    #[test]
    fn projected_exact_fields_have_tiny_errors() {
        let mesh = Mesh::structured(2).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let prob = Problem::taylor_patch(1.0);
        let mut x = space.project_velocity(&|p| prob.velocity(p), 8);
        x += space.project_pressure(&|p| prob.pressure(p), 8);
        let (ul2, pl2) = l2_errors(&space, &prob, &x);
        assert_abs_diff_eq!(ul2, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pl2, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u_1h_error(&space, &prob, &x), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(p_0h_error(&space, &prob, &x), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn structural_residuals_flag_unbalanced_fields() {
        let mesh = Mesh::structured(2).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let vortex = Problem::vortex(1.0);
        // The zero field misses the projected forcing entirely.
        let zero = DVector::zeros(space.n_dofs());
        let (mom, div) = structural_residuals(&space, &vortex, &zero);
        assert!(mom > 1e-6, "momentum residual {mom} should be O(‖f‖)");
        assert_abs_diff_eq!(div, 0.0, epsilon = 1e-14);
        // The zero field against zero data is exactly balanced.
        let zprob = Problem::zero(1.0);
        let (mom0, div0) = structural_residuals(&space, &zprob, &zero);
        assert_eq!((mom0, div0), (0.0, 0.0));
        assert_eq!(max_pointwise_divergence(&space, &zero), 0.0);
    }

    #[test]
    fn eoc_recovers_power_law_rates() {
        let samples: Vec<(f64, f64)> = [2, 4, 8, 16]
            .iter()
            .map(|&n| {
                let h = 1.0 / n as f64;
                (h, 3.7 * h * h)
            })
            .collect();
        for rate in eoc(&samples) {
            assert_relative_eq!(rate, 2.0, epsilon = 1e-12);
        }
        // Mild multiplicative noise must not move the rate much.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let noisy: Vec<(f64, f64)> = samples
            .iter()
            .map(|&(h, e)| (h, e * (1.0 + 0.01 * (rng.random::<f64>() - 0.5))))
            .collect();
        for rate in eoc(&noisy) {
            assert!((rate - 2.0).abs() < 0.05);
        }
        // Stagnating errors give rate ~ 0.
        let flat = [(0.5, 1.0), (0.25, 1.0)];
        assert_abs_diff_eq!(eoc(&flat)[0], 0.0, epsilon = 1e-15);
    }
}
