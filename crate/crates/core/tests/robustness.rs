//! Parameter robustness: results must degrade gracefully, not structurally,
//! when the penalty or viscosity moves off the defaults.

use stokes_trefftz::cli::{run_single, Method, RunConfig};

fn run(method: Method, nu: f64, alpha_scale: f64, problem: &str) -> stokes_trefftz::analysis::ErrorReport {
    run_single(&RunConfig {
        method,
        k: 2,
        n: 4,
        nu,
        alpha_scale,
        problem: problem.into(),
    })
    .unwrap()
    .report
}

#[test]
fn doubling_the_penalty_shifts_errors_by_a_bounded_factor() {
    for method in [Method::Dg, Method::Trefftz] {
        let base = run(method, 1.0, 10.0, "vortex");
        let strong = run(method, 1.0, 20.0, "vortex");
        for (a, b) in [
            (base.ul2_error, strong.ul2_error),
            (base.pl2_error, strong.pl2_error),
            (base.u1h_error, strong.u1h_error),
        ] {
            assert!(b < 3.0 * a && a < 3.0 * b, "errors {a:.3e} vs {b:.3e}");
        }
    }
}

#[test]
fn patch_test_stays_exact_for_other_viscosities() {
    for method in [Method::Dg, Method::Trefftz] {
        for nu in [0.5, 2.0] {
            let report = run(method, nu, 10.0, "taylor-patch");
            assert!(report.ul2_error < 1e-9, "{method:?} nu={nu}: {}", report.ul2_error);
            assert!(report.pl2_error < 1e-8, "{method:?} nu={nu}: {}", report.pl2_error);
        }
    }
}
