use nullwave_core::builtins::{builtin, NULL_SOLUTIONS};
use nullwave_core::fields::{factorize_gradient, spinor_gradient};
use nullwave_core::sfr::{classify_kernel_direction, verify_grid};
use nullwave_core::spinor::spinmat_to_vec;
use nullwave_core::{
    Branch, Complex64 as C, MinkVec, ResidualReport, Role, Scheme, SpinMat, Tolerances, VerifyOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn run(name: &str, scheme: Scheme) -> ResidualReport {
    let b = builtin(name).unwrap();
    let opts = VerifyOptions {
        scheme,
        ..Default::default()
    };
    verify_grid(b.field, &b.grid, opts).unwrap()
}

fn col_max(r: &ResidualReport, c: &str) -> f64 {
    r.column(c).and_then(|s| s.max).unwrap_or(f64::NAN)
}

#[test]
fn builtins_solve_both_equations() {
    for name in NULL_SOLUTIONS {
        let r = run(name, Scheme::Analytic);
        assert_eq!(r.points.len(), 625);
        assert!(col_max(&r, "det") <= 1e-9, "{name}: det {}", col_max(&r, "det"));
        assert!(col_max(&r, "wave") <= 1e-6, "{name}: wave {}", col_max(&r, "wave"));
        assert!(r.verdict.pass, "{name}: {:?}", r.verdict);

        let fd = run(name, Scheme::fd());
        assert!(col_max(&fd, "det") <= 1e-6, "{name}: fd det {}", col_max(&fd, "det"));
    }
}

#[test]
fn time_coordinate_is_not_semiconformal() {
    let r = run("t", Scheme::Analytic);
    assert!(!r.verdict.pass);
    assert!(!r.verdict.null_solution);
    for p in &r.points {
        assert!((p.det.unwrap() - 0.5).abs() <= 1e-9);
        assert_eq!(p.status, "not_rank_one");
    }
}

#[test]
fn spinor_equations_hold_with_differences() {
    // Inner step 1e-5 (outer 1e-4) keeps truncation error well under the
    // threshold on the curved built-ins.
    for name in NULL_SOLUTIONS {
        let r = run(name, Scheme::Central(Some(1e-5)));
        let worst = r.points.iter().filter_map(|p| p.pde_max()).fold(0.0, f64::max);
        assert_eq!(r.points.iter().filter(|p| p.pde.is_some()).count(), 625);
        assert!(worst <= 1e-5, "{name}: pde {worst:e}");
        assert!(r.verdict.spinor_equations);
    }
}

#[test]
fn at_least_one_branch_is_shear_free() {
    for name in NULL_SOLUTIONS {
        for scheme in [Scheme::Analytic, Scheme::Central(Some(1e-5))] {
            let v = run(name, scheme).verdict;
            let xi = v.xi_branch_max.unwrap();
            let eta = v.eta_branch_max.unwrap();
            assert!(xi.min(eta) <= 1e-5, "{name} {scheme:?}: {xi:e} {eta:e}");
            if name == "kerr-basic" {
                assert!(xi.max(eta) <= 1e-5, "{name} {scheme:?}: {xi:e} {eta:e}");
            }
        }
    }
}

/// Null direction `lambda rho rhobar` with `rho` along one of the factors.
fn kernel_direction(g: &SpinMat, xi_side: bool, lambda: f64) -> MinkVec {
    let (xi, eta) = factorize_gradient(g, 1e-6).unwrap();
    let rho = if xi_side { xi.to_upper() } else { eta.to_upper().conj() };
    let m = SpinMat::outer(&rho, &rho.conj(), Role::Position).scale(C::from(lambda));
    spinmat_to_vec(&m, 1e-12).unwrap()
}

#[test]
fn kernel_directions_classify_without_exceptions() {
    let tol = Tolerances::default();
    for name in NULL_SOLUTIONS {
        let b = builtin(name).unwrap();
        let pts = b.grid.points();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut seen = [0usize; 3];
        for _ in 0..1_000 {
            let x = pts[rng.gen_range(0..pts.len())];
            let g = spinor_gradient(b.field.as_ref(), &x, Scheme::Analytic).unwrap();
            let xi_side = rng.gen_bool(0.5);
            let lambda = rng.gen_range(0.1..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let v = kernel_direction(&g, xi_side, lambda);
            let c = classify_kernel_direction(b.field.as_ref(), &x, &v, Scheme::Analytic, &tol).unwrap();
            match c.branch {
                Branch::XiBranch => assert!(xi_side, "{name} at {x}"),
                Branch::EtaBranch => assert!(!xi_side, "{name} at {x}"),
                Branch::Coincident => {}
                Branch::NotInKernel => panic!("{name} at {x}: kernel residual {:e}", c.kernel_residual),
            }
            seen[c.branch as usize] += 1;
        }
        assert_eq!(seen.iter().sum::<usize>(), 1_000);
    }
}

#[test]
fn classification_matches_documented_cases() {
    let b = builtin("q").unwrap();
    let x = MinkVec::new(0.2, 0.1, -0.3, 0.5);
    let tol = Tolerances::default();
    let classify = |v: MinkVec| classify_kernel_direction(b.field.as_ref(), &x, &v, Scheme::Analytic, &tol);
    assert_eq!(
        classify(MinkVec::new(1.0, -1.0, 0.0, 0.0)).unwrap().branch,
        Branch::XiBranch
    );
    assert_eq!(
        classify(MinkVec::new(1.0, 1.0, 0.0, 0.0)).unwrap().branch,
        Branch::EtaBranch
    );
    assert_eq!(
        classify(MinkVec::new(1.0, 0.0, 1.0, 0.0)).unwrap().branch,
        Branch::NotInKernel
    );
    assert!(classify(MinkVec::new(1.0, 0.0, 0.0, 0.0)).is_err());
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn surface_condition_decides_harmonicity() {
    let good = run("surface-basic", Scheme::Analytic);
    assert!(col_max(&good, "wave") <= 1e-6);
    let bad = run("surface-bad", Scheme::Analytic);
    let waves: Vec<f64> = bad.points.iter().filter_map(|p| p.wave).collect();
    assert_eq!(waves.len(), 625);
    assert!(median(waves) >= 1e-2);
    assert!(!bad.verdict.null_solution);
    // the gradient is still rank one: the failure is harmonicity alone
    assert!(col_max(&bad, "det") <= 1e-9);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let b = builtin("kerr-basic").unwrap();
    let mk = |threads| {
        let opts = VerifyOptions {
            threads,
            ..Default::default()
        };
        let r = verify_grid(b.field.clone(), &b.grid, opts).unwrap();
        (r.to_csv(), r.to_json())
    };
    let one = mk(Some(1));
    assert_eq!(one, mk(Some(4)));
    assert_eq!(one, mk(None));
}
