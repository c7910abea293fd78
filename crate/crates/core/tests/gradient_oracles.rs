use std::sync::Arc;

use nullwave_core::builtins::{basic_surface, kerr_domain};
use nullwave_core::kerr::rational::{Poly, RationalFn};
use nullwave_core::kerr::{kerr_gradient, kerr_hessian, kerr_path, kerr_solve, MeromorphicTriple};
use nullwave_core::twistor::{incidence_partials, solve_incidence, BiPoly, NewtonConfig, SurfaceChart, TwistorSurface};
use nullwave_core::{AxisSpec, Complex64 as C, GridSpec, MinkVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FD_H: f64 = 1e-5;

fn rel_err(a: &[C; 4], b: &[C; 4]) -> f64 {
    let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn near_kerr_base(rng: &mut ChaCha8Rng) -> MinkVec {
    MinkVec::new(
        rng.gen_range(-0.2..0.2),
        rng.gen_range(-0.2..0.2),
        rng.gen_range(0.8..1.2),
        rng.gen_range(-0.2..0.2),
    )
}

fn fd_gradient(solve: impl Fn(&MinkVec) -> C, x: &MinkVec) -> [C; 4] {
    let mut g = [C::new(0.0, 0.0); 4];
    for (a, ga) in g.iter_mut().enumerate() {
        let e = MinkVec::axis(a) * FD_H;
        *ga = (solve(&(*x + e)) - solve(&(*x - e))) / (2.0 * FD_H);
    }
    g
}

/// `f = z + a`, `g = b z`, `h = 1 + c z` with small random coefficients.
fn random_triple(rng: &mut ChaCha8Rng) -> MeromorphicTriple {
    let mut c = |s: f64| C::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
    let f = Poly::new(vec![c(0.2), C::new(1.0, 0.0)]);
    let g = Poly::new(vec![C::new(0.0, 0.0), c(0.3)]);
    let h = Poly::new(vec![C::new(1.0, 0.0), c(0.2)]);
    MeromorphicTriple::new(RationalFn::poly(f), RationalFn::poly(g), RationalFn::poly(h)).unwrap()
}

fn null_and_harmonic(t: &MeromorphicTriple, z: C, x: &MinkVec) -> (f64, f64) {
    let g = kerr_gradient(t, z, x).unwrap();
    let h = kerr_hessian(t, z, x).unwrap();
    let quad = -g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
    let wave = -h[0][0] + h[1][1] + h[2][2] + h[3][3];
    let scale = g.iter().map(|c| c.norm_sqr()).sum::<f64>().max(1.0);
    (quad.norm() / scale, wave.norm())
}

#[test]
fn kerr_gradient_matches_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let triples = [MeromorphicTriple::basic(), random_triple(&mut rng)];
    for t in &triples {
        for _ in 0..20 {
            let x = near_kerr_base(&mut rng);
            let root = kerr_solve(t, &x, None).unwrap();
            let solve = |y: &MinkVec| kerr_solve(t, y, Some(root.z)).unwrap().z;
            let fd = fd_gradient(solve, &x);
            let g = kerr_gradient(t, root.z, &x).unwrap();
            assert!(rel_err(&g, &fd) <= 1e-6, "at {x}: {g:?} vs {fd:?}");
        }
    }
}

#[test]
fn kerr_solutions_are_null_for_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let t = random_triple(&mut rng);
        for _ in 0..10 {
            let x = near_kerr_base(&mut rng);
            let root = kerr_solve(&t, &x, None).unwrap();
            let (quad, wave) = null_and_harmonic(&t, root.z, &x);
            assert!(quad <= 1e-12 && wave <= 1e-9, "at {x}: {quad:e} {wave:e}");
        }
    }
}

#[test]
fn kerr_basic_is_null_on_a_fine_grid() {
    let t = MeromorphicTriple::basic();
    let d = kerr_domain();
    let grid = GridSpec::new(
        AxisSpec::new(d.lo[0], d.hi[0], 7),
        AxisSpec::new(d.lo[1], d.hi[1], 7),
        AxisSpec::new(d.lo[2], d.hi[2], 7),
        AxisSpec::new(d.lo[3], d.hi[3], 7),
    );
    assert_eq!(grid.len(), 7usize.pow(4));
    for x in grid.points() {
        let z = kerr_solve(&t, &x, None).unwrap().z;
        let (quad, wave) = null_and_harmonic(&t, z, &x);
        assert!(quad <= 1e-12 && wave <= 1e-9, "at {x}: {quad:e} {wave:e}");
    }
}

#[test]
fn kerr_paths_are_continuous() {
    let t = MeromorphicTriple::basic();
    let xs: Vec<MinkVec> = (0..=200)
        .map(|k| {
            let s = k as f64 / 200.0;
            MinkVec::new(-0.2 + 0.4 * s, 0.1 * s, 0.8 + 0.4 * s, -0.2 + 0.3 * s)
        })
        .collect();
    let roots = kerr_path(&t, &xs, None).unwrap();
    assert!((roots[0].z - kerr_solve(&t, &xs[0], None).unwrap().z).norm() < 1e-12);
    for w in roots.windows(2) {
        assert!((w[1].z - w[0].z).norm() < 0.05, "jump {:?} -> {:?}", w[0].z, w[1].z);
    }
}

fn curved_surface() -> TwistorSurface {
    let a = BiPoly::w().add(&BiPoly::monomial(C::new(0.2, 0.1), 2, 0));
    let b = BiPoly::monomial(C::new(0.1, -0.2), 1, 1);
    TwistorSurface::normal(a, b)
}

fn near_surface_base(rng: &mut ChaCha8Rng) -> MinkVec {
    MinkVec::new(
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(0.7..1.3),
        rng.gen_range(-0.5..0.5),
    )
}

#[test]
fn incidence_partials_match_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let cfg = NewtonConfig::default();
    let surfaces: [Arc<dyn SurfaceChart>; 2] = [Arc::new(basic_surface()), Arc::new(curved_surface())];
    for s in &surfaces {
        let mut checked = 0;
        while checked < 20 {
            let x = near_surface_base(&mut rng);
            let Ok(root) = solve_incidence(s.as_ref(), &x, None, &cfg) else {
                continue;
            };
            let p = incidence_partials(s.as_ref(), root.z, root.w, &x).unwrap();
            assert!(
                p.product_identity().norm() <= 1e-10,
                "identity {:?}",
                p.product_identity()
            );
            let solve = |y: &MinkVec| solve_incidence(s.as_ref(), y, Some((root.z, root.w)), &cfg).unwrap().z;
            let fd = fd_gradient(solve, &x);
            let g = p.to_gradient();
            assert!(rel_err(&g, &fd) <= 1e-6, "at {x}: {g:?} vs {fd:?}");
            checked += 1;
        }
    }
}

#[test]
fn surface_basic_partials_in_closed_form() {
    // z = -v / qbar
    let s = basic_surface();
    let x = MinkVec::new(0.3, -0.2, 0.9, 0.4);
    let root = solve_incidence(&s, &x, None, &NewtonConfig::default()).unwrap();
    let (_, v, q) = x.light_cone();
    let qb = q.conj();
    let p = incidence_partials(&s, root.z, root.w, &x).unwrap();
    assert!(p.z_u.norm() < 1e-12);
    assert!((p.z_v + 1.0 / qb).norm() < 1e-12);
    assert!(p.z_q.norm() < 1e-12);
    assert!((p.z_qbar - v / (qb * qb)).norm() < 1e-12);
}
