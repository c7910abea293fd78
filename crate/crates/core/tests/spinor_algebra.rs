use nalgebra::Matrix2;
use nullwave_core::fields::factorize_gradient;
use nullwave_core::spinor::{
    complex_vec_to_spinmat, null_decompose, solve_annihilator, spinmat_to_complex_vec, spinmat_to_vec, vec_to_spinmat,
};
use nullwave_core::{Complex64 as C, MinkVec, Role, SpinMat, Spinor, Variance};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -1e3..1e3f64
}

fn cplx() -> impl Strategy<Value = C> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| C::new(a, b))
}

fn vec4() -> impl Strategy<Value = MinkVec> {
    (coord(), coord(), coord(), coord()).prop_map(|(t, a, b, c)| MinkVec::new(t, a, b, c))
}

fn spinor_pair() -> impl Strategy<Value = (C, C)> {
    (cplx(), cplx()).prop_filter("nonzero", |(a, b)| a.norm() + b.norm() > 1e-3)
}

fn mat_dist(a: &SpinMat, b: &SpinMat) -> f64 {
    a.sub(b).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn det_is_half_the_interval(v in vec4()) {
        let det = vec_to_spinmat(&v).det();
        let expect = -0.5 * v.minkowski_norm();
        prop_assert!((det.re - expect).abs() <= 1e-12 * v.euclid_norm_sq().max(1.0));
        prop_assert!(det.im.abs() <= 1e-12 * v.euclid_norm_sq().max(1.0));
    }

    #[test]
    fn vector_matrix_roundtrip(v in vec4()) {
        let m = vec_to_spinmat(&v);
        prop_assert!(m.anti_hermitian_residual() <= 1e-14 * m.norm().max(1.0));
        let back = spinmat_to_vec(&m, 1e-12).unwrap();
        let d = (back - v).to_array().iter().fold(0.0_f64, |a, c| a.max(c.abs()));
        prop_assert!(d <= 1e-14 * v.max_abs().max(1.0));
    }

    #[test]
    fn eps_roundtrip_is_exact((a, b) in spinor_pair(), primed in any::<bool>()) {
        let s = if primed { Spinor::lower_primed(a, b) } else { Spinor::lower_unprimed(a, b) };
        prop_assert_eq!(s.raise().unwrap().lower().unwrap(), s);
        prop_assert_eq!(s.to_upper().to_lower(), s);
        // xi_A xi^A = 0 for every spinor
        prop_assert_eq!(s.contract(&s.to_upper()).unwrap(), C::new(0.0, 0.0));
    }

    #[test]
    fn factorization_inverts_outer((a, b) in spinor_pair(), (c, d) in spinor_pair()) {
        let xi = Spinor::lower_unprimed(a, b);
        let eta = Spinor::lower_primed(c, d);
        let g = SpinMat::outer(&xi, &eta, Role::Gradient);
        let (x2, e2) = factorize_gradient(&g, 1e-6).unwrap();
        prop_assert_eq!(x2.variance, Variance::LowerUnprimed);
        prop_assert_eq!(e2.variance, Variance::LowerPrimed);
        prop_assert!(mat_dist(&SpinMat::outer(&x2, &e2, Role::Gradient), &g) <= 1e-10 * g.norm());
        prop_assert!(x2.proportionality_defect(&xi) <= 1e-10);
        prop_assert!((x2.norm() - 1.0).abs() <= 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn annihilator_recovers_sigma((a, b) in spinor_pair(), (c, d) in spinor_pair()) {
        let xi = Spinor::lower_unprimed(a, b);
        let sigma = Spinor::upper_primed(c, d);
        let m = SpinMat::outer(&xi.to_upper(), &sigma, Role::Position);
        let back = solve_annihilator(&xi, &m, 1e-9).unwrap();
        let err = ((back.c[0] - c).norm_sqr() + (back.c[1] - d).norm_sqr()).sqrt();
        prop_assert!(err <= 1e-12 * sigma.norm().max(1.0));
    }

    #[test]
    fn null_vectors_decompose(a in -1e2..1e2f64, b in -1e2..1e2f64, c in -1e2..1e2f64, future in any::<bool>()) {
        let r = (a * a + b * b + c * c).sqrt();
        prop_assume!(r > 1e-6);
        let v = MinkVec::new(if future { r } else { -r }, a, b, c);
        let (lambda, rho) = null_decompose(&v, 1e-9).unwrap();
        prop_assert_eq!(lambda > 0.0, future);
        let rebuilt = SpinMat::outer(&rho, &rho.conj(), Role::Position).scale(C::from(lambda));
        prop_assert!(mat_dist(&rebuilt, &vec_to_spinmat(&v)) <= 1e-12 * r);
    }

    #[test]
    fn complex_correspondence_roundtrip(p in proptest::array::uniform4(cplx())) {
        let back = spinmat_to_complex_vec(&complex_vec_to_spinmat(&p));
        for k in 0..4 {
            prop_assert!((back[k] - p[k]).norm() <= 1e-14 * 20.0);
        }
    }
}

#[test]
fn rank_one_agrees_with_svd() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut c = || C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    for k in 0..500 {
        let m = [[c(), c()], [c(), c()]];
        // every other sample is forced to rank one
        let m = if k % 2 == 0 {
            [m[0], [m[0][0] * m[1][0], m[0][1] * m[1][0]]]
        } else {
            m
        };
        let sv = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]).singular_values();
        let rank_one_svd = sv[1].min(sv[0]) <= 1e-9 * sv[0].max(sv[1]);
        let ours = factorize_gradient(&SpinMat::new(m, Role::Gradient), 1e-6).is_ok();
        assert_eq!(ours, rank_one_svd, "sample {k}: singular values {sv:?}");
    }
}

#[test]
fn documented_examples() {
    let r = std::f64::consts::SQRT_2;
    let (lambda, rho) = null_decompose(&MinkVec::new(1.0, 1.0, 0.0, 0.0), 1e-12).unwrap();
    assert!((lambda - r).abs() < 1e-15);
    assert_eq!(rho.c, [C::new(1.0, 0.0), C::new(0.0, 0.0)]);
    assert!(null_decompose(&MinkVec::new(1.0, 0.0, 0.0, 0.0), 1e-9).is_err());
    assert!(null_decompose(&MinkVec::ZERO, 1e-9).is_err());
}
