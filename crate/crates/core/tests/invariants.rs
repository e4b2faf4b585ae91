//! Frame-independence and consistency gates: unitary invariance of scalar
//! outputs, the d² / Jacobi equivalence, real-presentation round trips, and
//! property-based checks of the basic tensor symmetries.

use hermlie::random;
use hermlie::tensor::C64;
use hermlie::{
    almost_abelian_build, chern_curvature, chern_torsion, classify, codim2_build,
    constant_mixed_test, dphi_squared_residual, first_ricci, fixture, from_real_presentation,
    is_btp, jacobi_residual, mixed_value, real_presentation, salamon_pattern_residual,
    streets_tian, streets_tian_rank, symmetrize, unimodularity_defect,
    btp_symmetrization_residual, Fixture, HermitianLieAlgebra, MixedParams,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture_algebra(name: &str) -> HermitianLieAlgebra {
    match fixture(name).unwrap() {
        Fixture::Algebra(a) => a,
        _ => panic!("{name} is pointwise"),
    }
}

fn test_algebras(seed: u64) -> Vec<HermitianLieAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        fixture_algebra("kodaira"),
        fixture_algebra("sl2c"),
        fixture_algebra("heisenberg"),
        HermitianLieAlgebra::abelian(2),
    ];
    for n in 2..=3usize {
        let p = random::almost_abelian(n, &mut rng, true);
        out.push(almost_abelian_build(&p).unwrap());
        let p = random::codim2(n, &mut rng, true);
        out.push(codim2_build(&p, 1e-8).unwrap());
    }
    out
}

#[test]
fn d2_residual_equals_jacobi_residual_on_valid_instances() {
    for alg in test_algebras(0xD2) {
        let jac = jacobi_residual(&alg);
        let d2 = dphi_squared_residual(&alg);
        assert!(jac <= 1e-12, "test instances must be valid");
        assert!((jac - d2).abs() <= 1e-12);
    }
}

#[test]
fn scalar_outputs_are_unitary_invariant() {
    let mp = MixedParams::new(0.6, -0.8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1417);
    for alg in test_algebras(0x5CA1) {
        let n = alg.n();
        let t = chern_torsion(&alg);
        let r = chern_curvature(&alg);
        let base = (
            jacobi_residual(&alg),
            unimodularity_defect(&alg),
            t.frobenius(),
            r.frobenius(),
            symmetrize(&r).frobenius(),
            first_ricci(&r).frobenius(),
            streets_tian_rank(&streets_tian(&t), 1e-9),
            constant_mixed_test(&alg, &mp, 1e-9).is_constant,
        );
        for _ in 0..5 {
            let u = random::unitary(n, &mut rng);
            let conj = alg.conjugated(&u).unwrap();
            let tc = chern_torsion(&conj);
            let rc = chern_curvature(&conj);
            assert!(jacobi_residual(&conj) <= base.0 + 1e-9);
            assert!((unimodularity_defect(&conj) - base.1).abs() <= 1e-9);
            assert!((tc.frobenius() - base.2).abs() <= 1e-9);
            assert!((rc.frobenius() - base.3).abs() <= 1e-9);
            assert!((symmetrize(&rc).frobenius() - base.4).abs() <= 1e-9);
            assert!((first_ricci(&rc).frobenius() - base.5).abs() <= 1e-9);
            assert_eq!(streets_tian_rank(&streets_tian(&tc), 1e-9), base.6);
            let verdict = constant_mixed_test(&conj, &mp, 1e-9);
            assert_eq!(verdict.is_constant, base.7);
        }
    }
}

#[test]
fn classification_is_unitary_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1A5);
    for alg in test_algebras(0xC1A5) {
        let flags = classify(&alg, 1e-9);
        for _ in 0..3 {
            let u = random::unitary(alg.n(), &mut rng);
            let conj = alg.conjugated(&u).unwrap();
            assert_eq!(classify(&conj, 1e-9), flags);
        }
    }
}

#[test]
fn symmetrize_commutes_with_unitary_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E11);
    let alg = fixture_algebra("kodaira");
    let u = random::unitary(2, &mut rng);
    let conj = alg.conjugated(&u).unwrap();
    let lhs = symmetrize(&chern_curvature(&conj));
    // conjugate the symmetrized tensor of the original algebra by hand:
    // R̃_{p q̄ r s̄} = Σ U_{pa} conj(U_{qb}) U_{rc} conj(U_{sd}) R̂_{a b̄ c d̄}
    let rhat = symmetrize(&chern_curvature(&alg));
    let n = alg.n();
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let mut acc = C64::ZERO;
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                for d in 0..n {
                                    acc += u[(p, a)]
                                        * u[(q, b)].conj()
                                        * u[(r, c)]
                                        * u[(s, d)].conj()
                                        * rhat.get(a, b, c, d);
                                }
                            }
                        }
                    }
                    worst = worst.max((acc - lhs.get(p, q, r, s)).norm());
                }
            }
        }
    }
    assert!(worst <= 1e-12);
}

#[test]
fn real_presentation_roundtrip_preserves_invariant_scalars() {
    for alg in test_algebras(0x27) {
        let rp = real_presentation(&alg);
        let rebuilt = from_real_presentation(&rp, 1e-9).unwrap();
        assert!(jacobi_residual(&rebuilt) <= 1e-9);
        let t0 = chern_torsion(&alg).frobenius();
        let t1 = chern_torsion(&rebuilt).frobenius();
        assert!((t0 - t1).abs() <= 1e-9, "torsion norm {t0} vs {t1}");
        let r0 = chern_curvature(&alg).frobenius();
        let r1 = chern_curvature(&rebuilt).frobenius();
        assert!((r0 - r1).abs() <= 1e-9, "curvature norm {r0} vs {r1}");
    }
}

#[test]
fn heisenberg_real_presentation_recovers_complex_heisenberg() {
    // The rebuilt frame may differ by a unitary change, so compare
    // frame-independent scalars: Jacobi 0, Chern-flat, torsion norm √2,
    // and D = 0 (a frame-independent property of complex Lie groups).
    let alg = fixture_algebra("heisenberg");
    let rebuilt = from_real_presentation(&real_presentation(&alg), 1e-9).unwrap();
    assert!(jacobi_residual(&rebuilt) <= 1e-12);
    assert!(chern_curvature(&rebuilt).max_abs() <= 1e-12);
    assert!(rebuilt.d().max_abs() <= 1e-12);
    let t = chern_torsion(&rebuilt).frobenius();
    assert!((t - std::f64::consts::SQRT_2).abs() <= 1e-12);
}

#[test]
fn btp_gate_on_conjugated_sl2c() {
    // BTP is frame independent; the symmetrization identity must keep
    // holding after a unitary change of frame.
    let mut rng = ChaCha8Rng::seed_from_u64(0xB7B);
    let alg = fixture_algebra("sl2c");
    for _ in 0..5 {
        let u = random::unitary(3, &mut rng);
        let conj = alg.conjugated(&u).unwrap();
        assert!(is_btp(&conj, 1e-10));
        assert!(btp_symmetrization_residual(&conj, 1e-9).unwrap() <= 1e-10);
    }
}

#[test]
fn salamon_pattern_abelian_any_split() {
    let alg = HermitianLieAlgebra::abelian(4);
    for r in 0..=4 {
        assert_eq!(salamon_pattern_residual(&alg, r).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curvature_pair_symmetry_and_ricci_hermitian(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::almost_abelian(n, &mut rng, false);
        let alg = almost_abelian_build(&p).unwrap();
        let r = chern_curvature(&alg);
        prop_assert!(r.pair_symmetry_residual() <= 1e-12);
        let rhat = symmetrize(&r);
        // symmetric under i↔k and j↔l
        for (i, j, k, l) in r.tensor().indices() {
            prop_assert!((rhat.get(i, j, k, l) - rhat.get(k, j, i, l)).norm() <= 1e-13);
            prop_assert!((rhat.get(i, j, k, l) - rhat.get(i, l, k, j)).norm() <= 1e-13);
        }
    }

    #[test]
    fn mixed_value_scale_invariance(seed in any::<u64>(), scale_re in -3.0f64..3.0, scale_im in -3.0f64..3.0) {
        prop_assume!(scale_re.abs() + scale_im.abs() > 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::codim2(3, &mut rng, false);
        let alg = codim2_build(&p, 1e-8).unwrap();
        let r = chern_curvature(&alg);
        let ric = first_ricci(&r);
        let mp = MixedParams::new(1.3, -0.4).unwrap();
        let x = random::unit_vector(3, &mut rng);
        let t = C64::new(scale_re, scale_im);
        let tx: Vec<C64> = x.iter().map(|z| z * t).collect();
        let a = mixed_value(&r, &ric, &mp, &x).unwrap();
        let b = mixed_value(&r, &ric, &mp, &tx).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn flat_locus_draws_are_constant(seed in any::<u64>()) {
        // λ = 0, v = 0, normal A: Chern flat, so every mixed curvature is
        // the constant zero.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random::normal_matrix(2, &mut rng);
        let p = hermlie::AlmostAbelianParams { n: 3, lambda: 0.0, v: vec![C64::ZERO; 2], a };
        let alg = almost_abelian_build(&p).unwrap();
        let verdict = constant_mixed_test(&alg, &MixedParams::new(0.3, 1.1).unwrap(), 1e-9);
        prop_assert!(verdict.is_constant);
        prop_assert!(verdict.c.abs() <= 1e-10);
    }
}
