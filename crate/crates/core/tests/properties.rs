//! Property tests for the algebraic invariants of the matrix layer and
//! the frame machinery.

use hsframe_core::generators::{gen_gaussian_hs, gen_test_vectors, parsevalize_hs};
use hsframe_core::hs_frame::make_alternate_dual;
use hsframe_core::identities::{Evaluator, ToleranceConfig};
use hsframe_core::{Complex64, ComplexMatrix, HermitianFn, SubsetMask};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random matrix with entries in the unit box, shapes up to `max_dim`.
fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(
            move |entries| {
                ComplexMatrix::from_fn(rows, cols, |i, j| {
                    let (re, im) = entries[i * cols + j];
                    c(re, im)
                })
            },
        )
    })
}

fn square_strategy(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |entries| {
            ComplexMatrix::from_fn(n, n, |i, j| {
                let (re, im) = entries[i * n + j];
                c(re, im)
            })
        })
    })
}

/// Two random matrices sharing one shape.
fn matrix_pair_strategy(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(rows, cols)| {
        let entries = proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols);
        (entries.clone(), entries).prop_map(move |(ea, eb)| {
            let build = |entries: &[(f64, f64)]| {
                ComplexMatrix::from_fn(rows, cols, |i, j| {
                    let (re, im) = entries[i * cols + j];
                    c(re, im)
                })
            };
            (build(&ea), build(&eb))
        })
    })
}

/// Small random HS frame described by generator parameters.
fn frame_strategy() -> impl Strategy<Value = (hsframe_core::hs_frame::HSFrame, u64)> {
    (1usize..=4, 1usize..=2, 1usize..=4, 0u64..1000).prop_map(|(n, m, count, seed)| {
        (gen_gaussian_hs(n, m, count, seed).unwrap(), seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schatten_norms_decrease_in_p(m in matrix_strategy(6)) {
        let grid = [1.0, 1.5, 2.0, 3.0, 8.0, f64::INFINITY];
        let norms: Vec<f64> = grid
            .iter()
            .map(|&p| m.schatten_norm(p).unwrap())
            .collect();
        for w in norms.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-10 * w[0].max(1.0), "norms {norms:?}");
        }
    }

    #[test]
    fn trace_inner_with_self_is_squared_norm(m in matrix_strategy(6)) {
        let ip = m.trace_inner(&m).unwrap();
        let scale = m.frobenius_norm_sq().max(1.0);
        prop_assert!((ip.re - m.frobenius_norm_sq()).abs() <= 1e-12 * scale);
        prop_assert!(ip.im.abs() <= 1e-13 * scale);
    }

    #[test]
    fn trace_inner_is_conjugate_symmetric((a, b) in matrix_pair_strategy(5)) {
        let ab = a.trace_inner(&b).unwrap();
        let ba = b.trace_inner(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn svd_reconstructs_up_to_twelve(m in matrix_strategy(12)) {
        let svd = m.svd().unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(svd.reconstruct().distance(&m) <= 1e-12 * scale);
        for w in svd.singular_values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(svd.singular_values.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn adjoint_reverses_products((a, b) in matrix_pair_strategy(5)) {
        let lhs = (&a * &b.adjoint()).adjoint();
        let rhs = &b * &a.adjoint();
        prop_assert!(lhs.distance(&rhs) < 1e-12 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn pseudoinverse_satisfies_moore_penrose(m in matrix_strategy(5)) {
        let p = m.pseudoinverse(None).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        let m_p_m = &(&m * &p) * &m;
        prop_assert!(m_p_m.distance(&m) <= 1e-10 * scale);
        let p_m_p = &(&p * &m) * &p;
        prop_assert!(p_m_p.distance(&p) <= 1e-10 * p.frobenius_norm().max(1.0));
        let mp = &m * &p;
        prop_assert!(mp.hermitian_deviation() <= 1e-10 * mp.frobenius_norm().max(1.0));
        let pm = &p * &m;
        prop_assert!(pm.hermitian_deviation() <= 1e-10 * pm.frobenius_norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spectral_functions_compose_on_psd_matrices(a in square_strategy(5)) {
        // A^H A + I is Hermitian positive definite.
        let psd = &(&a.adjoint() * &a) + &ComplexMatrix::identity(a.rows());
        let scale = psd.frobenius_norm().max(1.0);
        let sqrt = psd.hermitian_fn(HermitianFn::Sqrt).unwrap();
        prop_assert!((&sqrt * &sqrt).distance(&psd) <= 1e-11 * scale);
        let inv = psd.hermitian_fn(HermitianFn::Inverse).unwrap();
        let eye = ComplexMatrix::identity(psd.rows());
        prop_assert!((&psd * &inv).distance(&eye) <= 1e-11 * scale);
        let inv_sqrt = psd.hermitian_fn(HermitianFn::InvSqrt).unwrap();
        prop_assert!((&inv_sqrt * &inv_sqrt).distance(&inv) <= 1e-11 * inv.frobenius_norm().max(1.0));
    }

    #[test]
    fn partial_operators_always_split((frame, seed) in frame_strategy(), word in 0u64..u64::MAX) {
        let k = SubsetMask::from_word(frame.len(), word & ((1 << frame.len()) - 1)).unwrap();
        let sk = frame.partial_operator(&k).unwrap();
        let skc = frame.partial_operator(&k.complement()).unwrap();
        let s = frame.frame_operator();
        prop_assert!(
            (&sk + &skc).distance(s) <= 1e-13 * s.frobenius_norm().max(1.0),
            "seed {seed}"
        );
    }

    #[test]
    fn parseval_reports_swap_under_complementation(
        (raw, seed) in frame_strategy(),
        word in 0u64..u64::MAX,
    ) {
        prop_assume!(raw.len() * raw.target_side() * raw.target_side() >= raw.domain_dim());
        prop_assume!(raw.is_frame().unwrap());
        let frame = parsevalize_hs(&raw).unwrap();
        let ev = Evaluator::parseval(&frame, ToleranceConfig::default()).unwrap();
        let f = &gen_test_vectors(frame.domain_dim(), 4, seed)[3.min(frame.domain_dim())];
        let ve = ev.prepare(f).unwrap();
        let k = SubsetMask::from_word(frame.len(), word & ((1 << frame.len()) - 1)).unwrap();
        let r = ve.parseval_identity(&k).unwrap();
        let r_c = ve.parseval_identity(&k.complement()).unwrap();
        prop_assert!(r.pass && r_c.pass);
        prop_assert!((r.lhs - r_c.rhs).norm() <= 1e-12 * r.scale);
        prop_assert!((r.rhs - r_c.lhs).norm() <= 1e-12 * r.scale);
        let i = ve.parseval_inequality(&k).unwrap();
        let i_c = ve.parseval_inequality(&k.complement()).unwrap();
        prop_assert!(i.pass && i_c.pass);
        prop_assert!((i.lhs - i_c.rhs).norm() <= 1e-12 * i.scale);
    }

    #[test]
    fn duality_survives_perturbation_scales(
        (raw, seed) in frame_strategy(),
        scale_step in 0usize..4,
    ) {
        prop_assume!(raw.len() * raw.target_side() * raw.target_side() >= raw.domain_dim());
        prop_assume!(raw.is_frame().unwrap());
        let frame = parsevalize_hs(&raw).unwrap();
        let scale = [0.0, 0.2, 1.0, 3.0][scale_step];
        let result = make_alternate_dual(&frame, seed, scale).unwrap();
        let tol = hsframe_core::hs_frame::duality_tolerance(frame.domain_dim());
        let check = hsframe_core::hs_frame::is_alternate_dual_hs(
            &frame,
            result.pair.dual(),
            tol,
        )
        .unwrap();
        prop_assert!(check.holds, "residual {}", check.residual);
    }
}
