use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qgame::classical::{BimatrixGame, MixedStrategy};
use qgame::games::{EwlGame, EwlSpec, EwlStrategy, MwSpec, PdPayoffs, mw_payoffs};
use qgame::linalg::{partial_trace, tensor_product, ComplexMatrix, StateVector, Subsystem};
use qgame::quantum::{evolve_von_neumann, DensityMatrix};
use qgame::replicator::{integrate, lax_decomposition, lax_rhs, replicator_rhs, FrequencyVector};
use qgame::thermo::{default_step, entropy_derivatives, GibbsEnsemble};

fn simplex(n: usize) -> impl Strategy<Value = FrequencyVector> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        FrequencyVector::new(w.iter().map(|v| v / s).collect()).unwrap()
    })
}

fn game_and_point() -> impl Strategy<Value = (Vec<Vec<f64>>, FrequencyVector)> {
    (2usize..=5).prop_flat_map(|n| (prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), n), simplex(n)))
}

fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let g = ComplexMatrix::from_fn(n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1));
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lax_diagonal_is_replicator_field((a, x) in game_and_point()) {
        let flow = lax_rhs(&a, &x).unwrap();
        let rhs = replicator_rhs(&a, &x).unwrap();
        for i in 0..x.len() {
            prop_assert!((flow[(i, i)] - rhs[i]).abs() < 1e-10);
        }
        let d = lax_decomposition(&a, &x).unwrap();
        prop_assert!((d.x.trace() - 1.0).abs() < 1e-10);
        prop_assert!(d.x.idempotence_error() < 1e-8);
        prop_assert!(d.x.is_symmetric());
    }

    #[test]
    fn replicator_field_is_tangent((a, x) in game_and_point()) {
        let rhs = replicator_rhs(&a, &x).unwrap();
        prop_assert!(rhs.iter().sum::<f64>().abs() < 1e-10);
    }

    #[test]
    fn trajectories_stay_on_simplex((a, x) in game_and_point()) {
        let a: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| v / 10.0).collect()).collect();
        let traj = integrate(&a, &x, 2.0, 1e-2).unwrap();
        for s in &traj.states {
            prop_assert!(s.as_slice().iter().all(|&v| v >= 0.0));
            prop_assert!((s.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn strict_ess_is_nash(a in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 3)) {
        let game = BimatrixGame::symmetric(a).unwrap();
        let nash = game.pure_nash_equilibria();
        for k in 0..3 {
            if game.is_ess(&MixedStrategy::pure(3, k), &[]).unwrap().is_ess {
                prop_assert!(nash.contains(&(k, k)));
            }
        }
    }

    #[test]
    fn von_neumann_flow_keeps_trace_and_spectrum(rho in density(3), hs in prop::collection::vec(-1.0f64..1.0, 9)) {
        let g = ComplexMatrix::from_fn(3, |i, j| C64::new(hs[i * 3 + j], hs[(j * 3 + i + 4) % 9]));
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let traj = evolve_von_neumann(&h, &rho, 1.0, 1.0, 1e-2).unwrap();
        let last = DensityMatrix::new(traj.states.last().unwrap().clone()).unwrap();
        for (x, y) in rho.spectrum().iter().zip(last.spectrum()) {
            prop_assert!((x - y).abs() < 1e-8);
        }
        prop_assert!(traj.trace.iter().all(|t| (t - 1.0).abs() < 1e-10));
    }

    #[test]
    fn partial_trace_of_product(a in density(2), b in density(3)) {
        let ab = tensor_product(a.matrix(), b.matrix());
        prop_assert!(partial_trace(&ab, (2, 3), Subsystem::A).unwrap().max_abs_diff(a.matrix()) < 1e-12);
        prop_assert!(partial_trace(&ab, (2, 3), Subsystem::B).unwrap().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn ewl_probabilities_sum_to_one(
        gamma in 0.0f64..=std::f64::consts::FRAC_PI_2,
        ta in 0.0f64..=std::f64::consts::PI, pa in 0.0f64..=std::f64::consts::FRAC_PI_2,
        tb in 0.0f64..=std::f64::consts::PI, pb in 0.0f64..=std::f64::consts::FRAC_PI_2,
    ) {
        let game = EwlGame::new(EwlSpec::new(PdPayoffs::default(), gamma).unwrap());
        let p = game.probabilities(&EwlStrategy::new(ta, pa).unwrap(), &EwlStrategy::new(tb, pb).unwrap());
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mw_constant_payoffs(c in -5.0f64..5.0, amps in prop::collection::vec(-1.0f64..1.0, 4), p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        prop_assume!(amps.iter().map(|v| v * v).sum::<f64>() > 1e-3);
        let psi = StateVector::normalized(amps.iter().map(|&v| C64::new(v, 0.0)).collect()).unwrap();
        let spec = MwSpec::new(psi, [c; 4], [c; 4]).unwrap();
        let (a, b) = mw_payoffs(&spec, p, q).unwrap();
        prop_assert!((a - c).abs() < 1e-12 && (b - c).abs() < 1e-12);
    }

    #[test]
    fn entropy_falls_with_beta(e in prop::collection::vec(-5.0f64..5.0, 1..6), beta in 0.01f64..5.0) {
        let d = entropy_derivatives(&GibbsEnsemble::new(e, beta).unwrap(), default_step(beta)).unwrap();
        prop_assert!(d.ds_dbeta.analytic <= 0.0);
    }
}
