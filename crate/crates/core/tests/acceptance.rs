//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints its own PASS/FAIL line; the process exits non-zero if any fail.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgame::classical::{BimatrixGame, MixedStrategy, Player};
use qgame::games::{
    ewl_nash_scan, invasion_threshold, mw_nash_scan, mw_payoffs, penny_unitary, pennyflip_round, win_probability,
    EwlSpec, EwlStrategy, MwSpec, PdPayoffs,
};
use qgame::linalg::{ComplexMatrix, StateVector};
use qgame::quantum::{
    entropy_rate_series, quantize_frequencies, quantum_replicator_correspondence, von_neumann_entropy,
    von_neumann_rhs, DensityMatrix,
};
use qgame::replicator::{integrate, lax_decomposition, lax_rhs, replicator_rhs, shannon_entropy, FrequencyVector};
use qgame::thermo::{default_step, entropy_derivatives, entropy_identity_check, gibbs_state, GibbsEnsemble};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || format!("took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> FrequencyVector {
    let w: Vec<f64> = (0..n).map(|_| -rng.random_range(1e-12..1.0f64).ln()).collect();
    let s: f64 = w.iter().sum();
    FrequencyVector::new(w.iter().map(|v| v / s).collect()).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..n).map(|_| rng.random_range(-10.0..10.0)).collect()).collect()
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&m + &m.adjoint()).scale_real(0.5)
}

fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
}

fn pd_replicator() -> Outcome {
    let start = Instant::now();
    let a = vec![vec![-1.0, -20.0], vec![0.0, -10.0]];
    let mut worst = 0.0_f64;
    for k in 0..100 {
        let x = k as f64 / 99.0;
        let rhs = replicator_rhs(&a, &FrequencyVector::binary(x).unwrap()).map_err(|e| e.to_string())?;
        let symbolic = -(9.0 * x - 10.0) * (x - 1.0) * x;
        worst = worst.max((rhs[0] - symbolic).abs());
    }
    ensure(worst < 1e-12, || format!("symbolic RHS deviation {worst:e}"))?;
    let mut last = 0.0_f64;
    for k in 1..=9 {
        let traj = integrate(&a, &FrequencyVector::binary(k as f64 / 10.0).unwrap(), 20.0, 1e-3)
            .map_err(|e| e.to_string())?;
        last = last.max(traj.last().as_slice()[0]);
    }
    ensure(last < 1e-3, || format!("cooperators at t=20: {last:e}"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("rhs dev {worst:.1e}, max x_C(20) {last:.1e}, {:.2} s", start.elapsed().as_secs_f64()))
}

fn lax_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut rhs_dev, mut tr_dev, mut idem_dev) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let n = rng.random_range(2..=5);
        let a = random_matrix(&mut rng, n);
        let x = random_simplex(&mut rng, n);
        let flow = lax_rhs(&a, &x).map_err(|e| e.to_string())?;
        let rhs = replicator_rhs(&a, &x).map_err(|e| e.to_string())?;
        for i in 0..n {
            rhs_dev = rhs_dev.max((flow[(i, i)] - rhs[i]).abs());
        }
        let d = lax_decomposition(&a, &x).map_err(|e| e.to_string())?;
        tr_dev = tr_dev.max((d.x.trace() - 1.0).abs());
        idem_dev = idem_dev.max(d.x.idempotence_error());
        ensure(d.x.is_symmetric(), || "X not symmetric".into())?;
    }
    ensure(rhs_dev < 1e-10, || format!("diag deviation {rhs_dev:e}"))?;
    ensure(tr_dev < 1e-10, || format!("trace deviation {tr_dev:e}"))?;
    ensure(idem_dev < 1e-8, || format!("idempotence deviation {idem_dev:e}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("diag dev {rhs_dev:.1e}, Tr dev {tr_dev:.1e}, X²-X {idem_dev:.1e}"))
}

fn same(s: &EwlStrategy, t: &EwlStrategy) -> bool {
    s.unitary().max_abs_diff(&t.unitary()) < 1e-9
}

fn ewl_shift() -> Outcome {
    let start = Instant::now();
    let classical = ewl_nash_scan(&EwlSpec::new(PdPayoffs::default(), 0.0).unwrap(), 64).map_err(|e| e.to_string())?;
    ensure(classical.len() == 1, || format!("{} equilibria at γ=0", classical.len()))?;
    let e = &classical[0];
    let d = EwlStrategy::defect();
    ensure(same(&e.a, &d) && same(&e.b, &d), || format!("γ=0 equilibrium is {e:?}"))?;
    ensure((e.payoff_a - 1.0).abs() < 1e-9 && (e.payoff_b - 1.0).abs() < 1e-9, || format!("payoffs {e:?}"))?;

    let quantum = ewl_nash_scan(&EwlSpec::maximally_entangled(PdPayoffs::default()), 64).map_err(|e| e.to_string())?;
    let q = EwlStrategy::quantum();
    let qq = quantum.iter().find(|e| same(&e.a, &q) && same(&e.b, &q)).ok_or("(Q,Q) missing at γ=π/2")?;
    ensure((qq.payoff_a - 3.0).abs() < 1e-9 && (qq.payoff_b - 3.0).abs() < 1e-9, || format!("payoffs {qq:?}"))?;
    ensure(!quantum.iter().any(|e| same(&e.a, &d) && same(&e.b, &d)), || "(D,D) still an equilibrium at γ=π/2".into())?;
    within(start.elapsed(), 30.0)?;
    Ok(format!(
        "γ=0: (D,D) unique over {} cells; γ=π/2: {} equilibria incl. (Q,Q); {:.2} s",
        e.cells,
        quantum.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn invasion() -> Outcome {
    let start = Instant::now();
    let spec = EwlSpec::maximally_entangled(PdPayoffs::default());
    let phi = invasion_threshold(&spec, 1e-6, 0.1, 1.0, 1e-10).map_err(|e| e.to_string())?;
    let target = (1.0 / 5.0_f64.sqrt()).asin();
    ensure((phi - target).abs() < 0.01, || format!("φ* = {phi}, expected {target}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("φ* = {phi:.6}, arcsin(1/√5) = {target:.6}"))
}

fn penny_flip() -> Outcome {
    let h = penny_unitary(C64::new(0.5_f64.sqrt(), 0.0), C64::new(0.5_f64.sqrt(), 0.0)).map_err(|e| e.to_string())?;
    let heads = DensityMatrix::pure(&StateVector::basis(2, 0));
    let mut worst = 0.0_f64;
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let out = pennyflip_round(&heads, (&h, &h), p).map_err(|e| e.to_string())?;
        worst = worst.max(1.0 - win_probability(&out));
    }
    ensure(worst < 1e-12, || format!("quantum loss probability {worst:e}"))?;
    let id = ComplexMatrix::identity(2);
    let classical = win_probability(&pennyflip_round(&heads, (&id, &id), 0.5).map_err(|e| e.to_string())?);
    ensure((classical - 0.5).abs() < 1e-12, || format!("classical win {classical}"))?;
    Ok(format!("quantum ε = {worst:.1e}, classical win {classical}"))
}

fn entropy_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pure_max = 0.0_f64;
    for n in 2..=6 {
        let amps: Vec<C64> = (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let psi = StateVector::normalized(amps).map_err(|e| e.to_string())?;
        pure_max = pure_max.max(von_neumann_entropy(&DensityMatrix::pure(&psi)));
    }
    ensure(pure_max < 1e-12, || format!("S(pure) = {pure_max:e}"))?;
    for n in 2..=4 {
        let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(n));
        ensure((s - (n as f64).ln()).abs() < 1e-12, || format!("S(I/{n}) = {s}"))?;
    }
    let mut diag_dev = 0.0_f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let x = random_simplex(&mut rng, n);
        let rho = DensityMatrix::diagonal(x.as_slice()).map_err(|e| e.to_string())?;
        diag_dev = diag_dev.max((von_neumann_entropy(&rho) - shannon_entropy(x.as_slice())).abs());
    }
    ensure(diag_dev < 1e-12, || format!("S(diag x) - H(x) = {diag_dev:e}"))?;
    Ok(format!("S(pure) ≤ {pure_max:.1e}, |S(diag x) − H(x)| ≤ {diag_dev:.1e}"))
}

fn bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = rng.random_range(2..=5);
        let x = random_simplex(&mut rng, n);
        let a = random_matrix(&mut rng, n);
        let rho = quantize_frequencies(&x);
        let d = lax_decomposition(&a, &x).map_err(|e| e.to_string())?;
        for i in 0..n {
            worst = worst.max((rho.populations()[i] - x.as_slice()[i]).abs());
            for j in 0..n {
                let z = rho.matrix().get(i, j);
                worst = worst.max((z.re - d.x.matrix()[(i, j)]).abs()).max(z.im.abs());
            }
        }
        let hbar = rng.random_range(0.1..3.0);
        let c = quantum_replicator_correspondence(&a, &x, hbar).map_err(|e| e.to_string())?;
        worst = worst.max(c.lax_flow.max_abs_diff(&c.von_neumann_flow));
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn gibbs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut id_dev, mut fd_dev) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let n = rng.random_range(1..=8);
        let e: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let beta = rng.random_range(0.05..5.0);
        let ens = GibbsEnsemble::new(e, beta).map_err(|e| e.to_string())?;
        let (s, s_id) = entropy_identity_check(&ens);
        id_dev = id_dev.max((s - s_id).abs());
        let d = entropy_derivatives(&ens, default_step(beta)).map_err(|e| e.to_string())?;
        fd_dev = fd_dev.max(d.ds_dbeta.error());
    }
    ensure(id_dev < 1e-10, || format!("identity deviation {id_dev:e}"))?;
    ensure(fd_dev < 1e-6, || format!("∂S/∂β deviation {fd_dev:e}"))?;
    let uniform = gibbs_state(&GibbsEnsemble::new(vec![-1.0, 0.3, 2.0, 9.0, 4.0], 0.0).unwrap());
    let u_dev = uniform.as_slice().iter().map(|p| (p - 0.2).abs()).fold(0.0, f64::max);
    ensure(u_dev < 1e-14, || format!("β=0 deviation {u_dev:e}"))?;
    Ok(format!("identity {id_dev:.1e}, ∂S/∂β {fd_dev:.1e}, β=0 {u_dev:.1e}"))
}

fn entropy_rate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut exact_max, mut dev_max) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let n = rng.random_range(2..=4);
        let rho = random_density(&mut rng, n);
        let h = random_hermitian(&mut rng, n);
        let flow = von_neumann_rhs(&h, &rho, 1.0).map_err(|e| e.to_string())?;
        let r = entropy_rate_series(&rho, &flow).map_err(|e| e.to_string())?;
        ensure(r.series_value.is_finite() && r.deviation.is_finite(), || "non-finite report".into())?;
        exact_max = exact_max.max(r.exact_value.abs());
        dev_max = dev_max.max(r.deviation.abs());
    }
    ensure(exact_max < 1e-9, || format!("exact rate {exact_max:e} under unitary flow"))?;
    Ok(format!("exact rate ≤ {exact_max:.1e}; series deviation up to {dev_max:.3e} (reported only)"))
}

fn marinatto_weber() -> Outcome {
    let product = MwSpec::battle_of_sexes(StateVector::basis(4, 0)).map_err(|e| e.to_string())?;
    let [al, be, ga, de] = product.payoff_coeffs_a;
    let [al_b, be_b, ga_b, de_b] = product.payoff_coeffs_b;
    let game = BimatrixGame::new(vec![vec![al, be], vec![ga, de]], vec![vec![al_b, ga_b], vec![be_b, de_b]])
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for i in 0..=10 {
        for j in 0..=10 {
            let (p, q) = (i as f64 / 10.0, j as f64 / 10.0);
            let x = MixedStrategy::new(vec![p, 1.0 - p]).unwrap();
            let y = MixedStrategy::new(vec![q, 1.0 - q]).unwrap();
            let (pa, pb) = mw_payoffs(&product, p, q).map_err(|e| e.to_string())?;
            worst = worst.max((pa - game.expected_payoff(&x, &y, Player::A).unwrap()).abs());
            worst = worst.max((pb - game.expected_payoff(&x, &y, Player::B).unwrap()).abs());
        }
    }
    ensure(worst < 1e-12, || format!("classical embedding deviation {worst:e}"))?;
    let bell = StateVector::normalized(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
        .unwrap();
    let eq = mw_nash_scan(&MwSpec::battle_of_sexes(bell).map_err(|e| e.to_string())?, 101).map_err(|e| e.to_string())?;
    ensure(!eq.is_empty(), || "no equilibria".into())?;
    let gap = eq.iter().map(|e| (e.payoff_a - e.payoff_b).abs()).fold(0.0, f64::max);
    ensure(gap < 1e-9, || format!("|P_A − P_B| = {gap:e}"))?;
    Ok(format!("embedding {worst:.1e}; {} entangled equilibria, |P_A − P_B| ≤ {gap:.1e}", eq.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("PD replicator convergence", pd_replicator),
        ("commutator/vector equivalence", lax_equivalence),
        ("EWL equilibrium shift", ewl_shift),
        ("invasion threshold", invasion),
        ("penny flip", penny_flip),
        ("entropy bounds and reduction", entropy_bounds),
        ("quantization bridge", bridge),
        ("Gibbs identities", gibbs),
        ("entropy-rate diagnostic", entropy_rate),
        ("MW classical embedding", marinatto_weber),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
