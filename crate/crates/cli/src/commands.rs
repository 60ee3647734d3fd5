//! Input documents and runners, one per subcommand.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qgame::classical::{BimatrixGame, EssVerdict, GameDocument, MinimaxSolution, MixedStrategy, PureProfile};
use qgame::format::fmt_f64;
use qgame::games::{
    ewl_nash_scan, ewl_payoff_surface, invasion_threshold, mw_nash_scan, pennyflip_round, win_probability,
    EwlSpec, EwlStrategy, MwEquilibrium, MwGame, MwSpec, PdPayoffs,
};
use qgame::linalg::{gates::hadamard, ComplexMatrix, StateVector};
use qgame::quantum::{
    entropy_rate_series, evolve_von_neumann, quantum_conditional_entropy, separability_check, von_neumann_entropy,
    von_neumann_rhs, DensityMatrix, DEFAULT_HBAR,
};
use qgame::replicator::{
    game_entropy_suite, integrate, lax_decomposition, lax_rhs, relative_entropy, replicator_rhs, shannon_entropy,
    FrequencyVector, DEFAULT_DT,
};
use qgame::thermo::{beta_sweep, default_step, entropy_derivatives, entropy_identity_check, gibbs_state, partition_data, sweep_to_csv, GibbsEnsemble};

use crate::error::CliError;
use crate::io::{read_json, to_json};
use crate::{Command, Format};

pub fn dispatch(cmd: Command, input: Option<&Path>, format: Format, seed: u64) -> Result<String, CliError> {
    let need = |name: &str| input.ok_or_else(|| CliError::Usage(format!("{name} needs --input")));
    match cmd {
        Command::GameAnalyze => game_analyze(need("game-analyze")?, format),
        Command::Replicator => replicator(need("replicator")?, format),
        Command::LaxCheck => lax_check(input, format, seed),
        Command::QuantumEvolve => quantum_evolve(need("quantum-evolve")?, format),
        Command::Pennyflip => pennyflip(input, format),
        Command::Ewl => ewl(need("ewl")?, format),
        Command::Mw => mw(need("mw")?, format),
        Command::Entropy => entropy(need("entropy")?, format),
        Command::Gibbs => gibbs(need("gibbs")?, format),
    }
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn check_protocol(found: Option<&str>, expected: &str) -> Result<(), CliError> {
    match found {
        Some(p) if p != expected => Err(CliError::Validation(format!("protocol \"{p}\" given to the {expected} command"))),
        _ => Ok(()),
    }
}

// game-analyze

#[derive(Serialize)]
struct EssReport {
    strategy: MixedStrategy,
    #[serde(flatten)]
    verdict: EssVerdict,
}

#[derive(Serialize)]
struct MixedNash {
    a: MixedStrategy,
    b: MixedStrategy,
}

#[derive(Serialize)]
struct GameReport {
    shape: (usize, usize),
    labels: Option<Vec<String>>,
    symmetric: bool,
    zero_sum: bool,
    pure_nash: Vec<PureProfile>,
    pareto_optimal: Vec<PureProfile>,
    mixed_nash: Option<MixedNash>,
    minimax: Option<MinimaxSolution>,
    ess: Option<Vec<EssReport>>,
}

fn game_analyze(input: &Path, format: Format) -> Result<String, CliError> {
    let doc: GameDocument = read_json(input)?;
    let game = BimatrixGame::from_document(&doc)?;
    let (n, m) = game.shape();
    let pure_nash = game.pure_nash_equilibria();
    let pareto_optimal = game.pareto_optimal_outcomes();
    if format == Format::Csv {
        let rows = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| {
            let (pa, pb) = game.outcome(i, j);
            vec![
                i.to_string(),
                j.to_string(),
                fmt_f64(pa),
                fmt_f64(pb),
                pure_nash.contains(&(i, j)).to_string(),
                pareto_optimal.contains(&(i, j)).to_string(),
            ]
        });
        return Ok(csv("row,col,payoff_a,payoff_b,nash,pareto", rows.collect::<Vec<_>>()));
    }
    let mixed = game.mixed_nash_2x2();
    let ess = if game.is_symmetric() {
        let mut candidates: Vec<MixedStrategy> = (0..n).map(|k| MixedStrategy::pure(n, k)).collect();
        if let Some((p, q)) = &mixed {
            if p == q && p.as_pure().is_none() {
                candidates.push(p.clone());
            }
        }
        let reports = candidates
            .into_iter()
            .map(|s| Ok(EssReport { verdict: game.is_ess(&s, &[])?, strategy: s }))
            .collect::<Result<Vec<_>, qgame::Error>>()?;
        Some(reports)
    } else {
        None
    };
    let report = GameReport {
        shape: (n, m),
        labels: game.labels().map(<[String]>::to_vec),
        symmetric: game.is_symmetric(),
        zero_sum: game.is_zero_sum(),
        pure_nash,
        pareto_optimal,
        mixed_nash: mixed.map(|(a, b)| MixedNash { a, b }),
        minimax: if game.is_zero_sum() { Some(game.minimax_value()?) } else { None },
        ess,
    };
    to_json(&report)
}

// replicator

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReplicatorInput {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    x0: FrequencyVector,
    t_end: f64,
    dt: Option<f64>,
    /// keep every `stride`-th sample (the final one is always kept)
    stride: Option<usize>,
}

fn replicator(input: &Path, format: Format) -> Result<String, CliError> {
    let cfg: ReplicatorInput = read_json(input)?;
    let traj = integrate(&cfg.a, &cfg.x0, cfg.t_end, cfg.dt.unwrap_or(DEFAULT_DT))?.thinned(cfg.stride.unwrap_or(1));
    match format {
        Format::Csv => Ok(traj.to_csv()),
        Format::Json => to_json(&json!({
            "times": traj.times,
            "states": traj.states,
            "entropy": traj.entropy,
            "final": traj.last(),
        })),
    }
}

// lax-check

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct LaxCheckInput {
    samples: Option<usize>,
    min_n: Option<usize>,
    max_n: Option<usize>,
    /// payoff entries are drawn from `[-scale, scale]`
    scale: Option<f64>,
}

const LAX_TOL: f64 = 1e-10;

struct LaxSample {
    n: usize,
    rhs: f64,
    trace: f64,
    idempotence: f64,
    symmetric: bool,
}

fn lax_check(input: Option<&Path>, format: Format, seed: u64) -> Result<String, CliError> {
    let cfg: LaxCheckInput = match input {
        Some(p) => read_json(p)?,
        None => LaxCheckInput::default(),
    };
    let samples = cfg.samples.unwrap_or(1000);
    let (lo, hi) = (cfg.min_n.unwrap_or(2), cfg.max_n.unwrap_or(5));
    let scale = cfg.scale.unwrap_or(10.0);
    if lo < 1 || hi < lo {
        return Err(CliError::Validation(format!("need 1 <= min_n <= max_n, got {lo}..{hi}")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(CliError::Validation(format!("scale must be positive, got {scale}")));
    }
    // draw everything up front so results do not depend on thread count
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(Vec<Vec<f64>>, Vec<f64>)> = (0..samples)
        .map(|_| {
            let n = rng.random_range(lo..=hi);
            let a = (0..n).map(|_| (0..n).map(|_| rng.random_range(-scale..=scale)).collect()).collect();
            let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            (a, w)
        })
        .collect();
    let results: Vec<LaxSample> = draws
        .par_iter()
        .map(|(a, w)| {
            let total: f64 = w.iter().sum();
            let x = FrequencyVector::new(w.iter().map(|v| v / total).collect())?;
            let flow = lax_rhs(a, &x)?;
            let rhs = replicator_rhs(a, &x)?;
            let d = lax_decomposition(a, &x)?;
            Ok(LaxSample {
                n: x.len(),
                rhs: (0..x.len()).map(|i| (flow[(i, i)] - rhs[i]).abs()).fold(0.0, f64::max),
                trace: (d.x.trace() - 1.0).abs(),
                idempotence: d.x.idempotence_error(),
                symmetric: d.x.is_symmetric(),
            })
        })
        .collect::<Result<_, qgame::Error>>()?;
    if format == Format::Csv {
        let rows = results.iter().enumerate().map(|(k, s)| {
            vec![k.to_string(), s.n.to_string(), fmt_f64(s.rhs), fmt_f64(s.trace), fmt_f64(s.idempotence)]
        });
        return Ok(csv("sample,n,rhs_deviation,trace_error,idempotence_error", rows.collect::<Vec<_>>()));
    }
    let max = |f: fn(&LaxSample) -> f64| results.iter().map(f).fold(0.0, f64::max);
    let max_rhs = max(|s| s.rhs);
    to_json(&json!({
        "samples": samples,
        "seed": seed,
        "dimensions": [lo, hi],
        "max_rhs_deviation": max_rhs,
        "max_trace_error": max(|s| s.trace),
        "max_idempotence_error": max(|s| s.idempotence),
        "all_symmetric": results.iter().all(|s| s.symmetric),
        "tolerance": LAX_TOL,
        "passed": max_rhs < LAX_TOL,
    }))
}

// quantum-evolve

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolveInput {
    hamiltonian: ComplexMatrix,
    rho0: Option<DensityMatrix>,
    psi0: Option<StateVector>,
    hbar: Option<f64>,
    t_end: f64,
    dt: Option<f64>,
    stride: Option<usize>,
    /// matrix entries to export as CSV columns; defaults to the upper triangle
    entries: Option<Vec<(usize, usize)>>,
}

fn quantum_evolve(input: &Path, format: Format) -> Result<String, CliError> {
    let cfg: EvolveInput = read_json(input)?;
    let rho0 = match (cfg.rho0, cfg.psi0) {
        (Some(r), None) => r,
        (None, Some(psi)) => DensityMatrix::pure(&psi),
        _ => return Err(CliError::Validation("give exactly one of rho0 and psi0".into())),
    };
    let traj = evolve_von_neumann(&cfg.hamiltonian, &rho0, cfg.hbar.unwrap_or(DEFAULT_HBAR), cfg.t_end, cfg.dt.unwrap_or(1e-3))?
        .thinned(cfg.stride.unwrap_or(1));
    let n = rho0.dim();
    match format {
        Format::Csv => {
            let entries = cfg.entries.unwrap_or_else(|| (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect());
            if let Some(&(i, j)) = entries.iter().find(|&&(i, j)| i >= n || j >= n) {
                return Err(CliError::Validation(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
            }
            Ok(traj.to_csv(&entries))
        }
        Format::Json => to_json(&json!({
            "times": traj.times,
            "entropy": traj.entropy,
            "purity": traj.purity,
            "trace": traj.trace,
            "final_state": traj.states.last(),
        })),
    }
}

// pennyflip

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct PennyInput {
    /// Q's first and second move; both Hadamard by default
    q_moves: Option<(ComplexMatrix, ComplexMatrix)>,
    /// P's flip probabilities to play against
    p: Option<Vec<f64>>,
    initial: Option<DensityMatrix>,
}

fn pennyflip(input: Option<&Path>, format: Format) -> Result<String, CliError> {
    let cfg: PennyInput = match input {
        Some(p) => read_json(p)?,
        None => PennyInput::default(),
    };
    let (u1, u3) = cfg.q_moves.unwrap_or_else(|| (hadamard(), hadamard()));
    let rho = cfg.initial.unwrap_or_else(|| DensityMatrix::pure(&StateVector::basis(2, 0)));
    let ps = cfg.p.unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let rounds = ps
        .iter()
        .map(|&p| pennyflip_round(&rho, (&u1, &u3), p).map(|out| (p, out)))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Csv => Ok(csv(
            "p,win_probability",
            rounds.iter().map(|(p, out)| vec![fmt_f64(*p), fmt_f64(win_probability(out))]).collect::<Vec<_>>(),
        )),
        Format::Json => to_json(&json!({
            "rounds": rounds.iter().map(|(p, out)| json!({
                "p": p,
                "win_probability": win_probability(out),
                "final_state": out,
            })).collect::<Vec<_>>(),
        })),
    }
}

// ewl

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceInput {
    phi_a: f64,
    phi_b: f64,
    resolution: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InvasionInput {
    epsilon: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EwlInput {
    protocol: Option<String>,
    payoffs: Option<PdPayoffs>,
    gamma: f64,
    resolution: Option<usize>,
    surface: Option<SurfaceInput>,
    invasion: Option<InvasionInput>,
}

fn ewl_label(s: &EwlStrategy) -> Option<&'static str> {
    let u = s.unitary();
    [("C", EwlStrategy::cooperate()), ("D", EwlStrategy::defect()), ("Q", EwlStrategy::quantum())]
        .into_iter()
        .find(|(_, named)| named.unitary().max_abs_diff(&u) < 1e-9)
        .map(|(l, _)| l)
}

fn strategy_json(s: &EwlStrategy) -> Value {
    json!({ "theta": s.theta, "phi": s.phi, "label": ewl_label(s) })
}

fn ewl(input: &Path, format: Format) -> Result<String, CliError> {
    let cfg: EwlInput = read_json(input)?;
    check_protocol(cfg.protocol.as_deref(), "ewl")?;
    let spec = EwlSpec::new(cfg.payoffs.unwrap_or_default(), cfg.gamma)?;
    if format == Format::Csv {
        let s = cfg.surface.unwrap_or(SurfaceInput { phi_a: 0.0, phi_b: 0.0, resolution: 33 });
        let rows = ewl_payoff_surface(&spec, s.phi_a, s.phi_b, s.resolution)?;
        return Ok(csv(
            "theta_a,theta_b,payoff_a,payoff_b",
            rows.iter().map(|r| vec![fmt_f64(r.x), fmt_f64(r.y), fmt_f64(r.payoff_a), fmt_f64(r.payoff_b)]).collect::<Vec<_>>(),
        ));
    }
    let resolution = cfg.resolution.unwrap_or(64);
    let equilibria = ewl_nash_scan(&spec, resolution)?;
    let mut out = BTreeMap::new();
    out.insert("gamma", json!(spec.gamma));
    out.insert("payoffs", json!(spec.payoffs));
    out.insert("resolution", json!(resolution));
    out.insert(
        "equilibria",
        json!(equilibria
            .iter()
            .map(|e| json!({
                "a": strategy_json(&e.a),
                "b": strategy_json(&e.b),
                "payoff_a": e.payoff_a,
                "payoff_b": e.payoff_b,
                "cells": e.cells,
            }))
            .collect::<Vec<_>>()),
    );
    if let Some(inv) = cfg.invasion {
        // mutants U(0, φ) against a D population; the bracket spans C to Q
        let phi = invasion_threshold(&spec, inv.epsilon, 0.0, FRAC_PI_2, 1e-10)?;
        out.insert("invasion", json!({ "epsilon": inv.epsilon, "phi_threshold": phi }));
    }
    to_json(&out)
}

// mw

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MwInput {
    protocol: Option<String>,
    initial: StateVector,
    payoff_coeffs_a: [f64; 4],
    payoff_coeffs_b: [f64; 4],
    grid: Option<usize>,
}

fn mw(input: &Path, format: Format) -> Result<String, CliError> {
    let cfg: MwInput = read_json(input)?;
    check_protocol(cfg.protocol.as_deref(), "mw")?;
    let spec = MwSpec::new(cfg.initial, cfg.payoff_coeffs_a, cfg.payoff_coeffs_b)?;
    let grid = cfg.grid.unwrap_or(101);
    if format == Format::Csv {
        if grid < 2 {
            return Err(CliError::Validation("surface grid needs at least 2 points".into()));
        }
        let game = MwGame::new(&spec);
        let axis: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
        let rows = axis.iter().flat_map(|&p| {
            let game = &game;
            axis.iter().map(move |&q| {
                let (a, b) = game.payoffs(p, q);
                vec![fmt_f64(p), fmt_f64(q), fmt_f64(a), fmt_f64(b)]
            })
        });
        return Ok(csv("p,q,payoff_a,payoff_b", rows.collect::<Vec<_>>()));
    }
    let equilibria: Vec<MwEquilibrium> = mw_nash_scan(&spec, grid)?;
    to_json(&json!({ "grid": grid, "equilibria": equilibria }))
}

// entropy

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntropyInput {
    rho: Option<DensityMatrix>,
    psi: Option<StateVector>,
    /// subsystem dimensions for conditional entropy and Schmidt coefficients
    dims: Option<(usize, usize)>,
    hamiltonian: Option<ComplexMatrix>,
    hbar: Option<f64>,
    rho_dot: Option<ComplexMatrix>,
    x: Option<FrequencyVector>,
    y: Option<FrequencyVector>,
    joint: Option<Vec<Vec<f64>>>,
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Number(n) => out.push((prefix.to_string(), n.as_f64().map_or_else(|| n.to_string(), fmt_f64))),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Array(_) => {}
    }
}

fn entropy(input: &Path, format: Format) -> Result<String, CliError> {
    let cfg: EntropyInput = read_json(input)?;
    let rho = match (&cfg.rho, &cfg.psi) {
        (Some(_), Some(_)) => return Err(CliError::Validation("give at most one of rho and psi".into())),
        (Some(r), None) => Some(r.clone()),
        (None, Some(psi)) => Some(DensityMatrix::pure(psi)),
        (None, None) => None,
    };
    if rho.is_none() && cfg.x.is_none() && cfg.joint.is_none() {
        return Err(CliError::Validation("nothing to evaluate: give rho, psi, x or joint".into()));
    }
    let mut out = BTreeMap::new();
    if let Some(rho) = &rho {
        out.insert("von_neumann", json!(von_neumann_entropy(rho)));
        out.insert("purity", json!(rho.purity()));
        out.insert("spectrum", json!(rho.spectrum()));
        if let Some(dims) = cfg.dims {
            out.insert("conditional_entropy", json!(quantum_conditional_entropy(rho, dims)?));
            if let Some(psi) = &cfg.psi {
                out.insert("separability", json!(separability_check(psi, dims)?));
            }
        }
        let flow = match (&cfg.hamiltonian, &cfg.rho_dot) {
            (Some(_), Some(_)) => return Err(CliError::Validation("give at most one of hamiltonian and rho_dot".into())),
            (Some(h), None) => Some(von_neumann_rhs(h, rho, cfg.hbar.unwrap_or(DEFAULT_HBAR))?),
            (None, Some(f)) => Some(f.clone()),
            (None, None) => None,
        };
        if let Some(flow) = flow {
            out.insert("rate", json!(entropy_rate_series(rho, &flow)?));
        }
    } else if cfg.dims.is_some() || cfg.hamiltonian.is_some() || cfg.rho_dot.is_some() {
        return Err(CliError::Validation("dims, hamiltonian and rho_dot need rho or psi".into()));
    }
    if let Some(x) = &cfg.x {
        out.insert("shannon", json!(shannon_entropy(x.as_slice())));
        if let Some(y) = &cfg.y {
            let d = relative_entropy(x, y)?;
            out.insert("relative_entropy_bits", if d.is_finite() { json!(d) } else { json!("inf") });
        }
    } else if cfg.y.is_some() {
        return Err(CliError::Validation("y needs x".into()));
    }
    if let Some(joint) = &cfg.joint {
        out.insert("game", json!(game_entropy_suite(joint)?));
    }
    match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &serde_json::to_value(&out).map_err(|e| CliError::Validation(e.to_string()))?, &mut rows);
            Ok(csv("quantity,value", rows.into_iter().map(|(k, v)| vec![k, v])))
        }
    }
}

// gibbs

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GibbsInput {
    energies: Vec<f64>,
    beta: f64,
    /// optional sweep; defaults to the single `beta`
    betas: Option<Vec<f64>>,
    /// finite-difference step for the derivative checks
    h: Option<f64>,
}

fn gibbs(input: &Path, format: Format) -> Result<String, CliError> {
    let cfg: GibbsInput = read_json(input)?;
    let ens = GibbsEnsemble::new(cfg.energies, cfg.beta)?;
    let betas = cfg.betas.unwrap_or_else(|| vec![cfg.beta]);
    let sweep = beta_sweep(ens.energies(), &betas)?;
    if format == Format::Csv {
        return Ok(sweep_to_csv(&sweep));
    }
    let d = partition_data(&ens);
    let (direct, identity) = entropy_identity_check(&ens);
    let tau = ens.temperature();
    let derivatives = if ens.beta() > 0.0 {
        Some(entropy_derivatives(&ens, cfg.h.unwrap_or_else(|| default_step(ens.beta())))?)
    } else {
        None
    };
    to_json(&json!({
        "beta": ens.beta(),
        "temperature": if tau.is_finite() { json!(tau) } else { json!("inf") },
        "state": gibbs_state(&ens),
        "log_z": d.log_z,
        "mean_energy": d.mean_energy,
        "energy_variance": d.energy_variance,
        "entropy": { "direct": direct, "identity": identity },
        "derivatives": derivatives,
        "sweep": sweep,
    }))
}
