//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use qdiff::algorithms::basics::{bell_tape, ry_tape, variational_descent};
use qdiff::algorithms::gradcheck::{compare_methods, random_tape};
use qdiff::algorithms::hybrid::{
    self, hybrid_loss, hybrid_loss_and_grad, hybrid_train, initial_params, synthetic_dataset,
};
use qdiff::algorithms::kernel::{quantum_kernel_matrix, KernelJob};
use qdiff::algorithms::portfolio::{self, portfolio_optimize, PortfolioProblem};
use qdiff::algorithms::qaoa::{self, maxcut_bruteforce, qaoa_best_of, qaoa_maxcut, MaxCutProblem};
use qdiff::algorithms::vqe::{self, h2_hamiltonian, vqe_best_of, vqe_run, VqeProblem};
use qdiff::algorithms::{exact_ground_energy, restart_seed, symmetric_eigenvalues, RunSettings};
use qdiff::gradients::{gradient, DiffMethod};
use qdiff::optimizers::OptimizerConfig;
use qdiff::{Device, Gate, GateKind, Statevector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn err(e: qdiff::Error) -> String {
    e.to_string()
}

fn bell_fidelity() -> Outcome {
    let t0 = Instant::now();
    let probs = bell_tape()
        .execute(&Device::analytic(), &[])
        .map_err(err)?
        .into_vec();
    let elapsed = t0.elapsed();
    let expected = [0.5, 0.0, 0.0, 0.5];
    let worst = probs
        .iter()
        .zip(expected)
        .map(|(p, e)| (p - e).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("max error {worst:e}, {elapsed:?}"))
}

fn gradient_agreement() -> Outcome {
    let t0 = Instant::now();
    let (mut ps_adj, mut ps_fd, mut adj_fd) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let (tape, params) = random_tape(2024, i);
        let d = compare_methods(&tape, &params).map_err(err)?;
        ps_adj = ps_adj.max(d.shift_vs_adjoint);
        ps_fd = ps_fd.max(d.shift_vs_fd);
        adj_fd = adj_fd.max(d.adjoint_vs_fd);
    }
    let elapsed = t0.elapsed();
    ensure(ps_adj <= 1e-9, || format!("shift vs adjoint {ps_adj:e}"))?;
    ensure(ps_fd <= 1e-6 && adj_fd <= 1e-6, || {
        format!("vs finite differences {ps_fd:e} / {adj_fd:e}")
    })?;
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "shift/adjoint {ps_adj:.1e}, shift/fd {ps_fd:.1e}, adjoint/fd {adj_fd:.1e}, {elapsed:?}"
    ))
}

fn analytic_derivative() -> Outcome {
    let tape = ry_tape();
    let dev = Device::analytic();
    let mut worst = 0.0f64;
    for k in 0..100 {
        let theta = TAU * k as f64 / 100.0;
        for method in [DiffMethod::ParameterShift, DiffMethod::Adjoint] {
            let g = gradient(method, &tape, &dev, &[theta]).map_err(err)?;
            worst = worst.max((g[0] + theta.sin()).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("max error {worst:e}"))?;
    Ok(format!("max |g + sin θ| = {worst:.1e} over 100 points"))
}

fn variational_optimization() -> Outcome {
    let settings = RunSettings::new(OptimizerConfig::gd(0.4).map_err(err)?, 100);
    let t = variational_descent(&settings, &[0.1, 0.2, 0.3], &Device::analytic(), 0)
        .map_err(err)?;
    let costs: Vec<f64> = t.costs().collect();
    ensure(t.final_cost() < 1e-4, || format!("final cost {:e}", t.final_cost()))?;
    Ok(format!("cost {:.3e} -> {:.3e} in 100 steps", costs[0], t.final_cost()))
}

fn vqe_ground_state() -> Outcome {
    let t0 = Instant::now();
    let problem = VqeProblem::h2();
    // independent oracle: the two 2×2 blocks have eigenvalues a ± b
    let blocks = [(-1.05, 0.18), (-0.81, 0.18)];
    let oracle = blocks
        .iter()
        .map(|(a, b): &(f64, f64)| a - b.abs())
        .fold(f64::INFINITY, f64::min);
    let jacobi = exact_ground_energy(&h2_hamiltonian()).map_err(err)?;
    ensure((oracle - jacobi).abs() < 1e-12, || format!("Jacobi {jacobi} vs {oracle}"))?;

    let settings = vqe::default_settings(300);
    let dev = Device::analytic();
    let (seed, restarts) = (7, 5);
    for r in 0..restarts {
        let t = vqe_run(&problem, &settings, &dev, None, restart_seed(seed, r)).map_err(err)?;
        let lowest = t.costs().fold(f64::INFINITY, f64::min);
        ensure(lowest >= oracle - 1e-9, || {
            format!("restart {r} violates the variational bound: {lowest}")
        })?;
    }
    let best = vqe_best_of(&problem, &settings, &dev, restarts, seed).map_err(err)?;
    let elapsed = t0.elapsed();
    let e = best.final_cost();
    ensure((e - oracle).abs() <= 1e-3, || format!("best energy {e}"))?;
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("best energy {e:.8} vs exact {oracle:.2}, {elapsed:?}"))
}

fn qaoa_maxcut_criterion() -> Outcome {
    let t0 = Instant::now();
    let graph = MaxCutProblem::reference();
    let dev = Device::analytic();
    let settings = qaoa::default_settings(100);
    let optimum = maxcut_bruteforce(&graph).map_err(err)? as f64;
    ensure(optimum == 4.0, || format!("brute force gave {optimum}"))?;
    let baseline = graph.cut_value(&dev, &[0.0; 4]).map_err(err)?;
    ensure((baseline - 2.5).abs() < 1e-12, || format!("baseline {baseline}"))?;
    let (seed, restarts) = (0, 5);
    for r in 0..restarts {
        let t = qaoa_maxcut(&graph, &settings, &dev, restart_seed(seed, r)).map_err(err)?;
        let highest = t.costs().fold(f64::NEG_INFINITY, f64::max);
        ensure(highest <= optimum + 1e-9, || {
            format!("restart {r} exceeds the optimum: {highest}")
        })?;
    }
    let best = qaoa_best_of(&graph, &settings, &dev, restarts, seed).map_err(err)?;
    let elapsed = t0.elapsed();
    let c = best.final_cost();
    ensure(c >= 3.0 && c > baseline, || format!("best cut {c}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("best cut {c:.6}, baseline {baseline}, optimum {optimum}, {elapsed:?}"))
}

fn kernel_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let x: Vec<Vec<f64>> = (0..30)
        .map(|_| vec![rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)])
        .collect();
    let k = quantum_kernel_matrix(&KernelJob::gram(x).map_err(err)?, &Device::analytic())
        .map_err(err)?;
    let n = k.len();
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((k[i][j] - k[j][i]).abs());
        }
    }
    ensure(asym <= 1e-12, || format!("asymmetry {asym:e}"))?;
    let min_eig = symmetric_eigenvalues(&k).map_err(err)?[0];
    ensure(min_eig >= -1e-10, || format!("min eigenvalue {min_eig:e}"))?;
    for i in 0..n {
        ensure((0.25..=1.0).contains(&k[i][i]), || format!("K[{i}][{i}] = {}", k[i][i]))?;
    }
    Ok(format!("asymmetry {asym:.1e}, min eigenvalue {min_eig:.3e}"))
}

fn portfolio_constraints() -> Outcome {
    let p = PortfolioProblem::reference();
    let r = p.returns();
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i == j { 0.5 } else { 0.0 } - r[i][j];
            ensure(p.q()[i][j] == expected, || format!("Q[{i}][{j}] = {}", p.q()[i][j]))?;
        }
    }
    ensure((p.q()[0][0] - 0.4).abs() < 1e-15 && (p.q()[0][1] + 0.05).abs() < 1e-15, || {
        "Q spot values".into()
    })?;

    // direct contraction of the equal-weights objective
    let w = [0.25; 4];
    let mut risk = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            risk += w[i] * p.q()[i][j] * w[j];
        }
    }
    let ret: f64 = (0..4).map(|i| w[i] * r[i][i]).sum();
    let equal_cost = -(ret - 0.5 * risk);

    let dev = Device::analytic();
    let t = portfolio_optimize(&p, &portfolio::default_settings(200), &dev, 0).map_err(err)?;
    let mut worst = 0.0f64;
    for step in &t.iterations {
        let w = p.weights(&dev, &step.params).map_err(err)?;
        let sum_err = (w.iter().sum::<f64>() - 1.0).abs();
        let box_err = w
            .iter()
            .map(|&x| (-x).max(x - 1.0).max(0.0))
            .fold(0.0, f64::max);
        worst = worst.max(sum_err).max(box_err);
    }
    ensure(worst <= 1e-12, || format!("simplex violation {worst:e}"))?;
    ensure(t.final_cost() <= equal_cost, || {
        format!("final {} above equal-weights {equal_cost}", t.final_cost())
    })?;
    Ok(format!(
        "final cost {:.6} <= equal-weights {equal_cost:.7}, simplex error {worst:.1e}",
        t.final_cost()
    ))
}

fn hybrid_training() -> Outcome {
    let data = synthetic_dataset(100, 0);
    let dev = Device::analytic();
    let t = hybrid_train(&data, &hybrid::default_settings(10), &dev, 0).map_err(err)?;
    let costs: Vec<f64> = t.costs().collect();
    ensure(costs.len() == 11 && costs[10] < costs[0], || format!("losses {costs:?}"))?;

    let mut worst = 0.0f64;
    for params in [initial_params(0), t.final_record.params.clone()] {
        let (_, g) = hybrid_loss_and_grad(&params, &data, &dev).map_err(err)?;
        let h = 1e-5;
        for k in 0..params.len() {
            let (mut a, mut b) = (params.clone(), params.clone());
            a[k] += h;
            b[k] -= h;
            let fd = (hybrid_loss(&a, &data, &dev).map_err(err)?
                - hybrid_loss(&b, &data, &dev).map_err(err)?)
                / (2.0 * h);
            worst = worst.max((g[k] - fd).abs());
        }
    }
    ensure(worst <= 1e-4, || format!("gradient mismatch {worst:e}"))?;
    Ok(format!(
        "loss {:.4} -> {:.4}, max gradient mismatch {worst:.1e}",
        costs[0], costs[10]
    ))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 7] = [
        &["bell"],
        &["vqe", "--iterations", "50", "--restarts", "3", "--seed", "7"],
        &["qaoa", "--iterations", "40", "--seed", "3", "--shots", "2000"],
        &["kernel", "--seed", "5"],
        &["portfolio", "--iterations", "50", "--seed", "9"],
        &["hybrid", "--iterations", "3", "--seed", "2"],
        &["grad-check", "--seed", "1"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{}-{rep}.json", args[0]));
            let status = Command::new(env!("CARGO_BIN_EXE_qdiff"))
                .args(args)
                .arg("--output")
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || {
                format!("{args:?}: {}", String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} invocations byte-identical", runs.len()))
}

fn norm_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_ratio = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let n_gates = rng.gen_range(0..=60);
        let mut psi = Statevector::zero(n).map_err(err)?;
        for _ in 0..n_gates {
            let kind = GateKind::ALL[rng.gen_range(0..GateKind::ALL.len())];
            if kind.arity() > n {
                continue;
            }
            let a = rng.gen_range(0..n);
            let wires = if kind.arity() == 2 {
                let b = (a + rng.gen_range(1..n)) % n;
                vec![a, b]
            } else {
                vec![a]
            };
            let params: Vec<f64> = if kind.is_parameterized() {
                vec![rng.gen_range(-2.0 * PI..2.0 * PI)]
            } else {
                vec![]
            };
            psi.apply(&Gate::new(kind, &wires, &params).map_err(err)?)
                .map_err(err)?;
        }
        let drift = (psi.norm() - 1.0).abs();
        worst_ratio = worst_ratio.max(drift / (1e-12 * (1.0 + n_gates as f64)));
    }
    ensure(worst_ratio <= 1.0, || format!("drift at {worst_ratio:.3} of the bound"))?;
    Ok(format!("worst drift {worst_ratio:.3} of the 1e-12·(1+gates) bound"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Bell fidelity", bell_fidelity),
        ("gradient three-way agreement", gradient_agreement),
        ("analytic derivative of RY", analytic_derivative),
        ("variational optimization", variational_optimization),
        ("VQE ground state", vqe_ground_state),
        ("QAOA Max-Cut", qaoa_maxcut_criterion),
        ("kernel Gram properties", kernel_properties),
        ("portfolio constraints", portfolio_constraints),
        ("hybrid training", hybrid_training),
        ("CLI determinism", cli_determinism),
        ("norm conservation", norm_conservation),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = check();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
