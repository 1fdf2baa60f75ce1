//! Cross-checks parameter-shift, adjoint and finite-difference gradients.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{stream_rng, FinalRecord, Trace, TraceConfig};
use crate::circuit::{CircuitTape, Device, MeasurementSpec, Operation, Param};
use crate::error::{Error, Result};
use crate::gradients::{jacobian, DiffMethod};
use crate::ops::{GateKind, Observable, Pauli};

pub const MAX_QUBITS: usize = 4;
pub const MAX_GATES: usize = 12;
pub const MAX_PARAMS: usize = 8;

/// Random tape number `index` of the family seeded by `seed`, with a random
/// parameter point in `[0, 2π)`. Up to 4 qubits, 12 gates and 8 parameters;
/// parameters may be shared or unused, and the observable is a random Pauli word.
pub fn random_tape(seed: u64, index: u64) -> (CircuitTape, Vec<f64>) {
    let mut rng = stream_rng(seed, "grad-check", index);
    let n_qubits = rng.gen_range(1..=MAX_QUBITS);
    let n_params = rng.gen_range(1..=MAX_PARAMS);
    let n_gates = rng.gen_range(1..=MAX_GATES);
    let kinds: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|k| n_qubits > 1 || k.arity() == 1)
        .collect();
    let wires: Vec<usize> = (0..n_qubits).collect();
    let mut b = CircuitTape::builder(n_qubits).n_params(n_params);
    for _ in 0..n_gates {
        let kind = *kinds.choose(&mut rng).expect("nonempty");
        let w: Vec<usize> = wires.choose_multiple(&mut rng, kind.arity()).copied().collect();
        let param = kind
            .is_parameterized()
            .then(|| Param::r#ref(rng.gen_range(0..n_params)));
        b = b.op(Operation {
            kind,
            wires: w,
            param,
        });
    }
    let word_len = rng.gen_range(1..=n_qubits);
    let factors: Vec<(Pauli, usize)> = wires
        .choose_multiple(&mut rng, word_len)
        .map(|&w| (*[Pauli::X, Pauli::Y, Pauli::Z].choose(&mut rng).expect("3"), w))
        .collect();
    let obs = Observable::tensor(factors).expect("distinct wires");
    let tape = b
        .measure(MeasurementSpec::Expval(obs))
        .expect("generated within bounds");
    let params = (0..n_params).map(|_| rng.gen_range(0.0..TAU)).collect();
    (tape, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Discrepancy {
    pub shift_vs_adjoint: f64,
    pub shift_vs_fd: f64,
    pub adjoint_vs_fd: f64,
}

impl Discrepancy {
    pub fn max(&self) -> f64 {
        self.shift_vs_adjoint.max(self.shift_vs_fd).max(self.adjoint_vs_fd)
    }

    fn merge(self, o: Discrepancy) -> Discrepancy {
        Discrepancy {
            shift_vs_adjoint: self.shift_vs_adjoint.max(o.shift_vs_adjoint),
            shift_vs_fd: self.shift_vs_fd.max(o.shift_vs_fd),
            adjoint_vs_fd: self.adjoint_vs_fd.max(o.adjoint_vs_fd),
        }
    }
}

fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest elementwise disagreement between the three methods on one tape.
pub fn compare_methods(tape: &CircuitTape, params: &[f64]) -> Result<Discrepancy> {
    let dev = Device::analytic();
    let ps = jacobian(DiffMethod::ParameterShift, tape, &dev, params)?;
    let adj = jacobian(DiffMethod::Adjoint, tape, &dev, params)?;
    let fd = jacobian(DiffMethod::finite_diff(), tape, &dev, params)?;
    Ok(Discrepancy {
        shift_vs_adjoint: max_abs_diff(&ps, &adj),
        shift_vs_fd: max_abs_diff(&ps, &fd),
        adjoint_vs_fd: max_abs_diff(&adj, &fd),
    })
}

/// Runs [`compare_methods`] on `n_tapes` random tapes, or on `circuit` alone.
pub fn grad_check(
    seed: u64,
    n_tapes: usize,
    circuit: Option<(&CircuitTape, &[f64])>,
) -> Result<Trace> {
    let (worst, count, params) = match circuit {
        Some((tape, params)) => (compare_methods(tape, params)?, 1, params.to_vec()),
        None => {
            if n_tapes == 0 {
                return Err(Error::Validation("grad-check needs at least one tape".into()));
            }
            let all: Vec<Discrepancy> = (0..n_tapes as u64)
                .into_par_iter()
                .map(|i| {
                    let (tape, params) = random_tape(seed, i);
                    compare_methods(&tape, &params)
                })
                .collect::<Result<_>>()?;
            let worst = all.into_iter().fold(Discrepancy::default(), Discrepancy::merge);
            (worst, n_tapes, vec![])
        }
    };
    let mut final_record = FinalRecord {
        cost: worst.max(),
        params,
        restart: None,
        restart_costs: vec![],
        extra: Default::default(),
    };
    let e = &mut final_record.extra;
    e.insert("n_tapes".into(), json!(count));
    e.insert("shift_vs_adjoint".into(), json!(worst.shift_vs_adjoint));
    e.insert("shift_vs_fd".into(), json!(worst.shift_vs_fd));
    e.insert("adjoint_vs_fd".into(), json!(worst.adjoint_vs_fd));
    Ok(Trace {
        experiment: "grad-check".into(),
        seed,
        config: TraceConfig {
            optimizer: None,
            diff_method: None,
            iterations: 0,
            restarts: 1,
            device: Device::analytic().mode(),
        },
        iterations: vec![],
        final_record,
    })
}
