//! Three ways to differentiate the same tape, plus a short descent.
//!
//! cargo run --example gradients

use qdiff::algorithms::basics::{variational_descent, variational_tape};
use qdiff::algorithms::RunSettings;
use qdiff::gradients::gradient;
use qdiff::optimizers::OptimizerConfig;
use qdiff::{Device, DiffMethod};

fn main() -> qdiff::Result<()> {
    let tape = variational_tape();
    let dev = Device::analytic();
    let params = [0.1, 0.2, 0.3];

    for (name, method) in [
        ("parameter-shift", DiffMethod::ParameterShift),
        ("adjoint", DiffMethod::Adjoint),
        ("finite-diff", DiffMethod::finite_diff()),
    ] {
        dev.reset_execution_count();
        let g = gradient(method, &tape, &dev, &params)?;
        println!("{name:<16} {g:+.10?}  executions: {}", dev.execution_count());
    }

    let settings = RunSettings::new(OptimizerConfig::gd(0.4)?, 100);
    let trace = variational_descent(&settings, &params, &dev, 0)?;
    for step in trace.iterations.iter().step_by(20) {
        println!("step {:>3}  (<Z0> - 1)^2 = {:.3e}", step.step, step.cost);
    }
    println!("final params {:.4?}", trace.final_record.params);
    Ok(())
}
