//! QAOA on a five-edge, four-node graph, compared against brute force.
//!
//! cargo run --example qaoa_maxcut

use qdiff::algorithms::qaoa::{default_settings, maxcut_bruteforce, qaoa_best_of, MaxCutProblem};
use qdiff::Device;

fn main() -> qdiff::Result<()> {
    let graph = MaxCutProblem::reference();
    let dev = Device::analytic();
    println!("edges {:?}, p = {}", graph.edges(), graph.p());
    println!("baseline cut at zero angles: {}", graph.cut_value(&dev, &[0.0; 4])?);

    let trace = qaoa_best_of(&graph, &default_settings(100), &dev, 5, 0)?;
    println!("restart cuts: {:?}", trace.final_record.restart_costs);
    println!("best <C> = {:.6}", trace.final_cost());
    println!("max cut  = {}", maxcut_bruteforce(&graph)?);

    // most likely bitstring under the optimised angles
    let tape = graph.tape()?.with_measurement(qdiff::MeasurementSpec::Probs(vec![0, 1, 2, 3]))?;
    let probs = tape.execute(&dev, &trace.final_record.params)?.into_vec();
    let (idx, p) = probs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("16 outcomes");
    println!("most likely partition {idx:04b} (p = {p:.3})");
    Ok(())
}
