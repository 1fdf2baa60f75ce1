//! Ground-state search for the two-qubit H2 Hamiltonian.
//!
//! cargo run --example vqe

use qdiff::algorithms::exact_ground_energy;
use qdiff::algorithms::vqe::{default_settings, vqe_best_of, VqeProblem};
use qdiff::Device;

fn main() -> qdiff::Result<()> {
    let problem = VqeProblem::h2();
    let exact = exact_ground_energy(problem.hamiltonian())?;
    let trace = vqe_best_of(&problem, &default_settings(300), &Device::analytic(), 5, 7)?;

    for step in trace.iterations.iter().step_by(50) {
        println!("step {:>3}  energy {:+.6}", step.step, step.cost);
    }
    println!("best restart: {:?}", trace.final_record.restart);
    println!("final energy {:+.8}", trace.final_cost());
    println!("exact        {:+.8}", exact);
    Ok(())
}
