//! Four-asset mean-variance allocation with weights read from ⟨Z_i⟩.
//!
//! cargo run --example portfolio

use qdiff::algorithms::portfolio::{default_settings, portfolio_optimize, PortfolioProblem};
use qdiff::Device;

fn main() -> qdiff::Result<()> {
    let problem = PortfolioProblem::reference();
    let equal = vec![0.25; 4];
    println!("equal weights   cost {:+.6}  risk {:.6}", problem.cost(&equal), problem.risk(&equal));

    let dev = Device::analytic();
    let trace = portfolio_optimize(&problem, &default_settings(200), &dev, 0)?;
    let w = problem.weights(&dev, &trace.final_record.params)?;
    println!("optimised       cost {:+.6}  risk {:.6}", problem.cost(&w), problem.risk(&w));
    println!("weights {w:.4?}");
    println!("expected returns {:.4?}", problem.expected_returns());
    Ok(())
}
