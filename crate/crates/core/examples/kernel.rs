//! Fidelity kernel over a handful of 2-feature points.
//!
//! cargo run --example kernel

use qdiff::algorithms::kernel::{quantum_kernel_matrix, KernelJob};
use qdiff::algorithms::symmetric_eigenvalues;
use qdiff::Device;

fn main() -> qdiff::Result<()> {
    let train = vec![vec![0.0, 0.0], vec![0.5, 1.0], vec![1.5, 0.2], vec![3.0, 3.0]];
    let k = quantum_kernel_matrix(&KernelJob::gram(train.clone())?, &Device::analytic())?;
    for row in &k {
        println!("{}", row.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join("  "));
    }
    println!("eigenvalues {:.4?}", symmetric_eigenvalues(&k)?);

    let test = vec![vec![0.4, 0.9]];
    let cross = quantum_kernel_matrix(&KernelJob::new(test, train)?, &Device::analytic())?;
    println!("test vs train {:.4?}", cross[0]);
    Ok(())
}
