//! Trains the hybrid classical/quantum classifier on a synthetic dataset.
//!
//! cargo run --example hybrid

use qdiff::algorithms::hybrid::{default_settings, hybrid_train, synthetic_dataset};
use qdiff::Device;

fn main() -> qdiff::Result<()> {
    let data = synthetic_dataset(100, 0);
    let trace = hybrid_train(&data, &default_settings(30), &Device::analytic(), 0)?;
    for s in &trace.iterations {
        println!("epoch {:>2}: loss = {:.4}", s.step, s.cost);
    }
    println!("train accuracy {}", trace.final_record.extra["accuracy"]);
    Ok(())
}
