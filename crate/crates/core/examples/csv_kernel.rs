//! CSV in, kernel matrix out: imputation, angle scaling, atomic write.
//!
//! cargo run --example csv_kernel

use qdiff::algorithms::kernel::kernel_trace;
use qdiff::data::{ingest_csv, write_matrix_csv};
use qdiff::Device;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("qdiff-csv-example");
    std::fs::create_dir_all(&dir)?;
    let input = dir.join("measurements.csv");
    std::fs::write(
        &input,
        "id,temp,pressure\n1,20.5,101.2\n2,,99.8\n3,23.1,NA\n4,18.0,102.5\n5,21.7,100.1\n",
    )?;

    let table = ingest_csv(&input, &["temp".into(), "pressure".into()], true)?;
    for row in &table.rows {
        println!("{row:.4?}");
    }

    let (trace, k) = kernel_trace(&table.rows, &Device::analytic(), 0)?;
    let out = dir.join("kernel.csv");
    write_matrix_csv(&out, &k)?;
    println!("{}", trace.summary());
    println!("wrote {}", out.display());
    Ok(())
}
