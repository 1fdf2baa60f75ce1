//! Bell pair: exact probabilities, then sampled counts.
//!
//! cargo run --example bell

use qdiff::algorithms::basics::bell_tape;
use qdiff::Device;

fn main() -> qdiff::Result<()> {
    let tape = bell_tape();
    println!("{}", tape.to_text()?);

    let probs = tape.execute(&Device::analytic(), &[])?.into_vec();
    println!("analytic probs {probs:?}");

    let psi = tape.state(&[])?;
    for (bits, n) in psi.sample(&[0, 1], 1000, 42)? {
        println!("  |{bits}>  {n}");
    }
    Ok(())
}
