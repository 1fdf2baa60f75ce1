//! Circuits as text: parse, execute, differentiate, print back.
//!
//! cargo run --example text_circuits

use qdiff::gradients::gradient;
use qdiff::{CircuitTape, Device, DiffMethod};

const SOURCE: &str = "\
# two-qubit ansatz with a shared angle
QUBITS 2
RY 0 $0
RY 1 $0
IsingZZ 0,1 2*$1
RX 0 0.25
MEASURE expval Z(0)*Z(1)
";

fn main() -> qdiff::Result<()> {
    let tape: CircuitTape = SOURCE.parse()?;
    print!("{}", tape.to_text()?);

    let params = [0.7, -0.3];
    let dev = Device::analytic();
    println!("value    {:+.8}", tape.execute(&dev, &params)?.as_scalar().unwrap_or_default());
    println!("gradient {:+.8?}", gradient(DiffMethod::Adjoint, &tape, &dev, &params)?);

    match "QUBITS 1\nRY 3 0.1\nMEASURE probs 0\n".parse::<CircuitTape>() {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
