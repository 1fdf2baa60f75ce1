//! Data-encoding templates applied to the same feature vector.
//!
//! cargo run --example encodings

use qdiff::ops::Axis;
use qdiff::templates::{
    amplitude_embedding, angle_embedding, basic_entangler_layers, basis_embedding, iqp_embedding,
    threshold_bits,
};
use qdiff::Statevector;

fn run(n: usize, gates: &[qdiff::Gate]) -> qdiff::Result<Statevector> {
    let mut psi = Statevector::zero(n)?;
    for g in gates {
        psi.apply(g)?;
    }
    Ok(psi)
}

fn main() -> qdiff::Result<()> {
    let x = [0.3, 1.2, 2.0];
    let wires = [0, 1, 2];

    let angle = run(3, &angle_embedding(&x, &wires, Axis::Y)?)?;
    println!("angle      {:.4?}", angle.probabilities(&wires)?);

    let bits = threshold_bits(&x, 1.0);
    let basis = run(3, &basis_embedding(&bits, &wires)?)?;
    println!("basis {bits:?} {:.4?}", basis.probabilities(&wires)?);

    let iqp = run(3, &iqp_embedding(&x, &wires)?)?;
    println!("iqp        {:.4?}", iqp.probabilities(&wires)?);

    // 3 features padded to 4 amplitudes on 2 qubits
    let amp = amplitude_embedding(&x, &[0, 1], 2, true, true)?;
    println!("amplitude  {:.4?}", amp.probabilities(&[0, 1])?);

    let mut layered = run(3, &angle_embedding(&x, &wires, Axis::Y)?)?;
    for g in basic_entangler_layers(&[vec![0.1, 0.2, 0.3], vec![0.4, 0.5, 0.6]], &wires, Axis::Y)? {
        layered.apply(&g)?;
    }
    println!("+2 layers  {:.4?}", layered.probabilities(&wires)?);
    Ok(())
}
