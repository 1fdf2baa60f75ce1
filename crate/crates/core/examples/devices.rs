//! Exact expectations next to shot estimates as the shot count grows.
//!
//! cargo run --example devices

use qdiff::algorithms::basics::ry_tape;
use qdiff::gradients::gradient;
use qdiff::{Device, DiffMethod};

fn main() -> qdiff::Result<()> {
    let tape = ry_tape();
    let theta = [1.1];
    let exact = tape.execute(&Device::analytic(), &theta)?.as_scalar().unwrap_or_default();
    println!("analytic <Z> = {exact:+.6}");

    for shots in [100, 1_000, 10_000, 100_000] {
        let dev = Device::shots(shots, 1);
        let v = tape.execute(&dev, &theta)?.as_scalar().unwrap_or_default();
        let g = gradient(DiffMethod::ParameterShift, &tape, &dev, &theta)?[0];
        println!(
            "{shots:>7} shots  <Z> = {v:+.6}  err {:.1e}  d<Z>/dθ = {g:+.4}",
            (v - exact).abs()
        );
    }
    println!("exact derivative     {:+.4}", -theta[0].sin());

    // adjoint needs the statevector, so a shots device refuses it
    let err = gradient(DiffMethod::Adjoint, &tape, &Device::shots(100, 1), &theta).unwrap_err();
    println!("adjoint on shots: {err}");
    Ok(())
}
