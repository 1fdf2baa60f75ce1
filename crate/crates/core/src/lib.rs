//! Differentiable statevector simulation with parameter-shift, finite-difference
//! and adjoint gradients, plus the optimizers, templates and variational
//! experiments built on top.
//!
//! ```
//! use qdiff::circuit::{CircuitTape, Device, MeasurementSpec};
//! use qdiff::gradients::{gradient, DiffMethod};
//! use qdiff::ops::{GateKind, Observable};
//!
//! let tape = CircuitTape::builder(1)
//!     .param_gate(GateKind::RY, &[0], 0)
//!     .measure(MeasurementSpec::Expval(Observable::z(0)))
//!     .unwrap();
//! let dev = Device::analytic();
//! let g = gradient(DiffMethod::ParameterShift, &tape, &dev, &[0.4]).unwrap();
//! assert!((g[0] + 0.4f64.sin()).abs() < 1e-12);
//! ```

pub mod algorithms;
pub mod circuit;
pub mod cli;
pub mod data;
pub mod error;
pub mod gradients;
pub mod matrix;
pub mod ops;
pub mod optimizers;
pub mod statevector;
pub mod templates;

pub use circuit::{CircuitTape, Device, MeasurementSpec};
pub use error::{Error, Result};
pub use gradients::DiffMethod;
pub use ops::{Gate, GateKind, Observable};
pub use statevector::Statevector;
