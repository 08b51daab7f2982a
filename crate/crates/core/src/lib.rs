//! Discretized TFHE (multi-bit torus FHE) with interchangeable polynomial
//! multiplication backends: an exact integer path and a functional model of a
//! 64-point photonic FFT engine (bit-sliced fixed-point pipeline, conjugation
//! IFFT, 4-step scaling). A component-level power/area/latency model and an
//! ISCAS-style `.bench` netlist evaluator sit on top.

pub mod circuit;
pub mod dtfhe;
pub mod perf;
pub mod pffte;
pub mod torus;

pub use dtfhe::params::{ParamSet, Preset};
pub use pffte::config::{FracSplit, NoiseModel, PffteConfig};
pub use torus::poly::ModPoly;
pub use torus::word::TorusWord;
