//! Bit-exact model of a pipelined digit-slicing, multiplier-less radix-2 FFT
//! butterfly.
//!
//! * [`fixedpoint`]: Q-format scalars with explicit rounding and overflow.
//! * [`digit_slicing`]: block decomposition of fixed-point words.
//! * [`scml`]: constant multiplication by ROM lookup and shift-add.
//! * [`butterfly`]: conventional and digit-slicing butterflies.
//! * [`fft`]: the N-point transform, DFT oracle and error metrics.
//! * [`pipeline`]: cycle-level simulation and structural cost model.
//! * [`hdl`]: Verilog, ROM init files, testbenches and golden vectors.
//! * [`signal_io`]: CSV, JSON and hex signal files.

pub mod butterfly;
pub mod complex;
pub mod digit_slicing;
pub mod error;
pub mod fft;
pub mod fixedpoint;
pub mod hdl;
pub mod pipeline;
pub mod scml;
pub mod signal_io;

pub use butterfly::{
    butterfly_conventional, butterfly_ds, RequantPolicy, StageShift, TwiddleTables,
};
pub use complex::ComplexFx;
pub use digit_slicing::{SliceAlgorithm, SliceParams, SlicedWord};
pub use error::{Error, Result};
pub use fft::{dft_reference, fft_execute, FftImpl, FftPlan};
pub use fixedpoint::{FxWord, Overflow, QFormat, Rounding};
pub use scml::ScmlTable;
