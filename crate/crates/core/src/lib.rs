//! Chirp-rate spectral analysis and time-varying filtering.
//!
//! The centerpiece is a linear chirp transform: a bank of DFTs taken after
//! demodulating the input by a family of quadratic phases, indexed by a
//! signed chirp-rate bin. On top of it sit a peak picker and single-component
//! extractor ([`analysis`]), an iterative subtract-and-repeat denoiser with
//! windowed overlap-add framing ([`filter`]), a discrete fractional Fourier
//! baseline filter ([`frft`]), and a Monte-Carlo evaluation harness that
//! compares both under additive white Gaussian noise ([`eval`]).
//!
//! With the `parallel` feature (on by default) the chirp-slice, order-grid,
//! frame, and trial loops run on the rayon thread pool. Every parallel loop
//! writes independent outputs that are combined in a fixed order, so results
//! are bitwise identical to the single-threaded fallback.

pub mod analysis;
pub mod dlct;
pub mod error;
pub mod eval;
pub mod filter;
pub mod frft;
mod par;
pub mod signal;

pub use error::{Error, Result};
pub use signal::Signal;
