//! Bit-accurate models of sign-focused compressors and of a truncated,
//! error-compensated Baugh-Wooley signed multiplier built from them.
//!
//! * [`cells`]: truth tables of every compressor and adder cell
//! * [`ppm`]: partial-product matrix generation and transforms
//! * [`multiplier`]: netlist assembly and evaluation
//! * [`metrics`]: compressor statistics and multiplier error metrics
//! * [`imaging`]: Laplacian edge detection with a pluggable multiplier
//! * [`cli`]: the `signfocus` command-line front end

pub mod cells;
pub mod cli;
pub mod error;
pub mod imaging;
pub mod metrics;
pub mod multiplier;
pub mod ppm;

pub use error::{Error, Result};
