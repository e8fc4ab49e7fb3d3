//! Transforms of probability measures on ℝ, Boolean Lévy triplets, Boolean
//! convolution and the Boolean-to-free Bercovici–Pata bijection, and a
//! numerical test for Boolean selfdecomposability.

pub mod catalog;
pub mod convolution;
pub mod error;
pub mod io;
pub mod limits;
pub mod measure_model;
pub mod optim;
pub mod quad;
pub mod reproduce;
pub mod sd_analysis;
pub mod transforms;

pub use num_complex::Complex64 as C64;

pub use convolution::FreeHandle;
pub use error::{Error, Result};
pub use measure_model::{
    Atom, Density, DilationFactor, GeneratingPair, Interval, LevyDensity, LevyTriplet, SpectralMeasure,
};
pub use sd_analysis::{KProfile, SdReport, Verdict};
pub use transforms::{Role, TransformHandle};
