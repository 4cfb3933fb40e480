//! Simulation and Fisher-information analysis for error-corrected,
//! entanglement-assisted stellar interferometry.
//!
//! Thermal starlight is captured into quantum memories at two telescope
//! sites, protected with a stabilizer code, exposed to noise, recovered, and
//! analysed through the quantum Fisher information of the interferometric
//! phase `φ` and the mutual coherence `γ`.

pub mod bounds;
pub mod channels;
pub mod codes;
pub mod encoder;
pub mod error;
pub mod metrology;
pub mod qcore;
pub mod recovery;
pub mod source;
pub mod stirap;

pub use error::{Error, Result};
