pub mod blowup;
pub mod config;
pub mod diagnostics;
pub mod error;
mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod models;
pub mod oracle;
pub mod spectral;
pub mod sweep;
pub mod timestep;

pub use diagnostics::DiagnosticSeries;
pub use error::{Error, Result};
pub use field::{PhysicalField, SpectralField};
pub use grid::GridSpec;
pub use models::{Model, VoigtParams};
pub use timestep::{Scheme, StepperConfig};
