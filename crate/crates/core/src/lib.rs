//! Exact single-electron scattering through a one-dimensional wire with two
//! spin-1/2 magnetic impurities coupled by contact exchange.
//!
//! Two independent routes compute the same scattering data:
//! [`waveguide`] solves the matching conditions sector by sector in the
//! coupled total-spin basis (and [`closed_form`] evaluates the resulting
//! analytic amplitudes), while [`oracle`] composes transfer matrices
//! directly in the 8-dimensional product spin space.

pub mod closed_form;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod scenarios;
pub mod spin_algebra;
pub mod waveguide;


pub use closed_form::{ChannelAmplitudes, DimensionlessParams};
pub use error::{Error, Result};
pub use spin_algebra::{Spin, SpinVector, C64};
