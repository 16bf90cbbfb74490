//! Figure sweeps, unit conversion and the verification report.

pub mod config;
pub mod state_spec;
pub mod sweep;
pub mod units;
pub mod verify;

pub use config::{Axis, FamilyGrid, Scenario, SweepConfig};
pub use state_spec::{ElectronSpec, Family, ImpuritySpec};
pub use sweep::{run_sweep, SweepRow, SweepTable};
pub use units::{convert_units, PhysicalParams, UnitConversion};
pub use verify::{verify_figures, CriterionReport};
