//! Conversion from laboratory units to the dimensionless `(u, theta)` pair.

use std::f64::consts::PI;

use crate::closed_form::DimensionlessParams;
use crate::error::{Error, Result};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Effective mass in units of the bare electron mass.
    pub effective_mass: f64,
    pub energy_mev: f64,
    pub coupling_ev_angstrom: f64,
    /// Impurity spacing; without it only the coupling is converted.
    pub spacing_nm: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitConversion {
    /// Wave number in 1/m.
    pub k: f64,
    /// Density of states per unit length, in 1/(J m).
    pub density_of_states: f64,
    pub u: f64,
    pub theta: Option<f64>,
    /// Spacing in nm that would put `theta` at pi.
    pub resonant_spacing_nm: f64,
}

impl UnitConversion {
    pub fn params(&self) -> Result<DimensionlessParams> {
        let theta = self
            .theta
            .ok_or_else(|| Error::InvalidParams("impurity spacing is required for theta".into()))?;
        DimensionlessParams::new(self.u, theta)
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParams(format!("{name} = {value} must be positive")));
    }
    Ok(())
}

pub fn convert_units(phys: &PhysicalParams) -> Result<UnitConversion> {
    positive("effective mass", phys.effective_mass)?;
    positive("energy", phys.energy_mev)?;
    if !(phys.coupling_ev_angstrom.is_finite() && phys.coupling_ev_angstrom >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "coupling = {} must be non-negative",
            phys.coupling_ev_angstrom
        )));
    }
    if let Some(x0) = phys.spacing_nm {
        positive("spacing", x0)?;
    }

    let mass = phys.effective_mass * ELECTRON_MASS;
    let energy = phys.energy_mev * 1e-3 * ELECTRON_VOLT;
    let coupling = phys.coupling_ev_angstrom * ELECTRON_VOLT * 1e-10;
    let k = (2.0 * mass * energy).sqrt() / HBAR;
    let density_of_states = (2.0 * mass / energy).sqrt() / (PI * HBAR);
    Ok(UnitConversion {
        k,
        density_of_states,
        u: density_of_states * coupling,
        theta: phys.spacing_nm.map(|x0| k * x0 * 1e-9),
        resonant_spacing_nm: PI / k * 1e9,
    })
}
