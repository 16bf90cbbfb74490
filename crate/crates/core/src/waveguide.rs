//! Stationary scattering states from the matching conditions at the two
//! impurity sites, solved sector by sector in the coupled spin basis.
//!
//! Units: `hbar^2 / 2m* = 1` and `x0 = 1`, so `k = theta` and the exchange
//! constant is `J = g k`. In each channel the wavefunction is
//! `A e^{ikx} + B e^{-ikx}` in regions I (x < 0) and II (0 < x < x0) and
//! `t e^{ikx}` in region III. Across a site the wavefunction is continuous
//! and `phi'(x+) - phi'(x-) = J W phi(x)`, with `W` the site's exchange
//! operator `(S_ei^2 - 3/2)/2` expressed in the sector's channels.

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::closed_form::{ChannelAmplitudes, DimensionlessParams};
use crate::error::{Error, Result};
use crate::spin_algebra::{self, Mat8, C64};
use crate::spin_algebra::doublet_index;

const RESIDUAL_TOL: f64 = 1e-8;

/// Exchange weight `(s_ei^2 - 3/2)/2` of a site whose electron-impurity
/// pair has `S_ei^2` eigenvalue (or matrix element) `s_squared`.
fn exchange_weight(s_squared: f64) -> f64 {
    0.5 * (s_squared - 1.5)
}

/// Per-site jump matrices `W` in units of `J`, one row/column per channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelCouplings {
    pub first: DMatrix<f64>,
    pub second: DMatrix<f64>,
}

impl ChannelCouplings {
    pub fn channels(&self) -> usize {
        self.first.nrows()
    }

    /// Both sites act as static deltas of strength `J/4`.
    pub fn quartet() -> Self {
        let w = DMatrix::from_element(1, 1, exchange_weight(2.0));
        Self {
            first: w.clone(),
            second: w,
        }
    }

    /// Channels `s_e2 = 0, 1`. Site 2 is diagonal in `s_e2`; site 1 mixes the
    /// channels through the recoupled `S_e1^2` matrix elements.
    pub fn doublet() -> Self {
        Self::doublet_from(spin_algebra::recoupling_matrix_elements())
    }

    /// Doublet couplings built from an explicit `<s'_e2|S_e1^2|s_e2>` matrix.
    pub fn doublet_from(s_e1_squared: Matrix2<f64>) -> Self {
        let first = DMatrix::from_fn(2, 2, |row, col| {
            let diagonal = if row == col { 1.5 } else { 0.0 };
            0.5 * (s_e1_squared[(row, col)] - diagonal)
        });
        let second = DMatrix::from_fn(2, 2, |row, col| {
            if row != col {
                return 0.0;
            }
            let s_e2 = row as f64;
            exchange_weight(s_e2 * (s_e2 + 1.0))
        });
        Self { first, second }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionCoefficients {
    pub a_in: C64,
    pub b_in: C64,
    pub a_mid: C64,
    pub b_mid: C64,
    pub t: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Quartet,
    Doublet,
}

#[derive(Clone, Debug)]
pub struct SectorSolution {
    pub sector: Sector,
    pub incident: usize,
    pub channels: Vec<RegionCoefficients>,
    pub residual: f64,
    pub matrix_norm: f64,
}

impl SectorSolution {
    /// Outgoing flux; unity for elastic scattering.
    pub fn flux(&self) -> f64 {
        self.channels
            .iter()
            .map(|c| c.t.norm_sqr() + c.b_in.norm_sqr())
            .sum()
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Known(C64),
    Unknown(usize),
}

/// Builds and solves the `4n x 4n` matching system for `n` channels with
/// unit incidence in channel `incident`.
pub fn solve_channels(
    p: &DimensionlessParams,
    couplings: &ChannelCouplings,
    sector: Sector,
    incident: usize,
) -> Result<SectorSolution> {
    let n = couplings.channels();
    if incident >= n || couplings.second.nrows() != n {
        return Err(Error::InvalidParams(format!(
            "incident channel {incident} with {n} channels"
        )));
    }
    let k = p.theta();
    let exchange = p.g() * k;
    let i = C64::i();

    // regions 0, 1, 2 = I, II, III; mover 0 = e^{ikx}, 1 = e^{-ikx}
    let slot = |region: usize, mover: usize, channel: usize| match (region, mover) {
        (0, 0) => Slot::Known(C64::from(if channel == incident { 1.0 } else { 0.0 })),
        (0, 1) => Slot::Unknown(4 * channel),
        (1, 0) => Slot::Unknown(4 * channel + 1),
        (1, 1) => Slot::Unknown(4 * channel + 2),
        (2, 0) => Slot::Unknown(4 * channel + 3),
        _ => Slot::Known(C64::from(0.0)),
    };

    let size = 4 * n;
    let mut system = DMatrix::<C64>::zeros(size, size);
    let mut rhs = DVector::<C64>::zeros(size);
    let mut add = |row: usize, slot: Slot, coeff: C64| match slot {
        Slot::Unknown(col) => system[(row, col)] += coeff,
        Slot::Known(value) => rhs[row] -= coeff * value,
    };

    let mut row = 0;
    for (site, (position, weights)) in [(0.0, &couplings.first), (1.0, &couplings.second)]
        .into_iter()
        .enumerate()
    {
        let forward = C64::from_polar(1.0, k * position);
        let backward = forward.conj();
        let (left, right) = (site, site + 1);
        for c in 0..n {
            // continuity
            add(row, slot(left, 0, c), forward);
            add(row, slot(left, 1, c), backward);
            add(row, slot(right, 0, c), -forward);
            add(row, slot(right, 1, c), -backward);
            row += 1;

            // derivative jump against the exchange term
            add(row, slot(right, 0, c), i * k * forward);
            add(row, slot(right, 1, c), -i * k * backward);
            add(row, slot(left, 0, c), -i * k * forward);
            add(row, slot(left, 1, c), i * k * backward);
            for d in 0..n {
                let w = exchange * weights[(c, d)];
                if w != 0.0 {
                    add(row, slot(right, 0, d), -w * forward);
                    add(row, slot(right, 1, d), -w * backward);
                }
            }
            row += 1;
        }
    }

    let solution = system
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular(f64::INFINITY))?;
    let residual = (&system * &solution - &rhs).norm();
    let matrix_norm = system.norm();
    let relative = residual / (matrix_norm * solution.norm() + rhs.norm());
    if !relative.is_finite() || relative > RESIDUAL_TOL {
        return Err(Error::Singular(relative));
    }

    let channels = (0..n)
        .map(|c| RegionCoefficients {
            a_in: C64::from(if c == incident { 1.0 } else { 0.0 }),
            b_in: solution[4 * c],
            a_mid: solution[4 * c + 1],
            b_mid: solution[4 * c + 2],
            t: solution[4 * c + 3],
        })
        .collect();
    Ok(SectorSolution {
        sector,
        incident,
        channels,
        residual,
        matrix_norm,
    })
}

pub fn solve_quartet(p: &DimensionlessParams) -> Result<SectorSolution> {
    solve_channels(p, &ChannelCouplings::quartet(), Sector::Quartet, 0)
}

/// `incident` is the incoming `s'_e2` channel (0 or 1).
pub fn solve_doublet(p: &DimensionlessParams, incident: usize) -> Result<SectorSolution> {
    solve_channels(p, &ChannelCouplings::doublet(), Sector::Doublet, incident)
}

pub fn channel_amplitudes(p: &DimensionlessParams) -> Result<ChannelAmplitudes> {
    let quartet = solve_quartet(p)?;
    let mut t_doublet = Matrix2::zeros();
    let mut r_doublet = Matrix2::zeros();
    for incident in 0..2 {
        let sol = solve_doublet(p, incident)?;
        for (outgoing, c) in sol.channels.iter().enumerate() {
            t_doublet[(outgoing, incident)] = c.t;
            r_doublet[(outgoing, incident)] = c.b_in;
        }
    }
    Ok(ChannelAmplitudes {
        t_quartet: quartet.channels[0].t,
        t_doublet,
        r_quartet: quartet.channels[0].b_in,
        r_doublet,
    })
}

/// Transmission and reflection matrices for left incidence, in the coupled
/// basis ordered as [`spin_algebra::COUPLED_LABELS`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringMatrices {
    pub transmission: Mat8,
    pub reflection: Mat8,
}

impl ScatteringMatrices {
    pub fn from_amplitudes(amps: &ChannelAmplitudes) -> Self {
        let mut transmission = Mat8::zeros();
        let mut reflection = Mat8::zeros();
        for q in 0..4 {
            transmission[(q, q)] = amps.t_quartet;
            reflection[(q, q)] = amps.r_quartet;
        }
        for twice_m in [1, -1] {
            for out in 0..2 {
                for inc in 0..2 {
                    let (r, c) = (doublet_index(out, twice_m), doublet_index(inc, twice_m));
                    transmission[(r, c)] = amps.t_doublet[(out, inc)];
                    reflection[(r, c)] = amps.r_doublet[(out, inc)];
                }
            }
        }
        Self {
            transmission,
            reflection,
        }
    }

    /// The same matrices in the product basis.
    pub fn to_product_basis(&self) -> Self {
        let u = spin_algebra::coupled_basis().unitary();
        Self {
            transmission: u * self.transmission * u.adjoint(),
            reflection: u * self.reflection * u.adjoint(),
        }
    }
}

pub fn scattering_matrices(p: &DimensionlessParams) -> Result<ScatteringMatrices> {
    Ok(ScatteringMatrices::from_amplitudes(&channel_amplitudes(p)?))
}
