//! Analytic transmission amplitudes of the two-impurity wire.
//!
//! Everything is a function of the coupling `u = rho(E) J` and the phase
//! `theta = k x0`. Internally the amplitudes use `g = pi u = 2 m* J / (hbar^2 k)`.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::spin_algebra::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessParams {
    u: f64,
    theta: f64,
}

impl DimensionlessParams {
    pub fn new(u: f64, theta: f64) -> Result<Self> {
        if !u.is_finite() || u < 0.0 {
            return Err(Error::InvalidParams(format!("coupling u = {u} must be finite and >= 0")));
        }
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidParams(format!("phase theta = {theta} must be finite and > 0")));
        }
        Ok(Self { u, theta })
    }

    /// Density of states per unit length times the exchange constant.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Wave number times impurity spacing, in radians.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn g(&self) -> f64 {
        PI * self.u
    }

    /// `e^{2 i theta} - 1`
    fn round_trip_minus_one(&self) -> C64 {
        C64::from_polar(1.0, 2.0 * self.theta) - 1.0
    }
}

/// Channel-resolved transmission and reflection amplitudes. Doublet
/// matrices are indexed `(s_e2, s'_e2)`: row is the outgoing channel,
/// column the incident one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelAmplitudes {
    pub t_quartet: C64,
    pub t_doublet: Matrix2<C64>,
    pub r_quartet: C64,
    pub r_doublet: Matrix2<C64>,
}

pub fn t_quartet(p: &DimensionlessParams) -> C64 {
    let g = p.g();
    let i = C64::i();
    let den = 64.0 + g * (16.0 * i + p.round_trip_minus_one() * g);
    assert!(den.norm() > 0.0);
    C64::from(64.0) / den
}

/// Common denominator of the doublet amplitudes.
pub fn doublet_denominator(p: &DimensionlessParams) -> C64 {
    let g = p.g();
    let i = C64::i();
    let e = p.round_trip_minus_one();
    4096.0 + g * (-2048.0 * i + e * g * (-128.0 + 96.0 * i * g + 9.0 * e * g * g))
}

pub fn t_doublet(p: &DimensionlessParams) -> Matrix2<C64> {
    let g = p.g();
    let i = C64::i();
    let s3 = 3f64.sqrt();
    let round_trip = C64::from_polar(1.0, 2.0 * p.theta);
    let e = p.round_trip_minus_one();
    let delta = doublet_denominator(p);
    assert!(delta.norm() > 0.0);

    let to_singlet = |incident: f64| {
        let from_zero = 1.0 - incident;
        (-64.0 * round_trip * g * g * (2.0 * from_zero + s3 * incident)
            + 64.0 * (g - 8.0 * i) * (2.0 * (4.0 * i + g) * from_zero + s3 * g * incident))
            / delta
    };
    let to_triplet = |incident: f64| {
        let from_zero = 1.0 - incident;
        64.0 / delta
            * (s3 * g * (-8.0 * i + 3.0 * e * g) * from_zero + 8.0 * incident * (8.0 - 3.0 * i * g))
    };
    Matrix2::new(to_singlet(0.0), to_singlet(1.0), to_triplet(0.0), to_triplet(1.0))
}

/// `det(t - I)` evaluated from the doublet matrix.
pub fn det_t_minus_identity(p: &DimensionlessParams) -> C64 {
    (t_doublet(p) - Matrix2::identity()).determinant()
}

/// The factored form `(3/delta)(e^{2i theta} - 1) g^3 [3 g (e^{2i theta} - 1) + 32 i]`.
pub fn det_t_minus_identity_factored(p: &DimensionlessParams) -> C64 {
    let g = p.g();
    let e = p.round_trip_minus_one();
    3.0 / doublet_denominator(p) * e * g.powi(3) * (3.0 * g * e + 32.0 * C64::i())
}
