//! Transmittivities, post-selection and symmetry analysis for arbitrary
//! incident spin states.

pub mod entanglement;

use nalgebra::{DMatrix, SVD};

use crate::closed_form::DimensionlessParams;
use crate::error::Result;
use crate::spin_algebra::{self, operators, product_to_coupled, Mat8, Spin, SpinVector, Vec8, C64};
use crate::waveguide::{self, ScatteringMatrices};

use entanglement::{density_from_pure, pure_concurrence, Density4};

/// Probabilities below this count as no support for a post-selection outcome.
pub const NO_SUPPORT: f64 = 1e-14;

/// Singular values of `T - I` below this mark an eigenvalue-1 direction.
pub const FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteredState {
    pub incident: SpinVector,
    /// Transmitted amplitudes `gamma` in the coupled basis.
    pub gamma: Vec8,
    /// Transmitted amplitudes in the product basis.
    pub transmitted: Vec8,
    pub reflected_coupled: Vec8,
    pub reflected: Vec8,
    pub transmittivity: f64,
    pub reflectivity: f64,
}

impl ScatteredState {
    /// Transmission probability with the outgoing electron found in `outcome`.
    pub fn polarized(&self, outcome: Spin) -> f64 {
        let offset = 4 * outcome.bit();
        self.transmitted.rows(offset, 4).norm_squared()
    }

    pub fn transmitted_state(&self) -> SpinVector {
        SpinVector::unnormalized(self.transmitted)
    }
}

/// Applies precomputed coupled-basis scattering matrices to `chi`.
pub fn scatter_with(matrices: &ScatteringMatrices, chi: &SpinVector) -> Result<ScatteredState> {
    chi.require_normalized()?;
    let coefficients = product_to_coupled(chi.amplitudes());
    let gamma = matrices.transmission * coefficients;
    let reflected_coupled = matrices.reflection * coefficients;
    let u = spin_algebra::coupled_basis().unitary();
    let transmitted = u * gamma;
    let reflected = u * reflected_coupled;
    Ok(ScatteredState {
        incident: *chi,
        gamma,
        transmitted,
        reflected_coupled,
        reflected,
        transmittivity: gamma.norm_squared(),
        reflectivity: reflected_coupled.norm_squared(),
    })
}

pub fn scatter(chi: &SpinVector, p: &DimensionlessParams) -> Result<ScatteredState> {
    chi.require_normalized()?;
    scatter_with(&waveguide::scattering_matrices(p)?, chi)
}

pub fn polarized_transmittivity(
    chi: &SpinVector,
    outcome: Spin,
    p: &DimensionlessParams,
) -> Result<f64> {
    Ok(scatter(chi, p)?.polarized(outcome))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalImpurityState {
    /// Normalized pair amplitudes indexed `2 a + b`.
    pub amplitudes: [C64; 4],
    pub density: Density4,
    pub concurrence: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostSelectionResult {
    pub outcome: Spin,
    /// Probability per injected electron, transmission included.
    pub probability: f64,
    /// `None` when the outcome has no support.
    pub conditional: Option<ConditionalImpurityState>,
}

pub fn postselect(state: &ScatteredState, outcome: Spin) -> PostSelectionResult {
    let offset = 4 * outcome.bit();
    let projected: [C64; 4] = std::array::from_fn(|i| state.transmitted[offset + i]);
    let probability: f64 = projected.iter().map(|z| z.norm_sqr()).sum();
    let conditional = (probability >= NO_SUPPORT).then(|| {
        let norm = probability.sqrt();
        let amplitudes = projected.map(|z| z / norm);
        ConditionalImpurityState {
            amplitudes,
            density: density_from_pure(&amplitudes),
            concurrence: pure_concurrence(&amplitudes),
        }
    });
    PostSelectionResult {
        outcome,
        probability,
        conditional,
    }
}

#[derive(Clone, Debug)]
pub struct FixedPointSubspace {
    pub dimension: usize,
    /// Orthonormal product-basis vectors left unchanged by transmission.
    pub basis: Vec<Vec8>,
    pub singular_values: Vec<f64>,
}

/// Eigenspace of the product-basis transmission matrix for eigenvalue 1,
/// from the right singular vectors of `T - I` with singular value `< tol`.
pub fn fixed_point_subspace(p: &DimensionlessParams, tol: f64) -> Result<FixedPointSubspace> {
    let t = waveguide::scattering_matrices(p)?.to_product_basis().transmission;
    let svd = SVD::new(t - Mat8::identity(), false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut basis = Vec::new();
    for (i, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma < tol {
            basis.push(v_t.row(i).adjoint());
        }
    }
    Ok(FixedPointSubspace {
        dimension: basis.len(),
        basis,
        singular_values: svd.singular_values.iter().copied().collect(),
    })
}

/// Largest principal angle between two spans (`pi/2` if dimensions differ).
pub fn subspace_angle(a: &[Vec8], b: &[Vec8]) -> f64 {
    if a.len() != b.len() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.is_empty() {
        return 0.0;
    }
    let orthonormal = |vs: &[Vec8]| {
        let m = DMatrix::from_fn(8, vs.len(), |r, c| vs[c][r]);
        m.qr().q()
    };
    let qa = orthonormal(a);
    let qb = orthonormal(b);
    // sine of the largest angle = largest singular value of (I - Pb) Qa
    let residual = &qa - &qb * (qb.adjoint() * &qa);
    let sine = residual
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    sine.min(1.0).asin()
}

/// Largest commutator entries of the scattering matrices with conserved (or
/// not) spin operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryReport {
    pub total_squared: f64,
    pub total_z: f64,
    pub pair_squared: f64,
    pub electron_second_squared: f64,
}

pub fn symmetry_report(p: &DimensionlessParams) -> Result<SymmetryReport> {
    let s = waveguide::scattering_matrices(p)?.to_product_basis();
    let ops = operators();
    let norm = |op: &Mat8| {
        let t = spin_algebra::commutator(op, &s.transmission);
        let r = spin_algebra::commutator(op, &s.reflection);
        t.iter().chain(r.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    };
    Ok(SymmetryReport {
        total_squared: norm(&ops.total_squared),
        total_z: norm(&ops.total_z),
        pair_squared: norm(&ops.pair_squared),
        electron_second_squared: norm(&ops.electron_second_squared),
    })
}
