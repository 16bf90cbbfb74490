//! Spin space of the electron and the two impurities.
//!
//! Product-basis index is `4 e + 2 a + b` where `e`, `a`, `b` are the
//! electron, impurity-1 and impurity-2 projections with up = 0, down = 1.
//! All spin operators are dimensionless (units of hbar).

mod angular;
mod basis;

use std::ops::Index;

use nalgebra::{Matrix2, SMatrix, SVector};
use num_complex::Complex64;

pub use angular::{clebsch_gordan, recoupling_coefficient, wigner_6j, HalfInt};
pub use basis::{
    coupled_basis, coupled_to_product, product_to_coupled, s_e1_squared_in_doublet, CoupledBasis,
    CoupledLabel, COUPLED_LABELS,
};
pub(crate) use basis::doublet_index;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat8 = SMatrix<C64, 8, 8>;
pub type Vec8 = SVector<C64, 8>;

pub(crate) const NORM_TOL: f64 = 1e-12;

/// Projection of a single spin-1/2 along z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

pub fn product_index(electron: Spin, first: Spin, second: Spin) -> usize {
    4 * electron.bit() + 2 * first.bit() + second.bit()
}

/// Eight complex amplitudes over the electron x impurity-1 x impurity-2
/// product basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinVector {
    amplitudes: Vec8,
}

impl SpinVector {
    /// Wraps amplitudes without any normalization requirement.
    pub fn unnormalized(amplitudes: Vec8) -> Self {
        Self { amplitudes }
    }

    /// Wraps amplitudes that must already have unit norm.
    pub fn normalized(amplitudes: Vec8) -> Result<Self> {
        let v = Self { amplitudes };
        v.require_normalized()?;
        Ok(v)
    }

    /// Rescales to unit norm; fails for the zero vector.
    pub fn normalize(amplitudes: Vec8) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn basis_state(electron: Spin, first: Spin, second: Spin) -> Self {
        let mut amplitudes = Vec8::zeros();
        amplitudes[product_index(electron, first, second)] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// `(electron) ⊗ (impurities)`, with the impurity pair indexed `2 a + b`.
    pub fn from_parts(electron: [C64; 2], impurities: [C64; 4]) -> Self {
        let amplitudes = Vec8::from_fn(|i, _| electron[i / 4] * impurities[i % 4]);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &Vec8 {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_squared() - 1.0).abs() <= NORM_TOL
    }

    pub fn require_normalized(&self) -> Result<()> {
        let n2 = self.norm_squared();
        if !n2.is_finite() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(())
    }

    /// `<self|other>`
    pub fn inner(&self, other: &SpinVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|<self|other>|^2` for unit vectors.
    pub fn fidelity(&self, other: &SpinVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

impl Index<usize> for SpinVector {
    type Output = C64;

    fn index(&self, index: usize) -> &C64 {
        &self.amplitudes[index]
    }
}

/// Named two-impurity states, indexed `2 a + b`.
pub mod pair {
    use super::C64;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    pub fn psi_plus() -> [C64; 4] {
        [C64::from(0.0), C64::from(H), C64::from(H), C64::from(0.0)]
    }

    pub fn psi_minus() -> [C64; 4] {
        [C64::from(0.0), C64::from(H), C64::from(-H), C64::from(0.0)]
    }

    /// `cos t |ud> + e^{i phi} sin t |du>`
    pub fn one_up_family(vartheta: f64, phi: f64) -> [C64; 4] {
        [
            C64::from(0.0),
            C64::from(vartheta.cos()),
            C64::from_polar(vartheta.sin(), phi),
            C64::from(0.0),
        ]
    }

    /// `cos t |uu> + e^{i phi} sin t |dd>`
    pub fn aligned_family(vartheta: f64, phi: f64) -> [C64; 4] {
        [
            C64::from(vartheta.cos()),
            C64::from(0.0),
            C64::from(0.0),
            C64::from_polar(vartheta.sin(), phi),
        ]
    }

    pub fn product(first: super::Spin, second: super::Spin) -> [C64; 4] {
        let mut out = [C64::from(0.0); 4];
        out[2 * first.bit() + second.bit()] = C64::from(1.0);
        out
    }
}

pub fn electron_state(spin: Spin) -> [C64; 2] {
    match spin {
        Spin::Up => [C64::from(1.0), C64::from(0.0)],
        Spin::Down => [C64::from(0.0), C64::from(1.0)],
    }
}

fn pauli_halves() -> [Matrix2<C64>; 3] {
    let z = C64::from(0.0);
    let half = C64::from(0.5);
    let i_half = C64::new(0.0, 0.5);
    [
        Matrix2::new(z, half, half, z),
        Matrix2::new(z, -i_half, i_half, z),
        Matrix2::new(half, z, z, -half),
    ]
}

fn kron3(a: &Matrix2<C64>, b: &Matrix2<C64>, c: &Matrix2<C64>) -> Mat8 {
    a.kronecker(&b.kronecker(c)).fixed_view::<8, 8>(0, 0).into_owned()
}

/// Spin operators on the 8-dimensional product space.
#[derive(Clone, Debug)]
pub struct SpinOperatorSet {
    pub sigma_dot_s1: Mat8,
    pub sigma_dot_s2: Mat8,
    pub total_squared: Mat8,
    pub total_z: Mat8,
    /// Total-spin lowering operator `S_-`.
    pub total_lowering: Mat8,
    pub pair_squared: Mat8,
    pub electron_first_squared: Mat8,
    pub electron_second_squared: Mat8,
}

impl SpinOperatorSet {
    pub fn new() -> Self {
        let id = Matrix2::<C64>::identity();
        let s = pauli_halves();
        let electron: [Mat8; 3] = std::array::from_fn(|k| kron3(&s[k], &id, &id));
        let first: [Mat8; 3] = std::array::from_fn(|k| kron3(&id, &s[k], &id));
        let second: [Mat8; 3] = std::array::from_fn(|k| kron3(&id, &id, &s[k]));

        let dot = |a: &[Mat8; 3], b: &[Mat8; 3]| -> Mat8 { (0..3).map(|k| a[k] * b[k]).sum() };
        let squared_sum = |parts: &[&[Mat8; 3]]| -> Mat8 {
            (0..3)
                .map(|k| {
                    let c: Mat8 = parts.iter().map(|p| p[k]).sum();
                    c * c
                })
                .sum()
        };

        let lowering = |m: &[Mat8; 3]| m[0] - m[1] * C64::i();
        Self {
            sigma_dot_s1: dot(&electron, &first),
            sigma_dot_s2: dot(&electron, &second),
            total_squared: squared_sum(&[&electron, &first, &second]),
            total_z: electron[2] + first[2] + second[2],
            total_lowering: lowering(&electron) + lowering(&first) + lowering(&second),
            pair_squared: squared_sum(&[&first, &second]),
            electron_first_squared: squared_sum(&[&electron, &first]),
            electron_second_squared: squared_sum(&[&electron, &second]),
        }
    }

    /// Hermitian operators by name, for symmetry reports and tests.
    pub fn named(&self) -> [(&'static str, &Mat8); 7] {
        [
            ("sigma.S1", &self.sigma_dot_s1),
            ("sigma.S2", &self.sigma_dot_s2),
            ("S^2", &self.total_squared),
            ("S_z", &self.total_z),
            ("S12^2", &self.pair_squared),
            ("Se1^2", &self.electron_first_squared),
            ("Se2^2", &self.electron_second_squared),
        ]
    }
}

impl Default for SpinOperatorSet {
    fn default() -> Self {
        Self::new()
    }
}

pub fn operators() -> &'static SpinOperatorSet {
    static OPS: std::sync::OnceLock<SpinOperatorSet> = std::sync::OnceLock::new();
    OPS.get_or_init(SpinOperatorSet::new)
}

pub fn commutator(a: &Mat8, b: &Mat8) -> Mat8 {
    a * b - b * a
}

pub(crate) fn max_abs(m: &Mat8) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `<s'_e2| S_e1^2 |s_e2>` in the total-spin-1/2 sector from the 6j
/// recoupling between `|imp1, (e imp2) s_e2; 1/2>` and
/// `|(imp1 e) s_e1, imp2; 1/2>`. Indexed `(s'_e2, s_e2)`.
pub fn recoupling_matrix_elements() -> Matrix2<f64> {
    let half = HalfInt::from_doubled(1);
    let intermediate = [HalfInt::from_doubled(0), HalfInt::from_doubled(2)];
    let overlap = |s_e1: HalfInt, s_e2: HalfInt| {
        recoupling_coefficient(half, half, half, s_e1, s_e2, half)
            .expect("valid spin-1/2 labels")
    };
    Matrix2::from_fn(|row, col| {
        intermediate
            .iter()
            .map(|&s_e1| {
                let x = s_e1.value();
                x * (x + 1.0) * overlap(s_e1, intermediate[row]) * overlap(s_e1, intermediate[col])
            })
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hermitian(m: &Mat8) -> bool {
        max_abs(&(m - m.adjoint())) < 1e-12
    }

    #[test]
    fn operators_are_hermitian() {
        let ops = operators();
        for (name, m) in ops.named() {
            assert!(is_hermitian(m), "{name}");
        }
    }

    #[test]
    fn exchange_identity() {
        let ops = operators();
        let id = Mat8::identity();
        let d1 = ops.sigma_dot_s1 - (ops.electron_first_squared - id * C64::from(1.5)) * C64::from(0.5);
        let d2 = ops.sigma_dot_s2 - (ops.electron_second_squared - id * C64::from(1.5)) * C64::from(0.5);
        assert!(max_abs(&d1) < 1e-12);
        assert!(max_abs(&d2) < 1e-12);
    }

    #[test]
    fn commutation_pattern() {
        let ops = operators();
        assert!(max_abs(&commutator(&ops.electron_first_squared, &ops.electron_second_squared)) > 0.1);
        assert!(max_abs(&commutator(&ops.total_squared, &ops.total_z)) < 1e-12);
        assert!(max_abs(&commutator(&ops.total_squared, &ops.pair_squared)) < 1e-12);
    }

    #[test]
    fn recoupling_values() {
        let m = recoupling_matrix_elements();
        let s3 = 3f64.sqrt();
        assert!((m[(0, 0)] - 1.5).abs() < 1e-12);
        assert!((m[(1, 0)] - s3 / 2.0).abs() < 1e-12);
        assert!((m[(0, 1)] - s3 / 2.0).abs() < 1e-12);
        assert!((m[(1, 1)] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn recoupling_matches_operator_sandwich() {
        let m = recoupling_matrix_elements();
        for twice_m in [1, -1] {
            let sandwich = s_e1_squared_in_doublet(twice_m);
            assert!((m - sandwich).abs().max() < 1e-12, "m = {twice_m}/2");
        }
    }

    #[test]
    fn normalization_checks() {
        assert!(SpinVector::normalized(Vec8::zeros()).is_err());
        assert!(SpinVector::normalize(Vec8::zeros()).is_err());
        let v = SpinVector::normalize(Vec8::from_element(C64::new(1.0, 1.0))).unwrap();
        assert!(v.is_normalized());
        let raw = SpinVector::unnormalized(Vec8::from_element(C64::from(1.0)));
        assert!(!raw.is_normalized());
        assert!(raw.require_normalized().is_err());
    }

    #[test]
    fn from_parts_layout() {
        let v = SpinVector::from_parts(electron_state(Spin::Down), pair::product(Spin::Up, Spin::Down));
        assert_eq!(v[product_index(Spin::Down, Spin::Up, Spin::Down)], C64::from(1.0));
        assert_eq!(v, SpinVector::basis_state(Spin::Down, Spin::Up, Spin::Down));
        assert_eq!(product_index(Spin::Down, Spin::Up, Spin::Down), 5);
    }
}
