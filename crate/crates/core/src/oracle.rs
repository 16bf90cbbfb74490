//! Brute-force scattering in the full 8-dimensional product spin space.
//!
//! Each site is a matrix-valued delta: the wavefunction `psi` (8 spin
//! components) is continuous and `psi'/k` jumps by `2 g_i (sigma . S_i) psi`.
//! Sites are composed as 16x16 transfer matrices acting on `(psi, psi'/k)`;
//! no coupled-basis structure is used anywhere in this module.

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::spin_algebra::{operators, Mat8, SpinVector, Vec8, C64};

pub type Mat16 = SMatrix<C64, 16, 16>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Impurity {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpuritySite {
    pub position: f64,
    /// Dimensionless strength: `psi'/k` jumps by `coupling * 2 sigma.S psi`.
    pub coupling: f64,
    pub impurity: Impurity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImpurityChain {
    k: f64,
    sites: Vec<ImpuritySite>,
}

impl ImpurityChain {
    pub fn new(k: f64, sites: Vec<ImpuritySite>) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParams(format!("wave number {k} must be > 0")));
        }
        for site in &sites {
            if !site.position.is_finite() || !site.coupling.is_finite() || site.coupling < 0.0 {
                return Err(Error::InvalidParams(format!("invalid site {site:?}")));
            }
        }
        if sites.windows(2).any(|w| w[1].position <= w[0].position) {
            return Err(Error::InvalidParams(
                "site positions must be strictly increasing".into(),
            ));
        }
        Ok(Self { k, sites })
    }

    /// Impurity 1 at `x = 0`, impurity 2 at `x = 1`, `k = theta`, each with
    /// coupling `pi u / 2`, which reproduces `J sigma.S_i delta(x - x_i)`.
    pub fn two_impurity(u: f64, theta: f64) -> Result<Self> {
        let coupling = std::f64::consts::PI * u / 2.0;
        Self::new(
            theta,
            vec![
                ImpuritySite {
                    position: 0.0,
                    coupling,
                    impurity: Impurity::First,
                },
                ImpuritySite {
                    position: 1.0,
                    coupling,
                    impurity: Impurity::Second,
                },
            ],
        )
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn sites(&self) -> &[ImpuritySite] {
        &self.sites
    }
}

/// Left- and right-incidence transmission/reflection in the product basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullScatteringMatrix {
    pub transmission: Mat8,
    pub reflection: Mat8,
    pub transmission_right: Mat8,
    pub reflection_right: Mat8,
}

impl FullScatteringMatrix {
    /// `[[R, T'], [T, R']]` mapping incoming (from left, from right) to
    /// outgoing (to left, to right).
    pub fn s_matrix(&self) -> Mat16 {
        let mut s = Mat16::zeros();
        s.fixed_view_mut::<8, 8>(0, 0).copy_from(&self.reflection);
        s.fixed_view_mut::<8, 8>(0, 8).copy_from(&self.transmission_right);
        s.fixed_view_mut::<8, 8>(8, 0).copy_from(&self.transmission);
        s.fixed_view_mut::<8, 8>(8, 8).copy_from(&self.reflection_right);
        s
    }

    /// Largest entry of `[O ⊗ 1_2, S]` for a spin operator `O`.
    pub fn commutator_norm(&self, op: &Mat8) -> f64 {
        let mut lifted = Mat16::zeros();
        lifted.fixed_view_mut::<8, 8>(0, 0).copy_from(op);
        lifted.fixed_view_mut::<8, 8>(8, 8).copy_from(op);
        let s = self.s_matrix();
        (lifted * s - s * lifted)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn block(tl: &Mat8, tr: &Mat8, bl: &Mat8, br: &Mat8) -> Mat16 {
    let mut m = Mat16::zeros();
    m.fixed_view_mut::<8, 8>(0, 0).copy_from(tl);
    m.fixed_view_mut::<8, 8>(0, 8).copy_from(tr);
    m.fixed_view_mut::<8, 8>(8, 0).copy_from(bl);
    m.fixed_view_mut::<8, 8>(8, 8).copy_from(br);
    m
}

/// `(psi, psi'/k)` in terms of plane-wave amplitudes `(a, b)` at `x`.
fn plane_waves(k: f64, x: f64) -> Mat16 {
    let id = Mat8::identity();
    let f = C64::from_polar(1.0, k * x);
    let b = f.conj();
    let i = C64::i();
    block(&(id * f), &(id * b), &(id * (i * f)), &(id * (-i * b)))
}

fn plane_waves_inverse(k: f64, x: f64) -> Mat16 {
    let id = Mat8::identity();
    let f = C64::from_polar(1.0, k * x);
    let b = f.conj();
    let i = C64::i();
    // a = (psi - i psi'/k) / (2 e^{ikx}), b = (psi + i psi'/k) / (2 e^{-ikx})
    block(
        &(id * (0.5 * b)),
        &(id * (-0.5 * i * b)),
        &(id * (0.5 * f)),
        &(id * (0.5 * i * f)),
    )
}

fn free_propagation(k: f64, distance: f64) -> Mat16 {
    let id = Mat8::identity();
    let (s, c) = (k * distance).sin_cos();
    block(
        &(id * C64::from(c)),
        &(id * C64::from(s)),
        &(id * C64::from(-s)),
        &(id * C64::from(c)),
    )
}

fn site_transfer(potential: &Mat8) -> Mat16 {
    let id = Mat8::identity();
    block(&id, &Mat8::zeros(), potential, &id)
}

fn site_potential(site: &ImpuritySite) -> Mat8 {
    let ops = operators();
    let exchange = match site.impurity {
        Impurity::First => &ops.sigma_dot_s1,
        Impurity::Second => &ops.sigma_dot_s2,
    };
    exchange * C64::from(2.0 * site.coupling)
}

/// Transfer matrix in the plane-wave amplitude basis, from just left of the
/// first site to just right of the last.
pub fn amplitude_transfer(chain: &ImpurityChain) -> Mat16 {
    let k = chain.k;
    let Some(first) = chain.sites.first() else {
        return Mat16::identity();
    };
    let mut m = Mat16::identity();
    let mut x = first.position;
    for site in &chain.sites {
        m = site_transfer(&site_potential(site)) * free_propagation(k, site.position - x) * m;
        x = site.position;
    }
    plane_waves_inverse(k, x) * m * plane_waves(k, first.position)
}

pub fn oracle_scattering(chain: &ImpurityChain) -> Result<FullScatteringMatrix> {
    let m = amplitude_transfer(chain);
    let m11 = m.fixed_view::<8, 8>(0, 0).into_owned();
    let m12 = m.fixed_view::<8, 8>(0, 8).into_owned();
    let m21 = m.fixed_view::<8, 8>(8, 0).into_owned();
    let m22 = m.fixed_view::<8, 8>(8, 8).into_owned();
    let m22_inv = m22
        .try_inverse()
        .ok_or(Error::Singular(f64::INFINITY))?;
    let reflection = -m22_inv * m21;
    Ok(FullScatteringMatrix {
        transmission: m11 + m12 * reflection,
        reflection,
        transmission_right: m22_inv,
        reflection_right: m12 * m22_inv,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleTransmission {
    pub transmittivity: f64,
    /// Transmitted product-basis amplitudes.
    pub amplitudes: Vec8,
}

pub fn oracle_transmittivity(chain: &ImpurityChain, chi: &SpinVector) -> Result<OracleTransmission> {
    chi.require_normalized()?;
    let s = oracle_scattering(chain)?;
    let amplitudes = s.transmission * chi.amplitudes();
    Ok(OracleTransmission {
        transmittivity: amplitudes.norm_squared(),
        amplitudes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::{electron_state, pair, Spin};
    use nalgebra::SymmetricEigen;
    use std::f64::consts::PI;

    fn max_abs16(m: &Mat16) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn empty_chain_is_free() {
        let chain = ImpurityChain::new(1.0, vec![]).unwrap();
        let s = oracle_scattering(&chain).unwrap();
        assert_eq!(s.transmission, Mat8::identity());
        assert_eq!(s.reflection, Mat8::zeros());
    }

    #[test]
    fn invalid_chains() {
        let site = |position| ImpuritySite {
            position,
            coupling: 1.0,
            impurity: Impurity::First,
        };
        assert!(ImpurityChain::new(1.0, vec![site(1.0), site(1.0)]).is_err());
        assert!(ImpurityChain::new(1.0, vec![site(1.0), site(0.5)]).is_err());
        assert!(ImpurityChain::new(0.0, vec![site(0.0)]).is_err());
        let negative = ImpuritySite {
            coupling: -1.0,
            ..site(0.0)
        };
        assert!(ImpurityChain::new(1.0, vec![negative]).is_err());
    }

    #[test]
    fn unitary_s_matrix() {
        for (u, theta) in [(1.0, 0.4), (10.0, 2.0), (0.2, 5.5)] {
            let s = oracle_scattering(&ImpurityChain::two_impurity(u, theta).unwrap()).unwrap().s_matrix();
            assert!(max_abs16(&(s.adjoint() * s - Mat16::identity())) < 1e-10);
        }
    }

    #[test]
    fn zero_coupling_transmits_everything() {
        let chain = ImpurityChain::two_impurity(0.0, 1.7).unwrap();
        let chi = SpinVector::from_parts(electron_state(Spin::Up), pair::psi_plus());
        let t = oracle_transmittivity(&chain, &chi).unwrap();
        assert!((t.transmittivity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized_input() {
        let chain = ImpurityChain::two_impurity(1.0, 1.0).unwrap();
        let chi = SpinVector::unnormalized(Vec8::from_element(C64::from(1.0)));
        assert!(oracle_transmittivity(&chain, &chi).is_err());
    }

    #[test]
    fn conserves_total_spin() {
        let ops = operators();
        let s = oracle_scattering(&ImpurityChain::two_impurity(3.0, 1.1).unwrap()).unwrap();
        assert!(s.commutator_norm(&ops.total_squared) < 1e-10);
        assert!(s.commutator_norm(&ops.total_z) < 1e-10);
    }

    #[test]
    fn pair_spin_conserved_on_resonance() {
        let ops = operators();
        let s = oracle_scattering(&ImpurityChain::two_impurity(10.0, PI).unwrap()).unwrap();
        assert!(s.commutator_norm(&ops.pair_squared) < 1e-10);
        let off = oracle_scattering(&ImpurityChain::two_impurity(10.0, 2.0).unwrap()).unwrap();
        assert!(off.commutator_norm(&ops.pair_squared) > 1e-3);
    }

    #[test]
    fn agrees_with_channel_solver() {
        for (u, theta) in [(1.0, 0.4), (10.0, 2.0), (0.2, 5.5), (2.0, PI)] {
            let s = oracle_scattering(&ImpurityChain::two_impurity(u, theta).unwrap()).unwrap();
            let p = crate::DimensionlessParams::new(u, theta).unwrap();
            let pipeline = crate::waveguide::scattering_matrices(&p).unwrap().to_product_basis();
            assert!((s.transmission - pipeline.transmission).map(|z| z.norm()).max() < 1e-10);
            assert!((s.reflection - pipeline.reflection).map(|z| z.norm()).max() < 1e-10);
        }
    }

    #[test]
    fn reciprocity() {
        // with spin, reciprocity pairs left incidence with time-reversed
        // right incidence: T' = Y T^T Y^-1, Y = (i sigma_y)^{⊗3}
        let s = oracle_scattering(&ImpurityChain::two_impurity(2.0, 0.9).unwrap()).unwrap();
        let iy = nalgebra::Matrix2::new(C64::from(0.0), C64::from(1.0), C64::from(-1.0), C64::from(0.0));
        let y: Mat8 = iy.kronecker(&iy.kronecker(&iy)).fixed_view::<8, 8>(0, 0).into_owned();
        let y_inv = y.try_inverse().unwrap();
        let mirrored = y * s.transmission.transpose() * y_inv;
        assert!((mirrored - s.transmission_right).map(|z| z.norm()).max() < 1e-10);

        let left = s.transmission.singular_values();
        let right = s.transmission_right.singular_values();
        let (mut left, mut right): (Vec<f64>, Vec<f64>) = (left.iter().copied().collect(), right.iter().copied().collect());
        left.sort_by(f64::total_cmp);
        right.sort_by(f64::total_cmp);
        for (a, b) in left.iter().zip(&right) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn single_impurity_splits_into_static_channels() {
        // diagonalize the site matrix numerically; each eigen-channel is a
        // scalar delta with t = 1 / (1 + i lambda / 2) where lambda is the
        // jump of psi'/k per unit psi.
        let g = 1.7;
        let site = ImpuritySite {
            position: 0.3,
            coupling: g,
            impurity: Impurity::First,
        };
        let chain = ImpurityChain::new(2.0, vec![site]).unwrap();
        let s = oracle_scattering(&chain).unwrap();
        let eig = SymmetricEigen::new(site_potential(&site));
        let mut distinct: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(distinct.len(), 2);
        assert!((distinct[0] + 1.5 * g).abs() < 1e-12);
        assert!((distinct[1] - 0.5 * g).abs() < 1e-12);
        for (idx, lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(idx).into_owned();
            let t = 1.0 / (1.0 + C64::new(0.0, lambda / 2.0));
            // phase reference shifts by the site position for left incidence
            assert!((s.transmission * v - v * t).norm() < 1e-10);
        }
    }

    #[test]
    fn far_separated_chains_compose() {
        // oracle(A ∪ B) vs Fabry-Perot composition of the two sub-chains
        let k = 1.3;
        let a = ImpuritySite {
            position: 0.0,
            coupling: 0.8,
            impurity: Impurity::First,
        };
        let b = ImpuritySite {
            position: 57.0,
            coupling: 1.9,
            impurity: Impurity::Second,
        };
        let full = oracle_scattering(&ImpurityChain::new(k, vec![a, b]).unwrap()).unwrap();
        let sa = oracle_scattering(&ImpurityChain::new(k, vec![a]).unwrap()).unwrap();
        let sb = oracle_scattering(&ImpurityChain::new(k, vec![b]).unwrap()).unwrap();
        let id = Mat8::identity();
        let loop_inv = (id - sa.reflection_right * sb.reflection).try_inverse().unwrap();
        let t = sb.transmission * loop_inv * sa.transmission;
        let r = sa.reflection + sa.transmission_right * sb.reflection * loop_inv * sa.transmission;
        assert!((full.transmission - t).map(|z| z.norm()).max() < 1e-10);
        assert!((full.reflection - r).map(|z| z.norm()).max() < 1e-10);
    }
}
