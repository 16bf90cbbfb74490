//! The coupled basis `|s_e2; s, m>`: common eigenvectors of `S_e2^2`, `S^2`
//! and `S_z`.
//!
//! The highest-weight state of each `(s_e2, s)` multiplet is found
//! numerically as the null vector of a positive semidefinite penalty
//! operator, its phase fixed by making the first non-negligible product
//! component real and positive. Lower members follow from the total-spin
//! lowering operator, which has non-negative matrix elements in the
//! Condon–Shortley convention.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::{Matrix2, SymmetricEigen};

use super::{max_abs, operators, pair, electron_state, Mat8, Spin, SpinVector, Vec8, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoupledLabel {
    pub s_e2: u8,
    pub twice_s: i32,
    pub twice_m: i32,
}

impl CoupledLabel {
    const fn new(s_e2: u8, twice_s: i32, twice_m: i32) -> Self {
        Self {
            s_e2,
            twice_s,
            twice_m,
        }
    }

    pub fn is_quartet(&self) -> bool {
        self.twice_s == 3
    }

    fn eigenvalues(&self) -> (f64, f64, f64) {
        let se2 = f64::from(self.s_e2);
        let s = f64::from(self.twice_s) / 2.0;
        (se2 * (se2 + 1.0), s * (s + 1.0), f64::from(self.twice_m) / 2.0)
    }
}

impl fmt::Display for CoupledLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{};{}/2,{}/2>", self.s_e2, self.twice_s, self.twice_m)
    }
}

/// Coupled-basis ordering used for every coupled-basis vector and matrix:
/// the four quartet states by decreasing `m`, then the doublet pairs
/// `(s_e2 = 0, 1)` for `m = +1/2` and `m = -1/2`.
pub const COUPLED_LABELS: [CoupledLabel; 8] = [
    CoupledLabel::new(1, 3, 3),
    CoupledLabel::new(1, 3, 1),
    CoupledLabel::new(1, 3, -1),
    CoupledLabel::new(1, 3, -3),
    CoupledLabel::new(0, 1, 1),
    CoupledLabel::new(1, 1, 1),
    CoupledLabel::new(0, 1, -1),
    CoupledLabel::new(1, 1, -1),
];

/// Index into [`COUPLED_LABELS`] of the doublet state `|s_e2; 1/2, m>`.
pub(crate) fn doublet_index(s_e2: usize, twice_m: i32) -> usize {
    match twice_m {
        1 => 4 + s_e2,
        -1 => 6 + s_e2,
        _ => panic!("doublet projection must be +-1/2"),
    }
}

pub struct CoupledBasis {
    vectors: [SpinVector; 8],
    /// Columns are the coupled vectors in the product basis.
    unitary: Mat8,
}

impl CoupledBasis {
    pub fn labels(&self) -> &'static [CoupledLabel; 8] {
        &COUPLED_LABELS
    }

    pub fn vector(&self, index: usize) -> &SpinVector {
        &self.vectors[index]
    }

    pub fn vectors(&self) -> &[SpinVector; 8] {
        &self.vectors
    }

    pub fn unitary(&self) -> &Mat8 {
        &self.unitary
    }

    fn build() -> Self {
        let ops = operators();
        let id = Mat8::identity();
        let highest = |label: CoupledLabel| -> Vec8 {
            let (le, ls, lm) = label.eigenvalues();
            let a = ops.electron_second_squared - id * C64::from(le);
            let b = ops.total_squared - id * C64::from(ls);
            let c = ops.total_z - id * C64::from(lm);
            let penalty = a.adjoint() * a + b.adjoint() * b + c.adjoint() * c;
            let eig = SymmetricEigen::new(penalty);
            let mut order: Vec<usize> = (0..8).collect();
            order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            assert!(eig.eigenvalues[order[0]].abs() < 1e-10, "{label} has no eigenvector");
            assert!(eig.eigenvalues[order[1]] > 0.1, "{label} is degenerate");
            fix_phase(eig.eigenvectors.column(order[0]).into_owned())
        };

        let slot_of = |label: CoupledLabel| {
            COUPLED_LABELS
                .iter()
                .position(|l| *l == label)
                .expect("label present")
        };
        let mut columns = [Vec8::zeros(); 8];
        for top in COUPLED_LABELS.iter().filter(|l| l.twice_m == l.twice_s) {
            let mut v = highest(*top);
            columns[slot_of(*top)] = v;
            for twice_m in (-top.twice_s..top.twice_s).step_by(2).rev() {
                let lowered = ops.total_lowering * v;
                v = lowered.unscale(lowered.norm());
                columns[slot_of(CoupledLabel::new(top.s_e2, top.twice_s, twice_m))] = v;
            }
        }

        let unitary = Mat8::from_columns(&columns);
        let vectors = columns.map(SpinVector::unnormalized);
        let basis = Self { vectors, unitary };
        basis.validate();
        basis
    }

    fn validate(&self) {
        let ops = operators();
        let gram = self.unitary.adjoint() * self.unitary;
        assert!(max_abs(&(gram - Mat8::identity())) < 1e-12, "coupled basis not orthonormal");
        for (v, label) in self.vectors.iter().zip(COUPLED_LABELS.iter()) {
            let (le, ls, lm) = label.eigenvalues();
            for (op, value) in [
                (&ops.electron_second_squared, le),
                (&ops.total_squared, ls),
                (&ops.total_z, lm),
            ] {
                let residual = (op * v.amplitudes() - v.amplitudes() * C64::from(value)).norm();
                assert!(residual < 1e-12, "{label} eigen residual {residual}");
            }
        }
        // (1/2)|0;1/2,m> + (sqrt3/2)|1;1/2,m> = |e>|Psi->, with positive coefficients
        let s3 = 3f64.sqrt();
        for (twice_m, electron) in [(1, Spin::Up), (-1, Spin::Down)] {
            let lhs = self.vectors[doublet_index(0, twice_m)].amplitudes() * C64::from(0.5)
                + self.vectors[doublet_index(1, twice_m)].amplitudes() * C64::from(s3 / 2.0);
            let rhs = SpinVector::from_parts(electron_state(electron), pair::psi_minus());
            assert!(
                (lhs - rhs.amplitudes()).norm() < 1e-12,
                "singlet identity fails for m = {twice_m}/2"
            );
        }
    }
}

fn fix_phase(v: Vec8) -> Vec8 {
    let pivot = v
        .iter()
        .find(|z| z.norm() > 1e-8)
        .copied()
        .expect("nonzero eigenvector");
    let phase = pivot.conj() / pivot.norm();
    (v * phase).unscale(v.norm())
}

pub fn coupled_basis() -> &'static CoupledBasis {
    static BASIS: OnceLock<CoupledBasis> = OnceLock::new();
    BASIS.get_or_init(CoupledBasis::build)
}

/// Coefficients `<s_e2; s, m|v>` in [`COUPLED_LABELS`] order.
pub fn product_to_coupled(v: &Vec8) -> Vec8 {
    coupled_basis().unitary().adjoint() * v
}

pub fn coupled_to_product(c: &Vec8) -> Vec8 {
    coupled_basis().unitary() * c
}

/// `<s'_e2; 1/2, m| S_e1^2 |s_e2; 1/2, m>` by direct sandwiching with the
/// coupled vectors, indexed `(s'_e2, s_e2)`.
pub fn s_e1_squared_in_doublet(twice_m: i32) -> Matrix2<f64> {
    let basis = coupled_basis();
    let op = &operators().electron_first_squared;
    Matrix2::from_fn(|row, col| {
        let bra = basis.vector(doublet_index(row, twice_m)).amplitudes();
        let ket = basis.vector(doublet_index(col, twice_m)).amplitudes();
        let element = bra.dotc(&(op * ket));
        debug_assert!(element.im.abs() < 1e-12);
        element.re
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::{clebsch_gordan, product_index, HalfInt};

    fn up_up_up() -> Vec8 {
        *SpinVector::basis_state(Spin::Up, Spin::Up, Spin::Up).amplitudes()
    }

    #[test]
    fn stretched_state() {
        let b = coupled_basis();
        assert!((b.vector(0).amplitudes() - up_up_up()).norm() < 1e-12);
        assert!((b.vector(0)[0] - C64::from(1.0)).norm() < 1e-12);
    }

    #[test]
    fn singlet_decomposition() {
        let chi = SpinVector::from_parts(electron_state(Spin::Up), pair::psi_minus());
        let c = product_to_coupled(chi.amplitudes());
        let mut expected = Vec8::zeros();
        expected[4] = C64::from(0.5);
        expected[5] = C64::from(3f64.sqrt() / 2.0);
        assert!((c - expected).norm() < 1e-12);
    }

    #[test]
    fn up_up_up_is_pure_quartet() {
        let c = product_to_coupled(&up_up_up());
        assert!((c[0] - C64::from(1.0)).norm() < 1e-12);
        assert!(c.rows(1, 7).norm() < 1e-12);
    }

    #[test]
    fn down_down_lives_in_minus_half() {
        let v = SpinVector::basis_state(Spin::Up, Spin::Down, Spin::Down);
        let c = product_to_coupled(v.amplitudes());
        // oracle: direct Gram projections onto each coupled vector
        let b = coupled_basis();
        for (i, label) in COUPLED_LABELS.iter().enumerate() {
            let projection = b.vector(i).inner(&v);
            assert!((projection - c[i]).norm() < 1e-12);
            if label.twice_m != -1 {
                assert!(c[i].norm() < 1e-12, "{label}");
            }
        }
        assert!((c.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quartet_pair_spin() {
        let b = coupled_basis();
        let v = b.vector(2).amplitudes();
        let value = v.dotc(&(operators().pair_squared * v));
        assert!((value - C64::from(2.0)).norm() < 1e-12);
    }

    #[test]
    fn matches_condon_shortley_construction() {
        // |s_e2; s, m> = sum <1/2 m1; s_e2 m_e2|s m> |m1>_imp1 |s_e2 m_e2>_(e,imp2)
        let h = HalfInt::from_doubled;
        let spins = [Spin::Up, Spin::Down];
        let twice = |s: Spin| if s == Spin::Up { 1 } else { -1 };
        let b = coupled_basis();
        for (i, label) in COUPLED_LABELS.iter().enumerate() {
            let mut v = Vec8::zeros();
            for &e in &spins {
                for &a in &spins {
                    for &c in &spins {
                        let m_e2 = twice(e) + twice(c);
                        let inner = clebsch_gordan(h(1), h(twice(e)), h(1), h(twice(c)), h(2 * label.s_e2 as i32), h(m_e2))
                            .unwrap_or(0.0);
                        if inner == 0.0 {
                            continue;
                        }
                        let outer = clebsch_gordan(
                            h(1),
                            h(twice(a)),
                            h(2 * label.s_e2 as i32),
                            h(m_e2),
                            h(label.twice_s),
                            h(label.twice_m),
                        )
                        .unwrap();
                        v[product_index(e, a, c)] = C64::from(inner * outer);
                    }
                }
            }
            assert!((v - b.vector(i).amplitudes()).norm() < 1e-12, "{label}");
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let v = Vec8::from_fn(|i, _| C64::new(i as f64 * 0.3 - 1.0, (i * i) as f64 * 0.1));
        let back = coupled_to_product(&product_to_coupled(&v));
        assert!((back - v).norm() < 1e-12);
    }
}
