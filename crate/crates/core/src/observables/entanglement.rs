//! Two-qubit entanglement of the impurity pair.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::spin_algebra::C64;

pub type Density4 = Matrix4<C64>;

pub fn density_from_pure(psi: &[C64; 4]) -> Density4 {
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    Matrix4::from_fn(|r, c| psi[r] * psi[c].conj() / norm2)
}

/// `2 |a d - b c| / |psi|^2` for `a|uu> + b|ud> + c|du> + d|dd>`.
pub fn pure_concurrence(psi: &[C64; 4]) -> f64 {
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm() / norm2
}

fn hermitian_sqrt(m: &Density4) -> Density4 {
    let eig = SymmetricEigen::new(*m);
    let roots = eig.eigenvalues.map(|x| C64::from(x.max(0.0).sqrt()));
    let v = eig.eigenvectors;
    v * Density4::from_diagonal(&roots) * v.adjoint()
}

/// Wootters concurrence via the spin-flipped density matrix.
pub fn concurrence(rho: &Density4) -> f64 {
    let flip = {
        let y = nalgebra::Matrix2::new(
            C64::from(0.0),
            -C64::i(),
            C64::i(),
            C64::from(0.0),
        );
        y.kronecker(&y)
    };
    let flipped = flip * rho.conjugate() * flip;
    let root = hermitian_sqrt(rho);
    let mut product = root * flipped * root;
    // symmetrize rounding noise before the Hermitian eigensolve
    product = (product + product.adjoint()) * C64::from(0.5);
    let mut lambdas: Vec<f64> = SymmetricEigen::new(product)
        .eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}
