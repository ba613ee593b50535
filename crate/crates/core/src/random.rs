//! Seeded sampling helpers. Every sampler takes its generator explicitly.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hermitian::{c, ComplexMatrix, ComplexVector, HermitianOperator, OperatorBasis, RealMatrix};

/// Generator for stream `stream` of `seed`; streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniformly distributed unit vector in `C^d`.
pub fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexVector {
    let v = ComplexVector::from_fn(d, |_, _| c(gaussian(rng), gaussian(rng)));
    let n = v.norm();
    v.unscale(n)
}

/// Hermitian matrix with independent Gaussian entries (GUE up to scale).
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    let m = ComplexMatrix::from_fn(d, d, |_, _| c(gaussian(rng), gaussian(rng)));
    HermitianOperator::new(m.scale(0.5)).expect("finite")
}

/// d² independent Gaussian Hermitian operators (a basis with probability 1).
pub fn hermitian_basis<R: Rng + ?Sized>(d: usize, rng: &mut R) -> OperatorBasis {
    OperatorBasis::new((0..d * d).map(|_| hermitian(d, rng)).collect()).expect("d² operators")
}

/// Haar-distributed real orthogonal n×n matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Random orthonormal Hermitian basis: a Haar-orthogonal rotation of the
/// matrix-unit basis in its real coordinates.
pub fn orthonormal_basis<R: Rng + ?Sized>(d: usize, rng: &mut R) -> OperatorBasis {
    let base = crate::hermitian::matrix_unit_basis(d);
    rotate_basis(&base, &haar_orthogonal(d * d, rng))
}

/// `L'_j = Σ_k W_kj L_k`.
pub fn rotate_basis(basis: &OperatorBasis, w: &RealMatrix) -> OperatorBasis {
    let d = basis.dim();
    let n = basis.len();
    let ops = (0..w.ncols())
        .map(|j| {
            let mut m = ComplexMatrix::zeros(d, d);
            for k in 0..n {
                m += basis.get(k).matrix().scale(w[(k, j)]);
            }
            HermitianOperator::new(m).expect("finite")
        })
        .collect();
    OperatorBasis::from_operators(ops).expect("common dimension")
}
