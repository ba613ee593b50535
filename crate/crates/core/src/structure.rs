//! Expansion of operator products back into a (not necessarily orthonormal)
//! basis: `P = Σ_l c_l L_l` solved against the Gram matrix.

use nalgebra::Cholesky;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{anticommutator, commutator, max_abs, vectorize_matrix, ComplexMatrix, OperatorBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Product {
    /// `[A, B] = AB − BA`.
    Commutator,
    /// `{A, B} = AB + BA`.
    Anticommutator,
}

impl Product {
    pub fn apply(self, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Product::Commutator => commutator(a, b),
            Product::Anticommutator => anticommutator(a, b),
        }
    }
}

/// Cholesky factor of the Gram matrix plus the vectorized basis.
pub(crate) struct GramSolver {
    chol: Cholesky<f64, nalgebra::Dyn>,
    /// Row `m` is `vec(L_mᵀ)`, so `(V vec P)_m = tr(P L_m)`.
    dual: ComplexMatrix,
    /// Column `l` is `vec(L_l)`.
    primal: ComplexMatrix,
}

impl GramSolver {
    pub(crate) fn new(basis: &OperatorBasis) -> Result<Self> {
        if !basis.spans() {
            return Err(Error::SingularGram);
        }
        let chol = basis.gram().clone().cholesky().ok_or(Error::SingularGram)?;
        let d = basis.dim();
        let n = basis.len();
        let mut dual = ComplexMatrix::zeros(n, d * d);
        let mut primal = ComplexMatrix::zeros(d * d, n);
        for (m, op) in basis.operators().iter().enumerate() {
            dual.row_mut(m).copy_from(&vectorize_matrix(&op.matrix().transpose()).transpose());
            primal.column_mut(m).copy_from(&vectorize_matrix(op.matrix()));
        }
        Ok(GramSolver { chol, dual, primal })
    }

    /// Columns of `products` are vectorized operators; returns coefficient
    /// columns and the max reconstruction residual.
    pub(crate) fn expand(&self, products: &ComplexMatrix) -> (ComplexMatrix, f64) {
        let t = &self.dual * products;
        let re = self.chol.solve(&t.map(|z| z.re));
        let im = self.chol.solve(&t.map(|z| z.im));
        let coeffs = ComplexMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
        let residual = max_abs(&(products - &self.primal * &coeffs));
        (coeffs, residual)
    }
}

/// Structure constants `op(L_j, L_k) = Σ_l C_jkl L_l` and matrices `(C_j)_kl = C_jkl`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTensor {
    pub dim: usize,
    pub product: Product,
    n: usize,
    constants: Vec<Complex64>,
    /// `max_jk ‖op(L_j, L_k) − Σ_l C_jkl L_l‖_max`.
    pub reconstruction_residual: f64,
}

impl StructureTensor {
    pub fn compute(basis: &OperatorBasis, product: Product) -> Result<Self> {
        let solver = GramSolver::new(basis)?;
        let d = basis.dim();
        let n = basis.len();
        let mut products = ComplexMatrix::zeros(d * d, n * n);
        for j in 0..n {
            for k in 0..n {
                let p = product.apply(basis.get(j).matrix(), basis.get(k).matrix());
                products.column_mut(j * n + k).copy_from(&vectorize_matrix(&p));
            }
        }
        let (coeffs, reconstruction_residual) = solver.expand(&products);
        let mut constants = vec![Complex64::new(0.0, 0.0); n * n * n];
        for jk in 0..n * n {
            for l in 0..n {
                constants[jk * n + l] = coeffs[(l, jk)];
            }
        }
        Ok(StructureTensor { dim: d, product, n, constants, reconstruction_residual })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, j: usize, k: usize, l: usize) -> Complex64 {
        self.constants[(j * self.n + k) * self.n + l]
    }

    pub fn matrix(&self, j: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |k, l| self.get(j, k, l))
    }

    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        (0..self.n).map(|j| self.matrix(j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.constants.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_real_part(&self) -> f64 {
        self.constants.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    pub fn max_imag_part(&self) -> f64 {
        self.constants.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `max |C_jkl − s·C_kjl|` (`s = −1` for the Lie product, `+1` for Jordan).
    pub fn first_pair_defect(&self) -> f64 {
        let s = self.sign();
        let mut worst = 0.0f64;
        for j in 0..self.n {
            for k in 0..self.n {
                for l in 0..self.n {
                    worst = worst.max((self.get(j, k, l) - self.get(k, j, l) * s).norm());
                }
            }
        }
        worst
    }

    /// `max |C_jkl − s·C_jlk|`; zero together with [`Self::first_pair_defect`]
    /// means the tensor is completely (anti)symmetric.
    pub fn last_pair_defect(&self) -> f64 {
        let s = self.sign();
        let mut worst = 0.0f64;
        for j in 0..self.n {
            for k in 0..self.n {
                for l in 0..self.n {
                    worst = worst.max((self.get(j, k, l) - self.get(j, l, k) * s).norm());
                }
            }
        }
        worst
    }

    fn sign(&self) -> f64 {
        match self.product {
            Product::Commutator => -1.0,
            Product::Anticommutator => 1.0,
        }
    }

    /// Entries with `|value| > threshold` as `(j, k, l, value)`.
    pub fn sparse(&self, threshold: f64, imaginary: bool) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for k in 0..self.n {
                for l in 0..self.n {
                    let z = self.get(j, k, l);
                    let v = if imaginary { z.im } else { z.re };
                    if v.abs() > threshold {
                        out.push((j, k, l, v));
                    }
                }
            }
        }
        out
    }
}

/// `C^L_A` with `op(A, L_k) = Σ_l (C^L_A)_kl L_l`.
pub fn coefficient_matrix(basis: &OperatorBasis, a: &ComplexMatrix, product: Product) -> Result<ComplexMatrix> {
    let solver = GramSolver::new(basis)?;
    let d = basis.dim();
    let n = basis.len();
    let mut products = ComplexMatrix::zeros(d * d, n);
    for k in 0..n {
        products.column_mut(k).copy_from(&vectorize_matrix(&product.apply(a, basis.get(k).matrix())));
    }
    let (coeffs, _) = solver.expand(&products);
    Ok(coeffs.transpose())
}
