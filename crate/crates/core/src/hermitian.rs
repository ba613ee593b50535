//! Hermitian operators, Hilbert–Schmidt geometry and superoperators.
//!
//! Operators are vectorized by column stacking: entry `A[i][j]` sits at
//! index `i + j*d`. Tensor products on `H⊗H` use the Kronecker ordering
//! `(i, k) -> i*d + k`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;
pub type RealMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.abs()))
}

/// `‖A − A†‖_max`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - ComplexMatrix::identity(n, n)))
}

/// `tr(AB)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut s = ZERO;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// A d×d Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    correction: f64,
}

impl HermitianOperator {
    /// Symmetrizes `(A + A†)/2`. A correction larger than the Hermiticity
    /// tolerance is logged and kept in [`HermitianOperator::correction`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let correction = hermiticity_defect(&m) / 2.0;
        if correction > tol::HERMITICITY {
            log::warn!("symmetrized operator with correction {correction:e}");
        }
        let matrix = (&m + m.adjoint()).scale(0.5);
        Ok(HermitianOperator { matrix, correction })
    }

    /// Rejects inputs whose Hermiticity defect exceeds `tol`.
    pub fn strict(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if m.nrows() == m.ncols() {
            let defect = hermiticity_defect(&m);
            if defect > tol {
                return Err(Error::NotHermitian(defect));
            }
        }
        Self::new(m)
    }

    pub fn identity(d: usize) -> Self {
        HermitianOperator { matrix: ComplexMatrix::identity(d, d), correction: 0.0 }
    }

    pub fn zeros(d: usize) -> Self {
        HermitianOperator { matrix: ComplexMatrix::zeros(d, d), correction: 0.0 }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn projector(psi: &ComplexVector) -> Self {
        let matrix = psi * psi.adjoint();
        HermitianOperator { matrix, correction: 0.0 }
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = c(*v, 0.0);
        }
        HermitianOperator { matrix: m, correction: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn correction(&self) -> f64 {
        self.correction
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    /// `‖A‖_2 = sqrt(tr A²)`.
    pub fn norm(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re.max(0.0).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator { matrix: self.matrix.map(|z| z * s), correction: 0.0 }
    }

    /// `A + s·I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..self.dim() {
            m[(i, i)] += s;
        }
        HermitianOperator { matrix: m, correction: 0.0 }
    }

    pub fn add(&self, other: &HermitianOperator) -> Self {
        HermitianOperator { matrix: &self.matrix + &other.matrix, correction: 0.0 }
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let m = u * &self.matrix * u.adjoint();
        HermitianOperator { matrix: (&m + m.adjoint()).scale(0.5), correction: 0.0 }
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        HermitianOperator { matrix: self.matrix.map(|z| z.conj()), correction: 0.0 }
    }
}

/// `tr(a† b)`.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(a.matrix.iter().zip(b.matrix.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Column-stacking vectorization.
pub fn vectorize(a: &HermitianOperator) -> ComplexVector {
    ComplexVector::from_column_slice(a.matrix.as_slice())
}

pub fn vectorize_matrix(a: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(a.as_slice())
}

/// Ascending spectrum with a relative numerical rank.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub numerical_rank: usize,
    pub rank_tolerance: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, rank_tolerance: f64) -> Self {
        eigenvalues.sort_by(|a, b| a.total_cmp(b));
        let numerical_rank = numerical_rank(&eigenvalues, rank_tolerance);
        SpectrumReport { eigenvalues, numerical_rank, rank_tolerance }
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

pub fn numerical_rank(values: &[f64], rank_tolerance: f64) -> usize {
    let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if top == 0.0 {
        return 0;
    }
    values.iter().filter(|v| v.abs() > rank_tolerance * top).count()
}

pub fn spectrum(a: &HermitianOperator, rank_tolerance: f64) -> SpectrumReport {
    SpectrumReport::from_eigenvalues(eigenvalues_hermitian(&a.matrix), rank_tolerance)
}

/// Spectrum of a matrix that must be Hermitian to `tol::HERMITICITY`, scaled by its size.
pub fn spectrum_checked(m: &ComplexMatrix, rank_tolerance: f64) -> Result<SpectrumReport> {
    let defect = hermiticity_defect(m);
    if defect > tol::HERMITICITY * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(SpectrumReport::from_eigenvalues(eigenvalues_hermitian(m), rank_tolerance))
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().cloned().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Eigen-decomposition of the Hermitian part, ascending, eigenvectors as columns.
pub fn eigh(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let e = h.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &e.eigenvectors.column(i));
    }
    (values, vecs)
}

/// Real symmetric eigen-decomposition, ascending.
pub fn eigh_real(m: &RealMatrix) -> (Vec<f64>, RealMatrix) {
    let h = (m + m.transpose()).scale(0.5);
    let e = h.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let mut vecs = RealMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &e.eigenvectors.column(i));
    }
    (values, vecs)
}

/// Linear map on vectorized d×d operators (or an operator on `H⊗H`).
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    pub dim: usize,
    pub matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn identity(d: usize) -> Self {
        Superoperator { dim: d, matrix: ComplexMatrix::identity(d * d, d * d) }
    }

    /// `|1⟩⟩⟨⟨1|`.
    pub fn identity_projector(d: usize) -> Self {
        let v = vectorize(&HermitianOperator::identity(d));
        Superoperator { dim: d, matrix: &v * v.adjoint() }
    }

    /// `|A⟩⟩⟨⟨B|`.
    pub fn outer(a: &HermitianOperator, b: &HermitianOperator) -> Self {
        let va = vectorize(a);
        let vb = vectorize(b);
        Superoperator { dim: a.dim(), matrix: &va * vb.adjoint() }
    }

    pub fn spectrum(&self, rank_tolerance: f64) -> SpectrumReport {
        SpectrumReport::from_eigenvalues(eigenvalues_hermitian(&self.matrix), rank_tolerance)
    }
}

/// SWAP on `H⊗H`.
pub fn swap(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for k in 0..d {
            m[(k * d + i, i * d + k)] = ONE;
        }
    }
    m
}

/// `(P_s, P_a) = ((I + SWAP)/2, (I − SWAP)/2)`.
pub fn sym_antisym_projectors(d: usize) -> (Superoperator, Superoperator) {
    let id = ComplexMatrix::identity(d * d, d * d);
    let sw = swap(d);
    (
        Superoperator { dim: d, matrix: (&id + &sw).scale(0.5) },
        Superoperator { dim: d, matrix: (&id - &sw).scale(0.5) },
    )
}

/// `Σ_j |L_j⟩⟩⟨⟨L_j|`.
pub fn superop_from_frame(ops: &[HermitianOperator]) -> Result<Superoperator> {
    let d = ops.first().ok_or(Error::Empty)?.dim();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for op in ops {
        if op.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
        }
        let v = vectorize(op);
        m += &v * v.adjoint();
    }
    Ok(Superoperator { dim: d, matrix: m })
}

/// Reshuffle `|A⟩⟩⟨⟨B| ↦ A⊗B†`, extended linearly.
///
/// Index map: `T[(i,k),(j,l)] = S[i + j·d, l + k·d]`. It sends `|1⟩⟩⟨⟨1|` to
/// the identity on `H⊗H` and the identity superoperator to SWAP.
pub fn reshuffle(s: &Superoperator) -> ComplexMatrix {
    let d = s.dim;
    let mut t = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    t[(i * d + k, j * d + l)] = s.matrix[(i + j * d, l + k * d)];
                }
            }
        }
    }
    t
}

/// Ordered set of Hermitian operators with its Gram matrix `M_jk = tr(L_j L_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    operators: Vec<HermitianOperator>,
    gram: RealMatrix,
}

impl OperatorBasis {
    /// Requires exactly d² operators of a common dimension.
    pub fn new(operators: Vec<HermitianOperator>) -> Result<Self> {
        let d = operators.first().ok_or(Error::Empty)?.dim();
        if operators.len() != d * d {
            return Err(Error::WrongCount { expected: d * d, found: operators.len() });
        }
        Self::from_operators(operators)
    }

    /// Any number of operators of a common dimension.
    pub fn from_operators(operators: Vec<HermitianOperator>) -> Result<Self> {
        let d = operators.first().ok_or(Error::Empty)?.dim();
        for op in &operators {
            if op.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
            }
        }
        let n = operators.len();
        let mut gram = RealMatrix::zeros(n, n);
        for j in 0..n {
            for k in j..n {
                let v = trace_product(operators[j].matrix(), operators[k].matrix()).re;
                gram[(j, k)] = v;
                gram[(k, j)] = v;
            }
        }
        Ok(OperatorBasis { dim: d, operators, gram })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    pub fn get(&self, j: usize) -> &HermitianOperator {
        &self.operators[j]
    }

    pub fn gram(&self) -> &RealMatrix {
        &self.gram
    }

    pub fn traces(&self) -> Vec<f64> {
        self.operators.iter().map(|o| o.trace()).collect()
    }

    /// Smallest Gram eigenvalue relative to the largest exceeds the pd tolerance.
    pub fn spans(&self) -> bool {
        let (vals, _) = eigh_real(&self.gram);
        let top = vals.last().copied().unwrap_or(0.0);
        self.len() == self.dim * self.dim && top > 0.0 && vals[0] > tol::POSITIVE_DEFINITE * top
    }

    /// `‖M − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.len();
        max_abs_real(&(&self.gram - RealMatrix::identity(n, n)))
    }

    /// If the Gram is `ℓ²·I`, returns `ℓ` and the defect `‖M/ℓ² − I‖_max`.
    pub fn scaled_orthonormality(&self) -> (f64, f64) {
        let n = self.len();
        let ell2 = self.gram.trace() / n as f64;
        if ell2 <= 0.0 {
            return (0.0, f64::INFINITY);
        }
        let defect = max_abs_real(&(self.gram.scale(1.0 / ell2) - RealMatrix::identity(n, n)));
        (ell2.sqrt(), defect)
    }

    pub fn map(&self, f: impl Fn(usize, &HermitianOperator) -> HermitianOperator) -> Result<Self> {
        Self::from_operators(self.operators.iter().enumerate().map(|(j, o)| f(j, o)).collect())
    }

    pub fn frame_superoperator(&self) -> Superoperator {
        superop_from_frame(&self.operators).expect("non-empty basis")
    }
}

/// Orthonormal Hermitian basis built from matrix units: `E_kk`, and
/// `(E_jk + E_kj)/√2`, `i(E_jk − E_kj)/√2` for `j < k`.
pub fn matrix_unit_basis(d: usize) -> OperatorBasis {
    let mut ops = Vec::with_capacity(d * d);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..d {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(k, k)] = ONE;
        ops.push(HermitianOperator { matrix: m, correction: 0.0 });
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut re = ComplexMatrix::zeros(d, d);
            re[(j, k)] = c(s, 0.0);
            re[(k, j)] = c(s, 0.0);
            ops.push(HermitianOperator { matrix: re, correction: 0.0 });
            let mut im = ComplexMatrix::zeros(d, d);
            im[(j, k)] = c(0.0, -s);
            im[(k, j)] = c(0.0, s);
            ops.push(HermitianOperator { matrix: im, correction: 0.0 });
        }
    }
    OperatorBasis::new(ops).expect("d² operators")
}

/// Coordinates of `a` in an orthonormal Hermitian basis.
pub fn coordinates(a: &ComplexMatrix, orthonormal: &OperatorBasis) -> Vec<f64> {
    orthonormal.operators().iter().map(|b| trace_product(b.matrix(), a).re).collect()
}

/// Matrix of the linear map `f` on operators, in an orthonormal Hermitian basis:
/// `M[l][k] = tr(B_l f(B_k))`.
pub fn map_matrix(orthonormal: &OperatorBasis, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let n = orthonormal.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let image = f(orthonormal.get(k).matrix());
        for l in 0..n {
            m[(l, k)] = trace_product(orthonormal.get(l).matrix(), &image);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_herm(d: usize, seed: u64) -> HermitianOperator {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = ComplexMatrix::from_fn(d, d, |_, _| c(next(), next()));
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn inner_products() {
        let id = HermitianOperator::identity(3);
        assert!((hs_inner(&id, &id).unwrap() - c(3.0, 0.0)).norm() < 1e-15);
        let psi = ComplexVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let p = HermitianOperator::projector(&psi);
        assert!((hs_inner(&p, &p).unwrap().re - 1.0).abs() < 1e-14);
        assert!(hs_inner(&id, &p).is_err());
    }

    #[test]
    fn vectorize_conventions() {
        let v = vectorize(&HermitianOperator::identity(2));
        let expect = [1.0, 0.0, 0.0, 1.0];
        for (z, e) in v.iter().zip(expect) {
            assert_eq!(*z, c(e, 0.0));
        }
        let a = rand_herm(3, 1);
        let b = rand_herm(3, 2);
        let lhs = hs_inner(&a, &b).unwrap();
        let rhs = vectorize(&a).dotc(&vectorize(&b));
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(lhs.im.abs() < 1e-12);
        // column stacking: the (1,0) entry lands at index 1
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(1, 0)] = ONE;
        assert_eq!(vectorize_matrix(&m)[1], ONE);
    }

    #[test]
    fn projector_pair() {
        for d in 1..5 {
            let (ps, pa) = sym_antisym_projectors(d);
            assert!((trace(&ps.matrix).re - (d * (d + 1)) as f64 / 2.0).abs() < 1e-13);
            assert!((trace(&pa.matrix).re - (d * (d - 1)) as f64 / 2.0).abs() < 1e-13);
            assert!(max_abs(&(&ps.matrix * &ps.matrix - &ps.matrix)) < 1e-14);
            assert!(max_abs(&(&ps.matrix * &pa.matrix)) < 1e-14);
            let n = d * d;
            assert!(max_abs(&(&ps.matrix + &pa.matrix - ComplexMatrix::identity(n, n))) < 1e-14);
        }
    }

    #[test]
    fn spectra() {
        let s = spectrum(&HermitianOperator::identity(3), tol::RANK_REL);
        assert_eq!(s.numerical_rank, 3);
        let mut v = ComplexVector::zeros(4);
        v[2] = ONE;
        let s = spectrum(&HermitianOperator::projector(&v), tol::RANK_REL);
        assert_eq!(s.numerical_rank, 1);
        assert!((s.eigenvalues[3] - 1.0).abs() < 1e-14);
        let p = HermitianOperator::projector(&ComplexVector::from_vec(vec![ONE, ZERO])).shift(-0.5);
        let s = spectrum(&p, tol::RANK_REL);
        assert!((s.eigenvalues[0] + 0.5).abs() < 1e-14 && (s.eigenvalues[1] - 0.5).abs() < 1e-14);
        let a = rand_herm(5, 9);
        let s = spectrum(&a, tol::RANK_REL);
        let sum: f64 = s.eigenvalues.iter().sum();
        assert!((sum - a.trace()).abs() <= 1e-10 * a.trace().abs().max(1.0));
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn symmetrization_records_correction() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[ONE, c(1.0, 0.0), ZERO, ONE]);
        let h = HermitianOperator::new(m.clone()).unwrap();
        assert!((h.correction() - 0.5).abs() < 1e-15);
        assert!(hermiticity_defect(h.matrix()) == 0.0);
        assert!(HermitianOperator::strict(m.clone(), tol::HERMITICITY).is_err());
        assert!(spectrum_checked(&m, tol::RANK_REL).is_err());
    }

    #[test]
    fn frame_superoperators() {
        let f = matrix_unit_basis(3).frame_superoperator();
        assert!(max_abs(&(f.matrix - ComplexMatrix::identity(9, 9))) < 1e-14);
        let f = superop_from_frame(&[HermitianOperator::identity(3)]).unwrap();
        let s = f.spectrum(tol::RANK_REL);
        assert_eq!(s.numerical_rank, 1);
        assert!((s.eigenvalues[8] - 3.0).abs() < 1e-13);
        assert!(superop_from_frame(&[]).is_err());
    }

    #[test]
    fn reshuffle_images() {
        for d in 2..5 {
            let n = d * d;
            let one = reshuffle(&Superoperator::identity_projector(d));
            assert!(max_abs(&(one - ComplexMatrix::identity(n, n))) < 1e-15);
            let id = reshuffle(&Superoperator::identity(d));
            let (ps, pa) = sym_antisym_projectors(d);
            assert!(max_abs(&(id - (&ps.matrix - &pa.matrix))) < 1e-15);
        }
        // random operator families: Σ|L⟩⟩⟨⟨L| maps to Σ L⊗L
        for seed in 0..5 {
            let ops: Vec<_> = (0..9).map(|j| rand_herm(3, 100 * seed + j)).collect();
            let lhs = reshuffle(&superop_from_frame(&ops).unwrap());
            let mut rhs = ComplexMatrix::zeros(9, 9);
            for o in &ops {
                rhs += kron(o.matrix(), o.matrix());
            }
            assert!(max_abs(&(lhs - rhs)) < 1e-10);
        }
    }

    #[test]
    fn matrix_unit_basis_is_orthonormal() {
        for d in 1..6 {
            let b = matrix_unit_basis(d);
            assert!(b.orthonormality_defect() < 1e-15);
            assert!(b.spans());
        }
    }
}
