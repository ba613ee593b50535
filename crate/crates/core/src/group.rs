//! Adjoint representation of U(d) on orthonormal Hermitian bases, the
//! minimal adjoint entry `m(d, L)`, stochastic-type orthogonal matrices and
//! the ordered product bound `λ↑·λ↓ ≤ (r² − s)/(d − 1)`.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    c, eigenvalues_hermitian, max_abs_real, trace_product, unitarity_defect, ComplexMatrix, OperatorBasis,
    RealMatrix,
};
use crate::random::{gaussian, haar_orthogonal, stream_rng};
use crate::report::CheckReport;
use crate::tol;

/// `U^L_jk = tr(L_j U L_k U†)`, or `tr(L_j U L̄_k U†)` for the antiunitary
/// `X ↦ U X̄ U†` (conjugation in the computational basis, then `U`).
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointMatrix {
    pub dim: usize,
    pub matrix: RealMatrix,
    pub antiunitary: bool,
}

fn check_inputs(u: &ComplexMatrix, basis: &OperatorBasis) -> Result<()> {
    let d = basis.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: u.nrows() });
    }
    let defect = unitarity_defect(u);
    if defect > tol::UNITARY * (d as f64).max(1.0) {
        return Err(Error::NotUnitary(defect));
    }
    let ortho = basis.orthonormality_defect();
    if basis.len() != d * d || ortho > tol::ORTHONORMAL {
        return Err(Error::NotOrthonormal(ortho));
    }
    Ok(())
}

fn adjoint_with(u: &ComplexMatrix, basis: &OperatorBasis, antiunitary: bool) -> Result<AdjointMatrix> {
    check_inputs(u, basis)?;
    let n = basis.len();
    let ud = u.adjoint();
    let images: Vec<ComplexMatrix> = basis
        .operators()
        .iter()
        .map(|l| {
            let m = if antiunitary { l.matrix().map(|z| z.conj()) } else { l.matrix().clone() };
            u * m * &ud
        })
        .collect();
    let mut matrix = RealMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let v = trace_product(basis.get(j).matrix(), &images[k]);
            if v.im.abs() > 1e-10 {
                return Err(Error::Precondition(format!("adjoint entry ({j},{k}) has imaginary part {:e}", v.im)));
            }
            matrix[(j, k)] = v.re;
        }
    }
    Ok(AdjointMatrix { dim: basis.dim(), matrix, antiunitary })
}

pub fn adjoint_matrix(u: &ComplexMatrix, basis: &OperatorBasis) -> Result<AdjointMatrix> {
    adjoint_with(u, basis, false)
}

pub fn antiunitary_adjoint(u: &ComplexMatrix, basis: &OperatorBasis) -> Result<AdjointMatrix> {
    adjoint_with(u, basis, true)
}

/// `λ↑(L_j)·λ↓(L_k)` minimized over `(j, k)`, which equals the minimum
/// adjoint entry over all unitaries.
pub fn m_dl(basis: &OperatorBasis) -> Result<f64> {
    let d = basis.dim();
    let ortho = basis.orthonormality_defect();
    if basis.len() != d * d || ortho > tol::ORTHONORMAL {
        return Err(Error::NotOrthonormal(ortho));
    }
    let spectra: Vec<Vec<f64>> = basis.operators().iter().map(|l| eigenvalues_hermitian(l.matrix())).collect();
    let mut best = f64::INFINITY;
    for up in &spectra {
        for down in &spectra {
            let v: f64 = up.iter().zip(down.iter().rev()).map(|(a, b)| a * b).sum();
            best = best.min(v);
        }
    }
    Ok(best)
}

/// `S = (R + dP)/(d + 1)` with `P` the projector onto the normalized all-ones vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticTypeDecomposition {
    pub s: RealMatrix,
    pub p: RealMatrix,
    pub min_entry: f64,
    /// Smallest entry of `R` itself; stochastic type forces it to be at least `−1/d`.
    pub min_r_entry: f64,
    pub row_sum_error: f64,
    pub col_sum_error: f64,
    /// `max(‖SP − P‖, ‖PS − P‖)`.
    pub fixed_residual: f64,
    pub stochastic: bool,
}

pub fn stochastic_decompose(r: &RealMatrix, tol: f64) -> Result<StochasticTypeDecomposition> {
    let n = r.nrows();
    if r.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: r.ncols() });
    }
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::InvalidParameter(format!("matrix order {n} is not a square d²")));
    }
    let defect = max_abs_real(&(r.transpose() * r - RealMatrix::identity(n, n)));
    if defect > tol {
        return Err(Error::NotOrthogonal(defect));
    }
    let df = d as f64;
    let p = RealMatrix::from_element(n, n, 1.0 / n as f64);
    let s = (r + p.scale(df)) / (df + 1.0);
    let min_entry = s.min();
    let row_sum_error = s.row_sum().iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    let col_sum_error = s.column_sum().iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    let fixed_residual = max_abs_real(&(&s * &p - &p)).max(max_abs_real(&(&p * &s - &p)));
    let stochastic = min_entry >= -tol && row_sum_error <= tol && col_sum_error <= tol;
    Ok(StochasticTypeDecomposition {
        s,
        p,
        min_entry,
        min_r_entry: r.min(),
        row_sum_error,
        col_sum_error,
        fixed_residual,
        stochastic,
    })
}

/// Haar unitary from the QR factorization of a complex Ginibre matrix, with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| c(gaussian(rng), gaussian(rng)));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// One Haar sample's stochastic-type diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StochasticSample {
    #[serde(rename = "sampleIndex")]
    pub sample_index: usize,
    #[serde(rename = "minEntry")]
    pub min_entry: f64,
    #[serde(rename = "rowSumMaxErr")]
    pub row_sum_max_err: f64,
    #[serde(rename = "colSumMaxErr")]
    pub col_sum_max_err: f64,
    #[serde(skip)]
    pub stochastic: bool,
}

/// Adjoint matrices of Haar unitaries (sample `i` uses stream `i` of `seed`).
/// `minEntry` is the smallest entry of `S`.
pub fn sample_stochastic(
    basis: &OperatorBasis,
    samples: usize,
    seed: u64,
    antiunitary: bool,
    tol: f64,
) -> Result<Vec<StochasticSample>> {
    (0..samples)
        .map(|i| {
            let u = haar_unitary(basis.dim(), &mut stream_rng(seed, i as u64));
            let adj = if antiunitary { antiunitary_adjoint(&u, basis)? } else { adjoint_matrix(&u, basis)? };
            let dec = stochastic_decompose(&adj.matrix, tol)?;
            Ok(StochasticSample {
                sample_index: i,
                min_entry: dec.min_entry,
                row_sum_max_err: dec.row_sum_error,
                col_sum_max_err: dec.col_sum_error,
                stochastic: dec.stochastic,
            })
        })
        .collect()
}

/// CSV with columns `sampleIndex,minEntry,rowSumMaxErr,colSumMaxErr`.
pub fn write_samples_csv<W: Write>(samples: &[StochasticSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

/// Smallest entry of a 4-vector with unit sum and unit norm.
pub fn o4_row_min(row: &[f64; 4], tol: f64) -> Result<f64> {
    let sum: f64 = row.iter().sum();
    let norm2: f64 = row.iter().map(|x| x * x).sum();
    if (sum - 1.0).abs() > tol || (norm2 - 1.0).abs() > tol {
        return Err(Error::Precondition(format!("row sum {sum} and squared norm {norm2} must both be 1")));
    }
    Ok(row.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Orthogonal 4×4 matrices fixing the all-ones vector, `A = uuᵀ + VQVᵀ`
/// with `Q` Haar on O(3): every entry must be at least `−1/2`.
pub fn check_o4_uniqueness_property(samples: usize, seed: u64, tol: f64) -> CheckReport {
    let u = nalgebra::DVector::from_element(4, 0.5);
    // orthonormal complement of u
    let v = RealMatrix::from_row_slice(
        4,
        3,
        &[
            0.5, 0.5, 0.5, //
            0.5, -0.5, -0.5, //
            -0.5, 0.5, -0.5, //
            -0.5, -0.5, 0.5,
        ],
    );
    let base = &u * u.transpose();
    let mut worst = f64::INFINITY;
    let mut row_err = 0.0f64;
    let mut orth_err = 0.0f64;
    for i in 0..samples {
        let q = haar_orthogonal(3, &mut stream_rng(seed, i as u64));
        let a = &base + &v * q * v.transpose();
        worst = worst.min(a.min());
        row_err = row_err.max(a.row_sum().iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max));
        orth_err = orth_err.max(max_abs_real(&(a.transpose() * &a - RealMatrix::identity(4, 4))));
    }
    let mut r = CheckReport::new("o4_uniqueness");
    r.value("samples", samples as f64);
    r.value("min_entry", worst);
    let rows = r.residual("row_sum", row_err, tol);
    let orth = r.residual("orthogonality", orth_err, tol);
    let bound = r.residual("entry_below_minus_half", (-0.5 - worst).max(0.0), tol);
    r.finish(rows && orth && bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationClass {
    /// `λ↓ = r′(1, 0, …, 0) + x`.
    TopSpike,
    /// `λ↓ = (r′/d)(2, …, 2, 2 − d) + x`.
    BottomSpike,
    /// All components equal (`r′ = 0`).
    Uniform,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderedProductBoundReport {
    pub lambda: Vec<f64>,
    pub r: f64,
    pub s: f64,
    pub product: f64,
    pub bound: f64,
    pub r_prime: f64,
    pub x: f64,
    pub saturated: bool,
    pub saturation_class: SaturationClass,
}

/// `λ↑·λ↓` against `(r² − s)/(d − 1)` with the saturating families.
pub fn ordered_product_bound(lambda: &[f64]) -> Result<OrderedProductBoundReport> {
    let d = lambda.len();
    if d < 2 {
        return Err(Error::InvalidParameter("need at least two components".into()));
    }
    if lambda.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let df = d as f64;
    let mut down = lambda.to_vec();
    down.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let product: f64 = down.iter().zip(down.iter().rev()).map(|(a, b)| a * b).sum();
    let r: f64 = lambda.iter().sum();
    let s: f64 = lambda.iter().map(|x| x * x).sum();
    let bound = (r * r - s) / (df - 1.0);
    let spread2 = (df * s - r * r).max(0.0);
    let r_prime = (spread2 / (df - 1.0)).sqrt();
    let x = ((df - 1.0) * r - ((df - 1.0) * spread2).sqrt()) / (df * df - df);
    let scale = 1.0 + r * r + s;
    let saturated = ((df - 1.0) * product - (r * r - s)).abs() <= 1e-12 * scale;
    let close = |v: &[f64]| v.iter().zip(&down).all(|(a, b)| (a - b).abs() <= 1e-9 * scale.sqrt());
    let top: Vec<f64> = (0..d).map(|i| if i == 0 { r_prime } else { 0.0 } + x).collect();
    let bottom: Vec<f64> =
        (0..d).map(|i| r_prime / df * if i + 1 == d { 2.0 - df } else { 2.0 } + x).collect();
    let saturation_class = if r_prime <= 1e-12 * scale.sqrt() {
        SaturationClass::Uniform
    } else if close(&top) {
        SaturationClass::TopSpike
    } else if close(&bottom) {
        SaturationClass::BottomSpike
    } else {
        SaturationClass::None
    };
    Ok(OrderedProductBoundReport {
        lambda: lambda.to_vec(),
        r,
        s,
        product,
        bound,
        r_prime,
        x,
        saturated,
        saturation_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{adjoint_basis, gell_mann_basis};
    use crate::hermitian::max_abs;
    use crate::random::orthonormal_basis;
    use crate::sic::{wh_orbit, Fiducial};

    #[test]
    fn trivial_adjoints() {
        let b = gell_mann_basis(3);
        let id = ComplexMatrix::identity(3, 3);
        let a = adjoint_matrix(&id, &b).unwrap();
        assert!(max_abs_real(&(a.matrix - RealMatrix::identity(9, 9))) < 1e-14);
        let phase = id.map(|z| z * c(0.6, 0.8));
        let a = adjoint_matrix(&phase, &b).unwrap();
        assert!(max_abs_real(&(a.matrix - RealMatrix::identity(9, 9))) < 1e-14);
        assert!(adjoint_matrix(&id.scale(2.0), &b).is_err());
    }

    #[test]
    fn homomorphism_and_antiunitary_square() {
        let mut rng = stream_rng(4, 0);
        let b = orthonormal_basis(3, &mut rng);
        let u = haar_unitary(3, &mut rng);
        let v = haar_unitary(3, &mut rng);
        let uv = adjoint_matrix(&(&u * &v), &b).unwrap().matrix;
        let prod = adjoint_matrix(&u, &b).unwrap().matrix * adjoint_matrix(&v, &b).unwrap().matrix;
        assert!(max_abs_real(&(uv - prod)) < 1e-9);
        // (U∘K)(V∘K) = U V̄ ∘ identity
        let anti = antiunitary_adjoint(&u, &b).unwrap().matrix * antiunitary_adjoint(&v, &b).unwrap().matrix;
        let direct = adjoint_matrix(&(&u * v.map(|z| z.conj())), &b).unwrap().matrix;
        assert!(max_abs_real(&(anti - direct)) < 1e-9);
    }

    #[test]
    fn conjugation_on_real_basis_is_identity() {
        let b = gell_mann_basis(2);
        let a = antiunitary_adjoint(&ComplexMatrix::identity(2, 2), &b).unwrap().matrix;
        // σ_y flips sign under conjugation; every other element is fixed
        for j in 0..4 {
            let imag = b.get(j).matrix().iter().any(|z| z.im != 0.0);
            assert!((a[(j, j)] - if imag { -1.0 } else { 1.0 }).abs() < 1e-14);
        }
    }

    #[test]
    fn m_dl_sic_d2_value() {
        let sic = wh_orbit(&Fiducial::tetrahedral_d2());
        let b = adjoint_basis(&sic, 1, 1).unwrap();
        assert!((m_dl(&b).unwrap() + 0.5).abs() < 1e-12);
        let gm = m_dl(&gell_mann_basis(3)).unwrap();
        assert!(gm < -1.0 / 3.0);
    }

    #[test]
    fn stochastic_examples() {
        let dec = stochastic_decompose(&RealMatrix::identity(4, 4), 1e-9).unwrap();
        assert!(dec.stochastic);
        assert!((dec.s[(0, 0)] - 0.5).abs() < 1e-15 && (dec.s[(0, 1)] - 1.0 / 6.0).abs() < 1e-15);
        let mut flip = RealMatrix::identity(4, 4);
        flip[(0, 0)] = -1.0;
        assert!(!stochastic_decompose(&flip, 1e-9).unwrap().stochastic);
        assert!(stochastic_decompose(&flip.scale(2.0), 1e-9).is_err());
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = stream_rng(11, 0);
        let d = 3;
        let n = 10_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = haar_unitary(d, &mut rng);
            assert!(unitarity_defect(&u) < 1e-13);
            sum += u[(0, 0)].norm_sqr();
        }
        let mean = sum / n as f64;
        // Var |U_11|² = (d − 1)/(d²(d + 1))
        let sigma = ((d as f64 - 1.0) / ((d * d) as f64 * (d as f64 + 1.0)) / n as f64).sqrt();
        assert!((mean - 1.0 / d as f64).abs() < 3.0 * sigma);
        let a = haar_unitary(4, &mut stream_rng(5, 2));
        let b = haar_unitary(4, &mut stream_rng(5, 2));
        assert_eq!(max_abs(&(a - b)), 0.0);
    }

    #[test]
    fn o4_examples() {
        assert!(check_o4_uniqueness_property(1000, 7, 1e-12).pass);
        assert_eq!(o4_row_min(&[-0.5, 0.5, 0.5, 0.5], 1e-12).unwrap(), -0.5);
        assert_eq!(o4_row_min(&[1.0, 0.0, 0.0, 0.0], 1e-12).unwrap(), 0.0);
        assert!(o4_row_min(&[0.5, 0.5, 0.0, 0.0], 1e-12).is_err());
    }

    #[test]
    fn ordered_product_examples() {
        let r = ordered_product_bound(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((r.product, r.bound, r.saturated), (3.0, 3.0, true));
        assert_eq!(r.saturation_class, SaturationClass::Uniform);
        let r = ordered_product_bound(&[2.0, 1.0, 0.0]).unwrap();
        assert_eq!((r.product, r.bound, r.saturated), (1.0, 2.0, false));
        let r = ordered_product_bound(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!((r.product, r.bound, r.saturated), (0.0, 0.0, true));
        assert_eq!(r.saturation_class, SaturationClass::TopSpike);
        let r = ordered_product_bound(&[1.0, 1.0, 0.0]).unwrap();
        assert!(r.saturated);
        assert_eq!(r.saturation_class, SaturationClass::BottomSpike);
        assert!(ordered_product_bound(&[1.0]).is_err());
    }

    #[test]
    fn csv_columns() {
        let sic = wh_orbit(&Fiducial::tetrahedral_d2());
        let b = adjoint_basis(&sic, 1, 1).unwrap();
        let samples = sample_stochastic(&b, 3, 1, false, 1e-9).unwrap();
        assert!(samples.iter().all(|s| s.stochastic));
        let mut buf = Vec::new();
        write_samples_csv(&samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sampleIndex,minEntry,rowSumMaxErr,colSumMaxErr\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
