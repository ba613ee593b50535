//! Operator bases built from a SIC, plus the generalized Gell-Mann basis.

use crate::error::{Error, Result};
use crate::hermitian::{c, ComplexMatrix, HermitianOperator, OperatorBasis, ONE};
use crate::sic::SicEnsemble;

/// Orthonormal `{1/√d, diagonal, symmetric, antisymmetric}` Gell-Mann operators.
pub fn gell_mann(d: usize) -> Vec<HermitianOperator> {
    let mut ops = Vec::with_capacity(d * d);
    ops.push(HermitianOperator::identity(d).scale(1.0 / (d as f64).sqrt()));
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(l) {
            *v = norm;
        }
        diag[l] = -(l as f64) * norm;
        ops.push(HermitianOperator::from_real_diagonal(&diag));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = c(s, 0.0);
            sym[(k, j)] = c(s, 0.0);
            ops.push(HermitianOperator::new(sym).expect("Hermitian"));
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = c(0.0, -s);
            anti[(k, j)] = c(0.0, s);
            ops.push(HermitianOperator::new(anti).expect("Hermitian"));
        }
    }
    ops
}

pub fn gell_mann_basis(d: usize) -> OperatorBasis {
    OperatorBasis::new(gell_mann(d)).expect("d² operators")
}

fn affine(sic: &SicEnsemble, coeff: impl Fn(usize) -> (f64, f64)) -> OperatorBasis {
    let d = sic.dim();
    let ops = sic
        .projectors()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let (a, b) = coeff(j);
            let m = p.matrix().scale(a) + ComplexMatrix::from_diagonal_element(d, d, ONE).scale(b);
            HermitianOperator::new(m).expect("Hermitian")
        })
        .collect();
    OperatorBasis::new(ops).expect("d² operators")
}

fn unit_sign(s: i8) -> Result<f64> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidParameter(format!("sign must be ±1, got {s}"))),
    }
}

/// `a = ε√((d+1)/d)`, `b = −(a/d)(1 − ε′/√(d+1))`.
pub fn adjoint_coefficients(d: usize, epsilon: i8, epsilon_prime: i8) -> Result<(f64, f64)> {
    let df = d as f64;
    let a = unit_sign(epsilon)? * ((df + 1.0) / df).sqrt();
    let b = -(a / df) * (1.0 - unit_sign(epsilon_prime)? / (df + 1.0).sqrt());
    Ok((a, b))
}

/// Orthonormal basis `L_j = aΠ_j + b` saturating the minimal adjoint entry.
pub fn adjoint_basis(sic: &SicEnsemble, epsilon: i8, epsilon_prime: i8) -> Result<OperatorBasis> {
    let (a, b) = adjoint_coefficients(sic.dim(), epsilon, epsilon_prime)?;
    Ok(affine(sic, |_| (a, b)))
}

/// `L_j = ε_j ℓ(Π_j + η)`.
pub fn lie_basis(sic: &SicEnsemble, epsilons: &[i8], ell: f64, eta: f64) -> Result<OperatorBasis> {
    let d = sic.dim();
    if epsilons.len() != d * d {
        return Err(Error::WrongCount { expected: d * d, found: epsilons.len() });
    }
    if ell == 0.0 || !ell.is_finite() {
        return Err(Error::InvalidParameter("ell must be a non-zero real".into()));
    }
    if (eta + 1.0 / d as f64).abs() < 1e-12 || !eta.is_finite() {
        return Err(Error::InvalidParameter("eta = -1/d makes every operator traceless".into()));
    }
    let signs = epsilons.iter().map(|&e| unit_sign(e)).collect::<Result<Vec<_>>>()?;
    Ok(affine(sic, |j| (signs[j] * ell, signs[j] * ell * eta)))
}

/// `a = (d + 1 − ε√(d+1)) / (d(d+1))`.
pub fn jordan_shift(d: usize, epsilon: i8) -> Result<f64> {
    let df = d as f64;
    Ok((df + 1.0 - unit_sign(epsilon)? * (df + 1.0).sqrt()) / (df * (df + 1.0)))
}

/// `L_j = εε_j c(Π_j − a)` with `a` from [`jordan_shift`].
pub fn jordan_basis(sic: &SicEnsemble, epsilon: i8, epsilons: &[i8], scale: f64) -> Result<OperatorBasis> {
    let d = sic.dim();
    if epsilons.len() != d * d {
        return Err(Error::WrongCount { expected: d * d, found: epsilons.len() });
    }
    if scale <= 0.0 || !scale.is_finite() {
        return Err(Error::InvalidParameter("scale must be positive".into()));
    }
    let a = jordan_shift(d, epsilon)?;
    let e = unit_sign(epsilon)?;
    let signs = epsilons.iter().map(|&s| unit_sign(s)).collect::<Result<Vec<_>>>()?;
    Ok(affine(sic, |j| (e * signs[j] * scale, -e * signs[j] * scale * a)))
}

/// `L_j = Π_j − a` with `ε = +1`.
pub fn jordan_sic_basis(sic: &SicEnsemble) -> Result<OperatorBasis> {
    jordan_basis(sic, 1, &vec![1; sic.dim() * sic.dim()], 1.0)
}

/// Unit-trace-normalized SIC basis `L_j = Π_j`.
pub fn projector_basis(sic: &SicEnsemble) -> OperatorBasis {
    OperatorBasis::new(sic.projectors().to_vec()).expect("d² operators")
}
