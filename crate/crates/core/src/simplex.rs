//! Bases whose Gram matrix is `αδ_jk + γ tr(L_j) tr(L_k)`: the frame,
//! 2-design and superoperator forms of that condition, the trace/norm
//! statements that make such a basis a regular simplex, and recovery of a
//! SIC from a basis of rank-1-plus-identity operators.
//!
//! Residuals are measured relative to `max(1, max_jk |tr(L_j L_k)|)`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    eigh, eigh_real, kron, max_abs, max_abs_real, numerical_rank, superop_from_frame, swap, ComplexMatrix,
    HermitianOperator, OperatorBasis, RealMatrix, Superoperator,
};
use crate::random::{hermitian_basis, rotate_basis};
use crate::report::{CheckReport, ConstantsRecord};
use crate::sic::{verify_sic, SicEnsemble};
use crate::tol;

/// Frame constants of `Σ_j |L_j⟩⟩⟨⟨L_j| = α𝐈 + β|1⟩⟩⟨⟨1|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignConstants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `‖Σ|L_j⟩⟩⟨⟨L_j| − α𝐈 − β|1⟩⟩⟨⟨1|‖_max`.
    pub residual: f64,
}

impl DesignConstants {
    pub fn record(&self) -> ConstantsRecord {
        ConstantsRecord { alpha: self.alpha, beta: self.beta, gamma: self.gamma }
    }
}

fn scale_of(basis: &OperatorBasis) -> f64 {
    max_abs_real(basis.gram()).max(1.0)
}

/// Least-squares fit of `α, β` from `Σ tr(L_j²)` and `Σ [tr L_j]²`; valid
/// for any number of operators.
pub fn fit_alpha_beta(basis: &OperatorBasis) -> DesignConstants {
    let d = basis.dim() as f64;
    let sum_sq: f64 = (0..basis.len()).map(|j| basis.gram()[(j, j)]).sum();
    let sum_tr2: f64 = basis.traces().iter().map(|t| t * t).sum();
    let denom = d * d * d - d;
    let alpha = (d * sum_sq - sum_tr2) / denom;
    let beta = (d * sum_tr2 - sum_sq) / denom;
    let gamma = beta / (alpha + d * beta);
    let frame = basis.frame_superoperator();
    let target = &Superoperator::identity(basis.dim()).matrix.scale(alpha)
        + Superoperator::identity_projector(basis.dim()).matrix.scale(beta);
    DesignConstants { alpha, beta, gamma, residual: max_abs(&(frame.matrix - target)) }
}

/// `γ = 1/d − α / Σ_j [tr L_j]²`.
pub fn gamma_from_traces(d: usize, alpha: f64, traces: &[f64]) -> f64 {
    1.0 / d as f64 - alpha / traces.iter().map(|t| t * t).sum::<f64>()
}

fn gram_residual(basis: &OperatorBasis, alpha: f64, gamma: f64) -> f64 {
    let t = basis.traces();
    let n = basis.len();
    let target = RealMatrix::from_fn(n, n, |j, k| if j == k { alpha } else { 0.0 } + gamma * t[j] * t[k]);
    max_abs_real(&(basis.gram() - target))
}

fn tensor_residual(basis: &OperatorBasis, alpha: f64, beta: f64) -> f64 {
    let d = basis.dim();
    let mut sum = ComplexMatrix::zeros(d * d, d * d);
    for op in basis.operators() {
        sum += kron(op.matrix(), op.matrix());
    }
    // (β+α)P_s + (β−α)P_a = β·I + α·SWAP
    let target = ComplexMatrix::identity(d * d, d * d).scale(beta) + swap(d).scale(alpha);
    max_abs(&(sum - target))
}

/// Tests the Gram, tensor-square and frame-superoperator forms separately.
///
/// `pass` means all three hold; the `agree` verdict records whether the
/// three verdicts coincide.
pub fn check_trichotomy(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let d = basis.dim();
    if basis.len() != d * d {
        return Err(Error::WrongCount { expected: d * d, found: basis.len() });
    }
    let c = fit_alpha_beta(basis);
    let s = scale_of(basis);
    let mut r = CheckReport::new("trichotomy");
    r.constants = Some(c.record());
    let gram = if (c.alpha + d as f64 * c.beta).abs() > tol * s {
        r.residual("gram", gram_residual(basis, c.alpha, c.gamma) / s, tol)
    } else {
        r.note("alpha + d beta vanishes; gamma undefined");
        r.residual("gram", f64::INFINITY, tol)
    };
    let tensor = r.residual("tensor", tensor_residual(basis, c.alpha, c.beta) / s, tol);
    let superop = r.residual("superoperator", c.residual / s, tol);
    r.verdict("gram", gram);
    r.verdict("tensor", tensor);
    r.verdict("superoperator", superop);
    r.verdict("agree", gram == tensor && tensor == superop);
    r.value("alpha_plus_d_beta", c.alpha + d as f64 * c.beta);
    Ok(r.finish(gram && tensor && superop))
}

/// For `n` operators obeying the frame identity, compares spanning (rank of
/// the frame superoperator equal to d²) with `α > 0 ∧ α + dβ > 0`.
pub fn check_frame_span(ops: &[HermitianOperator], tol: f64) -> Result<CheckReport> {
    let basis = OperatorBasis::from_operators(ops.to_vec())?;
    let d = basis.dim();
    let c = fit_alpha_beta(&basis);
    let s = scale_of(&basis);
    if c.residual / s > tol {
        return Err(Error::Precondition(format!(
            "frame superoperator is not of the form alpha I + beta |1><<1| (residual {:e})",
            c.residual / s
        )));
    }
    let frame = superop_from_frame(ops)?;
    let spectrum = frame.spectrum(tol::RANK_REL);
    let rank = spectrum.numerical_rank;
    let mut r = CheckReport::new("frame_span");
    r.constants = Some(c.record());
    let spans = r.verdict("spans", rank == d * d);
    let positive = r.verdict("constants_positive", c.alpha > tol * s && c.alpha + d as f64 * c.beta > tol * s);
    r.value("rank", rank as f64);
    r.value("alpha_plus_d_beta", c.alpha + d as f64 * c.beta);
    r.verdict("agree", spans == positive);
    Ok(r.finish(spans == positive))
}

/// Outcome of evaluating the eight trace statements on a qualifying basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexClassification {
    pub statements_holding: BTreeSet<u8>,
    /// Sign of `tr(L_j)`; zero traces get `+1`.
    pub signs: Vec<i8>,
    /// Gram matrix of the form `αδ_jk + ζ`.
    pub regular: bool,
    pub beta_zero: bool,
    /// Verdicts respect the equivalence classes for the current `β` branch.
    pub consistent: bool,
    pub report: CheckReport,
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

fn sign(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

fn regular_residual(gram: &RealMatrix) -> (f64, f64, f64) {
    let n = gram.nrows();
    let diag: f64 = (0..n).map(|j| gram[(j, j)]).sum::<f64>() / n as f64;
    let off: f64 = if n > 1 { (gram.sum() - diag * n as f64) / (n * n - n) as f64 } else { 0.0 };
    let zeta = off;
    let alpha = diag - off;
    let target = RealMatrix::from_fn(n, n, |j, k| if j == k { alpha } else { 0.0 } + zeta);
    (alpha, zeta, max_abs_real(&(gram - target)))
}

/// Evaluates statements 1–8 on a basis satisfying the frame identity and,
/// when they hold, the trace/norm values they force.
pub fn classify_simplex(basis: &OperatorBasis, constants: &DesignConstants, tol: f64) -> Result<SimplexClassification> {
    let tri = check_trichotomy(basis, tol)?;
    if !tri.pass {
        return Err(Error::Precondition("basis does not satisfy the frame identity".into()));
    }
    let d = basis.dim();
    let df = d as f64;
    let n = basis.len();
    let s = scale_of(basis);
    let (alpha, beta) = (constants.alpha, constants.beta);
    let gram = basis.gram();
    let tr = basis.traces();
    let sq: Vec<f64> = (0..n).map(|j| gram[(j, j)]).collect();
    let signs: Vec<i8> = tr.iter().map(|&t| sign(t)).collect();
    let eps = |j: usize| signs[j] as f64;
    let nonzero = tr.iter().all(|t| t.abs() > tol * s.sqrt());
    let beta_zero = beta.abs() <= tol * s;

    let abs_tr: Vec<f64> = tr.iter().map(|t| t.abs()).collect();
    let s1 = spread(&abs_tr) <= tol * s.sqrt();
    let s2 = spread(&sq) <= tol * s;
    let ratio: Vec<f64> = tr.iter().zip(&sq).map(|(t, q)| t * t / q).collect();
    let s3 = spread(&ratio) <= tol;
    let four: Vec<f64> = tr.iter().zip(&sq).map(|(t, q)| df * q - t * t).collect();
    let s4 = spread(&four) <= tol * s;
    let s5 = nonzero && {
        let target = RealMatrix::from_fn(n, n, |j, k| if j == k { alpha } else { 0.0 } + beta * eps(j) * eps(k) / df);
        max_abs_real(&(gram - target)) <= tol * s
    };
    let s6 = nonzero && {
        let mut cosines = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in (j + 1)..n {
                cosines.push(eps(j) * eps(k) * gram[(j, k)] / (sq[j] * sq[k]).sqrt());
            }
        }
        spread(&cosines) <= tol
    };
    let mut signed_sum = ComplexMatrix::zeros(d, d);
    for (j, op) in basis.operators().iter().enumerate() {
        signed_sum += op.matrix().scale(eps(j));
    }
    let centre = signed_sum.trace().re / df;
    let s7 = nonzero && max_abs(&(&signed_sum - ComplexMatrix::identity(d, d).scale(centre))) <= tol * s.sqrt();
    let target8 = df * (df * alpha + df * df * beta).max(0.0).sqrt();
    let s8 = (abs_tr.iter().sum::<f64>() - target8).abs() <= tol * s.sqrt() * n as f64;

    let flags = [s1, s2, s3, s4, s5, s6, s7, s8];
    let statements_holding: BTreeSet<u8> = (1..=8u8).filter(|&k| flags[(k - 1) as usize]).collect();
    let consistent = if beta_zero {
        let main = [s1, s3, s4, s7, s8];
        s2 && main.iter().all(|&x| x == s1) && s5 == s6 && (!s1 || s5)
    } else {
        flags.iter().all(|&x| x == s1)
    };

    let mut r = CheckReport::new("simplex_classification");
    r.constants = Some(constants.record());
    for (k, f) in flags.iter().enumerate() {
        r.verdict(&format!("statement_{}", k + 1), *f);
    }
    r.verdict("consistent", consistent);
    r.verdict("beta_zero", beta_zero);
    let (_, _, reg) = regular_residual(gram);
    let regular = r.verdict("regular", reg <= tol * s);

    let forcing = if beta_zero { s1 && s3 && s4 && s7 && s8 } else { flags.iter().all(|&x| x) };
    let mut consequences = true;
    if forcing {
        let post = tol::POST_FACTOR * tol;
        let norm_target = (df * alpha + beta) / df;
        let tr_target = ((alpha + df * beta) / df).sqrt();
        let norm_res = sq.iter().map(|q| (q - norm_target).abs()).fold(0.0, f64::max);
        let tr_res = (0..n).map(|j| (tr[j] - eps(j) * tr_target).abs()).fold(0.0, f64::max);
        let sum_res =
            max_abs(&(&signed_sum - ComplexMatrix::identity(d, d).scale((df * (alpha + df * beta)).sqrt())));
        consequences &= r.residual("square_trace", norm_res / s, post);
        consequences &= r.residual("trace_value", tr_res / s.sqrt(), post);
        consequences &= r.residual("signed_sum", sum_res / s.sqrt(), post);
    }
    let pass = forcing && consistent && consequences;
    Ok(SimplexClassification {
        statements_holding,
        signs,
        regular,
        beta_zero,
        consistent,
        report: r.finish(pass),
    })
}

/// Statements for a Gram matrix `αδ_jk + ζ`: `ΣL_j ∝ 1`, constant
/// `tr(L_j)`, and `|Σ tr L_j| = d√(dα + d³ζ)`.
pub fn check_regular_simplex(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let d = basis.dim();
    let df = d as f64;
    if basis.len() != d * d {
        return Err(Error::WrongCount { expected: d * d, found: basis.len() });
    }
    let s = scale_of(basis);
    let (alpha, zeta, res) = regular_residual(basis.gram());
    if res > tol * s {
        return Err(Error::Precondition(format!("Gram matrix is not alpha delta + zeta (residual {:e})", res / s)));
    }
    let tr = basis.traces();
    let mut sum = ComplexMatrix::zeros(d, d);
    for op in basis.operators() {
        sum += op.matrix();
    }
    let centre = sum.trace().re / df;
    let radius = (df * alpha + df.powi(3) * zeta).max(0.0).sqrt();
    let s1 = max_abs(&(&sum - ComplexMatrix::identity(d, d).scale(centre))) <= tol * s.sqrt();
    let s2 = spread(&tr) <= tol * s.sqrt();
    let total: f64 = tr.iter().sum();
    let s3 = (total.abs() - df * radius).abs() <= tol * s.sqrt() * d as f64;

    let mut r = CheckReport::new("regular_simplex");
    r.value("alpha", alpha);
    r.value("zeta", zeta);
    r.residual("regular_form", res / s, tol);
    r.verdict("statement_1", s1);
    r.verdict("statement_2", s2);
    r.verdict("statement_3", s3);
    let agree = r.verdict("agree", s1 == s2 && s2 == s3);
    let mut ok = s1 && s2 && s3;
    if ok {
        let eps = sign(total) as f64;
        r.value("epsilon", eps);
        let post = tol::POST_FACTOR * tol;
        let tr_res = tr.iter().map(|t| (t - eps * radius / df).abs()).fold(0.0, f64::max);
        let sum_res = max_abs(&(&sum - ComplexMatrix::identity(d, d).scale(eps * radius)));
        ok &= r.residual("trace_value", tr_res / s.sqrt(), post);
        ok &= r.residual("sum_value", sum_res / s.sqrt(), post);
    }
    Ok(r.finish(ok && agree))
}

/// `L_j = a_j Π_j + b_j·1` with `{Π_j}` a SIC.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1PlusIdentityDecomposition {
    pub sic: SicEnsemble,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub epsilon: i8,
    pub epsilon_j: Vec<i8>,
    /// Statements that licensed the decomposition (d = 2 only).
    pub licensed_by: Vec<u8>,
    /// `max_j ‖L_j − a_jΠ_j − b_j‖_max`.
    pub reconstruction_residual: f64,
    /// The other eigenprojector family at d = 2.
    pub alternate: Option<SicEnsemble>,
}

/// Recovers the SIC behind a basis of rank-1-plus-identity operators. At
/// d = 2 the `ε = +1` branch is returned; see
/// [`decompose_rank1_plus_identity_with`].
pub fn decompose_rank1_plus_identity(
    basis: &OperatorBasis,
    constants: &DesignConstants,
    tol: f64,
) -> Result<Rank1PlusIdentityDecomposition> {
    decompose_rank1_plus_identity_with(basis, constants, tol, 1)
}

/// As [`decompose_rank1_plus_identity`]; `epsilon` selects the d = 2 branch
/// and is ignored for d ≥ 3, where the basis fixes it.
pub fn decompose_rank1_plus_identity_with(
    basis: &OperatorBasis,
    constants: &DesignConstants,
    tol: f64,
    epsilon: i8,
) -> Result<Rank1PlusIdentityDecomposition> {
    let cls = classify_simplex(basis, constants, tol)?;
    let d = basis.dim();
    let df = d as f64;
    let (alpha, beta) = (constants.alpha, constants.beta);
    let post = tol::POST_FACTOR * tol;
    let a_abs = (alpha * (df + 1.0) / df).sqrt();
    let ratio = ((alpha + df * beta) / (alpha * (df + 1.0))).sqrt();

    let (projectors, a, b, eps, eps_j, licensed, alternate) = if d == 2 {
        let licensed: Vec<u8> = if cls.beta_zero {
            cls.statements_holding.iter().copied().filter(|k| [1, 3, 4, 7, 8].contains(k)).collect()
        } else {
            cls.statements_holding.iter().copied().collect()
        };
        if licensed.is_empty() {
            return Err(Error::Precondition(
                "d = 2 requires one of the trace statements; none holds".into(),
            ));
        }
        let root_b = ((alpha + 2.0 * beta) / 2.0).sqrt();
        let root_a = (1.5 * alpha).sqrt();
        let lp = 0.5 * (root_b + root_a);
        let lm = 0.5 * (root_b - root_a);
        let mut plus = Vec::with_capacity(4);
        let mut minus = Vec::with_capacity(4);
        for (j, op) in basis.operators().iter().enumerate() {
            let e = cls.signs[j] as f64;
            let m = op.matrix().scale(e);
            let id = ComplexMatrix::identity(2, 2);
            plus.push(HermitianOperator::new((&m - id.scale(lm)).scale(1.0 / (lp - lm)))?);
            minus.push(HermitianOperator::new((id.scale(lp) - &m).scale(1.0 / (lp - lm)))?);
        }
        let eps: i8 = if epsilon < 0 { -1 } else { 1 };
        let (chosen, other) = if eps > 0 { (plus, minus) } else { (minus, plus) };
        let a: Vec<f64> = cls.signs.iter().map(|&e| (e * eps) as f64 * a_abs).collect();
        let b: Vec<f64> = a.iter().map(|aj| -(aj / df) * (1.0 - eps as f64 * ratio)).collect();
        let alternate = SicEnsemble::candidate(other).ok();
        let eps_j: Vec<i8> = cls.signs.iter().map(|&e| e * eps).collect();
        (chosen, a, b, eps, eps_j, licensed, alternate)
    } else {
        let scale = scale_of(basis).sqrt();
        let mut projectors = Vec::with_capacity(d * d);
        let mut a = Vec::with_capacity(d * d);
        let mut b = Vec::with_capacity(d * d);
        for (j, op) in basis.operators().iter().enumerate() {
            let norm = op.norm();
            let (vals, vecs) = eigh(op.matrix());
            let low = spread(&vals[..d - 1]);
            let high = spread(&vals[1..]);
            if low.min(high) > tol::SHAPE.max(tol) * norm {
                return Err(Error::Precondition(format!(
                    "operator {j} lacks d-1 equal eigenvalues (spread {:e})",
                    low.min(high) / norm
                )));
            }
            let (iso, cluster) = if low <= high { (d - 1, &vals[..d - 1]) } else { (0, &vals[1..]) };
            let mu = cluster.iter().sum::<f64>() / (d - 1) as f64;
            let aj = vals[iso] - mu;
            if (aj.abs() - a_abs).abs() > post * scale {
                return Err(Error::Precondition(format!(
                    "operator {j}: isolated gap {:e} differs from sqrt(alpha (d+1)/d) = {:e}",
                    aj.abs(),
                    a_abs
                )));
            }
            projectors.push(HermitianOperator::projector(&vecs.column(iso).into_owned()));
            a.push(aj);
            b.push(mu);
        }
        let eps_j: Vec<i8> = a.iter().map(|&x| sign(x)).collect();
        let weighted: f64 = basis.traces().iter().zip(&eps_j).map(|(t, &e)| t * e as f64).sum();
        let eps = sign(weighted);
        (projectors, a, b, eps, eps_j, Vec::new(), None)
    };

    let mut residual = 0.0f64;
    let mut formula = 0.0f64;
    for (j, op) in basis.operators().iter().enumerate() {
        let rebuilt = projectors[j].matrix().scale(a[j]) + ComplexMatrix::identity(d, d).scale(b[j]);
        residual = residual.max(max_abs(&(op.matrix() - rebuilt)));
        let want_b = -(a[j] / df) * (1.0 - eps as f64 * ratio);
        formula = formula.max((b[j] - want_b).abs()).max((a[j] - eps_j[j] as f64 * a_abs).abs());
    }
    let s = scale_of(basis).sqrt();
    if residual > post * s || formula > post * s {
        return Err(Error::Precondition(format!(
            "rank-1-plus-identity fit failed (reconstruction {residual:e}, coefficients {formula:e})"
        )));
    }
    let sic = SicEnsemble::candidate(projectors)?;
    if !verify_sic(&sic, post.max(tol::SIC))?.pass {
        return Err(Error::Precondition(format!(
            "recovered projectors are not a SIC (fidelity error {:e})",
            sic.max_fidelity_error()
        )));
    }
    Ok(Rank1PlusIdentityDecomposition {
        sic,
        a,
        b,
        epsilon: eps,
        epsilon_j: eps_j,
        licensed_by: licensed,
        reconstruction_residual: residual,
        alternate,
    })
}

/// Random basis with Gram matrix exactly `αδ_jk + γ tr(L_j) tr(L_k)`.
///
/// A random basis is orthonormalized with `G^{-1/2}` (applied twice) and then mapped by
/// `√α(1 + c·uuᵀ)`, `u` the normalized trace vector, `1 + c = 1/√(1 − γd)`.
pub fn gram_engineered_basis<R: Rng + ?Sized>(d: usize, alpha: f64, gamma: f64, rng: &mut R) -> Result<OperatorBasis> {
    let df = d as f64;
    if alpha <= 0.0 || gamma * df >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "target Gram is not positive definite (alpha {alpha}, gamma {gamma})"
        )));
    }
    let raw = hermitian_basis(d, rng);
    let (vals, _) = eigh_real(raw.gram());
    if vals[0] <= tol::POSITIVE_DEFINITE * vals[d * d - 1] {
        return Err(Error::SingularGram);
    }
    // second pass removes the rounding left by an ill-conditioned first Gram
    let ortho = orthonormalize(&orthonormalize(&raw));
    let t = nalgebra::DVector::from_vec(ortho.traces());
    let u = t.unscale(df.sqrt());
    let c = 1.0 / (1.0 - gamma * df).sqrt() - 1.0;
    let n = d * d;
    let w = (RealMatrix::identity(n, n) + (&u * u.transpose()).scale(c)).scale(alpha.sqrt());
    Ok(rotate_basis(&ortho, &w))
}

fn orthonormalize(basis: &OperatorBasis) -> OperatorBasis {
    let (vals, vecs) = eigh_real(basis.gram());
    let inv_sqrt = &vecs * RealMatrix::from_diagonal(&vals.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>().into())
        * vecs.transpose();
    rotate_basis(basis, &inv_sqrt)
}

/// Rank of the frame superoperator of an operator list (helper for span checks).
pub fn frame_rank(ops: &[HermitianOperator]) -> Result<usize> {
    let frame = superop_from_frame(ops)?;
    let vals = crate::hermitian::eigenvalues_hermitian(&frame.matrix);
    Ok(numerical_rank(&vals, tol::RANK_REL))
}
