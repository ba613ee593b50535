use super::{SicEnsemble, WeightedStateSet};
use crate::error::{Error, Result};
use crate::hermitian::{
    kron, max_abs, spectrum_checked, sym_antisym_projectors, trace_product, vectorize, ComplexMatrix,
    HermitianOperator, Superoperator,
};
use crate::report::CheckReport;
use crate::tol;

/// Pairwise fidelities `1/(d+1)` and `Σ_j Π_j = d·I`, both to `tol`.
pub fn verify_sic(e: &SicEnsemble, tol: f64) -> Result<CheckReport> {
    let d = e.dim();
    let mut sum = ComplexMatrix::zeros(d, d);
    for p in e.projectors() {
        sum += p.matrix();
    }
    let resolution = max_abs(&(sum - ComplexMatrix::identity(d, d).scale(d as f64)));
    let mut r = CheckReport::new("sic");
    let a = r.residual("max_fidelity_error", e.max_fidelity_error(), tol);
    let b = r.residual("resolution_of_identity", resolution, tol);
    r.value("dimension", d as f64);
    Ok(r.finish(a && b))
}

/// Largest line count allowed by the Welch bound at pairwise fidelity `mu`.
pub fn welch_bound(d: usize, mu: f64) -> Result<f64> {
    let df = d as f64;
    if !(0.0..1.0 / df).contains(&mu) {
        return Err(Error::InvalidParameter(format!(
            "fidelity {mu} outside [0, 1/d); the absolute bound d² applies"
        )));
    }
    Ok((df - mu * df) / (1.0 - mu * df))
}

/// `‖Σ_j w_j Π_j⊗Π_j − 2P_s/(d+1)‖_max ≤ tol`. With exactly d² states a pass
/// also requires uniform weights `1/d` and SIC fidelities.
pub fn check_2design(s: &WeightedStateSet, tol: f64) -> Result<CheckReport> {
    let d = s.dim();
    let (ps, _) = sym_antisym_projectors(d);
    let mut sum = ComplexMatrix::zeros(d * d, d * d);
    for (psi, w) in s.states().iter().zip(s.weights()) {
        let p = psi * psi.adjoint();
        sum += kron(&p, &p).scale(*w);
    }
    let residual = max_abs(&(sum - ps.matrix.scale(2.0 / (d as f64 + 1.0))));
    let mut r = CheckReport::new("2design");
    let mut pass = r.residual("tensor_identity", residual, tol);
    r.value("count", s.states().len() as f64);
    if pass && s.states().len() == d * d {
        let weight_dev = s.weights().iter().map(|w| (w - 1.0 / d as f64).abs()).fold(0.0, f64::max);
        let sic = SicEnsemble::from_states(s.states())?;
        let post = tol::POST_FACTOR * tol;
        let a = r.residual("uniform_weight", weight_dev, post);
        let b = r.residual("sic_fidelity", sic.max_fidelity_error(), post);
        pass = r.verdict("minimal_is_sic", a && b);
    }
    Ok(r.finish(pass))
}

/// Outcome of the tight informationally-complete test.
#[derive(Clone, Debug, PartialEq)]
pub struct TightIcReport {
    pub report: CheckReport,
    pub alpha: f64,
    pub beta: f64,
    pub efficient: bool,
}

/// `𝓕 = d Σ_j |E_j⟩⟩⟨⟨E_j| / tr E_j` must equal `α𝐈 + β|1⟩⟩⟨⟨1|` with `α > 0`.
pub fn check_tight_ic(povm: &[HermitianOperator], tol: f64) -> Result<TightIcReport> {
    let d = povm.first().ok_or(Error::Empty)?.dim();
    let mut total = ComplexMatrix::zeros(d, d);
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for (j, e) in povm.iter().enumerate() {
        if e.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: e.dim() });
        }
        let spec = spectrum_checked(e.matrix(), tol::RANK_REL)?;
        if spec.eigenvalues[0] < -tol {
            return Err(Error::Precondition(format!("element {j} is not positive semidefinite")));
        }
        let t = e.trace();
        if t.abs() <= tol {
            return Err(Error::Precondition(format!("element {j} has zero trace")));
        }
        total += e.matrix();
        let v = vectorize(e);
        f += (&v * v.adjoint()).scale(d as f64 / t);
    }
    let completeness = max_abs(&(total - ComplexMatrix::identity(d, d)));
    if completeness > tol {
        return Err(Error::Precondition(format!("elements sum to I only within {completeness:e}")));
    }
    let one = Superoperator::identity_projector(d).matrix;
    let u = vectorize(&HermitianOperator::identity(d)).unscale((d as f64).sqrt());
    let top = (u.adjoint() * &f * &u)[(0, 0)].re;
    let n = (d * d) as f64;
    let alpha = (f.trace().re - top) / (n - 1.0);
    let beta = (top - alpha) / d as f64;
    let model = ComplexMatrix::identity(d * d, d * d).scale(alpha) + one.scale(beta);
    let residual = max_abs(&(f - model));
    let mut r = CheckReport::new("tight_ic");
    let fits = r.residual("frame_superoperator", residual, tol);
    let ic = r.verdict("alpha_positive", alpha > tol);
    let efficient = (alpha - d as f64 / (d as f64 + 1.0)).abs() <= tol;
    r.verdict("efficient", fits && ic && efficient);
    r.value("alpha", alpha);
    r.value("beta", beta);
    r.value("alpha_plus_d_beta", alpha + d as f64 * beta);
    let report = r.finish(fits && ic);
    Ok(TightIcReport { efficient: report.pass && efficient, report, alpha, beta })
}

fn binomial(n: u64, k: u64) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Minimum number of states in a weighted t-design.
pub fn t_design_lower_bound(d: u64, t: u64) -> u128 {
    let hi = t.div_ceil(2);
    let lo = t / 2;
    binomial(d + hi - 1, hi) * binomial(d + lo - 1, lo)
}

/// `tr(Π_j Π_k)` table, used by tests and reports.
pub fn fidelity_table(e: &SicEnsemble) -> Vec<Vec<f64>> {
    let ps = e.projectors();
    ps.iter().map(|a| ps.iter().map(|b| trace_product(a.matrix(), b.matrix()).re).collect()).collect()
}
