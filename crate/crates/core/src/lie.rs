//! Lie-algebraic tests on Hermitian bases of u(d) (physicist convention:
//! Hermitian elements, imaginary structure constants).

use crate::construct::lie_basis;
use crate::error::{Error, Result};
use crate::hermitian::{
    eigenvalues_hermitian, eigh, hermiticity_defect, map_matrix, matrix_unit_basis, max_abs, numerical_rank,
    ComplexMatrix, HermitianOperator, OperatorBasis,
};
use crate::report::CheckReport;
use crate::simplex::{check_trichotomy, decompose_rank1_plus_identity, fit_alpha_beta, Rank1PlusIdentityDecomposition};
use crate::sic::{verify_sic, SicEnsemble};
use crate::structure::{Product, StructureTensor};
use crate::tol;

/// `[L_j, L_k] = Σ_l C_jkl L_l`.
pub fn lie_structure(basis: &OperatorBasis) -> Result<StructureTensor> {
    StructureTensor::compute(basis, Product::Commutator)
}

fn rel_scale(s: &StructureTensor) -> f64 {
    s.max_abs().max(1.0)
}

/// `C_j = H_j − H_jᵀ` with `H_j` the positive spectral part of `C_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HminusHTDecomposition {
    pub h: Vec<ComplexMatrix>,
    /// `max_j ‖C_j − (H_j − H_jᵀ)‖_max`.
    pub residual: f64,
    /// `max_j ‖N_j − H_jᵀ‖_max` where `−N_j` is the negative spectral part.
    pub transpose_residual: f64,
    /// `max_j ‖H_j H_jᵀ‖_max`.
    pub orthogonality: f64,
    /// Every `H_j` is a rank-(d−1) projector.
    pub projectors: bool,
}

pub fn h_minus_ht(s: &StructureTensor, tol: f64) -> HminusHTDecomposition {
    let d = s.dim;
    let mut h = Vec::with_capacity(s.len());
    let (mut residual, mut transpose_residual, mut orthogonality) = (0.0f64, 0.0f64, 0.0f64);
    let mut projectors = true;
    for c in s.matrices() {
        let herm = (&c + c.adjoint()).scale(0.5);
        let (vals, vecs) = eigh(&herm);
        let n = vals.len();
        let mut pos = ComplexMatrix::zeros(n, n);
        let mut neg = ComplexMatrix::zeros(n, n);
        for (i, &v) in vals.iter().enumerate() {
            let col = vecs.column(i);
            let outer = &col * col.adjoint();
            if v > 0.0 {
                pos += outer.scale(v);
            } else {
                neg -= outer.scale(v);
            }
        }
        let ht = pos.transpose();
        residual = residual.max(max_abs(&(&c - (&pos - &ht))));
        transpose_residual = transpose_residual.max(max_abs(&(&neg - &ht)));
        orthogonality = orthogonality.max(max_abs(&(&pos * &ht)));
        let idem = max_abs(&(&pos * &pos - &pos));
        let rank = numerical_rank(&eigenvalues_hermitian(&pos), tol::RANK_REL);
        projectors &= idem <= tol && rank == d - 1;
        h.push(pos);
    }
    HminusHTDecomposition { h, residual, transpose_residual, orthogonality, projectors }
}

/// Hermitian structure matrices, complete antisymmetry, the `H − Hᵀ` form,
/// and the frame identity, evaluated independently.
pub fn check_antisymmetry_equivalences(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let s = lie_structure(basis)?;
    let scale = rel_scale(&s);
    let mut r = CheckReport::new("lie_antisymmetry");
    r.value("reconstruction_residual", s.reconstruction_residual);
    let herm = s.matrices().iter().map(hermiticity_defect).fold(0.0, f64::max) / scale;
    let v1 = r.residual("hermitian", herm, tol);
    let anti = s.first_pair_defect().max(s.last_pair_defect()) / scale;
    let v2 = r.residual("antisymmetric", anti, tol);
    let hd = h_minus_ht(&s, tol);
    let hres = hd.residual.max(hd.transpose_residual).max(hd.orthogonality / scale) / scale;
    let v3 = r.residual("h_minus_ht", hres, tol);
    let v4 = check_trichotomy(basis, tol)?.pass;
    r.verdict("statement_1", v1);
    r.verdict("statement_2", v2);
    r.verdict("statement_3", v3);
    r.verdict("statement_4", v4);
    r.verdict("h_projectors", hd.projectors);
    let agree = r.verdict("agree", v1 == v2 && v2 == v3 && v3 == v4);
    Ok(r.finish(v1 && v2 && v3 && v4 && agree))
}

/// `{λ_j − λ_k}` sorted ascending.
pub fn ad_spectrum(a: &HermitianOperator) -> Vec<f64> {
    let lambda = eigenvalues_hermitian(a.matrix());
    let mut out: Vec<f64> = lambda.iter().flat_map(|x| lambda.iter().map(move |y| x - y)).collect();
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    out
}

/// Eigenvalues of the matrix of `ad_A` in an orthonormal basis, sorted, and
/// their max deviation from [`ad_spectrum`].
pub fn ad_spectrum_checked(a: &HermitianOperator) -> (Vec<f64>, f64) {
    let basis = matrix_unit_basis(a.dim());
    let m = map_matrix(&basis, |x| crate::hermitian::commutator(a.matrix(), x));
    let direct = eigenvalues_hermitian(&m);
    let pairs = ad_spectrum(a);
    let dev = direct.iter().zip(&pairs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    (pairs, dev)
}

/// Rank verdict of a Hermitian matrix against `expected`, refusing to decide
/// when a relative singular value sits within a factor `POST_FACTOR` of the
/// threshold.
pub(crate) fn stable_rank(m: &ComplexMatrix, threshold: f64) -> Result<usize> {
    let vals = eigenvalues_hermitian(&(m + m.adjoint()).scale(0.5));
    let top = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0);
    }
    for v in &vals {
        let rel = v.abs() / top;
        if rel > threshold / tol::POST_FACTOR && rel < threshold * tol::POST_FACTOR {
            return Err(Error::UnstableRank { gap: rel });
        }
    }
    Ok(numerical_rank(&vals, threshold))
}

/// Witness parameters of `L_j = ε_j ℓ(Π_j + η)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSicWitness {
    pub decomposition: Rank1PlusIdentityDecomposition,
    pub ell: f64,
    pub eta: f64,
    pub epsilons: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieSicOutcome {
    pub report: CheckReport,
    pub witness: Option<LieSicWitness>,
}

/// Hermitian structure matrices of rank 2(d−1); on pass, the SIC and
/// `(ε_j, ℓ, η)` are recovered. Requires d ≥ 3.
pub fn check_lie_sic_criterion(basis: &OperatorBasis, tol: f64) -> Result<LieSicOutcome> {
    let d = basis.dim();
    if d < 3 {
        return Err(Error::Unsupported {
            d,
            reason: "the Lie criterion holds only for d >= 3; d = 2 needs the Q - Q^T form".into(),
        });
    }
    let s = lie_structure(basis)?;
    let scale = rel_scale(&s);
    let mut r = CheckReport::new("lie_sic");
    let matrices = s.matrices();
    let herm = matrices.iter().map(hermiticity_defect).fold(0.0, f64::max) / scale;
    let hermitian = r.residual("hermitian", herm, tol);
    let mut ranks_ok = true;
    let mut worst_rank = 0usize;
    for c in &matrices {
        let rank = stable_rank(c, tol::RANK_REL)?;
        if rank != 2 * (d - 1) {
            ranks_ok = false;
            worst_rank = worst_rank.max(rank);
        }
    }
    r.verdict("hermitian", hermitian);
    r.verdict("rank", ranks_ok);
    if !ranks_ok {
        r.value("offending_rank", worst_rank as f64);
    }
    r.value("expected_rank", (2 * (d - 1)) as f64);
    if !(hermitian && ranks_ok) {
        return Ok(LieSicOutcome { report: r.finish(false), witness: None });
    }
    let constants = fit_alpha_beta(basis);
    r.constants = Some(constants.record());
    let dec = match decompose_rank1_plus_identity(basis, &constants, tol) {
        Ok(dec) => dec,
        Err(e) => {
            r.note(format!("decomposition failed: {e}"));
            return Ok(LieSicOutcome { report: r.finish(false), witness: None });
        }
    };
    let ell = dec.a[0].abs();
    let etas: Vec<f64> = dec.a.iter().zip(&dec.b).map(|(a, b)| b / a).collect();
    let eta = etas[0];
    let spread = etas.iter().map(|e| (e - eta).abs()).fold(0.0, f64::max);
    let ok = r.residual("eta_spread", spread, tol::POST_FACTOR * tol);
    r.value("ell", ell);
    r.value("eta", eta);
    let epsilons = dec.epsilon_j.clone();
    Ok(LieSicOutcome {
        report: r.finish(ok),
        witness: Some(LieSicWitness { decomposition: dec, ell, eta, epsilons }),
    })
}

/// `L_j = ε_j ℓ(Π_j + η)`.
pub fn build_lie_sic_basis(sic: &SicEnsemble, epsilons: &[i8], ell: f64, eta: f64) -> Result<OperatorBasis> {
    lie_basis(sic, epsilons, ell, eta)
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Gram of `{ε_j L_j}` is `αδ_jk + ζ`; returns `(α, ζ, residual)`.
fn signed_regular(basis: &OperatorBasis) -> (f64, f64, f64) {
    let n = basis.len();
    let tr = basis.traces();
    let g = basis.gram();
    let signed = nalgebra::DMatrix::from_fn(n, n, |j, k| sign(tr[j]) * sign(tr[k]) * g[(j, k)]);
    let diag = (0..n).map(|j| signed[(j, j)]).sum::<f64>() / n as f64;
    let off = (signed.sum() - diag * n as f64) / (n * n - n) as f64;
    let target = nalgebra::DMatrix::from_fn(n, n, |j, k| if j == k { diag } else { off });
    (diag - off, off, crate::hermitian::max_abs_real(&(signed - target)))
}

/// Complete antisymmetry against `{ε_j L_j}` forming a regular simplex, on
/// bases with constant `tr(L_j²)` or constant `|tr(L_j)|`.
pub fn check_normalized_basis_theorems(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let n = basis.len();
    let gscale = crate::hermitian::max_abs_real(basis.gram()).max(1.0);
    let sq: Vec<f64> = (0..n).map(|j| basis.gram()[(j, j)]).collect();
    let abs_tr: Vec<f64> = basis.traces().iter().map(|t| t.abs()).collect();
    let spread = |v: &[f64]| {
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let norm_const = spread(&sq) <= tol * gscale;
    let trace_const = spread(&abs_tr) <= tol * gscale.sqrt();
    if !norm_const && !trace_const {
        return Err(Error::Precondition("neither tr(L_j^2) nor |tr(L_j)| is constant; theorems inapplicable".into()));
    }
    let s = lie_structure(basis)?;
    let anti = (s.first_pair_defect().max(s.last_pair_defect())) / rel_scale(&s) <= tol;
    let (_, zeta, res) = signed_regular(basis);
    let regular = res <= tol * gscale;
    let orthogonal = zeta.abs() <= tol * gscale;
    let nonzero_const = trace_const && abs_tr[0] > tol * gscale.sqrt();
    let mut r = CheckReport::new("normalized_basis");
    r.verdict("antisymmetric", anti);
    r.verdict("signed_regular_simplex", regular);
    r.verdict("orthogonal", orthogonal);
    let mut ok = true;
    if norm_const {
        let side = regular && (orthogonal || nonzero_const);
        ok &= r.verdict("constant_square_norm_branch", anti == side);
    }
    if trace_const {
        ok &= r.verdict("constant_abs_trace_branch", anti == regular);
    }
    Ok(r.finish(ok))
}

/// For rank-1 bases: complete antisymmetry against `ε_j L_j/ℓ` being a SIC
/// with `ℓ = √(α(d+1)/d)`.
pub fn check_rank_one_corollary(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    for (j, op) in basis.operators().iter().enumerate() {
        if numerical_rank(&eigenvalues_hermitian(op.matrix()), tol::RANK_REL) != 1 {
            return Err(Error::Precondition(format!("operator {j} is not rank one")));
        }
    }
    let d = basis.dim() as f64;
    let s = lie_structure(basis)?;
    let anti = (s.first_pair_defect().max(s.last_pair_defect())) / rel_scale(&s) <= tol;
    let c = fit_alpha_beta(basis);
    let ell = (c.alpha * (d + 1.0) / d).max(0.0).sqrt();
    let tr = basis.traces();
    let sic = if ell > 0.0 {
        let ops: Vec<HermitianOperator> =
            basis.operators().iter().zip(&tr).map(|(o, t)| o.scale(sign(*t) / ell)).collect();
        match SicEnsemble::candidate(ops) {
            Ok(e) => verify_sic(&e, tol::POST_FACTOR * tol)?.pass,
            Err(_) => false,
        }
    } else {
        false
    };
    let mut r = CheckReport::new("rank_one_corollary");
    r.value("ell", ell);
    r.verdict("antisymmetric", anti);
    r.verdict("scaled_sic", sic);
    Ok(r.finish(anti == sic))
}

/// `max |Σ_m (C_jkm C_mlp + C_klm C_mjp + C_ljm C_mkp)|`.
pub fn jacobi_residual(s: &StructureTensor) -> f64 {
    let n = s.len();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                for p in 0..n {
                    let mut acc = num_complex::Complex64::new(0.0, 0.0);
                    for m in 0..n {
                        acc += s.get(j, k, m) * s.get(m, l, p)
                            + s.get(k, l, m) * s.get(m, j, p)
                            + s.get(l, j, m) * s.get(m, k, p);
                    }
                    worst = worst.max(acc.norm());
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{gell_mann_basis, projector_basis};
    use crate::hermitian::c;
    use crate::random::{hermitian_basis, orthonormal_basis, stream_rng};
    use crate::sic::{wh_orbit, Fiducial};

    #[test]
    fn pauli_structure_constants() {
        let b = gell_mann_basis(2);
        let s = lie_structure(&b).unwrap();
        assert!(s.reconstruction_residual < 1e-12);
        // gell_mann(2) = {I, σ_z, σ_x, σ_y}/√2; [σ_x, σ_y]/2 = iσ_z/√2·√2
        let (z, x, y) = (1, 2, 3);
        assert!((s.get(x, y, z) - c(0.0, 2f64.sqrt())).norm() < 1e-12);
        assert!((s.get(y, z, x) - c(0.0, 2f64.sqrt())).norm() < 1e-12);
        assert!((s.get(z, x, y) - c(0.0, 2f64.sqrt())).norm() < 1e-12);
        for k in 0..4 {
            for l in 0..4 {
                assert!(s.get(0, k, l).norm() < 1e-12);
                assert!(s.get(k, k, l).norm() < 1e-12);
            }
        }
        assert!(s.max_real_part() < 1e-12);
    }

    #[test]
    fn jacobi_on_random_basis() {
        let mut rng = stream_rng(2, 0);
        let b = hermitian_basis(2, &mut rng);
        let s = lie_structure(&b).unwrap();
        assert!(jacobi_residual(&s) < 1e-8);
    }

    #[test]
    fn antisymmetry_examples() {
        let sic = wh_orbit(&Fiducial::hesse_d3());
        let r = check_antisymmetry_equivalences(&projector_basis(&sic), 1e-9).unwrap();
        assert!(r.pass && r.verdicts["h_projectors"]);
        let mut rng = stream_rng(3, 0);
        let r = check_antisymmetry_equivalences(&hermitian_basis(3, &mut rng), 1e-9).unwrap();
        assert!(!r.pass && r.verdicts["agree"]);
        let r = check_antisymmetry_equivalences(&orthonormal_basis(3, &mut rng), 1e-9).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn ad_spectra() {
        let r = ad_spectrum(&HermitianOperator::identity(3));
        assert!(r.iter().all(|x| *x == 0.0));
        let mut psi = crate::hermitian::ComplexVector::zeros(4);
        psi[1] = c(1.0, 0.0);
        let (spec, dev) = ad_spectrum_checked(&HermitianOperator::projector(&psi));
        assert!(dev < 1e-9);
        assert_eq!(spec.iter().filter(|x| (**x - 1.0).abs() < 1e-12).count(), 3);
        assert_eq!(spec.iter().filter(|x| (**x + 1.0).abs() < 1e-12).count(), 3);
        assert_eq!(spec.iter().filter(|x| x.abs() < 1e-12).count(), 10);
        let (spec, dev) = ad_spectrum_checked(&HermitianOperator::from_real_diagonal(&[2.0, 1.0, 0.0]));
        assert!(dev < 1e-9);
        assert_eq!(spec, vec![-2.0, -1.0, -1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn lie_criterion_round_trip_d3() {
        let sic = wh_orbit(&Fiducial::hesse_d3());
        let eps = [1, -1, 1, 1, -1, -1, 1, 1, -1];
        let b = build_lie_sic_basis(&sic, &eps, 2.0, 0.3).unwrap();
        let out = check_lie_sic_criterion(&b, 1e-9).unwrap();
        assert!(out.report.pass, "{:?}", out.report);
        let w = out.witness.unwrap();
        assert!((w.ell - 2.0).abs() < 1e-9 && (w.eta - 0.3).abs() < 1e-9);
        assert_eq!(w.epsilons, eps.to_vec());
        let out = check_lie_sic_criterion(&gell_mann_basis(3), 1e-9).unwrap();
        assert!(!out.report.pass);
        assert!(check_lie_sic_criterion(&gell_mann_basis(2), 1e-9).is_err());
    }

    #[test]
    fn normalized_basis_theorems() {
        let sic = wh_orbit(&Fiducial::hesse_d3());
        assert!(check_normalized_basis_theorems(&projector_basis(&sic), 1e-9).unwrap().pass);
        let mixed = build_lie_sic_basis(&sic, &[1, -1, 1, -1, 1, -1, 1, -1, 1], 1.0, 0.0).unwrap();
        let r = check_normalized_basis_theorems(&mixed, 1e-9).unwrap();
        assert!(r.pass && r.verdicts["antisymmetric"]);
        let r = check_normalized_basis_theorems(&gell_mann_basis(3), 1e-9).unwrap();
        assert!(r.pass && r.verdicts["antisymmetric"] && r.verdicts["signed_regular_simplex"]);
    }

    #[test]
    fn rank_one_corollary_both_directions() {
        let sic = wh_orbit(&Fiducial::tetrahedral_d2());
        let scaled = projector_basis(&sic).map(|j, o| o.scale(if j % 2 == 0 { 1.5 } else { -1.5 })).unwrap();
        let r = check_rank_one_corollary(&scaled, 1e-9).unwrap();
        assert!(r.pass && r.verdicts["antisymmetric"] && r.verdicts["scaled_sic"]);
        let mut rng = stream_rng(8, 0);
        let states: Vec<_> = (0..4).map(|_| crate::random::unit_vector(2, &mut rng)).collect();
        let b = OperatorBasis::new(states.iter().map(HermitianOperator::projector).collect()).unwrap();
        let r = check_rank_one_corollary(&b, 1e-9).unwrap();
        assert!(r.pass && !r.verdicts["antisymmetric"]);
    }
}
