//! Jordan-algebraic tests: anticommutator structure matrices, the shifted
//! rank-(2d−1) criterion and the `2P + Q + Qᵀ − 2a` factor form.

use crate::construct::jordan_shift;
use crate::error::{Error, Result};
use crate::hermitian::{
    anticommutator, eigenvalues_hermitian, eigh, eigh_real, map_matrix, matrix_unit_basis, max_abs,
    numerical_rank, ComplexMatrix, HermitianOperator, OperatorBasis, RealMatrix,
};
use crate::lie::stable_rank;
use crate::report::CheckReport;
use crate::simplex::{decompose_rank1_plus_identity, fit_alpha_beta, Rank1PlusIdentityDecomposition};
use crate::sic::{verify_sic, SicEnsemble};
use crate::structure::{coefficient_matrix, Product, StructureTensor};
use crate::tol;

/// `{L_j, L_k} = Σ_l C_jkl L_l`.
pub fn jordan_structure(basis: &OperatorBasis) -> Result<StructureTensor> {
    StructureTensor::compute(basis, Product::Anticommutator)
}

/// `{λ_j + λ_k}` over ordered pairs, sorted ascending.
pub fn jordan_spectrum(a: &HermitianOperator) -> Vec<f64> {
    let lambda = eigenvalues_hermitian(a.matrix());
    let mut out: Vec<f64> = lambda.iter().flat_map(|x| lambda.iter().map(move |y| x + y)).collect();
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    out
}

fn f_matrix(a: &HermitianOperator) -> ComplexMatrix {
    map_matrix(&matrix_unit_basis(a.dim()), |x| anticommutator(a.matrix(), x))
}

/// [`jordan_spectrum`] and its max deviation from the eigenvalues of `f_A`.
pub fn jordan_spectrum_checked(a: &HermitianOperator) -> (Vec<f64>, f64) {
    let direct = eigenvalues_hermitian(&f_matrix(a));
    let pairs = jordan_spectrum(a);
    let dev = direct.iter().zip(&pairs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    (pairs, dev)
}

/// Numerical rank of `f_A = {A, ·}`.
pub fn jordan_rank(a: &HermitianOperator) -> usize {
    numerical_rank(&eigenvalues_hermitian(&f_matrix(a)), tol::RANK_REL)
}

/// Both sides of the rank lemma: `rank f_A = 2d − 1` and `rank A = 1`
/// (or, at d = 3, spectrum `{λ, −λ, −λ}` with `λ ≠ 0`).
pub fn jordan_rank_sides(a: &HermitianOperator, tol: f64) -> (bool, bool) {
    let d = a.dim();
    let lhs = jordan_rank(a) == 2 * d - 1;
    let vals = eigenvalues_hermitian(a.matrix());
    let top = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut rhs = numerical_rank(&vals, tol::RANK_REL) == 1;
    if d == 3 && top > 0.0 {
        // ascending: {−λ, −λ, λ} or {λ, −λ, −λ} with λ < 0
        let pos = (vals[0] + vals[2]).abs() <= tol * top && (vals[0] - vals[1]).abs() <= tol * top;
        let neg = (vals[0] + vals[2]).abs() <= tol * top && (vals[1] - vals[2]).abs() <= tol * top;
        rhs |= pos || neg;
    }
    (lhs, rhs)
}

/// Symmetric structure matrices against `{L_j/ℓ}` orthonormal.
pub fn check_jordan_structure_lemma(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let s = jordan_structure(basis)?;
    let scale = s.max_abs().max(1.0);
    let mut r = CheckReport::new("jordan_structure_lemma");
    let real = r.residual("imaginary_part", s.max_imag_part() / scale, tol);
    let sym = r.residual("symmetry", s.last_pair_defect() / scale, tol);
    let (ell, defect) = basis.scaled_orthonormality();
    r.value("ell", ell);
    let ortho = r.residual("scaled_orthonormality", defect, tol);
    r.verdict("symmetric", real && sym);
    r.verdict("orthonormal_up_to_scale", ortho);
    Ok(r.finish((real && sym) == ortho))
}

/// `C^L_A = 2S + H + Hᵀ` for an orthonormal (up to scale) basis.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanDecomposition {
    pub s: RealMatrix,
    pub h: ComplexMatrix,
    pub c: ComplexMatrix,
    /// `‖C − 2S − H − Hᵀ‖_max`.
    pub residual: f64,
    /// `max(‖SH‖, ‖SHᵀ‖, ‖HHᵀ‖)`.
    pub orthogonality: f64,
    /// Max deviation between the nonzero spectra of `S` and `A`.
    pub spectrum_residual: f64,
    pub s_rank: usize,
    pub h_rank: usize,
    pub s_projector: bool,
    pub h_projector: bool,
}

fn orthonormal_rescale(basis: &OperatorBasis) -> Result<(OperatorBasis, f64)> {
    let (ell, defect) = basis.scaled_orthonormality();
    if basis.len() != basis.dim() * basis.dim() || defect > tol::ORTHONORMAL {
        return Err(Error::NotOrthonormal(defect));
    }
    Ok((basis.map(|_, o| o.scale(1.0 / ell))?, ell))
}

pub fn jordan_2s_h_ht_decompose(a: &HermitianOperator, basis: &OperatorBasis) -> Result<JordanDecomposition> {
    let (unit, _) = orthonormal_rescale(basis)?;
    let d = basis.dim();
    let n = basis.len();
    let c = coefficient_matrix(basis, a.matrix(), Product::Anticommutator)?;
    let (lambda, e) = eigh(a.matrix());
    // coefficient vectors of E_rs = |e_r⟩⟨e_s| : ⟨e_r|B_k|e_s⟩
    let coeff = |r: usize, s: usize| {
        crate::hermitian::ComplexVector::from_fn(n, |k, _| {
            (e.column(r).adjoint() * unit.get(k).matrix() * e.column(s))[(0, 0)]
        })
    };
    let mut s_c = ComplexMatrix::zeros(n, n);
    let mut h = ComplexMatrix::zeros(n, n);
    for r in 0..d {
        let v = coeff(r, r);
        s_c += (&v * v.adjoint()).scale(lambda[r]);
        for s in (r + 1)..d {
            let v = coeff(r, s);
            h += (&v * v.adjoint()).scale(lambda[r] + lambda[s]);
        }
    }
    let s = s_c.map(|z| z.re);
    let ht = h.transpose();
    let s_cplx = s.map(|x| crate::hermitian::c(x, 0.0));
    let residual = max_abs(&(&c - s_cplx.scale(2.0) - &h - &ht));
    let orthogonality =
        max_abs(&(&s_cplx * &h)).max(max_abs(&(&s_cplx * &ht))).max(max_abs(&(&h * &ht)));
    let top = lambda.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    let nonzero = |v: &[f64]| -> Vec<f64> { v.iter().copied().filter(|x| x.abs() > tol::RANK_REL * top).collect() };
    let (s_vals, _) = eigh_real(&s);
    let s_nz = nonzero(&s_vals);
    let a_nz = nonzero(&lambda);
    let spectrum_residual = if s_nz.len() == a_nz.len() {
        s_nz.iter().zip(&a_nz).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let s_rank = s_nz.len();
    let h_vals = eigenvalues_hermitian(&h);
    let h_rank = numerical_rank(&h_vals, tol::RANK_REL);
    let s_projector = crate::hermitian::max_abs_real(&(&s * &s - &s)) <= 1e-9;
    let h_projector = max_abs(&(&h * &h - &h)) <= 1e-9;
    Ok(JordanDecomposition {
        s,
        h,
        c,
        residual,
        orthogonality,
        spectrum_residual,
        s_rank,
        h_rank,
        s_projector,
        h_projector,
    })
}

fn real_symmetric_report(r: &mut CheckReport, s: &StructureTensor, tol: f64) -> bool {
    let scale = s.max_abs().max(1.0);
    let real = r.residual("imaginary_part", s.max_imag_part() / scale, tol);
    let sym = r.residual("symmetry", s.last_pair_defect() / scale, tol);
    r.verdict("real", real);
    r.verdict("symmetric", sym);
    real && sym
}

/// Eigenvalue windows of length `size` with spread below `tol`, as means.
fn clusters(vals: &[f64], size: usize, tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if size == 0 || size > vals.len() {
        return out;
    }
    for start in 0..=(vals.len() - size) {
        let w = &vals[start..start + size];
        if w[size - 1] - w[0] <= tol {
            out.push(w.iter().sum::<f64>() / size as f64);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanSicWitness {
    pub decomposition: Rank1PlusIdentityDecomposition,
    /// `a` of `L_j = εε_j c(Π_j − a)`.
    pub a: f64,
    pub scale: f64,
    pub epsilon: i8,
    pub epsilons: Vec<i8>,
    /// Per-operator shifts `a_j` with `rank(C_j − 2a_j) = 2d − 1`.
    pub shifts: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanSicOutcome {
    pub report: CheckReport,
    pub witness: Option<JordanSicWitness>,
}

/// Real symmetric structure matrices that become rank 2d − 1 after
/// removing a multiple of the identity. Requires d ≥ 3.
pub fn check_jordan_sic_criterion(basis: &OperatorBasis, tol: f64) -> Result<JordanSicOutcome> {
    let d = basis.dim();
    if d < 3 {
        return Err(Error::Unsupported { d, reason: "the shifted-rank criterion needs d >= 3; use the factor form".into() });
    }
    let s = jordan_structure(basis)?;
    let mut r = CheckReport::new("jordan_sic");
    if !real_symmetric_report(&mut r, &s, tol) {
        r.verdict("shifted_rank", false);
        return Ok(JordanSicOutcome { report: r.finish(false), witness: None });
    }
    let mut shifts = Vec::with_capacity(s.len());
    for c in s.matrices() {
        let cr = c.map(|z| z.re);
        let sym = (&cr + cr.transpose()).scale(0.5);
        let (vals, _) = eigh_real(&sym);
        let top = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
        let mut found = None;
        for mean in clusters(&vals, (d - 1) * (d - 1), tol::SHAPE.max(tol) * top) {
            let shifted = (&sym - RealMatrix::identity(s.len(), s.len()).scale(mean)).map(|x| crate::hermitian::c(x, 0.0));
            if stable_rank(&shifted, tol::RANK_REL)? == 2 * d - 1 {
                found = Some(mean / 2.0);
                break;
            }
        }
        match found {
            Some(a) => shifts.push(-a),
            None => {
                r.verdict("shifted_rank", false);
                return Ok(JordanSicOutcome { report: r.finish(false), witness: None });
            }
        }
    }
    r.verdict("shifted_rank", true);
    let constants = fit_alpha_beta(basis);
    r.constants = Some(constants.record());
    let dec = match decompose_rank1_plus_identity(basis, &constants, tol) {
        Ok(dec) => dec,
        Err(e) => {
            r.note(format!("decomposition failed: {e}"));
            return Ok(JordanSicOutcome { report: r.finish(false), witness: None });
        }
    };
    let a_vals: Vec<f64> = dec.a.iter().zip(&dec.b).map(|(a, b)| -b / a).collect();
    let a = a_vals.iter().sum::<f64>() / a_vals.len() as f64;
    let spread = a_vals.iter().map(|x| (x - a).abs()).fold(0.0, f64::max);
    let plus = jordan_shift(d, 1)?;
    let minus = jordan_shift(d, -1)?;
    let epsilon: i8 = if (a - plus).abs() <= (a - minus).abs() { 1 } else { -1 };
    let formula = if epsilon == 1 { plus } else { minus };
    let post = tol::POST_FACTOR * tol;
    let ok_spread = r.residual("a_spread", spread, post);
    let ok_formula = r.residual("a_formula", (a - formula).abs(), post);
    r.value("a", a);
    r.value("epsilon", epsilon as f64);
    let scale = dec.a[0].abs();
    r.value("scale", scale);
    let epsilons: Vec<i8> = dec.a.iter().map(|x| if *x < 0.0 { -epsilon } else { epsilon }).collect();
    Ok(JordanSicOutcome {
        report: r.finish(ok_spread && ok_formula),
        witness: Some(JordanSicWitness { decomposition: dec, a, scale, epsilon, epsilons, shifts }),
    })
}

/// `C_j = 2P_j + Q_j + Q_jᵀ − 2a_j` for every j; on pass the SIC read off
/// the `P_j` reproduces `L_j = Π_j − a`.
pub fn check_jordan_sic_form(basis: &OperatorBasis, tol: f64) -> Result<(CheckReport, Option<SicEnsemble>)> {
    let d = basis.dim();
    let n = basis.len();
    let s = jordan_structure(basis)?;
    let mut r = CheckReport::new("jordan_sic_form");
    if !real_symmetric_report(&mut r, &s, tol) {
        return Ok((r.finish(false), None));
    }
    let (unit, ell) = match orthonormal_rescale(basis) {
        Ok(x) => x,
        Err(_) => {
            r.note("basis is not orthonormal up to scale");
            return Ok((r.finish(false), None));
        }
    };
    r.value("ell", ell);
    let mut pattern = vec![0.0; n];
    for (i, p) in pattern.iter_mut().enumerate() {
        // descending: 2, then 1 (×2(d−1)), then 0 (×(d−1)²)
        *p = if i == 0 {
            2.0
        } else if i <= 2 * (d - 1) {
            1.0
        } else {
            0.0
        };
    }
    let post = tol::POST_FACTOR * tol;
    let mut shifts = Vec::with_capacity(n);
    let mut projectors = Vec::with_capacity(n);
    let (mut spec_res, mut factor_res, mut q_res, mut orth_res) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut scale_note = false;
    for (j, c) in s.matrices().into_iter().enumerate() {
        let cr = c.map(|z| z.re);
        let sym = (&cr + cr.transpose()).scale(0.5);
        let (mut vals, vecs) = eigh_real(&sym);
        vals.reverse();
        let mean_diff = pattern.iter().zip(&vals).map(|(p, v)| p - v).sum::<f64>() / n as f64;
        let aj = mean_diff / 2.0;
        let res = pattern.iter().zip(&vals).map(|(p, v)| (p - 2.0 * aj - v).abs()).fold(0.0, f64::max);
        spec_res = spec_res.max(res);
        if res > post && (vals[0] - vals[n - 1] - 2.0).abs() > post {
            scale_note = true;
        }
        shifts.push(aj);
        let v = vecs.column(n - 1).into_owned();
        let mut op = ComplexMatrix::zeros(d, d);
        for k in 0..n {
            op += unit.get(k).matrix().scale(v[k]);
        }
        if op.trace().re < 0.0 {
            op = -op;
        }
        let pi = HermitianOperator::new(op)?;
        let p_mat = (&v * v.transpose()).map(|x| crate::hermitian::c(x, 0.0));
        let id = ComplexMatrix::identity(d, d);
        let comp = &id - pi.matrix();
        let m = map_matrix(&unit, |x| pi.matrix() * x * &comp);
        let q = m.transpose();
        let qt = q.transpose();
        let target = c.clone() + ComplexMatrix::identity(n, n).scale(2.0 * aj);
        factor_res = factor_res.max(max_abs(&(target - p_mat.scale(2.0) - &q - &qt)));
        let rank = numerical_rank(&eigenvalues_hermitian(&q), tol::RANK_REL);
        let idem = max_abs(&(&q * &q - &q)).max(crate::hermitian::hermiticity_defect(&q));
        q_res = q_res.max(if rank == d - 1 { idem } else { f64::INFINITY });
        orth_res = orth_res.max(max_abs(&(&q * &qt))).max(max_abs(&(&q * &p_mat)));
        if j == 0 {
            r.value("a_0", aj);
        }
        projectors.push(pi);
    }
    let ok_spec = r.residual("spectrum_pattern", spec_res, post);
    if scale_note {
        r.note("scale must be 1: the spectrum of C_j has the pattern only up to a factor");
    }
    let ok_factor = r.residual("factor", factor_res, post);
    let ok_q = r.residual("q_projector", q_res, post);
    let ok_orth = r.residual("orthogonality", orth_res, post);
    let a = shifts.iter().sum::<f64>() / n as f64;
    let spread = shifts.iter().map(|x| (x - a).abs()).fold(0.0, f64::max);
    let ok_spread = r.residual("a_spread", spread, post);
    let plus = jordan_shift(d, 1)?;
    let minus = jordan_shift(d, -1)?;
    let formula = if (a - plus).abs() <= (a - minus).abs() { plus } else { minus };
    r.value("a", a);
    let ok_formula = r.residual("a_formula", (a - formula).abs(), post);
    let mut ok = ok_spec && ok_factor && ok_q && ok_orth && ok_spread && ok_formula;
    let mut sic = None;
    if ok {
        match SicEnsemble::candidate(projectors) {
            Ok(e) => {
                let mut round = 0.0f64;
                for (l, p) in basis.operators().iter().zip(e.projectors()) {
                    let want = p.matrix() - ComplexMatrix::identity(d, d).scale(a);
                    round = round.max(max_abs(&(l.matrix() - want)));
                }
                ok &= r.residual("round_trip", round, post);
                ok &= verify_sic(&e, post.max(tol::SIC))?.pass;
                sic = Some(e);
            }
            Err(err) => {
                r.note(format!("recovered operators are not projectors: {err}"));
                ok = false;
            }
        }
    }
    Ok((r.finish(ok), sic))
}
