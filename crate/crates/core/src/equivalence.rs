//! The four SIC formulations run side by side on one basis.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::m_dl;
use crate::hermitian::OperatorBasis;
use crate::jordan::{check_jordan_sic_criterion, check_jordan_sic_form};
use crate::lie::check_lie_sic_criterion;
use crate::report::CheckReport;
use crate::simplex::{check_trichotomy, decompose_rank1_plus_identity, fit_alpha_beta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    Simplex,
    Group,
    Lie,
    Jordan,
}

impl Formulation {
    pub const ALL: [Formulation; 4] = [Formulation::Simplex, Formulation::Group, Formulation::Lie, Formulation::Jordan];

    pub fn name(self) -> &'static str {
        match self {
            Formulation::Simplex => "simplex",
            Formulation::Group => "group",
            Formulation::Lie => "lie",
            Formulation::Jordan => "jordan",
        }
    }

    /// Whether the formulation characterizes SIC bases at dimension `d`
    /// inside the combined check.
    pub fn applies(self, d: usize) -> bool {
        match self {
            Formulation::Simplex | Formulation::Group => true,
            Formulation::Lie | Formulation::Jordan => d >= 3,
        }
    }

    /// One-line statement of what the check asserts.
    pub fn explain(self) -> &'static str {
        match self {
            Formulation::Simplex => {
                "frame superoperator is alpha*I + beta*|1>><<1| and every L_j is a*Pi_j + b over a SIC {Pi_j}"
            }
            Formulation::Group => {
                "basis is orthonormal and the smallest adjoint entry over U(d) reaches -1/d"
            }
            Formulation::Lie => {
                "commutator structure matrices are Hermitian with rank 2(d-1) and decompose over a SIC"
            }
            Formulation::Jordan => {
                "anticommutator structure matrices are real symmetric, rank 2d-1 after a shift, with the SIC shift a"
            }
        }
    }
}

fn failed(name: &str, note: String) -> CheckReport {
    let mut r = CheckReport::new(name);
    r.note(note);
    r.finish(false)
}

fn simplex(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let tri = check_trichotomy(basis, tol)?;
    let mut r = CheckReport::new("simplex");
    r.verdict("trichotomy", tri.pass);
    for (k, v) in &tri.residuals {
        r.residual(&format!("trichotomy_{k}"), *v, tri.tolerances[k]);
    }
    if !tri.pass {
        return Ok(r.finish(false));
    }
    let constants = fit_alpha_beta(basis);
    r.constants = Some(constants.record());
    match decompose_rank1_plus_identity(basis, &constants, tol) {
        Ok(dec) => {
            r.residual("reconstruction", dec.reconstruction_residual, crate::tol::POST_FACTOR * tol);
            r.value("sic_fidelity_error", dec.sic.max_fidelity_error());
            r.value("epsilon", dec.epsilon as f64);
            Ok(r.finish(true))
        }
        Err(e) => {
            r.note(format!("decomposition failed: {e}"));
            Ok(r.finish(false))
        }
    }
}

fn group(basis: &OperatorBasis, tol: f64) -> Result<CheckReport> {
    let d = basis.dim();
    let mut r = CheckReport::new("group");
    let ortho = r.residual("orthonormality", basis.orthonormality_defect(), tol);
    let m = m_dl(basis)?;
    r.value("m_dl", m);
    r.value("bound", -1.0 / d as f64);
    let saturated = r.residual("m_dl_saturation", (m + 1.0 / d as f64).abs(), tol);
    if !ortho {
        r.note("the minimal adjoint entry characterizes SIC bases only among orthonormal bases");
    }
    Ok(r.finish(ortho && saturated))
}

/// Runs one formulation; errors from ill-posed inputs become failed reports.
pub fn check_formulation(basis: &OperatorBasis, f: Formulation, tol: f64) -> CheckReport {
    let d = basis.dim();
    let out = match f {
        Formulation::Simplex => simplex(basis, tol),
        Formulation::Group => group(basis, tol),
        Formulation::Lie => check_lie_sic_criterion(basis, tol).map(|o| o.report),
        Formulation::Jordan if d >= 3 => check_jordan_sic_criterion(basis, tol).map(|o| o.report),
        Formulation::Jordan => check_jordan_sic_form(basis, tol).map(|(r, _)| r),
    };
    out.unwrap_or_else(|e| failed(f.name(), e.to_string()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceOutcome {
    pub reports: Vec<CheckReport>,
    pub applicable: usize,
    pub passes: usize,
    /// All applicable verdicts are equal.
    pub agree: bool,
}

pub fn check_all(basis: &OperatorBasis, tol: f64) -> EquivalenceOutcome {
    let d = basis.dim();
    let reports: Vec<CheckReport> = Formulation::ALL
        .iter()
        .filter(|f| f.applies(d))
        .map(|&f| check_formulation(basis, f, tol))
        .collect();
    let passes = reports.iter().filter(|r| r.pass).count();
    EquivalenceOutcome { applicable: reports.len(), passes, agree: passes == 0 || passes == reports.len(), reports }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{adjoint_basis, lie_basis};
    use crate::random::{orthonormal_basis, stream_rng};
    use crate::sic::{wh_orbit, Fiducial};

    #[test]
    fn adjoint_basis_passes_everything() {
        let sic = wh_orbit(&Fiducial::hesse_d3());
        for (e, ep) in [(1, 1), (-1, 1), (1, -1)] {
            let out = check_all(&adjoint_basis(&sic, e, ep).unwrap(), 1e-8);
            assert_eq!((out.applicable, out.passes), (4, 4), "{:?}", out.reports);
        }
        let out = check_all(&adjoint_basis(&wh_orbit(&Fiducial::tetrahedral_d2()), 1, 1).unwrap(), 1e-8);
        assert_eq!((out.applicable, out.passes), (2, 2), "{:?}", out.reports);
    }

    #[test]
    fn random_basis_fails_everything() {
        let out = check_all(&orthonormal_basis(3, &mut stream_rng(3, 0)), 1e-8);
        assert_eq!((out.passes, out.agree), (0, true));
    }

    #[test]
    fn mixed_sign_lie_basis_breaks_group_only() {
        let sic = wh_orbit(&Fiducial::hesse_d3());
        let b = lie_basis(&sic, &[1, -1, 1, 1, 1, 1, 1, 1, 1], 2.0, 0.3).unwrap();
        assert!(check_formulation(&b, Formulation::Lie, 1e-8).pass);
        assert!(!check_formulation(&b, Formulation::Group, 1e-8).pass);
    }
}
