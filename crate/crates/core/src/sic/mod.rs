//! Weyl–Heisenberg orbits, frame potentials, fiducial search and SIC / design certification.

mod certify;
mod solver;
mod weyl;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{c, trace_product, ComplexVector, HermitianOperator};
use crate::tol;

pub use certify::{
    check_2design, check_tight_ic, fidelity_table, t_design_lower_bound, verify_sic, welch_bound, TightIcReport,
};
pub use solver::{
    minimize_frame_potential, minimize_frame_potential_unconstrained, orbit_frame_potential,
    orbit_gradient, RestartSummary, SolveOutcome, SolverConfig, UnconstrainedOutcome,
};
pub use weyl::{clock, shift, wh_displacements};

/// Where a fiducial came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    AnalyticSeed { name: String },
    Solver { seed: u64, restarts: usize, iterations: usize, restart_index: usize },
    Perturbed { scale: f64, seed: u64 },
}

/// Unit vector whose Weyl–Heisenberg orbit is a SIC candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct Fiducial {
    pub vector: ComplexVector,
    pub provenance: Provenance,
}

impl Fiducial {
    pub fn new(vector: ComplexVector, provenance: Provenance) -> Result<Self> {
        if vector.len() < 2 {
            return Err(Error::InvalidDimension(vector.len()));
        }
        let n = vector.norm();
        if (n - 1.0).abs() > tol::UNIT_NORM {
            return Err(Error::InvalidParameter(format!("fiducial norm {n} is not 1")));
        }
        Ok(Fiducial { vector, provenance })
    }

    pub fn normalized(vector: ComplexVector, provenance: Provenance) -> Result<Self> {
        let n = vector.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidParameter("zero fiducial vector".into()));
        }
        Self::new(vector.unscale(n), provenance)
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// Fiducial whose Bloch vector is `(1,1,1)/√3`.
    pub fn tetrahedral_d2() -> Self {
        let theta = (1.0 / 3f64.sqrt()).acos();
        let v = ComplexVector::from_vec(vec![
            c((theta / 2.0).cos(), 0.0),
            num_complex::Complex64::from_polar((theta / 2.0).sin(), std::f64::consts::FRAC_PI_4),
        ]);
        Fiducial { vector: v, provenance: Provenance::AnalyticSeed { name: "tetrahedral".into() } }
    }

    /// `(0, 1, −1)/√2`.
    pub fn hesse_d3() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0)]);
        Fiducial { vector: v, provenance: Provenance::AnalyticSeed { name: "hesse".into() } }
    }

    pub fn analytic(d: usize) -> Option<Self> {
        match d {
            2 => Some(Self::tetrahedral_d2()),
            3 => Some(Self::hesse_d3()),
            _ => None,
        }
    }
}

/// d² unit-trace rank-1 projectors with their worst fidelity defect.
#[derive(Clone, Debug, PartialEq)]
pub struct SicEnsemble {
    dim: usize,
    projectors: Vec<HermitianOperator>,
    max_fidelity_error: f64,
}

impl SicEnsemble {
    /// Validates count and projector shape; does not certify SIC-ness.
    pub fn candidate(projectors: Vec<HermitianOperator>) -> Result<Self> {
        let d = projectors.first().ok_or(Error::Empty)?.dim();
        if projectors.len() != d * d {
            return Err(Error::WrongCount { expected: d * d, found: projectors.len() });
        }
        for (index, p) in projectors.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
            }
            let sq = p.matrix() * p.matrix();
            let residual = crate::hermitian::max_abs(&(sq - p.matrix())).max((p.trace() - 1.0).abs());
            if residual > tol::PROJECTOR {
                return Err(Error::NotProjector { index, residual });
            }
        }
        let max_fidelity_error = max_fidelity_error(&projectors);
        Ok(SicEnsemble { dim: d, projectors, max_fidelity_error })
    }

    pub fn from_states(states: &[ComplexVector]) -> Result<Self> {
        Self::candidate(states.iter().map(HermitianOperator::projector).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[HermitianOperator] {
        &self.projectors
    }

    pub fn max_fidelity_error(&self) -> f64 {
        self.max_fidelity_error
    }
}

fn max_fidelity_error(projectors: &[HermitianOperator]) -> f64 {
    let d = projectors[0].dim() as f64;
    let target = 1.0 / (d + 1.0);
    let mut worst = 0.0f64;
    for j in 0..projectors.len() {
        for k in (j + 1)..projectors.len() {
            let f = trace_product(projectors[j].matrix(), projectors[k].matrix()).re;
            worst = worst.max((f - target).abs());
        }
    }
    worst
}

/// Orbit vectors `D_{p,q}|ψ⟩` in lexicographic order.
pub fn wh_orbit_states(f: &Fiducial) -> Vec<ComplexVector> {
    wh_displacements(f.dim()).expect("d ≥ 2").iter().map(|dm| dm * &f.vector).collect()
}

/// `Π_{p,q} = D_{p,q}|ψ⟩⟨ψ|D_{p,q}†`.
pub fn wh_orbit(f: &Fiducial) -> SicEnsemble {
    SicEnsemble::from_states(&wh_orbit_states(f)).expect("unit fiducial yields projectors")
}

/// States with positive weights summing to d.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedStateSet {
    states: Vec<ComplexVector>,
    weights: Vec<f64>,
}

impl WeightedStateSet {
    pub fn new(states: Vec<ComplexVector>, weights: Vec<f64>) -> Result<Self> {
        let d = states.first().ok_or(Error::Empty)?.len();
        if weights.len() != states.len() {
            return Err(Error::WrongCount { expected: states.len(), found: weights.len() });
        }
        for s in &states {
            if s.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: s.len() });
            }
            if (s.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidParameter("states must be unit vectors".into()));
            }
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - d as f64).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, expected {d}")));
        }
        Ok(WeightedStateSet { states, weights })
    }

    /// Every state weighted `d / n`.
    pub fn uniform(states: Vec<ComplexVector>) -> Result<Self> {
        let d = states.first().ok_or(Error::Empty)?.len();
        let w = d as f64 / states.len() as f64;
        let n = states.len();
        Self::new(states, vec![w; n])
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn states(&self) -> &[ComplexVector] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `Φ_t = Σ_{j,k} w_j w_k |⟨ψ_j|ψ_k⟩|^{2t}`.
pub fn frame_potential(s: &WeightedStateSet, t: u32) -> Result<f64> {
    if t < 1 {
        return Err(Error::InvalidParameter("order t must be at least 1".into()));
    }
    let n = s.states.len();
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            let o = s.states[j].dotc(&s.states[k]).norm_sqr();
            total += s.weights[j] * s.weights[k] * o.powi(t as i32);
        }
    }
    Ok(total)
}

/// `d² / C(d+t−1, t)`.
pub fn frame_potential_lower_bound(d: usize, t: u32) -> f64 {
    let mut binom = 1.0;
    for i in 0..t as usize {
        binom = binom * (d + i) as f64 / (i + 1) as f64;
    }
    (d * d) as f64 / binom
}
