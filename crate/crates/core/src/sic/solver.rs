//! Frame-potential descent on the unit sphere.
//!
//! The covariant objective is `Φ₂(ψ) = Σ_{p,q} |⟨ψ|D_{p,q}|ψ⟩|⁴`, which equals
//! the order-2 frame potential of the orbit with weights `1/d`. Its minimum
//! `2d/(d+1)` is attained exactly at SIC fiducials.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{wh_displacements, Fiducial, Provenance};
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, ComplexVector};
use crate::random::{stream_rng, unit_vector};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Frame-potential gap counted as success.
    pub gap_tol: f64,
    /// Replaces the random start of restart 0.
    pub initial: Option<ComplexVector>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            restarts: 8,
            max_iters: tol::MAX_ITERS,
            grad_tol: tol::GRAD,
            gap_tol: tol::GAP,
            initial: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartSummary {
    pub index: usize,
    pub frame_potential: f64,
    pub gap: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub fiducial: Fiducial,
    pub frame_potential: f64,
    pub gap: f64,
    pub max_fidelity_error: f64,
    pub success: bool,
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
}

struct Orbit {
    d: usize,
    ds: Vec<ComplexMatrix>,
    ds_adj: Vec<ComplexMatrix>,
}

impl Orbit {
    fn new(d: usize) -> Result<Self> {
        let ds = wh_displacements(d)?;
        let ds_adj = ds.iter().map(|m| m.adjoint()).collect();
        Ok(Orbit { d, ds, ds_adj })
    }

    fn value(&self, psi: &ComplexVector) -> f64 {
        self.ds.iter().map(|dm| psi.dotc(&(dm * psi)).norm_sqr().powi(2)).sum()
    }

    /// Value and Riemannian gradient (real-coordinate gradient of `Φ₂(ψ/‖ψ‖)`
    /// packed as a complex vector) at a unit vector.
    fn value_and_gradient(&self, psi: &ComplexVector) -> (f64, ComplexVector) {
        let mut value = 0.0;
        let mut g = ComplexVector::zeros(self.d);
        for (dm, da) in self.ds.iter().zip(&self.ds_adj) {
            let dpsi = dm * psi;
            let c = psi.dotc(&dpsi);
            let m2 = c.norm_sqr();
            value += m2 * m2;
            let dapsi = da * psi;
            g += (dpsi * c.conj() + dapsi * c).scale(2.0 * m2);
        }
        g -= psi.scale(4.0 * value);
        (value, g.scale(2.0))
    }

    /// Gauss–Newton refinement of the overlap equations `|⟨ψ|D_k|ψ⟩|² = 1/(d+1)`
    /// plus `‖ψ‖² = 1`, using a minimum-norm least-squares step.
    fn polish(&self, psi: &ComplexVector, steps: usize) -> ComplexVector {
        let d = self.d;
        let target = 1.0 / (d as f64 + 1.0);
        let m = self.ds.len();
        let residuals = |x: &ComplexVector| {
            let mut r = DVector::zeros(m);
            for (k, dm) in self.ds.iter().enumerate().skip(1) {
                r[k - 1] = x.dotc(&(dm * x)).norm_sqr() - target;
            }
            r[m - 1] = x.norm_squared() - 1.0;
            r
        };
        let mut x = psi.clone();
        let mut r = residuals(&x);
        for _ in 0..steps {
            if r.amax() < 1e-15 {
                break;
            }
            let mut jac = DMatrix::<f64>::zeros(m, 2 * d);
            let dx: Vec<ComplexVector> = self.ds.iter().map(|dm| dm * &x).collect();
            let dax: Vec<ComplexVector> = self.ds_adj.iter().map(|da| da * &x).collect();
            for k in 1..m {
                let c = x.dotc(&dx[k]);
                // d|c|² along e is 2 Re(c̄ (e†Dψ + ψ†D e)) = 2 Re(c̄ e†Dψ + c e†D†ψ)
                let w = dx[k].map(|z| z * c.conj()) + dax[k].map(|z| z * c);
                for i in 0..d {
                    jac[(k - 1, i)] = 2.0 * w[i].re;
                    jac[(k - 1, d + i)] = 2.0 * w[i].im;
                }
            }
            for i in 0..d {
                jac[(m - 1, i)] = 2.0 * x[i].re;
                jac[(m - 1, d + i)] = 2.0 * x[i].im;
            }
            let Ok(step) = jac.svd(true, true).solve(&r, 1e-10) else {
                break;
            };
            let trial = ComplexVector::from_fn(d, |i, _| x[i] - Complex64::new(step[i], step[d + i]));
            let rt = residuals(&trial);
            if rt.amax() >= r.amax() {
                break;
            }
            x = trial;
            r = rt;
        }
        let n = x.norm();
        x.unscale(n)
    }

    fn max_fidelity_error(&self, psi: &ComplexVector) -> f64 {
        let target = 1.0 / (self.d as f64 + 1.0);
        self.ds
            .iter()
            .skip(1)
            .map(|dm| (psi.dotc(&(dm * psi)).norm_sqr() - target).abs())
            .fold(0.0, f64::max)
    }
}

const POLISH_GAP: f64 = 1e-6;

fn bound(d: usize) -> f64 {
    2.0 * d as f64 / (d as f64 + 1.0)
}

/// `Φ₂` of the orbit of a unit vector, uniform weights `1/d`.
pub fn orbit_frame_potential(psi: &ComplexVector) -> Result<f64> {
    Ok(Orbit::new(psi.len())?.value(psi))
}

/// Value and tangent gradient of the orbit frame potential at a unit vector.
pub fn orbit_gradient(psi: &ComplexVector) -> Result<(f64, ComplexVector)> {
    Ok(Orbit::new(psi.len())?.value_and_gradient(psi))
}

fn re_dot(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.dotc(b).re
}

struct Descent {
    x: ComplexVector,
    value: f64,
    grad_norm: f64,
    iterations: usize,
}

/// Nonmonotone Barzilai–Borwein descent with projective retraction.
fn descend<F>(x0: ComplexVector, max_iters: usize, grad_tol: f64, eval: F) -> Descent
where
    F: Fn(&ComplexVector) -> (f64, ComplexVector),
{
    const MEMORY: usize = 10;
    let normalize = |v: ComplexVector| {
        let n = v.norm();
        v.unscale(n)
    };
    let mut x = normalize(x0);
    let (mut f, mut g) = eval(&x);
    let mut history = vec![f];
    let mut step = 0.1;
    let mut iterations = 0;
    while iterations < max_iters {
        let gn2 = g.norm_squared();
        if gn2.sqrt() < grad_tol {
            break;
        }
        let reference = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut s = step;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = normalize(&x - g.scale(s));
            let (ft, gt) = eval(&trial);
            if ft <= reference - 1e-4 * s * gn2 || (ft < f && s < 1e-12) {
                accepted = Some((trial, ft, gt));
                break;
            }
            s *= 0.5;
        }
        iterations += 1;
        let Some((xn, fnew, gnew)) = accepted else {
            break;
        };
        let dx = &xn - &x;
        let dg = &gnew - &g;
        let curv = re_dot(&dx, &dg);
        step = if curv > 0.0 { (dx.norm_squared() / curv).clamp(1e-6, 1e3) } else { (2.0 * s).min(1e3) };
        x = xn;
        f = fnew;
        g = gnew;
        history.push(f);
        if history.len() > MEMORY {
            history.remove(0);
        }
    }
    Descent { x, value: f, grad_norm: g.norm(), iterations }
}

/// Weyl–Heisenberg covariant fiducial search with independent restarts.
///
/// Restart `r` draws its start from stream `r` of `cfg.seed`; the best
/// restart wins, ties going to the lowest index.
pub fn minimize_frame_potential(d: usize, cfg: &SolverConfig) -> Result<SolveOutcome> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    if let Some(v) = &cfg.initial {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    let orbit = Orbit::new(d)?;
    let target = bound(d);
    let runs: Vec<(RestartSummary, ComplexVector)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let start = match (&cfg.initial, r) {
                (Some(v), 0) => v.clone(),
                _ => unit_vector(d, &mut stream_rng(cfg.seed, r as u64)),
            };
            let mut out = descend(start, cfg.max_iters, cfg.grad_tol, |x| orbit.value_and_gradient(x));
            if out.value - target < POLISH_GAP {
                let x = orbit.polish(&out.x, 30);
                if orbit.max_fidelity_error(&x) < orbit.max_fidelity_error(&out.x) {
                    let (value, g) = orbit.value_and_gradient(&x);
                    out = Descent { x, value, grad_norm: g.norm(), ..out };
                }
            }
            let summary = RestartSummary {
                index: r,
                frame_potential: out.value,
                gap: out.value - target,
                grad_norm: out.grad_norm,
                iterations: out.iterations,
            };
            (summary, out.x)
        })
        .collect();
    let (best_idx, _) = runs
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            let ka = (orbit.max_fidelity_error(&a.1), a.0.frame_potential);
            let kb = (orbit.max_fidelity_error(&b.1), b.0.frame_potential);
            ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal).then(ia.cmp(ib))
        })
        .expect("at least one restart");
    let (summary, x) = runs[best_idx].clone();
    let x = fix_gauge(x);
    let frame_potential = orbit.value(&x);
    let gap = frame_potential - target;
    let max_fidelity_error = orbit.max_fidelity_error(&x);
    let fiducial = Fiducial::normalized(
        x,
        Provenance::Solver {
            seed: cfg.seed,
            restarts: cfg.restarts,
            iterations: summary.iterations,
            restart_index: summary.index,
        },
    )?;
    Ok(SolveOutcome {
        fiducial,
        frame_potential,
        gap,
        max_fidelity_error,
        success: gap < cfg.gap_tol,
        best_restart: summary.index,
        restarts: runs.into_iter().map(|(s, _)| s).collect(),
    })
}

/// Rotates the global phase so the largest-magnitude component is real positive.
fn fix_gauge(x: ComplexVector) -> ComplexVector {
    let (i, _) = x.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let phase = x[i] / x[i].norm();
    let y = x.map(|z| z * phase.conj());
    let n = y.norm();
    y.unscale(n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnconstrainedOutcome {
    pub states: Vec<ComplexVector>,
    pub frame_potential: f64,
    pub gap: f64,
    pub max_fidelity_error: f64,
    pub success: bool,
}

/// Searches d² independent unit vectors without any group ansatz.
pub fn minimize_frame_potential_unconstrained(d: usize, cfg: &SolverConfig) -> Result<UnconstrainedOutcome> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let n = d * d;
    let target = bound(d);
    let weight2 = 1.0 / (d * d) as f64;
    // states stacked into one vector; each block kept on its own sphere
    let split = |x: &ComplexVector| -> Vec<ComplexVector> {
        (0..n).map(|j| {
            let v = x.rows(j * d, d).into_owned();
            let nv = v.norm();
            v.unscale(nv)
        }).collect()
    };
    let eval = |x: &ComplexVector| -> (f64, ComplexVector) {
        let states = split(x);
        let mut gram = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                gram[(j, k)] = states[j].dotc(&states[k]);
            }
        }
        let mut value = 0.0;
        let mut g = ComplexVector::zeros(n * d);
        for j in 0..n {
            let mut gj = ComplexVector::zeros(d);
            for k in 0..n {
                let o = gram[(j, k)];
                let m2 = o.norm_sqr();
                value += m2 * m2;
                gj += states[k].map(|z| z * o.conj() * (4.0 * m2));
            }
            let radial = states[j].dotc(&gj).re;
            gj -= states[j].scale(radial);
            let block_norm = x.rows(j * d, d).norm();
            g.rows_mut(j * d, d).copy_from(&gj.scale(2.0 * weight2 / block_norm));
        }
        (value * weight2, g)
    };
    let mut best: Option<UnconstrainedOutcome> = None;
    for r in 0..cfg.restarts.max(1) {
        let mut rng = stream_rng(cfg.seed, r as u64);
        let mut x0 = ComplexVector::zeros(n * d);
        for j in 0..n {
            x0.rows_mut(j * d, d).copy_from(&unit_vector(d, &mut rng));
        }
        let x0 = x0.unscale((n as f64).sqrt());
        let out = descend(x0, cfg.max_iters, cfg.grad_tol, eval);
        let states = split(&out.x);
        let value = eval(&out.x).0;
        let target_f = 1.0 / (d as f64 + 1.0);
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in (j + 1)..n {
                worst = worst.max((states[j].dotc(&states[k]).norm_sqr() - target_f).abs());
            }
        }
        let cand = UnconstrainedOutcome {
            states,
            frame_potential: value,
            gap: value - target,
            max_fidelity_error: worst,
            success: value - target < cfg.gap_tol,
        };
        if best.as_ref().map_or(true, |b| cand.frame_potential < b.frame_potential) {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one restart"))
}
