//! Fixtures shared by the benchmarks.

use sicforge::construct::{adjoint_basis, lie_basis};
use sicforge::sic::{minimize_frame_potential, wh_orbit, SicEnsemble, SolverConfig};
use sicforge::OperatorBasis;

/// Solver SIC in dimension `d`, fixed seed.
pub fn sic(d: usize) -> SicEnsemble {
    let out = minimize_frame_potential(d, &SolverConfig::default()).expect("solver");
    assert!(out.success, "solver failed at d = {d}");
    wh_orbit(&out.fiducial)
}

pub fn adjoint(d: usize) -> OperatorBasis {
    adjoint_basis(&sic(d), 1, 1).expect("adjoint basis")
}

/// Lie-type basis with alternating signs.
pub fn lie(d: usize) -> OperatorBasis {
    let signs: Vec<i8> = (0..d * d).map(|j| if j % 2 == 0 { 1 } else { -1 }).collect();
    lie_basis(&sic(d), &signs, 1.5, 0.2).expect("lie basis")
}
