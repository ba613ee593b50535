use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, ONE};

/// Clock `Z|k⟩ = ω^k|k⟩`, `ω = exp(2πi/d)`.
pub fn clock(d: usize) -> ComplexMatrix {
    let mut z = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        z[(k, k)] = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
    }
    z
}

/// Shift `X|k⟩ = |k+1 mod d⟩`.
pub fn shift(d: usize) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        x[((k + 1) % d, k)] = ONE;
    }
    x
}

/// `D_{p,q} = τ^{pq} X^p Z^q` with `τ = −exp(iπ/d)`, in lexicographic `(p, q)` order.
pub fn wh_displacements(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let x = shift(d);
    let z = clock(d);
    let mut xp = ComplexMatrix::identity(d, d);
    let mut out = Vec::with_capacity(d * d);
    for p in 0..d {
        let mut zq = ComplexMatrix::identity(d, d);
        for q in 0..d {
            // τ^{pq} = (−1)^{pq} exp(iπ pq / d)
            let pq = (p * q) as f64;
            let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            let tau = Complex64::from_polar(sign, PI * pq / d as f64);
            out.push((&xp * &zq).map(|e| e * tau));
            zq = &zq * &z;
        }
        xp = &xp * &x;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{c, max_abs, trace, unitarity_defect};

    #[test]
    fn pauli_structure_at_d2() {
        let ds = wh_displacements(2).unwrap();
        assert!(max_abs(&(&ds[0] - ComplexMatrix::identity(2, 2))) < 1e-15);
        let z = ComplexMatrix::from_row_slice(2, 2, &[ONE, c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), ONE, ONE, c(0., 0.)]);
        let minus_y = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., -1.), c(0., 0.)]);
        assert!(max_abs(&(&ds[1] - z)) < 1e-15);
        assert!(max_abs(&(&ds[2] - x)) < 1e-15);
        assert!(max_abs(&(&ds[3] - minus_y)) < 1e-15);
    }

    #[test]
    fn unitary_and_traceless() {
        for d in 2..9 {
            let ds = wh_displacements(d).unwrap();
            assert_eq!(ds.len(), d * d);
            for (k, m) in ds.iter().enumerate() {
                assert!(unitarity_defect(m) < 1e-13);
                if k > 0 {
                    assert!(trace(m).norm() < 1e-13);
                }
            }
        }
        assert!(wh_displacements(1).is_err());
    }

    #[test]
    fn trace_orthogonality() {
        // tr(D_a† D_b) = d δ_ab
        let d = 3;
        let ds = wh_displacements(d).unwrap();
        for a in 0..d * d {
            for b in 0..d * d {
                let t = trace(&(ds[a].adjoint() * &ds[b]));
                let want = if a == b { d as f64 } else { 0.0 };
                assert!((t - c(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
