//! Cyclic-by-rows Jacobi eigenvalue solver for small real symmetric matrices.
//!
//! Used as an independent check on the affine spectrum: the model Hamiltonian
//! is already diagonal, but any orthogonal similarity of it must diagonalize
//! back to the same values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin_algebra::OperatorMatrix;

pub const DEFAULT_MAX_SWEEPS: usize = 30;
/// Relative to the Frobenius norm of the input.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenResult {
    /// Ascending.
    pub values: Vec<f64>,
    pub sweeps_used: usize,
    /// Off-diagonal Frobenius norm after the last sweep.
    pub off_norm: f64,
}

/// Eigenvalues with the default tolerance `1e-12·‖A‖_F` and 30 sweeps.
pub fn eigenvalues(a: &OperatorMatrix) -> Result<EigenResult> {
    let tol = (DEFAULT_RELATIVE_TOL * a.frobenius_norm()).max(f64::MIN_POSITIVE);
    jacobi_eigenvalues(a, tol, DEFAULT_MAX_SWEEPS)
}

pub fn jacobi_eigenvalues(a: &OperatorMatrix, tol: f64, max_sweeps: usize) -> Result<EigenResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let asym = a.max_asymmetry();
    let scale = a.frobenius_norm().max(1.0);
    if asym > SYMMETRY_TOL * scale || a.entries().iter().any(|x| !x.is_finite()) {
        return Err(Error::NotSymmetric { max_asymmetry: asym });
    }

    let n = a.dim();
    // work on the upper triangle of a private symmetrized copy
    let mut w = a.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (w[(i, j)] + w[(j, i)]);
            w[(i, j)] = avg;
            w[(j, i)] = avg;
        }
    }

    let mut sweeps = 0;
    let mut off = off_norm(&w);
    while off > tol && sweeps < max_sweeps {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut w, p, q);
            }
        }
        sweeps += 1;
        off = off_norm(&w);
    }

    let mut values = w.diagonal();
    values.sort_by(f64::total_cmp);
    let result = EigenResult {
        values,
        sweeps_used: sweeps,
        off_norm: off,
    };
    if off > tol {
        return Err(Error::NoConvergence { partial: result });
    }
    Ok(result)
}

fn off_norm(w: &OperatorMatrix) -> f64 {
    let n = w.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += w[(i, j)] * w[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `w[p][q]` with a plane rotation (Rutishauser's update form).
fn rotate(w: &mut OperatorMatrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = w[(p, p)];
    let aqq = w[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        // |θ| overflowed: t ≈ 1/(2θ)
        apq / (aqq - app)
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    w[(p, p)] = app - t * apq;
    w[(q, q)] = aqq + t * apq;
    w[(p, q)] = 0.0;
    w[(q, p)] = 0.0;

    let n = w.dim();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = w[(r, p)];
        let arq = w[(r, q)];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        w[(r, p)] = new_rp;
        w[(p, r)] = new_rp;
        w[(r, q)] = new_rq;
        w[(q, r)] = new_rq;
    }
}
