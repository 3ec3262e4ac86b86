//! Canonical-ensemble observables over an affine spectrum.
//!
//! Every exponential sum is shifted by the lowest level energy before
//! exponentiation, so nothing overflows even at β ~ 10⁴. Derivatives are exact
//! Boltzmann moments:
//!
//! - `∂⟨E⟩/∂β = −Var(E)`
//! - `∂⟨E⟩/∂λ = ⟨ε′⟩ − β·Cov(ε, ε′)`, with `ε′` the level slopes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_lambda, ground_slope, Spectrum};

/// Largest exponent the N = 2 linear-domain closed forms accept.
pub const LINEAR_DOMAIN_LIMIT: f64 = 700.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThermalObservables {
    pub beta: f64,
    pub lambda: f64,
    pub log_z: f64,
    pub mean_energy: f64,
    pub energy_variance: f64,
    /// `∂⟨E⟩/∂β`, always `−energy_variance`.
    pub c_star_beta: f64,
    /// `∂⟨E⟩/∂λ` at fixed β.
    pub c_star_lambda: f64,
    /// `−β²·∂⟨E⟩/∂β`.
    pub specific_heat: f64,
    pub entropy: f64,
    /// Boltzmann weights, parallel to the spectrum's levels.
    pub occupations: Vec<f64>,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::NegativeBeta(beta));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidInput(
            "beta must be finite; use the zero-temperature operations for beta = infinity".into(),
        ));
    }
    Ok(())
}

/// Level energies, their minimum, shifted Boltzmann weights and their sum.
struct Weights {
    energies: Vec<f64>,
    e_min: f64,
    weights: Vec<f64>,
    sum: f64,
}

fn shifted_weights(s: &Spectrum, beta: f64, lambda: f64) -> Weights {
    let energies = s.energies(lambda);
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies
        .iter()
        .map(|e| (-beta * (e - e_min)).exp())
        .collect();
    let sum = weights.iter().sum();
    Weights {
        energies,
        e_min,
        weights,
        sum,
    }
}

/// `ln Σ exp(−β ε_i(λ))` via the ground-state shift.
pub fn log_partition(s: &Spectrum, beta: f64, lambda: f64) -> Result<f64> {
    check_beta(beta)?;
    check_lambda(lambda)?;
    let w = shifted_weights(s, beta, lambda);
    Ok(-beta * w.e_min + w.sum.ln())
}

pub fn observables(s: &Spectrum, beta: f64, lambda: f64) -> Result<ThermalObservables> {
    check_beta(beta)?;
    check_lambda(lambda)?;
    let w = shifted_weights(s, beta, lambda);
    let p: Vec<f64> = w.weights.iter().map(|x| x / w.sum).collect();

    // moments of the excitation energies d_i = ε_i − ε_min ≥ 0
    let d: Vec<f64> = w.energies.iter().map(|e| e - w.e_min).collect();
    let slopes: Vec<f64> = s.levels().iter().map(|l| l.slope).collect();
    let mean_d: f64 = p.iter().zip(&d).map(|(pi, di)| pi * di).sum();
    let mean_slope: f64 = p.iter().zip(&slopes).map(|(pi, si)| pi * si).sum();
    let mut variance = 0.0;
    let mut covariance = 0.0;
    for ((pi, di), si) in p.iter().zip(&d).zip(&slopes) {
        let de = di - mean_d;
        variance += pi * de * de;
        covariance += pi * de * (si - mean_slope);
    }

    let c_star_beta = -variance;
    Ok(ThermalObservables {
        beta,
        lambda,
        log_z: -beta * w.e_min + w.sum.ln(),
        mean_energy: w.e_min + mean_d,
        energy_variance: variance,
        c_star_beta,
        c_star_lambda: mean_slope - beta * covariance,
        specific_heat: -beta * beta * c_star_beta,
        // β⟨E⟩ + ln Z with the −β·ε_min terms cancelled analytically
        entropy: beta * mean_d + w.sum.ln(),
        occupations: p,
    })
}

/// β → ∞ limit of `c_star_lambda`: the mean slope of the degenerate ground manifold.
pub fn zero_t_c_star_lambda(s: &Spectrum, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(ground_slope(s, lambda))
}

/// The two-particle closed forms, evaluated in the linear domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct N2ClosedForms {
    pub z: f64,
    pub dz_dbeta: f64,
    pub mean_e: f64,
    /// `∂⟨E⟩/∂ξ`.
    pub g_xi: f64,
}

/// Levels `{−1, −ξ, +1}`:
///
/// - `Z = e^{−β} + e^{βξ} + e^{β}`
/// - `∂Z/∂β = e^{β} + ξe^{βξ} − e^{−β}`
/// - `⟨E⟩ = [−e^{β} − ξe^{βξ} + e^{−β}]/Z`
/// - `G = [−(1 + βξ)e^{βξ}Z − (−e^{β} − ξe^{βξ} + e^{−β})βe^{βξ}]/Z²`
pub fn n2_closed_forms(xi: f64, beta: f64) -> Result<N2ClosedForms> {
    check_beta(beta)?;
    if !xi.is_finite() {
        return Err(Error::InvalidInput(format!("xi must be finite, got {xi}")));
    }
    let exponent = beta * xi.abs().max(1.0);
    if exponent > LINEAR_DOMAIN_LIMIT {
        return Err(Error::OverflowRange(exponent));
    }
    let ep = beta.exp();
    let em = (-beta).exp();
    let ex = (beta * xi).exp();
    let z = em + ex + ep;
    let numer = -ep - xi * ex + em;
    // divided through by Z once before the second division: Z² overflows near β ≈ 355
    let g_xi = (ex / z) * (-(1.0 + beta * xi) - beta * numer / z);
    Ok(N2ClosedForms {
        z,
        dz_dbeta: ep + xi * ex - em,
        mean_e: numer / z,
        g_xi,
    })
}

/// Residual of the two-particle condition `∂⟨E⟩/∂β = 0` written as
/// `[2coshβ + e^{βξ}][2coshβ + ξ²e^{βξ}] − [2sinhβ + ξe^{βξ}]²`, multiplied
/// by `e^{−β(1+ξ)}`.
///
/// The difference expands to `4 + (1−ξ)²e^{β(1+ξ)} + (1+ξ)²e^{β(ξ−1)}`, so the
/// scaled residual is `4e^{−β(1+ξ)} + (1−ξ)² + (1+ξ)²e^{−2β}`: every exponent
/// is non-positive and the large-β minimum sits at ξ = 1.
pub fn ceq_scaled_residual(xi: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::InvalidInput(format!("xi must be finite and non-negative, got {xi}")));
    }
    let one_minus = 1.0 - xi;
    let one_plus = 1.0 + xi;
    Ok(4.0 * (-beta * one_plus).exp()
        + one_minus * one_minus
        + one_plus * one_plus * (-2.0 * beta).exp())
}

/// The β → ∞ reduction of the two-particle condition, `2(ξ − 1)² = 0`, solved
/// as a quadratic `aξ² + bξ + c` with zero discriminant.
pub fn ceq_zero_temperature_root() -> f64 {
    let (a, b, c) = (2.0_f64, -4.0_f64, 2.0_f64);
    debug_assert_eq!(b * b - 4.0 * a * c, 0.0);
    -b / (2.0 * a)
}
