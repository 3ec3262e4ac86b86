//! The Plastino-Moszkowski Hamiltonian `H = E·J_z − λ(J² − J_z² − N/2)`.
//!
//! `H` is diagonal in the Dicke basis `|J, M⟩`, so each eigenenergy is an
//! affine function of the coupling: `ε_M(λ) = E·M − λ(J(J+1) − M² − N/2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin_algebra::{build_j2, build_jz, Multiplet, OperatorMatrix};

/// Relative tolerance for calling two ground-state candidates degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub multiplet: Multiplet,
    pub e_gap: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(multiplet: Multiplet, e_gap: f64, lambda: f64) -> Result<Self> {
        check_e_gap(e_gap)?;
        check_lambda(lambda)?;
        Ok(Self {
            multiplet,
            e_gap,
            lambda,
        })
    }

    /// Unit level splitting.
    pub fn with_unit_gap(multiplet: Multiplet, lambda: f64) -> Result<Self> {
        Self::new(multiplet, 1.0, lambda)
    }
}

pub(crate) fn check_e_gap(e_gap: f64) -> Result<()> {
    if !(e_gap > 0.0 && e_gap.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "level splitting must be positive and finite, got {e_gap}"
        )));
    }
    Ok(())
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "coupling must be finite and non-negative, got {lambda}"
        )));
    }
    Ok(())
}

/// One eigenenergy `ε(λ) = intercept + slope·λ` labelled by its `J_z` value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AffineLevel {
    pub m: f64,
    pub intercept: f64,
    pub slope: f64,
}

impl AffineLevel {
    pub fn energy(&self, lambda: f64) -> f64 {
        self.intercept + self.slope * lambda
    }
}

/// The full set of affine levels, ascending in `M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    levels: Vec<AffineLevel>,
}

impl Spectrum {
    /// Arbitrary level list; used for shifted or synthetic spectra.
    pub fn from_levels(levels: Vec<AffineLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("spectrum needs at least one level".into()));
        }
        if levels
            .iter()
            .any(|l| !(l.intercept.is_finite() && l.slope.is_finite()))
        {
            return Err(Error::InvalidInput("level coefficients must be finite".into()));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[AffineLevel] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn energies(&self, lambda: f64) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy(lambda)).collect()
    }

    /// Every level's energy raised by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        Self {
            levels: self
                .levels
                .iter()
                .map(|l| AffineLevel {
                    intercept: l.intercept + offset,
                    ..*l
                })
                .collect(),
        }
    }
}

/// Slope coefficient `−[(J(J+1) − M²) − N/2]`, grouped as the matrix build does.
fn level_slope(m: Multiplet, mq: f64) -> f64 {
    -((m.casimir() - mq * mq) - f64::from(m.n_particles()) / 2.0)
}

pub fn build_hamiltonian(p: &ModelParams) -> OperatorMatrix {
    let m = p.multiplet;
    let jz = build_jz(m);
    let half_n = OperatorMatrix::identity(m.dim()).scale(f64::from(m.n_particles()) / 2.0);
    let interaction = &(&build_j2(m) - &(&jz * &jz)) - &half_n;
    &jz.scale(p.e_gap) - &interaction.scale(p.lambda)
}

pub fn analytic_spectrum(m: Multiplet, e_gap: f64) -> Result<Spectrum> {
    check_e_gap(e_gap)?;
    let levels = m
        .m_values()
        .map(|mq| AffineLevel {
            m: mq,
            intercept: e_gap * mq,
            slope: level_slope(m, mq),
        })
        .collect();
    Spectrum::from_levels(levels)
}

/// A ground-state level crossing at `λ_c = 1/(N − (2n − 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub n: u32,
    pub lambda_c: f64,
    /// `N − (2n − 1)`, so `lambda_c = 1/denominator` exactly as a rational.
    pub denominator: u32,
    pub lower_m: f64,
    pub upper_m: f64,
}

/// Ground-state crossings for unit level splitting, ascending in `λ_c`.
///
/// Transition `n` hands the ground state from `M = −J + n − 1` to `M = −J + n`.
pub fn critical_couplings(m: Multiplet) -> Vec<CriticalPoint> {
    let n_p = m.n_particles();
    if n_p < 2 {
        return Vec::new();
    }
    let mut points: Vec<CriticalPoint> = (1..)
        .map_while(|n: u32| {
            let denom = i64::from(n_p) - (2 * i64::from(n) - 1);
            (denom > 0).then_some((n, denom as u32))
        })
        .map(|(n, denominator)| CriticalPoint {
            n,
            lambda_c: 1.0 / f64::from(denominator),
            denominator,
            lower_m: -m.j() + f64::from(n) - 1.0,
            upper_m: -m.j() + f64::from(n),
        })
        .collect();
    points.sort_by(|a, b| a.lambda_c.total_cmp(&b.lambda_c));
    points
}

/// Ground-state crossings for a general splitting `E`: `λ_c = E/(N − (2n − 1))`.
pub fn critical_couplings_scaled(m: Multiplet, e_gap: f64) -> Result<Vec<CriticalPoint>> {
    check_e_gap(e_gap)?;
    Ok(critical_couplings(m)
        .into_iter()
        .map(|c| CriticalPoint {
            lambda_c: e_gap / f64::from(c.denominator),
            ..c
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroundState {
    pub energy: f64,
    /// `M` values of all levels tied for the minimum.
    pub degenerate_ms: Vec<f64>,
    /// Indices into the spectrum's level list, parallel to `degenerate_ms`.
    pub indices: Vec<usize>,
}

pub fn ground_state_energy(s: &Spectrum, lambda: f64) -> GroundState {
    let energies = s.energies(lambda);
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = DEGENERACY_RTOL * e_min.abs().max(1.0);
    let indices: Vec<usize> = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e - e_min <= tol)
        .map(|(i, _)| i)
        .collect();
    GroundState {
        energy: e_min,
        degenerate_ms: indices.iter().map(|&i| s.levels()[i].m).collect(),
        indices,
    }
}

/// `dE_gs/dλ`; at a degeneracy, the equal-weight mean of the tied slopes.
pub fn ground_slope(s: &Spectrum, lambda: f64) -> f64 {
    let gs = ground_state_energy(s, lambda);
    let sum: f64 = gs.indices.iter().map(|&i| s.levels()[i].slope).sum();
    sum / gs.indices.len() as f64
}

/// One-sided ground-state slope: `Side::Right` picks the tied level that stays
/// lowest for larger λ (most negative slope), `Side::Left` the opposite.
pub fn ground_slope_one_sided(s: &Spectrum, lambda: f64, side: Side) -> f64 {
    let gs = ground_state_energy(s, lambda);
    let slopes = gs.indices.iter().map(|&i| s.levels()[i].slope);
    match side {
        Side::Left => slopes.fold(f64::NEG_INFINITY, f64::max),
        Side::Right => slopes.fold(f64::INFINITY, f64::min),
    }
}

/// A crossing on the lower envelope of the affine levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GroundCrossing {
    pub lambda: f64,
    /// Level index that is the ground state just below `lambda`.
    pub left_index: usize,
    /// Level index that is the ground state just above `lambda`.
    pub right_index: usize,
}

/// Exact walk along the lower envelope of the levels on `[lo, hi]`.
pub fn ground_crossings(s: &Spectrum, lo: f64, hi: f64) -> Vec<GroundCrossing> {
    let levels = s.levels();
    let right_ground = |lambda: f64| -> usize {
        let gs = ground_state_energy(s, lambda);
        *gs.indices
            .iter()
            .min_by(|&&a, &&b| levels[a].slope.total_cmp(&levels[b].slope))
            .expect("spectrum is non-empty")
    };
    let mut out = Vec::new();
    let mut at = lo;
    let mut current = right_ground(lo);
    loop {
        let cur = levels[current];
        // the first steeper level to meet the current ground level
        let next = levels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.slope < cur.slope)
            .map(|(i, l)| (i, (l.intercept - cur.intercept) / (cur.slope - l.slope)))
            .filter(|&(_, x)| x > at)
            .min_by(|a, b| a.1.total_cmp(&b.1).then(levels[a.0].slope.total_cmp(&levels[b.0].slope)));
        match next {
            Some((i, x)) if x <= hi => {
                out.push(GroundCrossing {
                    lambda: x,
                    left_index: current,
                    right_index: i,
                });
                at = x;
                current = i;
            }
            _ => break,
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}
