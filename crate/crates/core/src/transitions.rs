//! Locating the quantum critical couplings.
//!
//! Three independent routes:
//! - finite-temperature remnants: peaks of `|∂⟨E⟩/∂β|` that close in on each
//!   crossing as β grows,
//! - zero-temperature jumps of the ground-state slope `dE_gs/dλ`,
//! - for two particles, the minimum of the `∂⟨E⟩/∂β = 0` residual.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ground_crossings, ground_slope_one_sided, Side, Spectrum};
use crate::optimize::{bisect_boundary, bisect_root, golden_maximize, golden_minimize};
use crate::thermo::{ceq_scaled_residual, observables, zero_t_c_star_lambda, ThermalObservables};

/// λ-resolution of golden-section peak refinement.
pub const PEAK_XTOL: f64 = 1e-8;
/// λ-resolution of jump bisection.
pub const JUMP_XTOL: f64 = 1e-10;
pub const DEFAULT_JUMP_THRESHOLD: f64 = 0.5;
pub const MIN_GRID_POINTS: usize = 16;
/// Local maxima lower than this fraction of the tallest grid value are noise.
pub const MIN_RELATIVE_PEAK_HEIGHT: f64 = 1e-6;
/// Upper bound on automatically chosen grid sizes.
const MAX_AUTO_GRID: usize = 400_000;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `k` evenly spaced points including both endpoints.
    pub fn grid(&self, k: usize) -> Vec<f64> {
        let last = (k - 1) as f64;
        (0..k)
            .map(|i| {
                if i + 1 == k {
                    self.hi
                } else {
                    self.lo + self.width() * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeakEstimate {
    pub lambda_at_peak: f64,
    /// `|∂⟨E⟩/∂β|` at the peak.
    pub height: f64,
    /// Full width at half maximum, in λ units.
    pub width: f64,
    pub beta: f64,
}

fn remnant(s: &Spectrum, beta: f64, lambda: f64) -> f64 {
    observables(s, beta, lambda)
        .map(|o| o.c_star_beta.abs())
        .unwrap_or(0.0)
}

/// Strict local maxima of `|∂⟨E⟩/∂β|` on a uniform λ grid, each refined by
/// golden-section search, sorted by λ. Empty when the remnant is washed out.
pub fn find_peaks(
    s: &Spectrum,
    beta: f64,
    range: Interval,
    grid_points: usize,
) -> Result<Vec<PeakEstimate>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    if range.lo < 0.0 {
        return Err(Error::InvalidInput("coupling range must be non-negative".into()));
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_GRID_POINTS} grid points, got {grid_points}"
        )));
    }
    let xs = range.grid(grid_points);
    let ys: Vec<f64> = xs.par_iter().map(|&x| remnant(s, beta, x)).collect();
    let tallest = ys.iter().copied().fold(0.0, f64::max);
    if tallest <= 0.0 {
        return Ok(Vec::new());
    }
    let f = |x: f64| remnant(s, beta, x);
    let step = range.width() / (grid_points - 1) as f64;

    let mut peaks = Vec::new();
    for i in 1..grid_points - 1 {
        if !(ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) {
            continue;
        }
        if ys[i] < MIN_RELATIVE_PEAK_HEIGHT * tallest {
            continue;
        }
        let (x, height) = golden_maximize(f, xs[i - 1], xs[i + 1], PEAK_XTOL);
        let (x, height) = if height >= ys[i] { (x, height) } else { (xs[i], ys[i]) };
        let width = half_max_width(&f, x, height, range, step);
        peaks.push(PeakEstimate {
            lambda_at_peak: x,
            height,
            width,
            beta,
        });
    }
    peaks.sort_by(|a, b| a.lambda_at_peak.total_cmp(&b.lambda_at_peak));
    Ok(peaks)
}

/// FWHM: walk outward from the peak until the value drops below half, then
/// bisect. A side that never drops below half inside `range` is cut at the edge.
fn half_max_width<F: Fn(f64) -> f64>(f: &F, x0: f64, height: f64, range: Interval, step: f64) -> f64 {
    let half = 0.5 * height;
    let walk = step / 4.0;
    let edge = |dir: f64| -> f64 {
        let limit = if dir > 0.0 { range.hi } else { range.lo };
        let mut inner = x0;
        loop {
            let outer = inner + dir * walk;
            let clipped = if dir > 0.0 { outer.min(limit) } else { outer.max(limit) };
            if f(clipped) < half {
                let (a, b) = if dir > 0.0 {
                    bisect_boundary(|x| f(x) >= half, inner, clipped, PEAK_XTOL * 1e-2)
                } else {
                    let (a, b) = bisect_boundary(|x| f(x) < half, clipped, inner, PEAK_XTOL * 1e-2);
                    (b, a)
                };
                return 0.5 * (a + b);
            }
            if clipped == limit {
                return limit;
            }
            inner = clipped;
        }
    };
    edge(1.0) - edge(-1.0)
}

/// Grid size that puts several points inside the narrowest remnant peak on
/// `range` at this β. The flanking peaks sit ≈ 2.4/(β·Δslope) from a crossing.
pub fn resolving_grid_points(s: &Spectrum, beta: f64, range: Interval, floor: usize) -> usize {
    let max_gap = ground_crossings(s, range.lo, range.hi)
        .iter()
        .map(|c| (s.levels()[c.left_index].slope - s.levels()[c.right_index].slope).abs())
        .fold(0.0, f64::max);
    let offset = 2.4 / (beta * max_gap.max(1e-300));
    let needed = (range.width() / (offset / 6.0)).ceil();
    let needed = if needed.is_finite() { needed as usize + 1 } else { MAX_AUTO_GRID };
    needed.clamp(floor.max(MIN_GRID_POINTS), MAX_AUTO_GRID)
}

/// A remnant peak assigned to the nearest ground-state crossing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrackedPeak {
    pub beta: f64,
    pub lambda_c: f64,
    /// Which flank of the crossing the peak sits on.
    pub side: Side,
    /// `|lambda_at_peak − lambda_c|`.
    pub offset: f64,
    pub peak: PeakEstimate,
}

/// A crossing whose flanking peaks were not cleanly resolved at some β.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnresolvedPeaks {
    pub beta: f64,
    pub lambda_c: f64,
    pub left_found: usize,
    pub right_found: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakTrack {
    pub schedule: Vec<f64>,
    pub crossings: Vec<f64>,
    /// Sorted by β, then λ.
    pub peaks: Vec<TrackedPeak>,
    pub unresolved: Vec<UnresolvedPeaks>,
}

impl PeakTrack {
    /// The tracked series for one crossing and flank, in schedule order.
    pub fn series(&self, lambda_c: f64, side: Side) -> Vec<TrackedPeak> {
        self.peaks
            .iter()
            .filter(|p| p.lambda_c == lambda_c && p.side == side)
            .copied()
            .collect()
    }
}

/// Runs `find_peaks` along an increasing β schedule, with grids fine enough to
/// resolve each β, and assigns peaks to the crossings inside `range`.
pub fn track_peaks_to_zero_t(
    s: &Spectrum,
    beta_schedule: &[f64],
    range: Interval,
) -> Result<PeakTrack> {
    if beta_schedule.len() < 3 {
        return Err(Error::InvalidInput("beta schedule needs at least 3 values".into()));
    }
    if !beta_schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("beta schedule must be strictly increasing".into()));
    }
    let crossings: Vec<f64> = ground_crossings(s, range.lo, range.hi)
        .iter()
        .map(|c| c.lambda)
        .filter(|&x| range.contains(x))
        .collect();

    let mut peaks = Vec::new();
    let mut unresolved = Vec::new();
    for &beta in beta_schedule {
        let grid = resolving_grid_points(s, beta, range, 1000);
        let found = find_peaks(s, beta, range, grid)?;
        let mut assigned: Vec<TrackedPeak> = Vec::new();
        for peak in found {
            let Some(&lambda_c) = crossings.iter().min_by(|a, b| {
                (*a - peak.lambda_at_peak)
                    .abs()
                    .total_cmp(&(*b - peak.lambda_at_peak).abs())
            }) else {
                continue;
            };
            let side = if peak.lambda_at_peak < lambda_c { Side::Left } else { Side::Right };
            assigned.push(TrackedPeak {
                beta,
                lambda_c,
                side,
                offset: (peak.lambda_at_peak - lambda_c).abs(),
                peak,
            });
        }
        for &lambda_c in &crossings {
            let count = |side| {
                assigned
                    .iter()
                    .filter(|p| p.lambda_c == lambda_c && p.side == side)
                    .count()
            };
            let (left_found, right_found) = (count(Side::Left), count(Side::Right));
            if left_found != 1 || right_found != 1 {
                unresolved.push(UnresolvedPeaks {
                    beta,
                    lambda_c,
                    left_found,
                    right_found,
                });
            }
        }
        peaks.extend(assigned);
    }
    Ok(PeakTrack {
        schedule: beta_schedule.to_vec(),
        crossings,
        peaks,
        unresolved,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JumpPoint {
    pub lambda: f64,
    pub left_value: f64,
    pub right_value: f64,
    /// Zero-temperature `∂⟨E⟩/∂λ` exactly at the crossing.
    pub midpoint_value: f64,
}

impl JumpPoint {
    /// The value at the crossing is the mean of the two plateaus.
    pub fn is_degenerate_average(&self) -> bool {
        (self.midpoint_value - 0.5 * (self.left_value + self.right_value)).abs() <= 1e-9
    }
}

fn same_plateau(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Jumps of the zero-temperature ground-state slope on a uniform λ grid,
/// each refined by bisection to `JUMP_XTOL` and then snapped to the exact
/// intersection of the two affine levels involved.
pub fn detect_jumps(
    s: &Spectrum,
    range: Interval,
    grid_points: usize,
    jump_threshold: f64,
) -> Result<Vec<JumpPoint>> {
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_GRID_POINTS} grid points, got {grid_points}"
        )));
    }
    if jump_threshold.is_nan() || jump_threshold <= 0.0 {
        return Err(Error::InvalidInput("jump threshold must be positive".into()));
    }
    if range.lo < 0.0 {
        return Err(Error::InvalidInput("coupling range must be non-negative".into()));
    }
    // right-continuous slope, so a grid point sitting on a crossing is not
    // mistaken for a plateau of its own
    let slope = |x: f64| ground_slope_one_sided(s, x, Side::Right);
    let right_level = |x: f64| -> usize {
        let gs = crate::model::ground_state_energy(s, x);
        *gs.indices
            .iter()
            .min_by(|&&a, &&b| s.levels()[a].slope.total_cmp(&s.levels()[b].slope))
            .expect("non-empty spectrum")
    };

    let xs = range.grid(grid_points);
    let mut jumps = Vec::new();
    for cell in xs.windows(2) {
        let (x0, x1) = (cell[0], cell[1]);
        let v_end = slope(x1);
        let mut lo = x0;
        let mut v_lo = slope(x0);
        // a cell may hold more than one crossing
        while !same_plateau(v_lo, v_end) {
            let (a, b) = bisect_boundary(|x| same_plateau(slope(x), v_lo), lo, x1, JUMP_XTOL);
            let v_right = slope(b);
            let (left, right) = (s.levels()[right_level(a)], s.levels()[right_level(b)]);
            let exact = (right.intercept - left.intercept) / (left.slope - right.slope);
            let lambda = if exact.is_finite() && exact >= a - JUMP_XTOL && exact <= b + JUMP_XTOL {
                exact
            } else {
                0.5 * (a + b)
            };
            if (v_lo - v_right).abs() > jump_threshold {
                jumps.push(JumpPoint {
                    lambda,
                    left_value: v_lo,
                    right_value: v_right,
                    midpoint_value: zero_t_c_star_lambda(s, lambda)?,
                });
            }
            lo = b;
            v_lo = v_right;
        }
    }
    Ok(jumps)
}

/// The plateau values separated by `jumps`, starting from `first`.
pub fn plateaus(first: f64, jumps: &[JumpPoint]) -> Vec<f64> {
    std::iter::once(first)
        .chain(jumps.iter().map(|j| j.right_value))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CeqEstimate {
    pub beta: f64,
    pub xi: f64,
    pub residual: f64,
    /// False when the minimum sits on the search-interval boundary.
    pub converged: bool,
}

/// Minimizer of the scaled two-particle residual in ξ at fixed β.
pub fn qpt_from_ceq(beta: f64, search: Interval) -> Result<CeqEstimate> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    if !(search.lo < 1.0 && 1.0 < search.hi && search.lo >= 0.0) {
        return Err(Error::InvalidInput(
            "search interval must be non-negative and contain 1 strictly".into(),
        ));
    }
    let f = |xi: f64| ceq_scaled_residual(xi, beta).unwrap_or(f64::INFINITY);
    let xtol = 1e-8;
    let (xi, residual) = golden_minimize(f, search.lo, search.hi, xtol);
    let edge = 10.0 * xtol;
    let converged = xi - search.lo > edge && search.hi - xi > edge;
    Ok(CeqEstimate {
        beta,
        xi,
        residual,
        converged,
    })
}

/// One point of a constant-mean-energy curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IsoEnergyPoint {
    Solved {
        beta: f64,
        lambda: f64,
        /// More than one sign change was seen on the bracket; the smallest root is kept.
        multiple_roots: bool,
    },
    /// Target energy not attained on the bracket at this β.
    Gap { beta: f64 },
}

const ISO_SCAN_CELLS: usize = 256;

/// For each β, the λ with `⟨E⟩(β, λ) = target_energy`.
pub fn iso_energy_curve(
    s: &Spectrum,
    target_energy: f64,
    beta_grid: &[f64],
    lambda_bracket: Interval,
) -> Result<Vec<IsoEnergyPoint>> {
    if lambda_bracket.lo < 0.0 {
        return Err(Error::InvalidInput("coupling bracket must be non-negative".into()));
    }
    if !target_energy.is_finite() {
        return Err(Error::InvalidInput("target energy must be finite".into()));
    }
    let ftol = 1e-12 * target_energy.abs().max(1.0);
    beta_grid
        .iter()
        .map(|&beta| {
            let xs = lambda_bracket.grid(ISO_SCAN_CELLS + 1);
            let fs = xs
                .iter()
                .map(|&x| observables(s, beta, x).map(|o| o.mean_energy - target_energy))
                .collect::<Result<Vec<f64>>>()?;
            let changes: Vec<usize> = (0..ISO_SCAN_CELLS)
                .filter(|&i| fs[i] == 0.0 || fs[i].signum() != fs[i + 1].signum() && fs[i + 1] != 0.0)
                .collect();
            let Some(&first) = changes.first() else {
                return Ok(IsoEnergyPoint::Gap { beta });
            };
            let g = |x: f64| observables(s, beta, x).map(|o| o.mean_energy - target_energy).unwrap_or(f64::NAN);
            match bisect_root(g, xs[first], xs[first + 1], 1e-10, ftol) {
                Some(lambda) => Ok(IsoEnergyPoint::Solved {
                    beta,
                    lambda,
                    multiple_roots: changes.len() > 1,
                }),
                None => Ok(IsoEnergyPoint::Gap { beta }),
            }
        })
        .collect()
}

pub const SWEEP_HEADER: &str =
    "beta,lambda,log_z,mean_energy,entropy,c_star_beta,c_star_lambda,specific_heat";

/// Observables on a (β, λ) grid; rows ordered outer β, inner λ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<ThermalObservables>,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{SWEEP_HEADER}")?;
        for r in &self.rows {
            let fields = [
                r.beta,
                r.lambda,
                r.log_z,
                r.mean_energy,
                r.entropy,
                r.c_star_beta,
                r.c_star_lambda,
                r.specific_heat,
            ];
            let line: Vec<String> = fields.iter().map(|&v| fmt_f64(v)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub fn phase_diagram(s: &Spectrum, beta_grid: &[f64], lambda_grid: &[f64]) -> Result<SweepTable> {
    if beta_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::InvalidInput("grids must be non-empty".into()));
    }
    let points: Vec<(f64, f64)> = beta_grid
        .iter()
        .flat_map(|&b| lambda_grid.iter().map(move |&l| (b, l)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(b, l)| observables(s, b, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{analytic_spectrum, critical_couplings};
    use crate::spin_algebra::Multiplet;

    fn spectrum(n: u32) -> Spectrum {
        analytic_spectrum(Multiplet::new(n).unwrap(), 1.0).unwrap()
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn interval_grid_endpoints() {
        let g = iv(0.02, 1.4).grid(1000);
        assert_eq!(g.len(), 1000);
        assert_eq!(g[0], 0.02);
        assert_eq!(g[999], 1.4);
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn n4_peaks_flank_both_crossings() {
        let peaks = find_peaks(&spectrum(4), 110.0, iv(0.02, 1.4), 2000).unwrap();
        assert_eq!(peaks.len(), 4, "{peaks:?}");
        for (pair, lc) in peaks.chunks(2).zip([1.0 / 3.0, 1.0]) {
            assert!(pair[0].lambda_at_peak < lc && pair[1].lambda_at_peak > lc);
            for p in pair {
                assert!((p.lambda_at_peak - lc).abs() < 0.05);
                assert!(p.height > 0.0 && p.width > 0.0);
            }
        }
    }

    #[test]
    fn n8_peaks_near_first_three_crossings() {
        let peaks = find_peaks(&spectrum(8), 110.0, iv(0.02, 0.5), 3000).unwrap();
        let centers: Vec<f64> = peaks
            .chunks(2)
            .map(|p| 0.5 * (p[0].lambda_at_peak + p[1].lambda_at_peak))
            .collect();
        assert_eq!(centers.len(), 3, "{peaks:?}");
        for (c, lc) in centers.iter().zip([1.0 / 7.0, 0.2, 1.0 / 3.0]) {
            assert!((c - lc).abs() < 1e-3, "{c} vs {lc}");
        }
    }

    #[test]
    fn washed_out_remnant_has_no_peaks() {
        let peaks = find_peaks(&spectrum(4), 0.05, iv(0.02, 1.4), 200).unwrap();
        assert!(peaks.is_empty(), "{peaks:?}");
    }

    #[test]
    fn find_peaks_validates_input() {
        let s = spectrum(4);
        assert!(find_peaks(&s, 0.0, iv(0.0, 1.0), 100).is_err());
        assert!(find_peaks(&s, 10.0, iv(0.0, 1.0), 8).is_err());
    }

    #[test]
    fn tracking_n4_shrinks_toward_unit_coupling() {
        let track = track_peaks_to_zero_t(&spectrum(4), &[70.0, 90.0, 110.0], iv(0.9, 1.1)).unwrap();
        assert_eq!(track.crossings, vec![1.0]);
        assert!(track.unresolved.is_empty(), "{:?}", track.unresolved);
        for side in [Side::Left, Side::Right] {
            let series = track.series(1.0, side);
            assert_eq!(series.len(), 3);
            for w in series.windows(2) {
                assert!(w[1].offset < w[0].offset);
                assert!(w[1].peak.height < w[0].peak.height);
                assert!(w[1].peak.width < w[0].peak.width);
            }
        }
    }

    #[test]
    fn tracking_n2_single_crossing() {
        let track = track_peaks_to_zero_t(&spectrum(2), &[50.0, 100.0, 200.0], iv(0.5, 1.5)).unwrap();
        assert_eq!(track.crossings, vec![1.0]);
        assert!(track.unresolved.is_empty());
        let right = track.series(1.0, Side::Right);
        assert!(right.last().unwrap().offset < right[0].offset);
    }

    #[test]
    fn tracking_rejects_bad_schedule() {
        let s = spectrum(4);
        assert!(track_peaks_to_zero_t(&s, &[70.0, 90.0], iv(0.5, 1.5)).is_err());
        assert!(track_peaks_to_zero_t(&s, &[70.0, 60.0, 110.0], iv(0.5, 1.5)).is_err());
    }

    #[test]
    fn jumps_n4() {
        let s = spectrum(4);
        let jumps = detect_jumps(&s, iv(0.0, 1.4), 500, DEFAULT_JUMP_THRESHOLD).unwrap();
        assert_eq!(jumps.len(), 2);
        assert!((jumps[0].lambda - 1.0 / 3.0).abs() < 1e-9);
        assert!((jumps[1].lambda - 1.0).abs() < 1e-9);
        assert_eq!(plateaus(0.0, &jumps), vec![0.0, -3.0, -4.0]);
        assert_eq!(jumps[0].midpoint_value, -1.5);
        assert_eq!(jumps[1].midpoint_value, -3.5);
    }

    #[test]
    fn jumps_with_grid_point_on_crossing() {
        // 101 points on [0, 2] puts a grid point exactly on ξ = 1
        let jumps = detect_jumps(&spectrum(2), iv(0.0, 2.0), 101, DEFAULT_JUMP_THRESHOLD).unwrap();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].lambda, 1.0);
        assert_eq!((jumps[0].left_value, jumps[0].right_value), (0.0, -1.0));
        assert_eq!(jumps[0].midpoint_value, -0.5);
    }

    #[test]
    fn jumps_with_two_crossings_in_one_cell() {
        // N=16 crossings at 1/15 and 1/13 share a 16-point cell on [0, 1.4]
        let s = spectrum(16);
        let jumps = detect_jumps(&s, iv(0.0, 1.4), 16, DEFAULT_JUMP_THRESHOLD).unwrap();
        let expect = critical_couplings(Multiplet::new(16).unwrap());
        assert_eq!(jumps.len(), expect.len());
        for (j, c) in jumps.iter().zip(&expect) {
            assert!((j.lambda - c.lambda_c).abs() < 1e-9);
            assert!(j.is_degenerate_average());
        }
    }

    #[test]
    fn ceq_minimum_examples() {
        let est = qpt_from_ceq(200.0, iv(0.5, 1.5)).unwrap();
        assert!(est.converged);
        assert!((est.xi - 1.0).abs() < 1e-3);
        let est = qpt_from_ceq(0.1, iv(0.5, 1.5)).unwrap();
        assert!(!est.converged, "{est:?}");
        assert!(qpt_from_ceq(10.0, iv(1.2, 1.5)).is_err());
    }

    #[test]
    fn iso_energy_examples() {
        let s2 = spectrum(2);
        let pts = iso_energy_curve(&s2, -0.2, &[0.0], iv(0.0, 2.0)).unwrap();
        match pts[0] {
            IsoEnergyPoint::Solved { lambda, multiple_roots, .. } => {
                assert!((lambda - 0.6).abs() < 1e-10);
                assert!(!multiple_roots);
            }
            other => panic!("{other:?}"),
        }
        let s4 = spectrum(4);
        let pts = iso_energy_curve(&s4, -2.5, &[300.0], iv(0.0, 1.4)).unwrap();
        match pts[0] {
            IsoEnergyPoint::Solved { lambda, .. } => assert!((lambda - 0.5).abs() < 1e-10),
            other => panic!("{other:?}"),
        }
        let pts = iso_energy_curve(&s4, -10.0, &[300.0], iv(0.0, 1.0)).unwrap();
        assert_eq!(pts[0], IsoEnergyPoint::Gap { beta: 300.0 });
    }

    #[test]
    fn iso_energy_residuals_are_tiny() {
        let s = spectrum(8);
        let betas = [0.5, 2.0, 10.0, 40.0];
        for pt in iso_energy_curve(&s, -6.0, &betas, iv(0.0, 1.5)).unwrap() {
            if let IsoEnergyPoint::Solved { beta, lambda, .. } = pt {
                let e = observables(&s, beta, lambda).unwrap().mean_energy;
                assert!((e + 6.0).abs() < 1e-9, "beta={beta}: {e}");
            } else {
                panic!("unexpected gap {pt:?}");
            }
        }
    }

    #[test]
    fn phase_diagram_order_and_single_point() {
        let s = spectrum(4);
        let t = phase_diagram(&s, &[1.0], &[0.5]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0], observables(&s, 1.0, 0.5).unwrap());
        let t = phase_diagram(&s, &[1.0, 2.0], &[0.1, 0.2, 0.3]).unwrap();
        let order: Vec<(f64, f64)> = t.rows.iter().map(|r| (r.beta, r.lambda)).collect();
        assert_eq!(
            order,
            vec![(1.0, 0.1), (1.0, 0.2), (1.0, 0.3), (2.0, 0.1), (2.0, 0.2), (2.0, 0.3)]
        );
        assert!(phase_diagram(&s, &[], &[0.1]).is_err());
    }
}
