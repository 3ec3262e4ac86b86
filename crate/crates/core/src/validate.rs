//! Self-check suite behind `pm-qpt validate`: eight numbered criteria, each
//! with a tolerance and a wall-clock budget.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::cli::config::{Format, Method, RunConfig};
use crate::cli::grid::uniform_grid;
use crate::eigensolver::eigenvalues;
use crate::model::{
    analytic_spectrum, build_hamiltonian, critical_couplings, ground_slope_one_sided,
    ground_state_energy, ModelParams, Side, Spectrum,
};
use crate::spin_algebra::{Multiplet, OperatorMatrix};
use crate::thermo::{
    ceq_zero_temperature_root, log_partition, n2_closed_forms, observables, ThermalObservables,
};
use crate::transitions::{
    detect_jumps, find_peaks, plateaus, qpt_from_ceq, resolving_grid_points,
    track_peaks_to_zero_t, Interval,
};

/// Deliberate corruption used to confirm the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Report `∂⟨E⟩/∂β` with the wrong sign.
    FlipCStarBeta,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidationOptions {
    /// Skip the slow peak-tracking criterion.
    pub quick: bool,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

type Check = fn(&ValidationOptions) -> Result<String, String>;

const CRITERIA: [(u32, &str, Duration, Check); 8] = [
    (1, "critical couplings", Duration::from_millis(1), critical_values),
    (2, "eigenvalue lists", Duration::from_secs(1), eigenvalue_lists),
    (3, "two-particle transition", Duration::from_secs(1), two_particle),
    (4, "zero-temperature staircase", Duration::from_secs(1), staircase),
    (5, "remnant peaks", Duration::from_secs(10), remnant_peaks),
    (6, "thermodynamic identities", Duration::from_secs(5), thermo_properties),
    (7, "numerical robustness", Duration::from_secs(1), robustness),
    (8, "deterministic sweep", Duration::from_secs(5), determinism),
];

/// Criteria skipped by `--quick`.
pub const SLOW_CRITERIA: [u32; 1] = [5];

pub fn run_all(opts: &ValidationOptions) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .filter(|(id, ..)| !(opts.quick && SLOW_CRITERIA.contains(id)))
        .map(|&(id, name, limit, check)| {
            let start = Instant::now();
            let result = check(opts);
            let elapsed = start.elapsed();
            let (mut passed, mut detail) = match result {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            if passed && elapsed > limit {
                passed = false;
                detail = format!("{detail}; over the {limit:?} budget");
            }
            Outcome { id, name, passed, detail, elapsed, limit }
        })
        .collect()
}

pub fn print_table(outcomes: &[Outcome], out: &mut dyn Write) -> io::Result<()> {
    for o in outcomes {
        writeln!(
            out,
            "{} {} {:<28} {:>10.3?}  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed,
            o.detail
        )?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed)
}

fn spectrum(n: u32) -> Spectrum {
    analytic_spectrum(Multiplet::new(n).expect("n > 0"), 1.0).expect("unit gap")
}

fn thermal(opts: &ValidationOptions, s: &Spectrum, beta: f64, lambda: f64) -> Result<ThermalObservables, String> {
    let mut o = observables(s, beta, lambda).map_err(|e| e.to_string())?;
    if opts.fault == Some(Fault::FlipCStarBeta) {
        o.c_star_beta = -o.c_star_beta;
    }
    Ok(o)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn critical_values(_: &ValidationOptions) -> Result<String, String> {
    for (n, denoms) in [(2u32, vec![1u32]), (4, vec![3, 1]), (8, vec![7, 5, 3, 1])] {
        let got = critical_couplings(Multiplet::new(n).unwrap());
        let got_d: Vec<u32> = got.iter().map(|c| c.denominator).collect();
        ensure(got_d == denoms, || format!("N={n}: denominators {got_d:?}"))?;
        for c in &got {
            ensure(c.lambda_c == 1.0 / f64::from(c.denominator), || {
                format!("N={n}: lambda_c {} is not 1/{}", c.lambda_c, c.denominator)
            })?;
        }
    }
    Ok("N=2 {1}, N=4 {1/3, 1}, N=8 {1/7, 1/5, 1/3, 1}".into())
}

/// `Q·A·Q` with the Householder reflector `Q = I − 2vvᵀ/‖v‖²`.
fn reflect(a: &OperatorMatrix) -> OperatorMatrix {
    let d = a.dim();
    let v: Vec<f64> = (0..d).map(|i| 1.0 + 0.37 * i as f64).collect();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let mut q = OperatorMatrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            q[(i, j)] -= 2.0 * v[i] * v[j] / vv;
        }
    }
    let r = &(&q * a) * &q;
    (&r + &r.transpose()).scale(0.5)
}

fn eigenvalue_lists(_: &ValidationOptions) -> Result<String, String> {
    let expected: [(u32, Vec<(f64, f64)>); 2] = [
        (4, vec![(-2.0, 0.0), (2.0, 0.0), (-1.0, -3.0), (1.0, -3.0), (0.0, -4.0)]),
        (
            8,
            vec![
                (-4.0, 0.0),
                (4.0, 0.0),
                (-1.0, -15.0),
                (1.0, -15.0),
                (-2.0, -12.0),
                (2.0, -12.0),
                (-3.0, -7.0),
                (3.0, -7.0),
                (0.0, -16.0),
            ],
        ),
    ];
    let mut worst: f64 = 0.0;
    for (n, pairs) in &expected {
        let s = spectrum(*n);
        let mut got: Vec<(f64, f64)> = s.levels().iter().map(|l| (l.intercept, l.slope)).collect();
        let mut want = pairs.clone();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ensure(got == want, || format!("N={n}: levels {got:?}"))?;

        for lambda in [0.0, 0.1, 1.0 / 3.0, 0.5, 1.0, 1.7] {
            let p = ModelParams::with_unit_gap(Multiplet::new(*n).unwrap(), lambda).unwrap();
            let h = reflect(&build_hamiltonian(&p));
            let eig = eigenvalues(&h).map_err(|e| format!("N={n} lambda={lambda}: {e}"))?;
            let mut exact = s.energies(lambda);
            exact.sort_by(f64::total_cmp);
            for (a, b) in eig.values.iter().zip(&exact) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("Jacobi deviation {worst:.2e}"))?;
    Ok(format!("exact level pairs; Jacobi max deviation {worst:.1e}"))
}

fn two_particle(_: &ValidationOptions) -> Result<String, String> {
    let est = qpt_from_ceq(200.0, Interval::new(0.5, 1.5).unwrap()).map_err(|e| e.to_string())?;
    ensure(est.converged && (est.xi - 1.0).abs() < 1e-3, || {
        format!("xi*={} converged={}", est.xi, est.converged)
    })?;
    let root = ceq_zero_temperature_root();
    ensure(root == 1.0, || format!("zero-temperature root {root}"))?;
    let g = |xi| n2_closed_forms(xi, 30.0).map(|c| c.g_xi).map_err(|e| e.to_string());
    let (below, above) = (g(0.95)?, g(1.05)?);
    ensure(below.signum() != above.signum(), || {
        format!("G does not change sign: {below:e}, {above:e}")
    })?;
    Ok(format!("xi*={:.6} at beta=200; G {below:.2e} -> {above:.2e}", est.xi))
}

fn staircase(_: &ValidationOptions) -> Result<String, String> {
    let cases: [(u32, Vec<f64>, Vec<f64>); 2] = [
        (4, vec![1.0 / 3.0, 1.0], vec![0.0, -3.0, -4.0]),
        (8, vec![1.0 / 7.0, 0.2, 1.0 / 3.0, 1.0], vec![0.0, -7.0, -12.0, -15.0, -16.0]),
    ];
    let range = Interval::new(0.0, 1.4).unwrap();
    for (n, at, levels) in &cases {
        let s = spectrum(*n);
        let jumps = detect_jumps(&s, range, 500, 0.5).map_err(|e| e.to_string())?;
        let lambdas: Vec<f64> = jumps.iter().map(|j| j.lambda).collect();
        ensure(
            lambdas.len() == at.len() && lambdas.iter().zip(at).all(|(a, b)| (a - b).abs() <= 1e-9),
            || format!("N={n}: jumps at {lambdas:?}"),
        )?;
        let steps = plateaus(ground_slope_one_sided(&s, range.lo, Side::Right), &jumps);
        ensure(&steps == levels, || format!("N={n}: plateaus {steps:?}"))?;
        for j in &jumps {
            ensure(j.is_degenerate_average(), || {
                format!("N={n}: value {} at {} is not the mean of its plateaus", j.midpoint_value, j.lambda)
            })?;
        }
        if *n == 4 {
            let mids: Vec<f64> = jumps.iter().map(|j| j.midpoint_value).collect();
            ensure(mids == [-1.5, -3.5], || format!("N=4 midpoints {mids:?}"))?;
        }
    }
    Ok("N=4 {1/3, 1}, N=8 {1/7, 1/5, 1/3, 1}".into())
}

fn remnant_peaks(_: &ValidationOptions) -> Result<String, String> {
    let s = spectrum(4);
    let range = Interval::new(0.02, 1.4).unwrap();
    let crossings = [1.0 / 3.0, 1.0];

    let grid = resolving_grid_points(&s, 110.0, range, 1000);
    let peaks = find_peaks(&s, 110.0, range, grid).map_err(|e| e.to_string())?;
    let mut assigned = Vec::new();
    for p in &peaks {
        let c = crossings
            .iter()
            .copied()
            .min_by(|a, b| (a - p.lambda_at_peak).abs().total_cmp(&(b - p.lambda_at_peak).abs()))
            .unwrap();
        let off = (p.lambda_at_peak - c).abs();
        ensure(off < 0.05, || format!("peak at {} is {off} from {c}", p.lambda_at_peak))?;
        if !assigned.contains(&c) {
            assigned.push(c);
        }
    }
    ensure(assigned.len() == 2, || format!("beta=110 peaks assigned to {assigned:?}"))?;

    let track = track_peaks_to_zero_t(&s, &[70.0, 90.0, 110.0], range).map_err(|e| e.to_string())?;
    ensure(track.unresolved.is_empty(), || format!("unresolved: {:?}", track.unresolved))?;
    for &c in &track.crossings {
        for side in [Side::Left, Side::Right] {
            let series = track.series(c, side);
            let dec = |f: fn(&crate::transitions::TrackedPeak) -> f64| {
                series.len() == 3 && series.windows(2).all(|w| f(&w[1]) < f(&w[0]))
            };
            ensure(dec(|p| p.offset) && dec(|p| p.peak.height) && dec(|p| p.peak.width), || {
                format!("lambda_c={c} {side:?}: not shrinking along the schedule")
            })?;
        }
    }

    let fit_betas = [100.0, 200.0, 400.0, 800.0];
    let fit = track_peaks_to_zero_t(&s, &fit_betas, range).map_err(|e| e.to_string())?;
    let mut slopes = Vec::new();
    for &c in &fit.crossings {
        for side in [Side::Left, Side::Right] {
            let series = fit.series(c, side);
            ensure(series.len() == fit_betas.len(), || format!("lambda_c={c} {side:?}: lost peaks"))?;
            let pts: Vec<(f64, f64)> = series.iter().map(|p| (p.beta.ln(), p.offset.ln())).collect();
            let slope = least_squares_slope(&pts);
            ensure((slope + 1.0).abs() <= 0.1, || format!("lambda_c={c} {side:?}: log slope {slope}"))?;
            slopes.push(slope);
        }
    }
    let (lo, hi) = slopes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    Ok(format!("{} peaks at beta=110; log-offset slopes in [{lo:.3}, {hi:.3}]", peaks.len()))
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `⟨E⟩ − ε_k(λ)` summed directly over the levels, for finite differences
/// that do not lose digits to the large common ground energy.
fn excess_energy(s: &Spectrum, beta: f64, lambda: f64, k: usize) -> f64 {
    let e = s.energies(lambda);
    let e_min = e.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut num, mut den) = (0.0, 0.0);
    for &ei in &e {
        let w = (-beta * (ei - e_min)).exp();
        num += w * (ei - e[k]);
        den += w;
    }
    num / den
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn thermo_properties(opts: &ValidationOptions) -> Result<String, String> {
    let mut worst_fd: f64 = 0.0;
    for n in [2u32, 4, 8] {
        let s = spectrum(n);
        let shift = 3.7;
        let moved = s.shifted(shift);
        for beta in [0.5, 5.0, 50.0] {
            for lambda in [0.1, 0.4, 0.9, 1.2] {
                let o = thermal(opts, &s, beta, lambda)?;
                let tag = format!("N={n} beta={beta} lambda={lambda}");
                let total: f64 = o.occupations.iter().sum();
                ensure((total - 1.0).abs() <= 1e-12, || format!("{tag}: occupations sum {total}"))?;

                let m = thermal(opts, &moved, beta, lambda)?;
                let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(1.0);
                ensure(
                    close(m.mean_energy - shift, o.mean_energy)
                        && close(m.log_z + beta * shift, o.log_z)
                        && close(m.entropy, o.entropy)
                        && close(m.c_star_beta, o.c_star_beta)
                        && close(m.c_star_lambda, o.c_star_lambda),
                    || format!("{tag}: not invariant under a level shift"),
                )?;

                let k = ground_state_energy(&s, lambda).indices[0];
                let hb = 1e-5 * (1.0f64 / beta).max(1.0);
                let fd_beta = (excess_energy(&s, beta + hb, lambda, k)
                    - excess_energy(&s, beta - hb, lambda, k))
                    / (2.0 * hb);
                let hl = 1e-6;
                let bk = s.levels()[k].slope;
                // ⟨E⟩ = excess + ε_k(λ), and ε_k has slope b_k exactly
                let fd_lambda = bk
                    + (excess_energy(&s, beta, lambda + hl, k)
                        - excess_energy(&s, beta, lambda - hl, k))
                        / (2.0 * hl);
                let eb = rel_err(o.c_star_beta, fd_beta);
                let el = rel_err(o.c_star_lambda, fd_lambda);
                ensure(eb <= 1e-5, || format!("{tag}: dE/dbeta {} vs FD {fd_beta} (rel {eb:.1e})", o.c_star_beta))?;
                ensure(el <= 1e-5, || format!("{tag}: dE/dlambda {} vs FD {fd_lambda} (rel {el:.1e})", o.c_star_lambda))?;
                worst_fd = worst_fd.max(eb).max(el);

                let expected_cv = -beta * beta * o.c_star_beta;
                ensure(
                    o.specific_heat >= 0.0 && (o.specific_heat - expected_cv).abs() <= 1e-12 * expected_cv.abs().max(1.0),
                    || format!("{tag}: specific heat {} vs -beta^2 c*_beta {expected_cv}", o.specific_heat),
                )?;
            }
        }
        let hot = thermal(opts, &s, 0.0, 0.5)?;
        let want = f64::from(n + 1).ln();
        ensure((hot.entropy - want).abs() <= 1e-12, || format!("N={n}: S(beta=0) = {}", hot.entropy))?;
        for c in critical_couplings(Multiplet::new(n).unwrap()) {
            let cold = thermal(opts, &s, 300.0, c.lambda_c)?;
            ensure((cold.entropy - 2f64.ln()).abs() <= 1e-6, || {
                format!("N={n}: S(beta=300, lambda_c={}) = {}", c.lambda_c, cold.entropy)
            })?;
        }
    }
    Ok(format!("max finite-difference rel error {worst_fd:.1e}"))
}

fn robustness(opts: &ValidationOptions) -> Result<String, String> {
    let s = spectrum(32);
    let lambdas = uniform_grid(0.0, 2.0, 81).unwrap();
    let mut count = 0;
    for beta in [0.0, 1e-3, 1.0, 10.0, 100.0, 1e3, 5e3, 1e4] {
        for &lambda in &lambdas {
            let lz = log_partition(&s, beta, lambda).map_err(|e| e.to_string())?;
            let o = thermal(opts, &s, beta, lambda)?;
            let scalars = [
                lz,
                o.log_z,
                o.mean_energy,
                o.energy_variance,
                o.c_star_beta,
                o.c_star_lambda,
                o.specific_heat,
                o.entropy,
            ];
            ensure(scalars.iter().chain(&o.occupations).all(|x| x.is_finite()), || {
                format!("non-finite observable at beta={beta} lambda={lambda}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} (beta, lambda) points finite at N=32"))
}

fn determinism(_: &ValidationOptions) -> Result<String, String> {
    let cfg = RunConfig {
        n_particles: 8,
        e_gap: 1.0,
        beta: Some(uniform_grid(0.5, 110.0, 12).unwrap()),
        lambda: Some(uniform_grid(0.0, 1.4, 200).unwrap()),
        method: Method::All,
        format: Format::Csv,
        out: None,
        threshold: None,
        grid_points: None,
    };
    let render = || -> Result<Vec<u8>, String> {
        let mut buf = Vec::new();
        crate::cli::cmd_sweep(&cfg, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let (a, b) = (render()?, render()?);
    ensure(a == b, || "two sweeps differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}
