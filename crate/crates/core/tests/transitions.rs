use pm_qpt::model::{analytic_spectrum, critical_couplings, ground_slope_one_sided, Side};
use pm_qpt::spin_algebra::Multiplet;
use pm_qpt::transitions::{detect_jumps, iso_energy_curve, plateaus, IsoEnergyPoint, Interval};
use pm_qpt::thermo::observables;

#[test]
fn jump_midpoints_average_their_plateaus() {
    for n in [2u32, 4, 8, 16] {
        let m = Multiplet::new(n).unwrap();
        let s = analytic_spectrum(m, 1.0).unwrap();
        let range = Interval::new(0.0, 1.4).unwrap();
        let jumps = detect_jumps(&s, range, 500, 0.5).unwrap();
        let analytic: Vec<f64> = critical_couplings(m).iter().map(|c| c.lambda_c).collect();
        assert_eq!(jumps.len(), analytic.len(), "N={n}");
        for (j, lc) in jumps.iter().zip(&analytic) {
            assert!((j.lambda - lc).abs() <= 1e-9, "N={n}: {} vs {lc}", j.lambda);
            assert_eq!(j.midpoint_value, 0.5 * (j.left_value + j.right_value), "N={n}");
        }
        let steps = plateaus(ground_slope_one_sided(&s, 0.0, Side::Right), &jumps);
        assert!(steps.windows(2).all(|w| w[1] < w[0]), "N={n}: {steps:?}");
        // the final plateau is the steepest level
        let last = *steps.last().unwrap();
        let lowest_slope = s.levels().iter().map(|l| l.slope).fold(f64::INFINITY, f64::min);
        assert_eq!(last, lowest_slope);
    }
}

#[test]
fn iso_energy_points_hit_their_target() {
    let s = analytic_spectrum(Multiplet::new(4).unwrap(), 1.0).unwrap();
    let target = observables(&s, 20.0, 0.6).unwrap().mean_energy;
    let betas = [5.0, 20.0, 60.0];
    let pts = iso_energy_curve(&s, target, &betas, Interval::new(0.0, 1.4).unwrap()).unwrap();
    assert_eq!(pts.len(), betas.len());
    for p in pts {
        if let IsoEnergyPoint::Solved { beta, lambda, .. } = p {
            let e = observables(&s, beta, lambda).unwrap().mean_energy;
            assert!((e - target).abs() <= 1e-9 * target.abs().max(1.0));
        }
    }
}
