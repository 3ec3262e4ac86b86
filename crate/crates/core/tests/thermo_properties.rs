use proptest::prelude::*;

use pm_qpt::model::{analytic_spectrum, Spectrum};
use pm_qpt::spin_algebra::Multiplet;
use pm_qpt::thermo::{n2_closed_forms, observables};

fn spectrum(n: u32) -> Spectrum {
    analytic_spectrum(Multiplet::new(n).unwrap(), 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn generic_engine_matches_two_particle_closed_forms() {
    let s = spectrum(2);
    for beta in [0.5, 5.0, 50.0, 300.0, 600.0] {
        for xi in [0.2, 0.5, 0.8, 1.05] {
            let c = n2_closed_forms(xi, beta).unwrap();
            let o = observables(&s, beta, xi).unwrap();
            assert!(rel(o.log_z, c.z.ln()) <= 1e-10, "beta={beta} xi={xi}");
            assert!(rel(o.mean_energy, c.mean_e) <= 1e-10, "beta={beta} xi={xi}");
            assert!(rel(o.c_star_lambda, c.g_xi) <= 1e-10, "beta={beta} xi={xi}: {} vs {}", o.c_star_lambda, c.g_xi);
            // ⟨E⟩ = −∂ln Z/∂β
            assert!(rel(o.mean_energy, -c.dz_dbeta / c.z) <= 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn occupations_normalized_and_shift_invariant(
        n in 1u32..24,
        beta in 0.0f64..200.0,
        lambda in 0.0f64..2.0,
        shift in -50.0f64..50.0,
    ) {
        let s = spectrum(n);
        let o = observables(&s, beta, lambda).unwrap();
        let total: f64 = o.occupations.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(o.energy_variance >= 0.0 && o.specific_heat >= 0.0);
        prop_assert!(o.entropy >= -1e-12 && o.entropy <= f64::from(n + 1).ln() + 1e-12);

        let m = observables(&s.shifted(shift), beta, lambda).unwrap();
        let tol = |x: f64| 1e-10 * x.abs().max(1.0);
        prop_assert!((m.mean_energy - shift - o.mean_energy).abs() <= tol(o.mean_energy));
        prop_assert!((m.log_z + beta * shift - o.log_z).abs() <= tol(o.log_z));
        prop_assert!((m.entropy - o.entropy).abs() <= tol(o.entropy));
        prop_assert!((m.c_star_beta - o.c_star_beta).abs() <= tol(o.c_star_beta));
        prop_assert!((m.c_star_lambda - o.c_star_lambda).abs() <= tol(o.c_star_lambda));
    }

    #[test]
    fn mean_energy_is_minus_log_z_derivative(
        n in 1u32..12,
        beta in 0.1f64..20.0,
        lambda in 0.0f64..1.5,
    ) {
        let s = spectrum(n);
        let h = 1e-5;
        let lz = |b| observables(&s, b, lambda).unwrap().log_z;
        let fd = -(lz(beta + h) - lz(beta - h)) / (2.0 * h);
        let o = observables(&s, beta, lambda).unwrap();
        prop_assert!((fd - o.mean_energy).abs() <= 1e-6 * o.mean_energy.abs().max(1.0));
    }
}
