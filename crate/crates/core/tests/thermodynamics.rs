use proptest::prelude::*;
use torus_core::thermo::{
    continuum_log_z, grand_potential_log, mean_particle_number, FermiSea, Statistics, ThermoState,
};

#[test]
fn sum_approaches_the_continuum_as_temperature_rises() {
    let ratio = |beta: f64| {
        let s = ThermoState::with_default_cutoffs(Statistics::Fermi, beta, 5.0, 2.0).unwrap();
        let disc = grand_potential_log(&s, 2.0).unwrap();
        assert!(disc.converged);
        (disc.value / continuum_log_z(Statistics::Fermi, beta, 5.0, 2.0).unwrap() - 1.0).abs()
    };
    let errors: Vec<f64> = [2.0, 1.0, 0.5, 0.25, 0.1].into_iter().map(ratio).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(ratio(0.01) < 0.01);
}

#[test]
fn continuum_vanishes_far_below_the_band() {
    for stats in [Statistics::Fermi, Statistics::Bose] {
        assert!(continuum_log_z(stats, 1.0, -800.0, 2.0).unwrap() < 1e-300);
    }
}

#[test]
fn fully_paired_fillings_carry_no_toroidal_dipole() {
    let sea = FermiSea::new(2.0, 3, 250).unwrap();
    let levels = sea.levels();
    for k in 1..levels.len().min(400) {
        // a filling is closed when the next level is not degenerate with
        // the last occupied one
        if levels[k].energy != levels[k - 1].energy {
            let report = sea.fill(k).unwrap();
            assert!(report.total_t3.abs() < 1e-8, "N = {k}: {}", report.total_t3);
        }
    }
}

#[test]
fn toroidization_alternates_past_the_crossover() {
    let sea = FermiSea::new(2.0, 3, 250).unwrap();
    let mut prev = sea.fill(149).unwrap().total_t3;
    let mut last_sign = 0.0;
    for k in 150..=180 {
        let t = sea.fill(k).unwrap().total_t3;
        let inc = t - prev;
        assert!(inc.abs() > 0.5, "N = {k}: increment {inc}");
        assert!(inc.signum() != last_sign);
        last_sign = inc.signum();
        prev = t;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bose_and_fermi_agree_in_the_classical_limit(beta in 0.1f64..4.0, shift in 7.0f64..20.0, a in 1.2f64..4.0) {
        let mu = -shift / beta;
        let f = mean_particle_number(&ThermoState::with_default_cutoffs(Statistics::Fermi, beta, mu, a).unwrap(), a).unwrap().value;
        let b = mean_particle_number(&ThermoState::with_default_cutoffs(Statistics::Bose, beta, mu, a).unwrap(), a).unwrap().value;
        prop_assert!((f / b - 1.0).abs() < 1e-3);
    }
}
