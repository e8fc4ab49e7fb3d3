mod common;

use boolsd_core::catalog;
use boolsd_core::measure_model::{dilate, pair_from_triplet, shift_classical, triplet_from_pair};
use boolsd_core::optim::linspace;
use boolsd_core::DilationFactor;
use proptest::prelude::*;

use common::{build_pair, pair_spec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pair_triplet_round_trip(spec in pair_spec()) {
        let pair = build_pair(&spec);
        let back = pair_from_triplet(&triplet_from_pair(&pair).unwrap()).unwrap();
        prop_assert!((back.b - pair.b).abs() < 1e-9, "b {} vs {}", back.b, pair.b);
        prop_assert_eq!(back.tau.atoms().len(), pair.tau.atoms().len());
        for (a, c) in back.tau.atoms().iter().zip(pair.tau.atoms()) {
            prop_assert!((a.location - c.location).abs() < 1e-15);
            prop_assert!((a.mass - c.mass).abs() < 1e-12 * (1.0 + c.mass));
        }
        // densities are compared off 0, where the profile convention k(0) = 0 applies
        for x in linspace(-5.0, 5.0, 200) {
            prop_assert!((back.tau.density_at(x) - pair.tau.density_at(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn dilation_inverts_and_keeps_mass(spec in pair_spec(), c in prop_oneof![-3.0..-0.2f64, 0.2..3.0f64]) {
        let mu = build_pair(&spec).tau;
        let d = dilate(&mu, DilationFactor::new(c).unwrap());
        let back = dilate(&d, DilationFactor::new(1.0 / c).unwrap());
        for (a, b) in back.atoms().iter().zip(mu.atoms()) {
            // x·c·(1/c) is exact up to two roundings
            prop_assert!((a.location - b.location).abs() <= 4.0 * f64::EPSILON * b.location.abs());
            prop_assert_eq!(a.mass, b.mass);
        }
        for x in linspace(-4.0, 4.0, 81) {
            prop_assert!((back.density_at(x) - mu.density_at(x)).abs() < 1e-12);
        }
        let m0 = mu.total_mass().unwrap();
        prop_assert!((d.total_mass().unwrap() - m0).abs() < 1e-10);
    }

    #[test]
    fn classical_shift_keeps_mass(spec in pair_spec(), m in -5.0..5.0f64) {
        let mu = build_pair(&spec).tau;
        let s = shift_classical(&mu, m);
        prop_assert!((s.total_mass().unwrap() - mu.total_mass().unwrap()).abs() < 1e-10);
        for x in linspace(-3.0, 3.0, 31) {
            prop_assert!((s.density_at(x + m) - mu.density_at(x)).abs() < 1e-12);
        }
    }
}

#[test]
fn normal_density_under_shift() {
    let n = catalog::normal(0.0, 1.0).unwrap().measure;
    let s = shift_classical(&n, 1.7);
    let want = catalog::normal(1.7, 1.0).unwrap().measure;
    for x in linspace(-2.0, 5.0, 10) {
        assert!((s.density_at(x) - want.density_at(x)).abs() < 1e-15);
    }
}
