use boolsd_core::catalog::{self, CatalogEntry};
use boolsd_core::measure_model::pair_from_triplet;
use boolsd_core::optim::linspace;
use boolsd_core::transforms::{
    cauchy_handle, eta, self_energy, stieltjes_invert_with, BoundaryOptions, Role, TransformHandle,
};
use boolsd_core::C64;
use proptest::prelude::*;

fn entries() -> Vec<CatalogEntry> {
    vec![
        catalog::boolean_gaussian(0.5, 1.0).unwrap(),
        catalog::two_point(0.3).unwrap(),
        catalog::boolean_stable(1.5, 0.6).unwrap(),
        catalog::boolean_stable(0.7, 0.2).unwrap(),
        catalog::free_half_stable().unwrap(),
        catalog::free_poisson(0.5).unwrap(),
        catalog::semicircle(1.0, 0.7).unwrap(),
        catalog::kesten(3.0).unwrap(),
        catalog::fuss_catalan_boolean(1.3).unwrap(),
        catalog::cauchy_dirac_mixture(0.4).unwrap(),
        catalog::normal(-1.0, 0.5).unwrap(),
        catalog::remark_atom_family(1.5).unwrap(),
        catalog::arctan_levy_family(1.0).unwrap(),
    ]
}

fn in_range(h: &TransformHandle, z: C64) -> Result<(), String> {
    let v = h.eval(z).map_err(|e| e.to_string())?;
    let slack = 1e-12 * (1.0 + v.norm() + z.norm());
    let ok = match h.role() {
        Role::Cauchy => v.im < 0.0,
        Role::Reciprocal => v.im >= z.im - slack,
        Role::SelfEnergy => v.im <= slack,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{} at {z} is {v}", h.role()))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_forms_respect_ranges(x in -6.0..6.0f64, y in 1e-3..5.0f64) {
        let z = C64::new(x, y);
        for e in entries() {
            let g = boolsd_core::transforms::cauchy_from_f(&e.f_closed).unwrap();
            for h in [&g, &e.f_closed, &self_energy(&e.f_closed).unwrap()] {
                if let Err(msg) = in_range(h, z) {
                    return Err(TestCaseError::fail(format!("{}: {msg}", e.label())));
                }
            }
        }
    }

    #[test]
    fn eta_from_f_and_from_k_agree(x in -3.0..3.0f64, y in 0.05..3.0f64) {
        let w = C64::new(x, -y);
        for e in entries() {
            let a = eta(&e.f_closed).unwrap().eval(w).unwrap();
            let b = eta(&self_energy(&e.f_closed).unwrap()).unwrap().eval(w).unwrap();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()), "{}: {a} vs {b}", e.label());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quadrature_cauchy_is_in_lower_half_plane(x in -4.0..4.0f64, y in 1e-2..3.0f64) {
        let z = C64::new(x, y);
        for e in [catalog::kesten(3.0).unwrap(), catalog::normal(0.0, 1.0).unwrap(), catalog::free_poisson(0.5).unwrap()] {
            prop_assert!(in_range(&cauchy_handle(&e.measure), z).is_ok(), "{}", e.label());
        }
    }
}

#[test]
fn inversion_of_quadrature_cauchy_recovers_densities() {
    let cases = [
        (catalog::semicircle(0.0, 1.0).unwrap(), (-1.8, 1.8)),
        (catalog::free_poisson(1.0).unwrap(), (0.2, 3.8)),
        (catalog::kesten(2.0).unwrap(), (-1.5, 1.5)),
        (catalog::normal(0.0, 1.0).unwrap(), (-3.0, 3.0)),
    ];
    for (e, (lo, hi)) in cases {
        let grid = linspace(lo, hi, 13);
        let g = cauchy_handle(&e.measure);
        let p = stieltjes_invert_with(&g, &grid, &BoundaryOptions::default()).unwrap();
        for (x, v) in grid.iter().zip(&p.values) {
            let want = e.measure.density_at(*x);
            assert!((v - want).abs() < 1e-3, "{} at {x}: {v} vs {want}", e.label());
        }
    }
}

#[test]
fn self_energy_at_i_is_b_minus_i_tau_mass() {
    for e in [
        catalog::kesten(2.0).unwrap(),
        catalog::free_poisson(1.0).unwrap(),
        catalog::semicircle(0.5, 1.0).unwrap(),
        catalog::fuss_catalan_boolean(1.5).unwrap(),
        catalog::cauchy_dirac_mixture(0.5).unwrap(),
        catalog::normal(0.0, 1.0).unwrap(),
        catalog::boolean_gaussian(1.0, 0.5).unwrap(),
    ] {
        let pair = pair_from_triplet(e.triplet.as_ref().unwrap()).unwrap();
        let k = C64::i() - e.f_closed.eval(C64::i()).unwrap();
        let want = C64::new(pair.b, -pair.tau.total_mass().unwrap());
        assert!((k - want).norm() < 1e-8, "{}: {k} vs {want}", e.label());
    }
}
