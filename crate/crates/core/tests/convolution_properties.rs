mod common;

use boolsd_core::catalog::{self, CatalogEntry};
use boolsd_core::convolution::{
    boolean_convolve, bp_forward, bp_inverse, dilate_f, free_levy_k, sd_decompose,
};
use boolsd_core::measure_model::pair_from_triplet;
use boolsd_core::optim::linspace;
use boolsd_core::sd_analysis::{design_grid, unimodality_check, Verdict, DEFAULT_TOLERANCE};
use boolsd_core::transforms::{eta, f_from_pair, TransformHandle};
use boolsd_core::{Density, GeneratingPair, SpectralMeasure, C64};
use proptest::prelude::*;

use common::{build_pair, pair_spec};

fn closed() -> Vec<CatalogEntry> {
    vec![
        catalog::free_poisson(1.0).unwrap(),
        catalog::semicircle(0.3, 1.2).unwrap(),
        catalog::kesten(2.0).unwrap(),
        catalog::boolean_stable(1.5, 0.6).unwrap(),
        catalog::cauchy_dirac_mixture(0.5).unwrap(),
        catalog::fuss_catalan_boolean(1.5).unwrap(),
        catalog::normal(0.0, 1.0).unwrap(),
        catalog::two_point(0.3).unwrap(),
    ]
}

fn dirac(a: f64) -> TransformHandle {
    catalog::dirac(a).unwrap().f_closed
}

/// τ₁ + τ₂ for pairs with at most one bump each.
fn sum_pair(p: &GeneratingPair, q: &GeneratingPair) -> GeneratingPair {
    let mut atoms = p.tau.atoms().to_vec();
    for a in q.tau.atoms() {
        match atoms.iter_mut().find(|b| b.location == a.location) {
            Some(b) => b.mass += a.mass,
            None => atoms.push(*a),
        }
    }
    let (pt, qt) = (p.tau.clone(), q.tau.clone());
    let mut support: Vec<_> = p.tau.support().iter().chain(q.tau.support()).copied().collect();
    support.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let merged = match support.len() {
        0 => vec![],
        _ => vec![boolsd_core::Interval::new(support[0].lo, support.iter().map(|s| s.hi).fold(f64::MIN, f64::max))],
    };
    let density = (!merged.is_empty()).then(|| Density::new(move |x| pt.density_at(x) + qt.density_at(x)));
    GeneratingPair::new(p.b + q.b, SpectralMeasure::finite(atoms, density, merged).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eta_is_additive(i in 0usize..8, j in 0usize..8, x in -3.0..3.0f64, y in 0.1..3.0f64) {
        let es = closed();
        let (f, g) = (&es[i].f_closed, &es[j].f_closed);
        let w = C64::new(x, -y);
        let s = eta(&boolean_convolve(f, g).unwrap()).unwrap().eval(w).unwrap();
        let (a, b) = (eta(f).unwrap().eval(w).unwrap(), eta(g).unwrap().eval(w).unwrap());
        prop_assert!((s - a - b).norm() <= 1e-11 * (1.0 + a.norm() + b.norm()));
    }

    #[test]
    fn convolution_is_commutative_associative_with_unit(i in 0usize..8, j in 0usize..8, k in 0usize..8,
                                                        x in -3.0..3.0f64, y in 0.01..3.0f64) {
        let es = closed();
        let (f, g, h) = (&es[i].f_closed, &es[j].f_closed, &es[k].f_closed);
        let z = C64::new(x, y);
        let fg = boolean_convolve(f, g).unwrap().eval(z).unwrap();
        let gf = boolean_convolve(g, f).unwrap().eval(z).unwrap();
        prop_assert!((fg - gf).norm() <= 1e-14 * (1.0 + fg.norm()));
        let l = boolean_convolve(&boolean_convolve(f, g).unwrap(), h).unwrap().eval(z).unwrap();
        let r = boolean_convolve(f, &boolean_convolve(g, h).unwrap()).unwrap().eval(z).unwrap();
        prop_assert!((l - r).norm() <= 1e-13 * (1.0 + l.norm()));
        let u = boolean_convolve(f, &dirac(0.0)).unwrap().eval(z).unwrap();
        prop_assert!((u - f.eval(z).unwrap()).norm() <= 1e-14 * (1.0 + u.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn boolean_roots_recompose(spec in pair_spec(), n in prop_oneof![Just(2u32), Just(5u32)],
                               x in -3.0..3.0f64, y in 0.05..2.0f64) {
        let pair = build_pair(&spec);
        let f = f_from_pair(&pair).unwrap();
        let root = f_from_pair(&pair.root(n).unwrap()).unwrap();
        let mut acc = root.clone();
        for _ in 1..n {
            acc = boolean_convolve(&acc, &root).unwrap();
        }
        let z = C64::new(x, y);
        let (a, b) = (acc.eval(z).unwrap(), f.eval(z).unwrap());
        prop_assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()), "{a} vs {b}");
    }

    #[test]
    fn phi_is_additive(p in pair_spec(), q in pair_spec(), x in -3.0..3.0f64, y in 0.05..2.0f64) {
        let (p, q) = (build_pair(&p), build_pair(&q));
        let s = sum_pair(&p, &q);
        let z = C64::new(x, y);
        let lhs = bp_forward(&s).unwrap().phi.eval(z).unwrap();
        let rhs = bp_forward(&p).unwrap().phi.eval(z).unwrap() + bp_forward(&q).unwrap().phi.eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn inverse_after_forward_is_identity(spec in pair_spec(), x in -3.0..3.0f64, y in 0.05..2.0f64) {
        let pair = build_pair(&spec);
        let z = C64::new(x, y);
        let phi = bp_forward(&pair).unwrap().phi.eval(z).unwrap();
        let k = z - bp_inverse(&pair).unwrap().eval(z).unwrap();
        prop_assert!((phi - k).norm() <= 1e-14 * (1.0 + k.norm()));
    }

    #[test]
    fn decomposition_recomposes(i in 0usize..7, c in 0.05..0.95f64) {
        let sd = [
            catalog::free_poisson(1.0).unwrap(),
            catalog::semicircle(1.5, 1.0).unwrap(),
            catalog::kesten(1.5).unwrap(),
            catalog::boolean_stable(0.8, 0.3).unwrap(),
            catalog::cauchy_dirac_mixture(1.0).unwrap(),
            catalog::fuss_catalan_boolean(1.2).unwrap(),
            catalog::boolean_gaussian(-1.0, 0.3).unwrap(),
        ];
        let f = &sd[i].f_closed;
        let cof = sd_decompose(f, c).unwrap();
        let back = boolean_convolve(&dilate_f(f, c).unwrap(), &cof).unwrap();
        for z in [C64::new(0.3, 0.2), C64::new(-2.0, 1.0), C64::new(4.0, 0.01)] {
            let (a, b) = (back.eval(z).unwrap(), f.eval(z).unwrap());
            prop_assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
        }
    }
}

#[test]
fn r_transform_is_boolean_eta_and_commutes_with_dilation() {
    let c = 2.0;
    for e in [catalog::kesten(2.0).unwrap(), catalog::free_poisson(1.0).unwrap(), catalog::semicircle(0.5, 1.0).unwrap()] {
        let pair = pair_from_triplet(e.triplet.as_ref().unwrap()).unwrap();
        let r = bp_forward(&pair).unwrap().r;
        let eta_mu = eta(&e.f_closed).unwrap();
        let eta_dc = eta(&dilate_f(&e.f_closed, c).unwrap()).unwrap();
        for w in [C64::new(0.2, -0.3), C64::new(-0.5, -1.0), C64::new(1.0, -0.05)] {
            let rw = r.eval(w).unwrap();
            assert!((rw - eta_mu.eval(w).unwrap()).norm() < 1e-8, "{}", e.label());
            // R of D_c Λ_B(μ) at w is R(cw); Λ_B(D_c μ) has R = η_{D_c μ}
            assert!((r.eval(c * w).unwrap() - eta_dc.eval(w).unwrap()).norm() < 1e-8, "{}", e.label());
        }
    }
}

#[test]
fn kesten_free_levy_profile_is_unimodal() {
    let e = catalog::kesten(2.0).unwrap();
    let pair = pair_from_triplet(e.triplet.as_ref().unwrap()).unwrap();
    let h = bp_forward(&pair).unwrap();
    let grid = design_grid((-2.5, 2.5), &[-2.0, 2.0], 201, 20);
    let p = free_levy_k(&h, &grid).unwrap();
    assert_eq!(unimodality_check(&p, DEFAULT_TOLERANCE).verdict, Verdict::Pass);
    for (x, k) in p.grid.iter().zip(&p.k) {
        if x.abs() < 1.9 {
            assert!((k - e.k_closed_at(*x).unwrap()).abs() < 1e-6, "{x}");
        }
    }
    let free_poisson_two = pair_from_triplet(catalog::free_poisson(2.0).unwrap().triplet.as_ref().unwrap()).unwrap();
    let p = free_levy_k(&bp_forward(&free_poisson_two).unwrap(), &linspace(0.05, 6.0, 120)).unwrap();
    assert_eq!(unimodality_check(&p, DEFAULT_TOLERANCE).verdict, Verdict::Fail);
}
