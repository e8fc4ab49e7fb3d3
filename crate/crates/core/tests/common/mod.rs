#![allow(dead_code)]

use boolsd_core::{Atom, Density, GeneratingPair, Interval, SpectralMeasure};
use proptest::prelude::*;

/// (b, atoms, optional bump (centre, half-width, height)).
pub type PairSpec = (f64, Vec<(f64, f64)>, Option<(f64, f64, f64)>);

pub fn pair_spec() -> impl Strategy<Value = PairSpec> {
    (
        -3.0..3.0f64,
        prop::collection::vec((-3.0..3.0f64, 0.05..1.0f64), 0..3),
        prop::option::of((-2.0..2.0f64, 0.3..2.0f64, 0.1..1.0f64)),
    )
}

/// Smooth compactly supported bump h(1 − ((x − m)/w)²)².
pub fn bump(m: f64, w: f64, h: f64) -> Density {
    Density::new(move |x: f64| {
        let u = (x - m) / w;
        if u.abs() >= 1.0 {
            0.0
        } else {
            h * (1.0 - u * u).powi(2)
        }
    })
}

pub fn build_pair(spec: &PairSpec) -> GeneratingPair {
    let (b, atoms, bump_spec) = spec;
    let mut at: Vec<Atom> = Vec::new();
    for &(x, w) in atoms {
        if at.iter().all(|a| (a.location - x).abs() > 1e-3) {
            at.push(Atom::new(x, w));
        }
    }
    let (density, support) = match bump_spec {
        Some((m, w, h)) => (Some(bump(*m, *w, *h)), vec![Interval::new(m - w, m + w)]),
        None => (None, vec![]),
    };
    GeneratingPair::new(*b, SpectralMeasure::finite(at, density, support).unwrap()).unwrap()
}
