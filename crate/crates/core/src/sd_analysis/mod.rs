//! Boolean selfdecomposability: k-profiles, the unimodality test, the atom
//! census, shift thresholds and the normal-family threshold.

mod census;
mod normal;
mod profile;
mod shift;
mod unimodality;

use num_complex::Complex64 as C64;
use serde::Serialize;

pub use census::{atom_census, atom_census_in, certify_sd, AtomCensus, CENSUS_POINTS};
pub use normal::{
    normal_p, normal_p_prime, normal_shift_scan, normal_threshold, normal_threshold_in, shifted_normal_profile,
    NormalThresholdReport, ShiftVerdict, A0_BRACKET,
};
pub use profile::KProfile;
pub use shift::{shift_profile, shift_threshold, ShiftThresholdReport};
pub use unimodality::{unimodality_check, UnimodalityReport, Verdict, Violation, DEFAULT_TOLERANCE, MIN_POINTS_PER_SIDE};

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::measure_model::{Atom, Density, Interval, SpectralMeasure};
use crate::optim::{geomspace, linspace};
use crate::transforms::{
    f_transform_of_measure, k_from_f_with, levy_ac_certificate, levy_atom_scan, AcCertificate, BoundaryOptions,
    Role, TransformHandle,
};

/// Innermost geometric grid point.
pub const GEO_FLOOR: f64 = 1e-4;
const CERT_PROBES: usize = 41;

/// Uniform points over `window`, geometric points on both sides of 0 down to
/// [`GEO_FLOOR`], and a pair of points around each breakpoint. Excludes 0.
pub fn design_grid(window: (f64, f64), breakpoints: &[f64], n_bulk: usize, n_geo: usize) -> Vec<f64> {
    let (lo, hi) = window;
    let mut g = linspace(lo, hi, n_bulk.max(2));
    if n_geo > 1 {
        let top = 0.5f64.max(GEO_FLOOR * 10.0);
        for x in geomspace(GEO_FLOOR, top, n_geo) {
            g.push(x);
            g.push(-x);
        }
    }
    for &b in breakpoints {
        if b != 0.0 && b.is_finite() {
            let d = 1e-3 * (1.0 + b.abs());
            g.push(b - d);
            g.push(b + d);
        }
    }
    g.retain(|&x| x != 0.0 && x >= lo && x <= hi);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// A measure given through its F-transform plus the hints needed to sample it.
#[derive(Debug, Clone)]
pub struct SdProblem {
    pub label: String,
    pub f: TransformHandle,
    pub k_closed: Option<Density>,
    pub levy_support: Vec<Interval>,
    pub window: (f64, f64),
    pub breakpoints: Vec<f64>,
    /// Candidate set for the absolute-continuity certificate.
    pub candidates: Vec<f64>,
    pub expected: Option<bool>,
}

impl SdProblem {
    pub fn from_entry(e: &CatalogEntry) -> Self {
        let mut breakpoints = e.singular_points.clone();
        for s in &e.levy_support {
            breakpoints.extend([s.lo, s.hi].into_iter().filter(|x| x.is_finite()));
        }
        SdProblem {
            label: e.label(),
            f: e.f_closed.clone(),
            k_closed: e.k_closed.clone(),
            levy_support: e.levy_support.clone(),
            window: e.window,
            breakpoints,
            candidates: e.singular_points.clone(),
            expected: e.sd_expected,
        }
    }

    /// From an explicit measure; F by quadrature.
    pub fn from_measure(label: &str, m: &SpectralMeasure) -> Self {
        let hull = m.hull().unwrap_or(Interval::new(-1.0, 1.0));
        let (lo, hi) = (hull.lo.max(-50.0), hull.hi.min(50.0));
        let pad = 0.25 * (hi - lo).max(1.0);
        let mut breakpoints: Vec<f64> = m.atoms().iter().map(|a| a.location).collect();
        for s in m.support() {
            breakpoints.extend([s.lo, s.hi].into_iter().filter(|x| x.is_finite()));
        }
        SdProblem {
            label: label.to_string(),
            f: f_transform_of_measure(m),
            k_closed: None,
            levy_support: vec![Interval::real_line()],
            window: (lo.min(0.0) - pad, hi.max(0.0) + pad),
            breakpoints,
            candidates: vec![0.0],
            expected: None,
        }
    }

    /// From a bare F-transform.
    pub fn from_f(label: &str, f: TransformHandle, window: (f64, f64)) -> Result<Self> {
        f.expect_role(&[Role::Reciprocal])?;
        Ok(SdProblem {
            label: label.to_string(),
            f,
            k_closed: None,
            levy_support: vec![Interval::real_line()],
            window: (window.0.min(-1e-3), window.1.max(1e-3)),
            breakpoints: vec![],
            candidates: vec![0.0],
            expected: None,
        })
    }

    /// D_c μ for c > 0: F_c(z) = c F(z/c), k_c(x) = k(x/c).
    pub fn dilated(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("dilation factor must be positive, got {c}")));
        }
        let f0 = self.f.clone();
        let f = TransformHandle::new(Role::Reciprocal, self.f.domain_floor() * c, move |z: C64| Ok(c * f0.eval(z / c)?));
        let k_closed = self.k_closed.clone().map(|k| Density::new(move |x| k.eval(x / c)));
        Ok(SdProblem {
            label: format!("D_{c}({})", self.label),
            f,
            k_closed,
            levy_support: self.levy_support.iter().map(|s| Interval::new(c * s.lo, c * s.hi)).collect(),
            window: (c * self.window.0, c * self.window.1),
            breakpoints: self.breakpoints.iter().map(|b| c * b).collect(),
            candidates: self.candidates.iter().map(|b| c * b).collect(),
            expected: self.expected,
        })
    }

    /// μ ⊎ δ_a: F − a, same k.
    pub fn boolean_shifted(&self, a: f64) -> Self {
        let f0 = self.f.clone();
        let f = TransformHandle::new(Role::Reciprocal, self.f.domain_floor(), move |z: C64| Ok(f0.eval(z)? - a));
        SdProblem { label: format!("{} ⊎ δ_{a}", self.label), f, ..self.clone() }
    }

    fn k_closed_at(&self, k: &Density, x: f64) -> f64 {
        if self.levy_support.iter().any(|s| s.contains(x)) {
            k.eval(x)
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdOptions {
    pub tolerance: f64,
    pub n_bulk: usize,
    pub n_geo: usize,
    /// Sample the closed-form k instead of recovering it from F.
    pub use_closed_k: bool,
    pub boundary: BoundaryOptions,
    pub scan_points: usize,
    /// Run the atom census on passing measures.
    pub census: bool,
    /// Explicit grid; overrides the designed one.
    pub grid: Option<Vec<f64>>,
}

impl Default for SdOptions {
    fn default() -> Self {
        SdOptions {
            tolerance: DEFAULT_TOLERANCE,
            n_bulk: 801,
            n_geo: 30,
            use_closed_k: false,
            boundary: BoundaryOptions::default(),
            scan_points: 2001,
            census: true,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SdReport {
    pub label: String,
    pub verdict: Verdict,
    pub reason: String,
    pub gaussian_component: f64,
    pub levy_atoms: Vec<Atom>,
    pub unimodality: UnimodalityReport,
    pub certificate: AcCertificate,
    pub census: Option<AtomCensus>,
    pub expected: Option<bool>,
    #[serde(skip)]
    pub profile: KProfile,
}

impl SdReport {
    /// None when no reference verdict is known or the verdict is inconclusive.
    pub fn matches_expected(&self) -> Option<bool> {
        let exp = self.expected?;
        match self.verdict {
            Verdict::Pass => Some(exp),
            Verdict::Fail => Some(!exp),
            Verdict::Inconclusive => None,
        }
    }
}

/// μ ∈ L(⊎) iff the Lévy measure is absolutely continuous and k is unimodal
/// with mode 0. A Gaussian component is allowed.
pub fn check_boolean_sd(problem: &SdProblem, opts: &SdOptions) -> Result<SdReport> {
    let grid = match &opts.grid {
        Some(g) => {
            let mut g: Vec<f64> = g.iter().copied().filter(|&x| x != 0.0).collect();
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        }
        None => design_grid(problem.window, &problem.breakpoints, opts.n_bulk, opts.n_geo),
    };
    let profile = match (&problem.k_closed, opts.use_closed_k) {
        (Some(k), true) => KProfile::from_fn(&grid, |x| problem.k_closed_at(k, x))?,
        _ => k_from_f_with(&problem.f, &grid, &opts.boundary)?,
    };
    let (lo, hi) = problem.window;
    let levy_atoms = levy_atom_scan(&problem.f, lo, hi, opts.scan_points)?;
    let probe: Vec<f64> = linspace(lo, hi, CERT_PROBES).into_iter().filter(|&x| x != 0.0).collect();
    let mut candidates = problem.candidates.clone();
    candidates.extend(levy_atoms.iter().map(|a| a.location));
    let certificate = levy_ac_certificate(&problem.f, &probe, &candidates)?;
    let unimodality = unimodality_check(&profile, opts.tolerance);

    let (verdict, reason) = if !levy_atoms.is_empty() {
        let locs: Vec<String> = levy_atoms.iter().map(|a| format!("{:.6}", a.location)).collect();
        (Verdict::Fail, format!("Lévy measure has atoms at [{}]", locs.join(", ")))
    } else if !certificate.passed {
        (Verdict::Inconclusive, "absolute continuity of the Lévy measure not certified".to_string())
    } else {
        let r = match unimodality.verdict {
            Verdict::Pass => "k unimodal with mode 0".to_string(),
            _ => unimodality.note.clone(),
        };
        (unimodality.verdict, r)
    };

    let census = if verdict == Verdict::Pass && opts.census {
        let c = atom_census(&problem.f, &profile)?;
        certify_sd(&c)?;
        Some(c)
    } else {
        None
    };
    Ok(SdReport {
        label: problem.label.clone(),
        verdict,
        reason,
        gaussian_component: certificate.gaussian_component,
        levy_atoms,
        unimodality,
        certificate,
        census,
        expected: problem.expected,
        profile,
    })
}

pub fn check_entry(e: &CatalogEntry, opts: &SdOptions) -> Result<SdReport> {
    check_boolean_sd(&SdProblem::from_entry(e), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, default_entry};

    #[test]
    fn grid_shape() {
        let g = design_grid((-2.0, 3.0), &[1.0], 51, 10);
        assert!(g.iter().all(|&x| x != 0.0 && (-2.0..=3.0).contains(&x)));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let inner = g.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        assert!((inner - GEO_FLOOR).abs() < 1e-15);
        assert!(g.iter().any(|&x| x < 0.0 && x > -2.0 * GEO_FLOOR));
        assert!(g.iter().any(|&x| (x - 0.998).abs() < 1e-12));
    }

    #[test]
    fn bernoulli_is_boolean_gaussian() {
        let r = check_entry(&default_entry("bernoulli").unwrap(), &SdOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.reason);
        assert!((r.gaussian_component - 1.0).abs() < 1e-6);
        assert!(r.profile.is_zero());
    }

    #[test]
    fn skewed_two_point_has_levy_atom() {
        let r = check_entry(&catalog::two_point(0.3).unwrap(), &SdOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.levy_atoms.len(), 1);
        assert!((r.levy_atoms[0].location - 0.4).abs() < 1e-6);
    }

    #[test]
    fn cauchy_passes_with_census() {
        let r = check_entry(&catalog::cauchy_dirac_mixture(1.0).unwrap(), &SdOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.reason);
        assert_eq!(r.census.unwrap().count(), 0);
    }
}
