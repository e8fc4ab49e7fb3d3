//! Measures on the real line and the two Boolean parametrisations:
//! generating pair (b, τ) and Lévy triplet (a, ν, γ).

mod json;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::Quadrature;

pub use json::{measure_from_json, measure_from_json_str};

/// Tolerance on declared total mass.
pub const MASS_TOL: f64 = 1e-6;

/// Samples per support interval used when validating density nonnegativity.
const VALIDATION_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(location: f64, mass: f64) -> Self {
        Atom { location, mass }
    }
}

/// Closed interval, endpoints possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn real_line() -> Self {
        Interval::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Points spread over the interval; infinite ends are reached through tan.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let (a, b) = (self.lo.atan(), self.hi.atan());
        (1..=n)
            .map(|i| {
                let t = a + (b - a) * (i as f64 - 0.5) / n as f64;
                if self.is_bounded() {
                    self.lo + (self.hi - self.lo) * (i as f64 - 0.5) / n as f64
                } else {
                    t.tan()
                }
            })
            .collect()
    }
}

/// Shared real callable.
#[derive(Clone)]
pub struct Density(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl Density {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Density(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Density(<fn>)")
    }
}

/// Finite positive measure: atoms plus an absolutely continuous part.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    atoms: Vec<Atom>,
    density: Option<Density>,
    support: Vec<Interval>,
    mass_hint: Option<f64>,
}

impl SpectralMeasure {
    /// Validates the invariants: positive distinct atoms, nonnegative sampled
    /// density, and (when declared) total mass within [`MASS_TOL`].
    pub fn new(
        atoms: Vec<Atom>,
        density: Option<Density>,
        support: Vec<Interval>,
        mass_hint: Option<f64>,
    ) -> Result<Self> {
        let m = SpectralMeasure::assemble(atoms, density, support, mass_hint)?;
        m.check_density_sign()?;
        if let Some(h) = m.mass_hint {
            // only needs to resolve MASS_TOL; heavy tails converge slowly
            let computed = match m.integrate_with(&Quadrature::with_tol(1e-10, 1e-10), |_| 1.0, &[]) {
                Err(Error::Quadrature { partial_re, error_estimate, .. }) if error_estimate < 1e-3 * MASS_TOL => {
                    partial_re
                }
                r => r?,
            };
            if (computed - h).abs() > MASS_TOL {
                return Err(Error::MassMismatch { declared: h, computed });
            }
        }
        Ok(m)
    }

    fn assemble(
        mut atoms: Vec<Atom>,
        density: Option<Density>,
        mut support: Vec<Interval>,
        mass_hint: Option<f64>,
    ) -> Result<Self> {
        for a in &atoms {
            if !(a.mass > 0.0) || !a.mass.is_finite() || !a.location.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "atom at {} has mass {}; masses must be positive and finite",
                    a.location, a.mass
                )));
            }
        }
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        if atoms.windows(2).any(|w| w[0].location == w[1].location) {
            return Err(Error::InvalidMeasure("atom locations must be distinct".into()));
        }
        if density.is_none() {
            support.clear();
        } else if support.is_empty() {
            return Err(Error::InvalidMeasure("density given without support".into()));
        }
        for s in &support {
            if !(s.lo < s.hi) {
                return Err(Error::InvalidMeasure(format!("empty support interval [{}, {}]", s.lo, s.hi)));
            }
        }
        support.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        if support.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::InvalidMeasure("support intervals overlap".into()));
        }
        Ok(SpectralMeasure { atoms, density, support, mass_hint })
    }

    fn check_density_sign(&self) -> Result<()> {
        if let Some(d) = &self.density {
            for s in &self.support {
                for x in s.sample(VALIDATION_SAMPLES) {
                    let v = d.eval(x);
                    if !(v >= -1e-12) {
                        return Err(Error::InvalidMeasure(format!("density is {v} at x = {x}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dirac(x: f64) -> Self {
        SpectralMeasure::discrete(vec![Atom::new(x, 1.0)]).expect("valid Dirac mass")
    }

    pub fn discrete(atoms: Vec<Atom>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.mass).sum();
        SpectralMeasure::new(atoms, None, vec![], Some(total))
    }

    /// Probability measure with atoms and density; mass is checked to be 1.
    pub fn probability(atoms: Vec<Atom>, density: Option<Density>, support: Vec<Interval>) -> Result<Self> {
        SpectralMeasure::new(atoms, density, support, Some(1.0))
    }

    /// Finite positive measure without a declared total.
    pub fn finite(atoms: Vec<Atom>, density: Option<Density>, support: Vec<Interval>) -> Result<Self> {
        SpectralMeasure::new(atoms, density, support, None)
    }

    pub fn zero() -> Self {
        SpectralMeasure { atoms: vec![], density: None, support: vec![], mass_hint: None }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn support(&self) -> &[Interval] {
        &self.support
    }

    pub fn mass_hint(&self) -> Option<f64> {
        self.mass_hint
    }

    /// Density value, 0 off the support.
    pub fn density_at(&self, x: f64) -> f64 {
        match &self.density {
            Some(d) if self.support.iter().any(|s| s.contains(x)) => d.eval(x),
            _ => 0.0,
        }
    }

    pub fn atom_at(&self, x: f64) -> f64 {
        self.atoms.iter().find(|a| a.location == x).map_or(0.0, |a| a.mass)
    }

    /// ∫ f dμ, splitting density integrals at 0 and at `breaks`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
        self.integrate_with(&Quadrature::default(), f, breaks)
    }

    pub fn integrate_with(&self, quad: &Quadrature, f: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
        let mut total: f64 = self.atoms.iter().map(|a| a.mass * f(a.location)).sum();
        if let Some(d) = &self.density {
            let mut pts = vec![0.0];
            pts.extend_from_slice(breaks);
            for s in &self.support {
                total += if s.is_bounded() {
                    // x = lo + w(1 − cos πt)/2 absorbs inverse square-root edges
                    let (lo, w) = (s.lo, s.hi - s.lo);
                    let tb: Vec<f64> = pts
                        .iter()
                        .filter(|&&b| b > s.lo && b < s.hi)
                        .map(|&b| (1.0 - 2.0 * (b - lo) / w).acos() / PI)
                        .collect();
                    let g = |t: f64| {
                        let x = lo + 0.5 * w * (1.0 - (PI * t).cos());
                        d.eval(x) * f(x) * 0.5 * w * PI * (PI * t).sin()
                    };
                    quad.integrate_with_breaks(g, 0.0, 1.0, &tb)?
                } else {
                    quad.integrate_with_breaks(|x| d.eval(x) * f(x), s.lo, s.hi, &pts)?
                };
            }
        }
        Ok(total)
    }

    pub fn total_mass(&self) -> Result<f64> {
        self.integrate(|_| 1.0, &[])
    }

    /// Smallest interval containing atoms and support.
    pub fn hull(&self) -> Option<Interval> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.location);
            hi = hi.max(a.location);
        }
        for s in &self.support {
            lo = lo.min(s.lo);
            hi = hi.max(s.hi);
        }
        (lo <= hi).then_some(Interval::new(lo, hi))
    }

    /// Multiply every mass by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("mass scale must be positive, got {s}")));
        }
        let atoms = self.atoms.iter().map(|a| Atom::new(a.location, a.mass * s)).collect();
        let density = self.density.clone().map(|d| Density::new(move |x| s * d.eval(x)));
        Ok(SpectralMeasure {
            atoms,
            density,
            support: self.support.clone(),
            mass_hint: self.mass_hint.map(|m| m * s),
        })
    }
}

/// Push-forward scale factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationFactor(f64);

impl DilationFactor {
    pub fn new(c: f64) -> Result<Self> {
        if c == 0.0 {
            return Err(Error::DegenerateDilation);
        }
        if !c.is_finite() {
            return Err(Error::Domain(format!("dilation factor must be finite, got {c}")));
        }
        Ok(DilationFactor(c))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// D_c μ: atoms moved to c·x, density x ↦ ρ(x/c)/|c|.
pub fn dilate(measure: &SpectralMeasure, c: DilationFactor) -> SpectralMeasure {
    let c = c.value();
    let atoms = measure.atoms.iter().map(|a| Atom::new(c * a.location, a.mass)).collect();
    let density = measure
        .density
        .clone()
        .map(|d| Density::new(move |x| d.eval(x / c) / c.abs()));
    let support = measure
        .support
        .iter()
        .map(|s| {
            let (a, b) = (c * s.lo, c * s.hi);
            Interval::new(a.min(b), a.max(b))
        })
        .collect();
    SpectralMeasure::assemble(atoms, density, support, measure.mass_hint).expect("dilation keeps invariants")
}

/// μ ∗ δ_m.
pub fn shift_classical(measure: &SpectralMeasure, m: f64) -> SpectralMeasure {
    let atoms = measure.atoms.iter().map(|a| Atom::new(a.location + m, a.mass)).collect();
    let density = measure.density.clone().map(|d| Density::new(move |x| d.eval(x - m)));
    let support = measure.support.iter().map(|s| Interval::new(s.lo + m, s.hi + m)).collect();
    SpectralMeasure::assemble(atoms, density, support, measure.mass_hint).expect("shift keeps invariants")
}

/// Boolean generating pair: K(z) = b + ∫ (1 + xz)/(z − x) τ(dx).
#[derive(Debug, Clone)]
pub struct GeneratingPair {
    pub b: f64,
    pub tau: SpectralMeasure,
}

impl GeneratingPair {
    pub fn new(b: f64, tau: SpectralMeasure) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::Domain(format!("b must be finite, got {b}")));
        }
        Ok(GeneratingPair { b, tau })
    }

    /// Pair of the n-th Boolean convolution root: (b/n, τ/n).
    pub fn root(&self, n: u32) -> Result<Self> {
        let n = f64::from(n);
        GeneratingPair::new(self.b / n, self.tau.scaled(1.0 / n)?)
    }
}

/// Absolutely continuous Lévy part carried through k(x) = |x| dν/dx.
#[derive(Debug, Clone)]
pub struct LevyDensity {
    k: Option<Density>,
    support: Vec<Interval>,
}

impl LevyDensity {
    pub fn zero() -> Self {
        LevyDensity { k: None, support: vec![] }
    }

    pub fn new(k: Density, support: Vec<Interval>) -> Self {
        LevyDensity { k: Some(k), support }
    }

    pub fn is_zero(&self) -> bool {
        self.k.is_none()
    }

    pub fn support(&self) -> &[Interval] {
        &self.support
    }

    pub fn k(&self, x: f64) -> f64 {
        match &self.k {
            Some(k) if x != 0.0 && self.support.iter().any(|s| s.contains(x)) => k.eval(x),
            _ => 0.0,
        }
    }

    pub fn ell(&self, x: f64) -> f64 {
        x.abs() * self.k(x)
    }
}

/// Boolean Lévy triplet (a, ν, γ) with ν = k(x)/|x| dx + Σ atoms.
#[derive(Debug, Clone)]
pub struct LevyTriplet {
    pub gaussian: f64,
    pub profile: LevyDensity,
    pub atoms: Vec<Atom>,
    pub gamma: f64,
}

impl LevyTriplet {
    pub fn new(gaussian: f64, profile: LevyDensity, atoms: Vec<Atom>, gamma: f64) -> Result<Self> {
        let t = LevyTriplet { gaussian, profile, atoms, gamma };
        t.check()?;
        Ok(t)
    }

    pub fn gaussian_only(gamma: f64, a: f64) -> Result<Self> {
        LevyTriplet::new(a, LevyDensity::zero(), vec![], gamma)
    }

    /// Condition (T). The integrability part is only as good as the quadrature
    /// on unbounded supports.
    pub fn check(&self) -> Result<()> {
        if !(self.gaussian >= 0.0) || !self.gaussian.is_finite() {
            return Err(Error::InvalidTriplet(format!("Gaussian component must be >= 0, got {}", self.gaussian)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidTriplet("gamma must be finite".into()));
        }
        for a in &self.atoms {
            if a.location == 0.0 {
                return Err(Error::InvalidTriplet("Lévy measure charges {0}".into()));
            }
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                return Err(Error::InvalidTriplet(format!("Lévy atom at {} has mass {}", a.location, a.mass)));
            }
        }
        if let Some(k) = &self.profile.k {
            for s in &self.profile.support {
                for x in s.sample(VALIDATION_SAMPLES) {
                    let v = k.eval(x);
                    if x != 0.0 && !(v >= -1e-12) {
                        return Err(Error::InvalidTriplet(format!("k({x}) = {v} is negative")));
                    }
                }
                let q = Quadrature::with_tol(1e-8, 1e-8);
                let m = q
                    .integrate_with_breaks(
                        |x| if x == 0.0 { 0.0 } else { x.abs().min(1.0 / x.abs()) * k.eval(x) },
                        s.lo,
                        s.hi,
                        &[-1.0, 0.0, 1.0],
                    )
                    .map_err(|e| Error::InvalidTriplet(format!("∫(1∧x²)ν(dx) not certified finite: {e}")))?;
                if !m.is_finite() {
                    return Err(Error::InvalidTriplet("∫(1∧x²)ν(dx) diverges".into()));
                }
            }
        }
        Ok(())
    }
}

// ∫ x(1_{[-1,1]} − 1/(1+x²)) ν(dx) written against τ = x²/(1+x²) ν:
// the integrand becomes x on [-1,1] and −1/x outside.
fn drift_correction_tau(tau_density: &Density, support: &[Interval]) -> Result<f64> {
    let q = Quadrature::default();
    let mut total = 0.0;
    for s in support {
        total += q.integrate_with_breaks(
            |x| {
                let w = if x.abs() <= 1.0 { x } else { -1.0 / x };
                w * tau_density.eval(x)
            },
            s.lo,
            s.hi,
            &[-1.0, 0.0, 1.0],
        )?;
    }
    Ok(total)
}

fn drift_correction_atom(x: f64, nu_mass: f64) -> f64 {
    let ind = if x.abs() <= 1.0 { 1.0 } else { 0.0 };
    nu_mass * x * (ind - 1.0 / (1.0 + x * x))
}

/// (b, τ) ↦ (a, ν, γ).
pub fn triplet_from_pair(pair: &GeneratingPair) -> Result<LevyTriplet> {
    let tau = &pair.tau;
    let gaussian = tau.atom_at(0.0);
    let mut atoms = Vec::new();
    let mut gamma = pair.b;
    for a in tau.atoms() {
        if a.location != 0.0 {
            let x = a.location;
            let nu = (1.0 + x * x) / (x * x) * a.mass;
            gamma += drift_correction_atom(x, nu);
            atoms.push(Atom::new(x, nu));
        }
    }
    let profile = match tau.density() {
        Some(t) => {
            gamma += drift_correction_tau(t, tau.support())?;
            let t = t.clone();
            LevyDensity::new(
                Density::new(move |x: f64| if x == 0.0 { 0.0 } else { (1.0 + x * x) * t.eval(x) / x.abs() }),
                tau.support().to_vec(),
            )
        }
        None => LevyDensity::zero(),
    };
    LevyTriplet::new(gaussian, profile, atoms, gamma)
}

/// (a, ν, γ) ↦ (b, τ).
pub fn pair_from_triplet(triplet: &LevyTriplet) -> Result<GeneratingPair> {
    triplet.check()?;
    let mut tau_atoms = Vec::new();
    let mut b = triplet.gamma;
    if triplet.gaussian > 0.0 {
        tau_atoms.push(Atom::new(0.0, triplet.gaussian));
    }
    for a in &triplet.atoms {
        let x = a.location;
        b -= drift_correction_atom(x, a.mass);
        tau_atoms.push(Atom::new(x, x * x / (1.0 + x * x) * a.mass));
    }
    let (density, support) = match &triplet.profile.k {
        Some(k) => {
            let k = k.clone();
            let t = Density::new(move |x: f64| x.abs() * k.eval(x) / (1.0 + x * x));
            b -= drift_correction_tau(&t, &triplet.profile.support)?;
            (Some(t), triplet.profile.support.clone())
        }
        None => (None, vec![]),
    };
    let tau = SpectralMeasure::finite(tau_atoms, density, support)?;
    GeneratingPair::new(b, tau)
}
