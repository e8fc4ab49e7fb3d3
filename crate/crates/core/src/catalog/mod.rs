//! Closed-form families: F, measure, k and the known SD verdicts.

pub mod special;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure_model::{Atom, Density, Interval, LevyDensity, LevyTriplet, SpectralMeasure};
use crate::optim::bisect;
use crate::quad::Quadrature;
use crate::transforms::{cauchy_integral, Role, TransformHandle};

pub use special::{
    dawson, dawson_real, h_eval, h_quadratic_bounds, h_real, h_upper_bound, normal_cauchy, normal_ell,
    normal_ell_derivs, normal_f, normal_g, normal_k, normal_pdf, ELL_ZERO,
};

/// Shift threshold M₀ of the normal family, used for `sd_expected` only.
const NORMAL_M0: f64 = 3.0865;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub constraint: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Family {
    pub id: &'static str,
    pub aliases: &'static [&'static str],
    pub params: &'static [ParamSpec],
    pub sd_condition: &'static str,
}

const fn p(name: &'static str, default: f64, constraint: &'static str) -> ParamSpec {
    ParamSpec { name, default, constraint }
}

pub const FAMILIES: &[Family] = &[
    Family { id: "dirac", aliases: &["delta"], params: &[p("c", 0.0, "real")], sd_condition: "always" },
    Family {
        id: "boolean_gaussian",
        aliases: &["bg"],
        params: &[p("gamma", 0.0, "real"), p("a", 1.0, "a >= 0")],
        sd_condition: "always",
    },
    Family { id: "bernoulli", aliases: &["bern"], params: &[], sd_condition: "always" },
    Family { id: "two_point", aliases: &[], params: &[p("p", 0.5, "0 < p < 1")], sd_condition: "p = 1/2" },
    Family {
        id: "boolean_stable",
        aliases: &["stable"],
        params: &[
            p("alpha", 1.5, "0 < alpha <= 2"),
            p("rho", 0.6, "0 <= rho <= 1 if alpha <= 1, 1 - 1/alpha <= rho <= 1/alpha if alpha > 1"),
        ],
        sd_condition: "always",
    },
    Family { id: "free_half_stable", aliases: &["fs"], params: &[], sd_condition: "never" },
    Family { id: "free_poisson", aliases: &["mp"], params: &[p("lambda", 1.0, "lambda > 0")], sd_condition: "lambda = 1" },
    Family {
        id: "semicircle",
        aliases: &["wigner"],
        params: &[p("m", 0.0, "real"), p("sigma", 1.0, "sigma > 0")],
        sd_condition: "m - 2 sigma <= 0 <= m + 2 sigma",
    },
    Family { id: "kesten", aliases: &[], params: &[p("t", 2.0, "t > 1")], sd_condition: "always" },
    Family {
        id: "fuss_catalan_boolean",
        aliases: &["fuss_catalan"],
        params: &[p("p", 1.5, "1 <= p <= 2")],
        sd_condition: "always",
    },
    Family {
        id: "cauchy_dirac_mixture",
        aliases: &["kappa"],
        params: &[p("p", 0.5, "0 <= p <= 1")],
        sd_condition: "p in {0, 1}",
    },
    Family {
        id: "normal",
        aliases: &["gauss"],
        params: &[p("m", 0.0, "real"), p("v", 1.0, "v > 0")],
        sd_condition: "m = 0; not SD for |m|/sqrt(v) > M0 = 3.0865",
    },
    Family {
        id: "remark_atom_family",
        aliases: &["remark_atom"],
        params: &[p("p", 2.0, "p > 0")],
        sd_condition: "always",
    },
    Family {
        id: "arctan_levy_family",
        aliases: &["arctan_levy", "arctan"],
        params: &[p("m", 0.0, "real")],
        sd_condition: "m <= pi/2",
    },
];

pub fn families() -> &'static [Family] {
    FAMILIES
}

/// Family by id or alias.
pub fn resolve(id: &str) -> Result<&'static Family> {
    FAMILIES
        .iter()
        .find(|f| f.id == id || f.aliases.contains(&id))
        .ok_or_else(|| Error::UnknownDistribution(id.to_string()))
}

/// A family member with its closed forms and reference data.
#[derive(Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params: BTreeMap<String, f64>,
    pub measure: SpectralMeasure,
    pub f_closed: TransformHandle,
    pub k_closed: Option<Density>,
    pub sd_expected: Option<bool>,
    pub triplet: Option<LevyTriplet>,
    /// Plotting and scanning window, always containing 0.
    pub window: (f64, f64),
    /// Where k may be nonzero.
    pub levy_support: Vec<Interval>,
    /// Candidate set C for the absolute-continuity certificate.
    pub singular_points: Vec<f64>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl CatalogEntry {
    /// `id(name=value, ...)`.
    pub fn label(&self) -> String {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.id, ps.join(", "))
    }

    pub fn param(&self, name: &str) -> f64 {
        self.params[name]
    }

    /// Closed-form k at x, 0 off the Lévy support.
    pub fn k_closed_at(&self, x: f64) -> Option<f64> {
        let k = self.k_closed.as_ref()?;
        if x == 0.0 || !self.levy_support.iter().any(|s| s.contains(x)) {
            return Some(0.0);
        }
        Some(k.eval(x))
    }
}

/// Builds an entry from an id (or alias) and named parameters; missing
/// parameters take their defaults.
pub fn entry(id: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    let fam = resolve(id)?;
    for k in params.keys() {
        if !fam.params.iter().any(|s| s.name == k) {
            let known: Vec<&str> = fam.params.iter().map(|s| s.name).collect();
            return Err(Error::Input(format!(
                "unknown parameter `{k}` for {}; expected one of [{}]",
                fam.id,
                known.join(", ")
            )));
        }
    }
    let get = |name: &str| -> f64 {
        params
            .get(name)
            .copied()
            .unwrap_or_else(|| fam.params.iter().find(|s| s.name == name).map_or(f64::NAN, |s| s.default))
    };
    match fam.id {
        "dirac" => dirac(get("c")),
        "boolean_gaussian" => boolean_gaussian(get("gamma"), get("a")),
        "bernoulli" => bernoulli(),
        "two_point" => two_point(get("p")),
        "boolean_stable" => boolean_stable(get("alpha"), get("rho")),
        "free_half_stable" => free_half_stable(),
        "free_poisson" => free_poisson(get("lambda")),
        "semicircle" => semicircle(get("m"), get("sigma")),
        "kesten" => kesten(get("t")),
        "fuss_catalan_boolean" => fuss_catalan_boolean(get("p")),
        "cauchy_dirac_mixture" => cauchy_dirac_mixture(get("p")),
        "normal" => normal(get("m"), get("v")),
        "remark_atom_family" => remark_atom_family(get("p")),
        "arctan_levy_family" => arctan_levy_family(get("m")),
        other => Err(Error::UnknownDistribution(other.to_string())),
    }
}

/// Entry with default parameters.
pub fn default_entry(id: &str) -> Result<CatalogEntry> {
    entry(id, &BTreeMap::new())
}

fn params(list: &[(&str, f64)]) -> BTreeMap<String, f64> {
    list.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn require(ok: bool, family: &str, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{family}: parameters must satisfy {constraint}")))
    }
}

fn finite(vals: &[f64]) -> bool {
    vals.iter().all(|v| v.is_finite())
}

fn with_zero(lo: f64, hi: f64, pad: f64) -> (f64, f64) {
    (lo.min(0.0) - pad, hi.max(0.0) + pad)
}

/// √(z − a)·√(z − b) with principal roots: ~ z at infinity, continuous on
/// ℂ⁺ ∪ ℝ and purely imaginary with positive part on (a, b).
fn sqrt_pair(z: C64, a: f64, b: f64) -> C64 {
    let z = if z.im == 0.0 { C64::new(z.re, 0.0) } else { z };
    (z - a).sqrt() * (z - b).sqrt()
}

/// Im F/(π|F|²) at x + i0, i.e. the density −Im G/π.
fn density_from_f(f: &TransformHandle, x: f64) -> f64 {
    match f.eval(C64::new(x, 0.0)) {
        Ok(v) if v.im == 0.0 => 0.0,
        Ok(v) => (v.im / (PI * v.norm_sqr())).max(0.0),
        Err(_) => f64::NAN,
    }
}

/// γ = lim K(iy) − ∫_{|x|>1} ℓ(x)/x dx.
fn gamma_from_drift(k_inf: f64, k: &Density, support: &[Interval]) -> Result<f64> {
    let q = Quadrature::default();
    let mut corr = 0.0;
    for s in support {
        let parts = [(s.lo, s.hi.min(-1.0)), (s.lo.max(1.0), s.hi)];
        for (lo, hi) in parts {
            if lo < hi {
                corr += q.integrate(|x: f64| x.abs() * k.eval(x) / x, lo, hi)?;
            }
        }
    }
    Ok(k_inf - corr)
}

pub fn dirac(c: f64) -> Result<CatalogEntry> {
    require(finite(&[c]), "dirac", "c finite")?;
    Ok(CatalogEntry {
        id: "dirac",
        params: params(&[("c", c)]),
        measure: SpectralMeasure::dirac(c),
        f_closed: TransformHandle::closed(Role::Reciprocal, move |z| z - c),
        k_closed: Some(Density::new(|_| 0.0)),
        sd_expected: Some(true),
        triplet: Some(LevyTriplet::gaussian_only(c, 0.0)?),
        window: with_zero(c - 1.0, c + 1.0, 0.0),
        levy_support: vec![],
        singular_points: vec![0.0],
    })
}

/// B(γ, a) with F = z − γ − a/z.
pub fn boolean_gaussian(gamma: f64, a: f64) -> Result<CatalogEntry> {
    require(finite(&[gamma, a]) && a >= 0.0, "boolean_gaussian", "a >= 0")?;
    if a == 0.0 {
        let mut e = dirac(gamma)?;
        e.id = "boolean_gaussian";
        e.params = params(&[("gamma", gamma), ("a", a)]);
        return Ok(e);
    }
    let disc = (gamma * gamma + 4.0 * a).sqrt();
    let lo = (gamma - disc) / 2.0;
    let hi = (gamma + disc) / 2.0;
    let mass = |x: f64| x * x / (x * x + a);
    let measure = SpectralMeasure::discrete(vec![Atom::new(lo, mass(lo)), Atom::new(hi, mass(hi))])?;
    Ok(CatalogEntry {
        id: "boolean_gaussian",
        params: params(&[("gamma", gamma), ("a", a)]),
        measure,
        f_closed: TransformHandle::closed(Role::Reciprocal, move |z| z - gamma - a / z),
        k_closed: Some(Density::new(|_| 0.0)),
        sd_expected: Some(true),
        triplet: Some(LevyTriplet::gaussian_only(gamma, a)?),
        window: with_zero(lo - 1.0, hi + 1.0, 0.0),
        levy_support: vec![],
        singular_points: vec![0.0],
    })
}

/// B(γ, a) from its atoms α < 0 < β: γ = α + β, a = −αβ.
pub fn boolean_gaussian_from_atoms(alpha: f64, beta: f64) -> Result<CatalogEntry> {
    require(alpha < 0.0 && beta > 0.0, "boolean_gaussian", "alpha < 0 < beta")?;
    boolean_gaussian(alpha + beta, -alpha * beta)
}

/// ½(δ₋₁ + δ₁) = B(0, 1).
pub fn bernoulli() -> Result<CatalogEntry> {
    let mut e = boolean_gaussian(0.0, 1.0)?;
    e.id = "bernoulli";
    e.params = BTreeMap::new();
    Ok(e)
}

/// p δ₁ + (1 − p) δ₋₁.
pub fn two_point(p: f64) -> Result<CatalogEntry> {
    require(p > 0.0 && p < 1.0, "two_point", "0 < p < 1")?;
    let r = 1.0 - 2.0 * p;
    let measure = SpectralMeasure::discrete(vec![Atom::new(-1.0, 1.0 - p), Atom::new(1.0, p)])?;
    let triplet = if r == 0.0 {
        LevyTriplet::gaussian_only(0.0, 1.0)?
    } else {
        // K = −r + (1 − r²)/(z − r): a Lévy atom at r.
        LevyTriplet::new(0.0, LevyDensity::zero(), vec![Atom::new(r, (1.0 - r * r) / (r * r))], -r)?
    };
    let mut singular = vec![0.0];
    if r != 0.0 {
        singular.push(r);
    }
    Ok(CatalogEntry {
        id: "two_point",
        params: params(&[("p", p)]),
        measure,
        f_closed: TransformHandle::closed(Role::Reciprocal, move |z| (z * z - 1.0) / (z - r)),
        k_closed: Some(Density::new(|_| 0.0)),
        sd_expected: Some(r == 0.0),
        triplet: Some(triplet),
        window: (-2.0, 2.0),
        levy_support: vec![],
        singular_points: singular,
    })
}

fn in_stable_domain(alpha: f64, rho: f64) -> bool {
    if alpha > 0.0 && alpha <= 1.0 {
        (0.0..=1.0).contains(&rho)
    } else if alpha > 1.0 && alpha <= 2.0 {
        rho >= 1.0 - 1.0 / alpha - 1e-15 && rho <= 1.0 / alpha + 1e-15
    } else {
        false
    }
}

// sin and cos of θ with exact zeros at multiples of π.
fn snapped_cis(theta: f64) -> C64 {
    let k = (theta / PI).round();
    if (theta - k * PI).abs() < 1e-13 {
        C64::new(if (k as i64) % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    } else {
        C64::new(theta.cos(), theta.sin())
    }
}

fn stable_f(z: C64, alpha: f64, rho: f64) -> C64 {
    let y = if z.im > 0.0 { z.im } else { 0.0 };
    let arg = y.atan2(z.re);
    let r = z.norm();
    z + z * r.powf(-alpha) * snapped_cis(alpha * (rho * PI - arg))
}

/// Boolean stable law b_{α,ρ}: η(z) = −(e^{iρπ} z)^α.
pub fn boolean_stable(alpha: f64, rho: f64) -> Result<CatalogEntry> {
    require(
        finite(&[alpha, rho]) && in_stable_domain(alpha, rho),
        "boolean_stable",
        "(alpha, rho) in A = {0 < alpha <= 1, 0 <= rho <= 1} ∪ {1 < alpha <= 2, 1 - 1/alpha <= rho <= 1/alpha}",
    )?;
    let f_closed = TransformHandle::closed(Role::Reciprocal, move |z| stable_f(z, alpha, rho));
    let sp = snapped_cis(alpha * rho * PI).im / PI;
    let sm = snapped_cis(alpha * (1.0 - rho) * PI).im / PI;
    let mut atoms = vec![];
    if (alpha * (1.0 - rho) - 1.0).abs() < 1e-13 {
        atoms.push(Atom::new(-1.0, 1.0 / alpha));
    }
    if (alpha * rho - 1.0).abs() < 1e-13 {
        atoms.push(Atom::new(1.0, 1.0 / alpha));
    }
    let mut support = vec![];
    if sm > 0.0 {
        support.push(Interval::new(f64::NEG_INFINITY, 0.0));
    }
    if sp > 0.0 {
        support.push(Interval::new(0.0, f64::INFINITY));
    }
    let measure = if support.is_empty() {
        SpectralMeasure::discrete(atoms)?
    } else {
        let fd = f_closed.clone();
        let density = Density::new(move |x| if x == 0.0 { 0.0 } else { density_from_f(&fd, x) });
        // Touching supports at 0 are one interval for the measure.
        let s = if support.len() == 2 { vec![Interval::real_line()] } else { support.clone() };
        SpectralMeasure::probability(atoms, Some(density), s)?
    };
    let k = Density::new(move |x: f64| if x > 0.0 { sp * x.powf(-alpha) } else { sm * (-x).powf(-alpha) });
    Ok(CatalogEntry {
        id: "boolean_stable",
        params: params(&[("alpha", alpha), ("rho", rho)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(true),
        triplet: None,
        window: (-20.0, 20.0),
        levy_support: support,
        singular_points: vec![0.0],
    })
}

/// Free positive ½-stable law: F(z) = (2z − 1 − √(1 − 4z))/2.
pub fn free_half_stable() -> Result<CatalogEntry> {
    let f_closed = TransformHandle::closed(Role::Reciprocal, |z: C64| {
        let z = if z.im == 0.0 { C64::new(z.re, 0.0) } else { z };
        let mut s = (1.0 - 4.0 * z).sqrt();
        // branch with Im ≤ 0 on the closed lower half-plane
        if s.im > 0.0 {
            s = s.conj();
        }
        (2.0 * z - 1.0 - s) / 2.0
    });
    let density = Density::new(|x: f64| if x <= 0.25 { 0.0 } else { (4.0 * x - 1.0).sqrt() / (2.0 * PI * x * x) });
    let measure = SpectralMeasure::probability(vec![], Some(density), vec![Interval::new(0.25, f64::INFINITY)])?;
    Ok(CatalogEntry {
        id: "free_half_stable",
        params: BTreeMap::new(),
        measure,
        f_closed,
        k_closed: Some(Density::new(|x: f64| if x <= 0.25 { 0.0 } else { (4.0 * x - 1.0).sqrt() / (2.0 * PI * x) })),
        sd_expected: Some(false),
        triplet: None,
        window: (-1.0, 20.0),
        levy_support: vec![Interval::new(0.25, f64::INFINITY)],
        singular_points: vec![0.0, 0.25],
    })
}

/// Marchenko–Pastur law MP_λ.
pub fn free_poisson(lambda: f64) -> Result<CatalogEntry> {
    require(finite(&[lambda]) && lambda > 0.0, "free_poisson", "lambda > 0")?;
    let a = (1.0 - lambda.sqrt()).powi(2);
    let b = (1.0 + lambda.sqrt()).powi(2);
    let f_closed = TransformHandle::closed(Role::Reciprocal, move |z| (z + 1.0 - lambda + sqrt_pair(z, a, b)) / 2.0);
    let density = Density::new(move |x: f64| {
        if x <= a || x >= b {
            0.0
        } else {
            ((b - x) * (x - a)).sqrt() / (2.0 * PI * x)
        }
    });
    let atoms = if lambda < 1.0 { vec![Atom::new(0.0, 1.0 - lambda)] } else { vec![] };
    let measure = SpectralMeasure::probability(atoms, Some(density.clone()), vec![Interval::new(a, b)])?;
    let levy_support = vec![Interval::new(a, b)];
    let gamma = gamma_from_drift(lambda, &density, &levy_support)?;
    let triplet = LevyTriplet::new(0.0, LevyDensity::new(density.clone(), levy_support.clone()), vec![], gamma)?;
    Ok(CatalogEntry {
        id: "free_poisson",
        params: params(&[("lambda", lambda)]),
        measure,
        f_closed,
        k_closed: Some(density),
        sd_expected: Some(lambda == 1.0),
        triplet: Some(triplet),
        window: with_zero(a, b, 1.0),
        levy_support,
        singular_points: vec![0.0, a, b],
    })
}

/// Semicircle S(m, σ²) on [m − 2σ, m + 2σ].
pub fn semicircle(m: f64, sigma: f64) -> Result<CatalogEntry> {
    require(finite(&[m, sigma]) && sigma > 0.0, "semicircle", "sigma > 0")?;
    let a = m - 2.0 * sigma;
    let b = m + 2.0 * sigma;
    let f_closed = TransformHandle::closed(Role::Reciprocal, move |z| (z - m + sqrt_pair(z, a, b)) / 2.0);
    let r2 = 4.0 * sigma * sigma;
    let density = Density::new(move |x: f64| {
        let d = r2 - (x - m) * (x - m);
        if d <= 0.0 {
            0.0
        } else {
            d.sqrt() / (2.0 * PI * sigma * sigma)
        }
    });
    let measure = SpectralMeasure::probability(vec![], Some(density), vec![Interval::new(a, b)])?;
    let k = Density::new(move |x: f64| {
        let d = r2 - (x - m) * (x - m);
        if d <= 0.0 || x == 0.0 {
            0.0
        } else {
            d.sqrt() / (2.0 * PI * x.abs())
        }
    });
    let levy_support = vec![Interval::new(a, b)];
    let gamma = gamma_from_drift(m, &k, &levy_support)?;
    let triplet = LevyTriplet::new(0.0, LevyDensity::new(k.clone(), levy_support.clone()), vec![], gamma)?;
    Ok(CatalogEntry {
        id: "semicircle",
        params: params(&[("m", m), ("sigma", sigma)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(a <= 0.0 && 0.0 <= b),
        triplet: Some(triplet),
        window: with_zero(a, b, 1.0),
        levy_support,
        singular_points: vec![0.0, a, b],
    })
}

/// Kesten law bern^{⊞t}.
pub fn kesten(t: f64) -> Result<CatalogEntry> {
    require(finite(&[t]) && t > 1.0, "kesten", "t > 1")?;
    let r = 2.0 * (t - 1.0).sqrt();
    let f_closed =
        TransformHandle::closed(Role::Reciprocal, move |z| ((t - 2.0) * z + t * sqrt_pair(z, -r, r)) / (2.0 * (t - 1.0)));
    let density = Density::new(move |x: f64| {
        if x.abs() >= r {
            0.0
        } else {
            t * (r * r - x * x).sqrt() / (2.0 * PI * (t * t - x * x))
        }
    });
    let atoms = if t < 2.0 {
        let w = (2.0 - t) / 2.0;
        vec![Atom::new(-t, w), Atom::new(t, w)]
    } else {
        vec![]
    };
    let measure = SpectralMeasure::probability(atoms, Some(density), vec![Interval::new(-r, r)])?;
    let k = Density::new(move |x: f64| {
        if x.abs() >= r || x == 0.0 {
            0.0
        } else {
            t * (r * r - x * x).sqrt() / (2.0 * PI * (t - 1.0) * x.abs())
        }
    });
    let levy_support = vec![Interval::new(-r, r)];
    let triplet = LevyTriplet::new(0.0, LevyDensity::new(k.clone(), levy_support.clone()), vec![], 0.0)?;
    let edge = r.max(t) + 1.0;
    Ok(CatalogEntry {
        id: "kesten",
        params: params(&[("t", t)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(true),
        triplet: Some(triplet),
        window: (-edge, edge),
        levy_support,
        singular_points: vec![0.0, -r, r],
    })
}

// w^p on the principal branch, with the negative real axis taken from below.
fn pow_from_below(w: C64, p: f64) -> C64 {
    let arg = if w.im == 0.0 && w.re < 0.0 { -PI } else { w.arg() };
    C64::from_polar(w.norm().powf(p), p * arg)
}

fn fuss_catalan_f(z: C64, p: f64) -> C64 {
    let z = if z.im == 0.0 { C64::new(z.re, 0.0) } else { z };
    z * (2.0 - pow_from_below(1.0 + 1.0 / z, p))
}

/// Λ_B⁻¹ of the Fuss–Catalan law on the diagonal: η(z) = (1 + z)^p − 1.
pub fn fuss_catalan_boolean(p: f64) -> Result<CatalogEntry> {
    require(finite(&[p]) && (1.0..=2.0).contains(&p), "fuss_catalan_boolean", "1 <= p <= 2")?;
    if p == 2.0 {
        let mut e = boolean_gaussian(2.0, 1.0)?;
        e.id = "fuss_catalan_boolean";
        e.params = params(&[("p", p)]);
        return Ok(e);
    }
    let f_closed = TransformHandle::closed(Role::Reciprocal, move |z: C64| fuss_catalan_f(z, p));
    let x0 = 1.0 / (2f64.powf(1.0 / p) - 1.0);
    let w0 = 1.0 / (p * (2.0 - 2f64.powf(1.0 - 1.0 / p)));
    let s = (p * PI).sin();
    let c = (p * PI).cos();
    let measure = if p == 1.0 {
        SpectralMeasure::dirac(1.0)
    } else {
        let density = Density::new(move |x: f64| {
            if x <= -1.0 || x >= 0.0 {
                return 0.0;
            }
            // 4 − 4c r^p + r^{2p} = (r^p − 2c)² + 4s², in r^{−p} for large r
            let rp = ((1.0 + x) / x).abs().powf(p);
            if rp <= 1.0 {
                s * rp / (PI * x * ((rp - 2.0 * c).powi(2) + 4.0 * s * s))
            } else {
                let q = 1.0 / rp;
                s * q / (PI * x * ((1.0 - 2.0 * c * q).powi(2) + 4.0 * s * s * q * q))
            }
        });
        // near p = 2 the density peaks sharply where |1 + 1/x|^p = 2
        let xp = -1.0 / (1.0 + 2f64.powf(1.0 / p));
        let support = vec![Interval::new(-1.0, xp), Interval::new(xp, 0.0)];
        SpectralMeasure::probability(vec![Atom::new(x0, w0)], Some(density), support)?
    };
    let k = Density::new(move |x: f64| {
        if x <= -1.0 || x >= 0.0 {
            0.0
        } else {
            -s / PI * ((1.0 + x) / -x).powf(p)
        }
    });
    let (levy_support, profile) = if p == 1.0 {
        (vec![], LevyDensity::zero())
    } else {
        (vec![Interval::new(-1.0, 0.0)], LevyDensity::new(k.clone(), vec![Interval::new(-1.0, 0.0)]))
    };
    let triplet = LevyTriplet::new(0.0, profile, vec![], p)?;
    Ok(CatalogEntry {
        id: "fuss_catalan_boolean",
        params: params(&[("p", p)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(true),
        triplet: Some(triplet),
        window: (-2.0, x0 + 1.0),
        levy_support,
        singular_points: vec![-1.0, 0.0],
    })
}

/// κ_p = p·Cauchy + (1 − p) δ₀.
pub fn cauchy_dirac_mixture(p: f64) -> Result<CatalogEntry> {
    require(finite(&[p]) && (0.0..=1.0).contains(&p), "cauchy_dirac_mixture", "0 <= p <= 1")?;
    let q = 1.0 - p;
    let f_closed = TransformHandle::closed(Role::Reciprocal, move |z| z * (z + C64::i()) / (z + C64::new(0.0, q)));
    let atoms = if q > 0.0 { vec![Atom::new(0.0, q)] } else { vec![] };
    let measure = if p > 0.0 {
        let density = Density::new(move |x: f64| p / (PI * (1.0 + x * x)));
        SpectralMeasure::probability(atoms, Some(density), vec![Interval::real_line()])?
    } else {
        SpectralMeasure::discrete(atoms)?
    };
    let k = Density::new(move |x: f64| p * x.abs() / (PI * (x * x + q * q)));
    let (levy_support, profile) = if p > 0.0 {
        (vec![Interval::real_line()], LevyDensity::new(k.clone(), vec![Interval::real_line()]))
    } else {
        (vec![], LevyDensity::zero())
    };
    Ok(CatalogEntry {
        id: "cauchy_dirac_mixture",
        params: params(&[("p", p)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(p == 0.0 || p == 1.0),
        triplet: Some(LevyTriplet::new(0.0, profile, vec![], 0.0)?),
        window: (-10.0, 10.0),
        levy_support,
        singular_points: vec![0.0],
    })
}

/// N(m, v), F(z) = √v F_N((z − m)/√v).
pub fn normal(m: f64, v: f64) -> Result<CatalogEntry> {
    require(finite(&[m, v]) && v > 0.0, "normal", "v > 0")?;
    let s = v.sqrt();
    let f_closed = TransformHandle::new(Role::Reciprocal, 0.0, move |z| Ok(s / special::normal_cauchy((z - m) / s)?));
    let density = Density::new(move |x: f64| normal_pdf((x - m) / s) / s);
    let measure = SpectralMeasure::probability(vec![], Some(density), vec![Interval::real_line()])?;
    let k = Density::new(move |t: f64| if t == 0.0 { 0.0 } else { s * normal_ell((t - m) / s) / t.abs() });
    let triplet = if m == 0.0 {
        Some(LevyTriplet::new(0.0, LevyDensity::new(k.clone(), vec![Interval::real_line()]), vec![], 0.0)?)
    } else {
        None
    };
    let ratio = m.abs() / s;
    let sd_expected = if m == 0.0 {
        Some(true)
    } else if ratio > NORMAL_M0 {
        Some(false)
    } else {
        None
    };
    Ok(CatalogEntry {
        id: "normal",
        params: params(&[("m", m), ("v", v)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected,
        triplet,
        window: with_zero(m - 8.0 * s, m + 8.0 * s, 0.0),
        levy_support: vec![Interval::real_line()],
        singular_points: vec![0.0],
    })
}

/// I(z) = ∫₀¹ s^{p−1}/(z − 1 + s) ds for Im z ≥ 0.
fn remark_i(p: f64, z: C64) -> Result<C64> {
    let g = move |s: f64| C64::new(s.powf(p - 1.0), 0.0);
    let w = (1.0 - z).conj();
    let q = Quadrature::default();
    let v = match cauchy_integral(&g, 0.0, 1.0, w, &q) {
        Err(Error::Quadrature { .. }) => {
            let finer = Quadrature { max_intervals: q.max_intervals * 8, ..q };
            cauchy_integral(&g, 0.0, 1.0, w, &finer)?
        }
        r => r?,
    };
    Ok(-v.conj())
}

/// ∫₀¹ s^{p−1}/(x − 1 + s)^power ds for x < 0 and power 1 or 2, with the
/// s^{p−1} ≈ 1 part near s = 1 integrated in closed form.
fn remark_i_real(p: f64, x: f64, power: i32) -> Result<f64> {
    let a = 1.0 - x;
    let smooth = Quadrature::default().integrate(|s: f64| (s.powf(p - 1.0) - 1.0) / (s - a).powi(power), 0.0, 1.0)?;
    let exact = if power == 1 { (-x / a).ln() } else { -1.0 / x - 1.0 / a };
    Ok(smooth + exact)
}

/// F(z) = z − b + ∫₀¹ (1 − t)^p/(t − z) dt, b = 1 − 1/p, written as
/// (z − 1)(1 + ∫₀¹ (1 − t)^{p−1}/(z − t) dt).
pub fn remark_atom_family(p: f64) -> Result<CatalogEntry> {
    require(finite(&[p]) && p > 0.0, "remark_atom_family", "p > 0")?;
    let f_closed = TransformHandle::new(Role::Reciprocal, 0.0, move |z: C64| {
        if z == C64::new(1.0, 0.0) {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok((z - 1.0) * (1.0 + remark_i(p, z)?))
    });
    // Negative atom: the root of 1 + I on (−∞, 0).
    let x0 = bisect(|x| 1.0 + remark_i_real(p, x, 1).unwrap_or(f64::NAN), -1e3, -1e-12, 1e-14)
        .ok_or_else(|| Error::NonConvergence { x: 0.0, detail: "no root of 1 + I(x) on (-1e3, 0)".into() })?;
    let di = -remark_i_real(p, x0, 2)?;
    let mut atoms = vec![Atom::new(x0, 1.0 / ((x0 - 1.0) * di))];
    if p > 1.0 {
        atoms.push(Atom::new(1.0, (p - 1.0) / p));
    }
    let fd = f_closed.clone();
    let density = Density::new(move |x| if x <= 0.0 || x >= 1.0 { 0.0 } else { density_from_f(&fd, x) });
    // No declared mass: for p ≤ 1 the density near 1 is not resolvable in
    // floating point (tail ~ 1/log at p = 1).
    let measure = SpectralMeasure::finite(atoms, Some(density), vec![Interval::new(0.0, 1.0)])?;
    let k = Density::new(move |t: f64| if t <= 0.0 || t >= 1.0 { 0.0 } else { (1.0 - t).powf(p) / t });
    let levy_support = vec![Interval::new(0.0, 1.0)];
    let triplet = LevyTriplet::new(0.0, LevyDensity::new(k.clone(), levy_support.clone()), vec![], 1.0 - 1.0 / p)?;
    Ok(CatalogEntry {
        id: "remark_atom_family",
        params: params(&[("p", p)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(true),
        triplet: Some(triplet),
        window: (x0.min(-1.0) - 0.5, 2.0),
        levy_support,
        singular_points: vec![0.0, 1.0],
    })
}

fn arctan_ell(x: f64) -> f64 {
    x.atan() + FRAC_PI_2
}

/// F for the triplet (0, ℓ(t)/|t| dt, 0) with ℓ = arctan + π/2. The
/// compensator 1_{|x|>1}/x is moved to 1_{|x|>R}/x plus a constant, with R
/// chosen away from Re z so no piece ends at the pole.
fn arctan_f0(z: C64) -> Result<C64> {
    let q = Quadrature::default();
    let r: f64 = if (z.re.abs() - 1.0).abs() < 0.25 { 2.0 } else { 1.0 };
    let inner = |x: f64| C64::new(arctan_ell(x), 0.0);
    // for |x| > R the compensated kernel 1/(z − x) + 1/x = z/(x(z − x))
    let outer = move |x: f64| z * arctan_ell(x) / x;
    let mut j = cauchy_integral(&inner, -r, r, z, &q)?
        + cauchy_integral(&outer, r, f64::INFINITY, z, &q)?
        + cauchy_integral(&outer, f64::NEG_INFINITY, -r, z, &q)?;
    if r > 1.0 {
        // ∫_{1<|x|<R} ℓ(x)/x dx = ∫_1^R 2 arctan(x)/x dx
        j += q.integrate(|x: f64| 2.0 * x.atan() / x, 1.0, r)?;
    }
    Ok(z - j)
}

/// λ ∗ δ_m where λ has triplet (0, k dt, 0), k(t) = (arctan t + π/2)/|t|.
pub fn arctan_levy_family(m: f64) -> Result<CatalogEntry> {
    require(finite(&[m]), "arctan_levy_family", "m finite")?;
    let f_closed = TransformHandle::new(Role::Reciprocal, 0.0, move |z: C64| arctan_f0(z - m));
    let fd = f_closed.clone();
    // Im F(x + i0) = π ℓ(x − m) and F(x) ~ x, so the density is ℓ(x − m)/x² far out
    let density = Density::new(move |x: f64| {
        if x.abs() > 1e6 {
            arctan_ell(x - m) / (x * x)
        } else {
            density_from_f(&fd, x)
        }
    });
    let measure = SpectralMeasure::probability(vec![], Some(density), vec![Interval::real_line()])?;
    let k = Density::new(move |t: f64| if t == 0.0 { 0.0 } else { arctan_ell(t - m) / t.abs() });
    let triplet = if m == 0.0 {
        Some(LevyTriplet::new(0.0, LevyDensity::new(k.clone(), vec![Interval::real_line()]), vec![], 0.0)?)
    } else {
        None
    };
    Ok(CatalogEntry {
        id: "arctan_levy_family",
        params: params(&[("m", m)]),
        measure,
        f_closed,
        k_closed: Some(k),
        sd_expected: Some(m <= FRAC_PI_2),
        triplet,
        window: with_zero(m - 20.0, m + 20.0, 0.0),
        levy_support: vec![Interval::real_line()],
        singular_points: vec![0.0],
    })
}
