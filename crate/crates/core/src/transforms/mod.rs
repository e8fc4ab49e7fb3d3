//! Cauchy transform G, reciprocal F = 1/G, self-energy K = z − F and
//! η(z) = z K(1/z), plus boundary-value recovery (see [`boundary`]).

pub mod boundary;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure_model::{GeneratingPair, SpectralMeasure};
use crate::quad::Quadrature;

pub use boundary::{
    atom_mass, atom_mass_with, boundary_limit, gaussian_component_from_f, k_from_f, k_from_f_with,
    levy_ac_certificate, levy_atom_scan, stieltjes_invert, stieltjes_invert_with, AcCertificate,
    BoundaryOptions, BoundaryProfile, CertPoint, PointFlag, ATOM_THRESHOLD, LEVY_SUPPORT_THRESHOLD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    /// G
    Cauchy,
    /// F = 1/G
    Reciprocal,
    /// K = z − F
    SelfEnergy,
    /// η(z) = z K(1/z), on the lower half-plane
    Eta,
    /// Voiculescu φ
    Voiculescu,
    /// R(z) = z φ(1/z)
    R,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Cauchy => "G",
            Role::Reciprocal => "F",
            Role::SelfEnergy => "K",
            Role::Eta => "eta",
            Role::Voiculescu => "phi",
            Role::R => "R",
        };
        f.write_str(s)
    }
}

type EvalFn = dyn Fn(C64) -> Result<C64> + Send + Sync;

/// An analytic map with a declared role.
#[derive(Clone)]
pub struct TransformHandle {
    role: Role,
    eval: Arc<EvalFn>,
    domain_floor: f64,
}

impl fmt::Debug for TransformHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformHandle")
            .field("role", &self.role)
            .field("domain_floor", &self.domain_floor)
            .finish()
    }
}

impl TransformHandle {
    /// Fallible backend (quadrature, Newton solves).
    pub fn new(role: Role, domain_floor: f64, f: impl Fn(C64) -> Result<C64> + Send + Sync + 'static) -> Self {
        TransformHandle { role, eval: Arc::new(f), domain_floor }
    }

    /// Closed form with a continuous boundary extension.
    pub fn closed(role: Role, f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        TransformHandle::new(role, 0.0, move |z| Ok(f(z)))
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn domain_floor(&self) -> f64 {
        self.domain_floor
    }

    #[inline]
    pub fn eval(&self, z: C64) -> Result<C64> {
        (self.eval)(z)
    }

    pub(crate) fn expect_role(&self, roles: &[Role]) -> Result<()> {
        if roles.contains(&self.role) {
            Ok(())
        } else {
            Err(Error::Role {
                expected: roles.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" or "),
                got: self.role.to_string(),
            })
        }
    }
}

/// ∫_lo^hi g(x)/(z − x) dx for Im z ≥ 0 (Im z = 0 gives the boundary value
/// from above). When Re z lies inside the interval the value g(Re z) is
/// subtracted on a window around Re z and integrated in closed form.
pub fn cauchy_integral(
    g: &(dyn Fn(f64) -> C64 + Sync),
    lo: f64,
    hi: f64,
    z: C64,
    quad: &Quadrature,
) -> Result<C64> {
    let x0 = z.re;
    let inside = x0 > lo && x0 < hi;
    if !inside || z.im >= 1.0 {
        let breaks = if inside { vec![0.0, x0] } else { vec![0.0] };
        return piece(quad, |x| g(x) / (z - x), lo, hi, &breaks);
    }
    let wl = lo.max(x0 - 1.0);
    let wh = hi.min(x0 + 1.0);
    let g0 = g(x0);
    let mut total = piece(
        quad,
        |x| {
            if x == x0 && z.im == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                (g(x) - g0) / (z - x)
            }
        },
        wl,
        wh,
        &[0.0, x0],
    )?;
    total += g0 * (cln(z - wl) - cln(z - wh));
    if wl > lo {
        total += piece(quad, |x| g(x) / (z - x), lo, wl, &[0.0])?;
    }
    if wh < hi {
        total += piece(quad, |x| g(x) / (z - x), wh, hi, &[0.0])?;
    }
    Ok(total)
}

/// Error estimate below which a non-converged piece is still used; slowly
/// decaying tails and |x|^{−s} singularities plateau just above the default
/// tolerance.
const ACCEPT_PARTIAL: f64 = 1e-8;

fn piece(quad: &Quadrature, f: impl Fn(f64) -> C64, lo: f64, hi: f64, breaks: &[f64]) -> Result<C64> {
    match quad.integrate_with_breaks(f, lo, hi, breaks) {
        Err(Error::Quadrature { partial_re, partial_im, error_estimate }) if error_estimate < ACCEPT_PARTIAL => {
            Ok(C64::new(partial_re, partial_im))
        }
        r => r,
    }
}

// Principal log with the negative real axis approached from above.
fn cln(w: C64) -> C64 {
    let w = if w.im == 0.0 { C64::new(w.re, 0.0) } else { w };
    w.ln()
}

fn with_retry<T>(mut run: impl FnMut(&Quadrature) -> Result<T>) -> Result<T> {
    let q = Quadrature::default();
    // then the end map for edge singularities of the density, then more intervals
    let fallbacks = [
        Quadrature { smooth_ends: true, ..q },
        Quadrature { max_intervals: q.max_intervals * 8, ..q },
    ];
    let mut r = run(&q);
    for f in &fallbacks {
        match r {
            Err(Error::Quadrature { .. }) => r = run(f),
            _ => break,
        }
    }
    r
}

/// G_μ(z) = ∫ μ(dx)/(z − x) for Im z ≥ 0.
pub fn cauchy(measure: &SpectralMeasure, z: C64) -> Result<C64> {
    if z.im < 0.0 || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::Domain(format!("Cauchy transform needs Im z >= 0, got {z}")));
    }
    let mut total = C64::new(0.0, 0.0);
    for a in measure.atoms() {
        total += a.mass / (z - a.location);
    }
    if let Some(d) = measure.density() {
        let g = |x: f64| C64::new(d.eval(x), 0.0);
        for s in measure.support() {
            total += with_retry(|q| cauchy_integral(&g, s.lo, s.hi, z, q))?;
        }
    }
    Ok(total)
}

/// Role-G handle evaluating [`cauchy`] by quadrature.
pub fn cauchy_handle(measure: &SpectralMeasure) -> TransformHandle {
    let m = measure.clone();
    TransformHandle::new(Role::Cauchy, 1e-12, move |z| cauchy(&m, z))
}

/// F from any of G, F, K or η.
pub fn f_transform(h: &TransformHandle) -> Result<TransformHandle> {
    h.expect_role(&[Role::Cauchy, Role::Reciprocal, Role::SelfEnergy, Role::Eta])?;
    let inner = h.clone();
    let floor = h.domain_floor;
    Ok(match h.role {
        Role::Reciprocal => inner,
        Role::Cauchy => TransformHandle::new(Role::Reciprocal, floor, move |z| Ok(1.0 / inner.eval(z)?)),
        Role::SelfEnergy => TransformHandle::new(Role::Reciprocal, floor, move |z| Ok(z - inner.eval(z)?)),
        _ => TransformHandle::new(Role::Reciprocal, floor, move |z| {
            let w = 1.0 / z;
            Ok(z * (1.0 - inner.eval(w)?))
        }),
    })
}

/// F_μ computed from the measure by quadrature.
pub fn f_transform_of_measure(measure: &SpectralMeasure) -> TransformHandle {
    f_transform(&cauchy_handle(measure)).expect("G converts to F")
}

/// G = 1/F.
pub fn cauchy_from_f(f: &TransformHandle) -> Result<TransformHandle> {
    f.expect_role(&[Role::Reciprocal, Role::Cauchy])?;
    if f.role == Role::Cauchy {
        return Ok(f.clone());
    }
    let inner = f.clone();
    Ok(TransformHandle::new(Role::Cauchy, f.domain_floor, move |z| Ok(1.0 / inner.eval(z)?)))
}

/// K = z − F.
pub fn self_energy(f: &TransformHandle) -> Result<TransformHandle> {
    f.expect_role(&[Role::Reciprocal])?;
    let inner = f.clone();
    Ok(TransformHandle::new(Role::SelfEnergy, f.domain_floor, move |z| Ok(z - inner.eval(z)?)))
}

/// η(z) = 1 − z F(1/z) for an F handle, z K(1/z) for a K handle.
pub fn eta(h: &TransformHandle) -> Result<TransformHandle> {
    h.expect_role(&[Role::Reciprocal, Role::SelfEnergy])?;
    let inner = h.clone();
    Ok(match h.role {
        Role::Reciprocal => TransformHandle::new(Role::Eta, h.domain_floor, move |z| {
            Ok(1.0 - z * inner.eval(1.0 / z)?)
        }),
        _ => TransformHandle::new(Role::Eta, h.domain_floor, move |z| Ok(z * inner.eval(1.0 / z)?)),
    })
}

/// K(z) = b + ∫ (1 + xz)/(z − x) τ(dx) = b − z τ(ℝ) + (1 + z²) G_τ(z).
/// Also serves as φ for the free side, which has the same integral form.
pub fn pick_integral(pair: &GeneratingPair, role: Role) -> Result<TransformHandle> {
    let mass = pair.tau.total_mass()?;
    let tau = pair.tau.clone();
    let b = pair.b;
    Ok(TransformHandle::new(role, 0.0, move |z| {
        if z.im < 0.0 {
            // Schwarz reflection: the integral is real on real test functions.
            let w = z.conj();
            return Ok((b - w * mass + (1.0 + w * w) * cauchy(&tau, w)?).conj());
        }
        Ok(b - z * mass + (1.0 + z * z) * cauchy(&tau, z)?)
    }))
}

/// Self-energy built from a generating pair.
pub fn k_from_pair(pair: &GeneratingPair) -> Result<TransformHandle> {
    pick_integral(pair, Role::SelfEnergy)
}

/// F built from a generating pair: F = z − K.
pub fn f_from_pair(pair: &GeneratingPair) -> Result<TransformHandle> {
    f_transform(&k_from_pair(pair)?)
}

/// Range checks of a handle on probe points in the upper half-plane (lower
/// for η and R). Returns the first violating point, if any.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub role: Role,
    pub probes: usize,
    pub violation: Option<(f64, f64)>,
}

pub fn probe_invariants(h: &TransformHandle, probes: &[C64]) -> Result<ProbeReport> {
    let mut violation = None;
    for &z in probes {
        let v = match h.role {
            Role::Eta | Role::R => h.eval(z.conj())?,
            _ => h.eval(z)?,
        };
        let slack = 1e-12 * (1.0 + v.norm() + z.norm());
        let ok = match h.role {
            Role::Cauchy => v.im < 0.0 || (v.im <= slack && v.norm() < slack),
            Role::Reciprocal => v.im >= z.im - slack,
            Role::SelfEnergy | Role::Voiculescu => v.im <= slack,
            Role::Eta | Role::R => v.is_finite(),
        };
        if !ok {
            violation = Some((z.re, z.im));
            break;
        }
    }
    Ok(ProbeReport { role: h.role, probes: probes.len(), violation })
}

/// A fixed probe grid in the upper half-plane.
pub fn default_probes() -> Vec<C64> {
    let mut v = Vec::new();
    for &y in &[0.05, 0.3, 1.0, 3.0] {
        for i in 0..9 {
            v.push(C64::new(-4.0 + i as f64, y));
        }
    }
    v
}
