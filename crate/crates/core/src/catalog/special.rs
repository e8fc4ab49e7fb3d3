//! h(z) = ∫₀^z e^{t²} dt, the Dawson function D = e^{−z²} h and the normal
//! Cauchy transform built from them.

use std::f64::consts::{FRAC_2_SQRT_PI, PI, SQRT_2};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quad::Quadrature;

/// Overflow guard on |z| for h and D.
pub const H_GUARD: f64 = 30.0;
const SERIES_RADIUS: f64 = 3.0;
/// Real h overflows past this (e^{x²} > f64::MAX near 26.6).
const REAL_SERIES_LIMIT: f64 = 26.0;

/// c = π⁻¹ √(2/π), the value of ℓ_N at 0.
pub const ELL_ZERO: f64 = 0.253_974_543_736_963_9;

fn guard(z: C64, limit: f64) -> Result<()> {
    let m = z.norm();
    if !(m <= limit) {
        return Err(Error::OutOfRange { modulus: m, limit });
    }
    Ok(())
}

fn seg_quad() -> Quadrature {
    let q = Quadrature::with_tol(1e-300, 1e-13);
    Quadrature { max_intervals: q.max_intervals * 8, ..q }
}

/// Σ z^{2n+1}/(n!(2n+1)).
fn h_series(z: C64) -> C64 {
    let z2 = z * z;
    let mut t = z;
    let mut sum = z;
    for n in 1..400 {
        t *= z2 / n as f64;
        let term = t / (2 * n + 1) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// h on ℝ. All series terms share a sign, so the sum is accurate up to the
/// overflow point.
pub fn h_real(x: f64) -> Result<f64> {
    if x.abs() > H_GUARD {
        return Err(Error::OutOfRange { modulus: x.abs(), limit: H_GUARD });
    }
    if x.abs() > REAL_SERIES_LIMIT {
        return Ok(x.signum() * f64::INFINITY);
    }
    Ok(h_series(C64::new(x, 0.0)).re)
}

/// h(z) for |z| ≤ 30.
pub fn h_eval(z: C64) -> Result<C64> {
    guard(z, H_GUARD)?;
    if z.im == 0.0 {
        return Ok(C64::new(h_real(z.re)?, 0.0));
    }
    if z.norm() <= SERIES_RADIUS {
        return Ok(h_series(z));
    }
    let z2 = z * z;
    let s = seg_quad().integrate(|s| (z2 * s * s).exp(), 0.0, 1.0)?;
    Ok(z * s)
}

/// D(x) = e^{−x²} h(x).
pub fn dawson_real(x: f64) -> f64 {
    let a = x.abs();
    if a <= 5.0 {
        return (-x * x).exp() * h_series(C64::new(x, 0.0)).re;
    }
    // x ∫₀¹ e^{x²(s²−1)} ds, peaked at s = 1.
    let v = seg_quad()
        .integrate(|s| (x * x * (s * s - 1.0)).exp(), 0.0, 1.0)
        .unwrap_or_else(|e| match e {
            Error::Quadrature { partial_re, .. } => partial_re,
            _ => f64::NAN,
        });
    x * v
}

/// Taylor expansion of D around the real point w.re, using
/// D^{(n+1)} = −2x D^{(n)} − 2n D^{(n−1)}.
fn dawson_near_axis(w: C64) -> C64 {
    let x = w.re;
    let dy = C64::new(0.0, w.im);
    let d0 = dawson_real(x);
    let d1 = 1.0 - 2.0 * x * d0;
    let mut prev = d0;
    let mut cur = d1;
    let mut sum = C64::new(d0, 0.0) + dy * d1;
    let mut pw = dy;
    // at x = 0 every other term vanishes, so wait for two small ones in a row
    let mut small = 0;
    for n in 1..80 {
        let next = -2.0 * x * cur - 2.0 * n as f64 * prev;
        pw = pw * dy / (n + 1) as f64;
        let term = pw * next;
        sum += term;
        prev = cur;
        cur = next;
        small = if term.norm() < 1e-17 * sum.norm() { small + 1 } else { 0 };
        if n >= 3 && small >= 2 {
            break;
        }
    }
    sum
}

/// Complex Dawson function.
pub fn dawson(w: C64) -> Result<C64> {
    guard(w, H_GUARD)?;
    if w.im == 0.0 {
        return Ok(C64::new(dawson_real(w.re), 0.0));
    }
    if w.im.abs() <= 0.1 && w.re.abs() <= REAL_SERIES_LIMIT {
        return Ok(dawson_near_axis(w));
    }
    if w.norm() <= SERIES_RADIUS {
        return Ok((-w * w).exp() * h_series(w));
    }
    let w2 = w * w;
    let s = seg_quad().integrate(|s| (w2 * (s * s - 1.0)).exp(), 0.0, 1.0)?;
    Ok(w * s)
}

/// Jacobi continued fraction of the standard normal: 1/(z − 1/(z − 2/(z − …))).
fn normal_cauchy_cf(z: C64) -> C64 {
    let mut t = z;
    for n in (1..=400).rev() {
        t = z - n as f64 / t;
    }
    1.0 / t
}

/// G_{N(0,1)}(z) = e^{−z²/2}(−i√(π/2) + √2 h(z/√2)) for Im z ≥ 0.
pub fn normal_cauchy(z: C64) -> Result<C64> {
    let limit = H_GUARD * SQRT_2;
    guard(z, limit)?;
    if z.im < 0.0 {
        return Err(Error::Domain(format!("normal Cauchy transform needs Im z >= 0, got {z}")));
    }
    // the closed form cancels against |e^{−z²/2}| = e^{(y²−x²)/2} away from
    // the axis and needs h far out; the fraction has converged in both places
    if z.im >= 1.5 || z.re.abs() >= 10.0 {
        return Ok(normal_cauchy_cf(z));
    }
    let gauss = (-z * z / 2.0).exp() * C64::new(0.0, -(PI / 2.0).sqrt());
    Ok(gauss + SQRT_2 * dawson(z / SQRT_2)?)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-x * x / 2.0).exp() * FRAC_2_SQRT_PI / (2.0 * SQRT_2)
}

/// g(y) = e^{−y²}(1 + (4/π) h(y)²) with first and second derivatives.
pub fn normal_g(y: f64) -> (f64, f64, f64) {
    let d = dawson_real(y);
    let ey = (y * y).exp();
    let g = (-y * y).exp() + 4.0 / PI * ey * d * d;
    let g1 = -2.0 * y * g + 8.0 / PI * ey * d;
    let g2 = -2.0 * g - 2.0 * y * g1 + 8.0 / PI * ey;
    (g, g1, g2)
}

/// f(x) = g(x/√2) with f′ and f″.
pub fn normal_f(x: f64) -> (f64, f64, f64) {
    let (g, g1, g2) = normal_g(x / SQRT_2);
    (g, g1 / SQRT_2, g2 / 2.0)
}

/// Beyond this |x| the value of ℓ_N is below 1e−290 and e^{x²/2} overflows.
const ELL_CUTOFF: f64 = 36.0;

/// ℓ_N = c/f.
pub fn normal_ell(x: f64) -> f64 {
    if x.abs() > ELL_CUTOFF {
        return 0.0;
    }
    ELL_ZERO / normal_f(x).0
}

/// ℓ_N, ℓ′_N, ℓ″_N from the closed-form derivatives of f.
pub fn normal_ell_derivs(x: f64) -> (f64, f64, f64) {
    if x.abs() > ELL_CUTOFF {
        return (0.0, 0.0, 0.0);
    }
    let (f, f1, f2) = normal_f(x);
    let l = ELL_ZERO / f;
    let l1 = -ELL_ZERO * f1 / (f * f);
    let l2 = ELL_ZERO * (2.0 * f1 * f1 - f * f2) / (f * f * f);
    (l, l1, l2)
}

/// k_N(x) = ℓ_N(x)/|x|.
pub fn normal_k(x: f64) -> f64 {
    normal_ell(x) / x.abs()
}

/// Upper bound for h on (0, ∞).
pub fn h_upper_bound(x: f64) -> f64 {
    ((x * x).exp() - 1.0) / x
}

/// Bounds ½[E ∓ √(E² − π)], E = e^{x²}/x, bracketing h(x) exactly when
/// g′(x) ≥ 0. The lower root is computed without cancellation.
pub fn h_quadratic_bounds(x: f64) -> (f64, f64) {
    let e = (x * x).exp() / x;
    let r = (e * e - PI).max(0.0).sqrt();
    (PI / (2.0 * (e + r)), 0.5 * (e + r))
}
