//! Limits along an ε-ladder.
//!
//! Richardson extrapolation (polynomial in ε through the last three rungs)
//! is tried first; Aitken's Δ² handles ε^ρ approach with unknown ρ. Sequences
//! whose increments stop shrinking are reported as divergent.

use serde::Serialize;

/// Default ladder for boundary limits.
pub const DEFAULT_LADDER: [f64; 6] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

/// Longer ladder used for atom masses, where convergence can be like √ε.
pub const ATOM_LADDER: [f64; 9] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStatus {
    Converged,
    Unsettled,
    Diverged,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Limit {
    pub value: f64,
    pub residual: f64,
    pub status: LimitStatus,
}

#[derive(Debug, Clone, Copy)]
pub struct LimitTol {
    pub abs: f64,
    pub rel: f64,
}

impl Default for LimitTol {
    fn default() -> Self {
        LimitTol { abs: 1e-8, rel: 1e-6 }
    }
}

impl LimitTol {
    fn at(&self, v: f64) -> f64 {
        self.abs + self.rel * v.abs()
    }
}

// Neville evaluation at 0 of the interpolating polynomial.
fn poly_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut p = y.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    p[0]
}

fn aitken(s0: f64, s1: f64, s2: f64) -> f64 {
    let d1 = s2 - s1;
    let d0 = s1 - s0;
    let den = d1 - d0;
    if den == 0.0 || !den.is_finite() {
        return s2;
    }
    s2 - d1 * d1 / den
}

/// Estimate `lim_{ε→0+} v(ε)` from samples on a decreasing ladder.
pub fn ladder_limit(eps: &[f64], vals: &[f64], tol: LimitTol) -> Limit {
    let n = vals.len();
    assert_eq!(eps.len(), n);
    assert!(n >= 2, "ladder needs at least two rungs");
    let last = vals[n - 1];
    if !last.is_finite() {
        return Limit { value: last, residual: f64::INFINITY, status: LimitStatus::Diverged };
    }
    if n >= 3 {
        let d2 = vals[n - 1] - vals[n - 2];
        let d1 = vals[n - 2] - vals[n - 3];
        let growing = d2.abs() > tol.at(last) && d2.abs() >= 0.9 * d1.abs() && d1 * d2 > 0.0;
        let steady = if n >= 4 {
            let d0 = vals[n - 3] - vals[n - 4];
            d1.abs() >= 0.9 * d0.abs() && d0 * d1 > 0.0
        } else {
            true
        };
        if growing && steady {
            return Limit { value: last, residual: d2.abs(), status: LimitStatus::Diverged };
        }
    }

    let mut best: Option<Limit> = None;
    let mut consider = |value: f64, residual: f64| {
        if !value.is_finite() || !residual.is_finite() {
            return;
        }
        let status = if residual <= tol.at(value) { LimitStatus::Converged } else { LimitStatus::Unsettled };
        let cand = Limit { value, residual, status };
        best = match best {
            None => Some(cand),
            Some(b) if b.status == LimitStatus::Converged => Some(b),
            Some(b) if cand.status == LimitStatus::Converged || cand.residual < b.residual => Some(cand),
            Some(b) => Some(b),
        };
    };

    if n >= 3 {
        let r_last = poly_at_zero(&eps[n - 3..], &vals[n - 3..]);
        let r_prev = if n >= 4 {
            poly_at_zero(&eps[n - 4..n - 1], &vals[n - 4..n - 1])
        } else {
            poly_at_zero(&eps[n - 2..], &vals[n - 2..])
        };
        consider(r_last, (r_last - r_prev).abs());
        let a_last = aitken(vals[n - 3], vals[n - 2], vals[n - 1]);
        let a_prev = if n >= 4 { aitken(vals[n - 4], vals[n - 3], vals[n - 2]) } else { vals[n - 1] };
        consider(a_last, (a_last - a_prev).abs());
    }
    consider(last, (last - vals[n - 2]).abs());
    best.unwrap_or(Limit { value: last, residual: f64::INFINITY, status: LimitStatus::Unsettled })
}
