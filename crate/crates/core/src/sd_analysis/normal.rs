use rayon::prelude::*;
use serde::Serialize;

use super::{design_grid, unimodality_check, KProfile, Verdict, Violation, DEFAULT_TOLERANCE};
use crate::catalog::{normal_ell, normal_ell_derivs};
use crate::error::Result;
use crate::optim::{bisect, golden_min, linspace};

pub const A0_BRACKET: (f64, f64) = (-10.0, -1e-3);
const CURVE_POINTS: usize = 2000;
const FD_STEP: f64 = 1e-5;

/// p(a) = ℓ(a)/ℓ′(a) − a for ℓ = ℓ_{N(0,1)}.
pub fn normal_p(a: f64) -> f64 {
    let (l, l1, _) = normal_ell_derivs(a);
    l / l1 - a
}

/// p′(a) = −ℓ ℓ″/ℓ′².
pub fn normal_p_prime(a: f64) -> f64 {
    let (l, l1, l2) = normal_ell_derivs(a);
    -l * l2 / (l1 * l1)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalThresholdReport {
    pub a0: f64,
    #[serde(rename = "M0")]
    pub m0: f64,
    /// Every interior local minimum of p found on the bracket, refined.
    pub minima: Vec<(f64, f64)>,
    /// Sign changes of ℓ″ on the bracket.
    pub ell2_roots: Vec<f64>,
    pub p_prime_at_a0: f64,
    /// max |ℓ′ closed form − central difference| over the curve grid.
    pub derivative_check: f64,
    pub bracket: (f64, f64),
    pub p_curve: Vec<(f64, f64)>,
}

pub fn normal_threshold() -> NormalThresholdReport {
    normal_threshold_in(A0_BRACKET)
}

/// a₀ = argmin p on the bracket by golden section (interval < 1e−6),
/// cross-checked against the zeros of ℓ″.
pub fn normal_threshold_in(bracket: (f64, f64)) -> NormalThresholdReport {
    let xs = linspace(bracket.0, bracket.1, CURVE_POINTS);
    let ps: Vec<f64> = xs.par_iter().map(|&a| normal_p(a)).collect();
    let mut minima = Vec::new();
    for i in 1..xs.len() - 1 {
        if ps[i] < ps[i - 1] && ps[i] <= ps[i + 1] {
            let (a, v) = golden_min(normal_p, xs[i - 1], xs[i + 1], 1e-7);
            minima.push((a, v));
        }
    }
    minima.sort_by(|x, y| x.1.total_cmp(&y.1));
    let (a0, m0) = minima.first().copied().unwrap_or((f64::NAN, f64::NAN));

    let l2 = |a: f64| normal_ell_derivs(a).2;
    let mut ell2_roots = Vec::new();
    for w in xs.windows(2) {
        if l2(w[0]).signum() != l2(w[1]).signum() {
            if let Some(r) = bisect(l2, w[0], w[1], 1e-12) {
                ell2_roots.push(r);
            }
        }
    }
    let derivative_check = xs
        .par_iter()
        .map(|&a| {
            let fd = (normal_ell(a + FD_STEP) - normal_ell(a - FD_STEP)) / (2.0 * FD_STEP);
            (normal_ell_derivs(a).1 - fd).abs()
        })
        .reduce(|| 0.0, f64::max);
    NormalThresholdReport {
        a0,
        m0,
        minima,
        ell2_roots,
        p_prime_at_a0: normal_p_prime(a0),
        derivative_check,
        bracket,
        p_curve: xs.into_iter().zip(ps).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftVerdict {
    pub m: f64,
    pub verdict: Verdict,
    pub worst_violation: Option<Violation>,
}

/// Closed-form k of N(m, v) on a grid with geometric refinement near 0.
pub fn shifted_normal_profile(m: f64, v: f64, n_bulk: usize) -> Result<KProfile> {
    let s = v.sqrt();
    let lo = (m - 8.0 * s).min(-1.0);
    let hi = (m + 8.0 * s).max(1.0);
    let grid = design_grid((lo, hi), &[], n_bulk, 40);
    KProfile::from_ell(&grid, |t| s * normal_ell((t - m) / s))
}

/// Unimodality verdict of k_{N(m,1)} for each m.
pub fn normal_shift_scan(m_grid: &[f64]) -> Result<Vec<ShiftVerdict>> {
    m_grid
        .par_iter()
        .map(|&m| {
            let p = shifted_normal_profile(m, 1.0, 2001)?;
            let r = unimodality_check(&p, DEFAULT_TOLERANCE);
            Ok(ShiftVerdict { m, verdict: r.verdict, worst_violation: r.worst_violation })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        let r = normal_threshold();
        assert_eq!(r.minima.len(), 1, "{:?}", r.minima);
        assert!((r.a0 + 2.03).abs() < 0.05 && (r.m0 - 3.09).abs() < 0.05, "{} {}", r.a0, r.m0);
        assert!(r.p_prime_at_a0.abs() < 1e-5);
        assert_eq!(r.ell2_roots.len(), 1);
        assert!((r.ell2_roots[0] - r.a0).abs() < 1e-5);
        assert!(r.derivative_check < 1e-8);
        assert!(r.p_curve.iter().all(|&(_, p)| p >= r.m0 - 1e-9));
    }

    #[test]
    fn scan_is_symmetric() {
        let v = normal_shift_scan(&[-3.2, 3.2, -1.0, 1.0]).unwrap();
        assert_eq!(v[0].verdict, v[1].verdict);
        assert_eq!(v[2].verdict, v[3].verdict);
        assert_eq!(v[1].verdict, Verdict::Fail);
        assert_eq!(v[3].verdict, Verdict::Pass);
    }
}
