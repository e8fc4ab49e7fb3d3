use rayon::prelude::*;
use serde::Serialize;

use super::KProfile;
use crate::error::{Error, Result};

/// Relative level below which differences of ℓ count as noise.
const FLAT_TOL: f64 = 1e-9;

/// Profile of λ ∗ δ_m from that of λ: ℓ_new(t) = ℓ(t − m) on the translated
/// grid. Refused for m ≠ 0 when λ has a Gaussian component, since the shifted
/// law is then never selfdecomposable.
pub fn shift_profile(profile: &KProfile, m: f64, gaussian_component: f64) -> Result<KProfile> {
    if m == 0.0 {
        return Ok(profile.clone());
    }
    if gaussian_component > 0.0 {
        return Err(Error::GaussianComponent { a: gaussian_component });
    }
    let mut grid = Vec::with_capacity(profile.len());
    let mut k = Vec::with_capacity(profile.len());
    let mut residuals = Vec::with_capacity(profile.len());
    let mut flags = Vec::with_capacity(profile.len());
    for i in 0..profile.len() {
        let t = profile.grid[i] + m;
        if t == 0.0 {
            continue;
        }
        grid.push(t);
        k.push(profile.ell[i] / t.abs());
        residuals.push(profile.residuals[i] * profile.grid[i].abs() / t.abs());
        flags.push(profile.flags[i]);
    }
    KProfile::new(grid, k, residuals, flags)
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftThresholdReport {
    /// λ ∗ δ_m fails for m above this.
    pub m_plus: f64,
    /// λ ∗ δ_m fails for m below this.
    pub m_minus: f64,
    pub witness_plus: Option<(f64, f64)>,
    pub witness_minus: Option<(f64, f64)>,
    pub flat: bool,
}

/// Bounds over grid pairs:
/// M₊ = inf_{a<b, ℓ(a)<ℓ(b)} (bℓ(a) − aℓ(b))/(ℓ(b) − ℓ(a)),
/// M₋ = sup_{c<d, ℓ(c)>ℓ(d)} (cℓ(d) − dℓ(c))/(ℓ(c) − ℓ(d)).
pub fn shift_threshold(profile: &KProfile) -> ShiftThresholdReport {
    let pts: Vec<(f64, f64)> = profile
        .grid
        .iter()
        .zip(&profile.ell)
        .filter(|(x, l)| x.is_finite() && l.is_finite())
        .map(|(x, l)| (*x, *l))
        .collect();
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    let noise = FLAT_TOL * (1.0 + scale);
    let flat = pts.iter().all(|p| (p.1 - pts[0].1).abs() <= noise);
    if flat {
        return ShiftThresholdReport {
            m_plus: f64::INFINITY,
            m_minus: f64::NEG_INFINITY,
            witness_plus: None,
            witness_minus: None,
            flat: true,
        };
    }
    let rows: Vec<((f64, Option<(f64, f64)>), (f64, Option<(f64, f64)>))> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let (a, la) = pts[i];
            let mut plus = (f64::INFINITY, None);
            let mut minus = (f64::NEG_INFINITY, None);
            for &(b, lb) in &pts[i + 1..] {
                let d = lb - la;
                if d > noise {
                    let v = (b * la - a * lb) / d;
                    if v < plus.0 {
                        plus = (v, Some((a, b)));
                    }
                } else if -d > noise {
                    let v = (a * lb - b * la) / (la - lb);
                    if v > minus.0 {
                        minus = (v, Some((a, b)));
                    }
                }
            }
            (plus, minus)
        })
        .collect();
    let mut plus = (f64::INFINITY, None);
    let mut minus = (f64::NEG_INFINITY, None);
    for (p, m) in rows {
        if p.0 < plus.0 {
            plus = p;
        }
        if m.0 > minus.0 {
            minus = m;
        }
    }
    ShiftThresholdReport { m_plus: plus.0, m_minus: minus.0, witness_plus: plus.1, witness_minus: minus.1, flat: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::linspace;
    use std::f64::consts::PI;

    #[test]
    fn two_point_arithmetic() {
        let p = KProfile::from_ell(&[-1.0, 1e-3, 1.0], |x| if x > 0.5 { 2.0 } else { 1.0 }).unwrap();
        let r = shift_threshold(&p);
        // the pair (0.001, 1): (1·1 − 0.001·2)/(2 − 1)
        assert!((r.m_plus - 0.998).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn cauchy_is_flat() {
        let g: Vec<f64> = linspace(-10.0, 10.0, 300).into_iter().filter(|x| *x != 0.0).collect();
        let r = shift_threshold(&KProfile::from_ell(&g, |_| 1.0 / PI).unwrap());
        assert!(r.flat && r.m_plus.is_infinite() && r.m_minus.is_infinite());
        let z = shift_threshold(&KProfile::from_ell(&g, |_| 0.0).unwrap());
        assert!(z.flat);
    }

    #[test]
    fn shift_identity_and_gaussian_refusal() {
        let g = [-1.0, 1.0, 2.0];
        let p = KProfile::from_ell(&g, |_| 1.0).unwrap();
        assert_eq!(shift_profile(&p, 0.0, 0.0).unwrap().k, p.k);
        assert!(matches!(shift_profile(&p, 1.0, 0.5), Err(Error::GaussianComponent { .. })));
        let s = shift_profile(&p, 1.0, 0.0).unwrap();
        assert_eq!(s.grid, vec![2.0, 3.0]);
        assert_eq!(s.ell, vec![1.0, 1.0]);
    }
}
