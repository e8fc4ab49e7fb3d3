//! Boolean convolution through K-additivity, Boolean selfdecomposition
//! cofactors, and the Boolean-to-free bijection Λ_B realized on generating
//! pairs: both sides share (b, τ), with K on the Boolean side and φ on the
//! free side.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure_model::{Density, GeneratingPair, Interval, SpectralMeasure};
use crate::sd_analysis::KProfile;
use crate::transforms::{
    boundary_limit, f_from_pair, pick_integral, BoundaryOptions, PointFlag, Role, TransformHandle,
};

/// F(z) = z − K₁(z) − K₂(z).
pub fn boolean_convolve(f1: &TransformHandle, f2: &TransformHandle) -> Result<TransformHandle> {
    f1.expect_role(&[Role::Reciprocal])?;
    f2.expect_role(&[Role::Reciprocal])?;
    let (a, b) = (f1.clone(), f2.clone());
    let floor = f1.domain_floor().max(f2.domain_floor());
    Ok(TransformHandle::new(Role::Reciprocal, floor, move |z| Ok(a.eval(z)? + b.eval(z)? - z)))
}

/// F of D_c μ from F of μ: c F(z/c), reflected through the real axis when
/// c < 0.
pub fn dilate_f(f: &TransformHandle, c: f64) -> Result<TransformHandle> {
    f.expect_role(&[Role::Reciprocal])?;
    if c == 0.0 || !c.is_finite() {
        return Err(Error::DegenerateDilation);
    }
    let inner = f.clone();
    Ok(TransformHandle::new(Role::Reciprocal, f.domain_floor() * c.abs(), move |z| {
        if c > 0.0 {
            Ok(c * inner.eval(z / c)?)
        } else {
            Ok(c * inner.eval((z / c).conj())?.conj())
        }
    }))
}

/// Probe points used by [`sd_decompose`].
pub fn decompose_probes() -> Vec<C64> {
    // ±10^t for t in [−3, 1], denser near 0 where k-comparisons bite
    let mut xs = vec![0.0];
    for i in 0..=60 {
        let x = 10f64.powf(-3.0 + 4.0 * i as f64 / 60.0);
        xs.push(x);
        xs.push(-x);
    }
    let mut v = Vec::new();
    for &y in &[1e-3, 1e-2, 0.1, 1.0] {
        for &x in &xs {
            v.push(C64::new(x, y));
        }
    }
    v
}

/// Cofactor μ_c in μ = D_c μ ⊎ μ_c, i.e. K_c(z) = K(z) − c K(z/c).
///
/// Fails with [`Error::NotSelfdecomposable`] when Im K_c > 0 at a probe,
/// which is evidence that μ is not Boolean selfdecomposable.
pub fn sd_decompose(f: &TransformHandle, c: f64) -> Result<TransformHandle> {
    sd_decompose_with(f, c, &decompose_probes())
}

pub fn sd_decompose_with(f: &TransformHandle, c: f64, probes: &[C64]) -> Result<TransformHandle> {
    f.expect_role(&[Role::Reciprocal])?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("decomposition needs 0 < c < 1, got {c}")));
    }
    let inner = f.clone();
    let k = move |z: C64| -> Result<C64> { Ok(z - inner.eval(z)?) };
    let kc = move |z: C64| -> Result<C64> { Ok(k(z)? - c * k(z / c)?) };
    let cofactor = TransformHandle::new(Role::Reciprocal, f.domain_floor(), move |z| Ok(z - kc(z)?));

    let dilated = dilate_f(f, c)?;
    let recomposed = boolean_convolve(&dilated, &cofactor)?;
    let checks: Vec<Result<()>> = probes
        .par_iter()
        .map(|&z| {
            let fz = f.eval(z)?;
            let kz = z - fz;
            let kd = z - dilated.eval(z)?;
            let im_k = (kz - kd).im;
            if im_k > 1e-10 * (1.0 + kz.norm() + kd.norm()) {
                return Err(Error::NotSelfdecomposable { re: z.re, im: z.im, im_k });
            }
            let err = (recomposed.eval(z)? - fz).norm();
            if err > 1e-10 * (1.0 + fz.norm()) {
                return Err(Error::InvariantViolation(format!(
                    "recomposition error {err:e} at z = {}{:+}i",
                    z.re, z.im
                )));
            }
            Ok(())
        })
        .collect();
    // report the first failure in probe order so the outcome is deterministic
    for r in checks {
        r?;
    }
    Ok(cofactor)
}

/// Free-side transforms of Λ_B(μ): φ on ℂ⁺ and R(z) = z φ(1/z) on ℂ⁻.
#[derive(Debug, Clone)]
pub struct FreeHandle {
    pub phi: TransformHandle,
    pub r: TransformHandle,
}

/// φ from the same (b, τ) that gives the Boolean K.
pub fn bp_forward(pair: &GeneratingPair) -> Result<FreeHandle> {
    let phi = pick_integral(pair, Role::Voiculescu)?;
    let inner = phi.clone();
    let r = TransformHandle::new(Role::R, 0.0, move |z| Ok(z * inner.eval(1.0 / z)?));
    Ok(FreeHandle { phi, r })
}

/// Boolean F from a generating pair: F = z − K.
pub fn bp_inverse(pair: &GeneratingPair) -> Result<TransformHandle> {
    f_from_pair(pair)
}

pub const SOLVE_TOL: f64 = 1e-12;
pub const SOLVE_MAX_ITER: usize = 200;

fn phi_derivative(phi: &TransformHandle, w: C64) -> Result<C64> {
    // real-direction central difference keeps both nodes in ℂ⁺
    let h = 1e-4 * w.im.min(1.0) * (1.0 + w.norm()).min(10.0);
    Ok((phi.eval(w + h)? - phi.eval(w - h)?) / (2.0 * h))
}

enum Newton {
    Converged(C64),
    Stalled { residual: f64, iterations: usize },
}

fn newton(phi: &TransformHandle, z: C64, w0: C64, max_iter: usize) -> Result<Newton> {
    let tol = SOLVE_TOL * z.norm().max(1.0);
    let mut w = w0;
    let mut hw = w + phi.eval(w)? - z;
    for it in 0..max_iter {
        if hw.norm() < tol {
            return Ok(Newton::Converged(w));
        }
        let d = 1.0 + phi_derivative(phi, w)?;
        let step = -hw / d;
        if !step.is_finite() {
            return Ok(Newton::Stalled { residual: hw.norm(), iterations: it });
        }
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand = w + lambda * step;
            if cand.im > 0.0 {
                let hc = cand + phi.eval(cand)? - z;
                if hc.norm() < hw.norm() {
                    accepted = Some((cand, hc));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((cand, hc)) => {
                w = cand;
                hw = hc;
            }
            None => return Ok(Newton::Stalled { residual: hw.norm(), iterations: it }),
        }
    }
    if hw.norm() < tol {
        Ok(Newton::Converged(w))
    } else {
        Ok(Newton::Stalled { residual: hw.norm(), iterations: max_iter })
    }
}

/// Solves w + φ(w) = z for w = F_{Λ_B(μ)}(z), Im z > 0.
///
/// Damped Newton from w₀ = z; if that stalls, the imaginary part of z is
/// raised until Newton converges and then lowered back to Im z, halving the
/// step whenever a stage fails.
pub fn free_f_solve(h: &FreeHandle, z: C64) -> Result<C64> {
    if !(z.im > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("free_f_solve needs Im z > 0, got {z}")));
    }
    let fail = |residual: f64, iterations: usize| Error::Solve { re: z.re, im: z.im, residual, iterations };
    let w = match newton(&h.phi, z, z, SOLVE_MAX_ITER)? {
        Newton::Converged(w) => w,
        Newton::Stalled { residual, iterations } => {
            continuation(&h.phi, z).ok_or_else(|| fail(residual, iterations))?
        }
    };
    let slack = 1e-10 * (1.0 + w.norm());
    if w.im < z.im - slack {
        return Err(Error::InvariantViolation(format!(
            "solved F({z}) = {w} violates Im F >= Im z"
        )));
    }
    Ok(w)
}

fn continuation(phi: &TransformHandle, z: C64) -> Option<C64> {
    let mut lift = z.norm().max(1.0);
    let mut w = None;
    for _ in 0..30 {
        let zl = z + C64::new(0.0, lift);
        if let Ok(Newton::Converged(v)) = newton(phi, zl, zl, SOLVE_MAX_ITER) {
            w = Some(v);
            break;
        }
        lift *= 4.0;
    }
    let mut w = w?;
    let mut t = lift;
    let mut target = 0.0;
    for _ in 0..200 {
        let zt = z + C64::new(0.0, target);
        match newton(phi, zt, w, SOLVE_MAX_ITER) {
            Ok(Newton::Converged(v)) => {
                w = v;
                if target == 0.0 {
                    return Some(w);
                }
                t = target;
                target = 0.0;
            }
            _ => {
                target = 0.5 * (t + target);
                if (t - target) < 1e-14 * (1.0 + t) {
                    return None;
                }
            }
        }
    }
    None
}

/// F_{Λ_B(μ)} as a handle evaluating [`free_f_solve`].
pub fn free_f(h: &FreeHandle) -> TransformHandle {
    let h = h.clone();
    TransformHandle::new(Role::Reciprocal, 1e-12, move |z| free_f_solve(&h, z))
}

/// Free Lévy profile k(x) = −lim Im φ(x + iε)/(π|x|), which by the shared
/// pair equals the Boolean one.
pub fn free_levy_k(h: &FreeHandle, grid: &[f64]) -> Result<KProfile> {
    if grid.contains(&0.0) {
        return Err(Error::Domain("k-profile grid must exclude 0".into()));
    }
    let opts = BoundaryOptions::default();
    let rows: Vec<(f64, f64, PointFlag)> = grid
        .par_iter()
        .map(|&x| {
            let s = PI * x.abs();
            match boundary_limit(|e| Ok(-h.phi.eval(C64::new(x, e))?.im / s), &opts) {
                Ok(l) => {
                    let flag = match l.status {
                        crate::limits::LimitStatus::Converged => PointFlag::Ok,
                        crate::limits::LimitStatus::Unsettled => PointFlag::Unsettled,
                        crate::limits::LimitStatus::Diverged => PointFlag::Divergent,
                    };
                    let v = if l.value < 0.0 && l.value > -(l.residual + opts.tol.abs) { 0.0 } else { l.value };
                    (v, l.residual, flag)
                }
                Err(_) => (f64::NAN, f64::INFINITY, PointFlag::Failed),
            }
        })
        .collect();
    KProfile::new(
        grid.to_vec(),
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
    )
}

/// Generating pair of the free Fuss–Catalan law μ(p, p), 1 ≤ p ≤ 2, read off
/// φ(z) = z(1 + 1/z)^p − z: τ has density x|1 + 1/x|^p sin(pπ)/(π(1 + x²))
/// on (−1, 0) and b = Re φ(i).
pub fn fuss_catalan_free_pair(p: f64) -> Result<GeneratingPair> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!("fuss_catalan_free_pair: 1 <= p <= 2, got {p}")));
    }
    let i = C64::i();
    let phi_i = i * (1.0 - i).powf(p) - i;
    if p == 1.0 {
        return GeneratingPair::new(phi_i.re, SpectralMeasure::zero());
    }
    if p == 2.0 {
        return GeneratingPair::new(phi_i.re, SpectralMeasure::discrete(vec![crate::Atom::new(0.0, 1.0)])?);
    }
    let s = (p * PI).sin();
    let density = Density::new(move |x: f64| {
        if x <= -1.0 || x >= 0.0 {
            return 0.0;
        }
        x * ((1.0 + x) / x).abs().powf(p) * s / (PI * (1.0 + x * x))
    });
    let tau = SpectralMeasure::finite(vec![], Some(density), vec![Interval::new(-1.0, 0.0)])?;
    GeneratingPair::new(phi_i.re, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::transforms::{atom_mass, eta};

    fn dirac_f(a: f64) -> TransformHandle {
        TransformHandle::closed(Role::Reciprocal, move |z| z - a)
    }

    #[test]
    fn diracs_add() {
        let f = boolean_convolve(&dirac_f(1.0), &dirac_f(2.0)).unwrap();
        let z = C64::new(0.3, 0.7);
        assert!((f.eval(z).unwrap() - (z - 3.0)).norm() < 1e-15);
    }

    #[test]
    fn bernoulli_square() {
        let b = catalog::bernoulli().unwrap().f_closed;
        let f = boolean_convolve(&b, &b).unwrap();
        let r = 2f64.sqrt();
        assert!((atom_mass(&f, r).unwrap() - 0.5).abs() < 1e-8);
        assert!((atom_mass(&f, -r).unwrap() - 0.5).abs() < 1e-8);
        assert_eq!(atom_mass(&f, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_dilation_reflects() {
        let f = dilate_f(&dirac_f(1.5), -2.0).unwrap();
        let z = C64::new(0.2, 0.9);
        assert!((f.eval(z).unwrap() - (z + 3.0)).norm() < 1e-14);
    }

    #[test]
    fn decompose_examples() {
        let cof = sd_decompose(&dirac_f(2.0), 0.3).unwrap();
        let z = C64::new(-0.4, 0.5);
        assert!((cof.eval(z).unwrap() - (z - 1.4)).norm() < 1e-14);

        let bg = catalog::boolean_gaussian(0.0, 1.0).unwrap().f_closed;
        let cof = sd_decompose(&bg, 0.5).unwrap();
        let e = eta(&cof).unwrap();
        let w = C64::new(0.3, -0.8);
        assert!((e.eval(w).unwrap() - 0.75 * w * w).norm() < 1e-14);

        let mp2 = catalog::free_poisson(2.0).unwrap().f_closed;
        assert!(matches!(sd_decompose(&mp2, 0.5), Err(Error::NotSelfdecomposable { .. })));
        assert!(sd_decompose(&bg, 1.0).is_err());
    }

    #[test]
    fn dirac_is_fixed_by_bijection() {
        let pair = GeneratingPair::new(0.7, SpectralMeasure::zero()).unwrap();
        let h = bp_forward(&pair).unwrap();
        let z = C64::new(1.0, 0.4);
        assert!((free_f_solve(&h, z).unwrap() - (z - 0.7)).norm() < 1e-12);
    }

    #[test]
    fn bernoulli_goes_to_semicircle() {
        let pair = GeneratingPair::new(0.0, SpectralMeasure::discrete(vec![crate::Atom::new(0.0, 1.0)]).unwrap())
            .unwrap();
        let h = bp_forward(&pair).unwrap();
        for &z in &[C64::new(0.0, 1.0), C64::new(1.2, 1e-6), C64::new(-3.0, 1e-3)] {
            let w = free_f_solve(&h, z).unwrap();
            // F of S(0,1) solves w + 1/w = z with Im w ≥ Im z
            assert!((w + 1.0 / w - z).norm() < 1e-11);
        }
        let w = free_f_solve(&h, C64::new(0.0, 1.0)).unwrap();
        assert!((w.im - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-11);
    }

    #[test]
    fn continuation_fallback_matches_direct() {
        let pair = GeneratingPair::new(0.0, SpectralMeasure::discrete(vec![crate::Atom::new(0.0, 1.0)]).unwrap())
            .unwrap();
        let h = bp_forward(&pair).unwrap();
        let z = C64::new(0.5, 1e-4);
        let direct = free_f_solve(&h, z).unwrap();
        let cont = continuation(&h.phi, z).unwrap();
        assert!((direct - cont).norm() < 1e-10);
    }

    #[test]
    fn fuss_catalan_pair() {
        let pair = fuss_catalan_free_pair(1.5).unwrap();
        let phi = pick_integral(&pair, Role::Voiculescu).unwrap();
        for &z in &[C64::new(0.4, 0.3), C64::new(-2.0, 1.0), C64::new(0.0, 5.0)] {
            let want = z * (1.0 + 1.0 / z).powf(1.5) - z;
            assert!((phi.eval(z).unwrap() - want).norm() < 1e-9, "{z}");
        }
    }
}
