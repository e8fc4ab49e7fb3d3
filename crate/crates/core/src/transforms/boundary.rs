//! Boundary values on the real axis via ε-ladders.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::{cauchy_from_f, Role, TransformHandle};
use crate::error::{Error, Result};
use crate::limits::{ladder_limit, Limit, LimitStatus, LimitTol, ATOM_LADDER, DEFAULT_LADDER};
use crate::measure_model::Atom;
use crate::optim::{golden_max, linspace};
use crate::sd_analysis::KProfile;

/// Masses below this are reported as no atom.
pub const ATOM_THRESHOLD: f64 = 1e-8;
/// k-values above this count as inside the Lévy support.
pub const LEVY_SUPPORT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Ok,
    /// Extrapolation residual above tolerance (support endpoint nearby).
    Unsettled,
    /// Ladder values blow up: atom or Lévy-atom candidate.
    Divergent,
    /// The transform itself failed to evaluate.
    Failed,
}

impl PointFlag {
    pub fn is_ok(self) -> bool {
        self == PointFlag::Ok
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::Unsettled => "unsettled",
            PointFlag::Divergent => "divergent",
            PointFlag::Failed => "failed",
        }
    }

    fn from_status(s: LimitStatus) -> Self {
        match s {
            LimitStatus::Converged => PointFlag::Ok,
            LimitStatus::Unsettled => PointFlag::Unsettled,
            LimitStatus::Diverged => PointFlag::Divergent,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryOptions {
    pub ladder: Vec<f64>,
    pub tol: LimitTol,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        BoundaryOptions { ladder: DEFAULT_LADDER.to_vec(), tol: LimitTol::default() }
    }
}

/// Sampled boundary limits with per-point residual and flag.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub flags: Vec<PointFlag>,
    pub epsilon_ladder: Vec<f64>,
}

impl BoundaryProfile {
    /// Columns x, value, residual, flag.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,value,residual,flag\n");
        for i in 0..self.grid.len() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                crate::io::num(self.grid[i]),
                crate::io::num(self.values[i]),
                crate::io::num(self.residuals[i]),
                self.flags[i].as_str()
            ));
        }
        s
    }
}

/// Extrapolated limit of `f(ε)` along the ladder.
pub fn boundary_limit(f: impl Fn(f64) -> Result<f64>, opts: &BoundaryOptions) -> Result<Limit> {
    let vals = opts.ladder.iter().map(|&e| f(e)).collect::<Result<Vec<_>>>()?;
    Ok(ladder_limit(&opts.ladder, &vals, opts.tol))
}

fn point_limit(f: impl Fn(f64) -> Result<f64>, opts: &BoundaryOptions) -> (f64, f64, PointFlag) {
    match boundary_limit(f, opts) {
        Ok(l) => (l.value, l.residual, PointFlag::from_status(l.status)),
        Err(_) => (f64::NAN, f64::INFINITY, PointFlag::Failed),
    }
}

/// Density −(1/π) lim Im G(x + iε) on `n` points of `[lo, hi]`.
pub fn stieltjes_invert(g: &TransformHandle, lo: f64, hi: f64, n: usize) -> Result<BoundaryProfile> {
    stieltjes_invert_with(g, &linspace(lo, hi, n), &BoundaryOptions::default())
}

pub fn stieltjes_invert_with(g: &TransformHandle, grid: &[f64], opts: &BoundaryOptions) -> Result<BoundaryProfile> {
    if grid.len() < 2 {
        return Err(Error::Domain("Stieltjes inversion needs at least two grid points".into()));
    }
    let g = cauchy_from_f(g)?;
    let rows: Vec<(f64, f64, PointFlag)> = grid
        .par_iter()
        .map(|&x| point_limit(|e| Ok(-g.eval(C64::new(x, e))?.im / std::f64::consts::PI), opts))
        .collect();
    Ok(BoundaryProfile {
        grid: grid.to_vec(),
        values: rows.iter().map(|r| r.0).collect(),
        residuals: rows.iter().map(|r| r.1).collect(),
        flags: rows.iter().map(|r| r.2).collect(),
        epsilon_ladder: opts.ladder.clone(),
    })
}

/// μ({x0}) from a G or F handle, 0 below [`ATOM_THRESHOLD`].
pub fn atom_mass(h: &TransformHandle, x0: f64) -> Result<f64> {
    atom_mass_with(h, x0, &ATOM_LADDER, ATOM_THRESHOLD)
}

/// Uses q(ε) = F(x0 + iε)/(iε), whose limit is 1/μ({x0}); a diverging q
/// means no atom.
pub fn atom_mass_with(h: &TransformHandle, x0: f64, ladder: &[f64], threshold: f64) -> Result<f64> {
    h.expect_role(&[Role::Cauchy, Role::Reciprocal])?;
    if !x0.is_finite() {
        return Err(Error::Domain("atom location must be finite".into()));
    }
    let q = ladder
        .iter()
        .map(|&e| {
            let z = C64::new(x0, e);
            let v = h.eval(z)?;
            let f = if h.role() == Role::Cauchy { 1.0 / v } else { v };
            Ok((f / C64::new(0.0, e)).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let lim = ladder_limit(ladder, &q, LimitTol { abs: 1e-9, rel: 1e-7 });
    let last = *q.last().unwrap();
    let mass = match lim.status {
        LimitStatus::Diverged => 0.0,
        LimitStatus::Converged => 1.0 / lim.value,
        LimitStatus::Unsettled if last > 1.0 / threshold => 0.0,
        LimitStatus::Unsettled if lim.residual <= 1e-3 * lim.value.abs() => 1.0 / lim.value,
        LimitStatus::Unsettled => {
            return Err(Error::NonConvergence {
                x: x0,
                detail: format!("q(ε) = F/(iε) did not settle (last {last}, residual {})", lim.residual),
            })
        }
    };
    Ok(if mass < threshold { 0.0 } else { mass })
}

/// a = −lim iε F(iε).
pub fn gaussian_component_from_f(f: &TransformHandle) -> Result<f64> {
    f.expect_role(&[Role::Reciprocal])?;
    let opts = BoundaryOptions::default();
    let lim = boundary_limit(|e| Ok(e * f.eval(C64::new(0.0, e))?.im), &opts)?;
    match lim.status {
        LimitStatus::Diverged => Err(Error::NonConvergence { x: 0.0, detail: "ε·Im F(iε) diverges".into() }),
        LimitStatus::Unsettled if lim.residual > 1e-6 => Err(Error::NonConvergence {
            x: 0.0,
            detail: format!("ε·Im F(iε) did not settle (residual {})", lim.residual),
        }),
        _ => Ok(if lim.value.abs() < ATOM_THRESHOLD { 0.0 } else { lim.value.max(0.0) }),
    }
}

/// k(x) = lim Im F(x + iε)/(π|x|) on `grid` (which must exclude 0).
pub fn k_from_f(f: &TransformHandle, grid: &[f64]) -> Result<KProfile> {
    k_from_f_with(f, grid, &BoundaryOptions::default())
}

pub fn k_from_f_with(f: &TransformHandle, grid: &[f64], opts: &BoundaryOptions) -> Result<KProfile> {
    f.expect_role(&[Role::Reciprocal])?;
    if grid.contains(&0.0) {
        return Err(Error::Domain("k-profile grid must exclude 0".into()));
    }
    let rows: Vec<(f64, f64, PointFlag)> = grid
        .par_iter()
        .map(|&x| {
            let s = std::f64::consts::PI * x.abs();
            let (v, r, flag) = point_limit(|e| Ok(f.eval(C64::new(x, e))?.im / s), opts);
            let v = if v < 0.0 && v > -(r + opts.tol.abs) { 0.0 } else { v };
            (v, r, flag)
        })
        .collect();
    KProfile::new(
        grid.to_vec(),
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
    )
}

/// Real poles r ≠ 0 of F, i.e. Lévy atoms. Returns ν-atoms (r, ρ/r²) where
/// ε·Im F(r + iε) → ρ.
pub fn levy_atom_scan(f: &TransformHandle, lo: f64, hi: f64, n: usize) -> Result<Vec<Atom>> {
    f.expect_role(&[Role::Reciprocal])?;
    let xs = linspace(lo, hi, n.max(3));
    let h = xs[1] - xs[0];
    let eps0 = 2.0 * h;
    let phi: Vec<f64> = xs
        .par_iter()
        .map(|&x| f.eval(C64::new(x, eps0)).map(|v| eps0 * v.im).unwrap_or(0.0))
        .collect();
    let peak_floor = 1e-6;
    let mut cands = Vec::new();
    for i in 0..xs.len() {
        let left = if i > 0 { phi[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < xs.len() { phi[i + 1] } else { f64::NEG_INFINITY };
        if phi[i] > peak_floor && phi[i] >= left && phi[i] > right {
            cands.push(xs[i]);
        }
    }
    let atoms: Vec<Option<Atom>> = cands
        .par_iter()
        .map(|&xc| refine_pole(f, xc, eps0))
        .collect();
    Ok(atoms.into_iter().flatten().collect())
}

fn refine_pole(f: &TransformHandle, xc: f64, eps0: f64) -> Option<Atom> {
    let mut center = xc;
    let mut width = 2.0 * eps0;
    let mut eps = eps0;
    let mut ladder = Vec::new();
    let mut vals = Vec::new();
    while eps >= 1e-9 {
        let psi = |x: f64| f.eval(C64::new(x, eps)).map(|v| eps * v.im).unwrap_or(0.0);
        let (x, m) = golden_max(psi, center - width, center + width, eps * 1e-3);
        center = x;
        ladder.push(eps);
        vals.push(m);
        width = 10.0 * eps;
        eps /= 10.0;
    }
    if ladder.len() < 3 {
        return None;
    }
    let lim = ladder_limit(&ladder, &vals, LimitTol { abs: 1e-9, rel: 1e-6 });
    if lim.status == LimitStatus::Diverged || lim.value < ATOM_THRESHOLD || center.abs() < 1e-6 {
        return None;
    }
    // A genuine pole keeps ε·Im F at its residue; smooth parts decay with ε.
    if *vals.last()? < 0.5 * lim.value {
        return None;
    }
    Some(Atom::new(center, lim.value / (center * center)))
}

#[derive(Debug, Clone, Serialize)]
pub struct CertPoint {
    pub x: f64,
    pub value: f64,
    pub pass: bool,
}

/// Numerical evidence for absolute continuity of the Lévy measure: finite
/// boundary values of Im F off the candidate set C and ε·F(x + iε) → 0 on
/// C ∖ {0}. Only finitely many points are examined; this is evidence, not proof.
#[derive(Debug, Clone, Serialize)]
pub struct AcCertificate {
    pub condition2: Vec<CertPoint>,
    pub condition3: Vec<CertPoint>,
    pub candidates: Vec<f64>,
    pub gaussian_component: f64,
    pub passed: bool,
    pub note: String,
}

pub fn levy_ac_certificate(f: &TransformHandle, probe: &[f64], candidates: &[f64]) -> Result<AcCertificate> {
    f.expect_role(&[Role::Reciprocal])?;
    let opts = BoundaryOptions::default();
    let off: Vec<f64> = probe
        .iter()
        .copied()
        .filter(|x| candidates.iter().all(|c| (x - c).abs() > 1e-9))
        .collect();
    let condition2: Vec<CertPoint> = off
        .par_iter()
        .map(|&x| match boundary_limit(|e| Ok(f.eval(C64::new(x, e))?.im), &opts) {
            Ok(l) => CertPoint {
                x,
                value: l.value,
                pass: l.status != LimitStatus::Diverged && l.value.is_finite() && l.value > -1e-8,
            },
            Err(_) => CertPoint { x, value: f64::NAN, pass: false },
        })
        .collect();
    let condition3: Vec<CertPoint> = candidates
        .iter()
        .copied()
        .filter(|&c| c != 0.0)
        .map(|c| match boundary_limit(|e| Ok(e * f.eval(C64::new(c, e))?.norm()), &opts) {
            Ok(l) => CertPoint { x: c, value: l.value, pass: l.status != LimitStatus::Diverged && l.value.abs() <= 1e-7 },
            Err(_) => CertPoint { x: c, value: f64::NAN, pass: false },
        })
        .collect();
    let gaussian_component = gaussian_component_from_f(f)?;
    let passed = condition2.iter().all(|p| p.pass) && condition3.iter().all(|p| p.pass);
    let mut note = String::from("numerical evidence on finitely many points, not a proof");
    if gaussian_component > 0.0 {
        note.push_str("; the pole of F at 0 is the Gaussian component");
    }
    Ok(AcCertificate { condition2, condition3, candidates: candidates.to_vec(), gaussian_component, passed, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mp1() -> TransformHandle {
        // F = 1/G with G(z) = (z − sqrt(z) sqrt(z − 4))/(2z)
        TransformHandle::closed(Role::Reciprocal, |z: C64| 2.0 * z / (z - z.sqrt() * (z - 4.0).sqrt()))
    }

    #[test]
    fn semicircle_density_at_zero() {
        let g = TransformHandle::closed(Role::Cauchy, |z: C64| (z - (z - 2.0).sqrt() * (z + 2.0).sqrt()) / 2.0);
        let p = stieltjes_invert(&g, -0.5, 0.5, 3).unwrap();
        assert!((p.values[1] - 1.0 / PI).abs() < 1e-7);
        assert!(p.flags.iter().all(|f| f.is_ok()));
    }

    #[test]
    fn mp_density_at_two() {
        let p = stieltjes_invert(&mp1(), 2.0, 3.0, 2).unwrap();
        assert!((p.values[0] - 1.0 / (2.0 * PI)).abs() < 1e-7, "{}", p.values[0]);
    }

    #[test]
    fn dirac_inversion_is_zero_off_the_atom() {
        let f = TransformHandle::closed(Role::Reciprocal, |z| z);
        let grid: Vec<f64> = linspace(-1.0, 1.0, 21).into_iter().filter(|x| x.abs() > 1e-12).collect();
        let p = stieltjes_invert_with(&f, &grid, &BoundaryOptions::default()).unwrap();
        assert!(p.values.iter().all(|v| v.abs() < 1e-12));
        assert!((atom_mass(&f, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(atom_mass(&f, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_components() {
        let b01 = TransformHandle::closed(Role::Reciprocal, |z: C64| z - 1.0 / z);
        assert!((gaussian_component_from_f(&b01).unwrap() - 1.0).abs() < 1e-12);
        let dirac = TransformHandle::closed(Role::Reciprocal, |z: C64| z - 0.3);
        assert_eq!(gaussian_component_from_f(&dirac).unwrap(), 0.0);
    }

    #[test]
    fn cauchy_k_profile() {
        let f = TransformHandle::closed(Role::Reciprocal, |z: C64| z + C64::i());
        let grid = [-3.0, -0.2, 0.01, 1.0, 7.0];
        let p = k_from_f(&f, &grid).unwrap();
        for (x, k) in p.grid.iter().zip(&p.k) {
            assert!((k - 1.0 / (PI * x.abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_pole_is_a_levy_atom() {
        let p = 0.3;
        let f = TransformHandle::closed(Role::Reciprocal, move |z: C64| (z * z - 1.0) / (z + 2.0 * p - 1.0));
        let atoms = levy_atom_scan(&f, -2.0, 2.0, 401).unwrap();
        assert_eq!(atoms.len(), 1, "{atoms:?}");
        let r = 1.0 - 2.0 * p;
        assert!((atoms[0].location - r).abs() < 1e-6);
        assert!((atoms[0].mass - (1.0 - r * r) / (r * r)).abs() < 1e-5);
        let b01 = TransformHandle::closed(Role::Reciprocal, |z: C64| z - 1.0 / z);
        assert!(levy_atom_scan(&b01, -2.0, 2.0, 401).unwrap().is_empty());
    }

    #[test]
    fn certificate_for_mp1_and_b01() {
        let grid: Vec<f64> = linspace(0.05, 5.0, 40);
        let c = levy_ac_certificate(&mp1(), &grid, &[0.0]).unwrap();
        assert!(c.passed);
        let b01 = TransformHandle::closed(Role::Reciprocal, |z: C64| z - 1.0 / z);
        let c = levy_ac_certificate(&b01, &[-1.0, -0.5, 0.5, 1.0], &[0.0]).unwrap();
        assert!(c.passed);
        assert!((c.gaussian_component - 1.0).abs() < 1e-12);
    }
}
