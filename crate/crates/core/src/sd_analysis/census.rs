use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::KProfile;
use crate::error::{Error, Result};
use crate::measure_model::Atom;
use crate::optim::{bisect, linspace};
use crate::transforms::{atom_mass, Role, TransformHandle, ATOM_THRESHOLD};

/// Offset above the axis for the sign scan of Re F.
const SCAN_EPS: f64 = 1e-9;
pub const CENSUS_POINTS: usize = 4001;

#[derive(Debug, Clone, Serialize)]
pub struct AtomCensus {
    pub atoms: Vec<Atom>,
    pub mass_at_zero: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Atoms strictly inside (α, β) ∖ {0}.
    pub inside: Vec<Atom>,
    pub k_is_zero: bool,
    pub window: (f64, f64),
}

impl AtomCensus {
    pub fn count(&self) -> usize {
        self.atoms.len()
    }
}

/// Atoms over the grid extent of `profile`.
pub fn atom_census(f: &TransformHandle, profile: &KProfile) -> Result<AtomCensus> {
    let lo = profile.grid.first().copied().unwrap_or(-1.0).min(-1.0);
    let hi = profile.grid.last().copied().unwrap_or(1.0).max(1.0);
    atom_census_in(f, profile, lo, hi, CENSUS_POINTS)
}

/// Real zeros of F are where Re F crosses from − to + (F is increasing off the
/// support of the Lévy measure); each is confirmed by [`atom_mass`]. The mass
/// at 0 is always measured.
pub fn atom_census_in(f: &TransformHandle, profile: &KProfile, lo: f64, hi: f64, n: usize) -> Result<AtomCensus> {
    f.expect_role(&[Role::Reciprocal])?;
    let re = |x: f64| f.eval(C64::new(x, SCAN_EPS)).map(|v| v.re).unwrap_or(f64::NAN);
    let xs = linspace(lo, hi, n.max(3));
    let vals: Vec<f64> = xs.par_iter().map(|&x| re(x)).collect();
    let mut roots = Vec::new();
    for i in 1..xs.len() {
        if vals[i - 1] < 0.0 && vals[i] > 0.0 {
            if let Some(r) = bisect(re, xs[i - 1], xs[i], 1e-14 * (1.0 + xs[i].abs())) {
                roots.push(r);
            }
        } else if vals[i] == 0.0 && i + 1 < xs.len() && vals[i - 1] < 0.0 && vals[i + 1] > 0.0 {
            roots.push(xs[i]);
        }
    }
    let masses: Vec<Result<(f64, f64)>> = roots
        .par_iter()
        .filter(|r| r.abs() > 1e-9)
        .map(|&r| atom_mass(f, r).map(|m| (r, m)))
        .collect();
    let mut atoms = Vec::new();
    for m in masses {
        let (x, w) = m?;
        if w > 0.0 {
            atoms.push(Atom::new(x, w));
        }
    }
    let mass_at_zero = atom_mass(f, 0.0)?;
    if mass_at_zero > 0.0 {
        atoms.push(Atom::new(0.0, mass_at_zero));
    }
    atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
    let (alpha, beta) = (profile.alpha, profile.beta);
    let k_is_zero = profile.is_zero();
    let inside = if k_is_zero {
        vec![]
    } else {
        atoms
            .iter()
            .copied()
            .filter(|a| a.location > alpha && a.location < beta && a.location != 0.0)
            .collect()
    };
    Ok(AtomCensus { atoms, mass_at_zero, alpha, beta, inside, k_is_zero, window: (lo, hi) })
}

/// Regularity checks for a measure already found SD with k ≢ 0: no atom in
/// (α, β) ∖ {0}, at most two atoms, none at 0. Boolean Gaussians (k ≡ 0) are
/// outside the scope of these statements and only the count is checked.
pub fn certify_sd(census: &AtomCensus) -> Result<()> {
    if census.atoms.len() > 2 {
        return Err(Error::InvariantViolation(format!(
            "{} atoms found; a selfdecomposable law has at most two",
            census.atoms.len()
        )));
    }
    if census.k_is_zero {
        return Ok(());
    }
    if let Some(a) = census.inside.first() {
        return Err(Error::InvariantViolation(format!(
            "atom of mass {} at {} inside ({}, {})",
            a.mass, a.location, census.alpha, census.beta
        )));
    }
    if census.mass_at_zero > ATOM_THRESHOLD {
        return Err(Error::InvariantViolation(format!("atom of mass {} at 0", census.mass_at_zero)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::linspace;

    fn profile(lo: f64, hi: f64) -> KProfile {
        let g: Vec<f64> = linspace(lo, hi, 101).into_iter().filter(|x| *x != 0.0).collect();
        KProfile::from_fn(&g, |_| 0.0).unwrap()
    }

    #[test]
    fn bernoulli_has_two_half_atoms() {
        let f = TransformHandle::closed(Role::Reciprocal, |z: C64| z - 1.0 / z);
        let c = atom_census(&f, &profile(-3.0, 3.0)).unwrap();
        assert_eq!(c.count(), 2);
        for a in &c.atoms {
            assert!((a.location.abs() - 1.0).abs() < 1e-10);
            assert!((a.mass - 0.5).abs() < 1e-8);
        }
        assert_eq!(c.mass_at_zero, 0.0);
        certify_sd(&c).unwrap();
    }

    #[test]
    fn dirac_at_zero_is_reported() {
        let f = TransformHandle::closed(Role::Reciprocal, |z: C64| z);
        let c = atom_census(&f, &profile(-2.0, 2.0)).unwrap();
        assert_eq!(c.atoms, vec![Atom::new(0.0, 1.0)]);
    }

    #[test]
    fn three_atoms_violate() {
        let c = AtomCensus {
            atoms: vec![Atom::new(-1.0, 0.3), Atom::new(1.0, 0.3), Atom::new(2.0, 0.4)],
            mass_at_zero: 0.0,
            alpha: 0.0,
            beta: 0.0,
            inside: vec![],
            k_is_zero: true,
            window: (-3.0, 3.0),
        };
        assert!(matches!(certify_sd(&c), Err(Error::InvariantViolation(_))));
    }
}
