use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::num;
use crate::transforms::{PointFlag, LEVY_SUPPORT_THRESHOLD};

/// Sampled k-function with ℓ = |x| k and support endpoints.
#[derive(Debug, Clone, Serialize)]
pub struct KProfile {
    pub grid: Vec<f64>,
    pub k: Vec<f64>,
    pub ell: Vec<f64>,
    pub residuals: Vec<f64>,
    pub flags: Vec<PointFlag>,
    /// Left end of the k-support; −∞ when k is still positive at the left edge
    /// of a grid reaching into the negative axis. 0 for k ≡ 0.
    pub alpha: f64,
    pub beta: f64,
}

impl KProfile {
    /// Sorts by x. The grid must exclude 0.
    pub fn new(grid: Vec<f64>, k: Vec<f64>, residuals: Vec<f64>, flags: Vec<PointFlag>) -> Result<Self> {
        let n = grid.len();
        if k.len() != n || residuals.len() != n || flags.len() != n {
            return Err(Error::Domain("k-profile columns differ in length".into()));
        }
        if grid.iter().any(|&x| x == 0.0 || !x.is_finite()) {
            return Err(Error::Domain("k-profile grid must be finite and exclude 0".into()));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
        let grid: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
        let k: Vec<f64> = idx.iter().map(|&i| k[i]).collect();
        let residuals = idx.iter().map(|&i| residuals[i]).collect();
        let flags = idx.iter().map(|&i| flags[i]).collect();
        let ell = grid.iter().zip(&k).map(|(x, k)| x.abs() * k).collect();
        let (alpha, beta) = endpoints(&grid, &k);
        Ok(KProfile { grid, k, ell, residuals, flags, alpha, beta })
    }

    /// Exact samples of a closed-form k.
    pub fn from_fn(grid: &[f64], k: impl Fn(f64) -> f64) -> Result<Self> {
        let vals: Vec<f64> = grid.iter().map(|&x| k(x)).collect();
        KProfile::new(grid.to_vec(), vals, vec![0.0; grid.len()], vec![PointFlag::Ok; grid.len()])
    }

    /// Exact samples from ℓ, with k = ℓ/|x|.
    pub fn from_ell(grid: &[f64], ell: impl Fn(f64) -> f64) -> Result<Self> {
        KProfile::from_fn(grid, |x| ell(x) / x.abs())
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// No sample above the Lévy-support threshold.
    pub fn is_zero(&self) -> bool {
        !self.k.iter().any(|&v| v > LEVY_SUPPORT_THRESHOLD)
    }

    /// Columns x, k, ell, flag.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,k,ell,flag\n");
        for i in 0..self.grid.len() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                num(self.grid[i]),
                num(self.k[i]),
                num(self.ell[i]),
                self.flags[i].as_str()
            ));
        }
        s
    }
}

fn endpoints(grid: &[f64], k: &[f64]) -> (f64, f64) {
    let inside: Vec<usize> = (0..grid.len()).filter(|&i| k[i] > LEVY_SUPPORT_THRESHOLD).collect();
    let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
        return (0.0, 0.0);
    };
    let alpha = if first == 0 && grid[0] < 0.0 { f64::NEG_INFINITY } else { grid[first] };
    let beta = if last == grid.len() - 1 && grid[last] > 0.0 { f64::INFINITY } else { grid[last] };
    (alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_ell() {
        let grid = [-2.0, -1.0, -0.5, 0.5, 1.0, 3.0];
        let p = KProfile::from_fn(&grid, |x| if (-1.0..=1.0).contains(&x) { 2.0 } else { 0.0 }).unwrap();
        assert_eq!((p.alpha, p.beta), (-1.0, 1.0));
        assert_eq!(p.ell[2], 1.0);
        let q = KProfile::from_fn(&grid, |x| 1.0 / x.abs()).unwrap();
        assert_eq!((q.alpha, q.beta), (f64::NEG_INFINITY, f64::INFINITY));
        let z = KProfile::from_fn(&grid, |_| 0.0).unwrap();
        assert!(z.is_zero());
        assert_eq!((z.alpha, z.beta), (0.0, 0.0));
    }

    #[test]
    fn rejects_zero_in_grid() {
        assert!(KProfile::from_fn(&[-1.0, 0.0, 1.0], |_| 1.0).is_err());
    }

    #[test]
    fn csv_columns() {
        let p = KProfile::from_fn(&[1.0], |_| 0.5).unwrap();
        assert_eq!(p.to_csv(), "x,k,ell,flag\n1.0000000000000000e0,5.0000000000000000e-1,5.0000000000000000e-1,ok\n");
    }
}
