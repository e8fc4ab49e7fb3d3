//! Fixtures shared by the benchmarks.

use num_complex::Complex64;

/// Points of the upper half-plane on a lattice, from near the axis to |z| ~ 10.
pub fn upper_points(n: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        let x = -8.0 + 16.0 * i as f64 / (n - 1).max(1) as f64;
        for j in 0..n {
            let y = 10f64.powf(-3.0 + 4.0 * j as f64 / (n - 1).max(1) as f64);
            v.push(Complex64::new(x, y));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice() {
        let p = upper_points(5);
        assert_eq!(p.len(), 25);
        assert!(p.iter().all(|z| z.im > 0.0));
        assert_eq!(p[0], Complex64::new(-8.0, 1e-3));
    }
}
