use serde::Serialize;

use super::KProfile;
use crate::transforms::LEVY_SUPPORT_THRESHOLD;

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// A side with fewer nonzero samples than this cannot be certified.
pub const MIN_POINTS_PER_SIDE: usize = 8;
const ABS_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// k(x_near) < k(x_far) on one side of 0 beyond the allowance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Violation {
    pub x1: f64,
    pub x2: f64,
    pub k1: f64,
    pub k2: f64,
    /// k(x_far) − k(x_near).
    pub gap: f64,
    /// tol·max(k1, k2) + residuals + absolute floor.
    pub allowance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnimodalityReport {
    pub verdict: Verdict,
    pub worst_violation: Option<Violation>,
    pub tolerance: f64,
    pub points_negative: usize,
    pub points_positive: usize,
    pub note: String,
}

struct SideResult {
    worst: Option<(f64, Violation, usize, usize)>,
    nonzero: usize,
}

/// Scan points ordered by increasing |x|; k must not increase.
fn scan_side(p: &KProfile, order: &[usize], tol: f64, ok_only: bool) -> SideResult {
    let mut best_min: Option<(f64, usize)> = None;
    let mut worst: Option<(f64, Violation, usize, usize)> = None;
    let mut nonzero = 0;
    for &j in order {
        let k = p.k[j];
        let r = p.residuals[j].max(0.0);
        if !k.is_finite() || !r.is_finite() || (ok_only && !p.flags[j].is_ok()) {
            continue;
        }
        if k > LEVY_SUPPORT_THRESHOLD {
            nonzero += 1;
        }
        if let Some((m, i)) = best_min {
            let exceed = k * (1.0 - tol) - r - ABS_FLOOR - m;
            if exceed > 0.0 && worst.as_ref().map_or(true, |w| exceed > w.0) {
                let (near, far) = (i, j);
                let allowance = tol * k + r + p.residuals[i].max(0.0) + ABS_FLOOR;
                let (x1, x2, k1, k2) = if p.grid[near] < p.grid[far] {
                    (p.grid[near], p.grid[far], p.k[near], p.k[far])
                } else {
                    (p.grid[far], p.grid[near], p.k[far], p.k[near])
                };
                let v = Violation { x1, x2, k1, k2, gap: k - p.k[near], allowance };
                worst = Some((exceed, v, near, far));
            }
        }
        let cand = k + r;
        if best_min.map_or(true, |(m, _)| cand < m) {
            best_min = Some((cand, j));
        }
    }
    SideResult { worst, nonzero }
}

/// Non-increasing in |x| on each side of 0, i.e. unimodal with mode 0.
pub fn unimodality_check(profile: &KProfile, tolerance: f64) -> UnimodalityReport {
    let pos: Vec<usize> = (0..profile.len()).filter(|&i| profile.grid[i] > 0.0).collect();
    let neg: Vec<usize> = (0..profile.len()).filter(|&i| profile.grid[i] < 0.0).rev().collect();
    let mut report = UnimodalityReport {
        verdict: Verdict::Pass,
        worst_violation: None,
        tolerance,
        points_negative: neg.len(),
        points_positive: pos.len(),
        note: String::new(),
    };
    if profile.is_empty() || profile.is_zero() {
        report.note = "k vanishes on the grid".into();
        return report;
    }

    let sides = [(&neg, "negative"), (&pos, "positive")];
    let mut worst: Option<(f64, Violation, bool)> = None;
    let mut sparse = Vec::new();
    for (order, name) in sides {
        let all = scan_side(profile, order, tolerance, false);
        if let Some((e, v, i, j)) = all.worst {
            let clean = profile.flags[i].is_ok() && profile.flags[j].is_ok();
            let (e, v, clean) = if clean {
                (e, v, true)
            } else {
                match scan_side(profile, order, tolerance, true).worst {
                    Some((e2, v2, _, _)) => (e2, v2, true),
                    None => (e, v, false),
                }
            };
            let replace = match &worst {
                None => true,
                Some((we, _, wclean)) => (clean && !wclean) || (clean == *wclean && e > *we),
            };
            if replace {
                worst = Some((e, v, clean));
            }
        } else if all.nonzero > 0 && all.nonzero < MIN_POINTS_PER_SIDE {
            sparse.push(format!("{name} side has only {} nonzero samples", all.nonzero));
        }
    }

    match worst {
        Some((_, v, true)) => {
            report.verdict = Verdict::Fail;
            report.worst_violation = Some(v);
            report.note = "k increases away from 0".into();
        }
        Some((_, v, false)) => {
            report.verdict = Verdict::Inconclusive;
            report.worst_violation = Some(v);
            report.note = "violation only among flagged extrapolation points".into();
        }
        None if !sparse.is_empty() => {
            report.verdict = Verdict::Inconclusive;
            report.note = sparse.join("; ");
        }
        None => report.note = "k non-increasing in |x| on both sides".into(),
    }
    report
}
