//! Independent floating-point cross-check for the exact engine: dense sign
//! scanning and bisection bracketing of the NPV curve `s ↦ F_s(x)`.
//!
//! This route deliberately shares nothing with the exact polynomial kernel
//! beyond the stream type and float NPV evaluation. It can only ever find
//! odd-order crossings that the grid resolves — tangential (even) roots and
//! sub-grid features are invisible — so agreement tests against the exact
//! engine must filter by root parity, and a clean scan is never a proof.

use num::Signed;

use crate::cashflow::CashFlowStream;
use crate::discounting::npv_float;

/// Grid and refinement parameters for NPV scans.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Lower end of the scanned logarithmic-rate range.
    pub s_lo: f64,
    /// Upper end of the scanned logarithmic-rate range.
    pub s_hi: f64,
    /// Number of grid intervals across `[s_lo, s_hi]`.
    pub grid_points: usize,
    /// Width at which bisection of a bracketed crossing stops.
    pub bisection_tolerance: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            s_lo: 0.0,
            s_hi: 10.0,
            grid_points: 10_000,
            bisection_tolerance: 1e-12,
        }
    }
}

/// Direction of a sign change of `s ↦ F_s(x)` as `s` increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// NPV crosses from negative to positive.
    Rising,
    /// NPV crosses from positive to negative.
    Falling,
}

/// A grid interval across which the NPV sign flipped.
#[derive(Debug, Clone, PartialEq)]
pub struct SignChange {
    pub s_lo: f64,
    pub s_hi: f64,
    pub direction: Direction,
}

/// Scan the NPV over the configured grid and report every interval where
/// the sign flips. Exact float zeros at grid points are treated as
/// boundaries: the flip is reported against the last nonzero value.
pub fn scan_signs(x: &CashFlowStream, cfg: &ScanConfig) -> Vec<SignChange> {
    let mut out = Vec::new();
    if x.transactions().is_empty() || cfg.grid_points == 0 {
        return out;
    }
    let step = (cfg.s_hi - cfg.s_lo) / cfg.grid_points as f64;
    let mut last: Option<(f64, f64)> = None; // (s, nonzero NPV)
    for i in 0..=cfg.grid_points {
        let s = cfg.s_lo + step * i as f64;
        let v = npv_float(x, s);
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if let Some((ps, pv)) = last {
            if pv * v < 0.0 {
                out.push(SignChange {
                    s_lo: ps,
                    s_hi: s,
                    direction: if v > 0.0 { Direction::Rising } else { Direction::Falling },
                });
            }
        }
        last = Some((s, v));
    }
    out
}

/// Bisect every scanned sign change down to the configured tolerance and
/// return the refined `(s_lo, s_hi)` brackets, ascending.
pub fn bracket_roots(x: &CashFlowStream, cfg: &ScanConfig) -> Vec<(f64, f64)> {
    scan_signs(x, cfg)
        .into_iter()
        .map(|c| {
            let (mut lo, mut hi) = (c.s_lo, c.s_hi);
            let lo_sign = npv_float(x, lo).signum();
            while hi - lo > cfg.bisection_tolerance {
                let mid = lo + (hi - lo) / 2.0;
                if mid <= lo || mid >= hi {
                    break; // float resolution exhausted
                }
                let v = npv_float(x, mid);
                if v == 0.0 {
                    return (mid, mid);
                }
                if v.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, hi)
        })
        .collect()
}

/// Outcome of a float search for a cap violation.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleVerdict {
    /// No positive NPV found at or above the cap — not a proof of legality.
    NoViolationFound,
    /// A rate `s ≥ r` with verified `npv_float(x, s) > 0`.
    ViolationFound(f64),
}

/// Search for a rate at or above the cap `r` where the NPV goes positive.
/// Scans a grid over `[r, r + span]` with `span` taken from the config
/// window, then probes ever larger rates when the earliest payment is
/// positive (in that case the NPV is eventually positive for large `s`).
pub fn oracle_in_cap_plus(x: &CashFlowStream, r: f64, cfg: &ScanConfig) -> OracleVerdict {
    if x.transactions().is_empty() {
        return OracleVerdict::NoViolationFound;
    }
    let span = (cfg.s_hi - cfg.s_lo).abs().max(10.0);
    let n = cfg.grid_points.max(1);
    let step = span / n as f64;
    for i in 0..=n {
        let s = r + step * i as f64;
        if npv_float(x, s) > 0.0 {
            return OracleVerdict::ViolationFound(s);
        }
    }
    // Beyond the grid the earliest transaction dominates; chase the tail
    // only when its amount is positive, before the exponential underflows.
    if x.transactions()[0].1.is_positive() {
        let mut s = r.max(0.0) + span;
        for _ in 0..200 {
            if npv_float(x, s) > 0.0 {
                return OracleVerdict::ViolationFound(s);
            }
            s *= 1.5;
        }
    }
    OracleVerdict::NoViolationFound
}
