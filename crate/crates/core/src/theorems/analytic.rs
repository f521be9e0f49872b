//! Scalar helpers: the signed kernel `g_M`, the β equation and the supporting inequalities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BETA_RESIDUAL_TOL: f64 = 1e-12;
pub const BETA_MAX_ITERATIONS: u32 = 200;

/// `sin(πMt) / sin(πt)`, signed, with the limit value at integer `t`.
pub fn g(m: u64, t: f64) -> f64 {
    let k = t.round();
    let y = t - k;
    let m_f = m as f64;
    // sin(πM(y + k)) / sin(π(y + k)) = (−1)^{(M−1)k} sin(πMy) / sin(πy)
    let sign = if ((m as i128 - 1) * k as i128).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if y == 0.0 {
        return sign * m_f;
    }
    sign * (PI * m_f * y).sin() / (PI * y).sin()
}

/// The root `β ∈ (0, 1/M)` of `g_M(β) = M sin(1/M)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaSolution {
    #[serde(rename = "M")]
    pub m: u64,
    pub beta: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Bisection on `(0, 1/M)`, where `g_M` decreases strictly from `M` to `0`.
///
/// Stops at residual `≤ 1e-12` or when the bracket can no longer be halved in `f64`; the
/// best of the remaining candidates is returned.
pub fn solve_beta(m: u64) -> Result<BetaSolution> {
    if m < 2 {
        return Err(Error::InvalidParameter { name: "M", value: m.to_string(), reason: "must be at least 2" });
    }
    let m_f = m as f64;
    let target = m_f * (1.0 / m_f).sin();
    let f = |t: f64| g(m, t) - target;
    let (mut lo, mut hi) = (0.0f64, 1.0 / m_f);
    if !(m_f - target > 0.0 && f(hi) < 0.0) {
        return Err(Error::NotConverged { what: "beta bracket", iterations: 0 });
    }
    let mut best = (f64::INFINITY, hi);
    let mut iterations = 0;
    while iterations < BETA_MAX_ITERATIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let v = f(mid);
        if v.abs() < best.0 {
            best = (v.abs(), mid);
        }
        if v.abs() <= BETA_RESIDUAL_TOL {
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for t in [lo, hi] {
        if t > 0.0 && f(t).abs() < best.0 {
            best = (f(t).abs(), t);
        }
    }
    if best.0 > BETA_RESIDUAL_TOL {
        return Err(Error::NotConverged { what: "beta bisection", iterations: iterations as usize });
    }
    Ok(BetaSolution { m, beta: best.1, residual: best.0, iterations })
}

/// `1/(2M²) < 1/M − β`.
pub fn beta_gap_holds(m: u64, beta: f64) -> bool {
    let m_f = m as f64;
    1.0 / (2.0 * m_f * m_f) < 1.0 / m_f - beta
}

/// `|sin(πMt) / sin(π(1/M − t))| < M sin(1/M)` for `0 < t ≤ 1/(2M²)`.
pub fn lemma_p_k_1_bound(m: u64, t: f64) -> Result<bool> {
    let m_f = m as f64;
    if m < 2 {
        return Err(Error::InvalidParameter { name: "M", value: m.to_string(), reason: "must be at least 2" });
    }
    if !(t > 0.0 && t <= 1.0 / (2.0 * m_f * m_f)) {
        return Err(Error::InvalidParameter { name: "t", value: t.to_string(), reason: "must lie in (0, 1/(2M^2)]" });
    }
    let ratio = ((PI * m_f * t).sin() / (PI * (1.0 / m_f - t)).sin()).abs();
    Ok(ratio < m_f * (1.0 / m_f).sin())
}

/// `ω_N(t) = sin(π(t − u)/N) / sin(πt/N)` strictly increases across a 10⁴-point grid of `(u, N/2]`.
pub fn omega_increasing_check(n: u64, u: f64) -> Result<bool> {
    let n_f = n as f64;
    if n < 2 {
        return Err(Error::InvalidParameter { name: "N", value: n.to_string(), reason: "must be at least 2" });
    }
    if !(u > 0.0 && u < n_f / 2.0) {
        return Err(Error::InvalidParameter { name: "u", value: u.to_string(), reason: "must lie in (0, N/2)" });
    }
    let omega = |t: f64| (PI * (t - u) / n_f).sin() / (PI * t / n_f).sin();
    let points = 10_000;
    let step = (n_f / 2.0 - u) / points as f64;
    let mut prev = omega(u);
    for i in 1..=points {
        let v = omega(u + step * i as f64);
        if v <= prev {
            return Ok(false);
        }
        prev = v;
    }
    Ok(true)
}
