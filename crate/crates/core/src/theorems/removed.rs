//! Bases on `[0, N)` with one unit interval removed.

use std::f64::consts::PI;

use super::analytic::solve_beta;
use super::certificate::{FrameCertificate, Method, Param};
use crate::domain::{ExponentSystem, FrameBounds, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Open window `(1/(2(N−1)²), 1/(N−1) − β)` with `β` solving the β equation for `N − 1`.
pub fn delta_range_thm_main_2(n: i64) -> Result<(Rational, f64)> {
    if n < 3 {
        return Err(Error::InvalidParameter { name: "N", value: n.to_string(), reason: "must exceed 2" });
    }
    let k = n - 1;
    let beta = solve_beta(k as u64)?.beta;
    Ok((Rational::new(1, 2 * k * k), 1.0 / k as f64 - beta))
}

/// `(1 ∓ (N−1) sin(1/(N−1)))(N − 1 ∓ 1/sin(π/(2(N−1))))`.
pub fn thm_main_2_bounds(n: i64) -> FrameBounds {
    let k = (n - 1) as f64;
    let kernel = k * (1.0 / k).sin();
    let tail = 1.0 / (PI / (2.0 * k)).sin();
    FrameBounds { lower: (1.0 - kernel) * (k - tail), upper: (1.0 + kernel) * (k + tail) }
}

/// Offsets `j (1/(N−1) − δ)`, `j = 0..N−2`, on `[0, N)` without `(m, m+1)`, `1 ≤ m ≤ N − 2`.
pub fn construct_thm_main_2(n: i64, m: i64, delta: &Rational) -> Result<FrameCertificate> {
    let (lower, upper) = delta_range_thm_main_2(n)?;
    if !(1..=n - 2).contains(&m) {
        return Err(Error::InvalidParameter { name: "m", value: m.to_string(), reason: "must satisfy 1 <= m < N - 1" });
    }
    if !(*delta > lower && delta.to_f64() < upper) {
        return Err(Error::DeltaOutOfRange { delta: delta.to_f64(), lower: lower.to_f64(), upper });
    }
    let spacing = Rational::new(1, n - 1) - delta;
    let offsets = (0..n - 1).map(|j| &spacing * Rational::from_integer(j)).collect();
    let endpoints: Vec<i64> = (0..n).filter(|&k| k != m).collect();
    let domain = RationalIntervalUnion::from_integers(&endpoints)?;
    let system = ExponentSystem::unit(offsets)?;
    let mut cert = FrameCertificate::new(Method::ThmMain2, thm_main_2_bounds(n), domain, system);
    cert.param("N", Param::Int(n))
        .param("m", Param::Int(m))
        .param("delta", Param::Exact(delta.clone()))
        .param("beta", Param::Real(solve_beta((n - 1) as u64)?.beta))
        .param("delta_lower", Param::Real(lower.to_f64()))
        .param("delta_upper", Param::Real(upper))
        .param("spacing", Param::Exact(spacing));
    Ok(cert)
}
