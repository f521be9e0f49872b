//! Bases on unions of unit intervals with rationally perturbed positions.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::analytic::solve_beta;
use super::certificate::{flags, FrameCertificate, Method, Param};
use crate::domain::{first_residue_collision, ExponentSystem, FrameBounds, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::rational::{lcd, Rational};

/// The admissible window for `|δ|` together with the derived integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaRange {
    /// `1 / (2 s² N³ m)`, exact.
    pub lower_exact: Rational,
    pub lower: f64,
    /// `1 / (s N² m) − β / (N m)`.
    pub upper: f64,
    #[serde(rename = "N")]
    pub n: i64,
    pub m: i64,
    pub beta: f64,
}

impl DeltaRange {
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn contains(&self, delta: &Rational) -> bool {
        let mag = delta.abs();
        mag >= self.lower_exact && mag.to_f64() <= self.upper
    }
}

struct Setup {
    domain: RationalIntervalUnion,
    range: DeltaRange,
}

fn setup(s: usize, a: &[i64], eps: &[Rational]) -> Result<Setup> {
    if s < 2 {
        return Err(Error::InvalidParameter { name: "s", value: s.to_string(), reason: "needs at least two intervals" });
    }
    if a.len() != s || eps.len() != s {
        return Err(Error::DimensionMismatch { rows: a.len(), cols: eps.len() });
    }
    if a[0] != 0 || a.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: format!("{a:?}"),
            reason: "must be strictly increasing integers starting at 0",
        });
    }
    if !eps[0].is_zero() {
        return Err(Error::NonzeroBasePerturbation { value: eps[0].to_string() });
    }
    let half = Rational::new(1, 2);
    if let Some(index) = eps.iter().position(|e| e.abs() >= half) {
        return Err(Error::PerturbationTooLarge { index, value: eps[index].to_string() });
    }
    if let Some((first, second, residue)) = first_residue_collision(a, s as i64) {
        return Err(Error::ResidueCollision { first, second, residue, modulus: s as i64 });
    }
    let endpoints: Vec<Rational> = a.iter().zip(eps).map(|(&aj, e)| Rational::from_integer(aj) + e).collect();
    let domain = RationalIntervalUnion::new(endpoints.clone())?;
    let n = lcd(eps).to_i64().ok_or_else(|| Error::EndpointOverflow {
        endpoint: eps.iter().map(Rational::to_string).collect::<Vec<_>>().join(","),
        scale: lcd(eps).to_string(),
    })?;
    let m_exact = Rational::from_integer(n) * endpoints.last().unwrap();
    let m = m_exact.to_i64().ok_or_else(|| Error::EndpointOverflow { endpoint: m_exact.to_string(), scale: n.to_string() })?;
    let sn = s as i64 * n;
    let beta = solve_beta(sn as u64)?.beta;
    let lower_exact = Rational::new(1, 2) / Rational::from_integer(s as i64 * sn * n * n * m);
    let (n_f, m_f, s_f) = (n as f64, m as f64, s as f64);
    let upper = 1.0 / (s_f * n_f * n_f * m_f) - beta / (n_f * m_f);
    let range = DeltaRange { lower: lower_exact.to_f64(), lower_exact, upper, n, m, beta };
    Ok(Setup { domain, range })
}

/// The window `1/(2s²N³m) ≤ |δ| ≤ 1/(sN²m) − β/(Nm)` with `N = lcd(ε)`, `m = N(a_{s−1} + ε_{s−1})`
/// and `β` solving the β equation for `sN`.
pub fn delta_range_thm_main(s: usize, a: &[i64], eps: &[Rational]) -> Result<DeltaRange> {
    let range = setup(s, a, eps)?.range;
    if range.is_empty() {
        return Err(Error::EmptyDeltaRange { lower: range.lower, upper: range.upper });
    }
    Ok(range)
}

/// `(1/N)(1 ∓ sN sin(1/(sN)))(sN ∓ sin(π/(2Nm)) / sin(π/(2sN²m)))`.
pub fn thm_main_bounds(s: usize, n: i64, m: i64) -> FrameBounds {
    let (n_f, m_f) = (n as f64, m as f64);
    let sn = s as f64 * n_f;
    let kernel = sn * (1.0 / sn).sin();
    let ratio = (PI / (2.0 * n_f * m_f)).sin() / (PI / (2.0 * sn * n_f * m_f)).sin();
    FrameBounds { lower: (1.0 - kernel) * (sn - ratio) / n_f, upper: (1.0 + kernel) * (sn + ratio) / n_f }
}

/// Exponential basis for `⋃ [a_j + ε_j, a_j + ε_j + 1)`.
///
/// The returned system has `sN` branches with offsets `j (1/(sN) + δ)` at scale `1/N`; after
/// dilation by `N` its matrix is the uniform Vandermonde matrix on the `sN` grid nodes.
pub fn construct_thm_main(s: usize, a: &[i64], eps: &[Rational], delta: &Rational) -> Result<FrameCertificate> {
    let Setup { domain, range } = setup(s, a, eps)?;
    if range.is_empty() {
        return Err(Error::EmptyDeltaRange { lower: range.lower, upper: range.upper });
    }
    if !range.contains(delta) {
        return Err(Error::DeltaOutOfRange { delta: delta.to_f64(), lower: range.lower, upper: range.upper });
    }
    let n = range.n;
    let sn = s as i64 * n;
    let spacing = Rational::new(1, sn) + delta;
    let offsets = (0..sn).map(|j| &spacing * Rational::from_integer(j)).collect();
    let system = ExponentSystem::new(offsets, Rational::new(1, n))?;
    let mut cert = FrameCertificate::new(Method::ThmMain, thm_main_bounds(s, n, range.m), domain, system);
    cert.param("s", Param::Int(s as i64))
        .param("N", Param::Int(n))
        .param("m", Param::Int(range.m))
        .param("delta", Param::Exact(delta.clone()))
        .param("beta", Param::Real(range.beta))
        .param("delta_lower", Param::Real(range.lower))
        .param("delta_upper", Param::Real(range.upper))
        .param("spacing", Param::Exact(spacing))
        .flag(flags::M_INCLUDES_FACTOR_N)
        .flag(flags::UPPER_FROM_STATEMENT);
    if n > 1 {
        cert.flag(flags::SCALED_MATRIX_SYSTEM);
    }
    Ok(cert)
}
