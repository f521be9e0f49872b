//! Systems with offsets on the lattice `(1/N) Z`: standard bases, residue bases and complements.

use serde::{Deserialize, Serialize};

use super::certificate::{flags, FrameCertificate, Method, Param};
use crate::domain::{first_residue_collision, ExponentSystem, FrameBounds, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::spectral::{self, SingularSpectrum};
use crate::vandermonde::NodeMatrix;

/// A system shown to be a basis by a nonsingular matrix, without certified constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisWitness {
    pub system: ExponentSystem,
    pub domain: RationalIntervalUnion,
    pub spectrum: SingularSpectrum,
}

fn sorted_distinct(a: &[i64], name: &'static str) -> Result<Vec<i64>> {
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    if sorted.is_empty() || sorted.windows(2).any(|w| w[0] == w[1]) || sorted[0] < 0 {
        return Err(Error::InvalidParameter { name, value: format!("{a:?}"), reason: "must be distinct nonnegative integers" });
    }
    Ok(sorted)
}

/// `{n + (j−1)/N : j = 1..M}` on `⋃ [a_k, a_k + 1)` with distinct `a_k ∈ [0, N)`.
pub fn prop_basis(n: i64, m: usize, a: &[i64]) -> Result<BasisWitness> {
    if n < 1 || m < 1 || m as i64 > n {
        return Err(Error::InvalidParameter { name: "M", value: m.to_string(), reason: "must satisfy 1 <= M <= N" });
    }
    if a.len() != m {
        return Err(Error::DimensionMismatch { rows: m, cols: a.len() });
    }
    let sorted = sorted_distinct(a, "a")?;
    if *sorted.last().unwrap() >= n {
        return Err(Error::InvalidParameter { name: "a", value: format!("{a:?}"), reason: "must lie in [0, N)" });
    }
    let system = ExponentSystem::unit((0..m as i64).map(|j| Rational::new(j, n)).collect())?;
    let domain = RationalIntervalUnion::from_integers(&sorted)?;
    let spectrum = spectral::singular_values(&NodeMatrix::from_system(&system, &domain)?)?;
    if spectrum.is_singular() {
        return Err(Error::NumericallySingular);
    }
    Ok(BasisWitness { system, domain, spectrum })
}

/// `{n + j/s : j = 0..s−1}` on `⋃ [a_j, a_j + 1)` with residues `a_j mod s` distinct: `A = B = s`.
pub fn prop_basis_mod(s: usize, a: &[i64]) -> Result<FrameCertificate> {
    if s < 1 || a.len() != s {
        return Err(Error::DimensionMismatch { rows: s, cols: a.len() });
    }
    let sorted = sorted_distinct(a, "a")?;
    if let Some((first, second, residue)) = first_residue_collision(&sorted, s as i64) {
        return Err(Error::ResidueCollision { first, second, residue, modulus: s as i64 });
    }
    let system = ExponentSystem::unit((0..s as i64).map(|j| Rational::new(j, s as i64)).collect())?;
    let domain = RationalIntervalUnion::from_integers(&sorted)?;
    let s_f = s as f64;
    let mut cert = FrameCertificate::new(Method::PropBasisMod, FrameBounds { lower: s_f, upper: s_f }, domain, system);
    cert.param("s", Param::Int(s as i64));
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementRule {
    /// `A' = Δ − B`, `B' = Δ − A`.
    Reflected,
    /// `A' = A`; `B' = B` when the complement is no larger than `S`, else `B' = Δ`.
    Duality,
}

impl ComplementRule {
    pub fn name(self) -> &'static str {
        match self {
            ComplementRule::Reflected => "reflected",
            ComplementRule::Duality => "duality",
        }
    }
}

/// [`complement_certificate_with`] under [`ComplementRule::Reflected`].
pub fn complement_certificate(delta: i64, cert: &FrameCertificate) -> Result<FrameCertificate> {
    complement_certificate_with(delta, cert, ComplementRule::Reflected)
}

/// Certificate for the lattice frequencies `(1/Δ) Z` missing from `cert`'s system, on
/// `[0, Δ)` minus `cert`'s domain.
///
/// Supported inputs: integer `Δ`, integer interval positions inside `[0, Δ)`, unit scale.
pub fn complement_certificate_with(delta: i64, cert: &FrameCertificate, rule: ComplementRule) -> Result<FrameCertificate> {
    if delta < 1 {
        return Err(Error::InvalidParameter { name: "Delta", value: delta.to_string(), reason: "must be a positive integer" });
    }
    if *cert.system.scale() != Rational::one() {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: cert.system.scale().to_string(),
            reason: "complements are formed for unit-scale systems",
        });
    }
    let mut inside = vec![false; delta as usize];
    for e in cert.domain.endpoints() {
        match e.to_i64() {
            Some(k) if (0..delta).contains(&k) => inside[k as usize] = true,
            _ => return Err(Error::SubdomainNotContained),
        }
    }
    let delta_r = Rational::from_integer(delta);
    let mut used = vec![false; delta as usize];
    for phi in cert.system.offsets() {
        let r = (phi.frac() * &delta_r).to_i64().ok_or(Error::InvalidParameter {
            name: "offsets",
            value: phi.to_string(),
            reason: "frequencies must lie on the lattice (1/Delta) Z",
        })?;
        used[r as usize] = true;
    }
    let endpoints: Vec<i64> = (0..delta).filter(|&k| !inside[k as usize]).collect();
    let offsets: Vec<Rational> = (0..delta).filter(|&r| !used[r as usize]).map(|r| Rational::new(r, delta)).collect();
    if endpoints.is_empty() || offsets.is_empty() {
        return Err(Error::EmptyComplement);
    }
    let d = delta as f64;
    let bounds = match rule {
        ComplementRule::Reflected => {
            let b = FrameBounds { lower: d - cert.upper, upper: d - cert.lower };
            if b.lower <= 0.0 {
                return Err(Error::NonpositiveComplementBound { lower: b.lower, upper: b.upper });
            }
            b
        }
        ComplementRule::Duality => {
            let upper = if endpoints.len() <= cert.domain.measure() { cert.upper.min(d) } else { d };
            FrameBounds { lower: cert.lower, upper }
        }
    };
    let domain = RationalIntervalUnion::from_integers(&endpoints)?;
    let system = ExponentSystem::unit(offsets)?;
    let mut out = FrameCertificate::new(Method::Complement, bounds, domain, system);
    out.param("Delta", Param::Int(delta))
        .param("rule", Param::Text(rule.name().to_string()))
        .param("source_A", Param::Real(cert.lower))
        .param("source_B", Param::Real(cert.upper))
        .flag(match rule {
            ComplementRule::Reflected => flags::COMPLEMENT_REFLECTED,
            ComplementRule::Duality => flags::COMPLEMENT_DUALITY,
        });
    Ok(out)
}
