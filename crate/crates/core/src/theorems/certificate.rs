use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::{ExponentSystem, FrameBounds, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::spectral::{self, SingularSpectrum};
use crate::vandermonde::NodeMatrix;

/// Flag strings attached to certificates.
pub mod flags {
    /// The certified lower constant is not positive.
    pub const VACUOUS_LOWER_BOUND: &str = "vacuous_lower_bound";
    /// `m = N (a_{s-1} + ε_{s-1})`, with the factor `N`.
    pub const M_INCLUDES_FACTOR_N: &str = "m_includes_factor_n";
    /// Upper constant uses the `(1 + ...)(sN + ...)` product.
    pub const UPPER_FROM_STATEMENT: &str = "upper_bound_from_statement";
    /// The system is the one whose scaled matrix is bounded (`sN` branches at scale `1/N`).
    pub const SCALED_MATRIX_SYSTEM: &str = "system_matches_scaled_matrix";
    /// `A' = Δ − B`, `B' = Δ − A`.
    pub const COMPLEMENT_REFLECTED: &str = "complement_constants_reflected";
    /// `A' = A`, `B' = B` or `Δ` from the Parseval identity on `[0, Δ)`.
    pub const COMPLEMENT_DUALITY: &str = "complement_constants_from_duality";
    /// `α` of the clustered bound is the largest coherence inside a cluster.
    pub const ALPHA_WITHIN_CLUSTERS: &str = "alpha_over_within_cluster_pairs";
    /// `σ_min < 1e-10 σ_max`.
    pub const NUMERICALLY_SINGULAR: &str = "numerically_singular";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ThmMain,
    ThmMain3,
    ThmMain3Corollary,
    ThmMain2,
    #[serde(rename = "prop_basisMod")]
    PropBasisMod,
    Oracle,
    Complement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Real(f64),
    Exact(Rational),
    Text(String),
}

impl Param {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Param::Int(v) => Some(*v as f64),
            Param::Real(v) => Some(*v),
            Param::Exact(r) => Some(r.to_f64()),
            Param::Text(_) => None,
        }
    }
}

/// Certified constants `(A, B)` for `system` on `domain`, with the parameters that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCertificate {
    pub method: Method,
    pub lower: f64,
    pub upper: f64,
    pub params: BTreeMap<String, Param>,
    pub flags: Vec<String>,
    pub domain: RationalIntervalUnion,
    pub system: ExponentSystem,
}

impl FrameCertificate {
    pub(crate) fn new(
        method: Method,
        bounds: FrameBounds,
        domain: RationalIntervalUnion,
        system: ExponentSystem,
    ) -> Self {
        let mut cert = FrameCertificate {
            method,
            lower: bounds.lower,
            upper: bounds.upper,
            params: BTreeMap::new(),
            flags: Vec::new(),
            domain,
            system,
        };
        if cert.lower <= 0.0 {
            cert.flag(flags::VACUOUS_LOWER_BOUND);
        }
        cert
    }

    pub(crate) fn param(&mut self, name: &str, value: Param) -> &mut Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub(crate) fn flag(&mut self, flag: &str) -> &mut Self {
        if !self.flags.iter().any(|f| f == flag) {
            self.flags.push(flag.to_string());
            self.flags.sort();
        }
        self
    }

    pub fn bounds(&self) -> FrameBounds {
        FrameBounds { lower: self.lower, upper: self.upper }
    }

    pub fn is_vacuous(&self) -> bool {
        self.lower <= 0.0
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    pub fn param_f64(&self, name: &str) -> Option<f64> {
        self.params.get(name).and_then(Param::as_f64)
    }

    /// Bounds for the squared singular values of the grid matrix: the constants divided by `ρ`.
    pub fn grid_bounds(&self) -> FrameBounds {
        let rho = self.system.scale().to_f64();
        FrameBounds { lower: self.lower / rho, upper: self.upper / rho }
    }

    /// The matrix `Γ` of the system on the integer grid of the domain.
    pub fn matrix(&self) -> Result<NodeMatrix> {
        NodeMatrix::from_system(&self.system, &self.domain)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from_json)
    }
}

/// Exact constants from the singular values of `Γ`.
pub fn oracle_certificate(system: &ExponentSystem, domain: &RationalIntervalUnion) -> Result<(FrameCertificate, SingularSpectrum)> {
    let gamma = NodeMatrix::from_system(system, domain)?;
    let spectrum = spectral::singular_values(&gamma)?;
    let rho = system.scale().to_f64();
    let c = spectrum.frame_constants();
    let mut cert = FrameCertificate::new(
        Method::Oracle,
        FrameBounds { lower: c.lower * rho, upper: c.upper * rho },
        domain.clone(),
        system.clone(),
    );
    if spectrum.is_singular() {
        cert.flag(flags::NUMERICALLY_SINGULAR);
    }
    Ok((cert, spectrum))
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    #[serde(default = "schema_v1")]
    schema: String,
    method: Method,
    #[serde(rename = "A")]
    lower: f64,
    #[serde(rename = "B")]
    upper: f64,
    params: BTreeMap<String, Param>,
    flags: Vec<String>,
    domain: RationalIntervalUnion,
    offsets: Vec<Rational>,
    scale: Rational,
}

fn schema_v1() -> String {
    "v1".to_string()
}

impl Serialize for FrameCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRepr {
            schema: schema_v1(),
            method: self.method,
            lower: self.lower,
            upper: self.upper,
            params: self.params.clone(),
            flags: self.flags.clone(),
            domain: self.domain.clone(),
            offsets: self.system.offsets().to_vec(),
            scale: self.system.scale().clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FrameCertificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CertificateRepr::deserialize(deserializer)?;
        if repr.schema != "v1" {
            return Err(D::Error::custom(format!("unsupported schema {:?}", repr.schema)));
        }
        let system = ExponentSystem::new(repr.offsets, repr.scale).map_err(D::Error::custom)?;
        Ok(FrameCertificate {
            method: repr.method,
            lower: repr.lower,
            upper: repr.upper,
            params: repr.params,
            flags: repr.flags,
            domain: repr.domain,
            system,
        })
    }
}
