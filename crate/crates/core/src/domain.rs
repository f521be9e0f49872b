//! Unions of half-open unit intervals with rational left endpoints, their integer-grid
//! normalization, and exponent systems `{(n + phi_j) / rho}`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::rational::{lcd, Rational};

/// `[e_0, e_0 + 1) ∪ [e_1, e_1 + 1) ∪ ...` with strictly increasing, pairwise disjoint intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalIntervalUnion {
    endpoints: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl RationalIntervalUnion {
    pub fn new(endpoints: Vec<Rational>) -> Result<Self> {
        if endpoints.is_empty() {
            return Err(Error::EmptyDomain);
        }
        for (i, pair) in endpoints.windows(2).enumerate() {
            if &pair[1] - &pair[0] < Rational::one() {
                return Err(Error::OverlappingIntervals { first: i, second: i + 1 });
            }
        }
        Ok(RationalIntervalUnion { endpoints, label: None })
    }

    pub fn from_integers(endpoints: &[i64]) -> Result<Self> {
        Self::new(endpoints.iter().map(|&e| Rational::from_integer(e)).collect())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn endpoints(&self) -> &[Rational] {
        &self.endpoints
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    /// Lebesgue measure; every interval has length one.
    pub fn measure(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.endpoints[0].is_zero()
    }

    /// Translates so the first endpoint is 0. Returns the union and the shift that was subtracted.
    pub fn canonicalize(&self) -> (Self, Rational) {
        let shift = self.endpoints[0].clone();
        let endpoints = self.endpoints.iter().map(|e| e - &shift).collect();
        (RationalIntervalUnion { endpoints, label: self.label.clone() }, shift)
    }

    /// Whether the point lies in the union.
    pub fn contains(&self, x: &Rational) -> bool {
        self.endpoints.iter().any(|e| e <= x && *x < e + Rational::one())
    }

    /// Maximal disjoint segments `[left, right)` covering the union (adjacent intervals merged).
    pub fn segments(&self) -> Vec<(Rational, Rational)> {
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for e in &self.endpoints {
            let right = e + Rational::one();
            match out.last_mut() {
                Some(last) if last.1 == *e => last.1 = right,
                _ => out.push((e.clone(), right)),
            }
        }
        out
    }
}

#[derive(Deserialize)]
struct UnionRepr {
    #[serde(default)]
    schema: Option<String>,
    endpoints: Vec<Rational>,
    #[serde(default)]
    label: Option<String>,
}

impl<'de> Deserialize<'de> for RationalIntervalUnion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = UnionRepr::deserialize(deserializer)?;
        if let Some(schema) = &repr.schema {
            if schema != "v1" {
                return Err(D::Error::custom(format!("unsupported schema {schema:?}")));
            }
        }
        let mut union = RationalIntervalUnion::new(repr.endpoints).map_err(D::Error::custom)?;
        union.label = repr.label;
        Ok(union)
    }
}

/// Parses a domain from JSON, reporting line and column on failure.
pub fn union_from_json(text: &str) -> Result<RationalIntervalUnion> {
    serde_json::from_str(text).map_err(Error::from_json)
}

/// A union of dilated blocks `[e_j, e_j + N)` with integer endpoints, produced by scaling by `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerIntervalUnion {
    endpoints: Vec<i64>,
    scale: i64,
}

impl IntegerIntervalUnion {
    pub fn new(endpoints: Vec<i64>, scale: i64) -> Result<Self> {
        if endpoints.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if scale < 1 {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: scale.to_string(),
                reason: "must be a positive integer",
            });
        }
        for (i, &e) in endpoints.iter().enumerate() {
            if e < 0 {
                return Err(Error::NegativeEndpoint { index: i, value: e.to_string() });
            }
        }
        for (i, pair) in endpoints.windows(2).enumerate() {
            if pair[1].checked_sub(pair[0]).is_none_or(|d| d < scale) {
                return Err(Error::OverlappingIntervals { first: i, second: i + 1 });
            }
        }
        if endpoints.last().unwrap().checked_add(scale).is_none() {
            return Err(Error::EndpointOverflow {
                endpoint: endpoints.last().unwrap().to_string(),
                scale: scale.to_string(),
            });
        }
        Ok(IntegerIntervalUnion { endpoints, scale })
    }

    pub fn endpoints(&self) -> &[i64] {
        &self.endpoints
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// The union with unit intervals at every covered integer, i.e. the grid domain at scale 1.
    pub fn to_unit_union(&self) -> RationalIntervalUnion {
        RationalIntervalUnion::from_integers(&crate::vandermonde::nodes_of_union(self))
            .expect("grid nodes are strictly increasing")
    }
}

/// Multiplies every endpoint by the least common denominator `N`.
///
/// Endpoints must be nonnegative (translate with [`RationalIntervalUnion::canonicalize`] first).
pub fn normalize_to_integer_grid(u: &RationalIntervalUnion) -> Result<IntegerIntervalUnion> {
    let n = lcd(u.endpoints());
    let scale = n.to_i64().ok_or_else(|| Error::EndpointOverflow {
        endpoint: u.endpoints().iter().find(|e| e.denom() == &n).unwrap_or(&u.endpoints()[0]).to_string(),
        scale: n.to_string(),
    })?;
    let mut endpoints = Vec::with_capacity(u.len());
    for (i, e) in u.endpoints().iter().enumerate() {
        if e.is_negative() {
            return Err(Error::NegativeEndpoint { index: i, value: e.to_string() });
        }
        let scaled: BigInt = e.numer() * (&n / e.denom());
        let value = scaled
            .to_i64()
            .filter(|v| v.checked_add(scale).is_some())
            .ok_or_else(|| Error::EndpointOverflow { endpoint: e.to_string(), scale: n.to_string() })?;
        endpoints.push(value);
    }
    IntegerIntervalUnion::new(endpoints, scale)
}

/// True iff the endpoints are pairwise distinct modulo `s`.
pub fn residues_distinct(endpoints: &[i64], s: i64) -> bool {
    first_residue_collision(endpoints, s).is_none()
}

pub(crate) fn first_residue_collision(endpoints: &[i64], s: i64) -> Option<(usize, usize, i64)> {
    for i in 0..endpoints.len() {
        for j in i + 1..endpoints.len() {
            let (ri, rj) = (endpoints[i].rem_euclid(s), endpoints[j].rem_euclid(s));
            if ri == rj {
                return Some((i, j, ri));
            }
        }
    }
    None
}

/// The frequency set `⋃_j {(n + phi_j) / rho : n ∈ Z}`.
///
/// On a domain `rho · G`, with `G` a union of unit intervals at integer positions, this is the
/// image of the system `⋃_j {n + phi_j}` on `G` under dilation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentSystem {
    offsets: Vec<Rational>,
    scale: Rational,
}

impl ExponentSystem {
    pub fn new(offsets: Vec<Rational>, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: scale.to_string(),
                reason: "domain scale must be positive",
            });
        }
        let fracs: Vec<Rational> = offsets.iter().map(Rational::frac).collect();
        for i in 0..fracs.len() {
            for j in i + 1..fracs.len() {
                if fracs[i] == fracs[j] {
                    return Err(Error::DuplicateOffset { first: i, second: j });
                }
            }
        }
        Ok(ExponentSystem { offsets, scale })
    }

    /// Branches `{n + phi_j}` at unit scale.
    pub fn unit(offsets: Vec<Rational>) -> Result<Self> {
        Self::new(offsets, Rational::one())
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn branch_count(&self) -> usize {
        self.offsets.len()
    }

    /// Frequency `(n + phi_j) / rho`.
    pub fn frequency(&self, branch: usize, n: i64) -> f64 {
        ((Rational::from_integer(n) + &self.offsets[branch]) / &self.scale).to_f64()
    }

    /// All frequencies with `|n| <= n_max`, branch-major.
    pub fn truncate(&self, n_max: i64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.offsets.len() * (2 * n_max as usize + 1));
        for j in 0..self.offsets.len() {
            for n in -n_max..=n_max {
                out.push(self.frequency(j, n));
            }
        }
        out
    }

    /// Splits every branch into `q` branches of spacing `q`: the same frequency set expressed
    /// at scale `rho / q` with offsets `(r + phi_j) / q`, `r = 0..q-1`.
    pub fn split_branches(&self, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q.to_string(),
                reason: "must be a positive integer",
            });
        }
        let qr = Rational::from_integer(q);
        let mut offsets = Vec::with_capacity(self.offsets.len() * q as usize);
        for phi in &self.offsets {
            for r in 0..q {
                offsets.push((Rational::from_integer(r) + phi) / &qr);
            }
        }
        Self::new(offsets, &self.scale / &qr)
    }

    /// Expresses the system at scale `1 / N` where `N` is the grid scale of `domain`, so that
    /// `Γ` can be formed against the integer grid nodes. Requires `rho · N` to be a positive integer.
    pub fn grid_form(&self, domain: &RationalIntervalUnion) -> Result<(Self, IntegerIntervalUnion)> {
        let (canonical, _) = domain.canonicalize();
        let grid = normalize_to_integer_grid(&canonical)?;
        let q = &self.scale * Rational::from_integer(grid.scale());
        let q = q.to_i64().filter(|&q| q >= 1).ok_or_else(|| Error::InvalidParameter {
            name: "rho",
            value: self.scale.to_string(),
            reason: "rho times the grid scale of the domain must be a positive integer",
        })?;
        let system = if q == 1 { self.clone() } else { self.split_branches(q)? };
        Ok((system, grid))
    }
}

#[derive(Deserialize)]
struct SystemRepr {
    offsets: Vec<Rational>,
    scale: Rational,
}

impl<'de> Deserialize<'de> for ExponentSystem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SystemRepr::deserialize(deserializer)?;
        ExponentSystem::new(repr.offsets, repr.scale).map_err(D::Error::custom)
    }
}

/// Riesz/frame constants `(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// A dilation by `rho` followed by a translation by `shift`, applied to a domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingTransform {
    pub rho: Rational,
    pub shift: Rational,
}

impl ScalingTransform {
    /// Constants of the transformed system: dilation multiplies both by `rho`, translation is neutral.
    pub fn apply(&self, bounds: FrameBounds) -> FrameBounds {
        let rho = self.rho.to_f64();
        FrameBounds { lower: bounds.lower * rho, upper: bounds.upper * rho }
    }

    pub fn inverse(&self) -> ScalingTransform {
        ScalingTransform { rho: self.rho.recip(), shift: -(&self.shift / &self.rho) }
    }
}

/// Moves a system from `D` to `rho · D + v`: frequencies are divided by `rho`.
pub fn rescale_system(sys: &ExponentSystem, rho: &Rational, v: &Rational) -> Result<(ExponentSystem, ScalingTransform)> {
    if !rho.is_positive() {
        return Err(Error::InvalidParameter { name: "rho", value: rho.to_string(), reason: "must be positive" });
    }
    let system = ExponentSystem::new(sys.offsets.clone(), &sys.scale * rho)?;
    Ok((system, ScalingTransform { rho: rho.clone(), shift: v.clone() }))
}
