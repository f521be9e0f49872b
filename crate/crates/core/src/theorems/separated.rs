//! Standard exponentials on `M` separated unit intervals inside `[0, N)`.

use std::f64::consts::PI;

use super::certificate::{flags, FrameCertificate, Method, Param};
use crate::domain::{ExponentSystem, FrameBounds, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::vandermonde::sin_ratio;

/// Integer torus distance `min(x mod N, N − x mod N)`.
pub fn wrap_int(x: i64, n: i64) -> i64 {
    let r = x.rem_euclid(n);
    r.min(n - r)
}

/// `N` times the left side of the separation condition for a node difference `d`.
pub fn separation_margin(d: i64, n: i64, m: i64) -> i64 {
    wrap_int(d, n) - wrap_int(d * m, n)
}

/// Lower limit for `u`: `(N/π) arccos(M sin(1/M))` for even `N` and
/// `(N/π) arccos(M sin(1/M) cos(π/(2N))) − 1/2` for odd `N`.
pub fn u_threshold(n: i64, m: i64) -> f64 {
    let (n_f, m_f) = (n as f64, m as f64);
    let kernel = m_f * (1.0 / m_f).sin();
    if n % 2 == 0 {
        n_f / PI * kernel.acos()
    } else {
        n_f / PI * (kernel * (PI / (2.0 * n_f)).cos()).acos() - 0.5
    }
}

/// `|cos(πu/N)|` for even `N`, `|cos(π/(2N) + πu/N) / cos(π/(2N))|` for odd `N`.
pub fn separation_factor(n: i64, u: i64) -> f64 {
    let (n_f, u_f) = (n as f64, u as f64);
    if n % 2 == 0 {
        (PI * u_f / n_f).cos().abs()
    } else {
        ((PI / (2.0 * n_f) + PI * u_f / n_f).cos() / (PI / (2.0 * n_f)).cos()).abs()
    }
}

fn validate(n: i64, m: usize, a: &[i64], u: i64) -> Result<Vec<i64>> {
    let m_i = m as i64;
    if !(m_i > 2 && 2 * m_i <= n) {
        return Err(Error::InvalidParameter { name: "M", value: m.to_string(), reason: "must satisfy 2 < M <= N/2" });
    }
    if a.len() != m {
        return Err(Error::DimensionMismatch { rows: m, cols: a.len() });
    }
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&x| x < 0 || x >= n) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: format!("{a:?}"),
            reason: "must be distinct integers in [0, N)",
        });
    }
    if u < 1 || (u as f64) <= u_threshold(n, m_i) {
        return Err(Error::InvalidParameter {
            name: "u",
            value: u.to_string(),
            reason: "must be a positive integer above the separation threshold",
        });
    }
    Ok(sorted)
}

fn check_pair(a: &[i64], i: usize, j: usize, n: i64, m: i64, u: i64) -> Result<()> {
    let lhs = separation_margin(a[j] - a[i], n, m);
    if lhs <= u {
        return Err(Error::SeparationViolated { first: i, second: j, lhs, rhs: u as f64 });
    }
    Ok(())
}

fn base_certificate(method: Method, n: i64, a: &[i64], u: i64, bounds: FrameBounds) -> Result<FrameCertificate> {
    let m = a.len() as i64;
    let domain = RationalIntervalUnion::from_integers(a)?;
    let system = ExponentSystem::unit((0..m).map(|j| Rational::new(j, n)).collect())?;
    let mut cert = FrameCertificate::new(method, bounds, domain, system);
    cert.param("N", Param::Int(n))
        .param("M", Param::Int(m))
        .param("u", Param::Int(u))
        .param("u_threshold", Param::Real(u_threshold(n, m)));
    Ok(cert)
}

/// `{n + (j−1)/N : j = 1..M}` on `⋃ [a_k, a_k + 1)` with constants `M(1 ∓ c)`, where `c` is
/// [`separation_factor`]. Every pair of nodes must satisfy the separation condition.
pub fn certify_thm_main_3(n: i64, m: usize, a: &[i64], u: i64) -> Result<FrameCertificate> {
    let sorted = validate(n, m, a, u)?;
    for i in 0..m {
        for j in i + 1..m {
            check_pair(&sorted, i, j, n, m as i64, u)?;
        }
    }
    let c = separation_factor(n, u);
    let m_f = m as f64;
    base_certificate(Method::ThmMain3, n, &sorted, u, FrameBounds { lower: m_f * (1.0 - c), upper: m_f * (1.0 + c) })
}

/// The clustered variant: nodes grouped in clusters of at most two, separation required only
/// across clusters, constants `(M ∓ α)(1 ∓ c)` with `α` the largest sine ratio inside a cluster.
///
/// `clusters` lists node values; every node of `a` appears exactly once.
pub fn certify_thm_main_3_corollary(n: i64, m: usize, a: &[i64], u: i64, clusters: &[Vec<i64>]) -> Result<FrameCertificate> {
    let sorted = validate(n, m, a, u)?;
    let mut owner = vec![usize::MAX; m];
    for (k, cluster) in clusters.iter().enumerate() {
        if cluster.len() > 2 {
            return Err(Error::UnsupportedClusterSize { cluster: k, size: cluster.len() });
        }
        for node in cluster {
            let idx = sorted.binary_search(node).map_err(|_| Error::InvalidClusters {
                reason: format!("node {node} is not one of the interval positions"),
            })?;
            if owner[idx] != usize::MAX {
                return Err(Error::InvalidClusters { reason: format!("node {node} appears twice") });
            }
            owner[idx] = k;
        }
    }
    if let Some(idx) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidClusters { reason: format!("node {} is in no cluster", sorted[idx]) });
    }
    let mut alpha: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            if owner[i] == owner[j] {
                alpha = alpha.max(sin_ratio(m as u64, (sorted[j] - sorted[i]) as f64 / n as f64));
            } else {
                check_pair(&sorted, i, j, n, m as i64, u)?;
            }
        }
    }
    let c = separation_factor(n, u);
    let m_f = m as f64;
    let bounds = FrameBounds { lower: (m_f - alpha) * (1.0 - c), upper: (m_f + alpha) * (1.0 + c) };
    let mut cert = base_certificate(Method::ThmMain3Corollary, n, &sorted, u, bounds)?;
    cert.param("alpha", Param::Real(alpha)).flag(flags::ALPHA_WITHIN_CLUSTERS);
    Ok(cert)
}
