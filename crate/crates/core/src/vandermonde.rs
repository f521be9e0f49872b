//! The matrix `Γ = (e^{2πi δ_j p_k})`, integer nodes, the torus metric and the sine ratio.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{ExponentSystem, IntegerIntervalUnion, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, MatrixJson};
use crate::rational::Rational;

/// Absolute tolerance below which a floating wrap distance counts as zero.
pub const WRAP_ZERO_TOL: f64 = 1e-12;

/// `Γ` with columns in ascending node order and rows in the given delta order.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeMatrix {
    entries: CMatrix,
    nodes: Vec<i64>,
    deltas: Vec<Rational>,
    effective_spacing: Option<Rational>,
}

impl NodeMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn nodes(&self) -> &[i64] {
        &self.nodes
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    /// `h` when the deltas are exactly `0, h, 2h, ...`.
    pub fn effective_spacing(&self) -> Option<&Rational> {
        self.effective_spacing.as_ref()
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Matrix for a system on a domain after both are moved to the integer grid.
    pub fn from_system(system: &ExponentSystem, domain: &RationalIntervalUnion) -> Result<Self> {
        let (grid_system, grid) = system.grid_form(domain)?;
        build_gamma(grid_system.offsets(), &nodes_of_union(&grid))
    }

    /// Uniform deltas `j · spacing`, `j = 0..rows`.
    pub fn uniform(nodes: &[i64], spacing: &Rational, rows: usize) -> Result<Self> {
        let deltas: Vec<Rational> = (0..rows as i64).map(|j| spacing * Rational::from_integer(j)).collect();
        build_gamma(&deltas, nodes)
    }

    pub fn to_json_repr(&self) -> MatrixJson {
        self.entries.to_json_repr()
    }

    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.entries.to_le_bytes()
    }
}

/// Rectangular `rows × nodes.len()` block `e^{2πi j h p_k}` with exact phase reduction; nodes in
/// the given order.
pub fn uniform_block(nodes: &[i64], spacing: &Rational, rows: usize) -> CMatrix {
    let phases: Vec<Vec<f64>> = (0..rows as i64)
        .map(|j| nodes.iter().map(|&p| (spacing * Rational::from_integer(j) * Rational::from_integer(p)).frac().to_f64()).collect())
        .collect();
    CMatrix::from_fn(rows, nodes.len(), |j, k| unit_phase(phases[j][k]))
}

/// Every integer covered by the dilated blocks `{e_j, ..., e_j + N - 1}`, ascending.
pub fn nodes_of_union(u: &IntegerIntervalUnion) -> Vec<i64> {
    let n = u.scale();
    u.endpoints().iter().flat_map(|&e| e..e + n).collect()
}

/// `e^{2πi x}` after reducing `x` to `[-1/2, 1/2]`.
pub fn unit_phase(x: f64) -> Complex64 {
    let y = x - x.round();
    Complex64::from_polar(1.0, 2.0 * PI * y)
}

/// Builds `Γ_{jk} = e^{2πi δ_j p_k}` with the phase `δ_j p_k` reduced modulo 1 exactly.
pub fn build_gamma(deltas: &[Rational], nodes: &[i64]) -> Result<NodeMatrix> {
    if deltas.len() != nodes.len() || nodes.is_empty() {
        return Err(Error::DimensionMismatch { rows: deltas.len(), cols: nodes.len() });
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidParameter {
                name: "nodes",
                value: w[0].to_string(),
                reason: "nodes must be pairwise distinct",
            });
        }
    }
    let phases: Vec<Vec<f64>> = deltas
        .iter()
        .map(|d| sorted.iter().map(|&p| (d * Rational::from_integer(p)).frac().to_f64()).collect())
        .collect();
    let entries = CMatrix::from_fn(deltas.len(), sorted.len(), |j, k| unit_phase(phases[j][k]));
    Ok(NodeMatrix {
        entries,
        nodes: sorted,
        deltas: deltas.to_vec(),
        effective_spacing: arithmetic_step(deltas),
    })
}

/// Float fallback of [`build_gamma`] for irrational-looking inputs; phases reduced in `f64`.
pub fn build_gamma_f64(deltas: &[f64], nodes: &[i64]) -> Result<CMatrix> {
    if deltas.len() != nodes.len() || nodes.is_empty() {
        return Err(Error::DimensionMismatch { rows: deltas.len(), cols: nodes.len() });
    }
    if deltas.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite { context: "deltas" });
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    Ok(CMatrix::from_fn(deltas.len(), sorted.len(), |j, k| unit_phase((deltas[j] * sorted[k] as f64).rem_euclid(1.0))))
}

fn arithmetic_step(deltas: &[Rational]) -> Option<Rational> {
    if !deltas.first()?.is_zero() {
        return None;
    }
    let step = deltas.get(1).cloned().unwrap_or_else(Rational::zero);
    let ok = deltas.iter().enumerate().all(|(j, d)| *d == &step * Rational::from_integer(j as i64));
    ok.then_some(step)
}

/// `min_n |t - s - n|`, in `[0, 1/2]`; values within `1e-12` of zero are returned as zero.
pub fn wrap_distance(t: f64, s: f64) -> f64 {
    let d = (t - s).rem_euclid(1.0);
    let w = d.min(1.0 - d);
    if w < WRAP_ZERO_TOL {
        0.0
    } else {
        w
    }
}

/// Exact torus distance of two rationals.
pub fn wrap_distance_exact(t: &Rational, s: &Rational) -> Rational {
    let d = (t - s).frac();
    let other = Rational::one() - &d;
    if d <= other {
        d
    } else {
        other
    }
}

/// `|sin(π m x) / sin(π x)|`, equal to `m` at integers; the modulus of `Σ_{j<m} e^{2πi x j}`.
pub fn sin_ratio(m: u64, x: f64) -> f64 {
    let m_f = m as f64;
    let y = x - x.round();
    if y == 0.0 {
        return m_f;
    }
    ((PI * m_f * y).sin() / (PI * y).sin()).abs().min(m_f)
}

/// Modulus of the inner product of the columns for nodes `a` and `b` under uniform deltas
/// `j · spacing`, `j < l`.
pub fn coherence(a: i64, b: i64, spacing: &Rational, l: u64) -> Result<f64> {
    if a == b {
        return Err(Error::InvalidParameter {
            name: "nodes",
            value: a.to_string(),
            reason: "coherence needs two distinct nodes",
        });
    }
    Ok(sin_ratio(l, (spacing * Rational::from_integer(a - b)).frac().to_f64()))
}

/// Serializable form of a [`NodeMatrix`].
#[derive(Serialize)]
pub struct NodeMatrixReport<'a> {
    pub nodes: &'a [i64],
    pub deltas: &'a [Rational],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_spacing: Option<&'a Rational>,
    pub matrix: MatrixJson,
}

impl NodeMatrix {
    pub fn report(&self) -> NodeMatrixReport<'_> {
        NodeMatrixReport {
            nodes: &self.nodes,
            deltas: &self.deltas,
            effective_spacing: self.effective_spacing.as_ref(),
            matrix: self.to_json_repr(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::normalize_to_integer_grid;
    use crate::linalg::inner;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn geometric_sum(m: u64, x: f64) -> f64 {
        (0..m).map(|j| Complex64::from_polar(1.0, 2.0 * PI * x * j as f64)).sum::<Complex64>().norm()
    }

    #[test]
    fn nodes_examples() {
        let u = IntegerIntervalUnion::new(vec![0, 3], 1).unwrap();
        assert_eq!(nodes_of_union(&u), vec![0, 3]);
        let u = IntegerIntervalUnion::new(vec![0, 10], 3).unwrap();
        assert_eq!(nodes_of_union(&u), vec![0, 1, 2, 10, 11, 12]);
        let u = IntegerIntervalUnion::new(vec![0], 4).unwrap();
        assert_eq!(nodes_of_union(&u), vec![0, 1, 2, 3]);
        assert!(IntegerIntervalUnion::new(vec![0, 2], 3).is_err());
    }

    #[test]
    fn gamma_examples() {
        let one = Complex64::new(1.0, 0.0);
        let g = build_gamma(&[r(0, 1), r(1, 2)], &[0, 3]).unwrap();
        let expect = CMatrix::from_rows(&[vec![one, one], vec![one, -one]]);
        assert!(g.entries().max_abs_diff(&expect) < 1e-15);
        let g = build_gamma(&[r(0, 1), r(1, 2)], &[0, 2]).unwrap();
        assert!(g.entries().max_abs_diff(&CMatrix::from_rows(&[vec![one, one], vec![one, one]])) < 1e-15);
        let g = build_gamma(&[r(0, 1)], &[5]).unwrap();
        assert_eq!(g.entries()[(0, 0)], one);
        assert!(build_gamma(&[r(0, 1)], &[0, 1]).is_err());
        assert!(build_gamma(&[r(0, 1), r(1, 3)], &[4, 4]).is_err());
    }

    #[test]
    fn columns_follow_ascending_nodes() {
        let g = build_gamma(&[r(0, 1), r(1, 5)], &[3, 1]).unwrap();
        assert_eq!(g.nodes(), &[1, 3]);
        assert!((g.entries()[(1, 0)] - unit_phase(0.2)).norm() < 1e-15);
    }

    #[test]
    fn exact_phase_reduction_survives_large_nodes() {
        let d = r(1, 3);
        let big = 3_000_000_000_001i64;
        let g = build_gamma(&[r(0, 1), d], &[0, big]).unwrap();
        assert!((g.entries()[(1, 1)] - unit_phase(1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn effective_spacing_detected() {
        let h = r(1, 6) + r(1, 1000);
        let g = NodeMatrix::uniform(&[0, 1, 2, 10, 11, 12], &h, 6).unwrap();
        assert_eq!(g.effective_spacing(), Some(&h));
        let g = build_gamma(&[r(0, 1), r(1, 3), r(1, 2)], &[0, 1, 2]).unwrap();
        assert_eq!(g.effective_spacing(), None);
    }

    #[test]
    fn wrap_distance_examples() {
        assert!((wrap_distance(0.7, 0.1) - 0.4).abs() < 1e-15);
        assert_eq!(wrap_distance(0.3, 0.3), 0.0);
        for n in 2..=8i64 {
            let a = r(3 * n - 1, 2 * n);
            let b = r(n - 1, 2 * n);
            assert!(wrap_distance_exact(&a, &b).is_zero());
            assert_eq!(wrap_distance(a.to_f64(), b.to_f64()), 0.0);
        }
    }

    #[test]
    fn sin_ratio_examples() {
        assert!((sin_ratio(2, 0.25) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sin_ratio(5, 0.0), 5.0);
        assert!((sin_ratio(7, 0.13) - geometric_sum(7, 0.13)).abs() < 1e-12);
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(coherence(0, 2, &r(1, 2), 2).unwrap(), 2.0);
        assert!(coherence(0, 3, &r(1, 2), 2).unwrap() < 1e-15);
        assert_eq!(coherence(0, 18, &r(1, 6), 6).unwrap(), 6.0);
        assert!(coherence(0, 1, &r(1, 6), 6).unwrap() < 1e-14);
        assert!(coherence(4, 4, &r(1, 6), 6).is_err());
    }

    #[test]
    fn coherence_is_column_inner_product() {
        let h = r(1, 6) + r(1, 1000);
        let nodes = [0, 1, 2, 10, 11, 12];
        let g = NodeMatrix::uniform(&nodes, &h, 6).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                if a != b {
                    let ip = inner(&g.entries().column(a), &g.entries().column(b)).norm();
                    let c = coherence(nodes[a], nodes[b], &h, 6).unwrap();
                    assert!((ip - c).abs() < 1e-12, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn fourier_matrix_is_scaled_unitary() {
        for l in 1..=9i64 {
            let deltas: Vec<Rational> = (0..l).map(|j| r(j, l)).collect();
            let nodes: Vec<i64> = (0..l).collect();
            let g = build_gamma(&deltas, &nodes).unwrap();
            let mut scaled = CMatrix::identity(l as usize);
            for i in 0..l as usize {
                scaled[(i, i)] *= l as f64;
            }
            assert!(g.entries().gram().max_abs_diff(&scaled) < 1e-10);
        }
    }

    #[test]
    fn matrix_of_system_on_rational_domain() {
        let u = RationalIntervalUnion::new(vec![r(0, 1), r(10, 3)]).unwrap();
        let grid = normalize_to_integer_grid(&u).unwrap();
        let sys = ExponentSystem::new((0..6).map(|j| r(j, 6)).collect(), r(1, 3)).unwrap();
        let g = NodeMatrix::from_system(&sys, &u).unwrap();
        assert_eq!(g.nodes(), &nodes_of_union(&grid)[..]);
        assert_eq!(g.size(), 6);
    }

    #[test]
    fn float_fallback_agrees_with_exact() {
        let deltas = [r(0, 1), r(2, 7), r(4, 7)];
        let exact = build_gamma(&deltas, &[0, 5, 9]).unwrap();
        let fl = build_gamma_f64(&deltas.iter().map(Rational::to_f64).collect::<Vec<_>>(), &[0, 5, 9]).unwrap();
        assert!(exact.entries().max_abs_diff(&fl) < 1e-13);
    }

    proptest! {
        #[test]
        fn sin_ratio_is_geometric_sum(m in 1u64..=64, x in -2.0f64..2.0) {
            prop_assert!((sin_ratio(m, x) - geometric_sum(m, x)).abs() < 1e-10);
        }

        #[test]
        fn sin_ratio_periodic_and_even(m in 1u64..=40, x in -3.0f64..3.0) {
            let v = sin_ratio(m, x);
            prop_assert!((v - sin_ratio(m, x + 1.0)).abs() < 1e-9);
            prop_assert!((v - sin_ratio(m, -x)).abs() < 1e-12);
            prop_assert!((0.0..=m as f64).contains(&v));
        }

        #[test]
        fn sin_ratio_vanishes_at_nontrivial_roots(m in 2u64..=40, k in 1u64..200) {
            prop_assume!(k % m != 0);
            prop_assert!(sin_ratio(m, k as f64 / m as f64) < 1e-12);
        }

        #[test]
        fn wrap_distance_symmetric_and_bounded(t in -5.0f64..5.0, s in -5.0f64..5.0) {
            let d = wrap_distance(t, s);
            prop_assert!((0.0..=0.5).contains(&d));
            prop_assert!((d - wrap_distance(s, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn sin_ratio_decreasing_below_first_root() {
        for m in 2u64..=40 {
            let steps = 2000;
            let mut prev = m as f64;
            for i in 1..steps {
                let t = i as f64 / (steps as f64 * m as f64);
                let v = sin_ratio(m, t);
                assert!(v < prev && v < m as f64, "m={m} t={t}");
                prev = v;
            }
        }
    }
}
