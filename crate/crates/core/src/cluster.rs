//! Coherence clusters of Vandermonde columns, their spectra, and the two-sided bound
//! `√(1 − Lα) σ̃_j ≤ σ_j ≤ √(1 + Lα) σ̃_j`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rational::Rational;
use crate::vandermonde::{coherence, uniform_block};

/// `L · sin(1/L)`.
pub fn default_threshold(l: usize) -> f64 {
    let l = l as f64;
    l * (1.0 / l).sin()
}

/// Columns grouped into connected components of the graph `coherence ≥ threshold`.
///
/// `nodes` is stored ascending; clusters are ascending index lists into it, ordered by first member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterPartition {
    pub nodes: Vec<i64>,
    pub spacing: Rational,
    pub rows: usize,
    pub threshold: f64,
    pub clusters: Vec<Vec<usize>>,
    pub max_cluster_size: usize,
    pub cross_coherence: f64,
    pub alpha: f64,
    /// Some cluster contains a pair below the threshold (connected but not a clique).
    pub chained: bool,
}

pub fn partition_by_coherence(nodes: &[i64], spacing: &Rational, l: usize, threshold: f64) -> Result<ClusterPartition> {
    if !(threshold > 0.0 && threshold < l as f64) {
        return Err(Error::InvalidParameter {
            name: "threshold",
            value: threshold.to_string(),
            reason: "must lie in (0, L)",
        });
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    let mut coh = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = coherence(sorted[i], sorted[j], spacing, l as u64)?;
            coh[i][j] = c;
            coh[j][i] = c;
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (i, row) in coh.iter().enumerate() {
        for (j, &c) in row.iter().enumerate().skip(i + 1) {
            if c >= threshold {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for (i, &root) in roots.iter().enumerate() {
        if slot[root] == usize::MAX {
            slot[root] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot[root]].push(i);
    }
    let mut cross: f64 = 0.0;
    let mut chained = false;
    for i in 0..n {
        for j in i + 1..n {
            if roots[i] == roots[j] {
                chained |= coh[i][j] < threshold;
            } else {
                cross = cross.max(coh[i][j]);
            }
        }
    }
    let max_cluster_size = clusters.iter().map(Vec::len).max().unwrap_or(0);
    Ok(ClusterPartition {
        nodes: sorted,
        spacing: spacing.clone(),
        rows: l,
        threshold,
        clusters,
        max_cluster_size,
        cross_coherence: cross,
        alpha: (cross / l as f64).min(1.0).asin(),
        chained,
    })
}

impl ClusterPartition {
    fn column_block(&self, cluster: usize) -> Result<CMatrix> {
        let members: Vec<i64> = self.clusters[cluster].iter().map(|&i| self.nodes[i]).collect();
        Ok(uniform_block(&members, &self.spacing, self.rows))
    }

    /// Singular values of one cluster's column block in closed form: `√L` for a singleton and
    /// `√(L ± |b|)` for a pair with coherence `|b|`.
    pub fn cluster_spectrum(&self, cluster: usize) -> Result<Vec<f64>> {
        let members = &self.clusters[cluster];
        let l = self.rows as f64;
        match members.len() {
            1 => Ok(vec![l.sqrt()]),
            2 => {
                let b = coherence(self.nodes[members[0]], self.nodes[members[1]], &self.spacing, self.rows as u64)?;
                Ok(vec![(l + b).sqrt(), (l - b).max(0.0).sqrt()])
            }
            size => Err(Error::UnsupportedClusterSize { cluster, size }),
        }
    }

    /// Singular values of one cluster's column block from a dense factorization.
    pub fn cluster_spectrum_dense(&self, cluster: usize) -> Result<Vec<f64>> {
        linalg::singular_values(&self.column_block(cluster)?)
    }

    /// `π/2 − θ_min`, where `θ_min` is the smallest principal angle between any two cluster spans.
    pub fn principal_alpha(&self) -> Result<f64> {
        Ok(FRAC_PI_2 - principal_angle_check(self)?)
    }
}

/// Smallest principal angle between the column spans of any two distinct clusters (`π/2` when
/// there is a single cluster).
pub fn principal_angle_check(partition: &ClusterPartition) -> Result<f64> {
    let mut bases: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(partition.clusters.len());
    for k in 0..partition.clusters.len() {
        let block = partition.column_block(k)?;
        bases.push(linalg::orthonormal_columns(&block).map_err(|_| Error::RankDeficientCluster { cluster: k })?);
    }
    let mut max_cos: f64 = 0.0;
    for a in 0..bases.len() {
        for b in a + 1..bases.len() {
            let cross = CMatrix::from_fn(bases[a].len(), bases[b].len(), |i, j| linalg::inner(&bases[a][i], &bases[b][j]));
            let s = linalg::singular_values(&cross)?;
            max_cos = max_cos.max(s[0]);
        }
    }
    Ok(max_cos.min(1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    /// `arcsin(cross_coherence / L)`.
    Coherence,
    /// `π/2 − θ_min` from principal angles of the cluster spans.
    PrincipalAngles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSpectra {
    /// Sizes 1 and 2 only.
    ClosedForm,
    /// Dense singular values of each column block, any size.
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichOptions {
    pub alpha: AlphaSource,
    pub blocks: BlockSpectra,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        SandwichOptions { alpha: AlphaSource::Coherence, blocks: BlockSpectra::ClosedForm }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSandwich {
    pub tilde_sigmas: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: f64,
    pub options: SandwichOptions,
}

impl SpectrumSandwich {
    /// Indices `j` where `σ_j` leaves `[lower_j − tol, upper_j + tol]`; `sigmas` descending.
    pub fn violations(&self, sigmas: &[f64], tol: f64) -> Vec<usize> {
        (0..sigmas.len().min(self.lower.len()))
            .filter(|&j| sigmas[j] < self.lower[j] - tol || sigmas[j] > self.upper[j] + tol)
            .collect()
    }
}

pub fn sandwich(partition: &ClusterPartition, options: SandwichOptions) -> Result<SpectrumSandwich> {
    let alpha = match options.alpha {
        AlphaSource::Coherence => partition.alpha,
        AlphaSource::PrincipalAngles => partition.principal_alpha()?,
    };
    let l_alpha = partition.rows as f64 * alpha;
    if l_alpha >= 1.0 {
        return Err(Error::SandwichNotApplicable { value: l_alpha });
    }
    let mut tilde = Vec::with_capacity(partition.nodes.len());
    for k in 0..partition.clusters.len() {
        let spectrum = match options.blocks {
            BlockSpectra::ClosedForm => partition.cluster_spectrum(k)?,
            BlockSpectra::Dense => partition.cluster_spectrum_dense(k)?,
        };
        tilde.extend(spectrum);
    }
    tilde.sort_by(|a, b| b.total_cmp(a));
    let lo = (1.0 - l_alpha).sqrt();
    let hi = (1.0 + l_alpha).sqrt();
    Ok(SpectrumSandwich {
        lower: tilde.iter().map(|s| lo * s).collect(),
        upper: tilde.iter().map(|s| hi * s).collect(),
        tilde_sigmas: tilde,
        alpha,
        options,
    })
}
