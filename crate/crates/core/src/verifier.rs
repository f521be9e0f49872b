//! Independent checks: exact Gram forms of finite exponential sums, sampled Riesz ratios,
//! restriction sums, regression examples and certificate verification reports.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{normalize_to_integer_grid, ExponentSystem, RationalIntervalUnion};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rational::Rational;
use crate::spectral::{self, SingularSpectrum};
use crate::theorems::FrameCertificate;
use crate::vandermonde::{build_gamma, nodes_of_union, wrap_distance, wrap_distance_exact, NodeMatrix};

pub const DEFAULT_N_MAX: i64 = 8;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 42;
/// Absolute tolerance for oracle-versus-certificate comparisons in grid units.
pub const CONTAINMENT_TOL: f64 = 1e-8;

/// `sin(πx) / (πx)`, 1 at 0.
fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `∫_u e^{2πi(λ−μ)x} dx`.
pub fn gram_entry(lambda: f64, mu: f64, u: &RationalIntervalUnion) -> Complex64 {
    let d = lambda - mu;
    if d == 0.0 {
        return Complex64::new(u.measure() as f64, 0.0);
    }
    let s = sinc(d);
    u.endpoints().iter().map(|e| Complex64::from_polar(s, 2.0 * PI * d * (e.to_f64() + 0.5))).sum()
}

/// Gram matrix `G_{ij} = ⟨e_{λ_i}, e_{λ_j}⟩_{L²(u)}` of a finite frequency list.
#[derive(Clone, Debug)]
pub struct GramForm {
    pub frequencies: Vec<f64>,
    pub gram: CMatrix,
}

impl GramForm {
    pub fn new(frequencies: Vec<f64>, u: &RationalIntervalUnion) -> Self {
        let n = frequencies.len();
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| gram_entry(frequencies[i], frequencies[j], u)).collect())
            .collect();
        GramForm { gram: CMatrix::from_rows(&rows), frequencies }
    }

    /// Truncation `|n| ≤ n_max` of a system on a domain.
    pub fn of_system(sys: &ExponentSystem, u: &RationalIntervalUnion, n_max: i64) -> Self {
        Self::new(sys.truncate(n_max), u)
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// `‖Σ a_j e_{λ_j}‖² = Σ_{ij} a_i conj(a_j) G_{ij}`.
    pub fn norm_sqr(&self, a: &[Complex64]) -> f64 {
        let n = self.len();
        let g = self.gram.as_slice();
        let mut total = 0.0;
        for i in 0..n {
            let row = &g[i * n..(i + 1) * n];
            let inner: Complex64 = row.iter().zip(a).map(|(gij, aj)| gij * aj.conj()).sum();
            total += (a[i] * inner).re;
        }
        total
    }

    pub fn ratio(&self, a: &[Complex64]) -> f64 {
        self.norm_sqr(a) / linalg::norm(a).powi(2)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(linalg::hermitian_eigenvalues(&self.gram)?[0])
    }
}

/// Extremes of sampled Riesz ratios.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub trials: usize,
    pub seed: u64,
    pub n_max: i64,
    #[serde(default)]
    pub power_steps: usize,
}

/// Standard complex Gaussian vector via Box–Muller on ChaCha8 seeded with `seed`; all-zero
/// draws are redrawn.
pub fn gaussian_vector(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<Complex64> = (0..len)
            .map(|_| {
                let u1 = 1.0 - (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                let rad = (-2.0 * u1.ln()).sqrt();
                let (s, c) = (2.0 * PI * u2).sin_cos();
                Complex64::new(rad * c, rad * s) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        if v.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
            return v;
        }
    }
}

pub fn riesz_ratio_sample(sys: &ExponentSystem, u: &RationalIntervalUnion, n_max: i64, trials: usize, seed: u64) -> Result<RatioSample> {
    riesz_ratio_sample_with(sys, u, n_max, trials, seed, 0)
}

/// As [`riesz_ratio_sample`], then pushes the best draws toward the extreme eigenvectors with
/// `power_steps` power iterations on `G` and on `cI − G`.
pub fn riesz_ratio_sample_with(
    sys: &ExponentSystem,
    u: &RationalIntervalUnion,
    n_max: i64,
    trials: usize,
    seed: u64,
    power_steps: usize,
) -> Result<RatioSample> {
    if n_max < 1 {
        return Err(Error::InvalidParameter { name: "n_max", value: n_max.to_string(), reason: "must be at least 1" });
    }
    if trials < 1 {
        return Err(Error::InvalidParameter { name: "trials", value: trials.to_string(), reason: "must be at least 1" });
    }
    let form = GramForm::of_system(sys, u, n_max);
    Ok(sample_form(&form, trials, seed, n_max, power_steps))
}

pub fn sample_form(form: &GramForm, trials: usize, seed: u64, n_max: i64, power_steps: usize) -> RatioSample {
    let draws: Vec<(f64, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| (form.ratio(&gaussian_vector(form.len(), seed.wrapping_add(t as u64))), t))
        .collect();
    let lowest = draws.iter().min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))).unwrap();
    let highest = draws.iter().max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1))).unwrap();
    let (mut min_ratio, mut max_ratio) = (lowest.0, highest.0);
    if power_steps > 0 {
        let shift = gershgorin_radius(&form.gram);
        let mut hi = gaussian_vector(form.len(), seed.wrapping_add(highest.1 as u64));
        let mut lo = gaussian_vector(form.len(), seed.wrapping_add(lowest.1 as u64));
        // The ratio is the quadratic form of conj(G), so iterate with conj(G).
        let apply = |v: &[Complex64]| -> Vec<Complex64> {
            let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            form.gram.mul_vec(&conj).into_iter().map(|z| z.conj()).collect()
        };
        for _ in 0..power_steps {
            hi = normalized(apply(&hi));
            let g_lo = apply(&lo);
            lo = normalized(lo.iter().zip(&g_lo).map(|(x, gx)| x * shift - gx).collect());
            max_ratio = max_ratio.max(form.ratio(&hi));
            min_ratio = min_ratio.min(form.ratio(&lo));
        }
    }
    RatioSample { min_ratio, max_ratio, trials, seed, n_max, power_steps }
}

fn gershgorin_radius(m: &CMatrix) -> f64 {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = linalg::norm(&v);
    if n == 0.0 {
        v
    } else {
        v.into_iter().map(|z| z / n).collect()
    }
}

/// Extremes of `Σ_λ |⟨f, e_λ⟩|² / ‖f‖²` over random `f` supported on a subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionSample {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub trials: usize,
    pub seed: u64,
    pub band: i64,
}

/// Analysis sums of a unit-scale system on an integer union `superset`, for random trigonometric
/// polynomials with frequencies `k/2`, `|k| ≤ band`, cut off to the half-open `segments`.
///
/// The infinite sum is evaluated exactly: with `f_k(y) = f(p_k + y)` on `[0, 1)`,
/// `Σ_λ |⟨f, e_λ⟩|² = Σ_{k,k'} (Γ*Γ)_{kk'} ∫ f_k conj(f_{k'})`.
pub fn bessel_check_restriction(
    sys: &ExponentSystem,
    superset: &RationalIntervalUnion,
    segments: &[(Rational, Rational)],
    trials: usize,
    seed: u64,
    band: i64,
) -> Result<RestrictionSample> {
    if *sys.scale() != Rational::one() || superset.endpoints().iter().any(|e| !e.is_integer()) {
        return Err(Error::InvalidParameter {
            name: "superset",
            value: format!("{:?}", superset.endpoints()),
            reason: "restriction sums need a unit-scale system on integer intervals",
        });
    }
    if segments.is_empty() || segments.iter().any(|(l, r)| l >= r) {
        return Err(Error::InvalidParameter { name: "segments", value: format!("{segments:?}"), reason: "need nonempty segments" });
    }
    let outer = superset.segments();
    for (l, r) in segments {
        if !outer.iter().any(|(a, b)| a <= l && r <= b) {
            return Err(Error::SubdomainNotContained);
        }
    }
    let gamma = NodeMatrix::from_system(sys, superset)?;
    let (canonical, shift) = superset.canonicalize();
    let nodes: Vec<i64> = nodes_of_union(&normalize_to_integer_grid(&canonical)?).iter().map(|p| p + shift.to_i64().unwrap()).collect();
    let h = gamma.entries().gram();
    let l = nodes.len();
    // Overlap of the segments seen from nodes k and k': {y ∈ [0,1) : p_k + y ∈ u, p_k' + y ∈ u}.
    let local: Vec<Vec<(Rational, Rational)>> = nodes
        .iter()
        .map(|&p| {
            let p = Rational::from_integer(p);
            segments
                .iter()
                .filter_map(|(a, b)| {
                    let lo = (a - &p).max(Rational::zero());
                    let hi = (b - &p).min(Rational::one());
                    (lo < hi).then_some((lo, hi))
                })
                .collect()
        })
        .collect();
    let overlaps: Vec<Vec<(f64, f64)>> = (0..l * l)
        .map(|idx| {
            let (k, kp) = (idx / l, idx % l);
            let mut out = Vec::new();
            for (a, b) in &local[k] {
                for (c, d) in &local[kp] {
                    let lo = a.max(c).clone();
                    let hi = b.min(d).clone();
                    if lo < hi {
                        out.push((lo.to_f64(), hi.to_f64()));
                    }
                }
            }
            out
        })
        .collect();
    let freqs: Vec<f64> = (-band..=band).map(|k| k as f64 / 2.0).collect();
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let c = gaussian_vector(freqs.len(), seed.wrapping_add(t as u64));
            let mut frame = 0.0;
            let mut norm = 0.0;
            for k in 0..l {
                for kp in 0..l {
                    if overlaps[k * l + kp].is_empty() {
                        continue;
                    }
                    // ∫ f_k conj(f_k') over the overlap.
                    let mut p = Complex64::new(0.0, 0.0);
                    for (m, &mu) in freqs.iter().enumerate() {
                        for (mp, &nu) in freqs.iter().enumerate() {
                            let phase = Complex64::from_polar(1.0, 2.0 * PI * (mu * nodes[k] as f64 - nu * nodes[kp] as f64));
                            let d = mu - nu;
                            let integral: Complex64 = overlaps[k * l + kp]
                                .iter()
                                .map(|&(a, b)| Complex64::from_polar((b - a) * sinc(d * (b - a)), PI * d * (a + b)))
                                .sum();
                            p += c[m] * c[mp].conj() * phase * integral;
                        }
                    }
                    frame += (h[(k, kp)] * p).re;
                    if k == kp {
                        norm += p.re;
                    }
                }
            }
            frame / norm
        })
        .collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RestrictionSample { min_ratio, max_ratio, trials, seed, band })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub schema: String,
    pub passed: bool,
    pub checks: Vec<RegressionCheck>,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> RegressionCheck {
    RegressionCheck { name: name.into(), passed, detail: detail.into() }
}

/// The two-interval counterexamples: an orthogonal unperturbed matrix, singular perturbed
/// matrices for shifts `1/N`, `N = 2..8`, and the singular matrix of `[0,1) ∪ [2,3)`.
pub fn regression_examples() -> Result<RegressionReport> {
    let mut checks = Vec::new();
    let half = [Rational::zero(), Rational::new(1, 2)];

    let g = build_gamma(&half, &[0, 3])?;
    let one = Complex64::new(1.0, 0.0);
    let expect = CMatrix::from_rows(&[vec![one, one], vec![one, -one]]);
    let diff = g.entries().max_abs_diff(&expect);
    checks.push(check("unperturbed_matrix_entries", diff < 1e-12, format!("max entry error {diff:.3e}")));
    let c = spectral::optimal_frame_constants(&g)?;
    let ok = (c.lower - 2.0).abs() < 1e-10 && (c.upper - 2.0).abs() < 1e-10;
    checks.push(check("unperturbed_constants", ok, format!("A_opt = {}, B_opt = {}", c.lower, c.upper)));

    for n in 2..=8i64 {
        let domain = RationalIntervalUnion::new(vec![Rational::zero(), Rational::new(3 * n - 1, n)])?;
        let grid = normalize_to_integer_grid(&domain)?;
        let nodes = nodes_of_union(&grid);
        let deltas: Vec<Rational> = (0..2 * n).map(|j| Rational::new(j, 2 * n)).collect();
        let spectrum = spectral::singular_values(&build_gamma(&deltas, &nodes)?)?;
        let a = Rational::new(n - 1, 2 * n);
        let b = Rational::new(3 * n - 1, 2 * n);
        let coincide = wrap_distance_exact(&a, &b).is_zero() && wrap_distance(a.to_f64(), b.to_f64()) == 0.0;
        checks.push(check(
            format!("perturbed_singular_N{n}"),
            spectrum.is_singular() && coincide,
            format!("sigma_min / sigma_max = {:.3e}, nodes {a} and {b} coincide: {coincide}", spectrum.sigma_min() / spectrum.sigma_max()),
        ));
    }

    let g2 = build_gamma(&half, &[0, 2])?;
    let spectrum = spectral::singular_values(&g2)?;
    let ok = spectrum.is_singular() && (spectrum.values[0] - 2.0).abs() < 1e-12 && spectrum.values[1].abs() < 1e-12;
    checks.push(check("even_positions_singular", ok, format!("sigma = {:?}", spectrum.values)));

    let passed = checks.iter().all(|c| c.passed);
    Ok(RegressionReport { schema: "v1".into(), passed, checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

/// A singular value (index into the descending spectrum) outside the certified range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub side: Side,
    pub sigma_sq: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    #[serde(rename = "A_opt")]
    pub a_opt: f64,
    #[serde(rename = "B_opt")]
    pub b_opt: f64,
    pub spectrum: SingularSpectrum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub certificate: FrameCertificate,
    /// Optimal constants in the certificate's units.
    pub oracle: OracleSummary,
    pub sample: RatioSample,
    /// Sampled ratios inside `[A_opt − 1e-8, B_opt + 1e-8]`.
    pub sample_within_oracle: bool,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n_max: i64,
    pub trials: usize,
    pub seed: u64,
    pub power_steps: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n_max: DEFAULT_N_MAX, trials: DEFAULT_TRIALS, seed: DEFAULT_SEED, power_steps: 0 }
    }
}

/// Indices of squared singular values outside `[A − tol, B + tol]`; a nonpositive `A` never
/// triggers on the lower side.
pub fn containment_violations(spectrum: &SingularSpectrum, lower: f64, upper: f64, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for (index, s) in spectrum.values.iter().enumerate() {
        let sq = s * s;
        if lower > 0.0 && sq < lower - tol {
            out.push(Violation { index, side: Side::Lower, sigma_sq: sq, bound: lower });
        }
        if sq > upper + tol {
            out.push(Violation { index, side: Side::Upper, sigma_sq: sq, bound: upper });
        }
    }
    out
}

/// Certificate versus oracle versus sampled Riesz ratios.
pub fn verify_certificate(cert: &FrameCertificate, options: VerifyOptions) -> Result<VerificationReport> {
    let spectrum = spectral::singular_values(&cert.matrix()?)?;
    let grid = cert.grid_bounds();
    let violations = containment_violations(&spectrum, grid.lower, grid.upper, CONTAINMENT_TOL);
    let rho = cert.system.scale().to_f64();
    let c = spectrum.frame_constants();
    let (a_opt, b_opt) = (c.lower * rho, c.upper * rho);
    let sample = riesz_ratio_sample_with(&cert.system, &cert.domain, options.n_max, options.trials, options.seed, options.power_steps)?;
    let tol = CONTAINMENT_TOL * rho.max(1.0);
    let sample_within_oracle = sample.min_ratio >= a_opt - tol && sample.max_ratio <= b_opt + tol;
    let verdict = if violations.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(VerificationReport {
        schema: "v1".into(),
        certificate: cert.clone(),
        oracle: OracleSummary { a_opt, b_opt, spectrum },
        sample,
        sample_within_oracle,
        violations,
        verdict,
    })
}
