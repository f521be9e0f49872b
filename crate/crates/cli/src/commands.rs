use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use expobasis::domain::{union_from_json, ExponentSystem};
use expobasis::spectral::SingularSpectrum;
use expobasis::theorems::{
    self, certify_thm_main_3, certify_thm_main_3_corollary, complement_certificate_with, construct_thm_main,
    construct_thm_main_2, delta_range_thm_main, delta_range_thm_main_2, oracle_certificate, prop_basis, prop_basis_mod,
    BasisWitness, BetaSolution, ComplementRule, DeltaRange,
};
use expobasis::vandermonde::NodeMatrixReport;
use expobasis::verifier::{self, RegressionReport, Verdict, VerificationReport, VerifyOptions};
use expobasis::{FrameCertificate, NodeMatrix};
use serde::Serialize;

use crate::args::{BetaArgs, ConstructArgs, OracleArgs, Rule, SourceArgs, Theorem, VerifyArgs};
use crate::render;

/// Report failed a check; the document is still emitted.
pub const EXIT_VERIFICATION: u8 = 2;

pub struct Rendered {
    pub json: String,
    pub text: String,
    pub status: u8,
    /// Lines for stderr when `status` is nonzero.
    pub diagnostics: Vec<String>,
}

fn rendered<T: Serialize>(value: &T, text: String, status: u8) -> Result<Rendered> {
    Ok(Rendered { json: expobasis::json::to_json_string(value)?, text, status, diagnostics: Vec::new() })
}

fn violation_lines(report: &VerificationReport) -> Vec<String> {
    report
        .violations
        .iter()
        .map(|v| {
            let side = serde_json::to_value(v.side).ok().and_then(|s| s.as_str().map(str::to_string)).unwrap_or_default();
            format!("violation: index {} side {side} (sigma^2 = {:.16e}, bound {:.16e})", v.index, v.sigma_sq, v.bound)
        })
        .collect()
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_input(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("cannot read input file {arg}"))
    }
}

fn required<T: Clone>(value: &Option<T>, flag: &str, thm: Theorem) -> Result<T> {
    value.clone().ok_or_else(|| anyhow!("--{flag} is required for --thm {}", thm_name(thm)))
}

fn thm_name(thm: Theorem) -> &'static str {
    match thm {
        Theorem::Main => "main",
        Theorem::Main2 => "main2",
        Theorem::Main3 => "main3",
        Theorem::Main3Cor => "main3-cor",
        Theorem::Basis => "basis",
        Theorem::BasisMod => "basis-mod",
        Theorem::Complement => "complement",
    }
}

fn parse_clusters(text: &str) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|x| x.trim().parse::<i64>().with_context(|| format!("bad cluster node {x:?}")))
                .collect()
        })
        .collect()
}

fn load_certificate(arg: &str) -> Result<FrameCertificate> {
    Ok(FrameCertificate::from_json(&read_input(arg)?)?)
}

enum Built {
    Certificate { cert: FrameCertificate, range: Option<DeltaRange> },
    Witness(BasisWitness),
}

fn build(source: &SourceArgs) -> Result<Built> {
    let t = &source.theorem;
    let Some(thm) = t.thm else {
        if let Some(arg) = &source.certificate {
            return Ok(Built::Certificate { cert: load_certificate(arg)?, range: None });
        }
        bail!("pass --thm or --certificate");
    };
    let cert = match thm {
        Theorem::Main => {
            let s = required(&t.s, "s", thm)?;
            let delta = required(&t.delta, "delta", thm)?;
            let range = delta_range_thm_main(s, &t.a, &t.epsilons)?;
            let cert = construct_thm_main(s, &t.a, &t.epsilons, &delta)?;
            return Ok(Built::Certificate { cert, range: Some(range) });
        }
        Theorem::Main2 => {
            let n = required(&t.n, "N", thm)?;
            delta_range_thm_main_2(n)?;
            construct_thm_main_2(n, required(&t.m, "m", thm)?, &required(&t.delta, "delta", thm)?)?
        }
        Theorem::Main3 => {
            certify_thm_main_3(required(&t.n, "N", thm)?, required(&t.big_m, "M", thm)?, &t.a, required(&t.u, "u", thm)?)?
        }
        Theorem::Main3Cor => {
            let clusters = parse_clusters(&required(&t.clusters, "clusters", thm)?)?;
            certify_thm_main_3_corollary(
                required(&t.n, "N", thm)?,
                required(&t.big_m, "M", thm)?,
                &t.a,
                required(&t.u, "u", thm)?,
                &clusters,
            )?
        }
        Theorem::Basis => {
            return Ok(Built::Witness(prop_basis(required(&t.n, "N", thm)?, required(&t.big_m, "M", thm)?, &t.a)?));
        }
        Theorem::BasisMod => prop_basis_mod(required(&t.s, "s", thm)?, &t.a)?,
        Theorem::Complement => {
            let arg = source.certificate.as_deref().ok_or_else(|| anyhow!("--certificate is required for --thm complement"))?;
            let rule = match t.rule {
                Rule::Reflected => ComplementRule::Reflected,
                Rule::Duality => ComplementRule::Duality,
            };
            complement_certificate_with(required(&t.big_delta, "Delta", thm)?, &load_certificate(arg)?, rule)?
        }
    };
    Ok(Built::Certificate { cert, range: None })
}

fn build_certificate(source: &SourceArgs) -> Result<FrameCertificate> {
    match build(source)? {
        Built::Certificate { cert, .. } => Ok(cert),
        Built::Witness(_) => bail!("--thm basis proves the basis property without certified constants; use construct or oracle"),
    }
}

#[derive(Serialize)]
struct ConstructReport<'a> {
    schema: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a FrameCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a BasisWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_range: Option<&'a DeltaRange>,
    matrix: NodeMatrixReport<'a>,
}

pub fn construct(args: &ConstructArgs) -> Result<Rendered> {
    match build(&args.source)? {
        Built::Certificate { cert, range } => {
            let matrix = cert.matrix()?;
            let report = ConstructReport {
                schema: "v1",
                certificate: Some(&cert),
                witness: None,
                delta_range: range.as_ref(),
                matrix: matrix.report(),
            };
            rendered(&report, render::construct(&cert, range.as_ref(), &matrix), 0)
        }
        Built::Witness(w) => {
            let matrix = NodeMatrix::from_system(&w.system, &w.domain)?;
            let report =
                ConstructReport { schema: "v1", certificate: None, witness: Some(&w), delta_range: None, matrix: matrix.report() };
            rendered(&report, render::witness(&w), 0)
        }
    }
}

pub fn certify(args: &SourceArgs) -> Result<Rendered> {
    let cert = build_certificate(args)?;
    rendered(&cert, render::certificate(&cert), 0)
}

#[derive(Serialize)]
struct OracleReport<'a> {
    schema: &'static str,
    /// Optimal constants of the system on its domain.
    #[serde(rename = "A_opt")]
    a_opt: f64,
    #[serde(rename = "B_opt")]
    b_opt: f64,
    /// `σ_min²` and `σ_max²` of the grid matrix.
    grid_lower: f64,
    grid_upper: f64,
    spectrum: &'a SingularSpectrum,
    certificate: &'a FrameCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<NodeMatrixReport<'a>>,
}

pub fn oracle(args: &OracleArgs) -> Result<Rendered> {
    let (system, domain) = if let Some(domain) = &args.domain {
        if args.offsets.is_empty() {
            bail!("--domain needs --offsets");
        }
        let scale = args.scale.clone().unwrap_or_else(expobasis::Rational::one);
        (ExponentSystem::new(args.offsets.clone(), scale)?, union_from_json(&read_input(domain)?)?)
    } else {
        match build(&args.source)? {
            Built::Certificate { cert, .. } => (cert.system, cert.domain),
            Built::Witness(w) => (w.system, w.domain),
        }
    };
    let (cert, spectrum) = oracle_certificate(&system, &domain)?;
    let matrix = if args.with_matrix { Some(cert.matrix()?) } else { None };
    let grid = spectrum.frame_constants();
    let report = OracleReport {
        schema: "v1",
        a_opt: cert.lower,
        b_opt: cert.upper,
        grid_lower: grid.lower,
        grid_upper: grid.upper,
        spectrum: &spectrum,
        certificate: &cert,
        matrix: matrix.as_ref().map(NodeMatrix::report),
    };
    rendered(&report, render::oracle(&cert, &spectrum), 0)
}

fn verify_options(args: &VerifyArgs, seed: u64) -> VerifyOptions {
    VerifyOptions { n_max: args.n_max, trials: args.trials, seed, power_steps: args.power_steps }
}

pub fn verify(args: &VerifyArgs, seed: u64) -> Result<Rendered> {
    let cert = build_certificate(&args.source)?;
    let report = verifier::verify_certificate(&cert, verify_options(args, seed))?;
    let status = if report.verdict == Verdict::Pass { 0 } else { EXIT_VERIFICATION };
    let mut out = rendered(&report, render::verification(&report), status)?;
    out.diagnostics = violation_lines(&report);
    Ok(out)
}

pub fn regress() -> Result<Rendered> {
    let report = verifier::regression_examples()?;
    let status = if report.passed { 0 } else { EXIT_VERIFICATION };
    let mut out = rendered(&report, render::regressions(&report), status)?;
    out.diagnostics = report.checks.iter().filter(|c| !c.passed).map(|c| format!("regression failed: {}", c.name)).collect();
    Ok(out)
}

#[derive(Serialize)]
struct BetaTable {
    schema: &'static str,
    solutions: Vec<BetaSolution>,
}

pub fn beta(args: &BetaArgs) -> Result<Rendered> {
    let last = args.to.unwrap_or(args.m);
    if last < args.m {
        bail!("--to must be at least --M");
    }
    let solutions = (args.m..=last).map(theorems::solve_beta).collect::<expobasis::Result<Vec<_>>>()?;
    let text = render::beta(&solutions);
    rendered(&BetaTable { schema: "v1", solutions }, text, 0)
}

#[derive(Serialize)]
struct FullReport<'a> {
    schema: &'static str,
    verification: &'a VerificationReport,
    regressions: &'a RegressionReport,
}

pub fn report(args: &VerifyArgs, seed: u64) -> Result<Rendered> {
    let cert = build_certificate(&args.source)?;
    let verification = verifier::verify_certificate(&cert, verify_options(args, seed))?;
    let regressions = verifier::regression_examples()?;
    let ok = verification.verdict == Verdict::Pass && regressions.passed;
    let text = format!("{}\n{}", render::verification(&verification), render::regressions(&regressions));
    let doc = FullReport { schema: "v1", verification: &verification, regressions: &regressions };
    let mut out = rendered(&doc, text, if ok { 0 } else { EXIT_VERIFICATION })?;
    out.diagnostics = violation_lines(&verification);
    out.diagnostics.extend(regressions.checks.iter().filter(|c| !c.passed).map(|c| format!("regression failed: {}", c.name)));
    Ok(out)
}
