//! Plain-text views of the JSON reports.

use std::fmt::Write;

use expobasis::spectral::SingularSpectrum;
use expobasis::theorems::{BasisWitness, BetaSolution, DeltaRange, Param};
use expobasis::verifier::{RegressionReport, Side, Verdict, VerificationReport};
use expobasis::{FrameCertificate, NodeMatrix, RationalIntervalUnion};

fn union(u: &RationalIntervalUnion) -> String {
    u.segments().iter().map(|(a, b)| format!("[{a}, {b})")).collect::<Vec<_>>().join(" ∪ ")
}

fn param(p: &Param) -> String {
    match p {
        Param::Int(v) => v.to_string(),
        Param::Real(v) => format!("{v:.16e}"),
        Param::Exact(r) => r.to_string(),
        Param::Text(t) => t.clone(),
    }
}

pub fn certificate(cert: &FrameCertificate) -> String {
    let mut out = String::new();
    let method = serde_json::to_value(cert.method).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    writeln!(out, "method   {method}").unwrap();
    writeln!(out, "A        {:.16e}", cert.lower).unwrap();
    writeln!(out, "B        {:.16e}", cert.upper).unwrap();
    writeln!(out, "domain   {}", union(&cert.domain)).unwrap();
    let offsets: Vec<String> = cert.system.offsets().iter().map(ToString::to_string).collect();
    writeln!(out, "offsets  {} (scale {})", offsets.join(", "), cert.system.scale()).unwrap();
    for (name, value) in &cert.params {
        writeln!(out, "param    {name} = {}", param(value)).unwrap();
    }
    if !cert.flags.is_empty() {
        writeln!(out, "flags    {}", cert.flags.join(", ")).unwrap();
    }
    out.trim_end().to_string()
}

pub fn construct(cert: &FrameCertificate, range: Option<&DeltaRange>, matrix: &NodeMatrix) -> String {
    let mut out = certificate(cert);
    if let Some(r) = range {
        write!(out, "\nδ window [{:.16e}, {:.16e}] (N = {}, m = {}, β = {:.16e})", r.lower, r.upper, r.n, r.m, r.beta).unwrap();
    }
    write!(out, "\nnodes    {:?}", matrix.nodes()).unwrap();
    out
}

pub fn witness(w: &BasisWitness) -> String {
    let offsets: Vec<String> = w.system.offsets().iter().map(ToString::to_string).collect();
    format!(
        "basis    offsets {} on {}\nsigma    {:?}",
        offsets.join(", "),
        union(&w.domain),
        w.spectrum.values
    )
}

pub fn oracle(cert: &FrameCertificate, spectrum: &SingularSpectrum) -> String {
    format!(
        "A_opt    {:.16e}\nB_opt    {:.16e}\nsigma    {:?}\nsingular {}",
        cert.lower,
        cert.upper,
        spectrum.values,
        spectrum.is_singular()
    )
}

pub fn verification(report: &VerificationReport) -> String {
    let mut out = String::new();
    let verdict = if report.verdict == Verdict::Pass { "pass" } else { "fail" };
    writeln!(out, "verdict  {verdict}").unwrap();
    writeln!(out, "A        {:.16e}  A_opt {:.16e}", report.certificate.lower, report.oracle.a_opt).unwrap();
    writeln!(out, "B        {:.16e}  B_opt {:.16e}", report.certificate.upper, report.oracle.b_opt).unwrap();
    writeln!(
        out,
        "sample   [{:.16e}, {:.16e}] over {} trials, n_max {}, seed {}",
        report.sample.min_ratio, report.sample.max_ratio, report.sample.trials, report.sample.n_max, report.sample.seed
    )
    .unwrap();
    for v in &report.violations {
        let side = match v.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        writeln!(out, "violation index {} side {side}: σ² = {:.16e}, bound {:.16e}", v.index, v.sigma_sq, v.bound).unwrap();
    }
    out.trim_end().to_string()
}

pub fn regressions(report: &RegressionReport) -> String {
    report
        .checks
        .iter()
        .map(|c| format!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn beta(solutions: &[BetaSolution]) -> String {
    let mut out = String::from("M\tbeta\tresidual\titerations");
    for s in solutions {
        write!(out, "\n{}\t{:.16e}\t{:.3e}\t{}", s.m, s.beta, s.residual, s.iterations).unwrap();
    }
    out
}
