//! Subcommand implementations. Machine output goes to `out`, diagnostics
//! to `err`.

use std::io::Write;
use std::path::Path;

use schurlab::{
    certify_multiplicative, certify_star_multiplicative, complete_partial, enumerate_real_positive, operator_norm,
    schur_map_norm, unboundedness_witness, CompletionStatus, ComplexMatrix, MultiplicativityCertificate, SchurError,
    StarCertificate, Tolerance, C64,
};
use serde_json::{json, Value};

use crate::document::MatrixDocument;
use crate::generator::parse_generator;
use crate::verify::{run_suite, ToleranceEcho};
use crate::{CliError, Command, Format, EXIT_FALSE, EXIT_OK, EXIT_UNDERDETERMINED};

/// Random product pairs used by `check` and `factor`.
pub const CHECK_TRIALS: usize = 8;
/// Seed for those pairs, fixed so that certificates are reproducible.
pub const CHECK_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Underdetermined,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Holds => EXIT_OK,
            Outcome::Fails => EXIT_FALSE,
            Outcome::Underdetermined => EXIT_UNDERDETERMINED,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

pub fn execute(
    command: &Command,
    tol: Tolerance,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, CliError> {
    match command {
        Command::Check { path, star, json } => check(path, *star, *json, tol, out),
        Command::Factor { path, json } => factor(path, *json, tol, out, err),
        Command::Complete { path, star } => complete(path, *star, tol, out, err),
        Command::Enumerate { n, format } => enumerate(*n, *format, out),
        Command::Norm { path, json } => norm(path, *json, tol, out),
        Command::Witness {
            generator,
            n,
            series,
            json,
        } => witness(generator, *n, *series, *json, tol, out),
        Command::Verify { suite, trials, seed } => {
            let report = run_suite(*suite, *trials, *seed, tol);
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            )?;
            writeln!(
                err,
                "{}: {} failure(s) in {} trial(s), {:.3} s",
                suite.name(),
                report.failures.len(),
                report.trials,
                report.elapsed
            )?;
            Ok(Outcome::from_bool(report.passed()))
        }
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    MatrixDocument::read(path)?.to_matrix()
}

fn tolerance_json(tol: Tolerance) -> Value {
    json!(ToleranceEcho::from(tol))
}

fn complex_json(values: &[C64]) -> Value {
    json!(values.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

/// Shortest round-trip decimal, switching to exponent form outside `[1e-4, 1e16)`.
fn format_real(v: f64) -> String {
    let m = v.abs();
    if m != 0.0 && !(1e-4..1e16).contains(&m) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// `1`, `-i`, `0.5+2i`; negative zero prints as zero.
pub fn format_complex(z: C64) -> String {
    let (re, im) = (z.re + 0.0, z.im + 0.0);
    let imag = |v: f64| match v {
        1.0 => "i".to_string(),
        -1.0 => "-i".to_string(),
        v => format!("{}i", format_real(v)),
    };
    let re_text = format_real(re);
    match (re == 0.0, im == 0.0) {
        (_, true) => re_text,
        (true, false) => imag(im),
        (false, false) => {
            let tail = imag(im);
            if tail.starts_with('-') {
                format!("{re_text}{tail}")
            } else {
                format!("{re_text}+{tail}")
            }
        }
    }
}

fn format_vector(values: &[C64]) -> String {
    let parts: Vec<String> = values.iter().map(|&z| format_complex(z)).collect();
    format!("({})", parts.join(", "))
}

fn multiplicative_json(cert: &MultiplicativityCertificate) -> Value {
    let conditions: serde_json::Map<String, Value> = cert
        .conditions
        .iter()
        .map(|(c, r)| {
            (
                c.label().to_string(),
                json!({"pass": r.pass, "residual": r.residual, "threshold": r.threshold}),
            )
        })
        .collect();
    json!({
        "verdict": cert.verdict,
        "inconsistent": cert.inconsistent,
        "conditions": conditions,
        "witness": cert.witness.map(|(i, j, k)| [i, j, k]),
        "scaling": cert.scaling.as_ref().map(|f| complex_json(f.values())),
    })
}

fn star_json(star: &Result<StarCertificate, String>) -> Value {
    match star {
        Ok(cert) => {
            let conditions: serde_json::Map<String, Value> = cert
                .conditions
                .iter()
                .map(|(c, r)| (c.label().to_string(), json!({"pass": r.pass, "residual": r.residual})))
                .collect();
            json!({"verdict": cert.verdict, "inconsistent": cert.inconsistent, "conditions": conditions})
        }
        Err(reason) => json!({"verdict": false, "precondition": reason}),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(path: &Path, star: bool, as_json: bool, tol: Tolerance, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let a = read_matrix(path)?;
    let cert = certify_multiplicative(&a, tol, CHECK_TRIALS, CHECK_SEED)?;
    let star_cert = if star {
        Some(match certify_star_multiplicative(&a, tol) {
            Ok(c) => Ok(c),
            Err(SchurError::Precondition(reason)) => Err(reason),
            Err(e) => return Err(e.into()),
        })
    } else {
        None
    };
    let star_verdict = star_cert.as_ref().map(|s| s.as_ref().is_ok_and(|c| c.verdict));
    let holds = cert.verdict && star_verdict.unwrap_or(true);

    if as_json {
        let mut report = json!({
            "tolerance": tolerance_json(tol),
            "multiplicative": multiplicative_json(&cert),
        });
        if let Some(s) = &star_cert {
            report["star_preserving"] = star_json(s);
        }
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        )?;
        return Ok(Outcome::from_bool(holds));
    }

    writeln!(out, "tolerance: rel={:e} abs={:e}", tol.rel(), tol.abs())?;
    match star_verdict {
        Some(s) => writeln!(
            out,
            "multiplicative: {}, star-preserving: {}",
            yes_no(cert.verdict),
            yes_no(s)
        )?,
        None => writeln!(out, "multiplicative: {}", yes_no(cert.verdict))?,
    }
    for (c, r) in &cert.conditions {
        writeln!(
            out,
            "  {:<24} {}  residual {:.3e}  threshold {:.3e}",
            c.label(),
            if r.pass { "pass" } else { "FAIL" },
            r.residual,
            r.threshold
        )?;
    }
    if let Some((i, j, k)) = cert.witness {
        writeln!(out, "  worst cocycle violation at (i, j, k) = ({i}, {j}, {k})")?;
    }
    if cert.inconsistent {
        writeln!(
            out,
            "  warning: equivalent conditions disagree; the input is near the tolerance boundary"
        )?;
    }
    match &star_cert {
        Some(Ok(s)) => {
            for (c, r) in &s.conditions {
                writeln!(
                    out,
                    "  {:<32} {}  residual {:.3e}",
                    c.label(),
                    if r.pass { "pass" } else { "FAIL" },
                    r.residual
                )?;
            }
            if s.inconsistent {
                writeln!(
                    out,
                    "  warning: *-conditions disagree; the input is near the tolerance boundary"
                )?;
            }
        }
        Some(Err(reason)) => writeln!(out, "  star-preserving check not applicable: {reason}")?,
        None => {}
    }
    if let Some(f) = &cert.scaling {
        writeln!(out, "  f = {}", format_vector(f.values()))?;
    }
    Ok(Outcome::from_bool(holds))
}

fn factor(
    path: &Path,
    as_json: bool,
    tol: Tolerance,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let a = read_matrix(path)?;
    let cert = certify_multiplicative(&a, tol, CHECK_TRIALS, CHECK_SEED)?;
    let Some(f) = cert.scaling.as_ref().filter(|_| cert.verdict) else {
        let failed: Vec<&str> = cert.failed().iter().map(|c| c.label()).collect();
        writeln!(err, "not multiplicative: failed {}", failed.join(", "))?;
        return Ok(Outcome::Fails);
    };
    if as_json {
        let report = json!({"tolerance": tolerance_json(tol), "scaling": complex_json(f.values())});
        writeln!(out, "{report}")?;
    } else {
        writeln!(out, "f = {}", format_vector(f.values()))?;
        writeln!(out, "S_A(B) = Λ B Λ^-1 with Λ = diag(f)")?;
    }
    Ok(Outcome::Holds)
}

fn complete(
    path: &Path,
    star: bool,
    tol: Tolerance,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let p = MatrixDocument::read(path)?.to_partial()?;
    let report = complete_partial(&p, tol, star)?;
    match report.status {
        CompletionStatus::Completed => {
            let m = report.matrix.expect("completed report carries a matrix");
            writeln!(out, "{}", MatrixDocument::from_matrix(&m).to_json())?;
            writeln!(err, "completed (tolerance rel={:e} abs={:e})", tol.rel(), tol.abs())?;
            Ok(Outcome::Holds)
        }
        CompletionStatus::Inconsistent => {
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| json!({"entry": [v.entry.0, v.entry.1], "cycle": v.cycle, "residual": v.residual}))
                .collect();
            let doc = json!({"status": "inconsistent", "tolerance": tolerance_json(tol), "violations": violations});
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            )?;
            for v in &report.violations {
                let path: Vec<String> = v.cycle.iter().map(usize::to_string).collect();
                writeln!(
                    err,
                    "inconsistent at a_{},{}: cycle ({}), residual {:.3e}",
                    v.entry.0,
                    v.entry.1,
                    path.join(", "),
                    v.residual
                )?;
            }
            Ok(Outcome::Fails)
        }
        CompletionStatus::Underdetermined => {
            let doc = json!({
                "status": "underdetermined",
                "tolerance": tolerance_json(tol),
                "components": report.components,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            )?;
            writeln!(
                err,
                "underdetermined: {} components; one more entry linking each pair is needed",
                report.components.len()
            )?;
            Ok(Outcome::Underdetermined)
        }
    }
}

fn enumerate(n: usize, format: Format, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let members = enumerate_real_positive(n)?;
    match format {
        Format::Lines => {
            for m in members {
                writeln!(out, "{}", MatrixDocument::from_matrix(&m).to_json())?;
            }
        }
        Format::Array => {
            write!(out, "[")?;
            for (k, m) in members.enumerate() {
                if k > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{}", MatrixDocument::from_matrix(&m).to_json())?;
            }
            writeln!(out, "]")?;
        }
    }
    Ok(Outcome::Holds)
}

fn norm(path: &Path, as_json: bool, tol: Tolerance, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let a = read_matrix(path)?;
    let op = operator_norm(&a)?;
    let map = if a.is_square() {
        match schur_map_norm(&a, tol) {
            Ok(v) => Some(v),
            Err(SchurError::NotMultiplicative { .. } | SchurError::ZeroEntry { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    if as_json {
        let report = json!({"tolerance": tolerance_json(tol), "operator_norm": op, "schur_map_norm": map});
        writeln!(out, "{report}")?;
    } else {
        writeln!(out, "operator_norm: {op}")?;
        match map {
            Some(v) => writeln!(out, "schur_map_norm: {v}")?,
            None => writeln!(out, "schur_map_norm: undefined (S_A is not multiplicative)")?,
        }
    }
    Ok(Outcome::from_bool(map.is_some()))
}

fn witness(
    spec: &str,
    n: usize,
    series: bool,
    as_json: bool,
    tol: Tolerance,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let generator = parse_generator(spec)?;
    if spec.starts_with("scaling:") {
        if let Some(len) = generator.support().filter(|&len| n > len) {
            return Err(CliError::Input(format!(
                "the scaling file defines {len} values; n = {n} needs at least {n}"
            )));
        }
    }
    let reaches = |m: usize, bound: f64| bound >= m as f64 - tol.bound(m as f64);

    if series {
        let mut sizes: Vec<usize> = std::iter::successors(Some(2usize), |m| m.checked_mul(2))
            .take_while(|&m| m <= n)
            .collect();
        if sizes.last() != Some(&n) {
            sizes.push(n);
        }
        writeln!(out, "n,lower_bound")?;
        let mut all = true;
        for m in sizes {
            let w = unboundedness_witness(&generator, m, tol)?;
            all &= reaches(m, w.lower_bound);
            writeln!(out, "{m},{}", w.lower_bound)?;
        }
        return Ok(Outcome::from_bool(all));
    }

    let w = unboundedness_witness(&generator, n, tol)?;
    if as_json {
        let report = json!({
            "generator": generator.label(),
            "n": n,
            "tolerance": tolerance_json(tol),
            "lower_bound": w.lower_bound,
            "iterations": w.iterations,
            "x": complex_json(&w.x),
        });
        writeln!(out, "{report}")?;
    } else {
        writeln!(out, "generator: {}", generator.label())?;
        writeln!(out, "lower_bound: {}", w.lower_bound)?;
        writeln!(out, "x = {}", format_vector(&w.x))?;
    }
    Ok(Outcome::from_bool(reaches(n, w.lower_bound)))
}
