use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use twostein_core::conditions::{
    block_condition_residual, einstein_deficit, hc2_residual, shift_equivalence_check, two_stein_certificate,
    within, BlockSplit, CheckReport,
};
use twostein_core::io::AnyTensor;
use twostein_core::sampling::{orthonormal_pair, stream_rng, PRNG_NAME};
use twostein_core::scalar::DEFAULT_TOLERANCE;
use twostein_core::{CurvatureTensor, Error as CoreError, RealScalar, Scalar};

use crate::{load_tensor, merge, report_header, write_output, CliError, Outcome, SplitArg};

pub const ALL_CHECKS: [&str; 6] = ["symmetries", "einstein", "two_stein", "hc2", "block", "shift_equiv"];

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    /// Comma-separated subset of symmetries, einstein, two_stein, hc2, block,
    /// shift_equiv. Defaults to all (block only with --split).
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    #[command(flatten)]
    pub split: SplitArg,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Orthonormal pairs sampled by hc2 and shift_equiv.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Settings {
    split: Option<BlockSplit>,
    tol: f64,
    seed: u64,
    samples: usize,
}

fn symmetries<F: Scalar>(t: &CurvatureTensor<F>, s: &Settings) -> CheckReport {
    let report = t.validate_symmetries(s.tol);
    let passed = report.is_empty();
    CheckReport::new("symmetries", passed, if passed { "valid" } else { "invalid" }, s.seed, s.tol)
        .with("max_residual", report.max_residual())
        .with("violations", report.violations.len())
}

fn real_check<F: RealScalar>(name: &str, t: &CurvatureTensor<F>, s: &Settings) -> Result<CheckReport, CliError> {
    let exact = F::is_exact();
    Ok(match name {
        "symmetries" => symmetries(t, s),
        "einstein" => {
            let (lambda, deficit) = einstein_deficit(t);
            let passed = within(deficit, exact, s.tol);
            CheckReport::new("einstein", passed, if passed { "einstein" } else { "not_einstein" }, s.seed, s.tol)
                .with("lambda", lambda.to_value())
                .with("deficit", deficit)
        }
        "two_stein" => {
            let cert = two_stein_certificate(t, s.tol);
            let passed = cert.verdict.as_str() == "two_stein";
            CheckReport::new("two_stein", passed, cert.verdict.as_str(), s.seed, s.tol)
                .with("f1", cert.f1.to_value())
                .with("f2", cert.f2.to_value())
                .with("residual1", cert.residual1)
                .with("residual2", cert.residual2)
                .with("certifying", cert.certifying)
        }
        "hc2" => {
            let mut worst: f64 = 0.0;
            for k in 0..s.samples {
                let (x, y) = orthonormal_pair::<F>(t.dim(), &mut stream_rng(s.seed, k as u64));
                worst = worst.max(hc2_residual(t, &x, &y, 1e-9)?.modulus());
            }
            let passed = within(worst, exact, s.tol);
            CheckReport::new("hc2", passed, if passed { "vanishes" } else { "nonzero" }, s.seed, s.tol)
                .with("max_residual", worst)
                .with("samples", s.samples)
                .with("prng", PRNG_NAME)
        }
        "block" => {
            let split = s
                .split
                .ok_or_else(|| CliError::Usage("the block check needs --split d1 d2".into()))?;
            split.check_dim(t.dim())?;
            let residual = block_condition_residual(t, split);
            let passed = within(residual, exact, s.tol);
            CheckReport::new("block", passed, if passed { "holds" } else { "fails" }, s.seed, s.tol)
                .with("residual", residual)
                .with("split", json!([split.d1, split.d2]))
        }
        "shift_equiv" => {
            let report = shift_equivalence_check(t, s.samples, s.seed, s.tol);
            let passed = report.passed();
            let verdict = if passed { "equivalent" } else { "not_equivalent" };
            let mut r = CheckReport::new("shift_equiv", passed, verdict, s.seed, s.tol);
            if let serde_json::Value::Object(m) = report.to_json() {
                r.residuals.extend(m);
            }
            r
        }
        other => return Err(CliError::Usage(format!("unknown check `{other}`"))),
    })
}

fn complex_check<F: Scalar>(name: &str, t: &CurvatureTensor<F>, s: &Settings) -> Result<CheckReport, CliError> {
    match name {
        "symmetries" => Ok(symmetries(t, s)),
        other if ALL_CHECKS.contains(&other) => Err(CoreError::Unsupported(format!(
            "check `{other}` needs a real field; complex tensors support symmetries only"
        ))
        .into()),
        other => Err(CliError::Usage(format!("unknown check `{other}`"))),
    }
}

pub fn run(args: CheckArgs) -> Result<Outcome, CliError> {
    let split = args.split.get()?;
    let names: Vec<String> = match &args.checks {
        Some(list) => list.iter().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect(),
        None => ALL_CHECKS
            .iter()
            .filter(|c| **c != "block" || split.is_some())
            .map(|c| c.to_string())
            .collect(),
    };
    if let Some(bad) = names.iter().find(|c| !ALL_CHECKS.contains(&c.as_str())) {
        return Err(CliError::Usage(format!("unknown check `{bad}`")));
    }
    let (tensor, hash) = load_tensor(&args.file)?;
    let settings = Settings {
        split,
        tol: args.tolerance,
        seed: args.seed,
        samples: args.samples,
    };
    let config = json!({
        "file": args.file,
        "checks": names,
        "split": split.map(|s| [s.d1, s.d2]),
        "tolerance": args.tolerance,
        "seed": args.seed,
        "samples": args.samples,
        "field": tensor.field().as_str(),
    });
    let mut reports = Vec::new();
    for name in &names {
        reports.push(match &tensor {
            AnyTensor::Rational(t) => real_check(name, t, &settings)?,
            AnyTensor::F64(t) => real_check(name, t, &settings)?,
            AnyTensor::GaussianRational(t) => complex_check(name, t, &settings)?,
            AnyTensor::C64(t) => complex_check(name, t, &settings)?,
        });
    }
    let mut out = String::new();
    for r in &reports {
        eprintln!("{:<12} {:<5} {}", r.check, if r.passed { "pass" } else { "FAIL" }, r.verdict);
        let line = merge(report_header("check", config.clone(), Some(&hash)), serde_json::to_value(r).expect("report serializes"));
        out.push_str(&line.to_string());
        out.push('\n');
    }
    write_output(args.out.as_deref(), &out)?;
    Ok(Outcome::from_bool(reports.iter().all(|r| r.passed)))
}
