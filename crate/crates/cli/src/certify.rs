use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};

use twostein_core::io::AnyTensor;
use twostein_core::proof::{constant_curvature_deduction, Verdict};
use twostein_core::scalar::DEFAULT_TOLERANCE;
use twostein_core::{CurvatureTensor, Error as CoreError, RealScalar};

use crate::{load_tensor, merge, report_header, write_output, CliError, Outcome, SplitArg};

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub split: SplitArg,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Proof trace destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Shifts `r`, runs the deduction and returns the report body and outcome.
/// Unsupported inputs are errors; failed hypotheses and violations are
/// reported as failures.
fn certify<F: RealScalar>(
    r: &CurvatureTensor<F>,
    split: twostein_core::conditions::BlockSplit,
    tol: f64,
) -> Result<(Value, Outcome), CliError> {
    if r.dim() < 5 {
        return Err(CoreError::Unsupported(format!("certification needs n >= 5, got {}", r.dim())).into());
    }
    split.check_dim(r.dim())?;
    let cr = r.shift();
    match constant_curvature_deduction(&cr, split, tol) {
        Ok(d) => {
            let (outcome, summary) = match &d.verdict {
                Verdict::ConstantCurvature(c) => {
                    eprintln!("shifted tensor has constant curvature {}", c.to_value());
                    (
                        Outcome::Pass,
                        json!({
                            "verdict": "constant_curvature",
                            "c": c.to_value(),
                            "c_unshifted": (*c + F::from_int(2)).to_value(),
                        }),
                    )
                }
                Verdict::Violation(v) => {
                    eprintln!("violated: {} (frame {}, residual {:e})", v.equality, v.frame, v.residual);
                    (
                        Outcome::Fail,
                        json!({"verdict": "violation", "equality": v.equality, "frame": v.frame, "residual": v.residual}),
                    )
                }
            };
            Ok((merge(summary, json!({"trace": d.trace.to_json()})), outcome))
        }
        Err(failure) => match &failure.error {
            CoreError::Unsupported(_) | CoreError::InvalidDimension { .. } | CoreError::Precondition(_) => {
                Err(failure.error.into())
            }
            error => {
                let hypothesis = failure.hypothesis().map(|h| h.to_string());
                eprintln!("certification failed: {error}");
                Ok((
                    json!({
                        "verdict": "failure",
                        "failing_hypothesis": failure.hypothesis(),
                        "failing_hypothesis_name": hypothesis,
                        "error": error.to_string(),
                        "trace": failure.trace.to_json(),
                    }),
                    Outcome::Fail,
                ))
            }
        },
    }
}

pub fn run(args: CertifyArgs) -> Result<Outcome, CliError> {
    let split = args.split.require()?;
    let (tensor, hash) = load_tensor(&args.file)?;
    let config = json!({
        "file": args.file,
        "split": [split.d1, split.d2],
        "tolerance": args.tolerance,
        "field": tensor.field().as_str(),
    });
    let (body, outcome) = match &tensor {
        AnyTensor::Rational(t) => certify(t, split, args.tolerance)?,
        AnyTensor::F64(t) => certify(t, split, args.tolerance)?,
        AnyTensor::GaussianRational(_) | AnyTensor::C64(_) => {
            return Err(CoreError::Unsupported("certification needs a real tensor".into()).into())
        }
    };
    let report = merge(report_header("certify", config, Some(&hash)), body);
    write_output(args.out.as_deref(), &format!("{report:#}\n"))?;
    Ok(outcome)
}
