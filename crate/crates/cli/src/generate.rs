use std::path::PathBuf;

use clap::Args;
use serde_json::{Map, Value};

use twostein_core::io::AnyTensor;
use twostein_core::sampling::PRNG_NAME;
use twostein_core::scalar::DEFAULT_TOLERANCE;
use twostein_core::zoo::ZooSpec;
use twostein_core::Field;

use crate::{read_file, write_output, CliError, Outcome};

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Model kind: constant, complex_space_form, quaternionic_space_form,
    /// su3_so3, product_spheres, random or random_block.
    #[arg(required_unless_present = "spec")]
    pub kind: Option<String>,
    /// Model parameters as key=value, e.g. `n=5 kappa=3/2`.
    pub params: Vec<String>,
    /// Read the model from a zoo spec JSON file instead.
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub field: Option<Field>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn param_value(raw: &str) -> Value {
    match raw.parse::<u64>() {
        Ok(n) => Value::from(n),
        Err(_) => Value::String(raw.to_string()),
    }
}

pub fn spec_from_args(args: &GenerateArgs) -> Result<ZooSpec, CliError> {
    let mut spec = match (&args.spec, &args.kind) {
        (Some(path), _) => ZooSpec::from_json(&read_file(path)?)?,
        (None, Some(kind)) => {
            let mut params = Map::new();
            for p in &args.params {
                let (key, value) = p
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("parameter `{p}` is not key=value")))?;
                params.insert(key.to_string(), param_value(value));
            }
            let doc = serde_json::json!({"kind": kind, "params": params});
            ZooSpec::from_json(&doc.to_string())?
        }
        (None, None) => return Err(CliError::Usage("a model kind or --spec is required".into())),
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(field) = args.field {
        spec.field = field;
    }
    Ok(spec)
}

fn violation_count(t: &AnyTensor) -> usize {
    match t {
        AnyTensor::Rational(t) => t.validate_symmetries(DEFAULT_TOLERANCE).violations.len(),
        AnyTensor::GaussianRational(t) => t.validate_symmetries(DEFAULT_TOLERANCE).violations.len(),
        AnyTensor::F64(t) => t.validate_symmetries(DEFAULT_TOLERANCE).violations.len(),
        AnyTensor::C64(t) => t.validate_symmetries(DEFAULT_TOLERANCE).violations.len(),
    }
}

pub fn run(args: GenerateArgs) -> Result<Outcome, CliError> {
    let spec = spec_from_args(&args)?;
    let tensor = spec.generate()?;
    let violations = violation_count(&tensor);
    eprintln!(
        "generated dim {} over {} (seed {}, {PRNG_NAME}); symmetry violations: {violations}",
        tensor.dim(),
        tensor.field(),
        spec.seed
    );
    write_output(args.out.as_deref(), &tensor.emit())?;
    Ok(if violations == 0 { Outcome::Pass } else { Outcome::Fail })
}
