use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use twostein_core::proof::identities_certificate;

use crate::{merge, report_header, write_output, CliError, Outcome, SplitArg};

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    pub split: SplitArg,
    /// Number of seeded block tensors.
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    /// First tensor seed; the rest follow consecutively.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: IdentitiesArgs) -> Result<Outcome, CliError> {
    let split = args.split.require()?;
    let seeds: Vec<u64> = (args.seed..args.seed + args.seeds).collect();
    let cert = identities_certificate(split, &seeds)?;
    let failures = cert.failures().count();
    eprintln!(
        "{} comparisons over {} seeds at ({},{}); {failures} failed{}",
        cert.comparisons.len(),
        seeds.len(),
        split.d1,
        split.d2,
        if cert.formula_only { " (formula-only mode)" } else { "" }
    );
    let config = json!({"split": [split.d1, split.d2], "seeds": args.seeds, "seed": args.seed});
    let report = merge(report_header("identities", config, None), cert.to_json());
    write_output(args.out.as_deref(), &format!("{report:#}\n"))?;
    Ok(Outcome::from_bool(cert.passed()))
}
