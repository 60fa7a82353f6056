use std::path::PathBuf;

use clap::{Args, ValueEnum};

use alpp_core::io::{parse_extended, parse_instance, parse_mcc, serialize_extended, serialize_instance};
use alpp_core::reductions::{generate_mcc_extended, reduce_extended_to_full_capped, reduce_sapp_to_alpp, MAX_FULL_VERTICES};

use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    /// Short-path instance to exact-length instance.
    SappToAlpp,
    /// Weighted instance (`p xalpp`) to full packing instance.
    ExtendedToFull,
    /// Clique input (`p mcc`) to weighted instance.
    MccToExtended,
    /// Clique input straight to a full packing instance.
    MccToFull,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    reduction: Reduction,
    input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Size limit for full instances.
    #[arg(long, default_value_t = MAX_FULL_VERTICES)]
    max_vertices: u128,
}

pub fn run(args: &ReduceArgs) -> CliResult<u8> {
    let text = std::fs::read_to_string(&args.input)?;
    let body = match args.reduction {
        Reduction::SappToAlpp => {
            let (inst, trace) = reduce_sapp_to_alpp(&parse_instance(&text)?)?;
            format!(
                "# alpp reduce sapp-to-alpp: vertices below {} are the original ones\n{}",
                trace.original_n(),
                serialize_instance(&inst)
            )
        }
        Reduction::ExtendedToFull => {
            let (inst, _) = reduce_extended_to_full_capped(&parse_extended(&text)?, args.max_vertices)?;
            format!("# alpp reduce extended-to-full\n{}", serialize_instance(&inst))
        }
        Reduction::MccToExtended => {
            let (x, _) = generate_mcc_extended(&parse_mcc(&text)?)?;
            format!("# alpp reduce mcc-to-extended\n{}", serialize_extended(&x))
        }
        Reduction::MccToFull => {
            let (x, _) = generate_mcc_extended(&parse_mcc(&text)?)?;
            let (inst, _) = reduce_extended_to_full_capped(&x, args.max_vertices)?;
            format!("# alpp reduce mcc-to-full\n{}", serialize_instance(&inst))
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(0)
}
