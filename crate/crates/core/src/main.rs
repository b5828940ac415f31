use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use ordfill_core::bundle::verify_bundle;
use ordfill_core::filling::Slope;
use ordfill_core::manifold::Manifold;
use ordfill_core::pipeline::{
    emit_report, framing_section, homology_section, homology_text, identities_section, identities_text,
    lemma_section, quotient_section, quotient_text, run_pipeline, verdicts_text, Config, Format, PipelineError,
};

#[derive(Parser)]
#[command(name = "ordfill", version, about = "Certify non-orderability of Dehn fillings")]
struct Cli {
    /// Relator-insertion budget for stated identities.
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,
    /// Conjugator length bound; chosen per identity when omitted.
    #[arg(long = "conj-len", global = true)]
    conj_len: Option<usize>,
    #[arg(long = "max-cosets", global = true, default_value_t = 100_000)]
    max_cosets: usize,
    /// Insertion budget for the optional commutation check.
    #[arg(long = "comm-depth", global = true, default_value_t = 3)]
    comm_depth: usize,
    /// Manifold data file; the bundled v2503 data when omitted.
    #[arg(long, global = true)]
    manifold: Option<PathBuf>,
    #[arg(long, global = true)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First homology, Smith certificate and peripheral classes.
    Homology,
    /// Certify the stated word identities.
    Identities,
    /// Prove the ordering lemma by sign case analysis.
    Lemma31,
    /// Enumerate the peripheral-killed quotient.
    Quotient,
    /// Verdicts for the given filling slopes.
    Verdict {
        #[arg(long = "slope", required = true, allow_hyphen_values = true)]
        slopes: Vec<Slope>,
    },
    /// Run every stage and emit the certificate bundle.
    Pipeline {
        #[arg(long = "slope", allow_hyphen_values = true)]
        slopes: Vec<Slope>,
    },
    /// Check a bundle without searching.
    Verify { bundle: PathBuf },
}

enum Failure {
    Pipeline(PipelineError),
    Other(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Pipeline(e)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    if let Command::Verify { bundle } = &cli.command {
        let text = std::fs::read_to_string(bundle).map_err(|e| Failure::Other(format!("{}: {e}", bundle.display())))?;
        let s = verify_bundle(&text).map_err(Failure::Other)?;
        return Ok(format!(
            "verified: {} certificates replayed, {} proof branches, {} cosets, {} verdicts\n",
            s.certificates, s.tree_branches, s.cosets, s.verdicts
        ));
    }
    let m = match &cli.manifold {
        None => Manifold::bundled(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            Manifold::parse(&text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?
        }
    };
    let mut config = Config {
        depth: cli.depth,
        conjugator_length: cli.conj_len,
        max_cosets: cli.max_cosets,
        commutator_depth: cli.comm_depth,
        ..Config::default()
    };
    let format = if cli.json { Format::Json } else { Format::Text };
    Ok(match &cli.command {
        Command::Homology => {
            let (h, _) = homology_section(&m)?;
            let f = framing_section(&m)?;
            match format {
                Format::Json => json(&serde_json::json!({ "homology": h, "framing": f })),
                Format::Text => format!(
                    "{}lambda rationally nullhomologous: {}\n",
                    homology_text(&h),
                    f.homological
                ),
            }
        }
        Command::Identities => {
            let s = identities_section(&m, &config)?;
            match format {
                Format::Json => json(&s),
                Format::Text => identities_text(&s),
            }
        }
        Command::Lemma31 => {
            let (_, smith) = homology_section(&m)?;
            identities_section(&m, &config)?;
            let (s, tree, _) = lemma_section(&m, &smith)?;
            match format {
                Format::Json => json(&s),
                Format::Text => format!("{}\n{}", s.statement, tree.transcript(&m.kb)),
            }
        }
        Command::Quotient => {
            let (s, _) = quotient_section(&m, &config)?;
            match format {
                Format::Json => json(&s),
                Format::Text => quotient_text(&s),
            }
        }
        Command::Verdict { slopes } => {
            config.slopes = slopes.clone();
            let b = run_pipeline(&m, &config)?;
            let v = b.verdicts.unwrap_or_default();
            match format {
                Format::Json => json(&v),
                Format::Text => verdicts_text(&v),
            }
        }
        Command::Pipeline { slopes } => {
            config.slopes = slopes.clone();
            emit_report(&run_pipeline(&m, &config)?, format)
        }
        Command::Verify { .. } => unreachable!("handled above"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{report}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
