//! The `evidential` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation or format error,
//! 3 numeric failure. Errors go to stderr as a single `error:` line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::fusion::{inter_fuse, intra_fuse};
use crate::head::head_decode;
use crate::io::{read_epm_file, read_etv_file, read_pfm_file, write_epm_file, write_pfm_file};
use crate::maps::decode;
use crate::metrics::{analyze_with_thresholds, evaluate, DEFAULT_THRESHOLDS};
use crate::toy::{
    fusion_experiment, make_synthetic, train, ExperimentConfig, Split, SyntheticKind, ToyModel, DEFAULT_NOISE,
    TrainConfig,
};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "evidential", version, about = "Evidential disparity maps: fusion, decoding, metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that every pixel of an EPM file is a valid NIG parameter set.
    Validate { epm: PathBuf },
    /// Fuse evidential maps pixel by pixel.
    #[command(subcommand)]
    Fuse(FuseCommand),
    /// Write the disparity, aleatoric and epistemic maps of an EPM file.
    Decode {
        input: PathBuf,
        #[arg(long)]
        disparity: PathBuf,
        #[arg(long)]
        aleatoric: PathBuf,
        #[arg(long)]
        epistemic: PathBuf,
    },
    /// Decode a 4-channel ETV volume into an EPM map.
    Regress {
        volume: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// EPE and outlier rates of a predicted PFM against ground truth.
    Metrics {
        pred: PathBuf,
        gt: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_THRESHOLDS)]
        thresholds: Vec<f64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Metrics plus error–uncertainty correlation of an EPM map.
    Analyze {
        input: PathBuf,
        gt: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_THRESHOLDS)]
        thresholds: Vec<f64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Train the toy evidential regressor on synthetic data.
    TrainToy(TrainToyArgs),
}

#[derive(Debug, Subcommand)]
pub enum FuseCommand {
    /// Fold three multi-scale maps.
    Intra {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Combine a local and a global map.
    Inter {
        local: PathBuf,
        global: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct TrainToyArgs {
    /// smooth-1d or two-region
    #[arg(long, default_value = "smooth-1d")]
    pub kind: String,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    #[arg(long, default_value_t = 300)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
    #[arg(long, default_value_t = TrainConfig::default().lr)]
    pub lr: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Noise standard deviation of the generator.
    #[arg(long, default_value_t = DEFAULT_NOISE)]
    pub noise: f64,
    #[arg(long, default_value_t = ExperimentConfig::default().hidden)]
    pub hidden: usize,
    /// Per-epoch curves (first expert for two-region).
    #[arg(long)]
    pub curves: PathBuf,
    /// Expert/average/fused EPE table; two-region only.
    #[arg(long)]
    pub fusion_table: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{}", first.trim_end());
            return EXIT_USAGE;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergence { .. } | Error::DegenerateInput(_) => EXIT_NUMERIC,
        Error::BadConfig(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { epm } => {
            let map = read_epm_file(&epm)?;
            println!("ok: {} x {} pixels valid", map.width(), map.height());
        }
        Command::Fuse(FuseCommand::Intra { a, b, c, output }) => {
            distinct_outputs(&[&a, &b, &c], &[&output])?;
            let maps = [read_epm_file(&a)?, read_epm_file(&b)?, read_epm_file(&c)?];
            let fused = intra_fuse([&maps[0], &maps[1], &maps[2]])?;
            write_epm_file(&fused, &output)?;
        }
        Command::Fuse(FuseCommand::Inter { local, global, output }) => {
            distinct_outputs(&[&local, &global], &[&output])?;
            let fused = inter_fuse(&read_epm_file(&local)?, &read_epm_file(&global)?)?;
            write_epm_file(&fused, &output)?;
        }
        Command::Decode { input, disparity, aleatoric, epistemic } => {
            distinct_outputs(&[&input], &[&disparity, &aleatoric, &epistemic])?;
            let out = decode(&read_epm_file(&input)?);
            write_pfm_file(&out.disparity, &disparity)?;
            write_pfm_file(&out.aleatoric, &aleatoric)?;
            write_pfm_file(&out.epistemic, &epistemic)?;
        }
        Command::Regress { volume, output } => {
            distinct_outputs(&[&volume], &[&output])?;
            let map = head_decode(&read_etv_file(&volume)?)?;
            write_epm_file(&map, &output)?;
        }
        Command::Metrics { pred, gt, thresholds, report } => {
            distinct_outputs(&[&pred, &gt], &[&report])?;
            check_thresholds(&thresholds)?;
            let r = evaluate(&read_pfm_file(&pred)?, &read_pfm_file(&gt)?, &thresholds)?;
            write_with(&report, |w| r.write_csv(w))?;
            println!("epe {} over {} pixels", r.epe, r.valid_pixel_count);
        }
        Command::Analyze { input, gt, thresholds, report } => {
            distinct_outputs(&[&input, &gt], &[&report])?;
            check_thresholds(&thresholds)?;
            let r = analyze_with_thresholds(&read_epm_file(&input)?, &read_pfm_file(&gt)?, &thresholds)?;
            write_with(&report, |w| r.write_csv(w))?;
            if r.pearson_aleatoric.is_none() || r.pearson_epistemic.is_none() {
                eprintln!("warning: correlation undefined for a constant field; left empty in report");
            }
            println!("epe {} over {} pixels", r.epe, r.valid_pixel_count);
        }
        Command::TrainToy(args) => train_toy(args)?,
    }
    Ok(())
}

fn train_toy(args: TrainToyArgs) -> Result<(), Failure> {
    let kind: SyntheticKind = args.kind.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let mut outputs = vec![args.curves.as_path()];
    outputs.extend(args.fusion_table.as_deref());
    distinct_outputs(&[], &outputs)?;
    if args.hidden == 0 {
        return Err(Failure::Usage("--hidden must be at least 1".into()));
    }
    let dataset = make_synthetic(kind, args.samples, args.noise, args.seed)?;
    let train_config = TrainConfig { tau: args.tau, lr: args.lr, epochs: args.epochs };

    match kind {
        SyntheticKind::Smooth1d => {
            if args.fusion_table.is_some() {
                return Err(Failure::Usage("--fusion-table requires --kind two-region".into()));
            }
            let train_set = dataset.examples(Split::Train, None)?;
            let heldout = dataset.examples(Split::Heldout, None)?;
            let init = ToyModel::new(1, args.hidden, args.seed);
            let (_, curves) = train(init, &train_set, &heldout, &train_config)?;
            write_with(&args.curves, |w| curves.write_csv(w))?;
            if let Some(last) = curves.records.last() {
                println!("final heldout epe {}", last.heldout_epe);
            }
        }
        SyntheticKind::TwoRegion => {
            let config = ExperimentConfig { hidden: args.hidden, train: train_config, seed: args.seed };
            let outcome = fusion_experiment(&dataset, &config)?;
            write_with(&args.curves, |w| outcome.curves[0].write_csv(w))?;
            if let Some(path) = &args.fusion_table {
                write_with(path, |w| outcome.table.write_csv(w))?;
            }
            let t = outcome.table;
            println!(
                "expert1 {} expert2 {} avg {} monig {}",
                t.expert1_epe, t.expert2_epe, t.avg_epe, t.monig_epe
            );
        }
    }
    Ok(())
}

fn check_thresholds(thresholds: &[f64]) -> Result<(), Failure> {
    if thresholds.is_empty() || thresholds.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Failure::Usage(format!("thresholds must be positive, got {thresholds:?}")));
    }
    Ok(())
}

/// Outputs must not overwrite an input or each other.
fn distinct_outputs(inputs: &[&Path], outputs: &[&Path]) -> Result<(), Failure> {
    let key = |p: &Path| p.canonicalize().unwrap_or_else(|_| p.to_path_buf());
    for (i, out) in outputs.iter().enumerate() {
        let k = key(out);
        if inputs.iter().any(|inp| key(inp) == k) {
            return Err(Failure::Usage(format!("output {} would overwrite an input", out.display())));
        }
        if outputs[..i].iter().any(|o| key(o) == k) {
            return Err(Failure::Usage(format!("output {} given twice", out.display())));
        }
    }
    Ok(())
}

fn write_with<F>(path: &Path, f: F) -> Result<(), Error>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<(), Error>,
{
    let mut out = BufWriter::new(File::create(path)?);
    f(&mut out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["evidential"]), EXIT_USAGE);
        assert_eq!(run(["evidential", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["evidential", "fuse", "intra", "a.epm", "b.epm", "-o", "x.epm"]), EXIT_USAGE);
        assert_eq!(run(["evidential", "train-toy", "--kind", "cube", "--curves", "c.csv"]), EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["evidential", "--help"]), 0);
    }

    #[test]
    fn missing_input_exits_two() {
        assert_eq!(run(["evidential", "validate", "/nonexistent/map.epm"]), EXIT_INVALID);
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(exit_code(&Error::Divergence { epoch: 3, loss: f64::NAN }), EXIT_NUMERIC);
        assert_eq!(exit_code(&Error::DegenerateInput("x")), EXIT_NUMERIC);
        assert_eq!(exit_code(&Error::EmptyMask), EXIT_INVALID);
        assert_eq!(exit_code(&Error::Format("x".into())), EXIT_INVALID);
        assert_eq!(exit_code(&Error::BadConfig("x".into())), EXIT_USAGE);
    }

    #[test]
    fn outputs_may_not_alias_inputs() {
        let p = Path::new("same.epm");
        assert!(distinct_outputs(&[p], &[p]).is_err());
        assert!(distinct_outputs(&[], &[p, p]).is_err());
        assert!(distinct_outputs(&[p], &[Path::new("other.epm")]).is_ok());
    }
}
