use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use declump::harness::batch::{
    discover_cases, process_case, run_batch, synth_corpus, write_case, BatchOptions, ClumpCase, EvalReport,
    RegionSource,
};
use declump::harness::io::{read_config, read_gray, read_labels, read_polygon, read_seeds};
use declump::harness::output::CutsDocument;
use declump::harness::synth::SynthParams;
use declump::{Config, Result};

#[derive(Parser)]
#[command(name = "declump", version, about = "Partition clumped objects into one region per seed point")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a single clump.
    Partition(PartitionArgs),
    /// Partition every case directory under DIR.
    Batch(BatchArgs),
    /// Generate synthetic cases with ground truth.
    Synth(SynthArgs),
    /// Partition and score cases against their ground truth.
    Validate(BatchArgs),
}

#[derive(Args)]
struct PartitionArgs {
    /// Polygon file (`vertices: [[x, y], ...]`).
    #[arg(long, conflicts_with = "mask", required_unless_present = "mask")]
    boundary: Option<PathBuf>,
    /// Label raster holding the clump.
    #[arg(long, requires = "label")]
    mask: Option<PathBuf>,
    /// Label of the clump inside `--mask`.
    #[arg(long)]
    label: Option<u32>,
    /// Seed file (`seeds: [[x, y], ...]`).
    #[arg(long)]
    seeds: PathBuf,
    /// Intensity image for the image-based vote categories.
    #[arg(long)]
    image: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; without it the cuts document goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, requires = "out")]
    svg: bool,
    #[arg(long, requires = "out")]
    emit_mask: bool,
}

#[derive(Args)]
struct BatchArgs {
    /// Directory of case directories, or a single case directory.
    dir: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    emit_mask: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    rng_seed: u64,
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => read_config(p),
        None => Ok(Config::default()),
    }
}

fn partition(args: PartitionArgs) -> Result<()> {
    let config = load_config(args.config.as_deref())?;
    let source = match (&args.boundary, &args.mask) {
        (Some(b), _) => RegionSource::Polygon(read_polygon(b)?),
        (None, Some(m)) => RegionSource::Mask {
            mask: read_labels(m)?,
            label: args.label.unwrap_or(1),
        },
        (None, None) => unreachable!("clap requires a boundary source"),
    };
    let image = match &args.image {
        Some(p) => Some(read_gray(p)?.intensity()?),
        None => None,
    };
    let case = ClumpCase {
        id: "case".into(),
        source,
        seeds: read_seeds(&args.seeds)?,
        image,
        truth: None,
    };
    let opts = BatchOptions {
        jobs: 1,
        svg: args.svg,
        emit_mask: args.emit_mask,
    };
    let (result, _) = process_case(&case, &config, args.out.as_deref(), &opts)?;
    match &args.out {
        Some(dir) => println!(
            "{} cuts, {} regions written to {}",
            result.cuts.len(),
            result.regions.len(),
            dir.display()
        ),
        None => print!("{}", CutsDocument::new(&result).to_json()),
    }
    Ok(())
}

fn batch(args: BatchArgs) -> Result<EvalReport> {
    let config = load_config(args.config.as_deref())?;
    let dirs = discover_cases(&args.dir)?;
    let opts = BatchOptions {
        jobs: args.jobs,
        svg: args.svg,
        emit_mask: args.emit_mask,
    };
    let start = Instant::now();
    let report = run_batch(&dirs, &config, args.out.as_deref(), &opts)?;
    let failed = report.cases.iter().filter(|c| c.error.is_some()).count();
    eprintln!(
        "{} cases in {:.2} s, {failed} failed",
        report.total,
        start.elapsed().as_secs_f64()
    );
    Ok(report)
}

fn synth(args: SynthArgs) -> Result<()> {
    for (id, clump) in synth_corpus(args.rng_seed, args.count, &SynthParams::default())? {
        write_case(&args.out.join(&id), &id, &clump)?;
    }
    println!("{} cases written to {}", args.count, args.out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Partition(a) => partition(a),
        Command::Batch(a) => batch(a).map(|r| println!("{}", r.summary())),
        Command::Synth(a) => synth(a),
        Command::Validate(a) => {
            let r = batch(a)?;
            match r.correct_fraction {
                Some(f) => println!("{f:.3}"),
                None => println!("{}", r.summary()),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
