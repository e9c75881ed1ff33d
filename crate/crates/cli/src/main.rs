//! `masskit` — synthesis, feature extraction, analysis, training and
//! ensemble fusion for tumor-like region characterization.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on argument errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use masskit_cli::cmd;

#[derive(Parser)]
#[command(
    name = "masskit",
    version,
    about = "Shape/texture characterization of tumor-like regions and ensemble fusion of binary classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic datasets (contours, expert votes, textures)
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Extract feature matrices from contours or images
    #[command(subcommand)]
    Extract(ExtractCommand),
    /// Rank features, run MANOVA, estimate the dataset fractal dimension
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Train a classifier under the repeated-split protocol and report
    TrainEval(TrainEvalArgs),
    /// Fuse a vote/score matrix with every combination rule and report
    Combine(CombineArgs),
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Four-type mass contours with shape and diagnosis labels
    Shapes(SynthShapesArgs),
    /// Conditionally independent expert vote matrix
    Experts(SynthExpertsArgs),
    /// Class-conditioned Gaussian random texture field (PGM)
    Textures(SynthTexturesArgs),
}

#[derive(Args)]
struct SynthShapesArgs {
    /// Number of masses to generate
    #[arg(long)]
    n: usize,
    /// Generator seed (required for reproducibility)
    #[arg(long)]
    seed: u64,
    /// Output directory for contour CSVs and manifest.json
    #[arg(long)]
    out_dir: PathBuf,
    /// Type priors as `round,lobulated,microlobulated,stellate`
    #[arg(long, default_value = "0.25,0.25,0.25,0.25")]
    priors: String,
}

#[derive(Args)]
struct SynthExpertsArgs {
    /// Number of experts
    #[arg(long)]
    k: usize,
    /// Number of voting trials (rows)
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Comma-separated competencies; drawn from U[0.6, 0.9] if omitted
    #[arg(long)]
    competencies: Option<String>,
    /// P(truth = +1)
    #[arg(long, default_value_t = 0.5)]
    prior_pos: f64,
    /// Output vote-matrix CSV
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON sidecar with the true competencies
    #[arg(long)]
    competencies_out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthTexturesArgs {
    /// Texture class: benign_like | malignant_like
    #[arg(long)]
    class: String,
    /// Image side length in pixels (>= 64)
    #[arg(long)]
    size: usize,
    #[arg(long)]
    seed: u64,
    /// Output PGM (binary P5, 16-bit)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ExtractCommand {
    /// Multi-carrier shape descriptors from contours
    Shapes(ExtractShapesArgs),
    /// 20-function texture bank over sampling boxes of an image
    Texture(ExtractTextureArgs),
}

#[derive(Args)]
struct ExtractShapesArgs {
    /// Manifest written by `synth shapes` (labels come from it)
    #[arg(long, conflicts_with = "contour")]
    manifest: Option<PathBuf>,
    /// Single contour CSV (no label column in the output)
    #[arg(long)]
    contour: Option<PathBuf>,
    /// Output feature-matrix CSV
    #[arg(long)]
    out: PathBuf,
    /// Radial samples per contour (power of two)
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Wavelet family: haar | db4
    #[arg(long, default_value = "db4")]
    wavelet: String,
    /// Wavelet decomposition depth
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Label column source: diagnosis | shape
    #[arg(long, default_value = "diagnosis")]
    label: String,
    /// Dump each carrier signal (raw, envelope, DWT bands) as one-column
    /// CSVs into this directory (single-contour mode only)
    #[arg(long)]
    carriers_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractTextureArgs {
    /// Input image (binary PGM, 8-bit or 16-bit)
    #[arg(long)]
    image: PathBuf,
    /// Region of interest `x,y,w,h` (whole image if omitted)
    #[arg(long)]
    roi: Option<String>,
    /// Sampling box side length in pixels
    #[arg(long)]
    box_size: usize,
    /// Output per-box feature map CSV (includes box_x, box_y)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output aggregated per-mass row CSV (mean/std/min/max per feature)
    #[arg(long)]
    aggregate: Option<PathBuf>,
    /// Output scan-line curve CSV (row-wise means per feature)
    #[arg(long)]
    curves: Option<PathBuf>,
    /// Label for the aggregated row: benign | malignant
    #[arg(long)]
    label: Option<String>,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Welch-t significance ranking of a labeled feature matrix
    Rank(AnalyzeRankArgs),
    /// Wilks' lambda MANOVA over the label groups
    Manova(AnalyzeManovaArgs),
    /// Grassberger-Procaccia correlation dimension of the feature cloud
    Fractal(AnalyzeFractalArgs),
}

#[derive(Args)]
struct AnalyzeRankArgs {
    /// Labeled feature-matrix CSV
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    out_json: PathBuf,
    #[arg(long)]
    out_csv: PathBuf,
}

#[derive(Args)]
struct AnalyzeManovaArgs {
    #[arg(long)]
    features: PathBuf,
    /// Comma-separated feature subset (all columns if omitted)
    #[arg(long)]
    columns: Option<String>,
    #[arg(long)]
    out_json: PathBuf,
}

#[derive(Args)]
struct AnalyzeFractalArgs {
    #[arg(long)]
    features: PathBuf,
    /// Number of log-spaced radii in the fit window
    #[arg(long, default_value_t = 24)]
    r_count: usize,
    /// Skip the default per-feature standardization
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    out_json: PathBuf,
    #[arg(long)]
    out_csv: PathBuf,
}

#[derive(Args)]
struct TrainEvalArgs {
    /// Labeled feature-matrix CSV
    #[arg(long)]
    features: PathBuf,
    /// Classifier: lda | lsmd | knn
    #[arg(long)]
    classifier: String,
    /// Neighbor count for knn (odd)
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Training/validation repetitions
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0.7)]
    train_fraction: f64,
    #[arg(long)]
    seed: u64,
    /// Classification target: diagnosis (binary) | shape (one-vs-rest)
    #[arg(long, default_value = "diagnosis")]
    target: String,
    /// Output JSON report
    #[arg(long)]
    out_report: PathBuf,
    /// Persist a model fitted on the full dataset (diagnosis target only)
    #[arg(long)]
    out_model: Option<PathBuf>,
    /// Write per-repetition ROC curves as `<prefix>_repN.csv`
    #[arg(long)]
    out_roc: Option<PathBuf>,
}

#[derive(Args)]
struct CombineArgs {
    /// Vote/score matrix CSV (experts + trailing truth column)
    #[arg(long)]
    votes: PathBuf,
    /// JSON file with expert competencies
    #[arg(long)]
    competencies: Option<PathBuf>,
    /// Labeled vote matrix to estimate competencies from
    #[arg(long)]
    estimate_from: Option<PathBuf>,
    /// P(truth = +1) used for the WMR prior term and the Bayes oracle
    #[arg(long, default_value_t = 0.5)]
    prior_pos: f64,
    /// Exhaustively verify WMR-logodds against the Bayes oracle (K <= 7)
    #[arg(long)]
    check_bayes: bool,
    #[arg(long)]
    out_json: PathBuf,
    #[arg(long)]
    out_csv: PathBuf,
    /// Also write every rule's per-trial decisions as CSV
    #[arg(long)]
    out_decisions: Option<PathBuf>,
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Synth(SynthCommand::Shapes(a)) => {
            let priors = cmd::parse_priors(&a.priors)?;
            cmd::synth_shapes(a.n, a.seed, &a.out_dir, priors)
        }
        Command::Synth(SynthCommand::Experts(a)) => {
            let competencies = a
                .competencies
                .as_deref()
                .map(cmd::parse_competency_list)
                .transpose()?;
            cmd::synth_experts(
                a.k,
                a.trials,
                a.seed,
                competencies,
                a.prior_pos,
                &a.out,
                a.competencies_out.as_deref(),
            )
        }
        Command::Synth(SynthCommand::Textures(a)) => {
            cmd::synth_textures(&a.class, a.size, a.seed, &a.out)
        }
        Command::Extract(ExtractCommand::Shapes(a)) => cmd::extract_shapes(
            a.manifest.as_deref(),
            a.contour.as_deref(),
            &a.out,
            a.samples,
            &a.wavelet,
            a.levels,
            &a.label,
            a.carriers_out.as_deref(),
        ),
        Command::Extract(ExtractCommand::Texture(a)) => {
            let roi = a.roi.as_deref().map(cmd::parse_roi).transpose()?;
            cmd::extract_texture(
                &a.image,
                roi,
                a.box_size,
                a.out.as_deref(),
                a.aggregate.as_deref(),
                a.curves.as_deref(),
                a.label.as_deref(),
            )
        }
        Command::Analyze(AnalyzeCommand::Rank(a)) => {
            cmd::analyze_rank(&a.features, &a.out_json, &a.out_csv)
        }
        Command::Analyze(AnalyzeCommand::Manova(a)) => {
            let columns = a
                .columns
                .map(|s| s.split(',').map(|c| c.trim().to_string()).collect());
            cmd::analyze_manova(&a.features, columns, &a.out_json)
        }
        Command::Analyze(AnalyzeCommand::Fractal(a)) => {
            cmd::analyze_fractal(&a.features, a.r_count, a.raw, &a.out_json, &a.out_csv)
        }
        Command::TrainEval(a) => cmd::train_eval(
            &a.features,
            &a.classifier,
            a.k,
            a.reps,
            a.train_fraction,
            a.seed,
            &a.target,
            &a.out_report,
            a.out_model.as_deref(),
            a.out_roc.as_deref(),
        ),
        Command::Combine(a) => cmd::combine(
            &a.votes,
            a.competencies.as_deref(),
            a.estimate_from.as_deref(),
            a.prior_pos,
            a.check_bayes,
            &a.out_json,
            &a.out_csv,
            a.out_decisions.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
