use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use carfollow::config::{JamSpacingRule, PairScope, PipelineConfig, ReportFormat, SimilaritySeries};
use carfollow::efficiency::VStarRule;
use carfollow::emissions::{write_coefficients, ModelForm};
use carfollow::ingest::write_platoon;
use carfollow::pipeline::{load_platoons, run_pipeline, RunReport, Stages};
use carfollow::report::{emit_report, file_stem};
use carfollow::synthetic::{fixture_corpus, synthetic_coefficients};
use carfollow::{Error, ErrorKind};

/// Leader-follower analysis of mixed EV/ICEV adaptive-cruise platoons.
#[derive(Debug, Parser)]
#[command(name = "carfollow", version)]
struct Cli {
    /// TOML config file. Flags override its values.
    #[arg(long, global = true, env = "CARFOLLOW_CONFIG")]
    config: Option<PathBuf>,

    /// Worker threads for per-pair work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse inputs and print dataset counts.
    IngestCheck {
        #[command(flatten)]
        run: RunArgs,
        /// Re-export the parsed, gap-repaired platoons to this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Pairwise DTW and per-class selection.
    Similarity(RunArgs),
    /// Similarity, efficiency and safety.
    Analyze(RunArgs),
    /// Platoon-level emission rates and comparisons.
    Emissions(RunArgs),
    /// Every stage.
    FullRun(RunArgs),
    /// Write a synthetic platoon corpus and an example coefficient table.
    GenerateFixtures {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        platoons: usize,
        /// Length of each platoon recording (s).
        #[arg(long, default_value_t = 600.0)]
        duration: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesArg {
    Leader,
    Follower,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    Selected,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggregationArg {
    MeanOfPairs,
    Pooled,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    LogLinear,
    LiteralPolynomial,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<ScopeArg> for PairScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Selected => PairScope::Selected,
            ScopeArg::All => PairScope::All,
        }
    }
}

/// Overrides for [`PipelineConfig`] fields.
#[derive(Debug, Clone, Default, Args)]
struct RunArgs {
    /// Platoon file or directory (repeatable).
    #[arg(long = "input", short = 'i')]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    propulsion_lookup: Option<PathBuf>,
    /// Longest gap (s) filled by interpolation.
    #[arg(long)]
    max_gap: Option<f64>,
    /// Minimum leader/follower overlap (s).
    #[arg(long)]
    min_overlap: Option<f64>,

    /// Moving-average window (samples).
    #[arg(long)]
    smoothing_window: Option<usize>,
    #[arg(long)]
    trim_head: Option<f64>,
    #[arg(long)]
    trim_tail: Option<f64>,

    /// DTW resampling rate (Hz).
    #[arg(long, conflicts_with = "native_rate")]
    dtw_rate: Option<f64>,
    /// Run DTW at the native sampling rate.
    #[arg(long)]
    native_rate: bool,
    /// Sakoe-Chiba radius (samples).
    #[arg(long)]
    band: Option<f64>,
    /// Pairs selected per follower class.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    similarity_series: Option<SeriesArg>,

    #[arg(long, conflicts_with = "jam_from_data")]
    jam_spacing: Option<f64>,
    /// Jam spacing = mean of per-pair minimum spacings.
    #[arg(long)]
    jam_from_data: bool,
    /// Fixed desired speed for the v-s fit (m/s).
    #[arg(long)]
    desired_speed: Option<f64>,
    /// Fixed v* (m/s) for every follower.
    #[arg(long, conflicts_with = "v_star_set_speed")]
    v_star: Option<f64>,
    /// Use the recorded ACC set speed as v*.
    #[arg(long)]
    v_star_set_speed: bool,
    #[arg(long)]
    per_vehicle_fits: bool,
    #[arg(long, value_enum)]
    efficiency_scope: Option<ScopeArg>,

    /// Comma-separated, increasing.
    #[arg(long, value_delimiter = ',')]
    ttc_thresholds: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    drac_thresholds: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    aggregation: Option<AggregationArg>,
    #[arg(long, value_enum)]
    safety_scope: Option<ScopeArg>,

    /// Emission coefficient table (CSV).
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[arg(long, value_enum)]
    form: Option<FormArg>,
    /// LABEL=PLATOON_ID (repeatable).
    #[arg(long = "platoon")]
    platoons: Vec<String>,

    /// Output directory.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Option<Vec<FormatArg>>,
    #[arg(long)]
    no_timeseries: bool,
    /// Directory for cached DTW matrices.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl RunArgs {
    fn apply(&self, cfg: &mut PipelineConfig) -> Result<(), Error> {
        if !self.inputs.is_empty() {
            cfg.input.paths = self.inputs.clone();
        }
        set(&mut cfg.input.schema, self.schema.clone().map(Some));
        set(&mut cfg.input.propulsion_lookup, self.propulsion_lookup.clone().map(Some));
        set(&mut cfg.input.max_gap_s, self.max_gap);
        set(&mut cfg.input.min_overlap_s, self.min_overlap);
        set(&mut cfg.kinematics.smoothing_window, self.smoothing_window);
        set(&mut cfg.kinematics.trim_head_s, self.trim_head);
        set(&mut cfg.kinematics.trim_tail_s, self.trim_tail);
        set(&mut cfg.similarity.rate_hz, self.dtw_rate.map(Some));
        if self.native_rate {
            cfg.similarity.rate_hz = None;
        }
        set(&mut cfg.similarity.band, self.band.map(Some));
        set(&mut cfg.similarity.k, self.k);
        set(
            &mut cfg.similarity.series,
            self.similarity_series.map(|s| match s {
                SeriesArg::Leader => SimilaritySeries::Leader,
                SeriesArg::Follower => SimilaritySeries::Follower,
            }),
        );
        if let Some(j) = self.jam_spacing {
            cfg.efficiency.jam_spacing = j;
            cfg.efficiency.jam_spacing_rule = JamSpacingRule::Fixed;
        }
        if self.jam_from_data {
            cfg.efficiency.jam_spacing_rule = JamSpacingRule::FromData;
        }
        set(&mut cfg.efficiency.desired_speed, self.desired_speed.map(Some));
        set(&mut cfg.efficiency.v_star, self.v_star.map(VStarRule::Fixed));
        if self.v_star_set_speed {
            cfg.efficiency.v_star = VStarRule::SetSpeed;
        }
        cfg.efficiency.per_vehicle_fits |= self.per_vehicle_fits;
        set(&mut cfg.efficiency.scope, self.efficiency_scope.map(Into::into));
        set(&mut cfg.safety.ttc_thresholds, self.ttc_thresholds.clone());
        set(&mut cfg.safety.drac_thresholds, self.drac_thresholds.clone());
        set(
            &mut cfg.safety.aggregation,
            self.aggregation.map(|a| match a {
                AggregationArg::MeanOfPairs => carfollow::safety::Aggregation::MeanOfPairs,
                AggregationArg::Pooled => carfollow::safety::Aggregation::Pooled,
            }),
        );
        set(&mut cfg.safety.scope, self.safety_scope.map(Into::into));
        set(&mut cfg.emissions.coefficients, self.coefficients.clone().map(Some));
        set(
            &mut cfg.emissions.form,
            self.form.map(|f| match f {
                FormArg::LogLinear => ModelForm::LogLinear,
                FormArg::LiteralPolynomial => ModelForm::LiteralPolynomial,
            }),
        );
        if !self.platoons.is_empty() {
            cfg.emissions.platoons.clear();
            for m in &self.platoons {
                let (label, id) = m
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("--platoon expects LABEL=ID, got `{m}`")))?;
                cfg.emissions.platoons.insert(label.trim().into(), id.trim().into());
            }
        }
        set(&mut cfg.output.dir, self.out.clone());
        set(
            &mut cfg.output.formats,
            self.format.as_ref().map(|fs| {
                fs.iter()
                    .map(|f| match f {
                        FormatArg::Json => ReportFormat::Json,
                        FormatArg::Csv => ReportFormat::Csv,
                    })
                    .collect()
            }),
        );
        if self.no_timeseries {
            cfg.output.timeseries = false;
        }
        set(&mut cfg.output.cache_dir, self.cache_dir.clone().map(Some));
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn resolve(config: Option<&PathBuf>, args: &RunArgs) -> Result<PipelineConfig, Error> {
    let mut cfg = match config {
        Some(p) => PipelineConfig::from_path(p)?,
        None => PipelineConfig::default(),
    };
    args.apply(&mut cfg)?;
    cfg.validate()?;
    Ok(cfg)
}

fn print_dataset(report: &RunReport) {
    let ds = &report.dataset;
    println!("platoons: {}", ds.n_platoons);
    println!("pairs: {} ({} retained)", ds.n_pairs, ds.n_pairs_retained);
    for (c, n) in &ds.followers {
        println!("  {} followers: {n}", c.as_str());
    }
    println!("platoon hours: {:.3}", ds.platoon_hours);
    println!("retained pair hours: {:.3}", ds.pair_hours);
    if !report.warnings.is_empty() {
        println!("warnings: {}", report.warnings.len());
    }
}

fn run_stage(cli: &Cli, args: &RunArgs, stages: Stages) -> anyhow::Result<()> {
    let cfg = resolve(cli.config.as_ref(), args)?;
    let report = run_pipeline(&cfg, stages)?;
    let files = emit_report(&report, &cfg.output.formats, &cfg.output.dir)?;
    print_dataset(&report);
    println!("wrote {} files to {}", files.len(), cfg.output.dir.display());
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::IngestCheck { run, export } => {
            let cfg = resolve(cli.config.as_ref(), run)?;
            let report = run_pipeline(&cfg, Stages::INGEST_ONLY)?;
            print_dataset(&report);
            for w in &report.warnings {
                println!("warning: {w}");
            }
            if let Some(dir) = export {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let mut notes = Vec::new();
                for lp in load_platoons(&cfg, &mut notes)? {
                    let path = dir.join(format!("{}.csv", file_stem(&lp.platoon.platoon_id)));
                    let f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                    write_platoon(&lp.platoon, std::io::BufWriter::new(f)).map_err(|e| Error::io(&path, e))?;
                }
                println!("exported platoons to {}", dir.display());
            }
            Ok(())
        }
        Command::Similarity(a) => run_stage(
            cli,
            a,
            Stages {
                similarity: true,
                ..Stages::INGEST_ONLY
            },
        ),
        Command::Analyze(a) => run_stage(
            cli,
            a,
            Stages {
                emissions: false,
                ..Stages::ALL
            },
        ),
        Command::Emissions(a) => run_stage(
            cli,
            a,
            Stages {
                emissions: true,
                ..Stages::INGEST_ONLY
            },
        ),
        Command::FullRun(a) => run_stage(cli, a, Stages::ALL),
        Command::GenerateFixtures {
            out,
            platoons,
            duration,
            seed,
        } => {
            let data = out.join("platoons");
            fs::create_dir_all(&data).map_err(|e| Error::io(&data, e))?;
            for p in fixture_corpus(*platoons, *duration, *seed) {
                let path = data.join(format!("{}.csv", p.platoon_id));
                let f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                write_platoon(&p, std::io::BufWriter::new(f)).map_err(|e| Error::io(&path, e))?;
            }
            let coef = out.join("synthetic_coefficients.csv");
            let f = fs::File::create(&coef).map_err(|e| Error::io(&coef, e))?;
            write_coefficients(&synthetic_coefficients(), std::io::BufWriter::new(f))?;
            println!("wrote {platoons} platoons to {} and {}", data.display(), coef.display());
            Ok(())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>().map(Error::kind) {
        Some(ErrorKind::Config) => 1,
        Some(ErrorKind::Invariant) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // library errors already carry their cause in the message
            if e.downcast_ref::<Error>().is_some() {
                eprintln!("error: {e}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
