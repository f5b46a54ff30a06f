//! `intgeo`: runs the verification pipelines and writes CSV reports with a
//! JSON summary. Exit 0 when every row passes, 1 on a failed check, 2 on a
//! configuration or calibration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use serde::{Deserialize, Serialize};

use intgeo::geometry::phantom::PhantomSpec;
use intgeo::report::{Report, ReportRow};
use intgeo::suite::{self, SuiteContext, SuiteParams};
use intgeo::{Constants, Error, QuadratureSpec};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RunConfig {
    quadrature: QuadratureSpec,
    /// Replaces the default disk phantom of the H², horocycle, support, and
    /// Fourier pipelines.
    phantom: Option<PhantomSpec>,
    params: SuiteParams,
    /// Defaults to `<out>/constants.json`.
    constants_path: Option<PathBuf>,
    seed: u64,
}

#[derive(Debug, Parser)]
#[command(name = "intgeo", version, about = "Numerical checks of inversion formulas in integral geometry")]
struct Cli {
    /// JSON run configuration; defaults apply to every missing key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for reports and the constants file.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for probe placement; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the internal parallel loops.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write zero in the runtime_ms column, making reports byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// X-ray inversion on ℝ² and ℝ³ and 2-plane inversion on ℝ³.
    EuclidInvert,
    /// Geodesic inversion on H² and H³ and plane inversion on H³.
    HypInvert,
    /// Rank-two X-ray inversion at the origin of H²×H².
    ProductInvert,
    /// Horocycle duality, Λ-inversion, and the horocycle Plancherel formula.
    HorocycleRoundtrip,
    /// Range characterization of the horocycle transform.
    HorocycleRange,
    /// Support theorem harness with its negative control.
    SupportScan,
    /// Abel, spherical, and dual Abel transform identities.
    AbelIdentities,
    /// Fourier transform on the disk: Plancherel, inversion, holomorphy.
    FourierPlancherel,
    /// Riemann–Lebesgue decay in the tube and the L¹ bound.
    RlScan,
    /// Measure and freeze the inversion constants and κ.
    Calibrate,
    /// Calibrate, then run every pipeline.
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::EuclidInvert => "euclid-invert",
            Command::HypInvert => "hyp-invert",
            Command::ProductInvert => "product-invert",
            Command::HorocycleRoundtrip => "horocycle-roundtrip",
            Command::HorocycleRange => "horocycle-range",
            Command::SupportScan => "support-scan",
            Command::AbelIdentities => "abel-identities",
            Command::FourierPlancherel => "fourier-plancherel",
            Command::RlScan => "rl-scan",
            Command::Calibrate => "calibrate",
            Command::All => "all",
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Error> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text)?;
    cfg.quadrature.validate()?;
    Ok(cfg)
}

/// Rows comparing a fresh calibration with the frozen file it replaces.
fn reproduction_rows(old: &Constants, new: &Constants) -> Vec<ReportRow> {
    let pairs = [
        ("c_d_3_2", old.c_d_3_2, new.c_d_3_2),
        ("C_d_3_2", old.big_c_d_3_2, new.big_c_d_3_2),
        ("kappa", old.kappa, new.kappa),
        ("horocycle_mu_exponent", old.horocycle_mu_exponent, new.horocycle_mu_exponent),
        ("range_kappa0", old.range_kappa0, new.range_kappa0),
        ("range_mu", old.range_mu, new.range_mu),
    ];
    pairs
        .into_iter()
        .map(|(key, a, b)| {
            ReportRow::relative(format!("calibrate.reproduce.{key}"), "calibration reproduces the frozen constants", b, a, 1e-6)
        })
        .collect()
}

fn calibrate(ctx: &mut SuiteContext, constants_path: &Path) -> Result<Report, Error> {
    let (mut report, constants) = suite::calibrate(ctx)?;
    if constants_path.exists() {
        let old = Constants::load(constants_path)?;
        for row in reproduction_rows(&old, &constants) {
            report.push(row);
        }
    }
    constants.save(constants_path)?;
    info!("constants written to {}", constants_path.display());
    ctx.constants = Some(constants);
    Ok(report)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let cfg = load_config(cli.config.as_deref())?;
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    std::fs::create_dir_all(&cli.out)?;
    let constants_path = cfg.constants_path.clone().unwrap_or_else(|| cli.out.join("constants.json"));
    let mut ctx = SuiteContext {
        spec: cfg.quadrature,
        params: cfg.params,
        seed: cli.seed.unwrap_or(cfg.seed),
        phantom: cfg.phantom,
        constants: None,
    };
    match cli.command {
        Command::Calibrate => calibrate(&mut ctx, &constants_path),
        Command::All => {
            let mut report = calibrate(&mut ctx, &constants_path)?;
            for name in suite::PIPELINES {
                info!("running {name}");
                report.extend(suite::run_pipeline(name, &ctx)?);
            }
            Ok(report)
        }
        cmd => {
            if !constants_path.exists() {
                return Err(Error::NotCalibrated("constants file"));
            }
            ctx.constants = Some(Constants::load(&constants_path)?);
            suite::run_pipeline(cmd.name(), &ctx)
        }
    }
}

fn write_outputs(cli: &Cli, report: &Report) -> Result<(), Error> {
    let name = cli.command.name();
    let csv = std::fs::File::create(cli.out.join(format!("{name}.csv")))?;
    report.write_csv(std::io::BufWriter::new(csv))?;
    let summary = report.summary(name);
    std::fs::write(cli.out.join(format!("{name}.json")), serde_json::to_string_pretty(&summary)? + "\n")?;
    println!("{name}: {}/{} rows pass", summary.passed, summary.rows);
    for id in &summary.failed {
        println!("  FAIL {id}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.no_timing {
        report.zero_runtimes();
    }
    if let Err(e) = write_outputs(&cli, &report) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
