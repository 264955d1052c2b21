//! Argument parsing and the four subcommands.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use firmsim_core::metrics::{column_correlation, cumulated_profitability, relative_cumulated_profitability};
use firmsim_core::{
    col, run_replicates, validate_config, ReplicateSet, Scenario, SimConfig, TimeInitMethod, ValueType,
};
use rayon::ThreadPool;

use crate::config_file::ConfigFile;
use crate::error::CliError;
use crate::export::{self, Cell, Format, SeriesExport, TableWriter};
use crate::sweep::{check_axes, grid_points, Axis, GridPoint, SweepParam, SweepValue};

#[derive(Debug, Parser)]
#[command(name = "firmsim", version, about = "Agent-based firm simulator with adaptive management")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and export its replicate mean.
    Run {
        /// Base, Daily, Monthly, Biannually or Yearly.
        #[arg(long)]
        scenario: Option<Scenario>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run all five reference scenarios plus the correlation and
    /// relative-profitability tables.
    Scenarios {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every point of a Cartesian parameter grid.
    Sweep {
        /// Grid axis `name=v1,v2,...`; repeat for more axes. `update` takes
        /// `suf:sui` pairs.
        #[arg(long = "grid", value_name = "AXIS")]
        grid: Vec<String>,
        #[arg(long)]
        scenario: Option<Scenario>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One-at-a-time scans of the initial strategy and the time
    /// initialisation method.
    Sensitivity {
        /// sigma0, mu0, lambda0 or time_init; all four when omitted.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Scenario the scans start from (default Monthly).
        #[arg(long)]
        scenario: Option<Scenario>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<u32>,
    #[arg(long)]
    pub steps: Option<u32>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for replicate batches.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Flat TOML file with configuration overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also export per-agent traces.
    #[arg(long)]
    pub per_agent: bool,
    /// Also export every replicate, not only the mean.
    #[arg(long)]
    pub runs: bool,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { scenario, common } => {
            let ctx = Context::new(common)?;
            let cfg = ctx.config(scenario.or(ctx.file.scenario()?).unwrap_or(Scenario::Base))?;
            let set = ctx.replicates(&cfg)?;
            let baseline = ctx.baseline(&cfg, (!cfg.endogenous_management).then_some(&set))?;
            ctx.export(&file_stem(&cfg.scenario), &cfg, &set, &baseline)?;
            Ok(())
        }
        Command::Scenarios { common } => run_scenarios(&Context::new(common)?),
        Command::Sweep { grid, scenario, common } => {
            let ctx = Context::new(common)?;
            let axes = grid.iter().map(|s| Axis::parse(s)).collect::<Result<Vec<_>, _>>()?;
            check_axes(&axes)?;
            let cfg = ctx.config(scenario.or(ctx.file.scenario()?).unwrap_or(Scenario::Base))?;
            run_sweep(&ctx, &cfg, &axes)
        }
        Command::Sensitivity { params, scenario, common } => {
            let ctx = Context::new(common)?;
            let params = sensitivity_params(params)?;
            let cfg = ctx.config(scenario.or(ctx.file.scenario()?).unwrap_or(Scenario::Monthly))?;
            run_sensitivity(&ctx, &cfg, &params)
        }
    }
}

/// Values scanned for each initial strategy component.
pub const SENSITIVITY_LEVELS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn sensitivity_params(names: &[String]) -> Result<Vec<SweepParam>, CliError> {
    let allowed = [SweepParam::Sigma0, SweepParam::Mu0, SweepParam::Lambda0, SweepParam::TimeInit];
    if names.is_empty() {
        return Ok(allowed.to_vec());
    }
    names
        .iter()
        .map(|n| {
            let p = SweepParam::parse(n)?;
            if allowed.contains(&p) {
                Ok(p)
            } else {
                Err(CliError::Usage(format!(
                    "sensitivity scans cover sigma0, mu0, lambda0 and time_init, not `{n}`"
                )))
            }
        })
        .collect()
}

pub fn sensitivity_axis(param: SweepParam) -> Axis {
    let values = match param {
        SweepParam::TimeInit => TimeInitMethod::ALL.map(SweepValue::Init).to_vec(),
        _ => SENSITIVITY_LEVELS.map(SweepValue::Num).to_vec(),
    };
    Axis { param, values }
}

struct Context<'a> {
    args: &'a CommonArgs,
    file: ConfigFile,
    pool: Option<ThreadPool>,
}

impl<'a> Context<'a> {
    fn new(args: &'a CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let pool = match args.threads {
            Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
            Some(k) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| CliError::Runtime(e.into()))?,
            ),
            None => None,
        };
        Ok(Context { args, file, pool })
    }

    /// Scenario defaults, then file keys, then command-line flags.
    fn config(&self, scenario: Scenario) -> Result<SimConfig, CliError> {
        let mut cfg = scenario.config();
        self.file.apply(&mut cfg)?;
        if let Some(v) = self.args.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.args.replicates {
            cfg.replicates = v;
        }
        if let Some(v) = self.args.steps {
            cfg.steps = v;
        }
        cfg.record_agents = self.args.per_agent;
        Ok(cfg)
    }

    fn replicates(&self, cfg: &SimConfig) -> Result<ReplicateSet, CliError> {
        let violations = validate_config(cfg);
        if !violations.is_empty() {
            return Err(CliError::Config(violations));
        }
        let set = match &self.pool {
            Some(pool) => pool.install(|| run_replicates(cfg)),
            None => run_replicates(cfg),
        }?;
        Ok(set)
    }

    /// Constant-management twin of `cfg`, reusing `known` when it already
    /// is one.
    fn baseline(&self, cfg: &SimConfig, known: Option<&ReplicateSet>) -> Result<ReplicateSet, CliError> {
        if let Some(set) = known {
            return Ok(set.clone());
        }
        let mut base = cfg.clone();
        base.endogenous_management = false;
        base.record_agents = false;
        self.replicates(&base)
    }

    fn path(&self, stem: &str, suffix: &str) -> PathBuf {
        self.args.out.join(format!("{stem}{suffix}.{}", self.args.format.extension()))
    }

    /// Writes the mean series and, on request, replicate and agent traces.
    /// Returns the path of the mean series.
    fn export(&self, stem: &str, cfg: &SimConfig, set: &ReplicateSet, baseline: &ReplicateSet) -> Result<PathBuf, CliError> {
        let format = self.args.format;
        let ledger = set.mean_ledger();
        let cumulated = cumulated_profitability(&ledger);
        let relative = relative_cumulated_profitability(&ledger, &baseline.mean_ledger())?;
        let mean_path = self.path(stem, "");
        export::write_series_file(
            &mean_path,
            format,
            &[SeriesExport {
                scenario: &cfg.scenario,
                replicate: None,
                rows: &set.mean,
                cumulated: &cumulated,
                relative: Some(&relative),
            }],
        )?;

        if self.args.runs {
            let mut table = TableWriter::new(export::create(&self.path(stem, "_runs"))?, format, export::series_header())?;
            for (run, base) in set.runs.iter().zip(&baseline.runs) {
                let ledger = run.ledger();
                let cumulated = cumulated_profitability(&ledger);
                let relative = relative_cumulated_profitability(&ledger, &base.ledger())?;
                SeriesExport {
                    scenario: &cfg.scenario,
                    replicate: Some(run.replicate),
                    rows: &run.series(),
                    cumulated: &cumulated,
                    relative: Some(&relative),
                }
                .write_to(&mut table)?;
            }
            table.finish()?;
        }

        if self.args.per_agent {
            let header = export::AGENT_HEADER.map(String::from).to_vec();
            let mut table = TableWriter::new(export::create(&self.path(stem, "_agents"))?, format, header)?;
            for run in &set.runs {
                export::write_agent_rows(&mut table, &cfg.scenario, run.replicate, &run.records)?;
            }
            table.finish()?;
        }
        Ok(mean_path)
    }
}

fn file_stem(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c.to_ascii_lowercase() } else { '_' })
        .collect();
    if s.is_empty() { "run".into() } else { s }
}

/// Satisfaction-profitability, homophily-profitability and
/// satisfaction-homophily correlations of one group over a mean series.
pub fn group_correlations(set: &ReplicateSet, g: ValueType) -> [Option<f64>; 3] {
    let (s, p, h) = (col::satisfaction(g), col::profitability(g), col::homophily(g));
    [
        column_correlation(&set.mean, s, p),
        column_correlation(&set.mean, h, p),
        column_correlation(&set.mean, s, h),
    ]
}

fn run_scenarios(ctx: &Context<'_>) -> Result<(), CliError> {
    let format = ctx.args.format;
    let header = ["scenario", "group", "SP", "HP", "SH"].map(String::from).to_vec();
    let mut corr = TableWriter::new(export::create(&ctx.path("correlations", ""))?, format, header)?;
    let header = ["scenario", "relative_cumulated_profitability", "percent"].map(String::from).to_vec();
    let mut rel = TableWriter::new(export::create(&ctx.path("relative_profitability", ""))?, format, header)?;

    let base_cfg = ctx.config(Scenario::Base)?;
    let base = ctx.replicates(&base_cfg)?;
    for scenario in Scenario::ALL {
        let cfg = ctx.config(scenario)?;
        let set = if scenario == Scenario::Base { base.clone() } else { ctx.replicates(&cfg)? };
        let path = ctx.export(&file_stem(scenario.name()), &cfg, &set, &base)?;
        println!("{scenario}: {}", path.display());

        for g in ValueType::ALL {
            let mut cells = vec![Cell::Text(scenario.name().into()), Cell::Text(g.label().into())];
            cells.extend(group_correlations(&set, g).map(Cell::Float));
            corr.write_row(&cells)?;
        }
        let r = relative_cumulated_profitability(&set.mean_ledger(), &base.mean_ledger())?.last().copied();
        let percent = r.filter(|v| v.is_finite()).map(|v| format!("{:.2}", 100.0 * v)).unwrap_or_default();
        rel.write_row(&[Cell::Text(scenario.name().into()), Cell::Float(r), Cell::Text(percent)])?;
    }
    corr.finish()?;
    rel.finish()?;
    Ok(())
}

/// Runs each point with its own constant-management baseline and returns
/// the written mean-series paths, relative to the output directory.
fn run_points(ctx: &Context<'_>, cfg: &SimConfig, points: &[GridPoint], stem: &dyn Fn(&GridPoint) -> String) -> Result<Vec<String>, CliError> {
    let mut files = Vec::with_capacity(points.len());
    for point in points {
        let mut pcfg = cfg.clone();
        point.apply(&mut pcfg);
        let set = ctx.replicates(&pcfg)?;
        let known = (!pcfg.endogenous_management).then_some(&set);
        let baseline = ctx.baseline(&pcfg, known)?;
        let path = ctx.export(&stem(point), &pcfg, &set, &baseline)?;
        files.push(relative_name(&ctx.args.out, &path));
    }
    Ok(files)
}

fn relative_name(dir: &Path, path: &Path) -> String {
    path.strip_prefix(dir).unwrap_or(path).to_string_lossy().into_owned()
}

fn run_sweep(ctx: &Context<'_>, cfg: &SimConfig, axes: &[Axis]) -> Result<(), CliError> {
    let points = grid_points(axes);
    let files = run_points(ctx, cfg, &points, &|p| format!("point_{:03}", p.index))?;
    let mut header: Vec<String> = vec!["point".into(), "file".into()];
    header.extend(axes.iter().map(|a| a.param.name().to_string()));
    write_manifest(ctx, header, points.iter().zip(&files).map(|(p, f)| {
        let mut row = vec![Cell::Int(p.index as u64), Cell::Text(f.clone())];
        row.extend(p.settings.iter().map(|(_, v)| Cell::Text(v.to_string())));
        row
    }))
}

fn run_sensitivity(ctx: &Context<'_>, cfg: &SimConfig, params: &[SweepParam]) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for &param in params {
        let points = grid_points(&[sensitivity_axis(param)]);
        let files = run_points(ctx, cfg, &points, &|p| format!("{}_{}", param.name(), p.index))?;
        for (p, f) in points.iter().zip(files) {
            rows.push(vec![Cell::Text(param.name().into()), Cell::Text(p.settings[0].1.to_string()), Cell::Text(f)]);
        }
    }
    write_manifest(ctx, ["param", "value", "file"].map(String::from).to_vec(), rows.into_iter())
}

/// The manifest is always CSV so that it can be read before knowing the
/// data format.
fn write_manifest(ctx: &Context<'_>, header: Vec<String>, rows: impl Iterator<Item = Vec<Cell>>) -> Result<(), CliError> {
    let path = ctx.args.out.join("manifest.csv");
    let mut table = TableWriter::new(export::create(&path)?, Format::Csv, header)?;
    for row in rows {
        table.write_row(&row)?;
    }
    table.finish()?;
    println!("manifest: {}", path.display());
    Ok(())
}
