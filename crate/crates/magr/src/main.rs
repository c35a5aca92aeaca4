use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use magr::config;
use magr::error::Result;
use magr::gaps::{GapKind, GapPlan};
use magr::harness::{self, MeasureSpec, Treatment};
use magr::io::{self, DataTable};
use magr::series::GappySeries;
use magr::systems::{SystemKind, SystemSpec, DEFAULT_TRANSIENT};

#[derive(Parser)]
#[command(
    name = "magr",
    about = "Connectivity measures on gappy time series via measure-adapted gap removal",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit full-precision numbers instead of 6 significant digits.
    #[arg(long, global = true)]
    full_precision: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Mvar,
    Henon,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Cc,
    Cmi,
    Te,
}

#[derive(Clone, Copy, ValueEnum)]
enum GapKindArg {
    Single,
    FixedBlock,
    VaryingBlock,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreatmentArg {
    Magr,
    Gc,
    Li,
    Ci,
    Spi,
    Nni,
    Sti,
}

impl From<TreatmentArg> for Treatment {
    fn from(t: TreatmentArg) -> Self {
        match t {
            TreatmentArg::Magr => Treatment::Magr,
            TreatmentArg::Gc => Treatment::Gc,
            TreatmentArg::Li => Treatment::Li,
            TreatmentArg::Ci => Treatment::Ci,
            TreatmentArg::Spi => Treatment::Spi,
            TreatmentArg::Nni => Treatment::Nni,
            TreatmentArg::Sti => Treatment::Sti,
        }
    }
}

#[derive(Args)]
struct MeasureFlags {
    /// Measure to compute.
    #[arg(long, value_enum)]
    measure: MeasureArg,
    /// Delay tau (default 0 for cc/cmi, 1 for te).
    #[arg(long)]
    tau: Option<usize>,
    /// Embedding dimension m (te only).
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Correlation-sum radius r on normalized series (te only).
    #[arg(long, default_value_t = 0.2)]
    r: f64,
    /// Bin count b (cmi only; default sqrt(effective_n / 5)).
    #[arg(long)]
    b: Option<usize>,
}

impl MeasureFlags {
    fn spec(&self) -> MeasureSpec {
        match self.measure {
            MeasureArg::Cc => MeasureSpec::Cc { tau: self.tau.unwrap_or(0) },
            MeasureArg::Cmi => MeasureSpec::Cmi { tau: self.tau.unwrap_or(0), bins: self.b },
            MeasureArg::Te => MeasureSpec::Te {
                m: self.m,
                tau: self.tau.unwrap_or(1),
                radius: self.r,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark system pair as CSV (columns t,x,y).
    Simulate {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long)]
        n: usize,
        /// Coupling strength C (henon only).
        #[arg(long, default_value_t = 0.0)]
        coupling: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
        transient: usize,
    },
    /// Inject gaps into every data column of a CSV file.
    Inject {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: GapKindArg,
        /// Total missing count per column; alternative to --gap-pct.
        #[arg(long, conflicts_with = "gap_pct")]
        g: Option<usize>,
        /// Missing count as a percentage of the column length.
        #[arg(long)]
        gap_pct: Option<f64>,
        #[arg(long, default_value_t = 10)]
        block_size: usize,
        #[arg(long, default_value_t = 1)]
        block_min: usize,
        #[arg(long, default_value_t = 15)]
        block_max: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Compute a measure on two columns of a CSV file.
    Measure {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        flags: MeasureFlags,
        /// Gap treatment applied before the estimator.
        #[arg(long, value_enum, default_value = "magr")]
        treatment: TreatmentArg,
        /// Seed for stochastic interpolation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Column names, e.g. x,y (default: the first two data columns).
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<String>>,
    },
    /// Run an experiment sweep from a config file; emits the stats CSV.
    Experiment {
        #[arg(long, short)]
        config: PathBuf,
    },
    /// Pairwise measure matrix over all data columns of a CSV file.
    Matrix {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        flags: MeasureFlags,
    },
}

/// Columns that look like a time index rather than data.
fn is_index_name(name: &str) -> bool {
    matches!(name.to_ascii_lowercase().as_str(), "t" | "time" | "date" | "index")
}

fn data_columns(table: &DataTable) -> Vec<(String, GappySeries)> {
    table
        .names
        .iter()
        .zip(&table.columns)
        .filter(|(n, _)| !is_index_name(n))
        .map(|(n, s)| (n.clone(), s.clone()))
        .collect()
}

fn select_pair(table: &DataTable, cols: &Option<Vec<String>>) -> Result<(GappySeries, GappySeries)> {
    let available = data_columns(table);
    match cols {
        Some(names) => {
            if names.len() != 2 {
                return Err(magr::MagrError::Input("--cols needs exactly two names".into()));
            }
            let find = |name: &str| {
                table
                    .column(name)
                    .cloned()
                    .ok_or_else(|| magr::MagrError::Input(format!("no column named '{name}'")))
            };
            Ok((find(&names[0])?, find(&names[1])?))
        }
        None => {
            if available.len() < 2 {
                return Err(magr::MagrError::Input(
                    "need at least two data columns (or pass --cols)".into(),
                ));
            }
            Ok((available[0].1.clone(), available[1].1.clone()))
        }
    }
}

fn default_tokens() -> Vec<String> {
    io::DEFAULT_MISSING_TOKENS.iter().map(|s| s.to_string()).collect()
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let fp = cli.full_precision;
    match &cli.command {
        Command::Simulate { system, n, coupling, seed, transient } => {
            let kind = match system {
                SystemArg::Mvar => SystemKind::Mvar,
                SystemArg::Henon => SystemKind::Henon,
            };
            let spec = SystemSpec::new(kind, *n, *coupling, *seed, *transient)?;
            let (x, y) = spec.generate()?;
            io::write_pair(out, &x, &y, fp)
        }
        Command::Inject { input, kind, g, gap_pct, block_size, block_min, block_max, seed } => {
            let table = io::read_csv(input, &default_tokens())?;
            let gap_kind = match kind {
                GapKindArg::Single => GapKind::Single,
                GapKindArg::FixedBlock => GapKind::FixedBlock { size: *block_size },
                GapKindArg::VaryingBlock => GapKind::VaryingBlock { min: *block_min, max: *block_max },
            };
            let mut columns = Vec::with_capacity(table.columns.len());
            for (ci, (name, col)) in table.names.iter().zip(&table.columns).enumerate() {
                if is_index_name(name) {
                    columns.push(col.clone());
                    continue;
                }
                let g = match (g, gap_pct) {
                    (Some(g), _) => *g,
                    (None, Some(p)) => ((p / 100.0) * col.len() as f64).round() as usize,
                    (None, None) => {
                        return Err(magr::MagrError::Input("pass --g or --gap-pct".into()))
                    }
                };
                let plan = GapPlan {
                    kind: gap_kind,
                    g,
                    seed: seed.wrapping_add(ci as u64),
                };
                columns.push(magr::gaps::inject_gaps(col, &plan)?);
            }
            let gappy = DataTable { names: table.names.clone(), columns, dates: table.dates.clone() };
            io::write_table(out, &gappy, fp)
        }
        Command::Measure { input, flags, treatment, seed, cols } => {
            let table = io::read_csv(input, &default_tokens())?;
            let (x, y) = select_pair(&table, cols)?;
            let spec = flags.spec();
            writeln!(out, "measure,treatment,direction,value,effective_n,params")?;
            let emit = |out: &mut dyn Write, dir: &str, a: &GappySeries, b: &GappySeries| -> Result<()> {
                let (res, _) = harness::treated_measure(a, b, (*treatment).into(), &spec, *seed)
                    .map(|(r, n)| (r, n))?;
                let params = match spec {
                    MeasureSpec::Cc { tau } => format!("tau={tau}"),
                    MeasureSpec::Cmi { tau, .. } => {
                        format!("tau={tau};b={}", res.params.bins.unwrap_or(0))
                    }
                    MeasureSpec::Te { m, tau, radius } => format!("m={m};tau={tau};r={radius}"),
                };
                writeln!(
                    out,
                    "{},{},{dir},{},{},{params}",
                    spec.name(),
                    treatment_name(*treatment),
                    io::fmt_value(res.value, fp),
                    res.effective_n
                )?;
                Ok(())
            };
            match spec {
                MeasureSpec::Te { .. } => {
                    emit(out, "x->y", &x, &y)?;
                    emit(out, "y->x", &y, &x)?;
                }
                _ => emit(out, "x-y", &x, &y)?,
            }
            Ok(())
        }
        Command::Experiment { config: path } => {
            let file = config::load_experiment(path)?;
            match file.lengths {
                Some(lengths) => {
                    writeln!(out, "n,method,gap_pct,mean_d,std_d,mean_effective_n,n_success")?;
                    for (n, stats) in harness::length_sweep(&file.config, &lengths)? {
                        for c in &stats.cells {
                            writeln!(
                                out,
                                "{n},{},{},{},{},{},{}",
                                c.method,
                                io::fmt_value(c.gap_pct, fp),
                                io::fmt_value(c.mean_d, fp),
                                io::fmt_value(c.std_d, fp),
                                io::fmt_value(c.mean_effective_n, fp),
                                c.n_success
                            )?;
                        }
                    }
                    Ok(())
                }
                None => {
                    let stats = harness::run_experiment(&file.config)?;
                    io::write_experiment_stats(out, &stats, fp)
                }
            }
        }
        Command::Matrix { input, flags } => {
            let table = io::read_csv(input, &default_tokens())?;
            let series = data_columns(&table);
            let matrix = harness::pairwise_matrix(&series, &flags.spec())?;
            io::write_matrix(out, &matrix, fp)
        }
    }
}

fn treatment_name(t: TreatmentArg) -> Treatment {
    t.into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.out {
        Some(path) => {
            let file = match std::fs::File::create(path) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            let mut w = std::io::BufWriter::new(file);
            run(&cli, &mut w).and_then(|()| w.flush().map_err(Into::into))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            run(&cli, &mut w)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
