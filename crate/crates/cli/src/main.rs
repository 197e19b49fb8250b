use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skyscraper_cli::{
    parse_box, parse_point, parse_rats, read_presentation, read_store, write_faces, write_landscape, write_store,
    CliError,
};
use skyscraper_core::cheng::{hn_cheng, ChengConfig};
use skyscraper_core::grmat::{int, parse_rat, Degree, GradedMatrix, Grid, Rat};
use skyscraper_core::hn_core::hn_blockwise;
use skyscraper_core::invariants::{Provenance, SkyscraperQuery, SkyscraperStore};
use skyscraper_core::pipeline::{
    approx_skyscraper, clip, exact_skyscraper, factor_interval_check, landscapes, lattice_grid, parallel_grid_scan,
    support_box, Anchor, Engine, LandscapeParams, ScanConfig,
};

#[derive(Parser)]
#[command(name = "skyscraper", version, about = "HN filtrations and skyscraper invariants of 2-parameter modules")]
struct Cli {
    /// Presentation in `skypres v1` format (`query` also accepts a store CSV).
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Read coefficients modulo this prime instead of the declared field.
    #[arg(long, global = true)]
    field: Option<u32>,
    /// Clip the module to the box `X0,Y0,X1,Y1`.
    #[arg(long = "box", global = true, value_name = "X0,Y0,X1,Y1", allow_hyphen_values = true)]
    support: Option<String>,
    /// Margin added above the largest degree when no box is given.
    #[arg(long, global = true, default_value = "1")]
    margin: String,
    /// Write CSV files into this directory instead of printing to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, default_value = "brute")]
    engine: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Disable subspace pruning in the brute-force engine.
    #[arg(long)]
    no_filter: bool,
}

#[derive(Subcommand)]
enum Command {
    /// HN filtration of the submodule generated at one degree.
    Hn {
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        at: String,
        /// Regular grid with NX × NY points over the box (cheng engine).
        #[arg(long, value_name = "NX,NY")]
        grid: Option<String>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Filtrations at every lattice point of the support.
    Approx {
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Slope subdivisions of every grid cell: filtrations at cell corners
    /// (`store.csv`) and subdivision faces (`faces.csv`).
    Exact,
    /// The lattice store computed by sweeping cached cell subdivisions.
    Scan {
        #[arg(long, default_value = "1")]
        epsilon: String,
    },
    /// Number of factors of slope at least θ alive on the way from one degree
    /// to another.
    Query {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        from: String,
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        to: String,
        /// Lattice spacing of a store CSV input; exact keys when absent.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Filtered landscapes on a regular grid over the box.
    Landscape {
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value_t = 10)]
        resolution: usize,
        #[arg(long, default_value = "center")]
        anchor: String,
        /// Landscape values are multiples of this step.
        #[arg(long, default_value = "1/8")]
        step: String,
    },
    /// Flags HN factors that are not interval modules and cross-checks the
    /// engines against each other.
    Check {
        #[arg(long, default_value = "1")]
        epsilon: String,
    },
}

fn rat_arg(name: &str, s: &str) -> Result<Rat, CliError> {
    parse_rat(s).ok_or_else(|| CliError::Usage(format!("--{name}: `{s}` is not a rational number")))
}

fn usage<T, E: ToString>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

impl Cli {
    fn module(&self) -> Result<GradedMatrix, CliError> {
        let path = self.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
        read_presentation(path, self.field).map_err(|e| with_path(e, path))
    }

    fn config(&self) -> Result<ScanConfig, CliError> {
        let cfg = ScanConfig {
            support: self.support.as_deref().map(parse_box).transpose()?,
            margin: rat_arg("margin", &self.margin)?,
            ..ScanConfig::default()
        };
        Ok(cfg)
    }

    /// Writes `name` into the output directory, or to stdout.
    fn emit(&self, name: &str, write: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
        match &self.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(name);
                let mut f = BufWriter::new(File::create(&path)?);
                write(&mut f)?;
                f.flush()?;
                log::info!("wrote {}", path.display());
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                write(&mut lock)?;
            }
        }
        Ok(())
    }
}

fn with_path(e: CliError, path: &Path) -> CliError {
    match e {
        CliError::Parse { line, message } => {
            CliError::Parse { line, message: format!("{}: {message}", path.display()) }
        }
        other => other,
    }
}

fn apply_engine(cfg: &mut ScanConfig, args: &EngineArgs) -> Result<(), CliError> {
    cfg.engine = usage(args.engine.parse::<Engine>())?;
    cfg.seed = args.seed;
    cfg.filter = !args.no_filter;
    Ok(())
}

fn linspace(lo: Rat, hi: Rat, n: usize) -> Vec<Rat> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * int(i as i64) / int(n as i64 - 1)).collect()
}

fn hn(cli: &Cli, at: &str, grid: Option<&str>, args: &EngineArgs) -> Result<(), CliError> {
    let m = cli.module()?;
    let mut cfg = cli.config()?;
    apply_engine(&mut cfg, args)?;
    let alpha = parse_point(at)?;
    let clipped = clip(&m, &cfg);
    let list = match cfg.engine {
        Engine::Brute => hn_blockwise(&clipped, &alpha, cfg.filter)?,
        Engine::Cheng => {
            let (lo, hi) = support_box(&m, &cfg).ok_or(skyscraper_core::Error::ZeroModule(alpha))?;
            let base = match grid {
                Some(g) => match parse_rats(g)?[..] {
                    [nx, ny] if nx.is_integer() && ny.is_integer() && nx >= int(1) && ny >= int(1) => Grid::new(
                        linspace(lo.x, hi.x, nx.to_integer() as usize),
                        linspace(lo.y, hi.y, ny.to_integer() as usize),
                    ),
                    _ => return Err(CliError::Usage(format!("--grid: expected NX,NY, got `{g}`"))),
                },
                None => lattice_grid(&lo, &hi, int(1)),
            };
            let grid = base.union(&Grid::new(vec![alpha.x], vec![alpha.y]));
            hn_cheng(&clipped, &grid, &alpha, &ChengConfig { seed: cfg.seed, ..ChengConfig::default() })?
        }
        Engine::Exact => return Err(CliError::Usage("hn supports the brute and cheng engines".into())),
    };
    let mut store = SkyscraperStore::new(Provenance::Exact);
    store.insert(list);
    cli.emit("store.csv", |w| write_store(&store, w))
}

fn check(cli: &Cli, epsilon: &str) -> Result<(), CliError> {
    let m = cli.module()?;
    let cfg = ScanConfig { epsilon: rat_arg("epsilon", epsilon)?, ..cli.config()? };
    let approx = approx_skyscraper(&m, &cfg)?;
    let report = factor_interval_check(&approx);
    let mut problems = Vec::new();
    for v in &report.violations {
        problems.push(format!("factor {} at {} has thickness {} (slope {})", v.factor, v.alpha, v.thickness, v.slope));
    }
    let (scan, _) = parallel_grid_scan(&m, &cfg)?;
    if scan != approx {
        problems.push("parallel grid scan differs from the brute-force store".into());
    }
    let exact = exact_skyscraper(&clip(&m, &cfg))?;
    if exact.snapshot(approx.keys())?.iter().ne(approx.iter()) {
        problems.push("exact subdivisions differ from the brute-force store".into());
    }
    let cheng = approx_skyscraper(&m, &ScanConfig { engine: Engine::Cheng, ..cfg.clone() })?;
    if cheng != approx {
        problems.push("randomized engine differs from the brute-force store".into());
    }
    let clipped = clip(&m, &cfg);
    for alpha in approx.keys() {
        for beta in approx.keys().filter(|b| alpha.leq(b)) {
            let rank = clipped.structure_map(alpha, beta)?.rank();
            if approx.query(int(0), alpha, beta)? != rank {
                problems.push(format!("rank mismatch between {alpha} and {beta}"));
            }
        }
    }
    println!(
        "entries: {}, factors: {}, non-interval factors: {}",
        report.entries,
        report.factors,
        report.violations.len()
    );
    for p in &problems {
        println!("{p}");
    }
    if problems.is_empty() {
        println!("ok");
        Ok(())
    } else {
        Err(CliError::Violation(format!("{} problem(s) found", problems.len())))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Hn { at, grid, engine } => hn(cli, at, grid.as_deref(), engine),
        Command::Approx { epsilon, engine } => {
            let m = cli.module()?;
            let mut cfg = ScanConfig { epsilon: rat_arg("epsilon", epsilon)?, ..cli.config()? };
            apply_engine(&mut cfg, engine)?;
            let store = approx_skyscraper(&m, &cfg)?;
            cli.emit("store.csv", |w| write_store(&store, w))
        }
        Command::Exact => {
            let m = cli.module()?;
            let exact = exact_skyscraper(&clip(&m, &cli.config()?))?;
            let corners: Vec<Degree> =
                exact.summands.iter().flat_map(|s| s.trees.keys().map(|&(i, j)| s.grid.point(i, j))).collect();
            let store = exact.snapshot(&corners)?;
            cli.emit("store.csv", |w| write_store(&store, w))?;
            if cli.out.is_some() {
                cli.emit("faces.csv", |w| write_faces(&exact, w))?;
            }
            Ok(())
        }
        Command::Scan { epsilon } => {
            let m = cli.module()?;
            let cfg = ScanConfig { epsilon: rat_arg("epsilon", epsilon)?, ..cli.config()? };
            let (store, work) = parallel_grid_scan(&m, &cfg)?;
            log::info!("cells per summand: {:?}, peak cache: {:?}", work.per_summand, work.peak_cache);
            cli.emit("store.csv", |w| write_store(&store, w))
        }
        Command::Query { theta, from, to, epsilon } => {
            let theta = rat_arg("theta", theta)?;
            let (from, to) = (parse_point(from)?, parse_point(to)?);
            let path = cli.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
            let text = std::fs::read_to_string(path)?;
            let count = if text.trim_start().starts_with("skypres") {
                let m = cli.module()?;
                exact_skyscraper(&clip(&m, &cli.config()?))?.query(theta, &from, &to)?
            } else {
                let provenance = match epsilon {
                    Some(e) => Provenance::Lattice { epsilon: rat_arg("epsilon", e)? },
                    None => Provenance::Exact,
                };
                read_store(text.as_bytes(), provenance).map_err(|e| with_path(e, path))?.query(theta, &from, &to)?
            };
            println!("{count}");
            Ok(())
        }
        Command::Landscape { k, theta, resolution, anchor, step } => {
            let m = cli.module()?;
            let ks = k
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--k: `{s}` is not a count"))))
                .collect::<Result<Vec<_>, _>>()?;
            let params = LandscapeParams {
                ks,
                thetas: parse_rats(theta)?,
                resolution: *resolution,
                anchor: usage(anchor.parse::<Anchor>())?,
            };
            let cfg = ScanConfig { landscape: params, ..cli.config()? };
            cfg.validate()?;
            let step = rat_arg("step", step)?;
            if step <= int(0) {
                return Err(CliError::Usage("--step must be positive".into()));
            }
            let Some((lo, hi)) = support_box(&m, &cfg) else {
                return cli.emit("landscape.csv", |w| write_landscape(&[], w));
            };
            let exact = exact_skyscraper(&clip(&m, &cfg))?;
            let rows = landscapes(&exact, &cfg.landscape, &lo, &hi, step)?;
            cli.emit("landscape.csv", |w| write_landscape(&rows, w))
        }
        Command::Check { epsilon } => check(cli, epsilon),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
