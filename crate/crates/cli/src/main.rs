mod config;
mod failure;
mod figure;
mod methods;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bhkernel::kernels::{build_bank, Case};
use bhkernel::selfcheck::SelfCheck;
use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, Function, Grid, Method, RunConfig};
use failure::Failure;
use methods::Evaluator;
use table::Table;

const DEFAULT_DIGITS: u32 = 20;

/// Agreement threshold reported by `precision-study`.
const STUDY_THRESHOLD: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "bhkernel",
    version,
    about = "Brezin-Hikami kernels, densities and correlation functions"
)]
struct Cli {
    /// Significant digits of working precision and of the printed values.
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// CSV output path; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value file with defaults; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    step: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity by one or more methods on a grid.
    Eval {
        #[arg(long)]
        case: Option<Case>,
        #[arg(long)]
        function: Option<Function>,
        /// Comma-separated: exact, quadrature, mellin-barnes,
        /// asymptotic-large, asymptotic-small.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        /// Single abscissa, instead of a grid.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["xmin", "xmax", "step"])]
        x: Option<f64>,
        /// Second kernel argument.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Write the curve data of one figure.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=9))]
        id: u8,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Compare capped-precision evaluations of K̂(x, y0) with the adaptive reference.
    PrecisionStudy {
        #[arg(long, allow_hyphen_values = true)]
        y0: Option<f64>,
        /// Comma-separated capped precisions in digits.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u32>>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the invariant suite.
    Selfcheck,
}

const GRID_KEYS: [&str; 3] = ["xmin", "xmax", "step"];

fn resolve_grid(args: &GridArgs, file: &ConfigFile, default: Grid) -> Result<Grid, Failure> {
    Ok(Grid {
        xmin: args.xmin.or(file.get("xmin")?).unwrap_or(default.xmin),
        xmax: args.xmax.or(file.get("xmax")?).unwrap_or(default.xmax),
        step: args.step.or(file.get("step")?).unwrap_or(default.step),
    })
}

fn resolve_digits(cli: &Cli, file: &ConfigFile) -> Result<u32, Failure> {
    let d = cli.digits.or(file.get("digits")?).unwrap_or(DEFAULT_DIGITS);
    if d == 0 {
        return Err(Failure::Usage("digits must be positive".into()));
    }
    Ok(d)
}

fn resolve_out(cli: &Cli, file: &ConfigFile) -> Result<Option<PathBuf>, Failure> {
    Ok(cli.out.clone().or(file.get("out")?))
}

fn allowed_keys(extra: &[&'static str]) -> Vec<&'static str> {
    let mut k = vec!["digits", "out"];
    k.extend(GRID_KEYS);
    k.extend(extra);
    k
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Eval {
            case,
            function,
            methods,
            x,
            y,
            grid,
        } => {
            file.check_keys(&allowed_keys(&["case", "function", "methods", "x", "y"]))?;
            let x = x.or(if grid.xmin.is_none() { file.get("x")? } else { None });
            let grid = match x {
                Some(x) => Grid {
                    xmin: x,
                    xmax: x,
                    step: 1.0,
                },
                None => {
                    let xmin = grid.xmin.or(file.get("xmin")?).ok_or_else(|| {
                        Failure::Usage("eval needs --x or a grid (--xmin, --xmax, --step)".into())
                    })?;
                    resolve_grid(
                        grid,
                        &file,
                        Grid {
                            xmin,
                            xmax: xmin,
                            step: 1.0,
                        },
                    )?
                }
            };
            let cfg = RunConfig {
                case: case.or(file.get("case")?).unwrap_or(Case::Quartic),
                function: function.or(file.get("function")?).unwrap_or(Function::Phi),
                grid,
                digits: resolve_digits(cli, &file)?,
                methods: match methods {
                    Some(m) => m.clone(),
                    None => file.get_list("methods")?.unwrap_or_else(|| vec![Method::Exact]),
                },
                y: y.or(file.get("y")?),
            };
            cfg.validate()?;
            cmd_eval(&cfg)?.emit(resolve_out(cli, &file)?.as_deref(), cfg.digits)
        }
        Command::Figure { id, grid } => {
            file.check_keys(&allowed_keys(&[]))?;
            let digits = resolve_digits(cli, &file)?;
            let grid = resolve_grid(grid, &file, figure::default_grid(*id))?;
            eprintln!("figure {id}: {} points at {digits} digits", grid.points().len());
            figure::figure(*id, &grid, digits)?.emit(resolve_out(cli, &file)?.as_deref(), digits)
        }
        Command::PrecisionStudy { y0, p, grid } => {
            file.check_keys(&allowed_keys(&["y0", "p"]))?;
            let digits = resolve_digits(cli, &file)?;
            let grid = resolve_grid(grid, &file, figure::default_grid(8))?;
            grid.validate()?;
            let y0 = y0.or(file.get("y0")?).unwrap_or(1.0 / 6.0);
            let p = match p {
                Some(p) => p.clone(),
                None => file.get_list("p")?.unwrap_or_else(|| figure::FIG89_P.to_vec()),
            };
            let bank = build_bank(Case::Quartic);
            let t = figure::precision_table(&bank, y0, &p, grid.points(), digits)?;
            report_agreement(&t, &grid, &p);
            t.emit(resolve_out(cli, &file)?.as_deref(), digits)
        }
        Command::Selfcheck => {
            file.check_keys(&allowed_keys(&[]))?;
            cmd_selfcheck(&SelfCheck::new(), &mut std::io::stdout().lock())
        }
    }
}

fn cmd_eval(cfg: &RunConfig) -> Result<Table, Failure> {
    let bank = build_bank(cfg.case);
    let ev = Evaluator::new(&bank, cfg.digits);
    let q = config::quantity(cfg.case, cfg.function);
    let cols = cfg.methods.iter().map(|m| format!("{}_{q}", m.name())).collect();
    Table::compute(cols, cfg.grid.points(), |x| {
        cfg.methods
            .iter()
            .map(|&m| ev.eval(m, cfg.function, x, cfg.y))
            .collect()
    })
}

/// Logs, per capped precision, the extent of agreement with the reference.
fn report_agreement(t: &Table, grid: &Grid, p: &[u32]) {
    let xs = grid.points();
    for (i, p) in p.iter().enumerate() {
        let mut extent = None;
        for (x, row) in xs.iter().zip(t.rows()) {
            if row[i + 1].err > STUDY_THRESHOLD {
                break;
            }
            extent = Some(*x);
        }
        match extent {
            Some(e) => eprintln!("p = {p}: within {STUDY_THRESHOLD:e} of the reference up to x = {e}"),
            None => eprintln!(
                "p = {p}: already off by more than {STUDY_THRESHOLD:e} at x = {}",
                grid.xmin
            ),
        }
    }
}

fn cmd_selfcheck(check: &SelfCheck, out: &mut impl Write) -> Result<(), Failure> {
    let mut io_err = None;
    let results = check.run_with(|r| {
        if let Err(e) = writeln!(out, "{r}") {
            io_err.get_or_insert(e);
        }
    });
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "failed invariants: {}",
            failed.join(", ")
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
