use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dlv_symmetry::catalog;
use dlv_symmetry::expr::Dep;
use dlv_symmetry::harness::{self, CampaignConfig, Mode};
use dlv_symmetry::model::{parse_system, ManifoldKind};
use dlv_symmetry::reduction::{ExampleParams, Grid, Profile};
use dlv_symmetry::{Error, Result};

#[derive(Parser)]
#[command(name = "dlvsym", version, about = "Symmetry verification for diffusive Lotka-Volterra systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symbolic,
    Instance,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lie,
    FirstType,
    NonClassical,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Even,
    Odd,
    Growing,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Grid size `nt,nx`.
    #[arg(long, default_value = "101,101")]
    grid: String,
    /// Domain `t0,t1,x0,x1`.
    #[arg(long, default_value = "0,1,0,1")]
    domain: String,
    /// Parameter file (`key = value` lines).
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "even")]
    profile: ProfileArg,
}

#[derive(Subcommand)]
enum Command {
    /// Check catalog rows, or one operator against a system file.
    Verify {
        #[arg(long)]
        table: Vec<u32>,
        #[arg(long)]
        case: Option<u32>,
        #[arg(long)]
        seed: Vec<u64>,
        /// Defaults to `instance` when seeds are given, `symbolic` otherwise.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
        /// System file for a single-operator check.
        #[arg(long, requires = "operator")]
        system: Option<PathBuf>,
        /// Operator `xi0; xi1; eta1; eta2; eta3`.
        #[arg(long, requires = "system")]
        operator: Option<String>,
    },
    /// Print the determining equations of a system.
    Detgen {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lie")]
        kind: KindArg,
        #[arg(long, default_value = "u")]
        pivot: String,
        /// Set lambda2 = lambda3 = lambda1 first.
        #[arg(long)]
        equal_lambda: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Ansatz, reduced ODEs, exact solution and residuals for the
    /// competition example.
    Reduce {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Dump catalog rows.
    Catalog {
        #[arg(long)]
        table: Option<u32>,
        #[arg(long)]
        case: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Numeric residual of the exact solution on a grid.
    Residual {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    if let Some(p) = path {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        std::fs::write(p, s).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn numbers<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>> {
    let v: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("--{what}: expected {n} comma-separated numbers")))?;
    if v.len() != n {
        return Err(Error::Config(format!("--{what}: expected {n} comma-separated numbers")));
    }
    Ok(v)
}

fn grid_setup(g: &GridArgs) -> Result<(ExampleParams, Grid, Profile)> {
    let n: Vec<usize> = numbers(&g.grid, 2, "grid")?;
    let d: Vec<f64> = numbers(&g.domain, 4, "domain")?;
    if n.contains(&0) {
        return Err(Error::Config("--grid: sizes must be positive".into()));
    }
    let grid = Grid {
        t0: d[0],
        t1: d[1],
        x0: d[2],
        x1: d[3],
        nt: n[0],
        nx: n[1],
    };
    let params = match &g.params {
        Some(p) => ExampleParams::parse(&read(p)?)?,
        None => ExampleParams::default_numeric(),
    };
    let profile = match g.profile {
        ProfileArg::Even => Profile::Even,
        ProfileArg::Odd => Profile::Odd,
        ProfileArg::Growing => Profile::Growing,
    };
    Ok((params, grid, profile))
}

#[derive(Serialize)]
struct CatalogRow {
    table: u32,
    case: u32,
    reactions: [String; 3],
    restrictions: Vec<String>,
    operators: Vec<CatalogOperator>,
    variants: Vec<String>,
}

#[derive(Serialize)]
struct CatalogOperator {
    label: &'static str,
    coefficients: [&'static str; 5],
}

fn catalog_row(e: &catalog::CatalogEntry) -> CatalogRow {
    let vars = ["u", "v", "w"];
    let mut restrictions: Vec<String> = e.solves.iter().map(|s| s.label.to_string()).collect();
    restrictions.extend(e.conditions.iter().map(|c| c.label().to_string()));
    CatalogRow {
        table: e.table,
        case: e.case,
        reactions: std::array::from_fn(|k| format!("{}*({})", vars[k], e.reactions[k])),
        restrictions,
        operators: e
            .operators
            .iter()
            .map(|o| CatalogOperator {
                label: o.label,
                coefficients: o.coeffs,
            })
            .collect(),
        variants: e.variants.iter().map(|v| v.label.to_string()).collect(),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            table,
            case,
            seed,
            mode,
            json,
            timings,
            system,
            operator,
        } => {
            let report = if let (Some(sys), Some(op)) = (system, operator) {
                let s = parse_system(&read(&sys)?)?.rd()?;
                let q = harness::parse_operator(&op)?;
                harness::run_check(&s, &q, &op)?
            } else {
                let mode = match mode {
                    Some(ModeArg::Symbolic) => Mode::Symbolic,
                    Some(ModeArg::Instance) => Mode::Instance,
                    Some(ModeArg::Both) => Mode::Both,
                    None if seed.is_empty() => Mode::Symbolic,
                    None => Mode::Instance,
                };
                let config = CampaignConfig {
                    tables: table,
                    case,
                    seeds: seed,
                    mode,
                };
                harness::run_verify(&config, timings)?
            };
            print!("{}", report.to_text());
            write_json(&json, &report)?;
            Ok(if report.mismatches.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Detgen {
            file,
            kind,
            pivot,
            equal_lambda,
            json,
        } => {
            let mut sys = parse_system(&read(&file)?)?.rd()?;
            if equal_lambda {
                sys = harness::equalize_diffusivities(&sys)?;
            }
            let kind = match kind {
                KindArg::Lie => ManifoldKind::Lie,
                KindArg::NonClassical => ManifoldKind::NonClassical,
                KindArg::FirstType => {
                    let p = match pivot.as_str() {
                        "u" => Dep::U,
                        "v" => Dep::V,
                        "w" => Dep::W,
                        other => return Err(Error::Config(format!("--pivot: expected u, v or w, got `{other}`"))),
                    };
                    ManifoldKind::FirstType(p)
                }
            };
            let (_, report) = harness::run_detgen(&sys, kind)?;
            print!("{}", report.to_text());
            write_json(&json, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { grid, json } => {
            let (p, g, profile) = grid_setup(&grid)?;
            let report = harness::run_reduce(&p, &g, profile)?;
            print!("{}", report.to_text());
            write_json(&json, &report)?;
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Catalog { table, case, json } => {
            if case.is_some() && table.is_none() {
                return Err(Error::Config("--case needs --table".into()));
            }
            let entries = match (table, case) {
                (Some(t), Some(c)) => vec![catalog::entry(t, c)?],
                (Some(t), None) => catalog::table(t)?,
                _ => catalog::entries(),
            };
            for e in &entries {
                println!("{}", e.listing());
            }
            let rows: Vec<CatalogRow> = entries.iter().map(catalog_row).collect();
            write_json(&json, &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Residual { grid, json } => {
            let (p, g, profile) = grid_setup(&grid)?;
            let r = harness::run_residual(&p, &g, profile)?;
            for (k, x) in r.iter().enumerate() {
                println!("equation {}: max |residual| = {x:e}", k + 1);
            }
            #[derive(Serialize)]
            struct Out {
                grid: Grid,
                max_residual: [f64; 3],
                tolerance: f64,
            }
            write_json(
                &json,
                &Out {
                    grid: g,
                    max_residual: r,
                    tolerance: harness::NUMERIC_TOLERANCE,
                },
            )?;
            let worst = r.iter().copied().fold(0.0, f64::max);
            Ok(if worst <= harness::NUMERIC_TOLERANCE { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
