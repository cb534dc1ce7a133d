//! `fano` — calculators for divergences, solved lower bounds, the
//! constant tables, the application bounds, and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input validation,
//! 3 precondition violation (degenerate averaged alternative mass).

use clap::{Args, Parser, Subcommand, ValueEnum};
use fano_core::applications::{
    cramer_rate, mc_regret_experiment, posterior_constant, posterior_dd_bound, psi_gaussian,
    sparse_regret_bound, Regime, Strategy,
};
use fano_core::birge::comparison_table;
use fano_core::divergences::{divergence_finite, FiniteDist, Generator};
use fano_core::fano::{
    fano_chi2, fano_hellinger, fano_kl, fano_kl_sqrt, haroutunian_q_lower, reduce, FamilyEntry,
    FanoError, FanoReport, KlVariant, ReducedPair,
};
use fano_core::verify::{run_suite, Budget};
use fano_core::ExtReal;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fano", version, about)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Print numbers at full precision instead of 6 digits
    #[arg(long, global = true)]
    precise: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Divergence between two finite distributions
    Div(DivArgs),
    /// Solved Fano-type bounds for a reduced family
    Bounds(BoundsArgs),
    /// Comparison table of the constant sequences
    Birge(BirgeArgs),
    /// Application-level bounds
    Apps(AppsArgs),
    /// Run the inequality verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DivArgs {
    /// Generator: kl, chi2, or hellinger
    #[arg(long = "f", value_enum)]
    generator: GeneratorArg,
    /// Comma-separated weights of P
    #[arg(long)]
    p: String,
    /// Comma-separated weights of Q
    #[arg(long)]
    q: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorArg {
    Kl,
    Chi2,
    Hellinger,
}

impl From<GeneratorArg> for Generator {
    fn from(g: GeneratorArg) -> Generator {
        match g {
            GeneratorArg::Kl => Generator::Kl,
            GeneratorArg::Chi2 => Generator::Chi2,
            GeneratorArg::Hellinger => Generator::Hellinger,
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    /// Averaged statistic under the hypotheses (optional, reported back)
    #[arg(long)]
    p_bar: Option<f64>,
    /// Averaged statistic under the alternatives
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    q_bar: Option<f64>,
    /// Averaged divergence (accepts `inf`)
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    d_bar: Option<String>,
    /// Family file: one `weight,p_exp,q_exp,div` record per line
    #[arg(long)]
    family: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct BirgeArgs {
    /// Comma-separated list of hypothesis counts (each >= 2)
    #[arg(long)]
    n: String,
}

#[derive(Args)]
struct AppsArgs {
    #[command(subcommand)]
    which: AppsCommand,
}

#[derive(Subcommand)]
enum AppsCommand {
    /// Posterior-concentration constant and minimax radius
    Posterior {
        /// Ambient dimension
        #[arg(long)]
        d: u64,
        /// Sample size (with --sigma, also reports the radius)
        #[arg(long)]
        n: Option<u64>,
        /// Observation standard deviation
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Sparse-loss regret floor, optionally with a Monte Carlo run
    Regret {
        /// Number of arms N
        #[arg(long = "N")]
        n_arms: u64,
        /// Sparsity s
        #[arg(long = "s")]
        sparsity: u64,
        /// Horizon T
        #[arg(long = "T")]
        horizon: u64,
        /// Run this many Monte Carlo trials per environment
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hedge)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact binomial large-deviation rate against its limit
    Cramer {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        n: u64,
    },
    /// Distribution-dependent posterior floor
    Dd {
        /// KL modulus per observation (accepts `inf`); or use --epsilon/--sigma
        #[arg(long, required_unless_present_all = ["epsilon", "sigma"])]
        psi: Option<String>,
        /// Loss radius (Gaussian closed form, with --sigma)
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Uniform,
    Hedge,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BudgetArg::Quick)]
    budget: BudgetArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum BudgetArg {
    Quick,
    Full,
}

// ---------------------------------------------------------------------------
// output rendering

#[derive(Clone)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

fn fmt_num(x: f64, precise: bool) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if precise {
        return format!("{x}");
    }
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e9) {
        format!("{x:.5e}")
    } else {
        format!("{x:.6}")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl Table {
    fn render(&self, format: Format, precise: bool) -> String {
        let cell_str = |c: &Cell| match c {
            Cell::Num(x) => fmt_num(*x, precise),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Bool(b) => b.to_string(),
        };
        let mut out = String::new();
        match format {
            Format::Plain => {
                if self.rows.len() == 1 && self.columns.len() == 1 {
                    out.push_str(&cell_str(&self.rows[0][0]));
                    out.push('\n');
                } else {
                    for row in &self.rows {
                        let line: Vec<String> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| format!("{c}={}", cell_str(v)))
                            .collect();
                        out.push_str(&line.join(" "));
                        out.push('\n');
                    }
                }
            }
            Format::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(|v| csv_quote(&cell_str(v))).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
            }
            Format::JsonLines => {
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| {
                            let value = match v {
                                Cell::Num(x) if x.is_finite() => fmt_num(*x, precise),
                                Cell::Num(x) => json_quote(&fmt_num(*x, precise)),
                                Cell::Int(i) => i.to_string(),
                                Cell::Bool(b) => b.to_string(),
                                Cell::Text(t) => json_quote(t),
                            };
                            format!("{}:{}", json_quote(c), value)
                        })
                        .collect();
                    out.push('{');
                    out.push_str(&fields.join(","));
                    out.push_str("}\n");
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// command implementations

enum CliError {
    /// exit 2
    Validation(String),
    /// exit 3
    Precondition(String),
}

impl CliError {
    fn validation(e: impl std::fmt::Display) -> CliError {
        CliError::Validation(e.to_string())
    }
}

fn parse_weights(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("bad weight {t:?}: {e}")))
        })
        .collect()
}

fn parse_ext(s: &str) -> Result<ExtReal, CliError> {
    let t = s.trim();
    if t == "inf" {
        return Ok(ExtReal::Inf);
    }
    let x: f64 = t
        .parse()
        .map_err(|e| CliError::Validation(format!("bad value {t:?}: {e}")))?;
    if x.is_nan() || x < 0.0 {
        return Err(CliError::Validation(format!(
            "divergence must be non-negative, got {t}"
        )));
    }
    Ok(ExtReal::from_f64(x))
}

fn cmd_div(args: &DivArgs) -> Result<Table, CliError> {
    let p = FiniteDist::new(parse_weights(&args.p)?).map_err(CliError::validation)?;
    let q = FiniteDist::new(parse_weights(&args.q)?).map_err(CliError::validation)?;
    let d = divergence_finite(args.generator.into(), &p, &q).map_err(CliError::validation)?;
    Ok(Table {
        columns: vec!["divergence"],
        rows: vec![vec![Cell::Num(d.to_f64())]],
    })
}

fn parse_family_file(path: &std::path::Path) -> Result<Vec<FamilyEntry>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::Validation(format!(
                "line {}: expected `weight,p_exp,q_exp,div`, got {line:?}",
                lineno + 1
            )));
        }
        let num = |s: &str| -> Result<f64, CliError> {
            s.trim()
                .parse()
                .map_err(|e| CliError::Validation(format!("line {}: {e}", lineno + 1)))
        };
        entries.push(FamilyEntry {
            weight: num(fields[0])?,
            p_exp: num(fields[1])?,
            q_exp: num(fields[2])?,
            div: parse_ext(fields[3])?,
        });
    }
    Ok(entries)
}

fn map_fano_err(e: FanoError) -> CliError {
    match e {
        FanoError::DegenerateQBar(q) => CliError::Precondition(format!(
            "q_bar = {q} violates the requirement 0 < q_bar < 1"
        )),
        other => CliError::validation(other),
    }
}

fn cmd_bounds(args: &BoundsArgs) -> Result<Table, CliError> {
    let reduced = if let Some(path) = &args.family {
        reduce(&parse_family_file(path)?).map_err(map_fano_err)?
    } else {
        let q_bar = args.q_bar.expect("required by clap");
        let d_bar = parse_ext(args.d_bar.as_ref().expect("required by clap"))?;
        if !(0.0..=1.0).contains(&q_bar) {
            return Err(CliError::Validation(format!(
                "q_bar must lie in [0,1], got {q_bar}"
            )));
        }
        ReducedPair {
            p_bar: args.p_bar.unwrap_or(0.0).clamp(0.0, 1.0),
            q_bar,
            d_bar,
        }
    };

    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut push = |name: &str, r: FanoReport| {
        rows.push(vec![
            Cell::Text(name.to_string()),
            Cell::Num(r.value),
            Cell::Bool(r.vacuous),
        ]);
    };
    push("classic", fano_kl(&reduced, KlVariant::Classic).map_err(map_fano_err)?);
    push("refined", fano_kl(&reduced, KlVariant::Refined).map_err(map_fano_err)?);
    push("affine", fano_kl(&reduced, KlVariant::Affine).map_err(map_fano_err)?);
    push("kl_sqrt", fano_kl_sqrt(&reduced, false).map_err(map_fano_err)?);
    push("kl_sqrt_max", fano_kl_sqrt(&reduced, true).map_err(map_fano_err)?);
    push("chi2", fano_chi2(&reduced).map_err(map_fano_err)?);
    if reduced.d_bar <= ExtReal::finite(2.0) {
        push("hellinger", fano_hellinger(&reduced).map_err(map_fano_err)?);
    }
    if let Some(p_bar) = args.p_bar {
        rows.push(vec![
            Cell::Text("haroutunian_q_lower".to_string()),
            Cell::Num(haroutunian_q_lower(p_bar, reduced.d_bar)),
            Cell::Bool(false),
        ]);
    }
    Ok(Table {
        columns: vec!["family", "value", "vacuous"],
        rows,
    })
}

fn cmd_birge(args: &BirgeArgs) -> Result<Table, CliError> {
    let ns: Vec<u64> = args
        .n
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Validation(format!("bad count {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let rows = comparison_table(&ns)
        .map_err(CliError::validation)?
        .into_iter()
        .map(|r| {
            vec![
                Cell::Int(r.n_hypotheses),
                Cell::Num(r.c_n),
                Cell::Num(r.d_n),
                Cell::Num(r.massart),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec!["n", "c_n", "d_n", "massart"],
        rows,
    })
}

fn cmd_apps(args: &AppsArgs) -> Result<Table, CliError> {
    match &args.which {
        AppsCommand::Posterior { d, n, sigma } => {
            let (c_d, rho_star) = posterior_constant(*d).map_err(CliError::validation)?;
            let mut columns = vec!["c_d", "rho_star"];
            let mut row = vec![Cell::Num(c_d), Cell::Num(rho_star)];
            if let (Some(n), Some(sigma)) = (n, sigma) {
                if *n < 1 || *sigma <= 0.0 {
                    return Err(CliError::Validation(
                        "need n >= 1 and sigma > 0".to_string(),
                    ));
                }
                columns.push("epsilon_n");
                row.push(Cell::Num(
                    sigma / 8.0 * (*d as f64 / *n as f64).sqrt(),
                ));
            }
            Ok(Table {
                columns,
                rows: vec![row],
            })
        }
        AppsCommand::Regret {
            n_arms,
            sparsity,
            horizon,
            mc_trials,
            strategy,
            seed,
        } => {
            if *n_arms < 2 || *sparsity > *n_arms || *horizon < 1 {
                return Err(CliError::Validation(format!(
                    "need N >= 2, s <= N, T >= 1, got N={n_arms}, s={sparsity}, T={horizon}"
                )));
            }
            let r = sparse_regret_bound(*n_arms, *sparsity, *horizon);
            let regime = match r.regime {
                Regime::ZeroSparsity => "zero_sparsity",
                Regime::SmallHorizon => "small_horizon",
                Regime::LargeHorizon => "large_horizon",
            };
            let mut columns = vec!["bound", "epsilon_used", "regime"];
            let mut row = vec![
                Cell::Num(r.bound),
                Cell::Num(r.epsilon_used),
                Cell::Text(regime.to_string()),
            ];
            if let Some(trials) = mc_trials {
                let strat = match strategy {
                    StrategyArg::Uniform => Strategy::Uniform,
                    StrategyArg::Hedge => Strategy::hedge_tuned(*n_arms as usize, *horizon),
                };
                let mc = mc_regret_experiment(
                    *n_arms as usize,
                    *sparsity as usize,
                    *horizon,
                    r.epsilon_used,
                    strat,
                    *trials,
                    *seed,
                )
                .map_err(CliError::validation)?;
                columns.extend(["mc_regret", "mc_std_error"]);
                row.push(Cell::Num(mc.avg_mixture_regret));
                row.push(Cell::Num(mc.std_error));
            }
            Ok(Table {
                columns,
                rows: vec![row],
            })
        }
        AppsCommand::Cramer { theta, x, n } => {
            let r = cramer_rate(*theta, *x, *n).map_err(CliError::validation)?;
            Ok(Table {
                columns: vec!["empirical_rate", "limit_rate"],
                rows: vec![vec![Cell::Num(r.empirical_rate), Cell::Num(r.limit_rate)]],
            })
        }
        AppsCommand::Dd {
            psi,
            epsilon,
            sigma,
            n,
            c,
        } => {
            let psi = match (psi, epsilon, sigma) {
                (Some(p), _, _) => parse_ext(p)?,
                (None, Some(e), Some(s)) => psi_gaussian(*e, *s).map_err(CliError::validation)?,
                _ => {
                    return Err(CliError::Validation(
                        "give --psi, or both --epsilon and --sigma".to_string(),
                    ))
                }
            };
            let b = posterior_dd_bound(psi, *n, *c).map_err(CliError::validation)?;
            Ok(Table {
                columns: vec!["bound"],
                rows: vec![vec![Cell::Num(b)]],
            })
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(Table, bool), CliError> {
    let budget = match args.budget {
        BudgetArg::Quick => Budget::Quick,
        BudgetArg::Full => Budget::Full,
    };
    let reports = run_suite(args.seed, budget);
    let all_passed = reports.iter().all(|r| r.passed);
    let rows = reports
        .into_iter()
        .map(|r| {
            vec![
                Cell::Text(r.check_name),
                Cell::Int(r.cases_run),
                Cell::Num(r.max_violation),
                Cell::Bool(r.passed),
                Cell::Int(r.seed),
            ]
        })
        .collect();
    Ok((
        Table {
            columns: vec!["check_name", "cases_run", "max_violation", "passed", "seed"],
            rows,
        },
        all_passed,
    ))
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let table = match &cli.command {
        Command::Div(a) => cmd_div(a)?,
        Command::Bounds(a) => cmd_bounds(a)?,
        Command::Birge(a) => cmd_birge(a)?,
        Command::Apps(a) => cmd_apps(a)?,
        Command::Verify(a) => {
            let (table, all_passed) = cmd_verify(a)?;
            print!("{}", table.render(cli.format, cli.precise));
            return Ok(if all_passed { 0 } else { 1 });
        }
    };
    print!("{}", table.render(cli.format, cli.precise));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
