//! `solfree`: command-line front end for the solution-free set toolkit.
//!
//! Data goes to stdout, logs to stderr. Exit codes: 0 success,
//! 2 invalid input, 3 budget exhausted, 4 invariant violation.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use solfree::experiments::{
    rn_table_csv, run_bound_report, run_rn_table, run_ruzsa_sweep, ruzsa_sweep_csv, verify_table, TableOptions,
};
use solfree::model::{format_set_lines, parse_set_text};
use solfree::search::SearchOptions;
use solfree::sumset::{dilate_energy_survey, run_inequality_trials};
use solfree::{
    count_all_solutions, count_distinct_solutions, exact_max_solution_free, find_distinct_solution,
    fit_exponent, predicted_exponent, random_restarts, ruzsa_digit_set, solution_report, DilateSpec,
    DistinctMethod, Equation, Error, FitResult64, IntegerSet, RuzsaParams, SearchResult, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(name = "solfree", version, about = "Solution-free sets for symmetric linear equations")]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (tables only).
    #[arg(long, global = true)]
    csv: bool,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build explicit solution-free sets.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Count solutions over a set.
    #[command(subcommand)]
    Count(CountCmd),
    /// Verify properties of a set.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Largest solution-free subsets of [1, N].
    #[command(subcommand)]
    Search(SearchCmd),
    /// Check inequalities on concrete data.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Experiment tables.
    #[command(subcommand)]
    Table(TableCmd),
    /// Least-squares fit of ln(size) against ln(N).
    Fit(FitArgs),
    /// Exploratory data collection.
    #[command(subcommand)]
    Survey(SurveyCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Integers in [1, N] whose base-d²k digits are all below d.
    Ruzsa {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
        #[arg(long = "N")]
        n: u64,
        /// Also write the set, one integer per line, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SetArgs {
    /// Equation coefficients a₁,…,a_k.
    #[arg(long, allow_hyphen_values = true)]
    eq: String,
    /// Set file: one integer per line, or a JSON array.
    #[arg(long)]
    set: PathBuf,
    /// Domain bound; defaults to the largest element.
    #[arg(long = "N")]
    n: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enumerate,
    InclusionExclusion,
}

impl From<MethodArg> for DistinctMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Enumerate => DistinctMethod::Enumerate,
            MethodArg::InclusionExclusion => DistinctMethod::InclusionExclusion,
        }
    }
}

#[derive(Subcommand)]
enum CountCmd {
    /// E: ordered solutions over the set.
    Energy(SetArgs),
    /// E, distinct-valued count, and every coincidence count T_{i,j}.
    Solutions(SetArgs),
    /// Solutions in pairwise distinct integers.
    Distinct {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value = "inclusion-exclusion")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Whether the set has no solution in distinct integers.
    SolutionFree(SetArgs),
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Exact R(N) by branch and bound.
    Exact {
        #[arg(long, allow_hyphen_values = true)]
        eq: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Include wall-clock time in the output.
        #[arg(long)]
        timing: bool,
    },
    /// Best of seeded greedy restarts (a lower bound).
    Heuristic {
        #[arg(long, allow_hyphen_values = true)]
        eq: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Randomized checks of the triangle, Plünnecke and energy inequalities.
    Inequalities {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Energy lower and upper bounds for each set.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        eq: String,
        /// One or more set files.
        #[arg(long, num_args = 1.., required = true)]
        set: Vec<PathBuf>,
        #[arg(long = "N")]
        n: Option<u64>,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    /// R(N) for N = 1..=N_max.
    Rn {
        #[arg(long, allow_hyphen_values = true)]
        eq: String,
        #[arg(long = "N")]
        n: u64,
        /// Per-N budget for exact search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Greedy restarts per heuristic row.
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Digit-set sizes at N = (d²k)^t for t = 1..=t_max.
    Ruzsa {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 5)]
        t_max: u32,
        /// Search steps per set when checking it is solution-free.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

#[derive(Args)]
struct FitArgs {
    /// CSV with columns `N` and `R` (or `size`), e.g. output of `table rn` or `table ruzsa`.
    #[arg(long, conflicts_with = "points")]
    input: Option<PathBuf>,
    /// Inline points `N:size,N:size,...`.
    #[arg(long)]
    points: Option<String>,
    /// Ignore rows with N below this value.
    #[arg(long, default_value_t = 2)]
    n_min: u64,
}

#[derive(Subcommand)]
enum SurveyCmd {
    /// Normalized energies of two dilate systems over one set.
    Dilates {
        #[arg(long)]
        set: PathBuf,
        /// Dilation factors t₁,…,t_k.
        #[arg(long)]
        t: String,
        /// Dilation factors s₁,…,s_l.
        #[arg(long)]
        s: String,
    },
}

/// Rounds to 12 significant digits so the shortest round-trip form
/// printed by serde_json has at most 12.
fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends output quietly.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn parse_eq(text: &str) -> Result<Equation> {
    Ok(text.parse::<Equation>()?)
}

fn load_set(path: &Path, n: Option<u64>) -> Result<IntegerSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let values = parse_set_text(&text)?;
    let bound = n.unwrap_or_else(|| values.iter().copied().max().unwrap_or(1).max(1) as u64);
    Ok(IntegerSet::new(values, bound)?)
}

fn search_json(n: u64, eq: &Equation, r: &SearchResult, timing: bool) -> Value {
    let mut v = json!({
        "N": n,
        "eq": eq.to_string(),
        "size": r.size,
        "exact": r.exact,
        "witness": r.witness.elements(),
        "nodes_explored": r.nodes_explored,
    });
    if timing {
        v["time_ms"] = json!(r.time_ms);
    }
    v
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct(ConstructCmd::Ruzsa { d, k, n, out }) => {
            let params = RuzsaParams::new(d, k, n)?;
            let set = ruzsa_digit_set(&params);
            let header = json!({
                "d": d,
                "k": k,
                "base": params.base,
                "N": n,
                "size": set.len(),
                "predicted_exponent": sig12(predicted_exponent(d, k)),
            });
            if let Some(path) = out {
                fs::write(&path, format_set_lines(set.as_set()))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if cli.json {
                let mut v = header;
                v["elements"] = json!(set.elements());
                print_json(&v)?;
            } else {
                emit(&(serde_json::to_string(&header)? + "\n" + &format_set_lines(set.as_set())))?;
            }
        }
        Command::Count(cmd) => match cmd {
            CountCmd::Energy(args) => {
                let eq = parse_eq(&args.eq)?;
                let set = load_set(&args.set, args.n)?;
                let e = count_all_solutions(&set, &eq)?;
                print_json(&json!({ "eq": eq.to_string(), "M": set.len(), "N": set.domain_bound(), "E": e }))?;
            }
            CountCmd::Solutions(args) => {
                let eq = parse_eq(&args.eq)?;
                let set = load_set(&args.set, args.n)?;
                let report = solution_report(&set, &eq)?;
                if report.total < report.distinct {
                    return Err(Error::Invariant("E < distinct".into()).into());
                }
                print_json(&report)?;
            }
            CountCmd::Distinct { set: args, method, budget } => {
                let eq = parse_eq(&args.eq)?;
                let set = load_set(&args.set, args.n)?;
                let c = count_distinct_solutions(&set, &eq, method.into(), budget)?;
                print_json(&json!({ "eq": eq.to_string(), "M": set.len(), "distinct": c }))?;
            }
        },
        Command::Verify(VerifyCmd::SolutionFree(args)) => {
            let eq = parse_eq(&args.eq)?;
            let set = load_set(&args.set, args.n)?;
            let witness = find_distinct_solution(&set, &eq, u64::MAX)?;
            print_json(&json!({
                "eq": eq.to_string(),
                "M": set.len(),
                "solution_free": witness.is_none(),
                "witness": witness.map(|w| w.values().to_vec()),
            }))?;
        }
        Command::Search(cmd) => match cmd {
            SearchCmd::Exact { eq, n, budget, timing } => {
                let eq = parse_eq(&eq)?;
                let opts = SearchOptions {
                    budget,
                    ..SearchOptions::default()
                };
                let r = exact_max_solution_free(n, &eq, &opts)?;
                info!("exact search: {} nodes in {} ms", r.nodes_explored, r.time_ms);
                print_json(&search_json(n, &eq, &r, timing))?;
            }
            SearchCmd::Heuristic { eq, n, trials, seed, timing } => {
                let eq = parse_eq(&eq)?;
                let r = random_restarts(n, &eq, trials, seed)?;
                info!("greedy restarts: {} ms", r.time_ms);
                print_json(&search_json(n, &eq, &r, timing))?;
            }
        },
        Command::Check(cmd) => match cmd {
            CheckCmd::Inequalities { trials, seed } => {
                let summary = run_inequality_trials(trials, seed)?;
                print_json(&summary)?;
                if !summary.all_hold() {
                    return Err(Error::Invariant(format!(
                        "{} inequality check(s) failed",
                        summary.failures.len()
                    ))
                    .into());
                }
            }
            CheckCmd::Bounds { eq, set, n } => {
                let eq = parse_eq(&eq)?;
                let sets = set.iter().map(|p| load_set(p, n)).collect::<Result<Vec<_>>>()?;
                let reports = run_bound_report(&eq, &sets)?;
                let rows: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        let mut v = serde_json::to_value(r).expect("report serializes");
                        v["lower"] = json!(sig12(r.lower::<f64>()));
                        v
                    })
                    .collect();
                print_json(&rows)?;
            }
        },
        Command::Table(TableCmd::Rn { eq, n, budget, trials, seed }) => {
            let eq = parse_eq(&eq)?;
            let rows = run_rn_table(&eq, n, &TableOptions { budget, trials, seed })?;
            verify_table(&eq, &rows)?;
            if cli.json {
                print_json(&rows)?;
            } else {
                emit(&rn_table_csv(&rows)?)?;
            }
        }
        Command::Table(TableCmd::Ruzsa { d, k, t_max, budget }) => {
            let rows = run_ruzsa_sweep(d, k, t_max, budget)?;
            if cli.json {
                print_json(&rows)?;
            } else {
                emit(&ruzsa_sweep_csv(&rows))?;
            }
        }
        Command::Fit(args) => {
            let mut points = match (&args.input, &args.points) {
                (Some(path), _) => read_points(path)?,
                (None, Some(text)) => parse_points(text)?,
                (None, None) => anyhow::bail!(Error::Validation("give --input or --points".into())),
            };
            points.retain(|&(n, _)| n >= args.n_min);
            let fit: FitResult64 = fit_exponent(&points)?;
            print_json(&json!({
                "slope": sig12(fit.slope),
                "intercept": sig12(fit.intercept),
                "r_squared": sig12(fit.r_squared),
                "points": fit.points,
            }))?;
        }
        Command::Survey(SurveyCmd::Dilates { set, t, s }) => {
            let a = load_set(&set, None)?;
            let t = DilateSpec::new(parse_factors(&t)?)?;
            let s = DilateSpec::new(parse_factors(&s)?)?;
            print_json(&dilate_energy_survey(a.as_set(), &t, &s)?)?;
        }
    }
    Ok(())
}

fn parse_factors(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad factor {t:?}: {e}")).into())
        })
        .collect()
}

fn parse_points(text: &str) -> Result<Vec<(u64, u64)>> {
    text.split(',')
        .map(|pair| {
            let (n, s) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad point {pair:?}, expected N:size")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad point {pair:?}: {e}")))
            };
            Ok((parse(n)?, parse(s)?))
        })
        .collect()
}

fn read_points(path: &Path) -> Result<Vec<(u64, u64)>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = |names: &[&str]| headers.iter().position(|h| names.contains(&h));
    let (Some(ni), Some(si)) = (col(&["N"]), col(&["R", "size"])) else {
        anyhow::bail!(Error::Parse("CSV needs columns N and R (or size)".into()));
    };
    let mut points = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let field = |i: usize| {
            rec[i]
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad CSV value {:?}: {e}", &rec[i])))
        };
        points.push((field(ni)?, field(si)?));
    }
    Ok(points)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget { .. }) => 3,
        Some(Error::Invariant(_)) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
