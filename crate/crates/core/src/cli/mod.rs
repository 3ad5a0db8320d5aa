//! Command-line front end: argument parsing, dispatch to the library and
//! JSON result output. The `fairkit` binary is a thin wrapper around
//! [`main_from`].
//!
//! Exit codes: 0 success, 1 input error, 2 infeasible, 3 budget exceeded.

pub mod io;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::approx::{constrained_assign, constrained_cluster, ClusterConfig, Constraint, Solution};
use crate::coreset::{build_coreset, CoresetConfig, Regime};
use crate::error::{Error, Result};
use crate::model::{
    constraint_matrix_of, parse_ratio, Assignment, Center, Dataset, FairnessSpec, Metric,
    Objective, WeightedPoint,
};
use crate::oracle::{exact_fair_means, exact_variant_optimum, OracleBudget};
use crate::streaming::{StreamConfig, StreamState};

use io::InputSpec;

#[derive(Parser, Debug, Clone)]
#[command(name = "fairkit", version, about = "Fair and constrained k-median / k-means clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build a coreset of the input and print its weighted points.
    Coreset(Common),
    /// Assign all points to fixed centers under the constraint.
    Assign(AssignArgs),
    /// Choose centers and a constrained assignment.
    Cluster(Common),
    /// Feed points one at a time through the streaming coreset.
    Stream(StreamArgs),
    /// Compress a Euclidean instance, optionally after an SVD sketch.
    Reduce(ReduceArgs),
    /// Exact optimum by enumeration on tiny instances.
    Oracle(OracleArgs),
    /// Repeat `cluster` over consecutive seeds and tabulate cost and time.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Points CSV, one row of coordinates per point (`-` for stdin).
    #[arg(long, conflicts_with = "distance_matrix")]
    pub points: Option<PathBuf>,
    /// n × n distance matrix CSV.
    #[arg(long)]
    pub distance_matrix: Option<PathBuf>,
    /// One line per point with `;`-separated group ids.
    #[arg(long, conflicts_with_all = ["membership", "inline_groups"])]
    pub groups: Option<PathBuf>,
    /// `point_id,group_id` CSV; a point may be listed in several groups.
    #[arg(long, conflicts_with = "inline_groups")]
    pub membership: Option<PathBuf>,
    /// The last column of the points file holds the group ids.
    #[arg(long)]
    pub inline_groups: bool,
    /// Reject distance matrices that break the triangle inequality.
    #[arg(long)]
    pub check_triangle: bool,
}

impl InputArgs {
    fn spec(&self) -> InputSpec {
        InputSpec {
            points: self.points.clone(),
            distance_matrix: self.distance_matrix.clone(),
            groups: self.groups.clone(),
            membership: self.membership.clone(),
            inline_groups: self.inline_groups,
            check_triangle: self.check_triangle,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Metric,
    Euclidean,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Metric => Regime::Metric,
            RegimeArg::Euclidean => Regime::Euclidean,
        }
    }
}

/// `fair`, `lower:L`, `cap:U`, `div:l` or `chromatic`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintArg {
    Fair,
    Lower(u64),
    Cap(u64),
    Div(usize),
    Chromatic,
}

impl FromStr for ConstraintArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad constraint `{s}`"));
        match s.split_once(':') {
            None if s == "fair" => Ok(ConstraintArg::Fair),
            None if s == "chromatic" => Ok(ConstraintArg::Chromatic),
            Some(("lower", v)) => v.parse().map(ConstraintArg::Lower).map_err(|_| bad()),
            Some(("cap", v)) => v.parse().map(ConstraintArg::Cap).map_err(|_| bad()),
            Some(("div", v)) => match v.parse() {
                Ok(l) if l >= 1 => Ok(ConstraintArg::Div(l)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ConstraintArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintArg::Fair => write!(f, "fair"),
            ConstraintArg::Lower(l) => write!(f, "lower:{l}"),
            ConstraintArg::Cap(u) => write!(f, "cap:{u}"),
            ConstraintArg::Div(l) => write!(f, "div:{l}"),
            ConstraintArg::Chromatic => write!(f, "chromatic"),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of clusters.
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value = "median")]
    pub objective: Objective,
    /// Upper bounds on each group's share of a cluster (`0.5` or `1/2`).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<String>,
    /// Lower bounds on each group's share of a cluster.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<String>,
    #[arg(long, default_value = "fair")]
    pub constraint: ConstraintArg,
    /// RNG seed (0 when omitted, except in bench mode where it is required).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Distinct center sets scored before switching to sampling.
    #[arg(long, default_value_t = 1_000_000)]
    pub guess_budget: u64,
    /// Size k-means coresets with ε / (k ln n).
    #[arg(long)]
    pub strict_kmeans_rescale: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Result file, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub output: PathBuf,
    /// Sample-size regime and pipeline (default: euclidean for points,
    /// metric for distance matrices).
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Fixed per-cell coreset sample size.
    #[arg(long)]
    pub sample_size: Option<usize>,
    /// Coreset failure probability.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Record wall-clock time in the diagnostics.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct AssignArgs {
    #[command(flatten)]
    pub common: Common,
    /// Result JSON with a `centers` field, or CSV of coordinates / point ids.
    #[arg(long)]
    pub centers: PathBuf,
    /// Read CSV centers as point ids even for coordinate instances.
    #[arg(long)]
    pub center_ids: bool,
}

#[derive(Args, Debug, Clone)]
pub struct StreamArgs {
    #[command(flatten)]
    pub common: Common,
    /// Points per bucket instead of the derived size.
    #[arg(long)]
    pub bucket_size: Option<usize>,
    /// Group sets allowed in the stream, e.g. `0|1|0;1`. Defaults to the
    /// sets present in the input.
    #[arg(long)]
    pub universe: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Project onto the top singular vectors first (means only).
    #[arg(long)]
    pub sketch: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 8)]
    pub max_points: usize,
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
    #[arg(long, default_value_t = 16)]
    pub max_candidates: usize,
    /// Means with free centers in ℝ^d instead of centers from the input.
    #[arg(long)]
    pub continuous: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of consecutive seeds starting at `--seed`.
    #[arg(long, default_value_t = 5)]
    pub repeats: u64,
}

/// Fully resolved parameters, echoed in every result.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub points: Option<String>,
    pub distance_matrix: Option<String>,
    pub groups: Option<String>,
    pub membership: Option<String>,
    pub inline_groups: bool,
    pub n: usize,
    pub num_groups: usize,
    pub num_classes: usize,
    pub k: usize,
    pub epsilon: f64,
    pub objective: Objective,
    pub constraint: String,
    pub alpha: Option<Vec<String>>,
    pub beta: Option<Vec<String>>,
    pub seed: u64,
    pub regime: RegimeArg,
    pub guess_budget: u64,
    pub strict_kmeans_rescale: bool,
    pub sample_size: Option<usize>,
    pub delta: Option<f64>,
    pub threads: Option<usize>,
    pub output: String,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty", flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub guess_space_exhaustive: Option<bool>,
    pub coreset_size: Option<usize>,
    pub elapsed_ms: Option<u64>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub seed: u64,
    pub cost: Option<f64>,
    pub status: String,
    pub coreset_size: Option<usize>,
    pub elapsed_ms: u64,
}

/// Result document written by every command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub centers: Vec<Center>,
    /// `(point, center index, weight)` triples.
    pub assignment: Vec<(usize, usize, u64)>,
    pub cost: Option<f64>,
    /// Per-center masses of each class.
    pub constraint_matrix: Option<Vec<Vec<u64>>>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coreset: Option<Vec<WeightedPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<Vec<BenchRow>>,
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn json<T: Serialize>(v: T) -> serde_json::Value {
    serde_json::to_value(v).expect("plain data serializes")
}

struct Context {
    ds: Dataset,
    config: RunConfig,
    constraint: Constraint,
    cluster: ClusterConfig,
    regime: Regime,
    seed: u64,
}

fn fairness_spec(c: &Common, ds: &Dataset) -> Result<(FairnessSpec, Option<Vec<String>>, Option<Vec<String>>)> {
    let m = ds.num_groups();
    if c.alpha.is_empty() && c.beta.is_empty() {
        return Ok((FairnessSpec::unconstrained(m), None, None));
    }
    let parse = |xs: &[String], default: &str, what: &str| -> Result<Vec<_>> {
        if xs.is_empty() {
            return (0..m).map(|_| parse_ratio(default)).collect();
        }
        if xs.len() != m {
            return Err(Error::invalid(format!("{} {what} values for {m} groups", xs.len())));
        }
        xs.iter().map(|s| parse_ratio(s)).collect()
    };
    let alpha = parse(&c.alpha, "1", "alpha")?;
    let beta = parse(&c.beta, "0", "beta")?;
    let show = |v: &[num_rational::Ratio<i64>]| v.iter().map(|r| r.to_string()).collect();
    let (a, b) = (show(&alpha), show(&beta));
    Ok((FairnessSpec::new(alpha, beta)?, Some(a), Some(b)))
}

fn validate(c: &Common) -> Result<()> {
    if c.k == 0 {
        return Err(Error::invalid("--k must be at least 1"));
    }
    if !(c.epsilon > 0.0 && c.epsilon <= 1.0) {
        return Err(Error::invalid("--epsilon must lie in (0, 1]"));
    }
    if c.threads == Some(0) {
        return Err(Error::invalid("--threads must be at least 1"));
    }
    if let Some(d) = c.delta {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::invalid("--delta must lie in (0, 1)"));
        }
    }
    Ok(())
}

fn context(command: &'static str, c: &Common, ds: Dataset) -> Result<Context> {
    validate(c)?;
    let (spec, alpha, beta) = fairness_spec(c, &ds)?;
    let constraint = match c.constraint {
        ConstraintArg::Fair => Constraint::Fair(spec),
        ConstraintArg::Lower(l) => Constraint::LowerBound(l),
        ConstraintArg::Cap(u) => Constraint::Capacity(u),
        ConstraintArg::Div(l) => Constraint::Diversity(l),
        ConstraintArg::Chromatic => Constraint::Chromatic,
    };
    let regime = c.regime.unwrap_or(if ds.metric().is_euclidean() {
        RegimeArg::Euclidean
    } else {
        RegimeArg::Metric
    });
    if regime == RegimeArg::Euclidean && !ds.metric().is_euclidean() {
        return Err(Error::invalid("the euclidean regime needs a points file"));
    }
    let cluster = ClusterConfig {
        guess_budget: c.guess_budget,
        coreset: CoresetConfig {
            strict_kmeans_rescale: c.strict_kmeans_rescale,
            delta: c.delta,
            sample_size_override: c.sample_size,
            ..CoresetConfig::default()
        },
        ..ClusterConfig::default()
    };
    let seed = c.seed.unwrap_or(0);
    let config = RunConfig {
        command,
        points: path_str(&c.input.points),
        distance_matrix: path_str(&c.input.distance_matrix),
        groups: path_str(&c.input.groups),
        membership: path_str(&c.input.membership),
        inline_groups: c.input.inline_groups,
        n: ds.len(),
        num_groups: ds.num_groups(),
        num_classes: ds.num_classes(),
        k: c.k,
        epsilon: c.epsilon,
        objective: c.objective,
        constraint: c.constraint.to_string(),
        alpha,
        beta,
        seed,
        regime,
        guess_budget: c.guess_budget,
        strict_kmeans_rescale: c.strict_kmeans_rescale,
        sample_size: c.sample_size,
        delta: c.delta,
        threads: c.threads,
        output: c.output.display().to_string(),
        extra: serde_json::Map::new(),
    };
    Ok(Context {
        ds,
        config,
        constraint,
        cluster,
        regime: regime.into(),
        seed,
    })
}

fn report(ctx: &Context, asg: Option<&Assignment>, cost: Option<f64>) -> Report {
    Report {
        config: ctx.config.clone(),
        centers: asg.map_or_else(Vec::new, |a| a.centers.clone()),
        assignment: asg.map_or_else(Vec::new, |a| a.triples().collect()),
        cost,
        constraint_matrix: asg.map(|a| constraint_matrix_of(a, &ctx.ds).rows().to_vec()),
        diagnostics: Diagnostics::default(),
        coreset: None,
        bench: None,
    }
}

fn solution_report(ctx: &Context, sol: &Solution) -> Report {
    let mut r = report(ctx, Some(&sol.assignment), Some(sol.cost));
    let m = &sol.meta;
    r.diagnostics.guess_space_exhaustive = Some(m.exhaustive);
    r.diagnostics.coreset_size = Some(m.coreset_size);
    let extra = &mut r.diagnostics.extra;
    extra.insert("algorithm".into(), json(m.algorithm));
    extra.insert("guess_space".into(), json(m.guess_space));
    extra.insert("center_sets".into(), json(m.center_sets));
    extra.insert("grid_size".into(), json(m.grid_size));
    r
}

fn run_coreset(c: &Common) -> Result<Report> {
    let ctx = context("coreset", c, io::load_dataset(&c.input.spec())?)?;
    let cs = build_coreset(
        &ctx.ds,
        &ctx.ds.unit_weights(),
        c.k,
        c.epsilon,
        c.objective,
        ctx.regime,
        &ctx.cluster.coreset,
        ctx.seed,
    )?;
    let mut r = report(&ctx, None, None);
    r.diagnostics.coreset_size = Some(cs.set.len());
    r.diagnostics.extra.insert("sample_size".into(), json(cs.plan.s));
    r.diagnostics.extra.insert("log_term".into(), json(cs.plan.log_term));
    r.diagnostics.extra.insert("cells".into(), json(&cs.cells));
    r.coreset = Some(cs.set.items);
    Ok(r)
}

fn run_assign(a: &AssignArgs) -> Result<Report> {
    let c = &a.common;
    let ds = io::load_dataset(&c.input.spec())?;
    let centers = io::read_centers(&a.centers, &ds, a.center_ids)?;
    let mut ctx = context("assign", c, ds)?;
    ctx.config.extra.insert("centers".into(), json(a.centers.display().to_string()));
    if centers.len() != c.k {
        return Err(Error::invalid(format!("{} centers given for k = {}", centers.len(), c.k)));
    }
    let t = constrained_assign(&ctx.ds, &centers, &ctx.constraint, c.epsilon, c.objective, &ctx.cluster, ctx.seed)?;
    Ok(report(&ctx, Some(&t.assignment), Some(t.cost)))
}

fn run_cluster(c: &Common) -> Result<Report> {
    let ctx = context("cluster", c, io::load_dataset(&c.input.spec())?)?;
    let sol = constrained_cluster(&ctx.ds, c.k, c.epsilon, c.objective, &ctx.constraint, ctx.regime, &ctx.cluster, ctx.seed)?;
    Ok(solution_report(&ctx, &sol))
}

fn parse_universe(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split('|')
        .map(|g| {
            g.split(';')
                .map(|x| x.trim().parse().map_err(|_| Error::invalid(format!("bad group id `{x}` in universe"))))
                .collect()
        })
        .collect()
}

fn run_stream(a: &StreamArgs) -> Result<Report> {
    let c = &a.common;
    let ds = io::load_dataset(&c.input.spec())?;
    let Metric::Euclidean { dim, coords } = ds.metric() else {
        return Err(Error::invalid("streaming needs a points file"));
    };
    let mut ctx = context("stream", c, ds.clone())?;
    let universe = match &a.universe {
        Some(u) => parse_universe(u)?,
        None => ds.class_groups().to_vec(),
    };
    let num_groups = universe.iter().flatten().max().map_or(0, |g| g + 1).max(ds.num_groups());
    let config = StreamConfig {
        bucket_size_override: a.bucket_size,
        coreset: ctx.cluster.coreset,
        regime: ctx.regime,
        ..StreamConfig::default()
    };
    ctx.config.extra.insert("universe".into(), json(&universe));
    ctx.config.extra.insert("bucket_size".into(), json(a.bucket_size));
    let mut state = StreamState::new(c.k, c.epsilon, c.objective, *dim, num_groups, universe, config, ctx.seed)?;
    for (p, x) in coords.iter().enumerate() {
        state.insert(x.clone(), ds.groups_of(p))?;
    }
    let snap = state.coreset()?;
    let items: Vec<WeightedPoint> = snap
        .set
        .items
        .iter()
        .map(|it| WeightedPoint { point: snap.ids[it.point], ..*it })
        .collect();
    let mut r = report(&ctx, None, None);
    r.diagnostics.coreset_size = Some(items.len());
    let extra = &mut r.diagnostics.extra;
    extra.insert("seen".into(), json(state.seen()));
    extra.insert("capacity".into(), json(state.capacity()));
    extra.insert("bucket_weights".into(), json(state.bucket_weights()));
    extra.insert("stored_points".into(), json(state.stored_points()));
    r.coreset = Some(items);
    Ok(r)
}

fn run_reduce(a: &ReduceArgs) -> Result<Report> {
    let c = &a.common;
    let mut ctx = context("reduce", c, io::load_dataset(&c.input.spec())?)?;
    ctx.config.extra.insert("sketch".into(), json(a.sketch));
    if a.sketch {
        if c.objective != Objective::Means {
            return Err(Error::invalid("--sketch needs --objective means"));
        }
        let red = crate::sketch::kmeans_reduce(&ctx.ds, c.k, c.epsilon, &ctx.cluster.coreset, ctx.seed)?;
        let mut r = report(&ctx, None, None);
        r.diagnostics.coreset_size = Some(red.set.len());
        let extra = &mut r.diagnostics.extra;
        extra.insert("epsilon0".into(), json(red.epsilon0));
        extra.insert("sketch_dim".into(), json(red.sketch.dim()));
        extra.insert("sketch_residual".into(), json(red.sketch.residual));
        r.coreset = Some(red.set.items);
        return Ok(r);
    }
    let red = crate::approx::reduce_instance(&ctx.ds, c.k, c.epsilon, c.objective, &ctx.cluster.coreset, ctx.seed)?;
    let mut r = report(&ctx, None, None);
    r.diagnostics.coreset_size = Some(red.set.len());
    r.diagnostics.extra.insert("epsilon0".into(), json(red.epsilon0));
    r.coreset = Some(red.set.items);
    Ok(r)
}

fn run_oracle(a: &OracleArgs) -> Result<Report> {
    let c = &a.common;
    let mut ctx = context("oracle", c, io::load_dataset(&c.input.spec())?)?;
    let budget = OracleBudget {
        max_points: a.max_points,
        max_k: a.max_k,
        max_candidates: a.max_candidates,
    };
    for (key, v) in [("max_points", a.max_points), ("max_k", a.max_k), ("max_candidates", a.max_candidates)] {
        ctx.config.extra.insert(key.into(), json(v));
    }
    ctx.config.extra.insert("continuous".into(), json(a.continuous));
    let constraint = match &ctx.constraint {
        Constraint::Diversity(l) => Constraint::Fair(FairnessSpec::diversity(ctx.ds.num_groups(), *l as i64)?),
        other => other.clone(),
    };
    let sol = if a.continuous {
        let Constraint::Fair(spec) = &constraint else {
            return Err(Error::invalid("--continuous supports fairness constraints only"));
        };
        if c.objective != Objective::Means {
            return Err(Error::invalid("--continuous needs --objective means"));
        }
        exact_fair_means(&ctx.ds, c.k, spec, &budget)?
    } else {
        exact_variant_optimum(&ctx.ds, c.k, &constraint, c.objective, None, &budget)?
    };
    Ok(report(&ctx, Some(&sol.assignment), Some(sol.cost)))
}

fn run_bench(a: &BenchArgs) -> Result<Report> {
    let c = &a.common;
    if c.seed.is_none() {
        return Err(Error::invalid("bench needs an explicit --seed"));
    }
    let mut ctx = context("bench", c, io::load_dataset(&c.input.spec())?)?;
    ctx.config.extra.insert("repeats".into(), json(a.repeats));
    let mut rows = Vec::new();
    for seed in ctx.seed..ctx.seed + a.repeats {
        let t = Instant::now();
        let out = constrained_cluster(&ctx.ds, c.k, c.epsilon, c.objective, &ctx.constraint, ctx.regime, &ctx.cluster, seed);
        let elapsed_ms = t.elapsed().as_millis() as u64;
        let row = match out {
            Ok(sol) => BenchRow {
                seed,
                cost: Some(sol.cost),
                status: "ok".into(),
                coreset_size: Some(sol.meta.coreset_size),
                elapsed_ms,
            },
            Err(e @ (Error::Infeasible(_) | Error::BudgetExceeded(_))) => BenchRow {
                seed,
                cost: None,
                status: e.to_string(),
                coreset_size: None,
                elapsed_ms,
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let best = rows.iter().filter_map(|r| r.cost).min_by(f64::total_cmp);
    let mut r = report(&ctx, None, best);
    r.bench = Some(rows);
    Ok(r)
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Coreset(c) | Command::Cluster(c) => c,
        Command::Assign(a) => &a.common,
        Command::Stream(a) => &a.common,
        Command::Reduce(a) => &a.common,
        Command::Oracle(a) => &a.common,
        Command::Bench(a) => &a.common,
    }
}

fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Coreset(c) => run_coreset(c),
        Command::Assign(a) => run_assign(a),
        Command::Cluster(c) => run_cluster(c),
        Command::Stream(a) => run_stream(a),
        Command::Reduce(a) => run_reduce(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Bench(a) => run_bench(a),
    }
}

/// Runs a parsed command and returns the result document.
pub fn run(cli: &Cli) -> Result<Report> {
    let c = common(&cli.command);
    let start = Instant::now();
    let mut report = match c.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(|| dispatch(&cli.command))?,
        None => dispatch(&cli.command)?,
    };
    if c.timing {
        report.diagnostics.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs a command and renders its result as pretty JSON.
pub fn run_to_string(cli: &Cli) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&run(cli)?)?;
    s.push('\n');
    Ok(s)
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => 2,
        Error::BudgetExceeded(_) => 3,
        _ => 1,
    }
}

/// Parses `args`, runs the command and writes the result to `--output`
/// (printing the path) or to stdout. Returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let out = common(&cli.command).output.clone();
    let result = run_to_string(&cli).and_then(|text| {
        if out.as_os_str() == "-" {
            print!("{text}");
        } else {
            std::fs::write(&out, text)?;
            println!("{}", out.display());
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
