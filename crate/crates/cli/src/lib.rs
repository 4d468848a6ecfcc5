//! Command-line surface: algebra checks, invariants, graph enumeration,
//! weight estimation and table management, star products, and the Duflo /
//! Kashiwara–Vergne verification reports.
//!
//! Reports are dual-format: human text (default) or line-oriented
//! `KEY<TAB>VALUE` records (`--format machine`). Exit codes: 0 success,
//! 1 verification failure, 2 usage error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kdq::duflo::{
    duflo_residual, eta, kv_graded_residual, q_jet, solve_wheel_coeffs, tau_jet,
    WheelCoefficients,
};
use kdq::expr::parse_poly_expr;
use kdq::graphs::{encode, enumerate_graphs_with_ceiling, parse as parse_graph, GraphClass};
use kdq::lie::{find_invariants, load_algebra, normalize_constants, LieAlgebra};
use kdq::poly::Polynomial;
use kdq::ratio::{fmt_rat, rat_to_f64};
use kdq::star::{
    coefficient_bound_report, extract_right_operator_truncated, star, star_truncated, StarContext,
};
use kdq::weights::{
    cache_load, cache_store, mc_weight, solve_low_order_table, validate_low_order_table,
    CacheEntry, WeightTable, INTEGRATOR_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Hard ceiling on requested graph orders, mirroring the enumeration guard.
const ORDER_CEILING: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "kdq",
    version,
    about = "Star products on duals of Lie algebras: exact symbolic evaluation with Monte Carlo graph weights"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Weight cache file.
    #[arg(long, global = true, default_value = "weights.cache")]
    cache: PathBuf,
    /// Ignore the cache and recompute.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for Monte Carlo integration (default: KDQ_WORKERS or
    /// all cores). Results are identical for any worker count.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load, validate and normalize algebras.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    /// Invariant (Casimir) discovery.
    Invariants {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Degree bound.
        #[arg(long)]
        degree: usize,
    },
    /// Admissible graph enumeration.
    Graphs {
        #[command(subcommand)]
        action: GraphsCmd,
    },
    /// Weight estimation, table solving and cache inspection.
    Weights {
        #[command(subcommand)]
        action: WeightsCmd,
    },
    /// Star-product evaluation and right operators.
    Star {
        #[command(subcommand)]
        action: StarCmd,
    },
    /// Duflo series and verification.
    Duflo {
        #[command(subcommand)]
        action: DufloCmd,
    },
    /// Graded Kashiwara–Vergne residuals.
    Kv {
        #[command(subcommand)]
        action: KvCmd,
    },
    /// Wheel coefficient solving.
    Wheels {
        #[command(subcommand)]
        action: WheelsCmd,
    },
}

#[derive(Debug, Args)]
struct AlgebraArg {
    /// Bundled algebra name (sl2, heis3, abelian3, solv2) or a file path.
    #[arg(long)]
    algebra: String,
}

#[derive(Debug, Subcommand)]
enum AlgebraCmd {
    /// Validate antisymmetry and the Jacobi identity.
    Check {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Print the normalization rescaling and the normalized constants.
    Normalize {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
}

#[derive(Debug, Subcommand)]
enum GraphsCmd {
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_class)]
        class: GraphClass,
    },
    List {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_class)]
        class: GraphClass,
    },
}

#[derive(Debug, Subcommand)]
enum WeightsCmd {
    /// Monte Carlo estimate for one graph.
    Mc {
        /// Canonical graph encoding, e.g. K2:(L,2);(L,R) or W2.
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve the exact table for orders ≤ 2 and store it in the cache.
    Table {
        #[arg(long, default_value_t = 4_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 20260810)]
        seed: u64,
        /// Acceptance window around each mean, in standard errors.
        #[arg(long, default_value_t = 5.0)]
        tolerance: f64,
    },
    /// List cache entries.
    Cache,
}

#[derive(Debug, Subcommand)]
enum StarCmd {
    /// Star-multiply two polynomial expressions.
    Mul {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        /// Graph-order ceiling (exact result needs deg f1 + deg f2 ≤ this).
        #[arg(long, default_value_t = 2)]
        max_n: usize,
    },
    /// Extract the right operator of a polynomial.
    Op {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2)]
        max_n: usize,
    },
    /// Check the coefficient growth bound for the right operator.
    Bound {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        p: String,
        /// Orders beyond the exact table certified via |w| ≤ 4^n.
        #[arg(long, default_value_t = 3)]
        certified_order: usize,
    },
}

#[derive(Debug, Subcommand)]
enum DufloCmd {
    /// The square-root-Jacobian jet.
    Qjet {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// The wheel-coefficient transfer jet.
    Taujet {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply the Duflo map to a polynomial.
    Eta {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        p: String,
    },
    /// Verify multiplicativity of the Duflo map on a pair.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
}

#[derive(Debug, Subcommand)]
enum KvCmd {
    /// Graded residual of the Kashiwara–Vergne comparison.
    Residual {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        r: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum WheelsCmd {
    /// Solve even-wheel coefficients exactly and cross-check them.
    Solve {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        #[arg(long, default_value_t = 400_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_class(s: &str) -> Result<GraphClass, String> {
    match s {
        "A" | "a" => Ok(GraphClass::A),
        "G" | "g" => Ok(GraphClass::G),
        other => Err(format!("unknown class '{other}', expected A or G")),
    }
}

/// Key/value report rendered as prose or machine lines.
struct Report {
    format: Format,
    records: Vec<(String, String)>,
}

impl Report {
    fn new(format: Format) -> Self {
        Report {
            format,
            records: Vec::new(),
        }
    }

    fn push(&mut self, key: &str, value: impl Into<String>) {
        self.records.push((key.to_string(), value.into()));
    }

    fn print(&self) {
        for (key, value) in &self.records {
            match self.format {
                Format::Machine => println!("{key}\t{value}"),
                Format::Text => println!("{key}: {value}"),
            }
        }
    }
}

enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_VERIFICATION_FAILED,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn load_algebra_arg(arg: &AlgebraArg) -> Result<LieAlgebra, CliError> {
    if let Some(algebra) = kdq::fixtures::load_bundled(&arg.algebra) {
        return Ok(algebra);
    }
    let text = std::fs::read_to_string(&arg.algebra)
        .map_err(|e| usage(format!("cannot read algebra file '{}': {e}", arg.algebra)))?;
    load_algebra(&text).map_err(usage)
}

/// Loads the weight table: exact entries from the cache file when present,
/// otherwise the bundled solved table.
fn load_table(cli: &Cli, report: &mut Report) -> Result<WeightTable, CliError> {
    if !cli.no_cache && cli.cache.exists() {
        let (entries, warnings) = cache_load(&cli.cache).map_err(usage)?;
        for w in warnings {
            eprintln!("warning: {w}");
        }
        let mut table = WeightTable::empty();
        let mut exact = 0;
        for entry in entries {
            if let CacheEntry::Exact {
                encoding,
                weight,
                provenance,
            } = entry
            {
                table.insert(&encoding, weight, &provenance).map_err(usage)?;
                exact += 1;
            }
        }
        if exact > 0 {
            validate_low_order_table(&table)
                .map_err(|e| CliError::Failed(format!("cache table rejected: {e}")))?;
            report.push(
                "table",
                format!("cache {} ({exact} exact entries)", cli.cache.display()),
            );
            return Ok(table);
        }
    }
    report.push("table", "bundled solved table (n ≤ 2)");
    Ok(WeightTable::bundled().clone())
}

fn context_for(
    cli: &Cli,
    algebra: &LieAlgebra,
    max_n: usize,
    report: &mut Report,
) -> Result<StarContext, CliError> {
    if max_n > ORDER_CEILING {
        return Err(usage(format!(
            "requested order {max_n} exceeds the ceiling {ORDER_CEILING}"
        )));
    }
    let (normalized, scale) = normalize_constants(algebra);
    report.push("algebra", normalized.name().to_string());
    report.push("normalization_scale", fmt_rat(&scale));
    let table = load_table(cli, report)?;
    report.push("table_provenance", table.provenance_summary());
    StarContext::new(normalized, &table, max_n.min(table.max_order()))
        .map_err(|e| usage(e.to_string()))
}

fn poly_arg(s: &str, algebra: &LieAlgebra) -> Result<Polynomial, CliError> {
    parse_poly_expr(s, algebra).map_err(usage)
}

fn names(algebra: &LieAlgebra) -> Vec<String> {
    algebra.basis().to_vec()
}

fn solved_wheels(
    ctx: &StarContext,
    samples: u64,
    seed: u64,
    report: &mut Report,
) -> Result<WheelCoefficients, CliError> {
    let solve = solve_wheel_coeffs(ctx.algebra(), ctx, 1, samples, seed)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    for (k, est) in &solve.mc_checks {
        report.push(
            &format!("wheel_mc_k{k}"),
            format!(
                "{:.6} ± {:.1e} ({} samples, seed {})",
                est.mean, est.stderr, est.samples, est.seed
            ),
        );
    }
    if let Some(c) = solve.coeffs.exact(1) {
        report.push("wheel_c2", fmt_rat(&c));
    }
    Ok(solve.coeffs)
}

fn run(cli: Cli) -> Result<(Report, bool), CliError> {
    let mut report = Report::new(cli.format);
    if let Some(workers) = cli.workers.or_else(|| {
        std::env::var("KDQ_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    }) {
        // Results are worker-count independent; the pool size only sets
        // the parallelism level.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
        report.push("workers", workers.to_string());
    }
    let mut verified = true;

    match &cli.command {
        Command::Algebra { action } => match action {
            AlgebraCmd::Check { algebra } => {
                let a = load_algebra_arg(algebra)?;
                report.push("algebra", a.name().to_string());
                report.push("dim", a.dim().to_string());
                report.push("basis", a.basis().join(" "));
                report.push("valid", "true");
                report.push("max_constant", fmt_rat(&a.max_constant()));
            }
            AlgebraCmd::Normalize { algebra } => {
                let a = load_algebra_arg(algebra)?;
                let (n, scale) = normalize_constants(&a);
                report.push("algebra", n.name().to_string());
                report.push("normalization_scale", fmt_rat(&scale));
                report.push("max_constant", fmt_rat(&n.max_constant()));
                for i in 0..n.dim() {
                    for j in (i + 1)..n.dim() {
                        let b = n.bracket_poly(i, j);
                        if !b.is_zero() {
                            report.push(
                                &format!("bracket[{},{}]", n.basis()[i], n.basis()[j]),
                                b.display(&names(&n)),
                            );
                        }
                    }
                }
            }
        },
        Command::Invariants { algebra, degree } => {
            let a = load_algebra_arg(algebra)?;
            report.push("algebra", a.name().to_string());
            let inv = find_invariants(&a, *degree);
            report.push("degree_bound", degree.to_string());
            report.push("count", inv.elements.len().to_string());
            for (i, p) in inv.elements.iter().enumerate() {
                report.push(&format!("invariant[{i}]"), p.display(&names(&a)));
            }
        }
        Command::Graphs { action } => match action {
            GraphsCmd::Count { n, class } => {
                let graphs =
                    enumerate_graphs_with_ceiling(*n, *class, ORDER_CEILING).map_err(usage)?;
                report.push("n", n.to_string());
                report.push("class", class.to_string());
                report.push("count", graphs.len().to_string());
            }
            GraphsCmd::List { n, class } => {
                let graphs =
                    enumerate_graphs_with_ceiling(*n, *class, ORDER_CEILING).map_err(usage)?;
                report.push("count", graphs.len().to_string());
                for g in &graphs {
                    report.push("graph", encode(g));
                }
            }
        },
        Command::Weights { action } => match action {
            WeightsCmd::Mc {
                graph,
                samples,
                seed,
            } => {
                let g = parse_graph(graph).map_err(usage)?;
                let est = mc_weight(&g, *samples, *seed).map_err(usage)?;
                report.push("graph", est.graph.clone());
                report.push("mean", format!("{:.8}", est.mean));
                report.push("stderr", format!("{:.3e}", est.stderr));
                report.push("samples", est.samples.to_string());
                report.push("seed", est.seed.to_string());
                report.push("integrator", INTEGRATOR_VERSION);
                if !cli.no_cache {
                    cache_store(&cli.cache, &[CacheEntry::Mc(est)]).map_err(usage)?;
                    report.push("cache", cli.cache.display().to_string());
                }
            }
            WeightsCmd::Table {
                samples,
                seed,
                tolerance,
            } => {
                let (table, estimates) = solve_low_order_table(*samples, *seed, *tolerance)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                report.push("entries", table.len().to_string());
                report.push("max_order", table.max_order().to_string());
                report.push("seed", seed.to_string());
                report.push("samples_per_graph", samples.to_string());
                for (key, entry) in table.entries() {
                    report.push(&format!("w[{key}]"), fmt_rat(&entry.weight));
                }
                if !cli.no_cache {
                    let entries: Vec<CacheEntry> = table
                        .entries()
                        .map(|(k, e)| CacheEntry::Exact {
                            encoding: k.clone(),
                            weight: e.weight.clone(),
                            provenance: e.provenance.clone(),
                        })
                        .chain(estimates.into_iter().map(CacheEntry::Mc))
                        .collect();
                    cache_store(&cli.cache, &entries).map_err(usage)?;
                    report.push("cache", cli.cache.display().to_string());
                }
            }
            WeightsCmd::Cache => {
                let (entries, warnings) = cache_load(&cli.cache).map_err(usage)?;
                for w in warnings {
                    eprintln!("warning: {w}");
                }
                report.push("cache", cli.cache.display().to_string());
                report.push("entries", entries.len().to_string());
                for e in &entries {
                    match e {
                        CacheEntry::Exact {
                            encoding, weight, ..
                        } => report.push(&format!("exact[{encoding}]"), fmt_rat(weight)),
                        CacheEntry::Mc(est) => report.push(
                            &format!("mc[{}]", est.graph),
                            format!("{:.6} ± {:.1e}", est.mean, est.stderr),
                        ),
                    }
                }
            }
        },
        Command::Star { action } => match action {
            StarCmd::Mul {
                algebra,
                f1,
                f2,
                max_n,
            } => {
                let a = load_algebra_arg(algebra)?;
                let ctx = context_for(&cli, &a, *max_n, &mut report)?;
                let p1 = poly_arg(f1, ctx.algebra())?;
                let p2 = poly_arg(f2, ctx.algebra())?;
                let l = p1.degree() + p2.degree();
                if l <= ctx.max_n() {
                    let out = star(&p1, &p2, &ctx).map_err(usage)?;
                    report.push("exact", "true");
                    report.push("product", out.display(&names(ctx.algebra())));
                } else {
                    let out = star_truncated(&p1, &p2, &ctx).map_err(usage)?;
                    report.push("exact", format!("degrees >= {}", out.exact_from_degree));
                    report.push("product", out.poly.display(&names(ctx.algebra())));
                }
            }
            StarCmd::Op { algebra, p, max_n } => {
                let a = load_algebra_arg(algebra)?;
                let ctx = context_for(&cli, &a, *max_n, &mut report)?;
                let p = poly_arg(p, ctx.algebra())?;
                let ex = extract_right_operator_truncated(&p, &ctx).map_err(usage)?;
                report.push("p_degree", ex.p_degree.to_string());
                report.push("orders_included", ex.orders_included.to_string());
                report.push("derivative_order", ex.op.order().to_string());
                report.push("operator", ex.op.display(&names(ctx.algebra())));
                verified &= ex.op.order() <= ex.p_degree;
                report.push(
                    "order_bound_holds",
                    (ex.op.order() <= ex.p_degree).to_string(),
                );
            }
            StarCmd::Bound {
                algebra,
                p,
                certified_order,
            } => {
                let a = load_algebra_arg(algebra)?;
                let ctx = context_for(&cli, &a, 2, &mut report)?;
                let p = poly_arg(p, ctx.algebra())?;
                let r = coefficient_bound_report(&p, &ctx, *certified_order).map_err(usage)?;
                report.push("entries_checked", r.entries_checked.to_string());
                report.push("orders_exact", r.orders_exact.to_string());
                report.push("orders_certified", r.orders_certified.to_string());
                report.push("max_ratio", fmt_rat(&r.max_ratio));
                report.push(
                    "max_ratio_approx",
                    format!("{:.3e}", rat_to_f64(&r.max_ratio)),
                );
                report.push("all_within", r.all_within.to_string());
                verified &= r.all_within;
            }
        },
        Command::Duflo { action } => match action {
            DufloCmd::Qjet { algebra, order } => {
                let a = load_algebra_arg(algebra)?;
                report.push("algebra", a.name().to_string());
                let jet = q_jet(&a, *order);
                report.push("order", jet.order.to_string());
                report.push("qjet", jet.poly.display(&names(&a)));
            }
            DufloCmd::Taujet {
                algebra,
                order,
                samples,
                seed,
            } => {
                let a = load_algebra_arg(algebra)?;
                let ctx = context_for(&cli, &a, 2, &mut report)?;
                let wheels = solved_wheels(&ctx, *samples, *seed, &mut report)?;
                let jet = tau_jet(ctx.algebra(), *order, &wheels)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                report.push("order", jet.order.to_string());
                report.push("taujet", jet.poly.display(&names(ctx.algebra())));
            }
            DufloCmd::Eta { algebra, p } => {
                let a = load_algebra_arg(algebra)?;
                report.push("algebra", a.name().to_string());
                let p = poly_arg(p, &a)?;
                let u = eta(&p, &a);
                report.push("eta", u.display(&names(&a)));
            }
            DufloCmd::Verify { algebra, p, q } => {
                let a = load_algebra_arg(algebra)?;
                report.push("algebra", a.name().to_string());
                let p = poly_arg(p, &a)?;
                let q = poly_arg(q, &a)?;
                let res = duflo_residual(&p, &q, &a);
                for w in &res.warnings {
                    report.push("warning", w.clone());
                }
                report.push("residual", res.residual.display(&names(&a)));
                let zero = res.residual.is_zero();
                report.push("residual_zero", zero.to_string());
                if res.warnings.is_empty() {
                    verified &= zero;
                }
            }
        },
        Command::Kv { action } => match action {
            KvCmd::Residual {
                algebra,
                r,
                p,
                depth,
                samples,
                seed,
            } => {
                let a = load_algebra_arg(algebra)?;
                let ctx = context_for(&cli, &a, *depth, &mut report)?;
                let r = poly_arg(r, ctx.algebra())?;
                let p = poly_arg(p, ctx.algebra())?;
                let wheels = solved_wheels(&ctx, *samples, *seed, &mut report)?;
                let comps = kv_graded_residual(&r, &p, &ctx, &wheels, *depth)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                let mut all_zero = true;
                for (degree, poly) in &comps {
                    all_zero &= poly.is_zero();
                    report.push(
                        &format!("residual[deg {degree}]"),
                        poly.display(&names(ctx.algebra())),
                    );
                }
                report.push("residual_zero", all_zero.to_string());
                let invariant = kdq::lie::is_invariant(ctx.algebra(), &r)
                    && kdq::lie::is_invariant(ctx.algebra(), &p);
                report.push("arguments_invariant", invariant.to_string());
                if invariant {
                    verified &= all_zero;
                }
            }
        },
        Command::Wheels { action } => match action {
            WheelsCmd::Solve {
                algebra,
                kmax,
                samples,
                seed,
            } => {
                let a = load_algebra_arg(algebra)?;
                let ctx = context_for(&cli, &a, 2, &mut report)?;
                if *kmax != 1 {
                    return Err(usage(format!(
                        "wheel orders above k = 1 need weight tables beyond n ≤ 2 (got kmax = {kmax})"
                    )));
                }
                let _ = solved_wheels(&ctx, *samples, *seed, &mut report)?;
            }
        },
    }

    Ok((report, verified))
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version through the same path
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    run_args(cli)
}

/// Entry point for tests: parse explicit arguments.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_args(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

fn run_args(cli: Cli) -> i32 {
    match run(cli) {
        Ok((report, verified)) => {
            report.print();
            if verified {
                EXIT_OK
            } else {
                println!("verification\tfailed");
                EXIT_VERIFICATION_FAILED
            }
        }
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("usage error: {msg}"),
                CliError::Failed(msg) => eprintln!("verification failed: {msg}"),
            }
            e.exit_code()
        }
    }
}
