//! Command-line front end for `taut-core`. Every command prints a single JSON
//! report; see [`run`] for the exit-code contract.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use taut_core::blowups::{
    decide_tautological, ms_trace, r_bound, verify_decision_inequality, verify_ms_suite, Verdict,
};
use taut_core::cycles::{
    generic_symbols, partition_coefficients, verify_blockwise_identity, DEFAULT_BRUTE_FORCE_LIMIT,
};
use taut_core::strata::{enumerate_stable_graphs, verify_r0_spanning};
use taut_core::tnumbers::{
    t_upper_bound, trade_points, verify_recursion_consistency, FiniteAbelianGroup, TBoundTable,
};
use taut_core::Cover;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Printed after every usage error.
pub const GRAMMAR: &str = "\
Usage:
  taut [--quiet] [--jobs N] [--out PATH] <COMMAND>
  taut cover validate|invariants|normalize|orbit|decide --k K --mono A,B,C
  taut ms --e E --f F [--trace]
  taut blowup verify-bound --max E
  taut blowup verify-inequality --kmax K
  taut strata enum|verify-r0 --genus G --markings N
  taut sym coeffs|verify --n N
  taut tnum bound|verify --genus G --markings N
  taut trade --group SPEC --anchor A --start X1,X2,...
";

#[derive(Debug, Parser)]
#[command(name = "taut", version, about = "Exact checks on tautological 0-cycles")]
pub struct Cli {
    /// Print only the verdict line instead of the JSON report.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Worker threads for long scans.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cyclic triple covers of the line.
    Cover {
        #[arg(value_enum)]
        action: CoverAction,
        #[command(flatten)]
        datum: CoverArgs,
    },
    /// Blowup multiplicity of z1^e = z2^f.
    Ms {
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, allow_hyphen_values = true)]
        f: i64,
        /// Include the list of blowups.
        #[arg(long)]
        trace: bool,
    },
    /// Scans over the multiplicity function and the decision inequality.
    Blowup {
        #[command(subcommand)]
        action: BlowupAction,
    },
    /// Stable graphs and the genus-zero spanning check.
    Strata {
        #[arg(value_enum)]
        action: StrataAction,
        #[command(flatten)]
        kind: GraphType,
    },
    /// Symmetrization coefficients over set partitions.
    Sym {
        #[arg(value_enum)]
        action: SymAction,
        #[arg(long)]
        n: usize,
    },
    /// Upper bounds on T(g, n).
    Tnum {
        #[arg(value_enum)]
        action: TnumAction,
        #[command(flatten)]
        kind: GraphType,
    },
    /// Point trading on a finite abelian group.
    Trade {
        /// Cyclic orders, e.g. `7` or `2x3`.
        #[arg(long)]
        group: String,
        /// Anchor element, components separated by `:`.
        #[arg(long)]
        anchor: String,
        /// Starting tuple, elements separated by `,`.
        #[arg(long)]
        start: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CoverAction {
    Validate,
    Invariants,
    Normalize,
    Orbit,
    Decide,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    /// Three monodromies, e.g. `2,3,25`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub mono: [i64; 3],
}

fn parse_triple(s: &str) -> Result<[i64; 3], String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into()
        .map_err(|v: Vec<i64>| format!("expected three values, got {}", v.len()))
}

#[derive(Debug, Subcommand)]
pub enum BlowupAction {
    /// Axioms and the R bound for 0 <= f <= e <= max.
    VerifyBound {
        #[arg(long)]
        max: i64,
    },
    /// Decision inequality for every normalized datum with k <= kmax.
    VerifyInequality {
        #[arg(long)]
        kmax: i64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrataAction {
    Enum,
    VerifyR0,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SymAction {
    Coeffs,
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TnumAction {
    Bound,
    Verify,
}

#[derive(Debug, Args)]
pub struct GraphType {
    #[arg(long)]
    pub genus: u32,
    #[arg(long)]
    pub markings: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub version: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One-word summary: the decision verdict for `cover decide`, otherwise
    /// `pass`/`fail` when there are checks and `ok` when there are none.
    pub fn verdict(&self) -> String {
        if let Some(v) = self.result.get("verdict").and_then(Value::as_str) {
            return v.to_string();
        }
        match (self.checks.is_empty(), self.passed()) {
            (true, _) => "ok".into(),
            (false, true) => "pass".into(),
            (false, false) => "fail".into(),
        }
    }

    /// Compact JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is valid JSON");
        serde_json::to_string(&value).expect("report is valid JSON")
    }
}

/// What the binary should print and return.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

fn to_value<S: Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("serializable payload")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::TautologicalCertified => "TautologicalCertified",
        Verdict::Inconclusive => "Inconclusive",
    }
}

fn cover_report(action: CoverAction, args: &CoverArgs) -> taut_core::Result<Report> {
    let mono = args.mono;
    let cover = Cover::validate(args.k, mono)?;
    let (name, result) = match action {
        CoverAction::Validate => ("validate", json!({ "valid": true, "datum": cover })),
        CoverAction::Invariants => ("invariants", to_value(&cover.invariants()?)),
        CoverAction::Normalize => ("normalize", to_value(&cover.normalize_total_ramification()?)),
        CoverAction::Orbit => {
            let orbit = cover.unit_orbit()?;
            ("orbit", json!({ "size": orbit.len(), "representatives": orbit }))
        }
        CoverAction::Decide => {
            let d = decide_tautological(&cover)?;
            let mut v = to_value(&d);
            v["verdict"] = json!(verdict_name(d.verdict));
            ("decide", v)
        }
    };
    Ok(Report {
        command: format!("cover {name}"),
        inputs: json!({ "k": args.k, "mono": mono }),
        result,
        checks: Vec::new(),
        version: VERSION.into(),
    })
}

fn execute(command: &Command) -> taut_core::Result<Report> {
    let report = |command: &str, inputs: Value, result: Value, checks: Vec<Check>| Report {
        command: command.into(),
        inputs,
        result,
        checks,
        version: VERSION.into(),
    };
    Ok(match command {
        Command::Cover { action, datum } => cover_report(*action, datum)?,
        Command::Ms { e, f, trace } => {
            let t = ms_trace(e, f)?;
            let mut result = json!({ "ms": t.ms_total, "terminal": t.terminal, "blowups": t.steps.len() });
            let mut checks = Vec::new();
            if let Ok(r) = r_bound(e, f) {
                result["r_bound"] = json!(r);
                let limit = e + f - r;
                checks.push(Check::new(
                    "ms <= e + f - R",
                    t.ms_total <= limit,
                    format!("{} <= {limit}", t.ms_total),
                ));
            }
            if *trace {
                result["steps"] = to_value(&t.steps);
            }
            report("ms", json!({ "e": e, "f": f, "trace": trace }), result, checks)
        }
        Command::Blowup { action } => match action {
            BlowupAction::VerifyBound { max } => {
                let r = verify_ms_suite(*max)?;
                let failures = |name: &str, v: &Vec<(i64, i64)>| {
                    Check::new(name, v.is_empty(), format!("{} failing pairs", v.len()))
                };
                let checks = vec![
                    failures("symmetry", &r.symmetry_failures),
                    failures("vanishing on f <= 1", &r.base_failures),
                    failures("subtractive recursion", &r.recursion_failures),
                    failures("ms <= e + f - R", &r.bound_failures),
                ];
                report("blowup verify-bound", json!({ "max": max }), to_value(&r), checks)
            }
            BlowupAction::VerifyInequality { kmax } => {
                let r = verify_decision_inequality(*kmax)?;
                let checks = vec![Check::new(
                    "decision inequality",
                    r.passed(),
                    format!("{} data, {} violations", r.checked, r.violations.len()),
                )];
                report("blowup verify-inequality", json!({ "kmax": kmax }), to_value(&r), checks)
            }
        },
        Command::Strata { action, kind } => {
            let inputs = json!({ "genus": kind.genus, "markings": kind.markings });
            match action {
                StrataAction::Enum => {
                    let graphs = enumerate_stable_graphs(kind.genus, kind.markings)?;
                    let result = json!({ "count": graphs.len(), "graphs": graphs });
                    report("strata enum", inputs, result, Vec::new())
                }
                StrataAction::VerifyR0 => {
                    let r = verify_r0_spanning(kind.genus, kind.markings)?;
                    let feasible = r.graphs.iter().filter(|c| c.feasible).count();
                    let checks = vec![Check::new(
                        "no positive-genus stratum carries a 0-cycle",
                        r.passed,
                        format!("{} graphs, {feasible} feasible", r.graph_count),
                    )];
                    report("strata verify-r0", inputs, to_value(&r), checks)
                }
            }
        }
        Command::Sym { action, n } => match action {
            SymAction::Coeffs => {
                let coeffs = partition_coefficients::<i64>(*n)?;
                let result = json!({ "count": coeffs.len(), "coefficients": coeffs });
                report("sym coeffs", json!({ "n": n }), result, Vec::new())
            }
            SymAction::Verify => {
                let ok = verify_blockwise_identity(&generic_symbols(*n), DEFAULT_BRUTE_FORCE_LIMIT)?;
                let checks = vec![Check::new(
                    "symmetrization equals expansion from theta",
                    ok,
                    format!("n = {n}"),
                )];
                report("sym verify", json!({ "n": n }), json!({ "identity": ok }), checks)
            }
        },
        Command::Tnum { action, kind } => {
            let inputs = json!({ "genus": kind.genus, "markings": kind.markings });
            match action {
                TnumAction::Bound => {
                    let b = t_upper_bound(kind.genus, kind.markings)?;
                    let replayed = b.provenance.replay()?;
                    let checks = vec![Check::new(
                        "provenance replays to the bound",
                        replayed == b.bound,
                        format!("{replayed:?}"),
                    )];
                    report("tnum bound", inputs, to_value(&b), checks)
                }
                TnumAction::Verify => {
                    let table = TBoundTable::rationally_connected();
                    let r = verify_recursion_consistency(&table, kind.genus, kind.markings)?;
                    let checks = vec![Check::new(
                        "recursion consistency",
                        r.passed(),
                        format!("{} cells, {} failures", r.checked, r.failures.len()),
                    )];
                    report("tnum verify", inputs, to_value(&r), checks)
                }
            }
        }
        Command::Trade {
            group,
            anchor,
            start,
        } => {
            let g = FiniteAbelianGroup::parse(group)?;
            let a = g.parse_element(anchor)?;
            let s = start
                .split(',')
                .map(|x| g.parse_element(x))
                .collect::<taut_core::Result<Vec<_>>>()?;
            let t = trade_points(&g, &a, &s)?;
            let checks = vec![
                Check::new(
                    "coordinate sums equal (m+1) anchor",
                    t.coordinate_sums_hold(),
                    format!("m = {}", t.m),
                ),
                Check::new("stage identities", t.stages_hold(), format!("{} stages", t.stages.len())),
            ];
            let inputs = json!({ "group": g.orders(), "anchor": a, "start": s });
            report("trade", inputs, to_value(&t), checks)
        }
    })
}

/// Parses `argv` (program name first) and runs the command.
///
/// Exit codes: 0 on success, 1 when a check fails, 2 on usage or input
/// errors. `--help` and `--version` exit 0.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let fail = |code, stdout: String, stderr: String| Outcome {
        code,
        stdout,
        stderr,
        report: None,
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                fail(2, String::new(), format!("{text}\n{GRAMMAR}"))
            } else {
                fail(0, text, String::new())
            };
        }
    };
    let result = match cli.jobs {
        Some(0) => return fail(2, String::new(), "error: --jobs must be positive\n".into()),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => return fail(2, String::new(), format!("error: {e}\n")),
        },
        None => execute(&cli.command),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => return fail(2, String::new(), format!("error: {e}\n")),
    };
    let json = report.to_json();
    let mut stderr = String::new();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            stderr = format!("error: cannot write {}: {e}\n", path.display());
        }
    }
    let code = if !stderr.is_empty() {
        2
    } else if report.passed() {
        0
    } else {
        1
    };
    let stdout = if cli.quiet {
        format!("{}\n", report.verdict())
    } else {
        format!("{json}\n")
    };
    Outcome {
        code,
        stdout,
        stderr,
        report: Some(report),
    }
}
