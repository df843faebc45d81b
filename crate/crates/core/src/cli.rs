//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 resource or usage error.
//! Every artifact starts with a `# outfn-euler vX, config: …` line that
//! echoes the effective configuration (the output path is not echoed, so the
//! same configuration yields the same bytes wherever it is written).

use crate::asymptotics::{
    check_precision, theorem_a_csv, theorem_a_ratio, theorem_b_csv, theorem_b_remainder, PRECISION_ENV,
};
use crate::chi::{chi_table, ChiTable, Route};
use crate::error::{Error, Result};
use crate::graphs::{enumerate_graphs, Character, EnumConfig, DEFAULT_CANDIDATE_CAP, DEFAULT_CLASS_CAP};
use crate::verify::{self, Suite, VerifyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Largest table the implicit and Laplace-Lie routes build without `--allow-large`.
pub const SLOW_ROUTE_CAP: usize = 50;

#[derive(Parser, Debug)]
#[command(name = "outfn-euler", version, about = "Rational Euler characteristic of Out(F_n)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Working precision in bits for floating-point diagnostics.
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = 256)]
    pub precision: u32,
    /// Output format for tables and listings.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Maximum multiplicity matrices generated per valence sequence.
    #[arg(long, global = true, default_value_t = DEFAULT_CANDIDATE_CAP)]
    pub candidate_cap: u64,
    /// Maximum number of graph classes in one enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CLASS_CAP)]
    pub class_cap: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Lambert,
    Implicit,
    LaplaceLie,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Lambert => Route::Lambert,
            RouteArg::Implicit => Route::Implicit,
            RouteArg::LaplaceLie => Route::LaplaceLie,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Series,
    Hopf,
    Graphs,
    Routes,
    Asym,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Series => Suite::Series,
            SuiteArg::Hopf => Suite::Hopf,
            SuiteArg::Graphs => Suite::Graphs,
            SuiteArg::Routes => Suite::Routes,
            SuiteArg::Asym => Suite::Asym,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharacterArg {
    Tau,
    Sigma,
    Xi,
    Unit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AsymKind {
    TheoremA,
    TheoremB,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact table of ch_n and Ch_n.
    Chi {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::Lambert)]
        route: RouteArg,
        /// Lift the size cap on the implicit and Laplace-Lie routes.
        #[arg(long)]
        allow_large: bool,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// List admissible graph classes with a character and its weighted sum.
    Graphs {
        /// Rank of the fundamental group (loop order + 1).
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        leaves: usize,
        #[arg(long, value_enum, default_value_t = CharacterArg::Tau)]
        character: CharacterArg,
        /// Include disconnected graphs with the same loop order.
        #[arg(long)]
        disconnected: bool,
    },
    /// Numerical growth diagnostics.
    Asym {
        #[arg(value_enum)]
        kind: AsymKind,
        /// Comma-separated list of n.
        #[arg(long = "n", value_delimiter = ',')]
        n: Vec<u64>,
        /// Number of expansion terms for theorem-b.
        #[arg(long = "R", default_value_t = 1)]
        r: usize,
    },
}

/// Effective configuration of one invocation.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RunConfig {
    pub command: String,
    pub max_n: Option<usize>,
    pub verify_depth: Option<usize>,
    pub precision_bits: u32,
    pub enumeration_caps: (u64, u64),
    pub output_format: String,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub extra: Vec<(String, String)>,
}

impl RunConfig {
    /// The `# outfn-euler vX, config: …` header line.
    pub fn echo(&self) -> String {
        let mut s = format!("# outfn-euler v{VERSION}, config: command={}", self.command);
        if let Some(n) = self.max_n {
            let _ = write!(s, " max_n={n}");
        }
        if let Some(d) = self.verify_depth {
            let _ = write!(s, " depth={d}");
        }
        for (k, v) in &self.extra {
            let _ = write!(s, " {k}={v}");
        }
        let _ = write!(
            s,
            " precision={} candidate_cap={} class_cap={} format={}",
            self.precision_bits, self.enumeration_caps.0, self.enumeration_caps.1, self.output_format
        );
        s
    }
}

/// Outcome of a command: the artifact body, a terminal summary and an exit code.
struct Outcome {
    body: String,
    summary: String,
    code: i32,
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn base_config(global: &GlobalArgs, command: &str) -> Result<RunConfig> {
    check_precision(global.precision)?;
    if global.candidate_cap == 0 || global.class_cap == 0 {
        return Err(Error::Usage("enumeration caps must be positive".into()));
    }
    Ok(RunConfig {
        command: command.to_string(),
        max_n: None,
        verify_depth: None,
        precision_bits: global.precision,
        enumeration_caps: (global.candidate_cap, global.class_cap),
        output_format: format_name(global.format).to_string(),
        output_path: global.output.clone(),
        extra: Vec::new(),
    })
}

fn enum_config(cfg: &RunConfig) -> EnumConfig {
    EnumConfig { candidate_cap: cfg.enumeration_caps.0, class_cap: cfg.enumeration_caps.1 }
}

pub fn chi_csv(table: &ChiTable) -> String {
    let mut out = String::from("n,ch_numerator,ch_denominator,Ch_numerator,Ch_denominator\n");
    for r in table.rows() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n, r.ch_numerator, r.ch_denominator, r.ch_hat_numerator, r.ch_hat_denominator
        );
    }
    out
}

fn cmd_chi(cfg: &mut RunConfig, max_n: usize, route: Route, allow_large: bool) -> Result<Outcome> {
    cfg.max_n = Some(max_n);
    cfg.extra.push(("route".into(), route.name().into()));
    if max_n == 0 {
        return Err(Error::Usage("--max-n must be at least 1".into()));
    }
    if route != Route::Lambert && max_n > SLOW_ROUTE_CAP && !allow_large {
        return Err(Error::Usage(format!(
            "the {} route is capped at --max-n {SLOW_ROUTE_CAP}; pass --allow-large to lift the cap",
            route.name()
        )));
    }
    let table = chi_table(route, max_n)?;
    let body = match cfg.output_format.as_str() {
        "json" => serde_json::to_string_pretty(&table.rows())? + "\n",
        _ => chi_csv(&table),
    };
    let mut summary = String::new();
    for n in 1..=max_n.min(5) {
        let _ = writeln!(summary, "ch_{n} = {}   Ch_{n} = {}", table.ch(n), table.ch_hat(n));
    }
    Ok(Outcome { body, summary, code: 0 })
}

fn cmd_verify(cfg: &mut RunConfig, suite: Suite, depth: Option<usize>) -> Result<Outcome> {
    cfg.verify_depth = depth;
    cfg.extra.push(("suite".into(), suite.name().into()));
    if depth == Some(0) {
        return Err(Error::Usage("--depth must be positive".into()));
    }
    let report = verify::run(
        suite,
        &VerifyConfig { depth, precision: cfg.precision_bits, enumeration: enum_config(cfg) },
    );
    let mut summary = String::new();
    for c in &report.checks {
        let status = serde_json::to_string(&c.status)?;
        let _ = writeln!(summary, "{:<8} {}/{}", status.trim_matches('"'), c.suite, c.name);
        if let Some(ce) = &c.counterexample {
            let _ = writeln!(summary, "         counterexample: {ce}");
        } else if c.status != verify::Status::Pass {
            let _ = writeln!(summary, "         {}", c.detail);
        }
    }
    let _ = writeln!(summary, "{} passed, {} failed, {} resource", report.passed, report.failed, report.resource);
    Ok(Outcome { body: report.to_json() + "\n", summary, code: report.exit_code() })
}

#[derive(Serialize)]
struct GraphRow {
    index: usize,
    automorphisms: String,
    value: String,
    vertices: usize,
    edges: usize,
    leaves: usize,
    graph: crate::graphs::GraphRecord,
}

fn cmd_graphs(cfg: &mut RunConfig, rank: usize, leaves: usize, character: CharacterArg, disconnected: bool) -> Result<Outcome> {
    let chi = match character {
        CharacterArg::Tau => Character::Tau,
        CharacterArg::Sigma => Character::Sigma,
        CharacterArg::Xi => Character::Xi,
        CharacterArg::Unit => Character::Unit,
    };
    cfg.extra.push(("rank".into(), rank.to_string()));
    cfg.extra.push(("leaves".into(), leaves.to_string()));
    cfg.extra.push(("character".into(), chi.name().into()));
    cfg.extra.push(("connected".into(), (!disconnected).to_string()));
    let classes = enumerate_graphs(rank as i64 - 1, leaves, !disconnected, true, &enum_config(cfg))?;
    let mut sum = Rational::new();
    let mut rows = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let v = chi.eval(&c.graph);
        sum += &v / Rational::from(&c.automorphisms);
        rows.push(GraphRow {
            index: i + 1,
            automorphisms: c.automorphisms.to_string(),
            value: v.to_string(),
            vertices: c.graph.vertex_count(),
            edges: c.graph.edge_count(),
            leaves: c.graph.leaf_count(),
            graph: c.graph.to_record(),
        });
    }
    let body = match cfg.output_format.as_str() {
        "json" => {
            #[derive(Serialize)]
            struct Listing<'a> {
                classes: &'a [GraphRow],
                sum: String,
            }
            serde_json::to_string_pretty(&Listing { classes: &rows, sum: sum.to_string() })? + "\n"
        }
        _ => {
            let mut out = String::from("index,automorphisms,value,vertices,edges,leaves,graph\n");
            for r in &rows {
                let json = serde_json::to_string(&r.graph)?.replace('"', "\"\"");
                let _ = writeln!(out, "{},{},{},{},{},{},\"{json}\"", r.index, r.automorphisms, r.value, r.vertices, r.edges, r.leaves);
            }
            let _ = writeln!(out, "sum,{sum}");
            out
        }
    };
    let summary = format!(
        "{} classes, sum of {}/|Aut| = {sum}\n",
        classes.len(),
        chi.name()
    );
    Ok(Outcome { body, summary, code: 0 })
}

fn cmd_asym(cfg: &mut RunConfig, kind: AsymKind, n: Vec<u64>, r: usize) -> Result<Outcome> {
    let bits = cfg.precision_bits;
    match kind {
        AsymKind::TheoremA => {
            let n = if n.is_empty() { vec![125, 250, 500, 1000] } else { n };
            cfg.extra.push(("kind".into(), "theorem-a".into()));
            cfg.extra.push(("n".into(), join(&n)));
            let max = *n.iter().max().expect("non-empty");
            if max < 2 || n.iter().any(|&x| x < 2) {
                return Err(Error::Usage("theorem-a needs n >= 2".into()));
            }
            let table = chi_table(Route::Lambert, (max - 1).max(1) as usize)?;
            let rows = theorem_a_ratio(&n, &table.ch, bits)?;
            let positive = rows.iter().all(|(_, v)| v.is_sign_positive());
            let summary = rows.iter().map(|(n, v)| format!("r_{n} = {}\n", v.to_decimal(16))).collect();
            Ok(Outcome { body: theorem_a_csv(&rows), summary, code: if positive { 0 } else { 1 } })
        }
        AsymKind::TheoremB => {
            let n = if n.is_empty() { vec![50, 100, 200, 400] } else { n };
            cfg.extra.push(("kind".into(), "theorem-b".into()));
            cfg.extra.push(("n".into(), join(&n)));
            cfg.extra.push(("R".into(), r.to_string()));
            if r == 0 {
                return Err(Error::Usage("--R must be at least 1".into()));
            }
            if n.iter().any(|&x| x <= r as u64) {
                return Err(Error::Usage("theorem-b needs every n > R".into()));
            }
            let table = chi_table(Route::Lambert, r.max(1))?;
            let rows: Vec<_> = n
                .iter()
                .map(|&x| theorem_b_remainder(x, r, &table.ch_hat, bits))
                .collect::<Result<_>>()?;
            let ok = rows.iter().all(|v| v.value.is_finite() && v.value.is_sign_positive());
            let summary = rows
                .iter()
                .map(|v| format!("n={} R={}: {} ({} bits)\n", v.n, v.terms, v.value.to_decimal(16), v.precision))
                .collect();
            Ok(Outcome { body: theorem_b_csv(&rows), summary, code: if ok { 0 } else { 1 } })
        }
    }
}

fn join(n: &[u64]) -> String {
    n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

type Deferred = Box<dyn FnOnce(&mut RunConfig) -> Result<Outcome>>;

fn dispatch(cli: Cli) -> Result<(RunConfig, Outcome)> {
    let global = cli.global;
    let (name, run): (&str, Deferred) = match cli.command {
        Command::Chi { max_n, route, allow_large } => ("chi", Box::new(move |c| cmd_chi(c, max_n, route.into(), allow_large))),
        Command::Verify { suite, depth } => ("verify", Box::new(move |c| cmd_verify(c, suite.into(), depth))),
        Command::Graphs { rank, leaves, character, disconnected } => {
            ("graphs", Box::new(move |c| cmd_graphs(c, rank, leaves, character, disconnected)))
        }
        Command::Asym { kind, n, r } => ("asym", Box::new(move |c| cmd_asym(c, kind, n, r))),
    };
    let mut cfg = base_config(&global, name)?;
    let outcome = run(&mut cfg)?;
    Ok((cfg, outcome))
}

fn emit(cfg: &RunConfig, outcome: &Outcome) -> Result<()> {
    let artifact = format!("{}\n{}", cfg.echo(), outcome.body);
    match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, artifact)?;
            print!("{}", outcome.summary);
        }
        None => {
            print!("{artifact}");
            eprint!("{}", outcome.summary);
        }
    }
    std::io::stdout().flush()?;
    Ok(())
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli).and_then(|(cfg, outcome)| emit(&cfg, &outcome).map(|_| outcome.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_or_usage() {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_header_shape() {
        let cfg = RunConfig {
            command: "chi".into(),
            max_n: Some(5),
            verify_depth: None,
            precision_bits: 256,
            enumeration_caps: (10, 20),
            output_format: "csv".into(),
            output_path: Some("/tmp/x".into()),
            extra: vec![("route".into(), "lambert".into())],
        };
        let e = cfg.echo();
        assert!(e.starts_with(&format!("# outfn-euler v{VERSION}, config: command=chi max_n=5 route=lambert")));
        assert!(!e.contains("/tmp/x"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["outfn-euler", "chi", "--max-n", "0"]), 2);
        assert_eq!(run(["outfn-euler", "asym", "theorem-b", "--R", "0"]), 2);
        assert_eq!(run(["outfn-euler", "chi", "--max-n", "60", "--route", "implicit"]), 2);
        assert_eq!(run(["outfn-euler", "frobnicate"]), 2);
        assert_eq!(run(["outfn-euler", "chi", "--max-n", "3", "--precision", "16"]), 2);
    }

    #[test]
    fn chi_csv_rows() {
        let t = chi_table(Route::Lambert, 5).unwrap();
        let csv = chi_csv(&t);
        let row3 = csv.lines().nth(3).unwrap();
        assert!(row3.starts_with("3,-161,5760,"));
    }
}
