use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use eqclass::assoc::{is_associative, is_quasi_associative, iterate, AssocError};
use eqclass::classes::{member, separating_rank, ClassId, Rank};
use eqclass::classify::{classify_interval, cross_check_thm10, ClassifyError, IntervalVerdict};
use eqclass::families::quasi_monadic_lattice;
use eqclass::hypergraph::{
    edge_surjective_hom_budget, lemma4_check, Hypergraph, HypergraphError, DEFAULT_HOM_BUDGET,
};
use eqclass::minor::{compare, verify_antichain, MinorError, PairResult, Verdict, DEFAULT_BUDGET};
use eqclass::monoid::{assoc_lemma_check, compose_classes, hasse_edges, is_idempotent_at_cap, CappedClass, DEFAULT_CAP};
use eqclass::selfcheck::{self, SelfCheckOptions, Status};
use eqclass::{format_function, parse_function, BooleanFunction, Style};

const CONVENTIONS: &str = "x1=lsb;tt:<n>:0x<hex> little-endian;v1";

#[derive(Parser, Debug)]
#[command(name = "eqclass", version, about = "Minors, Post classes and equational classes of Boolean functions")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Node budget for minor and homomorphism searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Arity cap for materialized classes.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// How functions are printed in text output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Hex)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Hex,
    Anf,
    Dnf,
}

impl Format {
    fn style(self) -> Style {
        match self {
            Format::Hex => Style::Hex,
            Format::Anf => Style::Anf,
            Format::Dnf => Style::Dnf,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare two functions under the minor preorder.
    Cmp { f: String, g: String },
    /// Check that no function is a minor of another.
    Antichain {
        #[arg(required = true, num_args = 2..)]
        fs: Vec<String>,
    },
    /// Membership of a function in a catalog class.
    Member { f: String, class: String },
    /// Separating rank with respect to 0 or 1.
    Rank { f: String, a: u8 },
    /// Whether a function is associative, with a witness when it is not.
    Assoc { f: String },
    /// Whether the essential core of a function is associative.
    QuasiAssoc { f: String },
    /// The k-th iterate of a function.
    Iterate { f: String, k: usize },
    /// Hyperedge-surjective homomorphism between two hypergraphs.
    Hom { g: String, h: String },
    /// Homomorphism and minor searches side by side.
    Lemma4 { g: String, h: String },
    /// Closure of a set of functions under minors, up to the cap.
    Closure {
        #[arg(required = true)]
        fs: Vec<String>,
    },
    /// Compose the closures of two generator sets.
    ComposeClasses {
        #[arg(long = "left", required = true)]
        left: Vec<String>,
        #[arg(long = "right", required = true)]
        right: Vec<String>,
    },
    /// Whether the closure of the generators satisfies KK = K.
    Idempotent {
        #[arg(required = true)]
        fs: Vec<String>,
    },
    /// Compare (IJ)K with I(JK).
    AssocLemma {
        #[arg(long = "i", required = true)]
        i: Vec<String>,
        #[arg(long = "j", required = true)]
        j: Vec<String>,
        #[arg(long = "k", required = true)]
        k: Vec<String>,
        /// Take J as the given set instead of its closure.
        #[arg(long)]
        j_unchecked: bool,
    },
    /// Cardinality of the interval between two catalog classes.
    Classify { c1: String, c2: String },
    /// Scan a class difference for non-quasi-associative members.
    Crosscheck { c1: String, c2: String },
    /// The sixteen classes of quasi-monadic functions.
    EnumerateMonadic,
    /// Run the built-in invariant checks.
    Selfcheck,
}

/// What a command produced.
struct Output {
    result: Value,
    text: String,
    nodes: u64,
    inconclusive: bool,
}

impl Output {
    fn done(result: Value, text: String) -> Self {
        Output {
            result,
            text,
            nodes: 0,
            inconclusive: false,
        }
    }

    fn nodes(mut self, nodes: u64) -> Self {
        self.nodes = nodes;
        self
    }

    fn budget_exhausted(nodes: u64) -> Self {
        Output {
            result: json!({ "verdict": "inconclusive", "nodes": nodes }),
            text: format!("inconclusive (budget exhausted after {nodes} nodes)"),
            nodes,
            inconclusive: true,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    result: &'a Value,
    stats: Stats,
    conventions: &'a str,
}

#[derive(Serialize)]
struct Stats {
    nodes: u64,
    wall_time_ms: u128,
}

fn func(text: &str) -> Result<BooleanFunction> {
    parse_function(text).with_context(|| format!("cannot parse function `{text}`"))
}

fn funcs(texts: &[String]) -> Result<Vec<BooleanFunction>> {
    texts.iter().map(|t| func(t)).collect()
}

fn class(text: &str) -> Result<ClassId> {
    text.parse::<ClassId>().with_context(|| format!("unknown class `{text}`"))
}

fn hypergraph(text: &str) -> Result<Hypergraph> {
    text.parse::<Hypergraph>().with_context(|| format!("cannot parse hypergraph `{text}`"))
}

fn hex(f: &BooleanFunction) -> String {
    format_function(f, Style::Hex)
}

fn members_json(c: &CappedClass) -> Value {
    let groups: serde_json::Map<String, Value> = (1..=c.cap())
        .map(|m| {
            let hexes: Vec<String> = c.members_of_arity(m).iter().map(hex).collect();
            (m.to_string(), json!(hexes))
        })
        .collect();
    json!({ "cap": c.cap(), "size": c.len(), "members": groups })
}

fn members_text(c: &CappedClass, style: Style) -> String {
    let mut s = format!("{} members up to arity {}\n", c.len(), c.cap());
    for m in 1..=c.cap() {
        let fs: Vec<String> = c
            .members_of_arity(m)
            .iter()
            .map(|f| format_function(f, style))
            .collect();
        writeln!(s, "arity {m} ({}): {}", fs.len(), fs.join(" ")).unwrap();
    }
    s.trim_end().to_string()
}

fn minor_inconclusive(e: &MinorError) -> Option<u64> {
    match e {
        MinorError::Inconclusive { nodes } => Some(*nodes),
        _ => None,
    }
}

fn verdict_text(v: &IntervalVerdict) -> String {
    let mut s = format!("{}\njustification: {}", v.kind, v.justification);
    if let Some(via) = v.via {
        write!(s, "\nvia: {via}").unwrap();
    }
    if let Some((lo, hi)) = v.minimal {
        write!(s, "\nminimal interval: <{lo}, {hi}>").unwrap();
    }
    if let Some(w) = &v.witness {
        write!(s, "\nwitness: {} = {}", w.spec, hex(&w.function)).unwrap();
    }
    s
}

fn run(cli: &Cli) -> Result<Output> {
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let hom_budget = cli.budget.unwrap_or(DEFAULT_HOM_BUDGET);
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let style = cli.format.style();
    let closure = |gens: &[String]| -> Result<CappedClass> { Ok(CappedClass::closure(&funcs(gens)?, cap)?) };

    Ok(match &cli.command {
        Command::Cmp { f, g } => {
            let (a, b) = (func(f)?, func(g)?);
            match compare(&a, &b, budget) {
                Ok(c) => {
                    let mut text = c.relation.as_str().to_string();
                    if let Some(w) = &c.le_witness {
                        write!(text, "\nleft <= right via {:?}", w.map).unwrap();
                    }
                    if let Some(w) = &c.ge_witness {
                        write!(text, "\nright <= left via {:?}", w.map).unwrap();
                    }
                    Output::done(
                        json!({
                            "relation": c.relation,
                            "le_witness": c.le_witness,
                            "ge_witness": c.ge_witness,
                        }),
                        text,
                    )
                    .nodes(c.nodes)
                }
                Err(e) => match minor_inconclusive(&e) {
                    Some(nodes) => Output::budget_exhausted(nodes),
                    None => return Err(e.into()),
                },
            }
        }
        Command::Antichain { fs } => {
            let report = verify_antichain(&funcs(fs)?, budget)?;
            let mut text = format!("{}", serde_json::to_value(report.verdict)?.as_str().unwrap_or_default());
            for p in &report.pairs {
                if p.result != PairResult::None {
                    write!(text, "\n{} -> {}: {:?}", p.i, p.j, p.result).unwrap();
                    if let Some(w) = &p.witness {
                        write!(text, " via {:?}", w.map).unwrap();
                    }
                }
            }
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| json!({ "i": p.i, "j": p.j, "result": p.result, "witness": p.witness }))
                .collect();
            Output {
                result: json!({ "verdict": report.verdict, "functions": report.functions, "pairs": pairs }),
                text,
                nodes: report.total_nodes,
                inconclusive: report.verdict == Verdict::Inconclusive,
            }
        }
        Command::Member { f, class: c } => {
            let c = class(c)?;
            let m = member(&func(f)?, c)?;
            Output::done(json!({ "class": c, "member": m }), m.to_string())
        }
        Command::Rank { f, a } => {
            let a = match a {
                0 => false,
                1 => true,
                _ => bail!("rank takes 0 or 1, got {a}"),
            };
            let r = separating_rank(&func(f)?, a)?;
            let text = match r {
                Rank::BelowTwo => "below 2".to_string(),
                Rank::Finite(k) => k.to_string(),
                Rank::Infinite => "infinite".to_string(),
            };
            Output::done(json!({ "a": a as u8, "rank": r }), text)
        }
        Command::Assoc { f } => {
            let f = func(f)?;
            let w = is_associative(&f)?;
            let text = match &w {
                None => "associative".to_string(),
                Some(w) => format!(
                    "non-associative\nnestings at {} and {} differ at ones {:?}: {} vs {}",
                    w.i,
                    w.j,
                    w.ones(),
                    w.left as u8,
                    w.right as u8
                ),
            };
            Output::done(json!({ "associative": w.is_none(), "witness": w }), text)
        }
        Command::QuasiAssoc { f } => {
            let q = is_quasi_associative(&func(f)?)?;
            Output::done(json!({ "quasi_associative": q }), q.to_string())
        }
        Command::Iterate { f, k } => {
            let g = iterate(&func(f)?, *k)?;
            Output::done(json!({ "function": g }), format_function(&g, style))
        }
        Command::Hom { g, h } => {
            let (g, h) = (hypergraph(g)?, hypergraph(h)?);
            match edge_surjective_hom_budget(&g, &h, hom_budget) {
                Ok(s) => {
                    let text = match &s.witness {
                        Some(w) => format!("hom {:?}", w.map),
                        None => "none".to_string(),
                    };
                    Output::done(json!({ "exists": s.witness.is_some(), "witness": s.witness }), text)
                        .nodes(s.nodes)
                }
                Err(HypergraphError::Inconclusive { nodes }) => Output::budget_exhausted(nodes),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Lemma4 { g, h } => {
            let (g, h) = (hypergraph(g)?, hypergraph(h)?);
            match lemma4_check(&g, &h, budget) {
                Ok(r) => {
                    let text = format!(
                        "hom: {}\nminor: {}\n{}",
                        r.hom.as_ref().map_or("none".into(), |w| format!("{:?}", w.map)),
                        r.minor.as_ref().map_or("none".into(), |w| format!("{:?}", w.map)),
                        if r.consistent() {
                            "consistent"
                        } else if r.reverse_fails() {
                            "minor without homomorphism"
                        } else {
                            "homomorphism without minor"
                        }
                    );
                    Output::done(json!({ "report": r, "consistent": r.consistent() }), text)
                }
                Err(HypergraphError::Inconclusive { nodes })
                | Err(HypergraphError::Minor(MinorError::Inconclusive { nodes })) => Output::budget_exhausted(nodes),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Closure { fs } => {
            let c = closure(fs)?;
            Output::done(members_json(&c), members_text(&c, style))
        }
        Command::ComposeClasses { left, right } => {
            let c = compose_classes(&closure(left)?, &closure(right)?)?;
            let mut result = members_json(&c);
            result["closed"] = json!(c.is_closed());
            Output::done(result, members_text(&c, style))
        }
        Command::Idempotent { fs } => {
            let c = closure(fs)?;
            let idem = is_idempotent_at_cap(&c);
            Output::done(json!({ "idempotent": idem, "cap": cap, "size": c.len() }), idem.to_string())
        }
        Command::AssocLemma { i, j, k, j_unchecked } => {
            let j = if *j_unchecked {
                CappedClass::from_members_unchecked(cap, funcs(j)?)?
            } else {
                closure(j)?
            };
            let r = assoc_lemma_check(&closure(i)?, &j, &closure(k)?)?;
            let text = format!(
                "(IJ)K subset of I(JK): {}\nequal: {}\nJ closed: {}",
                r.subset_holds, r.equality_holds, r.j_closed
            );
            Output::done(json!({ "report": r, "cap": cap }), text)
        }
        Command::Classify { c1, c2 } => {
            let v = classify_interval(class(c1)?, class(c2)?)?;
            let text = verdict_text(&v);
            Output::done(serde_json::to_value(&v)?, text)
        }
        Command::Crosscheck { c1, c2 } => {
            let cap = cli.cap.unwrap_or(3);
            let r = cross_check_thm10(class(c1)?, class(c2)?, cap)?;
            let text = format!(
                "verdict: {}\nsample: {} functions up to arity {}\nnon-quasi-associative: {}\n{}",
                r.verdict,
                r.sample_size,
                r.cap,
                r.non_associative.len(),
                if r.consistent() { "consistent" } else { "inconsistent" }
            );
            Output::done(json!({ "check": r, "consistent": r.consistent() }), text)
        }
        Command::EnumerateMonadic => {
            let lattice = quasi_monadic_lattice(cap)?;
            let classes: Vec<CappedClass> = lattice.iter().map(|c| c.class.clone()).collect();
            let edges = hasse_edges(&classes);
            let mut text = format!("{} classes", lattice.len());
            for c in &lattice {
                write!(text, "\n{} ({} members)", c.name, c.class.len()).unwrap();
            }
            for (lo, hi) in &edges {
                write!(text, "\n{} < {}", lattice[*lo].name, lattice[*hi].name).unwrap();
            }
            let entries: Vec<Value> = lattice
                .iter()
                .map(|c| json!({ "name": c.name, "generators": c.generators, "size": c.class.len() }))
                .collect();
            let covers: Vec<Value> = edges
                .iter()
                .map(|(lo, hi)| json!([lattice[*lo].name, lattice[*hi].name]))
                .collect();
            Output::done(json!({ "count": lattice.len(), "classes": entries, "covers": covers }), text)
        }
        Command::Selfcheck => {
            let report = selfcheck::run(&SelfCheckOptions {
                budget,
                ..Default::default()
            });
            let text = report
                .checks
                .iter()
                .map(|c| {
                    let status = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Inconclusive => "INCONCLUSIVE",
                    };
                    if c.detail.is_empty() {
                        format!("{status} {}", c.name)
                    } else {
                        format!("{status} {} ({})", c.name, c.detail)
                    }
                })
                .collect::<Vec<_>>()
                .join("\n");
            let failed = report.failed();
            let inconclusive = report.inconclusive();
            let out = Output {
                result: serde_json::to_value(&report)?,
                text,
                nodes: 0,
                inconclusive,
            };
            if failed {
                print_output(cli, &out, 0);
                bail!("selfcheck failed");
            }
            out
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cmp { .. } => "cmp",
        Command::Antichain { .. } => "antichain",
        Command::Member { .. } => "member",
        Command::Rank { .. } => "rank",
        Command::Assoc { .. } => "assoc",
        Command::QuasiAssoc { .. } => "quasi-assoc",
        Command::Iterate { .. } => "iterate",
        Command::Hom { .. } => "hom",
        Command::Lemma4 { .. } => "lemma4",
        Command::Closure { .. } => "closure",
        Command::ComposeClasses { .. } => "compose-classes",
        Command::Idempotent { .. } => "idempotent",
        Command::AssocLemma { .. } => "assoc-lemma",
        Command::Classify { .. } => "classify",
        Command::Crosscheck { .. } => "crosscheck",
        Command::EnumerateMonadic => "enumerate-monadic",
        Command::Selfcheck => "selfcheck",
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_output(cli: &Cli, out: &Output, millis: u128) {
    if cli.json {
        let report = Report {
            command: command_name(&cli.command),
            result: &out.result,
            stats: Stats {
                nodes: out.nodes,
                wall_time_ms: millis,
            },
            conventions: CONVENTIONS,
        };
        emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        emit(&out.text);
    }
}

/// Budget exhaustion buried in a library error still counts as inconclusive.
fn buried_inconclusive(e: &anyhow::Error) -> Option<u64> {
    for cause in e.chain() {
        let nodes = if let Some(m) = cause.downcast_ref::<MinorError>() {
            minor_inconclusive(m)
        } else if let Some(AssocError::Minor(m)) = cause.downcast_ref::<AssocError>() {
            minor_inconclusive(m)
        } else if let Some(ClassifyError::Assoc(AssocError::Minor(m))) = cause.downcast_ref::<ClassifyError>() {
            minor_inconclusive(m)
        } else {
            None
        };
        if nodes.is_some() {
            return nodes;
        }
    }
    None
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok(out) => {
            print_output(&cli, &out, start.elapsed().as_millis());
            if out.inconclusive {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            if let Some(nodes) = buried_inconclusive(&e) {
                print_output(&cli, &Output::budget_exhausted(nodes), start.elapsed().as_millis());
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use eqclass::classify::VerdictKind;

    #[test]
    fn cli_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn verdict_kind_is_flattened() {
        let v = classify_interval(ClassId::Empty, ClassId::Omega1).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["kind"], "Finite");
        assert_eq!(j["count"], 16);
        assert_eq!(v.kind, VerdictKind::Finite(Some(16)));
    }
}
