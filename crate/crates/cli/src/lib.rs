//! Command-line front end. `main.rs` only parses arguments and maps the
//! outcome to an exit status; everything else lives here so tests can read
//! the JSON records back.

use std::fmt;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use leavitt_core::acceptance::{run_all, CriterionResult};
use leavitt_core::chen::{act, parse_vector, ModuleDescriptor};
use leavitt_core::connector::{connector_set, verify_witness, ConnectorResult};
use leavitt_core::expr::parse_element;
use leavitt_core::ext::{ext_dim, ext_dim_oracle, CaseTag, Dim, OracleOutcome};
use leavitt_core::graph::{parse_graph, Cycle, Graph};
use leavitt_core::irreducible::BasicPolynomial;
use leavitt_core::report::Report;
use leavitt_core::scalar::{BaseField, Field};
use leavitt_core::verify::{parse_twist, verify_contraction_lemma, verify_resolution, ResolutionTwist};
use leavitt_core::Error;

#[derive(Debug, Parser)]
#[command(name = "leavitt", version, about = "Exact computations with Leavitt path algebras")]
pub struct Cli {
    /// Base field: `Q` or `F<prime>`.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List cycle rotation classes with exclusivity flags.
    Cycles { graph: PathBuf },
    /// Normal form of an expression.
    Nf { graph: PathBuf, expression: String },
    /// Dimension of Ext^1 between two twisted simple modules.
    Ext {
        graph: PathBuf,
        /// `cycle:polynomial`, e.g. `d:1/2x^2-1`.
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Cross-check with the brute-force oracle at this bound.
        #[arg(long, value_name = "B")]
        oracle: Option<usize>,
    },
    /// Ext^1 dimensions for all ordered pairs of the given modules.
    ExtTable {
        graph: PathBuf,
        /// `cycle:polynomial`; repeat for each module.
        #[arg(long = "module", required = true)]
        modules: Vec<String>,
    },
    /// Connector set from the source cycle to the target cycle.
    Connectors {
        graph: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Action of an expression on a vector of a twisted Chen module.
    Act {
        graph: PathBuf,
        /// `cycle:polynomial` or `cycle:scalar`.
        #[arg(long)]
        module: String,
        expression: String,
        vector: String,
    },
    /// Truncated verification of a resolution or of the contraction lemma.
    #[command(group(ArgGroup::new("mode").required(true).args(["lemma", "resolution"])))]
    Verify {
        graph: PathBuf,
        #[arg(long)]
        cycle: String,
        /// Polynomial twist, or a nonzero scalar for `--resolution`.
        #[arg(long)]
        poly: String,
        #[arg(short = 'L', long, default_value_t = 3)]
        truncation: usize,
        #[arg(long)]
        lemma: bool,
        #[arg(long)]
        resolution: bool,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Debug)]
pub enum Failure {
    Io { path: PathBuf, source: std::io::Error },
    Core(Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

/// Text written to stdout and whether every check passed.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub name: String,
    pub edges: Vec<String>,
    pub base: String,
    pub exclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclesRecord {
    pub cycles: Vec<CycleRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NfRecord {
    pub input: String,
    pub normal_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConnectorsOut {
    Finite { paths: Vec<String> },
    Infinite { prefix: String, pump: String, suffix: String, verified: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OracleRecord {
    Ran { bound: usize, outcome: OracleOutcome, agrees: bool },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtRecord {
    pub source: String,
    pub target: String,
    pub value: Dim,
    pub case: CaseTag,
    pub connectors: Option<ConnectorsOut>,
    pub warnings: Vec<String>,
    pub oracle: Option<OracleRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub modules: Vec<String>,
    /// `cells[i][j]` is the dimension from module `i` to module `j`.
    pub cells: Vec<Vec<Dim>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectorsRecord {
    pub source: String,
    pub target: String,
    pub connectors: ConnectorsOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActRecord {
    pub module: String,
    pub expression: String,
    pub vector: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestRecord {
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

pub fn parse_field(text: &str) -> Result<Field, Error> {
    Ok(Field::Base(text.parse::<BaseField>()?))
}

fn load_graph(path: &FsPath) -> Result<Arc<Graph>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Arc::new(parse_graph(&text)?))
}

fn cycle_name(g: &Graph, c: &Cycle) -> String {
    g.alias_of(c).map(str::to_string).unwrap_or_else(|| g.render_path(c.path()))
}

fn split_module(text: &str) -> Result<(&str, &str), Error> {
    text.split_once(':')
        .map(|(c, p)| (c.trim(), p.trim()))
        .ok_or_else(|| Error::syntax(1, 1, format!("expected `cycle:polynomial`, got `{text}`")))
}

fn parse_module(g: &Graph, text: &str, field: &Field) -> Result<(Cycle, BasicPolynomial), Error> {
    let (c, p) = split_module(text)?;
    Ok((g.parse_cycle(c)?, BasicPolynomial::parse(p, field)?))
}

fn module_label(g: &Graph, c: &Cycle, p: &BasicPolynomial) -> String {
    format!("{}:{}", cycle_name(g, c), p)
}

fn connectors_out(g: &Graph, c: &Cycle, e: &Cycle, r: &ConnectorResult) -> ConnectorsOut {
    match r {
        ConnectorResult::Finite(paths) => ConnectorsOut::Finite {
            paths: paths.iter().map(|p| g.render_path(p)).collect(),
        },
        ConnectorResult::Infinite(w) => ConnectorsOut::Infinite {
            prefix: g.render_path(&w.prefix),
            pump: g.render_path(&w.pump),
            suffix: g.render_path(&w.suffix),
            verified: verify_witness(c, e, w, 4),
        },
    }
}

fn render_connectors(out: &ConnectorsOut) -> String {
    match out {
        ConnectorsOut::Finite { paths } if paths.is_empty() => "none".into(),
        ConnectorsOut::Finite { paths } => paths.join(", "),
        ConnectorsOut::Infinite { prefix, pump, suffix, verified } => format!(
            "infinite: ({prefix}) ({pump})^k ({suffix}), witness {}",
            if *verified { "verified" } else { "NOT verified" }
        ),
    }
}

/// Aligned `key  value` lines.
fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn emit<T: Serialize>(json: bool, record: &T, text: impl FnOnce(&T) -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(record).expect("records serialize");
        s.push('\n');
        s
    } else {
        text(record)
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let field = parse_field(&cli.field)?;
    let json = cli.json;
    let done = |stdout: String, ok: bool| Ok(Outcome { stdout, ok });
    match &cli.command {
        Command::Cycles { graph } => {
            let g = load_graph(graph)?;
            let mut cycles = Vec::new();
            for c in g.find_cycles() {
                cycles.push(CycleRecord {
                    name: cycle_name(&g, &c),
                    edges: c.edges().iter().map(|&e| g.edge_name(e).to_string()).collect(),
                    base: g.vertex_name(c.base()).to_string(),
                    exclusive: g.is_exclusive(&c)?,
                });
            }
            let record = CyclesRecord { cycles };
            done(
                emit(json, &record, |r| {
                    let name_w = r.cycles.iter().map(|c| c.name.len()).max().unwrap_or(0);
                    let edge_w = r.cycles.iter().map(|c| c.edges.join(" ").len()).max().unwrap_or(0);
                    r.cycles
                        .iter()
                        .map(|c| {
                            format!(
                                "{:<name_w$}  {:<edge_w$}  base {}  {}\n",
                                c.name,
                                c.edges.join(" "),
                                c.base,
                                if c.exclusive { "exclusive" } else { "not exclusive" }
                            )
                        })
                        .collect()
                }),
                true,
            )
        }
        Command::Nf { graph, expression } => {
            let g = load_graph(graph)?;
            let x = parse_element(expression, &g, &field)?;
            let record = NfRecord {
                input: expression.clone(),
                normal_form: x.normal_form().render(),
            };
            done(emit(json, &record, |r| format!("{}\n", r.normal_form)), true)
        }
        Command::Ext { graph, source, target, oracle } => {
            let g = load_graph(graph)?;
            let (c, p) = parse_module(&g, source, &field)?;
            let (e, q) = parse_module(&g, target, &field)?;
            let dim = ext_dim(&g, &c, &p, &e, &q)?;
            let oracle = match oracle {
                None => None,
                Some(b) => Some(match ext_dim_oracle(&g, &c, &p, &e, &q, *b) {
                    Ok(outcome) => OracleRecord::Ran {
                        bound: *b,
                        agrees: outcome.agrees_with(dim.value),
                        outcome,
                    },
                    Err(err @ Error::NonExclusiveCycle(_)) => OracleRecord::Skipped { reason: err.to_string() },
                    Err(err) => return Err(err.into()),
                }),
            };
            let ok = !matches!(oracle, Some(OracleRecord::Ran { agrees: false, .. }));
            let record = ExtRecord {
                source: module_label(&g, &c, &p),
                target: module_label(&g, &e, &q),
                value: dim.value,
                case: dim.case,
                connectors: dim.connectors.as_ref().map(|r| connectors_out(&g, &c, &e, r)),
                warnings: dim.warnings.clone(),
                oracle,
            };
            done(emit(json, &record, render_ext), ok)
        }
        Command::ExtTable { graph, modules } => {
            let g = load_graph(graph)?;
            let parsed = modules
                .iter()
                .map(|m| parse_module(&g, m, &field))
                .collect::<Result<Vec<_>, _>>()?;
            let cells = std::thread::scope(|scope| {
                let rows: Vec<_> = parsed
                    .iter()
                    .map(|(c, p)| {
                        let (g, parsed) = (&g, &parsed);
                        scope.spawn(move || {
                            parsed
                                .iter()
                                .map(|(e, q)| ext_dim(g, c, p, e, q).map(|d| d.value))
                                .collect::<Result<Vec<_>, _>>()
                        })
                    })
                    .collect();
                rows.into_iter()
                    .map(|h| h.join().expect("table row"))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            let record = TableRecord {
                modules: parsed.iter().map(|(c, p)| module_label(&g, c, p)).collect(),
                cells,
            };
            done(emit(json, &record, render_table), true)
        }
        Command::Connectors { graph, source, target } => {
            let g = load_graph(graph)?;
            let (c, e) = (g.parse_cycle(source)?, g.parse_cycle(target)?);
            let out = connectors_out(&g, &c, &e, &connector_set(&g, &c, &e)?);
            let ok = !matches!(out, ConnectorsOut::Infinite { verified: false, .. });
            let record = ConnectorsRecord {
                source: cycle_name(&g, &c),
                target: cycle_name(&g, &e),
                connectors: out,
            };
            done(
                emit(json, &record, |r| match &r.connectors {
                    ConnectorsOut::Finite { paths } => {
                        let mut s = format!("{} connector(s)\n", paths.len());
                        for p in paths {
                            s.push_str(&format!("  {p}\n"));
                        }
                        s
                    }
                    other => format!("{}\n", render_connectors(other)),
                }),
                ok,
            )
        }
        Command::Act { graph, module, expression, vector } => {
            let g = load_graph(graph)?;
            let (c, t) = split_module(module)?;
            let cycle = g.parse_cycle(c)?;
            let desc = match parse_twist(t, &field)? {
                ResolutionTwist::Polynomial(p) => ModuleDescriptor::polynomial(&g, cycle, p)?,
                ResolutionTwist::Scalar(a) => ModuleDescriptor::scalar(&g, cycle, a)?,
            };
            let x = parse_element(expression, &g, &field)?;
            let w = parse_vector(vector, &desc)?;
            let record = ActRecord {
                module: module.clone(),
                expression: expression.clone(),
                vector: vector.clone(),
                result: act(&x, &w)?.render(),
            };
            done(emit(json, &record, |r| format!("{}\n", r.result)), true)
        }
        Command::Verify { graph, cycle, poly, truncation, lemma, .. } => {
            let g = load_graph(graph)?;
            let e = g.parse_cycle(cycle)?;
            let report: Report = if *lemma {
                verify_contraction_lemma(&g, &e, &BasicPolynomial::parse(poly, &field)?, *truncation)?
            } else {
                verify_resolution(&g, &e, &parse_twist(poly, &field)?, *truncation)?
            };
            done(emit(json, &report, Report::render_text), report.passed())
        }
        Command::Selftest => {
            let criteria = run_all();
            let passed = criteria.iter().all(|c| c.passed);
            let record = SelftestRecord { criteria, passed };
            done(
                emit(json, &record, |r| {
                    let mut s: String = r.criteria.iter().map(|c| format!("{}\n", c.line())).collect();
                    s.push_str(if r.passed { "result: PASS\n" } else { "result: FAIL\n" });
                    s
                }),
                passed,
            )
        }
    }
}

fn render_ext(r: &ExtRecord) -> String {
    let mut rows = vec![
        ("source", r.source.clone()),
        ("target", r.target.clone()),
        ("value", r.value.to_string()),
        ("case", r.case.to_string()),
    ];
    if let Some(c) = &r.connectors {
        rows.push(("connectors", render_connectors(c)));
    }
    for w in &r.warnings {
        rows.push(("warning", w.clone()));
    }
    match &r.oracle {
        Some(OracleRecord::Ran { bound, outcome, agrees }) => rows.push((
            "oracle",
            format!("{outcome} at bound {bound}: {}", if *agrees { "AGREE" } else { "DISAGREE" }),
        )),
        Some(OracleRecord::Skipped { reason }) => rows.push(("oracle", format!("skipped ({reason})"))),
        None => {}
    }
    aligned(&rows)
}

fn render_table(r: &TableRecord) -> String {
    let labels: Vec<String> = r.modules.iter().enumerate().map(|(i, m)| format!("[{i}] {m}")).collect();
    let cells: Vec<Vec<String>> = r
        .cells
        .iter()
        .map(|row| row.iter().map(Dim::to_string).collect())
        .collect();
    let corner = "source \\ target";
    let label_w = labels.iter().map(String::len).chain([corner.len()]).max().unwrap_or(0);
    let col_w = cells.iter().flatten().map(String::len).chain([3]).max().unwrap_or(3);
    let mut s = format!("{corner:<label_w$}");
    for j in 0..labels.len() {
        s.push_str(&format!("  {:>col_w$}", format!("[{j}]")));
    }
    s.push('\n');
    for (label, row) in labels.iter().zip(&cells) {
        s.push_str(&format!("{label:<label_w$}"));
        for c in row {
            s.push_str(&format!("  {c:>col_w$}"));
        }
        s.push('\n');
    }
    s
}
