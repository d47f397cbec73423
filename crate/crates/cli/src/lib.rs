//! The `leavitt` command line.
//!
//! Exit codes: 0 success, 2 graph not trimmable, 3 a check failed, 64 usage
//! error, 65 malformed input (graph, expression or descriptor), 66 unreadable
//! input file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use leavitt::graph::{Graph, TrimmabilityReport};
use leavitt::lpa::text::{parse_element, parse_tensor};
use leavitt::morphisms::{AnyMap, DescriptorError, HomDescriptor};
use leavitt::verify::oracle::{basis_rank, compare, random_path_word, random_word, OracleModel};
use leavitt::verify::{verify_theorem, PullbackReport, Status, TruncationWindow, VerifyError};
use leavitt::{Element, Lpa, Rational, SpecialEdgeChoice, TensorElement};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_TRIMMABLE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "leavitt", version, about = "Leavitt path algebras of finite graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether removing the loop vertex v0 leaves a trimmable pair.
    CheckTrimmable {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        v0: String,
    },
    /// Print the normal form of an expression.
    Normalize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        expr: String,
        /// Special edges as `vertex=edge`, comma separated.
        #[arg(long, value_delimiter = ',')]
        special: Vec<String>,
    },
    /// List the normal-form monomials of length at most --max-len.
    Basis {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_delimiter = ',')]
        special: Vec<String>,
    },
    /// Apply a homomorphism given by a descriptor file to an expression.
    ApplyHom {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Check the pullback square of a trimmable pair on a finite window.
    VerifyPullback {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        v0: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        slack_len: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: i64,
        /// Descriptor replacing one of the four maps; may be repeated.
        #[arg(long = "override")]
        overrides: Vec<PathBuf>,
    },
    /// Compare the normal-form basis with the brute-force quotient.
    OracleRank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Random words to compare pairwise (0 skips the comparison).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// An error together with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.to_string(),
        }
    }

    fn data(m: impl ToString) -> Self {
        Failure {
            code: EXIT_DATA,
            message: m.to_string(),
        }
    }
}

impl From<DescriptorError> for Failure {
    fn from(e: DescriptorError) -> Self {
        match e {
            DescriptorError::Io { .. } => Failure {
                code: EXIT_NO_INPUT,
                message: e.to_string(),
            },
            other => Failure::data(other),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    code: i32,
}

/// Runs the command line and returns the exit code. Reports go to `out`,
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => {
            let body = match cli.format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("reports serialize") + "\n",
            };
            let _ = out.write_all(body.as_bytes());
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::CheckTrimmable { graph, v0 } => check_trimmable(&load_graph(graph)?, v0),
        Command::Normalize { graph, expr, special } => normalize(&algebra(load_graph(graph)?, special)?, expr),
        Command::Basis {
            graph,
            max_len,
            special,
        } => basis(&algebra(load_graph(graph)?, special)?, *max_len),
        Command::ApplyHom { hom, expr } => apply_hom(hom, expr),
        Command::VerifyPullback {
            graph,
            v0,
            max_len,
            slack_len,
            max_degree,
            overrides,
        } => {
            let window = TruncationWindow::new(*max_len, *slack_len, *max_degree).map_err(Failure::usage)?;
            verify(&load_graph(graph)?, v0, window, overrides)
        }
        Command::OracleRank {
            graph,
            max_len,
            samples,
            seed,
        } => oracle_rank(&load_graph(graph)?, *max_len, *samples, *seed),
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_NO_INPUT,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Graph::from_json(&text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn algebra(g: Graph, special: &[String]) -> Result<Arc<Lpa>, Failure> {
    if special.is_empty() {
        return Ok(Lpa::new(g));
    }
    let mut pairs = Vec::new();
    for s in special {
        let (v, e) = s
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--special expects vertex=edge, got `{s}`")))?;
        pairs.push((v.trim(), e.trim()));
    }
    let choice = SpecialEdgeChoice::from_names(&g, pairs).map_err(Failure::data)?;
    Lpa::with_choice(g, choice).map_err(Failure::data)
}

fn graph_summary(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edge_ids()
        .map(|e| format!("{}: {} -> {}", g.edge_name(e), g.vertex_name(g.src(e)), g.vertex_name(g.tgt(e))))
        .collect();
    let vertices: Vec<&str> = g.vertex_ids().map(|v| g.vertex_name(v)).collect();
    format!("vertices {}; edges {}", vertices.join(", "), if edges.is_empty() { "none".to_string() } else { edges.join(", ") })
}

fn trimmability_json(r: &TrimmabilityReport) -> Value {
    json!({
        "v0": r.v0,
        "trimmable": r.verdict,
        "loop_edge": r.loop_edge,
        "failure": r.failure,
        "trimmed": r.trimmed.as_ref().map(Graph::to_file),
        "unlooped": r.unlooped.as_ref().map(Graph::to_file),
    })
}

fn trimmability_text(r: &TrimmabilityReport) -> String {
    let mut s = String::new();
    if r.verdict {
        let x0 = r.loop_edge.as_deref().unwrap_or_default();
        let _ = writeln!(s, "trimmable at {}: yes", r.v0);
        let _ = writeln!(s, "loop: {x0}");
        if let Some(g) = &r.trimmed {
            let _ = writeln!(s, "Q' ({} removed): {}", r.v0, graph_summary(g));
        }
        if let Some(g) = &r.unlooped {
            let _ = writeln!(s, "Q'' ({x0} removed): {}", graph_summary(g));
        }
    } else {
        let _ = writeln!(s, "trimmable at {}: no", r.v0);
        if let Some(f) = &r.failure {
            let _ = writeln!(s, "failed: {f}");
        }
    }
    s
}

fn check_trimmable(g: &Graph, v0: &str) -> Result<Output, Failure> {
    let r = g.is_trimmable(v0).map_err(Failure::data)?;
    Ok(Output {
        text: trimmability_text(&r),
        json: trimmability_json(&r),
        code: if r.verdict { EXIT_OK } else { EXIT_NOT_TRIMMABLE },
    })
}

fn normalize(lpa: &Arc<Lpa>, expr: &str) -> Result<Output, Failure> {
    let (normal, degrees): (String, Vec<(i64, String)>) = if expr.contains('@') {
        let t: TensorElement<Rational> = parse_tensor(lpa, expr).map_err(Failure::data)?;
        let parts = t.degree_split().into_iter().map(|(d, e)| (d, e.to_string())).collect();
        (t.to_string(), parts)
    } else {
        let e: Element<Rational> = parse_element(lpa, expr).map_err(Failure::data)?;
        let parts = e.degree_split().into_iter().map(|(d, e)| (d, e.to_string())).collect();
        (e.to_string(), parts)
    };
    let by_degree: serde_json::Map<String, Value> =
        degrees.iter().map(|(d, e)| (d.to_string(), Value::String(e.clone()))).collect();
    Ok(Output {
        text: format!("{normal}\n"),
        json: json!({"expression": expr, "normal_form": normal, "degrees": by_degree}),
        code: EXIT_OK,
    })
}

fn basis(lpa: &Arc<Lpa>, max_len: usize) -> Result<Output, Failure> {
    let g = lpa.graph();
    let mons = lpa.basis_monomials(max_len);
    let mut text = String::new();
    let _ = writeln!(text, "{} monomials of length at most {max_len}", mons.len());
    for m in &mons {
        let _ = writeln!(text, "{:>4}  {}", m.degree(), m.display(g));
    }
    let list: Vec<Value> = mons
        .iter()
        .map(|m| json!({"monomial": m.display(g), "degree": m.degree(), "length": m.len()}))
        .collect();
    Ok(Output {
        text,
        json: json!({
            "max_len": max_len,
            "special_edges": lpa.special().describe(g),
            "count": mons.len(),
            "monomials": list,
        }),
        code: EXIT_OK,
    })
}

fn apply_hom(hom: &Path, expr: &str) -> Result<Output, Failure> {
    let (d, g) = HomDescriptor::load(hom)?;
    let map: AnyMap<Rational> = d.build(g)?;
    let report = map.report();
    if let Some(bad) = report.first_failure() {
        return Err(Failure {
            code: EXIT_CHECK_FAILED,
            message: format!(
                "{} is not a homomorphism: {}",
                map.name(),
                bad.failure.clone().unwrap_or_default()
            ),
        });
    }
    let a: Element<Rational> = parse_element(map.domain(), expr).map_err(Failure::data)?;
    let image = map.apply_to_text(&a).map_err(Failure::data)?;
    Ok(Output {
        text: format!("{image}\n"),
        json: json!({
            "map": map.name(),
            "input": a.to_string(),
            "image": image,
            "graded": report.graded,
            "vertex_images_nonzero": report.vertex_images_nonzero,
        }),
        code: EXIT_OK,
    })
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::WindowBoundary => "WINDOW-BOUNDARY",
    }
}

fn pullback_text(r: &PullbackReport) -> String {
    let mut s = String::new();
    let w = &r.window;
    let _ = writeln!(
        s,
        "window: length {}, slack length {}, degrees {}..{}",
        w.max_len, w.slack_len, -w.max_degree, w.max_degree
    );
    let _ = writeln!(s, "loop: {} at {}", r.loop_edge, r.v0);
    let _ = writeln!(
        s,
        "special edges: {} (rerun with {})",
        r.special_edges.join(", "),
        r.rotated_special_edges.join(", ")
    );
    for c in &r.checks {
        let _ = write!(s, "{:<27} {:<15} {:>8.3}s", c.name, status_text(c.status), c.seconds);
        if let Some(wit) = &c.witness {
            let _ = write!(s, "  witness: {wit}");
        }
        if c.status != Status::Pass {
            if let Some(d) = &c.detail {
                let _ = write!(s, "  ({d})");
            }
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "result: {} (exit {}, {:.3}s)",
        if r.passed { "pass" } else { "fail" },
        r.exit_code,
        r.seconds
    );
    s
}

fn verify(g: &Graph, v0: &str, window: TruncationWindow, overrides: &[PathBuf]) -> Result<Output, Failure> {
    let mut descriptors = Vec::new();
    for path in overrides {
        let (d, dg) = HomDescriptor::load(path)?;
        if dg.to_file() != g.to_file() {
            return Err(Failure::data(format!(
                "{} describes a map over a different graph",
                path.display()
            )));
        }
        if d.v0.as_deref().is_some_and(|v| v != v0) {
            return Err(Failure::data(format!("{} uses a different v0", path.display())));
        }
        descriptors.push(d);
    }
    match verify_theorem::<Rational>(g, v0, window, &descriptors) {
        Ok(r) => Ok(Output {
            text: pullback_text(&r),
            json: serde_json::to_value(&r).expect("reports serialize"),
            code: r.exit_code,
        }),
        Err(VerifyError::NotTrimmable(r)) => Ok(Output {
            text: trimmability_text(&r),
            json: trimmability_json(&r),
            code: EXIT_NOT_TRIMMABLE,
        }),
        Err(VerifyError::BadWindow(m)) => Err(Failure::usage(m)),
        Err(e) => Err(Failure::data(e)),
    }
}

fn oracle_rank(g: &Graph, max_len: usize, samples: usize, seed: u64) -> Result<Output, Failure> {
    let model: OracleModel<Rational> = OracleModel::build(g, max_len).map_err(Failure::usage)?;
    let lpa = Lpa::new(g.clone());
    let count = lpa.basis_monomials(max_len).len();
    let independent_rank = basis_rank(&lpa, &model).map_err(Failure::data)?;
    let mut ok = model.rank() == count && independent_rank == count;

    let agreement = if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<_> = (0..samples)
            .map(|i| {
                if i % 2 == 0 {
                    random_path_word(g, max_len, &mut rng)
                } else {
                    random_word(g, max_len, &mut rng)
                }
            })
            .collect();
        let a = compare(&lpa, &model, &words).map_err(Failure::data)?;
        ok &= a.agrees();
        Some(a)
    } else {
        None
    };

    let mut text = String::new();
    let _ = writeln!(text, "window: words of length at most {max_len} ({} words)", model.num_words());
    let _ = writeln!(text, "oracle rank: {}", model.rank());
    let _ = writeln!(text, "normal-form monomials: {count}");
    let _ = writeln!(text, "oracle rank of those monomials: {independent_rank}");
    if let Some(a) = &agreement {
        let _ = writeln!(
            text,
            "random words: {} (seed {seed}), {} normal-form classes, {} oracle classes, {}",
            a.words,
            a.normal_form_classes,
            a.oracle_classes,
            match &a.mismatch {
                None => "all pairs agree".to_string(),
                Some(m) => format!("disagree on {} vs {}", m.first, m.second),
            }
        );
    }
    let _ = writeln!(text, "result: {}", if ok { "agree" } else { "DISAGREE" });
    Ok(Output {
        text,
        json: json!({
            "max_len": max_len,
            "words": model.num_words(),
            "relations": model.num_relations(),
            "oracle_rank": model.rank(),
            "basis_count": count,
            "basis_rank": independent_rank,
            "seed": seed,
            "samples": agreement,
            "agree": ok,
        }),
        code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}
