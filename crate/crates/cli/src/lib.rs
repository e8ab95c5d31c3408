//! Command-line front end for `raag-lab`.
//!
//! Every subcommand prints one JSON report
//! `{command, inputs, results, diagnostics}` (or CSV for tables) and exits
//! with 0 on success, 2 on bad input and 3 when a resource cap is hit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use raag_lab::divergence::{self, DivergenceProfile, RhoFunction};
use raag_lab::lengths::{self, LengthReport};
use raag_lab::rank_one::{self, CentralizerKind, RankOneKind};
use raag_lab::wall::relation_matrices;
use raag_lab::{io, DefiningGraph, Error, JoinWitness, Letter, Trace, VertexSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Environment variable overriding the default state caps.
pub const CAP_ENV: &str = "RAAG_LAB_CAP";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "raag-lab", version, about = "Computations in right-angled Artin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertices, edges, join decomposition and maximal joins.
    Graph(Common),
    /// Shortlex normal form, support and cyclic reduction of a word.
    Normalize(WordArgs),
    /// Separation and join lengths with certificates.
    Lengths(LengthsArgs),
    /// Walls crossed by a word and their pairwise relations.
    Walls(WordArgs),
    /// Search a finitely generated subgroup for a rank-one element.
    Rankone(RankOneArgs),
    /// Divergence profile of the periodic geodesic through a word.
    Divergence(DivergenceArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Graph file (JSON or shorthand) or an inline shorthand such as "a-b,b-c".
    #[arg(long)]
    graph: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Debug)]
struct WordArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Args, Debug)]
struct LengthsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "sample")]
    word: Option<String>,
    /// Check the length inequality on this many random words instead.
    #[arg(long, conflicts_with = "word")]
    sample: Option<usize>,
    /// Maximal length of sampled words.
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    /// Cap on prefixes visited by the join-length search.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct RankOneArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated generator words, e.g. "ad,db".
    #[arg(long)]
    gens: String,
    #[arg(long, default_value_t = rank_one::DEFAULT_STEP_CAP)]
    steps: usize,
}

#[derive(Args, Debug)]
struct DivergenceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    word: String,
    #[arg(long, default_value = "1/2")]
    delta: String,
    #[arg(long, default_value = "2")]
    lambda: String,
    /// Radii as a range "2..6" or a list "2,4,8".
    #[arg(long, default_value = "2..6")]
    r: String,
    /// Cap on states per search.
    #[arg(long)]
    cap: Option<usize>,
    /// Also write the profile table to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Add (r, length) pairs of finite rows to the results.
    #[arg(long)]
    plot_data: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
}

enum Output {
    Json(Report),
    Csv(String),
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) => EXIT_INPUT,
            Error::ResourceCap { .. } => EXIT_CAP,
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let env_cap = std::env::var(CAP_ENV).ok();
    match execute(cli.command, env_cap.as_deref()) {
        Ok(Output::Json(report)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Ok(Output::Csv(text)) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, env_cap: Option<&str>) -> CliResult<Output> {
    let env_cap = match env_cap {
        Some(text) => Some(
            text.trim()
                .parse::<usize>()
                .map_err(|_| input_error(format!("{CAP_ENV} must be a positive integer, got {text:?}")))?,
        ),
        None => None,
    };
    match command {
        Command::Graph(c) => {
            let graph = load_graph(&c)?;
            no_csv(&c)?;
            finish(&c, cmd_graph(&graph)?)
        }
        Command::Normalize(a) => {
            let graph = load_graph(&a.common)?;
            no_csv(&a.common)?;
            finish(&a.common, cmd_normalize(&graph, &a.word)?)
        }
        Command::Lengths(a) => {
            let graph = load_graph(&a.common)?;
            let cap = a.cap.or(env_cap).unwrap_or(lengths::DEFAULT_FRONTIER_CAP);
            let report = match (&a.word, a.sample) {
                (Some(word), _) => {
                    no_csv(&a.common)?;
                    cmd_lengths(&graph, word, cap)?
                }
                (None, Some(n)) => {
                    let report = cmd_lengths_sample(&graph, n, a.max_len, a.common.seed, cap)?;
                    if a.common.format == Format::Csv {
                        return Ok(Output::Csv(sample_csv(&report.results)));
                    }
                    report
                }
                (None, None) => return Err(input_error("lengths needs --word or --sample")),
            };
            finish(&a.common, report)
        }
        Command::Walls(a) => {
            let graph = load_graph(&a.common)?;
            no_csv(&a.common)?;
            finish(&a.common, cmd_walls(&graph, &a.word)?)
        }
        Command::Rankone(a) => {
            let graph = load_graph(&a.common)?;
            no_csv(&a.common)?;
            finish(&a.common, cmd_rankone(&graph, &a.gens, a.steps)?)
        }
        Command::Divergence(a) => {
            let graph = load_graph(&a.common)?;
            let cap = a.cap.or(env_cap).unwrap_or(divergence::DEFAULT_STATE_CAP);
            let (report, profile) = cmd_divergence(&graph, &a, cap)?;
            let table = profile_csv(&profile);
            if let Some(path) = &a.csv {
                write_file(path, &table)?;
            }
            if a.common.format == Format::Csv {
                return Ok(Output::Csv(table));
            }
            finish(&a.common, report)
        }
    }
}

fn finish(common: &Common, mut report: Report) -> CliResult<Output> {
    if common.threads == 0 {
        return Err(input_error("--threads must be at least 1"));
    }
    if let Value::Object(map) = &mut report.inputs {
        map.insert("graph".into(), Value::String(common.graph.clone()));
    }
    Ok(Output::Json(report))
}

fn no_csv(common: &Common) -> CliResult<()> {
    if common.format == Format::Csv {
        return Err(input_error("CSV output is only available for tabular results (divergence, lengths --sample)"));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(common: &Common) -> CliResult<Arc<DefiningGraph>> {
    let path = Path::new(&common.graph);
    let graph = if path.is_file() {
        io::read_graph_file(path)?
    } else {
        io::parse_graph_text(&common.graph)?
    };
    if graph.is_empty() {
        return Err(input_error("graph has no vertices"));
    }
    Ok(Arc::new(graph))
}

fn connectivity_warning(graph: &DefiningGraph, diagnostics: &mut Vec<String>) {
    if !graph.is_connected() {
        diagnostics.push(format!(
            "defining graph is disconnected ({} components); join length and divergence results assume a connected graph",
            graph.components(graph.all()).len()
        ));
    }
}

fn set_json(graph: &DefiningGraph, s: VertexSet) -> Value {
    json!(graph.set_names(s))
}

fn join_json(graph: &DefiningGraph, j: &JoinWitness) -> Value {
    json!([set_json(graph, j.side_a), set_json(graph, j.side_b)])
}

fn word_json(t: &Trace) -> Value {
    Value::String(t.to_string())
}

fn parse_word(graph: &Arc<DefiningGraph>, word: &str) -> CliResult<Trace> {
    Ok(Trace::parse(graph, word)?)
}

fn cmd_graph(graph: &DefiningGraph) -> CliResult<Report> {
    let edges: Vec<[&str; 2]> = graph.edges().map(|(u, v)| [graph.name(u), graph.name(v)]).collect();
    let joins = graph.maximal_joins()?;
    let decomposition = graph.join_decomposition()?;
    let mut diagnostics = Vec::new();
    connectivity_warning(graph, &mut diagnostics);
    Ok(Report {
        command: "graph".into(),
        inputs: json!({}),
        results: json!({
            "vertices": graph.names(),
            "edges": edges,
            "connected": graph.is_connected(),
            "join_decomposition": decomposition.map(|j| join_json(graph, &j)),
            "maximal_joins": joins.iter().map(|j| join_json(graph, j)).collect::<Vec<_>>(),
            "shorthand": io::graph_to_shorthand(graph),
        }),
        diagnostics,
    })
}

fn cmd_normalize(graph: &Arc<DefiningGraph>, word: &str) -> CliResult<Report> {
    let g = parse_word(graph, word)?;
    let reduction = g.cyclic_reduce();
    let centralizer = if g.is_identity() {
        Value::Null
    } else {
        let class = rank_one::centralizer_classification(&g)?;
        json!({
            "kind": match class.kind {
                CentralizerKind::Cyclic => "cyclic",
                CentralizerKind::JoinContained => "join-contained",
            },
            "witness": class.witness.map(|j| join_json(graph, &j)),
        })
    };
    Ok(Report {
        command: "normalize".into(),
        inputs: json!({ "word": word }),
        results: json!({
            "normal_form": word_json(&g),
            "length": g.len(),
            "inverse": word_json(&g.invert()),
            "support": set_json(graph, g.support()),
            "cyclic_core": word_json(&reduction.core),
            "conjugator": word_json(&reduction.conjugator),
            "centralizer": centralizer,
        }),
        diagnostics: vec![],
    })
}

fn length_json(graph: &DefiningGraph, report: &LengthReport) -> Value {
    json!({
        "sep": report.separation,
        "join": report.join,
        "inequality_holds": report.inequality_holds,
        "separation_certificate": report.certificate.walls.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "certificate_positions": report.certificate.positions,
        "factorization": report
            .factorization
            .pieces
            .iter()
            .zip(&report.factorization.witness_joins)
            .map(|(p, j)| json!({ "piece": word_json(p), "join": join_json(graph, j) }))
            .collect::<Vec<_>>(),
    })
}

fn cmd_lengths(graph: &Arc<DefiningGraph>, word: &str, cap: usize) -> CliResult<Report> {
    let g = parse_word(graph, word)?;
    let joins = graph.maximal_joins()?;
    let report = lengths::check_length_inequality_with(&g, &joins, cap)?;
    let mut diagnostics = Vec::new();
    connectivity_warning(graph, &mut diagnostics);
    if !report.inequality_holds {
        diagnostics.push("length inequality violated".into());
    }
    let mut results = length_json(graph, &report);
    results["normal_form"] = word_json(&g);
    Ok(Report {
        command: "lengths".into(),
        inputs: json!({ "word": word, "cap": cap }),
        results,
        diagnostics,
    })
}

fn random_word(graph: &Arc<DefiningGraph>, rng: &mut ChaCha8Rng, max_len: usize) -> Trace {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| Letter::new(rng.gen_range(0..graph.len()), rng.gen_bool(0.5)))
        .collect();
    Trace::normalize(graph, &letters).expect("letters lie in the graph")
}

fn cmd_lengths_sample(
    graph: &Arc<DefiningGraph>,
    count: usize,
    max_len: usize,
    seed: u64,
    cap: usize,
) -> CliResult<Report> {
    let joins = graph.maximal_joins()?;
    let covered = joins.iter().fold(VertexSet::EMPTY, |acc, j| acc.union(j.vertices()));
    if covered != graph.all() {
        return Err(input_error(format!(
            "vertices {} lie in no join; join length is undefined for words using them",
            graph.format_set(graph.all().difference(covered))
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    let mut violations = 0;
    for _ in 0..count {
        let g = random_word(graph, &mut rng, max_len);
        let report = lengths::check_length_inequality_with(&g, &joins, cap)?;
        violations += usize::from(!report.inequality_holds);
        rows.push(json!({
            "word": word_json(&g),
            "sep": report.separation,
            "join": report.join,
            "inequality_holds": report.inequality_holds,
        }));
    }
    let mut diagnostics = Vec::new();
    connectivity_warning(graph, &mut diagnostics);
    Ok(Report {
        command: "lengths".into(),
        inputs: json!({ "sample": count, "max_len": max_len, "seed": seed, "cap": cap }),
        results: json!({ "samples": rows, "violations": violations }),
        diagnostics,
    })
}

fn sample_csv(results: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["word", "sep", "join", "inequality_holds"]).expect("in-memory write");
    for row in results["samples"].as_array().into_iter().flatten() {
        w.write_record([
            row["word"].as_str().unwrap_or("").to_string(),
            row["sep"].to_string(),
            row["join"].to_string(),
            row["inequality_holds"].to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn cmd_walls(graph: &Arc<DefiningGraph>, word: &str) -> CliResult<Report> {
    let g = parse_word(graph, word)?;
    let walls = g.walls_crossed();
    let (meets, separated) = relation_matrices(&walls);
    Ok(Report {
        command: "walls".into(),
        inputs: json!({ "word": word }),
        results: json!({
            "normal_form": word_json(&g),
            "walls": walls
                .iter()
                .map(|w| json!({ "type": graph.name(w.wall_type()), "rep": word_json(w.rep()) }))
                .collect::<Vec<_>>(),
            "intersects": meets,
            "strongly_separated": separated,
        }),
        diagnostics: vec![],
    })
}

fn cmd_rankone(graph: &Arc<DefiningGraph>, gens: &str, steps: usize) -> CliResult<Report> {
    let words: Vec<&str> = gens.split(',').map(str::trim).collect();
    let generators = words
        .iter()
        .map(|w| parse_word(graph, w))
        .collect::<CliResult<Vec<_>>>()?;
    let result = rank_one::find_rank_one_capped(&generators, steps)?;
    let kind = match result.kind {
        RankOneKind::RankOneElement => "rank_one_element",
        RankOneKind::ContainedInJoin => "contained_in_join",
        RankOneKind::Undecided => "undecided",
    };
    Ok(Report {
        command: "rankone".into(),
        inputs: json!({ "gens": words, "steps": steps }),
        results: json!({
            "kind": kind,
            "element": result.element.as_ref().map(word_json),
            "cyclic_core": result.element.as_ref().map(|x| word_json(&x.cyclic_reduce().core)),
            "witness": result.witness.map(|j| join_json(graph, &j)),
            "conjugator": result.conjugator.as_ref().map(word_json),
            "steps": result.steps,
        }),
        diagnostics: result.diagnostics,
    })
}

fn parse_radii(text: &str) -> CliResult<Vec<u32>> {
    let bad = || input_error(format!("--r expects a range like 2..6 or a list like 2,4,8, got {text:?}"));
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim();
        let hi: u32 = match hi.strip_prefix('=') {
            Some(h) => h.trim().parse().map_err(|_| bad())?,
            None => hi.parse().map_err(|_| bad())?,
        };
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| bad()))
        .collect()
}

fn cmd_divergence(graph: &Arc<DefiningGraph>, a: &DivergenceArgs, cap: usize) -> CliResult<(Report, DivergenceProfile)> {
    let w = parse_word(graph, &a.word)?;
    let rho = RhoFunction::parse(&a.delta, &a.lambda)?;
    let radii = parse_radii(&a.r)?;
    let profile = divergence::divergence_profile(&w, rho, &radii, cap)?;
    let mut diagnostics = Vec::new();
    connectivity_warning(graph, &mut diagnostics);
    let capped: Vec<u32> = profile.rows.iter().filter(|r| r.length.is_none() && !r.exact).map(|r| r.r).collect();
    if !capped.is_empty() {
        diagnostics.push(format!("state cap {cap} reached for r = {capped:?}"));
    }
    let growth = match divergence::classify_growth(&profile) {
        Ok(fit) => json!({ "class": fit.class.to_string(), "exponent": fit.exponent, "rows_used": fit.rows_used }),
        Err(e) => {
            diagnostics.push(format!("growth not classified: {e}"));
            Value::Null
        }
    };
    let rows: Vec<Value> = profile
        .rows
        .iter()
        .map(|row| json!({ "r": row.r, "rho": row.rho, "length": row.length, "states": row.states, "exact": row.exact }))
        .collect();
    let mut results = json!({ "rows": rows, "growth": growth });
    if a.plot_data {
        let points: Vec<[usize; 2]> = profile
            .rows
            .iter()
            .filter_map(|row| row.length.map(|l| [row.r as usize, l]))
            .collect();
        results["plot_data"] = json!(points);
    }
    let report = Report {
        command: "divergence".into(),
        inputs: json!({
            "word": a.word,
            "delta": rho.delta().to_string(),
            "lambda": rho.lambda().to_string(),
            "r": radii,
            "cap": cap,
        }),
        results,
        diagnostics,
    };
    Ok((report, profile))
}

fn profile_csv(profile: &DivergenceProfile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "rho", "length", "states", "exact"]).expect("in-memory write");
    for row in &profile.rows {
        let length = row.length.map(|l| l.to_string()).unwrap_or_default();
        w.write_record([row.r.to_string(), row.rho.to_string(), length, row.states.to_string(), row.exact.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
