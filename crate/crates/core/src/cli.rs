//! Command-line front end.
//!
//! Every command prints one JSON document (or `key: value` lines with
//! `--format text`). Exit codes: 0 on success, 1 on usage or input errors,
//! 2 when a Gröbner budget cap is hit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colorideal::{
    decide_colorable, extract_coloring, infeasibility_certificate, verify_certificate, Certificate,
    ColorError, ColoringInstance,
};
use crate::graphtools::{
    brute_force_color, generate, parse_dimacs, parse_graph_json, write_dimacs, write_graph_json,
};
use crate::graphtools::{Coloring, Family, Graph};
use crate::groebner::{reduced_groebner_basis, Budget, GroebnerError, GroebnerOptions};
use crate::polyring::{
    parse_poly, Field, FieldSpec, MonomialOrder, PolyRing, Polynomial, PrimeField, Rationals,
};

#[derive(Parser, Debug)]
#[command(
    name = "gbcolor",
    version,
    about = "Graph k-colorability via Gröbner bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write the coloring ideal generators of a graph.
    Encode(GraphArgs),
    /// Decide colorability from the reduced Gröbner basis.
    Solve(GraphArgs),
    /// Decide colorability and extract a coloring when one exists.
    Color(GraphArgs),
    /// Write a certificate (cofactors or a coloring) to --output.
    Certify(GraphArgs),
    /// Check a certificate against a generators file.
    Verify(VerifyArgs),
    /// Print the reduced Gröbner basis of a graph or of a generators file.
    Gb(GbArgs),
    /// Write a generated graph (JSON, or DIMACS with --format text).
    Gen(GenArgs),
    /// Decide colorability by exhaustive backtracking.
    Oracle(GraphArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Graph file; `.col` is DIMACS, `.json` is the JSON edge list.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generated graph, e.g. `complete:5`, `cycle:7`, `wheel:5`, `petersen`, `maximal_planar:10[:seed]`.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Number of colors.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// `rational` or `gf:P`; defaults to GF(p) for the smallest prime p ≡ 1 (mod k).
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value = "grevlex")]
    order: String,
    /// Seed for random generators that do not carry one.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_pairs: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_terms: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report wall-clock time in `elapsed_ms` (otherwise 0, keeping output reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    generators: PathBuf,
    #[arg(long)]
    certificate: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
#[group(id = "gb_source", required = true, multiple = false, args = ["input", "gen", "generators"])]
struct GbArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    gen: Option<String>,
    /// Generators file as written by `encode`; its field and order are used.
    #[arg(long)]
    generators: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    gen: String,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// The eight commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Encode,
    Solve,
    Color,
    Certify,
    Verify,
    Gb,
    Gen,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    Input(PathBuf),
    Gen(String),
    Generators(PathBuf),
    None,
}

/// Validated settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub source: GraphSource,
    pub k: usize,
    pub field: FieldSpec,
    pub order: MonomialOrder,
    pub seed: Option<u64>,
    pub budget: Budget,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub timing: bool,
    pub certificate: Option<PathBuf>,
}

impl RunConfig {
    /// Parses and validates arguments (the first item is the program name).
    pub fn from_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(argv)?;
        let invalid =
            |msg: String| clap::Error::raw(clap::error::ErrorKind::ValueValidation, msg + "\n");
        let default_solver = SolverArgs {
            k: 4,
            field: None,
            order: "grevlex".into(),
            seed: None,
            max_pairs: None,
            max_terms: None,
        };
        let (command, source, solver, out, certificate) = match cli.command {
            Cmd::Encode(a) => (Command::Encode, a.source.into(), a.solver, a.out, None),
            Cmd::Solve(a) => (Command::Solve, a.source.into(), a.solver, a.out, None),
            Cmd::Color(a) => (Command::Color, a.source.into(), a.solver, a.out, None),
            Cmd::Certify(a) => (Command::Certify, a.source.into(), a.solver, a.out, None),
            Cmd::Oracle(a) => (Command::Oracle, a.source.into(), a.solver, a.out, None),
            Cmd::Verify(a) => (
                Command::Verify,
                GraphSource::Generators(a.generators),
                default_solver,
                a.out,
                Some(a.certificate),
            ),
            Cmd::Gb(a) => {
                let source = match (a.input, a.gen, a.generators) {
                    (Some(p), _, _) => GraphSource::Input(p),
                    (_, Some(g), _) => GraphSource::Gen(g),
                    (_, _, Some(p)) => GraphSource::Generators(p),
                    _ => GraphSource::None,
                };
                (Command::Gb, source, a.solver, a.out, None)
            }
            Cmd::Gen(a) => {
                let solver = SolverArgs {
                    seed: a.seed,
                    ..default_solver
                };
                (Command::Gen, GraphSource::Gen(a.gen), solver, a.out, None)
            }
        };

        let k = solver.k as usize;
        let field = match &solver.field {
            None => FieldSpec::default_for(k),
            Some(s) => s
                .parse::<FieldSpec>()
                .map_err(|e| invalid(format!("invalid --field: {e}")))?,
        };
        if let FieldSpec::Prime(p) = field {
            if (p - 1) % k as u64 != 0 {
                return Err(invalid(format!(
                    "--field gf:{p} needs p ≡ 1 (mod {k}) to contain the colors"
                )));
            }
        }
        let order = solver
            .order
            .parse::<MonomialOrder>()
            .map_err(|e| invalid(format!("invalid --order: {e}")))?;
        let mut budget = Budget::default();
        if let Some(m) = solver.max_pairs {
            budget.max_pairs = m as usize;
        }
        if let Some(m) = solver.max_terms {
            budget.max_terms = m as usize;
        }
        if command == Command::Certify && out.output.is_none() {
            return Err(invalid(
                "certify needs --output for the certificate file".into(),
            ));
        }
        Ok(RunConfig {
            command,
            source,
            k,
            field,
            order,
            seed: solver.seed,
            budget,
            format: out.format,
            output: out.output,
            timing: out.timing,
            certificate,
        })
    }
}

impl From<Source> for GraphSource {
    fn from(s: Source) -> Self {
        match (s.input, s.gen) {
            (Some(p), _) => GraphSource::Input(p),
            (_, Some(g)) => GraphSource::Gen(g),
            _ => GraphSource::None,
        }
    }
}

/// Result document shared by solve, color, certify and oracle.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub colorable: bool,
    pub k: usize,
    pub field: String,
    pub order: String,
    pub basis_size: usize,
    pub coloring: Option<BTreeMap<usize, usize>>,
    pub certificate_path: Option<String>,
    pub elapsed_ms: u64,
}

/// Generators file: polynomial strings over `x1..x<nvars>`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorsFile {
    pub nvars: usize,
    pub k: usize,
    pub field: String,
    pub order: String,
    pub generators: Vec<String>,
}

/// Certificate file: cofactor strings aligned with the generators, or a
/// coloring keyed by 1-based vertex.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum CertificateFile {
    Cofactors(Vec<String>),
    Coloring { coloring: BTreeMap<usize, usize> },
}

impl CertificateFile {
    pub fn from_json(text: &str) -> anyhow::Result<CertificateFile> {
        #[derive(Deserialize)]
        struct ColoringDoc {
            coloring: BTreeMap<usize, usize>,
        }
        if text.trim_start().starts_with('[') {
            Ok(CertificateFile::Cofactors(serde_json::from_str(text)?))
        } else {
            let doc: ColoringDoc = serde_json::from_str(text)?;
            Ok(CertificateFile::Coloring {
                coloring: doc.coloring,
            })
        }
    }
}

/// Runs the CLI against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output and diagnostic streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::from_args(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cfg) {
        Ok(doc) => match emit(&cfg, &doc, out) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e:#}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if is_budget_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

fn is_budget_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<GroebnerError>(),
            Some(GroebnerError::BudgetExceeded { .. })
        ) || matches!(
            c.downcast_ref::<ColorError>(),
            Some(ColorError::Groebner(GroebnerError::BudgetExceeded { .. }))
        )
    })
}

/// What a command produced: a JSON document, or raw text for `gen --format text`.
enum Doc {
    Json(Value),
    Raw(String),
}

fn emit(cfg: &RunConfig, doc: &Doc, out: &mut dyn Write) -> anyhow::Result<()> {
    let text = match doc {
        Doc::Raw(s) => s.clone(),
        Doc::Json(v) => match cfg.format {
            Format::Json => serde_json::to_string(v)? + "\n",
            Format::Text => text_lines(v),
        },
    };
    // certify uses --output for the certificate itself.
    match (&cfg.output, cfg.command) {
        (Some(path), c) if c != Command::Certify => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        _ => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn text_lines(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let mut s = String::new();
    for (key, val) in map {
        match val {
            Value::String(t) => s += &format!("{key}: {t}\n"),
            Value::Array(items) => {
                s += &format!("{key}:\n");
                for item in items {
                    match item {
                        Value::String(t) => s += &format!("  {t}\n"),
                        other => s += &format!("  {other}\n"),
                    }
                }
            }
            other => s += &format!("{key}: {other}\n"),
        }
    }
    s
}

fn execute(cfg: &RunConfig) -> anyhow::Result<Doc> {
    match cfg.command {
        Command::Gen => {
            let g = load_graph(cfg)?;
            Ok(match cfg.format {
                Format::Json => Doc::Raw(write_graph_json(&g) + "\n"),
                Format::Text => Doc::Raw(write_dimacs(&g)),
            })
        }
        Command::Verify => verify(cfg).map(Doc::Json),
        Command::Gb if matches!(cfg.source, GraphSource::Generators(_)) => {
            gb_from_file(cfg).map(Doc::Json)
        }
        Command::Oracle => {
            let g = load_graph(cfg)?;
            let start = Instant::now();
            let coloring = brute_force_color(&g, cfg.k);
            Ok(Doc::Json(result_json(
                cfg,
                coloring.is_some(),
                0,
                coloring.as_ref(),
                None,
                start,
            )))
        }
        _ => {
            let g = load_graph(cfg)?;
            match cfg.field {
                FieldSpec::Rational => graph_command(cfg, g, Rationals),
                FieldSpec::Prime(p) => graph_command(cfg, g, PrimeField::new(p)?),
            }
        }
    }
}

fn load_graph(cfg: &RunConfig) -> anyhow::Result<Graph> {
    match &cfg.source {
        GraphSource::Input(path) => read_graph(path),
        GraphSource::Gen(spec) => {
            let mut family: Family = spec.parse()?;
            if let (Family::MaximalPlanar { seed, .. }, Some(s)) = (&mut family, cfg.seed) {
                if spec.split(':').count() < 3 {
                    *seed = s;
                }
            }
            Ok(generate(family)?)
        }
        GraphSource::Generators(_) | GraphSource::None => {
            bail!("this command needs --input or --gen")
        }
    }
}

/// Reads a DIMACS (`.col`) or JSON (`.json`) graph; other extensions are sniffed.
pub fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_json = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => true,
        Some(e) if e.eq_ignore_ascii_case("col") => false,
        _ => text.trim_start().starts_with('{'),
    };
    let g = if is_json {
        parse_graph_json(&text)
    } else {
        parse_dimacs(&text)
    };
    g.with_context(|| format!("parsing {}", path.display()))
}

fn graph_command<F: Field>(cfg: &RunConfig, g: Graph, field: F) -> anyhow::Result<Doc> {
    let start = Instant::now();
    let inst = ColoringInstance::new(g, cfg.k, field, cfg.order)?.with_budget(cfg.budget);
    match cfg.command {
        Command::Encode => {
            let file = GeneratorsFile {
                nvars: inst.graph().n(),
                k: cfg.k,
                field: cfg.field.to_string(),
                order: cfg.order.to_string(),
                generators: inst.generators().iter().map(ToString::to_string).collect(),
            };
            Ok(Doc::Json(serde_json::to_value(file)?))
        }
        Command::Gb => {
            let d = decide_colorable(&inst)?;
            Ok(Doc::Json(gb_json(
                cfg.k,
                &cfg.field,
                cfg.order,
                d.basis.elements(),
            )))
        }
        Command::Solve => {
            let d = decide_colorable(&inst)?;
            Ok(Doc::Json(result_json(
                cfg,
                d.colorable,
                d.basis.len(),
                None,
                None,
                start,
            )))
        }
        Command::Color => {
            let d = decide_colorable(&inst)?;
            let coloring = if d.colorable {
                Some(extract_coloring(&inst)?)
            } else {
                None
            };
            Ok(Doc::Json(result_json(
                cfg,
                d.colorable,
                d.basis.len(),
                coloring.as_ref(),
                None,
                start,
            )))
        }
        Command::Certify => {
            let d = decide_colorable(&inst)?;
            let file = if d.colorable {
                let c = extract_coloring(&inst)?;
                CertificateFile::Coloring {
                    coloring: coloring_map(&c),
                }
            } else {
                match infeasibility_certificate(&inst)? {
                    Certificate::Infeasibility(cofactors) => CertificateFile::Cofactors(
                        cofactors.iter().map(ToString::to_string).collect(),
                    ),
                    Certificate::Coloring(_) => unreachable!("infeasibility certificate"),
                }
            };
            let path = cfg.output.as_ref().expect("validated");
            fs::write(path, serde_json::to_string(&file)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            let coloring = match &file {
                CertificateFile::Coloring { coloring } => Some(coloring.clone()),
                CertificateFile::Cofactors(_) => None,
            };
            let mut res = result_doc(cfg, d.colorable, d.basis.len(), coloring, start);
            res.certificate_path = Some(path.display().to_string());
            Ok(Doc::Json(serde_json::to_value(res)?))
        }
        Command::Verify | Command::Gen | Command::Oracle => unreachable!("handled without a field"),
    }
}

fn coloring_map(c: &Coloring) -> BTreeMap<usize, usize> {
    c.colors()
        .iter()
        .enumerate()
        .map(|(v, &col)| (v + 1, col))
        .collect()
}

fn result_doc(
    cfg: &RunConfig,
    colorable: bool,
    basis_size: usize,
    coloring: Option<BTreeMap<usize, usize>>,
    start: Instant,
) -> RunResult {
    RunResult {
        colorable,
        k: cfg.k,
        field: cfg.field.to_string(),
        order: cfg.order.to_string(),
        basis_size,
        coloring,
        certificate_path: None,
        elapsed_ms: if cfg.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    }
}

fn result_json(
    cfg: &RunConfig,
    colorable: bool,
    basis_size: usize,
    coloring: Option<&Coloring>,
    certificate_path: Option<String>,
    start: Instant,
) -> Value {
    let mut res = result_doc(
        cfg,
        colorable,
        basis_size,
        coloring.map(coloring_map),
        start,
    );
    res.certificate_path = certificate_path;
    serde_json::to_value(res).expect("plain data serializes")
}

fn gb_json<F: Field>(
    k: usize,
    field: &FieldSpec,
    order: MonomialOrder,
    basis: &[Polynomial<F>],
) -> Value {
    serde_json::json!({
        "k": k,
        "field": field.to_string(),
        "order": order.to_string(),
        "basis_size": basis.len(),
        "basis": basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn read_generators_file(path: &Path) -> anyhow::Result<GeneratorsFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_generators<F: Field>(
    file: &GeneratorsFile,
    field: F,
    order: MonomialOrder,
) -> anyhow::Result<Vec<Polynomial<F>>> {
    let ring = PolyRing::new(field, file.nvars, order);
    file.generators
        .iter()
        .enumerate()
        .map(|(i, s)| parse_poly(s, &ring).with_context(|| format!("generator {}", i + 1)))
        .collect()
}

fn gb_from_file(cfg: &RunConfig) -> anyhow::Result<Value> {
    let GraphSource::Generators(path) = &cfg.source else {
        unreachable!("checked by caller")
    };
    let file = read_generators_file(path)?;
    let field: FieldSpec = file.field.parse()?;
    let order: MonomialOrder = file.order.parse()?;
    let opts = GroebnerOptions {
        track_cofactors: false,
        budget: cfg.budget,
    };
    match field {
        FieldSpec::Rational => {
            let gens = parse_generators(&file, Rationals, order)?;
            let gb = reduced_groebner_basis(&gens, order, &opts)?;
            Ok(gb_json(file.k, &field, order, gb.elements()))
        }
        FieldSpec::Prime(p) => {
            let gens = parse_generators(&file, PrimeField::new(p)?, order)?;
            let gb = reduced_groebner_basis(&gens, order, &opts)?;
            Ok(gb_json(file.k, &field, order, gb.elements()))
        }
    }
}

fn verify(cfg: &RunConfig) -> anyhow::Result<Value> {
    let GraphSource::Generators(gpath) = &cfg.source else {
        unreachable!("verify always has generators")
    };
    let file = read_generators_file(gpath)?;
    let cpath = cfg
        .certificate
        .as_ref()
        .expect("verify always has a certificate");
    let ctext =
        fs::read_to_string(cpath).with_context(|| format!("reading {}", cpath.display()))?;
    let cert = CertificateFile::from_json(&ctext).map_err(|e| {
        anyhow!(
            "{}: expected a list of cofactors or {{\"coloring\": ...}}: {e}",
            cpath.display()
        )
    })?;
    let field: FieldSpec = file.field.parse()?;
    let order: MonomialOrder = file.order.parse()?;
    let valid = match field {
        FieldSpec::Rational => verify_with(&file, &cert, Rationals, order)?,
        FieldSpec::Prime(p) => verify_with(&file, &cert, PrimeField::new(p)?, order)?,
    };
    Ok(serde_json::json!({ "valid": valid }))
}

fn verify_with<F: Field>(
    file: &GeneratorsFile,
    cert: &CertificateFile,
    field: F,
    order: MonomialOrder,
) -> anyhow::Result<bool> {
    let gens = parse_generators(file, field, order)?;
    let cert = match cert {
        CertificateFile::Cofactors(strings) => {
            let ring = PolyRing::new(field, file.nvars, order);
            let cofactors = strings
                .iter()
                .enumerate()
                .map(|(i, s)| parse_poly(s, &ring).with_context(|| format!("cofactor {}", i + 1)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            Certificate::Infeasibility(cofactors)
        }
        CertificateFile::Coloring { coloring } => {
            if coloring.keys().copied().ne(1..=file.nvars) {
                return Ok(false);
            }
            Certificate::Coloring(Coloring::new(coloring.values().copied().collect()))
        }
    };
    Ok(verify_certificate(&gens, &cert, file.k))
}
