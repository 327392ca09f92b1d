use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwfs_core::io::{
    functor_to_dot, groupoid_to_dot, parse_document, serialize_document, DiagnosticDocument, Document, DocumentError,
    FactorizationDocument, FillersDocument, FunctorDocument, PathDocument, PullbackDocument,
};
use gwfs_core::oracle::{find_fillers, verify_wfs, SearchBudget, SizeBounds, DEFAULT_SEED};
use gwfs_core::{factorize, path_object, pullback, solve_lifting, Error, Functor, Groupoid};

#[derive(Parser)]
#[command(name = "gwfs", version, about = "Weak factorization systems on finite groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every input document is well formed and lawful.
    Validate(Common),
    /// Pull a fibration back along a functor: `--in f --in p`.
    Pullback(Common),
    /// Path object of a fibration.
    Path(Common),
    /// Factor a functor as an anodyne map followed by a fibration.
    Factorize(Common),
    /// Solve a lifting problem.
    Lift {
        #[command(flatten)]
        common: Common,
        /// Enumerate every filler instead of constructing one.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the seeded law suite against the oracle.
    VerifyWfs {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = SizeBounds::default().max_objects)]
        max_objects: usize,
        #[arg(long, default_value_t = SizeBounds::default().max_arrows)]
        max_arrows: usize,
    },
    /// Render a groupoid, functor or fibration for Graphviz.
    ExportDot(Common),
}

#[derive(Args)]
struct Common {
    /// Input document.
    #[arg(long = "in", value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Maximum candidates for oracle searches.
    #[arg(long, value_name = "N")]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

enum Failure {
    /// Exit code 1.
    Invalid(String),
    /// Exit code 2.
    Usage(String),
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// A result document, the graph to draw for `--format dot`, and whether
/// the command succeeded.
struct Output {
    document: Document,
    graph: Option<Graph>,
    ok: bool,
}

enum Graph {
    Groupoid(std::sync::Arc<Groupoid>),
    Functor(Functor),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            if let Some(out) = out_from_raw_args() {
                let _ = write_diagnostic(&out, "usage", &e.kind().to_string());
            }
            return ExitCode::from(2);
        }
    };
    let (name, common) = match &cli.command {
        Command::Validate(c) => ("validate", c),
        Command::Pullback(c) => ("pullback", c),
        Command::Path(c) => ("path", c),
        Command::Factorize(c) => ("factorize", c),
        Command::Lift { common, .. } => ("lift", common),
        Command::VerifyWfs { common, .. } => ("verify-wfs", common),
        Command::ExportDot(c) => ("export-dot", c),
    };
    let default_format = if matches!(cli.command, Command::ExportDot(_)) { Format::Dot } else { Format::Json };
    let format = common.format.unwrap_or(default_format);

    let result = run(&cli.command, common).and_then(|output| {
        let text = render(&output, format)?;
        emit(common.out.as_deref(), &text).map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(output.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("gwfs {name}: failed; see the output document");
            ExitCode::from(1)
        }
        Err(failure) => {
            let (code, kind, message) = match failure {
                Failure::Invalid(m) => (1, "invalid", m),
                Failure::Usage(m) => (2, "usage", m),
            };
            eprintln!("gwfs {name}: {message}");
            if let Some(out) = &common.out {
                if let Err(e) = write_diagnostic(out, name, &format!("{kind}: {message}")) {
                    eprintln!("gwfs {name}: cannot write diagnostic: {e}");
                }
            }
            ExitCode::from(code)
        }
    }
}

fn out_from_raw_args() -> Option<PathBuf> {
    let args: Vec<String> = std::env::args().collect();
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--out" {
            args.get(i + 1).map(PathBuf::from)
        } else {
            a.strip_prefix("--out=").map(PathBuf::from)
        }
    })
}

fn write_diagnostic(out: &Path, command: &str, error: &str) -> std::io::Result<()> {
    let doc = Document::Diagnostic(DiagnosticDocument {
        command: command.to_string(),
        error: error.to_string(),
        details: Vec::new(),
    });
    emit(Some(out), &serialize_document(&doc))
}

// Write-then-rename so readers never see a partial file.
fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    let Some(path) = out else {
        return std::io::stdout().write_all(text.as_bytes());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn render(output: &Output, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(serialize_document(&output.document)),
        Format::Dot => match &output.graph {
            Some(Graph::Groupoid(g)) => Ok(groupoid_to_dot(g)),
            Some(Graph::Functor(f)) => Ok(functor_to_dot(f)),
            None => Err(Failure::Usage(format!("no graph to draw for a {} document", output.document.kind()))),
        },
    }
}

fn read_inputs(common: &Common, expected: usize) -> Result<Vec<Document>, Failure> {
    if expected > 0 && common.inputs.len() != expected {
        return Err(Failure::Usage(format!("expected {expected} --in file(s), got {}", common.inputs.len())));
    }
    if common.inputs.is_empty() {
        return Err(Failure::Usage("at least one --in file is required".into()));
    }
    let mut docs = Vec::new();
    for path in &common.inputs {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        docs.push(parse_document(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?);
    }
    Ok(docs)
}

fn budget(common: &Common) -> Result<SearchBudget, Failure> {
    let default = SearchBudget::default();
    match common.budget {
        None => Ok(default),
        Some(n) => SearchBudget::new(n, default.max_time).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn wrong_kind(doc: &Document, wanted: &str) -> Failure {
    Failure::Invalid(format!("expected a {wanted} document, found {}", doc.kind()))
}

fn run(command: &Command, common: &Common) -> Result<Output, Failure> {
    match command {
        Command::Validate(_) => validate(common),
        Command::Pullback(_) => {
            let docs = read_inputs(common, 2)?;
            let Document::Functor(f) = &docs[0] else { return Err(wrong_kind(&docs[0], "functor")) };
            let Document::Fibration(p) = &docs[1] else { return Err(wrong_kind(&docs[1], "fibration")) };
            let square = pullback(&f.to_functor()?, &p.to_fibration()?)?;
            Ok(Output {
                document: Document::Pullback(PullbackDocument {
                    apex: square.apex().as_ref().into(),
                    proj0: square.proj0().into(),
                    proj1: square.proj1().into(),
                }),
                graph: Some(Graph::Groupoid(square.apex().clone())),
                ok: true,
            })
        }
        Command::Path(_) => {
            let docs = read_inputs(common, 1)?;
            let Document::Fibration(p) = &docs[0] else { return Err(wrong_kind(&docs[0], "fibration")) };
            let path = path_object(&p.to_fibration()?)?;
            let verified = path.boundary().validate().is_ok()
                && path.unit().then(path.boundary().functor())? == path.diagonal();
            Ok(Output {
                document: Document::Path(PathDocument {
                    groupoid: path.groupoid().as_ref().into(),
                    unit: path.unit().into(),
                    boundary: path.boundary().into(),
                    verified,
                }),
                graph: Some(Graph::Groupoid(path.groupoid().clone())),
                ok: verified,
            })
        }
        Command::Factorize(_) => {
            let docs = read_inputs(common, 1)?;
            let Document::Functor(f) = &docs[0] else { return Err(wrong_kind(&docs[0], "functor")) };
            let fact = factorize(&f.to_functor()?)?;
            let verified = fact.is_exact() && fact.rho().validate().is_ok();
            Ok(Output {
                document: Document::Factorization(FactorizationDocument {
                    functor: fact.functor().into(),
                    mid: fact.mid().as_ref().into(),
                    lambda: fact.lambda().into(),
                    rho: fact.rho().into(),
                    verified,
                }),
                graph: Some(Graph::Groupoid(fact.mid().clone())),
                ok: verified,
            })
        }
        Command::Lift { oracle, .. } => {
            let docs = read_inputs(common, 1)?;
            let Document::Problem(p) = &docs[0] else { return Err(wrong_kind(&docs[0], "problem")) };
            let prob = p.to_problem()?;
            let (method, fillers) = if *oracle {
                ("oracle", find_fillers(&prob, budget(common)?)?)
            } else {
                ("constructive", vec![solve_lifting(&prob)?])
            };
            let verified = fillers.iter().all(|f| prob.is_filler(&f.j));
            let ok = verified && !fillers.is_empty();
            let graph = fillers.first().map(|f| Graph::Functor(f.j.clone()));
            Ok(Output {
                document: Document::Fillers(FillersDocument {
                    method: method.into(),
                    fillers: fillers.iter().map(|f| FunctorDocument::from(&f.j)).collect(),
                    verified,
                }),
                graph,
                ok,
            })
        }
        Command::VerifyWfs { seed, max_objects, max_arrows, .. } => {
            if !common.inputs.is_empty() {
                return Err(Failure::Usage("verify-wfs takes no --in files".into()));
            }
            let bounds = SizeBounds { max_objects: *max_objects, max_arrows: *max_arrows };
            let report = verify_wfs(*seed, bounds, budget(common)?)?;
            let ok = report.passed;
            Ok(Output { document: Document::Report(report), graph: None, ok })
        }
        Command::ExportDot(_) => {
            let docs = read_inputs(common, 1)?;
            let doc = docs.into_iter().next().expect("one input");
            let graph = match &doc {
                Document::Groupoid(g) => Graph::Groupoid(g.to_groupoid()?),
                Document::Functor(f) => Graph::Functor(f.to_functor()?),
                Document::Fibration(p) => Graph::Functor(p.to_fibration()?.functor().clone()),
                other => return Err(wrong_kind(other, "groupoid, functor or fibration")),
            };
            Ok(Output { document: doc, graph: Some(graph), ok: true })
        }
    }
}

fn validate(common: &Common) -> Result<Output, Failure> {
    let docs = read_inputs(common, 0)?;
    let mut details = Vec::new();
    let mut ok = true;
    let mut last = None;
    for (path, doc) in common.inputs.iter().zip(docs) {
        let checked = match &doc {
            Document::Groupoid(g) => g.to_groupoid().map(|g| Some(Graph::Groupoid(g))),
            Document::Functor(f) => f.to_functor().map(|f| Some(Graph::Functor(f))),
            Document::Fibration(p) => p.to_fibration().map(|p| Some(Graph::Functor(p.functor().clone()))),
            Document::Problem(p) => p.to_problem().map(|_| None),
            _ => Ok(None),
        };
        match checked {
            Ok(graph) => {
                details.push(format!("{}: valid {}", path.display(), doc.kind()));
                last = Some((doc, graph));
            }
            Err(e) => {
                ok = false;
                details.push(format!("{}: {e}", path.display()));
            }
        }
    }
    if ok && details.len() == 1 {
        let (document, graph) = last.expect("one valid input");
        return Ok(Output { document, graph, ok });
    }
    let error = if ok { String::new() } else { "validation failed".into() };
    Ok(Output {
        document: Document::Diagnostic(DiagnosticDocument { command: "validate".into(), error, details }),
        graph: None,
        ok,
    })
}
