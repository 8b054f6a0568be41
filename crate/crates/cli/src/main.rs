//! `whynot`: validate data, run queries and explain missing answers.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use whynot_core::concept::{enumerate_concepts, EnumerateOptions, Extension, Fragment};
use whynot_core::explain::{
    card_maximal, check_mge, check_mge_oi, compare_generality, compute_mge_os, exhaustive_mge, incremental_mge,
    instance_universe, is_explanation, Generality, minimize_equivalent_length, os_candidates, shortest_mge, Explanation,
    WhyNotInstance, DEFAULT_BUDGET,
};
use whynot_core::obda::load_obda;
use whynot_core::ontology::{
    check_consistency, load_ontology, FiniteUniverse, InstanceOntology, Ontology, SchemaOntology, WithUniverse,
};
use whynot_core::query::{eval_ucq, Ucq};
use whynot_core::relational::{load_instance, load_schema, validate_constraints, Constraint, Instance, Schema};
use whynot_core::{format_tuple, Constant, Error, Tuple};

#[derive(Parser)]
#[command(name = "whynot", version, about = "Explain why a tuple is missing from a query answer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the instance against the schema's constraints.
    Validate(DataArgs),
    /// Print the answers of a query.
    Query(QueryArgs),
    /// Explain why a tuple is not an answer.
    Explain(ExplainArgs),
    /// Inspect an ontology.
    Ontology {
        #[command(subcommand)]
        action: OntologyCommand,
    },
}

#[derive(Subcommand)]
enum OntologyCommand {
    /// List concepts, their extensions on the instance and subsumptions.
    Show(ShowArgs),
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    schema: PathBuf,
    /// Directory with one CSV file per relation.
    #[arg(long)]
    data: PathBuf,
    /// Keep only these constraint kinds from the schema.
    #[arg(long, value_delimiter = ',')]
    constraints: Option<Vec<ConstraintKind>>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Query text, or a file holding it.
    #[arg(long)]
    query: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Finite ontology in JSON.
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// DL-Lite TBox with GAV mappings in JSON.
    #[arg(long)]
    obda: Option<PathBuf>,
    /// Ontology derived from the instance or from the schema.
    #[arg(long, value_enum)]
    derive: Option<Derive>,
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// The missing tuple, comma separated.
    #[arg(long)]
    tuple: String,
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "selection-free")]
    fragment: Fragment,
    /// Precomputed answers as a headerless CSV file.
    #[arg(long)]
    answers: Option<PathBuf>,
    /// Recompute the answers and compare them with --answers.
    #[arg(long, requires = "answers")]
    verify_ans: bool,
    /// All most-general explanations.
    #[arg(long, conflicts_with_all = ["shortest", "card"])]
    all: bool,
    /// A most-general explanation of least length.
    #[arg(long, conflicts_with = "card")]
    shortest: bool,
    /// An explanation with the largest extensions.
    #[arg(long)]
    card: bool,
    /// Shorten concepts while keeping their extensions.
    #[arg(long)]
    minimize: bool,
    /// Re-verify every printed explanation.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct ShowArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "selection-free")]
    fragment: Fragment,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Derive {
    Instance,
    Schema,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintKind {
    Fds,
    Ids,
    Views,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    One,
    All,
    Shortest,
    Card,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Syntax(_)
            | Error::Format { .. }
            | Error::UnknownRelation(_)
            | Error::UnknownAttribute { .. }
            | Error::CyclicViews(_)
            | Error::Arity { .. }
            | Error::IllFormedQuery(_)
            | Error::UnknownConcept(_)
            | Error::ArityMismatch { .. }
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::ConstraintViolation(_) => 3,
            Error::UnsupportedConstraintClass(_) | Error::UnsupportedFragment { .. } => 4,
            Error::NoSolution(_) => 5,
            Error::NoExplanation => 6,
            Error::BudgetExceeded { .. } | Error::ChaseBoundExceeded(_) => 7,
            Error::TuplePresent(_) => 8,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = std::result::Result<(), Failure>;

type Check<'a, C> = dyn Fn(&Explanation<C>) -> whynot_core::Result<bool> + 'a;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(args) => validate(&args),
        Command::Query(args) => query(&args),
        Command::Explain(args) => explain(&args),
        Command::Ontology {
            action: OntologyCommand::Show(args),
        } => show(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn budget() -> std::result::Result<usize, Failure> {
    match std::env::var("WHYNOT_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| fail(2, format!("WHYNOT_BUDGET must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn schema_of(args: &DataArgs) -> std::result::Result<Schema, Failure> {
    let schema = load_schema(&args.schema)?;
    Ok(match &args.constraints {
        None => schema,
        Some(kinds) => schema.restricted(|c| {
            let kind = match c {
                Constraint::Fd(_) => ConstraintKind::Fds,
                Constraint::Id(_) => ConstraintKind::Ids,
                Constraint::View(_) => ConstraintKind::Views,
            };
            kinds.contains(&kind)
        }),
    })
}

fn instance_of(args: &DataArgs) -> std::result::Result<Instance, Failure> {
    Ok(load_instance(schema_of(args)?, &args.data)?)
}

fn read_query(text: &str) -> std::result::Result<Ucq, Failure> {
    let path = Path::new(text);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| fail(1, format!("{}: {e}", path.display())))?
    } else {
        text.to_string()
    };
    Ok(Ucq::parse(&text)?)
}

fn parse_row(line: &str) -> std::result::Result<Tuple, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(line.as_bytes());
    match reader.records().next() {
        Some(record) => Ok(record.map_err(Error::from)?.iter().map(Constant::parse).collect()),
        None => Ok(Vec::new()),
    }
}

fn read_answers(path: &Path) -> std::result::Result<BTreeSet<Tuple>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(Error::from)?;
    let mut out = BTreeSet::new();
    for record in reader.records() {
        out.insert(record.map_err(Error::from)?.iter().map(Constant::parse).collect());
    }
    Ok(out)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn tuple_json(t: &[Constant]) -> Value {
    Value::Array(t.iter().map(|c| Value::String(c.to_string())).collect())
}

fn extension_json(e: &Extension) -> Value {
    match e {
        Extension::All => Value::String("all".into()),
        Extension::Finite(s) => Value::Array(s.iter().map(|c| Value::String(c.to_string())).collect()),
    }
}

fn validate(args: &DataArgs) -> Outcome {
    let instance = instance_of(args)?;
    let report = validate_constraints(instance.schema(), instance.data());
    for r in &report.results {
        println!("ok  {}", r.constraint);
    }
    println!("{} constraints satisfied", report.results.len());
    Ok(())
}

fn query(args: &QueryArgs) -> Outcome {
    let instance = instance_of(&args.data)?;
    let q = read_query(&args.query)?;
    q.check(instance.schema())?;
    let answers = eval_ucq(&q, &instance)?;
    match args.format {
        Format::Text => {
            for t in &answers {
                println!("{}", format_tuple(t));
            }
            println!("{} answers", answers.len());
        }
        Format::Json => print_json(&json!({ "answers": answers.iter().map(|t| tuple_json(t)).collect::<Vec<_>>() })),
    }
    Ok(())
}

struct Found<C> {
    explanations: Vec<Explanation<C>>,
    degree: Option<String>,
}

fn search<O: FiniteUniverse>(
    w: &WhyNotInstance<'_>,
    o: &O,
    mode: Mode,
    budget: usize,
) -> std::result::Result<Found<O::Concept>, Failure> {
    let found = match mode {
        Mode::One | Mode::All => {
            let mut all = exhaustive_mge(w, o, budget)?;
            if all.is_empty() {
                return Err(Error::NoExplanation.into());
            }
            if mode == Mode::One {
                all.truncate(1);
            }
            Found {
                explanations: all,
                degree: None,
            }
        }
        Mode::Shortest => Found {
            explanations: vec![shortest_mge(w, o, budget)?],
            degree: None,
        },
        Mode::Card => {
            let (e, d) = card_maximal(w, o, budget)?;
            Found {
                explanations: vec![e],
                degree: Some(d.to_string()),
            }
        }
    };
    Ok(found)
}

/// Prints the explanations with their extensions and pairwise generality.
/// `check` re-verifies each one and reports whether it is most general.
fn report<O: Ontology>(
    w: &WhyNotInstance<'_>,
    o: &O,
    found: &Found<O::Concept>,
    format: Format,
    check: Option<&Check<'_, O::Concept>>,
) -> Outcome {
    let mut verdicts = Vec::new();
    if let Some(check) = check {
        for e in &found.explanations {
            if !is_explanation(w, o, e)? {
                return Err(fail(1, format!("check failed: {e} is not an explanation")));
            }
            verdicts.push(check(e)?);
        }
    }
    let n = found.explanations.len();
    let mut generality = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let g = compare_generality(o, &found.explanations[i], &found.explanations[j])?;
            generality.push((i, j, g));
        }
    }
    match format {
        Format::Text => {
            for (k, e) in found.explanations.iter().enumerate() {
                println!("{e}");
                if let Some(v) = verdicts.get(k) {
                    println!("  check: explanation, {}", if *v { "most general" } else { "not most general" });
                }
            }
            if let Some(d) = &found.degree {
                println!("degree of generality: {d}");
            }
            for (i, j, g) in &generality {
                let (a, b) = (i + 1, j + 1);
                match g {
                    Generality::Less | Generality::Greater => println!("#{a} is {g} than #{b}"),
                    Generality::Equivalent | Generality::Incomparable => println!("#{a} and #{b} are {g}"),
                }
            }
        }
        Format::Json => {
            let mut items = Vec::new();
            for (k, e) in found.explanations.iter().enumerate() {
                let exts = o.extensions(&e.0, w.instance)?;
                let mut item = json!({
                    "concepts": e.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "extensions": exts.iter().map(extension_json).collect::<Vec<_>>(),
                });
                if let Some(v) = verdicts.get(k) {
                    item["most_general"] = Value::Bool(*v);
                }
                items.push(item);
            }
            let mut out = json!({
                "tuple": tuple_json(&w.tuple),
                "explanations": items,
                "generality": generality
                    .iter()
                    .map(|(i, j, g)| json!({ "first": i, "second": j, "relation": g.to_string() }))
                    .collect::<Vec<_>>(),
            });
            if let Some(d) = &found.degree {
                out["degree"] = Value::String(d.clone());
            }
            print_json(&out);
        }
    }
    if verdicts.iter().any(|v| !v) && found.degree.is_none() {
        return Err(fail(1, "check failed: an explanation is not most general"));
    }
    Ok(())
}

fn explain(args: &ExplainArgs) -> Outcome {
    let budget = budget()?;
    let instance = instance_of(&args.query.data)?;
    let q = read_query(&args.query.query)?;
    let tuple = parse_row(&args.tuple)?;
    let format = args.query.format;
    let built = match &args.answers {
        None => WhyNotInstance::new(&instance, q, tuple),
        Some(path) => {
            q.check(instance.schema())?;
            WhyNotInstance::with_answers(&instance, q, read_answers(path)?, tuple, args.verify_ans)
        }
    };
    let w = match built {
        Err(Error::TuplePresent(t)) => {
            match format {
                Format::Text => println!("tuple {t} is present in the answer"),
                Format::Json => print_json(&json!({ "status": "present", "tuple": t })),
            }
            return Err(fail(8, "tuple is present"));
        }
        other => other?,
    };
    let mode = if args.all {
        Mode::All
    } else if args.shortest {
        Mode::Shortest
    } else if args.card {
        Mode::Card
    } else {
        Mode::One
    };
    let check = args.check;
    let fragment = args.fragment;

    if let Some(path) = &args.source.ontology {
        reject_minimize(args)?;
        let o = load_ontology(path, instance.schema())?;
        warn_inconsistent(&o, &instance)?;
        let found = search(&w, &o, mode, budget)?;
        let verify = |e: &Explanation<String>| check_mge(&w, &o, e);
        return report(&w, &o, &found, format, check.then_some(&verify as _));
    }
    if let Some(path) = &args.source.obda {
        reject_minimize(args)?;
        let o = load_obda(path, instance.schema().clone())?;
        let found = search(&w, &o, mode, budget)?;
        let verify = |e: &Explanation<_>| check_mge(&w, &o, e);
        return report(&w, &o, &found, format, check.then_some(&verify as _));
    }
    let incremental = matches!(fragment, Fragment::SelectionFree | Fragment::Full);
    match args.source.derive.expect("one ontology source is required") {
        Derive::Instance => {
            let base = InstanceOntology::new(&instance, fragment);
            let mut found = if mode == Mode::One && incremental {
                Found {
                    explanations: vec![incremental_mge(&w, fragment, budget)?],
                    degree: None,
                }
            } else {
                let o = WithUniverse::new(base, instance_universe(&w, fragment, budget)?);
                search(&w, &o, mode, budget)?
            };
            if args.minimize {
                for e in &mut found.explanations {
                    *e = minimize_equivalent_length(e, &instance, budget);
                }
            }
            let universe = if check && !incremental {
                instance_universe(&w, fragment, budget)?
            } else {
                Vec::new()
            };
            let o = WithUniverse::new(base, universe);
            let verify = |e: &Explanation<_>| {
                if incremental {
                    check_mge_oi(&w, e, fragment, budget)
                } else {
                    check_mge(&w, &o, e)
                }
            };
            report(&w, &o, &found, format, check.then_some(&verify as _))
        }
        Derive::Schema => {
            let base = SchemaOntology::new(instance.schema().clone(), fragment);
            let mut found = match mode {
                Mode::One | Mode::All => {
                    let mut all = compute_mge_os(&w, &base, budget)?;
                    if all.is_empty() {
                        return Err(Error::NoExplanation.into());
                    }
                    if mode == Mode::One {
                        all.truncate(1);
                    }
                    Found {
                        explanations: all,
                        degree: None,
                    }
                }
                _ => {
                    let universe = os_candidates(&w, fragment, budget)?.concat();
                    search(&w, &WithUniverse::new(base.clone(), universe), mode, budget)?
                }
            };
            if args.minimize {
                for e in &mut found.explanations {
                    *e = minimize_equivalent_length(e, &instance, budget);
                }
            }
            let universe = if check {
                os_candidates(&w, fragment, budget)?.concat()
            } else {
                Vec::new()
            };
            let o = WithUniverse::new(base, universe);
            let verify = |e: &Explanation<_>| check_mge(&w, &o, e);
            report(&w, &o, &found, format, check.then_some(&verify as _))
        }
    }
}

fn reject_minimize(args: &ExplainArgs) -> Outcome {
    if args.minimize {
        return Err(fail(2, "--minimize applies to derived ontologies only"));
    }
    Ok(())
}

fn warn_inconsistent<O: FiniteUniverse>(o: &O, instance: &Instance) -> Outcome {
    for problem in check_consistency(o, instance)? {
        log::warn!("ontology is inconsistent with the instance: {problem}");
    }
    Ok(())
}

fn show(args: &ShowArgs) -> Outcome {
    let instance = instance_of(&args.data)?;
    if let Some(path) = &args.source.ontology {
        let o = load_ontology(path, instance.schema())?;
        return list(&o, &instance, args.format);
    }
    if let Some(path) = &args.source.obda {
        let o = load_obda(path, instance.schema().clone())?;
        return list(&o, &instance, args.format);
    }
    let budget = budget()?;
    let atoms = enumerate_concepts(
        args.fragment,
        instance.schema(),
        instance.adom(),
        &instance,
        EnumerateOptions {
            dedup_by_extension: false,
            budget,
        },
    )?;
    match args.source.derive.expect("one ontology source is required") {
        Derive::Instance => list(
            &WithUniverse::new(InstanceOntology::new(&instance, args.fragment), atoms),
            &instance,
            args.format,
        ),
        Derive::Schema => list(
            &WithUniverse::new(SchemaOntology::new(instance.schema().clone(), args.fragment), atoms),
            &instance,
            args.format,
        ),
    }
}

fn list<O: FiniteUniverse>(o: &O, instance: &Instance, format: Format) -> Outcome
where
    O::Concept: Display,
{
    let universe = o.universe();
    let exts = o.extensions(&universe, instance)?;
    let mut pairs = Vec::new();
    for a in &universe {
        for b in &universe {
            if a != b && o.subsumes(a, b)? {
                pairs.push((a, b));
            }
        }
    }
    let problems = check_consistency(o, instance)?;
    match format {
        Format::Text => {
            println!("concepts:");
            for (c, e) in universe.iter().zip(&exts) {
                println!("  {c} = {e}");
            }
            println!("subsumptions:");
            for (a, b) in &pairs {
                println!("  {a} ⊑ {b}");
            }
            for p in &problems {
                println!("inconsistent: {p}");
            }
        }
        Format::Json => print_json(&json!({
            "concepts": universe
                .iter()
                .zip(&exts)
                .map(|(c, e)| json!({ "concept": c.to_string(), "extension": extension_json(e) }))
                .collect::<Vec<_>>(),
            "subsumptions": pairs
                .iter()
                .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                .collect::<Vec<_>>(),
            "inconsistencies": problems.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}
