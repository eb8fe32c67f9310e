mod json;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quathyp::classifier::classify_literal_theorem;
use quathyp::document::MatrixDocument;
use quathyp::exact::{exact_invariants, ExactSummary};
use quathyp::model::{membership_residual, to_model};
use quathyp::normal_forms::{normalize, sample};
use quathyp::oracle::eigen_classify;
use quathyp::zclass::enumerate_zclasses;
use quathyp::{classify, zclass_label, DynamicalType, Error, Field, Model, QMatrix3, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

const EXIT_ERROR: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_MEMBERSHIP: u8 = 3;
const EXIT_BORDERLINE: u8 = 4;

#[derive(Parser)]
#[command(name = "quathyp", version, about = "Classify isometries of the complex and quaternionic hyperbolic plane")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Set every tolerance except oracle clustering to this value.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Use exact rational arithmetic on the entries as written.
    #[arg(long, global = true)]
    exact: bool,
    /// Add the eigenvalue oracle's verdict.
    #[arg(long, global = true)]
    oracle: bool,
    /// Add the verdict of the theorem's inequalities read literally.
    #[arg(long, global = true)]
    literal: bool,
    /// Model for documents that omit one, and for generated output.
    #[arg(long, global = true)]
    model: Option<Model>,
    /// Field for documents that omit one, and for generated output.
    #[arg(long, global = true)]
    field: Option<Field>,
    /// Report borderline decisions instead of exiting with status 4.
    #[arg(long, global = true)]
    allow_borderline: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Dynamical type, invariants and z-class of each input document.
    Classify { input: Option<PathBuf> },
    /// Invariants (a, b, c, G, H, Δ) and minimal-polynomial structure.
    Invariants { input: Option<PathBuf> },
    /// Normal form and conjugator.
    NormalForm { input: Option<PathBuf> },
    /// z-class label.
    Zclass { input: Option<PathBuf> },
    /// All z-classes with representatives.
    Zclasses,
    /// Random members of a dynamical type, one document per line.
    Sample {
        #[arg(value_name = "TYPE")]
        dtype: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Membership residual `max |A* J A − J|`.
    CheckMembership { input: Option<PathBuf> },
}

/// An error with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Malformed(_) => EXIT_PARSE,
            Error::NotMember { .. } => EXIT_MEMBERSHIP,
            _ => EXIT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = std::result::Result<(Value, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let tols = g.tol.map_or_else(Tolerances::default, Tolerances::uniform);
    let result = match &cli.command {
        Command::Zclasses => zclasses(&g).map(|v| vec![Ok((v, 0))]),
        Command::Sample { dtype, count, seed } => return run_sample(&g, dtype, *count, *seed),
        Command::Classify { input }
        | Command::Invariants { input }
        | Command::NormalForm { input }
        | Command::Zclass { input }
        | Command::CheckMembership { input } => read_documents(input.as_ref(), &g).map(|docs| {
            docs.into_iter()
                .map(|d| d.and_then(|d| run_one(&cli.command, &g, &d, d.tolerances(tols))))
                .collect()
        }),
    };
    let outcomes = match result {
        Ok(o) => o,
        Err(f) => return fail(f),
    };
    let mut code = 0;
    for o in outcomes {
        match o {
            Ok((v, c)) => {
                if !emit(&json::pretty(&v)) {
                    break;
                }
                code = code.max(c);
            }
            Err(f) => {
                eprintln!("error: {}", f.message);
                code = code.max(f.code);
            }
        }
    }
    ExitCode::from(code)
}

/// Writes one line to stdout; false once the reader has gone away.
fn emit(line: &str) -> bool {
    writeln!(std::io::stdout().lock(), "{line}").is_ok()
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("error: {}", f.message);
    ExitCode::from(f.code)
}

fn parse_err(msg: impl ToString) -> Failure {
    Failure { code: EXIT_PARSE, message: msg.to_string() }
}

/// Reads one or more JSON documents from a file or stdin, filling in
/// `field` and `model` from the flags where missing.
fn read_documents(path: Option<&PathBuf>, g: &Global) -> std::result::Result<Vec<Result<MatrixDocument, Failure>>, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| parse_err(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(parse_err)?;
            s
        }
    };
    let mut docs = Vec::new();
    for v in serde_json::Deserializer::from_str(&text).into_iter::<Value>() {
        let mut v = v.map_err(parse_err)?;
        if let Value::Object(map) = &mut v {
            if let Some(f) = g.field {
                map.entry("field").or_insert_with(|| json!(f));
            }
            if let Some(m) = g.model {
                map.entry("model").or_insert_with(|| json!(m));
            }
        }
        docs.push(serde_json::from_value(v).map_err(parse_err));
    }
    if docs.is_empty() {
        return Err(parse_err("no input document"));
    }
    Ok(docs)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn run_one(cmd: &Command, g: &Global, doc: &MatrixDocument, tols: Tolerances) -> Outcome {
    let a = doc.to_matrix()?;
    let mut report = Map::new();
    report.insert("field".into(), json!(doc.field));
    report.insert("model".into(), json!(doc.model));
    report.insert("tolerance".into(), to_value(&tols));
    let mut code = 0;
    match cmd {
        Command::CheckMembership { .. } => {
            let residual = membership_residual(&a, doc.model);
            let member = if g.exact {
                quathyp::exact::is_member(&doc.to_exact()?, doc.model)
            } else {
                residual <= tols.membership
            };
            report.insert("residual".into(), json!(residual));
            report.insert("member".into(), json!(member));
            report.insert("exact".into(), json!(g.exact));
            if !member {
                code = EXIT_MEMBERSHIP;
            }
        }
        Command::Invariants { .. } => {
            let c = classify(&a, doc.model, doc.field, &tols)?;
            report.insert("invariants".into(), to_value(&c.invariants));
            if g.exact {
                let e = exact_invariants(&doc.to_exact()?, doc.model)?;
                report.insert("exact".into(), to_value(&ExactSummary::from(&e)));
            }
        }
        Command::NormalForm { .. } => {
            let n = normalize(&a, doc.model, doc.field, &tols)?;
            report.insert("type".into(), json!(classify(&a, doc.model, doc.field, &tols)?.dtype));
            report.insert("normal_form".into(), to_value(&n.normal_form.kind));
            report.insert("normal_form_model".into(), json!(n.normal_form.model));
            report.insert("normal_form_matrix".into(), matrix_value(&n.normal_form.matrix, doc.field, n.normal_form.model));
            report.insert("conjugator".into(), matrix_value(&n.conjugator, doc.field, n.normal_form.model));
            report.insert("residual".into(), json!(n.residual));
        }
        Command::Zclass { .. } => {
            let c = classify(&a, doc.model, doc.field, &tols)?;
            report.insert("type".into(), json!(c.dtype));
            report.insert("zclass".into(), to_value(&zclass_label(&c)?));
        }
        Command::Classify { .. } => {
            let c = classify(&a, doc.model, doc.field, &tols)?;
            let mut dtype = c.dtype;
            if g.exact {
                let e = exact_invariants(&doc.to_exact()?, doc.model)?;
                if e.dtype != c.dtype {
                    report.insert("floating_type".into(), json!(c.dtype));
                }
                dtype = e.dtype;
                let mut ex = to_value(&ExactSummary::from(&e));
                ex["type"] = json!(e.dtype);
                report.insert("exact".into(), ex);
            }
            report.insert("type".into(), json!(dtype));
            report.insert("type_name".into(), json!(type_name(dtype, &c)));
            report.insert("family".into(), json!(dtype.family()));
            if doc.field == Field::Complex {
                report.insert("complex_type".into(), json!(dtype.collapse()));
            }
            report.insert("invariants".into(), to_value(&c.invariants));
            report.insert("eigen_classes".into(), to_value(&c.eigen_classes));
            report.insert(
                "zclass".into(),
                match zclass_label(&c) {
                    Ok(l) => to_value(&l),
                    Err(e) => json!({ "error": e.to_string() }),
                },
            );
            report.insert("borderline".into(), json!(c.borderline));
            report.insert("alternatives".into(), to_value(&c.alternatives));
            report.insert("diagnostics".into(), to_value(&c.diagnostics));
            if let Some(t) = doc.label {
                report.insert("label".into(), json!(t));
            }
            if g.oracle {
                let o = eigen_classify(&a, doc.model, &tols)?;
                report.insert("oracle".into(), json!({ "type": o, "agrees": o == dtype }));
            }
            if g.literal {
                report.insert("literal".into(), json!(classify_literal_theorem(&c.invariants)));
            }
            if c.borderline && !c.alternatives.is_empty() && !g.allow_borderline && !g.exact {
                code = EXIT_BORDERLINE;
            }
        }
        Command::Zclasses | Command::Sample { .. } => unreachable!(),
    }
    Ok((Value::Object(report), code))
}

fn type_name(t: DynamicalType, c: &quathyp::Classification) -> String {
    // a real scalar class acts trivially on the hyperbolic plane
    if t == DynamicalType::SimpleElliptic && (c.invariants.a.abs() - 6.0).abs() <= 1e-9 {
        format!("{} (identity)", t.name())
    } else {
        t.name().to_string()
    }
}

fn matrix_value(a: &QMatrix3, field: Field, model: Model) -> Value {
    to_value(&MatrixDocument::new(a, field, model).matrix)
}

fn zclasses(g: &Global) -> std::result::Result<Value, Failure> {
    let field = g.field.unwrap_or(Field::Quaternion);
    let entries: Vec<Value> = enumerate_zclasses(field)
        .into_iter()
        .map(|e| {
            let rep = &e.representative;
            let model = g.model.unwrap_or(rep.model);
            let doc = MatrixDocument::new(&to_model(&rep.matrix, rep.model, model), field, model);
            json!({
                "family": e.label.family,
                "case_id": e.label.case_id,
                "centralizer": e.label.centralizer,
                "type": e.dtype,
                "representative": doc,
            })
        })
        .collect();
    Ok(json!({ "field": field, "count": entries.len(), "zclasses": entries }))
}

fn run_sample(g: &Global, name: &str, count: usize, seed: u64) -> ExitCode {
    let dtype: DynamicalType = match name.parse() {
        Ok(t) => t,
        Err(e) => return fail(Failure::from(e)),
    };
    let field = g.field.unwrap_or(Field::Quaternion);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let s = sample(dtype, field, &mut rng);
        let model = g.model.unwrap_or(s.model);
        let mut doc = MatrixDocument::new(&to_model(&s.matrix, s.model, model), field, model);
        doc.label = Some(dtype);
        if !emit(&json::compact(&to_value(&doc))) {
            break;
        }
    }
    ExitCode::SUCCESS
}
