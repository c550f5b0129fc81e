use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use minrep::biserial::{enumerate_bands, enumerate_strings, is_special_biserial, rep_type_special_biserial};
use minrep::covers::{
    expand_cover, find_concealed_convex, find_critical_line, find_euclidean_convex, DEFAULT_RESULT_LIMIT,
    DEFAULT_SUBSET_CAP,
};
use minrep::families::{dimension, enumerate_dimension, gen_family_over, CatalogEntry, Family};
use minrep::glueing::{census_glueings, glue, separate, ArrowRule, DEFAULT_VERTEX_CAP};
use minrep::lattice::{is_distributive, trichotomy, Verdict};
use minrep::quiver::{emit_quiver_file, graph_shape, parse_quiver_file, separated_quiver, to_dot};
use minrep::recognizer::{recognize, Recognition};
use minrep::{Algebra, Error, FieldSpec, Presentation};

#[derive(Parser)]
#[command(name = "minrep", version, about = "Path algebras with relations and minimal representation-infinite families")]
struct Cli {
    /// Ground field: q, f2, f3 or any prime as fP.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Emit DOT instead of JSON where a graph is produced.
    #[arg(long, global = true)]
    dot: bool,
    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide distributivity and the family of a non-distributive algebra.
    Classify { file: Option<String> },
    /// Generate a family member as a catalog entry.
    Gen {
        family: Family,
        params: Vec<usize>,
        #[arg(long)]
        glued: bool,
        /// Write a quiver file instead of JSON.
        #[arg(long)]
        quiver: bool,
    },
    /// All family members of one dimension.
    Enumerate {
        #[arg(long)]
        dim: usize,
    },
    /// Dimension of a family member.
    Dim {
        family: Family,
        params: Vec<usize>,
        #[arg(long)]
        glued: bool,
    },
    /// Identify a source and a sink.
    Glue {
        file: Option<String>,
        #[arg(long)]
        source: String,
        #[arg(long)]
        sink: String,
    },
    /// Split a node into a source and a sink.
    Separate {
        file: Option<String>,
        #[arg(long)]
        node: String,
    },
    /// Census of proper glueings up to isomorphism.
    Glueings {
        file: Option<String>,
        #[arg(long, value_enum, default_value = "merge")]
        rule: Rule,
        /// Print at most this many representatives.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Strings and bands of a special biserial algebra.
    Strings {
        file: Option<String>,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        bands_only: bool,
    },
    /// Bounded piece of the universal cover of a zero-relation algebra.
    Cover {
        file: Option<String>,
        #[arg(long)]
        base: String,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "euclidean")]
        search: Search,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
    },
    /// Separated quiver.
    Separated { file: Option<String> },
    /// Dynkin or Euclidean type of the underlying graph.
    Shape { file: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Merge,
    Keep,
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    Euclidean,
    Concealed,
    Lines,
}

enum Failure {
    Refusal(serde_json::Value),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        // Only fails when a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Refusal(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(file: &Option<String>) -> Result<String, Error> {
    match file.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Io(e.to_string()))?;
            Ok(s)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}"))),
    }
}

/// Quiver files and catalog JSON are both accepted.
fn load(file: &Option<String>, field: FieldSpec) -> Result<Algebra, Error> {
    let text = read_input(file)?;
    let p = if text.trim_start().starts_with('{') {
        let entry: CatalogEntry = serde_json::from_str(&text).map_err(|e| Error::Usage(format!("bad catalog JSON: {e}")))?;
        parse_quiver_file(&entry.to_quiver_file())?
    } else {
        parse_quiver_file(&text)?
    };
    Algebra::build(&p, field)
}

fn vertex(a: &Algebra, name: &str) -> Result<usize, Error> {
    a.quiver.vertex(name).ok_or_else(|| Error::UnknownVertex(name.into()))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

fn presentation_json(p: &Presentation, dim: usize) -> serde_json::Value {
    let q = &p.quiver;
    json!({
        "dim": dim,
        "vertices": q.vertices,
        "arrows": q.arrows.iter().map(|a| (a.name.clone(), q.vertices[a.source].clone(), q.vertices[a.target].clone())).collect::<Vec<_>>(),
        "relations": p.relations.iter().map(|r| r.render(q)).collect::<Vec<_>>(),
    })
}

fn algebra_out(a: &Algebra, dot: bool) -> String {
    if dot {
        to_dot(&a.quiver)
    } else {
        pretty(&presentation_json(&a.presentation(), a.dim()))
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let field = FieldSpec::parse(&cli.field)?;
    match &cli.cmd {
        Cmd::Classify { file } => {
            let a = load(file, field)?;
            let (distributive, _) = is_distributive(&a);
            let report = trichotomy(&a);
            let kind = match &report.verdict {
                Verdict::NotMinimalNonDistributive { .. } => "none".to_string(),
                v => format!("{v:?}"),
            };
            match recognize(&a) {
                Recognition::Match(m) => Ok(pretty(&json!({
                    "distributive": distributive,
                    "type": kind,
                    "family": m.family.to_string(),
                    "params": m.params,
                    "glued": m.glued,
                    "correspondence": { "vertices": m.vertices, "arrows": m.arrows },
                }))),
                Recognition::Refusal { witness } => Err(Failure::Refusal(json!({
                    "distributive": distributive,
                    "type": kind,
                    "refusal": true,
                    "witness": witness,
                }))),
            }
        }
        Cmd::Gen { family, params, glued, quiver } => {
            let inst = gen_family_over(*family, params, *glued, field)?;
            Ok(if *quiver {
                emit_quiver_file(&inst.presentation)
            } else if cli.dot {
                to_dot(&inst.presentation.quiver)
            } else {
                pretty(&inst.catalog_entry())
            })
        }
        Cmd::Enumerate { dim } => {
            let list = enumerate_dimension(*dim)?;
            let entries: Vec<CatalogEntry> = list.iter().map(|i| i.catalog_entry()).collect();
            Ok(pretty(&json!({ "dim": dim, "count": entries.len(), "instances": entries })))
        }
        Cmd::Dim { family, params, glued } => {
            let d = dimension(*family, params, *glued)?;
            Ok(pretty(&json!({ "family": family.to_string(), "params": params, "glued": glued, "dim": d })))
        }
        Cmd::Glue { file, source, sink } => {
            let a = load(file, field)?;
            let g = glue(&a, vertex(&a, source)?, vertex(&a, sink)?)?;
            Ok(algebra_out(&g, cli.dot))
        }
        Cmd::Separate { file, node } => {
            let a = load(file, field)?;
            let s = separate(&a, vertex(&a, node)?)?;
            Ok(algebra_out(&s, cli.dot))
        }
        Cmd::Glueings { file, rule, limit } => {
            let a = load(file, field)?;
            let rule = match rule {
                Rule::Merge => ArrowRule::Merge,
                Rule::Keep => ArrowRule::Keep,
            };
            let mut census = census_glueings(&a, rule, DEFAULT_VERTEX_CAP)?;
            if let Some(n) = limit {
                census.representatives.truncate(*n);
            }
            Ok(pretty(&census))
        }
        Cmd::Strings { file, max_len, bands_only } => {
            let a = load(file, field)?;
            let report = is_special_biserial(&a);
            if !report.special_biserial {
                return Err(Failure::Refusal(json!({ "refusal": true, "witness": report.witness })));
            }
            let q = &a.quiver;
            let bands: Vec<String> = enumerate_bands(&a, *max_len)?.iter().map(|w| w.render(q)).collect();
            let rep = rep_type_special_biserial(&a)?;
            let mut out = json!({ "bands": bands, "rep_type": rep });
            if !bands_only {
                out["strings"] = json!(enumerate_strings(&a, *max_len)?.iter().map(|w| w.render(q)).collect::<Vec<_>>());
            }
            Ok(pretty(&out))
        }
        Cmd::Cover { file, base, radius, search, cap } => {
            let a = load(file, field)?;
            let slice = expand_cover(&a, vertex(&a, base)?, *radius)?;
            if cli.dot {
                return Ok(slice.to_dot());
            }
            let q = &slice.quiver;
            let named = |vs: &[usize]| vs.iter().map(|&v| q.vertices[v].clone()).collect::<Vec<_>>();
            let summary = json!({ "vertices": q.num_vertices(), "arrows": q.num_arrows(), "relations": slice.relations.len() });
            let found = match search {
                Search::Euclidean | Search::Concealed => {
                    let r = if matches!(search, Search::Euclidean) {
                        find_euclidean_convex(&slice, *cap, DEFAULT_RESULT_LIMIT)
                    } else {
                        find_concealed_convex(&slice, *cap, DEFAULT_RESULT_LIMIT)
                    };
                    json!({
                        "truncated": r.truncated,
                        "subsets_examined": r.subsets_examined,
                        "findings": r.findings.iter().map(|f| json!({ "shape": f.shape, "vertices": named(&f.vertices) })).collect::<Vec<_>>(),
                    })
                }
                Search::Lines => match find_critical_line(&slice) {
                    Some((path, line)) => json!({ "critical_line": named(&path), "image": line.render(&a.quiver) }),
                    None => json!({ "critical_line": null }),
                },
            };
            Ok(pretty(&json!({ "slice": summary, "search": found })))
        }
        Cmd::Separated { file } => {
            let a = load(file, field)?;
            let s = separated_quiver(&a.quiver);
            Ok(if cli.dot { to_dot(&s) } else { pretty(&s) })
        }
        Cmd::Shape { file } => {
            let a = load(file, field)?;
            let shape = graph_shape(&a.quiver)?;
            Ok(pretty(&json!({ "shape": shape.to_string(), "euclidean": shape.is_euclidean() })))
        }
    }
}
