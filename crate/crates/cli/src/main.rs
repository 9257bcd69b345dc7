//! Command line front end for the pipeline: parse, normalize, reason,
//! build the canonical model, embed, model-check, verify faithfulness.
//!
//! Exit codes: 0 success or "holds", 1 "does not hold", 2 usage or input
//! error, 3 internal error. Outputs are byte-identical for identical
//! inputs and flags; `--deterministic` additionally drops elapsed-time
//! fields.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elhgeo::{
    build_canonical, build_geometric, canonical_embedding, check, normalize, parse_axiom,
    parse_ontology, serialize, verify_strong_faithfulness_with, FaithfulnessOptions,
    FiniteInterpretation, GeometricModel, Ontology, Saturation, Signature,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "elhgeo",
    version,
    about = "Geometric embeddings of ELH ontologies, with exact verification"
)]
struct Cli {
    /// Suppress elapsed-time fields so equal inputs print equal bytes
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite an ontology into normal form
    Normalize {
        /// Ontology in functional syntax; - reads stdin
        #[arg(long)]
        ontology: String,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether the ontology entails an axiom
    Entail {
        /// Ontology in functional syntax; - reads stdin
        #[arg(long)]
        ontology: String,
        /// Axiom in functional syntax, e.g. "SubClassOf(A B)"
        #[arg(long)]
        axiom: String,
    },
    /// Build the canonical model as interpretation JSON
    Canonical {
        /// Ontology in functional syntax; - reads stdin
        #[arg(long)]
        ontology: String,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed the canonical model of an ontology, or any interpretation
    Embed {
        /// Ontology whose canonical model is embedded; - reads stdin
        #[arg(long, conflicts_with = "interpretation", required_unless_present = "interpretation")]
        ontology: Option<String>,
        /// Interpretation JSON, as written by `canonical`; - reads stdin
        #[arg(long)]
        interpretation: Option<String>,
        /// Mark the regions as convex hulls of their vertices
        #[arg(long)]
        convex: bool,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one axiom against an embedding
    Modelcheck {
        /// Embedding JSON, as written by `embed`; - reads stdin
        #[arg(long)]
        embedding: String,
        /// Axiom in functional syntax
        #[arg(long)]
        axiom: String,
    },
    /// Compare embedding verdicts with entailment over all normal-form axioms
    Faithfulness {
        /// Ontology in functional syntax; - reads stdin
        #[arg(long)]
        ontology: String,
        /// Report path; stdout when omitted
        #[arg(long)]
        report: Option<PathBuf>,
        /// Sampling seed, used when --limit is set
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check at most this many axioms, sampled without replacement
        #[arg(long)]
        limit: Option<usize>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<elhgeo::Error> for Failure {
    fn from(e: elhgeo::Error) -> Failure {
        // length mismatches are internal invariant breaks; every other
        // library error is triggered by something the caller handed us
        let code = match e {
            elhgeo::Error::LengthMismatch(..) => 3,
            _ => 2,
        };
        fail(code, e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| fail(2, format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| fail(2, format!("cannot read {path}: {e}")))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| fail(3, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Commands accept any well-formed ontology and normalize it themselves.
fn load_normalized(path: &str) -> Result<Ontology, Failure> {
    Ok(normalize(&parse_ontology(&read_input(path)?)?)?)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Normalize { ontology, out } => {
            let n = load_normalized(&ontology)?;
            write_output(out.as_deref(), &serialize(&n))?;
            Ok(0)
        }
        Cmd::Entail { ontology, axiom } => {
            let o = load_normalized(&ontology)?;
            let ax = parse_axiom(&axiom)?;
            let entailed = Saturation::of(&o)?.entails(&ax)?;
            println!("{}", json!({ "entailed": entailed }));
            Ok(if entailed { 0 } else { 1 })
        }
        Cmd::Canonical { ontology, out } => {
            let i = build_canonical(&load_normalized(&ontology)?)?;
            write_output(out.as_deref(), &i.to_json_string())?;
            Ok(0)
        }
        Cmd::Embed { ontology, interpretation, convex, out } => {
            let mut g = match (ontology, interpretation) {
                (Some(path), None) => canonical_embedding(&load_normalized(&path)?)?,
                (None, Some(path)) => {
                    let i = FiniteInterpretation::from_json_str(&read_input(&path)?)?;
                    let sig = Signature {
                        concepts: i.concept_names().cloned().collect(),
                        roles: i.role_names().cloned().collect(),
                        individuals: i.individuals().map(|(n, _)| n.clone()).collect(),
                    };
                    build_geometric(&i, &sig)?
                }
                _ => unreachable!("clap enforces exactly one source"),
            };
            g.set_convex(convex);
            write_output(out.as_deref(), &g.to_json_string())?;
            Ok(0)
        }
        Cmd::Modelcheck { embedding, axiom } => {
            let g = GeometricModel::from_json_str(&read_input(&embedding)?)?;
            let ax = parse_axiom(&axiom)?;
            let res = check(&g, &ax)?;
            let mut doc = json!({
                "axiom": ax.to_string(),
                "verdict": res.verdict,
                "counterexample": res.counterexample.as_ref().map(|vs| {
                    vs.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
                }),
            });
            if !cli.deterministic {
                doc["elapsed_us"] = json!(res.elapsed.as_micros() as u64);
            }
            println!("{doc}");
            Ok(if res.verdict { 0 } else { 1 })
        }
        Cmd::Faithfulness { ontology, report, seed, limit, jobs } => {
            let o = load_normalized(&ontology)?;
            let opts = FaithfulnessOptions { limit, seed, jobs, ..FaithfulnessOptions::default() };
            let rep = verify_strong_faithfulness_with(&o, &opts)?;
            write_output(report.as_deref(), &rep.to_json_string(cli.deterministic))?;
            Ok(if rep.is_faithful() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
