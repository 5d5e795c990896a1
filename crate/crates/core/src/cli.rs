//! Command-line front end. [`run`] takes argv and output streams so it can
//! be driven in-process by tests.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::design::{build_design, build_partite_design, DesignSpec, FactorSpec, PartSizes, Refusal};
use crate::detach::{AlphaOrder, Detacher};
use crate::error::Error;
use crate::factorize::{factorize_with, FactorKind, FactorizeError};
use crate::hypergraph::{Hypergraph, NumberFunction};
use crate::io;
use crate::laminar::fair_split;
use crate::verify::{verify_design, verify_detachment, verify_factorization, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

const AUDIT_ENV: &str = "HYPERDETACH_AUDIT";

#[derive(Parser, Debug)]
#[command(
    name = "hyperdetach",
    version,
    about = "Hypergraph detachments and factorizations of complete designs",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 refused (reason as JSON on stderr), 3 usage or input error.\n\
                  Setting HYPERDETACH_AUDIT=1 is equivalent to passing --audit."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the complete design ΛK_n^H (or its multipartite analogue)
    Generate {
        #[command(flatten)]
        design: DesignArgs,
        /// Write here instead of standard output
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compute a simple g-detachment of a hypergraph
    Detach {
        /// Hypergraph JSON
        #[arg(long, short)]
        input: PathBuf,
        /// Number function: a JSON file mapping vertex ids to values, or one integer for every vertex
        #[arg(long)]
        g: String,
        /// Check every split against the B/C/D/E conditions
        #[arg(long)]
        audit: bool,
        /// Write audit records here as JSON lines (default: standard error)
        #[arg(long, requires = "audit")]
        audit_log: Option<PathBuf>,
        /// Pick split vertices pseudo-randomly from this seed
        #[arg(long)]
        seed: Option<u64>,
        /// Write here instead of standard output
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Factorize a complete design into R-, (Q,R)- or almost-R-factors
    Factorize {
        #[command(flatten)]
        design: DesignArgs,
        /// Factor degrees r_1,…,r_k
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<u64>,
        /// Lower degree bounds q_1,…,q_k
        #[arg(long = "Q", value_delimiter = ',', conflicts_with = "almost")]
        q: Option<Vec<u64>>,
        /// Factor degrees in [r_i - 1, r_i]
        #[arg(long)]
        almost: bool,
        /// Audit every split of the detachment; records go to standard error
        #[arg(long)]
        audit: bool,
        /// Pick split vertices pseudo-randomly from this seed
        #[arg(long)]
        seed: Option<u64>,
        /// Write here instead of standard output
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Independently check an artifact; prints a JSON report
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Fair split of a set against two laminar families
    Split {
        /// JSON {ground, familyA, familyB, n}; standard input if omitted
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Write here instead of standard output
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyTarget {
    /// A document with "spec", "design" and optional "parts"
    Design {
        #[arg(long, short)]
        input: PathBuf,
    },
    /// A document written by `factorize`
    Factorization {
        #[arg(long, short)]
        input: PathBuf,
    },
    /// A detachment written by `detach` against its original
    Detachment {
        /// The original hypergraph
        #[arg(long)]
        original: PathBuf,
        /// Output of `detach`
        #[arg(long)]
        detached: PathBuf,
        #[arg(long)]
        g: String,
    },
}

#[derive(Args, Debug)]
struct DesignArgs {
    /// Number of vertices (or of parts)
    #[arg(long)]
    n: u64,
    /// Common part size
    #[arg(long, conflicts_with = "parts")]
    p: Option<u64>,
    /// Part sizes p_1,…,p_n
    #[arg(long, value_delimiter = ',')]
    parts: Option<Vec<u64>>,
    /// Edge sizes h_1,…,h_m
    #[arg(long = "H", value_delimiter = ',', required = true)]
    sizes: Vec<u64>,
    /// Edge multiplicities λ_1,…,λ_m
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<u64>,
}

impl DesignArgs {
    fn spec(&self) -> DesignSpec {
        let parts = match (&self.p, &self.parts) {
            (Some(p), _) => Some(PartSizes::Uniform(*p)),
            (None, Some(ps)) => Some(PartSizes::Explicit(ps.clone())),
            (None, None) => None,
        };
        DesignSpec {
            n: self.n,
            sizes: self.sizes.clone(),
            lambda: self.lambda.clone(),
            parts,
        }
    }
}

enum Failure {
    Usage(String),
    Refused(Refusal),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<FactorizeError> for Failure {
    fn from(e: FactorizeError) -> Self {
        match e {
            FactorizeError::Invalid(e) => e.into(),
            FactorizeError::Refused(r) => Failure::Refused(r),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    io::parse_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn number_function(arg: &str, graph: &Hypergraph) -> std::result::Result<NumberFunction, Failure> {
    if let Ok(k) = arg.parse::<u32>() {
        return Ok(NumberFunction::uniform(graph.vertices(), k)?);
    }
    let path = Path::new(arg);
    io::number_function_from_value(&read(path)?, "$").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(value: &Value, output: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    let text = io::to_text(value);
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("standard output: {e}"))),
    }
}

fn report(r: &VerificationReport, stdout: &mut dyn Write) -> Outcome {
    emit(&serde_json::to_value(r).expect("reports serialize"), None, stdout)?;
    if r.passed {
        Ok(())
    } else {
        let names: Vec<&str> = r.failed_checks().map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(format!("failed checks: {}", names.join(", "))))
    }
}

fn detacher(audit: bool, seed: Option<u64>) -> Detacher {
    let order = seed.map_or(AlphaOrder::SmallestFirst, AlphaOrder::Seeded);
    Detacher::new(order, audit)
}

fn dispatch(cli: Cli, env_audit: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Generate { design, output } => {
            let spec = design.spec();
            let mut doc = serde_json::Map::new();
            doc.insert("spec".into(), json!(spec));
            if spec.is_partite() {
                let (g, parts) = build_partite_design(&spec)?;
                doc.insert("design".into(), io::hypergraph_to_value(&g));
                let parts: Vec<Vec<u32>> = parts.iter().map(|p| p.iter().map(|v| v.0).collect()).collect();
                doc.insert("parts".into(), json!(parts));
            } else {
                doc.insert("design".into(), io::hypergraph_to_value(&build_design(&spec)?));
            }
            emit(&Value::Object(doc), output.as_deref(), stdout)
        }
        Command::Detach {
            input,
            g,
            audit,
            audit_log,
            seed,
            output,
        } => {
            let graph = io::hypergraph_from_value(&read(&input)?, "$")
                .map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let g = number_function(&g, &graph)?;
            let audit = audit || env_audit;
            let result = detacher(audit, seed).run(&graph, &g)?;
            if audit {
                let mut lines = String::new();
                for step in &result.audits {
                    lines.push_str(&serde_json::to_string(step).expect("audits serialize"));
                    lines.push('\n');
                }
                match &audit_log {
                    Some(p) => fs::write(p, lines).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                    None => stderr
                        .write_all(lines.as_bytes())
                        .map_err(|e| Failure::Usage(format!("standard error: {e}")))?,
                }
            }
            emit(&io::detachment_to_value(&result.graph, &result.psi), output.as_deref(), stdout)?;
            if result.audits_pass() {
                Ok(())
            } else {
                Err(Failure::Verification("step audit failed".into()))
            }
        }
        Command::Factorize {
            design,
            r,
            q,
            almost,
            audit,
            seed,
            output,
        } => {
            let spec = design.spec();
            let (factors, kind) = if almost {
                (FactorSpec::almost(r)?, FactorKind::Almost)
            } else if let Some(q) = q {
                (FactorSpec::interval(q, r), FactorKind::Qr)
            } else {
                (FactorSpec::regular(r), FactorKind::R)
            };
            let factorization = factorize_with(&spec, &factors, kind, &detacher(audit || env_audit, seed))?;
            let check = verify_factorization(&factorization, &spec, &factors);
            let doc = io::FactorizationDoc {
                spec,
                factors,
                factorization,
            };
            emit(&io::factorization_to_value(&doc), output.as_deref(), stdout)?;
            if check.passed {
                Ok(())
            } else {
                Err(Failure::Verification("output failed verification".into()))
            }
        }
        Command::Verify { target } => match target {
            VerifyTarget::Design { input } => {
                let (spec, g, parts) = io::design_from_value(&read(&input)?)?;
                report(&verify_design(&g, &spec, parts.as_deref()), stdout)
            }
            VerifyTarget::Factorization { input } => {
                let doc = io::factorization_from_value(&read(&input)?)?;
                report(&verify_factorization(&doc.factorization, &doc.spec, &doc.factors), stdout)
            }
            VerifyTarget::Detachment { original, detached, g } => {
                let f = io::hypergraph_from_value(&read(&original)?, "$")?;
                let (out, psi) = io::detachment_from_value(&read(&detached)?)?;
                let g = number_function(&g, &f)?;
                report(&verify_detachment(&f, &out, &psi, &g), stdout)
            }
        },
        Command::Split { input, output } => {
            let value = match input {
                Some(p) => read(&p)?,
                None => {
                    let mut text = String::new();
                    std::io::stdin()
                        .read_to_string(&mut text)
                        .map_err(|e| Failure::Usage(format!("standard input: {e}")))?;
                    io::parse_json(&text)?
                }
            };
            let inst = io::split_from_value(&value)?;
            let cert = fair_split(&inst.ground, &inst.a, &inst.b, inst.n)?;
            emit(&json!(cert), output.as_deref(), stdout)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env_audit = std::env::var(AUDIT_ENV).is_ok_and(|v| v == "1");
    run_with_env(args, env_audit, stdout, stderr)
}

/// Like [`run`] with the audit environment switch given explicitly.
pub fn run_with_env<I, S>(args: I, env_audit: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = dispatch(cli, env_audit, stdout, stderr);
    let (code, message) = match outcome {
        Ok(()) => return EXIT_OK,
        Err(Failure::Usage(m)) => (EXIT_USAGE, json!({ "error": m })),
        Err(Failure::Verification(m)) => (EXIT_VERIFY_FAILED, json!({ "error": m })),
        Err(Failure::Refused(r)) => (EXIT_REFUSED, json!({ "refused": r, "reason": r.to_string() })),
    };
    let _ = stderr.write_all(io::to_text(&message).as_bytes());
    code
}
