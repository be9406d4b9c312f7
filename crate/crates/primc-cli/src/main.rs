//! Batch front end: every verification and enumeration workflow behind one
//! binary with deterministic, scriptable output.
//!
//! Exit codes: 0 success (and, for `verify`, all identities passing),
//! 1 computation failure or failed verification, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use primc::characters::{self, VerificationReport};
use primc::crystal::pair_graph;
use primc::energy::{energy_table, Colour};
use primc::partitions::{enumerate_capparelli, enumerate_grounded, gf_grounded, CapparelliSpec};
use primc::Series;

#[derive(Parser)]
#[command(
    name = "primc",
    version,
    about = "Crystal energy tables, coloured partition enumeration and character-formula verification for affine type A"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the energy matrix over all colour pairs (row = earlier colour,
    /// column = later colour).
    Energy {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Emit the crystal graph on all n^4 pair-vertices.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// List grounded partitions up to a weight bound.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        max_weight: i64,
        /// Exact (minimal) differences instead of lower bounds.
        #[arg(long)]
        minimal: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// List generalised Capparelli partitions for a (delta, gamma) spec.
    Capparelli {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_weight: i64,
        /// JSON file with the delta table and gamma table; defaults to the
        /// canonical spec (delta = max, largest admissible gamma).
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Generating function of the grounded partitions as a truncated series.
    Gf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        max_weight: i64,
        #[arg(long)]
        minimal: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate one closed character formula as a truncated series.
    Character {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        trunc: i64,
        #[arg(long, value_enum, default_value = "kp")]
        formula: Formula,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the identity-verification chain; exit 0 iff every check passes.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        trunc: i64,
        /// Optional Capparelli spec to include that identity in the chain.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Formula {
    /// Kac-Peterson lattice sum.
    Kp,
    /// Sum of products with manifestly positive coefficients.
    Positive,
    /// Constant-term double product (level-shifted Primc form).
    Ct,
    /// Plain lattice sum of the Primc generating function (level 0).
    Lattice,
    /// Theta-product sum of the Primc generating function (level 0).
    Theta,
}

fn envelope(command: &str, params: serde_json::Value, result: serde_json::Value) -> String {
    let doc = serde_json::json!({
        "tool-version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "result": result,
    });
    serde_json::to_string_pretty(&doc).expect("json document") + "\n"
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn load_spec(n: usize, path: &Option<PathBuf>) -> Result<CapparelliSpec, String> {
    match path {
        None => CapparelliSpec::canonical(n).map_err(|e| e.to_string()),
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| format!("bad JSON in {}: {e}", p.display()))?;
            let spec = CapparelliSpec::from_json(&value).map_err(|e| e.to_string())?;
            if spec.n != n {
                return Err(format!("spec rank {} does not match --n {n}", spec.n));
            }
            Ok(spec)
        }
    }
}

fn series_doc(command: &str, params: serde_json::Value, s: &Series) -> String {
    envelope(command, params, s.to_json())
}

fn run(cli: &Cli) -> Result<(String, bool), (String, bool)> {
    // Ok((document, all_pass)); Err((message, is_usage))
    match &cli.command {
        Command::Energy { n, format } => {
            let table = energy_table(*n).map_err(|e| (e.to_string(), false))?;
            let order: Vec<Colour> = Colour::all(*n).collect();
            let matrix = table.matrix(&order);
            let doc = match format {
                Format::Csv => {
                    let mut out = String::from("colour");
                    for c in &order {
                        out.push_str(&format!(",{c}"));
                    }
                    out.push('\n');
                    for (r, c) in order.iter().enumerate() {
                        out.push_str(&c.to_string());
                        for v in &matrix[r] {
                            out.push_str(&format!(",{v}"));
                        }
                        out.push('\n');
                    }
                    out
                }
                Format::Json => envelope(
                    "energy",
                    serde_json::json!({"n": n}),
                    serde_json::json!({
                        "colours": order.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "matrix": matrix,
                    }),
                ),
                Format::Text => {
                    let mut out = String::new();
                    let width = 6;
                    out.push_str(&format!("{:width$}", ""));
                    for c in &order {
                        out.push_str(&format!("{:>width$}", c.to_string()));
                    }
                    out.push('\n');
                    for (r, c) in order.iter().enumerate() {
                        out.push_str(&format!("{:width$}", c.to_string()));
                        for v in &matrix[r] {
                            out.push_str(&format!("{v:>width$}"));
                        }
                        out.push('\n');
                    }
                    out
                }
                Format::Dot => return Err(("energy has no dot format".into(), true)),
            };
            Ok((doc, true))
        }
        Command::Graph { n, format } => {
            let g = pair_graph(*n).map_err(|e| (e.to_string(), false))?;
            let doc = match format {
                Format::Dot => g.to_dot(),
                Format::Json => envelope(
                    "graph",
                    serde_json::json!({"n": n}),
                    serde_json::json!({
                        "vertices": g.vertices.len(),
                        "edges": g.edges.len(),
                        "connected": g.connected,
                    }),
                ),
                _ => return Err(("graph supports dot or json".into(), true)),
            };
            Ok((doc, true))
        }
        Command::Enumerate {
            n,
            level,
            max_weight,
            minimal,
            format,
        } => {
            let list = enumerate_grounded(*n, *level, *max_weight, *minimal)
                .map_err(|e| (e.to_string(), false))?;
            let doc = match format {
                Format::Json => envelope(
                    "enumerate",
                    serde_json::json!({
                        "n": n, "level": level, "max-weight": max_weight, "minimal": minimal
                    }),
                    serde_json::json!({
                        "count": list.len(),
                        "partitions": list.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
                    }),
                ),
                Format::Text => {
                    let mut out = String::new();
                    for p in &list {
                        out.push_str(&format!("{p}\n"));
                    }
                    out
                }
                _ => return Err(("enumerate supports json or text".into(), true)),
            };
            Ok((doc, true))
        }
        Command::Capparelli {
            n,
            max_weight,
            spec,
            format,
        } => {
            let spec = load_spec(*n, spec).map_err(|m| (m, true))?;
            let list =
                enumerate_capparelli(&spec, *max_weight).map_err(|e| (e.to_string(), false))?;
            let doc = match format {
                Format::Json => envelope(
                    "capparelli",
                    serde_json::json!({"n": n, "max-weight": max_weight, "spec": spec.to_json()}),
                    serde_json::json!({
                        "count": list.len(),
                        "partitions": list
                            .iter()
                            .map(|p| {
                                p.parts
                                    .iter()
                                    .map(|q| serde_json::json!({
                                        "size": q.size,
                                        "colour": q.colour.to_string()
                                    }))
                                    .collect::<Vec<_>>()
                            })
                            .collect::<Vec<_>>(),
                    }),
                ),
                Format::Text => {
                    let mut out = String::new();
                    for p in &list {
                        let parts: Vec<String> = p.parts.iter().map(|q| q.to_string()).collect();
                        out.push_str(&format!("({})\n", parts.join(", ")));
                    }
                    out
                }
                _ => return Err(("capparelli supports json or text".into(), true)),
            };
            Ok((doc, true))
        }
        Command::Gf {
            n,
            level,
            max_weight,
            minimal,
            format,
        } => {
            if *format != Format::Json {
                return Err(("gf emits json".into(), true));
            }
            let s = gf_grounded(*n, *level, *max_weight, *minimal)
                .map_err(|e| (e.to_string(), false))?;
            Ok((
                series_doc(
                    "gf",
                    serde_json::json!({
                        "n": n, "level": level, "max-weight": max_weight, "minimal": minimal
                    }),
                    &s,
                ),
                true,
            ))
        }
        Command::Character {
            n,
            level,
            trunc,
            formula,
            format,
        } => {
            if *format != Format::Json {
                return Err(("character emits json".into(), true));
            }
            let s = match formula {
                Formula::Kp => characters::char_kp(*n, *level, *trunc),
                Formula::Positive => characters::char_positive(*n, *level, *trunc),
                Formula::Ct => characters::gp_ct_shifted(*n, *level, *trunc),
                Formula::Lattice => characters::gp_lattice(*n, *trunc),
                Formula::Theta => characters::gp_theta(*n, *trunc),
            }
            .map_err(|e| (e.to_string(), false))?;
            let name = match formula {
                Formula::Kp => "kp",
                Formula::Positive => "positive",
                Formula::Ct => "ct",
                Formula::Lattice => "lattice",
                Formula::Theta => "theta",
            };
            Ok((
                series_doc(
                    "character",
                    serde_json::json!({"n": n, "level": level, "trunc": trunc, "formula": name}),
                    &s,
                ),
                true,
            ))
        }
        Command::Verify {
            n,
            level,
            trunc,
            spec,
            report,
        } => {
            let spec = match spec {
                Some(_) => Some(load_spec(*n, spec).map_err(|m| (m, true))?),
                None => None,
            };
            let rep: VerificationReport = characters::verify_all(*n, *level, *trunc, spec.as_ref())
                .map_err(|e| (e.to_string(), false))?;
            let doc = match report {
                Format::Json => envelope(
                    "verify",
                    serde_json::json!({
                        "n": n, "level": level, "trunc": trunc,
                        "spec": spec.as_ref().map(|s| s.to_json()),
                    }),
                    serde_json::json!({
                        "all-pass": rep.all_pass(),
                        "checks": rep.to_json(),
                    }),
                ),
                Format::Text => {
                    let mut out = String::new();
                    for c in &rep.checks {
                        let status = if c.pass { "PASS" } else { "FAIL" };
                        out.push_str(&format!("{status} {} ({} ms)", c.name, c.millis));
                        if let Some(d) = &c.detail {
                            out.push_str(&format!(": {d}"));
                        }
                        out.push('\n');
                    }
                    out.push_str(&format!(
                        "{} of {} checks passed\n",
                        rep.checks.iter().filter(|c| c.pass).count(),
                        rep.checks.len()
                    ));
                    out
                }
                _ => return Err(("verify reports json or text".into(), true)),
            };
            Ok((doc, rep.all_pass()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, all_pass)) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, doc) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    if stdout.write_all(doc.as_bytes()).is_err() {
                        return ExitCode::from(1);
                    }
                }
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err((msg, is_usage)) => {
            if is_usage {
                usage_error(&msg)
            } else {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        }
    }
}
