mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stackfish::bijection::{check_transfer, phi, phi_inverse};
use stackfish::construct::waspwaist_decompose;
use stackfish::decomp::{classify, decompose, tree_of_perm, DecompKind};
use stackfish::enumeration::{
    brute_force, enumerate_2ssp, verify_with, CountTable, Method, VerifyOptions,
};
use stackfish::fish::{Fish, Slot};
use stackfish::json::{decomposition_to_json, fish_from_json, fish_to_json};
use stackfish::perm::{IntSequence, Permutation};
use stackfish::series::{check_system_on, iterate_t};
use stackfish::Error;

/// Two-stack sortable permutations and fighting fish.
///
/// INPUT arguments are literal text, `-` for standard input, or `@PATH` to
/// read a file. Permutations are comma-separated (`2,4,3,1`); fish use the
/// `ff-v1` JSON encoding.
#[derive(Parser, Debug)]
#[command(name = "stackfish", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply one stack-sorting pass to a sequence of distinct integers.
    Sort {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Report whether a permutation is two-stack sortable (exit 1 if not).
    Check { input: String },
    /// One decomposition step of a permutation, or of a fish given as JSON.
    Decompose {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Map a two-stack sortable permutation to its fish.
    Phi {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Map a fish (JSON) back to its permutation.
    PhiInverse {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the two-stack sortable permutations of one size.
    Enumerate {
        #[arg(long, short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
        method: MethodArg,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Print counts by (ascents, descents) instead of the list.
        #[arg(long)]
        summary: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve the functional equation for the refined generating function.
    Gf {
        #[arg(long)]
        order: usize,
        /// Also check the four specialized equations.
        #[arg(long)]
        check_system: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run every exhaustive cross-check up to a size (exit 1 on failure).
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: bool,
    },
    /// Draw a fish (JSON) or the image of a permutation as SVG.
    Render {
        input: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Grammar,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Resource(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read_input(arg: &str) -> CliResult<String> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn read_permutation(arg: &str) -> CliResult<Permutation> {
    Ok(read_input(arg)?.trim().parse::<Permutation>()?)
}

fn read_fish(arg: &str) -> CliResult<Fish> {
    let f = fish_from_json(&read_input(arg)?)?;
    f.validate().map_err(|d| Failure::Domain(format!("invalid fish: {d}")))?;
    Ok(f)
}

fn emit(output: Option<&PathBuf>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn line(text: impl AsRef<str>) -> String {
    format!("{}\n", text.as_ref())
}

fn pretty(v: &Value) -> String {
    line(serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

fn perm_text(p: &Permutation) -> String {
    if p.is_empty() {
        "ε".into()
    } else {
        p.to_string()
    }
}

fn fish_text(f: &Fish) -> CliResult<String> {
    if f.is_empty() {
        return Ok(line("empty fish"));
    }
    let st = f.stats().map_err(Error::from)?;
    let mut out = format!(
        "cells {} head {}\nsize {} lsize {} rsize {} fin {} tails {}\n",
        f.len(),
        f.head().expect("nonempty"),
        st.size,
        st.lsize,
        st.rsize,
        st.fin,
        st.tails
    );
    for c in 0..f.len() {
        let slots: Vec<String> = Slot::ALL
            .iter()
            .map(|&s| match f.gluing(c, s) {
                Some(g) => format!("{s} {}.{}", g.cell, g.slot),
                None => format!("{s} -"),
            })
            .collect();
        out.push_str(&line(format!("{c}: {}", slots.join("  "))));
    }
    Ok(out)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Sort { input, format } => {
            let seq: IntSequence = read_input(&input)?.trim().parse()?;
            let sorted = seq.stack_sort();
            match format {
                Format::Text => emit(None, &line(sorted.to_string())),
                Format::Json => emit(
                    None,
                    &pretty(&json!({"input": seq.items(), "sorted": sorted.items()})),
                ),
                Format::Svg => Err(Failure::Usage("sort has no SVG output".into())),
            }
        }
        Command::Check { input } => {
            let p = read_permutation(&input)?;
            if p.is_empty() {
                return Err(Failure::Usage("empty permutation".into()));
            }
            if p.is_two_stack_sortable()? {
                emit(None, &line("2-stack-sortable"))
            } else {
                emit(None, &line("not 2-stack-sortable"))?;
                Err(Failure::Domain(String::new()))
            }
        }
        Command::Decompose { input, format } => {
            let text = read_input(&input)?;
            if text.trim_start().starts_with('{') {
                let f = fish_from_json(&text)?;
                f.validate().map_err(|d| Failure::Domain(format!("invalid fish: {d}")))?;
                let d = waspwaist_decompose(&f)?;
                return match format {
                    Format::Json => emit(None, &pretty(&decomposition_to_json(&d))),
                    Format::Text => {
                        let mut out = line(format!("kind {}", d.kind));
                        out.push_str("p1:\n");
                        out.push_str(&fish_text(&d.p1)?);
                        out.push_str("p2:\n");
                        out.push_str(&fish_text(&d.p2)?);
                        emit(None, &out)
                    }
                    Format::Svg => Err(Failure::Usage("decompose has no SVG output".into())),
                };
            }
            let p: Permutation = text.trim().parse()?;
            let (p1, p2) = decompose(&p)?;
            let kind = classify(&p)?;
            let tree = tree_of_perm(&p)?;
            match format {
                Format::Text => emit(
                    None,
                    &format!(
                        "kind {kind}\np1 {}\np2 {}\ntree {tree}\n",
                        perm_text(&p1),
                        perm_text(&p2)
                    ),
                ),
                Format::Json => {
                    let (name, i) = match kind {
                        DecompKind::C1 => ("C1", None),
                        DecompKind::C2(i) => ("C2", Some(i)),
                    };
                    emit(
                        None,
                        &pretty(&json!({
                            "kind": name,
                            "i": i,
                            "p1": p1.items(),
                            "p2": p2.items(),
                            "tree": tree.to_string(),
                        })),
                    )
                }
                Format::Svg => Err(Failure::Usage("decompose has no SVG output".into())),
            }
        }
        Command::Phi {
            input,
            format,
            output,
        } => {
            let p = read_permutation(&input)?;
            let f = phi(&p)?;
            let text = match format {
                Format::Text => {
                    let report = check_transfer(&p)?;
                    let mut out = fish_text(&f)?;
                    out.push_str(&line(format!(
                        "statistics transfer: {}",
                        if report.passed() { "ok" } else { "MISMATCH" }
                    )));
                    out
                }
                Format::Json => pretty(&fish_to_json(&f, true)),
                Format::Svg => render::render_svg(&f)?,
            };
            emit(output.as_ref(), &text)
        }
        Command::PhiInverse { input, format } => {
            let f = read_fish(&input)?;
            let p = phi_inverse(&f)?;
            match format {
                Format::Json => emit(None, &pretty(&json!({"permutation": p.items()}))),
                _ => emit(None, &line(perm_text(&p))),
            }
        }
        Command::Enumerate {
            n,
            method,
            workers,
            summary,
            format,
        } => {
            if n == 0 {
                return Err(Failure::Usage("n must be at least 1".into()));
            }
            let perms = match method {
                MethodArg::Brute => brute_force(n, workers)?,
                MethodArg::Grammar => enumerate_2ssp(n, Method::Grammar)?,
            };
            let table: CountTable = perms.iter().collect();
            match (format, summary) {
                (Format::Json, true) => {
                    let mut v = table.to_json();
                    v["n"] = json!(n);
                    v["count"] = json!(perms.len());
                    emit(None, &pretty(&v))
                }
                (Format::Json, false) => emit(
                    None,
                    &pretty(&json!({
                        "n": n,
                        "count": perms.len(),
                        "permutations": perms.iter().map(|p| p.items()).collect::<Vec<_>>(),
                    })),
                ),
                (_, true) => {
                    let mut out = line(format!("n {n} count {}", perms.len()));
                    for ((a, d), c) in &table.by_asc_des {
                        out.push_str(&line(format!("asc {a} des {d}: {c}")));
                    }
                    emit(None, &out)
                }
                (_, false) => {
                    let out: String = perms.iter().map(|p| line(p.to_string())).collect();
                    emit(None, &out)
                }
            }
        }
        Command::Gf {
            order,
            check_system,
            json,
        } => {
            let t = iterate_t(order)?;
            let report = if check_system {
                Some(check_system_on(&t)?)
            } else {
                None
            };
            let counts = t.counts()?;
            if json {
                let mut v = json!({
                    "order": order,
                    "counts": counts[1..].iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "series": t,
                });
                if let Some(r) = &report {
                    v["system"] = serde_json::to_value(r).expect("plain struct");
                }
                emit(None, &pretty(&v))?;
            } else {
                let mut out = t.to_string();
                if let Some(r) = &report {
                    out.push_str(&r.to_string());
                }
                emit(None, &out)?;
            }
            match report {
                Some(r) if !r.passed() => Err(Failure::Domain("nonzero residual".into())),
                _ => Ok(()),
            }
        }
        Command::Verify {
            max_n,
            workers,
            json,
        } => {
            let opts = VerifyOptions {
                workers,
                ..VerifyOptions::default()
            };
            let report = verify_with(max_n, &opts)?;
            if json {
                emit(None, &pretty(&serde_json::to_value(&report).expect("plain struct")))?;
            } else {
                emit(None, &line(report.to_string()))?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Domain(String::new()))
            }
        }
        Command::Render { input, output } => {
            let text = read_input(&input)?;
            let f = if text.trim_start().starts_with('{') {
                let f = fish_from_json(&text)?;
                f.validate().map_err(|d| Failure::Domain(format!("invalid fish: {d}")))?;
                f
            } else {
                phi(&text.trim().parse()?)?
            };
            emit(output.as_ref(), &render::render_svg(&f)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
    }
}
