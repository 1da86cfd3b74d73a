//! Command-line front end: parse, normalize, validate, eval, quantize,
//! invariant, and oracle subcommands with tsv or json output.
//!
//! Exit codes: 0 success, 1 user error (parse/arity/validation/bad
//! flags), 2 resource cap exceeded.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tqft::cob::{dsl, normalize};
use tqft::error::Error;
use tqft::frobenius::{center_of_group_algebra, CheckStatus, Evaluator, FrobeniusAlgebra};
use tqft::group::{FiniteGroup, GroupPresentation, DEFAULT_HOM_CAP};
use tqft::linalg::{fmt_q, LinearMap};
use tqft::manifold::{closed_surface_term, invariant, oracle_report, ManifoldSpec};
use tqft::span::{quantize, GroupCtx, DEFAULT_SPAN_CAP};

#[derive(Parser)]
#[command(name = "tqft", about = "2d TQFT workbench over exact rationals", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Count,
    Frobenius,
    Span,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a cobordism expression and echo its tree and arity.
    Parse {
        #[arg(long)]
        expr: String,
    },
    /// Print the topological normal form of an expression.
    Normalize {
        #[arg(long)]
        expr: String,
    },
    /// Check the Frobenius axioms of an algebra file.
    Validate {
        #[arg(long)]
        algebra: String,
    },
    /// Evaluate an expression to a rational matrix through a
    /// Frobenius algebra (from a file, or the center of a group
    /// algebra).
    Eval {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        source: AlgebraSource,
    },
    /// Evaluate an expression through the groupoid-span backend.
    Quantize {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        group: String,
    },
    /// Closed-manifold invariant |Hom(pi_1, G)| / |G|.
    Invariant {
        #[command(flatten)]
        manifold: ManifoldArg,
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Backend::Count)]
        backend: Backend,
    },
    /// Compare all three backends on closed surfaces up to a genus.
    Oracle {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_genus: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AlgebraSource {
    /// Path to an algebra file.
    #[arg(long)]
    algebra: Option<String>,
    /// Group name; uses the center of its group algebra.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ManifoldArg {
    /// Closed surface of this genus.
    #[arg(long)]
    genus: Option<usize>,
    /// Lens space L(p,q), written "p,q".
    #[arg(long)]
    lens: Option<String>,
    /// The 3-torus.
    #[arg(long)]
    torus3: bool,
    /// Path to a presentation file for pi_1.
    #[arg(long)]
    presentation: Option<String>,
}

fn caps() -> (u64, u64) {
    match std::env::var("TQFT_ENUM_CAP").ok().and_then(|v| v.parse::<u64>().ok()) {
        Some(cap) => (cap, cap),
        None => (DEFAULT_HOM_CAP, DEFAULT_SPAN_CAP),
    }
}

fn print_matrix(m: &LinearMap, format: Format) {
    match format {
        Format::Tsv => print!("{}", m.mat),
        Format::Json => {
            let rows: Vec<Vec<String>> = (0..m.mat.rows())
                .map(|i| (0..m.mat.cols()).map(|j| fmt_q(m.mat.get(i, j))).collect())
                .collect();
            let doc = json!({
                "dim": m.dim,
                "in_arity": m.in_arity,
                "out_arity": m.out_arity,
                "entries": rows,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
}

fn load_algebra(source: &AlgebraSource) -> Result<FrobeniusAlgebra, Error> {
    match (&source.algebra, &source.group) {
        (Some(path), None) => FrobeniusAlgebra::from_json(&std::fs::read_to_string(path)?),
        (None, Some(name)) => Ok(center_of_group_algebra(&FiniteGroup::by_name(name)?)),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let (hom_cap, span_cap) = caps();
    match &cli.command {
        Command::Parse { expr } => {
            let t = dsl::parse(expr)?;
            match cli.format {
                Format::Tsv => {
                    println!("expr\t{}", dsl::pretty(&t));
                    println!("in\t{}", t.input());
                    println!("out\t{}", t.output());
                }
                Format::Json => {
                    let doc = json!({
                        "expr": dsl::pretty(&t),
                        "in": t.input(),
                        "out": t.output(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
        }
        Command::Normalize { expr } => {
            let nf = normalize(&dsl::parse(expr)?);
            match cli.format {
                Format::Tsv => {
                    for c in &nf.components {
                        println!(
                            "component\tin={:?}\tout={:?}\tgenus={}",
                            c.inputs, c.outputs, c.genus
                        );
                    }
                    for g in &nf.closed {
                        println!("closed\tgenus={g}");
                    }
                }
                Format::Json => {
                    let comps: Vec<_> = nf
                        .components
                        .iter()
                        .map(|c| json!({"in": c.inputs, "out": c.outputs, "genus": c.genus}))
                        .collect();
                    let doc = json!({
                        "in": nf.input,
                        "out": nf.output,
                        "components": comps,
                        "closed": nf.closed,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
        }
        Command::Validate { algebra } => {
            let a = FrobeniusAlgebra::from_json(&std::fs::read_to_string(algebra)?)?;
            let report = a.validate();
            match cli.format {
                Format::Tsv => {
                    for e in &report.entries {
                        match &e.status {
                            CheckStatus::Pass => println!("{}\tpass", e.axiom),
                            CheckStatus::Fail(w) => println!("{}\tfail\twitness={w:?}", e.axiom),
                            CheckStatus::Skipped => println!("{}\tskipped", e.axiom),
                        }
                    }
                }
                Format::Json => {
                    let entries: Vec<_> = report
                        .entries
                        .iter()
                        .map(|e| match &e.status {
                            CheckStatus::Pass => json!({"axiom": e.axiom, "status": "pass"}),
                            CheckStatus::Fail(w) => {
                                json!({"axiom": e.axiom, "status": "fail", "witness": w})
                            }
                            CheckStatus::Skipped => json!({"axiom": e.axiom, "status": "skipped"}),
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&json!({"entries": entries})).unwrap());
                }
            }
            if !report.all_pass() {
                return Err(Error::Validation("algebra failed one or more axioms".into()));
            }
        }
        Command::Eval { expr, source } => {
            let t = dsl::parse(expr)?;
            let a = load_algebra(source)?;
            let e = Evaluator::new(&a)?;
            print_matrix(&e.evaluate(&t), cli.format);
        }
        Command::Quantize { expr, group } => {
            let t = dsl::parse(expr)?;
            let ctx = GroupCtx::new(FiniteGroup::by_name(group)?);
            print_matrix(&quantize(&t, ctx, span_cap)?, cli.format);
        }
        Command::Invariant { manifold, group, backend } => {
            let g = FiniteGroup::by_name(group)?;
            let spec = parse_manifold(manifold)?;
            let is_surface =
                matches!(spec.kind, tqft::manifold::ManifoldKind::Surface { .. });
            if !is_surface && !matches!(backend, Backend::Count) {
                return Err(Error::BadInput(
                    "frobenius/span backends apply only to closed surfaces; use --backend count"
                        .into(),
                ));
            }
            let mut rows: Vec<(&str, String)> = Vec::new();
            if matches!(backend, Backend::Count | Backend::All) {
                rows.push(("count", fmt_q(&invariant(&spec, &g, hom_cap)?)));
            }
            if matches!(backend, Backend::Frobenius | Backend::All) {
                let e = Evaluator::new(&center_of_group_algebra(&g))?;
                let genus = match spec.kind {
                    tqft::manifold::ManifoldKind::Surface { genus } => genus,
                    _ => unreachable!(),
                };
                rows.push(("frobenius", fmt_q(&e.closed_invariant(genus))));
            }
            if matches!(backend, Backend::Span | Backend::All) {
                let genus = match spec.kind {
                    tqft::manifold::ManifoldKind::Surface { genus } => genus,
                    _ => unreachable!(),
                };
                let ctx = GroupCtx::new(g.clone());
                let m = quantize(&closed_surface_term(genus), ctx, span_cap)?;
                rows.push(("span", fmt_q(m.scalar().expect("closed term gives a scalar"))));
            }
            match cli.format {
                Format::Tsv => {
                    for (name, value) in &rows {
                        println!("{name}\t{value}");
                    }
                }
                Format::Json => {
                    let doc: serde_json::Map<String, serde_json::Value> = rows
                        .iter()
                        .map(|(name, value)| (name.to_string(), json!(value)))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
        }
        Command::Oracle { group, max_genus } => {
            let g = FiniteGroup::by_name(group)?;
            let rows = oracle_report(&g, *max_genus, hom_cap, span_cap)?;
            match cli.format {
                Format::Tsv => {
                    println!("genus\tcount\tfrobenius\tspan\tall_equal");
                    for r in &rows {
                        println!(
                            "{}\t{}\t{}\t{}\t{}",
                            r.genus,
                            fmt_q(&r.counting),
                            fmt_q(&r.frobenius),
                            fmt_q(&r.span),
                            r.all_equal
                        );
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "genus": r.genus,
                                "count": fmt_q(&r.counting),
                                "frobenius": fmt_q(&r.frobenius),
                                "span": fmt_q(&r.span),
                                "all_equal": r.all_equal,
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&json!({"rows": rows})).unwrap());
                }
            }
        }
    }
    Ok(())
}

fn parse_manifold(arg: &ManifoldArg) -> Result<ManifoldSpec, Error> {
    if let Some(genus) = arg.genus {
        return Ok(ManifoldSpec::surface(genus));
    }
    if let Some(lens) = &arg.lens {
        let (p, q) = lens
            .split_once(',')
            .ok_or_else(|| Error::BadInput(format!("--lens expects \"p,q\", got {lens:?}")))?;
        let p: u64 = p.trim().parse().map_err(|_| Error::BadInput(format!("bad p in {lens:?}")))?;
        let q: u64 = q.trim().parse().map_err(|_| Error::BadInput(format!("bad q in {lens:?}")))?;
        return ManifoldSpec::lens(p, q);
    }
    if arg.torus3 {
        return Ok(ManifoldSpec::torus3());
    }
    if let Some(path) = &arg.presentation {
        let p = GroupPresentation::parse(&std::fs::read_to_string(path)?)?;
        return Ok(ManifoldSpec::custom(p));
    }
    unreachable!("clap enforces exactly one manifold flag")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::ResourceCap { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
