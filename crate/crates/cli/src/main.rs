use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use shatter_core::geometry::{
    cell_system_convex, convex_report, count_cells_formula, search_convex_realization,
    verify_geometric_str, Arrangement,
};
use shatter_core::graphs::{
    cyclic_system, graph_vc_oracles, reachability_system, verify_cycle_inequality,
    verify_reachability_equality, Graph, MAX_ORACLE_EDGES,
};
use shatter_core::shattering::{dual_vc_dim, vc_dim};
use shatter_core::sweep::{sweep_exhaustive, sweep_random};
use shatter_core::{
    apply_sequence, se_report, sstr_family, str_family, Error, Family, OpSequence, Suite, System,
};

/// Families are printed by `analyze` only up to this many dimensions.
const FAMILY_PRINT_DIMS: usize = 10;

#[derive(Parser)]
#[command(name = "shatter", version, about = "Shattering and SE analysis of set systems")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// SE verdicts, sandwich, VC dimensions and families of a system file
    Analyze { file: PathBuf },
    /// str and sstr of a system file
    Families { file: PathBuf },
    /// Apply an operator sequence such as `i:x,u:y,z,d:w`
    Op { file: PathBuf, sequence: String },
    /// Cell system of an arrangement file, checked against independence and regularity
    Geom { file: PathBuf },
    /// Search for an arrangement and convex body realizing a system
    Realize {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Orientation systems of a graph file
    Graph {
        #[command(subcommand)]
        kind: GraphKind,
    },
    /// Check an invariant suite over all systems on n dimensions, or random ones
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        suite: String,
        /// Check this many seeded random systems instead of all of them
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GraphKind {
    /// Orientations with a directed cycle
    Cyclic { file: PathBuf },
    /// Orientations in which every target is reachable from the source
    Reach {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
    },
}

enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Counterexample,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_system(path: &Path) -> Result<System, Failure> {
    Ok(System::parse(&read(path)?)?)
}

fn family_line(f: &Family) -> String {
    f.render_sets().join(" ")
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn analyze(path: &Path, format: Format) -> Outcome {
    let s = read_system(path)?;
    let report = se_report(&s)?;
    let families = (s.n() <= FAMILY_PRINT_DIMS).then(|| (str_family(&s), sstr_family(&s)));
    Ok(match format {
        Format::Text => {
            let mut out = report.to_string();
            if let Some((str_f, sstr_f)) = &families {
                out += &format!("str: {}\nsstr: {}\n", family_line(str_f), family_line(sstr_f));
            }
            out
        }
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if let Some((str_f, sstr_f)) = &families {
                v["str"] = json!(str_f.render_sets());
                v["sstr"] = json!(sstr_f.render_sets());
            }
            pretty(v)
        }
    })
}

fn families(path: &Path, format: Format) -> Outcome {
    let s = read_system(path)?;
    let (str_f, sstr_f) = (str_family(&s), sstr_family(&s));
    Ok(match format {
        Format::Text => format!(
            "str: {}\nsstr: {}\nvc: {}\ndvc: {}\n",
            family_line(&str_f),
            family_line(&sstr_f),
            vc_dim(&s),
            dual_vc_dim(&s)
        ),
        Format::Json => pretty(json!({
            "str": str_f.render_sets(),
            "sstr": sstr_f.render_sets(),
            "vc": vc_dim(&s),
            "dvc": dual_vc_dim(&s),
        })),
    })
}

fn op(path: &Path, sequence: &str, format: Format) -> Outcome {
    let s = read_system(path)?;
    let q = OpSequence::parse(sequence)?;
    let r = apply_sequence(&s, &q)?;
    Ok(match format {
        Format::Text => r.serialize(),
        Format::Json => pretty(json!({
            "dims": r.dims(),
            "members": r.members().map(|v| r.vertex_string(v)).collect::<Vec<_>>(),
        })),
    })
}

fn geom(path: &Path, format: Format) -> Outcome {
    let (h, k) = Arrangement::parse(&read(path)?)?;
    let report = verify_geometric_str(&h)?;
    let count = count_cells_formula(&h)?;
    let convex = if k.is_whole_space() {
        None
    } else {
        Some((cell_system_convex(&h, &k)?, convex_report(&h, &k)?))
    };
    Ok(match format {
        Format::Text => {
            let mut out = format!(
                "cells: {}\nindependent: {}\npremise: {}\nSE: {}\nstr: {}\nsstr: {}\n",
                count.cells,
                count.independent,
                count.premise,
                report.se,
                family_line(&report.str_family),
                family_line(&report.sstr_family)
            );
            if let Some((sys, rep)) = &convex {
                out += "convex:\n";
                out += &rep.to_string();
                out += &sys.serialize();
            }
            out
        }
        Format::Json => {
            let mut v = json!({ "cells": count, "geometry": report });
            if let Some((sys, rep)) = &convex {
                v["convex"] = json!({ "report": rep, "system": sys.serialize() });
            }
            pretty(v)
        }
    })
}

fn realize(path: &Path, dim: usize, trials: usize, seed: u64, format: Format) -> Outcome {
    let s = read_system(path)?;
    let hit = search_convex_realization(&s, dim, trials, seed)?;
    Ok(match (format, hit) {
        (Format::Text, Some((h, k))) => format!("found: true\n{}", h.to_text(&k)),
        (Format::Text, None) => format!("found: false\ntrials: {trials}\n"),
        (Format::Json, hit) => pretty(json!({
            "found": hit.is_some(),
            "trials": trials,
            "arrangement": hit.map(|(h, k)| h.to_text(&k)),
        })),
    })
}

fn graph(kind: &GraphKind, format: Format) -> Outcome {
    match kind {
        GraphKind::Cyclic { file } => {
            let g = Graph::parse(&read(file)?)?;
            let s = cyclic_system(&g)?;
            let counts = verify_cycle_inequality(&g)?;
            let oracles = oracles_if_small(&g, &g.vertices()[..g.vertices().len().min(1)])?;
            Ok(match format {
                Format::Text => {
                    let mut out = format!(
                        "cyclic_orientations: {}\ncyclic_subgraphs: {}\nacyclic_orientations: {}\nforests: {}\n",
                        counts.cyclic_orientations,
                        counts.cyclic_subgraphs,
                        counts.acyclic_orientations,
                        counts.forests
                    );
                    if let Some(o) = &oracles {
                        out += &format!(
                            "max_subforest: {}\nvc_acyclic: {}\ngirth: {}\ndvc_cyclic: {}\n",
                            o.max_subforest,
                            o.vc_acyclic,
                            o.girth.map_or("-".to_string(), |c| c.to_string()),
                            o.dvc_cyclic
                        );
                    }
                    out + &s.serialize()
                }
                Format::Json => pretty(json!({
                    "counts": counts,
                    "oracles": oracles,
                    "system": s.serialize(),
                })),
            })
        }
        GraphKind::Reach { file, source, targets } => {
            let g = Graph::parse(&read(file)?)?;
            let s = reachability_system(&g, source, targets)?;
            let (orientations, subgraphs) = verify_reachability_equality(&g, source, targets)?;
            let report = se_report(&s)?;
            let oracles = if g.m() <= MAX_ORACLE_EDGES {
                Some(graph_vc_oracles(&g, source, targets)?)
            } else {
                None
            };
            Ok(match format {
                Format::Text => {
                    let mut out = format!(
                        "orientations: {orientations}\nsubgraphs: {subgraphs}\nSE: {}\n",
                        report.se
                    );
                    if let Some(o) = &oracles {
                        out += &format!(
                            "steiner: {}\nvc_reach: {}\nmin_cut: {}\nvc_unreach: {}\n",
                            o.steiner.map_or("-".to_string(), |c| c.to_string()),
                            o.vc_reach,
                            o.min_cut.map_or("-".to_string(), |c| c.to_string()),
                            o.vc_unreach
                        );
                    }
                    out + &s.serialize()
                }
                Format::Json => pretty(json!({
                    "orientations": orientations,
                    "subgraphs": subgraphs,
                    "report": report,
                    "oracles": oracles,
                    "system": s.serialize(),
                })),
            })
        }
    }
}

fn oracles_if_small(g: &Graph, source: &[String]) -> Result<Option<shatter_core::graphs::VcOracleReport>, Failure> {
    match source.first() {
        Some(s) if g.m() <= MAX_ORACLE_EDGES => Ok(Some(graph_vc_oracles(g, s, &[s.as_str()])?)),
        _ => Ok(None),
    }
}

fn sweep(n: usize, suite: &str, random: Option<u64>, seed: u64, jobs: Option<usize>, format: Format) -> Outcome {
    let suite: Suite = suite.parse()?;
    let out = match random {
        None => sweep_exhaustive(n, suite, jobs)?,
        Some(count) => sweep_random(n, suite, count, seed, jobs)?,
    };
    let text = match format {
        Format::Text => out.to_string(),
        Format::Json => pretty(serde_json::to_value(&out).expect("outcome serializes")),
    };
    if out.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Counterexample)
    }
}

fn run(cli: &Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Analyze { file } => analyze(file, f),
        Command::Families { file } => families(file, f),
        Command::Op { file, sequence } => op(file, sequence, f),
        Command::Geom { file } => geom(file, f),
        Command::Realize { file, dim, trials, seed } => realize(file, *dim, *trials, *seed, f),
        Command::Graph { kind } => graph(kind, f),
        Command::Sweep { n, suite, random, seed, jobs } => sweep(*n, suite, *random, *seed, *jobs, f),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Counterexample) => ExitCode::from(1),
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if let Error::TheoremViolation { witness: Some(w), .. } = &e {
                eprint!("witness:\n{}", w.serialize());
            }
            ExitCode::from(match e {
                Error::Capacity(_) => 3,
                Error::TheoremViolation { .. } => 4,
                _ => 2,
            })
        }
    }
}
