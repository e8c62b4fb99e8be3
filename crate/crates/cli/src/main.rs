//! `fuglede-lab`: tiling and spectral checks in finite abelian groups.
//!
//! Exit codes: 0 accepted, 1 refuted, 2 usage or input error, 3 inconclusive.
//! Reports go to stdout as JSON; diagnostics go to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fuglede_core::constructions::data;
use fuglede_core::constructions::lift::{grid_lift, grid_lift_tiling};
use fuglede_core::cover::{refute_by_branching, replay_tree, verify_facts, PartialCover, Refutation, TreeFile, DEFAULT_DEPTH};
use fuglede_core::io::{read_set, read_set_dir};
use fuglede_core::scan::{fuglede_scan, universal_scan, UniversalRow, DEFAULT_SCAN_BOUND};
use fuglede_core::spectral::{
    build_witness_table, find_spectrum, is_spectrum, SearchOutcome, UniversalVerdict, DEFAULT_BUDGET,
};
use fuglede_core::tiling::{
    enumerate_complements_with, is_tiling_pair, pullback_complement, tiles_group, Branching, CheckMode,
    GroupHomomorphism, TilingVerdict,
};
use fuglede_core::transcript::{self, LayeredParams, Transcript};
use fuglede_core::{zero_set, Error, Group, PointSet};

const ACCEPTED: u8 = 0;
const REFUTED: u8 = 1;
const FAILURE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fuglede-lab", version, about = "Exact tile and spectrum verification in finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Least,
    Fewest,
}

impl From<BranchArg> for Branching {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Least => Branching::LeastElement,
            BranchArg::Fewest => Branching::FewestCandidates,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether T + T' is a tiling (both criteria).
    CheckTiling {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long)]
        complement: PathBuf,
    },
    /// List complements of T that contain 0.
    EnumerateComplements {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long, default_value_t = 100)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Least)]
        branching: BranchArg,
    },
    /// Pull a cyclic complement back along x -> <y, x> mod m.
    Pullback {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long)]
        y: String,
        #[arg(long)]
        target_complement: String,
        /// Target modulus; the group exponent when omitted.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Decide whether T tiles its group.
    Tiles {
        #[arg(long)]
        tile: PathBuf,
    },
    CheckSpectrum {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
    },
    FindSpectrum {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check a candidate against every complement of T.
    CheckUniversal {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    WitnessTable {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        complements: PathBuf,
    },
    ZeroSet {
        #[arg(long)]
        set: PathBuf,
    },
    /// Facts 1-3 of the six-cycle argument for a tile and a candidate set P.
    ProveFacts {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long)]
        p_set: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Refute a partial complement by propagation and branching.
    Refute {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long = "in")]
        inside: PathBuf,
        #[arg(long = "out")]
        outside: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        emit_tree: Option<PathBuf>,
    },
    /// Re-check a proof tree file.
    ReplayTree { tree: PathBuf },
    /// Run a built-in pipeline and emit its certificate transcript.
    Reproduce {
        #[command(subcommand)]
        which: Reproduce,
    },
    /// Regenerate a transcript and compare it byte for byte.
    Replay { transcript: PathBuf },
    /// Grid lift B(k) = A + n{0..k-1}^d.
    Lift {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        complement: Option<PathBuf>,
    },
    FugledeScan {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        bound: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    UniversalScan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        bound: u32,
    },
    /// Write a built-in set (for example APPENDIX_T) as a JSON set file.
    Export { name: String },
}

#[derive(Subcommand, Debug)]
enum Reproduce {
    Hadamard {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    PropUsc {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    Appendix {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    Layered {
        /// Moduli, e.g. "6" or "4,6"; needed for header-less text files.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        tile: PathBuf,
        /// Use only the first N complements found.
        #[arg(long)]
        complements: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Outcome {
    code: u8,
    report: Value,
}

fn outcome(code: u8, report: Value) -> Result<Outcome, Error> {
    Ok(Outcome { code, report })
}

fn parse_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse().map_err(|_| Error::Parse { line: 1, column: i + 1, message: format!("not an integer: {t}") })
        })
        .collect()
}

fn coords(s: &PointSet) -> Value {
    json!(s.coords_rows())
}

fn set_json(s: &PointSet) -> Value {
    json!({ "moduli": s.group().moduli(), "points": s.coords_rows() })
}

fn read(path: &Path) -> Result<PointSet, Error> {
    read_set(path, None)
}

fn read_in(path: &Path, g: &Group) -> Result<PointSet, Error> {
    read_set(path, Some(g))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit_transcript(t: &Transcript, output: Option<&Path>) -> Result<Outcome, Error> {
    let text = t.to_json();
    let code = t.verdict.exit_code() as u8;
    match output {
        Some(p) => {
            write_file(p, &text)?;
            outcome(code, json!({ "kind": t.kind, "verdict": t.verdict, "transcript": p.display().to_string() }))
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(Outcome { code, report: Value::Null })
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::CheckTiling { tile, complement } => {
            let t = read(&tile)?;
            let c = read_in(&complement, t.group())?;
            match is_tiling_pair(&t, &c, CheckMode::Audit)? {
                TilingVerdict::Accepted(cert) => outcome(
                    ACCEPTED,
                    json!({ "verdict": "accepted", "criterion": cert.criterion, "audited": cert.audited,
                            "transcript": cert.transcript }),
                ),
                TilingVerdict::Refuted(r) => {
                    outcome(REFUTED, json!({ "verdict": "refuted", "reason": r.to_string() }))
                }
            }
        }
        Command::EnumerateComplements { tile, limit, branching } => {
            let t = read(&tile)?;
            let e = enumerate_complements_with(&t, limit, branching.into())?;
            let code = if e.complements.is_empty() {
                if e.exhausted { REFUTED } else { INCONCLUSIVE }
            } else {
                ACCEPTED
            };
            outcome(
                code,
                json!({ "count": e.complements.len(), "exhausted": e.exhausted,
                        "complements": e.complements.iter().map(coords).collect::<Vec<_>>() }),
            )
        }
        Command::Pullback { tile, y, target_complement, modulus } => {
            let t = read(&tile)?;
            let g = t.group();
            let m = modulus.unwrap_or(g.exponent());
            let phi = GroupHomomorphism::new(g, &parse_list(&y)?, m)?;
            let zm = phi.target_group()?;
            let c = PointSet::from_coords(&zm, &parse_list(&target_complement)?.iter().map(|&x| [x]).collect::<Vec<_>>())?;
            let image = phi.image_of(&t)?;
            let base = json!({
                "y": phi.coefficients(), "modulus": m, "surjective": phi.is_surjective(),
                "injective_on_tile": phi.is_injective_on(&t), "image": image.indices(),
                "kernel_order": phi.kernel_order(),
            });
            match pullback_complement(&t, &phi, &c) {
                Ok(pb) => {
                    let mut r = base;
                    r["verdict"] = json!("accepted");
                    r["complement_size"] = json!(pb.complement.len());
                    r["audited"] = json!(pb.certificate.audited);
                    outcome(ACCEPTED, r)
                }
                Err(e @ (Error::NotInjective(_) | Error::NotATilingPair(_))) => {
                    let mut r = base;
                    r["verdict"] = json!("refuted");
                    r["reason"] = json!(e.to_string());
                    outcome(REFUTED, r)
                }
                Err(e) => Err(e),
            }
        }
        Command::Tiles { tile } => {
            let t = read(&tile)?;
            match tiles_group(&t)? {
                Some(c) => outcome(ACCEPTED, json!({ "verdict": "tile", "complement": coords(&c) })),
                None => outcome(REFUTED, json!({ "verdict": "not a tile" })),
            }
        }
        Command::CheckSpectrum { set, candidate } => {
            let t = read(&set)?;
            let l = read_in(&candidate, t.group())?;
            let c = is_spectrum(&t, &l)?;
            let violations: Vec<Vec<u32>> = c.violations.iter().map(|&v| t.group().coords(v)).collect();
            outcome(
                if c.accepted { ACCEPTED } else { REFUTED },
                json!({ "verdict": if c.accepted { "accepted" } else { "refuted" },
                        "size_matches": c.size_matches, "violations": violations }),
            )
        }
        Command::FindSpectrum { set, budget } => {
            let t = read(&set)?;
            let r = find_spectrum(&t, budget)?;
            match r.outcome {
                SearchOutcome::Found(l) => {
                    outcome(ACCEPTED, json!({ "verdict": "found", "spectrum": coords(&l), "nodes": r.nodes }))
                }
                SearchOutcome::NoneExists => outcome(REFUTED, json!({ "verdict": "none exists", "nodes": r.nodes })),
                SearchOutcome::Inconclusive => {
                    outcome(INCONCLUSIVE, json!({ "verdict": "inconclusive", "nodes": r.nodes }))
                }
            }
        }
        Command::CheckUniversal { set, candidate, limit } => {
            let t = read(&set)?;
            let s = read_in(&candidate, t.group())?;
            match fuglede_core::spectral::universal_spectrum_check_exhaustive(&t, &s, limit)? {
                UniversalVerdict::Universal { complements_checked } => outcome(
                    ACCEPTED,
                    json!({ "verdict": "universal", "complements_checked": complements_checked }),
                ),
                UniversalVerdict::NotUniversal { complement, violations } => outcome(
                    REFUTED,
                    json!({ "verdict": "not universal", "complement": coords(&complement),
                            "violations": violations.iter().map(|&v| t.group().coords(v)).collect::<Vec<_>>() }),
                ),
                UniversalVerdict::Inconclusive { complements_checked } => outcome(
                    INCONCLUSIVE,
                    json!({ "verdict": "inconclusive", "complements_checked": complements_checked }),
                ),
            }
        }
        Command::WitnessTable { set, complements } => {
            let t = read(&set)?;
            let files = read_set_dir(&complements, Some(t.group()))?;
            let list: Vec<PointSet> = files.iter().map(|(_, s)| s.clone()).collect();
            let table = build_witness_table(&t, &list)?;
            let g = t.group();
            let rows: Vec<Value> = table
                .witnesses
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    json!({ "v": g.coords(v),
                            "entries": (0..table.columns()).map(|j| table.entry(i, j).to_string()).collect::<Vec<_>>() })
                })
                .collect();
            outcome(
                ACCEPTED,
                json!({ "complements": files.iter().map(|(p, _)| p.display().to_string()).collect::<Vec<_>>(),
                        "common_zero_set": coords(&table.common_zero_set), "witnesses": rows,
                        "rows_nonvanishing": table.rows_nonvanishing() }),
            )
        }
        Command::ZeroSet { set } => {
            let t = read(&set)?;
            let z = zero_set(&t)?;
            outcome(ACCEPTED, json!({ "size": z.len(), "zero_set": coords(&z.members) }))
        }
        Command::ProveFacts { tile, p_set, depth } => {
            let t = read(&tile)?;
            let p = read_in(&p_set, t.group())?;
            let g = t.group();
            let f = verify_facts(&t, &p, depth, None)?;
            let fact2: Vec<Value> = f
                .fact2
                .iter()
                .map(|(x, r)| {
                    json!({ "x": g.coords(*x), "closed": r.is_closed(), "nodes": r.tree().root.size(),
                            "depth": r.tree().root.depth(),
                            "complement_found": matches!(r, Refutation::Inconclusive { complement: Some(_), .. }) })
                })
                .collect();
            let fact3: Vec<Value> =
                f.fact3.iter().map(|&(x, y, c)| json!({ "x": g.coords(x), "y": g.coords(y), "contradiction": c })).collect();
            let depth_limited = f.fact2.iter().any(|(_, r)| matches!(r, Refutation::Inconclusive { complement: None, .. }));
            let code = if f.all_hold() {
                ACCEPTED
            } else if f.fact1_holds && f.fact3.iter().all(|c| c.2) && depth_limited {
                INCONCLUSIVE
            } else {
                REFUTED
            };
            outcome(
                code,
                json!({ "fact1": { "holds": f.fact1_holds, "point": f.fact1_point.map(|q| g.coords(q)) },
                        "fact2": fact2, "fact3": fact3, "all_hold": f.all_hold() }),
            )
        }
        Command::Refute { tile, inside, outside, depth, emit_tree } => {
            let t = read(&tile)?;
            let g = t.group();
            let ins = read_in(&inside, g)?;
            let outs = match outside {
                Some(p) => read_in(&p, g)?,
                None => PointSet::empty(g),
            };
            let r = refute_by_branching(&PartialCover::new(&t, &ins, &outs)?, depth);
            if let Some(p) = &emit_tree {
                let text = serde_json::to_string_pretty(&r.tree().to_file()).expect("plain data serializes");
                write_file(p, &(text + "\n"))?;
            }
            let tree = r.tree();
            let (code, verdict, complement) = match &r {
                Refutation::Closed(_) => (ACCEPTED, "refuted-state", None),
                Refutation::Inconclusive { complement: Some(c), .. } => (REFUTED, "extends-to-complement", Some(coords(c))),
                Refutation::Inconclusive { complement: None, .. } => (INCONCLUSIVE, "depth-limit", None),
            };
            outcome(
                code,
                json!({ "verdict": verdict, "closed": r.is_closed(), "nodes": tree.root.size(),
                        "depth": tree.root.depth(), "complement": complement }),
            )
        }
        Command::ReplayTree { tree } => {
            let text = std::fs::read_to_string(&tree).map_err(|e| Error::Io(format!("{}: {e}", tree.display())))?;
            let file: TreeFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            let r = replay_tree(&file)?;
            outcome(
                if r.closed { ACCEPTED } else { INCONCLUSIVE },
                json!({ "valid": true, "closed": r.closed, "nodes": r.nodes }),
            )
        }
        Command::Reproduce { which } => match which {
            Reproduce::Hadamard { output } => emit_transcript(&transcript::hadamard()?, output.as_deref()),
            Reproduce::PropUsc { output } => emit_transcript(&transcript::prop_usc()?.0, output.as_deref()),
            Reproduce::Appendix { output } => emit_transcript(&transcript::appendix()?.0, output.as_deref()),
            Reproduce::Layered { group, tile, complements, limit, budget, output } => {
                let g = match group {
                    Some(s) => Some(Group::from_signed(&parse_list(&s)?)?),
                    None => None,
                };
                let t = read_set(&tile, g.as_ref())?;
                let mut params = LayeredParams::new(&t);
                params.complements = complements;
                params.limit = limit;
                params.budget = budget;
                emit_transcript(&transcript::layered(&params)?, output.as_deref())
            }
        },
        Command::Replay { transcript: path } => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let r = transcript::replay(&text)?;
            let code = if !r.identical { REFUTED } else { r.verdict.exit_code() as u8 };
            outcome(code, json!(r))
        }
        Command::Lift { set, k, complement } => {
            let a = read(&set)?;
            let c = match complement {
                Some(p) => Some(read_in(&p, a.group())?),
                None => tiles_group(&a)?,
            };
            match c {
                Some(c) => {
                    let (b, lifted) = grid_lift_tiling(&a, &c, k)?;
                    outcome(
                        ACCEPTED,
                        json!({ "lift": set_json(&b), "size": b.len(), "tiles": true, "complement": set_json(&lifted) }),
                    )
                }
                None => {
                    let b = grid_lift(&a, k)?;
                    outcome(ACCEPTED, json!({ "lift": set_json(&b), "size": b.len(), "tiles": false }))
                }
            }
        }
        Command::FugledeScan { n_max, bound, budget } => {
            let s = fuglede_scan(n_max, bound, budget)?;
            let code = if s.discrepancies() > 0 {
                REFUTED
            } else if s.inconclusive() > 0 {
                INCONCLUSIVE
            } else {
                ACCEPTED
            };
            outcome(code, json!({ "discrepancies": s.discrepancies(), "inconclusive": s.inconclusive(), "rows": s.rows }))
        }
        Command::UniversalScan { n, size, limit, budget, bound } => {
            let s = universal_scan(n, size, limit, budget, bound)?;
            let negatives = s.count(|r| matches!(r, UniversalRow::NoUniversal { .. }));
            let open = s.count(|r| matches!(r, UniversalRow::Inconclusive { .. }));
            let code = if negatives > 0 {
                REFUTED
            } else if open > 0 {
                INCONCLUSIVE
            } else {
                ACCEPTED
            };
            outcome(code, json!({ "tiles": s.rows.len(), "without_universal_spectrum": negatives, "inconclusive": open, "scan": s }))
        }
        Command::Export { name } => {
            let m = data::builtin()?.get(&name)?;
            outcome(ACCEPTED, set_json(&m.point_set()?))
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("FUGLEDE_LAB_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Precondition(format!("FUGLEDE_LAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Precondition(e.to_string()))
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<(), Error> {
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(cli));
    match result {
        Ok(o) => {
            if !o.report.is_null() {
                let text = serde_json::to_string_pretty(&o.report).expect("plain data serializes");
                // a closed pipe is the reader's choice, not a failure
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            ExitCode::from(o.code)
        }
        Err(Error::Verification(msg)) => {
            eprintln!("refuted: {msg}");
            ExitCode::from(REFUTED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}
