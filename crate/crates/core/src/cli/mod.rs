//! Batch command-line surface: JSON in, a deterministic JSON report out.
//!
//! Exit codes: 0 when every verdict passes, 1 on a mathematical failure,
//! 2 on an input error.

pub mod check;
pub mod pd;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cyclic_homology::{build_cyclic_bar, SliceDump};
use crate::free_dga::{parse_algebra, FreeDga, ParseError};
use crate::hp_cris::{compare_lifts, crystalline_check, hp_cris_obj, CrisError, LiftSpec};
use crate::periodic::{hh_profile, hp_profile, HomologyProfile};
use crate::ring_core::{smith_decompose, BaseRing, Matrix};

pub use check::{run_check, CheckItem, CheckOptions, Fault};
pub use pd::run_pd;

pub const ENGINE: &str = concat!("hpcris ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "hpcris", version, about = "Exact HH, HP and crystalline HP of free DG algebras over Z/p^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the full JSON report here; the summary then goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hochschild homology per weight and degree.
    Hh {
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        weight_max: u32,
        /// Serialize every slice basis and operator matrix to this file.
        #[arg(long)]
        dump_slices: Option<PathBuf>,
    },
    /// Periodic cyclic homology per weight and parity.
    Hp {
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        weight_max: u32,
        #[arg(long)]
        dump_slices: Option<PathBuf>,
    },
    /// Crystalline periodic cyclic homology from an algebra over F_p and a lift
    /// of its differential to Z/p^2.
    Hpcris {
        algebra: PathBuf,
        lift: PathBuf,
        #[arg(long, default_value_t = 4)]
        weight_max: u32,
        /// A square-zero lift to compare against when the verbatim lift is not one.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Accept p = 2.
        #[arg(long)]
        allow_p2: bool,
    },
    /// Seeded identity suite on random instances.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated maximal generator counts of the random instances;
        /// empty for no instances.
        #[arg(long, default_value = "1,2,3")]
        sizes: String,
        #[arg(long, default_value_t = 3)]
        weight_max: u32,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Verify the divided-power cyclic modules and their filtrations.
    Pd {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// Exponent of the base ring Z/p^e.
        #[arg(long, default_value_t = 1)]
        ring_exponent: u32,
    },
    /// Smith normal form of a matrix file, or of seeded random matrices.
    Snf {
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FaultArg {
    CartanSign,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Cris(#[from] CrisError),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Input(_) => 2,
            CliError::Cris(e) if is_input_error(e) => 2,
            _ => 1,
        }
    }
}

/// Errors caused by the inputs rather than by a failed verification.
pub fn is_input_error(e: &CrisError) -> bool {
    matches!(
        e,
        CrisError::Parse(_)
            | CrisError::Dga(_)
            | CrisError::LiftDoesNotReduce { .. }
            | CrisError::LiftsNotCongruentModP { .. }
            | CrisError::NotVerbatimLiftable { .. }
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub engine: String,
    pub command: String,
    pub arguments: Value,
    pub input_digest: String,
    pub pass: bool,
    pub warnings: Vec<String>,
    pub summary: Vec<String>,
    pub results: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// `sha256` over the labelled inputs.
pub fn digest(parts: &[(&str, &[u8])]) -> String {
    let mut h = Sha256::new();
    for (label, bytes) in parts {
        h.update(label.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn load_algebra(path: &Path) -> Result<(String, FreeDga), CliError> {
    let text = read(path)?;
    let dga = parse_algebra(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })?;
    Ok((text, dga))
}

fn load_lift(path: &Path, dga: &FreeDga) -> Result<(String, LiftSpec), CliError> {
    let text = read(path)?;
    let lift = LiftSpec::parse(&text, dga).map_err(|e| match e {
        CrisError::Parse(source) => CliError::Parse { path: path.display().to_string(), source },
        other => CliError::Cris(other),
    })?;
    Ok((text, lift))
}

fn dump_slices(dga: &FreeDga, weight_max: u32, path: &Path) -> Result<(), CliError> {
    let mut slices = build_cyclic_bar(dga.algebra(), weight_max).map_err(|e| CliError::Engine(e.to_string()))?;
    for s in &mut slices {
        s.attach_lie("d", dga.differential()).map_err(|e| CliError::Engine(e.to_string()))?;
    }
    let dumps: Vec<SliceDump> = slices.iter().map(SliceDump::from).collect();
    let text = serde_json::to_string_pretty(&dumps).expect("dumps serialize");
    std::fs::write(path, text).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn profile_lines(p: &HomologyProfile) -> Vec<String> {
    p.nonzero().into_iter().map(|((w, key), g)| format!("weight {w}, {key}: {g}")).collect()
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Hh { algebra, weight_max, dump_slices: dump }
        | Command::Hp { algebra, weight_max, dump_slices: dump } => {
            let is_hh = matches!(command, Command::Hh { .. });
            let (text, dga) = load_algebra(algebra)?;
            if let Some(path) = dump {
                dump_slices(&dga, *weight_max, path)?;
            }
            let profile = if is_hh { hh_profile(&dga, *weight_max) } else { hp_profile(&dga, *weight_max) }
                .map_err(|e| CliError::Engine(e.to_string()))?;
            Ok(Report {
                engine: ENGINE.into(),
                command: if is_hh { "hh" } else { "hp" }.into(),
                arguments: json!({"algebra": path_str(algebra), "weight_max": weight_max}),
                input_digest: digest(&[("algebra", text.as_bytes())]),
                pass: true,
                warnings: Vec::new(),
                summary: profile_lines(&profile),
                results: json!({ "profile": profile }),
            })
        }
        Command::Hpcris { algebra, lift, weight_max, reference, allow_p2 } => {
            let (text, dga) = load_algebra(algebra)?;
            if dga.ring().n() != 1 {
                return Err(CliError::Input(format!("the algebra must be over F_p, got {}", dga.ring())));
            }
            if dga.ring().p() == 2 && !allow_p2 {
                return Err(CliError::Input("p = 2 needs --allow-p2".into()));
            }
            let lift_path = path_str(lift);
            let (lift_text, lift) = load_lift(lift, &dga)?;
            let mut inputs = vec![("algebra", text.as_bytes().to_vec()), ("lift", lift_text.into_bytes())];
            let reference = match reference {
                Some(path) => {
                    let (t, r) = load_lift(path, &dga)?;
                    inputs.push(("reference", t.into_bytes()));
                    Some(r)
                }
                None => None,
            };
            let cris = hp_cris_obj(&dga, &lift, *weight_max)?;
            let profile = cris.profile()?;
            let verdict = crystalline_check(&dga, &lift, reference.as_ref(), *weight_max)?;
            let verbatim = LiftSpec::verbatim(&dga)?;
            let comparison = if verbatim.is_square_zero() {
                Some(compare_lifts(&dga, &lift, &verbatim, *weight_max)?)
            } else {
                None
            };
            let alg = dga.algebra();
            let obstruction: Vec<(String, String)> = alg
                .generators()
                .iter()
                .zip(&cris.obstruction().values)
                .map(|(g, v)| (g.name.clone(), alg.format_poly(v)))
                .collect();
            let pass = verdict.equal && comparison.as_ref().is_none_or(|c| c.profiles_equal);
            let mut summary = profile_lines(&profile);
            summary.push(format!(
                "comparison with the {} lift: {}",
                verdict.direct_source,
                if verdict.equal { "equal" } else { "different" }
            ));
            let parts: Vec<(&str, &[u8])> = inputs.iter().map(|(l, b)| (*l, b.as_slice())).collect();
            Ok(Report {
                engine: ENGINE.into(),
                command: "hpcris".into(),
                arguments: json!({
                    "algebra": path_str(algebra),
                    "lift": lift_path,
                    "reference": reference_path(command),
                    "weight_max": weight_max,
                    "allow_p2": allow_p2,
                }),
                input_digest: digest(&parts),
                pass,
                warnings: cris.warnings.clone(),
                summary,
                results: json!({
                    "obstruction": obstruction,
                    "square_zero_lift": lift.is_square_zero(),
                    "profile": profile,
                    "crystalline_vs_direct": verdict,
                    "comparison_with_verbatim": comparison,
                }),
            })
        }
        Command::Check { seed, sizes, weight_max, inject_fault } => {
            let sizes = parse_sizes(sizes)?;
            let opts = CheckOptions {
                seed: *seed,
                sizes: sizes.clone(),
                weight_max: *weight_max,
                fault: inject_fault.map(|FaultArg::CartanSign| Fault::CartanSign),
            };
            let items = run_check(&opts);
            let failed: Vec<&CheckItem> = items.iter().filter(|i| !i.pass).collect();
            let mut summary = vec![format!("{} checks, {} failed", items.len(), failed.len())];
            summary.extend(
                failed
                    .iter()
                    .map(|i| format!("FAIL {} on {}: {}", i.check, i.instance, i.witness.clone().unwrap_or_default())),
            );
            let arguments =
                json!({"seed": seed, "sizes": sizes, "weight_max": weight_max, "inject_fault": inject_fault.is_some()});
            Ok(Report {
                engine: ENGINE.into(),
                command: "check".into(),
                input_digest: digest(&[("arguments", arguments.to_string().as_bytes())]),
                arguments,
                pass: failed.is_empty(),
                warnings: Vec::new(),
                summary,
                results: json!({ "items": items, "instances": check::instance_documents(&opts) }),
            })
        }
        Command::Pd { n, k_max, p, ring_exponent } => {
            if *n == 0 || *k_max == 0 {
                return Err(CliError::Input("n and k_max must be positive".into()));
            }
            let base = BaseRing::new(*p, *ring_exponent).map_err(|e| CliError::Input(e.to_string()))?;
            let (pass, summary, results) = run_pd(*n, *k_max, base);
            let arguments = json!({"n": n, "k_max": k_max, "p": p, "ring_exponent": ring_exponent});
            Ok(Report {
                engine: ENGINE.into(),
                command: "pd".into(),
                input_digest: digest(&[("arguments", arguments.to_string().as_bytes())]),
                arguments,
                pass,
                warnings: Vec::new(),
                summary,
                results,
            })
        }
        Command::Snf { matrix, seed, count } => match matrix {
            Some(path) => {
                let text = read(path)?;
                let doc: MatrixDoc = serde_json::from_str(&text)
                    .map_err(|e| CliError::Parse { path: path_str(path), source: ParseError::from(e) })?;
                let base = doc.base;
                if doc.rows.iter().any(|r| r.len() != doc.rows.first().map_or(0, Vec::len)) {
                    return Err(CliError::Input(format!("{}: rows of unequal length", path_str(path))));
                }
                let m = Matrix::from_rows(base, &doc.rows);
                let (ok, result) = snf_result(&m);
                Ok(Report {
                    engine: ENGINE.into(),
                    command: "snf".into(),
                    arguments: json!({"matrix": path_str(path)}),
                    input_digest: digest(&[("matrix", text.as_bytes())]),
                    pass: ok,
                    warnings: Vec::new(),
                    summary: vec![format!("diagonal valuations {:?}", result["profile"])],
                    results: result,
                })
            }
            None => {
                let items = check::snf_suite(*seed, *count);
                let failed = items.iter().filter(|i| !i.pass).count();
                let arguments = json!({"seed": seed, "count": count});
                Ok(Report {
                    engine: ENGINE.into(),
                    command: "snf".into(),
                    input_digest: digest(&[("arguments", arguments.to_string().as_bytes())]),
                    arguments,
                    pass: failed == 0,
                    warnings: Vec::new(),
                    summary: vec![format!("{} matrices, {} failed", items.len(), failed)],
                    results: json!({ "items": items }),
                })
            }
        },
    }
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(s) if (1..=3).contains(&s) => Ok(s),
            _ => Err(CliError::Input(format!("sizes must be generator counts in 1..=3, got `{t}`"))),
        })
        .collect()
}

fn reference_path(command: &Command) -> Option<String> {
    match command {
        Command::Hpcris { reference, .. } => reference.as_deref().map(path_str),
        _ => None,
    }
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    base: BaseRing,
    rows: Vec<Vec<i64>>,
}

/// Decomposes `m` and checks `U D V = M` with `U`, `V` invertible.
pub fn snf_result(m: &Matrix) -> (bool, Value) {
    let s = smith_decompose(m);
    let recomposed = s.recompose() == *m;
    let invertible = s.u.is_invertible() && s.v.is_invertible();
    let ok = recomposed && invertible;
    (
        ok,
        json!({
            "profile": s.profile,
            "u": s.u.to_rows(),
            "d": s.d.to_rows(),
            "v": s.v.to_rows(),
            "recomposes": recomposed,
            "invertible_transforms": invertible,
        }),
    )
}

/// Runs the parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match run(&cli.command) {
        Ok(report) => {
            let text = report.to_json();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return 2;
                    }
                    for w in &report.warnings {
                        println!("warning: {w}");
                    }
                    for line in &report.summary {
                        println!("{line}");
                    }
                    println!("{}", if report.pass { "PASS" } else { "FAIL" });
                }
                None => {
                    for w in &report.warnings {
                        eprintln!("warning: {w}");
                    }
                    print!("{text}");
                }
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
