//! Command-line front end.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::colimits::{
    dwyer_witness, full_morphisms, is_cosieve, is_sieve, pushout_along_dwyer, pushout_oracle, sequential_colimit, ColimitError,
};
use crate::fincat::{pullback, FinCat, DEFAULT_SEARCH_BUDGET};
use crate::gaction::{fixed_category, lambda, phi, tensor};
use crate::group::{coset_gset, subgroups, FinGroup, Subgroup};
use crate::homology::{compare_homology, homology};
use crate::io::{
    decode_category, decode_functor, decode_gaction, decode_group, decode_ogdiagram, decode_sset, encode_category, encode_functor,
    encode_gaction, encode_ogdiagram, encode_sset, manifest, read_manifest, to_json, IoError, Manifest,
};
use crate::present::DEFAULT_CLOSURE_BUDGET;
use crate::sset::{acyclic_cell, categorify_with, ex, generating_cell, nerve, sd};
use crate::verify::{run_suite, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_THEOREM: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "gcat", version, about = "Finite G-categories, Dwyer pushouts, nerves and subdivision")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation dimension for nerves, Ex and homology.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Search or closure budget.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads for verification suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a manifest of any kind.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fixed-point category of a subgroup.
    FixedPoints {
        #[arg(long)]
        action: PathBuf,
        /// `H<i>` (index into the subgroup list) or comma-separated element ids.
        #[arg(long)]
        subgroup: String,
    },
    /// Orbit category of a group.
    OrbitCat {
        #[arg(long)]
        group: PathBuf,
    },
    /// Diagram of fixed-point categories.
    Phi {
        #[arg(long)]
        action: PathBuf,
    },
    /// Value at `G/e` with the induced action.
    Lambda {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// `G/K ⊗ A`.
    Tensor {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        category: PathBuf,
    },
    /// Nerve of a category, truncated at --max-dim.
    Nerve {
        #[arg(long)]
        category: PathBuf,
    },
    /// Barycentric subdivision.
    Sd {
        #[arg(long)]
        sset: PathBuf,
    },
    /// Category presented by a simplicial set.
    Categorify {
        #[arg(long)]
        sset: PathBuf,
    },
    /// `cSd²` of a boundary or horn inclusion.
    GenCell {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        horn: Option<usize>,
        /// With `--horn`, the inclusion into the boundary instead of the simplex.
        #[arg(long, requires = "horn")]
        to_boundary: bool,
    },
    /// Truncated `Ex` of a simplicial set.
    Ex {
        #[arg(long)]
        sset: PathBuf,
    },
    /// Whether the full subcategory on the given objects is a sieve.
    SieveCheck {
        #[arg(long)]
        category: PathBuf,
        #[arg(long, value_delimiter = ',')]
        objects: Vec<String>,
        #[arg(long)]
        cosieve: bool,
    },
    /// Whether a functor is a Dwyer map, with its retraction.
    DwyerCheck {
        #[arg(long)]
        functor: PathBuf,
    },
    /// Pushout along a Dwyer map of posets.
    Pushout {
        #[arg(long)]
        i: PathBuf,
        #[arg(long)]
        f: PathBuf,
    },
    /// Pushout computed from a presentation.
    PushoutOracle {
        #[arg(long)]
        i: PathBuf,
        #[arg(long)]
        f: PathBuf,
    },
    /// Colimit of a chain of injective functors, given in order.
    SeqColim {
        #[arg(long, num_args = 1.., required = true)]
        maps: Vec<PathBuf>,
    },
    /// Pullback of two functors with a common target.
    Pullback {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Homology of a simplicial set or of the nerve of a category.
    Homology {
        #[arg(long, conflicts_with = "category", required_unless_present = "category")]
        sset: Option<PathBuf>,
        #[arg(long)]
        category: Option<PathBuf>,
    },
    /// Homology of the nerves at both ends of a functor.
    CompareHomology {
        #[arg(long)]
        functor: PathBuf,
    },
    /// Run a seeded verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
    Theorem(String),
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ColimitError> for CliError {
    fn from(e: ColimitError) -> Self {
        match e {
            ColimitError::ComparisonNotIso(_) => CliError::Theorem(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Parses `argv` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Invalid(m)) => {
            eprintln!("error: {m}");
            EXIT_INVALID
        }
        Err(CliError::Theorem(m)) => {
            eprintln!("check failed: {m}");
            EXIT_THEOREM
        }
    }
}

fn emit(global: &Global, m: &Manifest) -> Result<(), CliError> {
    emit_text(global, &to_json(m))
}

fn emit_text(global: &Global, text: &str) -> Result<(), CliError> {
    match &global.out {
        Some(p) => std::fs::write(p, text).map_err(|e| invalid(format!("cannot write `{}`: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(p: &Path) -> Result<Manifest, CliError> {
    Ok(read_manifest(p)?)
}

/// `H<i>` or a comma-separated list of element ids.
fn parse_subgroup(g: &FinGroup, spec: &str) -> Result<Subgroup, CliError> {
    let subs = subgroups(g);
    if let Some(i) = spec.strip_prefix('H').and_then(|s| s.parse::<usize>().ok()) {
        return subs.get(i).cloned().ok_or_else(|| CliError::Usage(format!("no subgroup `{spec}`; there are {}", subs.len())));
    }
    let elems = spec
        .split(',')
        .map(|s| g.element(s.trim()).ok_or_else(|| CliError::Usage(format!("unknown element `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    g.subgroup(&elems).map_err(|e| CliError::Usage(e.to_string()))
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let gl = &cli.global;
    let dim = gl.max_dim.unwrap_or(3);
    match &cli.command {
        Command::Validate { input } => {
            let m = load(input)?;
            let summary = match m.kind.as_str() {
                "category" => {
                    let c = decode_category(&m)?;
                    json!({"kind": "category", "objects": c.num_objects(), "morphisms": c.num_morphisms(), "poset": c.is_poset()})
                }
                "group" => json!({"kind": "group", "order": decode_group(&m)?.order()}),
                "gaction" => {
                    let x = decode_gaction(&m)?;
                    json!({"kind": "gaction", "order": x.group().order(), "objects": x.base().num_objects()})
                }
                "sset" => json!({"kind": "sset", "counts": decode_sset(&m)?.counts()}),
                "ogdiagram" => json!({"kind": "ogdiagram", "values": decode_ogdiagram(&m)?.values().len()}),
                "functor" => {
                    let f = decode_functor(&m)?;
                    json!({"kind": "functor", "injective": f.is_injective()})
                }
                other => return Err(invalid(format!("unknown manifest kind `{other}`"))),
            };
            println!("{}", json!({"valid": true, "summary": summary}));
            Ok(EXIT_OK)
        }
        Command::FixedPoints { action, subgroup } => {
            let x = decode_gaction(&load(action)?)?;
            let h = parse_subgroup(x.group(), subgroup)?;
            emit(gl, &encode_category(&fixed_category(&x, &h)))?;
            Ok(EXIT_OK)
        }
        Command::OrbitCat { group } => {
            let g = Arc::new(decode_group(&load(group)?)?);
            let o = crate::group::orbit_category(&g);
            emit(gl, &encode_category(o.category()))?;
            Ok(EXIT_OK)
        }
        Command::Phi { action } => {
            let x = decode_gaction(&load(action)?)?;
            emit(gl, &encode_ogdiagram(&phi(&x)))?;
            Ok(EXIT_OK)
        }
        Command::Lambda { diagram } => {
            let y = decode_ogdiagram(&load(diagram)?)?;
            emit(gl, &encode_gaction(&lambda(&y)))?;
            Ok(EXIT_OK)
        }
        Command::Tensor { group, subgroup, category } => {
            let g = Arc::new(decode_group(&load(group)?)?);
            let k = parse_subgroup(&g, subgroup)?;
            let a = decode_category(&load(category)?)?;
            let s = coset_gset(&g, &k).map_err(invalid)?;
            emit(gl, &encode_gaction(&tensor(&s, &a)))?;
            Ok(EXIT_OK)
        }
        Command::Nerve { category } => {
            let c = decode_category(&load(category)?)?;
            emit(gl, &encode_sset(&nerve(&c, dim)))?;
            Ok(EXIT_OK)
        }
        Command::Sd { sset } => {
            let x = decode_sset(&load(sset)?)?;
            emit(gl, &encode_sset(&sd(&x).map_err(invalid)?))?;
            Ok(EXIT_OK)
        }
        Command::Categorify { sset } => {
            let x = decode_sset(&load(sset)?)?;
            let c = categorify_with(&x, gl.budget.unwrap_or(DEFAULT_CLOSURE_BUDGET)).map_err(invalid)?;
            emit(gl, &encode_category(&c.category))?;
            Ok(EXIT_OK)
        }
        Command::GenCell { m, horn, to_boundary } => {
            let cell = match (horn, to_boundary) {
                (Some(k), true) => acyclic_cell(*m, *k).map(|c| c.to_boundary),
                _ => generating_cell(*m, *horn),
            }
            .map_err(|e| CliError::Usage(e.to_string()))?;
            emit(gl, &encode_functor(&cell.inclusion))?;
            Ok(EXIT_OK)
        }
        Command::Ex { sset } => {
            let x = decode_sset(&load(sset)?)?;
            let e = ex(&x, gl.max_dim.unwrap_or(2), gl.budget.unwrap_or(DEFAULT_SEARCH_BUDGET)).map_err(invalid)?;
            emit(gl, &encode_sset(&e.sset))?;
            Ok(EXIT_OK)
        }
        Command::SieveCheck { category, objects, cosieve } => {
            let c = decode_category(&load(category)?)?;
            let objs = objects
                .iter()
                .map(|o| c.obj(o).ok_or_else(|| CliError::Usage(format!("unknown object `{o}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let mors = full_morphisms(&c, &objs);
            let (key, value) = if *cosieve { ("cosieve", is_cosieve(&c, &objs, &mors)?) } else { ("sieve", is_sieve(&c, &objs, &mors)?) };
            emit_text(gl, &format!("{}\n", json!({ key: value })))?;
            Ok(EXIT_OK)
        }
        Command::DwyerCheck { functor } => {
            let i = decode_functor(&load(functor)?)?;
            let b = i.target();
            let report = match dwyer_witness(&i)? {
                None => json!({"dwyer": false}),
                Some(w) => {
                    let a = i.source();
                    let retraction: serde_json::Map<String, serde_json::Value> =
                        w.cosieve.iter().map(|&x| (b.object_id(x).to_string(), json!(a.object_id(w.r_object(x))))).collect();
                    let counit: serde_json::Map<String, serde_json::Value> =
                        w.cosieve.iter().map(|&x| (b.object_id(x).to_string(), json!(b.morphism_id(w.counit(x))))).collect();
                    json!({
                        "dwyer": true,
                        "cosieve": w.cosieve.iter().map(|&x| b.object_id(x)).collect::<Vec<_>>(),
                        "retraction": retraction,
                        "counit": counit,
                    })
                }
            };
            emit(gl, &manifest("report", report))?;
            Ok(EXIT_OK)
        }
        Command::Pushout { i, f } => {
            let (i, f) = (decode_functor(&load(i)?)?, decode_functor(&load(f)?)?);
            let d = pushout_along_dwyer(&i, &f, None)?;
            emit(gl, &encode_category(&d.category))?;
            Ok(EXIT_OK)
        }
        Command::PushoutOracle { i, f } => {
            let (i, f) = (decode_functor(&load(i)?)?, decode_functor(&load(f)?)?);
            let p = pushout_oracle(&i, &f, gl.budget.unwrap_or(DEFAULT_CLOSURE_BUDGET))?;
            emit(gl, &encode_category(&p.category))?;
            Ok(EXIT_OK)
        }
        Command::SeqColim { maps } => {
            let fs = maps.iter().map(|p| Ok(decode_functor(&load(p)?)?)).collect::<Result<Vec<_>, CliError>>()?;
            let base: Arc<FinCat> = fs[0].source().clone();
            let s = sequential_colimit(&base, &fs)?;
            emit(gl, &encode_category(&s.category))?;
            Ok(EXIT_OK)
        }
        Command::Pullback { f, g } => {
            let (f, g) = (decode_functor(&load(f)?)?, decode_functor(&load(g)?)?);
            let p = pullback(&f, &g).map_err(invalid)?;
            emit(gl, &encode_category(&p.category))?;
            Ok(EXIT_OK)
        }
        Command::Homology { sset, category } => {
            let x = match (sset, category) {
                (Some(p), _) => decode_sset(&load(p)?)?,
                (None, Some(p)) => nerve(&decode_category(&load(p)?)?, dim),
                (None, None) => return Err(CliError::Usage("one of --sset or --category is required".into())),
            };
            let x = if gl.max_dim.is_some() && dim < x.dim() { truncate(&x, dim).map_err(invalid)? } else { x };
            let rep = homology(&x);
            for g in &rep.groups {
                eprintln!("{g}");
            }
            emit(gl, &manifest("report", &rep))?;
            Ok(EXIT_OK)
        }
        Command::CompareHomology { functor } => {
            let f = decode_functor(&load(functor)?)?;
            let cmp = compare_homology(&f, dim);
            emit(gl, &manifest("report", &cmp))?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, cases } => {
            let rep = run_suite(suite, gl.seed, *cases, gl.jobs).map_err(|e| match e {
                VerifyError::UnknownSuite(_) => CliError::Usage(e.to_string()),
                other => invalid(other),
            })?;
            emit(gl, &manifest("report", &rep))?;
            eprintln!("{}: {}/{} passed", rep.suite, rep.passed, rep.cases);
            Ok(if rep.all_passed() { EXIT_OK } else { EXIT_THEOREM })
        }
    }
}

/// The `d`-skeleton of a simplicial set.
fn truncate(x: &crate::sset::TruncSSet, d: usize) -> Result<crate::sset::TruncSSet, crate::sset::SSetError> {
    let mut raw = x.to_raw();
    raw.dims.retain(|k, _| k.parse::<usize>().map(|n| n <= d).unwrap_or(false));
    raw.dimension = Some(d);
    crate::sset::validate_sset(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_command(["gcat", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run_command(["gcat", "verify", "no-such-suite", "--cases", "1"]), EXIT_USAGE);
    }

    #[test]
    fn subgroup_specs() {
        let g = FinGroup::symmetric3();
        assert_eq!(parse_subgroup(&g, "H0").unwrap().order(), 1);
        assert_eq!(parse_subgroup(&g, "e").unwrap().order(), 1);
        assert!(parse_subgroup(&g, "H9").is_err());
    }
}
