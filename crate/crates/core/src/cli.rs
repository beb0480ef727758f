//! Command-line front end. JSON results go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 a bundled scenario failed its check, 2 input
//! error, 3 resource limit, 4 refinement step cap.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cache::AtomCache;
use crate::constructions::{check_split_product, line_quotient_transfer, parabola_family, square_family};
use crate::diophantine::{SearchLimits, DEFAULT_NODE_BUDGET};
use crate::error::Error;
use crate::factorization::sweep;
use crate::group::FgGroup;
use crate::refine::{divisor_theory_witness, refine_chain, verify_transfer, RefineOptions, DEFAULT_MAX_STEPS};
use crate::zerosum::{atoms_with_limits, GroundSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_STEP_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "blockmonoid", version, about = "Zero-sum sequences, their atoms, and transfer to divisor theories")]
pub struct Cli {
    /// Atom cache directory (overrides BLOCKMONOID_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the atom cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Node budget for each minimal-solution search.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Atoms of B(G₀).
    Atoms { input: PathBuf },
    /// Sets of lengths, Δ, catenary degrees and Davenport constant up to a length bound.
    Invariants {
        input: PathBuf,
        #[arg(long)]
        max_length: Option<u64>,
    },
    /// Whether B(G₀) ↪ F(G₀) is a divisor theory.
    CheckDt { input: PathBuf },
    /// Iterate block homomorphisms until a divisor theory is reached.
    Refine {
        input: PathBuf,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Also verify the transfer properties for |B| up to this bound.
        #[arg(long)]
        verify_bound: Option<u64>,
        /// Keep going for this many steps after the first divisor theory.
        #[arg(long)]
        extra_steps: Option<usize>,
    },
    /// Run a bundled scenario.
    Examples {
        name: Scenario,
        /// Truncation bound for the line-quotient families.
        #[arg(long, default_value_t = 30)]
        n: i64,
        /// Which line-quotient family (1: the square, 2: the parabola).
        #[arg(long, default_value_t = 2)]
        case: u8,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    #[value(name = "remark-3-7")]
    SymmetricInterval,
    #[value(name = "example-4-6")]
    SplitProduct,
    #[value(name = "example-4-7")]
    LineQuotient,
}

/// Input file: either a bare ground set or a job with parameters.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub ground: Option<GroundSet>,
    pub max_length: Option<u64>,
    pub max_steps: Option<usize>,
    pub verify_bound: Option<u64>,
    pub extra_steps: Option<usize>,
    pub max_nodes: Option<u64>,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ResourceLimit { .. } => EXIT_RESOURCE,
            Error::StepCapExceeded { .. } => EXIT_STEP_CAP,
            _ => EXIT_INPUT,
        };
        let message = match &e {
            Error::StepCapExceeded { diagnostics, .. } => format!("{e}\n{diagnostics}"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

impl From<crate::group::GroupError> for Failure {
    fn from(e: crate::group::GroupError) -> Self {
        Error::from(e).into()
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn read_job(path: &Path) -> Result<JobSpec, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| input_error(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let job = if value.get("group").is_some() {
        JobSpec { ground: Some(serde_json::from_value(value).map_err(|e| input_error(e.to_string()))?), ..Default::default() }
    } else {
        serde_json::from_value(value).map_err(|e| input_error(e.to_string()))?
    };
    if job.ground.is_none() {
        return Err(input_error("job has no ground set"));
    }
    Ok(job)
}

struct Context {
    cache: Option<AtomCache>,
    limits: SearchLimits,
}

impl Context {
    fn new(cli: &Cli, job: &JobSpec) -> Self {
        let cache = if cli.no_cache {
            None
        } else {
            AtomCache::locate(cli.cache_dir.as_deref().or(job.cache_dir.as_deref()))
        };
        let max_nodes = cli.max_nodes.or(job.max_nodes).unwrap_or(DEFAULT_NODE_BUDGET);
        Context { cache, limits: SearchLimits { max_nodes } }
    }

    /// Loads or computes the atoms of `g0`, making them visible to the
    /// in-process memo.
    fn prime_atoms(&self, g0: &GroundSet, err: &mut dyn Write) -> Result<serde_json::Value, Failure> {
        let atoms = match &self.cache {
            Some(c) => {
                let (atoms, hit) = c.atoms(g0, self.limits)?;
                let _ = writeln!(err, "cache {}: {}", if hit { "hit" } else { "miss" }, c.dir().display());
                atoms
            }
            None => atoms_with_limits(g0, self.limits)?,
        };
        serde_json::to_value(&*atoms).map_err(|e| input_error(e.to_string()))
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    writeln!(out, "{text}").map_err(|e| Failure { code: EXIT_INPUT, message: format!("stdout: {e}") })
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run_command(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Atoms { input } => {
            let job = read_job(input)?;
            let ctx = Context::new(cli, &job);
            let atoms = ctx.prime_atoms(job.ground.as_ref().unwrap(), err)?;
            emit(out, &atoms)?;
        }
        Command::Invariants { input, max_length } => {
            let job = read_job(input)?;
            let ctx = Context::new(cli, &job);
            let g0 = job.ground.as_ref().unwrap();
            ctx.prime_atoms(g0, err)?;
            let bound = max_length.or(job.max_length).unwrap_or(10);
            emit(out, &to_json(&sweep(g0, bound)?))?;
        }
        Command::CheckDt { input } => {
            let job = read_job(input)?;
            let ctx = Context::new(cli, &job);
            let g0 = job.ground.as_ref().unwrap();
            let witness = divisor_theory_witness(g0, ctx.limits)?;
            let witnesses: Vec<serde_json::Value> = witness
                .iter()
                .map(|w| {
                    json!({
                        "removed": g0.elements()[w.removed].to_flat(),
                        "missing": g0.elements()[w.missing].to_flat(),
                        "negated": w.negated,
                    })
                })
                .collect();
            emit(out, &json!({ "divisor_theory": witness.is_none(), "witnesses": witnesses }))?;
        }
        Command::Refine { input, max_steps, verify_bound, extra_steps } => {
            let job = read_job(input)?;
            let ctx = Context::new(cli, &job);
            let g0 = job.ground.as_ref().unwrap();
            ctx.prime_atoms(g0, err)?;
            let options = RefineOptions {
                max_steps: max_steps.or(job.max_steps).unwrap_or(DEFAULT_MAX_STEPS),
                extra_steps: extra_steps.or(job.extra_steps).unwrap_or(0),
            };
            if options.max_steps == 0 {
                return Err(input_error("--max-steps must be at least 1"));
            }
            let chain = refine_chain(g0, options)?;
            let mut report = json!({ "chain": to_json(&chain) });
            if let Some(bound) = verify_bound.or(job.verify_bound) {
                let v = verify_transfer(&chain, bound)?;
                if !v.passed() {
                    let _ = writeln!(err, "transfer verification found {} violations", v.violations.len());
                }
                report["verification"] = to_json(&v);
            }
            emit(out, &report)?;
        }
        Command::Examples { name, n, case } => {
            let report = scenario(*name, *n, *case)?;
            let passed = report["pass"].as_bool() == Some(true);
            emit(out, &report)?;
            if !passed {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn scenario(name: Scenario, n: i64, case: u8) -> Result<serde_json::Value, Failure> {
    let z1 = FgGroup::free(1);
    let z2 = FgGroup::free(2);
    Ok(match name {
        Scenario::SymmetricInterval => {
            let g0 = GroundSet::from_flat(z1, &[&[-2], &[-1], &[0], &[1], &[2]])?;
            let witness = divisor_theory_witness(&g0, SearchLimits::default())?;
            let chain = refine_chain(&g0, RefineOptions::default())?;
            json!({
                "scenario": "remark-3-7",
                "ground": to_json(&g0),
                "divisor_theory": witness.is_none(),
                "chain_steps": chain.steps.len(),
                "pass": witness.is_none() && chain.steps.is_empty(),
            })
        }
        Scenario::SplitProduct => {
            let g0 = GroundSet::from_flat(z2, &[&[1, 2], &[-1, -2], &[1, -1], &[-2, 2]])?;
            let report = check_split_product(&g0, &[0, 1])?;
            json!({
                "scenario": "example-4-6",
                "ground": to_json(&g0),
                "g1": [0, 1],
                "report": to_json(&report),
                "pass": report.holds,
            })
        }
        Scenario::LineQuotient => {
            if n < 1 {
                return Err(input_error("--n must be at least 1"));
            }
            let (g1, a, expected) = match case {
                1 => (square_family(n), z2.from_flat(&[-1, -1])?, None),
                2 => (parabola_family(n), z2.from_flat(&[-1, -2])?, Some((-n..=1).collect::<Vec<i64>>())),
                _ => return Err(input_error("--case must be 1 or 2")),
            };
            let report = line_quotient_transfer(&g1, &a)?;
            let pass = match &expected {
                Some(want) => report.integer_images.as_ref() == Some(want) && report.condensed,
                None => report.gamma.rank() == 1 && report.condensed,
            };
            json!({
                "scenario": "example-4-7",
                "case": case,
                "n": n,
                "a": a.to_flat(),
                "report": to_json(&report),
                "expected_images": expected,
                "pass": pass,
            })
        }
    })
}

/// Parses `args` (including the program name), runs the command, and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let go = || {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = match run_command(&cli, &mut o, &mut e) {
            Ok(code) => code,
            Err(f) => {
                let _ = writeln!(e, "error: {}", f.message);
                f.code
            }
        };
        (code, o, e)
    };
    let (code, o, e) = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => (EXIT_INPUT, Vec::new(), format!("error: thread pool: {e}\n").into_bytes()),
        },
        None => go(),
    };
    let _ = err.write_all(&e);
    let _ = out.write_all(&o);
    code
}
