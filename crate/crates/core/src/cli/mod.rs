//! Command-line harness: ring-spec files, command dispatch, reports and the
//! built-in example corpus.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 resource cap.

mod corpus;
mod report;
mod ringfile;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use corpus::{corpus_examples, run_corpus, CorpusCheck};
pub use report::{Report, RingSummary, ENGINE, SCHEMA};
pub use ringfile::{load_ring_spec, parse_ring_spec, AnyIdeal, Construction, Expr, Factor, RingSpecFile};

use crate::cohom::{
    depth, du_bois_graded_criterion, ext_modules, induced_ext_maps, krull_dim, local_cohomology_table,
    set_theoretic_cm_obstruction, vanishing_check, Injectivity,
};
use crate::error::{Error, Result};
use crate::frobchar::{deformation_check, f_injective_check, fedder_fpure, fpure_surjectivity_check, FrobeniusContext};
use crate::groebner::{set_max_pairs, Ideal, DEFAULT_MAX_PAIRS};
use crate::koszul::{find_hsop, hochster_roberts_check, set_max_strand_dim, DEFAULT_MAX_STRAND_DIM};
use crate::resolve::free_resolution;
use crate::ring::{parse_polynomial, Field, FieldSpec, PrimeField};

#[derive(Debug, Parser)]
#[command(name = "gradlc", version, about = "Graded local cohomology and singularity checks for weighted quotient rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Aligned text instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Add wall-clock time to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Largest Koszul strand dimension before giving up (exit 3).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STRAND_DIM)]
    pub max_strand_dim: usize,
    /// Largest S-pair queue before giving up (exit 3).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PAIRS)]
    pub max_pairs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// dim [H^i_m(R)]_t for every (i, t); infinite tails are cut at the window.
    LcTable {
        file: PathBuf,
        /// Inclusive degree window `lo:hi` for infinite tails.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Depth from the top Ext index, cross-checked with the projective dimension.
    Depth { file: PathBuf },
    /// Krull dimension.
    Dim { file: PathBuf },
    /// Graded Betti numbers of the minimal resolution.
    Betti { file: PathBuf },
    /// [H^i_m(R)]_{>0} = 0 for all i >= 1.
    DuboisCriterion { file: PathBuf },
    /// [H^i_m(R)]_{<0} = 0 where H^i_m(R) has finite length.
    Vanishing { file: PathBuf },
    /// Injectivity of Ext^j(A/I, A) -> Ext^j(A/J, A) for J = I^t or J = I^[p^e].
    #[command(group(ArgGroup::new("target").required(true).args(["power", "frobenius"])))]
    ExtInject {
        file: PathBuf,
        /// Ordinary powers, comma separated.
        #[arg(long, value_delimiter = ',')]
        power: Vec<u32>,
        /// Frobenius powers I^[p^e] instead.
        #[arg(long)]
        frobenius: bool,
        #[arg(short = 'p', value_delimiter = ',')]
        p: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Koszul cohomology on a random system of parameters against local cohomology.
    KoszulCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random draws per degree in the parameter search.
        #[arg(long, default_value_t = 50)]
        attempts: usize,
    },
    /// Nonzero [H^i_m(R)]_t with i < dim R and t <= 0.
    StcmObstruction { file: PathBuf },
    /// Fedder's criterion for F-purity at each prime.
    Fedder {
        file: PathBuf,
        #[arg(short = 'p', value_delimiter = ',')]
        p: Vec<u64>,
    },
    /// Injectivity of Frobenius on local cohomology at each prime.
    Finjective {
        file: PathBuf,
        #[arg(short = 'p', value_delimiter = ',')]
        p: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Deformation check along a homogeneous nonzerodivisor.
    Deform {
        file: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(short = 'p', value_delimiter = ',')]
        p: Vec<u64>,
    },
    /// Replay the built-in examples against their stored expectations.
    Corpus,
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = a.trim().parse().map_err(|_| format!("bad lower bound `{a}`"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("bad upper bound `{b}`"))?;
    if lo > hi {
        return Err("empty window".into());
    }
    Ok((lo, hi))
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap { .. } => 3,
        _ => 2,
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Output {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .filter(|a| a != "--timing")
        .collect();
    set_max_pairs(cli.max_pairs);
    set_max_strand_dim(cli.max_strand_dim);
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(done) => {
            let report = Report {
                schema: SCHEMA,
                engine: ENGINE,
                command: echo.join(" "),
                seed: done.seed,
                ring: done.ring,
                hypotheses: done.outcome.hypotheses,
                verdict: done.outcome.verdict,
                result: done.outcome.result,
                timing_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
            };
            Output {
                stdout: if cli.pretty { report.to_pretty() } else { report.to_json() },
                stderr: String::new(),
                code: if report.verdict == Some(false) { 1 } else { 0 },
            }
        }
        Err(e) => Output {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(&e),
        },
    }
}

/// What a command computed, before the report header is attached.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub hypotheses: Vec<String>,
    pub verdict: Option<bool>,
    pub result: Value,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Outcome {
            hypotheses: Vec::new(),
            verdict: None,
            result,
        }
    }

    /// Moves a `hypotheses` field of `value` into the header.
    fn split(value: impl Serialize, verdict: bool) -> Self {
        let mut result = serde_json::to_value(value).expect("serializable");
        let hypotheses = result
            .as_object_mut()
            .and_then(|m| m.shift_remove("hypotheses"))
            .and_then(|h| serde_json::from_value(h).ok())
            .unwrap_or_default();
        Outcome {
            hypotheses,
            verdict: Some(verdict),
            result,
        }
    }
}

struct Done {
    ring: Option<RingSummary>,
    seed: Option<u64>,
    outcome: Outcome,
}

fn summary(ideal: &AnyIdeal) -> RingSummary {
    let s = ideal.spec();
    RingSummary {
        field: s.field().to_string(),
        vars: s.vars().to_vec(),
        weights: s.weights().to_vec(),
        ideal: ideal.format_gens(),
    }
}

macro_rules! on_ideal {
    ($any:expr, $i:ident => $body:expr) => {
        match $any {
            AnyIdeal::Rational($i) => $body,
            AnyIdeal::Modular($i) => $body,
        }
    };
}

fn execute(cmd: &Command) -> Result<Done> {
    let mut seed = None;
    let file = match cmd {
        Command::Corpus => {
            return Ok(Done {
                ring: None,
                seed: None,
                outcome: run_corpus()?,
            })
        }
        Command::LcTable { file, .. }
        | Command::Depth { file }
        | Command::Dim { file }
        | Command::Betti { file }
        | Command::DuboisCriterion { file }
        | Command::Vanishing { file }
        | Command::ExtInject { file, .. }
        | Command::KoszulCheck { file, .. }
        | Command::StcmObstruction { file }
        | Command::Fedder { file, .. }
        | Command::Finjective { file, .. }
        | Command::Deform { file, .. } => load_ring_spec(file)?,
    };
    let any = file.build()?;
    let outcome = match cmd {
        Command::LcTable { window, .. } => on_ideal!(&any, i => lc_table(i, *window)?),
        Command::Depth { .. } => on_ideal!(&any, i => depth_cmd(i)?),
        Command::Dim { .. } => on_ideal!(&any, i => dim_cmd(i)?),
        Command::Betti { .. } => on_ideal!(&any, i => betti_cmd(i)?),
        Command::DuboisCriterion { .. } => on_ideal!(&any, i => {
            let v = du_bois_graded_criterion(&ext_modules(i)?);
            let ok = v.satisfied;
            Outcome::split(v, ok)
        }),
        Command::Vanishing { .. } => on_ideal!(&any, i => {
            let v = vanishing_check(&ext_modules(i)?);
            let ok = v.satisfied;
            Outcome::split(v, ok)
        }),
        Command::StcmObstruction { .. } => on_ideal!(&any, i => {
            let v = set_theoretic_cm_obstruction(&ext_modules(i)?)?;
            let ok = !v.obstructed;
            Outcome::split(v, ok)
        }),
        Command::KoszulCheck { seed: s, attempts, .. } => {
            seed = Some(*s);
            on_ideal!(&any, i => koszul_cmd(i, *s, *attempts)?)
        }
        Command::ExtInject {
            power, frobenius, p, e, ..
        } => {
            if *frobenius {
                if !power.is_empty() {
                    return Err(Error::Domain("--power and --frobenius are exclusive".into()));
                }
                frobenius_inject(&file, p, *e)?
            } else {
                on_ideal!(&any, i => power_inject(i, power)?)
            }
        }
        Command::Fedder { p, .. } => {
            let runs = fan_out(&primes(&file, p)?, |p| {
                let ctx = FrobeniusContext::new(&file.build_over(PrimeField::new(p)?)?)?;
                Ok(json!({"p": p, "f_pure": fedder_fpure(&ctx)?}))
            })?;
            let all = runs.iter().all(|r| r["f_pure"] == true);
            Outcome {
                hypotheses: Vec::new(),
                verdict: Some(all),
                result: json!({ "runs": runs }),
            }
        }
        Command::Finjective { p, e, .. } => {
            let runs = fan_out(&primes(&file, p)?, |p| {
                let ctx = FrobeniusContext::new(&file.build_over(PrimeField::new(p)?)?)?;
                f_injective_check(&ctx, *e)
            })?;
            let all = runs.iter().all(|r| r.injective);
            Outcome {
                hypotheses: Vec::new(),
                verdict: Some(all),
                result: json!({ "runs": runs }),
            }
        }
        Command::Deform { element, p, .. } => {
            let runs = fan_out(&primes(&file, p)?, |p| {
                let ideal = file.build_over(PrimeField::new(p)?)?;
                let x = parse_polynomial(ideal.ring(), element)?;
                deformation_check(&FrobeniusContext::new(&ideal)?, &x)
            })?;
            let all = runs.iter().all(|r| r.pass);
            Outcome {
                hypotheses: Vec::new(),
                verdict: Some(all),
                result: json!({ "runs": runs }),
            }
        }
        Command::Corpus => unreachable!("handled above"),
    };
    Ok(Done {
        ring: Some(summary(&any)),
        seed,
        outcome,
    })
}

/// The primes to run at: the `-p` list, or the file's own characteristic.
fn primes(file: &RingSpecFile, list: &[u64]) -> Result<Vec<u64>> {
    for &p in list {
        FieldSpec::prime(p)?;
        if let FieldSpec::PrimeField(q) = file.field {
            if q != p {
                return Err(Error::Domain(format!("-p {p} conflicts with the file's field Fp:{q}")));
            }
        }
    }
    match (list.is_empty(), file.field) {
        (false, _) => Ok(list.to_vec()),
        (true, FieldSpec::PrimeField(q)) => Ok(vec![q]),
        (true, FieldSpec::Rationals) => Err(Error::Domain("-p is required for a file over Q".into())),
    }
}

/// Runs `f` on every item in parallel; results and the first error keep input order.
fn fan_out<A: Copy + Sync, T: Send>(items: &[A], f: impl Fn(A) -> Result<T> + Sync) -> Result<Vec<T>> {
    let done: Vec<Result<T>> = items.par_iter().map(|&a| f(a)).collect();
    done.into_iter().collect()
}

fn lc_table<F: Field>(ideal: &Ideal<F>, window: Option<(i64, i64)>) -> Result<Outcome> {
    let ext = ext_modules(ideal)?;
    let table = local_cohomology_table(&ext, window);
    Ok(Outcome::plain(json!({
        "depth": table.depth(),
        "dim": table.dimension(),
        "n": table.n,
        "d": table.d,
        "window": table.window,
        "rows": table.rows,
        "modules": table.modules,
    })))
}

fn depth_cmd<F: Field>(ideal: &Ideal<F>) -> Result<Outcome> {
    let ext = ext_modules(ideal)?;
    let d = depth(&ext)?;
    let table = local_cohomology_table(&ext, None);
    let lc = table.depth().map(|x| x as i64);
    if lc != Some(d) {
        return Err(Error::Structural(format!(
            "depth {d} from Ext disagrees with {lc:?} from local cohomology"
        )));
    }
    Ok(Outcome::plain(json!({
        "depth": d,
        "projective_dimension": ext.resolution().length(),
        "n": ext.nvars(),
    })))
}

fn dim_cmd<F: Field>(ideal: &Ideal<F>) -> Result<Outcome> {
    let d = krull_dim(ideal)?;
    Ok(Outcome::plain(json!({ "dim": d })))
}

fn betti_cmd<F: Field>(ideal: &Ideal<F>) -> Result<Outcome> {
    let res = free_resolution(ideal, true)?;
    Ok(Outcome::plain(json!({
        "ranks": res.ranks(),
        "betti": res.betti()?,
    })))
}

fn koszul_cmd<F: Field>(ideal: &Ideal<F>, seed: u64, attempts: usize) -> Result<Outcome> {
    let ext = ext_modules(ideal)?;
    let table = local_cohomology_table(&ext, None);
    let x = find_hsop(ideal, seed, attempts)?;
    let rep = hochster_roberts_check(&x, &table)?;
    let ok = rep.all_equal;
    Ok(Outcome::split(rep, ok))
}

#[derive(Serialize)]
struct PowerRun {
    t: u32,
    injective: bool,
    rows: Vec<Injectivity>,
}

fn power_inject<F: Field>(ideal: &Ideal<F>, powers: &[u32]) -> Result<Outcome> {
    if powers.contains(&0) {
        return Err(Error::Domain("powers start at 1".into()));
    }
    let ext_i = ext_modules(ideal)?;
    let runs = fan_out(powers, |t| {
        let ext_t = ext_modules(&ideal.power(t)?)?;
        let maps = induced_ext_maps(&ext_i, &ext_t)?;
        let rows = maps
            .maps
            .iter()
            .map(|m| m.is_injective(None))
            .collect::<Result<Vec<_>>>()?;
        Ok(PowerRun {
            t,
            injective: rows.iter().all(|r| r.injective),
            rows,
        })
    })?;
    let all = runs.iter().all(|r| r.injective);
    Ok(Outcome {
        hypotheses: Vec::new(),
        verdict: Some(all),
        result: json!({ "runs": runs }),
    })
}

fn frobenius_inject(file: &RingSpecFile, p: &[u64], e: u32) -> Result<Outcome> {
    let runs = fan_out(&primes(file, p)?, |p| {
        let ctx = FrobeniusContext::new(&file.build_over(PrimeField::new(p)?)?)?;
        let j = ctx.frobenius_power(e)?;
        fpure_surjectivity_check(&ctx, &j)
    })?;
    let all = runs.iter().all(|r| r.injective);
    Ok(Outcome {
        hypotheses: Vec::new(),
        verdict: Some(all),
        result: json!({ "runs": runs }),
    })
}
