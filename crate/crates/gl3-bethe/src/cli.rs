//! Configuration, instance enumeration and JSON reporting for the `verify`
//! binary.
//!
//! A run is described by a [`Job`]: one concrete chain (length,
//! inhomogeneities, part twists, model constant), a grid bound for the two
//! family sizes, a seed, and a list of suites. Every suite expands into a
//! deterministic list of named instances, and each instance draws its
//! spectral parameters from a ChaCha8 stream seeded by the job seed mixed
//! with the instance name. Reports are therefore reproducible bit for bit —
//! independent of `--jobs` — except for the `wall_ms` fields, which
//! `--no-timings` zeroes out.

use crate::actions::{verify_action, Action};
use crate::bethe::{
    bethe_vector, bethe_vector_recursive, verify_reflect_morphism, verify_transpose_morphism,
    BetheIndex,
};
use crate::composite::{
    split_monodromy, t12_ledger, t13_ledger, verify_composite_t12_action,
    verify_composite_t13_action, verify_decomposition, verify_dual_decomposition,
    verify_triple_associativity, verify_weight_coproduct, CompositePair, SplitSpec,
    TripleSplitSpec,
};
use crate::ratfun::{int, parse_scalar, Kernel, Scalar};
use crate::rep::{compare_vectors, ChainSpec, MonodromyRep, DEFAULT_MAX_SITES};
use crate::verdict::Verdict;
use crate::{Error, Result};
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

/// Environment variable naming the default output *directory*. Used only when
/// `--out` is absent; the report then goes to `$GL3_BETHE_OUT_DIR/report.json`.
pub const OUT_DIR_ENV: &str = "GL3_BETHE_OUT_DIR";

/// Schema version stamped into every report.
pub const REPORT_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// The verification suites the driver knows how to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Exchange relation of monodromy entries at two points.
    Rtt,
    /// The seven `T_ij(z)` action expansions against direct matrix action.
    Actions,
    /// Closed partition-sum vectors against the one-at-a-time recursion.
    BetheEquiv,
    /// Decomposition of the assembled-model vector over a two-part split.
    Theorem1,
    /// The mirrored decomposition of the dual (left) vectors.
    Corollary1,
    /// Term-by-term cancellation ledgers for `T_13(z)` and `T_12(z)`.
    Ledgers,
    /// Coproduct rule for the normalized weight vectors.
    Weight,
    /// Transposition and reflection symmetry checks.
    Morphisms,
    /// Associativity of the expansion under a three-part refinement.
    Coassoc,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Rtt,
        Suite::Actions,
        Suite::BetheEquiv,
        Suite::Theorem1,
        Suite::Corollary1,
        Suite::Ledgers,
        Suite::Weight,
        Suite::Morphisms,
        Suite::Coassoc,
    ];

    /// Stable lowercase token used in flags, configs and reports.
    pub fn token(self) -> &'static str {
        match self {
            Suite::Rtt => "rtt",
            Suite::Actions => "actions",
            Suite::BetheEquiv => "bethe-equiv",
            Suite::Theorem1 => "theorem1",
            Suite::Corollary1 => "corollary1",
            Suite::Ledgers => "ledgers",
            Suite::Weight => "weight",
            Suite::Morphisms => "morphisms",
            Suite::Coassoc => "coassoc",
        }
    }

    pub fn from_token(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|t| t.token() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|t| t.token()).collect();
                Error::Config(format!(
                    "unknown suite `{s}` (expected one of: {})",
                    names.join(", ")
                ))
            })
    }
}

// ---------------------------------------------------------------------------
// Configuration: JSON file, command line, resolved job
// ---------------------------------------------------------------------------

/// On-disk job description. Every field is optional; rationals are strings
/// like `"1"` or `"-3/2"`. Unknown keys are rejected so typos fail loudly.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Suites to run; omit for all of them.
    pub suites: Option<Vec<String>>,
    /// Number of sites.
    #[serde(rename = "L")]
    pub chain_len: Option<usize>,
    /// Cut position for the two-factor suites (`0..=L`).
    pub split: Option<usize>,
    /// Grid bound for the first family size.
    pub a_max: Option<usize>,
    /// Grid bound for the second family size.
    pub b_max: Option<usize>,
    pub seed: Option<u64>,
    /// Independent draws per instance.
    pub samples: Option<usize>,
    /// Model constant (nonzero rational).
    pub c: Option<String>,
    /// Explicit inhomogeneities; length must equal `L`.
    pub xi: Option<Vec<String>>,
    /// Twist of the first factor (three nonzero rationals).
    pub twist1: Option<[String; 3]>,
    /// Twist of the second factor.
    pub twist2: Option<[String; 3]>,
    /// Twist of the third factor (coassociativity suite only).
    pub twist3: Option<[String; 3]>,
    /// Optional prescribed total; must equal `twist1 · twist2` componentwise.
    pub twist: Option<[String; 3]>,
    #[serde(rename = "max_L")]
    pub max_chain: Option<usize>,
    pub jobs: Option<usize>,
}

/// Run exact-rational verification suites on one concrete chain and emit a
/// JSON report.
#[derive(Debug, Default, Parser)]
#[command(
    name = "verify",
    version,
    about = "Exact verification of monodromy-matrix identities on finite chains"
)]
pub struct CliArgs {
    /// JSON job description; explicit flags override its fields
    #[arg(long, value_name = "path")]
    pub config: Option<PathBuf>,

    /// Suite to run (repeatable): rtt, actions, bethe-equiv, theorem1,
    /// corollary1, ledgers, weight, morphisms, coassoc [default: all]
    #[arg(long = "suite", value_name = "name")]
    pub suites: Vec<String>,

    /// Number of sites [default: 3]
    #[arg(long = "L", value_name = "n")]
    pub chain_len: Option<usize>,

    /// Cut position for the two-factor suites [default: min(1, L)]
    #[arg(long, value_name = "n")]
    pub split: Option<usize>,

    /// Grid bound for the first family size [default: 2]
    #[arg(long = "a", value_name = "n")]
    pub a_max: Option<usize>,

    /// Grid bound for the second family size [default: 2]
    #[arg(long = "b", value_name = "n")]
    pub b_max: Option<usize>,

    /// Base seed for parameter draws [default: 1]
    #[arg(long, value_name = "n")]
    pub seed: Option<u64>,

    /// Independent draws per instance [default: 1]
    #[arg(long, value_name = "n")]
    pub samples: Option<usize>,

    /// Model constant, a nonzero rational like 1 or -3/2 [default: 1]
    #[arg(long, value_name = "q")]
    pub c: Option<String>,

    /// Report file; falls back to $GL3_BETHE_OUT_DIR/report.json, else stdout
    #[arg(long, value_name = "path")]
    pub out: Option<PathBuf>,

    /// Refuse chains longer than this [default: 8]
    #[arg(long = "max-L", value_name = "n")]
    pub max_chain: Option<usize>,

    /// Worker threads for running instances [default: 1]
    #[arg(long, value_name = "n")]
    pub jobs: Option<usize>,

    /// Zero every wall_ms field so reruns are byte-identical
    #[arg(long)]
    pub no_timings: bool,
}

/// A fully resolved run description. All validation that does not depend on
/// drawn parameters has already happened when one of these exists.
#[derive(Debug, Clone)]
pub struct Job {
    pub suites: Vec<Suite>,
    pub chain_len: usize,
    pub split: usize,
    pub a_max: usize,
    pub b_max: usize,
    pub seed: u64,
    pub samples: usize,
    pub kernel: Kernel,
    pub xi: Vec<Scalar>,
    pub twist1: [Scalar; 3],
    pub twist2: [Scalar; 3],
    pub twist3: [Scalar; 3],
    pub max_chain: usize,
    pub jobs: usize,
    pub no_timings: bool,
    pub out: Option<PathBuf>,
}

pub fn parse_config(text: &str) -> Result<JobConfig> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_config(path: &Path) -> Result<JobConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn parse_field(raw: &str, what: &str) -> Result<Scalar> {
    parse_scalar(raw)
        .map_err(|_| Error::Config(format!("cannot parse {what} `{raw}` as a rational")))
}

fn parse_twist(raw: &[String; 3], what: &str) -> Result<[Scalar; 3]> {
    Ok([
        parse_field(&raw[0], what)?,
        parse_field(&raw[1], what)?,
        parse_field(&raw[2], what)?,
    ])
}

/// Default inhomogeneities `ξ_k = 10k`: wide spacing so they stay generic for
/// any model constant of modest size.
fn default_xi(l: usize) -> Vec<Scalar> {
    (0..l).map(|k| int(10 * k as i64)).collect()
}

/// Merge a config file (if any) with command-line overrides into a [`Job`].
/// Flags win over the file; both win over defaults. The chain and split data
/// are validated here so that a bad job fails before any suite starts.
pub fn resolve(cfg: JobConfig, cli: &CliArgs) -> Result<Job> {
    let tokens = if cli.suites.is_empty() {
        cfg.suites.clone()
    } else {
        Some(cli.suites.clone())
    };
    let suites = match tokens {
        None => Suite::ALL.to_vec(),
        Some(list) => {
            let mut out = Vec::new();
            for t in &list {
                let s = Suite::from_token(t)?;
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            if out.is_empty() {
                return Err(Error::Config("no suites selected".into()));
            }
            out
        }
    };

    let chain_len = cli.chain_len.or(cfg.chain_len).unwrap_or(3);
    let max_chain = cli.max_chain.or(cfg.max_chain).unwrap_or(DEFAULT_MAX_SITES);
    let split = cli.split.or(cfg.split).unwrap_or_else(|| chain_len.min(1));
    let a_max = cli.a_max.or(cfg.a_max).unwrap_or(2);
    let b_max = cli.b_max.or(cfg.b_max).unwrap_or(2);
    let seed = cli.seed.or(cfg.seed).unwrap_or(1);
    let samples = cli.samples.or(cfg.samples).unwrap_or(1);
    if samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    let jobs = cli.jobs.or(cfg.jobs).unwrap_or(1);
    if jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }

    let c_text = cli.c.clone().or(cfg.c).unwrap_or_else(|| "1".into());
    let kernel = Kernel::new(parse_field(&c_text, "model constant")?)?;

    let xi = match &cfg.xi {
        Some(raw) => {
            if raw.len() != chain_len {
                return Err(Error::Config(format!(
                    "xi lists {} entries for a chain of length {chain_len}",
                    raw.len()
                )));
            }
            raw.iter()
                .map(|s| parse_field(s, "inhomogeneity"))
                .collect::<Result<Vec<_>>>()?
        }
        None => default_xi(chain_len),
    };

    let twist1 = match &cfg.twist1 {
        Some(raw) => parse_twist(raw, "twist1 component")?,
        None => [int(2), int(3), int(5)],
    };
    let twist2 = match &cfg.twist2 {
        Some(raw) => parse_twist(raw, "twist2 component")?,
        None => [int(7), int(1), int(2)],
    };
    let twist3 = match &cfg.twist3 {
        Some(raw) => parse_twist(raw, "twist3 component")?,
        None => [int(1), int(4), int(3)],
    };

    // One up-front pass through the chain/split validators (length cap,
    // distinct generic ξ, nonzero twists, split in range).
    let spec = SplitSpec::with_cap(
        xi.clone(),
        split,
        twist1.clone(),
        twist2.clone(),
        kernel.c().clone(),
        max_chain,
    )?;
    if let Some(raw) = &cfg.twist {
        spec.ensure_total(&parse_twist(raw, "total twist component")?)?;
    }
    for t in &twist3 {
        if t == &int(0) {
            return Err(Error::ZeroTwist);
        }
    }

    Ok(Job {
        suites,
        chain_len,
        split,
        a_max,
        b_max,
        seed,
        samples,
        kernel,
        xi,
        twist1,
        twist2,
        twist3,
        max_chain,
        jobs,
        no_timings: cli.no_timings,
        out: cli.out.clone(),
    })
}

pub fn job_from(cli: &CliArgs) -> Result<Job> {
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => JobConfig::default(),
    };
    resolve(cfg, cli)
}

// ---------------------------------------------------------------------------
// Parameter draws
// ---------------------------------------------------------------------------

/// Draw `n` rationals with small numerators and denominators that are jointly
/// generic — no pairwise difference in `{0, ±c}` — among themselves, against
/// everything in `pool`, and subject to an extra per-candidate predicate.
/// Bounded retries; a chain that leaves no room errors with `DrawExhausted`.
pub fn draw_generic_scalars(
    rng: &mut ChaCha8Rng,
    n: usize,
    kernel: &Kernel,
    pool: &[Scalar],
    mut extra: impl FnMut(&Scalar) -> bool,
) -> Result<Vec<Scalar>> {
    let mut out: Vec<Scalar> = Vec::with_capacity(n);
    let mut budget = 400 * (n + 1);
    while out.len() < n {
        if budget == 0 {
            return Err(Error::DrawExhausted);
        }
        budget -= 1;
        let num = rng.gen_range(-60i64..=60);
        let den = rng.gen_range(1i64..=8);
        let x = Scalar::new(num.into(), den.into());
        let clash = pool
            .iter()
            .chain(out.iter())
            .any(|y| kernel.is_forbidden_difference(&(x.clone() - y)));
        if clash || !extra(&x) {
            continue;
        }
        out.push(x);
    }
    Ok(out)
}

/// Instance-local seed: FNV-1a over the instance name, mixed with the base
/// seed. Stable across platforms and independent of execution order.
fn derive_seed(base: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ base.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Turn a ledger label like `C12 + C22 = 0` into a token usable inside the
/// space-separated `key=value` instance strings.
fn slug(label: &str) -> String {
    label
        .replace(" = ", "_eq_")
        .replace(" + ", "_plus_")
        .replace(' ', "_")
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub tool: ToolStamp,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToolStamp {
    pub name: String,
    pub version: String,
}

/// The resolved configuration echoed back into the report, rationals as
/// strings (the same syntax the config file accepts).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub suites: Vec<String>,
    #[serde(rename = "L")]
    pub chain_len: usize,
    pub split: usize,
    pub a_max: usize,
    pub b_max: usize,
    pub seed: u64,
    pub samples: usize,
    pub c: String,
    pub xi: Vec<String>,
    pub twist1: [String; 3],
    pub twist2: [String; 3],
    pub twist3: [String; 3],
    #[serde(rename = "max_L")]
    pub max_chain: usize,
    pub jobs: usize,
    pub no_timings: bool,
}

/// One verification outcome. `instance` is a canonical space-separated
/// `key=value` string; together with `suite` it names the check uniquely.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub instance: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub location: String,
    pub value: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub ok: usize,
    pub fail: usize,
    pub skipped: usize,
}

fn scalar_strings(xs: &[Scalar]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn twist_strings(t: &[Scalar; 3]) -> [String; 3] {
    [t[0].to_string(), t[1].to_string(), t[2].to_string()]
}

fn echo(job: &Job) -> ConfigEcho {
    ConfigEcho {
        suites: job.suites.iter().map(|s| s.token().to_string()).collect(),
        chain_len: job.chain_len,
        split: job.split,
        a_max: job.a_max,
        b_max: job.b_max,
        seed: job.seed,
        samples: job.samples,
        c: job.kernel.c().to_string(),
        xi: scalar_strings(&job.xi),
        twist1: twist_strings(&job.twist1),
        twist2: twist_strings(&job.twist2),
        twist3: twist_strings(&job.twist3),
        max_chain: job.max_chain,
        jobs: job.jobs,
        no_timings: job.no_timings,
    }
}

/// Exit status for a finished run: 0 when nothing failed, 1 otherwise.
/// (Status 2 — invalid configuration or an exhausted draw — is decided
/// before a report exists.)
pub fn exit_code(report: &Report) -> i32 {
    if report.summary.fail > 0 {
        1
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Instance enumeration
// ---------------------------------------------------------------------------

type InstanceFn = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Vec<(String, Verdict)>> + Send + Sync>;

struct InstanceJob {
    suite: Suite,
    /// Canonical instance name; multi-check instances append ` check=…`.
    tag: String,
    run: InstanceFn,
}

fn total_twist(job: &Job) -> [Scalar; 3] {
    [
        &job.twist1[0] * &job.twist2[0],
        &job.twist1[1] * &job.twist2[1],
        &job.twist1[2] * &job.twist2[2],
    ]
}

fn ab_grid(a_max: usize, b_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=a_max {
        for b in 0..=b_max {
            out.push((a, b));
        }
    }
    out
}

/// Split one flat draw of `a + b (+ 1)` values into the two families (and the
/// action point, when asked for).
fn draw_index(
    rng: &mut ChaCha8Rng,
    kernel: &Kernel,
    pool: &[Scalar],
    a: usize,
    b: usize,
    with_point: bool,
) -> Result<(BetheIndex, Option<Scalar>)> {
    let extra = if with_point { 1 } else { 0 };
    let mut vals = draw_generic_scalars(rng, a + b + extra, kernel, pool, |_| true)?;
    let z = if with_point { vals.pop() } else { None };
    let v = vals.split_off(a);
    Ok((BetheIndex::new(vals, v)?, z))
}

fn instance_jobs(job: &Job) -> Result<Vec<InstanceJob>> {
    let mut out: Vec<InstanceJob> = Vec::new();
    let k = job.kernel.clone();
    let grid = ab_grid(job.a_max, job.b_max);

    let need = |s: Suite| job.suites.contains(&s);
    let need_plain = need(Suite::Rtt)
        || need(Suite::Actions)
        || need(Suite::BetheEquiv)
        || need(Suite::Morphisms);
    let need_pair = need(Suite::Theorem1)
        || need(Suite::Corollary1)
        || need(Suite::Ledgers)
        || need(Suite::Weight);

    let twisted: Option<Arc<MonodromyRep>> = if need_plain {
        Some(Arc::new(MonodromyRep::chain(&ChainSpec::with_cap(
            job.xi.clone(),
            total_twist(job),
            k.c().clone(),
            job.max_chain,
        )?)))
    } else {
        None
    };
    let untwisted: Option<Arc<MonodromyRep>> = if need(Suite::Morphisms) {
        Some(Arc::new(MonodromyRep::chain(&ChainSpec::with_cap(
            job.xi.clone(),
            [int(1), int(1), int(1)],
            k.c().clone(),
            job.max_chain,
        )?)))
    } else {
        None
    };
    let pair: Option<Arc<CompositePair>> = if need_pair {
        let spec = SplitSpec::with_cap(
            job.xi.clone(),
            job.split,
            job.twist1.clone(),
            job.twist2.clone(),
            k.c().clone(),
            job.max_chain,
        )?;
        Some(Arc::new(split_monodromy(&spec)?))
    } else {
        None
    };

    if need(Suite::Rtt) {
        let rep = twisted.clone().unwrap();
        for s in 0..job.samples {
            let tag = format!("sample={s}");
            let rep = Arc::clone(&rep);
            let k = k.clone();
            let xi = job.xi.clone();
            let t = tag.clone();
            out.push(InstanceJob {
                suite: Suite::Rtt,
                tag,
                run: Box::new(move |rng| {
                    let w = draw_generic_scalars(rng, 2, &k, &xi, |_| true)?;
                    Ok(vec![(t.clone(), rep.rtt_selftest(&w[0], &w[1])?)])
                }),
            });
        }
    }

    if need(Suite::Actions) {
        let rep = twisted.clone().unwrap();
        for action in Action::ALL {
            for &(a, b) in &grid {
                for s in 0..job.samples {
                    let tag = format!("action={} a={a} b={b} sample={s}", action.label());
                    let rep = Arc::clone(&rep);
                    let k = k.clone();
                    let xi = job.xi.clone();
                    let t = tag.clone();
                    out.push(InstanceJob {
                        suite: Suite::Actions,
                        tag,
                        run: Box::new(move |rng| {
                            let (idx, z) = draw_index(rng, &k, &xi, a, b, true)?;
                            let verdict = verify_action(&rep, action, &idx, &z.unwrap())?;
                            Ok(vec![(t.clone(), verdict)])
                        }),
                    });
                }
            }
        }
    }

    if need(Suite::BetheEquiv) {
        let rep = twisted.clone().unwrap();
        for &(a, b) in &grid {
            for s in 0..job.samples {
                let tag = format!("a={a} b={b} sample={s}");
                let rep = Arc::clone(&rep);
                let k = k.clone();
                let xi = job.xi.clone();
                let t = tag.clone();
                out.push(InstanceJob {
                    suite: Suite::BetheEquiv,
                    tag,
                    run: Box::new(move |rng| {
                        let (idx, _) = draw_index(rng, &k, &xi, a, b, false)?;
                        let closed = bethe_vector(&rep, &idx)?;
                        let peeled = bethe_vector_recursive(&rep, &idx)?;
                        Ok(vec![(t.clone(), compare_vectors(&closed, &peeled))])
                    }),
                });
            }
        }
    }

    for (suite, dual) in [(Suite::Theorem1, false), (Suite::Corollary1, true)] {
        if !need(suite) {
            continue;
        }
        let pair = pair.clone().unwrap();
        for &(a, b) in &grid {
            for s in 0..job.samples {
                let tag = format!("a={a} b={b} sample={s}");
                let pair = Arc::clone(&pair);
                let k = k.clone();
                let xi = job.xi.clone();
                let t = tag.clone();
                out.push(InstanceJob {
                    suite,
                    tag,
                    run: Box::new(move |rng| {
                        let (idx, _) = draw_index(rng, &k, &xi, a, b, false)?;
                        let verdict = if dual {
                            verify_dual_decomposition(&pair, &idx)?
                        } else {
                            verify_decomposition(&pair, &idx)?
                        };
                        Ok(vec![(t.clone(), verdict)])
                    }),
                });
            }
        }
    }

    if need(Suite::Ledgers) {
        let pair = pair.clone().unwrap();
        for ledger in ["t13", "t12"] {
            for &(a, b) in &grid {
                for s in 0..job.samples {
                    let tag = format!("ledger={ledger} a={a} b={b} sample={s}");
                    let pair = Arc::clone(&pair);
                    let k = k.clone();
                    let xi = job.xi.clone();
                    let t = tag.clone();
                    out.push(InstanceJob {
                        suite: Suite::Ledgers,
                        tag,
                        run: Box::new(move |rng| {
                            let (idx, z) = draw_index(rng, &k, &xi, a, b, true)?;
                            let z = z.unwrap();
                            let checks = if ledger == "t13" {
                                t13_ledger(&pair, &idx, &z)?
                            } else {
                                t12_ledger(&pair, &idx, &z)?
                            };
                            Ok(checks
                                .into_iter()
                                .map(|c| (format!("{t} check={}", slug(&c.label)), c.verdict))
                                .collect())
                        }),
                    });
                }
            }
        }
    }

    if need(Suite::Weight) {
        let pair = pair.clone().unwrap();
        for &(a, b) in &grid {
            for s in 0..job.samples {
                let tag = format!("a={a} b={b} sample={s}");
                let pair = Arc::clone(&pair);
                let k = k.clone();
                let xi = job.xi.clone();
                let t = tag.clone();
                out.push(InstanceJob {
                    suite: Suite::Weight,
                    tag,
                    run: Box::new(move |rng| {
                        let (idx, _) = draw_index(rng, &k, &xi, a, b, false)?;
                        Ok(vec![(t.clone(), verify_weight_coproduct(&pair, &idx)?)])
                    }),
                });
            }
        }
    }

    if need(Suite::Morphisms) {
        let plain = twisted.clone().unwrap();
        let bare = untwisted.clone().unwrap();
        for (variant, rep) in [("plain", Arc::clone(&bare)), ("twisted", Arc::clone(&plain))] {
            for &(a, b) in &grid {
                for s in 0..job.samples {
                    let tag = format!("morph=psi twist={variant} a={a} b={b} sample={s}");
                    let rep = Arc::clone(&rep);
                    let k = k.clone();
                    let xi = job.xi.clone();
                    let t = tag.clone();
                    out.push(InstanceJob {
                        suite: Suite::Morphisms,
                        tag,
                        run: Box::new(move |rng| {
                            let (idx, _) = draw_index(rng, &k, &xi, a, b, false)?;
                            Ok(vec![(t.clone(), verify_transpose_morphism(&rep, &idx)?)])
                        }),
                    });
                }
            }
        }
        for &(a, b) in &grid {
            for s in 0..job.samples {
                let tag = format!("morph=phi a={a} b={b} sample={s}");
                let rep = Arc::clone(&plain);
                let k = k.clone();
                let xi = job.xi.clone();
                let t = tag.clone();
                out.push(InstanceJob {
                    suite: Suite::Morphisms,
                    tag,
                    run: Box::new(move |rng| {
                        // The reflected families are the negated originals, so
                        // candidates must stay generic against ξ after negation.
                        let kk = k.clone();
                        let xi2 = xi.clone();
                        let keep = move |x: &Scalar| {
                            xi2.iter()
                                .all(|g| !kk.is_forbidden_difference(&(-x.clone() - g)))
                        };
                        let mut vals = draw_generic_scalars(rng, a + b, &k, &xi, keep)?;
                        let v = vals.split_off(a);
                        let idx = BetheIndex::new(vals, v)?;
                        Ok(vec![(t.clone(), verify_reflect_morphism(&rep, &idx)?)])
                    }),
                });
            }
        }
    }

    if need(Suite::Coassoc) {
        let (ca, cb) = (job.a_max.min(2), job.b_max.min(1));
        for p in 0..=job.chain_len {
            for q in p..=job.chain_len {
                let spec = TripleSplitSpec::with_cap(
                    job.xi.clone(),
                    (p, q),
                    [job.twist1.clone(), job.twist2.clone(), job.twist3.clone()],
                    k.c().clone(),
                    job.max_chain,
                )?;
                let spec = Arc::new(spec);
                for s in 0..job.samples {
                    let tag = format!("a={ca} b={cb} p={p} q={q} sample={s}");
                    let spec = Arc::clone(&spec);
                    let k = k.clone();
                    let xi = job.xi.clone();
                    let t = tag.clone();
                    out.push(InstanceJob {
                        suite: Suite::Coassoc,
                        tag,
                        run: Box::new(move |rng| {
                            let (idx, _) = draw_index(rng, &k, &xi, ca, cb, false)?;
                            Ok(vec![(t.clone(), verify_triple_associativity(&spec, &idx)?)])
                        }),
                    });
                }
            }
        }
    }

    // Composite-action covariance rides along with the ledgers suite: the
    // same pair, the two entries with ledgers, verified at vector level.
    if need(Suite::Ledgers) {
        let pair = pair.clone().unwrap();
        for entry in ["t13", "t12"] {
            for &(a, b) in &grid {
                for s in 0..job.samples {
                    let tag = format!("covariance={entry} a={a} b={b} sample={s}");
                    let pair = Arc::clone(&pair);
                    let k = k.clone();
                    let xi = job.xi.clone();
                    let t = tag.clone();
                    out.push(InstanceJob {
                        suite: Suite::Ledgers,
                        tag,
                        run: Box::new(move |rng| {
                            let (idx, z) = draw_index(rng, &k, &xi, a, b, true)?;
                            let z = z.unwrap();
                            let verdict = if entry == "t13" {
                                verify_composite_t13_action(&pair, &idx, &z)?
                            } else {
                                verify_composite_t12_action(&pair, &idx, &z)?
                            };
                            Ok(vec![(t.clone(), verdict)])
                        }),
                    });
                }
            }
        }
    }

    Ok(out)
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

fn run_instance(job: &Job, ij: &InstanceJob) -> Result<Vec<CheckRecord>> {
    let seed = derive_seed(job.seed, &format!("{}|{}", ij.suite.token(), ij.tag));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let begun = Instant::now();
    let outcomes = (ij.run)(&mut rng)?;
    let wall_ms = if job.no_timings {
        0
    } else {
        begun.elapsed().as_millis() as u64
    };
    Ok(outcomes
        .into_iter()
        .map(|(instance, verdict)| CheckRecord {
            suite: ij.suite.token().to_string(),
            instance,
            witness: match &verdict {
                Verdict::Fail(w) => Some(WitnessRecord {
                    location: w.location.clone(),
                    value: w.value.to_string(),
                }),
                _ => None,
            },
            note: match &verdict {
                Verdict::Skipped(why) => Some(why.clone()),
                _ => None,
            },
            verdict: verdict.token().to_string(),
            wall_ms,
        })
        .collect())
}

/// Run every instance of every selected suite and assemble the report.
/// Checks are sorted by `(suite, instance)`; the summary counts verdicts.
pub fn run_job(job: &Job) -> Result<Report> {
    let instances = instance_jobs(job)?;
    let results: Result<Vec<Vec<CheckRecord>>> = if job.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(job.jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot build a {}-thread pool: {e}", job.jobs)))?;
        pool.install(|| {
            instances
                .par_iter()
                .map(|ij| run_instance(job, ij))
                .collect()
        })
    } else {
        instances.iter().map(|ij| run_instance(job, ij)).collect()
    };
    let mut checks: Vec<CheckRecord> = results?.into_iter().flatten().collect();
    checks.sort_by(|x, y| {
        (x.suite.as_str(), x.instance.as_str()).cmp(&(y.suite.as_str(), y.instance.as_str()))
    });
    let mut summary = Summary::default();
    for c in &checks {
        match c.verdict.as_str() {
            "ok" => summary.ok += 1,
            "fail" => summary.fail += 1,
            _ => summary.skipped += 1,
        }
    }
    Ok(Report {
        version: REPORT_VERSION,
        tool: ToolStamp {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        config: echo(job),
        checks,
        summary,
    })
}

/// Where the report goes: `--out` wins, then `$GL3_BETHE_OUT_DIR/report.json`,
/// then stdout (`None`).
pub fn report_destination(out: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_path_buf());
    }
    std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join("report.json"))
}

/// Pretty JSON plus a trailing newline — the exact bytes written or printed.
pub fn render_report(report: &Report) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

fn emit(report: &Report, dest: Option<&Path>) -> Result<()> {
    let text = render_report(report)?;
    match dest {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// The whole driver: resolve, run, emit, map to an exit status.
/// 0 = everything ok (skips allowed), 1 = some check failed,
/// 2 = the job never ran (bad config, impossible draw, i/o trouble).
pub fn run(args: &CliArgs) -> i32 {
    let job = match job_from(args) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("verify: {e}");
            return 2;
        }
    };
    let report = match run_job(&job) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return 2;
        }
    };
    let dest = report_destination(job.out.as_deref());
    if let Err(e) = emit(&report, dest.as_deref()) {
        eprintln!("verify: {e}");
        return 2;
    }
    if let Some(path) = &dest {
        println!("report: {}", path.display());
        println!(
            "summary: {} ok, {} fail, {} skipped",
            report.summary.ok, report.summary.fail, report.summary.skipped
        );
    }
    exit_code(&report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::rat;

    #[test]
    fn config_parsing_accepts_rationals_and_rejects_unknown_keys() {
        let cfg = parse_config(
            r#"{"L": 2, "c": "-3/2", "xi": ["0", "10"], "suites": ["rtt"], "seed": 4}"#,
        )
        .unwrap();
        assert_eq!(cfg.chain_len, Some(2));
        assert_eq!(cfg.c.as_deref(), Some("-3/2"));
        assert!(parse_config(r#"{"length": 2}"#).is_err());
        assert!(parse_config(r#"{"L": 2,}"#).is_err());
    }

    #[test]
    fn resolution_defaults_then_config_then_flags() {
        let job = resolve(JobConfig::default(), &CliArgs::default()).unwrap();
        assert_eq!(job.chain_len, 3);
        assert_eq!(job.split, 1);
        assert_eq!((job.a_max, job.b_max), (2, 2));
        assert_eq!(job.seed, 1);
        assert_eq!(job.samples, 1);
        assert_eq!(job.max_chain, 8);
        assert_eq!(job.kernel.c(), &int(1));
        assert_eq!(job.xi, vec![int(0), int(10), int(20)]);
        assert_eq!(job.suites.len(), Suite::ALL.len());

        let cfg = parse_config(r#"{"L": 2, "seed": 9, "suites": ["weight"]}"#).unwrap();
        let args = CliArgs {
            seed: Some(11),
            c: Some("1/3".into()),
            ..CliArgs::default()
        };
        let job = resolve(cfg, &args).unwrap();
        assert_eq!(job.chain_len, 2);
        assert_eq!(job.seed, 11, "flag beats file");
        assert_eq!(job.kernel.c(), &rat(1, 3));
        assert_eq!(job.suites, vec![Suite::Weight]);
    }

    #[test]
    fn bad_jobs_are_config_errors() {
        // Unknown suite.
        let args = CliArgs {
            suites: vec!["bogus".into()],
            ..CliArgs::default()
        };
        assert!(matches!(resolve(JobConfig::default(), &args), Err(Error::Config(_))));
        // Zero model constant.
        let args = CliArgs {
            c: Some("0".into()),
            ..CliArgs::default()
        };
        assert!(resolve(JobConfig::default(), &args).is_err());
        // xi length mismatch.
        let cfg = parse_config(r#"{"L": 3, "xi": ["0", "10"]}"#).unwrap();
        assert!(resolve(cfg, &CliArgs::default()).is_err());
        // Split out of range.
        let args = CliArgs {
            split: Some(7),
            ..CliArgs::default()
        };
        assert!(resolve(JobConfig::default(), &args).is_err());
        // Prescribed total twist that the parts do not multiply to.
        let cfg =
            parse_config(r#"{"twist": ["1", "1", "1"]}"#).unwrap();
        assert!(resolve(cfg, &CliArgs::default()).is_err());
        // A total twist that checks out is fine.
        let cfg = parse_config(r#"{"twist": ["14", "3", "10"]}"#).unwrap();
        assert!(resolve(cfg, &CliArgs::default()).is_ok());
    }

    #[test]
    fn draws_are_reproducible_generic_and_bounded() {
        let k = Kernel::new(int(1)).unwrap();
        let pool = vec![int(0), int(10), int(20)];
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let a = draw_generic_scalars(&mut r1, 6, &k, &pool, |_| true).unwrap();
        let b = draw_generic_scalars(&mut r2, 6, &k, &pool, |_| true).unwrap();
        assert_eq!(a, b);
        for (i, x) in a.iter().enumerate() {
            for y in pool.iter().chain(&a[..i]) {
                assert!(!k.is_forbidden_difference(&(x - y)));
            }
        }
        // A predicate nothing satisfies exhausts the retry budget.
        let mut r3 = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(
            draw_generic_scalars(&mut r3, 1, &k, &pool, |_| false),
            Err(Error::DrawExhausted)
        ));
    }

    #[test]
    fn exit_codes_follow_the_summary() {
        let mut report = Report {
            version: REPORT_VERSION,
            tool: ToolStamp {
                name: "x".into(),
                version: "0".into(),
            },
            config: echo(&resolve(JobConfig::default(), &CliArgs::default()).unwrap()),
            checks: vec![
                CheckRecord {
                    suite: "rtt".into(),
                    instance: "sample=0".into(),
                    verdict: "ok".into(),
                    witness: None,
                    note: None,
                    wall_ms: 0,
                },
                CheckRecord {
                    suite: "actions".into(),
                    instance: "action=T32 a=0 b=0 sample=0".into(),
                    verdict: "skipped".into(),
                    witness: None,
                    note: Some("T32 expansion needs a nonempty v-family".into()),
                    wall_ms: 0,
                },
            ],
            summary: Summary {
                ok: 1,
                fail: 0,
                skipped: 1,
            },
        };
        assert_eq!(exit_code(&report), 0, "skips do not fail a run");
        report.checks.push(CheckRecord {
            suite: "weight".into(),
            instance: "a=1 b=1 sample=0".into(),
            verdict: "fail".into(),
            witness: Some(WitnessRecord {
                location: "basis state 4".into(),
                value: "1/12".into(),
            }),
            note: None,
            wall_ms: 3,
        });
        report.summary.fail = 1;
        assert_eq!(exit_code(&report), 1);
    }

    #[test]
    fn ledger_labels_become_instance_tokens() {
        assert_eq!(slug("C11 = A1"), "C11_eq_A1");
        assert_eq!(slug("C12 + C22 = 0"), "C12_plus_C22_eq_0");
        assert_eq!(slug("sum A = matrix action"), "sum_A_eq_matrix_action");
    }

    #[test]
    fn reports_are_deterministic_and_sorted() {
        let cfg = parse_config(
            r#"{"L": 2, "suites": ["rtt", "bethe-equiv"], "a_max": 1, "b_max": 1, "samples": 2, "seed": 3}"#,
        )
        .unwrap();
        let args = CliArgs {
            no_timings: true,
            ..CliArgs::default()
        };
        let job = resolve(cfg, &args).unwrap();
        let r1 = run_job(&job).unwrap();
        let r2 = run_job(&job).unwrap();
        assert_eq!(render_report(&r1).unwrap(), render_report(&r2).unwrap());
        assert_eq!(r1.summary.fail, 0);
        assert_eq!(r1.summary.ok, r1.checks.len());
        let mut sorted = r1.checks.clone();
        sorted.sort_by(|x, y| {
            (x.suite.as_str(), x.instance.as_str()).cmp(&(y.suite.as_str(), y.instance.as_str()))
        });
        assert_eq!(
            r1.checks.iter().map(|c| &c.instance).collect::<Vec<_>>(),
            sorted.iter().map(|c| &c.instance).collect::<Vec<_>>()
        );
        // Parallel execution yields the identical report.
        let mut par = job.clone();
        par.jobs = 4;
        let r3 = run_job(&par).unwrap();
        // jobs is echoed in the config, so compare the checks themselves.
        assert_eq!(render_checks(&r1), render_checks(&r3));
    }

    fn render_checks(r: &Report) -> String {
        serde_json::to_string(&r.checks).unwrap()
    }

    #[test]
    fn destination_resolution_prefers_the_flag() {
        let flag = PathBuf::from("x/y.json");
        assert_eq!(report_destination(Some(&flag)), Some(flag.clone()));
        // Without the flag the env var decides; this is the only test that
        // touches it, so the set/remove pair cannot race another test.
        std::env::set_var(OUT_DIR_ENV, "/tmp/reports");
        assert_eq!(
            report_destination(None),
            Some(PathBuf::from("/tmp/reports/report.json"))
        );
        std::env::remove_var(OUT_DIR_ENV);
        assert_eq!(report_destination(None), None);
    }
}
