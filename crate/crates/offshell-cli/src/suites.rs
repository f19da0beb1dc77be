//! Verification suites. Every suite expands into a fixed list of jobs; each
//! job draws its sample points from its own `(seed, stream)` pair, so the
//! report does not depend on scheduling or thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use offshell::bethe::{
    cross_validate, first_disagreement, sample_assignment, BetheTask, CrossValidation, Route,
};
use offshell::exact::Sampler;
use offshell::gauss::{
    check_composed_currents, check_current_relations, check_current_serre, gauss_extract,
    reconstruct_l, Flavor,
};
use offshell::qsym::{
    brute_force_admissible_m, brute_force_admissible_s, check_sym_idempotent,
    check_sym_of_q_symmetric, check_sym_of_symmetric, check_sym_split, check_sym_weighted,
    enumerate_admissible_m, enumerate_admissible_s, Composition, ProbeFunction, SymmetricProbe,
    VariableAssignment,
};
use offshell::rep::{check_module, tensor_power, vector_rep, AffineModule};
use offshell::rmatrix::{build_r, check_ybe_with, swap, RPoint};
use offshell::{Check, Error, OpMatrix, Scalar};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Fault, ModuleSpec, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Ybe,
    Rll,
    Serre,
    Gauss,
    Currents,
    Qsym,
    Combinatorics,
    Routes,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Ybe,
        Suite::Rll,
        Suite::Serre,
        Suite::Gauss,
        Suite::Currents,
        Suite::Qsym,
        Suite::Combinatorics,
        Suite::Routes,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Ybe => "ybe",
            Suite::Rll => "rll",
            Suite::Serre => "serre",
            Suite::Gauss => "gauss",
            Suite::Currents => "currents",
            Suite::Qsym => "qsym",
            Suite::Combinatorics => "combinatorics",
            Suite::Routes => "routes",
        }
    }

    /// Stream block reserved for the suite's jobs.
    fn stream_base(self) -> u64 {
        (self as u64 + 1) << 32
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.label() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Every resample attempt hit a pole.
    Exhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub name: String,
    pub inputs: String,
    pub verdict: Verdict,
    pub checks: usize,
    /// Checks that passed only because both sides vanish.
    pub trivial: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Record {
    fn from_checks(suite: Suite, name: String, inputs: String, checks: &[Check]) -> Self {
        let failed = checks.iter().find(|c| !c.pass);
        Record {
            suite,
            name,
            inputs,
            verdict: if failed.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            checks: checks.len(),
            trivial: checks.iter().filter(|c| c.is_trivial()).count(),
            detail: failed.map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default())),
            vectors: None,
            wall_ms: None,
        }
    }

    fn error(suite: Suite, name: String, inputs: String, e: &Error, exhausted: bool) -> Self {
        Record {
            suite,
            name,
            inputs,
            verdict: if exhausted {
                Verdict::Exhausted
            } else {
                Verdict::Fail
            },
            checks: 0,
            trivial: 0,
            detail: Some(if exhausted {
                format!("unlucky sampling: {e}")
            } else {
                e.to_string()
            }),
            vectors: None,
            wall_ms: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Job {
    suite: Suite,
    index: usize,
}

fn jobs(cfg: &RunConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for &suite in &cfg.suites {
        let count = match suite {
            Suite::Ybe => cfg.samples.ybe + 1,
            Suite::Rll => cfg.samples.rll,
            Suite::Serre => 1,
            Suite::Gauss => cfg.samples.gauss,
            Suite::Currents => cfg.samples.currents,
            Suite::Qsym => cfg.samples.qsym,
            Suite::Combinatorics => combinatorics_cases(cfg.rank).len(),
            Suite::Routes => {
                if cfg.t.is_some() {
                    1
                } else {
                    cfg.samples.routes
                }
            }
        };
        out.extend((0..count).map(|index| Job { suite, index }));
    }
    out
}

/// Runs every job of the selected suites; records come back in job order.
pub fn run_jobs(cfg: &RunConfig, timings: bool) -> Vec<Record> {
    jobs(cfg)
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let mut rec = run_job(cfg, *job);
            if timings {
                rec.wall_ms = Some(start.elapsed().as_millis() as u64);
            }
            rec
        })
        .collect()
}

fn sampler(cfg: &RunConfig, job: Job) -> Sampler {
    Sampler::new(cfg.seed, job.suite.stream_base() + job.index as u64)
}

/// The configured module; unspecified `q` and evaluation points are drawn
/// from `s`.
pub fn build_module(cfg: &RunConfig, s: &mut Sampler) -> offshell::Result<AffineModule> {
    let q = cfg.q.clone().unwrap_or_else(|| s.generic_q());
    let vec = vector_rep(cfg.rank, &q)?;
    match &cfg.module {
        ModuleSpec::Evaluation { z, power } => {
            let z = z.clone().unwrap_or_else(|| s.scalar());
            AffineModule::evaluation(tensor_power(&vec, *power)?, &z)
        }
        ModuleSpec::Tensor { factors } => {
            let mut acc: Option<AffineModule> = None;
            for z in factors {
                let z = z.clone().unwrap_or_else(|| s.scalar());
                let f = AffineModule::evaluation(vec.clone(), &z)?;
                acc = Some(match acc {
                    None => f,
                    Some(a) => AffineModule::tensor(&a, &f)?,
                });
            }
            acc.ok_or_else(|| Error::Parameter("empty tensor product".into()))
        }
    }
}

fn module_inputs(m: &AffineModule) -> String {
    format!("N={} q={} dim={}", m.n(), m.q(), m.dim())
}

/// Retries `f` with fresh draws while it reports a pole.
fn resampled<T>(
    retries: usize,
    s: &mut Sampler,
    mut f: impl FnMut(&mut Sampler) -> offshell::Result<T>,
) -> Result<T, (Error, bool)> {
    let mut last = None;
    for _ in 0..=retries {
        match f(s) {
            Ok(x) => return Ok(x),
            Err(e) if e.needs_resample() => last = Some(e),
            Err(e) => return Err((e, false)),
        }
    }
    Err((last.expect("at least one attempt"), true))
}

fn run_job(cfg: &RunConfig, job: Job) -> Record {
    let mut s = sampler(cfg, job);
    let name = format!("{} #{}", job.suite, job.index);
    let outcome: Result<(String, Vec<Check>), (Error, bool)> = match job.suite {
        Suite::Ybe => resampled(cfg.retries, &mut s, |s| ybe_job(cfg, job.index, s)),
        Suite::Rll => resampled(cfg.retries, &mut s, |s| {
            let m = build_module(cfg, s)?;
            let (u, v) = (s.scalar(), s.scalar());
            let mut checks = m.check_rll_all(&u, &v)?;
            checks.extend(m.check_zero_modes()?);
            checks.push(m.check_constant_part()?);
            Ok((format!("{} u={u} v={v}", module_inputs(&m)), checks))
        }),
        Suite::Serre => resampled(cfg.retries, &mut s, |s| {
            let m = build_module(cfg, s)?;
            Ok((module_inputs(&m), check_module(&m.rep)?))
        }),
        Suite::Gauss => resampled(cfg.retries, &mut s, |s| {
            let m = build_module(cfg, s)?;
            let t = s.scalar();
            let mut checks = Vec::new();
            for flavor in [Flavor::First, Flavor::Second] {
                let g = gauss_extract(&m.lplus, &m.lminus, &t, flavor)?;
                let (p, mi) = reconstruct_l(&g)?;
                checks.push(Check::matrices(
                    format!("{flavor:?} L+"),
                    &p.flatten(),
                    &m.lplus.eval(&t)?.flatten(),
                ));
                checks.push(Check::matrices(
                    format!("{flavor:?} L-"),
                    &mi.flatten(),
                    &m.lminus.eval(&t)?.flatten(),
                ));
            }
            Ok((format!("{} t={t}", module_inputs(&m)), checks))
        }),
        Suite::Currents => resampled(cfg.retries, &mut s, |s| {
            let m = build_module(cfg, s)?;
            let (z, w, z2) = (s.scalar(), s.scalar(), s.scalar());
            let mut checks = Vec::new();
            for flavor in [Flavor::First, Flavor::Second] {
                checks.extend(check_current_relations(&m, &z, &w, flavor)?);
                checks.extend(check_current_serre(&m, &z, &z2, &w, flavor)?);
            }
            checks.extend(check_composed_currents(&m, &z, &w)?);
            Ok((format!("{} z={z} w={w} z2={z2}", module_inputs(&m)), checks))
        }),
        Suite::Qsym => resampled(cfg.retries, &mut s, |s| qsym_job(cfg, s)),
        Suite::Combinatorics => {
            let c = &combinatorics_cases(cfg.rank)[job.index];
            Ok((format!("N={} n={c}", cfg.rank), combinatorics_checks(c)))
        }
        Suite::Routes => return routes_job(cfg, job, &mut s),
    };
    match outcome {
        Ok((inputs, checks)) => Record::from_checks(job.suite, name, inputs, &checks),
        Err((e, exhausted)) => Record::error(job.suite, name, String::new(), &e, exhausted),
    }
}

fn ybe_job(
    cfg: &RunConfig,
    index: usize,
    s: &mut Sampler,
) -> offshell::Result<(String, Vec<Check>)> {
    let n = cfg.rank;
    let q = cfg.q.clone().unwrap_or_else(|| s.generic_q());
    if index == cfg.samples.ybe {
        // Fixed-point checks: R(u,u) is the flip, R at q = 1 is the identity.
        let u = s.scalar();
        let v = s.scalar();
        let at_u = build_r(&RPoint::new(n, u.clone(), u.clone(), q.clone())?);
        let classical = build_r(&RPoint::new(n, u.clone(), v.clone(), Scalar::one())?);
        let checks = vec![
            Check::matrices("R(u,u) = flip", &at_u, &swap(n)),
            Check::matrices(
                "R at q=1 = identity",
                &classical,
                &OpMatrix::identity(n * n),
            ),
        ];
        return Ok((format!("N={n} q={q} u={u} v={v}"), checks));
    }
    let (u, v, w) = (s.scalar(), s.scalar(), s.scalar());
    let fault = cfg.inject_fault == Some(Fault::RCoefficient);
    let r = |a: &Scalar, b: &Scalar| -> offshell::Result<OpMatrix> {
        let mut r = build_r(&RPoint::new(n, a.clone(), b.clone(), q.clone())?);
        if fault {
            // Corrupt the u-side exchange entry of the (1,2) pair.
            let (i, j) = (1, n);
            let x = r[(i, j)].clone();
            r[(i, j)] = &x + &x;
        }
        Ok(r)
    };
    let check = check_ybe_with(n, &r, &u, &v, &w)?;
    Ok((format!("N={n} q={q} u={u} v={v} w={w}"), vec![check]))
}

fn qsym_job(cfg: &RunConfig, s: &mut Sampler) -> offshell::Result<(String, Vec<Check>)> {
    let q = cfg.q.clone().unwrap_or_else(|| s.generic_q());
    let comp = Composition::new(cfg.rank, cfg.n.clone())?;
    let t = VariableAssignment::sample(&comp, s, &q, &[]);
    let g = ProbeFunction::sample(comp.parts(), s);
    let mut checks = vec![
        check_sym_idempotent(&g, &t, &q)?,
        check_sym_weighted(&g, &t, &q)?,
    ];
    checks.extend(check_sym_of_q_symmetric(&g, &t, &q)?);
    for a in 1..cfg.rank {
        let u = t.group(a);
        let ga = ProbeFunction::sample(&[u.len()], s);
        for cut in 0..=u.len() {
            checks.push(check_sym_split(&ga, u, cut, &q)?);
        }
        checks.push(check_sym_of_symmetric(&SymmetricProbe::sample(s), u, &q)?);
    }
    let groups = t
        .to_strings()
        .iter()
        .map(|g| g.join(","))
        .collect::<Vec<_>>()
        .join(";");
    Ok((format!("q={q} n={comp} t=[{groups}]"), checks))
}

/// Every composition of the configured rank with `|n̄| ≤ 6`.
fn combinatorics_cases(rank: usize) -> Vec<Composition> {
    Composition::all_up_to(rank, 0, 6)
}

fn combinatorics_checks(c: &Composition) -> Vec<Check> {
    let mut checks = Vec::new();
    let fast_s = enumerate_admissible_s(c);
    let mut brute_s = brute_force_admissible_s(c);
    let mut sorted = fast_s.clone();
    sorted.sort();
    brute_s.sort();
    checks.push(same_list(
        "s matrices",
        sorted.len(),
        fast_s.len(),
        sorted == brute_s,
    ));
    let fast_m = enumerate_admissible_m(c);
    let mut brute_m = brute_force_admissible_m(c);
    let mut sorted = fast_m.clone();
    sorted.sort();
    brute_m.sort();
    checks.push(same_list(
        "m matrices",
        sorted.len(),
        fast_m.len(),
        sorted == brute_m,
    ));
    if c.rank() == 3 && c.parts() == [1, 1] {
        checks.push(count_check("worked example s", fast_s.len(), 2));
        checks.push(count_check("worked example m", fast_m.len(), 2));
    }
    checks
}

fn same_list(name: &str, dedup: usize, total: usize, equal: bool) -> Check {
    if equal && dedup == total {
        Check::pass(name)
    } else {
        Check::fail(name, "enumeration differs from exhaustive search")
    }
}

fn count_check(name: &str, got: usize, want: usize) -> Check {
    if got == want {
        Check::pass(name)
    } else {
        Check::fail(name, format!("{got} != {want}"))
    }
}

/// The configured Bethe task; explicit `t` is used as given, otherwise a
/// fresh assignment is drawn.
pub fn build_task(cfg: &RunConfig, s: &mut Sampler) -> offshell::Result<BetheTask> {
    let module = build_module(cfg, s)?;
    let comp = Composition::new(cfg.rank, cfg.n.clone())?;
    let t = match &cfg.t {
        Some(groups) => VariableAssignment::new(&comp, groups.clone())?,
        None => sample_assignment(&comp, &module, s),
    };
    BetheTask::new(comp, module, t, cfg.routes.clone(), cfg.max_cells)
}

/// Cross-validates the configured routes; on a pole only the Bethe
/// variables are redrawn, the module stays fixed.
pub fn validate_task(
    cfg: &RunConfig,
    s: &mut Sampler,
) -> Result<(BetheTask, CrossValidation), (Error, bool)> {
    let retries = if cfg.t.is_some() { 0 } else { cfg.retries };
    let base = build_task(cfg, s).map_err(|e| (e, false))?;
    let mut first = true;
    resampled(retries, s, |s| {
        let t = if std::mem::take(&mut first) {
            base.clone()
        } else {
            base.with_assignment(sample_assignment(base.composition(), base.module(), s))?
        };
        let mut cv = cross_validate(&t)?;
        if cfg.inject_fault == Some(Fault::RouteValue) {
            if let Some(v) = cv.vectors.iter_mut().find(|v| v.route == Route::TvX) {
                v.coords[0] += Scalar::one();
            }
            cv.mismatch = first_disagreement(&cv.vectors);
        }
        Ok((t, cv))
    })
}

fn routes_job(cfg: &RunConfig, job: Job, s: &mut Sampler) -> Record {
    let name = format!("{} #{}", job.suite, job.index);
    match validate_task(cfg, s) {
        Ok((task, cv)) => {
            let vectors: BTreeMap<String, Vec<String>> = cv
                .vectors
                .iter()
                .map(|v| {
                    (
                        v.route.label().to_string(),
                        v.coords.iter().map(|x| x.to_string()).collect(),
                    )
                })
                .collect();
            let mut checks = Vec::new();
            checks.push(match cv.mismatch {
                None => {
                    let c = Check::pass("route agreement");
                    if cv.vectors[0].coords.iter().all(|x| x.is_zero()) {
                        c.with_note("trivial: both sides vanish")
                    } else {
                        c
                    }
                }
                Some((a, b, i)) => {
                    let va = &cv
                        .vectors
                        .iter()
                        .find(|v| v.route == a)
                        .expect("route present")
                        .coords[i];
                    let vb = &cv
                        .vectors
                        .iter()
                        .find(|v| v.route == b)
                        .expect("route present")
                        .coords[i];
                    Check::fail(
                        "route agreement",
                        format!("coordinate {i}: {a} = {va} but {b} = {vb}"),
                    )
                }
            });
            checks.push(if cv.weights_ok {
                Check::pass("weight property")
            } else {
                Check::fail(
                    "weight property",
                    "a route output is not a weight vector of the expected weight",
                )
            });
            let mut rec = Record::from_checks(job.suite, name, task.fingerprint(), &checks);
            rec.vectors = Some(vectors);
            rec
        }
        Err((e, exhausted)) => Record::error(job.suite, name, String::new(), &e, exhausted),
    }
}
