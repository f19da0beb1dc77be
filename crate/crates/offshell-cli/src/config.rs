//! JSON run configuration. Scalars are strings `"p"` or `"p/q"` (reduced);
//! every validation error carries the JSON pointer of the offending field.

use std::fmt;

use offshell::bethe::{Route, DEFAULT_MAX_CELLS};
use offshell::Scalar;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::suites::Suite;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "{at}: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(pointer: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        pointer: pointer.to_string(),
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModuleSpec {
    /// `Ev_z(C^N ⊗ … ⊗ C^N)` with `power` vector factors; `z` sampled when
    /// absent.
    Evaluation {
        #[serde(serialize_with = "opt_scalar")]
        z: Option<Scalar>,
        power: usize,
    },
    /// `Ev_{z_1}(C^N) ⊗ … ⊗ Ev_{z_k}(C^N)`.
    Tensor {
        #[serde(serialize_with = "opt_scalars")]
        factors: Vec<Option<Scalar>>,
    },
}

/// Corruptions used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Doubles the `u`-side exchange coefficient of the R-matrix.
    RCoefficient,
    /// Adds one to the first coordinate of the `tv_x` route.
    RouteValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Samples {
    pub ybe: usize,
    pub rll: usize,
    pub gauss: usize,
    pub currents: usize,
    pub qsym: usize,
    pub routes: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            ybe: 100,
            rll: 20,
            gauss: 10,
            currents: 20,
            qsym: 20,
            routes: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub rank: usize,
    pub n: Vec<usize>,
    #[serde(serialize_with = "opt_scalar")]
    pub q: Option<Scalar>,
    pub module: ModuleSpec,
    #[serde(serialize_with = "opt_groups")]
    pub t: Option<Vec<Vec<Scalar>>>,
    pub seed: u64,
    #[serde(serialize_with = "route_labels")]
    pub routes: Vec<Route>,
    pub suites: Vec<Suite>,
    pub samples: Samples,
    pub max_cells: usize,
    pub retries: usize,
    // Not echoed in reports: output must not depend on the pool size.
    #[serde(skip)]
    pub threads: Option<usize>,
    pub inject_fault: Option<Fault>,
}

fn opt_scalar<S: serde::Serializer>(x: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn opt_scalars<S: serde::Serializer>(x: &[Option<Scalar>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.as_ref().map(|v| v.to_string())))
}

fn opt_groups<S: serde::Serializer>(x: &Option<Vec<Vec<Scalar>>>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(g) => s.collect_seq(
            g.iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        ),
        None => s.serialize_none(),
    }
}

fn route_labels<S: serde::Serializer>(x: &[Route], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|r| r.label()))
}

const KEYS: &[&str] = &[
    "N",
    "n",
    "q",
    "module",
    "t",
    "seed",
    "routes",
    "suites",
    "samples",
    "max_cells",
    "retries",
    "threads",
    "inject_fault",
];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return err("", format!("not valid JSON: {e}")),
    };
    let Some(obj) = value.as_object() else {
        return err("", "expected a JSON object");
    };
    for k in obj.keys() {
        if !KEYS.contains(&k.as_str()) {
            return err(&format!("/{k}"), "unknown field");
        }
    }

    let rank = match obj.get("N") {
        Some(v) => uint(v, "/N")?,
        None => return err("/N", "missing"),
    };
    if !(2..=8).contains(&rank) {
        return err("/N", "N must lie in 2..=8");
    }
    let n = match obj.get("n") {
        Some(Value::Array(xs)) => xs
            .iter()
            .enumerate()
            .map(|(i, x)| uint(x, &format!("/n/{i}")))
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return err("/n", "expected an array of counts"),
        None => vec![1; rank - 1],
    };
    if n.len() != rank - 1 {
        return err(
            "/n",
            format!(
                "expected {} entries for N={rank}, got {}",
                rank - 1,
                n.len()
            ),
        );
    }

    let q = match obj.get("q") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let q = scalar(v, "/q")?;
            if q.is_zero() || q.abs().is_one() {
                return err("/q", "q must be nonzero, not ±1");
            }
            Some(q)
        }
    };

    let module = match obj.get("module") {
        None => ModuleSpec::Evaluation { z: None, power: 1 },
        Some(v) => module_spec(v)?,
    };

    let t = match obj.get("t") {
        None | Some(Value::Null) => None,
        Some(Value::Array(groups)) => {
            if groups.len() != n.len() {
                return err("/t", format!("expected {} groups of variables", n.len()));
            }
            let mut out = Vec::new();
            for (a, g) in groups.iter().enumerate() {
                let Value::Array(xs) = g else {
                    return err(&format!("/t/{a}"), "expected an array");
                };
                if xs.len() != n[a] {
                    return err(&format!("/t/{a}"), format!("expected {} values", n[a]));
                }
                out.push(
                    xs.iter()
                        .enumerate()
                        .map(|(l, x)| scalar(x, &format!("/t/{a}/{l}")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            Some(out)
        }
        Some(_) => return err("/t", "expected an array of arrays"),
    };

    let seed = match obj.get("seed") {
        Some(v) => u64_of(v, "/seed")?,
        None => 0,
    };
    let routes = match obj.get("routes") {
        None => {
            let tensor = matches!(module, ModuleSpec::Tensor { .. });
            Route::ALL
                .into_iter()
                .filter(|r| !(tensor && r.needs_evaluation()))
                .collect()
        }
        Some(Value::Array(xs)) => {
            let mut out = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                let p = format!("/routes/{i}");
                let Some(s) = x.as_str() else {
                    return err(&p, "expected a route name");
                };
                match s.parse::<Route>() {
                    Ok(r) if !out.contains(&r) => out.push(r),
                    Ok(_) => return err(&p, "duplicate route"),
                    Err(_) => return err(&p, format!("unknown route {s:?}")),
                }
            }
            out
        }
        Some(_) => return err("/routes", "expected an array"),
    };
    if routes.iter().any(|r| r.needs_evaluation()) && matches!(module, ModuleSpec::Tensor { .. }) {
        return err("/routes", "tv_x and tv_y need an evaluation module");
    }
    let suites = match obj.get("suites") {
        None => Suite::ALL.to_vec(),
        Some(Value::Array(xs)) => {
            let mut out = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                let p = format!("/suites/{i}");
                let Some(s) = x.as_str() else {
                    return err(&p, "expected a suite name");
                };
                match s.parse::<Suite>() {
                    Ok(r) if !out.contains(&r) => out.push(r),
                    Ok(_) => return err(&p, "duplicate suite"),
                    Err(_) => return err(&p, format!("unknown suite {s:?}")),
                }
            }
            out
        }
        Some(_) => return err("/suites", "expected an array"),
    };

    let mut samples = Samples::default();
    if let Some(v) = obj.get("samples") {
        let Some(m) = v.as_object() else {
            return err("/samples", "expected an object");
        };
        for (k, v) in m {
            let p = format!("/samples/{k}");
            let x = uint(v, &p)?;
            match k.as_str() {
                "ybe" => samples.ybe = x,
                "rll" => samples.rll = x,
                "gauss" => samples.gauss = x,
                "currents" => samples.currents = x,
                "qsym" => samples.qsym = x,
                "routes" => samples.routes = x,
                _ => return err(&p, "unknown suite"),
            }
        }
    }

    let max_cells = opt_uint(obj, "max_cells")?.unwrap_or(DEFAULT_MAX_CELLS);
    let retries = opt_uint(obj, "retries")?.unwrap_or(20);
    let threads = opt_uint(obj, "threads")?;
    if threads == Some(0) {
        return err("/threads", "thread count must be positive");
    }
    let inject_fault = match obj.get("inject_fault") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) if s == "r-coefficient" => Some(Fault::RCoefficient),
        Some(Value::String(s)) if s == "route-value" => Some(Fault::RouteValue),
        Some(_) => {
            return err(
                "/inject_fault",
                "expected \"r-coefficient\" or \"route-value\"",
            )
        }
    };

    Ok(RunConfig {
        rank,
        n,
        q,
        module,
        t,
        seed,
        routes,
        suites,
        samples,
        max_cells,
        retries,
        threads,
        inject_fault,
    })
}

fn module_spec(v: &Value) -> Result<ModuleSpec, ConfigError> {
    let Some(m) = v.as_object() else {
        return err("/module", "expected an object");
    };
    let kind = m.get("kind").and_then(Value::as_str);
    match kind {
        Some("evaluation") => {
            for k in m.keys() {
                if !["kind", "z", "power"].contains(&k.as_str()) {
                    return err(&format!("/module/{k}"), "unknown field");
                }
            }
            let z = match m.get("z") {
                None | Some(Value::Null) => None,
                Some(v) => Some(nonzero(scalar(v, "/module/z")?, "/module/z")?),
            };
            let power = match m.get("power") {
                None => 1,
                Some(v) => uint(v, "/module/power")?,
            };
            if !(1..=3).contains(&power) {
                return err("/module/power", "power must lie in 1..=3");
            }
            Ok(ModuleSpec::Evaluation { z, power })
        }
        Some("tensor") => {
            for k in m.keys() {
                if !["kind", "factors"].contains(&k.as_str()) {
                    return err(&format!("/module/{k}"), "unknown field");
                }
            }
            let Some(Value::Array(fs)) = m.get("factors") else {
                return err("/module/factors", "expected an array of factors");
            };
            if !(2..=3).contains(&fs.len()) {
                return err("/module/factors", "a tensor module needs 2 or 3 factors");
            }
            let mut factors = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let p = format!("/module/factors/{i}");
                let Some(fo) = f.as_object() else {
                    return err(&p, "expected an object");
                };
                if fo
                    .get("kind")
                    .and_then(Value::as_str)
                    .is_some_and(|k| k != "evaluation")
                {
                    return err(&format!("{p}/kind"), "factors must be evaluation modules");
                }
                factors.push(match fo.get("z") {
                    None | Some(Value::Null) => None,
                    Some(v) => Some(nonzero(scalar(v, &format!("{p}/z"))?, &format!("{p}/z"))?),
                });
            }
            Ok(ModuleSpec::Tensor { factors })
        }
        _ => err("/module/kind", "expected \"evaluation\" or \"tensor\""),
    }
}

fn nonzero(x: Scalar, p: &str) -> Result<Scalar, ConfigError> {
    if x.is_zero() {
        return err(p, "must be nonzero");
    }
    Ok(x)
}

fn scalar(v: &Value, p: &str) -> Result<Scalar, ConfigError> {
    match v {
        Value::String(s) => s.parse().or_else(|e| err(p, format!("{e}"))),
        Value::Number(n) if n.is_i64() => Ok(Scalar::int(n.as_i64().unwrap_or_default())),
        _ => err(p, "expected a fraction string \"p/q\""),
    }
}

fn uint(v: &Value, p: &str) -> Result<usize, ConfigError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .map_or_else(|| err(p, "expected a nonnegative integer"), Ok)
}

fn u64_of(v: &Value, p: &str) -> Result<u64, ConfigError> {
    v.as_u64()
        .map_or_else(|| err(p, "expected a nonnegative integer"), Ok)
}

fn opt_uint(obj: &Map<String, Value>, key: &str) -> Result<Option<usize>, ConfigError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => uint(v, &format!("/{key}")).map(Some),
    }
}
