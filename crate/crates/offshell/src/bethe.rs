//! Off-shell Bethe vectors by five routes: the trace of the monodromy
//! product, the two closed formulas in the finite generators (`tv_x`,
//! `tv_y`, evaluation modules only) and the two weight-function formulas in
//! L-operator entries (`w`, `w_hat`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::exact::{
    is_zero_vector, tensor_product, zero_vector, BlockGrid, OpMatrix, Sampler, Scalar, Vector,
};
use crate::qsym::{
    coeff_x, coeff_y, enumerate_admissible_m, enumerate_admissible_s, q_symmetrize_tv,
    qint_factorial, AdmissibleM, AdmissibleS, Composition, VariableAssignment,
};
use crate::rep::{embed_l, AffineModule, ModuleKind};
use crate::rmatrix::{build_r, embed_pair, r_product_order, RPoint};
use crate::{Error, Result};

/// Default bound on the row count `N^M · dim V` of the trace-route operators.
pub const DEFAULT_MAX_CELLS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Trace,
    TvX,
    TvY,
    W,
    WHat,
}

impl Route {
    pub const ALL: [Route; 5] = [Route::Trace, Route::TvX, Route::TvY, Route::W, Route::WHat];

    pub fn label(self) -> &'static str {
        match self {
            Route::Trace => "trace",
            Route::TvX => "tv_x",
            Route::TvY => "tv_y",
            Route::W => "w",
            Route::WHat => "w_hat",
        }
    }

    /// Routes written in the finite generators need an evaluation module.
    pub fn needs_evaluation(self) -> bool {
        matches!(self, Route::TvX | Route::TvY)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown route {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct BetheTask {
    comp: Composition,
    module: AffineModule,
    assignment: VariableAssignment,
    routes: Vec<Route>,
    max_cells: usize,
}

impl BetheTask {
    pub fn new(
        comp: Composition,
        module: AffineModule,
        assignment: VariableAssignment,
        routes: Vec<Route>,
        max_cells: usize,
    ) -> Result<Self> {
        if comp.rank() != module.n() {
            return Err(Error::Parameter(format!(
                "n̄ has rank {} but the module has N={}",
                comp.rank(),
                module.n()
            )));
        }
        if routes.iter().any(|r| r.needs_evaluation())
            && !matches!(module.kind, ModuleKind::Evaluation { .. })
        {
            return Err(Error::Parameter(
                "tv_x and tv_y need a single evaluation module".into(),
            ));
        }
        // Shape check.
        let assignment = VariableAssignment::new(
            &comp,
            (1..comp.rank())
                .map(|a| assignment.group(a).to_vec())
                .collect(),
        )?;
        Ok(BetheTask {
            comp,
            module,
            assignment,
            routes,
            max_cells,
        })
    }

    pub fn composition(&self) -> &Composition {
        &self.comp
    }

    pub fn module(&self) -> &AffineModule {
        &self.module
    }

    pub fn assignment(&self) -> &VariableAssignment {
        &self.assignment
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn q(&self) -> &Scalar {
        self.module.q()
    }

    pub fn with_assignment(&self, assignment: VariableAssignment) -> Result<Self> {
        BetheTask::new(
            self.comp.clone(),
            self.module.clone(),
            assignment,
            self.routes.clone(),
            self.max_cells,
        )
    }

    /// Stable textual summary of the inputs.
    pub fn fingerprint(&self) -> String {
        let t = self
            .assignment
            .to_strings()
            .iter()
            .map(|g| g.join(","))
            .collect::<Vec<_>>()
            .join(";");
        let kind = match &self.module.kind {
            ModuleKind::Evaluation { z } => format!("ev(z={z})"),
            ModuleKind::Tensor => "tensor".to_string(),
        };
        format!(
            "N={} n={} q={} V={kind} dim={} t=[{t}]",
            self.comp.rank(),
            self.comp,
            self.q(),
            self.module.dim()
        )
    }

    fn z(&self) -> Result<&Scalar> {
        match &self.module.kind {
            ModuleKind::Evaluation { z } => Ok(z),
            ModuleKind::Tensor => Err(Error::Parameter("route needs an evaluation point".into())),
        }
    }

    /// `q^{Λ_a}`, 1-based.
    fn q_lambda(&self, a: usize, sign: i64) -> Result<Scalar> {
        self.q().pow(sign * self.module.rep.weights()[a - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetheVector {
    pub route: Route,
    pub coords: Vector,
    pub fingerprint: String,
}

pub fn compute(task: &BetheTask, route: Route) -> Result<BetheVector> {
    let coords = match route {
        Route::Trace => bethe_trace(task)?,
        Route::TvX => bethe_tv_x(task)?,
        Route::TvY => bethe_tv_y(task)?,
        Route::W => weight_fn_w(task)?,
        Route::WHat => weight_fn_w_hat(task)?,
    };
    Ok(BetheVector {
        route,
        coords,
        fingerprint: task.fingerprint(),
    })
}

/// `tr_aux( L⁺⁽¹⁾(u_1)···L⁺⁽ᴹ⁾(u_M) · ℝ^{(M,…,1)} · (⊗ E_{a+1,a} ⊗ 1) )`
/// times the cross-type prefactor, applied to the singular vector.
pub fn bethe_trace(task: &BetheTask) -> Result<Vector> {
    let n = task.comp.rank();
    let d = task.module.dim();
    let q = task.q();
    let us = task.assignment.flat();
    let types: Vec<usize> = (1..n)
        .flat_map(|a| std::iter::repeat_n(a, task.comp.part(a)))
        .collect();
    let legs = us.len();
    let v = task.module.rep.singular().to_vec();
    if legs == 0 {
        return Ok(v);
    }
    let aux = n
        .checked_pow(legs as u32)
        .filter(|aux| aux.checked_mul(d).is_some_and(|c| c <= task.max_cells))
        .ok_or(Error::TooLarge {
            cells: n.saturating_pow(legs as u32).saturating_mul(d),
            cap: task.max_cells,
        })?;

    let mut prefactor = Scalar::one();
    for a in 1..n {
        for b in a + 1..n {
            for tb in task.assignment.group(b) {
                for ta in task.assignment.group(a) {
                    prefactor *= (q * tb - ta.checked_div(q)?).checked_div(&(tb - ta))?;
                }
            }
        }
    }

    // Factors of 𝕋 from left to right.
    let mut factors = Vec::with_capacity(legs + legs * (legs - 1) / 2);
    for (k, u) in us.iter().enumerate() {
        factors.push(embed_l(&task.module.lplus.eval(u)?, k + 1, legs)?);
    }
    let id = OpMatrix::identity(d);
    for (j, i) in r_product_order(legs) {
        let r = build_r(&RPoint::new(
            n,
            us[j - 1].clone(),
            us[i - 1].clone(),
            q.clone(),
        )?);
        factors.push(tensor_product(&embed_pair(&r, n, legs, j, i)?, &id));
    }

    // The aux trace of 𝕋·(E⊗1) applied to v, one aux basis vector at a time:
    // (E⊗1)(e_α⊗v) survives only when every leg k holds the basis index
    // a_k (0-based a_k − 1), and lands on index a_k.
    let mut out = zero_vector(d);
    for alpha in 0..aux {
        let digits = aux_digits(alpha, n, legs);
        if digits.iter().zip(&types).any(|(&x, &a)| x != a - 1) {
            continue;
        }
        let image: Vec<usize> = types.clone();
        let beta = image.iter().fold(0, |acc, &x| acc * n + x);
        let mut x = zero_vector(aux * d);
        x[beta * d..(beta + 1) * d].clone_from_slice(&v);
        for f in factors.iter().rev() {
            x = f.apply(&x)?;
        }
        for (o, y) in out.iter_mut().zip(&x[alpha * d..(alpha + 1) * d]) {
            *o += y;
        }
    }
    Ok(out.into_iter().map(|x| x * &prefactor).collect())
}

fn aux_digits(mut idx: usize, n: usize, legs: usize) -> Vec<usize> {
    let mut d = vec![0; legs];
    for k in (0..legs).rev() {
        d[k] = idx % n;
        idx /= n;
    }
    d
}

/// Powers `(E_{i,j} E_{i,i})^k` for `k ≤ max`, computed once per task.
struct CheckPowers {
    cache: BTreeMap<(usize, usize), Vec<OpMatrix>>,
}

impl CheckPowers {
    fn new(task: &BetheTask, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let rep = &task.module.rep;
        let max = task.comp.total();
        let mut cache = BTreeMap::new();
        for (i, j) in pairs {
            let base = rep.e(i, j).mul(rep.e(i, i))?;
            let mut pows = vec![OpMatrix::identity(rep.dim())];
            for k in 0..max {
                let next = pows[k].mul(&base)?;
                pows.push(next);
            }
            cache.insert((i, j), pows);
        }
        Ok(CheckPowers { cache })
    }

    fn get(&self, i: usize, j: usize, k: usize) -> &OpMatrix {
        &self.cache[&(i, j)][k]
    }
}

/// Applies `F_1 F_2 ··· F_r` to `v` (rightmost factor first).
fn apply_ordered(factors: &[OpMatrix], v: &[Scalar]) -> Result<Vector> {
    let mut x = v.to_vec();
    for f in factors.iter().rev() {
        x = f.apply(&x)?;
    }
    Ok(x)
}

fn sum_terms(d: usize, terms: Vec<Result<Vector>>) -> Result<Vector> {
    let mut out = zero_vector(d);
    for t in terms {
        for (o, x) in out.iter_mut().zip(t?) {
            *o += x;
        }
    }
    Ok(out)
}

/// `(q−q⁻¹)^{|n̄|} Σ_s [Π^{←}_{b≥a} q^{s^b_{a−1}(s^b_{a−1}−s^b_a)}/[s^b_a−s^b_{a−1}]_q!
/// Ě_{b+1,a}^{s^b_a−s^b_{a−1}}] v · Sym^{(q)} G_s(t̄)`.
pub fn bethe_tv_x(task: &BetheTask) -> Result<Vector> {
    let n = task.comp.rank();
    let q = task.q();
    let z = task.z()?;
    let d = task.module.dim();
    let pows = CheckPowers::new(task, (1..n).flat_map(|b| (1..=b).map(move |a| (b + 1, a))))?;
    let pref = (q - q.recip()?).pow(task.comp.total() as i64)?;
    let v = task.module.rep.singular();
    let terms: Vec<Result<Vector>> = enumerate_admissible_s(&task.comp)
        .par_iter()
        .map(|s| -> Result<Vector> {
            let mut factors = Vec::new();
            let mut scale = pref.clone();
            for b in (1..n).rev() {
                for a in (1..=b).rev() {
                    let (lo, hi) = (s.get(b, a - 1), s.get(b, a));
                    let k = hi - lo;
                    scale *= q
                        .pow(lo as i64 * (lo as i64 - hi as i64))?
                        .checked_div(&qint_factorial(k, q)?)?;
                    factors.push(pows.get(b + 1, a, k).clone());
                }
            }
            let vec = apply_ordered(&factors, v)?;
            if is_zero_vector(&vec) {
                return Ok(vec);
            }
            let c = q_symmetrize_tv(
                &|tt: &VariableAssignment| tv_x_coefficient(task, s, tt, z),
                &task.assignment,
                q,
            )?;
            let c = c * scale;
            Ok(vec.into_iter().map(|x| x * &c).collect())
        })
        .collect();
    sum_terms(d, terms)
}

fn tv_x_coefficient(
    task: &BetheTask,
    s: &AdmissibleS,
    tt: &VariableAssignment,
    z: &Scalar,
) -> Result<Scalar> {
    let n = task.comp.rank();
    let q = task.q();
    let qi = q.recip()?;
    let mut r = Scalar::one();
    for b in 2..n {
        for a in 1..b {
            let (lp, lm) = (task.q_lambda(a + 1, 1)?, task.q_lambda(a + 1, -1)?);
            for l in 1..=s.get(b, a) {
                let x = tt.get(a, l + s.s_tilde(b, a));
                let y = tt.get(a + 1, l + s.s_tilde(b, a + 1));
                r *= (&lp * x - &lm * z).checked_div(&(y - x))?;
                for l2 in 1..l + s.s_tilde(b, a + 1) {
                    let y = tt.get(a + 1, l2);
                    r *= (q * y - &qi * x).checked_div(&(y - x))?;
                }
            }
        }
    }
    Ok(r)
}

/// `(q−q⁻¹)^{|n̄|} Σ_m [Π^{→} q^{m^b_{a+1}(m^b_a−m^b_{a+1})}/[m^b_a−m^b_{a+1}]_q!
/// Ě_{a+1,b}^{m^b_a−m^b_{a+1}}] v · Sym^{(q)} G_m(t̄)`; the product runs over
/// `a` ascending, then `b` ascending.
pub fn bethe_tv_y(task: &BetheTask) -> Result<Vector> {
    let n = task.comp.rank();
    let q = task.q();
    let z = task.z()?;
    let d = task.module.dim();
    let pows = CheckPowers::new(task, (1..n).flat_map(|a| (1..=a).map(move |b| (a + 1, b))))?;
    let pref = (q - q.recip()?).pow(task.comp.total() as i64)?;
    let v = task.module.rep.singular();
    let terms: Vec<Result<Vector>> = enumerate_admissible_m(&task.comp)
        .par_iter()
        .map(|m| -> Result<Vector> {
            let mut factors = Vec::new();
            let mut scale = pref.clone();
            for a in 1..n {
                for b in 1..=a {
                    let next = m.get(b, a + 1);
                    let k = m.get(b, a) - next;
                    scale *= q
                        .pow((next * k) as i64)?
                        .checked_div(&qint_factorial(k, q)?)?;
                    factors.push(pows.get(a + 1, b, k).clone());
                }
            }
            let vec = apply_ordered(&factors, v)?;
            if is_zero_vector(&vec) {
                return Ok(vec);
            }
            let c = q_symmetrize_tv(
                &|tt: &VariableAssignment| tv_y_coefficient(task, m, tt, z),
                &task.assignment,
                q,
            )?;
            let c = c * scale;
            Ok(vec.into_iter().map(|x| x * &c).collect())
        })
        .collect();
    sum_terms(d, terms)
}

fn tv_y_coefficient(
    task: &BetheTask,
    m: &AdmissibleM,
    tt: &VariableAssignment,
    z: &Scalar,
) -> Result<Scalar> {
    let n = task.comp.rank();
    let q = task.q();
    let qi = q.recip()?;
    let mut r = Scalar::one();
    for a in 2..n {
        let (lp, lm) = (task.q_lambda(a, 1)?, task.q_lambda(a, -1)?);
        for b in 1..a {
            for l in 0..m.get(b, a) {
                let x = tt.get(a, m.m_bold(b, a) - l);
                let y = tt.get(a - 1, m.m_bold(b, a - 1) - l);
                r *= (&lp * x - &lm * z).checked_div(&(x - y))?;
                for l2 in m.m_bold(b, a - 1) - l + 1..=task.comp.part(a - 1) {
                    let y = tt.get(a - 1, l2);
                    r *= (q * x - &qi * y).checked_div(&(x - y))?;
                }
            }
        }
    }
    Ok(r)
}

/// `L⁺(t^a_ℓ)` for every variable of a permuted assignment.
fn l_plus_grids(
    task: &BetheTask,
    tt: &VariableAssignment,
) -> Result<BTreeMap<(usize, usize), BlockGrid>> {
    let mut out = BTreeMap::new();
    for a in 1..task.comp.rank() {
        for l in 1..=task.comp.part(a) {
            out.insert((a, l), task.module.lplus.eval(tt.get(a, l))?);
        }
    }
    Ok(out)
}

/// `Sym^{(q)} Σ_m (q⁻¹−q)^{Σ(n_a−m^a_a)}/Π[m^a_b−m^a_{b+1}]_q! · 𝒴_m(t̄) ·
/// Π^{→}_a (Π^{←}_{b≥a} Π_ℓ L⁺_{a,b+1}(t^a_ℓ)) Π_ℓ L⁺_{a,a}(t^a_ℓ) v`.
pub fn weight_fn_w(task: &BetheTask) -> Result<Vector> {
    let n = task.comp.rank();
    let q = task.q();
    let ms = enumerate_admissible_m(&task.comp);
    let v = task.module.rep.singular();
    let d = task.module.dim();
    let g = |tt: &VariableAssignment| -> Result<Vector> {
        let grids = l_plus_grids(task, tt)?;
        let terms: Vec<Result<Vector>> = ms
            .iter()
            .map(|m| -> Result<Vector> {
                let mut coef = (q.recip()? - q).pow(
                    (1..n)
                        .map(|a| task.comp.part(a) - m.get(a, a))
                        .sum::<usize>() as i64,
                )?;
                for a in 1..n {
                    for b in a..n {
                        coef =
                            coef.checked_div(&qint_factorial(m.get(a, b) - m.get(a, b + 1), q)?)?;
                    }
                }
                coef *= coeff_y(m, tt, q)?;
                let mut factors = Vec::new();
                for a in 1..n {
                    let na = task.comp.part(a);
                    for b in (a..n).rev() {
                        for l in na - m.get(a, b) + 1..=na - m.get(a, b + 1) {
                            factors.push(grids[&(a, l)].block(a - 1, b).clone());
                        }
                    }
                    for l in 1..=na - m.get(a, a) {
                        factors.push(grids[&(a, l)].block(a - 1, a - 1).clone());
                    }
                }
                Ok(apply_ordered(&factors, v)?
                    .into_iter()
                    .map(|x| x * &coef)
                    .collect())
            })
            .collect();
        sum_terms(d, terms)
    };
    q_symmetrize_tv(&g, &task.assignment, q)
}

/// `Sym^{(q)} Σ_s (q−q⁻¹)^{Σ(n_b−s^b_b)}/Π[s^b_a−s^b_{a−1}]_q! · 𝒳_s(t̄) ·
/// Π^{←}_b (Π^{→}_{a≤b} Π_ℓ L⁺_{a,b+1}(t^b_ℓ)) Π_ℓ L⁺_{b+1,b+1}(t^b_ℓ) v`.
pub fn weight_fn_w_hat(task: &BetheTask) -> Result<Vector> {
    let n = task.comp.rank();
    let q = task.q();
    let ss = enumerate_admissible_s(&task.comp);
    let v = task.module.rep.singular();
    let d = task.module.dim();
    let g = |tt: &VariableAssignment| -> Result<Vector> {
        let grids = l_plus_grids(task, tt)?;
        let terms: Vec<Result<Vector>> = ss
            .iter()
            .map(|s| -> Result<Vector> {
                let mut coef = (q - q.recip()?).pow(
                    (1..n)
                        .map(|b| task.comp.part(b) - s.get(b, b))
                        .sum::<usize>() as i64,
                )?;
                for b in 1..n {
                    for a in 1..=b {
                        coef =
                            coef.checked_div(&qint_factorial(s.get(b, a) - s.get(b, a - 1), q)?)?;
                    }
                }
                coef *= coeff_x(s, tt, q)?;
                let mut factors = Vec::new();
                for b in (1..n).rev() {
                    for a in 1..=b {
                        for l in s.get(b, a - 1) + 1..=s.get(b, a) {
                            factors.push(grids[&(b, l)].block(a - 1, b).clone());
                        }
                    }
                    for l in s.get(b, b) + 1..=task.comp.part(b) {
                        factors.push(grids[&(b, l)].block(b, b).clone());
                    }
                }
                Ok(apply_ordered(&factors, v)?
                    .into_iter()
                    .map(|x| x * &coef)
                    .collect())
            })
            .collect();
        sum_terms(d, terms)
    };
    q_symmetrize_tv(&g, &task.assignment, q)
}

/// `E_{a,a} B = q^{Λ_a + n_{a−1} − n_a} B` for every `a`, or `B = 0`.
pub fn weight_check(vec: &BetheVector, task: &BetheTask) -> bool {
    weight_check_coords(&vec.coords, task).unwrap_or(false)
}

fn weight_check_coords(coords: &[Scalar], task: &BetheTask) -> Result<bool> {
    if is_zero_vector(coords) {
        return Ok(true);
    }
    let rep = &task.module.rep;
    for a in 1..=task.comp.rank() {
        let exp = rep.weights()[a - 1] + task.comp.part(a - 1) as i64 - task.comp.part(a) as i64;
        let ev = task.q().pow(exp)?;
        let lhs = rep.cartan(a).apply(coords)?;
        if lhs.iter().zip(coords).any(|(l, c)| *l != &ev * c) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of computing every selected route on one task.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub fingerprint: String,
    pub vectors: Vec<BetheVector>,
    /// First disagreement with the first route: `(route, other, coordinate)`.
    pub mismatch: Option<(Route, Route, usize)>,
    pub weights_ok: bool,
}

impl CrossValidation {
    pub fn pass(&self) -> bool {
        self.mismatch.is_none() && self.weights_ok
    }
}

/// Computes the selected routes in parallel and compares them exactly.
pub fn cross_validate(task: &BetheTask) -> Result<CrossValidation> {
    if task.routes.is_empty() {
        return Err(Error::Parameter("no routes selected".into()));
    }
    let vectors = task
        .routes
        .par_iter()
        .map(|&r| compute(task, r))
        .collect::<Vec<Result<BetheVector>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mismatch = first_disagreement(&vectors);
    let weights_ok = vectors.iter().all(|v| weight_check(v, task));
    Ok(CrossValidation {
        fingerprint: task.fingerprint(),
        vectors,
        mismatch,
        weights_ok,
    })
}

/// First coordinate where a route differs from the first one.
pub fn first_disagreement(vectors: &[BetheVector]) -> Option<(Route, Route, usize)> {
    let first = vectors.first()?;
    vectors[1..].iter().find_map(|other| {
        first
            .coords
            .iter()
            .zip(&other.coords)
            .position(|(a, b)| a != b)
            .map(|i| (first.route, other.route, i))
    })
}

/// Draws Bethe variables avoiding the evaluation point and the `q²` lines.
pub fn sample_assignment(
    comp: &Composition,
    module: &AffineModule,
    sampler: &mut Sampler,
) -> VariableAssignment {
    let avoid = match &module.kind {
        ModuleKind::Evaluation { z } => vec![z.clone()],
        ModuleKind::Tensor => vec![],
    };
    VariableAssignment::sample(comp, sampler, module.q(), &avoid)
}

/// Runs `f` on freshly sampled assignments until it stops hitting poles.
/// `Ok(None)` means every attempt landed on a pole.
pub fn with_resampling<T>(
    task: &BetheTask,
    sampler: &mut Sampler,
    retries: usize,
    f: impl Fn(&BetheTask) -> Result<T>,
) -> Result<Option<(BetheTask, T)>> {
    for _ in 0..=retries {
        let t = task.with_assignment(sample_assignment(&task.comp, &task.module, sampler))?;
        match f(&t) {
            Ok(x) => return Ok(Some((t, x))),
            Err(e) if e.needs_resample() => log::debug!("resampling after {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::vector_rep;

    fn task(n: usize, parts: &[usize], vars: Vec<Vec<Scalar>>, routes: Vec<Route>) -> BetheTask {
        let q = Scalar::frac(3, 2).unwrap();
        let z = Scalar::frac(5, 7).unwrap();
        let comp = Composition::new(n, parts.to_vec()).unwrap();
        let module = AffineModule::evaluation(vector_rep(n, &q).unwrap(), &z).unwrap();
        let t = VariableAssignment::new(&comp, vars).unwrap();
        BetheTask::new(comp, module, t, routes, DEFAULT_MAX_CELLS).unwrap()
    }

    #[test]
    fn single_variable_is_lowered_singular_vector() {
        let tk = task(2, &[1], vec![vec![Scalar::int(4)]], Route::ALL.to_vec());
        let cv = cross_validate(&tk).unwrap();
        assert!(cv.pass());
        // (q − q⁻¹) e_2 with q = 3/2.
        let expect = vec![Scalar::zero(), Scalar::frac(5, 6).unwrap()];
        for v in &cv.vectors {
            assert_eq!(v.coords, expect, "{}", v.route);
        }
    }

    #[test]
    fn empty_composition_returns_singular_vector() {
        let tk = task(3, &[0, 0], vec![vec![], vec![]], Route::ALL.to_vec());
        let cv = cross_validate(&tk).unwrap();
        for v in &cv.vectors {
            assert_eq!(
                v.coords,
                vec![Scalar::one(), Scalar::zero(), Scalar::zero()]
            );
        }
    }

    #[test]
    fn tv_routes_refuse_tensor_modules() {
        let q = Scalar::int(2);
        let ev = AffineModule::evaluation(vector_rep(2, &q).unwrap(), &Scalar::int(3)).unwrap();
        let m = AffineModule::tensor(&ev, &ev).unwrap();
        let comp = Composition::new(2, vec![1]).unwrap();
        let t = VariableAssignment::new(&comp, vec![vec![Scalar::int(5)]]).unwrap();
        assert!(BetheTask::new(comp, m, t, vec![Route::TvX], DEFAULT_MAX_CELLS).is_err());
    }

    #[test]
    fn trace_respects_cap() {
        let comp = Composition::new(2, vec![2]).unwrap();
        let q = Scalar::int(2);
        let module = AffineModule::evaluation(vector_rep(2, &q).unwrap(), &Scalar::int(3)).unwrap();
        let t = VariableAssignment::new(&comp, vec![vec![Scalar::int(5), Scalar::int(7)]]).unwrap();
        let tk = BetheTask::new(comp, module, t, vec![Route::Trace], 7).unwrap();
        assert!(matches!(
            bethe_trace(&tk),
            Err(Error::TooLarge { cells: 8, cap: 7 })
        ));
    }
}
