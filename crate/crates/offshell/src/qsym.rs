//! Typed Bethe variables, symmetrizations over `S_{n_1} × … × S_{n_{N−1}}`,
//! admissible matrices and the rational coefficients of the closed formulas.
//!
//! Two symmetrizations appear:
//! * `Sym̄` (the π-action sum): `Σ_σ Π_{ℓ<ℓ', σ(ℓ)>σ(ℓ')}
//!   (q t_{σ(ℓ')} − q⁻¹ t_{σ(ℓ)})/(q⁻¹ t_{σ(ℓ')} − q t_{σ(ℓ)}) · G(^σ t)`;
//! * `Sym^{(q)}`: the plain sum `Σ_σ (ϖ·G)(^σ t)` with
//!   `ϖ = Π_a Π_{ℓ<ℓ'} (q⁻¹ t^a_ℓ − q t^a_{ℓ'})/(t^a_ℓ − t^a_{ℓ'})`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::check::Check;
use crate::exact::{OpMatrix, Sampler, Scalar, Vector};
use crate::{Error, Result};

/// Numbers `n_1, …, n_{N−1}` of Bethe variables of each type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    rank: usize,
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(rank: usize, parts: Vec<usize>) -> Result<Self> {
        if rank < 2 {
            return Err(Error::Parameter("rank must be at least 2".into()));
        }
        if parts.len() != rank - 1 {
            return Err(Error::Parameter(format!(
                "expected {} parts for N={rank}, got {}",
                rank - 1,
                parts.len()
            )));
        }
        Ok(Composition { rank, parts })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `n_a` for `a = 1..N−1`; zero outside that range.
    pub fn part(&self, a: usize) -> usize {
        if a == 0 || a >= self.rank {
            0
        } else {
            self.parts[a - 1]
        }
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Every composition of rank `n` with `lo ≤ |n̄| ≤ hi`.
    pub fn all_up_to(rank: usize, lo: usize, hi: usize) -> Vec<Composition> {
        let mut out = Vec::new();
        for total in lo..=hi {
            for parts in compositions(total, rank - 1) {
                out.push(Composition { rank, parts });
            }
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

/// All `k`-tuples of nonnegative integers summing to `total`, in
/// lexicographic order.
pub fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for x in 0..=total {
        for mut rest in compositions(total - x, k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Values of the Bethe variables `t^a_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableAssignment {
    vars: Vec<Vec<Scalar>>,
}

impl VariableAssignment {
    pub fn new(comp: &Composition, vars: Vec<Vec<Scalar>>) -> Result<Self> {
        if vars.len() != comp.parts.len()
            || vars.iter().zip(&comp.parts).any(|(v, &n)| v.len() != n)
        {
            return Err(Error::Parameter(format!(
                "assignment shape does not match n̄ = {comp}"
            )));
        }
        Ok(VariableAssignment { vars })
    }

    /// Draws pairwise distinct values, rejecting any value colliding with
    /// `avoid` (e.g. evaluation points) or sitting on a `q t = q⁻¹ t'` line.
    pub fn sample(comp: &Composition, sampler: &mut Sampler, q: &Scalar, avoid: &[Scalar]) -> Self {
        let q2 = q * q;
        let mut all: Vec<Scalar> = avoid.to_vec();
        let mut vars = Vec::with_capacity(comp.parts.len());
        for &n in &comp.parts {
            let mut group = Vec::with_capacity(n);
            while group.len() < n {
                let x = sampler.scalar();
                let clash = all
                    .iter()
                    .any(|y| *y == x || &q2 * y == x || &q2 * &x == *y);
                if !clash {
                    all.push(x.clone());
                    group.push(x);
                }
            }
            vars.push(group);
        }
        VariableAssignment { vars }
    }

    /// `t^a_ℓ`, 1-based.
    pub fn get(&self, a: usize, l: usize) -> &Scalar {
        &self.vars[a - 1][l - 1]
    }

    pub fn group(&self, a: usize) -> &[Scalar] {
        &self.vars[a - 1]
    }

    pub fn types(&self) -> usize {
        self.vars.len()
    }

    /// Spectral parameters in monodromy order: all type-1 variables, then
    /// type 2, and so on.
    pub fn flat(&self) -> Vec<Scalar> {
        self.vars.iter().flatten().cloned().collect()
    }

    /// `^σ t`: position `ℓ` of type `a` receives `t^a_{σ^a(ℓ)}` (0-based
    /// images).
    pub fn permuted(&self, sigma: &[Vec<usize>]) -> Self {
        VariableAssignment {
            vars: self
                .vars
                .iter()
                .zip(sigma)
                .map(|(v, s)| s.iter().map(|&i| v[i].clone()).collect())
                .collect(),
        }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.vars
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

/// Anything the symmetrizers can sum: scalars, vectors, operators.
pub trait Carrier: Clone + Send + Sync {
    fn scaled(&self, c: &Scalar) -> Self;
    fn accumulate(&mut self, other: &Self) -> Result<()>;
}

impl Carrier for Scalar {
    fn scaled(&self, c: &Scalar) -> Self {
        self * c
    }
    fn accumulate(&mut self, other: &Self) -> Result<()> {
        *self += other;
        Ok(())
    }
}

impl Carrier for Vector {
    fn scaled(&self, c: &Scalar) -> Self {
        self.iter().map(|x| x * c).collect()
    }
    fn accumulate(&mut self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension("vector length mismatch".into()));
        }
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
        Ok(())
    }
}

impl Carrier for OpMatrix {
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn accumulate(&mut self, other: &Self) -> Result<()> {
        self.add_scaled(&Scalar::one(), other)
    }
}

/// Elements of `S_{n_1} × … × S_{n_{N−1}}` in a fixed lexicographic order;
/// each factor is a list of 0-based images.
pub fn group_elements(parts: &[usize]) -> Vec<Vec<Vec<usize>>> {
    parts
        .iter()
        .map(|&n| (0..n).permutations(n).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect::<Vec<_>>()
        .into_iter()
        // multi_cartesian_product yields nothing for an empty list of factors.
        .chain(parts.is_empty().then(Vec::new))
        .collect()
}

/// Factor of `π(σ)`: product over inversions `ℓ<ℓ'`, `σ(ℓ)>σ(ℓ')` of
/// `(q t_{σ(ℓ')} − q⁻¹ t_{σ(ℓ)})/(q⁻¹ t_{σ(ℓ')} − q t_{σ(ℓ)})`, per type.
pub fn inversion_factor(
    sigma: &[Vec<usize>],
    t: &VariableAssignment,
    q: &Scalar,
) -> Result<Scalar> {
    let qi = q.recip()?;
    let mut out = Scalar::one();
    for (a, s) in sigma.iter().enumerate() {
        let v = &t.vars[a];
        for l in 0..s.len() {
            for l2 in l + 1..s.len() {
                if s[l] > s[l2] {
                    let (x, y) = (&v[s[l2]], &v[s[l]]);
                    out *= (q * x - &qi * y).checked_div(&(&qi * x - q * y))?;
                }
            }
        }
    }
    Ok(out)
}

/// `ϖ(t) = Π_a Π_{ℓ<ℓ'} (q⁻¹ t^a_ℓ − q t^a_{ℓ'})/(t^a_ℓ − t^a_{ℓ'})`.
pub fn varpi(t: &VariableAssignment, q: &Scalar) -> Result<Scalar> {
    let qi = q.recip()?;
    let mut out = Scalar::one();
    for v in &t.vars {
        for l in 0..v.len() {
            for l2 in l + 1..v.len() {
                out *= (&qi * &v[l] - q * &v[l2]).checked_div(&(&v[l] - &v[l2]))?;
            }
        }
    }
    Ok(out)
}

type GroupWeight<'a> = &'a (dyn Fn(&[Vec<usize>], &VariableAssignment) -> Result<Scalar> + Sync);

/// Sums `weight(σ) · f(^σ t)` over the group, in parallel, merging in the
/// fixed group order.
fn group_sum<T: Carrier>(
    t: &VariableAssignment,
    weight: GroupWeight<'_>,
    f: &(dyn Fn(&VariableAssignment) -> Result<T> + Sync),
) -> Result<T> {
    let parts: Vec<usize> = t.vars.iter().map(Vec::len).collect();
    let terms: Vec<Result<T>> = group_elements(&parts)
        .par_iter()
        .map(|sigma| {
            let st = t.permuted(sigma);
            let w = weight(sigma, &st)?;
            Ok(f(&st)?.scaled(&w))
        })
        .collect();
    let mut iter = terms.into_iter();
    let mut acc = iter.next().expect("group is never empty")?;
    for term in iter {
        acc.accumulate(&term?)?;
    }
    Ok(acc)
}

/// `Sym̄ f = Σ_σ π(σ) f`.
pub fn q_symmetrize<T: Carrier>(
    f: &(dyn Fn(&VariableAssignment) -> Result<T> + Sync),
    t: &VariableAssignment,
    q: &Scalar,
) -> Result<T> {
    group_sum(t, &|sigma, _| inversion_factor(sigma, t, q), f)
}

/// Plain `Sym f = Σ_σ f(^σ t)`.
pub fn symmetrize<T: Carrier>(
    f: &(dyn Fn(&VariableAssignment) -> Result<T> + Sync),
    t: &VariableAssignment,
) -> Result<T> {
    group_sum(t, &|_, _| Ok(Scalar::one()), f)
}

/// `Sym^{(q)} f = Sym(ϖ · f)`.
pub fn q_symmetrize_tv<T: Carrier>(
    f: &(dyn Fn(&VariableAssignment) -> Result<T> + Sync),
    t: &VariableAssignment,
    q: &Scalar,
) -> Result<T> {
    group_sum(t, &|_, st| varpi(st, q), f)
}

/// `[n]_q = (q^n − q^{-n})/(q − q⁻¹)`.
pub fn qint(n: usize, q: &Scalar) -> Result<Scalar> {
    // [n]_q = Σ_{k=0}^{n−1} q^{n−1−2k}, which also covers q = ±1.
    let mut out = Scalar::zero();
    for k in 0..n as i64 {
        out += q.pow(n as i64 - 1 - 2 * k)?;
    }
    Ok(out)
}

/// `[n]_q! = [n]_q [n−1]_q ··· [1]_q`, with `[0]_q! = 1`.
pub fn qint_factorial(n: usize, q: &Scalar) -> Result<Scalar> {
    let mut out = Scalar::one();
    for k in 1..=n {
        out *= qint(k, q)?;
    }
    Ok(out)
}

pub fn factorial(n: usize) -> Scalar {
    (1..=n as i64).map(Scalar::int).product()
}

/// Admissible collection `s^b_a`, `1 ≤ a ≤ b ≤ N−1`:
/// `0 = s^b_0 ≤ s^b_1 ≤ … ≤ s^b_b` and `n_a = Σ_{b≥a} s^b_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleS {
    rank: usize,
    s: BTreeMap<(usize, usize), usize>,
}

/// Admissible collection `m^b_a`, `1 ≤ b ≤ a ≤ N−1`:
/// `m^b_b ≥ m^b_{b+1} ≥ … ≥ m^b_{N−1} ≥ m^b_N = 0` and `n_a = Σ_{b≤a} m^b_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleM {
    rank: usize,
    m: BTreeMap<(usize, usize), usize>,
}

impl AdmissibleS {
    /// `s^b_a`, with the boundary `s^b_0 = 0`.
    pub fn get(&self, b: usize, a: usize) -> usize {
        if a == 0 {
            0
        } else {
            self.s[&(b, a)]
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `s̃^b_a = s^a_a + s^{a+1}_a + … + s^{b−1}_a` (empty for `b ≤ a`).
    pub fn s_tilde(&self, b: usize, a: usize) -> usize {
        (a..b).map(|c| self.get(c, a)).sum()
    }

    /// `𝐬^j_a = s^j_a + … + s^{N−1}_a`, with `𝐬^N = 0`.
    pub fn s_bold(&self, j: usize, a: usize) -> usize {
        (j.max(a)..self.rank).map(|c| self.get(c, a)).sum()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.s
    }
}

impl AdmissibleM {
    /// `m^b_a`, with the boundary `m^b_N = 0`.
    pub fn get(&self, b: usize, a: usize) -> usize {
        if a == self.rank {
            0
        } else {
            self.m[&(b, a)]
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `𝐦^b_a = m^1_a + … + m^b_a`, with `𝐦^0 = 0`.
    pub fn m_bold(&self, b: usize, a: usize) -> usize {
        (1..=b.min(a)).map(|c| self.get(c, a)).sum()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.m
    }
}

/// Complete, duplicate-free list of admissible `s` collections for `n̄`.
pub fn enumerate_admissible_s(comp: &Composition) -> Vec<AdmissibleS> {
    let n = comp.rank;
    // Column a distributes n_a over rows b = a..N−1.
    let columns: Vec<Vec<Vec<usize>>> = (1..n).map(|a| compositions(comp.part(a), n - a)).collect();
    cartesian(&columns)
        .into_iter()
        .filter_map(|choice| {
            let mut s = BTreeMap::new();
            for (ai, col) in choice.iter().enumerate() {
                let a = ai + 1;
                for (k, &v) in col.iter().enumerate() {
                    s.insert((a + k, a), v);
                }
            }
            let ok = (1..n).all(|b| (1..b).all(|a| s[&(b, a)] <= s[&(b, a + 1)]));
            ok.then_some(AdmissibleS { rank: n, s })
        })
        .collect()
}

/// Complete, duplicate-free list of admissible `m` collections for `n̄`.
pub fn enumerate_admissible_m(comp: &Composition) -> Vec<AdmissibleM> {
    let n = comp.rank;
    // Column a distributes n_a over rows b = 1..a.
    let columns: Vec<Vec<Vec<usize>>> = (1..n).map(|a| compositions(comp.part(a), a)).collect();
    cartesian(&columns)
        .into_iter()
        .filter_map(|choice| {
            let mut m = BTreeMap::new();
            for (ai, col) in choice.iter().enumerate() {
                for (bi, &v) in col.iter().enumerate() {
                    m.insert((bi + 1, ai + 1), v);
                }
            }
            let ok = (1..n).all(|b| (b..n - 1).all(|a| m[&(b, a)] >= m[&(b, a + 1)]));
            ok.then_some(AdmissibleM { rank: n, m })
        })
        .collect()
}

fn cartesian<T: Clone>(columns: &[Vec<T>]) -> Vec<Vec<T>> {
    if columns.is_empty() {
        return vec![vec![]];
    }
    columns
        .iter()
        .map(|c| c.iter().cloned())
        .multi_cartesian_product()
        .collect()
}

/// Reference enumeration by exhaustive search over all entries bounded by
/// `n_a`; exponential, for cross-checking only.
pub fn brute_force_admissible_s(comp: &Composition) -> Vec<AdmissibleS> {
    let n = comp.rank;
    let keys: Vec<(usize, usize)> = (1..n).flat_map(|b| (1..=b).map(move |a| (b, a))).collect();
    bounded_grid(&keys, comp)
        .into_iter()
        .filter(|s| {
            (1..n).all(|a| (a..n).map(|b| s[&(b, a)]).sum::<usize>() == comp.part(a))
                && (1..n).all(|b| (2..=b).all(|a| s[&(b, a - 1)] <= s[&(b, a)]))
        })
        .map(|s| AdmissibleS { rank: n, s })
        .collect()
}

pub fn brute_force_admissible_m(comp: &Composition) -> Vec<AdmissibleM> {
    let n = comp.rank;
    let keys: Vec<(usize, usize)> = (1..n).flat_map(|b| (b..n).map(move |a| (b, a))).collect();
    bounded_grid(&keys, comp)
        .into_iter()
        .filter(|m| {
            (1..n).all(|a| (1..=a).map(|b| m[&(b, a)]).sum::<usize>() == comp.part(a))
                && (1..n).all(|b| (b + 1..n).all(|a| m[&(b, a - 1)] >= m[&(b, a)]))
        })
        .map(|m| AdmissibleM { rank: n, m })
        .collect()
}

fn bounded_grid(
    keys: &[(usize, usize)],
    comp: &Composition,
) -> Vec<BTreeMap<(usize, usize), usize>> {
    keys.iter()
        .map(|&(_, a)| 0..=comp.part(a))
        .multi_cartesian_product()
        .chain(keys.is_empty().then(Vec::new))
        .map(|vals| keys.iter().copied().zip(vals).collect())
        .collect()
}

/// `𝒴_m(t) = Π_{a=2}^{N−1} Π_{b=1}^{a−1} Π_{ℓ=0}^{m^b_a−1} (x/y)/(1 − x/y) ·
/// Π_{ℓ'=𝐦^b_{a−1}−ℓ+1}^{n_{a−1}} (q⁻¹ − q x/t^{a−1}_{ℓ'})/(1 − x/t^{a−1}_{ℓ'})`
/// with `x = t^a_{𝐦^b_a−ℓ}`, `y = t^{a−1}_{𝐦^b_{a−1}−ℓ}`.
pub fn coeff_y(m: &AdmissibleM, t: &VariableAssignment, q: &Scalar) -> Result<Scalar> {
    let n = m.rank;
    let qi = q.recip()?;
    let mut out = Scalar::one();
    for a in 2..n {
        let n_prev = t.group(a - 1).len();
        for b in 1..a {
            for l in 0..m.get(b, a) {
                let x = t.get(a, m.m_bold(b, a) - l);
                let y = t.get(a - 1, m.m_bold(b, a - 1) - l);
                out *= geometric(x, y)?;
                for l2 in m.m_bold(b, a - 1) - l + 1..=n_prev {
                    let r = x.checked_div(t.get(a - 1, l2))?;
                    out *= (&qi - q * &r).checked_div(&(Scalar::one() - r))?;
                }
            }
        }
    }
    Ok(out)
}

/// `𝒳_s(t) = Π_{b=2}^{N−1} Π_{a=1}^{b−1} Π_{ℓ=1}^{s^b_a} (x/y)/(1 − x/y) ·
/// Π_{ℓ'=1}^{ℓ+s̃^b_{a+1}−1} (q − q⁻¹ x/t^{a+1}_{ℓ'})/(1 − x/t^{a+1}_{ℓ'})`
/// with `x = t^a_{ℓ+s̃^b_a}`, `y = t^{a+1}_{ℓ+s̃^b_{a+1}}`.
pub fn coeff_x(s: &AdmissibleS, t: &VariableAssignment, q: &Scalar) -> Result<Scalar> {
    let n = s.rank;
    let qi = q.recip()?;
    let mut out = Scalar::one();
    for b in 2..n {
        for a in 1..b {
            for l in 1..=s.get(b, a) {
                let x = t.get(a, l + s.s_tilde(b, a));
                let y = t.get(a + 1, l + s.s_tilde(b, a + 1));
                out *= geometric(x, y)?;
                for l2 in 1..l + s.s_tilde(b, a + 1) {
                    let r = x.checked_div(t.get(a + 1, l2))?;
                    out *= (q - &qi * &r).checked_div(&(Scalar::one() - r))?;
                }
            }
        }
    }
    Ok(out)
}

/// `(x/y)/(1 − x/y)`.
fn geometric(x: &Scalar, y: &Scalar) -> Result<Scalar> {
    let r = x.checked_div(y)?;
    r.checked_div(&(Scalar::one() - &r))
}

/// `π(σ) g (u) = c(σ,u) · g(u_{σ(1)}, …, u_{σ(n)})` for one list of
/// variables (0-based images).
pub fn pi_action(
    sigma: &[usize],
    u: &[Scalar],
    q: &Scalar,
    g: &(dyn Fn(&[Scalar]) -> Result<Scalar> + Sync),
) -> Result<Scalar> {
    let t = VariableAssignment {
        vars: vec![u.to_vec()],
    };
    let c = inversion_factor(&[sigma.to_vec()], &t, q)?;
    let moved: Vec<Scalar> = sigma.iter().map(|&i| u[i].clone()).collect();
    Ok(c * g(&moved)?)
}

/// `Sym̄` over the variables sitting at `positions`, all others fixed.
pub fn q_symmetrize_positions(
    g: &(dyn Fn(&[Scalar]) -> Result<Scalar> + Sync),
    positions: &[usize],
    u: &[Scalar],
    q: &Scalar,
) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for p in (0..positions.len()).permutations(positions.len()) {
        let mut sigma: Vec<usize> = (0..u.len()).collect();
        for (k, &pk) in p.iter().enumerate() {
            sigma[positions[k]] = positions[pk];
        }
        acc += pi_action(&sigma, u, q, g)?;
    }
    Ok(acc)
}

/// Rational test function, deliberately non-symmetric:
/// `Σ_{a,ℓ} c_{aℓ} (t^a_ℓ)^ℓ + Π_{a,ℓ} 1/(t^a_ℓ + d_{aℓ})`.
#[derive(Clone, Debug)]
pub struct ProbeFunction {
    c: Vec<Vec<Scalar>>,
    d: Vec<Vec<Scalar>>,
}

impl ProbeFunction {
    pub fn sample(parts: &[usize], sampler: &mut Sampler) -> Self {
        let mut draw = || {
            parts
                .iter()
                .map(|&n| (0..n).map(|_| sampler.scalar()).collect())
                .collect()
        };
        let c = draw();
        let d = draw();
        ProbeFunction { c, d }
    }

    pub fn eval(&self, t: &VariableAssignment) -> Result<Scalar> {
        let mut sum = Scalar::zero();
        let mut prod = Scalar::one();
        for (a, v) in t.vars.iter().enumerate() {
            for (l, x) in v.iter().enumerate() {
                sum += &self.c[a][l] * x.pow(l as i64 + 1)?;
                prod *= (x + &self.d[a][l]).recip()?;
            }
        }
        Ok(sum + prod)
    }

    /// The same function on a single list of variables.
    pub fn eval_list(&self, u: &[Scalar]) -> Result<Scalar> {
        self.eval(&VariableAssignment {
            vars: vec![u.to_vec()],
        })
    }
}

/// Symmetric test function `Π_ℓ (c + u_ℓ) + e Σ u_ℓ² / (f + Σ u_ℓ)`.
#[derive(Clone, Debug)]
pub struct SymmetricProbe {
    c: Scalar,
    e: Scalar,
    f: Scalar,
}

impl SymmetricProbe {
    pub fn sample(sampler: &mut Sampler) -> Self {
        SymmetricProbe {
            c: sampler.scalar(),
            e: sampler.scalar(),
            f: sampler.scalar(),
        }
    }

    pub fn eval(&self, u: &[Scalar]) -> Result<Scalar> {
        let prod: Scalar = u.iter().map(|x| &self.c + x).product();
        let sq: Scalar = u.iter().map(|x| x * x).sum();
        let lin: Scalar = u.iter().cloned().sum();
        Ok(prod + (&self.e * sq).checked_div(&(&self.f + lin))?)
    }
}

fn scalar_check(name: &str, lhs: Scalar, rhs: Scalar) -> Check {
    if lhs == rhs {
        let c = Check::pass(name);
        if lhs.is_zero() {
            c.with_note("trivial: both sides vanish")
        } else {
            c
        }
    } else {
        Check::fail(name, format!("lhs {lhs} != rhs {rhs}"))
    }
}

/// `Sym̄ Sym̄ G = (Π n_a!) Sym̄ G`.
pub fn check_sym_idempotent(
    g: &ProbeFunction,
    t: &VariableAssignment,
    q: &Scalar,
) -> Result<Check> {
    let once = q_symmetrize(&|tt: &VariableAssignment| g.eval(tt), t, q)?;
    let twice = q_symmetrize(
        &|tt: &VariableAssignment| q_symmetrize(&|s: &VariableAssignment| g.eval(s), tt, q),
        t,
        q,
    )?;
    let order: Scalar = t.vars.iter().map(|v| factorial(v.len())).product();
    Ok(scalar_check("sym-idempotent", twice, order * once))
}

/// `Sym̄_{(u_1..u_n)} = Σ_{σ ∈ S^{(s)}_n} π(σ) Sym̄_{(u_1..u_s)} Sym̄_{(u_{s+1}..u_n)}`,
/// the sum running over shuffles `σ(1)<…<σ(s)`, `σ(s+1)<…<σ(n)`.
pub fn check_sym_split(g: &ProbeFunction, u: &[Scalar], s: usize, q: &Scalar) -> Result<Check> {
    let n = u.len();
    let all: Vec<usize> = (0..n).collect();
    let base = |v: &[Scalar]| g.eval_list(v);
    let lhs = q_symmetrize_positions(&base, &all, u, q)?;
    let tail = |v: &[Scalar]| q_symmetrize_positions(&base, &all[s..], v, q);
    let inner = |v: &[Scalar]| q_symmetrize_positions(&tail, &all[..s], v, q);
    let mut rhs = Scalar::zero();
    for sigma in (0..n).permutations(n) {
        if sigma[..s].windows(2).all(|w| w[0] < w[1]) && sigma[s..].windows(2).all(|w| w[0] < w[1])
        {
            rhs += pi_action(&sigma, u, q, &inner)?;
        }
    }
    Ok(scalar_check(&format!("sym-split(n={n},s={s})"), lhs, rhs))
}

/// `Sym^{(q)} G = ϖ(t̄) · Sym̄ G`.
pub fn check_sym_weighted(g: &ProbeFunction, t: &VariableAssignment, q: &Scalar) -> Result<Check> {
    let lhs = q_symmetrize_tv(&|tt: &VariableAssignment| g.eval(tt), t, q)?;
    let rhs = varpi(t, q)? * q_symmetrize(&|tt: &VariableAssignment| g.eval(tt), t, q)?;
    Ok(scalar_check("sym-weighted-vs-pi", lhs, rhs))
}

/// For symmetric `G`: `(1/n!) Sym̄(ϖ⁻¹ G) = (1/[n]_q!) Sym̄ G`.
pub fn check_sym_of_symmetric(g: &SymmetricProbe, u: &[Scalar], q: &Scalar) -> Result<Check> {
    let n = u.len();
    let all: Vec<usize> = (0..n).collect();
    let weighted = |v: &[Scalar]| -> Result<Scalar> {
        let w = varpi(
            &VariableAssignment {
                vars: vec![v.to_vec()],
            },
            q,
        )?;
        g.eval(v)?.checked_div(&w)
    };
    let lhs = q_symmetrize_positions(&weighted, &all, u, q)?.checked_div(&factorial(n))?;
    let rhs = q_symmetrize_positions(&|v: &[Scalar]| g.eval(v), &all, u, q)?
        .checked_div(&qint_factorial(n, q)?)?;
    Ok(scalar_check(&format!("sym-of-symmetric(n={n})"), lhs, rhs))
}

/// A q-symmetric `Q = Sym̄ G` satisfies `Sym̄ Q = (Π n_a!) Q`, and is invariant
/// under `π` of every adjacent transposition.
pub fn check_sym_of_q_symmetric(
    g: &ProbeFunction,
    t: &VariableAssignment,
    q: &Scalar,
) -> Result<Vec<Check>> {
    let qf = |tt: &VariableAssignment| q_symmetrize(&|s: &VariableAssignment| g.eval(s), tt, q);
    let qv = qf(t)?;
    let again = q_symmetrize(&qf, t, q)?;
    let order: Scalar = t.vars.iter().map(|v| factorial(v.len())).product();
    let mut out = vec![scalar_check("sym-of-q-symmetric", again, order * &qv)];
    for (a, v) in t.vars.iter().enumerate() {
        for i in 0..v.len().saturating_sub(1) {
            let mut sigma: Vec<Vec<usize>> =
                t.vars.iter().map(|w| (0..w.len()).collect()).collect();
            sigma[a].swap(i, i + 1);
            let moved = inversion_factor(&sigma, t, q)? * qf(&t.permuted(&sigma))?;
            out.push(scalar_check(
                &format!("q-symmetric(type {},{}↔{})", a + 1, i + 1, i + 2),
                moved,
                qv.clone(),
            ));
        }
    }
    Ok(out)
}
