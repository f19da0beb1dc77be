//! Gauss coordinates of L-operators at a sample point, their reconstruction,
//! total and composed currents, and the current commutation relations as
//! operator identities at sample points.
//!
//! Two decompositions exist. In the first, with `T_{i,j} := L_{j,i}`, the
//! coordinates form the block factorization `T = F·k·E` (lower unitriangular
//! `F_{b,a}`, diagonal `k_a`, upper unitriangular `E_{a,b}`). In the second
//! (hatted) one, `L = X·k̂·Y` with `X_{a,m} = F̂_{m,a}` upper and
//! `Y_{m,b} = Ê_{b,m}` lower unitriangular. Both are computed by Schur
//! complements of flattened operator blocks, i.e. quasideterminants.

use std::collections::BTreeMap;

use crate::check::Check;
use crate::exact::{invert, BlockGrid, OpMatrix, Scalar};
use crate::rep::{AffineModule, LOperatorPoly, Sign};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Unhatted coordinates `F, k, E`.
    First,
    /// Hatted coordinates `F̂, k̂, Ê`.
    Second,
}

/// Gauss coordinates of one L-operator value; indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCoords {
    pub k: Vec<OpMatrix>,
    /// `F_{b,a}` keyed by `(b, a)`, `b > a`.
    pub f: BTreeMap<(usize, usize), OpMatrix>,
    /// `E_{a,b}` keyed by `(a, b)`, `a < b`.
    pub e: BTreeMap<(usize, usize), OpMatrix>,
}

impl GaussCoords {
    pub fn k(&self, c: usize) -> &OpMatrix {
        &self.k[c - 1]
    }

    pub fn f(&self, b: usize, a: usize) -> &OpMatrix {
        &self.f[&(b, a)]
    }

    pub fn e(&self, a: usize, b: usize) -> &OpMatrix {
        &self.e[&(a, b)]
    }
}

#[derive(Clone, Debug)]
pub struct GaussSample {
    pub flavor: Flavor,
    pub t: Scalar,
    pub plus: GaussCoords,
    pub minus: GaussCoords,
}

impl GaussSample {
    pub fn coords(&self, sign: Sign) -> &GaussCoords {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

/// Flattens the blocks `(rows × cols)` of `block(i, j)` into one matrix.
fn flat(
    rows: &[usize],
    cols: &[usize],
    d: usize,
    block: &impl Fn(usize, usize) -> OpMatrix,
) -> OpMatrix {
    let mut out = OpMatrix::zeros(rows.len() * d, cols.len() * d);
    for (ri, &i) in rows.iter().enumerate() {
        for (ci, &j) in cols.iter().enumerate() {
            let b = block(i, j);
            for x in 0..d {
                for y in 0..d {
                    out[(ri * d + x, ci * d + y)] = b[(x, y)].clone();
                }
            }
        }
    }
    out
}

/// Schur complement data for eliminating the index set `pivots`: returns a
/// closure computing `M_{i,j} − M_{i,P} (M_{P,P})⁻¹ M_{P,j}`.
fn schur<'a>(
    pivots: Vec<usize>,
    d: usize,
    block: &'a impl Fn(usize, usize) -> OpMatrix,
) -> Result<impl Fn(usize, usize) -> Result<OpMatrix> + 'a> {
    let inv = if pivots.is_empty() {
        None
    } else {
        Some(invert(&flat(&pivots, &pivots, d, block))?)
    };
    Ok(move |i: usize, j: usize| -> Result<OpMatrix> {
        let direct = block(i, j);
        match &inv {
            None => Ok(direct),
            Some(inv) => {
                let row = flat(&[i], &pivots, d, block);
                let col = flat(&pivots, &[j], d, block);
                direct.sub(&row.mul(inv)?.mul(&col)?)
            }
        }
    })
}

/// Gauss coordinates of a single `N×N` operator grid `L`.
pub fn decompose(l: &BlockGrid, flavor: Flavor) -> Result<GaussCoords> {
    let n = l.block_rows();
    let d = l.inner();
    let mut k = Vec::with_capacity(n);
    let mut f = BTreeMap::new();
    let mut e = BTreeMap::new();
    match flavor {
        Flavor::First => {
            // T_{i,j} = L_{j,i}, 0-based.
            let t = |i: usize, j: usize| l.block(j, i).clone();
            for a in 0..n {
                let s = schur((0..a).collect(), d, &t)?;
                let ka = s(a, a)?;
                let ka_inv = invert(&ka)?;
                for b in a + 1..n {
                    f.insert((b + 1, a + 1), s(b, a)?.mul(&ka_inv)?);
                    e.insert((a + 1, b + 1), ka_inv.mul(&s(a, b)?)?);
                }
                k.push(ka);
            }
        }
        Flavor::Second => {
            let g = |i: usize, j: usize| l.block(i, j).clone();
            for a in 0..n {
                let s = schur((a + 1..n).collect(), d, &g)?;
                let ka = s(a, a)?;
                let ka_inv = invert(&ka)?;
                for b in 0..a {
                    // F̂_{a,b} = (L_{b,a} − …) k̂_a⁻¹, Ê_{b,a} = k̂_a⁻¹ (L_{a,b} − …).
                    f.insert((a + 1, b + 1), s(b, a)?.mul(&ka_inv)?);
                    e.insert((b + 1, a + 1), ka_inv.mul(&s(a, b)?)?);
                }
                k.push(ka);
            }
        }
    }
    Ok(GaussCoords { k, f, e })
}

/// Both signs at one sample point.
pub fn gauss_extract(
    lplus: &LOperatorPoly,
    lminus: &LOperatorPoly,
    t: &Scalar,
    flavor: Flavor,
) -> Result<GaussSample> {
    Ok(GaussSample {
        flavor,
        t: t.clone(),
        plus: decompose(&lplus.eval(t)?, flavor)?,
        minus: decompose(&lminus.eval(t)?, flavor)?,
    })
}

/// Evaluates the decomposition formulas entry by entry:
///
/// first flavor:
/// `L_{a,b} = F_{b,a}k_a + Σ_{m<a} F_{b,m}k_mE_{m,a}` (a<b),
/// `L_{a,a} = k_a + Σ_{m<a} F_{a,m}k_mE_{m,a}`,
/// `L_{a,b} = k_bE_{b,a} + Σ_{m<b} F_{b,m}k_mE_{m,a}` (a>b);
///
/// second flavor:
/// `L_{a,b} = F̂_{b,a}k̂_b + Σ_{m>b} F̂_{m,a}k̂_mÊ_{b,m}` (a<b),
/// `L_{b,b} = k̂_b + Σ_{m>b} F̂_{m,b}k̂_mÊ_{b,m}`,
/// `L_{a,b} = k̂_aÊ_{b,a} + Σ_{m>a} F̂_{m,a}k̂_mÊ_{b,m}` (a>b).
pub fn reconstruct(c: &GaussCoords, flavor: Flavor) -> Result<BlockGrid> {
    let n = c.k.len();
    let d = c.k[0].rows();
    let fke = |fb: usize, fa: usize, m: usize, ea: usize, eb: usize| -> Result<OpMatrix> {
        c.f(fb, fa).mul(c.k(m))?.mul(c.e(ea, eb))
    };
    let mut out = BlockGrid::zeros(n, n, d);
    for a in 1..=n {
        for b in 1..=n {
            let mut acc = match flavor {
                Flavor::First => {
                    let mut acc = if a < b {
                        c.f(b, a).mul(c.k(a))?
                    } else if a == b {
                        c.k(a).clone()
                    } else {
                        c.k(b).mul(c.e(b, a))?
                    };
                    // All three cases share the tail Σ_{m<min(a,b)} F_{b,m}k_mE_{m,a}.
                    for m in 1..a.min(b) {
                        acc = acc.add(&fke(b, m, m, m, a)?)?;
                    }
                    acc
                }
                Flavor::Second => {
                    let mut acc = if a < b {
                        c.f(b, a).mul(c.k(b))?
                    } else if a == b {
                        c.k(a).clone()
                    } else {
                        c.k(a).mul(c.e(b, a))?
                    };
                    for m in a.max(b) + 1..=n {
                        acc = acc.add(&fke(m, a, m, b, m)?)?;
                    }
                    acc
                }
            };
            std::mem::swap(out.block_mut(a - 1, b - 1), &mut acc);
        }
    }
    Ok(out)
}

/// `(L^+(t), L^-(t))` rebuilt from the coordinates.
pub fn reconstruct_l(g: &GaussSample) -> Result<(BlockGrid, BlockGrid)> {
    Ok((
        reconstruct(&g.plus, g.flavor)?,
        reconstruct(&g.minus, g.flavor)?,
    ))
}

/// Total currents and Cartan currents of one module at one point.
#[derive(Clone, Debug)]
pub struct CurrentSample {
    pub flavor: Flavor,
    pub t: Scalar,
    /// `F_i(t)`, `i = 1..N−1`.
    pub f: Vec<OpMatrix>,
    /// `E_i(t)`.
    pub e: Vec<OpMatrix>,
    pub k_plus: Vec<OpMatrix>,
    pub k_minus: Vec<OpMatrix>,
}

impl CurrentSample {
    /// `F_i = F^+_{i+1,i} − F^-_{i+1,i}`, `E_i = E^+_{i,i+1} − E^-_{i,i+1}`
    /// (hatted analogues for the second flavor).
    pub fn at(module: &AffineModule, t: &Scalar, flavor: Flavor) -> Result<Self> {
        let g = gauss_extract(&module.lplus, &module.lminus, t, flavor)?;
        let n = module.n();
        let mut f = Vec::with_capacity(n - 1);
        let mut e = Vec::with_capacity(n - 1);
        for i in 1..n {
            f.push(g.plus.f(i + 1, i).sub(g.minus.f(i + 1, i))?);
            e.push(g.plus.e(i, i + 1).sub(g.minus.e(i, i + 1))?);
        }
        Ok(CurrentSample {
            flavor,
            t: t.clone(),
            f,
            e,
            k_plus: g.plus.k,
            k_minus: g.minus.k,
        })
    }

    pub fn f(&self, i: usize) -> &OpMatrix {
        &self.f[i - 1]
    }

    pub fn e(&self, i: usize) -> &OpMatrix {
        &self.e[i - 1]
    }

    pub fn k(&self, i: usize, sign: Sign) -> &OpMatrix {
        match sign {
            Sign::Plus => &self.k_plus[i - 1],
            Sign::Minus => &self.k_minus[i - 1],
        }
    }

    /// Composed current: `F_{j,i} = (q−q⁻¹)^{j−i−1} F_{j−1}···F_i` (first
    /// flavor) or `F̂_{j,i} = (q−q⁻¹)^{j−i−1} F̂_i···F̂_{j−1}` (second).
    pub fn composed(&self, j: usize, i: usize, q: &Scalar) -> Result<OpMatrix> {
        let n = self.f.len() + 1;
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::Index(format!(
                "composed current ({j},{i}) for N={n}"
            )));
        }
        let c = (q - &q.recip()?).pow((j - i - 1) as i64)?;
        let d = self.f[0].rows();
        let order: Vec<usize> = match self.flavor {
            Flavor::First => (i..j).rev().collect(),
            Flavor::Second => (i..j).collect(),
        };
        Ok(OpMatrix::product(d, order.iter().map(|&a| self.f(a)))?.scale(&c))
    }
}

pub fn current_f(module: &AffineModule, i: usize, t: &Scalar, flavor: Flavor) -> Result<OpMatrix> {
    check_simple(module.n(), i)?;
    Ok(CurrentSample::at(module, t, flavor)?.f(i).clone())
}

pub fn current_e(module: &AffineModule, i: usize, t: &Scalar, flavor: Flavor) -> Result<OpMatrix> {
    check_simple(module.n(), i)?;
    Ok(CurrentSample::at(module, t, flavor)?.e(i).clone())
}

pub fn composed_current(
    module: &AffineModule,
    j: usize,
    i: usize,
    t: &Scalar,
    flavor: Flavor,
) -> Result<OpMatrix> {
    CurrentSample::at(module, t, flavor)?.composed(j, i, module.q())
}

fn check_simple(n: usize, i: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::Index(format!("simple root {i} for N={n}")));
    }
    Ok(())
}

fn ratio(num: Scalar, den: Scalar) -> Result<Scalar> {
    num.checked_div(&den)
}

/// `α·X·Y = β·Y·X`.
fn exchange(
    name: String,
    alpha: &Scalar,
    x: &OpMatrix,
    y: &OpMatrix,
    beta: &Scalar,
) -> Result<Check> {
    let lhs = x.mul(y)?.scale(alpha);
    let rhs = y.mul(x)?.scale(beta);
    Ok(Check::matrices(name, &lhs, &rhs))
}

/// `k·X·k⁻¹ = ρ·X`.
fn conjugation(name: String, k: &OpMatrix, x: &OpMatrix, rho: &Scalar) -> Result<Check> {
    let lhs = k.mul(x)?.mul(&invert(k)?)?;
    Ok(Check::matrices(name, &lhs, &x.scale(rho)))
}

/// The non-delta current relations (F–F, E–E, Cartan conjugations) at
/// `(z, w)`, in the form belonging to the chosen Gauss flavor.
pub fn check_current_relations(
    module: &AffineModule,
    z: &Scalar,
    w: &Scalar,
    flavor: Flavor,
) -> Result<Vec<Check>> {
    if z == w {
        return Err(Error::Pole("coinciding current arguments".into()));
    }
    let q = module.q();
    let qi = q.recip()?;
    let n = module.n();
    let cz = CurrentSample::at(module, z, flavor)?;
    let cw = CurrentSample::at(module, w, flavor)?;
    let tag = match flavor {
        Flavor::First => "",
        Flavor::Second => "hat ",
    };

    let qz_qiw = q * z - &qi * w; // q z − q⁻¹ w
    let qiz_qw = &qi * z - q * w; // q⁻¹ z − q w
    let z_w = z - w;

    // (same-index α, β) and (adjacent α, β) for E and F, per flavor.
    let (ee_same, ee_adj, ff_same, ff_adj) = match flavor {
        Flavor::First => (
            (qz_qiw.clone(), qiz_qw.clone()),
            (qiz_qw.clone(), z_w.clone()),
            (qiz_qw.clone(), qz_qiw.clone()),
            (z_w.clone(), qiz_qw.clone()),
        ),
        Flavor::Second => (
            (qiz_qw.clone(), qz_qiw.clone()),
            (z_w.clone(), qiz_qw.clone()),
            (qz_qiw.clone(), qiz_qw.clone()),
            (qiz_qw.clone(), z_w.clone()),
        ),
    };

    let mut out = Vec::new();
    for i in 1..n {
        out.push(exchange(
            format!("{tag}EE i={i}"),
            &ee_same.0,
            cz.e(i),
            cw.e(i),
            &ee_same.1,
        )?);
        out.push(exchange(
            format!("{tag}FF i={i}"),
            &ff_same.0,
            cz.f(i),
            cw.f(i),
            &ff_same.1,
        )?);
        if i + 1 < n {
            out.push(exchange(
                format!("{tag}EE i={i},{}", i + 1),
                &ee_adj.0,
                cz.e(i),
                cw.e(i + 1),
                &ee_adj.1,
            )?);
            out.push(exchange(
                format!("{tag}FF i={i},{}", i + 1),
                &ff_adj.0,
                cz.f(i),
                cw.f(i + 1),
                &ff_adj.1,
            )?);
        }
    }

    let k_e_i = ratio(z_w.clone(), qiz_qw.clone())?;
    let k_e_i1 = ratio(z_w.clone(), qz_qiw.clone())?;
    let k_f_i = ratio(qiz_qw.clone(), z_w.clone())?;
    let k_f_i1 = ratio(qz_qiw.clone(), z_w.clone())?;
    for sign in [Sign::Plus, Sign::Minus] {
        let s = if sign == Sign::Plus { "+" } else { "-" };
        for c in 1..=n {
            let k = cz.k(c, sign);
            for i in 1..n {
                let (re, rf) = if c == i {
                    (k_e_i.clone(), k_f_i.clone())
                } else if c == i + 1 {
                    (k_e_i1.clone(), k_f_i1.clone())
                } else {
                    (Scalar::one(), Scalar::one())
                };
                out.push(conjugation(
                    format!("{tag}k{s}_{c} E_{i}"),
                    k,
                    cw.e(i),
                    &re,
                )?);
                out.push(conjugation(
                    format!("{tag}k{s}_{c} F_{i}"),
                    k,
                    cw.f(i),
                    &rf,
                )?);
            }
        }
    }
    // Cartan currents commute at level zero; unlike the relations above,
    // these do not degenerate when the total currents vanish.
    for (sa, ka) in [("+", &cz.k_plus), ("-", &cz.k_minus)] {
        for (sb, kb) in [("+", &cw.k_plus), ("-", &cw.k_minus)] {
            for (c, x) in ka.iter().enumerate().take(n) {
                for (c2, y) in kb.iter().enumerate().take(n) {
                    let lhs = x.mul(y)?;
                    let rhs = y.mul(x)?;
                    out.push(Check::matrices(
                        format!("{tag}k{sa}_{}(z) k{sb}_{}(w) commute", c + 1, c2 + 1),
                        &lhs,
                        &rhs,
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// `Sym_{z1,z2}(X1 X2 Y − (q+q⁻¹) X1 Y X2 + Y X1 X2) = 0` with
/// `X = F_i, Y = F_{i±1}` (and the same for `E`).
pub fn check_current_serre(
    module: &AffineModule,
    z1: &Scalar,
    z2: &Scalar,
    w: &Scalar,
    flavor: Flavor,
) -> Result<Vec<Check>> {
    let q = module.q();
    let q2 = q + &q.recip()?;
    let n = module.n();
    let c1 = CurrentSample::at(module, z1, flavor)?;
    let c2 = CurrentSample::at(module, z2, flavor)?;
    let cw = CurrentSample::at(module, w, flavor)?;
    let d = module.dim();
    let serre = |x1: &OpMatrix, x2: &OpMatrix, y: &OpMatrix| -> Result<OpMatrix> {
        let t1 = x1.mul(x2)?.mul(y)?;
        let t2 = x1.mul(y)?.mul(x2)?.scale(&q2);
        let t3 = y.mul(x1)?.mul(x2)?;
        t1.sub(&t2)?.add(&t3)
    };
    let mut out = Vec::new();
    for i in 1..n {
        for j in [i.wrapping_sub(1), i + 1] {
            if j == 0 || j >= n {
                continue;
            }
            for (kind, a1, a2, y) in [
                ("F", c1.f(i), c2.f(i), cw.f(j)),
                ("E", c1.e(i), c2.e(i), cw.e(j)),
            ] {
                let lhs = serre(a1, a2, y)?.add(&serre(a2, a1, y)?)?;
                out.push(Check::matrices(
                    format!("serre {kind}_{i} {kind}_{j}"),
                    &lhs,
                    &OpMatrix::zeros(d, d),
                ));
            }
        }
    }
    Ok(out)
}

/// Composed-current exchange relations for `i > j > k > l`:
/// `F_{jk}(z)F_{ik}(w) = φ(z,w) F_{ik}(w)F_{jk}(z)`,
/// `F_{ik}(z)F_{ij}(w) = φ(z,w) F_{ij}(w)F_{ik}(z)`,
/// `F_{jk}(z)F_{il}(w) = F_{il}(w)F_{jk}(z)`,
/// `φ(w,z) F_{ij}(z)F_{ij}(w) = φ(z,w) F_{ij}(w)F_{ij}(z)`,
/// with `φ(z,w) = (q⁻¹ − q z/w)/(1 − z/w)`.
pub fn check_composed_currents(
    module: &AffineModule,
    z: &Scalar,
    w: &Scalar,
) -> Result<Vec<Check>> {
    let q = module.q();
    let qi = q.recip()?;
    let n = module.n();
    let phi = |a: &Scalar, b: &Scalar| -> Result<Scalar> {
        let x = a.checked_div(b)?;
        ratio(&qi - q * &x, Scalar::one() - x)
    };
    let phi_zw = phi(z, w)?;
    let phi_wz = phi(w, z)?;
    let cz = CurrentSample::at(module, z, Flavor::First)?;
    let cw = CurrentSample::at(module, w, Flavor::First)?;
    let one = Scalar::one();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..i {
            let fz_ij = cz.composed(i, j, q)?;
            let fw_ij = cw.composed(i, j, q)?;
            out.push(exchange(
                format!("FFijij ({i},{j})"),
                &phi_wz,
                &fz_ij,
                &fw_ij,
                &phi_zw,
            )?);
            for k in 1..j {
                let fz_jk = cz.composed(j, k, q)?;
                let fw_ik = cw.composed(i, k, q)?;
                out.push(exchange(
                    format!("FFi2g ({i},{j},{k})"),
                    &one,
                    &fz_jk,
                    &fw_ik,
                    &phi_zw,
                )?);
                let fz_ik = cz.composed(i, k, q)?;
                out.push(exchange(
                    format!("FFi22g ({i},{j},{k})"),
                    &one,
                    &fz_ik,
                    &fw_ij,
                    &phi_zw,
                )?);
                for l in 1..k {
                    let fw_il = cw.composed(i, l, q)?;
                    out.push(exchange(
                        format!("FFi3g ({i},{j},{k},{l})"),
                        &one,
                        &fz_jk,
                        &fw_il,
                        &one,
                    )?);
                }
            }
        }
    }
    Ok(out)
}
