//! Finite-dimensional `U_q(gl_N)` modules given by explicit generator
//! matrices, their tensor products, and the L-operators of the corresponding
//! evaluation modules of `U_q(gl̂_N)`.
//!
//! Algebra indices (`a`, `b`, `i`, `j`) are 1-based as in the usual
//! notation `E_{i,j}`; storage is 0-based.

use crate::check::Check;
use crate::exact::{invert, tensor_product, tensor_vec, BlockGrid, OpMatrix, Scalar, Vector};
use crate::rmatrix::{build_r, RPoint};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ModuleRep {
    n: usize,
    dim: usize,
    q: Scalar,
    /// `E_{i,j}` for all `i, j`, row-major; off-diagonal non-simple entries
    /// are composed roots, diagonal entries are the group-like `E_{a,a}`.
    gens: Vec<OpMatrix>,
    cartan_inv: Vec<OpMatrix>,
    singular: Vector,
    weights: Vec<i64>,
}

impl ModuleRep {
    /// Builds a module from the Chevalley data; composed roots are derived.
    pub fn from_chevalley(
        q: Scalar,
        cartan: Vec<OpMatrix>,
        raise: Vec<OpMatrix>,
        lower: Vec<OpMatrix>,
        singular: Vector,
        weights: Vec<i64>,
    ) -> Result<Self> {
        let n = cartan.len();
        if n < 2 || raise.len() != n - 1 || lower.len() != n - 1 || weights.len() != n {
            return Err(Error::Dimension(
                "inconsistent Chevalley data for the rank".into(),
            ));
        }
        if q.is_zero() {
            return Err(Error::Parameter("q must be nonzero".into()));
        }
        let dim = singular.len();
        if cartan
            .iter()
            .chain(&raise)
            .chain(&lower)
            .any(|m| m.rows() != dim || m.cols() != dim)
        {
            return Err(Error::Dimension("generators must act on the module".into()));
        }
        let cartan_inv = cartan.iter().map(invert).collect::<Result<Vec<_>>>()?;
        let mut gens = vec![OpMatrix::zeros(dim, dim); n * n];
        for a in 0..n {
            gens[a * n + a] = cartan[a].clone();
        }
        for a in 0..n - 1 {
            gens[a * n + a + 1] = raise[a].clone();
            gens[(a + 1) * n + a] = lower[a].clone();
        }
        let mut m = ModuleRep {
            n,
            dim,
            q,
            gens,
            cartan_inv,
            singular,
            weights,
        };
        // Fill longer roots in order of increasing length so every recursive
        // piece already exists.
        for len in 2..n {
            for a in 1..=n - len {
                let c = a + len;
                let low = m.composed_via(c, a, a + 1)?;
                let up = m.composed_via(a, c, a + 1)?;
                m.gens[(c - 1) * n + (a - 1)] = low;
                m.gens[(a - 1) * n + (c - 1)] = up;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn singular(&self) -> &[Scalar] {
        &self.singular
    }

    /// Integer exponents `Λ_a` with `E_{a,a} v = q^{Λ_a} v`.
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// `E_{i,j}` (1-based); composed roots for `|i − j| > 1`.
    pub fn e(&self, i: usize, j: usize) -> &OpMatrix {
        assert!(
            i >= 1 && j >= 1 && i <= self.n && j <= self.n,
            "E_({i},{j}) out of range"
        );
        &self.gens[(i - 1) * self.n + (j - 1)]
    }

    pub fn cartan(&self, a: usize) -> &OpMatrix {
        self.e(a, a)
    }

    pub fn cartan_inv(&self, a: usize) -> &OpMatrix {
        &self.cartan_inv[a - 1]
    }

    /// `E_{a,a+1}`.
    pub fn raise(&self, a: usize) -> &OpMatrix {
        self.e(a, a + 1)
    }

    /// `E_{a+1,a}`.
    pub fn lower(&self, a: usize) -> &OpMatrix {
        self.e(a + 1, a)
    }

    /// `E_{c,a} = E_{c,b}E_{b,a} − q⁻¹E_{b,a}E_{c,b}` for `a < b < c`, and
    /// `E_{a,c} = E_{a,b}E_{b,c} − qE_{b,c}E_{a,b}` for the raising side.
    fn composed_via(&self, i: usize, j: usize, b: usize) -> Result<OpMatrix> {
        let (lo, hi) = (i.min(j), i.max(j));
        if !(lo < b && b < hi) {
            return Err(Error::Index(format!(
                "intermediate {b} not strictly between {i} and {j}"
            )));
        }
        let coeff = if i > j {
            self.q.recip()?
        } else {
            self.q.clone()
        };
        let x = self.e(i, b).mul(self.e(b, j))?;
        let y = self.e(b, j).mul(self.e(i, b))?;
        x.sub(&y.scale(&coeff))
    }
}

/// The `N`-dimensional module on `e_1..e_N`: `E_{a,a} = diag(q^{δ_{ab}})`,
/// `E_{a,a+1} = e_a⟨e_{a+1}|`, `E_{a+1,a} = e_{a+1}⟨e_a|`, singular vector
/// `e_1` of weight `(1, 0, …, 0)`.
pub fn vector_rep(n: usize, q: &Scalar) -> Result<ModuleRep> {
    if n < 2 {
        return Err(Error::Parameter("rank must be at least 2".into()));
    }
    let cartan = (0..n)
        .map(|a| {
            let mut m = OpMatrix::identity(n);
            m[(a, a)] = q.clone();
            m
        })
        .collect();
    let raise = (0..n - 1).map(|a| OpMatrix::unit(n, a, a + 1)).collect();
    let lower = (0..n - 1).map(|a| OpMatrix::unit(n, a + 1, a)).collect();
    let mut singular = vec![Scalar::zero(); n];
    singular[0] = Scalar::one();
    let mut weights = vec![0; n];
    weights[0] = 1;
    ModuleRep::from_chevalley(q.clone(), cartan, raise, lower, singular, weights)
}

/// Tensor product through the coproduct `ΔE_{a,a} = E_{a,a}⊗E_{a,a}`,
/// `ΔE_{a,a+1} = E_{a,a+1}⊗1 + E_{a,a}⁻¹E_{a+1,a+1}⊗E_{a,a+1}`,
/// `ΔE_{a+1,a} = 1⊗E_{a+1,a} + E_{a+1,a}⊗E_{a,a}E_{a+1,a+1}⁻¹`.
pub fn tensor_module(m1: &ModuleRep, m2: &ModuleRep) -> Result<ModuleRep> {
    if m1.n != m2.n || m1.q != m2.q {
        return Err(Error::Parameter(
            "tensor factors must share rank and q".into(),
        ));
    }
    let n = m1.n;
    let i1 = OpMatrix::identity(m1.dim);
    let i2 = OpMatrix::identity(m2.dim);
    let cartan = (1..=n)
        .map(|a| tensor_product(m1.cartan(a), m2.cartan(a)))
        .collect();
    let mut raise = Vec::with_capacity(n - 1);
    let mut lower = Vec::with_capacity(n - 1);
    for a in 1..n {
        let k = m1.cartan_inv(a).mul(m1.cartan(a + 1))?;
        raise.push(tensor_product(m1.raise(a), &i2).add(&tensor_product(&k, m2.raise(a)))?);
        let k = m2.cartan(a).mul(m2.cartan_inv(a + 1))?;
        lower.push(tensor_product(&i1, m2.lower(a)).add(&tensor_product(m1.lower(a), &k))?);
    }
    let singular = tensor_vec(&m1.singular, &m2.singular);
    let weights = m1
        .weights
        .iter()
        .zip(&m2.weights)
        .map(|(x, y)| x + y)
        .collect();
    ModuleRep::from_chevalley(m1.q.clone(), cartan, raise, lower, singular, weights)
}

/// `m^{⊗k}`, associated to the left.
pub fn tensor_power(m: &ModuleRep, k: usize) -> Result<ModuleRep> {
    if k == 0 {
        return Err(Error::Parameter("tensor power must be positive".into()));
    }
    let mut out = m.clone();
    for _ in 1..k {
        out = tensor_module(&out, m)?;
    }
    Ok(out)
}

/// `E_{c,a}` (or the raising `E_{a,c}` when `c < a`) built through the
/// intermediate index `b`.
pub fn composed_root_via(m: &ModuleRep, c: usize, a: usize, b: usize) -> Result<OpMatrix> {
    check_pair(m.n, c, a)?;
    m.composed_via(c, a, b)
}

/// `E_{c,a}` for `c ≠ a`; adjacent indices return the stored generator.
pub fn composed_root(m: &ModuleRep, c: usize, a: usize) -> Result<OpMatrix> {
    check_pair(m.n, c, a)?;
    Ok(m.e(c, a).clone())
}

fn check_pair(n: usize, c: usize, a: usize) -> Result<()> {
    if c == a || c == 0 || a == 0 || c > n || a > n {
        return Err(Error::Index(format!(
            "E_({c},{a}) is not a root generator for N={n}"
        )));
    }
    Ok(())
}

/// The defining relations checked on a concrete module: Cartan conjugation,
/// the raising/lowering commutator, Serre relations, the singular vector
/// and independence of composed roots from the intermediate index.
pub fn check_module(m: &ModuleRep) -> Result<Vec<Check>> {
    let n = m.n;
    let q = &m.q;
    let qi = q.recip()?;
    let mut out = Vec::new();

    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                if b == c {
                    continue;
                }
                let e = ((a == b) as i64) - ((a == c) as i64);
                let lhs = m.cartan(a).mul(m.e(b, c))?.mul(m.cartan_inv(a))?;
                let rhs = m.e(b, c).scale(&q.pow(e)?);
                out.push(Check::matrices(
                    format!("cartan-conjugation E{a}{a}·E{b}{c}"),
                    &lhs,
                    &rhs,
                ));
            }
        }
    }

    let qq = q - &qi;
    for a in 1..n {
        for b in 1..n {
            let lhs = m.raise(a).commutator(m.lower(b))?;
            let rhs = if a == b {
                let x = m.cartan(a).mul(m.cartan_inv(a + 1))?;
                let y = m.cartan_inv(a).mul(m.cartan(a + 1))?;
                x.sub(&y)?.scale(&qq.recip()?)
            } else {
                OpMatrix::zeros(m.dim, m.dim)
            };
            out.push(Check::matrices(
                format!("commutator [E{a},{},E{},{b}]", a + 1, b + 1),
                &lhs,
                &rhs,
            ));
        }
    }

    // X²Y − (q+q⁻¹)XYX + YX² = 0 for adjacent simple root vectors of the
    // same kind, both orders.
    let q2 = q + &qi;
    for a in 1..n.saturating_sub(1) {
        for (kind, x, y) in [
            ("lower", m.lower(a), m.lower(a + 1)),
            ("raise", m.raise(a), m.raise(a + 1)),
        ] {
            for (label, x, y) in [("xxy", x, y), ("yyx", y, x)] {
                let t1 = x.mul(x)?.mul(y)?;
                let t2 = x.mul(y)?.mul(x)?.scale(&q2);
                let t3 = y.mul(x)?.mul(x)?;
                let lhs = t1.sub(&t2)?.add(&t3)?;
                out.push(Check::matrices(
                    format!("serre {kind} {a},{} {label}", a + 1),
                    &lhs,
                    &OpMatrix::zeros(m.dim, m.dim),
                ));
            }
        }
    }

    let zero = vec![Scalar::zero(); m.dim];
    for a in 1..n {
        let ok = m.raise(a).apply(&m.singular)? == zero;
        out.push(if ok {
            Check::pass(format!("singular annihilated by E{a},{}", a + 1))
        } else {
            Check::fail(
                format!("singular annihilated by E{a},{}", a + 1),
                "nonzero image",
            )
        });
    }
    for a in 1..=n {
        let lhs = m.cartan(a).apply(&m.singular)?;
        let ev = q.pow(m.weights[a - 1])?;
        let rhs: Vector = m.singular.iter().map(|x| x * &ev).collect();
        let name = format!("singular weight E{a}{a}");
        out.push(if lhs == rhs {
            Check::pass(name)
        } else {
            Check::fail(name, "eigenvalue mismatch")
        });
    }

    for a in 1..=n {
        for c in a + 2..=n {
            let reference = m.e(c, a);
            let reference_up = m.e(a, c);
            for b in a + 1..c {
                out.push(Check::matrices(
                    format!("composed root E{c},{a} via {b}"),
                    &m.composed_via(c, a, b)?,
                    reference,
                ));
                out.push(Check::matrices(
                    format!("composed root E{a},{c} via {b}"),
                    &m.composed_via(a, c, b)?,
                    reference_up,
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// `L^+(u) = Σ_k coeff[k] u^{-k}` or `L^-(u) = Σ_k coeff[k] u^k`, each
/// coefficient an `N×N` grid of operators on a module.
#[derive(Clone, Debug)]
pub struct LOperatorPoly {
    sign: Sign,
    n: usize,
    coeffs: Vec<BlockGrid>,
}

impl LOperatorPoly {
    pub fn new(sign: Sign, n: usize, coeffs: Vec<BlockGrid>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Parameter(
                "L-operator needs at least one coefficient".into(),
            ));
        };
        let d = first.inner();
        if coeffs
            .iter()
            .any(|c| c.block_rows() != n || c.block_cols() != n || c.inner() != d)
        {
            return Err(Error::Dimension(
                "coefficient grids must be N×N over one module".into(),
            ));
        }
        Ok(LOperatorPoly { sign, n, coeffs })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].inner()
    }

    pub fn coeff(&self, k: usize) -> &BlockGrid {
        &self.coeffs[k]
    }

    pub fn eval(&self, u: &Scalar) -> Result<BlockGrid> {
        let x = match self.sign {
            Sign::Plus => u.recip()?,
            Sign::Minus => u.clone(),
        };
        // Horner in x.
        let mut acc = self.coeffs[self.deg()].clone();
        for k in (0..self.deg()).rev() {
            acc = acc.scale(&x).add(&self.coeffs[k])?;
        }
        Ok(acc)
    }

    /// Entry `L_{i,j}(u)` (1-based).
    pub fn entry(&self, i: usize, j: usize, u: &Scalar) -> Result<OpMatrix> {
        Ok(self.eval(u)?.block(i - 1, j - 1).clone())
    }

    /// `L^+_{j,i}[0] = 0` (plus) or `L^-_{i,j}[0] = 0` (minus) for `i < j`.
    pub fn check_zero_mode_triangular(&self) -> Check {
        let c0 = &self.coeffs[0];
        let name = format!("zero-mode triangularity {:?}", self.sign);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let blk = match self.sign {
                    Sign::Plus => c0.block(j, i),
                    Sign::Minus => c0.block(i, j),
                };
                if !blk.is_zero() {
                    return Check::fail(name, format!("nonzero block at ({},{})", j + 1, i + 1));
                }
            }
        }
        Check::pass(name)
    }
}

/// Constant matrices `(L^+, L^-)` of the evaluation homomorphism:
/// `L^+_{a,b} = (q−q⁻¹)E_{b,a}E_{b,b}` (a<b), `E_{a,a}` (a=b), 0 (a>b);
/// `L^-_{a,b} = 0` (a<b), `E_{a,a}⁻¹` (a=b), `(q⁻¹−q)E_{a,a}⁻¹E_{b,a}` (a>b).
pub fn constant_l(m: &ModuleRep) -> Result<(BlockGrid, BlockGrid)> {
    let n = m.n;
    let d = m.dim;
    let q = &m.q;
    let qq = q - &q.recip()?;
    let mut plus = BlockGrid::zeros(n, n, d);
    let mut minus = BlockGrid::zeros(n, n, d);
    for a in 1..=n {
        for b in 1..=n {
            if a < b {
                *plus.block_mut(a - 1, b - 1) = m.e(b, a).mul(m.cartan(b))?.scale(&qq);
            } else if a == b {
                *plus.block_mut(a - 1, b - 1) = m.cartan(a).clone();
                *minus.block_mut(a - 1, b - 1) = m.cartan_inv(a).clone();
            } else {
                *minus.block_mut(a - 1, b - 1) = m.cartan_inv(a).mul(m.e(b, a))?.scale(&(-&qq));
            }
        }
    }
    Ok((plus, minus))
}

/// Evaluation L-operator at point `z`: `L^+(u) = L^+ − (z/u)L^-`,
/// `L^-(u) = L^- − (u/z)L^+`.
pub fn eval_l(m: &ModuleRep, z: &Scalar, sign: Sign) -> Result<LOperatorPoly> {
    if z.is_zero() {
        return Err(Error::Parameter("evaluation point must be nonzero".into()));
    }
    let (lp, lm) = constant_l(m)?;
    let coeffs = match sign {
        Sign::Plus => vec![lp, lm.scale(&-z)],
        Sign::Minus => vec![lm, lp.scale(&-z.recip()?)],
    };
    LOperatorPoly::new(sign, m.n, coeffs)
}

/// Coproduct of one coefficient pair: `Σ_k A_{k,j} ⊗ B_{i,k}`.
fn coproduct_grid(a: &BlockGrid, b: &BlockGrid, n: usize) -> Result<BlockGrid> {
    let d = a.inner() * b.inner();
    let mut out = BlockGrid::zeros(n, n, d);
    for i in 0..n {
        for j in 0..n {
            let blk = out.block_mut(i, j);
            for k in 0..n {
                let (x, y) = (a.block(k, j), b.block(i, k));
                if !x.is_zero() && !y.is_zero() {
                    *blk = blk.add(&tensor_product(x, y))?;
                }
            }
        }
    }
    Ok(out)
}

/// `Δ L_{i,j}(u) = Σ_k L_{k,j}(u) ⊗ L_{i,k}(u)`; degrees add.
pub fn tensor_l(l1: &LOperatorPoly, l2: &LOperatorPoly) -> Result<LOperatorPoly> {
    if l1.n != l2.n || l1.sign != l2.sign {
        return Err(Error::Parameter(
            "tensor factors need the same rank and sign".into(),
        ));
    }
    let n = l1.n;
    let d = l1.dim() * l2.dim();
    let mut coeffs = vec![BlockGrid::zeros(n, n, d); l1.deg() + l2.deg() + 1];
    for (p, a) in l1.coeffs.iter().enumerate() {
        for (r, b) in l2.coeffs.iter().enumerate() {
            coeffs[p + r] = coeffs[p + r].add(&coproduct_grid(a, b, n)?)?;
        }
    }
    LOperatorPoly::new(l1.sign, n, coeffs)
}

/// `L` acting on leg `leg` (1-based) of `(C^N)^{⊗legs} ⊗ V`.
pub fn embed_l(grid: &BlockGrid, leg: usize, legs: usize) -> Result<OpMatrix> {
    let n = grid.block_rows();
    if leg == 0 || leg > legs || grid.block_cols() != n {
        return Err(Error::Index(format!("leg {leg} of {legs}")));
    }
    let d = grid.inner();
    let aux = n.pow(legs as u32);
    let stride = n.pow((legs - leg) as u32);
    let mut out = OpMatrix::zeros(aux * d, aux * d);
    for alpha in 0..aux {
        let a = (alpha / stride) % n;
        let base = alpha - a * stride;
        for b in 0..n {
            let beta = base + b * stride;
            let blk = grid.block(a, b);
            for x in 0..d {
                for y in 0..d {
                    let v = &blk[(x, y)];
                    if !v.is_zero() {
                        out[(alpha * d + x, beta * d + y)] = v.clone();
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `R(u,v)(L_a(u)⊗1)(1⊗L_b(v)) = (1⊗L_b(v))(L_a(u)⊗1)R(u,v)` on
/// `C^N ⊗ C^N ⊗ V`.
pub fn check_rll(
    la: &LOperatorPoly,
    lb: &LOperatorPoly,
    q: &Scalar,
    u: &Scalar,
    v: &Scalar,
) -> Result<bool> {
    if la.n != lb.n || la.dim() != lb.dim() {
        return Err(Error::Parameter(
            "RLL needs L-operators over one module".into(),
        ));
    }
    let n = la.n;
    let r = tensor_product(
        &build_r(&RPoint::new(n, u.clone(), v.clone(), q.clone())?),
        &OpMatrix::identity(la.dim()),
    );
    let l1 = embed_l(&la.eval(u)?, 1, 2)?;
    let l2 = embed_l(&lb.eval(v)?, 2, 2)?;
    let lhs = r.mul(&l1)?.mul(&l2)?;
    let rhs = l2.mul(&l1)?.mul(&r)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// Evaluation module of a `U_q(gl_N)` module at point `z`.
    Evaluation { z: Scalar },
    /// Tensor product of affine modules.
    Tensor,
}

/// A `U_q(gl_N)` module carrying both L-operators of an affine module.
#[derive(Clone, Debug)]
pub struct AffineModule {
    pub rep: ModuleRep,
    pub lplus: LOperatorPoly,
    pub lminus: LOperatorPoly,
    pub kind: ModuleKind,
}

impl AffineModule {
    pub fn evaluation(rep: ModuleRep, z: &Scalar) -> Result<Self> {
        let lplus = eval_l(&rep, z, Sign::Plus)?;
        let lminus = eval_l(&rep, z, Sign::Minus)?;
        Ok(AffineModule {
            rep,
            lplus,
            lminus,
            kind: ModuleKind::Evaluation { z: z.clone() },
        })
    }

    /// Tensor product; the L-operators are combined by the L-coproduct and
    /// the finite part by the Chevalley coproduct.
    pub fn tensor(a: &AffineModule, b: &AffineModule) -> Result<Self> {
        Ok(AffineModule {
            rep: tensor_module(&a.rep, &b.rep)?,
            lplus: tensor_l(&a.lplus, &b.lplus)?,
            lminus: tensor_l(&a.lminus, &b.lminus)?,
            kind: ModuleKind::Tensor,
        })
    }

    pub fn n(&self) -> usize {
        self.rep.n
    }

    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn q(&self) -> &Scalar {
        &self.rep.q
    }

    pub fn l(&self, sign: Sign) -> &LOperatorPoly {
        match sign {
            Sign::Plus => &self.lplus,
            Sign::Minus => &self.lminus,
        }
    }

    /// RLL for the sign pairs (+,+), (−,−), (+,−) at `(u, v)`.
    pub fn check_rll_all(&self, u: &Scalar, v: &Scalar) -> Result<Vec<Check>> {
        let q = self.q();
        let mut out = Vec::new();
        for (name, a, b) in [
            ("rll ++", &self.lplus, &self.lplus),
            ("rll --", &self.lminus, &self.lminus),
            ("rll +-", &self.lplus, &self.lminus),
        ] {
            out.push(if check_rll(a, b, q, u, v)? {
                Check::pass(name)
            } else {
                Check::fail(name, format!("RLL fails at u={u}, v={v}, q={q}"))
            });
        }
        Ok(out)
    }

    /// Zero-mode triangularity of both signs and `L^+_{k,k}[0] L^-_{k,k}[0] = 1`.
    pub fn check_zero_modes(&self) -> Result<Vec<Check>> {
        let mut out = vec![
            self.lplus.check_zero_mode_triangular(),
            self.lminus.check_zero_mode_triangular(),
        ];
        let (p0, m0) = (self.lplus.coeff(0), self.lminus.coeff(0));
        for k in 0..self.n() {
            let prod = p0.block(k, k).mul(m0.block(k, k))?;
            out.push(Check::matrices(
                format!("cartan zero modes k={}", k + 1),
                &prod,
                &OpMatrix::identity(self.dim()),
            ));
        }
        Ok(out)
    }

    /// The constant part of `L^+` agrees with the evaluation formula built
    /// from the module's own Chevalley generators.
    pub fn check_constant_part(&self) -> Result<Check> {
        let (lp, _) = constant_l(&self.rep)?;
        Ok(Check::matrices(
            "L+ zero mode from generators",
            &self.lplus.coeff(0).flatten(),
            &lp.flatten(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::frac(5, 3).unwrap()
    }

    #[test]
    fn vector_rep_n2() {
        let m = vector_rep(2, &q()).unwrap();
        assert_eq!(m.cartan(1), &OpMatrix::diagonal(&[q(), Scalar::one()]));
        let e2 = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(
            m.raise(1).apply(&e2).unwrap(),
            vec![Scalar::one(), Scalar::zero()]
        );
        assert_eq!(m.lower(1).apply(m.singular()).unwrap(), e2);
        // [E12, E21] = diag(1, −1).
        let c = m.raise(1).commutator(m.lower(1)).unwrap();
        assert_eq!(c, OpMatrix::diagonal(&[Scalar::one(), -Scalar::one()]));
        assert!(check_module(&m).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn composed_root_on_gl3() {
        let m = vector_rep(3, &q()).unwrap();
        let v = composed_root(&m, 3, 1)
            .unwrap()
            .apply(m.singular())
            .unwrap();
        assert_eq!(v, vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
        assert_eq!(&composed_root(&m, 2, 1).unwrap(), m.lower(1));
        assert!(composed_root(&m, 2, 2).is_err());
        assert!(composed_root(&m, 4, 1).is_err());
    }

    #[test]
    fn evaluation_entry_is_constant() {
        // N=2: Ev_z(L^+_{1,2}(u)) = (q − q⁻¹)E21 E22 for every u.
        let m = vector_rep(2, &q()).unwrap();
        let l = eval_l(&m, &Scalar::int(7), Sign::Plus).unwrap();
        let qq = q() - q().recip().unwrap();
        let expect = m.lower(1).mul(m.cartan(2)).unwrap().scale(&qq);
        for u in [Scalar::int(2), Scalar::frac(-3, 11).unwrap()] {
            assert_eq!(l.entry(1, 2, &u).unwrap(), expect);
        }
    }

    #[test]
    fn tensor_degree_adds() {
        let m = vector_rep(2, &q()).unwrap();
        let a = AffineModule::evaluation(m.clone(), &Scalar::int(2)).unwrap();
        let b = AffineModule::evaluation(m, &Scalar::int(3)).unwrap();
        let t = AffineModule::tensor(&a, &b).unwrap();
        assert_eq!(t.lplus.deg(), 2);
        assert_eq!(t.dim(), 4);
    }
}
