//! Trigonometric R-matrix on `C^N ⊗ C^N`, leg embeddings and the ordered
//! R-product of the monodromy construction.
//!
//! Legs are numbered from 1; leg 1 is the slowest tensor index.

use crate::check::Check;
use crate::exact::{tensor_product, OpMatrix, Scalar};
use crate::{Error, Result};

/// Spectral parameters and deformation parameter of one R-matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPoint {
    n: usize,
    u: Scalar,
    v: Scalar,
    q: Scalar,
}

impl RPoint {
    /// Rejects `q = 0` and points where `q u − q^{-1} v` vanishes.
    pub fn new(n: usize, u: Scalar, v: Scalar, q: Scalar) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("rank must be positive".into()));
        }
        if q.is_zero() {
            return Err(Error::Parameter("q must be nonzero".into()));
        }
        let den = &q * &u - v.checked_div(&q)?;
        if den.is_zero() {
            return Err(Error::Pole(format!("q·u − v/q vanishes at u={u}, v={v}")));
        }
        Ok(RPoint { n, u, v, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `R(u,v) = Σ_i E_ii⊗E_ii + (u−v)/(qu−q⁻¹v) Σ_{i<j}(E_ii⊗E_jj + E_jj⊗E_ii)
///   + (q−q⁻¹)/(qu−q⁻¹v) Σ_{i<j}(u E_ij⊗E_ji + v E_ji⊗E_ij)`.
pub fn build_r(p: &RPoint) -> OpMatrix {
    let n = p.n;
    let qi = p.q.recip().expect("q checked nonzero");
    let den = (&p.q * &p.u - &qi * &p.v)
        .recip()
        .expect("denominator checked nonzero");
    let diag = (&p.u - &p.v) * &den;
    let exch = (&p.q - &qi) * &den;
    let mut r = OpMatrix::zeros(n * n, n * n);
    let at = |i: usize, j: usize| i * n + j;
    for i in 0..n {
        r[(at(i, i), at(i, i))] = Scalar::one();
    }
    for i in 0..n {
        for j in i + 1..n {
            r[(at(i, j), at(i, j))] = diag.clone();
            r[(at(j, i), at(j, i))] = diag.clone();
            // u E_ij ⊗ E_ji sends e_j ⊗ e_i to e_i ⊗ e_j.
            r[(at(i, j), at(j, i))] = &exch * &p.u;
            r[(at(j, i), at(i, j))] = &exch * &p.v;
        }
    }
    r
}

/// The flip `P(x ⊗ y) = y ⊗ x` on `C^N ⊗ C^N`.
pub fn swap(n: usize) -> OpMatrix {
    let mut p = OpMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p[(j * n + i, i * n + j)] = Scalar::one();
        }
    }
    p
}

fn digits(mut idx: usize, n: usize, legs: usize) -> Vec<usize> {
    let mut d = vec![0; legs];
    for k in (0..legs).rev() {
        d[k] = idx % n;
        idx /= n;
    }
    d
}

fn undigits(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * n + x)
}

/// Permutation matrix on `(C^N)^{⊗legs}` that places the content of leg
/// `order[k]` (0-based) into slot `k`.
pub fn leg_permutation(n: usize, legs: usize, order: &[usize]) -> Result<OpMatrix> {
    let mut seen = vec![false; legs];
    if order.len() != legs
        || order
            .iter()
            .any(|&o| o >= legs || std::mem::replace(&mut seen[o], true))
    {
        return Err(Error::Index(format!(
            "{order:?} is not a permutation of {legs} legs"
        )));
    }
    let dim = n.pow(legs as u32);
    let mut p = OpMatrix::zeros(dim, dim);
    for col in 0..dim {
        let d = digits(col, n, legs);
        let moved: Vec<usize> = order.iter().map(|&o| d[o]).collect();
        p[(undigits(&moved, n), col)] = Scalar::one();
    }
    Ok(p)
}

/// `R^{(ji)}`: the two-leg operator `r` acting with its first factor on leg
/// `j` and its second on leg `i` of `(C^N)^{⊗legs}`.
pub fn embed_pair(r: &OpMatrix, n: usize, legs: usize, j: usize, i: usize) -> Result<OpMatrix> {
    if j == i || j == 0 || i == 0 || j > legs || i > legs {
        return Err(Error::Index(format!("legs ({j},{i}) out of 1..={legs}")));
    }
    if r.rows() != n * n || !r.is_square() {
        return Err(Error::Dimension("two-leg operator must be N²×N²".into()));
    }
    let mut order = vec![j - 1, i - 1];
    order.extend((0..legs).filter(|&k| k != j - 1 && k != i - 1));
    let p = leg_permutation(n, legs, &order)?;
    let rest = OpMatrix::identity(n.pow(legs as u32 - 2));
    p.transpose().mul(&tensor_product(r, &rest))?.mul(&p)
}

/// Factor order of the R-product: `R^{(ji)}` stands left of `R^{(ml)}` iff
/// `j > m`, or `j = m` and `i > l`.
pub fn r_product_order(legs: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for j in (2..=legs).rev() {
        for i in (1..j).rev() {
            pairs.push((j, i));
        }
    }
    pairs
}

/// `Π^{←}_{M≥j>1} Π^{←}_{j>i≥1} R^{(ji)}(u_j, u_i)` on `(C^N)^{⊗M}`.
pub fn build_r_product(n: usize, q: &Scalar, points: &[Scalar]) -> Result<OpMatrix> {
    let legs = points.len();
    let mut out = OpMatrix::identity(n.pow(legs as u32));
    for (j, i) in r_product_order(legs) {
        let r = build_r(&RPoint::new(
            n,
            points[j - 1].clone(),
            points[i - 1].clone(),
            q.clone(),
        )?);
        out = out.mul(&embed_pair(&r, n, legs, j, i)?)?;
    }
    Ok(out)
}

/// `R12(u,v) R13(u,w) R23(v,w) = R23(v,w) R13(u,w) R12(u,v)` on `(C^N)^{⊗3}`.
pub fn check_ybe(n: usize, q: &Scalar, u: &Scalar, v: &Scalar, w: &Scalar) -> Result<bool> {
    Ok(check_ybe_with(
        n,
        &|a, b| Ok(build_r(&RPoint::new(n, a.clone(), b.clone(), q.clone())?)),
        u,
        v,
        w,
    )?
    .pass)
}

/// Yang–Baxter for an arbitrary two-point operator family `r(a, b)`.
pub fn check_ybe_with(
    n: usize,
    r: &dyn Fn(&Scalar, &Scalar) -> Result<OpMatrix>,
    u: &Scalar,
    v: &Scalar,
    w: &Scalar,
) -> Result<Check> {
    let r12 = embed_pair(&r(u, v)?, n, 3, 1, 2)?;
    let r13 = embed_pair(&r(u, w)?, n, 3, 1, 3)?;
    let r23 = embed_pair(&r(v, w)?, n, 3, 2, 3)?;
    let lhs = r12.mul(&r13)?.mul(&r23)?;
    let rhs = r23.mul(&r13)?.mul(&r12)?;
    Ok(Check::matrices(format!("yang-baxter N={n}"), &lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn equal_points_give_swap() {
        for n in 2..=4 {
            let p = RPoint::new(n, s(5), s(5), Scalar::frac(3, 2).unwrap()).unwrap();
            assert_eq!(build_r(&p), swap(n));
        }
    }

    #[test]
    fn classical_limit_is_identity() {
        let p = RPoint::new(3, s(2), s(7), s(1)).unwrap();
        assert_eq!(build_r(&p), OpMatrix::identity(9));
    }

    #[test]
    fn exchange_coefficient() {
        // (q − q⁻¹)u/(qu − q⁻¹v) at u=2, v=1, q=3 is 16/17.
        let r = build_r(&RPoint::new(2, s(2), s(1), s(3)).unwrap());
        assert_eq!(r[(1, 2)], Scalar::frac(16, 17).unwrap());
    }

    #[test]
    fn rejects_pole() {
        // q u = q⁻¹ v with q = 2, u = 1, v = 4.
        assert!(matches!(
            RPoint::new(2, s(1), s(4), s(2)),
            Err(Error::Pole(_))
        ));
        assert!(RPoint::new(2, s(1), s(4), s(0)).is_err());
    }

    #[test]
    fn product_orders() {
        assert_eq!(r_product_order(1), vec![]);
        assert_eq!(r_product_order(2), vec![(2, 1)]);
        assert_eq!(r_product_order(3), vec![(3, 2), (3, 1), (2, 1)]);
    }
}
