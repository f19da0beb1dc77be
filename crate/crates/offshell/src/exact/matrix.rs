//! Dense exact matrices, Kronecker products, partial traces and block grids.
//!
//! Tensor convention throughout: in `a ⊗ b` the index of `a` varies slowest,
//! so basis vector `e_i ⊗ e_j` sits at position `i * dim(b) + j`.

use std::ops::{Index, IndexMut};

use super::Scalar;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for OpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "OpMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl OpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        OpMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        OpMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(OpMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix unit `E_{ij}` of size `n` (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Scalar::one();
        m
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn mul(&self, rhs: &OpMatrix) -> Result<OpMatrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = OpMatrix::zeros(self.rows, rhs.cols);
        // Column support of each row of rhs, so sparse operands stay cheap.
        let support: Vec<Vec<usize>> = (0..rhs.rows)
            .map(|k| (0..rhs.cols).filter(|&j| !rhs[(k, j)].is_zero()).collect())
            .collect();
        for i in 0..self.rows {
            for (k, cols) in support.iter().enumerate() {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for &j in cols {
                    let prod = a * &rhs.data[k * rhs.cols + j];
                    out.data[i * rhs.cols + j] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &OpMatrix) -> Result<OpMatrix, Error> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &OpMatrix) -> Result<OpMatrix, Error> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(
        &self,
        rhs: &OpMatrix,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<OpMatrix, Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(OpMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: &Scalar) -> OpMatrix {
        let data = if s.is_zero() {
            vec![Scalar::zero(); self.data.len()]
        } else {
            self.data
                .iter()
                .map(|x| if x.is_zero() { Scalar::zero() } else { x * s })
                .collect()
        };
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self += s * rhs`.
    pub fn add_scaled(&mut self, s: &Scalar, rhs: &OpMatrix) -> Result<(), Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("add_scaled shape mismatch".into()));
        }
        if s.is_zero() {
            return Ok(());
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            if !b.is_zero() {
                *a += s * b;
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> OpMatrix {
        OpMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn trace(&self) -> Result<Scalar, Error> {
        if !self.is_square() {
            return Err(Error::Dimension("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).map(|i| &self[(i, i)]).sum())
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn pow(&self, k: usize) -> Result<OpMatrix, Error> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut out = OpMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Product of a sequence of square matrices of size `n`, left to right.
    pub fn product<'a>(
        n: usize,
        factors: impl IntoIterator<Item = &'a OpMatrix>,
    ) -> Result<OpMatrix, Error> {
        let mut out = OpMatrix::identity(n);
        for f in factors {
            out = out.mul(f)?;
        }
        Ok(out)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &OpMatrix) -> Result<OpMatrix, Error> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    /// Sub-matrix with the given row and column ranges.
    pub fn slice(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> OpMatrix {
        OpMatrix::from_fn(nr, nc, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    /// Location and both values of the first entry where `self` and `other`
    /// differ, scanning row-major.
    pub fn first_mismatch(&self, other: &OpMatrix) -> Option<(usize, usize, Scalar, Scalar)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((usize::MAX, usize::MAX, Scalar::zero(), Scalar::zero()));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|p| {
                (
                    p / self.cols,
                    p % self.cols,
                    self.data[p].clone(),
                    other.data[p].clone(),
                )
            })
    }
}

impl Index<(usize, usize)> for OpMatrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for OpMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Kronecker product `a ⊗ b`, first factor slowest.
pub fn tensor_product(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    let (rb, cb) = (b.rows, b.cols);
    let mut out = OpMatrix::zeros(a.rows * rb, a.cols * cb);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    let y = &b[(k, l)];
                    if !y.is_zero() {
                        out[(i * rb + k, j * cb + l)] = x * y;
                    }
                }
            }
        }
    }
    out
}

/// Kronecker product of vectors, first factor slowest.
pub fn tensor_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Trace over the leading (slow) legs of dimensions `aux_dims`, keeping the
/// trailing leg of dimension `keep_dim`.
pub fn partial_trace_aux(
    big: &OpMatrix,
    aux_dims: &[usize],
    keep_dim: usize,
) -> Result<OpMatrix, Error> {
    let aux: usize = aux_dims.iter().product();
    if !big.is_square() || big.rows != aux * keep_dim {
        return Err(Error::Dimension(format!(
            "partial trace: {}x{} matrix is not ({}·{}) square",
            big.rows, big.cols, aux, keep_dim
        )));
    }
    let mut out = OpMatrix::zeros(keep_dim, keep_dim);
    for alpha in 0..aux {
        let off = alpha * keep_dim;
        for x in 0..keep_dim {
            for y in 0..keep_dim {
                let v = &big[(off + x, off + y)];
                if !v.is_zero() {
                    out[(x, y)] += v;
                }
            }
        }
    }
    Ok(out)
}

/// Exact Gauss–Jordan inverse; a singular input yields [`Error::Singular`].
pub fn invert(a: &OpMatrix) -> Result<OpMatrix, Error> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "cannot invert {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = OpMatrix::identity(n);
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !m[(r, c)].is_zero())
            .ok_or(Error::Singular)?;
        if p != c {
            for k in 0..n {
                m.data.swap(p * n + k, c * n + k);
                inv.data.swap(p * n + k, c * n + k);
            }
        }
        let piv = m[(c, c)].recip()?;
        for k in 0..n {
            if !m[(c, k)].is_zero() {
                m[(c, k)] = &m[(c, k)] * &piv;
            }
            if !inv[(c, k)].is_zero() {
                inv[(c, k)] = &inv[(c, k)] * &piv;
            }
        }
        for r in 0..n {
            if r == c || m[(r, c)].is_zero() {
                continue;
            }
            let f = m[(r, c)].clone();
            for k in 0..n {
                if !m[(c, k)].is_zero() {
                    let d = &f * &m[(c, k)];
                    m[(r, k)] -= &d;
                }
                if !inv[(c, k)].is_zero() {
                    let d = &f * &inv[(c, k)];
                    inv[(r, k)] -= &d;
                }
            }
        }
    }
    Ok(inv)
}

/// Rectangular arrangement of equally sized square operator blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    block_rows: usize,
    block_cols: usize,
    inner: usize,
    blocks: Vec<OpMatrix>,
}

impl BlockGrid {
    pub fn new(
        block_rows: usize,
        block_cols: usize,
        inner: usize,
        blocks: Vec<OpMatrix>,
    ) -> Result<Self, Error> {
        if blocks.len() != block_rows * block_cols {
            return Err(Error::Dimension("wrong number of blocks".into()));
        }
        if blocks
            .iter()
            .any(|b| b.rows() != inner || b.cols() != inner)
        {
            return Err(Error::Dimension(
                "blocks must share the inner dimension".into(),
            ));
        }
        Ok(BlockGrid {
            block_rows,
            block_cols,
            inner,
            blocks,
        })
    }

    pub fn from_fn(
        block_rows: usize,
        block_cols: usize,
        inner: usize,
        mut f: impl FnMut(usize, usize) -> OpMatrix,
    ) -> Result<Self, Error> {
        let mut blocks = Vec::with_capacity(block_rows * block_cols);
        for i in 0..block_rows {
            for j in 0..block_cols {
                blocks.push(f(i, j));
            }
        }
        Self::new(block_rows, block_cols, inner, blocks)
    }

    pub fn zeros(block_rows: usize, block_cols: usize, inner: usize) -> Self {
        BlockGrid {
            block_rows,
            block_cols,
            inner,
            blocks: vec![OpMatrix::zeros(inner, inner); block_rows * block_cols],
        }
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    /// Block `(i, j)`, 0-based.
    pub fn block(&self, i: usize, j: usize) -> &OpMatrix {
        &self.blocks[i * self.block_cols + j]
    }

    pub fn block_mut(&mut self, i: usize, j: usize) -> &mut OpMatrix {
        &mut self.blocks[i * self.block_cols + j]
    }

    pub fn blocks(&self) -> &[OpMatrix] {
        &self.blocks
    }

    pub fn scale(&self, s: &Scalar) -> BlockGrid {
        BlockGrid {
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, rhs: &BlockGrid) -> Result<BlockGrid, Error> {
        if (self.block_rows, self.block_cols, self.inner)
            != (rhs.block_rows, rhs.block_cols, rhs.inner)
        {
            return Err(Error::Dimension("block grid shape mismatch".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(BlockGrid {
            blocks,
            ..self.clone()
        })
    }

    /// Block `(i, j)` becomes rows `i·inner..` and columns `j·inner..`.
    pub fn flatten(&self) -> OpMatrix {
        let d = self.inner;
        OpMatrix::from_fn(self.block_rows * d, self.block_cols * d, |r, c| {
            self.block(r / d, c / d)[(r % d, c % d)].clone()
        })
    }

    pub fn unflatten(
        m: &OpMatrix,
        block_rows: usize,
        block_cols: usize,
        inner: usize,
    ) -> Result<Self, Error> {
        if m.rows() != block_rows * inner || m.cols() != block_cols * inner {
            return Err(Error::Dimension(
                "flattened matrix has the wrong shape".into(),
            ));
        }
        Self::from_fn(block_rows, block_cols, inner, |i, j| {
            m.slice(i * inner, inner, j * inner, inner)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn unit_tensor_position() {
        // E_11 ⊗ E_22 on C^2 ⊗ C^2: single 1 at 1-based (2,2).
        let m = tensor_product(&OpMatrix::unit(2, 0, 0), &OpMatrix::unit(2, 1, 1));
        assert_eq!(m.nonzeros(), 1);
        assert_eq!(m[(1, 1)], s(1));
    }

    #[test]
    fn identity_tensor() {
        assert_eq!(
            tensor_product(&OpMatrix::identity(2), &OpMatrix::identity(3)),
            OpMatrix::identity(6)
        );
    }

    #[test]
    fn diagonal_inverse() {
        let d = OpMatrix::diagonal(&[Scalar::frac(2, 3).unwrap(), s(5)]);
        let expect =
            OpMatrix::diagonal(&[Scalar::frac(3, 2).unwrap(), Scalar::frac(1, 5).unwrap()]);
        assert_eq!(invert(&d).unwrap(), expect);
        assert_eq!(
            invert(&OpMatrix::identity(4)).unwrap(),
            OpMatrix::identity(4)
        );
    }

    #[test]
    fn singular_is_reported() {
        let m = OpMatrix::from_rows(vec![vec![s(1), s(2)], vec![s(2), s(4)]]).unwrap();
        assert_eq!(invert(&m), Err(Error::Singular));
    }

    #[test]
    fn trace_of_swap_is_identity() {
        let mut p = OpMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                p[(i * 2 + j, j * 2 + i)] = s(1);
            }
        }
        assert_eq!(
            partial_trace_aux(&p, &[2], 2).unwrap(),
            OpMatrix::identity(2)
        );
    }

    #[test]
    fn partial_trace_shape_checked() {
        assert!(partial_trace_aux(&OpMatrix::identity(5), &[2], 2).is_err());
    }

    #[test]
    fn block_flatten_roundtrip() {
        let g = BlockGrid::from_fn(2, 3, 2, |i, j| {
            OpMatrix::from_fn(2, 2, |r, c| s((i * 100 + j * 10 + r * 2 + c) as i64))
        })
        .unwrap();
        let f = g.flatten();
        assert_eq!(f.rows(), 4);
        assert_eq!(f.cols(), 6);
        assert_eq!(BlockGrid::unflatten(&f, 2, 3, 2).unwrap(), g);
    }
}
