//! Dense and sparse exact linear algebra.
//!
//! Elimination always picks the first nonzero entry as pivot, so echelon
//! forms (and everything derived from them) are reproducible.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system has no solution")]
    Infeasible,
    #[error("matrix is singular (rank {rank} < {dim})")]
    Singular { rank: usize, dim: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Sparse vector keyed by coordinate index; never stores zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec<F> {
    entries: BTreeMap<usize, F>,
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn from_dense(v: &[F]) -> Self {
        let entries = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        SparseVec { entries }
    }

    pub fn unit(index: usize, one: F) -> Self {
        let mut v = SparseVec::new();
        v.add_at(index, &one);
        v
    }

    pub fn get(&self, i: usize) -> Option<&F> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn first(&self) -> Option<(usize, &F)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn add_at(&mut self, i: usize, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.entries.remove(&i);
                }
            }
            None => {
                self.entries.insert(i, c.clone());
            }
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, scale: &F, other: &SparseVec<F>) {
        if scale.is_zero() {
            return;
        }
        for (i, c) in other.iter() {
            let term = scale.clone() * c;
            self.add_at(i, &term);
        }
    }

    pub fn scaled(&self, scale: &F) -> SparseVec<F> {
        if scale.is_zero() {
            return SparseVec::new();
        }
        let entries = self
            .entries
            .iter()
            .map(|(i, c)| (*i, c.clone() * scale))
            .collect();
        SparseVec { entries }
    }

    pub fn to_dense(&self, ctx: &F::Ctx, dim: usize) -> Vec<F> {
        let mut out = vec![F::zero(ctx); dim];
        for (i, c) in self.iter() {
            out[i] = c.clone();
        }
        out
    }

    pub fn dot_dense(&self, dense: &[F], ctx: &F::Ctx) -> F {
        let mut acc = F::zero(ctx);
        for (i, c) in self.iter() {
            acc += &(c.clone() * &dense[i]);
        }
        acc
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|c| c.to_string()).collect())
            .collect();
        write!(f, "Matrix{rows:?}")
    }
}

/// Particular solution plus homogeneous kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution<F: Field> {
    pub particular: Matrix<F>,
    pub kernel: Vec<Vec<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(ctx); rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, F::one(ctx));
        }
        m
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
            ctx: ctx.clone(),
        })
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(ctx: &F::Ctx, rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(ctx, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_i64_rows(ctx: &F::Ctx, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| F::from_i64(ctx, x)).collect())
            .collect();
        Self::from_rows(ctx, rows).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += &(a.clone() * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = F::zero(&self.ctx);
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a.clone() * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c).clone() * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c).clone() - factor.clone() * pv;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Solves `self * X = b`.
    pub fn solve(&self, b: &Matrix<F>) -> Result<Solution<F>, LinalgError> {
        solve_linear(self, b)
    }

    pub fn invert(&self) -> Result<Matrix<F>, LinalgError> {
        invert(self)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }
}

fn kernel_from_rref<F: Field>(r: &Matrix<F>, pivots: &[usize]) -> Vec<Vec<F>> {
    let ctx = r.ctx();
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; r.cols()];
    for &p in pivots {
        is_pivot[p] = true;
    }
    for free in (0..r.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(ctx); r.cols()];
        v[free] = F::one(ctx);
        for (row, &p) in pivots.iter().enumerate() {
            let coeff = r.get(row, free);
            if !coeff.is_zero() {
                v[p] = -coeff.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Exact rank.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}

/// Solves `a * X = b` exactly. Returns one particular solution together with
/// a basis of the kernel of `a`, or `Infeasible`.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Solution<F>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let ctx = a.ctx().clone();
    let n = a.cols();
    let k = b.cols();
    let mut aug = Matrix::zeros(&ctx, a.rows(), n + k);
    for r in 0..a.rows() {
        for c in 0..n {
            aug.set(r, c, a.get(r, c).clone());
        }
        for c in 0..k {
            aug.set(r, n + c, b.get(r, c).clone());
        }
    }
    let (red, pivots) = aug.rref();
    if pivots.iter().any(|&p| p >= n) {
        return Err(LinalgError::Infeasible);
    }
    let mut particular = Matrix::zeros(&ctx, n, k);
    for (row, &p) in pivots.iter().enumerate() {
        for c in 0..k {
            particular.set(p, c, red.get(row, n + c).clone());
        }
    }
    let (ra, pa) = a.rref();
    Ok(Solution {
        particular,
        kernel: kernel_from_rref(&ra, &pa),
    })
}

/// Exact inverse of a square matrix.
pub fn invert<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let id = Matrix::identity(m.ctx(), n);
    match solve_linear(m, &id) {
        Ok(sol) if sol.kernel.is_empty() => Ok(sol.particular),
        _ => Err(LinalgError::Singular {
            rank: m.rank(),
            dim: n,
        }),
    }
}

/// Rank of a family of sparse row vectors, by sparse elimination.
pub fn sparse_rank<F: Field>(rows: &[SparseVec<F>]) -> usize {
    // pivot column -> reduced row with leading entry 1 at that column
    let mut echelon: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
    for row in rows {
        let mut v = row.clone();
        loop {
            let Some((lead, c)) = v.first().map(|(i, c)| (i, c.clone())) else {
                break;
            };
            match echelon.get(&lead) {
                Some(p) => {
                    let neg = -c;
                    v.add_scaled(&neg, p);
                }
                None => {
                    let inv = c.inv().expect("nonzero lead");
                    echelon.insert(lead, v.scaled(&inv));
                    break;
                }
            }
        }
    }
    echelon.len()
}

/// Kernel of the matrix whose rows are `rows` (each of length `cols`). Rows
/// are folded into an echelon basis first, so long redundant systems are
/// cheap.
pub fn kernel_of_rows<F: Field>(
    ctx: &F::Ctx,
    cols: usize,
    rows: impl IntoIterator<Item = Vec<F>>,
) -> Vec<Vec<F>> {
    let mut space = Subspace::zero(ctx, cols);
    for r in rows {
        if space.dim() == cols {
            break;
        }
        space.insert(r);
    }
    let (basis, pivots) = (space.basis(), space.pivots());
    let mut out = Vec::new();
    for free in space.complement_indices() {
        let mut v = vec![F::zero(ctx); cols];
        v[free] = F::one(ctx);
        for (row, &p) in basis.iter().zip(pivots) {
            if !row[free].is_zero() {
                v[p] = -row[free].clone();
            }
        }
        out.push(v);
    }
    out
}

/// A subspace of `F^n`, kept as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
    ctx: F::Ctx,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ctx: &F::Ctx, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
            ctx: ctx.clone(),
        }
    }

    pub fn spanned_by<I>(ctx: &F::Ctx, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<F>>,
    {
        let mut s = Self::zero(ctx, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Echelon basis, ordered by pivot column.
    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; the corresponding unit vectors span a
    /// complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }

    /// Residual of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &(f.clone() * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(Field::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let mut r = self.reduce(&v);
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c *= &inv;
            }
        }
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(f.clone() * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }
}
