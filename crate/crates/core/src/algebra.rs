//! Finite-dimensional unital associative algebras given by structure
//! constants, their elements and linear functionals.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::scalar::Field;

/// An element of an algebra, as sparse coordinates in its basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element<F: Field> {
    dim: usize,
    coeffs: SparseVec<F>,
}

impl<F: Field> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|(i, c)| format!("{c}*b{i}")).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<F: Field> Element<F> {
    pub fn zero(dim: usize) -> Self {
        Element {
            dim,
            coeffs: SparseVec::new(),
        }
    }

    pub fn from_sparse(dim: usize, coeffs: SparseVec<F>) -> Self {
        debug_assert!(coeffs.max_index().is_none_or(|m| m < dim));
        Element { dim, coeffs }
    }

    pub fn from_dense(v: &[F]) -> Self {
        Element {
            dim: v.len(),
            coeffs: SparseVec::from_dense(v),
        }
    }

    pub fn basis(dim: usize, index: usize, one: F) -> Self {
        Element {
            dim,
            coeffs: SparseVec::unit(index, one),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &SparseVec<F> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_dense(&self, ctx: &F::Ctx) -> Vec<F> {
        self.coeffs.to_dense(ctx, self.dim)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.coeffs.clone();
        for (i, v) in other.coeffs.iter() {
            c.add_at(i, v);
        }
        Element {
            dim: self.dim,
            coeffs: c,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut c = self.coeffs.clone();
        for (i, v) in other.coeffs.iter() {
            c.add_at(i, &-v.clone());
        }
        Element {
            dim: self.dim,
            coeffs: c,
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Element {
            dim: self.dim,
            coeffs: self.coeffs.scaled(s),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &F, other: &Self) {
        self.coeffs.add_scaled(s, &other.coeffs);
    }
}

/// A linear functional, stored by its values on the basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Functional<F: Field> {
    values: Vec<F>,
}

impl<F: Field> fmt::Debug for Functional<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|c| c.to_string()).collect();
        write!(f, "Functional{v:?}")
    }
}

impl<F: Field> Functional<F> {
    pub fn new(values: Vec<F>) -> Self {
        Functional { values }
    }

    pub fn zero(ctx: &F::Ctx, dim: usize) -> Self {
        Functional {
            values: vec![F::zero(ctx); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &F {
        &self.values[i]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Field::is_zero)
    }

    pub fn eval(&self, ctx: &F::Ctx, a: &Element<F>) -> F {
        a.coeffs.dot_dense(&self.values, ctx)
    }
}

/// A finite-dimensional unital associative algebra over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct FinDimAlgebra<F: Field> {
    ctx: F::Ctx,
    labels: Vec<String>,
    /// `table[i * dim + j]` holds the coordinates of `b_i * b_j`.
    table: Vec<SparseVec<F>>,
    unit: Element<F>,
}

impl<F: Field> fmt::Debug for FinDimAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinDimAlgebra")
            .field("dim", &self.dim())
            .field("labels", &self.labels)
            .finish()
    }
}

impl<F: Field> FinDimAlgebra<F> {
    /// Builds an algebra from `(i, j, k, c)` entries meaning `b_i b_j` has
    /// coefficient `c` at `b_k`. Repeated entries are summed. Neither
    /// associativity nor the unit law is checked here.
    pub fn from_entries(
        ctx: &F::Ctx,
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, F)>,
        unit: Vec<F>,
    ) -> Result<Self> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if unit.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: unit.len(),
            });
        }
        let mut table = vec![SparseVec::new(); d * d];
        for (i, j, k, c) in entries {
            for index in [i, j, k] {
                if index >= d {
                    return Err(Error::IndexOutOfRange { index, bound: d });
                }
            }
            table[i * d + j].add_at(k, &c);
        }
        Ok(FinDimAlgebra {
            ctx: ctx.clone(),
            labels,
            table,
            unit: Element::from_dense(&unit),
        })
    }

    /// Builds an algebra from a full product table (`table[i*d+j] = b_i b_j`).
    pub fn from_table(
        ctx: &F::Ctx,
        labels: Vec<String>,
        table: Vec<SparseVec<F>>,
        unit: Element<F>,
    ) -> Self {
        let d = labels.len();
        assert_eq!(table.len(), d * d);
        assert_eq!(unit.dim(), d);
        FinDimAlgebra {
            ctx: ctx.clone(),
            labels,
            table,
            unit,
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn zero_scalar(&self) -> F {
        F::zero(&self.ctx)
    }

    pub fn one_scalar(&self) -> F {
        F::one(&self.ctx)
    }

    pub fn scalar(&self, n: i64) -> F {
        F::from_i64(&self.ctx, n)
    }

    /// Coordinates of `b_i b_j`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim() + j]
    }

    /// Nonzero structure constants `(i, j, k, c)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &F)> + '_ {
        let d = self.dim();
        self.table
            .iter()
            .enumerate()
            .flat_map(move |(ij, v)| v.iter().map(move |(k, c)| (ij / d, ij % d, k, c)))
    }

    pub fn one(&self) -> Element<F> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Element<F> {
        Element::zero(self.dim())
    }

    pub fn basis(&self, i: usize) -> Element<F> {
        Element::basis(self.dim(), i, self.one_scalar())
    }

    pub fn element(&self, dense: &[F]) -> Element<F> {
        debug_assert_eq!(dense.len(), self.dim());
        Element::from_dense(dense)
    }

    /// Product of two elements; both must have this algebra's dimension.
    pub fn multiply(&self, a: &Element<F>, b: &Element<F>) -> Result<Element<F>> {
        for x in [a, b] {
            if x.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: x.dim(),
                });
            }
        }
        Ok(self.mul(a, b))
    }

    /// Unchecked product.
    pub fn mul(&self, a: &Element<F>, b: &Element<F>) -> Element<F> {
        let d = self.dim();
        let mut out = SparseVec::new();
        for (i, ca) in a.coeffs.iter() {
            for (j, cb) in b.coeffs.iter() {
                let s = ca.clone() * cb;
                out.add_scaled(&s, &self.table[i * d + j]);
            }
        }
        Element::from_sparse(d, out)
    }

    /// `b_i * a`
    pub fn mul_basis_left(&self, i: usize, a: &Element<F>) -> Element<F> {
        let d = self.dim();
        let mut out = SparseVec::new();
        for (j, c) in a.coeffs.iter() {
            out.add_scaled(c, &self.table[i * d + j]);
        }
        Element::from_sparse(d, out)
    }

    /// `a * b_j`
    pub fn mul_basis_right(&self, a: &Element<F>, j: usize) -> Element<F> {
        let d = self.dim();
        let mut out = SparseVec::new();
        for (i, c) in a.coeffs.iter() {
            out.add_scaled(c, &self.table[i * d + j]);
        }
        Element::from_sparse(d, out)
    }

    pub fn pow(&self, a: &Element<F>, mut k: u64) -> Element<F> {
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Matrix of `x -> a x`; column `c` holds `a b_c`.
    pub fn left_mul_matrix(&self, a: &Element<F>) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim())
            .map(|c| self.mul_basis_right(a, c).to_dense(&self.ctx))
            .collect();
        Matrix::from_columns(&self.ctx, self.dim(), &cols)
    }

    /// Matrix of `x -> x a`; column `c` holds `b_c a`.
    pub fn right_mul_matrix(&self, a: &Element<F>) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim())
            .map(|c| self.mul_basis_left(c, a).to_dense(&self.ctx))
            .collect();
        Matrix::from_columns(&self.ctx, self.dim(), &cols)
    }

    pub fn is_invertible(&self, a: &Element<F>) -> bool {
        self.left_mul_matrix(a).rank() == self.dim()
    }

    /// Two-sided inverse, if any.
    pub fn inverse(&self, a: &Element<F>) -> Option<Element<F>> {
        let m = self.left_mul_matrix(a);
        let one = Matrix::from_columns(&self.ctx, self.dim(), &[self.one().to_dense(&self.ctx)]);
        let sol = crate::linalg::solve_linear(&m, &one).ok()?;
        if !sol.kernel.is_empty() {
            return None;
        }
        Some(Element::from_dense(&sol.particular.column(0)))
    }

    pub fn is_idempotent(&self, e: &Element<F>) -> bool {
        self.mul(e, e) == *e
    }

    /// Returns the lexicographically smallest triple `(i, j, k)` with
    /// `(b_i b_j) b_k != b_i (b_j b_k)`, or `None` if associative.
    pub fn check_associativity(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        (0..d).into_par_iter().find_map_first(|i| {
            for j in 0..d {
                let ij = Element::from_sparse(d, self.table[i * d + j].clone());
                for k in 0..d {
                    let left = self.mul_basis_right(&ij, k);
                    let jk = Element::from_sparse(d, self.table[j * d + k].clone());
                    let right = self.mul_basis_left(i, &jk);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
            None
        })
    }

    /// Returns the smallest `i` with `1 b_i != b_i` or `b_i 1 != b_i`.
    pub fn check_unit(&self) -> Option<usize> {
        (0..self.dim()).find(|&i| {
            let b = self.basis(i);
            self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b
        })
    }

    /// Associativity and unit, as an error with witness.
    pub fn validate(&self) -> Result<()> {
        if let Some((i, j, k)) = self.check_associativity() {
            return Err(Error::InvalidAlgebra(format!(
                "associativity fails at basis triple ({i}, {j}, {k})"
            )));
        }
        if let Some(i) = self.check_unit() {
            return Err(Error::InvalidAlgebra(format!(
                "unit law fails at basis element {i}"
            )));
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// The same algebra in the basis `b'_k = b_{perm[k]}`.
    pub fn permute_basis(&self, perm: &[usize]) -> Self {
        let d = self.dim();
        assert_eq!(perm.len(), d);
        let mut inv = vec![0; d];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let mut table = vec![SparseVec::new(); d * d];
        for (i, j, k, c) in self.entries() {
            table[inv[i] * d + inv[j]].add_at(inv[k], c);
        }
        let mut unit = SparseVec::new();
        for (k, c) in self.unit.coeffs.iter() {
            unit.add_at(inv[k], c);
        }
        FinDimAlgebra {
            ctx: self.ctx.clone(),
            labels,
            table,
            unit: Element::from_sparse(d, unit),
        }
    }

    /// Replaces one structure constant; used to build corrupted inputs.
    pub fn with_entry(&self, i: usize, j: usize, k: usize, c: F) -> Self {
        let mut out = self.clone();
        let d = self.dim();
        let mut v = out.table[i * d + j].to_dense(&self.ctx, d);
        v[k] = c;
        out.table[i * d + j] = SparseVec::from_dense(&v);
        out
    }

    /// The same algebra with a different unit vector; used in tests.
    pub fn with_unit(&self, unit: Element<F>) -> Self {
        let mut out = self.clone();
        out.unit = unit;
        out
    }
}
