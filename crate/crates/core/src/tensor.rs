//! Sparse elements of `A⊗A` and `A⊗A⊗A`, the bimodule actions on `A⊗A`, and
//! the comultiplication `a -> a x` induced by a tensor `x`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::{Element, FinDimAlgebra, Functional};
use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, Matrix, SparseVec};
use crate::scalar::Field;

/// `Σ c_{αβ} b_α⊗b_β`
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor2<F: Field> {
    dim: usize,
    coeffs: BTreeMap<(usize, usize), F>,
}

/// `Σ c_{αβγ} b_α⊗b_β⊗b_γ`
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor3<F: Field> {
    dim: usize,
    coeffs: BTreeMap<(usize, usize, usize), F>,
}

impl<F: Field> fmt::Debug for Tensor2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|((a, b), c)| format!("{c}*b{a}⊗b{b}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<F: Field> fmt::Debug for Tensor3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3({} terms)", self.coeffs.len())
    }
}

fn add_entry<K: Ord, F: Field>(map: &mut BTreeMap<K, F>, key: K, c: &F) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
    }
}

impl<F: Field> Tensor2<F> {
    pub fn zero(dim: usize) -> Self {
        Tensor2 {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut t = Self::zero(dim);
        for (a, b, c) in terms {
            t.add_term(a, b, &c);
        }
        t
    }

    /// `a⊗b`
    pub fn simple(a: &Element<F>, b: &Element<F>) -> Self {
        let mut t = Self::zero(a.dim());
        for (i, x) in a.coeffs().iter() {
            for (j, y) in b.coeffs().iter() {
                t.add_term(i, j, &(x.clone() * y));
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: &F) {
        debug_assert!(a < self.dim && b < self.dim);
        add_entry(&mut self.coeffs, (a, b), c);
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&F> {
        self.coeffs.get(&(a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.coeffs.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b, c) in other.iter() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b, c) in other.iter() {
            out.add_term(a, b, &-c.clone());
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        Tensor2::from_terms(self.dim, self.iter().map(|(a, b, c)| (a, b, c.clone() * s)))
    }

    /// Flattened coordinates, index `α * dim + β`.
    pub fn to_sparse(&self) -> SparseVec<F> {
        let mut v = SparseVec::new();
        for (a, b, c) in self.iter() {
            v.add_at(a * self.dim + b, c);
        }
        v
    }

    /// Image under `f⊗g` for linear maps given on basis elements.
    pub fn map(
        &self,
        target_dim: usize,
        f: impl Fn(usize) -> Element<F>,
        g: impl Fn(usize) -> Element<F>,
    ) -> Self {
        let mut out = Tensor2::zero(target_dim);
        for (a, b, c) in self.iter() {
            let fa = f(a);
            let gb = g(b);
            for (i, x) in fa.coeffs().iter() {
                for (j, y) in gb.coeffs().iter() {
                    out.add_term(i, j, &(c.clone() * x * y));
                }
            }
        }
        out
    }
}

impl<F: Field> Tensor3<F> {
    pub fn zero(dim: usize) -> Self {
        Tensor3 {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: usize, v: &F) {
        add_entry(&mut self.coeffs, (a, b, c), v);
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Option<&F> {
        self.coeffs.get(&(a, b, c))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &F)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `a · t`, acting on the first tensor factor.
pub fn act_left<F: Field>(alg: &FinDimAlgebra<F>, a: &Element<F>, t: &Tensor2<F>) -> Result<Tensor2<F>> {
    check_dim(alg.dim(), a.dim())?;
    check_dim(alg.dim(), t.dim())?;
    let mut out = Tensor2::zero(t.dim);
    for (alpha, beta, c) in t.iter() {
        for (i, ca) in a.coeffs().iter() {
            let s = ca.clone() * c;
            for (k, v) in alg.product(i, alpha).iter() {
                out.add_term(k, beta, &(s.clone() * v));
            }
        }
    }
    Ok(out)
}

/// `t · a`, acting on the second tensor factor.
pub fn act_right<F: Field>(alg: &FinDimAlgebra<F>, t: &Tensor2<F>, a: &Element<F>) -> Result<Tensor2<F>> {
    check_dim(alg.dim(), a.dim())?;
    check_dim(alg.dim(), t.dim())?;
    let mut out = Tensor2::zero(t.dim);
    for (alpha, beta, c) in t.iter() {
        for (j, ca) in a.coeffs().iter() {
            let s = ca.clone() * c;
            for (k, v) in alg.product(beta, j).iter() {
                out.add_term(alpha, k, &(s.clone() * v));
            }
        }
    }
    Ok(out)
}

/// Smallest basis index `α` with `b_α t != t b_α`, or `None` if `t` is
/// invariant. Invariance is linear in the acting element, so basis elements
/// suffice.
pub fn is_invariant<F: Field>(alg: &FinDimAlgebra<F>, t: &Tensor2<F>) -> Option<usize> {
    (0..alg.dim()).into_par_iter().find_first(|&alpha| {
        let b = alg.basis(alpha);
        act_left(alg, &b, t).unwrap() != act_right(alg, t, &b).unwrap()
    })
}

/// `Δ(a) = a x`.
pub fn delta_of<F: Field>(alg: &FinDimAlgebra<F>, x: &Tensor2<F>, a: &Element<F>) -> Result<Tensor2<F>> {
    act_left(alg, a, x)
}

/// The two sides `(Δ⊗id)(x)` and `(id⊗Δ)(x)` where `Δ(b) = b x`.
pub fn coassociativity_sides<F: Field>(alg: &FinDimAlgebra<F>, x: &Tensor2<F>) -> (Tensor3<F>, Tensor3<F>) {
    let d = x.dim;
    let mut left = Tensor3::zero(d);
    let mut right = Tensor3::zero(d);
    for (alpha, beta, c) in x.iter() {
        for (gamma, delta, c2) in x.iter() {
            let s = c.clone() * c2;
            // Δ(b_α)⊗b_β  =  Σ (b_α b_γ)⊗b_δ⊗b_β
            for (k, v) in alg.product(alpha, gamma).iter() {
                left.add_term(k, delta, beta, &(s.clone() * v));
            }
            // b_α⊗Δ(b_β)  =  Σ b_α⊗(b_β b_γ)⊗b_δ
            for (k, v) in alg.product(beta, gamma).iter() {
                right.add_term(alpha, k, delta, &(s.clone() * v));
            }
        }
    }
    (left, right)
}

/// Compares `(Δ⊗id)Δ(1)` and `(id⊗Δ)Δ(1)` exactly and returns the smallest
/// index triple where they differ. For invariant `x` this certifies
/// coassociativity on all of `A`.
pub fn check_coassociativity<F: Field>(alg: &FinDimAlgebra<F>, x: &Tensor2<F>) -> Option<(usize, usize, usize)> {
    let (left, right) = coassociativity_sides(alg, x);
    let mut keys: Vec<_> = left
        .coeffs
        .keys()
        .chain(right.coeffs.keys())
        .copied()
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().find(|k| left.coeffs.get(k) != right.coeffs.get(k))
}

/// Matrix of `a -> a x` with rows indexed by `α * d + β` and one column per
/// basis element of `A`.
pub fn delta_matrix<F: Field>(alg: &FinDimAlgebra<F>, x: &Tensor2<F>) -> Matrix<F> {
    let d = alg.dim();
    let cols: Vec<Vec<F>> = (0..d)
        .map(|a| {
            act_left(alg, &alg.basis(a), x)
                .unwrap()
                .to_sparse()
                .to_dense(alg.ctx(), d * d)
        })
        .collect();
    Matrix::from_columns(alg.ctx(), d * d, &cols)
}

/// Rank of `a -> a x`, computed by sparse elimination on the images of the
/// basis.
pub fn delta_rank<F: Field>(alg: &FinDimAlgebra<F>, x: &Tensor2<F>) -> usize {
    let rows: Vec<SparseVec<F>> = (0..alg.dim())
        .into_par_iter()
        .map(|a| act_left(alg, &alg.basis(a), x).unwrap().to_sparse())
        .collect();
    sparse_rank(&rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `(f⊗id)t` for `Left`, `(id⊗f)t` for `Right`.
pub fn apply_functional<F: Field>(
    side: Side,
    f: &Functional<F>,
    t: &Tensor2<F>,
) -> Result<Element<F>> {
    check_dim(t.dim(), f.dim())?;
    let mut out = SparseVec::new();
    for (a, b, c) in t.iter() {
        let (evaluated, kept) = match side {
            Side::Left => (a, b),
            Side::Right => (b, a),
        };
        let v = f.value(evaluated);
        if !v.is_zero() {
            out.add_at(kept, &(v.clone() * c));
        }
    }
    Ok(Element::from_sparse(t.dim(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{matrix_algebra, truncated_poly};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(&(), n)
    }

    // M2 basis: E11=0, E12=1, E21=2, E22=3
    fn m2() -> FinDimAlgebra<Rational> {
        matrix_algebra::<Rational>(&(), 2)
    }

    #[test]
    fn matrix_unit_actions() {
        let a = m2();
        let x = Tensor2::from_terms(4, [(0, 0, q(1)), (2, 1, q(1))]);
        let expected = Tensor2::from_terms(4, [(0, 1, q(1))]);
        assert_eq!(act_left(&a, &a.basis(1), &x).unwrap(), expected);
        assert_eq!(act_right(&a, &x, &a.basis(1)).unwrap(), expected);
        assert_eq!(act_left(&a, &a.one(), &x).unwrap(), x);
    }

    #[test]
    fn invariance_in_dual_numbers() {
        let a = truncated_poly::<Rational>(&(), 2);
        let y = Tensor2::from_terms(2, [(0, 1, q(1)), (1, 0, q(1))]);
        assert_eq!(is_invariant(&a, &y), None);
        assert_eq!(
            delta_of(&a, &y, &a.basis(1)).unwrap(),
            Tensor2::from_terms(2, [(1, 1, q(1))])
        );
        assert_eq!(delta_of(&a, &y, &a.one()).unwrap(), y);
        let t = Tensor2::from_terms(2, [(0, 1, q(1))]);
        assert_eq!(is_invariant(&a, &t), Some(1));
        assert_eq!(check_coassociativity(&a, &y), None);
        assert_eq!(delta_matrix(&a, &y).rank(), 2);
        assert_eq!(delta_rank(&a, &y), 2);

        // x(1⊗1) = x⊗1 but (1⊗1)x = 1⊗x: 1⊗1 is invariant only over k itself.
        let one_one = Tensor2::from_terms(2, [(0, 0, q(1))]);
        assert_eq!(is_invariant(&a, &one_one), Some(1));
        let k = truncated_poly::<Rational>(&(), 1);
        assert_eq!(is_invariant(&k, &Tensor2::from_terms(1, [(0, 0, q(1))])), None);
    }

    #[test]
    fn counit_functional() {
        let y = Tensor2::from_terms(2, [(0, 1, q(1)), (1, 0, q(1))]);
        let eps = Functional::new(vec![q(0), q(1)]);
        let one = Element::basis(2, 0, q(1));
        assert_eq!(apply_functional(Side::Left, &eps, &y).unwrap(), one);
        assert_eq!(apply_functional(Side::Right, &eps, &y).unwrap(), one);
        let zero = Functional::zero(&(), 2);
        assert!(apply_functional(Side::Left, &zero, &y).unwrap().is_zero());
    }

    #[test]
    fn matrix_diagonal_spread_delta() {
        let a = m2();
        // Σ_{t,s} E_ts ⊗ E_st
        let e = |t: usize, s: usize| 2 * t + s;
        let x = Tensor2::from_terms(
            4,
            (0..2).flat_map(|t| (0..2).map(move |s| (e(t, s), e(s, t), q(1)))),
        );
        assert_eq!(is_invariant(&a, &x), None);
        assert_eq!(
            delta_of(&a, &x, &a.basis(0)).unwrap(),
            Tensor2::from_terms(4, [(0, 0, q(1)), (1, 2, q(1))])
        );
        assert_eq!(check_coassociativity(&a, &x), None);
    }

    #[test]
    fn non_invariant_tensors() {
        let a = m2();
        let x = Tensor2::from_terms(4, [(0, 1, q(1))]);
        assert!(check_coassociativity(&a, &x).is_some());
        let single = Tensor2::from_terms(4, [(0, 0, q(1))]);
        assert_eq!(delta_matrix(&a, &single).rank(), 2);

        let k = matrix_algebra::<Rational>(&(), 1);
        let one = Tensor2::from_terms(1, [(0, 0, q(1))]);
        assert_eq!(check_coassociativity(&k, &one), None);
        assert_eq!(delta_rank(&k, &one), 1);
    }

    fn small_element(dim: usize) -> impl Strategy<Value = Element<Rational>> {
        prop::collection::vec(-2i64..=2, dim).prop_map(|v| {
            Element::from_dense(&v.into_iter().map(q).collect::<Vec<_>>())
        })
    }

    fn small_tensor(dim: usize) -> impl Strategy<Value = Tensor2<Rational>> {
        prop::collection::vec((0..dim, 0..dim, -2i64..=2), 0..6)
            .prop_map(move |v| Tensor2::from_terms(dim, v.into_iter().map(|(a, b, c)| (a, b, q(c)))))
    }

    fn nsy() -> FinDimAlgebra<Rational> {
        crate::families::nsy_algebra(&(), 2, 2, &[1, 2]).unwrap().algebra
    }

    proptest! {
        #[test]
        fn bimodule_axiom(a in small_element(9), b in small_element(9), t in small_tensor(9)) {
            let alg = nsy();
            let lhs = act_left(&alg, &a, &act_right(&alg, &t, &b).unwrap()).unwrap();
            let rhs = act_right(&alg, &act_left(&alg, &a, &t).unwrap(), &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_is_left_linear(a in small_element(9), b in small_element(9), t in small_tensor(9)) {
            let alg = nsy();
            let lhs = delta_of(&alg, &t, &alg.mul(&a, &b)).unwrap();
            let rhs = act_left(&alg, &a, &delta_of(&alg, &t, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn functional_commutes_with_right_action(
            f in prop::collection::vec(-2i64..=2, 9),
            t in small_tensor(9),
            a in small_element(9),
        ) {
            let alg = nsy();
            let f = Functional::new(f.into_iter().map(q).collect());
            let lhs = apply_functional(Side::Left, &f, &act_right(&alg, &t, &a).unwrap()).unwrap();
            let rhs = alg.mul(&apply_functional(Side::Left, &f, &t).unwrap(), &a);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
