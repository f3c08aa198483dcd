//! Radical, idempotent decomposition, Nakayama permutation and basic
//! reduction of a finite-dimensional algebra.

mod basic;
mod decompose;
mod nakayama;
mod radical;
mod witness;

pub use basic::{basic_reduction, BasicReduction};
pub use decompose::{canonical_decomposition, verify_decomposition, CanonicalDecomposition};
pub use nakayama::{
    duality_permutation, nakayama, verify_nakayama_duality, DualityCheck, NakayamaData,
};
pub use radical::{radical, RadicalData};
pub use witness::{iso_witnesses, IsoWitness};

pub(crate) use radical::radical_from_space;

use rand::Rng;

use crate::algebra::{Element, FinDimAlgebra};
use crate::linalg::{solve_linear, Matrix, Subspace};
use crate::scalar::{Field, GroundField};

/// Search budget per seeded sweep, as a multiple of the algebra dimension.
pub const BUDGET_FACTOR: usize = 32;

pub(crate) fn span<F: Field>(alg: &FinDimAlgebra<F>, elems: impl IntoIterator<Item = Element<F>>) -> Subspace<F> {
    let ctx = alg.ctx();
    Subspace::spanned_by(ctx, alg.dim(), elems.into_iter().map(|e| e.to_dense(ctx)))
}

pub(crate) fn span_dim<F: Field>(alg: &FinDimAlgebra<F>, elems: impl IntoIterator<Item = Element<F>>) -> usize {
    span(alg, elems).dim()
}

pub(crate) fn basis_elements<F: Field>(space: &Subspace<F>) -> Vec<Element<F>> {
    space.basis().iter().map(|v| Element::from_dense(v)).collect()
}

/// Echelon basis of `e·A·f`.
pub fn corner<F: Field>(alg: &FinDimAlgebra<F>, e: &Element<F>, f: &Element<F>) -> Vec<Element<F>> {
    basis_elements(&corner_space(alg, e, f))
}

pub fn corner_space<F: Field>(alg: &FinDimAlgebra<F>, e: &Element<F>, f: &Element<F>) -> Subspace<F> {
    span(alg, (0..alg.dim()).map(|k| alg.mul(&alg.mul_basis_right(e, k), f)))
}

/// Whether `e·A·f` is nonzero.
pub fn corner_nonzero<F: Field>(alg: &FinDimAlgebra<F>, e: &Element<F>, f: &Element<F>) -> bool {
    (0..alg.dim()).any(|k| !alg.mul(&alg.mul_basis_right(e, k), f).is_zero())
}

/// Echelon basis of the right ideal `e·A`.
pub fn right_ideal<F: Field>(alg: &FinDimAlgebra<F>, e: &Element<F>) -> Vec<Element<F>> {
    basis_elements(&span(alg, (0..alg.dim()).map(|k| alg.mul_basis_right(e, k))))
}

/// Echelon basis of the left ideal `A·f`.
pub fn left_ideal<F: Field>(alg: &FinDimAlgebra<F>, f: &Element<F>) -> Vec<Element<F>> {
    basis_elements(&span(alg, (0..alg.dim()).map(|k| alg.mul_basis_left(k, f))))
}

/// Coefficients `c` with `Σ c_k images[k] = target`, if any.
pub(crate) fn solve_in_span<F: Field>(ctx: &F::Ctx, images: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    if images.is_empty() {
        return target.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let a = Matrix::from_columns(ctx, target.len(), images);
    let b = Matrix::from_columns(ctx, target.len(), &[target.to_vec()]);
    solve_linear(&a, &b).ok().map(|s| s.particular.column(0))
}

pub(crate) fn combine<F: Field>(dim: usize, coeffs: &[F], elems: &[Element<F>]) -> Element<F> {
    let mut out = Element::zero(dim);
    for (c, e) in coeffs.iter().zip(elems) {
        if !c.is_zero() {
            out.add_scaled(c, e);
        }
    }
    out
}

/// The `attempt`-th candidate of a sweep over `basis`: the basis itself,
/// then seeded random combinations.
pub(crate) fn sweep_candidate<F: GroundField, R: Rng>(
    ctx: &F::Ctx,
    dim: usize,
    basis: &[Element<F>],
    attempt: usize,
    rng: &mut R,
) -> Element<F> {
    if attempt < basis.len() {
        return basis[attempt].clone();
    }
    let coeffs: Vec<F> = basis.iter().map(|_| F::sample(ctx, rng)).collect();
    combine(dim, &coeffs, basis)
}
