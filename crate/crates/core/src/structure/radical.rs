use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{basis_elements, span};
use crate::algebra::{Element, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of_rows, Matrix, Subspace};
use crate::scalar::{Field, GroundField};

/// The Jacobson radical `J`, with an echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalData<F: Field> {
    pub basis: Vec<Element<F>>,
    /// Least `k` with `J^k = 0`.
    pub nilpotency_index: usize,
    space: Subspace<F>,
}

impl<F: Field> RadicalData<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }

    pub fn contains(&self, a: &Element<F>) -> bool {
        self.space.contains(&a.to_dense(self.space.ctx()))
    }
}

/// Computes `J` by the trace form in characteristic 0 or `p > dim A`, and as
/// the kernel of a Frobenius power for commutative algebras over small prime
/// fields.
pub fn radical<F: GroundField>(alg: &FinDimAlgebra<F>) -> Result<RadicalData<F>> {
    let d = alg.dim();
    let ch = F::characteristic(alg.ctx());
    let space = if ch.is_zero() || ch > BigUint::from(d) {
        trace_form_kernel(alg)
    } else if alg.is_commutative() {
        frobenius_kernel(alg, ch.to_u64().expect("characteristic bounded by dimension"))
    } else {
        return Err(Error::UnsupportedField(format!(
            "characteristic {ch} does not exceed the dimension {d} and the algebra is not commutative"
        )));
    };
    radical_from_space(alg, space)
}

fn trace_form_kernel<F: Field>(alg: &FinDimAlgebra<F>) -> Subspace<F> {
    let ctx = alg.ctx();
    let d = alg.dim();
    // t_k = trace of left multiplication by b_k
    let traces: Vec<F> = (0..d)
        .map(|k| {
            let mut t = F::zero(ctx);
            for m in 0..d {
                if let Some(c) = alg.product(k, m).get(m) {
                    t += c;
                }
            }
            t
        })
        .collect();
    let mut gram = vec![vec![F::zero(ctx); d]; d];
    for (i, j, k, c) in alg.entries() {
        gram[j][i] += &(c.clone() * &traces[k]);
    }
    let kernel = kernel_of_rows(ctx, d, gram);
    Subspace::spanned_by(ctx, d, kernel)
}

fn frobenius_kernel<F: Field>(alg: &FinDimAlgebra<F>, p: u64) -> Subspace<F> {
    let ctx = alg.ctx();
    let d = alg.dim() as u64;
    let mut q = p;
    while q < d {
        q *= p;
    }
    let images: Vec<Vec<F>> = (0..alg.dim())
        .map(|c| alg.pow(&alg.basis(c), q).to_dense(ctx))
        .collect();
    let kernel = Matrix::from_columns(ctx, alg.dim(), &images).kernel();
    Subspace::spanned_by(ctx, alg.dim(), kernel)
}

/// Checks that `space` is a nilpotent two-sided ideal and records its index.
pub(crate) fn radical_from_space<F: Field>(alg: &FinDimAlgebra<F>, space: Subspace<F>) -> Result<RadicalData<F>> {
    let ctx = alg.ctx();
    let basis = basis_elements(&space);
    for r in &basis {
        for k in 0..alg.dim() {
            let left = alg.mul_basis_left(k, r).to_dense(ctx);
            let right = alg.mul_basis_right(r, k).to_dense(ctx);
            if !space.contains(&left) || !space.contains(&right) {
                return Err(Error::InvalidAlgebra(format!(
                    "radical candidate is not an ideal (basis element {k})"
                )));
            }
        }
    }
    let mut power = basis.clone();
    let mut index = 1;
    while !power.is_empty() {
        if index > alg.dim() {
            return Err(Error::InvalidAlgebra("radical candidate is not nilpotent".into()));
        }
        let next = span(alg, power.iter().flat_map(|p| basis.iter().map(move |r| alg.mul(p, r))));
        power = basis_elements(&next);
        index += 1;
    }
    Ok(RadicalData {
        basis,
        nilpotency_index: index,
        space,
    })
}
