use super::{corner_space, radical_from_space, CanonicalDecomposition};
use crate::algebra::{Element, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::scalar::Field;

/// `Λ = eAe` for `e = Σ_i e_{i1}`, as an algebra in its own right together
/// with its inclusion into `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicReduction<F: Field> {
    pub lambda: FinDimAlgebra<F>,
    /// Image in `A` of each basis element of `Λ`.
    pub embedding: Vec<Element<F>>,
    pub idempotent: Element<F>,
    /// Decomposition of `Λ` with all multiplicities 1, class-aligned with
    /// the decomposition of `A`.
    pub decomposition: CanonicalDecomposition<F>,
    space: Subspace<F>,
}

impl<F: Field> BasicReduction<F> {
    pub fn embed(&self, x: &Element<F>) -> Element<F> {
        let mut out = Element::zero(self.idempotent.dim());
        for (k, c) in x.coeffs().iter() {
            out.add_scaled(c, &self.embedding[k]);
        }
        out
    }

    /// Coordinates in `Λ` of an element of `eAe`.
    pub fn restrict(&self, a: &Element<F>) -> Option<Element<F>> {
        self.space
            .coords(&a.to_dense(self.space.ctx()))
            .map(|c| Element::from_dense(&c))
    }
}

pub fn basic_reduction<F: Field>(alg: &FinDimAlgebra<F>, dec: &CanonicalDecomposition<F>) -> Result<BasicReduction<F>> {
    let ctx = alg.ctx();
    let e = dec.basic_idempotent();
    let space = corner_space(alg, &e, &e);
    let embedding: Vec<Element<F>> = space.basis().iter().map(|v| Element::from_dense(v)).collect();
    let coords = |a: &Element<F>| -> Result<Vec<F>> {
        space
            .coords(&a.to_dense(ctx))
            .ok_or_else(|| Error::InvalidAlgebra("corner algebra is not closed".into()))
    };
    let mut entries = Vec::new();
    for (i, x) in embedding.iter().enumerate() {
        for (j, y) in embedding.iter().enumerate() {
            for (k, c) in coords(&alg.mul(x, y))?.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, k, c));
                }
            }
        }
    }
    let labels = embedding
        .iter()
        .enumerate()
        .map(|(idx, v)| match v.coeffs().first() {
            Some((k, c)) if v.coeffs().len() == 1 && c.is_one() => alg.label(k).to_string(),
            _ => format!("L{idx}"),
        })
        .collect();
    let lambda = FinDimAlgebra::from_entries(ctx, labels, entries, coords(&e)?)?;

    let to_lambda = |a: &Element<F>| coords(a).map(|c| Element::from_dense(&c));
    let classes = (0..dec.n())
        .map(|i| Ok(vec![to_lambda(dec.representative(i))?]))
        .collect::<Result<Vec<_>>>()?;
    let rad_vectors = dec
        .radical
        .basis
        .iter()
        .map(|r| coords(&alg.mul(&alg.mul(&e, r), &e)))
        .collect::<Result<Vec<_>>>()?;
    let rad_space = Subspace::spanned_by(ctx, lambda.dim(), rad_vectors);
    let radical = radical_from_space(&lambda, rad_space)?;
    Ok(BasicReduction {
        decomposition: CanonicalDecomposition {
            classes,
            radical,
            split_certified: dec.split_certified,
        },
        lambda,
        embedding,
        idempotent: e,
        space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{matrix_algebra, nakayama_algebra, nsy_algebra};
    use crate::scalar::Rational;
    use crate::structure::canonical_decomposition;

    /// Brute-force search for a basis permutation carrying `a` onto `b`.
    fn permutation_isomorphic(a: &FinDimAlgebra<Rational>, b: &FinDimAlgebra<Rational>) -> bool {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        a.dim() == b.dim() && perms(a.dim()).into_iter().any(|p| &a.permute_basis(&p) == b)
    }

    #[test]
    fn matrix_algebra_reduces_to_the_field() {
        let m2 = matrix_algebra::<Rational>(&(), 2);
        let dec = canonical_decomposition(&m2, 0).unwrap();
        let red = basic_reduction(&m2, &dec).unwrap();
        assert_eq!(red.lambda.dim(), 1);
        assert_eq!(red.lambda.labels(), ["E11"]);
        assert_eq!(red.decomposition.radical.dim(), 0);
    }

    #[test]
    fn basic_algebra_is_its_own_reduction() {
        let b = nakayama_algebra::<Rational>(&(), 3, 2).unwrap();
        let dec = canonical_decomposition(&b, 0).unwrap();
        let red = basic_reduction(&b, &dec).unwrap();
        assert_eq!(red.idempotent, b.one());
        assert_eq!(red.lambda, b);
    }

    #[test]
    fn nsy_reduces_to_cyclic_nakayama() {
        let nsy = nsy_algebra::<Rational>(&(), 2, 2, &[1, 2]).unwrap();
        let dec = canonical_decomposition(&nsy.algebra, 0).unwrap();
        let red = basic_reduction(&nsy.algebra, &dec).unwrap();
        assert_eq!(red.lambda.dim(), 4);
        assert!(red.decomposition.is_basic());
        let b22 = nakayama_algebra::<Rational>(&(), 2, 2).unwrap();
        assert!(permutation_isomorphic(&red.lambda, &b22));
        let x = red.lambda.basis(1);
        assert_eq!(red.restrict(&red.embed(&x)), Some(x));
    }
}
