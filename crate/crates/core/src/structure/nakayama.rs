use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{combine, left_ideal, right_ideal, span, sweep_candidate, CanonicalDecomposition, BUDGET_FACTOR};
use crate::algebra::{Element, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of_rows, Matrix};
use crate::scalar::{Field, GroundField};

/// The Nakayama permutation: `soc(e_iA)` is isomorphic to the top of
/// `e_{ν(i)}A`. Classes are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakayamaData<F: Field> {
    perm: Vec<usize>,
    inverse: Vec<usize>,
    /// Basis of `soc(e_{i1}A) = {a ∈ e_{i1}A : aJ = 0}` per class.
    pub socles: Vec<Vec<Element<F>>>,
}

impl<F: Field> NakayamaData<F> {
    /// Builds the data from a permutation alone, without socles.
    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &k) in perm.iter().enumerate() {
            if k >= n || inverse[k] != usize::MAX {
                return Err(Error::NotSelfInjectiveLike(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            inverse[k] = i;
        }
        Ok(NakayamaData {
            perm,
            inverse,
            socles: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn nu(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn nu_inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &k)| i == k)
    }
}

fn right_socle<F: Field>(alg: &FinDimAlgebra<F>, e: &Element<F>, dec: &CanonicalDecomposition<F>) -> Vec<Element<F>> {
    let ctx = alg.ctx();
    let w = right_ideal(alg, e);
    let d = alg.dim();
    let mut rows = Vec::new();
    for r in &dec.radical.basis {
        let images: Vec<Vec<F>> = w.iter().map(|x| alg.mul(x, r).to_dense(ctx)).collect();
        for pos in 0..d {
            let row: Vec<F> = images.iter().map(|im| im[pos].clone()).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    kernel_of_rows(ctx, w.len(), rows)
        .into_iter()
        .map(|c| combine(d, &c, &w))
        .collect()
}

/// Computes ν from right socles of the representatives. Fails unless each
/// socle is nonzero and meets exactly one class, and the result is a
/// bijection.
pub fn nakayama<F: Field>(alg: &FinDimAlgebra<F>, dec: &CanonicalDecomposition<F>) -> Result<NakayamaData<F>> {
    let n = dec.n();
    let sums: Vec<Element<F>> = (0..n).map(|k| dec.class_sum(k)).collect();
    let mut perm = Vec::with_capacity(n);
    let mut socles = Vec::with_capacity(n);
    for i in 0..n {
        let soc = right_socle(alg, dec.representative(i), dec);
        if soc.is_empty() {
            return Err(Error::NotSelfInjectiveLike(format!("class {} has zero socle", i + 1)));
        }
        let hits: Vec<usize> = (0..n)
            .filter(|&k| soc.iter().any(|a| !alg.mul(a, &sums[k]).is_zero()))
            .collect();
        if hits.len() != 1 {
            return Err(Error::NotSelfInjectiveLike(format!(
                "socle of class {} meets classes {:?}",
                i + 1,
                hits.iter().map(|k| k + 1).collect::<Vec<_>>()
            )));
        }
        let k = hits[0];
        if dec.split_certified && soc.len() != dec.multiplicity(k) {
            return Err(Error::NotSelfInjectiveLike(format!(
                "socle of class {} has dimension {} but the simple top of class {} has dimension {}",
                i + 1,
                soc.len(),
                k + 1,
                dec.multiplicity(k)
            )));
        }
        perm.push(k);
        socles.push(soc);
    }
    let mut data = NakayamaData::from_permutation(perm.clone()).map_err(|_| {
        Error::NotSelfInjectiveLike(format!(
            "socle pattern {:?} is not a permutation",
            perm.iter().map(|k| k + 1).collect::<Vec<_>>()
        ))
    })?;
    data.socles = socles;
    Ok(data)
}

/// Outcome of the duality test `e_iA ≅ (A e_k)*` for one pair of classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    pub class: usize,
    pub partner: usize,
    pub right_dim: usize,
    pub left_dim: usize,
    pub isomorphic: bool,
}

/// Searches for a right-module isomorphism `eA → (Af)*`, where `(ξ·b)(z) =
/// ξ(bz)`, by solving the intertwiner equations and sweeping the solution
/// space for an invertible matrix.
fn dual_isomorphic<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    e: &Element<F>,
    f: &Element<F>,
    rng: &mut ChaCha8Rng,
) -> DualityCheck {
    let ctx = alg.ctx();
    let w = right_ideal(alg, e);
    let z = left_ideal(alg, f);
    let (p, q) = (w.len(), z.len());
    let mut check = DualityCheck {
        class: 0,
        partner: 0,
        right_dim: p,
        left_dim: q,
        isomorphic: false,
    };
    if p != q || p == 0 {
        return check;
    }
    let wspace = span(alg, w.iter().cloned());
    let zspace = span(alg, z.iter().cloned());
    let coords = |space: &crate::linalg::Subspace<F>, a: Element<F>| {
        space.coords(&a.to_dense(ctx)).expect("ideal is closed under multiplication")
    };
    // unknown T[s][t] = T(w_s)(z_t) at index s*q + t
    let mut rows = Vec::new();
    for b in 0..alg.dim() {
        let right: Vec<Vec<F>> = w.iter().map(|x| coords(&wspace, alg.mul_basis_right(x, b))).collect();
        let left: Vec<Vec<F>> = z.iter().map(|x| coords(&zspace, alg.mul_basis_left(b, x))).collect();
        for s in 0..p {
            for t in 0..q {
                let mut row = vec![F::zero(ctx); p * q];
                for (s2, c) in right[s].iter().enumerate() {
                    row[s2 * q + t] += c;
                }
                for (t2, c) in left[t].iter().enumerate() {
                    row[s * q + t2] -= c;
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel: Vec<Element<F>> = kernel_of_rows(ctx, p * q, rows)
        .into_iter()
        .map(|v| Element::from_dense(&v))
        .collect();
    if kernel.is_empty() {
        return check;
    }
    for attempt in 0..BUDGET_FACTOR * alg.dim() {
        let t = sweep_candidate(ctx, p * q, &kernel, attempt, rng).to_dense(ctx);
        let rows: Vec<Vec<F>> = t.chunks(q).map(<[F]>::to_vec).collect();
        if Matrix::from_rows(ctx, rows).map(|m| m.rank() == p).unwrap_or(false) {
            check.isomorphic = true;
            break;
        }
    }
    check
}

/// For each class `i`, tests `e_{i1}A ≅ (A e_{ν(i),1})*`.
pub fn verify_nakayama_duality<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    nak: &NakayamaData<F>,
    seed: u64,
) -> Vec<DualityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dec.n())
        .map(|i| {
            let k = nak.nu(i);
            let mut c = dual_isomorphic(alg, dec.representative(i), dec.representative(k), &mut rng);
            c.class = i;
            c.partner = k;
            c
        })
        .collect()
}

/// For each class `i`, every `k` with `e_{i1}A ≅ (A e_{k1})*`. Independent
/// of socle computations.
pub fn duality_permutation<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    seed: u64,
) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dec.n())
        .map(|i| {
            (0..dec.n())
                .filter(|&k| dual_isomorphic(alg, dec.representative(i), dec.representative(k), &mut rng).isomorphic)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{a2_path_algebra, group_algebra, nakayama_algebra, truncated_poly};
    use crate::scalar::{Fp, PrimeModulus, Rational};
    use crate::structure::canonical_decomposition;

    // Oracle: the longest path X_{i,ℓ-1} spans soc(e_iA) and ends at i+ℓ-1.
    #[test]
    fn cyclic_nakayama_permutation_matches_socle_paths() {
        for (n, l) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)] {
            let alg = nakayama_algebra::<Rational>(&(), n, l).unwrap();
            let dec = canonical_decomposition(&alg, 0).unwrap();
            let nak = nakayama(&alg, &dec).unwrap();
            for i in 0..n {
                assert_eq!(nak.nu(i), (i + l - 1) % n);
                assert_eq!(nak.socles[i], vec![alg.basis(i * l + l - 1)]);
            }
        }
    }

    #[test]
    fn local_algebras_have_identity_permutation() {
        let t = truncated_poly::<Rational>(&(), 3);
        let dec = canonical_decomposition(&t, 0).unwrap();
        assert!(nakayama(&t, &dec).unwrap().is_identity());
        let gf2 = PrimeModulus::new(2).unwrap();
        let c2 = group_algebra::<Fp>(&gf2, &[2]).unwrap();
        let dec = canonical_decomposition(&c2, 0).unwrap();
        let nak = nakayama(&c2, &dec).unwrap();
        assert!(nak.is_identity());
        assert_eq!(nak.socles[0].len(), 1);
    }

    #[test]
    fn path_algebra_is_rejected() {
        let a2 = a2_path_algebra::<Rational>(&());
        let dec = canonical_decomposition(&a2, 0).unwrap();
        assert!(matches!(nakayama(&a2, &dec), Err(Error::NotSelfInjectiveLike(_))));
    }

    #[test]
    fn duality_examples() {
        let b22 = nakayama_algebra::<Rational>(&(), 2, 2).unwrap();
        let dec = canonical_decomposition(&b22, 0).unwrap();
        let nak = nakayama(&b22, &dec).unwrap();
        let checks = verify_nakayama_duality(&b22, &dec, &nak, 0);
        assert!(checks.iter().all(|c| c.isomorphic && c.right_dim == 2 && c.left_dim == 2));
        assert_eq!(duality_permutation(&b22, &dec, 0), vec![vec![1], vec![0]]);

        let t3 = truncated_poly::<Rational>(&(), 3);
        let dec = canonical_decomposition(&t3, 0).unwrap();
        let nak = nakayama(&t3, &dec).unwrap();
        assert!(verify_nakayama_duality(&t3, &dec, &nak, 0)[0].isomorphic);
    }

    // Exhaustive over both candidate partners on the 3-dimensional path
    // algebra: no class is dual to any other.
    #[test]
    fn path_algebra_fails_duality() {
        let a2 = a2_path_algebra::<Rational>(&());
        let dec = canonical_decomposition(&a2, 0).unwrap();
        let pattern = duality_permutation(&a2, &dec, 0);
        assert!(pattern.iter().any(|ks| ks.len() != 1) || {
            let mut all: Vec<usize> = pattern.iter().flatten().copied().collect();
            all.sort();
            all.dedup();
            all.len() != dec.n()
        });
        let forced = NakayamaData::<Rational>::from_permutation(vec![1, 0]).unwrap();
        assert!(verify_nakayama_duality(&a2, &dec, &forced, 0).iter().any(|c| !c.isomorphic));
    }
}
