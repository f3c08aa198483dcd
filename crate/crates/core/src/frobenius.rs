//! Frobenius pairs `(ε, y)` on a basic algebra: a counit supported on the
//! corners `e_{ν⁻¹i}Λe_i`, its dual-basis tensor, and checks of the support
//! conditions every such pair satisfies.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Element, FinDimAlgebra, Functional};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of_rows, Matrix};
use crate::scalar::{Field, GroundField};
use crate::structure::{
    combine, corner, solve_in_span, span_dim, CanonicalDecomposition, NakayamaData, BUDGET_FACTOR,
};
use crate::tensor::{apply_functional, is_invariant, Side, Tensor2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusPair<F: Field> {
    pub epsilon: Functional<F>,
    pub y: Tensor2<F>,
}

/// Per class `i`, a basis of the small space: elements of
/// `e_{ν⁻¹i}Λe_i` killed by `J` on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallSpaceData<F: Field> {
    pub spaces: Vec<Vec<Element<F>>>,
}

fn two_sided_annihilated<F: Field>(
    alg: &FinDimAlgebra<F>,
    rad: &[Element<F>],
    span: &[Element<F>],
) -> Vec<Element<F>> {
    let ctx = alg.ctx();
    let mut rows = Vec::new();
    for r in rad {
        for side in [false, true] {
            let images: Vec<Vec<F>> = span
                .iter()
                .map(|w| if side { alg.mul(r, w) } else { alg.mul(w, r) }.to_dense(ctx))
                .collect();
            for pos in 0..alg.dim() {
                let row: Vec<F> = images.iter().map(|im| im[pos].clone()).collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    kernel_of_rows(ctx, span.len(), rows)
        .into_iter()
        .map(|c| combine(alg.dim(), &c, span))
        .collect()
}

pub fn small_spaces<F: Field>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    nak: &NakayamaData<F>,
) -> SmallSpaceData<F> {
    let spaces = (0..dec.n())
        .map(|i| {
            let c = corner(alg, dec.representative(nak.nu_inv(i)), dec.representative(i));
            two_sided_annihilated(alg, &dec.radical.basis, &c)
        })
        .collect();
    SmallSpaceData { spaces }
}

/// `G_{αβ} = ε(b_α b_β)`.
pub fn gram_matrix<F: Field>(alg: &FinDimAlgebra<F>, eps: &Functional<F>) -> Matrix<F> {
    let ctx = alg.ctx();
    let d = alg.dim();
    let mut g: Matrix<F> = Matrix::zeros(ctx, d, d);
    for (a, b, k, c) in alg.entries() {
        let v = g.get(a, b).clone() + c.clone() * eps.value(k);
        g.set(a, b, v);
    }
    g
}

fn extend_basis<F: Field>(alg: &FinDimAlgebra<F>, first: &[Element<F>], all: &[Element<F>]) -> Vec<Element<F>> {
    let ctx = alg.ctx();
    let mut space = crate::linalg::Subspace::zero(ctx, alg.dim());
    let mut out = Vec::new();
    for e in first.iter().chain(all) {
        if space.insert(e.to_dense(ctx)) {
            out.push(e.clone());
        }
    }
    out
}

/// A counit vanishing on `e_jΛe_i` for `j ≠ ν⁻¹i`. On each corner
/// `e_{ν⁻¹i}Λe_i` it is 1 on the first small-space basis vector and 0 on the
/// rest of a fixed basis extending the small space; later attempts use
/// seeded values on the small spaces. Accepted once the Gram matrix is
/// invertible.
pub fn construct_counit<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    nak: &NakayamaData<F>,
    seed: u64,
) -> Result<Functional<F>> {
    if let Some(i) = (0..dec.n()).find(|&i| dec.multiplicity(i) != 1) {
        return Err(Error::NotBasic {
            class: i + 1,
            multiplicity: dec.multiplicity(i),
        });
    }
    let ctx = alg.ctx();
    let d = alg.dim();
    let small = small_spaces(alg, dec, nak);
    if let Some(i) = small.spaces.iter().position(Vec::is_empty) {
        return Err(Error::NotFrobenius(format!("small space of class {} is zero", i + 1)));
    }
    // per class: extended corner basis and coordinates of e_{ν⁻¹i} b_k e_i
    let mut coords: Vec<Vec<Vec<F>>> = Vec::new();
    for i in 0..dec.n() {
        let (left, right) = (dec.representative(nak.nu_inv(i)), dec.representative(i));
        let basis = extend_basis(alg, &small.spaces[i], &corner(alg, left, right));
        let images: Vec<Vec<F>> = basis.iter().map(|b| b.to_dense(ctx)).collect();
        let per_k = (0..d)
            .map(|k| {
                let c = alg.mul(&alg.mul(left, &alg.basis(k)), right);
                solve_in_span(ctx, &images, &c.to_dense(ctx))
                    .expect("corner element lies in the corner")
            })
            .collect();
        coords.push(per_k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..BUDGET_FACTOR * d.max(1) {
        let values: Vec<Vec<F>> = small
            .spaces
            .iter()
            .map(|z| {
                (0..z.len())
                    .map(|a| {
                        if attempt == 0 {
                            if a == 0 { F::one(ctx) } else { F::zero(ctx) }
                        } else {
                            F::sample(ctx, &mut rng)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut eps = vec![F::zero(ctx); d];
        for (i, per_k) in coords.iter().enumerate() {
            for (k, c) in per_k.iter().enumerate() {
                for (x, v) in c.iter().zip(&values[i]) {
                    eps[k] += &(x.clone() * v);
                }
            }
        }
        let eps = Functional::new(eps);
        if gram_matrix(alg, &eps).rank() == d {
            return Ok(eps);
        }
    }
    Err(Error::NotFrobenius(
        "no counit supported on the Nakayama corners has an invertible Gram matrix".into(),
    ))
}

/// `y = Σ_α b_α ⊗ b*_α` with `ε(b*_β b_α) = δ_{βα}`, i.e.
/// `y = Σ_{α,γ} (G⁻¹)_{αγ} b_α ⊗ b_γ`. Invariance and both counit laws are
/// re-checked.
pub fn dual_basis_tensor<F: Field>(alg: &FinDimAlgebra<F>, eps: &Functional<F>) -> Result<Tensor2<F>> {
    let d = alg.dim();
    if eps.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: eps.dim(),
        });
    }
    let inv = gram_matrix(alg, eps).invert().map_err(|_| Error::SingularGram)?;
    let mut y = Tensor2::zero(d);
    for a in 0..d {
        for g in 0..d {
            let c = inv.get(a, g);
            if !c.is_zero() {
                y.add_term(a, g, c);
            }
        }
    }
    let pair = FrobeniusPair {
        epsilon: eps.clone(),
        y,
    };
    let laws = check_pair(alg, &pair)?;
    if !laws.holds() {
        return Err(Error::InvalidAlgebra(format!("dual-basis tensor fails its laws: {laws:?}")));
    }
    Ok(pair.y)
}

pub fn frobenius_pair<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    nak: &NakayamaData<F>,
    seed: u64,
) -> Result<FrobeniusPair<F>> {
    let epsilon = construct_counit(alg, dec, nak, seed)?;
    let y = dual_basis_tensor(alg, &epsilon)?;
    Ok(FrobeniusPair { epsilon, y })
}

/// The defining laws of a Frobenius pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    /// First basis element `b` with `b·y ≠ y·b`.
    pub invariance_witness: Option<usize>,
    pub left_counit: bool,
    pub right_counit: bool,
}

impl PairCheck {
    pub fn holds(&self) -> bool {
        self.invariance_witness.is_none() && self.left_counit && self.right_counit
    }
}

pub fn check_pair<F: Field>(alg: &FinDimAlgebra<F>, pair: &FrobeniusPair<F>) -> Result<PairCheck> {
    let one = alg.one();
    Ok(PairCheck {
        invariance_witness: is_invariant(alg, &pair.y),
        left_counit: apply_functional(Side::Left, &pair.epsilon, &pair.y)? == one,
        right_counit: apply_functional(Side::Right, &pair.epsilon, &pair.y)? == one,
    })
}

/// Splits `t` into its Peirce components `(e_j ⊗ e_{j'}) t (e_i ⊗ e_{i'})`,
/// keyed `(j, i, j', i')`, for orthogonal idempotents summing to 1. Zero
/// components are omitted.
pub fn peirce_blocks<F: Field>(
    alg: &FinDimAlgebra<F>,
    idems: &[Element<F>],
    t: &Tensor2<F>,
) -> BTreeMap<(usize, usize, usize, usize), Tensor2<F>> {
    let n = idems.len();
    let mut cache: BTreeMap<usize, Vec<(usize, usize, Element<F>)>> = BTreeMap::new();
    let mut project = |k: usize| {
        cache
            .entry(k)
            .or_insert_with(|| {
                let b = alg.basis(k);
                let mut out = Vec::new();
                for j in 0..n {
                    let left = alg.mul(&idems[j], &b);
                    if left.is_zero() {
                        continue;
                    }
                    for (i, e) in idems.iter().enumerate() {
                        let p = alg.mul(&left, e);
                        if !p.is_zero() {
                            out.push((j, i, p));
                        }
                    }
                }
                out
            })
            .clone()
    };
    let mut blocks: BTreeMap<(usize, usize, usize, usize), Tensor2<F>> = BTreeMap::new();
    for (a, b, c) in t.iter() {
        let pa = project(a);
        let pb = project(b);
        for (j, i, x) in &pa {
            for (j2, i2, z) in &pb {
                let block = blocks.entry((*j, *i, *j2, *i2)).or_insert_with(|| Tensor2::zero(alg.dim()));
                for (p, xc) in x.coeffs().iter() {
                    for (q, zc) in z.coeffs().iter() {
                        block.add_term(p, q, &(c.clone() * xc * zc));
                    }
                }
            }
        }
    }
    blocks.retain(|_, t| !t.is_empty());
    blocks
}

/// Support and nondegeneracy conditions on a Frobenius pair. Class numbers
/// in witnesses are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub counit_support: bool,
    /// `(j, i)` with `j ≠ ν⁻¹i` and `ε(e_jΛe_i) ≠ 0`.
    pub counit_support_witness: Option<(usize, usize)>,
    pub tensor_support: bool,
    /// `(j, i, j', i')` of a nonzero block of `y` outside
    /// `Λ_{j←i} ⊗ Λ_{ν⁻¹i←j}`.
    pub tensor_support_witness: Option<(usize, usize, usize, usize)>,
    pub small_space: bool,
    /// Class whose small-space pairing is degenerate.
    pub small_space_witness: Option<usize>,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        self.counit_support && self.tensor_support && self.small_space
    }
}

/// Checks that `ε` vanishes off the Nakayama corners, that `y` lies in
/// `⊕_{i,j} Λ_{j←i} ⊗ Λ_{ν⁻¹i←j}` (where `Λ_{j←i} = e_jΛe_i`), and that
/// `(z, c) ↦ ε(zc)` pairs each small space nondegenerately with
/// `e_iΛe_i / e_iJe_i`.
pub fn verify_support<F: Field>(
    alg: &FinDimAlgebra<F>,
    pair: &FrobeniusPair<F>,
    dec: &CanonicalDecomposition<F>,
    nak: &NakayamaData<F>,
) -> SupportReport {
    let ctx = alg.ctx();
    let n = dec.n();
    let reps: Vec<Element<F>> = (0..n).map(|i| dec.representative(i).clone()).collect();

    let mut counit_support_witness = None;
    'outer: for i in 0..n {
        for j in (0..n).filter(|&j| j != nak.nu_inv(i)) {
            if corner(alg, &reps[j], &reps[i])
                .iter()
                .any(|c| !pair.epsilon.eval(ctx, c).is_zero())
            {
                counit_support_witness = Some((j + 1, i + 1));
                break 'outer;
            }
        }
    }

    let tensor_support_witness = peirce_blocks(alg, &reps, &pair.y)
        .keys()
        .find(|&&(j, i, j2, i2)| !(i2 == j && j2 == nak.nu_inv(i)))
        .map(|&(j, i, j2, i2)| (j + 1, i + 1, j2 + 1, i2 + 1));

    let small = small_spaces(alg, dec, nak);
    let mut small_space_witness = None;
    for (i, rep) in reps.iter().enumerate() {
        let z = &small.spaces[i];
        let diag = corner(alg, rep, rep);
        let diag_rad: Vec<Element<F>> = dec
            .radical
            .basis
            .iter()
            .map(|r| alg.mul(&alg.mul(rep, r), rep))
            .collect();
        let top_dim = diag.len() - span_dim(alg, diag_rad);
        let rows: Vec<Vec<F>> = z
            .iter()
            .map(|za| diag.iter().map(|c| pair.epsilon.eval(ctx, &alg.mul(za, c))).collect())
            .collect();
        let rank = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(ctx, rows).map(|m| m.rank()).unwrap_or(0)
        };
        if z.is_empty() || rank != z.len() || z.len() != top_dim {
            small_space_witness = Some(i + 1);
            break;
        }
    }

    SupportReport {
        counit_support: counit_support_witness.is_none(),
        counit_support_witness,
        tensor_support: tensor_support_witness.is_none(),
        tensor_support_witness,
        small_space: small_space_witness.is_none(),
        small_space_witness,
    }
}

/// `ε'(a) = ε(ab)` and its dual-basis tensor.
pub fn transport_pair<F: Field>(
    alg: &FinDimAlgebra<F>,
    pair: &FrobeniusPair<F>,
    b: &Element<F>,
) -> Result<FrobeniusPair<F>> {
    if !alg.is_invertible(b) {
        return Err(Error::NotInvertible);
    }
    let ctx = alg.ctx();
    let values = (0..alg.dim())
        .map(|k| pair.epsilon.eval(ctx, &alg.mul_basis_left(k, b)))
        .collect();
    let epsilon = Functional::new(values);
    let y = dual_basis_tensor(alg, &epsilon)?;
    Ok(FrobeniusPair { epsilon, y })
}

/// The unique `b` with `ε'(a) = ε(ab)` for all `a`; it must be invertible.
pub fn recover_transport<F: Field>(
    alg: &FinDimAlgebra<F>,
    eps: &Functional<F>,
    eps2: &Functional<F>,
) -> Result<Element<F>> {
    let ctx = alg.ctx();
    let g = gram_matrix(alg, eps);
    let rhs = Matrix::from_columns(ctx, alg.dim(), &[eps2.values().to_vec()]);
    let sol = crate::linalg::solve_linear(&g, &rhs).map_err(|_| Error::SingularGram)?;
    if !sol.kernel.is_empty() {
        return Err(Error::SingularGram);
    }
    let b = Element::from_dense(&sol.particular.column(0));
    if !alg.is_invertible(&b) {
        return Err(Error::NotInvertible);
    }
    Ok(b)
}

/// A seeded invertible element of `⊕_i e_iΛe_i`: `1` plus a random element
/// of `⊕_i e_iJe_i`, scaled on each `e_i` by a random nonzero scalar.
pub fn random_peirce_unit<F: GroundField, R: rand::Rng>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    rng: &mut R,
) -> Element<F> {
    let ctx = alg.ctx();
    let mut b = Element::zero(alg.dim());
    for i in 0..dec.n() {
        let e = dec.class_sum(i);
        let mut s = F::sample(ctx, rng);
        while s.is_zero() {
            s = F::sample(ctx, rng);
        }
        b.add_scaled(&s, &e);
        for r in &dec.radical.basis {
            let c = F::sample(ctx, rng);
            if !c.is_zero() {
                b.add_scaled(&c, &alg.mul(&alg.mul(&e, r), &e));
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{a2_path_algebra, diagonal_algebra, matrix_algebra, nakayama_algebra, truncated_poly};
    use crate::scalar::Rational;
    use crate::structure::{canonical_decomposition, nakayama};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn setup(alg: &FinDimAlgebra<Rational>) -> (CanonicalDecomposition<Rational>, NakayamaData<Rational>) {
        let dec = canonical_decomposition(alg, 0).unwrap();
        let nak = nakayama(alg, &dec).unwrap();
        (dec, nak)
    }

    #[test]
    fn dual_numbers() {
        let alg = truncated_poly::<Rational>(&(), 2);
        let (dec, nak) = setup(&alg);
        let small = small_spaces(&alg, &dec, &nak);
        assert_eq!(small.spaces, vec![vec![alg.basis(1)]]);
        let pair = frobenius_pair(&alg, &dec, &nak, 0).unwrap();
        assert_eq!(pair.epsilon.values(), [q(0), q(1)]);
        assert_eq!(pair.y, Tensor2::from_terms(2, [(0, 1, q(1)), (1, 0, q(1))]));

        let t = transport_pair(&alg, &pair, &Element::from_dense(&[q(1), q(1)])).unwrap();
        assert_eq!(t.epsilon.values(), [q(1), q(1)]);
        assert!(matches!(
            transport_pair(&alg, &pair, &alg.basis(1)),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn semisimple_cases() {
        let qq = diagonal_algebra::<Rational>(&(), 2);
        let (dec, nak) = setup(&qq);
        assert_eq!(construct_counit(&qq, &dec, &nak, 0).unwrap().values(), [q(1), q(1)]);
        let k = diagonal_algebra::<Rational>(&(), 1);
        let y = dual_basis_tensor(&k, &Functional::new(vec![q(1)])).unwrap();
        assert_eq!(y, Tensor2::from_terms(1, [(0, 0, q(1))]));

        let m2 = matrix_algebra::<Rational>(&(), 2);
        let (dec, nak) = setup(&m2);
        assert_eq!(small_spaces(&m2, &dec, &nak).spaces[0].len(), 1);
        assert!(matches!(construct_counit(&m2, &dec, &nak, 0), Err(Error::NotBasic { .. })));
    }

    #[test]
    fn cyclic_nakayama_pair() {
        let alg = nakayama_algebra::<Rational>(&(), 2, 2).unwrap();
        let (dec, nak) = setup(&alg);
        let pair = frobenius_pair(&alg, &dec, &nak, 0).unwrap();
        // ε is 1 exactly on the socle paths X_{i,1}
        assert_eq!(pair.epsilon.values(), [q(0), q(1), q(0), q(1)]);
        let expected = Tensor2::from_terms(4, [(0, 3, q(1)), (1, 0, q(1)), (2, 1, q(1)), (3, 2, q(1))]);
        assert_eq!(pair.y, expected);
        assert!(verify_support(&alg, &pair, &dec, &nak).passed());
    }

    #[test]
    fn support_check_detects_corruption() {
        let alg = nakayama_algebra::<Rational>(&(), 3, 2).unwrap();
        let (dec, nak) = setup(&alg);
        let pair = frobenius_pair(&alg, &dec, &nak, 0).unwrap();
        assert!(verify_support(&alg, &pair, &dec, &nak).passed());
        let mut values = pair.epsilon.values().to_vec();
        values[0] = q(1);
        let corrupted = FrobeniusPair {
            epsilon: Functional::new(values),
            y: pair.y.clone(),
        };
        let report = verify_support(&alg, &corrupted, &dec, &nak);
        assert!(!report.counit_support);
        assert_eq!(report.counit_support_witness, Some((1, 1)));
    }

    #[test]
    fn peirce_diagonal_transports_keep_the_support() {
        let alg = nakayama_algebra::<Rational>(&(), 2, 3).unwrap();
        let (dec, nak) = setup(&alg);
        let pair = frobenius_pair(&alg, &dec, &nak, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let b = random_peirce_unit(&alg, &dec, &mut rng);
            let t = transport_pair(&alg, &pair, &b).unwrap();
            assert!(check_pair(&alg, &t).unwrap().holds());
            assert!(verify_support(&alg, &t, &dec, &nak).passed());
            assert_eq!(recover_transport(&alg, &pair.epsilon, &t.epsilon).unwrap(), b);
        }
    }

    // Right multiplication by the unipotent 1 + X_{0,1} is not Peirce-diagonal,
    // and the transported counit is nonzero on e_0 although ν⁻¹(0) = 1.
    #[test]
    fn off_diagonal_transport_breaks_the_support_condition() {
        let alg = nakayama_algebra::<Rational>(&(), 2, 2).unwrap();
        let (dec, nak) = setup(&alg);
        let pair = frobenius_pair(&alg, &dec, &nak, 0).unwrap();
        let b = alg.one().add(&alg.basis(1));
        let t = transport_pair(&alg, &pair, &b).unwrap();
        assert!(check_pair(&alg, &t).unwrap().holds());
        let report = verify_support(&alg, &t, &dec, &nak);
        assert!(!report.counit_support);
        assert_eq!(report.counit_support_witness, Some((1, 1)));
    }

    #[test]
    fn path_algebra_is_not_frobenius() {
        let a2 = a2_path_algebra::<Rational>(&());
        let dec = canonical_decomposition(&a2, 0).unwrap();
        for perm in [vec![0, 1], vec![1, 0]] {
            let nak = NakayamaData::from_permutation(perm).unwrap();
            assert!(matches!(construct_counit(&a2, &dec, &nak, 0), Err(Error::NotFrobenius(_))));
        }
    }
}
