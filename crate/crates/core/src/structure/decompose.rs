use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{corner, corner_nonzero, radical, solve_in_span, sweep_candidate, RadicalData, BUDGET_FACTOR};
use crate::algebra::{Element, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Field, GroundField};

/// `1 = Σ_i Σ_s e_{is}` with primitive orthogonal idempotents, grouped by
/// the isomorphism class of `e_{is}A`. Classes and copies are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecomposition<F: Field> {
    pub classes: Vec<Vec<Element<F>>>,
    pub radical: RadicalData<F>,
    /// False when some idempotent could not be split further within budget
    /// although its corner in `A/J` has dimension above 1.
    pub split_certified: bool,
}

impl<F: Field> CanonicalDecomposition<F> {
    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn idempotent(&self, i: usize, s: usize) -> &Element<F> {
        &self.classes[i][s]
    }

    pub fn representative(&self, i: usize) -> &Element<F> {
        &self.classes[i][0]
    }

    /// `e_i = Σ_s e_{is}`.
    pub fn class_sum(&self, i: usize) -> Element<F> {
        let mut it = self.classes[i].iter();
        let first = it.next().expect("classes are nonempty").clone();
        it.fold(first, |acc, e| acc.add(e))
    }

    /// `Σ_i e_{i1}`.
    pub fn basic_idempotent(&self) -> Element<F> {
        let mut it = self.classes.iter().map(|c| &c[0]);
        let first = it.next().expect("nonzero algebra").clone();
        it.fold(first, |acc, e| acc.add(e))
    }

    pub fn is_basic(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

/// `A/J` with a section back into `A`.
struct Quotient<F: Field> {
    algebra: FinDimAlgebra<F>,
    complement: Vec<usize>,
}

impl<F: Field> Quotient<F> {
    fn new(alg: &FinDimAlgebra<F>, rad: &RadicalData<F>) -> Result<Self> {
        let complement = rad.space().complement_indices();
        let mut entries = Vec::new();
        for (p, &c1) in complement.iter().enumerate() {
            for (q, &c2) in complement.iter().enumerate() {
                let prod = alg.mul(&alg.basis(c1), &alg.basis(c2));
                for (k, c) in project(alg, rad, &complement, &prod).into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((p, q, k, c));
                    }
                }
            }
        }
        let labels = complement.iter().map(|&c| alg.label(c).to_string()).collect();
        let unit = project(alg, rad, &complement, &alg.one());
        let algebra = FinDimAlgebra::from_entries(alg.ctx(), labels, entries, unit)?;
        Ok(Quotient { algebra, complement })
    }

    fn section(&self, dim: usize, x: &Element<F>) -> Element<F> {
        let mut out = Element::zero(dim);
        for (k, c) in x.coeffs().iter() {
            out.add_scaled(c, &Element::basis(dim, self.complement[k], F::one(self.algebra.ctx())));
        }
        out
    }
}

fn project<F: Field>(alg: &FinDimAlgebra<F>, rad: &RadicalData<F>, complement: &[usize], a: &Element<F>) -> Vec<F> {
    let reduced = rad.space().reduce(&a.to_dense(alg.ctx()));
    complement.iter().map(|&c| reduced[c].clone()).collect()
}

/// Minimal polynomial of `a` inside the corner `eSe`, whose unit is `e`.
fn min_poly<F: Field>(s: &FinDimAlgebra<F>, e: &Element<F>, a: &Element<F>) -> Poly<F> {
    let ctx = s.ctx();
    let mut powers = vec![e.to_dense(ctx)];
    let mut current = e.clone();
    loop {
        current = s.mul(&current, a);
        let target = current.to_dense(ctx);
        if let Some(c) = solve_in_span(ctx, &powers, &target) {
            let mut coeffs: Vec<F> = c.into_iter().map(|x| -x).collect();
            coeffs.push(F::one(ctx));
            return Poly::new(ctx, coeffs);
        }
        powers.push(target);
    }
}

fn eval_in<F: Field>(s: &FinDimAlgebra<F>, e: &Element<F>, p: &Poly<F>, a: &Element<F>) -> Element<F> {
    let mut acc = Element::zero(s.dim());
    for c in p.coeffs().iter().rev() {
        acc = s.mul(&acc, a);
        acc.add_scaled(c, e);
    }
    acc
}

/// A proper idempotent of `eSe` built from the minimal polynomial of `a`
/// by the CRT idempotent of its first coprime factor.
fn split_with<F: GroundField>(s: &FinDimAlgebra<F>, e: &Element<F>, a: &Element<F>) -> Option<Element<F>> {
    let ctx = s.ctx();
    let mu = min_poly(s, e, a);
    let factors = F::factor(&mu);
    if factors.len() < 2 {
        return None;
    }
    let (f, mult) = &factors[0];
    let mut g = Poly::one(ctx);
    for _ in 0..*mult {
        g = g.mul(f);
    }
    let h = mu.div_exact(&g);
    let (d, _, v) = g.ext_gcd(&h);
    debug_assert!(d.is_one());
    let idem = eval_in(s, e, &v.mul(&h), a);
    let proper = !idem.is_zero() && &idem != e && s.is_idempotent(&idem);
    proper.then_some(idem)
}

fn split_recursive<F: GroundField>(
    s: &FinDimAlgebra<F>,
    e: Element<F>,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Element<F>>,
    certified: &mut bool,
) {
    let local = corner(s, &e, &e);
    if local.len() <= 1 {
        out.push(e);
        return;
    }
    let budget = BUDGET_FACTOR * s.dim();
    for attempt in 0..budget {
        let a = sweep_candidate(s.ctx(), s.dim(), &local, attempt, rng);
        if let Some(f) = split_with(s, &e, &a) {
            let rest = e.sub(&f);
            split_recursive(s, f, rng, out, certified);
            split_recursive(s, rest, rng, out, certified);
            return;
        }
    }
    *certified = false;
    out.push(e);
}

fn lift_idempotent<F: Field>(alg: &FinDimAlgebra<F>, mut a: Element<F>, rad: &RadicalData<F>) -> Result<Element<F>> {
    let three = alg.scalar(3);
    let two = alg.scalar(2);
    // a² - a lies in J^(2^k) after k rounds
    let rounds = usize::BITS - rad.nilpotency_index.leading_zeros() + 1;
    for _ in 0..=rounds {
        let sq = alg.mul(&a, &a);
        if sq == a {
            return Ok(a);
        }
        let cube = alg.mul(&sq, &a);
        a = sq.scale(&three).sub(&cube.scale(&two));
    }
    Err(Error::InvalidAlgebra("idempotent lifting did not converge".into()))
}

fn sort_key<F: Field>(alg: &FinDimAlgebra<F>, e: &Element<F>) -> Vec<F> {
    e.to_dense(alg.ctx())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Splits `1` into primitive orthogonal idempotents of `A/J` by
/// minimal-polynomial factorization, groups them by `ē_a(A/J)ē_b ≠ 0`, lifts
/// them to `A` and orders everything canonically (largest coordinate vector
/// first).
pub fn canonical_decomposition<F: GroundField>(alg: &FinDimAlgebra<F>, seed: u64) -> Result<CanonicalDecomposition<F>> {
    let rad = radical(alg)?;
    let quotient = Quotient::new(alg, &rad)?;
    let s = &quotient.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prims = Vec::new();
    let mut certified = true;
    split_recursive(s, s.one(), &mut rng, &mut prims, &mut certified);

    let count = prims.len();
    let mut uf = UnionFind((0..count).collect());
    for a in 0..count {
        for b in a + 1..count {
            if corner_nonzero(s, &prims[a], &prims[b]) {
                uf.union(a, b);
            }
        }
    }

    let d = alg.dim();
    let one = alg.one();
    let mut lifted = Vec::with_capacity(count);
    let mut taken = Element::zero(d);
    for (idx, p) in prims.iter().enumerate() {
        let f = if idx + 1 == count {
            one.sub(&taken)
        } else {
            let comp = one.sub(&taken);
            let a = alg.mul(&alg.mul(&comp, &quotient.section(d, p)), &comp);
            lift_idempotent(alg, a, &rad)?
        };
        taken = taken.add(&f);
        lifted.push(f);
    }

    let mut groups: Vec<Vec<Element<F>>> = Vec::new();
    let mut root_of_group = Vec::new();
    for (idx, f) in lifted.into_iter().enumerate() {
        let root = uf.find(idx);
        match root_of_group.iter().position(|&r| r == root) {
            Some(g) => groups[g].push(f),
            None => {
                root_of_group.push(root);
                groups.push(vec![f]);
            }
        }
    }
    for g in &mut groups {
        g.sort_by_cached_key(|e| std::cmp::Reverse(sort_key(alg, e)));
    }
    groups.sort_by_cached_key(|g| std::cmp::Reverse(sort_key(alg, &g[0])));

    let dec = CanonicalDecomposition {
        classes: groups,
        radical: rad,
        split_certified: certified,
    };
    verify_decomposition(alg, &dec)?;
    Ok(dec)
}

/// Re-checks idempotence, orthogonality and `Σ e_{is} = 1` exactly.
pub fn verify_decomposition<F: Field>(alg: &FinDimAlgebra<F>, dec: &CanonicalDecomposition<F>) -> Result<()> {
    let all: Vec<&Element<F>> = dec.classes.iter().flatten().collect();
    let mut total = Element::zero(alg.dim());
    for (a, e) in all.iter().enumerate() {
        total = total.add(e);
        for (b, f) in all.iter().enumerate() {
            let prod = alg.mul(e, f);
            let ok = if a == b { &prod == *e && !e.is_zero() } else { prod.is_zero() };
            if !ok {
                return Err(Error::InvalidAlgebra(format!(
                    "idempotents {a} and {b} violate orthogonality or idempotence"
                )));
            }
        }
    }
    if total != alg.one() {
        return Err(Error::InvalidAlgebra("idempotents do not sum to 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{diagonal_algebra, group_algebra, matrix_algebra, nakayama_algebra, nsy_algebra};
    use crate::scalar::{Fp, PrimeModulus, Rational};

    #[test]
    fn matrix_units() {
        let m2 = matrix_algebra::<Rational>(&(), 2);
        let dec = canonical_decomposition(&m2, 0).unwrap();
        assert_eq!(dec.multiplicities(), vec![2]);
        assert_eq!(dec.idempotent(0, 0), &m2.basis(0));
        assert_eq!(dec.idempotent(0, 1), &m2.basis(3));
        assert!(dec.split_certified);
    }

    #[test]
    fn products_of_fields_and_local_algebras() {
        let qq = diagonal_algebra::<Rational>(&(), 2);
        assert_eq!(canonical_decomposition(&qq, 0).unwrap().multiplicities(), vec![1, 1]);
        let gf2 = PrimeModulus::new(2).unwrap();
        let c2 = group_algebra::<Fp>(&gf2, &[2]).unwrap();
        let dec = canonical_decomposition(&c2, 0).unwrap();
        assert_eq!(dec.multiplicities(), vec![1]);
        assert_eq!(dec.representative(0), &c2.one());
    }

    #[test]
    fn cyclic_nakayama_trivial_paths() {
        let alg = nakayama_algebra::<Rational>(&(), 3, 2).unwrap();
        let dec = canonical_decomposition(&alg, 7).unwrap();
        assert_eq!(dec.multiplicities(), vec![1, 1, 1]);
        for i in 0..3 {
            assert_eq!(dec.representative(i), &alg.basis(2 * i));
        }
    }

    #[test]
    fn nsy_classes_follow_vertices() {
        let nsy = nsy_algebra::<Rational>(&(), 2, 2, &[1, 2]).unwrap();
        let dec = canonical_decomposition(&nsy.algebra, 1).unwrap();
        assert_eq!(dec.multiplicities(), vec![1, 2]);
        assert_eq!(dec.representative(0), &nsy.algebra.basis(nsy.x(0, 0, 0, 0).unwrap()));
        assert_eq!(dec.idempotent(1, 1), &nsy.algebra.basis(nsy.x(1, 0, 1, 1).unwrap()));
    }

    #[test]
    fn non_split_component_is_flagged() {
        // Q[C3] = Q × Q(ω); the second factor has no proper idempotent.
        let c3 = group_algebra::<Rational>(&(), &[3]).unwrap();
        let dec = canonical_decomposition(&c3, 0).unwrap();
        assert_eq!(dec.multiplicities(), vec![1, 1]);
        assert!(!dec.split_certified);
    }

    #[test]
    fn decomposition_is_seed_independent_on_basis_permutations() {
        let nsy = nsy_algebra::<Rational>(&(), 2, 2, &[2, 1]).unwrap();
        for seed in 0..3 {
            let dec = canonical_decomposition(&nsy.algebra, seed).unwrap();
            assert_eq!(dec.multiplicities(), vec![2, 1]);
        }
        let perm: Vec<usize> = (0..nsy.algebra.dim()).rev().collect();
        let permuted = nsy.algebra.permute_basis(&perm);
        let dec = canonical_decomposition(&permuted, 3).unwrap();
        assert_eq!(dec.multiplicities().iter().sum::<usize>(), 3);
    }
}
