//! The amplified algebra `Λ(m(1),…,m(n)) = End_Λ(⊕_i P_i^{m(i)})` of a basic
//! algebra, spreading of a Frobenius tensor over copies of projectives, and
//! the counit decision.
//!
//! Classes are 0-based; copy indices are 1-based, so a block
//! `A^{t←s}_{j←i}` has `1 ≤ s ≤ m(i)` and `1 ≤ t ≤ m(j)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FinDimAlgebra, Functional};
use crate::error::{Error, Result};
use crate::io::{tensor_to_json, TensorJson};
use crate::linalg::{solve_linear, Matrix, Subspace};
use crate::scalar::{Field, GroundField};
use crate::structure::{CanonicalDecomposition, NakayamaData};
use crate::tensor::{apply_functional, check_coassociativity, delta_rank, is_invariant, Side, Tensor2};

/// Basis element `(b_p)^{t←s}_{j←i}` where `b_p` is the `p`-th basis vector
/// of the corner `e_jΛe_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockKey {
    pub source: usize,
    pub target: usize,
    pub source_copy: usize,
    pub target_copy: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmplifiedAlgebra<F: Field> {
    pub algebra: FinDimAlgebra<F>,
    pub base: FinDimAlgebra<F>,
    pub multiplicities: Vec<usize>,
    idempotents: Vec<Element<F>>,
    /// `corners[i][j]`: basis of `e_jΛe_i`.
    corners: Vec<Vec<Vec<Element<F>>>>,
    corner_spaces: Vec<Vec<Subspace<F>>>,
    keys: Vec<BlockKey>,
    index: BTreeMap<BlockKey, usize>,
}

/// Per `(source, target)` corner, the coordinates of an element of `Λ`.
type CornerCoords<F> = Vec<(usize, usize, Vec<F>)>;

pub fn amplify<F: Field>(
    lambda: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    m: &[usize],
) -> Result<AmplifiedAlgebra<F>> {
    let n = dec.n();
    if let Some(i) = (0..n).find(|&i| dec.multiplicity(i) != 1) {
        return Err(Error::NotBasic {
            class: i + 1,
            multiplicity: dec.multiplicity(i),
        });
    }
    if m.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.len(),
        });
    }
    if m.contains(&0) {
        return Err(Error::BadParams("multiplicities must be at least 1".into()));
    }
    let ctx = lambda.ctx();
    let idempotents: Vec<Element<F>> = (0..n).map(|i| dec.representative(i).clone()).collect();
    let mut corner_spaces = Vec::with_capacity(n);
    let mut corners: Vec<Vec<Vec<Element<F>>>> = Vec::with_capacity(n);
    for i in 0..n {
        let spaces: Vec<Subspace<F>> = (0..n)
            .map(|j| crate::structure::corner_space(lambda, &idempotents[j], &idempotents[i]))
            .collect();
        corners.push(
            spaces
                .iter()
                .map(|s| s.basis().iter().map(|v| Element::from_dense(v)).collect())
                .collect(),
        );
        corner_spaces.push(spaces);
    }

    let mut keys = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for s in 1..=m[i] {
                for t in 1..=m[j] {
                    for p in 0..corners[i][j].len() {
                        keys.push(BlockKey {
                            source: i,
                            target: j,
                            source_copy: s,
                            target_copy: t,
                            index: p,
                        });
                    }
                }
            }
        }
    }
    let index: BTreeMap<BlockKey, usize> = keys.iter().enumerate().map(|(k, key)| (*key, k)).collect();

    let coords = |i: usize, j: usize, a: &Element<F>| -> Vec<F> {
        corner_spaces[i][j]
            .coords(&a.to_dense(ctx))
            .expect("product of corner elements lies in the corner")
    };
    let mut entries = Vec::new();
    for (k1, a) in keys.iter().enumerate() {
        for (k2, b) in keys.iter().enumerate() {
            if b.target != a.source || b.target_copy != a.source_copy {
                continue;
            }
            let prod = lambda.mul(&corners[a.source][a.target][a.index], &corners[b.source][b.target][b.index]);
            if prod.is_zero() {
                continue;
            }
            for (r, c) in coords(b.source, a.target, &prod).into_iter().enumerate() {
                if !c.is_zero() {
                    let key = BlockKey {
                        source: b.source,
                        target: a.target,
                        source_copy: b.source_copy,
                        target_copy: a.target_copy,
                        index: r,
                    };
                    entries.push((k1, k2, index[&key], c));
                }
            }
        }
    }
    let mut unit = vec![F::zero(ctx); keys.len()];
    for i in 0..n {
        for (r, c) in coords(i, i, &idempotents[i]).into_iter().enumerate() {
            for t in 1..=m[i] {
                let key = BlockKey {
                    source: i,
                    target: i,
                    source_copy: t,
                    target_copy: t,
                    index: r,
                };
                unit[index[&key]] = c.clone();
            }
        }
    }
    let labels = keys
        .iter()
        .map(|k| {
            let v = &corners[k.source][k.target][k.index];
            let base = match v.coeffs().first() {
                Some((b, c)) if v.coeffs().len() == 1 && c.is_one() => lambda.label(b).to_string(),
                _ => format!("c{}{}.{}", k.source, k.target, k.index),
            };
            format!("{base}^({}<-{})", k.target_copy, k.source_copy)
        })
        .collect();
    let algebra = FinDimAlgebra::from_entries(ctx, labels, entries, unit)?;
    algebra.validate()?;
    Ok(AmplifiedAlgebra {
        algebra,
        base: lambda.clone(),
        multiplicities: m.to_vec(),
        idempotents,
        corners,
        corner_spaces,
        keys,
        index,
    })
}

/// Corner coordinates of a tensor, keyed by `(j, i, j', i')`.
type BlockCoords<F> = BTreeMap<(usize, usize, usize, usize), BTreeMap<(usize, usize), F>>;

impl<F: Field> AmplifiedAlgebra<F> {
    pub fn n(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn keys(&self) -> &[BlockKey] {
        &self.keys
    }

    pub fn key(&self, k: usize) -> BlockKey {
        self.keys[k]
    }

    pub fn position(&self, key: &BlockKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Basis of `e_jΛe_i`.
    pub fn corner(&self, source: usize, target: usize) -> &[Element<F>] {
        &self.corners[source][target]
    }

    /// Coordinates of `e_j a e_i` for every corner where it is nonzero.
    pub fn corner_coords(&self, a: &Element<F>) -> CornerCoords<F> {
        let ctx = self.base.ctx();
        let mut out = Vec::new();
        for j in 0..self.n() {
            let left = self.base.mul(&self.idempotents[j], a);
            if left.is_zero() {
                continue;
            }
            for i in 0..self.n() {
                let p = self.base.mul(&left, &self.idempotents[i]);
                if !p.is_zero() {
                    let c = self.corner_spaces[i][j].coords(&p.to_dense(ctx)).expect("corner element");
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    fn check_copies(&self, source: usize, target: usize, s: usize, t: usize) -> Result<()> {
        for (class, copy) in [(source, s), (target, t)] {
            if class >= self.n() {
                return Err(Error::IndexOutOfRange {
                    index: class,
                    bound: self.n(),
                });
            }
            if copy == 0 || copy > self.multiplicities[class] {
                return Err(Error::IndexOutOfRange {
                    index: copy,
                    bound: self.multiplicities[class],
                });
            }
        }
        Ok(())
    }

    fn lift_coords(&self, source: usize, target: usize, s: usize, t: usize, coords: &[F]) -> Element<F> {
        let mut out = Element::zero(self.dim());
        for (p, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let key = BlockKey {
                    source,
                    target,
                    source_copy: s,
                    target_copy: t,
                    index: p,
                };
                out.add_scaled(c, &self.algebra.basis(self.index[&key]));
            }
        }
        out
    }

    /// `φ^{t←s}` for `φ ∈ e_jΛe_i` with `i = source`, `j = target`.
    pub fn lift(&self, phi: &Element<F>, source: usize, target: usize, s: usize, t: usize) -> Result<Element<F>> {
        self.check_copies(source, target, s, t)?;
        let coords = self.corner_spaces[source][target]
            .coords(&phi.to_dense(self.base.ctx()))
            .ok_or(Error::BlockMismatch {
                source_class: source + 1,
                target: target + 1,
            })?;
        Ok(self.lift_coords(source, target, s, t, &coords))
    }

    /// Lifts every corner component of both tensor factors, with copies
    /// chosen per factor from the classes of that component.
    pub fn lift_tensor(
        &self,
        t: &Tensor2<F>,
        first: impl Fn(usize, usize) -> (usize, usize),
        second: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<Tensor2<F>> {
        let mut out = Tensor2::zero(self.dim());
        for (a, b, c) in t.iter() {
            for (i, j, x) in self.corner_coords(&self.base.basis(a)) {
                let (s, tt) = first(i, j);
                self.check_copies(i, j, s, tt)?;
                let lx = self.lift_coords(i, j, s, tt, &x);
                for (i2, j2, z) in self.corner_coords(&self.base.basis(b)) {
                    let (s2, t2) = second(i2, j2);
                    self.check_copies(i2, j2, s2, t2)?;
                    let lz = self.lift_coords(i2, j2, s2, t2, &z);
                    out = out.add(&Tensor2::simple(&lx, &lz).scale(c));
                }
            }
        }
        Ok(out)
    }

    /// Components of `y` in `e_jΛe_i ⊗ e_{j'}Λe_{i'}` as coordinate tensors
    /// over the corner bases, keyed `(i, j, i', j')`.
    fn block_coords(&self, y: &Tensor2<F>) -> BlockCoords<F> {
        let mut cache: BTreeMap<usize, CornerCoords<F>> = BTreeMap::new();
        let mut blocks: BlockCoords<F> = BTreeMap::new();
        for (a, b, c) in y.iter() {
            for k in [a, b] {
                cache.entry(k).or_insert_with(|| self.corner_coords(&self.base.basis(k)));
            }
            for (i, j, x) in &cache[&a] {
                for (i2, j2, z) in &cache[&b] {
                    let block = blocks.entry((*i, *j, *i2, *j2)).or_default();
                    for (p, xc) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        for (q, zc) in z.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                            let v = c.clone() * xc * zc;
                            match block.get_mut(&(p, q)) {
                                Some(old) => *old += &v,
                                None => {
                                    block.insert((p, q), v);
                                }
                            }
                        }
                    }
                }
            }
        }
        for block in blocks.values_mut() {
            block.retain(|_, v| !v.is_zero());
        }
        blocks.retain(|_, b| !b.is_empty());
        blocks
    }
}

/// Per class `i`, a set `S(i)` of copy pairs `(s, s′)` with `s ≤ m(i)` and
/// `s′ ≤ m(ν⁻¹i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "SpreadSpecJson", try_from = "SpreadSpecJson")]
pub struct SpreadSpec {
    sets: Vec<BTreeSet<(usize, usize)>>,
}

/// `{"classes":[{"i":1,"pairs":[[1,1]]}]}` with 1-based classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadSpecJson {
    pub classes: Vec<ClassPairs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPairs {
    pub i: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl From<SpreadSpec> for SpreadSpecJson {
    fn from(spec: SpreadSpec) -> Self {
        SpreadSpecJson {
            classes: spec
                .sets
                .iter()
                .enumerate()
                .map(|(i, set)| ClassPairs {
                    i: i + 1,
                    pairs: set.iter().copied().collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SpreadSpecJson> for SpreadSpec {
    type Error = Error;
    fn try_from(json: SpreadSpecJson) -> Result<Self> {
        let n = json.classes.len();
        let mut sets = vec![None; n];
        for c in json.classes {
            if c.i == 0 || c.i > n {
                return Err(Error::IndexOutOfRange { index: c.i, bound: n });
            }
            if sets[c.i - 1].is_some() {
                return Err(Error::BadParams(format!("class {} listed twice", c.i)));
            }
            sets[c.i - 1] = Some(c.pairs.into_iter().collect());
        }
        Ok(SpreadSpec {
            sets: sets.into_iter().map(|s| s.expect("every class listed once")).collect(),
        })
    }
}

impl SpreadSpec {
    pub fn new(sets: Vec<BTreeSet<(usize, usize)>>) -> Self {
        SpreadSpec { sets }
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn pairs(&self, i: usize) -> &BTreeSet<(usize, usize)> {
        &self.sets[i]
    }

    pub fn singleton(n: usize) -> Self {
        SpreadSpec {
            sets: vec![BTreeSet::from([(1, 1)]); n],
        }
    }

    pub fn full<F: Field>(m: &[usize], nak: &NakayamaData<F>) -> Self {
        SpreadSpec {
            sets: (0..m.len())
                .map(|i| {
                    let other = m[nak.nu_inv(i)];
                    (1..=m[i]).flat_map(|s| (1..=other).map(move |s2| (s, s2))).collect()
                })
                .collect(),
        }
    }

    /// The diagonal where `m(i) = m(ν⁻¹i)`, everything otherwise.
    pub fn diagonal<F: Field>(m: &[usize], nak: &NakayamaData<F>) -> Self {
        let full = Self::full(m, nak);
        SpreadSpec {
            sets: (0..m.len())
                .map(|i| {
                    if m[i] == m[nak.nu_inv(i)] {
                        (1..=m[i]).map(|s| (s, s)).collect()
                    } else {
                        full.sets[i].clone()
                    }
                })
                .collect(),
        }
    }

    /// Each pair kept with probability 1/2, redrawn until nonempty.
    pub fn random<F: Field, R: Rng>(m: &[usize], nak: &NakayamaData<F>, rng: &mut R) -> Self {
        let full = Self::full(m, nak);
        SpreadSpec {
            sets: full
                .sets
                .iter()
                .map(|all| loop {
                    let pick: BTreeSet<(usize, usize)> = all.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                    if !pick.is_empty() {
                        break pick;
                    }
                })
                .collect(),
        }
    }

    /// All `2^N` specs, `N = Σ_i m(i)·m(ν⁻¹i)`. Intended for tiny `N`.
    pub fn exhaustive<F: Field>(m: &[usize], nak: &NakayamaData<F>) -> Vec<Self> {
        let slots: Vec<(usize, (usize, usize))> = Self::full(m, nak)
            .sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |p| (i, *p)))
            .collect();
        assert!(slots.len() < 20, "exhaustive spec enumeration is limited to tiny index spaces");
        (0u32..1 << slots.len())
            .map(|mask| {
                let mut sets = vec![BTreeSet::new(); m.len()];
                for (bit, (i, p)) in slots.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        sets[*i].insert(*p);
                    }
                }
                SpreadSpec { sets }
            })
            .collect()
    }

    pub fn validate<F: Field>(&self, m: &[usize], nak: &NakayamaData<F>) -> Result<()> {
        if self.sets.len() != m.len() {
            return Err(Error::DimensionMismatch {
                expected: m.len(),
                found: self.sets.len(),
            });
        }
        for (i, set) in self.sets.iter().enumerate() {
            let bound = m[nak.nu_inv(i)];
            for &(s, s2) in set {
                if s == 0 || s > m[i] {
                    return Err(Error::IndexOutOfRange { index: s, bound: m[i] });
                }
                if s2 == 0 || s2 > bound {
                    return Err(Error::IndexOutOfRange { index: s2, bound });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Singleton,
    Diagonal,
    Full,
}

impl Preset {
    pub fn expand<F: Field>(self, m: &[usize], nak: &NakayamaData<F>) -> SpreadSpec {
        match self {
            Preset::Singleton => SpreadSpec::singleton(m.len()),
            Preset::Diagonal => SpreadSpec::diagonal(m, nak),
            Preset::Full => SpreadSpec::full(m, nak),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singleton" => Ok(Preset::Singleton),
            "diagonal" => Ok(Preset::Diagonal),
            "full" => Ok(Preset::Full),
            _ => Err(Error::BadParams(format!("unknown preset {s:?}"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Singleton => "singleton",
            Preset::Diagonal => "diagonal",
            Preset::Full => "full",
        })
    }
}

/// Distributes each block of `y` in `e_jΛe_i ⊗ e_{ν⁻¹i}Λe_j` as
/// `Σ_t Σ_{(s,s′)∈S(i)} φ^{t←s} ⊗ ψ^{s′←t}`. Blocks outside that pattern are
/// rejected, not projected away.
pub fn spread<F: Field>(
    amp: &AmplifiedAlgebra<F>,
    y: &Tensor2<F>,
    spec: &SpreadSpec,
    nak: &NakayamaData<F>,
) -> Result<Tensor2<F>> {
    let m = &amp.multiplicities;
    spec.validate(m, nak)?;
    let mut x = Tensor2::zero(amp.dim());
    for ((i, j, i2, j2), block) in amp.block_coords(y) {
        if i2 != j || j2 != nak.nu_inv(i) {
            return Err(Error::BadBlockSupport(format!(
                "component in corners ({}←{}) ⊗ ({}←{})",
                j + 1,
                i + 1,
                j2 + 1,
                i2 + 1
            )));
        }
        for ((p, q), c) in block {
            for t in 1..=m[j] {
                for &(s, s2) in spec.pairs(i) {
                    let a = amp.index[&BlockKey {
                        source: i,
                        target: j,
                        source_copy: s,
                        target_copy: t,
                        index: p,
                    }];
                    let b = amp.index[&BlockKey {
                        source: j,
                        target: j2,
                        source_copy: t,
                        target_copy: s2,
                        index: q,
                    }];
                    x.add_term(a, b, &c);
                }
            }
        }
    }
    Ok(x)
}

/// Whether each `S(i)` is the graph of a bijection
/// `{1..m(i)} → {1..m(ν⁻¹i)}`.
pub fn is_bijection_graph<F: Field>(spec: &SpreadSpec, m: &[usize], nak: &NakayamaData<F>) -> Vec<bool> {
    (0..m.len())
        .map(|i| {
            let other = m[nak.nu_inv(i)];
            let set = spec.pairs(i);
            let firsts: BTreeSet<usize> = set.iter().map(|p| p.0).collect();
            let seconds: BTreeSet<usize> = set.iter().map(|p| p.1).collect();
            m[i] == other
                && set.len() == m[i]
                && firsts.len() == m[i]
                && seconds.len() == other
                && firsts.iter().all(|&s| s >= 1 && s <= m[i])
                && seconds.iter().all(|&s| s >= 1 && s <= other)
        })
        .collect()
}

/// Per class, whether the 0/1 incidence matrix of `S(i)` (rows `1..=m(i)`,
/// columns `1..=m(ν⁻¹i)`) is square and invertible over the ground field.
/// Bijection graphs are the permutation matrices among these.
pub fn incidence_invertible<F: Field>(ctx: &F::Ctx, spec: &SpreadSpec, m: &[usize], nak: &NakayamaData<F>) -> Vec<bool> {
    (0..m.len())
        .map(|i| {
            let other = m[nak.nu_inv(i)];
            if other != m[i] {
                return false;
            }
            let mut mat: Matrix<F> = Matrix::zeros(ctx, m[i], other);
            for &(s, t) in spec.pairs(i) {
                mat.set(s - 1, t - 1, F::one(ctx));
            }
            mat.rank() == m[i]
        })
        .collect()
}

/// `ε_A((b_p)^{t←s}_{ν⁻¹i←i}) = ε_Λ(b_p)` when `(s, t) ∈ S(i)`, zero on
/// every other basis element.
pub fn build_counit<F: Field>(
    amp: &AmplifiedAlgebra<F>,
    spec: &SpreadSpec,
    nak: &NakayamaData<F>,
    eps: &Functional<F>,
) -> Result<Functional<F>> {
    let m = &amp.multiplicities;
    spec.validate(m, nak)?;
    if let Some(i) = is_bijection_graph(spec, m, nak).iter().position(|b| !b) {
        return Err(Error::NotBijection { class: i + 1 });
    }
    let ctx = amp.base.ctx();
    let values = amp
        .keys
        .iter()
        .map(|k| {
            if k.target == nak.nu_inv(k.source) && spec.pairs(k.source).contains(&(k.source_copy, k.target_copy)) {
                eps.eval(ctx, &amp.corners[k.source][k.target][k.index])
            } else {
                F::zero(ctx)
            }
        })
        .collect();
    Ok(Functional::new(values))
}

/// Solution set of `(ε⊗id)x = 1 = (id⊗ε)x` in `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounitSolution<F: Field> {
    pub particular: Functional<F>,
    /// Dimension of the affine solution space.
    pub freedom: usize,
}

/// Independent oracle for counitality: solves the `2·dim A` linear equations
/// directly.
pub fn counit_feasible<F: Field>(alg: &FinDimAlgebra<F>, x: &Tensor2<F>) -> Option<CounitSolution<F>> {
    let ctx = alg.ctx();
    let d = alg.dim();
    let mut a: Matrix<F> = Matrix::zeros(ctx, 2 * d, d);
    for (p, q, c) in x.iter() {
        // (ε⊗id): coefficient of b_q gets x_{pq} ε_p
        let v = a.get(q, p).clone() + c;
        a.set(q, p, v);
        // (id⊗ε): coefficient of b_p gets x_{pq} ε_q
        let v = a.get(d + p, q).clone() + c;
        a.set(d + p, q, v);
    }
    let one = alg.one().to_dense(ctx);
    let rhs: Vec<F> = one.iter().chain(&one).cloned().collect();
    let b = Matrix::from_columns(ctx, 2 * d, &[rhs]);
    solve_linear(&a, &b).ok().map(|sol| CounitSolution {
        particular: Functional::new(sol.particular.column(0)),
        freedom: sol.kernel.len(),
    })
}

/// Exact checks on a comultiplication `a ↦ a·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComultiplicationReport {
    pub dim: usize,
    pub x: TensorJson,
    pub invariant: bool,
    pub invariance_witness: Option<usize>,
    pub coassociative: bool,
    pub coassociativity_witness: Option<(usize, usize, usize)>,
    pub rank: usize,
    pub injective: bool,
    /// Per class, whether `S(i)` is a bijection graph.
    pub bijection_graphs: Vec<bool>,
    /// A counit was constructed from the spec and satisfies both laws.
    pub counital: bool,
    pub counit: Option<Vec<String>>,
    pub counit_feasible: bool,
    pub counit_freedom: Option<usize>,
    /// The constructed counit solves the oracle's system (vacuous when none
    /// was constructed).
    pub counit_consistent: bool,
}

impl ComultiplicationReport {
    pub fn all_bijections(&self) -> bool {
        self.bijection_graphs.iter().all(|&b| b)
    }

    /// Invariant, coassociative, and the two counit decisions agree with
    /// each other and with the bijection-graph criterion.
    pub fn consistent(&self) -> bool {
        let bij = self.all_bijections();
        self.invariant
            && self.coassociative
            && self.counit_feasible == bij
            && self.counital == bij
            && self.counit_consistent
    }
}

pub fn comultiplication_report<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    x: &Tensor2<F>,
    bijection_graphs: Vec<bool>,
    counit: Option<&Functional<F>>,
) -> Result<ComultiplicationReport> {
    let invariance_witness = is_invariant(alg, x);
    let coassociativity_witness = check_coassociativity(alg, x);
    let rank = delta_rank(alg, x);
    let oracle = counit_feasible(alg, x);
    let one = alg.one();
    let counital = match counit {
        Some(eps) => {
            apply_functional(Side::Left, eps, x)? == one && apply_functional(Side::Right, eps, x)? == one
        }
        None => false,
    };
    Ok(ComultiplicationReport {
        dim: alg.dim(),
        x: tensor_to_json(x),
        invariant: invariance_witness.is_none(),
        invariance_witness,
        coassociative: coassociativity_witness.is_none(),
        coassociativity_witness,
        rank,
        injective: rank == alg.dim(),
        bijection_graphs,
        counital,
        counit: counit.map(crate::io::functional_to_json),
        counit_feasible: oracle.is_some(),
        counit_freedom: oracle.as_ref().map(|s| s.freedom),
        // a functional satisfying both laws is by definition a solution
        counit_consistent: counit.is_none() || counital,
    })
}

/// Spreads `y` by `spec` and reports on the amplified algebra itself.
pub fn full_report<F: GroundField>(
    amp: &AmplifiedAlgebra<F>,
    x: &Tensor2<F>,
    spec: &SpreadSpec,
    nak: &NakayamaData<F>,
    eps: &Functional<F>,
) -> Result<ComultiplicationReport> {
    let bij = is_bijection_graph(spec, &amp.multiplicities, nak);
    let counit = if bij.iter().all(|&b| b) {
        Some(build_counit(amp, spec, nak, eps)?)
    } else {
        None
    };
    comultiplication_report(&amp.algebra, x, bij, counit.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{diagonal_algebra, matrix_algebra, nakayama_algebra, nsy_algebra, nsy_reference_tensor};
    use crate::frobenius::frobenius_pair;
    use crate::scalar::Rational;
    use crate::structure::{canonical_decomposition, nakayama};
    use crate::tensor::act_left;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    struct Base {
        lambda: FinDimAlgebra<Rational>,
        dec: CanonicalDecomposition<Rational>,
        nak: NakayamaData<Rational>,
    }

    fn base(lambda: FinDimAlgebra<Rational>) -> Base {
        let dec = canonical_decomposition(&lambda, 0).unwrap();
        let nak = nakayama(&lambda, &dec).unwrap();
        Base { lambda, dec, nak }
    }

    fn field() -> Base {
        base(diagonal_algebra(&(), 1))
    }

    fn e(amp: &AmplifiedAlgebra<Rational>, t: usize, s: usize) -> usize {
        amp.position(&BlockKey {
            source: 0,
            target: 0,
            source_copy: s,
            target_copy: t,
            index: 0,
        })
        .unwrap()
    }

    #[test]
    fn amplified_field_is_a_matrix_algebra() {
        let b = field();
        let amp = amplify(&b.lambda, &b.dec, &[2]).unwrap();
        assert_eq!(amp.dim(), 4);
        let one = b.lambda.one();
        assert_eq!(amp.lift(&one, 0, 0, 1, 2).unwrap(), amp.algebra.basis(e(&amp, 2, 1)));
        // E_{ts} E_{s'u} = δ_{s s'} E_{tu}
        let prod = amp.algebra.mul(&amp.algebra.basis(e(&amp, 2, 1)), &amp.algebra.basis(e(&amp, 1, 2)));
        assert_eq!(prod, amp.algebra.basis(e(&amp, 2, 2)));
        assert!(amp.lift(&one, 0, 0, 3, 1).is_err());
    }

    #[test]
    fn dimension_formula_and_errors() {
        let b = base(nakayama_algebra(&(), 2, 2).unwrap());
        assert_eq!(amplify(&b.lambda, &b.dec, &[1, 1]).unwrap().dim(), 4);
        assert_eq!(amplify(&b.lambda, &b.dec, &[1, 2]).unwrap().dim(), 9);
        let amp = amplify(&b.lambda, &b.dec, &[1, 2]).unwrap();
        // X_{0,1} lies in e_0Λe_1: source 1, target 0
        assert!(matches!(
            amp.lift(&b.lambda.basis(1), 0, 1, 1, 1),
            Err(Error::BlockMismatch { .. })
        ));
        assert!(amp.lift(&b.lambda.basis(1), 1, 0, 2, 1).is_ok());

        let m2 = base(matrix_algebra(&(), 2));
        assert!(matches!(amplify(&m2.lambda, &m2.dec, &[1]), Err(Error::NotBasic { .. })));
    }

    #[test]
    fn spreading_over_a_field() {
        let b = field();
        let amp = amplify(&b.lambda, &b.dec, &[2]).unwrap();
        let y = Tensor2::from_terms(1, [(0, 0, q(1))]);
        let x = spread(&amp, &y, &SpreadSpec::singleton(1), &b.nak).unwrap();
        let expected = Tensor2::from_terms(4, [(e(&amp, 1, 1), e(&amp, 1, 1), q(1)), (e(&amp, 2, 1), e(&amp, 1, 2), q(1))]);
        assert_eq!(x, expected);
        assert!(counit_feasible(&amp.algebra, &x).is_none());

        let diag = SpreadSpec::diagonal(&[2], &b.nak);
        let x = spread(&amp, &y, &diag, &b.nak).unwrap();
        let mut expected = Tensor2::zero(4);
        for t in 1..=2 {
            for s in 1..=2 {
                expected.add_term(e(&amp, t, s), e(&amp, s, t), &q(1));
            }
        }
        assert_eq!(x, expected);
        let eps = build_counit(&amp, &diag, &b.nak, &Functional::new(vec![q(1)])).unwrap();
        let mut trace = vec![q(0); 4];
        trace[e(&amp, 1, 1)] = q(1);
        trace[e(&amp, 2, 2)] = q(1);
        assert_eq!(eps.values(), trace.as_slice());
        let oracle = counit_feasible(&amp.algebra, &x).unwrap();
        assert_eq!((oracle.particular, oracle.freedom), (eps, 0));
    }

    #[test]
    fn bijection_graphs() {
        let nak = NakayamaData::<Rational>::from_permutation(vec![0]).unwrap();
        let s = |pairs: &[(usize, usize)]| SpreadSpec::new(vec![pairs.iter().copied().collect()]);
        assert_eq!(is_bijection_graph(&s(&[(1, 1), (2, 2)]), &[2], &nak), vec![true]);
        assert_eq!(is_bijection_graph(&s(&[(1, 1)]), &[2], &nak), vec![false]);
        assert_eq!(is_bijection_graph(&s(&[(1, 1), (2, 1)]), &[2], &nak), vec![false]);
        assert_eq!(is_bijection_graph(&s(&[(1, 2), (2, 1)]), &[2], &nak), vec![true]);
    }

    #[test]
    fn spec_json() {
        let spec = SpreadSpec::new(vec![BTreeSet::from([(1, 1)]), BTreeSet::from([(1, 2), (2, 1)])]);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"classes":[{"i":1,"pairs":[[1,1]]},{"i":2,"pairs":[[1,2],[2,1]]}]}"#);
        assert_eq!(serde_json::from_str::<SpreadSpec>(&text).unwrap(), spec);
        assert!(serde_json::from_str::<SpreadSpec>(r#"{"classes":[{"i":2,"pairs":[]}]}"#).is_err());
        assert_eq!("full".parse::<Preset>().unwrap(), Preset::Full);
        assert!("other".parse::<Preset>().is_err());
    }

    #[test]
    fn rejects_tensors_outside_the_block_pattern() {
        let b = base(nakayama_algebra(&(), 2, 2).unwrap());
        let amp = amplify(&b.lambda, &b.dec, &[1, 1]).unwrap();
        let y = Tensor2::from_terms(4, [(0, 0, q(1))]);
        assert!(matches!(
            spread(&amp, &y, &SpreadSpec::singleton(2), &b.nak),
            Err(Error::BadBlockSupport(_))
        ));
    }

    /// Maps `X_{i,k}^{r,s}` to `(X_{i,k})^{r+1←s+1}` with source `i+k` and
    /// target `i`.
    fn nsy_to_amplified(n: usize, l: usize, m: &[usize]) -> (crate::families::NsyPresentation<Rational>, AmplifiedAlgebra<Rational>, Vec<usize>) {
        let nsy = nsy_algebra::<Rational>(&(), n, l, m).unwrap();
        let b = base(nakayama_algebra(&(), n, l).unwrap());
        let amp = amplify(&b.lambda, &b.dec, m).unwrap();
        let mut perm = vec![0; nsy.dim()];
        for (i, k, r, s) in nsy.keys() {
            let phi = b.lambda.basis(i * l + k);
            let lifted = amp.lift(&phi, (i + k) % n, i, s + 1, r + 1).unwrap();
            let (pos, c) = lifted.coeffs().first().unwrap();
            assert!(c.is_one() && lifted.coeffs().len() == 1);
            perm[nsy.x(i, k, r, s).unwrap()] = pos;
        }
        (nsy, amp, perm)
    }

    #[test]
    fn nsy_algebra_is_the_amplified_cyclic_nakayama_algebra() {
        for (n, l, m) in [(2, 2, vec![1, 2]), (3, 2, vec![2, 1, 1]), (2, 3, vec![2, 2]), (1, 3, vec![3])] {
            let (nsy, amp, perm) = nsy_to_amplified(n, l, &m);
            assert_eq!(amp.algebra.permute_basis(&perm).entries().collect::<Vec<_>>(), nsy.algebra.entries().collect::<Vec<_>>());
        }
    }

    #[test]
    fn singleton_spread_is_the_reference_tensor() {
        for (n, l, m) in [(2, 2, vec![1, 2]), (3, 2, vec![2, 1, 1]), (2, 3, vec![2, 3])] {
            let (nsy, amp, perm) = nsy_to_amplified(n, l, &m);
            let b = base(nakayama_algebra(&(), n, l).unwrap());
            let pair = frobenius_pair(&b.lambda, &b.dec, &b.nak, 0).unwrap();
            let x = spread(&amp, &pair.y, &SpreadSpec::singleton(n), &b.nak).unwrap();
            let mut inverse = vec![0; perm.len()];
            for (k, &p) in perm.iter().enumerate() {
                inverse[p] = k;
            }
            let in_nsy = x.map(nsy.dim(), |a| nsy.algebra.basis(inverse[a]), |a| nsy.algebra.basis(inverse[a]));
            assert_eq!(in_nsy, nsy_reference_tensor(&nsy));
        }
    }

    #[test]
    fn compatibility_square() {
        let b = base(nakayama_algebra(&(), 2, 3).unwrap());
        let pair = frobenius_pair(&b.lambda, &b.dec, &b.nak, 0).unwrap();
        let amp = amplify(&b.lambda, &b.dec, &[2, 2]).unwrap();
        let x = spread(&amp, &pair.y, &SpreadSpec::singleton(2), &b.nak).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for phi in amp.corner(i, j).to_vec() {
                    for s in 1..=2 {
                        for t in 1..=2 {
                            let lhs = act_left(&amp.algebra, &amp.lift(&phi, i, j, s, t).unwrap(), &x).unwrap();
                            let delta = act_left(&b.lambda, &phi, &pair.y).unwrap();
                            let rhs = amp.lift_tensor(&delta, |_, _| (1, t), |_, _| (s, 1)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn lift_is_multiplicative(p in 0usize..4, q2 in 0usize..4, u in 1usize..=2, s in 1usize..=2, t in 1usize..=2) {
            let b = base(nakayama_algebra(&(), 2, 2).unwrap());
            let amp = amplify(&b.lambda, &b.dec, &[2, 2]).unwrap();
            let all: Vec<(usize, usize, Element<Rational>)> = (0..2)
                .flat_map(|i| (0..2).flat_map(move |j| [(i, j)]))
                .flat_map(|(i, j)| amp.corner(i, j).iter().map(move |c| (i, j, c.clone())).collect::<Vec<_>>())
                .collect();
            let (i1, j1, phi) = &all[p % all.len()];
            let (i2, j2, psi) = &all[q2 % all.len()];
            // φ ∈ e_{j1}Λe_{i1}, ψ ∈ e_{j2}Λe_{i2}; compose when i1 = j2
            prop_assume!(i1 == j2);
            let prod = b.lambda.mul(phi, psi);
            let lhs = amp.lift(&prod, *i2, *j1, s, t).unwrap();
            let rhs = amp.algebra.mul(&amp.lift(phi, *i1, *j1, u, t).unwrap(), &amp.lift(psi, *i2, *j2, s, u).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
