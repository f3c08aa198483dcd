//! Deterministic generators: cyclic Nakayama algebras `B_{n,ℓ}` and their
//! amplifications in the `X_{i,k}^{r,s}` basis, matrix algebras, truncated
//! polynomial rings, products of copies of the field, abelian group algebras,
//! and the `A₂` path algebra (a non-self-injective control).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::FinDimAlgebra;
use crate::error::{Error, Result};
use crate::io::AnyAlgebra;
use crate::scalar::{Field, FieldSpec, Fp, PrimeModulus, Rational};
use crate::tensor::Tensor2;

/// `B_{n,ℓ}` amplified by multiplicities `m`, in the basis `X_{i,k}^{r,s}`
/// with `i ∈ Z_n`, `0 ≤ k < ℓ`, `r < m_i`, `s < m_{i+k}` (all 0-based).
///
/// `X_{i,k}^{r,s}` lies in `e_i Λ e_{i+k}` and is the path of length `k`
/// from vertex `i`, composed from copy `s` of `P_{i+k}` to copy `r` of `P_i`.
#[derive(Clone, Debug)]
pub struct NsyPresentation<F: Field> {
    pub n: usize,
    pub l: usize,
    pub m: Vec<usize>,
    pub algebra: FinDimAlgebra<F>,
    index: BTreeMap<(usize, usize, usize, usize), usize>,
}

impl<F: Field> NsyPresentation<F> {
    /// Basis index of `X_{i,k}^{r,s}` (`i` taken mod `n`).
    pub fn x(&self, i: usize, k: usize, r: usize, s: usize) -> Option<usize> {
        self.index.get(&(i % self.n, k, r, s)).copied()
    }

    /// `(i, k, r, s)` for every basis element, in basis order.
    pub fn keys(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut v: Vec<_> = self.index.iter().map(|(k, &idx)| (idx, *k)).collect();
        v.sort();
        v.into_iter().map(|(_, k)| k).collect()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

fn check_params(n: usize, l: usize, m: &[usize]) -> Result<()> {
    if n == 0 || l == 0 {
        return Err(Error::BadParams(format!("need n >= 1 and l >= 1, got n={n}, l={l}")));
    }
    if m.len() != n {
        return Err(Error::BadParams(format!(
            "expected {n} multiplicities, got {}",
            m.len()
        )));
    }
    if m.contains(&0) {
        return Err(Error::BadParams("multiplicities must be positive".into()));
    }
    Ok(())
}

pub fn nsy_algebra<F: Field>(ctx: &F::Ctx, n: usize, l: usize, m: &[usize]) -> Result<NsyPresentation<F>> {
    check_params(n, l, m)?;
    let mut index = BTreeMap::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for k in 0..l {
            for r in 0..m[i] {
                for s in 0..m[(i + k) % n] {
                    index.insert((i, k, r, s), labels.len());
                    labels.push(format!("X[{i},{k};{r},{s}]"));
                }
            }
        }
    }
    let one = F::one(ctx);
    let mut entries = Vec::new();
    for (&(i, k, r, s), &a) in &index {
        let j = (i + k) % n;
        for k2 in 0..l - k {
            for s2 in 0..m[(j + k2) % n] {
                let b = index[&(j, k2, s, s2)];
                let c = index[&(i, k + k2, r, s2)];
                entries.push((a, b, c, one.clone()));
            }
        }
    }
    let mut unit = vec![F::zero(ctx); labels.len()];
    for i in 0..n {
        for r in 0..m[i] {
            unit[index[&(i, 0, r, r)]] = one.clone();
        }
    }
    let algebra = FinDimAlgebra::from_entries(ctx, labels, entries, unit)?;
    Ok(NsyPresentation {
        n,
        l,
        m: m.to_vec(),
        algebra,
        index,
    })
}

/// `B_{n,ℓ}`: paths `p_{i,k} = X_{i,k}^{0,0}` on the cyclic quiver with `n`
/// vertices, modulo paths of length `ℓ`.
pub fn nakayama_algebra<F: Field>(ctx: &F::Ctx, n: usize, l: usize) -> Result<FinDimAlgebra<F>> {
    Ok(nsy_algebra(ctx, n, l, &vec![1; n.max(1)])?.algebra)
}

/// `Σ_i Σ_{r<m_i} Σ_k X_{i,k}^{r,0} ⊗ X_{i+k-ℓ+1, ℓ-1-k}^{0,r}`
pub fn nsy_reference_tensor<F: Field>(nsy: &NsyPresentation<F>) -> Tensor2<F> {
    let (n, l) = (nsy.n, nsy.l);
    let one = F::one(nsy.algebra.ctx());
    let mut t = Tensor2::zero(nsy.dim());
    for i in 0..n {
        for r in 0..nsy.m[i] {
            for k in 0..l {
                let j = (i + k + n * l - (l - 1)) % n;
                let a = nsy.x(i, k, r, 0).expect("index in range");
                let b = nsy.x(j, l - 1 - k, 0, r).expect("index in range");
                t.add_term(a, b, &one);
            }
        }
    }
    t
}

/// `M_size(k)` in the matrix-unit basis, `E_{uv}` at index `u * size + v`.
pub fn matrix_algebra<F: Field>(ctx: &F::Ctx, size: usize) -> FinDimAlgebra<F> {
    let idx = |u: usize, v: usize| u * size + v;
    let mut labels = Vec::new();
    for u in 0..size {
        for v in 0..size {
            labels.push(format!("E{}{}", u + 1, v + 1));
        }
    }
    let mut entries = Vec::new();
    for u in 0..size {
        for v in 0..size {
            for w in 0..size {
                entries.push((idx(u, v), idx(v, w), idx(u, w), F::one(ctx)));
            }
        }
    }
    let mut unit = vec![F::zero(ctx); size * size];
    for u in 0..size {
        unit[idx(u, u)] = F::one(ctx);
    }
    FinDimAlgebra::from_entries(ctx, labels, entries, unit).expect("valid matrix algebra")
}

/// `k[x]/(x^l)` in the monomial basis.
pub fn truncated_poly<F: Field>(ctx: &F::Ctx, l: usize) -> FinDimAlgebra<F> {
    let labels = (0..l).map(|k| format!("x^{k}")).collect();
    let mut entries = Vec::new();
    for a in 0..l {
        for b in 0..l - a {
            entries.push((a, b, a + b, F::one(ctx)));
        }
    }
    let mut unit = vec![F::zero(ctx); l];
    unit[0] = F::one(ctx);
    FinDimAlgebra::from_entries(ctx, labels, entries, unit).expect("valid truncated polynomial ring")
}

/// `k × ... × k` (`n` factors).
pub fn diagonal_algebra<F: Field>(ctx: &F::Ctx, n: usize) -> FinDimAlgebra<F> {
    let labels = (0..n).map(|i| format!("e{}", i + 1)).collect();
    let entries = (0..n).map(|i| (i, i, i, F::one(ctx)));
    FinDimAlgebra::from_entries(ctx, labels, entries, vec![F::one(ctx); n]).expect("valid product of fields")
}

/// Group algebra of `Z/d_1 × ... × Z/d_r`, basis indexed in mixed radix.
pub fn group_algebra<F: Field>(ctx: &F::Ctx, factors: &[usize]) -> Result<FinDimAlgebra<F>> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(Error::BadParams("cyclic factors must be positive".into()));
    }
    let order: usize = factors.iter().product();
    let decode = |mut idx: usize| {
        let mut g = vec![0; factors.len()];
        for (slot, &d) in g.iter_mut().zip(factors).rev() {
            *slot = idx % d;
            idx /= d;
        }
        g
    };
    let encode = |g: &[usize]| g.iter().zip(factors).fold(0, |acc, (&x, &d)| acc * d + x);
    let labels = (0..order)
        .map(|i| {
            let g: Vec<String> = decode(i).iter().map(|x| x.to_string()).collect();
            format!("g[{}]", g.join(","))
        })
        .collect();
    let mut entries = Vec::new();
    for a in 0..order {
        for b in 0..order {
            let (ga, gb) = (decode(a), decode(b));
            let sum: Vec<usize> = ga
                .iter()
                .zip(&gb)
                .zip(factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect();
            entries.push((a, b, encode(&sum), F::one(ctx)));
        }
    }
    let mut unit = vec![F::zero(ctx); order];
    unit[0] = F::one(ctx);
    FinDimAlgebra::from_entries(ctx, labels, entries, unit)
}

/// Path algebra of `1 --a--> 2`: basis `e1, e2, a` with `e1 a = a = a e2`.
pub fn a2_path_algebra<F: Field>(ctx: &F::Ctx) -> FinDimAlgebra<F> {
    let one = F::one(ctx);
    FinDimAlgebra::from_entries(
        ctx,
        vec!["e1".into(), "e2".into(), "a".into()],
        vec![
            (0, 0, 0, one.clone()),
            (1, 1, 1, one.clone()),
            (0, 2, 2, one.clone()),
            (2, 1, 2, one.clone()),
        ],
        vec![one.clone(), one, F::zero(ctx)],
    )
    .expect("valid path algebra")
}

/// Which generator produced an algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Nsy { n: usize, l: usize, m: Vec<usize> },
    Matrix { size: usize },
    Truncated { l: usize },
    Diagonal { n: usize },
    Group { factors: Vec<usize> },
    PathA2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Family::Nsy { n, l, m } => write!(f, "nsy({n},{l},({}))", list(m)),
            Family::Matrix { size } => write!(f, "matrix({size})"),
            Family::Truncated { l } => write!(f, "truncated({l})"),
            Family::Diagonal { n } => write!(f, "diagonal({n})"),
            Family::Group { factors } => write!(f, "group({})", list(factors)),
            Family::PathA2 => write!(f, "path_a2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(flatten)]
    pub family: Family,
    pub field: FieldSpec,
}

impl Provenance {
    pub fn key(&self) -> String {
        format!("{} over {}", self.family, self.field)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

fn build<F: Field>(ctx: &F::Ctx, family: &Family) -> Result<FinDimAlgebra<F>> {
    Ok(match family {
        Family::Nsy { n, l, m } => nsy_algebra(ctx, *n, *l, m)?.algebra,
        Family::Matrix { size } => {
            if *size == 0 {
                return Err(Error::BadParams("matrix size must be positive".into()));
            }
            matrix_algebra(ctx, *size)
        }
        Family::Truncated { l } => {
            if *l == 0 {
                return Err(Error::BadParams("truncation degree must be positive".into()));
            }
            truncated_poly(ctx, *l)
        }
        Family::Diagonal { n } => {
            if *n == 0 {
                return Err(Error::BadParams("need at least one factor".into()));
            }
            diagonal_algebra(ctx, *n)
        }
        Family::Group { factors } => group_algebra(ctx, factors)?,
        Family::PathA2 => a2_path_algebra(ctx),
    })
}

/// Builds the algebra described by `prov`.
pub fn generate(prov: &Provenance) -> Result<AnyAlgebra> {
    match prov.field {
        FieldSpec::Rationals => Ok(AnyAlgebra::Rational(build::<Rational>(&(), &prov.family)?)),
        FieldSpec::PrimeField(p) => {
            let ctx = PrimeModulus::new(p).map_err(|e| Error::BadParams(e.to_string()))?;
            Ok(AnyAlgebra::Prime(build::<Fp>(&ctx, &prov.family)?))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Small,
    Standard,
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Profile::Small),
            "standard" => Ok(Profile::Standard),
            _ => Err(Error::BadParams(format!("unknown profile {s:?}"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Small => "small",
            Profile::Standard => "standard",
        })
    }
}

/// All vectors of length `n` with entries in `1..=max`, lexicographic.
pub fn multiplicity_vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Provenance of every corpus algebra, in a fixed order.
pub fn corpus_provenance(profile: Profile) -> Vec<Provenance> {
    let (shapes, max_m): (&[(usize, usize)], usize) = match profile {
        Profile::Small => (&[(1, 1), (1, 2), (2, 2), (1, 3)], 2),
        Profile::Standard => (&[(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 2), (3, 3)], 3),
    };
    let q = FieldSpec::Rationals;
    let mut out = Vec::new();
    for &(n, l) in shapes {
        for m in multiplicity_vectors(n, max_m) {
            out.push(Provenance {
                family: Family::Nsy { n, l, m },
                field: q,
            });
        }
    }
    out.push(Provenance {
        family: Family::Matrix { size: 2 },
        field: q,
    });
    out.push(Provenance {
        family: Family::Diagonal { n: 2 },
        field: q,
    });
    out.push(Provenance {
        family: Family::Group { factors: vec![2] },
        field: FieldSpec::PrimeField(2),
    });
    if profile == Profile::Standard {
        out.push(Provenance {
            family: Family::Group { factors: vec![3] },
            field: FieldSpec::PrimeField(3),
        });
    }
    out
}

pub fn corpus(profile: Profile) -> Vec<(Provenance, AnyAlgebra)> {
    corpus_provenance(profile)
        .into_iter()
        .map(|p| {
            let a = generate(&p).expect("corpus parameters are valid");
            (p, a)
        })
        .collect()
}
