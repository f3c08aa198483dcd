//! End-to-end runs on an input algebra: structure analysis, the Frobenius
//! pair of its basic algebra, spreading in the amplified model, and
//! transport of the result back to the input basis.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Element, FinDimAlgebra, Functional};
use crate::amplify::{
    amplify, build_counit, comultiplication_report, incidence_invertible, is_bijection_graph, spread, AmplifiedAlgebra,
    ComultiplicationReport, Preset, SpreadSpec,
};
use crate::error::{Error, Result};
use crate::families::{corpus, Profile, Provenance};
use crate::frobenius::{check_pair, frobenius_pair, random_peirce_unit, transport_pair, verify_support, FrobeniusPair, SupportReport};
use crate::io::AnyAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{Field, GroundField};
use crate::structure::{
    basic_reduction, canonical_decomposition, duality_permutation, iso_witnesses, nakayama, BasicReduction,
    CanonicalDecomposition, IsoWitness, NakayamaData,
};
use crate::tensor::Tensor2;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 2024;

/// Random specs per algebra in a corpus sweep.
pub const RANDOM_SPECS: usize = 10;

/// Seeded counit transports per algebra in a corpus sweep.
pub const TRANSPORTS: usize = 20;

#[derive(Clone, Debug)]
pub struct Analysis<F: Field> {
    pub decomposition: CanonicalDecomposition<F>,
    pub nakayama: NakayamaData<F>,
    pub basic: BasicReduction<F>,
}

/// Validates the algebra, then decomposes it, computes ν and reduces to the
/// basic algebra.
pub fn analyze<F: GroundField>(alg: &FinDimAlgebra<F>, seed: u64) -> Result<Analysis<F>> {
    alg.validate()?;
    let decomposition = canonical_decomposition(alg, seed)?;
    let nakayama = nakayama(alg, &decomposition)?;
    let basic = basic_reduction(alg, &decomposition)?;
    Ok(Analysis {
        decomposition,
        nakayama,
        basic,
    })
}

/// Machine-readable summary of an [`Analysis`]; classes are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub field: String,
    pub dim: usize,
    pub n: usize,
    pub multiplicities: Vec<usize>,
    pub nakayama: Vec<usize>,
    /// Coefficient vectors of `e_{11}, …, e_{1m(1)}, e_{21}, …`.
    pub idempotents: Vec<Vec<String>>,
    pub radical_dim: usize,
    pub nilpotency_index: usize,
    pub basic_dim: usize,
    pub flags: Vec<String>,
}

impl<F: GroundField> Analysis<F> {
    pub fn report(&self, alg: &FinDimAlgebra<F>) -> AnalysisReport {
        let dec = &self.decomposition;
        let mut flags = vec![if dec.split_certified { "split" } else { "not_split_unverified" }.to_string()];
        flags.push("self_injective".into());
        if dec.is_basic() {
            flags.push("basic".into());
        }
        if self.nakayama.is_identity() {
            flags.push("nakayama_identity".into());
        }
        AnalysisReport {
            field: F::spec(alg.ctx()).to_string(),
            dim: alg.dim(),
            n: dec.n(),
            multiplicities: dec.multiplicities(),
            nakayama: self.nakayama.permutation().iter().map(|k| k + 1).collect(),
            idempotents: dec
                .classes
                .iter()
                .flatten()
                .map(|e| e.to_dense(alg.ctx()).iter().map(|c| c.to_wire()).collect())
                .collect(),
            radical_dim: dec.radical.dim(),
            nilpotency_index: dec.radical.nilpotency_index,
            basic_dim: self.basic.lambda.dim(),
            flags,
        }
    }
}

/// Everything independent of the spread spec: the Frobenius pair on `Λ`,
/// the amplified model, and the isomorphism `Φ` from it onto the input.
#[derive(Clone, Debug)]
pub struct Prepared<F: Field> {
    pub analysis: Analysis<F>,
    pub lambda_nakayama: NakayamaData<F>,
    pub pair: FrobeniusPair<F>,
    pub amplified: AmplifiedAlgebra<F>,
    pub witnesses: IsoWitness<F>,
    /// `Φ((b_p)^{t←s}_{j←i}) = v_{jt} · b_p · u_{is}` per amplified basis
    /// element.
    pub phi: Vec<Element<F>>,
    phi_inverse: Matrix<F>,
}

pub fn prepare<F: GroundField>(alg: &FinDimAlgebra<F>, seed: u64) -> Result<Prepared<F>> {
    let analysis = analyze(alg, seed)?;
    let red = &analysis.basic;
    let lambda_nakayama = nakayama(&red.lambda, &red.decomposition)?;
    if lambda_nakayama.permutation() != analysis.nakayama.permutation() {
        return Err(Error::InvalidAlgebra(
            "Nakayama permutation of the basic algebra differs from that of the input".into(),
        ));
    }
    let pair = frobenius_pair(&red.lambda, &red.decomposition, &lambda_nakayama, seed)?;
    let m = analysis.decomposition.multiplicities();
    let amplified = amplify(&red.lambda, &red.decomposition, &m)?;
    let witnesses = iso_witnesses(alg, &analysis.decomposition, seed)?;
    if amplified.dim() != alg.dim() {
        return Err(Error::InvalidAlgebra(format!(
            "amplified model has dimension {} but the input has {}",
            amplified.dim(),
            alg.dim()
        )));
    }
    let phi: Vec<Element<F>> = amplified
        .keys()
        .iter()
        .map(|k| {
            let b = red.embed(&amplified.corner(k.source, k.target)[k.index]);
            let left = witnesses.v(k.target, k.target_copy - 1);
            let right = witnesses.u(k.source, k.source_copy - 1);
            alg.mul(&alg.mul(left, &b), right)
        })
        .collect();
    let phi_inverse = check_isomorphism(alg, &amplified.algebra, &phi)?;
    Ok(Prepared {
        analysis,
        lambda_nakayama,
        pair,
        amplified,
        witnesses,
        phi,
        phi_inverse,
    })
}

/// Checks that `b_k ↦ images[k]` is a unital algebra isomorphism `source →
/// target` and returns the inverse matrix.
fn check_isomorphism<F: Field>(
    target: &FinDimAlgebra<F>,
    source: &FinDimAlgebra<F>,
    images: &[Element<F>],
) -> Result<Matrix<F>> {
    let ctx = target.ctx();
    let d = source.dim();
    let image_of = |a: &Element<F>| {
        let mut out = Element::zero(target.dim());
        for (k, c) in a.coeffs().iter() {
            out.add_scaled(c, &images[k]);
        }
        out
    };
    if image_of(&source.one()) != target.one() {
        return Err(Error::InvalidAlgebra("Φ is not unital".into()));
    }
    let bad = (0..d).into_par_iter().find_first(|&a| {
        (0..d).any(|b| {
            let lhs = image_of(&source.mul(&source.basis(a), &source.basis(b)));
            lhs != target.mul(&images[a], &images[b])
        })
    });
    if let Some(a) = bad {
        return Err(Error::InvalidAlgebra(format!("Φ is not multiplicative at basis element {a}")));
    }
    let cols: Vec<Vec<F>> = images.iter().map(|e| e.to_dense(ctx)).collect();
    Matrix::from_columns(ctx, target.dim(), &cols)
        .invert()
        .map_err(|_| Error::InvalidAlgebra("Φ is not bijective".into()))
}

/// A comultiplication on the input algebra.
#[derive(Clone, Debug)]
pub struct Comultiplication<F: Field> {
    pub spec: SpreadSpec,
    pub x: Tensor2<F>,
    pub counit: Option<Functional<F>>,
    pub report: ComultiplicationReport,
}

impl<F: GroundField> Prepared<F> {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.amplified.multiplicities.clone()
    }

    pub fn preset(&self, preset: Preset) -> SpreadSpec {
        preset.expand(&self.amplified.multiplicities, &self.lambda_nakayama)
    }

    pub fn random_spec(&self, rng: &mut ChaCha8Rng) -> SpreadSpec {
        SpreadSpec::random(&self.amplified.multiplicities, &self.lambda_nakayama, rng)
    }

    /// Spreads `y` in the amplified model, moves it to the input basis by
    /// `Φ⊗Φ`, builds `ε_A = ε ∘ Φ⁻¹` when every `S(i)` is a bijection graph,
    /// and runs all checks on the input algebra.
    pub fn comultiply(&self, alg: &FinDimAlgebra<F>, spec: &SpreadSpec) -> Result<Comultiplication<F>> {
        let ctx = alg.ctx();
        let nak = &self.lambda_nakayama;
        let amp = &self.amplified;
        let x_amp = spread(amp, &self.pair.y, spec, nak)?;
        let x = x_amp.map(alg.dim(), |k| self.phi[k].clone(), |k| self.phi[k].clone());
        let bij = is_bijection_graph(spec, &amp.multiplicities, nak);
        let counit = if bij.iter().all(|&b| b) {
            let eps_amp = build_counit(amp, spec, nak, &self.pair.epsilon)?;
            let values = (0..alg.dim())
                .map(|k| {
                    let mut v = F::zero(ctx);
                    for a in 0..amp.dim() {
                        let c = self.phi_inverse.get(a, k);
                        if !c.is_zero() {
                            v += &(c.clone() * eps_amp.value(a));
                        }
                    }
                    v
                })
                .collect();
            Some(Functional::new(values))
        } else {
            None
        };
        let report = comultiplication_report(alg, &x, bij, counit.as_ref())?;
        Ok(Comultiplication {
            spec: spec.clone(),
            x,
            counit,
            report,
        })
    }
}

/// A seeded permutation of `0..d`.
pub fn seeded_permutation(d: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

/// One spec of a corpus sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecOutcome {
    pub label: String,
    pub spec: SpreadSpec,
    pub invariant: bool,
    pub coassociative: bool,
    pub rank: usize,
    pub injective: bool,
    pub bijection: bool,
    pub counital: bool,
    pub counit_feasible: bool,
    /// Every `S(i)` has an invertible incidence matrix.
    pub incidence_invertible: bool,
    pub consistent: bool,
}

/// Checks on the Frobenius pair of the basic algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOutcome {
    pub laws: bool,
    pub support: SupportReport,
    pub transports: usize,
    pub transports_passed: usize,
    /// ν from socles matches the duality pattern on `Λ`.
    pub duality_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub key: String,
    pub provenance: Option<Provenance>,
    pub dim: usize,
    pub analysis: Option<AnalysisReport>,
    pub pair: Option<PairOutcome>,
    pub specs: Vec<SpecOutcome>,
    pub passed: bool,
    pub error: Option<String>,
}

impl EntryReport {
    /// First failed expectation, for terse summaries.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(e) = &self.error {
            return Some(e.clone());
        }
        if let Some(p) = &self.pair {
            if !p.laws || !p.support.passed() || p.transports_passed != p.transports || !p.duality_consistent {
                return Some(format!("Frobenius pair checks failed: {p:?}"));
            }
        }
        self.specs.iter().find(|s| !spec_passes(s)).map(|s| {
            if s.invariant && s.coassociative && s.counit_feasible && !s.bijection {
                return format!(
                    "spec {} {}: a counit exists although some S(i) is not a bijection graph",
                    s.label,
                    serde_json::to_string(&s.spec).unwrap_or_default()
                );
            }
            format!(
                "spec {}: invariant={} coassociative={} rank={}/{} bijection={} counital={} feasible={}",
                s.label, s.invariant, s.coassociative, s.rank, self.dim, s.bijection, s.counital, s.counit_feasible
            )
        })
    }
}

fn spec_passes(s: &SpecOutcome) -> bool {
    s.consistent && (s.label != "singleton" || s.injective)
}

/// The spec sweep of a corpus run: the three presets and seeded random specs.
pub fn sweep_specs<F: GroundField>(prep: &Prepared<F>, seed: u64) -> Vec<(String, SpreadSpec)> {
    let mut out: Vec<(String, SpreadSpec)> = [Preset::Singleton, Preset::Diagonal, Preset::Full]
        .into_iter()
        .map(|p| (p.to_string(), prep.preset(p)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..RANDOM_SPECS {
        out.push((format!("random{}", r + 1), prep.random_spec(&mut rng)));
    }
    out
}

fn pair_outcome<F: GroundField>(prep: &Prepared<F>, seed: u64) -> Result<PairOutcome> {
    let red = &prep.analysis.basic;
    let (lambda, dec, nak) = (&red.lambda, &red.decomposition, &prep.lambda_nakayama);
    let laws = check_pair(lambda, &prep.pair)?.holds();
    let support = verify_support(lambda, &prep.pair, dec, nak);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transports_passed = 0;
    for _ in 0..TRANSPORTS {
        let b = random_peirce_unit(lambda, dec, &mut rng);
        let t = transport_pair(lambda, &prep.pair, &b)?;
        if check_pair(lambda, &t)?.holds() && verify_support(lambda, &t, dec, nak).passed() {
            transports_passed += 1;
        }
    }
    let pattern = duality_permutation(lambda, dec, seed);
    let duality_consistent = (0..dec.n()).all(|i| pattern[i] == [nak.nu(i)]);
    Ok(PairOutcome {
        laws,
        support,
        transports: TRANSPORTS,
        transports_passed,
        duality_consistent,
    })
}

fn verify_typed<F: GroundField>(alg: &FinDimAlgebra<F>, seed: u64, report: &mut EntryReport) -> Result<()> {
    let prep = prepare(alg, seed)?;
    report.analysis = Some(prep.analysis.report(alg));
    report.pair = Some(pair_outcome(&prep, seed)?);
    for (label, spec) in sweep_specs(&prep, seed) {
        let c = prep.comultiply(alg, &spec)?;
        let r = &c.report;
        let invertible = incidence_invertible(alg.ctx(), &spec, &prep.amplified.multiplicities, &prep.lambda_nakayama);
        report.specs.push(SpecOutcome {
            label,
            spec,
            invariant: r.invariant,
            coassociative: r.coassociative,
            rank: r.rank,
            injective: r.injective,
            bijection: r.all_bijections(),
            counital: r.counital,
            counit_feasible: r.counit_feasible,
            incidence_invertible: invertible.iter().all(|&b| b),
            consistent: r.consistent(),
        });
    }
    Ok(())
}

/// Runs every check on one algebra. Failures are recorded in the report.
pub fn verify_algebra(key: String, provenance: Option<Provenance>, alg: &AnyAlgebra, seed: u64) -> EntryReport {
    let mut report = EntryReport {
        key,
        provenance,
        dim: alg.dim(),
        analysis: None,
        pair: None,
        specs: Vec::new(),
        passed: false,
        error: None,
    };
    let outcome = match alg {
        AnyAlgebra::Rational(a) => verify_typed(a, seed, &mut report),
        AnyAlgebra::Prime(a) => verify_typed(a, seed, &mut report),
    };
    if let Err(e) = outcome {
        report.error = Some(e.to_string());
    }
    report.passed = report.first_failure().is_none();
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub profile: String,
    pub seed: u64,
    pub entries: Vec<EntryReport>,
    pub passed: bool,
}

/// Verifies every corpus algebra concurrently; entries are sorted by key.
pub fn verify_corpus(profile: Profile, seed: u64) -> CorpusReport {
    let mut entries: Vec<EntryReport> = corpus(profile)
        .into_par_iter()
        .map(|(prov, alg)| verify_algebra(prov.key(), Some(prov), &alg, seed))
        .collect();
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    CorpusReport {
        profile: profile.to_string(),
        seed,
        passed: entries.iter().all(|e| e.passed),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{a2_path_algebra, matrix_algebra, nakayama_algebra, nsy_algebra, nsy_reference_tensor};
    use crate::scalar::Rational;

    #[test]
    fn matrix_algebra_with_diagonal_spec_has_the_trace_counit() {
        let m2 = matrix_algebra::<Rational>(&(), 2);
        let prep = prepare(&m2, DEFAULT_SEED).unwrap();
        let c = prep.comultiply(&m2, &prep.preset(Preset::Diagonal)).unwrap();
        assert!(c.report.consistent() && c.report.counital);
        let one = Rational::from_integer(1.into());
        let zero = Rational::from_integer(0.into());
        assert_eq!(c.counit.unwrap().values(), [one.clone(), zero.clone(), zero, one]);
    }

    #[test]
    fn nsy_singleton_is_injective_but_not_counital() {
        let nsy = nsy_algebra::<Rational>(&(), 2, 2, &[1, 2]).unwrap();
        let prep = prepare(&nsy.algebra, DEFAULT_SEED).unwrap();
        let c = prep.comultiply(&nsy.algebra, &prep.preset(Preset::Singleton)).unwrap();
        let r = &c.report;
        assert!(r.invariant && r.coassociative && r.injective);
        assert!(!r.counital && !r.counit_feasible);
        assert_eq!(c.x, nsy_reference_tensor(&nsy));
    }

    #[test]
    fn basic_input_reproduces_the_pair_tensor() {
        let b = nakayama_algebra::<Rational>(&(), 3, 2).unwrap();
        let prep = prepare(&b, DEFAULT_SEED).unwrap();
        let c = prep.comultiply(&b, &prep.preset(Preset::Singleton)).unwrap();
        assert_eq!(c.x, prep.pair.y);
        assert!(c.report.counital && c.report.consistent());
    }

    #[test]
    fn permuted_input_still_verifies() {
        let nsy = nsy_algebra::<Rational>(&(), 2, 2, &[2, 1]).unwrap();
        let permuted = nsy.algebra.permute_basis(&seeded_permutation(nsy.dim(), 3));
        let report = verify_algebra("permuted".into(), None, &AnyAlgebra::Rational(permuted), DEFAULT_SEED);
        assert!(report.passed, "{:?}", report.first_failure());
    }

    #[test]
    fn triangular_spec_on_matrix_algebra_is_counital() {
        use crate::amplify::counit_feasible;
        use crate::tensor::{apply_functional, Side};
        use std::collections::BTreeSet;
        let m2 = matrix_algebra::<Rational>(&(), 2);
        let prep = prepare(&m2, DEFAULT_SEED).unwrap();
        let spec = SpreadSpec::new(vec![BTreeSet::from([(1, 1), (1, 2), (2, 2)])]);
        let c = prep.comultiply(&m2, &spec).unwrap();
        assert!(!c.report.all_bijections());
        assert!(c.report.invariant && c.report.coassociative);
        let eps = counit_feasible(&m2, &c.x).unwrap().particular;
        assert_eq!(apply_functional(Side::Left, &eps, &c.x).unwrap(), m2.one());
        assert_eq!(apply_functional(Side::Right, &eps, &c.x).unwrap(), m2.one());
        assert_eq!(incidence_invertible(&(), &spec, &[2], &prep.lambda_nakayama), [true]);
        assert!(!c.report.consistent());
    }

    #[test]
    fn path_algebra_is_reported_as_failure() {
        let a2 = AnyAlgebra::Rational(a2_path_algebra(&()));
        let report = verify_algebra("a2".into(), None, &a2, DEFAULT_SEED);
        assert!(!report.passed);
        assert!(report.error.unwrap().contains("not self-injective"));
    }
}
