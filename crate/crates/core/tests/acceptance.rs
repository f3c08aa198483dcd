//! One line per acceptance criterion. Criteria that cannot hold as stated
//! are printed as FAIL; for those the test asserts the exact shape of the
//! failure instead.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfinj::amplify::{amplify, counit_feasible, spread, Preset, SpreadSpec};
use selfinj::families::{
    a2_path_algebra, corpus, matrix_algebra, nakayama_algebra, nsy_algebra, nsy_reference_tensor, NsyPresentation,
    Profile,
};
use selfinj::frobenius::{check_pair, construct_counit, frobenius_pair, transport_pair, verify_support};
use selfinj::pipeline::{prepare, seeded_permutation, verify_algebra, verify_corpus, CorpusReport, DEFAULT_SEED};
use selfinj::scalar::Field;
use selfinj::structure::{canonical_decomposition, nakayama};
use selfinj::tensor::{act_left, act_right, Tensor2};
use selfinj::{Element, Error, NakayamaData, QAlgebra, Rational};

struct Outcome {
    lines: Vec<(usize, bool, String)>,
}

impl Outcome {
    fn record(&mut self, criterion: usize, pass: bool, detail: String) {
        println!("criterion {criterion}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        self.lines.push((criterion, pass, detail));
    }

    fn info(&self, criterion: usize, detail: String) {
        println!("criterion {criterion}: INFO ({detail})");
    }

    fn passed(&self, criterion: usize) -> bool {
        self.lines.iter().filter(|l| l.0 == criterion).all(|l| l.1)
    }
}

fn q(n: i64) -> Rational {
    Rational::from_i64(&(), n)
}

fn vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    selfinj::families::multiplicity_vectors(n, max)
}

/// Maps `X_{i,k}^{r,s}` of the presentation to its amplified basis index.
fn nsy_positions(nsy: &NsyPresentation<Rational>, amp: &selfinj::AmplifiedAlgebra<Rational>, lambda: &QAlgebra) -> Vec<usize> {
    let (n, l) = (nsy.n, nsy.l);
    let mut pos = vec![0; nsy.dim()];
    for (i, k, r, s) in nsy.keys() {
        let lifted = amp.lift(&lambda.basis(i * l + k), (i + k) % n, i, s + 1, r + 1).unwrap();
        pos[nsy.x(i, k, r, s).unwrap()] = lifted.coeffs().first().unwrap().0;
    }
    pos
}

fn criterion_1(out: &mut Outcome) {
    let start = Instant::now();
    let (mut singleton_ok, mut diagonal_ok, mut total) = (0, 0, 0);
    for (n, l) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
        let lambda = nakayama_algebra::<Rational>(&(), n, l).unwrap();
        let dec = canonical_decomposition(&lambda, DEFAULT_SEED).unwrap();
        let nak = nakayama(&lambda, &dec).unwrap();
        let pair = frobenius_pair(&lambda, &dec, &nak, DEFAULT_SEED).unwrap();
        for m in vectors(n, 3) {
            let nsy = nsy_algebra::<Rational>(&(), n, l, &m).unwrap();
            let amp = amplify(&lambda, &dec, &m).unwrap();
            let pos = nsy_positions(&nsy, &amp, &lambda);
            let mut back = vec![0; pos.len()];
            for (k, &p) in pos.iter().enumerate() {
                back[p] = k;
            }
            let reference = nsy_reference_tensor(&nsy);
            let in_nsy = |x: Tensor2<Rational>| {
                x.map(nsy.dim(), |a| nsy.algebra.basis(back[a]), |a| nsy.algebra.basis(back[a]))
            };
            let single = in_nsy(spread(&amp, &pair.y, &SpreadSpec::singleton(n), &nak).unwrap());
            let diag = in_nsy(spread(&amp, &pair.y, &Preset::Diagonal.expand(&m, &nak), &nak).unwrap());
            total += 1;
            singleton_ok += usize::from(single == reference);
            diagonal_ok += usize::from(diag == reference);
        }
    }
    let elapsed = start.elapsed();
    out.record(
        1,
        diagonal_ok == total,
        format!("literal reading, diagonal spread = reference tensor: {diagonal_ok}/{total}; equal exactly when every m(i) = 1"),
    );
    out.info(
        1,
        format!("singleton spread = reference tensor: {singleton_ok}/{total} in {elapsed:.2?}"),
    );
    assert_eq!(singleton_ok, total);
    let all_ones = [(1, 2), (2, 2), (2, 3), (3, 2)].len();
    assert_eq!(diagonal_ok, all_ones);
}

fn criterion_2(out: &mut Outcome) {
    let mut checked = 0;
    let mut ok = true;
    for (n, l, m) in [(2, 3, vec![1, 2]), (3, 2, vec![2, 1, 1])] {
        let a = nsy_algebra::<Rational>(&(), n, l, &m).unwrap();
        let reference = nsy_reference_tensor(&a);
        let wrap = |x: isize| x.rem_euclid(n as isize) as usize;
        let li = l as isize;
        for (i, j, r, s) in a.keys() {
            let b = a.algebra.basis(a.x(i, j, r, s).unwrap());
            let mut right = Tensor2::zero(a.dim());
            for k in j..l {
                let u = a.x(i, k, r, 0).unwrap();
                let v = a.x(wrap(i as isize + k as isize - li + 1), l - 1 - k + j, 0, s).unwrap();
                right.add_term(u, v, &q(1));
            }
            let mut left = Tensor2::zero(a.dim());
            for k in 0..l - j {
                let u = a.x(i, k + j, r, 0).unwrap();
                let v = a.x(wrap(i as isize + (k + j) as isize - li + 1), l - 1 - k, 0, s).unwrap();
                left.add_term(u, v, &q(1));
            }
            ok &= act_right(&a.algebra, &reference, &b).unwrap() == right;
            ok &= act_left(&a.algebra, &b, &reference).unwrap() == left;
            checked += 1;
        }
    }
    out.record(2, ok, format!("both closed forms on {checked} basis multipliers"));
}

fn criteria_3_to_7(out: &mut Outcome, report: &CorpusReport, elapsed: std::time::Duration) {
    let entries = &report.entries;
    let errors: Vec<_> = entries.iter().filter_map(|e| e.error.as_ref().map(|err| format!("{}: {err}", e.key))).collect();
    assert!(errors.is_empty(), "{errors:?}");

    let singleton_ok = entries.iter().all(|e| {
        let s = e.specs.iter().find(|s| s.label == "singleton").unwrap();
        s.invariant && s.coassociative && s.rank == e.dim
    });
    out.record(
        3,
        singleton_ok,
        format!("{} standard corpus algebras, singleton spec, full sweep in {elapsed:.2?}", entries.len()),
    );

    let specs: Vec<_> = entries.iter().flat_map(|e| e.specs.iter().map(move |s| (e, s))).collect();
    let inv_coassoc = specs.iter().all(|(_, s)| s.invariant && s.coassociative);
    out.record(4, inv_coassoc, format!("{} specs invariant and coassociative", specs.len()));

    // bijection graph ⇒ the constructed counit satisfies both laws
    let backward = specs.iter().all(|(_, s)| !s.bijection || (s.counit_feasible && s.counital));
    let forward_violations: Vec<_> = specs.iter().filter(|(_, s)| s.counit_feasible && !s.bijection).collect();
    out.record(
        5,
        backward && forward_violations.is_empty(),
        format!(
            "bijection ⇒ counital holds on every spec: {backward}; counital without a bijection graph on {} of {} specs",
            forward_violations.len(),
            specs.len()
        ),
    );
    if let Some((e, s)) = forward_violations.first() {
        out.info(
            5,
            format!("first counterexample {} spec {}", e.key, serde_json::to_string(&s.spec).unwrap()),
        );
    }
    let invertible = specs.iter().all(|(_, s)| s.counit_feasible == s.incidence_invertible);
    out.info(5, format!("counit feasible ⟺ every S(i) incidence matrix invertible: {invertible}"));
    assert!(backward);
    assert!(invertible);
    assert!(forward_violations.iter().all(|(_, s)| s.incidence_invertible));

    let pairs: Vec<_> = entries.iter().map(|e| (e, e.pair.as_ref().unwrap())).collect();
    let support_ok = pairs
        .iter()
        .all(|(_, p)| p.laws && p.support.passed() && p.transports_passed == p.transports);
    let transports: usize = pairs.iter().map(|(_, p)| p.transports).sum();
    out.record(
        6,
        support_ok,
        format!("{} Frobenius pairs and {transports} Peirce-diagonal transports", pairs.len()),
    );

    let duality_ok = pairs.iter().all(|(_, p)| p.duality_consistent);
    let socle_ok = socle_oracle();
    out.record(
        7,
        duality_ok && socle_ok,
        format!("duality pattern on {} basic algebras; socle-path oracle for cyclic Nakayama algebras: {socle_ok}", pairs.len()),
    );
}

/// The socle of `e_i B` is spanned by the longest path from `i`, found here
/// as the basis path killed by every arrow on the right.
fn socle_oracle() -> bool {
    for (n, l) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        let b = nakayama_algebra::<Rational>(&(), n, l).unwrap();
        let dec = canonical_decomposition(&b, DEFAULT_SEED).unwrap();
        let nak = nakayama(&b, &dec).unwrap();
        let vertex_of_class = |c: usize| (0..n).find(|&v| *dec.representative(c) == b.basis(v * l)).unwrap();
        let arrows: Vec<Element<Rational>> = (0..n).filter(|_| l > 1).map(|v| b.basis(v * l + 1)).collect();
        for c in 0..n {
            let i = vertex_of_class(c);
            let socle: Vec<usize> = (0..l)
                .filter(|&k| arrows.iter().all(|a| b.mul(&b.basis(i * l + k), a).is_zero()))
                .collect();
            if socle.len() != 1 {
                return false;
            }
            let end = (i + socle[0]) % n;
            if vertex_of_class(nak.nu(c)) != end || end != (i + l - 1) % n {
                return false;
            }
        }
    }
    true
}

fn general_transport_info(out: &Outcome) {
    let lambda = nakayama_algebra::<Rational>(&(), 2, 2).unwrap();
    let dec = canonical_decomposition(&lambda, DEFAULT_SEED).unwrap();
    let nak = nakayama(&lambda, &dec).unwrap();
    let pair = frobenius_pair(&lambda, &dec, &nak, DEFAULT_SEED).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut valid, mut counit_support) = (0, 0);
    for _ in 0..20 {
        let mut b = lambda.one();
        for k in 0..lambda.dim() {
            if lambda.basis(k) != *dec.representative(0) && lambda.basis(k) != *dec.representative(1) {
                b.add_scaled(&q(rng.gen_range(-2..=2)), &lambda.basis(k));
            }
        }
        let Ok(t) = transport_pair(&lambda, &pair, &b) else { continue };
        if check_pair(&lambda, &t).unwrap().holds() {
            valid += 1;
            counit_support += usize::from(verify_support(&lambda, &t, &dec, &nak).counit_support);
        }
    }
    out.info(
        6,
        format!("unrestricted unit transports on B(2,2): {valid} valid Frobenius pairs, counit support condition holds for {counit_support}"),
    );
}

fn criterion_8(out: &mut Outcome) {
    let a2 = a2_path_algebra::<Rational>(&());
    let dec = canonical_decomposition(&a2, DEFAULT_SEED).unwrap();
    let rejected = matches!(nakayama(&a2, &dec), Err(Error::NotSelfInjectiveLike(_)))
        && [vec![0, 1], vec![1, 0]].into_iter().all(|p| {
            let forced = NakayamaData::<Rational>::from_permutation(p).unwrap();
            matches!(construct_counit(&a2, &dec, &forced, DEFAULT_SEED), Err(Error::NotFrobenius(_)))
        });

    let nsy = nsy_algebra::<Rational>(&(), 2, 2, &[1, 2]).unwrap();
    let prep = prepare(&nsy.algebra, DEFAULT_SEED).unwrap();
    let specs = SpreadSpec::exhaustive(&prep.multiplicities(), &prep.lambda_nakayama);
    let infeasible = specs.iter().all(|spec| {
        let c = prep.comultiply(&nsy.algebra, spec).unwrap();
        !c.report.counit_feasible && counit_feasible(&nsy.algebra, &c.x).is_none()
    });

    let m2 = matrix_algebra::<Rational>(&(), 2);
    let mut entries: Vec<_> = m2.entries().map(|(i, j, k, c)| (i, j, k, c.clone())).collect();
    entries[1].3 = q(2);
    let corrupted = QAlgebra::from_entries(&(), m2.labels().to_vec(), entries, m2.one().to_dense(&())).unwrap();
    let witness = corrupted.check_associativity();
    let caught = witness.is_some() && matches!(corrupted.validate(), Err(Error::InvalidAlgebra(_)));

    out.record(
        8,
        rejected && infeasible && caught,
        format!(
            "A2 rejected: {rejected}; {} specs on nsy(2,2,(1,2)) all counit-infeasible: {infeasible}; corrupted M2 witness {witness:?}",
            specs.len()
        ),
    );
}

fn criterion_9(out: &mut Outcome, original: &CorpusReport) {
    let mut same = 0;
    let mut green = 0;
    let list = corpus(Profile::Standard);
    for (k, (prov, alg)) in list.iter().enumerate() {
        let perm = seeded_permutation(alg.dim(), DEFAULT_SEED + k as u64);
        let permuted = verify_algebra(prov.key(), Some(prov.clone()), &alg.permute_basis(&perm), DEFAULT_SEED);
        let base = original.entries.iter().find(|e| e.key == permuted.key).unwrap();
        // class labels depend on the basis, so only the presets are comparable
        let outcomes = |e: &selfinj::pipeline::EntryReport| {
            e.specs
                .iter()
                .take(3)
                .map(|s| (s.invariant, s.coassociative, s.rank, s.bijection, s.counital, s.counit_feasible))
                .collect::<Vec<_>>()
        };
        same += usize::from(permuted.error.is_none() && outcomes(&permuted) == outcomes(base));
        green += usize::from(permuted.specs.iter().all(|s| {
            s.invariant && s.coassociative && (!s.bijection || s.counital) && s.counit_feasible == s.incidence_invertible
        }) && permuted.specs[0].rank == permuted.dim);
    }
    out.record(
        9,
        same == list.len() && green == list.len(),
        format!("{green}/{} permuted inputs pass criterion 3-5 checks, {same} match the unpermuted preset outcomes", list.len()),
    );
}

#[test]
fn acceptance() {
    let mut out = Outcome { lines: Vec::new() };
    criterion_1(&mut out);
    criterion_2(&mut out);
    let start = Instant::now();
    let report = verify_corpus(Profile::Standard, DEFAULT_SEED);
    criteria_3_to_7(&mut out, &report, start.elapsed());
    general_transport_info(&out);
    criterion_8(&mut out);
    criterion_9(&mut out, &report);

    // Criteria 1 and 5 fail as stated; their failure shape is asserted above.
    let expected_failures: BTreeSet<usize> = [1, 5].into();
    for c in 1..=9 {
        assert_eq!(out.passed(c), !expected_failures.contains(&c), "criterion {c}");
    }
}
