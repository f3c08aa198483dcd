use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{combine, corner, solve_in_span, sweep_candidate, CanonicalDecomposition, BUDGET_FACTOR};
use crate::algebra::{Element, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{Field, GroundField};

/// Elements `u_{is} ∈ e_{i1}Ae_{is}`, `v_{is} ∈ e_{is}Ae_{i1}` with
/// `u·v = e_{i1}` and `v·u = e_{is}`. Indexed `[class][copy]`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness<F: Field> {
    pub u: Vec<Vec<Element<F>>>,
    pub v: Vec<Vec<Element<F>>>,
}

impl<F: Field> IsoWitness<F> {
    pub fn u(&self, i: usize, s: usize) -> &Element<F> {
        &self.u[i][s]
    }

    pub fn v(&self, i: usize, s: usize) -> &Element<F> {
        &self.v[i][s]
    }
}

fn find_pair<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    e1: &Element<F>,
    es: &Element<F>,
    rng: &mut ChaCha8Rng,
) -> Option<(Element<F>, Element<F>)> {
    let ctx = alg.ctx();
    let d = alg.dim();
    let us = corner(alg, e1, es);
    let vs = corner(alg, es, e1);
    if us.is_empty() || vs.is_empty() {
        return None;
    }
    let target = e1.to_dense(ctx);
    for attempt in 0..BUDGET_FACTOR * d {
        let u = sweep_candidate(ctx, d, &us, attempt, rng);
        let images: Vec<Vec<F>> = vs.iter().map(|v| alg.mul(&u, v).to_dense(ctx)).collect();
        if let Some(c) = solve_in_span(ctx, &images, &target) {
            return Some((u, combine(d, &c, &vs)));
        }
    }
    None
}

/// Finds the witnesses by sweeping `u` over `e_{i1}Ae_{is}` and solving
/// `u·v = e_{i1}`; `v·u = e_{is}` is then asserted.
pub fn iso_witnesses<F: GroundField>(
    alg: &FinDimAlgebra<F>,
    dec: &CanonicalDecomposition<F>,
    seed: u64,
) -> Result<IsoWitness<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = Vec::with_capacity(dec.n());
    let mut v = Vec::with_capacity(dec.n());
    for i in 0..dec.n() {
        let e1 = dec.representative(i);
        let mut ui = vec![e1.clone()];
        let mut vi = vec![e1.clone()];
        for s in 1..dec.multiplicity(i) {
            let es = dec.idempotent(i, s);
            let (a, b) = find_pair(alg, e1, es, &mut rng).ok_or(Error::WitnessNotFound { class: i + 1, copy: s + 1 })?;
            if &alg.mul(&b, &a) != es {
                return Err(Error::InvalidAlgebra(format!(
                    "v·u differs from the copy idempotent (class {}, copy {}): not primitive",
                    i + 1,
                    s + 1
                )));
            }
            ui.push(a);
            vi.push(b);
        }
        u.push(ui);
        v.push(vi);
    }
    Ok(IsoWitness { u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{matrix_algebra, nsy_algebra};
    use crate::scalar::Rational;
    use crate::structure::canonical_decomposition;

    #[test]
    fn matrix_units_are_witnesses() {
        let m2 = matrix_algebra::<Rational>(&(), 2);
        let dec = canonical_decomposition(&m2, 0).unwrap();
        let w = iso_witnesses(&m2, &dec, 0).unwrap();
        assert_eq!(w.u(0, 1), &m2.basis(1));
        assert_eq!(w.v(0, 1), &m2.basis(2));
        assert_eq!(w.u(0, 0), &m2.basis(0));
    }

    #[test]
    fn nsy_witnesses_are_copy_units() {
        let nsy = nsy_algebra::<Rational>(&(), 1, 2, &[2]).unwrap();
        let alg = &nsy.algebra;
        let dec = canonical_decomposition(alg, 0).unwrap();
        let w = iso_witnesses(alg, &dec, 0).unwrap();
        assert_eq!(w.u(0, 1), &alg.basis(nsy.x(0, 0, 0, 1).unwrap()));
        assert_eq!(w.v(0, 1), &alg.basis(nsy.x(0, 0, 1, 0).unwrap()));
        assert_eq!(alg.mul(w.u(0, 1), w.v(0, 1)), alg.basis(nsy.x(0, 0, 0, 0).unwrap()));
    }
}
