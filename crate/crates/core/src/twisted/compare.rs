use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::field::{int, rat, Rational};
use crate::cdga::{aomoto, probe_components, resonance_membership, GradedAlgebra, LinearSubspaceQ};
use crate::error::{Error, Result};
use crate::par;

use super::character::Character;
use super::charvar::charvar_membership;
use super::complex::LaurentComplex;

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonSample {
    /// Flat connection in the coordinates identified with `H¹(X)`.
    pub omega: Vec<Rational>,
    /// `ω ∈ R^i_k(A)`.
    pub resonance: bool,
    /// `exp(ω) ∈ Σ^i_k(X)`.
    pub charvar: bool,
    pub agree: bool,
    /// Drawn from a probed resonance component rather than at random.
    pub on_candidate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub degree: usize,
    pub k: usize,
    pub samples: Vec<ComparisonSample>,
    pub agreements: usize,
    pub disagreements: usize,
    /// Probed positive-dimensional resonance components used for sampling.
    pub candidates: Vec<LinearSubspaceQ>,
}

/// Scales `q` by `1/M` so that `Σ|ω_j| < 1/2`.
fn shrink(q: Vec<Rational>) -> Vec<Rational> {
    let total: Rational = q.iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| a + b);
    let m = 2 * (total.floor().to_integer().to_i64().expect("small sample") + 1);
    q.into_iter().map(|x| x / int(m)).collect()
}

/// Compares `R^i_k(A)` and `Σ^i_k(X)` near the origin on sampled rational
/// flat connections `ω`, identifying flat-connection coordinates with the
/// character-torus coordinates in order. Reports agreement; it does not
/// decide equality of germs.
pub fn compare_exp(
    a: &GradedAlgebra,
    c: &LaurentComplex,
    i: usize,
    k: usize,
    samples: usize,
    denominator_bound: i64,
    seed: u64,
) -> Result<ComparisonReport> {
    let ac = aomoto(a);
    let m = ac.num_vars();
    if m != c.n() {
        return Err(Error::Input(format!("algebra has {m} flat-connection coordinates but the complex has {} torus coordinates", c.n())));
    }
    let bound = denominator_bound.max(1);
    let candidates: Vec<LinearSubspaceQ> = probe_components(&ac, i, k, 32, seed)?.candidates.into_iter().filter(|l| l.dim() > 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<(Vec<Rational>, bool)> = vec![(vec![Rational::zero(); m], false)];
    for s in 1..samples.max(1) {
        let small = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound));
        if !candidates.is_empty() && s % 2 == 0 {
            let l = &candidates[(s / 2) % candidates.len()];
            let t: Vec<Rational> = (0..l.dim()).map(|_| small(&mut rng)).collect();
            draws.push((shrink(l.point(&t)), true));
        } else {
            let q: Vec<Rational> = (0..m).map(|_| small(&mut rng)).collect();
            draws.push((shrink(q), false));
        }
    }
    let evaluated: Vec<Result<ComparisonSample>> = par::map(&draws, |(omega, on_candidate)| {
        let resonance = resonance_membership(&ac, i, k, omega)?;
        let charvar = charvar_membership(c, i, k, &Character::torsion(omega.clone()))?;
        Ok(ComparisonSample { omega: omega.clone(), resonance, charvar, agree: resonance == charvar, on_candidate: *on_candidate })
    });
    let samples: Vec<ComparisonSample> = evaluated.into_iter().collect::<Result<_>>()?;
    let agreements = samples.iter().filter(|s| s.agree).count();
    Ok(ComparisonReport { degree: i, k, disagreements: samples.len() - agreements, agreements, samples, candidates })
}
