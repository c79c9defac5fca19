use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::field::{int, rat, Field, Rational};
use crate::arith::matrix::Matrix;
use crate::arith::poly::{indexed_vars, Poly};
use crate::arith::rank::rank_over_fraction_field;
use crate::error::{check_dim, Error, Result};
use crate::par;

use super::aomoto::AomotoComplex;

/// Dimensions `dim H^i(A, d_ω)` at the flat connection with coordinates
/// `point`, computed exactly over the field of `point`.
pub fn betti_at<G: Field>(c: &AomotoComplex, point: &[G]) -> Result<Vec<usize>> {
    check_dim(c.num_vars(), point.len())?;
    let ranks: Vec<usize> = (0..c.top_degree())
        .map(|i| c.matrix(i).map(|p| p.eval_with(G::from_rational, point)).rank())
        .collect();
    Ok(betti_from_ranks(c.dims(), &ranks))
}

fn betti_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            dims[i] - out - inc
        })
        .collect()
}

pub fn resonance_membership<G: Field>(c: &AomotoComplex, i: usize, k: usize, point: &[G]) -> Result<bool> {
    Ok(betti_at(c, point)?.get(i).copied().unwrap_or(0) >= k)
}

/// A rational linear subspace of the flat-connection coordinate space.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspaceQ {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl LinearSubspaceQ {
    /// Rejects dependent or wrongly sized basis vectors.
    pub fn new(ambient: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        for v in &basis {
            check_dim(ambient, v.len())?;
        }
        if Matrix::from_rows(ambient, basis.clone()).rank() != basis.len() {
            return Err(Error::Input("subspace basis vectors are linearly dependent".into()));
        }
        Ok(LinearSubspaceQ { ambient, basis })
    }

    pub fn zero(ambient: usize) -> Self {
        LinearSubspaceQ { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        LinearSubspaceQ { ambient, basis: Matrix::<Rational>::identity(ambient).row_vecs() }
    }

    /// The solution space of the homogeneous equations given as rows.
    pub fn from_equations(ambient: usize, equations: Vec<Vec<Rational>>) -> Result<Self> {
        for e in &equations {
            check_dim(ambient, e.len())?;
        }
        if equations.is_empty() {
            return Ok(Self::full(ambient));
        }
        Ok(LinearSubspaceQ { ambient, basis: Matrix::from_rows(ambient, equations).nullspace() })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(self.ambient, rows).rank() == self.basis.len()
    }

    pub fn contains_subspace(&self, other: &LinearSubspaceQ) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Span of `self` and `v`.
    pub fn extended(&self, v: &[Rational]) -> Self {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        LinearSubspaceQ { ambient: self.ambient, basis: Matrix::from_rows(self.ambient, rows).row_basis() }
    }

    /// `Σ_l t_l · basis_l`.
    pub fn point(&self, t: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (c, v) in t.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = &*o + c * x;
            }
        }
        out
    }

    /// Canonical basis (reduced row echelon form).
    pub fn canonical(&self) -> Self {
        LinearSubspaceQ { ambient: self.ambient, basis: Matrix::from_rows(self.ambient, self.basis.clone()).row_basis() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceCertificate {
    pub degree: usize,
    pub k: usize,
    pub generic_betti: usize,
    /// Generic ranks of the outgoing and incoming Aomoto matrices on `L`.
    pub generic_ranks: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SubspaceVerdict {
    /// Every point of the subspace lies in `R^i_k` (rank semicontinuity).
    Certified(SubspaceCertificate),
    /// A rational point of the subspace outside `R^i_k`.
    Refuted { point: Vec<Rational>, betti: usize, generic_betti: usize },
}

impl SubspaceVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SubspaceVerdict::Certified(_))
    }
}

/// Generic `dim H^i` along the parametrization `x = P·t` of `l`.
fn generic_betti_on(c: &AomotoComplex, l: &LinearSubspaceQ, i: usize) -> Result<(usize, usize, usize)> {
    let tv = indexed_vars("t", l.dim());
    let images: Vec<Poly<Rational>> = (0..l.ambient())
        .map(|j| {
            let mut p = Poly::zero(tv.clone());
            for (s, v) in l.basis().iter().enumerate() {
                p = &p + &Poly::var(tv.clone(), s).scale(&v[j]);
            }
            p
        })
        .collect();
    let restrict = |m: Matrix<Poly<Rational>>| -> Result<Matrix<Poly<Rational>>> {
        let entries: Result<Vec<Poly<Rational>>> = m.iter().map(|p| p.substitute(&images).map(|q| rebase(q, &tv))).collect();
        let entries = entries?;
        let cols = m.cols();
        Ok(Matrix::from_fn(m.rows(), cols, |r, c| entries[r * cols + c].clone()))
    };
    let out = if i < c.top_degree() { rank_over_fraction_field(&restrict(c.matrix(i))?)? } else { 0 };
    let inc = match c.incoming(i) {
        Some(m) => rank_over_fraction_field(&restrict(m)?)?,
        None => 0,
    };
    Ok((c.dim(i) - out - inc, out, inc))
}

// substitute() of a constant polynomial with no images keeps the source
// variables; force the parameter variables.
fn rebase(p: Poly<Rational>, tv: &crate::arith::poly::Vars) -> Poly<Rational> {
    if p.vars() == tv {
        return p;
    }
    p.map_monomials(tv.clone(), |_, c| (c.clone(), crate::arith::poly::Monomial::one(tv.len())))
}

/// Certifies `L ⊆ R^i_k` by generic ranks over `Q(t)`, or returns a
/// rational point of `L` where membership fails.
pub fn verify_subspace_in_resonance(c: &AomotoComplex, l: &LinearSubspaceQ, i: usize, k: usize, seed: u64) -> Result<SubspaceVerdict> {
    check_dim(c.num_vars(), l.ambient())?;
    let (generic_betti, out, inc) = generic_betti_on(c, l, i)?;
    if generic_betti >= k {
        return Ok(SubspaceVerdict::Certified(SubspaceCertificate { degree: i, k, generic_betti, generic_ranks: (out, inc) }));
    }
    let p = l.dim();
    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    if p == 0 {
        candidates.push(Vec::new());
    }
    for s in 0..p {
        candidates.push((0..p).map(|j| if j == s { Rational::one() } else { Rational::zero() }).collect());
    }
    candidates.push(vec![Rational::one(); p]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..2000u32 {
        let bound = 3 + round as i64 / 10;
        candidates.push((0..p).map(|_| rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))).collect());
    }
    for t in candidates {
        let point = l.point(&t);
        let betti = betti_at(c, &point)?[i];
        if betti < k {
            return Ok(SubspaceVerdict::Refuted { point, betti, generic_betti });
        }
    }
    Err(Error::Invalid("no rational point attains the generic rank; sampling bound exhausted".into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    /// Maximal verified candidate subspaces found by the search.
    pub candidates: Vec<LinearSubspaceQ>,
    pub directions_tested: usize,
    /// Always `false`: the search is a heuristic.
    pub exhaustive: bool,
}

fn small_directions(m: usize, trials: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    // all vectors in {-1,0,1}^m with first nonzero entry positive, when few
    if m > 0 && 3usize.pow(m.min(12) as u32) <= 4 * trials.max(1) + 64 {
        let total = 3usize.pow(m as u32);
        for code in 1..total {
            let mut v = Vec::with_capacity(m);
            let mut c = code;
            for _ in 0..m {
                v.push((c % 3) as i64 - 1);
                c /= 3;
            }
            if v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                out.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        if v.iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    for v in out {
        let q: Vec<Rational> = v.into_iter().map(int).collect();
        let canon = LinearSubspaceQ { ambient: m, basis: vec![q.clone()] }.canonical();
        if !seen.iter().any(|s| s == &canon.basis[0]) {
            seen.push(canon.basis[0].clone());
        }
    }
    seen
}

/// Heuristic search for components of `R^i_k` through the origin.
///
/// Lines spanned by small integer directions are tested exactly; member
/// lines are merged greedily into larger subspaces, each merge accepted
/// only after [`verify_subspace_in_resonance`] certifies it. Only maximal
/// certified candidates are returned. Not exhaustive.
pub fn probe_components(c: &AomotoComplex, i: usize, k: usize, trials: usize, seed: u64) -> Result<ProbeResult> {
    let m = c.num_vars();
    let dirs = small_directions(m, trials, seed);
    let certified = |l: &LinearSubspaceQ| verify_subspace_in_resonance(c, l, i, k, seed).map(|v| v.is_certified());
    let member_flags: Vec<Result<bool>> = par::map(&dirs, |d| certified(&LinearSubspaceQ { ambient: m, basis: vec![d.clone()] }));
    let mut members = Vec::new();
    for (d, f) in dirs.iter().zip(member_flags) {
        if f? {
            members.push(d.clone());
        }
    }
    let mut candidates: Vec<LinearSubspaceQ> = Vec::new();
    for u in &members {
        if candidates.iter().any(|s| s.contains(u)) {
            continue;
        }
        let mut s = LinearSubspaceQ { ambient: m, basis: vec![u.clone()] };
        for v in &members {
            if s.contains(v) {
                continue;
            }
            let bigger = s.extended(v);
            if certified(&bigger)? {
                s = bigger;
            }
        }
        candidates.push(s.canonical());
    }
    let origin = LinearSubspaceQ::zero(m);
    if certified(&origin)? && candidates.is_empty() {
        candidates.push(origin);
    }
    let maximal: Vec<LinearSubspaceQ> = candidates
        .iter()
        .enumerate()
        .filter(|(a, s)| !candidates.iter().enumerate().any(|(b, t)| *a != b && t.contains_subspace(s) && (t.dim() > s.dim() || b < *a)))
        .map(|(_, s)| s.clone())
        .collect();
    Ok(ProbeResult { candidates: maximal, directions_tested: dirs.len(), exhaustive: false })
}

#[cfg(test)]
mod tests {
    use super::super::algebra::fixtures::*;
    use super::super::aomoto::aomoto;
    use super::*;
    use crate::arith::cyclotomic::Cyclotomic;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn heisenberg_betti() {
        let c = aomoto(&heisenberg());
        assert_eq!(betti_at(&c, &v(&[1, 0])).unwrap()[..2], [0, 0]);
        assert_eq!(betti_at(&c, &v(&[0, 0])).unwrap()[..2], [1, 2]);
        assert!(!resonance_membership(&c, 1, 1, &v(&[1, 0])).unwrap());
        assert!(resonance_membership(&c, 1, 1, &v(&[0, 0])).unwrap());
        assert!(resonance_membership(&c, 1, 0, &v(&[5, -3])).unwrap());
        assert!(betti_at(&c, &v(&[1])).is_err());
    }

    #[test]
    fn cyclotomic_point() {
        let c = aomoto(&torus());
        let p = [Cyclotomic::zeta(3), Cyclotomic::zero()];
        assert_eq!(betti_at(&c, &p).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn subspace_certificates() {
        let h = aomoto(&heisenberg());
        let zero = LinearSubspaceQ::zero(2);
        assert!(verify_subspace_in_resonance(&h, &zero, 1, 2, 0).unwrap().is_certified());
        let line = LinearSubspaceQ::new(2, vec![v(&[1, 0])]).unwrap();
        match verify_subspace_in_resonance(&h, &line, 1, 1, 0).unwrap() {
            SubspaceVerdict::Refuted { point, betti, .. } => {
                assert_eq!(point, v(&[1, 0]));
                assert_eq!(betti, 0);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
        let p = aomoto(&pencil());
        let plane = LinearSubspaceQ::from_equations(3, vec![v(&[1, 1, 1])]).unwrap();
        assert!(verify_subspace_in_resonance(&p, &plane, 1, 1, 0).unwrap().is_certified());
        assert!(!verify_subspace_in_resonance(&p, &LinearSubspaceQ::full(3), 1, 1, 0).unwrap().is_certified());
        assert!(verify_subspace_in_resonance(&p, &LinearSubspaceQ::zero(2), 1, 1, 0).is_err());
    }

    #[test]
    fn probing() {
        let h = probe_components(&aomoto(&heisenberg()), 1, 1, 20, 1).unwrap();
        assert_eq!(h.candidates, vec![LinearSubspaceQ::zero(2)]);
        let t = probe_components(&aomoto(&torus()), 1, 1, 20, 1).unwrap();
        assert_eq!(t.candidates, vec![LinearSubspaceQ::zero(2)]);
        let p = probe_components(&aomoto(&pencil()), 1, 1, 20, 1).unwrap();
        let plane = LinearSubspaceQ::from_equations(3, vec![v(&[1, 1, 1])]).unwrap();
        assert!(p.candidates.iter().any(|s| s.canonical() == plane.canonical()), "{:?}", p.candidates);
        assert!(!p.exhaustive);
    }
}
