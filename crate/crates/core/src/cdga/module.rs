//! Differential graded modules over a CDGA and their Aomoto complexes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::field::Rational;
use crate::arith::matrix::Matrix;
use crate::error::{Error, Result};

use super::algebra::{BasisRef, GradedAlgebra, ValidationReport, Violation};
use super::aomoto::{flat_connections, AomotoComplex};

/// A finite DG module `(M, d_M)` over a [`GradedAlgebra`], with the action
/// `A^i ⊗ M^j → M^{i+j}` stored like the algebra's structure constants.
#[derive(Clone, Debug)]
pub struct DGModule {
    names: Vec<Vec<String>>,
    action: BTreeMap<(usize, usize), Matrix<Rational>>,
    diff: Vec<Matrix<Rational>>,
    malformed: Vec<Violation>,
}

impl DGModule {
    pub fn dims(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, j: usize) -> usize {
        self.names.get(j).map_or(0, Vec::len)
    }

    pub fn top_degree(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn diff(&self, j: usize) -> Matrix<Rational> {
        self.diff.get(j).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(j + 1), self.dim(j)))
    }

    /// `a·m` for `a ∈ A^i`, `m ∈ M^j`.
    pub fn act(&self, alg: &GradedAlgebra, i: usize, a: &[Rational], j: usize, m: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim(i + j)];
        let Some(mat) = self.action.get(&(i, j)) else { return out };
        let dj = self.dim(j);
        debug_assert_eq!(a.len(), alg.dim(i));
        for (p, x) in a.iter().enumerate() {
            for (q, y) in m.iter().enumerate() {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let coef = x * y;
                for (t, o) in out.iter_mut().enumerate() {
                    let c = &mat[(t, p * dj + q)];
                    if !c.is_zero() {
                        *o = &*o + &coef * c;
                    }
                }
            }
        }
        out
    }

    fn basis_vector(&self, j: usize, idx: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim(j)];
        v[idx] = Rational::one();
        v
    }

    fn action_matrix(&self, alg: &GradedAlgebra, w: &[Rational], j: usize) -> Matrix<Rational> {
        let cols: Vec<Vec<Rational>> = (0..self.dim(j)).map(|q| self.act(alg, 1, w, j, &self.basis_vector(j, q))).collect();
        Matrix::from_fn(self.dim(j + 1), self.dim(j), |r, c| cols[c][r].clone())
    }

    /// Module axioms: unit, associativity `(ab)m = a(bm)`, `d_M² = 0` and
    /// `d(am) = (da)m + (−1)^{|a|} a·dm` on basis elements.
    pub fn validate(&self, alg: &GradedAlgebra) -> ValidationReport {
        let mut rep = ValidationReport { violations: self.malformed.clone() };
        let top = self.top_degree();
        let push = |rep: &mut ValidationReport, axiom: &'static str, w: Vec<BasisRef>, d: &str| rep.violations.push(Violation { axiom, witness: w, detail: d.into() });
        for j in 0..top.saturating_sub(1) {
            if !self.diff(j + 1).mul(&self.diff(j)).is_zero() {
                push(&mut rep, "d_squared", vec![BasisRef { degree: j, index: 0 }], "d_M∘d_M ≠ 0");
            }
        }
        let abasis: Vec<BasisRef> = (0..=alg.top_degree()).flat_map(|d| (0..alg.dim(d)).map(move |index| BasisRef { degree: d, index })).collect();
        for j in 0..=top {
            for q in 0..self.dim(j) {
                let m = self.basis_vector(j, q);
                let mref = BasisRef { degree: j, index: q };
                if self.act(alg, 0, &[Rational::one()], j, &m) != m {
                    push(&mut rep, "unit", vec![mref], "1·m ≠ m");
                }
                for &a in &abasis {
                    for &b in &abasis {
                        if a.degree == 0 || b.degree == 0 || a.degree + b.degree + j > top {
                            continue;
                        }
                        let (av, bv) = (alg.basis_vector(a), alg.basis_vector(b));
                        let lhs = self.act(alg, a.degree + b.degree, &alg.mul(a.degree, &av, b.degree, &bv), j, &m);
                        let rhs = self.act(alg, a.degree, &av, b.degree + j, &self.act(alg, b.degree, &bv, j, &m));
                        if lhs != rhs {
                            push(&mut rep, "associativity", vec![a, b, mref], "(ab)m ≠ a(bm)");
                        }
                    }
                }
                for &a in &abasis {
                    if a.degree + j + 1 > top {
                        continue;
                    }
                    let av = alg.basis_vector(a);
                    let lhs = self.diff(a.degree + j).mul_vec(&self.act(alg, a.degree, &av, j, &m));
                    let t1 = self.act(alg, a.degree + 1, &alg.apply_diff(a.degree, &av), j, &m);
                    let t2 = self.act(alg, a.degree, &av, j + 1, &self.diff(j).mul_vec(&m));
                    let sign = if a.degree % 2 == 1 { -Rational::one() } else { Rational::one() };
                    if lhs.iter().zip(t1.iter().zip(&t2)).any(|(l, (x, y))| l != &(x + y * &sign)) {
                        push(&mut rep, "leibniz", vec![a, mref], "d(am) ≠ (da)m + (−1)^{|a|} a·dm");
                    }
                }
            }
        }
        rep
    }

    /// `d_ω = d_M + ω·(−)` over the flat connections of `alg`.
    pub fn aomoto(&self, alg: &GradedAlgebra) -> AomotoComplex {
        let flat = flat_connections(alg);
        let top = self.top_degree();
        let d: Vec<Matrix<Rational>> = (0..top).map(|j| self.diff(j)).collect();
        let ops: Vec<Vec<Matrix<Rational>>> = flat.vectors.iter().map(|v| (0..top).map(|j| self.action_matrix(alg, v, j)).collect()).collect();
        AomotoComplex::from_operators(flat.vars.clone(), self.dims(), &d, &ops)
    }
}

/// Name-based construction of a [`DGModule`]; the unit action is implicit.
#[derive(Clone, Debug, Default)]
pub struct ModuleBuilder {
    names: Vec<Vec<String>>,
    actions: Vec<(String, String, Vec<(String, Rational)>)>,
    diffs: Vec<(String, Vec<(String, Rational)>)>,
}

impl ModuleBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(mut self, degree: usize, names: &[&str]) -> Self {
        self.set_basis(degree, names.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn set_basis(&mut self, degree: usize, names: Vec<String>) {
        if self.names.len() <= degree {
            self.names.resize(degree + 1, Vec::new());
        }
        self.names[degree] = names;
    }

    pub fn action(mut self, a: &str, m: &str, rhs: &[(&str, Rational)]) -> Self {
        self.add_action(a.into(), m.into(), rhs.iter().map(|(n, c)| (n.to_string(), c.clone())).collect());
        self
    }

    pub fn add_action(&mut self, a: String, m: String, rhs: Vec<(String, Rational)>) {
        self.actions.push((a, m, rhs));
    }

    pub fn differential(mut self, m: &str, rhs: &[(&str, Rational)]) -> Self {
        self.add_differential(m.into(), rhs.iter().map(|(n, c)| (n.to_string(), c.clone())).collect());
        self
    }

    pub fn add_differential(&mut self, m: String, rhs: Vec<(String, Rational)>) {
        self.diffs.push((m, rhs));
    }

    pub fn build(self, alg: &GradedAlgebra) -> Result<DGModule> {
        let names = self.names;
        let mlookup = |name: &str| -> Result<BasisRef> {
            names
                .iter()
                .enumerate()
                .find_map(|(degree, ns)| ns.iter().position(|n| n == name).map(|index| BasisRef { degree, index }))
                .ok_or_else(|| Error::Input(format!("unknown module basis element {name:?}")))
        };
        let alookup = |name: &str| alg.lookup(name).ok_or_else(|| Error::Input(format!("unknown algebra basis element {name:?}")));
        let dim = |j: usize| names.get(j).map_or(0, Vec::len);
        let top = names.len().saturating_sub(1);
        let mut malformed = Vec::new();
        let mut action = BTreeMap::new();
        for i in 0..=alg.top_degree() {
            for j in 0..=top {
                if i + j > top {
                    continue;
                }
                let mut m = Matrix::zeros(dim(i + j), alg.dim(i) * dim(j));
                if i == 0 {
                    for q in 0..dim(j) {
                        m[(q, q)] = Rational::one();
                    }
                }
                action.insert((i, j), m);
            }
        }
        for (a, m, rhs) in &self.actions {
            let (ar, mr) = (alookup(a)?, mlookup(m)?);
            for (n, c) in rhs {
                let r = mlookup(n)?;
                if r.degree != ar.degree + mr.degree {
                    malformed.push(Violation { axiom: "grading", witness: vec![ar, mr, r], detail: format!("{a}·{m} has a term {n} of degree {}", r.degree) });
                    continue;
                }
                let mat = action.get_mut(&(ar.degree, mr.degree)).expect("degree in range");
                let col = ar.index * dim(mr.degree) + mr.index;
                mat[(r.index, col)] = &mat[(r.index, col)] + c;
            }
        }
        let mut diff: Vec<Matrix<Rational>> = (0..top).map(|j| Matrix::zeros(dim(j + 1), dim(j))).collect();
        for (m, rhs) in &self.diffs {
            let mr = mlookup(m)?;
            for (n, c) in rhs {
                let r = mlookup(n)?;
                if r.degree != mr.degree + 1 {
                    malformed.push(Violation { axiom: "grading", witness: vec![mr, r], detail: format!("d({m}) has a term {n} of the wrong degree") });
                    continue;
                }
                diff[mr.degree][(r.index, mr.index)] = &diff[mr.degree][(r.index, mr.index)] + c;
            }
        }
        Ok(DGModule { names, action, diff, malformed })
    }
}

#[cfg(test)]
mod tests {
    use super::super::algebra::fixtures::*;
    use super::super::algebra::q;
    use super::super::resonance::betti_at;
    use super::*;
    use crate::arith::field::int;

    /// The algebra as a module over itself.
    fn regular_torus_module() -> (GradedAlgebra, DGModule) {
        let a = torus();
        let m = ModuleBuilder::new()
            .basis(0, &["m"])
            .basis(1, &["ma", "mb"])
            .basis(2, &["mab"])
            .action("a", "m", &[("ma", q(1))])
            .action("b", "m", &[("mb", q(1))])
            .action("a", "mb", &[("mab", q(1))])
            .action("b", "ma", &[("mab", q(-1))])
            .action("a^b", "m", &[("mab", q(1))])
            .build(&a)
            .unwrap();
        (a, m)
    }

    #[test]
    fn regular_module_matches_algebra() {
        let (a, m) = regular_torus_module();
        assert!(m.validate(&a).is_valid(), "{:?}", m.validate(&a));
        let c = m.aomoto(&a);
        assert!(c.flatness_defects().is_empty());
        assert_eq!(betti_at(&c, &[int(0), int(0)]).unwrap(), vec![1, 2, 1]);
        assert_eq!(betti_at(&c, &[int(1), int(2)]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn broken_leibniz_detected() {
        let a = torus();
        // regular module plus d(m) = ma: d(b·m) = 0 but (db)m − b·dm = mab
        let m = ModuleBuilder::new()
            .basis(0, &["m"])
            .basis(1, &["ma", "mb"])
            .basis(2, &["mab"])
            .action("a", "m", &[("ma", q(1))])
            .action("b", "m", &[("mb", q(1))])
            .action("a", "mb", &[("mab", q(1))])
            .action("b", "ma", &[("mab", q(-1))])
            .action("a^b", "m", &[("mab", q(1))])
            .differential("m", &[("ma", q(1))])
            .build(&a)
            .unwrap();
        let rep = m.validate(&a);
        assert!(rep.violations.iter().any(|v| v.axiom == "leibniz"), "{rep:?}");
    }
}
