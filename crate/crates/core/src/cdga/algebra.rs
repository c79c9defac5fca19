use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::field::Rational;
use crate::arith::matrix::Matrix;
use crate::error::{Error, Result};

/// A basis element, addressed by degree and index within that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisRef {
    pub degree: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<BasisRef>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, axiom: &'static str, witness: Vec<BasisRef>, detail: impl Into<String>) {
        self.violations.push(Violation { axiom, witness, detail: detail.into() });
    }
}

/// A finite graded algebra with differential, on fixed bases.
///
/// `mult(i, j)` is the `dim A^{i+j} × (dim A^i · dim A^j)` matrix whose
/// column `a·dim A^j + b` is the product of basis elements `a ∈ A^i` and
/// `b ∈ A^j`. `diff(i)` is the `dim A^{i+1} × dim A^i` matrix of `d^i`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    names: Vec<Vec<String>>,
    mult: BTreeMap<(usize, usize), Matrix<Rational>>,
    diff: Vec<Matrix<Rational>>,
    malformed: Vec<Violation>,
}

impl GradedAlgebra {
    pub fn top_degree(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.names.get(i).map_or(0, Vec::len)
    }

    pub fn names(&self) -> &[Vec<String>] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<BasisRef> {
        self.names.iter().enumerate().find_map(|(degree, ns)| ns.iter().position(|n| n == name).map(|index| BasisRef { degree, index }))
    }

    /// `d^i`; the zero map when `i` or `i+1` is out of range.
    pub fn diff(&self, i: usize) -> Matrix<Rational> {
        self.diff.get(i).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(i + 1), self.dim(i)))
    }

    pub fn mult_matrix(&self, i: usize, j: usize) -> Option<&Matrix<Rational>> {
        self.mult.get(&(i, j))
    }

    /// Product of `x ∈ A^i` and `y ∈ A^j` (zero vector in `A^{i+j}`, empty
    /// past the top degree).
    pub fn mul(&self, i: usize, x: &[Rational], j: usize, y: &[Rational]) -> Vec<Rational> {
        let target = self.dim(i + j);
        let mut out = vec![Rational::zero(); target];
        let Some(m) = self.mult.get(&(i, j)) else { return out };
        let dj = self.dim(j);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let coef = xa * yb;
                let col = a * dj + b;
                for (t, o) in out.iter_mut().enumerate() {
                    let c = &m[(t, col)];
                    if !c.is_zero() {
                        *o = &*o + &coef * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, r: BasisRef) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim(r.degree)];
        v[r.index] = Rational::one();
        v
    }

    pub fn apply_diff(&self, i: usize, x: &[Rational]) -> Vec<Rational> {
        self.diff(i).mul_vec(x)
    }

    /// Matrix of left multiplication by `w ∈ A^deg` from `A^i` to `A^{i+deg}`.
    pub fn left_mult(&self, deg: usize, w: &[Rational], i: usize) -> Matrix<Rational> {
        let cols: Vec<Vec<Rational>> = (0..self.dim(i)).map(|b| self.mul(deg, w, i, &self.basis_vector(BasisRef { degree: i, index: b }))).collect();
        Matrix::from_fn(self.dim(i + deg), self.dim(i), |r, c| cols[c][r].clone())
    }

    /// Exterior algebra on degree-one generators, with `d` given on
    /// generators by (generator, linear combination of degree-two
    /// monomials as sorted index pairs) and extended by the Leibniz rule.
    /// Basis monomials are named by joining generator names with `^`.
    pub fn exterior(gens: &[&str], d_gens: &[(usize, Vec<((usize, usize), Rational)>)]) -> Self {
        let n = gens.len();
        let mut by_degree: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            by_degree[subset.len()].push(subset);
        }
        for layer in &mut by_degree {
            layer.sort();
        }
        let name = |s: &[usize]| if s.is_empty() { "1".to_string() } else { s.iter().map(|&i| gens[i]).collect::<Vec<_>>().join("^") };
        let names: Vec<Vec<String>> = by_degree.iter().map(|l| l.iter().map(|s| name(s)).collect()).collect();
        let index_of = |s: &[usize]| by_degree[s.len()].iter().position(|t| t == s).unwrap();

        let mut mult = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n - i {
                let di = by_degree[i].len();
                let dj = by_degree[j].len();
                let mut m = Matrix::zeros(by_degree[i + j].len(), di * dj);
                for (a, s) in by_degree[i].iter().enumerate() {
                    for (b, t) in by_degree[j].iter().enumerate() {
                        if let Some((sign, merged)) = wedge(s, t) {
                            m[(index_of(&merged), a * dj + b)] = Rational::from_integer(sign.into());
                        }
                    }
                }
                mult.insert((i, j), m);
            }
        }
        let mut alg = GradedAlgebra { names, mult, diff: Vec::new(), malformed: Vec::new() };
        let mut dg: Vec<Vec<Rational>> = vec![vec![Rational::zero(); alg.dim(2)]; n];
        for (g, comb) in d_gens {
            for ((p, q), c) in comb {
                let (sign, m) = wedge(&[*p], &[*q]).expect("degree-two monomial with repeated generator");
                let idx = index_of(&m);
                dg[*g][idx] = &dg[*g][idx] + c * Rational::from_integer(sign.into());
            }
        }
        // d on monomials, degree by degree: d(g·rest) = dg·rest − g·d(rest)
        // where g is the smallest generator of the monomial
        let mut images: Vec<Vec<Vec<Rational>>> = vec![vec![vec![Rational::zero(); alg.dim(1)]]];
        if n >= 1 {
            images.push(dg.clone());
        }
        for deg in 2..n {
            let mut layer = Vec::with_capacity(by_degree[deg].len());
            for s in &by_degree[deg] {
                let g = s[0];
                let rest = &s[1..];
                let rest_vec = alg.basis_vector(BasisRef { degree: deg - 1, index: index_of(rest) });
                let gen_vec = alg.basis_vector(BasisRef { degree: 1, index: g });
                let t1 = alg.mul(2, &dg[g], deg - 1, &rest_vec);
                let t2 = alg.mul(1, &gen_vec, deg, &images[deg - 1][index_of(rest)]);
                layer.push(t1.iter().zip(&t2).map(|(a, b)| a - b).collect());
            }
            images.push(layer);
        }
        let diff: Vec<Matrix<Rational>> =
            (0..n).map(|i| Matrix::from_fn(alg.dim(i + 1), alg.dim(i), |r, c| images[i][c][r].clone())).collect();
        alg.diff = diff;
        alg
    }

    /// Connectedness, `d² = 0`, unit, graded commutativity, associativity,
    /// graded Leibniz rule, and `a·a = 0` on `A¹`.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport { violations: self.malformed.clone() };
        let top = self.top_degree();
        if self.dim(0) != 1 {
            rep.push("connected", vec![], format!("dim A^0 = {} (expected 1)", self.dim(0)));
            return rep;
        }
        if !self.diff(0).is_zero() {
            rep.push("connected", vec![BasisRef { degree: 0, index: 0 }], "d^0 must vanish");
        }
        for i in 0..top.saturating_sub(1) {
            let dd = self.diff(i + 1).mul(&self.diff(i));
            for c in 0..dd.cols() {
                if (0..dd.rows()).any(|r| !dd[(r, c)].is_zero()) {
                    rep.push("d_squared", vec![BasisRef { degree: i, index: c }], format!("d^{}∘d^{} ≠ 0", i + 1, i));
                }
            }
        }
        let unit = vec![Rational::one()];
        let basis: Vec<BasisRef> = (0..=top).flat_map(|d| (0..self.dim(d)).map(move |index| BasisRef { degree: d, index })).collect();
        for &x in &basis {
            let xv = self.basis_vector(x);
            if self.mul(0, &unit, x.degree, &xv) != xv || self.mul(x.degree, &xv, 0, &unit) != xv {
                rep.push("unit", vec![x], "1·x = x·1 = x fails");
            }
        }
        for &x in &basis {
            for &y in &basis {
                if x.degree == 0 || y.degree == 0 || x.degree + y.degree > top || x > y {
                    continue;
                }
                let (xv, yv) = (self.basis_vector(x), self.basis_vector(y));
                let xy = self.mul(x.degree, &xv, y.degree, &yv);
                let yx = self.mul(y.degree, &yv, x.degree, &xv);
                let sign = if (x.degree * y.degree) % 2 == 1 { -Rational::one() } else { Rational::one() };
                if xy.iter().zip(&yx).any(|(a, b)| a != &(b * &sign)) {
                    rep.push("graded_commutativity", vec![x, y], "x·y ≠ (−1)^{|x||y|} y·x");
                }
            }
        }
        for &x in &basis {
            for &y in &basis {
                for &z in &basis {
                    if x.degree == 0 || y.degree == 0 || z.degree == 0 || x.degree + y.degree + z.degree > top {
                        continue;
                    }
                    let (xv, yv, zv) = (self.basis_vector(x), self.basis_vector(y), self.basis_vector(z));
                    let left = self.mul(x.degree + y.degree, &self.mul(x.degree, &xv, y.degree, &yv), z.degree, &zv);
                    let right = self.mul(x.degree, &xv, y.degree + z.degree, &self.mul(y.degree, &yv, z.degree, &zv));
                    if left != right {
                        rep.push("associativity", vec![x, y, z], "(xy)z ≠ x(yz)");
                    }
                }
            }
        }
        for &x in &basis {
            for &y in &basis {
                if x.degree + y.degree + 1 > top {
                    continue;
                }
                let (xv, yv) = (self.basis_vector(x), self.basis_vector(y));
                let (p, q) = (x.degree, y.degree);
                let lhs = self.apply_diff(p + q, &self.mul(p, &xv, q, &yv));
                let t1 = self.mul(p + 1, &self.apply_diff(p, &xv), q, &yv);
                let t2 = self.mul(p, &xv, q + 1, &self.apply_diff(q, &yv));
                let sign = if p % 2 == 1 { -Rational::one() } else { Rational::one() };
                if lhs.iter().zip(t1.iter().zip(&t2)).any(|(l, (a, b))| l != &(a + b * &sign)) {
                    rep.push("leibniz", vec![x, y], "d(xy) ≠ (dx)y + (−1)^{|x|} x(dy)");
                }
            }
        }
        if top >= 2 {
            for a in 0..self.dim(1) {
                let v = self.basis_vector(BasisRef { degree: 1, index: a });
                if self.mul(1, &v, 1, &v).iter().any(|c| !c.is_zero()) {
                    rep.push("omega_squared", vec![BasisRef { degree: 1, index: a }], "a·a ≠ 0 for a degree-one basis element");
                }
            }
        }
        rep
    }
}

/// Sign and merged index set of `e_s ∧ e_t`, or `None` if they overlap.
fn wedge(s: &[usize], t: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut inversions = 0usize;
    for &a in s {
        for &b in t {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = s.iter().chain(t).copied().collect();
    merged.sort();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, merged))
}

/// Collects basis names, products and differentials by name.
///
/// Products involving the unit (degree 0) are implicit. When only `x·y` is
/// given, `y·x` is filled in by graded commutativity.
#[derive(Clone, Debug, Default)]
pub struct AlgebraBuilder {
    names: Vec<Vec<String>>,
    products: Vec<(String, String, Vec<(String, Rational)>)>,
    diffs: Vec<(String, Vec<(String, Rational)>)>,
}

impl AlgebraBuilder {
    pub fn new() -> Self {
        AlgebraBuilder { names: vec![vec!["1".to_string()]], ..Default::default() }
    }

    /// Declares the basis of `A^degree` (degree ≥ 1).
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

    pub fn product(mut self, x: &str, y: &str, rhs: &[(&str, Rational)]) -> Self {
        self.add_product(x.into(), y.into(), rhs.iter().map(|(n, c)| (n.to_string(), c.clone())).collect());
        self
    }

    pub fn add_product(&mut self, x: String, y: String, rhs: Vec<(String, Rational)>) {
        self.products.push((x, y, rhs));
    }

    pub fn differential(mut self, x: &str, rhs: &[(&str, Rational)]) -> Self {
        self.add_differential(x.into(), rhs.iter().map(|(n, c)| (n.to_string(), c.clone())).collect());
        self
    }

    pub fn add_differential(&mut self, x: String, rhs: Vec<(String, Rational)>) {
        self.diffs.push((x, rhs));
    }

    /// Unknown names are input errors; grading mismatches are recorded as
    /// violations reported by [`GradedAlgebra::validate`].
    pub fn build(self) -> Result<GradedAlgebra> {
        let names = self.names;
        let mut seen = std::collections::HashSet::new();
        for n in names.iter().flatten() {
            if !seen.insert(n.clone()) {
                return Err(Error::Input(format!("duplicate basis name {n:?}")));
            }
        }
        let lookup = |name: &str| -> Result<BasisRef> {
            names
                .iter()
                .enumerate()
                .find_map(|(degree, ns)| ns.iter().position(|n| n == name).map(|index| BasisRef { degree, index }))
                .ok_or_else(|| Error::Input(format!("unknown basis element {name:?}")))
        };
        let dim = |i: usize| names.get(i).map_or(0, Vec::len);
        let top = names.len() - 1;
        let mut malformed = Vec::new();

        let mut mult = BTreeMap::new();
        for i in 0..=top {
            for j in 0..=top - i {
                let mut m = Matrix::zeros(dim(i + j), dim(i) * dim(j));
                if i == 0 {
                    for b in 0..dim(j) {
                        m[(b, b)] = Rational::one();
                    }
                } else if j == 0 {
                    for a in 0..dim(i) {
                        m[(a, a)] = Rational::one();
                    }
                }
                mult.insert((i, j), m);
            }
        }
        let mut given = std::collections::HashSet::new();
        for (x, y, _) in &self.products {
            given.insert((lookup(x)?, lookup(y)?));
        }
        for (x, y, rhs) in &self.products {
            let (xr, yr) = (lookup(x)?, lookup(y)?);
            let mut entries = Vec::new();
            for (n, c) in rhs {
                let r = lookup(n)?;
                if r.degree != xr.degree + yr.degree {
                    malformed.push(Violation { axiom: "grading", witness: vec![xr, yr, r], detail: format!("{x}·{y} has a term {n} of degree {}", r.degree) });
                    continue;
                }
                entries.push((r.index, c.clone()));
            }
            if xr.degree + yr.degree > top {
                if !entries.is_empty() {
                    malformed.push(Violation { axiom: "grading", witness: vec![xr, yr], detail: "product beyond the top degree".into() });
                }
                continue;
            }
            let sign = if (xr.degree * yr.degree) % 2 == 1 { -Rational::one() } else { Rational::one() };
            let mirror = !given.contains(&(yr, xr));
            for (t, c) in &entries {
                let col = xr.index * dim(yr.degree) + yr.index;
                let m = mult.get_mut(&(xr.degree, yr.degree)).unwrap();
                m[(*t, col)] = &m[(*t, col)] + c;
                if mirror && xr != yr {
                    let col = yr.index * dim(xr.degree) + xr.index;
                    let m = mult.get_mut(&(yr.degree, xr.degree)).unwrap();
                    m[(*t, col)] = &m[(*t, col)] + c * &sign;
                }
            }
        }
        let mut diff: Vec<Matrix<Rational>> = (0..top).map(|i| Matrix::zeros(dim(i + 1), dim(i))).collect();
        for (x, rhs) in &self.diffs {
            let xr = lookup(x)?;
            for (n, c) in rhs {
                let r = lookup(n)?;
                if r.degree != xr.degree + 1 {
                    malformed.push(Violation { axiom: "grading", witness: vec![xr, r], detail: format!("d({x}) has a term {n} of degree {} (expected {})", r.degree, xr.degree + 1) });
                    continue;
                }
                let m = &mut diff[xr.degree];
                m[(r.index, xr.index)] = &m[(r.index, xr.index)] + c;
            }
        }
        Ok(GradedAlgebra { names, mult, diff, malformed })
    }
}

#[cfg(test)]
pub(crate) fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn torus() -> GradedAlgebra {
        GradedAlgebra::exterior(&["a", "b"], &[])
    }

    /// Λ(a,b,c), dc = ab.
    pub fn heisenberg() -> GradedAlgebra {
        GradedAlgebra::exterior(&["a", "b", "c"], &[(2, vec![((0, 1), q(1))])])
    }

    /// Orlik–Solomon algebra of three concurrent lines: e1e2 − e1e3 + e2e3 = 0.
    pub fn pencil() -> GradedAlgebra {
        AlgebraBuilder::new()
            .basis(1, &["e1", "e2", "e3"])
            .basis(2, &["e12", "e13"])
            .product("e1", "e2", &[("e12", q(1))])
            .product("e1", "e3", &[("e13", q(1))])
            .product("e2", "e3", &[("e12", q(-1)), ("e13", q(1))])
            .build()
            .unwrap()
    }
}
