use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::arith::field::Rational;
use crate::arith::lattice::{int_mul, smith_normal_form, IntMatrix};
use crate::arith::matrix::Matrix;
use crate::arith::poly::{indexed_vars, Monomial, Poly, Vars};
use crate::error::{Error, Result};

use super::complex::LaurentComplex;

/// `(generator, ±1)`.
pub type Letter = (usize, i64);
pub type Word = Vec<Letter>;

/// A finite group presentation with a surjection onto `Z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    /// Row `j` is the image of generator `j` in `Z^n`.
    abelianization: IntMatrix,
}

fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &(g, e) in w {
        if out.last().is_some_and(|&(h, f)| h == g && f == -e) {
            out.pop();
        } else {
            out.push((g, e));
        }
    }
    out
}

fn exponent_sums(gens: usize, relators: &[Word]) -> IntMatrix {
    Matrix::from_fn(relators.len(), gens, |r, g| BigInt::from(relators[r].iter().filter(|l| l.0 == g).map(|l| l.1).sum::<i64>()))
}

impl Presentation {
    /// Uses the free part of the abelianization `Z^{gens} / ⟨relators⟩`,
    /// coordinatized through the Smith form of the exponent-sum matrix.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let relators = check_words(&generators, relators)?;
        let g = generators.len();
        let r = exponent_sums(g, &relators);
        let abelianization = if r.is_zero() {
            IntMatrix::identity(g)
        } else {
            // rowspan(R) = rowspan(D·V⁻¹): x ↦ (x·V)_{rank..} kills relators
            let snf = smith_normal_form(&r);
            Matrix::from_fn(g, g - snf.rank, |i, j| snf.v[(i, snf.rank + j)].clone())
        };
        Ok(Presentation { generators, relators, abelianization })
    }

    /// Uses a caller-supplied map; it must kill every relator and be onto.
    pub fn with_abelianization(generators: Vec<String>, relators: Vec<Word>, abelianization: IntMatrix) -> Result<Self> {
        let relators = check_words(&generators, relators)?;
        if abelianization.rows() != generators.len() {
            return Err(Error::DimensionMismatch { expected: generators.len(), found: abelianization.rows() });
        }
        let n = abelianization.cols();
        if !int_mul(&exponent_sums(generators.len(), &relators), &abelianization).is_zero() {
            return Err(Error::Input("abelianization map does not kill the relators".into()));
        }
        let snf = smith_normal_form(&abelianization);
        if snf.rank != n || !snf.invariant_factors().iter().all(One::is_one) {
            return Err(Error::Input("abelianization map is not surjective onto Z^n".into()));
        }
        Ok(Presentation { generators, relators, abelianization })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn abelianization(&self) -> &IntMatrix {
        &self.abelianization
    }

    /// Rank `n` of the character torus.
    pub fn n(&self) -> usize {
        self.abelianization.cols()
    }

    /// Parses a word such as `a b a^-1 b^-1`, `a*b*a^-1*b^-1` or
    /// `[a, b c]`. Generator names are matched greedily, so juxtaposed
    /// names need no separator when unambiguous. `1` is the empty word.
    pub fn parse_word(generators: &[String], s: &str) -> Result<Word> {
        let chars: Vec<char> = s.chars().collect();
        let mut p = WordParser { gens: generators, s: &chars, pos: 0 };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != chars.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(free_reduce(&w))
    }

    fn image(&self, g: usize) -> Vec<i64> {
        (0..self.n()).map(|j| self.abelianization[(g, j)].to_i64().expect("abelianization entry fits i64")).collect()
    }
}

fn check_words(generators: &[String], relators: Vec<Word>) -> Result<Vec<Word>> {
    for w in &relators {
        for &(g, e) in w {
            if g >= generators.len() || e.abs() != 1 {
                return Err(Error::Input(format!("invalid letter ({g}, {e}) in relator")));
            }
        }
    }
    Ok(relators.iter().map(|w| free_reduce(w)).collect())
}

struct WordParser<'a> {
    gens: &'a [String],
    s: &'a [char],
    pos: usize,
}

impl WordParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Input(format!("{msg} at column {} of word \"{}\"", self.pos + 1, self.s.iter().collect::<String>()))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos].is_whitespace() || self.s[self.pos] == '*' || self.s[self.pos] == '.') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(',') | Some(']') | Some(')') => return Ok(out),
                _ => out.extend(self.factor()?),
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base: Word = match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                let mut w = u.clone();
                w.extend(v.iter().copied());
                w.extend(inverse(&u));
                w.extend(inverse(&v));
                w
            }
            Some('(') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(')')?;
                u
            }
            Some('1') => {
                self.pos += 1;
                Vec::new()
            }
            _ => {
                let rest: String = self.s[self.pos..].iter().collect();
                let best = self.gens.iter().enumerate().filter(|(_, g)| !g.is_empty() && rest.starts_with(g.as_str())).max_by_key(|(_, g)| g.len());
                let Some((idx, g)) = best else {
                    return Err(self.error("unknown generator"));
                };
                self.pos += g.chars().count();
                vec![(idx, 1)]
            }
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            if self.peek() == Some('-') {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let txt: String = self.s[start..self.pos].iter().collect();
            let e: i64 = txt.parse().map_err(|_| self.error("bad exponent"))?;
            let unit = if e < 0 { inverse(&base) } else { base };
            let mut w = Vec::new();
            for _ in 0..e.unsigned_abs() {
                w.extend(unit.iter().copied());
            }
            return Ok(w);
        }
        Ok(base)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }
}

fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Abelianized Fox derivative `∂w/∂x_j`: each occurrence of `x_j` adds the
/// image of its prefix, each `x_j^{-1}` subtracts the image of the prefix
/// including itself.
pub fn fox_derivative(p: &Presentation, w: &[Letter], j: usize, vars: &Vars) -> Poly<Rational> {
    let n = p.n();
    let mut prefix = vec![0i64; n];
    let mut out = Poly::zero(vars.clone());
    for &(g, e) in w {
        let img = p.image(g);
        if e == 1 {
            if g == j {
                out.add_term(Monomial(prefix.clone()), Rational::one());
            }
            for k in 0..n {
                prefix[k] += img[k];
            }
        } else {
            for k in 0..n {
                prefix[k] -= img[k];
            }
            if g == j {
                out.add_term(Monomial(prefix.clone()), -Rational::one());
            }
        }
    }
    out
}

/// The cellular chain complex of the universal free abelian cover of the
/// presentation 2-complex: `∂₁` is the row `(t^{[g_j]} − 1)_j`, and `∂₂`
/// has the abelianized Fox derivatives of relator `r` in column `r`.
pub fn presentation_to_complex(p: &Presentation) -> Result<LaurentComplex> {
    let n = p.n();
    let vars = indexed_vars("t", n);
    let g = p.generators.len();
    let d1 = Matrix::from_fn(1, g, |_, j| {
        let mut f = Poly::term(vars.clone(), Monomial(p.image(j)), Rational::one());
        f.add_term(Monomial::one(n), -Rational::one());
        f
    });
    let d2 = Matrix::from_fn(g, p.relators.len(), |j, r| fox_derivative(p, &p.relators[r], j, &vars));
    let mut ranks = vec![1, g];
    let mut boundaries = vec![d1];
    if !p.relators.is_empty() {
        ranks.push(p.relators.len());
        boundaries.push(d2);
    }
    LaurentComplex::new(vars, ranks, boundaries)
}

impl Presentation {
    /// Generator names `x1..xn` with no relators.
    pub fn free(n: usize) -> Self {
        Presentation { generators: (1..=n).map(|i| format!("x{i}")).collect(), relators: Vec::new(), abelianization: IntMatrix::identity(n) }
    }
}
