//! The declarative input format.
//!
//! A workspace file is a sequence of sections `[kind name]`, each followed
//! by `key = value` lines. `#` starts a comment. Keys may span several
//! words (`product e1 e2`, `d c`, `boundary 1`). Values are whitespace
//! separated tokens; matrix rows are separated by `;`, linear combinations
//! by `,`. See `docs/input-format.md` for every section.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use jumploci::arith::field::parse_rational;
use jumploci::arith::poly::vars;
use jumploci::arith::{Cyclotomic, IntMatrix, Matrix, Monomial, Poly, Rational};
use jumploci::cdga::{AlgebraBuilder, DGModule, GradedAlgebra, LinearSubspaceQ, ModuleBuilder, ValidationReport};
use jumploci::hodge::{validate_1hs, BdrCertificate, BdrPiece, HodgeAxiom, OneHodgeStructure};
use jumploci::torus::{AffineSubspaceQ, LaurentZeroSet, Subtorus, TranslatedSubtorus};
use jumploci::twisted::{presentation_to_complex, validate_complex, LaurentComplex, Presentation};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    Io { path: String, message: String },
    Syntax { file: String, line: usize, col: usize, message: String },
    Semantic { file: String, line: usize, object: String, invariant: String, message: String },
    Usage(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { path, message } => write!(f, "{path}: {message}"),
            InputError::Syntax { file, line, col, message } => write!(f, "{file}:{line}:{col}: syntax error: {message}"),
            InputError::Semantic { file, line, object, invariant, message } => {
                write!(f, "{file}:{line}: semantic error in {object}: violates `{invariant}`: {message}")
            }
            InputError::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl std::error::Error for InputError {}

type Res<T> = std::result::Result<T, InputError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Algebra,
    Module,
    Complex,
    Presentation,
    Torus,
    Affine,
    Zeroset,
    Subspace,
    Hodge,
    Bdr,
}

impl Kind {
    pub const ALL: [Kind; 10] =
        [Kind::Algebra, Kind::Module, Kind::Complex, Kind::Presentation, Kind::Torus, Kind::Affine, Kind::Zeroset, Kind::Subspace, Kind::Hodge, Kind::Bdr];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Algebra => "algebra",
            Kind::Module => "module",
            Kind::Complex => "complex",
            Kind::Presentation => "presentation",
            Kind::Torus => "torus",
            Kind::Affine => "affine",
            Kind::Zeroset => "zeroset",
            Kind::Subspace => "subspace",
            Kind::Hodge => "hodge",
            Kind::Bdr => "bdr",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// Whether validation failures abort loading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every object must pass its validation.
    Strict,
    /// Validation failures are recorded in [`ObjectInfo::violations`].
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub invariant: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectInfo {
    pub kind: Kind,
    pub name: String,
    pub file: String,
    pub line: usize,
    pub violations: Vec<Violation>,
}

/// A parsed object with its canonical text, the input to cache keys.
#[derive(Clone, Debug)]
pub struct Object<T> {
    pub value: T,
    pub canon: String,
}

#[derive(Clone, Debug)]
pub struct ModuleDecl {
    pub algebra: String,
    pub module: DGModule,
}

#[derive(Clone, Debug)]
pub struct PresentationDecl {
    pub presentation: Presentation,
    pub complex: LaurentComplex,
}

#[derive(Clone, Debug)]
pub struct ZeroSetDecl {
    pub vars: Vec<String>,
    pub set: LaurentZeroSet,
}

#[derive(Clone, Debug)]
pub struct BdrDecl {
    pub hodge: String,
    pub certificate: BdrCertificate,
}

#[derive(Debug, Default)]
pub struct Workspace {
    pub algebras: BTreeMap<String, Object<GradedAlgebra>>,
    pub modules: BTreeMap<String, Object<ModuleDecl>>,
    pub complexes: BTreeMap<String, Object<LaurentComplex>>,
    pub presentations: BTreeMap<String, Object<PresentationDecl>>,
    pub tori: BTreeMap<String, Object<TranslatedSubtorus>>,
    pub affines: BTreeMap<String, Object<AffineSubspaceQ>>,
    pub zerosets: BTreeMap<String, Object<ZeroSetDecl>>,
    pub subspaces: BTreeMap<String, Object<LinearSubspaceQ>>,
    pub hodge: BTreeMap<String, Object<OneHodgeStructure>>,
    pub bdrs: BTreeMap<String, Object<BdrDecl>>,
    /// Every object in declaration order.
    pub index: Vec<ObjectInfo>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, Object<T>>, kind: Kind, name: &str) -> Res<&'a Object<T>> {
    map.get(name).ok_or_else(|| InputError::Usage(format!("no {} named `{name}` in the workspace", kind.as_str())))
}

impl Workspace {
    /// Reads and parses every file; names must be unique per kind across
    /// all files and references may point into any file.
    pub fn load<P: AsRef<Path>>(paths: &[P], mode: Mode) -> Res<Workspace> {
        let mut sources = Vec::new();
        for p in paths {
            let path = p.as_ref();
            let display = path.display().to_string();
            let bytes = std::fs::read(path).map_err(|e| InputError::Io { path: display.clone(), message: e.to_string() })?;
            let text = String::from_utf8(bytes).map_err(|_| InputError::Io { path: display.clone(), message: "file is not valid UTF-8".into() })?;
            sources.push((display, text));
        }
        Workspace::from_sources(&sources, mode)
    }

    pub fn parse_str(file: &str, text: &str, mode: Mode) -> Res<Workspace> {
        Workspace::from_sources(&[(file.to_string(), text.to_string())], mode)
    }

    fn from_sources(sources: &[(String, String)], mode: Mode) -> Res<Workspace> {
        let mut sections = Vec::new();
        for (file, text) in sources {
            sections.extend(lex(file, text)?);
        }
        let mut seen: BTreeMap<(Kind, &str), &Section> = BTreeMap::new();
        for s in &sections {
            if let Some(prev) = seen.insert((s.kind, &s.name), s) {
                return Err(s.semantic(
                    "names unique per kind",
                    format!("{} `{}` is already declared at {}:{}", s.kind.as_str(), s.name, prev.file, prev.line),
                ));
            }
        }
        let mut ws = Workspace::default();
        // referenced kinds first
        let order = |k: Kind| matches!(k, Kind::Module | Kind::Bdr) as u8;
        let mut ordered: Vec<&Section> = sections.iter().collect();
        ordered.sort_by_key(|s| order(s.kind));
        let mut infos = Vec::new();
        for s in ordered {
            let violations = ws.build(s)?;
            infos.push(ObjectInfo { kind: s.kind, name: s.name.clone(), file: s.file.clone(), line: s.line, violations });
        }
        infos.sort_by_key(|i| sections.iter().position(|s| s.kind == i.kind && s.name == i.name));
        if mode == Mode::Strict {
            if let Some(info) = infos.iter().find(|i| !i.violations.is_empty()) {
                let v = &info.violations[0];
                return Err(InputError::Semantic {
                    file: info.file.clone(),
                    line: info.line,
                    object: format!("{} `{}`", info.kind.as_str(), info.name),
                    invariant: v.invariant.clone(),
                    message: v.detail.clone(),
                });
            }
        }
        ws.index = infos;
        Ok(ws)
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn algebra(&self, name: &str) -> Res<&Object<GradedAlgebra>> {
        lookup(&self.algebras, Kind::Algebra, name)
    }

    pub fn module(&self, name: &str) -> Res<&Object<ModuleDecl>> {
        lookup(&self.modules, Kind::Module, name)
    }

    /// A `[complex]` section, or the Fox complex of a `[presentation]`.
    pub fn complex(&self, name: &str) -> Res<(&LaurentComplex, &str)> {
        match (self.complexes.get(name), self.presentations.get(name)) {
            (Some(_), Some(_)) => Err(InputError::Usage(format!("`{name}` names both a complex and a presentation"))),
            (Some(c), None) => Ok((&c.value, &c.canon)),
            (None, Some(p)) => Ok((&p.value.complex, &p.canon)),
            (None, None) => Err(InputError::Usage(format!("no complex or presentation named `{name}` in the workspace"))),
        }
    }

    pub fn torus(&self, name: &str) -> Res<&Object<TranslatedSubtorus>> {
        lookup(&self.tori, Kind::Torus, name)
    }

    pub fn affine(&self, name: &str) -> Res<&Object<AffineSubspaceQ>> {
        lookup(&self.affines, Kind::Affine, name)
    }

    pub fn zeroset(&self, name: &str) -> Res<&Object<ZeroSetDecl>> {
        lookup(&self.zerosets, Kind::Zeroset, name)
    }

    pub fn subspace(&self, name: &str) -> Res<&Object<LinearSubspaceQ>> {
        lookup(&self.subspaces, Kind::Subspace, name)
    }

    pub fn hodge_structure(&self, name: &str) -> Res<&Object<OneHodgeStructure>> {
        lookup(&self.hodge, Kind::Hodge, name)
    }

    pub fn bdr(&self, name: &str) -> Res<&Object<BdrDecl>> {
        lookup(&self.bdrs, Kind::Bdr, name)
    }

    fn build(&mut self, s: &Section) -> Res<Vec<Violation>> {
        let mut canon = s.canon();
        let violations = match s.kind {
            Kind::Algebra => {
                let a = build_algebra(s)?;
                let v = report_violations(&a.validate());
                self.algebras.insert(s.name.clone(), Object { value: a, canon });
                v
            }
            Kind::Module => {
                let (alg_name, m) = build_module(s, self)?;
                let alg = &self.algebras[&alg_name];
                let v = report_violations(&m.validate(&alg.value));
                canon.push_str("\n@algebra\n");
                canon.push_str(&alg.canon);
                self.modules.insert(s.name.clone(), Object { value: ModuleDecl { algebra: alg_name, module: m }, canon });
                v
            }
            Kind::Complex => {
                let c = build_complex(s)?;
                let v = complex_violations(&c);
                self.complexes.insert(s.name.clone(), Object { value: c, canon });
                v
            }
            Kind::Presentation => {
                let p = build_presentation(s)?;
                let complex = presentation_to_complex(&p).map_err(|e| s.semantic("Fox complex", e.to_string()))?;
                let v = complex_violations(&complex);
                self.presentations.insert(s.name.clone(), Object { value: PresentationDecl { presentation: p, complex }, canon });
                v
            }
            Kind::Torus => {
                let t = build_torus(s)?;
                self.tori.insert(s.name.clone(), Object { value: t, canon });
                Vec::new()
            }
            Kind::Affine => {
                let a = build_affine(s)?;
                self.affines.insert(s.name.clone(), Object { value: a, canon });
                Vec::new()
            }
            Kind::Zeroset => {
                let z = build_zeroset(s)?;
                self.zerosets.insert(s.name.clone(), Object { value: z, canon });
                Vec::new()
            }
            Kind::Subspace => {
                let l = build_subspace(s)?;
                self.subspaces.insert(s.name.clone(), Object { value: l, canon });
                Vec::new()
            }
            Kind::Hodge => {
                let h = build_hodge(s)?;
                let rep = validate_1hs(&h);
                let v = rep
                    .failures
                    .iter()
                    .map(|f| match f {
                        HodgeAxiom::DirectSum => Violation {
                            invariant: "W_C = (W_C ∩ F) ⊕ (W_C ∩ F̄)".into(),
                            detail: format!("dim W_C = {} but dim W_C∩F + dim W_C∩F̄ = {}", rep.dim_w, rep.dim_pieces_sum),
                        },
                        HodgeAxiom::Spanning => {
                            Violation { invariant: "Λ_C = W_C + F".into(), detail: format!("dim (W_C + F) = {} < rank {}", rep.dim_w_plus_f, rep.rank) }
                        }
                    })
                    .collect();
                self.hodge.insert(s.name.clone(), Object { value: h, canon });
                v
            }
            Kind::Bdr => {
                let b = build_bdr(s, self)?;
                canon.push_str("\n@hodge\n");
                canon.push_str(&self.hodge[&b.hodge].canon);
                self.bdrs.insert(s.name.clone(), Object { value: b, canon });
                Vec::new()
            }
        };
        Ok(violations)
    }
}

fn report_violations(r: &ValidationReport) -> Vec<Violation> {
    r.violations.iter().map(|v| Violation { invariant: v.axiom.to_string(), detail: v.detail.clone() }).collect()
}

fn complex_violations(c: &LaurentComplex) -> Vec<Violation> {
    validate_complex(c)
        .defects
        .iter()
        .map(|d| Violation { invariant: "∂∂ = 0".into(), detail: format!("∂_{}∂_{} has a nonzero entry at ({}, {})", d.degree, d.degree + 1, d.row, d.col) })
        .collect()
}

#[derive(Clone, Debug)]
struct Entry {
    key: Vec<String>,
    key_col: usize,
    value: String,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
struct Section {
    kind: Kind,
    name: String,
    file: String,
    line: usize,
    entries: Vec<Entry>,
}

fn char_col(s: &str, byte: usize) -> usize {
    s[..byte].chars().count() + 1
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

fn lex(file: &str, text: &str) -> Res<Vec<Section>> {
    let syn = |line: usize, col: usize, message: String| InputError::Syntax { file: file.to_string(), line, col, message };
    let mut out: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.find('#').map_or(raw, |p| &raw[..p]);
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(syn(line, char_col(content, start + trimmed.len()), "section header must end with `]`".into()));
            };
            let words: Vec<&str> = inner.split_whitespace().collect();
            if words.len() != 2 {
                return Err(syn(line, char_col(content, start) + 1, "section header must be `[kind name]`".into()));
            }
            let kind = Kind::parse(words[0]).ok_or_else(|| syn(line, char_col(content, start) + 1, format!("unknown section kind `{}`", words[0])))?;
            if !is_name(words[1]) {
                return Err(syn(line, char_col(content, start) + 1, format!("invalid object name `{}`", words[1])));
            }
            out.push(Section { kind, name: words[1].to_string(), file: file.to_string(), line, entries: Vec::new() });
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(syn(line, char_col(content, start), "expected `key = value`".into()));
        };
        let key: Vec<String> = content[..eq].split_whitespace().map(str::to_string).collect();
        if key.is_empty() {
            return Err(syn(line, char_col(content, start), "missing key before `=`".into()));
        }
        let after = &content[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        let entry = Entry { key, key_col: char_col(content, start), value: after.trim().to_string(), line, col: char_col(content, eq + 1 + lead) };
        match out.last_mut() {
            Some(s) => s.entries.push(entry),
            None => return Err(syn(line, char_col(content, start), "entry outside of any section".into())),
        }
    }
    Ok(out)
}

impl Section {
    fn object(&self) -> String {
        format!("{} `{}`", self.kind.as_str(), self.name)
    }

    fn semantic(&self, invariant: &str, message: String) -> InputError {
        InputError::Semantic { file: self.file.clone(), line: self.line, object: self.object(), invariant: invariant.into(), message }
    }

    fn semantic_at(&self, e: &Entry, invariant: &str, message: String) -> InputError {
        InputError::Semantic { file: self.file.clone(), line: e.line, object: self.object(), invariant: invariant.into(), message }
    }

    fn syntax(&self, line: usize, col: usize, message: String) -> InputError {
        InputError::Syntax { file: self.file.clone(), line, col, message }
    }

    /// Keys and whitespace-normalized values, in order; excludes the name.
    fn canon(&self) -> String {
        let mut s = format!("[{}]", self.kind.as_str());
        for e in &self.entries {
            s.push('\n');
            s.push_str(&e.key.join(" "));
            s.push_str(" = ");
            s.push_str(&e.value.split_whitespace().collect::<Vec<_>>().join(" "));
        }
        s
    }

    fn check_keys(&self, allowed: &[(&str, usize)]) -> Res<()> {
        for e in &self.entries {
            if !allowed.iter().any(|(k, arity)| e.key[0] == *k && e.key.len() == *arity) {
                return Err(self.syntax(e.line, e.key_col, format!("unexpected key `{}` in a {} section", e.key.join(" "), self.kind.as_str())));
            }
        }
        Ok(())
    }

    fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key[0] == key)
    }

    fn single<'a>(&'a self, key: &'a str) -> Res<Option<&'a Entry>> {
        let mut it = self.all(key);
        let first = it.next();
        if let Some(dup) = it.next() {
            return Err(self.syntax(dup.line, dup.key_col, format!("key `{key}` given more than once")));
        }
        Ok(first)
    }

    fn required<'a>(&'a self, key: &'a str) -> Res<&'a Entry> {
        self.single(key)?.ok_or_else(|| self.semantic("required keys present", format!("missing key `{key}`")))
    }
}

/// Tokens of `text` with their columns, given the column of `text`.
fn tokens_at(text: &str, col: usize, sep: Option<char>) -> Vec<(&str, usize)> {
    fn push<'t>(text: &'t str, col: usize, a: usize, b: usize, out: &mut Vec<(&'t str, usize)>) {
        let piece = &text[a..b];
        let lead = piece.len() - piece.trim_start().len();
        out.push((piece.trim(), col + text[..a + lead].chars().count()));
    }
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let is_sep = |c: char| match sep {
        Some(s) => c == s,
        None => c.is_whitespace(),
    };
    for (i, c) in text.char_indices() {
        if is_sep(c) {
            if let Some(a) = start.take() {
                push(text, col, a, i, &mut out);
            } else if sep.is_some() {
                push(text, col, i, i, &mut out);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(a) = start {
        push(text, col, a, text.len(), &mut out);
    } else if sep.is_some() && !text.is_empty() {
        push(text, col, text.len(), text.len(), &mut out);
    }
    out
}

fn words(text: &str, col: usize) -> Vec<(&str, usize)> {
    tokens_at(text, col, None)
}

/// `;`-separated rows; an empty value has no rows.
fn rows(text: &str, col: usize) -> Vec<(&str, usize)> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    tokens_at(text, col, Some(';'))
}

struct Cx<'a> {
    s: &'a Section,
    e: &'a Entry,
}

impl<'a> Cx<'a> {
    fn new(s: &'a Section, e: &'a Entry) -> Self {
        Cx { s, e }
    }

    fn err(&self, col: usize, msg: String) -> InputError {
        self.s.syntax(self.e.line, col, msg)
    }

    fn usize_value(&self) -> Res<usize> {
        let w = words(&self.e.value, self.e.col);
        match w.as_slice() {
            [(t, c)] => t.parse().map_err(|_| self.err(*c, format!("expected a nonnegative integer, found `{t}`"))),
            _ => Err(self.err(self.e.col, "expected a single nonnegative integer".into())),
        }
    }

    fn rational(&self, tok: &str, col: usize) -> Res<Rational> {
        if tok.is_empty() {
            return Err(self.err(col, "expected a rational number".into()));
        }
        parse_rational(tok).map_err(|_| self.err(col, format!("expected a rational number, found `{tok}`")))
    }

    fn integer(&self, tok: &str, col: usize) -> Res<BigInt> {
        tok.parse().map_err(|_| self.err(col, format!("expected an integer, found `{tok}`")))
    }

    fn names(&self) -> Vec<String> {
        words(&self.e.value, self.e.col).into_iter().map(|(t, _)| t.to_string()).collect()
    }

    fn checked_names(&self) -> Res<Vec<String>> {
        for (t, c) in words(&self.e.value, self.e.col) {
            if !is_name(t) && !t.contains('^') {
                return Err(self.err(c, format!("invalid name `{t}`")));
            }
        }
        Ok(self.names())
    }

    fn rational_vec_in(&self, text: &str, col: usize) -> Res<Vec<Rational>> {
        words(text, col).into_iter().map(|(t, c)| self.rational(t, c)).collect()
    }

    fn rational_vec(&self) -> Res<Vec<Rational>> {
        self.rational_vec_in(&self.e.value, self.e.col)
    }

    fn rows_with<T>(&self, text: &str, col: usize, width: Option<usize>, f: impl Fn(&str, usize) -> Res<T>) -> Res<Vec<Vec<T>>> {
        let mut out = Vec::new();
        for (row, rc) in rows(text, col) {
            let entries: Vec<T> = words(row, rc).into_iter().map(|(t, c)| f(t, c)).collect::<Res<_>>()?;
            if let Some(w) = width {
                if entries.len() != w {
                    return Err(self.err(rc, format!("row has {} entries, expected {w}", entries.len())));
                }
            }
            out.push(entries);
        }
        Ok(out)
    }

    fn int_rows_in(&self, text: &str, col: usize, width: usize) -> Res<IntMatrix> {
        let r = self.rows_with(text, col, Some(width), |t, c| self.integer(t, c))?;
        Ok(Matrix::from_rows(width, r))
    }

    fn int_rows(&self, width: usize) -> Res<IntMatrix> {
        self.int_rows_in(&self.e.value, self.e.col, width)
    }

    fn rational_rows(&self, width: usize) -> Res<Vec<Vec<Rational>>> {
        self.rows_with(&self.e.value, self.e.col, Some(width), |t, c| self.rational(t, c))
    }

    /// Entries `re,im` (or a bare rational) of `Q(i)`.
    fn gaussian_rows(&self, width: usize) -> Res<Vec<Vec<Cyclotomic>>> {
        self.rows_with(&self.e.value, self.e.col, Some(width), |t, c| self.gaussian(t, c))
    }

    fn gaussian(&self, t: &str, c: usize) -> Res<Cyclotomic> {
        match t.split_once(',') {
            Some((re, im)) => Ok(Cyclotomic::gaussian(self.rational(re, c)?, self.rational(im, c + re.chars().count() + 1)?)),
            None => Ok(Cyclotomic::gaussian(self.rational(t, c)?, Rational::zero())),
        }
    }

    /// `coeff name, coeff name, ...`; a bare `name` has coefficient 1.
    fn lincomb(&self) -> Res<Vec<(String, Rational)>> {
        let mut out = Vec::new();
        if self.e.value.is_empty() || self.e.value == "0" {
            return Ok(out);
        }
        for (term, tc) in tokens_at(&self.e.value, self.e.col, Some(',')) {
            match words(term, tc).as_slice() {
                [(name, _)] => out.push((name.to_string(), Rational::from_integer(1.into()))),
                [(q, qc), (name, _)] => out.push((name.to_string(), self.rational(q, *qc)?)),
                _ => return Err(self.err(tc, "expected `coefficient name` or `name`".into())),
            }
        }
        Ok(out)
    }

    /// `coeff monomial, ...`; a bare rational is a constant term and a bare
    /// monomial has coefficient 1.
    fn laurent(&self, text: &str, col: usize, vars: &jumploci::arith::Vars) -> Res<Poly<Rational>> {
        let mut p = Poly::zero(vars.clone());
        for (term, tc) in tokens_at(text, col, Some(',')) {
            let (q, mono, mc) = match words(term, tc).as_slice() {
                [(t, c)] => match parse_rational(t) {
                    Ok(q) => (q, "1", *c),
                    Err(_) => (Rational::from_integer(1.into()), *t, *c),
                },
                [(q, qc), (m, c)] => (self.rational(q, *qc)?, *m, *c),
                _ => return Err(self.err(tc, "expected `coefficient monomial`".into())),
            };
            let m = Monomial::parse(vars, mono).map_err(|e| self.err(mc, e.to_string()))?;
            p.add_term(m, q);
        }
        Ok(p)
    }

    fn degree_key(&self) -> Res<usize> {
        self.e.key[1].parse().map_err(|_| self.err(self.e.key_col, format!("expected a degree after `{}`", self.e.key[0])))
    }
}

fn build_algebra(s: &Section) -> Res<GradedAlgebra> {
    s.check_keys(&[("exterior", 1), ("degree", 2), ("product", 3), ("d", 2)])?;
    if let Some(e) = s.single("exterior")? {
        if let Some(bad) = s.entries.iter().find(|x| x.key[0] == "degree" || x.key[0] == "product") {
            return Err(s.syntax(bad.line, bad.key_col, "an exterior algebra takes only `d` entries besides `exterior`".into()));
        }
        let gens = Cx::new(s, e).checked_names()?;
        let mut diffs = Vec::new();
        for de in s.all("d") {
            let cx = Cx::new(s, de);
            let g = gens.iter().position(|n| n == &de.key[1]).ok_or_else(|| s.semantic_at(de, "every referenced name resolves", format!("`{}` is not a generator", de.key[1])))?;
            let mut terms = Vec::new();
            for (name, q) in cx.lincomb()? {
                let pair: Vec<Option<usize>> = name.split('^').map(|x| gens.iter().position(|n| n == x)).collect();
                match pair.as_slice() {
                    [Some(i), Some(j)] if i != j => {
                        if i < j {
                            terms.push(((*i, *j), q));
                        } else {
                            terms.push(((*j, *i), -q));
                        }
                    }
                    _ => return Err(s.semantic_at(de, "d raises degree by one", format!("`{name}` is not a product `x^y` of two distinct generators"))),
                }
            }
            diffs.push((g, terms));
        }
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        return Ok(GradedAlgebra::exterior(&refs, &diffs));
    }
    let mut b = AlgebraBuilder::new();
    for e in s.all("degree") {
        let cx = Cx::new(s, e);
        let deg = cx.degree_key()?;
        if deg == 0 {
            return Err(s.syntax(e.line, e.key_col, "degree 0 is spanned by the unit `1`".into()));
        }
        b.set_basis(deg, cx.checked_names()?);
    }
    for e in s.all("product") {
        b.add_product(e.key[1].clone(), e.key[2].clone(), Cx::new(s, e).lincomb()?);
    }
    for e in s.all("d") {
        b.add_differential(e.key[1].clone(), Cx::new(s, e).lincomb()?);
    }
    b.build().map_err(|e| s.semantic("well-formed algebra", e.to_string()))
}

fn build_module(s: &Section, ws: &Workspace) -> Res<(String, DGModule)> {
    s.check_keys(&[("algebra", 1), ("degree", 2), ("action", 3), ("d", 2)])?;
    let ae = s.required("algebra")?;
    let alg_name = ae.value.clone();
    let alg = ws.algebras.get(&alg_name).ok_or_else(|| s.semantic_at(ae, "every referenced name resolves", format!("no algebra named `{alg_name}`")))?;
    let mut b = ModuleBuilder::new();
    for e in s.all("degree") {
        let cx = Cx::new(s, e);
        b.set_basis(cx.degree_key()?, cx.checked_names()?);
    }
    for e in s.all("action") {
        b.add_action(e.key[1].clone(), e.key[2].clone(), Cx::new(s, e).lincomb()?);
    }
    for e in s.all("d") {
        b.add_differential(e.key[1].clone(), Cx::new(s, e).lincomb()?);
    }
    let m = b.build(&alg.value).map_err(|e| s.semantic("well-formed module", e.to_string()))?;
    Ok((alg_name, m))
}

fn build_complex(s: &Section) -> Res<LaurentComplex> {
    s.check_keys(&[("vars", 1), ("ranks", 1), ("boundary", 2)])?;
    let ve = s.required("vars")?;
    let vs = vars(&Cx::new(s, ve).checked_names()?);
    let re = s.required("ranks")?;
    let rcx = Cx::new(s, re);
    let ranks: Vec<usize> = words(&re.value, re.col).into_iter().map(|(t, c)| t.parse().map_err(|_| rcx.err(c, format!("expected a rank, found `{t}`")))).collect::<Res<_>>()?;
    if ranks.is_empty() {
        return Err(s.semantic_at(re, "a complex has C_0", "`ranks` is empty".into()));
    }
    let mut boundaries: Vec<Matrix<Poly<Rational>>> = (1..ranks.len()).map(|i| Matrix::from_fn(ranks[i - 1], ranks[i], |_, _| Poly::zero(vs.clone()))).collect();
    for e in s.all("boundary") {
        let cx = Cx::new(s, e);
        let deg = cx.degree_key()?;
        if deg == 0 || deg >= ranks.len() {
            return Err(s.semantic_at(e, "boundary degree in 1..len(ranks)", format!("no boundary ∂_{deg} for {} ranks", ranks.len())));
        }
        let m = &mut boundaries[deg - 1];
        for (term, tc) in rows(&e.value, e.col) {
            let w = words(term, tc);
            let [(r, rc), (c, cc), (mono, mc), (q, qc)] = w.as_slice() else {
                return Err(cx.err(tc, "expected `row col monomial coeff`".into()));
            };
            let r: usize = r.parse().map_err(|_| cx.err(*rc, format!("expected a row index, found `{r}`")))?;
            let c: usize = c.parse().map_err(|_| cx.err(*cc, format!("expected a column index, found `{c}`")))?;
            if r >= m.rows() || c >= m.cols() {
                return Err(s.semantic_at(e, "entries inside the boundary shape", format!("entry ({r}, {c}) outside ∂_{deg} of shape {}x{}", m.rows(), m.cols())));
            }
            let mono = Monomial::parse(&vs, mono).map_err(|err| cx.err(*mc, err.to_string()))?;
            let q = cx.rational(q, *qc)?;
            m[(r, c)].add_term(mono, q);
        }
    }
    LaurentComplex::new(vs, ranks, boundaries).map_err(|e| s.semantic("well-formed complex", e.to_string()))
}

fn build_presentation(s: &Section) -> Res<Presentation> {
    s.check_keys(&[("generators", 1), ("relator", 1), ("abelianization", 1)])?;
    let ge = s.required("generators")?;
    let gens = Cx::new(s, ge).checked_names()?;
    let mut relators = Vec::new();
    for e in s.all("relator") {
        let w = Presentation::parse_word(&gens, &e.value).map_err(|err| s.syntax(e.line, e.col, err.to_string()))?;
        relators.push(w);
    }
    match s.single("abelianization")? {
        Some(e) => {
            let cx = Cx::new(s, e);
            let width = rows(&e.value, e.col).first().map_or(0, |(r, rc)| words(r, *rc).len());
            let m = cx.int_rows(width)?;
            Presentation::with_abelianization(gens, relators, m).map_err(|err| s.semantic_at(e, "abelianization kills relators and is onto", err.to_string()))
        }
        None => Presentation::new(gens, relators).map_err(|e| s.semantic("well-formed presentation", e.to_string())),
    }
}

fn build_torus(s: &Section) -> Res<TranslatedSubtorus> {
    s.check_keys(&[("n", 1), ("lattice", 1), ("equations", 1), ("translate", 1)])?;
    let n = Cx::new(s, s.required("n")?).usize_value()?;
    let torus = match (s.single("lattice")?, s.single("equations")?) {
        (Some(e), None) => {
            let m = Cx::new(s, e).int_rows(n)?;
            Subtorus::new(n, m).map_err(|err| s.semantic_at(e, "saturated lattice", err.to_string()))?
        }
        (None, Some(e)) => {
            let m = Cx::new(s, e).int_rows(n)?;
            Subtorus::from_equations(n, &m).map_err(|err| s.semantic_at(e, "well-formed subtorus", err.to_string()))?
        }
        _ => return Err(s.semantic("exactly one of `lattice`, `equations`", "give either cocharacter rows or equation rows".into())),
    };
    let translate = match s.single("translate")? {
        Some(e) => {
            let v = Cx::new(s, e).rational_vec()?;
            if v.len() != n {
                return Err(s.semantic_at(e, "translate has n entries", format!("{} entries for n = {n}", v.len())));
            }
            v
        }
        None => vec![Rational::zero(); n],
    };
    TranslatedSubtorus::torsion(torus, translate).map_err(|e| s.semantic("well-formed translated subtorus", e.to_string()))
}

fn build_affine(s: &Section) -> Res<AffineSubspaceQ> {
    s.check_keys(&[("base", 1), ("directions", 1)])?;
    let base = Cx::new(s, s.required("base")?).rational_vec()?;
    let dirs = match s.single("directions")? {
        Some(e) => Cx::new(s, e).rational_rows(base.len())?,
        None => Vec::new(),
    };
    AffineSubspaceQ::new(base, dirs).map_err(|e| s.semantic("independent directions", e.to_string()))
}

fn build_zeroset(s: &Section) -> Res<ZeroSetDecl> {
    s.check_keys(&[("vars", 1), ("generator", 1)])?;
    let names = Cx::new(s, s.required("vars")?).checked_names()?;
    let vs = vars(&names);
    let generators = s.all("generator").map(|e| Cx::new(s, e).laurent(&e.value, e.col, &vs)).collect::<Res<_>>()?;
    Ok(ZeroSetDecl { vars: names, set: LaurentZeroSet { generators } })
}

fn build_subspace(s: &Section) -> Res<LinearSubspaceQ> {
    s.check_keys(&[("ambient", 1), ("basis", 1), ("equations", 1)])?;
    let m = Cx::new(s, s.required("ambient")?).usize_value()?;
    match (s.single("basis")?, s.single("equations")?) {
        (Some(e), None) => LinearSubspaceQ::new(m, Cx::new(s, e).rational_rows(m)?).map_err(|err| s.semantic_at(e, "independent basis", err.to_string())),
        (None, Some(e)) => LinearSubspaceQ::from_equations(m, Cx::new(s, e).rational_rows(m)?).map_err(|err| s.semantic_at(e, "well-formed equations", err.to_string())),
        _ => Err(s.semantic("exactly one of `basis`, `equations`", "give either basis rows or equation rows".into())),
    }
}

fn build_hodge(s: &Section) -> Res<OneHodgeStructure> {
    s.check_keys(&[("rank", 1), ("w", 1), ("f", 1), ("elliptic", 1)])?;
    if let Some(e) = s.single("elliptic")? {
        if let Some(bad) = s.entries.iter().find(|x| x.key[0] != "elliptic") {
            return Err(s.syntax(bad.line, bad.key_col, "`elliptic` takes no other keys".into()));
        }
        let cx = Cx::new(s, e);
        let tau = cx.gaussian(&e.value, e.col)?;
        return OneHodgeStructure::elliptic(tau).map_err(|err| s.semantic_at(e, "well-formed 1-Hodge structure", err.to_string()));
    }
    let r = Cx::new(s, s.required("rank")?).usize_value()?;
    let w = match s.single("w")? {
        Some(e) => Cx::new(s, e).rational_rows(r)?,
        None => Vec::new(),
    };
    let f = match s.single("f")? {
        Some(e) => Cx::new(s, e).gaussian_rows(r)?,
        None => Vec::new(),
    };
    OneHodgeStructure::new(r, w, f).map_err(|e| s.semantic("independent W and F bases", e.to_string()))
}

fn build_bdr(s: &Section, ws: &Workspace) -> Res<BdrDecl> {
    s.check_keys(&[("hodge", 1), ("piece", 1)])?;
    let he = s.required("hodge")?;
    let h = ws.hodge.get(&he.value).ok_or_else(|| s.semantic_at(he, "every referenced name resolves", format!("no hodge structure named `{}`", he.value)))?;
    let r = h.value.rank();
    let mut pieces = Vec::new();
    for e in s.all("piece") {
        let cx = Cx::new(s, e);
        let (lat, tr) = match e.value.split_once('|') {
            Some((l, t)) => (l, Some(t)),
            None => (e.value.as_str(), None),
        };
        let lattice = cx.int_rows_in(lat, e.col, r)?;
        let translate = match tr {
            Some(t) => {
                let col = e.col + lat.chars().count() + 1;
                let v = cx.rational_vec_in(t, col)?;
                if v.len() != r {
                    return Err(s.semantic_at(e, "translate has rank entries", format!("{} entries for rank {r}", v.len())));
                }
                v
            }
            None => vec![Rational::zero(); r],
        };
        pieces.push(BdrPiece { lattice, translate, witness: None });
    }
    Ok(BdrDecl { hodge: he.value.clone(), certificate: BdrCertificate { pieces } })
}
