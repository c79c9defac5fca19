//! 1-Hodge structures `(Λ, W, F)` with `Λ = Z^r`, `W ⊂ Q^r` and
//! `F ⊂ Q(i)^r`, their sub and quotient structures, and certificates that
//! subtori of `Λ_C/Λ` are cut out by sub 1-Hodge structures.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::cyclotomic::Cyclotomic;
use crate::arith::field::{primitive_integer_vector, Field, Rational};
use crate::arith::lattice::{complete_to_unimodular, hermite_normal_form, int_det, integer_kernel, is_saturated, to_rational, IntMatrix};
use crate::arith::matrix::{rank_of_vectors, span_intersection, Matrix};
use crate::error::{check_dim, Error, Result};
use crate::torus::TranslatedSubtorus;

fn to_qi(q: &Rational) -> Cyclotomic {
    Cyclotomic::from_rational_in(4, q.clone())
}

/// Rewrites an element of `Q(ζ_m)`, `m | 4`, in the basis `{1, i}`.
fn into_gaussian(z: &Cyclotomic) -> Result<Cyclotomic> {
    if 4 % z.order() != 0 {
        return Err(Error::Input(format!("Hodge filtration entries must lie in Q(i), got an element of Q(ζ_{})", z.order())));
    }
    Ok(z.lift(4))
}

fn canonical_rows<F: Field>(dim: usize, rows: Vec<Vec<F>>) -> Vec<Vec<F>> {
    Matrix::from_rows(dim, rows).row_basis()
}

/// `(Z^r, W, F)` with the axioms checked by [`validate_1hs`].
#[derive(Clone, Debug, PartialEq)]
pub struct OneHodgeStructure {
    rank: usize,
    w: Vec<Vec<Rational>>,
    f: Vec<Vec<Cyclotomic>>,
}

impl OneHodgeStructure {
    /// Rejects wrongly sized or linearly dependent basis vectors.
    pub fn new(rank: usize, w: Vec<Vec<Rational>>, f: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        for v in &w {
            check_dim(rank, v.len())?;
        }
        let mut fq = Vec::with_capacity(f.len());
        for v in &f {
            check_dim(rank, v.len())?;
            fq.push(v.iter().map(into_gaussian).collect::<Result<Vec<_>>>()?);
        }
        if rank_of_vectors(rank, &w) != w.len() {
            return Err(Error::Input("W basis vectors are linearly dependent".into()));
        }
        if rank_of_vectors(rank, &fq) != fq.len() {
            return Err(Error::Input("F basis vectors are linearly dependent".into()));
        }
        Ok(OneHodgeStructure { rank, w, f: fq })
    }

    /// Rank 2, `W = Q²`, `F = span{(1, τ)}`; valid iff `τ ∉ R`.
    pub fn elliptic(tau: Cyclotomic) -> Result<Self> {
        Self::new(2, vec![vec![Rational::one(), Rational::zero()], vec![Rational::zero(), Rational::one()]], vec![vec![Cyclotomic::one(), tau]])
    }

    /// Rank `m`, `W = 0`, `F = C^m`: pure of type (1,1).
    pub fn pure_11(m: usize) -> Self {
        let f = (0..m).map(|i| (0..m).map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect()).collect();
        Self::new(m, Vec::new(), f).expect("identity basis")
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let r = self.rank + other.rank;
        let pad_q = |v: &[Rational], left: bool| -> Vec<Rational> {
            let z = |k: usize| vec![Rational::zero(); k];
            if left { [v.to_vec(), z(other.rank)].concat() } else { [z(self.rank), v.to_vec()].concat() }
        };
        let pad_c = |v: &[Cyclotomic], left: bool| -> Vec<Cyclotomic> {
            let z = |k: usize| vec![Cyclotomic::zero(); k];
            if left { [v.to_vec(), z(other.rank)].concat() } else { [z(self.rank), v.to_vec()].concat() }
        };
        let w = self.w.iter().map(|v| pad_q(v, true)).chain(other.w.iter().map(|v| pad_q(v, false))).collect();
        let f = self.f.iter().map(|v| pad_c(v, true)).chain(other.f.iter().map(|v| pad_c(v, false))).collect();
        OneHodgeStructure { rank: r, w, f }
    }

    /// The same structure in the basis of `Λ` given by the rows of the
    /// unimodular matrix `g`: a vector `v` becomes `v·g`.
    pub fn base_change(&self, g: &IntMatrix) -> Result<Self> {
        check_dim(self.rank, g.rows())?;
        check_dim(self.rank, g.cols())?;
        if !int_det(g).abs().is_one() {
            return Err(Error::Input("base change matrix is not unimodular".into()));
        }
        let gq = to_rational(g);
        let gc = gq.map(to_qi);
        let w = self.w.iter().map(|v| gq.transpose().mul_vec(v)).collect();
        let f = self.f.iter().map(|v| gc.transpose().mul_vec(v)).collect();
        Ok(OneHodgeStructure { rank: self.rank, w, f })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn w_basis(&self) -> &[Vec<Rational>] {
        &self.w
    }

    pub fn f_basis(&self) -> &[Vec<Cyclotomic>] {
        &self.f
    }

    pub fn dim_w(&self) -> usize {
        self.w.len()
    }

    fn w_c(&self) -> Vec<Vec<Cyclotomic>> {
        self.w.iter().map(|v| v.iter().map(to_qi).collect()).collect()
    }

    fn f_bar(&self) -> Vec<Vec<Cyclotomic>> {
        self.f.iter().map(|v| v.iter().map(Cyclotomic::conj).collect()).collect()
    }

    /// Bases of `W_C ∩ F` and `W_C ∩ F̄`.
    pub fn hodge_pieces(&self) -> (Vec<Vec<Cyclotomic>>, Vec<Vec<Cyclotomic>>) {
        let wc = self.w_c();
        (span_intersection(self.rank, &wc, &self.f), span_intersection(self.rank, &wc, &self.f_bar()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HodgeAxiom {
    /// `W_C = (W_C ∩ F) ⊕ (W_C ∩ F̄)`.
    DirectSum,
    /// `Λ_C = W_C + F`.
    Spanning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeReport {
    pub dim_w: usize,
    pub dim_w_cap_f: usize,
    pub dim_w_cap_fbar: usize,
    /// `dim (W_C∩F + W_C∩F̄)`.
    pub dim_pieces_sum: usize,
    pub dim_w_plus_f: usize,
    pub rank: usize,
    pub failures: Vec<HodgeAxiom>,
}

impl HodgeReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks both axioms by exact ranks over `Q(i)`.
pub fn validate_1hs(h: &OneHodgeStructure) -> HodgeReport {
    let (a, b) = h.hodge_pieces();
    let both: Vec<Vec<Cyclotomic>> = a.iter().chain(&b).cloned().collect();
    let dim_pieces_sum = rank_of_vectors(h.rank, &both);
    let all: Vec<Vec<Cyclotomic>> = h.w_c().into_iter().chain(h.f.iter().cloned()).collect();
    let dim_w_plus_f = rank_of_vectors(h.rank, &all);
    let mut failures = Vec::new();
    if a.len() + b.len() != h.dim_w() || dim_pieces_sum != h.dim_w() {
        failures.push(HodgeAxiom::DirectSum);
    }
    if dim_w_plus_f != h.rank {
        failures.push(HodgeAxiom::Spanning);
    }
    HodgeReport {
        dim_w: h.dim_w(),
        dim_w_cap_f: a.len(),
        dim_w_cap_fbar: b.len(),
        dim_pieces_sum,
        dim_w_plus_f,
        rank: h.rank,
        failures,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct HodgeNumbers {
    pub h10: usize,
    pub h01: usize,
    pub h11: usize,
}

pub fn hodge_numbers(h: &OneHodgeStructure) -> Result<HodgeNumbers> {
    let rep = validate_1hs(h);
    if !rep.is_valid() {
        return Err(Error::Invalid(format!("not a 1-Hodge structure: {:?}", rep.failures)));
    }
    Ok(HodgeNumbers { h10: rep.dim_w_cap_f, h01: rep.dim_w_cap_fbar, h11: h.rank - h.dim_w() })
}

/// Annihilator `{a : v·a = 0 for v ∈ span(rows)}` as primitive integer rows.
fn integer_annihilator(dim: usize, rows: &[Vec<Rational>]) -> IntMatrix {
    let ns = Matrix::from_rows(dim, rows.to_vec()).nullspace();
    Matrix::from_rows(dim, ns.iter().map(|v| primitive_integer_vector(v)).collect())
}

/// `Λ₀ = Λ ∩ W` as an HNF basis; it is saturated of rank `dim W`.
pub fn lambda_zero(h: &OneHodgeStructure) -> IntMatrix {
    let ann = integer_annihilator(h.rank, &h.w);
    if ann.rows() == 0 {
        return IntMatrix::identity(h.rank);
    }
    integer_kernel(&ann)
}

/// A saturated sublattice `Λ'` together with the induced structure
/// `(Λ', W ∩ Λ'_Q, F ∩ Λ'_C)` in the coordinates of its HNF basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SubHSWitness {
    pub sublattice: IntMatrix,
    pub structure: OneHodgeStructure,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SubHsOutcome {
    Witness(SubHSWitness),
    Refused(String),
}

impl SubHsOutcome {
    pub fn witness(self) -> Option<SubHSWitness> {
        match self {
            SubHsOutcome::Witness(w) => Some(w),
            SubHsOutcome::Refused(_) => None,
        }
    }
}

/// Coordinates `x` of `v` with `x·B = v` for the rows `B`.
fn coordinates<F: Field>(b: &Matrix<F>, v: &[F]) -> Vec<F> {
    b.transpose().solve(v).expect("vector lies in the row span")
}

/// Builds the induced structure on a saturated `Λ'` and accepts it iff it
/// satisfies both axioms.
pub fn sub_hs(h: &OneHodgeStructure, sublattice: &IntMatrix) -> Result<SubHsOutcome> {
    check_dim(h.rank, sublattice.cols())?;
    let r = h.rank;
    if !is_saturated(sublattice) {
        return Ok(SubHsOutcome::Refused("Λ/Λ' has torsion".into()));
    }
    let basis = hermite_normal_form(sublattice);
    let bq = to_rational(&basis);
    let bc = bq.map(to_qi);
    let d = basis.rows();
    let w_sub = canonical_rows(r, span_intersection(r, &h.w, &bq.row_vecs()));
    let f_sub = canonical_rows(r, span_intersection(r, &h.f, &bc.row_vecs()));
    let w_coords: Vec<Vec<Rational>> = w_sub.iter().map(|v| coordinates(&bq, v)).collect();
    let f_coords: Vec<Vec<Cyclotomic>> = f_sub.iter().map(|v| coordinates(&bc, v)).collect();
    let structure = OneHodgeStructure::new(d, w_coords, f_coords)?;
    let rep = validate_1hs(&structure);
    if !rep.is_valid() {
        return Ok(SubHsOutcome::Refused(format!("induced structure violates {:?}", rep.failures)));
    }
    Ok(SubHsOutcome::Witness(SubHSWitness { sublattice: basis, structure }))
}

/// Checks that `witness` is the structure [`sub_hs`] derives for its lattice.
fn witness_matches(h: &OneHodgeStructure, witness: &SubHSWitness) -> Result<bool> {
    match sub_hs(h, &witness.sublattice)? {
        SubHsOutcome::Witness(derived) => Ok(same_witness(&derived, witness)),
        SubHsOutcome::Refused(_) => Ok(false),
    }
}

fn same_witness(a: &SubHSWitness, b: &SubHSWitness) -> bool {
    let d = a.structure.rank;
    hermite_normal_form(&a.sublattice) == hermite_normal_form(&b.sublattice)
        && a.structure.rank == b.structure.rank
        && canonical_rows(d, a.structure.w.clone()) == canonical_rows(d, b.structure.w.clone())
        && canonical_rows(d, a.structure.f.clone()) == canonical_rows(d, b.structure.f.clone())
}

/// `(Λ/Λ', W/W', F/F')` in the coordinates of a unimodular completion of
/// the sublattice basis.
pub fn quotient_hs(h: &OneHodgeStructure, witness: &SubHSWitness) -> Result<OneHodgeStructure> {
    if witness.sublattice.cols() != h.rank || !witness_matches(h, witness)? {
        return Err(Error::Invalid("witness is not a sub 1-Hodge structure of this structure".into()));
    }
    let r = h.rank;
    let d = witness.sublattice.rows();
    let u = complete_to_unimodular(&hermite_normal_form(&witness.sublattice));
    let uq = to_rational(&u);
    let uc = uq.map(to_qi);
    let project_q = |v: &Vec<Rational>| coordinates(&uq, v)[d..].to_vec();
    let project_c = |v: &Vec<Cyclotomic>| coordinates(&uc, v)[d..].to_vec();
    let w = canonical_rows(r - d, h.w.iter().map(project_q).collect());
    let f = canonical_rows(r - d, h.f.iter().map(project_c).collect());
    let q = OneHodgeStructure::new(r - d, w, f)?;
    let rep = validate_1hs(&q);
    if !rep.is_valid() {
        return Err(Error::Invalid(format!("quotient violates {:?}", rep.failures)));
    }
    Ok(q)
}

/// One piece of a Betti–de Rham decomposition: a translate of the subtorus
/// with cocharacter lattice `lattice`, and optionally the claimed witness.
#[derive(Clone, Debug, PartialEq)]
pub struct BdrPiece {
    /// As supplied; may fail to be saturated.
    pub lattice: IntMatrix,
    pub translate: Vec<Rational>,
    pub witness: Option<SubHSWitness>,
}

impl BdrPiece {
    pub fn from_torus(t: &TranslatedSubtorus, witness: Option<SubHSWitness>) -> Result<Self> {
        let translate = t.torsion_translate().ok_or_else(|| Error::Input("pieces need torsion translates".into()))?.to_vec();
        Ok(BdrPiece { lattice: t.torus().lattice().clone(), translate, witness })
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct BdrCertificate {
    pub pieces: Vec<BdrPiece>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PieceResult {
    pub certified: bool,
    pub reason: Option<String>,
    pub hodge_numbers: Option<HodgeNumbers>,
    pub witness_supplied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BdrReport {
    pub pieces: Vec<PieceResult>,
}

impl BdrReport {
    pub fn all_certified(&self) -> bool {
        self.pieces.iter().all(|p| p.certified)
    }
}

/// Re-derives the sub 1-Hodge structure of every piece and compares it with
/// the supplied witness. Says nothing about the union of the pieces.
pub fn verify_bdr_certificate(h: &OneHodgeStructure, cert: &BdrCertificate) -> Result<BdrReport> {
    let mut pieces = Vec::with_capacity(cert.pieces.len());
    for piece in &cert.pieces {
        check_dim(h.rank, piece.lattice.cols())?;
        check_dim(h.rank, piece.translate.len())?;
        let supplied = piece.witness.is_some();
        let result = if !is_saturated(&piece.lattice) {
            PieceResult { certified: false, reason: Some("torsion quotient".into()), hodge_numbers: None, witness_supplied: supplied }
        } else {
            match sub_hs(h, &piece.lattice)? {
                SubHsOutcome::Refused(why) => PieceResult { certified: false, reason: Some(why), hodge_numbers: None, witness_supplied: supplied },
                SubHsOutcome::Witness(derived) => {
                    let numbers = hodge_numbers(&derived.structure).ok();
                    match &piece.witness {
                        Some(w) if !same_witness(&derived, w) => PieceResult {
                            certified: false,
                            reason: Some("supplied witness differs from the induced structure".into()),
                            hodge_numbers: numbers,
                            witness_supplied: true,
                        },
                        _ => PieceResult { certified: true, reason: None, hodge_numbers: numbers, witness_supplied: supplied },
                    }
                }
            }
        };
        pieces.push(result);
    }
    Ok(BdrReport { pieces })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesReport {
    pub rank: usize,
    pub rank_lambda0: usize,
    pub dim_w: usize,
    pub h11: usize,
    /// `dim W_C + dim H^{1,1} = r`.
    pub top_row_exact: bool,
    /// `rank Λ₀ + rank Λ/Λ₀ = r`, with `Λ/Λ₀` torsion-free.
    pub bottom_row_exact: bool,
    /// `rank Λ₀ = dim_Q W`, so `Λ₀ ⊗ C → W_C` is onto with equal dimension.
    pub vertical_bijection: bool,
}

impl SesReport {
    pub fn is_exact(&self) -> bool {
        self.top_row_exact && self.bottom_row_exact && self.vertical_bijection
    }
}

/// Dimension bookkeeping for the rows `0 → W_C → Λ_C → H^{1,1} → 0` and
/// `0 → Λ₀ → Λ → Λ/Λ₀ → 0`.
pub fn ses_bookkeeping(h: &OneHodgeStructure) -> Result<SesReport> {
    let numbers = hodge_numbers(h)?;
    let l0 = lambda_zero(h);
    let rank_l0 = l0.rows();
    let quotient_rank = if rank_l0 == h.rank { 0 } else { complete_to_unimodular(&l0).rows() - rank_l0 };
    Ok(SesReport {
        rank: h.rank,
        rank_lambda0: rank_l0,
        dim_w: h.dim_w(),
        h11: numbers.h11,
        top_row_exact: h.dim_w() + numbers.h11 == h.rank,
        bottom_row_exact: rank_l0 + quotient_rank == h.rank && is_saturated(&l0),
        vertical_bijection: rank_l0 == h.dim_w(),
    })
}

/// `BigInt` helper for callers building sublattices from `i64` rows.
pub fn lattice_from_rows(rows: &[Vec<i64>], r: usize) -> IntMatrix {
    Matrix::from_rows(r, rows.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect())
}
