//! Membership and equality of homogeneous ideals by graded linear algebra.
//!
//! For a homogeneous ideal `I` and a homogeneous `f` of degree `d`,
//! `f` lies in `I` iff it lies in the span of the products `m * g` of
//! degree `d` (`g` a generator, `m` a monomial). Each degree is a finite
//! exact rank question over the monomial basis of that degree, answered
//! by an [`EchelonBasis`] of the Macaulay matrix.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::fields::Field;
use crate::linalg::{EchelonBasis, SparseVec};
use crate::poly::{monomials_of_degree, Monomial, MonomialBasis, MonomialOrder, PolyError, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealError {
    Poly(PolyError),
    ZeroGenerator(usize),
    /// A configured resource cap would be exceeded; the question is left open.
    ResourceLimit { what: &'static str, requested: usize, limit: usize },
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::Poly(e) => fmt::Display::fmt(e, f),
            IdealError::ZeroGenerator(k) => write!(f, "generator #{k} is zero"),
            IdealError::ResourceLimit { what, requested, limit } => {
                write!(f, "resource limit: {what} {requested} exceeds {limit}")
            }
        }
    }
}

impl core::error::Error for IdealError {}

impl From<PolyError> for IdealError {
    fn from(e: PolyError) -> Self {
        IdealError::Poly(e)
    }
}

impl IdealError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, IdealError::ResourceLimit { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceLimits {
    pub max_degree: u32,
    /// Cap on Macaulay matrix rows (and on columns) for a single degree.
    pub max_rows: usize,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits { max_degree: 8, max_rows: 250_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousIdeal<F: Field> {
    field: F,
    n: usize,
    generators: Vec<Polynomial<F>>,
}

impl<F: Field> HomogeneousIdeal<F> {
    pub fn new(field: &F, n: usize, generators: Vec<Polynomial<F>>) -> Result<Self, IdealError> {
        for (k, g) in generators.iter().enumerate() {
            if g.field() != field {
                return Err(PolyError::FieldMismatch.into());
            }
            if g.dimension() != n {
                return Err(PolyError::DimensionMismatch { left: n, right: g.dimension() }.into());
            }
            if g.is_zero() {
                return Err(IdealError::ZeroGenerator(k));
            }
            if !g.is_homogeneous() {
                return Err(PolyError::NotHomogeneous.into());
            }
        }
        Ok(HomogeneousIdeal { field: field.clone(), n, generators })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    /// The ideal generated by these generators and `extra`.
    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial<F>>) -> Result<Self, IdealError> {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        Self::new(&self.field, self.n, gens)
    }

    fn check_target(&self, f: &Polynomial<F>) -> Result<Option<u32>, IdealError> {
        if f.field() != &self.field {
            return Err(PolyError::FieldMismatch.into());
        }
        if f.dimension() != self.n {
            return Err(PolyError::DimensionMismatch { left: self.n, right: f.dimension() }.into());
        }
        if f.is_zero() {
            return Ok(None);
        }
        Ok(Some(f.homogeneous_degree()?))
    }
}

/// One term `coefficient * multiplier * generators[generator]` of a
/// membership certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm<F: Field> {
    pub generator: usize,
    pub multiplier: Monomial,
    pub coefficient: F::Elem,
}

/// Explicit combination of generator multiples equal to the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F: Field> {
    pub terms: Vec<WitnessTerm<F>>,
}

impl<F: Field> Witness<F> {
    /// Re-expands the combination; a valid witness reproduces the target exactly.
    pub fn expand(&self, ideal: &HomogeneousIdeal<F>) -> Polynomial<F> {
        let mut acc = Polynomial::zero(&ideal.field, ideal.n);
        for t in &self.terms {
            acc = &acc + &ideal.generators[t.generator].mul_term(&t.multiplier, &t.coefficient);
        }
        acc
    }
}

/// Rank data behind one membership answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipDetail {
    pub member: bool,
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    /// Dimension of the degree-`d` component of the ideal.
    pub rank: usize,
    /// Dimension after adjoining the target.
    pub rank_with_target: usize,
}

/// The degree-`d` component of an ideal, in echelon form.
#[derive(Clone, Debug)]
pub struct GradedSlice<F: Field> {
    field: F,
    n: usize,
    basis: MonomialBasis,
    echelon: EchelonBasis<F>,
    rows: Vec<(usize, Monomial)>,
    lower_rows: usize,
    lower_rank: usize,
}

impl<F: Field> GradedSlice<F> {
    pub fn build(
        ideal: &HomogeneousIdeal<F>,
        degree: u32,
        limits: &ResourceLimits,
        provenance: bool,
    ) -> Result<Self, IdealError> {
        if degree > limits.max_degree {
            return Err(IdealError::ResourceLimit {
                what: "degree",
                requested: degree as usize,
                limit: limits.max_degree as usize,
            });
        }
        let nvars = ideal.n * ideal.n;
        let cols = count_monomials(nvars, degree);
        if cols > limits.max_rows {
            return Err(IdealError::ResourceLimit { what: "columns", requested: cols, limit: limits.max_rows });
        }
        // lower-degree generators first so the rank of A_1 * I_(d-1) is a prefix rank
        let mut order: Vec<(u32, usize)> = ideal
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| (g.homogeneous_degree().expect("validated"), k))
            .filter(|&(dg, _)| dg <= degree)
            .collect();
        order.sort();
        let total_rows: usize = order.iter().map(|&(dg, _)| count_monomials(nvars, degree - dg)).sum();
        if total_rows > limits.max_rows {
            return Err(IdealError::ResourceLimit { what: "rows", requested: total_rows, limit: limits.max_rows });
        }
        let basis = MonomialBasis::new(nvars, degree, MonomialOrder::Degrevlex);
        let mut echelon = if provenance {
            EchelonBasis::with_provenance(&ideal.field, basis.len())
        } else {
            EchelonBasis::new(&ideal.field, basis.len())
        };
        let mut rows = Vec::with_capacity(total_rows);
        let mut lower: Option<(usize, usize)> = None;
        let one = ideal.field.one();
        let mut multipliers: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
        for &(dg, k) in &order {
            if dg == degree && lower.is_none() {
                lower = Some((rows.len(), echelon.rank()));
            }
            let ms = multipliers
                .entry(degree - dg)
                .or_insert_with(|| monomials_of_degree(nvars, degree - dg, MonomialOrder::Degrevlex));
            for m in ms.iter() {
                let v = basis.coordinates(&ideal.generators[k].mul_term(m, &one))?;
                echelon.insert(&v);
                rows.push((k, m.clone()));
            }
        }
        let (lower_rows, lower_rank) = lower.unwrap_or((rows.len(), echelon.rank()));
        Ok(GradedSlice { field: ideal.field.clone(), n: ideal.n, basis, echelon, rows, lower_rows, lower_rank })
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.basis.len()
    }

    /// `dim I_d`.
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// `dim A_1 * I_(d-1)`: the span of multiples of lower-degree generators.
    pub fn lower_rank(&self) -> usize {
        self.lower_rank
    }

    pub fn lower_rows(&self) -> usize {
        self.lower_rows
    }

    pub fn coordinates(&self, f: &Polynomial<F>) -> Result<SparseVec<F::Elem>, IdealError> {
        Ok(self.basis.coordinates(f)?)
    }

    /// Membership of a homogeneous polynomial of this slice's degree.
    pub fn check(&self, f: &Polynomial<F>) -> Result<MembershipDetail, IdealError> {
        let v = self.coordinates(f)?;
        let member = self.echelon.contains(&v);
        let rank = self.rank();
        Ok(MembershipDetail {
            member,
            degree: self.degree(),
            rows: self.rows(),
            cols: self.cols(),
            rank,
            rank_with_target: if member { rank } else { rank + 1 },
        })
    }

    /// Certificate for a member; `None` for non-members. Needs a slice built
    /// with witness tracking.
    pub fn witness(&self, f: &Polynomial<F>) -> Result<Option<Witness<F>>, IdealError> {
        let v = self.coordinates(f)?;
        Ok(self.echelon.solve(&v).map(|combo| Witness {
            terms: combo
                .iter()
                .map(|(row, c)| WitnessTerm {
                    generator: self.rows[row].0,
                    multiplier: self.rows[row].1.clone(),
                    coefficient: c.clone(),
                })
                .collect(),
        }))
    }

    /// The ideal element with these coordinates.
    pub fn polynomial(&self, v: &SparseVec<F::Elem>) -> Polynomial<F> {
        self.basis.polynomial(&self.field, self.n, v)
    }
}

/// `C(nvars + d - 1, d)` with saturation.
fn count_monomials(nvars: usize, d: u32) -> usize {
    let mut acc: u128 = 1;
    for k in 0..d as u128 {
        acc = acc * (nvars as u128 + k) / (k + 1);
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Caches the graded slices of one ideal.
#[derive(Clone, Debug)]
pub struct MacaulayEngine<F: Field> {
    ideal: HomogeneousIdeal<F>,
    limits: ResourceLimits,
    witnesses: bool,
    slices: BTreeMap<u32, GradedSlice<F>>,
}

impl<F: Field> MacaulayEngine<F> {
    pub fn new(ideal: HomogeneousIdeal<F>, limits: ResourceLimits) -> Self {
        MacaulayEngine { ideal, limits, witnesses: false, slices: BTreeMap::new() }
    }

    /// Keeps enough bookkeeping to emit membership certificates.
    pub fn with_witnesses(mut self) -> Self {
        self.witnesses = true;
        self.slices.clear();
        self
    }

    pub fn ideal(&self) -> &HomogeneousIdeal<F> {
        &self.ideal
    }

    pub fn limits(&self) -> &ResourceLimits {
        &self.limits
    }

    pub fn slice(&mut self, degree: u32) -> Result<&GradedSlice<F>, IdealError> {
        if !self.slices.contains_key(&degree) {
            let s = GradedSlice::build(&self.ideal, degree, &self.limits, self.witnesses)?;
            self.slices.insert(degree, s);
        }
        Ok(&self.slices[&degree])
    }

    /// Answer for a zero target: trivially a member, reported at degree 0.
    fn zero_detail() -> MembershipDetail {
        MembershipDetail { member: true, degree: 0, rows: 0, cols: 0, rank: 0, rank_with_target: 0 }
    }

    pub fn check(&mut self, f: &Polynomial<F>) -> Result<MembershipDetail, IdealError> {
        match self.ideal.check_target(f)? {
            None => Ok(Self::zero_detail()),
            Some(d) => self.slice(d)?.check(f),
        }
    }

    pub fn member(&mut self, f: &Polynomial<F>) -> Result<bool, IdealError> {
        Ok(self.check(f)?.member)
    }

    pub fn witness(&mut self, f: &Polynomial<F>) -> Result<Option<Witness<F>>, IdealError> {
        assert!(self.witnesses, "engine built without witness tracking");
        match self.ideal.check_target(f)? {
            None => Ok(Some(Witness { terms: Vec::new() })),
            Some(d) => self.slice(d)?.witness(f),
        }
    }
}

pub fn member<F: Field>(ideal: &HomogeneousIdeal<F>, f: &Polynomial<F>, limits: &ResourceLimits) -> Result<bool, IdealError> {
    MacaulayEngine::new(ideal.clone(), *limits).member(f)
}

/// Whether every generator of each ideal lies in the other.
pub fn ideal_equal<F: Field>(
    a: &HomogeneousIdeal<F>,
    b: &HomogeneousIdeal<F>,
    limits: &ResourceLimits,
) -> Result<bool, IdealError> {
    Ok(contained_in(a, b, limits)?.is_none() && contained_in(b, a, limits)?.is_none())
}

/// `None` if every generator of `small` lies in `big`, otherwise the index
/// of the first generator that does not.
pub fn contained_in<F: Field>(
    small: &HomogeneousIdeal<F>,
    big: &HomogeneousIdeal<F>,
    limits: &ResourceLimits,
) -> Result<Option<usize>, IdealError> {
    let mut engine = MacaulayEngine::new(big.clone(), *limits);
    for (k, g) in small.generators.iter().enumerate() {
        if !engine.member(g)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `dim I_d - dim A_1 * I_(d-1)`: the number of minimal generators in degree `d`.
pub fn minimal_generator_count<F: Field>(
    ideal: &HomogeneousIdeal<F>,
    degree: u32,
    limits: &ResourceLimits,
) -> Result<usize, IdealError> {
    let slice = GradedSlice::build(ideal, degree, limits, false)?;
    Ok(slice.rank() - slice.lower_rank())
}
