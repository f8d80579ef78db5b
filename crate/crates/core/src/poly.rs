//! Sparse polynomials in the `n^2` coordinate functions `F[i,j]` of the
//! space of `n x n` matrices.
//!
//! Variables are ranked row-major, `F[1,1] > F[1,2] > ... > F[n,n]`. A
//! polynomial keeps its terms sorted in descending degrevlex order, which
//! makes the term list a canonical form.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::fields::Field;
use crate::linalg::SparseVec;
use crate::matrix::MatrixPoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    FieldMismatch,
    DimensionMismatch { left: usize, right: usize },
    IndexOutOfRange { row: usize, col: usize, n: usize },
    NotHomogeneous,
    DegreeTooLow { degree: u32, target: u32 },
    Parse { offset: usize, message: String },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::FieldMismatch => f.write_str("polynomials live over different fields"),
            PolyError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: n = {left} vs n = {right}")
            }
            PolyError::IndexOutOfRange { row, col, n } => {
                write!(f, "variable F[{row},{col}] out of range for n = {n}")
            }
            PolyError::NotHomogeneous => f.write_str("polynomial is not homogeneous"),
            PolyError::DegreeTooLow { degree, target } => {
                write!(f, "polynomial of degree {degree} cannot contribute to degree {target}")
            }
            PolyError::Parse { offset, message } => write!(f, "parse error at byte {offset}: {message}"),
        }
    }
}

impl core::error::Error for PolyError {}

/// One-based position `(row, col)` of a coordinate function `F[row,col]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableIndex {
    pub row: usize,
    pub col: usize,
}

impl VariableIndex {
    pub fn new(row: usize, col: usize, n: usize) -> Result<Self, PolyError> {
        if row == 0 || col == 0 || row > n || col > n {
            return Err(PolyError::IndexOutOfRange { row, col, n });
        }
        Ok(VariableIndex { row, col })
    }

    /// Zero-based slot in the row-major variable list.
    pub fn slot(&self, n: usize) -> usize {
        (self.row - 1) * n + (self.col - 1)
    }

    pub fn from_slot(slot: usize, n: usize) -> Self {
        VariableIndex { row: slot / n + 1, col: slot % n + 1 }
    }
}

/// Exponent vector over the row-major variable list, with the total degree
/// cached. Absent variables have exponent 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: alloc::vec![0; nvars], degree: 0 }
    }

    pub fn variable(nvars: usize, slot: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[slot] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, slot: usize) -> u16 {
        self.exps[slot]
    }

    /// `(slot, exponent)` pairs with positive exponent, in slot order.
    pub fn support(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, &e)| (k, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, degree: self.degree + other.degree }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Some(Monomial { exps, degree: other.degree - self.degree })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::from_exponents(self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl Ord for Monomial {
    /// Degree reverse lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        MonomialOrder::Degrevlex.cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `nvars` variables, descending under `order`.
pub fn monomials_of_degree(nvars: usize, d: u32, order: MonomialOrder) -> Vec<Monomial> {
    fn rec(slot: usize, remaining: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if slot + 1 == cur.len() {
            cur[slot] = remaining as u16;
            out.push(Monomial::from_exponents(cur.clone()));
            cur[slot] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            cur[slot] = e as u16;
            rec(slot + 1, remaining - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut alloc::vec![0; nvars], &mut out);
    out.sort_by(|a, b| order.cmp(b, a));
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    #[default]
    Degrevlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Degrevlex => a.degree.cmp(&b.degree).then_with(|| {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// The monomials of one degree, indexed in descending order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    order: MonomialOrder,
    degree: u32,
    monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32, order: MonomialOrder) -> Self {
        MonomialBasis { order, degree, monomials: monomials_of_degree(nvars, degree, order) }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn monomial(&self, idx: usize) -> &Monomial {
        &self.monomials[idx]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        if m.degree() != self.degree {
            return None;
        }
        self.monomials.binary_search_by(|probe| self.order.cmp(m, probe)).ok()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn coordinates<F: Field>(&self, f: &Polynomial<F>) -> Result<SparseVec<F::Elem>, PolyError> {
        let mut entries = Vec::with_capacity(f.num_terms());
        for (m, c) in f.terms() {
            let idx = self.index_of(m).ok_or(PolyError::NotHomogeneous)?;
            entries.push((idx, c.clone()));
        }
        entries.sort_by_key(|e| e.0);
        Ok(SparseVec::from_sorted(entries))
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn polynomial<F: Field>(&self, field: &F, n: usize, v: &SparseVec<F::Elem>) -> Polynomial<F> {
        Polynomial::from_terms(field, n, v.iter().map(|(i, c)| (self.monomials[i].clone(), c.clone())))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    n: usize,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, n: usize) -> Self {
        Polynomial { field: field.clone(), n, terms: Vec::new() }
    }

    pub fn constant(field: &F, n: usize, c: F::Elem) -> Self {
        Self::from_terms(field, n, core::iter::once((Monomial::one(n * n), c)))
    }

    /// The coordinate function `F[row,col]` (one-based).
    pub fn var(field: &F, n: usize, row: usize, col: usize) -> Self {
        let v = VariableIndex::new(row, col, n).expect("variable index in range");
        Self::monomial(field, n, Monomial::variable(n * n, v.slot(n)), field.one())
    }

    pub fn monomial(field: &F, n: usize, m: Monomial, c: F::Elem) -> Self {
        Self::from_terms(field, n, core::iter::once((m, c)))
    }

    /// Builds the canonical form: like terms combined, zeros dropped.
    pub fn from_terms(field: &F, n: usize, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut acc: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), n * n);
            match acc.get_mut(&m) {
                Some(slot) => field.add_assign(slot, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(field, n, acc)
    }

    fn from_map(field: &F, n: usize, acc: BTreeMap<Monomial, F::Elem>) -> Self {
        let terms = acc.into_iter().rev().filter(|(_, c)| !field.is_zero(c)).collect();
        Polynomial { field: field.clone(), n, terms }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n * self.n
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .binary_search_by(|(probe, _)| m.cmp(probe))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32, PolyError> {
        if self.is_zero() || !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        Ok(self.terms[0].0.degree())
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &F::Elem)> {
        match order {
            MonomialOrder::Degrevlex => self.terms.first().map(|(m, c)| (m, c)),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)).map(|(m, c)| (m, c)),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch);
        }
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &F::Elem| if negate_other { f.neg(c) } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), sign(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { f.sub(ca, cb) } else { f.add(ca, cb) };
                    if !f.is_zero(&c) {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Polynomial { field: self.field.clone(), n: self.n, terms: out }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut acc: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = f.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(slot) => f.add_assign(slot, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(f, self.n, acc))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.n);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect();
        Polynomial { field: f.clone(), n: self.n, terms }
    }

    /// Multiplication by `c * m`; monomial multiplication preserves the order.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.n);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(a, c))).collect();
        Polynomial { field: f.clone(), n: self.n, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.n, self.field.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Ring homomorphism `F[i,j] -> point[i,j]`.
    pub fn evaluate(&self, point: &MatrixPoint<F>) -> Result<F::Elem, PolyError> {
        if point.field() != &self.field {
            return Err(PolyError::FieldMismatch);
        }
        if point.rows() != self.n || point.cols() != self.n {
            return Err(PolyError::DimensionMismatch { left: self.n, right: point.rows() });
        }
        let f = &self.field;
        let nvars = self.nvars();
        let max_exp = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.exponents().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        // powers[slot][e] = value^e
        let powers: Vec<Vec<F::Elem>> = (0..nvars)
            .map(|slot| {
                let v = point.get(slot / self.n, slot % self.n);
                let mut row = Vec::with_capacity(max_exp + 1);
                row.push(f.one());
                for e in 1..=max_exp {
                    let next = f.mul(&row[e - 1], v);
                    row.push(next);
                }
                row
            })
            .collect();
        let mut total = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (slot, e) in m.support() {
                t = f.mul(&t, &powers[slot][e as usize]);
                if f.is_zero(&t) {
                    break;
                }
            }
            f.add_assign(&mut total, &t);
        }
        Ok(total)
    }

    /// Re-targets the coefficients through an integer-valued coefficient map;
    /// used to move rational data into a prime field.
    pub fn map_coefficients<G: Field>(&self, target: &G, mut map: impl FnMut(&F::Elem) -> G::Elem) -> Polynomial<G> {
        Polynomial::from_terms(target, self.n, self.terms.iter().map(|(m, c)| (m.clone(), map(c))))
    }

    pub fn parse(field: &F, n: usize, text: &str) -> Result<Self, PolyError> {
        let raw = parse_raw(text)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let c = field
                .from_ratio(&t.num, &t.den)
                .ok_or(PolyError::Parse { offset: t.offset, message: "denominator vanishes in the field".to_string() })?;
            let mut exps = alloc::vec![0u16; n * n];
            for (row, col, e) in t.factors {
                let v = VariableIndex::new(row, col, n)?;
                exps[v.slot(n)] += e;
            }
            terms.push((Monomial::from_exponents(exps), c));
        }
        Ok(Self::from_terms(field, n, terms))
    }
}

/// Largest row or column index mentioned in a polynomial text; the smallest
/// dimension the text can be parsed in.
pub fn max_index(text: &str) -> Result<usize, PolyError> {
    Ok(parse_raw(text)?
        .iter()
        .flat_map(|t| t.factors.iter().map(|&(r, c, _)| r.max(c)))
        .max()
        .unwrap_or(0))
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (num, den) = self.field.to_ratio(c);
            let negative = num.is_negative();
            match (k, negative) {
                (0, true) => out.write_str("-")?,
                (0, false) => {}
                (_, true) => out.write_str(" - ")?,
                (_, false) => out.write_str(" + ")?,
            }
            let mag = num.abs();
            let unit = mag.is_one() && den.is_one();
            let mut first = true;
            if !unit || m.degree() == 0 {
                if den.is_one() {
                    write!(out, "{mag}")?;
                } else {
                    write!(out, "{mag}/{den}")?;
                }
                first = false;
            }
            for (slot, e) in m.support() {
                if !first {
                    out.write_str("*")?;
                }
                first = false;
                let v = VariableIndex::from_slot(slot, self.n);
                write!(out, "F[{},{}]", v.row, v.col)?;
                if e > 1 {
                    write!(out, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        /// Panics on field or dimension mismatch; use the `try_` form for
        /// unchecked inputs.
        impl<'a, F: Field> $tr<&'a Polynomial<F>> for &'a Polynomial<F> {
            type Output = Polynomial<F>;
            fn $method(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
                self.$try(rhs).expect("compatible polynomials")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        let f = &self.field;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect();
        Polynomial { field: f.clone(), n: self.n, terms }
    }
}

/// Exact coordinate vectors of every monomial multiple `m * f` of degree `d`
/// (inputs of degree `d_f <= d`, `m` of degree `d - d_f`), in the monomial
/// basis of degree `d` under `order`.
pub fn graded_component<F: Field>(
    polys: &[Polynomial<F>],
    d: u32,
    order: MonomialOrder,
) -> Result<Vec<SparseVec<F::Elem>>, PolyError> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    let n = first.dimension();
    let basis = MonomialBasis::new(n * n, d, order);
    let mut out = Vec::new();
    for f in polys {
        first.check_compatible(f)?;
        let df = f.homogeneous_degree()?;
        if df > d {
            return Err(PolyError::DegreeTooLow { degree: df, target: d });
        }
        for m in monomials_of_degree(n * n, d - df, order) {
            out.push(basis.coordinates(&f.mul_term(&m, &f.field().one()))?);
        }
    }
    Ok(out)
}

struct RawTerm {
    offset: usize,
    num: BigInt,
    den: BigInt,
    factors: Vec<(usize, usize, u16)>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: &str) -> PolyError {
        PolyError::Parse { offset: self.pos, message: message.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<(), PolyError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&alloc::format!("expected `{}`", c as char)))
        }
    }

    fn digits(&mut self) -> Result<&'a [u8], PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let d = self.digits()?;
        Ok(BigInt::parse_bytes(d, 10).expect("ascii digits"))
    }

    fn small(&mut self) -> Result<usize, PolyError> {
        let d = self.digits()?;
        core::str::from_utf8(d).ok().and_then(|s| s.parse().ok()).ok_or_else(|| self.err("integer too large"))
    }

    fn factor(&mut self) -> Result<(usize, usize, u16), PolyError> {
        self.expect(b'F')?;
        self.expect(b'[')?;
        let row = self.small()?;
        self.expect(b',')?;
        let col = self.small()?;
        self.expect(b']')?;
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            e = self.small()?;
            if e > u16::MAX as usize / 2 {
                return Err(self.err("exponent too large"));
            }
        }
        Ok((row, col, e as u16))
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm, PolyError> {
        let offset = self.pos;
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut factors = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                }
            }
            Some(b'F') => factors.push(self.factor()?),
            _ => return Err(self.err("expected a coefficient or F[i,j]")),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        if negative {
            num = -num;
        }
        Ok(RawTerm { offset, num, den, factors })
    }
}

fn parse_raw(text: &str) -> Result<Vec<RawTerm>, PolyError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut negative = false;
    match lx.peek() {
        Some(b'-') => {
            negative = true;
            lx.pos += 1;
        }
        Some(b'+') => lx.pos += 1,
        None => return Err(lx.err("empty polynomial")),
        _ => {}
    }
    loop {
        terms.push(lx.term(negative)?);
        match lx.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(_) => return Err(lx.err("expected `+`, `-` or end of input")),
        }
        lx.pos += 1;
    }
    Ok(terms)
}
