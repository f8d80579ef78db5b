//! Exterior powers of `E = K^n` on the subset basis: wedge products,
//! comultiplication, the maps `psi(r,m)`, the spanning check for their
//! images, and the Weyl dimension counts used for the `V(i,p)` ranks.
//!
//! A basis vector `e_S` of `∧^k E` is a `k`-subset `S` of `[1, n]`, stored as
//! a bitmask; basis vectors are ordered lexicographically by their sorted
//! elements. Signs come from counting inversions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fields::{binom, Field};
use crate::genmat::{span_rank, v_space_spanning_set, GenError};
use crate::linalg::{EchelonBasis, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExteriorError {
    DegreeMismatch { expected: (usize, usize), found: (usize, usize) },
    Range { what: &'static str, value: usize, min: usize, max: usize },
    NonDominant,
    PositiveCharacteristic(u64),
    Gen(GenError),
}

impl fmt::Display for ExteriorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExteriorError::DegreeMismatch { expected, found } => {
                write!(f, "tensor of degrees {found:?} where {expected:?} was expected")
            }
            ExteriorError::Range { what, value, min, max } => write!(f, "{what} = {value} outside [{min}, {max}]"),
            ExteriorError::NonDominant => f.write_str("weight is not weakly decreasing"),
            ExteriorError::PositiveCharacteristic(p) => {
                write!(f, "the dimension count only holds in characteristic 0, not {p}")
            }
            ExteriorError::Gen(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl core::error::Error for ExteriorError {}

impl From<GenError> for ExteriorError {
    fn from(e: GenError) -> Self {
        ExteriorError::Gen(e)
    }
}

/// Largest supported `n`.
pub const MAX_N: usize = 64;

/// A subset of `[1, n]`; bit `i` stands for the element `i + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// From one-based elements.
    pub fn from_elements(elements: &[usize]) -> Subset {
        Subset(elements.iter().fold(0, |acc, &e| {
            debug_assert!((1..=MAX_N).contains(&e));
            acc | 1 << (e - 1)
        }))
    }

    pub fn from_bits(bits: u64) -> Subset {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> (e - 1) & 1 == 1
    }

    /// One-based elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            (bits != 0).then(|| {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                i + 1
            })
        })
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// `[1, n] \ self`.
    pub fn complement(self, n: usize) -> Subset {
        Subset(full_mask(n) & !self.0)
    }

    /// All `k`-subsets of `[1, n]`, in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = Vec::new();
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (1..=k).collect();
        loop {
            out.push(Subset::from_elements(&idx));
            let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - (k - 1 - p)) else {
                return out;
            };
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }

    /// The `k`-subsets of `self`, in lexicographic order.
    pub fn subsets_of_size(self, k: usize) -> Vec<Subset> {
        let elems: Vec<usize> = self.elements().collect();
        Subset::all(elems.len(), k)
            .into_iter()
            .map(|pos| Subset(pos.elements().fold(0, |acc, p| acc | 1 << (elems[p - 1] - 1))))
            .collect()
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Ord for Subset {
    /// Lexicographic on the increasing element sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements().cmp(other.elements())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(-1)^#{(a, b) : a in A, b in B, a > b}`, the sign that sorts `e_A ∧ e_B`.
pub fn shuffle_sign(a: Subset, b: Subset) -> bool {
    let mut inversions = 0u32;
    for x in b.elements() {
        inversions += (a.0 >> x).count_ones();
    }
    inversions % 2 == 1
}

/// `e_A ∧ e_B = ±e_(A ∪ B)`, or `None` when `A` and `B` meet. The flag is
/// `true` for a minus sign.
pub fn wedge_basis(a: Subset, b: Subset) -> Option<(bool, Subset)> {
    (a.0 & b.0 == 0).then(|| (shuffle_sign(a, b), a.union(b)))
}

/// `e_S* ↦ sign(S, S^c) e_(S^c)`, the identification `∧^k E* ≅ ∧^(n-k) E`.
pub fn dual_complement(s: Subset, n: usize) -> (bool, Subset) {
    let c = s.complement(n);
    (shuffle_sign(s, c), c)
}

fn signed<F: Field>(field: &F, negative: bool, c: &F::Elem) -> F::Elem {
    if negative {
        field.neg(c)
    } else {
        c.clone()
    }
}

fn add_into<K: Ord, F: Field>(field: &F, map: &mut BTreeMap<K, F::Elem>, key: K, c: F::Elem) {
    match map.get_mut(&key) {
        Some(slot) => {
            field.add_assign(slot, &c);
            if field.is_zero(slot) {
                map.remove(&key);
            }
        }
        None => {
            if !field.is_zero(&c) {
                map.insert(key, c);
            }
        }
    }
}

/// An element of `∧^k E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorVector<F: Field> {
    field: F,
    n: usize,
    degree: usize,
    coords: BTreeMap<Subset, F::Elem>,
}

impl<F: Field> ExteriorVector<F> {
    pub fn zero(field: &F, n: usize, degree: usize) -> Self {
        ExteriorVector { field: field.clone(), n, degree, coords: BTreeMap::new() }
    }

    pub fn basis(field: &F, n: usize, s: Subset) -> Self {
        let mut v = Self::zero(field, n, s.len());
        v.coords.insert(s, field.one());
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coordinates(&self) -> impl Iterator<Item = (Subset, &F::Elem)> {
        self.coords.iter().map(|(s, c)| (*s, c))
    }

    pub fn add_term(&mut self, s: Subset, c: F::Elem) {
        debug_assert_eq!(s.len(), self.degree);
        add_into(&self.field, &mut self.coords, s, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in other.coordinates() {
            out.add_term(s, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.n, self.degree);
        for (s, a) in self.coordinates() {
            out.add_term(s, self.field.mul(a, c));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.n, self.degree + other.degree);
        for (s, a) in self.coordinates() {
            for (t, b) in other.coordinates() {
                if let Some((neg, u)) = wedge_basis(s, t) {
                    out.add_term(u, signed(f, neg, &f.mul(a, b)));
                }
            }
        }
        out
    }

    /// Component of the comultiplication in `∧^r E ⊗ ∧^(k-r) E`:
    /// `e_T ↦ Σ_(A ⊂ T, |A| = r) sign(A, T \ A) e_A ⊗ e_(T \ A)`.
    pub fn coproduct(&self, r: usize) -> ExteriorTensor<F> {
        let f = &self.field;
        let mut out = ExteriorTensor::zero(f, self.n, r, self.degree.saturating_sub(r));
        for (t, c) in self.coordinates() {
            for a in t.subsets_of_size(r) {
                let rest = t.difference(a);
                out.add_term(a, rest, signed(f, shuffle_sign(a, rest), c));
            }
        }
        out
    }
}

/// An element of `∧^a E ⊗ ∧^b E`, with coordinates on pairs of subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorTensor<F: Field> {
    field: F,
    n: usize,
    degrees: (usize, usize),
    coords: BTreeMap<(Subset, Subset), F::Elem>,
}

impl<F: Field> ExteriorTensor<F> {
    pub fn zero(field: &F, n: usize, a: usize, b: usize) -> Self {
        ExteriorTensor { field: field.clone(), n, degrees: (a, b), coords: BTreeMap::new() }
    }

    pub fn basis(field: &F, n: usize, s: Subset, t: Subset) -> Self {
        let mut v = Self::zero(field, n, s.len(), t.len());
        v.coords.insert((s, t), field.one());
        v
    }

    pub fn degrees(&self) -> (usize, usize) {
        self.degrees
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinates(&self) -> impl Iterator<Item = ((Subset, Subset), &F::Elem)> {
        self.coords.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, s: Subset, t: Subset, c: F::Elem) {
        debug_assert_eq!((s.len(), t.len()), self.degrees);
        add_into(&self.field, &mut self.coords, (s, t), c);
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.n, self.degrees.0, self.degrees.1);
        for ((s, t), a) in self.coordinates() {
            out.add_term(s, t, self.field.mul(a, c));
        }
        out
    }

    /// Multiplication `∧^a E ⊗ ∧^b E -> ∧^(a+b) E`.
    pub fn multiply(&self) -> ExteriorVector<F> {
        let f = &self.field;
        let mut out = ExteriorVector::zero(f, self.n, self.degrees.0 + self.degrees.1);
        for ((s, t), c) in self.coordinates() {
            if let Some((neg, u)) = wedge_basis(s, t) {
                out.add_term(u, signed(f, neg, c));
            }
        }
        out
    }

    /// The multidegree shared by both factors of a homogeneous tensor.
    pub fn weight(&self) -> Option<WeightVector> {
        let mut it = self.coords.keys().map(|&(s, t)| WeightVector::of_pair(s, t, self.n));
        let w = it.next()?;
        it.all(|v| v == w).then_some(w)
    }
}

/// `psi(r,m)`: comultiply the second factor of `∧^(m-r) E ⊗ ∧^(n-m+r) E`
/// into `∧^r E ⊗ ∧^(n-m) E`, then multiply the first two factors.
pub fn psi<F: Field>(r: usize, m: usize, n: usize, input: &ExteriorTensor<F>) -> Result<ExteriorTensor<F>, ExteriorError> {
    check_psi(r, m, n)?;
    let expected = (m - r, n - m + r);
    if input.degrees != expected {
        return Err(ExteriorError::DegreeMismatch { expected, found: input.degrees });
    }
    let f = &input.field;
    let mut out = ExteriorTensor::zero(f, n, m, n - m);
    for ((s, t), c) in input.coordinates() {
        for (neg, u, rest) in psi_basis(r, s, t) {
            out.add_term(u, rest, signed(f, neg, c));
        }
    }
    Ok(out)
}

fn check_psi(r: usize, m: usize, n: usize) -> Result<(), ExteriorError> {
    if n > MAX_N {
        return Err(ExteriorError::Range { what: "n", value: n, min: 1, max: MAX_N });
    }
    if m > n {
        return Err(ExteriorError::Range { what: "m", value: m, min: 0, max: n });
    }
    if r == 0 || r > m {
        return Err(ExteriorError::Range { what: "r", value: r, min: 1, max: m });
    }
    Ok(())
}

/// Image of `e_S ⊗ e_T` under `psi`, as signed basis pairs.
fn psi_basis(r: usize, s: Subset, t: Subset) -> impl Iterator<Item = (bool, Subset, Subset)> {
    t.subsets_of_size(r).into_iter().filter_map(move |a| {
        let rest = t.difference(a);
        wedge_basis(s, a).map(|(neg, u)| (neg ^ shuffle_sign(a, rest), u, rest))
    })
}

/// Integer weight, e.g. the multidegree of a tensor basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    /// Multidegree of `e_S ⊗ e_T`: entry `i` counts the factors containing `i`.
    pub fn of_pair(s: Subset, t: Subset, n: usize) -> WeightVector {
        WeightVector((1..=n).map(|i| s.contains(i) as i64 + t.contains(i) as i64).collect())
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// `(1^j, 0^(n-2j), (-1)^j)`.
    pub fn adjoint_type(j: usize, n: usize) -> WeightVector {
        let mut v = alloc::vec![0i64; n];
        for k in 0..j.min(n / 2) {
            v[k] = 1;
            v[n - 1 - k] = -1;
        }
        WeightVector(v)
    }
}

/// Weyl dimension `Π_(i<j) (λ_i - λ_j + j - i) / (j - i)`.
pub fn weyl_dim(lambda: &WeightVector) -> Result<BigUint, ExteriorError> {
    if !lambda.is_dominant() {
        return Err(ExteriorError::NonDominant);
    }
    let l = &lambda.0;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            num *= BigInt::from(l[i] - l[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero() && !q.is_negative());
    Ok(q.magnitude().clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningResult {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    /// `C(n,m) * C(n,n-m)`.
    pub target: BigUint,
    pub full: bool,
}

/// Rank of the images of `psi(r,m)`, `r = 1..=m`, inside `∧^m E ⊗ ∧^(n-m) E`
/// for `m = floor(n/2) + 1`.
///
/// `psi` preserves multidegree, so the rank is the sum of the ranks of the
/// weight blocks.
pub fn lemma5_spanning<F: Field>(n: usize, field: &F) -> Result<SpanningResult, ExteriorError> {
    if n == 0 || n > MAX_N {
        return Err(ExteriorError::Range { what: "n", value: n, min: 1, max: MAX_N });
    }
    let m = n / 2 + 1;
    let mut blocks: BTreeMap<(u64, u64), Vec<ImageVector>> = BTreeMap::new();
    for r in 1..=m {
        for s in Subset::all(n, m - r) {
            for t in Subset::all(n, n - m + r) {
                let image: Vec<(bool, Subset, Subset)> = psi_basis(r, s, t).collect();
                if !image.is_empty() {
                    blocks.entry(block_key(s, t)).or_default().push(image);
                }
            }
        }
    }
    let rank = blocks.values().map(|images| block_rank(field, images)).sum();
    let target = binom(n as u64, m as u64) * binom(n as u64, (n - m) as u64);
    let full = BigUint::from(rank) == target;
    Ok(SpanningResult { n, m, rank, target, full })
}

type ImageVector = Vec<(bool, Subset, Subset)>;

// (positions with weight 2, positions with weight 1)
fn block_key(s: Subset, t: Subset) -> (u64, u64) {
    (s.0 & t.0, s.0 ^ t.0)
}

fn block_rank<F: Field>(field: &F, images: &[ImageVector]) -> usize {
    let mut index: BTreeMap<(Subset, Subset), usize> = BTreeMap::new();
    for img in images {
        for &(_, u, rest) in img {
            let next = index.len();
            index.entry((u, rest)).or_insert(next);
        }
    }
    let mut echelon = EchelonBasis::new(field, index.len());
    for img in images {
        let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for &(neg, u, rest) in img {
            add_into(field, &mut acc, index[&(u, rest)], signed(field, neg, &field.one()));
        }
        echelon.insert(&SparseVec::from_sorted(acc.into_iter().collect()));
    }
    echelon.rank()
}

/// Rank of the `psi` images restricted to the weight whose entry is 2 on
/// `twos`, 1 on `ones` and 0 elsewhere.
pub fn lemma5_block_rank<F: Field>(n: usize, twos: Subset, ones: Subset, field: &F) -> Result<usize, ExteriorError> {
    if n == 0 || n > MAX_N {
        return Err(ExteriorError::Range { what: "n", value: n, min: 1, max: MAX_N });
    }
    let m = n / 2 + 1;
    let key = (twos.0, ones.0);
    let mut images = Vec::new();
    for r in 1..=m {
        for s in Subset::all(n, m - r) {
            for t in Subset::all(n, n - m + r) {
                if block_key(s, t) == key {
                    let image: ImageVector = psi_basis(r, s, t).collect();
                    if !image.is_empty() {
                        images.push(image);
                    }
                }
            }
        }
    }
    Ok(block_rank(field, &images))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub rank: usize,
    pub expected: BigUint,
    pub holds: bool,
}

/// Compares the rank of the spanning set of `V(i,p)` with
/// `Σ_(j=0..min(i, n-p)) weyl_dim(1^j, 0^(n-2j), (-1)^j)`.
pub fn lemma1_rank_check<F: Field>(field: &F, i: usize, p: usize, n: usize) -> Result<RankCheck, ExteriorError> {
    if field.characteristic() != 0 {
        return Err(ExteriorError::PositiveCharacteristic(field.characteristic()));
    }
    if p == 0 || p > n {
        return Err(ExteriorError::Range { what: "p", value: p, min: 1, max: n });
    }
    if i > p {
        return Err(ExteriorError::Range { what: "i", value: i, min: 0, max: p });
    }
    let polys = v_space_spanning_set(field, i, p, n)?;
    let rank = span_rank(field, n, p as u32, &polys);
    let mut expected = BigUint::zero();
    for j in 0..=i.min(n - p) {
        expected += weyl_dim(&WeightVector::adjoint_type(j, n))?;
    }
    let holds = BigUint::from(rank) == expected;
    Ok(RankCheck { rank, expected, holds })
}
