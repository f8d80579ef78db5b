//! Polynomial families of the generic matrix: minors, trace invariants,
//! entries of matrix powers, the trace-contracted minor sums `Rel(r,p)` and
//! spanning sets of the spaces `V(i,p)`, plus the named generator sets built
//! from them.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::fields::Field;
use crate::linalg;
use crate::poly::{Monomial, MonomialBasis, MonomialOrder, Polynomial, VariableIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    IndexOutOfRange { index: usize, n: usize },
    LengthMismatch { rows: usize, cols: usize },
    Range { what: &'static str, value: usize, min: usize, max: usize },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::IndexOutOfRange { index, n } => write!(f, "index {index} outside [1, {n}]"),
            GenError::LengthMismatch { rows, cols } => {
                write!(f, "row and column sequences differ in length ({rows} vs {cols})")
            }
            GenError::Range { what, value, min, max } => {
                write!(f, "{what} = {value} outside [{min}, {max}]")
            }
        }
    }
}

impl core::error::Error for GenError {}

fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<(), GenError> {
    if value < min || value > max {
        Err(GenError::Range { what, value, min, max })
    } else {
        Ok(())
    }
}

/// Row and column index sequences (one-based) of a minor. Indices may repeat
/// and need not be sorted; the determinant is taken of the array as laid out.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, GenError> {
        if rows.len() != cols.len() {
            return Err(GenError::LengthMismatch { rows: rows.len(), cols: cols.len() });
        }
        if rows.is_empty() {
            return Err(GenError::Range { what: "minor size", value: 0, min: 1, max: usize::MAX });
        }
        Ok(MinorSpec { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Strictly increasing `k`-subsets of `[1, n]` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn check_indices(indices: &[usize], n: usize) -> Result<(), GenError> {
    match indices.iter().find(|&&i| i == 0 || i > n) {
        Some(&index) => Err(GenError::IndexOutOfRange { index, n }),
        None => Ok(()),
    }
}

/// Signed determinant expansion over all permutations (Heap's algorithm).
fn determinant_expansion<F: Field>(field: &F, rows: &[usize], cols: &[usize], n: usize) -> Polynomial<F> {
    let s = rows.len();
    let nvars = n * n;
    let mut perm: Vec<usize> = (0..s).collect();
    let mut counters = alloc::vec![0usize; s];
    let mut positive = true;
    let mut terms = Vec::new();
    let one = field.one();
    let minus_one = field.neg(&one);
    let mut emit = |perm: &[usize], positive: bool| {
        let mut exps = alloc::vec![0u16; nvars];
        for (k, &pk) in perm.iter().enumerate() {
            let v = VariableIndex { row: rows[k], col: cols[pk] };
            exps[v.slot(n)] += 1;
        }
        let c = if positive { one.clone() } else { minus_one.clone() };
        terms.push((Monomial::from_exponents(exps), c));
    };
    emit(&perm, positive);
    let mut i = 0;
    while i < s {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            positive = !positive;
            emit(&perm, positive);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Polynomial::from_terms(field, n, terms)
}

/// The minor `M(rows; cols)` of the generic `n x n` matrix.
pub fn minor<F: Field>(field: &F, spec: &MinorSpec, n: usize) -> Result<Polynomial<F>, GenError> {
    check_indices(&spec.rows, n)?;
    check_indices(&spec.cols, n)?;
    Ok(determinant_expansion(field, &spec.rows, &spec.cols, n))
}

/// `T_i`, the sum of the principal `i x i` minors. `T_0 = 1`.
pub fn trace_invariant<F: Field>(field: &F, i: usize, n: usize) -> Result<Polynomial<F>, GenError> {
    check_range("i", i, 0, n)?;
    if i == 0 {
        return Ok(Polynomial::constant(field, n, field.one()));
    }
    let mut acc = Polynomial::zero(field, n);
    for set in subsets(n, i) {
        acc = &acc + &determinant_expansion(field, &set, &set, n);
    }
    Ok(acc)
}

/// Entries of the symbolic power `Phi^e`, row-major.
pub fn matrix_power_entries<F: Field>(field: &F, e: usize, n: usize) -> Result<Vec<Polynomial<F>>, GenError> {
    check_range("e", e, 1, usize::MAX)?;
    let nvars = n * n;
    let one = field.one();
    let var = |a: usize, b: usize| Monomial::variable(nvars, a * n + b);
    let mut power: Vec<Polynomial<F>> =
        (0..nvars).map(|k| Polynomial::monomial(field, n, var(k / n, k % n), one.clone())).collect();
    for _ in 1..e {
        let mut next = Vec::with_capacity(nvars);
        for a in 0..n {
            for b in 0..n {
                let mut entry = Polynomial::zero(field, n);
                for c in 0..n {
                    entry = &entry + &power[a * n + c].mul_term(&var(c, b), &one);
                }
                next.push(entry);
            }
        }
        power = next;
    }
    Ok(power)
}

/// `Rel(r, p)` for the leading rows `a` and columns `b` (length `p - r`):
/// the sum over all `r`-subsets `I` of `[1,n]` of `M(a, I; b, I)`, zero
/// summands included. With `r = 0` this is the single minor `M(a; b)`.
pub fn rel<F: Field>(field: &F, r: usize, p: usize, a: &[usize], b: &[usize], n: usize) -> Result<Polynomial<F>, GenError> {
    check_range("p", p, 1, n)?;
    check_range("r", r, 0, p)?;
    if a.len() != b.len() {
        return Err(GenError::LengthMismatch { rows: a.len(), cols: b.len() });
    }
    check_range("leading length", a.len(), p - r, p - r)?;
    check_indices(a, n)?;
    check_indices(b, n)?;
    let mut acc = Polynomial::zero(field, n);
    let mut rows = Vec::with_capacity(p);
    let mut cols = Vec::with_capacity(p);
    for set in subsets(n, r) {
        rows.clear();
        cols.clear();
        rows.extend_from_slice(a);
        rows.extend_from_slice(&set);
        cols.extend_from_slice(b);
        cols.extend_from_slice(&set);
        acc = &acc + &determinant_expansion(field, &rows, &cols, n);
    }
    Ok(acc)
}

/// Coefficients `c_0 .. c_n` of `det(x Id + Phi) = sum c_k x^(n-k)`, expanded
/// directly over `A[x]` without going through minors.
pub fn char_poly_coefficients<F: Field>(field: &F, n: usize) -> Vec<Polynomial<F>> {
    // coefficient vectors indexed by the power of x
    type Univariate<F> = Vec<Polynomial<F>>;
    let entry = |i: usize, j: usize| -> Univariate<F> {
        let v = Polynomial::var(field, n, i + 1, j + 1);
        if i == j {
            alloc::vec![v, Polynomial::constant(field, n, field.one())]
        } else {
            alloc::vec![v]
        }
    };
    let mul = |a: &Univariate<F>, b: &Univariate<F>| -> Univariate<F> {
        let mut out = alloc::vec![Polynomial::zero(field, n); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        out
    };
    let mut total: Univariate<F> = alloc::vec![Polynomial::zero(field, n); n + 1];
    let idx: Vec<usize> = (0..n).collect();
    let mut perm = idx.clone();
    let mut counters = alloc::vec![0usize; n];
    let mut positive = true;
    let add_term = |perm: &[usize], positive: bool, total: &mut Univariate<F>| {
        let mut prod: Univariate<F> = alloc::vec![Polynomial::constant(field, n, field.one())];
        for (i, &j) in perm.iter().enumerate() {
            prod = mul(&prod, &entry(i, j));
        }
        for (k, c) in prod.iter().enumerate() {
            total[k] = if positive { &total[k] + c } else { &total[k] - c };
        }
    };
    add_term(&perm, positive, &mut total);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            positive = !positive;
            add_term(&perm, positive, &mut total);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    // total[k] multiplies x^k; report by descending power of x
    total.reverse();
    total
}

/// Which family a generator was drawn from, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Trace { i: usize },
    Power { e: usize, row: usize, col: usize },
    Rel { r: usize, p: usize, rows: Vec<usize>, cols: Vec<usize> },
    VSpace { i: usize, p: usize, rows: Vec<usize>, cols: Vec<usize> },
    Minor { rows: Vec<usize>, cols: Vec<usize> },
    /// Loaded from outside without provenance.
    External { label: String },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Trace { .. } => "trace",
            Family::Power { .. } => "power",
            Family::Rel { .. } => "rel",
            Family::VSpace { .. } => "v_space",
            Family::Minor { .. } => "minor",
            Family::External { .. } => "external",
        }
    }

    /// Degree every member of the family must have, when fixed.
    pub fn expected_degree(&self) -> Option<u32> {
        match self {
            Family::Trace { i } => Some(*i as u32),
            Family::Power { e, .. } => Some(*e as u32),
            Family::Rel { p, .. } | Family::VSpace { p, .. } => Some(*p as u32),
            Family::Minor { rows, .. } => Some(rows.len() as u32),
            Family::External { .. } => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Trace { i } => write!(f, "T{i}"),
            Family::Power { e, row, col } => write!(f, "(Phi^{e})[{row},{col}]"),
            Family::Rel { r, p, rows, cols } => write!(f, "Rel({r},{p};{rows:?};{cols:?})"),
            Family::VSpace { i, p, rows, cols } => write!(f, "V({i},{p};{rows:?};{cols:?})"),
            Family::Minor { rows, cols } => write!(f, "M({rows:?};{cols:?})"),
            Family::External { label } => f.write_str(label),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator<F: Field> {
    pub family: Family,
    pub poly: Polynomial<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetLabel {
    Theorem1,
    Theorem2,
    WeymanThm5,
    StricklandFull,
    Custom,
}

impl SetLabel {
    pub fn name(&self) -> &'static str {
        match self {
            SetLabel::Theorem1 => "theorem1",
            SetLabel::Theorem2 => "theorem2",
            SetLabel::WeymanThm5 => "weyman_thm5",
            SetLabel::StricklandFull => "strickland_full",
            SetLabel::Custom => "custom",
        }
    }
}

impl core::str::FromStr for SetLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "theorem1" => SetLabel::Theorem1,
            "theorem2" => SetLabel::Theorem2,
            "weyman_thm5" => SetLabel::WeymanThm5,
            "strickland_full" => SetLabel::StricklandFull,
            other => return Err(alloc::format!("unknown generator set `{other}`")),
        })
    }
}

/// A labelled list of generators. Zero polynomials never appear.
#[derive(Clone, Debug)]
pub struct GeneratorSet<F: Field> {
    pub label: SetLabel,
    pub n: usize,
    pub e: Option<usize>,
    pub members: Vec<Generator<F>>,
}

impl<F: Field> GeneratorSet<F> {
    pub fn polynomials(&self) -> Vec<Polynomial<F>> {
        self.members.iter().map(|g| g.poly.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn push(&mut self, family: Family, poly: Polynomial<F>) {
        if !poly.is_zero() {
            self.members.push(Generator { family, poly });
        }
    }

    fn extend_traces(&mut self, field: &F, upto: usize) {
        for i in 1..=upto {
            let t = trace_invariant(field, i, self.n).expect("1 <= i <= n");
            self.push(Family::Trace { i }, t);
        }
    }

    fn extend_power(&mut self, field: &F, e: usize) {
        let n = self.n;
        for (k, poly) in matrix_power_entries(field, e, n).expect("e >= 1").into_iter().enumerate() {
            self.push(Family::Power { e, row: k / n + 1, col: k % n + 1 }, poly);
        }
    }
}

fn check_n_e(n: usize, e: usize) -> Result<(), GenError> {
    check_range("n", n, 2, usize::MAX)?;
    check_range("e", e, 1, n - 1)
}

/// `T_1..T_{e-1}` together with the entries of `Phi^e`.
pub fn theorem1_set<F: Field>(field: &F, n: usize, e: usize) -> Result<GeneratorSet<F>, GenError> {
    check_n_e(n, e)?;
    let mut g = GeneratorSet { label: SetLabel::Theorem1, n, e: Some(e), members: Vec::new() };
    g.extend_traces(field, e - 1);
    g.extend_power(field, e);
    Ok(g)
}

/// `T_1..T_n` together with the entries of `Phi^2`.
pub fn theorem2_set<F: Field>(field: &F, n: usize) -> Result<GeneratorSet<F>, GenError> {
    check_range("n", n, 1, usize::MAX)?;
    let mut g = GeneratorSet { label: SetLabel::Theorem2, n, e: Some(2), members: Vec::new() };
    g.extend_traces(field, n);
    g.extend_power(field, 2);
    Ok(g)
}

/// `T_1..T_n` together with spanning sets of `V(i, ie - i + 1)` for
/// `1 <= i <= r`, where `n = re + f`.
pub fn weyman_thm5_set<F: Field>(field: &F, n: usize, e: usize) -> Result<GeneratorSet<F>, GenError> {
    check_n_e(n, e)?;
    let mut g = GeneratorSet { label: SetLabel::WeymanThm5, n, e: Some(e), members: Vec::new() };
    g.extend_traces(field, n);
    for i in 1..=n / e {
        let p = i * e - i + 1;
        for gen in v_space_generators(field, i, p, n)? {
            g.push(gen.family, gen.poly);
        }
    }
    Ok(g)
}

/// The `theorem2` set, every `Rel(r,p)` and every minor of size `floor(n/2) + 1`.
pub fn strickland_full_set<F: Field>(field: &F, n: usize) -> Result<GeneratorSet<F>, GenError> {
    let mut g = theorem2_set(field, n)?;
    g.label = SetLabel::StricklandFull;
    for gen in all_rel_generators(field, n)? {
        g.push(gen.family, gen.poly);
    }
    for gen in minors_of_size(field, n / 2 + 1, n)? {
        g.push(gen.family, gen.poly);
    }
    Ok(g)
}

/// Every nonzero `Rel(r,p)`, `1 <= r <= p <= n`, with increasing leading
/// sequences (other orderings only change the sign, repeats give zero).
pub fn all_rel_generators<F: Field>(field: &F, n: usize) -> Result<Vec<Generator<F>>, GenError> {
    let mut out = Vec::new();
    for p in 1..=n {
        for r in 1..=p {
            let lead = subsets(n, p - r);
            for a in &lead {
                for b in &lead {
                    let poly = rel(field, r, p, a, b, n)?;
                    if !poly.is_zero() {
                        out.push(Generator { family: Family::Rel { r, p, rows: a.clone(), cols: b.clone() }, poly });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All nonzero `s x s` minors with increasing row and column sets.
pub fn minors_of_size<F: Field>(field: &F, s: usize, n: usize) -> Result<Vec<Generator<F>>, GenError> {
    check_range("minor size", s, 1, n)?;
    let sets = subsets(n, s);
    let mut out = Vec::with_capacity(sets.len() * sets.len());
    for rows in &sets {
        for cols in &sets {
            let poly = determinant_expansion(field, rows, cols, n);
            out.push(Generator { family: Family::Minor { rows: rows.clone(), cols: cols.clone() }, poly });
        }
    }
    Ok(out)
}

/// Spanning family of `V(i,p)`: `Rel(p - i, p; u; v)` over increasing
/// `i`-sequences `u`, `v`. Zero members are dropped.
pub fn v_space_generators<F: Field>(field: &F, i: usize, p: usize, n: usize) -> Result<Vec<Generator<F>>, GenError> {
    check_range("p", p, 1, n)?;
    check_range("i", i, 0, p)?;
    let lead = subsets(n, i);
    let mut out = Vec::new();
    for u in &lead {
        for v in &lead {
            let poly = rel(field, p - i, p, u, v, n)?;
            if !poly.is_zero() {
                out.push(Generator { family: Family::VSpace { i, p, rows: u.clone(), cols: v.clone() }, poly });
            }
        }
    }
    Ok(out)
}

pub fn v_space_spanning_set<F: Field>(field: &F, i: usize, p: usize, n: usize) -> Result<Vec<Polynomial<F>>, GenError> {
    Ok(v_space_generators(field, i, p, n)?.into_iter().map(|g| g.poly).collect())
}

/// Exact dimension of the span of homogeneous polynomials of one degree.
pub fn span_rank<F: Field>(field: &F, n: usize, degree: u32, polys: &[Polynomial<F>]) -> usize {
    let basis = MonomialBasis::new(n * n, degree, MonomialOrder::Degrevlex);
    let vectors: Vec<_> = polys
        .iter()
        .map(|f| basis.coordinates(f).expect("homogeneous of the stated degree"))
        .collect();
    linalg::rank(field, basis.len(), &vectors)
}

/// Dimensions of the spans of `V(1,p)`, of the entries of `Phi^p`, and of
/// both together, all inside the degree-`p` component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerSpanComparison {
    pub v_space: usize,
    pub power_entries: usize,
    pub union: usize,
}

pub fn compare_v1_with_power<F: Field>(field: &F, p: usize, n: usize) -> Result<PowerSpanComparison, GenError> {
    let v = v_space_spanning_set(field, 1, p, n)?;
    let pw = matrix_power_entries(field, p, n)?;
    let d = p as u32;
    let both: Vec<_> = v.iter().chain(pw.iter()).cloned().collect();
    Ok(PowerSpanComparison {
        v_space: span_rank(field, n, d, &v),
        power_entries: span_rank(field, n, d, &pw),
        union: span_rank(field, n, d, &both),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};
    use crate::matrix::Matrix;
    use alloc::vec;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    type P = Polynomial<Rationals>;

    fn x(n: usize, i: usize, j: usize) -> P {
        Polynomial::var(&Rationals, n, i, j)
    }

    fn m(rows: &[usize], cols: &[usize], n: usize) -> P {
        minor(&Rationals, &MinorSpec::new(rows.to_vec(), cols.to_vec()).unwrap(), n).unwrap()
    }

    #[test]
    fn minor_examples() {
        assert_eq!(m(&[1], &[2], 2), x(2, 1, 2));
        assert_eq!(m(&[1, 2], &[1, 2], 2), &(&x(2, 1, 1) * &x(2, 2, 2)) - &(&x(2, 1, 2) * &x(2, 2, 1)));
        assert!(m(&[1, 1], &[1, 2], 2).is_zero());
        assert!(matches!(
            minor(&Rationals, &MinorSpec::new(vec![3], vec![1]).unwrap(), 2),
            Err(GenError::IndexOutOfRange { index: 3, n: 2 })
        ));
        assert!(MinorSpec::new(vec![1, 2], vec![1]).is_err());
    }

    #[test]
    fn minors_are_alternating() {
        for n in 1..=3usize {
            for s in 1..=n {
                let seqs: Vec<Vec<usize>> = (0..n.pow(s as u32))
                    .map(|mut code| {
                        (0..s)
                            .map(|_| {
                                let d = code % n;
                                code /= n;
                                d + 1
                            })
                            .collect()
                    })
                    .collect();
                for rows in &seqs {
                    for cols in &seqs {
                        let base = m(rows, cols, n);
                        for a in 0..s {
                            for b in a + 1..s {
                                let mut r2 = rows.clone();
                                r2.swap(a, b);
                                assert_eq!(m(&r2, cols, n), -&base);
                                let mut c2 = cols.clone();
                                c2.swap(a, b);
                                assert_eq!(m(rows, &c2, n), -&base);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn laplace_expansion_of_three_minors() {
        let n = 3;
        let all: Vec<usize> = vec![1, 2, 3];
        for rows in [vec![1, 2, 3], vec![3, 1, 2], vec![2, 2, 1]] {
            for expand_row in 0..3 {
                let mut acc = P::zero(&Rationals, n);
                for k in 0..3 {
                    let sub_rows: Vec<usize> = rows.iter().enumerate().filter(|&(i, _)| i != expand_row).map(|(_, &r)| r).collect();
                    let sub_cols: Vec<usize> = all.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c).collect();
                    let term = &x(n, rows[expand_row], all[k]) * &m(&sub_rows, &sub_cols, n);
                    acc = if (expand_row + k) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                assert_eq!(acc, m(&rows, &all, n));
            }
        }
    }

    #[test]
    fn trace_invariant_examples() {
        assert_eq!(trace_invariant(&Rationals, 1, 2).unwrap(), &x(2, 1, 1) + &x(2, 2, 2));
        assert_eq!(trace_invariant(&Rationals, 3, 3).unwrap(), m(&[1, 2, 3], &[1, 2, 3], 3));
        let t2 = trace_invariant(&Rationals, 2, 3).unwrap();
        let oracle = &(&m(&[1, 2], &[1, 2], 3) + &m(&[1, 3], &[1, 3], 3)) + &m(&[2, 3], &[2, 3], 3);
        assert_eq!(t2, oracle);
        assert_eq!(t2.num_terms(), 6);
        assert!(trace_invariant(&Rationals, 4, 3).is_err());
    }

    #[test]
    fn matrix_power_examples() {
        let p1 = matrix_power_entries(&Rationals, 1, 2).unwrap();
        assert_eq!(p1, vec![x(2, 1, 1), x(2, 1, 2), x(2, 2, 1), x(2, 2, 2)]);
        let p2 = matrix_power_entries(&Rationals, 2, 2).unwrap();
        assert_eq!(p2[0], &(&x(2, 1, 1) * &x(2, 1, 1)) + &(&x(2, 1, 2) * &x(2, 2, 1)));
        assert!(matrix_power_entries(&Rationals, 0, 2).is_err());
    }

    #[test]
    fn power_laws() {
        for n in 1..=3usize {
            let pows: Vec<Vec<P>> = (1..=4).map(|e| matrix_power_entries(&Rationals, e, n).unwrap()).collect();
            for a in 1..=3 {
                for b in 1..=(4 - a) {
                    for i in 0..n {
                        for j in 0..n {
                            let mut acc = P::zero(&Rationals, n);
                            for k in 0..n {
                                acc = &acc + &(&pows[a - 1][i * n + k] * &pows[b - 1][k * n + j]);
                            }
                            assert_eq!(acc, pows[a + b - 1][i * n + j]);
                        }
                    }
                }
            }
        }
    }

    /// sum_i (-1)^i T_i Phi^(n-i), entry by entry.
    fn cayley_hamilton_residual(n: usize) -> Vec<P> {
        let q = Rationals;
        let mut acc = vec![P::zero(&q, n); n * n];
        for i in 0..=n {
            let t = trace_invariant(&q, i, n).unwrap();
            let t = if i % 2 == 0 { t } else { -&t };
            let pw: Vec<P> = if i == n {
                (0..n * n).map(|k| if k / n == k % n { P::constant(&q, n, q.one()) } else { P::zero(&q, n) }).collect()
            } else {
                matrix_power_entries(&q, n - i, n).unwrap()
            };
            for k in 0..n * n {
                acc[k] = &acc[k] + &(&t * &pw[k]);
            }
        }
        acc
    }

    #[test]
    fn cayley_hamilton_sign_convention() {
        for n in [2, 3] {
            assert!(cayley_hamilton_residual(n).iter().all(P::is_zero), "n = {n}");
        }
        // n = 2 spelled out: Phi^2 - T1 Phi + T2 Id = 0
        let q = Rationals;
        let t1 = trace_invariant(&q, 1, 2).unwrap();
        let t2 = trace_invariant(&q, 2, 2).unwrap();
        let sq = matrix_power_entries(&q, 2, 2).unwrap();
        let e11 = &(&sq[0] - &(&t1 * &x(2, 1, 1))) + &t2;
        assert!(e11.is_zero());
    }

    #[test]
    fn char_poly_matches_trace_invariants() {
        for n in 1..=4 {
            let coeffs = char_poly_coefficients(&Rationals, n);
            for (i, c) in coeffs.iter().enumerate() {
                assert_eq!(c, &trace_invariant(&Rationals, i, n).unwrap(), "n = {n}, i = {i}");
            }
        }
    }

    #[test]
    fn rel_examples() {
        let q = Rationals;
        for p in 1..=3 {
            assert_eq!(rel(&q, p, p, &[], &[], 3).unwrap(), trace_invariant(&q, p, 3).unwrap());
        }
        assert_eq!(rel(&q, 1, 1, &[], &[], 2).unwrap(), trace_invariant(&q, 1, 2).unwrap());
        for n in 2..=4 {
            let t1 = trace_invariant(&q, 1, n).unwrap();
            let sq = matrix_power_entries(&q, 2, n).unwrap();
            for a in 1..=n {
                for b in 1..=n {
                    let expected = &(&t1 * &x(n, a, b)) - &sq[(a - 1) * n + (b - 1)];
                    assert_eq!(rel(&q, 1, 2, &[a], &[b], n).unwrap(), expected);
                }
            }
        }
        assert!(rel(&q, 1, 2, &[1], &[], 3).is_err());
        assert!(rel(&q, 1, 4, &[1, 2, 3], &[1, 2, 3], 3).is_err());
        assert!(rel(&q, 3, 2, &[], &[], 3).is_err());
        assert!(rel(&q, 1, 2, &[4], &[1], 3).is_err());
    }

    #[test]
    fn v_space_examples() {
        let q = Rationals;
        for n in 1..=4 {
            for p in 1..=n {
                assert_eq!(v_space_spanning_set(&q, 0, p, n).unwrap(), vec![trace_invariant(&q, p, n).unwrap()]);
            }
        }
        let v11 = v_space_spanning_set(&q, 1, 1, 3).unwrap();
        assert_eq!(v11.len(), 9);
        assert_eq!(span_rank(&q, 3, 1, &v11), 9);
        // n = 2, p = 2: the whole degree-2 minor space is one-dimensional
        let v12 = v_space_spanning_set(&q, 1, 2, 2).unwrap();
        assert_eq!(span_rank(&q, 2, 2, &v12), 1);
        assert_eq!(span_rank(&q, 3, 2, &v_space_spanning_set(&q, 1, 2, 3).unwrap()), 9);
        assert!(v_space_spanning_set(&q, 3, 2, 3).is_err());
    }

    #[test]
    fn v_spaces_increase_with_i() {
        let q = Rationals;
        for n in 2..=4 {
            for p in 1..=n {
                for i in 1..=p {
                    let small = v_space_spanning_set(&q, i - 1, p, n).unwrap();
                    let big = v_space_spanning_set(&q, i, p, n).unwrap();
                    let both: Vec<P> = small.iter().chain(big.iter()).cloned().collect();
                    let d = p as u32;
                    assert_eq!(span_rank(&q, n, d, &both), span_rank(&q, n, d, &big), "n={n} p={p} i={i}");
                }
            }
        }
    }

    #[test]
    fn v1_against_power_entries() {
        let q = Rationals;
        // n = 3, p = 2: rel(1,2,a,b) = T1 Phi_ab - (Phi^2)_ab, so the spans differ
        let c = compare_v1_with_power(&q, 2, 3).unwrap();
        assert_eq!(c, PowerSpanComparison { v_space: 9, power_entries: 9, union: 18 });
    }

    #[test]
    fn generator_sets() {
        let q = Rationals;
        let t1 = theorem1_set(&q, 3, 2).unwrap();
        assert_eq!(t1.len(), 1 + 9);
        assert!(t1.members.iter().all(|g| g.poly.is_homogeneous() && g.poly.degree() == g.family.expected_degree()));
        let t2 = theorem2_set(&q, 3).unwrap();
        assert_eq!(t2.len(), 3 + 9);
        let w = weyman_thm5_set(&q, 4, 2).unwrap();
        assert!(w.members.iter().any(|g| matches!(g.family, Family::VSpace { i: 2, p: 3, .. })));
        assert!(w.members.iter().all(|g| g.poly.degree() == g.family.expected_degree()));
        let s = strickland_full_set(&q, 3).unwrap();
        assert!(s.members.iter().any(|g| matches!(&g.family, Family::Minor { rows, .. } if rows.len() == 2)));
        assert!(s.members.iter().all(|g| !g.poly.is_zero() && g.poly.degree() == g.family.expected_degree()));
        assert!(theorem1_set(&q, 3, 3).is_err());
        assert!(weyman_thm5_set(&q, 3, 0).is_err());
    }

    #[test]
    fn trace_invariants_are_conjugation_invariant() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=3 {
            let traces: Vec<_> = (1..=n).map(|i| trace_invariant(&f, i, n).unwrap()).collect();
            let mut done = 0;
            while done < 50 {
                let g = Matrix::from_fn(&f, n, n, |_, _| f.from_u64(rng.next_u64()));
                let Some(gi) = g.inverse() else { continue };
                let mpt = Matrix::from_fn(&f, n, n, |_, _| f.from_u64(rng.next_u64()));
                let conj = g.mul(&mpt).mul(&gi);
                for t in &traces {
                    assert_eq!(t.evaluate(&conj).unwrap(), t.evaluate(&mpt).unwrap());
                }
                done += 1;
            }
        }
    }
}
