//! Buchberger's algorithm for homogeneous ideals.
//!
//! Kept deliberately independent of the graded linear algebra in
//! [`idealmem`](crate::idealmem) so the two can cross-check each other.
//! S-pairs are processed by increasing degree, so stopping at a degree
//! bound still leaves a basis that is complete up to that degree.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::fields::Field;
use crate::idealmem::{HomogeneousIdeal, IdealError};
use crate::poly::{Monomial, MonomialOrder, PolyError, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerConfig {
    /// Stop after all pairs up to this degree; `None` runs to completion.
    pub degree_bound: Option<u32>,
    pub max_pairs: usize,
    pub max_basis: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { degree_bound: None, max_pairs: 200_000, max_basis: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    n: usize,
    order: MonomialOrder,
    basis: Vec<Polynomial<F>>,
    reduced: bool,
    complete_to_degree: Option<u32>,
}

// Terms in ascending order, so the leading term is last.
type Terms<E> = Vec<(Monomial, E)>;

impl<F: Field> GroebnerBasis<F> {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn basis(&self) -> &[Polynomial<F>] {
        &self.basis
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// `None` when the basis is complete in every degree.
    pub fn complete_to_degree(&self) -> Option<u32> {
        self.complete_to_degree
    }

    /// Remainder of `f` under full reduction by the basis.
    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let basis: Vec<Terms<F::Elem>> = self.basis.iter().map(|g| ascending(g, self.order)).collect();
        let r = reduce(&self.field, self.order, ascending(f, self.order), &basis, None);
        Polynomial::from_terms(&self.field, self.n, r)
    }

    /// Membership of a homogeneous `f` by normal form.
    pub fn member(&self, f: &Polynomial<F>) -> Result<bool, IdealError> {
        if f.field() != &self.field {
            return Err(PolyError::FieldMismatch.into());
        }
        if f.dimension() != self.n {
            return Err(PolyError::DimensionMismatch { left: self.n, right: f.dimension() }.into());
        }
        if f.is_zero() {
            return Ok(true);
        }
        let d = f.homogeneous_degree()?;
        if let Some(bound) = self.complete_to_degree {
            if d > bound {
                return Err(IdealError::ResourceLimit { what: "degree", requested: d as usize, limit: bound as usize });
            }
        }
        Ok(self.normal_form(f).is_zero())
    }
}

fn ascending<F: Field>(p: &Polynomial<F>, order: MonomialOrder) -> Terms<F::Elem> {
    let mut t: Terms<F::Elem> = p.terms().to_vec();
    t.sort_by(|a, b| order.cmp(&a.0, &b.0));
    t
}

fn lead<E>(t: &Terms<E>) -> &Monomial {
    &t.last().expect("nonzero polynomial").0
}

/// `a - c * m * b` for ascending term lists.
fn sub_mul<F: Field>(field: &F, order: MonomialOrder, a: &Terms<F::Elem>, c: &F::Elem, m: &Monomial, b: &Terms<F::Elem>) -> Terms<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let scaled = |k: usize| (b[k].0.mul(m), field.mul(c, &b[k].1));
    let mut pending = (j < b.len()).then(|| scaled(0));
    while i < a.len() {
        let Some((mb, cb)) = pending.as_ref() else { break };
        match order.cmp(&a[i].0, mb) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((mb.clone(), field.neg(cb)));
                j += 1;
                pending = (j < b.len()).then(|| scaled(j));
            }
            Ordering::Equal => {
                let v = field.sub(&a[i].1, cb);
                if !field.is_zero(&v) {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
                pending = (j < b.len()).then(|| scaled(j));
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    while let Some((mb, cb)) = pending {
        out.push((mb, field.neg(&cb)));
        j += 1;
        pending = (j < b.len()).then(|| scaled(j));
    }
    out
}

/// Full reduction of `f` by the monic `basis`, skipping index `skip`.
fn reduce<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut f: Terms<F::Elem>,
    basis: &[Terms<F::Elem>],
    skip: Option<usize>,
) -> Terms<F::Elem> {
    let mut rem: Terms<F::Elem> = Vec::new();
    while let Some((m, c)) = f.last() {
        let divisor = basis
            .iter()
            .enumerate()
            .filter(|&(k, g)| Some(k) != skip && !g.is_empty())
            .find_map(|(_, g)| lead(g).quotient_into(m).map(|q| (q, g)));
        match divisor {
            Some((q, g)) => {
                let c = c.clone();
                f = sub_mul(field, order, &f, &c, &q, g);
            }
            None => rem.push(f.pop().expect("nonempty")),
        }
    }
    rem.reverse();
    rem
}

fn make_monic<F: Field>(field: &F, t: &mut Terms<F::Elem>) {
    if let Some((_, lc)) = t.last() {
        let inv = field.inv(lc).expect("nonzero leading coefficient");
        for (_, c) in t.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Task {
    Generator(usize),
    Pair(usize, usize),
}

pub fn buchberger<F: Field>(
    ideal: &HomogeneousIdeal<F>,
    order: MonomialOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis<F>, IdealError> {
    let field = ideal.field().clone();
    let gens: Vec<Terms<F::Elem>> = ideal.generators().iter().map(|g| ascending(g, order)).collect();
    let mut basis: Vec<Terms<F::Elem>> = Vec::new();
    let mut queue: BinaryHeap<Reverse<(u32, Task)>> = BinaryHeap::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (k, g) in gens.iter().enumerate() {
        queue.push(Reverse((lead(g).degree(), Task::Generator(k))));
    }
    let mut processed = 0usize;
    while let Some(&Reverse((degree, task))) = queue.peek() {
        if config.degree_bound.is_some_and(|b| degree > b) {
            break;
        }
        queue.pop();
        let candidate = match task {
            Task::Generator(k) => gens[k].clone(),
            Task::Pair(i, j) => {
                pending.remove(&(i, j));
                if chain_criterion(&basis, &pending, i, j) {
                    continue;
                }
                processed += 1;
                if processed > config.max_pairs {
                    return Err(IdealError::ResourceLimit { what: "pairs", requested: processed, limit: config.max_pairs });
                }
                s_polynomial(&field, order, &basis[i], &basis[j])
            }
        };
        let mut h = reduce(&field, order, candidate, &basis, None);
        if h.is_empty() {
            continue;
        }
        make_monic(&field, &mut h);
        let new = basis.len();
        if new + 1 > config.max_basis {
            return Err(IdealError::ResourceLimit { what: "basis", requested: new + 1, limit: config.max_basis });
        }
        for (i, g) in basis.iter().enumerate() {
            // product criterion: coprime leading monomials reduce to zero
            if lead(g).is_coprime(lead(&h)) {
                continue;
            }
            let d = lead(g).lcm(lead(&h)).degree();
            queue.push(Reverse((d, Task::Pair(i, new))));
            pending.insert((i, new));
        }
        basis.push(h);
    }
    let basis = interreduce(&field, order, basis);
    let n = ideal.dimension();
    Ok(GroebnerBasis {
        basis: basis.into_iter().map(|t| Polynomial::from_terms(&field, n, t)).collect(),
        field,
        n,
        order,
        reduced: true,
        complete_to_degree: if queue.is_empty() { None } else { config.degree_bound },
    })
}

/// Buchberger's second criterion: some `k` has a leading monomial dividing
/// `lcm(i, j)` and both pairs with `k` already dealt with.
fn chain_criterion<E>(basis: &[Terms<E>], pending: &BTreeSet<(usize, usize)>, i: usize, j: usize) -> bool {
    let l = lead(&basis[i]).lcm(lead(&basis[j]));
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    (0..basis.len()).any(|k| {
        k != i
            && k != j
            && lead(&basis[k]).divides(&l)
            && !pending.contains(&key(i, k))
            && !pending.contains(&key(j, k))
    })
}

fn s_polynomial<F: Field>(field: &F, order: MonomialOrder, f: &Terms<F::Elem>, g: &Terms<F::Elem>) -> Terms<F::Elem> {
    let l = lead(f).lcm(lead(g));
    let qf = lead(f).quotient_into(&l).expect("lcm");
    let qg = lead(g).quotient_into(&l).expect("lcm");
    let scaled_f: Terms<F::Elem> = f.iter().map(|(m, c)| (m.mul(&qf), c.clone())).collect();
    sub_mul(field, order, &scaled_f, &field.one(), &qg, g)
}

/// Drops redundant leading monomials, then reduces every tail.
fn interreduce<F: Field>(field: &F, order: MonomialOrder, basis: Vec<Terms<F::Elem>>) -> Vec<Terms<F::Elem>> {
    let mut keep: Vec<Terms<F::Elem>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != k && lead(h).divides(lead(g)) && (lead(h) != lead(g) || j < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    for k in 0..keep.len() {
        let mut g = core::mem::take(&mut keep[k]);
        let top = g.pop().expect("nonzero");
        let mut tail = reduce(field, order, g, &keep, Some(k));
        tail.push(top);
        keep[k] = tail;
    }
    keep.sort_by(|a, b| order.cmp(lead(a), lead(b)));
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};
    use crate::genmat::{minor, trace_invariant, MinorSpec};
    use crate::idealmem::{member, ResourceLimits};
    use alloc::vec;
    use alloc::vec::Vec;

    fn x<F: Field>(f: &F, i: usize, j: usize) -> Polynomial<F> {
        Polynomial::var(f, 2, i, j)
    }

    #[test]
    fn principal_ideal() {
        let q = Rationals;
        let i = HomogeneousIdeal::new(&q, 2, vec![x(&q, 1, 1)]).unwrap();
        let gb = buchberger(&i, MonomialOrder::Degrevlex, &GroebnerConfig::default()).unwrap();
        assert_eq!(gb.basis(), &[x(&q, 1, 1)]);
        assert!(gb.is_reduced());
        assert_eq!(gb.complete_to_degree(), None);
    }

    #[test]
    fn variable_and_determinant() {
        let q = Rationals;
        let det = minor(&q, &MinorSpec::new(vec![1, 2], vec![1, 2]).unwrap(), 2).unwrap();
        let i = HomogeneousIdeal::new(&q, 2, vec![x(&q, 1, 1), det]).unwrap();
        let gb = buchberger(&i, MonomialOrder::Degrevlex, &GroebnerConfig::default()).unwrap();
        assert_eq!(gb.basis(), &[x(&q, 1, 1), &x(&q, 1, 2) * &x(&q, 2, 1)]);
    }

    #[test]
    fn twisted_cubic_style_ideal() {
        // 2x2 minors of [[a, b, c], [b, c, d]] in the variables of a 2x2 matrix
        let q = Rationals;
        let (a, b, c, d) = (x(&q, 1, 1), x(&q, 1, 2), x(&q, 2, 1), x(&q, 2, 2));
        let gens = vec![&(&a * &c) - &(&b * &b), &(&a * &d) - &(&b * &c), &(&b * &d) - &(&c * &c)];
        let i = HomogeneousIdeal::new(&q, 2, gens.clone()).unwrap();
        for order in [MonomialOrder::Degrevlex, MonomialOrder::Lex] {
            let gb = buchberger(&i, order, &GroebnerConfig::default()).unwrap();
            for g in &gens {
                assert!(gb.normal_form(g).is_zero());
            }
            assert!(!gb.member(&(&a * &a)).unwrap());
            let again = HomogeneousIdeal::new(&q, 2, gb.basis().to_vec()).unwrap();
            assert_eq!(buchberger(&again, order, &GroebnerConfig::default()).unwrap().basis(), gb.basis());
        }
    }

    #[test]
    fn truncation_and_caps() {
        let q = Rationals;
        let (a, b, c, d) = (x(&q, 1, 1), x(&q, 1, 2), x(&q, 2, 1), x(&q, 2, 2));
        let gens = vec![&(&a * &c) - &(&b * &b), &(&a * &d) - &(&b * &c), &(&b * &d) - &(&c * &c)];
        let i = HomogeneousIdeal::new(&q, 2, gens).unwrap();
        let cfg = GroebnerConfig { degree_bound: Some(2), ..GroebnerConfig::default() };
        let gb = buchberger(&i, MonomialOrder::Lex, &cfg).unwrap();
        assert_eq!(gb.complete_to_degree(), Some(2));
        assert!(gb.member(&(&a * &(&(&a * &c) - &(&b * &b)))).unwrap_err().is_resource_limit());
        let tight = GroebnerConfig { max_basis: 1, ..GroebnerConfig::default() };
        assert!(buchberger(&i, MonomialOrder::Lex, &tight).unwrap_err().is_resource_limit());
    }

    #[test]
    fn agrees_with_graded_engine_n2() {
        let f3 = PrimeField::new(3).unwrap();
        let t1 = trace_invariant(&f3, 1, 2).unwrap();
        let t2 = trace_invariant(&f3, 2, 2).unwrap();
        let i = HomogeneousIdeal::new(&f3, 2, vec![t1.clone(), &x(&f3, 1, 2) * &x(&f3, 1, 2)]).unwrap();
        let gb = buchberger(&i, MonomialOrder::Degrevlex, &GroebnerConfig::default()).unwrap();
        let probes: Vec<Polynomial<PrimeField>> = vec![
            t2.clone(),
            &t2 * &t2,
            &x(&f3, 1, 2) * &t2,
            &x(&f3, 1, 1) * &x(&f3, 1, 2),
            x(&f3, 2, 1).pow(3),
        ];
        for p in &probes {
            assert_eq!(gb.member(p).unwrap(), member(&i, p, &ResourceLimits::default()).unwrap(), "{p}");
        }
    }
}
