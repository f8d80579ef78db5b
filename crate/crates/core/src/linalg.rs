//! Sparse vectors and an incremental row-echelon basis over a field.

use alloc::vec::Vec;

use crate::fields::Field;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<E> {
    entries: Vec<(usize, E)>,
}

impl<E> Default for SparseVec<E> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<E> SparseVec<E> {
    /// Caller guarantees sorted, duplicate-free indices and nonzero values.
    pub fn from_sorted(entries: Vec<(usize, E)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec { entries }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &E)> {
        self.entries.iter().map(|(i, e)| (*i, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &E)> {
        self.entries.first().map(|(i, e)| (*i, e))
    }

    pub fn entries(&self) -> &[(usize, E)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, E)> {
        self.entries
    }
}

/// Outcome of reducing a vector against an [`EchelonBasis`].
#[derive(Clone, Debug)]
pub struct Reduction<E> {
    /// What is left after clearing every pivot column.
    pub residual: SparseVec<E>,
    /// `(stored row, multiplier)` pairs: `input - sum(mult * row) = residual`.
    pub steps: Vec<(usize, E)>,
}

/// Incrementally built row-echelon basis of a span.
///
/// Every stored row is monic at its leading column, and that column is
/// distinct for each row; other entries lie strictly to the right. When
/// provenance tracking is enabled, each stored row also records its
/// expression as a combination of the inserted vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    width: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<usize>>,
    provenance: Option<Vec<SparseVec<F::Elem>>>,
    inserted: usize,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: &F, width: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            width,
            rows: Vec::new(),
            pivot_row: alloc::vec![None; width],
            provenance: None,
            inserted: 0,
        }
    }

    /// Like [`new`](Self::new), but remembers how each row arose from the inputs.
    pub fn with_provenance(field: &F, width: usize) -> Self {
        let mut b = Self::new(field, width);
        b.provenance = Some(Vec::new());
        b
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().filter_map(|r| r.leading().map(|(c, _)| c))
    }

    pub fn reduce(&self, v: &SparseVec<F::Elem>) -> Reduction<F::Elem> {
        let f = &self.field;
        let mut steps = Vec::new();
        let Some((start, _)) = v.leading() else {
            return Reduction { residual: SparseVec::default(), steps };
        };
        let mut acc: Vec<Option<F::Elem>> = alloc::vec![None; self.width];
        for (i, c) in v.iter() {
            acc[i] = Some(c.clone());
        }
        for col in start..self.width {
            let Some(k) = self.pivot_row[col] else { continue };
            let Some(lambda) = acc[col].take() else { continue };
            for &(j, ref c) in &self.rows[k].entries[1..] {
                let cleared = match &mut acc[j] {
                    Some(slot) => {
                        f.sub_mul_assign(slot, &lambda, c);
                        f.is_zero(slot)
                    }
                    empty => {
                        *empty = Some(f.neg(&f.mul(&lambda, c)));
                        false
                    }
                };
                if cleared {
                    acc[j] = None;
                }
            }
            steps.push((k, lambda));
        }
        let residual = acc.into_iter().enumerate().filter_map(|(i, c)| c.map(|c| (i, c))).collect();
        Reduction { residual: SparseVec { entries: residual }, steps }
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).residual.is_empty()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F::Elem>) -> bool {
        let f = self.field.clone();
        let input = self.inserted;
        self.inserted += 1;
        let red = self.reduce(v);
        let Some((lead, lc)) = red.residual.leading() else {
            return false;
        };
        let inv = f.inv(lc).expect("nonzero leading coefficient");
        let row: Vec<(usize, F::Elem)> = red.residual.entries.iter().map(|(i, c)| (*i, f.mul(c, &inv))).collect();
        if let Some(prov) = self.provenance.as_mut() {
            // residual = e_input - sum(lambda_k * row_k), each row_k a combination of inputs
            let mut acc: alloc::collections::BTreeMap<usize, F::Elem> = alloc::collections::BTreeMap::new();
            acc.insert(input, f.one());
            for (k, lambda) in &red.steps {
                for (i, c) in prov[*k].iter() {
                    let slot = acc.entry(i).or_insert_with(|| f.zero());
                    f.sub_mul_assign(slot, lambda, c);
                }
            }
            let combo = acc
                .into_iter()
                .filter(|(_, c)| !f.is_zero(c))
                .map(|(i, c)| (i, f.mul(&c, &inv)))
                .collect();
            prov.push(SparseVec { entries: combo });
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(SparseVec { entries: row });
        true
    }

    /// Expresses `v` as a combination of the inserted vectors, if it lies in
    /// their span. Requires provenance tracking.
    pub fn solve(&self, v: &SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        let prov = self.provenance.as_ref().expect("basis built with provenance");
        let f = &self.field;
        let red = self.reduce(v);
        if !red.residual.is_empty() {
            return None;
        }
        let mut acc: alloc::collections::BTreeMap<usize, F::Elem> = alloc::collections::BTreeMap::new();
        for (k, lambda) in &red.steps {
            for (i, c) in prov[*k].iter() {
                let slot = acc.entry(i).or_insert_with(|| f.zero());
                let t = f.mul(lambda, c);
                f.add_assign(slot, &t);
            }
        }
        Some(SparseVec { entries: acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect() })
    }
}

/// Rank of a family of vectors of the given width.
pub fn rank<F: Field>(field: &F, width: usize, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut b = EchelonBasis::new(field, width);
    for v in vectors {
        b.insert(v);
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};
    use crate::matrix::Matrix;
    use alloc::vec;
    use proptest::prelude::*;

    fn sv<F: Field>(f: &F, dense: &[i64]) -> SparseVec<F::Elem> {
        SparseVec::from_sorted(
            dense.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, f.from_i64(c))).collect(),
        )
    }

    #[test]
    fn rank_small() {
        let q = Rationals;
        let vs = [sv(&q, &[1, 2, 3]), sv(&q, &[2, 4, 6]), sv(&q, &[0, 1, 1])];
        assert_eq!(rank(&q, 3, &vs), 2);
        let f2 = PrimeField::new(2).unwrap();
        let ws = [sv(&f2, &[1, 1, 0]), sv(&f2, &[0, 1, 1]), sv(&f2, &[1, 0, 1])];
        assert_eq!(rank(&f2, 3, &ws), 2);
        assert_eq!(rank(&q, 3, &[sv(&q, &[1, 1, 0]), sv(&q, &[0, 1, 1]), sv(&q, &[1, 0, 1])]), 3);
    }

    #[test]
    fn solve_reproduces_target() {
        let q = Rationals;
        let mut b = EchelonBasis::with_provenance(&q, 4);
        let inputs = [sv(&q, &[1, 1, 0, 0]), sv(&q, &[0, 2, 1, 0]), sv(&q, &[1, 3, 1, 0]), sv(&q, &[0, 0, 0, 5])];
        for v in &inputs {
            b.insert(v);
        }
        assert_eq!(b.rank(), 3);
        let target = sv(&q, &[2, 0, -1, 10]);
        let combo = b.solve(&target).unwrap();
        let mut dense = vec![q.zero(); 4];
        for (i, c) in combo.iter() {
            for (j, x) in inputs[i].iter() {
                q.add_assign(&mut dense[j], &q.mul(c, x));
            }
        }
        assert_eq!(dense, vec![q.from_i64(2), q.zero(), q.from_i64(-1), q.from_i64(10)]);
        assert!(b.solve(&sv(&q, &[0, 0, 1, 0])).is_none());
    }

    proptest! {
        #[test]
        fn matches_dense_rank(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 5), 0..7)) {
            let f = PrimeField::new(3).unwrap();
            let dense = Matrix::from_fn(&f, rows.len(), 5, |i, j| f.from_i64(rows[i][j]));
            let vs: Vec<_> = rows.iter().map(|r| sv(&f, r)).collect();
            prop_assert_eq!(rank(&f, 5, &vs), dense.rank());
            let q = Rationals;
            let dq = Matrix::from_fn(&q, rows.len(), 5, |i, j| q.from_i64(rows[i][j]));
            let vq: Vec<_> = rows.iter().map(|r| sv(&q, r)).collect();
            prop_assert_eq!(rank(&q, 5, &vq), dq.rank());
        }
    }
}
