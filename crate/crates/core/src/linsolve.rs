//! Sparse exact elimination over the rationals, used to decide membership in
//! the span of a family of vectors and to recover the combination.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::Rational;

type Sparse<K> = BTreeMap<K, Rational>;

struct Row<K> {
    vector: Sparse<K>,
    combo: Sparse<usize>,
}

/// Incremental echelon form keyed by the leading (largest) key of each row.
pub(crate) struct Echelon<K: Ord + Clone> {
    rows: Vec<Row<K>>,
    pivots: BTreeMap<K, usize>,
}

fn axpy<K: Ord + Clone>(target: &mut Sparse<K>, factor: &Rational, source: &Sparse<K>) {
    for (k, v) in source {
        let entry = target.entry(k.clone()).or_insert_with(Rational::zero);
        *entry -= factor * v;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub(crate) fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut vector: Sparse<K>, mut combo: Sparse<usize>) -> (Sparse<K>, Sparse<usize>) {
        while let Some((lead, coeff)) = vector.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
            let Some(&r) = self.pivots.get(&lead) else { break };
            let row = &self.rows[r];
            let factor = coeff / &row.vector[&lead];
            axpy(&mut vector, &factor, &row.vector);
            axpy(&mut combo, &factor, &row.combo);
        }
        (vector, combo)
    }

    /// Adds generator number `index`; returns false when it was already in the span.
    ///
    /// Rows keep the invariant `row.vector + Σ row.combo_i·generator_i = 0`.
    pub(crate) fn insert(&mut self, index: usize, vector: Sparse<K>) -> bool {
        let mut combo = Sparse::new();
        combo.insert(index, -Rational::from_integer(1.into()));
        let (v, c) = self.reduce(vector, combo);
        let Some(lead) = v.keys().next_back().cloned() else { return false };
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row { vector: v, combo: c });
        true
    }

    /// Coefficients `c_i` with `target = Σ c_i·generator_i`, if any exist.
    pub(crate) fn solve(&self, target: Sparse<K>) -> Option<Sparse<usize>> {
        let (rest, combo) = self.reduce(target, Sparse::new());
        rest.is_empty().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn v(entries: &[(u32, i64)]) -> Sparse<u32> {
        entries.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn span_membership_and_combination() {
        let mut e = Echelon::new();
        assert!(e.insert(0, v(&[(0, 1), (1, 1)])));
        assert!(e.insert(1, v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(2, v(&[(0, 1), (2, -1)])));
        assert_eq!(e.rank(), 2);
        let c = e.solve(v(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(c.get(&0), Some(&int(2)));
        assert_eq!(c.get(&1), Some(&int(3)));
        assert!(e.solve(v(&[(2, 1)])).is_none());
        assert!(e.solve(Sparse::new()).unwrap().is_empty());
    }
}
