//! Sparse exact linear algebra over a base field.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::scalar::{Field, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

/// Adds `c * src` into `dst`, dropping entries that cancel.
pub fn axpy(dst: &mut SparseVec, c: &Scalar, src: &SparseVec) {
    for (&k, v) in src {
        let term = c * v;
        match dst.get_mut(&k) {
            Some(cur) => {
                *cur = &*cur + &term;
                if cur.is_zero() {
                    dst.remove(&k);
                }
            }
            None => {
                if !term.is_zero() {
                    dst.insert(k, term);
                }
            }
        }
    }
}

/// Assigns dense indices to arbitrary hashable keys.
#[derive(Clone, Debug)]
pub struct Interner<K> {
    index: HashMap<K, usize>,
    keys: Vec<K>,
}

impl<K: Clone + Eq + Hash> Default for Interner<K> {
    fn default() -> Self {
        Interner {
            index: HashMap::new(),
            keys: Vec::new(),
        }
    }
}

impl<K: Clone + Eq + Hash> Interner<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn id(&mut self, key: &K) -> usize {
        if let Some(&i) = self.index.get(key) {
            return i;
        }
        self.keys.push(key.clone());
        self.index.insert(key.clone(), self.keys.len() - 1);
        self.keys.len() - 1
    }

    pub fn get(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn key(&self, i: usize) -> &K {
        &self.keys[i]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// Incremental row echelon form. Each stored row remembers which inserted
/// vectors it combines, so dependencies among the inputs come out as kernel vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
    kernel: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(field: &Field) -> Echelon {
        Echelon {
            field: field.clone(),
            rows: BTreeMap::new(),
            inserted: 0,
            kernel: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the current rows; returns the residue and the combination used.
    fn reduce(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        loop {
            let pivot = v.iter().find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = pivot else {
                return (v, combo);
            };
            let (row, row_combo) = &self.rows[&k];
            let factor = -&c;
            axpy(&mut v, &factor, row);
            axpy(&mut combo, &factor, row_combo);
        }
    }

    /// Inserts `v`; returns true when it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        combo.insert(idx, Scalar::one(&self.field));
        let (res, combo) = self.reduce(v, combo);
        let Some((&pivot, lead)) = res.iter().next() else {
            self.kernel.push(combo);
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let scale = |m: SparseVec| m.into_iter().map(|(k, c)| (k, &c * &inv)).collect::<SparseVec>();
        let (row, combo) = (scale(res), scale(combo));
        // keep rows fully reduced at their pivots
        for (other, other_combo) in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                let f = -&c;
                axpy(other, &f, &row);
                axpy(other_combo, &f, &combo);
            }
        }
        self.rows.insert(pivot, (row, combo));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), SparseVec::new()).0.is_empty()
    }

    /// Dependencies found among the inserted vectors, as coefficient vectors over insertion indices.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values().map(|(r, _)| r)
    }
}

pub fn rank(field: &Field, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut ech = Echelon::new(field);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_q(entries: &[(usize, i64)]) -> SparseVec {
        entries
            .iter()
            .map(|&(k, c)| (k, Scalar::from_int(&Field::RATIONAL, c)))
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let mut e = Echelon::new(&Field::RATIONAL);
        assert!(e.insert(vec_q(&[(0, 1), (1, 2)])));
        assert!(e.insert(vec_q(&[(1, 1), (2, 1)])));
        assert!(!e.insert(vec_q(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.kernel().len(), 1);
        let k = &e.kernel()[0];
        let minus_one = Scalar::from_int(&Field::RATIONAL, -1);
        assert_eq!(k.get(&0), Some(&minus_one));
        assert_eq!(k.get(&1), Some(&minus_one));
        assert!(k.get(&2).unwrap().is_one());
        assert!(e.contains(&vec_q(&[(0, 2), (1, 5), (2, 1)])));
        assert!(!e.contains(&vec_q(&[(2, 1)])));
    }

    #[test]
    fn zero_vector_is_a_dependency() {
        let mut e = Echelon::new(&Field::RATIONAL);
        assert!(!e.insert(SparseVec::new()));
        assert_eq!(e.kernel().len(), 1);
    }

    #[test]
    fn interner_is_stable() {
        let mut i = Interner::new();
        assert_eq!(i.id(&"a"), 0);
        assert_eq!(i.id(&"b"), 1);
        assert_eq!(i.id(&"a"), 0);
        assert_eq!(i.key(1), &"b");
    }
}
