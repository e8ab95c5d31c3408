//! The dependence poset of a reduced word and its lattice of order ideals.
//!
//! Occurrence `i` precedes occurrence `j` when `i < j` in the word and the two
//! letters do not commute. Order ideals are exactly the geodesic prefixes of
//! the element, and they form a distributive lattice under union and
//! intersection.
//!
//! The *gate* of an ideal `p` through a vertex set `S` is the largest ideal
//! `q ⊇ p` whose new occurrences all lie over `S`. Ideals with this property
//! are closed under union, so the gate is unique, and `p ⊆ p'` implies
//! `gate(p) ⊆ gate(p')`. Iterating gates therefore decides membership in a
//! product of parabolic subgroups `A_{S_1} ⋯ A_{S_k}`: any geodesic
//! factorization `a_1 ⋯ a_k` has `a_1 ⋯ a_i` below the `i`-th iterated gate.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::graph::{DefiningGraph, VertexSet};
use crate::trace::{dependent, Letter, Trace};

/// A set of occurrence indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OccSet {
    blocks: Vec<u64>,
}

impl OccSet {
    pub fn empty(n: usize) -> Self {
        OccSet {
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn contains(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn is_subset(&self, other: &OccSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &OccSet) -> OccSet {
        OccSet {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(k, &b)| {
            let mut bits = b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(k * 64 + i)
            })
        })
    }
}

impl fmt::Debug for OccSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Dependence poset (heap of pieces) of a [`Trace`].
#[derive(Clone, Debug)]
pub struct HeapPoset {
    graph: Arc<DefiningGraph>,
    letters: Vec<Letter>,
    /// Earlier occurrences each occurrence depends on (not transitively reduced).
    preds: Vec<OccSet>,
    /// Later occurrences depending on each occurrence.
    succs: Vec<OccSet>,
}

impl HeapPoset {
    pub fn new(trace: &Trace) -> Self {
        Self::from_reduced(trace.graph(), trace.word())
    }

    pub(crate) fn from_reduced(graph: &Arc<DefiningGraph>, letters: &[Letter]) -> Self {
        let n = letters.len();
        let mut preds = vec![OccSet::empty(n); n];
        let mut succs = vec![OccSet::empty(n); n];
        for j in 0..n {
            for i in 0..j {
                if dependent(graph, letters[i], letters[j]) {
                    preds[j].insert(i);
                    succs[i].insert(j);
                }
            }
        }
        HeapPoset {
            graph: Arc::clone(graph),
            letters: letters.to_vec(),
            preds,
            succs,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Whether occurrence `i` lies strictly below occurrence `j`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        if i >= j {
            return false;
        }
        let mut below = self.preds[j].clone();
        for k in (0..j).rev() {
            if below.contains(k) {
                below = below.union(&self.preds[k]);
            }
        }
        below.contains(i)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.preds[i].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.succs[i].is_empty()).collect()
    }

    pub fn is_ideal(&self, set: &OccSet) -> bool {
        set.iter().all(|j| self.preds[j].is_subset(set))
    }

    /// Every order ideal, by depth-first extension. Exponential; meant for
    /// small posets and test oracles.
    pub fn ideals(&self) -> Vec<OccSet> {
        let n = self.len();
        let mut out = Vec::new();
        // choose, in index order, whether each occurrence is in the ideal
        fn walk(poset: &HeapPoset, i: usize, cur: &mut OccSet, out: &mut Vec<OccSet>) {
            if i == poset.len() {
                out.push(cur.clone());
                return;
            }
            let mut without = cur.clone();
            walk(poset, i + 1, &mut without, out);
            if poset.preds[i].is_subset(cur) {
                let mut with = cur.clone();
                with.insert(i);
                walk(poset, i + 1, &mut with, out);
            }
        }
        // exclusion of i forbids every successor of i; enforced by the
        // predecessor check when a successor is considered.
        walk(self, 0, &mut OccSet::empty(n), &mut out);
        out
    }

    pub fn ideal_count(&self) -> usize {
        self.ideals().len()
    }

    /// Largest ideal containing `ideal` whose added occurrences lie over `s`.
    pub fn gate(&self, ideal: &OccSet, s: VertexSet) -> OccSet {
        let mut q = ideal.clone();
        for i in 0..self.len() {
            if !q.contains(i) && s.contains(self.letters[i].vertex()) && self.preds[i].is_subset(&q) {
                q.insert(i);
            }
        }
        q
    }

    /// Smallest ideal obtained from the full poset by removing a maximal
    /// suffix whose occurrences lie over `s`.
    pub fn dual_gate(&self, s: VertexSet) -> OccSet {
        let n = self.len();
        let mut removed = OccSet::empty(n);
        for i in (0..n).rev() {
            if s.contains(self.letters[i].vertex()) && self.succs[i].is_subset(&removed) {
                removed.insert(i);
            }
        }
        let mut kept = OccSet::empty(n);
        for i in (0..n).filter(|&i| !removed.contains(i)) {
            kept.insert(i);
        }
        kept
    }

    /// The element spelled by the occurrences of `set`, read in word order.
    pub fn element(&self, set: &OccSet) -> Trace {
        let letters: Vec<Letter> = set.iter().map(|i| self.letters[i]).collect();
        Trace::from_letters_unchecked(&self.graph, &letters)
    }

    /// `p^-1 q` for ideals `p ⊆ q`.
    pub fn difference_element(&self, p: &OccSet, q: &OccSet) -> Trace {
        let letters: Vec<Letter> = q.iter().filter(|&i| !p.contains(i)).map(|i| self.letters[i]).collect();
        Trace::from_letters_unchecked(&self.graph, &letters)
    }

    pub fn support_of(&self, set: &OccSet) -> VertexSet {
        set.iter().map(|i| self.letters[i].vertex()).collect()
    }
}

impl Trace {
    pub fn heap_poset(&self) -> HeapPoset {
        HeapPoset::new(self)
    }

    /// Whether `p` is a geodesic prefix of `self`.
    pub fn has_prefix(&self, p: &Trace) -> bool {
        p.len() + p.invert().mul(self).len() == self.len()
    }

    /// The maximal geodesic prefix `q` of `self` with `p ≤ q` and
    /// `Supp(p^-1 q) ⊆ s`.
    pub fn gate_extension(&self, p: &Trace, s: VertexSet) -> Result<Trace> {
        if !crate::trace::same_graph(self.graph(), p.graph()) {
            return invalid("elements belong to different defining graphs");
        }
        self.graph().check_subset(s)?;
        let rest = p.invert().mul(self);
        if p.len() + rest.len() != self.len() {
            return invalid(format!("{p} is not a geodesic prefix of {self}"));
        }
        let poset = rest.heap_poset();
        let absorbed = poset.gate(&OccSet::empty(poset.len()), s);
        Ok(p.mul(&poset.element(&absorbed)))
    }

    /// Decides `self ∈ A_{S_1} ⋯ A_{S_k}`, returning geodesic pieces
    /// `a_1, …, a_k` with `Supp(a_i) ⊆ S_i` and `Σ|a_i| = |self|` on success.
    pub fn product_membership(&self, sets: &[VertexSet]) -> Result<Option<Vec<Trace>>> {
        for &s in sets {
            self.graph().check_subset(s)?;
        }
        let poset = self.heap_poset();
        Ok(iterated_gates(&poset, sets))
    }
}

pub(crate) fn iterated_gates(poset: &HeapPoset, sets: &[VertexSet]) -> Option<Vec<Trace>> {
    let n = poset.len();
    let mut ideal = OccSet::empty(n);
    let mut pieces = Vec::with_capacity(sets.len());
    for &s in sets {
        let next = poset.gate(&ideal, s);
        pieces.push(poset.difference_element(&ideal, &next));
        ideal = next;
    }
    (ideal.len() == n).then_some(pieces)
}
