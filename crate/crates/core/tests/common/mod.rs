//! Brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the heap poset, gates or the join enumeration of the
//! library. Group arithmetic goes through `Trace::normalize`/`multiply`,
//! which is itself checked against the shuffle oracle.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::Rng;
use raag_lab::{DefiningGraph, Letter, Trace, VertexSet};

pub const P4: &str = "a-b,b-c,c-d";
pub const SQ: &str = "a-b,b-c,c-d,d-a";
pub const PENT: &str = "a-b,b-c,c-d,d-e,e-a";
pub const TWO_EDGES: &str = "a-b,c-d";

pub fn graph(spec: &str) -> Arc<DefiningGraph> {
    Arc::new(DefiningGraph::parse_adjacency(spec).unwrap())
}

pub fn t(g: &Arc<DefiningGraph>, w: &str) -> Trace {
    Trace::parse(g, w).unwrap()
}

pub fn set(g: &DefiningGraph, names: &str) -> VertexSet {
    names.chars().map(|c| g.vertex(&c.to_string()).unwrap()).collect()
}

pub fn letters(g: &DefiningGraph) -> Vec<Letter> {
    (0..g.len())
        .flat_map(|v| [Letter::new(v, false), Letter::new(v, true)])
        .collect()
}

/// Spheres of radius `0..=radius` about the identity, by BFS in the Cayley graph.
pub fn spheres(g: &Arc<DefiningGraph>, radius: usize) -> Vec<Vec<Trace>> {
    let gens = letters(g);
    let mut seen: HashSet<Trace> = HashSet::new();
    let id = Trace::identity(g);
    seen.insert(id.clone());
    let mut out = vec![vec![id]];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in out.last().unwrap() {
            for &l in &gens {
                let y = x.mul_letter(l);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        out.push(next);
    }
    out
}

pub fn ball(g: &Arc<DefiningGraph>, radius: usize) -> Vec<Trace> {
    spheres(g, radius).into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// word problem by shuffling and cancelling

fn commutes(g: &DefiningGraph, x: u8, y: u8) -> bool {
    g.adjacent((x / 2) as usize, (y / 2) as usize)
}

/// All words obtained from `word` by swapping adjacent commuting letters.
pub fn commutation_class(g: &DefiningGraph, word: &[u8]) -> Vec<Vec<u8>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            if w[i] != w[i + 1] && commutes(g, w[i], w[i + 1]) {
                let mut s = w.clone();
                s.swap(i, i + 1);
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Shortlex representative found by closing under shuffles and cancelling
/// any adjacent `x x^-1` that appears.
pub fn shuffle_normal_form(g: &DefiningGraph, word: &[u8]) -> Vec<u8> {
    let mut word = word.to_vec();
    'outer: loop {
        let class = commutation_class(g, &word);
        for w in &class {
            for i in 0..w.len().saturating_sub(1) {
                if w[i] ^ 1 == w[i + 1] {
                    let mut s = w.clone();
                    s.drain(i..i + 2);
                    word = s;
                    continue 'outer;
                }
            }
        }
        return class.into_iter().min().unwrap();
    }
}

pub fn codes(word: &[Letter]) -> Vec<u8> {
    word.iter().map(|l| l.code()).collect()
}

// ---------------------------------------------------------------------------
// prefixes and products

/// Geodesic prefixes of `g`: `p` with `|p| + |p^-1 g| = |g|`, grown letter by letter.
pub fn prefixes(g: &Trace) -> Vec<Trace> {
    let graph = g.graph();
    let gens = letters(graph);
    let mut layer = vec![Trace::identity(graph)];
    let mut all = layer.clone();
    for k in 0..g.len() {
        let mut next: HashSet<Trace> = HashSet::new();
        for p in &layer {
            for &l in &gens {
                let q = p.mul_letter(l);
                if q.len() == k + 1 && q.invert().multiply(g).unwrap().len() == g.len() - k - 1 {
                    next.insert(q);
                }
            }
        }
        layer = next.into_iter().collect();
        all.extend(layer.iter().cloned());
    }
    all
}

pub fn is_prefix(p: &Trace, g: &Trace) -> bool {
    p.len() + p.invert().multiply(g).unwrap().len() == g.len()
}

/// The prefixes of `g` with `below[i][j] = Supp(p_i^-1 p_j)` whenever `p_i`
/// is a prefix of `p_j`.
pub struct Lattice {
    pub elems: Vec<Trace>,
    pub below: Vec<Vec<Option<VertexSet>>>,
    pub bottom: usize,
    pub top: usize,
}

impl Lattice {
    pub fn new(g: &Trace) -> Self {
        let elems = prefixes(g);
        let n = elems.len();
        let mut below = vec![vec![None; n]; n];
        for i in 0..n {
            let inv = elems[i].invert();
            for j in 0..n {
                if elems[j].len() < elems[i].len() {
                    continue;
                }
                let piece = inv.multiply(&elems[j]).unwrap();
                if piece.len() + elems[i].len() == elems[j].len() {
                    below[i][j] = Some(piece.support());
                }
            }
        }
        let bottom = elems.iter().position(|p| p.is_identity()).unwrap();
        let top = elems.iter().position(|p| p == g).unwrap();
        Lattice { elems, below, bottom, top }
    }

    /// Membership in `A_{S_1} ⋯ A_{S_k}`: a chain of prefixes whose pieces
    /// have supports inside the successive sets.
    pub fn member(&self, sets: &[VertexSet]) -> bool {
        let n = self.elems.len();
        let mut reach = vec![false; n];
        reach[self.bottom] = true;
        for &s in sets {
            let mut next = vec![false; n];
            for i in (0..n).filter(|&i| reach[i]) {
                for (j, slot) in next.iter_mut().enumerate() {
                    if self.below[i][j].is_some_and(|sup| sup.is_subset(s)) {
                        *slot = true;
                    }
                }
            }
            reach = next;
        }
        reach[self.top]
    }

    /// Fewest pieces with joinable supports.
    pub fn join_length(&self, joins: &[(VertexSet, VertexSet)]) -> Option<usize> {
        let n = self.elems.len();
        let mut dist = vec![usize::MAX; n];
        dist[self.bottom] = 0;
        let mut queue = VecDeque::from([self.bottom]);
        while let Some(i) = queue.pop_front() {
            if i == self.top {
                return Some(dist[i]);
            }
            for j in 0..n {
                if dist[j] == usize::MAX && self.below[i][j].is_some_and(|sup| joinable_oracle(joins, sup)) {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// Prefixes `q ≥ p_i` with `Supp(p_i^-1 q) ⊆ s`.
    pub fn extensions(&self, i: usize, s: VertexSet) -> Vec<usize> {
        (0..self.elems.len())
            .filter(|&j| self.below[i][j].is_some_and(|sup| sup.is_subset(s)))
            .collect()
    }
}

/// Checks `Trace::normalize` on every word of length at most `max_len`
/// against the shuffle oracle; returns (words checked, mismatches).
pub fn check_all_words(g: &Arc<DefiningGraph>, max_len: usize) -> (usize, usize) {
    let gens = letters(g);
    // interned oracle normal forms and their letter transitions
    let mut forms: Vec<Vec<u8>> = vec![vec![]];
    let mut ids: HashMap<Vec<u8>, u32> = HashMap::from([(vec![], 0)]);
    let mut next: Vec<Vec<u32>> = vec![vec![u32::MAX; gens.len()]];
    let (mut checked, mut bad) = (0, 0);
    let mut word: Vec<Letter> = Vec::new();
    // DFS frames: (oracle id of the current word, next letter to try)
    let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
    while let Some(frame) = stack.last_mut() {
        let (id, li) = *frame;
        if li == gens.len() || word.len() == max_len {
            stack.pop();
            word.pop();
            continue;
        }
        frame.1 += 1;
        let mut child = next[id as usize][li];
        if child == u32::MAX {
            let mut w = forms[id as usize].clone();
            w.push(gens[li].code());
            let nf = shuffle_normal_form(g, &w);
            child = match ids.get(&nf) {
                Some(&c) => c,
                None => {
                    forms.push(nf.clone());
                    next.push(vec![u32::MAX; gens.len()]);
                    ids.insert(nf, (forms.len() - 1) as u32);
                    (forms.len() - 1) as u32
                }
            };
            next[id as usize][li] = child;
        }
        word.push(gens[li]);
        checked += 1;
        let lib = Trace::normalize(g, &word).unwrap();
        if codes(lib.word()) != forms[child as usize] {
            bad += 1;
        }
        stack.push((child, 0));
    }
    (checked, bad)
}

// ---------------------------------------------------------------------------
// joins

/// Every pair `(A, B)` of disjoint nonempty sets with all `A–B` edges present,
/// with `A` holding the smaller first vertex.
pub fn all_joins(g: &DefiningGraph) -> Vec<(VertexSet, VertexSet)> {
    let n = g.len();
    let mut out = Vec::new();
    // assign each vertex to none / A / B
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let (mut a, mut b) = (VertexSet::EMPTY, VertexSet::EMPTY);
        let mut c = code;
        for v in 0..n {
            match c % 3 {
                1 => a.insert(v),
                2 => b.insert(v),
                _ => {}
            }
            c /= 3;
        }
        if a.is_empty() || b.is_empty() || a.first() > b.first() {
            continue;
        }
        if a.iter().all(|u| b.iter().all(|v| g.adjacent(u, v))) {
            out.push((a, b));
        }
    }
    out
}

pub fn joinable_oracle(joins: &[(VertexSet, VertexSet)], s: VertexSet) -> bool {
    joins.iter().any(|&(a, b)| s.is_subset(a.union(b)))
}

/// Inclusion-maximal vertex sets of joins.
pub fn maximal_join_unions(joins: &[(VertexSet, VertexSet)]) -> HashSet<VertexSet> {
    let unions: HashSet<VertexSet> = joins.iter().map(|&(a, b)| a.union(b)).collect();
    unions
        .iter()
        .copied()
        .filter(|&u| !unions.iter().any(|&w| w != u && u.is_subset(w)))
        .collect()
}

// ---------------------------------------------------------------------------
// lengths

pub fn separation_oracle(g: &Trace) -> usize {
    let walls = g.walls_crossed();
    let n = walls.len();
    let mut sep = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sep[i][j] = walls[i].strongly_separated(&walls[j]).unwrap();
            }
        }
    }
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if members.len() <= best {
            continue;
        }
        if members
            .iter()
            .enumerate()
            .all(|(k, &i)| members[k + 1..].iter().all(|&j| sep[i][j]))
        {
            best = members.len();
        }
    }
    best
}

// ---------------------------------------------------------------------------
// divergence

/// Breadth-first search from both ends through vertices at distance at
/// least `radius` from the identity, one full layer at a time.
pub fn avoidant_bfs(a: &Trace, b: &Trace, radius: usize, max_states: usize) -> Option<usize> {
    if a == b {
        return Some(0);
    }
    let gens = letters(a.graph());
    let mut dist = [HashMap::from([(a.clone(), 0usize)]), HashMap::from([(b.clone(), 0usize)])];
    let mut frontier = [vec![a.clone()], vec![b.clone()]];
    loop {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        if frontier[side].is_empty() {
            return None;
        }
        let mut best: Option<usize> = None;
        let mut next = Vec::new();
        for x in std::mem::take(&mut frontier[side]) {
            let d = dist[side][&x];
            for &l in &gens {
                let y = x.mul_letter(l);
                if y.len() < radius || dist[side].contains_key(&y) {
                    continue;
                }
                if let Some(&e) = dist[1 - side].get(&y) {
                    best = Some(best.map_or(d + 1 + e, |m| m.min(d + 1 + e)));
                }
                dist[side].insert(y.clone(), d + 1);
                next.push(y);
            }
        }
        if best.is_some() {
            return best;
        }
        frontier[side] = next;
        assert!(
            dist[0].len() + dist[1].len() <= max_states,
            "oracle BFS exceeded {max_states} states"
        );
    }
}

// ---------------------------------------------------------------------------
// random inputs

pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Arc<DefiningGraph> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let g = DefiningGraph::new(&names, &edges).unwrap();
        if g.is_connected() {
            return Arc::new(g);
        }
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Arc<DefiningGraph> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Arc::new(DefiningGraph::new(&names, &edges).unwrap())
}

pub fn random_word<R: Rng>(rng: &mut R, g: &Arc<DefiningGraph>, len: usize) -> Trace {
    let gens = letters(g);
    let word: Vec<Letter> = (0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
    Trace::normalize(g, &word).unwrap()
}

/// A random element of exactly the given length.
pub fn random_element<R: Rng>(rng: &mut R, g: &Arc<DefiningGraph>, len: usize) -> Trace {
    let gens = letters(g);
    let mut x = Trace::identity(g);
    while x.len() < len {
        let y = x.mul_letter(gens[rng.gen_range(0..gens.len())]);
        if y.len() > x.len() {
            x = y;
        }
    }
    x
}

/// Every graph on `n` labelled vertices.
pub fn all_graphs(n: usize) -> Vec<Arc<DefiningGraph>> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u32..(1 << pairs.len()))
        .map(|mask| {
            let edges: Vec<(String, String)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &(i, j))| (names[i].clone(), names[j].clone()))
                .collect();
            Arc::new(DefiningGraph::new(&names, &edges).unwrap())
        })
        .collect()
}
