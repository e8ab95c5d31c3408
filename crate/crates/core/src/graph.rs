//! Defining graphs: links, stars, join decompositions and maximal joins.
//!
//! Vertices are dense indices `0..n` in the order the caller listed them;
//! that order is the shortlex order used by every canonical form in the crate.
//! Vertex sets are 64-bit masks, so a graph has at most 64 vertices.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{invalid, Error, Result};

pub type Vertex = usize;

/// Largest number of vertices a [`DefiningGraph`] may have.
pub const MAX_VERTICES: usize = 64;

/// Default cap on the number of closed bipartite pairs visited by [`DefiningGraph::maximal_joins`].
pub const DEFAULT_JOIN_CAP: usize = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: Vertex) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    /// The first `n` vertices.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: Vertex) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: Vertex) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<Vertex> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as Vertex)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as Vertex;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A nontrivial join `side_a * side_b`: both sides nonempty, disjoint, and
/// every vertex of one side adjacent to every vertex of the other.
///
/// Sides are stored in a canonical order (the side holding the smallest
/// vertex comes first), so two witnesses for the same split compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JoinWitness {
    pub side_a: VertexSet,
    pub side_b: VertexSet,
}

impl JoinWitness {
    pub fn new(a: VertexSet, b: VertexSet) -> Self {
        debug_assert!(!a.is_empty() && !b.is_empty() && a.is_disjoint(b));
        if a.first() < b.first() {
            JoinWitness { side_a: a, side_b: b }
        } else {
            JoinWitness { side_a: b, side_b: a }
        }
    }

    pub fn vertices(&self) -> VertexSet {
        self.side_a.union(self.side_b)
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        s.is_subset(self.vertices())
    }

    /// Direct adjacency check of the complete-bipartite condition.
    pub fn is_valid_in(&self, graph: &DefiningGraph) -> bool {
        !self.side_a.is_empty()
            && !self.side_b.is_empty()
            && self.side_a.is_disjoint(self.side_b)
            && self.vertices().is_subset(graph.all())
            && self
                .side_a
                .iter()
                .all(|u| self.side_b.is_subset(graph.neighbors(u)))
    }

    /// Same join up to swapping sides.
    pub fn same_split(&self, a: VertexSet, b: VertexSet) -> bool {
        (self.side_a == a && self.side_b == b) || (self.side_a == b && self.side_b == a)
    }
}

/// A finite simplicial graph with ordered vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adjacency: Vec<VertexSet>,
}

impl fmt::Debug for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(u, v)| format!("{}-{}", self.names[u], self.names[v]))
            .collect();
        write!(f, "DefiningGraph[{}]({})", self.names.join(","), edges.join(","))
    }
}

impl DefiningGraph {
    /// Builds a graph from vertex names (in shortlex order) and edges by name.
    ///
    /// Rejects duplicate vertices, duplicate edges, self-loops and edges
    /// mentioning unknown vertices.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        if vertices.len() > MAX_VERTICES {
            return invalid(format!(
                "graph has {} vertices; at most {MAX_VERTICES} are supported",
                vertices.len()
            ));
        }
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = HashMap::new();
        for v in vertices {
            let name = v.as_ref().trim();
            if name.is_empty() {
                return invalid("empty vertex name");
            }
            if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return invalid(format!("vertex name {name:?} must be alphanumeric"));
            }
            if index.insert(name.to_string(), names.len()).is_some() {
                return invalid(format!("duplicate vertex {name:?}"));
            }
            names.push(name.to_string());
        }
        let mut adjacency = vec![VertexSet::EMPTY; names.len()];
        for (u, v) in edges {
            let (u, v) = (u.as_ref().trim(), v.as_ref().trim());
            let iu = *index
                .get(u)
                .ok_or_else(|| Error::InvalidInput(format!("edge references unknown vertex {u:?}")))?;
            let iv = *index
                .get(v)
                .ok_or_else(|| Error::InvalidInput(format!("edge references unknown vertex {v:?}")))?;
            if iu == iv {
                return invalid(format!("self-loop at {u:?}"));
            }
            if adjacency[iu].contains(iv) {
                return invalid(format!("duplicate edge {u}-{v}"));
            }
            adjacency[iu].insert(iv);
            adjacency[iv].insert(iu);
        }
        Ok(DefiningGraph {
            names,
            index,
            adjacency,
        })
    }

    /// Parses the one-line shorthand `"a-b,b-c,c-d"`.
    ///
    /// Vertices are ordered by first appearance; a bare token such as `"e"`
    /// declares an isolated vertex.
    pub fn parse_adjacency(text: &str) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let note = |name: &str, vertices: &mut Vec<String>| {
            if !vertices.iter().any(|v| v == name) {
                vertices.push(name.to_string());
            }
        };
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = token.split('-').map(str::trim).collect();
            match parts.as_slice() {
                [v] => note(v, &mut vertices),
                [u, v] if !u.is_empty() && !v.is_empty() => {
                    note(u, &mut vertices);
                    note(v, &mut vertices);
                    edges.push((u.to_string(), v.to_string()));
                }
                _ => return invalid(format!("malformed adjacency token {token:?}")),
            }
        }
        Self::new(&vertices, &edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex {name:?}")))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n.as_ref())).collect()
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    /// `{a,b}` style rendering.
    pub fn format_set(&self, s: VertexSet) -> String {
        format!("{{{}}}", self.set_names(s).join(","))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.len()).flat_map(move |u| {
            self.adjacency[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].contains(v)
    }

    /// Generators commute iff equal or adjacent.
    pub fn commute(&self, u: Vertex, v: Vertex) -> bool {
        u == v || self.adjacent(u, v)
    }

    /// Neighbors without range checking.
    pub fn neighbors(&self, v: Vertex) -> VertexSet {
        self.adjacency[v]
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            invalid(format!("vertex index {v} out of range (graph has {})", self.len()))
        }
    }

    pub fn check_subset(&self, s: VertexSet) -> Result<()> {
        if s.is_subset(self.all()) {
            Ok(())
        } else {
            invalid(format!("vertex set {s:?} is not a subset of the graph's vertices"))
        }
    }

    pub fn link(&self, v: Vertex) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v])
    }

    pub fn star(&self, v: Vertex) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].with(v))
    }

    /// Vertices adjacent to every vertex of `s`. For empty `s` this is every vertex.
    pub fn common_neighbors(&self, s: VertexSet) -> VertexSet {
        s.iter()
            .fold(self.all(), |acc, v| acc.intersection(self.adjacency[v]))
    }

    /// `lk(S)`: vertices outside `s` adjacent to all of `s` (empty when `s` is).
    pub fn link_of_set(&self, s: VertexSet) -> VertexSet {
        if s.is_empty() {
            VertexSet::EMPTY
        } else {
            self.common_neighbors(s).difference(s)
        }
    }

    /// Connected components of the complement of the induced graph on `s`,
    /// in order of their smallest vertex.
    pub fn complement_components(&self, s: VertexSet) -> Vec<VertexSet> {
        self.components_with(s, |v| s.difference(self.adjacency[v]).difference(VertexSet::singleton(v)))
    }

    /// Connected components of the induced graph on `s`.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        self.components_with(s, |v| s.intersection(self.adjacency[v]))
    }

    fn components_with(&self, s: VertexSet, step: impl Fn(Vertex) -> VertexSet) -> Vec<VertexSet> {
        let mut remaining = s;
        let mut out = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::singleton(start);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in step(v).difference(comp).iter() {
                    comp.insert(w);
                    queue.push_back(w);
                }
            }
            remaining = remaining.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.all()).len() <= 1
    }

    pub fn has_edge(&self) -> bool {
        self.adjacency.iter().any(|s| !s.is_empty())
    }

    /// Splits the whole graph as a nontrivial join, if possible.
    ///
    /// The graph is a join iff its complement is disconnected; the witness is
    /// the first complement component against the rest.
    pub fn join_decomposition(&self) -> Result<Option<JoinWitness>> {
        if self.is_empty() {
            return invalid("join decomposition of the empty graph");
        }
        let comps = self.complement_components(self.all());
        if comps.len() < 2 {
            return Ok(None);
        }
        Ok(Some(JoinWitness::new(comps[0], self.all().difference(comps[0]))))
    }

    /// A nontrivial join subgraph containing `s`, if one exists.
    ///
    /// `s` lies in a join `A * B` iff it meets both sides (the complement of
    /// the induced graph on `s` is disconnected) or it sits inside one side
    /// (some vertex outside `s` is adjacent to all of `s`). The witness
    /// returned is closed under common neighbors, so it also contains
    /// `s ∪ lk(s)`.
    pub fn support_join_witness(&self, s: VertexSet) -> Result<Option<JoinWitness>> {
        self.check_subset(s)?;
        if s.is_empty() {
            return Ok((0..self.len())
                .find(|&v| !self.adjacency[v].is_empty())
                .map(|v| self.close_pair(VertexSet::singleton(v))));
        }
        let comps = self.complement_components(s);
        if comps.len() >= 2 {
            let b = s.difference(comps[0]);
            // A = N(B) contains comps[0], B' = N(A) contains B.
            return Ok(Some(self.close_pair(b)));
        }
        let common = self.common_neighbors(s);
        if common.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.close_pair(common)))
    }

    pub fn is_joinable(&self, s: VertexSet) -> bool {
        matches!(self.support_join_witness(s), Ok(Some(_)))
    }

    /// `(N(N(x)), N(x))` for `x` with nonempty common neighborhood.
    fn close_pair(&self, x: VertexSet) -> JoinWitness {
        let b = self.common_neighbors(x);
        let a = self.common_neighbors(b);
        JoinWitness::new(a, b)
    }

    pub fn maximal_joins(&self) -> Result<Vec<JoinWitness>> {
        self.maximal_joins_capped(DEFAULT_JOIN_CAP)
    }

    /// All inclusion-maximal nontrivial join subgraphs, one witness per vertex set.
    ///
    /// Every join `A * B` sits inside the closed pair `(N(B), N(N(B)))`, so the
    /// maximal joins are among the closed pairs `A = N(N(A))`. Those are
    /// enumerated by closing single vertices and then closing `A ∪ {v}` for
    /// every closed `A` found; each closed set is reachable that way.
    pub fn maximal_joins_capped(&self, cap: usize) -> Result<Vec<JoinWitness>> {
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let closure = |x: VertexSet| self.common_neighbors(self.common_neighbors(x));
        for v in 0..self.len() {
            if self.adjacency[v].is_empty() {
                continue;
            }
            let c = closure(VertexSet::singleton(v));
            if seen.insert(c.bits()) {
                queue.push_back(c);
            }
        }
        while let Some(a) = queue.pop_front() {
            if seen.len() > cap {
                return Err(Error::ResourceCap {
                    what: "closed join pairs".into(),
                    cap,
                });
            }
            for v in self.all().difference(a).iter() {
                let grown = a.with(v);
                if self.common_neighbors(grown).is_empty() {
                    continue;
                }
                let c = closure(grown);
                if seen.insert(c.bits()) {
                    queue.push_back(c);
                }
            }
        }
        let pairs: Vec<JoinWitness> = seen
            .iter()
            .map(|&bits| {
                let a = VertexSet::from_bits(bits);
                JoinWitness::new(a, self.common_neighbors(a))
            })
            .collect();
        let mut out: Vec<JoinWitness> = Vec::new();
        for p in &pairs {
            let u = p.vertices();
            let dominated = pairs.iter().any(|q| u != q.vertices() && u.is_subset(q.vertices()));
            if !dominated && !out.iter().any(|q| q.vertices() == u) {
                out.push(*p);
            }
        }
        out.sort_by_key(|w| {
            (
                w.vertices().iter().collect::<Vec<_>>(),
                w.side_a.iter().collect::<Vec<_>>(),
            )
        });
        Ok(out)
    }
}
