//! Separation length and join length of group elements, with certificates.
//!
//! Separation length is the size of the largest pairwise strongly separated
//! family among the walls crossed by a geodesic. Walls of such a family are
//! crossed in a nested order, and along a geodesic a wall meeting `W_i` and
//! `W_k` must cross every `W_j` in between, so it suffices to find the longest
//! chain whose *consecutive* members are strongly separated. Certificates are
//! still re-checked pairwise.
//!
//! Join length is the least number of factors, each in a join subgroup.
//! Factors may be taken geodesic (cancellation between factors only shrinks
//! supports) and each factor may be enlarged to the gate through a maximal
//! join, so a breadth-first search over prefixes whose steps are maximal gates
//! finds the minimum.

use std::collections::{HashMap, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::graph::{JoinWitness, VertexSet};
use crate::heap::OccSet;
use crate::trace::Trace;
use crate::wall::Wall;

/// Default cap on prefixes visited by the join-length search.
pub const DEFAULT_FRONTIER_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    /// Positions in `walls_crossed` order.
    pub positions: Vec<usize>,
    pub walls: Vec<Wall>,
}

impl SeparationCertificate {
    /// Re-checks that every pair of certificate walls is strongly separated.
    pub fn verify(&self) -> bool {
        self.walls.iter().enumerate().all(|(i, w)| {
            self.walls[i + 1..]
                .iter()
                .all(|x| w.strongly_separated(x).unwrap_or(false))
        })
    }
}

/// `g = pieces[0] ⋯ pieces[k-1]`, geodesically, each piece inside its join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub pieces: Vec<Trace>,
    pub witness_joins: Vec<JoinWitness>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Product recomposes to `g`, lengths add up, and each piece's support
    /// lies in a valid join.
    pub fn verify(&self, g: &Trace) -> bool {
        let graph = g.graph();
        if self.pieces.len() != self.witness_joins.len() {
            return false;
        }
        let mut product = Trace::identity(graph);
        for p in &self.pieces {
            match product.multiply(p) {
                Ok(x) => product = x,
                Err(_) => return false,
            }
        }
        product == *g
            && self.pieces.iter().map(Trace::len).sum::<usize>() == g.len()
            && self
                .pieces
                .iter()
                .zip(&self.witness_joins)
                .all(|(p, j)| j.is_valid_in(graph) && j.contains(p.support()))
    }
}

/// `ℓ_S(g)` with a realizing family of walls.
pub fn separation_length(g: &Trace) -> (usize, SeparationCertificate) {
    let walls = g.walls_crossed();
    let n = walls.len();
    let mut best = vec![1usize; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        for i in 0..j {
            if best[i] + 1 > best[j] && walls[i].strongly_separated(&walls[j]).unwrap_or(false) {
                best[j] = best[i] + 1;
                prev[j] = Some(i);
            }
        }
    }
    let Some(end) = (0..n).max_by_key(|&j| (best[j], std::cmp::Reverse(j))) else {
        return (
            0,
            SeparationCertificate {
                positions: vec![],
                walls: vec![],
            },
        );
    };
    let mut positions = vec![end];
    while let Some(p) = prev[*positions.last().unwrap()] {
        positions.push(p);
    }
    positions.reverse();
    let cert = SeparationCertificate {
        walls: positions.iter().map(|&i| walls[i].clone()).collect(),
        positions,
    };
    (best[end], cert)
}

/// `ℓ_J(g)` with a minimal factorization.
pub fn join_length(g: &Trace) -> Result<(usize, Factorization)> {
    let joins = g.graph().maximal_joins()?;
    join_length_with(g, &joins, DEFAULT_FRONTIER_CAP)
}

/// `ℓ_J(g)` over a precomputed list of maximal joins.
pub fn join_length_with(g: &Trace, joins: &[JoinWitness], cap: usize) -> Result<(usize, Factorization)> {
    let graph = g.graph();
    let covered = joins
        .iter()
        .fold(VertexSet::EMPTY, |acc, j| acc.union(j.vertices()));
    if !g.support().is_subset(covered) {
        let bad = g.support().difference(covered);
        return invalid(format!(
            "{g} involves {} which lie in no join subgraph; its join length is undefined",
            graph.format_set(bad)
        ));
    }
    let poset = g.heap_poset();
    let n = poset.len();
    let start = OccSet::empty(n);
    let target = OccSet::full(n);
    // ideal -> (parent ideal, join used)
    let mut parent: HashMap<OccSet, Option<(OccSet, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        if p == target {
            break;
        }
        for (k, join) in joins.iter().enumerate() {
            let q = poset.gate(&p, join.vertices());
            if q == p || parent.contains_key(&q) {
                continue;
            }
            parent.insert(q.clone(), Some((p.clone(), k)));
            if parent.len() > cap {
                return Err(Error::ResourceCap {
                    what: "join-length prefix search".into(),
                    cap,
                });
            }
            queue.push_back(q);
        }
    }
    let Some(mut step) = parent.get(&target).cloned() else {
        return Err(Error::Internal(format!("no join factorization found for {g}")));
    };
    let mut pieces = Vec::new();
    let mut witness_joins = Vec::new();
    let mut cur = target;
    while let Some((p, k)) = step {
        pieces.push(poset.difference_element(&p, &cur));
        witness_joins.push(joins[k]);
        step = parent[&p].clone();
        cur = p;
    }
    pieces.reverse();
    witness_joins.reverse();
    Ok((
        pieces.len(),
        Factorization {
            pieces,
            witness_joins,
        },
    ))
}

/// Both lengths of one element and whether `ℓ_S ≤ ℓ_J ≤ 2ℓ_S + 1` holds.
#[derive(Clone, Debug)]
pub struct LengthReport {
    pub separation: usize,
    pub join: usize,
    pub certificate: SeparationCertificate,
    pub factorization: Factorization,
    pub inequality_holds: bool,
}

pub fn check_length_inequality(g: &Trace) -> Result<LengthReport> {
    let joins = g.graph().maximal_joins()?;
    check_length_inequality_with(g, &joins, DEFAULT_FRONTIER_CAP)
}

pub fn check_length_inequality_with(g: &Trace, joins: &[JoinWitness], cap: usize) -> Result<LengthReport> {
    let (separation, certificate) = separation_length(g);
    let (join, factorization) = join_length_with(g, joins, cap)?;
    Ok(LengthReport {
        separation,
        join,
        certificate,
        factorization,
        inequality_holds: separation <= join && join <= 2 * separation + 1,
    })
}
