//! Walls (hyperplanes) of the cube complex, encoded combinatorially.
//!
//! The wall `g·H_v` is stabilized by the link subgroup `L_v = A_{lk(v)}`, so
//! it is determined by the type `v` and the coset `g·L_v`. A coset is stored
//! through its unique minimal representative: `g` with its maximal geodesic
//! suffix over `lk(v)` stripped.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::graph::{DefiningGraph, Vertex};
use crate::heap::iterated_gates;
use crate::trace::{same_graph, Trace};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Wall {
    wall_type: Vertex,
    rep: Trace,
}

impl Wall {
    /// The wall `g·H_v`.
    pub fn new(g: &Trace, v: Vertex) -> Result<Wall> {
        let lk = g.graph().link(v)?;
        let poset = g.heap_poset();
        let kept = poset.dual_gate(lk);
        Ok(Wall {
            wall_type: v,
            rep: poset.element(&kept),
        })
    }

    /// The standard wall `H_v` through the edge from the identity to `v`.
    pub fn standard(graph: &Arc<DefiningGraph>, v: Vertex) -> Result<Wall> {
        Wall::new(&Trace::identity(graph), v)
    }

    pub fn wall_type(&self) -> Vertex {
        self.wall_type
    }

    pub fn rep(&self) -> &Trace {
        &self.rep
    }

    /// Left translate `h·W`.
    pub fn translate(&self, h: &Trace) -> Result<Wall> {
        Wall::new(&h.multiply(&self.rep)?, self.wall_type)
    }

    fn offset_to(&self, other: &Wall) -> Result<Trace> {
        if !same_graph(self.rep.graph(), other.rep.graph()) {
            return invalid("walls belong to different defining graphs");
        }
        Ok(self.rep.invert().mul(&other.rep))
    }

    /// `v, w` adjacent and `rep_1^-1 rep_2 ∈ L_v L_w`.
    pub fn intersects(&self, other: &Wall) -> Result<bool> {
        let offset = self.offset_to(other)?;
        let graph = self.rep.graph();
        let (v, w) = (self.wall_type, other.wall_type);
        if !graph.adjacent(v, w) {
            return Ok(false);
        }
        let sets = [graph.neighbors(v), graph.neighbors(w)];
        Ok(iterated_gates(&offset.heap_poset(), &sets).is_some())
    }

    /// No wall meets both: for every `u ∈ st(v) ∩ st(w)`,
    /// `rep_1^-1 rep_2 ∉ L_v L_u L_w`. This also covers the two walls meeting
    /// each other (take `H_3` to be one of them).
    pub fn strongly_separated(&self, other: &Wall) -> Result<bool> {
        if self == other {
            return invalid(format!("strong separation of the wall {self} with itself"));
        }
        Ok(self.bridging_vertex(other)?.is_none())
    }

    /// Some `u ∈ st(v) ∩ st(w)` such that a wall of type `u` meets both walls.
    pub fn bridging_vertex(&self, other: &Wall) -> Result<Option<Vertex>> {
        let offset = self.offset_to(other)?;
        let graph = self.rep.graph();
        let (v, w) = (self.wall_type, other.wall_type);
        let common = graph.star(v)?.intersection(graph.star(w)?);
        if common.is_empty() {
            return Ok(None);
        }
        let poset = offset.heap_poset();
        Ok(common.iter().find(|&u| {
            let sets = [graph.neighbors(v), graph.neighbors(u), graph.neighbors(w)];
            iterated_gates(&poset, &sets).is_some()
        }))
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.rep.graph().name(self.wall_type);
        if self.rep.is_identity() {
            write!(f, "{name} @ 1")
        } else {
            write!(f, "{name} @ {}", self.rep)
        }
    }
}

impl fmt::Debug for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Wall({self})")
    }
}

impl Trace {
    /// Walls crossed by the edge path spelling the normal form, in order.
    ///
    /// The edge from `h` to `h·v` crosses `h·H_v`; the edge from `h` to
    /// `h·v^-1` crosses `h·v^-1·H_v`.
    pub fn walls_crossed(&self) -> Vec<Wall> {
        let graph = self.graph();
        let mut walls = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let letter = self.word()[i];
            // prefixes of a normal form are normal forms
            let mut prefix = self.word()[..i].to_vec();
            if letter.is_inverse() {
                crate::trace::push_letter(graph, &mut prefix, letter);
            }
            let at = Trace::from_normal_form(graph, prefix);
            walls.push(Wall::new(&at, letter.vertex()).expect("letter vertex lies in graph"));
        }
        walls
    }

    /// The wall `self·H_v`.
    pub fn wall(&self, v: Vertex) -> Result<Wall> {
        Wall::new(self, v)
    }
}

/// Pairwise relation matrices over a list of walls, `[i][j]`.
pub fn relation_matrices(walls: &[Wall]) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let n = walls.len();
    let mut meets = vec![vec![false; n]; n];
    let mut separated = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            meets[i][j] = walls[i].intersects(&walls[j]).unwrap_or(false);
            separated[i][j] = walls[i].strongly_separated(&walls[j]).unwrap_or(false);
        }
    }
    (meets, separated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(spec: &str) -> Arc<DefiningGraph> {
        Arc::new(DefiningGraph::parse_adjacency(spec).unwrap())
    }
    fn t(g: &Arc<DefiningGraph>, w: &str) -> Trace {
        Trace::parse(g, w).unwrap()
    }
    fn wall(g: &Arc<DefiningGraph>, w: &str, v: &str) -> Wall {
        t(g, w).wall(g.vertex(v).unwrap()).unwrap()
    }
    const P4: &str = "a-b,b-c,c-d";
    const SQ: &str = "a-b,b-c,c-d,d-a";
    const PENT: &str = "a-b,b-c,c-d,d-e,e-a";

    #[test]
    fn canonical_walls() {
        let p4 = graph(P4);
        for v in ["a", "b", "c", "d"] {
            assert!(wall(&p4, "", v).rep().is_identity());
        }
        assert_eq!(wall(&p4, "a", "b"), wall(&p4, "", "b"));
        assert_eq!(wall(&p4, "a", "d").rep(), &t(&p4, "a"));
        assert_eq!(wall(&p4, "a", "d").to_string(), "d @ a");
        assert!(t(&p4, "a").wall(9).is_err());
    }

    #[test]
    fn crossed_walls() {
        let p4 = graph(P4);
        assert!(Trace::identity(&p4).walls_crossed().is_empty());
        assert_eq!(
            t(&p4, "ab").walls_crossed(),
            vec![wall(&p4, "", "a"), wall(&p4, "", "b")]
        );
        assert_eq!(
            t(&p4, "ad").walls_crossed(),
            vec![wall(&p4, "", "a"), wall(&p4, "a", "d")]
        );
        // inverse letter: edge from 1 to a^-1 crosses a^-1 H_a
        assert_eq!(t(&p4, "A").walls_crossed(), vec![wall(&p4, "A", "a")]);
    }

    #[test]
    fn intersection_examples() {
        let p4 = graph(P4);
        assert!(wall(&p4, "", "a").intersects(&wall(&p4, "", "b")).unwrap());
        assert!(!wall(&p4, "", "a").intersects(&wall(&p4, "a", "d")).unwrap());
        let sq = graph(SQ);
        assert!(!wall(&sq, "", "a").intersects(&wall(&sq, "", "c")).unwrap());
        assert!(wall(&p4, "", "a").intersects(&wall(&graph(PENT), "", "b")).is_err());
    }

    #[test]
    fn separation_examples() {
        let pent = graph(PENT);
        assert!(wall(&pent, "", "a")
            .strongly_separated(&wall(&pent, "da", "c"))
            .unwrap());
        let p4 = graph(P4);
        assert!(wall(&p4, "", "a")
            .strongly_separated(&wall(&p4, "a", "d"))
            .unwrap());
        let w = wall(&p4, "", "a");
        assert!(w.strongly_separated(&w).is_err());
        let sq = graph(SQ);
        assert!(!wall(&sq, "", "a")
            .strongly_separated(&wall(&sq, "ac", "a"))
            .unwrap());
    }
}
