//! Centralizer classification and a search for rank-one elements.
//!
//! A cyclically reduced element has cyclic centralizer exactly when its
//! support lies in no join: `lk(Supp g)` is empty and the induced graph on
//! `Supp g` is not a join. Such elements have axes of infinite join length,
//! hence act as rank-one isometries.
//!
//! [`find_rank_one`] looks for one inside a finitely generated subgroup by
//! growing the cyclic support of a candidate `c`: while `Supp(c)` is joinable
//! and some generator `h` leaves the join around `c`, replace `c` by
//! `c^k h c^k`. Conjugating letters are pushed into a running conjugator so
//! the candidate always stays cyclically reduced.

use crate::error::{invalid, Error, Result};
use crate::graph::{JoinWitness, VertexSet};
use crate::trace::{same_graph, Trace};

/// Default number of candidate updates before [`find_rank_one`] gives up.
pub const DEFAULT_STEP_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralizerKind {
    Cyclic,
    JoinContained,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerClass {
    pub kind: CentralizerKind,
    /// A join containing `Supp(g) ∪ lk(Supp(g))`, present iff join-contained.
    pub witness: Option<JoinWitness>,
}

/// Classifies the centralizer of the cyclic reduction of `g`.
pub fn centralizer_classification(g: &Trace) -> Result<CentralizerClass> {
    if g.is_identity() {
        return invalid("centralizer classification of the identity");
    }
    let core = g.cyclic_reduce().core;
    let graph = core.graph();
    let support = core.support();
    let split = graph.complement_components(support).len() >= 2;
    let has_link = !graph.link_of_set(support).is_empty();
    let witness = graph.support_join_witness(support)?;
    debug_assert_eq!(split || has_link, witness.is_some());
    if split || has_link {
        Ok(CentralizerClass {
            kind: CentralizerKind::JoinContained,
            witness,
        })
    } else {
        Ok(CentralizerClass {
            kind: CentralizerKind::Cyclic,
            witness: None,
        })
    }
}

/// Whether the cyclic reduction of `g` lies in no join subgroup.
pub fn is_rank_one(g: &Trace) -> Result<bool> {
    if g.is_identity() {
        return invalid("rank-one test of the identity");
    }
    let core = g.cyclic_reduce().core;
    Ok(core.graph().support_join_witness(core.support())?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankOneKind {
    RankOneElement,
    ContainedInJoin,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct RankOneResult {
    pub kind: RankOneKind,
    /// A rank-one element of the subgroup, written in the original generators' frame.
    pub element: Option<Trace>,
    /// For `ContainedInJoin`: a join containing every conjugated generator.
    pub witness: Option<JoinWitness>,
    /// `t` such that the search ran on `t^-1 G t`.
    pub conjugator: Option<Trace>,
    pub steps: usize,
    pub diagnostics: Vec<String>,
}

struct Search {
    gens: Vec<Trace>,
    conjugator: Trace,
    candidate: Trace,
}

impl Search {
    fn conjugate(&mut self, u: &Trace) {
        if u.is_identity() {
            return;
        }
        for h in &mut self.gens {
            *h = h.conjugate_by(u);
        }
        self.candidate = self.candidate.conjugate_by(u);
        self.conjugator = self.conjugator.mul(u);
    }
}

fn cyclic_support(x: &Trace) -> VertexSet {
    x.cyclic_reduce().core.support()
}

/// Searches the subgroup generated by `generators` for a rank-one element.
pub fn find_rank_one(generators: &[Trace]) -> Result<RankOneResult> {
    find_rank_one_capped(generators, DEFAULT_STEP_CAP)
}

pub fn find_rank_one_capped(generators: &[Trace], step_cap: usize) -> Result<RankOneResult> {
    let Some(first) = generators.first() else {
        return invalid("find_rank_one needs at least one generator");
    };
    let graph = first.graph().clone();
    if generators.iter().any(|h| !same_graph(h.graph(), &graph)) {
        return invalid("generators belong to different defining graphs");
    }
    let gens: Vec<Trace> = generators.iter().filter(|h| !h.is_identity()).cloned().collect();
    if gens.is_empty() {
        return invalid("every generator is the identity");
    }
    let mut diagnostics = Vec::new();
    if !graph.is_connected() {
        diagnostics.push("defining graph is disconnected; rank-one detection via join length assumes a connected graph".to_string());
    }
    let all_commute = gens
        .iter()
        .enumerate()
        .all(|(i, x)| gens[i + 1..].iter().all(|y| x.mul(y) == y.mul(x)));
    if all_commute {
        diagnostics.push("generators commute pairwise; the subgroup may be abelian".to_string());
    }

    // largest cyclic support first, then shortlex
    let candidate = gens
        .iter()
        .max_by(|x, y| {
            cyclic_support(x)
                .len()
                .cmp(&cyclic_support(y).len())
                .then_with(|| y.word().cmp(x.word()))
        })
        .cloned()
        .expect("nonempty");
    let mut search = Search {
        gens,
        conjugator: Trace::identity(&graph),
        candidate,
    };

    let mut steps = 0;
    while steps < step_cap {
        steps += 1;
        let reduction = search.candidate.cyclic_reduce();
        search.conjugate(&reduction.conjugator);
        debug_assert!(search.candidate.is_cyclically_reduced());
        let c = search.candidate.clone();
        let support = c.support();
        if graph.support_join_witness(support)?.is_none() {
            let t = &search.conjugator;
            return Ok(RankOneResult {
                kind: RankOneKind::RankOneElement,
                element: Some(t.mul(&c).mul(&t.invert())),
                witness: None,
                conjugator: Some(t.clone()),
                steps,
                diagnostics,
            });
        }
        let all = search
            .gens
            .iter()
            .fold(support, |acc, h| acc.union(h.support()));
        if let Some(w) = graph.support_join_witness(all)? {
            return Ok(RankOneResult {
                kind: RankOneKind::ContainedInJoin,
                element: None,
                witness: Some(w),
                conjugator: Some(search.conjugator.clone()),
                steps,
                diagnostics,
            });
        }
        let centralizer_join = support.union(graph.link_of_set(support));
        let Some(idx) = search
            .gens
            .iter()
            .position(|h| !h.support().is_subset(centralizer_join))
        else {
            return Err(Error::Internal(
                "no generator leaves the join around the candidate, yet the generators span no join".into(),
            ));
        };

        let mut k = search.gens[idx].len() + 1;
        let mut adjusted = false;
        loop {
            let h = &search.gens[idx];
            let x = c.pow(k).mul(h).mul(&c.pow(k));
            let grown = cyclic_support(&x);
            if support.is_subset(grown) && grown != support {
                search.candidate = x;
                break;
            }
            if steps >= step_cap {
                break;
            }
            steps += 1;
            // An initial piece of h's conjugator that commutes with c can
            // cancel against the powers of c; conjugate it away once.
            let a = h.cyclic_reduce().conjugator;
            let commuting = a.gate_extension(&Trace::identity(&graph), graph.link_of_set(support))?;
            if !adjusted && !commuting.is_identity() {
                search.conjugate(&commuting);
                adjusted = true;
            } else {
                k *= 2;
            }
        }
    }
    Ok(RankOneResult {
        kind: RankOneKind::Undecided,
        element: None,
        witness: None,
        conjugator: Some(search.conjugator.clone()),
        steps,
        diagnostics,
    })
}
