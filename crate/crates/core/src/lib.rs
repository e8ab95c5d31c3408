//! Computational toolkit for right-angled Artin groups.
//!
//! Starting from a finite defining graph, the crate provides exact
//! arithmetic in the group (shortlex normal forms, supports, cyclic
//! reduction), the combinatorics of walls in the associated cube complex
//! (intersection and strong separation), separation and join lengths with
//! certificates, a search for rank-one elements in finitely generated
//! subgroups, and empirical divergence profiles of periodic geodesics in the
//! Cayley graph.

pub mod divergence;
pub mod error;
pub mod graph;
pub mod heap;
pub mod io;
pub mod lengths;
pub mod rank_one;
pub mod trace;
pub mod wall;

pub use divergence::{AvoidantSearch, DivergenceProfile, GrowthClass, GrowthFit, ProfileRow, RhoFunction};
pub use error::{Error, Result};
pub use graph::{DefiningGraph, JoinWitness, Vertex, VertexSet};
pub use heap::{HeapPoset, OccSet};
pub use trace::{CyclicReduction, Letter, Trace};
pub use wall::Wall;
