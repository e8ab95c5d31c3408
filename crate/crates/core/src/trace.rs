//! Group elements of a right-angled Artin group in shortlex normal form.
//!
//! A [`Trace`] always stores the shortlex-least reduced word of its element
//! (vertex order first, then `v < v^-1`), so element equality is word
//! equality. Normal forms are maintained incrementally: appending a letter to
//! a normal form either cancels the last occurrence of its inverse that can be
//! shuffled to the end, or inserts the letter at the first position after its
//! last dependent letter where it beats the letter already there. Both steps
//! preserve the greedy lexicographic linear extension of the dependence order,
//! which is exactly the shortlex normal form.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::graph::{DefiningGraph, Vertex, VertexSet};

/// A generator or inverse generator. Ordered by vertex, then `v < v^-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(vertex: Vertex, inverse: bool) -> Self {
        debug_assert!(vertex < 64);
        Letter((vertex as u8) << 1 | inverse as u8)
    }

    pub fn generator(vertex: Vertex) -> Self {
        Self::new(vertex, false)
    }

    pub fn from_code(code: u8) -> Self {
        Letter(code)
    }

    /// `2 * vertex + inverse`.
    pub fn code(self) -> u8 {
        self.0
    }

    pub fn vertex(self) -> Vertex {
        (self.0 >> 1) as Vertex
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.vertex(), if self.is_inverse() { "⁻" } else { "" })
    }
}

/// True when the letters do not commute (same vertex, or non-adjacent vertices).
#[inline]
pub(crate) fn dependent(graph: &DefiningGraph, x: Letter, y: Letter) -> bool {
    !graph.adjacent(x.vertex(), y.vertex())
}

/// Right-multiplies a normal form by one letter, keeping it in normal form.
/// Returns `true` when the letter cancelled.
pub fn push_letter(graph: &DefiningGraph, word: &mut Vec<Letter>, letter: Letter) -> bool {
    let mut last_dep = None;
    for j in (0..word.len()).rev() {
        if dependent(graph, word[j], letter) {
            last_dep = Some(j);
            break;
        }
    }
    if let Some(j) = last_dep {
        if word[j] == letter.inverse() {
            word.remove(j);
            return true;
        }
    }
    let start = last_dep.map_or(0, |j| j + 1);
    let pos = (start..word.len())
        .find(|&p| letter < word[p])
        .unwrap_or(word.len());
    word.insert(pos, letter);
    false
}

/// Left-multiplies a reduced word by one letter, keeping it reduced but not
/// necessarily in normal form. Returns `true` when the letter cancelled.
pub fn push_front_reduced(graph: &DefiningGraph, word: &mut Vec<Letter>, letter: Letter) -> bool {
    if let Some(j) = word.iter().position(|&x| dependent(graph, x, letter)) {
        if word[j] == letter.inverse() {
            word.remove(j);
            return true;
        }
    }
    word.insert(0, letter);
    false
}

/// Shortlex normal form of an arbitrary word.
pub fn normal_form(graph: &DefiningGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut word = Vec::with_capacity(letters.len());
    for &l in letters {
        push_letter(graph, &mut word, l);
    }
    word
}

/// Lexicographically least linear extension of the dependence order of a
/// reduced word, i.e. its shortlex normal form without any cancellation.
pub fn shortlex_straighten(graph: &DefiningGraph, reduced: &[Letter]) -> Vec<Letter> {
    let n = reduced.len();
    let mut indegree = vec![0usize; n];
    for j in 0..n {
        for i in 0..j {
            if dependent(graph, reduced[i], reduced[j]) {
                indegree[j] += 1;
            }
        }
    }
    let mut placed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| !placed[i] && indegree[i] == 0)
            .min_by_key(|&i| reduced[i])
            .expect("dependence order is acyclic");
        placed[next] = true;
        out.push(reduced[next]);
        for j in next + 1..n {
            if !placed[j] && dependent(graph, reduced[next], reduced[j]) {
                indegree[j] -= 1;
            }
        }
    }
    out
}

/// An element of `A_Γ` stored as its shortlex normal form.
#[derive(Clone)]
pub struct Trace {
    graph: Arc<DefiningGraph>,
    word: Vec<Letter>,
}

impl PartialEq for Trace {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word && same_graph(&self.graph, &other.graph)
    }
}

impl Eq for Trace {}

impl Hash for Trace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

pub(crate) fn same_graph(a: &Arc<DefiningGraph>, b: &Arc<DefiningGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Trace {
    pub fn identity(graph: &Arc<DefiningGraph>) -> Self {
        Trace {
            graph: Arc::clone(graph),
            word: Vec::new(),
        }
    }

    pub fn letter(graph: &Arc<DefiningGraph>, letter: Letter) -> Self {
        Trace {
            graph: Arc::clone(graph),
            word: vec![letter],
        }
    }

    /// Normalizes an arbitrary sequence of letters.
    pub fn normalize(graph: &Arc<DefiningGraph>, letters: &[Letter]) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.vertex() >= graph.len()) {
            return invalid(format!("letter over vertex index {} not in graph", l.vertex()));
        }
        Ok(Self::from_letters_unchecked(graph, letters))
    }

    pub(crate) fn from_letters_unchecked(graph: &Arc<DefiningGraph>, letters: &[Letter]) -> Self {
        Trace {
            graph: Arc::clone(graph),
            word: normal_form(graph, letters),
        }
    }

    /// Wraps a word already known to be in normal form.
    pub(crate) fn from_normal_form(graph: &Arc<DefiningGraph>, word: Vec<Letter>) -> Self {
        debug_assert_eq!(normal_form(graph, &word), word);
        Trace {
            graph: Arc::clone(graph),
            word,
        }
    }

    /// Parses the word syntax: `"abA"` (uppercase = inverse) for one-letter
    /// vertex names, or whitespace separated `name` / `name^-1` tokens.
    pub fn parse(graph: &Arc<DefiningGraph>, text: &str) -> Result<Self> {
        let letters = parse_letters(graph, text)?;
        Ok(Self::from_letters_unchecked(graph, &letters))
    }

    pub fn graph(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    fn check_same_graph(&self, other: &Trace) -> Result<()> {
        if same_graph(&self.graph, &other.graph) {
            Ok(())
        } else {
            invalid("elements belong to different defining graphs")
        }
    }

    pub fn multiply(&self, other: &Trace) -> Result<Trace> {
        self.check_same_graph(other)?;
        Ok(self.mul(other))
    }

    /// Multiplication without the graph check, for callers that already know
    /// both operands share a graph.
    pub(crate) fn mul(&self, other: &Trace) -> Trace {
        let mut word = self.word.clone();
        for &l in &other.word {
            push_letter(&self.graph, &mut word, l);
        }
        Trace {
            graph: Arc::clone(&self.graph),
            word,
        }
    }

    pub fn mul_letter(&self, letter: Letter) -> Trace {
        let mut word = self.word.clone();
        push_letter(&self.graph, &mut word, letter);
        Trace {
            graph: Arc::clone(&self.graph),
            word,
        }
    }

    pub fn invert(&self) -> Trace {
        let reversed: Vec<Letter> = self.word.iter().rev().map(|l| l.inverse()).collect();
        Trace {
            word: shortlex_straighten(&self.graph, &reversed),
            graph: Arc::clone(&self.graph),
        }
    }

    /// `u^-1 · self · u`.
    pub fn conjugate_by(&self, u: &Trace) -> Trace {
        u.invert().mul(self).mul(u)
    }

    pub fn pow(&self, k: usize) -> Trace {
        let mut out = Trace::identity(&self.graph);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn support(&self) -> VertexSet {
        self.word.iter().map(|l| l.vertex()).collect()
    }

    /// Splits off conjugating letters: returns `(core, conjugator)` with
    /// `self = conjugator · core · conjugator^-1` and `core` cyclically reduced.
    ///
    /// A letter is stripped when some occurrence of `v^e` can be shuffled to
    /// the front while an occurrence of `v^-e` can be shuffled to the back.
    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let g = &*self.graph;
        let mut word = self.word.clone();
        let mut stripped = Vec::new();
        while let Some((front, back)) = strippable_pair(g, &word) {
            stripped.push(word[front]);
            // back > front always: both are occurrences of the same vertex
            word.remove(back);
            word.remove(front);
        }
        CyclicReduction {
            core: Trace {
                word: shortlex_straighten(g, &word),
                graph: Arc::clone(&self.graph),
            },
            conjugator: Trace::from_letters_unchecked(&self.graph, &stripped),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        strippable_pair(&self.graph, &self.word).is_none()
    }

    /// Renders vertex sets with this element's graph.
    pub fn format_set(&self, s: VertexSet) -> String {
        self.graph.format_set(s)
    }
}

/// First occurrence index of a vertex that is minimal in the dependence order
/// paired with a maximal occurrence of its inverse, smallest vertex first.
fn strippable_pair(graph: &DefiningGraph, word: &[Letter]) -> Option<(usize, usize)> {
    let n = word.len();
    let mut best: Option<(usize, usize)> = None;
    for front in 0..n {
        let l = word[front];
        if (0..front).any(|i| dependent(graph, word[i], l)) {
            continue;
        }
        let Some(back) = (front + 1..n).rev().find(|&j| word[j].vertex() == l.vertex()) else {
            continue;
        };
        if word[back] != l.inverse() || (back + 1..n).any(|j| dependent(graph, word[j], l)) {
            continue;
        }
        if best.is_none_or(|(f, _)| l.vertex() < word[f].vertex()) {
            best = Some((front, back));
        }
    }
    best
}

/// `g = conjugator · core · conjugator^-1` with `core` cyclically reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicReduction {
    pub core: Trace,
    pub conjugator: Trace,
}

impl CyclicReduction {
    pub fn recompose(&self) -> Trace {
        self.conjugator.mul(&self.core).mul(&self.conjugator.invert())
    }
}

fn single_char_names(graph: &DefiningGraph) -> bool {
    graph
        .names()
        .iter()
        .all(|n| n.chars().count() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
}

fn parse_letters(graph: &DefiningGraph, text: &str) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        if let Some(name) = token.strip_suffix("^-1") {
            letters.push(Letter::new(graph.vertex(name).map_err(|_| bad_token(token))?, true));
            continue;
        }
        let name = token.strip_suffix("^1").unwrap_or(token);
        if let Ok(v) = graph.vertex(name) {
            letters.push(Letter::generator(v));
            continue;
        }
        for c in token.chars() {
            let letter = if c.is_lowercase() {
                graph.vertex(&c.to_string()).map(Letter::generator)
            } else if c.is_uppercase() {
                graph
                    .vertex(&c.to_lowercase().to_string())
                    .map(|v| Letter::new(v, true))
            } else {
                Err(Error::InvalidInput(String::new()))
            };
            letters.push(letter.map_err(|_| bad_token(token))?);
        }
    }
    Ok(letters)
}

fn bad_token(token: &str) -> Error {
    Error::InvalidInput(format!("unknown or malformed generator token {token:?}"))
}

/// Formats a word in the input syntax.
pub fn format_word(graph: &DefiningGraph, word: &[Letter]) -> String {
    if single_char_names(graph) {
        word.iter()
            .map(|l| {
                let name = graph.name(l.vertex());
                if l.is_inverse() {
                    name.to_uppercase()
                } else {
                    name.to_string()
                }
            })
            .collect()
    } else {
        word.iter()
            .map(|l| {
                let name = graph.name(l.vertex());
                if l.is_inverse() {
                    format!("{name}^-1")
                } else {
                    name.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.graph, &self.word))
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trace({:?})", format_word(&self.graph, &self.word))
    }
}
