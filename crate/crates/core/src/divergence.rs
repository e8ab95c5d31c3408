//! Empirical divergence of periodic geodesics in the Cayley graph.
//!
//! For a cyclically reduced block `w`, the bi-infinite geodesic `α` through
//! the identity reads `…w w w…`, parametrized by edge count. The divergence
//! row at `r` is the length of a shortest edge path from `α(-r)` to `α(r)`
//! whose vertices all stay at distance at least `ρ(r)` from `α(0) = 1`.
//!
//! Shortest avoidant paths are found by a best-first search over canonical
//! forms with the word distance to the target as heuristic. That heuristic is
//! a lower bound on the avoidant distance and changes by exactly one along
//! every edge, so the first time the target is popped its distance is exact.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use rustc_hash::FxHashMap;

use crate::error::{invalid, Error, Result};
use crate::graph::DefiningGraph;
use crate::trace::{dependent, normal_form, push_letter, Letter, Trace};

/// Default cap on distinct states visited by one avoidant search.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// `ρ(r) = δ r − λ` with `0 < δ < 1` and `λ ≥ 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RhoFunction {
    delta: Ratio<i64>,
    lambda: Ratio<i64>,
}

impl RhoFunction {
    pub fn new(delta: Ratio<i64>, lambda: Ratio<i64>) -> Result<Self> {
        if delta <= Ratio::from_integer(0) || delta >= Ratio::from_integer(1) {
            return invalid(format!("delta must lie in (0, 1), got {delta}"));
        }
        if lambda < Ratio::from_integer(0) {
            return invalid(format!("lambda must be nonnegative, got {lambda}"));
        }
        Ok(RhoFunction { delta, lambda })
    }

    /// Parses values such as `"1/2"`, `"2"` or `"0.5"`.
    pub fn parse(delta: &str, lambda: &str) -> Result<Self> {
        Self::new(parse_rational(delta)?, parse_rational(lambda)?)
    }

    pub fn delta(&self) -> Ratio<i64> {
        self.delta
    }

    pub fn lambda(&self) -> Ratio<i64> {
        self.lambda
    }

    /// `max(0, ⌊δ r − λ⌋)`.
    pub fn radius(&self, r: u32) -> u32 {
        let value = (self.delta * Ratio::from_integer(r as i64) - self.lambda).floor();
        (*value.numer()).max(0) as u32
    }
}

impl Default for RhoFunction {
    /// `ρ(r) = r/2 − 2`.
    fn default() -> Self {
        RhoFunction {
            delta: Ratio::new(1, 2),
            lambda: Ratio::from_integer(2),
        }
    }
}

impl fmt::Display for RhoFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·r − {}", self.delta, self.lambda)
    }
}

pub fn parse_rational(text: &str) -> Result<Ratio<i64>> {
    let text = text.trim();
    if let Ok(r) = Ratio::<i64>::from_str(text) {
        return Ok(r);
    }
    let bad = || Error::InvalidInput(format!("cannot parse {text:?} as a rational number"));
    let (int, frac) = text.split_once('.').ok_or_else(bad)?;
    if frac.is_empty() || frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = int.starts_with('-');
    let whole: i64 = if int.is_empty() || int == "-" {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let denom = 10i64.pow(frac.len() as u32);
    let frac: i64 = frac.parse().map_err(|_| bad())?;
    let magnitude = Ratio::new(whole.abs() * denom + frac, denom);
    Ok(if negative { -magnitude } else { magnitude })
}

/// The point at parameter `t` on the axis `…w w w…` through the identity.
///
/// Checks that the relevant power of `w` is geodesic.
pub fn periodic_geodesic_point(w: &Trace, t: i64) -> Result<Trace> {
    if w.is_identity() {
        return invalid("periodic geodesic of the identity");
    }
    if !w.is_cyclically_reduced() {
        return invalid(format!("{w} is not cyclically reduced"));
    }
    let steps = t.unsigned_abs() as usize;
    let block = if t >= 0 { w.clone() } else { w.invert() };
    let reps = steps.div_ceil(block.len());
    let mut letters = Vec::with_capacity(reps * block.len());
    for _ in 0..reps {
        letters.extend_from_slice(block.word());
    }
    let power = normal_form(block.graph(), &letters);
    if power.len() != letters.len() {
        return Err(Error::Internal(format!(
            "power {reps} of {block} has length {} instead of {}",
            power.len(),
            letters.len()
        )));
    }
    // the concatenated block word is geodesic, so its prefixes are too
    let point = Trace::normalize(block.graph(), &letters[..steps])?;
    if point.len() != steps {
        return Err(Error::Internal(format!("axis point at {t} is not geodesic")));
    }
    Ok(point)
}

/// Outcome of one avoidant shortest-path search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AvoidantSearch {
    /// `None` when the state cap was exhausted (or no path exists).
    pub length: Option<usize>,
    /// Distinct group elements discovered.
    pub states: usize,
    /// The length is proven minimal (or proven infinite).
    pub exact: bool,
}

/// Compact hash key for a normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
enum StateKey {
    Packed(u128),
    Long(Box<[u8]>),
}

struct Codec {
    packable: bool,
}

impl Codec {
    fn new(graph: &DefiningGraph) -> Self {
        // nibble codes 1..=14 cover 7 vertices with both signs
        Codec {
            packable: graph.len() <= 7,
        }
    }

    fn encode(&self, word: &[Letter]) -> StateKey {
        if self.packable && word.len() <= 32 {
            let mut bits = 0u128;
            for (i, l) in word.iter().enumerate() {
                bits |= ((l.code() + 1) as u128) << (4 * i);
            }
            StateKey::Packed(bits)
        } else {
            StateKey::Long(word.iter().map(|l| l.code()).collect())
        }
    }

    fn decode(&self, key: &StateKey, out: &mut Vec<Letter>) {
        out.clear();
        match key {
            StateKey::Packed(bits) => {
                let mut bits = *bits;
                while bits != 0 {
                    out.push(Letter::from_code((bits & 0xf) as u8 - 1));
                    bits >>= 4;
                }
            }
            StateKey::Long(codes) => out.extend(codes.iter().map(|&c| Letter::from_code(c))),
        }
    }
}

/// Shortest edge path from `a` to `b` avoiding the open ball of the given
/// radius about `center`.
pub fn avoidant_distance(a: &Trace, b: &Trace, center: &Trace, radius: i64, cap: usize) -> Result<AvoidantSearch> {
    let to_center = center.invert();
    let start = to_center.multiply(a)?;
    let goal = to_center.multiply(b)?;
    let radius = radius.max(0) as usize;
    if start.len() < radius || goal.len() < radius {
        return invalid(format!(
            "endpoints must lie outside the open ball of radius {radius} (distances {} and {})",
            start.len(),
            goal.len()
        ));
    }
    Ok(search(start.graph(), start.word(), goal.word(), radius, cap))
}

fn search(graph: &Arc<DefiningGraph>, start: &[Letter], goal: &[Letter], radius: usize, cap: usize) -> AvoidantSearch {
    let codec = Codec::new(graph);
    let letters: Vec<Letter> = (0..graph.len())
        .flat_map(|v| [Letter::new(v, false), Letter::new(v, true)])
        .collect();
    let goal_key = codec.encode(goal);

    let distance_to_goal = |x: &[Letter], scratch: &mut Vec<Letter>| {
        scratch.clear();
        for l in x.iter().rev() {
            push_letter(graph, scratch, l.inverse());
        }
        for &l in goal {
            push_letter(graph, scratch, l);
        }
    };

    let mut best: FxHashMap<StateKey, u32> = FxHashMap::default();
    // buckets[f] holds (state, g) with f = g + h
    let mut buckets: Vec<Vec<(StateKey, u32)>> = Vec::new();
    let push = |buckets: &mut Vec<Vec<(StateKey, u32)>>, f: usize, item| {
        if buckets.len() <= f {
            buckets.resize_with(f + 1, Vec::new);
        }
        buckets[f].push(item);
    };

    let mut scratch = Vec::new();
    distance_to_goal(start, &mut scratch);
    let start_key = codec.encode(start);
    best.insert(start_key.clone(), 0);
    push(&mut buckets, scratch.len(), (start_key, 0));

    let mut current = Vec::new();
    let mut to_goal = Vec::new();
    let mut child = Vec::new();
    let mut f = 0;
    while f < buckets.len() {
        let Some((key, g)) = buckets[f].pop() else {
            f += 1;
            continue;
        };
        if best.get(&key).is_some_and(|&seen| seen < g) {
            continue;
        }
        if key == goal_key {
            return AvoidantSearch {
                length: Some(g as usize),
                states: best.len(),
                exact: true,
            };
        }
        codec.decode(&key, &mut current);
        distance_to_goal(&current, &mut to_goal);
        for &l in &letters {
            child.clear();
            child.extend_from_slice(&current);
            push_letter(graph, &mut child, l);
            if child.len() < radius {
                continue;
            }
            // (x l)^-1 b = l^-1 (x^-1 b): one step shorter iff l heads x^-1 b
            let cancels = to_goal
                .iter()
                .find(|&&y| dependent(graph, y, l))
                .is_some_and(|&y| y == l);
            let h = if cancels { to_goal.len() - 1 } else { to_goal.len() + 1 };
            let child_key = codec.encode(&child);
            let child_g = g + 1;
            match best.get_mut(&child_key) {
                Some(seen) if *seen <= child_g => continue,
                Some(seen) => *seen = child_g,
                None => {
                    if best.len() >= cap {
                        return AvoidantSearch {
                            length: None,
                            states: best.len(),
                            exact: false,
                        };
                    }
                    best.insert(child_key.clone(), child_g);
                }
            }
            let child_f = child_g as usize + h;
            if child_f < f {
                f = child_f;
            }
            push(&mut buckets, child_f, (child_key, child_g));
        }
    }
    AvoidantSearch {
        length: None,
        states: best.len(),
        exact: true,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub r: u32,
    pub rho: u32,
    pub length: Option<usize>,
    pub states: usize,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct DivergenceProfile {
    pub word: Trace,
    pub rho: RhoFunction,
    pub rows: Vec<ProfileRow>,
}

/// Measures `div(α, ρ)(r)` for each requested `r` along the axis of `w`.
pub fn divergence_profile(w: &Trace, rho: RhoFunction, r_values: &[u32], cap: usize) -> Result<DivergenceProfile> {
    if w.is_identity() || !w.is_cyclically_reduced() {
        return invalid(format!("divergence block {w} must be nontrivial and cyclically reduced"));
    }
    let mut rs = r_values.to_vec();
    rs.sort_unstable();
    rs.dedup();
    let identity = Trace::identity(w.graph());
    let mut rows = Vec::with_capacity(rs.len());
    for r in rs {
        let a = periodic_geodesic_point(w, -(r as i64))?;
        let b = periodic_geodesic_point(w, r as i64)?;
        let rho_r = rho.radius(r);
        let found = avoidant_distance(&a, &b, &identity, rho_r as i64, cap)?;
        rows.push(ProfileRow {
            r,
            rho: rho_r,
            length: found.length,
            states: found.states,
            exact: found.exact && found.length.is_some(),
        });
    }
    Ok(DivergenceProfile {
        word: w.clone(),
        rho,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    Linear,
    Superlinear,
    Inconclusive,
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthClass::Linear => "linear",
            GrowthClass::Superlinear => "superlinear",
            GrowthClass::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthFit {
    pub class: GrowthClass,
    /// Least-squares slope of `ln(length)` against `ln(r)`.
    pub exponent: f64,
    pub rows_used: usize,
}

/// Exponent below which a profile counts as linear.
pub const LINEAR_EXPONENT_MAX: f64 = 1.25;
/// Exponent above which a profile counts as superlinear.
pub const SUPERLINEAR_EXPONENT_MIN: f64 = 1.4;

pub fn classify_growth(profile: &DivergenceProfile) -> Result<GrowthFit> {
    let points: Vec<(f64, f64)> = profile
        .rows
        .iter()
        .filter(|row| row.exact && row.r > 0)
        .filter_map(|row| row.length.filter(|&l| l > 0).map(|l| (row.r as f64, l as f64)))
        .collect();
    classify_points(&points)
}

/// Classifies `(r, length)` samples by their log-log slope.
pub fn classify_points(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 3 {
        return invalid(format!("growth classification needs at least 3 exact rows, got {}", points.len()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("growth classification needs at least two distinct radii");
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let class = if exponent < LINEAR_EXPONENT_MAX {
        GrowthClass::Linear
    } else if exponent > SUPERLINEAR_EXPONENT_MIN {
        GrowthClass::Superlinear
    } else {
        GrowthClass::Inconclusive
    };
    Ok(GrowthFit {
        class,
        exponent,
        rows_used: points.len(),
    })
}
