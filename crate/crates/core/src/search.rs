//! Targeted search for sign distributions realizing given real schemes.
//!
//! The search combines three strategies, all metered by a shared budget of
//! kernel evaluations:
//!
//! * **frontier**: starting from family seeds (Harnack signs, constant
//!   signs), every sign vector within a Hamming ball is evaluated, and each
//!   realizer of a scheme not seen before becomes a new seed;
//! * **random**: uniform sampling of canonical classes;
//! * **guided**: a local search per missing target that toggles signs and
//!   keeps moves that do not increase a structural distance to the target.
//!
//! Every hit is re-verified with the full patchwork construction.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lattice::point_count;
use crate::patchwork::Patchwork;
use crate::scheme::{Oval, RealScheme};
use crate::signs::{class_count, index_to_bits, SignDistribution};
use crate::surface::Surface;
use crate::triangulation::Triangulation;

/// A verified realization of a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realizer {
    pub triangulation: String,
    /// Canonical sign vector in lexicographic order.
    pub signs: String,
    /// Canonical class index.
    pub index: u128,
    /// Strategy that found it.
    pub strategy: String,
}

/// Outcome of a search.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchResult {
    pub degree: u32,
    /// Realizers keyed by the rendered scheme.
    pub found: BTreeMap<String, Realizer>,
    /// Targets without a realizer.
    pub missing: Vec<String>,
    pub evaluations: u64,
}

/// Search parameters.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Schemes to look for; every scheme of the degree when empty.
    pub targets: Vec<RealScheme>,
    /// Total kernel evaluations allowed.
    pub budget: u64,
    pub seed: u64,
    /// Hamming radius of the frontier exploration.
    pub radius: usize,
    /// Share of the budget (after the frontier) given to random sampling;
    /// the rest goes to the guided search.
    pub random_share: f64,
    /// Whether to run the frontier strategy.
    pub frontier: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            targets: Vec::new(),
            budget: 20_000_000,
            seed: 0,
            radius: 2,
            random_share: 0.5,
            frontier: true,
        }
    }
}

struct Candidate<'a> {
    label: &'a str,
    triangulation: &'a Triangulation,
    kernel: Kernel,
}

struct State {
    degree: u32,
    wanted: BTreeMap<u128, RealScheme>,
    found: BTreeMap<u128, Realizer>,
    /// First sign vector seen for each scheme code, per triangulation.
    seen: Vec<BTreeMap<u128, u128>>,
    evaluations: u64,
    budget: u64,
}

impl State {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget || self.wanted.is_empty()
    }

    /// Evaluates `bits` on candidate `c`, recording new schemes.  Returns the
    /// scheme code, or `None` when the budget is spent.
    fn evaluate(
        &mut self,
        cands: &[Candidate<'_>],
        c: usize,
        bits: u128,
        strategy: &str,
    ) -> Result<Option<(u128, bool)>> {
        if self.evaluations >= self.budget {
            return Ok(None);
        }
        self.evaluations += 1;
        let e = cands[c].kernel.evaluate(bits)?;
        let fresh = !self.seen[c].contains_key(&e.code);
        if fresh {
            self.seen[c].insert(e.code, bits);
        }
        if let Some(target) = self.wanted.remove(&e.code) {
            let signs = SignDistribution::from_bits(self.degree, bits)?.canonicalize();
            let pw = Patchwork::new(cands[c].triangulation, signs)?;
            if pw.scheme() != &target {
                return Err(Error::Invariant(format!(
                    "kernel and patchwork disagree on {signs}: {target} vs {}",
                    pw.scheme()
                )));
            }
            self.found.insert(
                e.code,
                Realizer {
                    triangulation: cands[c].label.to_string(),
                    signs: signs.to_string(),
                    index: signs.to_index(),
                    strategy: strategy.to_string(),
                },
            );
        }
        Ok(Some((e.code, fresh)))
    }
}

/// Runs the search over the given labelled triangulations of one degree.
pub fn search(triangulations: &[(String, Triangulation)], config: &SearchConfig) -> Result<SearchResult> {
    let degree = triangulations
        .first()
        .map(|(_, t)| t.degree())
        .ok_or_else(|| Error::Invariant("no triangulation to search".into()))?;
    for (_, t) in triangulations {
        if t.degree() != degree {
            return Err(Error::DegreeMismatch { left: degree, right: t.degree() });
        }
    }
    let targets = if config.targets.is_empty() {
        crate::scheme::enumerate_schemes(degree)?
    } else {
        config.targets.clone()
    };
    let cands: Vec<Candidate<'_>> = triangulations
        .iter()
        .map(|(label, t)| Ok(Candidate { label, triangulation: t, kernel: Kernel::new(&Surface::new(t)?) }))
        .collect::<Result<_>>()?;
    let mut state = State {
        degree,
        wanted: targets.iter().map(|s| (s.code(), s.clone())).collect(),
        found: BTreeMap::new(),
        seen: vec![BTreeMap::new(); cands.len()],
        evaluations: 0,
        budget: config.budget,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    if config.frontier {
        frontier(&cands, &mut state, config.radius)?;
    }
    let remaining = state.budget.saturating_sub(state.evaluations);
    let random_budget = (remaining as f64 * config.random_share) as u64;
    random(&cands, &mut state, random_budget, &mut rng)?;
    guided(&cands, &mut state, &mut rng)?;

    let pseudo_line = degree % 2 == 1;
    let mut found = BTreeMap::new();
    for (code, r) in state.found {
        found.insert(RealScheme::from_code(pseudo_line, code)?.to_string(), r);
    }
    Ok(SearchResult {
        degree,
        found,
        missing: state.wanted.values().map(|s| s.to_string()).collect(),
        evaluations: state.evaluations,
    })
}

/// Family seeds: Harnack signs, constant signs and their complements.
fn family_seeds(degree: u32) -> Result<Vec<u128>> {
    let eta = SignDistribution::harnack(degree)?;
    let ones = SignDistribution::ones(degree)?;
    let zeros = SignDistribution::zeros(degree)?;
    Ok(vec![eta.bits(), ones.bits(), zeros.bits()])
}

fn frontier(cands: &[Candidate<'_>], state: &mut State, radius: usize) -> Result<()> {
    let bits = point_count(state.degree);
    let seeds = family_seeds(state.degree)?;
    for c in 0..cands.len() {
        let mut queue: VecDeque<u128> = seeds.iter().copied().collect();
        let mut expanded: HashSet<u128> = HashSet::new();
        while let Some(center) = queue.pop_front() {
            if state.exhausted() {
                return Ok(());
            }
            if !expanded.insert(center) {
                continue;
            }
            let mut fresh = Vec::new();
            let mut visit = |mask: u128, state: &mut State| -> Result<bool> {
                match state.evaluate(cands, c, center ^ mask, "frontier")? {
                    Some((_, true)) => {
                        fresh.push(center ^ mask);
                        Ok(true)
                    }
                    Some(_) => Ok(true),
                    None => Ok(false),
                }
            };
            if !for_each_subset(bits, radius, &mut |mask| visit(mask, state))? {
                return Ok(());
            }
            queue.extend(fresh);
        }
    }
    Ok(())
}

/// Calls `f` on every mask of `1..=radius` set bits among the low `n`
/// bits; stops early when `f` returns `false`.
fn for_each_subset(n: usize, radius: usize, f: &mut dyn FnMut(u128) -> Result<bool>) -> Result<bool> {
    fn rec(
        start: usize,
        n: usize,
        left: usize,
        mask: u128,
        f: &mut dyn FnMut(u128) -> Result<bool>,
    ) -> Result<bool> {
        for i in start..n {
            let m = mask | (1u128 << i);
            if !f(m)? {
                return Ok(false);
            }
            if left > 1 && !rec(i + 1, n, left - 1, m, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    rec(0, n, radius, 0, f)
}

fn random(cands: &[Candidate<'_>], state: &mut State, budget: u64, rng: &mut ChaCha8Rng) -> Result<()> {
    let count = class_count(state.degree);
    let stop = (state.evaluations + budget).min(state.budget);
    let mut c = 0;
    while state.evaluations < stop && !state.wanted.is_empty() {
        let bits = index_to_bits(state.degree, rng.gen_range(0..count));
        state.evaluate(cands, c, bits, "random")?;
        c = (c + 1) % cands.len();
    }
    Ok(())
}

/// Depth profile of a scheme: for each depth, the number of ovals and the
/// number of non-empty ovals.
fn profile(s: &RealScheme) -> Vec<(i64, i64)> {
    fn walk(o: &Oval, depth: usize, out: &mut Vec<(i64, i64)>) {
        if out.len() <= depth {
            out.resize(depth + 1, (0, 0));
        }
        out[depth].0 += 1;
        out[depth].1 += (!o.children().is_empty()) as i64;
        for c in o.children() {
            walk(c, depth + 1, out);
        }
    }
    let mut out = Vec::new();
    for o in s.ovals() {
        walk(o, 0, &mut out);
    }
    out
}

/// Structural distance between two schemes (zero iff the depth profiles
/// agree, which for most schemes means equality).
fn distance(a: &[(i64, i64)], b: &[(i64, i64)]) -> i64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or((0, 0));
            let y = b.get(i).copied().unwrap_or((0, 0));
            (x.0 - y.0).abs() + 3 * (x.1 - y.1).abs()
        })
        .sum()
}

fn guided(cands: &[Candidate<'_>], state: &mut State, rng: &mut ChaCha8Rng) -> Result<()> {
    let n = point_count(state.degree);
    let pseudo_line = state.degree % 2 == 1;
    const STEPS: u64 = 20_000;
    while !state.exhausted() {
        let targets: Vec<RealScheme> = state.wanted.values().cloned().collect();
        for target in targets {
            if state.exhausted() {
                break;
            }
            if !state.wanted.contains_key(&target.code()) {
                continue;
            }
            let goal = profile(&target);
            let c = rng.gen_range(0..cands.len());
            // Start from the seen scheme closest to the target.
            let mut best: Option<(i64, u128)> = None;
            for (&code, &bits) in &state.seen[c] {
                let d = distance(&profile(&RealScheme::from_code(pseudo_line, code)?), &goal);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, bits));
                }
            }
            let (mut dist, mut bits) = match best {
                Some(b) => b,
                None => (i64::MAX, index_to_bits(state.degree, 0)),
            };
            let mut order: Vec<usize> = (0..n).collect();
            for _ in 0..STEPS {
                if state.exhausted() || !state.wanted.contains_key(&target.code()) {
                    break;
                }
                order.shuffle(rng);
                let flips = 1 + (rng.gen::<u8>() % 3) as usize;
                let mut next = bits;
                for &p in &order[..flips] {
                    next ^= 1u128 << p;
                }
                let Some((code, _)) = state.evaluate(cands, c, next, "guided")? else { break };
                let d = distance(&profile(&RealScheme::from_code(pseudo_line, code)?), &goal);
                if d <= dist || rng.gen::<f64>() < 0.02 {
                    dist = d;
                    bits = next;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::honeycomb;

    #[test]
    fn subsets_are_counted() {
        let mut n = 0;
        for_each_subset(10, 3, &mut |_| {
            n += 1;
            Ok(true)
        })
        .unwrap();
        assert_eq!(n, 10 + 45 + 120);
    }

    #[test]
    fn degree_four_search_is_complete() {
        let t = honeycomb(4).unwrap();
        let r = search(&[("honeycomb".into(), t)], &SearchConfig { budget: 100_000, ..Default::default() })
            .unwrap();
        // The empty curve is never produced.
        assert_eq!(r.missing, vec!["<0>".to_string()]);
        assert_eq!(r.found.len(), 5);
    }
}
