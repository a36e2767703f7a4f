//! Bijective basis exchange and the slack formula it yields.
//!
//! For bases `B`, `B'` there is a bijection `σ: B → B'` such that
//! `B − e + σ(e)` is a basis for every `e ∈ B`. Ordering `B'` by `σ` turns the
//! slack of a flat inequality tight at `B` into a count of positions where
//! `b_i ∈ F` but `σ(b_i) ∉ F`.

use crate::error::{Error, Result};
use crate::matroid::{Basis, Matroid, RankOracle};
use crate::polytope::FlatInequality;

/// `map[i]` is the image of the `i`-th smallest element of `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeBijection {
    source: Basis,
    target: Basis,
    source_order: Vec<usize>,
    map: Vec<usize>,
}

impl ExchangeBijection {
    /// Wraps an explicit map. Use [`ExchangeBijection::is_valid`] to check it.
    pub fn from_map(source: Basis, target: Basis, map: Vec<usize>) -> Result<Self> {
        let source_order = source.elements();
        let mut image: Vec<usize> = map.clone();
        image.sort_unstable();
        if map.len() != source_order.len() || image != target.elements() {
            return Err(Error::InvalidInput(format!(
                "map {map:?} is not a bijection from {source} onto {target}"
            )));
        }
        Ok(ExchangeBijection { source, target, source_order, map })
    }

    pub fn source(&self) -> Basis {
        self.source
    }

    pub fn target(&self) -> Basis {
        self.target
    }

    /// `b_1, .., b_r`.
    pub fn source_order(&self) -> &[usize] {
        &self.source_order
    }

    /// `σ(b_1), .., σ(b_r)`: the target ordered with respect to the source.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Every single swap `B − b_i + σ(b_i)` is a basis of `m`.
    pub fn is_valid(&self, m: &Matroid) -> bool {
        let b = self.source.set();
        self.source_order
            .iter()
            .zip(&self.map)
            .all(|(&e, &f)| m.is_basis(b.without(e).with(f)))
    }
}

/// Kuhn's augmenting-path matching on a bipartite graph given by adjacency
/// lists from left to right vertices.
struct Matching<'a> {
    adjacency: &'a [Vec<usize>],
    right_match: Vec<Option<usize>>,
    right_blocked: Vec<bool>,
    visited: Vec<bool>,
}

impl<'a> Matching<'a> {
    fn new(adjacency: &'a [Vec<usize>], right: usize) -> Self {
        Matching {
            adjacency,
            right_match: vec![None; right],
            right_blocked: vec![false; right],
            visited: vec![false; right],
        }
    }

    fn augment(&mut self, left: usize) -> bool {
        for &r in &self.adjacency[left] {
            if self.right_blocked[r] || self.visited[r] {
                continue;
            }
            self.visited[r] = true;
            let free = match self.right_match[r] {
                None => true,
                Some(other) => self.augment(other),
            };
            if free {
                self.right_match[r] = Some(left);
                return true;
            }
        }
        false
    }

    /// Whether the left vertices in `lefts` can all be matched.
    fn saturates(&mut self, lefts: impl Iterator<Item = usize>) -> bool {
        self.right_match.iter_mut().for_each(|m| *m = None);
        for l in lefts {
            self.visited.iter_mut().for_each(|v| *v = false);
            if !self.augment(l) {
                return false;
            }
        }
        true
    }
}

/// The canonical exchange bijection from `b` to `b2`: the identity on
/// `b ∩ b2`, extended by the lexicographically smallest perfect matching
/// between `b ∖ b2` and `b2 ∖ b` (by source order, then target element).
pub fn exchange_bijection(m: &Matroid, b: Basis, b2: Basis) -> Result<ExchangeBijection> {
    if !m.is_basis(b.set()) || !m.is_basis(b2.set()) {
        return Err(Error::InvalidInput(format!("{b} and {b2} must both be bases")));
    }
    let r = m.rank();
    let sources = b.set().difference(b2.set()).to_vec();
    let targets = b2.set().difference(b.set()).to_vec();
    let adjacency: Vec<Vec<usize>> = sources
        .iter()
        .map(|&e| {
            (0..targets.len())
                .filter(|&j| m.rank_of(b.set().without(e).with(targets[j])) == r)
                .collect()
        })
        .collect();

    let mut matching = Matching::new(&adjacency, targets.len());
    let mut assigned = vec![usize::MAX; sources.len()];
    for i in 0..sources.len() {
        let chosen = adjacency[i].iter().copied().find(|&j| {
            if matching.right_blocked[j] {
                return false;
            }
            matching.right_blocked[j] = true;
            let ok = matching.saturates(i + 1..sources.len());
            matching.right_blocked[j] = false;
            ok
        });
        let Some(j) = chosen else {
            return Err(Error::InternalConsistency(format!(
                "no exchange bijection from {b} to {b2}; the rank oracle is not a matroid"
            )));
        };
        matching.right_blocked[j] = true;
        assigned[i] = j;
    }

    let map = b
        .elements()
        .into_iter()
        .map(|e| match sources.iter().position(|&s| s == e) {
            Some(i) => targets[assigned[i]],
            None => e,
        })
        .collect();
    ExchangeBijection::from_map(b, b2, map)
}

/// Every exchange bijection from `b` to `b2`, including ones that move
/// elements of `b ∩ b2`. Exponential in the rank.
pub fn all_exchange_bijections(m: &Matroid, b: Basis, b2: Basis) -> Result<Vec<ExchangeBijection>> {
    const MAX_RANK: usize = 9;
    if b.len() > MAX_RANK {
        return Err(Error::ResourceLimit { what: "rank for bijection enumeration", limit: MAX_RANK });
    }
    let sources = b.elements();
    let targets = b2.elements();
    let allowed: Vec<Vec<usize>> = sources
        .iter()
        .map(|&e| {
            targets
                .iter()
                .copied()
                .filter(|&f| m.is_basis(b.set().without(e).with(f)))
                .collect()
        })
        .collect();

    fn extend(
        allowed: &[Vec<usize>],
        partial: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if partial.len() == allowed.len() {
            out.push(partial.clone());
            return;
        }
        for &f in &allowed[partial.len()] {
            if !partial.contains(&f) {
                partial.push(f);
                extend(allowed, partial, out);
                partial.pop();
            }
        }
    }

    let mut maps = Vec::new();
    extend(&allowed, &mut Vec::with_capacity(sources.len()), &mut maps);
    maps.into_iter().map(|map| ExchangeBijection::from_map(b, b2, map)).collect()
}

/// `|{i : b_i ∈ F, σ(b_i) ∉ F}|`, which equals `rk(F) − |B' ∩ F|` whenever the
/// source basis has full intersection with `F`.
pub fn slack_by_ordering(f: &FlatInequality, bij: &ExchangeBijection) -> Result<usize> {
    let in_source = bij.source().set().intersection(f.flat).len();
    if in_source != f.rhs {
        return Err(Error::FullIntersectionRequired { actual: in_source, rank: f.rhs });
    }
    let mut count = 0;
    for (&b_i, &image) in bij.source_order().iter().zip(bij.map()) {
        match (f.contains(b_i), f.contains(image)) {
            (true, false) => count += 1,
            // σ(b_i) ∈ F forces b_i ∈ F, else B − b_i + σ(b_i) would beat rk(F) inside F
            (false, true) => {
                return Err(Error::InternalConsistency(format!(
                    "position with {b_i} ∉ F but σ = {image} ∈ F; {bij:?} is not an exchange bijection"
                )))
            }
            _ => {}
        }
    }
    Ok(count)
}
