//! Hitting families: sets of bases such that every flacet has a member with
//! full intersection. Non-negativity facets `x_e ≥ 0` are not part of the
//! covering requirement.

use crate::error::{Error, Result};
use crate::matroid::{Basis, Matroid};
use crate::polytope::{BasePolytope, FlatInequality};

/// An ordered list of bases together with, for each flacet, the index of the
/// first member covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingFamily {
    bases: Vec<Basis>,
    coverage: Vec<usize>,
}

/// Result of [`is_hitting_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HittingCheck {
    Hitting,
    /// The first flacet no member covers.
    Uncovered(FlatInequality),
}

impl HittingCheck {
    pub fn is_hitting(&self) -> bool {
        matches!(self, HittingCheck::Hitting)
    }
}

fn check_members(p: &BasePolytope, bases: &[Basis]) -> Result<()> {
    match bases.iter().find(|b| !p.matroid().is_basis(b.set())) {
        Some(b) => Err(Error::InvalidInput(format!("family member {b} is not a basis"))),
        None => Ok(()),
    }
}

pub fn is_hitting_family(p: &BasePolytope, bases: &[Basis]) -> Result<HittingCheck> {
    check_members(p, bases)?;
    Ok(match p.flacets().iter().find(|f| !bases.iter().any(|&b| f.is_tight(b))) {
        Some(f) => HittingCheck::Uncovered(*f),
        None => HittingCheck::Hitting,
    })
}

impl HittingFamily {
    /// Validates `bases` against `p` and records coverage.
    pub fn new(p: &BasePolytope, bases: Vec<Basis>) -> Result<Self> {
        check_members(p, &bases)?;
        let coverage = p
            .flacets()
            .iter()
            .map(|f| {
                bases.iter().position(|&b| f.is_tight(b)).ok_or_else(|| Error::NotHittingFamily {
                    flat: f.flat.to_string(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(HittingFamily { bases, coverage })
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// For flacet `i`, the index of the first member tight at it.
    pub fn coverage(&self) -> &[usize] {
        &self.coverage
    }

    /// One basis per line, elements separated by spaces.
    pub fn to_text(&self) -> String {
        self.bases
            .iter()
            .map(|b| {
                let line = b.elements().iter().map(|e| e.to_string()).collect::<Vec<_>>();
                line.join(" ") + "\n"
            })
            .collect()
    }
}

/// Fixed-width bitset over flacet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Bits::empty(len);
        (0..len).for_each(|i| b.set(i));
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.len() * 64).filter(|&i| self.get(i))
    }
}

/// Column `j`: the flacets basis `j` is tight at.
fn cover_sets(p: &BasePolytope) -> Vec<Bits> {
    let s = p.slack_matrix();
    let (rows, cols) = s.shape();
    (0..cols)
        .map(|j| {
            let mut b = Bits::empty(rows);
            (0..rows).filter(|&i| s.entry(i, j) == 0).for_each(|i| b.set(i));
            b
        })
        .collect()
}

fn greedy_indices(covers: &[Bits], universe: Bits) -> Vec<usize> {
    let mut uncovered = universe;
    let mut picked = Vec::new();
    while !uncovered.is_empty() {
        // max_by_key keeps the last maximum; iterate in reverse to keep the first
        let (best, gain) = covers
            .iter()
            .enumerate()
            .rev()
            .map(|(j, c)| (j, c.and(&uncovered).count()))
            .max_by_key(|&(_, gain)| gain)
            .expect("at least one basis");
        assert!(gain > 0, "every flacet is tight at some basis");
        picked.push(best);
        uncovered = uncovered.and_not(&covers[best]);
    }
    picked
}

/// Greedy set cover over the bases, ties broken by lexicographic basis order.
pub fn greedy_hitting_family(p: &BasePolytope) -> HittingFamily {
    let covers = cover_sets(p);
    let picked = greedy_indices(&covers, Bits::full(p.flacets().len()));
    let bases = picked.into_iter().map(|j| p.bases()[j]).collect();
    HittingFamily::new(p, bases).expect("greedy cover is a hitting family")
}

struct CoverSearch<'a> {
    covers: &'a [Bits],
    /// Flacet -> bases tight at it, in index order.
    coverers: Vec<Vec<usize>>,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl CoverSearch<'_> {
    fn search(&mut self, uncovered: Bits) {
        if uncovered.is_empty() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + 1 >= self.best.len() {
            return;
        }
        // Branch on the uncovered flacet with the fewest covering bases.
        let pivot = uncovered
            .ones()
            .min_by_key(|&i| self.coverers[i].len())
            .expect("uncovered is non-empty");
        let remaining = uncovered.count();
        let gains: Vec<(usize, Bits)> = self.coverers[pivot]
            .iter()
            .map(|&j| (j, self.covers[j].and(&uncovered)))
            .collect();
        let max_gain = self
            .covers
            .iter()
            .map(|c| c.and(&uncovered).count())
            .max()
            .unwrap_or(0);
        if max_gain == 0 || self.chosen.len() + remaining.div_ceil(max_gain) >= self.best.len() {
            return;
        }
        // A candidate whose new coverage is contained in an earlier-kept
        // candidate's (or strictly in any other's) cannot do better.
        let mut kept: Vec<&(usize, Bits)> = Vec::new();
        for (idx, cand) in gains.iter().enumerate() {
            let dominated = gains.iter().enumerate().any(|(other_idx, other)| {
                other_idx != idx
                    && cand.1.is_subset(&other.1)
                    && (other.1 != cand.1 || other_idx < idx)
            });
            if !dominated {
                kept.push(cand);
            }
        }
        for (j, gain) in kept {
            self.chosen.push(*j);
            self.search(uncovered.and_not(gain));
            self.chosen.pop();
            if self.chosen.len() + 1 >= self.best.len() {
                return;
            }
        }
    }
}

/// A minimum-size hitting family by branch and bound, seeded with the greedy
/// cover. Its size is the hitting number `h(M)`.
pub fn minimum_hitting_family(p: &BasePolytope) -> Result<HittingFamily> {
    let limit = p.caps().max_cover_columns;
    if p.bases().len() > limit {
        return Err(Error::ResourceLimit { what: "set-cover columns", limit });
    }
    let covers = cover_sets(p);
    let rows = p.flacets().len();
    let universe = Bits::full(rows);
    let mut coverers = vec![Vec::new(); rows];
    for (j, c) in covers.iter().enumerate() {
        c.ones().for_each(|i| coverers[i].push(j));
    }
    let greedy = greedy_indices(&covers, universe.clone());
    let mut search = CoverSearch { covers: &covers, coverers, best: greedy, chosen: Vec::new() };
    search.search(universe);
    let mut picked = search.best;
    picked.sort_unstable();
    HittingFamily::new(p, picked.into_iter().map(|j| p.bases()[j]).collect())
}

/// The stars `δ(v)` of `K_n` for every vertex but the last.
pub fn star_hitting_family(p: &BasePolytope) -> Result<HittingFamily> {
    let g = p
        .matroid()
        .graph()
        .filter(|g| g.is_complete() && g.vertex_count() >= 3)
        .ok_or_else(|| {
            Error::InvalidInput("star families need a complete graph on at least 3 vertices".into())
        })?;
    let stars = (0..g.vertex_count() - 1)
        .map(|v| p.matroid().basis(g.star(v)))
        .collect::<Result<Vec<_>>>()?;
    HittingFamily::new(p, stars)
}

/// Combines families of `m1` and `m2` into one for `m1 ⊕ m2` by pairing
/// members index-wise, repeating the last member of the shorter family. An
/// empty family is replaced by the lexicographically first basis.
pub fn direct_sum_family(
    sum: &BasePolytope,
    m1: &Matroid,
    f1: &HittingFamily,
    m2: &Matroid,
    f2: &HittingFamily,
) -> Result<HittingFamily> {
    if sum.n() != m1.n() + m2.n() || sum.rank() != m1.rank() + m2.rank() {
        return Err(Error::InvalidInput("polytope is not of the direct sum of the parts".into()));
    }
    let size = f1.len().max(f2.len());
    let pick = |f: &HittingFamily, m: &Matroid, i: usize| match f.bases() {
        [] => m.first_basis(),
        bs => bs[i.min(bs.len() - 1)],
    };
    let shift = m1.n();
    let bases = (0..size)
        .map(|i| {
            let b1 = pick(f1, m1, i).set();
            let b2 = pick(f2, m2, i).set();
            sum.matroid().basis(b1.iter().chain(b2.iter().map(|e| e + shift)))
        })
        .collect::<Result<Vec<_>>>()?;
    HittingFamily::new(sum, bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::matroid::Caps;
    use itertools::Itertools;

    fn polytope(m: Matroid) -> BasePolytope {
        BasePolytope::new(m, &Caps::default()).unwrap()
    }

    fn k(n: usize) -> BasePolytope {
        polytope(Matroid::graphic(Graph::complete(n)).unwrap())
    }

    /// Smallest hitting family size by trying every subset of bases in
    /// increasing size.
    fn brute_force_h(p: &BasePolytope) -> usize {
        (0..=p.bases().len())
            .find(|&size| {
                p.bases().iter().copied().combinations(size).any(|fam| {
                    is_hitting_family(p, &fam).unwrap().is_hitting()
                })
            })
            .unwrap()
    }

    #[test]
    fn is_hitting_examples() {
        let p = k(4);
        let stars: Vec<Basis> = (0..3)
            .map(|v| p.matroid().basis(Graph::complete(4).star(v)).unwrap())
            .collect();
        assert!(is_hitting_family(&p, &stars).unwrap().is_hitting());

        let u23 = polytope(Matroid::uniform(2, 3).unwrap());
        let fam = [u23.matroid().basis([0, 1]).unwrap()];
        match is_hitting_family(&u23, &fam).unwrap() {
            HittingCheck::Uncovered(f) => assert_eq!(f.flat.to_vec(), vec![2]),
            other => panic!("expected uncovered flacet, got {other:?}"),
        }

        let u13 = polytope(Matroid::uniform(1, 3).unwrap());
        assert!(is_hitting_family(&u13, &[]).unwrap().is_hitting());

        let not_basis = Basis::new_unchecked(u23.matroid().subset([0]).unwrap());
        assert!(is_hitting_family(&u23, &[not_basis]).is_err());
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_hitting_family(&polytope(Matroid::uniform(2, 3).unwrap())).len(), 2);
        assert_eq!(greedy_hitting_family(&k(4)).len(), 3);
        assert_eq!(greedy_hitting_family(&polytope(Matroid::uniform(1, 3).unwrap())).len(), 0);
    }

    #[test]
    fn minimum_matches_brute_force() {
        for p in [
            k(4),
            polytope(Matroid::uniform(2, 4).unwrap()),
            polytope(Matroid::uniform(2, 3).unwrap()),
            polytope(Matroid::uniform(3, 5).unwrap()),
            polytope(Matroid::uniform(1, 3).unwrap()),
        ] {
            let fam = minimum_hitting_family(&p).unwrap();
            assert_eq!(fam.len(), brute_force_h(&p));
        }
    }

    #[test]
    fn minimum_examples() {
        // frozen from brute_force_h
        assert_eq!(minimum_hitting_family(&k(4)).unwrap().len(), 2);
        let u24 = polytope(Matroid::uniform(2, 4).unwrap());
        let fam = minimum_hitting_family(&u24).unwrap();
        assert_eq!(fam.len(), 2);
        let covered: Vec<usize> = fam.bases().iter().flat_map(|b| b.elements()).sorted().collect();
        assert_eq!(covered, vec![0, 1, 2, 3]);
        assert_eq!(minimum_hitting_family(&polytope(Matroid::uniform(2, 3).unwrap())).unwrap().len(), 2);
    }

    #[test]
    fn cover_cap_is_enforced() {
        let caps = Caps { max_cover_columns: 10, ..Caps::default() };
        let p = BasePolytope::new(Matroid::graphic(Graph::complete(4)).unwrap(), &caps).unwrap();
        assert!(matches!(minimum_hitting_family(&p), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn stars() {
        for n in 3..=5 {
            let p = k(n);
            let fam = star_hitting_family(&p).unwrap();
            assert_eq!(fam.len(), n - 1);
            assert!(is_hitting_family(&p, fam.bases()).unwrap().is_hitting());
        }
        let path = polytope(Matroid::graphic(Graph::new(3, vec![(0, 1), (1, 2), (0, 2), (0, 1)]).unwrap()).unwrap());
        assert!(star_hitting_family(&path).is_err());
        assert!(star_hitting_family(&polytope(Matroid::uniform(2, 3).unwrap())).is_err());
    }

    #[test]
    fn direct_sum_examples() {
        let u23 = Matroid::uniform(2, 3).unwrap();
        let p23 = polytope(u23.clone());
        let f = minimum_hitting_family(&p23).unwrap();
        let sum = polytope(u23.direct_sum(&u23).unwrap());
        let fam = direct_sum_family(&sum, &u23, &f, &u23, &f).unwrap();
        assert_eq!(fam.len(), 2);

        let u13 = Matroid::uniform(1, 3).unwrap();
        let empty = minimum_hitting_family(&polytope(u13.clone())).unwrap();
        let sum = polytope(u23.direct_sum(&u13).unwrap());
        let fam = direct_sum_family(&sum, &u23, &f, &u13, &empty).unwrap();
        assert_eq!(fam.len(), f.len());
        assert!(fam.bases().iter().all(|b| b.contains(3)));

        let sum = polytope(u13.direct_sum(&u13).unwrap());
        assert!(direct_sum_family(&sum, &u13, &empty, &u13, &empty).unwrap().is_empty());
    }

    #[test]
    fn text_export() {
        let p = polytope(Matroid::uniform(2, 4).unwrap());
        let fam = minimum_hitting_family(&p).unwrap();
        let text = fam.to_text();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().all(|l| l.split(' ').count() == 2));
    }
}
