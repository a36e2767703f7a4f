//! Loopless matroids on dense ground sets `0..n`, with exact rank oracles.
//!
//! A [`Matroid`] is immutable once built. Every constructor checks the
//! looplessness invariant (`rk({e}) = 1`) and that the rank is positive, so
//! downstream code never has to. Minors used by the connectivity tests are a
//! separate type, [`Minor`], because they may contain loops.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Graph, UnionFind};
use crate::subset::{ElementSet, MAX_ELEMENTS};

/// Exhaustive-enumeration limits. Everything downstream of the matroid is
/// brute force, so exceeding a cap is an error rather than a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_elements: usize,
    pub max_bases: usize,
    /// Largest set-cover instance (number of candidate bases) the exact
    /// hitting-family search accepts.
    pub max_cover_columns: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_elements: 24, max_bases: 1_000_000, max_cover_columns: 5000 }
    }
}

/// Anything with a rank function on subsets of `0..ground_size()`.
pub trait RankOracle {
    fn ground_size(&self) -> usize;

    /// Rank of `s`. Callers guarantee `s ⊆ 0..ground_size()`.
    fn rank_of(&self, s: ElementSet) -> usize;

    fn ground(&self) -> ElementSet {
        ElementSet::full(self.ground_size())
    }

    fn full_rank(&self) -> usize {
        self.rank_of(self.ground())
    }
}

/// A basis, stored as its sorted element set. The sorted order is the
/// ordering `b_1 < .. < b_r` used by the exchange and protocol modules.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Basis(ElementSet);

impl Basis {
    pub fn set(self) -> ElementSet {
        self.0
    }

    pub fn elements(self) -> Vec<usize> {
        self.0.to_vec()
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(self, e: usize) -> bool {
        self.0.contains(e)
    }

    pub fn incidence(self, n: usize) -> Vec<u8> {
        (0..n).map(|e| self.0.contains(e) as u8).collect()
    }

    pub fn label(self) -> String {
        self.0.label()
    }

    #[cfg(test)]
    /// Wraps `s` without checking it is a basis of anything.
    pub(crate) fn new_unchecked(s: ElementSet) -> Self {
        Basis(s)
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Basis{:?}", self.0)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Uniform,
    Graphic(Graph),
    /// One bitmask of row positions per column.
    Binary { rows: usize, columns: Vec<u64> },
    Bases(Vec<ElementSet>),
    Dual(Box<Matroid>),
    /// Parts with the offset of their first element.
    DirectSum(Vec<(usize, Matroid)>),
}

#[derive(Debug, Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    kind: Kind,
}

impl RankOracle for Matroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn rank_of(&self, s: ElementSet) -> usize {
        match &self.kind {
            Kind::Uniform => s.len().min(self.rank),
            Kind::Graphic(g) => g.forest_rank(s),
            Kind::Binary { columns, .. } => gf2_rank(s.iter().map(|e| columns[e])),
            Kind::Bases(bases) => {
                bases.iter().map(|b| b.intersection(s).len()).max().unwrap_or(0)
            }
            Kind::Dual(m) => {
                let complement = m.ground().difference(s);
                s.len() + m.rank_of(complement) - m.rank
            }
            Kind::DirectSum(parts) => parts
                .iter()
                .map(|(offset, m)| {
                    let local = (s.bits() >> offset) & ElementSet::full(m.n).bits();
                    m.rank_of(ElementSet::from_bits(local))
                })
                .sum(),
        }
    }
}

impl Matroid {
    /// The uniform matroid `U_{r,n}`.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r == 0 || r > n || n > MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!(
                "uniform matroid needs 0 < r <= n <= {MAX_ELEMENTS}, got r={r}, n={n}"
            )));
        }
        Ok(Matroid { n, rank: r, kind: Kind::Uniform })
    }

    /// The cycle matroid of `graph`; element `i` is edge `i`.
    pub fn graphic(graph: Graph) -> Result<Self> {
        if let Some(e) = graph.edges().iter().position(|&(u, v)| u == v) {
            return Err(Error::Loop { element: e });
        }
        Self::checked(graph.edge_count(), Kind::Graphic(graph))
    }

    /// The column matroid over GF(2) of a 0/1 matrix given by rows.
    pub fn binary(matrix: &[Vec<u8>]) -> Result<Self> {
        let rows = matrix.len();
        if rows == 0 || rows > 64 {
            return Err(Error::InvalidInput(format!(
                "binary matrix needs between 1 and 64 rows, got {rows}"
            )));
        }
        let n = matrix[0].len();
        let mut columns = vec![0u64; n];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "binary matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => columns[j] |= 1u64 << i,
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "binary matrix entry ({i},{j}) is {v}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Self::checked(n, Kind::Binary { rows, columns })
    }

    /// A matroid given by its list of bases. The basis exchange axiom is
    /// verified exhaustively.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!("at most {MAX_ELEMENTS} elements supported")));
        }
        let mut sets = Vec::with_capacity(bases.len());
        for b in bases {
            let s = ElementSet::from_elements(n, b.iter().copied())?;
            if s.len() != b.len() {
                return Err(Error::InvalidInput(format!("basis {b:?} repeats an element")));
            }
            sets.push(s);
        }
        sets.sort_by(|a, b| a.lex_cmp(*b));
        sets.dedup();
        let Some(first) = sets.first() else {
            return Err(Error::InvalidInput("a matroid needs at least one basis".into()));
        };
        if sets.iter().any(|s| s.len() != first.len()) {
            return Err(Error::InvalidInput("bases must all have the same size".into()));
        }
        let lookup: HashSet<ElementSet> = sets.iter().copied().collect();
        for &b1 in &sets {
            for &b2 in &sets {
                for e in b1.difference(b2) {
                    let ok = b2
                        .difference(b1)
                        .iter()
                        .any(|f| lookup.contains(&b1.without(e).with(f)));
                    if !ok {
                        return Err(Error::InvalidInput(format!(
                            "basis exchange fails for {b1} and {b2} at element {e}"
                        )));
                    }
                }
            }
        }
        Self::checked(n, Kind::Bases(sets))
    }

    fn checked(n: usize, kind: Kind) -> Result<Self> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!(
                "ground set size must be between 1 and {MAX_ELEMENTS}, got {n}"
            )));
        }
        let mut m = Matroid { n, rank: 0, kind };
        m.rank = m.rank_of(m.ground());
        if let Some(e) = (0..n).find(|&e| m.rank_of(ElementSet::singleton(e)) == 0) {
            return Err(Error::Loop { element: e });
        }
        if m.rank == 0 {
            return Err(Error::InvalidInput("matroid has rank 0".into()));
        }
        Ok(m)
    }

    /// The dual matroid, `rk*(S) = |S| + rk(E∖S) − rk(E)`. Fails if `self`
    /// has a coloop, since the dual would then have a loop.
    pub fn dual(&self) -> Result<Self> {
        if let Kind::Dual(inner) = &self.kind {
            return Ok((**inner).clone());
        }
        Self::checked(self.n, Kind::Dual(Box::new(self.clone())))
    }

    /// The direct sum (1-sum); elements of `other` are shifted by `self.n()`.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Self> {
        let n = self.n + other.n;
        if n > MAX_ELEMENTS {
            return Err(Error::InvalidInput(format!("direct sum exceeds {MAX_ELEMENTS} elements")));
        }
        let mut parts = Vec::new();
        for (offset, m) in [(0, self), (self.n, other)] {
            match &m.kind {
                Kind::DirectSum(inner) => {
                    parts.extend(inner.iter().map(|(o, p)| (o + offset, p.clone())))
                }
                _ => parts.push((offset, m.clone())),
            }
        }
        Self::checked(n, Kind::DirectSum(parts))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `rk(E)`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Uniform => "uniform",
            Kind::Graphic(_) => "graphic",
            Kind::Binary { .. } => "binary",
            Kind::Bases(_) => "explicit-bases",
            Kind::Dual(_) => "dual-of",
            Kind::DirectSum(_) => "direct-sum",
        }
    }

    /// The underlying graph, for graphic matroids.
    pub fn graph(&self) -> Option<&Graph> {
        match &self.kind {
            Kind::Graphic(g) => Some(g),
            _ => None,
        }
    }

    /// Number of rows of the representing matrix, for binary matroids.
    pub fn binary_rows(&self) -> Option<usize> {
        match &self.kind {
            Kind::Binary { rows, .. } => Some(*rows),
            _ => None,
        }
    }

    pub fn subset(&self, elements: impl IntoIterator<Item = usize>) -> Result<ElementSet> {
        ElementSet::from_elements(self.n, elements)
    }

    fn check(&self, s: ElementSet) -> Result<()> {
        if s.span() > self.n {
            return Err(Error::InvalidInput(format!(
                "subset {s} is not contained in the ground set of size {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Rank of an arbitrary subset, validating element indices.
    pub fn rank_checked(&self, s: ElementSet) -> Result<usize> {
        self.check(s)?;
        Ok(self.rank_of(s))
    }

    /// Smallest flat containing `s`.
    pub fn closure(&self, s: ElementSet) -> Result<ElementSet> {
        self.check(s)?;
        Ok(closure(self, s))
    }

    pub fn is_flat(&self, s: ElementSet) -> bool {
        s.span() <= self.n && closure(self, s) == s
    }

    pub fn is_basis(&self, s: ElementSet) -> bool {
        s.span() <= self.n && s.len() == self.rank && self.rank_of(s) == self.rank
    }

    pub fn basis(&self, elements: impl IntoIterator<Item = usize>) -> Result<Basis> {
        let s = self.subset(elements)?;
        if !self.is_basis(s) {
            return Err(Error::InvalidInput(format!("{s} is not a basis")));
        }
        Ok(Basis(s))
    }

    /// The lexicographically smallest basis (greedy over elements in order).
    pub fn first_basis(&self) -> Basis {
        Basis(greedy_basis(self))
    }

    /// All bases in lexicographic order of their sorted element lists.
    pub fn bases(&self, caps: &Caps) -> Result<Vec<Basis>> {
        Ok(enumerate_bases(self, caps)?.into_iter().map(Basis).collect())
    }

    /// All flats, ordered by rank and then lexicographically.
    pub fn flats(&self, caps: &Caps) -> Result<Vec<ElementSet>> {
        enumerate_flats(self, caps)
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    /// Connected components, ordered by smallest element.
    pub fn components(&self) -> Vec<ElementSet> {
        components(self)
    }

    /// `M|s`, with elements of `s` renumbered in increasing order.
    pub fn restriction(&self, s: ElementSet) -> Result<Minor> {
        self.check(s)?;
        Ok(Minor::new(self.clone(), s, ElementSet::EMPTY))
    }

    /// `M/s` on `E∖s`, with the remaining elements renumbered in increasing order.
    pub fn contraction(&self, s: ElementSet) -> Result<Minor> {
        self.check(s)?;
        Ok(Minor::new(self.clone(), self.ground().difference(s), s))
    }

    /// The minor `(M|keep)/contract` on `keep ∖ contract`.
    pub fn minor(&self, keep: ElementSet, contract: ElementSet) -> Result<Minor> {
        self.check(keep)?;
        if !contract.is_subset(keep) {
            return Err(Error::InvalidInput("contracted set must lie in the kept set".into()));
        }
        Ok(Minor::new(self.clone(), keep.difference(contract), contract))
    }
}

/// A minor of a matroid. Unlike [`Matroid`] it may contain loops; it is used
/// for connectivity tests only.
#[derive(Debug, Clone)]
pub struct Minor {
    parent: Matroid,
    elements: Vec<usize>,
    contracted: ElementSet,
    contracted_rank: usize,
}

impl Minor {
    fn new(parent: Matroid, ground: ElementSet, contracted: ElementSet) -> Self {
        let contracted_rank = parent.rank_of(contracted);
        Minor { elements: ground.to_vec(), contracted, contracted_rank, parent }
    }

    /// Parent element for each minor element.
    pub fn element_map(&self) -> &[usize] {
        &self.elements
    }

    pub fn lift(&self, s: ElementSet) -> ElementSet {
        s.iter().map(|i| self.elements[i]).collect()
    }

    pub fn has_loop(&self) -> bool {
        (0..self.elements.len()).any(|e| self.rank_of(ElementSet::singleton(e)) == 0)
    }

    pub fn bases(&self, caps: &Caps) -> Result<Vec<Basis>> {
        Ok(enumerate_bases(self, caps)?.into_iter().map(Basis).collect())
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }
}

impl RankOracle for Minor {
    fn ground_size(&self) -> usize {
        self.elements.len()
    }

    fn rank_of(&self, s: ElementSet) -> usize {
        self.parent.rank_of(self.lift(s).union(self.contracted)) - self.contracted_rank
    }
}

fn gf2_rank(columns: impl Iterator<Item = u64>) -> usize {
    // xor basis indexed by leading bit
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut v in columns {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

pub fn closure<O: RankOracle + ?Sized>(m: &O, s: ElementSet) -> ElementSet {
    let r = m.rank_of(s);
    m.ground()
        .difference(s)
        .iter()
        .filter(|&e| m.rank_of(s.with(e)) == r)
        .fold(s, |acc, e| acc.with(e))
}

fn greedy_basis<O: RankOracle + ?Sized>(m: &O) -> ElementSet {
    let mut b = ElementSet::EMPTY;
    for e in 0..m.ground_size() {
        if m.rank_of(b.with(e)) > b.len() {
            b.insert(e);
        }
    }
    b
}

fn check_enumerable<O: RankOracle + ?Sized>(m: &O, caps: &Caps) -> Result<()> {
    if m.ground_size() > caps.max_elements {
        return Err(Error::ResourceLimit { what: "ground set size", limit: caps.max_elements });
    }
    Ok(())
}

/// All `r`-subsets of full rank, in lexicographic order.
pub fn enumerate_bases<O: RankOracle + ?Sized>(m: &O, caps: &Caps) -> Result<Vec<ElementSet>> {
    check_enumerable(m, caps)?;
    let r = m.full_rank();
    let mut out = Vec::new();
    for combo in (0..m.ground_size()).combinations(r) {
        let s: ElementSet = combo.into_iter().collect();
        if m.rank_of(s) == r {
            if out.len() == caps.max_bases {
                return Err(Error::ResourceLimit { what: "basis count", limit: caps.max_bases });
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Flats are generated from `cl(∅)` by repeatedly closing `F + e`; every flat
/// is reachable through a chain of covers.
pub fn enumerate_flats<O: RankOracle + ?Sized>(m: &O, caps: &Caps) -> Result<Vec<ElementSet>> {
    check_enumerable(m, caps)?;
    let start = closure(m, ElementSet::EMPTY);
    let mut seen = BTreeSet::from([start.bits()]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for e in m.ground().difference(f) {
            let g = closure(m, f.with(e));
            if seen.insert(g.bits()) {
                if seen.len() > caps.max_bases {
                    return Err(Error::ResourceLimit { what: "flat count", limit: caps.max_bases });
                }
                queue.push_back(g);
            }
        }
    }
    let mut flats: Vec<(usize, ElementSet)> = seen
        .into_iter()
        .map(|bits| {
            let f = ElementSet::from_bits(bits);
            (m.rank_of(f), f)
        })
        .collect();
    flats.sort_by(|(ra, a), (rb, b)| ra.cmp(rb).then_with(|| a.lex_cmp(*b)));
    Ok(flats.into_iter().map(|(_, f)| f).collect())
}

/// Minimal dependent sets, found by scanning every subset.
pub fn circuits<O: RankOracle + ?Sized>(m: &O) -> Vec<ElementSet> {
    m.ground()
        .subsets()
        .filter(|&s| {
            !s.is_empty()
                && m.rank_of(s) + 1 == s.len()
                && s.iter().all(|e| m.rank_of(s.without(e)) + 1 == s.len())
        })
        .collect()
}

/// Ground sets up to this size are tested for connectivity by circuit
/// enumeration; larger ones use fundamental circuits.
pub const BRUTE_FORCE_CONNECTIVITY_LIMIT: usize = 12;

/// True iff every pair of elements lies on a common circuit.
pub fn is_connected<O: RankOracle + ?Sized>(m: &O) -> bool {
    if m.ground_size() <= BRUTE_FORCE_CONNECTIVITY_LIMIT {
        is_connected_by_circuits(m)
    } else {
        components(m).len() <= 1
    }
}

pub fn is_connected_by_circuits<O: RankOracle + ?Sized>(m: &O) -> bool {
    let n = m.ground_size();
    let mut together = vec![false; n * n];
    for c in circuits(m) {
        for (a, b) in c.iter().tuple_combinations() {
            together[a * n + b] = true;
        }
    }
    (0..n).tuple_combinations().all(|(a, b)| together[a * n + b])
}

/// Connected components via fundamental circuits with respect to the greedy
/// basis: two elements share a component iff they are linked by a chain of
/// fundamental circuits.
pub fn components<O: RankOracle + ?Sized>(m: &O) -> Vec<ElementSet> {
    let n = m.ground_size();
    let b = greedy_basis(m);
    let r = b.len();
    let mut uf = UnionFind::new(n);
    for e in m.ground().difference(b) {
        for f in b {
            let swapped = b.without(f).with(e);
            if m.rank_of(swapped) == r {
                uf.union(e, f);
            }
        }
    }
    let mut classes: Vec<ElementSet> = Vec::new();
    let mut root_class = vec![usize::MAX; n];
    for e in 0..n {
        let root = uf.find(e);
        if root_class[root] == usize::MAX {
            root_class[root] = classes.len();
            classes.push(ElementSet::EMPTY);
        }
        classes[root_class[root]].insert(e);
    }
    classes
}
