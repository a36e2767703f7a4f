//! The randomized slack protocol, evaluated exactly.
//!
//! Alice holds a flacet `F`, Bob a basis `B'`. Both know a hitting family.
//! Alice names a member `B = (b_1, .., b_r)` with full intersection with `F`;
//! Bob orders `B'` against `B` by an exchange bijection, picks a position `i`
//! uniformly and sends `(i, σ(b_i))`. Alice outputs `r` if `b_i ∈ F` and
//! `σ(b_i) ∉ F`, else 0. The expectation is the slack `rk(F) − |B' ∩ F|`.
//!
//! Nothing here samples: expectations sum over all `r` choices of Bob.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exchange::{exchange_bijection, ExchangeBijection};
use crate::graph::Graph;
use crate::hitting::HittingFamily;
use crate::matroid::{Basis, Matroid, RankOracle};
use crate::polytope::{BasePolytope, FlatInequality};
use crate::Rational;

/// One run of the protocol: Alice's family index, Bob's position `i`
/// (1-based, as in `b_1, .., b_r`) and the element `b'_i` Bob announces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transcript {
    pub family_index: usize,
    pub position: usize,
    pub element: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolStats {
    /// `⌈log2 max(h,1)⌉ + ⌈log2 n⌉ + ⌈log2 r⌉`.
    pub bits: u32,
    pub transcript_count: usize,
}

/// `⌈log2 x⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// How Bob orders his basis against Alice's.
pub trait BobOrdering {
    fn order(&self, m: &Matroid, alice: Basis, bob: Basis) -> Result<ExchangeBijection>;
}

/// The canonical bijection of [`exchange_bijection`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CanonicalOrdering;

impl BobOrdering for CanonicalOrdering {
    fn order(&self, m: &Matroid, alice: Basis, bob: Basis) -> Result<ExchangeBijection> {
        exchange_bijection(m, alice, bob)
    }
}

/// For graphic matroids where Alice's basis is a star `δ(u)`: Bob orients his
/// tree away from `u` and pairs `(u,w)` with the tree edge entering `w`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TreeOrientation;

/// The vertex every edge of `star` touches, if `star` is a spanning star.
fn star_center(g: &Graph, star: Basis) -> Option<usize> {
    if star.len() + 1 != g.vertex_count() {
        return None;
    }
    (0..g.vertex_count()).find(|&v| {
        star.set().iter().all(|e| {
            let (a, b) = g.edge(e);
            a == v || b == v
        })
    })
}

impl BobOrdering for TreeOrientation {
    fn order(&self, m: &Matroid, alice: Basis, bob: Basis) -> Result<ExchangeBijection> {
        let g = m
            .graph()
            .ok_or_else(|| Error::InvalidInput("tree orientation needs a graphic matroid".into()))?;
        let u = star_center(g, alice)
            .ok_or_else(|| Error::InvalidInput(format!("{alice} is not a spanning star")))?;
        let far = g
            .far_endpoints(bob.set(), u)
            .ok_or_else(|| Error::InvalidInput(format!("{bob} is not a spanning tree")))?;
        let map = alice
            .elements()
            .into_iter()
            .map(|star_edge| {
                let (a, b) = g.edge(star_edge);
                let w = if a == u { b } else { a };
                far.iter().find(|&&(_, v)| v == w).map(|&(e, _)| e).expect("tree spans w")
            })
            .collect();
        ExchangeBijection::from_map(alice, bob, map)
    }
}

/// Smallest family index whose basis is tight at `f`.
pub fn alice_choice(fam: &HittingFamily, f: &FlatInequality) -> Result<usize> {
    fam.bases()
        .iter()
        .position(|&b| f.is_tight(b))
        .ok_or_else(|| Error::NotHittingFamily { flat: f.flat.to_string() })
}

/// Alice's output after Bob announces `(position, element)`: `r` if
/// `b_position ∈ F` and `element ∉ F`, else 0.
pub fn alice_output(f: &FlatInequality, alice: Basis, position: usize, element: usize) -> usize {
    let order = alice.elements();
    if f.contains(order[position - 1]) && !f.contains(element) {
        order.len()
    } else {
        0
    }
}

fn mean_output(f: &FlatInequality, bij: &ExchangeBijection) -> Rational {
    let r = bij.source().len();
    let total: usize = (1..=r).map(|i| alice_output(f, bij.source(), i, bij.map()[i - 1])).sum();
    Rational::new(BigInt::from(total), BigInt::from(r))
}

/// Exact expected output with the canonical ordering.
pub fn expected_value(
    p: &BasePolytope,
    fam: &HittingFamily,
    f: &FlatInequality,
    bob: Basis,
) -> Result<Rational> {
    expected_value_with(p, fam, f, bob, &CanonicalOrdering)
}

pub fn expected_value_with(
    p: &BasePolytope,
    fam: &HittingFamily,
    f: &FlatInequality,
    bob: Basis,
    ordering: &dyn BobOrdering,
) -> Result<Rational> {
    let k = alice_choice(fam, f)?;
    let bij = ordering.order(p.matroid(), fam.bases()[k], bob)?;
    Ok(mean_output(f, &bij))
}

/// A (flacet, basis) pair where the protocol's expectation differs from the
/// slack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub flacet: FlatInequality,
    pub basis: Basis,
    pub expected: Rational,
    pub slack: usize,
}

/// Compares the expectation with the slack matrix over the full grid.
/// Returns the number of pairs checked, or the first mismatch.
pub fn check_protocol(
    p: &BasePolytope,
    fam: &HittingFamily,
    ordering: &dyn BobOrdering,
) -> Result<std::result::Result<usize, Discrepancy>> {
    let s = p.slack_matrix();
    for (i, f) in p.flacets().iter().enumerate() {
        for (j, &b) in p.bases().iter().enumerate() {
            let expected = expected_value_with(p, fam, f, b, ordering)?;
            if expected != Rational::from_integer(s.entry(i, j).into()) {
                return Ok(Err(Discrepancy { flacet: *f, basis: b, expected, slack: s.entry(i, j) }));
            }
        }
    }
    Ok(Ok(p.flacets().len() * p.bases().len()))
}

/// Transcripts that can carry weight: some flacet routed to `k` gives a
/// nonzero output on `(i, e)`, and some basis's ordering emits `(i, e)`.
/// Sorted lexicographically.
pub fn enumerate_transcripts(p: &BasePolytope, fam: &HittingFamily) -> Result<Vec<Transcript>> {
    enumerate_transcripts_with(p, fam, &CanonicalOrdering)
}

pub fn enumerate_transcripts_with(
    p: &BasePolytope,
    fam: &HittingFamily,
    ordering: &dyn BobOrdering,
) -> Result<Vec<Transcript>> {
    let mut nonzero = BTreeSet::new();
    for f in p.flacets() {
        let k = alice_choice(fam, f)?;
        let alice = fam.bases()[k];
        for (idx, b_i) in alice.elements().into_iter().enumerate() {
            if f.contains(b_i) {
                for e in p.matroid().ground().difference(f.flat) {
                    nonzero.insert(Transcript { family_index: k, position: idx + 1, element: e });
                }
            }
        }
    }
    let mut emitted = BTreeSet::new();
    for (k, &alice) in fam.bases().iter().enumerate() {
        for &bob in p.bases() {
            let bij = ordering.order(p.matroid(), alice, bob)?;
            for (idx, &e) in bij.map().iter().enumerate() {
                emitted.insert(Transcript { family_index: k, position: idx + 1, element: e });
            }
        }
    }
    Ok(nonzero.intersection(&emitted).copied().collect())
}

pub fn protocol_stats(p: &BasePolytope, fam: &HittingFamily) -> Result<ProtocolStats> {
    Ok(ProtocolStats {
        bits: ceil_log2(fam.len().max(1)) + ceil_log2(p.n()) + ceil_log2(p.rank()),
        transcript_count: enumerate_transcripts(p, fam)?.len(),
    })
}

/// CSV audit trail with columns `k,i,e`.
pub fn transcripts_to_csv(transcripts: &[Transcript]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "i", "e"]).expect("writing to memory");
    for t in transcripts {
        w.serialize((t.family_index, t.position, t.element)).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// A run of the one-bit spanning-tree protocol on `K_n`: Alice's star centre
/// `u`, Bob's tree edge `e`, and one bit naming the endpoint of `e` farther
/// from `u` (false: the edge's first endpoint, true: its second).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarTranscript {
    pub center: usize,
    pub edge: usize,
    pub far_is_second: bool,
}

impl StarTranscript {
    pub fn far_endpoint(&self, g: &Graph) -> usize {
        let (a, b) = g.edge(self.edge);
        if self.far_is_second {
            b
        } else {
            a
        }
    }

    /// The equivalent generic transcript against the star family, where the
    /// position is that of the star edge `(u, far endpoint)` in `δ(u)`.
    pub fn to_transcript(&self, g: &Graph) -> Transcript {
        let star_edge = g.edge_index(self.center, self.far_endpoint(g)).expect("complete graph");
        let position = g.star(self.center).iter().position(|e| e == star_edge).expect("in star");
        Transcript { family_index: self.center, position: position + 1, element: self.edge }
    }
}

fn complete_graph(p: &BasePolytope) -> Result<&Graph> {
    p.matroid()
        .graph()
        .filter(|g| g.is_complete() && g.vertex_count() >= 3)
        .ok_or_else(|| Error::InvalidInput("the one-bit protocol needs K_n with n >= 3".into()))
}

/// Alice's star centre for the flacet `E(U)`: the smallest vertex of `U`
/// other than the last vertex of the graph.
pub fn star_alice_choice(g: &Graph, f: &FlatInequality) -> Result<usize> {
    g.vertices_of(f.flat)
        .into_iter()
        .find(|&v| v + 1 != g.vertex_count())
        .ok_or_else(|| Error::NotHittingFamily { flat: f.flat.to_string() })
}

/// Expected output of the one-bit protocol.
pub fn star_expected_value(p: &BasePolytope, f: &FlatInequality, tree: Basis) -> Result<Rational> {
    let g = complete_graph(p)?;
    let u = star_alice_choice(g, f)?;
    let far = g
        .far_endpoints(tree.set(), u)
        .ok_or_else(|| Error::InvalidInput(format!("{tree} is not a spanning tree")))?;
    let r = tree.len();
    // Bob sends (e, far endpoint w); Alice pays r iff (u,w) ∈ F and e ∉ F.
    let in_u = g.vertices_of(f.flat);
    let total: usize = far
        .iter()
        .filter(|&&(e, w)| in_u.contains(&w) && !f.contains(e))
        .map(|_| r)
        .sum();
    Ok(Rational::new(BigInt::from(total), BigInt::from(r)))
}

/// All one-bit transcripts that can carry weight, in lexicographic order.
pub fn spanning_tree_transcripts(p: &BasePolytope) -> Result<Vec<StarTranscript>> {
    let g = complete_graph(p)?;
    let mut nonzero = BTreeSet::new();
    for f in p.flacets() {
        let u = star_alice_choice(g, f)?;
        let in_u = g.vertices_of(f.flat);
        for e in p.matroid().ground().difference(f.flat) {
            let (a, b) = g.edge(e);
            for (far_is_second, w) in [(false, a), (true, b)] {
                if in_u.contains(&w) {
                    nonzero.insert(StarTranscript { center: u, edge: e, far_is_second });
                }
            }
        }
    }
    let mut emitted = BTreeSet::new();
    for u in 0..g.vertex_count() - 1 {
        for &tree in p.bases() {
            for (e, w) in g.far_endpoints(tree.set(), u).expect("bases are spanning trees") {
                let far_is_second = g.edge(e).1 == w;
                emitted.insert(StarTranscript { center: u, edge: e, far_is_second });
            }
        }
    }
    Ok(nonzero.intersection(&emitted).copied().collect())
}

/// `⌈log2 C(n,2)⌉ + ⌈log2 n⌉ + 1`.
pub fn star_protocol_bits(vertices: usize) -> u32 {
    ceil_log2(vertices * (vertices - 1) / 2) + ceil_log2(vertices) + 1
}
