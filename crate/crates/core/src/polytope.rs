//! The horizontal description of the base polytope `B(M)`.
//!
//! Facet detection is oracle-first: a flat inequality `x(F) ≤ rk(F)` induces a
//! facet iff the bases tight at it span an affine space of dimension
//! `dim B(M) − 1`. The connectivity criterion (`M|F` and `M/F` connected,
//! within the component containing `F`) runs alongside as a fast path and is
//! logged whenever it disagrees with the oracle.
//!
//! Flats and flacets are ordered by rank, then lexicographically by their
//! sorted element lists. Bases are in lexicographic order.
//!
//! For a disconnected matroid, `F` and `F ∪ E_j` (with `E_j` a component
//! disjoint from `F`) induce the same facet. Only the representative that
//! contains no whole component is reported as a flacet.

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::linalg::affine_dimension;
use crate::matroid::{Basis, Caps, Matroid, RankOracle};
use crate::subset::ElementSet;
use crate::Rational;

/// The inequality `x(F) ≤ rk(F)` of a flat `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlatInequality {
    pub flat: ElementSet,
    pub rhs: usize,
    pub facet_inducing: bool,
}

impl FlatInequality {
    pub fn contains(&self, e: usize) -> bool {
        self.flat.contains(e)
    }

    /// `rk(F) − |B ∩ F|`.
    pub fn slack(&self, basis: Basis) -> usize {
        self.rhs - basis.set().intersection(self.flat).len()
    }

    pub fn is_tight(&self, basis: Basis) -> bool {
        basis.set().intersection(self.flat).len() == self.rhs
    }

    pub fn label(&self) -> String {
        self.flat.label()
    }
}

/// Affine dimension of the base polytope, from the difference matrix of its
/// vertices.
pub fn polytope_dimension(m: &Matroid, caps: &Caps) -> Result<usize> {
    let points = incidence_rows(m, &m.bases(caps)?);
    Ok(affine_dimension(points.iter().map(Vec::as_slice), None).unwrap_or(0))
}

fn incidence_rows(m: &Matroid, bases: &[Basis]) -> Vec<Vec<i128>> {
    bases
        .iter()
        .map(|b| (0..m.n()).map(|e| b.contains(e) as i128).collect())
        .collect()
}

/// Whether the connectivity criterion calls `flat` a flacet: it must sit
/// inside one component `E_i` and both `M|F` and `(M|E_i)/F` must be
/// connected.
pub fn connectivity_criterion(m: &Matroid, components: &[ElementSet], flat: ElementSet) -> bool {
    let Some(&component) = components.iter().find(|c| flat.is_subset(**c)) else {
        return false;
    };
    if flat.is_empty() || flat == component {
        return false;
    }
    let restricted = m.restriction(flat).expect("flat lies in the ground set");
    let contracted = m.minor(component, flat).expect("flat lies in its component");
    restricted.is_connected() && contracted.is_connected()
}

/// Outcome of the flacet computation, including any fast-path disagreements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlacetReport {
    /// Every flat with its oracle verdict.
    pub inequalities: Vec<FlatInequality>,
    /// Canonical facet-inducing flats: the rows of the slack matrix.
    pub flacets: Vec<FlatInequality>,
    /// Flats where the connectivity criterion and the oracle disagree.
    pub disagreements: Vec<ElementSet>,
}

fn classify_flats(
    m: &Matroid,
    bases: &[Basis],
    flats: &[ElementSet],
    dimension: usize,
    components: &[ElementSet],
) -> FlacetReport {
    let points = incidence_rows(m, bases);
    let ground = m.ground();
    let mut inequalities = Vec::with_capacity(flats.len());
    let mut flacets = Vec::new();
    let mut disagreements = Vec::new();
    for &flat in flats {
        let rhs = m.rank_of(flat);
        let facet_inducing = if flat.is_empty() || flat == ground || dimension == 0 {
            false
        } else {
            let tight: Vec<&[i128]> = bases
                .iter()
                .zip(&points)
                .filter(|(b, _)| b.set().intersection(flat).len() == rhs)
                .map(|(_, p)| p.as_slice())
                .collect();
            // a tight set covering every vertex is the whole polytope, not a facet
            tight.len() < bases.len()
                && affine_dimension(tight, Some(dimension - 1)) == Some(dimension - 1)
        };
        let ineq = FlatInequality { flat, rhs, facet_inducing };
        inequalities.push(ineq);
        let canonical = !components.iter().any(|c| c.is_subset(flat));
        let by_oracle = facet_inducing && canonical;
        if by_oracle != connectivity_criterion(m, components, flat) {
            log::warn!(
                "flacet fast path disagrees with the facet oracle on {flat}; oracle says {by_oracle}"
            );
            disagreements.push(flat);
        }
        if by_oracle {
            flacets.push(ineq);
        }
    }
    FlacetReport { inequalities, flacets, disagreements }
}

/// The flats inducing facets of `B(M)`, one per facet.
pub fn flacets(m: &Matroid, caps: &Caps) -> Result<Vec<FlatInequality>> {
    Ok(BasePolytope::new(m.clone(), caps)?.flacets().to_vec())
}

/// Slack matrix `S[F,B] = rk(F) − |B ∩ F|`; rows are flacets, columns are bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackMatrix {
    rows: Vec<FlatInequality>,
    cols: Vec<Basis>,
    entries: Vec<Vec<usize>>,
}

impl SlackMatrix {
    pub fn new(rows: Vec<FlatInequality>, cols: Vec<Basis>) -> Self {
        let entries = rows
            .iter()
            .map(|f| cols.iter().map(|&b| f.slack(b)).collect())
            .collect();
        SlackMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> &[FlatInequality] {
        &self.rows
    }

    pub fn cols(&self) -> &[Basis] {
        &self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.entries[row][col]
    }

    pub fn row(&self, row: usize) -> &[usize] {
        &self.entries[row]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    /// CSV with a header of basis labels and a leading column of flacet
    /// labels; labels are sorted element lists joined by `-`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("flacet".to_string()).chain(self.cols.iter().map(|b| b.label()));
        w.write_record(header).expect("writing to memory");
        for (f, row) in self.rows.iter().zip(&self.entries) {
            let record = std::iter::once(f.label()).chain(row.iter().map(|v| v.to_string()));
            w.write_record(record).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
    }
}

/// A constraint of the description of `B(M)` violated by a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, actual: usize },
    Negative { element: usize },
    AboveOne { element: usize },
    /// `x(E) ≠ rk(E)`.
    Total { sum: Rational, rank: usize },
    /// `x(F) > rk(F)`.
    Flat { flat: ElementSet, lhs: Rational, rhs: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    Violated(Violation),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

fn check_point(m: &Matroid, flats: &[ElementSet], x: &[Rational]) -> Membership {
    use Membership::Violated;
    if x.len() != m.n() {
        return Violated(Violation::WrongLength { expected: m.n(), actual: x.len() });
    }
    for (element, v) in x.iter().enumerate() {
        if v.is_negative() {
            return Violated(Violation::Negative { element });
        }
        if *v > Rational::one() {
            return Violated(Violation::AboveOne { element });
        }
    }
    let sum_over = |s: ElementSet| s.iter().fold(Rational::zero(), |acc, e| acc + &x[e]);
    let total = sum_over(m.ground());
    if total != Rational::from_integer(m.rank().into()) {
        return Violated(Violation::Total { sum: total, rank: m.rank() });
    }
    for &flat in flats {
        let lhs = sum_over(flat);
        let rhs = m.rank_of(flat);
        if lhs > Rational::from_integer(rhs.into()) {
            return Violated(Violation::Flat { flat, lhs, rhs });
        }
    }
    Membership::Member
}

/// Tests `x ∈ B(M)` against the full flat description.
pub fn membership(m: &Matroid, x: &[Rational], caps: &Caps) -> Result<Membership> {
    Ok(check_point(m, &m.flats(caps)?, x))
}

/// Everything the downstream modules need about `B(M)`, computed once.
#[derive(Debug, Clone)]
pub struct BasePolytope {
    matroid: Matroid,
    caps: Caps,
    bases: Vec<Basis>,
    flats: Vec<ElementSet>,
    components: Vec<ElementSet>,
    dimension: usize,
    report: FlacetReport,
    slack: SlackMatrix,
}

impl BasePolytope {
    pub fn new(matroid: Matroid, caps: &Caps) -> Result<Self> {
        let bases = matroid.bases(caps)?;
        let flats = matroid.flats(caps)?;
        let components = matroid.components();
        let points = incidence_rows(&matroid, &bases);
        let dimension = affine_dimension(points.iter().map(Vec::as_slice), None).unwrap_or(0);
        let report = classify_flats(&matroid, &bases, &flats, dimension, &components);
        let slack = SlackMatrix::new(report.flacets.clone(), bases.clone());
        Ok(BasePolytope { matroid, caps: *caps, bases, flats, components, dimension, report, slack })
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn n(&self) -> usize {
        self.matroid.n()
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn flats(&self) -> &[ElementSet] {
        &self.flats
    }

    pub fn components(&self) -> &[ElementSet] {
        &self.components
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn flacets(&self) -> &[FlatInequality] {
        &self.report.flacets
    }

    pub fn flacet_report(&self) -> &FlacetReport {
        &self.report
    }

    pub fn slack_matrix(&self) -> &SlackMatrix {
        &self.slack
    }

    pub fn basis_index(&self, b: Basis) -> Option<usize> {
        self.bases.binary_search_by(|probe| probe.set().lex_cmp(b.set())).ok()
    }

    pub fn membership(&self, x: &[Rational]) -> Membership {
        check_point(&self.matroid, &self.flats, x)
    }
}
