//! From protocol to polyhedron.
//!
//! Every transcript `t = (k, i, e)` becomes one column of a nonnegative
//! factorization `S = T·U` of the slack matrix: `T[F,t]` is Alice's output on
//! `t` (0 or `r`) and `U[t,B']` is the probability (0 or `1/r`) that Bob,
//! holding `B'`, produces `t`. The factorization in turn yields the extended
//! formulation
//!
//! ```text
//! x(E_i) = r_i                      for each connected component E_i
//! x(F) + Σ_t T[F,t]·y_t = rk(F)     for each flacet F
//! 0 ≤ x ≤ 1,  y ≥ 0
//! ```
//!
//! whose projection onto `x` is the base polytope.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hitting::{star_hitting_family, HittingFamily};
use crate::lp::{maximize, LinearProgram, LpOutcome, RowKind};
use crate::matroid::{Basis, RankOracle};
use crate::polytope::{BasePolytope, Membership};
use crate::protocol::{
    alice_choice, alice_output, enumerate_transcripts_with, spanning_tree_transcripts,
    BobOrdering, CanonicalOrdering, Transcript, TreeOrientation,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegFactorization {
    columns: Vec<Transcript>,
    /// `T`: flacets × columns.
    left: Vec<Vec<Rational>>,
    /// `U`: columns × bases.
    right: Vec<Vec<Rational>>,
}

impl NonnegFactorization {
    pub fn columns(&self) -> &[Transcript] {
        &self.columns
    }

    pub fn inner_dimension(&self) -> usize {
        self.columns.len()
    }

    pub fn left(&self) -> &[Vec<Rational>] {
        &self.left
    }

    pub fn right(&self) -> &[Vec<Rational>] {
        &self.right
    }

    /// `U[:, basis]`, the lift of the vertex `χ^B`.
    pub fn lift(&self, basis: usize) -> Vec<Rational> {
        self.right.iter().map(|row| row[basis].clone()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.left.iter().chain(&self.right).flatten().all(|v| !v.is_negative())
    }

    pub fn product_entry(&self, row: usize, col: usize) -> Rational {
        self.left[row]
            .iter()
            .zip(&self.right)
            .filter(|(t, _)| !t.is_zero())
            .fold(Rational::zero(), |acc, (t, u)| acc + t * &u[col])
    }

    /// First `(row, col)` where `T·U` differs from the slack matrix.
    pub fn first_mismatch(&self, p: &BasePolytope) -> Option<(usize, usize)> {
        let s = p.slack_matrix();
        let (rows, cols) = s.shape();
        (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).find(|&(i, j)| {
            self.product_entry(i, j) != Rational::from_integer(s.entry(i, j).into())
        })
    }

    /// Replaces one entry of `U`, for fault-injection tests.
    pub fn set_right_entry(&mut self, column: usize, basis: usize, value: Rational) {
        self.right[column][basis] = value;
    }
}

/// Builds `T` and `U` for the given transcripts and Bob ordering, prunes
/// all-zero columns of `T`, and checks `T·U = S`.
pub fn factorize_with(
    p: &BasePolytope,
    fam: &HittingFamily,
    ordering: &dyn BobOrdering,
    transcripts: Vec<Transcript>,
) -> Result<NonnegFactorization> {
    let r = p.rank();
    let r_value = Rational::from_integer(BigInt::from(r));
    let inv_r = Rational::new(BigInt::one(), BigInt::from(r));

    let left_column = |t: &Transcript| -> Result<Vec<Rational>> {
        p.flacets()
            .iter()
            .map(|f| {
                let k = alice_choice(fam, f)?;
                let out = if k == t.family_index {
                    alice_output(f, fam.bases()[k], t.position, t.element)
                } else {
                    0
                };
                Ok(if out == 0 { Rational::zero() } else { r_value.clone() })
            })
            .collect()
    };

    let mut columns = Vec::with_capacity(transcripts.len());
    let mut left_cols = Vec::with_capacity(transcripts.len());
    for t in transcripts {
        let col = left_column(&t)?;
        if col.iter().any(|v| !v.is_zero()) {
            columns.push(t);
            left_cols.push(col);
        }
    }

    let index: HashMap<Transcript, usize> = columns.iter().enumerate().map(|(c, t)| (*t, c)).collect();
    let mut right = vec![vec![Rational::zero(); p.bases().len()]; columns.len()];
    for (k, &alice) in fam.bases().iter().enumerate() {
        for (j, &bob) in p.bases().iter().enumerate() {
            let bij = ordering.order(p.matroid(), alice, bob)?;
            for (i, &e) in bij.map().iter().enumerate() {
                let t = Transcript { family_index: k, position: i + 1, element: e };
                if let Some(&c) = index.get(&t) {
                    right[c][j] = inv_r.clone();
                }
            }
        }
    }

    let left = (0..p.flacets().len())
        .map(|i| left_cols.iter().map(|col| col[i].clone()).collect())
        .collect();
    let fac = NonnegFactorization { columns, left, right };
    if let Some((i, j)) = fac.first_mismatch(p) {
        return Err(Error::InternalConsistency(format!(
            "T·U differs from the slack matrix at flacet {} and basis {}",
            p.flacets()[i].flat,
            p.bases()[j]
        )));
    }
    Ok(fac)
}

/// The factorization induced by the protocol with canonical exchange
/// bijections.
pub fn factorize_from_transcripts(p: &BasePolytope, fam: &HittingFamily) -> Result<NonnegFactorization> {
    let transcripts = enumerate_transcripts_with(p, fam, &CanonicalOrdering)?;
    factorize_with(p, fam, &CanonicalOrdering, transcripts)
}

/// The factorization induced by the one-bit spanning-tree protocol on `K_n`,
/// with the star family it uses.
pub fn factorize_one_bit(p: &BasePolytope) -> Result<(HittingFamily, NonnegFactorization)> {
    let fam = star_hitting_family(p)?;
    let g = p.matroid().graph().expect("star family implies a graph");
    let transcripts = spanning_tree_transcripts(p)?.iter().map(|t| t.to_transcript(g)).collect();
    let fac = factorize_with(p, &fam, &TreeOrientation, transcripts)?;
    Ok((fam, fac))
}

/// `Σ x-terms + Σ y-terms = rhs`, sparse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equality {
    pub x: Vec<(usize, Rational)>,
    pub y: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// The lifted system; box constraints `0 ≤ x ≤ 1` and `y ≥ 0` are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedFormulation {
    num_x: usize,
    num_y: usize,
    equalities: Vec<Equality>,
}

/// A constraint of an [`ExtendedFormulation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Equality(usize),
    XLower(usize),
    XUpper(usize),
    YLower(usize),
}

pub fn build_extended_formulation(p: &BasePolytope, fac: &NonnegFactorization) -> ExtendedFormulation {
    let one = Rational::one();
    let mut equalities: Vec<Equality> = p
        .components()
        .iter()
        .map(|&c| Equality {
            x: c.iter().map(|e| (e, one.clone())).collect(),
            y: Vec::new(),
            rhs: Rational::from_integer(p.matroid().rank_of(c).into()),
        })
        .collect();
    for (f, t_row) in p.flacets().iter().zip(fac.left()) {
        equalities.push(Equality {
            x: f.flat.iter().map(|e| (e, one.clone())).collect(),
            y: t_row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(t, v)| (t, v.clone()))
                .collect(),
            rhs: Rational::from_integer(f.rhs.into()),
        });
    }
    ExtendedFormulation { num_x: p.n(), num_y: fac.inner_dimension(), equalities }
}

fn term_sum(terms: &[(usize, Rational)], values: &[Rational]) -> Rational {
    terms.iter().fold(Rational::zero(), |acc, (i, c)| acc + c * &values[*i])
}

impl ExtendedFormulation {
    pub fn num_x(&self) -> usize {
        self.num_x
    }

    pub fn num_y(&self) -> usize {
        self.num_y
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    /// Number of inequalities: `2n` box constraints plus one per `y`.
    /// Equalities are not counted.
    pub fn size(&self) -> usize {
        2 * self.num_x + self.num_y
    }

    /// First constraint `(x, y)` violates, if any.
    pub fn first_violation(&self, x: &[Rational], y: &[Rational]) -> Option<Constraint> {
        assert_eq!((x.len(), y.len()), (self.num_x, self.num_y));
        if let Some(i) = self
            .equalities
            .iter()
            .position(|eq| term_sum(&eq.x, x) + term_sum(&eq.y, y) != eq.rhs)
        {
            return Some(Constraint::Equality(i));
        }
        for (e, v) in x.iter().enumerate() {
            if v.is_negative() {
                return Some(Constraint::XLower(e));
            }
            if *v > Rational::one() {
                return Some(Constraint::XUpper(e));
            }
        }
        y.iter().position(|v| v.is_negative()).map(Constraint::YLower)
    }

    /// The formulation as an LP maximizing `objective · x`.
    pub fn to_lp(&self, objective: &[Rational]) -> Result<LinearProgram> {
        if objective.len() != self.num_x {
            return Err(Error::InvalidInput("objective must cover exactly the x variables".into()));
        }
        let width = self.num_x + self.num_y;
        let mut lp = LinearProgram::new(width);
        for e in 0..self.num_x {
            lp.set_bounds(e, Some(Rational::zero()), Some(Rational::one()))?;
        }
        for eq in &self.equalities {
            let mut coeffs = vec![Rational::zero(); width];
            for (e, c) in &eq.x {
                coeffs[*e] = c.clone();
            }
            for (t, c) in &eq.y {
                coeffs[self.num_x + t] = c.clone();
            }
            lp.add_row(coeffs, RowKind::Eq, eq.rhs.clone())?;
        }
        let mut full = objective.to_vec();
        full.resize(width, Rational::zero());
        lp.set_objective(full)?;
        Ok(lp)
    }

    /// Plain-text export: a header line, then one constraint per line with
    /// coefficients written as `p/q`.
    pub fn to_text(&self) -> String {
        let frac = |v: &Rational| format!("{}/{}", v.numer(), v.denom());
        let mut out = format!(
            "num_x={} num_y={} size={} equalities={}\n",
            self.num_x,
            self.num_y,
            self.size(),
            self.equalities.len()
        );
        for eq in &self.equalities {
            let terms: Vec<String> = eq
                .x
                .iter()
                .map(|(e, c)| format!("{} x{e}", frac(c)))
                .chain(eq.y.iter().map(|(t, c)| format!("{} y{t}", frac(c))))
                .collect();
            writeln!(out, "{} = {}", terms.join(" + "), frac(&eq.rhs)).unwrap();
        }
        for e in 0..self.num_x {
            writeln!(out, "1/1 x{e} >= 0/1").unwrap();
            writeln!(out, "1/1 x{e} <= 1/1").unwrap();
        }
        for t in 0..self.num_y {
            writeln!(out, "1/1 y{t} >= 0/1").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftingCheck {
    AllLifted { bases: usize },
    Violated { basis: Basis, constraint: Constraint },
}

impl LiftingCheck {
    pub fn passed(&self) -> bool {
        matches!(self, LiftingCheck::AllLifted { .. })
    }
}

/// Checks that every vertex `χ^B` lifts to `(χ^B, U[:,B])` in the formulation.
pub fn verify_vertex_lifting(
    p: &BasePolytope,
    ef: &ExtendedFormulation,
    fac: &NonnegFactorization,
) -> LiftingCheck {
    for (j, &b) in p.bases().iter().enumerate() {
        let x: Vec<Rational> =
            b.incidence(p.n()).into_iter().map(|v| Rational::from_integer(v.into())).collect();
        if let Some(constraint) = ef.first_violation(&x, &fac.lift(j)) {
            return LiftingCheck::Violated { basis: b, constraint };
        }
    }
    LiftingCheck::AllLifted { bases: p.bases().len() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimizationCheck {
    AllMatch { objectives: usize },
    Mismatch { objective: Vec<i64>, formulation: Rational, vertices: i64 },
    /// The simplex optimum projects outside the base polytope.
    OutsidePolytope { objective: Vec<i64>, point: Vec<Rational> },
}

impl OptimizationCheck {
    pub fn passed(&self) -> bool {
        matches!(self, OptimizationCheck::AllMatch { .. })
    }
}

/// For each objective `c`, compares `max c·x` over the formulation (exact
/// simplex) with the best basis. Optimal points are also checked against the
/// full flat description of the base polytope.
pub fn verify_optimization_equivalence(
    p: &BasePolytope,
    ef: &ExtendedFormulation,
    objectives: &[Vec<i64>],
) -> Result<OptimizationCheck> {
    for c in objectives {
        if c.len() != p.n() {
            return Err(Error::InvalidInput("objective length differs from the ground set".into()));
        }
        let best_vertex = p
            .bases()
            .iter()
            .map(|b| b.set().iter().map(|e| c[e]).sum::<i64>())
            .max()
            .expect("at least one basis");
        let coeffs: Vec<Rational> = c.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let (value, point) = match maximize(&ef.to_lp(&coeffs)?)? {
            LpOutcome::Optimal { value, point } => (value, point),
            other => {
                return Err(Error::InternalConsistency(format!(
                    "extended formulation LP is {other:?} for objective {c:?}"
                )))
            }
        };
        if value != Rational::from_integer(best_vertex.into()) {
            return Ok(OptimizationCheck::Mismatch {
                objective: c.clone(),
                formulation: value,
                vertices: best_vertex,
            });
        }
        let x = point[..p.n()].to_vec();
        if p.membership(&x) != Membership::Member {
            return Ok(OptimizationCheck::OutsidePolytope { objective: c.clone(), point: x });
        }
    }
    Ok(OptimizationCheck::AllMatch { objectives: objectives.len() })
}

/// `count` integer objectives with entries in `-5..=5`, reproducible from `seed`.
pub fn random_objectives(n: usize, count: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| rng.random_range(-5..=5)).collect()).collect()
}
