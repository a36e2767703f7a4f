//! Matroid base polytopes in exact arithmetic: facets (flacets), hitting
//! families, the randomized slack protocol driven by bijective basis
//! exchange, and the extended formulation that protocol induces, together
//! with brute-force verification.
//!
//! The pipeline is
//! [`Matroid`] → [`BasePolytope`] → [`HittingFamily`] → protocol
//! transcripts → [`NonnegFactorization`] → [`ExtendedFormulation`],
//! with [`lp`] supplying an exact simplex solver for the final check.

pub mod error;
pub mod exchange;
pub mod factorization;
pub mod graph;
pub mod hitting;
pub mod linalg;
pub mod lp;
pub mod matroid;
pub mod polytope;
pub mod protocol;
pub mod subset;

/// Exact rational numbers used for every non-integer quantity.
pub type Rational = num_rational::BigRational;

pub use error::{Error, Result};
pub use exchange::{exchange_bijection, slack_by_ordering, ExchangeBijection};
pub use factorization::{ExtendedFormulation, NonnegFactorization};
pub use graph::Graph;
pub use hitting::HittingFamily;
pub use matroid::{Basis, Caps, Matroid, Minor, RankOracle};
pub use polytope::{BasePolytope, FlatInequality, SlackMatrix};
pub use protocol::{ProtocolStats, Transcript};
pub use subset::ElementSet;
