//! Exact-arithmetic invariants of coisotropy representations of reductive pairs.
//!
//! Given a reductive pair `H ⊂ G` (an [`embed::EmbeddingSpec`]), the crate computes
//! the complexity and rank of the double homogeneous space `(G×H)/ΔH`, the dimension
//! of the nullcone of the isotropy action `(H : g)`, the defect of equidimensionality,
//! s-regularity, branching decompositions along the pair, Chevalley-basis realizations
//! with pointwise orbit-dimension identities, and Lie-Poisson / coisotropy brackets of
//! invariants. Everything is exact: integer weight combinatorics and rational linear
//! algebra, no floats.

pub mod catalog;
pub mod embed;
pub mod homog;
pub mod liealg;
pub mod linalg;
pub mod poisson;
pub mod poly;
pub mod repth;
pub mod rootsys;

use num::rational::Ratio;

/// Exact scalar for weight coordinates, torus charges and restriction matrices.
pub type Rat = Ratio<i64>;

/// Exact scalar for linear algebra over the Chevalley basis and polynomial evaluation.
pub type BigRat = num::BigRational;

pub use rootsys::{RootSystem, SimpleType, Weight};

/// Parses an exact rational from `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Catalog(format!("bad rational {s:?}"));
    match s.split_once('/') {
        None => s.trim().parse::<i64>().map(Rat::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("inadmissible simple type {0}")]
    InadmissibleType(String),
    #[error("weight {0} is not dominant")]
    NonDominant(String),
    #[error("inconsistent embedding: {0}")]
    InconsistentEmbedding(String),
    #[error("embedding does not contain its adjoint: {0}")]
    AdjointNotContained(String),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("inadmissible pair: {0}")]
    InadmissiblePair(String),
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("embedding/realization mismatch: {0}")]
    RealizationMismatch(String),
    #[error("vector is not in the isotropy space: {0}")]
    NotInIsotropy(String),
    #[error("generator is not invariant: {0}")]
    NotInvariant(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Desk-scale bounds used by searches and constructions. The defaults reproduce
/// the bundled catalog expectations; raise them for larger sweeps.
#[derive(Debug, Clone)]
pub struct Config {
    /// Coordinate-sum bound for exhaustive dominant-weight scans.
    pub coord_sum_bound: u32,
    /// Largest rank for which Chevalley structure constants are built.
    pub chevalley_max_rank: usize,
    /// Bound on numerators/denominators of sampled rational points.
    pub point_height: i64,
    /// Consecutive stable samples required before a sampled rank is called generic.
    pub rank_stabilize: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            coord_sum_bound: 3,
            chevalley_max_rank: 4,
            point_height: 100,
            rank_stabilize: 5,
        }
    }
}
