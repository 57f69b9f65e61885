//! Irreducible representations of compact simple Lie algebras and the
//! inclusion lattices of irreducible simple subalgebras of `su(N)`.
//!
//! Weights are nonnegative integer vectors in Bourbaki node order. Records
//! are kept one per outer-automorphism orbit, represented by the
//! lexicographically largest member.

mod algebra;
mod dims;
mod enumerate;
mod lattice;
mod malcev;

use serde::Serialize;
use std::fmt;
use thiserror::Error;

pub use algebra::{format_weight, AlgebraId, Family};
pub use dims::{gram_matrix, irrep_dimension, irrep_dimension_u64, positive_roots, weyl_dimension};
pub use enumerate::{enumerate_box_oracle, enumerate_irreps, unitary_subalgebras_exist};
pub use lattice::{
    build_lattice, build_lattice_with_cap, catalog_csv_rows, exception_parent, lattices_up_to, so4k3_exception_dim,
    CatalogCsvRow, Lattice, LatticeEdge, LatticeNode, RootKind, DEFAULT_LATTICE_CAP,
};
pub use malcev::malcev_type;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("family {family} has no simple algebra of rank {rank}")]
    BadRank { family: &'static str, rank: usize },
    #[error("highest weight has length {got}, expected the rank {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("lattice size {n} outside the supported range 2..={cap}")]
    CapExceeded { n: u64, cap: u64 },
}

/// Malcev type of an irreducible representation: symplectic, orthogonal or
/// unitary (no invariant bilinear form).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Malcev {
    S,
    O,
    U,
}

impl fmt::Display for Malcev {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Malcev::S => "s",
            Malcev::O => "o",
            Malcev::U => "u",
        })
    }
}

/// One irreducible representation, up to outer automorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IrrepRecord {
    pub algebra: AlgebraId,
    /// Orbit representative.
    pub weight: Vec<u32>,
    /// All weights in the outer orbit, representative first.
    pub orbit: Vec<Vec<u32>>,
    pub dim: u64,
    pub malcev: Malcev,
}

impl IrrepRecord {
    /// Builds the record for `weight`, replacing it by its orbit representative.
    pub fn new(algebra: AlgebraId, weight: &[u32]) -> Result<IrrepRecord, CatalogError> {
        let orbit = algebra.outer_orbit(weight);
        let weight = orbit[0].clone();
        let dim = irrep_dimension_u64(&algebra, &weight)?.expect("dimension fits in 64 bits");
        let malcev = malcev_type(&algebra, &weight)?;
        Ok(IrrepRecord { algebra, weight, orbit, dim, malcev })
    }

    pub(crate) fn with_dim(algebra: AlgebraId, weight: &[u32], dim: u64) -> IrrepRecord {
        let orbit = algebra.outer_orbit(weight);
        let weight = orbit[0].clone();
        let malcev = malcev_type(&algebra, &weight).expect("weight length matches rank");
        IrrepRecord { algebra, weight, orbit, dim, malcev }
    }

    /// Conventional name, using the low-rank isomorphisms
    /// `B2 = sp(2)` for symplectic weights and `A3 = so(6)` for orthogonal ones.
    pub fn display_name(&self) -> String {
        match (self.algebra.family, self.algebra.rank, self.malcev) {
            (Family::B, 2, Malcev::S) => "sp(2)".to_string(),
            (Family::A, 3, Malcev::O) => "so(6)".to_string(),
            _ => self.algebra.to_string(),
        }
    }

    /// Orbit weights in the coordinates matching [`IrrepRecord::display_name`].
    pub fn display_orbit(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self
            .orbit
            .iter()
            .map(|w| match (self.algebra.family, self.algebra.rank, self.malcev) {
                (Family::B, 2, Malcev::S) => vec![w[1], w[0]],
                (Family::A, 3, Malcev::O) => vec![w[1], w[0], w[2]],
                _ => w.clone(),
            })
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }

    /// Orbit written as `(1,0,0,0)/(0,0,1,0)/(0,0,0,1)`.
    pub fn display_weights(&self) -> String {
        self.display_orbit().iter().map(|w| format_weight(w)).collect::<Vec<_>>().join("/")
    }

    pub fn is_standard(&self) -> bool {
        self.orbit.contains(&self.algebra.standard_weight())
    }
}

impl fmt::Display for IrrepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.dim, self.display_name(), self.malcev, self.display_weights())
    }
}
