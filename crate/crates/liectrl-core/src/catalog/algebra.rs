use serde::Serialize;
use std::fmt;

use super::CatalogError;

/// Cartan family of a compact simple Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub const ALL: [Family; 9] =
        [Family::A, Family::B, Family::C, Family::D, Family::E6, Family::E7, Family::E8, Family::F4, Family::G2];

    fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }

    fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B => 2,
            Family::C => 3,
            Family::D => 4,
            other => other.fixed_rank().expect("exceptional"),
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        }
    }
}

/// A compact simple Lie algebra, one representative per isomorphism class.
/// The rank bounds rule out the low-rank coincidences
/// `so(3) = su(2) = sp(1)`, `so(5) = sp(2)`, `so(6) = su(4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AlgebraId {
    pub family: Family,
    pub rank: usize,
}

impl AlgebraId {
    pub fn new(family: Family, rank: usize) -> Result<AlgebraId, CatalogError> {
        let ok = match family.fixed_rank() {
            Some(r) => rank == r,
            None => rank >= family.min_rank(),
        };
        if ok {
            Ok(AlgebraId { family, rank })
        } else {
            Err(CatalogError::BadRank { family: family.letter(), rank })
        }
    }

    pub fn su(n: usize) -> AlgebraId {
        AlgebraId { family: Family::A, rank: n - 1 }
    }

    pub fn exceptional(family: Family) -> AlgebraId {
        AlgebraId { family, rank: family.fixed_rank().expect("exceptional family") }
    }

    /// Dimension of the Lie algebra itself.
    pub fn algebra_dim(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 2),
            Family::B | Family::C => l * (2 * l + 1),
            Family::D => l * (2 * l - 1),
            Family::E6 => 78,
            Family::E7 => 133,
            Family::E8 => 248,
            Family::F4 => 52,
            Family::G2 => 14,
        }
    }

    /// Highest weight of the standard representation (first listed member).
    pub fn standard_weight(&self) -> Vec<u32> {
        let mut w = vec![0; self.rank];
        match self.family {
            Family::E7 | Family::E8 | Family::F4 => w[self.rank - 1] = 1,
            _ => w[0] = 1,
        }
        w
    }

    /// Images of `w` under the diagram automorphisms, sorted in descending
    /// order without duplicates.
    pub fn outer_orbit(&self, w: &[u32]) -> Vec<Vec<u32>> {
        let mut out = vec![w.to_vec()];
        match self.family {
            Family::A => out.push(w.iter().rev().copied().collect()),
            Family::D if self.rank == 4 => {
                let (a, b, c) = (w[0], w[2], w[3]);
                for (p, q, r) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    out.push(vec![p, w[1], q, r]);
                }
            }
            Family::D => {
                let mut v = w.to_vec();
                v.swap(self.rank - 2, self.rank - 1);
                out.push(v);
            }
            Family::E6 => out.push(vec![w[5], w[1], w[4], w[3], w[2], w[0]]),
            _ => {}
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.rank;
        match self.family {
            Family::A => write!(f, "su({})", l + 1),
            Family::B => write!(f, "so({})", 2 * l + 1),
            Family::C => write!(f, "sp({l})"),
            Family::D => write!(f, "so({})", 2 * l),
            Family::E6 => write!(f, "e6"),
            Family::E7 => write!(f, "e7"),
            Family::E8 => write!(f, "e8"),
            Family::F4 => write!(f, "f4"),
            Family::G2 => write!(f, "g2"),
        }
    }
}

pub fn format_weight(w: &[u32]) -> String {
    let parts: Vec<String> = w.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}
