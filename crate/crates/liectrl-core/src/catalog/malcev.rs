use super::algebra::{AlgebraId, Family};
use super::{CatalogError, Malcev};

fn parity(odd: bool) -> Malcev {
    if odd {
        Malcev::S
    } else {
        Malcev::O
    }
}

/// Malcev type of the irrep with highest weight `w`.
pub fn malcev_type(alg: &AlgebraId, w: &[u32]) -> Result<Malcev, CatalogError> {
    let l = alg.rank;
    if w.len() != l {
        return Err(CatalogError::WeightLength { expected: l, got: w.len() });
    }
    let x = |i: usize| w[i - 1];
    Ok(match alg.family {
        Family::A => {
            let symmetric = w.iter().eq(w.iter().rev());
            if !symmetric {
                Malcev::U
            } else {
                parity(l % 4 == 1 && x((l - 1) / 2 + 1) % 2 == 1)
            }
        }
        Family::B => parity(matches!(l % 4, 1 | 2) && x(l) % 2 == 1),
        Family::C => parity((1..=l).step_by(2).map(x).sum::<u32>() % 2 == 1),
        Family::D => {
            if l % 4 == 2 && (x(l - 1) + x(l)) % 2 == 1 {
                Malcev::S
            } else if l % 2 == 1 && x(l - 1) != x(l) {
                Malcev::U
            } else {
                Malcev::O
            }
        }
        Family::E6 => {
            if x(1) == x(6) && x(3) == x(5) {
                Malcev::O
            } else {
                Malcev::U
            }
        }
        Family::E7 => parity((x(2) + x(5) + x(7)) % 2 == 1),
        Family::E8 | Family::F4 | Family::G2 => Malcev::O,
    })
}
