use super::{ControlSystem, SystemError};
use crate::pauli::{Letter, PauliExpr, PauliTerm};
use num_rational::BigRational;
use num_traits::One;
use std::fmt;
use std::str::FromStr;

/// Named spin-chain families and fixed small examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    /// XX chain, local X and Y on the first qubit.
    XxOneEnd,
    /// XX chain, local X and Y on both end qubits.
    XxTwoEnds,
    /// XX chain, local X and Y on the second qubit only.
    XxSecondSite,
    /// XX chain, independent local X and Y on the first two qubits.
    XxFirstTwoSites,
    /// Odd Ising ZZ chain with couplings of opposite sign on the two halves
    /// and mirror-symmetric pair controls.
    IsingAntisym,
    /// The same Ising chain with collective X and Y controls.
    IsingCollective,
    /// Four-qubit XX chain with full local control of both ends.
    Counter1,
    /// Three-qubit XX chain with full local control of the first qubit.
    Counter2,
    /// Two uncoupled fully controlled qubits.
    Ex1,
    /// Three fully controlled qubits with a ZZZ drift.
    Zzz,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 10] = [
        ModelFamily::XxOneEnd,
        ModelFamily::XxTwoEnds,
        ModelFamily::XxSecondSite,
        ModelFamily::XxFirstTwoSites,
        ModelFamily::IsingAntisym,
        ModelFamily::IsingCollective,
        ModelFamily::Counter1,
        ModelFamily::Counter2,
        ModelFamily::Ex1,
        ModelFamily::Zzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::XxOneEnd => "xx-one-end",
            ModelFamily::XxTwoEnds => "xx-two-ends",
            ModelFamily::XxSecondSite => "xx-second-site",
            ModelFamily::XxFirstTwoSites => "xx-first-two-sites",
            ModelFamily::IsingAntisym => "ising-antisym",
            ModelFamily::IsingCollective => "ising-collective",
            ModelFamily::Counter1 => "example-counter1",
            ModelFamily::Counter2 => "example-counter2",
            ModelFamily::Ex1 => "example-ex1",
            ModelFamily::Zzz => "example-zzz",
        }
    }

    /// Qubit count of the fixed examples.
    pub fn fixed_size(self) -> Option<usize> {
        match self {
            ModelFamily::Counter1 => Some(4),
            ModelFamily::Counter2 | ModelFamily::Zzz => Some(3),
            ModelFamily::Ex1 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase();
        ModelFamily::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_lowercase() == key)
            .or(match key.as_str() {
                "counter1" => Some(ModelFamily::Counter1),
                "counter2" => Some(ModelFamily::Counter2),
                "ex1" => Some(ModelFamily::Ex1),
                "zzz" | "appendixa-zzz" => Some(ModelFamily::Zzz),
                _ => None,
            })
            .ok_or_else(|| format!("unknown model family {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub family: ModelFamily,
    /// Qubit count. Ignored by the fixed examples when `None`.
    pub n: Option<usize>,
}

impl ModelSpec {
    pub fn new(family: ModelFamily, n: usize) -> ModelSpec {
        ModelSpec { family, n: Some(n) }
    }

    pub fn fixed(family: ModelFamily) -> ModelSpec {
        ModelSpec { family, n: None }
    }
}

fn term(n: usize, sites: &[(usize, Letter)]) -> Result<PauliExpr, SystemError> {
    let mut letters = vec![Letter::I; n];
    for &(q, l) in sites {
        letters[q] = l;
    }
    Ok(PauliExpr::from_term(PauliTerm::from_letters(&letters)?, BigRational::one()))
}

fn local(n: usize, q: usize, l: Letter) -> Result<PauliExpr, SystemError> {
    term(n, &[(q, l)])
}

fn sum(n: usize, parts: Vec<PauliExpr>) -> Result<PauliExpr, SystemError> {
    parts.iter().try_fold(PauliExpr::zero(n)?, |acc, e| Ok(acc.add(e)?))
}

/// `sum_k (X_k X_(k+1) + Y_k Y_(k+1))` over neighbouring qubits.
fn xx_chain(n: usize) -> Result<PauliExpr, SystemError> {
    let mut parts = Vec::new();
    for k in 0..n - 1 {
        for l in [Letter::X, Letter::Y] {
            parts.push(term(n, &[(k, l), (k + 1, l)])?);
        }
    }
    sum(n, parts)
}

/// `sum_(j<=k) Z_j Z_(j+1) - sum_(j>k) Z_j Z_(j+1)` for `n = 2k + 1`.
fn antisym_ising_drift(n: usize) -> Result<PauliExpr, SystemError> {
    let k = n / 2;
    let mut out = PauliExpr::zero(n)?;
    for j in 0..n - 1 {
        let zz = term(n, &[(j, Letter::Z), (j + 1, Letter::Z)])?;
        out = if j < k { out.add(&zz)? } else { out.sub(&zz)? };
    }
    Ok(out)
}

fn xy(n: usize, q: usize) -> Result<Vec<PauliExpr>, SystemError> {
    Ok(vec![local(n, q, Letter::X)?, local(n, q, Letter::Y)?])
}

fn xyz(n: usize, q: usize) -> Result<Vec<PauliExpr>, SystemError> {
    Ok(vec![local(n, q, Letter::X)?, local(n, q, Letter::Y)?, local(n, q, Letter::Z)?])
}

fn require(family: ModelFamily, ok: bool, requirement: &'static str, n: usize) -> Result<(), SystemError> {
    if ok {
        Ok(())
    } else {
        Err(SystemError::BadSize { family: family.name(), requirement, n })
    }
}

/// Builds the generators of a model family.
pub fn make_model(spec: &ModelSpec) -> Result<ControlSystem, SystemError> {
    use ModelFamily::*;
    let family = spec.family;
    let n = match (family.fixed_size(), spec.n) {
        (Some(f), Some(n)) => {
            require(family, n == f, "its fixed size", n)?;
            n
        }
        (Some(f), None) => f,
        (None, Some(n)) => n,
        (None, None) => {
            return Err(SystemError::BadSize { family: family.name(), requirement: "an explicit size", n: 0 })
        }
    };
    require(family, n <= crate::pauli::MAX_QUBITS, "at most 32 qubits", n)?;
    let (drift, controls) = match family {
        XxOneEnd => {
            require(family, n >= 2, "n >= 2", n)?;
            (xx_chain(n)?, xy(n, 0)?)
        }
        XxTwoEnds => {
            require(family, n >= 2, "n >= 2", n)?;
            (xx_chain(n)?, [xy(n, 0)?, xy(n, n - 1)?].concat())
        }
        XxSecondSite => {
            require(family, n >= 2, "n >= 2", n)?;
            (xx_chain(n)?, xy(n, 1)?)
        }
        XxFirstTwoSites => {
            require(family, n >= 2, "n >= 2", n)?;
            (xx_chain(n)?, [xy(n, 0)?, xy(n, 1)?].concat())
        }
        IsingAntisym => {
            require(family, n >= 3 && n % 2 == 1, "odd n >= 3", n)?;
            let k = n / 2;
            let mut controls = Vec::new();
            for l in [Letter::X, Letter::Y] {
                for j in 0..k {
                    controls.push(term(n, &[(j, l)])?.add(&local(n, n - 1 - j, l)?)?);
                }
            }
            controls.extend(xy(n, k)?);
            (antisym_ising_drift(n)?, controls)
        }
        IsingCollective => {
            require(family, n >= 3 && n % 2 == 1, "odd n >= 3", n)?;
            let collective = |l| sum(n, (0..n).map(|q| local(n, q, l)).collect::<Result<Vec<_>, _>>()?);
            (antisym_ising_drift(n)?, vec![collective(Letter::X)?, collective(Letter::Y)?])
        }
        Counter1 => (xx_chain(n)?, [xyz(n, 0)?, xyz(n, 3)?].concat()),
        Counter2 => (xx_chain(n)?, xyz(n, 0)?),
        Ex1 => (PauliExpr::zero(n)?, [xyz(n, 0)?, xyz(n, 1)?].concat()),
        Zzz => (
            term(n, &[(0, Letter::Z), (1, Letter::Z), (2, Letter::Z)])?,
            (0..n).map(|q| xyz(n, q)).collect::<Result<Vec<_>, _>>()?.concat(),
        ),
    };
    ControlSystem::qubits(drift, controls, &format!("{family} n={n}"))
}
