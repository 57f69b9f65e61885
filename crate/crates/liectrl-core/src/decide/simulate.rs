use super::DecideError;
use crate::closure::{span_contains, AlgebraBasis};

/// Relation between two dynamic algebras in the same ambient `su(2^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simulation {
    /// Both algebras coincide.
    Equivalent,
    /// The first algebra strictly contains the second.
    Simulates,
    /// The second algebra strictly contains the first.
    SimulatedBy,
    Incomparable,
}

impl Simulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Simulation::Equivalent => "equivalent",
            Simulation::Simulates => "simulates",
            Simulation::SimulatedBy => "simulated-by",
            Simulation::Incomparable => "incomparable",
        }
    }
}

fn contains_all(outer: &AlgebraBasis, inner: &AlgebraBasis) -> Result<bool, DecideError> {
    for e in &inner.elements {
        if !span_contains(outer, e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares two closures by exact span containment. System `a` can simulate
/// system `b` when the algebra of `a` contains that of `b`.
pub fn check_simulates(a: &AlgebraBasis, b: &AlgebraBasis) -> Result<Simulation, DecideError> {
    if a.n != b.n {
        return Err(DecideError::AmbientMismatch { a: a.n, b: b.n });
    }
    let a_has_b = a.dim >= b.dim && contains_all(a, b)?;
    let b_has_a = b.dim >= a.dim && contains_all(b, a)?;
    Ok(match (a_has_b, b_has_a) {
        (true, true) => Simulation::Equivalent,
        (true, false) => Simulation::Simulates,
        (false, true) => Simulation::SimulatedBy,
        (false, false) => Simulation::Incomparable,
    })
}
