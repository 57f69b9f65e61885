//! Jordan-Wigner front-end for fermionic systems on `d` levels.
//!
//! Majorana operators map to `c_p = Z^(p-1) X I^(d-p)` and
//! `c_(p+d) = Z^(p-1) Y I^(d-p)`. Quadratic Hamiltonians given by a real
//! antisymmetric `A` and a real symmetric `B` become sums of Pauli strings with
//! Z tails between the two coupled levels.

use crate::decide::{ControlSystem, SystemError};
use crate::pauli::{Letter, PauliError, PauliExpr, PauliTerm};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FermionError {
    #[error("level count {0} is too small")]
    BadLevelCount(usize),
    #[error("Majorana index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("matrix must be {d}x{d}")]
    NotSquare { d: usize },
    #[error("B is not symmetric at ({p},{q})")]
    NotSymmetric { p: usize, q: usize },
    #[error("A is not antisymmetric at ({p},{q})")]
    NotAntisymmetric { p: usize, q: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    System(#[from] SystemError),
}

fn term(d: usize, letter_at: impl Fn(usize) -> Letter) -> Result<PauliTerm, FermionError> {
    let letters: Vec<Letter> = (1..=d).map(letter_at).collect();
    Ok(PauliTerm::from_letters(&letters)?)
}

fn unit(t: PauliTerm) -> PauliExpr {
    PauliExpr::from_term(t, BigRational::one())
}

/// Majorana operator `c_index` (1-based, `index <= 2d`) as a Pauli string.
pub fn jordan_wigner(index: usize, d: usize) -> Result<PauliTerm, FermionError> {
    if d == 0 {
        return Err(FermionError::BadLevelCount(d));
    }
    if index == 0 || index > 2 * d {
        return Err(FermionError::IndexOutOfRange { index, max: 2 * d });
    }
    let (p, head) = if index <= d { (index, Letter::X) } else { (index - d, Letter::Y) };
    term(d, |k| match k.cmp(&p) {
        std::cmp::Ordering::Less => Letter::Z,
        std::cmp::Ordering::Equal => head,
        std::cmp::Ordering::Greater => Letter::I,
    })
}

/// `I^(q-1) a Z^(p-q-1) a I^(d-p)` for levels `q < p`.
fn hopping(d: usize, q: usize, p: usize, a: Letter) -> Result<PauliTerm, FermionError> {
    term(d, |k| {
        if k == q || k == p {
            a
        } else if k > q && k < p {
            Letter::Z
        } else {
            Letter::I
        }
    })
}

fn site(d: usize, p: usize, letter: Letter) -> Result<PauliTerm, FermionError> {
    term(d, |k| if k == p { letter } else { Letter::I })
}

/// Real quadratic Hamiltonian data: `A` antisymmetric, `B` symmetric, both `d x d`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpec {
    d: usize,
    a: Vec<Vec<BigRational>>,
    b: Vec<Vec<BigRational>>,
}

impl QuadraticSpec {
    pub fn new(a: Vec<Vec<BigRational>>, b: Vec<Vec<BigRational>>) -> Result<QuadraticSpec, FermionError> {
        let d = b.len();
        if d == 0 {
            return Err(FermionError::BadLevelCount(0));
        }
        if a.len() != d || a.iter().chain(b.iter()).any(|row| row.len() != d) {
            return Err(FermionError::NotSquare { d });
        }
        for p in 0..d {
            for q in 0..d {
                if b[p][q] != b[q][p] {
                    return Err(FermionError::NotSymmetric { p: p + 1, q: q + 1 });
                }
                if a[p][q] != -a[q][p].clone() {
                    return Err(FermionError::NotAntisymmetric { p: p + 1, q: q + 1 });
                }
            }
        }
        Ok(QuadraticSpec { d, a, b })
    }

    pub fn zero(d: usize) -> Result<QuadraticSpec, FermionError> {
        let z = vec![vec![BigRational::zero(); d]; d];
        QuadraticSpec::new(z.clone(), z)
    }

    /// Every entry of `A` (below the diagonal) and `B` set to one.
    pub fn general(d: usize) -> Result<QuadraticSpec, FermionError> {
        let mut s = QuadraticSpec::number_preserving(d)?;
        for p in 0..d {
            for q in 0..p {
                s.a[p][q] = BigRational::one();
                s.a[q][p] = -BigRational::one();
            }
        }
        Ok(s)
    }

    /// `A = 0` and every entry of `B` set to one.
    pub fn number_preserving(d: usize) -> Result<QuadraticSpec, FermionError> {
        let mut s = QuadraticSpec::zero(d)?;
        for row in s.b.iter_mut() {
            row.iter_mut().for_each(|x| *x = BigRational::one());
        }
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn set_a(&mut self, p: usize, q: usize, v: BigRational) {
        self.a[q - 1][p - 1] = -v.clone();
        self.a[p - 1][q - 1] = v;
    }

    pub fn set_b(&mut self, p: usize, q: usize, v: BigRational) {
        self.b[q - 1][p - 1] = v.clone();
        self.b[p - 1][q - 1] = v;
    }
}

/// Qubit images of the individual entries of a quadratic Hamiltonian, grouped
/// by origin: diagonal of `B`, strict lower triangle of `B`, strict lower triangle of `A`.
#[derive(Clone, Debug)]
pub struct QuadraticTerms {
    pub diagonal: Vec<PauliExpr>,
    pub hopping: Vec<PauliExpr>,
    pub pairing: Vec<PauliExpr>,
}

impl QuadraticTerms {
    pub fn all(&self) -> Vec<PauliExpr> {
        self.diagonal.iter().chain(&self.hopping).chain(&self.pairing).cloned().collect()
    }
}

fn quadratic_terms(spec: &QuadraticSpec) -> Result<QuadraticTerms, FermionError> {
    let d = spec.d;
    let mut out = QuadraticTerms { diagonal: Vec::new(), hopping: Vec::new(), pairing: Vec::new() };
    for p in 1..=d {
        let bpp = &spec.b[p - 1][p - 1];
        if !bpp.is_zero() {
            out.diagonal.push(PauliExpr::from_term(site(d, p, Letter::Z)?, -bpp.clone()));
        }
    }
    for p in 1..=d {
        for q in 1..p {
            let xx = unit(hopping(d, q, p, Letter::X)?);
            let yy = unit(hopping(d, q, p, Letter::Y)?);
            let bpq = &spec.b[p - 1][q - 1];
            if !bpq.is_zero() {
                out.hopping.push(xx.add(&yy)?.scale(bpq));
            }
            let apq = &spec.a[p - 1][q - 1];
            if !apq.is_zero() {
                out.pairing.push(xx.sub(&yy)?.scale(&-apq.clone()));
            }
        }
    }
    Ok(out)
}

/// One generator per nonzero independent entry of `A` and `B`.
pub fn quadratic_to_pauli(spec: &QuadraticSpec) -> Result<Vec<PauliExpr>, FermionError> {
    Ok(quadratic_terms(spec)?.all())
}

/// The whole quadratic Hamiltonian as a single expression.
pub fn quadratic_hamiltonian(spec: &QuadraticSpec) -> Result<PauliExpr, FermionError> {
    sum(spec.d, &quadratic_to_pauli(spec)?)
}

fn sum(d: usize, parts: &[PauliExpr]) -> Result<PauliExpr, FermionError> {
    parts.iter().try_fold(PauliExpr::zero(d)?, |acc, e| Ok(acc.add(e)?))
}

/// `sum_p j_p Z^(p-1) X I^(d-p)`.
pub fn linear_to_pauli(j: &[BigRational]) -> Result<PauliExpr, FermionError> {
    let d = j.len();
    let mut out = PauliExpr::zero(d).map_err(|_| FermionError::BadLevelCount(d))?;
    for (p, jp) in j.iter().enumerate() {
        out = out.add(&PauliExpr::from_term(jordan_wigner(p + 1, d)?, jp.clone()))?;
    }
    Ok(out)
}

/// Which groups of quadratic entries are merged into the drift instead of
/// acting as separate controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Lumping {
    pub b: bool,
    pub a: bool,
}

/// Control system whose controls are the nonzero entries of `spec`, with the
/// groups selected by `lumping` folded into the drift.
pub fn quadratic_system(spec: &QuadraticSpec, lumping: Lumping, label: &str) -> Result<ControlSystem, FermionError> {
    let t = quadratic_terms(spec)?;
    let d = spec.d;
    let mut drift = PauliExpr::zero(d)?;
    let mut controls = Vec::new();
    for (group, lump) in [(t.diagonal, lumping.b), (t.hopping, lumping.b), (t.pairing, lumping.a)] {
        if lump {
            drift = drift.add(&sum(d, &group)?)?;
        } else {
            controls.extend(group);
        }
    }
    Ok(ControlSystem::qubits(drift, controls, label)?)
}

/// All entries of `A` and `B` as controls.
pub fn general_quadratic(d: usize) -> Result<ControlSystem, FermionError> {
    check_levels(d, 1)?;
    quadratic_system(&QuadraticSpec::general(d)?, Lumping::default(), &format!("fermion-quadratic d={d}"))
}

/// General quadratic controls plus one linear control `Z^(p-1) X` per level.
pub fn quadratic_with_linear(d: usize) -> Result<ControlSystem, FermionError> {
    check_levels(d, 1)?;
    let mut sys = general_quadratic(d)?;
    for p in 1..=d {
        sys.controls.push(unit(jordan_wigner(p, d)?));
    }
    sys.label = format!("fermion-quadratic-linear d={d}");
    Ok(sys)
}

/// Particle-number preserving quadratic controls (`A = 0`).
pub fn number_preserving(d: usize) -> Result<ControlSystem, FermionError> {
    check_levels(d, 1)?;
    quadratic_system(
        &QuadraticSpec::number_preserving(d)?,
        Lumping::default(),
        &format!("fermion-number-preserving d={d}"),
    )
}

/// Diagonal normal form with the level energies as controls.
pub fn diagonal_normal_form(d: usize) -> Result<ControlSystem, FermionError> {
    check_levels(d, 1)?;
    let controls = (1..=d).map(|p| Ok(unit(site(d, p, Letter::Z)?))).collect::<Result<Vec<_>, FermionError>>()?;
    Ok(ControlSystem::qubits(PauliExpr::zero(d)?, controls, &format!("fermion-diagonal d={d}"))?)
}

fn check_levels(d: usize, min: usize) -> Result<(), FermionError> {
    if d < min || d > crate::pauli::MAX_QUBITS {
        Err(FermionError::BadLevelCount(d))
    } else {
        Ok(())
    }
}

/// `sum_p (XX + YY)` on neighbouring levels plus the periodic string
/// `X Z...Z X + Y Z...Z Y`, unscaled.
fn ring_hopping(d: usize) -> Result<PauliExpr, FermionError> {
    let mut e = PauliExpr::zero(d)?;
    for q in 1..d {
        for a in [Letter::X, Letter::Y] {
            e = e.add(&unit(hopping(d, q, q + 1, a)?))?;
        }
    }
    for a in [Letter::X, Letter::Y] {
        e = e.add(&unit(hopping(d, 1, d, a)?))?;
    }
    Ok(e)
}

/// Spinless periodic Hubbard chain: drift `(t/2)` times the ring hopping,
/// controls `Z_p` for every site.
pub fn hubbard_spinless(d: usize, t: &BigRational) -> Result<ControlSystem, FermionError> {
    check_levels(d, 2)?;
    let half = BigRational::new(1.into(), 2.into());
    let drift = ring_hopping(d)?.scale(&(t * half));
    let controls = (1..=d).map(|p| Ok(unit(site(d, p, Letter::Z)?))).collect::<Result<Vec<_>, FermionError>>()?;
    Ok(ControlSystem::qubits(drift, controls, &format!("hubbard-spinless d={d}"))?)
}

/// Hubbard chain with spin on `2d` qubits, spin up on qubits `1..=d` and spin
/// down on `d+1..=2d`. Drift `(t/2)(A0 x 1 + 1 x A0)`, controls `Z_p Z_(p+d)`.
pub fn hubbard_spinful(d: usize, t: &BigRational) -> Result<ControlSystem, FermionError> {
    check_levels(d, 2)?;
    if 2 * d > crate::pauli::MAX_QUBITS {
        return Err(FermionError::BadLevelCount(d));
    }
    let a0 = ring_hopping(d)?;
    let n = 2 * d;
    let mut drift = PauliExpr::zero(n)?;
    for (t0, c) in a0.terms() {
        let letters = t0.letters();
        let idle = vec![Letter::I; d];
        let up: Vec<Letter> = letters.iter().copied().chain(idle.iter().copied()).collect();
        let down: Vec<Letter> = idle.iter().copied().chain(letters.iter().copied()).collect();
        drift = drift.add(&PauliExpr::from_term(PauliTerm::from_letters(&up)?, c.clone()))?;
        drift = drift.add(&PauliExpr::from_term(PauliTerm::from_letters(&down)?, c.clone()))?;
    }
    let half = BigRational::new(1.into(), 2.into());
    let drift = drift.scale(&(t * half));
    let controls = (1..=d)
        .map(|p| Ok(unit(term(n, |k| if k == p || k == p + d { Letter::Z } else { Letter::I })?)))
        .collect::<Result<Vec<_>, FermionError>>()?;
    Ok(ControlSystem::qubits(drift, controls, &format!("hubbard-spinful d={d}"))?)
}

/// Named fermionic model families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FermionModel {
    Quadratic,
    QuadraticLinear,
    NumberPreserving,
    Diagonal,
    Hubbard,
    HubbardSpin,
}

impl std::str::FromStr for FermionModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "quadratic" => FermionModel::Quadratic,
            "quadratic-linear" => FermionModel::QuadraticLinear,
            "number-preserving" => FermionModel::NumberPreserving,
            "diagonal" => FermionModel::Diagonal,
            "hubbard" => FermionModel::Hubbard,
            "hubbard-spin" => FermionModel::HubbardSpin,
            other => return Err(format!("unknown fermionic model {other:?}")),
        })
    }
}

pub fn fermion_model(model: FermionModel, d: usize, t: &BigRational) -> Result<ControlSystem, FermionError> {
    match model {
        FermionModel::Quadratic => general_quadratic(d),
        FermionModel::QuadraticLinear => quadratic_with_linear(d),
        FermionModel::NumberPreserving => number_preserving(d),
        FermionModel::Diagonal => diagonal_normal_form(d),
        FermionModel::Hubbard => hubbard_spinless(d, t),
        FermionModel::HubbardSpin => hubbard_spinful(d, t),
    }
}
