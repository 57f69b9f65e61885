//! Controllability decisions for bilinear control systems.
//!
//! [`assess`] runs the cheap necessary tests first (centraliser, connectivity,
//! invariant bilinear form) and only then the expensive ones (tensor-square
//! commutant, Lie closure). A system can be fully controllable only if
//!
//! 1. the centraliser is trivial,
//! 2. the coupling structure is connected,
//! 3. no invariant symmetric or antisymmetric bilinear form exists, and
//! 4. the algebra is not one of the proper irreducible unitary subalgebras.
//!
//! [`Verdict::failed_conditions`] lists which of these numbered conditions failed.

mod models;
mod simulate;

pub use models::{make_model, ModelFamily, ModelSpec};
pub use simulate::{check_simulates, Simulation};

use crate::bilinear_form::{classify_form, FormClassification, FormError, FormKind, FORM_MAX_SIDE};
use crate::catalog::{enumerate_irreps, AlgebraId, IrrepRecord, Malcev};
use crate::closure::{ambient_dim, lie_closure, AlgebraBasis, ClosureError};
use crate::graph::{coupling_graph, is_connected_general, is_weakly_connected, GraphError, TensorStructure};
use crate::matrep::MatrepError;
use crate::pauli::{PauliError, PauliExpr};
use crate::symmetry::{
    centraliser, pauli_matrices, tensor_square, SymmetryError, EXACT_CENTRALISER_MAX_QUBITS, TENSOR_SQUARE_MAX_SIDE,
};
use thiserror::Error;

/// Largest qubit count for which [`Stage::Auto`] runs the Lie closure.
pub const AUTO_CLOSURE_MAX_QUBITS: usize = 4;

/// Largest matrix side for which [`Stage::Auto`] runs the tensor-square test.
pub const AUTO_TENSOR_SQUARE_MAX_SIDE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("system has no controls and a zero drift")]
    Empty,
    #[error("expression has {got} qubits, expected {expected}")]
    QubitMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("model {family} needs {requirement}, got n = {n}")]
    BadSize { family: &'static str, requirement: &'static str, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecideError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("{what} needs side {side}, above the limit {cap}")]
    ResourceCap { what: &'static str, side: usize, cap: usize },
    #[error("systems act on {a} and {b} qubits")]
    AmbientMismatch { a: usize, b: usize },
}

impl DecideError {
    /// True when the error is a size limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            DecideError::ResourceCap { .. }
                | DecideError::Symmetry(SymmetryError::TooManyQubits { .. })
                | DecideError::Symmetry(SymmetryError::Matrep(MatrepError::CapExceeded { .. }))
                | DecideError::Symmetry(SymmetryError::Pauli(PauliError::DenseCapExceeded { .. }))
                | DecideError::Form(FormError::TooLarge { .. })
        )
    }
}

/// `H_d + sum_j u_j(t) H_j` with Pauli-string Hamiltonians on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSystem {
    pub structure: TensorStructure,
    pub drift: PauliExpr,
    pub controls: Vec<PauliExpr>,
    pub label: String,
}

impl ControlSystem {
    pub fn new(
        structure: TensorStructure,
        drift: PauliExpr,
        controls: Vec<PauliExpr>,
        label: &str,
    ) -> Result<ControlSystem, SystemError> {
        let n = drift.n();
        if let Some(c) = controls.iter().find(|c| c.n() != n) {
            return Err(SystemError::QubitMismatch { expected: n, got: c.n() });
        }
        structure.qubit_blocks(n)?;
        if drift.is_zero() && controls.is_empty() {
            return Err(SystemError::Empty);
        }
        Ok(ControlSystem { structure, drift, controls, label: label.to_string() })
    }

    /// System on `n` separate qubits.
    pub fn qubits(drift: PauliExpr, controls: Vec<PauliExpr>, label: &str) -> Result<ControlSystem, SystemError> {
        let n = drift.n();
        ControlSystem::new(TensorStructure::qubits(n), drift, controls, label)
    }

    pub fn n(&self) -> usize {
        self.drift.n()
    }

    /// Hilbert-space dimension `2^n`.
    pub fn side(&self) -> usize {
        1usize << self.n()
    }

    /// The nonzero drift followed by the controls.
    pub fn generators(&self) -> Vec<PauliExpr> {
        let mut out = Vec::with_capacity(self.controls.len() + 1);
        if !self.drift.is_zero() {
            out.push(self.drift.clone());
        }
        out.extend(self.controls.iter().filter(|c| !c.is_zero()).cloned());
        out
    }
}

/// Whether an expensive stage runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stage {
    /// Decided by size and by the outcome of the cheap tests.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssessOptions {
    pub closure: Stage,
    pub tensor_square: Stage,
    /// Upper bound on the closure dimension; `None` means `dim su(2^n)`.
    pub closure_cap: Option<usize>,
    pub tensor_square_max_side: usize,
    pub form_max_side: usize,
}

impl Default for AssessOptions {
    fn default() -> Self {
        AssessOptions {
            closure: Stage::Auto,
            tensor_square: Stage::Auto,
            closure_cap: None,
            tensor_square_max_side: TENSOR_SQUARE_MAX_SIDE,
            form_max_side: FORM_MAX_SIDE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    /// The closure dimension singles out one catalog entry of matching type.
    ProvedByClosure,
    /// Several catalog entries share dimension and type.
    ConsistentByDimAndType,
}

impl Confidence {
    pub fn as_str(self) -> &'static str {
        match self {
            Confidence::ProvedByClosure => "proved-by-closure",
            Confidence::ConsistentByDimAndType => "consistent-by-dim-and-type",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identification {
    pub algebra: AlgebraId,
    pub name: String,
    /// Highest weights of the outer orbit.
    pub weights: Vec<Vec<u32>>,
    pub confidence: Confidence,
    /// Every matching catalog entry, formatted as in the catalog listing.
    pub candidates: Vec<String>,
}

/// How `fully_controllable` was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionBasis {
    TensorSquare,
    Closure,
    /// A necessary condition failed, so no expensive test was needed.
    NecessaryCondition,
    /// The expensive tests were skipped and every cheap test passed.
    Undecided,
}

impl DecisionBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionBasis::TensorSquare => "tensor-square",
            DecisionBasis::Closure => "closure",
            DecisionBasis::NecessaryCondition => "necessary-condition",
            DecisionBasis::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub label: String,
    pub n: usize,
    pub centraliser_dim: usize,
    pub irreducible: bool,
    pub connected: bool,
    /// Connectivity of the pairwise coupling graph, when the drift has order
    /// at most two and the controls are local.
    pub coupling_graph_connected: Option<bool>,
    /// Absent when the matrices exceed the form-test limit.
    pub form: Option<FormClassification>,
    pub tensor_square_dim: Option<usize>,
    pub closure_dim: Option<usize>,
    pub identified: Option<Identification>,
    pub fully_controllable: bool,
    pub decided_by: DecisionBasis,
    /// Numbers of the failed necessary conditions, see the module docs.
    pub failed_conditions: Vec<u8>,
    pub notes: Vec<String>,
    /// Set when two computations that must agree did not.
    pub inconsistency: Option<String>,
}

impl Verdict {
    pub fn form_kind(&self) -> Option<FormKind> {
        self.form.as_ref().map(|f| f.kind)
    }

    pub fn side(&self) -> usize {
        1usize << self.n
    }
}

/// Verdict together with the closure basis, when one was computed.
#[derive(Clone, Debug)]
pub struct Assessment {
    pub verdict: Verdict,
    pub basis: Option<AlgebraBasis>,
}

fn matches_form(m: Malcev, kind: Option<FormKind>) -> bool {
    match kind {
        None => true,
        Some(FormKind::Symplectic) => m == Malcev::S,
        Some(FormKind::Orthogonal) => m == Malcev::O,
        Some(FormKind::NoForm) => m == Malcev::U,
    }
}

/// Catalog entries acting irreducibly on `side` dimensions whose type fits
/// `kind` and whose algebra has dimension `closure_dim`.
pub fn catalog_candidates(side: usize, kind: Option<FormKind>, closure_dim: usize) -> Vec<IrrepRecord> {
    enumerate_irreps(side as u64)
        .into_iter()
        .filter(|r| r.dim == side as u64 && matches_form(r.malcev, kind) && r.algebra.algebra_dim() == closure_dim)
        .collect()
}

/// Looks up an irreducible closure in the catalog. Only forms that were
/// found exclusively are used to filter by type.
pub fn identify(side: usize, form: Option<&FormClassification>, closure_dim: usize) -> Option<Identification> {
    let kind = form.filter(|f| f.exclusive).map(|f| f.kind);
    let found = catalog_candidates(side, kind, closure_dim);
    let first = found.first()?;
    let confidence = if found.len() == 1 && kind.is_some() {
        Confidence::ProvedByClosure
    } else {
        Confidence::ConsistentByDimAndType
    };
    Some(Identification {
        algebra: first.algebra,
        name: first.display_name(),
        weights: first.display_orbit(),
        confidence,
        candidates: found.iter().map(ToString::to_string).collect(),
    })
}

/// Annotation on pure-state controllability.
pub fn pure_state_note(v: &Verdict) -> Option<String> {
    if v.fully_controllable {
        return Some("fully operator controllable, hence also pure-state controllable".to_string());
    }
    let symplectic_closure = v.irreducible
        && v.form.as_ref().is_some_and(|f| f.exclusive && f.kind == FormKind::Symplectic)
        && v.closure_dim.is_some_and(|d| {
            let h = v.side() / 2;
            d == h * (2 * h + 1)
        });
    let named_sp = v.identified.as_ref().is_some_and(|i| i.name.starts_with("sp("));
    (symplectic_closure || named_sp).then(|| {
        "contains the symplectic algebra: pure-state controllable but not fully operator controllable".to_string()
    })
}

fn connectivity(system: &ControlSystem, generators: &[PauliExpr]) -> Result<(bool, Option<bool>), DecideError> {
    let n = system.n();
    let weak = if system.structure == TensorStructure::qubits(n) {
        is_connected_general(generators, n)?
    } else {
        is_weakly_connected(generators, &system.structure)?
    };
    let graph = coupling_graph(&system.drift, &system.controls, &system.structure).ok().map(|g| g.is_connected());
    Ok((weak.connected, graph))
}

/// Runs the decision pipeline.
pub fn assess(system: &ControlSystem, options: &AssessOptions) -> Result<Verdict, DecideError> {
    Ok(assess_with_basis(system, options)?.verdict)
}

/// Same as [`assess`], also returning the closure basis if it was computed.
pub fn assess_with_basis(system: &ControlSystem, options: &AssessOptions) -> Result<Assessment, DecideError> {
    let n = system.n();
    let side = system.side();
    let generators = system.generators();
    let mut notes = Vec::new();
    let mut inconsistency = None;

    if n > EXACT_CENTRALISER_MAX_QUBITS {
        return Err(SymmetryError::TooManyQubits { n, cap: EXACT_CENTRALISER_MAX_QUBITS }.into());
    }
    let sym = centraliser(&generators)?;
    let (connected, coupling_graph_connected) = connectivity(system, &generators)?;

    let form = if side <= options.form_max_side {
        let mats = pauli_matrices(&generators, n)?;
        match classify_form(&mats, Some(sym.irreducible)) {
            Ok(f) => Some(f),
            Err(FormError::Inconsistent(msg)) => {
                inconsistency = Some(format!("form test: {msg}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        notes.push(format!("form test skipped: side {side} above {}", options.form_max_side));
        None
    };
    let has_form = form.as_ref().is_some_and(|f| f.kind != FormKind::NoForm);

    let mut failed = Vec::new();
    if sym.centraliser_dim > 0 {
        failed.push(1);
    }
    if !connected {
        failed.push(2);
    }
    if has_form {
        if side > 2 {
            failed.push(3);
        } else {
            notes.push("su(2) = sp(1): a symplectic form does not rule out full control on one qubit".to_string());
        }
    }
    let cheap_pass = failed.is_empty();

    let run_ts = match options.tensor_square {
        Stage::Always => true,
        Stage::Never => false,
        Stage::Auto => cheap_pass && side <= AUTO_TENSOR_SQUARE_MAX_SIDE,
    };
    let tensor_square_dim = if run_ts {
        if side > options.tensor_square_max_side {
            return Err(DecideError::ResourceCap {
                what: "tensor-square test",
                side,
                cap: options.tensor_square_max_side,
            });
        }
        let mats = pauli_matrices(&generators, n)?;
        Some(tensor_square(&mats, options.tensor_square_max_side)?.dim)
    } else {
        None
    };

    let run_closure = match options.closure {
        Stage::Always => true,
        Stage::Never => false,
        Stage::Auto => n <= AUTO_CLOSURE_MAX_QUBITS,
    };
    let basis = if run_closure { Some(lie_closure(&generators, options.closure_cap)?) } else { None };
    let closure_dim = basis.as_ref().map(|b| b.dim);
    if let Some(b) = &basis {
        if !b.closed && b.dim < ambient_dim(n) {
            notes.push(format!("closure stopped at the cap with dimension {}", b.dim));
        }
    }
    let full_dim = ambient_dim(n);
    let closure_complete = basis.as_ref().is_some_and(|b| b.closed || b.dim == full_dim);

    let (fully_controllable, decided_by) = match (tensor_square_dim, closure_dim) {
        (Some(t), c) => {
            if let (Some(c), true) = (c, closure_complete) {
                if (t == 2) != (c == full_dim) {
                    inconsistency
                        .get_or_insert(format!("tensor-square dimension {t} disagrees with closure dimension {c}"));
                }
            }
            (t == 2, DecisionBasis::TensorSquare)
        }
        (None, Some(c)) if closure_complete => (c == full_dim, DecisionBasis::Closure),
        _ if !cheap_pass => (false, DecisionBasis::NecessaryCondition),
        _ => (false, DecisionBasis::Undecided),
    };
    if fully_controllable && !cheap_pass {
        inconsistency.get_or_insert(format!("full control reported although conditions {failed:?} fail"));
    }
    if cheap_pass && decided_by != DecisionBasis::Undecided && !fully_controllable {
        failed.push(4);
    }
    if decided_by == DecisionBasis::Undecided {
        notes.push("conditions 1-3 hold; run the tensor-square test or the closure to decide".to_string());
    }

    let identified = match closure_dim {
        Some(c) if closure_complete && sym.irreducible => {
            let id = identify(side, form.as_ref(), c);
            if id.is_none() {
                notes.push(format!("no simple catalog algebra of dimension {c} acts irreducibly on {side} dimensions"));
            }
            id
        }
        Some(_) if !sym.irreducible => {
            notes.push("reducible: nonzero centraliser, not identified".to_string());
            None
        }
        _ => None,
    };

    let mut verdict = Verdict {
        label: system.label.clone(),
        n,
        centraliser_dim: sym.centraliser_dim,
        irreducible: sym.irreducible,
        connected,
        coupling_graph_connected,
        form,
        tensor_square_dim,
        closure_dim,
        identified,
        fully_controllable,
        decided_by,
        failed_conditions: failed,
        notes,
        inconsistency,
    };
    if let Some(note) = pure_state_note(&verdict) {
        verdict.notes.push(note);
    }
    Ok(Assessment { verdict, basis })
}
