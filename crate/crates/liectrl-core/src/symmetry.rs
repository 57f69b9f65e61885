//! Centralisers, commutants and the tensor-square test.
//!
//! For Pauli generators the centraliser is solved exactly. Writing a candidate
//! symmetry as `s = sum_R s_R (-i/2) R`, the bracket with a generator
//! `sum_k c_k (-i/2) P_k` only couples `s_R` to output terms `R ^ P_k`, so
//! the linear system is very sparse and splits into small independent pieces.

use crate::closure::PauliSpan;
use crate::matrep::{
    joint_sylvester_kernel, orthonormalize, tensor_square_commutant, CMatrix, MatrepError, TensorSquareCommutant, C64,
};
use crate::pauli::{PauliError, PauliExpr, PauliTerm};
use num_rational::BigRational;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default qubit limit for the exact centraliser (it enumerates `4^n` unknowns).
pub const EXACT_CENTRALISER_MAX_QUBITS: usize = 10;

/// Default side limit for the tensor-square commutant.
pub const TENSOR_SQUARE_MAX_SIDE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("no generators given")]
    Empty,
    #[error("{n} qubits exceed the exact centraliser limit of {cap}")]
    TooManyQubits { n: usize, cap: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Matrep(#[from] MatrepError),
}

#[derive(Clone, Debug)]
pub enum CentraliserBasis {
    Pauli(Vec<PauliExpr>),
    Dense(Vec<CMatrix>),
}

impl CentraliserBasis {
    pub fn len(&self) -> usize {
        match self {
            CentraliserBasis::Pauli(v) => v.len(),
            CentraliserBasis::Dense(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub centraliser_dim: usize,
    pub centraliser_basis: CentraliserBasis,
    pub commutant_dim: usize,
    pub irreducible: bool,
    pub tensor_square: Option<TensorSquareCommutant>,
}

impl SymmetryReport {
    fn from_basis(basis: CentraliserBasis) -> SymmetryReport {
        let d = basis.len();
        SymmetryReport {
            centraliser_dim: d,
            centraliser_basis: basis,
            commutant_dim: d + 1,
            irreducible: d == 0,
            tensor_square: None,
        }
    }

    /// Tensor-square commutant dimension, or `-1` when it was not computed.
    pub fn tensor_square_commutant_dim(&self) -> i64 {
        self.tensor_square.as_ref().map_or(-1, |t| t.dim as i64)
    }
}

/// Whether two Pauli codes anticommute: an odd number of qubits carry two
/// different non-identity letters.
fn anticommutes(a: u64, b: u64) -> bool {
    const LOW: u64 = 0x5555_5555_5555_5555;
    let nz = |x: u64| (x | x >> 1) & LOW;
    (nz(a) & nz(b) & nz(a ^ b)).count_ones() % 2 == 1
}

/// Exact centraliser of Pauli generators in `su(2^n)`.
pub fn centraliser(generators: &[PauliExpr]) -> Result<SymmetryReport, SymmetryError> {
    centraliser_with_cap(generators, EXACT_CENTRALISER_MAX_QUBITS)
}

pub fn centraliser_with_cap(generators: &[PauliExpr], max_qubits: usize) -> Result<SymmetryReport, SymmetryError> {
    let first = generators.first().ok_or(SymmetryError::Empty)?;
    let n = first.n();
    for g in generators {
        if g.n() != n {
            return Err(PauliError::LengthMismatch(n, g.n()).into());
        }
    }
    if n > max_qubits {
        return Err(SymmetryError::TooManyQubits { n, cap: max_qubits });
    }
    let system = Equations::new(n, generators);
    let mut basis: Vec<PauliExpr> = system.components().par_iter().flat_map_iter(|c| system.solve(c)).collect();
    basis.sort_by(|a, b| a.raw_terms().keys().next().cmp(&b.raw_terms().keys().next()));
    Ok(SymmetryReport::from_basis(CentraliserBasis::Pauli(basis)))
}

/// The linear system `[s, g] = 0` over all generators `g`, indexed by the
/// Pauli coordinates of `s`.
///
/// The equation for generator `g` and output term `R` involves the unknowns
/// `s_(R ^ P)` for the terms `P` of `g` that anticommute with `R`, each with
/// a single nonzero coefficient. An equation with one remaining unknown
/// forces it to zero; after that has run to a fixed point the surviving
/// unknowns fall into independent connected components.
struct Equations {
    n: usize,
    gens: Vec<Vec<(u64, BigRational)>>,
    alive: Vec<bool>,
}

impl Equations {
    fn new(n: usize, generators: &[PauliExpr]) -> Equations {
        let gens: Vec<Vec<(u64, BigRational)>> = generators
            .iter()
            .map(|g| {
                g.terms().filter(|(t, _)| !t.is_identity()).map(|(t, c)| (t.code(), c.clone())).collect::<Vec<_>>()
            })
            .filter(|terms: &Vec<_>| !terms.is_empty())
            .collect();
        let mut alive = vec![true; 1usize << (2 * n)];
        alive[0] = false;
        let mut eq = Equations { n, gens, alive };
        eq.propagate_zeros();
        eq
    }

    fn live_unknowns(&self, g: usize, r: u64) -> impl Iterator<Item = u64> + '_ {
        self.gens[g]
            .iter()
            .filter(move |(p, _)| anticommutes(r, *p))
            .map(move |(p, _)| r ^ p)
            .filter(|&v| self.alive[v as usize])
    }

    /// Equations `(g, R)` in which the unknown `v` appears.
    fn equations_of(&self, v: u64) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.gens.iter().enumerate().flat_map(move |(g, terms)| {
            terms.iter().filter(move |(p, _)| anticommutes(v, *p)).map(move |(p, _)| (g, v ^ p))
        })
    }

    fn propagate_zeros(&mut self) {
        let mut work: Vec<(usize, u64)> = Vec::new();
        let total = self.alive.len() as u64;
        for g in 0..self.gens.len() {
            for r in 1..total {
                work.push((g, r));
                while let Some((g, r)) = work.pop() {
                    let single = {
                        let mut live = self.live_unknowns(g, r);
                        match (live.next(), live.next()) {
                            (Some(v), None) => Some(v),
                            _ => None,
                        }
                    };
                    if let Some(v) = single {
                        self.alive[v as usize] = false;
                        work.extend(self.equations_of(v));
                    }
                }
            }
        }
    }

    /// Surviving unknowns grouped by the equations that link them.
    fn components(&self) -> Vec<Vec<u64>> {
        let total = self.alive.len();
        let mut uf = UnionFind::<u32>::new(total);
        for g in 0..self.gens.len() {
            for r in 1..total as u64 {
                let mut live = self.live_unknowns(g, r);
                if let Some(a) = live.next() {
                    for b in live {
                        uf.union(a as u32, b as u32);
                    }
                }
            }
        }
        let mut groups: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        for v in (1..total).filter(|&v| self.alive[v]) {
            groups.entry(uf.find(v as u32)).or_default().push(v as u64);
        }
        groups.into_values().collect()
    }

    /// Kernel of the equations restricted to one component.
    fn solve(&self, vars: &[u64]) -> Vec<PauliExpr> {
        let n = self.n;
        let mut seen = std::collections::BTreeSet::new();
        let mut equations = PauliSpan::new(n);
        for &v in vars {
            for (g, r) in self.equations_of(v) {
                if !seen.insert((g, r)) {
                    continue;
                }
                let mut row = BTreeMap::new();
                for (p, c) in &self.gens[g] {
                    let u = r ^ p;
                    if !anticommutes(r, *p) || !self.alive[u as usize] {
                        continue;
                    }
                    let term = PauliTerm::new(n, u).expect("code fits");
                    let (k, _) = term.bracket(&PauliTerm::new(n, *p).expect("code fits")).expect("anticommuting terms");
                    row.insert(u, if k > 0 { c.clone() } else { -c.clone() });
                }
                let e = PauliExpr::from_map(n, row);
                if !e.is_zero() {
                    equations.insert(&e);
                }
            }
        }
        let pivots: std::collections::BTreeSet<u64> = equations.pivots().collect();
        let mut dependents: BTreeMap<u64, Vec<(u64, BigRational)>> = BTreeMap::new();
        for (pivot, row) in equations.rows() {
            for (t, c) in row.terms() {
                if t.code() != pivot {
                    dependents.entry(t.code()).or_default().push((pivot, c.clone()));
                }
            }
        }
        let mut out = Vec::new();
        for &f in vars.iter().filter(|v| !pivots.contains(v)) {
            let mut terms = BTreeMap::new();
            terms.insert(f, BigRational::from_integer(1.into()));
            for (p, c) in dependents.get(&f).into_iter().flatten() {
                terms.insert(*p, -c.clone());
            }
            out.push(PauliExpr::from_map(n, terms).primitive());
        }
        out
    }
}

/// Centraliser computed densely from the commutant in `gl(N)`.
///
/// The commutant of skew-Hermitian generators is closed under adjoints, so
/// its skew-Hermitian part has real dimension equal to the complex dimension
/// of the commutant. Removing the identity leaves the centraliser in `su(N)`.
pub fn centraliser_dense(generators: &[CMatrix], tol: f64) -> Result<SymmetryReport, SymmetryError> {
    if generators.is_empty() {
        return Err(SymmetryError::Empty);
    }
    let pairs: Vec<(CMatrix, CMatrix)> = generators.iter().map(|h| (h.clone(), h.clone())).collect();
    let ns = joint_sylvester_kernel(&pairs, tol)?;
    let side = generators[0].rows();
    let identity = CMatrix::identity(side).scale(C64::new(1.0 / (side as f64).sqrt(), 0.0));
    let i = C64::new(0.0, 1.0);
    let mut candidates = vec![identity];
    for x in &ns.basis {
        let xh = x.adjoint();
        candidates.push((x - &xh).scale(C64::new(0.5, 0.0)));
        candidates.push((x + &xh).scale(i * 0.5));
    }
    let ortho = orthonormalize(&candidates, 1e-8);
    let skew: Vec<CMatrix> = ortho.into_iter().skip(1).take(ns.dim().saturating_sub(1)).collect();
    let mut report = SymmetryReport::from_basis(CentraliserBasis::Dense(skew));
    report.commutant_dim = ns.dim();
    report.centraliser_dim = ns.dim().saturating_sub(1);
    report.irreducible = ns.dim() == 1;
    Ok(report)
}

/// Dense matrices of Pauli generators.
pub fn pauli_matrices(generators: &[PauliExpr], cap_qubits: usize) -> Result<Vec<CMatrix>, SymmetryError> {
    generators.iter().map(|g| g.to_matrix(cap_qubits).map_err(SymmetryError::from)).collect()
}

/// Commutant of the tensor-square generators `H (x) 1 + 1 (x) H`.
pub fn tensor_square(generators: &[CMatrix], max_side: usize) -> Result<TensorSquareCommutant, SymmetryError> {
    if generators.is_empty() {
        return Err(SymmetryError::Empty);
    }
    Ok(tensor_square_commutant(generators, max_side, crate::matrep::DEFAULT_TOL)?)
}

/// Dimension of the joint commutant of the tensor-square generators.
pub fn tensor_square_commutant_dim(generators: &[CMatrix]) -> Result<usize, SymmetryError> {
    Ok(tensor_square(generators, TENSOR_SQUARE_MAX_SIDE)?.dim)
}

/// Commutant dimensions of the restrictions to `Alt^2` and `Sym^2`.
pub fn alt_sym_commutant_dims(generators: &[CMatrix]) -> Result<(usize, usize), SymmetryError> {
    let t = tensor_square(generators, TENSOR_SQUARE_MAX_SIDE)?;
    Ok((t.alt_dim, t.sym_dim))
}

/// Adds the tensor-square data to an existing report.
pub fn with_tensor_square(
    mut report: SymmetryReport,
    generators: &[CMatrix],
    max_side: usize,
) -> Result<SymmetryReport, SymmetryError> {
    report.tensor_square = Some(tensor_square(generators, max_side)?);
    Ok(report)
}
