//! Lie closure of a set of generators.
//!
//! The exact path works in Pauli coordinates with rational arithmetic. The
//! span of the basis found so far is kept in reduced row-echelon form
//! ([`PauliSpan`]), so membership and independence are decided without any
//! tolerance. Each sweep brackets the newest elements with everything found
//! before and with each other, which is enough by bilinearity.
//!
//! A floating-point fallback ([`dense_lie_closure`]) handles generators that
//! only exist as matrices, for instance on qudit tensor structures.

use crate::matrep::{CMatrix, C64, DEFAULT_TOL};
use crate::pauli::{PauliError, PauliExpr};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

const CHUNK: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosureError {
    #[error("no generators given")]
    Empty,
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("generator {index} has shape {rows}x{cols}, expected {side}x{side}")]
    Shape { index: usize, rows: usize, cols: usize, side: usize },
}

/// Why a closure computation stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// A full sweep produced nothing new.
    Closed,
    /// The span reached the whole ambient algebra.
    Ambient,
    /// The user-supplied dimension cap was reached first.
    CapReached,
}

/// Rational row-reduced span of Pauli expressions.
///
/// Every stored row has a pivot (its smallest term code) with coefficient 1,
/// and every row vanishes at all other rows' pivots.
#[derive(Clone, Debug)]
pub struct PauliSpan {
    n: usize,
    rows: BTreeMap<u64, PauliExpr>,
}

impl PauliSpan {
    pub fn new(n: usize) -> PauliSpan {
        PauliSpan { n, rows: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.keys().copied()
    }

    /// Rows of the echelon form, keyed by pivot code.
    pub fn rows(&self) -> impl Iterator<Item = (u64, &PauliExpr)> + '_ {
        self.rows.iter().map(|(&p, r)| (p, r))
    }

    /// Residual of `e` after eliminating every pivot; zero iff `e` is in the span.
    pub fn reduce(&self, e: &PauliExpr) -> PauliExpr {
        let hits: Vec<(u64, BigRational)> = e
            .raw_terms()
            .iter()
            .filter(|(code, _)| self.rows.contains_key(code))
            .map(|(&code, c)| (code, c.clone()))
            .collect();
        if hits.is_empty() {
            return e.clone();
        }
        let mut terms = e.raw_terms().clone();
        for (pivot, c) in hits {
            for (&code, rc) in self.rows[&pivot].raw_terms() {
                let entry = terms.entry(code).or_insert_with(BigRational::zero);
                *entry -= &c * rc;
                if entry.is_zero() {
                    terms.remove(&code);
                }
            }
        }
        PauliExpr::from_map(self.n, terms)
    }

    pub fn contains(&self, e: &PauliExpr) -> bool {
        self.reduce(e).is_zero()
    }

    /// Adds an expression already reduced against this span. Returns false
    /// (and changes nothing) when the residual is zero.
    pub fn insert_reduced(&mut self, residual: &PauliExpr) -> bool {
        let Some((&pivot, lead)) = residual.raw_terms().iter().next() else {
            return false;
        };
        let row = residual.scale(&(BigRational::one() / lead));
        for existing in self.rows.values_mut() {
            if let Some(c) = existing.coeff_of(pivot).cloned() {
                *existing = existing.sub(&row.scale(&c)).expect("span rows share qubit count");
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    /// Reduces and inserts; returns the residual when it was independent.
    pub fn insert(&mut self, e: &PauliExpr) -> Option<PauliExpr> {
        let r = self.reduce(e);
        if self.insert_reduced(&r) {
            Some(r)
        } else {
            None
        }
    }
}

/// Basis of a Lie algebra in Pauli coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub n: usize,
    pub elements: Vec<PauliExpr>,
    pub dim: usize,
    pub generator_count: usize,
    pub closed: bool,
    pub stop_reason: StopReason,
    pub sweeps: usize,
    span: PauliSpan,
}

impl AlgebraBasis {
    pub fn span(&self) -> &PauliSpan {
        &self.span
    }

    /// Every pairwise bracket of basis elements lies in the span.
    pub fn verify_closed(&self) -> bool {
        let k = self.elements.len();
        (0..k)
            .into_par_iter()
            .all(|i| (i + 1..k).all(|j| self.span.contains(&self.elements[i].bracket_unchecked(&self.elements[j]))))
    }
}

/// Exact membership test of `e` in the span of `basis`.
pub fn span_contains(basis: &AlgebraBasis, e: &PauliExpr) -> Result<bool, ClosureError> {
    if e.n() != basis.n {
        return Err(PauliError::LengthMismatch(basis.n, e.n()).into());
    }
    Ok(basis.span.contains(e))
}

/// Dimension of `su(2^n)`, saturating for very large `n`.
pub fn ambient_dim(n: usize) -> usize {
    if n >= 32 {
        usize::MAX
    } else {
        (1usize << (2 * n)).saturating_sub(1)
    }
}

fn strip_identity(e: &PauliExpr) -> PauliExpr {
    match e.coeff_of(0) {
        Some(c) => e
            .sub(&PauliExpr::from_term(crate::pauli::PauliTerm::identity(e.n()).expect("valid n"), c.clone()))
            .expect("same n"),
        None => e.clone(),
    }
}

/// Computes the Lie closure of `generators`, stopping once `dim_cap` elements
/// are found. A cap of `None` means the full `su(2^n)` dimension.
///
/// Identity components of the generators only contribute a global phase and
/// are discarded, so the result always lies in `su(2^n)`.
pub fn lie_closure(generators: &[PauliExpr], dim_cap: Option<usize>) -> Result<AlgebraBasis, ClosureError> {
    let first = generators.first().ok_or(ClosureError::Empty)?;
    let n = first.n();
    for g in generators {
        if g.n() != n {
            return Err(PauliError::LengthMismatch(n, g.n()).into());
        }
    }
    let ambient = ambient_dim(n);
    let cap = dim_cap.unwrap_or(ambient).min(ambient);
    let mut span = PauliSpan::new(n);
    let mut elements: Vec<PauliExpr> = Vec::new();
    let mut frontier: Vec<PauliExpr> = Vec::new();
    for g in generators {
        if span.dim() >= cap {
            break;
        }
        let g = strip_identity(g);
        if let Some(r) = span.insert(&g) {
            let stored = sparser(&g, &r);
            frontier.push(stored);
        }
    }
    let mut sweeps = 0;
    let mut hit_cap = span.dim() >= cap;
    while !frontier.is_empty() && !hit_cap {
        sweeps += 1;
        let old_len = elements.len();
        elements.append(&mut frontier);
        let pairs: Vec<(usize, usize)> = (0..old_len)
            .flat_map(|i| (old_len..elements.len()).map(move |j| (i, j)))
            .chain((old_len..elements.len()).flat_map(|i| (i + 1..elements.len()).map(move |j| (i, j))))
            .collect();
        'chunks: for chunk in pairs.chunks(CHUNK) {
            let candidates: Vec<(PauliExpr, PauliExpr)> = chunk
                .par_iter()
                .filter_map(|&(i, j)| {
                    let b = elements[i].bracket_unchecked(&elements[j]);
                    if b.is_zero() {
                        return None;
                    }
                    let r = span.reduce(&b);
                    (!r.is_zero()).then_some((b, r))
                })
                .collect();
            for (raw, partial) in candidates {
                let r = span.reduce(&partial);
                if span.insert_reduced(&r) {
                    frontier.push(sparser(&raw, &r));
                    if span.dim() >= cap {
                        hit_cap = true;
                        break 'chunks;
                    }
                }
            }
        }
    }
    elements.append(&mut frontier);
    let dim = span.dim();
    let stop_reason = if dim == ambient {
        StopReason::Ambient
    } else if hit_cap {
        StopReason::CapReached
    } else {
        StopReason::Closed
    };
    Ok(AlgebraBasis {
        n,
        dim,
        elements,
        generator_count: generators.len(),
        closed: stop_reason != StopReason::CapReached,
        stop_reason,
        sweeps,
        span,
    })
}

fn sparser(raw: &PauliExpr, residual: &PauliExpr) -> PauliExpr {
    if residual.len() < raw.len() {
        residual.primitive()
    } else {
        raw.primitive()
    }
}

/// Basis of a matrix Lie algebra, orthonormal in the Hilbert-Schmidt product.
#[derive(Clone, Debug)]
pub struct DenseAlgebraBasis {
    pub side: usize,
    pub elements: Vec<CMatrix>,
    pub dim: usize,
    pub generator_count: usize,
    pub closed: bool,
    pub stop_reason: StopReason,
    pub sweeps: usize,
    pub tolerance_used: f64,
}

/// Floating-point closure of skew-Hermitian (or arbitrary) square matrices.
///
/// Independence is judged by Gram-Schmidt with relative tolerance `tol`.
pub fn dense_lie_closure(
    generators: &[CMatrix],
    dim_cap: Option<usize>,
    tol: f64,
) -> Result<DenseAlgebraBasis, ClosureError> {
    let first = generators.first().ok_or(ClosureError::Empty)?;
    let side = first.rows();
    for (index, g) in generators.iter().enumerate() {
        if g.rows() != side || g.cols() != side {
            return Err(ClosureError::Shape { index, rows: g.rows(), cols: g.cols(), side });
        }
    }
    let ambient = side * side;
    let cap = dim_cap.unwrap_or(ambient).min(ambient);
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let mut basis: Vec<CMatrix> = Vec::new();
    let mut frontier: Vec<CMatrix> = Vec::new();
    let try_add = |basis: &mut Vec<CMatrix>, m: &CMatrix| -> Option<CMatrix> {
        let norm0 = m.frobenius_norm();
        if norm0 == 0.0 {
            return None;
        }
        let mut v = m.clone();
        for _ in 0..2 {
            for q in basis.iter() {
                v = &v - &q.scale(q.hs_inner(&v));
            }
        }
        let norm = v.frobenius_norm();
        if norm <= tol * norm0 {
            return None;
        }
        let q = v.scale(C64::new(1.0 / norm, 0.0));
        basis.push(q.clone());
        Some(q)
    };
    for g in generators {
        if basis.len() >= cap {
            break;
        }
        if let Some(q) = try_add(&mut basis, g) {
            frontier.push(q);
        }
    }
    let mut processed: Vec<CMatrix> = Vec::new();
    let mut sweeps = 0;
    let mut hit_cap = basis.len() >= cap;
    while !frontier.is_empty() && !hit_cap {
        sweeps += 1;
        let old = processed.len();
        processed.append(&mut frontier);
        let brackets: Vec<CMatrix> = (0..processed.len())
            .flat_map(|i| (old.max(i + 1)..processed.len()).map(move |j| (i, j)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(i, j)| processed[i].commutator(&processed[j]))
            .collect();
        for b in &brackets {
            if let Some(q) = try_add(&mut basis, b) {
                frontier.push(q);
                if basis.len() >= cap {
                    hit_cap = true;
                    break;
                }
            }
        }
    }
    let dim = basis.len();
    let stop_reason = if dim == ambient {
        StopReason::Ambient
    } else if hit_cap {
        StopReason::CapReached
    } else {
        StopReason::Closed
    };
    Ok(DenseAlgebraBasis {
        side,
        elements: basis,
        dim,
        generator_count: generators.len(),
        closed: stop_reason != StopReason::CapReached,
        stop_reason,
        sweeps,
        tolerance_used: tol,
    })
}
