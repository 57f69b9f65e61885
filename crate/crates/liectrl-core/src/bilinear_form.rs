//! Invariant bilinear forms.
//!
//! A matrix `S` with `S H + H^T S = 0` for every generator `H` defines a
//! bilinear form preserved by the whole generated algebra. Transposing the
//! equation shows that `S^T` is a solution whenever `S` is, so the solution
//! space splits into symmetric and antisymmetric parts. When it is
//! one-dimensional, `S` is unitary up to scale and `S S̄ = ±1`. The sign
//! separates orthogonal (`+1`) from symplectic (`-1`) type.

use crate::matrep::{joint_sylvester_kernel, rank, CMatrix, MatrepError, C64, DEFAULT_TOL};
use crate::pauli::{Letter, PauliError, PauliExpr, PauliTerm};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

/// Largest matrix side accepted by [`classify_form`].
pub const FORM_MAX_SIDE: usize = 64;

const CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("no generators given")]
    Empty,
    #[error("matrix side {side} exceeds the form-test cap {cap}")]
    TooLarge { side: usize, cap: usize },
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Matrep(#[from] MatrepError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormKind {
    Orthogonal,
    Symplectic,
    NoForm,
}

#[derive(Clone, Debug)]
pub struct FormClassification {
    pub kind: FormKind,
    /// Representative invariant form, absent for [`FormKind::NoForm`].
    pub s: Option<CMatrix>,
    pub s_sbar_sign: Option<i8>,
    /// Largest `||S H + H^T S||` over generators and solution basis.
    pub residual: f64,
    /// True when the representative passed the unitarity and `S S̄ = ±1` checks.
    pub scalar_normalized: bool,
    pub solution_dim: usize,
    /// False when the solution space is larger than one-dimensional and the
    /// kinds found are reported as a set.
    pub exclusive: bool,
    pub kinds_found: Vec<FormKind>,
}

/// Whether two matrices agree up to a unit complex factor.
pub fn equal_up_to_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    if na == 0.0 || nb == 0.0 {
        return na == nb;
    }
    (a.hs_inner(b).norm() / (na * nb) - 1.0).abs() <= tol && (na - nb).abs() <= tol * na.max(nb)
}

fn normalise(s: &CMatrix) -> CMatrix {
    let scaled = s.scale(C64::new(1.0 / s.spectral_norm(), 0.0));
    let cut = 1e-10 * scaled.max_abs();
    let lead = scaled.data().iter().find(|z| z.norm() > cut).copied().unwrap_or(C64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    let mut out = scaled.scale(phase);
    // clean rounding dust so printed matrices are readable
    let data: Vec<C64> = out
        .data()
        .iter()
        .map(|z| C64::new(if z.re.abs() < 1e-14 { 0.0 } else { z.re }, if z.im.abs() < 1e-14 { 0.0 } else { z.im }))
        .collect();
    out = CMatrix::from_row_major(out.rows(), out.cols(), data).expect("same shape");
    out
}

fn sign_of(s: &CMatrix) -> (i8, bool) {
    let n = s.rows();
    let prod = s * &s.conj();
    let sign: i8 = if prod.trace().re / n as f64 >= 0.0 { 1 } else { -1 };
    let target = CMatrix::identity(n).scale(C64::new(sign as f64, 0.0));
    let unitary = (&(s * &s.adjoint()) - &CMatrix::identity(n)).max_abs() <= CHECK_TOL;
    let involutive = (&prod - &target).max_abs() <= CHECK_TOL;
    (sign, unitary && involutive)
}

/// Finds and classifies the joint invariant bilinear form of `generators`.
///
/// `irreducible` is an optional certificate from the centraliser test. With
/// a certificate, a solution space of dimension above one is reported as a
/// numerical inconsistency. Without one, the symmetric and antisymmetric
/// parts are reported separately.
pub fn classify_form(generators: &[CMatrix], irreducible: Option<bool>) -> Result<FormClassification, FormError> {
    let first = generators.first().ok_or(FormError::Empty)?;
    let side = first.rows();
    if side > FORM_MAX_SIDE {
        return Err(FormError::TooLarge { side, cap: FORM_MAX_SIDE });
    }
    let minus = C64::new(-1.0, 0.0);
    let pairs: Vec<(CMatrix, CMatrix)> = generators.iter().map(|h| (h.transpose().scale(minus), h.clone())).collect();
    let ns = joint_sylvester_kernel(&pairs, DEFAULT_TOL)?;
    let residual = ns.residual_max;
    let d = ns.dim();
    if d == 0 {
        return Ok(FormClassification {
            kind: FormKind::NoForm,
            s: None,
            s_sbar_sign: None,
            residual,
            scalar_normalized: false,
            solution_dim: 0,
            exclusive: true,
            kinds_found: vec![FormKind::NoForm],
        });
    }
    if d == 1 {
        let s = normalise(&ns.basis[0]);
        let (sign, ok) = sign_of(&s);
        if !ok {
            return Err(FormError::Inconsistent(format!(
                "one-dimensional solution is not unitary with S S̄ = ±1 (residual {residual:.2e})"
            )));
        }
        let kind = if sign > 0 { FormKind::Orthogonal } else { FormKind::Symplectic };
        return Ok(FormClassification {
            kind,
            s: Some(s),
            s_sbar_sign: Some(sign),
            residual,
            scalar_normalized: true,
            solution_dim: 1,
            exclusive: true,
            kinds_found: vec![kind],
        });
    }
    if irreducible == Some(true) {
        return Err(FormError::Inconsistent(format!("{d}-dimensional form space despite a trivial centraliser")));
    }
    let half = C64::new(0.5, 0.0);
    let parts = |sign: f64| -> Vec<CMatrix> {
        ns.basis.iter().map(|x| (x + &x.transpose().scale(C64::new(sign, 0.0))).scale(half)).collect()
    };
    let part_rank = |mats: &[CMatrix]| -> usize {
        let cols: Vec<Vec<C64>> = mats.iter().map(|m| m.data().to_vec()).collect();
        let m = CMatrix::from_fn(side * side, cols.len(), |i, j| cols[j][i]);
        if m.max_abs() <= 1e-12 {
            0
        } else {
            rank(&m, 1e-8).unwrap_or(0)
        }
    };
    let sym = parts(1.0);
    let alt = parts(-1.0);
    let mut kinds_found = Vec::new();
    let mut representative: Option<CMatrix> = None;
    if part_rank(&sym) > 0 {
        kinds_found.push(FormKind::Orthogonal);
        representative = sym.iter().max_by(|a, b| a.frobenius_norm().total_cmp(&b.frobenius_norm())).cloned();
    }
    if part_rank(&alt) > 0 {
        kinds_found.push(FormKind::Symplectic);
        if representative.is_none() {
            representative = alt.iter().max_by(|a, b| a.frobenius_norm().total_cmp(&b.frobenius_norm())).cloned();
        }
    }
    let kind = kinds_found
        .first()
        .copied()
        .ok_or_else(|| FormError::Inconsistent("form space has no symmetric or antisymmetric part".into()))?;
    let s = representative.map(|r| normalise(&r));
    let (sign, ok) = s.as_ref().map(sign_of).unwrap_or((0, false));
    Ok(FormClassification {
        kind,
        s,
        s_sbar_sign: Some(if ok {
            sign
        } else if kind == FormKind::Orthogonal {
            1
        } else {
            -1
        }),
        residual,
        scalar_normalized: ok,
        solution_dim: d,
        exclusive: false,
        kinds_found,
    })
}

/// Classifies the local algebra `su(2) ⊕ ... ⊕ su(2)` acting on `n` qubits.
pub fn local_parity_check(n: usize) -> Result<FormClassification, FormError> {
    let mut gens = Vec::with_capacity(3 * n);
    for q in 0..n {
        for letter in [Letter::X, Letter::Y, Letter::Z] {
            let term = PauliTerm::single(n, q, letter)?;
            gens.push(
                PauliExpr::from_term(term, BigRational::one()).to_matrix(FORM_MAX_SIDE.trailing_zeros() as usize)?,
            );
        }
    }
    classify_form(&gens, Some(true))
}
