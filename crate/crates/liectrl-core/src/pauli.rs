//! Exact algebra of n-qubit Pauli strings.
//!
//! A [`PauliTerm`] packs its letters into a base-4 integer with `I=0, X=1, Y=2, Z=3`
//! and the leftmost qubit in the most significant digit. In binary each letter
//! occupies two bits, and the pair `(x, z)` of symplectic bits is recovered as
//! `x = lo ^ hi`, `z = hi`. Multiplying two terms XORs their codes.
//!
//! A [`PauliExpr`] with coefficients `c_k` stands for the skew-Hermitian matrix
//! `sum_k c_k (-i/2) P_k`. With this normalisation the commutator of two basis
//! elements is again a rational combination of basis elements.

use crate::matrep::{CMatrix, C64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest supported qubit count (two bits per qubit in a `u64`).
pub const MAX_QUBITS: usize = 32;

/// Default qubit cap for dense materialisation.
pub const DEFAULT_DENSE_QUBITS: usize = 12;

const LO_MASK: u64 = 0x5555_5555_5555_5555;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid Pauli letter {0:?}")]
    InvalidLetter(char),
    #[error("qubit count {0} is outside 1..={MAX_QUBITS}")]
    BadQubitCount(usize),
    #[error("code {code} does not fit in {n} qubits")]
    BadCode { n: usize, code: u64 },
    #[error("expression is zero")]
    ZeroExpression,
    #[error("dense materialisation of {n} qubits exceeds cap {cap}")]
    DenseCapExceeded { n: usize, cap: usize },
    #[error("invalid rational coefficient {0:?}")]
    BadCoefficient(String),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
}

/// A power of `i`, stored as the exponent modulo 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: i64) -> Phase {
        Phase(e.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Letter {
    pub fn from_char(c: char) -> Result<Letter, PauliError> {
        match c {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(PauliError::InvalidLetter(other)),
        }
    }

    pub fn to_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }

    fn from_bits(b: u64) -> Letter {
        [Letter::I, Letter::X, Letter::Y, Letter::Z][(b & 3) as usize]
    }
}

/// An n-qubit Pauli string without phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliTerm {
    n: u8,
    code: u64,
}

fn check_n(n: usize) -> Result<(), PauliError> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(PauliError::BadQubitCount(n))
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 32 {
        u64::MAX
    } else {
        (1u64 << (2 * n)) - 1
    }
}

/// Packs every second bit (positions 0, 2, 4, ...) into consecutive bits.
fn compact(bits: u64) -> u64 {
    let mut x = bits & LO_MASK;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    x = (x | (x >> 16)) & 0x0000_0000_ffff_ffff;
    x
}

impl PauliTerm {
    pub fn new(n: usize, code: u64) -> Result<PauliTerm, PauliError> {
        check_n(n)?;
        if code & !full_mask(n) != 0 {
            return Err(PauliError::BadCode { n, code });
        }
        Ok(PauliTerm { n: n as u8, code })
    }

    pub fn identity(n: usize) -> Result<PauliTerm, PauliError> {
        PauliTerm::new(n, 0)
    }

    /// The term with `letter` on qubit `q` (0-based from the left) and identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Letter) -> Result<PauliTerm, PauliError> {
        check_n(n)?;
        if q >= n {
            return Err(PauliError::QubitOutOfRange { index: q, n });
        }
        Ok(PauliTerm { n: n as u8, code: (letter as u64) << (2 * (n - 1 - q)) })
    }

    pub fn from_letters(letters: &[Letter]) -> Result<PauliTerm, PauliError> {
        check_n(letters.len())?;
        let code = letters.iter().fold(0u64, |acc, &l| (acc << 2) | l as u64);
        Ok(PauliTerm { n: letters.len() as u8, code })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn is_identity(&self) -> bool {
        self.code == 0
    }

    /// Letter on qubit `q`, counted from the left.
    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.code >> (2 * (self.n() - 1 - q)))
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        let lo = self.code & LO_MASK;
        let hi = (self.code >> 1) & LO_MASK;
        (lo | hi).count_ones() as usize
    }

    /// Indices (0-based from the left) of qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.letter(q) != Letter::I).collect()
    }

    /// Support as a bitmask with bit `q` set for qubit `q` (0-based from the left).
    pub fn support_mask(&self) -> u64 {
        let n = self.n();
        let occupied = compact((self.code | (self.code >> 1)) & LO_MASK);
        // compact() puts qubit q at bit n-1-q; reverse into left-to-right order
        (0..n).filter(|&q| occupied >> (n - 1 - q) & 1 == 1).fold(0, |m, q| m | 1 << q)
    }

    fn xz(&self) -> (u64, u64) {
        let lo = self.code & LO_MASK;
        let hi = (self.code >> 1) & LO_MASK;
        (lo ^ hi, hi)
    }

    /// True when the two terms commute as matrices.
    pub fn commutes_with(&self, other: &PauliTerm) -> bool {
        let (xa, za) = self.xz();
        let (xb, zb) = other.xz();
        ((xa & zb).count_ones() + (za & xb).count_ones()) % 2 == 0
    }

    /// Returns `(phase, c)` with `self * other = phase * c`.
    pub fn multiply(&self, other: &PauliTerm) -> Result<(Phase, PauliTerm), PauliError> {
        if self.n != other.n {
            return Err(PauliError::LengthMismatch(self.n(), other.n()));
        }
        Ok(self.multiply_unchecked(other))
    }

    fn multiply_unchecked(&self, other: &PauliTerm) -> (Phase, PauliTerm) {
        let (xa, za) = self.xz();
        let (xb, zb) = other.xz();
        let code = self.code ^ other.code;
        let (xc, zc) = PauliTerm { n: self.n, code }.xz();
        let e = (xa & za).count_ones() as i64 + (xb & zb).count_ones() as i64 + 2 * (za & xb).count_ones() as i64
            - (xc & zc).count_ones() as i64;
        (Phase::from_exponent(e), PauliTerm { n: self.n, code })
    }

    /// Bracket of the normalised basis elements: `[(-i/2)P, (-i/2)Q] = k (-i/2) R`.
    /// Returns `None` when the terms commute, otherwise `(k, R)` with `k = +-1`.
    pub fn bracket(&self, other: &PauliTerm) -> Option<(i8, PauliTerm)> {
        if self.commutes_with(other) {
            return None;
        }
        let (phase, r) = self.multiply_unchecked(other);
        let k = if phase.exponent() == 1 { 1 } else { -1 };
        Some((k, r))
    }

    /// Dense matrix of the bare Pauli string (no `-i/2` factor).
    pub fn to_matrix(&self, cap_qubits: usize) -> Result<CMatrix, PauliError> {
        let mut m = dense_zero(self.n(), cap_qubits)?;
        accumulate_term(&mut m, self, C64::new(1.0, 0.0));
        Ok(m)
    }
}

fn dense_zero(n: usize, cap: usize) -> Result<CMatrix, PauliError> {
    if n > cap {
        return Err(PauliError::DenseCapExceeded { n, cap });
    }
    let dim = 1usize << n;
    Ok(CMatrix::zeros(dim, dim))
}

fn accumulate_term(m: &mut CMatrix, t: &PauliTerm, scale: C64) {
    let (x, z) = t.xz();
    let (xc, zc) = (compact(x), compact(z));
    let base = Phase::from_exponent((x & z).count_ones() as i64).to_complex() * scale;
    for c in 0..m.cols() as u64 {
        let sign = if (zc & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        m.add_at((c ^ xc) as usize, c as usize, base * sign);
    }
}

impl FromStr for PauliTerm {
    type Err = PauliError;
    fn from_str(s: &str) -> Result<PauliTerm, PauliError> {
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>, _>>()?;
        PauliTerm::from_letters(&letters)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Convenience wrapper around [`PauliTerm::multiply`].
pub fn multiply_terms(a: &PauliTerm, b: &PauliTerm) -> Result<(Phase, PauliTerm), PauliError> {
    a.multiply(b)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, PauliError> {
    let t = s.trim();
    let bad = || PauliError::BadCoefficient(s.to_string());
    if let Some((num, den)) = t.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| bad())
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Real-linear combination `sum c_k (-i/2) P_k` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliExpr {
    n: usize,
    terms: BTreeMap<u64, BigRational>,
}

impl PauliExpr {
    pub fn zero(n: usize) -> Result<PauliExpr, PauliError> {
        check_n(n)?;
        Ok(PauliExpr { n, terms: BTreeMap::new() })
    }

    pub fn from_term(term: PauliTerm, coeff: BigRational) -> PauliExpr {
        let mut e = PauliExpr { n: term.n(), terms: BTreeMap::new() };
        e.add_term(term.code, coeff);
        e
    }

    /// Sum of unit-coefficient terms parsed from letter strings.
    pub fn from_strs(strs: &[&str]) -> Result<PauliExpr, PauliError> {
        let pairs = strs.iter().map(|s| (BigRational::one(), *s)).collect::<Vec<_>>();
        PauliExpr::from_pairs(&pairs)
    }

    /// Builds an expression from `(coefficient, letters)` pairs.
    pub fn from_pairs(pairs: &[(BigRational, &str)]) -> Result<PauliExpr, PauliError> {
        let first = pairs.first().ok_or(PauliError::ZeroExpression)?;
        let n = first.1.chars().count();
        let mut e = PauliExpr::zero(n)?;
        for (c, s) in pairs {
            let t: PauliTerm = s.parse()?;
            if t.n() != n {
                return Err(PauliError::LengthMismatch(n, t.n()));
            }
            e.add_term(t.code, c.clone());
        }
        Ok(e)
    }

    /// Internal constructor from raw codes; codes must fit in `n` qubits.
    pub(crate) fn from_map(n: usize, terms: BTreeMap<u64, BigRational>) -> PauliExpr {
        PauliExpr { n, terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, code: u64) -> Option<&BigRational> {
        self.terms.get(&code)
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    /// Terms in canonical (base-4 lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (PauliTerm, &BigRational)> + '_ {
        let n = self.n as u8;
        self.terms.iter().map(move |(&code, c)| (PauliTerm { n, code }, c))
    }

    /// Adds `coeff` to the coefficient of the term with the given code.
    pub(crate) fn add_term(&mut self, code: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(code) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &PauliExpr) -> Result<(), PauliError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(PauliError::LengthMismatch(self.n, other.n))
        }
    }

    pub fn add(&self, other: &PauliExpr) -> Result<PauliExpr, PauliError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&code, c) in &other.terms {
            out.add_term(code, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PauliExpr) -> Result<PauliExpr, PauliError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> PauliExpr {
        if s.is_zero() {
            return PauliExpr { n: self.n, terms: BTreeMap::new() };
        }
        PauliExpr { n: self.n, terms: self.terms.iter().map(|(&k, c)| (k, c * s)).collect() }
    }

    /// Positive rational multiple with coprime integer coefficients and a
    /// positive leading coefficient. The zero expression is returned unchanged.
    pub fn primitive(&self) -> PauliExpr {
        let Some(first) = self.terms.values().next() else {
            return self.clone();
        };
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * &lcm / c.denom())));
        let mut factor = BigRational::new(lcm, gcd);
        if first.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Exact commutator in the `-i/2` convention.
    pub fn bracket(&self, other: &PauliExpr) -> Result<PauliExpr, PauliError> {
        self.check_same(other)?;
        Ok(self.bracket_unchecked(other))
    }

    pub(crate) fn bracket_unchecked(&self, other: &PauliExpr) -> PauliExpr {
        let n8 = self.n as u8;
        let mut out = PauliExpr { n: self.n, terms: BTreeMap::new() };
        for (&ca, a) in &self.terms {
            let pa = PauliTerm { n: n8, code: ca };
            for (&cb, b) in &other.terms {
                if let Some((k, r)) = pa.bracket(&PauliTerm { n: n8, code: cb }) {
                    let prod = a * b;
                    out.add_term(r.code, if k > 0 { prod } else { -prod });
                }
            }
        }
        out
    }

    /// Largest number of non-identity letters over the terms.
    pub fn order(&self) -> Result<usize, PauliError> {
        let n8 = self.n as u8;
        self.terms.keys().map(|&code| PauliTerm { n: n8, code }.weight()).max().ok_or(PauliError::ZeroExpression)
    }

    /// Union of the supports of all terms, bit `q` for qubit `q`.
    pub fn support_mask(&self) -> u64 {
        self.terms().fold(0, |m, (t, _)| m | t.support_mask())
    }

    /// Dense skew-Hermitian matrix `sum c_k (-i/2) P_k`.
    pub fn to_matrix(&self, cap_qubits: usize) -> Result<CMatrix, PauliError> {
        let mut m = dense_zero(self.n, cap_qubits)?;
        let minus_half_i = C64::new(0.0, -0.5);
        for (t, c) in self.terms() {
            accumulate_term(&mut m, &t, minus_half_i * rational_to_f64(c));
        }
        Ok(m)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for PauliExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (t, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{} ", format_rational(&mag))?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
