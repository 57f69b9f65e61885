//! Dimensions of irreducible representations.
//!
//! The classical families, `g2` and `f4` use closed product formulas,
//! evaluated one factor at a time in exact integer arithmetic. The generic
//! Weyl formula works for every family from the root system and is the only
//! route for `e6`, `e7`, `e8`.

use super::algebra::{AlgebraId, Family};
use super::CatalogError;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Exact running product of factors `1 + num / den`, kept as a separate
/// numerator and denominator and divided once at the end.
struct Product {
    num: BigUint,
    den: BigUint,
}

impl Product {
    fn new() -> Product {
        Product { num: BigUint::one(), den: BigUint::one() }
    }

    /// Multiplies by `1 + num / den`.
    fn factor(&mut self, num: u64, den: u64) {
        if num == 0 {
            return;
        }
        self.num *= num + den;
        self.den *= den;
    }

    fn finish(self) -> BigUint {
        let (q, r) = self.num.div_rem(&self.den);
        assert!(r.is_zero(), "dimension product must be an integer");
        q
    }
}

fn check(alg: &AlgebraId, w: &[u32]) -> Result<(), CatalogError> {
    if w.len() != alg.rank {
        return Err(CatalogError::WeightLength { expected: alg.rank, got: w.len() });
    }
    Ok(())
}

/// Dimension of the irreducible representation with highest weight `w`.
pub fn irrep_dimension(alg: &AlgebraId, w: &[u32]) -> Result<BigUint, CatalogError> {
    check(alg, w)?;
    Ok(match alg.family {
        Family::A | Family::B | Family::C | Family::D | Family::G2 | Family::F4 => explicit(alg, w),
        _ => weyl_dimension_unchecked(alg, w),
    })
}

/// Same as [`irrep_dimension`], as a machine integer when it fits.
pub fn irrep_dimension_u64(alg: &AlgebraId, w: &[u32]) -> Result<Option<u64>, CatalogError> {
    Ok(irrep_dimension(alg, w)?.to_u64())
}

fn explicit(alg: &AlgebraId, w: &[u32]) -> BigUint {
    let l = alg.rank;
    // x(i) and s(i, j) use 1-based indices; s(i, j) = x_i + ... + x_j, empty when j < i
    let x = |i: usize| w[i - 1] as u64;
    let mut prefix = vec![0u64; l + 1];
    for i in 1..=l {
        prefix[i] = prefix[i - 1] + x(i);
    }
    let s = |i: usize, j: usize| -> u64 {
        if j < i {
            0
        } else {
            prefix[j] - prefix[i - 1]
        }
    };
    let mut p = Product::new();
    match alg.family {
        Family::A => {
            for i in 1..=l + 1 {
                for j in i + 1..=l + 1 {
                    p.factor(s(i, j - 1), (j - i) as u64);
                }
            }
        }
        Family::B => {
            for i in 1..=l {
                for j in i + 1..=l {
                    p.factor(s(i, j - 1) + 2 * s(j, l - 1) + x(l), (2 * l + 1 - i - j) as u64);
                    p.factor(s(i, j - 1), (j - i) as u64);
                }
                p.factor(2 * s(i, l - 1) + x(l), (2 * l + 1 - 2 * i) as u64);
            }
        }
        Family::C => {
            for i in 1..=l {
                for j in i + 1..=l {
                    p.factor(s(i, j - 1), (j - i) as u64);
                    p.factor(s(i, j - 1) + 2 * s(j, l), (2 * l + 2 - i - j) as u64);
                }
                p.factor(s(i, l), (l + 1 - i) as u64);
            }
        }
        Family::D => {
            for i in 1..=l {
                for j in i + 1..=l {
                    p.factor(s(i, j - 1), (j - i) as u64);
                }
            }
            for i in 1..l {
                p.factor(s(i, l - 2) + x(l), (l - i) as u64);
                for j in i + 1..l {
                    p.factor(s(i, j - 1) + 2 * s(j, l - 2) + x(l - 1) + x(l), (2 * l - i - j) as u64);
                }
            }
        }
        Family::G2 => {
            let (a, b) = (x(1), x(2));
            for (num, den) in [(b, 1), (a, 1), (a + b, 2), (a + 2 * b, 3), (a + 3 * b, 4), (2 * a + 3 * b, 5)] {
                p.factor(num, den);
            }
        }
        Family::F4 => {
            let (a, b, c, d) = (x(1), x(2), x(3), x(4));
            let factors = [
                (d, 1),
                (c, 1),
                (b, 1),
                (a, 1),
                (c + d, 2),
                (b + c, 2),
                (a + b, 2),
                (b + c + d, 3),
                (2 * b + c, 3),
                (a + b + c, 3),
                (2 * b + c + d, 4),
                (a + b + c + d, 4),
                (a + 2 * b + c, 4),
                (2 * b + 2 * c + d, 5),
                (a + 2 * b + c + d, 5),
                (2 * a + 2 * b + c, 5),
                (a + 2 * b + 2 * c + d, 6),
                (2 * a + 2 * b + c + d, 6),
                (a + 3 * b + 2 * c + d, 7),
                (2 * a + 2 * b + 2 * c + d, 7),
                (2 * a + 3 * b + 2 * c + d, 8),
                (2 * a + 4 * b + 2 * c + d, 9),
                (2 * a + 4 * b + 3 * c + d, 10),
                (2 * a + 4 * b + 3 * c + 2 * d, 11),
            ];
            for (num, den) in factors {
                p.factor(num, den);
            }
        }
        _ => unreachable!("exceptional E series use the generic formula"),
    }
    p.finish()
}

fn link(g: &mut [Vec<i64>], i: usize, j: usize, v: i64) {
    g[i][j] = v;
    g[j][i] = v;
}

/// Simply laced chain on the first `len` nodes.
fn chain(g: &mut [Vec<i64>], len: usize) {
    for (i, row) in g.iter_mut().enumerate().take(len) {
        row[i] = 2;
    }
    for i in 0..len.saturating_sub(1) {
        link(g, i, i + 1, -1);
    }
}

/// Gram matrix of the simple roots in Bourbaki numbering, scaled to integers.
pub fn gram_matrix(alg: &AlgebraId) -> Vec<Vec<i64>> {
    let l = alg.rank;
    let mut g = vec![vec![0i64; l]; l];
    match alg.family {
        Family::A => chain(&mut g, l),
        Family::B => {
            // long roots have length 4, the last (short) one length 2
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = if i + 1 == l { 2 } else { 4 };
            }
            for i in 0..l - 1 {
                link(&mut g, i, i + 1, -2);
            }
        }
        Family::C => {
            chain(&mut g, l);
            g[l - 1][l - 1] = 4;
            link(&mut g, l - 2, l - 1, -2);
        }
        Family::D => {
            chain(&mut g, l - 1);
            g[l - 1][l - 1] = 2;
            link(&mut g, l - 3, l - 1, -1);
        }
        Family::E6 | Family::E7 | Family::E8 => {
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
            for i in 2..l - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        Family::F4 => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Family::G2 => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

/// Positive roots as coefficient vectors over the simple roots, generated
/// by the usual root-string procedure.
pub fn positive_roots(alg: &AlgebraId) -> Vec<Vec<i64>> {
    let g = gram_matrix(alg);
    let l = alg.rank;
    let inner =
        |a: &[i64], b: &[i64]| -> i64 { (0..l).map(|i| (0..l).map(|j| a[i] * g[i][j] * b[j]).sum::<i64>()).sum() };
    let mut roots: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
    let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..l {
                // p = length of the string beta - k alpha_i inside the root system
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let mut e = vec![0i64; l];
                e[i] = 1;
                let pairing = 2 * inner(beta, &e) / g[i][i];
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots
}

/// Weyl's dimension formula `prod <lambda + rho, a> / <rho, a>` over positive roots.
pub fn weyl_dimension(alg: &AlgebraId, w: &[u32]) -> Result<BigUint, CatalogError> {
    check(alg, w)?;
    Ok(weyl_dimension_unchecked(alg, w))
}

fn weyl_dimension_unchecked(alg: &AlgebraId, w: &[u32]) -> BigUint {
    let g = gram_matrix(alg);
    let mut p = Product::new();
    for root in positive_roots(alg) {
        let rho: i64 = (0..alg.rank).map(|i| root[i] * g[i][i]).sum();
        let shift: i64 = (0..alg.rank).map(|i| root[i] * g[i][i] * w[i] as i64).sum();
        p.factor(shift as u64, rho as u64);
    }
    p.finish()
}
