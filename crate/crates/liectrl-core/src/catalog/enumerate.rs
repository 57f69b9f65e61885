use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::algebra::{AlgebraId, Family};
use super::dims::irrep_dimension_u64;
use super::{IrrepRecord, Malcev};

fn dim_of(alg: &AlgebraId, w: &[u32]) -> u64 {
    irrep_dimension_u64(alg, w).expect("weight length matches rank").unwrap_or(u64::MAX)
}

fn unit(rank: usize, i: usize) -> Vec<u32> {
    let mut w = vec![0; rank];
    w[i] = 1;
    w
}

/// Dimension of the lowest nontrivial irrep.
fn min_dim(alg: &AlgebraId) -> u64 {
    let l = alg.rank as u64;
    match alg.family {
        Family::A => l + 1,
        Family::B => (2 * l + 1).min(1u64.checked_shl(l as u32).unwrap_or(u64::MAX)),
        Family::C | Family::D => 2 * l,
        Family::E6 => 27,
        Family::E7 => 56,
        Family::E8 => 248,
        Family::F4 => 26,
        Family::G2 => 7,
    }
}

/// Dimension of the second-lowest irrep `e2` for the ranks where it is
/// second-lowest; `None` where the rank is too small for that to hold.
fn second_lowest_dim(alg: &AlgebraId) -> Option<u64> {
    let l = alg.rank as u64;
    match alg.family {
        Family::A if l >= 3 => Some(l * (l + 1) / 2),
        Family::B if l >= 7 => Some(l * (2 * l + 1)),
        Family::C if l >= 4 => Some(l * (2 * l - 1) - 1),
        Family::D if l >= 8 => Some(l * (2 * l - 1)),
        _ => None,
    }
}

/// Every simple algebra with a nontrivial irrep of dimension at most `max_dim`.
fn algebras_up_to(max_dim: u64) -> Vec<AlgebraId> {
    let mut out = Vec::new();
    for family in Family::ALL {
        let mut rank = match family {
            Family::A => 1,
            Family::B => 2,
            Family::C => 3,
            Family::D => 4,
            _ => {
                let alg = AlgebraId::exceptional(family);
                if min_dim(&alg) <= max_dim {
                    out.push(alg);
                }
                continue;
            }
        };
        loop {
            let alg = AlgebraId { family, rank };
            if min_dim(&alg) > max_dim {
                break;
            }
            out.push(alg);
            rank += 1;
        }
    }
    out
}

fn search_algebra(alg: &AlgebraId, max_dim: u64) -> Vec<IrrepRecord> {
    let l = alg.rank;
    if second_lowest_dim(alg).is_some_and(|d| d > max_dim) {
        // min_dim is the standard dimension for every rank that reaches this branch
        let std = alg.standard_weight();
        return if min_dim(alg) <= max_dim {
            vec![IrrepRecord::with_dim(*alg, &std, min_dim(alg))]
        } else {
            Vec::new()
        };
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut found: BTreeMap<Vec<u32>, IrrepRecord> = BTreeMap::new();
    let mut stack: Vec<Vec<u32>> = (0..l).map(|i| unit(l, i)).collect();
    while let Some(w) = stack.pop() {
        if !seen.insert(w.clone()) {
            continue;
        }
        if dim_of(alg, &w) > max_dim {
            continue;
        }
        let rec = record(alg, &w);
        found.entry(rec.weight.clone()).or_insert(rec);
        for i in 0..l {
            let mut next = w.clone();
            next[i] += 1;
            if !seen.contains(&next) {
                stack.push(next);
            }
        }
    }
    found.into_values().collect()
}

fn record(alg: &AlgebraId, w: &[u32]) -> IrrepRecord {
    IrrepRecord::new(*alg, w).expect("weight length matches rank")
}

fn sort_records(records: &mut [IrrepRecord]) {
    records.sort_by(|a, b| (a.dim, a.algebra, &a.weight).cmp(&(b.dim, b.algebra, &b.weight)));
}

/// All nontrivial irreps of all compact simple Lie algebras of dimension at
/// most `max_dim`, one record per outer orbit, sorted by
/// `(dim, family, rank, weight)`.
///
/// The search starts from the fundamental weights and increments one entry
/// at a time, cutting a branch once the dimension exceeds `max_dim`. This is
/// complete because dimensions grow strictly in every entry. For large ranks
/// only the standard representation is checked once the second-lowest irrep
/// is already too big.
pub fn enumerate_irreps(max_dim: u64) -> Vec<IrrepRecord> {
    let mut out: Vec<IrrepRecord> =
        algebras_up_to(max_dim).par_iter().flat_map_iter(|alg| search_algebra(alg, max_dim)).collect();
    sort_records(&mut out);
    out
}

/// Independent enumeration for testing: for each algebra, scans the full box
/// `0 <= x_i <= b_i` where `b_i` is the largest multiple of the i-th
/// fundamental weight within the bound, with no rank cutoff and no tree search.
pub fn enumerate_box_oracle(max_dim: u64) -> Vec<IrrepRecord> {
    let mut out = Vec::new();
    for alg in algebras_up_to(max_dim) {
        let l = alg.rank;
        let bounds: Vec<u32> = (0..l)
            .map(|i| {
                let mut m = 0;
                while dim_of(&alg, &unit(l, i).iter().map(|x| x * (m + 1)).collect::<Vec<_>>()) <= max_dim {
                    m += 1;
                }
                m
            })
            .collect();
        let mut found: BTreeMap<Vec<u32>, IrrepRecord> = BTreeMap::new();
        let mut w = vec![0u32; l];
        'outer: loop {
            // odometer increment over the box
            let mut i = 0;
            loop {
                if i == l {
                    break 'outer;
                }
                if w[i] < bounds[i] {
                    w[i] += 1;
                    break;
                }
                w[i] = 0;
                i += 1;
            }
            if dim_of(&alg, &w) <= max_dim {
                let rec = record(&alg, &w);
                found.entry(rec.weight.clone()).or_insert(rec);
            }
        }
        out.extend(found.into_values());
    }
    sort_records(&mut out);
    out
}

/// Whether `su(2^n)` has a proper irreducible simple subalgebra of unitary type.
pub fn unitary_subalgebras_exist(n_qubits: u32) -> bool {
    let n = 1u64 << n_qubits;
    enumerate_irreps(n)
        .into_iter()
        .filter(|r| r.dim == n && r.malcev == Malcev::U)
        .any(|r| !(r.algebra.family == Family::A && r.algebra.rank as u64 == n - 1 && r.is_standard()))
}
