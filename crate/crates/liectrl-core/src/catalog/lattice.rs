use std::collections::HashMap;
use std::fmt::Write as _;

use num_integer::binomial;
use serde::Serialize;

use super::algebra::{format_weight, AlgebraId, Family};
use super::enumerate::enumerate_irreps;
use super::{CatalogError, IrrepRecord, Malcev};

pub const DEFAULT_LATTICE_CAP: u64 = 256;

/// Which of the three classical roots a node plays, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootKind {
    Unitary,
    Symplectic,
    Orthogonal,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeNode {
    pub record: IrrepRecord,
    /// Roles as `su(N)`, `sp(N/2)` or `so(N)`; `su(2)` is both unitary and symplectic root.
    pub roots: Vec<RootKind>,
}

impl LatticeNode {
    /// Label of the form `family(rank) weight [type]`.
    pub fn label(&self) -> String {
        let r = &self.record;
        format!("{}({}) {} [{}]", r.algebra.family.letter(), r.algebra.rank, r.display_weights_raw(), r.malcev)
    }
}

/// `child` is a maximal subalgebra of `parent` (indices into the node list).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeEdge {
    pub child: usize,
    pub parent: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lattice {
    pub n: u64,
    pub nodes: Vec<LatticeNode>,
    pub edges: Vec<LatticeEdge>,
}

impl IrrepRecord {
    fn display_weights_raw(&self) -> String {
        self.orbit.iter().map(|w| format_weight(w)).collect::<Vec<_>>().join("/")
    }
}

/// `prod_{s=1}^{2k+1} C(m+2s-1, m) / C(m+s-1, m)`, the dimension of the
/// `so(4k+3)` irrep `(0,...,0,m)`.
pub fn so4k3_exception_dim(k: u64, m: u64) -> u64 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for s in 1..=2 * k + 1 {
        num *= binomial(u128::from(m + 2 * s - 1), u128::from(m));
        den *= binomial(u128::from(m + s - 1), u128::from(m));
        let g = num_integer::gcd(num, den);
        num /= g;
        den /= g;
    }
    assert_eq!(den, 1, "so(4k+3) exception dimension must be an integer");
    num as u64
}

fn e(rank: usize, i: usize) -> Vec<u32> {
    let mut w = vec![0; rank];
    w[i - 1] = 1;
    w
}

fn scaled(rank: usize, i: usize, m: u32) -> Vec<u32> {
    let mut w = vec![0; rank];
    w[i - 1] = m;
    w
}

fn is_pattern(w: &[u32], prefix: &[u32]) -> bool {
    w.len() >= prefix.len() && w[..prefix.len()] == *prefix && w[prefix.len()..].iter().all(|&x| x == 0)
}

/// Parent of an irreducible simple subalgebra that is not maximal in the
/// classical algebra matching its Malcev type. Returns the parent algebra and
/// a highest weight of the same dimension.
pub fn exception_parent(rec: &IrrepRecord) -> Option<(AlgebraId, Vec<u32>)> {
    let l = rec.algebra.rank;
    let w = rec.weight.as_slice();
    let a = |rank: usize| AlgebraId { family: Family::A, rank };
    let c = |rank: usize| AlgebraId { family: Family::C, rank };
    let d = |rank: usize| AlgebraId { family: Family::D, rank };
    match rec.algebra.family {
        Family::A => {
            if l >= 4 && is_pattern(w, &[1, 0, 1]) {
                let m = l * (l + 1) / 2;
                return Some((a(m - 1), e(m - 1, 2)));
            }
            if l >= 3 && is_pattern(w, &[2, 1]) {
                let m = l * (l + 3) / 2 + 1;
                return Some((a(m - 1), e(m - 1, 2)));
            }
            if l == 1 && w == [6] {
                return Some((AlgebraId::exceptional(Family::G2), vec![1, 0]));
            }
            if l == 5 && w == [0, 1, 0, 1, 0] {
                return Some((c(10), e(10, 2)));
            }
            None
        }
        Family::B => {
            if l % 4 == 3 {
                let k = (l - 3) / 4;
                let m = w[l - 1];
                let tail_only = m > 0 && w[..l - 1].iter().all(|&x| x == 0);
                if tail_only && !(k == 1 && m == 1) && k >= 1 {
                    return Some((d(l + 1), scaled(l + 1, l, m)));
                }
            }
            if l == 4 && w == [1, 0, 0, 1] {
                return Some((d(8), e(8, 8)));
            }
            None
        }
        Family::C if l == 3 => match w {
            [0, 2, 0] => Some((c(7), e(7, 2))),
            [1, 2, 0] => Some((c(7), e(7, 3))),
            _ => None,
        },
        Family::D => match (l, w) {
            (5, [0, 1, 0, 1, 0]) => Some((a(15), e(15, 3))),
            (6, [0, 0, 0, 1, 0, 0]) => Some((c(16), e(16, 2))),
            (6, [0, 0, 1, 0, 1, 0]) => Some((c(16), e(16, 3))),
            _ => None,
        },
        Family::E6 => match w {
            [0, 0, 1, 0, 0, 0] => Some((a(26), e(26, 2))),
            [0, 1, 1, 0, 0, 0] => Some((a(26), e(26, 4))),
            _ => None,
        },
        Family::E7 => {
            let i = match w {
                [0, 0, 0, 0, 0, 1, 0] => 2,
                [0, 0, 0, 0, 1, 0, 0] => 3,
                [0, 0, 0, 1, 0, 0, 0] => 4,
                [0, 1, 1, 0, 0, 0, 0] => 5,
                _ => return None,
            };
            Some((c(28), e(28, i)))
        }
        Family::G2 if w[1] == 0 && w[0] >= 2 => Some((AlgebraId { family: Family::B, rank: 3 }, scaled(3, 1, w[0]))),
        _ => None,
    }
}

fn key(alg: &AlgebraId, w: &[u32]) -> (AlgebraId, Vec<u32>) {
    (*alg, alg.outer_orbit(w)[0].clone())
}

fn is_std(rec: &IrrepRecord, family: Family) -> bool {
    rec.algebra.family == family && rec.is_standard()
}

fn root_kinds(rec: &IrrepRecord, n: u64) -> Vec<RootKind> {
    let (f, l, w) = (rec.algebra.family, rec.algebra.rank, rec.weight.as_slice());
    let mut kinds = Vec::new();
    if f == Family::A && l as u64 == n - 1 && rec.is_standard() {
        kinds.push(RootKind::Unitary);
    }
    let sp = match n {
        2 => f == Family::A && w == [1],
        4 => f == Family::B && l == 2 && w == [0, 1],
        _ => n.is_multiple_of(2) && is_std(rec, Family::C),
    };
    if sp {
        kinds.push(RootKind::Symplectic);
    }
    let so = match n {
        3 => f == Family::A && w == [2],
        5 => f == Family::B && l == 2 && w == [1, 0],
        6 => f == Family::A && l == 3 && w == [0, 1, 0],
        _ if n >= 7 => is_std(rec, Family::B) || is_std(rec, Family::D),
        _ => false,
    };
    if so {
        kinds.push(RootKind::Orthogonal);
    }
    kinds
}

/// Inclusion lattice of the irreducible simple subalgebras of `su(n)`,
/// with the default cap on `n`.
pub fn build_lattice(n: u64) -> Result<Lattice, CatalogError> {
    build_lattice_with_cap(n, DEFAULT_LATTICE_CAP)
}

pub fn build_lattice_with_cap(n: u64, cap: u64) -> Result<Lattice, CatalogError> {
    if n < 2 || n > cap {
        return Err(CatalogError::CapExceeded { n, cap });
    }
    let records: Vec<IrrepRecord> = enumerate_irreps(n).into_iter().filter(|r| r.dim == n).collect();
    Ok(lattice_from_records(n, records))
}

fn lattice_from_records(n: u64, records: Vec<IrrepRecord>) -> Lattice {
    let nodes: Vec<LatticeNode> =
        records.into_iter().map(|record| LatticeNode { roots: root_kinds(&record, n), record }).collect();
    let index: HashMap<(AlgebraId, Vec<u32>), usize> =
        nodes.iter().enumerate().map(|(i, nd)| ((nd.record.algebra, nd.record.weight.clone()), i)).collect();
    let root_of = |kind: RootKind| nodes.iter().position(|nd| nd.roots.contains(&kind));
    let su = root_of(RootKind::Unitary).expect("su(N) is always present");
    let sp = root_of(RootKind::Symplectic);
    let so = root_of(RootKind::Orthogonal);

    let mut edges = Vec::new();
    for (i, nd) in nodes.iter().enumerate() {
        if nd.roots.contains(&RootKind::Unitary) {
            continue;
        }
        let parent = if !nd.roots.is_empty() {
            Some(su)
        } else if let Some((alg, w)) = exception_parent(&nd.record) {
            Some(*index.get(&key(&alg, &w)).expect("exception parent has the same dimension"))
        } else {
            match nd.record.malcev {
                Malcev::U => Some(su),
                Malcev::S => sp,
                Malcev::O => so,
            }
        };
        let parent = parent.expect("every non-root node has a classical parent");
        edges.push(LatticeEdge { child: i, parent });
    }
    Lattice { n, nodes, edges }
}

impl Lattice {
    pub fn parents(&self, node: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.child == node).map(|e| e.parent).collect()
    }

    pub fn find(&self, family: Family, rank: usize, weight: &[u32]) -> Option<usize> {
        let alg = AlgebraId { family, rank };
        let rep = alg.outer_orbit(weight).into_iter().next()?;
        self.nodes.iter().position(|nd| nd.record.algebra == alg && nd.record.weight == rep)
    }

    /// Graphviz digraph with arrows pointing from subalgebra to parent.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"su({})\" {{\n  rankdir=BT;\n", self.n);
        self.write_dot_body(&mut s, "  ", &format!("n{}_", self.n));
        s.push_str("}\n");
        s
    }

    fn write_dot_body(&self, s: &mut String, indent: &str, prefix: &str) {
        for (i, nd) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                s,
                "{indent}{prefix}{i} [label=\"{}\", tooltip=\"{}\"];",
                nd.label(),
                nd.record.display_name()
            );
        }
        for e in &self.edges {
            let _ = writeln!(s, "{indent}{prefix}{} -> {prefix}{};", e.child, e.parent);
        }
    }

    /// Several lattices in one digraph, one cluster per ambient dimension.
    pub fn combined_dot(lattices: &[Lattice]) -> String {
        let mut s = String::from("digraph \"catalog\" {\n  rankdir=BT;\n");
        for lat in lattices {
            let _ = writeln!(s, "  subgraph \"cluster_{}\" {{\n    label=\"su({})\";", lat.n, lat.n);
            lat.write_dot_body(&mut s, "    ", &format!("n{}_", lat.n));
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        s
    }
}

/// One row of the catalog CSV export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogCsvRow {
    pub dim: u64,
    pub family: String,
    pub rank: usize,
    pub weight: String,
    #[serde(rename = "type")]
    pub malcev: String,
    /// Parents in the lattice of the same dimension, separated by `;`.
    pub parents: String,
}

/// CSV rows for every record of dimension at most `max_dim`.
pub fn catalog_csv_rows(max_dim: u64) -> Result<Vec<CatalogCsvRow>, CatalogError> {
    let records = enumerate_irreps(max_dim);
    let mut by_dim: Vec<(u64, Vec<IrrepRecord>)> = Vec::new();
    for r in records {
        match by_dim.last_mut() {
            Some((d, v)) if *d == r.dim => v.push(r),
            _ => by_dim.push((r.dim, vec![r])),
        }
    }
    let mut rows = Vec::new();
    for (n, recs) in by_dim {
        if n < 2 {
            continue;
        }
        let lat = lattice_from_records(n, recs);
        for (i, nd) in lat.nodes.iter().enumerate() {
            let parents: Vec<String> = lat
                .parents(i)
                .into_iter()
                .map(|p| {
                    let r = &lat.nodes[p].record;
                    format!("{} {}", r.display_name(), r.display_weights())
                })
                .collect();
            rows.push(CatalogCsvRow {
                dim: n,
                family: nd.record.algebra.family.letter().to_string(),
                rank: nd.record.algebra.rank,
                weight: nd.record.display_weights_raw(),
                malcev: nd.record.malcev.to_string(),
                parents: parents.join(";"),
            });
        }
    }
    Ok(rows)
}

/// Lattices for every `2 <= n <= max_n` that has at least one record.
pub fn lattices_up_to(max_n: u64) -> Vec<Lattice> {
    let records = enumerate_irreps(max_n);
    (2..=max_n).map(|n| lattice_from_records(n, records.iter().filter(|r| r.dim == n).cloned().collect())).collect()
}
