//! Coupling graphs and connectivity of control systems.
//!
//! A tensor-product structure groups consecutive qubits into subsystems. The
//! connectivity notions are all evaluated on a basis of the dynamic algebra
//! through the supports of its Pauli terms:
//!
//! * weakly connected: every split of the subsystems into two groups is
//!   straddled by some term of the algebra;
//! * connected: weakly connected with respect to the finest (qubit) structure;
//! * directly connected: for every pair of subsystems the algebra contains an
//!   element acting only on that pair and coupling it.

use crate::pauli::{PauliError, PauliExpr};
use num_rational::BigRational;
use num_traits::{One, Zero};
use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use thiserror::Error;

/// Partition count above which [`weak_cut_report`] stops enumerating.
pub const MAX_ENUMERATED_PARTITIONS: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("subsystem dimension {0} is not a power of two")]
    NotQubitBlock(usize),
    #[error("subsystem dimension must be at least 2, got {0}")]
    TrivialBlock(usize),
    #[error("structure covers {structure} qubits but the system has {system}")]
    QubitMismatch { structure: usize, system: usize },
    #[error("drift has order {0} with respect to the structure; no coupling graph exists")]
    OrderTooHigh(usize),
    #[error("control {index} acts on more than one subsystem")]
    NonLocalControl { index: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Local dimensions `d_1, ..., d_m` of a tensor-product structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorStructure {
    dims: Vec<usize>,
}

impl TensorStructure {
    pub fn new(dims: Vec<usize>) -> Result<TensorStructure, GraphError> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(GraphError::TrivialBlock(d));
        }
        Ok(TensorStructure { dims })
    }

    pub fn qubits(n: usize) -> TensorStructure {
        TensorStructure { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn ambient(&self) -> u128 {
        self.dims.iter().map(|&d| d as u128).product()
    }

    /// Splits every local dimension into its prime factors.
    pub fn prime_refinement(&self) -> TensorStructure {
        let mut out = Vec::new();
        for &d in &self.dims {
            let mut rest = d;
            let mut p = 2;
            while rest > 1 {
                while rest % p == 0 {
                    out.push(p);
                    rest /= p;
                }
                p += 1;
            }
        }
        TensorStructure { dims: out }
    }

    /// Whether `self` refines `coarser`: each block of `coarser` is the
    /// product of a run of consecutive blocks of `self`.
    pub fn refines(&self, coarser: &TensorStructure) -> bool {
        let mut it = self.dims.iter();
        for &target in &coarser.dims {
            let mut acc = 1usize;
            while acc < target {
                match it.next() {
                    Some(&d) => acc *= d,
                    None => return false,
                }
            }
            if acc != target {
                return false;
            }
        }
        it.next().is_none()
    }

    /// Block index of each qubit, for structures made of qubit blocks.
    pub fn qubit_blocks(&self, n: usize) -> Result<Vec<usize>, GraphError> {
        let mut out = Vec::with_capacity(n);
        for (b, &d) in self.dims.iter().enumerate() {
            if !d.is_power_of_two() {
                return Err(GraphError::NotQubitBlock(d));
            }
            out.extend(std::iter::repeat_n(b, d.trailing_zeros() as usize));
        }
        if out.len() != n {
            return Err(GraphError::QubitMismatch { structure: out.len(), system: n });
        }
        Ok(out)
    }
}

/// Subsystem set touched by one Pauli term, as a bit mask over blocks.
fn block_mask(term_support: u64, blocks: &[usize]) -> u64 {
    (0..blocks.len()).filter(|&q| term_support >> q & 1 == 1).fold(0, |m, q| m | 1 << blocks[q])
}

fn term_masks(elements: &[PauliExpr], blocks: &[usize]) -> BTreeSet<u64> {
    elements
        .iter()
        .flat_map(|e| e.terms().map(|(t, _)| block_mask(t.support_mask(), blocks)).collect::<Vec<_>>())
        .filter(|&m| m != 0)
        .collect()
}

fn check_qubits(elements: &[PauliExpr], n: usize) -> Result<(), GraphError> {
    for e in elements {
        if e.n() != n {
            return Err(PauliError::LengthMismatch(n, e.n()).into());
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub terms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingGraph {
    pub vertices: usize,
    pub edges: Vec<Edge>,
}

impl CouplingGraph {
    fn to_petgraph(&self) -> UnGraph<(), ()> {
        let mut g = UnGraph::<(), ()>::with_capacity(self.vertices, self.edges.len());
        let nodes: Vec<_> = (0..self.vertices).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            g.add_edge(nodes[e.a], nodes[e.b], ());
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.vertices <= 1 || connected_components(&self.to_petgraph()) == 1
    }

    /// Graphviz text with one node per subsystem (numbered from 1).
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{}\" {{\n", name.replace('"', "'"));
        for v in 0..self.vertices {
            let _ = writeln!(out, "  q{} [label=\"{}\"];", v + 1, v + 1);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  q{} -- q{} [label=\"{}\"];", e.a + 1, e.b + 1, e.terms.join("+"));
        }
        out.push_str("}\n");
        out
    }
}

/// Coupling graph of a system whose drift has order at most two and whose
/// controls act locally, both measured with respect to `structure`.
pub fn coupling_graph(
    drift: &PauliExpr,
    controls: &[PauliExpr],
    structure: &TensorStructure,
) -> Result<CouplingGraph, GraphError> {
    let n = drift.n();
    check_qubits(controls, n)?;
    let blocks = structure.qubit_blocks(n)?;
    for (index, c) in controls.iter().enumerate() {
        if c.terms().any(|(t, _)| block_mask(t.support_mask(), &blocks).count_ones() > 1) {
            return Err(GraphError::NonLocalControl { index });
        }
    }
    let order =
        drift.terms().map(|(t, _)| block_mask(t.support_mask(), &blocks).count_ones() as usize).max().unwrap_or(0);
    if order > 2 {
        return Err(GraphError::OrderTooHigh(order));
    }
    let mut edges: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (t, _) in drift.terms() {
        let m = block_mask(t.support_mask(), &blocks);
        if m.count_ones() == 2 {
            let a = m.trailing_zeros() as usize;
            let b = 63 - m.leading_zeros() as usize;
            edges.entry((a, b)).or_default().push(t.to_string());
        }
    }
    Ok(CouplingGraph {
        vertices: structure.blocks(),
        edges: edges.into_iter().map(|((a, b), terms)| Edge { a, b, terms }).collect(),
    })
}

/// Outcome of a connectivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    /// Subsystem groups that no term couples, when not connected.
    pub components: Vec<Vec<usize>>,
}

fn components_of(masks: &BTreeSet<u64>, blocks: usize) -> Vec<Vec<usize>> {
    let mut g = UnGraph::<(), ()>::with_capacity(blocks, masks.len());
    let nodes: Vec<_> = (0..blocks).map(|_| g.add_node(())).collect();
    for &m in masks {
        let first = m.trailing_zeros() as usize;
        for b in (first + 1..blocks).filter(|&b| m >> b & 1 == 1) {
            g.add_edge(nodes[first], nodes[b], ());
        }
    }
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(blocks);
    for e in g.edge_indices() {
        let (a, b) = g.edge_endpoints(e).expect("edge exists");
        uf.union(a.index(), b.index());
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for b in 0..blocks {
        groups.entry(uf.find(b)).or_default().push(b);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Weak connectivity of the algebra spanned by `elements`.
///
/// A two-group split is straddled exactly when some term touches both
/// groups, so every split is straddled exactly when the hypergraph of term
/// supports is connected. This decides all `2^(m-1) - 1` splits at once.
pub fn is_weakly_connected(elements: &[PauliExpr], structure: &TensorStructure) -> Result<Connectivity, GraphError> {
    let Some(first) = elements.first() else {
        let components = (0..structure.blocks()).map(|b| vec![b]).collect::<Vec<_>>();
        return Ok(Connectivity { connected: structure.blocks() <= 1, components });
    };
    let n = first.n();
    check_qubits(elements, n)?;
    let blocks = structure.qubit_blocks(n)?;
    let components = components_of(&term_masks(elements, &blocks), structure.blocks());
    Ok(Connectivity { connected: components.len() <= 1, components })
}

/// Explicit check of every two-group split, used as a cross-check of
/// [`is_weakly_connected`]. Returns the unstraddled splits (as masks of the
/// group not containing block 0) and whether the enumeration was cut short.
pub fn weak_cut_report(elements: &[PauliExpr], structure: &TensorStructure) -> Result<(Vec<u64>, bool), GraphError> {
    let m = structure.blocks();
    if m <= 1 {
        return Ok((Vec::new(), false));
    }
    let n = elements.first().map_or(0, PauliExpr::n);
    check_qubits(elements, n)?;
    let blocks = structure.qubit_blocks(n)?;
    let masks = term_masks(elements, &blocks);
    let total = (1u64 << (m - 1)) - 1;
    let partial = total > MAX_ENUMERATED_PARTITIONS;
    let full = (1u64 << m) - 1;
    let mut failing = Vec::new();
    for k in 1..=total.min(MAX_ENUMERATED_PARTITIONS) {
        let side = k << 1;
        let other = full & !side;
        if !masks.iter().any(|&t| t & side != 0 && t & other != 0) {
            failing.push(side);
        }
    }
    Ok((failing, partial))
}

/// Connectivity with respect to every tensor-product structure, evaluated
/// as weak connectivity on the qubit refinement.
pub fn is_connected_general(elements: &[PauliExpr], n: usize) -> Result<Connectivity, GraphError> {
    is_weakly_connected(elements, &TensorStructure::qubits(n))
}

/// Rows spanning the elements of `span(elements)` supported on the qubit
/// set `inside`, found by eliminating all outside coordinates first.
fn restricted_span(elements: &[PauliExpr], inside: u64) -> Vec<BTreeMap<u64, BigRational>> {
    type Row = BTreeMap<(bool, u64), BigRational>;
    let mut rows: Vec<Row> = Vec::new();
    for e in elements {
        let mut row: Row = e.terms().map(|(t, c)| ((t.support_mask() & !inside == 0, t.code()), c.clone())).collect();
        for r in &rows {
            let (pk, _) = r.iter().next().expect("stored rows are nonzero");
            if let Some(f) = row.get(pk).cloned() {
                for (k, v) in r {
                    let slot = row.entry(*k).or_insert_with(BigRational::zero);
                    *slot -= &f * v;
                    if slot.is_zero() {
                        row.remove(k);
                    }
                }
            }
        }
        if let Some((_, lead)) = row.iter().next() {
            let inv = BigRational::one() / lead.clone();
            for v in row.values_mut() {
                *v *= &inv;
            }
            let (pk, _) = row.iter().next().map(|(k, v)| (*k, v.clone())).expect("nonzero");
            for r in rows.iter_mut() {
                if let Some(f) = r.get(&pk).cloned() {
                    for (k, v) in &row {
                        let slot = r.entry(*k).or_insert_with(BigRational::zero);
                        *slot -= &f * v;
                        if slot.is_zero() {
                            r.remove(k);
                        }
                    }
                }
            }
            rows.push(row);
            rows.sort_by(|a, b| a.keys().next().cmp(&b.keys().next()));
        }
    }
    rows.into_iter()
        .filter(|r| r.keys().next().is_some_and(|(is_in, _)| *is_in))
        .map(|r| r.into_iter().map(|((_, c), v)| (c, v)).collect())
        .collect()
}

/// Direct connectivity: for every pair of subsystems the algebra contains
/// an element supported on the pair that is not a sum of local parts.
/// Returns the pairs that fail.
pub fn directly_unconnected_pairs(
    elements: &[PauliExpr],
    structure: &TensorStructure,
) -> Result<Vec<(usize, usize)>, GraphError> {
    let Some(first) = elements.first() else {
        let m = structure.blocks();
        return Ok((0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect());
    };
    let n = first.n();
    check_qubits(elements, n)?;
    let blocks = structure.qubit_blocks(n)?;
    let m = structure.blocks();
    let qubits_of = |b: usize| (0..n).filter(|&q| blocks[q] == b).fold(0u64, |acc, q| acc | 1 << q);
    let mut failing = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let (qa, qb) = (qubits_of(a), qubits_of(b));
            let rows = restricted_span(elements, qa | qb);
            let coupled = rows.iter().flat_map(|r| r.keys()).any(|&code| {
                let s = crate::pauli::PauliTerm::new(n, code).expect("valid code").support_mask();
                s & qa != 0 && s & qb != 0
            });
            if !coupled {
                failing.push((a, b));
            }
        }
    }
    Ok(failing)
}

pub fn is_directly_connected(elements: &[PauliExpr], structure: &TensorStructure) -> Result<bool, GraphError> {
    Ok(directly_unconnected_pairs(elements, structure)?.is_empty())
}
