use liectrl_core::closure::lie_closure;
use liectrl_core::graph::{
    coupling_graph, directly_unconnected_pairs, is_connected_general, is_directly_connected, is_weakly_connected,
    weak_cut_report, GraphError, TensorStructure,
};
use liectrl_core::pauli::PauliExpr;

fn e(terms: &[&str]) -> PauliExpr {
    PauliExpr::from_strs(terms).unwrap()
}

fn singles(list: &[&str]) -> Vec<PauliExpr> {
    list.iter().map(|s| e(&[s])).collect()
}

fn closure(g: &[PauliExpr]) -> Vec<PauliExpr> {
    lie_closure(g, None).unwrap().elements
}

fn example_one() -> Vec<PauliExpr> {
    singles(&["XI", "YI", "ZI", "IX", "IY", "IZ"])
}

fn zzz_example() -> Vec<PauliExpr> {
    let mut g = singles(&["XII", "YII", "ZII", "IXI", "IYI", "IZI", "IIX", "IIY", "IIZ"]);
    g.push(e(&["ZZZ"]));
    g
}

fn coarse_example() -> Vec<PauliExpr> {
    let mut g = singles(&["XII", "YII", "ZII", "IXI", "IYI", "IZI", "IIX", "IIY", "IIZ"]);
    g.push(e(&["IZZ"]));
    g
}

fn structure(dims: &[usize]) -> TensorStructure {
    TensorStructure::new(dims.to_vec()).unwrap()
}

#[test]
fn example_one_graph_has_no_edges() {
    let g = coupling_graph(&PauliExpr::zero(2).unwrap(), &example_one(), &TensorStructure::qubits(2)).unwrap();
    assert_eq!(g.vertices, 2);
    assert!(g.edges.is_empty());
    assert!(!g.is_connected());
}

#[test]
fn xx_chain_graph_is_a_path() {
    let drift = e(&["XXII", "YYII", "IXXI", "IYYI", "IIXX", "IIYY"]);
    let g = coupling_graph(&drift, &singles(&["XIII", "YIII"]), &TensorStructure::qubits(4)).unwrap();
    assert_eq!(g.vertices, 4);
    let pairs: Vec<(usize, usize)> = g.edges.iter().map(|x| (x.a, x.b)).collect();
    assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 3)]);
    assert!(g.is_connected());
    let dot = g.to_dot("chain");
    assert!(dot.starts_with("graph \"chain\" {"));
    assert!(dot.contains("q1 -- q2 [label=\"XXII+YYII\"]"));
}

#[test]
fn three_body_drift_has_no_coupling_graph() {
    let err = coupling_graph(&e(&["ZZZ"]), &[], &TensorStructure::qubits(3)).unwrap_err();
    assert_eq!(err, GraphError::OrderTooHigh(3));
    let err = coupling_graph(&e(&["ZZI"]), &[e(&["XXI"])], &TensorStructure::qubits(3)).unwrap_err();
    assert_eq!(err, GraphError::NonLocalControl { index: 0 });
}

#[test]
fn single_vertex_graph_is_connected() {
    let g = coupling_graph(&e(&["Z"]), &[e(&["X"])], &TensorStructure::qubits(1)).unwrap();
    assert!(g.is_connected());
}

#[test]
fn weak_connectivity_examples() {
    let zzz = closure(&zzz_example());
    assert!(is_weakly_connected(&zzz, &TensorStructure::qubits(3)).unwrap().connected);
    let ex1 = closure(&example_one());
    let w = is_weakly_connected(&ex1, &TensorStructure::qubits(2)).unwrap();
    assert!(!w.connected);
    assert_eq!(w.components, vec![vec![0], vec![1]]);
    let coarse = closure(&coarse_example());
    assert!(is_weakly_connected(&coarse, &structure(&[4, 2])).unwrap().connected);
    assert!(!is_weakly_connected(&coarse, &structure(&[2, 4])).unwrap().connected);
    assert!(!is_weakly_connected(&coarse, &TensorStructure::qubits(3)).unwrap().connected);
}

#[test]
fn general_connectivity_examples() {
    assert!(is_connected_general(&closure(&zzz_example()), 3).unwrap().connected);
    assert!(!is_connected_general(&closure(&example_one()), 2).unwrap().connected);
    assert!(!is_connected_general(&closure(&coarse_example()), 3).unwrap().connected);
    assert!(is_connected_general(&closure(&singles(&["X", "Y"])), 1).unwrap().connected);
    let chain = vec![e(&["XI"]), e(&["YI"]), e(&["XX", "YY"])];
    assert!(is_connected_general(&closure(&chain), 2).unwrap().connected);
}

#[test]
fn direct_connectivity_examples() {
    let mut heis = singles(&["XII", "YII", "IXI", "IYI", "IIX", "IIY"]);
    heis.push(e(&["XXI", "YYI", "ZZI", "IXX", "IYY", "IZZ", "XIX", "YIY", "ZIZ"]));
    assert!(is_directly_connected(&closure(&heis), &TensorStructure::qubits(3)).unwrap());
    assert!(!is_directly_connected(&closure(&example_one()), &TensorStructure::qubits(2)).unwrap());
    // only three-body coupling: pairs share no two-body element
    let zzz = closure(&zzz_example());
    assert_eq!(directly_unconnected_pairs(&zzz, &TensorStructure::qubits(3)).unwrap(), vec![(0, 1), (0, 2), (1, 2)]);
}

#[test]
fn enumerated_cuts_agree_with_hypergraph_test() {
    let systems: Vec<(Vec<PauliExpr>, TensorStructure)> = vec![
        (closure(&example_one()), TensorStructure::qubits(2)),
        (closure(&zzz_example()), TensorStructure::qubits(3)),
        (closure(&coarse_example()), TensorStructure::qubits(3)),
        (closure(&coarse_example()), structure(&[4, 2])),
        (closure(&[e(&["ZZII"]), e(&["IIZZ"]), e(&["XIII"])]), TensorStructure::qubits(4)),
    ];
    for (elems, st) in systems {
        let (failing, partial) = weak_cut_report(&elems, &st).unwrap();
        assert!(!partial);
        assert_eq!(failing.is_empty(), is_weakly_connected(&elems, &st).unwrap().connected);
    }
}

#[test]
fn structures_refine_and_factor() {
    let q = TensorStructure::qubits(3);
    assert!(q.refines(&structure(&[4, 2])));
    assert!(q.refines(&structure(&[8])));
    assert!(!structure(&[4, 2]).refines(&q));
    assert_eq!(structure(&[6, 4]).prime_refinement().dims(), &[2, 3, 2, 2]);
    assert_eq!(structure(&[4, 2]).ambient(), 8);
    assert!(TensorStructure::new(vec![1, 2]).is_err());
    assert_eq!(structure(&[3]).qubit_blocks(1).unwrap_err(), GraphError::NotQubitBlock(3));
}

#[test]
fn connectivity_chain_holds_on_examples() {
    for g in [example_one(), zzz_example(), coarse_example(), vec![e(&["XI"]), e(&["YI"]), e(&["XX", "YY"])]] {
        let n = g[0].n();
        let elems = closure(&g);
        let st = TensorStructure::qubits(n);
        let direct = is_directly_connected(&elems, &st).unwrap();
        let general = is_connected_general(&elems, n).unwrap().connected;
        let weak = is_weakly_connected(&elems, &st).unwrap().connected;
        assert!(!direct || general);
        assert!(!general || weak);
    }
}
