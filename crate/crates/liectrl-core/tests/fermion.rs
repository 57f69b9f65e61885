use liectrl_core::closure::{lie_closure, span_contains};
use liectrl_core::decide::ControlSystem;
use liectrl_core::fermion::{
    diagonal_normal_form, fermion_model, general_quadratic, hubbard_spinful, hubbard_spinless, jordan_wigner,
    linear_to_pauli, number_preserving, quadratic_hamiltonian, quadratic_system, quadratic_to_pauli,
    quadratic_with_linear, FermionError, FermionModel, Lumping, QuadraticSpec,
};
use liectrl_core::pauli::{multiply_terms, PauliExpr, Phase};
use liectrl_core::symmetry::{centraliser, pauli_matrices, CentraliserBasis};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn e(terms: &[&str]) -> PauliExpr {
    PauliExpr::from_strs(terms).unwrap()
}

fn closure_dim(sys: &ControlSystem) -> usize {
    lie_closure(&sys.generators(), None).unwrap().dim
}

#[test]
fn majorana_strings() {
    assert_eq!(jordan_wigner(1, 3).unwrap().to_string(), "XII");
    assert_eq!(jordan_wigner(5, 3).unwrap().to_string(), "ZYI");
    assert_eq!(jordan_wigner(3, 3).unwrap().to_string(), "ZZX");
    assert_eq!(jordan_wigner(6, 3).unwrap().to_string(), "ZZY");
    assert!(matches!(jordan_wigner(0, 3), Err(FermionError::IndexOutOfRange { .. })));
    assert!(matches!(jordan_wigner(7, 3), Err(FermionError::IndexOutOfRange { index: 7, max: 6 })));
}

#[test]
fn majoranas_anticommute() {
    for d in 1..=6 {
        for a in 1..=2 * d {
            let ca = jordan_wigner(a, d).unwrap();
            for b in 1..=2 * d {
                let cb = jordan_wigner(b, d).unwrap();
                let (pab, tab) = multiply_terms(&ca, &cb).unwrap();
                let (pba, tba) = multiply_terms(&cb, &ca).unwrap();
                assert_eq!(tab, tba);
                if a == b {
                    assert!(tab.is_identity());
                    assert_eq!(pab, Phase::ONE);
                } else {
                    // c_a c_b + c_b c_a = 0 means the phases are opposite
                    assert_eq!((pab.exponent() + 2) % 4, pba.exponent(), "d={d} a={a} b={b}");
                }
            }
        }
    }
}

#[test]
fn quadratic_entry_images() {
    let mut s = QuadraticSpec::zero(2).unwrap();
    s.set_b(2, 1, q(1));
    assert_eq!(quadratic_to_pauli(&s).unwrap(), vec![e(&["XX", "YY"])]);

    let mut s = QuadraticSpec::zero(3).unwrap();
    s.set_a(3, 1, q(1));
    let expected = e(&["YZY"]).sub(&e(&["XZX"])).unwrap();
    assert_eq!(quadratic_to_pauli(&s).unwrap(), vec![expected]);

    let mut s = QuadraticSpec::zero(2).unwrap();
    s.set_b(1, 1, q(1));
    assert_eq!(quadratic_to_pauli(&s).unwrap(), vec![e(&["ZI"]).scale(&q(-1))]);
}

#[test]
fn quadratic_hamiltonian_sums_entries() {
    let mut s = QuadraticSpec::zero(3).unwrap();
    s.set_b(1, 1, q(2));
    s.set_b(3, 1, q(1));
    let h = quadratic_hamiltonian(&s).unwrap();
    let expected = e(&["XZX", "YZY"]).sub(&e(&["ZII"]).scale(&q(2))).unwrap();
    assert_eq!(h, expected);
    assert!(quadratic_hamiltonian(&QuadraticSpec::zero(3).unwrap()).unwrap().is_zero());
}

#[test]
fn spec_validation() {
    let one = q(1);
    let z = BigRational::zero();
    let bad_b = vec![vec![z.clone(), one.clone()], vec![z.clone(), z.clone()]];
    let zero2 = vec![vec![z.clone(); 2]; 2];
    assert!(matches!(QuadraticSpec::new(zero2.clone(), bad_b), Err(FermionError::NotSymmetric { .. })));
    let bad_a = vec![vec![one.clone(), z.clone()], vec![z.clone(), z.clone()]];
    assert!(matches!(QuadraticSpec::new(bad_a, zero2.clone()), Err(FermionError::NotAntisymmetric { .. })));
    assert!(matches!(QuadraticSpec::new(zero2, vec![vec![z.clone(); 3]; 3]), Err(FermionError::NotSquare { .. })));
}

#[test]
fn linear_terms() {
    assert_eq!(linear_to_pauli(&[q(1), q(0)]).unwrap(), e(&["XI"]));
    assert_eq!(linear_to_pauli(&[q(0), q(1)]).unwrap(), e(&["ZX"]));
    assert!(linear_to_pauli(&[q(0), q(0)]).unwrap().is_zero());
}

#[test]
fn general_quadratic_gives_even_orthogonal_algebra() {
    for d in 2..=4 {
        let sys = general_quadratic(d).unwrap();
        assert_eq!(sys.controls.len(), d * d, "d entries of B on the diagonal plus d(d-1)/2 each off it and in A");
        assert_eq!(closure_dim(&sys), d * (2 * d - 1), "d={d}");
        let sym = centraliser(&sys.generators()).unwrap();
        assert_eq!(sym.centraliser_dim, 1);
        assert_eq!(sym.commutant_dim, 2);
        let parity = e(&[&"Z".repeat(d)]);
        match &sym.centraliser_basis {
            CentraliserBasis::Pauli(b) => assert_eq!(b[0].primitive(), parity),
            other => panic!("expected a Pauli basis, got {other:?}"),
        }
    }
}

#[test]
fn adding_linear_terms_gives_odd_orthogonal_algebra() {
    for d in 2..=4 {
        let sys = quadratic_with_linear(d).unwrap();
        assert_eq!(closure_dim(&sys), d * (2 * d + 1), "d={d}");
        assert_eq!(centraliser(&sys.generators()).unwrap().centraliser_dim, 0);
    }
}

#[test]
fn number_preserving_and_diagonal() {
    for d in 2..=4 {
        assert_eq!(closure_dim(&number_preserving(d).unwrap()), d * d);
        let diag = diagonal_normal_form(d).unwrap();
        let basis = lie_closure(&diag.generators(), None).unwrap();
        assert_eq!(basis.dim, d);
        for a in &basis.elements {
            for b in &basis.elements {
                assert!(a.bracket(b).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn algebra_chain_inclusion() {
    for d in 2..=3 {
        let u = lie_closure(&number_preserving(d).unwrap().generators(), None).unwrap();
        let so_even = lie_closure(&general_quadratic(d).unwrap().generators(), None).unwrap();
        let so_odd = lie_closure(&quadratic_with_linear(d).unwrap().generators(), None).unwrap();
        assert!(u.elements.iter().all(|x| span_contains(&so_even, x).unwrap()));
        assert!(so_even.elements.iter().all(|x| span_contains(&so_odd, x).unwrap()));
        assert!(so_odd.elements.iter().any(|x| !span_contains(&so_even, x).unwrap()));
    }
}

#[test]
fn lumped_hopping_goes_into_drift() {
    let spec = QuadraticSpec::general(3).unwrap();
    let sys = quadratic_system(&spec, Lumping { b: true, a: false }, "lumped").unwrap();
    assert_eq!(sys.controls.len(), 3);
    let mut b_only = spec.clone();
    for p in 1..=3 {
        for r in 1..p {
            b_only.set_a(p, r, BigRational::zero());
        }
    }
    assert_eq!(sys.drift, quadratic_hamiltonian(&b_only).unwrap());
}

#[test]
fn spinless_hubbard() {
    let t = q(1);
    let sys = hubbard_spinless(3, &t).unwrap();
    assert_eq!(sys.drift.len(), 6);
    assert_eq!(sys.controls.len(), 3);
    for d in 2..=4 {
        let sys = hubbard_spinless(d, &t).unwrap();
        assert_eq!(closure_dim(&sys), d * d, "d={d}");
        let gens = sys.generators();
        let all_z = e(&[&"Z".repeat(d)]);
        let total: Vec<String> = (0..d).map(|p| (0..d).map(|k| if k == p { 'Z' } else { 'I' }).collect()).collect();
        let total = PauliExpr::from_strs(&total.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
        for g in &gens {
            assert!(g.bracket(&all_z).unwrap().is_zero());
            assert!(g.bracket(&total).unwrap().is_zero());
        }
    }
}

#[test]
fn spinful_hubbard_two_sites() {
    let sys = hubbard_spinful(2, &q(1)).unwrap();
    assert_eq!(sys.n(), 4);
    assert_eq!(sys.controls, vec![e(&["ZIZI"]), e(&["IZIZ"])]);
    assert_eq!(closure_dim(&sys), 7);
    let up_mask = 0b0011u64;
    let down_mask = 0b1100u64;
    let mut up = 0;
    let mut down = 0;
    for (t, _) in sys.drift.terms() {
        let m = t.support_mask();
        if m & !up_mask == 0 || m & !down_mask == 0 {
            let letters: String = t.to_string();
            if m & !up_mask == 0 {
                up += 1;
                let mirrored = format!("{}{}", &letters[2..], &letters[..2]);
                assert!(sys.drift.terms().any(|(s, _)| s.to_string() == mirrored));
            } else {
                down += 1;
            }
        } else {
            panic!("drift term {t} mixes spin sectors");
        }
    }
    assert_eq!(up, down);
}

#[test]
fn scaled_hopping_keeps_the_algebra() {
    let sys = hubbard_spinless(3, &q(4)).unwrap();
    assert_eq!(sys.drift.terms().next().unwrap().1, &q(2));
    assert_eq!(closure_dim(&sys), 9);
}

#[test]
fn model_names_and_dense_images() {
    for name in ["quadratic", "quadratic-linear", "number-preserving", "diagonal", "hubbard", "hubbard-spin"] {
        let m: FermionModel = name.parse().unwrap();
        let sys = fermion_model(m, 2, &BigRational::one()).unwrap();
        assert!(!sys.generators().is_empty());
        assert!(pauli_matrices(&sys.generators(), 6).is_ok());
    }
    assert!("bosonic".parse::<FermionModel>().is_err());
    assert!(matches!(general_quadratic(0), Err(FermionError::BadLevelCount(0))));
    assert!(matches!(hubbard_spinless(1, &q(1)), Err(FermionError::BadLevelCount(1))));
}
