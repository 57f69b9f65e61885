use liectrl_core::matrep::{kron, CMatrix, C64};
use liectrl_core::pauli::{multiply_terms, PauliError, PauliExpr, PauliTerm, Phase, DEFAULT_DENSE_QUBITS};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(s: &str) -> PauliTerm {
    s.parse().unwrap()
}

fn e(terms: &[&str]) -> PauliExpr {
    PauliExpr::from_strs(terms).unwrap()
}

fn single(letter: char) -> CMatrix {
    let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let one = C64::new(1.0, 0.0);
    let data = match letter {
        'I' => vec![one, o, o, one],
        'X' => vec![o, one, one, o],
        'Y' => vec![o, -i, i, o],
        _ => vec![one, o, o, -one],
    };
    CMatrix::from_row_major(2, 2, data).unwrap()
}

fn kron_oracle(s: &str) -> CMatrix {
    s.chars().skip(1).fold(single(s.chars().next().unwrap()), |acc, c| kron(&acc, &single(c)))
}

fn random_term(rng: &mut ChaCha8Rng, n: usize) -> PauliTerm {
    PauliTerm::new(n, rng.random_range(0..(1u64 << (2 * n)))).unwrap()
}

fn random_expr(rng: &mut ChaCha8Rng, n: usize, len: usize) -> PauliExpr {
    let mut out = PauliExpr::zero(n).unwrap();
    for _ in 0..len {
        let c = BigRational::new(rng.random_range(-5i64..=5).into(), rng.random_range(1i64..=3).into());
        out = out.add(&PauliExpr::from_term(random_term(rng, n), c)).unwrap();
    }
    out
}

#[test]
fn xy_is_i_z() {
    assert_eq!(multiply_terms(&t("X"), &t("Y")).unwrap(), (Phase::I, t("Z")));
}

#[test]
fn identity_times_p_is_p() {
    assert_eq!(multiply_terms(&t("III"), &t("XYZ")).unwrap(), (Phase::ONE, t("XYZ")));
}

#[test]
fn xx_times_yy_is_minus_zz() {
    assert_eq!(multiply_terms(&t("XX"), &t("YY")).unwrap(), (Phase::MINUS_ONE, t("ZZ")));
}

#[test]
fn multiply_rejects_length_mismatch() {
    assert_eq!(multiply_terms(&t("X"), &t("XX")), Err(PauliError::LengthMismatch(1, 2)));
}

#[test]
fn products_match_kronecker_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let (a, b) = (random_term(&mut rng, n), random_term(&mut rng, n));
        let (phase, c) = multiply_terms(&a, &b).unwrap();
        let lhs = &kron_oracle(&a.to_string()) * &kron_oracle(&b.to_string());
        let rhs = kron_oracle(&c.to_string()).scale(phase.to_complex());
        assert!((&lhs - &rhs).max_abs() < 1e-12, "{a} * {b}");
    }
}

#[test]
fn phase_ratio_of_ab_and_ba_is_sign_of_commutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let n = rng.random_range(1..=6);
        let (a, b) = (random_term(&mut rng, n), random_term(&mut rng, n));
        let (pab, _) = multiply_terms(&a, &b).unwrap();
        let (pba, _) = multiply_terms(&b, &a).unwrap();
        // pab / pba, using that the inverse of i^e is i^(4-e)
        let ratio = pab * Phase::from_exponent(-(pba.exponent() as i64));
        assert!(ratio.is_real());
        assert_eq!(ratio == Phase::ONE, a.commutes_with(&b));
    }
}

#[test]
fn multiplication_is_associative_up_to_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let n = rng.random_range(1..=6);
        let (a, b, c) = (random_term(&mut rng, n), random_term(&mut rng, n), random_term(&mut rng, n));
        let (p1, ab) = multiply_terms(&a, &b).unwrap();
        let (p2, ab_c) = multiply_terms(&ab, &c).unwrap();
        let (q1, bc) = multiply_terms(&b, &c).unwrap();
        let (q2, a_bc) = multiply_terms(&a, &bc).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(p1 * p2, q1 * q2);
    }
}

#[test]
fn bracket_z_x_is_plus_y() {
    let br = e(&["Z"]).bracket(&e(&["X"])).unwrap();
    assert_eq!(br, e(&["Y"]));
}

#[test]
fn double_bracket_with_z1_reproduces_pair_terms() {
    let z1 = e(&["ZII"]);
    let chain = e(&["XXI", "YYI", "IXX", "IYY"]);
    let once = z1.bracket(&chain).unwrap();
    let twice = z1.bracket(&once).unwrap();
    assert_eq!(twice, e(&["XXI", "YYI"]).scale(&BigRational::from_integer((-1).into())));
}

#[test]
fn self_bracket_vanishes() {
    let h = e(&["XX", "YY", "ZI"]);
    assert!(h.bracket(&h).unwrap().is_zero());
}

#[test]
fn order_examples() {
    assert_eq!(e(&["XX", "YY"]).order().unwrap(), 2);
    assert_eq!(e(&["XIII"]).order().unwrap(), 1);
    assert_eq!(e(&["ZZZ"]).order().unwrap(), 3);
    assert_eq!(PauliExpr::zero(2).unwrap().order(), Err(PauliError::ZeroExpression));
}

#[test]
fn to_matrix_of_z_is_diagonal() {
    let m = e(&["Z"]).to_matrix(DEFAULT_DENSE_QUBITS).unwrap();
    assert_eq!(m.get(0, 0), C64::new(0.0, -0.5));
    assert_eq!(m.get(1, 1), C64::new(0.0, 0.5));
    assert_eq!(m.get(0, 1), C64::new(0.0, 0.0));
}

#[test]
fn zero_expression_gives_zero_matrix() {
    let m = PauliExpr::zero(2).unwrap().to_matrix(DEFAULT_DENSE_QUBITS).unwrap();
    assert_eq!(m.max_abs(), 0.0);
}

#[test]
fn xx_plus_yy_matrix_has_inner_antidiagonal() {
    let m = e(&["XX", "YY"]).to_matrix(DEFAULT_DENSE_QUBITS).unwrap();
    let oracle = (&kron_oracle("XX") + &kron_oracle("YY")).scale(C64::new(0.0, -0.5));
    assert!((&m - &oracle).max_abs() < 1e-15);
    assert_eq!(m.get(1, 2), C64::new(0.0, -1.0));
    assert_eq!(m.get(2, 1), C64::new(0.0, -1.0));
    assert_eq!(m.get(0, 3), C64::new(0.0, 0.0));
}

#[test]
fn to_matrix_respects_cap() {
    let big = PauliExpr::from_term(PauliTerm::identity(5).unwrap(), BigRational::one());
    assert_eq!(big.to_matrix(4), Err(PauliError::DenseCapExceeded { n: 5, cap: 4 }));
}

#[test]
fn dense_bracket_agrees_with_exact_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..40 {
        let n = rng.random_range(1..=5);
        let a = random_expr(&mut rng, n, 4);
        let b = random_expr(&mut rng, n, 4);
        let exact = a.bracket(&b).unwrap().to_matrix(DEFAULT_DENSE_QUBITS).unwrap();
        let (ma, mb) = (a.to_matrix(8).unwrap(), b.to_matrix(8).unwrap());
        assert!((&exact - &ma.commutator(&mb)).max_abs() < 1e-12);
    }
}

#[test]
fn jacobi_identity_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let (a, b, c) = (random_expr(&mut rng, n, 3), random_expr(&mut rng, n, 3), random_expr(&mut rng, n, 3));
        let j1 = a.bracket(&b.bracket(&c).unwrap()).unwrap();
        let j2 = b.bracket(&c.bracket(&a).unwrap()).unwrap();
        let j3 = c.bracket(&a.bracket(&b).unwrap()).unwrap();
        assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
    }
}

#[test]
fn encoding_round_trips_for_all_terms() {
    for n in 1..=6usize {
        for code in 0..(1u64 << (2 * n)) {
            let term = PauliTerm::new(n, code).unwrap();
            let back: PauliTerm = term.to_string().parse().unwrap();
            assert_eq!(back.code(), code);
        }
    }
}

#[test]
fn invalid_letter_is_rejected() {
    assert_eq!("XQ".parse::<PauliTerm>(), Err(PauliError::InvalidLetter('Q')));
}
