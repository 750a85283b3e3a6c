use std::sync::OnceLock;

use proptest::prelude::*;
use tanaka_core::cr_universal::build_universal_cr;
use tanaka_core::exact_arith::{
    solve_semilinear_fixed_points, AntilinearInvolution, GaussianRational, Rational, SparseMatrix,
};
use tanaka_core::free_lie::{AlgebraElement, FreeLieAlgebra, DEFAULT_BASIS_CAP};
use tanaka_core::symbol::{build_symbol, CRSymbol};

type G = GaussianRational;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Rational::new(p, q))
}

fn gaussian() -> impl Strategy<Value = G> {
    (small_rational(), small_rational()).prop_map(|(a, b)| G::new(a, b))
}

fn entry() -> impl Strategy<Value = G> {
    // mostly zeros so that rank deficiency is common
    prop_oneof![3 => Just(G::zero()), 2 => gaussian()]
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<G>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(entry(), c), r))
}

fn symbol_1_4() -> &'static CRSymbol {
    static S: OnceLock<CRSymbol> = OnceLock::new();
    S.get_or_init(|| build_symbol(build_universal_cr(1, 4, DEFAULT_BASIS_CAP).unwrap(), &[]).unwrap())
}

fn symbol_2_3() -> &'static CRSymbol {
    static S: OnceLock<CRSymbol> = OnceLock::new();
    S.get_or_init(|| build_symbol(build_universal_cr(2, 3, DEFAULT_BASIS_CAP).unwrap(), &[]).unwrap())
}

fn free_3_4() -> &'static FreeLieAlgebra {
    static F: OnceLock<FreeLieAlgebra> = OnceLock::new();
    F.get_or_init(|| FreeLieAlgebra::hall_basis(3, 4).unwrap())
}

fn element(dim: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((0..dim, gaussian()), 0..5).prop_map(|terms| {
        let mut x = AlgebraElement::zero();
        for (i, c) in terms {
            x.add_term(i, &c);
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trip(a in gaussian(), r in small_rational()) {
        prop_assert_eq!(a.to_string().parse::<G>().unwrap(), a.clone());
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn field_laws(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn rank_nullity(rows in matrix(6)) {
        let m = SparseMatrix::from_dense(&rows);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(G::is_zero));
            let lead = v.iter().find(|x| !x.is_zero()).unwrap();
            prop_assert!(lead.is_one());
        }
    }

    #[test]
    fn solve_returns_solutions(rows in matrix(5), x in prop::collection::vec(gaussian(), 5)) {
        let m = SparseMatrix::from_dense(&rows);
        let b = m.mul_vec(&x[..m.cols()]);
        let y = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn fixed_points_of_conjugation_are_real(rows in matrix(4)) {
        let m = SparseMatrix::from_dense(&rows);
        let sigma = AntilinearInvolution::conjugation(m.cols());
        let fixed = solve_semilinear_fixed_points(&m, &sigma).unwrap();
        // real vectors independent over ℝ stay independent over ℂ; a matrix
        // with rational entries has a kernel spanned by real vectors
        let kernel = m.kernel_basis().len();
        prop_assert!(fixed.len() <= kernel);
        if rows.iter().flatten().all(G::is_real) {
            prop_assert_eq!(fixed.len(), kernel);
        }
        for v in &fixed {
            prop_assert!(v.iter().all(G::is_real));
            prop_assert!(m.mul_vec(v).iter().all(G::is_zero));
        }
    }

    #[test]
    fn free_bracket_is_antisymmetric(x in element(32), y in element(32)) {
        let f = free_3_4();
        prop_assert_eq!(f.bracket(&x, &y), f.bracket(&y, &x).neg());
    }

    #[test]
    fn free_bracket_satisfies_jacobi(x in element(32), y in element(32), z in element(32)) {
        let f = free_3_4();
        let j = f.bracket(&x, &f.bracket(&y, &z))
            .add(&f.bracket(&y, &f.bracket(&z, &x)))
            .add(&f.bracket(&z, &f.bracket(&x, &y)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn element_text_round_trip(x in element(32)) {
        let f = free_3_4();
        prop_assert_eq!(f.parse_element(&f.format_element(&x)).unwrap(), x);
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(x in element(8), y in element(8)) {
        for s in [symbol_1_4(), symbol_2_3()] {
            let dim = s.algebra().total_dim();
            let x = x.filter(|i| i < dim);
            let y = y.filter(|i| i < dim);
            prop_assert_eq!(s.conjugate(&s.conjugate(&x)), x.clone());
            prop_assert_eq!(
                s.conjugate(&s.bracket(&x, &y)),
                s.bracket(&s.conjugate(&x), &s.conjugate(&y))
            );
        }
    }
}
