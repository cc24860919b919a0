mod common;

use common::*;
use densq_core::corealg::{rat, Field, FuncMono, GaussRat, Mode, Rat};
use densq_core::invariance::to_scalar;
use densq_core::liealg::{AlgebraName, Subalgebra};
use densq_core::quantization::{
    branch_predicate, check_equivariance, formal_defect, full_quant_exists, function_coefficient_dim, render_factors, solve_symbol_map,
    symbol_map_order1, symbol_map_order2, QuantMap,
};
use densq_core::{CoreError, Scalar};
use proptest::prelude::*;

fn alg(n: AlgebraName) -> Subalgebra {
    Subalgebra::new(n, Mode::Line).unwrap()
}

fn real_coeffs(q: &QuantMap<GaussRat>) -> Vec<((usize, usize), Rat)> {
    let k = q.order;
    q.beta.iter().enumerate().map(|(j, b)| ((j, k - j), b.re.clone())).collect()
}

fn oracle(q: &QuantMap<GaussRat>, a: &Rat, b: &Rat) -> Vec<Rat> {
    let gamma = q.source().re;
    exp_defect(&real_coeffs(q), (&gamma, &q.lambda.re, &q.mu.re), a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn first_order_map_is_vect_equivariant(l in small_rat(), d in small_rat(), a in small_rat(), b in small_rat()) {
        prop_assume!(d != rat(1, 1));
        let q = symbol_map_order1(&g(l.clone()), &g(d.clone()), Mode::Line).unwrap();
        prop_assert_eq!(q.beta[1].clone(), g(l / (rat(1, 1) - d)));
        prop_assert!(oracle(&q, &a, &b).iter().all(|c| *c == rat(0, 1)));
    }

    #[test]
    fn second_order_map_is_l0_equivariant(l in small_rat(), d in small_rat(), a in small_rat(), b in small_rat()) {
        prop_assume!(d != rat(2, 1) && d != rat(3, 2));
        let q = symbol_map_order2(&g(l.clone()), &g(d.clone()), Mode::Line).unwrap();
        let n = rat(1, 1) + rat(2, 1) * l.clone();
        prop_assert_eq!(q.beta[1].clone(), g(n.clone() / (rat(2, 1) - d.clone())));
        prop_assert_eq!(q.beta[2].clone(), g(l * n / ((rat(2, 1) - d.clone()) * (rat(3, 1) - rat(2, 1) * d))));
        let def = oracle(&q, &a, &b);
        prop_assert!(def.iter().take(3).all(|c| *c == rat(0, 1)));
    }

    #[test]
    fn solver_reproduces_first_order_formula(l in small_rat(), m in small_rat()) {
        let d = m.clone() - l.clone();
        prop_assume!(d != rat(1, 1));
        let s = solve_symbol_map(1, &to_scalar(&l), &to_scalar(&m), &alg(AlgebraName::VectFormal)).unwrap();
        let q = symbol_map_order1(&to_scalar(&l), &to_scalar(&d), Mode::Line).unwrap();
        prop_assert_eq!(s.normalized, Some(q.beta));
    }

    #[test]
    fn solver_reproduces_second_order_formula(l in small_rat(), m in small_rat()) {
        let d = m.clone() - l.clone();
        prop_assume!(d != rat(2, 1) && d != rat(3, 2));
        let s = solve_symbol_map(2, &to_scalar(&l), &to_scalar(&m), &alg(AlgebraName::L(0))).unwrap();
        let q = symbol_map_order2(&to_scalar(&l), &to_scalar(&d), Mode::Line).unwrap();
        prop_assert_eq!(s.normalized, Some(q.beta));
    }

    #[test]
    fn equivariance_defect_is_linear(b1 in prop::collection::vec(small_rat(), 3), b2 in prop::collection::vec(small_rat(), 3), l in small_rat(), m in small_rat()) {
        let mk = |b: &[Rat]| QuantMap { order: 2, lambda: g(l.clone()), mu: g(m.clone()), beta: b.iter().cloned().map(g).collect(), mode: Mode::Line };
        let sum: Vec<Rat> = b1.iter().zip(&b2).map(|(x, y)| x.clone() + y.clone()).collect();
        prop_assert_eq!(formal_defect(&mk(&sum)), formal_defect(&mk(&b1)).add(&formal_defect(&mk(&b2))));
    }
}

#[test]
fn poles_are_reported() {
    assert!(matches!(symbol_map_order1(&gi(0, 1), &gi(1, 1), Mode::Line), Err(CoreError::Pole(_))));
    assert!(matches!(symbol_map_order2(&gi(0, 1), &gi(2, 1), Mode::Line), Err(CoreError::Pole(_))));
    assert!(matches!(symbol_map_order2(&gi(0, 1), &gi(3, 2), Mode::Line), Err(CoreError::Pole(_))));
}

#[test]
fn formal_delta_poles() {
    let lam = to_scalar(&rat(2, 3));
    let mu = lam.clone() + Scalar::param();
    let s = solve_symbol_map(1, &lam, &mu, &alg(AlgebraName::VectFormal)).unwrap();
    assert_eq!(render_factors(&s.exceptional_factors(), "δ"), vec!["δ - 1"]);
    let s = solve_symbol_map(2, &lam, &mu, &alg(AlgebraName::L(0))).unwrap();
    let mut f = render_factors(&s.poles, "δ");
    f.sort();
    assert_eq!(f, vec!["2δ - 3", "δ - 2"]);
}

#[test]
fn second_order_has_no_vect_equivariant_map() {
    let vect = alg(AlgebraName::VectFormal);
    for (l, m) in [(rat(2, 3), rat(9, 4)), (rat(-1, 5), rat(3, 7))] {
        let s = solve_symbol_map(2, &to_scalar(&l), &to_scalar(&m), &vect).unwrap();
        assert_eq!(s.report.generic_dim, 0);
        let d = m.clone() - l.clone();
        let q = symbol_map_order2(&to_scalar(&l), &to_scalar(&d), Mode::Line).unwrap();
        let e = check_equivariance(&q, &vect).unwrap();
        assert!(!e.equivariant);
        assert_eq!(e.max_x_order, Some(3));
        assert!(check_equivariance(&q, &alg(AlgebraName::L(0))).unwrap().equivariant);
    }
}

#[test]
fn mode_mismatch_is_rejected() {
    let q = symbol_map_order1(&Scalar::from_i64(0), &Scalar::from_i64(3), Mode::Circle).unwrap();
    assert!(matches!(check_equivariance(&q, &alg(AlgebraName::L(0))), Err(CoreError::ModeMismatch)));
}

#[test]
fn full_quantization_named_points() {
    let k2 = alg(AlgebraName::K2);
    assert!(full_quant_exists(&rat(0, 1), &rat(3, 1), &k2).unwrap().exists);
    assert!(!full_quant_exists(&rat(1, 2), &rat(5, 2), &k2).unwrap().exists);
    assert!(!full_quant_exists(&rat(-1, 1), &rat(1, 1), &k2).unwrap().exists);
    assert!(branch_predicate(&rat(0, 1), &rat(3, 1)));
    assert!(!branch_predicate(&rat(-1, 1), &rat(1, 1)));
    assert!(branch_predicate(&rat(1, 3), &rat(1, 1)));
    assert!(!branch_predicate(&rat(0, 1), &rat(2, 1)));
    assert!(full_quant_exists(&rat(0, 1), &rat(1, 1), &alg(AlgebraName::VectFormal)).is_err());
}

#[test]
fn function_coefficients_add_no_solutions() {
    let monos: Vec<FuncMono> =
        (0..=3).map(FuncMono::x_pow).chain([GaussRat::real(rat(1, 1)), GaussRat::imag(rat(1, 1))].into_iter().map(FuncMono::exp)).collect();
    let l0 = alg(AlgebraName::L(0));
    let vect = alg(AlgebraName::VectFormal);
    for (k, g, l, m) in [(1, &vect, rat(1, 1), rat(3, 1)), (2, &l0, rat(1, 1), rat(1, 1)), (2, &vect, rat(2, 3), rat(9, 4))] {
        let constant = solve_symbol_map(k, &to_scalar(&l), &to_scalar(&m), g).unwrap().report.generic_dim;
        assert_eq!(function_coefficient_dim(k, &l, &m, g, &monos), constant);
    }
}
