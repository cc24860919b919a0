mod common;

use common::*;
use densq_core::cohomology::{
    circle_vs_line_default, coboundary, coboundary_checked, coboundary_finite, cocycle_defect_formal, cocycle_defect_pair,
    exceptional_locus_relative, finite_cocycle_defect, h1_finite, h1_finite_with, h1_relative, h1_vect_diff_with, never_cocycle_report,
    poisson_d_cochain, remark_cocycles, Cochain1, Truncation,
};
use densq_core::corealg::{rat, Func, GaussRat, Mode, Rat};
use densq_core::diffops::LinOp;
use densq_core::liealg::{AlgebraName, Subalgebra};
use densq_core::CoreError;
use proptest::prelude::*;

type F = Func<GaussRat>;

fn alg(n: AlgebraName, mode: Mode) -> Subalgebra {
    Subalgebra::new(n, mode).unwrap()
}

fn consts(cs: &[Rat]) -> Vec<F> {
    cs.iter().map(|c| F::constant(g(c.clone()), Mode::Line)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn coboundaries_are_cocycles(l in small_rat(), m in small_rat(), cs in prop::collection::vec(field(Mode::Line), 1..4)) {
        let a = LinOp::new(g(l), g(m), cs, Mode::Line);
        let c = coboundary(&a);
        prop_assert!(cocycle_defect_formal(&c).is_zero());
        prop_assert!(Cochain1::Differential(c).is_cocycle(None).unwrap());
    }

    #[test]
    fn finite_coboundaries_are_finite_cocycles(l in small_rat(), m in small_rat(), cs in prop::collection::vec(func(Mode::Circle), 1..4)) {
        let k1 = alg(AlgebraName::K1, Mode::Circle);
        let a = LinOp::new(g(l), g(m), cs, Mode::Circle);
        let values = coboundary_finite(&k1, &a).unwrap();
        for d in finite_cocycle_defect(&k1, &values).unwrap() {
            prop_assert!(d.is_zero());
        }
    }

    #[test]
    fn coboundary_symbol_matches_exponential_oracle(
        l in small_rat(), m in small_rat(), cs in prop::collection::vec(small_rat(), 1..4), b in small_rat(), c in small_rat(),
    ) {
        let a = LinOp::new(g(l.clone()), g(m.clone()), consts(&cs), Mode::Line);
        let d = coboundary(&a);
        let coeffs: Vec<((usize, usize), Rat)> = d.coeffs().iter().map(|(k, f)| (*k, f.as_constant().unwrap().re)).collect();
        let alpha = |z: &Rat| cs.iter().enumerate().fold(rat(0, 1), |acc, (j, aj)| acc + aj.clone() * pow(z, j));
        let oracle = (b.clone() + m.clone() * c.clone()) * alpha(&b) - (b.clone() + l.clone() * c.clone()) * alpha(&(b.clone() + c.clone()));
        prop_assert_eq!(symbol(&coeffs, &c, &b), oracle);
    }

    #[test]
    fn extra_coboundary_order_never_raises_dimension(delta in 0i64..=3, lambda in small_rat()) {
        let d = rat(delta, 1);
        let t = Truncation::new(delta as usize + 2, 1, 1);
        let dims: Vec<usize> = (0..3).map(|e| h1_vect_diff_with(&lambda, &d, Mode::Line, t, false, e).dim()).collect();
        prop_assert!(dims[0] >= dims[1] && dims[1] >= dims[2], "{:?}", dims);
    }
}

#[test]
fn extra_order_monotone_for_l0() {
    let l0 = alg(AlgebraName::L(0), Mode::Line);
    for (l, m) in [(rat(0, 1), rat(1, 1)), (rat(-1, 2), rat(3, 2)), (rat(0, 1), rat(0, 1))] {
        let t = Truncation::new(4, 2, 0);
        let dims: Vec<usize> = (0..3).map(|e| h1_finite_with(&l0, &l, &m, t, false, e).unwrap().dim()).collect();
        assert!(dims.windows(2).all(|w| w[0] >= w[1]), "{dims:?}");
    }
}

#[test]
fn remark_cocycles_are_cocycles_in_both_modes() {
    for mode in [Mode::Line, Mode::Circle] {
        let (c1, c2) = remark_cocycles(&gi(1, 3), mode);
        assert!(cocycle_defect_formal(&c1).is_zero());
        assert!(cocycle_defect_formal(&c2).is_zero());
    }
}

#[test]
fn x_multiplication_bounds_c2_on_the_line_only() {
    let r = circle_vs_line_default(&rat(0, 1));
    assert!(r.line.c2_primitive.is_some());
    assert!(r.circle.c2_primitive.is_none());
    assert!(r.circle.c1_primitive.is_none());
    assert!(r.circle.class_dim >= 2);
    let a = LinOp::multiplication(gi(0, 1), F::x_pow(1, Mode::Line).unwrap());
    let (_, c2) = remark_cocycles(&gi(0, 1), Mode::Line);
    assert_eq!(coboundary(&a), c2);
}

#[test]
fn poisson_d_is_never_a_cocycle() {
    let c = poisson_d_cochain::<GaussRat>(Mode::Line);
    assert!(!cocycle_defect_formal(&c).is_zero());
    let r = never_cocycle_report(Mode::Line);
    assert!(r.never_cocycle);
    assert!(!r.conditions.is_empty());
}

#[test]
fn pairwise_defect_specializes_the_formal_one() {
    let (c1, _) = remark_cocycles(&gi(2, 1), Mode::Line);
    let x = F::x_pow(2, Mode::Line).unwrap();
    let y = F::sin(1, Mode::Line).unwrap();
    assert!(cocycle_defect_pair(&c1, &x, &y).unwrap().is_zero());
}

#[test]
fn weight_and_domain_errors() {
    let a = LinOp::identity(gi(1, 1), Mode::Line);
    assert!(matches!(coboundary_checked(&a, &gi(0, 1), &gi(1, 1)), Err(CoreError::WeightMismatch(_))));
    let vect = alg(AlgebraName::VectFormal, Mode::Line);
    assert!(matches!(h1_finite(&vect, &rat(0, 1), &rat(0, 1), Truncation::new(2, 1, 1), false), Err(CoreError::Domain(_))));
}

#[test]
fn l0_finite_cohomology_values() {
    let l0 = alg(AlgebraName::L(0), Mode::Line);
    let cases =
        [((0, 1), (0, 1), 1), ((1, 3), (1, 3), 1), ((2, 1), (2, 1), 1), ((0, 1), (1, 1), 2), ((-1, 2), (3, 2), 2), ((1, 5), (7, 5), 0)];
    for ((ln, ld), (mn, md), want) in cases {
        let (l, m) = (rat(ln, ld), rat(mn, md));
        let d = (m.clone() - l.clone()).to_integer();
        let d: usize = d.try_into().unwrap();
        let c = h1_finite(&l0, &l, &m, Truncation::new(d + 1, d, 0), true).unwrap();
        assert_eq!(c.stabilized_dim, Some(want), "({l},{m})");
        assert!(c.levels.len() <= 4);
    }
}

#[test]
fn relative_l0_samples_and_locus() {
    let l0 = alg(AlgebraName::L(0), Mode::Line);
    for ((ln, ld), (mn, md), want) in [((0, 1), (2, 1), 1), ((-1, 2), (3, 2), 0), ((-4, 1), (1, 1), 1), ((1, 3), (7, 5), 0)] {
        let c = h1_relative(&l0, &rat(ln, ld), &rat(mn, md), None).unwrap();
        assert_eq!(c.stabilized_dim, Some(want));
    }
    let locus = exceptional_locus_relative(&l0, &rat(6, 1)).unwrap();
    assert!(locus.iter().any(|e| e.render("λ") == "2λ^2 + 10λ + 3"));
}

#[test]
fn truncation_growth_and_display() {
    let t = Truncation::new(3, 1, 2);
    assert_eq!(t.grow(2), Truncation::new(5, 3, 4));
    assert_eq!(t.to_string(), "N=3,D=1,F=2");
    assert_eq!(Truncation::for_delta(&rat(5, 2)).order, 6);
}
