mod common;

use common::*;
use densq_core::corealg::{Func, GaussRat, Mode};
use densq_core::jets::{jet_bracket, jet_lie_density, JetKey, JetPoly, Slot};
use proptest::prelude::*;

type J = JetPoly<GaussRat>;
type F = Func<GaussRat>;

fn key(parts: &[(Slot, usize)]) -> JetKey {
    parts.iter().fold(JetKey::EMPTY, |k, (s, o)| k.with(*s, *o))
}

#[test]
fn lie_density_weight_zero_and_one() {
    let l0: J = jet_lie_density(&gi(0, 1), Slot::X, Slot::Phi, Mode::Line);
    assert_eq!(l0, J::var(Slot::X, 0, Mode::Line).mul(&J::var(Slot::Phi, 1, Mode::Line)));
    let l1: J = jet_lie_density(&gi(1, 1), Slot::X, Slot::Phi, Mode::Line);
    let total = J::var(Slot::X, 0, Mode::Line).mul(&J::var(Slot::Phi, 0, Mode::Line)).deriv();
    assert_eq!(l1, total);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn lie_density_weight_coefficient(w in small_rat()) {
        let p: J = jet_lie_density(&g(w.clone()), Slot::X, Slot::Phi, Mode::Line);
        prop_assert_eq!(p.coeff(&key(&[(Slot::X, 1), (Slot::Phi, 0)])), F::constant(g(w), Mode::Line));
        prop_assert_eq!(p.coeff(&key(&[(Slot::X, 0), (Slot::Phi, 1)])), F::one(Mode::Line));
        prop_assert_eq!(p.num_terms() <= 2, true);
    }

    #[test]
    fn substitution_commutes_with_derivative(w in small_rat(), f in field(Mode::Line), c in func(Mode::Line)) {
        let p: J = jet_lie_density(&g(w), Slot::X, Slot::Phi, Mode::Line).scale_func(&c);
        let a = p.deriv().substitute_func(Slot::X, &f).unwrap();
        let b = p.substitute_func(Slot::X, &f).unwrap().deriv();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn collect_reassembles(w in small_rat(), c in func(Mode::Line)) {
        let p: J = jet_lie_density(&g(w), Slot::X, Slot::Psi, Mode::Line).scale_func(&c).deriv_n(2);
        let items = p.collect();
        let mut keys: Vec<JetKey> = items.iter().map(|(k, _)| *k).collect();
        keys.dedup();
        prop_assert_eq!(keys.len(), items.len());
        prop_assert_eq!(J::from_collected(Mode::Line, items), p);
    }

    #[test]
    fn bracket_matches_direct_differentiation(f in field(Mode::Line), h in field(Mode::Line)) {
        let b: J = jet_bracket(Slot::X, Slot::Y, Mode::Line);
        let v = b.substitute_func(Slot::X, &f).unwrap().substitute_func(Slot::Y, &h).unwrap();
        let direct = f.mul(&h.deriv()).sub(&f.deriv().mul(&h));
        prop_assert_eq!(v, J::constant(direct));
    }
}

#[test]
fn bracket_examples() {
    let b: J = jet_bracket(Slot::X, Slot::Y, Mode::Line);
    let x = F::x_pow(1, Mode::Line).unwrap();
    let x2 = F::x_pow(2, Mode::Line).unwrap();
    let v = b.substitute_func(Slot::X, &x).unwrap().substitute_func(Slot::Y, &x2).unwrap();
    assert_eq!(v, J::constant(x2.clone()));
    let anti = b.add(&jet_bracket(Slot::Y, Slot::X, Mode::Line));
    assert!(anti.is_zero());
    for mode in [Mode::Line, Mode::Circle] {
        let bm: J = jet_bracket(Slot::X, Slot::Y, mode);
        let one = F::one(mode);
        let s = F::sin(1, mode).unwrap();
        let v = bm.substitute_func(Slot::X, &one).unwrap().substitute_func(Slot::Y, &s).unwrap();
        assert_eq!(v, J::constant(F::cos(1, mode).unwrap()));
    }
}

#[test]
fn substitution_examples() {
    let lam = gi(-2, 3);
    let p: J = jet_lie_density(&lam, Slot::X, Slot::Phi, Mode::Line);
    let translated = p.substitute_func(Slot::X, &F::one(Mode::Line)).unwrap();
    assert_eq!(translated, J::var(Slot::Phi, 1, Mode::Line));
    let on_one = p.substitute_func(Slot::Phi, &F::one(Mode::Line)).unwrap();
    assert_eq!(on_one, J::var(Slot::X, 1, Mode::Line).scale(&lam));
}

#[test]
fn substitution_rejects_mode_mismatch() {
    let p: J = jet_lie_density(&gi(1, 1), Slot::X, Slot::Phi, Mode::Circle);
    assert!(p.substitute_func(Slot::X, &F::x_pow(1, Mode::Line).unwrap()).is_err());
}
