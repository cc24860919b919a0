use densq_core::corealg::{rat, Func, GaussRat, Mode};
use densq_core::liealg::{catalog, coordinates, AlgebraName, Subalgebra};

fn bracket(a: &Func<GaussRat>, b: &Func<GaussRat>) -> Func<GaussRat> {
    a.mul(&b.deriv()).sub(&a.deriv().mul(b))
}

#[test]
fn jacobi_holds_for_every_catalog_algebra() {
    for mode in [Mode::Line, Mode::Circle] {
        for scale in [1, 2] {
            let mut names = vec![AlgebraName::G0, AlgebraName::A1, AlgebraName::H0, AlgebraName::K1, AlgebraName::K2];
            names.extend((0..=4).map(AlgebraName::L));
            for n in names {
                if let Ok(g) = Subalgebra::with_scale(n, mode, scale) {
                    assert!(g.check_jacobi(), "{n} {mode} s={scale}");
                }
            }
        }
    }
    assert!(!catalog(Mode::Line, 4).is_empty());
}

#[test]
fn generators_close_under_the_bracket() {
    for g in catalog(Mode::Line, 3).into_iter().chain(catalog(Mode::Circle, 0)) {
        let gens = g.generators();
        let c = g.structure_constants();
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                let b = bracket(&gens[i], &gens[j]);
                let coords = coordinates(&b, gens).unwrap_or_else(|| panic!("{} not closed", g.name()));
                assert_eq!(coords, c[i][j], "{} [{i},{j}]", g.name());
            }
        }
    }
}

#[test]
fn dimensions_and_killing_signatures() {
    let line = catalog(Mode::Line, 2);
    let by = |n: AlgebraName| line.iter().find(|g| g.name() == n).unwrap();
    assert_eq!(by(AlgebraName::G0).dim(), 1);
    assert_eq!(by(AlgebraName::A1).dim(), 2);
    assert_eq!(by(AlgebraName::H0).dim(), 2);
    for n in [AlgebraName::L(0), AlgebraName::L(1), AlgebraName::L(2), AlgebraName::K1, AlgebraName::K2] {
        assert_eq!(by(n).dim(), 3);
        assert_eq!(by(n).killing_signature(), Some((2, 1, 0)), "{n}");
    }
}

#[test]
fn circle_admits_only_periodic_algebras() {
    assert!(Subalgebra::new(AlgebraName::K1, Mode::Circle).is_ok());
    assert!(Subalgebra::new(AlgebraName::G0, Mode::Circle).is_ok());
    assert!(Subalgebra::new(AlgebraName::K2, Mode::Circle).is_err());
    assert!(Subalgebra::new(AlgebraName::L(0), Mode::Circle).is_err());
    assert!(Subalgebra::new(AlgebraName::L(1), Mode::Circle).is_err());
}

#[test]
fn k1_bracket_relations() {
    let k1 = Subalgebra::new(AlgebraName::K1, Mode::Line).unwrap();
    let c = k1.structure_constants();
    let one = GaussRat::real(rat(1, 1));
    let zero = GaussRat::real(rat(0, 1));
    assert_eq!(c[0][1], vec![zero.clone(), zero.clone(), one.clone()]);
    assert_eq!(c[0][2], vec![zero.clone(), -one.clone(), zero.clone()]);
    // [sin, cos] = sin·(−sin) − cos·cos = −1
    assert_eq!(c[1][2], vec![-one, zero.clone(), zero]);
}

#[test]
fn scale_rescales_frequencies() {
    let k = Subalgebra::with_scale(AlgebraName::K2, Mode::Line, 2).unwrap();
    assert_eq!(k.scale(), 2);
    assert_eq!(k.generators()[1], Func::sinh(2));
    assert!(k.check_jacobi());
}
