#![allow(dead_code)]

use densq_core::corealg::{rat, Func, FuncMono, GaussRat, Mode, Poly, Rat, RatFunc};
use densq_core::Scalar;
use proptest::prelude::*;

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| *r != rat(0, 1))
}

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (small_rat(), small_rat()).prop_map(|(a, b)| GaussRat::new(a, b))
}

fn line_freq() -> impl Strategy<Value = GaussRat> {
    prop_oneof![
        Just(GaussRat::real(rat(0, 1))),
        Just(GaussRat::real(rat(1, 1))),
        Just(GaussRat::real(rat(-1, 1))),
        Just(GaussRat::real(rat(1, 2))),
        Just(GaussRat::imag(rat(1, 1))),
        Just(GaussRat::imag(rat(-2, 1))),
        Just(GaussRat::new(rat(1, 1), rat(1, 1))),
    ]
}

pub fn mono(mode: Mode) -> BoxedStrategy<FuncMono> {
    match mode {
        Mode::Line => (-2i64..=3, line_freq()).prop_map(|(a, b)| FuncMono::new(a, b)).boxed(),
        Mode::Circle => (-3i64..=3).prop_map(|k| FuncMono::exp(GaussRat::imag(rat(k, 1)))).boxed(),
    }
}

pub fn func(mode: Mode) -> BoxedStrategy<Func<GaussRat>> {
    prop::collection::vec((mono(mode), gauss()), 0..4)
        .prop_map(move |terms| {
            let mut f = Func::zero(mode);
            for (m, c) in terms {
                f.add_assign(&Func::term(m, c, mode));
            }
            f
        })
        .boxed()
}

/// `f + conj(f)`, which is real-valued.
pub fn real_func(mode: Mode) -> BoxedStrategy<Func<GaussRat>> {
    func(mode)
        .prop_map(|f| {
            let c = f.conj();
            f.add_assign_ret(&c)
        })
        .boxed()
}

trait AddRet {
    fn add_assign_ret(self, o: &Self) -> Self;
}

impl AddRet for Func<GaussRat> {
    fn add_assign_ret(mut self, o: &Self) -> Self {
        self.add_assign(o);
        self
    }
}

/// Vector fields with polynomial-exponential coefficients of small degree,
/// avoiding negative powers so that products stay small.
pub fn field(mode: Mode) -> BoxedStrategy<Func<GaussRat>> {
    match mode {
        Mode::Line => prop::collection::vec(((0i64..=2), line_freq(), small_rat()), 1..3)
            .prop_map(|terms| {
                let mut f = Func::zero(Mode::Line);
                for (a, b, c) in terms {
                    f.add_assign(&Func::term(FuncMono::new(a, b), GaussRat::real(c), Mode::Line));
                }
                f
            })
            .boxed(),
        Mode::Circle => func(Mode::Circle),
    }
}

pub fn poly() -> impl Strategy<Value = Poly<GaussRat>> {
    prop::collection::vec(small_rat(), 0..4).prop_map(|cs| Poly::from_coeffs(cs.into_iter().map(GaussRat::real).collect()))
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly().prop_filter("nonzero denominator", |p| !p.is_zero())).prop_map(|(n, d)| RatFunc::new(n, d))
}

pub fn g(r: Rat) -> GaussRat {
    GaussRat::real(r)
}

pub fn gi(n: i64, d: i64) -> GaussRat {
    GaussRat::real(rat(n, d))
}

/// Values `P(0), …, P(n)` of a polynomial of degree `≤ n` turned into its
/// coefficients by Newton interpolation.
pub fn interpolate(values: &[Rat]) -> Vec<Rat> {
    let n = values.len();
    let mut dd = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / Rat::from_integer(j.into());
        }
    }
    let mut coeffs = vec![rat(0, 1); n];
    for k in (0..n).rev() {
        let mut next = vec![rat(0, 1); n];
        for (i, c) in coeffs.iter().enumerate() {
            if i + 1 < n {
                next[i + 1] = next[i + 1].clone() + c.clone();
            }
            next[i] = next[i].clone() - c.clone() * Rat::from_integer(k.into());
        }
        next[0] = next[0].clone() + dd[k].clone();
        coeffs = next;
    }
    coeffs
}

/// `Σ c_{i,j} a^i b^j`.
pub fn symbol(coeffs: &[((usize, usize), Rat)], a: &Rat, b: &Rat) -> Rat {
    coeffs.iter().fold(rat(0, 1), |acc, ((i, j), c)| acc + c.clone() * pow(a, *i) * pow(b, *j))
}

pub fn pow(a: &Rat, e: usize) -> Rat {
    (0..e).fold(rat(1, 1), |acc, _| acc * a.clone())
}

/// Coefficients in `c` of the invariance defect of a constant-coefficient
/// bilinear operator evaluated on `X = e^{cx}`, `φ = e^{ax}`, `ψ = e^{bx}`:
/// `(a+b+μc)P(a,b) − (a+γc)P(a+c,b) − (b+λc)P(a,b+c)`. The coefficient of
/// `c^k` collects the terms in `X⁽ᵏ⁾`.
pub fn exp_defect(coeffs: &[((usize, usize), Rat)], w: (&Rat, &Rat, &Rat), a: &Rat, b: &Rat) -> Vec<Rat> {
    let (gamma, lambda, mu) = w;
    let order = coeffs.iter().map(|((i, j), _)| i + j).max().unwrap_or(0);
    let vals: Vec<Rat> = (0..=order + 1)
        .map(|c| {
            let c = Rat::from_integer(c.into());
            (a.clone() + b.clone() + mu.clone() * c.clone()) * symbol(coeffs, a, b)
                - (a.clone() + gamma.clone() * c.clone()) * symbol(coeffs, &(a.clone() + c.clone()), b)
                - (b.clone() + lambda.clone() * c.clone()) * symbol(coeffs, a, &(b.clone() + c.clone()))
        })
        .collect();
    interpolate(&vals)
}
