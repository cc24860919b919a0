use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{Coeff, Field, Rat};
use super::gauss::GaussRat;
use super::poly::Poly;

/// Rational function `num/den` in one formal parameter `t`.
///
/// Canonical form: `den` monic and coprime to `num`; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let d = den.lead();
            if d.is_one() {
                return RatFunc { num, den };
            }
            return RatFunc { num: num.scale(&d.inv()), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let l = den.lead().inv();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn from_poly(num: Poly<F>) -> Self {
        RatFunc { num, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The formal parameter `t`.
    pub fn param() -> Self {
        Self::from_poly(Poly::param())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_const(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn const_value(&self) -> Option<F> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Evaluation at `t = x`; `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num + o.num, den: self.den };
        }
        if self.den == o.den {
            return RatFunc::new(self.num + o.num, self.den);
        }
        RatFunc::new(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num * o.num, den: self.den };
        }
        RatFunc::new(self.num * o.num, self.den * o.den)
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational function");
        if o.is_const() {
            let c = o.num.lead().inv();
            return RatFunc { num: self.num.scale(&c), den: self.den };
        }
        RatFunc::new(self.num * o.den, self.den * o.num)
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn from_rat(r: &Rat) -> Self {
        Self::constant(F::from_rat(r))
    }

    fn cost(&self) -> usize {
        let deg = self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0);
        deg * 1000 + self.num.coeffs().iter().map(|c| c.cost()).sum::<usize>()
    }
}

impl<F: Coeff> Coeff for RatFunc<F> {
    fn from_gauss(g: &GaussRat) -> Self {
        Self::constant(F::from_gauss(g))
    }

    fn conj(&self) -> Self {
        RatFunc { num: self.num.conj(), den: self.den.conj() }
    }

    fn as_gauss(&self) -> Option<GaussRat> {
        self.const_value().and_then(|c| c.as_gauss())
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let n = if self.num.coeffs().len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        write!(f, "{}/({})", n, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::field::rat;

    type R = RatFunc<Rat>;

    #[test]
    fn canonical_form() {
        let t = R::param();
        let one = R::one();
        let a = (t.clone() * t.clone() - one.clone()) / (t.clone() - one.clone());
        assert_eq!(a, t.clone() + one.clone());
        let b = R::from_rat(&rat(2, 1)) / (R::from_rat(&rat(2, 1)) * t.clone() + one.clone());
        assert!(b.den().lead().is_one());
        assert_eq!(b.eval(&rat(0, 1)), Some(rat(2, 1)));
        assert_eq!(b.eval(&rat(-1, 2)), None);
    }

    #[test]
    fn display() {
        let t = R::param();
        let x = (t.clone() + R::one()) / (t.clone() - R::from_rat(&rat(2, 1)));
        assert_eq!(x.to_string(), "(t + 1)/(t - 2)");
        assert_eq!(R::from_rat(&rat(-2, 3)).to_string(), "-2/3");
    }
}
