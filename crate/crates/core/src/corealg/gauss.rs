use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{fmt_rat, rat_is_neg, Coeff, Field, Rat};

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn imag(im: Rat) -> Self {
        GaussRat { re: Rat::zero(), im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::real(Rat::one())
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(self.re * o.re);
        }
        GaussRat { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, o: GaussRat) -> GaussRat {
        assert!(!o.is_zero(), "division by zero Gaussian rational");
        if o.im.is_zero() {
            return GaussRat { re: self.re / &o.re, im: self.im / o.re };
        }
        let n = o.norm();
        let c = o.conj();
        let p = self * c;
        GaussRat { re: p.re / &n, im: p.im / n }
    }
}

impl Field for GaussRat {
    fn from_rat(r: &Rat) -> Self {
        GaussRat::real(r.clone())
    }

    fn cost(&self) -> usize {
        self.re.cost() + self.im.cost()
    }
}

impl Coeff for GaussRat {
    fn from_gauss(g: &GaussRat) -> Self {
        g.clone()
    }
    fn conj(&self) -> Self {
        GaussRat::conj(self)
    }
    fn as_gauss(&self) -> Option<GaussRat> {
        Some(self.clone())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im = if self.im == Rat::one() {
            "i".to_string()
        } else if self.im == -Rat::one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_rat(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if rat_is_neg(&self.im) {
            write!(f, "{}{}", fmt_rat(&self.re), im)
        } else {
            write!(f, "{}+{}", fmt_rat(&self.re), im)
        }
    }
}
