use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Coeff, Field};
use super::gauss::GaussRat;

/// Dense univariate polynomial, coefficients in ascending degree, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `t`.
    pub fn param() -> Self {
        Poly { coeffs: vec![F::zero(), F::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `t - root`
    pub fn linear_root(root: F) -> Self {
        Self::from_coeffs(vec![-root, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_value(&self) -> Option<F> {
        match self.coeffs.len() {
            0 => Some(F::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().inv();
        self.scale(&l)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * F::from_i64(k as i64)).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        if self.degree().is_none_or(|n| n < dd) {
            return (Self::zero(), self.clone());
        }
        let inv_lead = d.lead().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * inv_lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = rem[k + j].clone() - c.clone() * dc.clone();
                rem[k + j] = t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free part (characteristic zero).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut cs = c.to_string();
            let needs_paren = cs[1..].contains(['+', '-']);
            if needs_paren {
                cs = format!("({cs})");
            }
            let neg = !needs_paren && cs.starts_with('-');
            let mag = if neg { cs[1..].to_string() } else { cs.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let var_part = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&var_part);
            } else {
                out.push_str(&mag);
                out.push_str(&var_part);
            }
        }
        out
    }
}

impl<F: Coeff> Poly<F> {
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }
}

impl Poly<GaussRat> {
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        let (mut long, short) = if self.coeffs.len() >= o.coeffs.len() { (self, o) } else { (o, self) };
        for (k, c) in short.coeffs.into_iter().enumerate() {
            let t = std::mem::replace(&mut long.coeffs[k], F::zero());
            long.coeffs[k] = t + c;
        }
        Poly::from_coeffs(long.coeffs)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        self + (-o)
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let t = std::mem::replace(&mut out[i + j], F::zero());
                out[i + j] = t + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}
