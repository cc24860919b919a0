use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::{fmt_rat, Coeff, Rat};
use super::gauss::GaussRat;
use crate::error::{CoreError, Result};

/// Domain of the coordinate `x`: the real line or the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Line,
    Circle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Line => "line",
            Mode::Circle => "circle",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "line" => Ok(Mode::Line),
            "circle" => Ok(Mode::Circle),
            other => Err(CoreError::InvalidMode(format!("unknown mode `{other}`"))),
        }
    }
}

/// Monomial `x^xexp · e^(freq·x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FuncMono {
    pub xexp: i64,
    pub freq: GaussRat,
}

impl FuncMono {
    pub fn one() -> Self {
        FuncMono::default()
    }

    pub fn new(xexp: i64, freq: GaussRat) -> Self {
        FuncMono { xexp, freq }
    }

    pub fn x_pow(a: i64) -> Self {
        FuncMono { xexp: a, freq: GaussRat::zero() }
    }

    pub fn exp(freq: GaussRat) -> Self {
        FuncMono { xexp: 0, freq }
    }

    pub fn mul(&self, o: &FuncMono) -> FuncMono {
        FuncMono { xexp: self.xexp + o.xexp, freq: self.freq.clone() + o.freq.clone() }
    }

    pub fn is_periodic(&self) -> bool {
        self.xexp == 0 && self.freq.re.is_zero() && self.freq.im.is_integer()
    }

    pub fn conj(&self) -> FuncMono {
        FuncMono { xexp: self.xexp, freq: self.freq.conj() }
    }
}

impl fmt::Display for FuncMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.xexp {
            0 => {}
            1 => parts.push("x".to_string()),
            a => parts.push(format!("x^{a}")),
        }
        if !self.freq.is_zero() {
            let b = self.freq.to_string();
            parts.push(if b.contains(['+', '*']) || b.starts_with('-') { format!("e^({b}·x)") } else { format!("e^({b}x)") });
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

/// Finite sum of `x^a·e^(bx)` monomials with coefficients in `S`.
///
/// In circle mode only periodic monomials `e^(i n x)` with integer `n` are
/// admitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Func<S = crate::Scalar> {
    terms: BTreeMap<FuncMono, S>,
    mode: Mode,
}

/// Kinds accepted by [`Func::elementary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Monomial,
}

impl<S: Coeff> Func<S> {
    pub fn zero(mode: Mode) -> Self {
        Func { terms: BTreeMap::new(), mode }
    }

    pub fn constant(c: S, mode: Mode) -> Self {
        Self::term(FuncMono::one(), c, mode)
    }

    pub fn one(mode: Mode) -> Self {
        Self::constant(S::one(), mode)
    }

    /// Single term; panics if the monomial is not admissible in `mode`.
    pub fn term(m: FuncMono, c: S, mode: Mode) -> Self {
        assert!(mode == Mode::Line || m.is_periodic(), "monomial {m} not periodic");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Func { terms, mode }
    }

    pub fn try_term(m: FuncMono, c: S, mode: Mode) -> Result<Self> {
        if mode == Mode::Circle && !m.is_periodic() {
            return Err(CoreError::InvalidMode(format!("{m} is not a periodic monomial")));
        }
        Ok(Self::term(m, c, mode))
    }

    pub fn x(mode: Mode) -> Result<Self> {
        Self::try_term(FuncMono::x_pow(1), S::one(), mode)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FuncMono, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &FuncMono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// The value when the function is constant.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&FuncMono::one()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: FuncMono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = std::mem::replace(v, S::zero()) + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, o: &Func<S>) {
        debug_assert_eq!(self.mode, o.mode);
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, o: &Func<S>, s: &S) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone() * s.clone());
        }
    }

    pub fn try_add(&self, o: &Func<S>) -> Result<Func<S>> {
        self.check_mode(o)?;
        let mut out = self.clone();
        out.add_assign(o);
        Ok(out)
    }

    pub fn try_mul(&self, o: &Func<S>) -> Result<Func<S>> {
        self.check_mode(o)?;
        Ok(self.mul(o))
    }

    fn check_mode(&self, o: &Func<S>) -> Result<()> {
        if self.mode != o.mode {
            return Err(CoreError::ModeMismatch);
        }
        Ok(())
    }

    /// Product; modes must agree (checked in debug builds, see [`Func::try_mul`]).
    pub fn mul(&self, o: &Func<S>) -> Func<S> {
        debug_assert_eq!(self.mode, o.mode);
        let mut out = Func::zero(self.mode);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Func<S> {
        if s.is_zero() {
            return Func::zero(self.mode);
        }
        Func { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(), mode: self.mode }
    }

    pub fn neg(&self) -> Func<S> {
        Func { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(), mode: self.mode }
    }

    pub fn sub(&self, o: &Func<S>) -> Func<S> {
        let mut out = self.clone();
        out.add_scaled(o, &-S::one());
        out
    }

    pub fn deriv(&self) -> Func<S> {
        let mut out = Func::zero(self.mode);
        for (m, c) in &self.terms {
            if m.xexp != 0 {
                out.add_term(FuncMono::new(m.xexp - 1, m.freq.clone()), c.clone() * S::from_i64(m.xexp));
            }
            if !m.freq.is_zero() {
                out.add_term(m.clone(), c.clone() * S::from_gauss(&m.freq));
            }
        }
        out
    }

    pub fn deriv_n(&self, n: usize) -> Func<S> {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.deriv();
        }
        f
    }

    pub fn conj(&self) -> Func<S> {
        Func { terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(), mode: self.mode }
    }

    /// Real-valued: invariant under complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn map_coeffs<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Func<T> {
        let mut out = Func::zero(self.mode);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Builds sin, cos, sinh, cosh, `e^(s x)` or `x^a` (with `s` read as the
    /// integer exponent) as combinations of complex exponentials.
    pub fn elementary(kind: Elementary, s: &Rat, mode: Mode) -> Result<Func<S>> {
        let half = S::from_rat(&Rat::new(1.into(), 2.into()));
        let e = |b: GaussRat| FuncMono::exp(b);
        let f = match kind {
            Elementary::Sin | Elementary::Cos => {
                if mode == Mode::Circle && !s.is_integer() {
                    return Err(CoreError::InvalidMode(format!("sin/cos({}x) is not periodic", fmt_rat(s))));
                }
                let ip = GaussRat::imag(s.clone());
                let mut f = Func::zero(mode);
                if kind == Elementary::Sin {
                    let c = S::from_gauss(&GaussRat::imag(Rat::new((-1).into(), 2.into())));
                    f.add_term(e(ip.clone()), c.clone());
                    f.add_term(e(-ip), -c);
                } else {
                    f.add_term(e(ip.clone()), half.clone());
                    f.add_term(e(-ip), half);
                }
                f
            }
            Elementary::Sinh | Elementary::Cosh => {
                if mode == Mode::Circle {
                    return Err(CoreError::InvalidMode("hyperbolic functions are not periodic".into()));
                }
                let rp = GaussRat::real(s.clone());
                let mut f = Func::zero(mode);
                f.add_term(e(rp.clone()), half.clone());
                f.add_term(e(-rp), if kind == Elementary::Sinh { -half } else { half });
                f
            }
            Elementary::Exp => Func::try_term(e(GaussRat::real(s.clone())), S::one(), mode)?,
            Elementary::Monomial => {
                if !s.is_integer() {
                    return Err(CoreError::Domain(format!("non-integer exponent {}", fmt_rat(s))));
                }
                let a: i64 = s.to_integer().try_into().map_err(|_| CoreError::Domain("exponent too large".into()))?;
                Func::try_term(FuncMono::x_pow(a), S::one(), mode)?
            }
        };
        Ok(f)
    }

    pub fn sin(s: i64, mode: Mode) -> Result<Func<S>> {
        Self::elementary(Elementary::Sin, &Rat::from_integer(s.into()), mode)
    }

    pub fn cos(s: i64, mode: Mode) -> Result<Func<S>> {
        Self::elementary(Elementary::Cos, &Rat::from_integer(s.into()), mode)
    }

    pub fn sinh(s: i64) -> Func<S> {
        Self::elementary(Elementary::Sinh, &Rat::from_integer(s.into()), Mode::Line).unwrap()
    }

    pub fn cosh(s: i64) -> Func<S> {
        Self::elementary(Elementary::Cosh, &Rat::from_integer(s.into()), Mode::Line).unwrap()
    }

    pub fn x_pow(a: i64, mode: Mode) -> Result<Func<S>> {
        Self::try_term(FuncMono::x_pow(a), S::one(), mode)
    }

    pub fn exp(b: GaussRat, mode: Mode) -> Result<Func<S>> {
        Self::try_term(FuncMono::exp(b), S::one(), mode)
    }
}

fn fmt_coeff<S: fmt::Display>(c: &S) -> String {
    let s = c.to_string();
    if s[1..].contains(['+', '-', '/']) && s.contains(['t', 'i']) {
        format!("({s})")
    } else {
        s
    }
}

impl<S: Coeff> fmt::Display for Func<S> {
    /// Conjugate pairs `c e^(iβx) + conj(c) e^(-iβx)` with real `c` parts are
    /// printed as `cos`/`sin` terms; everything else as `x^a·e^(bx)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut pieces: Vec<(String, String)> = Vec::new();
        let mut done = std::collections::BTreeSet::new();
        for (m, c) in &self.terms {
            if done.contains(m) {
                continue;
            }
            let trig = m.freq.is_imaginary() && !m.freq.im.is_zero();
            let partner = m.conj();
            let paired = trig
                && match (c.as_gauss(), self.terms.get(&partner).and_then(|v| v.as_gauss())) {
                    (Some(c0), Some(cp)) => cp == c0.conj(),
                    _ => false,
                };
            if paired && m.freq.im < Rat::zero() {
                continue;
            }
            if paired {
                if let (Some(c0), Some(cp)) = (c.as_gauss(), self.terms.get(&partner).and_then(|v| v.as_gauss())) {
                    if cp == c0.conj() {
                        done.insert(m.clone());
                        done.insert(partner);
                        let beta = fmt_rat(&m.freq.im);
                        let arg = if beta == "1" { "x".to_string() } else { format!("{beta}x") };
                        let xpart = match m.xexp {
                            0 => String::new(),
                            1 => "x·".into(),
                            a => format!("x^{a}·"),
                        };
                        let two = Rat::from_integer(2.into());
                        let cosc = &c0.re * &two;
                        let sinc = -(&c0.im * &two);
                        if !cosc.is_zero() {
                            pieces.push((fmt_rat(&cosc), format!("{xpart}cos({arg})")));
                        }
                        if !sinc.is_zero() {
                            pieces.push((fmt_rat(&sinc), format!("{xpart}sin({arg})")));
                        }
                        continue;
                    }
                }
            }
            done.insert(m.clone());
            pieces.push((fmt_coeff(c), if *m == FuncMono::one() { String::new() } else { m.to_string() }));
        }
        let mut out = String::new();
        for (k, (c, m)) in pieces.iter().enumerate() {
            let neg = c.starts_with('-');
            let mag = if neg { &c[1..] } else { &c[..] };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_empty() {
                out.push_str(mag);
            } else if mag == "1" {
                out.push_str(m);
            } else {
                out.push_str(mag);
                out.push('·');
                out.push_str(m);
            }
        }
        f.write_str(&out)
    }
}
