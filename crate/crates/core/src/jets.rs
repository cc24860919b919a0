//! Formal multilinear jet calculus in two vector-field slots `X`, `Y` and two
//! density slots `φ`, `ψ`.
//!
//! A [`JetPoly`] is a finite sum of terms `c(x)·∏ slot⁽ⁱ⁾` with at most one
//! jet variable per slot. An identity that must hold for all vector fields
//! and densities holds iff every collected coefficient vanishes.

use std::collections::BTreeMap;
use std::fmt;

use crate::corealg::{Coeff, Func, Mode};
use crate::error::{CoreError, Result};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    X = 0,
    Y = 1,
    Phi = 2,
    Psi = 3,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::X, Slot::Y, Slot::Phi, Slot::Psi];

    pub fn symbol(self) -> &'static str {
        match self {
            Slot::X => "X",
            Slot::Y => "Y",
            Slot::Phi => "φ",
            Slot::Psi => "ψ",
        }
    }

    pub fn is_vector_field(self) -> bool {
        matches!(self, Slot::X | Slot::Y)
    }
}

/// Jet orders per slot; `-1` marks an absent slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetKey(pub [i8; 4]);

impl JetKey {
    pub const EMPTY: JetKey = JetKey([-1; 4]);

    pub fn single(slot: Slot, order: usize) -> JetKey {
        let mut k = JetKey::EMPTY;
        k.0[slot as usize] = order as i8;
        k
    }

    pub fn order(&self, slot: Slot) -> Option<usize> {
        let o = self.0[slot as usize];
        (o >= 0).then_some(o as usize)
    }

    pub fn with(mut self, slot: Slot, order: usize) -> JetKey {
        self.0[slot as usize] = order as i8;
        self
    }

    pub fn without(mut self, slot: Slot) -> JetKey {
        self.0[slot as usize] = -1;
        self
    }

    pub fn slots(&self) -> Vec<Slot> {
        Slot::ALL.into_iter().filter(|s| self.order(*s).is_some()).collect()
    }

    fn merge(&self, o: &JetKey) -> Option<JetKey> {
        let mut k = *self;
        for i in 0..4 {
            if o.0[i] >= 0 {
                if k.0[i] >= 0 {
                    return None;
                }
                k.0[i] = o.0[i];
            }
        }
        Some(k)
    }

    pub fn total_order(&self) -> usize {
        self.0.iter().filter(|o| **o >= 0).map(|o| *o as usize).sum()
    }
}

fn jet_var(slot: Slot, order: usize) -> String {
    let primes = ["", "′", "″", "‴"];
    if order < primes.len() {
        format!("{}{}", slot.symbol(), primes[order])
    } else {
        let sup: String = order
            .to_string()
            .chars()
            .map(|c| ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'][c.to_digit(10).unwrap() as usize])
            .collect();
        format!("{}⁽{}⁾", slot.symbol(), sup)
    }
}

impl fmt::Display for JetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = Slot::ALL.iter().filter_map(|s| self.order(*s).map(|o| jet_var(*s, o))).collect();
        if s.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&s)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoly<S = Scalar> {
    terms: BTreeMap<JetKey, Func<S>>,
    mode: Mode,
}

impl<S: Coeff> JetPoly<S> {
    pub fn zero(mode: Mode) -> Self {
        JetPoly { terms: BTreeMap::new(), mode }
    }

    pub fn var(slot: Slot, order: usize, mode: Mode) -> Self {
        Self::monomial(JetKey::single(slot, order), Func::one(mode))
    }

    pub fn monomial(key: JetKey, c: Func<S>) -> Self {
        let mode = c.mode();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        JetPoly { terms, mode }
    }

    pub fn constant(c: Func<S>) -> Self {
        Self::monomial(JetKey::EMPTY, c)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetKey, &Func<S>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &JetKey) -> Func<S> {
        self.terms.get(key).cloned().unwrap_or_else(|| Func::zero(self.mode))
    }

    /// Complete coefficient extraction, sorted by key.
    pub fn collect(&self) -> Vec<(JetKey, Func<S>)> {
        self.terms.iter().map(|(k, c)| (*k, c.clone())).collect()
    }

    pub fn from_collected(mode: Mode, items: impl IntoIterator<Item = (JetKey, Func<S>)>) -> Self {
        let mut p = JetPoly::zero(mode);
        for (k, c) in items {
            p.add_term(k, &c);
        }
        p
    }

    /// Slots present in every term; `None` if terms disagree (not
    /// multilinear-homogeneous).
    pub fn active_slots(&self) -> Option<Vec<Slot>> {
        let mut it = self.terms.keys().map(|k| k.slots());
        let first = it.next().unwrap_or_default();
        it.all(|s| s == first).then_some(first)
    }

    pub fn max_order(&self, slot: Slot) -> Option<usize> {
        self.terms.keys().filter_map(|k| k.order(slot)).max()
    }

    fn add_term(&mut self, k: JetKey, c: &Func<S>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                v.add_assign(c);
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &JetPoly<S>) {
        debug_assert_eq!(self.mode, o.mode);
        for (k, c) in &o.terms {
            self.add_term(*k, c);
        }
    }

    pub fn add(&self, o: &JetPoly<S>) -> JetPoly<S> {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &JetPoly<S>) -> JetPoly<S> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> JetPoly<S> {
        JetPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(), mode: self.mode }
    }

    pub fn scale(&self, s: &S) -> JetPoly<S> {
        if s.is_zero() {
            return JetPoly::zero(self.mode);
        }
        JetPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.scale(s))).collect(), mode: self.mode }
    }

    pub fn scale_func(&self, f: &Func<S>) -> JetPoly<S> {
        let mut r = JetPoly::zero(self.mode);
        for (k, c) in &self.terms {
            r.add_term(*k, &c.mul(f));
        }
        r
    }

    /// Product of polynomials in disjoint slots.
    pub fn mul(&self, o: &JetPoly<S>) -> JetPoly<S> {
        let mut r = JetPoly::zero(self.mode);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let k = k1.merge(k2).expect("jet product of overlapping slots");
                r.add_term(k, &c1.mul(c2));
            }
        }
        r
    }

    /// Total derivative `d/dx`.
    pub fn deriv(&self) -> JetPoly<S> {
        let mut r = JetPoly::zero(self.mode);
        for (k, c) in &self.terms {
            r.add_term(*k, &c.deriv());
            for s in Slot::ALL {
                if let Some(o) = k.order(s) {
                    r.add_term(k.with(s, o + 1), c);
                }
            }
        }
        r
    }

    pub fn deriv_n(&self, n: usize) -> JetPoly<S> {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.deriv();
        }
        p
    }

    /// Replaces `slot⁽ⁱ⁾` by the `i`-th derivative of `f`.
    pub fn substitute_func(&self, slot: Slot, f: &Func<S>) -> Result<JetPoly<S>> {
        if f.mode() != self.mode {
            return Err(CoreError::ModeMismatch);
        }
        let mut derivs: Vec<Func<S>> = vec![f.clone()];
        let mut r = JetPoly::zero(self.mode);
        for (k, c) in &self.terms {
            match k.order(slot) {
                None => r.add_term(*k, c),
                Some(o) => {
                    while derivs.len() <= o {
                        let d = derivs.last().unwrap().deriv();
                        derivs.push(d);
                    }
                    r.add_term(k.without(slot), &c.mul(&derivs[o]));
                }
            }
        }
        Ok(r)
    }

    /// Replaces `slot⁽ⁱ⁾` by `Dⁱ q`. The remaining factor of every term must
    /// not share slots with `q`.
    pub fn substitute(&self, slot: Slot, q: &JetPoly<S>) -> JetPoly<S> {
        let mut derivs: Vec<JetPoly<S>> = vec![q.clone()];
        let mut r = JetPoly::zero(self.mode);
        for (k, c) in &self.terms {
            match k.order(slot) {
                None => r.add_term(*k, c),
                Some(o) => {
                    while derivs.len() <= o {
                        let d = derivs.last().unwrap().deriv();
                        derivs.push(d);
                    }
                    let rest = JetPoly::monomial(k.without(slot), c.clone());
                    r.add_assign(&rest.mul(&derivs[o]));
                }
            }
        }
        r
    }

    /// Renames a slot (the target slot must be absent).
    pub fn rename(&self, from: Slot, to: Slot) -> JetPoly<S> {
        let mut r = JetPoly::zero(self.mode);
        for (k, c) in &self.terms {
            let nk = match k.order(from) {
                Some(o) => {
                    assert!(k.order(to).is_none(), "rename onto an occupied slot");
                    k.without(from).with(to, o)
                }
                None => *k,
            };
            r.add_term(nk, c);
        }
        r
    }

    pub fn map_coeffs<T: Coeff>(&self, f: impl Fn(&S) -> T) -> JetPoly<T> {
        let mut r = JetPoly::zero(self.mode);
        for (k, c) in &self.terms {
            r.add_term(*k, &c.map_coeffs(&f));
        }
        r
    }
}

/// `x·p′ + w·x′·p`: the density action of the vector field `x` on `p`.
pub fn lie<S: Coeff>(x: &JetPoly<S>, w: &S, p: &JetPoly<S>) -> JetPoly<S> {
    let mut r = x.mul(&p.deriv());
    r.add_assign(&x.deriv().mul(p).scale(w));
    r
}

/// Vector field bracket `[x, y] = x·y′ − x′·y`.
pub fn bracket<S: Coeff>(x: &JetPoly<S>, y: &JetPoly<S>) -> JetPoly<S> {
    x.mul(&y.deriv()).sub(&x.deriv().mul(y))
}

/// `X·φ′ + weight·φ·X′` in the given slots.
pub fn jet_lie_density<S: Coeff>(weight: &S, vf: Slot, dens: Slot, mode: Mode) -> JetPoly<S> {
    assert_ne!(vf, dens, "slots must be distinct");
    lie(&JetPoly::var(vf, 0, mode), weight, &JetPoly::var(dens, 0, mode))
}

/// `X·Y′ − X′·Y` in the given slots.
pub fn jet_bracket<S: Coeff>(x: Slot, y: Slot, mode: Mode) -> JetPoly<S> {
    assert!(x != y && x.is_vector_field() && y.is_vector_field(), "bracket needs two vector-field slots");
    bracket(&JetPoly::var(x, 0, mode), &JetPoly::var(y, 0, mode))
}

impl<S: Coeff> fmt::Display for JetPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter() {
            let mut cs = c.to_string();
            let monomial = *k != JetKey::EMPTY;
            let simple = c.num_terms() == 1 && !cs[1..].contains([' ', '+']);
            let neg = simple && cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            if !first {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            first = false;
            match (monomial, cs.as_str()) {
                (false, _) => write!(f, "{cs}")?,
                (true, "1") => write!(f, "{k}")?,
                (true, _) if simple => write!(f, "{cs}·{k}")?,
                (true, _) => write!(f, "({cs})·{k}")?,
            }
        }
        Ok(())
    }
}
