//! Weighted densities and linear/bilinear differential operators between
//! density spaces, the Lie derivative actions on them, and the classical
//! named operators.

use std::collections::BTreeMap;
use std::fmt;

use crate::corealg::{rat, Coeff, Func, Mode};
use crate::error::{CoreError, Result};
use crate::jets::{lie, JetKey, JetPoly, Slot};
use crate::Scalar;

/// `φ(dx)^weight`
#[derive(Clone, Debug, PartialEq)]
pub struct Density<S = Scalar> {
    pub weight: S,
    pub coeff: Func<S>,
}

impl<S: Coeff> Density<S> {
    pub fn new(weight: S, coeff: Func<S>) -> Self {
        Density { weight, coeff }
    }

    pub fn mode(&self) -> Mode {
        self.coeff.mode()
    }
}

impl<S: Coeff> fmt::Display for Density<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·(dx)^{}", self.coeff, self.weight)
    }
}

/// `L_X(φ(dx)^λ) = (Xφ′ + λX′φ)(dx)^λ`
pub fn lie_density<S: Coeff>(x: &Func<S>, d: &Density<S>) -> Result<Density<S>> {
    if x.mode() != d.mode() {
        return Err(CoreError::ModeMismatch);
    }
    let mut c = x.mul(&d.coeff.deriv());
    c.add_scaled(&x.deriv().mul(&d.coeff), &d.weight);
    Ok(Density::new(d.weight.clone(), c))
}

/// `d: F_0 → F_1`, `φ ↦ φ′ dx`.
pub fn de_rham<S: Coeff>(d: &Density<S>) -> Result<Density<S>> {
    if !d.weight.is_zero() {
        return Err(CoreError::WeightMismatch(format!("de Rham differential needs weight 0, got {}", d.weight)));
    }
    Ok(Density::new(S::one(), d.coeff.deriv()))
}

/// Reads `Σ a_j ψ⁽ʲ⁾` off a jet polynomial in the single slot `slot`.
pub(crate) fn linear_coeffs<S: Coeff>(p: &JetPoly<S>, slot: Slot) -> Vec<Func<S>> {
    let n = p.max_order(slot).map_or(0, |o| o + 1);
    let mut a = vec![Func::zero(p.mode()); n];
    for (k, c) in p.terms() {
        let o = k.order(slot).expect("term without the operator slot");
        assert_eq!(k.slots().len(), 1, "linear operator jet with extra slots");
        a[o] = c.clone();
    }
    a
}

/// `A = Σ_j a_j d^j/dx^j : F_λ → F_μ`
#[derive(Clone, Debug, PartialEq)]
pub struct LinOp<S = Scalar> {
    pub src: S,
    pub dst: S,
    coeffs: Vec<Func<S>>,
    mode: Mode,
}

impl<S: Coeff> LinOp<S> {
    pub fn new(src: S, dst: S, mut coeffs: Vec<Func<S>>, mode: Mode) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinOp { src, dst, coeffs, mode }
    }

    pub fn zero(src: S, dst: S, mode: Mode) -> Self {
        LinOp::new(src, dst, Vec::new(), mode)
    }

    pub fn identity(w: S, mode: Mode) -> Self {
        LinOp::new(w.clone(), w, vec![Func::one(mode)], mode)
    }

    pub fn multiplication(w: S, f: Func<S>) -> Self {
        let mode = f.mode();
        LinOp::new(w.clone(), w, vec![f], mode)
    }

    pub fn coeffs(&self) -> &[Func<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Func<S> {
        self.coeffs.get(j).cloned().unwrap_or_else(|| Func::zero(self.mode))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `Σ a_j slot⁽ʲ⁾`
    pub fn as_jet(&self, slot: Slot) -> JetPoly<S> {
        let mut p = JetPoly::zero(self.mode);
        for (j, a) in self.coeffs.iter().enumerate() {
            p.add_assign(&JetPoly::monomial(JetKey::single(slot, j), a.clone()));
        }
        p
    }

    pub fn from_jet(src: S, dst: S, p: &JetPoly<S>, slot: Slot) -> Self {
        LinOp::new(src, dst, linear_coeffs(p, slot), p.mode())
    }

    pub fn apply(&self, d: &Density<S>) -> Result<Density<S>> {
        if d.weight != self.src {
            return Err(CoreError::WeightMismatch(format!("operator expects F_{}, got F_{}", self.src, d.weight)));
        }
        let r = self.as_jet(Slot::Psi).substitute_func(Slot::Psi, &d.coeff)?;
        Ok(Density::new(self.dst.clone(), r.coeff(&JetKey::EMPTY)))
    }

    pub fn add(&self, o: &LinOp<S>) -> Result<LinOp<S>> {
        self.check_weights(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|j| self.coeff(j).try_add(&o.coeff(j))).collect::<Result<Vec<_>>>()?;
        Ok(LinOp::new(self.src.clone(), self.dst.clone(), c, self.mode))
    }

    pub fn scale(&self, s: &S) -> LinOp<S> {
        LinOp::new(self.src.clone(), self.dst.clone(), self.coeffs.iter().map(|c| c.scale(s)).collect(), self.mode)
    }

    fn check_weights(&self, o: &LinOp<S>) -> Result<()> {
        if self.src != o.src || self.dst != o.dst {
            return Err(CoreError::WeightMismatch("operators act between different density spaces".into()));
        }
        if self.mode != o.mode {
            return Err(CoreError::ModeMismatch);
        }
        Ok(())
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LinOp<S>) -> Result<LinOp<S>> {
        if inner.dst != self.src {
            return Err(CoreError::WeightMismatch(format!(
                "cannot compose F_{} → F_{} after F_{} → F_{}",
                self.src, self.dst, inner.src, inner.dst
            )));
        }
        if self.mode != inner.mode {
            return Err(CoreError::ModeMismatch);
        }
        let p = self.as_jet(Slot::Phi).substitute(Slot::Phi, &inner.as_jet(Slot::Psi));
        Ok(LinOp::from_jet(inner.src.clone(), self.dst.clone(), &p, Slot::Psi))
    }
}

/// `L^μ_x(Aψ) − A(L^λ_x ψ)` as a jet in `ψ` (and `X` when `x` is the formal
/// slot variable).
pub fn lie_on_linop_jet<S: Coeff>(x: &JetPoly<S>, a: &LinOp<S>) -> JetPoly<S> {
    let apsi = a.as_jet(Slot::Psi);
    let psi = JetPoly::var(Slot::Psi, 0, a.mode());
    let first = lie(x, &a.dst, &apsi);
    let second = apsi.substitute(Slot::Psi, &lie(x, &a.src, &psi));
    first.sub(&second)
}

/// `L_X A = L^μ_X ∘ A − A ∘ L^λ_X`
pub fn lie_on_linop<S: Coeff>(x: &Func<S>, a: &LinOp<S>) -> Result<LinOp<S>> {
    if x.mode() != a.mode() {
        return Err(CoreError::ModeMismatch);
    }
    let p = lie_on_linop_jet(&JetPoly::constant(x.clone()), a);
    Ok(LinOp::from_jet(a.src.clone(), a.dst.clone(), &p, Slot::Psi))
}

fn fmt_jet_term(i: usize, j: usize) -> String {
    let k = JetKey::EMPTY.with(Slot::Phi, i).with(Slot::Psi, j);
    k.to_string()
}

/// `B(φ, ψ) = Σ c_{i,j} φ⁽ⁱ⁾ ψ⁽ʲ⁾ : F_γ ⊗ F_λ → F_μ`
#[derive(Clone, Debug, PartialEq)]
pub struct BilinOp<S = Scalar> {
    pub gamma: S,
    pub lambda: S,
    pub mu: S,
    coeffs: BTreeMap<(usize, usize), Func<S>>,
    mode: Mode,
}

impl<S: Coeff> BilinOp<S> {
    pub fn new(gamma: S, lambda: S, mu: S, coeffs: impl IntoIterator<Item = ((usize, usize), Func<S>)>, mode: Mode) -> Self {
        let mut m = BTreeMap::new();
        for (k, c) in coeffs {
            if !c.is_zero() {
                m.insert(k, c);
            }
        }
        BilinOp { gamma, lambda, mu, coeffs: m, mode }
    }

    /// Constant-coefficient operator.
    pub fn constant(gamma: S, lambda: S, mu: S, coeffs: impl IntoIterator<Item = ((usize, usize), S)>, mode: Mode) -> Self {
        Self::new(gamma, lambda, mu, coeffs.into_iter().map(|(k, c)| (k, Func::constant(c, mode))), mode)
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), Func<S>> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Func<S> {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| Func::zero(self.mode))
    }

    /// The constant value of `c_{i,j}`, if it is constant.
    pub fn const_coeff(&self, i: usize, j: usize) -> Option<S> {
        self.coeff(i, j).as_constant()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().map(|(i, j)| i + j).max()
    }

    pub fn as_jet(&self) -> JetPoly<S> {
        let mut p = JetPoly::zero(self.mode);
        for ((i, j), c) in &self.coeffs {
            p.add_assign(&JetPoly::monomial(JetKey::EMPTY.with(Slot::Phi, *i).with(Slot::Psi, *j), c.clone()));
        }
        p
    }

    pub fn from_jet(gamma: S, lambda: S, mu: S, p: &JetPoly<S>) -> Self {
        let items = p.terms().map(|(k, c)| {
            assert!(k.order(Slot::X).is_none() && k.order(Slot::Y).is_none(), "bilinear jet with vector-field slots");
            ((k.order(Slot::Phi).unwrap(), k.order(Slot::Psi).unwrap()), c.clone())
        });
        BilinOp::new(gamma, lambda, mu, items.collect::<Vec<_>>(), p.mode())
    }

    pub fn apply(&self, phi: &Density<S>, psi: &Density<S>) -> Result<Density<S>> {
        if phi.weight != self.gamma || psi.weight != self.lambda {
            return Err(CoreError::WeightMismatch(format!(
                "operator expects F_{} ⊗ F_{}, got F_{} ⊗ F_{}",
                self.gamma, self.lambda, phi.weight, psi.weight
            )));
        }
        let r = self.as_jet().substitute_func(Slot::Phi, &phi.coeff)?.substitute_func(Slot::Psi, &psi.coeff)?;
        Ok(Density::new(self.mu.clone(), r.coeff(&JetKey::EMPTY)))
    }

    pub fn add(&self, o: &BilinOp<S>) -> Result<BilinOp<S>> {
        if self.gamma != o.gamma || self.lambda != o.lambda || self.mu != o.mu {
            return Err(CoreError::WeightMismatch("bilinear operators with different weights".into()));
        }
        if self.mode != o.mode {
            return Err(CoreError::ModeMismatch);
        }
        let p = self.as_jet().add(&o.as_jet());
        Ok(BilinOp::from_jet(self.gamma.clone(), self.lambda.clone(), self.mu.clone(), &p))
    }

    pub fn scale(&self, s: &S) -> BilinOp<S> {
        BilinOp::new(
            self.gamma.clone(),
            self.lambda.clone(),
            self.mu.clone(),
            self.coeffs.iter().map(|(k, c)| (*k, c.scale(s))).collect::<Vec<_>>(),
            self.mode,
        )
    }

    /// Whether `o = c·self` for some nonzero scalar `c` (both nonzero,
    /// constant coefficients).
    pub fn proportional_to(&self, o: &BilinOp<S>) -> bool {
        if self.is_zero() || o.is_zero() || self.coeffs.len() != o.coeffs.len() {
            return false;
        }
        let mut ratio: Option<S> = None;
        for (k, c) in &self.coeffs {
            let (Some(a), Some(b)) = (c.as_constant(), o.coeff(k.0, k.1).as_constant()) else { return false };
            if b.is_zero() {
                return false;
            }
            let r = a / b;
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q == r => {}
                _ => return false,
            }
        }
        true
    }

    /// Constant coefficients in `(i, j)` lexicographic order over the given
    /// key list.
    pub fn coefficient_vector(&self, keys: &[(usize, usize)]) -> Option<Vec<S>> {
        keys.iter().map(|(i, j)| self.coeff(*i, *j).as_constant()).collect()
    }
}

impl<S: Coeff> fmt::Display for BilinOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for ((i, j), c) in &self.coeffs {
            let mut cs = c.to_string();
            let compound = cs[1..].contains([' ', '+', '-']) || (c.num_terms() > 1);
            let neg = !compound && cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " − " } else { " + " });
            }
            let term = fmt_jet_term(*i, *j);
            if compound {
                out.push_str(&format!("({cs})·{term}"));
            } else {
                out.push_str(&format!("{cs}·{term}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out} : F_{} ⊗ F_{} → F_{}", self.gamma, self.lambda, self.mu)
    }
}

/// `L^μ_x B(φ,ψ) − B(L^γ_x φ, ψ) − B(φ, L^λ_x ψ)` for a vector field `x`
/// given as a jet polynomial (either the formal slot `X` or a constant).
pub fn invariance_defect_jet<S: Coeff>(x: &JetPoly<S>, b: &BilinOp<S>) -> JetPoly<S> {
    let mode = b.mode();
    let bj = b.as_jet();
    let phi = JetPoly::var(Slot::Phi, 0, mode);
    let psi = JetPoly::var(Slot::Psi, 0, mode);
    let mut d = lie(x, &b.mu, &bj);
    d = d.sub(&bj.substitute(Slot::Phi, &lie(x, &b.gamma, &phi)));
    d = d.sub(&bj.substitute(Slot::Psi, &lie(x, &b.lambda, &psi)));
    d
}

/// Invariance defect of `b` under a concrete vector field, or under the
/// formal field `X` when `x` is `None`.
pub fn invariance_defect<S: Coeff>(x: Option<&Func<S>>, b: &BilinOp<S>) -> Result<JetPoly<S>> {
    let xj = match x {
        Some(f) => {
            if f.mode() != b.mode() {
                return Err(CoreError::ModeMismatch);
            }
            JetPoly::constant(f.clone())
        }
        None => JetPoly::var(Slot::X, 0, b.mode()),
    };
    Ok(invariance_defect_jet(&xj, b))
}

/// `φ·ψ : F_γ ⊗ F_λ → F_{γ+λ}`
pub fn product<S: Coeff>(gamma: S, lambda: S, mode: Mode) -> BilinOp<S> {
    let mu = gamma.clone() + lambda.clone();
    BilinOp::constant(gamma, lambda, mu, [((0, 0), S::one())], mode)
}

/// `γφψ′ − λφ′ψ : F_γ ⊗ F_λ → F_{γ+λ+1}`
pub fn poisson<S: Coeff>(gamma: S, lambda: S, mode: Mode) -> BilinOp<S> {
    let mu = gamma.clone() + lambda.clone() + S::one();
    BilinOp::constant(gamma.clone(), lambda.clone(), mu, [((0, 1), gamma), ((1, 0), -lambda)], mode)
}

/// The third-order operator `F_{-2/3} ⊗ F_{-2/3} → F_{5/3}`,
/// `φψ‴ − φ‴ψ + (3/2)(φ′ψ″ − φ″ψ′)`.
pub fn grozman<S: Coeff>(mode: Mode) -> BilinOp<S> {
    grozman_with_middle_sign(mode, 1)
}

/// `φψ‴ − φ‴ψ + sign·(3/2)(φ′ψ″ − φ″ψ′)`; only `sign = 1` is invariant.
pub fn grozman_with_middle_sign<S: Coeff>(mode: Mode, sign: i64) -> BilinOp<S> {
    let w = S::from_rat(&rat(-2, 3));
    let r = |n, d| S::from_rat(&rat(n, d));
    BilinOp::constant(
        w.clone(),
        w,
        r(5, 3),
        [((0, 3), r(1, 1)), ((3, 0), r(-1, 1)), ((1, 2), r(3 * sign, 2)), ((2, 1), r(-3 * sign, 2))],
        mode,
    )
}

fn binomial(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for t in 0..k {
        r = r * (n - t) as i64 / (t + 1) as i64;
    }
    r
}

/// Order-`k` transvectant `F_γ ⊗ F_λ → F_{γ+λ+k}` with cleared
/// denominators:
/// `c_{i,k−i} = (−1)^i C(k,i) ∏_{p=i}^{k−1}(2γ+p) ∏_{q=k−i}^{k−1}(2λ+q)`.
///
/// The flag is set when some factor `2γ+p` or `2λ+q` (`0 ≤ p, q < k`)
/// vanishes, i.e. at resonant weights where the cleared operator may
/// degenerate.
pub fn transvectant<S: Coeff>(k: usize, gamma: S, lambda: S, mode: Mode) -> (BilinOp<S>, bool) {
    let two = S::from_i64(2);
    let fg: Vec<S> = (0..k).map(|p| two.clone() * gamma.clone() + S::from_i64(p as i64)).collect();
    let fl: Vec<S> = (0..k).map(|q| two.clone() * lambda.clone() + S::from_i64(q as i64)).collect();
    let resonant = fg.iter().chain(fl.iter()).any(|f| f.is_zero());
    let mut coeffs = Vec::new();
    for i in 0..=k {
        let j = k - i;
        let mut c = S::from_i64(if i % 2 == 0 { 1 } else { -1 } * binomial(k, i));
        for f in &fg[i..] {
            c = c * f.clone();
        }
        for f in &fl[j..] {
            c = c * f.clone();
        }
        coeffs.push(((i, j), c));
    }
    let mu = gamma.clone() + lambda.clone() + S::from_i64(k as i64);
    (BilinOp::constant(gamma, lambda, mu, coeffs, mode), resonant)
}

/// Building blocks of the named invariant operators: an inner product or
/// Poisson bracket, optional de Rham differentials on either argument and
/// an optional outer differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    pub poisson: bool,
    pub d_phi: bool,
    pub d_psi: bool,
    pub d_out: bool,
}

impl Composition {
    pub fn all() -> Vec<Composition> {
        let mut v = Vec::new();
        for poisson in [false, true] {
            for d_phi in [false, true] {
                for d_psi in [false, true] {
                    for d_out in [false, true] {
                        v.push(Composition { poisson, d_phi, d_psi, d_out });
                    }
                }
            }
        }
        v
    }

    pub fn order(&self) -> usize {
        self.poisson as usize + self.d_phi as usize + self.d_psi as usize + self.d_out as usize
    }

    pub fn name(&self) -> String {
        let a = if self.d_phi { "dφ" } else { "φ" };
        let b = if self.d_psi { "dψ" } else { "ψ" };
        let inner = if self.poisson { format!("{{{a},{b}}}") } else { format!("{a}·{b}") };
        if self.d_out {
            if self.poisson {
                format!("d{inner}")
            } else {
                format!("d({inner})")
            }
        } else {
            inner
        }
    }

    /// The operator at weights `(γ, λ)`, if the weight conditions for every
    /// differential hold and the result is nonzero.
    pub fn build<S: Coeff>(&self, gamma: &S, lambda: &S, mode: Mode) -> Option<BilinOp<S>> {
        if (self.d_phi && !gamma.is_zero()) || (self.d_psi && !lambda.is_zero()) {
            return None;
        }
        let g_in = if self.d_phi { S::one() } else { gamma.clone() };
        let l_in = if self.d_psi { S::one() } else { lambda.clone() };
        let inner = if self.poisson { poisson(g_in, l_in, mode) } else { product(g_in, l_in, mode) };
        let mut p = inner.as_jet();
        if self.d_phi {
            p = p.substitute(Slot::Phi, &JetPoly::var(Slot::Phi, 1, mode));
        }
        if self.d_psi {
            p = p.substitute(Slot::Psi, &JetPoly::var(Slot::Psi, 1, mode));
        }
        let mut mu = inner.mu.clone();
        if self.d_out {
            if !mu.is_zero() {
                return None;
            }
            p = p.deriv();
            mu = S::one();
        }
        if p.is_zero() {
            return None;
        }
        Some(BilinOp::from_jet(gamma.clone(), lambda.clone(), mu, &p))
    }
}

/// Every nonzero named composition of order `k` at weights `(γ, λ)`, plus
/// the Grozman operator at its weights.
pub fn named_operators<S: Coeff>(k: usize, gamma: &S, lambda: &S, mode: Mode) -> Vec<(String, BilinOp<S>)> {
    let mut out: Vec<(String, BilinOp<S>)> = Composition::all()
        .into_iter()
        .filter(|c| c.order() == k)
        .filter_map(|c| c.build(gamma, lambda, mode).map(|b| (c.name(), b)))
        .collect();
    let w = S::from_rat(&rat(-2, 3));
    if k == 3 && *gamma == w && *lambda == w {
        out.push(("grozman".into(), grozman(mode)));
    }
    out
}
