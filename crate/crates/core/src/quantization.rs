//! Equivariant symbol and quantization maps `F_{δ−k} → D^k_{λ,μ}`.
//!
//! A map `a ↦ Σ_j β_j a⁽ʲ⁾ d^{k−j}/dx^{k−j}` is the bilinear operator
//! `(a, ψ) ↦ Σ_j β_j a⁽ʲ⁾ψ⁽ᵏ⁻ʲ⁾ : F_{δ−k} ⊗ F_λ → F_μ`, and equivariance is
//! its invariance.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::corealg::linalg::rref;
use crate::corealg::{factor, fmt_rat, real_norm, Coeff, Field, Func, FuncMono, GaussRat, Mode, Poly, Rat};
use crate::diffops::{invariance_defect_jet, BilinOp};
use crate::error::{CoreError, Result};
use crate::invariance::{
    acting_fields, bilinear_keys, gauss, invariance_system, solve_exact, solve_invariants, CoeffMode, Exceptional, ParamMatrix, SolveReport,
};
use crate::jets::{JetPoly, Slot};
use crate::liealg::{AlgebraName, Subalgebra};
use crate::Scalar;

/// `a ↦ Σ_j β_j a⁽ʲ⁾ d^{k−j}/dx^{k−j} : F_{δ−k} → D^k_{λ,μ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantMap<S = Scalar> {
    pub order: usize,
    pub lambda: S,
    pub mu: S,
    pub beta: Vec<S>,
    pub mode: Mode,
}

impl<S: Coeff> QuantMap<S> {
    pub fn delta(&self) -> S {
        self.mu.clone() - self.lambda.clone()
    }

    /// Weight of the symbol space, `δ − k`.
    pub fn source(&self) -> S {
        self.delta() - S::from_i64(self.order as i64)
    }

    pub fn as_bilinear(&self) -> BilinOp<S> {
        let k = self.order;
        BilinOp::constant(
            self.source(),
            self.lambda.clone(),
            self.mu.clone(),
            self.beta.iter().enumerate().map(|(j, b)| ((j, k - j), b.clone())),
            self.mode,
        )
    }
}

impl<S: Coeff> fmt::Display for QuantMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.beta.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `β = (1, λ/(1−δ))`.
pub fn symbol_map_order1<S: Coeff>(lambda: &S, delta: &S, mode: Mode) -> Result<QuantMap<S>> {
    let d = S::one() - delta.clone();
    if d.is_zero() {
        return Err(CoreError::Pole("first-order symbol map has a pole at δ = 1".into()));
    }
    Ok(QuantMap { order: 1, lambda: lambda.clone(), mu: lambda.clone() + delta.clone(), beta: vec![S::one(), lambda.clone() / d], mode })
}

/// `β = (1, (1+2λ)/(2−δ), λ(1+2λ)/((2−δ)(3−2δ)))`.
pub fn symbol_map_order2<S: Coeff>(lambda: &S, delta: &S, mode: Mode) -> Result<QuantMap<S>> {
    let two = S::from_i64(2);
    let d1 = two.clone() - delta.clone();
    let d2 = S::from_i64(3) - two.clone() * delta.clone();
    if d1.is_zero() {
        return Err(CoreError::Pole("second-order symbol map has a pole at δ = 2".into()));
    }
    if d2.is_zero() {
        return Err(CoreError::Pole("second-order symbol map has a pole at δ = 3/2".into()));
    }
    let n = S::one() + two * lambda.clone();
    Ok(QuantMap {
        order: 2,
        lambda: lambda.clone(),
        mu: lambda.clone() + delta.clone(),
        beta: vec![S::one(), n.clone() / d1.clone(), lambda.clone() * n / (d1 * d2)],
        mode,
    })
}

/// Equivariance defect of a symbol map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub algebra: String,
    pub equivariant: bool,
    /// `(generator, defect)`; the defect is `L^{λ,μ}_X ∘ Q − Q ∘ L^{δ−k}_X`
    /// written as a jet in `X`, the symbol `a` (shown as `φ`) and `ψ`.
    pub defects: Vec<(String, String)>,
    /// Highest derivative of `X` occurring in a defect.
    pub max_x_order: Option<usize>,
}

/// Equivariance of `q` under `g` (per generator) or under the formal field.
pub fn check_equivariance<S: Coeff>(q: &QuantMap<S>, g: &Subalgebra) -> Result<EquivarianceReport> {
    if g.mode() != q.mode {
        return Err(CoreError::ModeMismatch);
    }
    let b = q.as_bilinear();
    let mut defects = Vec::new();
    let mut max_x_order: Option<usize> = None;
    for (gi, x) in acting_fields::<S>(g) {
        let d = invariance_defect_jet(&x, &b);
        if d.is_zero() {
            continue;
        }
        if let Some(o) = d.max_order(Slot::X) {
            max_x_order = Some(max_x_order.map_or(o, |m| m.max(o)));
        }
        let label = match gi {
            Some(i) => g.labels()[i].clone(),
            None => "X".into(),
        };
        defects.push((label, d.to_string()));
    }
    Ok(EquivarianceReport { algebra: g.name().to_string(), equivariant: defects.is_empty(), defects, max_x_order })
}

/// The equivariance defect under the formal field, as a jet.
pub fn formal_defect<S: Coeff>(q: &QuantMap<S>) -> JetPoly<S> {
    invariance_defect_jet(&JetPoly::var(Slot::X, 0, q.mode), &q.as_bilinear())
}

/// System for the homogeneous ansatz `β_0, …, β_k`.
pub fn symbol_system<S: Coeff>(k: usize, lambda: &S, mu: &S, g: &Subalgebra) -> ParamMatrix<S> {
    let mode = g.mode();
    let gamma = mu.clone() - lambda.clone() - S::from_i64(k as i64);
    let fields = acting_fields::<S>(g);
    let mut columns = Vec::new();
    let mut labels = Vec::new();
    for j in 0..=k {
        let b = BilinOp::constant(gamma.clone(), lambda.clone(), mu.clone(), [((j, k - j), S::one())], mode);
        columns.push(fields.iter().map(|(gi, x)| (*gi, invariance_defect_jet(x, &b))).collect());
        labels.push(format!("β{j}"));
    }
    ParamMatrix::from_columns(&columns, labels)
}

/// Solution of the symbol-map equivariance conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolSolve {
    pub report: SolveReport<Scalar>,
    /// The solution with `β₀ = 1` when the space is one-dimensional and
    /// admits that normalization.
    pub normalized: Option<Vec<Scalar>>,
    /// Irreducible factors of the denominators of `normalized`.
    pub poles: Vec<Poly<Rat>>,
}

impl SymbolSolve {
    /// Exceptional factors and poles together.
    pub fn exceptional_factors(&self) -> Vec<Poly<Rat>> {
        let mut v: Vec<Poly<Rat>> = self.report.exceptional.iter().map(|e| e.poly.clone()).collect();
        for p in &self.poles {
            if !v.contains(p) {
                v.push(p.clone());
            }
        }
        v
    }
}

fn irreducible_factors(p: &Poly<GaussRat>) -> Vec<Poly<Rat>> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    factor(&real_norm(p)).factors.into_iter().map(|(f, _)| f).collect()
}

/// All `β` making the order-`k` map `g`-equivariant. Weights may involve
/// the formal parameter.
pub fn solve_symbol_map(k: usize, lambda: &Scalar, mu: &Scalar, g: &Subalgebra) -> Result<SymbolSolve> {
    if k > 4 {
        return Err(CoreError::Domain(format!("symbol maps are solved up to order 4, got {k}")));
    }
    let m = symbol_system(k, lambda, mu, g);
    let report = solve_invariants(&m);
    let mut normalized = None;
    let mut poles = Vec::new();
    if report.generic_dim == 1 {
        let v = &report.basis[0];
        if !v[0].is_zero() {
            let n: Vec<Scalar> = v.iter().map(|x| x.clone() / v[0].clone()).collect();
            for x in &n {
                for f in irreducible_factors(x.den()) {
                    if !poles.contains(&f) {
                        poles.push(f);
                    }
                }
            }
            normalized = Some(n);
        }
    }
    Ok(SymbolSolve { report, normalized, poles })
}

/// Dimension of the space of equivariant maps whose coefficients range over
/// the span of `monos` instead of constants.
pub fn function_coefficient_dim(k: usize, lambda: &Rat, mu: &Rat, g: &Subalgebra, monos: &[FuncMono]) -> usize {
    let mode = g.mode();
    let (l, m) = (gauss(lambda), gauss(mu));
    let gamma = m.clone() - l.clone() - GaussRat::from_i64(k as i64);
    let fields = acting_fields::<GaussRat>(g);
    let mut columns = Vec::new();
    let mut labels = Vec::new();
    for j in 0..=k {
        for mono in monos {
            let f = Func::term(mono.clone(), GaussRat::from_i64(1), mode);
            let b = BilinOp::new(gamma.clone(), l.clone(), m.clone(), [((j, k - j), f)], mode);
            columns.push(fields.iter().map(|(gi, x)| (*gi, invariance_defect_jet(x, &b))).collect());
            labels.push(format!("β{j}[{mono}]"));
        }
    }
    solve_exact(&ParamMatrix::from_columns(&columns, labels)).generic_dim
}

/// One summand `F_{δ−m} → D^m` of the block-triangular ansatz.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub order: usize,
    /// Weight `δ − m` of the summand.
    pub source: String,
    pub g_dim: usize,
    pub vect_dim: usize,
    /// The `g`-equivariant and the Vect-equivariant spaces coincide.
    pub equal: bool,
    /// Some `g`-equivariant map has principal part `a·d^m/dx^m`.
    pub g_principal: bool,
    pub vect_principal: bool,
    /// A `g`-equivariant map with unit principal part, when one exists.
    pub map: Option<String>,
    /// `g`-equivariant maps not equivariant under Vect, when the spaces
    /// differ.
    pub extra: Vec<String>,
}

/// Existence of the full quantization `F_{δ−2} ⊕ F_{δ−1} ⊕ F_δ → D²_{λ,μ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullQuantReport {
    pub algebra: String,
    pub lambda: String,
    pub mu: String,
    pub exists: bool,
    pub vect_exists: bool,
    /// Every block has identical `g`- and Vect-equivariant spaces.
    pub spaces_equal: bool,
    pub blocks: Vec<BlockReport>,
    pub obstruction: Option<String>,
    /// `μ = 1, λ ≠ −1` or `μ ≠ 2, λ = 0`.
    pub predicate: bool,
    /// The solver disagrees with the predicate.
    pub flagged: bool,
}

/// `(μ = 1 and λ ≠ −1) or (μ ≠ 2 and λ = 0)`.
pub fn branch_predicate(lambda: &Rat, mu: &Rat) -> bool {
    let one = Rat::from_integer(1.into());
    let two = Rat::from_integer(2.into());
    (mu == &one && lambda != &(-one.clone())) || (mu != &two && lambda == &Rat::from_integer(0.into()))
}

fn canonical(v: &[Vec<GaussRat>]) -> Vec<Vec<GaussRat>> {
    if v.is_empty() {
        Vec::new()
    } else {
        rref(v.to_vec())
    }
}

fn in_span(span: &[Vec<GaussRat>], v: &[GaussRat]) -> bool {
    let mut all = span.to_vec();
    all.push(v.to_vec());
    canonical(&all).len() == canonical(span).len()
}

/// Solves the block ansatz for `g`- and for Vect-equivariance and compares
/// the two solution spaces block by block.
pub fn full_quant_exists(lambda: &Rat, mu: &Rat, g: &Subalgebra) -> Result<FullQuantReport> {
    if g.is_formal() {
        return Err(CoreError::Domain("full quantization compares a finite algebra with Vect".into()));
    }
    let mode = g.mode();
    let vect = Subalgebra::new(AlgebraName::VectFormal, mode)?;
    let delta = mu.clone() - lambda.clone();
    let (l, m) = (gauss(lambda), gauss(mu));
    let mut blocks = Vec::new();
    let mut obstruction = None;
    for order in 0..=2usize {
        let src = delta.clone() - Rat::from_integer((order as i64).into());
        let s = gauss(&src);
        let keys = bilinear_keys(order);
        let lead = keys.iter().position(|&k| k == (0, order)).unwrap_or(0);
        let gsp = canonical(&solve_exact(&invariance_system(order, &s, &l, &m, g, &CoeffMode::Constants)).basis);
        let vsp = canonical(&solve_exact(&invariance_system(order, &s, &l, &m, &vect, &CoeffMode::Constants)).basis);
        let principal = |sp: &[Vec<GaussRat>]| sp.iter().any(|v| !v[lead].is_zero());
        let render = |v: &[GaussRat]| {
            let op = BilinOp::constant(s.clone(), l.clone(), m.clone(), keys.iter().cloned().zip(v.iter().cloned()), mode);
            op.to_string().split(" : ").next().unwrap_or("").to_string()
        };
        let map = gsp.iter().find(|v| !v[lead].is_zero()).map(|v| {
            let n: Vec<GaussRat> = v.iter().map(|x| x.clone() / v[lead].clone()).collect();
            render(&n)
        });
        let extra = gsp.iter().filter(|v| !in_span(&vsp, v)).map(|v| render(v)).collect();
        let g_principal = principal(&gsp);
        if !g_principal && obstruction.is_none() {
            obstruction = Some(format!(
                "no {}-equivariant map F_{} → D^{order} with principal part a·d^{order}/dx^{order} ({}-dimensional solution space, all with vanishing principal coefficient)",
                g.name(),
                fmt_rat(&src),
                gsp.len()
            ));
        }
        blocks.push(BlockReport {
            order,
            source: fmt_rat(&src),
            g_dim: gsp.len(),
            vect_dim: vsp.len(),
            equal: gsp == vsp,
            g_principal,
            vect_principal: principal(&vsp),
            map,
            extra,
        });
    }
    let exists = blocks.iter().all(|b| b.g_principal);
    let vect_exists = blocks.iter().all(|b| b.vect_principal);
    let predicate = branch_predicate(lambda, mu);
    Ok(FullQuantReport {
        algebra: g.name().to_string(),
        lambda: fmt_rat(lambda),
        mu: fmt_rat(mu),
        exists,
        vect_exists,
        spaces_equal: blocks.iter().all(|b| b.equal),
        blocks,
        obstruction,
        predicate,
        flagged: predicate != exists,
    })
}

/// Symbol-map exceptional factors rendered in the variable `var`.
pub fn render_factors(fs: &[Poly<Rat>], var: &str) -> Vec<String> {
    fs.iter().map(|f| f.render(var)).collect()
}

/// Exceptional entries as rendered strings.
pub fn render_exceptional(es: &[Exceptional], var: &str) -> Vec<String> {
    es.iter().map(|e| e.render(var)).collect()
}
