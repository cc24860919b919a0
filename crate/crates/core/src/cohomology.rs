//! First cohomology with coefficients in differential operators
//! `F_λ → F_μ`: the Chevalley–Eilenberg complex of a finite-dimensional
//! subalgebra, the jet-formal complex of differential cochains on the full
//! algebra of vector fields, and the relative complex.
//!
//! Infinite-dimensional cochain spaces are cut down to finite windows of
//! operator order, Laurent degree and frequency. Within a window `W`,
//! `H¹_W = dim Z¹_W − dim(B¹ ∩ C_W)`, where the coboundaries are taken
//! from a strictly larger window of operators and intersected with `W`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::corealg::linalg::{rank_at_root, rref, specialize};
use crate::corealg::{fmt_rat, Coeff, Func, FuncMono, GaussRat, LinearSystem, Mode, Poly, Rat};
use crate::diffops::{invariance_defect_jet, lie_on_linop_jet, BilinOp, LinOp};
use crate::error::{CoreError, Result};
use crate::invariance::{bilinear_keys, candidate_factors, gauss, Exceptional};
use crate::jets::{bracket, lie, JetKey, JetPoly, Slot};
use crate::liealg::{AlgebraName, Subalgebra};
use crate::Scalar;

/// Window sizes: operator order `N`, Laurent degree `D`, frequency bound `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub order: usize,
    pub degree: usize,
    pub freq: usize,
}

impl Truncation {
    pub fn new(order: usize, degree: usize, freq: usize) -> Self {
        Truncation { order, degree, freq }
    }

    /// `N = max(0, ⌈δ⌉) + 3`, `D = F = 6`.
    pub fn for_delta(delta: &Rat) -> Self {
        Truncation::new(ceil_nonneg(delta) + 3, 6, 6)
    }

    pub fn grow(&self, by: usize) -> Self {
        Truncation::new(self.order + by, self.degree + by, self.freq + by)
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={},D={},F={}", self.order, self.degree, self.freq)
    }
}

fn ceil_nonneg(r: &Rat) -> usize {
    let c = r.ceil().to_integer();
    usize::try_from(c).unwrap_or(0)
}

/// A 1-cochain with values in `Hom_diff(F_λ, F_μ)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cochain1<S = Scalar> {
    /// Values on the generators of a finite-dimensional algebra.
    Finite(Vec<LinOp<S>>),
    /// `c(X)ψ = Σ c_{i,j} X⁽ⁱ⁾ψ⁽ʲ⁾`, stored with the vector field in the
    /// first slot of a bilinear operator `F_{−1} ⊗ F_λ → F_μ`.
    Differential(BilinOp<S>),
}

impl<S: Coeff> Cochain1<S> {
    /// Cocycle defect: one jet in `ψ` per generator pair `i < j`, or a
    /// single jet in `X, Y, ψ`.
    pub fn defect(&self, g: Option<&Subalgebra>) -> Result<Vec<JetPoly<S>>> {
        match self {
            Cochain1::Differential(c) => Ok(vec![cocycle_defect_formal(c)]),
            Cochain1::Finite(v) => {
                let g = g.ok_or_else(|| CoreError::Domain("finite cochain needs its algebra".into()))?;
                finite_cocycle_defect(g, v)
            }
        }
    }

    pub fn is_cocycle(&self, g: Option<&Subalgebra>) -> Result<bool> {
        Ok(self.defect(g)?.iter().all(|d| d.is_zero()))
    }
}

impl<S: Coeff> fmt::Display for Cochain1<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cochain1::Differential(c) => write!(f, "{}", cochain_jet(c, Slot::X)),
            Cochain1::Finite(v) => {
                let parts: Vec<String> = v.iter().enumerate().map(|(i, a)| format!("e{i} ↦ {}", a.as_jet(Slot::Psi))).collect();
                write!(f, "{}", parts.join("; "))
            }
        }
    }
}

/// `c(X)ψ` as a jet with the vector field in `slot`.
pub fn cochain_jet<S: Coeff>(c: &BilinOp<S>, slot: Slot) -> JetPoly<S> {
    c.as_jet().rename(Slot::Phi, slot)
}

/// Differential cochain from a jet in `X` and `ψ`.
pub fn cochain_from_jet<S: Coeff>(lambda: S, mu: S, p: &JetPoly<S>) -> BilinOp<S> {
    BilinOp::from_jet(-S::one(), lambda, mu, &p.rename(Slot::X, Slot::Phi))
}

/// `L^μ_x ∘ A − A ∘ L^λ_x` for an operator given as a jet linear in `ψ`.
fn act_on_op<S: Coeff>(x: &JetPoly<S>, lambda: &S, mu: &S, a: &JetPoly<S>) -> JetPoly<S> {
    let psi = JetPoly::var(Slot::Psi, 0, a.mode());
    lie(x, mu, a).sub(&a.substitute(Slot::Psi, &lie(x, lambda, &psi)))
}

/// `δA(X) = L_X A`.
pub fn coboundary<S: Coeff>(a: &LinOp<S>) -> BilinOp<S> {
    let p = lie_on_linop_jet(&JetPoly::var(Slot::X, 0, a.mode()), a);
    cochain_from_jet(a.src.clone(), a.dst.clone(), &p)
}

/// `δA` checked against the weights of the target complex.
pub fn coboundary_checked<S: Coeff>(a: &LinOp<S>, lambda: &S, mu: &S) -> Result<BilinOp<S>> {
    if &a.src != lambda || &a.dst != mu {
        return Err(CoreError::WeightMismatch(format!(
            "operator F_{} → F_{} in a complex with values in Hom(F_{}, F_{})",
            a.src, a.dst, lambda, mu
        )));
    }
    Ok(coboundary(a))
}

/// `δA` on the generators of `g`.
pub fn coboundary_finite<S: Coeff>(g: &Subalgebra, a: &LinOp<S>) -> Result<Vec<LinOp<S>>> {
    if g.is_formal() {
        return Err(CoreError::Domain("use the differential coboundary for the formal algebra".into()));
    }
    (0..g.dim()).map(|k| crate::diffops::lie_on_linop(&g.generator::<S>(k), a)).collect()
}

/// `L_X c(Y) − L_Y c(X) − c([X,Y])` as a jet in `X, Y, ψ`.
pub fn cocycle_defect_formal<S: Coeff>(c: &BilinOp<S>) -> JetPoly<S> {
    let mode = c.mode();
    let x = JetPoly::var(Slot::X, 0, mode);
    let y = JetPoly::var(Slot::Y, 0, mode);
    let cx = cochain_jet(c, Slot::X);
    let cy = cochain_jet(c, Slot::Y);
    let cxy = c.as_jet().substitute(Slot::Phi, &bracket(&x, &y));
    act_on_op(&x, &c.lambda, &c.mu, &cy).sub(&act_on_op(&y, &c.lambda, &c.mu, &cx)).sub(&cxy)
}

/// The cocycle defect evaluated on a concrete pair of vector fields.
pub fn cocycle_defect_pair<S: Coeff>(c: &BilinOp<S>, x: &Func<S>, y: &Func<S>) -> Result<JetPoly<S>> {
    cocycle_defect_formal(c).substitute_func(Slot::X, x)?.substitute_func(Slot::Y, y)
}

/// Cocycle defect of a cochain given by its values on the generators of `g`,
/// one jet in `ψ` per pair `i < j`.
pub fn finite_cocycle_defect<S: Coeff>(g: &Subalgebra, values: &[LinOp<S>]) -> Result<Vec<JetPoly<S>>> {
    if g.is_formal() || values.len() != g.dim() {
        return Err(CoreError::Domain(format!("expected {} generator values, got {}", g.dim(), values.len())));
    }
    let jets: Vec<JetPoly<S>> = values.iter().map(|a| a.as_jet(Slot::Psi)).collect();
    let (lambda, mu) = match values.first() {
        Some(a) => (a.src.clone(), a.dst.clone()),
        None => return Ok(Vec::new()),
    };
    let sc = g.structure_constants();
    let mut out = Vec::new();
    for i in 0..g.dim() {
        for j in (i + 1)..g.dim() {
            let xi = JetPoly::constant(g.generator::<S>(i));
            let xj = JetPoly::constant(g.generator::<S>(j));
            let mut d = act_on_op(&xi, &lambda, &mu, &jets[j]).sub(&act_on_op(&xj, &lambda, &mu, &jets[i]));
            for (k, jk) in jets.iter().enumerate() {
                let s = &sc[i][j][k];
                if !Zero::is_zero(s) {
                    d = d.sub(&jk.scale(&S::from_gauss(s)));
                }
            }
            out.push(d);
        }
    }
    Ok(out)
}

/// Coefficient monomials of the window for cochains of `g` (or of the full
/// algebra when `g` is `None`).
pub fn window_monos(g: Option<&Subalgebra>, mode: Mode, degree: usize, freq: usize) -> Vec<FuncMono> {
    let scale = g.map_or(1, |g| g.scale());
    let name = g.map(|g| g.name());
    let base: Option<GaussRat> = match (mode, name) {
        (Mode::Circle, _) => Some(GaussRat::imag(Rat::from_integer(scale.into()))),
        (Mode::Line, Some(AlgebraName::K1)) => Some(GaussRat::imag(Rat::from_integer(scale.into()))),
        (Mode::Line, Some(AlgebraName::K2)) | (Mode::Line, Some(AlgebraName::H0)) => Some(GaussRat::real(Rat::from_integer(scale.into()))),
        _ => None,
    };
    let d = degree as i64;
    let degrees: Vec<i64> = match (mode, name) {
        (Mode::Circle, _) => vec![0],
        (Mode::Line, Some(AlgebraName::L(n))) if n >= 1 => (-d..=d).collect(),
        _ => (0..=d).collect(),
    };
    let freqs: Vec<GaussRat> = match base {
        None => vec![GaussRat::real(Rat::from_integer(0.into()))],
        Some(b) => (-(freq as i64)..=freq as i64).map(|m| b.clone() * GaussRat::real(Rat::from_integer(m.into()))).collect(),
    };
    let mut out = Vec::new();
    for a in &degrees {
        for f in &freqs {
            out.push(FuncMono::new(*a, f.clone()));
        }
    }
    out
}

type Label = (u32, JetKey, FuncMono);

fn entries<S: Coeff>(tag: u32, p: &JetPoly<S>, out: &mut Vec<(Label, S)>) {
    for (k, f) in p.terms() {
        for (m, v) in f.terms() {
            out.push(((tag, *k, m.clone()), v.clone()));
        }
    }
}

fn assemble<S: Coeff>(columns: &[Vec<(Label, S)>]) -> LinearSystem<S> {
    let mut rows: BTreeMap<&Label, BTreeMap<usize, S>> = BTreeMap::new();
    for (c, col) in columns.iter().enumerate() {
        for (l, v) in col {
            let row = rows.entry(l).or_default();
            let cur = row.remove(&c).unwrap_or_else(S::zero) + v.clone();
            if !cur.is_zero() {
                row.insert(c, cur);
            }
        }
    }
    let mut sys = LinearSystem::new(columns.len());
    for (_, r) in rows {
        if !r.is_empty() {
            sys.push_sparse(r);
        }
    }
    sys
}

/// A truncated complex `C⁰ → C¹_W → C²`.
struct Complex<S> {
    atoms: Vec<Label>,
    /// Columns: cochain atoms; rows: cocycle and side conditions.
    z: LinearSystem<S>,
    /// Columns: operator atoms; rows: conditions on `A` and the components of
    /// `δA` outside the window.
    b_out: LinearSystem<S>,
    /// As `b_out` plus the components of `δA` inside the window.
    b_full: LinearSystem<S>,
    /// Window coordinates of `δA` for each operator atom.
    b_in: Vec<Vec<(usize, S)>>,
}

struct ComplexBuilder<S> {
    atoms: Vec<Label>,
    index: HashMap<Label, usize>,
    z_cols: Vec<Vec<(Label, S)>>,
    a_cons: Vec<Vec<(Label, S)>>,
    a_img: Vec<Vec<(Label, S)>>,
}

const IMAGE_TAG: u32 = 1 << 20;

impl<S: Coeff> ComplexBuilder<S> {
    fn new(atoms: Vec<Label>) -> Self {
        let index = atoms.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        ComplexBuilder { atoms, index, z_cols: Vec::new(), a_cons: Vec::new(), a_img: Vec::new() }
    }

    fn push_cochain(&mut self, conditions: &[(u32, JetPoly<S>)]) {
        let mut col = Vec::new();
        for (t, p) in conditions {
            entries(*t, p, &mut col);
        }
        self.z_cols.push(col);
    }

    fn push_operator(&mut self, conditions: &[(u32, JetPoly<S>)], image: &[(u32, JetPoly<S>)]) {
        let mut cons = Vec::new();
        for (t, p) in conditions {
            entries(*t, p, &mut cons);
        }
        let mut img = Vec::new();
        for (t, p) in image {
            entries(*t, p, &mut img);
        }
        self.a_cons.push(cons);
        self.a_img.push(img);
    }

    fn build(self) -> Complex<S> {
        let z = assemble(&self.z_cols);
        let mut out_cols = Vec::new();
        let mut full_cols = Vec::new();
        let mut b_in = Vec::new();
        for (cons, img) in self.a_cons.iter().zip(&self.a_img) {
            let mut o = cons.clone();
            let mut f = cons.clone();
            let mut inside: BTreeMap<usize, S> = BTreeMap::new();
            for (l, v) in img {
                let tagged = (l.0 | IMAGE_TAG, l.1, l.2.clone());
                f.push((tagged.clone(), v.clone()));
                match self.index.get(l) {
                    Some(&i) => {
                        let cur = inside.remove(&i).unwrap_or_else(S::zero) + v.clone();
                        if !cur.is_zero() {
                            inside.insert(i, cur);
                        }
                    }
                    None => o.push((tagged, v.clone())),
                }
            }
            out_cols.push(o);
            full_cols.push(f);
            b_in.push(inside.into_iter().collect());
        }
        Complex { atoms: self.atoms, z, b_out: assemble(&out_cols), b_full: assemble(&full_cols), b_in }
    }
}

/// Cohomology of one truncated complex over a concrete field.
struct Level<S> {
    cocycles: usize,
    coboundaries: usize,
    dim: usize,
    /// Representatives in window coordinates.
    reps: Vec<Vec<S>>,
}

fn rank<S: Coeff>(vs: &[Vec<S>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        rref(vs.to_vec()).len()
    }
}

impl<S: Coeff> Complex<S> {
    fn solve(&self) -> Level<S> {
        let ze = self.z.eliminate();
        let bo = self.b_out.eliminate();
        let bf = self.b_full.nullity();
        let cocycles = ze.nullity();
        let coboundaries = bo.nullity() - bf;
        let n = self.atoms.len();
        let mut bvecs: Vec<Vec<S>> = bo
            .nullspace()
            .into_iter()
            .map(|v| {
                let mut w = vec![S::zero(); n];
                for (a, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (i, y) in &self.b_in[a] {
                        w[*i] = w[*i].clone() + x.clone() * y.clone();
                    }
                }
                w
            })
            .collect();
        bvecs = if bvecs.is_empty() { bvecs } else { rref(bvecs) };
        debug_assert_eq!(bvecs.len(), coboundaries);
        let mut span = bvecs;
        let mut reps = Vec::new();
        for z in ze.canonical_nullspace() {
            let r0 = span.len();
            let mut trial = span.clone();
            trial.push(z.clone());
            if rank(&trial) > r0 {
                span = rref(trial);
                reps.push(z);
            }
        }
        Level { cocycles, coboundaries, dim: cocycles - coboundaries, reps }
    }

    /// Whether the given window vectors are cocycles independent modulo the
    /// window coboundaries.
    fn independent_classes(&self, vs: &[Vec<S>]) -> bool {
        let lvl = self.solve();
        let ze = self.z.eliminate();
        if !vs.iter().all(|v| ze.annihilates(v)) {
            return false;
        }
        let bo = self.b_out.eliminate();
        let mut all: Vec<Vec<S>> = Vec::new();
        for v in bo.nullspace() {
            let mut w = vec![S::zero(); self.atoms.len()];
            for (a, x) in v.iter().enumerate() {
                for (i, y) in &self.b_in[a] {
                    w[*i] = w[*i].clone() + x.clone() * y.clone();
                }
            }
            all.push(w);
        }
        let base = rank(&all);
        debug_assert_eq!(base, lvl.coboundaries);
        all.extend(vs.iter().cloned());
        rank(&all) == base + vs.len()
    }
}

impl Complex<Scalar> {
    /// Irreducible factors at which the truncated dimension may change, with
    /// the dimension at their roots.
    fn exceptional(&self, generic: usize) -> Vec<Exceptional> {
        let mut factors: Vec<Poly<Rat>> = Vec::new();
        for sys in [&self.z, &self.b_out, &self.b_full] {
            let e = sys.eliminate();
            for f in candidate_factors(sys, e.pivot_values()) {
                if !factors.contains(&f) {
                    factors.push(f);
                }
            }
        }
        factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.to_string().cmp(&b.to_string())));
        let mut out = Vec::new();
        for f in factors {
            let root = crate::corealg::factor::linear_root(&f);
            let null = |s: &LinearSystem<Scalar>| -> Option<usize> {
                match &root {
                    Some(r) => specialize(s, &gauss(r)).map(|x| x.nullity()),
                    None => rank_at_root(s, &f).map(|r| s.ncols() - r),
                }
            };
            let dim = match (null(&self.z), null(&self.b_out), null(&self.b_full)) {
                (Some(z), Some(o), Some(b)) => Some(z - (o - b)),
                _ => None,
            };
            let jump = dim.is_some_and(|d| d != generic);
            out.push(Exceptional { poly: f, root, dim, jump });
        }
        out
    }
}

/// One truncation level of a cohomology computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomLevel {
    pub trunc: Truncation,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub dim: usize,
}

/// Result of a cohomology computation; `representatives` are cocycles whose
/// classes span the truncated cohomology at the last level.
#[derive(Clone, Debug, PartialEq)]
pub struct Cohomology<S = GaussRat> {
    pub complex: String,
    pub lambda: S,
    pub mu: S,
    pub levels: Vec<CohomLevel>,
    pub stabilized_dim: Option<usize>,
    pub representatives: Vec<Cochain1<S>>,
    /// Exceptional loci when a weight is the formal parameter.
    pub exceptional: Vec<Exceptional>,
}

impl<S: Coeff> Cohomology<S> {
    /// The last computed dimension.
    pub fn dim(&self) -> usize {
        self.levels.last().map_or(0, |l| l.dim)
    }

    pub fn report(&self) -> CohomReport {
        CohomReport {
            complex: self.complex.clone(),
            lambda: self.lambda.to_string(),
            mu: self.mu.to_string(),
            truncations: self.levels.clone(),
            stabilized_dim: self.stabilized_dim,
            coboundary_dim: self.levels.last().map_or(0, |l| l.coboundaries),
            representatives: self.representatives.iter().map(render_cochain).collect(),
            exceptional: self.exceptional.iter().map(ExceptionalRow::from).collect(),
        }
    }
}

/// Serializable cohomology report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomReport {
    pub complex: String,
    pub lambda: String,
    pub mu: String,
    pub truncations: Vec<CohomLevel>,
    pub stabilized_dim: Option<usize>,
    pub coboundary_dim: usize,
    pub representatives: Vec<RepresentativeRow>,
    pub exceptional: Vec<ExceptionalRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeRow {
    pub pretty: String,
    /// `(term, coefficient)` pairs.
    pub coefficients: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRow {
    pub factor: String,
    pub root: Option<String>,
    pub dim: Option<usize>,
    pub jump: bool,
}

impl From<&Exceptional> for ExceptionalRow {
    fn from(e: &Exceptional) -> Self {
        ExceptionalRow { factor: e.render("λ"), root: e.root.as_ref().map(fmt_rat), dim: e.dim, jump: e.jump }
    }
}

fn render_cochain<S: Coeff>(c: &Cochain1<S>) -> RepresentativeRow {
    let mut coefficients = Vec::new();
    match c {
        Cochain1::Differential(b) => {
            for (k, f) in cochain_jet(b, Slot::X).terms() {
                coefficients.push((k.to_string(), f.to_string()));
            }
        }
        Cochain1::Finite(v) => {
            for (i, a) in v.iter().enumerate() {
                for (j, f) in a.coeffs().iter().enumerate() {
                    if !f.is_zero() {
                        coefficients.push((format!("e{i}: ∂^{j}"), f.to_string()));
                    }
                }
            }
        }
    }
    RepresentativeRow { pretty: c.to_string(), coefficients }
}

fn jet_x_psi(i: usize, j: usize) -> JetKey {
    JetKey::EMPTY.with(Slot::X, i).with(Slot::Psi, j)
}

/// Operator atoms `m·∂^j` for `j ≤ order`, `m` in `monos`.
fn operator_atoms(order: usize, monos: &[FuncMono]) -> Vec<(usize, FuncMono)> {
    let mut v = Vec::new();
    for j in 0..=order {
        for m in monos {
            v.push((j, m.clone()));
        }
    }
    v
}

fn atom_op<S: Coeff>(lambda: &S, mu: &S, j: usize, m: &FuncMono, mode: Mode) -> LinOp<S> {
    let mut c = vec![Func::zero(mode); j + 1];
    c[j] = Func::term(m.clone(), S::one(), mode);
    LinOp::new(lambda.clone(), mu.clone(), c, mode)
}

/// Window of the full differential complex of vector fields.
fn vect_complex<S: Coeff>(lambda: &S, mu: &S, mode: Mode, t: &Truncation, extra: usize) -> Complex<S> {
    let monos = window_monos(None, mode, t.degree, t.freq);
    let mut atoms = Vec::new();
    for (i, j) in bilinear_keys(t.order) {
        for m in &monos {
            atoms.push((0u32, jet_x_psi(i, j), m.clone()));
        }
    }
    let mut b = ComplexBuilder::new(atoms.clone());
    for (_, key, m) in &atoms {
        let i = key.order(Slot::X).unwrap_or(0);
        let j = key.order(Slot::Psi).unwrap_or(0);
        let c = BilinOp::new(-S::one(), lambda.clone(), mu.clone(), [((i, j), Func::term(m.clone(), S::one(), mode))], mode);
        b.push_cochain(&[(0, cocycle_defect_formal(&c))]);
    }
    let amonos = window_monos(None, mode, t.degree + 1 + extra, t.freq + 1 + extra);
    let x = JetPoly::var(Slot::X, 0, mode);
    for (j, m) in operator_atoms(t.order + 1 + extra, &amonos) {
        let a = atom_op(lambda, mu, j, &m, mode);
        b.push_operator(&[], &[(0, lie_on_linop_jet(&x, &a))]);
    }
    b.build()
}

/// Window of the Chevalley–Eilenberg complex of a finite-dimensional `g`.
fn finite_complex<S: Coeff>(g: &Subalgebra, lambda: &S, mu: &S, t: &Truncation, extra: usize) -> Complex<S> {
    let mode = g.mode();
    let n = g.dim();
    let monos = window_monos(Some(g), mode, t.degree, t.freq);
    let mut atoms = Vec::new();
    for k in 0..n {
        for (j, m) in operator_atoms(t.order, &monos) {
            atoms.push((k as u32, JetKey::single(Slot::Psi, j), m));
        }
    }
    let gens: Vec<JetPoly<S>> = (0..n).map(|k| JetPoly::constant(g.generator::<S>(k))).collect();
    let sc = g.structure_constants();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    let mut b = ComplexBuilder::new(atoms.clone());
    for (k, key, m) in &atoms {
        let k = *k as usize;
        let a = atom_op(lambda, mu, key.order(Slot::Psi).unwrap_or(0), m, mode).as_jet(Slot::Psi);
        let mut conds = Vec::new();
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let mut d = JetPoly::zero(mode);
            if j == k {
                d = d.add(&act_on_op(&gens[i], lambda, mu, &a));
            }
            if i == k {
                d = d.sub(&act_on_op(&gens[j], lambda, mu, &a));
            }
            let s = &sc[i][j][k];
            if !Zero::is_zero(s) {
                d = d.sub(&a.scale(&S::from_gauss(s)));
            }
            if !d.is_zero() {
                conds.push((p as u32, d));
            }
        }
        b.push_cochain(&conds);
    }
    let amonos = window_monos(Some(g), mode, t.degree + 1 + extra, t.freq + 1 + extra);
    for (j, m) in operator_atoms(t.order + 1 + extra, &amonos) {
        let a = atom_op(lambda, mu, j, &m, mode).as_jet(Slot::Psi);
        let img: Vec<(u32, JetPoly<S>)> = gens.iter().enumerate().map(|(k, x)| (k as u32, act_on_op(x, lambda, mu, &a))).collect();
        b.push_operator(&[], &img);
    }
    b.build()
}

const VANISH_TAG: u32 = 1 << 10;
const INVARIANCE_TAG: u32 = 1 << 11;

/// Relative complex: constant-coefficient differential cochains of order
/// `≤ order` vanishing on `g` and `g`-invariant, modulo `δA` with `A`
/// `g`-invariant.
fn relative_complex<S: Coeff>(g: &Subalgebra, lambda: &S, mu: &S, order: usize, extra: usize) -> Complex<S> {
    let mode = g.mode();
    let one = FuncMono::one();
    let atoms: Vec<Label> = bilinear_keys(order).into_iter().map(|(i, j)| (0u32, jet_x_psi(i, j), one.clone())).collect();
    let gens: Vec<JetPoly<S>> = (0..g.dim()).map(|k| JetPoly::constant(g.generator::<S>(k))).collect();
    let mut b = ComplexBuilder::new(atoms.clone());
    for (_, key, _) in &atoms {
        let i = key.order(Slot::X).unwrap_or(0);
        let j = key.order(Slot::Psi).unwrap_or(0);
        let c = BilinOp::constant(-S::one(), lambda.clone(), mu.clone(), [((i, j), S::one())], mode);
        let mut conds = vec![(0u32, cocycle_defect_formal(&c))];
        let cj = c.as_jet();
        for (k, x) in gens.iter().enumerate() {
            conds.push((VANISH_TAG + k as u32, cj.substitute(Slot::Phi, x)));
            conds.push((INVARIANCE_TAG + k as u32, invariance_defect_jet(x, &c)));
        }
        b.push_cochain(&conds);
    }
    let x = JetPoly::var(Slot::X, 0, mode);
    for j in 0..=(order + 1 + extra) {
        let a = atom_op(lambda, mu, j, &one, mode);
        let aj = a.as_jet(Slot::Psi);
        let cons: Vec<(u32, JetPoly<S>)> =
            gens.iter().enumerate().map(|(k, g)| (INVARIANCE_TAG + k as u32, act_on_op(g, lambda, mu, &aj))).collect();
        b.push_operator(&cons, &[(0, lie_on_linop_jet(&x, &a))]);
    }
    b.build()
}

fn level_of<S: Coeff>(t: Truncation, l: &Level<S>) -> CohomLevel {
    CohomLevel { trunc: t, cocycles: l.cocycles, coboundaries: l.coboundaries, dim: l.dim }
}

/// Runs a complex family over a truncation ladder: `t`, `t+2`, … until two
/// consecutive dimensions agree (at most `max_steps` growth steps), or only
/// at `t` when `stabilize` is false.
fn ladder<S: Coeff>(
    t: Truncation,
    stabilize: bool,
    max_steps: usize,
    build: impl Fn(&Truncation) -> Complex<S>,
) -> (Vec<CohomLevel>, Option<usize>, Complex<S>, Level<S>) {
    let mut levels = Vec::new();
    let mut cur = t;
    let mut cx = build(&cur);
    let mut lvl = cx.solve();
    levels.push(level_of(cur, &lvl));
    if !stabilize {
        return (levels, None, cx, lvl);
    }
    for _ in 0..max_steps {
        cur = cur.grow(2);
        cx = build(&cur);
        lvl = cx.solve();
        levels.push(level_of(cur, &lvl));
        let n = levels.len();
        if levels[n - 1].dim == levels[n - 2].dim {
            return (levels, Some(lvl.dim), cx, lvl);
        }
    }
    (levels, None, cx, lvl)
}

/// Maximum number of `+2` growth steps when stabilizing.
pub const MAX_STABILIZATION_STEPS: usize = 3;

fn differential_reps<S: Coeff>(cx: &Complex<S>, lvl: &Level<S>, lambda: &S, mu: &S, mode: Mode) -> Vec<Cochain1<S>> {
    lvl.reps
        .iter()
        .map(|v| {
            let mut coeffs: BTreeMap<(usize, usize), Func<S>> = BTreeMap::new();
            for (a, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (_, key, m) = &cx.atoms[a];
                let ij = (key.order(Slot::X).unwrap_or(0), key.order(Slot::Psi).unwrap_or(0));
                coeffs.entry(ij).or_insert_with(|| Func::zero(mode)).add_assign(&Func::term(m.clone(), x.clone(), mode));
            }
            Cochain1::Differential(BilinOp::new(-S::one(), lambda.clone(), mu.clone(), coeffs, mode))
        })
        .collect()
}

fn finite_reps<S: Coeff>(cx: &Complex<S>, lvl: &Level<S>, n: usize, lambda: &S, mu: &S, mode: Mode) -> Vec<Cochain1<S>> {
    lvl.reps
        .iter()
        .map(|v| {
            let mut vals: Vec<Vec<Func<S>>> = vec![Vec::new(); n];
            for (a, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (k, key, m) = &cx.atoms[a];
                let j = key.order(Slot::Psi).unwrap_or(0);
                let row = &mut vals[*k as usize];
                if row.len() <= j {
                    row.resize(j + 1, Func::zero(mode));
                }
                row[j].add_assign(&Func::term(m.clone(), x.clone(), mode));
            }
            Cochain1::Finite(vals.into_iter().map(|c| LinOp::new(lambda.clone(), mu.clone(), c, mode)).collect())
        })
        .collect()
}

/// `H¹(g; Hom_diff(F_λ, F_μ))` within truncated windows.
pub fn h1_finite(g: &Subalgebra, lambda: &Rat, mu: &Rat, t: Truncation, stabilize: bool) -> Result<Cohomology<GaussRat>> {
    h1_finite_with(g, lambda, mu, t, stabilize, 0)
}

/// As [`h1_finite`] with the coboundary window enlarged by `extra`.
pub fn h1_finite_with(
    g: &Subalgebra,
    lambda: &Rat,
    mu: &Rat,
    t: Truncation,
    stabilize: bool,
    extra: usize,
) -> Result<Cohomology<GaussRat>> {
    if g.is_formal() {
        return Err(CoreError::Domain("the formal algebra has no finite complex; use the differential complex".into()));
    }
    let (l, m) = (gauss(lambda), gauss(mu));
    let (levels, stabilized_dim, cx, lvl) = ladder(t, stabilize, MAX_STABILIZATION_STEPS, |tt| finite_complex(g, &l, &m, tt, extra));
    let representatives = finite_reps(&cx, &lvl, g.dim(), &l, &m, g.mode());
    Ok(Cohomology {
        complex: format!("{}({})", g.name(), g.mode()),
        lambda: l,
        mu: m,
        levels,
        stabilized_dim,
        representatives,
        exceptional: Vec::new(),
    })
}

/// Differential cohomology of the full algebra of vector fields with values
/// in `Hom_diff(F_λ, F_{λ+δ})` within truncated windows.
pub fn h1_vect_diff(lambda: &Rat, delta: &Rat, mode: Mode, t: Truncation, stabilize: bool) -> Cohomology<GaussRat> {
    h1_vect_diff_with(lambda, delta, mode, t, stabilize, 0)
}

/// As [`h1_vect_diff`] with the coboundary window enlarged by `extra`.
pub fn h1_vect_diff_with(lambda: &Rat, delta: &Rat, mode: Mode, t: Truncation, stabilize: bool, extra: usize) -> Cohomology<GaussRat> {
    let l = gauss(lambda);
    let m = gauss(&(lambda.clone() + delta.clone()));
    let (levels, stabilized_dim, cx, lvl) = ladder(t, stabilize, MAX_STABILIZATION_STEPS, |tt| vect_complex(&l, &m, mode, tt, extra));
    let representatives = differential_reps(&cx, &lvl, &l, &m, mode);
    Cohomology { complex: format!("vect({mode})"), lambda: l, mu: m, levels, stabilized_dim, representatives, exceptional: Vec::new() }
}

/// [`h1_vect_diff`] with `λ` the formal parameter: generic dimension over
/// the rational function field and the exceptional factors in `λ`.
pub fn h1_vect_diff_formal(delta: &Rat, mode: Mode, t: Truncation) -> Cohomology<Scalar> {
    let l = Scalar::param();
    let m = l.clone() + Scalar::from_gauss(&gauss(delta));
    let cx = vect_complex(&l, &m, mode, &t, 0);
    let lvl = cx.solve();
    let exceptional = cx.exceptional(lvl.dim);
    let representatives = differential_reps(&cx, &lvl, &l, &m, mode);
    Cohomology {
        complex: format!("vect({mode})"),
        lambda: l,
        mu: m,
        levels: vec![level_of(t, &lvl)],
        stabilized_dim: None,
        representatives,
        exceptional,
    }
}

fn check_relative(g: &Subalgebra) -> Result<()> {
    match g.name() {
        AlgebraName::K1 | AlgebraName::K2 | AlgebraName::L(0) => Ok(()),
        other => Err(CoreError::Domain(format!("relative cohomology is implemented for k1, k2 and l_0, not {other}"))),
    }
}

/// Default operator order for relative cochains: `max(0, ⌈δ⌉) + 3`.
pub fn relative_order(delta: &Rat) -> usize {
    ceil_nonneg(delta) + 3
}

/// `H¹(Vect, g; Hom_diff(F_λ, F_μ))` for `g ∈ {k1, k2, l_0}`: cocycles
/// vanishing on `g` (hence `g`-invariant, constant coefficients) modulo
/// coboundaries of `g`-invariant operators. The order window grows by 2
/// until two consecutive dimensions agree.
pub fn h1_relative(g: &Subalgebra, lambda: &Rat, mu: &Rat, order: Option<usize>) -> Result<Cohomology<GaussRat>> {
    check_relative(g)?;
    let (l, m) = (gauss(lambda), gauss(mu));
    let k = order.unwrap_or_else(|| relative_order(&(mu.clone() - lambda.clone())));
    let t = Truncation::new(k, 0, 0);
    let (levels, stabilized_dim, cx, lvl) = ladder(t, true, MAX_STABILIZATION_STEPS, |tt| relative_complex(g, &l, &m, tt.order, 0));
    let representatives = differential_reps(&cx, &lvl, &l, &m, g.mode());
    Ok(Cohomology {
        complex: format!("relative {}({})", g.name(), g.mode()),
        lambda: l,
        mu: m,
        levels,
        stabilized_dim,
        representatives,
        exceptional: Vec::new(),
    })
}

/// Relative cohomology with `λ` formal and `μ = λ + δ`: generic dimension
/// and the irreducible factors in `λ` where it jumps.
pub fn h1_relative_formal(g: &Subalgebra, delta: &Rat, order: Option<usize>) -> Result<Cohomology<Scalar>> {
    check_relative(g)?;
    let l = Scalar::param();
    let m = l.clone() + Scalar::from_gauss(&gauss(delta));
    let k = order.unwrap_or_else(|| relative_order(delta));
    let cx = relative_complex(g, &l, &m, k, 0);
    let lvl = cx.solve();
    let exceptional = cx.exceptional(lvl.dim);
    let representatives = differential_reps(&cx, &lvl, &l, &m, g.mode());
    Ok(Cohomology {
        complex: format!("relative {}({})", g.name(), g.mode()),
        lambda: l,
        mu: m,
        levels: vec![level_of(Truncation::new(k, 0, 0), &lvl)],
        stabilized_dim: None,
        representatives,
        exceptional,
    })
}

/// Irreducible factors in `λ` at which the relative dimension jumps, for
/// `μ = λ + δ`.
pub fn exceptional_locus_relative(g: &Subalgebra, delta: &Rat) -> Result<Vec<Exceptional>> {
    Ok(h1_relative_formal(g, delta, None)?.exceptional.into_iter().filter(|e| e.jump).collect())
}

/// Whether the restrictions of differential cocycles to the generators of
/// `g` are cocycles of the finite complex and stay independent modulo its
/// coboundaries within the window `t`.
pub fn restriction_consistent(g: &Subalgebra, reps: &[Cochain1<GaussRat>], t: Truncation) -> Result<RestrictionCheck> {
    let mut restricted = Vec::new();
    let (mut lambda, mut mu) = (GaussRat::zero(), GaussRat::zero());
    for c in reps {
        let Cochain1::Differential(b) = c else {
            return Err(CoreError::Domain("restriction expects differential cochains".into()));
        };
        lambda = b.lambda.clone();
        mu = b.mu.clone();
        let jet = cochain_jet(b, Slot::X);
        let vals = (0..g.dim())
            .map(|k| {
                Ok(LinOp::from_jet(lambda.clone(), mu.clone(), &jet.substitute_func(Slot::X, &g.generator::<GaussRat>(k))?, Slot::Psi))
            })
            .collect::<Result<Vec<_>>>()?;
        restricted.push(vals);
    }
    let mut cocycles = true;
    for v in &restricted {
        cocycles &= finite_cocycle_defect(g, v)?.iter().all(|d| d.is_zero());
    }
    let cx = finite_complex(g, &lambda, &mu, &t, 0);
    let index: HashMap<&Label, usize> = cx.atoms.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut vecs = Vec::new();
    let mut in_window = true;
    for vals in &restricted {
        let mut w = vec![GaussRat::zero(); cx.atoms.len()];
        for (k, a) in vals.iter().enumerate() {
            for (j, f) in a.coeffs().iter().enumerate() {
                for (m, x) in f.terms() {
                    match index.get(&(k as u32, JetKey::single(Slot::Psi, j), m.clone())) {
                        Some(&i) => w[i] = x.clone(),
                        None => in_window = false,
                    }
                }
            }
        }
        vecs.push(w);
    }
    let independent = in_window && cx.independent_classes(&vecs);
    Ok(RestrictionCheck { classes: reps.len(), cocycles, in_window, independent })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub classes: usize,
    /// Every restriction satisfies the finite cocycle condition.
    pub cocycles: bool,
    /// Every restriction fits in the finite window.
    pub in_window: bool,
    /// The restricted classes are independent modulo finite coboundaries.
    pub independent: bool,
}

impl RestrictionCheck {
    pub fn holds(&self) -> bool {
        self.cocycles && self.in_window && self.independent
    }
}

/// Outcome of a coboundary search in one mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeCheck {
    pub mode: Mode,
    pub c1_cocycle: bool,
    pub c2_cocycle: bool,
    /// An operator `A` with `δA = c₁`, if one exists in the window.
    pub c1_primitive: Option<String>,
    /// An operator `A` with `δA = c₂`, if one exists in the window.
    pub c2_primitive: Option<String>,
    /// `dim span{c₁, c₂}` modulo window coboundaries.
    pub class_dim: usize,
    pub window: Truncation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleLineReport {
    pub lambda: String,
    pub line: ModeCheck,
    pub circle: ModeCheck,
}

/// `c₁(X)ψ = X′ψ` and `c₂(X)ψ = Xψ` on `F_λ → F_λ`.
pub fn remark_cocycles<S: Coeff>(lambda: &S, mode: Mode) -> (BilinOp<S>, BilinOp<S>) {
    let c1 = BilinOp::constant(-S::one(), lambda.clone(), lambda.clone(), [((1, 0), S::one())], mode);
    let c2 = BilinOp::constant(-S::one(), lambda.clone(), lambda.clone(), [((0, 0), S::one())], mode);
    (c1, c2)
}

/// Searches the operator window for `A` with `δA = c_k` and measures the
/// span of `c₁, c₂` modulo window coboundaries.
pub fn coboundary_search(lambda: &Rat, mode: Mode, window: Truncation) -> ModeCheck {
    let l = gauss(lambda);
    let (c1, c2) = remark_cocycles(&l, mode);
    let monos = window_monos(None, mode, window.degree, window.freq);
    let atoms = operator_atoms(window.order, &monos);
    let x = JetPoly::var(Slot::X, 0, mode);
    let mut cols: Vec<Vec<(Label, GaussRat)>> = Vec::new();
    for (j, m) in &atoms {
        let a = atom_op(&l, &l, *j, m, mode);
        let mut col = Vec::new();
        entries(0, &lie_on_linop_jet(&x, &a), &mut col);
        cols.push(col);
    }
    let target = |c: &BilinOp<GaussRat>| {
        let mut col = Vec::new();
        entries(0, &cochain_jet(c, Slot::X), &mut col);
        col
    };
    let (t1, t2) = (target(&c1), target(&c2));
    let base = assemble(&cols).rank();
    let primitive = |t: &Vec<(Label, GaussRat)>| -> Option<String> {
        let mut all = cols.clone();
        all.push(t.iter().map(|(l, v)| (l.clone(), -v.clone())).collect());
        let e = assemble(&all).eliminate();
        let last = atoms.len();
        let v = e.nullspace().into_iter().find(|v| !Zero::is_zero(&v[last]))?;
        let s = v[last].clone();
        let mut coeffs = vec![Func::zero(mode); window.order + 1];
        for (a, (j, m)) in atoms.iter().enumerate() {
            if !Zero::is_zero(&v[a]) {
                coeffs[*j].add_assign(&Func::term(m.clone(), v[a].clone() / s.clone(), mode));
            }
        }
        Some(LinOp::new(l.clone(), l.clone(), coeffs, mode).as_jet(Slot::Psi).to_string())
    };
    let mut all = cols.clone();
    all.push(t1.clone());
    all.push(t2.clone());
    let class_dim = assemble(&all).rank() - base;
    ModeCheck {
        mode,
        c1_cocycle: cocycle_defect_formal(&c1).is_zero(),
        c2_cocycle: cocycle_defect_formal(&c2).is_zero(),
        c1_primitive: primitive(&t1),
        c2_primitive: primitive(&t2),
        class_dim,
        window,
    }
}

/// Compares the line and the circle at `μ = λ`: on the line `c₂` is the
/// coboundary of multiplication by `x`, on the circle neither `c₁` nor `c₂`
/// is a coboundary within the periodic window.
pub fn circle_vs_line(lambda: &Rat, line_window: Truncation, circle_window: Truncation) -> CircleLineReport {
    CircleLineReport {
        lambda: fmt_rat(lambda),
        line: coboundary_search(lambda, Mode::Line, line_window),
        circle: coboundary_search(lambda, Mode::Circle, circle_window),
    }
}

/// Default windows: Laurent degree `≤ 1` on the line, frequency `≤ 6` on the
/// circle, operator order `≤ 2`.
pub fn circle_vs_line_default(lambda: &Rat) -> CircleLineReport {
    circle_vs_line(lambda, Truncation::new(2, 1, 0), Truncation::new(2, 0, 6))
}

/// Cocycle analysis of the invariant operator `{·, d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeverCocycleReport {
    pub operator: String,
    /// Cocycle conditions on the order-2 ansatz `Σ_{i+j=2} c_{i,j} X⁽ⁱ⁾ψ⁽ʲ⁾`
    /// at `λ = 0` with free target weight `μ`.
    pub conditions: Vec<String>,
    /// Residual of `{·, d}` itself.
    pub residual: String,
    /// No value of `μ` makes the operator a cocycle.
    pub never_cocycle: bool,
}

pub fn render_scalar(s: &Scalar, var: &str) -> String {
    let n = s.num().render(var);
    if s.den().is_one() {
        n
    } else {
        format!("({n})/({})", s.den().render(var))
    }
}

/// `{X, dψ} = −(Xψ′)′ : F_{−1} ⊗ F_0 → F_1` as a cochain.
pub fn poisson_d_cochain<S: Coeff>(mode: Mode) -> BilinOp<S> {
    BilinOp::constant(-S::one(), S::zero(), S::one(), [((0, 2), -S::one()), ((1, 1), -S::one())], mode)
}

pub fn never_cocycle_report(mode: Mode) -> NeverCocycleReport {
    let mu = Scalar::param();
    let lambda = Scalar::zero();
    let keys = [(2usize, 0usize), (1, 1), (0, 2)];
    let mut cols = Vec::new();
    for (i, j) in keys {
        let c = BilinOp::constant(-Scalar::one(), lambda.clone(), mu.clone(), [((i, j), Scalar::one())], mode);
        let mut col = Vec::new();
        entries(0, &cocycle_defect_formal(&c), &mut col);
        cols.push(col);
    }
    let sys = assemble(&cols);
    let names = ["c₂,₀", "c₁,₁", "c₀,₂"];
    let mut conditions: Vec<String> = Vec::new();
    for r in sys.rows() {
        let mut terms = Vec::new();
        for (c, v) in r {
            let s = render_scalar(v, "μ");
            let s = if s == "1" {
                String::new()
            } else if s == "-1" {
                "-".into()
            } else {
                format!("({s})·")
            };
            terms.push(format!("{s}{}", names[*c]));
        }
        let line = format!("{} = 0", terms.join(" + "));
        if !conditions.contains(&line) {
            conditions.push(line);
        }
    }
    let op = poisson_d_cochain::<Scalar>(mode);
    let op_formal = BilinOp::new(op.gamma.clone(), op.lambda.clone(), mu.clone(), op.coeffs().clone(), mode);
    let defect = cocycle_defect_formal(&op_formal);
    let mut g = Poly::<GaussRat>::zero();
    for (_, f) in defect.terms() {
        for (_, v) in f.terms() {
            g = g.gcd(v.num());
        }
    }
    let never_cocycle = !defect.is_zero() && g.degree().unwrap_or(0) == 0;
    NeverCocycleReport {
        operator: "{X, dψ} = -Xψ″ - X′ψ′".into(),
        conditions,
        residual: cocycle_defect_formal(&op).to_string(),
        never_cocycle,
    }
}
