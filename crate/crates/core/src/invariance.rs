//! Invariance systems for bilinear operator ansätze and their parametric
//! solution: generic solution space, exceptional weight loci, and the
//! classification driver over weight grids.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corealg::linalg::{rank_at_root, rref, specialize, SparseRow};
use crate::corealg::{factor, fmt_rat, real_norm, Coeff, Field, Func, FuncMono, GaussRat, LinearSystem, Mode, Poly, Rat};
use crate::diffops::{invariance_defect_jet, named_operators, BilinOp};
use crate::jets::{JetKey, JetPoly, Slot};
use crate::liealg::Subalgebra;
use crate::Scalar;

/// Row label: generator index (`None` for the formal field), jet monomial
/// and function monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowLabel {
    pub generator: Option<usize>,
    pub jet: JetKey,
    pub mono: FuncMono,
}

/// Linear system with labelled rows and columns.
#[derive(Clone, Debug)]
pub struct ParamMatrix<S = Scalar> {
    pub system: LinearSystem<S>,
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<String>,
}

impl<S: Coeff> ParamMatrix<S> {
    /// Builds the matrix whose column `c` is the collected form of
    /// `columns[c]`; one jet polynomial per generator (or one formal).
    pub fn from_columns(columns: &[Vec<(Option<usize>, JetPoly<S>)>], col_labels: Vec<String>) -> Self {
        let mut rows: BTreeMap<RowLabel, SparseRow<S>> = BTreeMap::new();
        for (c, parts) in columns.iter().enumerate() {
            for (g, p) in parts {
                for (jet, f) in p.terms() {
                    for (mono, v) in f.terms() {
                        let label = RowLabel { generator: *g, jet: *jet, mono: mono.clone() };
                        let row = rows.entry(label).or_default();
                        let cur = row.remove(&c).unwrap_or_else(S::zero) + v.clone();
                        if !cur.is_zero() {
                            row.insert(c, cur);
                        }
                    }
                }
            }
        }
        let mut system = LinearSystem::new(columns.len());
        let mut row_labels = Vec::new();
        for (l, r) in rows {
            if !r.is_empty() {
                row_labels.push(l);
                system.push_sparse(r);
            }
        }
        ParamMatrix { system, row_labels, col_labels }
    }

    pub fn ncols(&self) -> usize {
        self.system.ncols()
    }
}

/// Coefficient ansatz for the unknown operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    /// Constant `c_{i,j}`.
    Constants,
    /// `c_{i,j}` ranging over the span of the given monomials.
    Functions(Vec<FuncMono>),
}

/// All `(i, j)` with `i + j ≤ k`, lexicographic.
pub fn bilinear_keys(k: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=k {
        for j in 0..=(k - i) {
            v.push((i, j));
        }
    }
    v
}

/// Vector fields acting in an invariance or equivariance condition.
pub(crate) fn acting_fields<S: Coeff>(g: &Subalgebra) -> Vec<(Option<usize>, JetPoly<S>)> {
    if g.is_formal() {
        return vec![(None, JetPoly::var(Slot::X, 0, g.mode()))];
    }
    let mut idx: Vec<usize> = (0..g.dim()).collect();
    // translation first
    idx.sort_by_key(|&i| g.generators()[i] != Func::one(g.mode()));
    idx.into_iter().map(|i| (Some(i), JetPoly::constant(g.generator::<S>(i)))).collect()
}

/// The system whose nullspace is the space of `g`-invariant operators
/// `F_γ ⊗ F_λ → F_μ` of order at most `k`.
pub fn invariance_system<S: Coeff>(k: usize, gamma: &S, lambda: &S, mu: &S, g: &Subalgebra, mode: &CoeffMode) -> ParamMatrix<S> {
    let m = g.mode();
    let fields = acting_fields::<S>(g);
    let mut columns = Vec::new();
    let mut labels = Vec::new();
    for (i, j) in bilinear_keys(k) {
        let monos: Vec<Option<FuncMono>> = match mode {
            CoeffMode::Constants => vec![None],
            CoeffMode::Functions(ms) => ms.iter().cloned().map(Some).collect(),
        };
        for mono in monos {
            let f = match &mono {
                None => Func::one(m),
                Some(mm) => Func::term(mm.clone(), S::one(), m),
            };
            let b = BilinOp::new(gamma.clone(), lambda.clone(), mu.clone(), [((i, j), f)], m);
            columns.push(fields.iter().map(|(gi, x)| (*gi, invariance_defect_jet(x, &b))).collect());
            labels.push(match mono {
                None => format!("c{i}{j}"),
                Some(mm) => format!("c{i}{j}[{mm}]"),
            });
        }
    }
    ParamMatrix::from_columns(&columns, labels)
}

/// An irreducible factor of the pivot polynomials and the solution
/// dimension at its roots.
#[derive(Clone, Debug, PartialEq)]
pub struct Exceptional {
    /// Primitive integer polynomial in the formal parameter.
    pub poly: Poly<Rat>,
    /// The root when `poly` is linear.
    pub root: Option<Rat>,
    /// Nullspace dimension at the root(s); `None` when undecidable here.
    pub dim: Option<usize>,
    /// Whether `dim` differs from the generic dimension.
    pub jump: bool,
}

impl Exceptional {
    pub fn render(&self, var: &str) -> String {
        self.poly.render(var)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<S = Scalar> {
    pub generic_dim: usize,
    /// Canonical basis of the solution space over the coefficient field.
    pub basis: Vec<Vec<S>>,
    pub exceptional: Vec<Exceptional>,
    pub columns: Vec<String>,
}

impl<S: Coeff> SolveReport<S> {
    pub fn jumps(&self) -> impl Iterator<Item = &Exceptional> {
        self.exceptional.iter().filter(|e| e.jump)
    }

    pub fn jump_roots(&self) -> Vec<Rat> {
        self.jumps().filter_map(|e| e.root.clone()).collect()
    }
}

/// Solves a system with constant (parameter-free) coefficients.
pub fn solve_exact<S: Coeff>(m: &ParamMatrix<S>) -> SolveReport<S> {
    let e = m.system.eliminate();
    SolveReport { generic_dim: e.nullity(), basis: e.canonical_nullspace(), exceptional: Vec::new(), columns: m.col_labels.clone() }
}

/// Irreducible rational factors of the polynomials that must not vanish for
/// the generic elimination to remain valid.
pub fn candidate_factors(sys: &LinearSystem<Scalar>, pivots: &[Scalar]) -> Vec<Poly<Rat>> {
    let mut polys: Vec<Poly<GaussRat>> = Vec::new();
    for p in pivots {
        polys.push(p.num().clone());
        polys.push(p.den().clone());
    }
    for r in sys.rows() {
        for v in r.values() {
            polys.push(v.den().clone());
        }
    }
    let mut out: Vec<Poly<Rat>> = Vec::new();
    for p in polys {
        if p.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (f, _) in factor(&real_norm(&p)).factors {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.to_string().cmp(&b.to_string())));
    out
}

/// Solves a parametric system: generic nullspace over the rational function
/// field, then the dimension at every exceptional factor (re-solved at
/// rational roots, computed over the residue field otherwise).
pub fn solve_invariants(m: &ParamMatrix<Scalar>) -> SolveReport<Scalar> {
    let e = m.system.eliminate();
    let generic_dim = e.nullity();
    let mut exceptional = Vec::new();
    for f in candidate_factors(&m.system, e.pivot_values()) {
        let root = crate::corealg::factor::linear_root(&f);
        let dim = match &root {
            Some(r) => specialize(&m.system, &GaussRat::real(r.clone())).map(|s| s.nullity()),
            None => rank_at_root(&m.system, &f).map(|r| m.ncols() - r),
        };
        let jump = dim.is_some_and(|d| d != generic_dim);
        exceptional.push(Exceptional { poly: f, root, dim, jump });
    }
    SolveReport { generic_dim, basis: e.canonical_nullspace(), exceptional, columns: m.col_labels.clone() }
}

/// Specializes a parametric matrix at `t = r`.
pub fn specialize_matrix(m: &ParamMatrix<Scalar>, r: &Rat) -> Option<ParamMatrix<GaussRat>> {
    Some(ParamMatrix {
        system: specialize(&m.system, &GaussRat::real(r.clone()))?,
        row_labels: m.row_labels.clone(),
        col_labels: m.col_labels.clone(),
    })
}

pub fn to_scalar(r: &Rat) -> Scalar {
    Scalar::from_rat(r)
}

pub fn gauss(r: &Rat) -> GaussRat {
    GaussRat::real(r.clone())
}

/// Operator with constant coefficients from a solution vector.
pub fn operator_from_vector<S: Coeff>(k: usize, gamma: &S, lambda: &S, mu: &S, v: &[S], mode: Mode) -> BilinOp<S> {
    let keys = bilinear_keys(k);
    BilinOp::constant(gamma.clone(), lambda.clone(), mu.clone(), keys.into_iter().zip(v.iter().cloned()), mode)
}

/// One family of invariant operators found by [`classify_bilinear`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub order: usize,
    pub gamma: String,
    pub lambda: String,
    pub mu: String,
    /// Dimension of the invariant space of operators of order exactly
    /// `order` at these weights, modulo lower order.
    pub new_dim: usize,
    /// Names of the composition operators of this order spanning part of
    /// the space.
    pub named: Vec<String>,
    /// Dimension not accounted for by named operators of order ≤ `order`.
    pub unnamed: usize,
    /// Pretty-printed basis of the order-`order` invariant space.
    pub basis: Vec<String>,
}

impl fmt::Display for ClassRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} (γ,λ)=({},{}) μ={} dim={} named=[{}] unnamed={}",
            self.order,
            self.gamma,
            self.lambda,
            self.mu,
            self.new_dim,
            self.named.join(", "),
            self.unnamed
        )
    }
}

/// Nullspace of the constant-coefficient invariance system at rational
/// weights.
pub fn invariant_space(k: usize, gamma: &Rat, lambda: &Rat, mu: &Rat, g: &Subalgebra) -> Vec<Vec<GaussRat>> {
    let m = invariance_system(k, &gauss(gamma), &gauss(lambda), &gauss(mu), g, &CoeffMode::Constants);
    solve_exact(&m).basis
}

fn rank_of(vs: &[Vec<GaussRat>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        rref(vs.to_vec()).len()
    }
}

/// Rational values of `μ` at which order-`≤k` invariant operators exist for
/// rational `(γ, λ)`.
pub fn special_mus(k: usize, gamma: &Rat, lambda: &Rat, g: &Subalgebra) -> (usize, Vec<Rat>) {
    let m = invariance_system(k, &to_scalar(gamma), &to_scalar(lambda), &Scalar::param(), g, &CoeffMode::Constants);
    let rep = solve_invariants(&m);
    (rep.generic_dim, rep.jump_roots())
}

/// Invariant bilinear operators of every order `≤ k_max` at each grid point,
/// one row per `(order, γ, λ, μ)` with new operators.
pub fn classify_bilinear(g: &Subalgebra, k_max: usize, grid: &[(Rat, Rat)]) -> Vec<ClassRow> {
    let mut rows = Vec::new();
    for (gamma, lambda) in grid {
        rows.extend(classify_point(g, k_max, gamma, lambda));
    }
    rows
}

/// Classification at a single weight pair.
pub fn classify_point(g: &Subalgebra, k_max: usize, gamma: &Rat, lambda: &Rat) -> Vec<ClassRow> {
    let mode = g.mode();
    let (generic, mut mus) = special_mus(k_max, gamma, lambda, g);
    assert_eq!(generic, 0, "invariant operators for generic target weight");
    mus.sort();
    let mut rows = Vec::new();
    for mu in mus {
        let (gg, ll, mm) = (gauss(gamma), gauss(lambda), gauss(&mu));
        let mut prev_dim = 0;
        for k in 0..=k_max {
            let basis = invariant_space(k, gamma, lambda, &mu, g);
            let dim = basis.len();
            if dim > prev_dim {
                let keys = bilinear_keys(k);
                let mut named_vecs = Vec::new();
                let mut names = Vec::new();
                for kk in 0..=k {
                    for (name, op) in named_operators::<GaussRat>(kk, &gg, &ll, mode) {
                        if op.mu != mm {
                            continue;
                        }
                        if let Some(v) = op.coefficient_vector(&keys) {
                            named_vecs.push(v);
                            if kk == k {
                                names.push(name);
                            }
                        }
                    }
                }
                let named_rank = rank_of(&named_vecs);
                let rendered = basis
                    .iter()
                    .map(|v| {
                        let op = operator_from_vector(k, &gg, &ll, &mm, v, mode);
                        let s = op.to_string();
                        s.split(" : ").next().unwrap_or("").to_string()
                    })
                    .collect();
                rows.push(ClassRow {
                    order: k,
                    gamma: fmt_rat(gamma),
                    lambda: fmt_rat(lambda),
                    mu: fmt_rat(&mu),
                    new_dim: dim - prev_dim,
                    named: names,
                    unnamed: dim.saturating_sub(named_rank),
                    basis: rendered,
                });
            }
            prev_dim = dim;
        }
    }
    rows.sort_by_key(|r| r.order);
    rows
}

/// The weight grid `{−2, −1, −2/3, 0, 1/3, 1, 2}²`.
pub fn default_grid() -> Vec<(Rat, Rat)> {
    let vals = [(-2, 1), (-1, 1), (-2, 3), (0, 1), (1, 3), (1, 1), (2, 1)];
    let mut g = Vec::new();
    for a in vals {
        for b in vals {
            g.push((crate::corealg::rat(a.0, a.1), crate::corealg::rat(b.0, b.1)));
        }
    }
    g
}

/// Checks that every basis vector is annihilated by every defect.
pub fn verify_basis<S: Coeff>(k: usize, gamma: &S, lambda: &S, mu: &S, g: &Subalgebra, basis: &[Vec<S>]) -> bool {
    let fields = acting_fields::<S>(g);
    basis.iter().all(|v| {
        let op = operator_from_vector(k, gamma, lambda, mu, v, g.mode());
        fields.iter().all(|(_, x)| invariance_defect_jet(x, &op).is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rat;
    use crate::liealg::AlgebraName;
    use num_traits::Zero;

    fn k1() -> Subalgebra {
        Subalgebra::new(AlgebraName::K1, Mode::Line).unwrap()
    }

    fn sc(n: i64) -> Scalar {
        Scalar::from_i64(n)
    }

    #[test]
    fn zero_and_first_order_examples() {
        let g = k1();
        let m = invariance_system(0, &sc(2), &sc(3), &sc(5), &g, &CoeffMode::Constants);
        assert_eq!(solve_invariants(&m).generic_dim, 1);
        let m = invariance_system(0, &sc(2), &sc(3), &sc(6), &g, &CoeffMode::Constants);
        assert_eq!(solve_invariants(&m).generic_dim, 0);
        let m = invariance_system(1, &sc(2), &sc(3), &sc(6), &g, &CoeffMode::Constants);
        let r = solve_invariants(&m);
        assert_eq!(r.generic_dim, 1);
        // keys (0,0),(0,1),(1,0)
        let v = &r.basis[0];
        assert!(v[0].is_zero());
        assert_eq!(v[1].clone() / v[2].clone(), Scalar::from_rat(&rat(-2, 3)));
    }

    #[test]
    fn order_two_vect_family_with_formal_lambda() {
        let g = Subalgebra::new(AlgebraName::VectFormal, Mode::Line).unwrap();
        let t = Scalar::param();
        let m = invariance_system(2, &sc(0), &t, &(t.clone() + sc(2)), &g, &CoeffMode::Constants);
        let r = solve_invariants(&m);
        assert_eq!(r.generic_dim, 1);
        assert!(verify_basis(2, &sc(0), &t, &(t.clone() + sc(2)), &g, &r.basis));
        let m = invariance_system(2, &t, &sc(5), &(t.clone() + sc(7)), &g, &CoeffMode::Constants);
        let r = solve_invariants(&m);
        assert_eq!(r.generic_dim, 0);
        let roots = r.jump_roots();
        assert!(roots.contains(&rat(0, 1)) && roots.contains(&rat(-6, 1)), "{roots:?}");
    }
}
