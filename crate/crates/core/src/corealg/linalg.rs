//! Sparse exact Gauss–Jordan elimination over any [`Field`], with connected
//! block splitting and pivot bookkeeping for parametric systems.

use std::collections::BTreeMap;

use super::field::{Field, Rat};
use super::gauss::GaussRat;
use super::poly::Poly;
use super::ratfunc::RatFunc;

pub type SparseRow<F> = BTreeMap<usize, F>;

/// Homogeneous linear system `M v = 0` stored by rows.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem<F> {
    ncols: usize,
    rows: Vec<SparseRow<F>>,
}

impl<F: Field> LinearSystem<F> {
    pub fn new(ncols: usize) -> Self {
        LinearSystem { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow<F>] {
        &self.rows
    }

    /// Adds a row given as `(column, value)` pairs; repeated columns are
    /// summed and zero rows are dropped.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, F)>) {
        let mut row: SparseRow<F> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            add_entry(&mut row, c, v);
        }
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn push_sparse(&mut self, row: SparseRow<F>) {
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn extend(&mut self, other: &LinearSystem<F>) {
        assert_eq!(self.ncols, other.ncols);
        self.rows.extend(other.rows.iter().cloned());
    }

    /// Entry-wise image under `f`; `None` if any entry fails to map.
    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<LinearSystem<G>> {
        let mut out = LinearSystem::new(self.ncols);
        for r in &self.rows {
            let mut row = BTreeMap::new();
            for (c, v) in r {
                let w = f(v)?;
                if !w.is_zero() {
                    row.insert(*c, w);
                }
            }
            out.push_sparse(row);
        }
        Some(out)
    }

    /// Restriction to a subset of columns, renumbered in the given order.
    /// Rows that become empty are dropped.
    pub fn select_columns(&self, cols: &[usize]) -> LinearSystem<F> {
        let index: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let mut out = LinearSystem::new(cols.len());
        for r in &self.rows {
            let row: SparseRow<F> = r.iter().filter_map(|(c, v)| index.get(c).map(|k| (*k, v.clone()))).collect();
            out.push_sparse(row);
        }
        out
    }

    pub fn eliminate(&self) -> Elimination<F> {
        eliminate(self)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }
}

fn add_entry<F: Field>(row: &mut SparseRow<F>, c: usize, v: F) {
    if v.is_zero() {
        return;
    }
    match row.get_mut(&c) {
        Some(x) => {
            let s = std::mem::replace(x, F::zero()) + v;
            if s.is_zero() {
                row.remove(&c);
            } else {
                *x = s;
            }
        }
        None => {
            row.insert(c, v);
        }
    }
}

/// `target -= coeff · src`
fn sub_scaled<F: Field>(target: &mut SparseRow<F>, src: &SparseRow<F>, coeff: &F) {
    for (c, v) in src {
        add_entry(target, *c, -(coeff.clone() * v.clone()));
    }
}

/// Result of elimination: fully reduced pivot rows (pivot entry 1, zero in
/// every other pivot column) and the raw pivot values used for division.
#[derive(Clone, Debug)]
pub struct Elimination<F> {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow<F>>,
    pivot_values: Vec<F>,
}

impl<F: Field> Elimination<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn pivot_values(&self) -> &[F] {
        &self.pivot_values
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// One nullspace vector per free column: 1 there, 0 at other free
    /// columns.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![F::zero(); self.ncols];
                v[f] = F::one();
                for (p, row) in &self.pivots {
                    if let Some(x) = row.get(&f) {
                        v[*p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }

    /// Nullspace basis in reduced row echelon form with leftmost pivots;
    /// independent of the pivoting order used during elimination.
    pub fn canonical_nullspace(&self) -> Vec<Vec<F>> {
        rref(self.nullspace())
    }

    /// Whether `v` satisfies every reduced equation.
    pub fn annihilates(&self, v: &[F]) -> bool {
        self.pivots.iter().all(|(p, row)| {
            let mut s = v[*p].clone();
            for (c, x) in row {
                if c != p {
                    s = s + x.clone() * v[*c].clone();
                }
            }
            s.is_zero()
        })
    }
}

/// Dense reduced row echelon form with leftmost pivots; zero rows removed.
pub fn rref<F: Field>(mut m: Vec<Vec<F>>) -> Vec<Vec<F>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            let v = std::mem::replace(x, F::zero());
            *x = v * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    if !m[r][j].is_zero() {
                        let v = std::mem::replace(&mut m[i][j], F::zero());
                        m[i][j] = v - f.clone() * m[r][j].clone();
                    }
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups rows into column-connected blocks.
fn blocks<F: Field>(sys: &LinearSystem<F>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..sys.ncols).collect());
    for r in &sys.rows {
        let mut it = r.keys();
        if let Some(&first) = it.next() {
            for &c in it {
                uf.union(first, c);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in sys.rows.iter().enumerate() {
        let root = uf.find(*r.keys().next().unwrap());
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

fn eliminate<F: Field>(sys: &LinearSystem<F>) -> Elimination<F> {
    let mut out = Elimination { ncols: sys.ncols, pivots: BTreeMap::new(), pivot_values: Vec::new() };
    for block in blocks(sys) {
        let mut piv: BTreeMap<usize, SparseRow<F>> = BTreeMap::new();
        for &ri in &block {
            let mut row = sys.rows[ri].clone();
            let hits: Vec<usize> = row.keys().filter(|c| piv.contains_key(c)).copied().collect();
            for c in hits {
                if let Some(v) = row.get(&c).cloned() {
                    sub_scaled(&mut row, &piv[&c], &v);
                }
            }
            if row.is_empty() {
                continue;
            }
            let (pc, pv) = row.iter().min_by(|a, b| a.1.cost().cmp(&b.1.cost()).then(a.0.cmp(b.0))).map(|(c, v)| (*c, v.clone())).unwrap();
            let inv = pv.inv();
            for v in row.values_mut() {
                let x = std::mem::replace(v, F::zero());
                *v = x * inv.clone();
            }
            out.pivot_values.push(pv);
            for prow in piv.values_mut() {
                if let Some(f) = prow.get(&pc).cloned() {
                    sub_scaled(prow, &row, &f);
                }
            }
            piv.insert(pc, row);
        }
        out.pivots.extend(piv);
    }
    out
}

/// Specialization `t = r` of a system over rational functions; `None` if an
/// entry has a pole at `r`.
pub fn specialize<F: Field>(sys: &LinearSystem<RatFunc<F>>, r: &F) -> Option<LinearSystem<F>> {
    sys.try_map(|v| v.eval(r))
}

/// Rank of a parametric system over the residue field `Q[t]/(f)` for an
/// irreducible `f`, i.e. at an algebraic root of `f`. `None` when some entry
/// has non-real coefficients.
pub fn rank_at_root(sys: &LinearSystem<RatFunc<GaussRat>>, f: &Poly<Rat>) -> Option<usize> {
    let real = |p: &Poly<GaussRat>| -> Option<Poly<Rat>> {
        if p.is_real() {
            Some(p.map(|c| c.re.clone()))
        } else {
            None
        }
    };
    let mut rows: Vec<SparseRow<Poly<Rat>>> = Vec::new();
    for r in sys.rows() {
        let mut l = Poly::<Rat>::one();
        for v in r.values() {
            let d = real(v.den())?;
            l = l.clone().exact_div(&l.gcd(&d)) * d;
        }
        let mut row = BTreeMap::new();
        for (c, v) in r {
            let n = real(v.num())?;
            let d = real(v.den())?;
            let e = (n * l.exact_div(&d)).rem(f);
            if !e.is_zero() {
                row.insert(*c, e);
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    let mut piv: BTreeMap<usize, SparseRow<Poly<Rat>>> = BTreeMap::new();
    for mut row in rows {
        let hits: Vec<usize> = row.keys().filter(|c| piv.contains_key(c)).copied().collect();
        for c in hits {
            if let Some(v) = row.get(&c).cloned() {
                let src = piv[&c].clone();
                for (cc, w) in &src {
                    let cur = row.remove(cc).unwrap_or_else(Poly::zero);
                    let nv = (cur - (v.clone() * w.clone())).rem(f);
                    if !nv.is_zero() {
                        row.insert(*cc, nv);
                    }
                }
            }
        }
        let Some((&pc, pv)) = row.iter().next() else { continue };
        let inv = inv_mod(pv, f);
        let row: SparseRow<Poly<Rat>> =
            row.iter().map(|(c, v)| (*c, (v.clone() * inv.clone()).rem(f))).filter(|(_, v)| !v.is_zero()).collect();
        for prow in piv.values_mut() {
            if let Some(g) = prow.get(&pc).cloned() {
                for (cc, w) in &row {
                    let cur = prow.remove(cc).unwrap_or_else(Poly::zero);
                    let nv = (cur - g.clone() * w.clone()).rem(f);
                    if !nv.is_zero() {
                        prow.insert(*cc, nv);
                    }
                }
            }
        }
        piv.insert(pc, row);
    }
    Some(piv.len())
}

/// Inverse of a nonzero residue modulo an irreducible polynomial.
fn inv_mod(a: &Poly<Rat>, f: &Poly<Rat>) -> Poly<Rat> {
    let (mut r0, mut r1) = (f.clone(), a.rem(f));
    let (mut s0, mut s1) = (Poly::<Rat>::zero(), Poly::<Rat>::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0 - q * s1.clone();
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    assert!(r0.is_constant(), "residue not invertible modulo an irreducible polynomial");
    s0.scale(&r0.lead().inv()).rem(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::field::rat;
    use num_traits::{One, Zero};

    fn sys(rows: &[&[i64]]) -> LinearSystem<Rat> {
        let mut s = LinearSystem::new(rows[0].len());
        for r in rows {
            s.push_row(r.iter().enumerate().map(|(c, v)| (c, rat(*v, 1))));
        }
        s
    }

    #[test]
    fn rank_and_nullspace() {
        let s = sys(&[&[1, 2, 3, 0], &[2, 4, 6, 0], &[0, 0, 0, 5]]);
        let e = s.eliminate();
        assert_eq!(e.rank(), 2);
        for v in e.nullspace() {
            assert!(e.annihilates(&v));
            for r in s.rows() {
                let dot = r.iter().fold(Rat::zero(), |a, (c, x)| a + x * &v[*c]);
                assert!(dot.is_zero());
            }
        }
        let ns = e.canonical_nullspace();
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0], vec![rat(1, 1), rat(0, 1), rat(-1, 3), rat(0, 1)]);
    }

    #[test]
    fn parametric_rank_drops_at_root() {
        type R = RatFunc<GaussRat>;
        let t = R::param();
        let one = R::one();
        let mut s: LinearSystem<R> = LinearSystem::new(2);
        s.push_row([(0, t.clone() * t.clone() - R::from_i64(2)), (1, one.clone())]);
        s.push_row([(0, one.clone()), (1, t.clone())]);
        assert_eq!(s.rank(), 2);
        // det = t^3 - 2t - 1 = (t + 1)(t^2 - t - 1)
        let q = Poly::from_coeffs(vec![rat(-1, 1), rat(-1, 1), rat(1, 1)]);
        assert_eq!(rank_at_root(&s, &q), Some(1));
        let spec = specialize(&s, &GaussRat::real(rat(-1, 1))).unwrap();
        assert_eq!(spec.rank(), 1);
        let p2 = Poly::from_coeffs(vec![rat(-2, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(rank_at_root(&s, &p2), Some(2));
    }
}
