//! Catalog of finite-dimensional Lie algebras of vector fields on the line
//! and the circle, with exact closure checks and structure constants.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::corealg::{Coeff, Field, Func, FuncMono, GaussRat, LinearSystem, Mode, Rat};
use crate::error::{CoreError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AlgebraName {
    /// `Span(d/dx)`
    G0,
    /// `Span(d/dx, x d/dx)`
    A1,
    /// `Span(d/dx, e^{sx} d/dx)`
    H0,
    /// `Span(x^{-n} d/dx, x d/dx, x^{n+2} d/dx)`
    L(u32),
    /// `Span(d/dx, sin(sx) d/dx, cos(sx) d/dx)`
    K1,
    /// `Span(d/dx, sinh(sx) d/dx, cosh(sx) d/dx)`
    K2,
    /// All vector fields, handled through jet-formal identities.
    VectFormal,
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraName::G0 => f.write_str("g0"),
            AlgebraName::A1 => f.write_str("a1"),
            AlgebraName::H0 => f.write_str("h0"),
            AlgebraName::L(n) => write!(f, "l_{n}"),
            AlgebraName::K1 => f.write_str("k1"),
            AlgebraName::K2 => f.write_str("k2"),
            AlgebraName::VectFormal => f.write_str("vect"),
        }
    }
}

impl FromStr for AlgebraName {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "g0" => AlgebraName::G0,
            "a1" => AlgebraName::A1,
            "h0" => AlgebraName::H0,
            "k1" => AlgebraName::K1,
            "k2" => AlgebraName::K2,
            "vect" | "vect_formal" => AlgebraName::VectFormal,
            _ => {
                let rest = s.strip_prefix("l_").or_else(|| s.strip_prefix('l'));
                match rest.and_then(|r| r.parse::<u32>().ok()) {
                    Some(n) => AlgebraName::L(n),
                    None => return Err(CoreError::Domain(format!("unknown algebra `{s}`"))),
                }
            }
        })
    }
}

/// A catalog Lie algebra of vector fields `f(x) d/dx`.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    name: AlgebraName,
    mode: Mode,
    scale: i64,
    generators: Vec<Func<GaussRat>>,
    labels: Vec<String>,
    structure: Vec<Vec<Vec<GaussRat>>>,
}

fn gf(kind: &str, s: i64, mode: Mode) -> Result<Func<GaussRat>> {
    Ok(match kind {
        "1" => Func::one(mode),
        "x" => Func::x(mode)?,
        "sin" => Func::sin(s, mode)?,
        "cos" => Func::cos(s, mode)?,
        "sinh" => Func::sinh(s),
        "cosh" => Func::cosh(s),
        "exp" => Func::exp(GaussRat::real(Rat::from_integer(s.into())), mode)?,
        "exp-" => Func::exp(GaussRat::real(Rat::from_integer((-s).into())), mode)?,
        "expi" => Func::exp(GaussRat::imag(Rat::from_integer(s.into())), mode)?,
        "expi-" => Func::exp(GaussRat::imag(Rat::from_integer((-s).into())), mode)?,
        _ => unreachable!("unknown generator kind"),
    })
}

fn scaled(s: i64, base: &str) -> String {
    if s == 1 {
        format!("{base}(x)")
    } else {
        format!("{base}({s}x)")
    }
}

impl Subalgebra {
    /// Builds a catalog algebra with frequency scale `1`.
    pub fn new(name: AlgebraName, mode: Mode) -> Result<Self> {
        Self::with_scale(name, mode, 1)
    }

    /// Builds a catalog algebra; `scale` is the parameter `s` of the
    /// exponential and trigonometric families.
    pub fn with_scale(name: AlgebraName, mode: Mode, scale: i64) -> Result<Self> {
        if scale == 0 {
            return Err(CoreError::Domain("scale must be nonzero".into()));
        }
        let s = scale;
        let line_only = |what: &str| -> Result<()> {
            if mode == Mode::Circle {
                Err(CoreError::InvalidMode(format!("{what} is only defined on the line")))
            } else {
                Ok(())
            }
        };
        let (generators, labels): (Vec<Func<GaussRat>>, Vec<String>) = match name {
            AlgebraName::G0 => (vec![gf("1", s, mode)?], vec!["1".into()]),
            AlgebraName::A1 => {
                line_only("a1")?;
                (vec![gf("1", s, mode)?, gf("x", s, mode)?], vec!["1".into(), "x".into()])
            }
            AlgebraName::H0 => {
                line_only("h0")?;
                (vec![gf("1", s, mode)?, gf("exp", s, mode)?], vec!["1".into(), scaled(s, "exp")])
            }
            AlgebraName::L(n) => {
                line_only("l_n")?;
                let n = n as i64;
                (
                    vec![Func::x_pow(-n, mode)?, Func::x_pow(1, mode)?, Func::x_pow(n + 2, mode)?],
                    vec![if n == 0 { "1".into() } else { format!("x^-{n}") }, "x".into(), format!("x^{}", n + 2)],
                )
            }
            AlgebraName::K1 => {
                (vec![gf("1", s, mode)?, gf("sin", s, mode)?, gf("cos", s, mode)?], vec!["1".into(), scaled(s, "sin"), scaled(s, "cos")])
            }
            AlgebraName::K2 => {
                line_only("k2")?;
                (
                    vec![gf("1", s, mode)?, gf("sinh", s, mode)?, gf("cosh", s, mode)?],
                    vec!["1".into(), scaled(s, "sinh"), scaled(s, "cosh")],
                )
            }
            AlgebraName::VectFormal => (Vec::new(), Vec::new()),
        };
        let structure = compute_structure(&generators)?;
        Ok(Subalgebra { name, mode, scale, generators, labels, structure })
    }

    pub fn name(&self) -> AlgebraName {
        self.name
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn is_formal(&self) -> bool {
        self.name == AlgebraName::VectFormal
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Func<GaussRat>] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator<S: Coeff>(&self, i: usize) -> Func<S> {
        self.generators[i].map_coeffs(S::from_gauss)
    }

    /// Whether the translation field `d/dx` is a generator.
    pub fn contains_translation(&self) -> bool {
        self.generators.iter().any(|g| *g == Func::one(self.mode))
    }

    /// `c[i][j][k]` with `[g_i, g_j] = Σ_k c[i][j][k] g_k`.
    pub fn structure_constants(&self) -> &[Vec<Vec<GaussRat>>] {
        &self.structure
    }

    /// Basis of the complexification diagonalizing `ad(d/dx)` where
    /// possible: `e^{±isx}` for `k1`, `e^{±sx}` for `k2`. Cohomology
    /// dimensions are unchanged by complexification.
    pub fn weight_basis(&self) -> Vec<Func<GaussRat>> {
        let s = self.scale;
        let m = self.mode;
        match self.name {
            AlgebraName::K1 => vec![Func::one(m), gf("expi", s, m).unwrap(), gf("expi-", s, m).unwrap()],
            AlgebraName::K2 => vec![Func::one(m), gf("exp", s, m).unwrap(), gf("exp-", s, m).unwrap()],
            _ => self.generators.clone(),
        }
    }

    /// Antisymmetry and the Jacobi identity for the structure constants.
    pub fn check_jacobi(&self) -> bool {
        let n = self.dim();
        let c = &self.structure;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k].clone() + c[j][i][k].clone() != GaussRat::zero() {
                        return false;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = GaussRat::zero();
                        for l in 0..n {
                            s = s
                                + c[j][k][l].clone() * c[i][l][m].clone()
                                + c[k][i][l].clone() * c[j][l][m].clone()
                                + c[i][j][l].clone() * c[k][l][m].clone();
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Killing form `B_ij = tr(ad g_i ∘ ad g_j)`.
    pub fn killing_form(&self) -> Vec<Vec<GaussRat>> {
        let n = self.dim();
        let c = &self.structure;
        let mut b = vec![vec![GaussRat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = GaussRat::zero();
                for k in 0..n {
                    for l in 0..n {
                        s = s + c[i][l][k].clone() * c[j][k][l].clone();
                    }
                }
                b[i][j] = s;
            }
        }
        b
    }

    /// Signature `(positive, negative, zero)` of the Killing form, computed
    /// by exact symmetric elimination. `None` if the form is not real.
    pub fn killing_signature(&self) -> Option<(usize, usize, usize)> {
        let b = self.killing_form();
        let mut m: Vec<Vec<Rat>> = Vec::new();
        for row in &b {
            let mut r = Vec::new();
            for v in row {
                if !v.is_real() {
                    return None;
                }
                r.push(v.re.clone());
            }
            m.push(r);
        }
        Some(inertia(m))
    }
}

/// Sylvester inertia of a symmetric rational matrix.
fn inertia(mut m: Vec<Vec<Rat>>) -> (usize, usize, usize) {
    let n = m.len();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        // replace row/col i by i + j to create a nonzero diagonal
                        for k in 0..n {
                            let v = m[j][k].clone();
                            m[i][k] = m[i][k].clone() + v;
                        }
                        for k in 0..n {
                            let v = m[k][j].clone();
                            m[k][i] = m[k][i].clone() + v;
                        }
                        i
                    }
                }
            }
        };
        let d = m[p][p].clone();
        if d > Rat::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        for &i in &active {
            if i == p {
                continue;
            }
            let f = m[i][p].clone() / d.clone();
            for &j in &active {
                let v = m[p][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
        active.retain(|&i| i != p);
    }
    (pos, neg, n - pos - neg)
}

fn vf_bracket(a: &Func<GaussRat>, b: &Func<GaussRat>) -> Func<GaussRat> {
    a.mul(&b.deriv()).sub(&a.deriv().mul(b))
}

/// Coordinates of `f` in the span of `basis`, if it lies there.
pub fn coordinates(f: &Func<GaussRat>, basis: &[Func<GaussRat>]) -> Option<Vec<GaussRat>> {
    let mut monos: Vec<FuncMono> = f.terms().map(|(m, _)| m.clone()).collect();
    for b in basis {
        monos.extend(b.terms().map(|(m, _)| m.clone()));
    }
    monos.sort();
    monos.dedup();
    let n = basis.len();
    let mut sys = LinearSystem::new(n + 1);
    for m in &monos {
        let mut row: Vec<(usize, GaussRat)> = basis.iter().enumerate().map(|(k, b)| (k, b.coeff(m))).collect();
        row.push((n, -f.coeff(m)));
        sys.push_row(row);
    }
    let e = sys.eliminate();
    let ns = e.canonical_nullspace();
    let v = ns.into_iter().find(|v| !v[n].is_zero())?;
    let inv = v[n].inv();
    Some(v[..n].iter().map(|x| x.clone() * inv.clone()).collect())
}

fn compute_structure(gens: &[Func<GaussRat>]) -> Result<Vec<Vec<Vec<GaussRat>>>> {
    let n = gens.len();
    let mut c = vec![vec![vec![GaussRat::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let b = vf_bracket(&gens[i], &gens[j]);
            c[i][j] =
                coordinates(&b, gens).ok_or_else(|| CoreError::Internal(format!("bracket of generators {i}, {j} leaves the span")))?;
        }
    }
    Ok(c)
}

/// Every catalog entry that exists in the given mode.
pub fn catalog(mode: Mode, max_n: u32) -> Vec<Subalgebra> {
    let mut names = vec![AlgebraName::G0, AlgebraName::A1, AlgebraName::H0];
    names.extend((0..=max_n).map(AlgebraName::L));
    names.extend([AlgebraName::K1, AlgebraName::K2]);
    names.into_iter().filter_map(|n| Subalgebra::new(n, mode).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rat;

    fn g(r: i64) -> GaussRat {
        GaussRat::real(rat(r, 1))
    }

    #[test]
    fn k1_generators_and_bracket() {
        let k1 = Subalgebra::new(AlgebraName::K1, Mode::Line).unwrap();
        assert_eq!(k1.labels(), ["1", "sin(x)", "cos(x)"]);
        let c = k1.structure_constants();
        assert_eq!(c[0][1], vec![g(0), g(0), g(1)]);
        assert!(k1.check_jacobi());
        assert_eq!(k1.killing_signature(), Some((2, 1, 0)));
        assert!(k1.contains_translation());
    }

    #[test]
    fn l_n_generators() {
        let l2 = Subalgebra::new(AlgebraName::L(2), Mode::Line).unwrap();
        assert_eq!(l2.generators()[0], Func::x_pow(-2, Mode::Line).unwrap());
        assert_eq!(l2.generators()[2], Func::x_pow(4, Mode::Line).unwrap());
        assert!(!l2.contains_translation());
        let l0 = Subalgebra::new(AlgebraName::L(0), Mode::Line).unwrap();
        assert_eq!(l0.structure_constants()[1][2], vec![g(0), g(0), g(1)]);
        assert!(Subalgebra::new(AlgebraName::K2, Mode::Circle).is_err());
        assert!(Subalgebra::new(AlgebraName::L(1), Mode::Circle).is_err());
    }

    #[test]
    fn names_parse() {
        assert_eq!("l_3".parse::<AlgebraName>().unwrap(), AlgebraName::L(3));
        assert_eq!("l0".parse::<AlgebraName>().unwrap(), AlgebraName::L(0));
        assert_eq!("vect".parse::<AlgebraName>().unwrap(), AlgebraName::VectFormal);
        assert!("so3".parse::<AlgebraName>().is_err());
    }
}
