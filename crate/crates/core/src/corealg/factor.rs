//! Factorization of univariate polynomials over the rationals, used to
//! report exceptional weight loci as irreducible polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, Rat};
use super::gauss::GaussRat;
use super::poly::Poly;

/// Largest absolute value whose divisors are enumerated by trial division.
const DIVISOR_LIMIT: i128 = 1_000_000_000_000;
/// Cap on Kronecker interpolation candidates per quadratic search.
const KRONECKER_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    /// Irreducible factors, each primitive with integer coefficients and
    /// positive leading coefficient, with multiplicity.
    pub factors: Vec<(Poly<Rat>, u32)>,
    /// False when a factor of degree ≥ 6 could not be certified irreducible
    /// or a coefficient was too large for root search.
    pub complete: bool,
}

/// Scales to a primitive integer polynomial with positive leading coefficient.
pub fn primitive(p: &Poly<Rat>) -> Poly<Rat> {
    if p.is_zero() {
        return p.clone();
    }
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    Poly::from_coeffs(ints.into_iter().map(|c| Rat::from_integer(c / &g)).collect())
}

/// Real polynomial whose roots include every root of `p`: `p` itself when its
/// coefficients are real, otherwise `p·conj(p)`.
pub fn real_norm(p: &Poly<GaussRat>) -> Poly<Rat> {
    let q = if p.is_real() { p.clone() } else { p.clone() * p.conj() };
    q.map(|c| c.re.clone())
}

pub fn factor(p: &Poly<Rat>) -> Factorization {
    let mut out = Factorization { factors: Vec::new(), complete: true };
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    // Yun's square-free decomposition.
    let f = p.monic();
    let d = f.derivative();
    let a = f.gcd(&d);
    let mut b = f.exact_div(&a);
    let mut c = d.exact_div(&a) - b.derivative();
    let mut mult = 1u32;
    loop {
        let g = b.gcd(&c);
        if g.degree().unwrap_or(0) > 0 {
            split_squarefree(&g, mult, &mut out);
        }
        b = b.exact_div(&g);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = c.exact_div(&g) - b.derivative();
        mult += 1;
    }
    out.factors.sort_by(|x, y| x.0.degree().cmp(&y.0.degree()).then_with(|| format!("{}", x.0).cmp(&format!("{}", y.0))));
    out
}

fn split_squarefree(g: &Poly<Rat>, mult: u32, out: &mut Factorization) {
    let mut rest = primitive(g);
    for r in rational_roots_of_primitive(&rest, &mut out.complete) {
        let lin = primitive(&Poly::linear_root(r));
        rest = primitive(&rest.exact_div(&lin));
        out.factors.push((lin, mult));
    }
    split_no_linear(rest, mult, out);
}

fn split_no_linear(rest: Poly<Rat>, mult: u32, out: &mut Factorization) {
    let deg = rest.degree().unwrap_or(0);
    if deg == 0 {
        return;
    }
    if deg <= 3 {
        out.factors.push((rest, mult));
        return;
    }
    if let Some(q) = quadratic_factor(&rest) {
        let other = primitive(&rest.exact_div(&q));
        out.factors.push((q, mult));
        split_no_linear(other, mult, out);
        return;
    }
    if deg >= 6 {
        out.complete = false;
    }
    out.factors.push((rest, mult));
}

fn to_i128(r: &Rat) -> Option<i128> {
    if !r.is_integer() {
        return None;
    }
    r.to_integer().to_i128()
}

fn divisors(n: i128) -> Option<Vec<i128>> {
    let n = n.abs();
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1i128;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Rational roots of a square-free primitive integer polynomial.
fn rational_roots_of_primitive(p: &Poly<Rat>, complete: &mut bool) -> Vec<Rat> {
    let mut roots = Vec::new();
    let mut q = p.clone();
    if q.coeff(0).is_zero() {
        roots.push(Rat::zero());
        q = primitive(&q.exact_div(&Poly::param()));
    }
    if q.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let (Some(a0), Some(an)) = (to_i128(&q.coeff(0)), to_i128(&q.lead())) else {
        *complete = false;
        return roots;
    };
    let (Some(dn), Some(dd)) = (divisors(a0), divisors(an)) else {
        *complete = false;
        return roots;
    };
    for num in &dn {
        for den in &dd {
            for sign in [1i128, -1] {
                let r = Rat::new(BigInt::from(sign * num), BigInt::from(*den));
                if roots.contains(&r) {
                    continue;
                }
                if q.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Kronecker search for an integer quadratic factor.
fn quadratic_factor(p: &Poly<Rat>) -> Option<Poly<Rat>> {
    let mut pts = Vec::new();
    let mut x = 0i64;
    while pts.len() < 3 && x.abs() < 50 {
        let v = p.eval(&Rat::from_integer(BigInt::from(x)));
        if !v.is_zero() {
            pts.push((x, to_i128(&v)?));
        }
        x = if x >= 0 { -x - 1 } else { -x };
    }
    if pts.len() < 3 {
        return None;
    }
    let d0 = divisors(pts[0].1)?;
    let d1 = divisors(pts[1].1)?;
    let d2 = divisors(pts[2].1)?;
    if d0.len() * d1.len() * d2.len() * 4 > KRONECKER_BUDGET {
        return None;
    }
    let xs: Vec<Rat> = pts.iter().map(|(x, _)| Rat::from_integer(BigInt::from(*x))).collect();
    for &a in &d0 {
        for &b in &d1 {
            for sb in [1i128, -1] {
                for &c in &d2 {
                    for sc in [1i128, -1] {
                        let ys = [a, sb * b, sc * c].map(|v| Rat::from_integer(BigInt::from(v)));
                        let q = interpolate(&xs, &ys);
                        if q.degree() != Some(2) || q.coeffs().iter().any(|c| !c.is_integer()) {
                            continue;
                        }
                        let q = primitive(&q);
                        if q.divides(p) {
                            return Some(q);
                        }
                    }
                }
            }
        }
    }
    None
}

fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly<Rat> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let scale = (xi.clone() - xj.clone()).inv();
                basis = basis * Poly::linear_root(xj.clone()).scale(&scale);
            }
        }
        acc = acc + basis;
    }
    acc
}

/// The unique rational root of a linear factor.
pub fn linear_root(f: &Poly<Rat>) -> Option<Rat> {
    if f.degree() == Some(1) {
        Some(-f.coeff(0) / f.coeff(1))
    } else {
        None
    }
}
