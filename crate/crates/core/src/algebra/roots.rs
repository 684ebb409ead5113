//! Extraction of roots lying in ℚ or a quadratic extension.
//!
//! Rational roots come from the rational-root theorem; quadratic roots
//! from rational quadratic factors found by bounded divisor search. For a
//! polynomial with coefficients in ℚ(√d) the candidates are read off its
//! norm `p·p̄ ∈ ℚ[u]`. Anything left over is reported, never guessed.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quad::{QuadNumber, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Cap on divisor/coefficient candidates tried by the quadratic-factor search.
const SEARCH_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: QuadNumber,
    pub multiplicity: usize,
}

/// All roots of `p` with multiplicities; errors if some factor has roots
/// outside the quadratic tower of `p`.
pub fn roots_in_tower(p: &UniPoly) -> Result<Vec<Root>> {
    let (roots, rest) = roots_partial(p)?;
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::UnsolvableSingularLocus(rest.display_in("u")));
    }
    Ok(roots)
}

/// Roots found in the tower plus the cofactor that could not be split.
pub fn roots_partial(p: &UniPoly) -> Result<(Vec<Root>, UniPoly)> {
    if p.is_zero() {
        return Err(Error::InvalidInput("roots of the zero polynomial".into()));
    }
    let tower = p.tower()?;
    let candidates = if p.is_rational() {
        rational_candidates(p)
    } else {
        let norm = p * &p.conj();
        rational_candidates(&norm)
    };
    let mut rest = p.clone();
    let mut roots = Vec::new();
    for c in candidates {
        if QuadNumber::join_tower(tower, c.tower()).is_err() {
            continue;
        }
        let (r, m) = rest.deflate(&c);
        if m > 0 {
            roots.push(Root {
                value: c,
                multiplicity: m,
            });
            rest = r;
        }
    }
    roots.sort_by(|a, b| cmp_quad(&a.value, &b.value));
    Ok((roots, rest))
}

/// Deterministic total order used to sort roots and points.
pub fn cmp_quad(a: &QuadNumber, b: &QuadNumber) -> Ordering {
    a.radicand()
        .cmp(&b.radicand())
        .then_with(|| a.rational_part().cmp(b.rational_part()))
        .then_with(|| a.surd_part().cmp(b.surd_part()))
}

/// Candidate roots (rational and quadratic) of a polynomial with rational
/// coefficients; every returned value is a genuine root.
fn rational_candidates(p: &UniPoly) -> Vec<QuadNumber> {
    let mut ints = to_primitive_integer(p);
    let mut out = Vec::new();
    // zero roots
    if ints.first().is_some_and(|c| c.is_zero()) {
        out.push(QuadNumber::zero());
        while ints.first().is_some_and(|c| c.is_zero()) {
            ints.remove(0);
        }
    }
    // rational roots
    loop {
        if ints.len() <= 1 {
            break;
        }
        match find_rational_root(&ints) {
            Some(r) => {
                out.push(QuadNumber::from_rational(r.clone()));
                ints = divide_out_rational_root(&ints, &r);
            }
            None => break,
        }
    }
    // quadratic factors
    loop {
        let deg = ints.len().saturating_sub(1);
        if deg < 2 {
            break;
        }
        let quad = if deg == 2 {
            Some((ints[2].clone(), ints[1].clone(), ints[0].clone()))
        } else {
            find_quadratic_factor(&ints)
        };
        let Some((a, b, c)) = quad else { break };
        out.extend(quadratic_roots(&a, &b, &c));
        ints = divide_int_poly(&ints, &[c, b, a]);
        if deg == 2 {
            break;
        }
    }
    out
}

fn quadratic_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<QuadNumber> {
    let a = Rational::from_integer(a.clone());
    let b = Rational::from_integer(b.clone());
    let c = Rational::from_integer(c.clone());
    let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &a * &c;
    let Ok(s) = QuadNumber::sqrt_rational(&disc) else {
        return vec![];
    };
    let two_a = QuadNumber::from_rational(&a + &a);
    let mb = QuadNumber::from_rational(-b);
    vec![(&mb + &s) / &two_a, (&mb - &s) / &two_a]
}

fn to_primitive_integer(p: &UniPoly) -> Vec<BigInt> {
    let rs: Vec<Rational> = p
        .coeffs()
        .iter()
        .map(|c| c.as_rational().cloned().expect("rational coefficients"))
        .collect();
    let l = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rs.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(p: &[BigInt], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            ds.push(BigInt::from(d));
            if d * d != n {
                ds.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 10_000_000 {
            return None;
        }
    }
    ds.sort();
    Some(ds)
}

fn find_rational_root(p: &[BigInt]) -> Option<Rational> {
    let c0 = p.first()?;
    let cn = p.last()?;
    let ps = divisors(c0)?;
    let qs = divisors(cn)?;
    for q in &qs {
        for num in &ps {
            for s in [num.clone(), -num.clone()] {
                let r = Rational::new(s, q.clone());
                if eval_int(p, &r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn divide_out_rational_root(p: &[BigInt], r: &Rational) -> Vec<BigInt> {
    // divide by (q·u − s), which keeps integer coefficients by Gauss' lemma
    let lin = [-r.numer().clone(), r.denom().clone()];
    divide_int_poly(p, &lin)
}

fn divide_int_poly(p: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let n = p.len();
    let m = d.len();
    let mut rem: Vec<Rational> = p.iter().map(|c| Rational::from_integer(c.clone())).collect();
    let lead = Rational::from_integer(d[m - 1].clone());
    let mut quot = vec![Rational::zero(); n - m + 1];
    for k in (0..=n - m).rev() {
        let c = &rem[k + m - 1] / &lead;
        for (j, dc) in d.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &c * Rational::from_integer(dc.clone());
        }
        quot[k] = c;
    }
    let l = quot.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = quot
        .iter()
        .map(|r| (r * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

/// Searches a factor `a·u² + b·u + c` of a primitive integer polynomial
/// of degree ≥ 3 without rational roots.
fn find_quadratic_factor(p: &[BigInt]) -> Option<(BigInt, BigInt, BigInt)> {
    let c0 = p.first()?;
    let cn = p.last()?;
    let a_cands = divisors(cn)?;
    let c_cands = divisors(c0)?;
    // Cauchy bound on |roots|; |b/a| ≤ 2·bound
    let max_ratio = p[..p.len() - 1]
        .iter()
        .map(|c| Rational::new(c.abs(), cn.abs()))
        .max()?;
    let bound = (max_ratio + Rational::one()).ceil().to_integer();
    let mut tried = 0usize;
    for a in &a_cands {
        let bmax = (&bound * BigInt::from(2) * a).to_i64()?;
        for c in &c_cands {
            for c in [c.clone(), -c.clone()] {
                for b in -bmax..=bmax {
                    tried += 1;
                    if tried > SEARCH_CAP {
                        return None;
                    }
                    let b = BigInt::from(b);
                    let d = [c.clone(), b.clone(), a.clone()];
                    let disc = &b * &b - BigInt::from(4) * a * &c;
                    if disc.is_zero() {
                        continue;
                    }
                    if divides_exactly(p, &d) {
                        return Some((a.clone(), b, c));
                    }
                }
            }
        }
    }
    None
}

fn divides_exactly(p: &[BigInt], d: &[BigInt]) -> bool {
    let n = p.len();
    let m = d.len();
    if n < m {
        return false;
    }
    let mut rem: Vec<Rational> = p.iter().map(|c| Rational::from_integer(c.clone())).collect();
    let lead = Rational::from_integer(d[m - 1].clone());
    for k in (0..=n - m).rev() {
        let c = &rem[k + m - 1] / &lead;
        for (j, dc) in d.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &c * Rational::from_integer(dc.clone());
        }
    }
    rem[..m - 1].iter().all(|r| r.is_zero())
}
