//! Rational factors of degree at most 2.
//!
//! The polynomial is made primitive and squarefree, reduced modulo a prime of
//! good reduction, and its roots in `F_p` and `F_{p^2}` are found by
//! exhaustive evaluation. Every degree-≤2 product of modular factors is
//! Hensel lifted (Newton iteration on the roots) past the coefficient bound
//! and tested by exact division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::field::{squarefree_part, Field, FiniteField, Rationals};
use super::ring::{Poly, PolyRing};
use crate::ff::{is_prime, FieldDesc, FqElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("expected a quadratic")]
    NotQuadratic,
}

/// Integer polynomial, constant term first.
pub type IntPoly = Vec<BigInt>;

fn trim(mut c: IntPoly) -> IntPoly {
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    c
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(c: &[BigInt]) -> IntPoly {
    let g = content(c);
    if g.is_zero() {
        return vec![];
    }
    let mut out: IntPoly = c.iter().map(|x| x / &g).collect();
    if out.last().unwrap().is_negative() {
        out.iter_mut().for_each(|x| *x = -x.clone());
    }
    trim(out)
}

/// Integer polynomial proportional to a rational one.
pub fn clear_denominators(f: &Poly<BigRational>) -> IntPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive(&f.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect::<Vec<_>>())
}

pub fn to_rational_poly(c: &[BigInt]) -> Poly<BigRational> {
    PolyRing::new(Rationals).from_bigints(c)
}

fn reduce_mod(c: &[BigInt], fp: &FieldDesc) -> Poly<FqElem> {
    PolyRing::new(*fp).from_bigints(c)
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

fn derivative(c: &[BigInt]) -> IntPoly {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

/// Element `a + b t` of `(Z/m)[t]/(t^2 - r)`.
#[derive(Clone)]
struct Q2 {
    a: BigInt,
    b: BigInt,
}

fn q2_mul(x: &Q2, y: &Q2, r: &BigInt, m: &BigInt) -> Q2 {
    Q2 {
        a: (&x.a * &y.a + r * &x.b * &y.b).mod_floor(m),
        b: (&x.a * &y.b + &x.b * &y.a).mod_floor(m),
    }
}

fn q2_eval(c: &[BigInt], x: &Q2, r: &BigInt, m: &BigInt) -> Q2 {
    let mut acc = Q2 { a: BigInt::zero(), b: BigInt::zero() };
    for a in c.iter().rev() {
        acc = q2_mul(&acc, x, r, m);
        acc.a = (&acc.a + a).mod_floor(m);
    }
    acc
}

fn q2_inv(x: &Q2, r: &BigInt, m: &BigInt) -> Option<Q2> {
    let n = (&x.a * &x.a - r * &x.b * &x.b).mod_floor(m);
    let ni = modinv(&n, m)?;
    Some(Q2 { a: (&x.a * &ni).mod_floor(m), b: (-&x.b * &ni).mod_floor(m) })
}

fn lift_root(c: &[BigInt], root: u64, p: u64, target: &BigInt) -> BigInt {
    let dc = derivative(c);
    let mut m = BigInt::from(p);
    let mut x = BigInt::from(root);
    while &m < target {
        m = &m * &m;
        let fx = eval_mod(c, &x, &m);
        let inv = modinv(&eval_mod(&dc, &x, &m), &m).expect("simple root");
        x = (&x - fx * inv).mod_floor(&m);
    }
    x
}

fn lift_root2(c: &[BigInt], root: FqElem, p: u64, r: &BigInt, target: &BigInt) -> Q2 {
    let dc = derivative(c);
    let mut m = BigInt::from(p);
    let mut x = Q2 { a: BigInt::from(root.c0), b: BigInt::from(root.c1) };
    while &m < target {
        m = &m * &m;
        let fx = q2_eval(c, &x, r, &m);
        let inv = q2_inv(&q2_eval(&dc, &x, r, &m), r, &m).expect("simple root");
        let step = q2_mul(&fx, &inv, r, &m);
        x = Q2 { a: (&x.a - step.a).mod_floor(&m), b: (&x.b - step.b).mod_floor(&m) };
    }
    x
}

fn symmetric(a: &BigInt, m: &BigInt) -> BigInt {
    let a = a.mod_floor(m);
    if &a * 2 > *m {
        a - m
    } else {
        a
    }
}

fn int_divides(d: &[BigInt], f: &[BigInt]) -> Option<IntPoly> {
    let r = PolyRing::new(Rationals);
    let q = r.exact_div(&to_rational_poly(f), &to_rational_poly(d)).ok()?;
    if q.coeffs().iter().all(|c| c.is_integer()) {
        Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
    } else {
        None
    }
}

const FILTER_PRIME: u64 = 1_000_000_007;

fn quick_divides(d: &[BigInt], f: &[BigInt]) -> bool {
    let fp = FieldDesc::new(FILTER_PRIME, 1).unwrap();
    let r = PolyRing::new(fp);
    let dp = reduce_mod(d, &fp);
    if dp.degree() != Some(d.len() - 1) {
        return true;
    }
    r.rem(&reduce_mod(f, &fp), &dp).is_zero()
}

struct Modular {
    p: u64,
    lin: Vec<u64>,
    quad: Vec<FqElem>,
}

fn modular_roots(g: &[BigInt], p: u64) -> Option<Modular> {
    let fp = FieldDesc::new(p, 1).ok()?;
    let rp = PolyRing::new(fp);
    let gp = reduce_mod(g, &fp);
    if gp.degree() != Some(g.len() - 1) {
        return None;
    }
    if rp.gcd(&gp, &rp.derivative(&gp)).degree() != Some(0) {
        return None;
    }
    let fq = FieldDesc::new(p, 2).unwrap();
    let rq = PolyRing::new(fq);
    let gq = reduce_mod(g, &fq);
    let mut lin = vec![];
    let mut quad = vec![];
    for a in fq.elements() {
        if !fq.is_zero(&rq.eval(&gq, &a)) {
            continue;
        }
        if a.c1 == 0 {
            lin.push(a.c0);
        } else if a.c1 <= p / 2 {
            // one representative per conjugate pair
            quad.push(a);
        }
    }
    Some(Modular { p, lin, quad })
}

/// Primitive integer factors of degree 1 and 2 (positive leading coefficient;
/// monic whenever the factor is), sorted by degree then coefficients.
pub fn quadratic_factor_extraction(f: &Poly<BigRational>) -> Result<Vec<IntPoly>, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let rq = PolyRing::new(Rationals);
    let sqf = rq.exact_div(f, &rq.gcd(f, &rq.derivative(f))).unwrap();
    let mut g = clear_denominators(&sqf);
    let mut out: Vec<IntPoly> = vec![];
    if g.len() <= 1 {
        return Ok(out);
    }
    if g[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        g.remove(0);
    }
    if g.len() <= 1 {
        return Ok(out);
    }
    if g.len() <= 3 {
        // already degree <= 2
        if g.len() == 2 {
            out.push(primitive(&g));
        } else if let Some(fs) = split_quadratic(&g) {
            out.extend(fs);
        } else {
            out.push(primitive(&g));
        }
        return Ok(sorted(out));
    }
    // cheapest of the first few good primes
    let mut best: Option<Modular> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 6 {
        if is_prime(p) {
            if let Some(m) = modular_roots(&g, p) {
                tried += 1;
                let cost = |m: &Modular| m.lin.len() * m.lin.len() + m.quad.len();
                if best.as_ref().map_or(true, |b| cost(&m) < cost(b)) {
                    best = Some(m);
                }
            }
        }
        p += 2;
    }
    let m = best.expect("some prime is good");
    let norm2: BigInt = g.iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1) * 8;
    let lc = g.last().unwrap().clone();
    let p = m.p;
    let fq = FieldDesc::new(p, 2).unwrap();
    let r = BigInt::from(fq.r().unwrap());

    let lifted: Vec<BigInt> = m.lin.iter().map(|&a| lift_root(&g, a, p, &bound)).collect();
    let mut candidates: Vec<(IntPoly, BigInt)> = vec![];
    for x in &lifted {
        let mm = modulus_of(p, &bound);
        candidates.push((vec![-x.clone(), BigInt::one()], mm));
    }
    for i in 0..lifted.len() {
        for j in i + 1..lifted.len() {
            let mm = modulus_of(p, &bound);
            let (a, b) = (&lifted[i], &lifted[j]);
            candidates.push((vec![a * b, -(a + b), BigInt::one()], mm));
        }
    }
    for root in &m.quad {
        let mm = modulus_of(p, &bound);
        let x = lift_root2(&g, *root, p, &r, &bound);
        let c0 = (&x.a * &x.a - &r * &x.b * &x.b).mod_floor(&mm);
        let c1 = (-(&x.a * BigInt::from(2))).mod_floor(&mm);
        candidates.push((vec![c0, c1, BigInt::one()], mm));
    }
    for (cand, mm) in candidates {
        let scaled: IntPoly = cand.iter().map(|c| symmetric(&(c * &lc), &mm)).collect();
        let prim = primitive(&scaled);
        if prim.len() != cand.len() {
            continue;
        }
        if prim.len() == 3 && is_reducible_quadratic(&prim) {
            continue;
        }
        if !quick_divides(&prim, &g) {
            continue;
        }
        if int_divides(&prim, &g).is_some() && !out.contains(&prim) {
            out.push(prim);
        }
    }
    Ok(sorted(out))
}

fn modulus_of(p: u64, bound: &BigInt) -> BigInt {
    let mut m = BigInt::from(p);
    while &m < bound {
        m = &m * &m;
    }
    m
}

fn is_reducible_quadratic(c: &[BigInt]) -> bool {
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
    !disc.is_negative() && super::field::int_sqrt_exact(&disc).is_some()
}

/// Rational linear factors of a quadratic with square discriminant.
fn split_quadratic(c: &[BigInt]) -> Option<Vec<IntPoly>> {
    let c = primitive(c);
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
    let s = super::field::int_sqrt_exact(&disc)?;
    let two_a: BigInt = &c[2] * BigInt::from(2);
    let mut out = vec![];
    for sign in [1i32, -1] {
        let num = -&c[1] + if sign == 1 { s.clone() } else { -s.clone() };
        // root num / two_a, factor two_a x - num
        let f = primitive(&[-num, two_a.clone()]);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Some(out)
}

fn sorted(mut v: Vec<IntPoly>) -> Vec<IntPoly> {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
    v.dedup();
    v
}

/// Squarefree part of the discriminant of a quadratic; 1 if it splits.
pub fn splitting_quadratic_field(f: &Poly<BigRational>) -> Result<i64, FactorError> {
    if f.degree() != Some(2) {
        return Err(FactorError::NotQuadratic);
    }
    let c = clear_denominators(f);
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
    if disc.is_zero() {
        return Ok(1);
    }
    Ok(squarefree_part(&disc).to_i64().expect("small discriminant"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rp(c: &[i64]) -> Poly<BigRational> {
        PolyRing::new(Rationals).from_ints(c)
    }

    #[test]
    fn cyclotomic_example() {
        let fs = quadratic_factor_extraction(&rp(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs, vec![ip(&[-1, 1]), ip(&[1, 1]), ip(&[1, 0, 1])]);
        let fs = quadratic_factor_extraction(&rp(&[1, 1, 1])).unwrap();
        assert_eq!(fs, vec![ip(&[1, 1, 1])]);
    }

    #[test]
    fn mixed_example() {
        // (2x - 1)(x^2 - 5)(x^2 + x + 1)(x^3 - 2)^2
        let r = PolyRing::new(Rationals);
        let parts = [rp(&[-1, 2]), rp(&[-5, 0, 1]), rp(&[1, 1, 1]), rp(&[-2, 0, 0, 1]), rp(&[-2, 0, 0, 1])];
        let f = parts.iter().fold(r.one(), |acc, p| r.mul(&acc, p));
        let fs = quadratic_factor_extraction(&f).unwrap();
        assert_eq!(fs, vec![ip(&[-1, 2]), ip(&[-5, 0, 1]), ip(&[1, 1, 1])]);
    }

    #[test]
    fn splitting_fields() {
        assert_eq!(splitting_quadratic_field(&rp(&[-531, -66, 1])), Ok(5));
        assert_eq!(splitting_quadratic_field(&rp(&[981, 6, 1])), Ok(-3));
        assert_eq!(splitting_quadratic_field(&rp(&[1, -2, 1])), Ok(1));
        assert_eq!(splitting_quadratic_field(&rp(&[1, 1])), Err(FactorError::NotQuadratic));
    }
}
