//! Coefficient domains.
//!
//! A [`Field`] is a context object: elements are plain values and every
//! operation goes through the context, so the same polynomial and curve code
//! runs over `F_q`, over `Q` and over multi-quadratic towers.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field: Clone + Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Some square root of `a`, if `a` is a square.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        let d = self.inv(&self.from_int(q.denom()))?;
        Some(self.mul(&self.from_int(q.numer()), &d))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// A field with finitely many elements and a fixed enumeration order.
pub trait FiniteField: Field {
    fn order(&self) -> u64;
    fn elements(&self) -> Vec<Self::Elem>;

    /// Euler criterion.
    fn is_square(&self, a: &Self::Elem) -> bool {
        self.is_zero(a) || self.is_one(&self.pow(a, (self.order() - 1) / 2))
    }
}

/// Tonelli–Shanks over any finite field of odd order.
pub fn tonelli_shanks<F: FiniteField>(f: &F, a: &F::Elem) -> Option<F::Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    if !f.is_square(a) {
        return None;
    }
    let q = f.order();
    let mut s = 0;
    let mut odd = q - 1;
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let z = f
        .elements()
        .into_iter()
        .find(|e| !f.is_zero(e) && !f.is_square(e))
        .expect("odd order field has non-squares");
    let mut m = s;
    let mut c = f.pow(&z, odd);
    let mut t = f.pow(a, odd);
    let mut r = f.pow(a, (odd + 1) / 2);
    while !f.is_one(&t) {
        let mut i = 0;
        let mut tt = t.clone();
        while !f.is_one(&tt) {
            tt = f.square(&tt);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.square(&b);
        }
        m = i;
        c = f.square(&b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        rational_sqrt(a)
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
}

/// Exact integer square root, if `n` is a perfect square.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn rational_sqrt(a: &BigRational) -> Option<BigRational> {
    let n = int_sqrt_exact(a.numer())?;
    let d = int_sqrt_exact(a.denom())?;
    Some(BigRational::new(n, d))
}

/// Squarefree part of a nonzero integer, sign kept.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "squarefree part of zero");
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    out *= m;
    if n.is_negative() {
        -out
    } else {
        out
    }
}

/// Squarefree class of a nonzero rational (numerator times denominator).
pub fn rational_squarefree_part(q: &BigRational) -> BigInt {
    squarefree_part(&(q.numer() * q.denom()))
}

/// `F[t]/(t^2 - r)` for a non-square `r` of the finite base field.
#[derive(Clone, Debug)]
pub struct QuadExt<F: FiniteField> {
    base: F,
    r: F::Elem,
}

impl<F: FiniteField> QuadExt<F> {
    pub fn new(base: F, r: F::Elem) -> Self {
        assert!(!base.is_square(&r), "QuadExt needs a non-square");
        QuadExt { base, r }
    }

    /// Uses the first non-square in the base enumeration order.
    pub fn over(base: F) -> Self {
        let r = base
            .elements()
            .into_iter()
            .find(|e| !base.is_square(e))
            .expect("odd order field has non-squares");
        QuadExt { base, r }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn r(&self) -> &F::Elem {
        &self.r
    }

    pub fn embed(&self, a: &F::Elem) -> (F::Elem, F::Elem) {
        (a.clone(), self.base.zero())
    }

    pub fn gen(&self) -> (F::Elem, F::Elem) {
        (self.base.zero(), self.base.one())
    }

    pub fn norm(&self, a: &(F::Elem, F::Elem)) -> F::Elem {
        let b = &self.base;
        b.sub(&b.square(&a.0), &b.mul(&self.r, &b.square(&a.1)))
    }
}

impl<F: FiniteField> Field for QuadExt<F> {
    type Elem = (F::Elem, F::Elem);

    fn zero(&self) -> Self::Elem {
        (self.base.zero(), self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.base.one(), self.base.zero())
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        (self.base.from_int(n), self.base.zero())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.base;
        let c0 = f.add(&f.mul(&a.0, &b.0), &f.mul(&self.r, &f.mul(&a.1, &b.1)));
        let c1 = f.add(&f.mul(&a.0, &b.1), &f.mul(&a.1, &b.0));
        (c0, c1)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let n = self.base.inv(&self.norm(a))?;
        Some((self.base.mul(&a.0, &n), self.base.neg(&self.base.mul(&a.1, &n))))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    /// Norm method: with `n^2 = N(a)`, one of `(a0 ± n) / 2` is a square `x^2`
    /// and then `a = (x + (a1 / 2x) t)^2`.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let f = &self.base;
        let z = f.zero();
        if f.is_zero(&a.1) {
            if let Some(s) = f.sqrt(&a.0) {
                return Some((s, z));
            }
            let s = f.sqrt(&f.div(&a.0, &self.r)?)?;
            return Some((z, s));
        }
        let n = f.sqrt(&self.norm(a))?;
        let half = f.inv(&f.from_i64(2))?;
        for cand in [f.add(&a.0, &n), f.sub(&a.0, &n)] {
            if let Some(x) = f.sqrt(&f.mul(&cand, &half)) {
                if f.is_zero(&x) {
                    continue;
                }
                let y = f.div(&f.mul(&a.1, &half), &x)?;
                return Some((x, y));
            }
        }
        None
    }
}

impl<F: FiniteField> FiniteField for QuadExt<F> {
    fn order(&self) -> u64 {
        self.base.order() * self.base.order()
    }
    fn elements(&self) -> Vec<Self::Elem> {
        let els = self.base.elements();
        let mut out = Vec::with_capacity(els.len() * els.len());
        for c1 in &els {
            for c0 in &els {
                out.push((c0.clone(), c1.clone()));
            }
        }
        out
    }
    /// Norm criterion: `a` is a square iff its norm is a square in the base.
    fn is_square(&self, a: &Self::Elem) -> bool {
        self.base.is_square(&self.norm(a))
    }
}
