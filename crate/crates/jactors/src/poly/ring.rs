//! Dense univariate polynomials, constant term first.

use num_bigint::BigInt;
use thiserror::Error;

use super::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("inexact division")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Coefficients `c[0] + c[1] x + ...`; no trailing zeros, so the zero
/// polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    c: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.c
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lc(&self) -> Option<&E> {
        self.c.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.c.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

/// Polynomial arithmetic over a coefficient field.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    f: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(f: F) -> Self {
        PolyRing { f }
    }

    pub fn field(&self) -> &F {
        &self.f
    }

    pub fn from_coeffs(&self, mut c: Vec<F::Elem>) -> Poly<F::Elem> {
        while c.last().map_or(false, |e| self.f.is_zero(e)) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(&self, c: &[i64]) -> Poly<F::Elem> {
        self.from_coeffs(c.iter().map(|&n| self.f.from_i64(n)).collect())
    }

    pub fn from_bigints(&self, c: &[BigInt]) -> Poly<F::Elem> {
        self.from_coeffs(c.iter().map(|n| self.f.from_int(n)).collect())
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { c: vec![] }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.f.one())
    }

    pub fn x(&self) -> Poly<F::Elem> {
        Poly { c: vec![self.f.zero(), self.f.one()] }
    }

    pub fn constant(&self, a: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![a])
    }

    /// `x - a`
    pub fn linear_root(&self, a: &F::Elem) -> Poly<F::Elem> {
        Poly { c: vec![self.f.neg(a), self.f.one()] }
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.c.len().max(b.c.len());
        let z = self.f.zero();
        let c = (0..n)
            .map(|i| self.f.add(a.c.get(i).unwrap_or(&z), b.c.get(i).unwrap_or(&z)))
            .collect();
        self.from_coeffs(c)
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.c.len().max(b.c.len());
        let z = self.f.zero();
        let c = (0..n)
            .map(|i| self.f.sub(a.c.get(i).unwrap_or(&z), b.c.get(i).unwrap_or(&z)))
            .collect();
        self.from_coeffs(c)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly { c: a.c.iter().map(|e| self.f.neg(e)).collect() }
    }

    pub fn scale(&self, a: &Poly<F::Elem>, s: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.c.iter().map(|e| self.f.mul(e, s)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut c = vec![self.f.zero(); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if self.f.is_zero(x) {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                c[i + j] = self.f.add(&c[i + j], &self.f.mul(x, y));
            }
        }
        self.from_coeffs(c)
    }

    pub fn square(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Poly<F::Elem>, e: u32) -> Poly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, a: &Poly<F::Elem>, k: usize) -> Poly<F::Elem> {
        if a.is_zero() {
            return self.zero();
        }
        let mut c = vec![self.f.zero(); k];
        c.extend(a.c.iter().cloned());
        Poly { c }
    }

    pub fn divrem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Result<(Poly<F::Elem>, Poly<F::Elem>), PolyError> {
        let lb = b.lc().ok_or(PolyError::DivisionByZero)?;
        let inv = self.f.inv(lb).expect("nonzero leading coefficient is invertible");
        let db = b.c.len() - 1;
        let mut r = a.c.clone();
        if r.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let mut q = vec![self.f.zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let top = &r[i + db];
            if self.f.is_zero(top) {
                continue;
            }
            let coef = self.f.mul(top, &inv);
            for (j, bj) in b.c.iter().enumerate() {
                r[i + j] = self.f.sub(&r[i + j], &self.f.mul(&coef, bj));
            }
            q[i] = coef;
        }
        r.truncate(db);
        Ok((self.from_coeffs(q), self.from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.c.len() < b.c.len() {
            return a.clone();
        }
        self.divrem(a, b).expect("nonzero divisor").1
    }

    pub fn exact_div(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>, PolyError> {
        let (q, r) = self.divrem(a, b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    pub fn divides(&self, b: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        !b.is_zero() && self.rem(a, b).is_zero()
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lc() {
            None => self.zero(),
            Some(l) => {
                let inv = self.f.inv(l).unwrap();
                self.scale(a, &inv)
            }
        }
    }

    pub fn is_monic(&self, a: &Poly<F::Elem>) -> bool {
        a.lc().map_or(false, |l| self.f.is_one(l))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `g = s a + t b` and `g` monic.
    pub fn xgcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).unwrap();
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = self.f.inv(l).unwrap();
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let c = a
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, e)| self.f.mul(&self.f.from_i64(i as i64), e))
            .collect();
        self.from_coeffs(c)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let mut acc = self.f.zero();
        for c in a.c.iter().rev() {
            acc = self.f.add(&self.f.mul(&acc, x), c);
        }
        acc
    }

    /// `a(b(x))`
    pub fn compose(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut acc = self.zero();
        for c in a.c.iter().rev() {
            acc = self.add(&self.mul(&acc, b), &self.constant(c.clone()));
        }
        acc
    }

    /// Resultant by the Euclidean algorithm over the field.
    pub fn resultant(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> F::Elem {
        let f = &self.f;
        if a.is_zero() || b.is_zero() {
            return f.zero();
        }
        let mut a = a.clone();
        let mut b = b.clone();
        let mut acc = f.one();
        loop {
            let da = a.c.len() - 1;
            let db = b.c.len() - 1;
            if db == 0 {
                return f.mul(&acc, &f.pow(&b.c[0], da as u64));
            }
            let r = self.rem(&a, &b);
            if r.is_zero() {
                return f.zero();
            }
            let dr = r.c.len() - 1;
            // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, r)
            let mut factor = f.pow(b.lc().unwrap(), (da - dr) as u64);
            if (da * db) % 2 == 1 {
                factor = f.neg(&factor);
            }
            acc = f.mul(&acc, &factor);
            a = b;
            b = r;
        }
    }

    /// `(-1)^(n(n-1)/2) res(a, a') / lc(a)`.
    pub fn discriminant(&self, a: &Poly<F::Elem>) -> F::Elem {
        let f = &self.f;
        let n = a.c.len().saturating_sub(1);
        if n == 0 {
            return f.one();
        }
        let r = self.resultant(a, &self.derivative(a));
        let r = f.div(&r, a.lc().unwrap()).unwrap();
        if (n * (n - 1) / 2) % 2 == 1 {
            f.neg(&r)
        } else {
            r
        }
    }

    /// `a^e mod m`.
    pub fn pow_mod(&self, a: &Poly<F::Elem>, mut e: u64, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
            base = self.rem(&self.mul(&base, &base), m);
            e >>= 1;
        }
        acc
    }

    pub fn map<G: Field>(&self, a: &Poly<F::Elem>, to: &PolyRing<G>, h: impl Fn(&F::Elem) -> G::Elem) -> Poly<G::Elem> {
        to.from_coeffs(a.c.iter().map(h).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Rationals;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn gcd_and_discriminant() {
        let r = PolyRing::new(Rationals);
        let a = r.from_ints(&[-1, 0, 1]);
        let b = r.from_ints(&[1, -2, 1]);
        assert_eq!(r.gcd(&a, &b), r.from_ints(&[-1, 1]));
        assert_eq!(r.discriminant(&r.from_ints(&[-531, -66, 1])), q(6480));
        assert_eq!(r.discriminant(&r.from_ints(&[981, 6, 1])), q(-3888));
        // x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(r.discriminant(&r.from_ints(&[1, -1, 0, 1])), q(4 - 27));
        let f14 = r.mul(&r.from_ints(&[33, 1]), &r.from_ints(&[414, -33, 1]));
        assert_eq!(r.eval(&f14, &q(-33)), q(0));
    }

    #[test]
    fn exact_division_reports_inexact() {
        let r = PolyRing::new(Rationals);
        let a = r.from_ints(&[-1, 0, 1]);
        assert_eq!(r.exact_div(&a, &r.from_ints(&[1, 1])).unwrap(), r.from_ints(&[-1, 1]));
        assert_eq!(r.exact_div(&a, &r.from_ints(&[2, 1])), Err(PolyError::InexactDivision));
        assert_eq!(r.exact_div(&a, &r.zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn xgcd_identity() {
        let r = PolyRing::new(Rationals);
        let a = r.from_ints(&[1, 0, 0, 1]);
        let b = r.from_ints(&[-1, 0, 1]);
        let (g, s, t) = r.xgcd(&a, &b);
        assert_eq!(g, r.from_ints(&[1, 1]));
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
    }
}
