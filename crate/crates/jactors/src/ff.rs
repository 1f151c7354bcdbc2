//! Prime fields `F_p` and their quadratic extensions `F_p[t]/(t^2 - r)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::poly::{Field, FiniteField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("even characteristic is not supported")]
    EvenCharacteristic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} is not 1 or 2")]
    BadDegree(u32),
    #[error("coordinates ({0}, {1}) out of range for this field")]
    OutOfRange(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `F_p` (k = 1) or `F_p[t]/(t^2 - r)` (k = 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    k: u32,
    r: u64,
}

/// Coordinates in the basis `{1, t}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    pub c0: u64,
    pub c1: u64,
}

fn euler_is_residue(a: u64, p: u64) -> bool {
    a % p == 0 || powmod(a % p, (p - 1) / 2, p) == 1
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

impl FieldDesc {
    pub fn new(p: u64, k: u32) -> Result<FieldDesc, FfError> {
        if p == 2 {
            return Err(FfError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        if k != 1 && k != 2 {
            return Err(FfError::BadDegree(k));
        }
        let mut r = 0;
        if k == 2 {
            // scan order -1, 2, 3, ...
            r = std::iter::once(p - 1)
                .chain(2..p - 1)
                .find(|&c| !euler_is_residue(c, p))
                .expect("odd prime has a non-residue");
        }
        Ok(FieldDesc { p, k, r })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The defining non-residue as a signed representative (`-1` printed as `-1`).
    pub fn r(&self) -> Option<i64> {
        if self.k == 1 {
            None
        } else if self.r == self.p - 1 {
            Some(-1)
        } else {
            Some(self.r as i64)
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn elem(&self, c0: u64, c1: u64) -> Result<FqElem, FfError> {
        if c0 >= self.p || c1 >= self.p || (self.k == 1 && c1 != 0) {
            return Err(FfError::OutOfRange(c0, c1));
        }
        Ok(FqElem { c0, c1 })
    }

    pub fn from_u64(&self, n: u64) -> FqElem {
        FqElem { c0: n % self.p, c1: 0 }
    }

    pub fn from_i64_residue(&self, n: i64) -> FqElem {
        FqElem { c0: n.rem_euclid(self.p as i64) as u64, c1: 0 }
    }

    /// The generator `t` of `F_{p^2}`.
    pub fn t(&self) -> FqElem {
        assert_eq!(self.k, 2, "t only exists in F_p^2");
        FqElem { c0: 0, c1: 1 }
    }

    fn addp(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn subp(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn checked_div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, FfError> {
        self.div(a, b).ok_or(FfError::DivisionByZero)
    }

    /// `x -> x^p`; on `F_{p^2}` this is `c0 + c1 t -> c0 - c1 t`.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        FqElem { c0: a.c0, c1: if a.c1 == 0 { 0 } else { self.p - a.c1 } }
    }

    /// Norm to `F_p`.
    pub fn norm(&self, a: &FqElem) -> u64 {
        let p = self.p;
        self.subp(mulmod(a.c0, a.c0, p), mulmod(self.r, mulmod(a.c1, a.c1, p), p))
    }

    /// Tonelli–Shanks in the prime field.
    fn sqrt_p(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if !euler_is_residue(a, p) {
            return None;
        }
        let mut s = 0;
        let mut odd = p - 1;
        while odd % 2 == 0 {
            odd /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| !euler_is_residue(z, p)).unwrap();
        let mut m = s;
        let mut c = powmod(z, odd, p);
        let mut t = powmod(a, odd, p);
        let mut r = powmod(a, (odd + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = mulmod(tt, tt, p);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = mulmod(b, b, p);
            }
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
        Some(r)
    }

    /// Both square roots `(s, -s)`, if `a` is a square.
    pub fn sqrt_pair(&self, a: &FqElem) -> Option<(FqElem, FqElem)> {
        let s = self.sqrt(a)?;
        Some((s, self.neg(&s)))
    }

    /// All `p^k` elements, `c1`-major then `c0`.
    pub fn enumerate(&self) -> Vec<FqElem> {
        self.elements()
    }

    pub fn to_i64_symmetric(&self, a: &FqElem) -> Option<i64> {
        if a.c1 != 0 {
            return None;
        }
        let c = a.c0 as i64;
        let p = self.p as i64;
        Some(if c > p / 2 { c - p } else { c })
    }

    pub fn fmt_elem(&self, a: &FqElem) -> String {
        if self.k == 1 || a.c1 == 0 {
            format!("{}", a.c0)
        } else if a.c0 == 0 {
            format!("{}*t", a.c1)
        } else {
            format!("{}+{}*t", a.c0, a.c1)
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^2 (t^2 = {})", self.p, self.r().unwrap())
        }
    }
}

impl Field for FieldDesc {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem { c0: 0, c1: 0 }
    }
    fn one(&self) -> FqElem {
        FqElem { c0: 1, c1: 0 }
    }
    fn from_int(&self, n: &BigInt) -> FqElem {
        let r = n.mod_floor(&BigInt::from(self.p));
        FqElem { c0: r.to_u64().unwrap(), c1: 0 }
    }
    fn from_i64(&self, n: i64) -> FqElem {
        self.from_i64_residue(n)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem { c0: self.addp(a.c0, b.c0), c1: self.addp(a.c1, b.c1) }
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem { c0: self.subp(a.c0, b.c0), c1: self.subp(a.c1, b.c1) }
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        if self.k == 1 {
            return FqElem { c0: mulmod(a.c0, b.c0, p), c1: 0 };
        }
        let c0 = self.addp(mulmod(a.c0, b.c0, p), mulmod(self.r, mulmod(a.c1, b.c1, p), p));
        let c1 = self.addp(mulmod(a.c0, b.c1, p), mulmod(a.c1, b.c0, p));
        FqElem { c0, c1 }
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        self.sub(&self.zero(), a)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.p;
        if self.k == 1 {
            return Some(FqElem { c0: powmod(a.c0, p - 2, p), c1: 0 });
        }
        let n = powmod(self.norm(a), p - 2, p);
        Some(FqElem { c0: mulmod(a.c0, n, p), c1: mulmod(self.subp(0, a.c1), n, p) })
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.c0 == 0 && a.c1 == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    /// `F_p`: Tonelli–Shanks. `F_{p^2}`: square root of the norm in `F_p`,
    /// then `u^2 = (x ± n)/2` in `F_p` and `w = y/(2u)`.
    fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        if self.k == 1 {
            return self.sqrt_p(a.c0).map(|c0| FqElem { c0, c1: 0 });
        }
        let p = self.p;
        let half = (p + 1) / 2;
        if a.c1 == 0 {
            if let Some(s) = self.sqrt_p(a.c0) {
                return Some(FqElem { c0: s, c1: 0 });
            }
            let x_over_r = mulmod(a.c0, powmod(self.r, p - 2, p), p);
            return self.sqrt_p(x_over_r).map(|s| FqElem { c0: 0, c1: s });
        }
        let n = self.sqrt_p(self.norm(a))?;
        for cand in [self.addp(a.c0, n), self.subp(a.c0, n)] {
            let u2 = mulmod(cand, half, p);
            if u2 == 0 {
                continue;
            }
            if let Some(u) = self.sqrt_p(u2) {
                let w = mulmod(a.c1, powmod(mulmod(2, u, p), p - 2, p), p);
                let s = FqElem { c0: u, c1: w };
                if self.mul(&s, &s) == *a {
                    return Some(s);
                }
            }
        }
        None
    }
    fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl FiniteField for FieldDesc {
    fn order(&self) -> u64 {
        self.q()
    }
    fn elements(&self) -> Vec<FqElem> {
        let c1max = if self.k == 1 { 1 } else { self.p };
        let mut out = Vec::with_capacity(self.q() as usize);
        for c1 in 0..c1max {
            for c0 in 0..self.p {
                out.push(FqElem { c0, c1 });
            }
        }
        out
    }
    fn is_square(&self, a: &FqElem) -> bool {
        if self.k == 1 {
            euler_is_residue(a.c0, self.p)
        } else {
            euler_is_residue(self.norm(a), self.p)
        }
    }
}
