//! x-only division polynomials.
//!
//! With `B = 4x^3 + b2 x^2 + 2 b4 x + b6` (the square of `ψ_2`), write
//! `f_n = ψ_n` for odd `n` and `f_n = ψ_n / ψ_2` for even `n`. The x-coordinates
//! of the nonzero points killed by `n` are the roots of `f_n` (odd `n`) or of
//! `f_n B` (even `n`).

use std::collections::HashMap;

use super::field::Field;
use super::ring::{Poly, PolyRing};

/// Long Weierstrass invariants `[a1, a2, a3, a4, a6]` over some field.
#[derive(Clone, Debug)]
pub struct LongWeierstrass<F: Field> {
    pub field: F,
    pub a: [F::Elem; 5],
}

impl<F: Field> LongWeierstrass<F> {
    pub fn new(field: F, a: [F::Elem; 5]) -> Self {
        LongWeierstrass { field, a }
    }

    /// `[b2, b4, b6, b8]`
    pub fn b_invariants(&self) -> [F::Elem; 4] {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let i = |n: i64| f.from_i64(n);
        let b2 = f.add(&f.mul(a1, a1), &f.mul(&i(4), a2));
        let b4 = f.add(&f.mul(&i(2), a4), &f.mul(a1, a3));
        let b6 = f.add(&f.mul(a3, a3), &f.mul(&i(4), a6));
        // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        let b8 = [
            f.mul(&f.mul(a1, a1), a6),
            f.mul(&i(4), &f.mul(a2, a6)),
            f.neg(&f.mul(&f.mul(a1, a3), a4)),
            f.mul(a2, &f.mul(a3, a3)),
            f.neg(&f.mul(a4, a4)),
        ]
        .iter()
        .fold(f.zero(), |acc, t| f.add(&acc, t));
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> F::Elem {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let i = |n: i64| f.from_i64(n);
        // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
        let t1 = f.neg(&f.mul(&f.mul(&b2, &b2), &b8));
        let t2 = f.mul(&i(-8), &f.mul(&b4, &f.mul(&b4, &b4)));
        let t3 = f.mul(&i(-27), &f.mul(&b6, &b6));
        let t4 = f.mul(&i(9), &f.mul(&b2, &f.mul(&b4, &b6)));
        f.add(&f.add(&t1, &t2), &f.add(&t3, &t4))
    }

    /// `4x^3 + b2 x^2 + 2 b4 x + b6`
    pub fn two_division_cubic(&self, ring: &PolyRing<F>) -> Poly<F::Elem> {
        let f = &self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        ring.from_coeffs(vec![b6, f.add(&b4, &b4), b2, f.from_i64(4)])
    }
}

/// `f_n` together with the parity flag; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionPoly<E> {
    pub n: u32,
    pub reduced: Poly<E>,
    pub psi2_squared: Poly<E>,
}

impl<E: Clone + PartialEq> DivisionPoly<E> {
    pub fn is_even(&self) -> bool {
        self.n % 2 == 0
    }
}

impl<E: Clone> DivisionPoly<E> {
    /// The polynomial whose roots are the x-coordinates of nonzero `n`-torsion.
    pub fn roots_poly<F: Field<Elem = E>>(&self, ring: &PolyRing<F>) -> Poly<E> {
        if self.n % 2 == 0 {
            ring.mul(&self.reduced, &self.psi2_squared)
        } else {
            self.reduced.clone()
        }
    }
}

struct Table<'a, F: Field> {
    ring: &'a PolyRing<F>,
    b: Poly<F::Elem>,
    memo: HashMap<u32, Poly<F::Elem>>,
}

impl<'a, F: Field> Table<'a, F> {
    fn get(&mut self, n: u32) -> Poly<F::Elem> {
        if let Some(p) = self.memo.get(&n) {
            return p.clone();
        }
        let r = self.ring;
        let out = if n % 2 == 1 {
            let m = (n - 1) / 2;
            let (f2, f1, f0, fm) = (self.get(m + 2), self.get(m + 1), self.get(m), self.get(m - 1));
            let left = r.mul(&f2, &r.pow(&f0, 3));
            let right = r.mul(&fm, &r.pow(&f1, 3));
            let bb = r.square(&self.b);
            if m % 2 == 0 {
                r.sub(&r.mul(&bb, &left), &right)
            } else {
                r.sub(&left, &r.mul(&bb, &right))
            }
        } else {
            let m = n / 2;
            let (f2, f1, f0, fm1, fm2) =
                (self.get(m + 2), self.get(m + 1), self.get(m), self.get(m - 1), self.get(m - 2));
            let inner = r.sub(&r.mul(&f2, &r.square(&fm1)), &r.mul(&fm2, &r.square(&f1)));
            r.mul(&f0, &inner)
        };
        self.memo.insert(n, out.clone());
        out
    }
}

fn table<'a, F: Field>(e: &LongWeierstrass<F>, ring: &'a PolyRing<F>) -> Table<'a, F> {
    let f = &e.field;
    let [b2, b4, b6, b8] = e.b_invariants();
    let i = |n: i64| f.from_i64(n);
    let b = e.two_division_cubic(ring);
    let psi3 = ring.from_coeffs(vec![b8.clone(), f.mul(&i(3), &b6), f.mul(&i(3), &b4), b2.clone(), i(3)]);
    // psi4 / psi2
    let f4 = ring.from_coeffs(vec![
        f.sub(&f.mul(&b4, &b8), &f.mul(&b6, &b6)),
        f.sub(&f.mul(&b2, &b8), &f.mul(&b4, &b6)),
        f.mul(&i(10), &b8),
        f.mul(&i(10), &b6),
        f.mul(&i(5), &b4),
        b2.clone(),
        i(2),
    ]);
    let mut memo = HashMap::new();
    memo.insert(0, ring.zero());
    memo.insert(1, ring.one());
    memo.insert(2, ring.one());
    memo.insert(3, psi3);
    memo.insert(4, f4);
    Table { ring, b, memo }
}

pub fn division_polynomial<F: Field>(e: &LongWeierstrass<F>, n: u32) -> DivisionPoly<F::Elem> {
    assert!(n >= 1, "division polynomial index must be positive");
    let ring = PolyRing::new(e.field.clone());
    let mut t = table(e, &ring);
    let reduced = t.get(n);
    DivisionPoly { n, reduced, psi2_squared: t.b.clone() }
}

/// Roots are exactly the x-coordinates of points of exact order `n`.
pub fn primitive_kernel_poly<F: Field>(e: &LongWeierstrass<F>, n: u32) -> Poly<F::Elem> {
    assert!(n >= 2, "primitive kernel needs n >= 2");
    let ring = PolyRing::new(e.field.clone());
    let mut t = table(e, &ring);
    let mut prim: HashMap<u32, Poly<F::Elem>> = HashMap::new();
    let mut divisors: Vec<u32> = (2..=n).filter(|d| n % d == 0).collect();
    divisors.sort();
    for &d in &divisors {
        let full = if d % 2 == 0 { ring.mul(&t.get(d), &t.b) } else { t.get(d) };
        let mut acc = full;
        for &e2 in &divisors {
            if e2 < d && d % e2 == 0 {
                acc = ring.exact_div(&acc, &prim[&e2]).expect("division polynomials nest");
            }
        }
        prim.insert(d, acc);
    }
    prim.remove(&n).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Rationals;
    use num_rational::BigRational;

    fn curve(a: [i64; 5]) -> LongWeierstrass<Rationals> {
        LongWeierstrass::new(Rationals, a.map(|n| BigRational::from_integer(n.into())))
    }

    #[test]
    fn small_cases() {
        let e = curve([0, 0, 0, 0, 1]);
        let r = PolyRing::new(Rationals);
        assert_eq!(division_polynomial(&e, 1).reduced, r.one());
        assert_eq!(division_polynomial(&e, 3).reduced, r.from_ints(&[0, 12, 0, 0, 3]));
        let d2 = division_polynomial(&e, 2);
        assert_eq!(d2.roots_poly(&r), r.from_ints(&[4, 0, 0, 4]));
        assert_eq!(primitive_kernel_poly(&e, 2), r.from_ints(&[4, 0, 0, 4]));
    }

    #[test]
    fn degrees() {
        let e = curve([1, -1, 1, -3, 7]);
        for n in 2..=12u32 {
            let d = division_polynomial(&e, n);
            let want = if n % 2 == 1 { (n * n - 1) / 2 } else { (n * n - 4) / 2 };
            assert_eq!(d.reduced.degree(), Some(want as usize), "n = {}", n);
        }
        assert_eq!(primitive_kernel_poly(&e, 8).degree(), Some(24));
        assert_eq!(primitive_kernel_poly(&e, 9).degree(), Some(36));
    }
}
