//! Elliptic curves in long Weierstrass form over any coefficient field.

mod minimal;
mod scan;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ff::{FieldDesc, FqElem};
use crate::group::{structure_of, AbGroupStructure, AbelianGroup};
use crate::poly::{Field, FiniteField, LongWeierstrass, Poly, PolyRing, Rationals};
use crate::qfield::{MultiQuadField, ResidueMap};

pub use minimal::local_minimal_model;
pub use scan::{exhaustive_small_field_scan, ScanWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("singular curve (zero discriminant)")]
    Singular,
    #[error("point is not on the curve")]
    OffCurve,
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("coefficient is not integral at p = {0}")]
    NotIntegral(u64),
    #[error("twist parameter must be a nonzero squarefree integer")]
    BadTwist,
    #[error("invalid residue field: {0}")]
    Residue(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ECPoint<E> {
    Infinity,
    Affine(E, E),
}

impl<E> ECPoint<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }
}

#[derive(Clone, Debug)]
pub struct EllipticCurve<F: Field> {
    pub field: F,
    /// `[a1, a2, a3, a4, a6]`
    pub a: [F::Elem; 5],
    pub label: Option<String>,
}

impl<F: Field> EllipticCurve<F> {
    pub fn new(field: F, a: [F::Elem; 5]) -> Result<Self, EcError> {
        let e = EllipticCurve { field, a, label: None };
        if e.field.is_zero(&e.discriminant()) {
            return Err(EcError::Singular);
        }
        Ok(e)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn weierstrass(&self) -> LongWeierstrass<F> {
        LongWeierstrass::new(self.field.clone(), self.a.clone())
    }

    pub fn b_invariants(&self) -> [F::Elem; 4] {
        self.weierstrass().b_invariants()
    }

    pub fn discriminant(&self) -> F::Elem {
        self.weierstrass().discriminant()
    }

    /// `[c4, c6]`
    pub fn c_invariants(&self) -> [F::Elem; 2] {
        let f = &self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        let i = |n: i64| f.from_i64(n);
        let b22 = f.mul(&b2, &b2);
        let c4 = f.sub(&b22, &f.mul(&i(24), &b4));
        let c6 = f.add(
            &f.sub(&f.mul(&i(-1), &f.mul(&b22, &b2)), &f.mul(&i(-36), &f.mul(&b2, &b4))),
            &f.mul(&i(-216), &b6),
        );
        [c4, c6]
    }

    pub fn j_invariant(&self) -> F::Elem {
        let f = &self.field;
        let [c4, _] = self.c_invariants();
        f.div(&f.mul(&c4, &f.mul(&c4, &c4)), &self.discriminant()).expect("nonsingular")
    }

    /// `4x^3 + b2 x^2 + 2 b4 x + b6`, the square of `2y + a1 x + a3`.
    pub fn two_division_cubic(&self) -> Poly<F::Elem> {
        self.weierstrass().two_division_cubic(&PolyRing::new(self.field.clone()))
    }

    /// `a1 x + a3`
    fn h_at(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        f.add(&f.mul(&self.a[0], x), &self.a[2])
    }

    /// `x^3 + a2 x^2 + a4 x + a6`
    fn rhs(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let [_, a2, _, a4, a6] = &self.a;
        let x2 = f.mul(x, x);
        let t = f.add(&f.mul(&x2, x), &f.mul(a2, &x2));
        f.add(&t, &f.add(&f.mul(a4, x), a6))
    }

    pub fn is_on_curve(&self, p: &ECPoint<F::Elem>) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => {
                let f = &self.field;
                let lhs = f.add(&f.mul(y, y), &f.mul(&self.h_at(x), y));
                lhs == self.rhs(x)
            }
        }
    }

    pub fn point(&self, x: F::Elem, y: F::Elem) -> Result<ECPoint<F::Elem>, EcError> {
        let p = ECPoint::Affine(x, y);
        if self.is_on_curve(&p) {
            Ok(p)
        } else {
            Err(EcError::OffCurve)
        }
    }

    /// Points with the given x-coordinate whose y lies in the field.
    pub fn lift_x(&self, x: &F::Elem) -> Vec<ECPoint<F::Elem>> {
        let f = &self.field;
        let disc = f.add(&f.square(&self.h_at(x)), &f.mul(&f.from_i64(4), &self.rhs(x)));
        let two = f.from_i64(2);
        let h = self.h_at(x);
        if f.is_zero(&disc) {
            let y = f.div(&f.neg(&h), &two).unwrap();
            return vec![ECPoint::Affine(x.clone(), y)];
        }
        match f.sqrt(&disc) {
            None => vec![],
            Some(s) => {
                let y1 = f.div(&f.sub(&s, &h), &two).unwrap();
                let y2 = f.div(&f.sub(&f.neg(&s), &h), &two).unwrap();
                vec![ECPoint::Affine(x.clone(), y1), ECPoint::Affine(x.clone(), y2)]
            }
        }
    }

    pub fn negate(&self, p: &ECPoint<F::Elem>) -> ECPoint<F::Elem> {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => {
                let f = &self.field;
                ECPoint::Affine(x.clone(), f.sub(&f.neg(y), &self.h_at(x)))
            }
        }
    }

    /// Chord-tangent addition.
    pub fn add_points(&self, p: &ECPoint<F::Elem>, q: &ECPoint<F::Elem>) -> ECPoint<F::Elem> {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine(x1, y1), ECPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let den = f.add(&f.add(y1, y1), &self.h_at(x1));
            if y1 != y2 || f.is_zero(&den) {
                return ECPoint::Infinity;
            }
            let x1sq = f.mul(x1, x1);
            let num = f.sub(
                &f.add(&f.add(&f.mul(&f.from_i64(3), &x1sq), &f.mul(&f.from_i64(2), &f.mul(a2, x1))), a4),
                &f.mul(a1, y1),
            );
            let num_nu = f.sub(
                &f.add(&f.add(&f.neg(&f.mul(&x1sq, x1)), &f.mul(a4, x1)), &f.mul(&f.from_i64(2), a6)),
                &f.mul(a3, y1),
            );
            (f.div(&num, &den).unwrap(), f.div(&num_nu, &den).unwrap())
        } else {
            let den = f.sub(x2, x1);
            let lambda = f.div(&f.sub(y2, y1), &den).unwrap();
            let nu = f.div(&f.sub(&f.mul(y1, x2), &f.mul(y2, x1)), &den).unwrap();
            (lambda, nu)
        };
        let x3 = f.sub(&f.sub(&f.sub(&f.add(&f.mul(&lambda, &lambda), &f.mul(a1, &lambda)), a2), x1), x2);
        let y3 = f.sub(&f.sub(&f.neg(&f.mul(&f.add(&lambda, a1), &x3)), &nu), a3);
        ECPoint::Affine(x3, y3)
    }

    /// Order of `p` by repeated addition, `None` beyond `bound`.
    pub fn point_order(&self, p: &ECPoint<F::Elem>, bound: u64) -> Result<Option<u64>, EcError> {
        if !self.is_on_curve(p) {
            return Err(EcError::OffCurve);
        }
        Ok(self.order_bounded(p, bound))
    }

    /// The same curve over another field.
    pub fn map_to<G: Field>(&self, g: G, h: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<EllipticCurve<G>> {
        let a: Vec<G::Elem> = self.a.iter().map(&h).collect::<Option<_>>()?;
        let mut e = EllipticCurve::new(g, [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()]).ok()?;
        e.label = self.label.clone();
        Some(e)
    }
}

impl<F: Field> AbelianGroup for EllipticCurve<F> {
    type Elem = ECPoint<F::Elem>;

    fn identity(&self) -> Self::Elem {
        ECPoint::Infinity
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add_points(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.negate(a)
    }
}

impl<F: FiniteField> EllipticCurve<F> {
    /// All points, the point at infinity first.
    pub fn points(&self) -> Vec<ECPoint<F::Elem>> {
        let mut out = vec![ECPoint::Infinity];
        for x in self.field.elements() {
            out.extend(self.lift_x(&x));
        }
        out
    }

    pub fn count_points(&self) -> u64 {
        let f = &self.field;
        let mut n = 1;
        for x in f.elements() {
            let disc = f.add(&f.square(&self.h_at(&x)), &f.mul(&f.from_i64(4), &self.rhs(&x)));
            n += if f.is_zero(&disc) {
                1
            } else if f.is_square(&disc) {
                2
            } else {
                0
            };
        }
        n
    }

    pub fn group_structure(&self) -> AbGroupStructure {
        structure_of(self, &self.points())
    }
}

impl EllipticCurve<Rationals> {
    pub fn from_ints(a: [i64; 5]) -> Result<Self, EcError> {
        Self::new(Rationals, a.map(|n| BigRational::from_integer(n.into())))
    }

    pub fn from_bigints(a: &[BigInt; 5]) -> Result<Self, EcError> {
        Self::new(Rationals, a.clone().map(BigRational::from_integer))
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.is_integer())
    }

    /// Integral short model `y^2 = x^3 - 27 c4 x - 54 c6` twisted by `d`,
    /// with fourth and sixth powers removed.
    pub fn quadratic_twist(&self, d: i64) -> Result<Self, EcError> {
        if d == 0 || !crate::qfield::is_squarefree(d) {
            return Err(EcError::BadTwist);
        }
        let [c4, c6] = self.c_invariants();
        let d = BigRational::from_integer(d.into());
        let a4 = -BigRational::from_integer(27.into()) * &c4 * &d * &d;
        let a6 = -BigRational::from_integer(54.into()) * &c6 * &d * &d * &d;
        let (a4, a6) = normalize_short(a4, a6);
        let mut e = Self::new(Rationals, [BigRational::zero(), BigRational::zero(), BigRational::zero(), a4, a6])?;
        e.label = self.label.as_ref().map(|l| format!("{}^({})", l, d));
        Ok(e)
    }

    /// Reduction modulo `p` into `F_{p^f}` through a model minimal at `p`.
    pub fn reduce_mod_p(&self, p: u64, f: u32) -> Result<EllipticCurve<FieldDesc>, EcError> {
        let fd = FieldDesc::new(p, f).map_err(|e| EcError::Residue(e.to_string()))?;
        let m = local_minimal_model(self, p)?;
        let a: Vec<FqElem> = m.a.iter().map(|c| fd.from_rational(c)).collect::<Option<_>>().ok_or(EcError::NotIntegral(p))?;
        let a = [a[0], a[1], a[2], a[3], a[4]];
        let mut e = EllipticCurve::new(fd, a).map_err(|_| EcError::BadReduction(p))?;
        e.label = self.label.clone();
        Ok(e)
    }

    pub fn base_change(&self, k: &MultiQuadField) -> EllipticCurve<MultiQuadField> {
        self.map_to(k.clone(), |c| Some(k.elem_from_rational(c.clone()))).expect("base change keeps the discriminant")
    }

    /// `#E(F_p)` for every good odd `p`.
    pub fn ap(&self, p: u64) -> Result<i64, EcError> {
        let e = self.reduce_mod_p(p, 1)?;
        Ok(p as i64 + 1 - e.count_points() as i64)
    }
}

impl EllipticCurve<MultiQuadField> {
    /// Reduction through a residue map; `p` must be a prime of good reduction.
    pub fn reduce_via(&self, map: &ResidueMap) -> Result<EllipticCurve<FieldDesc>, EcError> {
        let p = map.target.p();
        let a: Vec<FqElem> = self.a.iter().map(|c| map.apply(c)).collect::<Option<_>>().ok_or(EcError::NotIntegral(p))?;
        let mut e = EllipticCurve::new(map.target, [a[0], a[1], a[2], a[3], a[4]]).map_err(|_| EcError::BadReduction(p))?;
        e.label = self.label.clone();
        Ok(e)
    }
}

fn normalize_short(a4: BigRational, a6: BigRational) -> (BigRational, BigRational) {
    let mut a4 = a4.to_integer();
    let mut a6 = a6.to_integer();
    let bound = |a4: &BigInt, a6: &BigInt| -> u64 {
        let r4 = if a4.is_zero() { None } else { Some(a4.abs().nth_root(4)) };
        let r6 = if a6.is_zero() { None } else { Some(a6.abs().nth_root(6)) };
        let b = match (r4, r6) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => BigInt::one(),
        };
        b.to_u64().unwrap_or(u64::MAX)
    };
    let mut p = 2u64;
    while p <= bound(&a4, &a6) {
        let bp = BigInt::from(p);
        let (p4, p6) = (bp.pow(4), bp.pow(6));
        if a4.is_multiple_of(&p4) && a6.is_multiple_of(&p6) {
            a4 /= p4;
            a6 /= p6;
            continue;
        }
        p += 1;
    }
    (BigRational::from_integer(a4), BigRational::from_integer(a6))
}

impl<F: Field> fmt::Display for EllipticCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(|c| format!("{:?}", c)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbGroupStructure as S;

    fn x11() -> EllipticCurve<Rationals> {
        EllipticCurve::from_ints([0, -1, -1, 0, 0]).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_five_torsion() {
        let e = x11();
        let p = e.point(q(0), q(0)).unwrap();
        assert_eq!(e.point_order(&p, 100).unwrap(), Some(5));
        assert_eq!(e.add_points(&p, &ECPoint::Infinity), p);
        assert!(e.add_points(&p, &e.negate(&p)).is_infinity());
        assert_eq!(e.point(q(1), q(1)).map(|_| ()), Ok(()));
        assert_eq!(e.point(q(1), q(2)), Err(EcError::OffCurve));
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(EllipticCurve::from_ints([0, 0, 0, 0, 0]).err(), Some(EcError::Singular));
    }

    #[test]
    fn finite_field_structures() {
        let e = x11();
        assert_eq!(e.reduce_mod_p(3, 2).unwrap().group_structure(), S::new(&[15]).unwrap());
        assert_eq!(e.reduce_mod_p(5, 2).unwrap().group_structure(), S::new(&[35]).unwrap());
        assert_eq!(e.reduce_mod_p(11, 1).err(), Some(EcError::BadReduction(11)));
    }

    #[test]
    fn twists() {
        let e = x11();
        let t1 = e.quadratic_twist(1).unwrap();
        assert_eq!(t1.j_invariant(), e.j_invariant());
        let t = e.quadratic_twist(-7).unwrap();
        assert_eq!(t.j_invariant(), e.j_invariant());
        assert_eq!(t.quadratic_twist(-7).unwrap().a, t1.a);
        assert_eq!(e.quadratic_twist(0).err(), Some(EcError::BadTwist));
    }

    #[test]
    fn twist_trace_flip() {
        let e = x11();
        for p in [3u64, 5, 7, 13] {
            let ep = e.reduce_mod_p(p, 1).unwrap().count_points();
            let et = e.quadratic_twist(-1).unwrap().reduce_mod_p(p, 1).unwrap().count_points();
            if p % 4 == 3 {
                assert_eq!(ep + et, 2 * p + 2);
            } else {
                assert_eq!(ep, et);
            }
        }
    }
}
