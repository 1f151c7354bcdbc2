//! Genus-2 curves `y^2 = F(x)` and Cantor arithmetic on their Jacobians.
//!
//! Odd-degree models use the usual Mumford pairs `(u, v)` standing for
//! `div(u, v) - deg(u) ∞`. Degree-6 models with square leading coefficient
//! have two points at infinity `∞₊, ∞₋` and use the balanced representation
//! `(u, v, n)` for `div(u, v) + n ∞₊ + (2 - deg u - n) ∞₋ - (∞₊ + ∞₋)`, with
//! `0 <= n <= 2 - deg u`; `∞₊` is the point where `y` behaves like `+V(x)`,
//! `V` being the polynomial part of `√F`.

mod enumerate;
mod symsq;
mod two_torsion;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::group::AbelianGroup;
use crate::poly::{Field, Poly, PolyRing, Rationals};

pub use enumerate::{zeta_order, ZetaData};
pub use symsq::{symmetric_square_points, SymSquareReport};
pub use two_torsion::{two_torsion_galois, two_torsion_of_ints, TwoTorsion};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HjError {
    #[error("model degree must be 5 or 6, got {0}")]
    BadDegree(usize),
    #[error("F is not squarefree")]
    Singular,
    #[error("degree-6 model with non-square leading coefficient")]
    NonSplit,
    #[error("not a valid Mumford representative")]
    BadDivisor,
    #[error("enumerated {enumerated} classes but the zeta function gives {zeta}")]
    CardinalityMismatch { enumerated: u64, zeta: u64 },
    #[error("Weil bounds violated by L-polynomial coefficients ({0}, {1})")]
    WeilViolation(i64, i64),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("{0}")]
    Residue(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDiv<E> {
    /// monic, degree at most 2
    pub u: Poly<E>,
    /// degree below `deg u`
    pub v: Poly<E>,
    /// weight on `∞₊`; always 0 for odd-degree models
    pub n: i64,
}

#[derive(Clone, Debug)]
pub struct HyperCurve<F: Field> {
    pub ring: PolyRing<F>,
    pub f: Poly<F::Elem>,
    /// polynomial part of `√F` when `deg F = 6` and the leading coefficient is a square
    v_inf: Option<Poly<F::Elem>>,
    pub label: Option<String>,
}

impl<F: Field> HyperCurve<F> {
    pub fn new(field: F, f: Poly<F::Elem>) -> Result<Self, HjError> {
        let ring = PolyRing::new(field);
        let deg = f.degree().unwrap_or(0);
        if deg != 5 && deg != 6 {
            return Err(HjError::BadDegree(deg));
        }
        if ring.gcd(&f, &ring.derivative(&f)).degree() != Some(0) {
            return Err(HjError::Singular);
        }
        let v_inf = if deg == 6 { sqrt_top(&ring, &f) } else { None };
        Ok(HyperCurve { ring, f, v_inf, label: None })
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    pub fn is_even(&self) -> bool {
        self.degree() == 6
    }

    /// Two rational points at infinity.
    pub fn is_split(&self) -> bool {
        self.v_inf.is_some()
    }

    /// Number of points at infinity on the smooth model.
    pub fn points_at_infinity(&self) -> usize {
        match (self.is_even(), self.is_split()) {
            (false, _) => 1,
            (true, true) => 2,
            (true, false) => 0,
        }
    }

    pub fn jacobian(&self) -> Result<Jacobian<F>, HjError> {
        if self.is_even() && !self.is_split() {
            return Err(HjError::NonSplit);
        }
        Ok(Jacobian { c: self.clone() })
    }

    pub fn map_to<G: Field>(&self, g: G, h: impl Fn(&F::Elem) -> Option<G::Elem>) -> Result<HyperCurve<G>, HjError> {
        let rg = PolyRing::new(g);
        let c: Vec<G::Elem> = self.f.coeffs().iter().map(h).collect::<Option<_>>().ok_or(HjError::Residue("coefficient not integral".into()))?;
        let mut out = HyperCurve::new(rg.field().clone(), rg.from_coeffs(c))?;
        out.label = self.label.clone();
        Ok(out)
    }
}

/// `V` with `deg(F - V^2) <= 2`, if the leading coefficient is a square.
fn sqrt_top<F: Field>(r: &PolyRing<F>, f: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
    let k = r.field();
    let c = |i: usize| f.coeff(i).cloned().unwrap_or_else(|| k.zero());
    let s = k.sqrt(&c(6))?;
    let two_s = k.add(&s, &s);
    let v2 = k.div(&c(5), &two_s)?;
    let v1 = k.div(&k.sub(&c(4), &k.mul(&v2, &v2)), &two_s)?;
    let v0 = k.div(&k.sub(&c(3), &k.mul(&k.from_i64(2), &k.mul(&v2, &v1))), &two_s)?;
    Some(r.from_coeffs(vec![v0, v1, v2, s]))
}

impl HyperCurve<Rationals> {
    pub fn from_ints(c: &[i64]) -> Result<Self, HjError> {
        let r = PolyRing::new(Rationals);
        HyperCurve::new(Rationals, r.from_ints(c))
    }

    /// Reduction to `F_{p^f}`; fails at primes of bad reduction.
    pub fn reduce_mod_p(&self, p: u64, f: u32) -> Result<HyperCurve<crate::ff::FieldDesc>, HjError> {
        let fd = crate::ff::FieldDesc::new(p, f).map_err(|e| HjError::Residue(e.to_string()))?;
        let bp = num_bigint::BigInt::from(p);
        let zero = num_bigint::BigInt::from(0);
        self.map_to(fd, |a| if a.denom() % &bp == zero { None } else { fd.from_rational(a) })
            .map_err(|_| HjError::BadReduction(p))
    }

    /// `d y^2 = F(x)`, written as `y^2 = d F(x)` after `y ↦ y / d`.
    pub fn quadratic_twist(&self, d: i64) -> Result<Self, HjError> {
        let r = &self.ring;
        let f = r.scale(&self.f, &BigRational::from_integer(d.into()));
        let mut out = HyperCurve::new(Rationals, f)?;
        out.label = self.label.as_ref().map(|l| format!("{}^({})", l, d));
        Ok(out)
    }
}

/// The Jacobian of a curve with at most one point at infinity or with two
/// rational ones.
#[derive(Clone, Debug)]
pub struct Jacobian<F: Field> {
    pub c: HyperCurve<F>,
}

impl<F: Field> Jacobian<F> {
    fn r(&self) -> &PolyRing<F> {
        &self.c.ring
    }

    fn even(&self) -> bool {
        self.c.is_even()
    }

    pub fn zero(&self) -> MumfordDiv<F::Elem> {
        MumfordDiv { u: self.r().one(), v: self.r().zero(), n: if self.even() { 1 } else { 0 } }
    }

    pub fn is_valid(&self, d: &MumfordDiv<F::Elem>) -> bool {
        let r = self.r();
        let du = d.u.deg();
        if !r.is_monic(&d.u) || du > 2 || d.v.deg() >= du {
            return false;
        }
        if !r.rem(&r.sub(&r.square(&d.v), &self.c.f), &d.u).is_zero() {
            return false;
        }
        if self.even() {
            0 <= d.n && d.n <= 2 - du as i64
        } else {
            d.n == 0
        }
    }

    pub fn checked(&self, d: MumfordDiv<F::Elem>) -> Result<MumfordDiv<F::Elem>, HjError> {
        if self.is_valid(&d) {
            Ok(d)
        } else {
            Err(HjError::BadDivisor)
        }
    }

    /// `[P - ∞]` (odd degree) or `[P - ∞₊]` (even degree).
    pub fn point_class(&self, x: &F::Elem, y: &F::Elem) -> Result<MumfordDiv<F::Elem>, HjError> {
        let r = self.r();
        self.checked(MumfordDiv { u: r.linear_root(x), v: r.constant(y.clone()), n: 0 })
    }

    /// `[∞₊ - ∞₋]`; only on even-degree models.
    pub fn infinity_difference(&self) -> MumfordDiv<F::Elem> {
        assert!(self.even(), "single point at infinity");
        MumfordDiv { u: self.r().one(), v: self.r().zero(), n: 2 }
    }

    pub fn negate(&self, d: &MumfordDiv<F::Elem>) -> MumfordDiv<F::Elem> {
        let r = self.r();
        let n = if self.even() { 2 - d.u.deg() as i64 - d.n } else { 0 };
        MumfordDiv { u: d.u.clone(), v: r.neg(&d.v), n }
    }

    pub fn add_divs(&self, a: &MumfordDiv<F::Elem>, b: &MumfordDiv<F::Elem>) -> MumfordDiv<F::Elem> {
        let r = self.r();
        let f = &self.c.f;
        let (d1, e1, e2) = r.xgcd(&a.u, &b.u);
        let (d, c1, c2) = r.xgcd(&d1, &r.add(&a.v, &b.v));
        let (s1, s2, s3) = (r.mul(&c1, &e1), r.mul(&c1, &e2), c2);
        let u = r.exact_div(&r.mul(&a.u, &b.u), &r.square(&d)).expect("d^2 divides u1 u2");
        let num = r.add(
            &r.add(&r.mul(&s1, &r.mul(&a.u, &b.v)), &r.mul(&s2, &r.mul(&b.u, &a.v))),
            &r.mul(&s3, &r.add(&r.mul(&a.v, &b.v), f)),
        );
        let v = r.rem(&r.exact_div(&num, &d).expect("d divides the composition numerator"), &u);
        let n = if self.even() { a.n + b.n + d.deg() as i64 - 1 } else { 0 };
        self.reduce(MumfordDiv { u, v, n })
    }

    fn reduce(&self, mut d: MumfordDiv<F::Elem>) -> MumfordDiv<F::Elem> {
        if !self.even() {
            let r = self.r();
            while d.u.deg() > 2 {
                let u = r.monic(&r.exact_div(&r.sub(&self.c.f, &r.square(&d.v)), &d.u).expect("Mumford congruence"));
                let v = r.rem(&r.neg(&d.v), &u);
                d = MumfordDiv { u, v, n: 0 };
            }
            return d;
        }
        while d.u.deg() > 2 {
            d = self.step(&d, true);
        }
        loop {
            if d.n > 2 - d.u.deg() as i64 {
                d = self.step(&d, true);
            } else if d.n < 0 {
                d = self.step(&d, false);
            } else {
                return d;
            }
        }
    }

    /// One reduction step with `y - w`, where `w ≡ v mod u` agrees with `+V`
    /// (`plus`) or `-V` at the top.
    fn step(&self, d: &MumfordDiv<F::Elem>, plus: bool) -> MumfordDiv<F::Elem> {
        let r = self.r();
        let big_v = self.c.v_inf.as_ref().expect("split model");
        let w = if plus {
            r.sub(big_v, &r.rem(&r.sub(big_v, &d.v), &d.u))
        } else {
            r.add(&r.neg(big_v), &r.rem(&r.add(big_v, &d.v), &d.u))
        };
        let u2 = r.monic(&r.exact_div(&r.sub(&self.c.f, &r.square(&w)), &d.u).expect("Mumford congruence"));
        let v2 = r.rem(&r.neg(&w), &u2);
        // order of y - w at ∞₊, where y = V + O(1/x); when deg u = 4 the
        // remainder has full degree and w need not agree with either branch
        let diff = r.sub(big_v, &w);
        let ord_plus = if diff.is_zero() {
            3 - r.sub(&self.c.f, &r.square(big_v)).deg() as i64
        } else {
            -(diff.deg() as i64)
        };
        let n = d.n - u2.deg() as i64 - ord_plus;
        MumfordDiv { u: u2, v: v2, n }
    }
}

impl<F: Field> AbelianGroup for Jacobian<F> {
    type Elem = MumfordDiv<F::Elem>;

    fn identity(&self) -> Self::Elem {
        self.zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add_divs(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.negate(a)
    }
}

impl<E: fmt::Debug + Clone> fmt::Display for MumfordDiv<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {})", self.u.coeffs(), self.v.coeffs(), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_cusps_on_x1_13() {
        let c = HyperCurve::from_ints(&[1, -4, 6, -2, 1, -2, 1]).unwrap();
        let j = c.jacobian().unwrap();
        let p = j.point_class(&q(0), &q(1)).unwrap();
        let o = j.order_bounded(&p, 100).unwrap();
        assert_eq!(19 % o, 0);
        assert!(j.is_identity(&j.add_divs(&p, &j.negate(&p))));
        assert_eq!(j.add_divs(&p, &j.zero()), p);
    }

    #[test]
    fn odd_model_two_torsion() {
        // y^2 = x (x^2 + 1)(x^2 + 2x - 1)
        let c = HyperCurve::from_ints(&[0, -1, 2, 0, 2, 1]).unwrap();
        let j = c.jacobian().unwrap();
        let p = j.point_class(&q(0), &q(0)).unwrap();
        assert!(j.is_identity(&j.add_divs(&p, &p)));
        assert!(c.points_at_infinity() == 1);
    }

    #[test]
    fn bad_models() {
        assert_eq!(HyperCurve::from_ints(&[1, 0, 0, 1]).err(), Some(HjError::BadDegree(3)));
        assert_eq!(HyperCurve::from_ints(&[0, 0, 1, 0, 0, 1]).err(), Some(HjError::Singular));
        let c = HyperCurve::from_ints(&[1, 0, 0, 0, 0, 0, 2]).unwrap();
        assert_eq!(c.jacobian().err().unwrap(), HjError::NonSplit);
    }
}
