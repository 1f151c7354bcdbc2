//! Rational points of the symmetric square and the map `D ↦ [D - A]` into
//! the Jacobian, `A` being a fiber of `x` (the canonical class).

use std::collections::HashSet;

use serde::Serialize;

use super::{HjError, HyperCurve, MumfordDiv};
use crate::group::AbelianGroup;
use crate::poly::{Field, FiniteField, QuadExt};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymSquareReport {
    pub q: u64,
    pub n1: u64,
    pub n2: u64,
    /// `#X^(2)(F_q)` found by enumeration
    pub total: u64,
    /// `N1 (N1 + 1) / 2 + (N2 - N1) / 2`
    pub expected_total: u64,
    pub line: u64,
    pub off_line: u64,
    /// distinct classes among the off-line divisors
    pub off_line_image: u64,
    pub constant_on_line: bool,
    pub injective_off_line: bool,
}

impl SymSquareReport {
    pub fn is_consistent(&self) -> bool {
        self.total == self.expected_total
            && self.line == self.q + 1
            && self.constant_on_line
            && self.injective_off_line
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Pt<E> {
    Plus,
    Minus,
    Affine(E, E),
}

/// Partitions `X^(2)(F_q)` into the line and its complement and checks that
/// the map to `J(F_q)` kills the line and is injective elsewhere.
pub fn symmetric_square_points<F: FiniteField>(c: &HyperCurve<F>) -> Result<SymSquareReport, HjError> {
    let j = c.jacobian()?;
    let r = &c.ring;
    let k = r.field();
    let even = c.is_even();

    let mut pts: Vec<Pt<F::Elem>> = vec![Pt::Plus];
    if even {
        pts.push(Pt::Minus);
    }
    for a in k.elements() {
        let fa = r.eval(&c.f, &a);
        if k.is_zero(&fa) {
            pts.push(Pt::Affine(a, fa));
        } else if let Some(y) = k.sqrt(&fa) {
            pts.push(Pt::Affine(a.clone(), k.neg(&y)));
            pts.push(Pt::Affine(a, y));
        }
    }
    // [P - ∞₊] and [P - ∞₋]; for odd degree both are [P - ∞]
    let minus_plus = |p: &Pt<F::Elem>| -> MumfordDiv<F::Elem> {
        match p {
            Pt::Plus => j.zero(),
            Pt::Minus => MumfordDiv { u: r.one(), v: r.zero(), n: 0 },
            Pt::Affine(x, y) => MumfordDiv { u: r.linear_root(x), v: r.constant(y.clone()), n: 0 },
        }
    };
    let minus_minus = |p: &Pt<F::Elem>| -> MumfordDiv<F::Elem> {
        match p {
            Pt::Plus if even => j.infinity_difference(),
            Pt::Plus => j.zero(),
            Pt::Minus => j.zero(),
            Pt::Affine(x, y) => MumfordDiv { u: r.linear_root(x), v: r.constant(y.clone()), n: if even { 1 } else { 0 } },
        }
    };
    let involution = |p: &Pt<F::Elem>| match p {
        Pt::Plus if even => Pt::Minus,
        Pt::Plus => Pt::Plus,
        Pt::Minus => Pt::Plus,
        Pt::Affine(x, y) => Pt::Affine(x.clone(), k.neg(y)),
    };

    let mut line = 0u64;
    let mut constant_on_line = true;
    let mut off: Vec<MumfordDiv<F::Elem>> = vec![];
    for i in 0..pts.len() {
        for jdx in i..pts.len() {
            let (p, q) = (&pts[i], &pts[jdx]);
            let cls = j.add(&minus_plus(p), &minus_minus(q));
            if involution(p) == *q {
                line += 1;
                constant_on_line &= j.is_identity(&cls);
            } else {
                off.push(cls);
            }
        }
    }

    // conjugate pairs over F_{q^2}
    let ext = QuadExt::over(k.clone());
    let lift: Vec<_> = c.f.coeffs().iter().map(|a| ext.embed(a)).collect();
    let eval = |x: &(F::Elem, F::Elem)| lift.iter().rev().fold(ext.zero(), |acc, cf| ext.add(&ext.mul(&acc, x), cf));
    let conj = |a: &(F::Elem, F::Elem)| (a.0.clone(), k.neg(&a.1));
    let mut n2 = pts.len() as u64;
    let mut seen = HashSet::new();
    for x in ext.elements() {
        let fx = eval(&x);
        let ys = if ext.is_zero(&fx) {
            vec![fx]
        } else if let Some(y) = ext.sqrt(&fx) {
            vec![ext.neg(&y), y]
        } else {
            vec![]
        };
        for y in ys {
            if k.is_zero(&x.1) && k.is_zero(&y.1) {
                continue;
            }
            n2 += 1;
            if k.is_zero(&x.1) {
                // (a, ±y) with y ∉ F_q: a fiber of x
                if seen.insert((x.clone(), conj(&y))) && seen.insert((x.clone(), y.clone())) {
                    line += 1;
                }
                continue;
            }
            let (xb, yb) = (conj(&x), conj(&y));
            if !seen.insert((x.clone(), y.clone())) {
                continue;
            }
            seen.insert((xb.clone(), yb.clone()));
            let s = ext.div(&ext.sub(&y, &yb), &ext.sub(&x, &xb)).unwrap();
            let t = ext.sub(&y, &ext.mul(&s, &x));
            let sum = ext.add(&x, &xb);
            let prod = ext.mul(&x, &xb);
            let down = |e: &(F::Elem, F::Elem)| {
                debug_assert!(k.is_zero(&e.1));
                e.0.clone()
            };
            let u = r.from_coeffs(vec![down(&prod), k.neg(&down(&sum)), k.one()]);
            let v = r.from_coeffs(vec![down(&t), down(&s)]);
            off.push(j.checked(MumfordDiv { u, v, n: 0 })?);
        }
    }

    let n1 = pts.len() as u64;
    let off_line = off.len() as u64;
    let image: HashSet<_> = off.iter().collect();
    let injective_off_line = image.len() == off.len() && !off.iter().any(|d| j.is_identity(d));
    Ok(SymSquareReport {
        q: k.order(),
        n1,
        n2,
        total: line + off_line,
        expected_total: n1 * (n1 + 1) / 2 + (n2 - n1) / 2,
        line,
        off_line,
        off_line_image: image.len() as u64,
        constant_on_line,
        injective_off_line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldDesc;
    use crate::hyperjac::zeta_order;
    use crate::poly::PolyRing;

    #[test]
    fn x1_13_over_f9() {
        let f = FieldDesc::new(3, 2).unwrap();
        let c = HyperCurve::new(f, PolyRing::new(f).from_ints(&[1, -4, 6, -2, 1, -2, 1])).unwrap();
        let rep = symmetric_square_points(&c).unwrap();
        let z = zeta_order(&c).unwrap();
        assert_eq!((rep.n1, rep.n2), (z.n1, z.n2));
        assert!(rep.is_consistent(), "{:?}", rep);
        assert_eq!(rep.line, 10);
        // image off the line plus the class of the line sit inside J(F_9)
        assert!(rep.off_line_image < z.order);
    }
}
