//! Enumeration of `J(F_q)` and the point-counting zeta oracle.

use serde::Serialize;

use super::{HjError, HyperCurve, Jacobian, MumfordDiv};
use crate::group::{structure_of, AbGroupStructure};
use crate::poly::{Field, FiniteField, Poly, PolyRing, QuadExt};

/// Point counts and the L-polynomial `1 + c1 T + c2 T^2 + q c1 T^3 + q^2 T^4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaData {
    pub q: u64,
    pub n1: u64,
    pub n2: u64,
    pub c1: i64,
    pub c2: i64,
    /// `#J(F_q) = L(1)`
    pub order: u64,
    /// `#J^{tw}(F_q) = L(-1)` for the quadratic twist by a non-square
    pub twist_order: u64,
}

impl ZetaData {
    pub fn l_poly(&self) -> [i64; 5] {
        let q = self.q as i64;
        [1, self.c1, self.c2, q * self.c1, q * q]
    }
}

fn count_points<F: FiniteField>(f: &F, poly: &[F::Elem], deg: usize) -> u64 {
    let eval = |x: &F::Elem| {
        let mut acc = f.zero();
        for c in poly.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    };
    let mut n: u64 = 0;
    for x in f.elements() {
        let y2 = eval(&x);
        n += if f.is_zero(&y2) {
            1
        } else if f.is_square(&y2) {
            2
        } else {
            0
        };
    }
    let lc = poly.last().unwrap();
    n + if deg % 2 == 1 {
        1
    } else if f.is_square(lc) {
        2
    } else {
        0
    }
}

/// `N1`, `N2` by direct counting (including points at infinity), and `L(T)`.
pub fn zeta_order<F: FiniteField>(c: &HyperCurve<F>) -> Result<ZetaData, HjError> {
    let f = c.field();
    let q = f.order();
    let n1 = count_points(f, c.f.coeffs(), c.degree());
    let ext = QuadExt::over(f.clone());
    let lifted: Vec<_> = c.f.coeffs().iter().map(|a| ext.embed(a)).collect();
    let n2 = count_points(&ext, &lifted, c.degree());
    let qi = q as i64;
    let c1 = n1 as i64 - qi - 1;
    let c2x2 = c1 * c1 + n2 as i64 - qi * qi - 1;
    assert_eq!(c2x2 % 2, 0, "point counts have the wrong parity");
    let c2 = c2x2 / 2;
    // real Weil polynomial z^2 + c1 z + (c2 - 2q) has roots in [-2√q, 2√q]
    let weil = 4 * c2 <= c1 * c1 + 8 * qi && c2 + 2 * qi >= 0 && 4 * qi * c1 * c1 <= (c2 + 2 * qi).pow(2) && c1 * c1 <= 16 * qi;
    if !weil {
        return Err(HjError::WeilViolation(c1, c2));
    }
    let order = 1 + c1 + c2 + qi * c1 + qi * qi;
    let twist_order = 1 - c1 + c2 - qi * c1 + qi * qi;
    Ok(ZetaData { q, n1, n2, c1, c2, order: order as u64, twist_order: twist_order as u64 })
}

impl<F: FiniteField> Jacobian<F> {
    /// Every reduced representative, each class exactly once.
    pub fn elements(&self) -> Vec<MumfordDiv<F::Elem>> {
        let r = &self.c.ring;
        let k = r.field();
        let fpoly = &self.c.f;
        let even = self.c.is_even();
        let mut out = vec![];
        let ns = |deg: i64| -> Vec<i64> {
            if even {
                (0..=2 - deg).collect()
            } else {
                vec![0]
            }
        };
        for n in ns(0) {
            out.push(MumfordDiv { u: r.one(), v: r.zero(), n });
        }
        let elems = k.elements();
        // affine points
        let mut pts: Vec<(F::Elem, Vec<F::Elem>)> = vec![];
        for a in &elems {
            let fa = r.eval(fpoly, a);
            let ys = if k.is_zero(&fa) {
                vec![k.zero()]
            } else {
                match k.sqrt(&fa) {
                    Some(y) => vec![y.clone(), k.neg(&y)],
                    None => vec![],
                }
            };
            pts.push((a.clone(), ys));
        }
        for (a, ys) in &pts {
            for y in ys {
                for n in ns(1) {
                    out.push(MumfordDiv { u: r.linear_root(a), v: r.constant(y.clone()), n });
                }
            }
        }
        // u = (x - a)(x - b), a before b in enumeration order
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (a, ya) = &pts[i];
                let (b, yb) = &pts[j];
                let u = r.mul(&r.linear_root(a), &r.linear_root(b));
                let inv = k.inv(&k.sub(a, b)).unwrap();
                for y1 in ya {
                    for y2 in yb {
                        // line through (a, y1), (b, y2)
                        let slope = k.mul(&k.sub(y1, y2), &inv);
                        let v = r.from_coeffs(vec![k.sub(y1, &k.mul(&slope, a)), slope]);
                        out.push(MumfordDiv { u: u.clone(), v, n: 0 });
                    }
                }
            }
        }
        // u = (x - a)^2
        let df = r.derivative(fpoly);
        for (a, ys) in &pts {
            for y in ys {
                if k.is_zero(y) {
                    continue;
                }
                let slope = k.div(&r.eval(&df, a), &k.add(y, y)).unwrap();
                let lin = r.linear_root(a);
                let v = r.from_coeffs(vec![k.sub(y, &k.mul(&slope, a)), slope]);
                out.push(MumfordDiv { u: r.square(&lin), v, n: 0 });
            }
        }
        // irreducible u
        let half = k.inv(&k.from_i64(2)).unwrap();
        for b in &elems {
            let hb = k.mul(b, &half);
            for c in &elems {
                // x^2 + b x + c = (x + b/2)^2 - s with s = b^2/4 - c
                let s = k.sub(&k.mul(&hb, &hb), c);
                if k.is_square(&s) {
                    continue;
                }
                let u = r.from_coeffs(vec![c.clone(), b.clone(), k.one()]);
                for v in sqrt_mod_irreducible(r, fpoly, &u, &hb, &s) {
                    out.push(MumfordDiv { u: u.clone(), v, n: 0 });
                }
            }
        }
        out
    }

    /// Structure by enumeration, cross-checked against the zeta oracle.
    pub fn group_structure(&self) -> Result<AbGroupStructure, HjError> {
        let els = self.elements();
        let z = zeta_order(&self.c)?;
        if els.len() as u64 != z.order {
            return Err(HjError::CardinalityMismatch { enumerated: els.len() as u64, zeta: z.order });
        }
        Ok(structure_of(self, &els))
    }
}

/// All `v` with `deg v < 2` and `v^2 ≡ F mod u`, for `u = (x + hb)^2 - s`
/// irreducible. Works in `F[t]/(t^2 - s)` with `t = x + hb`.
fn sqrt_mod_irreducible<F: FiniteField>(
    r: &PolyRing<F>,
    fpoly: &Poly<F::Elem>,
    u: &Poly<F::Elem>,
    hb: &F::Elem,
    s: &F::Elem,
) -> Vec<Poly<F::Elem>> {
    let k = r.field();
    let rem = r.rem(fpoly, u);
    let alpha = rem.coeff(1).cloned().unwrap_or_else(|| k.zero());
    let beta = rem.coeff(0).cloned().unwrap_or_else(|| k.zero());
    // alpha x + beta = alpha t + (beta - alpha hb)
    let ext = QuadExt::new(k.clone(), s.clone());
    let elem = (k.sub(&beta, &k.mul(&alpha, hb)), alpha);
    if ext.is_zero(&elem) {
        return vec![r.zero()];
    }
    let Some(w) = ext.sqrt(&elem) else {
        return vec![];
    };
    let to_poly = |w: &(F::Elem, F::Elem)| {
        // w0 + w1 t = w1 x + (w0 + w1 hb)
        r.from_coeffs(vec![k.add(&w.0, &k.mul(&w.1, hb)), w.1.clone()])
    };
    vec![to_poly(&w), to_poly(&ext.neg(&w))]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldDesc;
    use crate::group::AbelianGroup;

    fn curve(p: u64, k: u32, c: &[i64]) -> HyperCurve<FieldDesc> {
        let f = FieldDesc::new(p, k).unwrap();
        HyperCurve::new(f, PolyRing::new(f).from_ints(c)).unwrap()
    }

    const X13: [i64; 7] = [1, -4, 6, -2, 1, -2, 1];

    #[test]
    fn x1_13_over_f9() {
        let c = curve(3, 2, &X13);
        let z = zeta_order(&c).unwrap();
        assert_eq!(z.order, 57);
        let j = c.jacobian().unwrap();
        let els = j.elements();
        assert_eq!(els.len(), 57);
        assert!(els.iter().all(|d| j.is_valid(d)));
        assert_eq!(j.group_structure().unwrap(), AbGroupStructure::cyclic(57));
        assert!(els.iter().any(|d| j.order_dividing(d, 57) == 19));
    }

    #[test]
    fn associativity_on_x1_13() {
        let c = curve(3, 2, &X13);
        let j = c.jacobian().unwrap();
        let els = j.elements();
        for a in els.iter().step_by(5) {
            for b in els.iter().step_by(3) {
                for d in els.iter().step_by(7) {
                    assert_eq!(j.add(&j.add(a, b), d), j.add(a, &j.add(b, d)));
                }
            }
        }
    }

    #[test]
    fn known_structures() {
        let cases: [(&[i64], u64, u32, &[u64]); 5] = [
            (&X13, 5, 2, &[19, 19]),
            (&[0, -1, 2, 0, 2, 1], 5, 2, &[2, 2, 4, 40]),
            (&[1, 4, 10, 10, 5, 2, 1], 7, 2, &[3, 651]),
            (&[1, 4, 10, 10, 5, 2, 1], 11, 2, &[12, 1092]),
            (&X13, 3, 1, &[19]),
        ];
        for (f, p, k, want) in cases {
            let g = curve(p, k, f).jacobian().unwrap().group_structure().unwrap();
            assert_eq!(g, AbGroupStructure::new(want).unwrap(), "{:?} over F_{}^{}", f, p, k);
        }
    }

    #[test]
    fn odd_model_counts_match() {
        // y^2 = x (x^2 + 1)(x^2 + 2x - 1)
        let c = curve(3, 2, &[0, -1, 2, 0, 2, 1]);
        let j = c.jacobian().unwrap();
        assert_eq!(j.elements().len() as u64, zeta_order(&c).unwrap().order);
        assert_eq!(j.group_structure().unwrap(), AbGroupStructure::new(&[2, 2, 2, 10]).unwrap());
    }
}
