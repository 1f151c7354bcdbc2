//! Explicit torsion over a multi-quadratic field.
//!
//! Elliptic curves: odd-order points come from rational roots of primitive
//! kernel polynomials (every `χ`-eigenpoint of odd order has rational `x`),
//! and the 2-power part is closed under halving over the field generated by
//! the 2-torsion. Genus 2: divisor classes from small points over the
//! quadratic subfields, Weierstrass divisors and rational degree-2 divisors
//! on the quadratic twists.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ellcurve::{ECPoint, EllipticCurve};
use crate::group::{structure_of, AbGroupStructure, AbelianGroup};
use crate::hyperjac::{HyperCurve, Jacobian, MumfordDiv};
use crate::poly::{
    primitive_kernel_poly, quadratic_factor_extraction, rational_squarefree_part, splitting_quadratic_field,
    to_rational_poly, Field, IntPoly, Poly, PolyRing, Rationals,
};
use crate::qfield::{MultiQuadField, TowerElem};

use super::tower::{is_rational_over, span_structure};
use super::MwError;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn linear_root(f: &IntPoly) -> BigRational {
    BigRational::new(-f[0].clone(), f[1].clone())
}

/// Rational roots of the primitive `n`-kernel polynomial.
pub fn rational_kernel_roots(e: &EllipticCurve<Rationals>, n: u32) -> Result<Vec<BigRational>, MwError> {
    let f = primitive_kernel_poly(&e.weierstrass(), n);
    if f.degree().unwrap_or(0) == 0 {
        return Ok(vec![]);
    }
    let fs = quadratic_factor_extraction(&f).map_err(|e| MwError::Internal(e.to_string()))?;
    Ok(fs.iter().filter(|c| c.len() == 2).map(linear_root).collect())
}

/// Points of `E(K)` of exact order `ℓ^j`, `1 <= j <= k`, with rational `x`.
pub fn odd_points(
    e: &EllipticCurve<Rationals>,
    ek: &EllipticCurve<MultiQuadField>,
    l: u64,
    k: u32,
) -> Result<Vec<ECPoint<TowerElem>>, MwError> {
    let mut out = vec![];
    for j in 1..=k {
        for x in rational_kernel_roots(e, l.pow(j) as u32)? {
            out.extend(ek.lift_x(&ek.field.elem_from_rational(x)));
        }
    }
    Ok(out)
}

/// `E(K)[2^∞]` with the field used for the halving.
#[derive(Clone, Debug)]
pub struct TwoPower {
    pub structure: AbGroupStructure,
    /// `K` with the 2-torsion adjoined
    pub field: MultiQuadField,
    pub points: Vec<ECPoint<TowerElem>>,
    pub curve: Option<EllipticCurve<MultiQuadField>>,
}

/// Roots of a rational polynomial of degree `<= 3` all lying in a field
/// `K(√D)`; `None` if an irreducible cubic remains.
fn cubic_roots(f: &Poly<BigRational>, k: &MultiQuadField) -> Result<Option<(MultiQuadField, Vec<TowerElem>)>, MwError> {
    let fs = quadratic_factor_extraction(f).map_err(|e| MwError::Internal(e.to_string()))?;
    let total: usize = fs.iter().map(|c| c.len() - 1).sum();
    if total < 3 {
        return Ok(None);
    }
    let mut l = k.clone();
    for c in fs.iter().filter(|c| c.len() == 3) {
        let d = splitting_quadratic_field(&to_rational_poly(c)).map_err(|e| MwError::Internal(e.to_string()))?;
        if d != 1 && !l.contains(d) {
            l = l.adjoin(d);
        }
    }
    let mut roots = vec![];
    for c in &fs {
        if c.len() == 2 {
            roots.push(l.elem_from_rational(linear_root(c)));
            continue;
        }
        let (a, b, cc) = (BigRational::from_integer(c[2].clone()), BigRational::from_integer(c[1].clone()), BigRational::from_integer(c[0].clone()));
        let disc = l.elem_from_rational(&b * &b - q(4) * &a * &cc);
        let s = l.sqrt(&disc).ok_or_else(|| MwError::Internal("discriminant not a square".into()))?;
        let two_a = l.elem_from_rational(q(2) * &a);
        let mb = l.elem_from_rational(-b);
        roots.push(l.div(&l.add(&mb, &s), &two_a).unwrap());
        roots.push(l.div(&l.sub(&mb, &s), &two_a).unwrap());
    }
    Ok(Some((l, roots)))
}

/// All `Q` with `2Q = P` over the field of the 2-torsion roots.
fn halves(el: &EllipticCurve<MultiQuadField>, roots: &[TowerElem], p: &ECPoint<TowerElem>) -> Vec<ECPoint<TowerElem>> {
    let l = &el.field;
    let ECPoint::Affine(x0, _) = p else {
        return vec![];
    };
    let mut rs = vec![];
    for e in roots {
        match l.sqrt(&l.sub(x0, e)) {
            Some(r) => rs.push(r),
            None => return vec![],
        }
    }
    let mut out = vec![];
    for signs in 0..4u32 {
        let r: Vec<TowerElem> =
            rs.iter().enumerate().map(|(i, r)| if i < 2 && signs >> i & 1 == 1 { l.neg(r) } else { r.clone() }).collect();
        let s = l.add(&l.add(&l.mul(&r[0], &r[1]), &l.mul(&r[0], &r[2])), &l.mul(&r[1], &r[2]));
        for cand in el.lift_x(&l.add(x0, &s)) {
            if el.add(&cand, &cand) == *p && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// `E(K)[2^∞]` by closing `E(L)[2]` under halving and keeping the
/// `K`-rational points.
pub fn two_power_torsion(e: &EllipticCurve<Rationals>, k: &MultiQuadField, limit: usize) -> Result<TwoPower, MwError> {
    let cubic = e.two_division_cubic();
    let Some((l, roots)) = cubic_roots(&cubic, k)? else {
        // an irreducible cubic stays irreducible over a 2-power extension
        return Ok(TwoPower { structure: AbGroupStructure::trivial(), field: k.clone(), points: vec![ECPoint::Infinity], curve: None });
    };
    let el = e.base_change(&l);
    let mut gens: Vec<ECPoint<TowerElem>> = roots.iter().flat_map(|r| el.lift_x(r)).collect();
    let mut halved = std::collections::HashSet::new();
    let elems = loop {
        let (_, elems) = span_structure(&el, &gens, limit as u64).ok_or_else(|| MwError::Internal("2-power closure too large".into()))?;
        let mut grew = false;
        for p in &elems {
            if !halved.insert(p.clone()) {
                continue;
            }
            for h in halves(&el, &roots, p) {
                if !elems.contains(&h) && !gens.contains(&h) {
                    gens.push(h);
                    grew = true;
                }
            }
        }
        if !grew {
            break elems;
        }
    };
    let points: Vec<_> = elems.into_iter().filter(|p| is_rational_over(&el, p, k)).collect();
    let structure = structure_of(&el, &points);
    Ok(TwoPower { structure, field: l, points, curve: Some(el) })
}

/// Candidate elements of `J(K)` for a genus-2 curve over `Q`; not all torsion.
pub fn genus2_candidates(c: &HyperCurve<Rationals>, k: &MultiQuadField) -> Result<Vec<MumfordDiv<TowerElem>>, MwError> {
    let ck = c.map_to(k.clone(), |a| Some(k.elem_from_rational(a.clone()))).map_err(|e| MwError::Internal(e.to_string()))?;
    let j = ck.jacobian().map_err(|e| MwError::Internal(e.to_string()))?;
    let r = &ck.ring;
    let even = ck.is_even();
    let mut out = vec![];

    let pts = small_points(c, &ck, k);
    let plus = |x: &TowerElem, y: &TowerElem| MumfordDiv { u: r.linear_root(x), v: r.constant(y.clone()), n: 0 };
    let minus = |x: &TowerElem, y: &TowerElem| MumfordDiv { u: r.linear_root(x), v: r.constant(y.clone()), n: if even { 1 } else { 0 } };
    let mut classes = vec![];
    for (x, y) in &pts {
        classes.push(plus(x, y));
        if even {
            classes.push(minus(x, y));
        }
    }
    if even {
        classes.push(j.infinity_difference());
    }
    for a in &classes {
        for b in &classes {
            out.push(j.add(a, b));
            out.push(j.sub(a, b));
        }
    }
    out.extend(classes);
    out.extend(weierstrass_divisors(c, k, &j)?);
    for d in k.twist_classes() {
        out.extend(twist_pairs(c, k, &j, d));
    }
    Ok(out)
}

/// `(x, y)` on the curve over `K` with `x` rational of small height or
/// `(a + b√d) / c` for small `a, b, c`.
fn small_points(c: &HyperCurve<Rationals>, ck: &HyperCurve<MultiQuadField>, k: &MultiQuadField) -> Vec<(TowerElem, TowerElem)> {
    let rq = PolyRing::new(Rationals);
    let mut xs: Vec<TowerElem> = vec![];
    for den in 1..=4i64 {
        for num in -12..=12i64 {
            if num.gcd(&den) == 1 {
                xs.push(k.elem_from_rational(BigRational::new(num.into(), den.into())));
            }
        }
    }
    let mut out = vec![];
    for x in xs {
        let fx = rq.eval(&c.f, &k.as_rational(&x).unwrap());
        if fx.is_zero() {
            out.push((x, k.zero()));
            continue;
        }
        let s = rational_squarefree_part(&fx);
        if s.abs() > BigInt::from(1_000_000) || !(s.is_one() || k.contains(s.to_i64().unwrap())) {
            continue;
        }
        if let Some(y) = k.sqrt(&k.elem_from_rational(fx)) {
            out.push((x.clone(), k.neg(&y)));
            out.push((x, y));
        }
    }
    let rk = &ck.ring;
    for d in k.quadratic_subfields() {
        for den in 1..=2i64 {
            for a in -4..=4i64 {
                for b in 1..=4i64 {
                    let x = k.scale(&k.quadratic(q(a), q(b), d).unwrap(), &BigRational::new(1.into(), den.into()));
                    let fx = rk.eval(&ck.f, &x);
                    if k.is_zero(&fx) {
                        out.push((x, fx));
                    } else if let Some(y) = k.sqrt(&fx) {
                        out.push((x.clone(), k.neg(&y)));
                        out.push((x, y));
                    }
                }
            }
        }
    }
    out
}

/// `(u, 0)` for `u | F` over `K` of degree at most 2.
fn weierstrass_divisors(
    c: &HyperCurve<Rationals>,
    k: &MultiQuadField,
    j: &Jacobian<MultiQuadField>,
) -> Result<Vec<MumfordDiv<TowerElem>>, MwError> {
    let r = &j.c.ring;
    let mut linear = vec![];
    let mut quadratic = vec![];
    for f in quadratic_factor_extraction(&c.f).map_err(|e| MwError::Internal(e.to_string()))? {
        let lift = |f: &IntPoly| r.monic(&r.from_coeffs(f.iter().map(|a| k.from_int(a)).collect()));
        if f.len() == 2 {
            linear.push(lift(&f));
            continue;
        }
        let d = splitting_quadratic_field(&to_rational_poly(&f)).map_err(|e| MwError::Internal(e.to_string()))?;
        if d == 1 || k.contains(d) {
            let (a, b) = (BigRational::from_integer(f[2].clone()), BigRational::from_integer(f[1].clone()));
            let disc = k.elem_from_rational(&b * &b - q(4) * &a * BigRational::from_integer(f[0].clone()));
            let s = k.sqrt(&disc).unwrap();
            let two_a = k.elem_from_rational(q(2) * &a);
            for root in [k.add(&k.elem_from_rational(-b.clone()), &s), k.sub(&k.elem_from_rational(-b), &s)] {
                linear.push(r.linear_root(&k.div(&root, &two_a).unwrap()));
            }
        } else {
            quadratic.push(lift(&f));
        }
    }
    let mut us = quadratic;
    for (i, a) in linear.iter().enumerate() {
        us.push(a.clone());
        for b in &linear[i + 1..] {
            us.push(r.mul(a, b));
        }
    }
    Ok(us.into_iter().filter_map(|u| j.checked(MumfordDiv { u, v: r.zero(), n: 0 }).ok()).collect())
}

/// Rational degree-2 divisors `(x^2 + b x + c, v)` on `d y^2 = F(x)`, moved to
/// `J(K)` by `y ↦ y / √d`.
fn twist_pairs(c: &HyperCurve<Rationals>, k: &MultiQuadField, j: &Jacobian<MultiQuadField>, d: i64) -> Vec<MumfordDiv<TowerElem>> {
    let rq = PolyRing::new(Rationals);
    let r = &j.c.ring;
    let Some(root_d) = (if d == 1 { Some(k.one()) } else { k.sqrt_of(d) }) else {
        return vec![];
    };
    let g = rq.scale(&c.f, &q(d));
    let mut out = vec![];
    for b in -4..=4i64 {
        for cc in -6..=6i64 {
            let disc = b * b - 4 * cc;
            if disc == 0 || crate::qfield::squarefree(disc) == 1 {
                continue;
            }
            let u = rq.from_ints(&[cc, b, 1]);
            let rem = rq.rem(&g, &u);
            let alpha = rem.coeff(1).cloned().unwrap_or_else(BigRational::zero);
            let beta = rem.coeff(0).cloned().unwrap_or_else(BigRational::zero);
            let kd = MultiQuadField::new(&[crate::qfield::squarefree(disc)]).unwrap();
            let theta = kd.quadratic(BigRational::new((-b).into(), 2.into()), BigRational::new(1.into(), 2.into()), disc).unwrap();
            let val = kd.add(&kd.scale(&theta, &alpha), &kd.elem_from_rational(beta));
            let Some(s) = kd.sqrt(&val) else {
                continue;
            };
            let conj = |a: &TowerElem| kd.conjugate(a, 1);
            let v1 = kd.div(&kd.sub(&s, &conj(&s)), &kd.sub(&theta, &conj(&theta))).unwrap();
            let v0 = kd.sub(&s, &kd.mul(&v1, &theta));
            let (Some(v0), Some(v1)) = (kd.as_rational(&v0), kd.as_rational(&v1)) else {
                continue;
            };
            let inv = k.inv(&root_d).unwrap();
            let v = r.from_coeffs(vec![k.mul(&k.elem_from_rational(v0), &inv), k.mul(&k.elem_from_rational(v1), &inv)]);
            let uk = r.from_coeffs(vec![k.elem_from_rational(q(cc)), k.elem_from_rational(q(b)), k.one()]);
            if let Ok(dv) = j.checked(MumfordDiv { u: uk, v, n: 0 }) {
                out.push(dv);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x1_11_five_torsion_over_q() {
        let e = EllipticCurve::from_ints([0, -1, 1, -10, -20]).unwrap();
        let k = MultiQuadField::rationals();
        let pts = odd_points(&e, &e.base_change(&k), 5, 1).unwrap();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn halving_closure_on_a_full_two_torsion_curve() {
        // y^2 = x^3 - x has E(Q)[2^∞] = [2,2] and gains a 4-torsion point over Q(i)
        let e = EllipticCurve::from_ints([0, 0, 0, -1, 0]).unwrap();
        let t = two_power_torsion(&e, &MultiQuadField::rationals(), 4096).unwrap();
        assert_eq!(t.structure, AbGroupStructure::new(&[2, 2]).unwrap());
        let t = two_power_torsion(&e, &MultiQuadField::new(&[-1]).unwrap(), 4096).unwrap();
        assert_eq!(t.structure, AbGroupStructure::new(&[2, 4]).unwrap());
    }

    #[test]
    fn irreducible_cubic_has_no_two_torsion() {
        let e = EllipticCurve::from_ints([0, 0, 0, 0, 2]).unwrap();
        let t = two_power_torsion(&e, &MultiQuadField::new(&[-3]).unwrap(), 4096).unwrap();
        assert!(t.structure.is_trivial());
    }
}
