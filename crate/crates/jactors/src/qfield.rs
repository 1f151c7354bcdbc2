//! Multi-quadratic number fields `Q(√d_1, ..., √d_n)`.
//!
//! A field is stored as a reduced F₂-basis of squarefree integers. Elements
//! are vectors of `2^n` rationals indexed by subsets `S` of the generators,
//! the basis element for `S` being `∏_{i ∈ S} √d_i`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{is_prime, FieldDesc, FqElem};
use crate::poly::{rational_sqrt, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QfieldError {
    #[error("{0} is not a squarefree integer")]
    NotSquarefree(i64),
    #[error("zero is not a valid generator")]
    Zero,
    #[error("cannot parse field literal {0:?}")]
    Parse(String),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("hyperplane check needs nonzero distinct vectors")]
    Degenerate,
}

/// Signed prime factorization; `-1` is recorded as the pseudo-prime `-1`.
fn factor(n: i64) -> Vec<(i64, u32)> {
    let mut out = vec![];
    if n < 0 {
        out.push((-1, 1));
    }
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p as i64, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m as i64, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

/// Squarefree part of a nonzero integer, sign kept.
pub fn squarefree(n: i64) -> i64 {
    factor(n).iter().filter(|&&(_, e)| e % 2 == 1).map(|&(p, _)| p).product()
}

/// Kronecker symbol `(d/p)` for an odd prime `p`.
pub fn legendre(d: i64, p: u64) -> i32 {
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut acc = 1u128;
    let mut base = a as u128;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Discriminant of `Q(√d)`.
pub fn quadratic_disc(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// F₂ coordinates of a squarefree integer over the pseudo-primes.
fn vector(d: i64) -> Vec<i64> {
    factor(d).into_iter().map(|(p, _)| p).collect()
}

fn xor_sorted(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = a.iter().filter(|x| !b.contains(x)).copied().collect();
    out.extend(b.iter().filter(|x| !a.contains(x)));
    out.sort_by_key(|&p| key(p));
    out
}

fn key(p: i64) -> i64 {
    if p == -1 {
        0
    } else {
        p
    }
}

fn from_vector(v: &[i64]) -> i64 {
    v.iter().product()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiQuadField {
    gens: Vec<i64>,
}

/// Element of a [`MultiQuadField`]; coordinate `S` multiplies `∏_{i∈S} √d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerElem {
    pub coords: Vec<BigRational>,
}

impl MultiQuadField {
    pub fn rationals() -> Self {
        MultiQuadField { gens: vec![] }
    }

    /// Reduced row echelon form over F₂ with pseudo-primes ordered -1, 2, 3, 5, ...
    pub fn new(ds: &[i64]) -> Result<Self, QfieldError> {
        for &d in ds {
            if d == 0 {
                return Err(QfieldError::Zero);
            }
            if !is_squarefree(d) {
                return Err(QfieldError::NotSquarefree(d));
            }
        }
        let mut rows: Vec<Vec<i64>> = ds.iter().map(|&d| vector(d)).filter(|v| !v.is_empty()).collect();
        let mut basis: Vec<Vec<i64>> = vec![];
        let mut cols: Vec<i64> = rows.iter().flatten().copied().collect();
        cols.sort_by_key(|&p| key(p));
        cols.dedup();
        for c in cols {
            let Some(i) = rows.iter().position(|r| r.contains(&c)) else { continue };
            let pivot = rows.remove(i);
            for r in rows.iter_mut().chain(basis.iter_mut()) {
                if r.contains(&c) {
                    *r = xor_sorted(r, &pivot);
                }
            }
            basis.push(pivot);
            rows.retain(|r| !r.is_empty());
        }
        Ok(MultiQuadField { gens: basis.iter().map(|v| from_vector(v)).collect() })
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.gens.len()
    }

    pub fn is_rationals(&self) -> bool {
        self.gens.is_empty()
    }

    /// Squarefree integer attached to a subset of generators.
    pub fn span_value(&self, mask: usize) -> i64 {
        squarefree(self.raw_product(mask))
    }

    fn raw_product(&self, mask: usize) -> i64 {
        (0..self.gens.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.gens[i]).product()
    }

    /// The full F₂-span, including 1, indexed by subset mask.
    pub fn span(&self) -> Vec<i64> {
        (0..self.degree()).map(|m| self.span_value(m)).collect()
    }

    /// Quadratic twists trivialized by the field: the span including 1.
    pub fn twist_classes(&self) -> Vec<i64> {
        self.span()
    }

    pub fn mask_of(&self, d: i64) -> Option<usize> {
        (0..self.degree()).find(|&m| self.span_value(m) == d)
    }

    pub fn span_contains(&self, d: i64) -> Result<bool, QfieldError> {
        if d == 0 {
            return Err(QfieldError::Zero);
        }
        if !is_squarefree(d) {
            return Err(QfieldError::NotSquarefree(d));
        }
        Ok(self.mask_of(d).is_some())
    }

    pub fn contains(&self, d: i64) -> bool {
        self.mask_of(squarefree(d)).is_some()
    }

    pub fn contains_field(&self, other: &MultiQuadField) -> bool {
        other.gens.iter().all(|&d| self.contains(d))
    }

    pub fn join(&self, other: &MultiQuadField) -> MultiQuadField {
        let mut g = self.gens.clone();
        g.extend(&other.gens);
        MultiQuadField::new(&g).unwrap()
    }

    pub fn adjoin(&self, d: i64) -> MultiQuadField {
        let mut g = self.gens.clone();
        g.push(squarefree(d));
        MultiQuadField::new(&g).unwrap()
    }

    /// `K ∩ Q(ζ_N)`: the span of those `d` with `|disc Q(√d)|` dividing `N`.
    pub fn cyclotomic_intersection(&self, n: u64) -> MultiQuadField {
        let ds: Vec<i64> = self
            .span()
            .into_iter()
            .filter(|&d| d != 1 && n % quadratic_disc(d).unsigned_abs() == 0)
            .collect();
        MultiQuadField::new(&ds).unwrap()
    }

    /// `(f, ramified)` for the primes above an odd prime `p`.
    pub fn residue_degree(&self, p: u64) -> Result<(u32, bool), QfieldError> {
        if p == 2 {
            return Err(QfieldError::EvenPrime);
        }
        if !is_prime(p) {
            return Err(QfieldError::NotPrime(p));
        }
        let span = self.span();
        let ramified = span.iter().any(|&d| d.rem_euclid(p as i64) == 0);
        let inert = span.iter().any(|&d| legendre(d, p) == -1);
        Ok((if inert { 2 } else { 1 }, ramified))
    }

    /// Quadratic subfields `Q(√d)` of this field, `d ≠ 1`.
    pub fn quadratic_subfields(&self) -> Vec<i64> {
        self.span().into_iter().filter(|&d| d != 1).collect()
    }

    /// Subfields generated by at most `r` elements of the span, without repeats.
    pub fn subfields_up_to_rank(&self, r: usize) -> Vec<MultiQuadField> {
        let span = self.quadratic_subfields();
        let mut out = vec![MultiQuadField::rationals()];
        let mut frontier = vec![MultiQuadField::rationals()];
        for _ in 0..r {
            let mut next = vec![];
            for f in &frontier {
                for &d in &span {
                    if f.contains(d) {
                        continue;
                    }
                    let g = f.adjoin(d);
                    if !out.contains(&g) {
                        out.push(g.clone());
                        next.push(g);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    pub fn literal(&self) -> String {
        if self.gens.is_empty() {
            "Q".into()
        } else {
            self.gens.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse(s: &str) -> Result<MultiQuadField, QfieldError> {
        let s = s.trim();
        if s.is_empty() || s == "Q" || s == "1" {
            return Ok(MultiQuadField::rationals());
        }
        let ds = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| QfieldError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        MultiQuadField::new(&ds)
    }

    // ---- elements ----

    pub fn elem_from_rational(&self, q: BigRational) -> TowerElem {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = q;
        TowerElem { coords }
    }

    pub fn elem_from_coords(&self, coords: Vec<BigRational>) -> TowerElem {
        assert_eq!(coords.len(), self.degree());
        TowerElem { coords }
    }

    /// Basis element `∏_{i∈S} √d_i`.
    pub fn basis(&self, mask: usize) -> TowerElem {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[mask] = BigRational::one();
        TowerElem { coords }
    }

    /// A fixed square root of a squarefree `d` in the span:
    /// `basis(S) / m` where `∏_{i∈S} d_i = d m^2`.
    pub fn sqrt_of(&self, d: i64) -> Option<TowerElem> {
        let d = squarefree(d);
        let mask = self.mask_of(d)?;
        let raw = self.raw_product(mask);
        let m = BigInt::from(raw / d).sqrt();
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[mask] = BigRational::new(BigInt::one(), m);
        Some(TowerElem { coords })
    }

    /// `a + b √d` for `d` in the span.
    pub fn quadratic(&self, a: BigRational, b: BigRational, d: i64) -> Option<TowerElem> {
        let r = self.sqrt_of(d)?;
        Some(self.add(&self.elem_from_rational(a), &self.scale(&r, &b)))
    }

    pub fn scale(&self, a: &TowerElem, s: &BigRational) -> TowerElem {
        TowerElem { coords: a.coords.iter().map(|c| c * s).collect() }
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self, a: &TowerElem) -> Option<BigRational> {
        if a.coords[1..].iter().all(|c| c.is_zero()) {
            Some(a.coords[0].clone())
        } else {
            None
        }
    }

    /// Galois conjugate negating the generators in `chi` (a subset mask).
    pub fn conjugate(&self, a: &TowerElem, chi: usize) -> TowerElem {
        let coords = a
            .coords
            .iter()
            .enumerate()
            .map(|(s, c)| if (s & chi).count_ones() % 2 == 1 { -c } else { c.clone() })
            .collect();
        TowerElem { coords }
    }

    pub fn norm_to_q(&self, a: &TowerElem) -> BigRational {
        norm_rec(&a.coords, &self.gens)
    }

    /// Square root in the tower, if one exists.
    pub fn sqrt_in_tower(&self, v: &TowerElem) -> Option<TowerElem> {
        sqrt_rec(&v.coords, &self.gens).map(|coords| TowerElem { coords })
    }

    /// Image of an element of a subfield.
    pub fn embed(&self, sub: &MultiQuadField, a: &TowerElem) -> Option<TowerElem> {
        if sub == self {
            return Some(a.clone());
        }
        let roots = sub.gens.iter().map(|&d| self.sqrt_of(d)).collect::<Option<Vec<_>>>()?;
        let mut acc = self.zero();
        for (mask, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = self.elem_from_rational(c.clone());
            for (i, r) in roots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    term = self.mul(&term, r);
                }
            }
            acc = self.add(&acc, &term);
        }
        Some(acc)
    }

    pub fn fmt_elem(&self, a: &TowerElem) -> String {
        let mut parts = vec![];
        for (mask, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if mask == 0 {
                parts.push(c.to_string());
            } else {
                let root: Vec<String> = (0..self.gens.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| format!("sqrt({})", self.gens[i]))
                    .collect();
                parts.push(format!("{}*{}", c, root.join("*")));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for MultiQuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            write!(f, "Q")
        } else {
            let g: Vec<String> = self.gens.iter().map(|d| format!("√{}", d)).collect();
            write!(f, "Q({})", g.join(", "))
        }
    }
}

fn split(a: &[BigRational]) -> (&[BigRational], &[BigRational]) {
    a.split_at(a.len() / 2)
}

fn add_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale_vec(a: &[BigRational], s: &BigRational) -> Vec<BigRational> {
    a.iter().map(|x| x * s).collect()
}

fn is_zero_vec(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

fn concat(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    let mut a = a;
    a.extend(b);
    a
}

fn mul_rec(a: &[BigRational], b: &[BigRational], gens: &[i64]) -> Vec<BigRational> {
    let Some((&d, lower)) = gens.split_last() else {
        return vec![&a[0] * &b[0]];
    };
    let (x1, y1) = split(a);
    let (x2, y2) = split(b);
    let y1z = is_zero_vec(y1);
    let y2z = is_zero_vec(y2);
    if y1z && y2z {
        let lo = mul_rec(x1, x2, lower);
        let n = lo.len();
        return concat(lo, vec![BigRational::zero(); n]);
    }
    let d = BigRational::from_integer(d.into());
    let xx = mul_rec(x1, x2, lower);
    let mut lo = xx;
    if !y1z && !y2z {
        lo = add_vec(&lo, &scale_vec(&mul_rec(y1, y2, lower), &d));
    }
    let mut hi = vec![BigRational::zero(); lo.len()];
    if !y2z {
        hi = add_vec(&hi, &mul_rec(x1, y2, lower));
    }
    if !y1z {
        hi = add_vec(&hi, &mul_rec(y1, x2, lower));
    }
    concat(lo, hi)
}

fn inv_rec(a: &[BigRational], gens: &[i64]) -> Option<Vec<BigRational>> {
    let Some((&d, lower)) = gens.split_last() else {
        return if a[0].is_zero() { None } else { Some(vec![a[0].recip()]) };
    };
    let (x, y) = split(a);
    if is_zero_vec(y) {
        let xi = inv_rec(x, lower)?;
        let n = xi.len();
        return Some(concat(xi, vec![BigRational::zero(); n]));
    }
    let d = BigRational::from_integer(d.into());
    let norm = sub_vec(&mul_rec(x, x, lower), &scale_vec(&mul_rec(y, y, lower), &d));
    let ni = inv_rec(&norm, lower)?;
    let lo = mul_rec(x, &ni, lower);
    let hi: Vec<BigRational> = mul_rec(y, &ni, lower).into_iter().map(|c| -c).collect();
    Some(concat(lo, hi))
}

fn norm_rec(a: &[BigRational], gens: &[i64]) -> BigRational {
    let Some((&d, lower)) = gens.split_last() else {
        return a[0].clone();
    };
    let (x, y) = split(a);
    let d = BigRational::from_integer(d.into());
    let n = sub_vec(&mul_rec(x, x, lower), &scale_vec(&mul_rec(y, y, lower), &d));
    norm_rec(&n, lower)
}

/// In `L = F(√d)`, `v = x + y√d`. Branch order: `y = 0` cases (`x`, then
/// `x/d`), otherwise `n = ±sqrt(x^2 - d y^2)` with `u^2 = (x + n)/2`.
fn sqrt_rec(v: &[BigRational], gens: &[i64]) -> Option<Vec<BigRational>> {
    let Some((&d, lower)) = gens.split_last() else {
        return rational_sqrt(&v[0]).map(|s| vec![s]);
    };
    let (x, y) = split(v);
    let dq = BigRational::from_integer(d.into());
    let half = lower.len();
    let zero = vec![BigRational::zero(); 1 << half];
    if is_zero_vec(y) {
        if let Some(s) = sqrt_rec(x, lower) {
            return Some(concat(s, zero));
        }
        let xd = scale_vec(x, &dq.recip());
        if let Some(s) = sqrt_rec(&xd, lower) {
            return Some(concat(zero, s));
        }
        return None;
    }
    let norm = sub_vec(&mul_rec(x, x, lower), &scale_vec(&mul_rec(y, y, lower), &dq));
    let n = sqrt_rec(&norm, lower)?;
    let two = BigRational::from_integer(2.into());
    let halfq = two.recip();
    for cand in [add_vec(x, &n), sub_vec(x, &n)] {
        let u2 = scale_vec(&cand, &halfq);
        if is_zero_vec(&u2) {
            continue;
        }
        let Some(u) = sqrt_rec(&u2, lower) else { continue };
        let two_u = scale_vec(&u, &two);
        let Some(inv) = inv_rec(&two_u, lower) else { continue };
        let w = mul_rec(y, &inv, lower);
        let s = concat(u, w);
        let sq = mul_rec(&s, &s, gens);
        if sq == v {
            return Some(s);
        }
    }
    None
}

impl Field for MultiQuadField {
    type Elem = TowerElem;

    fn zero(&self) -> TowerElem {
        TowerElem { coords: vec![BigRational::zero(); self.degree()] }
    }
    fn one(&self) -> TowerElem {
        self.elem_from_rational(BigRational::one())
    }
    fn from_int(&self, n: &BigInt) -> TowerElem {
        self.elem_from_rational(BigRational::from_integer(n.clone()))
    }
    fn from_rational(&self, q: &BigRational) -> Option<TowerElem> {
        Some(self.elem_from_rational(q.clone()))
    }
    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem { coords: add_vec(&a.coords, &b.coords) }
    }
    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem { coords: sub_vec(&a.coords, &b.coords) }
    }
    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem { coords: mul_rec(&a.coords, &b.coords, &self.gens) }
    }
    fn neg(&self, a: &TowerElem) -> TowerElem {
        TowerElem { coords: a.coords.iter().map(|c| -c).collect() }
    }
    fn inv(&self, a: &TowerElem) -> Option<TowerElem> {
        inv_rec(&a.coords, &self.gens).map(|coords| TowerElem { coords })
    }
    fn is_zero(&self, a: &TowerElem) -> bool {
        is_zero_vec(&a.coords)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &TowerElem) -> Option<TowerElem> {
        self.sqrt_in_tower(a)
    }
}

/// Ring map from the `p`-integral elements of a tower onto `F_{p^f}`,
/// sending each `√d_i` to a chosen square root of `d_i`.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    pub target: FieldDesc,
    images: Vec<FqElem>,
}

impl ResidueMap {
    /// The first root (in enumeration order) is taken for every generator.
    pub fn new(k: &MultiQuadField, p: u64) -> Result<ResidueMap, QfieldError> {
        let (f, _) = k.residue_degree(p)?;
        let target = FieldDesc::new(p, f).map_err(|_| QfieldError::NotPrime(p))?;
        let images = k
            .gens
            .iter()
            .map(|&d| target.sqrt(&target.from_i64(d)).expect("residue field contains all square roots"))
            .collect();
        Ok(ResidueMap { target, images })
    }

    /// Use the other root for the generators in `flip`.
    pub fn flipped(&self, flip: usize) -> ResidueMap {
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(i, e)| if flip >> i & 1 == 1 { self.target.neg(e) } else { *e })
            .collect();
        ResidueMap { target: self.target, images }
    }

    pub fn rational(&self, q: &BigRational) -> Option<FqElem> {
        let p = BigInt::from(self.target.p());
        if q.denom().mod_floor(&p).is_zero() {
            return None;
        }
        self.target.from_rational(q)
    }

    pub fn apply(&self, a: &TowerElem) -> Option<FqElem> {
        let t = &self.target;
        let mut acc = t.zero();
        for (mask, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = self.rational(c)?;
            for (i, img) in self.images.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    term = t.mul(&term, img);
                }
            }
            acc = t.add(&acc, &term);
        }
        Some(acc)
    }
}

/// A linear functional `φ` on `F₂^n` with `φ(x) = φ(y) = 1`.
pub fn hyperplane_avoiding(n: usize, x: &[u8], y: &[u8]) -> Result<Vec<u8>, QfieldError> {
    let nz = |v: &[u8]| v.iter().any(|&c| c & 1 == 1);
    if x.len() != n || y.len() != n || !nz(x) || !nz(y) || x.iter().zip(y).all(|(a, b)| a & 1 == b & 1) {
        return Err(QfieldError::Degenerate);
    }
    let i = x.iter().position(|&c| c & 1 == 1).unwrap();
    let mut phi = vec![0u8; n];
    if y[i] & 1 == 1 {
        phi[i] = 1;
        return Ok(phi);
    }
    let j = y.iter().position(|&c| c & 1 == 1).unwrap();
    phi[j] = 1;
    if x[j] & 1 == 0 {
        phi[i] = 1;
    }
    Ok(phi)
}

/// Evaluate an F₂ functional.
pub fn apply_functional(phi: &[u8], v: &[u8]) -> u8 {
    phi.iter().zip(v).map(|(a, b)| a & b & 1).fold(0, |acc, t| acc ^ t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn reduced_bases() {
        let k = MultiQuadField::new(&[2, 3, 6]).unwrap();
        assert_eq!(k.rank(), 2);
        assert!(k.span_contains(6).unwrap());
        assert_eq!(MultiQuadField::new(&[-1, 7]).unwrap(), MultiQuadField::new(&[-7, 7]).unwrap());
        assert!(MultiQuadField::new(&[-1, 7]).unwrap().span_contains(-7).unwrap());
        assert!(!MultiQuadField::rationals().span_contains(5).unwrap());
        assert_eq!(MultiQuadField::new(&[4]), Err(QfieldError::NotSquarefree(4)));
        assert_eq!(MultiQuadField::parse("Q").unwrap(), MultiQuadField::rationals());
        assert_eq!(MultiQuadField::parse("-1, 2").unwrap().gens(), &[-1, 2]);
    }

    #[test]
    fn cyclotomic_subfields() {
        let k = MultiQuadField::new(&[-1, 2]).unwrap();
        assert_eq!(k.cyclotomic_intersection(16), k);
        let k = MultiQuadField::new(&[-1, 7]).unwrap();
        assert_eq!(k.cyclotomic_intersection(14), MultiQuadField::new(&[-7]).unwrap());
        let k = MultiQuadField::new(&[-3, 5, 2]).unwrap();
        assert_eq!(k.cyclotomic_intersection(15), MultiQuadField::new(&[-3, 5]).unwrap());
        assert_eq!(k.cyclotomic_intersection(12), MultiQuadField::new(&[-3]).unwrap());
    }

    #[test]
    fn residue_degrees() {
        let k = MultiQuadField::new(&[-1]).unwrap();
        assert_eq!(k.residue_degree(3).unwrap(), (2, false));
        let k = MultiQuadField::new(&[5]).unwrap();
        assert!(k.residue_degree(5).unwrap().1);
        let k = MultiQuadField::new(&[2]).unwrap();
        assert_eq!(k.residue_degree(7).unwrap(), (1, false));
        assert_eq!(k.residue_degree(2), Err(QfieldError::EvenPrime));
    }

    #[test]
    fn twists() {
        let k = MultiQuadField::new(&[-3, 5]).unwrap();
        let mut t = k.twist_classes();
        t.sort();
        assert_eq!(t, vec![-15, -3, 1, 5]);
        assert_eq!(MultiQuadField::rationals().twist_classes(), vec![1]);
    }

    #[test]
    fn arithmetic_examples() {
        let k = MultiQuadField::new(&[2]).unwrap();
        let a = k.quadratic(q(1), q(1), 2).unwrap();
        let b = k.quadratic(q(1), q(-1), 2).unwrap();
        assert_eq!(k.mul(&a, &b), k.from_i64(-1));
        assert_eq!(k.norm_to_q(&k.quadratic(q(3), q(2), 2).unwrap()), q(1));
        let s = k.sqrt_in_tower(&k.from_i64(4)).unwrap();
        assert!(s == k.from_i64(2) || s == k.from_i64(-2));
        let v = k.quadratic(q(3), q(2), 2).unwrap();
        let s = k.sqrt_in_tower(&v).unwrap();
        assert_eq!(k.mul(&s, &s), v);
        let k3 = MultiQuadField::new(&[3]).unwrap();
        assert_eq!(k3.sqrt_in_tower(&k3.from_i64(2)), None);

        let k = MultiQuadField::new(&[-3, 5]).unwrap();
        let r15 = k.sqrt_of(-15).unwrap();
        let chi = 1 << k.gens().iter().position(|&d| d == -3).unwrap();
        assert_eq!(k.conjugate(&r15, chi), k.neg(&r15));
        assert_eq!(k.mul(&r15, &r15), k.from_i64(-15));
    }

    #[test]
    fn sqrt_of_is_a_root() {
        let k = MultiQuadField::new(&[-1, 2, -3]).unwrap();
        for d in k.span() {
            let r = k.sqrt_of(d).unwrap();
            assert_eq!(k.mul(&r, &r), k.from_i64(d));
        }
    }

    #[test]
    fn hyperplane_examples() {
        let phi = hyperplane_avoiding(2, &[1, 0], &[0, 1]).unwrap();
        assert_eq!(phi, vec![1, 1]);
        let phi = hyperplane_avoiding(3, &[1, 0, 0], &[1, 1, 0]).unwrap();
        assert_eq!(apply_functional(&phi, &[1, 0, 0]), 1);
        assert_eq!(apply_functional(&phi, &[1, 1, 0]), 1);
        assert!(hyperplane_avoiding(2, &[1, 0], &[1, 0]).is_err());
    }

    #[test]
    fn residue_map_is_a_ring_map() {
        let k = MultiQuadField::new(&[-1, 2]).unwrap();
        let m = ResidueMap::new(&k, 3).unwrap();
        assert_eq!(m.target.k(), 2);
        let a = k.quadratic(q(1), q(2), -1).unwrap();
        let b = k.quadratic(q(-1), q(1), 2).unwrap();
        let t = m.target;
        assert_eq!(m.apply(&k.mul(&a, &b)), Some(t.mul(&m.apply(&a).unwrap(), &m.apply(&b).unwrap())));
        let third = k.elem_from_rational(BigRational::new(1.into(), 3.into()));
        assert_eq!(m.apply(&third), None);
    }
}
