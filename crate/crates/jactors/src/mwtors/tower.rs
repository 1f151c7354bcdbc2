//! Groups over a multi-quadratic field with their Galois action.

use std::collections::HashSet;

use crate::ellcurve::{ECPoint, EllipticCurve};
use crate::group::{generated_subgroup, structure_of, AbGroupStructure, AbelianGroup};
use crate::hyperjac::{Jacobian, MumfordDiv};
use crate::poly::{Poly, PolyRing};
use crate::qfield::{MultiQuadField, TowerElem};

pub trait TowerGroup: AbelianGroup {
    fn tower(&self) -> &MultiQuadField;
    /// Conjugate negating the generators in the mask `chi`.
    fn conj(&self, a: &Self::Elem, chi: usize) -> Self::Elem;
    fn show(&self, a: &Self::Elem) -> String;
}

impl TowerGroup for EllipticCurve<MultiQuadField> {
    fn tower(&self) -> &MultiQuadField {
        &self.field
    }

    fn conj(&self, a: &Self::Elem, chi: usize) -> Self::Elem {
        match a {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(self.field.conjugate(x, chi), self.field.conjugate(y, chi)),
        }
    }

    fn show(&self, a: &Self::Elem) -> String {
        match a {
            ECPoint::Infinity => "O".into(),
            ECPoint::Affine(x, y) => format!("({}, {})", self.field.fmt_elem(x), self.field.fmt_elem(y)),
        }
    }
}

fn conj_poly(k: &MultiQuadField, p: &Poly<TowerElem>, chi: usize) -> Poly<TowerElem> {
    PolyRing::new(k.clone()).from_coeffs(p.coeffs().iter().map(|c| k.conjugate(c, chi)).collect())
}

fn show_poly(k: &MultiQuadField, p: &Poly<TowerElem>) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|c| k.fmt_elem(c)).collect();
    format!("[{}]", parts.join(", "))
}

impl TowerGroup for Jacobian<MultiQuadField> {
    fn tower(&self) -> &MultiQuadField {
        self.c.field()
    }

    fn conj(&self, a: &Self::Elem, chi: usize) -> Self::Elem {
        let k = self.c.field();
        MumfordDiv { u: conj_poly(k, &a.u, chi), v: conj_poly(k, &a.v, chi), n: a.n }
    }

    fn show(&self, a: &Self::Elem) -> String {
        let k = self.c.field();
        format!("(u = {}, v = {}, n = {})", show_poly(k, &a.u), show_poly(k, &a.v), a.n)
    }
}

/// Masks of the Galois group of `K / Q`.
pub fn galois_masks(k: &MultiQuadField) -> std::ops::Range<usize> {
    0..(1usize << k.rank())
}

/// `χ_d(σ_chi) = ±1` as a sign bit: true for `-1`.
pub fn character_flips(k: &MultiQuadField, d: i64, chi: usize) -> bool {
    let mask = k.mask_of(d).expect("twist class in the span");
    (mask & chi).count_ones() % 2 == 1
}

/// Whether `a` is fixed by every element of `Gal(L/K)` for `K ⊆ L`.
pub fn is_rational_over<G: TowerGroup>(g: &G, a: &G::Elem, k: &MultiQuadField) -> bool {
    let l = g.tower();
    galois_masks(l)
        .filter(|&chi| k.gens().iter().all(|&d| !character_flips(l, d, chi)))
        .all(|chi| g.conj(a, chi) == *a)
}

/// Image of an `ℓ`-power torsion element under the `χ_d`-eigenprojector
/// `2^{-r} Σ_σ χ_d(σ) σ`, where `m` is an odd multiple of its order.
pub fn eigen_projection<G: TowerGroup>(g: &G, a: &G::Elem, d: i64, m: u64) -> G::Elem {
    let k = g.tower();
    let mut acc = g.identity();
    for chi in galois_masks(k) {
        let c = g.conj(a, chi);
        acc = if character_flips(k, d, chi) { g.sub(&acc, &c) } else { g.add(&acc, &c) };
    }
    let r = k.rank() as u64;
    let inv = mod_inverse(pow_mod(2, r, m), m);
    g.mul(&acc, inv)
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    for _ in 0..e {
        acc = acc * b as u128 % m as u128;
    }
    acc as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t, mut r, mut new_r) = (0i128, 1i128, m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(m as i128) as u64
}

/// Structure of the subgroup generated by `gens`, or `None` past `limit`.
pub fn span_structure<G: AbelianGroup>(g: &G, gens: &[G::Elem], limit: u64) -> Option<(AbGroupStructure, Vec<G::Elem>)> {
    let mut uniq: Vec<G::Elem> = vec![];
    let mut seen = HashSet::new();
    for x in gens {
        if !g.is_identity(x) && seen.insert(x.clone()) {
            uniq.push(x.clone());
        }
    }
    let elems = generated_subgroup(g, &uniq, limit as usize)?;
    Some((structure_of(g, &elems), elems))
}
