//! Exhaustive search for a point of given order over a small finite field.

use serde::Serialize;

use super::{EcError, EllipticCurve};
use crate::ff::{FieldDesc, FqElem};
use crate::group::AbelianGroup;
use crate::poly::{Field, FiniteField};

#[derive(Clone, Debug, Serialize)]
pub struct ScanWitness {
    pub q: u64,
    /// `[a1, a2, a3, a4, a6]` printed in the `F_q` basis
    pub coeffs: Vec<String>,
    pub point: (String, String),
    pub order: u64,
}

/// Field of order `q = p` or `q = p^2`.
pub fn field_of_order(q: u64) -> Result<FieldDesc, EcError> {
    let bad = |q| EcError::Residue(format!("{} is not an odd prime or prime square", q));
    if q < 3 {
        return Err(bad(q));
    }
    if let Ok(f) = FieldDesc::new(q, 1) {
        return Ok(f);
    }
    let r = (q as f64).sqrt().round() as u64;
    if r * r == q {
        if let Ok(f) = FieldDesc::new(r, 2) {
            return Ok(f);
        }
    }
    Err(bad(q))
}

/// Searches every curve over `F_q` for a point of exact order `n`.
///
/// In odd characteristic every long Weierstrass curve is isomorphic to one
/// with `a1 = a3 = 0`, so the models `y^2 = x^3 + a2 x^2 + a4 x + a6` cover all
/// isomorphism classes. Returns the first witness in enumeration order.
pub fn exhaustive_small_field_scan(q: u64, n: u64) -> Result<Option<ScanWitness>, EcError> {
    let f = field_of_order(q)?;
    let elems = f.elements();
    let z = f.zero();
    for a2 in &elems {
        for a4 in &elems {
            for a6 in &elems {
                let Ok(e) = EllipticCurve::new(f, [z, *a2, z, *a4, *a6]) else {
                    continue;
                };
                let pts = e.points();
                let count = pts.len() as u64;
                if count % n != 0 {
                    continue;
                }
                if let Some(pt) = pts.iter().find(|p| e.order_dividing(p, count) == n) {
                    let show = |c: &FqElem| f.fmt_elem(c);
                    let point = match pt {
                        super::ECPoint::Affine(x, y) => (show(x), show(y)),
                        super::ECPoint::Infinity => ("inf".into(), "inf".into()),
                    };
                    return Ok(Some(ScanWitness { q, coeffs: e.a.iter().map(show).collect(), point, order: n }));
                }
            }
        }
    }
    Ok(None)
}
