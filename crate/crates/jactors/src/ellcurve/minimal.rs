//! Models minimal at a single odd prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{EcError, EllipticCurve};
use crate::poly::Rationals;

fn val(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut n = n.clone();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a rational whose denominator is prime to `p`.
fn val_q(q: &BigRational, p: &BigInt) -> Result<u32, ()> {
    if q.denom().is_multiple_of(p) {
        return Err(());
    }
    Ok(val(q.numer(), p))
}

/// An isomorphic model that is integral and minimal at the odd prime `p`.
///
/// Completing the square gives `y^2 = g(x)` with `g` monic cubic, which stays
/// `p`-integral. While the discriminant has valuation at least 12 we look for
/// `r` with `g(p^2 X + r) / p^6` integral and substitute.
pub fn local_minimal_model(e: &EllipticCurve<Rationals>, p: u64) -> Result<EllipticCurve<Rationals>, EcError> {
    let bp = BigInt::from(p);
    if e.a.iter().any(|c| val_q(c, &bp).is_err()) {
        return Err(EcError::NotIntegral(p));
    }
    if val_q(&e.discriminant(), &bp).unwrap() < 12 {
        return Ok(e.clone());
    }
    let [b2, b4, b6, _] = e.b_invariants();
    let q = |n: i64| BigRational::from_integer(n.into());
    // g = x^3 + c2 x^2 + c1 x + c0
    let mut g = [&b6 / q(4), &b4 / q(2), &b2 / q(4)];
    loop {
        let cur = EllipticCurve::new(Rationals, [q(0), g[2].clone(), q(0), g[1].clone(), g[0].clone()])?;
        if val_q(&cur.discriminant(), &bp).unwrap() < 12 {
            return Ok(cur);
        }
        let Some(r) = find_shift(&g, &bp) else {
            return Ok(cur);
        };
        let r = BigRational::from_integer(r);
        let p2 = BigRational::from_integer(&bp * &bp);
        let (c0, c1, c2) = (&g[0], &g[1], &g[2]);
        let gr = &r * &r * &r + c2 * &r * &r + c1 * &r + c0;
        let dgr = q(3) * &r * &r + q(2) * c2 * &r + c1;
        let hgr = q(3) * &r + c2;
        let p4 = &p2 * &p2;
        let p6 = &p4 * &p2;
        g = [gr / &p6, dgr * &p2 / &p6, hgr * &p4 / &p6];
    }
}

/// Digit-by-digit search for `r mod p^6`.
fn find_shift(g: &[BigRational; 3], p: &BigInt) -> Option<BigInt> {
    let pk: Vec<BigInt> = (0..=6).map(|k| p.pow(k)).collect();
    let cond = |r: &BigInt, k: usize| -> bool {
        let r = BigRational::from_integer(r.clone());
        let three = BigRational::from_integer(3.into());
        let two = BigRational::from_integer(2.into());
        let gr = &r * &r * &r + &g[2] * &r * &r + &g[1] * &r + &g[0];
        let dgr = &three * &r * &r + &two * &g[2] * &r + &g[1];
        let hgr = &three * &r + &g[2];
        // denominators are powers of 2, hence units
        let ok = |v: &BigRational, need: usize| v.numer().is_multiple_of(&pk[need.min(k)]);
        ok(&gr, 6) && ok(&dgr, 4) && ok(&hgr, 2)
    };
    fn dfs(r: BigInt, k: usize, p: &BigInt, pk: &[BigInt], cond: &dyn Fn(&BigInt, usize) -> bool) -> Option<BigInt> {
        if k == 6 {
            return Some(r);
        }
        let mut digit = BigInt::zero();
        while &digit < p {
            let next = &r + &digit * &pk[k];
            if cond(&next, k + 1) {
                if let Some(found) = dfs(next, k + 1, p, pk, cond) {
                    return Some(found);
                }
            }
            digit += 1;
        }
        None
    }
    dfs(BigInt::zero(), 0, p, &pk, &cond)
}
