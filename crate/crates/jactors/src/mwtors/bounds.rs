//! Upper bounds from reductions and from the twist decomposition.

use std::collections::BTreeMap;

use crate::group::{group_meet, AbGroupStructure};
use crate::ff::is_prime;
use crate::qfield::{legendre, MultiQuadField};

use super::model::{check_odd_prime, CurveModel, LocalCache, ModelCurve};
use super::MwError;

/// One reduction used in a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub p: u64,
    pub f: u32,
    pub structure: AbGroupStructure,
}

/// Fold of `J(F_{p^f})` over the primes with `group_meet`, the `p`-part of
/// each side excluded.
pub fn reduction_bound(
    model: &CurveModel,
    curve: &ModelCurve,
    cache: &mut LocalCache,
    k: &MultiQuadField,
    primes: &[u64],
) -> Result<(AbGroupStructure, Vec<ReductionStep>), MwError> {
    if primes.is_empty() {
        return Err(MwError::NoPrimes);
    }
    let mut steps = vec![];
    for &p in primes {
        check_odd_prime(p)?;
        if model.n() % p == 0 {
            return Err(MwError::BadPrime(p, format!("divides the level {}", model.n())));
        }
        let (f, _) = k.residue_degree(p).map_err(|e| MwError::BadPrime(p, e.to_string()))?;
        let structure = cache.structure(curve, p, f)?;
        steps.push(ReductionStep { p, f, structure });
    }
    let mut acc = steps[0].structure.clone();
    let mut excluded = vec![steps[0].p];
    for s in &steps[1..] {
        acc = group_meet(&acc, &excluded, &s.structure, &[s.p]);
        // once two sides are folded only primes excluded everywhere stay unbounded
        excluded.retain(|&l| l == s.p);
    }
    if let Some(&p) = excluded.first() {
        // a single characteristic says nothing about its own part
        return Err(MwError::BadPrime(p, format!("the {}-part is unbounded with a single prime", p)));
    }
    Ok((acc, steps))
}

/// Exponent of `ℓ` in `n`.
pub fn valuation(mut n: u64, l: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % l == 0 {
        n /= l;
        e += 1;
    }
    e
}

/// Join of all `ℓ`-groups `H` with `lower ↪ H ↪ bound` and `|H| <= ℓ^total`.
/// `None` if there is no such `H`.
pub fn bounded_join(bound: &[u32], lower: &[u32], total: u32) -> Option<Vec<u32>> {
    fn rec(bound: &[u32], lower: &[u32], i: usize, prev: u32, left: u32, cur: &mut Vec<u32>, best: &mut Option<Vec<u32>>) {
        if i == bound.len() {
            let b = best.get_or_insert_with(|| vec![0; bound.len()]);
            for (x, y) in b.iter_mut().zip(cur.iter()) {
                *x = (*x).max(*y);
            }
            return;
        }
        let lo = lower.get(i).copied().unwrap_or(0);
        let hi = bound[i].min(prev).min(left);
        for e in lo..=hi {
            cur.push(e);
            rec(bound, lower, i + 1, e, left - e, cur, best);
            cur.pop();
        }
    }
    if lower.len() > bound.len() {
        return None;
    }
    let mut best = None;
    rec(bound, lower, 0, u32::MAX, total, &mut vec![], &mut best);
    best.map(|mut b| {
        b.retain(|&e| e > 0);
        b
    })
}

pub fn with_ell_part(g: &AbGroupStructure, l: u64, exps: Vec<u32>) -> AbGroupStructure {
    let mut parts: BTreeMap<u64, Vec<u32>> = g.prime_parts();
    parts.insert(l, exps);
    AbGroupStructure::from_prime_parts(&parts)
}

/// Good odd primes not dividing `bad` (in increasing order), up to `max`.
pub fn auxiliary_primes(bad: u64, max: u64) -> impl Iterator<Item = u64> {
    (3..=max).filter(move |&p| is_prime(p) && bad % p != 0)
}

/// `gcd_p` of the `ℓ`-part of `#J^{(d)}(F_p)` over good primes `p ∤ 2ℓdN`.
pub fn twist_order_bound(
    model: &CurveModel,
    curve: &ModelCurve,
    cache: &mut LocalCache,
    d: i64,
    l: u64,
    max_prime: u64,
) -> Result<(u32, Vec<u64>), MwError> {
    let bad = model.n() * l * d.unsigned_abs();
    let mut best = u32::MAX;
    let mut used = vec![];
    for p in auxiliary_primes(bad, max_prime) {
        let Some(o) = cache.orders(curve, p)? else {
            continue;
        };
        let n = if d == 1 || legendre(d, p) == 1 { o.order } else { o.twist };
        let v = valuation(n, l);
        if v < best {
            best = v;
            used.push(p);
        }
        if best == 0 {
            break;
        }
    }
    Ok((best, used))
}

/// `#J(F_{p^f})` from the local orders: `L(1)` or `L(1) L(-1)`.
pub fn order_over(curve: &ModelCurve, cache: &mut LocalCache, p: u64, f: u32) -> Result<Option<u64>, MwError> {
    Ok(cache.orders(curve, p)?.map(|o| if f == 1 { o.order } else { o.order * o.twist }))
}
