//! Finite abelian groups: invariant factors, prime-power parts and the
//! element-order census used for every finite-field group in the crate.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invariant factors {0:?} do not form a divisibility chain")]
    NotAChain(Vec<u64>),
    #[error("zero is not a valid invariant factor")]
    ZeroFactor,
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `[d_1, ..., d_k]` with `d_1 | d_2 | ... | d_k` and every `d_i > 1`.
/// The trivial group is `[]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbGroupStructure {
    factors: Vec<u64>,
}

impl AbGroupStructure {
    pub fn trivial() -> Self {
        AbGroupStructure { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(&[n]).expect("cyclic group")
    }

    /// Factors equal to 1 are dropped.
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        if factors.contains(&0) {
            return Err(GroupError::ZeroFactor);
        }
        let fs: Vec<u64> = factors.iter().copied().filter(|&d| d > 1).collect();
        if fs.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(GroupError::NotAChain(factors.to_vec()));
        }
        Ok(AbGroupStructure { factors: fs })
    }

    /// Invariant factors of `Z/n_1 x ... x Z/n_k` for arbitrary `n_i`,
    /// e.g. `[3, 19]` gives `[57]`.
    pub fn from_cyclic(ns: &[u64]) -> Result<Self, GroupError> {
        if ns.contains(&0) {
            return Err(GroupError::ZeroFactor);
        }
        let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in ns {
            for (l, e) in factorize(n) {
                parts.entry(l).or_default().push(e);
            }
        }
        Ok(Self::from_prime_parts(&parts))
    }

    /// From the exponent vectors of the `ℓ`-parts (any order within a prime).
    pub fn from_prime_parts(parts: &BTreeMap<u64, Vec<u32>>) -> Self {
        let k = parts.values().map(|v| v.iter().filter(|&&e| e > 0).count()).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        for (&l, exps) in parts {
            let mut es: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
            es.sort_unstable();
            // largest exponent goes to the last factor
            let off = k - es.len();
            for (i, e) in es.into_iter().enumerate() {
                factors[off + i] *= l.pow(e);
            }
        }
        AbGroupStructure { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn primes(&self) -> Vec<u64> {
        factorize(self.exponent()).into_iter().map(|(l, _)| l).collect()
    }

    /// Exponents of the `ℓ`-part, largest first.
    pub fn ell_exponents(&self, l: u64) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .factors
            .iter()
            .map(|&d| {
                let mut e = 0;
                let mut d = d;
                while d % l == 0 {
                    d /= l;
                    e += 1;
                }
                e
            })
            .filter(|&e| e > 0)
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn prime_parts(&self) -> BTreeMap<u64, Vec<u32>> {
        self.primes().into_iter().map(|l| (l, self.ell_exponents(l))).collect()
    }

    pub fn ell_part(&self, l: u64) -> Self {
        Self::from_prime_parts(&BTreeMap::from([(l, self.ell_exponents(l))]))
    }

    /// Drop the `ℓ`-parts for the listed primes.
    pub fn without(&self, ls: &[u64]) -> Self {
        let mut parts = self.prime_parts();
        parts.retain(|l, _| !ls.contains(l));
        Self::from_prime_parts(&parts)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut parts = self.prime_parts();
        for (l, es) in other.prime_parts() {
            parts.entry(l).or_default().extend(es);
        }
        Self::from_prime_parts(&parts)
    }

    /// Whether `self` is isomorphic to a subgroup of `other`.
    pub fn embeds_in(&self, other: &Self) -> bool {
        self.prime_parts().iter().all(|(&l, es)| {
            let theirs = other.ell_exponents(l);
            es.len() <= theirs.len() && es.iter().zip(&theirs).all(|(a, b)| a <= b)
        })
    }

    /// Keep the `r` largest cyclic factors of the `ℓ`-part.
    pub fn truncate_ell_rank(&self, l: u64, r: usize) -> Self {
        let mut parts = self.prime_parts();
        if let Some(es) = parts.get_mut(&l) {
            es.truncate(r);
        }
        Self::from_prime_parts(&parts)
    }

    /// Smallest group into which both embed (componentwise maximum).
    pub fn join(&self, other: &Self) -> Self {
        let mut parts = self.prime_parts();
        for (l, theirs) in other.prime_parts() {
            let mine = parts.entry(l).or_default();
            let n = mine.len().max(theirs.len());
            *mine = (0..n)
                .map(|i| mine.get(i).copied().unwrap_or(0).max(theirs.get(i).copied().unwrap_or(0)))
                .collect();
        }
        Self::from_prime_parts(&parts)
    }

    /// Componentwise minimum of the sorted `ℓ`-exponent vectors.
    fn min_parts(&self, other: &Self, l: u64) -> Vec<u32> {
        self.ell_exponents(l).iter().zip(other.ell_exponents(l)).map(|(a, b)| (*a).min(b)).collect()
    }

    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        if t.trim().is_empty() {
            return Some(Self::trivial());
        }
        let fs: Option<Vec<u64>> = t.split(',').map(|x| x.trim().parse().ok()).collect();
        Self::new(&fs?).ok()
    }
}

impl fmt::Display for AbGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for AbGroupStructure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.factors.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbGroupStructure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u64>::deserialize(d)?;
        AbGroupStructure::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Meet of two reduction bounds. For a prime `ℓ` listed in `ex_a` (the
/// residue characteristic of side `a`) only side `b` bounds the `ℓ`-part, and
/// symmetrically. A prime excluded on both sides keeps the `a` side.
pub fn group_meet(a: &AbGroupStructure, ex_a: &[u64], b: &AbGroupStructure, ex_b: &[u64]) -> AbGroupStructure {
    let mut ls: Vec<u64> = a.primes();
    ls.extend(b.primes());
    ls.sort_unstable();
    ls.dedup();
    let mut parts = BTreeMap::new();
    for l in ls {
        let es = match (ex_a.contains(&l), ex_b.contains(&l)) {
            (true, false) => b.ell_exponents(l),
            (false, true) => a.ell_exponents(l),
            (true, true) => a.ell_exponents(l),
            (false, false) => a.min_parts(b, l),
        };
        parts.insert(l, es);
    }
    AbGroupStructure::from_prime_parts(&parts)
}

/// An abelian group presented by its operations.
pub trait AbelianGroup {
    type Elem: Clone + Eq + Hash + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    fn mul_signed(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let m = self.mul(a, n.unsigned_abs());
        if n < 0 {
            self.neg(&m)
        } else {
            m
        }
    }

    /// Order of `a` given a multiple `n` of it.
    fn order_dividing(&self, a: &Self::Elem, n: u64) -> u64 {
        let mut ord = n;
        for (l, _) in factorize(n) {
            while ord % l == 0 && self.is_identity(&self.mul(a, ord / l)) {
                ord /= l;
            }
        }
        ord
    }

    /// Order by repeated addition, `None` beyond `bound`.
    fn order_bounded(&self, a: &Self::Elem, bound: u64) -> Option<u64> {
        let mut acc = a.clone();
        for k in 1..=bound {
            if self.is_identity(&acc) {
                return Some(k);
            }
            acc = self.add(&acc, a);
        }
        None
    }
}

/// Structure of a finite group from a complete list of its elements.
///
/// For each `ℓ^e` exactly dividing `n = #G`, multiplication by `n / ℓ^e` maps
/// `G` onto its `ℓ`-Sylow subgroup; the sizes of `G_ℓ[ℓ^i]` then give the
/// partition of exponents.
pub fn structure_of<G: AbelianGroup>(g: &G, elems: &[G::Elem]) -> AbGroupStructure {
    let n = elems.len() as u64;
    let mut parts = BTreeMap::new();
    for (l, e) in factorize(n) {
        let m = n / l.pow(e);
        let sylow: HashSet<G::Elem> = elems.iter().map(|x| g.mul(x, m)).collect();
        assert_eq!(sylow.len() as u64, l.pow(e), "element list is not a group");
        parts.insert(l, sylow_exponents(g, sylow.iter(), l));
    }
    AbGroupStructure::from_prime_parts(&parts)
}

/// Exponent vector of an `ℓ`-group given all of its elements.
fn sylow_exponents<'a, G: AbelianGroup>(g: &G, elems: impl Iterator<Item = &'a G::Elem>, l: u64) -> Vec<u32>
where
    G::Elem: 'a,
{
    // count[i] = #{x : ℓ-order of x is exactly ℓ^i}
    let mut count: Vec<u64> = vec![];
    for x in elems {
        let mut k = 0usize;
        let mut y = x.clone();
        while !g.is_identity(&y) {
            y = g.mul(&y, l);
            k += 1;
        }
        if count.len() <= k {
            count.resize(k + 1, 0);
        }
        count[k] += 1;
    }
    partition_from_counts(&count, l)
}

/// From `count[i]` (elements of exact order `ℓ^i`) recover exponents, largest first.
fn partition_from_counts(count: &[u64], l: u64) -> Vec<u32> {
    // log_ℓ |G[ℓ^i]|
    let mut logs = vec![0u32];
    let mut total = 0u64;
    for c in count {
        total += c;
        logs.push(ilog(total, l));
    }
    let logs = &logs[1..];
    // r_i = #{factors with exponent >= i} = logs[i] - logs[i-1]
    let mut exps: Vec<u32> = vec![];
    for i in 1..logs.len() {
        let r = (logs[i] - logs[i - 1]) as usize;
        if exps.len() < r {
            exps.resize(r, 0);
        }
        for e in exps.iter_mut().take(r) {
            *e = i as u32;
        }
    }
    exps
}

fn ilog(mut n: u64, l: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % l, 0, "not an {}-group", l);
        n /= l;
        k += 1;
    }
    k
}

/// Closure of `gens` under addition, or `None` once it exceeds `limit` elements.
pub fn generated_subgroup<G: AbelianGroup>(g: &G, gens: &[G::Elem], limit: usize) -> Option<Vec<G::Elem>> {
    let id = g.identity();
    let mut seen: HashSet<G::Elem> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = g.add(&x, s);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Z/n_1 × ... × Z/n_k` as tuples.
    struct Product(Vec<u64>);

    impl AbelianGroup for Product {
        type Elem = Vec<u64>;
        fn identity(&self) -> Vec<u64> {
            vec![0; self.0.len()]
        }
        fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
            a.iter().zip(b).zip(&self.0).map(|((x, y), n)| (x + y) % n).collect()
        }
        fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
            a.iter().zip(&self.0).map(|(x, n)| (n - x) % n).collect()
        }
    }

    fn all(ns: &[u64]) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &n in ns {
            out = out.into_iter().flat_map(|v| (0..n).map(move |i| [v.clone(), vec![i]].concat())).collect();
        }
        out
    }

    fn s(f: &[u64]) -> AbGroupStructure {
        AbGroupStructure::new(f).unwrap()
    }

    #[test]
    fn census_recovers_invariant_factors() {
        for (ns, want) in [
            (vec![4, 6], vec![2, 12]),
            (vec![3, 5], vec![15]),
            (vec![2, 2, 2, 10], vec![2, 2, 2, 10]),
            (vec![9, 3, 8], vec![3, 72]),
            (vec![1], vec![]),
        ] {
            let g = Product(ns.clone());
            assert_eq!(structure_of(&g, &all(&ns)), s(&want), "{:?}", ns);
        }
    }

    #[test]
    fn chain_validation() {
        assert_eq!(AbGroupStructure::new(&[2, 3]), Err(GroupError::NotAChain(vec![2, 3])));
        assert_eq!(s(&[1, 1, 6]).factors(), &[6]);
        assert_eq!(s(&[2, 6]).to_string(), "[2,6]");
        assert_eq!(AbGroupStructure::parse("[2, 6]"), Some(s(&[2, 6])));
        assert_eq!(AbGroupStructure::trivial().to_string(), "[]");
    }

    #[test]
    fn meet_examples() {
        assert_eq!(group_meet(&s(&[15]), &[3], &s(&[35]), &[5]), s(&[5]));
        assert_eq!(group_meet(&s(&[15]), &[], &s(&[35]), &[]), s(&[5]));
        assert_eq!(group_meet(&s(&[2, 6]), &[3], &s(&[2, 30]), &[7]), s(&[2, 6]));
        assert_eq!(group_meet(&s(&[3, 651]), &[7], &s(&[12, 1092]), &[11]), s(&[3, 21]));
    }

    #[test]
    fn embedding_and_truncation() {
        assert!(s(&[3]).embeds_in(&s(&[9])));
        assert!(!s(&[3, 3]).embeds_in(&s(&[9])));
        assert!(s(&[2, 4]).embeds_in(&s(&[2, 8])));
        assert_eq!(s(&[2, 2, 4, 40]).truncate_ell_rank(2, 2), s(&[4, 40]));
        assert_eq!(s(&[3]).direct_sum(&s(&[7])), s(&[21]));
        assert_eq!(s(&[2, 4]).join(&s(&[8])), s(&[2, 8]));
    }

    #[test]
    fn generated_subgroups() {
        let g = Product(vec![4, 6]);
        let h = generated_subgroup(&g, &[vec![2, 0], vec![0, 3]], 100).unwrap();
        assert_eq!(structure_of(&g, &h), s(&[2, 2]));
        assert!(generated_subgroup(&g, &[vec![1, 1]], 5).is_none());
        assert_eq!(g.order_dividing(&vec![1, 2], 24), 12);
        assert_eq!(g.order_bounded(&vec![2, 3], 10), Some(2));
    }
}
