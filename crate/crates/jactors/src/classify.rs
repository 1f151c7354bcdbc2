//! Existence and counts of elliptic curves with a given torsion subgroup over
//! a multi-quadratic field, conditioned on rank data for the modular
//! Jacobian, and the exceptional curves over quadratic fields.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcurve::{ECPoint, EllipticCurve};
use crate::ff::is_prime;
use crate::group::AbelianGroup;
use crate::mwtors::{find_model, MwError};
use crate::poly::{primitive_kernel_poly, quadratic_factor_extraction, Field, Poly, PolyRing, Rationals};
use crate::qfield::{legendre, MultiQuadField, ResidueMap, TowerElem};

const DEFAULT_RANKS: &str = include_str!("../data/ranks.json");
const EXCEPTIONAL: &str = include_str!("../data/exceptional.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("unsupported torsion target {0}")]
    Unsupported(String),
    #[error("rank entry for {0} twist {1} has no source")]
    AnonymousRank(String, i64),
    #[error("rank data: {0}")]
    Data(String),
    #[error(transparent)]
    Model(#[from] MwError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub jacobian: String,
    pub twist: i64,
    pub rank: u64,
    pub source: String,
}

/// Ranks of `J^{(d)}(Q)` keyed by `(label, d)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankTable {
    entries: BTreeMap<(String, i64), RankEntry>,
}

impl RankTable {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn defaults() -> Self {
        Self::from_json(DEFAULT_RANKS).expect("shipped rank data")
    }

    /// Entries without a source string are refused.
    pub fn from_json(s: &str) -> Result<Self, ClassifyError> {
        let list: Vec<RankEntry> = serde_json::from_str(s).map_err(|e| ClassifyError::Data(e.to_string()))?;
        let mut t = Self::empty();
        for e in list {
            t.insert(e)?;
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self, ClassifyError> {
        let s = std::fs::read_to_string(path).map_err(|e| ClassifyError::Data(format!("{}: {}", path.display(), e)))?;
        Self::from_json(&s)
    }

    pub fn insert(&mut self, e: RankEntry) -> Result<(), ClassifyError> {
        if e.source.trim().is_empty() {
            return Err(ClassifyError::AnonymousRank(e.jacobian, e.twist));
        }
        if !crate::qfield::is_squarefree(e.twist) {
            return Err(ClassifyError::Data(format!("twist {} is not squarefree", e.twist)));
        }
        self.entries.insert((e.jacobian.clone(), e.twist), e);
        Ok(())
    }

    /// Entries of `other` override those here.
    pub fn merged(&self, other: &RankTable) -> RankTable {
        let mut out = self.clone();
        out.entries.extend(other.entries.clone());
        out
    }

    pub fn get(&self, label: &str, d: i64) -> Option<&RankEntry> {
        self.entries.get(&(label.to_string(), d))
    }

    pub fn entries(&self) -> impl Iterator<Item = &RankEntry> {
        self.entries.values()
    }
}

/// `rank J(K) = Σ_d rank J^{(d)}(Q)`; `None` if any twist is missing.
pub fn rank_from_table(label: &str, k: &MultiQuadField, table: &RankTable) -> Option<u64> {
    k.twist_classes().iter().map(|&d| table.get(label, d).map(|e| e.rank)).sum()
}

/// Twists of `label` trivialized by `K` that have no table entry.
pub fn missing_twists(label: &str, k: &MultiQuadField, table: &RankTable) -> Vec<i64> {
    k.twist_classes().into_iter().filter(|&d| table.get(label, d).is_none()).collect()
}

/// `Z/n` or `Z/m x Z/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Target {
    pub m: u64,
    pub n: u64,
}

impl Target {
    pub const SUPPORTED: [(u64, u64); 11] =
        [(1, 11), (1, 13), (1, 14), (1, 15), (1, 16), (1, 18), (2, 10), (2, 12), (3, 9), (4, 8), (6, 6)];

    pub fn parse(s: &str) -> Result<Self, ClassifyError> {
        let t = s.trim().to_ascii_lowercase().replace("z/", "").replace(' ', "");
        let nums: Vec<&str> = t.split(['x', '*']).collect();
        let parsed: Option<Vec<u64>> = nums.iter().map(|x| x.parse().ok()).collect();
        let target = match parsed.as_deref() {
            Some([n]) => Target { m: 1, n: *n },
            Some([m, n]) => Target { m: *m, n: *n },
            _ => return Err(ClassifyError::Unsupported(s.to_string())),
        };
        if Self::SUPPORTED.contains(&(target.m, target.n)) {
            Ok(target)
        } else {
            Err(ClassifyError::Unsupported(s.to_string()))
        }
    }

    pub fn label(&self) -> String {
        if self.m == 1 {
            format!("X1({})", self.n)
        } else {
            format!("X1({},{})", self.m, self.n)
        }
    }

    /// Positive rank is necessary for these targets but not known to suffice.
    pub fn one_way(&self) -> bool {
        self.m == 1 && [13, 16, 18].contains(&self.n)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "Z/{}", self.n)
        } else {
            write!(f, "Z/{} x Z/{}", self.m, self.n)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    None,
    AtLeast(u64),
    InfinitelyMany,
    NoConclusion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Iff,
    OneWay,
}

/// An elliptic curve over `Q(√d)`; coefficients `[a1, a2, a3, a4, a6]`,
/// each `a + b √d` written as `[a, b]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub name: String,
    pub target: u64,
    pub d: i64,
    pub coeffs: Vec<[String; 2]>,
}

impl CurveRecord {
    pub fn field(&self) -> MultiQuadField {
        MultiQuadField::new(&[self.d]).expect("squarefree field generator")
    }

    pub fn curve(&self) -> Result<EllipticCurve<MultiQuadField>, ClassifyError> {
        let k = self.field();
        let parse = |s: &str| s.parse::<BigRational>().map_err(|e| ClassifyError::Data(format!("{}: {}", s, e)));
        let mut a = vec![];
        for [x, y] in &self.coeffs {
            a.push(k.quadratic(parse(x)?, parse(y)?, self.d).unwrap());
        }
        let a: [TowerElem; 5] = a.try_into().map_err(|_| ClassifyError::Data(format!("{}: five coefficients expected", self.name)))?;
        Ok(EllipticCurve::new(k, a).map_err(|e| ClassifyError::Data(e.to_string()))?.with_label(&self.name))
    }
}

pub fn shipped_exceptional() -> Vec<CurveRecord> {
    serde_json::from_str(EXCEPTIONAL).expect("shipped curve data")
}

/// The shipped curves with torsion `Z/n` over a quadratic subfield of `K`.
pub fn exceptional_curves(target: &Target, k: &MultiQuadField) -> Vec<CurveRecord> {
    if target.m != 1 {
        return vec![];
    }
    shipped_exceptional().into_iter().filter(|c| c.target == target.n && k.contains(c.d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub target: String,
    pub field: String,
    pub jacobian: String,
    /// `None` when some twist has no rank entry
    pub rank: Option<u64>,
    pub missing_twists: Vec<i64>,
    pub existence: Existence,
    /// the count equals the floor (rank zero)
    pub exact: bool,
    pub equivalence: Direction,
    /// number of curves that exist whatever the rank
    pub floor: u64,
    pub summary: String,
    pub exceptional_curves: Vec<CurveRecord>,
    pub notes: Vec<String>,
}

/// Unconditional number of curves with torsion containing the target.
fn floor(target: &Target, k: &MultiQuadField) -> u64 {
    match (target.m, target.n) {
        (1, 14) if k.contains(-7) => 2,
        (1, 15) => [5, -15].iter().filter(|&&d| k.contains(d)).count() as u64,
        _ => 0,
    }
}

pub fn classify(target: &Target, k: &MultiQuadField, table: &RankTable) -> Result<Verdict, ClassifyError> {
    let label = target.label();
    let model = find_model(&label)?;
    let base = model.base()?;
    if !k.contains_field(&base) {
        return Err(MwError::Precondition { label, base: model.base_field, field: k.literal() }.into());
    }
    let rank = rank_from_table(&label, k, table);
    let missing = missing_twists(&label, k, table);
    let fl = floor(target, k);
    let one_way = target.one_way();
    let mut notes = vec![];
    let (existence, exact, summary) = match rank {
        Some(0) if fl == 0 => (Existence::None, true, "none".to_string()),
        Some(0) => (Existence::AtLeast(fl), true, format!("exactly {}", fl)),
        Some(_) if one_way => (
            Existence::NoConclusion,
            false,
            "no conclusion: positive rank is necessary but not known to be sufficient".to_string(),
        ),
        Some(_) => (Existence::InfinitelyMany, false, "infinitely many".to_string()),
        None => {
            let cond = format!(
                "rank {}(K) = sum of ranks of the twists by {:?} over Q; missing {:?}",
                label,
                k.twist_classes(),
                missing
            );
            let then = if one_way {
                "none if that rank is 0, no conclusion otherwise".to_string()
            } else if fl == 0 {
                "none if that rank is 0, infinitely many otherwise".to_string()
            } else {
                format!("exactly {} if that rank is 0, infinitely many otherwise", fl)
            };
            notes.push(cond.clone());
            let e = if fl > 0 { Existence::AtLeast(fl) } else { Existence::NoConclusion };
            (e, false, format!("conditional: {}", then))
        }
    };
    if fl > 0 && rank == Some(0) {
        let ds: Vec<String> = exceptional_curves(target, k).iter().map(|c| c.d.to_string()).collect();
        notes.push(format!("every such curve over K is defined over Q(sqrt(d)) for d in {{{}}}", ds.join(", ")));
    }
    Ok(Verdict {
        target: target.to_string(),
        field: k.literal(),
        jacobian: label,
        rank,
        missing_twists: missing,
        existence,
        exact,
        equivalence: if one_way { Direction::OneWay } else { Direction::Iff },
        floor: fl,
        summary,
        exceptional_curves: exceptional_curves(target, k),
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub curve: String,
    pub n: u64,
    /// split primes `p < 200` where `n | #E(F_p)` was checked (both primes above `p`)
    pub split_primes: Vec<u64>,
    /// constructed points `(order, x, y)`
    pub points: Vec<(u64, String, String)>,
    /// order of the sum of the constructed points, when every prime power was built
    pub combined_order: Option<u64>,
    pub failures: Vec<String>,
    pub ok: bool,
}

/// Roots in `K = Q(√d)` of a polynomial over `K`, via the degree-≤2
/// rational factors of its norm.
fn roots_in_quadratic(k: &MultiQuadField, f: &Poly<TowerElem>) -> Vec<TowerElem> {
    let r = PolyRing::new(k.clone());
    let conj = r.from_coeffs(f.coeffs().iter().map(|c| k.conjugate(c, 1)).collect());
    let norm = r.mul(f, &conj);
    let rq = PolyRing::new(Rationals);
    let nq = rq.from_coeffs(norm.coeffs().iter().map(|c| k.as_rational(c).expect("norm is rational")).collect());
    let Ok(factors) = quadratic_factor_extraction(&nq) else {
        return vec![];
    };
    let mut out = vec![];
    for c in factors {
        let cq: Vec<BigRational> = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let cands = if cq.len() == 2 {
            vec![k.elem_from_rational(-cq[0].clone() / cq[1].clone())]
        } else {
            let disc = k.elem_from_rational(&cq[1] * &cq[1] - BigRational::from_integer(BigInt::from(4)) * &cq[0] * &cq[2]);
            match k.sqrt(&disc) {
                None => vec![],
                Some(s) => {
                    let two_a = k.elem_from_rational(BigRational::from_integer(BigInt::from(2)) * &cq[2]);
                    let mb = k.elem_from_rational(-cq[1].clone());
                    vec![k.div(&k.add(&mb, &s), &two_a).unwrap(), k.div(&k.sub(&mb, &s), &two_a).unwrap()]
                }
            }
        };
        for a in cands {
            if k.is_zero(&r.eval(f, &a)) && !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// A point of exact order `ℓ^e` with coordinates in the field.
fn point_of_order(e: &EllipticCurve<MultiQuadField>, l: u64, ex: u32) -> Option<ECPoint<TowerElem>> {
    let n = l.pow(ex);
    let poly = if n == 2 { e.two_division_cubic() } else { primitive_kernel_poly(&e.weierstrass(), n as u32) };
    for x in roots_in_quadratic(&e.field, &poly) {
        for p in e.lift_x(&x) {
            if e.order_dividing(&p, n) == n {
                return Some(p);
            }
        }
    }
    None
}

/// Independent checks of a shipped curve: `n | #E(F_p)` at split primes and
/// explicit points for the prime powers `2, 3, 5` of `n`.
pub fn verify_exceptional(rec: &CurveRecord, n: u64) -> Result<VerificationReport, ClassifyError> {
    let e = rec.curve()?;
    let k = e.field.clone();
    let mut failures = vec![];
    let mut split_primes = vec![];
    let mut points = vec![];
    if n > 1 {
        for p in (3..200).filter(|&p| is_prime(p) && legendre(rec.d, p) == 1) {
            let Ok(map) = ResidueMap::new(&k, p) else {
                continue;
            };
            let mut good = true;
            for m in [map.clone(), map.flipped(1)] {
                match e.reduce_via(&m) {
                    Ok(ep) => {
                        let c = ep.count_points();
                        if c % n != 0 {
                            failures.push(format!("p = {}: #E(F_p) = {} not divisible by {}", p, c, n));
                        }
                    }
                    Err(_) => good = false,
                }
            }
            if good {
                split_primes.push(p);
            }
        }
    }
    let mut sum = ECPoint::Infinity;
    let mut all_built = n > 1;
    for (l, ex) in crate::group::factorize(n) {
        if l > 5 {
            all_built = false;
            continue;
        }
        match point_of_order(&e, l, ex) {
            Some(p) => {
                if let ECPoint::Affine(x, y) = &p {
                    points.push((l.pow(ex), k.fmt_elem(x), k.fmt_elem(y)));
                }
                sum = e.add(&sum, &p);
            }
            None => {
                all_built = false;
                failures.push(format!("no point of order {} found", l.pow(ex)));
            }
        }
    }
    let combined_order = if all_built {
        let o = e.order_dividing(&sum, n);
        if o != n {
            failures.push(format!("combined point has order {} instead of {}", o, n));
        }
        Some(o)
    } else {
        None
    };
    Ok(VerificationReport {
        curve: rec.name.clone(),
        n,
        split_primes,
        points,
        combined_order,
        ok: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> MultiQuadField {
        MultiQuadField::parse(s).unwrap()
    }

    #[test]
    fn shipped_ranks() {
        let t = RankTable::defaults();
        assert_eq!(rank_from_table("X1(14)", &k("-7"), &t), Some(0));
        assert_eq!(rank_from_table("X1(15)", &k("-3,5"), &t), Some(0));
        assert_eq!(rank_from_table("X1(11)", &k("2"), &t), None);
    }

    #[test]
    fn anonymous_ranks_are_refused() {
        let e = RankTable::from_json(r#"[{"jacobian": "X1(11)", "twist": 2, "rank": 1, "source": " "}]"#);
        assert!(matches!(e, Err(ClassifyError::AnonymousRank(..))));
    }

    #[test]
    fn targets() {
        assert_eq!(Target::parse("2x12").unwrap().label(), "X1(2,12)");
        assert_eq!(Target::parse("14").unwrap().label(), "X1(14)");
        assert!(Target::parse("17").is_err());
    }

    #[test]
    fn fourteen_over_minus_seven() {
        let v = classify(&Target::parse("14").unwrap(), &k("-7"), &RankTable::defaults()).unwrap();
        assert_eq!(v.existence, Existence::AtLeast(2));
        assert!(v.exact);
        assert_eq!(v.summary, "exactly 2");
        assert_eq!(v.exceptional_curves.len(), 2);
    }

    #[test]
    fn fifteen_counts() {
        let t = RankTable::defaults();
        let fifteen = Target::parse("15").unwrap();
        assert_eq!(classify(&fifteen, &k("-3,5"), &t).unwrap().summary, "exactly 2");
        assert_eq!(classify(&fifteen, &k("5"), &t).unwrap().summary, "exactly 1");
        assert_eq!(classify(&fifteen, &k("-3"), &t).unwrap().existence, Existence::None);
        let v = classify(&fifteen, &k("2"), &t).unwrap();
        assert_eq!(v.rank, None);
        assert_eq!(v.missing_twists, vec![2]);
        assert_eq!(v.existence, Existence::NoConclusion);
    }

    #[test]
    fn one_way_targets() {
        let mut t = RankTable::empty();
        t.insert(RankEntry { jacobian: "X1(13)".into(), twist: 1, rank: 0, source: "test".into() }).unwrap();
        t.insert(RankEntry { jacobian: "X1(13)".into(), twist: 2, rank: 1, source: "test".into() }).unwrap();
        let thirteen = Target::parse("13").unwrap();
        assert_eq!(classify(&thirteen, &k("Q"), &t).unwrap().existence, Existence::None);
        let v = classify(&thirteen, &k("2"), &t).unwrap();
        assert_eq!(v.existence, Existence::NoConclusion);
        assert_eq!(v.equivalence, Direction::OneWay);
    }

    #[test]
    fn base_field_precondition() {
        let e = classify(&Target::parse("4x8").unwrap(), &k("2"), &RankTable::defaults());
        assert!(matches!(e, Err(ClassifyError::Model(MwError::Precondition { .. }))));
    }

    #[test]
    fn shipped_curves_verify() {
        for rec in shipped_exceptional() {
            let r = verify_exceptional(&rec, rec.target).unwrap();
            assert!(r.ok, "{}: {:?}", rec.name, r.failures);
            assert!(r.split_primes.len() > 10);
            if rec.target == 15 {
                assert_eq!(r.combined_order, Some(15));
            }
        }
    }
}
