//! Torsion of `J(K)` for the modular Jacobians over multi-quadratic fields.
//!
//! The upper bound folds reductions at a few good primes; the lower bound is
//! an explicit subgroup. For elliptic curves both odd and 2-power parts are
//! computed exactly, so the interval always closes. For genus 2 the gap is
//! narrowed with the twist decomposition `J(K)[ℓ^∞] = ⊕_d J^{(d)}(Q)[ℓ^∞]`
//! (odd `ℓ`), the Galois structure of the Weierstrass points, and order
//! constraints at further primes.

mod bounds;
mod model;
mod search;
mod tower;

use serde::Serialize;
use thiserror::Error;

use crate::ellcurve::{ECPoint, EllipticCurve};
use crate::group::{group_meet, AbGroupStructure, AbelianGroup};
use crate::hyperjac::two_torsion_galois;
use crate::poly::{primitive_kernel_poly, quadratic_factor_extraction, splitting_quadratic_field, to_rational_poly, Field, Rationals};
use crate::qfield::{MultiQuadField, TowerElem};

pub use bounds::{auxiliary_primes, bounded_join, order_over, reduction_bound, twist_order_bound, valuation, ReductionStep};
pub use model::{
    builtin_models, find_model, load_model_file, load_models, parse_models, CurveModel, LocalCache, LocalOrders,
    ModelCurve, TableRow, DATA_DIR_ENV,
};
pub use search::{genus2_candidates, odd_points, rational_kernel_roots, two_power_torsion, TwoPower};
pub use tower::{eigen_projection, is_rational_over, span_structure, TowerGroup};

use bounds::with_ell_part;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MwError {
    #[error("unknown model label {0}")]
    UnknownLabel(String),
    #[error("model data: {0}")]
    Data(String),
    #[error("prime {0} rejected: {1}")]
    BadPrime(u64, String),
    #[error("no primes supplied")]
    NoPrimes,
    #[error("{label} requires Q(sqrt({base})) inside K, got K = {field}")]
    Precondition { label: String, base: String, field: String },
    #[error("no table row for {label} over {field}")]
    NoTableRow { label: String, field: String },
    #[error("{label} over {field}: derived {derived} contradicts the table value {table} (data integrity)")]
    Discrepancy { label: String, field: String, derived: String, table: String },
    #[error("internal: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Derive,
    Table,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "derive" => Ok(Mode::Derive),
            "table" => Ok(Mode::Table),
            _ => Err(format!("unknown mode {}", s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionResult {
    pub label: String,
    pub field: String,
    pub lower: AbGroupStructure,
    pub upper: AbGroupStructure,
    pub closed: bool,
    pub trace: Vec<String>,
}

/// One summand `J^{(d)}(Q)[ℓ^∞]` of the twist decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistSummand {
    pub d: i64,
    pub lower: AbGroupStructure,
    pub upper: AbGroupStructure,
    /// primes whose twisted orders gave the bound
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub ell: u64,
    pub summands: Vec<TwistSummand>,
    pub lower: AbGroupStructure,
    pub upper: AbGroupStructure,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EightTorsion {
    pub holds: bool,
    /// degree-≤2 factors of the primitive 8-kernel polynomial (constant first)
    /// with the squarefree `d` of their splitting field
    pub factors: Vec<(Vec<String>, i64)>,
    pub witness: Option<(String, String)>,
}

const SEARCH_LIMIT: u64 = 1 << 14;
const TWIST_PRIME_MAX: u64 = 200;
const EXTENSION_PRIME_MAX: u64 = 60;

pub struct TorsionEngine {
    pub model: CurveModel,
    pub curve: ModelCurve,
    pub primes: Vec<u64>,
    /// add further primes (order constraints only) when derive mode stays open
    pub extend: bool,
    cache: LocalCache,
    kernel_roots: std::collections::HashMap<u32, Vec<num_rational::BigRational>>,
}

impl TorsionEngine {
    pub fn new(model: CurveModel) -> Result<Self, MwError> {
        let curve = model.curve()?;
        let primes = model.primes.clone();
        Ok(TorsionEngine { model, curve, primes, extend: true, cache: LocalCache::default(), kernel_roots: Default::default() })
    }

    pub fn for_label(label: &str) -> Result<Self, MwError> {
        Self::new(find_model(label)?)
    }

    pub fn with_primes(mut self, primes: Vec<u64>) -> Self {
        self.primes = primes;
        self
    }

    pub fn check_base(&self, k: &MultiQuadField) -> Result<(), MwError> {
        let base = self.model.base()?;
        if k.contains_field(&base) {
            Ok(())
        } else {
            Err(MwError::Precondition { label: self.model.label.clone(), base: self.model.base_field.clone(), field: k.literal() })
        }
    }

    pub fn structure_mod(&mut self, p: u64, f: u32) -> Result<AbGroupStructure, MwError> {
        if self.model.n() % p == 0 {
            return Err(MwError::BadPrime(p, format!("divides the level {}", self.model.n())));
        }
        self.cache.structure(&self.curve, p, f)
    }

    pub fn reduction_bound(&mut self, k: &MultiQuadField) -> Result<(AbGroupStructure, Vec<ReductionStep>), MwError> {
        let primes = self.primes.clone();
        reduction_bound(&self.model, &self.curve, &mut self.cache, k, &primes)
    }

    pub fn torsion_table(&mut self, k: &MultiQuadField, mode: Mode) -> Result<TorsionResult, MwError> {
        match mode {
            Mode::Derive => self.derive(k),
            Mode::Table => self.table(k),
        }
    }

    pub fn table(&self, k: &MultiQuadField) -> Result<TorsionResult, MwError> {
        self.check_base(k)?;
        let kn = k.cyclotomic_intersection(self.model.n());
        let g = self
            .model
            .table_value(k)
            .ok_or_else(|| MwError::NoTableRow { label: self.model.label.clone(), field: k.literal() })?;
        Ok(TorsionResult {
            label: self.model.label.clone(),
            field: k.literal(),
            lower: g.clone(),
            upper: g,
            closed: true,
            trace: vec![format!("table row for K_({}) = {}", self.model.n(), kn)],
        })
    }

    /// Bounds and search, before the comparison with the table.
    fn derive_inner(&mut self, k: &MultiQuadField) -> Result<TorsionResult, MwError> {
        self.check_base(k)?;
        let (u, steps) = self.reduction_bound(k)?;
        let mut trace = vec![];
        for s in &steps {
            trace.push(format!("J(F_{}^{}) = {}", s.p, s.f, s.structure));
        }
        trace.push(format!("reduction bound {}", u));
        let (lower, upper) = match self.curve.clone() {
            ModelCurve::Elliptic(e) => self.derive_elliptic(&e, k, &u, &mut trace)?,
            ModelCurve::Hyper(_) => self.derive_genus2(k, &u, &mut trace)?,
        };
        if !lower.embeds_in(&upper) {
            return Err(MwError::Internal(format!("lower bound {} does not embed in {}", lower, upper)));
        }
        let closed = lower == upper;
        trace.push(if closed { format!("closed at {}", lower) } else { format!("open: {} <= J(K)_tors <= {}", lower, upper) });
        Ok(TorsionResult { label: self.model.label.clone(), field: k.literal(), lower, upper, closed, trace })
    }

    /// Derive mode. A closed result that differs from the table row, or an
    /// open interval not containing it, is an error.
    pub fn derive(&mut self, k: &MultiQuadField) -> Result<TorsionResult, MwError> {
        let r = self.derive_inner(k)?;
        if let Some(t) = self.model.table_value(k) {
            let inside = r.lower.embeds_in(&t) && t.embeds_in(&r.upper);
            if (r.closed && r.lower != t) || !inside {
                return Err(MwError::Discrepancy {
                    label: r.label,
                    field: r.field,
                    derived: if r.closed { r.lower.to_string() } else { format!("{}..{}", r.lower, r.upper) },
                    table: t.to_string(),
                });
            }
        }
        Ok(r)
    }

    fn derive_elliptic(
        &mut self,
        e: &EllipticCurve<Rationals>,
        k: &MultiQuadField,
        u: &AbGroupStructure,
        trace: &mut Vec<String>,
    ) -> Result<(AbGroupStructure, AbGroupStructure), MwError> {
        let ek = e.base_change(k);
        let mut exact = AbGroupStructure::trivial();
        for l in u.primes() {
            let part = if l == 2 {
                let t = two_power_torsion(e, k, SEARCH_LIMIT as usize)?;
                trace.push(format!("2-power part {} by halving over Q({})", t.structure, t.field.literal()));
                t.structure
            } else {
                let kmax = valuation(u.exponent(), l);
                let pts = self.odd_points(e, &ek, l, kmax)?;
                let (s, _) = span_structure(&ek, &pts, SEARCH_LIMIT).ok_or_else(|| MwError::Internal("odd part too large".into()))?;
                trace.push(format!("{}-part {} from rational kernel roots up to {}^{}", l, s, l, kmax));
                s
            };
            exact = exact.direct_sum(&part);
        }
        if !exact.embeds_in(u) {
            return Err(MwError::Internal(format!("exact torsion {} exceeds the reduction bound {}", exact, u)));
        }
        Ok((exact.clone(), exact))
    }

    /// Points of order `ℓ^j`, `j <= kmax`, with rational `x`; kernel roots cached.
    fn odd_points(
        &mut self,
        e: &EllipticCurve<Rationals>,
        ek: &EllipticCurve<MultiQuadField>,
        l: u64,
        kmax: u32,
    ) -> Result<Vec<ECPoint<TowerElem>>, MwError> {
        let mut out = vec![];
        for j in 1..=kmax {
            let n = l.pow(j) as u32;
            if !self.kernel_roots.contains_key(&n) {
                self.kernel_roots.insert(n, rational_kernel_roots(e, n)?);
            }
            for x in &self.kernel_roots[&n] {
                out.extend(ek.lift_x(&ek.field.elem_from_rational(x.clone())));
            }
        }
        Ok(out)
    }

    fn genus2_torsion_elements(&self, k: &MultiQuadField, u: &AbGroupStructure) -> Result<(crate::hyperjac::Jacobian<MultiQuadField>, Vec<crate::hyperjac::MumfordDiv<TowerElem>>), MwError> {
        let ModelCurve::Hyper(c) = &self.curve else {
            return Err(MwError::Internal("not a genus-2 model".into()));
        };
        let ck = c.map_to(k.clone(), |a| Some(k.elem_from_rational(a.clone()))).map_err(|e| MwError::Internal(e.to_string()))?;
        let j = ck.jacobian().map_err(|e| MwError::Internal(e.to_string()))?;
        let mut cands = genus2_candidates(c, k)?;
        let mut seen = std::collections::HashSet::new();
        cands.retain(|d| seen.insert(d.clone()));
        let ex = u.exponent();
        let tors: Vec<_> = cands.into_iter().filter(|d| j.is_identity(&j.mul(d, ex))).collect();
        Ok((j, tors))
    }

    fn derive_genus2(
        &mut self,
        k: &MultiQuadField,
        u: &AbGroupStructure,
        trace: &mut Vec<String>,
    ) -> Result<(AbGroupStructure, AbGroupStructure), MwError> {
        let (j, tors) = self.genus2_torsion_elements(k, u)?;
        let (lower, _) = span_structure(&j, &tors, u.order()).ok_or_else(|| MwError::Internal("search exceeded the bound".into()))?;
        trace.push(format!("explicit divisors generate {}", lower));
        let mut upper = u.clone();
        for l in u.primes() {
            if lower.ell_part(l) == upper.ell_part(l) {
                continue;
            }
            if l == 2 {
                let ModelCurve::Hyper(c) = &self.curve else { unreachable!() };
                let tt = two_torsion_galois(&c.f, k).map_err(|e| MwError::Internal(e.to_string()))?;
                if upper.ell_part(2).exponent() <= 2 && tt.exact {
                    let r = tt.rank().min(upper.ell_exponents(2).len());
                    upper = with_ell_part(&upper, 2, vec![1; r]);
                    trace.push(format!("2-part elementary, J(K)[2] = {} from Weierstrass orbits {:?}", tt.structure, tt.blocks));
                }
            } else {
                let rep = self.twist_report(k, l, &upper, &j, &tors)?;
                trace.push(format!(
                    "{}-part by twists: {}",
                    l,
                    rep.summands.iter().map(|s| format!("d={}: {}..{}", s.d, s.lower, s.upper)).collect::<Vec<_>>().join(", ")
                ));
                upper = with_ell_part(&upper, l, rep.upper.ell_exponents(l));
            }
        }
        if lower != upper && self.extend {
            let bad = 2 * self.model.n();
            for p in auxiliary_primes(bad, EXTENSION_PRIME_MAX) {
                if self.primes.contains(&p) || lower == upper {
                    continue;
                }
                let (f, _) = k.residue_degree(p).map_err(|e| MwError::BadPrime(p, e.to_string()))?;
                let Some(n) = order_over(&self.curve, &mut self.cache, p, f)? else {
                    continue;
                };
                let mut changed = false;
                for l in upper.primes() {
                    if l == p || lower.ell_part(l) == upper.ell_part(l) {
                        continue;
                    }
                    let new = bounded_join(&upper.ell_exponents(l), &lower.ell_exponents(l), valuation(n, l))
                        .ok_or_else(|| MwError::Internal(format!("order at {} contradicts the lower bound", p)))?;
                    if new != upper.ell_exponents(l) {
                        upper = with_ell_part(&upper, l, new);
                        changed = true;
                    }
                }
                if changed {
                    trace.push(format!("extended with #J(F_{}^{}) = {}: bound {}", p, f, n, upper));
                }
            }
        }
        Ok((lower, upper))
    }

    fn twist_report<G: TowerGroup>(
        &mut self,
        k: &MultiQuadField,
        l: u64,
        u: &AbGroupStructure,
        g: &G,
        tors: &[G::Elem],
    ) -> Result<TwistReport, MwError> {
        let ul = u.ell_part(l);
        let m = ul.exponent();
        let cof = u.order() / ul.order();
        let ell_elems: Vec<G::Elem> = tors.iter().map(|x| g.mul(x, cof)).collect();
        let mut summands = vec![];
        let mut lower = AbGroupStructure::trivial();
        let mut sum = AbGroupStructure::trivial();
        for d in k.twist_classes() {
            let proj: Vec<G::Elem> = ell_elems.iter().map(|x| eigen_projection(g, x, d, m.max(1))).collect();
            let (ld, _) = span_structure(g, &proj, ul.order().max(1)).ok_or_else(|| MwError::Internal("eigenspace too large".into()))?;
            let (b, primes) = twist_order_bound(&self.model, &self.curve, &mut self.cache, d, l, TWIST_PRIME_MAX)?;
            let ud = bounded_join(&ul.ell_exponents(l), &ld.ell_exponents(l), b.min(64))
                .map(|es| with_ell_part(&AbGroupStructure::trivial(), l, es))
                .ok_or_else(|| MwError::Internal(format!("twist {} bound contradicts the search", d)))?;
            lower = lower.direct_sum(&ld);
            sum = sum.direct_sum(&ud);
            summands.push(TwistSummand { d, lower: ld, upper: ud, primes });
        }
        let upper = group_meet(&ul, &[], &sum, &[]);
        let closed = lower == upper;
        Ok(TwistReport { ell: l, summands, lower, upper, closed })
    }

    /// `J(K)[ℓ^∞]` as a sum over the quadratic twists trivialized by `K`.
    pub fn twist_odd_torsion(&mut self, k: &MultiQuadField, l: u64) -> Result<TwistReport, MwError> {
        if l % 2 == 0 || !crate::ff::is_prime(l) {
            return Err(MwError::Internal(format!("twist decomposition needs an odd prime, got {}", l)));
        }
        let (u, _) = self.reduction_bound(k)?;
        match self.curve.clone() {
            ModelCurve::Elliptic(e) => {
                let ek = e.base_change(k);
                let pts = self.odd_points(&e, &ek, l, valuation(u.exponent(), l))?;
                self.twist_report(k, l, &u, &ek, &pts)
            }
            ModelCurve::Hyper(_) => {
                let (j, tors) = self.genus2_torsion_elements(k, &u)?;
                self.twist_report(k, l, &u, &j, &tors)
            }
        }
    }

    /// Whether `E(K)` has a point of order 8, decided from the degree-≤2
    /// factors of the primitive 8-kernel polynomial.
    pub fn eight_torsion_criterion(&self, k: &MultiQuadField) -> Result<EightTorsion, MwError> {
        let ModelCurve::Elliptic(e) = &self.curve else {
            return Err(MwError::Internal("the 8-torsion criterion needs a genus-1 model".into()));
        };
        eight_torsion_criterion(e, k)
    }
}

pub fn eight_torsion_criterion(e: &EllipticCurve<Rationals>, k: &MultiQuadField) -> Result<EightTorsion, MwError> {
    let f = primitive_kernel_poly(&e.weierstrass(), 8);
    let fs = quadratic_factor_extraction(&f).map_err(|e| MwError::Internal(e.to_string()))?;
    let ek = e.base_change(k);
    let mut factors = vec![];
    let mut witness = None;
    for c in &fs {
        let rp = to_rational_poly(c);
        let d = if c.len() == 2 { 1 } else { splitting_quadratic_field(&rp).map_err(|e| MwError::Internal(e.to_string()))? };
        factors.push((c.iter().map(|x| x.to_string()).collect(), d));
        if witness.is_some() || !(d == 1 || k.contains(d)) {
            continue;
        }
        for a in roots_in(k, c) {
            for p in ek.lift_x(&a) {
                let four = ek.mul(&p, 4);
                if ek.is_identity(&ek.mul(&four, 2)) && !ek.is_identity(&four) {
                    if let ECPoint::Affine(x, y) = &p {
                        witness = Some((k.fmt_elem(x), k.fmt_elem(y)));
                    }
                    break;
                }
            }
            if witness.is_some() {
                break;
            }
        }
    }
    Ok(EightTorsion { holds: witness.is_some(), factors, witness })
}

/// Roots in `K` of an integer polynomial of degree 1 or 2 that splits there.
fn roots_in(k: &MultiQuadField, c: &[num_bigint::BigInt]) -> Vec<TowerElem> {
    use num_rational::BigRational;
    let r = |i: usize| BigRational::from_integer(c[i].clone());
    if c.len() == 2 {
        return vec![k.elem_from_rational(-r(0) / r(1))];
    }
    let disc = k.elem_from_rational(r(1) * r(1) - BigRational::from_integer(4.into()) * r(0) * r(2));
    let Some(s) = k.sqrt(&disc) else {
        return vec![];
    };
    let two_a = k.elem_from_rational(BigRational::from_integer(2.into()) * r(2));
    let mb = k.elem_from_rational(-r(1));
    vec![k.div(&k.add(&mb, &s), &two_a).unwrap(), k.div(&k.sub(&mb, &s), &two_a).unwrap()]
}

/// Derive or look up `J(K)_tors` for a shipped label.
pub fn torsion_table(label: &str, k: &MultiQuadField, mode: Mode) -> Result<TorsionResult, MwError> {
    TorsionEngine::for_label(label)?.torsion_table(k, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> MultiQuadField {
        MultiQuadField::parse(s).unwrap()
    }

    #[test]
    fn rational_torsion_of_the_elliptic_models() {
        for (label, base, want) in [
            ("X1(11)", "Q", "[5]"),
            ("X1(14)", "Q", "[6]"),
            ("X1(15)", "Q", "[4]"),
            ("X1(2,10)", "Q", "[6]"),
            ("X1(2,12)", "Q", "[4]"),
            ("X1(3,9)", "-3", "[3,3]"),
            ("X1(4,8)", "-1", "[2,4]"),
            ("X1(6,6)", "-3", "[2,6]"),
        ] {
            let r = torsion_table(label, &k(base), Mode::Derive).unwrap();
            assert!(r.closed, "{}: {:?}", label, r.trace);
            assert_eq!(r.lower.to_string(), want, "{}", label);
        }
    }

    #[test]
    fn twist_summands() {
        let mut x14 = TorsionEngine::for_label("X1(14)").unwrap();
        let r = x14.twist_odd_torsion(&k("-7"), 3).unwrap();
        assert!(r.closed);
        assert_eq!(r.lower, AbGroupStructure::cyclic(3));
        let mut x18 = TorsionEngine::for_label("X1(18)").unwrap();
        let r = x18.twist_odd_torsion(&k("-3"), 3).unwrap();
        let minus3 = r.summands.iter().find(|s| s.d == -3).unwrap();
        assert_eq!((minus3.lower.clone(), minus3.upper.clone()), (AbGroupStructure::cyclic(3), AbGroupStructure::cyclic(3)));
    }

    #[test]
    fn eight_torsion_of_x1_15() {
        let x15 = TorsionEngine::for_label("X1(15)").unwrap();
        assert!(x15.eight_torsion_criterion(&k("5")).unwrap().holds);
        assert!(x15.eight_torsion_criterion(&k("-3")).unwrap().holds);
        assert!(!x15.eight_torsion_criterion(&k("2")).unwrap().holds);
        let x212 = TorsionEngine::for_label("X1(2,12)").unwrap();
        assert!(x212.eight_torsion_criterion(&k("-1")).unwrap().holds);
    }

    #[test]
    fn precondition_on_the_base_field() {
        let e = torsion_table("X1(4,8)", &k("Q"), Mode::Derive).unwrap_err();
        assert!(matches!(e, MwError::Precondition { .. }));
    }
}
