//! Curve model records and their reductions.

use std::collections::HashMap;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::MwError;
use crate::ellcurve::EllipticCurve;
use crate::ff::{is_prime, FieldDesc};
use crate::group::AbGroupStructure;
use crate::hyperjac::{zeta_order, HyperCurve};
use crate::poly::{Field, PolyRing, Rationals};
use crate::qfield::MultiQuadField;

const BUILTIN: &str = include_str!("../../data/models.json");

/// Environment variable naming a directory that replaces the shipped data.
pub const DATA_DIR_ENV: &str = "JACTORS_DATA_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    /// field literal for `K_(N)`, or `*` for every field
    pub field: String,
    pub group: AbGroupStructure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    pub label: String,
    /// `(M, MN)`
    pub level: [u64; 2],
    pub genus: u32,
    /// "Q" or the squarefree `d` with `Q(ζ_M) = Q(√d)`
    pub base_field: String,
    /// `[a1, a2, a3, a4, a6]` for genus 1, `F` constant term first for genus 2
    pub coeffs: Vec<i64>,
    pub source: String,
    pub primes: Vec<u64>,
    #[serde(default)]
    pub table: Vec<TableRow>,
}

impl CurveModel {
    pub fn n(&self) -> u64 {
        self.level[1]
    }

    pub fn base(&self) -> Result<MultiQuadField, MwError> {
        MultiQuadField::parse(&self.base_field).map_err(|e| MwError::Data(format!("{}: {}", self.label, e)))
    }

    pub fn curve(&self) -> Result<ModelCurve, MwError> {
        let bad = |e: String| MwError::Data(format!("{}: {}", self.label, e));
        match self.genus {
            1 => {
                let a: [i64; 5] = self.coeffs.clone().try_into().map_err(|_| bad("expected five coefficients".into()))?;
                let e = EllipticCurve::from_ints(a).map_err(|e| bad(e.to_string()))?.with_label(&self.label);
                Ok(ModelCurve::Elliptic(e))
            }
            2 => {
                let c = HyperCurve::from_ints(&self.coeffs).map_err(|e| bad(e.to_string()))?.with_label(&self.label);
                Ok(ModelCurve::Hyper(c))
            }
            g => Err(bad(format!("unsupported genus {}", g))),
        }
    }

    /// Table answer for `K`, keyed on `K ∩ Q(ζ_N)`.
    pub fn table_value(&self, k: &MultiQuadField) -> Option<AbGroupStructure> {
        let kn = k.cyclotomic_intersection(self.n());
        self.table.iter().find_map(|row| {
            if row.field == "*" {
                return Some(row.group.clone());
            }
            let f = MultiQuadField::parse(&row.field).ok()?;
            (f == kn).then(|| row.group.clone())
        })
    }
}

pub fn parse_models(json: &str) -> Result<Vec<CurveModel>, MwError> {
    let models: Vec<CurveModel> = serde_json::from_str(json).map_err(|e| MwError::Data(e.to_string()))?;
    for m in &models {
        m.curve()?;
        m.base()?;
    }
    Ok(models)
}

/// Shipped models, or `models.json` from the data-directory override.
pub fn builtin_models() -> Result<Vec<CurveModel>, MwError> {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => load_models(&Path::new(&dir).join("models.json")),
        None => parse_models(BUILTIN),
    }
}

pub fn load_models(path: &Path) -> Result<Vec<CurveModel>, MwError> {
    let s = std::fs::read_to_string(path).map_err(|e| MwError::Data(format!("{}: {}", path.display(), e)))?;
    parse_models(&s)
}

/// A model file holding either one record or a list.
pub fn load_model_file(path: &Path) -> Result<Vec<CurveModel>, MwError> {
    let s = std::fs::read_to_string(path).map_err(|e| MwError::Data(format!("{}: {}", path.display(), e)))?;
    if s.trim_start().starts_with('{') {
        let m: CurveModel = serde_json::from_str(&s).map_err(|e| MwError::Data(e.to_string()))?;
        parse_models(&serde_json::to_string(&vec![m]).unwrap())
    } else {
        parse_models(&s)
    }
}

pub fn find_model(label: &str) -> Result<CurveModel, MwError> {
    builtin_models()?
        .into_iter()
        .find(|m| m.label.eq_ignore_ascii_case(label))
        .ok_or_else(|| MwError::UnknownLabel(label.to_string()))
}

#[derive(Clone, Debug)]
pub enum ModelCurve {
    Elliptic(EllipticCurve<Rationals>),
    Hyper(HyperCurve<Rationals>),
}

/// Orders needed for twist bounds at a good prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalOrders {
    pub order: u64,
    /// order for the quadratic twist by a non-residue
    pub twist: u64,
}

impl ModelCurve {
    pub fn genus(&self) -> u32 {
        match self {
            ModelCurve::Elliptic(_) => 1,
            ModelCurve::Hyper(_) => 2,
        }
    }

    /// `y^2 = F(x)` form: the 2-division cubic for genus 1.
    pub fn weierstrass_poly(&self) -> crate::poly::Poly<BigRational> {
        match self {
            ModelCurve::Elliptic(e) => e.two_division_cubic(),
            ModelCurve::Hyper(c) => c.f.clone(),
        }
    }

    fn hyper_mod_p(c: &HyperCurve<Rationals>, p: u64, f: u32) -> Result<HyperCurve<FieldDesc>, MwError> {
        c.reduce_mod_p(p, f).map_err(|e| MwError::BadPrime(p, e.to_string()))
    }

    pub fn structure_mod(&self, p: u64, f: u32) -> Result<AbGroupStructure, MwError> {
        check_odd_prime(p)?;
        match self {
            ModelCurve::Elliptic(e) => {
                Ok(e.reduce_mod_p(p, f).map_err(|e| MwError::BadPrime(p, e.to_string()))?.group_structure())
            }
            ModelCurve::Hyper(c) => {
                let r = Self::hyper_mod_p(c, p, f)?;
                let j = r.jacobian().map_err(|e| MwError::BadPrime(p, e.to_string()))?;
                j.group_structure().map_err(|e| MwError::Internal(e.to_string()))
            }
        }
    }

    pub fn local_orders(&self, p: u64) -> Result<LocalOrders, MwError> {
        check_odd_prime(p)?;
        match self {
            ModelCurve::Elliptic(e) => {
                let n = e.reduce_mod_p(p, 1).map_err(|e| MwError::BadPrime(p, e.to_string()))?.count_points();
                Ok(LocalOrders { order: n, twist: 2 * p + 2 - n })
            }
            ModelCurve::Hyper(c) => {
                let r = Self::hyper_mod_p(c, p, 1)?;
                let z = zeta_order(&r).map_err(|e| MwError::Internal(e.to_string()))?;
                Ok(LocalOrders { order: z.order, twist: z.twist_order })
            }
        }
    }

    /// `y^2 = F(x)` evaluated at `x`, over any field containing `Q`.
    pub fn rhs<F: Field>(&self, k: &F, x: &F::Elem) -> F::Elem {
        let f = self.weierstrass_poly();
        let r = PolyRing::new(k.clone());
        let lifted = r.from_coeffs(f.coeffs().iter().map(|c| k.from_rational(c).unwrap()).collect());
        r.eval(&lifted, x)
    }
}

pub fn check_odd_prime(p: u64) -> Result<(), MwError> {
    if p == 2 {
        return Err(MwError::BadPrime(p, "even characteristic is not supported".into()));
    }
    if !is_prime(p) {
        return Err(MwError::BadPrime(p, "not prime".into()));
    }
    Ok(())
}

/// Per-model caches of finite-field data.
#[derive(Debug, Default)]
pub struct LocalCache {
    structures: HashMap<(u64, u32), AbGroupStructure>,
    orders: HashMap<u64, Option<LocalOrders>>,
}

impl LocalCache {
    pub fn structure(&mut self, c: &ModelCurve, p: u64, f: u32) -> Result<AbGroupStructure, MwError> {
        if let Some(s) = self.structures.get(&(p, f)) {
            return Ok(s.clone());
        }
        let s = c.structure_mod(p, f)?;
        self.structures.insert((p, f), s.clone());
        Ok(s)
    }

    /// `None` at primes of bad reduction.
    pub fn orders(&mut self, c: &ModelCurve, p: u64) -> Result<Option<LocalOrders>, MwError> {
        if let Some(o) = self.orders.get(&p) {
            return Ok(*o);
        }
        let o = match c.local_orders(p) {
            Ok(o) => Some(o),
            Err(MwError::BadPrime(..)) => None,
            Err(e) => return Err(e),
        };
        self.orders.insert(p, o);
        Ok(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_models_parse() {
        let ms = parse_models(BUILTIN).unwrap();
        assert_eq!(ms.len(), 11);
        let x16 = ms.iter().find(|m| m.label == "X1(16)").unwrap();
        let k = MultiQuadField::new(&[-1, 3]).unwrap();
        assert_eq!(x16.table_value(&k), AbGroupStructure::new(&[2, 2, 10]).ok());
    }

    #[test]
    fn twist_orders_sum() {
        let m = parse_models(BUILTIN).unwrap().into_iter().find(|m| m.label == "X1(11)").unwrap();
        let o = m.curve().unwrap().local_orders(7).unwrap();
        assert_eq!(o.order + o.twist, 16);
    }
}
