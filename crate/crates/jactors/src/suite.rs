//! The reproducible checks run by `jactors verify`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::classify::{classify, exceptional_curves, shipped_exceptional, verify_exceptional, RankTable, Target};
use crate::group::AbGroupStructure;
use crate::hyperjac::two_torsion_galois;
use crate::mwtors::{builtin_models, order_over, CurveModel, LocalCache, ModelCurve, MwError, TorsionEngine};
use crate::qfield::MultiQuadField;

/// Quadratic generators whose small subsets make up the tower sweep.
pub const TOWER_GENERATORS: [i64; 7] = [-1, 2, -2, 3, -3, 5, -7];

/// Known `J(F_{p^f})`, written as cyclic factors.
pub const FINITE_FIELD_STRUCTURES: &[(&str, u64, u32, &[u64])] = &[
    ("X1(11)", 3, 2, &[15]),
    ("X1(11)", 5, 2, &[35]),
    ("X1(13)", 3, 2, &[3, 19]),
    ("X1(13)", 5, 2, &[19, 19]),
    ("X1(14)", 3, 2, &[2, 6]),
    ("X1(14)", 13, 2, &[2, 90]),
    ("X1(15)", 7, 2, &[8, 8]),
    ("X1(15)", 13, 2, &[2, 96]),
    ("X1(16)", 3, 2, &[2, 2, 2, 10]),
    ("X1(16)", 5, 2, &[2, 2, 4, 40]),
    ("X1(18)", 7, 2, &[3, 651]),
    ("X1(18)", 11, 2, &[12, 1092]),
    ("X1(2,10)", 3, 2, &[2, 6]),
    ("X1(2,10)", 7, 2, &[2, 30]),
    ("X1(2,12)", 5, 2, &[2, 16]),
    ("X1(2,12)", 7, 2, &[8, 8]),
    ("X1(3,9)", 5, 2, &[6, 6]),
    ("X1(3,9)", 7, 2, &[3, 21]),
    ("X1(4,8)", 3, 2, &[4, 4]),
    ("X1(4,8)", 5, 2, &[4, 8]),
    ("X1(6,6)", 5, 2, &[6, 6]),
    ("X1(6,6)", 7, 2, &[4, 12]),
];

/// Torsion over the base field of each model.
pub const BASE_TORSION: &[(&str, &[u64])] = &[
    ("X1(11)", &[5]),
    ("X1(13)", &[19]),
    ("X1(14)", &[6]),
    ("X1(15)", &[4]),
    ("X1(16)", &[2, 10]),
    ("X1(18)", &[21]),
    ("X1(2,10)", &[6]),
    ("X1(2,12)", &[4]),
    ("X1(3,9)", &[3, 3]),
    ("X1(4,8)", &[2, 4]),
    ("X1(6,6)", &[2, 6]),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

impl Check {
    fn new(group: &str, name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check { group: group.into(), name: name.into(), ok: expected == actual, expected, actual }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn structure(ns: &[u64]) -> AbGroupStructure {
    AbGroupStructure::from_cyclic(ns).expect("positive orders")
}

fn show<T: ToString, E: ToString>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {}", e.to_string()),
    }
}

/// The base field of the model together with each subset of at most two of
/// [`TOWER_GENERATORS`], plus the field of every table row, without repeats.
pub fn tower_fields(model: &CurveModel) -> Result<Vec<MultiQuadField>, MwError> {
    let base = model.base()?;
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    let mut push = |k: MultiQuadField| {
        let key: Vec<i64> = k.span();
        if seen.insert(key) {
            out.push(k);
        }
    };
    push(base.clone());
    for (i, &a) in TOWER_GENERATORS.iter().enumerate() {
        push(base.adjoin(a));
        for &b in &TOWER_GENERATORS[i + 1..] {
            push(base.adjoin(a).adjoin(b));
        }
    }
    for row in model.table.iter().filter(|r| r.field != "*") {
        let k = MultiQuadField::parse(&row.field).map_err(|e| MwError::Data(e.to_string()))?;
        push(base.join(&k));
    }
    Ok(out)
}

/// `J(F_q)` against its order from the local zeta data.
pub fn zeta_cross_check(curve: &ModelCurve, p: u64, f: u32) -> Result<(AbGroupStructure, u64), MwError> {
    let s = curve.structure_mod(p, f)?;
    let n = order_over(curve, &mut LocalCache::default(), p, f)?
        .ok_or_else(|| MwError::BadPrime(p, "bad reduction".into()))?;
    Ok((s, n))
}

pub fn finite_field_checks(label: &str) -> Vec<Check> {
    let mut out = vec![];
    for &(l, p, f, ns) in FINITE_FIELD_STRUCTURES.iter().filter(|r| r.0.eq_ignore_ascii_case(label)) {
        let got = crate::mwtors::find_model(l).and_then(|m| m.curve()).and_then(|c| zeta_cross_check(&c, p, f));
        let name = format!("{} over F_{}^{}", l, p, f);
        match got {
            Ok((s, n)) => {
                out.push(Check::new("finite-field", name.clone(), structure(ns), &s));
                out.push(Check::new("finite-field", format!("{} zeta order", name), s.order(), n));
            }
            Err(e) => out.push(Check::new("finite-field", name, structure(ns), format!("error: {}", e))),
        }
    }
    out
}

/// Base torsion and the tower sweep, derive mode against the table.
pub fn torsion_checks(label: &str) -> Vec<Check> {
    let mut out = vec![];
    let mut engine = match TorsionEngine::for_label(label) {
        Ok(e) => e,
        Err(e) => return vec![Check::new("torsion", label, "a model", format!("error: {}", e))],
    };
    let model = engine.model.clone();
    if let Some((_, ns)) = BASE_TORSION.iter().find(|r| r.0 == model.label) {
        let base = model.base().expect("shipped base field");
        let got = engine.derive(&base).map(|r| if r.closed { r.lower.to_string() } else { format!("open {} .. {}", r.lower, r.upper) });
        out.push(Check::new("torsion", format!("{} over {}", model.label, base.literal()), structure(ns), show(got)));
    }
    let fields = match tower_fields(&model) {
        Ok(f) => f,
        Err(e) => return vec![Check::new("torsion", label, "tower fields", format!("error: {}", e))],
    };
    for k in fields {
        let name = format!("{} over {} (derive = table)", model.label, k.literal());
        let table = engine.table(&k).map(|r| r.lower.to_string());
        let got = engine.derive(&k).map(|r| if r.closed { r.lower.to_string() } else { format!("open {} .. {}", r.lower, r.upper) });
        out.push(Check::new("torsion", name, show(table), show(got)));
    }
    out
}

/// 2-torsion orders from the Weierstrass orbits and 8-kernel factorizations.
pub fn division_checks(label: &str) -> Vec<Check> {
    let mut out = vec![];
    let Ok(model) = crate::mwtors::find_model(label) else {
        return out;
    };
    let curve = model.curve().expect("shipped model");
    let f = curve.weierstrass_poly();
    let two: &[(&str, u64)] = match model.label.as_str() {
        "X1(16)" => &[("Q", 4), ("-1", 8), ("2", 8), ("-1,2", 16)],
        _ => &[],
    };
    for &(lit, n) in two {
        let k = MultiQuadField::parse(lit).unwrap();
        let got = two_torsion_galois(&f, &k).map(|t| if t.exact { t.order().to_string() } else { format!("at least {}", t.order()) });
        out.push(Check::new("two-torsion", format!("{} 2-part over {}", model.label, lit), n, show(got)));
    }
    if model.label == "X1(14)" {
        let got = two_torsion_galois(&f, &MultiQuadField::rationals())
            .map(|t| t.splitting_field.map(|k| k.literal()).unwrap_or_else(|| "not multi-quadratic".into()));
        out.push(Check::new("two-torsion", "X1(14) 2-torsion field", "-7", show(got)));
    }
    let eight: &[(&str, bool)] = match model.label.as_str() {
        "X1(15)" => &[("Q", false), ("5", true), ("-3", true), ("-15", false), ("2", false)],
        "X1(2,12)" => &[("Q", false), ("-1", true), ("3", true), ("-3", false)],
        _ => &[],
    };
    if !eight.is_empty() {
        let engine = TorsionEngine::for_label(&model.label).expect("shipped model");
        for &(lit, holds) in eight {
            let k = MultiQuadField::parse(lit).unwrap();
            let got = engine.eight_torsion_criterion(&k).map(|e| e.holds);
            out.push(Check::new("division", format!("{} point of order 8 over {}", model.label, lit), holds, show(got)));
        }
    }
    out
}

pub fn model_checks(label: &str) -> Vec<Check> {
    let mut out = finite_field_checks(label);
    out.extend(division_checks(label));
    out.extend(torsion_checks(label));
    out
}

pub fn exceptional_checks() -> Vec<Check> {
    let mut out = vec![];
    for rec in shipped_exceptional() {
        let got = verify_exceptional(&rec, rec.target).map(|r| {
            if r.ok {
                "verified".to_string()
            } else {
                r.failures.join("; ")
            }
        });
        out.push(Check::new("exceptional", format!("{} torsion Z/{}", rec.name, rec.target), "verified", show(got)));
    }
    out
}

/// Verdict summaries for the shipped rank data.
pub const CLASSIFY_GOLDENS: &[(&str, &str, &str)] = &[
    ("14", "-7", "exactly 2"),
    ("14", "Q", "none"),
    ("15", "-3,5", "exactly 2"),
    ("15", "5", "exactly 1"),
    ("15", "-15", "exactly 1"),
    ("15", "-3", "none"),
    ("16", "-1,2", "none"),
    ("18", "-3", "none"),
];

pub fn classify_checks() -> Vec<Check> {
    let table = RankTable::defaults();
    let mut out = vec![];
    for &(t, lit, want) in CLASSIFY_GOLDENS {
        let k = MultiQuadField::parse(lit).unwrap();
        let got = Target::parse(t).and_then(|t| classify(&t, &k, &table)).map(|v| v.summary);
        out.push(Check::new("classify", format!("Z/{} over {}", t, lit), want, show(got)));
    }
    let k = MultiQuadField::parse("-7").unwrap();
    let n = exceptional_curves(&Target::parse("14").unwrap(), &k).len();
    out.push(Check::new("classify", "curves with Z/14 over -7", 2, n));
    out
}

/// Runs everything, or one group: a model label, `exceptional` or `classify`.
pub fn run(only: Option<&str>) -> Result<SuiteReport, MwError> {
    let labels: Vec<String> = builtin_models()?.into_iter().map(|m| m.label).collect();
    let mut checks = vec![];
    match only {
        None => {
            for l in &labels {
                checks.extend(model_checks(l));
            }
            checks.extend(exceptional_checks());
            checks.extend(classify_checks());
        }
        Some(s) if s.eq_ignore_ascii_case("exceptional") => checks.extend(exceptional_checks()),
        Some(s) if s.eq_ignore_ascii_case("classify") => checks.extend(classify_checks()),
        Some(s) => {
            let m = crate::mwtors::find_model(s)?;
            checks.extend(model_checks(&m.label));
        }
    }
    let passed = checks.iter().filter(|c| c.ok).count();
    Ok(SuiteReport { passed, failed: checks.len() - passed, checks })
}
