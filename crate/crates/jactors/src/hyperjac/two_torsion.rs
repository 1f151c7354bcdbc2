//! Galois-fixed 2-torsion from the Weierstrass points.
//!
//! For `y^2 = F(x)` of genus `g` the 2-torsion is the group of even subsets of
//! the `2g + 2` Weierstrass points modulo complement. A class is certainly
//! `K`-rational when it has a `K`-stable representative, i.e. a union of
//! `Gal(K̄/K)`-orbits. Counting those gives a lower bound; it is the exact
//! answer when the orbits are known exactly and one of them has odd size.

use num_rational::BigRational;
use serde::Serialize;

use super::HjError;
use crate::group::AbGroupStructure;
use crate::poly::{quadratic_factor_extraction, splitting_quadratic_field, to_rational_poly, Poly, PolyRing, Rationals};
use crate::qfield::MultiQuadField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTorsion {
    /// sizes of the blocks used as orbits (the point at infinity included)
    pub blocks: Vec<usize>,
    pub structure: AbGroupStructure,
    /// the lower bound equals `J(K)[2]`
    pub exact: bool,
    /// compositum of the quadratic fields cut out by the quadratic factors,
    /// when `F` splits into factors of degree at most 2
    pub splitting_field: Option<MultiQuadField>,
}

impl TwoTorsion {
    pub fn order(&self) -> u64 {
        self.structure.order()
    }

    pub fn rank(&self) -> usize {
        self.structure.rank()
    }
}

/// Lower bound for `J(K)[2]` (or `E(K)[2]` when `deg F ∈ {3, 4}`).
pub fn two_torsion_galois(f: &Poly<BigRational>, k: &MultiQuadField) -> Result<TwoTorsion, HjError> {
    let r = PolyRing::new(Rationals);
    let deg = f.degree().unwrap_or(0);
    if !(3..=6).contains(&deg) {
        return Err(HjError::BadDegree(deg));
    }
    if r.gcd(f, &r.derivative(f)).degree() != Some(0) {
        return Err(HjError::Singular);
    }
    let factors = quadratic_factor_extraction(f).map_err(|e| HjError::Residue(e.to_string()))?;
    let mut blocks = vec![];
    let mut exact_blocks = true;
    let mut discs = vec![];
    let mut rest = f.clone();
    for fac in &factors {
        let p = to_rational_poly(fac);
        rest = r.exact_div(&rest, &p).expect("factor divides F");
        if fac.len() == 2 {
            blocks.push(1);
            continue;
        }
        let d = splitting_quadratic_field(&p).map_err(|e| HjError::Residue(e.to_string()))?;
        discs.push(d);
        if k.contains(d) {
            blocks.extend([1, 1]);
        } else {
            blocks.push(2);
        }
    }
    let cofactor = rest.degree().unwrap();
    if cofactor > 0 {
        // irreducible of odd degree stays irreducible over a 2-power extension
        exact_blocks &= cofactor == 3 || cofactor == 5;
        blocks.push(cofactor);
    }
    if deg % 2 == 1 {
        blocks.push(1);
    }
    let total: usize = blocks.iter().sum();
    let genus_dim = total - 2;
    // even unions of blocks, modulo complement
    let odd = blocks.iter().filter(|&&b| b % 2 == 1).count();
    let n = blocks.len();
    let even_unions = if odd == 0 { 1u64 << n } else { 1u64 << (n - 1) };
    let order = even_unions / 2;
    let rank = order.trailing_zeros() as usize;
    debug_assert!(rank <= genus_dim);
    let structure = AbGroupStructure::new(&vec![2; rank]).unwrap();
    let splitting_field = if cofactor == 0 {
        Some(MultiQuadField::new(&discs.iter().copied().filter(|&d| d != 1).collect::<Vec<_>>()).unwrap())
    } else {
        None
    };
    Ok(TwoTorsion { blocks, structure, exact: exact_blocks && odd > 0, splitting_field })
}

/// Convenience for integer coefficient lists, constant first.
pub fn two_torsion_of_ints(c: &[i64], k: &MultiQuadField) -> Result<TwoTorsion, HjError> {
    two_torsion_galois(&PolyRing::new(Rationals).from_ints(c), k)
}
