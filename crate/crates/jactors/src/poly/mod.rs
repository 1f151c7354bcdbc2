//! Univariate polynomials over the coefficient domains of the crate,
//! division polynomials, and extraction of rational factors of degree at most 2.

mod divpoly;
mod factor;
mod field;
mod ring;

pub use divpoly::{division_polynomial, primitive_kernel_poly, DivisionPoly, LongWeierstrass};
pub use factor::{quadratic_factor_extraction, splitting_quadratic_field, to_rational_poly, FactorError, IntPoly};
pub use field::{
    int_sqrt_exact, rational_sqrt, rational_squarefree_part, squarefree_part, tonelli_shanks, Field,
    FiniteField, QuadExt, Rationals,
};
pub use ring::{Poly, PolyError, PolyRing};
