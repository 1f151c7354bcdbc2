//! Torsion of modular Jacobians over multi-quadratic fields.

pub mod classify;
pub mod ellcurve;
pub mod ff;
pub mod group;
pub mod hyperjac;
pub mod mwtors;
pub mod poly;
pub mod qfield;
pub mod suite;

/// Guide chapters, compiled as doc-tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/jacobians.md")]
    pub mod jacobians {}
    #[doc = include_str!("../../../book/src/torsion.md")]
    pub mod torsion {}
    #[doc = include_str!("../../../book/src/classify.md")]
    pub mod classify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
