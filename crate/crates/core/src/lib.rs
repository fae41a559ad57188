//! Faltings heights, conductor norms, canonical heights and regulators of
//! elliptic curves over the rationals, with certified error radii.

pub mod analytic;
pub mod arith;
pub mod bounds;
pub mod curve;
pub mod harness;
pub mod heights;
pub mod lattice;
pub mod verdict;
