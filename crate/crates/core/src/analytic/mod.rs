//! Certified real and complex arithmetic, period lattices, the modular
//! discriminant and the Faltings height.

mod ball;
mod complex;
mod faltings;
mod mag;
mod modular;
mod period;
mod tau;

pub use ball::ErrReal;
pub use complex::Complex;
pub use faltings::{faltings_height, faltings_height_at, injectivity_diameter, matrix_lemma_check, FaltingsReport};
pub use mag::Mag;
pub use modular::{log_modular_discriminant, log_modular_discriminant_bits};
pub(crate) use period::real_roots;
pub use period::{agm, bits_for_tol, period_lattice, periods, PeriodLattice};
pub use tau::{reduce_tau, tau_point, TauPoint, Unimodular};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticError {
    #[error("interval contains zero")]
    IntervalContainsZero,
    #[error("precision exhausted at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("cannot certify reduction into the fundamental domain")]
    BoundaryAmbiguity,
}
