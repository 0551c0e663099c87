//! Exact arithmetic kernel for intersection-number and volume computations.
//!
//! Submodules:
//! * [`rational`]: arbitrary-precision rationals plus factorial-style helpers.
//! * [`pi_value`]: elements of the ring Q[pi^2] with a canonical text form.
//! * [`gpoly`]: dense polynomials, rational functions, and inverse-power
//!   series in a single variable `g`.
//! * [`bernoulli`]: Bernoulli numbers, even zeta values, and the associated
//!   hyperbolic coefficient sequence.
//! * [`interval`]: certified decimal evaluation and sign determination via
//!   interval arithmetic around pi.

pub mod bernoulli;
pub mod gpoly;
pub mod interval;
pub mod pi_value;
pub mod rational;

pub use gpoly::{expand_inverse_g, GPoly, GRationalFn, InverseGSeries};
pub use interval::{pi_eval, pi_eval_ratio, pi_value_cmp, pi_value_sign, PrecisionError};
pub use pi_value::PiValue;
pub use rational::Rational;
