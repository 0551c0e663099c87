//! Batch verification of the identities, inequalities, and large-genus
//! trends satisfied by the exact bracket, volume, and ratio computations.
//!
//! Each suite checks one family of statements over an exhaustive range of
//! small surface types and reports per-case verdicts with exact margins:
//!
//! * [`Verifier::suite_monotonicity`]: lowering any positive index strictly
//!   increases the bracket.
//! * [`Verifier::suite_domination`]: no bracket exceeds the volume of its
//!   surface type.
//! * [`Verifier::suite_tau1_bound`]: the volume is bounded by the single
//!   tau_1 bracket scaled by `pi^2/6`, with exactly two equality cases.
//! * [`Verifier::suite_sandwich`]: adding a boundary multiplies the volume
//!   by a factor strictly between `12(2g-2+n)` and
//!   `(20 pi^2/(10-pi^2))(2g-2+n)`.
//! * [`Verifier::suite_identities`]: dilaton, string, and genus-lowering
//!   bracket identities hold with exactly zero residual.
//! * [`Verifier::suite_kdv`]: the KdV relation for a tau_0 insertion holds
//!   at every top-dimensional correlator in range.
//! * [`Verifier::suite_a_sequence`]: the hyperbolic coefficient sequence
//!   increases toward 1 with geometrically shrinking gaps.
//! * [`Verifier::suite_ratio_trends`]: tabulated large-genus ratios move
//!   toward their limits, with one shrinkage assertion per quantity.
//!
//! Strict inequalities pass only with a certified nonzero margin; reports
//! render to byte-stable text and JSON independent of worker-thread count.

mod report;
mod suites;

pub use report::{CheckCase, CheckReport, Verdict};
pub use suites::{
    with_thread_pool, Verifier, DEFAULT_IDENTITY_COMPLEXITY, DEFAULT_INEQUALITY_COMPLEXITY,
    DEFAULT_SEQUENCE_LENGTH, DEFAULT_TREND_BOUNDARIES, DEFAULT_TREND_GENUS,
};
