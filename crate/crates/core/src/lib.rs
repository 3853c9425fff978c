//! Exact calculus for non-increasing rearrangements, Lorentz norms and
//! Calderón-type operators on the half line.
//!
//! The crate is organized around two kinds of arithmetic:
//!
//! * **symbolic** — space parameters (`p`, `q`, `r`, …) are exact rationals
//!   extended with `+inf` ([`Exponent`]), so boundedness verdicts and derived
//!   exponent identities are decided without rounding;
//! * **numeric** — functions are nonnegative compactly supported step
//!   functions ([`StepFunction`]) over any floating scalar, on which
//!   power-weight integrals and weighted suprema evaluate in closed form.
//!
//! On top of these sit the rearrangement toolkit ([`rearrange`]), Lorentz and
//! downgraded functionals ([`lorentz`]), the operators `R`, `S`, the recovery
//! operator and `Y` ([`operators`]), K-functional closed forms with an
//! independent decomposition oracle ([`kfunc`]), deterministic test-function
//! families ([`families`]) and the self-test battery ([`selftest`]).
//!
//! ```
//! use calderon::{derive, Exponent, StepFn};
//! use calderon::operators::{default_output_grid, op_s};
//!
//! let ex = |s: &str| s.parse::<Exponent>().unwrap();
//! let params = derive(ex("2"), ex("2"), ex("2"), ex("2"), ex("4")).unwrap();
//! let f = StepFn::indicator(0.0, 1.0).unwrap();
//! let grid = default_output_grid(&f, &params, 32).unwrap();
//! let s = op_s(&f, &params, &grid);
//! // the tail integral saturates to the (q, 1) norm at the origin
//! assert!((s.eval(0.0) - 4.0).abs() < 1e-12);
//! ```

// negated comparisons are deliberate: they reject NaN where the plain
// comparison would accept it
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exponent;
pub mod families;
pub mod kfunc;
pub mod lorentz;
pub mod operators;
pub mod params;
pub mod rearrange;
pub mod scalar;
pub mod selftest;
pub mod stepfn;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use params::{derive, LorentzSpec, ParamSet, Verdict};
pub use scalar::Scalar;
pub use stepfn::StepFunction;

/// Default sampling density, in grid points per decade.
pub const DEFAULT_PPD: u32 = 32;

/// Concrete aliases for the common double-precision instantiation.
pub type StepFn = stepfn::StepFunction<f64>;
pub type MaxFn = rearrange::MaximalFunction<f64>;
pub type OpOutput = operators::OperatorOutput<f64>;
pub type Profile = lorentz::DowngradeProfile<f64>;
