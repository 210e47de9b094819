//! Newton-Cotes integral means with certified envelopes for approximately
//! monotone and convex functions.
//!
//! The crate is organised around a small pipeline:
//!
//! * [`interval`] — closed intervals and equidistant partitions.
//! * [`expr`] — the textual expression language for functions of `x` and
//!   error functions of `d`.
//! * [`function`] — evaluable function specifications (parsed or native).
//! * [`errfun`] — the error-function catalog (`const:`, `pow:`, `affine:`,
//!   `expr:`) with nonnegativity and superadditivity checks.
//! * [`quadrature`] — composite trapezoid, Simpson and Simpson 3/8 rules plus
//!   a Richardson-extrapolated reference oracle.
//! * [`classcheck`] — grid-based verification of membership in the
//!   approximate monotonicity/convexity classes.
//! * [`bounds`] — the envelope formulas for each (class, rule) pair,
//!   certificate assembly and the exact coefficient-identity suite.
//! * [`report`] — CSV/JSON serialization of certificates and sweep tables.
//!
//! Everything is immutable after construction and safe to share across
//! threads; evaluation is deterministic (noise terms are hash-based).

pub mod bounds;
pub mod classcheck;
pub mod errfun;
pub mod expr;
pub mod function;
pub mod interval;
pub mod numeric;
pub mod quadrature;
pub mod report;

pub use bounds::{
    certify, certify_n_free, identity_suite, BoundCertificate, BoundsError, CheckOptions,
    Envelope, Hypothesis,
};
pub use classcheck::{ClassReport, ClasscheckError, FunctionClass, Witness};
pub use errfun::{ErrorFunction, PhiError, PhiSpec, SuperadditivityReport, Verdict};
pub use expr::{EvalError, Expr, ParseError};
pub use function::FunctionSpec;
pub use interval::{Interval, IntervalError, Partition, PartitionError};
pub use quadrature::{QuadratureError, QuadratureResult, Rule};
