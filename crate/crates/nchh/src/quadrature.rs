//! Composite Newton-Cotes rules and a brute-force reference oracle.
//!
//! Weighted node sums are accumulated left to right with compensated
//! summation; every rule evaluates the integrand exactly `n + 1` times.

use thiserror::Error;

use crate::expr::EvalError;
use crate::function::FunctionSpec;
use crate::interval::{Interval, Partition, PartitionError};
use crate::numeric::CompensatedSum;

/// Refinement start and cap for [`reference_integral`].
const ORACLE_START_N: u32 = 64;
const ORACLE_CAP_N: u32 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("{rule} requires {requirement}, got n={n}")]
    Parity {
        rule: &'static str,
        n: u32,
        requirement: &'static str,
    },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("reference integral did not converge below {target_tol} by n={cap}: last estimates {previous} and {last}")]
    NoConvergence {
        target_tol: f64,
        cap: u32,
        previous: f64,
        last: f64,
    },
    #[error("reference integral requires a positive tolerance, got {0}")]
    InvalidTolerance(f64),
}

/// The three composite rules. Each carries a hard parity precondition on
/// the number of sub-intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Trapezoid,
    Simpson,
    Simpson38,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Trapezoid => "trapezoid",
            Rule::Simpson => "simpson",
            Rule::Simpson38 => "simpson38",
        }
    }

    /// Whether `n` satisfies this rule's parity constraint.
    pub fn admits(self, n: u32) -> bool {
        match self {
            Rule::Trapezoid => n >= 1,
            Rule::Simpson => n >= 2 && n.is_multiple_of(2),
            Rule::Simpson38 => n >= 3 && n.is_multiple_of(3),
        }
    }

    pub fn check_n(self, n: u32) -> Result<(), QuadratureError> {
        if self.admits(n) {
            return Ok(());
        }
        let requirement = match self {
            Rule::Trapezoid => "n >= 1",
            Rule::Simpson => "an even n >= 2",
            Rule::Simpson38 => "a positive multiple of 3",
        };
        Err(QuadratureError::Parity {
            rule: self.name(),
            n,
            requirement,
        })
    }

    pub fn apply(
        self,
        f: &FunctionSpec,
        interval: &Interval,
        n: u32,
    ) -> Result<QuadratureResult, QuadratureError> {
        match self {
            Rule::Trapezoid => trapezoid(f, interval, n),
            Rule::Simpson => simpson(f, interval, n),
            Rule::Simpson38 => simpson38(f, interval, n),
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A rule applied to a function: the integral approximation and the
/// numerical integral mean. `value` is computed as `mean * (b - a)`, so the
/// two fields are consistent bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub rule: Rule,
    pub n: u32,
    pub value: f64,
    pub mean: f64,
}

fn node_values(
    f: &FunctionSpec,
    interval: &Interval,
    n: u32,
) -> Result<Vec<f64>, QuadratureError> {
    let partition = Partition::new(*interval, n)?;
    partition
        .nodes()
        .iter()
        .map(|&x| f.evaluate(x).map_err(QuadratureError::from))
        .collect()
}

fn assemble(rule: Rule, n: u32, interval: &Interval, mean: f64) -> QuadratureResult {
    QuadratureResult {
        rule,
        n,
        mean,
        value: mean * interval.length(),
    }
}

/// Composite trapezoid rule, any `n >= 1`:
/// `((b-a)/(2n)) [f(x_0) + 2 Σ f(x_i) + f(x_n)]`.
pub fn trapezoid(
    f: &FunctionSpec,
    interval: &Interval,
    n: u32,
) -> Result<QuadratureResult, QuadratureError> {
    Rule::Trapezoid.check_n(n)?;
    let y = node_values(f, interval, n)?;
    let mut s = CompensatedSum::new();
    for (i, &yi) in y.iter().enumerate() {
        let w = if i == 0 || i == n as usize { 1.0 } else { 2.0 };
        s.add(w * yi);
    }
    Ok(assemble(Rule::Trapezoid, n, interval, s.value() / (2.0 * f64::from(n))))
}

/// Composite Simpson rule, even `n`:
/// `((b-a)/(3n)) [f(x_0) + 2 Σ f(x_{2i}) + 4 Σ f(x_{2i-1}) + f(x_n)]`.
pub fn simpson(
    f: &FunctionSpec,
    interval: &Interval,
    n: u32,
) -> Result<QuadratureResult, QuadratureError> {
    Rule::Simpson.check_n(n)?;
    let y = node_values(f, interval, n)?;
    let mut s = CompensatedSum::new();
    for (i, &yi) in y.iter().enumerate() {
        let w = if i == 0 || i == n as usize {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s.add(w * yi);
    }
    Ok(assemble(Rule::Simpson, n, interval, s.value() / (3.0 * f64::from(n))))
}

/// Composite Simpson 3/8 rule, `n` a multiple of 3:
/// `(3(b-a)/(8n)) Σ [f(x_{3i-3}) + 3 f(x_{3i-2}) + 3 f(x_{3i-1}) + f(x_{3i})]`.
/// Interior block boundaries are shared between adjacent blocks, so they are
/// evaluated once with weight 2.
pub fn simpson38(
    f: &FunctionSpec,
    interval: &Interval,
    n: u32,
) -> Result<QuadratureResult, QuadratureError> {
    Rule::Simpson38.check_n(n)?;
    let y = node_values(f, interval, n)?;
    let mut s = CompensatedSum::new();
    for (i, &yi) in y.iter().enumerate() {
        let w = if i == 0 || i == n as usize {
            1.0
        } else if i % 3 == 0 {
            2.0
        } else {
            3.0
        };
        s.add(w * yi);
    }
    Ok(assemble(
        Rule::Simpson38,
        n,
        interval,
        3.0 * s.value() / (8.0 * f64::from(n)),
    ))
}

/// Brute-force oracle: composite trapezoid values at n, 2n, 4n, ... until
/// successive estimates differ by less than `target_tol`, returning the
/// Richardson-extrapolated value `(4 T_{2n} - T_n) / 3`.
pub fn reference_integral(
    f: &FunctionSpec,
    interval: &Interval,
    target_tol: f64,
) -> Result<f64, QuadratureError> {
    if !target_tol.is_finite() || target_tol <= 0.0 {
        return Err(QuadratureError::InvalidTolerance(target_tol));
    }
    let len = interval.length();
    let mut n = ORACLE_START_N;
    let mut t_prev = trapezoid(f, interval, n)?.value;
    while n < ORACLE_CAP_N {
        let n2 = n * 2;
        // T_{2n} reuses T_n and adds the midpoints of the current sub-intervals.
        let mut mids = CompensatedSum::new();
        for i in 1..=n {
            let x = interval.a() + f64::from(2 * i - 1) * len / f64::from(n2);
            mids.add(f.evaluate(x)?);
        }
        let t_next = 0.5 * t_prev + (len / f64::from(n2)) * mids.value();
        if (t_next - t_prev).abs() < target_tol {
            return Ok((4.0 * t_next - t_prev) / 3.0);
        }
        n = n2;
        t_prev = t_next;
    }
    Err(QuadratureError::NoConvergence {
        target_tol,
        cap: ORACLE_CAP_N,
        previous: t_prev,
        last: t_prev,
    })
}
