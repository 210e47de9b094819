//! Error-function (Φ) catalog: nonnegative functions on `[0, b-a]` that
//! quantify the allowed violation of monotonicity or convexity as a
//! function of point distance.
//!
//! Textual forms: `const:<eps>`, `pow:<c>,<p>`, `affine:<c>,<d0>` and
//! `expr:<expression in d>`. Catalog kinds are validated analytically at
//! parse time; expression kinds are validated for nonnegativity on a
//! 1024-point grid when bound to an interval.

use thiserror::Error;

use crate::expr::{self, EvalError, Expr, ParseError};
use crate::interval::Interval;

const EXPR_VALIDATION_GRID: usize = 1024;

/// Default pair grid for empirical superadditivity checks.
pub const DEFAULT_SUPERADDITIVITY_GRID: usize = 128;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhiError {
    #[error("phi argument {d} lies outside the domain [0, {len}]")]
    Domain { d: f64, len: f64 },
    #[error("phi is negative at d={d}: value {value}")]
    Negative { d: f64, value: f64 },
    #[error("superadditivity grid must have at least 2 points, got {got}")]
    Grid { got: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq)]
enum PhiKind {
    Constant { eps: f64 },
    Power { coeff: f64, exponent: f64 },
    Affine { slope: f64, offset: f64 },
    Expr(Expr),
}

/// A parsed but not yet interval-bound error-function specification.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    kind: PhiKind,
    label: String,
}

fn parse_param(text: &str, segment: &str, offset: usize) -> Result<f64, ParseError> {
    let trimmed = segment.trim();
    let v: f64 = trimmed.parse().map_err(|_| ParseError {
        position: offset.min(text.len().saturating_sub(1)),
        message: format!("invalid numeric parameter '{trimmed}'"),
    })?;
    if !v.is_finite() {
        return Err(ParseError {
            position: offset.min(text.len().saturating_sub(1)),
            message: format!("parameter '{trimmed}' out of range"),
        });
    }
    Ok(v)
}

fn two_params(text: &str, rest: &str, offset: usize) -> Result<(f64, f64), ParseError> {
    let comma = rest.find(',').ok_or_else(|| ParseError {
        position: offset,
        message: "expected two comma-separated parameters".to_string(),
    })?;
    let first = parse_param(text, &rest[..comma], offset)?;
    let second = parse_param(text, &rest[comma + 1..], offset + comma + 1)?;
    Ok((first, second))
}

impl PhiSpec {
    /// Parses one of `const:<eps>`, `pow:<c>,<p>`, `affine:<c>,<d0>`,
    /// `expr:<expression in d>`. Specifications whose parameters would make
    /// Φ negative somewhere on its domain are rejected here.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let colon = text.find(':').ok_or_else(|| ParseError {
            position: 0,
            message: "expected 'const:', 'pow:', 'affine:' or 'expr:'".to_string(),
        })?;
        let (head, rest) = (&text[..colon], &text[colon + 1..]);
        let body_at = colon + 1;
        let kind = match head {
            "const" => {
                let eps = parse_param(text, rest, body_at)?;
                if eps < 0.0 {
                    return Err(ParseError {
                        position: body_at,
                        message: format!("constant error function must be nonnegative, got {eps}"),
                    });
                }
                PhiKind::Constant { eps }
            }
            "pow" => {
                let (coeff, exponent) = two_params(text, rest, body_at)?;
                if coeff < 0.0 {
                    return Err(ParseError {
                        position: body_at,
                        message: format!(
                            "power coefficient must be nonnegative, got {coeff} (phi would be negative)"
                        ),
                    });
                }
                if exponent <= 0.0 {
                    return Err(ParseError {
                        position: body_at,
                        message: format!("power exponent must be positive, got {exponent}"),
                    });
                }
                PhiKind::Power { coeff, exponent }
            }
            "affine" => {
                let (slope, offset) = two_params(text, rest, body_at)?;
                if slope < 0.0 || offset < 0.0 {
                    return Err(ParseError {
                        position: body_at,
                        message: "affine error function requires nonnegative coefficients"
                            .to_string(),
                    });
                }
                PhiKind::Affine { slope, offset }
            }
            "expr" => {
                let ast = expr::parse(rest, "d").map_err(|e| ParseError {
                    position: body_at + e.position,
                    message: e.message,
                })?;
                PhiKind::Expr(ast)
            }
            other => {
                return Err(ParseError {
                    position: 0,
                    message: format!(
                        "unknown error-function kind '{other}' (expected const, pow, affine or expr)"
                    ),
                })
            }
        };
        Ok(Self {
            kind,
            label: text.to_string(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Binds the specification to the interval it will be used with,
    /// fixing the domain `[0, b-a]`. Expression kinds are checked for
    /// nonnegativity on a validation grid here.
    pub fn bind(&self, interval: &Interval) -> Result<ErrorFunction, PhiError> {
        let len = interval.length();
        if let PhiKind::Expr(ast) = &self.kind {
            for j in 0..EXPR_VALIDATION_GRID {
                let mut d = (j as f64) * len / ((EXPR_VALIDATION_GRID - 1) as f64);
                if j == EXPR_VALIDATION_GRID - 1 {
                    d = len;
                }
                let v = ast.eval(d, 0)?;
                if v < 0.0 {
                    return Err(PhiError::Negative { d, value: v });
                }
            }
        }
        Ok(ErrorFunction {
            kind: self.kind.clone(),
            label: self.label.clone(),
            domain_length: len,
        })
    }
}

/// An error function bound to its domain `[0, ℓ]` with `ℓ = b - a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorFunction {
    kind: PhiKind,
    label: String,
    domain_length: f64,
}

impl ErrorFunction {
    /// Parses and binds in one step.
    pub fn parse(text: &str, interval: &Interval) -> Result<Self, PhiParseOrBindError> {
        let spec = PhiSpec::parse(text)?;
        Ok(spec.bind(interval)?)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    /// Evaluates Φ(d). Arguments outside `[0, ℓ]` are rejected; a negative
    /// value (possible only for pathological expression kinds off the
    /// validation grid) is reported with its witness.
    pub fn eval(&self, d: f64) -> Result<f64, PhiError> {
        if !(0.0..=self.domain_length).contains(&d) {
            return Err(PhiError::Domain {
                d,
                len: self.domain_length,
            });
        }
        let v = match &self.kind {
            PhiKind::Constant { eps } => *eps,
            PhiKind::Power { coeff, exponent } => coeff * d.powf(*exponent),
            PhiKind::Affine { slope, offset } => slope * d + offset,
            PhiKind::Expr(ast) => ast.eval(d, 0)?,
        };
        if v < 0.0 {
            return Err(PhiError::Negative { d, value: v });
        }
        Ok(v)
    }
}

/// Superadditivity verdict. `Unknown` means the pair grid found no
/// violation but no analytic proof exists ("empirically superadditive");
/// it can only occur for expression kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperadditivityReport {
    pub verdict: Verdict,
    /// A violating pair `(x, y)` with `Φ(x)+Φ(y) > Φ(x+y)`, when `No`.
    pub witness: Option<(f64, f64)>,
}

/// Checks `Φ(x) + Φ(y) <= Φ(x+y)` for all grid pairs with `x+y <= ℓ`.
/// Catalog kinds are decided analytically: powers with `p >= 1`, zero
/// constants and zero-offset affine maps are superadditive; positive
/// constants and positive-offset affine maps are not.
pub fn is_superadditive(
    phi: &ErrorFunction,
    grid_size: usize,
) -> Result<SuperadditivityReport, PhiError> {
    if grid_size < 2 {
        return Err(PhiError::Grid { got: grid_size });
    }
    let len = phi.domain_length;
    let quarter = len / 4.0;
    match &phi.kind {
        PhiKind::Constant { eps } => {
            return Ok(if *eps > 0.0 {
                SuperadditivityReport {
                    verdict: Verdict::No,
                    witness: Some((quarter, quarter)),
                }
            } else {
                SuperadditivityReport {
                    verdict: Verdict::Yes,
                    witness: None,
                }
            });
        }
        PhiKind::Power { coeff, exponent } => {
            if *coeff == 0.0 || *exponent >= 1.0 {
                return Ok(SuperadditivityReport {
                    verdict: Verdict::Yes,
                    witness: None,
                });
            }
            // p < 1 with c > 0 falls through to the grid search below.
        }
        PhiKind::Affine { offset, .. } => {
            return Ok(if *offset > 0.0 {
                SuperadditivityReport {
                    verdict: Verdict::No,
                    witness: Some((quarter, quarter)),
                }
            } else {
                SuperadditivityReport {
                    verdict: Verdict::Yes,
                    witness: None,
                }
            });
        }
        PhiKind::Expr(_) => {}
    }

    let step = len / ((grid_size - 1) as f64);
    for i in 0..grid_size {
        let x = (i as f64) * step;
        for j in i..grid_size {
            let y = (j as f64) * step;
            let sum = x + y;
            if sum > len {
                break;
            }
            let lhs = phi.eval(x)? + phi.eval(y)?;
            let rhs = phi.eval(sum)?;
            let tol = 1e-12 * (1.0 + rhs.abs());
            if lhs > rhs + tol {
                return Ok(SuperadditivityReport {
                    verdict: Verdict::No,
                    witness: Some((x, y)),
                });
            }
        }
    }
    match &phi.kind {
        PhiKind::Expr(_) => Ok(SuperadditivityReport {
            verdict: Verdict::Unknown,
            witness: None,
        }),
        // Power with p < 1 and c > 0: not superadditive in real arithmetic
        // even if rounding hides the violation on this grid.
        _ => Ok(SuperadditivityReport {
            verdict: Verdict::No,
            witness: Some((quarter, quarter)),
        }),
    }
}

/// Telescoping consequence of superadditivity: `n·Φ((b-a)/n) <= Φ(b-a)`,
/// up to rounding slack.
pub fn telescoped_bound_check(
    phi: &ErrorFunction,
    interval: &Interval,
    n: u32,
) -> Result<bool, PhiError> {
    let len = interval.length();
    let lhs = f64::from(n) * phi.eval(len / f64::from(n))?;
    let rhs = phi.eval(len)?;
    Ok(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()))
}

/// `n² · Φ((b-a)/n)`, the quantity whose vanishing as `n → ∞` recovers the
/// classical midpoint/endpoint inequality from the Φ-convex bounds.
pub fn n_squared_phi(phi: &ErrorFunction, interval: &Interval, n: u32) -> Result<f64, PhiError> {
    let len = interval.length();
    let nf = f64::from(n);
    Ok(nf * nf * phi.eval(len / nf)?)
}

/// The sequence `(n, n²·Φ((b-a)/n))` for `n = 1..=n_max`.
pub fn limit_sequence(
    phi: &ErrorFunction,
    interval: &Interval,
    n_max: u32,
) -> Result<Vec<(u32, f64)>, PhiError> {
    (1..=n_max)
        .map(|n| Ok((n, n_squared_phi(phi, interval, n)?)))
        .collect()
}

/// Error from [`ErrorFunction::parse`]: either the text failed to parse or
/// the bound specification failed validation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhiParseOrBindError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}
