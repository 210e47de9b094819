//! Envelope formulas for the numerical integral mean and certificate
//! assembly.
//!
//! For a Φ-monotone function all three rules share the envelope
//! `f(a) - (n/2)Φ((b-a)/n) <= mean <= f(b) + (n/2)Φ((b-a)/n)`; the Φ-Hölder
//! variant tightens the endpoints to max/min. Superadditive Φ admits the
//! n-free envelope with margin `Φ(b-a)/2`. The Φ-convex and Φ-affine
//! envelopes exist for the trapezoid rule only; their Simpson analogues are
//! not implemented because no closed form is available, and requesting them
//! is a hard error.
//!
//! Bound operations take the endpoint/midpoint values as scalars so they
//! stay pure arithmetic; `certify` wires them to quadrature and the class
//! checks.

use thiserror::Error;

use crate::classcheck::{
    self, ClasscheckError, FunctionClass, DEFAULT_GRID_POINTS, DEFAULT_T_SAMPLES,
};
use crate::errfun::{self, ErrorFunction, PhiError, Verdict, DEFAULT_SUPERADDITIVITY_GRID};
use crate::expr::EvalError;
use crate::function::FunctionSpec;
use crate::interval::Interval;
use crate::quadrature::{QuadratureError, Rule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Class(#[from] ClasscheckError),
    #[error("no {class} envelope is available for the {rule} rule: only the trapezoid form has a stated bound")]
    UnsupportedClassRule { class: FunctionClass, rule: Rule },
    #[error("n-free envelopes exist only for the monotone and holder classes, not {class}")]
    UnsupportedNFreeClass { class: FunctionClass },
    #[error("phi '{label}' is not superadditive (witness x={x}, y={y}); the n-free envelope does not apply")]
    NotSuperadditive { label: String, x: f64, y: f64 },
    #[error("phi '{label}' is only empirically superadditive; the n-free envelope requires an analytic guarantee")]
    SuperadditivityUnproven { label: String },
}

/// A certified `[lower, upper]` window for the numerical integral mean.
/// `lower > upper` is a meaningful outcome: the envelope pinched past
/// itself, certifying that the class hypothesis fails for this input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub lower: f64,
    pub upper: f64,
}

impl Envelope {
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, mean: f64, tol: f64) -> bool {
        self.lower - tol <= mean && mean <= self.upper + tol
    }
}

fn per_step_margin(phi: &ErrorFunction, interval: &Interval, n: u32) -> Result<f64, PhiError> {
    let nf = f64::from(n);
    Ok(0.5 * nf * phi.eval(interval.length() / nf)?)
}

/// Φ-monotone envelope, identical in shape for all three rules:
/// `(f(a) - (n/2)Φ(h), f(b) + (n/2)Φ(h))` with `h = (b-a)/n`.
pub fn monotone_bounds(
    rule: Rule,
    fa: f64,
    fb: f64,
    phi: &ErrorFunction,
    interval: &Interval,
    n: u32,
) -> Result<Envelope, BoundsError> {
    rule.check_n(n)?;
    let margin = per_step_margin(phi, interval, n)?;
    Ok(Envelope {
        lower: fa - margin,
        upper: fb + margin,
    })
}

/// Φ-Hölder envelope: `(max(fa,fb) - (n/2)Φ(h), min(fa,fb) + (n/2)Φ(h))`.
/// May come back empty when Φ is too small for a non-Hölder function.
pub fn holder_bounds(
    rule: Rule,
    fa: f64,
    fb: f64,
    phi: &ErrorFunction,
    interval: &Interval,
    n: u32,
) -> Result<Envelope, BoundsError> {
    rule.check_n(n)?;
    let margin = per_step_margin(phi, interval, n)?;
    Ok(Envelope {
        lower: fa.max(fb) - margin,
        upper: fa.min(fb) + margin,
    })
}

fn require_superadditive(phi: &ErrorFunction) -> Result<(), BoundsError> {
    let report = errfun::is_superadditive(phi, DEFAULT_SUPERADDITIVITY_GRID)?;
    match report.verdict {
        Verdict::Yes => Ok(()),
        Verdict::No => {
            let (x, y) = report.witness.unwrap_or((0.0, 0.0));
            Err(BoundsError::NotSuperadditive {
                label: phi.label().to_string(),
                x,
                y,
            })
        }
        Verdict::Unknown => Err(BoundsError::SuperadditivityUnproven {
            label: phi.label().to_string(),
        }),
    }
}

/// n-free Φ-monotone envelope `(f(a) - Φ(b-a)/2, f(b) + Φ(b-a)/2)`, valid
/// for every parity-admissible n at once. Requires proven superadditivity.
pub fn superadditive_monotone_bounds(
    rule: Rule,
    fa: f64,
    fb: f64,
    phi: &ErrorFunction,
    interval: &Interval,
) -> Result<Envelope, BoundsError> {
    let _ = rule;
    require_superadditive(phi)?;
    let margin = 0.5 * phi.eval(interval.length())?;
    Ok(Envelope {
        lower: fa - margin,
        upper: fb + margin,
    })
}

/// n-free Φ-Hölder envelope with the max/min endpoints.
pub fn superadditive_holder_bounds(
    rule: Rule,
    fa: f64,
    fb: f64,
    phi: &ErrorFunction,
    interval: &Interval,
) -> Result<Envelope, BoundsError> {
    let _ = rule;
    require_superadditive(phi)?;
    let margin = 0.5 * phi.eval(interval.length())?;
    Ok(Envelope {
        lower: fa.max(fb) - margin,
        upper: fa.min(fb) + margin,
    })
}

/// Parity-split lower-bound error term for the Φ-convex trapezoid theorem:
/// `((n²+2)/12)Φ(h)` for even n, `((n²-1)/12)Φ(h) + Φ(h/2)` for odd n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnTerm {
    pub n: u32,
    pub value: f64,
}

pub fn e_n(phi: &ErrorFunction, interval: &Interval, n: u32) -> Result<EnTerm, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Quadrature(
            Rule::Trapezoid.check_n(0).unwrap_err(),
        ));
    }
    let len = interval.length();
    let nf = f64::from(n);
    let h = len / nf;
    let value = if n.is_multiple_of(2) {
        (nf * nf + 2.0) / 12.0 * phi.eval(h)?
    } else {
        (nf * nf - 1.0) / 12.0 * phi.eval(h)? + phi.eval(len / (2.0 * nf))?
    };
    Ok(EnTerm { n, value })
}

fn upper_error_term(phi: &ErrorFunction, interval: &Interval, n: u32) -> Result<f64, PhiError> {
    let nf = f64::from(n);
    Ok((nf * nf - 1.0) / 6.0 * phi.eval(interval.length() / nf)?)
}

/// Φ-convex trapezoid envelope:
/// `(f((a+b)/2) - E_n, (f(a)+f(b))/2 + ((n²-1)/6)Φ(h))`.
pub fn convex_trapezoid_bounds(
    f_mid: f64,
    fa: f64,
    fb: f64,
    phi: &ErrorFunction,
    interval: &Interval,
    n: u32,
) -> Result<Envelope, BoundsError> {
    let en = e_n(phi, interval, n)?;
    Ok(Envelope {
        lower: f_mid - en.value,
        upper: 0.5 * (fa + fb) + upper_error_term(phi, interval, n)?,
    })
}

/// Φ-affine trapezoid envelope: the intersection of the midpoint and
/// endpoint windows. Comes back empty exactly when the affine hypothesis
/// fails badly enough for the two windows to separate.
pub fn affine_trapezoid_bounds(
    f_mid: f64,
    fa: f64,
    fb: f64,
    phi: &ErrorFunction,
    interval: &Interval,
    n: u32,
) -> Result<Envelope, BoundsError> {
    let en = e_n(phi, interval, n)?.value;
    let avg = 0.5 * (fa + fb);
    let err = upper_error_term(phi, interval, n)?;
    Ok(Envelope {
        lower: (f_mid - en).max(avg - err),
        upper: (f_mid + en).min(avg + err),
    })
}

/// Verification state of the class hypothesis behind a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `verify` was not requested.
    Unchecked,
    /// The grid check passed.
    Verified,
    /// The grid check found a violation; the envelope carries no guarantee.
    Failed,
}

impl Hypothesis {
    pub fn as_str(self) -> &'static str {
        match self {
            Hypothesis::Unchecked => "unchecked",
            Hypothesis::Verified => "verified",
            Hypothesis::Failed => "failed",
        }
    }
}

/// The output record tying (rule, n, class, Φ) to a numerical mean and its
/// certified envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub rule: Rule,
    pub n: u32,
    pub class: FunctionClass,
    /// Label of the error function, e.g. `pow:1,2`.
    pub phi: String,
    /// Which bound produced the envelope. `thm:`/`cor:` tags are stated
    /// results; `ext:` tags are indicated extensions (same formula, parity
    /// adjusted); `-n1` marks the degenerate single-interval case.
    pub theorem: String,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub holds: bool,
    pub n_free: bool,
    pub hypothesis: Hypothesis,
}

/// Grid sizes used when `certify` is asked to verify the class hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub grid_points: usize,
    pub t_samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            t_samples: DEFAULT_T_SAMPLES,
        }
    }
}

fn theorem_tag(class: FunctionClass, rule: Rule, n: u32, n_free: bool) -> String {
    let rule_name = rule.name();
    match (class, n_free) {
        (FunctionClass::Monotone, false) => format!("thm:{rule_name}-monotone"),
        (FunctionClass::Holder, false) => format!("cor:{rule_name}-holder"),
        (FunctionClass::Monotone, true) => match rule {
            Rule::Trapezoid => "cor:trapezoid-monotone-nfree".to_string(),
            _ => format!("ext:{rule_name}-monotone-nfree"),
        },
        (FunctionClass::Holder, true) => match rule {
            Rule::Simpson => "cor:simpson-holder-nfree".to_string(),
            _ => format!("ext:{rule_name}-holder-nfree"),
        },
        (FunctionClass::Convex, _) if n == 1 => "thm:trapezoid-convex-n1".to_string(),
        (FunctionClass::Convex, _) => "thm:trapezoid-convex".to_string(),
        (FunctionClass::Affine, _) if n == 1 => "cor:trapezoid-affine-n1".to_string(),
        (FunctionClass::Affine, _) => "cor:trapezoid-affine".to_string(),
    }
}

fn run_class_check(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    class: FunctionClass,
    interval: &Interval,
    opts: &CheckOptions,
) -> Result<Hypothesis, BoundsError> {
    let report = match class {
        FunctionClass::Monotone => classcheck::verify_monotone(f, phi, interval, opts.grid_points)?,
        FunctionClass::Holder => classcheck::verify_holder(f, phi, interval, opts.grid_points)?,
        FunctionClass::Convex => {
            classcheck::verify_convex(f, phi, interval, opts.grid_points, opts.t_samples)?
        }
        FunctionClass::Affine => {
            classcheck::verify_affine(f, phi, interval, opts.grid_points, opts.t_samples)?
        }
    };
    Ok(if report.pass {
        Hypothesis::Verified
    } else {
        Hypothesis::Failed
    })
}

#[allow(clippy::too_many_arguments)]
fn build_certificate(
    class: FunctionClass,
    rule: Rule,
    n: u32,
    phi: &ErrorFunction,
    mean: f64,
    envelope: Envelope,
    n_free: bool,
    hypothesis: Hypothesis,
) -> BoundCertificate {
    let tol = 1e-9 * (1.0 + mean.abs());
    BoundCertificate {
        rule,
        n,
        class,
        phi: phi.label().to_string(),
        theorem: theorem_tag(class, rule, n, n_free),
        mean,
        lower: envelope.lower,
        upper: envelope.upper,
        margin_lower: mean - envelope.lower,
        margin_upper: envelope.upper - mean,
        holds: envelope.contains(mean, tol),
        n_free,
        hypothesis,
    }
}

/// Computes the numerical integral mean and the matching class envelope,
/// optionally verifying the class hypothesis first. A failed verification
/// still produces a certificate, flagged `Hypothesis::Failed`.
#[allow(clippy::too_many_arguments)]
pub fn certify(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    class: FunctionClass,
    rule: Rule,
    interval: &Interval,
    n: u32,
    verify: bool,
    opts: &CheckOptions,
) -> Result<BoundCertificate, BoundsError> {
    rule.check_n(n)?;
    if matches!(class, FunctionClass::Convex | FunctionClass::Affine) && rule != Rule::Trapezoid {
        return Err(BoundsError::UnsupportedClassRule { class, rule });
    }
    let quad = rule.apply(f, interval, n)?;
    let fa = f.evaluate(interval.a())?;
    let fb = f.evaluate(interval.b())?;
    let envelope = match class {
        FunctionClass::Monotone => monotone_bounds(rule, fa, fb, phi, interval, n)?,
        FunctionClass::Holder => holder_bounds(rule, fa, fb, phi, interval, n)?,
        FunctionClass::Convex => {
            let f_mid = f.evaluate(interval.midpoint())?;
            convex_trapezoid_bounds(f_mid, fa, fb, phi, interval, n)?
        }
        FunctionClass::Affine => {
            let f_mid = f.evaluate(interval.midpoint())?;
            affine_trapezoid_bounds(f_mid, fa, fb, phi, interval, n)?
        }
    };
    let hypothesis = if verify {
        run_class_check(f, phi, class, interval, opts)?
    } else {
        Hypothesis::Unchecked
    };
    Ok(build_certificate(
        class, rule, n, phi, quad.mean, envelope, false, hypothesis,
    ))
}

/// Like [`certify`] but with the superadditive n-free envelope. Only the
/// monotone and holder classes have one.
#[allow(clippy::too_many_arguments)]
pub fn certify_n_free(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    class: FunctionClass,
    rule: Rule,
    interval: &Interval,
    n: u32,
    verify: bool,
    opts: &CheckOptions,
) -> Result<BoundCertificate, BoundsError> {
    rule.check_n(n)?;
    let quad = rule.apply(f, interval, n)?;
    let fa = f.evaluate(interval.a())?;
    let fb = f.evaluate(interval.b())?;
    let envelope = match class {
        FunctionClass::Monotone => superadditive_monotone_bounds(rule, fa, fb, phi, interval)?,
        FunctionClass::Holder => superadditive_holder_bounds(rule, fa, fb, phi, interval)?,
        _ => return Err(BoundsError::UnsupportedNFreeClass { class }),
    };
    let hypothesis = if verify {
        run_class_check(f, phi, class, interval, opts)?
    } else {
        Hypothesis::Unchecked
    };
    Ok(build_certificate(
        class, rule, n, phi, quad.mean, envelope, true, hypothesis,
    ))
}

/// One exact coefficient-sum identity instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub family: &'static str,
    pub n: u64,
    pub pass: bool,
}

/// Verifies the coefficient identities behind the envelope proofs, in exact
/// integer arithmetic for every admissible n up to `n_max`:
///
/// * `odd-weights`           Σ_{i=1}^{n} (2i-1) = n²                    (all n)
/// * `simpson-weights`       Σ (6i-1) + Σ (6i-5) = 3n²/2                (n even)
/// * `simpson38-weights`     Σ_{k=1}^{n/3} (24k-12) = 4n²/3             (n ≡ 0 mod 3)
/// * `odd-squares`           2 Σ_{i=1}^{n/2} (2i-1)² = (n³-n)/3         (n even)
/// * `midpoint-weights`      2 Σ (2i-1)(n-(2i-1)) = n(n²+2)/6           (n even)
/// * `odd-midpoint-weights`  2 Σ_{i=1}^{(n-1)/2} 2i(n-2i) = (n³-n)/6    (n odd)
///
/// Fractions are cleared before comparison so every check is integral.
pub fn identity_suite(n_max: u64) -> Vec<IdentityCheck> {
    let mut out = Vec::new();

    let mut sum: i128 = 0;
    for n in 1..=n_max {
        sum += (2 * n - 1) as i128;
        out.push(IdentityCheck {
            family: "odd-weights",
            n,
            pass: sum == (n as i128) * (n as i128),
        });
    }

    let mut sum: i128 = 0;
    for m in 1..=n_max / 2 {
        sum += (12 * m - 6) as i128;
        let n = 2 * m;
        let nn = n as i128;
        out.push(IdentityCheck {
            family: "simpson-weights",
            n,
            pass: 2 * sum == 3 * nn * nn,
        });
    }

    let mut sum: i128 = 0;
    for k in 1..=n_max / 3 {
        sum += (24 * k - 12) as i128;
        let n = 3 * k;
        let nn = n as i128;
        out.push(IdentityCheck {
            family: "simpson38-weights",
            n,
            pass: 3 * sum == 4 * nn * nn,
        });
    }

    let mut sum: i128 = 0;
    for m in 1..=n_max / 2 {
        let odd = (2 * m - 1) as i128;
        sum += odd * odd;
        let n = 2 * m;
        let nn = n as i128;
        out.push(IdentityCheck {
            family: "odd-squares",
            n,
            pass: 6 * sum == nn * nn * nn - nn,
        });
    }

    for m in 1..=n_max / 2 {
        let n = 2 * m;
        let nn = n as i128;
        let mut sum: i128 = 0;
        for i in 1..=m {
            let odd = (2 * i - 1) as i128;
            sum += odd * (nn - odd);
        }
        out.push(IdentityCheck {
            family: "midpoint-weights",
            n,
            pass: 12 * sum == nn * (nn * nn + 2),
        });
    }

    let mut n = 1;
    while n <= n_max {
        let nn = n as i128;
        let mut sum: i128 = 0;
        for i in 1..=(n - 1) / 2 {
            let even = (2 * i) as i128;
            sum += even * (nn - even);
        }
        out.push(IdentityCheck {
            family: "odd-midpoint-weights",
            n,
            pass: 12 * sum == nn * nn * nn - nn,
        });
        n += 2;
    }

    out
}
