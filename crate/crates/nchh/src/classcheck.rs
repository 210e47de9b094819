//! Grid-based verification of approximate-class membership.
//!
//! These are semi-decision procedures: a pass means no violation was found
//! on the sampled grid, recorded via `samples_checked`. Continuity of the
//! function cannot be certified by sampling and remains a caller-supplied
//! assumption.

use thiserror::Error;

use crate::errfun::{ErrorFunction, PhiError};
use crate::expr::EvalError;
use crate::function::FunctionSpec;
use crate::interval::Interval;

/// Default number of uniform grid points.
pub const DEFAULT_GRID_POINTS: usize = 201;
/// Default number of chord parameters; yields t = 0, 1/8, ..., 1 which
/// includes the load-bearing midpoint t = 1/2.
pub const DEFAULT_T_SAMPLES: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClasscheckError {
    #[error("grid must have at least {min} points, got {got}")]
    Grid { min: usize, got: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}

/// The four approximate classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionClass {
    Monotone,
    Holder,
    Convex,
    Affine,
}

impl FunctionClass {
    pub fn name(self) -> &'static str {
        match self {
            FunctionClass::Monotone => "monotone",
            FunctionClass::Holder => "holder",
            FunctionClass::Convex => "convex",
            FunctionClass::Affine => "affine",
        }
    }
}

impl std::fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The sample achieving the worst violation. `t` is present only for the
/// chord-based classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub t: Option<f64>,
}

/// Result of an empirical class check. `pass` holds exactly when
/// `worst_violation <= tol` with `tol = 1e-9 (1 + |f(a)| + |f(b)|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub class: FunctionClass,
    pub pass: bool,
    /// Max of (lhs - rhs) over all samples; <= 0 means no violation at all.
    pub worst_violation: f64,
    pub witness: Witness,
    pub samples_checked: usize,
}

fn violation_tol(f: &FunctionSpec, interval: &Interval) -> Result<f64, ClasscheckError> {
    let fa = f.evaluate(interval.a())?;
    let fb = f.evaluate(interval.b())?;
    Ok(1e-9 * (1.0 + fa.abs() + fb.abs()))
}

fn grid(interval: &Interval, points: usize) -> Result<Vec<f64>, ClasscheckError> {
    if points < 2 {
        return Err(ClasscheckError::Grid {
            min: 2,
            got: points,
        });
    }
    let len = interval.length();
    let last = points - 1;
    let mut xs: Vec<f64> = (0..points)
        .map(|i| interval.a() + (i as f64) * len / (last as f64))
        .collect();
    xs[0] = interval.a();
    xs[last] = interval.b();
    Ok(xs)
}

fn eval_grid(f: &FunctionSpec, xs: &[f64]) -> Result<Vec<f64>, ClasscheckError> {
    xs.iter().map(|&x| f.evaluate(x).map_err(Into::into)).collect()
}

/// Running argmax with first-wins ties; iteration order makes the retained
/// witness the lexicographically smallest (x, y, t).
struct Worst {
    violation: f64,
    witness: Option<Witness>,
    samples: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            violation: f64::NEG_INFINITY,
            witness: None,
            samples: 0,
        }
    }

    fn observe(&mut self, v: f64, witness: Witness) {
        self.samples += 1;
        if v > self.violation {
            self.violation = v;
            self.witness = Some(witness);
        }
    }

    fn report(self, class: FunctionClass, tol: f64) -> ClassReport {
        let witness = self.witness.expect("at least one sample is checked");
        ClassReport {
            class,
            pass: self.violation <= tol,
            worst_violation: self.violation,
            witness,
            samples_checked: self.samples,
        }
    }
}

/// Checks `f(x) <= f(y) + Φ(y-x)` over all ordered grid pairs `x < y`.
pub fn verify_monotone(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
) -> Result<ClassReport, ClasscheckError> {
    let tol = violation_tol(f, interval)?;
    let xs = grid(interval, grid_points)?;
    let ys = eval_grid(f, &xs)?;
    let mut worst = Worst::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let v = ys[i] - ys[j] - phi.eval(xs[j] - xs[i])?;
            worst.observe(
                v,
                Witness {
                    x: xs[i],
                    y: xs[j],
                    t: None,
                },
            );
        }
    }
    Ok(worst.report(FunctionClass::Monotone, tol))
}

/// Checks `|f(x) - f(y)| <= Φ(|y-x|)` over all grid pairs.
pub fn verify_holder(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
) -> Result<ClassReport, ClasscheckError> {
    let tol = violation_tol(f, interval)?;
    let xs = grid(interval, grid_points)?;
    let ys = eval_grid(f, &xs)?;
    let mut worst = Worst::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let v = (ys[i] - ys[j]).abs() - phi.eval(xs[j] - xs[i])?;
            worst.observe(
                v,
                Witness {
                    x: xs[i],
                    y: xs[j],
                    t: None,
                },
            );
        }
    }
    Ok(worst.report(FunctionClass::Holder, tol))
}

/// Uniform chord parameters 0, 1/(m-1), ..., 1 with t = 1/2 inserted when
/// the count does not already produce it. Counts below 2 are raised to 2.
pub fn t_samples(count: usize) -> Vec<f64> {
    let last = count.max(2) - 1;
    let mut ts: Vec<f64> = (0..=last).map(|i| i as f64 / last as f64).collect();
    if !ts.contains(&0.5) {
        let at = ts.iter().position(|&t| t > 0.5).unwrap_or(ts.len());
        ts.insert(at, 0.5);
    }
    ts
}

fn chord_samples(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
    ts: &[f64],
    absolute: bool,
) -> Result<Worst, ClasscheckError> {
    if ts.is_empty() {
        return Err(ClasscheckError::Grid { min: 1, got: 0 });
    }
    let xs = grid(interval, grid_points)?;
    let ys = eval_grid(f, &xs)?;
    let mut worst = Worst::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let (x, y) = (xs[i], xs[j]);
            let d = y - x;
            for &t in ts {
                let m = (t * x + (1.0 - t) * y).clamp(x, y);
                let chord = t * ys[i] + (1.0 - t) * ys[j];
                let slack = t * phi.eval((1.0 - t) * d)? + (1.0 - t) * phi.eval(t * d)?;
                let defect = f.evaluate(m)? - chord;
                let v = if absolute { defect.abs() } else { defect } - slack;
                worst.observe(v, Witness { x, y, t: Some(t) });
            }
        }
    }
    Ok(worst)
}

/// Checks the Φ-convexity chord inequality
/// `f(tx+(1-t)y) <= t f(x) + (1-t) f(y) + tΦ((1-t)|y-x|) + (1-t)Φ(t|y-x|)`
/// over all grid pairs and chord parameters. `t_count` must be at least 3;
/// the parameter set always contains 0, 1/2 and 1.
pub fn verify_convex(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
    t_count: usize,
) -> Result<ClassReport, ClasscheckError> {
    if t_count < 3 {
        return Err(ClasscheckError::Grid {
            min: 3,
            got: t_count,
        });
    }
    verify_convex_with_ts(f, phi, interval, grid_points, &t_samples(t_count))
}

/// Convexity check against an explicit chord-parameter list.
pub fn verify_convex_with_ts(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
    ts: &[f64],
) -> Result<ClassReport, ClasscheckError> {
    let tol = violation_tol(f, interval)?;
    let worst = chord_samples(f, phi, interval, grid_points, ts, false)?;
    Ok(worst.report(FunctionClass::Convex, tol))
}

/// Two-sided (absolute value) version of the chord inequality.
pub fn verify_affine(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
    t_count: usize,
) -> Result<ClassReport, ClasscheckError> {
    if t_count < 3 {
        return Err(ClasscheckError::Grid {
            min: 3,
            got: t_count,
        });
    }
    verify_affine_with_ts(f, phi, interval, grid_points, &t_samples(t_count))
}

/// Affineness check against an explicit chord-parameter list.
pub fn verify_affine_with_ts(
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid_points: usize,
    ts: &[f64],
) -> Result<ClassReport, ClasscheckError> {
    let tol = violation_tol(f, interval)?;
    let worst = chord_samples(f, phi, interval, grid_points, ts, true)?;
    Ok(worst.report(FunctionClass::Affine, tol))
}

/// The smallest constant ε making `f` ε-monotone on the grid:
/// `max(0, max_{x<y} f(x) - f(y))`.
pub fn min_epsilon_monotone(
    f: &FunctionSpec,
    interval: &Interval,
    grid_points: usize,
) -> Result<f64, ClasscheckError> {
    let xs = grid(interval, grid_points)?;
    let ys = eval_grid(f, &xs)?;
    let mut eps = 0.0f64;
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            eps = eps.max(ys[i] - ys[j]);
        }
    }
    Ok(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn f(text: &str) -> FunctionSpec {
        FunctionSpec::parse(text).unwrap()
    }

    fn phi(text: &str, i: &Interval) -> ErrorFunction {
        ErrorFunction::parse(text, i).unwrap()
    }

    #[test]
    fn nondecreasing_is_phi_monotone_for_zero_phi() {
        let i = unit();
        let rep = verify_monotone(&f("x"), &phi("const:0", &i), &i, 101).unwrap();
        assert!(rep.pass);
        assert!(rep.worst_violation <= 0.0);
        assert_eq!(rep.samples_checked, 101 * 100 / 2);
    }

    #[test]
    fn decreasing_fails_with_small_constant() {
        let i = unit();
        let rep = verify_monotone(&f("-x"), &phi("const:0.5", &i), &i, 101).unwrap();
        assert!(!rep.pass);
        assert!((rep.worst_violation - 0.5).abs() < 1e-12);
        assert_eq!(rep.witness.x, 0.0);
        assert_eq!(rep.witness.y, 1.0);
    }

    #[test]
    fn noisy_identity_is_eps_monotone() {
        let i = unit();
        let rep =
            verify_monotone(&f("x + noise(7, 0.05)"), &phi("const:0.1", &i), &i, 201).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn constant_function_is_zero_holder() {
        let i = unit();
        let rep = verify_holder(&f("3"), &phi("const:0", &i), &i, 51).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn identity_is_lipschitz_with_equality() {
        let i = unit();
        let rep = verify_holder(&f("x"), &phi("pow:1,1", &i), &i, 101).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.worst_violation, 0.0);
    }

    #[test]
    fn square_is_not_one_lipschitz_on_unit() {
        let i = unit();
        let rep = verify_holder(&f("x^2"), &phi("pow:1,1", &i), &i, 201).unwrap();
        assert!(!rep.pass);
        assert!((rep.worst_violation - 0.25).abs() < 1e-12);
        assert_eq!(rep.witness.x, 0.5);
        assert_eq!(rep.witness.y, 1.0);
    }

    #[test]
    fn square_is_two_lipschitz_on_unit() {
        let i = unit();
        let rep = verify_holder(&f("x^2"), &phi("pow:2,1", &i), &i, 201).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn convex_passes_with_zero_phi() {
        let i = unit();
        let rep = verify_convex(&f("x^2"), &phi("const:0", &i), &i, 101, 9).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn perturbed_convex_passes_with_matching_constant() {
        let i = unit();
        let rep = verify_convex(
            &f("x^2 + 0.01*sin(50*x)"),
            &phi("const:0.02", &i),
            &i,
            201,
            9,
        )
        .unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn concave_fails_with_midpoint_witness() {
        let i = unit();
        let rep = verify_convex(&f("-x^2"), &phi("const:0", &i), &i, 101, 9).unwrap();
        assert!(!rep.pass);
        assert!((rep.worst_violation - 0.25).abs() < 1e-12);
        assert_eq!(rep.witness.x, 0.0);
        assert_eq!(rep.witness.y, 1.0);
        assert_eq!(rep.witness.t, Some(0.5));
    }

    #[test]
    fn affine_function_has_zero_chord_defect() {
        let i = unit();
        let rep = verify_affine(&f("2*x+1"), &phi("const:0", &i), &i, 101, 9).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn square_is_affine_for_linear_phi_on_unit() {
        let i = unit();
        let rep = verify_affine(&f("x^2"), &phi("pow:1,1", &i), &i, 101, 9).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn square_is_not_zero_affine() {
        let i = unit();
        let rep = verify_affine(&f("x^2"), &phi("const:0", &i), &i, 101, 9).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn min_epsilon_examples() {
        let i = unit();
        assert_eq!(min_epsilon_monotone(&f("x"), &i, 101).unwrap(), 0.0);
        assert_eq!(min_epsilon_monotone(&f("-x"), &i, 101).unwrap(), 1.0);
        let eps = min_epsilon_monotone(&f("x + noise(7, 0.05)"), &i, 201).unwrap();
        assert!(eps > 0.0 && eps <= 0.1, "eps = {eps}");
    }

    #[test]
    fn t_samples_always_contain_required_points() {
        for count in 3..=12 {
            let ts = t_samples(count);
            assert_eq!(ts[0], 0.0);
            assert_eq!(*ts.last().unwrap(), 1.0);
            assert!(ts.contains(&0.5));
            assert!(ts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn small_grids_rejected() {
        let i = unit();
        assert!(matches!(
            verify_monotone(&f("x"), &phi("const:0", &i), &i, 1),
            Err(ClasscheckError::Grid { .. })
        ));
        assert!(matches!(
            verify_convex(&f("x"), &phi("const:0", &i), &i, 11, 2),
            Err(ClasscheckError::Grid { .. })
        ));
    }
}
