//! Evaluable function specifications.

use std::fmt;
use std::sync::Arc;

use crate::expr::{self, EvalError, Expr, ParseError};

type NativeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum FnBody {
    Parsed(Expr),
    Native(NativeFn),
}

/// A deterministic real function of one variable, either parsed from text
/// or backed by native code. Evaluation is referentially transparent:
/// identical `(x, seed)` inputs give bit-identical results.
#[derive(Clone)]
pub struct FunctionSpec {
    label: String,
    body: FnBody,
    seed: u64,
}

impl FunctionSpec {
    /// Parses an expression over the variable `x`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let body = expr::parse(text, "x")?;
        Ok(Self {
            label: text.to_string(),
            body: FnBody::Parsed(body),
            seed: 0,
        })
    }

    /// Wraps a native function. The closure must be deterministic; its
    /// output is checked for finiteness on every call.
    pub fn native(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            body: FnBody::Native(Arc::new(f)),
            seed: 0,
        }
    }

    /// Re-seeds every `noise` term in a parsed expression. Has no effect on
    /// native functions.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        match &self.body {
            FnBody::Parsed(e) => e.eval(x, self.seed),
            FnBody::Native(f) => {
                let v = f(x);
                if !v.is_finite() {
                    return Err(EvalError::new(x, "native function produced a non-finite value"));
                }
                Ok(v)
            }
        }
    }
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("label", &self.label)
            .field("seed", &self.seed)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_evaluate_examples() {
        let f = FunctionSpec::parse("x").unwrap();
        assert_eq!(f.evaluate(0.5).unwrap(), 0.5);
        let f = FunctionSpec::parse("x^2").unwrap();
        assert_eq!(f.evaluate(3.0).unwrap(), 9.0);
        let f = FunctionSpec::parse("sin(x)").unwrap();
        assert_eq!(f.evaluate(0.0).unwrap(), 0.0);
    }

    #[test]
    fn evaluation_is_bit_reproducible() {
        let f = FunctionSpec::parse("x^2 + 0.5*sin(3*x) + noise(42, 0.01)").unwrap();
        for i in 0..100 {
            let x = -1.0 + 2.0 * (i as f64) / 99.0;
            let a = f.evaluate(x).unwrap();
            let b = f.evaluate(x).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn seed_changes_noise_only() {
        let base = FunctionSpec::parse("x + noise(7, 0.05)").unwrap();
        let reseeded = base.clone().with_seed(99);
        assert_ne!(base.evaluate(0.3).unwrap(), reseeded.evaluate(0.3).unwrap());

        let plain = FunctionSpec::parse("x^2").unwrap().with_seed(99);
        assert_eq!(plain.evaluate(3.0).unwrap(), 9.0);
    }

    #[test]
    fn native_functions_check_finiteness() {
        let f = FunctionSpec::native("blowup", |x| 1.0 / (x - x));
        assert!(f.evaluate(1.0).is_err());
        let g = FunctionSpec::native("cube", |x| x * x * x);
        assert_eq!(g.evaluate(2.0).unwrap(), 8.0);
        assert_eq!(g.label(), "cube");
    }
}
