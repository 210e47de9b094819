//! Small numeric helpers shared across the crate.

/// Neumaier-compensated accumulator. Terms are added left to right; the
/// compensation keeps weighted node sums accurate enough for the
/// exactness-degree tests to hold at 1e-13.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Unit in the last place of `x`: the gap to the next representable value
/// away from zero. `x` must be finite.
pub fn ulp(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return f64::from_bits(1);
    }
    f64::from_bits(ax.to_bits() + 1) - ax
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        s.add(1e-16);
        s.add(-1.0);
        assert_eq!(s.value(), 1e-16);
    }

    #[test]
    fn compensated_sum_matches_exact_small_case() {
        let mut s = CompensatedSum::new();
        for _ in 0..10 {
            s.add(0.1);
        }
        assert!((s.value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ulp_of_one_is_machine_epsilon() {
        assert_eq!(ulp(1.0), f64::EPSILON);
        assert_eq!(ulp(-1.0), f64::EPSILON);
        assert!(ulp(0.0) > 0.0);
    }
}
