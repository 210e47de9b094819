//! Closed intervals and equidistant partitions.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("interval endpoints must be finite, got [{a}, {b}]")]
    NonFinite { a: f64, b: f64 },
    #[error("interval must satisfy a < b, got [{a}, {b}]")]
    NotIncreasing { a: f64, b: f64 },
}

/// Non-empty, non-singleton closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, IntervalError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(IntervalError::NonFinite { a, b });
        }
        if a >= b {
            return Err(IntervalError::NotIncreasing { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Length `b - a`, always positive.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("partition requires at least one sub-interval")]
    ZeroSubIntervals,
}

/// Equidistant partition of an interval into `n` sub-intervals (`n + 1`
/// nodes). Nodes are computed in fused form `a + i*(b-a)/n` (a single
/// fused multiply-add per node) rather than by repeated addition, with the
/// endpoints pinned exactly to `a` and `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    interval: Interval,
    n: u32,
    nodes: Vec<f64>,
}

impl Partition {
    pub fn new(interval: Interval, n: u32) -> Result<Self, PartitionError> {
        if n == 0 {
            return Err(PartitionError::ZeroSubIntervals);
        }
        let h = interval.length() / f64::from(n);
        let mut nodes: Vec<f64> = (0..=n)
            .map(|i| f64::from(i).mul_add(h, interval.a()))
            .collect();
        nodes[0] = interval.a();
        nodes[n as usize] = interval.b();
        Ok(Self { interval, n, nodes })
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Nominal spacing `(b - a) / n`.
    pub fn spacing(&self) -> f64 {
        self.interval.length() / f64::from(self.n)
    }
}

/// Equidistant partition with `x_i = a + i*(b-a)/n`.
pub fn make_partition(interval: Interval, n: u32) -> Result<Partition, PartitionError> {
    Partition::new(interval, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_and_reversed_intervals() {
        assert!(matches!(
            Interval::new(1.0, 1.0),
            Err(IntervalError::NotIncreasing { .. })
        ));
        assert!(matches!(
            Interval::new(2.0, 1.0),
            Err(IntervalError::NotIncreasing { .. })
        ));
        assert!(matches!(
            Interval::new(f64::NAN, 1.0),
            Err(IntervalError::NonFinite { .. })
        ));
        assert!(matches!(
            Interval::new(0.0, f64::INFINITY),
            Err(IntervalError::NonFinite { .. })
        ));
    }

    #[test]
    fn partition_rejects_zero() {
        let i = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(Partition::new(i, 0), Err(PartitionError::ZeroSubIntervals));
    }

    #[test]
    fn unit_interval_single_subinterval() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let p = Partition::new(i, 1).unwrap();
        assert_eq!(p.nodes(), &[0.0, 1.0]);
    }

    #[test]
    fn unit_interval_four_subintervals() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let p = Partition::new(i, 4).unwrap();
        assert_eq!(p.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn symmetric_interval_midpoint() {
        let i = Interval::new(-2.0, 2.0).unwrap();
        let p = Partition::new(i, 2).unwrap();
        assert_eq!(p.nodes(), &[-2.0, 0.0, 2.0]);
    }

    #[test]
    fn node_count_and_exact_endpoints() {
        let i = Interval::new(0.3, 2.7).unwrap();
        for n in [1u32, 2, 3, 7, 64, 1000] {
            let p = Partition::new(i, n).unwrap();
            assert_eq!(p.nodes().len(), n as usize + 1);
            assert_eq!(p.nodes()[0], 0.3);
            assert_eq!(*p.nodes().last().unwrap(), 2.7);
        }
    }

    #[test]
    fn nodes_strictly_increasing() {
        let i = Interval::new(-5.5, 10.25).unwrap();
        let p = Partition::new(i, 123).unwrap();
        for w in p.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}
