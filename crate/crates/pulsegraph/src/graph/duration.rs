//! Symbolic durations and the min/max/sum algebra that combines them.
//!
//! A duration is either a scalar expression in seconds or the distinguished
//! value [`Duration::Unbounded`]. Keeping unboundedness out of the scalar
//! graph keeps the folding rules total: the combinators below elide or absorb
//! unbounded operands instead of injecting an IEEE infinity.

use super::scalar::{Scalar, ScalarOp};

/// A waveform duration: a scalar expression in seconds, or unbounded.
#[derive(Debug, Clone, PartialEq)]
pub enum Duration {
    Expr(Scalar),
    Unbounded,
}

impl Duration {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, Duration::Unbounded)
    }

    /// The underlying scalar expression, if bounded.
    pub fn expr(&self) -> Option<&Scalar> {
        match self {
            Duration::Expr(s) => Some(s),
            Duration::Unbounded => None,
        }
    }

    /// Minimum of several durations. Unbounded operands are elided when any
    /// bounded operand exists; the minimum of only unbounded durations is
    /// unbounded.
    pub fn min_of(items: impl IntoIterator<Item = Duration>) -> Duration {
        let bounded: Vec<Scalar> = items
            .into_iter()
            .filter_map(|d| match d {
                Duration::Expr(s) => Some(s),
                Duration::Unbounded => None,
            })
            .collect();
        Duration::combine(ScalarOp::Min, bounded, Duration::Unbounded)
    }

    /// Maximum of several durations; unbounded absorbs. The maximum of no
    /// durations is zero.
    pub fn max_of(items: impl IntoIterator<Item = Duration>) -> Duration {
        let mut bounded = Vec::new();
        for d in items {
            match d {
                Duration::Expr(s) => bounded.push(s),
                Duration::Unbounded => return Duration::Unbounded,
            }
        }
        Duration::combine(ScalarOp::Max, bounded, Duration::Expr(Scalar::num(0.0)))
    }

    /// Sum of several durations; unbounded absorbs. The sum of no durations
    /// is zero.
    pub fn sum_of(items: impl IntoIterator<Item = Duration>) -> Duration {
        let mut bounded = Vec::new();
        for d in items {
            match d {
                Duration::Expr(s) => bounded.push(s),
                Duration::Unbounded => return Duration::Unbounded,
            }
        }
        Duration::combine(ScalarOp::Sum, bounded, Duration::Expr(Scalar::num(0.0)))
    }

    fn combine(op: ScalarOp, mut items: Vec<Scalar>, empty: Duration) -> Duration {
        match items.len() {
            0 => empty,
            1 => Duration::Expr(items.pop().unwrap()),
            _ => Duration::Expr(Scalar::op(op, items).expect("two or more operands")),
        }
    }
}

impl From<Scalar> for Duration {
    fn from(s: Scalar) -> Self {
        Duration::Expr(s)
    }
}

impl From<&Scalar> for Duration {
    fn from(s: &Scalar) -> Self {
        Duration::Expr(s.clone())
    }
}

impl From<f64> for Duration {
    fn from(seconds: f64) -> Self {
        Duration::Expr(Scalar::num(seconds))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::kind::Kind;

    #[test]
    fn min_elides_unbounded_when_bounded_operands_exist() {
        let d = Duration::min_of([
            Duration::Unbounded,
            Duration::from(1e-7),
            Duration::from(2e-7),
        ]);
        assert_eq!(d.expr().unwrap().kind(), Kind::ScalarMin);
    }

    #[test]
    fn min_of_only_unbounded_is_unbounded() {
        assert!(Duration::min_of([Duration::Unbounded]).is_unbounded());
        assert!(Duration::min_of([]).is_unbounded());
    }

    #[test]
    fn unbounded_absorbs_max_and_sum() {
        assert!(Duration::max_of([Duration::from(1e-7), Duration::Unbounded]).is_unbounded());
        assert!(Duration::sum_of([Duration::from(1e-7), Duration::Unbounded]).is_unbounded());
    }

    #[test]
    fn single_operand_collapses() {
        let d = Duration::sum_of([Duration::from(3e-7)]);
        assert_eq!(d.expr().unwrap().as_num(), Some(3e-7));
    }
}
