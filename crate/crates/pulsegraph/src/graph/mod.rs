//! The immutable pulse graph: scalars, waveforms, durations, kinds, and
//! node-level traversal.
//!
//! Nodes are immutable once constructed and shared behind `Arc`, so graphs
//! are plain DAGs: children must exist before their parents, cycles cannot be
//! formed, and subgraphs are freely shared across threads. All rewriting
//! produces new nodes (see [`crate::passes`]); untouched subgraphs keep their
//! identity, which is how transformers detect changes.

pub mod duration;
pub mod kind;
pub mod node;
pub mod scalar;
pub mod waveform;

pub use duration::Duration;
pub use kind::{Category, Kind};
pub use node::{EdgeLabel, Node, NodePath};
pub use scalar::{Scalar, ScalarOp, ScalarView};
pub use waveform::{PhaseMode, Waveform, WaveformArg, WaveformOp, WaveformView};

/// Errors raised while constructing graph nodes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("{kind} expects {expected} operand(s), got {got}")]
    Arity {
        kind: Kind,
        expected: usize,
        got: usize,
    },
    #[error("{kind} requires at least one operand")]
    EmptyOperands { kind: Kind },
    #[error("continuous phase mode requires a reference clock")]
    MissingRefClock,
    #[error("absolute phase mode does not take a reference clock")]
    UnexpectedRefClock,
    #[error("expected a clock waveform, got {got}")]
    NotAClock { got: Kind },
    #[error("clock sequence item {index} must be a clock, got {got}")]
    ClockSeqItem { index: usize, got: Kind },
    #[error("clock sequence item {index} is unbounded but not last")]
    UnboundedClockSeqItem { index: usize },
    #[error("clock sequence requires at least one clock")]
    EmptyClockSeq,
}
