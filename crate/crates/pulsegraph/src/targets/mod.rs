//! Lowering backends: DOT graph export, sample emission for sample-replay
//! hardware, and DDS parameter-segment extraction by maximal munch.

mod dds;
mod dot;
mod samples;

pub use dds::{munch_dds, DdsSegment};
pub use dot::to_dot;
pub use samples::emit_samples;

use crate::eval::EvalError;
use crate::graph::{Kind, NodePath};

/// Errors from the lowering backends.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TargetError {
    /// The graph contains a waveform the target cannot realize; the pattern
    /// mismatch is the verification signal.
    #[error("unsupported waveform for this target: {kind} at {path}")]
    UnsupportedWaveform { path: NodePath, kind: Kind },
    #[error("waveform at {path} has unbounded duration")]
    UnboundedDuration { path: NodePath },
    #[error("waveform at {path} has negative duration {duration_s} s")]
    NegativeDuration { path: NodePath, duration_s: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}
