//! Sample emission for sample-replay hardware; a thin delegation to the
//! evaluator's renderer.

use crate::eval::{render, EvalError, SampleBlock};
use crate::graph::Waveform;

/// Renders the waveform into the sample stream the target replays.
pub fn emit_samples(w: &Waveform, sample_rate: f64, t0: f64) -> Result<SampleBlock, EvalError> {
    render(w, sample_rate, t0)
}
