//! DDS lowering: greedy maximal-munch linearization of a waveform into
//! frequency/amplitude/phase segments.
//!
//! The munch walks the flattened top-level sequence left to right and tries
//! a fixed pattern list, most specific first:
//!
//! 1. a sine with constant amplitude, frequency, and phase;
//! 2. a frequency- or phase-modulated sine with constant modulation
//!    (expanded onto its carrier);
//! 3. zero (or a constant zero), as a zero-amplitude segment at 0 Hz;
//! 4. a product of pattern 1/2 with a constant, scaling the amplitude.
//!
//! Anything else is an [`TargetError::UnsupportedWaveform`]: a pattern
//! mismatch means the target cannot realize the pulse, which is exactly the
//! verification the munch provides. The output always covers the waveform's
//! full duration or the munch fails; there is no partial output.

use serde::Serialize;

use super::TargetError;
use crate::eval::{clock_phase, resolve_duration, resolve_scalar};
use crate::graph::node::EdgeLabel;
use crate::graph::{NodePath, PhaseMode, Waveform, WaveformOp, WaveformView};

/// One linear DDS program step, in SI units. `ref_phase_rad` is the
/// reference clock's accumulated phase at the segment's start time and is
/// present exactly for continuous-mode segments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DdsSegment {
    pub duration_s: f64,
    pub frequency_hz: f64,
    pub amplitude: f64,
    pub phase_rad: f64,
    pub phase_mode: PhaseMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ref_phase_rad: Option<f64>,
}

/// Linearizes a fully-bound, finite waveform into DDS segments.
/// Segment start times accumulate from `t = 0`, the shared schedule origin.
pub fn munch_dds(w: &Waveform) -> Result<Vec<DdsSegment>, TargetError> {
    let mut items = Vec::new();
    flatten(w, NodePath::root(), &mut items);

    let mut segments = Vec::new();
    let mut t_cursor = 0.0;
    for (path, item) in items {
        let duration = resolve_duration(&item.duration_expr())?
            .ok_or_else(|| TargetError::UnboundedDuration { path: path.clone() })?;
        if duration < 0.0 {
            return Err(TargetError::NegativeDuration {
                path,
                duration_s: duration,
            });
        }
        if duration > 0.0 {
            segments.push(munch_item(&item, &path, t_cursor, duration)?);
        }
        t_cursor += duration;
    }
    Ok(segments)
}

/// Nested sequences are flattened before matching so they cannot defeat the
/// patterns; clock sequences are not sequences of pulses and stay intact.
fn flatten(w: &Waveform, path: NodePath, out: &mut Vec<(NodePath, Waveform)>) {
    if let WaveformView::Sequence { items } = w.view() {
        for (i, item) in items.iter().enumerate() {
            flatten(item, path.child(EdgeLabel::Index(i)), out);
        }
    } else {
        out.push((path, w.clone()));
    }
}

fn munch_item(
    w: &Waveform,
    path: &NodePath,
    t_start: f64,
    duration: f64,
) -> Result<DdsSegment, TargetError> {
    if let Some(segment) = sine_pattern(w, path, t_start, duration, 1.0)? {
        return Ok(segment);
    }
    match w.view() {
        WaveformView::Zero { .. } => Ok(zero_segment(duration)),
        WaveformView::Const { value, .. } if resolve_scalar(value)? == 0.0 => {
            Ok(zero_segment(duration))
        }
        WaveformView::Op {
            op: WaveformOp::Product,
            items,
        } if items.len() == 2 => {
            let scaled = |sine: &Waveform, factor: &Waveform, which: usize| {
                let scale = match factor.view() {
                    WaveformView::Const { value, .. } => resolve_scalar(value)?,
                    _ => return Ok(None),
                };
                sine_pattern(
                    sine,
                    &path.child(EdgeLabel::Index(1 - which)),
                    t_start,
                    duration,
                    scale,
                )
            };
            if let Some(segment) = scaled(&items[0], &items[1], 1)? {
                return Ok(segment);
            }
            if let Some(segment) = scaled(&items[1], &items[0], 0)? {
                return Ok(segment);
            }
            Err(unsupported(path, w))
        }
        _ => Err(unsupported(path, w)),
    }
}

/// Patterns 1 and 2: a plain sine with constant parameters, or a modulated
/// sine with constant modulation expanded onto its carrier.
fn sine_pattern(
    w: &Waveform,
    path: &NodePath,
    t_start: f64,
    duration: f64,
    scale: f64,
) -> Result<Option<DdsSegment>, TargetError> {
    match w.view() {
        WaveformView::Sine {
            amplitude,
            frequency,
            phase,
            phase_mode,
            ref_clock,
            ..
        } => {
            let (Some(a), Some(f), Some(p)) = (
                const_value(amplitude)?,
                const_value(frequency)?,
                const_value(phase)?,
            ) else {
                return Err(unsupported(path, w));
            };
            let ref_phase_rad = match phase_mode {
                PhaseMode::Absolute => None,
                PhaseMode::Continuous => Some(clock_phase(
                    ref_clock.expect("continuous sines carry a clock"),
                    t_start,
                )?),
            };
            Ok(Some(DdsSegment {
                duration_s: duration,
                frequency_hz: f,
                amplitude: a * scale,
                phase_rad: p,
                phase_mode,
                ref_phase_rad,
            }))
        }
        WaveformView::SineFm {
            carrier,
            modulation,
            amplitude,
            phase,
            ..
        } => {
            let (Some(a), Some(m), Some(p)) = (
                const_value(amplitude)?,
                const_value(modulation)?,
                const_value(phase)?,
            ) else {
                return Err(unsupported(path, w));
            };
            let f = carrier_frequency(carrier)? + m;
            Ok(Some(DdsSegment {
                duration_s: duration,
                frequency_hz: f,
                amplitude: a * scale,
                phase_rad: p,
                phase_mode: PhaseMode::Continuous,
                ref_phase_rad: Some(clock_phase(carrier, t_start)?),
            }))
        }
        WaveformView::SinePm {
            carrier,
            modulation,
            amplitude,
            phase,
            ..
        } => {
            let (Some(a), Some(m), Some(p)) = (
                const_value(amplitude)?,
                const_value(modulation)?,
                const_value(phase)?,
            ) else {
                return Err(unsupported(path, w));
            };
            Ok(Some(DdsSegment {
                duration_s: duration,
                frequency_hz: carrier_frequency(carrier)?,
                amplitude: a * scale,
                phase_rad: m + p,
                phase_mode: PhaseMode::Continuous,
                ref_phase_rad: Some(clock_phase(carrier, t_start)?),
            }))
        }
        _ => Ok(None),
    }
}

fn const_value(w: &Waveform) -> Result<Option<f64>, TargetError> {
    match w.view() {
        WaveformView::Const { value, .. } => Ok(Some(resolve_scalar(value)?)),
        _ => Ok(None),
    }
}

fn carrier_frequency(carrier: &Waveform) -> Result<f64, TargetError> {
    match carrier.view() {
        WaveformView::Clock { frequency, .. } => Ok(resolve_scalar(frequency)?),
        _ => Err(TargetError::Eval(crate::eval::EvalError::NotAClock(
            carrier.kind(),
        ))),
    }
}

fn zero_segment(duration: f64) -> DdsSegment {
    DdsSegment {
        duration_s: duration,
        frequency_hz: 0.0,
        amplitude: 0.0,
        phase_rad: 0.0,
        phase_mode: PhaseMode::Absolute,
        ref_phase_rad: None,
    }
}

fn unsupported(path: &NodePath, w: &Waveform) -> TargetError {
    TargetError::UnsupportedWaveform {
        path: path.clone(),
        kind: w.kind(),
    }
}

/// The symbolic duration of a segment list must cover the waveform exactly;
/// kept here for the round-trip checks in the tests.
#[allow(dead_code)]
pub(crate) fn total_duration(segments: &[DdsSegment]) -> f64 {
    segments.iter().fold(0.0, |acc, s| acc + s.duration_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Duration, Kind, Scalar};

    #[test]
    fn sine_then_zero_reads_off_directly() {
        let seq = Waveform::sequence([
            Waveform::sine(0.5, 1e6, 0.0, 1e-6),
            Waveform::zero(0.5e-6),
        ]);
        let segments = munch_dds(&seq).unwrap();
        assert_eq!(segments.len(), 2);
        assert_eq!(segments[0].duration_s, 1e-6);
        assert_eq!(segments[0].frequency_hz, 1e6);
        assert_eq!(segments[0].amplitude, 0.5);
        assert_eq!(segments[0].phase_mode, PhaseMode::Absolute);
        assert_eq!(segments[1].frequency_hz, 0.0);
        assert_eq!(segments[1].amplitude, 0.0);
    }

    #[test]
    fn modulated_frequency_is_unsupported() {
        let sine = Waveform::sine(1.0, Waveform::triangle(5e6, 1e-6), 0.0, 1e-6);
        let err = munch_dds(&sine).unwrap_err();
        assert!(matches!(
            err,
            TargetError::UnsupportedWaveform {
                kind: Kind::Sine,
                ..
            }
        ));
    }

    #[test]
    fn unsupported_items_report_their_path() {
        let seq = Waveform::sequence([
            Waveform::zero(1e-6),
            Waveform::triangle(1.0, 1e-6),
        ]);
        let err = munch_dds(&seq).unwrap_err();
        match err {
            TargetError::UnsupportedWaveform { path, kind } => {
                assert_eq!(path.to_string(), "$.1");
                assert_eq!(kind, Kind::Triangle);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn product_with_const_scales_the_amplitude() {
        let scaled = Waveform::sine(0.5, 1e6, 0.0, 1e-6) * Waveform::constant(0.4, 1e-6);
        let segments = munch_dds(&scaled).unwrap();
        assert_eq!(segments.len(), 1);
        assert!((segments[0].amplitude - 0.2).abs() < 1e-15);
    }

    #[test]
    fn continuous_segments_record_the_clock_phase_at_their_start() {
        let clock = Waveform::clock(10e6, 0.0, Duration::Unbounded);
        let pulse = |d: f64| {
            Waveform::sine_continuous(1.0, 10e6, 0.0, Scalar::num(d), clock.clone()).unwrap()
        };
        let seq = Waveform::sequence([pulse(150e-9), pulse(150e-9)]);
        let segments = munch_dds(&seq).unwrap();
        assert_eq!(segments.len(), 2);
        assert_eq!(segments[0].ref_phase_rad, Some(0.0));
        let expected = clock_phase(&clock, 150e-9).unwrap();
        assert_eq!(segments[1].ref_phase_rad, Some(expected));
    }

    #[test]
    fn nested_sequences_are_flattened() {
        let inner = Waveform::sequence([Waveform::zero(1e-7), Waveform::zero(2e-7)]);
        let seq = Waveform::sequence([inner, Waveform::zero(3e-7)]);
        let segments = munch_dds(&seq).unwrap();
        assert_eq!(segments.len(), 3);
        assert_eq!(total_duration(&segments), 6e-7);
    }

    #[test]
    fn empty_and_zero_duration_sequences_munch_to_nothing() {
        assert!(munch_dds(&Waveform::sequence([])).unwrap().is_empty());
        let seq = Waveform::sequence([Waveform::zero(0.0)]);
        assert!(munch_dds(&seq).unwrap().is_empty());
    }

    #[test]
    fn unbound_variables_surface_as_eval_errors() {
        let sine = Waveform::sine(Scalar::var("a"), 1e6, 0.0, 1e-6);
        assert!(matches!(munch_dds(&sine), Err(TargetError::Eval(_))));
    }
}
