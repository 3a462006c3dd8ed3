//! Analytic evaluation of fully-bound graphs: scalar resolution, clock phase
//! computation, pointwise waveform evaluation, and sample rendering.
//!
//! Everything here is a pure function over immutable inputs. Graphs must be
//! fully bound (no remaining variables) before they can be evaluated; binding
//! is a rewrite, see [`crate::passes::substitute`].
//!
//! Time conventions: clocks are anchored at the global origin `t = 0`, local
//! time is `τ = t − t_start`, and every waveform's domain is the half-open
//! interval `[t_start, t_start + d)` with value exactly `0.0` outside.

use std::f64::consts::TAU;

use crate::graph::{
    Duration, Kind, Scalar, ScalarOp, ScalarView, Waveform, WaveformOp, WaveformView,
};
use crate::graph::waveform::PhaseMode;

/// Errors raised during evaluation of a graph.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular power: negative exponent at the domain start")]
    SingularPower,
    #[error("waveform duration is unbounded")]
    UnboundedDuration,
    #[error("waveform duration resolved to {0} s, which is negative")]
    NegativeDuration(f64),
    #[error("clock phase requested at t = {0} s, before the clock origin")]
    NegativeClockTime(f64),
    #[error("expected a clock or clock sequence, got {0}")]
    NotAClock(Kind),
    #[error("sample rate must be positive, got {0}")]
    InvalidSampleRate(f64),
}

/// Evaluation context: the absolute start time of the waveform under
/// evaluation. Sequences shift it for their items; nothing else does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalContext {
    pub t_start: f64,
}

impl EvalContext {
    pub fn starting_at(t_start: f64) -> Self {
        EvalContext { t_start }
    }
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { t_start: 0.0 }
    }
}

/// Evaluates a fully-bound scalar with standard arithmetic semantics.
/// Variadic operators fold left to right.
pub fn resolve_scalar(s: &Scalar) -> Result<f64, EvalError> {
    match s.view() {
        ScalarView::Num { value } => Ok(value),
        ScalarView::Var { key } => Err(EvalError::UnboundVariable(key.to_owned())),
        ScalarView::Op { op, items } => {
            let mut values = items.iter().map(resolve_scalar);
            match op {
                ScalarOp::Sum => values.try_fold(0.0, |acc, v| Ok(acc + v?)),
                ScalarOp::Product => values.try_fold(1.0, |acc, v| Ok(acc * v?)),
                ScalarOp::Sub => {
                    let a = values.next().unwrap()?;
                    let b = values.next().unwrap()?;
                    Ok(a - b)
                }
                ScalarOp::Div => {
                    let a = values.next().unwrap()?;
                    let b = values.next().unwrap()?;
                    if b == 0.0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        Ok(a / b)
                    }
                }
                ScalarOp::Neg => Ok(-values.next().unwrap()?),
                ScalarOp::Min => {
                    let first = values.next().unwrap()?;
                    values.try_fold(first, |acc, v| Ok(acc.min(v?)))
                }
                ScalarOp::Max => {
                    let first = values.next().unwrap()?;
                    values.try_fold(first, |acc, v| Ok(acc.max(v?)))
                }
            }
        }
    }
}

/// Resolves a duration to seconds; `None` means unbounded.
pub fn resolve_duration(d: &Duration) -> Result<Option<f64>, EvalError> {
    match d {
        Duration::Expr(s) => resolve_scalar(s).map(Some),
        Duration::Unbounded => Ok(None),
    }
}

/// The accumulated phase of a clock or clock sequence at absolute time `tau`.
///
/// A clock has `Φ(τ) = 2π·f·τ + φ`. A clock sequence accumulates
/// `φ₀ + Σ_{i<k} 2π·fᵢ·dᵢ + 2π·f_k·(τ − T_k)` over its segments, where only
/// the first segment's phase parameter contributes; past the last finite
/// segment the phase extrapolates at the last frequency, so the accumulated
/// phase is continuous across every segment switch.
pub fn clock_phase(clock: &Waveform, tau: f64) -> Result<f64, EvalError> {
    if tau < 0.0 {
        return Err(EvalError::NegativeClockTime(tau));
    }
    match clock.view() {
        WaveformView::Clock {
            frequency, phase, ..
        } => {
            let f = resolve_scalar(frequency)?;
            let phi = resolve_scalar(phase)?;
            Ok(phi + TAU * f * tau)
        }
        WaveformView::ClockSeq { items } => {
            let mut acc = match items[0].view() {
                WaveformView::Clock { phase, .. } => resolve_scalar(phase)?,
                _ => unreachable!("clock sequences hold clocks"),
            };
            let mut segment_start = 0.0;
            let last = items.len() - 1;
            for (i, item) in items.iter().enumerate() {
                let (f, d) = match item.view() {
                    WaveformView::Clock {
                        frequency,
                        duration,
                        ..
                    } => (resolve_scalar(frequency)?, resolve_duration(duration)?),
                    _ => unreachable!("clock sequences hold clocks"),
                };
                let active = match d {
                    None => true,
                    Some(d) => i == last || tau < segment_start + d,
                };
                if active {
                    return Ok(acc + TAU * f * (tau - segment_start));
                }
                let d = d.expect("inactive segments are finite");
                acc += TAU * f * d;
                segment_start += d;
            }
            unreachable!("the last segment is always active")
        }
        _ => Err(EvalError::NotAClock(clock.kind())),
    }
}

/// Evaluates a fully-bound waveform at absolute time `t`.
///
/// Returns exactly `0.0` outside the waveform's resolved domain. Waveform
/// parameters are evaluated at the same absolute time with the host's start
/// time as their context.
pub fn value_at(w: &Waveform, t: f64, ctx: EvalContext) -> Result<f64, EvalError> {
    let duration = resolve_duration(&w.duration_expr())?;
    let tau = t - ctx.t_start;
    let inside = match duration {
        Some(d) => tau >= 0.0 && tau < d,
        None => tau >= 0.0,
    };
    if !inside {
        return Ok(0.0);
    }

    match w.view() {
        WaveformView::Const { value, .. } => resolve_scalar(value),
        WaveformView::Zero { .. } => Ok(0.0),
        WaveformView::Ramp {
            start_value,
            stop_value,
            ..
        } => {
            let d = duration.expect("ramps have finite durations");
            let start = resolve_scalar(start_value)?;
            let stop = resolve_scalar(stop_value)?;
            Ok(start + (stop - start) * (tau / d))
        }
        WaveformView::Triangle { amplitude, .. } => {
            let d = duration.expect("triangles have finite durations");
            let a = resolve_scalar(amplitude)?;
            Ok(a * (1.0 - (2.0 * tau / d - 1.0).abs()))
        }
        WaveformView::Gaussian {
            amplitude, sigma, ..
        } => {
            let d = duration.expect("gaussians have finite durations");
            let a = resolve_scalar(amplitude)?;
            let sigma = resolve_scalar(sigma)?;
            let centered = tau - d / 2.0;
            Ok(a * (-(centered * centered) / (2.0 * sigma * sigma)).exp())
        }
        WaveformView::Clock { .. } | WaveformView::ClockSeq { .. } => {
            // A clock's observable value is its unit-amplitude oscillation;
            // the phase argument is global, not start-relative.
            Ok(clock_phase(w, t)?.sin())
        }
        WaveformView::Sine {
            amplitude,
            frequency,
            phase,
            phase_mode,
            ref_clock,
            ..
        } => {
            let a = value_at(amplitude, t, ctx)?;
            let f = value_at(frequency, t, ctx)?;
            let p = value_at(phase, t, ctx)?;
            let offset = match phase_mode {
                PhaseMode::Absolute => 0.0,
                PhaseMode::Continuous => {
                    clock_phase(ref_clock.expect("continuous sines carry a clock"), ctx.t_start)?
                }
            };
            Ok(a * (offset + TAU * f * tau + p).sin())
        }
        WaveformView::SineFm {
            carrier,
            modulation,
            amplitude,
            phase,
            ..
        } => {
            let a = value_at(amplitude, t, ctx)?;
            let m = value_at(modulation, t, ctx)?;
            let p = value_at(phase, t, ctx)?;
            let f_carrier = carrier_frequency(carrier)?;
            let offset = clock_phase(carrier, ctx.t_start)?;
            let f = f_carrier + m;
            Ok(a * (offset + TAU * f * tau + p).sin())
        }
        WaveformView::SinePm {
            carrier,
            modulation,
            amplitude,
            phase,
            ..
        } => {
            let a = value_at(amplitude, t, ctx)?;
            let m = value_at(modulation, t, ctx)?;
            let p = value_at(phase, t, ctx)?;
            let f_carrier = carrier_frequency(carrier)?;
            let offset = clock_phase(carrier, ctx.t_start)?;
            Ok(a * (offset + TAU * f_carrier * tau + m + p).sin())
        }
        WaveformView::Polynomial { coefficients, .. } => {
            let mut acc = 0.0;
            for c in coefficients.iter().rev() {
                acc = acc * tau + resolve_scalar(c)?;
            }
            Ok(acc)
        }
        WaveformView::Power {
            scale, exponent, ..
        } => {
            let scale = resolve_scalar(scale)?;
            let exponent = resolve_scalar(exponent)?;
            if tau == 0.0 && exponent < 0.0 {
                return Err(EvalError::SingularPower);
            }
            Ok(scale * tau.powf(exponent))
        }
        WaveformView::Op { op, items } => match op {
            WaveformOp::Sum => items
                .iter()
                .map(|item| value_at(item, t, ctx))
                .try_fold(0.0, |acc, v| Ok(acc + v?)),
            WaveformOp::Sub => {
                Ok(value_at(&items[0], t, ctx)? - value_at(&items[1], t, ctx)?)
            }
            WaveformOp::Product => items
                .iter()
                .map(|item| value_at(item, t, ctx))
                .try_fold(1.0, |acc, v| Ok(acc * v?)),
            WaveformOp::Div => {
                let a = value_at(&items[0], t, ctx)?;
                let b = value_at(&items[1], t, ctx)?;
                if b == 0.0 {
                    Err(EvalError::DivisionByZero)
                } else {
                    Ok(a / b)
                }
            }
            WaveformOp::Neg => Ok(-value_at(&items[0], t, ctx)?),
        },
        WaveformView::Sequence { items } => {
            let mut item_start = ctx.t_start;
            for item in items {
                let d = resolve_duration(&item.duration_expr())?;
                let active = match d {
                    Some(d) => t >= item_start && t < item_start + d,
                    None => t >= item_start,
                };
                if active {
                    return value_at(item, t, EvalContext { t_start: item_start });
                }
                if let Some(d) = d {
                    item_start += d;
                }
            }
            Ok(0.0)
        }
    }
}

fn carrier_frequency(carrier: &Waveform) -> Result<f64, EvalError> {
    match carrier.view() {
        WaveformView::Clock { frequency, .. } => resolve_scalar(frequency),
        _ => Err(EvalError::NotAClock(carrier.kind())),
    }
}

/// A rendered block of samples: `values[k]` was taken at `t0 + k/sample_rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    pub sample_rate: f64,
    pub t0: f64,
    pub values: Vec<f64>,
}

impl SampleBlock {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The absolute sample time of index `k`.
    pub fn time_of(&self, k: usize) -> f64 {
        self.t0 + k as f64 / self.sample_rate
    }
}

/// Number of left-edge samples covering a duration: `ceil(d·rate)`, with a
/// relative tolerance so exact products are not pushed up a sample by
/// floating-point noise.
pub(crate) fn sample_count(duration: f64, sample_rate: f64) -> usize {
    let n = duration * sample_rate;
    let nearest = n.round();
    if (n - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        n.ceil() as usize
    }
}

/// Renders a fully-bound, finite waveform at the given sample rate with
/// left-edge sampling.
pub fn render(w: &Waveform, sample_rate: f64, t0: f64) -> Result<SampleBlock, EvalError> {
    if !(sample_rate > 0.0) {
        return Err(EvalError::InvalidSampleRate(sample_rate));
    }
    let duration = resolve_duration(&w.duration_expr())?.ok_or(EvalError::UnboundedDuration)?;
    if duration < 0.0 {
        return Err(EvalError::NegativeDuration(duration));
    }
    let ctx = EvalContext { t_start: t0 };
    let values = (0..sample_count(duration, sample_rate))
        .map(|k| value_at(w, t0 + k as f64 / sample_rate, ctx))
        .collect::<Result<Vec<f64>, EvalError>>()?;
    Ok(SampleBlock {
        sample_rate,
        t0,
        values,
    })
}

/// Expands a frequency-modulated sine into the equivalent continuous-mode
/// sine: the carrier becomes the reference clock and the frequency becomes
/// `carrier frequency + modulation`. Returns `None` for other node kinds.
///
/// The expanded node's configured duration is the original's effective
/// duration, so the two render identically everywhere.
pub fn expand_sine_fm(w: &Waveform) -> Option<Waveform> {
    match w.view() {
        WaveformView::SineFm {
            carrier,
            modulation,
            amplitude,
            phase,
            duration,
        } => {
            let f_carrier = match carrier.view() {
                WaveformView::Clock { frequency, .. } => frequency.clone(),
                _ => unreachable!("carriers are clocks"),
            };
            let frequency = Waveform::sum_of([
                Waveform::constant(f_carrier, duration.clone()),
                modulation.clone(),
            ])
            .expect("two operands");
            let effective = w
                .duration_expr()
                .expr()
                .expect("modulated sines have bounded durations")
                .clone();
            Some(
                Waveform::sine_continuous(
                    amplitude.clone(),
                    frequency,
                    phase.clone(),
                    effective,
                    carrier.clone(),
                )
                .expect("carrier is a clock"),
            )
        }
        _ => None,
    }
}

/// Expands a phase-modulated sine into the equivalent continuous-mode sine:
/// the carrier becomes the reference clock, the frequency the carrier
/// frequency, and the phase `modulation + phase`. Returns `None` for other
/// node kinds.
pub fn expand_sine_pm(w: &Waveform) -> Option<Waveform> {
    match w.view() {
        WaveformView::SinePm {
            carrier,
            modulation,
            amplitude,
            phase,
            duration,
        } => {
            let f_carrier = match carrier.view() {
                WaveformView::Clock { frequency, .. } => frequency.clone(),
                _ => unreachable!("carriers are clocks"),
            };
            let new_phase = Waveform::sum_of([modulation.clone(), phase.clone()])
                .expect("two operands");
            let effective = w
                .duration_expr()
                .expr()
                .expect("modulated sines have bounded durations")
                .clone();
            Some(
                Waveform::sine_continuous(
                    amplitude.clone(),
                    Waveform::constant(f_carrier, duration.clone()),
                    new_phase,
                    effective,
                    carrier.clone(),
                )
                .expect("carrier is a clock"),
            )
        }
        _ => None,
    }
}
