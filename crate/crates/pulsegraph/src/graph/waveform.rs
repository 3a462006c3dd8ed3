//! Time-dependent value graphs: the waveform catalog, waveform operators,
//! sequences, and clocks.
//!
//! Every waveform is defined on the half-open domain
//! `[t_start, t_start + d)` and is exactly `0.0` outside it. The effective
//! duration `d` is a symbolic expression combining the configured duration
//! with the durations of waveform-valued parameters; see
//! [`Waveform::duration_expr`].

use std::sync::Arc;

use super::duration::Duration;
use super::kind::Kind;
use super::scalar::Scalar;
use super::GraphError;

/// Phase interpretation for oscillating waveforms.
///
/// `Absolute` phase is insensitive to the waveform's start time: every
/// instance starts its oscillation from the phase parameter. `Continuous`
/// phase adds the phase a reference clock has accumulated by the waveform's
/// start time, so pulses separated in time stay coherent with the clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    Absolute,
    Continuous,
}

impl std::fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseMode::Absolute => f.write_str("absolute"),
            PhaseMode::Continuous => f.write_str("continuous"),
        }
    }
}

/// The waveform operator set. `Sequence` and `ClockSeq` are separate kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveformOp {
    Sum,
    Product,
    Sub,
    Div,
    Neg,
}

impl WaveformOp {
    pub fn kind(self) -> Kind {
        match self {
            WaveformOp::Sum => Kind::WaveformSum,
            WaveformOp::Product => Kind::WaveformProduct,
            WaveformOp::Sub => Kind::WaveformSub,
            WaveformOp::Div => Kind::WaveformDiv,
            WaveformOp::Neg => Kind::WaveformNeg,
        }
    }

    pub fn arity(self) -> Option<usize> {
        match self {
            WaveformOp::Sub | WaveformOp::Div => Some(2),
            WaveformOp::Neg => Some(1),
            WaveformOp::Sum | WaveformOp::Product => None,
        }
    }
}

#[derive(Debug)]
pub(crate) enum WaveformRepr {
    Const {
        value: Scalar,
        duration: Scalar,
    },
    Zero {
        duration: Scalar,
    },
    Ramp {
        start_value: Scalar,
        stop_value: Scalar,
        duration: Scalar,
    },
    Triangle {
        amplitude: Scalar,
        duration: Scalar,
    },
    Gaussian {
        amplitude: Scalar,
        sigma: Scalar,
        duration: Scalar,
    },
    Clock {
        frequency: Scalar,
        phase: Scalar,
        duration: Duration,
    },
    Sine {
        amplitude: Waveform,
        frequency: Waveform,
        phase: Waveform,
        phase_mode: PhaseMode,
        ref_clock: Option<Waveform>,
        duration: Scalar,
    },
    SineFm {
        carrier: Waveform,
        modulation: Waveform,
        amplitude: Waveform,
        phase: Waveform,
        duration: Scalar,
    },
    SinePm {
        carrier: Waveform,
        modulation: Waveform,
        amplitude: Waveform,
        phase: Waveform,
        duration: Scalar,
    },
    Polynomial {
        coefficients: Vec<Scalar>,
        duration: Scalar,
    },
    Power {
        scale: Scalar,
        exponent: Scalar,
        duration: Scalar,
    },
    Op {
        op: WaveformOp,
        items: Vec<Waveform>,
    },
    Sequence {
        items: Vec<Waveform>,
    },
    ClockSeq {
        items: Vec<Waveform>,
    },
}

/// An immutable waveform node.
#[derive(Clone)]
pub struct Waveform {
    pub(crate) repr: Arc<WaveformRepr>,
}

/// Borrowed view of a waveform node, for exhaustive matching.
#[derive(Debug, Clone, Copy)]
pub enum WaveformView<'a> {
    Const {
        value: &'a Scalar,
        duration: &'a Scalar,
    },
    Zero {
        duration: &'a Scalar,
    },
    Ramp {
        start_value: &'a Scalar,
        stop_value: &'a Scalar,
        duration: &'a Scalar,
    },
    Triangle {
        amplitude: &'a Scalar,
        duration: &'a Scalar,
    },
    Gaussian {
        amplitude: &'a Scalar,
        sigma: &'a Scalar,
        duration: &'a Scalar,
    },
    Clock {
        frequency: &'a Scalar,
        phase: &'a Scalar,
        duration: &'a Duration,
    },
    Sine {
        amplitude: &'a Waveform,
        frequency: &'a Waveform,
        phase: &'a Waveform,
        phase_mode: PhaseMode,
        ref_clock: Option<&'a Waveform>,
        duration: &'a Scalar,
    },
    SineFm {
        carrier: &'a Waveform,
        modulation: &'a Waveform,
        amplitude: &'a Waveform,
        phase: &'a Waveform,
        duration: &'a Scalar,
    },
    SinePm {
        carrier: &'a Waveform,
        modulation: &'a Waveform,
        amplitude: &'a Waveform,
        phase: &'a Waveform,
        duration: &'a Scalar,
    },
    Polynomial {
        coefficients: &'a [Scalar],
        duration: &'a Scalar,
    },
    Power {
        scale: &'a Scalar,
        exponent: &'a Scalar,
        duration: &'a Scalar,
    },
    Op {
        op: WaveformOp,
        items: &'a [Waveform],
    },
    Sequence {
        items: &'a [Waveform],
    },
    ClockSeq {
        items: &'a [Waveform],
    },
}

/// Argument accepted in waveform-parameter positions.
///
/// Scalars (and raw numbers) are implicitly promoted to `Const` waveforms
/// whose duration equals the host waveform's configured duration.
#[derive(Debug, Clone)]
pub enum WaveformArg {
    Scalar(Scalar),
    Waveform(Waveform),
}

impl WaveformArg {
    fn promote(self, host_duration: &Scalar) -> Waveform {
        match self {
            WaveformArg::Scalar(s) => Waveform::constant(s, host_duration.clone()),
            WaveformArg::Waveform(w) => w,
        }
    }
}

impl From<f64> for WaveformArg {
    fn from(value: f64) -> Self {
        WaveformArg::Scalar(Scalar::num(value))
    }
}

impl From<i32> for WaveformArg {
    fn from(value: i32) -> Self {
        WaveformArg::Scalar(Scalar::num(value as f64))
    }
}

impl From<Scalar> for WaveformArg {
    fn from(s: Scalar) -> Self {
        WaveformArg::Scalar(s)
    }
}

impl From<&Scalar> for WaveformArg {
    fn from(s: &Scalar) -> Self {
        WaveformArg::Scalar(s.clone())
    }
}

impl From<Waveform> for WaveformArg {
    fn from(w: Waveform) -> Self {
        WaveformArg::Waveform(w)
    }
}

impl From<&Waveform> for WaveformArg {
    fn from(w: &Waveform) -> Self {
        WaveformArg::Waveform(w.clone())
    }
}

impl Waveform {
    fn from_repr(repr: WaveformRepr) -> Self {
        Waveform {
            repr: Arc::new(repr),
        }
    }

    /// A constant value over the given duration.
    pub fn constant(value: impl Into<Scalar>, duration: impl Into<Scalar>) -> Self {
        Waveform::from_repr(WaveformRepr::Const {
            value: value.into(),
            duration: duration.into(),
        })
    }

    /// A constant zero; the canonical padding waveform.
    pub fn zero(duration: impl Into<Scalar>) -> Self {
        Waveform::from_repr(WaveformRepr::Zero {
            duration: duration.into(),
        })
    }

    /// Linear ramp from `start_value` at the domain start to `stop_value` at
    /// the (excluded) domain end.
    pub fn ramp(
        start_value: impl Into<Scalar>,
        stop_value: impl Into<Scalar>,
        duration: impl Into<Scalar>,
    ) -> Self {
        Waveform::from_repr(WaveformRepr::Ramp {
            start_value: start_value.into(),
            stop_value: stop_value.into(),
            duration: duration.into(),
        })
    }

    /// Triangle: zero at both domain edges, peaking at `amplitude` at the
    /// domain midpoint.
    pub fn triangle(amplitude: impl Into<Scalar>, duration: impl Into<Scalar>) -> Self {
        Waveform::from_repr(WaveformRepr::Triangle {
            amplitude: amplitude.into(),
            duration: duration.into(),
        })
    }

    /// Gaussian `a·exp(−(τ−d/2)²/(2σ²))` centered at the domain midpoint,
    /// with no truncation renormalization.
    pub fn gaussian(
        amplitude: impl Into<Scalar>,
        sigma: impl Into<Scalar>,
        duration: impl Into<Scalar>,
    ) -> Self {
        Waveform::from_repr(WaveformRepr::Gaussian {
            amplitude: amplitude.into(),
            sigma: sigma.into(),
            duration: duration.into(),
        })
    }

    /// A reference clock with phase `Φ(τ) = 2π·f·τ + φ`, anchored at the
    /// global time origin `t = 0`. Clocks may be unbounded.
    pub fn clock(
        frequency: impl Into<Scalar>,
        phase: impl Into<Scalar>,
        duration: impl Into<Duration>,
    ) -> Self {
        Waveform::from_repr(WaveformRepr::Clock {
            frequency: frequency.into(),
            phase: phase.into(),
            duration: duration.into(),
        })
    }

    /// A sequence of clocks accumulating phase at a piecewise rate. All items
    /// must be clocks with finite duration, except optionally the last. The
    /// sequence's initial phase offset is the first clock's phase; later
    /// items' phase parameters are ignored in favor of continuity.
    pub fn clock_seq(items: Vec<Waveform>) -> Result<Self, GraphError> {
        if items.is_empty() {
            return Err(GraphError::EmptyClockSeq);
        }
        let last = items.len() - 1;
        for (i, item) in items.iter().enumerate() {
            if item.kind() != Kind::Clock {
                return Err(GraphError::ClockSeqItem {
                    index: i,
                    got: item.kind(),
                });
            }
            if i != last {
                if let WaveformView::Clock { duration, .. } = item.view() {
                    if duration.is_unbounded() {
                        return Err(GraphError::UnboundedClockSeqItem { index: i });
                    }
                }
            }
        }
        Ok(Waveform::from_repr(WaveformRepr::ClockSeq { items }))
    }

    /// An absolute-phase sine `a(t)·sin(2π·f(t)·τ + p(t))` with local time
    /// `τ = t − t_start`. Scalar arguments promote to `Const` waveforms of
    /// the configured duration.
    pub fn sine(
        amplitude: impl Into<WaveformArg>,
        frequency: impl Into<WaveformArg>,
        phase: impl Into<WaveformArg>,
        duration: impl Into<Scalar>,
    ) -> Self {
        let duration = duration.into();
        Waveform::from_repr(WaveformRepr::Sine {
            amplitude: amplitude.into().promote(&duration),
            frequency: frequency.into().promote(&duration),
            phase: phase.into().promote(&duration),
            phase_mode: PhaseMode::Absolute,
            ref_clock: None,
            duration,
        })
    }

    /// A continuous-phase sine: the reference clock's accumulated phase at
    /// the waveform's start time is added to the oscillation, and the phase
    /// parameter is relative to that offset.
    pub fn sine_continuous(
        amplitude: impl Into<WaveformArg>,
        frequency: impl Into<WaveformArg>,
        phase: impl Into<WaveformArg>,
        duration: impl Into<Scalar>,
        ref_clock: Waveform,
    ) -> Result<Self, GraphError> {
        Waveform::sine_with_mode(
            amplitude.into(),
            frequency.into(),
            phase.into(),
            duration.into(),
            PhaseMode::Continuous,
            Some(ref_clock),
        )
    }

    /// General sine constructor; validates the phase-mode/reference-clock
    /// pairing. Continuous mode requires a clock; absolute mode forbids one.
    pub fn sine_with_mode(
        amplitude: WaveformArg,
        frequency: WaveformArg,
        phase: WaveformArg,
        duration: Scalar,
        phase_mode: PhaseMode,
        ref_clock: Option<Waveform>,
    ) -> Result<Self, GraphError> {
        let ref_clock = match (phase_mode, ref_clock) {
            (PhaseMode::Continuous, None) => return Err(GraphError::MissingRefClock),
            (PhaseMode::Absolute, Some(_)) => return Err(GraphError::UnexpectedRefClock),
            (_, clock) => clock,
        };
        if let Some(clock) = &ref_clock {
            if !clock.kind().is_clock_like() {
                return Err(GraphError::NotAClock { got: clock.kind() });
            }
        }
        Ok(Waveform::from_repr(WaveformRepr::Sine {
            amplitude: amplitude.promote(&duration),
            frequency: frequency.promote(&duration),
            phase: phase.promote(&duration),
            phase_mode,
            ref_clock,
            duration,
        }))
    }

    /// A frequency-modulated sine on a carrier clock. The modulation is in Hz
    /// relative to the carrier frequency, and the carrier doubles as the
    /// reference clock.
    pub fn sine_fm(
        carrier: Waveform,
        modulation: impl Into<WaveformArg>,
        amplitude: impl Into<WaveformArg>,
        phase: impl Into<WaveformArg>,
        duration: impl Into<Scalar>,
    ) -> Result<Self, GraphError> {
        if carrier.kind() != Kind::Clock {
            return Err(GraphError::NotAClock { got: carrier.kind() });
        }
        let duration = duration.into();
        Ok(Waveform::from_repr(WaveformRepr::SineFm {
            carrier,
            modulation: modulation.into().promote(&duration),
            amplitude: amplitude.into().promote(&duration),
            phase: phase.into().promote(&duration),
            duration,
        }))
    }

    /// A phase-modulated sine on a carrier clock. The modulation is in
    /// radians relative to the carrier's phase.
    pub fn sine_pm(
        carrier: Waveform,
        modulation: impl Into<WaveformArg>,
        amplitude: impl Into<WaveformArg>,
        phase: impl Into<WaveformArg>,
        duration: impl Into<Scalar>,
    ) -> Result<Self, GraphError> {
        if carrier.kind() != Kind::Clock {
            return Err(GraphError::NotAClock { got: carrier.kind() });
        }
        let duration = duration.into();
        Ok(Waveform::from_repr(WaveformRepr::SinePm {
            carrier,
            modulation: modulation.into().promote(&duration),
            amplitude: amplitude.into().promote(&duration),
            phase: phase.into().promote(&duration),
            duration,
        }))
    }

    /// Time-domain polynomial `Σ cᵢ·(t − t_start)ⁱ` over the coefficients in
    /// ascending power order.
    pub fn polynomial(
        coefficients: impl IntoIterator<Item = impl Into<Scalar>>,
        duration: impl Into<Scalar>,
    ) -> Self {
        Waveform::from_repr(WaveformRepr::Polynomial {
            coefficients: coefficients.into_iter().map(Into::into).collect(),
            duration: duration.into(),
        })
    }

    /// Time-domain power function `scale·(t − t_start)^exponent`.
    pub fn power(
        scale: impl Into<Scalar>,
        exponent: impl Into<Scalar>,
        duration: impl Into<Scalar>,
    ) -> Self {
        Waveform::from_repr(WaveformRepr::Power {
            scale: scale.into(),
            exponent: exponent.into(),
            duration: duration.into(),
        })
    }

    /// Generic operator constructor; checks arity.
    pub fn op(op: WaveformOp, items: Vec<Waveform>) -> Result<Self, GraphError> {
        match op.arity() {
            Some(n) if items.len() != n => Err(GraphError::Arity {
                kind: op.kind(),
                expected: n,
                got: items.len(),
            }),
            None if items.is_empty() => Err(GraphError::EmptyOperands { kind: op.kind() }),
            _ => Ok(Waveform::from_repr(WaveformRepr::Op { op, items })),
        }
    }

    pub fn sum_of(items: impl IntoIterator<Item = Waveform>) -> Result<Self, GraphError> {
        Waveform::op(WaveformOp::Sum, items.into_iter().collect())
    }

    pub fn product_of(items: impl IntoIterator<Item = Waveform>) -> Result<Self, GraphError> {
        Waveform::op(WaveformOp::Product, items.into_iter().collect())
    }

    /// Concatenation: items play back to back, each shifted by the summed
    /// durations of its predecessors. Zero items are allowed.
    pub fn sequence(items: impl IntoIterator<Item = Waveform>) -> Self {
        Waveform::from_repr(WaveformRepr::Sequence {
            items: items.into_iter().collect(),
        })
    }

    pub fn kind(&self) -> Kind {
        match &*self.repr {
            WaveformRepr::Const { .. } => Kind::Const,
            WaveformRepr::Zero { .. } => Kind::Zero,
            WaveformRepr::Ramp { .. } => Kind::Ramp,
            WaveformRepr::Triangle { .. } => Kind::Triangle,
            WaveformRepr::Gaussian { .. } => Kind::Gaussian,
            WaveformRepr::Clock { .. } => Kind::Clock,
            WaveformRepr::Sine { .. } => Kind::Sine,
            WaveformRepr::SineFm { .. } => Kind::SineFm,
            WaveformRepr::SinePm { .. } => Kind::SinePm,
            WaveformRepr::Polynomial { .. } => Kind::Polynomial,
            WaveformRepr::Power { .. } => Kind::Power,
            WaveformRepr::Op { op, .. } => op.kind(),
            WaveformRepr::Sequence { .. } => Kind::Sequence,
            WaveformRepr::ClockSeq { .. } => Kind::ClockSeq,
        }
    }

    pub fn view(&self) -> WaveformView<'_> {
        match &*self.repr {
            WaveformRepr::Const { value, duration } => WaveformView::Const { value, duration },
            WaveformRepr::Zero { duration } => WaveformView::Zero { duration },
            WaveformRepr::Ramp {
                start_value,
                stop_value,
                duration,
            } => WaveformView::Ramp {
                start_value,
                stop_value,
                duration,
            },
            WaveformRepr::Triangle {
                amplitude,
                duration,
            } => WaveformView::Triangle {
                amplitude,
                duration,
            },
            WaveformRepr::Gaussian {
                amplitude,
                sigma,
                duration,
            } => WaveformView::Gaussian {
                amplitude,
                sigma,
                duration,
            },
            WaveformRepr::Clock {
                frequency,
                phase,
                duration,
            } => WaveformView::Clock {
                frequency,
                phase,
                duration,
            },
            WaveformRepr::Sine {
                amplitude,
                frequency,
                phase,
                phase_mode,
                ref_clock,
                duration,
            } => WaveformView::Sine {
                amplitude,
                frequency,
                phase,
                phase_mode: *phase_mode,
                ref_clock: ref_clock.as_ref(),
                duration,
            },
            WaveformRepr::SineFm {
                carrier,
                modulation,
                amplitude,
                phase,
                duration,
            } => WaveformView::SineFm {
                carrier,
                modulation,
                amplitude,
                phase,
                duration,
            },
            WaveformRepr::SinePm {
                carrier,
                modulation,
                amplitude,
                phase,
                duration,
            } => WaveformView::SinePm {
                carrier,
                modulation,
                amplitude,
                phase,
                duration,
            },
            WaveformRepr::Polynomial {
                coefficients,
                duration,
            } => WaveformView::Polynomial {
                coefficients,
                duration,
            },
            WaveformRepr::Power {
                scale,
                exponent,
                duration,
            } => WaveformView::Power {
                scale,
                exponent,
                duration,
            },
            WaveformRepr::Op { op, items } => WaveformView::Op { op: *op, items },
            WaveformRepr::Sequence { items } => WaveformView::Sequence { items },
            WaveformRepr::ClockSeq { items } => WaveformView::ClockSeq { items },
        }
    }

    /// The configured duration stored on the node, if this kind carries one.
    /// Operators and sequences derive their duration from their items.
    pub fn configured_duration(&self) -> Option<Duration> {
        match &*self.repr {
            WaveformRepr::Const { duration, .. }
            | WaveformRepr::Zero { duration }
            | WaveformRepr::Ramp { duration, .. }
            | WaveformRepr::Triangle { duration, .. }
            | WaveformRepr::Gaussian { duration, .. }
            | WaveformRepr::Sine { duration, .. }
            | WaveformRepr::SineFm { duration, .. }
            | WaveformRepr::SinePm { duration, .. }
            | WaveformRepr::Polynomial { duration, .. }
            | WaveformRepr::Power { duration, .. } => {
                Some(Duration::Expr(duration.clone()))
            }
            WaveformRepr::Clock { duration, .. } => Some(duration.clone()),
            WaveformRepr::Op { .. }
            | WaveformRepr::Sequence { .. }
            | WaveformRepr::ClockSeq { .. } => None,
        }
    }

    /// The symbolic effective duration.
    ///
    /// Leaf kinds with waveform parameters take the minimum of the configured
    /// duration and the parameter durations ("a waveform is only defined
    /// within a domain where all its parameters are defined"). Products and
    /// divisions take the minimum over items, sums and subtractions the
    /// maximum, sequences the sum. Reference clocks and carriers do not limit
    /// the domain. Construction is symbolic and never fails.
    pub fn duration_expr(&self) -> Duration {
        match &*self.repr {
            WaveformRepr::Sine {
                amplitude,
                frequency,
                phase,
                duration,
                ..
            } => Duration::min_of([
                Duration::Expr(duration.clone()),
                amplitude.duration_expr(),
                frequency.duration_expr(),
                phase.duration_expr(),
            ]),
            WaveformRepr::SineFm {
                modulation,
                amplitude,
                phase,
                duration,
                ..
            }
            | WaveformRepr::SinePm {
                modulation,
                amplitude,
                phase,
                duration,
                ..
            } => Duration::min_of([
                Duration::Expr(duration.clone()),
                modulation.duration_expr(),
                amplitude.duration_expr(),
                phase.duration_expr(),
            ]),
            WaveformRepr::Op { op, items } => {
                let durations = items.iter().map(|w| w.duration_expr());
                match op {
                    WaveformOp::Product | WaveformOp::Div => Duration::min_of(durations),
                    WaveformOp::Sum | WaveformOp::Sub => Duration::max_of(durations),
                    WaveformOp::Neg => items[0].duration_expr(),
                }
            }
            WaveformRepr::Sequence { items } | WaveformRepr::ClockSeq { items } => {
                Duration::sum_of(items.iter().map(|w| w.duration_expr()))
            }
            _ => self.configured_duration().expect("leaf kinds carry a duration"),
        }
    }

    /// True when both handles point at the same constructed node instance.
    pub fn ptr_eq(&self, other: &Waveform) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr)
    }

    pub(crate) fn ptr_key(&self) -> usize {
        Arc::as_ptr(&self.repr) as usize
    }

    /// Duration used when promoting a scalar operand in operator syntax;
    /// panics for unbounded operands, where no promotion duration exists.
    fn promotion_duration(&self) -> Scalar {
        match self.duration_expr() {
            Duration::Expr(s) => s,
            Duration::Unbounded => panic!(
                "cannot promote a scalar against an unbounded waveform; \
                 construct the Const waveform explicitly"
            ),
        }
    }
}

impl PartialEq for Waveform {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        use WaveformRepr as R;
        match (&*self.repr, &*other.repr) {
            (
                R::Const {
                    value: v1,
                    duration: d1,
                },
                R::Const {
                    value: v2,
                    duration: d2,
                },
            ) => v1 == v2 && d1 == d2,
            (R::Zero { duration: d1 }, R::Zero { duration: d2 }) => d1 == d2,
            (
                R::Ramp {
                    start_value: a1,
                    stop_value: b1,
                    duration: d1,
                },
                R::Ramp {
                    start_value: a2,
                    stop_value: b2,
                    duration: d2,
                },
            ) => a1 == a2 && b1 == b2 && d1 == d2,
            (
                R::Triangle {
                    amplitude: a1,
                    duration: d1,
                },
                R::Triangle {
                    amplitude: a2,
                    duration: d2,
                },
            ) => a1 == a2 && d1 == d2,
            (
                R::Gaussian {
                    amplitude: a1,
                    sigma: s1,
                    duration: d1,
                },
                R::Gaussian {
                    amplitude: a2,
                    sigma: s2,
                    duration: d2,
                },
            ) => a1 == a2 && s1 == s2 && d1 == d2,
            (
                R::Clock {
                    frequency: f1,
                    phase: p1,
                    duration: d1,
                },
                R::Clock {
                    frequency: f2,
                    phase: p2,
                    duration: d2,
                },
            ) => f1 == f2 && p1 == p2 && d1 == d2,
            (
                R::Sine {
                    amplitude: a1,
                    frequency: f1,
                    phase: p1,
                    phase_mode: m1,
                    ref_clock: c1,
                    duration: d1,
                },
                R::Sine {
                    amplitude: a2,
                    frequency: f2,
                    phase: p2,
                    phase_mode: m2,
                    ref_clock: c2,
                    duration: d2,
                },
            ) => a1 == a2 && f1 == f2 && p1 == p2 && m1 == m2 && c1 == c2 && d1 == d2,
            (
                R::SineFm {
                    carrier: c1,
                    modulation: m1,
                    amplitude: a1,
                    phase: p1,
                    duration: d1,
                },
                R::SineFm {
                    carrier: c2,
                    modulation: m2,
                    amplitude: a2,
                    phase: p2,
                    duration: d2,
                },
            )
            | (
                R::SinePm {
                    carrier: c1,
                    modulation: m1,
                    amplitude: a1,
                    phase: p1,
                    duration: d1,
                },
                R::SinePm {
                    carrier: c2,
                    modulation: m2,
                    amplitude: a2,
                    phase: p2,
                    duration: d2,
                },
            ) => c1 == c2 && m1 == m2 && a1 == a2 && p1 == p2 && d1 == d2,
            (
                R::Polynomial {
                    coefficients: c1,
                    duration: d1,
                },
                R::Polynomial {
                    coefficients: c2,
                    duration: d2,
                },
            ) => c1 == c2 && d1 == d2,
            (
                R::Power {
                    scale: s1,
                    exponent: e1,
                    duration: d1,
                },
                R::Power {
                    scale: s2,
                    exponent: e2,
                    duration: d2,
                },
            ) => s1 == s2 && e1 == e2 && d1 == d2,
            (
                R::Op {
                    op: o1,
                    items: i1,
                },
                R::Op {
                    op: o2,
                    items: i2,
                },
            ) => o1 == o2 && i1 == i2,
            (R::Sequence { items: i1 }, R::Sequence { items: i2 }) => i1 == i2,
            (R::ClockSeq { items: i1 }, R::ClockSeq { items: i2 }) => i1 == i2,
            _ => false,
        }
    }
}

impl std::fmt::Debug for Waveform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.kind())?;
        let children = crate::graph::node::Node::Waveform(self.clone()).children();
        f.write_str("(")?;
        for (i, (label, child)) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label}: {child:?}")?;
        }
        f.write_str(")")
    }
}

macro_rules! waveform_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait for Waveform {
            type Output = Waveform;
            fn $method(self, rhs: Waveform) -> Waveform {
                Waveform::op($op, vec![self, rhs]).expect("binary waveform operator")
            }
        }
        impl std::ops::$trait<&Waveform> for &Waveform {
            type Output = Waveform;
            fn $method(self, rhs: &Waveform) -> Waveform {
                Waveform::op($op, vec![self.clone(), rhs.clone()])
                    .expect("binary waveform operator")
            }
        }
        impl std::ops::$trait<f64> for Waveform {
            type Output = Waveform;
            fn $method(self, rhs: f64) -> Waveform {
                let dur = self.promotion_duration();
                Waveform::op($op, vec![self, Waveform::constant(rhs, dur)])
                    .expect("binary waveform operator")
            }
        }
        impl std::ops::$trait<Waveform> for f64 {
            type Output = Waveform;
            fn $method(self, rhs: Waveform) -> Waveform {
                let dur = rhs.promotion_duration();
                Waveform::op($op, vec![Waveform::constant(self, dur), rhs])
                    .expect("binary waveform operator")
            }
        }
        impl std::ops::$trait<Scalar> for Waveform {
            type Output = Waveform;
            fn $method(self, rhs: Scalar) -> Waveform {
                let dur = self.promotion_duration();
                Waveform::op($op, vec![self, Waveform::constant(rhs, dur)])
                    .expect("binary waveform operator")
            }
        }
        impl std::ops::$trait<Waveform> for Scalar {
            type Output = Waveform;
            fn $method(self, rhs: Waveform) -> Waveform {
                let dur = rhs.promotion_duration();
                Waveform::op($op, vec![Waveform::constant(self, dur), rhs])
                    .expect("binary waveform operator")
            }
        }
    };
}

waveform_binop!(Add, add, WaveformOp::Sum);
waveform_binop!(Mul, mul, WaveformOp::Product);
waveform_binop!(Sub, sub, WaveformOp::Sub);
waveform_binop!(Div, div, WaveformOp::Div);

impl<R> std::ops::AddAssign<R> for Waveform
where
    Waveform: std::ops::Add<R, Output = Waveform>,
{
    fn add_assign(&mut self, rhs: R) {
        *self = self.clone() + rhs;
    }
}

impl<R> std::ops::MulAssign<R> for Waveform
where
    Waveform: std::ops::Mul<R, Output = Waveform>,
{
    fn mul_assign(&mut self, rhs: R) {
        *self = self.clone() * rhs;
    }
}

impl std::ops::Neg for Waveform {
    type Output = Waveform;
    fn neg(self) -> Waveform {
        Waveform::op(WaveformOp::Neg, vec![self]).expect("unary minus")
    }
}

impl std::ops::Neg for &Waveform {
    type Output = Waveform;
    fn neg(self) -> Waveform {
        Waveform::op(WaveformOp::Neg, vec![self.clone()]).expect("unary minus")
    }
}
