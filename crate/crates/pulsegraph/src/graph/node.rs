//! The node umbrella over scalars and waveforms: labeled child traversal,
//! edge paths, and reconstruction of nodes from rewritten children.

use super::duration::Duration;
use super::kind::{Category, Kind};
use super::scalar::{Scalar, ScalarView};
use super::waveform::{Waveform, WaveformView};

/// Label of a parent→child edge. Parameter edges carry the parameter name,
/// operator and sequence items carry their index, polynomial coefficients
/// carry `c0`, `c1`, ….
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    Index(usize),
    Name(&'static str),
    Coefficient(usize),
}

impl std::fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeLabel::Index(i) => write!(f, "{i}"),
            EdgeLabel::Name(name) => f.write_str(name),
            EdgeLabel::Coefficient(i) => write!(f, "c{i}"),
        }
    }
}

/// Root-to-node edge-label path, used in diagnostics. Displays as `$` for
/// the root and `$.items…` style segments below it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodePath(Vec<EdgeLabel>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, label: EdgeLabel) -> Self {
        let mut segments = self.0.clone();
        segments.push(label);
        NodePath(segments)
    }

    pub(crate) fn prepend(&mut self, label: EdgeLabel) {
        self.0.insert(0, label);
    }

    pub fn segments(&self) -> &[EdgeLabel] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for NodePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("$")?;
        for segment in &self.0 {
            write!(f, ".{segment}")?;
        }
        Ok(())
    }
}

/// Any graph node: a scalar or a waveform. Cloning is cheap (shared `Arc`s).
#[derive(Clone, PartialEq)]
pub enum Node {
    Scalar(Scalar),
    Waveform(Waveform),
}

impl std::fmt::Debug for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Node::Scalar(s) => write!(f, "{s:?}"),
            Node::Waveform(w) => write!(f, "{w:?}"),
        }
    }
}

impl From<Scalar> for Node {
    fn from(s: Scalar) -> Self {
        Node::Scalar(s)
    }
}

impl From<Waveform> for Node {
    fn from(w: Waveform) -> Self {
        Node::Waveform(w)
    }
}

impl Node {
    pub fn kind(&self) -> Kind {
        match self {
            Node::Scalar(s) => s.kind(),
            Node::Waveform(w) => w.kind(),
        }
    }

    pub fn category(&self) -> Category {
        match self {
            Node::Scalar(_) => Category::Scalar,
            Node::Waveform(_) => Category::Waveform,
        }
    }

    pub fn as_scalar(&self) -> Option<&Scalar> {
        match self {
            Node::Scalar(s) => Some(s),
            Node::Waveform(_) => None,
        }
    }

    pub fn as_waveform(&self) -> Option<&Waveform> {
        match self {
            Node::Waveform(w) => Some(w),
            Node::Scalar(_) => None,
        }
    }

    /// True when both refer to the same constructed node instance. Identity
    /// implies structural equality, never the other way around.
    pub fn ptr_eq(&self, other: &Node) -> bool {
        match (self, other) {
            (Node::Scalar(a), Node::Scalar(b)) => a.ptr_eq(b),
            (Node::Waveform(a), Node::Waveform(b)) => a.ptr_eq(b),
            _ => false,
        }
    }

    pub(crate) fn ptr_key(&self) -> usize {
        match self {
            Node::Scalar(s) => s.ptr_key(),
            Node::Waveform(w) => w.ptr_key(),
        }
    }

    /// Ordered, labeled children. Parameter edges come in declaration order
    /// with the configured duration last; an unbounded clock duration has no
    /// node to show and is omitted. Leaves return an empty list. The order
    /// and labels are deterministic for structurally equal nodes.
    pub fn children(&self) -> Vec<(EdgeLabel, Node)> {
        use EdgeLabel::{Coefficient, Index, Name};
        match self {
            Node::Scalar(s) => match s.view() {
                ScalarView::Num { .. } | ScalarView::Var { .. } => Vec::new(),
                ScalarView::Op { items, .. } => items
                    .iter()
                    .enumerate()
                    .map(|(i, item)| (Index(i), Node::Scalar(item.clone())))
                    .collect(),
            },
            Node::Waveform(w) => match w.view() {
                WaveformView::Const { value, duration } => vec![
                    (Name("value"), value.clone().into()),
                    (Name("duration"), duration.clone().into()),
                ],
                WaveformView::Zero { duration } => {
                    vec![(Name("duration"), duration.clone().into())]
                }
                WaveformView::Ramp {
                    start_value,
                    stop_value,
                    duration,
                } => vec![
                    (Name("start_value"), start_value.clone().into()),
                    (Name("stop_value"), stop_value.clone().into()),
                    (Name("duration"), duration.clone().into()),
                ],
                WaveformView::Triangle {
                    amplitude,
                    duration,
                } => vec![
                    (Name("amplitude"), amplitude.clone().into()),
                    (Name("duration"), duration.clone().into()),
                ],
                WaveformView::Gaussian {
                    amplitude,
                    sigma,
                    duration,
                } => vec![
                    (Name("amplitude"), amplitude.clone().into()),
                    (Name("sigma"), sigma.clone().into()),
                    (Name("duration"), duration.clone().into()),
                ],
                WaveformView::Clock {
                    frequency,
                    phase,
                    duration,
                } => {
                    let mut children = vec![
                        (Name("frequency"), frequency.clone().into()),
                        (Name("phase"), phase.clone().into()),
                    ];
                    if let Duration::Expr(d) = duration {
                        children.push((Name("duration"), d.clone().into()));
                    }
                    children
                }
                WaveformView::Sine {
                    amplitude,
                    frequency,
                    phase,
                    ref_clock,
                    duration,
                    ..
                } => {
                    let mut children = vec![
                        (Name("amplitude"), amplitude.clone().into()),
                        (Name("frequency"), frequency.clone().into()),
                        (Name("phase"), phase.clone().into()),
                    ];
                    if let Some(clock) = ref_clock {
                        children.push((Name("ref_clock"), clock.clone().into()));
                    }
                    children.push((Name("duration"), duration.clone().into()));
                    children
                }
                WaveformView::SineFm {
                    carrier,
                    modulation,
                    amplitude,
                    phase,
                    duration,
                }
                | WaveformView::SinePm {
                    carrier,
                    modulation,
                    amplitude,
                    phase,
                    duration,
                } => vec![
                    (Name("carrier"), carrier.clone().into()),
                    (Name("modulation"), modulation.clone().into()),
                    (Name("amplitude"), amplitude.clone().into()),
                    (Name("phase"), phase.clone().into()),
                    (Name("duration"), duration.clone().into()),
                ],
                WaveformView::Polynomial {
                    coefficients,
                    duration,
                } => {
                    let mut children: Vec<(EdgeLabel, Node)> = coefficients
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (Coefficient(i), c.clone().into()))
                        .collect();
                    children.push((Name("duration"), duration.clone().into()));
                    children
                }
                WaveformView::Power {
                    scale,
                    exponent,
                    duration,
                } => vec![
                    (Name("scale"), scale.clone().into()),
                    (Name("exponent"), exponent.clone().into()),
                    (Name("duration"), duration.clone().into()),
                ],
                WaveformView::Op { items, .. }
                | WaveformView::Sequence { items }
                | WaveformView::ClockSeq { items } => items
                    .iter()
                    .enumerate()
                    .map(|(i, item)| (Index(i), Node::Waveform(item.clone())))
                    .collect(),
            },
        }
    }
}

/// Why a node could not be reconstructed from rewritten children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RebuildError {
    /// A rewritten child crossed the scalar/waveform boundary.
    Category {
        at: EdgeLabel,
        expected: Category,
        got: Category,
    },
    /// A clock position (reference clock, carrier, clock-sequence item)
    /// received a non-clock waveform.
    ClockReplacement { at: EdgeLabel, got: Kind },
}

/// Reconstructs a node of the same kind as `original` with `children`
/// replacing the originals, in [`Node::children`] order. Positions keep
/// their category, and clock positions only admit clock-like waveforms.
pub(crate) fn rebuild(original: &Node, children: Vec<Node>) -> Result<Node, RebuildError> {
    let original_children = original.children();
    debug_assert_eq!(original_children.len(), children.len());
    for ((label, old), new) in original_children.iter().zip(&children) {
        if old.category() != new.category() {
            return Err(RebuildError::Category {
                at: *label,
                expected: old.category(),
                got: new.category(),
            });
        }
        if old.kind().is_clock_like()
            && clock_position(original, *label)
            && !new.kind().is_clock_like()
        {
            return Err(RebuildError::ClockReplacement {
                at: *label,
                got: new.kind(),
            });
        }
    }
    Ok(rebuild_unchecked(original, children))
}

/// True when the edge admits only clock-like waveforms.
fn clock_position(parent: &Node, label: EdgeLabel) -> bool {
    match parent.kind() {
        Kind::Sine => label == EdgeLabel::Name("ref_clock"),
        Kind::SineFm | Kind::SinePm => label == EdgeLabel::Name("carrier"),
        Kind::ClockSeq => true,
        _ => false,
    }
}

fn rebuild_unchecked(original: &Node, mut children: Vec<Node>) -> Node {
    let mut take_scalar = || match children.remove(0) {
        Node::Scalar(s) => s,
        Node::Waveform(_) => unreachable!("category checked above"),
    };
    match original {
        Node::Scalar(s) => match s.view() {
            ScalarView::Num { .. } | ScalarView::Var { .. } => original.clone(),
            ScalarView::Op { op, .. } => {
                let items = children
                    .into_iter()
                    .map(|n| match n {
                        Node::Scalar(s) => s,
                        Node::Waveform(_) => unreachable!("category checked above"),
                    })
                    .collect();
                Scalar::op(op, items).expect("same shape as original").into()
            }
        },
        Node::Waveform(w) => {
            let rebuilt: Waveform = match w.view() {
                WaveformView::Const { .. } => {
                    Waveform::constant(take_scalar(), take_scalar())
                }
                WaveformView::Zero { .. } => Waveform::zero(take_scalar()),
                WaveformView::Ramp { .. } => {
                    Waveform::ramp(take_scalar(), take_scalar(), take_scalar())
                }
                WaveformView::Triangle { .. } => {
                    Waveform::triangle(take_scalar(), take_scalar())
                }
                WaveformView::Gaussian { .. } => {
                    Waveform::gaussian(take_scalar(), take_scalar(), take_scalar())
                }
                WaveformView::Clock { duration, .. } => {
                    let frequency = take_scalar();
                    let phase = take_scalar();
                    let duration = match duration {
                        Duration::Expr(_) => Duration::Expr(take_scalar()),
                        Duration::Unbounded => Duration::Unbounded,
                    };
                    Waveform::clock(frequency, phase, duration)
                }
                WaveformView::Sine {
                    phase_mode,
                    ref_clock,
                    ..
                } => {
                    let mut take_waveform = || match children.remove(0) {
                        Node::Waveform(w) => w,
                        Node::Scalar(_) => unreachable!("category checked above"),
                    };
                    let amplitude = take_waveform();
                    let frequency = take_waveform();
                    let phase = take_waveform();
                    let clock = ref_clock.map(|_| take_waveform());
                    let duration = match children.remove(0) {
                        Node::Scalar(s) => s,
                        Node::Waveform(_) => unreachable!("category checked above"),
                    };
                    Waveform::sine_with_mode(
                        amplitude.into(),
                        frequency.into(),
                        phase.into(),
                        duration,
                        phase_mode,
                        clock,
                    )
                    .expect("mode/clock pairing preserved")
                }
                WaveformView::SineFm { .. } | WaveformView::SinePm { .. } => {
                    let is_fm = w.kind() == Kind::SineFm;
                    let mut take_waveform = || match children.remove(0) {
                        Node::Waveform(w) => w,
                        Node::Scalar(_) => unreachable!("category checked above"),
                    };
                    let carrier = take_waveform();
                    let modulation = take_waveform();
                    let amplitude = take_waveform();
                    let phase = take_waveform();
                    let duration = match children.remove(0) {
                        Node::Scalar(s) => s,
                        Node::Waveform(_) => unreachable!("category checked above"),
                    };
                    let build = if is_fm {
                        Waveform::sine_fm
                    } else {
                        Waveform::sine_pm
                    };
                    build(carrier, modulation, amplitude, phase, duration)
                        .expect("clock position checked above")
                }
                WaveformView::Polynomial { coefficients, .. } => {
                    let n = coefficients.len();
                    let coefficients: Vec<Scalar> =
                        (0..n).map(|_| take_scalar()).collect();
                    Waveform::polynomial(coefficients, take_scalar())
                }
                WaveformView::Power { .. } => {
                    Waveform::power(take_scalar(), take_scalar(), take_scalar())
                }
                WaveformView::Op { op, .. } => {
                    let items = waveform_items(children);
                    Waveform::op(op, items).expect("same shape as original")
                }
                WaveformView::Sequence { .. } => {
                    Waveform::sequence(waveform_items(children))
                }
                WaveformView::ClockSeq { .. } => {
                    Waveform::clock_seq(waveform_items(children))
                        .expect("clock items checked above")
                }
            };
            rebuilt.into()
        }
    }
}

fn waveform_items(children: Vec<Node>) -> Vec<Waveform> {
    children
        .into_iter()
        .map(|n| match n {
            Node::Waveform(w) => w,
            Node::Scalar(_) => unreachable!("category checked above"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaves_have_no_children() {
        assert!(Node::from(Scalar::num(5.0)).children().is_empty());
        assert!(Node::from(Scalar::var("foo")).children().is_empty());
    }

    #[test]
    fn operator_children_are_indexed_in_operand_order() {
        let sum = Scalar::num(2.0) + Scalar::var("foo");
        let children = Node::from(sum).children();
        assert_eq!(children.len(), 2);
        assert_eq!(children[0].0, EdgeLabel::Index(0));
        assert_eq!(children[0].1.as_scalar().unwrap().as_num(), Some(2.0));
        assert_eq!(children[1].0, EdgeLabel::Index(1));
        assert_eq!(children[1].1.as_scalar().unwrap().as_var(), Some("foo"));
    }

    #[test]
    fn parameter_children_are_labeled_by_name() {
        let c = Waveform::constant(1.0, 1e-6);
        let children = Node::from(c).children();
        let labels: Vec<String> = children.iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(labels, ["value", "duration"]);
    }

    #[test]
    fn unbounded_clock_omits_the_duration_edge() {
        let clock = Node::from(Waveform::clock(10e6, 0.0, Duration::Unbounded));
        let labels: Vec<String> = clock.children().iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(labels, ["frequency", "phase"]);
    }

    #[test]
    fn rebuild_keeps_kind_and_checks_categories() {
        let sum = Node::from(Scalar::num(1.0) + Scalar::var("foo"));
        let rebuilt = rebuild(
            &sum,
            vec![Scalar::num(1.0).into(), Scalar::num(2.0).into()],
        )
        .unwrap();
        assert_eq!(rebuilt.kind(), Kind::ScalarSum);

        let err = rebuild(
            &sum,
            vec![Scalar::num(1.0).into(), Waveform::zero(1e-6).into()],
        )
        .unwrap_err();
        assert!(matches!(err, RebuildError::Category { .. }));
    }

    #[test]
    fn clock_positions_reject_non_clock_waveforms() {
        let clock = Waveform::clock(10e6, 0.0, Duration::Unbounded);
        let sine =
            Waveform::sine_continuous(1.0, 10e6, 0.0, Scalar::num(1e-7), clock).unwrap();
        let node = Node::from(sine);
        let mut children: Vec<Node> = node.children().into_iter().map(|(_, c)| c).collect();
        children[3] = Waveform::zero(1e-7).into();
        let err = rebuild(&node, children).unwrap_err();
        assert!(matches!(
            err,
            RebuildError::ClockReplacement {
                at: EdgeLabel::Name("ref_clock"),
                got: Kind::Zero
            }
        ));
    }

    #[test]
    fn path_display_uses_dollar_root() {
        let path = NodePath::root()
            .child(EdgeLabel::Index(0))
            .child(EdgeLabel::Name("frequency"));
        assert_eq!(path.to_string(), "$.0.frequency");
        assert_eq!(NodePath::root().to_string(), "$");
    }
}
