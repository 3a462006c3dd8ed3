//! Node kinds and the static kind-lineage table used for visitor dispatch.
//!
//! Every concrete node carries a [`Kind`]. A kind's *lineage* is the ordered
//! list of kinds a visitor tries when dispatching a handler, most specific
//! first. Lineages are fixed at build time: regular nodes end in [`Kind::Node`],
//! operator nodes end in [`Kind::OperatorNode`], and every lineage contains
//! exactly one of the category kinds [`Kind::Scalar`] / [`Kind::Waveform`].

/// Category of a node: time-independent scalar or time-dependent waveform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Scalar,
    Waveform,
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Category::Scalar => f.write_str("scalar"),
            Category::Waveform => f.write_str("waveform"),
        }
    }
}

/// All node kinds: concrete kinds name actual graph nodes, abstract kinds
/// (`Scalar`, `Waveform`, `ScalarOperator`, `WaveformOperator`, `OperatorNode`,
/// `Node`) exist only as dispatch targets in lineages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    // Scalar leaves.
    Num,
    Var,
    // Scalar operators.
    ScalarSum,
    ScalarProduct,
    ScalarSub,
    ScalarDiv,
    ScalarNeg,
    ScalarMin,
    ScalarMax,
    // Regular waveforms.
    Const,
    Zero,
    Ramp,
    Triangle,
    Gaussian,
    Clock,
    Sine,
    SineFm,
    SinePm,
    Polynomial,
    Power,
    // Waveform operators.
    WaveformSum,
    WaveformProduct,
    WaveformSub,
    WaveformDiv,
    WaveformNeg,
    Sequence,
    ClockSeq,
    // Abstract kinds.
    Scalar,
    Waveform,
    ScalarOperator,
    WaveformOperator,
    OperatorNode,
    Node,
}

use Kind::*;

impl Kind {
    /// The dispatch lineage for this kind, most specific first.
    ///
    /// Abstract kinds have a single-entry lineage (themselves); they never
    /// appear as the kind of a constructed node.
    pub fn lineage(self) -> &'static [Kind] {
        match self {
            Num => &[Num, Scalar, Node],
            Var => &[Var, Scalar, Node],
            ScalarSum => &[ScalarSum, ScalarOperator, Scalar, OperatorNode],
            ScalarProduct => &[ScalarProduct, ScalarOperator, Scalar, OperatorNode],
            ScalarSub => &[ScalarSub, ScalarOperator, Scalar, OperatorNode],
            ScalarDiv => &[ScalarDiv, ScalarOperator, Scalar, OperatorNode],
            ScalarNeg => &[ScalarNeg, ScalarOperator, Scalar, OperatorNode],
            ScalarMin => &[ScalarMin, ScalarOperator, Scalar, OperatorNode],
            ScalarMax => &[ScalarMax, ScalarOperator, Scalar, OperatorNode],
            Const => &[Const, Waveform, Node],
            Zero => &[Zero, Waveform, Node],
            Ramp => &[Ramp, Waveform, Node],
            Triangle => &[Triangle, Waveform, Node],
            Gaussian => &[Gaussian, Waveform, Node],
            Clock => &[Clock, Waveform, Node],
            Sine => &[Sine, Waveform, Node],
            SineFm => &[SineFm, Sine, Waveform, Node],
            SinePm => &[SinePm, Sine, Waveform, Node],
            Polynomial => &[Polynomial, Waveform, Node],
            Power => &[Power, Waveform, Node],
            WaveformSum => &[WaveformSum, WaveformOperator, Waveform, OperatorNode],
            WaveformProduct => &[WaveformProduct, WaveformOperator, Waveform, OperatorNode],
            WaveformSub => &[WaveformSub, WaveformOperator, Waveform, OperatorNode],
            WaveformDiv => &[WaveformDiv, WaveformOperator, Waveform, OperatorNode],
            WaveformNeg => &[WaveformNeg, WaveformOperator, Waveform, OperatorNode],
            Sequence => &[Sequence, WaveformOperator, Waveform, OperatorNode],
            ClockSeq => &[ClockSeq, WaveformOperator, Waveform, OperatorNode],
            Scalar => &[Scalar],
            Waveform => &[Waveform],
            ScalarOperator => &[ScalarOperator],
            WaveformOperator => &[WaveformOperator],
            OperatorNode => &[OperatorNode],
            Node => &[Node],
        }
    }

    /// Canonical name, as used in handler tables, diagnostics, and DOT labels.
    pub fn name(self) -> &'static str {
        match self {
            Num => "Num",
            Var => "Var",
            ScalarSum => "ScalarSum",
            ScalarProduct => "ScalarProduct",
            ScalarSub => "ScalarSub",
            ScalarDiv => "ScalarDiv",
            ScalarNeg => "ScalarNeg",
            ScalarMin => "ScalarMin",
            ScalarMax => "ScalarMax",
            Const => "Const",
            Zero => "Zero",
            Ramp => "Ramp",
            Triangle => "Triangle",
            Gaussian => "Gaussian",
            Clock => "Clock",
            Sine => "Sine",
            SineFm => "SineFM",
            SinePm => "SinePM",
            Polynomial => "Polynomial",
            Power => "Power",
            WaveformSum => "WaveformSum",
            WaveformProduct => "WaveformProduct",
            WaveformSub => "WaveformSub",
            WaveformDiv => "WaveformDiv",
            WaveformNeg => "WaveformNeg",
            Sequence => "Sequence",
            ClockSeq => "ClockSeq",
            Scalar => "Scalar",
            Waveform => "Waveform",
            ScalarOperator => "ScalarOperator",
            WaveformOperator => "WaveformOperator",
            OperatorNode => "OperatorNode",
            Node => "Node",
        }
    }

    /// The node category this kind belongs to; `None` for the rooting
    /// abstract kinds (`OperatorNode`, `Node`).
    pub fn category(self) -> Option<Category> {
        if self.lineage().contains(&Scalar) {
            Some(Category::Scalar)
        } else if self.lineage().contains(&Waveform) {
            Some(Category::Waveform)
        } else {
            None
        }
    }

    /// True for kinds that constructed nodes can carry.
    pub fn is_concrete(self) -> bool {
        !matches!(
            self,
            Scalar | Waveform | ScalarOperator | WaveformOperator | OperatorNode | Node
        )
    }

    /// True for clock-like kinds, which are the only ones admitted in
    /// reference-clock positions.
    pub fn is_clock_like(self) -> bool {
        matches!(self, Clock | ClockSeq)
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
