//! The built-in passes: variable substitution and unbinding, constant
//! folding, operator simplification, and duration validation.

use std::collections::{HashMap, HashSet};

use super::{transform, PassError, Rewrite, Transformer};
use crate::eval::resolve_duration;
use crate::graph::{Kind, Node, Scalar, ScalarOp, ScalarView, Waveform, WaveformView};

/// Rewrites every variable whose key is bound to a number carrying its
/// origin key, so [`Unbind`] can reverse the rewrite. Unmatched variables
/// are left untouched, and a second run with the same bindings is the
/// identity (already-substituted numbers are not revisited).
#[derive(Debug, Clone, Default)]
pub struct Substitute {
    bindings: HashMap<String, f64>,
}

impl Substitute {
    pub fn new(bindings: HashMap<String, f64>) -> Self {
        Substitute { bindings }
    }

    pub fn bind(mut self, key: impl Into<String>, value: f64) -> Self {
        self.bindings.insert(key.into(), value);
        self
    }
}

impl Transformer for Substitute {
    fn transform(&mut self, kind: Kind, node: &Node) -> Result<Rewrite, PassError> {
        if kind != Kind::Var {
            return Ok(Rewrite::Reject);
        }
        let key = node.as_scalar().and_then(Scalar::as_var).expect("Var node");
        match self.bindings.get(key) {
            Some(value) => Ok(Rewrite::Replace(
                Scalar::num_with_origin(*value, key).into(),
            )),
            None => Ok(Rewrite::Reject),
        }
    }
}

/// Reverts substituted numbers back to variables for the given keys;
/// `unbind(substitute(g, m), keys(m))` is structurally equal to `g`.
#[derive(Debug, Clone, Default)]
pub struct Unbind {
    keys: HashSet<String>,
}

impl Unbind {
    pub fn new(keys: HashSet<String>) -> Self {
        Unbind { keys }
    }
}

impl Transformer for Unbind {
    fn transform(&mut self, kind: Kind, node: &Node) -> Result<Rewrite, PassError> {
        if kind != Kind::Num {
            return Ok(Rewrite::Reject);
        }
        match node.as_scalar().and_then(Scalar::origin_key) {
            Some(key) if self.keys.contains(key) => {
                Ok(Rewrite::Replace(Scalar::var(key).into()))
            }
            _ => Ok(Rewrite::Reject),
        }
    }
}

/// Folds scalar operators over numbers: an operator whose items are all
/// numbers becomes a single number, and the variadic commutative operators
/// (sum, product, min, max) combine their number items into one, placed
/// last. The canonical last position makes folding confluent with
/// [`Simplify`]'s identity-dropping. Division by zero is left unfolded for
/// evaluation to report.
#[derive(Debug, Clone, Default)]
pub struct FoldConstants;

impl Transformer for FoldConstants {
    fn transform(&mut self, kind: Kind, node: &Node) -> Result<Rewrite, PassError> {
        if kind != Kind::ScalarOperator {
            return Ok(Rewrite::Reject);
        }
        let scalar = node.as_scalar().expect("scalar operator");
        let ScalarView::Op { op, items } = scalar.view() else {
            unreachable!("operator kinds have operator views");
        };
        let nums: Vec<Option<f64>> = items.iter().map(Scalar::as_num).collect();

        if nums.iter().all(Option::is_some) {
            let values: Vec<f64> = nums.iter().map(|n| n.unwrap()).collect();
            if let Some(folded) = fold_values(op, &values) {
                return Ok(Rewrite::Replace(Scalar::num(folded).into()));
            }
            return Ok(Rewrite::Reject);
        }

        let commutative = matches!(
            op,
            ScalarOp::Sum | ScalarOp::Product | ScalarOp::Min | ScalarOp::Max
        );
        let known = nums.iter().flatten().count();
        if !commutative || known == 0 {
            return Ok(Rewrite::Reject);
        }
        if known == 1 && nums.last().unwrap().is_some() {
            return Ok(Rewrite::Reject); // already canonical
        }
        let values: Vec<f64> = nums.iter().flatten().copied().collect();
        let folded = fold_values(op, &values).expect("commutative fold is total");
        let mut new_items: Vec<Scalar> = items
            .iter()
            .filter(|item| item.as_num().is_none())
            .cloned()
            .collect();
        new_items.push(Scalar::num(folded));
        let rebuilt = Scalar::op(op, new_items).expect("at least one item remains");
        Ok(Rewrite::Replace(rebuilt.into()))
    }
}

/// Arithmetic of a fully-known operator, matching the left-to-right folds of
/// [`resolve_scalar`]. Returns `None` only for division by zero.
fn fold_values(op: ScalarOp, values: &[f64]) -> Option<f64> {
    Some(match op {
        ScalarOp::Sum => values.iter().fold(0.0, |acc, v| acc + v),
        ScalarOp::Product => values.iter().fold(1.0, |acc, v| acc * v),
        ScalarOp::Sub => values[0] - values[1],
        ScalarOp::Div => {
            if values[1] == 0.0 {
                return None;
            }
            values[0] / values[1]
        }
        ScalarOp::Neg => -values[0],
        ScalarOp::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        ScalarOp::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Structural simplification: flattens nested variadic operators of the same
/// kind, drops additive-zero and multiplicative-one numbers, collapses
/// single-item variadic operators, cancels double negation, and removes
/// zero-duration sequence items (including the zero paddings schedules
/// insert) once their durations resolve. Values and durations are preserved.
#[derive(Debug, Clone, Default)]
pub struct Simplify;

impl Transformer for Simplify {
    fn transform(&mut self, kind: Kind, node: &Node) -> Result<Rewrite, PassError> {
        match kind {
            Kind::ScalarOperator => Ok(simplify_scalar(node.as_scalar().expect("scalar"))),
            Kind::WaveformOperator => {
                Ok(simplify_waveform(node.as_waveform().expect("waveform")))
            }
            _ => Ok(Rewrite::Reject),
        }
    }
}

fn simplify_scalar(scalar: &Scalar) -> Rewrite {
    let ScalarView::Op { op, items } = scalar.view() else {
        unreachable!("operator kinds have operator views");
    };

    if op == ScalarOp::Neg {
        if let ScalarView::Op {
            op: ScalarOp::Neg,
            items: inner,
        } = items[0].view()
        {
            return Rewrite::Replace(inner[0].clone().into());
        }
        return Rewrite::Reject;
    }
    let variadic = op.arity().is_none();
    if !variadic {
        return Rewrite::Reject;
    }

    let mut changed = false;
    let mut flattened: Vec<Scalar> = Vec::with_capacity(items.len());
    for item in items {
        match item.view() {
            ScalarView::Op {
                op: child_op,
                items: child_items,
            } if child_op == op => {
                changed = true;
                flattened.extend(child_items.iter().cloned());
            }
            _ => flattened.push(item.clone()),
        }
    }

    let identity = match op {
        ScalarOp::Sum => Some(0.0),
        ScalarOp::Product => Some(1.0),
        _ => None,
    };
    if let Some(identity) = identity {
        let kept: Vec<Scalar> = flattened
            .iter()
            .filter(|s| s.as_num() != Some(identity))
            .cloned()
            .collect();
        if kept.len() != flattened.len() {
            changed = true;
            flattened = kept;
        }
        if flattened.is_empty() {
            return Rewrite::Replace(Scalar::num(identity).into());
        }
    }

    if flattened.len() == 1 {
        return Rewrite::Replace(flattened.swap_remove(0).into());
    }
    if changed {
        let rebuilt = Scalar::op(op, flattened).expect("two or more items");
        return Rewrite::Replace(rebuilt.into());
    }
    Rewrite::Reject
}

fn simplify_waveform(waveform: &Waveform) -> Rewrite {
    match waveform.view() {
        WaveformView::Op {
            op: crate::graph::WaveformOp::Neg,
            items,
        } => {
            if let WaveformView::Op {
                op: crate::graph::WaveformOp::Neg,
                items: inner,
            } = items[0].view()
            {
                return Rewrite::Replace(inner[0].clone().into());
            }
            Rewrite::Reject
        }
        WaveformView::Op { op, items } if op.arity().is_none() => {
            let mut changed = false;
            let mut flattened: Vec<Waveform> = Vec::with_capacity(items.len());
            for item in items {
                match item.view() {
                    WaveformView::Op {
                        op: child_op,
                        items: child_items,
                    } if child_op == op => {
                        changed = true;
                        flattened.extend(child_items.iter().cloned());
                    }
                    _ => flattened.push(item.clone()),
                }
            }
            if flattened.len() == 1 {
                return Rewrite::Replace(flattened.swap_remove(0).into());
            }
            if changed {
                let rebuilt = Waveform::op(op, flattened).expect("two or more items");
                return Rewrite::Replace(rebuilt.into());
            }
            Rewrite::Reject
        }
        WaveformView::Sequence { items } => {
            let mut changed = false;
            let mut kept: Vec<Waveform> = Vec::with_capacity(items.len());
            for item in items {
                if let WaveformView::Sequence { items: nested } = item.view() {
                    changed = true;
                    kept.extend(nested.iter().cloned());
                    continue;
                }
                // Items whose duration is known to be exactly zero occupy an
                // empty domain and shift nothing; drop them.
                if resolve_duration(&item.duration_expr()) == Ok(Some(0.0)) {
                    changed = true;
                    continue;
                }
                kept.push(item.clone());
            }
            if kept.len() == 1 {
                return Rewrite::Replace(kept.swap_remove(0).into());
            }
            if changed {
                return Rewrite::Replace(Waveform::sequence(kept).into());
            }
            Rewrite::Reject
        }
        _ => Rewrite::Reject,
    }
}

/// Fails when any waveform node's resolved duration is negative, naming the
/// node. Used as the `validate` pipeline pass; the schedule-level form that
/// reports per-channel violations is [`crate::schedule::validate`].
#[derive(Debug, Clone, Default)]
pub struct ValidateDurations;

impl ValidateDurations {
    pub(crate) fn check(node: &Node) -> Result<(), PassError> {
        let violations = match node {
            Node::Waveform(w) => {
                crate::schedule::validate_waveform(w).map_err(PassError::from)?
            }
            Node::Scalar(_) => Vec::new(),
        };
        match violations.first() {
            None => Ok(()),
            Some(first) => {
                let mut message = format!(
                    "{} violation(s): {} at {} resolves to {} s",
                    violations.len(),
                    first.kind,
                    first.path,
                    first.duration_s
                );
                for v in violations.iter().skip(1) {
                    message.push_str(&format!(
                        "; {} at {} resolves to {} s",
                        v.kind, v.path, v.duration_s
                    ));
                }
                Err(PassError::custom(message))
            }
        }
    }
}

/// Substitutes `bindings` into the graph; unmatched variables stay.
pub fn substitute(root: &Node, bindings: &HashMap<String, f64>) -> Node {
    transform(&mut Substitute::new(bindings.clone()), root)
        .expect("substitution preserves node categories")
}

/// Reverts substituted numbers with origin keys in `keys` back to variables.
pub fn unbind(root: &Node, keys: &HashSet<String>) -> Node {
    transform(&mut Unbind::new(keys.clone()), root)
        .expect("unbinding preserves node categories")
}

/// Folds constant scalar subexpressions; effective with unbound variables
/// present.
pub fn fold_constants(root: &Node) -> Node {
    transform(&mut FoldConstants, root).expect("folding preserves node categories")
}

/// Applies the structural simplification rules once, bottom-up.
pub fn simplify(root: &Node) -> Node {
    transform(&mut Simplify, root).expect("simplification preserves node categories")
}
