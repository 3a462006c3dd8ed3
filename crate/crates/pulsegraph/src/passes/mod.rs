//! Graph traversal and rewriting: visitors, transformers, the built-in
//! passes, and pipelines.
//!
//! Dispatch is by kind lineage: for each node the driver offers the kinds of
//! [`Kind::lineage`] to the handler, most specific first, and the first
//! answer that is not [`VisitFlow::Reject`] / [`Rewrite::Reject`] wins. A
//! handler registered for an abstract kind (say [`Kind::ScalarOperator`])
//! therefore fires for every scalar operator unless something more specific
//! claimed the node first, and a handler may reject a node it inspected to
//! push the search onward. When the whole lineage rejects, the generic
//! behavior applies: visitors recurse into children, transformers
//! reconstruct the node from its (already rewritten) children.

mod builtin;
mod pipeline;

pub use builtin::{
    fold_constants, simplify, substitute, unbind, FoldConstants, Simplify, Substitute, Unbind,
    ValidateDurations,
};
pub use pipeline::{Pass, PassResult, Pipeline, PipelineError};

use crate::eval::EvalError;
use crate::graph::node::{rebuild, RebuildError};
use crate::graph::{Category, EdgeLabel, Kind, Node, NodePath};

/// A pass-level error, carrying the root-to-node edge-label path of the
/// node it was raised at.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("at {path}: {kind}")]
pub struct PassError {
    pub path: NodePath,
    pub kind: PassErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PassErrorKind {
    #[error("handler returned a {got} for a {expected} node")]
    Category { expected: Category, got: Category },
    #[error("clock position received a {got}")]
    ClockReplacement { got: Kind },
    #[error(transparent)]
    Eval(EvalError),
    #[error("{0}")]
    Custom(String),
}

impl PassError {
    pub fn new(kind: PassErrorKind) -> Self {
        PassError {
            path: NodePath::root(),
            kind,
        }
    }

    pub fn custom(message: impl Into<String>) -> Self {
        PassError::new(PassErrorKind::Custom(message.into()))
    }

    fn at_child(mut self, label: EdgeLabel) -> Self {
        self.path.prepend(label);
        self
    }

    fn from_rebuild(err: RebuildError) -> Self {
        match err {
            RebuildError::Category { at, expected, got } => PassError {
                path: NodePath::root().child(at),
                kind: PassErrorKind::Category { expected, got },
            },
            RebuildError::ClockReplacement { at, got } => PassError {
                path: NodePath::root().child(at),
                kind: PassErrorKind::ClockReplacement { got },
            },
        }
    }
}

impl From<EvalError> for PassError {
    fn from(err: EvalError) -> Self {
        PassError::new(PassErrorKind::Eval(err))
    }
}

/// Handler verdict for a visitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VisitFlow {
    /// Handled; continue into the node's children.
    Descend,
    /// Handled; do not descend.
    Prune,
    /// Not handled at this lineage kind; continue the search.
    Reject,
}

/// A read-only graph traversal. The handler is offered each lineage kind in
/// turn and may accumulate state on `self`; a full-lineage rejection falls
/// back to the generic behavior of descending into children.
pub trait Visitor {
    fn visit(&mut self, kind: Kind, node: &Node) -> Result<VisitFlow, PassError>;
}

/// Depth-first traversal of `root`, dispatching `visitor` at every node.
/// The graph itself is returned unchanged; errors carry the node path.
pub fn visit<V: Visitor + ?Sized>(visitor: &mut V, root: &Node) -> Result<(), PassError> {
    let mut flow = VisitFlow::Descend;
    for kind in root.kind().lineage() {
        match visitor.visit(*kind, root)? {
            VisitFlow::Reject => continue,
            handled => {
                flow = handled;
                break;
            }
        }
    }
    if flow == VisitFlow::Descend {
        for (label, child) in root.children() {
            visit(visitor, &child).map_err(|e| e.at_child(label))?;
        }
    }
    Ok(())
}

/// Handler verdict for a transformer.
#[derive(Debug, Clone)]
pub enum Rewrite {
    /// Not handled at this lineage kind; continue the search.
    Reject,
    /// Replace the node. Returning a clone of the offered node (the identical
    /// instance) means "unchanged".
    Replace(Node),
}

/// A graph rewriter. Children are rewritten before their parent, the parent
/// is reconstructed when any child changed, and the (reconstructed) parent
/// is then offered to the handler, so handlers always see already-rewritten
/// children. Handlers must stay within the node's category: a scalar may
/// only become a scalar, a waveform only a waveform, and clock positions
/// only accept clocks.
pub trait Transformer {
    fn transform(&mut self, kind: Kind, node: &Node) -> Result<Rewrite, PassError>;
}

/// Bottom-up rewrite of `root`. A transformer that changes nothing returns
/// the identical root instance.
pub fn transform<T: Transformer + ?Sized>(
    transformer: &mut T,
    root: &Node,
) -> Result<Node, PassError> {
    let children = root.children();
    let mut new_children = Vec::with_capacity(children.len());
    let mut changed = false;
    for (label, child) in &children {
        let new_child = transform(transformer, child).map_err(|e| e.at_child(*label))?;
        changed |= !new_child.ptr_eq(child);
        new_children.push(new_child);
    }
    let rebuilt = if changed {
        rebuild(root, new_children).map_err(PassError::from_rebuild)?
    } else {
        root.clone()
    };

    for kind in rebuilt.kind().lineage() {
        match transformer.transform(*kind, &rebuilt)? {
            Rewrite::Reject => continue,
            Rewrite::Replace(replacement) => {
                if replacement.category() != rebuilt.category() {
                    return Err(PassError::new(PassErrorKind::Category {
                        expected: rebuilt.category(),
                        got: replacement.category(),
                    }));
                }
                return Ok(replacement);
            }
        }
    }
    Ok(rebuilt)
}
