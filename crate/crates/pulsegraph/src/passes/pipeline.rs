//! Pipelines: ordered pass sequences applied to graphs or whole schedules.

use std::any::Any;

use indexmap::IndexMap;

use super::builtin::{FoldConstants, Simplify, Substitute, Unbind, ValidateDurations};
use super::{transform, PassError};
use crate::graph::Node;
use crate::schedule::{Channel, ScheduleMap};

/// A named, clonable pipeline stage. `fresh` produces the per-run instance,
/// so stateful passes never leak state across runs or channels; `as_any`
/// lets callers downcast a used instance to inspect collected state.
pub trait Pass {
    fn name(&self) -> &str;
    fn fresh(&self) -> Box<dyn Pass>;
    fn run(&mut self, node: Node) -> Result<Node, PassError>;
    fn as_any(&self) -> &dyn Any;
}

macro_rules! transformer_pass {
    ($type:ty, $name:literal) => {
        impl Pass for $type {
            fn name(&self) -> &str {
                $name
            }
            fn fresh(&self) -> Box<dyn Pass> {
                Box::new(self.clone())
            }
            fn run(&mut self, node: Node) -> Result<Node, PassError> {
                transform(self, &node)
            }
            fn as_any(&self) -> &dyn Any {
                self
            }
        }
    };
}

transformer_pass!(Substitute, "substitute");
transformer_pass!(Unbind, "unbind");
transformer_pass!(FoldConstants, "fold");
transformer_pass!(Simplify, "simplify");

impl Pass for ValidateDurations {
    fn name(&self) -> &str {
        "validate"
    }
    fn fresh(&self) -> Box<dyn Pass> {
        Box::new(self.clone())
    }
    fn run(&mut self, node: Node) -> Result<Node, PassError> {
        ValidateDurations::check(&node)?;
        Ok(node)
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The result of one pipeline run: the final graph together with the pass
/// instances that produced it, in order, for state inspection.
pub struct PassResult {
    pub graph: Node,
    pub visitors: Vec<Box<dyn Pass>>,
}

/// A pipeline failure names the failing stage and carries its error (which
/// names the node path).
#[derive(Debug, thiserror::Error)]
#[error("pass {pass_index} ({pass_name}) failed: {source}")]
pub struct PipelineError {
    pub pass_index: usize,
    pub pass_name: String,
    pub source: PassError,
}

/// An ordered sequence of passes. Prototype passes are cloned fresh for
/// every run, and each stage feeds the next.
#[derive(Default)]
pub struct Pipeline {
    passes: Vec<Box<dyn Pass>>,
}

impl Pipeline {
    pub fn new() -> Self {
        Pipeline::default()
    }

    pub fn with(mut self, pass: impl Pass + 'static) -> Self {
        self.passes.push(Box::new(pass));
        self
    }

    pub fn push(&mut self, pass: Box<dyn Pass>) {
        self.passes.push(pass);
    }

    pub fn len(&self) -> usize {
        self.passes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passes.is_empty()
    }

    /// Runs fresh copies of every pass over the graph, in order.
    pub fn run(&self, graph: &Node) -> Result<PassResult, PipelineError> {
        let mut used: Vec<Box<dyn Pass>> = self.passes.iter().map(|p| p.fresh()).collect();
        let mut current = graph.clone();
        for (pass_index, pass) in used.iter_mut().enumerate() {
            current = pass.run(current).map_err(|source| PipelineError {
                pass_index,
                pass_name: pass.name().to_owned(),
                source,
            })?;
        }
        Ok(PassResult {
            graph: current,
            visitors: used,
        })
    }

    /// Runs an independent sub-pipeline (fresh pass instances) per channel.
    /// A failing channel aborts only its own result.
    pub fn run_schedule(
        &self,
        schedule: &ScheduleMap,
    ) -> IndexMap<Channel, Result<PassResult, PipelineError>> {
        schedule
            .iter()
            .map(|(channel, waveform)| {
                let result = self.run(&Node::Waveform(waveform.clone()));
                (channel.clone(), result)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Scalar;
    use std::collections::HashMap;

    fn foo_bindings() -> HashMap<String, f64> {
        HashMap::from([("foo".to_string(), 2.0)])
    }

    #[test]
    fn substitute_then_fold_produces_a_number() {
        let pipeline = Pipeline::new()
            .with(Substitute::new(foo_bindings()))
            .with(FoldConstants);
        let g = Node::from(Scalar::num(1.0) + Scalar::var("foo"));
        let result = pipeline.run(&g).unwrap();
        assert_eq!(result.graph, Node::from(Scalar::num(3.0)));
        assert_eq!(result.visitors.len(), 2);
        assert_eq!(result.visitors[1].name(), "fold");
    }

    #[test]
    fn empty_pipeline_is_the_identity() {
        let g = Node::from(Scalar::var("foo"));
        let result = Pipeline::new().run(&g).unwrap();
        assert!(result.graph.ptr_eq(&g));
    }

    #[test]
    fn used_passes_can_be_downcast() {
        let pipeline = Pipeline::new().with(Substitute::new(foo_bindings()));
        let result = pipeline.run(&Node::from(Scalar::var("foo"))).unwrap();
        assert!(result.visitors[0]
            .as_any()
            .downcast_ref::<Substitute>()
            .is_some());
    }

    #[test]
    fn schedule_channels_run_independent_sub_pipelines() {
        use crate::graph::Waveform;
        use crate::schedule::{Channel, Schedule};

        let ch1 = Channel::with_id("p1", "a");
        let ch2 = Channel::with_id("p2", "b");
        let mut s = Schedule::new();
        s.add(&ch1, Waveform::constant(Scalar::var("foo"), 1e-7)).unwrap();
        s.add(&ch2, Waveform::constant(2.0, 1e-7)).unwrap();
        let map = s.finalize().unwrap();

        let pipeline = Pipeline::new()
            .with(Substitute::new(foo_bindings()))
            .with(FoldConstants);
        let results = pipeline.run_schedule(&map);
        assert_eq!(results.len(), 2);
        for (channel, result) in &results {
            let result = result.as_ref().unwrap_or_else(|e| panic!("{channel:?}: {e}"));
            // Each channel got its own fresh pass instances.
            assert_eq!(result.visitors.len(), 2);
        }
    }
}
