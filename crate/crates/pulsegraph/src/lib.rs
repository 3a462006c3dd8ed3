//! A target-independent, graph-based intermediate representation for
//! pulse-level control.
//!
//! Pulses are immutable directed acyclic graphs of parameterized waveforms
//! and scalars. The graph keeps high-level structure (frequencies, phases,
//! modulation, phase-synchronization clocks, unresolved variables) all the
//! way to lowering, where backends either render samples, extract DDS
//! frequency/amplitude/phase segments by maximal munch, or export DOT.
//!
//! The crate is organized along the compilation flow:
//!
//! - [`graph`]: node types, construction, the symbolic duration algebra;
//! - [`eval`]: analytic evaluation, clock phases, sample rendering;
//! - [`schedule`]: channels and nested sequential/parallel time contexts;
//! - [`passes`]: visitors, transformers, substitution, folding,
//!   simplification, pipelines;
//! - [`targets`]: DOT export, sample emission, DDS segment extraction;
//! - [`json`]: the serialized form consumed by the command-line compiler.
//!
//! ```
//! use pulsegraph::graph::{Scalar, Waveform};
//! use pulsegraph::eval::render;
//!
//! // A 10 MHz pulse with a triangular frequency sweep on top.
//! let frequency = Scalar::num(10e6) + Waveform::triangle(2e6, 0.4e-6);
//! let pulse = Waveform::sine(1.0, frequency, 0.0, 0.4e-6);
//! let block = render(&pulse, 1e9, 0.0).unwrap();
//! assert_eq!(block.len(), 400);
//! ```
//!
//! The mdbook-format guide under `book/` walks through each subsystem; its
//! code listings are compiled and run as doc-tests.

pub mod eval;
pub mod graph;
pub mod json;
pub mod passes;
pub mod schedule;
pub mod targets;

pub use graph::{
    Category, Duration, EdgeLabel, GraphError, Kind, Node, NodePath, PhaseMode, Scalar,
    ScalarOp, Waveform, WaveformArg, WaveformOp,
};
pub use schedule::{Channel, Schedule, ScheduleMap};
