//! Channels, schedules, and nested sequential/parallel time contexts.
//!
//! A schedule is built through a stack of time contexts and finalizes into
//! one waveform per channel, all with the same symbolic duration. Waveform
//! durations may still contain variables while the schedule is built, so
//! padding durations are *symbolic* scalars (max/sub expressions) and are
//! never resolved at build time. Once everything is bound, a padding that
//! resolves negative marks a scheduling violation; see [`validate`].

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use indexmap::IndexMap;

use crate::eval::{resolve_duration, EvalError};
use crate::graph::{Duration, Kind, Node, NodePath, Scalar, Waveform};

/// An abstract analog output line. Channels are identifiers: equality and
/// hashing use only the id, the label is display metadata and need not be
/// unique.
#[derive(Clone)]
pub struct Channel {
    inner: Arc<ChannelInner>,
}

struct ChannelInner {
    id: String,
    label: String,
}

static NEXT_CHANNEL: AtomicU64 = AtomicU64::new(0);

impl Channel {
    /// A fresh channel with a process-unique id.
    pub fn new(label: impl Into<String>) -> Self {
        let id = format!("ch{}", NEXT_CHANNEL.fetch_add(1, Ordering::Relaxed));
        Channel::with_id(id, label)
    }

    /// A channel with an explicit id, as used by serialized schedules.
    pub fn with_id(id: impl Into<String>, label: impl Into<String>) -> Self {
        Channel {
            inner: Arc::new(ChannelInner {
                id: id.into(),
                label: label.into(),
            }),
        }
    }

    pub fn id(&self) -> &str {
        &self.inner.id
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }
}

impl PartialEq for Channel {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for Channel {}

impl std::hash::Hash for Channel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.id.hash(state);
    }
}

impl std::fmt::Debug for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Channel({} {:?})", self.inner.id, self.inner.label)
    }
}

/// Errors from schedule construction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("the root context cannot be closed; finalize the schedule instead")]
    CloseRoot,
    #[error("{open} context(s) still open at finalize")]
    UnbalancedContexts { open: usize },
    #[error("waveforms added to a schedule must have bounded durations")]
    UnboundedWaveform,
}

/// The finalized schedule: one waveform per channel, in first-use order.
/// After binding, all channel durations resolve to the same value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScheduleMap {
    entries: IndexMap<Channel, Waveform>,
}

impl ScheduleMap {
    pub fn get(&self, channel: &Channel) -> Option<&Waveform> {
        self.entries.get(channel)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Channel, &Waveform)> {
        self.entries.iter()
    }

    pub fn channels(&self) -> impl Iterator<Item = &Channel> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rebuilds the map with a waveform replaced, e.g. after a pass run.
    pub fn with_waveform(&self, channel: &Channel, waveform: Waveform) -> Self {
        let mut entries = self.entries.clone();
        entries.insert(channel.clone(), waveform);
        ScheduleMap { entries }
    }
}

/// One sequential slot: the channels active in it and its symbolic duration.
struct Slot {
    entries: IndexMap<Channel, Waveform>,
    duration: Scalar,
}

enum Context {
    Sequential {
        target: Option<Scalar>,
        slots: Vec<Slot>,
    },
    Parallel {
        target: Option<Scalar>,
        tracks: IndexMap<Channel, Vec<Waveform>>,
        /// Durations of collapsed child contexts, kept so an empty or
        /// longer-than-its-channels child still stretches this context.
        floors: Vec<Scalar>,
    },
}

/// A collapsed context: per-channel waveforms of equal symbolic duration.
struct Collapsed {
    entries: IndexMap<Channel, Waveform>,
    duration: Scalar,
}

/// A schedule under construction. The context stack starts with a single
/// sequential root context; [`Schedule::finalize`] consumes the schedule, so
/// a finalized schedule cannot be reopened.
pub struct Schedule {
    stack: Vec<Context>,
    seen: Vec<Channel>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::new()
    }
}

impl Schedule {
    pub fn new() -> Self {
        Schedule {
            stack: vec![Context::Sequential {
                target: None,
                slots: Vec::new(),
            }],
            seen: Vec::new(),
        }
    }

    /// Ensures a channel appears in the finalized map even if nothing is
    /// ever added to it; it will carry full-duration zero padding.
    pub fn declare(&mut self, channel: &Channel) {
        if !self.seen.contains(channel) {
            self.seen.push(channel.clone());
        }
    }

    /// Opens a nested sequential context: every add creates a new slot and
    /// slots play back to back.
    pub fn open_sequential(&mut self, target_duration: Option<Scalar>) {
        self.stack.push(Context::Sequential {
            target: target_duration,
            slots: Vec::new(),
        });
    }

    /// Opens a nested parallel context: channels play side by side and are
    /// padded to a common duration when the context closes. Multiple adds to
    /// the same channel are sequenced on that channel, left-aligned.
    pub fn open_parallel(&mut self, target_duration: Option<Scalar>) {
        self.stack.push(Context::Parallel {
            target: target_duration,
            tracks: IndexMap::new(),
            floors: Vec::new(),
        });
    }

    /// Adds a waveform to a channel in the current context.
    pub fn add(&mut self, channel: &Channel, waveform: Waveform) -> Result<(), ScheduleError> {
        let duration = match waveform.duration_expr() {
            Duration::Expr(s) => s,
            Duration::Unbounded => return Err(ScheduleError::UnboundedWaveform),
        };
        self.declare(channel);
        match self.stack.last_mut().expect("stack never empties") {
            Context::Sequential { slots, .. } => {
                let mut entries = IndexMap::new();
                entries.insert(channel.clone(), waveform);
                slots.push(Slot { entries, duration });
            }
            Context::Parallel { tracks, .. } => {
                tracks.entry(channel.clone()).or_default().push(waveform);
            }
        }
        Ok(())
    }

    /// Closes the top context and merges its collapsed contents into the
    /// parent. The root context can only be closed by [`Schedule::finalize`].
    pub fn close(&mut self) -> Result<(), ScheduleError> {
        if self.stack.len() == 1 {
            return Err(ScheduleError::CloseRoot);
        }
        let collapsed = collapse(self.stack.pop().expect("checked length"), None);
        match self.stack.last_mut().expect("root remains") {
            Context::Sequential { slots, .. } => {
                slots.push(Slot {
                    entries: collapsed.entries,
                    duration: collapsed.duration,
                });
            }
            Context::Parallel { tracks, floors, .. } => {
                for (channel, waveform) in collapsed.entries {
                    tracks.entry(channel).or_default().push(waveform);
                }
                floors.push(collapsed.duration);
            }
        }
        Ok(())
    }

    /// Closes the root context and extracts the per-channel waveforms.
    /// Channels appearing anywhere in the schedule are padded to the full
    /// schedule duration, including in slots created before their first use.
    pub fn finalize(mut self) -> Result<ScheduleMap, ScheduleError> {
        if self.stack.len() != 1 {
            return Err(ScheduleError::UnbalancedContexts {
                open: self.stack.len() - 1,
            });
        }
        let collapsed = collapse(self.stack.pop().expect("root"), Some(&self.seen));
        Ok(ScheduleMap {
            entries: collapsed.entries,
        })
    }
}

fn collapse(context: Context, universe: Option<&[Channel]>) -> Collapsed {
    match context {
        Context::Sequential { target, slots } => {
            let mut channels: Vec<Channel> = universe.map(<[_]>::to_vec).unwrap_or_default();
            for slot in &slots {
                for channel in slot.entries.keys() {
                    if !channels.contains(channel) {
                        channels.push(channel.clone());
                    }
                }
            }
            let total = sum_scalars(slots.iter().map(|s| s.duration.clone()).collect());
            let mut entries = IndexMap::new();
            for channel in channels {
                let mut parts: Vec<Waveform> = slots
                    .iter()
                    .map(|slot| {
                        slot.entries
                            .get(&channel)
                            .cloned()
                            .unwrap_or_else(|| Waveform::zero(slot.duration.clone()))
                    })
                    .collect();
                if let Some(target) = &target {
                    parts.push(Waveform::zero(target.clone() - total.clone()));
                }
                entries.insert(channel, Waveform::sequence(parts));
            }
            let duration = target.unwrap_or(total);
            Collapsed { entries, duration }
        }
        Context::Parallel {
            target,
            tracks,
            floors,
        } => {
            let track_durations: IndexMap<Channel, Scalar> = tracks
                .iter()
                .map(|(channel, items)| {
                    let durations = items
                        .iter()
                        .map(|w| {
                            w.duration_expr()
                                .expr()
                                .expect("adds reject unbounded waveforms")
                                .clone()
                        })
                        .collect();
                    (channel.clone(), sum_scalars(durations))
                })
                .collect();
            let duration = target.unwrap_or_else(|| {
                max_scalars(
                    track_durations
                        .values()
                        .cloned()
                        .chain(floors)
                        .collect(),
                )
            });
            let entries = tracks
                .into_iter()
                .map(|(channel, mut items)| {
                    let track = track_durations[&channel].clone();
                    items.push(Waveform::zero(duration.clone() - track));
                    (channel, Waveform::sequence(items))
                })
                .collect();
            Collapsed { entries, duration }
        }
    }
}

fn sum_scalars(items: Vec<Scalar>) -> Scalar {
    Duration::sum_of(items.into_iter().map(Duration::Expr))
        .expr()
        .expect("sum of bounded durations is bounded")
        .clone()
}

fn max_scalars(items: Vec<Scalar>) -> Scalar {
    Duration::max_of(items.into_iter().map(Duration::Expr))
        .expr()
        .expect("max of bounded durations is bounded")
        .clone()
}

/// A waveform node whose resolved duration is negative, with its path.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: NodePath,
    pub kind: Kind,
    pub duration_s: f64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} at {} resolves to {:.5e} s",
            self.kind, self.path, self.duration_s
        )
    }
}

/// Reports every waveform node under `w` whose resolved duration is
/// negative. Requires the graph to be fully bound.
pub fn validate_waveform(w: &Waveform) -> Result<Vec<Violation>, EvalError> {
    let mut violations = Vec::new();
    collect_violations(&Node::Waveform(w.clone()), NodePath::root(), &mut violations)?;
    Ok(violations)
}

fn collect_violations(
    node: &Node,
    path: NodePath,
    out: &mut Vec<Violation>,
) -> Result<(), EvalError> {
    if let Node::Waveform(w) = node {
        if let Some(duration) = resolve_duration(&w.duration_expr())? {
            if duration < 0.0 {
                out.push(Violation {
                    path: path.clone(),
                    kind: w.kind(),
                    duration_s: duration,
                });
            }
        }
    }
    for (label, child) in node.children() {
        collect_violations(&child, path.child(label), out)?;
    }
    Ok(())
}

/// Validates every channel of a bound schedule; an empty list means the
/// schedule is realizable.
pub fn validate(schedule: &ScheduleMap) -> Result<Vec<(Channel, Violation)>, EvalError> {
    let mut all = Vec::new();
    for (channel, waveform) in schedule.iter() {
        for violation in validate_waveform(waveform)? {
            all.push((channel.clone(), violation));
        }
    }
    Ok(all)
}
