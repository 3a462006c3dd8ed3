//! Shelving with multiple reference clocks: four transitions, four channels,
//! four clocks.
//!
//! The sequence moves population from the qubit manifold into metastable
//! states and back, interleaving rotations and transfer pulses. Every
//! transition has its own resonance, hence its own reference clock; as long
//! as all clocks share phase zero at the time origin, each pulse just
//! references its own clock and coherence takes care of itself.
//!
//! Run with: `cargo run -p pulsegraph --example shelving`

use pulsegraph::graph::{Duration, Scalar, Waveform};
use pulsegraph::schedule::{Channel, Schedule};
use pulsegraph::targets::munch_dds;

fn main() {
    let transitions = [
        ("hyperfine", 12e6),
        ("transfer0", 17e6),
        ("transfer1", 21e6),
        ("metastable", 9e6),
    ];
    let clocks: Vec<Waveform> = transitions
        .iter()
        .map(|(_, f)| Waveform::clock(*f, 0.0, Duration::Unbounded))
        .collect();
    let channels: Vec<Channel> = transitions
        .iter()
        .map(|(label, _)| Channel::new(*label))
        .collect();
    let pulse = |i: usize, d: f64| {
        Waveform::sine_continuous(1.0, transitions[i].1, 0.0, Scalar::num(d), clocks[i].clone())
            .unwrap()
    };
    let (d_rot, d_transfer) = (0.3e-6, 0.2e-6);

    // sqrt(Y) -- transfer up -- Y in the metastable manifold -- transfer
    // back -- sqrt(Y).
    let mut schedule = Schedule::new();
    schedule.add(&channels[0], pulse(0, d_rot)).unwrap();
    schedule.open_parallel(None);
    schedule.add(&channels[1], pulse(1, d_transfer)).unwrap();
    schedule.add(&channels[2], pulse(2, d_transfer)).unwrap();
    schedule.close().unwrap();
    schedule.add(&channels[3], pulse(3, d_rot)).unwrap();
    schedule.open_parallel(None);
    schedule.add(&channels[1], pulse(1, d_transfer)).unwrap();
    schedule.add(&channels[2], pulse(2, d_transfer)).unwrap();
    schedule.close().unwrap();
    schedule.add(&channels[0], pulse(0, d_rot)).unwrap();
    let map = schedule.finalize().unwrap();

    for (channel, waveform) in map.iter() {
        println!("channel {}:", channel.label());
        let mut start = 0.0;
        for segment in munch_dds(waveform).unwrap() {
            if segment.amplitude > 0.0 {
                println!(
                    "  tone at {:>5.2} us: {:>4.1} MHz, ref phase {:8.4} rad",
                    start * 1e6,
                    segment.frequency_hz / 1e6,
                    segment.ref_phase_rad.unwrap()
                );
            }
            start += segment.duration_s;
        }
    }
}
