//! A pulse-dependent clock: single-qubit gate, two-qubit gate, single-qubit
//! gate on a trapped-ion spin channel.
//!
//! The qubit resonance shifts while pulses are applied (an AC-Stark shift),
//! so the spin channel's reference frame is a clock *sequence* whose
//! frequency changes with the active pulse while its accumulated phase stays
//! continuous. The motion channel carries the sideband tone during the
//! two-qubit gate; its phase does not matter, so it uses absolute mode and
//! references no clock.
//!
//! Run with: `cargo run -p pulsegraph --example ms_gate`

use pulsegraph::eval::clock_phase;
use pulsegraph::graph::{Duration, Scalar, Waveform};
use pulsegraph::schedule::{Channel, Schedule};
use pulsegraph::targets::munch_dds;

fn main() {
    // Toy numbers: 10 MHz idle/single-qubit resonance, 13 MHz during the
    // two-qubit gate.
    let (f_single, f_pair) = (10e6, 13e6);
    let (d_single, d_pair) = (0.2e-6, 0.4e-6);

    let spin_frame = Waveform::clock_seq(vec![
        Waveform::clock(f_single, 0.0, d_single),
        Waveform::clock(f_pair, 0.0, d_pair),
        Waveform::clock(f_single, 0.0, Duration::Unbounded),
    ])
    .unwrap();

    let spin_pulse = |f: f64, d: f64| {
        Waveform::sine_continuous(1.0, f, 0.0, Scalar::num(d), spin_frame.clone()).unwrap()
    };
    let motion_pulse = Waveform::sine(0.5, 2e6, 0.0, d_pair);

    let spin = Channel::new("spin");
    let motion = Channel::new("motion");
    let mut schedule = Schedule::new();
    schedule.add(&spin, spin_pulse(f_single, d_single)).unwrap();
    schedule.open_parallel(None);
    schedule.add(&spin, spin_pulse(f_pair, d_pair)).unwrap();
    schedule.add(&motion, motion_pulse).unwrap();
    schedule.close().unwrap();
    schedule.add(&spin, spin_pulse(f_single, d_single)).unwrap();
    let map = schedule.finalize().unwrap();

    for boundary in [d_single, d_single + d_pair] {
        println!(
            "spin frame phase at {:>5.2} us: {:8.4} rad (continuous across the switch)",
            boundary * 1e6,
            clock_phase(&spin_frame, boundary).unwrap()
        );
    }
    println!();

    for (channel, waveform) in map.iter() {
        println!("channel {}:", channel.label());
        for (i, segment) in munch_dds(waveform).unwrap().iter().enumerate() {
            match segment.ref_phase_rad {
                Some(phi) => println!(
                    "  [{i}] {:>6.2} us  {:>5.1} MHz  amp {:.2}  ref phase {:8.4} rad",
                    segment.duration_s * 1e6,
                    segment.frequency_hz / 1e6,
                    segment.amplitude,
                    phi
                ),
                None => println!(
                    "  [{i}] {:>6.2} us  {:>5.1} MHz  amp {:.2}  ({})",
                    segment.duration_s * 1e6,
                    segment.frequency_hz / 1e6,
                    segment.amplitude,
                    segment.phase_mode
                ),
            }
        }
    }
}
