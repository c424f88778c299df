//! Run one fault-tolerant decoding trial and print what the decoder did,
//! level by level.
//!
//! ```text
//! cargo run --release --example single_trial
//! ```

use qudit_hdrg::montecarlo::{run_trial_traced, TrialConfig};

fn main() {
    let config = TrialConfig {
        seed: 7,
        trial: 0,
        init_depth: 0,
        ..TrialConfig::new(5, 5, 0.05)
    };
    println!(
        "distance {}, dimension {}, rate {}, {} measurement rounds",
        config.distance, config.dim, config.rate, config.time_steps
    );

    let trace = run_trial_traced(&config);
    println!(
        "defects in the changes history: {}",
        trace.outcome.defects_initial
    );
    for level in &trace.decode.levels {
        println!(
            "level {} (delta {:>2}): {:>3} clusters, {:>3} fused, {:>3} defects remain",
            level.level, level.delta, level.clusters, level.fused, level.defects_after
        );
    }
    println!(
        "decode took {:.1} microseconds",
        trace.outcome.decode_seconds * 1e6
    );
    println!("logical state preserved: {}", trace.outcome.success);
}
