//! Time the decoding stage across code distances and report the log-log
//! slope. At low rates the decoder clears everything at the first level, so
//! the time tracks the lattice volume.
//!
//! ```text
//! cargo run --release --example runtime_scaling
//! ```

use qudit_hdrg::cli::{bench_decode_times, log_log_slope};

fn main() {
    let distances = [8u32, 16, 32];
    let medians = bench_decode_times(&distances, 2, 0.01, 25, 1);
    println!("L,median_decode_seconds");
    for (distance, median) in &medians {
        println!("{distance},{median}");
    }
    println!("log-log slope: {:.3}", log_log_slope(&medians));
}
