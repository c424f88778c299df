//! Sweep the qubit code across rates and distances, then fit the threshold
//! where the success curves cross.
//!
//! ```text
//! cargo run --release --example threshold_sweep
//! ```

use qudit_hdrg::fitting::{fit_threshold, select_window, FitOptions, FitRow};
use qudit_hdrg::montecarlo::{run_batch, sweep_cells, SuccessEstimate};

fn main() {
    let rates: Vec<f64> = (0..7)
        .map(|i| ((0.016 + 0.002 * i as f64) * 1e12).round() / 1e12)
        .collect();
    let cells = sweep_cells(&[6, 10, 14], &rates, 2, 0, None);
    let trials = 2000;
    println!("running {} cells x {} trials...", cells.len(), trials);
    let estimates = run_batch(&cells, trials, 1);

    println!("{}", SuccessEstimate::CSV_HEADER);
    for estimate in &estimates {
        println!("{}", estimate.csv_row());
    }

    let rows: Vec<FitRow> = estimates
        .iter()
        .map(|e| FitRow {
            distance: e.distance,
            rate: e.rate,
            p_succ: e.p_succ,
            stderr: e.stderr,
        })
        .collect();
    let window = select_window(&rows, 0.004).expect("curves cross in range");
    let fit = fit_threshold(&window, &FitOptions::default()).expect("fit converges");
    println!(
        "threshold: {:.4} +/- {:.4}  (nu = {:.2}, mu = {:.2}, {} bootstrap resamples)",
        fit.p_th, fit.p_th_stderr, fit.nu, fit.mu, fit.resamples
    );
}
