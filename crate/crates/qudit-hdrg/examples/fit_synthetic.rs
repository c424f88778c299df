//! Exercise the threshold-fitting machinery on data generated exactly from
//! the rescaled quadratic model, where the true parameters are known.
//!
//! ```text
//! cargo run --example fit_synthetic
//! ```

use qudit_hdrg::fitting::{fit_threshold, DataWindow, FitOptions, FitRow};

fn main() {
    let (p_th, nu, mu) = (0.03, 1.0, 1.0);
    let coefficients = [0.85, -0.9, -4.0, 0.05];
    let model = |l: u32, p: f64| {
        let lf = l as f64;
        let x = (p - p_th) * lf.powf(1.0 / nu);
        coefficients[0]
            + coefficients[1] * x
            + coefficients[2] * x * x
            + coefficients[3] * lf.powf(-1.0 / mu)
    };

    let mut rows = Vec::new();
    for l in [6u32, 10, 14] {
        for i in 0..9 {
            let p = 0.022 + 0.002 * i as f64;
            rows.push(FitRow {
                distance: l,
                rate: p,
                p_succ: model(l, p),
                stderr: 0.01,
            });
        }
    }
    let window = DataWindow::new(rows).unwrap();
    let fit = fit_threshold(&window, &FitOptions::default()).unwrap();
    println!("true threshold {p_th}, recovered {:.6}", fit.p_th);
    println!(
        "true exponents nu = {nu}, mu = {mu}; recovered nu = {:.4}, mu = {:.4}",
        fit.nu, fit.mu
    );
    println!("coefficients {:?}", fit.coefficients);
    println!("weighted residual sum {:.2e}", fit.residual_sum);
}
