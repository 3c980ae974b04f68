//! Average cost ratio against prediction bias for several trust values. The
//! row for trust 0 follows the prediction; the row for trust 1 ignores it.
//!
//! cargo run --release --example theta_bias_sweep

use twolevel_ski::harness::{run_theta_bias_sweep, EnsembleConfig};
use twolevel_ski::rational::big_to_f64;
use twolevel_ski::{PriceConfig, Rational};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(6, 9, 30)?;
    let ensemble = EnsembleConfig::new(6, 1_000, 3);
    let thetas: Vec<Rational> = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
        .iter()
        .map(|&(n, d)| Rational::new(n, d))
        .collect();
    let biases: Vec<i64> = (-50..=20).step_by(10).collect();
    let results = run_theta_bias_sweep(&prices, &thetas, &biases, &ensemble, 0, 1, 4)?;

    print!("{:>6}", "mu");
    for row in &results[0].per_algo {
        print!(" {:>22}", row.algo);
    }
    println!();
    for r in &results {
        print!("{:>6}", r.axis_value.to_string());
        for row in &r.per_algo {
            let avg = row
                .metrics
                .avg_ratio
                .as_ref()
                .map(big_to_f64)
                .unwrap_or(f64::NAN);
            print!(" {avg:>22.4}");
        }
        println!();
    }
    Ok(())
}
