//! The robust bound across combo prices, and the thresholds it is tuned for.
//!
//! cargo run --example bounds_table

use twolevel_ski::analysis::{rdtsr_bound, rdtsr_threshold_bound};
use twolevel_ski::rational::to_f64;
use twolevel_ski::{PriceConfig, ThresholdSet};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(6, 9, 30)?;
    println!("lambda_s lambda_c  bound");
    for (ls, lc) in [(9, 30), (5, 30), (9, 20), (7, 25), (3, 15)] {
        let th = ThresholdSet::rdtsr(&prices, ls, lc)?;
        println!(
            "{ls:>8} {lc:>8}  {:.6}",
            to_f64(&rdtsr_threshold_bound(&prices, &th)?)
        );
    }
    println!();
    println!(" C_c  default-threshold bound");
    for cc in (15..=40).step_by(5) {
        let b = rdtsr_bound(&PriceConfig::new(6, 9, cc)?);
        println!("{cc:>4}  {b} = {:.6}", to_f64(&b));
    }
    Ok(())
}
