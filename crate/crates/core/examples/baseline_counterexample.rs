//! The single-level baseline against the robust policy when each of the 20
//! items arrives once with `C_s` units of demand.
//!
//! cargo run --example baseline_counterexample

use twolevel_ski::algorithms::{dtsr_simulate, rdtsr_simulate};
use twolevel_ski::analysis::{opt_offline, rdtsr_bound};
use twolevel_ski::model::{evaluate_cost, total_demand};
use twolevel_ski::{DemandSequence, PriceConfig, Rational, ThresholdSet};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(20, 9, 30)?;
    let pairs: Vec<(usize, u64)> = (1..=20).map(|item| (item, 9)).collect();
    let seq = DemandSequence::from_pairs(&pairs)?;
    let th = ThresholdSet::rdtsr_default(&prices);
    let opt = opt_offline(&total_demand(&seq, &prices)?, &prices);

    for (name, d) in [
        ("dtsr", dtsr_simulate(&seq, &prices, &th)?),
        ("rdtsr", rdtsr_simulate(&seq, &prices, &th)?),
    ] {
        let cost = evaluate_cost(&seq, &d, &prices);
        println!(
            "{name:>5}: singles {:>2}, combo at {:?}, total {:>3}, ratio {}",
            d.num_single_purchases(),
            d.combo_time,
            cost.total,
            Rational::new(cost.total as i128, opt as i128)
        );
    }
    println!("OPT = {opt}, robust bound = {}", rdtsr_bound(&prices));
    Ok(())
}
