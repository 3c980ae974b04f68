//! Slot-by-slot decisions of the robust policy, with its indicative costs.
//!
//! cargo run --example rdtsr_trace

use twolevel_ski::algorithms::ThresholdPolicy;
use twolevel_ski::{DemandSequence, Policy, PriceConfig, ThresholdSet};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(6, 9, 30)?;
    let seq =
        DemandSequence::from_pairs(&[(1, 9), (2, 9), (0, 0), (3, 9), (4, 9), (5, 9), (6, 9)])?;
    let mut policy = ThresholdPolicy::rdtsr(&prices, ThresholdSet::rdtsr_default(&prices))?;

    println!(
        "{:>3} {:>4} {:>6}  {:<12} per-item psi",
        "t", "item", "amount", "action"
    );
    for ev in seq.events() {
        let action = policy.observe(ev);
        let s = policy.state();
        let per_item: Vec<String> = s.per_item.iter().map(|p| p.to_string()).collect();
        println!(
            "{:>3} {:>4} {:>6}  {:<12} [{}]  psi_c = {}",
            ev.slot,
            ev.item,
            ev.amount,
            format!("{action:?}"),
            per_item.join(", "),
            s.overall
        );
    }
    Ok(())
}
