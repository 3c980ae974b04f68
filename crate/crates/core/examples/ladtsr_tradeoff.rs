//! Consistency against robustness: the worst-case guarantees of the
//! learning-augmented policy as the trust parameter moves through (0, 1),
//! next to the measured ratio under a perfect and a badly biased prediction.
//!
//! cargo run --example ladtsr_tradeoff

use twolevel_ski::analysis::{consistency_bound, opt_offline, robustness_bound};
use twolevel_ski::datagen::{
    gen_prediction, gen_sequence, GenConfig, PredictorConfig, WorkloadKind,
};
use twolevel_ski::harness::run_instance;
use twolevel_ski::model::total_demand;
use twolevel_ski::rational::to_f64;
use twolevel_ski::{PolicyKind, PriceConfig, Rational};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(6, 9, 30)?;
    let mut cfg = GenConfig::new(WorkloadKind::LongTailed, 6, 5);
    cfg.multi_unit = true;
    let seq = gen_sequence(&cfg)?;
    let z = total_demand(&seq, &prices)?;
    println!("z = {:?}, OPT = {}", z.per_item(), opt_offline(&z, &prices));

    let perfect = gen_prediction(&z, &PredictorConfig::perfect());
    let biased = gen_prediction(
        &z,
        &PredictorConfig {
            bias: -12,
            noise_halfwidth: 0,
            seed: 0,
        },
    );

    println!(
        "{:>6} {:>12} {:>12} {:>10} {:>10}",
        "theta", "consistency", "robustness", "perfect", "bias -12"
    );
    for (n, d) in [(1, 8), (1, 4), (1, 2), (3, 4), (7, 8)] {
        let theta = Rational::new(n, d);
        let policy = PolicyKind::Ladtsr(theta);
        let good = run_instance(&policy, &seq, &prices, Some(&perfect))?;
        let bad = run_instance(&policy, &seq, &prices, Some(&biased))?;
        println!(
            "{:>6} {:>12.4} {:>12.4} {:>10.4} {:>10.4}",
            theta.to_string(),
            to_f64(&consistency_bound(theta)?),
            to_f64(&robustness_bound(theta)?),
            good.ratio.map(|r| to_f64(&r)).unwrap_or(f64::NAN),
            bad.ratio.map(|r| to_f64(&r)).unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
