//! Write a generated trace and prediction to CSV, read them back and replay
//! every policy on the loaded trace.
//!
//! cargo run --example trace_replay

use twolevel_ski::datagen::{
    gen_prediction, gen_sequence, load_prediction, load_trace, write_prediction, write_trace,
    GenConfig, PredictorConfig, WorkloadKind,
};
use twolevel_ski::harness::run_instance;
use twolevel_ski::model::total_demand;
use twolevel_ski::{PolicyKind, PriceConfig, Rational};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(6, 9, 30)?;
    let mut cfg = GenConfig::new(WorkloadKind::Uniform, 6, 42);
    cfg.multi_unit = true;
    let seq = gen_sequence(&cfg)?;
    let z = total_demand(&seq, &prices)?;
    let pred = gen_prediction(
        &z,
        &PredictorConfig {
            bias: 4,
            noise_halfwidth: 2,
            seed: 9,
        },
    );

    let dir = std::env::temp_dir().join(format!("tlsr-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| twolevel_ski::Error::io(&dir, e))?;
    let (trace_path, pred_path) = (dir.join("trace.csv"), dir.join("pred.csv"));
    write_trace(&trace_path, &seq)?;
    write_prediction(&pred_path, &pred)?;

    let loaded = load_trace(&trace_path, &prices)?;
    let loaded_pred = load_prediction(&pred_path, &prices)?;
    assert_eq!(loaded, seq);
    println!(
        "replaying {} slots from {}",
        loaded.horizon(),
        trace_path.display()
    );
    println!("z = {:?}, y = {:?}", z.per_item(), loaded_pred.per_item());

    for policy in [
        PolicyKind::Rdtsr,
        PolicyKind::Dtsr,
        PolicyKind::Ftp,
        PolicyKind::Ladtsr(Rational::new(1, 2)),
    ] {
        let o = run_instance(&policy, &loaded, &prices, Some(&loaded_pred))?;
        println!(
            "{:<18} rent {:>3} single {:>3} combo {:>3} total {:>3} / OPT {:>3}",
            policy.to_string(),
            o.cost.rent_cost,
            o.cost.single_cost,
            o.cost.combo_cost,
            o.cost.total,
            o.opt
        );
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
