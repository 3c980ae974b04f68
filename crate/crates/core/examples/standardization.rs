//! Per-instance cost bounds and the standard forms they are maximized on.
//!
//! cargo run --example standardization

use twolevel_ski::analysis::{
    opt_offline, rdtsr_bound_report, standardize_ladtsr, standardize_rdtsr, u_alg_ladtsr,
};
use twolevel_ski::datagen::{gen_prediction, PredictorConfig};
use twolevel_ski::{PriceConfig, Rational, ThresholdSet, TotalDemand};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(4, 10, 28)?;
    let th = ThresholdSet::rdtsr(&prices, 7, 28)?;
    let z = TotalDemand(vec![12, 8, 3, 0]);

    let report = rdtsr_bound_report(&z, &prices, &th)?;
    let show = |r: Option<Rational>| r.map_or("-".to_string(), |r| r.to_string());
    println!(
        "z = {:?}: OPT {}, U_ALG {}, U_CR {}",
        z.per_item(),
        opt_offline(&z, &prices),
        report.u_alg,
        show(report.u_cr)
    );
    let (std_z, form) = standardize_rdtsr(&z, &prices, &th)?;
    let std_report = rdtsr_bound_report(&std_z, &prices, &th)?;
    println!(
        "standard {:?} {form:?}: U_CR {}",
        std_z.per_item(),
        show(std_report.u_cr)
    );

    let theta = Rational::new(1, 2);
    let pred = gen_prediction(
        &z,
        &PredictorConfig {
            bias: 3,
            noise_halfwidth: 0,
            seed: 0,
        },
    );
    let u = u_alg_ladtsr(&z, &prices, &pred, theta)?;
    let (lz, lform) = standardize_ladtsr(&z, &prices, &pred, theta)?;
    println!(
        "learned, y = {:?}: U_ALG {u}; standard {:?} {lform:?}",
        pred.per_item(),
        lz.per_item()
    );
    Ok(())
}
