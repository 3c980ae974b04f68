//! Empirical competitive ratio of the robust policy and the single-level
//! baseline as the combo price varies, written as results CSV to stdout.
//!
//! cargo run --release --example cc_sweep

use twolevel_ski::harness::{run_cc_sweep, write_results_csv, EnsembleConfig};
use twolevel_ski::PolicyKind;

fn main() -> twolevel_ski::Result<()> {
    let ensemble = EnsembleConfig::new(6, 2_000, 7);
    let cc: Vec<u64> = (15..=40).step_by(5).collect();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let results = run_cc_sweep(
        9,
        &cc,
        &ensemble,
        &[PolicyKind::Rdtsr, PolicyKind::Dtsr],
        None,
        jobs,
    )?;
    write_results_csv(std::io::stdout().lock(), &results, true)
        .map_err(|e| twolevel_ski::Error::io("<stdout>", e))
}
