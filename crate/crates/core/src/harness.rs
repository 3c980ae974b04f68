//! Batch experiments over seeded ensembles.
//!
//! Two metrics are reported per (axis point, policy): the empirical
//! competitive ratio (worst `cost / OPT` over the ensemble) and the average
//! ratio. Instances with `OPT = 0` have no ratio; they are counted in
//! `skipped` and left out of both metrics.
//!
//! Output is independent of `jobs`: every instance is generated from its own
//! derived seed, results are collected by index, and the reduction runs
//! sequentially in index order.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{PolicyKind, Prediction};
use crate::analysis::{brute_force_opt, opt_offline, rdtsr_bound, robustness_bound};
use crate::analysis::{BRUTE_FORCE_MAX_HORIZON, BRUTE_FORCE_MAX_ITEMS};
use crate::datagen::{
    derive_seed, gen_prediction, gen_sequence, GenConfig, PredictorConfig, WorkloadKind,
};
use crate::datagen::{DEFAULT_AMOUNT_MAX, DEFAULT_HORIZON_MAX};
use crate::error::{Error, Result};
use crate::model::{evaluate_cost, total_demand, DemandSequence, PriceConfig, TotalDemand};
use crate::rational::{format_significant, int, to_big, Rational};

/// Significant digits of the decimal rendering in result files.
pub const DECIMAL_DIGITS: u32 = 12;

/// Every this-many instances one is cross-checked against the exhaustive
/// oracle, when it is small enough.
const ORACLE_SAMPLE_EVERY: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleMix {
    /// 40% uniform, 60% long-tailed: index `i` is uniform iff `i mod 5 < 2`.
    Mixed,
    Uniform,
    LongTailed,
}

impl EnsembleMix {
    pub fn kind_of(&self, index: usize) -> WorkloadKind {
        match self {
            EnsembleMix::Mixed if index % 5 < 2 => WorkloadKind::Uniform,
            EnsembleMix::Mixed => WorkloadKind::LongTailed,
            EnsembleMix::Uniform => WorkloadKind::Uniform,
            EnsembleMix::LongTailed => WorkloadKind::LongTailed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleConfig {
    pub mix: EnsembleMix,
    pub num_items: usize,
    pub horizon_max: usize,
    pub multi_unit: bool,
    pub amount_max: u64,
    pub count: usize,
    pub master_seed: u64,
}

impl EnsembleConfig {
    pub fn new(num_items: usize, count: usize, master_seed: u64) -> Self {
        EnsembleConfig {
            mix: EnsembleMix::Mixed,
            num_items,
            horizon_max: DEFAULT_HORIZON_MAX,
            multi_unit: false,
            amount_max: DEFAULT_AMOUNT_MAX,
            count,
            master_seed,
        }
    }

    pub fn gen_config(&self, index: usize) -> GenConfig {
        GenConfig {
            kind: self.mix.kind_of(index),
            num_items: self.num_items,
            horizon_max: self.horizon_max,
            multi_unit: self.multi_unit,
            amount_max: self.amount_max,
            seed: derive_seed(self.master_seed, index as u64),
        }
    }

    pub fn sequence(&self, index: usize) -> Result<DemandSequence> {
        gen_sequence(&self.gen_config(index))
    }
}

/// Running metrics for one policy at one axis point.
#[derive(Clone, Debug)]
struct RatioAccumulator {
    count: usize,
    skipped: usize,
    max: Option<Rational>,
    sum: BigRational,
    cost_sum: u128,
    opt_sum: u128,
}

impl RatioAccumulator {
    fn new() -> Self {
        RatioAccumulator {
            count: 0,
            skipped: 0,
            max: None,
            sum: BigRational::zero(),
            cost_sum: 0,
            opt_sum: 0,
        }
    }

    fn push(&mut self, cost: u64, opt: u64) {
        if opt == 0 {
            self.skipped += 1;
            return;
        }
        let ratio = int(cost) / int(opt);
        self.count += 1;
        self.max = Some(self.max.map_or(ratio, |m| m.max(ratio)));
        self.sum += to_big(&ratio);
        self.cost_sum += cost as u128;
        self.opt_sum += opt as u128;
    }

    fn finish(self, theoretical_bound: Option<Rational>) -> AlgoMetrics {
        let avg = (self.count > 0)
            .then(|| &self.sum / BigRational::from_integer(BigInt::from(self.count)));
        let cum = (self.opt_sum > 0)
            .then(|| BigRational::new(BigInt::from(self.cost_sum), BigInt::from(self.opt_sum)));
        AlgoMetrics {
            count: self.count,
            skipped: self.skipped,
            empirical_cr: self.max,
            avg_ratio: avg,
            theoretical_bound,
            cum_norm_cost: cum,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgoMetrics {
    /// Instances with `OPT > 0`.
    pub count: usize,
    pub skipped: usize,
    pub empirical_cr: Option<Rational>,
    pub avg_ratio: Option<BigRational>,
    pub theoretical_bound: Option<Rational>,
    /// `Σ cost / Σ OPT` over the counted instances.
    pub cum_norm_cost: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgoResult {
    pub algo: String,
    pub metrics: AlgoMetrics,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub axis_value: Rational,
    pub per_algo: Vec<AlgoResult>,
}

impl SweepResult {
    pub fn algo(&self, name: &str) -> Option<&AlgoMetrics> {
        self.per_algo
            .iter()
            .find(|a| a.algo == name)
            .map(|a| &a.metrics)
    }
}

/// The bound a policy is measured against in a price sweep; `None` for FTP.
pub fn policy_bound(policy: &PolicyKind, prices: &PriceConfig) -> Option<Rational> {
    match policy {
        PolicyKind::Rdtsr => Some(rdtsr_bound(prices)),
        // the earlier analysis claims 3 - 1/C_s for unit demand
        PolicyKind::Dtsr => Some(int(3) - Rational::one() / int(prices.single_price())),
        PolicyKind::Ftp => None,
        PolicyKind::Ladtsr(theta) if theta.is_one() => Some(rdtsr_bound(prices)),
        PolicyKind::Ladtsr(theta) => robustness_bound(*theta).ok(),
    }
}

/// Row label of a trust value in the trust-bias sweep.
pub fn theta_label(theta: &Rational) -> String {
    if theta.is_zero() {
        "ladtsr:theta=0:ftp".to_string()
    } else if theta.is_one() {
        "ladtsr:theta=1:rdtsr".to_string()
    } else {
        format!("ladtsr:theta={theta}")
    }
}

struct Instance {
    seq: DemandSequence,
    total: TotalDemand,
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))
}

fn build_instances(ensemble: &EnsembleConfig, pool: &rayon::ThreadPool) -> Result<Vec<Instance>> {
    let k = ensemble.num_items;
    pool.install(|| {
        (0..ensemble.count)
            .into_par_iter()
            .map(|i| {
                let seq = ensemble.sequence(i)?;
                let mut z = vec![0u64; k];
                for ev in seq.events() {
                    if let Some(item) = ev.item_index() {
                        z[item] += ev.amount;
                    }
                }
                Ok(Instance {
                    seq,
                    total: TotalDemand(z),
                })
            })
            .collect()
    })
}

fn cross_check(index: usize, inst: &Instance, prices: &PriceConfig, opt: u64) -> Result<()> {
    if !index.is_multiple_of(ORACLE_SAMPLE_EVERY)
        || prices.num_items() > BRUTE_FORCE_MAX_ITEMS
        || inst.seq.horizon() > BRUTE_FORCE_MAX_HORIZON
    {
        return Ok(());
    }
    let brute = brute_force_opt(&inst.seq, prices)?;
    if brute != opt {
        return Err(Error::BoundViolation(format!(
            "instance {index}: closed-form OPT {opt} disagrees with exhaustive OPT {brute}"
        )));
    }
    Ok(())
}

/// Varies `C_c` over `cc_values` with `K` and `C_s` taken from the ensemble
/// and `single_price`. Every policy sees the same ensemble at every point.
/// Prediction-based policies draw predictions from `predictor` (per-instance
/// seeds derived from `predictor.seed`).
pub fn run_cc_sweep(
    single_price: u64,
    cc_values: &[u64],
    ensemble: &EnsembleConfig,
    policies: &[PolicyKind],
    predictor: Option<&PredictorConfig>,
    jobs: usize,
) -> Result<Vec<SweepResult>> {
    let price_points = cc_values
        .iter()
        .map(|&cc| {
            PriceConfig::new(ensemble.num_items, single_price, cc)
                .map_err(|e| Error::Config(format!("C_c = {cc}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if policies.iter().any(PolicyKind::needs_prediction) && predictor.is_none() {
        return Err(Error::Config(
            "prediction-based policies need a predictor".into(),
        ));
    }
    let pool = pool(jobs)?;
    let instances = build_instances(ensemble, &pool)?;
    let predictions: Vec<Option<Prediction>> = instances
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            predictor.map(|p| {
                let cfg = PredictorConfig {
                    seed: derive_seed(p.seed, i as u64),
                    ..*p
                };
                gen_prediction(&inst.total, &cfg)
            })
        })
        .collect();

    price_points
        .iter()
        .map(|prices| {
            let per_instance: Vec<(u64, Vec<u64>)> = pool.install(|| {
                instances
                    .par_iter()
                    .zip(&predictions)
                    .enumerate()
                    .map(|(i, (inst, pred))| {
                        let opt = opt_offline(&inst.total, prices);
                        cross_check(i, inst, prices, opt)?;
                        let costs = policies
                            .iter()
                            .map(|p| {
                                let d = p.simulate(&inst.seq, prices, pred.as_ref())?;
                                let cost = evaluate_cost(&inst.seq, &d, prices).total;
                                if *p == PolicyKind::Rdtsr && opt > 0 {
                                    let bound = rdtsr_bound(prices);
                                    if int(cost) / int(opt) > bound {
                                        return Err(Error::BoundViolation(format!(
                                            "instance {i}, C_c = {}: RDTSR ratio {cost}/{opt} exceeds {bound}",
                                            prices.combo_price()
                                        )));
                                    }
                                }
                                Ok(cost)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((opt, costs))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            Ok(reduce(
                int(prices.combo_price()),
                policies.iter().map(|p| (p.to_string(), policy_bound(p, prices))).collect(),
                &per_instance,
            ))
        })
        .collect()
}

fn reduce(
    axis_value: Rational,
    labels: Vec<(String, Option<Rational>)>,
    per_instance: &[(u64, Vec<u64>)],
) -> SweepResult {
    let mut acc = vec![RatioAccumulator::new(); labels.len()];
    for (opt, costs) in per_instance {
        for (a, &cost) in acc.iter_mut().zip(costs) {
            a.push(cost, *opt);
        }
    }
    SweepResult {
        axis_value,
        per_algo: labels
            .into_iter()
            .zip(acc)
            .map(|((algo, bound), a)| AlgoResult {
                algo,
                metrics: a.finish(bound),
            })
            .collect(),
    }
}

/// For every bias `μ`, draws predictions `y = max(0, z + μ + noise)` for the
/// ensemble and runs the learning-augmented policy at every `θ`. One result per
/// bias; rows are labelled by [`theta_label`].
pub fn run_theta_bias_sweep(
    prices: &PriceConfig,
    thetas: &[Rational],
    biases: &[i64],
    ensemble: &EnsembleConfig,
    noise_halfwidth: u64,
    predictor_seed: u64,
    jobs: usize,
) -> Result<Vec<SweepResult>> {
    if ensemble.num_items != prices.num_items() {
        return Err(Error::Config(format!(
            "ensemble has {} items but prices have K = {}",
            ensemble.num_items,
            prices.num_items()
        )));
    }
    if let Some(bad) = thetas
        .iter()
        .find(|t| **t < Rational::zero() || **t > Rational::one())
    {
        return Err(Error::TrustOutOfRange(bad.to_string(), "[0, 1]"));
    }
    let pool = pool(jobs)?;
    let instances = build_instances(ensemble, &pool)?;
    let labels: Vec<(String, Option<Rational>)> = thetas
        .iter()
        .map(|t| {
            (
                theta_label(t),
                policy_bound(&PolicyKind::Ladtsr(*t), prices),
            )
        })
        .collect();

    biases
        .iter()
        .map(|&bias| {
            let per_instance: Vec<(u64, Vec<u64>)> = pool.install(|| {
                instances
                    .par_iter()
                    .enumerate()
                    .map(|(i, inst)| {
                        let cfg = PredictorConfig {
                            bias,
                            noise_halfwidth,
                            seed: derive_seed(predictor_seed, i as u64),
                        };
                        let pred = gen_prediction(&inst.total, &cfg);
                        let opt = opt_offline(&inst.total, prices);
                        let costs = thetas
                            .iter()
                            .map(|t| {
                                let d = PolicyKind::Ladtsr(*t).simulate(
                                    &inst.seq,
                                    prices,
                                    Some(&pred),
                                )?;
                                Ok(evaluate_cost(&inst.seq, &d, prices).total)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((opt, costs))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            Ok(reduce(
                Rational::from_integer(bias as i128),
                labels.clone(),
                &per_instance,
            ))
        })
        .collect()
}

/// One instance's cost and ratio, for single-trace runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub cost: crate::model::CostBreakdown,
    pub opt: u64,
    pub ratio: Option<Rational>,
}

pub fn run_instance(
    policy: &PolicyKind,
    seq: &DemandSequence,
    prices: &PriceConfig,
    pred: Option<&Prediction>,
) -> Result<InstanceOutcome> {
    let z = total_demand(seq, prices)?;
    let d = policy.simulate(seq, prices, pred)?;
    let cost = evaluate_cost(seq, &d, prices);
    let opt = opt_offline(&z, prices);
    Ok(InstanceOutcome {
        cost,
        opt,
        ratio: (opt > 0).then(|| int(cost.total) / int(opt)),
    })
}

pub const CSV_HEADER: [&str; 7] = [
    "axis",
    "algo",
    "count",
    "skipped",
    "empirical_cr",
    "avg_ratio",
    "bound",
];

fn decimal(value: Option<&BigRational>) -> String {
    value
        .map(|v| format_significant(v, DECIMAL_DIGITS))
        .unwrap_or_default()
}

/// Results CSV. The optional `cum_norm_cost` column is appended when requested.
pub fn write_results_csv<W: Write>(
    writer: W,
    results: &[SweepResult],
    cum_norm_cost: bool,
) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if cum_norm_cost {
        header.push("cum_norm_cost");
    }
    w.write_record(&header)?;
    for r in results {
        for a in &r.per_algo {
            let m = &a.metrics;
            let mut row = vec![
                r.axis_value.to_string(),
                a.algo.clone(),
                m.count.to_string(),
                m.skipped.to_string(),
                decimal(m.empirical_cr.map(|v| to_big(&v)).as_ref()),
                decimal(m.avg_ratio.as_ref()),
                decimal(m.theoretical_bound.map(|v| to_big(&v)).as_ref()),
            ];
            if cum_norm_cost {
                row.push(decimal(m.cum_norm_cost.as_ref()));
            }
            w.write_record(&row)?;
        }
    }
    w.flush()
}

/// An exact value with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalValue {
    pub decimal: String,
    pub num: String,
    pub den: String,
}

impl RationalValue {
    pub fn new(value: &BigRational) -> Self {
        RationalValue {
            decimal: format_significant(value, DECIMAL_DIGITS),
            num: value.numer().to_string(),
            den: value.denom().to_string(),
        }
    }

    pub fn from_rational(value: &Rational) -> Self {
        Self::new(&to_big(value))
    }
}

#[derive(Serialize)]
struct AlgoJson {
    algo: String,
    count: usize,
    skipped: usize,
    empirical_cr: Option<RationalValue>,
    avg_ratio: Option<RationalValue>,
    theoretical_bound: Option<RationalValue>,
    cum_norm_cost: Option<RationalValue>,
}

#[derive(Serialize)]
struct SweepJson {
    axis_value: RationalValue,
    per_algo: Vec<AlgoJson>,
}

/// Everything needed to rerun a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ResultsMeta {
    pub version: String,
    pub seed: u64,
    pub config: serde_json::Value,
}

impl ResultsMeta {
    pub fn new(seed: u64, config: serde_json::Value) -> Self {
        ResultsMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
        }
    }
}

pub fn results_json(meta: &ResultsMeta, results: &[SweepResult]) -> serde_json::Value {
    let sweeps: Vec<SweepJson> = results
        .iter()
        .map(|r| SweepJson {
            axis_value: RationalValue::from_rational(&r.axis_value),
            per_algo: r
                .per_algo
                .iter()
                .map(|a| {
                    let m = &a.metrics;
                    AlgoJson {
                        algo: a.algo.clone(),
                        count: m.count,
                        skipped: m.skipped,
                        empirical_cr: m.empirical_cr.as_ref().map(RationalValue::from_rational),
                        avg_ratio: m.avg_ratio.as_ref().map(RationalValue::new),
                        theoretical_bound: m
                            .theoretical_bound
                            .as_ref()
                            .map(RationalValue::from_rational),
                        cum_norm_cost: m.cum_norm_cost.as_ref().map(RationalValue::new),
                    }
                })
                .collect(),
        })
        .collect();
    serde_json::json!({ "meta": meta, "results": sweeps })
}

pub fn write_results_json<W: Write>(
    mut writer: W,
    meta: &ResultsMeta,
    results: &[SweepResult],
) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut writer, &results_json(meta, results))?;
    writeln!(writer)
}
