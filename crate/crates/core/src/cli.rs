//! Argument parsing and dispatch for the `tlsr` binary.
//!
//! Exit codes: 0 on success, 1 for invalid arguments or values, 2 when a file
//! cannot be read or written. The effective configuration is echoed to stderr
//! as one JSON line so every run can be repeated from its log.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::algorithms::{dtsr_simulate, rdtsr_simulate, PolicyKind, Prediction, ThresholdSet};
use crate::analysis::{
    consistency_bound, ladtsr_bound, opt_offline, rdtsr_bound, rdtsr_threshold_bound,
    robustness_bound,
};
use crate::datagen::{
    gen_prediction, gen_sequence, load_prediction, load_trace, write_prediction, write_trace,
    GenConfig, PredictorConfig, WorkloadKind, DEFAULT_AMOUNT_MAX, DEFAULT_HORIZON_MAX,
};
use crate::error::{Error, Result};
use crate::harness::{
    run_cc_sweep, run_instance, run_theta_bias_sweep, write_results_csv, write_results_json,
    EnsembleConfig, EnsembleMix, ResultsMeta, SweepResult,
};
use crate::model::{evaluate_cost, total_demand, PriceConfig, TotalDemand};
use crate::oracle::{exhaustive_grid, random_instances, OracleTally};
use crate::rational::{parse_rational, to_f64, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "tlsr",
    version,
    about = "Two-level ski-rental policies: simulation, sweeps and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic demand trace, and optionally a prediction for it.
    Gen(GenArgs),
    /// Simulate one policy on a trace file and print its cost against OPT.
    Run(RunArgs),
    /// Sweep the combo price over a seeded ensemble.
    SweepCc(SweepCcArgs),
    /// Sweep trust and prediction bias over a seeded ensemble.
    SweepTheta(SweepThetaArgs),
    /// Evaluate the competitive-ratio bounds.
    Bounds(BoundsArgs),
    /// Check the closed-form OPT against exhaustive search.
    OracleCheck(OracleArgs),
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
struct PriceArgs {
    /// Number of items K
    #[arg(long = "k", default_value_t = 6)]
    k: usize,
    /// Single-item purchase price C_s (money units)
    #[arg(long, default_value_t = 9)]
    cs: u64,
    /// Combo purchase price C_c (money units; C_s < C_c < K*C_s)
    #[arg(long, default_value_t = 30)]
    cc: u64,
}

impl PriceArgs {
    fn prices(&self) -> Result<PriceConfig> {
        PriceConfig::new(self.k, self.cs, self.cc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KindArg {
    Uniform,
    LongTailed,
}

impl From<KindArg> for WorkloadKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Uniform => WorkloadKind::Uniform,
            KindArg::LongTailed => WorkloadKind::LongTailed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MixArg {
    /// 40% uniform, 60% long-tailed
    Mixed,
    Uniform,
    LongTailed,
}

impl From<MixArg> for EnsembleMix {
    fn from(m: MixArg) -> Self {
        match m {
            MixArg::Mixed => EnsembleMix::Mixed,
            MixArg::Uniform => EnsembleMix::Uniform,
            MixArg::LongTailed => EnsembleMix::LongTailed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AlgoArg {
    Rdtsr,
    Dtsr,
    Ftp,
    Ladtsr,
}

#[derive(Args, Debug, Clone, Serialize)]
struct WorkloadArgs {
    /// Largest horizon T (slots); each sequence draws T uniformly from 1..=this
    #[arg(long, default_value_t = DEFAULT_HORIZON_MAX)]
    horizon_max: usize,
    /// Draw per-slot amounts from 1..=amount-max instead of unit demand
    #[arg(long)]
    multi_unit: bool,
    /// Largest per-slot amount (units) in multi-unit mode
    #[arg(long, default_value_t = DEFAULT_AMOUNT_MAX)]
    amount_max: u64,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
struct PredictorArgs {
    /// Additive prediction bias mu (units, may be negative)
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    bias: i64,
    /// Half-width w of the uniform integer noise on each prediction (units)
    #[arg(long, default_value_t = 0)]
    noise: u64,
    /// Seed of the prediction noise
    #[arg(long, default_value_t = 1)]
    pred_seed: u64,
}

impl PredictorArgs {
    fn config(&self) -> PredictorConfig {
        PredictorConfig {
            bias: self.bias,
            noise_halfwidth: self.noise,
            seed: self.pred_seed,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    /// Workload shape
    #[arg(long, value_enum, default_value_t = KindArg::Uniform)]
    kind: KindArg,
    /// Number of items K
    #[arg(long = "k", default_value_t = 6)]
    k: usize,
    #[command(flatten)]
    workload: WorkloadArgs,
    /// Seed of the sequence
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace CSV to write (t,item,amount)
    #[arg(long)]
    out: PathBuf,
    /// Also write a prediction CSV (item,y) drawn from the trace's total demand
    #[arg(long)]
    pred_out: Option<PathBuf>,
    #[command(flatten)]
    predictor: PredictorArgs,
}

#[derive(Args, Debug, Serialize)]
struct RunArgs {
    /// Trace CSV (t,item,amount)
    #[arg(long)]
    trace: PathBuf,
    /// Policy to simulate
    #[arg(long, value_enum, default_value_t = AlgoArg::Rdtsr)]
    algo: AlgoArg,
    #[command(flatten)]
    prices: PriceArgs,
    /// Trust theta in [0, 1] for ladtsr, as "1/4" or "0.25"
    #[arg(long)]
    theta: Option<String>,
    /// Prediction CSV (item,y); required by ftp and ladtsr
    #[arg(long)]
    pred: Option<PathBuf>,
    /// Single-purchase threshold lambda_s for rdtsr/dtsr (money units, default C_s)
    #[arg(long)]
    lambda_s: Option<u64>,
    /// Combo-purchase threshold lambda_c for rdtsr/dtsr (money units, default C_c)
    #[arg(long)]
    lambda_c: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct EnsembleArgs {
    /// Number of sequences in the ensemble
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    /// Master seed; sequence i uses a seed derived from (seed, i)
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Ensemble composition
    #[arg(long, value_enum, default_value_t = MixArg::Mixed)]
    mix: MixArg,
    #[command(flatten)]
    workload: WorkloadArgs,
}

impl EnsembleArgs {
    fn config(&self, num_items: usize) -> EnsembleConfig {
        EnsembleConfig {
            mix: self.mix.into(),
            num_items,
            horizon_max: self.workload.horizon_max,
            multi_unit: self.workload.multi_unit,
            amount_max: self.workload.amount_max,
            count: self.count,
            master_seed: self.seed,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct OutputArgs {
    /// Results CSV to write (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the results as JSON with a meta block
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads; results do not depend on this
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Append a cum_norm_cost column (sum of costs over sum of OPT)
    #[arg(long)]
    cum_norm: bool,
}

#[derive(Args, Debug, Serialize)]
struct SweepCcArgs {
    /// Number of items K
    #[arg(long = "k", default_value_t = 6)]
    k: usize,
    /// Single-item purchase price C_s (money units)
    #[arg(long, default_value_t = 9)]
    cs: u64,
    /// Combo prices: a range "a:b[:step]" or a list "a,b,c" (money units)
    #[arg(long, default_value = "15:40")]
    cc: String,
    /// Policies, comma separated: rdtsr, dtsr, ftp, ladtsr:<theta>
    #[arg(long, default_value = "rdtsr,dtsr")]
    algos: String,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    predictor: PredictorArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct SweepThetaArgs {
    #[command(flatten)]
    prices: PriceArgs,
    /// Trust values in [0, 1], comma separated
    #[arg(long, default_value = "0,1/4,1/2,3/4,1")]
    thetas: String,
    /// Prediction biases mu: a range "a:b[:step]" or a list (units)
    #[arg(long, default_value = "-50:20:10", allow_hyphen_values = true)]
    biases: String,
    /// Half-width w of the uniform integer prediction noise (units)
    #[arg(long, default_value_t = 0)]
    noise: u64,
    /// Seed of the prediction noise
    #[arg(long, default_value_t = 1)]
    pred_seed: u64,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    /// Single-item purchase price C_s (money units)
    #[arg(long, default_value_t = 9)]
    cs: u64,
    /// Combo purchase price C_c (money units)
    #[arg(long, default_value_t = 30)]
    cc: u64,
    /// Number of items K (default: the smallest K with C_c < K*C_s)
    #[arg(long = "k")]
    k: Option<usize>,
    /// Trust theta in (0, 1); adds the learning-augmented bounds
    #[arg(long)]
    theta: Option<String>,
    /// Total prediction error eta (units); needs --opt
    #[arg(long)]
    eta: Option<u64>,
    /// Offline optimum OPT (money units); needs --eta
    #[arg(long)]
    opt: Option<u64>,
    /// Single-purchase threshold lambda_s (money units); with --lambda-c
    #[arg(long)]
    lambda_s: Option<u64>,
    /// Combo-purchase threshold lambda_c (money units); with --lambda-s
    #[arg(long)]
    lambda_c: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct OracleArgs {
    /// Longest horizon of the exhaustive two-item grid (slots)
    #[arg(long, default_value_t = 4)]
    grid_horizon: usize,
    /// Largest per-slot amount in the exhaustive grid (units)
    #[arg(long, default_value_t = 3)]
    grid_amount: u64,
    /// Number of random instances with K in {3, 4}
    #[arg(long, default_value_t = 1000)]
    random: usize,
    /// Seed of the random instances
    #[arg(long, default_value_t = 11)]
    seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        1
                    } else {
                        0
                    }
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(err, "{first} (see --help)");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let echo = |err: &mut dyn Write, name: &str, args: &dyn erased::Echo| {
        let _ = writeln!(
            err,
            "config: {}",
            json!({ "command": name, "args": args.value() })
        );
    };
    match command {
        Command::Gen(a) => {
            echo(err, "gen", &a);
            cmd_gen(&a, out)
        }
        Command::Run(a) => {
            echo(err, "run", &a);
            cmd_run(&a, out)
        }
        Command::SweepCc(a) => {
            echo(err, "sweep-cc", &a);
            cmd_sweep_cc(&a, out)
        }
        Command::SweepTheta(a) => {
            echo(err, "sweep-theta", &a);
            cmd_sweep_theta(&a, out)
        }
        Command::Bounds(a) => {
            echo(err, "bounds", &a);
            cmd_bounds(&a, out)
        }
        Command::OracleCheck(a) => {
            echo(err, "oracle-check", &a);
            cmd_oracle(&a, out)
        }
    }
}

mod erased {
    /// Lets the dispatcher echo any argument struct without generics.
    pub trait Echo {
        fn value(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> Echo for T {
        fn value(&self) -> serde_json::Value {
            serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
        }
    }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn show(value: &Rational) -> String {
    format!("{value} ≈ {:.6}", to_f64(value))
}

fn parse_trust(text: &str) -> Result<Rational> {
    let theta = parse_rational(text)?;
    if theta < Rational::zero() || theta > Rational::one() {
        return Err(Error::TrustOutOfRange(theta.to_string(), "[0, 1]"));
    }
    Ok(theta)
}

/// `"a:b"`, `"a:b:step"` (inclusive) or `"a,b,c"`.
fn parse_int_list(text: &str, flag: &str) -> Result<Vec<i64>> {
    let bad = |why: &str| Error::Config(format!("--{flag} {text:?}: {why}"));
    let num = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| bad("expected integers"))
    };
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let (lo, hi, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, s] => (num(a)?, num(b)?, num(s)?),
            _ => return Err(bad("a range is a:b or a:b:step")),
        };
        if step <= 0 || lo > hi {
            return Err(bad("a range needs a <= b and a positive step"));
        }
        Ok((lo..=hi).step_by(step as usize).collect())
    } else {
        text.split(',').map(num).collect()
    }
}

fn parse_policies(text: &str) -> Result<Vec<PolicyKind>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            match s {
                "rdtsr" => Ok(PolicyKind::Rdtsr),
                "dtsr" => Ok(PolicyKind::Dtsr),
                "ftp" => Ok(PolicyKind::Ftp),
                _ => {
                    let theta = s
                        .strip_prefix("ladtsr:theta=")
                        .or_else(|| s.strip_prefix("ladtsr:"))
                        .ok_or_else(|| {
                            Error::Config(format!(
                                "unknown policy {s:?}; expected rdtsr, dtsr, ftp or ladtsr:<theta>"
                            ))
                        })?;
                    Ok(PolicyKind::Ladtsr(parse_trust(theta)?))
                }
            }
        })
        .collect()
}

fn totals(seq: &crate::model::DemandSequence, num_items: usize) -> TotalDemand {
    let mut z = vec![0u64; num_items];
    for ev in seq.events() {
        if let Some(i) = ev.item_index() {
            z[i] += ev.amount;
        }
    }
    TotalDemand(z)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = GenConfig {
        kind: a.kind.into(),
        num_items: a.k,
        horizon_max: a.workload.horizon_max,
        multi_unit: a.workload.multi_unit,
        amount_max: a.workload.amount_max,
        seed: a.seed,
    };
    let seq = gen_sequence(&cfg)?;
    write_trace(&a.out, &seq)?;
    writeln!(out, "wrote {} slots to {}", seq.horizon(), a.out.display()).map_err(stdout_err)?;
    if let Some(path) = &a.pred_out {
        let pred = gen_prediction(&totals(&seq, a.k), &a.predictor.config());
        write_prediction(path, &pred)?;
        writeln!(
            out,
            "wrote {} predictions to {}",
            pred.len(),
            path.display()
        )
        .map_err(stdout_err)?;
    }
    Ok(())
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let prices = a.prices.prices()?;
    let seq = load_trace(&a.trace, &prices)?;
    let custom = a.lambda_s.is_some() || a.lambda_c.is_some();
    if custom && !matches!(a.algo, AlgoArg::Rdtsr | AlgoArg::Dtsr) {
        return Err(Error::Config(
            "--lambda-s/--lambda-c apply only to rdtsr and dtsr".into(),
        ));
    }
    if a.theta.is_some() && a.algo != AlgoArg::Ladtsr {
        return Err(Error::Config("--theta applies only to ladtsr".into()));
    }
    let pred: Option<Prediction> = a
        .pred
        .as_ref()
        .map(|p| load_prediction(p, &prices))
        .transpose()?;
    let policy = match a.algo {
        AlgoArg::Rdtsr => PolicyKind::Rdtsr,
        AlgoArg::Dtsr => PolicyKind::Dtsr,
        AlgoArg::Ftp => PolicyKind::Ftp,
        AlgoArg::Ladtsr => {
            let theta = a
                .theta
                .as_deref()
                .ok_or_else(|| Error::Config("ladtsr needs --theta".into()))?;
            PolicyKind::Ladtsr(parse_trust(theta)?)
        }
    };
    if policy.needs_prediction() && pred.is_none() {
        return Err(Error::Config(format!("{policy} needs --pred")));
    }

    let (cost, opt, ratio) = if custom {
        let th = ThresholdSet::rdtsr(
            &prices,
            a.lambda_s.unwrap_or(prices.single_price()),
            a.lambda_c.unwrap_or(prices.combo_price()),
        )?;
        let d = if a.algo == AlgoArg::Rdtsr {
            rdtsr_simulate(&seq, &prices, &th)?
        } else {
            dtsr_simulate(&seq, &prices, &th)?
        };
        let cost = evaluate_cost(&seq, &d, &prices);
        let opt = opt_offline(&total_demand(&seq, &prices)?, &prices);
        let ratio = (opt > 0).then(|| {
            Rational::from_integer(cost.total as i128) / Rational::from_integer(opt as i128)
        });
        (cost, opt, ratio)
    } else {
        let o = run_instance(&policy, &seq, &prices, pred.as_ref())?;
        (o.cost, o.opt, o.ratio)
    };

    let mut lines = vec![
        format!("algo: {policy}"),
        format!("horizon: {}", seq.horizon()),
        format!("rent: {}", cost.rent_cost),
        format!("single: {}", cost.single_cost),
        format!("combo: {}", cost.combo_cost),
        format!("total: {}", cost.total),
        format!("opt: {opt}"),
    ];
    lines.push(match &ratio {
        Some(r) => format!("ratio: {}", show(r)),
        None => "ratio: undefined (OPT = 0)".to_string(),
    });
    for line in lines {
        writeln!(out, "{line}").map_err(stdout_err)?;
    }
    Ok(())
}

fn emit_results(
    output: &OutputArgs,
    seed: u64,
    config: serde_json::Value,
    results: &[SweepResult],
    out: &mut dyn Write,
) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, |w| write_results_csv(w, results, output.cum_norm))?,
        None => write_results_csv(&mut *out, results, output.cum_norm).map_err(stdout_err)?,
    }
    if let Some(path) = &output.json {
        let meta = ResultsMeta::new(seed, config);
        write_file(path, |w| write_results_json(w, &meta, results))?;
    }
    Ok(())
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

fn cmd_sweep_cc(a: &SweepCcArgs, out: &mut dyn Write) -> Result<()> {
    let cc_values = parse_int_list(&a.cc, "cc")?
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| Error::Config(format!("--cc value {v} is negative"))))
        .collect::<Result<Vec<_>>>()?;
    let policies = parse_policies(&a.algos)?;
    let ensemble = a.ensemble.config(a.k);
    let predictor = a.predictor.config();
    let needs_pred = policies.iter().any(PolicyKind::needs_prediction);
    let results = run_cc_sweep(
        a.cs,
        &cc_values,
        &ensemble,
        &policies,
        needs_pred.then_some(&predictor),
        a.output.jobs,
    )?;
    let config = json!({ "command": "sweep-cc", "args": a, "cc_values": cc_values });
    emit_results(&a.output, a.ensemble.seed, config, &results, out)
}

fn cmd_sweep_theta(a: &SweepThetaArgs, out: &mut dyn Write) -> Result<()> {
    let prices = a.prices.prices()?;
    let thetas = a
        .thetas
        .split(',')
        .map(|t| parse_trust(t.trim()))
        .collect::<Result<Vec<_>>>()?;
    let biases = parse_int_list(&a.biases, "biases")?;
    let ensemble = a.ensemble.config(prices.num_items());
    let results = run_theta_bias_sweep(
        &prices,
        &thetas,
        &biases,
        &ensemble,
        a.noise,
        a.pred_seed,
        a.output.jobs,
    )?;
    let config = json!({ "command": "sweep-theta", "args": a, "biases": biases });
    emit_results(&a.output, a.ensemble.seed, config, &results, out)
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<()> {
    if a.cs == 0 {
        return Err(Error::InvalidPrices("C_s must be positive".into()));
    }
    let k = a.k.unwrap_or((a.cc / a.cs + 1) as usize);
    let prices = PriceConfig::new(k, a.cs, a.cc)?;
    let mut lines = vec![format!("rdtsr bound: {}", show(&rdtsr_bound(&prices)))];
    match (a.lambda_s, a.lambda_c) {
        (None, None) => {}
        (Some(ls), Some(lc)) => {
            let th = ThresholdSet::rdtsr(&prices, ls, lc)?;
            lines.push(format!(
                "rdtsr bound at lambda_s={ls}, lambda_c={lc}: {}",
                show(&rdtsr_threshold_bound(&prices, &th)?)
            ));
        }
        _ => {
            return Err(Error::Config(
                "--lambda-s and --lambda-c go together".into(),
            ))
        }
    }
    match (&a.theta, a.eta, a.opt) {
        (None, None, None) => {}
        (None, _, _) => return Err(Error::Config("--eta/--opt need --theta".into())),
        (Some(t), eta, opt) => {
            let theta = parse_rational(t)?;
            lines.push(format!(
                "consistency bound: {}",
                show(&consistency_bound(theta)?)
            ));
            lines.push(format!(
                "robustness bound: {}",
                show(&robustness_bound(theta)?)
            ));
            match (eta, opt) {
                (Some(eta), Some(opt)) => {
                    lines.push(format!(
                        "ladtsr bound: {}",
                        show(&ladtsr_bound(theta, eta, opt)?)
                    ));
                }
                (None, None) => {}
                _ => return Err(Error::Config("--eta and --opt go together".into())),
            }
        }
    }
    for line in lines {
        writeln!(out, "{line}").map_err(stdout_err)?;
    }
    Ok(())
}

fn report_tally(out: &mut dyn Write, name: &str, t: &OracleTally) -> Result<()> {
    let verdict = if t.all_agree() { "pass" } else { "FAIL" };
    writeln!(out, "{name}: {}/{} agree ({verdict})", t.agreed, t.checked).map_err(stdout_err)?;
    for (seq, prices, closed, exhaustive) in &t.mismatches {
        let pairs: Vec<String> = seq
            .events()
            .iter()
            .map(|e| format!("({},{})", e.item, e.amount))
            .collect();
        writeln!(
            out,
            "  K={} C_s={} C_c={} seq=[{}]: closed form {closed}, exhaustive {exhaustive}",
            prices.num_items(),
            prices.single_price(),
            prices.combo_price(),
            pairs.join(" ")
        )
        .map_err(stdout_err)?;
    }
    Ok(())
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let grid = exhaustive_grid(a.grid_horizon, a.grid_amount)?;
    let random = random_instances(a.random, a.seed)?;
    report_tally(out, "exhaustive grid", &grid)?;
    report_tally(out, "random instances", &random)?;
    if grid.all_agree() && random.all_agree() {
        Ok(())
    } else {
        Err(Error::BoundViolation(
            "closed-form OPT disagrees with exhaustive search".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("tlsr").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("15:18", "cc").unwrap(), vec![15, 16, 17, 18]);
        assert_eq!(
            parse_int_list("-50:20:10", "b").unwrap(),
            vec![-50, -40, -30, -20, -10, 0, 10, 20]
        );
        assert_eq!(parse_int_list("3, 5,9", "cc").unwrap(), vec![3, 5, 9]);
        assert!(parse_int_list("5:3", "cc").is_err());
        assert!(parse_int_list("1:5:0", "cc").is_err());
        assert!(parse_int_list("x", "cc").is_err());
    }

    #[test]
    fn policy_lists() {
        let p = parse_policies("rdtsr, ftp,ladtsr:1/4,ladtsr:theta=0.5").unwrap();
        assert_eq!(
            p,
            vec![
                PolicyKind::Rdtsr,
                PolicyKind::Ftp,
                PolicyKind::Ladtsr(Rational::new(1, 4)),
                PolicyKind::Ladtsr(Rational::new(1, 2)),
            ]
        );
        assert!(parse_policies("lru").is_err());
        assert!(parse_policies("ladtsr:2").is_err());
    }

    #[test]
    fn bounds_default_prices() {
        let (code, out, _) = call(&["bounds", "--cs", "9", "--cc", "30"]);
        assert_eq!(code, 0);
        assert!(out.contains("763/270 ≈ 2.825926"), "{out}");
    }

    #[test]
    fn bounds_with_prediction() {
        let (code, out, _) = call(&[
            "bounds", "--cs", "9", "--cc", "30", "--theta", "1/2", "--eta", "0", "--opt", "30",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("ladtsr bound: 7/4 ≈ 1.750000"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["bounds", "--cs", "9", "--cc", "9"]).0, 1);
        assert_eq!(call(&["bounds", "--bogus"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        let (code, _, err) = call(&["run", "--trace", "/nonexistent/trace.csv"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().filter(|l| l.starts_with("error")).count(), 1);
    }
}
