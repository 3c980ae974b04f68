//! Synthetic workloads, a biased predictor, and the trace/prediction CSV
//! formats.
//!
//! Trace CSV: header `t,item,amount`, one row per slot with a 1-based slot,
//! a 1-based item (or `0` for no demand) and a non-negative amount. Slots not
//! listed are empty; the horizon is the largest listed slot. A row with a
//! positive item and amount `0` is read as an empty slot.
//!
//! Prediction CSV: header `item,y`, one row per item `1..=K`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::Prediction;
use crate::error::{Error, Result};
use crate::model::{DemandEvent, DemandSequence, PriceConfig, TotalDemand};

pub const DEFAULT_HORIZON_MAX: usize = 60;
pub const DEFAULT_AMOUNT_MAX: u64 = 5;
/// Share of demand that the long-tailed workload sends to its hot items.
pub const HOT_SHARE: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkloadKind {
    Uniform,
    LongTailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub kind: WorkloadKind,
    pub num_items: usize,
    pub horizon_max: usize,
    pub multi_unit: bool,
    pub amount_max: u64,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(kind: WorkloadKind, num_items: usize, seed: u64) -> Self {
        GenConfig {
            kind,
            num_items,
            horizon_max: DEFAULT_HORIZON_MAX,
            multi_unit: false,
            amount_max: DEFAULT_AMOUNT_MAX,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_items == 0 {
            return Err(Error::Config("num_items must be at least 1".into()));
        }
        if self.horizon_max == 0 {
            return Err(Error::Config("horizon_max must be at least 1".into()));
        }
        if self.amount_max == 0 {
            return Err(Error::Config("amount_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// Number of hot items in the long-tailed workload: `⌈0.2 K⌉`.
pub fn hot_set_size(num_items: usize) -> usize {
    num_items.div_ceil(5)
}

/// Seed for element `index` of an ensemble. Each index reads its own ChaCha
/// stream, so the result does not depend on generation order.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Draws `T ~ U[1, horizon_max]` and one demand per slot.
pub fn gen_sequence(cfg: &GenConfig) -> Result<DemandSequence> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let horizon = rng.gen_range(1..=cfg.horizon_max);
    let hot = hot_set_size(cfg.num_items);
    let events = (1..=horizon)
        .map(|slot| {
            let item = match cfg.kind {
                WorkloadKind::Uniform => rng.gen_range(1..=cfg.num_items),
                WorkloadKind::LongTailed => {
                    let to_hot = rng.gen_bool(HOT_SHARE);
                    if to_hot || hot == cfg.num_items {
                        rng.gen_range(1..=hot)
                    } else {
                        rng.gen_range(hot + 1..=cfg.num_items)
                    }
                }
            };
            let amount = if cfg.multi_unit {
                rng.gen_range(1..=cfg.amount_max)
            } else {
                1
            };
            DemandEvent { slot, item, amount }
        })
        .collect();
    DemandSequence::new(events)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictorConfig {
    pub bias: i64,
    pub noise_halfwidth: u64,
    pub seed: u64,
}

impl PredictorConfig {
    pub fn perfect() -> Self {
        PredictorConfig {
            bias: 0,
            noise_halfwidth: 0,
            seed: 0,
        }
    }
}

/// `y_k = max(0, z_k + μ + u_k)` with `u_k ~ U{-w, ..., w}`.
pub fn gen_prediction(z: &TotalDemand, cfg: &PredictorConfig) -> Prediction {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let w = cfg.noise_halfwidth as i64;
    Prediction(
        z.per_item()
            .iter()
            .map(|&zk| {
                let noise = if w > 0 { rng.gen_range(-w..=w) } else { 0 };
                (zk as i64 + cfg.bias + noise).max(0) as u64
            })
            .collect(),
    )
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(r)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        kind => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{kind:?}"),
        },
    }
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, path: &Path, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    Ok(())
}

fn field<T: std::str::FromStr>(
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
    path: &Path,
    line: u64,
) -> Result<T> {
    let raw = record.get(idx).unwrap_or("");
    raw.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("{name} `{raw}` is not a non-negative integer"),
    })
}

/// Reads a trace from any reader; `path` is only used in error messages.
pub fn parse_trace<R: Read>(
    reader: R,
    prices: &PriceConfig,
    path: &Path,
) -> Result<DemandSequence> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, path, &["t", "item", "amount"])?;
    let mut rows: Vec<(usize, usize, u64, u64)> = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let slot: usize = field(&record, 0, "slot", path, line)?;
        let item: usize = field(&record, 1, "item", path, line)?;
        let amount: u64 = field(&record, 2, "amount", path, line)?;
        if slot == 0 {
            return Err(parse_err("slot must be at least 1".into()));
        }
        if item > prices.num_items() {
            return Err(parse_err(format!(
                "item {item} is out of range 1..={}",
                prices.num_items()
            )));
        }
        if item == 0 && amount > 0 {
            return Err(parse_err(format!(
                "amount {amount} given for item 0 (no demand)"
            )));
        }
        rows.push((slot, item, amount, line));
    }
    rows.sort_by_key(|r| (r.0, r.3));
    for pair in rows.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: pair[1].3,
                message: format!(
                    "duplicate slot {} (first seen on line {})",
                    pair[1].0, pair[0].3
                ),
            });
        }
    }
    let horizon = rows.last().map_or(0, |r| r.0);
    let mut events: Vec<DemandEvent> = (1..=horizon).map(DemandEvent::none).collect();
    for (slot, item, amount, _) in rows {
        if item > 0 && amount > 0 {
            events[slot - 1] = DemandEvent { slot, item, amount };
        }
    }
    DemandSequence::new(events)
}

pub fn load_trace(path: impl AsRef<Path>, prices: &PriceConfig) -> Result<DemandSequence> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_trace(file, prices, path)
}

/// Writes every slot, empty ones as `t,0,0`, so the horizon survives a reload.
pub fn write_trace_to<W: Write>(writer: W, seq: &DemandSequence) -> std::io::Result<()> {
    let mut w = csv_writer(writer);
    w.write_record(["t", "item", "amount"])?;
    for ev in seq.events() {
        w.write_record([
            ev.slot.to_string(),
            ev.item.to_string(),
            ev.amount.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_trace(path: impl AsRef<Path>, seq: &DemandSequence) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace_to(file, seq).map_err(|e| Error::io(path, e))
}

pub fn parse_prediction<R: Read>(
    reader: R,
    prices: &PriceConfig,
    path: &Path,
) -> Result<Prediction> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, path, &["item", "y"])?;
    let k = prices.num_items();
    let mut values: Vec<Option<u64>> = vec![None; k];
    for result in rdr.records() {
        let record = result.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let item: usize = field(&record, 0, "item", path, line)?;
        let y: u64 = field(&record, 1, "y", path, line)?;
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        if item == 0 || item > k {
            return Err(parse_err(format!("item {item} is out of range 1..={k}")));
        }
        if values[item - 1].replace(y).is_some() {
            return Err(parse_err(format!("duplicate prediction for item {item}")));
        }
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("no prediction for item {}", missing + 1),
        });
    }
    Ok(Prediction(values.into_iter().flatten().collect()))
}

pub fn load_prediction(path: impl AsRef<Path>, prices: &PriceConfig) -> Result<Prediction> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_prediction(file, prices, path)
}

pub fn write_prediction_to<W: Write>(writer: W, pred: &Prediction) -> std::io::Result<()> {
    let mut w = csv_writer(writer);
    w.write_record(["item", "y"])?;
    for (k, y) in pred.per_item().iter().enumerate() {
        w.write_record([(k + 1).to_string(), y.to_string()])?;
    }
    w.flush()
}

pub fn write_prediction(path: impl AsRef<Path>, pred: &Prediction) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_prediction_to(file, pred).map_err(|e| Error::io(path, e))
}
