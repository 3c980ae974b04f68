//! Online payment policies.
//!
//! Every policy is a step-wise state machine: it observes one slot's demand
//! and answers with an [`Action`]. [`run_policy`] drives a policy over a whole
//! sequence and collects the [`DecisionRecord`].
//!
//! * [`ThresholdPolicy`] is the robust threshold rule (RDTSR). It keeps an
//!   indicative cost per item and an overall indicative cost, and buys the
//!   combo as soon as the overall cost reaches its threshold, before
//!   considering a single purchase. With per-item thresholds derived from a
//!   prediction it is the learning-augmented variant (LADTSR).
//! * [`FtpPolicy`] follows the prediction blindly.
//! * [`DtsrPolicy`] is a reconstruction of the earlier deterministic baseline,
//!   which checks single purchases first and stops feeding an item into the
//!   overall indicative cost once it is bought.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DecisionRecord, DemandEvent, DemandSequence, PriceConfig};
use crate::rational::{int, Rational, Threshold};

/// Predicted per-item totals `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prediction(pub Vec<u64>);

impl Prediction {
    pub fn per_item(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_len(&self, prices: &PriceConfig) -> Result<()> {
        if self.0.len() != prices.num_items() {
            return Err(Error::LengthMismatch {
                expected: prices.num_items(),
                actual: self.0.len(),
            });
        }
        Ok(())
    }

    /// `Σ_k min{C_s, y_k} >= C_c`: the prediction says the combo beats
    /// buying items individually.
    pub fn suggests_combo(&self, prices: &PriceConfig) -> bool {
        let cs = prices.single_price();
        self.0.iter().map(|&y| y.min(cs)).sum::<u64>() >= prices.combo_price()
    }
}

/// Purchase thresholds: one per item plus the combo threshold. `trust` is set
/// only for thresholds derived from a prediction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThresholdSet {
    pub single: Vec<Threshold>,
    pub combo: Threshold,
    pub trust: Option<Rational>,
}

impl ThresholdSet {
    /// Shared integer thresholds `λ_s ∈ (1, C_s]`, `λ_c ∈ (1, C_c]`.
    pub fn rdtsr(prices: &PriceConfig, lambda_s: u64, lambda_c: u64) -> Result<Self> {
        let set = ThresholdSet {
            single: vec![Threshold::from_int(lambda_s); prices.num_items()],
            combo: Threshold::from_int(lambda_c),
            trust: None,
        };
        set.validate_rdtsr(prices)?;
        Ok(set)
    }

    /// `λ_s = C_s`, `λ_c = C_c`, the choice that attains the robust bound.
    pub fn rdtsr_default(prices: &PriceConfig) -> Self {
        ThresholdSet {
            single: vec![Threshold::from_int(prices.single_price()); prices.num_items()],
            combo: Threshold::from_int(prices.combo_price()),
            trust: None,
        }
    }

    /// The common single threshold, if all items share one.
    pub fn shared_single(&self) -> Option<Threshold> {
        let first = *self.single.first()?;
        self.single.iter().all(|t| *t == first).then_some(first)
    }

    /// Checks the robust-policy constraints and returns `(λ_s, λ_c)`.
    pub fn validate_rdtsr(&self, prices: &PriceConfig) -> Result<(u64, u64)> {
        if self.single.len() != prices.num_items() {
            return Err(Error::InvalidThresholds(format!(
                "{} single thresholds for {} items",
                self.single.len(),
                prices.num_items()
            )));
        }
        let shared = self
            .shared_single()
            .ok_or_else(|| Error::InvalidThresholds("single thresholds must be shared".into()))?;
        let as_int = |t: Threshold, what: &str, upper: u64| -> Result<u64> {
            let v = t.finite().filter(|v| v.is_integer()).ok_or_else(|| {
                Error::InvalidThresholds(format!("{what} must be a finite integer"))
            })?;
            let v = v.to_integer();
            if v <= 1 || v > upper as i128 {
                return Err(Error::InvalidThresholds(format!(
                    "{what} = {v} must lie in (1, {upper}]"
                )));
            }
            Ok(v as u64)
        };
        let ls = as_int(shared, "lambda_s", prices.single_price())?;
        let lc = as_int(self.combo, "lambda_c", prices.combo_price())?;
        Ok((ls, lc))
    }
}

fn check_trust(trust: &Rational) -> Result<()> {
    if *trust < Rational::zero() || *trust > Rational::one() {
        return Err(Error::TrustOutOfRange(trust.to_string(), "[0, 1]"));
    }
    Ok(())
}

/// Thresholds adjusted by a prediction and trust `θ ∈ [0, 1]`:
/// `λ_{s,k} = θ C_s` if `y_k >= C_s`, else `C_s / θ`;
/// `λ_c = θ² C_c` if the prediction suggests the combo, else `C_c / θ`.
/// Division by zero gives `+∞`.
pub fn ladtsr_thresholds(
    pred: &Prediction,
    prices: &PriceConfig,
    trust: Rational,
) -> Result<ThresholdSet> {
    check_trust(&trust)?;
    pred.check_len(prices)?;
    let cs = int(prices.single_price());
    let cc = int(prices.combo_price());
    let single = pred
        .0
        .iter()
        .map(|&y| {
            if y >= prices.single_price() {
                Threshold::Finite(trust * cs)
            } else {
                Threshold::divide(cs, trust)
            }
        })
        .collect();
    let combo = if pred.suggests_combo(prices) {
        Threshold::Finite(trust * trust * cc)
    } else {
        Threshold::divide(cc, trust)
    };
    Ok(ThresholdSet {
        single,
        combo,
        trust: Some(trust),
    })
}

/// What a policy does with one slot's demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// The slot carries no demand.
    Idle,
    /// The demand is already covered by an earlier purchase.
    Covered,
    Rent,
    /// Single purchase of the zero-based item.
    Single(usize),
    Combo,
}

pub trait Policy {
    fn name(&self) -> &'static str;

    fn observe(&mut self, event: &DemandEvent) -> Action;
}

/// Feeds `seq` to `policy` slot by slot and records its decisions.
pub fn run_policy<P: Policy + ?Sized>(
    policy: &mut P,
    seq: &DemandSequence,
    num_items: usize,
) -> DecisionRecord {
    let mut record = DecisionRecord::new(seq.horizon(), num_items);
    for ev in seq.events() {
        match policy.observe(ev) {
            Action::Idle | Action::Covered => {}
            Action::Rent => record.rent_flags[ev.slot - 1] = true,
            Action::Single(k) => {
                debug_assert!(record.single_times[k].is_none());
                record.single_times[k] = Some(ev.slot);
            }
            Action::Combo => {
                debug_assert!(record.combo_time.is_none());
                record.combo_time = Some(ev.slot);
            }
        }
    }
    record
}

/// Indicative costs `ψ_k(t)` and `ψ_c(t)` after the last observed slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicativeState {
    pub per_item: Vec<u64>,
    pub overall: Rational,
    pub current_slot: usize,
}

impl IndicativeState {
    fn new(num_items: usize) -> Self {
        IndicativeState {
            per_item: vec![0; num_items],
            overall: Rational::zero(),
            current_slot: 0,
        }
    }
}

/// Purchase bookkeeping shared by the policies.
#[derive(Clone, Debug)]
struct Holdings {
    single: Vec<bool>,
    combo: bool,
}

impl Holdings {
    fn new(num_items: usize) -> Self {
        Holdings {
            single: vec![false; num_items],
            combo: false,
        }
    }

    fn covers(&self, item: usize) -> bool {
        self.combo || self.single[item]
    }
}

/// The robust threshold policy (RDTSR); with prediction-derived thresholds it
/// is the learning-augmented policy (LADTSR).
#[derive(Clone, Debug)]
pub struct ThresholdPolicy {
    thresholds: ThresholdSet,
    state: IndicativeState,
    held: Holdings,
    name: &'static str,
}

impl ThresholdPolicy {
    pub fn rdtsr(prices: &PriceConfig, thresholds: ThresholdSet) -> Result<Self> {
        thresholds.validate_rdtsr(prices)?;
        Ok(Self::with_thresholds(prices, thresholds, "rdtsr"))
    }

    pub fn ladtsr(prices: &PriceConfig, pred: &Prediction, trust: Rational) -> Result<Self> {
        let thresholds = ladtsr_thresholds(pred, prices, trust)?;
        Ok(Self::with_thresholds(prices, thresholds, "ladtsr"))
    }

    fn with_thresholds(prices: &PriceConfig, thresholds: ThresholdSet, name: &'static str) -> Self {
        ThresholdPolicy {
            thresholds,
            state: IndicativeState::new(prices.num_items()),
            held: Holdings::new(prices.num_items()),
            name,
        }
    }

    pub fn state(&self) -> &IndicativeState {
        &self.state
    }

    pub fn thresholds(&self) -> &ThresholdSet {
        &self.thresholds
    }
}

impl Policy for ThresholdPolicy {
    fn name(&self) -> &'static str {
        self.name
    }

    fn observe(&mut self, ev: &DemandEvent) -> Action {
        self.state.current_slot = ev.slot;
        let Some(k) = ev.item_index() else {
            return Action::Idle;
        };
        if self.held.covers(k) {
            return Action::Covered;
        }
        let threshold = self.thresholds.single[k];
        let before = int(self.state.per_item[k]);
        self.state.per_item[k] += ev.amount;
        let after = int(self.state.per_item[k]);
        self.state.overall += threshold.cap(after) - threshold.cap(before);

        if self.thresholds.combo.is_reached_by(&self.state.overall) {
            self.held.combo = true;
            Action::Combo
        } else if threshold.is_reached_by(&after) {
            self.held.single[k] = true;
            Action::Single(k)
        } else {
            Action::Rent
        }
    }
}

/// Reconstructed baseline: single purchase takes priority over the combo, and
/// the slot that triggers a single purchase is not added to `ψ_c`, so the
/// item's contribution stays frozen at its pre-purchase value.
#[derive(Clone, Debug)]
pub struct DtsrPolicy {
    single_threshold: Threshold,
    combo_threshold: Threshold,
    state: IndicativeState,
    held: Holdings,
}

impl DtsrPolicy {
    pub fn new(prices: &PriceConfig, thresholds: &ThresholdSet) -> Result<Self> {
        thresholds.validate_rdtsr(prices)?;
        Ok(DtsrPolicy {
            single_threshold: thresholds.single[0],
            combo_threshold: thresholds.combo,
            state: IndicativeState::new(prices.num_items()),
            held: Holdings::new(prices.num_items()),
        })
    }

    pub fn state(&self) -> &IndicativeState {
        &self.state
    }
}

impl Policy for DtsrPolicy {
    fn name(&self) -> &'static str {
        "dtsr"
    }

    fn observe(&mut self, ev: &DemandEvent) -> Action {
        self.state.current_slot = ev.slot;
        let Some(k) = ev.item_index() else {
            return Action::Idle;
        };
        if self.held.covers(k) {
            return Action::Covered;
        }
        let before = int(self.state.per_item[k]);
        self.state.per_item[k] += ev.amount;
        let after = int(self.state.per_item[k]);

        if self.single_threshold.is_reached_by(&after) {
            self.held.single[k] = true;
            return Action::Single(k);
        }
        let t = self.single_threshold;
        self.state.overall += t.cap(after) - t.cap(before);
        if self.combo_threshold.is_reached_by(&self.state.overall) {
            self.held.combo = true;
            Action::Combo
        } else {
            Action::Rent
        }
    }
}

/// Follow the prediction: buy the combo at the first demand if the prediction
/// favours it, otherwise buy each item predicted to reach `C_s` at its first
/// demand and rent the rest.
#[derive(Clone, Debug)]
pub struct FtpPolicy {
    combo_planned: bool,
    single_planned: Vec<bool>,
    held: Holdings,
}

impl FtpPolicy {
    pub fn new(prices: &PriceConfig, pred: &Prediction) -> Result<Self> {
        pred.check_len(prices)?;
        Ok(FtpPolicy {
            combo_planned: pred.suggests_combo(prices),
            single_planned: pred.0.iter().map(|&y| y >= prices.single_price()).collect(),
            held: Holdings::new(prices.num_items()),
        })
    }
}

impl Policy for FtpPolicy {
    fn name(&self) -> &'static str {
        "ftp"
    }

    fn observe(&mut self, ev: &DemandEvent) -> Action {
        let Some(k) = ev.item_index() else {
            return Action::Idle;
        };
        if self.held.covers(k) {
            Action::Covered
        } else if self.combo_planned {
            self.held.combo = true;
            Action::Combo
        } else if self.single_planned[k] {
            self.held.single[k] = true;
            Action::Single(k)
        } else {
            Action::Rent
        }
    }
}

pub fn rdtsr_simulate(
    seq: &DemandSequence,
    prices: &PriceConfig,
    thresholds: &ThresholdSet,
) -> Result<DecisionRecord> {
    seq.check_items(prices)?;
    let mut policy = ThresholdPolicy::rdtsr(prices, thresholds.clone())?;
    Ok(run_policy(&mut policy, seq, prices.num_items()))
}

pub fn ladtsr_simulate(
    seq: &DemandSequence,
    prices: &PriceConfig,
    pred: &Prediction,
    trust: Rational,
) -> Result<DecisionRecord> {
    seq.check_items(prices)?;
    let mut policy = ThresholdPolicy::ladtsr(prices, pred, trust)?;
    Ok(run_policy(&mut policy, seq, prices.num_items()))
}

pub fn ftp_simulate(
    seq: &DemandSequence,
    prices: &PriceConfig,
    pred: &Prediction,
) -> Result<DecisionRecord> {
    seq.check_items(prices)?;
    let mut policy = FtpPolicy::new(prices, pred)?;
    Ok(run_policy(&mut policy, seq, prices.num_items()))
}

pub fn dtsr_simulate(
    seq: &DemandSequence,
    prices: &PriceConfig,
    thresholds: &ThresholdSet,
) -> Result<DecisionRecord> {
    seq.check_items(prices)?;
    let mut policy = DtsrPolicy::new(prices, thresholds)?;
    Ok(run_policy(&mut policy, seq, prices.num_items()))
}

/// A policy selection as used by the harness and the CLI. The robust policies
/// run with `λ_s = C_s`, `λ_c = C_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Rdtsr,
    Dtsr,
    Ftp,
    Ladtsr(Rational),
}

impl PolicyKind {
    pub fn needs_prediction(&self) -> bool {
        matches!(self, PolicyKind::Ftp | PolicyKind::Ladtsr(_))
    }

    pub fn simulate(
        &self,
        seq: &DemandSequence,
        prices: &PriceConfig,
        pred: Option<&Prediction>,
    ) -> Result<DecisionRecord> {
        let need =
            || pred.ok_or_else(|| Error::Config(format!("policy {self} needs a prediction")));
        match self {
            PolicyKind::Rdtsr => rdtsr_simulate(seq, prices, &ThresholdSet::rdtsr_default(prices)),
            PolicyKind::Dtsr => dtsr_simulate(seq, prices, &ThresholdSet::rdtsr_default(prices)),
            PolicyKind::Ftp => ftp_simulate(seq, prices, need()?),
            PolicyKind::Ladtsr(theta) => ladtsr_simulate(seq, prices, need()?, *theta),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Rdtsr => f.write_str("rdtsr"),
            PolicyKind::Dtsr => f.write_str("dtsr"),
            PolicyKind::Ftp => f.write_str("ftp"),
            PolicyKind::Ladtsr(theta) => write!(f, "ladtsr:theta={theta}"),
        }
    }
}
