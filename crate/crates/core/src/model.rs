//! Domain model shared by every policy: prices, demand sequences, purchase
//! decisions and the cost of a decision record.
//!
//! Items are numbered `1..=K` in [`DemandEvent::item`] with `0` meaning "no
//! demand in this slot". Every per-item vector in this crate is indexed
//! `0..K`, i.e. item `k` lives at index `k - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of items `K` and the two purchase prices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PriceConfig {
    num_items: usize,
    single_price: u64,
    combo_price: u64,
}

impl PriceConfig {
    /// Requires `K >= 1`, `C_s > 1` and `C_s < C_c < K * C_s`.
    pub fn new(num_items: usize, single_price: u64, combo_price: u64) -> Result<Self> {
        if num_items == 0 {
            return Err(Error::InvalidPrices(
                "need at least one item (K >= 1)".into(),
            ));
        }
        if single_price <= 1 {
            return Err(Error::InvalidPrices(format!(
                "single price C_s = {single_price} must exceed the unit rental cost 1"
            )));
        }
        let upper = (num_items as u64).saturating_mul(single_price);
        if combo_price <= single_price || combo_price >= upper {
            return Err(Error::InvalidPrices(format!(
                "combo price C_c = {combo_price} must lie strictly between C_s = {single_price} and K*C_s = {upper}"
            )));
        }
        Ok(PriceConfig {
            num_items,
            single_price,
            combo_price,
        })
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn single_price(&self) -> u64 {
        self.single_price
    }

    pub fn combo_price(&self) -> u64 {
        self.combo_price
    }
}

/// Demand `d(t) = (i(t), a(t))` arriving in one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DemandEvent {
    pub slot: usize,
    pub item: usize,
    pub amount: u64,
}

impl DemandEvent {
    pub fn none(slot: usize) -> Self {
        DemandEvent {
            slot,
            item: 0,
            amount: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.item == 0
    }

    /// Zero-based item index, or `None` for an empty slot.
    pub fn item_index(&self) -> Option<usize> {
        self.item.checked_sub(1)
    }
}

/// A dense sequence of demand events covering slots `1..=T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DemandSequence {
    events: Vec<DemandEvent>,
}

impl DemandSequence {
    pub fn new(events: Vec<DemandEvent>) -> Result<Self> {
        for (idx, ev) in events.iter().enumerate() {
            if ev.slot != idx + 1 {
                return Err(Error::InvalidSequence(format!(
                    "event #{} has slot {}, expected {} (slots must be dense and start at 1)",
                    idx + 1,
                    ev.slot,
                    idx + 1
                )));
            }
            if (ev.item == 0) != (ev.amount == 0) {
                return Err(Error::InvalidSequence(format!(
                    "slot {}: item {} with amount {} (item 0 must carry amount 0 and vice versa)",
                    ev.slot, ev.item, ev.amount
                )));
            }
        }
        Ok(DemandSequence { events })
    }

    /// Builds a sequence from `(item, amount)` pairs for slots `1, 2, ...`.
    pub fn from_pairs(pairs: &[(usize, u64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(item, amount))| DemandEvent {
                    slot: i + 1,
                    item,
                    amount,
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        DemandSequence { events: Vec::new() }
    }

    pub fn events(&self) -> &[DemandEvent] {
        &self.events
    }

    pub fn horizon(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn max_item(&self) -> usize {
        self.events.iter().map(|e| e.item).max().unwrap_or(0)
    }

    /// Errors if any event names an item beyond `K`.
    pub fn check_items(&self, prices: &PriceConfig) -> Result<()> {
        match self.events.iter().find(|e| e.item > prices.num_items()) {
            Some(ev) => Err(Error::InvalidSequence(format!(
                "slot {}: item {} is out of range 1..={}",
                ev.slot,
                ev.item,
                prices.num_items()
            ))),
            None => Ok(()),
        }
    }

    /// The same demands in a different slot order; `order[j]` is the old
    /// zero-based position placed at slot `j + 1`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        let events = order
            .iter()
            .enumerate()
            .map(|(j, &old)| DemandEvent {
                slot: j + 1,
                ..self.events[old]
            })
            .collect();
        DemandSequence { events }
    }
}

/// Per-item total demand `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TotalDemand(pub Vec<u64>);

impl TotalDemand {
    pub fn zeros(num_items: usize) -> Self {
        TotalDemand(vec![0; num_items])
    }

    pub fn per_item(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    /// A dense sequence realizing this total, one slot per item with positive
    /// demand, in item order.
    pub fn realize(&self) -> DemandSequence {
        let pairs: Vec<(usize, u64)> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &z)| z > 0)
            .map(|(k, &z)| (k + 1, z))
            .collect();
        DemandSequence::from_pairs(&pairs).expect("positive amounts on valid items")
    }
}

/// `z_k = Σ_t 1{i(t)=k} a(t)`.
pub fn total_demand(seq: &DemandSequence, prices: &PriceConfig) -> Result<TotalDemand> {
    seq.check_items(prices)?;
    let mut z = vec![0u64; prices.num_items()];
    for ev in seq.events() {
        if let Some(k) = ev.item_index() {
            z[k] += ev.amount;
        }
    }
    Ok(TotalDemand(z))
}

/// Rental flags per slot plus the (at most one) purchase time per item and for
/// the combo. `None` stands for a purchase that never happens (`t = ∞`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub rent_flags: Vec<bool>,
    pub single_times: Vec<Option<usize>>,
    pub combo_time: Option<usize>,
}

impl DecisionRecord {
    pub fn new(horizon: usize, num_items: usize) -> Self {
        DecisionRecord {
            rent_flags: vec![false; horizon],
            single_times: vec![None; num_items],
            combo_time: None,
        }
    }

    /// Rents every positive demand and never buys.
    pub fn all_rent(seq: &DemandSequence, num_items: usize) -> Self {
        DecisionRecord {
            rent_flags: seq.events().iter().map(|e| e.amount > 0).collect(),
            single_times: vec![None; num_items],
            combo_time: None,
        }
    }

    /// Whether slot `slot` for zero-based `item` is covered by a purchase made
    /// at or before it.
    pub fn covers(&self, slot: usize, item: usize) -> bool {
        let by = |t: Option<usize>| t.is_some_and(|t| slot >= t);
        by(self.combo_time) || by(self.single_times.get(item).copied().flatten())
    }

    pub fn num_single_purchases(&self) -> usize {
        self.single_times.iter().filter(|t| t.is_some()).count()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub rent_cost: u64,
    pub single_cost: u64,
    pub combo_cost: u64,
    pub total: u64,
}

/// Total cost: rentals, plus `C_s` per single purchase, plus `C_c` for the combo.
/// Purchases scheduled after the horizon are free.
pub fn evaluate_cost(
    seq: &DemandSequence,
    decisions: &DecisionRecord,
    prices: &PriceConfig,
) -> CostBreakdown {
    let horizon = seq.horizon();
    let rent_cost = seq
        .events()
        .iter()
        .zip(&decisions.rent_flags)
        .filter(|(_, &r)| r)
        .map(|(e, _)| e.amount)
        .sum();
    let within = |t: &Option<usize>| t.is_some_and(|t| t <= horizon);
    let single_cost =
        prices.single_price() * decisions.single_times.iter().filter(|t| within(t)).count() as u64;
    let combo_cost = if within(&decisions.combo_time) {
        prices.combo_price()
    } else {
        0
    };
    CostBreakdown {
        rent_cost,
        single_cost,
        combo_cost,
        total: rent_cost + single_cost + combo_cost,
    }
}

/// Every positive demand is rented or covered by an earlier-or-same-slot purchase.
pub fn check_feasible(seq: &DemandSequence, decisions: &DecisionRecord) -> bool {
    if decisions.rent_flags.len() < seq.horizon() {
        return false;
    }
    seq.events().iter().all(|ev| match ev.item_index() {
        Some(k) if ev.amount > 0 => {
            decisions.rent_flags[ev.slot - 1] || decisions.covers(ev.slot, k)
        }
        _ => true,
    })
}
