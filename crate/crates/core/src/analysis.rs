//! Offline optimum, an exhaustive oracle for it, the analytical competitive
//! bounds, per-total-demand cost upper bounds `U_ALG(z)`, and the
//! standard-total-demand constructions used to reason about worst cases.

use num_traits::{One, Zero};

use crate::algorithms::{ladtsr_thresholds, Prediction, ThresholdSet};
use crate::error::{Error, Result};
use crate::model::{DemandSequence, PriceConfig, TotalDemand};
use crate::rational::{ceil, int, Rational, Threshold};

/// `OPT(z) = min{C_c, Σ_k min{z_k, C_s}}`.
pub fn opt_offline(z: &TotalDemand, prices: &PriceConfig) -> u64 {
    let cs = prices.single_price();
    let separate: u64 = z.per_item().iter().map(|&zk| zk.min(cs)).sum();
    separate.min(prices.combo_price())
}

pub const BRUTE_FORCE_MAX_ITEMS: usize = 4;
pub const BRUTE_FORCE_MAX_HORIZON: usize = 8;

/// Exhaustive offline optimum over every purchase schedule
/// `(t_1, ..., t_K, t_c) ∈ ({1..T} ∪ {∞})^(K+1)`, renting whatever is left
/// uncovered. Limited to `K <= 4`, `T <= 8`.
pub fn brute_force_opt(seq: &DemandSequence, prices: &PriceConfig) -> Result<u64> {
    let k = prices.num_items();
    let horizon = seq.horizon();
    if k > BRUTE_FORCE_MAX_ITEMS || horizon > BRUTE_FORCE_MAX_HORIZON {
        return Err(Error::InstanceTooLarge(format!(
            "K = {k}, T = {horizon} (limits K <= {BRUTE_FORCE_MAX_ITEMS}, T <= {BRUTE_FORCE_MAX_HORIZON})"
        )));
    }
    seq.check_items(prices)?;

    // 0 encodes "never", 1..=T a purchase slot
    let choices = horizon + 1;
    let mut times = vec![0usize; k + 1];
    let mut best = u64::MAX;
    loop {
        let (singles, combo) = times.split_at(k);
        let combo = combo[0];
        let mut cost = 0u64;
        cost += prices.single_price() * singles.iter().filter(|&&t| t > 0).count() as u64;
        if combo > 0 {
            cost += prices.combo_price();
        }
        for ev in seq.events() {
            let Some(item) = ev.item_index() else {
                continue;
            };
            let covered = |t: usize| t > 0 && ev.slot >= t;
            if !covered(combo) && !covered(singles[item]) {
                cost += ev.amount;
            }
        }
        best = best.min(cost);

        let mut pos = 0;
        loop {
            if pos == times.len() {
                return Ok(best);
            }
            times[pos] += 1;
            if times[pos] < choices {
                break;
            }
            times[pos] = 0;
            pos += 1;
        }
    }
}

/// `3 - 1/C_s - (1/C_c)(2 - 1/C_s)`.
pub fn rdtsr_bound(prices: &PriceConfig) -> Rational {
    let cs = int(prices.single_price());
    let cc = int(prices.combo_price());
    let one = Rational::one();
    int(3) - one / cs - (one / cc) * (int(2) - one / cs)
}

/// Competitive bound of the robust policy for general integer thresholds,
/// `max{(λ_s - 1 + C_s)/λ_s, (λ_c - 1 + C_c + (λ_c - 1)(C_s - 1)/λ_s) / min{C_c, λ_c}}`.
/// Equals [`rdtsr_bound`] at `λ_s = C_s`, `λ_c = C_c`.
pub fn rdtsr_threshold_bound(prices: &PriceConfig, thresholds: &ThresholdSet) -> Result<Rational> {
    let (ls, lc) = thresholds.validate_rdtsr(prices)?;
    let (ls, lc) = (int(ls), int(lc));
    let cs = int(prices.single_price());
    let cc = int(prices.combo_price());
    let one = Rational::one();
    let single_side = (ls - one + cs) / ls;
    let combo_side = (lc - one + cc + (lc - one) / ls * (cs - one)) / cc.min(lc);
    Ok(single_side.max(combo_side))
}

fn check_open_trust(trust: &Rational) -> Result<()> {
    if *trust <= Rational::zero() || *trust >= Rational::one() {
        return Err(Error::TrustOutOfRange(trust.to_string(), "(0, 1)"));
    }
    Ok(())
}

/// `min{1 + θ + θ² + ((1 + 2θ)/(1 - θ)) η/OPT, 1 + θ⁻¹ + θ⁻³}` for `θ ∈ (0, 1)`.
pub fn ladtsr_bound(trust: Rational, eta: u64, opt: u64) -> Result<Rational> {
    check_open_trust(&trust)?;
    if opt == 0 {
        return Err(Error::Config("the learned bound needs OPT > 0".into()));
    }
    let one = Rational::one();
    let consistency = one
        + trust
        + trust * trust
        + (one + int(2) * trust) / (one - trust) * (int(eta) / int(opt));
    Ok(consistency.min(robustness_bound(trust)?))
}

/// `1 + θ⁻¹ + θ⁻³`, the prediction-independent bound.
pub fn robustness_bound(trust: Rational) -> Result<Rational> {
    check_open_trust(&trust)?;
    let inv = trust.recip();
    Ok(Rational::one() + inv + inv * inv * inv)
}

/// `1 + θ + θ²`, the bound under a perfect prediction.
pub fn consistency_bound(trust: Rational) -> Result<Rational> {
    check_open_trust(&trust)?;
    Ok(Rational::one() + trust + trust * trust)
}

/// Ratio bounds for one total demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub cr_bound: Rational,
    pub u_alg: Rational,
    /// `U_ALG(z) / OPT(z)`; `None` when `OPT(z) = 0`.
    pub u_cr: Option<Rational>,
}

pub fn u_cr(u_alg: Rational, opt: u64) -> Option<Rational> {
    (opt > 0).then(|| u_alg / int(opt))
}

fn check_len(z: &TotalDemand, prices: &PriceConfig) -> Result<()> {
    if z.len() != prices.num_items() {
        return Err(Error::LengthMismatch {
            expected: prices.num_items(),
            actual: z.len(),
        });
    }
    Ok(())
}

/// `Σ_k min{z_k, λ_{s,k}} >= λ_c`: the policy buys the combo on every ordering of `z`.
pub fn combo_predicate(z: &TotalDemand, thresholds: &ThresholdSet) -> bool {
    let capped: Rational = z
        .per_item()
        .iter()
        .zip(&thresholds.single)
        .map(|(&zk, t)| t.cap(int(zk)))
        .sum();
    thresholds.combo.is_reached_by(&capped)
}

/// Upper bound on the robust policy's cost over all orderings of `z`.
pub fn u_alg_rdtsr(
    z: &TotalDemand,
    prices: &PriceConfig,
    thresholds: &ThresholdSet,
) -> Result<Rational> {
    check_len(z, prices)?;
    let (ls, lc) = thresholds.validate_rdtsr(prices)?;
    let cs = prices.single_price();
    if combo_predicate(z, thresholds) {
        let reaching = z.per_item().iter().filter(|&&zk| zk >= ls).count() as u64;
        let singles = int(reaching).min(int(lc - 1) / int(ls));
        Ok(int(lc - 1 + prices.combo_price()) + singles * int(cs - 1))
    } else {
        Ok(z.per_item()
            .iter()
            .map(|&zk| if zk < ls { int(zk) } else { int(ls - 1 + cs) })
            .sum())
    }
}

pub fn rdtsr_bound_report(
    z: &TotalDemand,
    prices: &PriceConfig,
    thresholds: &ThresholdSet,
) -> Result<BoundReport> {
    let u_alg = u_alg_rdtsr(z, prices, thresholds)?;
    Ok(BoundReport {
        cr_bound: rdtsr_threshold_bound(prices, thresholds)?,
        u_alg,
        u_cr: u_cr(u_alg, opt_offline(z, prices)),
    })
}

/// Upper bound on the learning-augmented policy's cost over all orderings of
/// `z`, for `θ ∈ (0, 1)`.
///
/// In the combo case the bound is `λ_c + C_c + f(s_1, s_2) C_s` where
/// `f(s_1, s_2) = min{λ_c/(θ C_s), s_2 + (λ_c - θ C_s s_2)/(C_s/θ), s_1 + s_2}`
/// caps the number of single purchases made before the combo. The middle term
/// fills the `s_2` low-threshold items first, since they are the cheaper ones.
pub fn u_alg_ladtsr(
    z: &TotalDemand,
    prices: &PriceConfig,
    pred: &Prediction,
    trust: Rational,
) -> Result<Rational> {
    check_open_trust(&trust)?;
    check_len(z, prices)?;
    let th = ladtsr_thresholds(pred, prices, trust)?;
    let cs = int(prices.single_price());
    let low = trust * cs;
    let high = cs / trust;
    let lambda = |t: &Threshold| t.finite().expect("finite for trust in (0, 1)");

    if combo_predicate(z, &th) {
        let (mut s1, mut s2) = (0u64, 0u64);
        for (&zk, t) in z.per_item().iter().zip(&th.single) {
            let l = lambda(t);
            if int(zk) >= l {
                if l == high {
                    s1 += 1;
                } else {
                    s2 += 1;
                }
            }
        }
        let lc = lambda(&th.combo);
        let f = (lc / low)
            .min(int(s2) + (lc - low * int(s2)) / high)
            .min(int(s1 + s2));
        Ok(lc + int(prices.combo_price()) + f * cs)
    } else {
        Ok(z.per_item()
            .iter()
            .zip(&th.single)
            .map(|(&zk, t)| {
                let l = lambda(t);
                if int(zk) < l {
                    int(zk)
                } else {
                    l + cs
                }
            })
            .sum())
    }
}

pub fn ladtsr_bound_report(
    z: &TotalDemand,
    prices: &PriceConfig,
    pred: &Prediction,
    trust: Rational,
) -> Result<BoundReport> {
    let u_alg = u_alg_ladtsr(z, prices, pred, trust)?;
    let opt = opt_offline(z, prices);
    let cr_bound = if opt > 0 {
        let (_, eta) = prediction_error(pred, z)?;
        ladtsr_bound(trust, eta, opt)?
    } else {
        robustness_bound(trust)?
    };
    Ok(BoundReport {
        cr_bound,
        u_alg,
        u_cr: u_cr(u_alg, opt),
    })
}

/// Bucket counts of a standard total demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StdForm {
    /// `m` items at or above `C_s`, `n` items exactly at `λ_s`, and `x` the
    /// summed demand of the items below `λ_s`. When `λ_s = C_s` an item at
    /// `C_s` counts towards `m`.
    Robust { m: usize, n: usize, x: u64 },
    /// For high-threshold items (`λ_{s,k} = C_s/θ`): `m1` at or above
    /// `⌈C_s/θ⌉`. For low-threshold items (`λ_{s,k} = θ C_s`): `m2` at or
    /// above `C_s`, `n2` exactly at `⌈θ C_s⌉`. `x` sums the rest.
    Learned {
        m1: usize,
        m2: usize,
        n2: usize,
        x: u64,
    },
}

/// Lifts every item with `λ_s <= z_k < C_s` down to exactly `λ_s`.
pub fn standardize_rdtsr(
    z: &TotalDemand,
    prices: &PriceConfig,
    thresholds: &ThresholdSet,
) -> Result<(TotalDemand, StdForm)> {
    check_len(z, prices)?;
    let (ls, _) = thresholds.validate_rdtsr(prices)?;
    let cs = prices.single_price();
    let out: Vec<u64> = z
        .per_item()
        .iter()
        .map(|&zk| if ls <= zk && zk < cs { ls } else { zk })
        .collect();
    let (mut m, mut n, mut x) = (0, 0, 0);
    for &zk in &out {
        if zk >= cs {
            m += 1;
        } else if zk == ls {
            n += 1;
        } else {
            x += zk;
        }
    }
    Ok((TotalDemand(out), StdForm::Robust { m, n, x }))
}

/// Every item is at or above `C_s`, exactly `λ_s`, or below `λ_s`.
pub fn is_standard_rdtsr(z: &TotalDemand, prices: &PriceConfig, lambda_s: u64) -> bool {
    let cs = prices.single_price();
    z.per_item()
        .iter()
        .all(|&zk| zk >= cs || zk == lambda_s || zk < lambda_s)
}

struct LearnedBuckets {
    high: Vec<bool>,
    low_ceil: u64,
    high_ceil: u64,
    cs: u64,
}

impl LearnedBuckets {
    fn new(prices: &PriceConfig, pred: &Prediction, trust: Rational) -> Result<Self> {
        check_open_trust(&trust)?;
        let th = ladtsr_thresholds(pred, prices, trust)?;
        let cs = int(prices.single_price());
        let high_value = Threshold::Finite(cs / trust);
        Ok(LearnedBuckets {
            high: th.single.iter().map(|t| *t == high_value).collect(),
            low_ceil: ceil(&(trust * cs)) as u64,
            high_ceil: ceil(&(cs / trust)) as u64,
            cs: prices.single_price(),
        })
    }
}

/// Raises high-threshold items with `C_s <= z_k < ⌈C_s/θ⌉` to `⌈C_s/θ⌉` and
/// lowers low-threshold items with `⌈θ C_s⌉ <= z_k < C_s` to `⌈θ C_s⌉`.
pub fn standardize_ladtsr(
    z: &TotalDemand,
    prices: &PriceConfig,
    pred: &Prediction,
    trust: Rational,
) -> Result<(TotalDemand, StdForm)> {
    check_len(z, prices)?;
    let b = LearnedBuckets::new(prices, pred, trust)?;
    let out: Vec<u64> = z
        .per_item()
        .iter()
        .zip(&b.high)
        .map(|(&zk, &high)| {
            if high && b.cs <= zk && zk < b.high_ceil {
                b.high_ceil
            } else if !high && b.low_ceil <= zk && zk < b.cs {
                b.low_ceil
            } else {
                zk
            }
        })
        .collect();
    let (mut m1, mut m2, mut n2, mut x) = (0, 0, 0, 0);
    for (&zk, &high) in out.iter().zip(&b.high) {
        if high && zk >= b.high_ceil {
            m1 += 1;
        } else if !high && zk >= b.cs {
            m2 += 1;
        } else if !high && zk == b.low_ceil {
            n2 += 1;
        } else {
            x += zk;
        }
    }
    Ok((TotalDemand(out), StdForm::Learned { m1, m2, n2, x }))
}

/// The bucket predicate for prediction-dependent thresholds.
pub fn is_standard_ladtsr(
    z: &TotalDemand,
    prices: &PriceConfig,
    pred: &Prediction,
    trust: Rational,
) -> Result<bool> {
    check_len(z, prices)?;
    let b = LearnedBuckets::new(prices, pred, trust)?;
    let th = ladtsr_thresholds(pred, prices, trust)?;
    Ok(z.per_item()
        .iter()
        .zip(&b.high)
        .zip(&th.single)
        .all(|((&zk, &high), t)| {
            let below = int(zk) < t.cap(int(b.cs));
            if high {
                zk >= b.high_ceil || below
            } else {
                zk >= b.cs || zk == b.low_ceil || below
            }
        }))
}

/// `η_k = |y_k - z_k|` and `η = Σ_k η_k`.
pub fn prediction_error(pred: &Prediction, z: &TotalDemand) -> Result<(Vec<u64>, u64)> {
    if pred.len() != z.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            actual: pred.len(),
        });
    }
    let per_item: Vec<u64> = pred
        .per_item()
        .iter()
        .zip(z.per_item())
        .map(|(&y, &zk)| y.abs_diff(zk))
        .collect();
    let total = per_item.iter().sum();
    Ok((per_item, total))
}
