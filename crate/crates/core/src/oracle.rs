//! Agreement checks between the closed-form offline optimum and the
//! exhaustive search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{brute_force_opt, opt_offline};
use crate::error::Result;
use crate::model::{total_demand, DemandSequence, PriceConfig};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleTally {
    pub checked: usize,
    pub agreed: usize,
    /// First few disagreements as `(sequence, prices, closed form, exhaustive)`.
    pub mismatches: Vec<(DemandSequence, PriceConfig, u64, u64)>,
}

impl OracleTally {
    fn record(&mut self, seq: &DemandSequence, prices: &PriceConfig) -> Result<()> {
        let closed = opt_offline(&total_demand(seq, prices)?, prices);
        let exhaustive = brute_force_opt(seq, prices)?;
        self.checked += 1;
        if closed == exhaustive {
            self.agreed += 1;
        } else if self.mismatches.len() < 8 {
            self.mismatches
                .push((seq.clone(), *prices, closed, exhaustive));
        }
        Ok(())
    }

    pub fn all_agree(&self) -> bool {
        self.checked == self.agreed
    }
}

/// Price configurations used for the exhaustive two-item grid.
pub fn grid_prices() -> Vec<PriceConfig> {
    [(2, 3), (3, 4), (3, 5), (4, 5), (4, 7)]
        .into_iter()
        .map(|(cs, cc)| PriceConfig::new(2, cs, cc).expect("valid grid prices"))
        .collect()
}

/// Every sequence with `K = 2`, `T <= max_horizon` and amounts in
/// `0..=max_amount`, under each of [`grid_prices`].
pub fn exhaustive_grid(max_horizon: usize, max_amount: u64) -> Result<OracleTally> {
    let k = 2usize;
    // per slot: empty, or (item, amount) with amount >= 1
    let slot_choices: Vec<(usize, u64)> = std::iter::once((0, 0))
        .chain((1..=k).flat_map(|i| (1..=max_amount).map(move |a| (i, a))))
        .collect();
    let prices = grid_prices();
    let mut tally = OracleTally::default();
    for horizon in 0..=max_horizon {
        let mut digits = vec![0usize; horizon];
        loop {
            let pairs: Vec<(usize, u64)> = digits.iter().map(|&d| slot_choices[d]).collect();
            let seq = DemandSequence::from_pairs(&pairs)?;
            for p in &prices {
                tally.record(&seq, p)?;
            }
            let mut pos = 0;
            while pos < horizon {
                digits[pos] += 1;
                if digits[pos] < slot_choices.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == horizon {
                break;
            }
        }
    }
    Ok(tally)
}

/// Random instances with `K ∈ {3, 4}`, `T <= 8`, random valid prices and
/// amounts up to 12 (so items can cross `C_s`).
pub fn random_instances(count: usize, seed: u64) -> Result<OracleTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = OracleTally::default();
    for _ in 0..count {
        let k = rng.gen_range(3..=4usize);
        let cs = rng.gen_range(2..=8u64);
        let cc = rng.gen_range(cs + 1..k as u64 * cs);
        let prices = PriceConfig::new(k, cs, cc)?;
        let horizon = rng.gen_range(0..=8usize);
        let pairs: Vec<(usize, u64)> = (0..horizon)
            .map(|_| {
                if rng.gen_bool(0.15) {
                    (0, 0)
                } else {
                    (rng.gen_range(1..=k), rng.gen_range(1..=12))
                }
            })
            .collect();
        tally.record(&DemandSequence::from_pairs(&pairs)?, &prices)?;
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_grid_counts() {
        // T <= 1, amounts <= 1: 1 + 3 sequences, 5 price configs each
        let t = exhaustive_grid(1, 1).unwrap();
        assert_eq!(t.checked, 4 * 5);
        assert!(t.all_agree());
    }

    #[test]
    fn random_is_seeded() {
        let a = random_instances(20, 3).unwrap();
        assert_eq!(a, random_instances(20, 3).unwrap());
        assert!(a.all_agree());
    }
}
