use proptest::prelude::*;

use twolevel_ski::algorithms::{
    dtsr_simulate, ftp_simulate, ladtsr_simulate, ladtsr_thresholds, rdtsr_simulate, run_policy,
    ThresholdPolicy,
};
use twolevel_ski::analysis::{
    brute_force_opt, combo_predicate, consistency_bound, is_standard_ladtsr, is_standard_rdtsr,
    ladtsr_bound, ladtsr_bound_report, opt_offline, prediction_error, rdtsr_bound,
    rdtsr_bound_report, rdtsr_threshold_bound, robustness_bound, standardize_ladtsr,
    standardize_rdtsr, u_alg_ladtsr,
};
use twolevel_ski::datagen::{
    gen_prediction, gen_sequence, parse_prediction, parse_trace, write_prediction_to,
    write_trace_to, GenConfig, PredictorConfig, WorkloadKind,
};
use twolevel_ski::model::{check_feasible, evaluate_cost, total_demand};
use twolevel_ski::rational::int;
use twolevel_ski::{
    DecisionRecord, DemandSequence, Prediction, PriceConfig, Rational, ThresholdSet,
};

const MAX_AMOUNT: u64 = 12;

fn prices_strategy() -> impl Strategy<Value = PriceConfig> {
    (2usize..=6, 2u64..=12)
        .prop_flat_map(|(k, cs)| (Just(k), Just(cs), cs + 1..k as u64 * cs))
        .prop_map(|(k, cs, cc)| PriceConfig::new(k, cs, cc).unwrap())
}

fn sequence_for(k: usize, max_len: usize) -> impl Strategy<Value = DemandSequence> {
    prop::collection::vec(
        prop_oneof![
            1 => Just((0usize, 0u64)),
            6 => (1..=k, 1..=MAX_AMOUNT),
        ],
        0..max_len,
    )
    .prop_map(|pairs| DemandSequence::from_pairs(&pairs).unwrap())
}

fn prediction_for(k: usize) -> impl Strategy<Value = Prediction> {
    prop::collection::vec(0u64..=60, k).prop_map(Prediction)
}

/// Trust values in (0, 1) with small denominators.
fn open_trust() -> impl Strategy<Value = Rational> {
    (1i128..=15).prop_map(|n| Rational::new(n, 16))
}

fn instance() -> impl Strategy<Value = (PriceConfig, DemandSequence, Prediction)> {
    prices_strategy().prop_flat_map(|p| {
        (
            Just(p),
            sequence_for(p.num_items(), 40),
            prediction_for(p.num_items()),
        )
    })
}

fn rdtsr_thresholds_for(prices: &PriceConfig) -> impl Strategy<Value = ThresholdSet> {
    let p = *prices;
    (2..=p.single_price(), 2..=p.combo_price())
        .prop_map(move |(ls, lc)| ThresholdSet::rdtsr(&p, ls, lc).unwrap())
}

fn ratio_of(cost: u64, opt: u64) -> Rational {
    int(cost) / int(opt)
}

fn permutation(len: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..len).collect::<Vec<_>>()).prop_shuffle()
}

/// No rental on a covered slot, and no cost after the combo.
fn respects_coverage(seq: &DemandSequence, d: &DecisionRecord) -> bool {
    seq.events().iter().all(|ev| match ev.item_index() {
        Some(k) if d.covers(ev.slot, k) => !d.rent_flags[ev.slot - 1],
        _ => true,
    }) && d
        .single_times
        .iter()
        .flatten()
        .all(|&t| d.combo_time.is_none_or(|c| t < c))
}

/// Demand counted by `ψ_k`: every slot for item `k` not covered by a purchase
/// made in an earlier slot.
fn psi_closed_form(seq: &DemandSequence, d: &DecisionRecord, k: usize) -> u64 {
    let bound = |t: Option<usize>| t.unwrap_or(usize::MAX);
    let stop = bound(d.single_times[k]).min(bound(d.combo_time));
    seq.events()
        .iter()
        .filter(|ev| ev.item_index() == Some(k) && ev.slot <= stop)
        .map(|ev| ev.amount)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decisions_feasible_and_costs_add_up((prices, seq, pred) in instance(), theta in open_trust()) {
        let th = ThresholdSet::rdtsr_default(&prices);
        let records = [
            rdtsr_simulate(&seq, &prices, &th).unwrap(),
            dtsr_simulate(&seq, &prices, &th).unwrap(),
            ftp_simulate(&seq, &prices, &pred).unwrap(),
            ladtsr_simulate(&seq, &prices, &pred, theta).unwrap(),
        ];
        for d in &records {
            prop_assert!(check_feasible(&seq, d));
            prop_assert!(respects_coverage(&seq, d));
            let c = evaluate_cost(&seq, d, &prices);
            prop_assert_eq!(c.total, c.rent_cost + c.single_cost + c.combo_cost);
        }
    }

    #[test]
    fn indicative_costs_match_closed_form((prices, seq, pred) in instance(), theta in open_trust()) {
        let mut policies = vec![
            ThresholdPolicy::rdtsr(&prices, ThresholdSet::rdtsr_default(&prices)).unwrap(),
            ThresholdPolicy::ladtsr(&prices, &pred, theta).unwrap(),
        ];
        for policy in &mut policies {
            let d = run_policy(policy, &seq, prices.num_items());
            let state = policy.state();
            for k in 0..prices.num_items() {
                prop_assert_eq!(state.per_item[k], psi_closed_form(&seq, &d, k));
            }
            let overall: Rational = state
                .per_item
                .iter()
                .zip(&policy.thresholds().single)
                .map(|(&p, t)| t.cap(int(p)))
                .sum();
            prop_assert_eq!(state.overall, overall);
        }
    }

    #[test]
    fn orderings_share_totals_opt_and_combo_decision(
        (prices, seq, pred, order, theta) in instance().prop_flat_map(|(p, s, y)| {
            let n = s.horizon();
            (Just(p), Just(s), Just(y), permutation(n), open_trust())
        })
    ) {
        let shuffled = seq.reordered(&order);
        let z = total_demand(&seq, &prices).unwrap();
        prop_assert_eq!(&total_demand(&shuffled, &prices).unwrap(), &z);
        prop_assert_eq!(opt_offline(&z, &prices), opt_offline(&total_demand(&shuffled, &prices).unwrap(), &prices));

        let th = ThresholdSet::rdtsr_default(&prices);
        let expect = combo_predicate(&z, &th);
        for s in [&seq, &shuffled] {
            prop_assert_eq!(rdtsr_simulate(s, &prices, &th).unwrap().combo_time.is_some(), expect);
        }
        let lth = ladtsr_thresholds(&pred, &prices, theta).unwrap();
        let expect = combo_predicate(&z, &lth);
        for s in [&seq, &shuffled] {
            prop_assert_eq!(ladtsr_simulate(s, &prices, &pred, theta).unwrap().combo_time.is_some(), expect);
        }
    }

    #[test]
    fn robust_ratio_within_default_bound((prices, seq, _pred) in instance()) {
        let z = total_demand(&seq, &prices).unwrap();
        let opt = opt_offline(&z, &prices);
        prop_assume!(opt > 0);
        let d = rdtsr_simulate(&seq, &prices, &ThresholdSet::rdtsr_default(&prices)).unwrap();
        prop_assert!(ratio_of(evaluate_cost(&seq, &d, &prices).total, opt) <= rdtsr_bound(&prices));
    }

    #[test]
    fn robust_ratio_within_threshold_bound(
        (prices, seq, th) in prices_strategy().prop_flat_map(|p| {
            (Just(p), sequence_for(p.num_items(), 40), rdtsr_thresholds_for(&p))
        })
    ) {
        let z = total_demand(&seq, &prices).unwrap();
        let opt = opt_offline(&z, &prices);
        prop_assume!(opt > 0);
        let d = rdtsr_simulate(&seq, &prices, &th).unwrap();
        let bound = rdtsr_threshold_bound(&prices, &th).unwrap();
        prop_assert!(ratio_of(evaluate_cost(&seq, &d, &prices).total, opt) <= bound);
    }

    #[test]
    fn learned_ratio_within_bound((prices, seq, pred) in instance(), theta in open_trust()) {
        let z = total_demand(&seq, &prices).unwrap();
        let opt = opt_offline(&z, &prices);
        prop_assume!(opt > 0);
        let (_, eta) = prediction_error(&pred, &z).unwrap();
        let d = ladtsr_simulate(&seq, &prices, &pred, theta).unwrap();
        let r = ratio_of(evaluate_cost(&seq, &d, &prices).total, opt);
        prop_assert!(r <= ladtsr_bound(theta, eta, opt).unwrap());
    }

    #[test]
    fn learned_ratio_under_perfect_prediction((prices, seq, _pred) in instance(), theta in open_trust()) {
        let z = total_demand(&seq, &prices).unwrap();
        let opt = opt_offline(&z, &prices);
        prop_assume!(opt > 0);
        let pred = Prediction(z.per_item().to_vec());
        let d = ladtsr_simulate(&seq, &prices, &pred, theta).unwrap();
        prop_assert!(ratio_of(evaluate_cost(&seq, &d, &prices).total, opt) <= consistency_bound(theta).unwrap());
    }

    #[test]
    fn follow_prediction_within_opt_plus_error((prices, seq, pred) in instance()) {
        let z = total_demand(&seq, &prices).unwrap();
        let (_, eta) = prediction_error(&pred, &z).unwrap();
        let d = ftp_simulate(&seq, &prices, &pred).unwrap();
        prop_assert!(evaluate_cost(&seq, &d, &prices).total <= opt_offline(&z, &prices) + eta);
    }

    #[test]
    fn trust_endpoints_match_other_policies((prices, seq, pred) in instance()) {
        let cost = |d: DecisionRecord| evaluate_cost(&seq, &d, &prices).total;
        let full = cost(ladtsr_simulate(&seq, &prices, &pred, Rational::from_integer(1)).unwrap());
        let none = cost(ladtsr_simulate(&seq, &prices, &pred, Rational::from_integer(0)).unwrap());
        prop_assert_eq!(full, cost(rdtsr_simulate(&seq, &prices, &ThresholdSet::rdtsr_default(&prices)).unwrap()));
        prop_assert_eq!(none, cost(ftp_simulate(&seq, &prices, &pred).unwrap()));
    }

    #[test]
    fn baseline_agrees_when_one_item_is_touched(
        (prices, item, amounts) in prices_strategy().prop_flat_map(|p| {
            (Just(p), 1..=p.num_items(), prop::collection::vec(0u64..=MAX_AMOUNT, 0..30))
        })
    ) {
        let pairs: Vec<(usize, u64)> = amounts.iter().map(|&a| if a == 0 { (0, 0) } else { (item, a) }).collect();
        let seq = DemandSequence::from_pairs(&pairs).unwrap();
        let th = ThresholdSet::rdtsr_default(&prices);
        prop_assert_eq!(dtsr_simulate(&seq, &prices, &th).unwrap(), rdtsr_simulate(&seq, &prices, &th).unwrap());
    }

    #[test]
    fn robust_cost_within_u_alg(
        (prices, seq, th, order) in prices_strategy().prop_flat_map(|p| {
            (Just(p), sequence_for(p.num_items(), 40), rdtsr_thresholds_for(&p))
        }).prop_flat_map(|(p, s, th)| {
            let n = s.horizon();
            (Just(p), Just(s), Just(th), permutation(n))
        })
    ) {
        let z = total_demand(&seq, &prices).unwrap();
        let u = rdtsr_bound_report(&z, &prices, &th).unwrap().u_alg;
        for s in [seq.clone(), seq.reordered(&order)] {
            let d = rdtsr_simulate(&s, &prices, &th).unwrap();
            prop_assert!(int(evaluate_cost(&s, &d, &prices).total) <= u);
        }
    }

    #[test]
    fn learned_cost_within_u_alg(
        (prices, seq, pred, order) in instance().prop_flat_map(|(p, s, y)| {
            let n = s.horizon();
            (Just(p), Just(s), Just(y), permutation(n))
        }),
        theta in open_trust(),
    ) {
        let z = total_demand(&seq, &prices).unwrap();
        let u = u_alg_ladtsr(&z, &prices, &pred, theta).unwrap();
        for s in [seq.clone(), seq.reordered(&order)] {
            let d = ladtsr_simulate(&s, &prices, &pred, theta).unwrap();
            prop_assert!(int(evaluate_cost(&s, &d, &prices).total) <= u);
        }
    }

    #[test]
    fn robust_standardization(
        (prices, z, th) in prices_strategy().prop_flat_map(|p| {
            (Just(p), prop::collection::vec(0u64..=30, p.num_items()), rdtsr_thresholds_for(&p))
        })
    ) {
        let z = twolevel_ski::TotalDemand(z);
        let (s, form) = standardize_rdtsr(&z, &prices, &th).unwrap();
        let ls = th.validate_rdtsr(&prices).unwrap().0;
        prop_assert!(is_standard_rdtsr(&s, &prices, ls));
        prop_assert_eq!(standardize_rdtsr(&s, &prices, &th).unwrap(), (s.clone(), form));
        let before = rdtsr_bound_report(&z, &prices, &th).unwrap().u_cr;
        let after = rdtsr_bound_report(&s, &prices, &th).unwrap().u_cr;
        if let (Some(b), Some(a)) = (before, after) {
            prop_assert!(b <= a, "U_CR fell from {} to {}", b, a);
        }
    }

    #[test]
    fn learned_standardization(
        (prices, z, pred) in prices_strategy().prop_flat_map(|p| {
            (Just(p), prop::collection::vec(0u64..=60, p.num_items()), prediction_for(p.num_items()))
        }),
        theta in open_trust(),
    ) {
        let z = twolevel_ski::TotalDemand(z);
        let (s, form) = standardize_ladtsr(&z, &prices, &pred, theta).unwrap();
        prop_assert!(is_standard_ladtsr(&s, &prices, &pred, theta).unwrap());
        prop_assert_eq!(standardize_ladtsr(&s, &prices, &pred, theta).unwrap(), (s.clone(), form));
        let before = ladtsr_bound_report(&z, &prices, &pred, theta).unwrap().u_cr;
        let after = ladtsr_bound_report(&s, &prices, &pred, theta).unwrap().u_cr;
        if let (Some(b), Some(a)) = (before, after) {
            prop_assert!(b <= a, "U_CR fell from {} to {}", b, a);
        }
    }

    #[test]
    fn bound_formulas_are_ordered(prices in prices_strategy(), theta in open_trust(), opt in 1u64..200) {
        prop_assert!(rdtsr_bound(&prices) < int(3));
        let at_zero = ladtsr_bound(theta, 0, opt).unwrap();
        prop_assert_eq!(at_zero, consistency_bound(theta).unwrap());
        prop_assert!(at_zero <= robustness_bound(theta).unwrap());
        prop_assert_eq!(
            rdtsr_threshold_bound(&prices, &ThresholdSet::rdtsr_default(&prices)).unwrap(),
            rdtsr_bound(&prices)
        );
    }

    #[test]
    fn closed_form_opt_matches_exhaustive(
        (prices, seq) in (2usize..=3, 2u64..=5)
            .prop_flat_map(|(k, cs)| (Just(k), Just(cs), cs + 1..k as u64 * cs))
            .prop_map(|(k, cs, cc)| PriceConfig::new(k, cs, cc).unwrap())
            .prop_flat_map(|p| (Just(p), sequence_for(p.num_items(), 7)))
    ) {
        let z = total_demand(&seq, &prices).unwrap();
        prop_assert_eq!(opt_offline(&z, &prices), brute_force_opt(&seq, &prices).unwrap());
    }

    #[test]
    fn trace_and_prediction_round_trip((prices, seq, pred) in instance()) {
        let mut buf = Vec::new();
        write_trace_to(&mut buf, &seq).unwrap();
        let back = parse_trace(buf.as_slice(), &prices, "mem.csv".as_ref()).unwrap();
        prop_assert_eq!(back, seq);
        let mut buf = Vec::new();
        write_prediction_to(&mut buf, &pred).unwrap();
        prop_assert_eq!(parse_prediction(buf.as_slice(), &prices, "mem.csv".as_ref()).unwrap(), pred);
    }

    #[test]
    fn generators_are_seeded_and_valid(
        k in 1usize..=10,
        seed in any::<u64>(),
        long_tailed in any::<bool>(),
        multi_unit in any::<bool>(),
        bias in -20i64..=20,
        noise in 0u64..=5,
    ) {
        let kind = if long_tailed { WorkloadKind::LongTailed } else { WorkloadKind::Uniform };
        let mut cfg = GenConfig::new(kind, k, seed);
        cfg.multi_unit = multi_unit;
        let seq = gen_sequence(&cfg).unwrap();
        prop_assert_eq!(&gen_sequence(&cfg).unwrap(), &seq);
        prop_assert!(seq.horizon() >= 1 && seq.horizon() <= cfg.horizon_max);
        let amount_cap = if multi_unit { cfg.amount_max } else { 1 };
        for ev in seq.events() {
            prop_assert!(ev.item >= 1 && ev.item <= k);
            prop_assert!(ev.amount >= 1 && ev.amount <= amount_cap);
        }
        let mut z = vec![0u64; k];
        for ev in seq.events() {
            z[ev.item - 1] += ev.amount;
        }
        let z = twolevel_ski::TotalDemand(z);
        let pc = PredictorConfig { bias, noise_halfwidth: noise, seed };
        let y = gen_prediction(&z, &pc);
        prop_assert_eq!(&gen_prediction(&z, &pc), &y);
        for (&yk, &zk) in y.per_item().iter().zip(z.per_item()) {
            let centre = zk as i64 + bias;
            prop_assert!(yk as i64 >= (centre - noise as i64).max(0));
            prop_assert!(yk as i64 <= (centre + noise as i64).max(0));
        }
    }
}
