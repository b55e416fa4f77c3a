use bribery::bribery::{BribeAction, Variant};
use bribery::crosscheck::{random_query, InstanceConfig};
use bribery::election::{score_table, winners, ScoreKind};
use bribery::format::{parse_file, serialize_file, ElectionFile};
use bribery::ilp::{
    build_dodgson_score_bribery_model, build_young_score_bribery_model, ilp_feasible, IlpModel, Relation,
};
use bribery::knapsack::{cheapest_multi, heaviest_multi, CandidatePool, Item, VoterPool};
use bribery::oracle::{oracle_bribery, oracle_manipulation, oracle_score_bribery, verify_witness, ManipulationQuery, OracleBudget};
use bribery::reductions::*;
use bribery::{BriberyQuery, Election, PreferenceOrder, Rule, VoterBlock};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn items() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..6, 0i64..6), 0..8)
}

fn pool(v: &[(i64, i64)]) -> VoterPool<i64> {
    VoterPool::new(v.iter().map(|&(p, w)| Item::new(p, w)).collect()).unwrap()
}

/// (price, weight) of every subset.
fn subsets(v: &[(i64, i64)]) -> Vec<(i64, i64)> {
    (0u32..1 << v.len())
        .map(|mask| {
            (0..v.len()).filter(|i| mask >> i & 1 == 1).fold((0, 0), |(p, w), i| (p + v[i].0, w + v[i].1))
        })
        .collect()
}

fn query(seed: u64, cfg: &InstanceConfig) -> BriberyQuery<i64> {
    random_query(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn heaviest_and_cheapest_match_subsets(v in items(), b in 0i64..20, w in 0i64..20) {
        let p = pool(&v);
        let all = subsets(&v);
        let best = all.iter().filter(|(pr, _)| *pr <= b).map(|(_, wt)| *wt).max().unwrap();
        prop_assert_eq!(p.heaviest(&b).unwrap(), best);
        let cheap = all.iter().filter(|(_, wt)| *wt >= w).map(|(pr, _)| *pr).min();
        prop_assert_eq!(p.cheapest(&w).unwrap(), cheap);
        let (got, pick) = p.heaviest_choice(&b).unwrap();
        prop_assert!(p.price_of(&pick) <= b);
        prop_assert_eq!(pick.iter().map(|&i| v[i].1).sum::<i64>(), got);
    }

    #[test]
    fn knapsack_monotone_and_dual(v in items(), b in 0i64..20, w in 0i64..20) {
        let p = pool(&v);
        prop_assert!(p.heaviest(&b).unwrap() <= p.heaviest(&(b + 1)).unwrap());
        if let (Some(x), Some(y)) = (p.cheapest(&w).unwrap(), p.cheapest(&(w + 1)).unwrap()) {
            prop_assert!(x <= y);
        }
        if let Some(c) = p.cheapest(&w).unwrap() {
            prop_assert!(p.heaviest(&c).unwrap() >= w);
        }
        let h = p.heaviest(&b).unwrap();
        prop_assert!(p.cheapest(&h).unwrap().unwrap() <= b);
    }

    #[test]
    fn multi_pool_dps_match_subsets(
        pools in prop::collection::vec((0i64..8, prop::collection::vec((0i64..4, 1i64..4), 0..3)), 1..4),
        b in 0i64..10, w in 0i64..10, r in 0i64..8,
    ) {
        let cps: Vec<CandidatePool<i64>> = pools.iter().map(|(s, v)| CandidatePool { score: *s + v.iter().map(|x| x.1).sum::<i64>(), pool: pool(v) }).collect();
        // brute force over one subset per pool
        let per: Vec<Vec<(i64, i64)>> = pools.iter().map(|(_, v)| subsets(v)).collect();
        let mut best_h: Option<i64> = None;
        let mut best_c: Option<i64> = None;
        let mut idx = vec![0usize; per.len()];
        loop {
            let (mut pr, mut wt, mut ok) = (0, 0, true);
            for (k, &i) in idx.iter().enumerate() {
                pr += per[k][i].0;
                wt += per[k][i].1;
                ok &= cps[k].score - per[k][i].1 <= r;
            }
            if ok && pr <= b { best_h = best_h.max(Some(wt)); }
            if ok && wt >= w { best_c = Some(best_c.map_or(pr, |c| c.min(pr))); }
            let mut k = 0;
            while k < idx.len() { idx[k] += 1; if idx[k] < per[k].len() { break; } idx[k] = 0; k += 1; }
            if k == idx.len() { break; }
        }
        prop_assert_eq!(heaviest_multi(&cps, &b, &r).unwrap(), best_h);
        prop_assert_eq!(cheapest_multi(&cps, &w, &r).unwrap(), best_c);
    }

    #[test]
    fn scores_ignore_voter_order_and_block_splits(seed in any::<u64>(), rot in 0usize..6) {
        let q = query(seed, &InstanceConfig::default());
        let e = q.normalized().unwrap();
        let mut voters = e.voters().to_vec();
        if !voters.is_empty() {
            let k = rot % voters.len();
            voters.rotate_left(k);
        }
        let mut split = Vec::new();
        for v in voters {
            for _ in 0..v.multiplicity {
                split.push(v.clone().with_multiplicity(1));
            }
        }
        let other = e.with_voters(split).unwrap();
        if q.rule.is_score_based() {
            prop_assert_eq!(score_table(&e, &q.rule).unwrap(), score_table(&other, &q.rule).unwrap());
        }
        prop_assert_eq!(winners(&e, &q.rule).unwrap(), winners(&other, &q.rule).unwrap());
    }

    #[test]
    fn more_budget_never_hurts(seed in any::<u64>()) {
        let q = query(seed, &InstanceConfig::default());
        let caps = OracleBudget::default();
        let here = oracle_bribery(&q, &caps).unwrap();
        if let Some(w) = here.witness() {
            prop_assert!(verify_witness(&q, w).unwrap());
            let more = q.clone().with_budget(q.budget + 1);
            prop_assert!(oracle_bribery(&more, &caps).unwrap().is_feasible());
            prop_assert!(verify_witness(&more, w).unwrap());
        }
    }

    #[test]
    fn files_round_trip(seed in any::<u64>()) {
        let q = query(seed, &InstanceConfig { max_candidates: 4, max_voters: 8, ..InstanceConfig::default() });
        let f = ElectionFile::from_query(&q);
        let text = serialize_file(&f);
        let back = parse_file::<i64>(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize_file(&back), text);
        prop_assert_eq!(back.query().unwrap(), q);
    }

    #[test]
    fn engine_matches_grid(
        bounds in prop::collection::vec((-3i64..3, 0i64..=10), 1..=6),
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 6), 0u8..3, -10i64..20), 0..4),
    ) {
        let mut m = IlpModel::<i64>::new();
        let vars: Vec<usize> = bounds.iter().enumerate().map(|(i, &(lo, span))| m.bounded(format!("x{i}"), lo, lo + span)).collect();
        for (coeffs, rel, rhs) in &rows {
            let rel = [Relation::Le, Relation::Eq, Relation::Ge][*rel as usize];
            m.add_constraint(vars.iter().zip(coeffs).map(|(&v, &a)| (v, a)).collect(), rel, *rhs);
        }
        let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        let mut any = false;
        loop {
            if m.check(&x) { any = true; break; }
            let mut k = 0;
            while k < x.len() { x[k] += 1; if x[k] <= bounds[k].0 + bounds[k].1 { break; } x[k] = bounds[k].0; k += 1; }
            if k == x.len() { break; }
        }
        let got = ilp_feasible(&m).unwrap();
        prop_assert_eq!(got.is_some(), any);
        if let Some(sol) = got { prop_assert!(m.check(&sol)); }
    }

    #[test]
    fn score_models_decode_and_match_oracle(seed in any::<u64>(), k in 0i64..3, t in 0i64..4, young in any::<bool>()) {
        let mut q = query(seed, &InstanceConfig { max_candidates: 3, max_voters: 4, max_value: 1, max_budget: 2 });
        if q.rule.ballot_kind() != bribery::election::BallotKind::Orders { return Ok(()); }
        q.rule = Rule::Dodgson;
        q.variant = Variant { unique: q.variant.unique, ..Variant::default() };
        q.budget = k;
        let kind = if young { ScoreKind::Young } else { ScoreKind::Dodgson };
        let bm = if young { build_young_score_bribery_model(&q, &t) } else { build_dodgson_score_bribery_model(&q, &t) }.unwrap();
        let sol = ilp_feasible(&bm.model).unwrap();
        let expect = oracle_score_bribery(&q, kind, &t, &OracleBudget::default()).unwrap().is_feasible();
        prop_assert_eq!(sol.is_some(), expect);
        if let Some(x) = sol {
            let d = bm.decode_score(&x).unwrap();
            prop_assert!(d.cost <= t);
            prop_assert!(d.witness.bribed() <= k);
            let e = d.witness.apply(&q).unwrap();
            let after = match kind {
                ScoreKind::Dodgson => bribery::election::dodgson_score(&e, q.target).unwrap(),
                ScoreKind::Young => bribery::election::young_score(&e, q.target).unwrap(),
            };
            prop_assert!(after.is_some_and(|s| s <= t));
        }
    }

    #[test]
    fn partition_certificates_verify(values in prop::collection::vec(0i64..7, 1..6)) {
        let p = PartitionInstance::new(values);
        if let Some(half) = p.solve().unwrap() {
            for q in [
                partition_to_weighted_dollar_plurality(&p, false),
                partition_to_weighted_dollar_plurality(&p, true),
                partition_to_negative_weighted(&p),
                partition_to_approval_flip_weighted(&p),
            ] {
                prop_assert!(verify_witness(&q, &partition_certificate(&q, &half)).unwrap());
            }
        }
        let prime = partition_prime_transform(&p);
        prop_assert!(prime.is_balanced());
        prop_assert_eq!(prime.solve().unwrap().is_some(), p.solve().unwrap().is_some());
        if let Some(half) = p.solve().unwrap() {
            let picked: i64 = partition_prime_certificate(p.values.len(), &half).iter().map(|&i| prime.values[i]).sum();
            prop_assert_eq!(picked, prime.half());
        }
    }

    #[test]
    fn manipulation_certificates_verify(seed in any::<u64>(), w in prop::collection::vec(1i64..4, 0..3)) {
        let q = query(seed, &InstanceConfig::default());
        if q.rule.ballot_kind() != bribery::election::BallotKind::Orders { return Ok(()); }
        let mq = ManipulationQuery { election: q.normalized().unwrap(), rule: q.rule.clone(), manipulators: w, target: q.target, unique: q.variant.unique };
        let dollar = manipulation_to_dollar_bribery(&mq).unwrap();
        if let Some(ballots) = oracle_manipulation(&mq, &OracleBudget::default()).unwrap() {
            prop_assert!(verify_witness(&dollar, &manipulation_certificate(&mq, &ballots)).unwrap());
        } else {
            prop_assert!(!oracle_bribery(&dollar, &OracleBudget::default()).unwrap().is_feasible());
        }
    }

    #[test]
    fn heavy_manipulators_become_bribery(seed in any::<u64>(), w in prop::collection::vec(0i64..4, 0..3)) {
        let q = query(seed, &InstanceConfig { max_value: 2, ..InstanceConfig::default() });
        let Ok(Some(_)) = q.rule.points(q.m()) else { return Ok(()) };
        let e = q.election.clone();
        let heaviest = e.voters().iter().map(|v| v.weight).max().unwrap_or(0);
        let mq = ManipulationQuery { election: e, rule: q.rule.clone(), manipulators: w.iter().map(|x| 2 * heaviest + x).collect(), target: q.target, unique: q.variant.unique };
        let b = manipulation_prime_to_bribery(&mq);
        let caps = OracleBudget::default();
        prop_assert_eq!(oracle_manipulation(&mq, &caps).unwrap().is_some(), oracle_bribery(&b, &caps).unwrap().is_feasible());
    }
}

#[test]
fn witness_actions_have_the_right_shape() {
    // Rewrites for order and approval elections, flips only in the flip model.
    let e = Election::lettered(2, vec![VoterBlock::<i64>::new(PreferenceOrder::with_top(2, 1))]).unwrap();
    let q = BriberyQuery::new(e, Rule::Plurality, 0, 1, Variant::default()).unwrap();
    let mut w = bribery::BriberyWitness::empty();
    w.push(0, 1, BribeAction::Flip(vec![0]));
    assert!(verify_witness(&q, &w).is_err() || !verify_witness(&q, &w).unwrap());
}
