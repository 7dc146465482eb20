use fpl_core::adversaries::AdversaryConfig;
use fpl_core::harness::{bfpl_expected_estimate, regret, run_game};
use fpl_core::learners::schedule::{bfpl_schedule, mc_schedule, oracle_fpl_eta, reward_schedule};
use fpl_core::learners::{LearnerConfig, McCounter, PriorSpec, SampleRule};
use proptest::prelude::*;

fn learners() -> Vec<LearnerConfig> {
    vec![
        LearnerConfig::Bfpl {},
        LearnerConfig::OracleFpl { stability_check: true },
        LearnerConfig::McFpl {
            counter: McCounter::Resample,
            sample_rule: SampleRule::Quadratic,
        },
        LearnerConfig::BfplInfinite {
            prior: PriorSpec::Geometric {
                first: 0.2,
                ratio: 0.911,
            },
            alpha: 0.5,
            beta: 0.25,
            eta_exponent: 0.75,
            literal_sign: false,
        },
        LearnerConfig::RewardFpl {},
    ]
}

fn adversaries(n: usize) -> Vec<AdversaryConfig> {
    vec![
        AdversaryConfig::FixedMatrix {
            rows: vec![(0..n).map(|i| i as f64 / n as f64).collect()],
        },
        AdversaryConfig::BernoulliStochastic {
            means: (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect(),
        },
        AdversaryConfig::PunishLastAction {},
        AdversaryConfig::DeceptiveSwitch {
            decoy: 0,
            switch_time: None,
            low: 0.0,
            high: 1.0,
        },
        AdversaryConfig::BestResponseGreedy { window: 5 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schedules_are_nonincreasing(n in 2usize..40, t in 1u64..100_000) {
        let a = bfpl_schedule(t, n).unwrap();
        let b = bfpl_schedule(t + 1, n).unwrap();
        prop_assert!(b.gamma <= a.gamma && b.eta <= a.eta);
        prop_assert!(oracle_fpl_eta(t + 1, n).unwrap() <= oracle_fpl_eta(t, n).unwrap());
        let (g0, _) = mc_schedule(t).unwrap();
        let (g1, _) = mc_schedule(t + 1).unwrap();
        prop_assert!(g1 <= g0);
        let r0 = reward_schedule(t, n).unwrap();
        let r1 = reward_schedule(t + 1, n).unwrap();
        prop_assert!(r1.gamma <= r0.gamma && r1.eta <= r0.eta);
    }

    #[test]
    fn bfpl_estimate_unbiased(
        costs in prop::collection::vec(0.0f64..=1.0, 2..10),
        gamma in 1e-3f64..=1.0,
    ) {
        let e = bfpl_expected_estimate(&costs, gamma);
        for (a, b) in e.iter().zip(&costs) {
            prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.max(f64::MIN_POSITIVE));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn games_replay_and_account_exactly(
        seed in any::<u64>(),
        n in 2usize..6,
        which_l in 0usize..5,
        which_a in 0usize..5,
    ) {
        let l = &learners()[which_l];
        let a = &adversaries(n)[which_a];
        let horizon = 60;
        let g1 = run_game(l, a, n, horizon, seed).unwrap();
        let g2 = run_game(l, a, n, horizon, seed).unwrap();
        prop_assert_eq!(&g1, &g2);
        prop_assert_eq!(g1.replay_cumulative().unwrap(), g1.final_cumulative.clone());

        let rep = regret(&g1);
        let mut learner = 0.0;
        let mut experts = vec![0.0; n];
        for r in &g1.rounds {
            prop_assert_eq!(r.cost, r.costs.get(r.action));
            learner += r.cost;
            for (i, e) in experts.iter_mut().enumerate() {
                *e += r.costs.get(i);
            }
        }
        let best = experts.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(rep.learner_cost, learner);
        prop_assert_eq!(rep.regret_vs_best, learner - best);
        for r in g1.rounds.iter().filter_map(|r| r.stability) {
            prop_assert!(r.pi >= r.p - r.eta - 1e-10);
        }
    }
}
