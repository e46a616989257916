use gevregret_core::env::{self, run_odp, run_seeds, EnvSpec, Environment};
use gevregret_core::game::{cce_gap, run_repeated_game, GameSpec};
use gevregret_core::gev::{Eta, GevModel};
use gevregret_core::learners::{
    optimal_eta, recursive_update_mnl, regret_bound, AnyLearner, BoundVariant, EtaChoice, Learner, LearnerConfig, OftrlState, SsaState,
};
use gevregret_core::Exec;
use proptest::prelude::*;

fn nl4() -> GevModel {
    GevModel::nested_logit(4, &[vec![0, 1], vec![2, 3]], &[0.4, 0.9]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fixed_eta_regret_stays_under_its_bound(e in 0.5f64..60.0, seed in 0u64..1000, t in 10usize..600) {
        let m = nl4();
        let mut l = SsaState::new(m.clone(), Eta::new(e).unwrap(), 1.0).unwrap();
        let mut env = Environment::new(&EnvSpec::PiecewiseConstant { u_max: 1.0, segment_len: 7 }, 4, seed).unwrap();
        let tr = run_odp(&mut l, &mut env, t).unwrap();
        let bound = regret_bound(&m, Eta::new(e).unwrap(), t, 1.0, BoundVariant::Thm1).unwrap();
        prop_assert!(tr.regret() <= bound, "{} > {bound}", tr.regret());
        prop_assert!((tr.regret() - tr.recompute_regret()).abs() < 1e-9);
    }

    #[test]
    fn replay_file_round_trips(rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 1..40)) {
        let mut buf = Vec::new();
        env::write_replay(&mut buf, &rows).unwrap();
        let back = env::parse_replay(buf.as_slice()).unwrap();
        prop_assert_eq!(back, rows);
    }
}

#[test]
fn tuned_mnl_meets_the_logit_bound_on_every_environment() {
    let m = GevModel::mnl(6).unwrap();
    let tune = optimal_eta(&m, 5000, 1.0, BoundVariant::LogN).unwrap();
    let cfg = LearnerConfig::ssa(&m, EtaChoice::Optimal, BoundVariant::LogN);
    for spec in [
        EnvSpec::IidStochastic { u_max: 1.0 },
        EnvSpec::AdaptiveAdversary { u_max: 1.0 },
        EnvSpec::DriftSinusoid { u_max: 1.0, amplitude: 0.25, omega: 0.05 },
        EnvSpec::PiecewiseConstant { u_max: 1.0, segment_len: 100 },
    ] {
        for tr in run_seeds(&cfg, &spec, 5000, &[1, 2, 3], Exec::default()).unwrap() {
            assert!(tr.regret() <= tune.bound, "{}: {} > {}", spec.name(), tr.regret(), tune.bound);
        }
    }
}

#[test]
fn sequential_and_parallel_seed_batches_agree() {
    let cfg = LearnerConfig::ssa(&nl4(), EtaChoice::Optimal, BoundVariant::Thm2);
    let spec = EnvSpec::IidStochastic { u_max: 1.0 };
    let seeds: Vec<u64> = (0..8).collect();
    let a = run_seeds(&cfg, &spec, 500, &seeds, Exec::Sequential).unwrap();
    let b = run_seeds(&cfg, &spec, 500, &seeds, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn recursive_update_tracks_the_ssa_path() {
    let m = GevModel::mnl(5).unwrap();
    let e = Eta::new(3.0).unwrap();
    let mut l = SsaState::new(m, e, 1.0).unwrap();
    let mut env = Environment::new(&EnvSpec::IidStochastic { u_max: 1.0 }, 5, 11).unwrap();
    let mut x = l.current().to_vec();
    for t in 1..=300 {
        let u = env.payoff(t, l.current()).unwrap();
        l.step(&u).unwrap();
        x = recursive_update_mnl(&x, &u, e).unwrap();
        for (a, b) in x.iter().zip(l.current()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn optimistic_learner_with_window_one_and_constant_payoffs_matches_ssa_shifted() {
    // With constant payoffs, the one-step predictor is the last payoff, so
    // the optimistic iterate at round t equals SSA's iterate at round t+1.
    let m = GevModel::mnl(3).unwrap();
    let e = Eta::new(2.0).unwrap();
    let u = vec![0.2, 0.9, 0.4];
    let mut o = OftrlState::new(m.clone(), e, 1.0, 1).unwrap();
    let mut s = SsaState::new(m, e, 1.0).unwrap();
    s.step(&u).unwrap();
    for _ in 0..20 {
        o.step(&u).unwrap();
        s.step(&u).unwrap();
        for (a, b) in o.current().iter().zip(s.current()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn trace_csv_has_the_documented_header() {
    let cfg = LearnerConfig::ssa(&GevModel::mnl(2).unwrap(), EtaChoice::Optimal, BoundVariant::Thm2);
    let tr = run_seeds(&cfg, &EnvSpec::IidStochastic { u_max: 1.0 }, 3, &[0], Exec::Sequential).unwrap().remove(0);
    let mut buf = Vec::new();
    tr.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x_1,x_2,u_1,u_2,payoff,regret"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn payoffs_above_u_max_are_rejected() {
    let spec = EnvSpec::Constant { u_max: 1.0, payoff: vec![0.5, 1.5] };
    let r = Environment::new(&spec, 2, 0).and_then(|mut e| e.payoff(1, &[0.5, 0.5]));
    assert!(r.is_err());
}

fn mnl_players(g: &GameSpec, t: usize) -> Vec<AnyLearner> {
    let cfg = LearnerConfig::ssa(&GevModel::mnl(g.strategies()).unwrap(), EtaChoice::Optimal, BoundVariant::Thm1);
    (0..g.players()).map(|_| cfg.build(t, 1.0).unwrap()).collect()
}

#[test]
fn matching_pennies_marginals_average_to_uniform() {
    let g = GameSpec::matching_pennies();
    let mut players = mnl_players(&g, 10_000);
    let run = run_repeated_game(&g, &mut players, 10_000).unwrap();
    for p in 0..2 {
        for v in run.average_marginal(p) {
            assert!((v - 0.5).abs() <= 0.05);
        }
    }
}

#[test]
fn symmetric_players_have_identical_traces() {
    let g = GameSpec::rock_paper_scissors();
    let mut players = mnl_players(&g, 500);
    let run = run_repeated_game(&g, &mut players, 500).unwrap();
    assert_eq!(run.traces[0], run.traces[1]);
}

#[test]
fn heterogeneous_players_each_meet_their_bound() {
    let g = GameSpec::random_game(2, 4, 17).unwrap();
    let t = 3000;
    let mnl = LearnerConfig::ssa(&GevModel::mnl(4).unwrap(), EtaChoice::Optimal, BoundVariant::Thm1);
    let nl = LearnerConfig::ssa(&nl4(), EtaChoice::Optimal, BoundVariant::Thm1);
    let mut players = vec![mnl.build(t, 1.0).unwrap(), nl.build(t, 1.0).unwrap()];
    let run = run_repeated_game(&g, &mut players, t).unwrap();
    for (l, tr) in players.iter().zip(&run.traces) {
        let bound = optimal_eta(l.model(), t, 1.0, BoundVariant::Thm1).unwrap().bound;
        assert!(tr.regret() <= bound);
    }
}

#[test]
fn cce_gap_is_the_positive_part_of_average_regret() {
    for seed in 0..20 {
        let g = GameSpec::random_game(2, 2, seed).unwrap();
        for t in [100, 1000] {
            let mut players = mnl_players(&g, t);
            let run = run_repeated_game(&g, &mut players, t).unwrap();
            let cce = cce_gap(&g, &run.history()).unwrap();
            let avg = run.max_regret() / t as f64;
            assert!(cce.delta_emp >= 0.0);
            assert!(cce.delta_emp <= avg.max(0.0) + 1e-9, "{} > {avg}", cce.delta_emp);
            assert!((cce.delta_emp - avg.max(0.0)).abs() < 1e-9);
        }
    }
}

#[test]
fn three_player_feedback_is_the_mean_over_opponent_profiles() {
    let g = GameSpec::random_game(3, 2, 4).unwrap();
    let uniform = [0.5, 0.5];
    let u = g.expected_feedback(0, &[&uniform, &uniform]).unwrap();
    for (k, v) in u.iter().enumerate() {
        let brute: f64 = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| g.utility(0, &[k, a, b])).sum::<f64>() / 4.0;
        assert!((v - brute).abs() < 1e-15);
    }
}
