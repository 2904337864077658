mod support;

use gymv_core::harness::{run_episodes, OracleAgent, RandomAgent};
use gymv_core::metrics::{
    build_report, clip_negatives, difficulty_sweep, format_ratio, mean_at_k, robustness_ratio, significant_increase,
    transfer_breadth, two_proportion_z, verify_report, EnvScore, EvalReport, LevelScore,
};
use gymv_core::{Error, Mode, Registry};
use proptest::prelude::*;
use support::transfer_table as table;

#[test]
fn printed_deltas_give_the_reference_breadths() {
    let cog = transfer_breadth(table::printed_row("Cognition").iter());
    let geo = transfer_breadth(table::printed_row("Geometry").iter());
    assert!((cog - table::BREADTH_COGNITION).abs() < table::BREADTH_TOL, "{cog}");
    assert!((geo - table::BREADTH_GEOMETRY).abs() < table::BREADTH_TOL, "{geo}");
}

#[test]
fn cell_deltas_against_printed_subscripts() {
    let m = table::matrix();
    assert!(m.deltas_consistent());
    // two printed subscripts disagree with their own cells by 0.1
    let miss = table::subscript_mismatches(&m, &["Cognition", "Geometry"]);
    let cells: Vec<(&str, &str)> = miss.iter().map(|(s, t, _, _)| (s.as_str(), t.as_str())).collect();
    assert_eq!(cells, vec![("Cognition", "Algorithmic"), ("Geometry", "Graphs")]);
    assert!((m.deltas["Cognition"]["Algorithmic"] - 2.1).abs() < 1e-9);
    assert!((m.deltas["Geometry"]["Graphs"] + 0.4).abs() < 1e-9);
    // so the cell-derived Cognition breadth is 33.0, Geometry unchanged
    assert!((m.breadth("Cognition").unwrap() - 33.0).abs() < 1e-9);
    assert!((m.breadth("Geometry").unwrap() - 17.1).abs() < 1e-9);
    // the other reference breadths follow the printed subscripts
    let alg = transfer_breadth(table::printed_row("Algorithmic").iter());
    let puz = transfer_breadth(table::printed_row("Puzzles").iter());
    assert!((alg - 28.7).abs() < 1e-9 && (puz - 28.6).abs() < 1e-9);
}

#[test]
fn transfer_matrix_round_trips_and_detects_tampering() {
    let m = table::matrix();
    let text = serde_json::to_string(&m).unwrap();
    let back: gymv_core::metrics::TransferMatrix = serde_json::from_str(&text).unwrap();
    assert!(back.deltas_consistent());
    let mut bad = back.clone();
    *bad.deltas.get_mut("Logic").unwrap().get_mut("Cognition").unwrap() += 1e-12;
    assert!(!bad.deltas_consistent());
    assert!(m.breadth("Nope").is_err());
}

#[test]
fn ratio_examples() {
    assert!((robustness_ratio(1.0, 0.13).unwrap() - 0.13).abs() < 1e-12);
    assert_eq!(robustness_ratio(0.4, 0.4).unwrap(), 1.0);
    assert!(matches!(robustness_ratio(0.0, 0.5), Err(Error::Metric(_))));
    assert_eq!(format_ratio(None), "n/a");
    assert_eq!(format_ratio(robustness_ratio(1.0, 0.13).ok()), "0.130");
}

#[test]
fn mean_at_k_examples() {
    assert!((mean_at_k(&[vec![0.0, 1.0, 1.0]], 3).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert!(mean_at_k(&[vec![1.0, 1.0], vec![1.0]], 2).is_err());
    assert!(mean_at_k(&[vec![1.0; 3]], 2).is_err());
}

#[test]
fn all_negative_breadth_is_zero() {
    assert_eq!(transfer_breadth([-1.0, -0.5, -3.0].iter()), 0.0);
}

fn report(values: Vec<f64>) -> EvalReport {
    EvalReport {
        agent: "x".into(),
        k: 1,
        specs: vec![],
        seeds: vec![],
        clip_negatives: false,
        envs: values
            .iter()
            .enumerate()
            .map(|(i, v)| EnvScore {
                env: format!("e{i}"),
                mode: if i % 2 == 0 { Mode::MultiTurn } else { Mode::SingleTurn },
                n: 1,
                k: 1,
                mean_at_k: *v,
            })
            .collect(),
        levels: values
            .iter()
            .enumerate()
            .map(|(i, v)| LevelScore {
                env: format!("e{i}"),
                level: 0,
                n: 1,
                k: 1,
                acc: *v,
            })
            .collect(),
    }
}

#[test]
fn clipping_example() {
    let r = clip_negatives(report(vec![-16.7, -2.0, 0.0]));
    assert_eq!(r.envs[0].mean_at_k, 0.0);
    // single-turn scores are never clipped
    assert_eq!(r.envs[1].mean_at_k, -2.0);
    assert_eq!(r.envs[2].mean_at_k, 0.0);
    assert!(r.clip_negatives);
}

#[test]
fn reports_are_recomputable_from_the_batch() {
    let reg = Registry::builtin();
    let mut batch = Vec::new();
    for id in ["largest_island", "frozenlake"] {
        for level in 0..3 {
            batch.extend(
                run_episodes(
                    &reg,
                    &mut RandomAgent::default(),
                    &reg.spec(id, level).unwrap(),
                    &[1, 2, 3, 4],
                    3,
                )
                .unwrap(),
            );
        }
    }
    let r = build_report(&reg, &batch, 3).unwrap();
    assert_eq!(r.envs.len(), 2);
    assert_eq!(r.levels.len(), 6);
    assert!(verify_report(&reg, &r, &batch).unwrap().is_empty());
    let clipped = clip_negatives(r.clone());
    assert!(verify_report(&reg, &clipped, &batch).unwrap().is_empty());
    let mut forged = r.clone();
    forged.levels[0].acc += 0.25;
    assert!(!verify_report(&reg, &forged, &batch).unwrap().is_empty());
    // a wrong rollout count is refused
    assert!(build_report(&reg, &batch, 2).is_err());
}

#[test]
fn oracle_solves_largest_island() {
    let reg = Registry::builtin();
    let seeds: Vec<u64> = (0..100).collect();
    let batch = run_episodes(
        &reg,
        &mut OracleAgent,
        &reg.spec("largest_island", 0).unwrap(),
        &seeds,
        1,
    )
    .unwrap();
    let groups = gymv_core::harness::score_groups(&batch);
    assert_eq!(mean_at_k(&groups, 1).unwrap(), 1.0);
}

#[test]
fn random_agent_trails_the_oracle_on_frozenlake() {
    let reg = Registry::builtin();
    let spec = reg.spec("frozenlake", 2).unwrap();
    let seeds: Vec<u64> = (0..100).collect();
    let mean =
        |batch: &[gymv_core::EpisodeRecord]| batch.iter().map(|e| e.final_score).sum::<f64>() / batch.len() as f64;
    let oracle = mean(&run_episodes(&reg, &mut OracleAgent, &spec, &seeds, 1).unwrap());
    let random = mean(&run_episodes(&reg, &mut RandomAgent::default(), &spec, &seeds, 1).unwrap());
    assert_eq!(oracle, 1.0);
    assert!(random < oracle, "{random}");
}

#[test]
fn oracle_sweep_is_flat() {
    let reg = Registry::builtin();
    let s = difficulty_sweep(
        &reg,
        &mut OracleAgent,
        &reg.spec("mini_sudoku", 0).unwrap(),
        &[1, 2, 3, 4, 5],
        1,
    )
    .unwrap();
    assert_eq!(s.rows.iter().map(|r| r.acc).collect::<Vec<_>>(), vec![1.0; 3]);
    assert_eq!(s.rho, Some(1.0));
}

#[test]
fn z_test_examples() {
    // 50% -> 60% on 500 each: z = 0.1 / sqrt(0.55 * 0.45 * 2 / 500)
    let z = two_proportion_z(250, 500, 300, 500);
    assert!((z - 0.1 / (0.55f64 * 0.45 * 2.0 / 500.0).sqrt()).abs() < 1e-12);
    assert!(significant_increase(250, 500, 300, 500));
    assert!(!significant_increase(300, 500, 250, 500));
    assert_eq!(two_proportion_z(0, 500, 0, 500), 0.0);
}

proptest! {
    #[test]
    fn mean_at_k_ignores_rollout_order(groups in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 3), 1..20), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = groups.clone();
        for g in &mut shuffled {
            g.shuffle(&mut rng);
        }
        shuffled.shuffle(&mut rng);
        let a = mean_at_k(&groups, 3).unwrap();
        let b = mean_at_k(&shuffled, 3).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn clipping_is_idempotent(values in proptest::collection::vec(-50.0f64..50.0, 1..10)) {
        let once = clip_negatives(report(values));
        let twice = clip_negatives(once.clone());
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.envs.iter().filter(|e| e.mode == Mode::MultiTurn).all(|e| e.mean_at_k >= 0.0));
    }

    #[test]
    fn breadth_is_sum_of_positive_parts(d in proptest::collection::vec(-10.0f64..10.0, 0..12)) {
        let b = transfer_breadth(d.iter());
        prop_assert!(b >= 0.0);
        let mut sorted = d.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert!((b - transfer_breadth(sorted.iter())).abs() < 1e-9);
    }
}

#[test]
fn random_sudoku_accuracy_does_not_rise_with_difficulty() {
    let reg = Registry::builtin();
    let c = support::cliff::measure(&reg, "mini_sudoku", 500, 20);
    assert!(c.non_increasing(), "{c:?}");
    assert!(c.oracle_perfect());
}
