use proptest::prelude::*;
use vistrack::bench::{
    run_bench, run_trial, scenario_seed, wilson_interval, write_summary_csv, write_trials_csv, Annulus, BenchMode, BenchSettings,
    GridCell, Z95,
};
use vistrack::planner::PlannerConfig;

fn quick(seed: u64) -> BenchSettings {
    BenchSettings {
        trials: 1,
        seed,
        planner: PlannerConfig { sample_count: 100, ..Default::default() },
        duration: Some(2.0),
    }
}

proptest! {
    #[test]
    fn wilson_interval_brackets_the_rate(trials in 1usize..500, frac in 0.0..=1.0f64) {
        let ok = ((trials as f64) * frac).round() as usize;
        let (lo, hi) = wilson_interval(ok, trials, Z95);
        let p = ok as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
        // symmetric under swapping successes and failures
        let (lo2, hi2) = wilson_interval(trials - ok, trials, Z95);
        prop_assert!((lo - (1.0 - hi2)).abs() < 1e-12 && (hi - (1.0 - lo2)).abs() < 1e-12);
        // more trials at the same rate never widen the interval
        let (lo4, hi4) = wilson_interval(4 * ok, 4 * trials, Z95);
        prop_assert!(hi4 - lo4 <= hi - lo + 1e-12);
    }

    #[test]
    fn scenario_seeds_depend_on_cell_and_trial_only(base in any::<u64>(), trial in 0usize..1000) {
        let a = GridCell::Empty { agents: 3, annulus: Annulus::Short };
        let b = GridCell::Empty { agents: 3, annulus: Annulus::Medium };
        prop_assert_eq!(scenario_seed(base, &a, trial), scenario_seed(base, &a, trial));
        prop_assert_ne!(scenario_seed(base, &a, trial), scenario_seed(base, &b, trial));
        prop_assert_ne!(scenario_seed(base, &a, trial), scenario_seed(base, &a, trial + 1));
    }
}

#[test]
fn wilson_interval_known_values() {
    assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    let (lo, hi) = wilson_interval(0, 10, Z95);
    assert_eq!(lo, 0.0);
    assert!((hi - 0.277_532).abs() < 1e-5, "{hi}");
    let (lo, hi) = wilson_interval(50, 100, Z95);
    assert!((lo - 0.403_832).abs() < 1e-5 && (hi - 0.596_168).abs() < 1e-5, "{lo} {hi}");
}

#[test]
fn trials_are_reproducible_and_share_scenarios_across_variants() {
    let cell = GridCell::Dynamic { agents: 3, obstacles: 5 };
    let settings = quick(11);
    let [a, b, _] = BenchMode::Checks.variants();
    let first = run_trial(&cell, &a, 2, &settings).unwrap();
    assert_eq!(first, run_trial(&cell, &a, 2, &settings).unwrap());
    let other = run_trial(&cell, &b, 2, &settings).unwrap();
    assert_eq!(first.scenario_seed, other.scenario_seed);
    assert!(first.plans > 0 && first.end_time > 0.0);
    assert_eq!(first.success, first.failure.is_none());
}

#[test]
fn single_trial_smoke_covers_every_pair() {
    for mode in [BenchMode::Cells, BenchMode::Checks] {
        let cells: Vec<GridCell> = mode.grid().into_iter().step_by(4).collect();
        let variants = mode.variants();
        let report = run_bench(&cells, &variants, &quick(3)).unwrap();
        assert_eq!(report.trials.len(), cells.len() * variants.len());
        assert_eq!(report.summary.len(), cells.len() * variants.len());
        for c in &cells {
            for v in &variants {
                let s = report.find(c, v.name).unwrap();
                assert_eq!(s.trials, 1);
                assert!(s.ci_low <= s.rate && s.rate <= s.ci_high);
            }
        }
        let (mut trials_csv, mut summary_csv) = (Vec::new(), Vec::new());
        write_trials_csv(&mut trials_csv, &report.trials).unwrap();
        write_summary_csv(&mut summary_csv, &report.summary).unwrap();
        assert_eq!(String::from_utf8(trials_csv).unwrap().lines().count(), report.trials.len() + 1);
        assert_eq!(String::from_utf8(summary_csv).unwrap().lines().count(), report.summary.len() + 1);
    }
}

#[test]
fn grids_have_nine_cells_and_three_variants() {
    for mode in [BenchMode::Cells, BenchMode::Checks] {
        assert_eq!(mode.grid().len(), 9);
        assert!(mode.variants().iter().all(|v| mode.variant(v.name) == Some(*v)));
    }
    assert_eq!(BenchMode::Cells.variant("proposed"), None);
}
