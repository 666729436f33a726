//! Monte Carlo success-rate benchmarks over a grid of scenario settings.
//!
//! Every variant in a grid cell flies the same scenarios: the scenario seed
//! depends on the base seed, the cell and the trial index, never on the
//! variant, so variant comparisons are paired.

use std::fmt;
use std::io::{self, Write};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::planner::{CellMode, PlannerConfig, VisibilityMode};
use crate::sim::{
    dynamic_obstacle_scenario, empty_space_scenario, evaluate_success, DynamicParams, EmptySpaceParams, FailureKind,
    GeneratorError, Simulation,
};

/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMode {
    /// Empty space; no, static and dynamic cells.
    Cells,
    /// Moving obstacles; noncooperative, conservative and proposed checks.
    Checks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Variant {
    pub name: &'static str,
    pub cell_mode: CellMode,
    pub visibility_mode: VisibilityMode,
}

impl BenchMode {
    pub fn variants(self) -> [Variant; 3] {
        let v = |name, cell_mode, visibility_mode| Variant { name, cell_mode, visibility_mode };
        match self {
            BenchMode::Cells => [
                v("no", CellMode::None, VisibilityMode::Relaxed),
                v("static", CellMode::Static, VisibilityMode::Relaxed),
                v("dynamic", CellMode::Dynamic, VisibilityMode::Relaxed),
            ],
            BenchMode::Checks => [
                v("noncooperative", CellMode::None, VisibilityMode::Conservative),
                v("conservative", CellMode::Dynamic, VisibilityMode::Conservative),
                v("proposed", CellMode::Dynamic, VisibilityMode::Relaxed),
            ],
        }
    }

    pub fn variant(self, name: &str) -> Option<Variant> {
        self.variants().into_iter().find(|v| v.name == name)
    }

    /// The full grid: agent counts against annuli or obstacle counts.
    pub fn grid(self) -> Vec<GridCell> {
        match self {
            BenchMode::Cells => [3, 4, 5]
                .into_iter()
                .flat_map(|agents| Annulus::ALL.into_iter().map(move |a| GridCell::Empty { agents, annulus: a }))
                .collect(),
            BenchMode::Checks => [2, 3, 4]
                .into_iter()
                .flat_map(|agents| [5, 10, 20].into_iter().map(move |obstacles| GridCell::Dynamic { agents, obstacles }))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Annulus {
    Short,
    Medium,
    Long,
}

impl Annulus {
    pub const ALL: [Annulus; 3] = [Annulus::Short, Annulus::Medium, Annulus::Long];

    pub fn range(self) -> (f64, f64) {
        match self {
            Annulus::Short => (0.4, 1.2),
            Annulus::Medium => (0.8, 1.6),
            Annulus::Long => (1.2, 2.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Annulus::Short => "short",
            Annulus::Medium => "medium",
            Annulus::Long => "long",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridCell {
    Empty { agents: usize, annulus: Annulus },
    Dynamic { agents: usize, obstacles: usize },
}

impl GridCell {
    pub fn agents(&self) -> usize {
        match *self {
            GridCell::Empty { agents, .. } | GridCell::Dynamic { agents, .. } => agents,
        }
    }

    /// Stable numeric key used to derive scenario seeds.
    fn key(&self) -> u64 {
        match *self {
            GridCell::Empty { agents, annulus } => (1 << 32) | ((agents as u64) << 8) | annulus as u64,
            GridCell::Dynamic { agents, obstacles } => (2 << 32) | ((agents as u64) << 16) | obstacles as u64,
        }
    }
}

impl fmt::Display for GridCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridCell::Empty { agents, annulus } => write!(f, "n{agents}-{}", annulus.name()),
            GridCell::Dynamic { agents, obstacles } => write!(f, "n{agents}-o{obstacles}"),
        }
    }
}

/// Run-wide settings shared by every trial.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub trials: usize,
    pub seed: u64,
    /// Planner settings other than the variant's modes and the annulus.
    pub planner: PlannerConfig,
    /// How long the target keeps moving; `None` uses the generator default.
    pub duration: Option<f64>,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self { trials: 100, seed: 0, planner: PlannerConfig::default(), duration: None }
    }
}

/// Seed of one trial's scenario; independent of the variant.
pub fn scenario_seed(base: u64, cell: &GridCell, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(cell.key());
    rng.set_word_pos(2 * trial as u128);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub cell: GridCell,
    pub variant: &'static str,
    pub trial: usize,
    pub scenario_seed: u64,
    pub success: bool,
    /// First failure and its time.
    pub failure: Option<(FailureKind, f64)>,
    /// Simulated time when the run ended (early on failure).
    pub end_time: f64,
    pub plans: usize,
    pub keeps: usize,
}

/// Runs one trial, stopping at the first tick that decides failure.
pub fn run_trial(
    cell: &GridCell,
    variant: &Variant,
    trial: usize,
    settings: &BenchSettings,
) -> Result<TrialOutcome, GeneratorError> {
    let seed = scenario_seed(settings.seed, cell, trial);
    let planner = PlannerConfig {
        cell_mode: variant.cell_mode,
        visibility_mode: variant.visibility_mode,
        threads: 0,
        ..settings.planner.clone()
    };
    let scenario = match *cell {
        GridCell::Empty { agents, annulus } => {
            let mut p = EmptySpaceParams { agents, annulus: annulus.range(), planner, ..Default::default() };
            if let Some(d) = settings.duration {
                p.duration = d;
            }
            empty_space_scenario(&p, seed)?
        }
        GridCell::Dynamic { agents, obstacles } => {
            let mut p = DynamicParams { agents, obstacles, planner, ..Default::default() };
            if let Some(d) = settings.duration {
                p.duration = d;
            }
            dynamic_obstacle_scenario(&p, seed)?
        }
    };
    let mut sim = Simulation::new(scenario).expect("generated scenarios validate");
    while !sim.is_finished() {
        sim.step();
        if sim.metrics().last().is_some_and(|m| m.values().iter().any(|&v| v <= 0.0)) {
            break;
        }
    }
    let end_time = sim.time();
    let run = sim.finish();
    let verdict = evaluate_success(&run.metrics);
    Ok(TrialOutcome {
        cell: *cell,
        variant: variant.name,
        trial,
        scenario_seed: seed,
        success: verdict.success,
        failure: verdict.failures.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)),
        end_time,
        plans: run.plan_log.len(),
        keeps: run.keep_previous_count(),
    })
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub cell: GridCell,
    pub variant: &'static str,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl CellSummary {
    /// True when this interval lies entirely above `other`'s.
    pub fn clearly_above(&self, other: &CellSummary) -> bool {
        self.ci_low > other.ci_high
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub trials: Vec<TrialOutcome>,
    pub summary: Vec<CellSummary>,
}

impl BenchReport {
    pub fn find(&self, cell: &GridCell, variant: &str) -> Option<&CellSummary> {
        self.summary.iter().find(|s| s.cell == *cell && s.variant == variant)
    }
}

/// Runs every `(cell, variant)` pair for `settings.trials` trials. Trials run
/// on the ambient rayon pool; the report does not depend on the thread count.
pub fn run_bench(cells: &[GridCell], variants: &[Variant], settings: &BenchSettings) -> Result<BenchReport, GeneratorError> {
    let jobs: Vec<(GridCell, Variant, usize)> = cells
        .iter()
        .flat_map(|c| variants.iter().flat_map(move |v| (0..settings.trials).map(move |k| (*c, *v, k))))
        .collect();
    let trials = jobs
        .par_iter()
        .map(|(c, v, k)| run_trial(c, v, *k, settings))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = cells
        .iter()
        .flat_map(|c| variants.iter().map(move |v| (c, v)))
        .map(|(c, v)| {
            let rows = trials.iter().filter(|t| t.cell == *c && t.variant == v.name);
            let (n, ok) = rows.fold((0, 0), |(n, ok), t| (n + 1, ok + t.success as usize));
            let (ci_low, ci_high) = wilson_interval(ok, n, Z95);
            CellSummary {
                cell: *c,
                variant: v.name,
                trials: n,
                successes: ok,
                rate: if n > 0 { ok as f64 / n as f64 } else { 0.0 },
                ci_low,
                ci_high,
            }
        })
        .collect();
    Ok(BenchReport { trials, summary })
}

pub fn write_trials_csv<W: Write>(mut w: W, rows: &[TrialOutcome]) -> io::Result<()> {
    writeln!(w, "cell,agents,variant,trial,scenario_seed,success,failure,failure_time,end_time,plans,keeps")?;
    for r in rows {
        let (kind, t) = match r.failure {
            Some((k, t)) => (k.name(), format!("{t:.2}")),
            None => ("", String::new()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{:.2},{},{}",
            r.cell,
            r.cell.agents(),
            r.variant,
            r.trial,
            r.scenario_seed,
            r.success,
            kind,
            t,
            r.end_time,
            r.plans,
            r.keeps
        )?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(mut w: W, rows: &[CellSummary]) -> io::Result<()> {
    writeln!(w, "cell,agents,variant,trials,successes,rate,ci_low,ci_high")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{:.4},{:.4},{:.4}",
            r.cell,
            r.cell.agents(),
            r.variant,
            r.trials,
            r.successes,
            r.rate,
            r.ci_low,
            r.ci_high
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-4);
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn seeds_are_paired_and_distinct() {
        let a = GridCell::Empty { agents: 3, annulus: Annulus::Short };
        let b = GridCell::Empty { agents: 4, annulus: Annulus::Short };
        assert_eq!(scenario_seed(7, &a, 3), scenario_seed(7, &a, 3));
        assert_ne!(scenario_seed(7, &a, 3), scenario_seed(7, &a, 4));
        assert_ne!(scenario_seed(7, &a, 3), scenario_seed(7, &b, 3));
        assert_ne!(scenario_seed(7, &a, 3), scenario_seed(8, &a, 3));
    }

    #[test]
    fn grids_match_the_tables() {
        assert_eq!(BenchMode::Cells.grid().len(), 9);
        assert_eq!(BenchMode::Checks.grid().len(), 9);
        assert_eq!(BenchMode::Checks.variant("proposed").unwrap().visibility_mode, VisibilityMode::Relaxed);
        assert!(BenchMode::Cells.variant("proposed").is_none());
    }
}
