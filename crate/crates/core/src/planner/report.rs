use serde::Serialize;

/// Feasibility checks in canonical order; a rejected primitive is tagged with
/// the first one it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    CorridorVisibility,
    CorridorSafety,
    DistanceMin,
    DistanceMax,
    DynamicCollision,
    TargetCollision,
    Dbvc,
    Divc,
    DynamicOcclusion,
    Vel,
    Acc,
    Yaw,
}

impl CheckKind {
    pub const ALL: [CheckKind; 12] = [
        CheckKind::CorridorVisibility,
        CheckKind::CorridorSafety,
        CheckKind::DistanceMin,
        CheckKind::DistanceMax,
        CheckKind::DynamicCollision,
        CheckKind::TargetCollision,
        CheckKind::Dbvc,
        CheckKind::Divc,
        CheckKind::DynamicOcclusion,
        CheckKind::Vel,
        CheckKind::Acc,
        CheckKind::Yaw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::CorridorVisibility => "corridor-visibility",
            CheckKind::CorridorSafety => "corridor-safety",
            CheckKind::DistanceMin => "distance-min",
            CheckKind::DistanceMax => "distance-max",
            CheckKind::DynamicCollision => "dynamic-collision",
            CheckKind::TargetCollision => "target-collision",
            CheckKind::Dbvc => "dbvc",
            CheckKind::Divc => "divc",
            CheckKind::DynamicOcclusion => "dynamic-occlusion",
            CheckKind::Vel => "vel",
            CheckKind::Acc => "acc",
            CheckKind::Yaw => "yaw",
        }
    }

    pub fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

/// Per-sample terminal status of one planning call.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// `None` for a passing sample, otherwise its first failed check.
    pub outcomes: Vec<Option<CheckKind>>,
    pub counts: [usize; 12],
    pub passed: usize,
}

impl FeasibilityReport {
    pub fn from_outcomes(outcomes: Vec<Option<CheckKind>>) -> Self {
        let mut counts = [0; 12];
        let mut passed = 0;
        for o in &outcomes {
            match o {
                Some(k) => counts[*k as usize] += 1,
                None => passed += 1,
            }
        }
        Self { outcomes, counts, passed }
    }

    pub fn count(&self, kind: CheckKind) -> usize {
        self.counts[kind as usize]
    }

    /// Single-bit mask of the first failure of sample `i`, 0 when it passed.
    pub fn mask(&self, i: usize) -> u16 {
        self.outcomes[i].map_or(0, CheckKind::bit)
    }

    /// `name=count` pairs for the nonzero categories, in canonical order.
    pub fn histogram(&self) -> String {
        CheckKind::ALL
            .iter()
            .filter(|k| self.count(**k) > 0)
            .map(|k| format!("{}={}", k.name(), self.count(*k)))
            .collect::<Vec<_>>()
            .join(";")
    }
}
