//! Moment- and variance-based entanglement criteria and the battery that
//! runs them over every cut and degree vector.
//!
//! Each criterion is an inequality that every state of some separability
//! class satisfies. A strict violation beyond the tolerance certifies
//! entanglement across the cut the criterion names (or full entanglement
//! for the two full-scope criteria). Margins are sign-normalized so that a
//! positive margin always means "violated".

mod battery;
mod criteria;

use serde::{Deserialize, Serialize};

use crate::bipartition::Bipartition;

pub use battery::{
    run_battery, BatteryConfig, BatteryEntry, BatteryReport, CriterionError, CriterionSet,
};
pub use criteria::{
    moment_criterion, nmode_moment_criterion, pair_variance_criterion, phase_variance_criterion,
    pure_full_criterion, sqrt_criterion, PhaseOptimum,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_DEGREE: u32 = 3;

/// Which family of inequality a result instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    /// `Var(M + M^dag) + Var(i(M - M^dag))` against the separable bound,
    /// with `M` one of `a b c^dag`, `a^dag b c`, `a b^dag c`.
    PairVariance,
    /// `|<a^m b^n (c^dag)^l>|^2` (one mode conjugated) against the full
    /// number-power moment.
    Moment,
    /// `|<a^m b^n c^l>|` against the geometric mean of the two sides'
    /// number-power moments.
    MomentSqrt,
    /// Minimum over `phi` of `Var(e^{i phi} P^dag + e^{-i phi} P)` with
    /// `P = a_1 ... a_n`, against 1. Full-scope.
    PhaseVariance,
    /// Triple-product moment violation together with the three factorized
    /// companion bounds; pure states only. Full-scope.
    PureFull,
    /// `n`-mode moment inequalities across an arbitrary cut.
    NmodeMoment,
}

impl CriterionId {
    pub const ALL: [CriterionId; 6] = [
        CriterionId::PairVariance,
        CriterionId::Moment,
        CriterionId::MomentSqrt,
        CriterionId::PhaseVariance,
        CriterionId::PureFull,
        CriterionId::NmodeMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionId::PairVariance => "pair_variance",
            CriterionId::Moment => "moment",
            CriterionId::MomentSqrt => "moment_sqrt",
            CriterionId::PhaseVariance => "phase_variance",
            CriterionId::PureFull => "pure_full",
            CriterionId::NmodeMoment => "nmode_moment",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// One-line statement of the inequality whose violation fires.
    pub fn description(self) -> &'static str {
        match self {
            CriterionId::PairVariance => {
                "variance sum of the Hermitian pair below the separable bound => cut entangled"
            }
            CriterionId::Moment => {
                "|<conjugated monomial>|^2 above the number-power moment => cut entangled"
            }
            CriterionId::MomentSqrt => {
                "|<a^m b^n c^l>| above the geometric mean of side moments => cut entangled"
            }
            CriterionId::PhaseVariance => "min_phi Var K(phi) < 1 => fully entangled",
            CriterionId::PureFull => {
                "triple moment violation with factorized companions bounded => pure state fully entangled"
            }
            CriterionId::NmodeMoment => "n-mode moment inequality violated => cut entangled",
        }
    }
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What a fired criterion concludes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Cut(Bipartition),
    Full,
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scope::Cut(c) => write!(f, "{c}"),
            Scope::Full => f.write_str("full"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Fired,
    NotFired,
}

/// Inputs that identify a single evaluation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    /// Optimal phase (full variance) in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    /// Mode whose operator is conjugated, or the distinguished mode of the
    /// variance pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub daggered: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_complement: Option<bool>,
}

/// `lhs <= rhs` side condition of a compound criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Companion {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// One inequality evaluated on one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: CriterionId,
    pub scope: Scope,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    /// Positive iff the inequality is violated.
    pub margin: f64,
    pub verdict: Verdict,
    /// The cutoff may have changed the numbers: a degree reaches a mode's
    /// cutoff, or a raising operator meets population at the top level.
    pub truncation_warning: bool,
    /// Separable bound written with infinite-space commutators; differs from
    /// `rhs` only when the state has population at the top level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_untruncated: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub companions: Vec<Companion>,
}

impl CriterionResult {
    pub fn fired(&self) -> bool {
        self.verdict == Verdict::Fired
    }

    /// `fired <=> margin > tol`.
    pub(crate) fn decide(margin: f64, tol: f64) -> Verdict {
        if margin > tol {
            Verdict::Fired
        } else {
            Verdict::NotFired
        }
    }
}
