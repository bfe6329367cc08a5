use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::criteria::{
    moment_criterion, nmode_moment_criterion, pair_variance_criterion, phase_variance_criterion,
    pure_full_criterion, sqrt_criterion,
};
use super::{CriterionId, CriterionResult, Params, Scope, DEFAULT_MAX_DEGREE, DEFAULT_TOLERANCE};
use crate::bipartition::Bipartition;
use crate::error::{Error, Result};
use crate::fock::{QuantumState, State};

/// Which criteria a battery run evaluates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionSet {
    /// Everything applicable to the state. For three modes the `n`-mode
    /// moment family is left out, since it reproduces the three-mode moment
    /// criteria term by term.
    #[default]
    All,
    Only(Vec<CriterionId>),
}

impl CriterionSet {
    /// Comma-separated criterion names, or `all`.
    pub fn parse(list: &str) -> Result<Self> {
        let list = list.trim();
        if list.is_empty() || list == "all" {
            return Ok(Self::All);
        }
        let mut ids = Vec::new();
        for name in list.split(',').map(str::trim) {
            let id = CriterionId::from_name(name).ok_or_else(|| {
                let known: Vec<_> = CriterionId::ALL.iter().map(|c| c.name()).collect();
                Error::arg(format!("unknown criterion '{name}' (known: {})", known.join(", ")))
            })?;
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        Ok(Self::Only(ids))
    }

    fn includes(&self, id: CriterionId, n_modes: usize) -> bool {
        match self {
            Self::All => !(id == CriterionId::NmodeMoment && n_modes == 3),
            Self::Only(ids) => ids.contains(&id),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    /// Largest per-mode degree in the moment sweeps.
    pub max_degree: u32,
    pub tolerance: f64,
    pub criteria: CriterionSet,
    /// Evaluate jobs on the rayon pool. The report is identical either way.
    #[serde(skip)]
    pub parallel: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
            tolerance: DEFAULT_TOLERANCE,
            criteria: CriterionSet::All,
            parallel: true,
        }
    }
}

/// A criterion evaluation that could not be carried out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionError {
    pub criterion: CriterionId,
    pub params: Params,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatteryEntry {
    Result(CriterionResult),
    Error(CriterionError),
}

impl BatteryEntry {
    pub fn result(&self) -> Option<&CriterionResult> {
        match self {
            Self::Result(r) => Some(r),
            Self::Error(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub entries: Vec<BatteryEntry>,
    /// Cuts with at least one fired criterion, canonical and ordered.
    pub entangled_cuts: Vec<Bipartition>,
    pub fully_entangled_via_phase_variance: bool,
    /// Pure states only: every cut of the system has a fired criterion.
    pub fully_entangled_via_all_cuts: bool,
    pub pure_full_via_moment_triple: bool,
}

impl BatteryReport {
    pub fn results(&self) -> impl Iterator<Item = &CriterionResult> {
        self.entries.iter().filter_map(BatteryEntry::result)
    }

    pub fn fired(&self) -> impl Iterator<Item = &CriterionResult> {
        self.results().filter(|r| r.fired())
    }

    pub fn errors(&self) -> impl Iterator<Item = &CriterionError> {
        self.entries.iter().filter_map(|e| match e {
            BatteryEntry::Error(e) => Some(e),
            BatteryEntry::Result(_) => None,
        })
    }

    pub fn any_fired(&self) -> bool {
        self.fired().next().is_some()
    }

    pub fn truncation_warnings(&self) -> usize {
        self.results().filter(|r| r.truncation_warning).count()
    }
}

#[derive(Clone, Debug)]
enum Job {
    Pair(usize),
    Moment(usize, [u32; 3]),
    Sqrt(Bipartition, [u32; 3]),
    Phase,
    PureFull([u32; 3]),
    Nmode(Bipartition, Vec<u32>, bool),
}

impl Job {
    fn id(&self) -> CriterionId {
        match self {
            Job::Pair(_) => CriterionId::PairVariance,
            Job::Moment(..) => CriterionId::Moment,
            Job::Sqrt(..) => CriterionId::MomentSqrt,
            Job::Phase => CriterionId::PhaseVariance,
            Job::PureFull(_) => CriterionId::PureFull,
            Job::Nmode(..) => CriterionId::NmodeMoment,
        }
    }

    fn params(&self) -> Params {
        let mut p = Params::default();
        match self {
            Job::Pair(d) => p.daggered = Some(vec![*d]),
            Job::Moment(d, k) => {
                p.daggered = Some(vec![*d]);
                p.degrees = Some(k.to_vec());
            }
            Job::Sqrt(_, k) | Job::PureFull(k) => p.degrees = Some(k.to_vec()),
            Job::Phase => {}
            Job::Nmode(_, k, conj) => {
                p.degrees = Some(k.clone());
                p.conjugate_complement = Some(*conj);
            }
        }
        p
    }

    fn run(&self, s: &State, tol: f64) -> Result<CriterionResult> {
        match self {
            Job::Pair(d) => pair_variance_criterion(s, *d, tol),
            Job::Moment(d, k) => moment_criterion(s, *d, *k, tol),
            Job::Sqrt(c, k) => sqrt_criterion(s, c, *k, tol),
            Job::Phase => phase_variance_criterion(s, tol),
            Job::PureFull(k) => pure_full_criterion(s, *k, tol),
            Job::Nmode(c, k, conj) => nmode_moment_criterion(s, c, k, *conj, tol),
        }
    }
}

/// All degree vectors of length `n` with entries in `1..=d`, last index
/// fastest.
fn degree_grid(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=d).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn triple(v: &[u32]) -> [u32; 3] {
    [v[0], v[1], v[2]]
}

fn jobs(s: &State, config: &BatteryConfig) -> Vec<Job> {
    let n = s.n_modes();
    let want = |id| config.criteria.includes(id, n);
    let grid = degree_grid(n, config.max_degree);
    let mut jobs = Vec::new();
    if n == 3 {
        if want(CriterionId::PairVariance) {
            jobs.extend((0..3).map(Job::Pair));
        }
        if want(CriterionId::Moment) {
            for d in 0..3 {
                jobs.extend(grid.iter().map(|k| Job::Moment(d, triple(k))));
            }
        }
        if want(CriterionId::MomentSqrt) {
            for c in Bipartition::all(3) {
                jobs.extend(grid.iter().map(|k| Job::Sqrt(c.clone(), triple(k))));
            }
        }
    }
    if want(CriterionId::PhaseVariance) && (n >= 2 || config.criteria != CriterionSet::All) {
        jobs.push(Job::Phase);
    }
    // mixed input is skipped rather than reported, unless explicitly requested
    if n == 3
        && want(CriterionId::PureFull)
        && (s.is_pure() || config.criteria != CriterionSet::All)
    {
        jobs.extend(grid.iter().map(|k| Job::PureFull(triple(k))));
    }
    if want(CriterionId::NmodeMoment) {
        for c in Bipartition::all_oriented(n) {
            jobs.extend(grid.iter().map(|k| Job::Nmode(c.clone(), k.clone(), true)));
        }
        for c in Bipartition::all(n) {
            jobs.extend(grid.iter().map(|k| Job::Nmode(c.clone(), k.clone(), false)));
        }
    }
    jobs
}

/// Evaluate every selected criterion over every cut and degree vector up to
/// `config.max_degree`. Failures of single evaluations become
/// [`BatteryEntry::Error`] records. Entry order depends only on the state's
/// mode count and the configuration.
pub fn run_battery(s: &State, config: &BatteryConfig) -> Result<BatteryReport> {
    if config.max_degree == 0 {
        return Err(Error::arg("max degree must be at least 1"));
    }
    if !(config.tolerance >= 0.0 && config.tolerance.is_finite()) {
        return Err(Error::arg(format!("tolerance must be finite and non-negative, got {}", config.tolerance)));
    }
    let jobs = jobs(s, config);
    let eval = |job: &Job| match job.run(s, config.tolerance) {
        Ok(r) => BatteryEntry::Result(r),
        Err(e) => BatteryEntry::Error(CriterionError {
            criterion: job.id(),
            params: job.params(),
            message: e.to_string(),
        }),
    };
    let entries: Vec<BatteryEntry> = if config.parallel {
        jobs.par_iter().map(eval).collect()
    } else {
        jobs.iter().map(eval).collect()
    };
    Ok(summarize(s, entries))
}

fn summarize(s: &State, entries: Vec<BatteryEntry>) -> BatteryReport {
    let fired = || entries.iter().filter_map(BatteryEntry::result).filter(|r| r.fired());
    let cuts: BTreeSet<Bipartition> = fired()
        .filter_map(|r| match &r.scope {
            Scope::Cut(c) => Some(c.canonical()),
            Scope::Full => None,
        })
        .collect();
    let all_cuts = Bipartition::all(s.n_modes());
    let via_all_cuts = s.is_pure() && !all_cuts.is_empty() && all_cuts.iter().all(|c| cuts.contains(c));
    let via = |id| fired().any(|r| r.criterion == id);
    BatteryReport {
        fully_entangled_via_phase_variance: via(CriterionId::PhaseVariance),
        pure_full_via_moment_triple: via(CriterionId::PureFull),
        fully_entangled_via_all_cuts: via_all_cuts,
        entangled_cuts: all_cuts.into_iter().filter(|c| cuts.contains(c)).collect(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{CutoffSpec, PureState};
    use crate::states::{make_ghz, make_psi, random_product};

    fn pure(p: PureState) -> State {
        State::Pure(p)
    }

    #[test]
    fn degree_grid_order() {
        let g = degree_grid(2, 2);
        assert_eq!(g, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(degree_grid(3, 3).len(), 27);
    }

    #[test]
    fn criterion_set_parse() {
        assert_eq!(CriterionSet::parse("all").unwrap(), CriterionSet::All);
        assert_eq!(
            CriterionSet::parse("moment, phase_variance").unwrap(),
            CriterionSet::Only(vec![CriterionId::Moment, CriterionId::PhaseVariance])
        );
        assert!(CriterionSet::parse("bogus").is_err());
    }

    #[test]
    fn ghz_battery_flags() {
        let s = pure(make_ghz(&CutoffSpec::uniform(3, 2).unwrap()).unwrap());
        let r = run_battery(&s, &BatteryConfig::default()).unwrap();
        assert!(r.fully_entangled_via_phase_variance);
        assert!(r.pure_full_via_moment_triple);
        assert!(r.any_fired());
        assert_eq!(r.errors().count(), 0);
        // 3 pair + 81 moment + 81 sqrt + 1 phase + 27 pure-full
        assert_eq!(r.entries.len(), 193);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let s = pure(make_psi(&CutoffSpec::uniform(3, 3).unwrap()).unwrap());
        let par = run_battery(&s, &BatteryConfig::default()).unwrap();
        let ser = run_battery(
            &s,
            &BatteryConfig {
                parallel: false,
                ..BatteryConfig::default()
            },
        )
        .unwrap();
        assert_eq!(par, ser);
        assert!(par.entangled_cuts.contains(&Bipartition::ab_c()));
    }

    #[test]
    fn product_state_is_silent() {
        let c = CutoffSpec::uniform(3, 5).unwrap();
        for seed in 0..5 {
            let s = pure(random_product(&c, seed));
            let r = run_battery(&s, &BatteryConfig { max_degree: 2, ..Default::default() }).unwrap();
            let fired: Vec<_> = r.fired().collect();
            assert!(fired.iter().all(|f| f.truncation_warning), "{fired:?}");
            assert!(r.entangled_cuts.is_empty());
        }
    }

    #[test]
    fn explicit_mixed_pure_full_is_an_error_entry() {
        let s = State::Mixed(make_ghz(&CutoffSpec::uniform(3, 2).unwrap()).unwrap().to_density());
        let cfg = BatteryConfig {
            max_degree: 1,
            criteria: CriterionSet::Only(vec![CriterionId::PureFull]),
            ..Default::default()
        };
        let r = run_battery(&s, &cfg).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.errors().count(), 1);
        let r = run_battery(&s, &BatteryConfig::default()).unwrap();
        assert!(r.results().all(|x| x.criterion != CriterionId::PureFull));
        assert!(!r.fully_entangled_via_all_cuts);
    }

    #[test]
    fn four_mode_battery_uses_nmode_family() {
        let s = pure(make_ghz(&CutoffSpec::uniform(4, 2).unwrap()).unwrap());
        let r = run_battery(&s, &BatteryConfig { max_degree: 1, ..Default::default() }).unwrap();
        // phase + 14 oriented + 7 canonical
        assert_eq!(r.entries.len(), 22);
        assert!(r.fully_entangled_via_phase_variance);
    }

    #[test]
    fn zero_max_degree_rejected() {
        let s = pure(make_ghz(&CutoffSpec::uniform(3, 2).unwrap()).unwrap());
        assert!(run_battery(&s, &BatteryConfig { max_degree: 0, ..Default::default() }).is_err());
    }
}
