//! Battery reports as JSON documents and fixed-width text tables.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bipartition::Bipartition;
use crate::error::{Error, Result};
use crate::fock::{QuantumState, State};
use crate::oracle::{schmidt_rank, DEFAULT_CAPACITY, DEFAULT_SCHMIDT_TOL};
use crate::state_spec::StateSpec;
use crate::witness::{run_battery, BatteryConfig, BatteryEntry, BatteryReport, CriterionSet, Scope};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// How the phase of the full-scope variance is chosen.
pub const PHASE_HANDLING: &str = "closed_form_minimum";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub max_degree: u32,
    pub tolerance: f64,
    pub criteria: CriterionSet,
    pub phase_handling: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub any_fired: bool,
    /// Cut labels such as `AB|C`.
    pub entangled_cuts: Vec<String>,
    pub fully_entangled_via_phase_variance: bool,
    pub fully_entangled_via_all_cuts: bool,
    pub pure_full_via_moment_triple: bool,
}

/// One fired criterion, stated in words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub criterion: String,
    pub statement: String,
    /// Cut label, or `full`.
    pub conclusion: String,
    pub params: String,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtCheck {
    pub cut: String,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Some criterion fired on this cut.
    pub detected: bool,
    /// `false` only when a criterion fired on a cut of Schmidt rank 1.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationInfo {
    /// Results whose numbers the cutoff may have changed.
    pub flagged_results: usize,
    /// Probability weight discarded when truncating a coherent-type state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub input: Value,
    pub config: ConfigEcho,
    pub state: StateSummary,
    pub results: Vec<BatteryEntry>,
    pub flags: Flags,
    pub findings: Vec<Finding>,
    pub truncation: TruncationInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<SchmidtCheck>>,
    pub timing_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSummary {
    pub cutoff: Vec<usize>,
    pub total_dim: usize,
    pub pure: bool,
}

/// Everything the CLI needs besides the state document.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub battery: BatteryConfig,
    pub seed: Option<u64>,
    pub oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            battery: BatteryConfig::default(),
            seed: None,
            oracle: false,
        }
    }
}

fn params_label(p: &crate::witness::Params) -> String {
    let mut parts = Vec::new();
    if let Some(k) = &p.degrees {
        let k: Vec<String> = k.iter().map(u32::to_string).collect();
        parts.push(format!("k=({})", k.join(",")));
    }
    if let Some(d) = &p.daggered {
        let d: Vec<String> = d.iter().map(|&m| mode_name(m)).collect();
        parts.push(format!("dag={}", d.join("")));
    }
    if let Some(c) = p.conjugate_complement {
        parts.push(format!("conj={c}"));
    }
    if let Some(phi) = p.phase {
        parts.push(format!("phi={phi:.6}"));
    }
    parts.join(" ")
}

fn mode_name(m: usize) -> String {
    if m < 26 {
        ((b'A' + m as u8) as char).to_string()
    } else {
        format!("m{m}")
    }
}

fn scope_label(s: &Scope) -> String {
    s.to_string()
}

/// Parse the document, build the state, run the battery and collect the
/// report. `input` is echoed verbatim.
pub fn run_document(text: &str, opts: &RunOptions) -> Result<(ReportDocument, bool)> {
    let spec = crate::state_spec::parse_state_spec(text)?;
    let input: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    run_spec(&spec, input, opts)
}

pub fn run_spec(spec: &StateSpec, input: Value, opts: &RunOptions) -> Result<(ReportDocument, bool)> {
    let start = Instant::now();
    let built = spec.build(opts.seed)?;
    let report = run_battery(&built.state, &opts.battery)?;
    let oracle = if opts.oracle {
        Some(oracle_checks(&built.state, &report)?)
    } else {
        None
    };
    let doc = assemble(&built.state, input, opts, report, oracle, built.deficit, start.elapsed().as_secs_f64());
    let fired = doc.flags.any_fired;
    Ok((doc, fired))
}

fn oracle_checks(s: &State, report: &BatteryReport) -> Result<Vec<SchmidtCheck>> {
    let Some(p) = s.as_pure() else {
        return Ok(Vec::new());
    };
    Bipartition::all(s.n_modes())
        .into_iter()
        .map(|cut| {
            let d = schmidt_rank(p, &cut, DEFAULT_SCHMIDT_TOL, DEFAULT_CAPACITY)?;
            let detected = report.entangled_cuts.contains(&cut);
            Ok(SchmidtCheck {
                cut: cut.to_string(),
                rank: d.rank,
                singular_values: d.singular_values,
                detected,
                consistent: !detected || d.rank >= 2,
            })
        })
        .collect()
}

fn assemble(
    s: &State,
    input: Value,
    opts: &RunOptions,
    report: BatteryReport,
    oracle: Option<Vec<SchmidtCheck>>,
    deficit: Option<f64>,
    elapsed: f64,
) -> ReportDocument {
    let findings: Vec<Finding> = report
        .fired()
        .map(|r| Finding {
            criterion: r.criterion.name().to_string(),
            statement: r.criterion.description().to_string(),
            conclusion: scope_label(&r.scope),
            params: params_label(&r.params),
            margin: r.margin,
        })
        .collect();
    let mut notes = Vec::new();
    let warned = report.truncation_warnings();
    if warned > 0 {
        notes.push(format!(
            "{warned} result(s) touch the cutoff: a degree reaches a mode's cutoff or the state populates a top level"
        ));
    }
    let all: Vec<usize> = (0..s.n_modes()).collect();
    if s.boundary_population(&all) > opts.battery.tolerance {
        notes.push(
            "the state populates the top Fock level of some mode; the full-scope variance depends on the cutoff there \
             (three-mode GHZ gives 0 at cutoff 2 and 4 at cutoff 3 or more)"
                .to_string(),
        );
    }
    if let Some(d) = deficit.filter(|&d| d > crate::states::DEFICIT_WARN) {
        notes.push(format!("coherent truncation discarded weight {d:e}; raise the cutoff"));
    }
    for e in report.errors() {
        notes.push(format!("{} [{}] not evaluated: {}", e.criterion, params_label(&e.params), e.message));
    }
    let flags = Flags {
        any_fired: report.any_fired(),
        entangled_cuts: report.entangled_cuts.iter().map(|c| c.to_string()).collect(),
        fully_entangled_via_phase_variance: report.fully_entangled_via_phase_variance,
        fully_entangled_via_all_cuts: report.fully_entangled_via_all_cuts,
        pure_full_via_moment_triple: report.pure_full_via_moment_triple,
    };
    ReportDocument {
        tool_version: TOOL_VERSION.to_string(),
        input,
        config: ConfigEcho {
            max_degree: opts.battery.max_degree,
            tolerance: opts.battery.tolerance,
            criteria: opts.battery.criteria.clone(),
            phase_handling: PHASE_HANDLING.to_string(),
            seed: opts.seed,
            oracle: opts.oracle,
        },
        state: StateSummary {
            cutoff: s.cutoff().dims().to_vec(),
            total_dim: s.cutoff().total_dim(),
            pure: s.is_pure(),
        },
        results: report.entries,
        flags,
        findings,
        truncation: TruncationInfo {
            flagged_results: warned,
            deficit,
            notes,
        },
        oracle,
        timing_seconds: elapsed,
    }
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Fixed-width table of every result followed by the derived flags.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "witness {}  cutoff {:?}  dim {}  {}",
            self.tool_version,
            self.state.cutoff,
            self.state.total_dim,
            if self.state.pure { "pure" } else { "mixed" }
        );
        let _ = writeln!(
            out,
            "max degree {}  tolerance {:e}  time {:.3} s",
            self.config.max_degree, self.config.tolerance, self.timing_seconds
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<15} {:<8} {:<28} {:>14} {:>14} {:>14}  {}",
            "criterion", "cut", "params", "lhs", "rhs", "margin", "verdict"
        );
        let _ = writeln!(out, "{}", "-".repeat(107));
        for e in &self.results {
            match e {
                BatteryEntry::Result(r) => {
                    let verdict = match (r.fired(), r.truncation_warning) {
                        (true, false) => "FIRED",
                        (true, true) => "FIRED*",
                        (false, false) => "-",
                        (false, true) => "-*",
                    };
                    let _ = writeln!(
                        out,
                        "{:<15} {:<8} {:<28} {:>14.6e} {:>14.6e} {:>14.6e}  {}",
                        r.criterion.name(),
                        scope_label(&r.scope),
                        params_label(&r.params),
                        r.lhs,
                        r.rhs,
                        r.margin,
                        verdict
                    );
                }
                BatteryEntry::Error(err) => {
                    let _ = writeln!(
                        out,
                        "{:<15} {:<8} {:<28} error: {}",
                        err.criterion.name(),
                        "",
                        params_label(&err.params),
                        err.message
                    );
                }
            }
        }
        let _ = writeln!(out);
        let f = &self.flags;
        let cuts = if f.entangled_cuts.is_empty() {
            "none".to_string()
        } else {
            f.entangled_cuts.join(", ")
        };
        let _ = writeln!(out, "entangled cuts:                     {cuts}");
        let _ = writeln!(out, "fully entangled (phase variance):   {}", f.fully_entangled_via_phase_variance);
        let _ = writeln!(out, "fully entangled (all cuts, pure):   {}", f.fully_entangled_via_all_cuts);
        let _ = writeln!(out, "fully entangled (moment triple):    {}", f.pure_full_via_moment_triple);
        if let Some(checks) = &self.oracle {
            let _ = writeln!(out);
            for c in checks {
                let _ = writeln!(
                    out,
                    "schmidt {:<8} rank {:<4} detected {:<5} {}",
                    c.cut,
                    c.rank,
                    c.detected,
                    if c.consistent { "ok" } else { "CONTRADICTION" }
                );
            }
        }
        if !self.truncation.notes.is_empty() {
            let _ = writeln!(out);
            for n in &self.truncation.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        let _ = writeln!(out, "* result touches the cutoff");
        out
    }
}
