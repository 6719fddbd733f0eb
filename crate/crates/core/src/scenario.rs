//! Run configurations, named demo scenarios and deterministic sweeps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::adversary::{AdversarySpec, Policy};
use crate::density::{density_curve, empirical_lower, linear_checkpoints, DensityCurve};
use crate::engine::{analyze, run, Report, RunOptions, Transcript};
use crate::error::{Error, Result};
use crate::family::{Family, FamilyConfig};
use crate::learner::{LearnerKind, LearnerSpec, Schedule};
use crate::upset::{Rational, UPSet};

/// Family given by builtin name or inline description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySource {
    Builtin(String),
    Inline(FamilyConfig),
}

impl FamilySource {
    pub fn load(&self) -> Result<Family> {
        match self {
            FamilySource::Builtin(name) => Family::builtin(name),
            FamilySource::Inline(cfg) => Family::from_config(cfg.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: String,
    pub family: FamilySource,
    /// Global index of `K`.
    #[serde(rename = "kIdx", default)]
    pub k_idx: usize,
    pub adversary: AdversarySpec,
    pub learner: LearnerSpec,
    pub horizon: u64,
    /// Prefix lengths for the density curve; ten even points up to the horizon when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkpoints: Vec<u64>,
    /// Fraction of the largest checkpoint skipped by the lower-density estimate.
    #[serde(default = "half")]
    pub burn: String,
    #[serde(default)]
    pub seed: u64,
    /// Record hypothesis index sets in the transcript.
    #[serde(default)]
    pub indices: bool,
}

fn half() -> String {
    "1/2".into()
}

impl RunConfig {
    pub fn new(name: &str, family: &str, k_idx: usize, adversary: AdversarySpec, learner: LearnerSpec, horizon: u64) -> Self {
        RunConfig {
            name: name.into(),
            family: FamilySource::Builtin(family.into()),
            k_idx,
            adversary,
            learner,
            horizon,
            checkpoints: vec![],
            burn: half(),
            seed: 0,
            indices: false,
        }
    }

    /// Parses JSON, reporting line and column of the first problem.
    pub fn from_json(text: &str) -> Result<RunConfig> {
        serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)?;
        RunConfig::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn checkpoints(&self) -> Vec<u64> {
        if self.checkpoints.is_empty() {
            linear_checkpoints(self.horizon.div_ceil(10), self.horizon, 10)
        } else {
            self.checkpoints.clone()
        }
    }

    pub fn burn(&self) -> Result<Rational> {
        let b = crate::adversary::parse_rational(&self.burn)?;
        if b < Rational::from_integer(0) || b >= Rational::from_integer(1) {
            return Err(Error::Config(format!("burn must lie in [0, 1), got {}", self.burn)));
        }
        Ok(b)
    }

    /// Checks every field without running; returns the loaded family.
    pub fn validate(&self) -> Result<Arc<Family>> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let family = Arc::new(self.family.load()?);
        let k = family
            .language_at(self.k_idx)
            .map_err(|e| Error::Config(format!("kIdx {}: {e}", self.k_idx)))?;
        if !k.is_infinite() {
            return Err(Error::Config(format!("kIdx {} names a finite language", self.k_idx)));
        }
        match &self.adversary {
            AdversarySpec::Fixed { c, .. } | AdversarySpec::Teaser { c, .. } => {
                if !c.is_infinite() || !c.is_subset(&k) {
                    return Err(Error::Config("adversary c must be an infinite subset of K".into()));
                }
            }
            AdversarySpec::Density { .. } | AdversarySpec::Recycler => {}
        }
        let cps = self.checkpoints();
        if cps.first() == Some(&0) || cps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("checkpoints must be positive and strictly increasing".into()));
        }
        self.burn()?;
        self.adversary.build(&family, self.k_idx, self.seed)?;
        self.learner.build(&family)?;
        Ok(family)
    }

    pub fn execute(&self) -> Result<RunOutput> {
        let family = self.validate()?;
        let mut adversary = self.adversary.build(&family, self.k_idx, self.seed)?;
        let mut learner = self.learner.build(&family)?;
        let opts = RunOptions { seed: self.seed, want_indices: self.indices, ..RunOptions::new(self.horizon) };
        let transcript = run(&family, self.k_idx, adversary.as_mut(), learner.as_mut(), &opts)?;
        let report = analyze(&transcript);
        let curve = density_curve(&transcript, &self.checkpoints())?;
        let lower = empirical_lower(&curve, self.burn()?)?;
        Ok(RunOutput { config: self.clone(), transcript, report, curve, lower })
    }
}

pub struct RunOutput {
    pub config: RunConfig,
    pub transcript: Transcript,
    pub report: Report,
    pub curve: DensityCurve,
    pub lower: Rational,
}

fn ratio_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl RunOutput {
    pub fn report_json(&self) -> serde_json::Value {
        json!({
            "name": self.config.name,
            "run": self.transcript.header(),
            "report": self.report,
            "density": {
                "burn": self.config.burn,
                "lower": ratio_text(&self.lower),
                "curve": self.curve,
            },
        })
    }

    /// Writes `transcript.jsonl`, `report.json` and `density.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut jsonl = Vec::new();
        self.transcript.write_jsonl(&mut jsonl)?;
        fs::write(dir.join("transcript.jsonl"), jsonl)?;
        let report = serde_json::to_string_pretty(&self.report_json()).expect("report serializes");
        fs::write(dir.join("report.json"), report + "\n")?;
        fs::write(dir.join("density.csv"), self.curve.to_csv())?;
        Ok(())
    }

    /// Density at the largest checkpoint.
    pub fn final_density(&self) -> Rational {
        self.curve.points.last().map_or(Rational::from_integer(0), |p| p.1)
    }
}

/// Names accepted by [`demo`].
pub const DEMOS: &[&str] = &[
    "pod-vs-recycler",
    "pod-density-half",
    "weak-density-half",
    "chain-switch",
    "gcd-multiples",
    "identifier-arithprog",
    "teaser-ex1",
    "teaser-ex2",
    "teaser-ex3",
];

fn shuffled(c: UPSet, block_len: u64) -> AdversarySpec {
    AdversarySpec::Fixed { c, policy: Policy::BlockShuffle { block_len } }
}

/// A named scenario.
pub fn demo(name: &str) -> Result<RunConfig> {
    let learner = LearnerSpec::new;
    let density = |alpha: &str| AdversarySpec::Density { alpha: alpha.into(), policy: Policy::Increasing };
    let increasing = |c: UPSet| AdversarySpec::Fixed { c, policy: Policy::Increasing };
    let teaser = |c: UPSet| AdversarySpec::Teaser { c, patience: 10 };
    let ex1 = "ex1-cosingleton-with-N";
    let mut cfg = match name {
        "pod-vs-recycler" => {
            RunConfig::new(name, ex1, 0, AdversarySpec::Recycler, LearnerSpec::pod(Schedule::Linear), 100_000)
        }
        "pod-density-half" => RunConfig::new(name, ex1, 0, density("1/2"), LearnerSpec::pod(Schedule::Linear), 100_000),
        "weak-density-half" => RunConfig::new(name, ex1, 0, density("1/2"), learner(LearnerKind::WeakDensity), 100_000),
        "chain-switch" => RunConfig::new(
            name,
            "ex3-cosingleton",
            0,
            shuffled(UPSet::evens(), 64),
            learner(LearnerKind::Algorithm1),
            10_000,
        ),
        // K = 4ℕ (index 3), C = 12ℕ.
        "gcd-multiples" => {
            RunConfig::new(name, "multiples", 3, increasing(UPSet::multiples(12)), learner(LearnerKind::Gcd), 1_000)
        }
        "identifier-arithprog" => {
            let f = Family::builtin("arithprog")?;
            let k = f.index_of_param(0, crate::family::Param::Pair { i: 3, d: 3 }).expect("valid parameter");
            RunConfig::new(name, "arithprog", k, increasing(UPSet::arith(3, 12)), learner(LearnerKind::Identifier), 1_000)
        }
        "teaser-ex1" => RunConfig::new(name, ex1, 0, teaser(UPSet::naturals()), learner(LearnerKind::Identifier), 10_000),
        "teaser-ex2" => RunConfig::new(
            name,
            "ex2-specials",
            0,
            teaser(UPSet::naturals().minus_below(2)),
            learner(LearnerKind::Identifier),
            10_000,
        ),
        "teaser-ex3" => RunConfig::new(
            name,
            "ex3-cosingleton",
            0,
            teaser(UPSet::naturals().without([1])),
            learner(LearnerKind::Identifier),
            10_000,
        ),
        other => {
            return Err(Error::Config(format!("unknown demo `{other}`; known: {}", DEMOS.join(", "))));
        }
    };
    cfg.seed = 1;
    Ok(cfg)
}

/// Scenarios crossed with horizons and seeds.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenarios: Vec<RunConfig>,
    pub horizons: Vec<u64>,
    pub seeds: Vec<u64>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<SweepConfig> {
        serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    /// One config per (scenario, horizon, seed), checkpoints scaled to each horizon.
    pub fn expand(&self) -> Result<Vec<RunConfig>> {
        let mut names: Vec<&str> = self.scenarios.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        if names.iter().any(|n| n.is_empty()) || names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("sweep scenarios need distinct non-empty names".into()));
        }
        let mut out = Vec::new();
        for s in &self.scenarios {
            for &h in &self.horizons {
                for &seed in &self.seeds {
                    let mut c = s.clone();
                    c.horizon = h;
                    c.seed = seed;
                    c.checkpoints.retain(|&n| n <= h);
                    out.push(c);
                }
            }
        }
        Ok(out)
    }
}

/// Frozen column order of the sweep CSV.
pub const SWEEP_COLUMNS: &str = "scenario,horizon,seed,status,learner,adversary,invalid_count,last_invalid_t,mind_changes,full_count,stabilization_t,lower_density,final_density";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub scenario: String,
    pub horizon: u64,
    pub seed: u64,
    /// `ok`, or the error text.
    pub status: String,
    pub fields: String,
}

impl SweepRow {
    fn key(&self) -> (&str, u64, u64) {
        (&self.scenario, self.horizon, self.seed)
    }

    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn sweep_row(cfg: &RunConfig) -> SweepRow {
    let base = |status: String, fields: String| SweepRow {
        scenario: cfg.name.clone(),
        horizon: cfg.horizon,
        seed: cfg.seed,
        status,
        fields,
    };
    match cfg.execute() {
        Ok(out) => {
            let r = &out.report;
            let fields = [
                csv_field(&out.transcript.learner),
                csv_field(&out.transcript.adversary),
                r.invalid_count.to_string(),
                opt(r.last_invalid_t),
                r.mind_changes.to_string(),
                opt(r.full_count),
                opt(r.stabilization_t),
                ratio_text(&out.lower),
                ratio_text(&out.final_density()),
            ]
            .join(",");
            base("ok".into(), fields)
        }
        Err(e) => base(csv_field(&e.to_string()), ",".repeat(8)),
    }
}

/// Runs every expanded config on `parallel` threads; rows come back sorted
/// by (scenario, horizon, seed), whatever the scheduling.
pub fn sweep(cfg: &SweepConfig, parallel: usize) -> Result<Vec<SweepRow>> {
    let runs = cfg.expand()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut rows: Vec<SweepRow> = pool.install(|| runs.par_iter().map(sweep_row).collect());
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_COLUMNS}\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", csv_field(&r.scenario), r.horizon, r.seed, r.status, r.fields);
    }
    out
}

/// Names accepted by [`preset_sweep`].
pub const SWEEPS: &[&str] = &["alpha-pod", "alpha-weak"];

/// Density adversaries with α ∈ {1, 1/2, 1/4} against a density learner on `K = ℕ`.
pub fn preset_sweep(name: &str) -> Result<SweepConfig> {
    let learner = match name {
        "alpha-pod" => LearnerSpec::pod(Schedule::Linear),
        "alpha-weak" => LearnerSpec::new(LearnerKind::WeakDensity),
        other => return Err(Error::Config(format!("unknown sweep `{other}`; known: {}", SWEEPS.join(", ")))),
    };
    let scenarios = [("alpha=1", "1"), ("alpha=1/2", "1/2"), ("alpha=1/4", "1/4")]
        .into_iter()
        .map(|(n, a)| {
            RunConfig::new(
                n,
                "ex1-cosingleton-with-N",
                0,
                AdversarySpec::Density { alpha: a.into(), policy: Policy::Increasing },
                learner.clone(),
                10_000,
            )
        })
        .collect();
    Ok(SweepConfig { scenarios, horizons: vec![10_000, 100_000], seeds: vec![1] })
}

/// Process exit status for an error: 2 for protocol violations, 1 otherwise.
pub fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Protocol { .. } | Error::TeaserExhausted { .. } => 2,
        _ => 1,
    }
}
