//! The interaction loop: adversary first, learner second, flags computed
//! structurally at every step.

use std::collections::HashSet;
use std::io::Write;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::adversary::{Adversary, CDecl, History};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::learner::{Learner, PodStats};
use crate::upset::UPSet;

#[derive(Clone, Debug)]
pub struct Step {
    pub t: u64,
    pub w: u64,
    pub o: u64,
    pub indices: Option<Vec<usize>>,
    /// Kept only with [`RunOptions::keep_hypotheses`].
    pub hyp: Option<Arc<UPSet>>,
    pub valid: bool,
    pub contained: bool,
    /// `None` when `C` is not declared.
    pub full: Option<bool>,
    pub hyp_changed: bool,
    pub pod: Option<PodStats>,
}

#[derive(Clone, Debug)]
pub struct Transcript {
    pub family: String,
    pub k_index: usize,
    pub k: Arc<UPSet>,
    pub c: CDecl,
    pub learner: String,
    pub adversary: String,
    pub seed: u64,
    pub steps: Vec<Step>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub horizon: u64,
    pub seed: u64,
    /// Store every `M_t` in the transcript.
    pub keep_hypotheses: bool,
    /// Ask learners for `hyp_indices`.
    pub want_indices: bool,
    /// Fixed `C`: warn when some element of `C` up to this bound was never emitted.
    pub coverage_bound: Option<u64>,
}

impl RunOptions {
    pub fn new(horizon: u64) -> RunOptions {
        RunOptions { horizon, seed: 0, keep_hypotheses: false, want_indices: false, coverage_bound: None }
    }
}

/// Count of strings violating an inclusion, kept in step with the hypothesis.
#[derive(Clone, Copy, Debug)]
enum Violations {
    Finite(u64),
    Infinite,
}

impl Violations {
    fn holds(self) -> bool {
        matches!(self, Violations::Finite(0))
    }

    /// `|a ∖ b|` from scratch.
    fn count(a: &UPSet, b: &UPSet) -> Violations {
        let d = a.difference(b);
        match d.len() {
            Some(n) => Violations::Finite(n),
            None => Violations::Infinite,
        }
    }

    fn bump(&mut self, up: bool) {
        if let Violations::Finite(n) = self {
            *n = if up { *n + 1 } else { n.checked_sub(1).expect("violation count underflow") };
        }
    }
}

/// Flags of the current hypothesis, updated from point differences when the
/// periodic rule is unchanged.
struct Flags {
    k: Arc<UPSet>,
    c: Option<Arc<UPSet>>,
    hyp: Option<Arc<UPSet>>,
    outside_k: Violations,
    missing_c: Violations,
}

impl Flags {
    /// Returns whether the hypothesis changed.
    fn update(&mut self, hyp: &Arc<UPSet>) -> bool {
        let Some(prev) = self.hyp.clone() else {
            self.recount(hyp);
            return true;
        };
        if Arc::ptr_eq(&prev, hyp) {
            return false;
        }
        let mut changed = false;
        let (k, c) = (self.k.clone(), self.c.clone());
        let (mut out_k, mut miss_c) = (self.outside_k, self.missing_c);
        let same_rule = prev.diff_points(hyp, |x| {
            changed = true;
            let now_in = hyp.member(x);
            if !k.member(x) {
                out_k.bump(now_in);
            }
            if c.as_ref().is_some_and(|c| c.member(x)) {
                miss_c.bump(!now_in);
            }
            true
        });
        if same_rule {
            self.outside_k = out_k;
            self.missing_c = miss_c;
            self.hyp = Some(hyp.clone());
            changed
        } else {
            self.recount(hyp);
            true
        }
    }

    fn recount(&mut self, hyp: &Arc<UPSet>) {
        self.outside_k = Violations::count(hyp, &self.k);
        self.missing_c = match &self.c {
            Some(c) => Violations::count(c, hyp),
            None => Violations::Finite(0),
        };
        self.hyp = Some(hyp.clone());
    }
}

/// Runs `horizon` steps. Protocol violations abort with [`Error::Protocol`].
pub fn run(
    family: &Arc<Family>,
    k_index: usize,
    adversary: &mut dyn Adversary,
    learner: &mut dyn Learner,
    opts: &RunOptions,
) -> Result<Transcript> {
    if opts.horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let k = Arc::new(family.language_at(k_index)?);
    if !k.is_infinite() {
        return Err(Error::Domain(format!("K = language {k_index} is finite")));
    }
    let c = adversary.declared();
    let mut flags = Flags {
        k: k.clone(),
        c: c.target().cloned(),
        hyp: None,
        outside_k: Violations::Finite(0),
        missing_c: Violations::Finite(0),
    };
    let mut ws: Vec<u64> = Vec::with_capacity(opts.horizon as usize);
    let mut os: Vec<u64> = Vec::with_capacity(opts.horizon as usize);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut last_hyp: Option<Arc<UPSet>> = None;
    let mut steps = Vec::with_capacity(opts.horizon as usize);

    for t in 1..=opts.horizon {
        let history = History { ws: &ws, os: &os, last_hyp: last_hyp.as_ref() };
        let w = adversary.next(t, &history)?;
        if !k.member(w) {
            return Err(Error::Protocol { step: t, detail: format!("adversary string {w} is not in K") });
        }
        ws.push(w);
        seen.insert(w);
        let mv = learner.step(t, w, opts.want_indices)?;
        if seen.contains(&mv.output) {
            return Err(Error::Protocol {
                step: t,
                detail: format!("learner output {} was already given by the adversary", mv.output),
            });
        }
        os.push(mv.output);
        let hyp_changed = flags.update(&mv.hyp) && t > 1;
        steps.push(Step {
            t,
            w,
            o: mv.output,
            indices: mv.indices,
            hyp: opts.keep_hypotheses.then(|| mv.hyp.clone()),
            valid: k.member(mv.output),
            contained: flags.outside_k.holds(),
            full: flags.c.is_some().then(|| flags.missing_c.holds()),
            hyp_changed,
            pod: mv.pod,
        });
        last_hyp = Some(mv.hyp);
    }

    let mut warnings = Vec::new();
    if let (CDecl::Fixed(cset), Some(bound)) = (&c, opts.coverage_bound) {
        let emitted: HashSet<u64> = ws.iter().copied().collect();
        let missing = cset.iter().take_while(|&x| x <= bound).filter(|x| !emitted.contains(x)).count();
        if missing > 0 {
            warnings.push(format!("coverage: {missing} elements of C up to {bound} were not emitted by the horizon"));
        }
    }
    Ok(Transcript {
        family: family.name().to_string(),
        k_index,
        k,
        c,
        learner: learner.name(),
        adversary: adversary.name(),
        seed: opts.seed,
        steps,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub horizon: u64,
    pub last_invalid_t: Option<u64>,
    pub invalid_count: u64,
    pub last_not_contained_t: Option<u64>,
    pub full_count: Option<u64>,
    pub full_times: Option<Vec<u64>>,
    pub mind_changes: u64,
    pub stabilization_t: Option<u64>,
    /// Valid outputs, ascending.
    #[serde(skip)]
    pub outputs: Vec<u64>,
    pub warnings: Vec<String>,
}

/// Summarizes a transcript.
pub fn analyze(tr: &Transcript) -> Report {
    let horizon = tr.steps.len() as u64;
    let last_invalid_t = tr.steps.iter().rev().find(|s| !s.valid).map(|s| s.t);
    let invalid_count = tr.steps.iter().filter(|s| !s.valid).count() as u64;
    let last_not_contained_t = tr.steps.iter().rev().find(|s| !s.contained).map(|s| s.t);
    let declared = tr.steps.first().is_some_and(|s| s.full.is_some());
    let full_times: Option<Vec<u64>> =
        declared.then(|| tr.steps.iter().filter(|s| s.full == Some(true)).map(|s| s.t).collect());
    let mind_changes = tr.steps.iter().filter(|s| s.hyp_changed).count() as u64;
    let stabilization_t = if declared {
        let mut stab = None;
        for s in tr.steps.iter().rev() {
            if s.full == Some(true) && s.contained {
                stab = Some(s.t);
            } else {
                break;
            }
        }
        stab
    } else {
        None
    };
    let mut outputs: Vec<u64> = tr.steps.iter().filter(|s| s.valid).map(|s| s.o).collect();
    outputs.sort_unstable();
    Report {
        horizon,
        last_invalid_t,
        invalid_count,
        last_not_contained_t,
        full_count: full_times.as_ref().map(|v| v.len() as u64),
        full_times,
        mind_changes,
        stabilization_t,
        outputs,
        warnings: tr.warnings.clone(),
    }
}

impl Transcript {
    /// One JSON object per step: `t, w, o, indices, flags` (and pod statistics).
    pub fn write_jsonl(&self, out: &mut impl Write) -> Result<()> {
        for s in &self.steps {
            let full = match s.full {
                Some(b) => json!(b),
                None => json!("n/a"),
            };
            let mut line = json!({
                "t": s.t,
                "w": s.w,
                "o": s.o,
                "indices": s.indices,
                "flags": {"valid": s.valid, "contained": s.contained, "full": full},
            });
            if let Some(p) = &s.pod {
                line["pod"] = json!(p);
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Header describing the run.
    pub fn header(&self) -> serde_json::Value {
        json!({
            "family": self.family,
            "k_index": self.k_index,
            "k": self.k.as_ref(),
            "c": match &self.c {
                CDecl::Dynamic => json!("dynamic"),
                other => json!({"kind": other.label(), "set": other.target().map(|c| c.as_ref())}),
            },
            "learner": self.learner,
            "adversary": self.adversary,
            "seed": self.seed,
            "horizon": self.steps.len(),
        })
    }

    /// Valid outputs, ascending.
    pub fn valid_outputs(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.steps.iter().filter(|s| s.valid).map(|s| s.o).collect();
        v.sort_unstable();
        v
    }

    /// Recomputes every flag from stored hypotheses; `None` if they were not kept.
    pub fn recheck_flags(&self) -> Option<bool> {
        let c = self.c.target();
        for s in &self.steps {
            let hyp = s.hyp.as_ref()?;
            let contained = hyp.is_subset(&self.k);
            let full = c.map(|c| c.is_subset(hyp));
            if s.valid != self.k.member(s.o) || s.contained != contained || s.full != full {
                return Some(false);
            }
        }
        Some(true)
    }
}
