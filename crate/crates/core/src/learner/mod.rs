//! Learners: each step receives the adversary's string and returns a
//! hypothesis `M_t` (with the family indices it intersects) and an output.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::upset::UPSet;

mod adapter;
mod alg1;
mod gcd;
mod naive;
mod pod;
mod weak;

pub use adapter::{ElementToSemiindex, SemiindexToElement};
pub use alg1::{Alg1Core, Algorithm1, Relation, Transition};
pub use gcd::GcdLearner;
pub use naive::{ChainLearner, ChainMode};
pub use pod::{PodLearner, Schedule};
pub use weak::WeakDensity;

/// Per-step bookkeeping of the pod learner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PodStats {
    pub size: u64,
    pub min: u64,
    pub max: u64,
    /// The adversary's string had already been placed in a pod.
    pub w_pooled: bool,
}

#[derive(Clone, Debug)]
pub struct Move {
    pub output: u64,
    pub hyp: Arc<UPSet>,
    /// Family indices whose intersection is `hyp`; `None` unless requested.
    pub indices: Option<Vec<usize>>,
    pub pod: Option<PodStats>,
}

pub trait Learner: Send {
    fn name(&self) -> String;

    /// Consumes the adversary string of step `t` (1-based) and answers.
    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move>;
}

/// Identity of a hypothesis set for scan memos. Sets that share an epoch
/// shrink as `t` grows, so a scan position valid for an older tag stays valid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetTag {
    pub epoch: u64,
    pub t: u64,
}

impl SetTag {
    /// Whether the set tagged `self` is contained in the set tagged `older`.
    pub fn within(self, older: SetTag) -> bool {
        self.epoch == older.epoch && self.t >= older.t
    }
}

/// Strings used so far (adversary inputs and own outputs), stored as the
/// gaps below the largest used string.
#[derive(Clone, Debug, Default)]
pub struct Used {
    max: Option<u64>,
    gaps: BTreeSet<u64>,
}

impl Used {
    pub fn new() -> Used {
        Used::default()
    }

    /// Records `x`; false if it was already used.
    pub fn insert(&mut self, x: u64) -> bool {
        match self.max {
            None => {
                self.gaps.extend(0..x);
                self.max = Some(x);
                true
            }
            Some(m) if x > m => {
                self.gaps.extend(m + 1..x);
                self.max = Some(x);
                true
            }
            Some(_) => self.gaps.remove(&x),
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        self.max.is_some_and(|m| x <= m && !self.gaps.contains(&x))
    }

    pub fn max(&self) -> Option<u64> {
        self.max
    }

    /// Smallest unused natural.
    pub fn low_water(&self) -> u64 {
        self.gaps.first().copied().unwrap_or(self.max.map_or(0, |m| m + 1))
    }

    /// Unused naturals `≥ lo`, ascending.
    pub fn unused_from(&self, lo: u64) -> impl Iterator<Item = u64> + '_ {
        let above = self.max.map_or(0, |m| m + 1).max(lo);
        self.gaps.range(lo..).copied().chain(above..)
    }

    /// Smallest unused member of `s` that is `≥ from`. Walks the members of
    /// `s` and the gaps in lockstep; the first walk to find a hit is exact.
    pub fn smallest_unused_in(&self, s: &UPSet, from: u64) -> Option<u64> {
        let from = from.max(self.low_water());
        let tail = self.max.map_or(0, |m| m + 1).max(from);
        let mut members = s.iter_from(from);
        let mut gaps = self.gaps.range(from..);
        loop {
            match members.next() {
                None => return None,
                Some(x) if !self.contains(x) => return Some(x),
                Some(_) => {}
            }
            match gaps.next() {
                Some(&g) if s.member(g) => return Some(g),
                Some(_) => {}
                // Every gap was checked: the answer lies at or above the tail.
                None => return s.at_or_after(tail),
            }
        }
    }
}

/// Memoized "smallest unused member" scan over a tagged set.
#[derive(Clone, Debug, Default)]
pub struct UnusedScan {
    memo: Option<(SetTag, u64)>,
}

impl UnusedScan {
    pub fn find(&mut self, s: &UPSet, tag: SetTag, used: &Used) -> Option<u64> {
        let from = match self.memo {
            Some((m, pos)) if tag.within(m) => pos,
            _ => 0,
        };
        let x = used.smallest_unused_in(s, from)?;
        self.memo = Some((tag, x));
        Some(x)
    }
}

/// Wrappers applied around a base learner, innermost first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wrap {
    /// Element learner to hypothesis learner.
    Forward,
    /// Hypothesis learner to element learner.
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    NaiveChain,
    Algorithm1,
    WeakDensity,
    Pod,
    Identifier,
    Gcd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wrap: Vec<Wrap>,
}

impl LearnerSpec {
    pub fn new(kind: LearnerKind) -> LearnerSpec {
        LearnerSpec { kind, schedule: None, wrap: Vec::new() }
    }

    pub fn pod(schedule: Schedule) -> LearnerSpec {
        LearnerSpec { kind: LearnerKind::Pod, schedule: Some(schedule), wrap: Vec::new() }
    }

    pub fn wrapped(mut self, w: Wrap) -> LearnerSpec {
        self.wrap.push(w);
        self
    }

    pub fn build(&self, family: &Arc<Family>) -> Result<Box<dyn Learner>> {
        if self.schedule.is_some() && self.kind != LearnerKind::Pod {
            return Err(Error::Config("schedule applies only to the pod learner".into()));
        }
        let mut l: Box<dyn Learner> = match self.kind {
            LearnerKind::NaiveChain => Box::new(ChainLearner::new(family.clone(), ChainMode::Naive)),
            LearnerKind::Identifier => {
                Box::new(ChainLearner::new(family.clone(), ChainMode::Identifier))
            }
            LearnerKind::Algorithm1 => Box::new(Algorithm1::new(family.clone())),
            LearnerKind::WeakDensity => Box::new(WeakDensity::new(family.clone())),
            LearnerKind::Pod => {
                Box::new(PodLearner::new(family.clone(), self.schedule.unwrap_or(Schedule::Linear))?)
            }
            LearnerKind::Gcd => Box::new(GcdLearner::new(family.clone())?),
        };
        for w in &self.wrap {
            l = match w {
                Wrap::Forward => Box::new(ElementToSemiindex::new(l, family.clone())),
                Wrap::Reverse => Box::new(SemiindexToElement::new(l)),
            };
        }
        Ok(l)
    }
}
