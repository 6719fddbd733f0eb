//! Density learner with an aggressive set, a priority list and a token.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::Result;
use crate::family::Family;
use crate::upset::UPSet;

use super::alg1::{pick, Alg1Core, Relation};
use super::{Learner, Move, SetTag, UnusedScan, Used};

/// Token used on strictly shrinking and strictly growing steps.
const TOKEN: u64 = 2;

/// Runs `I_t` from [`Alg1Core`] and keeps a priority list `S`.
///
/// When `I_t` changes strictly, the learner aggressively guesses a set `F`
/// (the previous `I` when shrinking, the new one when growing): with `w` the
/// largest string used so far and `w'` the first `F`-string above it, every
/// unused `F`-string up to `w'` and the next `N` strings of `F` join `S`, and
/// the smallest string of `S` is output. Otherwise the learner outputs the
/// smallest string of `S` when it precedes the next available string of `I`,
/// else that string.
pub struct WeakDensity {
    core: Alg1Core,
    used: Used,
    priority: BTreeSet<u64>,
    scan: UnusedScan,
    /// Unused strings of `F` up to the watermark are already in `S`.
    watermark: Option<(SetTag, u64)>,
}

impl WeakDensity {
    pub fn new(family: Arc<Family>) -> WeakDensity {
        WeakDensity {
            core: Alg1Core::new(family),
            used: Used::new(),
            priority: BTreeSet::new(),
            scan: UnusedScan::default(),
            watermark: None,
        }
    }

    pub fn priority(&self) -> &BTreeSet<u64> {
        &self.priority
    }

    fn aggressive(&mut self, f: &UPSet, tag: SetTag, token: u64) -> u64 {
        let w = self.used.max().expect("a string was used this step");
        let w_next = f.at_or_after(w + 1);
        let upto = w_next.unwrap_or(w);
        let from = match self.watermark {
            Some((m, pos)) if tag.within(m) => pos,
            _ => 0,
        };
        // Every string above `w` is unused, so only the gaps need checking.
        let gaps: Vec<u64> = self.used.unused_from(from).take_while(|&x| x <= w).filter(|&x| f.member(x)).collect();
        self.priority.extend(gaps);
        if let Some(wn) = w_next {
            self.priority.insert(wn);
            self.priority.extend(f.iter_from(wn + 1).take(token as usize));
        }
        self.watermark = Some((tag, upto + 1));
        // A finite `F` can be exhausted; fall back to the smallest unused natural.
        self.priority.pop_first().unwrap_or_else(|| self.used.low_water())
    }

    /// `S` first if it precedes the next available string of `I`.
    fn prefer_priority(&mut self, i: &UPSet, tag: SetTag) -> u64 {
        let next = pick(&mut self.scan, i, tag, &self.used);
        match self.priority.first() {
            Some(&s) if s < next => {
                self.priority.remove(&s);
                s
            }
            _ => next,
        }
    }
}

impl Learner for WeakDensity {
    fn name(&self) -> String {
        "weak_density".into()
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        self.used.insert(w);
        self.priority.remove(&w);
        let tr = self.core.advance(w, t)?;
        let cur = self.core.current().clone();
        let tag = self.core.tag();
        let output = match tr.relation {
            Relation::First | Relation::Same => self.prefer_priority(&cur, tag),
            Relation::Subset => self.aggressive(&tr.prev, tr.prev_tag, TOKEN),
            Relation::Superset => self.aggressive(&cur, tag, TOKEN),
            // No common ancestor below both chains: no fallback, and the
            // comparison is against the previous `I`.
            Relation::Incomparable => self.prefer_priority(&tr.prev, tr.prev_tag),
        };
        self.used.insert(output);
        self.priority.remove(&output);
        Ok(Move { output, hyp: cur, indices: want_indices.then(|| self.core.indices()), pod: None })
    }
}
