//! The descending-chain identified intersection `I_t` and the learner that
//! outputs from it.

use std::sync::Arc;

use crate::chain::{Chain, PrefixView};
use crate::error::Result;
use crate::family::Family;
use crate::upset::UPSet;

use super::{Learner, Move, SetTag, UnusedScan, Used};

/// How `I_t` relates to `I_{t-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    First,
    Same,
    /// Strictly smaller than before.
    Subset,
    /// Strictly larger than before.
    Superset,
    Incomparable,
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub relation: Relation,
    pub prev: Arc<UPSet>,
    pub prev_tag: SetTag,
    pub prev_depth: usize,
    pub depth: usize,
}

/// Maintains `I_t` over the first `t` consistent languages.
///
/// Same chain up to depth `k + 1`: descend to `I^{k+1}` when it is infinite,
/// else stay. Changed chain: jump to `I^{k*}`, the deepest prefix
/// intersection that survives the change and is infinite, or to `I¹` of the
/// new chain when there is none. Past the end of the list the chain is padded
/// with its last intersection.
pub struct Alg1Core {
    chain: Chain,
    view: PrefixView,
    depth: usize,
    tag: SetTag,
    started: bool,
}

impl Alg1Core {
    pub fn new(family: Arc<Family>) -> Alg1Core {
        let chain = Chain::new(family);
        let view = PrefixView::new(&chain);
        Alg1Core { chain, view, depth: 0, tag: SetTag { epoch: 0, t: 0 }, started: false }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn current(&self) -> &Arc<UPSet> {
        self.view.set()
    }

    pub fn tag(&self) -> SetTag {
        self.tag
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn indices(&self) -> Vec<usize> {
        self.chain.indices(self.depth)
    }

    pub fn advance(&mut self, w: u64, t: u64) -> Result<Transition> {
        let change = self.chain.observe(w, t as usize)?;
        let prev = self.view.set().clone();
        let prev_tag = self.tag;
        let k = self.depth;
        let live = self.chain.len();

        if !self.started {
            self.started = true;
            self.depth = live.min(1);
            self.view.sync(&self.chain, self.depth);
            self.tag = SetTag { epoch: 0, t };
            return Ok(Transition { relation: Relation::First, prev, prev_tag, prev_depth: 0, depth: self.depth });
        }

        let removed_at = change.first_removed.unwrap_or(usize::MAX);
        // `None`: chains agree up to depth k + 1. `Some(limit)`: they agree
        // at most up to `limit`.
        let disagreement = if removed_at > k + 1 {
            let agree = k < change.len_before
                || live <= k
                || prev.is_subset(&self.chain.language_at(k + 1).expect("position within list"));
            if agree {
                None
            } else {
                Some(k)
            }
        } else {
            Some(removed_at - 1)
        };

        let (depth, relation) = match disagreement {
            None => {
                let d = if self.chain.is_infinite_at(k + 1) { k + 1 } else { k };
                let d = d.min(live);
                self.view.sync(&self.chain, d);
                let rel = if d > k && **self.view.set() != *prev { Relation::Subset } else { Relation::Same };
                (d, rel)
            }
            Some(limit) => {
                let kstar = limit.min(k + 1).min(self.chain.infinite_depth());
                if kstar >= 1 {
                    self.view.sync(&self.chain, kstar);
                    let rel = if **self.view.set() == *prev { Relation::Same } else { Relation::Superset };
                    (kstar, rel)
                } else {
                    let d = live.min(1);
                    self.view.sync(&self.chain, d);
                    let cur = self.view.set();
                    let rel = if **cur == *prev {
                        Relation::Same
                    } else if cur.is_subset(&prev) {
                        Relation::Subset
                    } else if prev.is_subset(cur) {
                        Relation::Superset
                    } else {
                        Relation::Incomparable
                    };
                    (d, rel)
                }
            }
        };
        self.depth = depth;
        let epoch = match relation {
            Relation::Superset | Relation::Incomparable => self.tag.epoch + 1,
            _ => self.tag.epoch,
        };
        self.tag = SetTag { epoch, t };
        Ok(Transition { relation, prev, prev_tag, prev_depth: k, depth })
    }
}

/// Outputs the smallest unused string of `I_t`.
pub struct Algorithm1 {
    core: Alg1Core,
    used: Used,
    scan: UnusedScan,
}

impl Algorithm1 {
    pub fn new(family: Arc<Family>) -> Algorithm1 {
        Algorithm1 { core: Alg1Core::new(family), used: Used::new(), scan: UnusedScan::default() }
    }

    pub fn core(&self) -> &Alg1Core {
        &self.core
    }
}

/// Smallest unused string of `s`, falling back to the smallest unused natural
/// when `s` is exhausted.
pub(super) fn pick(scan: &mut UnusedScan, s: &UPSet, tag: SetTag, used: &Used) -> u64 {
    scan.find(s, tag, used).unwrap_or_else(|| used.low_water())
}

impl Learner for Algorithm1 {
    fn name(&self) -> String {
        "algorithm1".into()
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        self.used.insert(w);
        self.core.advance(w, t)?;
        let hyp = self.core.current().clone();
        let output = pick(&mut self.scan, &hyp, self.core.tag(), &self.used);
        self.used.insert(output);
        Ok(Move { output, hyp, indices: want_indices.then(|| self.core.indices()), pod: None })
    }
}
