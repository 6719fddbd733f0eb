//! Learners that take the longest infinite prefix intersection of the
//! materialized consistent list.

use std::sync::Arc;

use crate::chain::{Chain, PrefixView};
use crate::error::Result;
use crate::family::Family;

use super::alg1::pick;
use super::{Learner, Move, SetTag, UnusedScan, Used};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMode {
    /// Generation in the limit from the first `t` consistent languages.
    Naive,
    /// Identification: the same hypothesis, read as a guess of `K`.
    Identifier,
}

/// Over the first `t` consistent languages: the longest prefix whose
/// intersection is infinite, or the whole list when every prefix is (or
/// when none is).
pub struct ChainLearner {
    mode: ChainMode,
    chain: Chain,
    view: PrefixView,
    depth: usize,
    tag: SetTag,
    used: Used,
    scan: UnusedScan,
}

impl ChainLearner {
    pub fn new(family: Arc<Family>, mode: ChainMode) -> ChainLearner {
        let chain = Chain::new(family);
        let view = PrefixView::new(&chain);
        ChainLearner {
            mode,
            chain,
            view,
            depth: 0,
            tag: SetTag { epoch: 0, t: 0 },
            used: Used::new(),
            scan: UnusedScan::default(),
        }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }
}

impl Learner for ChainLearner {
    fn name(&self) -> String {
        match self.mode {
            ChainMode::Naive => "naive_chain".into(),
            ChainMode::Identifier => "identifier".into(),
        }
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        self.used.insert(w);
        let change = self.chain.observe(w, t as usize)?;
        // With a finite first language every prefix is finite: take all of them.
        let depth = match self.chain.infinite_depth() {
            0 => self.chain.len(),
            d => d,
        };
        // Without removals inside the old prefix and without shrinking, the
        // new hypothesis can only be smaller.
        let shrinks = change.first_removed.is_none_or(|r| r > self.depth) && depth >= self.depth;
        let epoch = if shrinks { self.tag.epoch } else { self.tag.epoch + 1 };
        self.tag = SetTag { epoch, t };
        self.depth = depth;
        self.view.sync(&self.chain, depth);
        let hyp = self.view.set().clone();
        let output = pick(&mut self.scan, &hyp, self.tag, &self.used);
        self.used.insert(output);
        Ok(Move { output, hyp, indices: want_indices.then(|| self.chain.indices(depth)), pod: None })
    }
}
