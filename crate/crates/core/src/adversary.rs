//! Enumeration strategies for the adversary.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::learner::{SetTag, UnusedScan, Used};
use crate::upset::{Rational, UPSet};

/// What the adversary sees before choosing `w_t`: everything so far.
#[derive(Clone, Copy, Debug)]
pub struct History<'a> {
    pub ws: &'a [u64],
    pub os: &'a [u64],
    pub last_hyp: Option<&'a Arc<UPSet>>,
}

/// The subset `C ⊆ K` an adversary enumerates.
#[derive(Clone, Debug)]
pub enum CDecl {
    /// Fixed in advance.
    Fixed(Arc<UPSet>),
    /// Not chosen in advance but contained in the given set.
    Implicit(Arc<UPSet>),
    /// Defined only by the run.
    Dynamic,
}

impl CDecl {
    /// The set the fullness flag is checked against.
    pub fn target(&self) -> Option<&Arc<UPSet>> {
        match self {
            CDecl::Fixed(c) | CDecl::Implicit(c) => Some(c),
            CDecl::Dynamic => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CDecl::Fixed(_) => "fixed",
            CDecl::Implicit(_) => "implicit",
            CDecl::Dynamic => "dynamic",
        }
    }
}

pub trait Adversary: Send {
    fn name(&self) -> String;
    fn declared(&self) -> CDecl;
    /// The string for step `t` (1-based).
    fn next(&mut self, t: u64, history: &History<'_>) -> Result<u64>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Increasing,
    BlockShuffle { block_len: u64 },
}

/// Enumerates a fixed infinite `c`, increasing or shuffled within
/// consecutive blocks. Element `nth(c, k)` is emitted by step
/// `block_len·(⌊k/block_len⌋ + 1)`.
pub struct FixedEnumerator {
    c: Arc<UPSet>,
    policy: Policy,
    rng: ChaCha8Rng,
    next: u64,
    block: Vec<u64>,
}

impl FixedEnumerator {
    pub fn new(c: UPSet, policy: Policy, seed: u64) -> Result<FixedEnumerator> {
        if !c.is_infinite() {
            return Err(Error::Domain("enumerated set must be infinite".into()));
        }
        if let Policy::BlockShuffle { block_len: 0 } = policy {
            return Err(Error::Config("block_len must be positive".into()));
        }
        let first = c.nth(0)?;
        Ok(FixedEnumerator {
            c: Arc::new(c),
            policy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next: first,
            block: Vec::new(),
        })
    }

    fn take_next(&mut self) -> u64 {
        let x = self.next;
        self.next = self.c.at_or_after(x + 1).expect("infinite set");
        x
    }
}

impl Adversary for FixedEnumerator {
    fn name(&self) -> String {
        match self.policy {
            Policy::Increasing => "fixed(increasing)".into(),
            Policy::BlockShuffle { block_len } => format!("fixed(block_shuffle {block_len})"),
        }
    }

    fn declared(&self) -> CDecl {
        CDecl::Fixed(self.c.clone())
    }

    fn next(&mut self, _t: u64, _h: &History<'_>) -> Result<u64> {
        match self.policy {
            Policy::Increasing => Ok(self.take_next()),
            Policy::BlockShuffle { block_len } => {
                if self.block.is_empty() {
                    let mut b: Vec<u64> = (0..block_len).map(|_| self.take_next()).collect();
                    b.shuffle(&mut self.rng);
                    b.reverse();
                    self.block = b;
                }
                Ok(self.block.pop().expect("block refilled"))
            }
        }
    }
}

/// Caps the learner's density at one half: at steps `t = 2ⁿ` it re-emits
/// the smallest earlier learner output it has not emitted yet; at every
/// other step, and when there is none, the smallest string of `K` used by
/// neither side.
pub struct Recycler {
    k: Arc<UPSet>,
    used: Used,
    pending: BTreeSet<u64>,
    scan: UnusedScan,
    outputs_read: usize,
}

impl Recycler {
    pub fn new(k: Arc<UPSet>) -> Result<Recycler> {
        if !k.is_infinite() {
            return Err(Error::Domain("recycler needs an infinite K".into()));
        }
        Ok(Recycler { k, used: Used::new(), pending: BTreeSet::new(), scan: UnusedScan::default(), outputs_read: 0 })
    }
}

impl Adversary for Recycler {
    fn name(&self) -> String {
        "recycler".into()
    }

    fn declared(&self) -> CDecl {
        CDecl::Implicit(self.k.clone())
    }

    fn next(&mut self, t: u64, h: &History<'_>) -> Result<u64> {
        for &o in &h.os[self.outputs_read..] {
            self.used.insert(o);
            if self.k.member(o) {
                self.pending.insert(o);
            }
        }
        self.outputs_read = h.os.len();
        let recycled = if t.is_power_of_two() { self.pending.pop_first() } else { None };
        let w = match recycled {
            Some(o) => o,
            None => {
                let tag = SetTag { epoch: 0, t };
                self.scan.find(&self.k, tag, &self.used).expect("infinite K has unused strings")
            }
        };
        self.used.insert(w);
        Ok(w)
    }
}

/// `C = {nth(k, m) : m mod b < a}` for `α = a/b`; its density inside `k` is exactly `α`.
pub fn density_subset(k: &UPSet, alpha: Rational) -> Result<UPSet> {
    let (a, b) = (*alpha.numer(), *alpha.denom());
    if a <= 0 || a > b {
        return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !k.is_infinite() {
        return Err(Error::Domain("density subset needs an infinite set".into()));
    }
    let (a, b) = (a as u64, b as u64);
    let h = k.threshold();
    let p = k.period();
    let r = k.residues().len() as u64;
    // Ranks advance by r per period, so the pattern repeats after b/gcd(b, r) periods.
    let period = p * (b / num_integer::gcd(b, r));
    if period > crate::upset::MAX_PERIOD {
        return Err(Error::Unsupported(format!("density subset period {period} is too large")));
    }
    let in_c = |x: u64| k.member(x) && k.rank(x) % b < a;
    let prefix: Vec<u64> = (0..h).filter(|&x| in_c(x)).collect();
    let residues: Vec<u64> = (h..h + period).filter(|&x| in_c(x)).map(|x| x % period).collect();
    let mut residues = residues;
    residues.sort_unstable();
    UPSet::from_description(h, period, &residues, &prefix)
}

/// Pretends the true language is a smaller one `L'` (`L' ∩ c ⊊ L ∩ c`,
/// `|L' ∩ c| = ∞`) and enumerates `c ∩ L'`. Once the learner's hypothesis
/// has stayed inside `L'` for `patience` consecutive steps, it switches to
/// the first family language `L''` with the same properties that is
/// consistent with every emission and contains an unemitted string of
/// `(c ∩ L) ∖ L'`, and emits that string.
pub struct ChainTeaser {
    family: Arc<Family>,
    target: Arc<UPSet>,
    c: Arc<UPSet>,
    patience: u64,
    pretended: usize,
    pretended_set: Arc<UPSet>,
    stream: Arc<UPSet>,
    phase: u64,
    committed_for: u64,
    emitted: Used,
    seen: crate::family::Seen,
    scan: UnusedScan,
    switches: Vec<(u64, usize)>,
}

impl ChainTeaser {
    pub fn new(family: Arc<Family>, target_idx: usize, c: UPSet, patience: u64) -> Result<ChainTeaser> {
        let target = Arc::new(family.language_at(target_idx)?);
        let c = Arc::new(c);
        if !target.intersect(&c).is_infinite() {
            return Err(Error::Domain("target has a finite trace on c".into()));
        }
        let seen = family.observe();
        let mut t = ChainTeaser {
            family,
            target,
            c,
            patience: patience.max(1),
            pretended: 0,
            pretended_set: Arc::new(UPSet::empty()),
            stream: Arc::new(UPSet::empty()),
            phase: 0,
            committed_for: 0,
            emitted: Used::new(),
            seen,
            scan: UnusedScan::default(),
            switches: Vec::new(),
        };
        let (idx, set) = t
            .find_pretender(None, 0)
            .ok_or_else(|| Error::TeaserExhausted { step: 0, detail: "no language lies strictly below the target on c".into() })?;
        t.pretend(idx, set);
        Ok(t)
    }

    /// Steps at which the pretended language changed, with the new index.
    pub fn switches(&self) -> &[(u64, usize)] {
        &self.switches
    }

    pub fn pretended(&self) -> usize {
        self.pretended
    }

    fn search_window(&self, t: u64) -> usize {
        self.family.explicit().len() + 4 * t as usize + 256
    }

    /// First admissible pretended language. With `away_from = Some(L')` it
    /// must also contain an unemitted string of `(c ∩ L) ∖ L'`, returned too.
    fn candidates(&self, away_from: Option<&UPSet>, t: u64) -> Option<(usize, UPSet, Option<u64>)> {
        let trace = self.target.intersect(&self.c);
        let limit = self.search_window(t);
        for idx in 0..limit {
            if Some(idx) == away_from.map(|_| self.pretended) {
                continue;
            }
            let Ok(l) = self.family.language_at(idx) else {
                if self.family.locate(idx).is_err() {
                    break;
                }
                continue;
            };
            if !self.family.is_consistent(idx, &self.seen) {
                continue;
            }
            let lt = l.intersect(&self.c);
            if !lt.is_infinite() || !lt.is_subset(&trace) || trace.is_subset(&lt) {
                continue;
            }
            match away_from {
                None => return Some((idx, l, None)),
                Some(prev) => {
                    let fresh = lt.difference(prev);
                    if let Some(x) = self.emitted.smallest_unused_in(&fresh, 0) {
                        return Some((idx, l, Some(x)));
                    }
                }
            }
        }
        None
    }

    fn find_pretender(&self, away_from: Option<&UPSet>, t: u64) -> Option<(usize, UPSet)> {
        self.candidates(away_from, t).map(|(i, l, _)| (i, l))
    }

    fn pretend(&mut self, idx: usize, set: UPSet) {
        self.stream = Arc::new(self.c.intersect(&set));
        self.pretended = idx;
        self.pretended_set = Arc::new(set);
    }

    fn emit(&mut self, x: u64) -> u64 {
        self.emitted.insert(x);
        self.seen.insert(&self.family, x);
        x
    }
}

impl Adversary for ChainTeaser {
    fn name(&self) -> String {
        format!("chain_teaser(patience {})", self.patience)
    }

    fn declared(&self) -> CDecl {
        CDecl::Implicit(Arc::new(self.c.intersect(&self.target)))
    }

    fn next(&mut self, t: u64, h: &History<'_>) -> Result<u64> {
        if let Some(hyp) = h.last_hyp {
            if hyp.is_subset(&self.pretended_set) {
                self.committed_for += 1;
            } else {
                self.committed_for = 0;
            }
        }
        if self.committed_for >= self.patience {
            let prev = self.pretended_set.clone();
            let (idx, set, x) = self.candidates(Some(&prev), t).ok_or_else(|| Error::TeaserExhausted {
                step: t,
                detail: format!("no language below the target separates from index {}", self.pretended),
            })?;
            self.pretend(idx, set);
            self.phase += 1;
            self.committed_for = 0;
            self.switches.push((t, idx));
            return Ok(self.emit(x.expect("switch carries a separating string")));
        }
        let tag = SetTag { epoch: self.phase, t };
        let x = self.scan.find(&self.stream, tag, &self.emitted).expect("pretended trace is infinite");
        Ok(self.emit(x))
    }
}

/// Serializable adversary description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversarySpec {
    Fixed {
        c: UPSet,
        #[serde(default = "increasing")]
        policy: Policy,
    },
    Density {
        alpha: String,
        #[serde(default = "increasing")]
        policy: Policy,
    },
    Recycler,
    Teaser {
        c: UPSet,
        #[serde(default = "default_patience")]
        patience: u64,
    },
}

fn increasing() -> Policy {
    Policy::Increasing
}

fn default_patience() -> u64 {
    10
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Config(format!("expected a rational like 1/2, got `{text}`"));
    match text.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(text.trim().parse().map_err(|_| bad())?)),
    }
}

impl AdversarySpec {
    pub fn build(&self, family: &Arc<Family>, k_idx: usize, seed: u64) -> Result<Box<dyn Adversary>> {
        let k = family.language_at(k_idx)?;
        Ok(match self {
            AdversarySpec::Fixed { c, policy } => Box::new(FixedEnumerator::new(c.clone(), *policy, seed)?),
            AdversarySpec::Density { alpha, policy } => {
                let c = density_subset(&k, parse_rational(alpha)?)?;
                Box::new(FixedEnumerator::new(c, *policy, seed)?)
            }
            AdversarySpec::Recycler => Box::new(Recycler::new(Arc::new(k))?),
            AdversarySpec::Teaser { c, patience } => {
                Box::new(ChainTeaser::new(family.clone(), k_idx, c.clone(), *patience)?)
            }
        })
    }
}
