//! Pod learner: every step reserves a pod of `s_t` fresh strings from a
//! source set and outputs the smallest unused pooled string.
//!
//! Pods grow without bound (with `s_t = t` the pool holds `t²/2` strings), so
//! the pool and the free space are kept symbolically: a claimed piece is an
//! interval intersected with a periodic mask, and the free space is a set of
//! disjoint intervals with masks plus a set of loose points.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::upset::UPSet;

use super::alg1::{Alg1Core, Relation};
use super::{Learner, Move, PodStats, SetTag};

/// Pod size schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    Constant(u64),
    /// `s_t = t`, raised to 2 at `t = 1`.
    Linear,
}

impl Schedule {
    pub fn size(self, t: u64) -> u64 {
        match self {
            Schedule::Constant(s) => s,
            Schedule::Linear => t.max(2),
        }
    }
}

/// Leftover free strings below this count are stored as loose points.
const POINT_LIMIT: u64 = 64;

#[derive(Clone, Debug)]
struct Region {
    /// Exclusive end; `u64::MAX` for the unbounded frontier.
    hi: u64,
    mask: Arc<UPSet>,
}

/// `mask ∩ [lo, hi]`, or every string of `[lo, hi]` when `mask` is `None`.
#[derive(Clone, Debug)]
struct Piece {
    lo: u64,
    hi: u64,
    mask: Option<Arc<UPSet>>,
}

impl Piece {
    fn next_from(&self, x: u64) -> Option<u64> {
        let v = match &self.mask {
            None => x.max(self.lo),
            Some(m) => m.at_or_after(x.max(self.lo))?,
        };
        (v <= self.hi).then_some(v)
    }
}

/// Free space: strings not pooled and not seen before being pooled. Seen
/// strings inside regions are excluded lazily through `seen`.
#[derive(Debug)]
struct FreeSpace {
    regions: BTreeMap<u64, Region>,
    points: BTreeSet<u64>,
}

impl FreeSpace {
    fn new() -> FreeSpace {
        let mut regions = BTreeMap::new();
        regions.insert(0, Region { hi: u64::MAX, mask: Arc::new(UPSet::naturals()) });
        FreeSpace { regions, points: BTreeSet::new() }
    }

    fn region_at(&self, x: u64) -> Option<(u64, &Region)> {
        self.regions.range(..=x).next_back().filter(|(_, r)| r.hi > x).map(|(&lo, r)| (lo, r))
    }

    /// Whether `x` is free, assuming it has not been seen.
    fn contains_unseen(&self, x: u64) -> bool {
        self.points.contains(&x) || self.region_at(x).is_some_and(|(_, r)| r.mask.member(x))
    }

    /// Next unit at or after `pos`: a loose point or the region covering or following `pos`.
    fn next_unit(&self, pos: u64) -> Option<Unit> {
        let point = self.points.range(pos..).next().copied();
        let region = match self.region_at(pos) {
            Some((lo, _)) => Some(lo),
            None => self.regions.range(pos..).next().map(|(&lo, _)| lo),
        };
        match (point, region) {
            (None, None) => None,
            (Some(p), None) => Some(Unit::Point(p)),
            (None, Some(r)) => Some(Unit::Region(r)),
            (Some(p), Some(r)) => Some(if p < r.max(pos) { Unit::Point(p) } else { Unit::Region(r) }),
        }
    }
}

enum Unit {
    Point(u64),
    Region(u64),
}

/// What one claim reserved.
struct Claim {
    pieces: Vec<Piece>,
    size: u64,
    min: u64,
    max: u64,
}

/// Pod learner over `I_t` from [`Alg1Core`]. The source of each pod is `I_t`
/// on unchanged and growing steps and `I_{t-1}` on shrinking steps; when the
/// new and old `I` are incomparable and have no common ancestor, `I_t`.
pub struct PodLearner {
    core: Alg1Core,
    schedule: Schedule,
    free: FreeSpace,
    seen: BTreeSet<u64>,
    pieces: Vec<Piece>,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
    /// No free string of the memoized source lies below the position.
    claim_memo: Option<(SetTag, u64)>,
    record: Option<Record>,
}

/// Exact pods for small runs.
#[derive(Debug, Default)]
struct Record {
    pods: Vec<Vec<Piece>>,
    seen_at: HashMap<u64, usize>,
}

impl PodLearner {
    pub fn new(family: Arc<Family>, schedule: Schedule) -> Result<PodLearner> {
        if let Schedule::Constant(s) = schedule {
            if s < 2 {
                return Err(Error::Config(format!("pod size must be at least 2, got {s}")));
            }
        }
        Ok(PodLearner {
            core: Alg1Core::new(family),
            schedule,
            free: FreeSpace::new(),
            seen: BTreeSet::new(),
            pieces: Vec::new(),
            heap: BinaryHeap::new(),
            claim_memo: None,
            record: None,
        })
    }

    /// Keeps every pod so [`PodLearner::materialize_pods`] can list them.
    pub fn recording(mut self) -> PodLearner {
        self.record = Some(Record::default());
        self
    }

    /// The strings of every pod so far, in creation order. Requires [`PodLearner::recording`].
    pub fn materialize_pods(&self) -> Option<Vec<Vec<u64>>> {
        let rec = self.record.as_ref()?;
        Some(
            rec.pods
                .iter()
                .enumerate()
                .map(|(i, pieces)| {
                    let mut v: Vec<u64> = Vec::new();
                    for p in pieces {
                        let mut x = p.lo;
                        while let Some(y) = p.next_from(x) {
                            // Strings seen before this pod was made were never claimed.
                            if rec.seen_at.get(&y).is_none_or(|&s| s > i) {
                                v.push(y);
                            }
                            if y == u64::MAX {
                                break;
                            }
                            x = y + 1;
                        }
                    }
                    v.sort_unstable();
                    v
                })
                .collect(),
        )
    }

    /// `s` smallest free strings of `source`, in value order.
    fn claim(&mut self, source: &Arc<UPSet>, tag: SetTag, s: u64) -> Result<Claim> {
        let mut pos = match self.claim_memo {
            Some((m, p)) if tag.within(m) => p,
            _ => 0,
        };
        let mut need = s;
        let mut out = Claim { pieces: Vec::new(), size: 0, min: u64::MAX, max: 0 };
        while need > 0 {
            let unit = self.free.next_unit(pos).ok_or_else(|| {
                Error::Unsupported("pod source has fewer free strings than the pod size".into())
            })?;
            match unit {
                Unit::Point(x) => {
                    if source.member(x) {
                        self.free.points.remove(&x);
                        out.pieces.push(Piece { lo: x, hi: x, mask: None });
                        out.size += 1;
                        out.min = out.min.min(x);
                        out.max = out.max.max(x);
                        need -= 1;
                    }
                    pos = x + 1;
                }
                Unit::Region(lo) => {
                    let region = self.free.regions.remove(&lo).expect("region present");
                    let start = lo.max(pos);
                    let avail = Arc::new(region.mask.intersect(source));
                    let (taken, end) = self.claim_region(&avail, start, region.hi, need);
                    if start > lo {
                        self.free.regions.insert(lo, Region { hi: start, mask: region.mask.clone() });
                    }
                    self.restore(region.mask.difference(source), start, end);
                    if end < region.hi {
                        self.free.regions.insert(end, Region { hi: region.hi, mask: region.mask.clone() });
                    }
                    if let Some((first, last)) = taken.bounds {
                        out.pieces.push(Piece { lo: first, hi: last, mask: Some(avail) });
                        out.size += taken.count;
                        out.min = out.min.min(first);
                        out.max = out.max.max(last);
                        need -= taken.count;
                    }
                    if end == u64::MAX {
                        break;
                    }
                    pos = end;
                }
            }
        }
        if need > 0 {
            return Err(Error::Unsupported("pod source exhausted".into()));
        }
        self.claim_memo = Some((tag, pos));
        Ok(out)
    }

    /// Claims up to `need` unseen strings of `avail` from `[start, hi)`.
    /// Returns what was taken and the exclusive end of the consumed range.
    fn claim_region(&self, avail: &UPSet, start: u64, hi: u64, need: u64) -> (Taken, u64) {
        let base = avail.rank(start);
        let total = if hi == u64::MAX && avail.is_infinite() {
            u64::MAX
        } else {
            avail.count_between(start, hi)
        };
        if total == 0 {
            return (Taken { bounds: None, count: 0 }, hi);
        }
        let first = avail.at_or_after(start).expect("counted member");
        // The `need`-th unseen member: grow the index by the seen members it skips.
        let mut skipped = 0u64;
        while need - 1 + skipped < total {
            let x = avail.nth(base + need - 1 + skipped).expect("counted member");
            let k = self.seen_between(avail, start, x);
            if k == skipped {
                return (Taken { bounds: Some((first, x)), count: need }, x + 1);
            }
            skipped = k;
        }
        // Fewer than `need` unseen members: take the rest of the region.
        let last = avail.nth(base + total - 1).expect("counted member");
        let count = total - self.seen_between(avail, start, last);
        let bounds = (count > 0).then_some((first, last));
        (Taken { bounds, count }, hi)
    }

    fn seen_between(&self, t: &UPSet, lo: u64, hi: u64) -> u64 {
        self.seen.range(lo..=hi).filter(|&&x| t.member(x)).count() as u64
    }

    /// Returns `leftover ∩ [lo, hi)` to the free space.
    fn restore(&mut self, leftover: UPSet, lo: u64, hi: u64) {
        let count = if hi == u64::MAX {
            if leftover.is_infinite() { u64::MAX } else { leftover.count_between(lo, u64::MAX) }
        } else {
            leftover.count_between(lo, hi)
        };
        if count == 0 {
            return;
        }
        if count <= POINT_LIMIT {
            let seen = &self.seen;
            self.free.points.extend(leftover.iter_from(lo).take(count as usize).filter(|x| !seen.contains(x)));
        } else {
            self.free.regions.insert(lo, Region { hi, mask: Arc::new(leftover) });
        }
    }

    fn add_pieces(&mut self, pieces: &[Piece]) {
        for p in pieces {
            let id = self.pieces.len();
            self.pieces.push(p.clone());
            if let Some(x) = p.next_from(p.lo) {
                self.heap.push(Reverse((x, id)));
            }
        }
    }

    /// Smallest pooled string that is neither output nor seen.
    fn pop_output(&mut self) -> Result<u64> {
        while let Some(Reverse((x, id))) = self.heap.pop() {
            if x < u64::MAX {
                if let Some(y) = self.pieces[id].next_from(x + 1) {
                    self.heap.push(Reverse((y, id)));
                }
            }
            if !self.seen.contains(&x) {
                return Ok(x);
            }
        }
        Err(Error::Unsupported("pod pool holds no unused string".into()))
    }
}

struct Taken {
    bounds: Option<(u64, u64)>,
    count: u64,
}

impl Learner for PodLearner {
    fn name(&self) -> String {
        match self.schedule {
            Schedule::Constant(s) => format!("pod(s={s})"),
            Schedule::Linear => "pod(s=t)".into(),
        }
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        let fresh = self.seen.insert(w);
        let w_pooled = !fresh || !self.free.contains_unseen(w);
        if fresh {
            self.free.points.remove(&w);
            if let Some(rec) = &mut self.record {
                rec.seen_at.insert(w, rec.pods.len());
            }
        }
        let tr = self.core.advance(w, t)?;
        let cur = self.core.current().clone();
        let (source, tag) = match tr.relation {
            Relation::Subset => (tr.prev.clone(), tr.prev_tag),
            _ => (cur.clone(), self.core.tag()),
        };
        let claim = self.claim(&source, tag, self.schedule.size(t))?;
        self.add_pieces(&claim.pieces);
        if let Some(rec) = &mut self.record {
            rec.pods.push(claim.pieces.clone());
        }
        let output = self.pop_output()?;
        Ok(Move {
            output,
            hyp: cur,
            indices: want_indices.then(|| self.core.indices()),
            pod: Some(PodStats { size: claim.size, min: claim.min, max: claim.max, w_pooled }),
        })
    }
}
