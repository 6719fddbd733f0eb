//! The materialized list of consistent languages behind the chain learners.
//!
//! [`Chain`] holds the first `m` consistent languages in family order and
//! updates them incrementally as strings arrive: inconsistent entries are
//! killed, new ones appended. Positions are 1-based, as in the descending
//! chain `I¹ ⊇ I² ⊇ …`. [`PrefixView`] keeps one prefix intersection `I^d`
//! materialized and patches it point by point when the list changes.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::{Family, Param, Schema, Seen, Slot};
use crate::fenwick::Fenwick;
use crate::upset::UPSet;

#[derive(Clone, Debug)]
pub enum EntryKind {
    /// Explicit, multiples or arithmetic-progression language.
    Plain { language: Arc<UPSet> },
    /// `U_s ∖ {param}` for a coSingleton schema `s`.
    CoSingleton { schema: usize, param: u64, nontrivial: bool },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub index: usize,
    pub kind: EntryKind,
}

/// What one observation did to the list.
#[derive(Clone, Debug, Default)]
pub struct Change {
    pub len_before: usize,
    /// Smallest position (in the list before the update) of a killed entry.
    pub first_removed: Option<usize>,
    pub removed: usize,
    pub appended: usize,
}

pub struct Chain {
    family: Arc<Family>,
    seen: Seen,
    cursor: Option<usize>,
    exhausted: bool,
    entries: Vec<Entry>,
    alive: Fenwick,
    live: usize,
    co_params: Vec<HashMap<u64, usize>>,
    schema_live: Vec<BTreeSet<usize>>,
    plain: BTreeSet<usize>,
    kills: Vec<usize>,
    unions: Vec<Option<UPSet>>,
    /// First event slot whose periodic prefix intersection is empty.
    blocking: Option<usize>,
    events_dirty: bool,
}

impl Chain {
    pub fn new(family: Arc<Family>) -> Chain {
        let ns = family.schemas().len();
        let unions = family.schemas().iter().map(|s| s.cosingleton_union()).collect();
        Chain {
            seen: family.observe(),
            family,
            cursor: None,
            exhausted: false,
            entries: Vec::new(),
            alive: Fenwick::new(),
            live: 0,
            co_params: vec![HashMap::new(); ns],
            schema_live: vec![BTreeSet::new(); ns],
            plain: BTreeSet::new(),
            kills: Vec::new(),
            unions,
            blocking: None,
            events_dirty: false,
        }
    }

    pub fn family(&self) -> &Arc<Family> {
        &self.family
    }

    pub fn seen(&self) -> &Seen {
        &self.seen
    }

    /// Number of live entries.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Records `w` and grows the list to `target` entries when possible.
    pub fn observe(&mut self, w: u64, target: usize) -> Result<Change> {
        let mut change = Change { len_before: self.live, ..Change::default() };
        if self.seen.insert(&self.family, w) {
            let dead = self.dead_slots(w);
            change.first_removed = dead.iter().map(|&s| self.position(s)).min();
            change.removed = dead.len();
            for s in dead {
                self.kill(s);
            }
        }
        while self.live < target && !self.exhausted {
            match self.family.next_consistent(self.cursor, &self.seen) {
                Some(g) => {
                    self.push(g)?;
                    change.appended += 1;
                }
                None => self.exhausted = true,
            }
        }
        if self.events_dirty {
            self.recompute_blocking()?;
        }
        Ok(change)
    }

    fn dead_slots(&self, w: u64) -> Vec<usize> {
        let mut dead: Vec<usize> = self
            .plain
            .iter()
            .copied()
            .filter(|&s| match &self.entries[s].kind {
                EntryKind::Plain { language } => !language.member(w),
                EntryKind::CoSingleton { .. } => unreachable!(),
            })
            .collect();
        let e = self.family.explicit().len();
        for (s, live) in self.schema_live.iter().enumerate() {
            if live.is_empty() {
                continue;
            }
            if !self.seen.source_alive(e + s) {
                dead.extend(live.iter().copied());
            } else if let Some(&slot) = self.co_params[s].get(&w) {
                dead.push(slot);
            }
        }
        dead
    }

    fn push(&mut self, index: usize) -> Result<()> {
        let slot = self.entries.len();
        let kind = match self.family.locate(index)? {
            Slot::Instance { schema, param: Param::Point(p), .. }
                if matches!(self.family.schemas()[schema], Schema::CoSingleton { .. }) =>
            {
                let nontrivial = self.family.schemas()[schema].cosingleton_nontrivial(p);
                if self.schema_live[schema].is_empty() {
                    self.events_dirty = true;
                }
                self.schema_live[schema].insert(slot);
                if nontrivial {
                    self.co_params[schema].insert(p, slot);
                }
                EntryKind::CoSingleton { schema, param: p, nontrivial }
            }
            _ => {
                self.plain.insert(slot);
                self.events_dirty = true;
                EntryKind::Plain { language: Arc::new(self.family.raw_language_at(index)?) }
            }
        };
        self.entries.push(Entry { index, kind });
        self.alive.push(1);
        self.live += 1;
        self.cursor = Some(index);
        Ok(())
    }

    fn kill(&mut self, slot: usize) {
        self.alive.add(slot, -1);
        self.live -= 1;
        self.kills.push(slot);
        match self.entries[slot].kind {
            EntryKind::Plain { .. } => {
                self.plain.remove(&slot);
                self.events_dirty = true;
            }
            EntryKind::CoSingleton { schema, param, nontrivial } => {
                if self.schema_live[schema].first() == Some(&slot) {
                    self.events_dirty = true;
                }
                self.schema_live[schema].remove(&slot);
                if nontrivial {
                    self.co_params[schema].remove(&param);
                }
            }
        }
    }

    /// Events are the entries that change the periodic part of a prefix
    /// intersection: plain entries and the first live instance of each schema.
    fn recompute_blocking(&mut self) -> Result<()> {
        let mut events: Vec<(usize, UPSet)> = self
            .plain
            .iter()
            .map(|&s| match &self.entries[s].kind {
                EntryKind::Plain { language } => (s, language.periodic_part()),
                EntryKind::CoSingleton { .. } => unreachable!(),
            })
            .collect();
        for (s, live) in self.schema_live.iter().enumerate() {
            if let Some(&first) = live.first() {
                events.push((first, self.unions[s].as_ref().unwrap().periodic_part()));
            }
        }
        events.sort_by_key(|e| e.0);
        let mut running = UPSet::naturals();
        self.blocking = None;
        for (slot, per) in events {
            running = running.checked_periodic_intersect(&per).ok_or_else(|| {
                Error::Unsupported("prefix intersection period exceeds the supported bound".into())
            })?;
            if !running.is_infinite() {
                self.blocking = Some(slot);
                break;
            }
        }
        self.events_dirty = false;
        Ok(())
    }

    /// 1-based position of a live slot.
    pub fn position(&self, slot: usize) -> usize {
        self.alive.prefix(slot + 1) as usize
    }

    /// Slot at a 1-based position.
    fn slot_at(&self, pos: usize) -> Option<usize> {
        self.alive.select(pos)
    }

    pub fn entry_at(&self, pos: usize) -> Option<&Entry> {
        self.slot_at(pos).map(|s| &self.entries[s])
    }

    /// Family index at a 1-based position.
    pub fn index_at(&self, pos: usize) -> Option<usize> {
        self.entry_at(pos).map(|e| e.index)
    }

    /// Family indices of the first `depth` entries.
    pub fn indices(&self, depth: usize) -> Vec<usize> {
        self.live_slots(0, self.entries.len()).take(depth).map(|s| self.entries[s].index).collect()
    }

    /// Family indices of every live entry.
    pub fn all_indices(&self) -> Vec<usize> {
        self.indices(self.live)
    }

    pub fn language_of(&self, entry: &Entry) -> UPSet {
        match &entry.kind {
            EntryKind::Plain { language } => (**language).clone(),
            EntryKind::CoSingleton { .. } => self
                .family
                .raw_language_at(entry.index)
                .expect("chain entries are valid indices"),
        }
    }

    pub fn language_at(&self, pos: usize) -> Option<UPSet> {
        self.entry_at(pos).map(|e| self.language_of(e))
    }

    /// Whether `I^d` is infinite. Depths past the list length are padded.
    pub fn is_infinite_at(&self, d: usize) -> bool {
        self.blocking.is_none_or(|b| d < self.position(b))
    }

    /// Largest `d` with `I^d` infinite, capped at the list length.
    pub fn infinite_depth(&self) -> usize {
        match self.blocking {
            None => self.live,
            Some(b) => self.position(b) - 1,
        }
    }

    /// Plain live entries and, per coSingleton schema with live instances, its
    /// first live instance containing `o` (`None` when no instance does).
    /// These decide the periodic part of any intersection of entries containing `o`.
    pub fn events_containing(&self, o: u64) -> (Vec<(usize, &Arc<UPSet>)>, Vec<(usize, Option<usize>)>) {
        let plain = self
            .plain
            .iter()
            .map(|&s| match &self.entries[s].kind {
                EntryKind::Plain { language } => (s, language),
                EntryKind::CoSingleton { .. } => unreachable!(),
            })
            .collect();
        let mut schemas = Vec::new();
        for (s, live) in self.schema_live.iter().enumerate() {
            if live.is_empty() {
                continue;
            }
            let first = if self.unions[s].as_ref().unwrap().member(o) {
                let excluded = self.co_params[s].get(&o).copied();
                live.iter().copied().find(|&slot| Some(slot) != excluded)
            } else {
                None
            };
            schemas.push((s, first));
        }
        (plain, schemas)
    }

    /// `U_s` of coSingleton schema `s`.
    pub fn schema_union(&self, s: usize) -> &UPSet {
        self.unions[s].as_ref().expect("coSingleton schema")
    }

    /// Nontrivial parameters of the live instances of schema `s`.
    pub fn schema_params(&self, s: usize) -> impl Iterator<Item = u64> + '_ {
        self.co_params[s].keys().copied()
    }

    pub fn has_param(&self, s: usize, p: u64) -> bool {
        self.co_params[s].contains_key(&p)
    }

    /// Live slots in `[lo, hi)`, ascending.
    fn live_slots(&self, lo: usize, hi: usize) -> impl Iterator<Item = usize> + '_ {
        let mut k = self.alive.prefix(lo) as usize;
        std::iter::from_fn(move || {
            let s = self.alive.select(k + 1)?;
            if s >= hi {
                return None;
            }
            k += 1;
            Some(s)
        })
    }

    /// Live entries with their slots, in list order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Entry)> + '_ {
        self.live_slots(0, self.entries.len()).map(|s| (s, &self.entries[s]))
    }
}

/// One prefix intersection `I^d` of a [`Chain`], kept materialized.
///
/// The set is `base ∖ P` where `base` intersects the plain languages and the
/// coSingleton unions in scope and `P` holds the nontrivial coSingleton
/// parameters in scope. Moving the depth or killing entries patches the set
/// one point at a time; a change to `base` forces a rebuild.
#[derive(Clone, Debug)]
pub struct PrefixView {
    boundary: usize,
    kills_seen: usize,
    set: Arc<UPSet>,
    base: UPSet,
    counts: HashMap<u64, u32>,
    schema_count: Vec<usize>,
    dirty: bool,
    depth: usize,
}

impl PrefixView {
    pub fn new(chain: &Chain) -> PrefixView {
        PrefixView {
            boundary: 0,
            kills_seen: chain.kills.len(),
            set: Arc::new(UPSet::naturals()),
            base: UPSet::naturals(),
            counts: HashMap::new(),
            schema_count: vec![0; chain.family.schemas().len()],
            dirty: false,
            depth: 0,
        }
    }

    pub fn set(&self) -> &Arc<UPSet> {
        &self.set
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Brings the view to `I^depth` of the chain's current list.
    pub fn sync(&mut self, chain: &Chain, depth: usize) {
        for &slot in &chain.kills[self.kills_seen..] {
            if slot < self.boundary {
                self.remove_entry(&chain.entries[slot]);
            }
        }
        self.kills_seen = chain.kills.len();
        let target = if depth >= chain.live {
            chain.entries.len()
        } else if depth == 0 {
            0
        } else {
            chain.slot_at(depth).expect("depth within list") + 1
        };
        if target > self.boundary {
            for s in chain.live_slots(self.boundary, target) {
                self.add_entry(&chain.entries[s]);
            }
        } else {
            for s in chain.live_slots(target, self.boundary) {
                self.remove_entry(&chain.entries[s]);
            }
        }
        self.boundary = target;
        self.depth = depth.min(chain.live);
        if self.dirty {
            self.rebuild(chain);
        }
    }

    fn add_entry(&mut self, e: &Entry) {
        match e.kind {
            EntryKind::Plain { .. } => self.dirty = true,
            EntryKind::CoSingleton { schema, param, nontrivial } => {
                self.schema_count[schema] += 1;
                if self.schema_count[schema] == 1 {
                    self.dirty = true;
                }
                if nontrivial {
                    let c = self.counts.entry(param).or_insert(0);
                    *c += 1;
                    if *c == 1 && !self.dirty && self.set.member(param) {
                        self.set = Arc::new(self.set.without([param]));
                    }
                }
            }
        }
    }

    fn remove_entry(&mut self, e: &Entry) {
        match e.kind {
            EntryKind::Plain { .. } => self.dirty = true,
            EntryKind::CoSingleton { schema, param, nontrivial } => {
                self.schema_count[schema] -= 1;
                if self.schema_count[schema] == 0 {
                    self.dirty = true;
                }
                if nontrivial {
                    let c = self.counts.get_mut(&param).expect("parameter counted");
                    *c -= 1;
                    if *c == 0 {
                        self.counts.remove(&param);
                        if !self.dirty && self.base.member(param) {
                            self.set = Arc::new(self.set.with([param]));
                        }
                    }
                }
            }
        }
    }

    fn rebuild(&mut self, chain: &Chain) {
        let mut base = UPSet::naturals();
        self.counts.clear();
        self.schema_count.iter_mut().for_each(|c| *c = 0);
        for s in chain.live_slots(0, self.boundary) {
            match &chain.entries[s].kind {
                EntryKind::Plain { language } => base = base.intersect(language),
                EntryKind::CoSingleton { schema, param, nontrivial } => {
                    self.schema_count[*schema] += 1;
                    if *nontrivial {
                        *self.counts.entry(*param).or_insert(0) += 1;
                    }
                }
            }
        }
        for (s, &c) in self.schema_count.iter().enumerate() {
            if c > 0 {
                base = base.intersect(chain.unions[s].as_ref().unwrap());
            }
        }
        self.set = Arc::new(base.without(self.counts.keys().copied()));
        self.base = base;
        self.dirty = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(f: &Family, seen: &[u64], m: usize, d: usize) -> UPSet {
        let list = f.consistent_prefix(seen, m);
        let mut acc = UPSet::naturals();
        for (_, l) in list.iter().take(d) {
            acc = acc.intersect(l);
        }
        acc
    }

    #[test]
    fn views_track_brute_force_prefixes() {
        for name in ["ex1-cosingleton-with-N", "ex2-specials", "ex3-cosingleton", "ex5-finite", "multiples"] {
            let f = Arc::new(Family::builtin(name).unwrap());
            let mut chain = Chain::new(f.clone());
            let mut views: Vec<PrefixView> = (0..3).map(|_| PrefixView::new(&chain)).collect();
            let stream = [6u64, 4, 12, 3, 8, 18, 5, 24, 9, 30, 2, 36, 7, 48];
            for (t, &w) in stream.iter().enumerate() {
                let m = t + 1;
                chain.observe(w, m).unwrap();
                let seen = &stream[..=t];
                let list = f.consistent_prefix(seen, m);
                assert_eq!(chain.all_indices(), list.iter().map(|p| p.0).collect::<Vec<_>>(), "{name} t={m}");
                for (vi, v) in views.iter_mut().enumerate() {
                    let d = match vi {
                        0 => chain.len(),
                        1 => (t % 4) + 1,
                        _ => chain.len() / 2,
                    };
                    v.sync(&chain, d);
                    assert_eq!(**v.set(), brute(&f, seen, m, d), "{name} t={m} d={d}");
                }
                let want_inf = (0..=chain.len())
                    .take_while(|&d| d == 0 || brute(&f, seen, m, d).is_infinite())
                    .last()
                    .unwrap();
                assert_eq!(chain.infinite_depth(), want_inf, "{name} t={m}");
            }
        }
    }
}
