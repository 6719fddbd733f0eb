//! Conversions between element learners and hypothesis learners.

use std::sync::Arc;

use crate::chain::{Chain, EntryKind, PrefixView};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::upset::UPSet;

use super::alg1::pick;
use super::{Learner, Move, SetTag, UnusedScan, Used};

/// Wraps an element learner: keeps its outputs and reports as hypothesis the
/// greedy intersection, in index order over the first `t` consistent
/// languages, of those containing the output while the intersection stays
/// infinite. When no consistent language contains the output, the smallest
/// family language among the first `t` indices that does is used.
pub struct ElementToSemiindex {
    inner: Box<dyn Learner>,
    chain: Chain,
    view: PrefixView,
}

impl ElementToSemiindex {
    pub fn new(inner: Box<dyn Learner>, family: Arc<Family>) -> ElementToSemiindex {
        let chain = Chain::new(family);
        let view = PrefixView::new(&chain);
        ElementToSemiindex { inner, chain, view }
    }

    /// Greedy selection. Returns the hypothesis and, when asked, its indices.
    fn select(&mut self, o: u64, t: u64, want_indices: bool) -> Result<(Arc<UPSet>, Option<Vec<usize>>)> {
        let (plain, schemas) = self.chain.events_containing(o);
        let mut events: Vec<(usize, Option<&Arc<UPSet>>, Option<usize>)> = Vec::new();
        let mut all = true;
        for &(slot, lang) in &plain {
            if lang.member(o) {
                events.push((slot, Some(lang), None));
            } else {
                all = false;
            }
        }
        for &(s, first) in &schemas {
            match first {
                Some(slot) => events.push((slot, None, Some(s))),
                None => all = false,
            }
        }
        events.sort_by_key(|e| e.0);
        let mut running = UPSet::naturals();
        let mut accepted_plain: Vec<usize> = Vec::new();
        let mut accepted_schemas: Vec<usize> = Vec::new();
        for (slot, lang, schema) in events {
            let per = match (lang, schema) {
                (Some(l), _) => l.periodic_part(),
                (None, Some(s)) => self.chain.schema_union(s).periodic_part(),
                _ => unreachable!(),
            };
            let next = running.checked_periodic_intersect(&per).ok_or_else(|| {
                Error::Unsupported("greedy intersection period exceeds the supported bound".into())
            })?;
            if next.is_infinite() {
                running = next;
                match schema {
                    Some(s) => accepted_schemas.push(s),
                    None => accepted_plain.push(slot),
                }
            } else {
                all = false;
            }
        }

        if accepted_plain.is_empty() && accepted_schemas.is_empty() {
            return self.fallback(o, t, want_indices);
        }

        let hyp = if all {
            // Every entry containing `o` is taken: the full intersection with `o` put back.
            self.view.sync(&self.chain, self.chain.len());
            let full = self.view.set();
            if schemas.iter().any(|&(s, _)| self.chain.has_param(s, o)) {
                Arc::new(full.with([o]))
            } else {
                full.clone()
            }
        } else {
            let mut base = UPSet::naturals();
            for &slot in &accepted_plain {
                let (_, lang) = plain.iter().find(|p| p.0 == slot).expect("accepted plain entry");
                base = base.intersect(lang);
            }
            let mut params = Vec::new();
            for &s in &accepted_schemas {
                base = base.intersect(self.chain.schema_union(s));
                params.extend(self.chain.schema_params(s).filter(|&p| p != o));
            }
            Arc::new(base.without(params))
        };

        let indices = want_indices.then(|| {
            self.chain
                .entries()
                .filter(|(slot, e)| match e.kind {
                    EntryKind::Plain { .. } => accepted_plain.binary_search(slot).is_ok(),
                    EntryKind::CoSingleton { schema, param, nontrivial } => {
                        accepted_schemas.contains(&schema) && !(nontrivial && param == o)
                    }
                })
                .map(|(_, e)| e.index)
                .collect()
        });
        Ok((hyp, indices))
    }

    fn fallback(&self, o: u64, t: u64, want_indices: bool) -> Result<(Arc<UPSet>, Option<Vec<usize>>)> {
        let f = self.chain.family();
        for idx in 0..t as usize {
            if let Ok(l) = f.language_at(idx) {
                if l.member(o) {
                    return Ok((Arc::new(l), want_indices.then(|| vec![idx])));
                }
            } else if f.locate(idx).is_err() {
                break;
            }
        }
        Ok((Arc::new(UPSet::naturals()), want_indices.then(Vec::new)))
    }
}

impl Learner for ElementToSemiindex {
    fn name(&self) -> String {
        format!("forward({})", self.inner.name())
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        let inner = self.inner.step(t, w, false)?;
        self.chain.observe(w, t as usize)?;
        let (hyp, indices) = self.select(inner.output, t, want_indices)?;
        Ok(Move { output: inner.output, hyp, indices, pod: inner.pod })
    }
}

/// Wraps a hypothesis learner: outputs the smallest unused string of its `M_t`.
pub struct SemiindexToElement {
    inner: Box<dyn Learner>,
    used: Used,
    scan: UnusedScan,
    prev: Option<Arc<UPSet>>,
    epoch: u64,
}

impl SemiindexToElement {
    pub fn new(inner: Box<dyn Learner>) -> SemiindexToElement {
        SemiindexToElement { inner, used: Used::new(), scan: UnusedScan::default(), prev: None, epoch: 0 }
    }
}

/// Whether `new ⊆ old`, using the shared-storage point diff when the rules agree.
fn shrinks(new: &UPSet, old: &UPSet) -> bool {
    let mut ok = true;
    let same_rule = new.diff_points(old, |x| {
        ok = !new.member(x);
        ok
    });
    if same_rule {
        ok
    } else {
        new.is_subset(old)
    }
}

impl Learner for SemiindexToElement {
    fn name(&self) -> String {
        format!("reverse({})", self.inner.name())
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        self.used.insert(w);
        let inner = self.inner.step(t, w, want_indices)?;
        if let Some(prev) = &self.prev {
            if !Arc::ptr_eq(prev, &inner.hyp) && !shrinks(&inner.hyp, prev) {
                self.epoch += 1;
            }
        }
        self.prev = Some(inner.hyp.clone());
        let output = pick(&mut self.scan, &inner.hyp, SetTag { epoch: self.epoch, t }, &self.used);
        self.used.insert(output);
        Ok(Move { output, hyp: inner.hyp, indices: inner.indices, pod: inner.pod })
    }
}
