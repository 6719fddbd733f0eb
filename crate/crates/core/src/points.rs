//! Persistent sorted set of `u64` stored as shared chunks.
//!
//! Cloning is O(1). Inserting or removing one point copies a single chunk and
//! the chunk table, so versions derived from each other share almost all of
//! their storage; [`SortedPoints::sym_diff`] skips shared chunks.

use std::fmt;
use std::sync::{Arc, OnceLock};

const CHUNK: usize = 512;

#[derive(Clone)]
pub struct SortedPoints {
    inner: Arc<Inner>,
}

struct Inner {
    chunks: Vec<Arc<[u64]>>,
    /// `cum[i]` = number of points in chunks before `i`; one extra entry holds the total.
    cum: Vec<usize>,
}

impl Inner {
    fn new(chunks: Vec<Arc<[u64]>>) -> Inner {
        let mut cum = Vec::with_capacity(chunks.len() + 1);
        let mut acc = 0;
        cum.push(0);
        for c in &chunks {
            acc += c.len();
            cum.push(acc);
        }
        Inner { chunks, cum }
    }
}

fn empty_inner() -> Arc<Inner> {
    static EMPTY: OnceLock<Arc<Inner>> = OnceLock::new();
    EMPTY.get_or_init(|| Arc::new(Inner::new(Vec::new()))).clone()
}

impl Default for SortedPoints {
    fn default() -> Self {
        SortedPoints::new()
    }
}

impl SortedPoints {
    pub fn new() -> Self {
        SortedPoints { inner: empty_inner() }
    }

    /// Builds from a strictly increasing vector.
    pub fn from_sorted(v: Vec<u64>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]), "points must be strictly increasing");
        if v.is_empty() {
            return SortedPoints::new();
        }
        let chunks = v.chunks(CHUNK).map(Arc::from).collect();
        SortedPoints { inner: Arc::new(Inner::new(chunks)) }
    }

    pub fn len(&self) -> usize {
        *self.inner.cum.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Chunk that would hold `x`.
    fn chunk_for(&self, x: u64) -> usize {
        self.inner.chunks.partition_point(|c| *c.last().unwrap() < x)
    }

    pub fn contains(&self, x: u64) -> bool {
        let ci = self.chunk_for(x);
        self.inner.chunks.get(ci).is_some_and(|c| c.binary_search(&x).is_ok())
    }

    /// Number of points `< x`.
    pub fn count_below(&self, x: u64) -> usize {
        let ci = self.chunk_for(x);
        match self.inner.chunks.get(ci) {
            None => self.len(),
            Some(c) => self.inner.cum[ci] + c.partition_point(|&v| v < x),
        }
    }

    /// The `i`-th smallest point.
    pub fn get(&self, i: usize) -> Option<u64> {
        if i >= self.len() {
            return None;
        }
        let ci = self.inner.cum.partition_point(|&c| c <= i) - 1;
        Some(self.inner.chunks[ci][i - self.inner.cum[ci]])
    }

    pub fn first(&self) -> Option<u64> {
        self.inner.chunks.first().map(|c| c[0])
    }

    pub fn last(&self) -> Option<u64> {
        self.inner.chunks.last().map(|c| *c.last().unwrap())
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { chunks: &self.inner.chunks, ci: 0, j: 0 }
    }

    /// Points `≥ x`, ascending.
    pub fn iter_from(&self, x: u64) -> Iter<'_> {
        let ci = self.chunk_for(x);
        let j = self.inner.chunks.get(ci).map_or(0, |c| c.partition_point(|&v| v < x));
        Iter { chunks: &self.inner.chunks, ci, j }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn ptr_eq(&self, other: &SortedPoints) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Copy with `x` added (no-op if present).
    pub fn insert(&self, x: u64) -> SortedPoints {
        let chunks = &self.inner.chunks;
        if chunks.is_empty() {
            return SortedPoints::from_sorted(vec![x]);
        }
        let ci = self.chunk_for(x).min(chunks.len() - 1);
        let c = &chunks[ci];
        let pos = match c.binary_search(&x) {
            Ok(_) => return self.clone(),
            Err(p) => p,
        };
        let mut v = Vec::with_capacity(c.len() + 1);
        v.extend_from_slice(&c[..pos]);
        v.push(x);
        v.extend_from_slice(&c[pos..]);
        let mut out: Vec<Arc<[u64]>> = Vec::with_capacity(chunks.len() + 1);
        out.extend_from_slice(&chunks[..ci]);
        if v.len() > 2 * CHUNK {
            let right = v.split_off(v.len() / 2);
            out.push(Arc::from(v));
            out.push(Arc::from(right));
        } else {
            out.push(Arc::from(v));
        }
        out.extend_from_slice(&chunks[ci + 1..]);
        SortedPoints { inner: Arc::new(Inner::new(out)) }
    }

    /// Copy with `x` removed (no-op if absent).
    pub fn remove(&self, x: u64) -> SortedPoints {
        let chunks = &self.inner.chunks;
        let ci = self.chunk_for(x);
        let Some(c) = chunks.get(ci) else { return self.clone() };
        let Ok(pos) = c.binary_search(&x) else { return self.clone() };
        let mut v = Vec::with_capacity(c.len());
        v.extend_from_slice(&c[..pos]);
        v.extend_from_slice(&c[pos + 1..]);
        let mut out: Vec<Arc<[u64]>> = Vec::with_capacity(chunks.len());
        out.extend_from_slice(&chunks[..ci]);
        let mut rest = ci + 1;
        if v.len() < CHUNK / 4 {
            if let Some(next) = chunks.get(ci + 1) {
                if v.len() + next.len() <= CHUNK {
                    v.extend_from_slice(next);
                    rest = ci + 2;
                }
            }
        }
        if !v.is_empty() {
            out.push(Arc::from(v));
        }
        out.extend_from_slice(&chunks[rest..]);
        if out.is_empty() {
            return SortedPoints::new();
        }
        SortedPoints { inner: Arc::new(Inner::new(out)) }
    }

    /// Calls `f` on every point in exactly one of the two sets, ascending.
    /// Chunks shared by both sets are skipped without being read.
    pub fn sym_diff(&self, other: &SortedPoints, mut f: impl FnMut(u64) -> bool) {
        if self.ptr_eq(other) {
            return;
        }
        let a = &self.inner.chunks;
        let b = &other.inner.chunks;
        let (mut ia, mut ja, mut ib, mut jb) = (0usize, 0usize, 0usize, 0usize);
        loop {
            if ja == 0 && jb == 0 && ia < a.len() && ib < b.len() && Arc::ptr_eq(&a[ia], &b[ib]) {
                ia += 1;
                ib += 1;
                continue;
            }
            let xa = a.get(ia).map(|c| c[ja]);
            let xb = b.get(ib).map(|c| c[jb]);
            let (emit, step_a, step_b) = match (xa, xb) {
                (None, None) => return,
                (Some(x), None) => (Some(x), true, false),
                (None, Some(y)) => (Some(y), false, true),
                (Some(x), Some(y)) if x == y => (None, true, true),
                (Some(x), Some(y)) if x < y => (Some(x), true, false),
                (Some(_), Some(y)) => (Some(y), false, true),
            };
            if let Some(v) = emit {
                if !f(v) {
                    return;
                }
            }
            if step_a {
                ja += 1;
                if ja == a[ia].len() {
                    ia += 1;
                    ja = 0;
                }
            }
            if step_b {
                jb += 1;
                if jb == b[ib].len() {
                    ib += 1;
                    jb = 0;
                }
            }
        }
    }
}

impl PartialEq for SortedPoints {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut same = true;
        self.sym_diff(other, |_| {
            same = false;
            false
        });
        same
    }
}

impl Eq for SortedPoints {}

impl std::hash::Hash for SortedPoints {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.len().hash(state);
        for x in self.iter() {
            x.hash(state);
        }
    }
}

impl fmt::Debug for SortedPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl FromIterator<u64> for SortedPoints {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut v: Vec<u64> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SortedPoints::from_sorted(v)
    }
}

pub struct Iter<'a> {
    chunks: &'a [Arc<[u64]>],
    ci: usize,
    j: usize,
}

impl Iterator for Iter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let c = self.chunks.get(self.ci)?;
        let v = c[self.j];
        self.j += 1;
        if self.j == c.len() {
            self.ci += 1;
            self.j = 0;
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn matches_btreeset_under_edits() {
        let mut model = BTreeSet::new();
        let mut s = SortedPoints::new();
        let mut x: u64 = 12345;
        for step in 0..20_000u64 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = (x >> 33) % 3000;
            if step % 3 == 0 {
                model.remove(&v);
                s = s.remove(v);
            } else {
                model.insert(v);
                s = s.insert(v);
            }
        }
        assert_eq!(s.to_vec(), model.iter().copied().collect::<Vec<_>>());
        for q in 0..3100 {
            assert_eq!(s.contains(q), model.contains(&q));
            assert_eq!(s.count_below(q), model.range(..q).count());
        }
        for (i, &v) in model.iter().enumerate() {
            assert_eq!(s.get(i), Some(v));
        }
    }

    #[test]
    fn sym_diff_of_derived_versions() {
        let base = SortedPoints::from_sorted((0..5000).map(|i| 2 * i).collect());
        let derived = base.insert(777).remove(1000).insert(9999);
        let mut d = Vec::new();
        base.sym_diff(&derived, |v| {
            d.push(v);
            true
        });
        assert_eq!(d, vec![777, 1000, 9999]);
        assert_ne!(base, derived);
        assert_eq!(base, SortedPoints::from_sorted((0..5000).map(|i| 2 * i).collect()));
    }
}
