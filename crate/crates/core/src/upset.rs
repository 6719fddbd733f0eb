//! Ultimately periodic subsets of ℕ.
//!
//! A set is stored as a periodic rule (`period`, `residues`) plus the finite
//! list of points below the threshold where actual membership disagrees with
//! the rule: `holes` (rule says yes, set says no) and `extras` (rule says no,
//! set says yes). The threshold is one past the largest disagreement.
//!
//! Every constructor and operation returns the canonical form: minimal
//! period, minimal threshold. Two canonical values are `==` exactly when they
//! denote the same set.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::SortedPoints;

/// Exact rational used for every density in the crate.
pub type Rational = num_rational::Ratio<i64>;

/// Largest period any operation is allowed to produce.
pub const MAX_PERIOD: u64 = 1 << 26;

/// Point edits at or below this count are applied one by one.
const PATCH_LIMIT: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPSet {
    period: u64,
    residues: Vec<u64>,
    holes: SortedPoints,
    extras: SortedPoints,
}

/// Set operation selector for [`UPSet::combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Intersect,
    Union,
    Difference,
    Complement,
}

impl SetOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            SetOp::Intersect => a && b,
            SetOp::Union => a || b,
            SetOp::Difference => a && !b,
            SetOp::Complement => !a,
        }
    }
}

impl UPSet {
    // ----- construction -------------------------------------------------

    pub fn empty() -> Self {
        UPSet { period: 1, residues: vec![], holes: SortedPoints::new(), extras: SortedPoints::new() }
    }

    pub fn naturals() -> Self {
        UPSet { period: 1, residues: vec![0], holes: SortedPoints::new(), extras: SortedPoints::new() }
    }

    /// Purely periodic set `{n : n mod p ∈ residues}`.
    pub fn periodic(period: u64, residues: impl IntoIterator<Item = u64>) -> Self {
        assert!(period >= 1, "period must be positive");
        let mut r: Vec<u64> = residues.into_iter().map(|x| x % period).collect();
        r.sort_unstable();
        r.dedup();
        let mut s = UPSet { period, residues: r, holes: SortedPoints::new(), extras: SortedPoints::new() };
        s.reduce_period();
        s
    }

    /// `kℕ`; `multiples(0)` is `{0}`.
    pub fn multiples(k: u64) -> Self {
        if k == 0 {
            return UPSet::finite([0]);
        }
        UPSet::periodic(k, [0])
    }

    /// `{i + k·d : k ≥ 0}` with `d ≥ 1`.
    pub fn arith(i: u64, d: u64) -> Self {
        assert!(d >= 1, "common difference must be positive");
        UPSet::periodic(d, [i % d]).minus_below(i)
    }

    pub fn evens() -> Self {
        UPSet::multiples(2)
    }

    pub fn finite(elems: impl IntoIterator<Item = u64>) -> Self {
        let mut e: Vec<u64> = elems.into_iter().collect();
        e.sort_unstable();
        e.dedup();
        UPSet { period: 1, residues: vec![], holes: SortedPoints::new(), extras: SortedPoints::from_sorted(e) }
    }

    /// `ℕ ∖ removed`.
    pub fn cofinite(removed: impl IntoIterator<Item = u64>) -> Self {
        UPSet::naturals().without(removed)
    }

    /// Builds from the serialized description: below `h` membership is `X`,
    /// from `h` on it follows `(p, R)`.
    pub fn from_description(h: u64, p: u64, r: &[u64], x: &[u64]) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("period must be at least 1".into()));
        }
        if let Some(bad) = r.iter().find(|&&v| v >= p) {
            return Err(Error::Domain(format!("residue {bad} not below period {p}")));
        }
        if let Some(bad) = x.iter().find(|&&v| v >= h) {
            return Err(Error::Domain(format!("exception {bad} not below threshold {h}")));
        }
        let base = UPSet::periodic(p, r.iter().copied());
        let mut xs: Vec<u64> = x.to_vec();
        xs.sort_unstable();
        xs.dedup();
        let mut holes = Vec::new();
        let mut extras = Vec::new();
        let mut xi = 0;
        for n in 0..h {
            let in_x = xi < xs.len() && xs[xi] == n;
            if in_x {
                xi += 1;
            }
            let rule = base.periodic_member(n);
            if rule && !in_x {
                holes.push(n);
            } else if !rule && in_x {
                extras.push(n);
            }
        }
        Ok(UPSet {
            holes: SortedPoints::from_sorted(holes),
            extras: SortedPoints::from_sorted(extras),
            ..base
        })
    }

    /// Same set with the given points removed.
    pub fn without(&self, removed: impl IntoIterator<Item = u64>) -> Self {
        self.set_points(removed, false)
    }

    /// Same set with the given points added.
    pub fn with(&self, added: impl IntoIterator<Item = u64>) -> Self {
        self.set_points(added, true)
    }

    fn set_points(&self, points: impl IntoIterator<Item = u64>, member: bool) -> Self {
        let mut pts: Vec<u64> = points.into_iter().collect();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= PATCH_LIMIT {
            let mut out = self.clone();
            for x in pts {
                out.set_point(x, member);
            }
            return out;
        }
        let mut holes = Vec::with_capacity(self.holes.len() + pts.len());
        let mut extras = Vec::with_capacity(self.extras.len() + pts.len());
        let mut d = DefectIter::new(self);
        let mut i = 0;
        loop {
            let n = match (d.peek(), pts.get(i)) {
                (None, None) => break,
                (Some(x), None) => x,
                (None, Some(&y)) => y,
                (Some(x), Some(&y)) => x.min(y),
            };
            let old = d.take_at(n);
            let actual = if pts.get(i) == Some(&n) {
                i += 1;
                member
            } else {
                old.expect("defect walk out of sync")
            };
            let rule = self.periodic_member(n);
            if rule && !actual {
                holes.push(n);
            } else if !rule && actual {
                extras.push(n);
            }
        }
        UPSet {
            period: self.period,
            residues: self.residues.clone(),
            holes: SortedPoints::from_sorted(holes),
            extras: SortedPoints::from_sorted(extras),
        }
    }

    /// Forces membership of one point, keeping the form canonical.
    fn set_point(&mut self, x: u64, member: bool) {
        if self.periodic_member(x) {
            self.holes = if member { self.holes.remove(x) } else { self.holes.insert(x) };
        } else {
            self.extras = if member { self.extras.insert(x) } else { self.extras.remove(x) };
        }
    }

    /// Removes every member below `n`.
    pub fn minus_below(&self, n: u64) -> Self {
        if n == 0 {
            return self.clone();
        }
        let mut below: Vec<u64> = Vec::new();
        // O(n·|R|/p): every periodic member below n becomes a hole.
        for q in 0..n.div_ceil(self.period) {
            for &r in &self.residues {
                let v = q * self.period + r;
                if v < n {
                    below.push(v);
                }
            }
        }
        below.extend(self.extras.iter().take_while(|&e| e < n));
        self.without(below)
    }

    // ----- accessors ----------------------------------------------------

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Points where the rule says "member" but the set excludes them.
    pub fn holes(&self) -> &SortedPoints {
        &self.holes
    }

    /// Points where the rule says "non-member" but the set includes them.
    pub fn extras(&self) -> &SortedPoints {
        &self.extras
    }

    pub fn threshold(&self) -> u64 {
        let a = self.holes.last().map_or(0, |v| v + 1);
        let b = self.extras.last().map_or(0, |v| v + 1);
        a.max(b)
    }

    /// Members below the threshold (the `X` of the serialized form).
    pub fn exceptions(&self) -> Vec<u64> {
        let h = self.threshold();
        let mut out = Vec::new();
        let mut d = DefectIter::new(self);
        for n in 0..h {
            let member = d.take_at(n).unwrap_or_else(|| self.periodic_member(n));
            if member {
                out.push(n);
            }
        }
        out
    }

    /// The eventual behaviour alone, as a set.
    pub fn periodic_part(&self) -> UPSet {
        UPSet { period: self.period, residues: self.residues.clone(), holes: SortedPoints::new(), extras: SortedPoints::new() }
    }

    pub fn defect_count(&self) -> usize {
        self.holes.len() + self.extras.len()
    }

    // ----- membership and predicates ------------------------------------

    #[inline]
    fn periodic_member(&self, n: u64) -> bool {
        if self.period == 1 {
            return !self.residues.is_empty();
        }
        self.residues.binary_search(&(n % self.period)).is_ok()
    }

    pub fn member(&self, n: u64) -> bool {
        if self.holes.contains(n) {
            return false;
        }
        if self.extras.contains(n) {
            return true;
        }
        self.periodic_member(n)
    }

    pub fn is_naturals(&self) -> bool {
        self.period == 1 && !self.residues.is_empty() && self.holes.is_empty() && self.extras.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.extras.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    /// Cardinality of a finite set; `None` when infinite.
    pub fn len(&self) -> Option<u64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.extras.len() as u64)
        }
    }

    /// `self ⊆ other`.
    ///
    /// Only points where `self` gains members (its extras) or `other` loses
    /// them (its holes) can break an inclusion the periodic parts satisfy.
    pub fn is_subset(&self, other: &UPSet) -> bool {
        if !self.periodic_subset(other) {
            return false;
        }
        self.extras.iter().all(|n| other.member(n)) && other.holes.iter().all(|n| !self.member(n))
    }

    fn periodic_subset(&self, other: &UPSet) -> bool {
        if self.residues.is_empty() {
            return true;
        }
        if other.period == 1 {
            return !other.residues.is_empty();
        }
        let l = lcm(self.period, other.period);
        for &r in &self.residues {
            let mut v = r;
            while v < l {
                if !other.periodic_member(v) {
                    return false;
                }
                v += self.period;
            }
        }
        true
    }

    pub fn equals(&self, other: &UPSet) -> bool {
        self == other
    }

    /// Same periodic rule (so the sets differ in finitely many points).
    pub fn same_rule(&self, other: &UPSet) -> bool {
        self.period == other.period && self.residues == other.residues
    }

    /// Calls `f` on every point where membership in `self` and `other`
    /// differs, ascending, and returns true. Returns false without calling
    /// `f` when the periodic rules differ. Stops early when `f` returns false.
    pub fn diff_points(&self, other: &UPSet, mut f: impl FnMut(u64) -> bool) -> bool {
        if !self.same_rule(other) {
            return false;
        }
        // With a shared rule, membership differs exactly where defect status does.
        let mut hd = Vec::new();
        let mut stopped = false;
        self.holes.sym_diff(&other.holes, |x| {
            hd.push(x);
            true
        });
        let mut hi = 0;
        self.extras.sym_diff(&other.extras, |x| {
            while hi < hd.len() && hd[hi] < x {
                if !f(hd[hi]) {
                    stopped = true;
                    return false;
                }
                hi += 1;
            }
            if !f(x) {
                stopped = true;
                return false;
            }
            true
        });
        if !stopped {
            for &x in &hd[hi..] {
                if !f(x) {
                    break;
                }
            }
        }
        true
    }

    // ----- algebra ------------------------------------------------------

    pub fn combine(op: SetOp, a: &UPSet, b: Option<&UPSet>) -> UPSet {
        match op {
            SetOp::Complement => a.complement(),
            _ => {
                let b = b.expect("binary set operation needs a second operand");
                a.binary(op, b)
            }
        }
    }

    pub fn intersect(&self, other: &UPSet) -> UPSet {
        self.binary(SetOp::Intersect, other)
    }

    pub fn union(&self, other: &UPSet) -> UPSet {
        self.binary(SetOp::Union, other)
    }

    pub fn difference(&self, other: &UPSet) -> UPSet {
        self.binary(SetOp::Difference, other)
    }

    pub fn complement(&self) -> UPSet {
        let residues: Vec<u64> =
            (0..self.period).filter(|r| self.residues.binary_search(r).is_err()).collect();
        UPSet {
            period: self.period,
            residues,
            holes: self.extras.clone(),
            extras: self.holes.clone(),
        }
    }

    fn binary(&self, op: SetOp, other: &UPSet) -> UPSet {
        if self.is_naturals() {
            match op {
                SetOp::Intersect => return other.clone(),
                SetOp::Difference => return other.complement(),
                _ => {}
            }
        }
        if other.is_naturals() && op == SetOp::Intersect {
            return self.clone();
        }
        if self.same_rule(other) {
            if let Some(out) = self.patch_same_rule(op, other) {
                return out;
            }
            let residues = match op {
                SetOp::Intersect | SetOp::Union => self.residues.clone(),
                _ => vec![],
            };
            let period = if residues.is_empty() { 1 } else { self.period };
            let mut out = self.merge_defects(op, other, period, residues);
            out.reduce_period();
            return out;
        }
        let l = lcm(self.period, other.period);
        assert!(l <= MAX_PERIOD, "period {l} exceeds MAX_PERIOD");
        let residues: Vec<u64> = match op {
            SetOp::Intersect => {
                let (small, big) =
                    if self.residues.len() * (l / self.period) as usize
                        <= other.residues.len() * (l / other.period) as usize
                    {
                        (self, other)
                    } else {
                        (other, self)
                    };
                let mut v = Vec::new();
                for &r in &small.residues {
                    let mut x = r;
                    while x < l {
                        if big.periodic_member(x) {
                            v.push(x);
                        }
                        x += small.period;
                    }
                }
                v.sort_unstable();
                v
            }
            _ => (0..l)
                .filter(|&x| op.apply(self.periodic_member(x), other.periodic_member(x)))
                .collect(),
        };
        let mut out = self.merge_defects(op, other, l, residues);
        out.reduce_period();
        out
    }

    /// Intersection or union of two sets sharing a rule, computed by editing
    /// the operand that needs fewer point changes. `None` when a full merge is cheaper.
    fn patch_same_rule(&self, op: SetOp, other: &UPSet) -> Option<UPSet> {
        // Points where the result can differ from the base operand.
        let touched = |base: &UPSet, arg: &UPSet| match op {
            SetOp::Intersect => (base.extras.len() + arg.holes.len(), base.extras.clone(), arg.holes.clone()),
            SetOp::Union => (base.holes.len() + arg.extras.len(), base.holes.clone(), arg.extras.clone()),
            _ => unreachable!(),
        };
        if !matches!(op, SetOp::Intersect | SetOp::Union) {
            return None;
        }
        let (ca, a1, a2) = touched(self, other);
        let (cb, b1, b2) = touched(other, self);
        let (base, arg, p1, p2, cost) =
            if ca <= cb { (self, other, a1, a2, ca) } else { (other, self, b1, b2, cb) };
        let total = self.defect_count() + other.defect_count();
        if cost > PATCH_LIMIT && cost * 16 > total {
            return None;
        }
        let mut out = base.clone();
        for x in p1.iter().chain(p2.iter()) {
            let want = op.apply(base.member(x), arg.member(x));
            if want != out.member(x) {
                out.set_point(x, want);
            }
        }
        Some(out)
    }

    /// Computes the defect lists of `op(self, other)` against the rule `(period, residues)`.
    fn merge_defects(&self, op: SetOp, other: &UPSet, period: u64, residues: Vec<u64>) -> UPSet {
        let rule = UPSet { period, residues, holes: SortedPoints::new(), extras: SortedPoints::new() };
        let mut holes = Vec::new();
        let mut extras = Vec::new();
        let mut da = DefectIter::new(self);
        let mut db = DefectIter::new(other);
        loop {
            let n = match (da.peek(), db.peek()) {
                (None, None) => break,
                (Some(x), None) => x,
                (None, Some(y)) => y,
                (Some(x), Some(y)) => x.min(y),
            };
            let a = da.take_at(n).unwrap_or_else(|| self.periodic_member(n));
            let b = db.take_at(n).unwrap_or_else(|| other.periodic_member(n));
            let actual = op.apply(a, b);
            let expected = rule.periodic_member(n);
            if actual && !expected {
                extras.push(n);
            } else if !actual && expected {
                holes.push(n);
            }
        }
        UPSet { holes: SortedPoints::from_sorted(holes), extras: SortedPoints::from_sorted(extras), ..rule }
    }

    fn reduce_period(&mut self) {
        if self.residues.is_empty() {
            self.period = 1;
            self.drop_noop_defects();
            return;
        }
        if self.residues.len() as u64 == self.period {
            self.period = 1;
            self.residues = vec![0];
            self.drop_noop_defects();
            return;
        }
        let p = self.period;
        let count = self.residues.len() as u64;
        for q in divisors(p) {
            if q == p {
                break;
            }
            if !count.is_multiple_of(p / q) {
                continue;
            }
            let ok = self
                .residues
                .iter()
                .all(|&r| self.residues.binary_search(&((r + q) % p)).is_ok());
            if ok {
                self.residues.retain(|&r| r < q);
                self.period = q;
                break;
            }
        }
        self.drop_noop_defects();
    }

    /// Defects must disagree with the rule; after a period change they still
    /// do (the rule is the same function), but constructors feed raw lists here.
    fn drop_noop_defects(&mut self) {
        let stale_hole = self.holes.iter().any(|n| !self.periodic_member(n));
        let stale_extra = self.extras.iter().any(|n| self.periodic_member(n));
        if stale_hole {
            self.holes = self.holes.iter().filter(|&n| self.periodic_member(n)).collect();
        }
        if stale_extra {
            self.extras = self.extras.iter().filter(|&n| !self.periodic_member(n)).collect();
        }
    }

    // ----- order operations ---------------------------------------------

    /// `|self ∩ [0, n)|`.
    pub fn rank(&self, n: u64) -> u64 {
        let p = self.period;
        let full = (n / p) * self.residues.len() as u64;
        let part = self.residues.partition_point(|&r| r < n % p) as u64;
        let holes_below = self.holes.count_below(n) as u64;
        let extras_below = self.extras.count_below(n) as u64;
        full + part + extras_below - holes_below
    }

    /// `|self ∩ [lo, hi)|`.
    pub fn count_between(&self, lo: u64, hi: u64) -> u64 {
        if hi <= lo {
            return 0;
        }
        self.rank(hi) - self.rank(lo)
    }

    /// The `k`-th smallest member, 0-indexed.
    pub fn nth(&self, k: u64) -> Result<u64> {
        if !self.is_infinite() {
            let len = self.extras.len() as u64;
            return self.extras.get(k as usize).ok_or_else(|| {
                Error::Range(format!("nth({k}) on a finite set of size {len}"))
            });
        }
        let h = self.threshold();
        let below = self.rank(h);
        let hi = if k < below {
            h
        } else {
            let per = self.residues.len() as u64;
            h + ((k - below) / per + 1) * self.period
        };
        // Smallest n with rank(n + 1) > k.
        let (mut lo, mut hi) = (0u64, hi);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.rank(mid + 1) > k {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// Smallest member strictly greater than `n`.
    pub fn successor(&self, n: u64) -> Result<u64> {
        self.at_or_after(n + 1).ok_or_else(|| Error::Range(format!("no member above {n}")))
    }

    /// Smallest member `≥ n`, if any.
    pub fn at_or_after(&self, n: u64) -> Option<u64> {
        self.iter_from(n).next()
    }

    /// Ascending iterator over members (unbounded for infinite sets).
    pub fn iter(&self) -> Members<'_> {
        self.iter_from(0)
    }

    /// Ascending iterator over members `≥ n`.
    pub fn iter_from(&self, n: u64) -> Members<'_> {
        Members {
            set: self,
            periodic: self.periodic_at_or_after(n),
            holes: self.holes.iter_from(n).peekable(),
            extras: self.extras.iter_from(n).peekable(),
        }
    }

    /// Smallest `v ≥ n` the periodic rule accepts.
    fn periodic_at_or_after(&self, n: u64) -> Option<u64> {
        let first = *self.residues.first()?;
        let p = self.period;
        let (q, r) = (n / p, n % p);
        let i = self.residues.partition_point(|&x| x < r);
        Some(match self.residues.get(i) {
            Some(&res) => q * p + res,
            None => (q + 1) * p + first,
        })
    }

    /// Periodic part of `self ∩ other`, or `None` when the combined period
    /// would exceed [`MAX_PERIOD`].
    pub fn checked_periodic_intersect(&self, other: &UPSet) -> Option<UPSet> {
        if self.residues.is_empty() || other.residues.is_empty() {
            return Some(UPSet::empty());
        }
        if lcm(self.period, other.period) > MAX_PERIOD {
            return None;
        }
        Some(self.periodic_part().intersect(&other.periodic_part()))
    }

    // ----- densities ----------------------------------------------------

    pub fn natural_density(&self) -> Rational {
        Rational::new(self.residues.len() as i64, self.period as i64)
    }

    /// Density of `c` inside `k`: `d(c ∩ k) / d(k)`.
    pub fn relative_density(c: &UPSet, k: &UPSet) -> Result<Rational> {
        let dk = k.natural_density();
        if dk == Rational::from_integer(0) {
            return Err(Error::Domain("reference set has zero density".into()));
        }
        Ok(c.intersect(k).natural_density() / dk)
    }

    // ----- text form ----------------------------------------------------

    /// Parses the object form or one of the shorthands
    /// `N`, `evens`, `multiples:k`, `coSingleton:base,i`, `arith:i,d`.
    pub fn parse(text: &str) -> Result<UPSet> {
        let t = text.trim();
        if t.starts_with('{') || t.starts_with('"') {
            return serde_json::from_str(t).map_err(|e| Error::Config(e.to_string()));
        }
        parse_shorthand(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("UPSet serialization cannot fail")
    }
}

fn parse_shorthand(t: &str) -> Result<UPSet> {
    let bad = || Error::Config(format!("unrecognized set shorthand `{t}`"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    match t {
        "N" => return Ok(UPSet::naturals()),
        "evens" => return Ok(UPSet::evens()),
        "empty" => return Ok(UPSet::empty()),
        _ => {}
    }
    let (head, args) = t.split_once(':').ok_or_else(bad)?;
    let parts: Vec<&str> = args.split(',').collect();
    match (head, parts.as_slice()) {
        ("multiples", [k]) => Ok(UPSet::multiples(num(k)?)),
        ("arith", [i, d]) => {
            let d = num(d)?;
            if d == 0 {
                return Err(Error::Config("arith difference must be positive".into()));
            }
            Ok(UPSet::arith(num(i)?, d))
        }
        ("coSingleton", [base, i]) => {
            let base = match base.trim() {
                "N" => UPSet::naturals(),
                "evens" => UPSet::evens(),
                other => parse_shorthand(other)?,
            };
            Ok(base.without([num(i)?]))
        }
        _ => Err(bad()),
    }
}

impl Serialize for UPSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("h", &self.threshold())?;
        m.serialize_entry("p", &self.period)?;
        m.serialize_entry("R", &self.residues)?;
        m.serialize_entry("X", &self.exceptions())?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for UPSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            h: u64,
            p: u64,
            #[serde(rename = "R")]
            r: Vec<u64>,
            #[serde(rename = "X")]
            x: Vec<u64>,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            Short(String),
            Full(Raw),
        }
        match Form::deserialize(d)? {
            Form::Short(s) => parse_shorthand(&s).map_err(de::Error::custom),
            Form::Full(raw) => UPSet::from_description(raw.h, raw.p, &raw.r, &raw.x)
                .map_err(de::Error::custom),
        }
    }
}

impl fmt::Debug for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPSet(p={}, R={:?}", self.period, self.residues)?;
        if !self.holes.is_empty() {
            if self.holes.len() > 12 {
                write!(f, ", holes=[{} pts ..{}]", self.holes.len(), self.holes.last().unwrap())?;
            } else {
                write!(f, ", holes={:?}", self.holes)?;
            }
        }
        if !self.extras.is_empty() {
            if self.extras.len() > 12 {
                write!(f, ", extras=[{} pts ..{}]", self.extras.len(), self.extras.last().unwrap())?;
            } else {
                write!(f, ", extras={:?}", self.extras)?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Ascending members of a [`UPSet`], see [`UPSet::iter_from`].
pub struct Members<'a> {
    set: &'a UPSet,
    periodic: Option<u64>,
    holes: std::iter::Peekable<crate::points::Iter<'a>>,
    extras: std::iter::Peekable<crate::points::Iter<'a>>,
}

impl Iterator for Members<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let e = self.extras.peek().copied();
            match (self.periodic, e) {
                (None, None) => return None,
                (Some(p), e) if e.is_none_or(|e| p < e) => {
                    self.periodic = self.set.periodic_at_or_after(p + 1);
                    while self.holes.next_if(|&h| h < p).is_some() {}
                    if self.holes.next_if_eq(&p).is_some() {
                        continue;
                    }
                    return Some(p);
                }
                _ => return self.extras.next(),
            }
        }
    }
}

/// Merged ascending walk over holes (value false) and extras (value true).
struct DefectIter<'a> {
    holes: std::iter::Peekable<crate::points::Iter<'a>>,
    extras: std::iter::Peekable<crate::points::Iter<'a>>,
}

impl<'a> DefectIter<'a> {
    fn new(s: &'a UPSet) -> Self {
        DefectIter { holes: s.holes.iter().peekable(), extras: s.extras.iter().peekable() }
    }

    fn peek(&mut self) -> Option<u64> {
        match (self.holes.peek(), self.extras.peek()) {
            (None, None) => None,
            (Some(&h), None) => Some(h),
            (None, Some(&e)) => Some(e),
            (Some(&h), Some(&e)) => Some(h.min(e)),
        }
    }

    /// Membership override at `n` if `n` is the next defect; advances past it.
    fn take_at(&mut self, n: u64) -> Option<bool> {
        if self.holes.next_if_eq(&n).is_some() {
            return Some(false);
        }
        if self.extras.next_if_eq(&n).is_some() {
            return Some(true);
        }
        None
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Divisors of `n` in increasing order.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Total order used when sets must be sorted deterministically.
pub fn structural_cmp(a: &UPSet, b: &UPSet) -> Ordering {
    (a.period, &a.residues)
        .cmp(&(b.period, &b.residues))
        .then_with(|| a.holes.iter().cmp(b.holes.iter()))
        .then_with(|| a.extras.iter().cmp(b.extras.iter()))
}
