//! Finitely presented, ordered language collections.
//!
//! A family is a list of explicit languages followed by schema instances.
//! Global indices are 0-based. The only order rule is `explicit-first`:
//! indices `0..E` are the explicit entries, and index `E + j·S + s` is
//! instance `j` of schema `s` (round-robin over the `S` schemas).
//!
//! Instance parameters, in instance order:
//! - `coSingleton`: the `j`-th smallest element of `indexSet`;
//!   `L_i = (base ∖ {i}) ∪ extras`.
//! - `multiples`: `k = j + 1`; `L_k = kℕ`.
//! - `arithProg`: Cantor pairing of `(i − 1, d − 1)`, both `i, d ≥ 1`;
//!   `L_{i,d} = {i + kd : k ≥ 0}`.
//!
//! `multiples` and `arithProg` carry a `removed` set produced by
//! [`Family::remove_strings`]; `coSingleton` absorbs removals into `base`
//! and `extras`.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::upset::{divisors, UPSet};

pub const FAMILY_FORMAT_VERSION: u32 = 1;

/// Window of global indices scanned for duplicates when a family is built.
pub const DUPLICATE_SCAN_WINDOW: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Schema {
    #[serde(rename = "coSingleton")]
    CoSingleton {
        base: UPSet,
        #[serde(rename = "indexSet")]
        index_set: UPSet,
        #[serde(default)]
        extras: Vec<u64>,
    },
    #[serde(rename = "multiples")]
    Multiples {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        removed: Vec<u64>,
    },
    #[serde(rename = "arithProg")]
    ArithProg {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        removed: Vec<u64>,
    },
}

/// Instance parameter of a schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Point(u64),
    Pair { i: u64, d: u64 },
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Point(i) => write!(f, "{i}"),
            Param::Pair { i, d } => write!(f, "({i},{d})"),
        }
    }
}

/// Where a global index points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Explicit(usize),
    Instance { schema: usize, j: u64, param: Param },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSet {
    pub name: String,
    pub set: UPSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum OrderRule {
    #[default]
    #[serde(rename = "explicit-first")]
    ExplicitFirst,
}

/// Serialized family description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub explicit: Vec<NamedSet>,
    #[serde(default)]
    pub schemas: Vec<Schema>,
    #[serde(default)]
    pub order: OrderRule,
    #[serde(default, rename = "allowDuplicates")]
    pub allow_duplicates: bool,
    /// Set on families produced by finite-deletion surgery: later duplicates are dropped.
    #[serde(default, rename = "dropDuplicates")]
    pub drop_duplicates: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    name: String,
    explicit: Vec<NamedSet>,
    schemas: Vec<Schema>,
    allow_duplicates: bool,
    drop_duplicates: bool,
    encoding: Option<String>,
}

/// Names accepted by [`Family::builtin`].
pub const BUILTINS: &[&str] = &[
    "ex1-cosingleton-with-N",
    "ex2-specials",
    "ex3-cosingleton",
    "ex5-finite",
    "multiples",
    "arithprog",
];

/// Encoding used by `ex2-specials`: −1 ↦ 0, −2 ↦ 1, n ↦ n + 2.
pub mod specials {
    pub const MINUS_ONE: u64 = 0;
    pub const MINUS_TWO: u64 = 1;
    pub const SHIFT: u64 = 2;

    pub fn encode(n: i64) -> u64 {
        match n {
            -1 => MINUS_ONE,
            -2 => MINUS_TWO,
            n if n >= 0 => n as u64 + SHIFT,
            _ => panic!("no encoding for {n}"),
        }
    }

    pub fn decode(x: u64) -> i64 {
        match x {
            MINUS_ONE => -1,
            MINUS_TWO => -2,
            x => (x - SHIFT) as i64,
        }
    }
}

pub fn cantor_pair(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let w = ((((8 * z + 1) as f64).sqrt() as u64).saturating_sub(1)) / 2;
    // Correct any floating point drift.
    let mut w = w;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

impl Schema {
    pub fn kind(&self) -> &'static str {
        match self {
            Schema::CoSingleton { .. } => "coSingleton",
            Schema::Multiples { .. } => "multiples",
            Schema::ArithProg { .. } => "arithProg",
        }
    }

    pub fn param(&self, j: u64) -> Result<Param> {
        match self {
            Schema::CoSingleton { index_set, .. } => Ok(Param::Point(index_set.nth(j)?)),
            Schema::Multiples { .. } => Ok(Param::Point(j + 1)),
            Schema::ArithProg { .. } => {
                let (x, y) = cantor_unpair(j);
                Ok(Param::Pair { i: x + 1, d: y + 1 })
            }
        }
    }

    /// Instance number of a parameter, if the parameter is valid.
    pub fn instance_of(&self, p: Param) -> Option<u64> {
        match (self, p) {
            (Schema::CoSingleton { index_set, .. }, Param::Point(i)) => {
                index_set.member(i).then(|| index_set.rank(i))
            }
            (Schema::Multiples { .. }, Param::Point(k)) if k >= 1 => Some(k - 1),
            (Schema::ArithProg { .. }, Param::Pair { i, d }) if i >= 1 && d >= 1 => {
                Some(cantor_pair(i - 1, d - 1))
            }
            _ => None,
        }
    }

    pub fn language(&self, p: Param) -> UPSet {
        match (self, p) {
            (Schema::CoSingleton { base, extras, .. }, Param::Point(i)) => {
                base.without([i]).with(extras.iter().copied())
            }
            (Schema::Multiples { removed }, Param::Point(k)) => {
                UPSet::multiples(k).without(removed.iter().copied())
            }
            (Schema::ArithProg { removed }, Param::Pair { i, d }) => {
                UPSet::arith(i, d).without(removed.iter().copied())
            }
            _ => panic!("parameter {p:?} does not fit schema {}", self.kind()),
        }
    }

    /// Union of every instance for coSingleton schemas: `base ∪ extras`.
    pub fn cosingleton_union(&self) -> Option<UPSet> {
        match self {
            Schema::CoSingleton { base, extras, .. } => Some(base.with(extras.iter().copied())),
            _ => None,
        }
    }

    /// Whether parameter `i` actually removes something (`i ∈ base ∖ extras`).
    pub fn cosingleton_nontrivial(&self, i: u64) -> bool {
        match self {
            Schema::CoSingleton { base, extras, .. } => {
                base.member(i) && extras.binary_search(&i).is_err()
            }
            _ => false,
        }
    }

    fn removed(&self) -> &[u64] {
        match self {
            Schema::Multiples { removed } | Schema::ArithProg { removed } => removed,
            Schema::CoSingleton { .. } => &[],
        }
    }

    /// Smallest instance number whose language equals `x`.
    fn first_instance_equal(&self, x: &UPSet) -> Option<u64> {
        match self {
            Schema::CoSingleton { base, index_set, extras } => {
                let u = base.with(extras.iter().copied());
                if *x == u {
                    // Trivial parameters: outside base ∖ extras.
                    let nontrivial = base.without(extras.iter().copied());
                    let trivial = index_set.difference(&nontrivial);
                    let t = trivial.at_or_after(0)?;
                    return Some(index_set.rank(t));
                }
                if !x.is_subset(&u) {
                    return None;
                }
                let d = u.difference(x);
                match d.len() {
                    Some(1) => {
                        let i = d.nth(0).ok()?;
                        (index_set.member(i) && self.cosingleton_nontrivial(i))
                            .then(|| index_set.rank(i))
                    }
                    _ => None,
                }
            }
            Schema::Multiples { removed } => {
                if x.residues() != [0] {
                    return None;
                }
                let k = x.period();
                (UPSet::multiples(k).without(removed.iter().copied()) == *x).then_some(k - 1)
            }
            Schema::ArithProg { removed } => {
                if x.residues().len() != 1 {
                    return None;
                }
                let d = x.period();
                let m = x.nth(0).ok()?;
                if m == 0 || UPSet::arith(m, d).without(removed.iter().copied()) != *x {
                    return None;
                }
                let mut i = m;
                while i > d && removed.binary_search(&(i - d)).is_ok() {
                    i -= d;
                }
                Some(cantor_pair(i - 1, d - 1))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let Schema::CoSingleton { index_set, extras, .. } = self {
            if !index_set.is_infinite() {
                return Err(Error::Config(
                    "coSingleton indexSet must be infinite; list finite families explicitly".into(),
                ));
            }
            if extras.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("coSingleton extras must be strictly increasing".into()));
            }
        }
        if self.removed().windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("removed strings must be strictly increasing".into()));
        }
        Ok(())
    }
}

impl Family {
    pub fn new(
        name: impl Into<String>,
        explicit: Vec<NamedSet>,
        schemas: Vec<Schema>,
        allow_duplicates: bool,
    ) -> Result<Family> {
        let f = Family {
            name: name.into(),
            explicit,
            schemas,
            allow_duplicates,
            drop_duplicates: false,
            encoding: None,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_config(cfg: FamilyConfig) -> Result<Family> {
        if cfg.version != FAMILY_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "family format version {} not supported (expected {FAMILY_FORMAT_VERSION})",
                cfg.version
            )));
        }
        let f = Family {
            name: cfg.name,
            explicit: cfg.explicit,
            schemas: cfg.schemas,
            allow_duplicates: cfg.allow_duplicates,
            drop_duplicates: cfg.drop_duplicates,
            encoding: cfg.encoding,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn to_config(&self) -> FamilyConfig {
        FamilyConfig {
            version: FAMILY_FORMAT_VERSION,
            name: self.name.clone(),
            explicit: self.explicit.clone(),
            schemas: self.schemas.clone(),
            order: OrderRule::ExplicitFirst,
            allow_duplicates: self.allow_duplicates,
            drop_duplicates: self.drop_duplicates,
            encoding: self.encoding.clone(),
        }
    }

    /// Parses either a builtin name or a JSON family description.
    pub fn parse(text: &str) -> Result<Family> {
        let t = text.trim();
        if t.starts_with('{') {
            let cfg: FamilyConfig =
                serde_json::from_str(t).map_err(|e| Error::Config(format!("family: {e}")))?;
            Family::from_config(cfg)
        } else {
            Family::builtin(t.trim_matches('"'))
        }
    }

    fn validate(&self) -> Result<()> {
        for s in &self.schemas {
            s.validate()?;
        }
        if self.explicit.is_empty() && self.schemas.is_empty() {
            return Err(Error::Config("family has no languages".into()));
        }
        if !self.allow_duplicates && !self.drop_duplicates {
            for s in &self.schemas {
                if let Schema::CoSingleton { base, index_set, extras } = s {
                    let nontrivial = base.without(extras.iter().copied());
                    if index_set.difference(&nontrivial).len().is_none_or(|n| n > 1) {
                        return Err(Error::Config(
                            "coSingleton schema repeats its base language; set allowDuplicates".into(),
                        ));
                    }
                }
            }
            let window = self.len().unwrap_or(DUPLICATE_SCAN_WINDOW).min(DUPLICATE_SCAN_WINDOW);
            for g in 0..window {
                if let Some(e) = self.earlier_duplicate(g) {
                    return Err(Error::Config(format!(
                        "languages {e} and {g} are equal; set allowDuplicates"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn builtin(name: &str) -> Result<Family> {
        let ge1 = UPSet::cofinite([0]);
        let named = |n: &str, s: UPSet| NamedSet { name: n.into(), set: s };
        let mut f = match name {
            "ex1-cosingleton-with-N" => Family::new(
                name,
                vec![named("N", UPSet::naturals())],
                vec![Schema::CoSingleton { base: UPSet::naturals(), index_set: ge1, extras: vec![] }],
                false,
            )?,
            "ex2-specials" => {
                use specials::*;
                let shifted = UPSet::cofinite([MINUS_ONE, MINUS_TWO]);
                Family::new(
                    name,
                    vec![named("N+{-1}", shifted.with([MINUS_ONE]))],
                    vec![Schema::CoSingleton {
                        base: shifted,
                        index_set: UPSet::naturals().minus_below(1 + SHIFT),
                        extras: vec![MINUS_TWO],
                    }],
                    false,
                )?
            }
            "ex3-cosingleton" => Family::new(
                name,
                vec![],
                vec![Schema::CoSingleton { base: UPSet::naturals(), index_set: ge1, extras: vec![] }],
                false,
            )?,
            "ex5-finite" => Family::new(
                name,
                vec![
                    named("N", UPSet::naturals()),
                    named("evens", UPSet::evens()),
                    named("multiples:4", UPSet::multiples(4)),
                    named("odds+{0}", UPSet::periodic(2, [1]).with([0])),
                    named("N-{0,1,2}", UPSet::cofinite([0, 1, 2])),
                ],
                vec![],
                false,
            )?,
            "multiples" => Family::new(name, vec![], vec![Schema::Multiples { removed: vec![] }], false)?,
            "arithprog" => Family::new(name, vec![], vec![Schema::ArithProg { removed: vec![] }], false)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown builtin family `{other}`; known: {}",
                    BUILTINS.join(", ")
                )))
            }
        };
        if name == "ex2-specials" {
            f.encoding = Some("-1 -> 0, -2 -> 1, n -> n+2".into());
        }
        Ok(f)
    }

    pub fn renamed(&self, name: &str) -> Family {
        Family { name: name.into(), ..self.clone() }
    }

    // ----- shape --------------------------------------------------------

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn explicit(&self) -> &[NamedSet] {
        &self.explicit
    }

    pub fn schemas(&self) -> &[Schema] {
        &self.schemas
    }

    pub fn encoding(&self) -> Option<&str> {
        self.encoding.as_deref()
    }

    pub fn drops_duplicates(&self) -> bool {
        self.drop_duplicates
    }

    /// Number of indices for finite families; `None` when schema-generated.
    pub fn len(&self) -> Option<usize> {
        self.schemas.is_empty().then_some(self.explicit.len())
    }

    pub fn is_finite(&self) -> bool {
        self.schemas.is_empty()
    }

    pub fn global_index(&self, schema: usize, j: u64) -> usize {
        self.explicit.len() + j as usize * self.schemas.len() + schema
    }

    /// Global index of a schema parameter.
    pub fn index_of_param(&self, schema: usize, p: Param) -> Option<usize> {
        self.schemas[schema].instance_of(p).map(|j| self.global_index(schema, j))
    }

    pub fn locate(&self, idx: usize) -> Result<Slot> {
        let e = self.explicit.len();
        if idx < e {
            return Ok(Slot::Explicit(idx));
        }
        if self.schemas.is_empty() {
            return Err(Error::Range(format!("index {idx} beyond finite family of size {e}")));
        }
        let s = (idx - e) % self.schemas.len();
        let j = ((idx - e) / self.schemas.len()) as u64;
        let param = self.schemas[s].param(j)?;
        Ok(Slot::Instance { schema: s, j, param })
    }

    /// Language at a global index, ignoring duplicate dropping.
    pub fn raw_language_at(&self, idx: usize) -> Result<UPSet> {
        Ok(match self.locate(idx)? {
            Slot::Explicit(e) => self.explicit[e].set.clone(),
            Slot::Instance { schema, param, .. } => self.schemas[schema].language(param),
        })
    }

    pub fn language_at(&self, idx: usize) -> Result<UPSet> {
        let l = self.raw_language_at(idx)?;
        if self.drop_duplicates {
            if let Some(e) = self.first_index_equal(&l).filter(|&e| e < idx) {
                return Err(Error::Range(format!("index {idx} was merged into index {e}")));
            }
        }
        Ok(l)
    }

    pub fn is_live(&self, idx: usize) -> bool {
        self.language_at(idx).is_ok()
    }

    /// Human-readable label of a global index.
    pub fn label(&self, idx: usize) -> String {
        match self.locate(idx) {
            Ok(Slot::Explicit(e)) => self.explicit[e].name.clone(),
            Ok(Slot::Instance { schema, param, .. }) => {
                format!("{}[{}]", self.schemas[schema].kind(), param)
            }
            Err(_) => format!("#{idx}"),
        }
    }

    /// Smallest global index whose (raw) language equals `x`.
    pub fn first_index_equal(&self, x: &UPSet) -> Option<usize> {
        let mut best = self.explicit.iter().position(|n| n.set == *x);
        for (s, schema) in self.schemas.iter().enumerate() {
            if let Some(j) = schema.first_instance_equal(x) {
                let g = self.global_index(s, j);
                best = Some(best.map_or(g, |b: usize| b.min(g)));
            }
        }
        best
    }

    /// Earlier index with the same language, if any.
    pub fn earlier_duplicate(&self, idx: usize) -> Option<usize> {
        let l = self.raw_language_at(idx).ok()?;
        self.first_index_equal(&l).filter(|&e| e < idx)
    }

    // ----- surgery ------------------------------------------------------

    /// Replaces every language `L` by `L ∖ W`. Indices are preserved; an index
    /// whose new language equals an earlier one is dropped.
    pub fn remove_strings(&self, w: &[u64]) -> Family {
        let mut w: Vec<u64> = w.to_vec();
        w.sort_unstable();
        w.dedup();
        if w.is_empty() {
            return self.clone();
        }
        let explicit = self
            .explicit
            .iter()
            .map(|n| NamedSet { name: n.name.clone(), set: n.set.without(w.iter().copied()) })
            .collect();
        let merge = |r: &[u64]| {
            let mut v: Vec<u64> = r.iter().chain(&w).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let schemas = self
            .schemas
            .iter()
            .map(|s| match s {
                Schema::CoSingleton { base, index_set, extras } => Schema::CoSingleton {
                    base: base.without(w.iter().copied()),
                    index_set: index_set.clone(),
                    extras: extras.iter().copied().filter(|e| w.binary_search(e).is_err()).collect(),
                },
                Schema::Multiples { removed } => Schema::Multiples { removed: merge(removed) },
                Schema::ArithProg { removed } => Schema::ArithProg { removed: merge(removed) },
            })
            .collect();
        Family {
            name: self.name.clone(),
            explicit,
            schemas,
            allow_duplicates: self.allow_duplicates,
            drop_duplicates: !self.allow_duplicates,
            encoding: self.encoding.clone(),
        }
    }

    // ----- consistency --------------------------------------------------

    /// Fresh observation tracker for this family.
    pub fn observe(&self) -> Seen {
        Seen::new(self)
    }

    pub fn is_consistent(&self, idx: usize, seen: &Seen) -> bool {
        match self.locate(idx) {
            Ok(Slot::Explicit(e)) => seen.source_alive[e],
            Ok(Slot::Instance { schema, param, .. }) => {
                self.instance_consistent(schema, param, seen)
            }
            Err(_) => false,
        }
    }

    fn instance_consistent(&self, s: usize, p: Param, seen: &Seen) -> bool {
        if !seen.source_alive[self.explicit.len() + s] {
            return false;
        }
        match (&self.schemas[s], p) {
            (schema @ Schema::CoSingleton { .. }, Param::Point(i)) => {
                !(seen.contains(i) && schema.cosingleton_nontrivial(i))
            }
            (Schema::Multiples { .. }, Param::Point(k)) => seen.gcd_all.is_multiple_of(k),
            (Schema::ArithProg { .. }, Param::Pair { i, d }) => match seen.min {
                None => true,
                Some(a) => i <= a && (a - i) % d == 0 && seen.gcd_diff.is_multiple_of(d),
            },
            _ => false,
        }
    }

    /// Smallest consistent (and live) global index strictly greater than `after`.
    pub fn next_consistent(&self, after: Option<usize>, seen: &Seen) -> Option<usize> {
        let mut cur = after;
        loop {
            let g = self.next_consistent_raw(cur, seen)?;
            if self.drop_duplicates && self.earlier_duplicate(g).is_some() {
                cur = Some(g);
                continue;
            }
            return Some(g);
        }
    }

    fn next_consistent_raw(&self, after: Option<usize>, seen: &Seen) -> Option<usize> {
        let start = after.map_or(0, |a| a + 1);
        let e = self.explicit.len();
        let mut best: Option<usize> = None;
        for idx in start.min(e)..e {
            if seen.source_alive[idx] {
                best = Some(idx);
                break;
            }
        }
        if best.is_some() {
            return best;
        }
        let ns = self.schemas.len();
        for s in 0..ns {
            if !seen.source_alive[e + s] {
                continue;
            }
            // Smallest instance number j with global index ≥ start.
            let j0 = if start <= e + s { 0 } else { (start - e - s).div_ceil(ns) } as u64;
            if let Some(j) = self.schema_next(s, j0, seen) {
                let g = self.global_index(s, j);
                best = Some(best.map_or(g, |b| b.min(g)));
            }
        }
        best
    }

    /// Smallest consistent instance number `≥ j0` of schema `s`.
    fn schema_next(&self, s: usize, j0: u64, seen: &Seen) -> Option<u64> {
        match &self.schemas[s] {
            schema @ Schema::CoSingleton { index_set, .. } => {
                let mut j = j0;
                loop {
                    let i = index_set.nth(j).ok()?;
                    if !(seen.contains(i) && schema.cosingleton_nontrivial(i)) {
                        return Some(j);
                    }
                    j += 1;
                }
            }
            Schema::Multiples { .. } => {
                if seen.gcd_all == 0 {
                    return Some(j0);
                }
                divisors(seen.gcd_all).into_iter().map(|k| k - 1).find(|&j| j >= j0)
            }
            Schema::ArithProg { .. } => {
                let Some(a) = seen.min else { return Some(j0) };
                if seen.gcd_diff > 0 {
                    let mut best: Option<u64> = None;
                    for d in divisors(seen.gcd_diff) {
                        let mut i = a % d;
                        if i == 0 {
                            i = d;
                        }
                        while i <= a {
                            let j = cantor_pair(i - 1, d - 1);
                            if j >= j0 && best.is_none_or(|b| j < b) {
                                best = Some(j);
                            }
                            i += d;
                        }
                    }
                    best
                } else {
                    // Only one distinct value seen: every d works for i ≡ a mod d, i ≤ a.
                    let mut j = j0;
                    loop {
                        let (x, y) = cantor_unpair(j);
                        let (i, d) = (x + 1, y + 1);
                        if i <= a && (a - i) % d == 0 {
                            return Some(j);
                        }
                        j += 1;
                    }
                }
            }
        }
    }

    /// The first `m` consistent languages in family order.
    pub fn consistent_prefix(&self, seen: &[u64], m: usize) -> Vec<(usize, UPSet)> {
        let mut tracker = self.observe();
        for &x in seen {
            tracker.insert(self, x);
        }
        let mut out = Vec::with_capacity(m);
        let mut cur = None;
        while out.len() < m {
            match self.next_consistent(cur, &tracker) {
                Some(g) => {
                    out.push((g, self.raw_language_at(g).expect("consistent index is covered")));
                    cur = Some(g);
                }
                None => break,
            }
        }
        out
    }
}

/// Observed strings plus the per-source summaries consistency needs.
#[derive(Clone, Debug)]
pub struct Seen {
    set: HashSet<u64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    /// gcd of all observed values (0 when only 0 has been seen).
    pub gcd_all: u64,
    /// gcd of differences from the minimum.
    pub gcd_diff: u64,
    /// Per source (explicit entries, then schemas): can any language of it still be consistent.
    source_alive: Vec<bool>,
    unions: Vec<Option<UPSet>>,
}

impl Seen {
    fn new(f: &Family) -> Seen {
        let n = f.explicit.len() + f.schemas.len();
        Seen {
            set: HashSet::new(),
            min: None,
            max: None,
            gcd_all: 0,
            gcd_diff: 0,
            source_alive: vec![true; n],
            unions: f.schemas.iter().map(|s| s.cosingleton_union()).collect(),
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        self.set.contains(&x)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn source_alive(&self, source: usize) -> bool {
        self.source_alive[source]
    }

    /// Records `x`; returns false when it was already present.
    pub fn insert(&mut self, f: &Family, x: u64) -> bool {
        if !self.set.insert(x) {
            return false;
        }
        self.gcd_all = self.gcd_all.gcd(&x);
        match self.min {
            None => self.min = Some(x),
            Some(a) if x < a => {
                self.gcd_diff = self.gcd_diff.gcd(&(a - x));
                self.min = Some(x);
            }
            Some(a) => self.gcd_diff = self.gcd_diff.gcd(&(x - a)),
        }
        self.max = Some(self.max.map_or(x, |m| m.max(x)));
        let e = f.explicit.len();
        for (k, n) in f.explicit.iter().enumerate() {
            if self.source_alive[k] && !n.set.member(x) {
                self.source_alive[k] = false;
            }
        }
        for (s, schema) in f.schemas.iter().enumerate() {
            let alive = &mut self.source_alive[e + s];
            if !*alive {
                continue;
            }
            match schema {
                Schema::CoSingleton { .. } => {
                    if !self.unions[s].as_ref().unwrap().member(x) {
                        *alive = false;
                    }
                }
                Schema::Multiples { removed } | Schema::ArithProg { removed } => {
                    if removed.binary_search(&x).is_ok() {
                        *alive = false;
                    }
                }
            }
        }
        true
    }
}
