//! Specialization preorders and T_D verdicts for full and partial
//! enumeration, decided exactly for finite families and for single-schema
//! families of the shipped shapes.
//!
//! Partial enumeration uses the basis `U_F = {L′ : F ⊆ L′, |L′ ∩ C| = ∞}` for
//! finite `F ⊆ C`, with singleton opens for languages of finite `C`-trace.
//! Its specialization preorder orders infinite traces by inclusion.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, Param, Schema, Slot};
use crate::upset::{divisors, UPSet};

/// Number of schema instances listed with witnesses in verdicts.
pub const SAMPLE_INSTANCES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct Preorder {
    /// Live global indices of the window.
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    /// `le[a][b]`: window entry `a` is below entry `b`.
    pub le: Vec<Vec<bool>>,
    /// Kolmogorov classes (window positions sharing a point of the quotient).
    pub classes: Vec<Vec<usize>>,
    /// Window positions with finite `C`-trace (partial preorder only).
    pub isolated: Vec<usize>,
    /// What holds beyond the window.
    pub tail: String,
}

impl Preorder {
    fn position(&self, idx: usize) -> Option<usize> {
        self.indices.iter().position(|&i| i == idx)
    }

    /// `L_i ≤ L_j` for global indices inside the window.
    pub fn leq(&self, i: usize, j: usize) -> Option<bool> {
        Some(self.le[self.position(i)?][self.position(j)?])
    }

    /// `L_i < L_j`: below and not equivalent.
    pub fn strictly_below(&self, i: usize, j: usize) -> Option<bool> {
        Some(self.leq(i, j)? && !self.leq(j, i)?)
    }

    /// Class (as global indices) containing `idx`.
    pub fn class_of(&self, idx: usize) -> Option<Vec<usize>> {
        let p = self.position(idx)?;
        let class = self.classes.iter().find(|c| c.contains(&p))?;
        Some(class.iter().map(|&q| self.indices[q]).collect())
    }
}

fn window_indices(f: &Family, window: usize) -> Vec<usize> {
    let end = f.len().map_or(window, |n| n.min(window));
    (0..end).filter(|&i| f.is_live(i)).collect()
}

fn tail_full(f: &Family) -> String {
    match f.schemas() {
        [] => "finite family: the window is the whole family".into(),
        [Schema::CoSingleton { .. }] => {
            "coSingleton instances are pairwise incomparable and each lies below the union of the schema".into()
        }
        [Schema::Multiples { .. }] => "L_i ≤ L_j iff the parameter of L_j divides that of L_i".into(),
        [Schema::ArithProg { .. }] => "L_{i,d} ≤ L_{i',d'} iff d' | d, i ≥ i' and i ≡ i' (mod d')".into(),
        _ => "several schemas: only the window is described".into(),
    }
}

/// `L_i ≤ L_j ⟺ L_i ⊆ L_j` over the first `window` indices.
pub fn spec_preorder_full(f: &Family, window: usize) -> Result<Preorder> {
    let indices = window_indices(f, window);
    let langs: Vec<UPSet> = indices.iter().map(|&i| f.language_at(i)).collect::<Result<_>>()?;
    let le: Vec<Vec<bool>> = langs.iter().map(|a| langs.iter().map(|b| a.is_subset(b)).collect()).collect();
    let classes = classes_of(&le, &[]);
    Ok(Preorder {
        labels: indices.iter().map(|&i| f.label(i)).collect(),
        indices,
        le,
        classes,
        isolated: vec![],
        tail: tail_full(f),
    })
}

/// Partial-enumeration preorder for a fixed `c`: infinite traces ordered by
/// inclusion, finite traces isolated, classes of equal traces.
pub fn spec_preorder_partial(f: &Family, c: &UPSet, window: usize) -> Result<Preorder> {
    let indices = window_indices(f, window);
    let traces: Vec<UPSet> = indices.iter().map(|&i| f.language_at(i).map(|l| l.intersect(c))).collect::<Result<_>>()?;
    let n = traces.len();
    let isolated: Vec<usize> = (0..n).filter(|&a| !traces[a].is_infinite()).collect();
    let le: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a == b {
                        return true;
                    }
                    traces[a].is_infinite() && traces[b].is_infinite() && traces[a].is_subset(&traces[b])
                })
                .collect()
        })
        .collect();
    let classes = classes_of(&le, &isolated);
    Ok(Preorder {
        labels: indices.iter().map(|&i| f.label(i)).collect(),
        indices,
        le,
        classes,
        isolated,
        tail: format!("{}; traces taken on c = {c}", tail_full(f)),
    })
}

fn classes_of(le: &[Vec<bool>], isolated: &[usize]) -> Vec<Vec<usize>> {
    let n = le.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let class: Vec<usize> = if isolated.contains(&a) {
            vec![a]
        } else {
            (a..n).filter(|&b| !seen[b] && !isolated.contains(&b) && le[a][b] && le[b][a]).collect()
        };
        for &b in &class {
            seen[b] = true;
        }
        out.push(class);
    }
    out
}

/// A language that is a limit of strictly smaller ones.
#[derive(Clone, Debug, Serialize)]
pub struct LimitWitness {
    pub target: usize,
    pub target_label: String,
    /// The enumerated set: the target itself under full enumeration.
    pub c: UPSet,
    pub approximators: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TellTale {
    pub index: usize,
    pub label: String,
    pub set: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub identifiable: bool,
    pub reason: String,
    /// Positive full-enumeration verdicts: checked tell-tale sets.
    pub tell_tales: Vec<TellTale>,
    pub witness: Option<LimitWitness>,
    /// Finite deletions tried and whether the verdict survived them.
    pub invariance: Vec<(Vec<u64>, bool)>,
}

impl Verdict {
    fn yes(reason: impl Into<String>) -> Verdict {
        Verdict { identifiable: true, reason: reason.into(), tell_tales: vec![], witness: None, invariance: vec![] }
    }

    fn no(reason: impl Into<String>, witness: LimitWitness) -> Verdict {
        Verdict {
            identifiable: false,
            reason: reason.into(),
            tell_tales: vec![],
            witness: Some(witness),
            invariance: vec![],
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", if self.identifiable { "YES" } else { "NO" }, self.reason)?;
        if let Some(w) = &self.witness {
            write!(f, "; limit point {} on c = {}, approximated by {}", w.target_label, w.c, w.approximators)?;
        }
        for t in &self.tell_tales {
            write!(f, "; D[{}] = {:?}", t.label, t.set)?;
        }
        Ok(())
    }
}

fn single_schema(f: &Family) -> Result<Option<&Schema>> {
    match f.schemas() {
        [] => Ok(None),
        [s] => Ok(Some(s)),
        _ => Err(Error::Unsupported("topology checks support at most one schema per family".into())),
    }
}

/// Nontrivial coSingleton parameters: `indexSet ∩ (base ∖ extras)`.
fn nontrivial_params(s: &Schema) -> Option<UPSet> {
    match s {
        Schema::CoSingleton { base, index_set, extras } => {
            Some(index_set.intersect(&base.without(extras.iter().copied())))
        }
        _ => None,
    }
}

/// Global index of an instance equal to the schema union, if one exists.
fn trivial_instance(f: &Family, s: &Schema) -> Option<usize> {
    let Schema::CoSingleton { index_set, .. } = s else { return None };
    let trivial = index_set.difference(&nontrivial_params(s)?);
    let i = trivial.at_or_after(0)?;
    f.index_of_param(0, Param::Point(i))
}

/// Proper subsets of `l` containing `d`.
enum Candidates {
    Finite(Vec<UPSet>),
    /// Infinitely many; adding `escape` to `d` excludes all but finitely many.
    Infinite { escape: Option<u64> },
}

fn candidates(f: &Family, l: &UPSet, d: &BTreeSet<u64>) -> Candidates {
    let proper = |x: &UPSet| d.iter().all(|&v| x.member(v)) && x.is_subset(l) && x != l;
    let mut found: Vec<UPSet> = f.explicit().iter().map(|n| n.set.clone()).filter(|x| proper(x)).collect();
    for s in f.schemas() {
        match s {
            Schema::CoSingleton { base, extras, .. } => {
                let u = base.with(extras.iter().copied());
                if d.iter().any(|&v| !u.member(v)) {
                    continue;
                }
                let a = nontrivial_params(s).expect("coSingleton");
                if u.is_subset(l) {
                    // Every nontrivial instance outside `d` lies strictly below `l`.
                    if a.difference(&UPSet::finite(d.iter().copied())).is_infinite() {
                        return Candidates::Infinite { escape: l.difference(&u).at_or_after(0) };
                    }
                    found.extend(a.iter().filter(|i| !d.contains(i)).map(|i| u.without([i])).filter(|x| proper(x)));
                } else if u.difference(l).len() == Some(1) {
                    let i = u.difference(l).nth(0).expect("one point");
                    if a.member(i) && proper(&u.without([i])) {
                        found.push(u.without([i]));
                    }
                }
                if trivial_instance(f, s).is_some() && proper(&u) {
                    found.push(u);
                }
            }
            Schema::Multiples { removed } => {
                let Some(&x) = d.iter().find(|&&v| v > 0) else {
                    return Candidates::Infinite { escape: l.at_or_after(1) };
                };
                found.extend(
                    divisors(x).into_iter().map(|m| UPSet::multiples(m).without(removed.iter().copied())).filter(|x| proper(x)),
                );
            }
            Schema::ArithProg { removed } => {
                let pos: Vec<u64> = d.iter().copied().filter(|&v| v > 0).take(2).collect();
                if pos.len() < 2 {
                    let next = l.iter_from(1).find(|v| !d.contains(v));
                    return Candidates::Infinite { escape: next };
                }
                let (a, b) = (pos[0], pos[1]);
                for step in divisors(b - a) {
                    let mut start = a % step;
                    if start == 0 {
                        start = step;
                    }
                    while start <= a {
                        let x = UPSet::arith(start, step).without(removed.iter().copied());
                        if proper(&x) {
                            found.push(x);
                        }
                        start += step;
                    }
                }
            }
        }
    }
    Candidates::Finite(found)
}

/// A finite `D ⊆ l` contained in no proper subset of `l` from the family, or
/// `None` when `l` is a limit of proper subsets. A string of `l` outside a
/// coSingleton union is taken first: it excludes every instance at once.
pub fn tell_tale(f: &Family, l: &UPSet) -> Option<Vec<u64>> {
    let mut d: BTreeSet<u64> = BTreeSet::new();
    for s in f.schemas() {
        if let Some(u) = s.cosingleton_union() {
            if let Some(x) = l.difference(&u).at_or_after(0) {
                d.insert(x);
            }
        }
    }
    loop {
        match candidates(f, l, &d) {
            Candidates::Infinite { escape: Some(x) } if !d.contains(&x) => {
                d.insert(x);
            }
            Candidates::Infinite { .. } => return None,
            Candidates::Finite(v) if v.is_empty() => return Some(d.into_iter().collect()),
            Candidates::Finite(v) => {
                for sub in v {
                    let w = l.difference(&sub).at_or_after(0).expect("proper subset leaves a witness");
                    d.insert(w);
                }
            }
        }
    }
}

/// Exact check of a tell-tale: `D ⊆ L` and no proper subset in the family contains `D`.
pub fn is_tell_tale(f: &Family, l: &UPSet, d: &[u64]) -> bool {
    let set: BTreeSet<u64> = d.iter().copied().collect();
    set.iter().all(|&x| l.member(x)) && matches!(candidates(f, l, &set), Candidates::Finite(v) if v.is_empty())
}

fn tell_tale_entry(f: &Family, idx: usize) -> Result<std::result::Result<TellTale, LimitWitness>> {
    let l = f.language_at(idx)?;
    Ok(match tell_tale(f, &l) {
        Some(set) => Ok(TellTale { index: idx, label: f.label(idx), set }),
        None => Err(LimitWitness {
            target: idx,
            target_label: f.label(idx),
            c: l,
            approximators: "the coSingleton instances L_i with i outside any finite set".into(),
        }),
    })
}

/// Angluin's condition under full enumeration.
pub fn angluin_full(f: &Family) -> Result<Verdict> {
    let schema = single_schema(f)?;
    let mut checked: Vec<usize> = (0..f.explicit().len()).filter(|&i| f.is_live(i)).collect();
    if let Some(s) = schema {
        if let Some(t) = trivial_instance(f, s) {
            checked.push(t);
        }
        let sample = (f.explicit().len()..).filter(|&i| f.is_live(i)).take(SAMPLE_INSTANCES);
        checked.extend(sample);
    }
    checked.sort_unstable();
    checked.dedup();
    let mut tell_tales = Vec::new();
    for idx in checked {
        match tell_tale_entry(f, idx)? {
            Ok(t) => tell_tales.push(t),
            Err(w) => {
                return Ok(Verdict::no(
                    format!("{} has no tell-tale: every finite subset lies in a proper subset from the family", w.target_label),
                    w,
                ))
            }
        }
    }
    let reason = match schema {
        None => "finite family: each language is separated from its finitely many proper subsets",
        Some(Schema::CoSingleton { .. }) => {
            "instances are pairwise incomparable and the schema union is not a member (or has finitely many instances below it)"
        }
        Some(Schema::Multiples { .. }) => "any positive member leaves finitely many proper subsets to exclude",
        Some(Schema::ArithProg { .. }) => "any two members leave finitely many proper subsets to exclude",
    };
    Ok(Verdict { tell_tales, ..Verdict::yes(reason) })
}

/// Whether `target` is a limit point on `c`: for every finite `F ⊆ L ∩ c`
/// some family language `L′ ⊇ F` has infinite trace strictly inside `L ∩ c`.
/// `c` is intersected with the target first.
pub fn fails_td_partial(f: &Family, c: &UPSet, target: usize) -> Result<Option<LimitWitness>> {
    let l = f.language_at(target)?;
    let trace = l.intersect(c);
    if !trace.is_infinite() {
        return Err(Error::Domain(format!("{} has finite trace on c", f.label(target))));
    }
    let Some(s) = single_schema(f)? else { return Ok(None) };
    let Some(a) = nontrivial_params(s) else {
        // Multiples and progressions: one or two strings of the trace leave
        // finitely many candidates.
        return Ok(None);
    };
    let u = s.cosingleton_union().expect("coSingleton");
    let approx = a.intersect(&trace);
    // With `c ⊆ L`, the instance traces are `(U ∖ {i}) ∩ c`.
    if trace.is_subset(&u) && approx.is_infinite() {
        Ok(Some(LimitWitness {
            target,
            target_label: f.label(target),
            c: trace,
            approximators: format!("instances L_i with i in {approx} beyond any finite set"),
        }))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub enum Catalog {
    /// Complete case analysis for the shipped schema shapes.
    SchemaAuto,
    /// Check these sets against the first `window` languages.
    Explicit { sets: Vec<UPSet>, window: usize },
}

/// Identifiability under partial enumeration.
pub fn identifiable_partial(f: &Family, catalog: &Catalog) -> Result<Verdict> {
    match catalog {
        Catalog::SchemaAuto => {
            let Some(s) = single_schema(f)? else {
                return Ok(Verdict::yes("finite family: every Kolmogorov quotient of a finite space is T_D"));
            };
            let Some(a) = nontrivial_params(s) else {
                return Ok(Verdict::yes(format!(
                    "{} family: the gcd learner identifies every C (C ⊆ M_t ⊆ K from some step on)",
                    s.kind()
                )));
            };
            if !a.is_infinite() {
                return Ok(Verdict::yes("finitely many distinct languages"));
            }
            let u = s.cosingleton_union().expect("coSingleton");
            // Any language meeting the nontrivial parameters infinitely often is
            // a limit point on its trace inside the schema union.
            let explicit_first =
                (0..f.explicit().len()).filter(|&i| f.is_live(i)).chain(f.explicit().len()..f.explicit().len() + 64);
            for idx in explicit_first {
                let Ok(l) = f.language_at(idx) else { continue };
                let c = l.intersect(&u);
                if c.intersect(&a).is_infinite() {
                    let w = fails_td_partial(f, &c, idx)?.expect("trace inside the union meets infinitely many parameters");
                    return Ok(Verdict::no(
                        format!("{} is a limit point of coSingleton instances on c = {}", f.label(idx), w.c),
                        w,
                    ));
                }
            }
            Err(Error::Unsupported("no witness found in the first 64 instances".into()))
        }
        Catalog::Explicit { sets, window } => {
            let targets = window_indices(f, *window);
            for c in sets {
                for &idx in &targets {
                    let l = f.language_at(idx)?;
                    if !l.intersect(c).is_infinite() {
                        continue;
                    }
                    if let Some(w) = fails_td_partial(f, c, idx)? {
                        return Ok(Verdict::no(format!("{} is a limit point on c = {}", f.label(idx), w.c), w));
                    }
                }
            }
            Ok(Verdict::yes(format!("no limit point among {} targets for {} catalog sets", targets.len(), sets.len())))
        }
    }
}

/// Re-runs the automatic partial verdict after each finite deletion and
/// records whether it is unchanged.
pub fn with_invariance(f: &Family, mut v: Verdict, deletions: &[Vec<u64>]) -> Result<Verdict> {
    for w in deletions {
        let again = identifiable_partial(&f.remove_strings(w), &Catalog::SchemaAuto)?;
        v.invariance.push((w.clone(), again.identifiable == v.identifiable));
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: String,
    pub full: Verdict,
    pub partial: Verdict,
}

/// Full and partial verdicts for each family.
pub fn verdict_table(families: &[Family]) -> Result<Vec<TableRow>> {
    families
        .iter()
        .map(|f| {
            Ok(TableRow {
                family: f.name().to_string(),
                full: angluin_full(f)?,
                partial: identifiable_partial(f, &Catalog::SchemaAuto)?,
            })
        })
        .collect()
}

/// Plain-text table: family, full, partial, and the witness or reason.
pub fn render_table(rows: &[TableRow]) -> String {
    let yn = |b: bool| if b { "YES" } else { "NO" };
    let width = rows.iter().map(|r| r.family.len()).max().unwrap_or(6).max(6);
    let mut out = format!("{:<width$}  full  partial  note\n", "family");
    for r in rows {
        let note = match (&r.full.witness, &r.partial.witness) {
            (Some(w), _) => format!("full fails at {}", w.target_label),
            (None, Some(w)) => format!("partial fails at {} on c = {}", w.target_label, w.c),
            (None, None) => r.partial.reason.clone(),
        };
        out.push_str(&format!(
            "{:<width$}  {:<4}  {:<7}  {}\n",
            r.family,
            yn(r.full.identifiable),
            yn(r.partial.identifiable),
            note
        ));
    }
    out
}

/// Slot description used by witnesses.
pub fn describe(f: &Family, idx: usize) -> String {
    match f.locate(idx) {
        Ok(Slot::Explicit(_)) => format!("explicit {}", f.label(idx)),
        Ok(Slot::Instance { j, .. }) => format!("instance {j}: {}", f.label(idx)),
        Err(_) => format!("#{idx}"),
    }
}
