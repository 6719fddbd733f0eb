//! Learners driven through the engine, checked against brute-force oracles.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use limitgen::adversary::{Adversary, AdversarySpec, CDecl, FixedEnumerator, History, Policy, Recycler};
use limitgen::engine::{analyze, run, RunOptions, Transcript};
use limitgen::family::NamedSet;
use limitgen::learner::{
    Alg1Core, Algorithm1, ChainLearner, ChainMode, GcdLearner, Learner, LearnerKind, LearnerSpec, Move,
    PodLearner, Relation, Schedule, WeakDensity,
};
use limitgen::{Family, Result, UPSet};

fn builtin(name: &str) -> Arc<Family> {
    Arc::new(Family::builtin(name).unwrap())
}

fn explicit(sets: &[(&str, UPSet)]) -> Arc<Family> {
    let named = sets.iter().map(|(n, s)| NamedSet { name: n.to_string(), set: s.clone() }).collect();
    Arc::new(Family::new("test", named, vec![], false).unwrap())
}

fn keep(horizon: u64) -> RunOptions {
    RunOptions { keep_hypotheses: true, want_indices: true, ..RunOptions::new(horizon) }
}

fn drive(
    family: &Arc<Family>,
    k: usize,
    adv: &AdversarySpec,
    learner: &mut dyn Learner,
    opts: &RunOptions,
) -> Transcript {
    let mut a = adv.build(family, k, 7).unwrap();
    run(family, k, a.as_mut(), learner, opts).unwrap()
}

fn fixed(c: UPSet) -> AdversarySpec {
    AdversarySpec::Fixed { c, policy: Policy::Increasing }
}

fn shuffled(c: UPSet, block_len: u64) -> AdversarySpec {
    AdversarySpec::Fixed { c, policy: Policy::BlockShuffle { block_len } }
}

/// Adversary replaying a fixed list.
struct Script(Vec<u64>);

impl Adversary for Script {
    fn name(&self) -> String {
        "script".into()
    }
    fn declared(&self) -> CDecl {
        CDecl::Dynamic
    }
    fn next(&mut self, t: u64, _h: &History<'_>) -> Result<u64> {
        Ok(self.0[(t - 1) as usize])
    }
}

/// Learner replaying a fixed list of outputs with hypothesis ℕ.
struct Parrot(Vec<u64>);

impl Learner for Parrot {
    fn name(&self) -> String {
        "parrot".into()
    }
    fn step(&mut self, t: u64, _w: u64, _want: bool) -> Result<Move> {
        Ok(Move { output: self.0[(t - 1) as usize], hyp: Arc::new(UPSet::naturals()), indices: None, pod: None })
    }
}

/// Smallest member of `s` outside `used`, else the smallest natural outside `used`.
fn smallest_unused(s: &UPSet, used: &HashSet<u64>) -> u64 {
    if let Some(x) = s.iter().take(used.len() + 1).find(|x| !used.contains(x)) {
        return x;
    }
    (0..).find(|x| !used.contains(x)).unwrap()
}

fn intersect_all<'a>(sets: impl IntoIterator<Item = &'a UPSet>) -> UPSet {
    sets.into_iter().fold(UPSet::naturals(), |acc, s| acc.intersect(s))
}

/// Naive chain from its definition: longest infinite prefix intersection of the
/// first `t` consistent languages, or all of them when none is infinite.
fn naive_oracle(family: &Family, ws: &[u64]) -> Vec<(UPSet, u64)> {
    let mut used = HashSet::new();
    let mut out = Vec::new();
    for t in 1..=ws.len() {
        used.insert(ws[t - 1]);
        let cons = family.consistent_prefix(&ws[..t], t);
        let langs: Vec<&UPSet> = cons.iter().map(|(_, l)| l).collect();
        let j = (1..=langs.len()).rev().find(|&j| intersect_all(langs[..j].iter().copied()).is_infinite());
        let hyp = intersect_all(langs[..j.unwrap_or(langs.len())].iter().copied());
        let o = smallest_unused(&hyp, &used);
        used.insert(o);
        out.push((hyp, o));
    }
    out
}

fn emitted(family: &Arc<Family>, k: usize, adv: &AdversarySpec, n: u64) -> Vec<u64> {
    let mut a = adv.build(family, k, 7).unwrap();
    let mut ws = Vec::new();
    for t in 1..=n {
        let h = History { ws: &ws, os: &[], last_hyp: None };
        let w = a.next(t, &h).unwrap();
        ws.push(w);
    }
    ws
}

fn scenarios() -> Vec<(Arc<Family>, usize, AdversarySpec)> {
    vec![
        (builtin("ex1-cosingleton-with-N"), 5, fixed(UPSet::cofinite([5]))),
        (builtin("ex1-cosingleton-with-N"), 0, shuffled(UPSet::evens(), 4)),
        (builtin("ex3-cosingleton"), 0, fixed(UPSet::evens())),
        (builtin("ex3-cosingleton"), 1, shuffled(UPSet::cofinite([2]), 3)),
        (builtin("ex5-finite"), 2, fixed(UPSet::multiples(4))),
        (builtin("ex5-finite"), 3, shuffled(UPSet::periodic(2, [1]).with([0]), 5)),
        (builtin("multiples"), 5, fixed(UPSet::multiples(12))),
        (builtin("arithprog"), 0, shuffled(UPSet::arith(3, 4), 2)),
        (builtin("ex2-specials"), 0, fixed(UPSet::cofinite([1]))),
    ]
}

#[test]
fn naive_chain_matches_definition() {
    for (f, k, adv) in scenarios() {
        let ws = emitted(&f, k, &adv, 40);
        let oracle = naive_oracle(&f, &ws);
        let mut l = ChainLearner::new(f.clone(), ChainMode::Naive);
        let tr = drive(&f, k, &adv, &mut l, &keep(40));
        for (s, (hyp, o)) in tr.steps.iter().zip(&oracle) {
            assert_eq!(s.w, ws[(s.t - 1) as usize]);
            assert_eq!(s.hyp.as_deref(), Some(hyp), "{} t={}", f.name(), s.t);
            assert_eq!(s.o, *o, "{} t={}", f.name(), s.t);
            let idx = s.indices.as_ref().unwrap();
            assert_eq!(intersect_all(idx.iter().map(|&i| f.language_at(i).unwrap()).collect::<Vec<_>>().iter()), *hyp);
        }
        assert_eq!(tr.recheck_flags(), Some(true));
    }
}

#[test]
fn naive_chain_two_language_example() {
    let f = explicit(&[("N", UPSet::naturals()), ("evens", UPSet::evens())]);
    let mut l = ChainLearner::new(f.clone(), ChainMode::Naive);
    let tr = drive(&f, 1, &fixed(UPSet::evens()), &mut l, &keep(2));
    let s = &tr.steps[1];
    assert_eq!(s.hyp.as_deref(), Some(&UPSet::evens()));
    assert_eq!(s.indices.as_deref(), Some(&[0, 1][..]));
    assert_eq!(s.o, 4);
}

#[test]
fn naive_chain_cosingleton_prefix_excludes_seen() {
    let f = builtin("ex1-cosingleton-with-N");
    let mut l = ChainLearner::new(f.clone(), ChainMode::Naive);
    let tr = drive(&f, 5, &fixed(UPSet::cofinite([5])), &mut l, &keep(6));
    let ws: Vec<u64> = tr.steps.iter().map(|s| s.w).collect();
    assert_eq!(ws, vec![0, 1, 2, 3, 4, 6]);
    let kept: Vec<usize> = l.chain().all_indices();
    for i in [1, 2, 3, 4, 6] {
        assert!(!kept.contains(&i), "index {i} should be inconsistent");
    }
    assert!(kept.contains(&0) && kept.contains(&5));

    // Early guesses may leave K; once 6 has been seen they stay inside.
    let mut l = ChainLearner::new(f.clone(), ChainMode::Naive);
    let tr = drive(&f, 5, &fixed(UPSet::cofinite([5])), &mut l, &keep(300));
    assert!(analyze(&tr).last_invalid_t.is_none_or(|t| t < 6));
}

#[test]
fn singleton_family_hypothesis_is_k() {
    let f = explicit(&[("evens", UPSet::evens())]);
    for kind in [LearnerKind::NaiveChain, LearnerKind::Identifier, LearnerKind::Algorithm1] {
        let mut l = LearnerSpec::new(kind).build(&f).unwrap();
        let tr = drive(&f, 0, &shuffled(UPSet::evens(), 3), l.as_mut(), &keep(30));
        assert!(tr.steps.iter().all(|s| s.hyp.as_deref() == Some(&UPSet::evens())));
        assert_eq!(analyze(&tr).stabilization_t, Some(1));
    }
}

#[test]
fn algorithm1_descends_one_level_per_step() {
    let f = explicit(&[
        ("N", UPSet::naturals()),
        ("evens", UPSet::evens()),
        ("4N", UPSet::multiples(4)),
        ("8N", UPSet::multiples(8)),
    ]);
    let mut core = Alg1Core::new(f.clone());
    let mut depths = Vec::new();
    for (t, w) in (0..).step_by(8).take(8).enumerate() {
        core.advance(w, t as u64 + 1).unwrap();
        depths.push(core.depth());
    }
    // The list reaches length t at step t; each level is confirmed one step later.
    assert!(depths.windows(2).all(|d| d[1] == d[0] || d[1] == d[0] + 1), "{depths:?}");
    assert_eq!(*depths.last().unwrap(), 4);
    assert_eq!(**core.current(), UPSet::multiples(8));
}

#[test]
fn algorithm1_jumps_to_longest_surviving_prefix() {
    let f = builtin("ex3-cosingleton");
    // Large shuffled blocks let even-removal languages enter the chain
    // before their string arrives.
    let ws = emitted(&f, 0, &shuffled(UPSet::evens(), 64), 300);
    let mut core = Alg1Core::new(f.clone());
    let mut jumps = 0;
    for (i, &w) in ws.iter().enumerate() {
        let t = i + 1;
        let tr = core.advance(w, t as u64).unwrap();
        if tr.relation != Relation::Superset {
            continue;
        }
        jumps += 1;
        let old: Vec<usize> = f.consistent_prefix(&ws[..i], i).into_iter().map(|(j, _)| j).collect();
        let d = core.depth();
        assert_eq!(core.indices(), old[..d], "t={t}");
        assert!(d < tr.prev_depth + 1);
        let killed = f.language_at(old[d]).unwrap();
        assert!(!killed.member(w), "t={t}: position {} should die at this step", d + 1);
        let want = intersect_all(old[..d].iter().map(|&j| f.language_at(j).unwrap()).collect::<Vec<_>>().iter());
        assert_eq!(**core.current(), want);
    }
    assert!(jumps > 0);
}

/// Chain discipline: consecutive hypotheses are nested once outputs are valid.
fn nested_after_first_valid(tr: &Transcript) -> bool {
    let first = tr.steps.iter().position(|s| s.valid).unwrap_or(tr.steps.len());
    tr.steps[first..].windows(2).all(|p| {
        let (a, b) = (p[0].hyp.as_ref().unwrap(), p[1].hyp.as_ref().unwrap());
        a.is_subset(b) || b.is_subset(a)
    })
}

#[test]
fn algorithm1_chain_discipline() {
    for (f, k, adv) in scenarios() {
        let mut l = Algorithm1::new(f.clone());
        let tr = drive(&f, k, &adv, &mut l, &keep(400));
        assert!(nested_after_first_valid(&tr), "{}", f.name());
        assert_eq!(tr.recheck_flags(), Some(true));
    }
}

#[test]
fn weak_density_without_changes_is_algorithm1() {
    let f = explicit(&[("3N", UPSet::multiples(3))]);
    let adv = shuffled(UPSet::multiples(6), 4);
    let mut weak = WeakDensity::new(f.clone());
    let mut alg1 = Algorithm1::new(f.clone());
    let a = drive(&f, 0, &adv, &mut weak, &keep(200));
    let b = drive(&f, 0, &adv, &mut alg1, &keep(200));
    let oa: Vec<u64> = a.steps.iter().map(|s| s.o).collect();
    let ob: Vec<u64> = b.steps.iter().map(|s| s.o).collect();
    assert_eq!(oa, ob);
    assert!(weak.priority().is_empty());
}

#[test]
fn weak_density_subset_step_trace() {
    // t=1: I=N, out 1. t=2: chain grew, I stays N, out 3. t=3: I descends to
    // evens (subset): w=4, w'=5, S = {5,6,7}, out 5. t=4: 6 arrives and is
    // purged, out 7 < 8. t=5: S empty, out 10.
    let f = explicit(&[("N", UPSet::naturals()), ("evens", UPSet::evens())]);
    let mut l = WeakDensity::new(f.clone());
    let tr = drive(&f, 1, &fixed(UPSet::evens()), &mut l, &keep(5));
    let outs: Vec<u64> = tr.steps.iter().map(|s| s.o).collect();
    assert_eq!(outs, vec![1, 3, 5, 7, 10]);
    assert!(l.priority().is_empty());
}

/// Pod learner on a single-language family, simulated from the rules.
fn pod_oracle(lang: &UPSet, ws: &[u64], s: u64) -> (Vec<u64>, Vec<Vec<u64>>) {
    let mut adv = HashSet::new();
    let mut outs = HashSet::new();
    let mut pooled: BTreeSet<u64> = BTreeSet::new();
    let mut pods = Vec::new();
    let mut order = Vec::new();
    for &w in ws {
        adv.insert(w);
        let pod: Vec<u64> = lang
            .iter()
            .filter(|x| !adv.contains(x) && !outs.contains(x) && !pooled.contains(x))
            .take(s as usize)
            .collect();
        pooled.extend(&pod);
        pods.push(pod);
        let o = *pooled.iter().find(|&&x| !adv.contains(&x) && !outs.contains(&x)).unwrap();
        outs.insert(o);
        order.push(o);
    }
    (order, pods)
}

#[test]
fn pod_constant_two_fills_odds() {
    let f = explicit(&[("N", UPSet::naturals())]);
    let mut l = PodLearner::new(f.clone(), Schedule::Constant(2)).unwrap().recording();
    let tr = drive(&f, 0, &fixed(UPSet::evens()), &mut l, &keep(50));
    let outs: Vec<u64> = tr.steps.iter().map(|s| s.o).collect();
    assert_eq!(outs, (0..50).map(|i| 2 * i + 1).collect::<Vec<_>>());
    let pool: BTreeSet<u64> = l.materialize_pods().unwrap().into_iter().flatten().collect();
    assert_eq!(pool, (1..=100).collect());
}

#[test]
fn pod_matches_rule_simulation_on_one_language() {
    for (lang, c, s) in [
        (UPSet::naturals(), UPSet::multiples(3), 2),
        (UPSet::evens(), UPSet::multiples(4), 3),
        (UPSet::multiples(3), UPSet::multiples(3), 4),
        (UPSet::cofinite([1, 4]), UPSet::periodic(5, [0, 2]).without([2]), 5),
    ] {
        let f = explicit(&[("L", lang.clone())]);
        for adv in [fixed(c.clone()), shuffled(c.clone(), 6)] {
            let ws = emitted(&f, 0, &adv, 80);
            let (want_outs, want_pods) = pod_oracle(&lang, &ws, s);
            let mut l = PodLearner::new(f.clone(), Schedule::Constant(s)).unwrap().recording();
            let tr = drive(&f, 0, &adv, &mut l, &keep(80));
            let outs: Vec<u64> = tr.steps.iter().map(|s| s.o).collect();
            assert_eq!(outs, want_outs, "{lang} s={s}");
            assert_eq!(l.materialize_pods().unwrap(), want_pods, "{lang} s={s}");
        }
    }
}

#[test]
fn pod_accounting_on_scenarios() {
    for (f, k, adv) in scenarios() {
        for schedule in [Schedule::Constant(3), Schedule::Linear] {
            let mut l = PodLearner::new(f.clone(), schedule).unwrap().recording();
            let horizon = 120;
            let tr = drive(&f, k, &adv, &mut l, &keep(horizon));
            let pods = l.materialize_pods().unwrap();
            assert_eq!(pods.len() as u64, horizon);
            let mut all = HashSet::new();
            for p in &pods {
                for &x in p {
                    assert!(all.insert(x), "{}: {x} in two pods", f.name());
                }
            }
            let outs: HashSet<u64> = tr.steps.iter().map(|s| s.o).collect();
            assert!(outs.iter().all(|o| all.contains(o)), "{}: output outside the pool", f.name());
            // The pool is drained smallest first: at step t every pooled
            // string below o_t was already output or given by the adversary.
            let c = tr.c.target().unwrap().clone();
            let mut done: HashSet<u64> = HashSet::new();
            let mut pooled: BTreeSet<u64> = BTreeSet::new();
            for (s, p) in tr.steps.iter().zip(&pods) {
                done.insert(s.w);
                pooled.extend(p);
                for &x in pooled.range(..s.o) {
                    assert!(done.contains(&x), "{} t={}: pooled {x} skipped", f.name(), s.t);
                    assert!(outs.contains(&x) || c.member(x));
                }
                done.insert(s.o);
            }
        }
    }
}

#[test]
fn pod_outputs_never_repeat_or_collide() {
    let f = builtin("ex1-cosingleton-with-N");
    let mut l = PodLearner::new(f.clone(), Schedule::Linear).unwrap();
    let tr = drive(&f, 0, &AdversarySpec::Recycler, &mut l, &keep(500));
    let mut seen = HashSet::new();
    for s in &tr.steps {
        assert!(seen.insert(s.o), "output {} repeated", s.o);
    }
}

#[test]
fn recycler_trace() {
    let f = explicit(&[("N", UPSet::naturals())]);
    let outs = vec![7, 9, 2, 30, 11, 5, 40, 41];
    let mut adv = Recycler::new(Arc::new(UPSet::naturals())).unwrap();
    let mut l = Parrot(outs.clone());
    let tr = run(&f, 0, &mut adv, &mut l, &RunOptions::new(8)).unwrap();
    let ws: Vec<u64> = tr.steps.iter().map(|s| s.w).collect();
    // t=1 fallback 0; t=2 recycles 7; t=3 smallest unused 1; t=4 recycles 2;
    // t=5,6,7 sweep 3,4,6; t=8 recycles 5.
    assert_eq!(ws, vec![0, 7, 1, 2, 3, 4, 6, 5]);
}

#[test]
fn recycler_recycles_smallest_pending() {
    let f = explicit(&[("N", UPSet::naturals())]);
    let outs: Vec<u64> = (0..64).map(|i| 1000 - i).collect();
    let mut adv = Recycler::new(Arc::new(UPSet::naturals())).unwrap();
    let mut l = Parrot(outs.clone());
    let tr = run(&f, 0, &mut adv, &mut l, &RunOptions::new(64)).unwrap();
    let mut emitted = HashSet::new();
    for s in &tr.steps {
        if s.t.is_power_of_two() && s.t > 1 {
            let pending = outs[..(s.t - 1) as usize].iter().filter(|o| !emitted.contains(*o)).min().copied();
            assert_eq!(Some(s.w), pending, "t={}", s.t);
        }
        emitted.insert(s.w);
    }
}

#[test]
fn gcd_examples() {
    let m = builtin("multiples");
    let mut l = GcdLearner::new(m.clone()).unwrap();
    let tr = run(&m, 0, &mut Script(vec![12, 18]), &mut l, &keep(2)).unwrap();
    assert_eq!(tr.steps[0].hyp.as_deref(), Some(&UPSet::multiples(12)));
    assert_eq!(tr.steps[1].hyp.as_deref(), Some(&UPSet::multiples(6)));
    assert_eq!(tr.steps[1].indices.as_deref(), Some(&[5][..]));

    let mut l = GcdLearner::new(m.clone()).unwrap();
    let tr = run(&m, 0, &mut Script(vec![4]), &mut l, &keep(1)).unwrap();
    assert_eq!(tr.steps[0].hyp.as_deref(), Some(&UPSet::multiples(4)));
    assert_eq!(tr.steps[0].o, 0);

    let a = builtin("arithprog");
    let mut l = GcdLearner::new(a.clone()).unwrap();
    let tr = run(&a, 0, &mut Script(vec![7, 12]), &mut l, &keep(2)).unwrap();
    assert_eq!(tr.steps[1].hyp.as_deref(), Some(&UPSet::arith(7, 5)));
    assert_eq!(tr.steps[1].o, 17);

    assert!(GcdLearner::new(builtin("ex1-cosingleton-with-N")).is_err());
}

#[test]
fn identifier_on_multiples_of_six() {
    let f = builtin("multiples");
    let mut l = ChainLearner::new(f.clone(), ChainMode::Identifier);
    let tr = drive(&f, 5, &fixed(UPSet::multiples(6)), &mut l, &keep(200));
    let r = analyze(&tr);
    assert!(r.stabilization_t.is_some_and(|t| t <= 20), "{r:?}");
    assert_eq!(tr.steps.last().unwrap().hyp.as_deref(), Some(&UPSet::multiples(6)));
}

#[test]
fn reverse_of_identifier_is_identity() {
    for (f, k, adv) in scenarios() {
        let plain = LearnerSpec::new(LearnerKind::Identifier);
        let wrapped = plain.clone().wrapped(limitgen::learner::Wrap::Reverse);
        let mut a = plain.build(&f).unwrap();
        let mut b = wrapped.build(&f).unwrap();
        let ta = drive(&f, k, &adv, a.as_mut(), &keep(150));
        let tb = drive(&f, k, &adv, b.as_mut(), &keep(150));
        for (x, y) in ta.steps.iter().zip(&tb.steps) {
            assert_eq!(x.o, y.o, "{} t={}", f.name(), x.t);
            assert_eq!(x.hyp, y.hyp);
        }
    }
}

#[test]
fn forward_collects_every_containing_language() {
    let f = explicit(&[("N", UPSet::naturals()), ("evens", UPSet::evens()), ("3N", UPSet::multiples(3))]);
    let spec = LearnerSpec::new(LearnerKind::NaiveChain).wrapped(limitgen::learner::Wrap::Forward);
    for adv in [fixed(UPSet::multiples(6)), shuffled(UPSet::multiples(12), 3)] {
        let mut l = spec.build(&f).unwrap();
        let tr = drive(&f, 0, &adv, l.as_mut(), &keep(60));
        let mut ws = Vec::new();
        for s in &tr.steps {
            ws.push(s.w);
            let want: Vec<usize> = f
                .consistent_prefix(&ws, s.t as usize)
                .into_iter()
                .filter(|(_, lang)| lang.member(s.o))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(s.indices.as_deref(), Some(&want[..]), "t={}", s.t);
            let hyp = intersect_all(want.iter().map(|&i| f.language_at(i).unwrap()).collect::<Vec<_>>().iter());
            assert_eq!(s.hyp.as_deref(), Some(&hyp));
            assert!(hyp.member(s.o));
        }
    }
}

#[test]
fn forward_hypothesis_contains_output() {
    for (f, k, adv) in scenarios() {
        for kind in [LearnerKind::Pod, LearnerKind::WeakDensity, LearnerKind::Algorithm1] {
            let mut spec = LearnerSpec::new(kind);
            if kind == LearnerKind::Pod {
                spec.schedule = Some(Schedule::Constant(2));
            }
            let mut l = spec.wrapped(limitgen::learner::Wrap::Forward).build(&f).unwrap();
            let tr = drive(&f, k, &adv, l.as_mut(), &keep(120));
            for s in &tr.steps {
                let hyp = s.hyp.as_ref().unwrap();
                assert!(hyp.is_infinite());
                assert!(hyp.member(s.o) || s.indices.as_deref() == Some(&[]), "{} t={}", f.name(), s.t);
            }
        }
    }
}

#[test]
fn protocol_violations_abort() {
    let f = explicit(&[("evens", UPSet::evens())]);
    let mut l = Parrot(vec![1, 2, 3]);
    let err = run(&f, 0, &mut Script(vec![0, 1]), &mut l, &RunOptions::new(2)).unwrap_err();
    assert!(matches!(err, limitgen::Error::Protocol { step: 2, .. }), "{err}");
    let mut l = Parrot(vec![0]);
    let err = run(&f, 0, &mut Script(vec![0]), &mut l, &RunOptions::new(1)).unwrap_err();
    assert!(matches!(err, limitgen::Error::Protocol { step: 1, .. }), "{err}");
}

#[test]
fn incremental_flags_match_recount() {
    for (f, k, adv) in scenarios() {
        for spec in [
            LearnerSpec::new(LearnerKind::NaiveChain),
            LearnerSpec::new(LearnerKind::WeakDensity),
            LearnerSpec::pod(Schedule::Linear),
            LearnerSpec::new(LearnerKind::Algorithm1).wrapped(limitgen::learner::Wrap::Forward),
        ] {
            let mut l = spec.build(&f).unwrap();
            let tr = drive(&f, k, &adv, l.as_mut(), &keep(150));
            assert_eq!(tr.recheck_flags(), Some(true), "{} {}", f.name(), tr.learner);
        }
    }
}

#[test]
fn fixed_enumerator_shuffle_covers_prefix() {
    let mut a = FixedEnumerator::new(UPSet::evens(), Policy::BlockShuffle { block_len: 5 }, 3).unwrap();
    let h = History { ws: &[], os: &[], last_hyp: None };
    let got: BTreeSet<u64> = (1..=100).map(|t| a.next(t, &h).unwrap()).collect();
    assert_eq!(got, (0..100).map(|i| 2 * i).collect());
}
