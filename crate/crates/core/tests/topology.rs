mod common;

use common::{raw_set, window, RawSet};
use limitgen::family::{specials, NamedSet};
use limitgen::topology::{
    angluin_full, fails_td_partial, identifiable_partial, is_tell_tale, spec_preorder_full, spec_preorder_partial,
    tell_tale, verdict_table, with_invariance, Catalog,
};
use limitgen::{Family, UPSet};
use proptest::prelude::*;

fn builtin(name: &str) -> Family {
    Family::builtin(name).unwrap()
}

/// Inclusion by membership sweep.
fn raw_subset(a: &RawSet, b: &RawSet) -> bool {
    (0..window(a, b)).all(|n| !a.member(n) || b.member(n))
}

fn finite_family(sets: &[RawSet]) -> Family {
    let explicit = sets.iter().enumerate().map(|(i, r)| NamedSet { name: format!("S{i}"), set: r.build() }).collect();
    Family::new("random", explicit, vec![], true).unwrap()
}

#[test]
fn example1_full_preorder() {
    let f = builtin("ex1-cosingleton-with-N");
    let p = spec_preorder_full(&f, 12).unwrap();
    for i in 1..12 {
        assert_eq!(p.strictly_below(i, 0), Some(true));
        for j in 1..12 {
            if i != j {
                assert_eq!(p.leq(i, j), Some(false), "{i} {j}");
            }
        }
    }
    assert!(p.tail.contains("incomparable"));
}

#[test]
fn multiples_preorder_is_divisibility() {
    let f = builtin("multiples");
    let p = spec_preorder_full(&f, 30).unwrap();
    for a in 0..30 {
        for b in 0..30 {
            let (i, j) = (a as u64 + 1, b as u64 + 1);
            assert_eq!(p.leq(a, b), Some(i % j == 0), "{i} {j}");
        }
    }
}

#[test]
fn example3_partial_classes_on_evens() {
    let f = builtin("ex3-cosingleton");
    let p = spec_preorder_partial(&f, &UPSet::evens(), 20).unwrap();
    // Instance j removes j + 1.
    let odd_removal: Vec<usize> = (0..20).step_by(2).collect();
    assert_eq!(p.class_of(0).unwrap(), odd_removal);
    for j in (1..20).step_by(2) {
        assert_eq!(p.strictly_below(j, 0), Some(true));
        assert_eq!(p.class_of(j).unwrap(), vec![j]);
    }
    assert!(p.isolated.is_empty());
}

#[test]
fn finite_traces_are_isolated() {
    let f = builtin("ex3-cosingleton");
    let p = spec_preorder_partial(&f, &UPSet::finite([0, 2, 4]), 10).unwrap();
    assert_eq!(p.isolated.len(), 10);
    assert!(p.classes.iter().all(|c| c.len() == 1));
    for a in 0..10 {
        for b in 0..10 {
            assert_eq!(p.leq(a, b), Some(a == b));
        }
    }
}

#[test]
fn full_verdicts_on_builtins() {
    let expect = [
        ("ex1-cosingleton-with-N", false),
        ("ex2-specials", true),
        ("ex3-cosingleton", true),
        ("ex5-finite", true),
        ("multiples", true),
        ("arithprog", true),
    ];
    for (name, yes) in expect {
        let f = builtin(name);
        let v = angluin_full(&f).unwrap();
        assert_eq!(v.identifiable, yes, "{name}: {v}");
        for t in &v.tell_tales {
            let l = f.language_at(t.index).unwrap();
            assert!(is_tell_tale(&f, &l, &t.set), "{name} {}", t.label);
        }
        if !yes {
            assert_eq!(v.witness.unwrap().target, 0);
        }
    }
}

#[test]
fn example2_tell_tale_is_the_special_string() {
    let f = builtin("ex2-specials");
    let l0 = f.language_at(0).unwrap();
    assert_eq!(tell_tale(&f, &l0), Some(vec![specials::encode(-1)]));
}

#[test]
fn example2_without_specials_flips_full_but_not_partial() {
    let f = builtin("ex2-specials");
    let g = f.remove_strings(&[specials::encode(-1), specials::encode(-2)]);
    assert!(angluin_full(&f).unwrap().identifiable);
    assert!(!angluin_full(&g).unwrap().identifiable);
    assert!(!identifiable_partial(&f, &Catalog::SchemaAuto).unwrap().identifiable);
    assert!(!identifiable_partial(&g, &Catalog::SchemaAuto).unwrap().identifiable);
}

#[test]
fn partial_limit_points() {
    let f = builtin("ex3-cosingleton");
    assert!(fails_td_partial(&f, &UPSet::evens(), 0).unwrap().is_some());
    let f = builtin("ex2-specials");
    let encoded_n = UPSet::naturals().minus_below(2);
    let w = fails_td_partial(&f, &encoded_n, 0).unwrap().unwrap();
    assert_eq!(w.c, encoded_n);
    assert!(fails_td_partial(&f, &UPSet::finite([5]), 0).is_err());
}

#[test]
fn partial_verdicts_on_builtins() {
    let expect = [
        ("ex1-cosingleton-with-N", false),
        ("ex2-specials", false),
        ("ex3-cosingleton", false),
        ("ex5-finite", true),
        ("multiples", true),
        ("arithprog", true),
    ];
    for (name, yes) in expect {
        let v = identifiable_partial(&builtin(name), &Catalog::SchemaAuto).unwrap();
        assert_eq!(v.identifiable, yes, "{name}: {v}");
    }
    let v = identifiable_partial(&builtin("ex2-specials"), &Catalog::SchemaAuto).unwrap();
    assert_eq!(v.witness.unwrap().c, UPSet::naturals().minus_below(2));
}

#[test]
fn partial_verdict_survives_finite_deletions() {
    let mut rng = 0x9e37_79b9_u64;
    let mut next = |m: u64| {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng % m
    };
    for name in ["ex1-cosingleton-with-N", "ex2-specials", "ex3-cosingleton", "ex5-finite", "multiples", "arithprog"] {
        let f = builtin(name);
        let deletions: Vec<Vec<u64>> = (0..5).map(|_| (0..1 + next(4)).map(|_| next(40)).collect()).collect();
        let v = identifiable_partial(&f, &Catalog::SchemaAuto).unwrap();
        let v = with_invariance(&f, v, &deletions).unwrap();
        assert_eq!(v.invariance.len(), 5);
        assert!(v.invariance.iter().all(|(_, same)| *same), "{name}: {:?}", v.invariance);
    }
}

#[test]
fn explicit_catalog_matches_auto() {
    let f = builtin("ex3-cosingleton");
    let cat = Catalog::Explicit { sets: vec![UPSet::evens()], window: 8 };
    assert!(!identifiable_partial(&f, &cat).unwrap().identifiable);
    let f = builtin("multiples");
    let cat = Catalog::Explicit { sets: vec![UPSet::evens(), UPSet::multiples(6)], window: 8 };
    assert!(identifiable_partial(&f, &cat).unwrap().identifiable);
}

#[test]
fn verdict_table_has_every_row() {
    let fams: Vec<Family> = ["ex1-cosingleton-with-N", "ex2-specials", "multiples"].map(builtin).to_vec();
    let rows = verdict_table(&fams).unwrap();
    assert_eq!(rows.len(), 3);
    let text = limitgen::topology::render_table(&rows);
    assert_eq!(text.lines().count(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_family_preorder_matches_sweep(sets in proptest::collection::vec(raw_set(), 1..6)) {
        let f = finite_family(&sets);
        let p = spec_preorder_full(&f, 16).unwrap();
        for (a, &i) in p.indices.iter().enumerate() {
            for (b, &j) in p.indices.iter().enumerate() {
                prop_assert_eq!(p.le[a][b], raw_subset(&sets[i], &sets[j]));
            }
        }
    }

    #[test]
    fn finite_family_partial_preorder_matches_sweep(
        sets in proptest::collection::vec(raw_set(), 1..6),
        c in raw_set(),
    ) {
        let f = finite_family(&sets);
        let p = spec_preorder_partial(&f, &c.build(), 16).unwrap();
        let cb = c.build();
        for (a, &i) in p.indices.iter().enumerate() {
            let ti = sets[i].build().intersect(&cb);
            for (b, &j) in p.indices.iter().enumerate() {
                let tj = sets[j].build().intersect(&cb);
                let len = window(&sets[i], &sets[j]).max(window(&c, &c)) * c.p;
                let sweep = (0..len).all(|n| !(sets[i].member(n) && c.member(n)) || (sets[j].member(n) && c.member(n)));
                let expect = a == b || (ti.is_infinite() && tj.is_infinite() && sweep);
                prop_assert_eq!(p.le[a][b], expect);
            }
        }
    }

    #[test]
    fn finite_family_tell_tales_check_out(sets in proptest::collection::vec(raw_set(), 1..6)) {
        let f = finite_family(&sets);
        let v = angluin_full(&f).unwrap();
        prop_assert!(v.identifiable);
        for t in &v.tell_tales {
            let me = &sets[t.index];
            prop_assert!(t.set.iter().all(|&x| me.member(x)));
            for (j, other) in sets.iter().enumerate() {
                if !f.is_live(j) || !raw_subset(other, me) || raw_subset(me, other) {
                    continue;
                }
                prop_assert!(t.set.iter().any(|&x| !other.member(x)), "{} inside S{}", t.label, j);
            }
        }
    }

    #[test]
    fn finite_family_has_no_partial_limit_point(sets in proptest::collection::vec(raw_set(), 1..6), c in raw_set()) {
        let f = finite_family(&sets);
        let cb = c.build();
        for i in 0..sets.len() {
            if f.is_live(i) && f.language_at(i).unwrap().intersect(&cb).is_infinite() {
                prop_assert!(fails_td_partial(&f, &cb, i).unwrap().is_none());
            }
        }
    }
}
