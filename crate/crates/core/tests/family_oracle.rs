use limitgen::family::{specials, BUILTINS};
use limitgen::{Family, UPSet};
use proptest::prelude::*;

/// Brute-force inverse of the diagonal pairing: walk diagonals until index `z`.
fn pair_by_walk(z: u64) -> (u64, u64) {
    let mut k = 0;
    for s in 0.. {
        for y in 0..=s {
            if k == z {
                return (s - y + 1, y + 1);
            }
            k += 1;
        }
    }
    unreachable!()
}

/// Membership of language `g` computed straight from the catalog formulas.
fn formula_member(name: &str, g: u64, n: u64) -> bool {
    match name {
        "ex1-cosingleton-with-N" => g == 0 || n != g,
        "ex3-cosingleton" => n != g + 1,
        "ex2-specials" => {
            let v = specials::decode(n);
            if g == 0 {
                v != -2
            } else {
                let i = g as i64;
                v == -2 || (v >= 0 && v != i)
            }
        }
        "multiples" => n % (g + 1) == 0,
        "arithprog" => {
            let (i, d) = pair_by_walk(g);
            n >= i && (n - i) % d == 0
        }
        _ => unreachable!(),
    }
}

const SCHEMA_FAMILIES: &[&str] =
    &["ex1-cosingleton-with-N", "ex2-specials", "ex3-cosingleton", "multiples", "arithprog"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn language_at_matches_formula(which in 0usize..5, g in 0u64..400) {
        let name = SCHEMA_FAMILIES[which];
        let f = Family::builtin(name).unwrap();
        let l = f.language_at(g as usize).unwrap();
        for n in 0..300 {
            prop_assert_eq!(l.member(n), formula_member(name, g, n), "{} idx {} n {}", name, g, n);
        }
    }

    #[test]
    fn consistent_prefix_is_exact(which in 0usize..6, seen in proptest::collection::vec(0u64..40, 0..5), m in 1usize..12) {
        let f = Family::builtin(BUILTINS[which]).unwrap();
        let got = f.consistent_prefix(&seen, m);
        let contains = |l: &UPSet| seen.iter().all(|&x| l.member(x));
        let mut next = 0usize;
        for (g, l) in &got {
            prop_assert!(contains(l));
            prop_assert_eq!(l, &f.language_at(*g).unwrap());
            for skipped in next..*g {
                prop_assert!(!contains(&f.language_at(skipped).unwrap()), "skipped consistent index {}", skipped);
            }
            next = g + 1;
        }
        if got.len() < m {
            // Only allowed when the family provably has no more consistent members.
            match f.len() {
                Some(n) => {
                    for g in next..n {
                        prop_assert!(!contains(&f.language_at(g).unwrap()));
                    }
                }
                None => {
                    for g in next..next + 2000 {
                        prop_assert!(!contains(&f.language_at(g).unwrap()), "index {} consistent but missing", g);
                    }
                }
            }
        }
    }

    #[test]
    fn consistent_prefix_is_monotone(which in 0usize..6, seen in proptest::collection::vec(0u64..40, 1..5), extra in 0u64..40) {
        let f = Family::builtin(BUILTINS[which]).unwrap();
        let small = f.consistent_prefix(&seen, 60);
        let mut more = seen.clone();
        more.push(extra);
        let big = f.consistent_prefix(&more, 8);
        let small_idx: Vec<usize> = small.iter().map(|p| p.0).collect();
        let horizon = if small.len() < 60 { usize::MAX } else { *small_idx.last().unwrap() };
        for (g, _) in &big {
            if *g <= horizon {
                prop_assert!(small_idx.contains(g), "index {} appeared only after more data", g);
            }
        }
    }

    #[test]
    fn remove_strings_differs_exactly_on_w(which in 0usize..6, w in proptest::collection::vec(0u64..30, 0..4), g in 0usize..60) {
        let f = Family::builtin(BUILTINS[which]).unwrap();
        let g = match f.len() { Some(n) => g % n, None => g };
        let r = f.remove_strings(&w);
        let orig = f.language_at(g).unwrap();
        match r.language_at(g) {
            Ok(l) => {
                for n in 0..200 {
                    prop_assert_eq!(l.member(n), orig.member(n) && !w.contains(&n));
                }
                for e in 0..g {
                    if let Ok(other) = r.language_at(e) {
                        prop_assert_ne!(other, l.clone(), "index {} kept despite equal earlier {}", g, e);
                    }
                }
            }
            Err(_) => {
                let mine = orig.without(w.iter().copied());
                let earlier = (0..g).any(|e| f.language_at(e).unwrap().without(w.iter().copied()) == mine);
                prop_assert!(earlier, "index {} dropped without an earlier duplicate", g);
            }
        }
    }

    #[test]
    fn remove_strings_composes(which in 0usize..6, w1 in proptest::collection::vec(0u64..20, 0..3), w2 in proptest::collection::vec(0u64..20, 0..3)) {
        let f = Family::builtin(BUILTINS[which]).unwrap();
        let twice = f.remove_strings(&w1).remove_strings(&w2);
        let both: Vec<u64> = w1.iter().chain(&w2).copied().collect();
        let once = f.remove_strings(&both);
        let bound = f.len().unwrap_or(80);
        for g in 0..bound {
            prop_assert_eq!(twice.language_at(g).ok(), once.language_at(g).ok());
        }
    }
}

#[test]
fn remove_nothing_is_identity() {
    for name in BUILTINS {
        let f = Family::builtin(name).unwrap();
        assert_eq!(f.remove_strings(&[]), f);
    }
}

#[test]
fn builtin_catalog_examples() {
    let f = Family::builtin("ex1-cosingleton-with-N").unwrap();
    assert_eq!(f.language_at(0).unwrap(), UPSet::naturals());
    assert_eq!(f.language_at(7).unwrap(), UPSet::cofinite([7]));

    let f = Family::builtin("ex2-specials").unwrap();
    let l0 = f.language_at(0).unwrap();
    assert!(l0.member(specials::encode(-1)) && !l0.member(specials::encode(-2)));
    let l1 = f.language_at(1).unwrap();
    assert!(l1.member(specials::encode(-2)) && !l1.member(specials::encode(1)));

    let f = Family::builtin("multiples").unwrap();
    assert_eq!(f.language_at(5).unwrap(), UPSet::multiples(6));
    assert!(Family::builtin("nope").is_err());
}

#[test]
fn malformed_config_is_rejected() {
    assert!(Family::parse(r#"{"version": 9, "schemas": [{"kind":"multiples"}]}"#).is_err());
    assert!(Family::parse(r#"{"version": 1, "schemas": [{"kind":"bogus"}]}"#).is_err());
    assert!(Family::parse(r#"{"version": 1}"#).is_err());
    let ok = Family::parse(
        r#"{"version":1,"explicit":[{"name":"N","set":"N"}],"schemas":[{"kind":"coSingleton","base":"N","indexSet":{"h":1,"p":1,"R":[0],"X":[]},"extras":[]}]}"#,
    )
    .unwrap();
    assert_eq!(ok, Family::builtin("ex1-cosingleton-with-N").unwrap().renamed(""));
}
