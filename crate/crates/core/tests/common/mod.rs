#![allow(dead_code)]

use limitgen::UPSet;
use proptest::prelude::*;

/// Raw description `(h, p, R, X)` with membership given by a direct table lookup.
#[derive(Clone, Debug)]
pub struct RawSet {
    pub h: u64,
    pub p: u64,
    pub r: Vec<u64>,
    pub x: Vec<u64>,
}

impl RawSet {
    pub fn member(&self, n: u64) -> bool {
        if n < self.h {
            self.x.contains(&n)
        } else {
            self.r.contains(&(n % self.p))
        }
    }

    pub fn table(&self, len: u64) -> Vec<bool> {
        (0..len).map(|n| self.member(n)).collect()
    }

    pub fn build(&self) -> UPSet {
        UPSet::from_description(self.h, self.p, &self.r, &self.x).unwrap()
    }
}

pub fn raw_set() -> impl Strategy<Value = RawSet> {
    (0u64..14, 1u64..13).prop_flat_map(|(h, p)| {
        (
            Just(h),
            Just(p),
            proptest::collection::btree_set(0..p, 0..=p as usize),
            proptest::collection::btree_set(0..h.max(1), 0..=h as usize),
        )
            .prop_map(|(h, p, r, x)| RawSet {
                h,
                p,
                r: r.into_iter().collect(),
                x: x.into_iter().filter(|&v| v < h).collect(),
            })
    })
}

/// Sets whose prefix count at N = 10⁵ is exact up to 2: period divides 10⁵, threshold ≤ 2.
pub fn aligned_set() -> impl Strategy<Value = RawSet> {
    (0u64..=2, prop::sample::select(vec![1u64, 2, 4, 5, 8, 10, 16, 20, 25])).prop_flat_map(|(h, p)| {
        (
            Just(h),
            Just(p),
            proptest::collection::btree_set(0..p, 0..=p as usize),
            proptest::collection::btree_set(0..h.max(1), 0..=h as usize),
        )
            .prop_map(|(h, p, r, x)| RawSet {
                h,
                p,
                r: r.into_iter().collect(),
                x: x.into_iter().filter(|&v| v < h).collect(),
            })
    })
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Sweep window `[0, 10·lcm·max(thresholds))` used by every oracle comparison.
pub fn window(a: &RawSet, b: &RawSet) -> u64 {
    10 * lcm(a.p, b.p) * a.h.max(b.h).max(1)
}

pub fn table_of(s: &UPSet, len: u64) -> Vec<bool> {
    (0..len).map(|n| s.member(n)).collect()
}
