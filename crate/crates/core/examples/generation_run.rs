//! A naive-chain learner generating from a partial enumeration.

use std::sync::Arc;

use limitgen::adversary::{AdversarySpec, Policy};
use limitgen::engine::{analyze, run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec};
use limitgen::{Family, UPSet};

fn main() {
    let family = Arc::new(Family::builtin("ex3-cosingleton").unwrap());
    let adversary = AdversarySpec::Fixed { c: UPSet::evens(), policy: Policy::BlockShuffle { block_len: 16 } };
    let mut a = adversary.build(&family, 0, 42).unwrap();
    let mut l = LearnerSpec::new(LearnerKind::NaiveChain).build(&family).unwrap();
    let opts = RunOptions { seed: 42, want_indices: true, ..RunOptions::new(2_000) };
    let tr = run(&family, 0, a.as_mut(), l.as_mut(), &opts).unwrap();
    for s in tr.steps.iter().take(8) {
        println!("t={:<3} w={:<4} o={:<4} valid={} indices={:?}", s.t, s.w, s.o, s.valid, s.indices.as_deref().unwrap_or(&[]));
    }
    let rep = analyze(&tr);
    println!("invalid outputs: {}, last at {:?}", rep.invalid_count, rep.last_invalid_t);
    println!("{}", serde_json::to_string_pretty(&rep).unwrap());
}
