//! Element and hypothesis learners converted into each other.

use std::sync::Arc;

use limitgen::adversary::{AdversarySpec, Policy};
use limitgen::engine::{run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec, Wrap};
use limitgen::{Family, UPSet};

fn main() {
    let family = Arc::new(Family::builtin("ex5-finite").unwrap());
    let adv = AdversarySpec::Fixed { c: UPSet::multiples(4), policy: Policy::BlockShuffle { block_len: 4 } };
    let inner = LearnerSpec::new(LearnerKind::WeakDensity);
    let forward = inner.clone().wrapped(Wrap::Forward);
    let round_trip = forward.clone().wrapped(Wrap::Reverse);
    let opts = RunOptions { want_indices: true, keep_hypotheses: true, ..RunOptions::new(12) };
    for spec in [inner, forward, round_trip] {
        let mut a = adv.build(&family, 1, 3).unwrap();
        let mut l = spec.build(&family).unwrap();
        let tr = run(&family, 1, a.as_mut(), l.as_mut(), &opts).unwrap();
        let outs: Vec<u64> = tr.steps.iter().map(|s| s.o).collect();
        println!("{:<36} outputs {outs:?}", tr.learner);
        if let Some(s) = tr.steps.last() {
            println!("{:<36} last indices {:?}, M = {}", "", s.indices.as_deref().unwrap_or(&[]), s.hyp.as_ref().unwrap());
        }
    }
}
