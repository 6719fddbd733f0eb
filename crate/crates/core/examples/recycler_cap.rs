//! The recycling adversary holds every learner near half of ℕ.

use std::sync::Arc;

use limitgen::adversary::AdversarySpec;
use limitgen::engine::{run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec, Schedule};
use limitgen::Family;

fn main() {
    let family = Arc::new(Family::builtin("ex1-cosingleton-with-N").unwrap());
    let n = 20_000u64;
    for spec in [LearnerSpec::pod(Schedule::Linear), LearnerSpec::new(LearnerKind::WeakDensity), LearnerSpec::new(LearnerKind::NaiveChain)] {
        let mut a = AdversarySpec::Recycler.build(&family, 0, 0).unwrap();
        let mut l = spec.build(&family).unwrap();
        let tr = run(&family, 0, a.as_mut(), l.as_mut(), &RunOptions::new(n)).unwrap();
        let outputs = tr.valid_outputs();
        let worst = (1..=n)
            .map(|m| outputs.partition_point(|&x| x < m) as f64 - (m as f64 / 2.0 + 2.0 * (m as f64).log2() + 4.0))
            .fold(f64::NEG_INFINITY, f64::max);
        println!("{:<14} outputs below {n}: {:>6}, largest excess over n/2 + 2 log n + 4: {worst:.2}", tr.learner, outputs.partition_point(|&x| x < n));
    }
}
