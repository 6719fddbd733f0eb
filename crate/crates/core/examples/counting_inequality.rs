//! Good/bad split of adversary strings and the counting inequality on pod runs.

use std::sync::Arc;

use limitgen::adversary::{AdversarySpec, Policy};
use limitgen::density::gb_partition;
use limitgen::engine::{run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec, Schedule};
use limitgen::Family;

fn main() {
    let family = Arc::new(Family::builtin("ex1-cosingleton-with-N").unwrap());
    for spec in [LearnerSpec::pod(Schedule::Constant(4)), LearnerSpec::pod(Schedule::Constant(8)), LearnerSpec::new(LearnerKind::WeakDensity)] {
        let adv = AdversarySpec::Density { alpha: "1".into(), policy: Policy::Increasing };
        let mut a = adv.build(&family, 0, 0).unwrap();
        let mut l = spec.build(&family).unwrap();
        let tr = run(&family, 0, a.as_mut(), l.as_mut(), &RunOptions::new(5_000)).unwrap();
        let gb = gb_partition(&tr, &[500, 5_000]).unwrap();
        println!("{} ({:?}, s = {:?}, T = {}):", tr.learner, gb.variant, gb.s, gb.t_observed);
        for c in &gb.checks {
            println!("  N={:<5} |O|={:<5} |C|={:<5} good={:<5} bad={:<5} margin {}", c.n, c.outputs, c.c_count, c.good, c.bad, c.margin);
        }
    }
}
