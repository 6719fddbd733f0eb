//! Pod and weak density learners against density-α enumerations of ℕ.

use std::sync::Arc;

use limitgen::adversary::{AdversarySpec, Policy};
use limitgen::density::{density_curve, empirical_lower, linear_checkpoints};
use limitgen::engine::{run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec, Schedule};
use limitgen::{Family, Rational};

fn main() {
    let family = Arc::new(Family::builtin("ex1-cosingleton-with-N").unwrap());
    let checkpoints = linear_checkpoints(2_000, 20_000, 10);
    for alpha in ["1", "1/2", "1/4"] {
        for learner in [LearnerSpec::pod(Schedule::Linear), LearnerSpec::new(LearnerKind::WeakDensity)] {
            let adv = AdversarySpec::Density { alpha: alpha.into(), policy: Policy::Increasing };
            let mut a = adv.build(&family, 0, 1).unwrap();
            let mut l = learner.build(&family).unwrap();
            let tr = run(&family, 0, a.as_mut(), l.as_mut(), &RunOptions::new(20_000)).unwrap();
            let curve = density_curve(&tr, &checkpoints).unwrap();
            let lower = empirical_lower(&curve, Rational::new(1, 2)).unwrap();
            println!("alpha {alpha:>3} {:<12} lower density {lower}", tr.learner);
        }
    }
}
