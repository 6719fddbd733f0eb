//! Identification of C on multiples and arithmetic progressions.

use std::sync::Arc;

use limitgen::adversary::{AdversarySpec, Policy};
use limitgen::engine::{analyze, run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec};
use limitgen::{Family, Param, UPSet};

fn main() {
    let cases = [
        ("multiples", Param::Point(4), UPSet::multiples(12), LearnerKind::Gcd),
        ("arithprog", Param::Pair { i: 3, d: 3 }, UPSet::arith(3, 12), LearnerKind::Identifier),
        ("arithprog", Param::Pair { i: 3, d: 3 }, UPSet::arith(3, 12), LearnerKind::Gcd),
    ];
    for (name, k_param, c, kind) in cases {
        let family = Arc::new(Family::builtin(name).unwrap());
        let k = family.index_of_param(0, k_param).unwrap();
        let adv = AdversarySpec::Fixed { c: c.clone(), policy: Policy::Increasing };
        let mut a = adv.build(&family, k, 0).unwrap();
        let mut l = LearnerSpec::new(kind).build(&family).unwrap();
        let opts = RunOptions { keep_hypotheses: true, ..RunOptions::new(200) };
        let tr = run(&family, k, a.as_mut(), l.as_mut(), &opts).unwrap();
        let rep = analyze(&tr);
        let last = tr.steps.last().unwrap().hyp.clone().unwrap();
        println!("{name}: K = {}, C = {c}, {} stabilizes at {:?} on M = {last}", tr.k, tr.learner, rep.stabilization_t);
    }
}
