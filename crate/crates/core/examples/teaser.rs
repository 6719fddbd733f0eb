//! A chain teaser built from a limit-point witness keeps the identifier switching.

use std::sync::Arc;

use limitgen::adversary::AdversarySpec;
use limitgen::engine::{analyze, run, RunOptions};
use limitgen::learner::{LearnerKind, LearnerSpec};
use limitgen::topology::{identifiable_partial, Catalog};
use limitgen::Family;

fn main() {
    for name in ["ex1-cosingleton-with-N", "ex2-specials", "ex3-cosingleton"] {
        let family = Arc::new(Family::builtin(name).unwrap());
        let verdict = identifiable_partial(&family, &Catalog::SchemaAuto).unwrap();
        let w = verdict.witness.expect("coSingleton families have a limit point");
        let adv = AdversarySpec::Teaser { c: w.c.clone(), patience: 10 };
        let mut a = adv.build(&family, w.target, 0).unwrap();
        let mut l = LearnerSpec::new(LearnerKind::Identifier).build(&family).unwrap();
        let tr = run(&family, w.target, a.as_mut(), l.as_mut(), &RunOptions::new(2_000)).unwrap();
        let rep = analyze(&tr);
        println!("{name}: target {}, c = {}: {} mind changes, stabilization {:?}", w.target_label, w.c, rep.mind_changes, rep.stabilization_t);
    }
}
