//! Identification by greatest common divisor for multiples and arithmetic
//! progression families.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::family::{Family, Schema};
use crate::upset::UPSet;

use super::alg1::pick;
use super::{Learner, Move, SetTag, UnusedScan, Used};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Multiples,
    Arith,
}

/// `M_t = {a + k·g}` with `g` the gcd of the inputs (of their differences,
/// for progressions) and `a` the smallest input; `gℕ` for multiples.
/// While `g = 0` (one distinct input) the step is taken as 1. Strings removed
/// from the family are removed from `M_t` too. `indices` holds the family index
/// equal to `M_t`, or nothing when `M_t` is not a member.
pub struct GcdLearner {
    family: Arc<Family>,
    shape: Shape,
    min: Option<u64>,
    g: u64,
    hyp: Arc<UPSet>,
    epoch: u64,
    used: Used,
    scan: UnusedScan,
}

impl GcdLearner {
    pub fn new(family: Arc<Family>) -> Result<GcdLearner> {
        let shape = match (family.explicit().len(), family.schemas()) {
            (0, [Schema::Multiples { .. }]) => Shape::Multiples,
            (0, [Schema::ArithProg { .. }]) => Shape::Arith,
            _ => {
                return Err(Error::Config(format!(
                    "gcd learner needs a multiples or arithProg family, got '{}'",
                    family.name()
                )))
            }
        };
        Ok(GcdLearner {
            family,
            shape,
            min: None,
            g: 0,
            hyp: Arc::new(UPSet::naturals()),
            epoch: 0,
            used: Used::new(),
            scan: UnusedScan::default(),
        })
    }

    fn hypothesis(&self) -> UPSet {
        let step = if self.g == 0 { 1 } else { self.g };
        let (Schema::Multiples { removed } | Schema::ArithProg { removed }) = &self.family.schemas()[0] else {
            unreachable!("shape checked at construction")
        };
        let m = match self.shape {
            Shape::Multiples => UPSet::multiples(step),
            Shape::Arith => UPSet::arith(self.min.expect("an input was seen"), step),
        };
        m.without(removed.iter().copied())
    }
}

impl Learner for GcdLearner {
    fn name(&self) -> String {
        "gcd".into()
    }

    fn step(&mut self, t: u64, w: u64, want_indices: bool) -> Result<Move> {
        self.used.insert(w);
        match self.shape {
            Shape::Multiples => self.g = self.g.gcd(&w),
            Shape::Arith => match self.min {
                None => self.min = Some(w),
                Some(a) if w < a => {
                    self.g = self.g.gcd(&(a - w));
                    self.min = Some(w);
                }
                Some(a) => self.g = self.g.gcd(&(w - a)),
            },
        }
        let hyp = self.hypothesis();
        if hyp != *self.hyp {
            // A new minimum or a finer step can enlarge the hypothesis.
            if !hyp.is_subset(&self.hyp) {
                self.epoch += 1;
            }
            self.hyp = Arc::new(hyp);
        }
        let tag = SetTag { epoch: self.epoch, t };
        let output = pick(&mut self.scan, &self.hyp, tag, &self.used);
        self.used.insert(output);
        let indices = want_indices.then(|| self.family.first_index_equal(&self.hyp).into_iter().collect());
        Ok(Move { output, hyp: self.hyp.clone(), indices, pod: None })
    }
}
