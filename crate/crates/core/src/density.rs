//! Exact densities of outputs inside `K` and the good/bad partition of
//! adversary strings used by the counting argument.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::engine::{analyze, Transcript};
use crate::error::{Error, Result};
use crate::upset::{Rational, UPSet};

/// `|{x ∈ o : x among the first n strings of k}| / n`.
///
/// `o` must be sorted and contained in `k`.
pub fn prefix_density(o: &[u64], k: &UPSet, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("prefix length must be at least 1".into()));
    }
    if !k.is_infinite() {
        return Err(Error::Domain("K must be infinite".into()));
    }
    if let Some(x) = o.iter().find(|&&x| !k.member(x)) {
        return Err(Error::Domain(format!("{x} is not a member of K")));
    }
    Ok(Rational::new(count_in_prefix(o, k, n) as i64, n as i64))
}

/// Members of sorted `o` at or below the `n`-th string of `k`.
fn count_in_prefix(o: &[u64], k: &UPSet, n: u64) -> u64 {
    let last = k.nth(n - 1).expect("infinite K");
    o.partition_point(|&x| x <= last) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCurve {
    pub points: Vec<(u64, Rational)>,
}

fn ratio_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ratio<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_text(r))
}

impl Serialize for DensityCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pts: Vec<(u64, String)> = self.points.iter().map(|(n, v)| (*n, ratio_text(v))).collect();
        pts.serialize(s)
    }
}

impl DensityCurve {
    /// Two columns: `N` and the exact value as `numerator/denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,density\n");
        for (n, v) in &self.points {
            let _ = writeln!(out, "{n},{}", ratio_text(v));
        }
        out
    }
}

/// Density of sorted `o ⊆ k` at each checkpoint.
pub fn curve_of(o: &[u64], k: &UPSet, checkpoints: &[u64]) -> Result<DensityCurve> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("checkpoints must be strictly increasing".into()));
    }
    let points = checkpoints.iter().map(|&n| prefix_density(o, k, n).map(|d| (n, d))).collect::<Result<_>>()?;
    Ok(DensityCurve { points })
}

/// Curve of the valid outputs of a run.
pub fn density_curve(tr: &Transcript, checkpoints: &[u64]) -> Result<DensityCurve> {
    curve_of(&tr.valid_outputs(), &tr.k, checkpoints)
}

/// Minimum over checkpoints `N ≥ burn · N_max`.
pub fn empirical_lower(curve: &DensityCurve, burn: Rational) -> Result<Rational> {
    let max = curve.points.last().ok_or_else(|| Error::Domain("empty density curve".into()))?.0;
    let from = burn * Rational::from_integer(max as i64);
    curve
        .points
        .iter()
        .filter(|(n, _)| Rational::from_integer(*n as i64) >= from)
        .map(|p| p.1)
        .min()
        .ok_or_else(|| Error::Domain("every checkpoint lies inside the burn window".into()))
}

/// `count` checkpoints evenly spaced from `lo` to `hi` inclusive.
pub fn linear_checkpoints(lo: u64, hi: u64, count: u64) -> Vec<u64> {
    match count {
        0 => vec![],
        1 => vec![hi],
        _ => {
            let mut v: Vec<u64> = (0..count).map(|i| lo + (hi - lo) * i / (count - 1)).collect();
            v.dedup();
            v
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `B_g = {w_t ∈ C∖O : o_{t−1} ≤ succ_K(w_t)}`; checks `3|O| + 2T ≥ |C|`.
    Weak,
    /// `B_g = {w_t ∈ C∖(P∪O) : max P_{t−1} ≤ succ_K(w_t)}`; checks
    /// `(2 + 4/s)|O| + slack ≥ |C|` with `slack = T + s² + 4s`.
    Pod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub n: u64,
    pub outputs: u64,
    pub c_count: u64,
    pub good: u64,
    pub bad: u64,
    #[serde(serialize_with = "ratio")]
    pub lhs: Rational,
    #[serde(serialize_with = "ratio")]
    pub margin: Rational,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.margin >= Rational::from_integer(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GbReport {
    pub variant: Variant,
    /// Smallest pod size of the run (pod variant).
    pub s: Option<u64>,
    /// Last step with an invalid output or a hypothesis outside `K`.
    pub t_observed: u64,
    #[serde(serialize_with = "ratio")]
    pub slack: Rational,
    /// Good adversary strings, ascending.
    pub good: Vec<u64>,
    /// Bad adversary strings, ascending.
    pub bad: Vec<u64>,
    pub checks: Vec<InequalityCheck>,
}

/// Splits the adversary strings of `C∖O` (pod: `C∖(P∪O)`) into good and bad
/// and checks the counting inequality at each prefix length in `ns`.
/// At `t = 1` the goodness condition holds vacuously.
pub fn gb_partition(tr: &Transcript, ns: &[u64]) -> Result<GbReport> {
    let c = tr
        .c
        .target()
        .ok_or_else(|| Error::Config("the partition needs a declared C".into()))?
        .clone();
    let pods = tr.steps.iter().all(|s| s.pod.is_some());
    let variant = if pods {
        Variant::Pod
    } else if tr.learner == "weak_density" {
        Variant::Weak
    } else {
        return Err(Error::Config(format!(
            "the partition applies to the weak density and pod learners, not {}",
            tr.learner
        )));
    };
    let k = &tr.k;
    let outputs = tr.valid_outputs();
    let out_set: HashSet<u64> = outputs.iter().copied().collect();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (i, s) in tr.steps.iter().enumerate() {
        if !c.member(s.w) || out_set.contains(&s.w) {
            continue;
        }
        if variant == Variant::Pod && s.pod.is_some_and(|p| p.w_pooled) {
            continue;
        }
        let succ = k.successor(s.w)?;
        let behind = match (i, variant) {
            (0, _) => None,
            (_, Variant::Weak) => Some(tr.steps[i - 1].o),
            (_, Variant::Pod) => tr.steps[i - 1].pod.map(|p| p.max),
        };
        if behind.is_none_or(|b| b <= succ) {
            good.push(s.w);
        } else {
            bad.push(s.w);
        }
    }
    good.sort_unstable();
    bad.sort_unstable();

    let rep = analyze(tr);
    let t_observed = rep.last_invalid_t.max(rep.last_not_contained_t).unwrap_or(0);
    let s = pods.then(|| tr.steps.iter().filter_map(|s| s.pod.map(|p| p.size)).min().unwrap_or(0));
    let int = |x: u64| Rational::from_integer(x as i64);
    let (factor, slack) = match (variant, s) {
        (Variant::Pod, Some(s)) if s > 0 => {
            (int(2) + Rational::new(4, s as i64), int(t_observed) + int(s * s) + int(4 * s))
        }
        (Variant::Pod, _) => return Err(Error::Domain("run has no pods".into())),
        (Variant::Weak, _) => (int(3), int(2 * t_observed)),
    };
    let mut checks = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(Error::Domain("prefix length must be at least 1".into()));
        }
        let last = k.nth(n - 1)?;
        let o = count_in_prefix(&outputs, k, n);
        let c_count = c.intersect(k).rank(last + 1);
        let lhs = factor * int(o) + slack;
        checks.push(InequalityCheck {
            n,
            outputs: o,
            c_count,
            good: good.partition_point(|&x| x <= last) as u64,
            bad: bad.partition_point(|&x| x <= last) as u64,
            lhs,
            margin: lhs - int(c_count),
        });
    }
    Ok(GbReport { variant, s, t_observed, slack, good, bad, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn prefix_density_examples() {
        assert_eq!(prefix_density(&[0, 2, 4], &UPSet::naturals(), 6).unwrap(), r(1, 2));
        let k = UPSet::multiples(3);
        let first: Vec<u64> = k.iter().take(10).collect();
        assert_eq!(prefix_density(&first, &k, 10).unwrap(), r(1, 1));
        assert!(prefix_density(&[1], &k, 4).is_err());
        assert_eq!(prefix_density(&[], &k, 4).unwrap(), r(0, 1));
    }

    #[test]
    fn empirical_lower_examples() {
        let flat = DensityCurve { points: vec![(10, r(1, 2)), (20, r(1, 2))] };
        assert_eq!(empirical_lower(&flat, r(1, 3)).unwrap(), r(1, 2));
        let c = DensityCurve { points: vec![(10, r(1, 2)), (20, r(1, 3)), (30, r(1, 2))] };
        assert_eq!(empirical_lower(&c, r(1, 2)).unwrap(), r(1, 3));
        assert_eq!(empirical_lower(&c, r(0, 1)).unwrap(), r(1, 3));
        assert!(empirical_lower(&DensityCurve { points: vec![] }, r(1, 2)).is_err());
    }

    #[test]
    fn checkpoints_are_even() {
        assert_eq!(linear_checkpoints(10, 100, 10), vec![10, 20, 30, 40, 50, 60, 70, 80, 90, 100]);
        assert_eq!(linear_checkpoints(5, 5, 3), vec![5]);
    }

    #[test]
    fn csv_has_exact_values() {
        let c = DensityCurve { points: vec![(4, r(2, 4)), (6, r(1, 3))] };
        assert_eq!(c.to_csv(), "N,density\n4,1/2\n6,1/3\n");
    }
}
