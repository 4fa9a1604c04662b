//! How many packets each client broadcasts.
//!
//! The optimum is `(n-1)(n-2)/2 + ceil((k-2)/2)`. The ceiling is evaluated as
//! `floor((k-1)/2)`, which agrees for every `k >= 1` and never sees a negative
//! operand.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ClientId, ProblemInstance};

/// Per-client broadcast counts `y_1..y_n`.
///
/// Plans carry no instance, so arbitrary or perturbed plans can be checked
/// against any instance of matching size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransmissionPlan {
    counts: Vec<usize>,
}

impl TransmissionPlan {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `y_i` for a 1-based client, or `None` past the end.
    pub fn count(&self, client: ClientId) -> Option<usize> {
        self.counts.get(client.index() - 1).copied()
    }

    /// `Y`, the total number of transmissions.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        self.counts.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn to_record(&self, instance: &ProblemInstance) -> PlanRecord {
        PlanRecord {
            n: instance.n(),
            k: instance.k(),
            y: self.counts.clone(),
            total: self.total(),
        }
    }

    fn check_len(&self, instance: &ProblemInstance) -> Result<()> {
        if self.len() != instance.n() {
            return Err(Error::PlanLength {
                expected: instance.n(),
                actual: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TransmissionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

impl FromStr for TransmissionPlan {
    type Err = Error;

    /// Parses the single CSV row `y1,...,yN`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse("plan", s));
        }
        s.split(',')
            .map(|c| c.trim().parse().map_err(|_| Error::parse("plan", s)))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// Structured form of a plan: `{"n":…,"k":…,"y":[…],"total":…}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub n: usize,
    pub k: usize,
    pub y: Vec<usize>,
    pub total: usize,
}

impl PlanRecord {
    /// Rebuilds the plan, rejecting records whose length or total disagree.
    pub fn into_plan(self) -> Result<(ProblemInstance, TransmissionPlan)> {
        let instance = ProblemInstance::new(self.n, self.k)?;
        let plan = TransmissionPlan::new(self.y);
        plan.check_len(&instance)?;
        if plan.total() != self.total {
            return Err(Error::parse("plan record total", self.total.to_string()));
        }
        Ok((instance, plan))
    }
}

/// Minimum total number of broadcasts.
pub fn optimal_count(instance: &ProblemInstance) -> usize {
    let n = instance.n();
    let k = instance.k();
    (n - 1) * (n - 2) / 2 + (k - 1) / 2
}

/// Transmissions needed when every packet is sent uncoded.
///
/// With `k >= 3` every pair is missing at some privileged client, so all
/// `n(n-1)/2` packets go out; with `k = 2` the pair `{1,2}` is already held by
/// both privileged clients.
pub fn baseline_no_coding_count(instance: &ProblemInstance) -> Result<usize> {
    match instance.k() {
        1 => Err(Error::BaselineUndefined),
        2 => Ok(instance.universe_size() - 1),
        _ => Ok(instance.universe_size()),
    }
}

/// The optimal plan.
///
/// Clients `1..k-1` send `ceil(k/2 - 1)`, client `k` sends `k/2 - 1` when `k`
/// is even and nothing when it is odd, and client `i > k` sends `n + k - i - 1`.
/// For `k = 1` this gives `y_1 = 0` and `y_i = n - i`.
pub fn plan_transmissions(instance: &ProblemInstance) -> TransmissionPlan {
    let n = instance.n();
    let k = instance.k();
    let head = (k - 1) / 2; // ceil(k/2 - 1) for k >= 1
    let last = if k.is_multiple_of(2) { k / 2 - 1 } else { 0 };
    let counts = (1..=n)
        .map(|i| match i {
            i if i < k => head,
            i if i == k => last,
            i => n + k - i - 1,
        })
        .collect();
    TransmissionPlan::new(counts)
}

pub fn plan_total(plan: &TransmissionPlan) -> usize {
    plan.total()
}

/// Whether every privileged client, for every `l`, hears at least `l(l-1)/2`
/// packets from any `l` other clients.
///
/// Only the `l` smallest counts among the other clients matter, so each
/// privileged client costs one sort.
pub fn check_feasibility(plan: &TransmissionPlan, instance: &ProblemInstance) -> Result<bool> {
    plan.check_len(instance)?;
    let counts = plan.counts();
    let mut others = Vec::with_capacity(counts.len());
    for i in 0..instance.k() {
        others.clear();
        others.extend(counts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y));
        others.sort_unstable();
        let mut sum = 0;
        for (l, y) in (1..).zip(&others) {
            sum += y;
            if sum < l * (l - 1) / 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, k: usize) -> ProblemInstance {
        ProblemInstance::new(n, k).unwrap()
    }

    #[test]
    fn optimal_count_examples() {
        assert_eq!(optimal_count(&inst(6, 3)), 11);
        assert_eq!(optimal_count(&inst(4, 2)), 3);
        assert_eq!(optimal_count(&inst(15, 15)), 98);
        assert_eq!(optimal_count(&inst(2, 2)), 0);
        assert_eq!(optimal_count(&inst(5, 3)), 7);
    }

    #[test]
    fn ceiling_identity_holds() {
        // ceil((k-2)/2) over the rationals vs floor((k-1)/2)
        for k in 1i64..200 {
            let direct = ((k as f64 - 2.0) / 2.0).ceil() as i64;
            assert_eq!(direct, (k - 1) / 2, "k={k}");
        }
    }

    #[test]
    fn baseline_examples() {
        assert_eq!(baseline_no_coding_count(&inst(4, 2)), Ok(5));
        assert_eq!(baseline_no_coding_count(&inst(4, 3)), Ok(6));
        assert_eq!(baseline_no_coding_count(&inst(15, 2)), Ok(104));
        assert_eq!(baseline_no_coding_count(&inst(15, 3)), Ok(105));
        assert_eq!(baseline_no_coding_count(&inst(2, 2)), Ok(0));
        assert_eq!(baseline_no_coding_count(&inst(5, 1)), Err(Error::BaselineUndefined));
    }

    #[test]
    fn plan_examples() {
        assert_eq!(plan_transmissions(&inst(6, 3)).counts(), &[1, 1, 0, 4, 3, 2]);
        assert_eq!(plan_transmissions(&inst(2, 2)).counts(), &[0, 0]);
        assert_eq!(plan_transmissions(&inst(6, 4)).counts(), &[1, 1, 1, 1, 4, 3]);
        assert_eq!(plan_transmissions(&inst(5, 1)).counts(), &[0, 3, 2, 1, 0]);
    }

    #[test]
    fn plan_total_examples() {
        assert_eq!(plan_total(&TransmissionPlan::new(vec![1, 1, 0, 4, 3, 2])), 11);
        assert_eq!(plan_total(&TransmissionPlan::new(vec![0, 0])), 0);
        assert_eq!(plan_total(&plan_transmissions(&inst(12, 10))), 59);
    }

    #[test]
    fn feasibility_examples() {
        let i = inst(6, 3);
        assert_eq!(check_feasibility(&plan_transmissions(&i), &i), Ok(true));
        assert_eq!(check_feasibility(&TransmissionPlan::new(vec![0; 4]), &inst(4, 2)), Ok(false));
        assert_eq!(
            check_feasibility(&TransmissionPlan::new(vec![1, 1, 0, 4, 3, 1]), &i),
            Ok(false)
        );
        assert_eq!(
            check_feasibility(&TransmissionPlan::new(vec![0; 3]), &i),
            Err(Error::PlanLength { expected: 6, actual: 3 })
        );
    }

    #[test]
    fn plan_serialization() {
        let i = inst(6, 3);
        let plan = plan_transmissions(&i);
        assert_eq!(plan.to_csv(), "1,1,0,4,3,2");
        assert_eq!("1,1,0,4,3,2".parse::<TransmissionPlan>().unwrap(), plan);
        assert!("1,,2".parse::<TransmissionPlan>().is_err());
        assert!("".parse::<TransmissionPlan>().is_err());
        let json = serde_json::to_string(&plan.to_record(&i)).unwrap();
        assert_eq!(json, r#"{"n":6,"k":3,"y":[1,1,0,4,3,2],"total":11}"#);
        let back: PlanRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_plan().unwrap(), (i, plan));
        let bad: PlanRecord = serde_json::from_str(r#"{"n":6,"k":3,"y":[1,1,0,4,3,2],"total":12}"#).unwrap();
        assert!(bad.into_plan().is_err());
    }

    #[test]
    fn optimum_and_plan_agree_up_to_fifty() {
        for n in 2..=50 {
            for k in 1..=n {
                let i = inst(n, k);
                let plan = plan_transmissions(&i);
                assert_eq!(plan.len(), n);
                assert_eq!(plan.total(), optimal_count(&i), "{i}");
                assert_eq!(check_feasibility(&plan, &i), Ok(true), "{i}");
            }
        }
    }

    #[test]
    fn monotonicity() {
        for n in 2..=50 {
            for k in 2..=n {
                let here = optimal_count(&inst(n, k));
                if k > 2 {
                    assert!(optimal_count(&inst(n, k - 1)) <= here);
                }
                if n >= 3 {
                    assert!(optimal_count(&inst(n, k)) < optimal_count(&inst(n + 1, k)));
                }
                let base = baseline_no_coding_count(&inst(n, k)).unwrap();
                assert!(here <= base);
                assert_eq!(here == base, n == 2, "{n} {k}");
            }
        }
    }
}
