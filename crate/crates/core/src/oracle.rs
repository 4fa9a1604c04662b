//! Brute-force cross-checks for the closed forms in [`crate::planner`] and the
//! schedule in [`crate::codec`].
//!
//! Nothing here calls the code it checks: feasibility is evaluated subset by
//! subset, the minimum is found by enumerating plans in order of increasing
//! total, and decodability is a rank computation written independently of the
//! incremental decoder.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::codec::{build_schedule, Schedule};
use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::planner::{check_feasibility, plan_transmissions, TransmissionPlan};

/// Largest `n` for [`exhaustive_feasibility`] (`2^(n-1)` subsets per client).
pub const EXHAUSTIVE_MAX_N: usize = 16;
/// Largest `n` for [`brute_force_minimum`].
pub const BRUTE_FORCE_MAX_N: usize = 6;
/// Largest `n` accepted by [`verify_sweep`].
pub const SWEEP_MAX_N: usize = 20;

/// Checks every non-empty subset `S` of the clients other than each
/// privileged client: `sum(y_j for j in S) >= |S|(|S|-1)/2`.
pub fn exhaustive_feasibility(plan: &TransmissionPlan, instance: &ProblemInstance) -> Result<bool> {
    let n = instance.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLargeForOracle {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    if plan.len() != n {
        return Err(Error::PlanLength {
            expected: n,
            actual: plan.len(),
        });
    }
    let y = plan.counts();
    for i in 0..instance.k() {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| y[j]).collect();
        for mask in 1u32..(1 << others.len()) {
            let l = mask.count_ones() as usize;
            let sum: usize = others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, v)| v)
                .sum();
            if sum < l * (l - 1) / 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Calls `f` with every way of writing `total` as `parts` ordered
/// non-negative summands, in lexicographic order. Stops early on `Break`.
pub fn for_each_composition<F>(total: usize, parts: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn go<F: FnMut(&[usize]) -> ControlFlow<()>>(
        buf: &mut Vec<usize>,
        left: usize,
        parts: usize,
        f: &mut F,
    ) -> ControlFlow<()> {
        if buf.len() + 1 == parts {
            buf.push(left);
            let flow = f(buf);
            buf.pop();
            return flow;
        }
        for v in 0..=left {
            buf.push(v);
            let flow = go(buf, left - v, parts, f);
            buf.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    if parts == 0 {
        return if total == 0 { f(&[]) } else { ControlFlow::Continue(()) };
    }
    go(&mut Vec::with_capacity(parts), total, parts, &mut f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub instance: ProblemInstance,
    /// Smallest total of any feasible plan. Every plan with a smaller total
    /// was enumerated and found infeasible.
    pub minimum_total: usize,
    /// First feasible plan of that total in lexicographic order.
    pub witness_plan: TransmissionPlan,
    pub plans_examined: u64,
}

/// Searches totals `0, 1, 2, …` until some plan passes
/// [`exhaustive_feasibility`].
pub fn brute_force_minimum(instance: &ProblemInstance) -> Result<OracleResult> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLargeForOracle {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let mut examined = 0u64;
    // every client sending n-1 is always feasible, so the loop ends by n(n-1)
    for total in 0..=n * (n - 1) {
        let mut witness = None;
        let _ = for_each_composition(total, n, |y| {
            examined += 1;
            let plan = TransmissionPlan::new(y.to_vec());
            if exhaustive_feasibility(&plan, instance) == Ok(true) {
                witness = Some(plan);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if let Some(witness_plan) = witness {
            return Ok(OracleResult {
                instance: *instance,
                minimum_total: total,
                witness_plan,
                plans_examined: examined,
            });
        }
    }
    unreachable!("the all-(n-1) plan is feasible")
}

fn gf2_rank(mut rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let (w, b) = (col / 64, col % 64);
        let Some(pos) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pos);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                row.iter_mut().zip(&pivot).for_each(|(a, p)| *a ^= p);
            }
        }
        rank += 1;
    }
    rank
}

/// For each privileged client, stacks unit rows for the pairs it holds on top
/// of every coding vector it receives and checks the GF(2) rank is full.
pub fn decodability_rank_check(instance: &ProblemInstance, schedule: &Schedule) -> bool {
    let column: HashMap<_, _> = instance.pairs().enumerate().map(|(c, p)| (p, c)).collect();
    let cols = column.len();
    let words = cols.div_ceil(64).max(1);
    let row_of = |pairs: &mut dyn Iterator<Item = _>| {
        let mut row = vec![0u64; words];
        for p in pairs {
            let c = column[&p];
            row[c / 64] ^= 1 << (c % 64);
        }
        row
    };
    instance.privileged().all(|client| {
        let mut rows: Vec<Vec<u64>> = instance
            .pairs()
            .filter(|p| p.involves(client))
            .map(|p| row_of(&mut std::iter::once(p)))
            .collect();
        rows.extend(
            schedule
                .entries()
                .iter()
                .filter(|e| e.sender != client)
                .map(|e| row_of(&mut e.vector.support().iter().copied())),
        );
        gf2_rank(rows, cols) == cols
    })
}

/// One `(n, k)` line of a verification sweep. `None` means the tier was
/// skipped because `n` is past its bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyCell {
    pub n: usize,
    pub k: usize,
    pub brute_force: Option<bool>,
    pub feasibility: Option<bool>,
    pub decodable: bool,
}

impl VerifyCell {
    pub fn passed(&self) -> bool {
        self.brute_force != Some(false) && self.feasibility != Some(false) && self.decodable
    }
}

/// Checks `optimum` against the oracles for every `1 <= k <= n <= n_max`:
///
/// * brute force (`n <= 6`): the exhaustive minimum equals `optimum`;
/// * feasibility (`n <= 16`): the optimal plan sums to `optimum` and both the
///   sorted-prefix and the subset-by-subset checks accept it;
/// * decodability: the schedule has `optimum` entries and full rank at every
///   privileged client.
///
/// `optimum` is a parameter so that a deliberately wrong formula can be shown
/// to fail.
pub fn verify_sweep<F>(n_max: usize, optimum: F) -> Result<Vec<VerifyCell>>
where
    F: Fn(&ProblemInstance) -> usize,
{
    if n_max > SWEEP_MAX_N {
        return Err(Error::TooLargeForOracle {
            n: n_max,
            max: SWEEP_MAX_N,
        });
    }
    let mut cells = Vec::new();
    for n in 2..=n_max {
        for k in 1..=n {
            let instance = ProblemInstance::new(n, k)?;
            let expected = optimum(&instance);
            let brute_force = if n <= BRUTE_FORCE_MAX_N {
                Some(brute_force_minimum(&instance)?.minimum_total == expected)
            } else {
                None
            };
            let feasibility = if n <= EXHAUSTIVE_MAX_N {
                let plan = plan_transmissions(&instance);
                Some(
                    plan.total() == expected
                        && check_feasibility(&plan, &instance)?
                        && exhaustive_feasibility(&plan, &instance)?,
                )
            } else {
                None
            };
            let schedule = build_schedule(&instance);
            let decodable =
                schedule.len() == expected && decodability_rank_check(&instance, &schedule);
            cells.push(VerifyCell {
                n,
                k,
                brute_force,
                feasibility,
                decodable,
            });
        }
    }
    Ok(cells)
}
