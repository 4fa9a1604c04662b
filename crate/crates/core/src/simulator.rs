//! Lossless broadcast exchange: every transmitted packet reaches every other
//! client, each client runs its own decoder, and the recovered payloads are
//! compared against ground truth.
//!
//! # Payload generator
//!
//! Ground truth comes from SplitMix64 so that any implementation can reproduce
//! it from the seed alone. The state starts at `seed`; each draw does
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15          (wrapping)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9    (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB    (wrapping)
//! return z ^ (z >> 31)
//! ```
//!
//! Pairs are visited in rank order (`x[1,2], x[1,3], …, x[n-1,n]`). Each pair
//! takes `ceil(width / 64)` consecutive draws as little-endian words, and bits
//! at or above `width` in the last word are cleared.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codec::{build_schedule, decoder_init, encode, PayloadStore, Schedule};
use crate::error::{Error, Result};
use crate::model::{PairId, Payload, ProblemInstance};
use crate::planner::plan_transmissions;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Ground-truth payloads for every pair of `instance`.
pub fn generate_payloads(instance: &ProblemInstance, seed: u64, width: usize) -> Result<PayloadStore> {
    if width == 0 {
        return Err(Error::ZeroWidth);
    }
    let mut rng = SplitMix64::new(seed);
    let mut words = vec![0u64; width.div_ceil(64)];
    instance
        .pairs()
        .map(|p| {
            words.iter_mut().for_each(|w| *w = rng.next_u64());
            Payload::from_words(width, &words).map(|v| (p, v))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientReport {
    pub client: usize,
    pub privileged: bool,
    pub solved: usize,
    pub received: usize,
    pub redundant: usize,
    /// Recovered payloads that differ from ground truth.
    pub mismatched: usize,
}

/// Why the first failing privileged client failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientFailure {
    pub client: usize,
    pub missing: Vec<PairId>,
    pub mismatched: Vec<PairId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub payload_width: usize,
    pub universe_size: usize,
    pub total_transmissions: usize,
    pub clients: Vec<ClientReport>,
    pub success: bool,
    pub first_failure: Option<ClientFailure>,
}

impl ExchangeReport {
    pub fn per_client_solved_counts(&self) -> Vec<usize> {
        self.clients.iter().map(|c| c.solved).collect()
    }

    /// Redundant arrivals at `c_1..c_k`.
    pub fn redundant_per_privileged(&self) -> Vec<usize> {
        self.clients.iter().filter(|c| c.privileged).map(|c| c.redundant).collect()
    }
}

impl fmt::Display for ExchangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance: n={} k={}", self.n, self.k)?;
        writeln!(f, "payload: {} bits, seed {}", self.payload_width, self.seed)?;
        writeln!(f, "transmissions: {}", self.total_transmissions)?;
        for c in &self.clients {
            let role = if c.privileged { "privileged" } else { "passive" };
            writeln!(
                f,
                "c{}: solved {}/{} ({role}, {} received, {} redundant)",
                c.client, c.solved, self.universe_size, c.received, c.redundant
            )?;
        }
        if let Some(fail) = &self.first_failure {
            write!(f, "c{} failed:", fail.client)?;
            if !fail.missing.is_empty() {
                write!(f, " missing {}", join_pairs(&fail.missing))?;
            }
            if !fail.mismatched.is_empty() {
                write!(f, " wrong payload for {}", join_pairs(&fail.mismatched))?;
            }
            writeln!(f)?;
        }
        write!(f, "result: {}", if self.success { "SUCCESS" } else { "FAILURE" })
    }
}

fn join_pairs(pairs: &[PairId]) -> String {
    pairs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Builds the optimal schedule and plays it out.
pub fn run_exchange(instance: &ProblemInstance, seed: u64, width: usize) -> Result<ExchangeReport> {
    let schedule = build_schedule(instance);
    let plan = plan_transmissions(instance);
    let sent = schedule.sender_counts();
    for (client, (&expected, &actual)) in instance.clients().zip(plan.counts().iter().zip(sent.counts())) {
        if expected != actual {
            return Err(Error::ScheduleMismatch {
                client,
                expected,
                actual,
            });
        }
    }
    simulate_schedule(&schedule, seed, width)
}

/// Plays out any schedule. Each client hears every packet it did not send;
/// all clients decode, only `c_1..c_k` count towards success.
pub fn simulate_schedule(schedule: &Schedule, seed: u64, width: usize) -> Result<ExchangeReport> {
    let instance = schedule.instance();
    let truth = generate_payloads(instance, seed, width)?;
    let packets = schedule
        .entries()
        .iter()
        .map(|e| encode(e, &truth))
        .collect::<Result<Vec<_>>>()?;

    let mut clients = Vec::with_capacity(instance.n());
    let mut first_failure = None;
    for client in instance.clients() {
        let mut decoder = decoder_init(instance, client, &truth)?;
        for packet in packets.iter().filter(|p| p.sender() != client) {
            decoder.ingest(packet)?;
        }
        let mismatched: Vec<PairId> = decoder
            .solved()
            .iter()
            .filter(|(p, v)| truth.get(p) != Some(v))
            .map(|(p, _)| *p)
            .collect();
        let privileged = instance.is_privileged(client);
        if privileged && first_failure.is_none() && (!decoder.is_complete() || !mismatched.is_empty()) {
            first_failure = Some(ClientFailure {
                client: client.index(),
                missing: decoder.missing(),
                mismatched: mismatched.clone(),
            });
        }
        clients.push(ClientReport {
            client: client.index(),
            privileged,
            solved: decoder.solved().len(),
            received: decoder.received_count(),
            redundant: decoder.redundant_count(),
            mismatched: mismatched.len(),
        });
    }

    Ok(ExchangeReport {
        n: instance.n(),
        k: instance.k(),
        seed,
        payload_width: width,
        universe_size: instance.universe_size(),
        total_transmissions: packets.len(),
        clients,
        success: first_failure.is_none(),
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::ScheduleEntry;

    fn inst(n: usize, k: usize) -> ProblemInstance {
        ProblemInstance::new(n, k).unwrap()
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 as published with the reference generator
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn payload_generation() {
        assert_eq!(generate_payloads(&inst(2, 2), 7, 32).unwrap().len(), 1);
        let a = generate_payloads(&inst(6, 3), 42, 32).unwrap();
        assert_eq!(a.len(), 15);
        assert_eq!(a, generate_payloads(&inst(6, 3), 42, 32).unwrap());
        assert_ne!(a, generate_payloads(&inst(6, 3), 43, 32).unwrap());
        assert!(a.values().all(|p| p.width() == 32 && p.words()[0] >> 32 == 0));
        let wide = generate_payloads(&inst(3, 3), 1, 130).unwrap();
        assert!(wide.values().all(|p| p.words().len() == 3 && p.words()[2] >> 2 == 0));
        assert_eq!(generate_payloads(&inst(3, 3), 1, 0), Err(Error::ZeroWidth));
    }

    #[test]
    fn payloads_follow_rank_order_draws() {
        let i = inst(3, 3);
        let store = generate_payloads(&i, 5, 64).unwrap();
        let mut r = SplitMix64::new(5);
        for p in i.pairs() {
            assert_eq!(store[&p].words(), &[r.next_u64()]);
        }
    }

    #[test]
    fn exchange_examples() {
        let r = run_exchange(&inst(6, 3), 1, 32).unwrap();
        assert!(r.success);
        assert_eq!(r.total_transmissions, 11);
        assert_eq!(r.per_client_solved_counts()[..3], [15, 15, 15]);
        assert_eq!(r.redundant_per_privileged().len(), 3);

        let r = run_exchange(&inst(2, 2), 0, 32).unwrap();
        assert!(r.success);
        assert_eq!(r.total_transmissions, 0);

        let r = run_exchange(&inst(12, 10), 9, 32).unwrap();
        assert!(r.success);
        assert_eq!(r.total_transmissions, 59);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_exchange(&inst(8, 5), 3, 96).unwrap();
        let b = run_exchange(&inst(8, 5), 3, 96).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn truncated_schedule_reports_first_failure() {
        let i = inst(6, 3);
        let full = build_schedule(&i);
        let entries: Vec<ScheduleEntry> = full.entries()[..full.len() - 1].to_vec();
        let cut = Schedule::from_entries(i, entries).unwrap();
        let r = simulate_schedule(&cut, 0, 32).unwrap();
        assert!(!r.success);
        let fail = r.first_failure.as_ref().unwrap();
        // without x[1,6]+x[3,6], c_1 has no equation involving x[3,6]
        assert_eq!(fail.client, 1);
        assert_eq!(fail.missing, vec![i.pair(3, 6).unwrap()]);
        assert!(r.to_string().contains("c1 failed: missing x[3,6]"));
    }

    #[test]
    fn summary_shape() {
        let r = run_exchange(&inst(3, 3), 0, 32).unwrap();
        let text = r.to_string();
        assert!(text.starts_with("instance: n=3 k=3\n"));
        assert!(text.ends_with("result: SUCCESS"));
    }
}
