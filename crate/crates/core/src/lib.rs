//! Partial third-party information exchange over a lossless broadcast channel.
//!
//! `n` clients each know the channel-state packet they share with every other
//! client. The first `k` of them must end up knowing all `n(n-1)/2` packets.
//! This crate computes the minimum number of broadcasts, the per-client plan
//! that reaches it, a deterministic pairwise-XOR schedule, and a GF(2) decoder
//! plus simulator that checks every privileged client really decodes.
//!
//! ```
//! use csix_core::{build_schedule, optimal_count, run_exchange, ProblemInstance};
//!
//! let instance = ProblemInstance::new(6, 3)?;
//! assert_eq!(optimal_count(&instance), 11);
//! assert_eq!(build_schedule(&instance).entries()[1].vector.to_string(), "x[2,3]+x[1,2]");
//! assert!(run_exchange(&instance, 0, 32)?.success);
//! # Ok::<(), csix_core::Error>(())
//! ```

pub mod codec;
pub mod error;
pub mod gf2;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod simulator;

pub use codec::{
    build_schedule, decoder_init, encode, DecoderState, PayloadStore, Schedule, ScheduleEntry,
    ScheduleRecord, SenderRecord,
};
pub use error::{Error, Result};
pub use model::{
    local_set, wanted_set, ClientId, CodedPacket, CodingVector, PairId, Payload, ProblemInstance,
    WantedSet, DEFAULT_PAYLOAD_BITS,
};
pub use oracle::{
    brute_force_minimum, decodability_rank_check, exhaustive_feasibility, verify_sweep,
    OracleResult, VerifyCell,
};
pub use planner::{
    baseline_no_coding_count, check_feasibility, optimal_count, plan_total, plan_transmissions,
    PlanRecord, TransmissionPlan,
};
pub use simulator::{
    generate_payloads, run_exchange, simulate_schedule, ClientFailure, ClientReport,
    ExchangeReport, SplitMix64,
};
