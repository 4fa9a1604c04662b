//! Deterministic pairwise XOR schedule and the GF(2) decoder that consumes it.
//!
//! Sender `i <= k` sends, for its `j`-th packet, `x[i,nxt(i)] + x[i,nxt(i+j)]`
//! with `nxt(m) = (m mod k) + 1`. When `k` is odd, `c_k` sends nothing, so the
//! last packet of each sender `i <= (k-1)/2` pairs its anchor with `x[i,k]`
//! instead; the pair it displaces, `x[i,i+(k+1)/2]`, is already carried by
//! the other endpoint. For `k = 3` and every even `k` the two rules coincide.
//!
//! Sender `i > k` first sends the `k-1` coded
//! packets `x[1,i] + x[1+j,i]` for `j < k`, then the uncoded packets
//! `x[i,i+j-k+1]` for `j >= k`, i.e. every pair it shares with a higher
//! numbered client.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitRow;
use crate::model::{
    check_sender_holds, local_set, ClientId, CodedPacket, CodingVector, PairId, Payload,
    ProblemInstance,
};
use crate::planner::{plan_transmissions, TransmissionPlan};

/// Ground-truth or locally known payloads keyed by pair.
pub type PayloadStore = BTreeMap<PairId, Payload>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub sender: ClientId,
    /// 1-based position among the sender's packets.
    pub j: usize,
    pub vector: CodingVector,
}

impl fmt::Display for ScheduleEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sender={} j={} packet={}",
            self.sender.index(),
            self.j,
            self.vector
        )
    }
}

impl std::str::FromStr for ScheduleEntry {
    type Err = Error;

    /// Parses `sender=<i> j=<j> packet=<vector>`.
    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::parse("schedule line", line);
        let mut fields = line.split_whitespace();
        let mut field = |key: &str| {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .ok_or_else(bad)
        };
        let sender = field("sender")?.parse::<usize>().map_err(|_| bad())?;
        let j = field("j")?.parse::<usize>().map_err(|_| bad())?;
        let vector: CodingVector = field("packet")?.parse()?;
        if fields.next().is_some() || j == 0 {
            return Err(bad());
        }
        let sender = ClientId::new(sender)?;
        check_sender_holds(sender, &vector)?;
        Ok(Self { sender, j, vector })
    }
}

/// Every transmission of one exchange, ordered by sender then `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    instance: ProblemInstance,
    entries: Vec<ScheduleEntry>,
}

impl Schedule {
    /// Wraps arbitrary entries after checking them against `instance`.
    /// No optimality or decodability is implied.
    pub fn from_entries(instance: ProblemInstance, entries: Vec<ScheduleEntry>) -> Result<Self> {
        for e in &entries {
            instance.client(e.sender.index())?;
            for p in e.vector.support() {
                instance.client(p.hi().index())?;
            }
            check_sender_holds(e.sender, &e.vector)?;
        }
        Ok(Self { instance, entries })
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of entries per sender, as a plan.
    pub fn sender_counts(&self) -> TransmissionPlan {
        let mut counts = vec![0; self.instance.n()];
        for e in &self.entries {
            counts[e.sender.index() - 1] += 1;
        }
        TransmissionPlan::new(counts)
    }

    pub fn entries_from(&self, sender: ClientId) -> impl Iterator<Item = &ScheduleEntry> {
        self.entries.iter().filter(move |e| e.sender == sender)
    }

    /// One `sender=<i> j=<j> packet=<vector>` line per entry.
    pub fn to_lines(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn parse_lines(instance: ProblemInstance, text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(instance, entries)
    }

    /// Per-sender view: each client with its count and rendered packets.
    pub fn to_record(&self) -> ScheduleRecord {
        let counts = self.sender_counts();
        ScheduleRecord {
            n: self.instance.n(),
            k: self.instance.k(),
            senders: self
                .instance
                .clients()
                .map(|c| SenderRecord {
                    sender: c.index(),
                    y: counts.count(c).unwrap_or(0),
                    packets: self.entries_from(c).map(|e| e.vector.to_string()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub n: usize,
    pub k: usize,
    pub senders: Vec<SenderRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenderRecord {
    pub sender: usize,
    pub y: usize,
    pub packets: Vec<String>,
}

impl ScheduleRecord {
    pub fn into_schedule(self) -> Result<Schedule> {
        let instance = ProblemInstance::new(self.n, self.k)?;
        let mut entries = Vec::new();
        for s in self.senders {
            let sender = ClientId::new(s.sender)?;
            if s.packets.len() != s.y {
                return Err(Error::ScheduleMismatch {
                    client: sender,
                    expected: s.y,
                    actual: s.packets.len(),
                });
            }
            for (j, p) in (1..).zip(&s.packets) {
                entries.push(ScheduleEntry {
                    sender,
                    j,
                    vector: p.parse()?,
                });
            }
        }
        Schedule::from_entries(instance, entries)
    }
}

fn pair(a: usize, b: usize) -> PairId {
    PairId::new(
        ClientId::new(a).expect("1-based"),
        ClientId::new(b).expect("1-based"),
    )
    .expect("schedule operands have distinct endpoints")
}

/// The schedule for the optimal plan.
pub fn build_schedule(instance: &ProblemInstance) -> Schedule {
    let k = instance.k();
    let plan = plan_transmissions(instance);
    let nxt = |m: usize| m % k + 1;
    let last = plan.counts().first().copied().unwrap_or(0);
    let partner = |i: usize, j: usize| {
        // With k odd, c_k is silent and x[i,k] for small i would never be
        // sent; the last packet of c_1..c_(k-1)/2 carries it instead.
        if k % 2 == 1 && j == last && i <= (k - 1) / 2 {
            k
        } else {
            nxt(i + j)
        }
    };
    let mut entries = Vec::with_capacity(plan.total());
    for (sender, &y) in instance.clients().zip(plan.counts()) {
        let i = sender.index();
        for j in 1..=y {
            let vector = if i <= k {
                CodingVector::pairwise(pair(i, nxt(i)), pair(i, partner(i, j)))
            } else if j < k {
                CodingVector::pairwise(pair(1, i), pair(1 + j, i))
            } else {
                Ok(CodingVector::single(pair(i, i + j - k + 1)))
            };
            let vector = vector.expect("operands of one packet are distinct");
            entries.push(ScheduleEntry { sender, j, vector });
        }
    }
    Schedule {
        instance: *instance,
        entries,
    }
}

/// XORs the stored payloads of the entry's operands.
pub fn encode(entry: &ScheduleEntry, store: &PayloadStore) -> Result<CodedPacket> {
    let mut ops = entry.vector.support().iter();
    let first = ops.next().ok_or(Error::EmptyVector)?;
    let mut payload = store.get(first).ok_or(Error::MissingPayload(*first))?.clone();
    for p in ops {
        payload.xor_assign(store.get(p).ok_or(Error::MissingPayload(*p))?)?;
    }
    CodedPacket::new(entry.sender, entry.vector.clone(), payload)
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: BitRow,
    payload: Payload,
}

/// One client's view of the exchange: a reduced row-echelon GF(2) basis over
/// the pair universe, each row carrying the XOR of its pairs' payloads.
///
/// Every row's pivot is its lowest-ranked pair and no other row has that
/// column set, so a row with a single pair is a recovered packet.
#[derive(Debug, Clone)]
pub struct DecoderState {
    instance: ProblemInstance,
    client: ClientId,
    width: usize,
    rows: BTreeMap<usize, Row>,
    solved: BTreeMap<PairId, Payload>,
    received: usize,
    redundant: usize,
}

impl DecoderState {
    /// Seeds the state with the client's own pairs. `local` must hold exactly
    /// those `n-1` pairs, all of one width.
    pub fn new(instance: &ProblemInstance, client: ClientId, local: &PayloadStore) -> Result<Self> {
        let own = local_set(instance, client)?;
        if local.len() != own.len() || !own.iter().all(|p| local.contains_key(p)) {
            return Err(Error::LocalStoreMismatch {
                client,
                expected: own.len(),
            });
        }
        let width = local.values().next().map(Payload::width).ok_or(Error::ZeroWidth)?;
        let mut state = Self {
            instance: *instance,
            client,
            width,
            rows: BTreeMap::new(),
            solved: BTreeMap::new(),
            received: 0,
            redundant: 0,
        };
        for (&p, payload) in local {
            if payload.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    actual: payload.width(),
                });
            }
            let rank = instance.rank(p);
            let mut coeffs = BitRow::zeros(instance.universe_size());
            coeffs.set(rank);
            state.rows.insert(
                rank,
                Row {
                    coeffs,
                    payload: payload.clone(),
                },
            );
            state.solved.insert(p, payload.clone());
        }
        Ok(state)
    }

    pub fn client(&self) -> ClientId {
        self.client
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn solved(&self) -> &BTreeMap<PairId, Payload> {
        &self.solved
    }

    pub fn is_complete(&self) -> bool {
        self.solved.len() == self.instance.universe_size()
    }

    /// Pairs not yet recovered, in rank order.
    pub fn missing(&self) -> Vec<PairId> {
        self.instance
            .pairs()
            .filter(|p| !self.solved.contains_key(p))
            .collect()
    }

    pub fn received_count(&self) -> usize {
        self.received
    }

    /// Packets that arrived already inside the span of the basis.
    pub fn redundant_count(&self) -> usize {
        self.redundant
    }

    /// Reduces `packet` against the basis and keeps it if it adds rank.
    /// Returns the pairs that became recoverable because of it.
    pub fn ingest(&mut self, packet: &CodedPacket) -> Result<BTreeSet<PairId>> {
        if packet.payload().width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: packet.payload().width(),
            });
        }
        let mut coeffs = BitRow::zeros(self.instance.universe_size());
        for &p in packet.vector().support() {
            if !self.instance.contains_pair(p) {
                return Err(Error::ClientOutOfRange {
                    index: p.hi().index(),
                    n: self.instance.n(),
                });
            }
            coeffs.flip(self.instance.rank(p));
        }
        let mut payload = packet.payload().clone();
        self.received += 1;

        for (&pivot, row) in &self.rows {
            if coeffs.get(pivot) {
                coeffs.xor_assign(&row.coeffs);
                payload.xor_assign(&row.payload)?;
            }
        }
        let Some(pivot) = coeffs.first_one() else {
            self.redundant += 1;
            return Ok(BTreeSet::new());
        };

        let mut touched = vec![pivot];
        for (&other, row) in self.rows.iter_mut() {
            if row.coeffs.get(pivot) {
                row.coeffs.xor_assign(&coeffs);
                row.payload.xor_assign(&payload)?;
                touched.push(other);
            }
        }
        self.rows.insert(pivot, Row { coeffs, payload });

        let mut fresh = BTreeSet::new();
        for rank in touched {
            let row = &self.rows[&rank];
            if row.coeffs.count_ones() == 1 {
                let p = self.instance.pair_at(rank).expect("pivot within universe");
                if self.solved.insert(p, row.payload.clone()).is_none() {
                    fresh.insert(p);
                }
            }
        }
        Ok(fresh)
    }
}

/// Seeds a decoder for `client` from the part of `truth` it holds initially.
pub fn decoder_init(
    instance: &ProblemInstance,
    client: ClientId,
    truth: &PayloadStore,
) -> Result<DecoderState> {
    let own = local_set(instance, client)?;
    let local = own
        .into_iter()
        .map(|p| truth.get(&p).map(|v| (p, v.clone())).ok_or(Error::MissingPayload(p)))
        .collect::<Result<PayloadStore>>()?;
    DecoderState::new(instance, client, &local)
}
