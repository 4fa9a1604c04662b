//! Clients, pairwise channel-state packets, payloads and coding vectors.
//!
//! Clients are numbered from 1 everywhere a number is shown to a user. The
//! packet shared by clients `i` and `j` is the unordered pair `{i, j}`,
//! stored canonically with `lo < hi` and rendered as `x[lo,hi]`. Pairs are
//! ranked lexicographically by `(lo, hi)`, which gives the column order used
//! by the GF(2) decoder.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(n, k)`: `n` clients, the first `k` of which must learn every packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemInstance {
    n: usize,
    k: usize,
}

impl ProblemInstance {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewClients(n));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidSubset { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of distinct packets, `n(n-1)/2`.
    pub fn universe_size(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Number of packets each client is missing, `(n-1)(n-2)/2`.
    pub fn wanted_size(&self) -> usize {
        (self.n - 1) * (self.n - 2) / 2
    }

    pub fn client(&self, index: usize) -> Result<ClientId> {
        if index == 0 || index > self.n {
            return Err(Error::ClientOutOfRange { index, n: self.n });
        }
        Ok(ClientId(index))
    }

    pub fn clients(&self) -> impl Iterator<Item = ClientId> {
        (1..=self.n).map(ClientId)
    }

    /// Clients `c_1..c_k`.
    pub fn privileged(&self) -> impl Iterator<Item = ClientId> {
        (1..=self.k).map(ClientId)
    }

    pub fn is_privileged(&self, client: ClientId) -> bool {
        client.0 <= self.k
    }

    /// Builds a pair after checking both endpoints against `n`.
    pub fn pair(&self, a: usize, b: usize) -> Result<PairId> {
        let a = self.client(a)?;
        let b = self.client(b)?;
        PairId::new(a, b)
    }

    pub fn contains_pair(&self, pair: PairId) -> bool {
        pair.hi.0 <= self.n
    }

    /// Every pair in rank order.
    pub fn pairs(&self) -> impl Iterator<Item = PairId> {
        let n = self.n;
        (1..n).flat_map(move |lo| (lo + 1..=n).map(move |hi| PairId::from_raw(lo, hi)))
    }

    /// Lexicographic rank of `pair` in `0..universe_size()`.
    pub fn rank(&self, pair: PairId) -> usize {
        debug_assert!(self.contains_pair(pair));
        let (lo, hi) = (pair.lo.0, pair.hi.0);
        // rows before `lo` contribute (n-1) + (n-2) + ... + (n-lo+1) pairs
        (lo - 1) * (2 * self.n - lo) / 2 + (hi - lo - 1)
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn pair_at(&self, mut rank: usize) -> Option<PairId> {
        if rank >= self.universe_size() {
            return None;
        }
        let mut lo = 1;
        loop {
            let row = self.n - lo;
            if rank < row {
                return Some(PairId::from_raw(lo, lo + 1 + rank));
            }
            rank -= row;
            lo += 1;
        }
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={}", self.n, self.k)
    }
}

/// A 1-based client index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClientId(usize);

impl ClientId {
    /// Only rejects 0; range against `n` is checked by [`ProblemInstance::client`].
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::ClientOutOfRange { index, n: 0 });
        }
        Ok(Self(index))
    }

    pub fn index(&self) -> usize {
        self.0
    }
}

impl fmt::Display for ClientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// The packet `x_{lo,hi}` known initially to exactly the clients `lo` and `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairId {
    lo: ClientId,
    hi: ClientId,
}

impl PairId {
    pub fn new(a: ClientId, b: ClientId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Self { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Self { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::DegeneratePair(a.0)),
        }
    }

    fn from_raw(lo: usize, hi: usize) -> Self {
        debug_assert!(0 < lo && lo < hi);
        Self {
            lo: ClientId(lo),
            hi: ClientId(hi),
        }
    }

    pub fn lo(&self) -> ClientId {
        self.lo
    }

    pub fn hi(&self) -> ClientId {
        self.hi
    }

    pub fn involves(&self, client: ClientId) -> bool {
        self.lo == client || self.hi == client
    }

    pub fn as_tuple(&self) -> (usize, usize) {
        (self.lo.0, self.hi.0)
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.lo.0, self.hi.0)
    }
}

impl FromStr for PairId {
    type Err = Error;

    /// Accepts `x[i,j]` with the endpoints in either order.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("pair", s);
        let inner = s
            .trim()
            .strip_prefix("x[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        PairId::new(ClientId::new(a)?, ClientId::new(b)?)
    }
}

impl Serialize for PairId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.lo.0, self.hi.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a, b) = <(usize, usize)>::deserialize(d)?;
        let a = ClientId::new(a).map_err(serde::de::Error::custom)?;
        let b = ClientId::new(b).map_err(serde::de::Error::custom)?;
        PairId::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// `X_i`: the `n-1` pairs client `i` holds from the start.
pub fn local_set(instance: &ProblemInstance, client: ClientId) -> Result<BTreeSet<PairId>> {
    let client = instance.client(client.index())?;
    Ok(instance.clients().filter(|&c| c != client).map(|c| PairId::new(client, c).expect("distinct")).collect())
}

/// Result of [`wanted_set`]. Only privileged clients are obliged to decode,
/// so asking for anybody else is allowed but recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WantedSet {
    pub client: ClientId,
    pub privileged: bool,
    pub pairs: BTreeSet<PairId>,
}

/// The complement of [`local_set`] in the pair universe.
pub fn wanted_set(instance: &ProblemInstance, client: ClientId) -> Result<WantedSet> {
    let client = instance.client(client.index())?;
    Ok(WantedSet {
        client,
        privileged: instance.is_privileged(client),
        pairs: instance.pairs().filter(|p| !p.involves(client)).collect(),
    })
}

/// A fixed-width bit string carried by a packet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Payload {
    width: usize,
    words: Vec<u64>,
}

pub const DEFAULT_PAYLOAD_BITS: usize = 32;

impl Payload {
    pub fn zero(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        Ok(Self {
            width,
            words: vec![0; width.div_ceil(64)],
        })
    }

    /// Little-endian words; bits at or above `width` are cleared.
    pub fn from_words(width: usize, words: &[u64]) -> Result<Self> {
        let mut p = Self::zero(width)?;
        for (dst, src) in p.words.iter_mut().zip(words) {
            *dst = *src;
        }
        p.mask_tail();
        Ok(p)
    }

    pub fn from_u64(width: usize, value: u64) -> Result<Self> {
        Self::from_words(width, &[value])
    }

    fn mask_tail(&mut self) {
        let rem = self.width % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Payload) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: other.width,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &Payload) -> Result<Payload> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }
}

impl fmt::Display for Payload {
    /// Hex, most significant word first, padded to the payload width.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.width.div_ceil(4);
        let mut hex = String::with_capacity(self.words.len() * 16);
        for w in self.words.iter().rev() {
            hex.push_str(&format!("{w:016x}"));
        }
        write!(f, "0x{}", &hex[hex.len() - digits..])
    }
}

/// The set of packets XORed into one transmission, in the order they are written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodingVector {
    operands: Vec<PairId>,
}

impl CodingVector {
    pub fn new(operands: Vec<PairId>) -> Result<Self> {
        if operands.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (i, p) in operands.iter().enumerate() {
            if operands[..i].contains(p) {
                return Err(Error::RepeatedOperand(*p));
            }
        }
        Ok(Self { operands })
    }

    pub fn single(pair: PairId) -> Self {
        Self {
            operands: vec![pair],
        }
    }

    pub fn pairwise(a: PairId, b: PairId) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn support(&self) -> &[PairId] {
        &self.operands
    }

    pub fn len(&self) -> usize {
        self.operands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operands.is_empty()
    }

    pub fn contains(&self, pair: PairId) -> bool {
        self.operands.contains(&pair)
    }

    pub fn support_set(&self) -> BTreeSet<PairId> {
        self.operands.iter().copied().collect()
    }
}

impl fmt::Display for CodingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.operands.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for CodingVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .split('+')
            .map(str::parse)
            .collect::<Result<Vec<PairId>>>()?;
        Self::new(ops)
    }
}

/// Fails unless every operand has `sender` as an endpoint.
pub fn check_sender_holds(sender: ClientId, vector: &CodingVector) -> Result<()> {
    match vector.support().iter().find(|p| !p.involves(sender)) {
        Some(&pair) => Err(Error::SenderLacksOperand { sender, pair }),
        None => Ok(()),
    }
}

/// One broadcast transmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    sender: ClientId,
    vector: CodingVector,
    payload: Payload,
}

impl CodedPacket {
    pub fn new(sender: ClientId, vector: CodingVector, payload: Payload) -> Result<Self> {
        check_sender_holds(sender, &vector)?;
        Ok(Self {
            sender,
            vector,
            payload,
        })
    }

    pub fn sender(&self) -> ClientId {
        self.sender
    }

    pub fn vector(&self) -> &CodingVector {
        &self.vector
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }
}
