//! Bit-exact simulation of the deterministic multicast channel with causal
//! feedback.
//!
//! Every receiver's output is fed back to every transmitter with a one-slot
//! delay. Encoders are handed only the history of completed slots, so a
//! [`Strategy`] cannot violate causality.

pub mod compute;
pub mod strategies;

use std::fmt::Write as _;

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::adt::shift_block;
use crate::channel::{AdtChannel, RateVector};
use crate::error::{Error, Result};

pub use compute::{run_function_computation, ComputeOutcome, SourceBits};
pub use strategies::{fig4_strategy, nonfeedback_baseline_strategy, BlockMarkov, Fig4Strategy, NonfeedbackBaseline, NullStrategy};

pub type BitVec = Vec<bool>;

/// Received vectors of completed slots, `slot -> receiver -> bits`, as seen
/// by an encoder. Slot indices are relative to the start of the current
/// phase (see [`BlockMarkov`]); [`Feedback::all`] exposes the full history.
#[derive(Clone, Copy, Debug)]
pub struct Feedback<'a> {
    history: &'a [Vec<BitVec>],
    offset: usize,
}

impl<'a> Feedback<'a> {
    pub fn new(history: &'a [Vec<BitVec>]) -> Self {
        Self { history, offset: 0 }
    }

    pub(crate) fn shifted(self, offset: usize) -> Self {
        Self { history: self.history, offset: self.offset + offset }
    }

    /// Number of completed slots in the current phase.
    pub fn len(&self) -> usize {
        self.history.len().saturating_sub(self.offset)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Output of receiver `rx` at phase-relative slot `slot`.
    pub fn received(&self, slot: usize, rx: usize) -> &'a [bool] {
        &self.history[self.offset + slot][rx]
    }

    pub fn all(&self) -> &'a [Vec<BitVec>] {
        self.history
    }
}

/// A deterministic feedback coding scheme.
pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    /// Session length `T` in channel uses.
    fn slots(&self) -> usize;

    /// Message length in bits, per transmitter.
    fn message_bits(&self) -> Vec<usize>;

    fn check_channel(&self, _ch: &AdtChannel) -> Result<()> {
        Ok(())
    }

    /// `X_{m,slot}` from transmitter `tx`'s own message and the feedback of
    /// slots before `slot`.
    fn encode(&self, tx: usize, slot: usize, message: &[bool], feedback: Feedback<'_>) -> BitVec;

    /// Every transmitter's message, from receiver `rx`'s outputs only.
    fn decode(&self, rx: usize, received: &[BitVec]) -> Vec<BitVec>;

    /// Nominal rates, `message_bits / slots` (zero for an empty session).
    fn rates(&self) -> Vec<Rational64> {
        let t = self.slots() as i64;
        self.message_bits()
            .into_iter()
            .map(|b| if t == 0 { Rational64::from_integer(0) } else { Rational64::new(b as i64, t) })
            .collect()
    }
}

/// `Y_k = ⊕_m S^{q-n_mk} X_m`, computed by shifting bit positions directly.
pub fn transmit(ch: &AdtChannel, x: &[BitVec]) -> Result<Vec<BitVec>> {
    let q = ch.q() as usize;
    if x.len() != ch.num_tx() {
        return Err(Error::Dimension { expected: ch.num_tx(), found: x.len() });
    }
    if let Some(bad) = x.iter().find(|v| v.len() != q) {
        return Err(Error::Dimension { expected: q, found: bad.len() });
    }
    Ok((0..ch.num_rx())
        .map(|k| {
            let mut y = vec![false; q];
            for (m, xm) in x.iter().enumerate() {
                let shift = q - ch.level(m, k) as usize;
                for i in shift..q {
                    y[i] ^= xm[i - shift];
                }
            }
            y
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotRecord {
    pub x: Vec<BitVec>,
    pub y: Vec<BitVec>,
}

/// Complete record of one session.
#[derive(Clone, Debug, PartialEq)]
pub struct SimTrace {
    pub channel: AdtChannel,
    pub strategy: String,
    pub messages: Vec<BitVec>,
    pub slots: Vec<SlotRecord>,
    /// `decoded[k][m]`: receiver `k`'s estimate of transmitter `m`'s message.
    pub decoded: Vec<Vec<BitVec>>,
    pub success: Vec<bool>,
    pub rates: Vec<Rational64>,
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl SimTrace {
    pub fn all_succeeded(&self) -> bool {
        self.success.iter().all(|&s| s)
    }

    /// Recomputes every output with the link matrices and compares.
    pub fn audit_channel_law(&self) -> bool {
        let q = self.channel.q();
        self.slots.iter().all(|slot| {
            (0..self.channel.num_rx()).all(|k| {
                let mut y = vec![false; q as usize];
                for (m, xm) in slot.x.iter().enumerate() {
                    let image = shift_block(q, self.channel.level(m, k)).expect("valid level").mul_vec(xm);
                    for (a, b) in y.iter_mut().zip(image) {
                        *a ^= b;
                    }
                }
                slot.y.get(k) == Some(&y)
            })
        })
    }

    /// One line per slot, `t=1 X1=101 X2=010 Y1=... Y2=...`, then one line
    /// per receiver with its decoded messages.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, slot) in self.slots.iter().enumerate() {
            write!(out, "t={}", t + 1).unwrap();
            for (m, x) in slot.x.iter().enumerate() {
                write!(out, " X{}={}", m + 1, bits_to_string(x)).unwrap();
            }
            for (k, y) in slot.y.iter().enumerate() {
                write!(out, " Y{}={}", k + 1, bits_to_string(y)).unwrap();
            }
            out.push('\n');
        }
        for (k, decoded) in self.decoded.iter().enumerate() {
            write!(out, "rx{}", k + 1).unwrap();
            for (m, w) in decoded.iter().enumerate() {
                write!(out, " W{}={}", m + 1, bits_to_string(w)).unwrap();
            }
            writeln!(out, " ok={}", self.success[k]).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let strings = |v: &[BitVec]| v.iter().map(|b| bits_to_string(b)).collect::<Vec<_>>();
        json!({
            "channel": self.channel.to_string(),
            "strategy": self.strategy,
            "messages": strings(&self.messages),
            "slots": self.slots.iter().map(|s| json!({"x": strings(&s.x), "y": strings(&s.y)})).collect::<Vec<_>>(),
            "decoded": self.decoded.iter().map(|d| strings(d)).collect::<Vec<_>>(),
            "success": self.success,
            "rates": self.rates.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Runs `strategy` for its full session on `ch`.
pub fn run_session(ch: &AdtChannel, strategy: &dyn Strategy, messages: &[BitVec]) -> Result<SimTrace> {
    strategy.check_channel(ch)?;
    let bits = strategy.message_bits();
    if bits.len() != ch.num_tx() || messages.len() != ch.num_tx() {
        return Err(Error::Strategy(format!(
            "{} transmitters, {} rate entries, {} messages",
            ch.num_tx(),
            bits.len(),
            messages.len()
        )));
    }
    for (m, (msg, &b)) in messages.iter().zip(&bits).enumerate() {
        if msg.len() != b {
            return Err(Error::Strategy(format!("message {} has {} bits, strategy expects {b}", m + 1, msg.len())));
        }
    }

    let q = ch.q() as usize;
    let mut history: Vec<Vec<BitVec>> = Vec::with_capacity(strategy.slots());
    let mut slots = Vec::with_capacity(strategy.slots());
    for t in 0..strategy.slots() {
        let feedback = Feedback::new(&history[..t]);
        let x: Vec<BitVec> = (0..ch.num_tx())
            .map(|m| strategy.encode(m, t, &messages[m], feedback))
            .collect();
        if let Some((m, bad)) = x.iter().enumerate().find(|(_, v)| v.len() != q) {
            return Err(Error::Strategy(format!(
                "encoder {} produced {} bits at slot {}, expected {q}",
                m + 1,
                bad.len(),
                t + 1
            )));
        }
        let y = transmit(ch, &x)?;
        history.push(y.clone());
        slots.push(SlotRecord { x, y });
    }

    let decoded: Vec<Vec<BitVec>> = (0..ch.num_rx())
        .map(|k| {
            let own: Vec<BitVec> = slots.iter().map(|s| s.y[k].clone()).collect();
            strategy.decode(k, &own)
        })
        .collect();
    let success = decoded.iter().map(|d| d.as_slice() == messages).collect();
    Ok(SimTrace {
        channel: ch.clone(),
        strategy: strategy.name(),
        messages: messages.to_vec(),
        slots,
        decoded,
        success,
        rates: strategy.rates(),
    })
}

/// Where a receiver's decoded output first departs from the truth.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecodingFailure {
    #[error("receiver {receiver} decoded bit {bit} of transmitter {transmitter} incorrectly")]
    Bit { receiver: usize, transmitter: usize, bit: usize },
    #[error("receiver {receiver} returned {found} bits for transmitter {transmitter}, expected {expected}")]
    Length { receiver: usize, transmitter: usize, expected: usize, found: usize },
    #[error("receiver {receiver} returned {found} messages, expected {expected}")]
    MessageCount { receiver: usize, expected: usize, found: usize },
}

/// Achieved rates if every receiver recovered every message exactly;
/// otherwise the first mismatch (1-based indices).
pub fn verify_multicast_decoding(trace: &SimTrace) -> std::result::Result<RateVector<Rational64>, DecodingFailure> {
    for (k, decoded) in trace.decoded.iter().enumerate() {
        if decoded.len() != trace.messages.len() {
            return Err(DecodingFailure::MessageCount {
                receiver: k + 1,
                expected: trace.messages.len(),
                found: decoded.len(),
            });
        }
        for (m, (est, truth)) in decoded.iter().zip(&trace.messages).enumerate() {
            if est.len() != truth.len() {
                return Err(DecodingFailure::Length {
                    receiver: k + 1,
                    transmitter: m + 1,
                    expected: truth.len(),
                    found: est.len(),
                });
            }
            if let Some(bit) = est.iter().zip(truth).position(|(a, b)| a != b) {
                return Err(DecodingFailure::Bit { receiver: k + 1, transmitter: m + 1, bit: bit + 1 });
            }
        }
    }
    Ok(RateVector::new(trace.rates.clone()).expect("rates are nonnegative"))
}

/// Parses a `0`/`1` string.
pub fn parse_bits(s: &str) -> Result<BitVec> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidParameter(format!("bit string contains {other:?}"))),
        })
        .collect()
}
