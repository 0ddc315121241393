//! Deterministic (ADT) multicast channel: link matrices over GF(2) and the
//! exact feedback capacity region.
//!
//! Bit vectors are indexed from the most significant level: position 0 is
//! the top level, which survives even the weakest nonzero link.

use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::channel::AdtChannel;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::region::{Provenance, RateRegion};
use crate::subset::Subset;

/// Exact region type used for the deterministic model.
pub type ExactRegion = RateRegion<Rational64>;

/// `q×q` shift `S^{q-n}`: entry `(i, j)` is 1 iff `i = j + (q - n)`. The top
/// `n` input bits land on the bottom `n` output positions.
pub fn shift_block(q: u32, n: u32) -> Result<Gf2Matrix> {
    if n > q {
        return Err(Error::InvalidParameter(format!("level {n} exceeds bit width {q}")));
    }
    let shift = (q - n) as usize;
    Ok(Gf2Matrix::from_fn(q as usize, q as usize, |i, j| i == j + shift))
}

fn link(ch: &AdtChannel, m: usize, k: usize) -> Gf2Matrix {
    shift_block(ch.q(), ch.level(m, k)).expect("levels never exceed q")
}

/// `G_S`: receivers stacked in index order, block `(k, m)` is the link from
/// transmitter `m ∈ S` to receiver `k`.
pub fn stacked_matrix(ch: &AdtChannel, s: Subset) -> Result<Gf2Matrix> {
    receiver_rows(ch, s, 0..ch.num_rx())
}

fn receiver_rows(ch: &AdtChannel, s: Subset, receivers: impl Iterator<Item = usize>) -> Result<Gf2Matrix> {
    if s.is_empty() || !s.is_subset_of(Subset::full(ch.num_tx())) {
        return Err(Error::InvalidSubset(s.bits()));
    }
    let blocks: Vec<Vec<Gf2Matrix>> = receivers.map(|k| s.members().map(|m| link(ch, m, k)).collect()).collect();
    Ok(Gf2Matrix::from_blocks(&blocks))
}

fn int(v: usize) -> Rational64 {
    Rational64::from_integer(v as i64)
}

/// Feedback capacity region: `rank(G_S)` for proper `S`; for the full set,
/// `max_m n_mk` per receiver, minimized over receivers.
pub fn adt_feedback_region(ch: &AdtChannel) -> ExactRegion {
    let m = ch.num_tx();
    let proper: BTreeMap<Subset, Rational64> = Subset::proper(m)
        .map(|s| (s, int(stacked_matrix(ch, s).expect("proper subset").rank())))
        .collect();
    let per_receiver = (0..ch.num_rx())
        .map(|k| int((0..m).map(|i| ch.level(i, k)).max().unwrap_or(0) as usize))
        .collect();
    RateRegion::from_parts(m, proper, per_receiver, Provenance::Exact).expect("integer ranks")
}

/// Nonfeedback baseline: intersection over receivers of the per-receiver
/// MAC regions, `Σ_{m∈S} R_m <= rank` of receiver `k`'s block row restricted
/// to the columns of `S`, for every nonempty `S` and every `k`.
pub fn adt_nonfeedback_region(ch: &AdtChannel) -> ExactRegion {
    let m = ch.num_tx();
    let rank_at = |s: Subset, k: usize| receiver_rows(ch, s, std::iter::once(k)).expect("nonempty subset").rank();
    let proper: BTreeMap<Subset, Rational64> = Subset::proper(m)
        .map(|s| (s, int((0..ch.num_rx()).map(|k| rank_at(s, k)).min().expect("at least one receiver"))))
        .collect();
    let per_receiver = (0..ch.num_rx()).map(|k| int(rank_at(Subset::full(m), k))).collect();
    RateRegion::from_parts(m, proper, per_receiver, Provenance::Nonfeedback).expect("integer ranks")
}

/// Nonfeedback cutset bound on the modulo-2 sum computing rate for two
/// transmitters and two receivers: `min(rank S^{q-n_21}, rank S^{q-n_12})`,
/// the new information each receiver can get about the other source.
pub fn adt_computing_bound_nf(ch: &AdtChannel) -> Result<u32> {
    if ch.num_tx() != 2 || ch.num_rx() != 2 {
        return Err(Error::Unsupported(format!(
            "two transmitters and two receivers (channel is {}x{})",
            ch.num_tx(),
            ch.num_rx()
        )));
    }
    let to_rx1 = link(ch, 1, 0).rank();
    let to_rx2 = link(ch, 0, 1).rank();
    Ok(to_rx1.min(to_rx2) as u32)
}
