//! Built-in strategies for the two-user channel with levels `[[3,1],[1,3]]`,
//! plus sequential block composition.

use crate::channel::AdtChannel;
use crate::error::{Error, Result};

use super::{BitVec, Feedback, Strategy};

const MOTIVATING_LEVELS: [[u32; 2]; 2] = [[3, 1], [1, 3]];

fn require_motivating_channel(ch: &AdtChannel) -> Result<()> {
    let ok = ch.num_rx() == 2
        && ch.num_tx() == 2
        && ch.q() == 3
        && (0..2).all(|k| (0..2).all(|m| ch.level(m, k) == MOTIVATING_LEVELS[k][m]));
    if ok {
        Ok(())
    } else {
        Err(Error::Strategy(format!("requires levels 3,1;1,3, got {ch}")))
    }
}

/// Two-slot feedback scheme achieving `(3/2, 3/2)`.
///
/// Message layout per transmitter: `[fresh_1, fresh_2, extra]`, i.e.
/// `(a1, a2, A1)` and `(b1, b2, B1)`.
///
/// - slot 1: `X_m = (fresh_1, extra, 0)`. Each receiver hears the other
///   transmitter's top bit on its lowest level, and only its direct
///   transmitter's second-level bit.
/// - slot 2: `X_m = (fresh_2, other's extra, 0)`, where the other
///   transmitter's extra bit is read off the feedback of the other receiver
///   (second level, slot 1).
#[derive(Clone, Copy, Debug, Default)]
pub struct Fig4Strategy;

pub fn fig4_strategy() -> Fig4Strategy {
    Fig4Strategy
}

impl Strategy for Fig4Strategy {
    fn name(&self) -> String {
        "fig4".into()
    }

    fn slots(&self) -> usize {
        2
    }

    fn message_bits(&self) -> Vec<usize> {
        vec![3, 3]
    }

    fn check_channel(&self, ch: &AdtChannel) -> Result<()> {
        require_motivating_channel(ch)
    }

    fn encode(&self, tx: usize, slot: usize, message: &[bool], feedback: Feedback<'_>) -> BitVec {
        match slot {
            0 => vec![message[0], message[2], false],
            _ => {
                let other_rx = 1 - tx;
                let forwarded = feedback.received(0, other_rx)[1];
                vec![message[1], forwarded, false]
            }
        }
    }

    fn decode(&self, rx: usize, received: &[BitVec]) -> Vec<BitVec> {
        let (first, second) = (&received[0], &received[1]);
        let direct = vec![first[0], second[0], first[1]];
        let cross = vec![first[2], second[2], second[1]];
        if rx == 0 {
            vec![direct, cross]
        } else {
            vec![cross, direct]
        }
    }
}

/// One fresh top-level bit per transmitter per slot, feedback unused.
#[derive(Clone, Copy, Debug)]
pub struct NonfeedbackBaseline {
    slots: usize,
}

pub fn nonfeedback_baseline_strategy(slots: usize) -> NonfeedbackBaseline {
    NonfeedbackBaseline { slots }
}

impl Strategy for NonfeedbackBaseline {
    fn name(&self) -> String {
        "nonfeedback-baseline".into()
    }

    fn slots(&self) -> usize {
        self.slots
    }

    fn message_bits(&self) -> Vec<usize> {
        vec![self.slots, self.slots]
    }

    fn check_channel(&self, ch: &AdtChannel) -> Result<()> {
        require_motivating_channel(ch)
    }

    fn encode(&self, _tx: usize, slot: usize, message: &[bool], _feedback: Feedback<'_>) -> BitVec {
        vec![message[slot], false, false]
    }

    fn decode(&self, rx: usize, received: &[BitVec]) -> Vec<BitVec> {
        let direct: BitVec = received.iter().map(|y| y[0]).collect();
        let cross: BitVec = received.iter().map(|y| y[2]).collect();
        if rx == 0 {
            vec![direct, cross]
        } else {
            vec![cross, direct]
        }
    }
}

/// Sends zeros and decodes empty messages; works on any channel.
#[derive(Clone, Copy, Debug)]
pub struct NullStrategy {
    transmitters: usize,
    slots: usize,
    q: usize,
}

impl NullStrategy {
    pub fn new(transmitters: usize, slots: usize) -> Self {
        Self { transmitters, slots, q: 0 }
    }

    pub fn for_channel(ch: &AdtChannel, slots: usize) -> Self {
        Self { transmitters: ch.num_tx(), slots, q: ch.q() as usize }
    }
}

impl Strategy for NullStrategy {
    fn name(&self) -> String {
        "null".into()
    }

    fn slots(&self) -> usize {
        self.slots
    }

    fn message_bits(&self) -> Vec<usize> {
        vec![0; self.transmitters]
    }

    fn check_channel(&self, ch: &AdtChannel) -> Result<()> {
        if self.slots > 0 && ch.q() as usize != self.q {
            return Err(Error::Strategy(format!("built for q = {}, channel has q = {}", self.q, ch.q())));
        }
        Ok(())
    }

    fn encode(&self, _tx: usize, _slot: usize, _message: &[bool], _feedback: Feedback<'_>) -> BitVec {
        vec![false; self.q]
    }

    fn decode(&self, _rx: usize, _received: &[BitVec]) -> Vec<BitVec> {
        vec![Vec::new(); self.transmitters]
    }
}

/// Sequential composition of phases (blocks).
///
/// Each transmitter's message is the concatenation of its per-phase
/// messages. Phase encoders see phase-relative slot indices but may read the
/// whole feedback history through [`Feedback::all`], so a block can depend
/// on anything decoded from earlier blocks. Receivers decode the phases
/// backwards, last block first.
pub struct BlockMarkov {
    phases: Vec<Box<dyn Strategy>>,
}

impl BlockMarkov {
    pub fn new(phases: Vec<Box<dyn Strategy>>) -> Result<Self> {
        let Some(first) = phases.first() else {
            return Err(Error::Strategy("no phases".into()));
        };
        let m = first.message_bits().len();
        if phases.iter().any(|p| p.message_bits().len() != m) {
            return Err(Error::Strategy("phases disagree on the transmitter count".into()));
        }
        Ok(Self { phases })
    }

    /// `(phase index, first slot)` owning global slot `slot`.
    fn locate(&self, slot: usize) -> (usize, usize) {
        let mut start = 0;
        for (i, p) in self.phases.iter().enumerate() {
            if slot < start + p.slots() {
                return (i, start);
            }
            start += p.slots();
        }
        panic!("slot {slot} beyond session length");
    }

    fn message_offset(&self, phase: usize, tx: usize) -> usize {
        self.phases[..phase].iter().map(|p| p.message_bits()[tx]).sum()
    }
}

impl Strategy for BlockMarkov {
    fn name(&self) -> String {
        let names: Vec<String> = self.phases.iter().map(|p| p.name()).collect();
        format!("block-markov[{}]", names.join(","))
    }

    fn slots(&self) -> usize {
        self.phases.iter().map(|p| p.slots()).sum()
    }

    fn message_bits(&self) -> Vec<usize> {
        let m = self.phases[0].message_bits().len();
        (0..m).map(|tx| self.phases.iter().map(|p| p.message_bits()[tx]).sum()).collect()
    }

    fn check_channel(&self, ch: &AdtChannel) -> Result<()> {
        self.phases.iter().try_for_each(|p| p.check_channel(ch))
    }

    fn encode(&self, tx: usize, slot: usize, message: &[bool], feedback: Feedback<'_>) -> BitVec {
        let (phase, start) = self.locate(slot);
        let offset = self.message_offset(phase, tx);
        let own = &message[offset..offset + self.phases[phase].message_bits()[tx]];
        self.phases[phase].encode(tx, slot - start, own, feedback.shifted(start))
    }

    fn decode(&self, rx: usize, received: &[BitVec]) -> Vec<BitVec> {
        let m = self.phases[0].message_bits().len();
        let mut starts = Vec::with_capacity(self.phases.len());
        let mut start = 0;
        for p in &self.phases {
            starts.push(start);
            start += p.slots();
        }
        let mut per_phase: Vec<Vec<BitVec>> = vec![Vec::new(); self.phases.len()];
        for (i, p) in self.phases.iter().enumerate().rev() {
            per_phase[i] = p.decode(rx, &received[starts[i]..starts[i] + p.slots()]);
        }
        (0..m)
            .map(|tx| per_phase.iter().flat_map(|d| d.get(tx).cloned().unwrap_or_default()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::load_adt_channel;
    use crate::sim::{parse_bits, run_session, verify_multicast_decoding};
    use num_rational::Rational64;

    fn motivating() -> AdtChannel {
        load_adt_channel("3,1;1,3").unwrap()
    }

    fn split(bits: u32, widths: &[usize]) -> Vec<BitVec> {
        let mut shift = 0;
        widths
            .iter()
            .map(|&w| {
                let v = (0..w).map(|i| bits >> (shift + i) & 1 == 1).collect();
                shift += w;
                v
            })
            .collect()
    }

    #[test]
    fn fig4_documented_messages() {
        let msgs = [parse_bits("101").unwrap(), parse_bits("011").unwrap()];
        let trace = run_session(&motivating(), &fig4_strategy(), &msgs).unwrap();
        assert!(trace.all_succeeded());
        assert_eq!(trace.decoded[0], msgs);
        assert_eq!(trace.decoded[1], msgs);
        // slot 2: X1 = (a2, B1, 0), X2 = (b2, A1, 0)
        assert_eq!(trace.slots[1].x, vec![parse_bits("010").unwrap(), parse_bits("110").unwrap()]);
    }

    #[test]
    fn fig4_all_ones() {
        let msgs = [vec![true; 3], vec![true; 3]];
        let trace = run_session(&motivating(), &fig4_strategy(), &msgs).unwrap();
        assert!(trace.all_succeeded());
        assert_eq!(trace.rates, vec![Rational64::new(3, 2); 2]);
    }

    #[test]
    fn fig4_rejects_other_channels() {
        let ch = load_adt_channel("3,2;1,3").unwrap();
        assert!(run_session(&ch, &fig4_strategy(), &[vec![false; 3], vec![false; 3]]).is_err());
        assert!(run_session(&ch, &nonfeedback_baseline_strategy(2), &[vec![false; 2], vec![false; 2]]).is_err());
    }

    #[test]
    fn message_length_mismatch() {
        assert!(run_session(&motivating(), &fig4_strategy(), &[vec![false; 2], vec![false; 3]]).is_err());
        assert!(run_session(&motivating(), &fig4_strategy(), &[vec![false; 3]]).is_err());
    }

    #[test]
    fn baseline_exhaustive() {
        for bits in 0u32..16 {
            let msgs = split(bits, &[2, 2]);
            let trace = run_session(&motivating(), &nonfeedback_baseline_strategy(2), &msgs).unwrap();
            let rates = verify_multicast_decoding(&trace).unwrap();
            assert_eq!(rates.as_slice(), &[Rational64::from_integer(1); 2]);
        }
    }

    #[test]
    fn null_strategy_any_channel() {
        let ch = load_adt_channel("2,0,1;1,1,2").unwrap();
        let trace = run_session(&ch, &NullStrategy::for_channel(&ch, 3), &[vec![], vec![], vec![]]).unwrap();
        assert!(trace.all_succeeded());
        assert!(trace.audit_channel_law());
        assert_eq!(trace.rates, vec![Rational64::from_integer(0); 3]);
    }

    #[test]
    fn composed_blocks_decode_exhaustively() {
        let scheme = BlockMarkov::new(vec![
            Box::new(fig4_strategy()),
            Box::new(fig4_strategy()),
            Box::new(nonfeedback_baseline_strategy(1)),
        ])
        .unwrap();
        assert_eq!(scheme.slots(), 5);
        assert_eq!(scheme.message_bits(), vec![7, 7]);
        for bits in 0u32..(1 << 14) {
            let msgs = split(bits, &[7, 7]);
            let trace = run_session(&motivating(), &scheme, &msgs).unwrap();
            assert!(trace.all_succeeded(), "{bits:#b}");
        }
        assert_eq!(scheme.rates(), vec![Rational64::new(7, 5); 2]);
        assert!(BlockMarkov::new(vec![]).is_err());
    }
}
