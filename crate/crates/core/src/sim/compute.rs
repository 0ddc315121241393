//! Modulo-2 sum computation over the multicast channel.

use num_rational::Rational64;

use crate::channel::AdtChannel;
use crate::error::{Error, Result};

use super::{run_session, BitVec, SimTrace, Strategy};

/// Independent source strings at the two transmitters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceBits {
    s1: BitVec,
    s2: BitVec,
}

impl SourceBits {
    pub fn new(s1: BitVec, s2: BitVec) -> Result<Self> {
        if s1.len() != s2.len() {
            return Err(Error::Dimension { expected: s1.len(), found: s2.len() });
        }
        Ok(Self { s1, s2 })
    }

    pub fn len(&self) -> usize {
        self.s1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s1.is_empty()
    }

    pub fn xor(&self) -> BitVec {
        self.s1.iter().zip(&self.s2).map(|(a, b)| a ^ b).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ComputeOutcome {
    /// Per receiver, the XOR of its two decoded source strings.
    pub sums: Vec<BitVec>,
    /// Source bits per channel use, `L / T`.
    pub rate: Rational64,
    pub success: bool,
    pub trace: SimTrace,
}

/// Carries each source as its transmitter's message and has every receiver
/// output the componentwise XOR of what it decoded.
///
/// Source bit order is the strategy's message order; with [`super::Fig4Strategy`]
/// `S1 = (s_1, s_2, s_3)` rides as `(a1, a2, A1)`.
pub fn run_function_computation(ch: &AdtChannel, strategy: &dyn Strategy, sources: &SourceBits) -> Result<ComputeOutcome> {
    let bits = strategy.message_bits();
    if bits.len() != 2 || bits[0] != sources.len() || bits[1] != sources.len() {
        return Err(Error::Strategy(format!(
            "strategy carries {bits:?} bits, sources have length {}",
            sources.len()
        )));
    }
    let trace = run_session(ch, strategy, &[sources.s1.clone(), sources.s2.clone()])?;
    let sums: Vec<BitVec> = trace
        .decoded
        .iter()
        .map(|d| d[0].iter().zip(&d[1]).map(|(a, b)| a ^ b).collect())
        .collect();
    let target = sources.xor();
    let success = sums.iter().all(|s| *s == target);
    let rate = if strategy.slots() == 0 {
        Rational64::from_integer(0)
    } else {
        Rational64::new(sources.len() as i64, strategy.slots() as i64)
    };
    Ok(ComputeOutcome { sums, rate, success, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::load_adt_channel;
    use crate::sim::{fig4_strategy, parse_bits};

    #[test]
    fn documented_sources() {
        let ch = load_adt_channel("3,1;1,3").unwrap();
        let src = SourceBits::new(parse_bits("110").unwrap(), parse_bits("101").unwrap()).unwrap();
        let out = run_function_computation(&ch, &fig4_strategy(), &src).unwrap();
        assert!(out.success);
        assert_eq!(out.sums, vec![parse_bits("011").unwrap(); 2]);
        assert_eq!(out.rate, Rational64::new(3, 2));
    }

    #[test]
    fn equal_sources_sum_to_zero() {
        let ch = load_adt_channel("3,1;1,3").unwrap();
        let s = parse_bits("101").unwrap();
        let out = run_function_computation(&ch, &fig4_strategy(), &SourceBits::new(s.clone(), s).unwrap()).unwrap();
        assert!(out.success);
        assert!(out.sums.iter().flatten().all(|&b| !b));
    }

    #[test]
    fn length_errors() {
        assert!(SourceBits::new(vec![true], vec![]).is_err());
        let ch = load_adt_channel("3,1;1,3").unwrap();
        let src = SourceBits::new(vec![true; 2], vec![false; 2]).unwrap();
        assert!(run_function_computation(&ch, &fig4_strategy(), &src).is_err());
    }
}
