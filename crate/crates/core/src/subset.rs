use std::fmt;

/// A set of transmitter indices stored as a bitmask.
///
/// Bit `i` set means transmitter `i` (0-based) is in the set. Display and
/// machine keys use 1-based indices, e.g. `{1,3}` and `"1,3"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(u64);

pub const MAX_TRANSMITTERS: usize = 63;

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_TRANSMITTERS);
        Subset((1u64 << m) - 1)
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_TRANSMITTERS);
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, m: usize) -> Self {
        Subset(!self.0 & Subset::full(m).0)
    }

    /// Nonempty and not equal to the full set of `m` transmitters.
    pub fn is_proper(self, m: usize) -> bool {
        !self.is_empty() && self.is_subset_of(Subset::full(m)) && self != Subset::full(m)
    }

    /// Transmitter indices (0-based) in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// All nonempty subsets of `{0..m}` in increasing bitmask order.
    pub fn nonempty(m: usize) -> impl Iterator<Item = Subset> {
        (1..=Subset::full(m).0).map(Subset)
    }

    /// All nonempty proper subsets of `{0..m}` in increasing bitmask order.
    pub fn proper(m: usize) -> impl Iterator<Item = Subset> {
        (1..Subset::full(m).0).map(Subset)
    }

    /// Comma-joined 1-based indices, e.g. `"1,3"`.
    pub fn key(self) -> String {
        self.members()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}
