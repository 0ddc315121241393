//! Dense matrices over GF(2), rows packed into 64-bit words.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j] & 1 == 1)
    }

    /// Block matrix; every block in a block row shares its row count and
    /// every block in a block column shares its column count.
    pub fn from_blocks(blocks: &[Vec<Gf2Matrix>]) -> Self {
        let heights: Vec<usize> = blocks.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = blocks.first().map_or(Vec::new(), |r| r.iter().map(|b| b.cols).collect());
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            assert_eq!(row.len(), widths.len(), "ragged block rows");
            for (bj, block) in row.iter().enumerate() {
                assert_eq!((block.rows, block.cols), (heights[bi], widths[bj]), "block shape mismatch");
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        if block.get(i, j) {
                            out.set(r0 + i, c0 + j, true);
                        }
                    }
                }
                c0 += block.cols;
            }
            r0 += heights[bi];
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.words[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.words[i * self.stride + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| x[j] && self.get(i, j)).count() % 2 == 1)
            .collect()
    }

    /// Rank by Gaussian elimination on packed rows.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = self.words.chunks(self.stride.max(1)).take(self.rows).map(<[u64]>::to_vec).collect();
        if self.stride == 0 {
            return 0;
        }
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & bit != 0 {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Rank as `log2 |row space|`, enumerating every XOR combination of rows.
/// Exponential in the row count; intended as a cross-check for small
/// matrices only.
pub fn span_rank(m: &Gf2Matrix) -> usize {
    assert!(m.rows() <= 20 && m.cols() <= 64, "span enumeration is exponential");
    let row_bits: Vec<u64> = (0..m.rows())
        .map(|i| (0..m.cols()).fold(0u64, |acc, j| acc | (u64::from(m.get(i, j)) << j)))
        .collect();
    let mut span = std::collections::HashSet::new();
    for mask in 0u64..(1 << m.rows()) {
        let v = row_bits
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0u64, |acc, (_, r)| acc ^ r);
        span.insert(v);
    }
    span.len().trailing_zeros() as usize
}
