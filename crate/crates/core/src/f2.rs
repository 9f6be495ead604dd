//! Dense bit-packed matrices over the two-element field, with rank by
//! Gaussian elimination.

/// Matrix over GF(2); each row is a packed vector of 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        Self {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Column index of the first set bit of a packed row.
    fn leading(row: &[u64]) -> Option<usize> {
        row.iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + row[i].trailing_zeros() as usize)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        // Pivot rows in echelon order, reduced as they are collected.
        let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            while let Some(lead) = Self::leading(&row) {
                match pivots.binary_search_by_key(&lead, |p| p.0) {
                    Ok(i) => {
                        let (_, pivot) = &pivots[i];
                        for (w, pw) in row.iter_mut().zip(pivot) {
                            *w ^= pw;
                        }
                    }
                    Err(i) => {
                        pivots.insert(i, (lead, row));
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// Rank of a matrix over the two-element field.
pub fn f2_rank(m: &F2Matrix) -> usize {
    m.rank()
}
