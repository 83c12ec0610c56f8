//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words; elimination works column-by-column with
//! word-wide XOR. Everything here is deterministic: pivot selection always
//! takes the lowest-index candidate row, so solutions and ranks are
//! reproducible across runs and platforms.
//!
//! The sizes involved (a few thousand columns when solving for correlation
//! surfaces on small blocks) are comfortably in dense territory; no sparse
//! representation is needed.

/// A dense bit-matrix over GF(2) with `rows × cols` entries.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    /// XOR row `src` into row `dst` (`dst ^= src`).
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert!(dst != src);
        let (d, s) = (dst * self.words_per_row, src * self.words_per_row);
        for k in 0..self.words_per_row {
            let w = self.data[s + k];
            self.data[d + k] ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.data.swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    /// Rank via in-place Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// In-place reduction to row echelon form. Returns the pivot column of
    /// each nonzero row, in order (so the return length is the rank).
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // Lowest-index row with a 1 in this column becomes the pivot.
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_row(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// Solve `A x = b` over GF(2). Returns any solution, or `None` if the system
/// is inconsistent. `b` must have length `a.rows()`.
///
/// The solution returned is the one with zeros in all free columns, which
/// makes it deterministic given the column order.
pub fn solve(a: &BitMatrix, b: &[bool]) -> Option<Vec<bool>> {
    assert_eq!(b.len(), a.rows());
    // Augment with b as an extra column and reduce.
    let mut aug = BitMatrix::zero(a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for k in 0..a.words_per_row {
            aug.data[r * aug.words_per_row + k] = a.data[r * a.words_per_row + k];
        }
        // Mask off any stray bits beyond a.cols (there are none by
        // construction, but keep the copy honest if cols % 64 == 0 changes).
        aug.set(r, a.cols(), b[r]);
    }
    let pivots = aug.row_reduce();
    // Inconsistent iff some pivot landed in the augmented column.
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![false; a.cols()];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug.get(row, a.cols());
    }
    Some(x)
}

/// Is `v` in the row span of `a`? (Used to test chain-level membership:
/// e.g. whether a cycle is a boundary.)
pub fn in_row_span(a: &BitMatrix, v: &[bool]) -> bool {
    assert_eq!(v.len(), a.cols());
    let mut m = BitMatrix::zero(a.rows() + 1, a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) {
                m.set(r, c, true);
            }
        }
    }
    for (c, &bit) in v.iter().enumerate() {
        m.set(a.rows(), c, bit);
    }
    m.rank() == a.rank()
}
