//! Small square boolean matrices packed into machine words.
//!
//! A `BitMatrix` holds one `u64` per row, so it supports dimensions up to
//! 64. Reachability closure runs Floyd-Warshall over whole rows: for each
//! pivot `k`, every row that can reach `k` absorbs row `k` with a single
//! `|=`. That is the only matrix primitive the dynamic programming over
//! tree decompositions needs, and at bag sizes of `k + 2` it is faster
//! than any sparse representation.

/// Square boolean matrix with row-major `u64` storage. `dim <= 64`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    dim: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    /// All-false matrix of the given dimension.
    ///
    /// Panics if `dim > 64`; callers guard bag sizes before building one.
    pub fn new(dim: usize) -> Self {
        assert!(dim <= 64, "BitMatrix supports dim <= 64, got {dim}");
        BitMatrix { dim, rows: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.dim && j < self.dim);
        self.rows[i] |= 1 << j;
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.dim && j < self.dim);
        self.rows[i] >> j & 1 == 1
    }

    /// Ors a column bitmask into row `i`.
    pub fn row_or(&mut self, i: usize, bits: u64) {
        debug_assert!(i < self.dim);
        debug_assert!(self.dim == 64 || bits < 1 << self.dim);
        self.rows[i] |= bits;
    }

    /// Entire row as a bitmask over columns.
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// Column `j` gathered into a bitmask over rows.
    pub fn column(&self, j: usize) -> u64 {
        let mut out = 0u64;
        for (i, &r) in self.rows.iter().enumerate() {
            out |= (r >> j & 1) << i;
        }
        out
    }

    /// Bitwise union with another matrix of the same dimension.
    pub fn union_with(&mut self, other: &BitMatrix) {
        assert_eq!(self.dim, other.dim);
        for (r, o) in self.rows.iter_mut().zip(&other.rows) {
            *r |= o;
        }
    }

    /// Reflexive-transitive closure restricted to the vertices in `support`:
    /// sets the diagonal for every support member, then closes paths whose
    /// intermediate vertices all lie in `support`. Rows and columns outside
    /// `support` are cleared.
    pub fn close_reflexive_within(&mut self, support: u64) {
        let dim = self.dim;
        for i in 0..dim {
            if support >> i & 1 == 1 {
                self.rows[i] = (self.rows[i] | 1 << i) & support;
            } else {
                self.rows[i] = 0;
            }
        }
        for k in 0..dim {
            if support >> k & 1 == 0 {
                continue;
            }
            let row_k = self.rows[k];
            for i in 0..dim {
                if self.rows[i] >> k & 1 == 1 {
                    self.rows[i] |= row_k;
                }
            }
        }
    }

    /// Rebuild this matrix under an index translation. `map[i] = Some(j)`
    /// carries old row/column `i` to new position `j`; entries mapped to
    /// `None` are dropped. Used when a bag gains or loses a vertex and the
    /// local ordering shifts.
    pub fn remap(&self, map: &[Option<usize>], new_dim: usize) -> BitMatrix {
        debug_assert_eq!(map.len(), self.dim);
        let mut out = BitMatrix::new(new_dim);
        for (i, &mi) in map.iter().enumerate() {
            let Some(ni) = mi else { continue };
            let row = self.rows[i];
            for (j, &mj) in map.iter().enumerate() {
                if row >> j & 1 == 1 {
                    if let Some(nj) = mj {
                        out.rows[ni] |= 1 << nj;
                    }
                }
            }
        }
        out
    }
}
