//! Bit-packed GF(2) row vectors, rank computation and nullspace bases.
//!
//! Rows are packed little-endian into `u64` words so that row XOR, the
//! workhorse of every elimination here, runs word-parallel.

/// A length-`len` vector over GF(2), packed into `u64` words (bit `i` of the
/// vector lives in word `i / 64`, bit `i % 64`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(len: usize, bits: I) -> Self {
        let mut row = BitRow::zeros(len);
        for (i, b) in bits.into_iter().enumerate() {
            row.set(i, b);
        }
        row
    }

    /// Build from the low `len` bits of `word` (bit 0 first).
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= 64);
        let mut row = BitRow::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            row.words[0] = word & mask;
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "xor of unequal-length rows");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Parity of the AND of two rows: `sum_i a_i b_i mod 2`.
    pub fn dot(&self, other: &BitRow) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal-length rows");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn first_set_bit(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Copy of the bit range `start..end` as a new row of length `end - start`.
    pub fn slice(&self, start: usize, end: usize) -> BitRow {
        assert!(start <= end && end <= self.len);
        BitRow::from_bits(end - start, (start..end).map(|i| self.get(i)))
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitRow) -> BitRow {
        BitRow::from_bits(
            self.len + other.len,
            (0..self.len)
                .map(|i| self.get(i))
                .chain((0..other.len).map(|i| other.get(i))),
        )
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// An incrementally built row-echelon basis of a GF(2) row space.
///
/// Rows are kept reduced against each other and indexed by pivot position, so
/// membership tests and insertions are O(rank) row XORs.
pub struct RowBasis {
    ncols: usize,
    rows: Vec<BitRow>, // sorted by pivot column
}

impl RowBasis {
    pub fn new(ncols: usize) -> Self {
        RowBasis { ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: BitRow) -> BitRow {
        for r in &self.rows {
            let pivot = r.first_set_bit().expect("basis rows are nonzero");
            if v.get(pivot) {
                v.xor_assign(r);
            }
        }
        v
    }

    /// True iff `v` lies in the span of the inserted rows (the zero vector
    /// always does).
    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Inserts `v` if it is independent of the span; returns whether the rank
    /// grew.
    pub fn insert(&mut self, v: BitRow) -> bool {
        assert_eq!(v.len(), self.ncols);
        let reduced = self.reduce(v);
        match reduced.first_set_bit() {
            None => false,
            Some(pivot) => {
                // keep earlier rows reduced against the new pivot
                for r in &mut self.rows {
                    if r.get(pivot) {
                        r.xor_assign(&reduced);
                    }
                }
                let pos = self
                    .rows
                    .binary_search_by_key(&pivot, |r| r.first_set_bit().unwrap())
                    .unwrap_err();
                self.rows.insert(pos, reduced);
                true
            }
        }
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }
}

/// Rank of a set of GF(2) rows.
pub fn rank<I>(rows: I) -> usize
where
    I: IntoIterator<Item = BitRow>,
{
    let mut basis: Option<RowBasis> = None;
    for row in rows {
        let b = basis.get_or_insert_with(|| RowBasis::new(row.len()));
        b.insert(row);
    }
    basis.map_or(0, |b| b.rank())
}

/// Basis of the solution space of `A v = 0` for the given constraint rows
/// (each of length `ncols`). Dimension is `ncols - rank(A)`.
pub fn nullspace(constraints: &[BitRow], ncols: usize) -> Vec<BitRow> {
    let mut basis = RowBasis::new(ncols);
    for c in constraints {
        assert_eq!(c.len(), ncols, "constraint width mismatch");
        basis.insert(c.clone());
    }
    // The reduced rows have distinct pivots and zeros above/below each pivot,
    // so each non-pivot column yields one kernel vector.
    let pivots: Vec<usize> = basis.rows.iter().map(|r| r.first_set_bit().unwrap()).collect();
    let mut kernel = Vec::with_capacity(ncols - pivots.len());
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = BitRow::zeros(ncols);
        v.set(free, true);
        for (r, &p) in basis.rows.iter().zip(&pivots) {
            if r.get(free) {
                v.set(p, true);
            }
        }
        kernel.push(v);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &str) -> BitRow {
        BitRow::from_bits(bits.len(), bits.chars().map(|c| c == '1'))
    }

    #[test]
    fn rank_identity() {
        let rows = vec![row("100"), row("010"), row("001")];
        assert_eq!(rank(rows), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        let rows = vec![row("000"), row("000")];
        assert_eq!(rank(rows), 0);
    }

    #[test]
    fn rank_dependent_row() {
        // third row is the sum of the first two
        let rows = vec![row("110"), row("011"), row("101")];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn nullspace_dimensions() {
        let cons = vec![row("1100"), row("0110")];
        let kernel = nullspace(&cons, 4);
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            for c in &cons {
                assert!(!c.dot(v));
            }
        }
    }

    #[test]
    fn nullspace_spans_all_solutions() {
        let cons = vec![row("10110"), row("01011")];
        let kernel = nullspace(&cons, 5);
        assert_eq!(kernel.len(), 3);
        // all 2^3 combinations solve the system and are distinct
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..8 {
            let mut v = BitRow::zeros(5);
            for (i, k) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(k);
                }
            }
            for c in &cons {
                assert!(!c.dot(&v));
            }
            assert!(seen.insert(format!("{v:?}")));
        }
    }

    #[test]
    fn basis_membership() {
        let mut b = RowBasis::new(4);
        assert!(b.insert(row("1100")));
        assert!(b.insert(row("0110")));
        assert!(!b.insert(row("1010"))); // sum of the two
        assert!(b.contains(&row("1010")));
        assert!(b.contains(&row("0000")));
        assert!(!b.contains(&row("0001")));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn slice_and_concat_roundtrip() {
        let r = row("1011001");
        let left = r.slice(0, 3);
        let right = r.slice(3, 7);
        assert_eq!(left.concat(&right), r);
    }
}
