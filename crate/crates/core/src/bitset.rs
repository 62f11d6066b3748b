//! Dense bit-vector storage for vertex sets and adjacency matrices.

use std::cmp::Ordering;
use std::fmt;

pub const WORD_BITS: usize = 64;

#[inline]
pub fn words_for(nbits: usize) -> usize {
    nbits.div_ceil(WORD_BITS)
}

/// A set of vertex indices below a fixed bound, stored as a bit-vector.
///
/// Ordering is canonical set order: ascending member lists compared
/// lexicographically, so `{0,5}` sorts before `{1,2}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    nbits: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(nbits: usize) -> Self {
        VertexSet {
            nbits,
            words: vec![0; words_for(nbits)],
        }
    }

    pub fn full(nbits: usize) -> Self {
        let mut s = Self::empty(nbits);
        for v in 0..nbits {
            s.insert(v);
        }
        s
    }

    pub fn from_indices(nbits: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(nbits);
        for v in indices {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.nbits
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.nbits, "vertex {v} out of range {}", self.nbits);
        self.words[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        assert!(v < self.nbits);
        self.words[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.nbits && (self.words[v / WORD_BITS] >> (v % WORD_BITS)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Number of elements shared with a raw word slice (e.g. an adjacency row).
    pub fn intersection_count(&self, row: &[u64]) -> usize {
        debug_assert_eq!(row.len(), self.words.len());
        self.words
            .iter()
            .zip(row)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint_with(&self, row: &[u64]) -> bool {
        self.words.iter().zip(row).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ascending-member lexicographic order: at the first differing bit,
        // the set containing it has the smaller next element.
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = 1u64 << diff.trailing_zeros();
                return if a & bit != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len().cmp(&other.len())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

/// Square symmetric bit matrix, row-major with a fixed word stride.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeroed(n: usize) -> Self {
        let stride = words_for(n);
        BitMatrix {
            n,
            stride,
            words: vec![0; n * stride],
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.words[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize) {
        self.words[u * self.stride + v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> bool {
        (self.words[u * self.stride + v / WORD_BITS] >> (v % WORD_BITS)) & 1 == 1
    }

    pub fn row_degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Complement without the diagonal.
    pub fn complement(&self) -> BitMatrix {
        let mut out = BitMatrix::zeroed(self.n);
        let tail_mask = tail_mask(self.n);
        for u in 0..self.n {
            let dst = &mut out.words[u * out.stride..(u + 1) * out.stride];
            let src = &self.words[u * self.stride..(u + 1) * self.stride];
            for (w, (d, s)) in dst.iter_mut().zip(src).enumerate() {
                let mut word = !s;
                if w == self.stride - 1 {
                    word &= tail_mask;
                }
                *d = word;
            }
            dst[u / WORD_BITS] &= !(1u64 << (u % WORD_BITS));
        }
        out
    }

    /// Mutable access to disjoint row chunks, for parallel construction.
    pub fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, u64> {
        self.words.chunks_mut(self.stride)
    }
}

/// Mask selecting the valid bits of the last word of an `n`-bit row.
pub fn tail_mask(nbits: usize) -> u64 {
    let rem = nbits % WORD_BITS;
    if rem == 0 && nbits > 0 {
        u64::MAX
    } else if rem == 0 {
        0
    } else {
        (1u64 << rem) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_roundtrip() {
        let s = VertexSet::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(64) && !s.contains(65));
    }

    #[test]
    fn canonical_order_is_member_lex() {
        let a = VertexSet::from_indices(10, [0, 5]);
        let b = VertexSet::from_indices(10, [1, 2]);
        assert!(a < b);
        let c = VertexSet::from_indices(10, [0, 4]);
        assert!(c < a);
        let d = VertexSet::from_indices(10, [0, 5, 7]);
        assert!(a < d); // prefix is smaller
    }

    #[test]
    fn complement_excludes_diagonal() {
        let mut m = BitMatrix::zeroed(5);
        m.set(0, 1);
        m.set(1, 0);
        let c = m.complement();
        assert!(!c.get(0, 1));
        assert!(c.get(0, 2));
        for v in 0..5 {
            assert!(!c.get(v, v));
        }
        assert_eq!(c.row_degree(0), 3);
    }
}
