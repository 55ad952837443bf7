//! Fixed-width bit rows used for adjacency and vertex-set masks.

use serde::{Deserialize, Serialize};

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn test(row: &[u64], i: usize) -> bool {
    row[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> usize {
    // Wrapping adds keep the loop vectorized when overflow checks are on.
    a.iter()
        .zip(b)
        .fold(0usize, |acc, (x, y)| acc.wrapping_add((x & y).count_ones() as usize))
}

#[inline]
pub fn and_not_count(a: &[u64], b: &[u64], not: &[u64]) -> usize {
    a.iter().zip(b).zip(not).fold(0usize, |acc, ((x, y), z)| {
        acc.wrapping_add((x & y & !z).count_ones() as usize)
    })
}

#[inline]
pub fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Iterator over the set bit positions of a row, ascending.
pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + bit)
        })
    })
}

/// A growable-free set of vertex indices in `[0, capacity)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitSet {
    bits: Vec<u64>,
    capacity: usize,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            bits: vec![0; words_for(capacity)],
            capacity,
        }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(capacity: usize, items: I) -> Self {
        let mut set = Self::new(capacity);
        for i in items {
            set.insert(i);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.capacity);
        self.bits[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.bits[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.capacity && test(&self.bits, i)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
    }

    pub fn union_with(&mut self, row: &[u64]) {
        for (a, b) in self.bits.iter_mut().zip(row) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, row: &[u64]) {
        for (a, b) in self.bits.iter_mut().zip(row) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, row: &[u64]) {
        for (a, b) in self.bits.iter_mut().zip(row) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.bits)
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_lists_set_bits_in_order() {
        let set = BitSet::from_iter(200, [0, 5, 63, 64, 130, 199]);
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 130, 199]);
        assert_eq!(set.len(), 6);
        assert!(set.contains(130) && !set.contains(131) && !set.contains(500));
    }
}
