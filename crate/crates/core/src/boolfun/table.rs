use std::fmt;

/// Truth table of a Boolean function of fixed arity.
///
/// Row `i` encodes the assignment `(a1, .., ak)` with `a1` as the most
/// significant bit, i.e. `i = sum(aj * 2^(k-j))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    arity: u8,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(arity: usize) -> Self {
        assert!(arity <= 24, "truth table arity {arity} too large");
        let rows = 1usize << arity;
        TruthTable {
            arity: arity as u8,
            words: vec![0; rows.div_ceil(64)],
        }
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zeros(arity);
        for row in 0..t.len() {
            if f(row) {
                t.set(row, true);
            }
        }
        t
    }

    /// Parses a `0/1` string of length `2^arity`, row 0 first.
    pub fn from_bit_str(arity: usize, bits: &str) -> Option<Self> {
        if bits.len() != 1usize << arity {
            return None;
        }
        let mut t = Self::zeros(arity);
        for (row, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => t.set(row, true),
                _ => return None,
            }
        }
        Some(t)
    }

    pub fn constant(value: bool) -> Self {
        Self::from_fn(0, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn len(&self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, row: usize) -> bool {
        (self.words[row >> 6] >> (row & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, value: bool) {
        let bit = 1u64 << (row & 63);
        if value {
            self.words[row >> 6] |= bit;
        } else {
            self.words[row >> 6] &= !bit;
        }
    }

    /// Row bit mask of position `pos` (0-based, leftmost argument first).
    #[inline]
    pub fn position_bit(&self, pos: usize) -> usize {
        1 << (self.arity() - 1 - pos)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn models(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&r| self.get(r))
    }

    pub fn is_const_true(&self) -> bool {
        self.count_ones() == self.len()
    }

    pub fn is_const_false(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Whether the function value changes with argument `pos` somewhere.
    pub fn depends_on(&self, pos: usize) -> bool {
        let bit = self.position_bit(pos);
        (0..self.len())
            .filter(|r| r & bit == 0)
            .any(|r| self.get(r) != self.get(r | bit))
    }

    /// Drops the given argument positions, which must be inessential.
    pub fn remove_positions(&self, drop: &[usize]) -> TruthTable {
        let keep: Vec<usize> = (0..self.arity()).filter(|p| !drop.contains(p)).collect();
        let k = keep.len();
        TruthTable::from_fn(k, |row| {
            let mut full = 0usize;
            for (j, &p) in keep.iter().enumerate() {
                if row & (1 << (k - 1 - j)) != 0 {
                    full |= self.position_bit(p);
                }
            }
            self.get(full)
        })
    }

    /// Reorders arguments: position `j` of the result reads position
    /// `order[j]` of `self`.
    pub fn reorder(&self, order: &[usize]) -> TruthTable {
        debug_assert_eq!(order.len(), self.arity());
        let k = self.arity();
        TruthTable::from_fn(k, |row| {
            let mut src = 0usize;
            for (j, &p) in order.iter().enumerate() {
                if row & (1 << (k - 1 - j)) != 0 {
                    src |= self.position_bit(p);
                }
            }
            self.get(src)
        })
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len())
            .map(|r| if self.get(r) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}:{})", self.arity, self.to_bit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_first_indexing() {
        // OR0 = x v y, only row (0,0) is false.
        let t = TruthTable::from_bit_str(2, "0111").unwrap();
        assert!(!t.get(0b00));
        assert!(t.get(0b10));
        assert_eq!(t.position_bit(0), 0b10);
    }

    #[test]
    fn dependency_and_removal() {
        // f(a, b, c) = a, independent of b and c
        let t = TruthTable::from_fn(3, |r| r & 0b100 != 0);
        assert!(t.depends_on(0));
        assert!(!t.depends_on(1));
        let r = t.remove_positions(&[1, 2]);
        assert_eq!(r.to_bit_string(), "01");
    }

    #[test]
    fn reorder_swaps_arguments() {
        // x & !y
        let t = TruthTable::from_bit_str(2, "0010").unwrap();
        let swapped = t.reorder(&[1, 0]);
        assert_eq!(swapped.to_bit_string(), "0100");
    }

    #[test]
    fn wide_tables_span_words() {
        let t = TruthTable::from_fn(8, |r| r == 200);
        assert_eq!(t.count_ones(), 1);
        assert!(t.get(200));
        assert_eq!(t.models().collect::<Vec<_>>(), vec![200]);
    }
}
