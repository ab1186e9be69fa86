//! Membership tables over `{0,1}^n`.
//!
//! A [`Table`] is the characteristic bit-vector of a subset of the Boolean
//! cube, indexed by vertex: bit `v` is set iff vertex `v` is present, where
//! vertex `v` assigns `v >> i & 1` to axis `i`. All kernels in this module are
//! label-free; the label bookkeeping lives in [`crate::system`].

use smallvec::SmallVec;

pub(crate) type Words = SmallVec<[u64; 2]>;

/// Within-word masks selecting the positions whose axis-`i` bit is zero.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

#[inline]
fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

#[inline]
fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// Iterates the submasks of `mask` in increasing numeric order.
///
/// The k-th submask yielded is the deposit of `k` into the bits of `mask`,
/// which is what makes compressed re-indexing a plain counter.
#[derive(Clone, Debug)]
pub(crate) struct Submasks {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        let succ = (cur | !self.mask).wrapping_add(1) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(cur)
    }
}

#[inline]
pub(crate) fn submasks(mask: u32) -> Submasks {
    Submasks {
        mask,
        next: Some(0),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Table {
    n: u8,
    words: Words,
}

impl Table {
    pub(crate) fn empty(n: usize) -> Self {
        Table {
            n: n as u8,
            words: SmallVec::from_elem(0, word_count(n)),
        }
    }

    pub(crate) fn full(n: usize) -> Self {
        let mut t = Table {
            n: n as u8,
            words: SmallVec::from_elem(!0, word_count(n)),
        };
        t.words[0] &= tail_mask(n);
        t
    }

    /// Table for `n <= 6` from its single word; bits beyond `2^n` are dropped.
    pub(crate) fn from_word(n: usize, word: u64) -> Self {
        debug_assert!(n <= 6);
        let mut words = Words::new();
        words.push(word & tail_mask(n));
        Table { n: n as u8, words }
    }

    #[inline]
    pub(crate) fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub(crate) fn vertex_count(&self) -> usize {
        1usize << self.n
    }

    #[inline]
    pub(crate) fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    #[inline]
    pub(crate) fn get(&self, v: u32) -> bool {
        let v = v as usize;
        self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, v: u32, on: bool) {
        let v = v as usize;
        let bit = 1u64 << (v & 63);
        if on {
            self.words[v >> 6] |= bit;
        } else {
            self.words[v >> 6] &= !bit;
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn is_full(&self) -> bool {
        self.count() == self.vertex_count()
    }

    pub(crate) fn first_word(&self) -> u64 {
        self.words[0]
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(((wi as u32) << 6) | b)
            })
        })
    }

    pub(crate) fn complement(&self) -> Self {
        let mut t = self.clone();
        for w in t.words.iter_mut() {
            *w = !*w;
        }
        t.words[0] &= tail_mask(self.n());
        t
    }

    pub(crate) fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut t = self.clone();
        for (a, b) in t.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
        t
    }

    pub(crate) fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut t = self.clone();
        for (a, b) in t.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
        t
    }

    pub(crate) fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Restriction to the cube fixing `fixed_mask` to the values in
    /// `fixed_vals`, normalized onto the remaining axes (original order kept).
    pub(crate) fn restrict(&self, fixed_mask: u32, fixed_vals: u32) -> Self {
        debug_assert_eq!(fixed_vals & !fixed_mask, 0);
        let free = self.full_mask() & !fixed_mask;
        let mut out = Table::empty(self.n() - fixed_mask.count_ones() as usize);
        for (r, sub) in submasks(free).enumerate() {
            if self.get(sub | fixed_vals) {
                out.set(r as u32, true);
            }
        }
        out
    }

    /// Existential projection: `g` survives iff some completion on `y` is present.
    pub(crate) fn project_union(&self, y: u32) -> Self {
        if y == 0 {
            return self.clone();
        }
        if y.count_ones() == 1 {
            let axis = y.trailing_zeros() as usize;
            return self.fold_axis(axis, |lo, hi| lo | hi);
        }
        let free = self.full_mask() & !y;
        let mut out = Table::empty(self.n() - y.count_ones() as usize);
        for (r, base) in submasks(free).enumerate() {
            if submasks(y).any(|t| self.get(base | t)) {
                out.set(r as u32, true);
            }
        }
        out
    }

    /// Universal projection: `g` survives iff every completion on `y` is present.
    pub(crate) fn project_inter(&self, y: u32) -> Self {
        if y == 0 {
            return self.clone();
        }
        if y.count_ones() == 1 {
            let axis = y.trailing_zeros() as usize;
            return self.fold_axis(axis, |lo, hi| lo & hi);
        }
        let free = self.full_mask() & !y;
        let mut out = Table::empty(self.n() - y.count_ones() as usize);
        for (r, base) in submasks(free).enumerate() {
            if submasks(y).all(|t| self.get(base | t)) {
                out.set(r as u32, true);
            }
        }
        out
    }

    /// Combines the two halves along `axis` bitwise, then compresses the axis out.
    fn fold_axis(&self, axis: usize, op: impl Fn(u64, u64) -> u64) -> Self {
        let n = self.n();
        debug_assert!(axis < n);
        if n <= 6 {
            let w = self.words[0];
            let lo = w & LOW_HALF[axis];
            let hi = (w >> (1u32 << axis)) & LOW_HALF[axis];
            let merged = op(lo, hi);
            return Table::from_word(n - 1, compress_axis(merged, axis));
        }
        let mut out = Table::empty(n - 1);
        if axis >= 6 {
            let stride = 1usize << (axis - 6);
            let mut k = 0;
            for j in 0..self.words.len() {
                if j & stride == 0 {
                    out.words[k] = op(self.words[j], self.words[j + stride]);
                    k += 1;
                }
            }
        } else {
            // Each source word yields 32 result bits.
            for (j, &w) in self.words.iter().enumerate() {
                let lo = w & LOW_HALF[axis];
                let hi = (w >> (1u32 << axis)) & LOW_HALF[axis];
                let half = compress_axis(op(lo, hi), axis);
                out.words[j >> 1] |= half << ((j & 1) * 32);
            }
        }
        out
    }

    /// Sorts every edge along `axis` so the 1-bit sits on the axis-0 endpoint.
    pub(crate) fn shift_down(&self, axis: usize) -> Self {
        let mut t = self.clone();
        if axis < 6 {
            let s = 1u32 << axis;
            let m = LOW_HALF[axis];
            for w in t.words.iter_mut() {
                let lo = *w & m;
                let hi = (*w >> s) & m;
                *w = (lo | hi) | ((lo & hi) << s);
            }
        } else {
            let stride = 1usize << (axis - 6);
            for j in 0..t.words.len() {
                if j & stride == 0 {
                    let (a, b) = (t.words[j], t.words[j + stride]);
                    t.words[j] = a | b;
                    t.words[j + stride] = a & b;
                }
            }
        }
        t
    }

    /// True iff no axis-edge has its 1-bit only on the upper endpoint.
    pub(crate) fn is_axis_sorted(&self, axis: usize) -> bool {
        let bit = 1u32 << axis;
        submasks(self.full_mask() & !bit).all(|lo| self.get(lo) || !self.get(lo | bit))
    }
}

/// Packs the bits at positions with axis-bit clear (selected by `LOW_HALF`)
/// into a contiguous run of 32 bits.
#[inline]
fn compress_axis(mut x: u64, axis: usize) -> u64 {
    // Classic shift-and-mask compaction: after step j the surviving bits sit
    // in blocks of 2^(j+1) positions.
    let mut shift = 1u32 << axis;
    for level in axis..5 {
        let keep = LOW_HALF[level + 1];
        x = (x | (x >> shift)) & keep;
        shift <<= 1;
    }
    x & 0xFFFF_FFFF
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_fold(t: &Table, axis: usize, and: bool) -> Table {
        let n = t.n();
        let mut out = Table::empty(n - 1);
        for r in 0..(1u32 << (n - 1)) {
            let low = r & ((1 << axis) - 1);
            let high = (r >> axis) << (axis + 1);
            let v0 = low | high;
            let v1 = v0 | (1 << axis);
            let bit = if and {
                t.get(v0) && t.get(v1)
            } else {
                t.get(v0) || t.get(v1)
            };
            out.set(r, bit);
        }
        out
    }

    fn pseudo_random_table(n: usize, seed: u64) -> Table {
        let mut t = Table::empty(n);
        let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        for v in 0..(1u32 << n) {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            t.set(v, x & 1 == 1);
        }
        t
    }

    #[test]
    fn submasks_are_increasing_deposits() {
        let got: Vec<u32> = submasks(0b1010).collect();
        assert_eq!(got, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn fold_axis_matches_naive_for_all_sizes() {
        for n in 1..=9 {
            for seed in 0..4 {
                let t = pseudo_random_table(n, seed + 17 * n as u64);
                for axis in 0..n {
                    assert_eq!(
                        t.project_union(1 << axis),
                        naive_fold(&t, axis, false),
                        "n={n} axis={axis}"
                    );
                    assert_eq!(t.project_inter(1 << axis), naive_fold(&t, axis, true));
                }
            }
        }
    }

    #[test]
    fn shift_preserves_count_and_sorts_axis() {
        for n in 1..=8 {
            let t = pseudo_random_table(n, 99 + n as u64);
            for axis in 0..n {
                let s = t.shift_down(axis);
                assert_eq!(s.count(), t.count());
                assert!(s.is_axis_sorted(axis));
                assert_eq!(s.shift_down(axis), s);
            }
        }
    }

    #[test]
    fn complement_stays_within_cube() {
        for n in 0..=7 {
            let t = Table::empty(n).complement();
            assert_eq!(t.count(), 1 << n);
            assert!(t.is_full());
        }
    }
}
