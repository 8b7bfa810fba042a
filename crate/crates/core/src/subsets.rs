//! Bitmask subset enumeration over the label positions of a matrix.
//!
//! Subsets are `u32` masks where bit `i` stands for the i-th label. The
//! canonical enumeration order everywhere in this crate is by size first,
//! then lexicographically on the sorted index tuple, so that reported
//! witnesses and certificates are deterministic.

/// Hard ceiling for exhaustive sweeps; above this we refuse rather than
/// silently subsample.
pub const MAX_SWEEP_LABELS: usize = 24;

pub fn full_mask(n: usize) -> u32 {
    debug_assert!(n <= 32);
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn contains(mask: u32, i: usize) -> bool {
    mask & (1 << i) != 0
}

/// All size-k subsets of `{0, .., n-1}` in lexicographic tuple order.
pub fn masks_of_size(n: usize, k: usize) -> Combinations {
    Combinations::new(n, k)
}

/// All subsets of size at most `k`, ordered by (size, lexicographic).
pub fn masks_up_to(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0..=k.min(n)).flat_map(move |s| masks_of_size(n, s))
}

/// Subsets of the given sizes that contain index 0, ordered by
/// (size, lexicographic). Used for complement-symmetric sweeps.
pub fn masks_containing_zero(
    n: usize,
    sizes: impl IntoIterator<Item = usize>,
) -> impl Iterator<Item = u32> {
    sizes.into_iter().flat_map(move |s| {
        assert!(s >= 1 && s <= n);
        Combinations::new(n - 1, s - 1).map(|m| (m << 1) | 1)
    })
}

/// Lexicographic k-combinations of `{0, .., n-1}` emitted as bitmasks.
pub struct Combinations {
    n: usize,
    k: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        assert!(n <= 32);
        Combinations {
            n,
            k,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u32, |m, &i| m | (1 << i));
        // advance to the next combination
        if self.k == 0 {
            self.done = true;
            return Some(mask);
        }
        let mut i = self.k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - (self.k - i) {
                self.idx[i] += 1;
                for j in i + 1..self.k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}
