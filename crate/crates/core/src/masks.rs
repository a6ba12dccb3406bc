//! Bit-mask helpers for exhaustive sweeps over small universes.

/// Iterates all submasks of `set` in ascending order, starting with 0.
pub fn submasks(set: u64) -> Submasks {
    Submasks { set, next: Some(0) }
}

pub struct Submasks {
    set: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        let following = current.wrapping_sub(self.set) & self.set;
        self.next = if following == 0 { None } else { Some(following) };
        Some(current)
    }
}

/// Mask with the low `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
