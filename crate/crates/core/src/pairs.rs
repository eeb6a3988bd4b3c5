//! Flat indexing of the valid `(n, m)` pairs, `0 <= m <= n` with `n - m` even.
//!
//! Pairs are laid out by ascending order `n`, then ascending repetition `m`.
//! Order `n` holds `n / 2 + 1` entries, so the position of `(n, m)` is
//! `order_offset(n) + m / 2`.

/// Number of pairs with order strictly below `n`.
#[inline]
pub fn order_offset(n: u32) -> usize {
    let p = (n / 2) as usize;
    if n % 2 == 0 {
        p * (p + 1)
    } else {
        (p + 1) * (p + 1)
    }
}

/// Number of valid pairs with order at most `n_max`.
#[inline]
pub fn pair_count(n_max: u32) -> usize {
    order_offset(n_max + 1)
}

#[inline]
pub fn pair_index(n: u32, m: u32) -> usize {
    debug_assert!(is_valid_pair(n, m));
    order_offset(n) + (m / 2) as usize
}

#[inline]
pub fn is_valid_pair(n: u32, m: u32) -> bool {
    m <= n && (n - m) % 2 == 0
}

/// Repetitions `m >= 0` valid for order `n`, ascending.
pub fn repetitions(n: u32) -> impl Iterator<Item = u32> {
    (n % 2..=n).step_by(2)
}

/// All valid pairs up to `n_max` in layout order.
pub fn pairs(n_max: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=n_max).flat_map(|n| repetitions(n).map(move |m| (n, m)))
}
