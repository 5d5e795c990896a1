//! Exact integer arithmetic for the fair-share relation.
//!
//! `x ≈ y` holds when `⌊y⌋ ≤ x ≤ ⌈y⌉`. Every bound in this crate is a
//! ratio of non-negative integers, so the relation is decided without
//! floating point.

/// Floor and ceiling of `num / den`.
pub fn fair_bounds(num: u64, den: u64) -> (u64, u64) {
    assert!(den > 0, "fair_bounds: zero denominator");
    let floor = num / den;
    let ceil = if num.is_multiple_of(den) { floor } else { floor + 1 };
    (floor, ceil)
}

/// `x ≈ num / den` for an integer `x`.
pub fn approx(x: u64, num: u64, den: u64) -> bool {
    let (lo, hi) = fair_bounds(num, den);
    lo <= x && x <= hi
}

/// `lhs_num / lhs_den ≈ num / den` for a rational left-hand side.
pub fn approx_ratio(lhs_num: u64, lhs_den: u64, num: u64, den: u64) -> bool {
    assert!(lhs_den > 0, "approx_ratio: zero denominator");
    let (lo, hi) = fair_bounds(num, den);
    let lhs = lhs_num as u128;
    let d = lhs_den as u128;
    lo as u128 * d <= lhs && lhs <= hi as u128 * d
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

pub fn pow(base: u64, exp: u64) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base).expect("power overflow");
    }
    acc
}

/// Elementary symmetric polynomial `e_k(xs)`: the number of transversals of
/// size `k` when `xs` are part sizes.
pub fn elementary_symmetric(xs: &[u64], k: usize) -> u64 {
    let mut table = vec![0u64; k + 1];
    table[0] = 1;
    for &x in xs {
        for j in (1..=k).rev() {
            table[j] += table[j - 1] * x;
        }
    }
    table[k]
}
