use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `floor((f - 1) / 2)`.
pub fn fbar(f: u32) -> u32 {
    f.saturating_sub(1) / 2
}

pub fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

/// `C(n, k)`, zero unless `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n as u64), BigUint::from(k as u64))
}
