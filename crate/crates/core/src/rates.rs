//! Code rates in bits per symbol.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{param, Result};

/// `log2` of an arbitrarily large integer; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Largest permissible outer-code length for `M` blocks:
/// `2^floor(log2 M) - 1` (zero when `M = 0`).
pub fn max_outer_length(count: &BigUint) -> u64 {
    match count.bits() {
        0 => 0,
        b if b > 64 => u64::MAX,
        b => (1u64 << (b - 1)) - 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBounds {
    /// `(N - 4) / (N m + (N - 1) l) * log2(N + 1)`.
    pub exact: f64,
    /// `(1 - 8 / (M - 1)) (log2 M - 1) / (m + l)`.
    pub lower_bound: f64,
    /// `log2(M) / m`, the leading term as `m` grows.
    pub asymptotic: f64,
}

/// Rates for block length `m`, marker length `l`, outer length `N` and block
/// count `M`.
pub fn rate_bounds(m: usize, l: usize, outer_len: u64, count: &BigUint) -> Result<RateBounds> {
    if m == 0 {
        return Err(param("block length must be positive"));
    }
    let limit = max_outer_length(count);
    if outer_len > limit {
        return Err(param(format!(
            "outer length {outer_len} exceeds 2^floor(log2 M) - 1 = {limit}"
        )));
    }
    if outer_len == 0 {
        return Err(param("outer length must be positive"));
    }
    let n = outer_len as f64;
    let (mf, lf) = (m as f64, l as f64);
    let log_m = log2_big(count);
    let m_minus_one = (count - 1u32).to_f64().unwrap_or(f64::INFINITY);
    Ok(RateBounds {
        exact: (n - 4.0) / (n * mf + (n - 1.0) * lf) * (n + 1.0).log2(),
        lower_bound: (1.0 - 8.0 / m_minus_one) * (log_m - 1.0) / (mf + lf),
        asymptotic: asymptotic_rate(log_m, m),
    })
}

/// Rates at the largest permissible outer length `N = 2^floor(log2 M) - 1`.
///
/// Evaluated through `t = floor(log2 M)` in floating point, so `M` may be far
/// beyond machine range. `None` when `M < 2`, where no outer code exists.
pub fn rates_at_max_length(m: usize, l: usize, count: &BigUint) -> Option<RateBounds> {
    let bits = count.bits();
    if bits < 2 || m == 0 {
        return None;
    }
    let t = (bits - 1) as f64;
    // 1 / N, which underflows harmlessly to 0 for very large t.
    let inv_n = 1.0 / (t.exp2() - 1.0);
    let (mf, lf) = (m as f64, l as f64);
    let log_m = log2_big(count);
    let m_minus_one = (count - 1u32).to_f64().unwrap_or(f64::INFINITY);
    Some(RateBounds {
        exact: (1.0 - 4.0 * inv_n) / (mf + lf - lf * inv_n) * t,
        lower_bound: (1.0 - 8.0 / m_minus_one) * (log_m - 1.0) / (mf + lf),
        asymptotic: asymptotic_rate(log_m, m),
    })
}

/// `log2(M) / m` from a precomputed `log2 M`.
pub fn asymptotic_rate(log2_count: f64, m: usize) -> f64 {
    log2_count / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rate_arithmetic() {
        let r = rate_bounds(18, 5, 15, &BigUint::from(16u32)).unwrap();
        assert!((r.exact - 44.0 / 340.0).abs() < 1e-15);
        assert!((r.asymptotic - 4.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn outer_length_limit() {
        assert_eq!(max_outer_length(&BigUint::from(16u32)), 15);
        assert_eq!(max_outer_length(&BigUint::from(31u32)), 15);
        assert_eq!(max_outer_length(&BigUint::from(32u32)), 31);
        assert_eq!(max_outer_length(&BigUint::from(1u32)), 0);
        assert!(rate_bounds(18, 5, 16, &BigUint::from(31u32)).is_err());
    }

    #[test]
    fn largest_outer_length_matches_explicit() {
        let count = BigUint::from(40u32);
        let a = rates_at_max_length(18, 5, &count).unwrap();
        let b = rate_bounds(18, 5, 31, &count).unwrap();
        assert!((a.exact - b.exact).abs() < 1e-12);
        assert_eq!(a.lower_bound, b.lower_bound);
        assert!(rates_at_max_length(18, 5, &BigUint::from(1u32)).is_none());
        let huge = BigUint::from(3u32).pow(5000);
        let r = rates_at_max_length(5000, 5, &huge).unwrap();
        assert!(r.exact.is_finite() && r.exact > 0.0);
        assert!(r.exact <= r.asymptotic);
    }

    #[test]
    fn log2_of_large_values() {
        let x = BigUint::from(3u32).pow(200);
        assert!((log2_big(&x) - 200.0 * 3f64.log2()).abs() < 1e-9);
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
    }
}
