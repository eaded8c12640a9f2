//! Small integer helpers shared across modules.

use num_bigint::BigUint;
use num_traits::One;

/// Product of `values` by balanced binary splitting.
pub(crate) fn product(values: &[BigUint]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1 => values[0].clone(),
        n => {
            let (a, b) = values.split_at(n / 2);
            product(a) * product(b)
        }
    }
}

/// Product of machine integers, grouping small factors into words first.
pub(crate) fn product_u64<I: IntoIterator<Item = u64>>(values: I) -> BigUint {
    let mut words = Vec::new();
    let mut acc: u128 = 1;
    for v in values {
        match acc.checked_mul(v as u128) {
            Some(p) if p <= u64::MAX as u128 => acc = p,
            _ => {
                words.push(BigUint::from(acc));
                acc = v as u128;
            }
        }
    }
    words.push(BigUint::from(acc));
    product(&words)
}

/// ∏ p^e over the given prime powers.
pub(crate) fn product_of_powers<I: IntoIterator<Item = (u64, u32)>>(powers: I) -> BigUint {
    let factors: Vec<BigUint> = powers
        .into_iter()
        .map(|(p, e)| num_traits::pow(BigUint::from(p), e as usize))
        .collect();
    product(&factors)
}

/// ⌊√n⌋.
pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primality by trial division; independent of the sieve.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}
