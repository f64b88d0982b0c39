//! Small integer helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Canonical residue of `a` in `[0, m)` for `m > 0`.
pub fn canonical_mod(a: &BigInt, m: &BigInt) -> BigInt {
    debug_assert!(m.is_positive());
    a.mod_floor(m)
}

/// Least absolute representative of `a` mod `m` (`m > 0`).
/// Ties (`m` even, residue exactly `m/2`) go to the nonnegative side.
pub fn least_abs_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = canonical_mod(a, m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Modular inverse of `a` mod `m` (`m > 0`), if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(canonical_mod(&e.x, m))
    } else {
        None
    }
}

pub fn big_pow(base: &BigInt, exp: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

/// Exact quotient `a / d`, or `None` if `d` does not divide `a`.
pub fn exact_div(a: &BigInt, d: &BigInt) -> Option<BigInt> {
    if d.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(d);
    if r.is_zero() {
        Some(q)
    } else {
        None
    }
}

/// Deterministic Miller-Rabin primality test. The witness set is proven
/// complete below 3.3 * 10^24, which covers every input this crate meets;
/// larger inputs are still tested against all listed bases.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let small: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &small {
        let qb = BigInt::from(q);
        if *n == qb {
            return true;
        }
        if (n % &qb).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &small {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime factor of `n >= 2` by trial division.
pub fn smallest_prime_factor(n: &BigInt) -> BigInt {
    debug_assert!(*n >= BigInt::from(2));
    if is_prime(n) {
        return n.clone();
    }
    let two = BigInt::from(2);
    if (n % &two).is_zero() {
        return two;
    }
    let mut d = BigInt::from(3);
    loop {
        if (&d * &d) > *n {
            return n.clone();
        }
        if (n % &d).is_zero() {
            return d;
        }
        d += 2;
    }
}

/// If `|n| = p^k` for a prime `p` and `k >= 1`, returns `(p, k)`.
pub fn prime_power_decomposition(n: &BigInt) -> Option<(BigInt, u64)> {
    let a = n.abs();
    if a < BigInt::from(2) {
        return None;
    }
    let p = smallest_prime_factor(&a);
    let mut rest = a;
    let mut k = 0u64;
    while let Some(q) = exact_div(&rest, &p) {
        rest = q;
        k += 1;
    }
    if rest.is_one() {
        Some((p, k))
    } else {
        None
    }
}
