//! Integer factorization: trial division by the primes below 10^6, then
//! Pollard rho with Brent's cycle detection. Primality of cofactors is decided
//! by Miller-Rabin, deterministic below 2^64 and with 40 fixed witnesses above.

use std::sync::OnceLock;

use num_integer::Integer;

const TRIAL_LIMIT: u32 = 1_000_000;

/// Witness set that makes Miller-Rabin deterministic for every `n < 2^64`.
const WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primes below `TRIAL_LIMIT`, computed once.
pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| simple_sieve(TRIAL_LIMIT))
}

/// Plain sieve of Eratosthenes returning all primes `< limit`.
pub fn simple_sieve(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut primes = Vec::new();
    for i in 2..n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64), Ok(m64)) = (u64::try_from(a), u64::try_from(b), u64::try_from(m)) {
        return mul_mod_u64(a64, b64, m64) as u128;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round(n: u128, d: u128, s: u32, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u128(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality test. Deterministic for `n < 2^64`; for larger `n` it uses the
/// first 40 primes as witnesses.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES_U64 {
        if n == p as u128 {
            return true;
        }
        if n % p as u128 == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    if n <= u64::MAX as u128 {
        WITNESSES_U64
            .iter()
            .all(|&a| miller_rabin_round(n, d, s, a as u128))
    } else {
        small_primes()
            .iter()
            .take(40)
            .all(|&a| miller_rabin_round(n, d, s, a as u128))
    }
}

/// Modular exponentiation exposed for the empirical module.
pub fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    pow_mod_u64(base, exp, m)
}

/// Finds a nontrivial factor of an odd composite `n` with Brent's variant of
/// Pollard rho. Starting constants are tried in a fixed order so the result is
/// deterministic.
fn pollard_brent(n: u128) -> u128 {
    const BATCH: u64 = 128;
    for c in 1u128.. {
        let f = |x: u128| add_mod_u128(mul_mod_u128(x, x, n), c % n, n);
        let mut y = 2u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    let diff = x.abs_diff(y);
                    q = mul_mod_u128(q, diff, n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // Batched product overshot; retrace one step at a time.
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard_brent: exhausted constants")
}

fn push_factor(out: &mut Vec<(u128, u32)>, p: u128, e: u32) {
    if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        out.push((p, e));
    }
}

fn split_large(n: u128, out: &mut Vec<(u128, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        push_factor(out, n, 1);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factorization of a positive integer as sorted `(prime, exponent)` pairs.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    assert!(n > 0, "factor_u128: zero has no factorization");
    let mut out = Vec::new();
    for &p in small_primes() {
        let p = p as u128;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let limit = TRIAL_LIMIT as u128;
        if n < limit * limit {
            out.push((n, 1));
        } else {
            split_large(n, &mut out);
        }
    }
    out.sort_unstable();
    out
}

/// Factorization of a positive `u64` as sorted `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor_u128(n as u128)
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn matches_trial_division() {
        let n = 600_851_475_143;
        assert_eq!(factor_u64(n), trial_division(n));
        assert_eq!(factor_u64(n), vec![(71, 1), (839, 1), (1471, 1), (6857, 1)]);
        for n in 1..3000u64 {
            assert_eq!(factor_u64(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes_use_rho() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        assert_eq!(factor_u128(p * q), vec![(q, 1), (p, 1)]);
        // Product of two primes above 2^32 (needs the probabilistic path).
        let a = 4_294_967_311u128;
        let b = 4_294_967_357u128;
        let c = 18_446_744_073_709_551_557u128; // largest prime below 2^64
        assert!(is_prime(c));
        assert_eq!(factor_u128(a * b), vec![(a, 1), (b, 1)]);
        assert_eq!(factor_u128(c * 3), vec![(3, 1), (c, 1)]);
    }

    #[test]
    fn primality_edge_cases() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        // a prime above 2^64
        assert!(is_prime(18_446_744_073_709_551_629));
    }
}
