//! Exact integer and rational arithmetic shared by the rest of the crate:
//! factorization, the classical multiplicative functions, divisor enumeration
//! and `m^∞`-smooth numbers.

mod factor;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use factor::{factor_u128, factor_u64, is_prime, pow_mod, simple_sieve};

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// `n / d` as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a [`Rat`].
pub fn rat_int<T: Into<BigInt>>(n: T) -> Rat {
    Rat::from_integer(n.into())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Lossy conversion used only for display and empirical comparison.
pub fn rat_to_f64(q: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator: scale down by bit length.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Smallest rational with denominator `2^bits` that is `>= q`.
pub fn round_up(q: &Rat, bits: u64) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = q * Rat::from_integer(scale.clone());
    Rat::new(scaled.ceil().to_integer(), scale)
}

/// A nonzero integer as sign times a product of prime powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    sign: i8,
    factors: BTreeMap<u64, u32>,
}

impl FactoredInt {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    /// `sign · Π p^e`.
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (&p, &e) in &self.factors {
            acc *= BigInt::from(p).pow(e);
        }
        acc
    }

    /// Absolute value as `u64`, if it fits.
    pub fn abs_u64(&self) -> Option<u64> {
        let mut acc = 1u64;
        for (&p, &e) in &self.factors {
            acc = acc.checked_mul(p.checked_pow(e)?)?;
        }
        Some(acc)
    }

    /// Builds a positive factored integer from `(prime, exponent)` pairs.
    pub fn from_factors(factors: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (p, e) in factors {
            if e > 0 {
                *map.entry(p).or_insert(0) += e;
            }
        }
        FactoredInt {
            sign: 1,
            factors: map,
        }
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Exact factorization of a nonzero integer.
pub fn factorize(n: i128) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::domain("factorize", "zero has no factorization"));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let factors = factor_u128(n.unsigned_abs())
        .into_iter()
        .map(|(p, e)| {
            let p = u64::try_from(p).map_err(|_| Error::Overflow("factorize: prime above 2^64"))?;
            Ok((p, e))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(FactoredInt { sign, factors })
}

/// Factorization of a nonzero big integer (must fit in `i128`).
pub fn factorize_big(n: &BigInt) -> Result<FactoredInt> {
    use num_traits::ToPrimitive;
    let v = n
        .to_i128()
        .ok_or(Error::Overflow("factorize: input exceeds 128 bits"))?;
    factorize(v)
}

/// Möbius function.
pub fn mobius(n: &FactoredInt) -> i8 {
    if n.factors.values().any(|&e| e >= 2) {
        0
    } else if n.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mobius_u64(n: u64) -> i8 {
    assert!(n >= 1);
    let mut sign = 1;
    for (_, e) in factor_u64(n) {
        if e >= 2 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    factor_u64(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn radical(n: u64) -> u64 {
    assert!(n >= 1);
    factor_u64(n).into_iter().map(|(p, _)| p).product()
}

/// Number of positive divisors.
pub fn tau(n: u64) -> u64 {
    assert!(n >= 1);
    factor_u64(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// `ℓ`-adic valuation of `n >= 1`.
pub fn valuation(mut n: u64, l: u64) -> u32 {
    assert!(n >= 1 && l >= 2);
    let mut v = 0;
    while n % l == 0 {
        n /= l;
        v += 1;
    }
    v
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Distinct primes dividing `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All `n <= bound` with every prime factor dividing `m`, ascending.
pub fn smooth_divisors(m: u64, bound: u64) -> Vec<u64> {
    assert!(m >= 1 && bound >= 1);
    let mut out = vec![1u64];
    for p in prime_divisors(m) {
        let len = out.len();
        for i in 0..len {
            let mut x = out[i];
            while let Some(y) = x.checked_mul(p).filter(|&y| y <= bound) {
                out.push(y);
                x = y;
            }
        }
    }
    out.sort_unstable();
    out
}

/// `(n, m^∞) = Π_{ℓ | m} ℓ^{v_ℓ(n)}`.
pub fn gcd_supernatural(n: u64, m: u64) -> u64 {
    assert!(n >= 1 && m >= 1);
    let mut out = 1;
    let mut rest = n;
    for p in prime_divisors(m) {
        while rest % p == 0 {
            rest /= p;
            out *= p;
        }
    }
    out
}

/// `true` iff every prime factor of `n` divides `m`.
pub fn divides_supernatural(n: u64, m: u64) -> bool {
    gcd_supernatural(n, m) == n
}

/// `true` iff no `k`-th power `> 1` divides `n`.
pub fn is_k_free(n: u64, k: u32) -> bool {
    factor_u64(n).into_iter().all(|(_, e)| e < k)
}

pub fn is_squarefree(n: u64) -> bool {
    is_k_free(n, 2)
}

/// `|q|` for a rational as absolute value helper.
pub fn rat_abs(q: &Rat) -> Rat {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(f.factors().iter().map(|(a, b)| (*a, *b)).collect::<Vec<_>>(), vec![(2, 2), (3, 1)]);
        let one = factorize(1).unwrap();
        assert!(one.factors().is_empty());
        let neg = factorize(-600_851_475_143).unwrap();
        assert_eq!(neg.sign(), -1);
        assert_eq!(neg.primes().collect::<Vec<_>>(), vec![71, 839, 1471, 6857]);
        assert_eq!(neg.value(), BigInt::from(-600_851_475_143i64));
        assert!(factorize(0).is_err());
    }

    #[test]
    fn multiplicative_functions() {
        assert_eq!(mobius(&factorize(1).unwrap()), 1);
        assert_eq!(mobius(&factorize(6).unwrap()), 1);
        assert_eq!(mobius(&factorize(12).unwrap()), 0);
        assert_eq!(mobius(&factorize(30).unwrap()), -1);
        assert_eq!((euler_phi(12), radical(12), tau(12)), (4, 6, 6));
        assert_eq!((euler_phi(1), radical(1), tau(1)), (1, 1, 1));
        assert_eq!(valuation(48, 2), 4);
        assert_eq!(valuation(48, 5), 0);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(97), vec![1, 97]);
        assert_eq!(smooth_divisors(2, 10), vec![1, 2, 4, 8]);
        assert_eq!(smooth_divisors(6, 12), vec![1, 2, 3, 4, 6, 8, 9, 12]);
        assert_eq!(smooth_divisors(1, 100), vec![1]);
    }

    #[test]
    fn supernatural_gcd() {
        assert_eq!(gcd_supernatural(12, 2), 4);
        assert_eq!(gcd_supernatural(45, 6), 9);
        assert_eq!(gcd_supernatural(7, 10), 1);
    }

    #[test]
    fn rational_helpers() {
        assert_eq!(parse_rat("17/24"), Some(rat(17, 24)));
        assert_eq!(parse_rat(" -3 "), Some(rat(-3, 1)));
        assert_eq!(parse_rat("1/0"), None);
        let q = rat(1, 3);
        let up = round_up(&q, 10);
        assert!(up >= q && &up - &q < rat(1, 1024));
    }
}
