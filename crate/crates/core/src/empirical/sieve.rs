//! Segmented sieve of Eratosthenes.

use crate::arith::simple_sieve;

pub(crate) const SEGMENT: u64 = 1 << 18;

/// Primes in `[lo, hi)`, given all primes up to `√hi`.
pub(crate) fn primes_in_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u64> {
    let lo = lo.max(2);
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

/// Base primes needed to sieve up to `x` inclusive.
pub(crate) fn base_primes(x: u64) -> Vec<u32> {
    simple_sieve(((x as f64).sqrt() as u32).saturating_add(2))
}

/// Half-open segments covering `[2, x]`.
pub(crate) fn segments(x: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 2;
    while lo <= x {
        let hi = (lo + SEGMENT).min(x + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// All primes `≤ x`, in increasing order, generated one segment at a time.
pub fn prime_stream(x: u64) -> impl Iterator<Item = u64> {
    let base = base_primes(x);
    segments(x)
        .into_iter()
        .flat_map(move |(lo, hi)| primes_in_segment(lo, hi, &base))
}
