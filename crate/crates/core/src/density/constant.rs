//! `A_{k,r} = Π_ℓ (1 - (ℓ^r - 1) / ((ℓ - 1)(ℓ^{r+1} - 1) ℓ^{k-2}))`.

use crate::arith::simple_sieve;
use crate::error::{Error, Result};

/// Product over primes `ℓ < l_cutoff`, and a bound on `|A_{k,r} - product|`.
///
/// Each factor is at least `1 - x_ℓ` with `x_ℓ ≤ 1/((ℓ-1)ℓ^{k-1}) ≤ 1/(ℓ-1)^k`,
/// so the omitted factors lie in `[1 - T, 1]` with
/// `T = Σ_{n ≥ L-1} n^{-k} ≤ 1/((k-1)(L-2)^{k-1})`.
pub fn a_constant(k: u32, r: usize, l_cutoff: u64) -> Result<(f64, f64)> {
    if k < 2 || r < 1 || l_cutoff < 100 {
        return Err(Error::domain(
            "A_constant",
            format!("need k >= 2, r >= 1, L >= 100; got k={k}, r={r}, L={l_cutoff}"),
        ));
    }
    let limit = u32::try_from(l_cutoff).map_err(|_| Error::Overflow("A_constant"))?;
    let primes = simple_sieve(limit);
    let r = r as i32;
    let mut log_sum = 0.0f64;
    for &l in &primes {
        let l = l as f64;
        let x = (l.powi(r) - 1.0) / ((l - 1.0) * (l.powi(r + 1) - 1.0) * l.powi(k as i32 - 2));
        log_sum += (-x).ln_1p();
    }
    let product = log_sum.exp();
    let tail = 1.0 / ((k - 1) as f64 * ((l_cutoff - 2) as f64).powi(k as i32 - 1));
    let rounding = primes.len() as f64 * 4.0 * f64::EPSILON;
    Ok((product, product * (tail + rounding)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cutoff_matches_direct_product() {
        let (a, _) = a_constant(2, 1, 100).unwrap();
        let direct: f64 = simple_sieve(100)
            .iter()
            .map(|&l| {
                let l = l as f64;
                1.0 - (l - 1.0) / ((l - 1.0) * (l * l - 1.0))
            })
            .product();
        assert!((a - direct).abs() < 1e-13);
        assert!(a_constant(1, 1, 1000).is_err());
        assert!(a_constant(2, 0, 1000).is_err());
    }
}
