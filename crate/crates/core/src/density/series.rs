//! Truncated series with exact rational tail bounds.
//!
//! `ρ_m = Σ_{n | m^∞} Σ_{d | m} μ(d) c(mn, dn) / [F_{mn,dn}:K]`. Each inner sum
//! lies in `[0, 1/[K_{mn,n}:K]]`, and `Σ_{n | m^∞} 1/[K_{mn,n}:K]` is computed
//! exactly from the table, so the tail past `mn > B` is known exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::closed::{coprime_closed, rho_closed};
use super::{check_k_squarefree, check_valuation_args, torsion_reduce, DensityValue, FrobeniusSpec};
use super::{apply_frobenius_mode, DEFAULT_B_FACTOR};
use crate::arith::{
    divisors, euler_phi, is_k_free, mobius_u64, prime_divisors, rat_int, round_up, simple_sieve,
    smooth_divisors, valuation, Rat,
};
use crate::error::{Error, Result};
use crate::kummer::DegreeTable;

fn big(n: u128) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `Σ_{n | m^∞} 1/[K_{mn,n}:K]`, evaluated exactly.
///
/// `[K_{mn,n}:K] = φ(m) n^{r+1} [K_{g,h}:K] / (φ(g) h^r)` with `g = (mn, z)`,
/// `h = (n, z)`, and `(g, h)` only depends on `min(v_ℓ(n), v_ℓ(z))`, so the sum
/// factors into geometric series over capped exponent states.
pub fn tail_majorant(m: u64, table: &DegreeTable) -> Rat {
    let z = table.z();
    let r = table.rank() as u32;
    let primes = prime_divisors(m);
    // Per prime: list of (cap state s, weight of that state).
    let local: Vec<Vec<(u32, Rat)>> = primes
        .iter()
        .map(|&l| {
            let zl = valuation(z, l);
            let q = Rat::new(BigInt::one(), BigInt::from(l).pow(r + 1));
            let geo = Rat::one() / (Rat::one() - &q);
            (0..=zl)
                .map(|s| {
                    let w = num_traits::pow(q.clone(), s as usize);
                    if s < zl {
                        (s, w)
                    } else {
                        (s, w * &geo)
                    }
                })
                .collect()
        })
        .collect();
    let mut total = Rat::zero();
    let mut idx = vec![0usize; primes.len()];
    loop {
        let mut g = 1u64;
        let mut h = 1u64;
        let mut w = Rat::one();
        for (i, &l) in primes.iter().enumerate() {
            let (s, ref ws) = local[i][idx[i]];
            let zl = valuation(z, l);
            g *= l.pow((valuation(m, l) + s).min(zl));
            h *= l.pow(s.min(zl));
            w *= ws;
        }
        let f = big(euler_phi(g) as u128 * (h as u128).pow(r)) / big(table.entry(g, h).expect("complete table"));
        total += f * w;
        // Odometer over the state product.
        let mut i = 0;
        loop {
            if i == primes.len() {
                return total / rat_int(euler_phi(m));
            }
            idx[i] += 1;
            if idx[i] < local[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `Σ_{d | m} μ(d) c(mn, dn) / [F_{mn,dn}:K]` for one `n`.
fn term(m: u64, n: u64, table: &DegreeTable, frob: &FrobeniusSpec) -> Result<Rat> {
    let mn = m.checked_mul(n).ok_or(Error::Overflow("rho_series"))?;
    let mut acc = Rat::zero();
    for d in divisors(m) {
        let mu = mobius_u64(d);
        if mu == 0 {
            continue;
        }
        let x = match frob {
            FrobeniusSpec::Oracle(o) => {
                let c = (o.coeff)(mn, d * n);
                if c > o.cap {
                    return Err(Error::domain(
                        "rho_series",
                        format!("oracle coefficient c({mn},{}) = {c} exceeds cap {}", d * n, o.cap),
                    ));
                }
                let deg = (o.degree)(mn, d * n);
                if deg == 0 {
                    return Err(Error::domain("rho_series", "oracle degree must be positive"));
                }
                Rat::new(BigInt::from(c), BigInt::from(deg))
            }
            FrobeniusSpec::SplitCompletely { table_over_f, .. } => {
                Rat::new(BigInt::one(), BigInt::from(table_over_f.lift(mn, d * n)?))
            }
            _ => Rat::new(BigInt::one(), BigInt::from(table.lift(mn, d * n)?)),
        };
        if mu > 0 {
            acc += x;
        } else {
            acc -= x;
        }
    }
    Ok(acc)
}

/// Series for a torsion-free group, before any Frobenius scaling.
fn rho_series_raw(m: u64, table: &DegreeTable, frob: &FrobeniusSpec, bound: u64) -> Result<(Rat, Rat)> {
    let ns = smooth_divisors(m, (bound / m).max(1));
    let ns: Vec<u64> = if bound < m { Vec::new() } else { ns };
    let terms: Vec<Rat> = ns.par_iter().map(|&n| term(m, n, table, frob)).collect::<Result<_>>()?;
    let majorant_table = match frob {
        FrobeniusSpec::SplitCompletely { table_over_f, .. } => table_over_f.as_ref(),
        _ => table,
    };
    let mut partial = Rat::zero();
    let mut covered = Rat::zero();
    for (&n, t) in ns.iter().zip(&terms) {
        let cap = Rat::new(BigInt::one(), BigInt::from(majorant_table.lift(m * n, n)?));
        if t.is_negative_or_above(&cap) {
            return Err(Error::Invariant {
                g: m * n,
                h: n,
                msg: format!("series term {t} outside [0, 1/[K_mn,n:K]] = [0, {cap}]"),
            });
        }
        partial += t;
        covered += cap;
    }
    let tail = tail_majorant(m, majorant_table) - covered;
    debug_assert!(tail >= Rat::zero());
    let hi = (&partial + tail).min(Rat::one());
    Ok((partial, hi))
}

trait Bounds {
    fn is_negative_or_above(&self, cap: &Rat) -> bool;
}

impl Bounds for Rat {
    fn is_negative_or_above(&self, cap: &Rat) -> bool {
        *self < Rat::zero() || self > cap
    }
}

/// `ρ_{C,m}` as an interval `[S, S + T]`: `S` sums the terms with `mn ≤ bound`
/// (default `m · 2^14`), `T` is the exact tail of the majorant.
pub fn rho_series(m: u64, table: &DegreeTable, frob: &FrobeniusSpec, bound: Option<u64>) -> Result<DensityValue> {
    if m == 0 {
        return Err(Error::domain("rho_series", "m must be positive"));
    }
    let torsion = match frob {
        FrobeniusSpec::SplitCompletely { table_over_f, .. } => table_over_f.torsion(),
        _ => table.torsion(),
    };
    let m = torsion_reduce(m, torsion);
    let bound = bound.unwrap_or_else(|| m.saturating_mul(DEFAULT_B_FACTOR));
    if bound < m {
        return Err(Error::domain("rho_series", format!("B = {bound} must be at least m = {m}")));
    }
    let (lo, hi) = rho_series_raw(m, table, frob, bound)?;
    let base = DensityValue::interval(lo, hi);
    match frob {
        FrobeniusSpec::Oracle(_) => Ok(base),
        _ => apply_frobenius_mode(base, frob),
    }
}

/// `β_k` as an interval: `Σ_{m ≤ M} μ(m) ρ_{m^k}` with inner series bounds,
/// plus an exact bound on `Σ_{m > M} ρ_{m^k}`.
pub fn beta_series(k: u32, table: &DegreeTable, outer: u64, bound_factor: Option<u64>) -> Result<DensityValue> {
    if k < 2 {
        return Err(Error::domain("beta_series", format!("k must be at least 2, got {k}")));
    }
    if outer == 0 {
        return Err(Error::domain("beta_series", "M must be positive"));
    }
    if !is_k_free(table.torsion(), k) {
        return Ok(DensityValue::interval(Rat::zero(), Rat::zero()));
    }
    let factor = bound_factor.unwrap_or(DEFAULT_B_FACTOR);
    let frob = FrobeniusSpec::Trivial;
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    for m in 1..=outer {
        let mu = mobius_u64(m);
        if mu == 0 {
            continue;
        }
        let mk = m.checked_pow(k).ok_or(Error::Overflow("beta_series"))?;
        let (a, b) = rho_series_raw(mk, table, &frob, mk.saturating_mul(factor))?;
        if mu > 0 {
            lo += a;
            hi += b;
        } else {
            lo -= b;
            hi -= a;
        }
    }
    let tail = outer_tail(k, table, outer);
    lo = (lo - &tail).max(Rat::zero());
    hi = (hi + tail).min(Rat::one());
    Ok(DensityValue::interval(lo, hi))
}

/// Upper bound for `Σ_{m > M squarefree} ρ_{m^k}`.
///
/// `ρ_{m^k} ≤ C · h(m)` with `C` the table's maximal defect and
/// `h(ℓ) = 1/(ℓ^{k-1}(ℓ-1)(1 - ℓ^{-(r+1)}))` multiplicative. The full sum
/// `Π_ℓ (1 + h(ℓ))` is bounded by an exact product up to `P0` times
/// `1/(1 - x)`, where `x = 3/((k-1)(P0-1)^{k-1}) ≥ Σ_{ℓ ≥ P0} h(ℓ)`.
fn outer_tail(k: u32, table: &DegreeTable, outer: u64) -> Rat {
    const P0: u32 = 1 << 16;
    const BITS: u64 = 96;
    let r = table.rank() as u32;
    let h = |l: u64| -> Rat {
        let lr = BigInt::from(l).pow(r + 1);
        let den = BigInt::from(l).pow(k - 1) * BigInt::from(l - 1) * (&lr - 1);
        Rat::new(lr, den)
    };
    let mut full = Rat::one();
    for &p in &simple_sieve(P0) {
        full = round_up(&(full * (Rat::one() + h(p as u64))), BITS);
    }
    let x = Rat::new(BigInt::from(3), BigInt::from(k - 1) * BigInt::from(P0 - 1).pow(k - 1));
    full = round_up(&(full / (Rat::one() - x)), BITS);
    let mut head = Rat::zero();
    for m in 1..=outer {
        if mobius_u64(m) != 0 {
            head += prime_divisors(m).into_iter().map(h).product::<Rat>();
        }
    }
    big(table.max_defect()) * (full - head).max(Rat::zero())
}

/// `γ_{C,k,m} = Σ_{f | k} μ(f) ρ_{C,mf}`: exact in trivial mode, an interval otherwise.
pub fn gamma_via_rho(k: u64, m: u64, table: &DegreeTable, frob: &FrobeniusSpec) -> Result<DensityValue> {
    check_valuation_args("gamma_via_rho", k, m)?;
    mobius_combination(k, m, table, frob)
}

/// Density of `𝔭` with `gcd(ord_𝔭(G), k) = 1`. In trivial mode the closed form
/// is checked against `Σ_{f | k} μ(f) ρ_f`.
pub fn coprime_density(k: u64, table: &DegreeTable, frob: &FrobeniusSpec) -> Result<DensityValue> {
    check_k_squarefree("coprime_density", k)?;
    let via_rho = mobius_combination(k, 1, table, frob)?;
    if let FrobeniusSpec::Trivial = frob {
        let closed = coprime_closed(k, table)?;
        if closed.exact != via_rho.exact {
            return Err(Error::Invariant {
                g: k,
                h: 1,
                msg: "closed coprime density disagrees with the Möbius sum of ρ".into(),
            });
        }
        return Ok(closed);
    }
    Ok(via_rho)
}

fn mobius_combination(k: u64, m: u64, table: &DegreeTable, frob: &FrobeniusSpec) -> Result<DensityValue> {
    let fs: Vec<(i8, u64)> = divisors(k).into_iter().map(|f| (mobius_u64(f), f)).filter(|x| x.0 != 0).collect();
    if let FrobeniusSpec::Trivial = frob {
        let mut acc = Rat::zero();
        for (mu, f) in fs {
            let rho = rho_closed(m * f, table)?.exact.expect("closed value is exact");
            acc += rho * rat_int(mu as i64);
        }
        return Ok(DensityValue::exact(acc));
    }
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    for (mu, f) in fs {
        let v = rho_series(m * f, table, frob, None)?;
        let (a, b) = v.interval.expect("series value is an interval");
        if mu > 0 {
            lo += a;
            hi += b;
        } else {
            lo -= b;
            hi -= a;
        }
    }
    Ok(DensityValue::interval(lo.max(Rat::zero()), hi.min(Rat::one())))
}
