//! Closed rational formulas: finite sums over `g | z`, `h | g` weighted by
//! `p(g, h) / [K_{g,h}:K]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_k_squarefree, check_valuation_args, constant::a_constant, torsion_reduce};
use super::{DensityValue, Scaled};
use crate::arith::{
    divides_supernatural, divisors, euler_phi, gcd, is_k_free, mobius_u64, prime_divisors, radical, rat_int,
    rat_to_f64, valuation, Rat,
};
use crate::error::{Error, Result};
use crate::kummer::DegreeTable;

fn ri(n: u64) -> Rat {
    rat_int(n)
}

fn frac(n: u64, d: u64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `ℓ^e` as a rational.
fn lpow(l: u64, e: usize) -> Rat {
    Rat::from_integer(num_traits::pow(BigInt::from(l), e))
}

fn v(n: u64, l: u64) -> i64 {
    valuation(n, l) as i64
}

/// `Σ_{g,h} p(g,h) / [K_{g,h}:K]` over `g | z` accepted by `keep_g`, `h | g`.
fn lattice_sum(
    table: &DegreeTable,
    keep_g: impl Fn(u64) -> bool,
    p: impl Fn(u64, u64) -> Option<Rat>,
) -> Rat {
    let mut sum = Rat::zero();
    for g in divisors(table.z()).into_iter().filter(|&g| keep_g(g)) {
        for h in divisors(g) {
            if let Some(pv) = p(g, h) {
                let d = table.entry(g, h).expect("validated table is complete");
                sum += pv / Rat::from_integer(BigInt::from(d));
            }
        }
    }
    sum
}

fn rho_torsion_free(m: u64, table: &DegreeTable) -> Rat {
    let z = table.z();
    let r = table.rank();
    let mz = gcd(m, z);
    let mut pre = frac(1, euler_phi(m));
    for l in prime_divisors(m) {
        if z % l != 0 {
            pre *= ri(l) * (lpow(l, r) - Rat::one()) / (lpow(l, r + 1) - Rat::one());
        }
    }
    let p = |g: u64, h: u64| -> Option<Rat> {
        let mut out = frac(euler_phi(g), h);
        for l in prime_divisors(g) {
            let (gl, hl, zl, ml) = (v(g, l), v(h, l), v(z, l), v(m, l));
            if hl == 0 {
                if gl > ml.min(zl) {
                    return None;
                }
                continue;
            }
            let d = gl - hl;
            if zl > gl {
                if d != ml && d != ml - 1 {
                    return None;
                }
                if d == ml - 1 {
                    out *= -ri(l);
                }
            } else {
                if d > ml {
                    return None;
                }
                if 1 <= d && d < ml {
                    out *= -(ri(l) - Rat::one());
                }
            }
            if zl == hl {
                let lr = lpow(l, r + 1);
                out *= -(&lr * (ri(l) - Rat::one())) / (lr - Rat::one());
            }
        }
        Some(out)
    };
    pre * lattice_sum(table, |g| g % mz == 0 && divides_supernatural(g, mz), p)
}

/// `ρ_m`: density of `𝔭` with `m | ord_𝔭(G)`. Torsion is handled by
/// reducing `m` against the table's torsion order.
pub fn rho_closed(m: u64, table: &DegreeTable) -> Result<DensityValue> {
    if m == 0 {
        return Err(Error::domain("rho_closed", "m must be positive"));
    }
    let m = torsion_reduce(m, table.torsion());
    Ok(DensityValue::exact(rho_torsion_free(m, table)))
}

/// `x_ℓ = (ℓ^r - 1) / ((ℓ - 1)(ℓ^{r+1} - 1) ℓ^{k-2})`, the local factor of `A_{k,r}`.
pub(crate) fn a_local(l: u64, k: u32, r: usize) -> Rat {
    (lpow(l, r) - Rat::one()) / ((ri(l) - Rat::one()) * (lpow(l, r + 1) - Rat::one()) * lpow(l, k as usize - 2))
}

/// The rational multiplier `q` with `β_k = q · A_{k,r}` for a torsion-free group.
pub(crate) fn beta_multiplier(k: u32, table: &DegreeTable) -> Rat {
    let z = table.z();
    let r = table.rank();
    let ku = k as i64;
    let p = |g: u64, h: u64| -> Option<Rat> {
        let rad_k = Rat::from_integer(num_traits::pow(BigInt::from(radical(g)), k as usize));
        let mut out = frac(g, h) / rad_k;
        for l in prime_divisors(g) {
            let (gl, hl, zl) = (v(g, l), v(h, l), v(z, l));
            if hl == 0 {
                if gl != ku.min(zl) {
                    return None;
                }
                out = -out;
                continue;
            }
            let d = gl - hl;
            if d > ku || (zl > gl && d < ku - 1) {
                return None;
            }
            if d == ku {
                out = -out;
            }
            if zl > gl && d == ku - 1 {
                out *= ri(l);
            }
            if zl == gl && 0 < d && d < ku {
                out *= ri(l) - Rat::one();
            }
            if zl == hl {
                let lr = lpow(l, r + 1);
                out *= &lr * (ri(l) - Rat::one()) / (lr - Rat::one());
            }
        }
        Some(out)
    };
    let keep = |g: u64| prime_divisors(g).into_iter().all(|l| v(g, l) >= (k as i64).min(v(z, l)));
    let sum = lattice_sum(table, keep, p);
    let correction: Rat = prime_divisors(z).into_iter().map(|l| Rat::one() - a_local(l, k, r)).product();
    sum / correction
}

/// `β_k`: density of `𝔭` with `ord_𝔭(G)` k-free, as `q · A_{k,r}` with
/// `A_{k,r}` approximated over primes below `l_cutoff`.
pub fn beta_closed(k: u32, table: &DegreeTable, l_cutoff: u64) -> Result<DensityValue> {
    if k < 2 {
        return Err(Error::domain("beta_closed", format!("k must be at least 2, got {k}")));
    }
    if l_cutoff < 1000 {
        return Err(Error::domain("beta_closed", format!("L must be at least 1000, got {l_cutoff}")));
    }
    let r = table.rank();
    let (a, a_err) = a_constant(k, r, l_cutoff)?;
    let q = if is_k_free(table.torsion(), k) { beta_multiplier(k, table) } else { Rat::zero() };
    let qf = rat_to_f64(&q);
    let scaled = Scaled { approx: qf * a, approx_error: qf.abs() * a_err, q: q.clone(), k, r };
    Ok(DensityValue {
        exact: q.is_zero().then(Rat::zero),
        scaled: Some(scaled),
        ..Default::default()
    })
}

fn gamma_torsion_free(k: u64, m: u64, table: &DegreeTable) -> Rat {
    let z = table.z();
    let r = table.rank();
    let one = Rat::one;
    let mut pre = frac(1, euler_phi(m));
    for l in prime_divisors(k) {
        if z % l == 0 {
            continue;
        }
        let lr1 = lpow(l, r + 1) - one();
        let lr = lpow(l, r) - one();
        if m % l == 0 {
            pre *= (ri(l) - one()) * lr / lr1;
        } else {
            pre *= one() - ri(l) * lr / (lr1 * (ri(l) - one()));
        }
    }
    let p = |g: u64, h: u64| -> Option<Rat> {
        let mut out = frac(euler_phi(g), h);
        for l in prime_divisors(g) {
            let (gl, hl, zl, ml) = (v(g, l), v(h, l), v(z, l), v(m, l));
            let d = gl - hl;
            let lf = ri(l);
            if ml == 0 {
                if d > 1 {
                    return None;
                }
                if d == 1 {
                    out *= -one() / (&lf - one());
                }
                if hl > 0 && zl == hl {
                    let lr = lpow(l, r + 1);
                    out *= &lr / (lr.clone() - one());
                }
                if hl > 0 && hl == gl && gl < zl {
                    out *= &lf / (&lf - one());
                }
                continue;
            }
            if hl == 0 {
                if ![zl, ml, ml + 1].contains(&gl) || (gl == zl && zl > ml + 1) {
                    return None;
                }
                if gl == ml + 1 {
                    out *= -one() / &lf;
                }
                if gl == zl && zl <= ml {
                    out *= (&lf - one()) / &lf;
                }
                continue;
            }
            if d > ml + 1 || (zl > gl && d < ml - 1) {
                return None;
            }
            if zl == hl {
                let lr = lpow(l, r);
                out *= -(lr * (&lf - one()) * (&lf - one())) / (lpow(l, r + 1) - one());
            }
            if d == ml + 1 {
                out *= -one() / &lf;
            }
            if zl > gl && d == ml {
                out *= ri(2);
            }
            if zl == gl && 0 < d && d < ml {
                out *= -((&lf - one()) * (&lf - one())) / &lf;
            }
            if zl == gl && d == ml {
                out *= (ri(2) * &lf - one()) / &lf;
            }
            if zl > gl && d == ml - 1 {
                out *= -lf;
            }
        }
        Some(out)
    };
    let mz = gcd(m, z);
    pre * lattice_sum(table, |g| g % mz == 0 && divides_supernatural(g, k), p)
}

/// `γ_{k,m}`: density of `𝔭` with `v_ℓ(ord_𝔭(G)) = v_ℓ(m)` for every `ℓ | k`.
/// For groups with torsion this is evaluated as `Σ_{f | k} μ(f) ρ_{mf}`.
pub fn gamma_closed(k: u64, m: u64, table: &DegreeTable) -> Result<DensityValue> {
    check_valuation_args("gamma_closed", k, m)?;
    let value = if table.torsion() == 1 {
        gamma_torsion_free(k, m, table)
    } else {
        let mut acc = Rat::zero();
        for f in divisors(k) {
            let rho = rho_torsion_free(torsion_reduce(m * f, table.torsion()), table);
            acc += rho * rat_int(mobius_u64(f) as i64);
        }
        acc
    };
    Ok(DensityValue::exact(value))
}

fn coprime_torsion_free(k: u64, table: &DegreeTable) -> Rat {
    let z = table.z();
    let r = table.rank();
    let mut pre = Rat::one();
    for l in prime_divisors(k) {
        if z % l != 0 {
            let lr1 = lpow(l, r + 1) - Rat::one();
            pre *= Rat::one() - ri(l) * (lpow(l, r) - Rat::one()) / (lr1 * (ri(l) - Rat::one()));
        }
    }
    let p = |g: u64, h: u64| -> Option<Rat> {
        let mu = mobius_u64(g / h);
        if mu == 0 {
            return None;
        }
        let mut out = frac(euler_phi(g), euler_phi(g / h) * h) * rat_int(mu as i64);
        for l in prime_divisors(h) {
            let (gl, hl, zl) = (v(g, l), v(h, l), v(z, l));
            if zl == hl {
                let lr = lpow(l, r + 1);
                out *= &lr / (lr.clone() - Rat::one());
            }
            if hl == gl && gl < zl {
                out *= frac(l, l - 1);
            }
        }
        Some(out)
    };
    pre * lattice_sum(table, |g| divides_supernatural(g, k), p)
}

/// Density of `𝔭` with `gcd(ord_𝔭(G), k) = 1`, `k` squarefree.
pub fn coprime_closed(k: u64, table: &DegreeTable) -> Result<DensityValue> {
    check_k_squarefree("coprime_density", k)?;
    let value = if table.torsion() == 1 {
        coprime_torsion_free(k, table)
    } else {
        gamma_closed(k, 1, table)?.exact.expect("exact")
    };
    Ok(DensityValue::exact(value))
}
