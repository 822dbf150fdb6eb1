//! Brute-force counting over degree-1 primes.
//!
//! A degree-1 prime of `K = Q[a]/(f)` is a pair `(p, root)` with `f(root) ≡ 0
//! (mod p)`; every root is a separate prime ideal. For each such prime the
//! order and index of `G mod 𝔭` are computed from the factorization of `p - 1`.

mod poly_mod;
mod sieve;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, pow_mod, valuation};
use crate::error::{Error, Result};
use crate::kummer::{Elem, FieldSpec, GroupSpec};

pub use poly_mod::roots_mod_p;
pub use sieve::prime_stream;

/// A prime condition that can be counted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    /// `m | ord`.
    Divisible(u64),
    /// `ord` is `k`-free.
    KFree(u32),
    /// `v_ℓ(ord) = v_ℓ(m)` for every prime `ℓ | k`.
    Valuation { k: u64, m: u64 },
    /// `gcd(ord, k) = 1`.
    Coprime(u64),
    /// `N𝔭 ≡ 1 (mod m)` and `n | ind` of the torsion-free part.
    KummerSplit { m: u64, n: u64 },
}

impl Event {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::domain("count_event", msg));
        match *self {
            Event::Divisible(m) if m == 0 => fail("div: m must be positive".into()),
            Event::KFree(k) if k < 2 => fail(format!("kfree: k must be at least 2, got {k}")),
            Event::Valuation { k, m } => {
                if k == 0 || m == 0 || !arith::is_squarefree(k) {
                    return fail(format!("val: k must be squarefree, got {k}"));
                }
                if !arith::divides_supernatural(m, k) {
                    return fail(format!("val: rad({m}) does not divide {k}"));
                }
                Ok(())
            }
            Event::Coprime(k) if k == 0 || !arith::is_squarefree(k) => {
                fail(format!("coprime: k must be squarefree, got {k}"))
            }
            Event::KummerSplit { m, n } if n == 0 || m % n != 0 => {
                fail(format!("kummer: need n | m, got m={m}, n={n}"))
            }
            _ => Ok(()),
        }
    }

    fn matches(&self, p: u64, ord: u64, ord_free: u64) -> bool {
        match *self {
            Event::Divisible(m) => ord % m == 0,
            Event::KFree(k) => arith::factor_u64(ord).iter().all(|&(_, e)| e < k),
            Event::Valuation { k, m } => arith::prime_divisors(k)
                .into_iter()
                .all(|l| valuation(ord, l) == valuation(m, l)),
            Event::Coprime(k) => ord.gcd(&k) == 1,
            Event::KummerSplit { m, n } => (p - 1) % m == 0 && ((p - 1) / ord_free) % n == 0,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Divisible(m) => write!(f, "div:{m}"),
            Event::KFree(k) => write!(f, "kfree:{k}"),
            Event::Valuation { k, m } => write!(f, "val:{k},{m}"),
            Event::Coprime(k) => write!(f, "coprime:{k}"),
            Event::KummerSplit { m, n } => write!(f, "kummer:{m},{n}"),
        }
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Event> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(1, 1, format!("event '{s}' must look like kind:args")))?;
        let nums: Vec<u64> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(1, kind.len() + 2, format!("bad event argument '{a}'")))
            })
            .collect::<Result<_>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::parse(1, kind.len() + 2, format!("event '{kind}' takes {n} argument(s)")))
            }
        };
        let ev = match kind {
            "div" => {
                arity(1)?;
                Event::Divisible(nums[0])
            }
            "kfree" => {
                arity(1)?;
                Event::KFree(nums[0].min(u32::MAX as u64) as u32)
            }
            "val" => {
                arity(2)?;
                Event::Valuation { k: nums[0], m: nums[1] }
            }
            "coprime" => {
                arity(1)?;
                Event::Coprime(nums[0])
            }
            "kummer" => {
                arity(2)?;
                Event::KummerSplit { m: nums[0], n: nums[1] }
            }
            other => return Err(Error::parse(1, 1, format!("unknown event kind '{other}'"))),
        };
        ev.validate()?;
        Ok(ev)
    }
}

/// Order and index of `G mod 𝔭`; `ord · ind = N𝔭 - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrdIndex {
    pub ord: u64,
    pub ind: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCount {
    pub event: Event,
    pub x: u64,
    pub matched: u64,
    pub total: u64,
    /// Rational primes `≤ x` skipped as bad.
    pub excluded: u64,
    /// `matched / total`, or `None` for an empty sample.
    pub ratio: Option<f64>,
}

impl EmpiricalCount {
    /// `count <event> <X> <matched> <total> <excluded> <ratio>`.
    pub fn record(&self) -> String {
        let ratio = self.ratio.map_or("undefined".to_string(), |r| format!("{r:.6}"));
        format!(
            "count {} {} {} {} {} {}",
            self.event, self.x, self.matched, self.total, self.excluded, ratio
        )
    }
}

/// A generator prepared for fast reduction: integer numerators and
/// denominators of its coefficients.
#[derive(Clone, Debug)]
struct Reducer {
    coeffs: Vec<(i128, i128)>,
}

impl Reducer {
    fn new(x: &Elem) -> Result<Reducer> {
        let coeffs = x
            .coeffs()
            .iter()
            .map(|c| {
                let n = c.numer().to_i128().ok_or(Error::Overflow("reduce_generator"))?;
                let d = c.denom().to_i128().ok_or(Error::Overflow("reduce_generator"))?;
                Ok((n, d))
            })
            .collect::<Result<_>>()?;
        Ok(Reducer { coeffs })
    }

    fn reduce(&self, p: u64, root: u64) -> Option<u64> {
        let pi = p as i128;
        let mut acc = 0u64;
        let mut power = 1u64;
        for &(n, d) in &self.coeffs {
            if n != 0 {
                let dm = d.rem_euclid(pi) as u64;
                if dm == 0 {
                    return None;
                }
                let nm = n.rem_euclid(pi) as u64;
                let term = nm * pow_mod(dm, p - 2, p) % p * power % p;
                acc = (acc + term) % p;
            }
            power = power * root % p;
        }
        (acc != 0).then_some(acc)
    }
}

/// Reduction of a field element at the degree-1 prime `(p, root)`.
pub fn reduce_generator(x: &Elem, p: u64, root: u64) -> Result<u64> {
    Reducer::new(x)?.reduce(p, root).ok_or_else(|| {
        Error::domain(
            "reduce_generator",
            format!("{x} does not reduce to a unit at (p, root) = ({p}, {root})"),
        )
    })
}

/// Primes that are skipped: primes dividing the discriminant of `f`, the
/// torsion order, a coefficient denominator, or the norm of a generator.
pub fn compute_bad_primes(group: &GroupSpec) -> Result<BTreeSet<u64>> {
    let field = group.field();
    let mut bad: BTreeSet<u64> = field.bad_primes().iter().copied().collect();
    bad.extend(arith::prime_divisors(group.torsion()));
    let mut elems: Vec<Elem> = group.generators().to_vec();
    if group.torsion() > 1 {
        elems.push(group.torsion_generator());
    }
    for x in &elems {
        for c in x.coeffs() {
            if !c.is_zero() {
                bad.extend(arith::factorize_big(c.denom())?.primes());
            }
        }
        let norm = field.norm(x);
        if norm.is_zero() {
            return Err(Error::domain("compute_bad_primes", format!("{x} has norm zero")));
        }
        bad.extend(arith::factorize_big(norm.numer())?.primes());
        bad.extend(arith::factorize_big(norm.denom())?.primes());
    }
    Ok(bad)
}

fn element_order(a: u64, p: u64, factors: &[(u64, u32)]) -> u64 {
    let mut ord = p - 1;
    for &(q, e) in factors {
        for _ in 0..e {
            if pow_mod(a, ord / q, p) == 1 {
                ord /= q;
            } else {
                break;
            }
        }
    }
    ord
}

fn factor_with(mut n: u64, base: &[u32]) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &q in base {
        let q = q as u64;
        if q * q > n {
            break;
        }
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Everything needed to process one prime.
struct Prepared {
    poly: Vec<i64>,
    gens: Vec<Reducer>,
    torsion: Option<Reducer>,
    bad: BTreeSet<u64>,
}

impl Prepared {
    fn new(group: &GroupSpec) -> Result<Prepared> {
        Ok(Prepared {
            poly: group.field().poly().to_vec(),
            gens: group.generators().iter().map(Reducer::new).collect::<Result<_>>()?,
            torsion: if group.torsion() > 1 {
                Some(Reducer::new(&group.torsion_generator())?)
            } else {
                None
            },
            bad: compute_bad_primes(group)?,
        })
    }

    /// `(ord of G', ord of G)` at `(p, root)`.
    fn orders(&self, p: u64, root: u64, factors: &[(u64, u32)]) -> (u64, u64) {
        let mut ord_free = 1u64;
        for g in &self.gens {
            let a = g.reduce(p, root).expect("bad primes must cover generator reductions");
            ord_free = ord_free.lcm(&element_order(a, p, factors));
        }
        let mut ord = ord_free;
        if let Some(t) = &self.torsion {
            let a = t.reduce(p, root).expect("bad primes must cover torsion reductions");
            ord = ord.lcm(&element_order(a, p, factors));
        }
        assert_eq!((p - 1) % ord, 0, "ord must divide p - 1");
        let ind = (p - 1) / ord;
        assert_eq!(ord * ind, p - 1, "ord * ind = p - 1");
        (ord, ord_free)
    }
}

/// Order and index of `G mod 𝔭` (including torsion) at `(p, root)`.
pub fn ord_index(group: &GroupSpec, p: u64, root: u64) -> Result<OrdIndex> {
    let prep = Prepared::new(group)?;
    if prep.bad.contains(&p) {
        return Err(Error::domain("ord_index", format!("{p} is a bad prime")));
    }
    let factors = arith::factor_u64(p - 1);
    let (ord, _) = prep.orders(p, root, &factors);
    Ok(OrdIndex { ord, ind: (p - 1) / ord })
}

/// Degree-1 primes of `field` up to `x` as `(p, root)` pairs, bad primes included.
pub fn degree_one_primes(field: &FieldSpec, x: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
    prime_stream(x).flat_map(move |p| roots_mod_p(field.poly(), p).into_iter().map(move |r| (p, r)))
}

pub fn count_event(group: &GroupSpec, event: &Event, x: u64) -> Result<EmpiricalCount> {
    Ok(count_events(group, std::slice::from_ref(event), x, None)?.remove(0))
}

/// Counts several events in one pass. `threads = Some(k)` runs on a dedicated
/// pool of `k` workers; `None` uses the global pool.
pub fn count_events(
    group: &GroupSpec,
    events: &[Event],
    x: u64,
    threads: Option<usize>,
) -> Result<Vec<EmpiricalCount>> {
    for e in events {
        e.validate()?;
    }
    if x < 2 {
        return Err(Error::domain("count_event", "X must be at least 2"));
    }
    let prep = Prepared::new(group)?;
    let base = sieve::base_primes(x);
    let segments = sieve::segments(x);
    let work = || {
        segments
            .par_iter()
            .map(|&(lo, hi)| {
                let mut matched = vec![0u64; events.len()];
                let mut total = 0u64;
                let mut excluded = 0u64;
                for p in sieve::primes_in_segment(lo, hi, &base) {
                    if prep.bad.contains(&p) {
                        excluded += 1;
                        continue;
                    }
                    let roots = roots_mod_p(&prep.poly, p);
                    if roots.is_empty() {
                        continue;
                    }
                    let factors = factor_with(p - 1, &base);
                    for root in roots {
                        let (ord, ord_free) = prep.orders(p, root, &factors);
                        total += 1;
                        for (slot, ev) in matched.iter_mut().zip(events) {
                            if ev.matches(p, ord, ord_free) {
                                *slot += 1;
                            }
                        }
                    }
                }
                (matched, total, excluded)
            })
            .reduce(
                || (vec![0u64; events.len()], 0, 0),
                |mut a, b| {
                    for (x, y) in a.0.iter_mut().zip(&b.0) {
                        *x += y;
                    }
                    (a.0, a.1 + b.1, a.2 + b.2)
                },
            )
    };
    let (matched, total, excluded) = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::domain("count_event", e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(events
        .iter()
        .zip(matched)
        .map(|(ev, m)| EmpiricalCount {
            event: ev.clone(),
            x,
            matched: m,
            total,
            excluded,
            ratio: (total > 0).then(|| m as f64 / total as f64),
        })
        .collect())
}
