//! Roots of integer polynomials modulo a prime: `gcd(x^p - x, f)` followed by
//! randomized equal-degree splitting with a seeded generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn is_zero(a: &Poly) -> bool {
    a.len() == 1 && a[0] == 0
}

fn deg(a: &Poly) -> usize {
    a.len() - 1
}

fn inv(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

/// Remainder of `a` modulo `b` (b nonzero).
fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
    let mut r = a.clone();
    let db = deg(b);
    let lead_inv = inv(b[db], p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let c = r[dr] * lead_inv % p;
        if c != 0 {
            for i in 0..=db {
                let t = c * b[i] % p;
                r[dr - db + i] = (r[dr - db + i] + p - t) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn div(a: &Poly, b: &Poly, p: u64) -> Poly {
    let db = deg(b);
    let mut r = a.clone();
    let lead_inv = inv(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        q[dr - db] = c;
        if c != 0 {
            for i in 0..=db {
                let t = c * b[i] % p;
                r[dr - db + i] = (r[dr - db + i] + p - t) % p;
            }
        }
        r.pop();
    }
    trim(q)
}

fn mul_mod(a: &Poly, b: &Poly, f: &Poly, p: u64) -> Poly {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&trim(out), f, p)
}

fn pow_mod(base: &Poly, mut e: u64, f: &Poly, p: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !is_zero(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    // make monic
    let c = inv(a[deg(&a)], p);
    a.iter().map(|&x| x * c % p).collect()
}

fn sub_x(a: &Poly, p: u64) -> Poly {
    let mut a = a.clone();
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + p - 1) % p;
    trim(a)
}

fn split(g: &Poly, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match deg(g) {
        0 => {}
        1 => out.push((p - g[0]) % p),
        _ => loop {
            let delta = rng.gen_range(0..p);
            let h = pow_mod(&vec![delta, 1], (p - 1) / 2, g, p);
            let mut h = h;
            h[0] = (h[0] + p - 1) % p;
            let d = gcd(g, &trim(h), p);
            if deg(&d) > 0 && deg(&d) < deg(g) {
                let other = div(g, &d, p);
                split(&d, p, rng, out);
                split(&other, p, rng, out);
                return;
            }
        },
    }
}

/// Distinct roots of `f` (integer coefficients, low to high) in `F_p`, sorted.
pub fn roots_mod_p(f: &[i64], p: u64) -> Vec<u64> {
    assert!(p >= 2 && p < 1 << 32, "roots_mod_p: p out of range");
    let fp = trim(f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect());
    if is_zero(&fp) || deg(&fp) == 0 {
        return Vec::new();
    }
    let mut roots = if p == 2 {
        (0..2u64)
            .filter(|&x| fp.iter().rev().fold(0, |acc, &c| (acc * x + c) % 2) == 0)
            .collect()
    } else {
        let xp = pow_mod(&vec![0, 1], p, &fp, p);
        let g = gcd(&fp, &sub_x(&xp, p), p);
        let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x5eed_0f_0dd5);
        let mut out = Vec::new();
        split(&g, p, &mut rng, &mut out);
        out
    };
    roots.sort_unstable();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(f: &[i64], p: u64) -> Vec<u64> {
        (0..p)
            .filter(|&x| {
                f.iter()
                    .rev()
                    .fold(0i128, |acc, &c| (acc * x as i128 + c as i128).rem_euclid(p as i128))
                    == 0
            })
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(roots_mod_p(&[1, 0, 1], 5), vec![2, 3]);
        assert!(roots_mod_p(&[1, 0, 1], 7).is_empty());
        let r = roots_mod_p(&[1, 0, -1, 0, 1], 13);
        assert_eq!(r.len(), 4);
        assert_eq!(r, brute(&[1, 0, -1, 0, 1], 13));
        assert_eq!(roots_mod_p(&[0, 1], 101), vec![0]);
    }

    #[test]
    fn agrees_with_brute_force() {
        let polys: [&[i64]; 5] = [&[1, 1, 1], &[1, 0, 1], &[1, 0, -1, 0, 1], &[5, 0, 1], &[-2, 0, 0, 1]];
        for f in polys {
            for p in crate::arith::simple_sieve(400) {
                assert_eq!(roots_mod_p(f, p as u64), brute(f, p as u64), "f={f:?} p={p}");
            }
        }
    }
}
