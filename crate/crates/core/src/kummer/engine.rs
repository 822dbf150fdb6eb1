//! Kummer degrees `[K(ζ_m, G^{1/n}) : K]` for abelian base fields
//! `K = Q(ζ_c, √d_1, ...)` and groups generated by rationals times roots of
//! unity.
//!
//! Everything happens over `L = Q(ζ_W)` with `W = lcm(m, c, 2)`. The field
//! `K_{m,n}` equals `L(Γ^{1/N})` where `Γ` collects `g_i^{N/n}` and `d_j^{N/2}`,
//! so its degree over `L` is the order of the image of `<Γ>` in
//! `L^× / L^{×N}`. Inside `B = Q^× μ_W ≅ Z^k × Z/W` an element is an odd prime
//! power `ℓ^e`-th power in `L` iff it is one in `B`; for `ℓ = 2` it is a `2^e`-th
//! power iff it is the `2^{e-1}`-th power of some element of `B` that is a
//! square in `L`. Square classes are decided by conductors of quadratic fields.


use super::field::{exponent_matrix, GroupSpec};
use crate::arith::{self, euler_phi, factor_u64, lcm, valuation};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct KummerEngine {
    c: u64,
    w_k: u64,
    primes: Vec<u64>,
    /// Exponent row and root-of-unity index `j` (generator = q · ζ_{w_k}^j).
    gens: Vec<(Vec<i64>, u64)>,
    /// Exponent row of `|d|` and whether `d < 0`.
    radicands: Vec<(Vec<i64>, bool)>,
    base_degree: u128,
    z: u64,
}

impl KummerEngine {
    /// Engine for the torsion-free part of `group`.
    pub fn new(group: &GroupSpec) -> Result<KummerEngine> {
        let field = group.field();
        let ab = field.abelian().ok_or_else(|| {
            Error::domain("KummerEngine", format!("field {} has no cyclotomic description", field.label()))
        })?;
        let parts = group.rational_root_parts().ok_or_else(|| {
            Error::domain(
                "KummerEngine",
                format!("generators of {group} are not all rationals times roots of unity"),
            )
        })?;
        let mut qs: Vec<_> = parts.iter().map(|(q, _)| q.clone()).collect();
        for &d in &ab.radicands {
            qs.push(crate::arith::rat_int(d.unsigned_abs()));
        }
        let (primes, rows) = exponent_matrix(&qs)?;
        let r = parts.len();
        let gens = rows[..r]
            .iter()
            .cloned()
            .zip(parts.iter().map(|(_, j)| *j))
            .collect();
        let radicands = rows[r..]
            .iter()
            .cloned()
            .zip(ab.radicands.iter().map(|&d| d < 0))
            .collect();
        let mut engine = KummerEngine {
            c: ab.c,
            w_k: field.roots_of_unity(),
            primes,
            gens,
            radicands,
            base_degree: 1,
            z: 1,
        };
        engine.base_degree = engine.absolute_degree_raw(1, 1, false);
        if engine.base_degree != field.degree() as u128 {
            return Err(Error::domain(
                "KummerEngine",
                format!(
                    "cyclotomic description of {} has degree {}, polynomial has degree {}",
                    field.label(),
                    engine.base_degree,
                    field.degree()
                ),
            ));
        }
        engine.z = engine.choose_z(&rows[..])?;
        Ok(engine)
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Entanglement modulus used for tables built by this engine.
    pub fn z(&self) -> u64 {
        self.z
    }

    /// `[K : Q]`.
    pub fn base_degree(&self) -> u128 {
        self.base_degree
    }

    /// `[K_{m,n} : K]` computed directly.
    pub fn degree(&self, m: u64, n: u64) -> Result<u128> {
        if n == 0 || m == 0 || m % n != 0 {
            return Err(Error::domain("KummerEngine::degree", format!("need n | m, got m={m}, n={n}")));
        }
        let abs = self.absolute_degree_raw(m, n, true);
        debug_assert_eq!(abs % self.base_degree, 0);
        Ok(abs / self.base_degree)
    }

    /// `[K_{m,n} : Q]`; with `with_group = false` only the base field radicals.
    fn absolute_degree_raw(&self, m: u64, n: u64, with_group: bool) -> u128 {
        let big_m = lcm(m, self.c);
        let w = lcm(big_m, 2);
        let big_n = if self.radicands.is_empty() { n } else { lcm(n, 2) };
        let mut deg = euler_phi(big_m) as u128;
        for (ell, e) in factor_u64(big_n) {
            let q = (ell as u128).pow(e);
            let mut rows: Vec<Vec<u128>> = Vec::new();
            if with_group {
                let scale = (big_n / n) as i128;
                for (exps, j) in &self.gens {
                    let root = (*j as i128) * ((w / self.w_k) as i128);
                    rows.push(self.row(exps, root, scale, q));
                }
            }
            if !self.radicands.is_empty() {
                let scale = (big_n / 2) as i128;
                for (exps, neg) in &self.radicands {
                    let root = if *neg { (w / 2) as i128 } else { 0 };
                    rows.push(self.row(exps, root, scale, q));
                }
            }
            if rows.is_empty() {
                continue;
            }
            let s = rows.len() as u32;
            let kernel = if ell == 2 {
                self.kernel_two(&rows, e, w)
            } else {
                left_kernel_exponent(&rows, ell, e)
            };
            deg *= (ell as u128).pow(e * s - kernel);
        }
        deg
    }

    fn row(&self, exps: &[i64], root: i128, scale: i128, q: u128) -> Vec<u128> {
        let q = q as i128;
        exps.iter()
            .map(|&x| (x as i128 * scale).rem_euclid(q) as u128)
            .chain(std::iter::once((root * scale).rem_euclid(q) as u128))
            .collect()
    }

    /// `log_2` of the kernel size for `ℓ = 2`: exponent vectors whose image
    /// lies in `2^{e-1} Sq`.
    fn kernel_two(&self, rows: &[Vec<u128>], e: u32, w: u64) -> u32 {
        let q = 1u128 << e;
        let half = 1u128 << (e - 1);
        let squares: Vec<Vec<u128>> = self
            .square_classes(w)
            .into_iter()
            .map(|v| v.into_iter().map(|x| (x * half) % q).collect())
            .collect();
        let neg: Vec<Vec<u128>> = squares
            .iter()
            .map(|v| v.iter().map(|&x| (q - x) % q).collect())
            .collect();
        let mut joint = rows.to_vec();
        joint.extend(neg);
        left_kernel_exponent(&joint, 2, e) - left_kernel_exponent(&squares, 2, e)
    }

    /// Classes of `B / 2B` (exponent parity vector, root parity) that are
    /// squares in `Q(ζ_W)`, excluding the trivial class.
    fn square_classes(&self, w: u64) -> Vec<Vec<u128>> {
        let k = self.primes.len();
        let mut out = Vec::new();
        for mask in 0u64..(1 << k) {
            let b: u128 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.primes[i] as u128).product();
            let cond = if b % 4 == 1 { b } else { 4 * b };
            for t in 0..2u128 {
                let square = match (b == 1, t) {
                    (true, 0) => continue,
                    (true, _) => false,
                    (false, 0) => (w as u128) % cond == 0,
                    (false, _) => (w as u128) % cond != 0 && (2 * w as u128) % cond == 0,
                };
                if square {
                    let mut v: Vec<u128> = (0..k).map(|i| (mask >> i & 1) as u128).collect();
                    v.push(t);
                    out.push(v);
                }
            }
        }
        out
    }

    fn choose_z(&self, rows: &[Vec<i64>]) -> Result<u64> {
        let diag = diagonalize(rows);
        let mut primes: Vec<u64> = self.primes.clone();
        primes.extend(arith::prime_divisors(self.c));
        primes.push(2);
        for d in &diag {
            primes.extend(arith::prime_divisors(d.unsigned_abs() as u64));
        }
        primes.sort_unstable();
        primes.dedup();
        let mut z: u64 = 1;
        for ell in primes {
            let delta = diag
                .iter()
                .map(|d| valuation(d.unsigned_abs() as u64, ell))
                .max()
                .unwrap_or(0);
            let vc = valuation(self.c, ell);
            let tau = valuation(self.w_k, ell);
            let exp = if ell == 2 {
                vc.max(1) + delta + tau + 3
            } else {
                vc + delta + tau + 1
            };
            z = ell
                .checked_pow(exp)
                .and_then(|p| z.checked_mul(p))
                .ok_or(Error::Overflow("KummerEngine: entanglement modulus"))?;
        }
        Ok(z)
    }
}

/// Nonzero diagonal entries of a diagonal form of an integer matrix (row and
/// column operations over Z). Per prime their valuations agree with the Smith
/// invariants.
fn diagonalize(rows: &[Vec<i64>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..nr.min(nc) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return out;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nr {
                let f = a[i][t] / p;
                if f != 0 {
                    for j in t..nc {
                        a[i][j] -= f * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..nc {
                let f = a[t][j] / p;
                if f != 0 {
                    for row in a.iter_mut() {
                        row[j] -= f * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                out.push(p);
                break;
            }
        }
    }
    out
}

fn inverse_mod(a: u128, q: u128) -> u128 {
    let (mut old_r, mut r) = (a as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quo = old_r / r;
        (old_r, r) = (r, old_r - quo * r);
        (old_s, s) = (s, old_s - quo * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(q as i128) as u128
}

/// Number of `x ∈ (Z/ℓ^e)^s` with `Σ x_i · rows[i] ≡ 0 (mod ℓ^e)`.
///
/// The matrix is brought to diagonal form over `Z/ℓ^e` by pivoting on an
/// entry of least valuation; each pivot `ℓ^v · unit` contributes `ℓ^v`
/// solutions, every row without a pivot contributes `ℓ^e`.
pub fn count_left_kernel(rows: &[Vec<u128>], ell: u64, e: u32) -> u128 {
    (ell as u128).pow(left_kernel_exponent(rows, ell, e))
}

/// `log_ℓ` of [`count_left_kernel`], which stays finite for many rows.
pub fn left_kernel_exponent(rows: &[Vec<u128>], ell: u64, e: u32) -> u32 {
    let ell = ell as u128;
    let q = ell.pow(e);
    let mut a: Vec<Vec<u128>> = rows.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
    let s = a.len();
    let t = a.first().map_or(0, |r| r.len());
    let val = |x: u128| {
        let mut v = 0;
        let mut x = x;
        while x % ell == 0 && v < e {
            x /= ell;
            v += 1;
        }
        v
    };
    let mulq = |x: u128, y: u128| ((x % q) * (y % q)) % q;
    let mut count = 0u32;
    let mut pivots = 0;
    for step in 0..s.min(t) {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in step..s {
            for j in step..t {
                if a[i][j] != 0 {
                    let v = val(a[i][j]);
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(step, bi);
        for row in a.iter_mut() {
            row.swap(step, bj);
        }
        let pv = ell.pow(v);
        let unit_inv = inverse_mod(a[step][step] / pv, q);
        // clear column below the pivot (row operations)
        for i in step + 1..s {
            if a[i][step] == 0 {
                continue;
            }
            let f = mulq(a[i][step] / pv, unit_inv);
            for j in step..t {
                let sub = mulq(f, a[step][j]);
                a[i][j] = (a[i][j] + q - sub) % q;
            }
        }
        // clear row right of the pivot (column operations)
        for j in step + 1..t {
            if a[step][j] == 0 {
                continue;
            }
            let f = mulq(a[step][j] / pv, unit_inv);
            for row in a.iter_mut() {
                let sub = mulq(f, row[step]);
                row[j] = (row[j] + q - sub) % q;
            }
        }
        count += v;
        pivots += 1;
    }
    count + e * (s - pivots) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kummer::field::FieldSpec;

    fn engine(field: &str, gens: &str) -> KummerEngine {
        let f = FieldSpec::builtin(field).unwrap();
        KummerEngine::new(&GroupSpec::parse(f, gens, 1).unwrap()).unwrap()
    }

    /// Brute-force left kernel count over (Z/q)^s.
    fn brute_kernel(rows: &[Vec<u128>], q: u128) -> u128 {
        let s = rows.len();
        let t = rows[0].len();
        let mut count = 0;
        let total = q.pow(s as u32);
        for idx in 0..total {
            let mut x = Vec::with_capacity(s);
            let mut v = idx;
            for _ in 0..s {
                x.push(v % q);
                v /= q;
            }
            if (0..t).all(|j| (0..s).map(|i| x[i] * rows[i][j]).sum::<u128>() % q == 0) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn kernel_count_matches_brute_force() {
        let cases: Vec<(Vec<Vec<u128>>, u64, u32)> = vec![
            (vec![vec![2, 4], vec![6, 0]], 2, 3),
            (vec![vec![3, 0, 1], vec![0, 9, 3]], 3, 2),
            (vec![vec![0, 0], vec![0, 0]], 5, 1),
            (vec![vec![4, 2], vec![2, 1], vec![6, 3]], 2, 3),
            (vec![vec![12, 5, 7]], 2, 4),
        ];
        for (rows, ell, e) in cases {
            let q = (ell as u128).pow(e);
            assert_eq!(count_left_kernel(&rows, ell, e), brute_kernel(&rows, q), "{rows:?} mod {q}");
        }
    }

    #[test]
    fn kernel_exponent_with_many_rows() {
        // 70 copies of a unit row mod 2^6: kernel of size 2^{6*69}
        let rows = vec![vec![1u128, 0]; 70];
        assert_eq!(left_kernel_exponent(&rows, 2, 6), 6 * 69);
        let rows = vec![vec![4u128, 0]; 70];
        assert_eq!(left_kernel_exponent(&rows, 2, 6), 6 * 69 + 2);
    }

    #[test]
    fn classical_entanglements() {
        let two = engine("Q", "2");
        assert_eq!(two.degree(8, 2).unwrap(), 4);
        assert_eq!(two.degree(4, 2).unwrap(), 4);
        assert_eq!(two.degree(2, 2).unwrap(), 2);
        assert_eq!(two.degree(24, 2).unwrap(), 8);
        assert_eq!(two.degree(3, 3).unwrap(), 6);
        let five = engine("Q", "5");
        assert_eq!(five.degree(5, 1).unwrap(), 4);
        assert_eq!(five.degree(20, 2).unwrap(), 8);
        assert_eq!(five.degree(10, 2).unwrap(), 4);
        assert_eq!(engine("Q", "2,3").degree(1, 1).unwrap(), 1);
        // -4 = (1+i)^4
        assert_eq!(engine("Q", "-4").degree(4, 4).unwrap(), 2);
        // 2ζ4 = (1+ζ4)^2 over Q(ζ4)
        assert_eq!(engine("Qzeta4", "2a").degree(2, 2).unwrap(), 1);
        // √-3 ∈ Q(ζ3)
        assert_eq!(engine("Qzeta3", "-3").degree(2, 2).unwrap(), 1);
        assert_eq!(engine("Qzeta3", "3").degree(2, 2).unwrap(), 2);
        assert_eq!(engine("Qzeta3", "3").degree(4, 2).unwrap(), 2);
        // √-5 ∈ K, so √5 appears as soon as i does
        let m5 = engine("Qsqrtm5", "5");
        assert_eq!(m5.degree(2, 2).unwrap(), 2);
        assert_eq!(m5.degree(4, 2).unwrap(), 2);
        assert_eq!(engine("Qsqrtm5", "-5").degree(2, 2).unwrap(), 1);
    }

    #[test]
    fn cube_roots_and_powers() {
        // 8 = 2^3: the cube root of 8 is rational
        let eight = engine("Q", "8");
        assert_eq!(eight.degree(3, 3).unwrap(), 2);
        assert_eq!(eight.degree(9, 9).unwrap(), 6 * 3);
        let g = engine("Q", "16");
        assert_eq!(g.degree(16, 16).unwrap(), 8 * 16 / 16 * 2);
    }

    #[test]
    fn degrees_are_bounded_by_generic() {
        let e = engine("Q", "2,27,25");
        for m in 1..=60u64 {
            for n in arith::divisors(m) {
                let d = e.degree(m, n).unwrap();
                let generic = euler_phi(m) as u128 * (n as u128).pow(3);
                assert_eq!(generic % d, 0, "m={m} n={n}");
            }
        }
    }
}
