//! Number fields given by a monic integer polynomial, their elements as
//! polynomials in the generator `a`, and finitely generated subgroups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, rat_int, Rat};
use crate::error::{Error, Result};

/// Cyclotomic description `K = Q(ζ_c, √d_1, ...)` of an abelian base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelian {
    pub c: u64,
    pub radicands: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    label: String,
    /// Monic, coefficients from the constant term upwards.
    poly: Vec<i64>,
    bad_primes: Vec<u64>,
    abelian: Option<Abelian>,
    /// Number of roots of unity in K and a generator of them as an element.
    roots_of_unity: u64,
    zeta: Vec<Rat>,
}

pub const BUILTIN_FIELDS: [&str; 5] = ["Q", "Qzeta3", "Qzeta4", "Qzeta12", "Qsqrtm5"];

impl FieldSpec {
    /// One of the built-in fields `Q`, `Qzeta3`, `Qzeta4`, `Qzeta12`, `Qsqrtm5`.
    pub fn builtin(label: &str) -> Result<FieldSpec> {
        let (poly, c, radicands, w, zeta): (Vec<i64>, u64, Vec<i64>, u64, Vec<i64>) = match label {
            "Q" => (vec![0, 1], 1, vec![], 2, vec![-1]),
            // ζ6 = 1 + ζ3
            "Qzeta3" => (vec![1, 1, 1], 3, vec![], 6, vec![1, 1]),
            "Qzeta4" => (vec![1, 0, 1], 4, vec![], 4, vec![0, 1]),
            "Qzeta12" => (vec![1, 0, -1, 0, 1], 12, vec![], 12, vec![0, 1]),
            "Qsqrtm5" => (vec![5, 0, 1], 1, vec![-5], 2, vec![-1, 0]),
            _ => {
                return Err(Error::domain(
                    "FieldSpec::builtin",
                    format!("unknown field label '{label}' (expected one of {})", BUILTIN_FIELDS.join(", ")),
                ))
            }
        };
        let deg = poly.len() - 1;
        let mut z: Vec<Rat> = zeta.into_iter().map(rat_int).collect();
        z.resize(deg, Rat::zero());
        let mut f = FieldSpec {
            label: label.to_string(),
            poly,
            bad_primes: Vec::new(),
            abelian: Some(Abelian { c, radicands }),
            roots_of_unity: w,
            zeta: z,
        };
        f.bad_primes = f.discriminant_primes()?;
        Ok(f)
    }

    /// A field from an arbitrary monic irreducible polynomial. Only `±1` are
    /// known as roots of unity, and no Kummer engine is available.
    pub fn from_poly(label: &str, poly: Vec<i64>) -> Result<FieldSpec> {
        if poly.len() < 2 {
            return Err(Error::domain("FieldSpec::from_poly", "polynomial must have degree >= 1"));
        }
        if *poly.last().unwrap() != 1 {
            return Err(Error::domain("FieldSpec::from_poly", "polynomial must be monic"));
        }
        if poly.len() - 1 <= 4 && !is_irreducible_small(&poly) {
            return Err(Error::domain("FieldSpec::from_poly", "polynomial is reducible over Q"));
        }
        let deg = poly.len() - 1;
        let mut zeta = vec![Rat::zero(); deg];
        zeta[0] = rat_int(-1);
        let mut f = FieldSpec {
            label: label.to_string(),
            poly,
            bad_primes: Vec::new(),
            abelian: None,
            roots_of_unity: 2,
            zeta,
        };
        f.bad_primes = f.discriminant_primes()?;
        Ok(f)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &[i64] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Primes dividing the discriminant of the defining polynomial.
    pub fn bad_primes(&self) -> &[u64] {
        &self.bad_primes
    }

    pub fn abelian(&self) -> Option<&Abelian> {
        self.abelian.as_ref()
    }

    pub fn roots_of_unity(&self) -> u64 {
        self.roots_of_unity
    }

    /// A generator of the roots of unity of K.
    pub fn zeta(&self) -> Elem {
        Elem { coeffs: self.zeta.clone() }
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    fn poly_rat(&self) -> Vec<Rat> {
        self.poly.iter().map(|&c| rat_int(c)).collect()
    }

    /// Discriminant of the defining polynomial.
    pub fn discriminant(&self) -> BigInt {
        let f = self.poly_rat();
        let n = self.degree();
        if n == 1 {
            return BigInt::one();
        }
        let df: Vec<Rat> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        let res = resultant(&f, &df);
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        (res * rat_int(sign)).to_integer()
    }

    fn discriminant_primes(&self) -> Result<Vec<u64>> {
        let d = self.discriminant();
        if d.is_zero() {
            return Err(Error::domain("FieldSpec", "polynomial is not separable"));
        }
        Ok(arith::factorize_big(&d)?.primes().collect())
    }

    /// Norm of an element, computed as the resultant `Res(f, g)`.
    pub fn norm(&self, x: &Elem) -> Rat {
        let f = self.poly_rat();
        let mut g = x.coeffs.clone();
        while g.len() > 1 && g.last().is_some_and(|c| c.is_zero()) {
            g.pop();
        }
        if g.len() == 1 {
            // constant: norm is c^deg
            return num_traits::pow(g[0].clone(), self.degree());
        }
        resultant(&f, &g)
    }

    pub fn one(&self) -> Elem {
        let mut c = vec![Rat::zero(); self.degree()];
        c[0] = Rat::one();
        Elem { coeffs: c }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let n = self.degree();
        let mut prod = vec![Rat::zero(); 2 * n - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Elem {
            coeffs: self.reduce(prod),
        }
    }

    pub fn pow(&self, x: &Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduces a coefficient vector modulo the (monic) defining polynomial.
    fn reduce(&self, mut c: Vec<Rat>) -> Vec<Rat> {
        let n = self.degree();
        while c.len() > n {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - n;
            for (i, &fi) in self.poly[..n].iter().enumerate() {
                c[shift + i] -= &top * rat_int(fi);
            }
        }
        c.resize(n, Rat::zero());
        c
    }

    /// Parses a polynomial in `a` such as `2a`, `-1/2a^2 + 3`, `16*a`.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let raw = parse_poly(text).map_err(|(col, msg)| Error::parse(1, col, msg))?;
        Ok(Elem {
            coeffs: self.reduce(raw),
        })
    }

    /// Writes `x = q · ζ^j` with `q > 0` rational and `ζ` the field's root-of-unity
    /// generator, if possible.
    pub fn rational_times_root(&self, x: &Elem) -> Option<(Rat, u64)> {
        let w = self.roots_of_unity;
        let zeta = self.zeta();
        let mut power = self.one();
        let mut found = None;
        for j in 0..w {
            if let Some(q) = rational_ratio(&x.coeffs, &power.coeffs) {
                if q.is_positive() {
                    found = Some((q, j));
                    break;
                }
            }
            power = self.mul(&power, &zeta);
        }
        found
    }

    /// Multiplicative order of `x` if it is a root of unity.
    pub fn root_order(&self, x: &Elem) -> Option<u64> {
        let (q, j) = self.rational_times_root(x)?;
        if !q.is_one() {
            return None;
        }
        Some(self.roots_of_unity / self.roots_of_unity.gcd(&j))
    }
}

/// `q` with `x = q · y`, if it exists.
fn rational_ratio(x: &[Rat], y: &[Rat]) -> Option<Rat> {
    let mut q: Option<Rat> = None;
    for (a, b) in x.iter().zip(y) {
        if b.is_zero() {
            if !a.is_zero() {
                return None;
            }
            continue;
        }
        let r = a / b;
        match &q {
            None => q = Some(r),
            Some(prev) if *prev != r => return None,
            _ => {}
        }
    }
    q.filter(|v| !v.is_zero())
}

/// Resultant of two polynomials (coefficients low to high) as the Sylvester
/// determinant, by fraction-exact Gaussian elimination.
pub(crate) fn resultant(f: &[Rat], g: &[Rat]) -> Rat {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut mat = vec![vec![Rat::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    determinant(mat)
}

fn determinant(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Irreducibility over Q of a monic integer polynomial of degree at most 4.
fn is_irreducible_small(poly: &[i64]) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    let eval = |x: i128| poly.iter().rev().fold(0i128, |acc, &c| acc * x + c as i128);
    let c0 = poly[0];
    if c0 == 0 {
        return false;
    }
    for d in arith::divisors(c0.unsigned_abs()) {
        let d = d as i128;
        if eval(d) == 0 || eval(-d) == 0 {
            return false;
        }
    }
    if deg < 4 {
        return true;
    }
    // (x^2 + a x + b)(x^2 + c x + d)
    let (f0, f1, f2, f3) = (poly[0] as i128, poly[1] as i128, poly[2] as i128, poly[3] as i128);
    for b in arith::divisors(c0.unsigned_abs()) {
        for b in [b as i128, -(b as i128)] {
            let d = f0 / b;
            let try_a = |a: i128| {
                let c = f3 - a;
                b + d + a * c == f2 && a * d + b * c == f1
            };
            if d != b {
                let num = f1 - b * f3;
                let den = d - b;
                if num % den == 0 && try_a(num / den) {
                    return false;
                }
            } else {
                // a(f3 - a) = f2 - 2b
                let rhs = f2 - 2 * b;
                let disc = f3 * f3 - 4 * rhs;
                if disc >= 0 {
                    let s = (disc as f64).sqrt().round() as i128;
                    for s in [s - 1, s, s + 1] {
                        if s >= 0 && s * s == disc && (f3 + s) % 2 == 0 && try_a((f3 + s) / 2) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Parses `Σ c_i a^{e_i}`; returns coefficients low to high, or (column, message).
fn parse_poly(text: &str) -> std::result::Result<Vec<Rat>, (usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut coeffs: Vec<Rat> = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            None
        } else {
            chars[start..*pos].iter().collect::<String>().parse().ok()
        }
    };
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err((1, "empty element".into()));
    }
    let mut first = true;
    while pos < chars.len() {
        skip_ws(&mut pos);
        let mut sign = 1;
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -1;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err((pos + 1, format!("expected '+' or '-', found '{}'", chars[pos])));
        }
        first = false;
        let term_start = pos;
        let mut coef = Rat::one();
        let mut has_coef = false;
        if let Some(n) = read_int(&mut pos) {
            has_coef = true;
            coef = Rat::from_integer(n);
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                skip_ws(&mut pos);
                let d = read_int(&mut pos).ok_or((pos + 1, "expected denominator".to_string()))?;
                if d.is_zero() {
                    return Err((pos, "zero denominator".into()));
                }
                coef /= Rat::from_integer(d);
            }
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
            }
        }
        let mut exp = 0usize;
        if pos < chars.len() && chars[pos] == 'a' {
            pos += 1;
            exp = 1;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                skip_ws(&mut pos);
                let e = read_int(&mut pos).ok_or((pos + 1, "expected exponent".to_string()))?;
                exp = e.to_usize().ok_or((pos, "exponent too large".to_string()))?;
            }
        } else if !has_coef {
            let found = chars.get(term_start).copied().unwrap_or(' ');
            return Err((term_start + 1, format!("unexpected character '{found}'")));
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rat::zero());
        }
        coeffs[exp] += coef * rat_int(sign);
        skip_ws(&mut pos);
    }
    Ok(coeffs)
}

/// Element of K as a polynomial of degree `< deg f` in the generator `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    coeffs: Vec<Rat>,
}

impl Elem {
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The constant coefficient if all others vanish.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = match i {
                0 => abs.to_string(),
                _ => {
                    let mono = if i == 1 { "a".to_string() } else { format!("a^{i}") };
                    if abs.is_one() {
                        mono
                    } else {
                        format!("{abs}{mono}")
                    }
                }
            };
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// A finitely generated subgroup `G' = G × <ζ_t>` of K^×, with `G` torsion-free
/// of rank `r = generators.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    field: FieldSpec,
    generators: Vec<Elem>,
    torsion: u64,
}

impl GroupSpec {
    /// Builds a group from its torsion-free generators and torsion order `t`.
    pub fn new(field: FieldSpec, generators: Vec<Elem>, torsion: u64) -> Result<GroupSpec> {
        if generators.is_empty() {
            return Err(Error::domain("GroupSpec", "rank must be at least 1"));
        }
        if torsion == 0 || field.roots_of_unity() % torsion != 0 {
            return Err(Error::domain(
                "GroupSpec",
                format!("torsion order {torsion} does not divide the {} roots of unity of {}", field.roots_of_unity(), field.label()),
            ));
        }
        for g in &generators {
            if g.is_zero() {
                return Err(Error::domain("GroupSpec", "generator 0 is not a unit"));
            }
            if field.root_order(g).is_some() {
                return Err(Error::domain("GroupSpec", format!("generator {g} is a root of unity")));
            }
        }
        let group = GroupSpec {
            field,
            generators,
            torsion,
        };
        group.check_independent()?;
        Ok(group)
    }

    /// Parses a comma-separated generator list. Generators that are roots of
    /// unity are folded into the torsion order, which is the lcm of their
    /// orders and `extra_torsion`.
    pub fn parse(field: FieldSpec, text: &str, extra_torsion: u64) -> Result<GroupSpec> {
        let mut gens = Vec::new();
        let mut torsion = extra_torsion.max(1);
        for (i, part) in text.split(',').enumerate() {
            let g = field.parse_elem(part).map_err(|e| match e {
                Error::Parse { column, msg, .. } => Error::parse(1, column, format!("generator {}: {msg}", i + 1)),
                other => other,
            })?;
            if g.is_zero() {
                return Err(Error::domain("GroupSpec", format!("generator '{}' is zero", part.trim())));
            }
            match field.root_order(&g) {
                Some(1) => {
                    return Err(Error::domain("GroupSpec", "generator 1 is trivial"));
                }
                Some(o) => torsion = torsion.lcm(&o),
                None => gens.push(g),
            }
        }
        GroupSpec::new(field, gens, torsion)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn torsion(&self) -> u64 {
        self.torsion
    }

    /// `ζ_t` as an element of K.
    pub fn torsion_generator(&self) -> Elem {
        let w = self.field.roots_of_unity();
        self.field.pow(&self.field.zeta(), w / self.torsion)
    }

    /// Same group without its torsion.
    pub fn torsion_free(&self) -> GroupSpec {
        GroupSpec {
            torsion: 1,
            ..self.clone()
        }
    }

    /// Comma-separated generator list (torsion-free part).
    pub fn generators_text(&self) -> String {
        self.generators.iter().map(|g| g.to_string().replace(' ', "")).collect::<Vec<_>>().join(",")
    }

    /// Decomposition of each generator as `q · ζ^j`, when available.
    pub fn rational_root_parts(&self) -> Option<Vec<(Rat, u64)>> {
        self.generators.iter().map(|g| self.field.rational_times_root(g)).collect()
    }

    /// Multiplicative independence, checked whenever every generator is a
    /// rational times a root of unity (always the case over Q).
    fn check_independent(&self) -> Result<()> {
        let Some(parts) = self.rational_root_parts() else {
            return Ok(());
        };
        let rationals: Vec<Rat> = parts.into_iter().map(|(q, _)| q).collect();
        let (_, matrix) = exponent_matrix(&rationals)?;
        if integer_rank(&matrix) < rationals.len() {
            return Err(Error::domain(
                "GroupSpec",
                format!("generators {} are multiplicatively dependent", self.generators_text()),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.generators_text())?;
        if self.torsion > 1 {
            write!(f, " x mu_{}", self.torsion)?;
        }
        Ok(())
    }
}

/// Prime support and exponent rows of a list of positive rationals.
pub(crate) fn exponent_matrix(qs: &[Rat]) -> Result<(Vec<u64>, Vec<Vec<i64>>)> {
    let mut factored = Vec::new();
    let mut primes = std::collections::BTreeSet::new();
    for q in qs {
        let n = arith::factorize_big(q.numer())?;
        let d = arith::factorize_big(q.denom())?;
        primes.extend(n.primes());
        primes.extend(d.primes());
        factored.push((n, d));
    }
    let primes: Vec<u64> = primes.into_iter().collect();
    let rows = factored
        .iter()
        .map(|(n, d)| {
            primes
                .iter()
                .map(|p| {
                    n.factors().get(p).copied().unwrap_or(0) as i64 - d.factors().get(p).copied().unwrap_or(0) as i64
                })
                .collect()
        })
        .collect();
    Ok((primes, rows))
}

/// Rank over Q of an integer matrix.
pub(crate) fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[rank][col];
                for c in col..ncols {
                    let sub = &f * &a[rank][c];
                    a[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}
