//! Finite tables `(g, h) ↦ [K_{g,h} : K]` over the divisors of an entanglement
//! modulus `z`, extended to all `(m, n)` by
//! `[K_{m,n}:K] = φ(m) n^r / (φ((m,z)) (n,z)^r) · [K_{(m,z),(n,z)}:K]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::arith::{divisors, euler_phi, gcd, prime_divisors};
use crate::error::{Error, Result};

/// Where a table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Computed over Q by the Kummer engine.
    NativeQ,
    /// Computed by the Kummer engine over an abelian base field other than Q.
    NativeAbelian,
    /// Loaded from a degree-table file or a bundled resource.
    File,
    /// User-supplied and not yet cross-checked against prime counts.
    EmpiricalUnverified,
}

#[derive(Clone, Debug)]
pub struct DegreeTable {
    field: String,
    generators: String,
    rank: usize,
    torsion: u64,
    z: u64,
    entries: BTreeMap<(u64, u64), u128>,
    provenance: Provenance,
}

impl PartialEq for DegreeTable {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.generators == other.generators
            && self.rank == other.rank
            && self.torsion == other.torsion
            && self.z == other.z
            && self.entries == other.entries
    }
}

impl DegreeTable {
    /// Builds a table by evaluating `degree(g, h)` for every `g | z`, `h | g`,
    /// and validates it.
    pub fn build(
        field: &str,
        generators: &str,
        rank: usize,
        z: u64,
        provenance: Provenance,
        mut degree: impl FnMut(u64, u64) -> Result<u128>,
    ) -> Result<DegreeTable> {
        let mut entries = BTreeMap::new();
        for g in divisors(z) {
            for h in divisors(g) {
                entries.insert((g, h), degree(g, h)?);
            }
        }
        let table = DegreeTable {
            field: field.to_string(),
            generators: generators.to_string(),
            rank,
            torsion: 1,
            z,
            entries,
            provenance,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn field(&self) -> &str {
        &self.field
    }

    pub fn generators(&self) -> &str {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> u64 {
        self.torsion
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Records the torsion order of the group the table belongs to.
    pub fn with_torsion(mut self, torsion: u64) -> Self {
        self.torsion = torsion;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn entries(&self) -> &BTreeMap<(u64, u64), u128> {
        &self.entries
    }

    /// `[K_{g,h} : K]` for `g | z`, `h | g`.
    pub fn entry(&self, g: u64, h: u64) -> Option<u128> {
        self.entries.get(&(g, h)).copied()
    }

    /// `[K_{m,n} : K]` for any `n | m`, by the lift identity.
    pub fn lift(&self, m: u64, n: u64) -> Result<u128> {
        if m == 0 || n == 0 || m % n != 0 {
            return Err(Error::domain("lift_degree", format!("need n | m, got m={m}, n={n}")));
        }
        let g = gcd(m, self.z);
        let h = gcd(n, self.z);
        let base = self.entries[&(g, h)];
        // φ(g) | φ(m) since g | m, and h | n.
        let cyc = (euler_phi(m) / euler_phi(g)) as u128;
        let kum = ((n / h) as u128)
            .checked_pow(self.rank as u32)
            .ok_or(Error::Overflow("lift_degree"))?;
        base.checked_mul(cyc)
            .and_then(|x| x.checked_mul(kum))
            .ok_or(Error::Overflow("lift_degree"))
    }

    /// `max φ(g) h^r / [K_{g,h}:K]` over the table, so that
    /// `1/[K_{mn,n}:K] ≤ C / (φ(m) n^{r+1})` whenever `rad(n) | m`.
    pub fn max_defect(&self) -> u128 {
        self.entries
            .iter()
            .map(|(&(g, h), &d)| euler_phi(g) as u128 * (h as u128).pow(self.rank as u32) / d)
            .max()
            .unwrap_or(1)
    }

    /// Checks the structural invariants, reporting the first offending pair.
    pub fn validate(&self) -> Result<()> {
        let bad = |g, h, msg: String| Err(Error::Invariant { g, h, msg });
        if self.z == 0 {
            return bad(0, 0, "z must be positive".into());
        }
        if self.rank == 0 {
            return bad(1, 1, "rank must be positive".into());
        }
        match self.entry(1, 1) {
            Some(1) => {}
            Some(d) => return bad(1, 1, format!("[K_{{1,1}}:K] must be 1, found {d}")),
            None => return bad(1, 1, "missing entry".into()),
        }
        let mut expected = 0usize;
        for g in divisors(self.z) {
            for h in divisors(g) {
                expected += 1;
                let Some(d) = self.entry(g, h) else {
                    return bad(g, h, "missing entry".into());
                };
                if d == 0 {
                    return bad(g, h, "degree must be positive".into());
                }
                let generic = euler_phi(g) as u128 * (h as u128).pow(self.rank as u32);
                if generic % d != 0 {
                    return bad(g, h, format!("{d} does not divide phi(g) h^r = {generic}"));
                }
                // Tower divisibility, checked against immediate predecessors.
                for ell in prime_divisors(g) {
                    if h % ell == 0 {
                        let below = self.entries[&(g, h / ell)];
                        if d % below != 0 {
                            return bad(g, h, format!("not divisible by [K_{{{g},{}}}:K] = {below}", h / ell));
                        }
                    }
                    if (g / ell) % h == 0 {
                        let below = self.entries[&(g / ell, h)];
                        if d % below != 0 {
                            return bad(g, h, format!("not divisible by [K_{{{},{h}}}:K] = {below}", g / ell));
                        }
                    }
                }
                if self.lift(g, h)? != d {
                    return bad(g, h, "lift does not reproduce the entry".into());
                }
            }
        }
        if self.entries.len() != expected {
            let (&(g, h), _) = self
                .entries
                .iter()
                .find(|(&(g, h), _)| self.z % g != 0 || g % h != 0)
                .expect("extra entry");
            return bad(g, h, "entry outside the divisor lattice of z".into());
        }
        Ok(())
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field {}", self.field);
        let _ = writeln!(out, "generators {}", self.generators);
        let _ = writeln!(out, "rank {}", self.rank);
        let _ = writeln!(out, "torsion {}", self.torsion);
        let _ = writeln!(out, "z {}", self.z);
        for (&(g, h), d) in &self.entries {
            let _ = writeln!(out, "deg {g} {h} {d}");
        }
        out
    }

    /// Parses the text format and validates the result.
    pub fn from_text(text: &str) -> Result<DegreeTable> {
        let mut field = None;
        let mut generators = None;
        let mut rank = None;
        let mut torsion = None;
        let mut z = None;
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let line = line.trim();
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest_col = indent + key.len() + 2;
            let rest = rest.trim();
            let int = |s: &str, col: usize| -> Result<u128> {
                s.parse::<u128>()
                    .map_err(|_| Error::parse(line_no, col, format!("expected a nonnegative integer, found '{s}'")))
            };
            match key {
                "field" => field = Some(rest.to_string()),
                "generators" => generators = Some(rest.replace(' ', "")),
                "rank" => rank = Some(int(rest, rest_col)? as usize),
                "torsion" => torsion = Some(int(rest, rest_col)? as u64),
                "z" => z = Some(int(rest, rest_col)? as u64),
                "deg" => {
                    let mut col = rest_col;
                    let mut nums = Vec::new();
                    for tok in rest.split_whitespace() {
                        let at = raw[col - 1..].find(tok).map_or(col, |o| col + o);
                        nums.push(int(tok, at)?);
                        col = at + tok.len();
                    }
                    if nums.len() != 3 {
                        return Err(Error::parse(line_no, rest_col, "expected 'deg <g> <h> <value>'"));
                    }
                    let (g, h) = (nums[0] as u64, nums[1] as u64);
                    if entries.insert((g, h), nums[2]).is_some() {
                        return Err(Error::parse(line_no, indent + 1, format!("duplicate entry ({g}, {h})")));
                    }
                }
                other => {
                    return Err(Error::parse(line_no, indent + 1, format!("unknown key '{other}'")));
                }
            }
        }
        fn need<T>(v: Option<T>, k: &str) -> Result<T> {
            v.ok_or_else(|| Error::parse(0, 0, format!("missing header '{k}'")))
        }
        let table = DegreeTable {
            field: need(field, "field")?,
            generators: need(generators, "generators")?,
            rank: need(rank, "rank")?,
            torsion: need(torsion, "torsion")?,
            z: need(z, "z")?,
            entries,
            provenance: Provenance::File,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<DegreeTable> {
        DegreeTable::from_text(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_two() -> DegreeTable {
        // ⟨2⟩ over Q with z = 8: only √2 ∈ Q(ζ8) is entangled.
        DegreeTable::build("Q", "2", 1, 8, Provenance::NativeQ, |g, h| {
            let generic = euler_phi(g) as u128 * h as u128;
            Ok(if g % 8 == 0 && h % 2 == 0 { generic / 2 } else { generic })
        })
        .unwrap()
    }

    #[test]
    fn lift_examples() {
        let t = q_two();
        assert_eq!(t.lift(1, 1).unwrap(), 1);
        assert_eq!(t.lift(8, 2).unwrap(), 4);
        assert_eq!(t.lift(24, 2).unwrap(), 8);
        assert_eq!(t.lift(5, 5).unwrap(), 20);
        assert!(t.lift(4, 3).is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = q_two();
        let text = t.to_text();
        let back = DegreeTable::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.provenance(), Provenance::File);
    }

    #[test]
    fn invariant_violations_are_reported() {
        let text = q_two().to_text().replace("deg 1 1 1", "deg 1 1 2");
        match DegreeTable::from_text(&text) {
            Err(Error::Invariant { g: 1, h: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let text = q_two().to_text().replace("deg 8 8 16", "deg 8 8 7");
        assert!(matches!(DegreeTable::from_text(&text), Err(Error::Invariant { g: 8, h: 8, .. })));
        let text = q_two().to_text().replace("deg 4 2", "deg 4 x");
        match DegreeTable::from_text(&text) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        let text = q_two().to_text().lines().filter(|l| !l.starts_with("deg 2 2")).collect::<Vec<_>>().join("\n");
        assert!(matches!(DegreeTable::from_text(&text), Err(Error::Invariant { g: 2, h: 2, .. })));
    }
}
