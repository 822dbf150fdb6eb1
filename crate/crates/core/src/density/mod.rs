//! Densities of primes `𝔭` by the order of `G mod 𝔭`.
//!
//! Every quantity has two independent routes: a closed rational formula over
//! the divisors of the entanglement modulus `z` ([`closed`]) and a truncated
//! series with an exact tail bound ([`series`]).

mod closed;
mod constant;
mod series;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{prime_divisors, rat_int, rat_to_f64, valuation, Rat};
use crate::error::{Error, Result};
use crate::kummer::DegreeTable;

pub use closed::{beta_closed, coprime_closed, gamma_closed, rho_closed};
pub use constant::a_constant;
pub use series::{beta_series, coprime_density, gamma_via_rho, rho_series, tail_majorant};

/// Default truncation for [`rho_series`]: `B = m · 2^14`.
pub const DEFAULT_B_FACTOR: u64 = 1 << 14;
/// Default outer truncation for [`beta_series`].
pub const DEFAULT_BETA_M: u64 = 100;
/// Default prime cutoff for [`a_constant`].
pub const DEFAULT_L: u64 = 100_000;

/// `β = q · A_{k,r}`, with a float approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled {
    pub q: Rat,
    pub k: u32,
    pub r: usize,
    pub approx: f64,
    pub approx_error: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DensityValue {
    pub exact: Option<Rat>,
    pub interval: Option<(Rat, Rat)>,
    pub scaled: Option<Scaled>,
}

impl DensityValue {
    pub fn exact(q: Rat) -> DensityValue {
        DensityValue { exact: Some(q), ..Default::default() }
    }

    pub fn interval(lo: Rat, hi: Rat) -> DensityValue {
        debug_assert!(lo <= hi);
        DensityValue { interval: Some((lo, hi)), ..Default::default() }
    }

    /// Best float estimate: exact value, else scaled approximation, else interval midpoint.
    pub fn approx(&self) -> f64 {
        if let Some(q) = &self.exact {
            rat_to_f64(q)
        } else if let Some(s) = &self.scaled {
            s.approx
        } else if let Some((lo, hi)) = &self.interval {
            rat_to_f64(&((lo + hi) / rat_int(2)))
        } else {
            f64::NAN
        }
    }

    /// `hi - lo` of the interval, if any.
    pub fn width(&self) -> Option<Rat> {
        self.interval.as_ref().map(|(lo, hi)| hi - lo)
    }

    /// `true` if `q` lies in the closed interval.
    pub fn contains(&self, q: &Rat) -> bool {
        self.interval.as_ref().is_some_and(|(lo, hi)| lo <= q && q <= hi)
    }

    fn scale(self, factor: &Rat) -> DensityValue {
        let f = rat_to_f64(factor);
        DensityValue {
            exact: self.exact.map(|q| q * factor),
            interval: self.interval.map(|(lo, hi)| (lo * factor, hi * factor)),
            scaled: self.scaled.map(|s| Scaled {
                q: s.q * factor,
                approx: s.approx * f,
                approx_error: s.approx_error * f,
                ..s
            }),
        }
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.scaled {
            if s.q.is_one() {
                write!(f, "A({},{}) ≈ {}", s.k, s.r, format_approx(s.approx))
            } else if s.q.is_zero() {
                write!(f, "0")
            } else {
                write!(f, "{} * A({},{}) ≈ {}", s.q, s.k, s.r, format_approx(s.approx))
            }
        } else if let Some(q) = &self.exact {
            write!(f, "{q} ≈ {:.6}", rat_to_f64(q))
        } else if let Some((lo, hi)) = &self.interval {
            write!(f, "[{:.9}, {:.9}]", rat_to_f64(lo), rat_to_f64(hi))
        } else {
            write!(f, "undefined")
        }
    }
}

/// Three significant digits, as in the printed k-free tables.
fn format_approx(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let digits = (3 - 1 - x.abs().log10().floor() as i32).max(3) as usize;
    format!("{x:.digits$}")
}

/// Caller-supplied Frobenius coefficients `c(a, b)` and degrees `[F_{a,b}:K]`.
#[derive(Clone)]
pub struct OracleSpec {
    /// Upper bound for every `c(a, b)`, normally `|C|`.
    pub cap: u64,
    pub coeff: Arc<dyn Fn(u64, u64) -> u64 + Send + Sync>,
    pub degree: Arc<dyn Fn(u64, u64) -> u128 + Send + Sync>,
}

impl fmt::Debug for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleSpec").field("cap", &self.cap).finish_non_exhaustive()
    }
}

/// Condition on the Frobenius of `𝔭` in a Galois extension `F/K`.
#[derive(Clone, Debug, Default)]
pub enum FrobeniusSpec {
    #[default]
    Trivial,
    /// `C = {id}`: `𝔭` splits completely in `F`. The table is over `F`.
    SplitCompletely { degree_fk: u64, table_over_f: Box<DegreeTable> },
    /// `F` linearly disjoint from every `K_{a,b}`.
    LinearlyDisjoint { size_c: u64, degree_fk: u64 },
    Oracle(OracleSpec),
}

/// Scales a density computed for the trivial condition (over `F` for
/// `SplitCompletely`) to the given mode.
pub fn apply_frobenius_mode(base: DensityValue, frob: &FrobeniusSpec) -> Result<DensityValue> {
    match frob {
        FrobeniusSpec::Trivial => Ok(base),
        FrobeniusSpec::SplitCompletely { degree_fk, .. } => {
            if *degree_fk == 0 {
                return Err(Error::domain("apply_frobenius_mode", "[F:K] must be positive"));
            }
            Ok(base.scale(&Rat::new(1.into(), (*degree_fk).into())))
        }
        FrobeniusSpec::LinearlyDisjoint { size_c, degree_fk } => {
            if *degree_fk == 0 || size_c > degree_fk {
                return Err(Error::domain("apply_frobenius_mode", "need 0 <= |C| <= [F:K] and [F:K] > 0"));
            }
            Ok(base.scale(&Rat::new((*size_c).into(), (*degree_fk).into())))
        }
        FrobeniusSpec::Oracle(_) => Err(Error::domain(
            "apply_frobenius_mode",
            "oracle coefficients only flow through the series",
        )),
    }
}

/// `m'` with `m | ord(G')` iff `m' | ord(G)` for `G' = G × ⟨ζ_t⟩`.
pub fn torsion_reduce(m: u64, t: u64) -> u64 {
    assert!(m >= 1 && t >= 1, "torsion_reduce needs m, t >= 1");
    prime_divisors(m)
        .into_iter()
        .filter(|&l| valuation(m, l) > valuation(t, l))
        .map(|l| l.pow(valuation(m, l)))
        .product()
}

pub(crate) fn check_k_squarefree(op: &'static str, k: u64) -> Result<()> {
    if k == 0 || !crate::arith::is_squarefree(k) {
        return Err(Error::domain(op, format!("k must be squarefree, got {k}")));
    }
    Ok(())
}

pub(crate) fn check_valuation_args(op: &'static str, k: u64, m: u64) -> Result<()> {
    check_k_squarefree(op, k)?;
    if m == 0 || !crate::arith::divides_supernatural(m, k) {
        return Err(Error::domain(op, format!("rad(m) must divide k, got k={k}, m={m}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn torsion_reduction() {
        assert_eq!(torsion_reduce(2, 2), 1);
        assert_eq!(torsion_reduce(12, 2), 12);
        assert_eq!(torsion_reduce(12, 4), 3);
        assert_eq!(torsion_reduce(36, 1), 36);
        assert_eq!(torsion_reduce(1, 6), 1);
    }

    #[test]
    fn frobenius_scaling() {
        let base = DensityValue::exact(rat(17, 24));
        assert_eq!(apply_frobenius_mode(base.clone(), &FrobeniusSpec::Trivial).unwrap(), base);
        let ld = FrobeniusSpec::LinearlyDisjoint { size_c: 1, degree_fk: 3 };
        let v = apply_frobenius_mode(DensityValue::exact(rat(3, 8)), &ld).unwrap();
        assert_eq!(v.exact, Some(rat(1, 8)));
        let bad = FrobeniusSpec::LinearlyDisjoint { size_c: 4, degree_fk: 3 };
        assert!(apply_frobenius_mode(base, &bad).is_err());
    }

    #[test]
    fn display_formats() {
        assert_eq!(DensityValue::exact(rat(17, 24)).to_string(), "17/24 ≈ 0.708333");
        let s = DensityValue {
            scaled: Some(Scaled { q: rat(3, 4), k: 2, r: 1, approx: 0.398034, approx_error: 1e-6 }),
            ..Default::default()
        };
        assert_eq!(s.to_string(), "3/4 * A(2,1) ≈ 0.398");
        assert_eq!(format_approx(0.0222), "0.0222");
        assert_eq!(format_approx(0.00981), "0.00981");
    }
}
