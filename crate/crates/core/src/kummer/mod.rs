//! Kummer degrees `[K_{m,n} : K]` with `K_{m,n} = K(ζ_m, G^{1/n})`.

mod bundled;
mod engine;
mod field;
mod table;

pub use bundled::{bundled_groups, bundled_table};
pub use engine::{count_left_kernel, KummerEngine};
pub use field::{Abelian, Elem, FieldSpec, GroupSpec, BUILTIN_FIELDS};
pub use table::{DegreeTable, Provenance};

use crate::empirical::{self, EmpiricalCount, Event};
use crate::error::{Error, Result};

/// Degree table of a group over Q, computed natively.
pub fn compute_degree_table_q(group: &GroupSpec) -> Result<DegreeTable> {
    if !group.field().is_rationals() {
        return Err(Error::domain(
            "compute_degree_table_Q",
            format!("field {} is not Q", group.field().label()),
        ));
    }
    compute_degree_table(group)
}

/// Degree table of the torsion-free part of `group` from the Kummer engine;
/// needs an abelian base field and generators that are rationals times roots
/// of unity.
pub fn compute_degree_table(group: &GroupSpec) -> Result<DegreeTable> {
    let engine = KummerEngine::new(group)?;
    let provenance = if group.field().is_rationals() {
        Provenance::NativeQ
    } else {
        Provenance::NativeAbelian
    };
    Ok(DegreeTable::build(
        group.field().label(),
        &group.generators_text(),
        group.rank(),
        engine.z(),
        provenance,
        |g, h| engine.degree(g, h),
    )?
    .with_torsion(group.torsion()))
}

/// The table used by default: native over Q, bundled otherwise.
pub fn degree_table(group: &GroupSpec) -> Result<DegreeTable> {
    if group.field().is_rationals() {
        compute_degree_table_q(group)
    } else {
        Ok(bundled_table(group.field().label(), &group.generators_text())?.with_torsion(group.torsion()))
    }
}

/// Counts degree-1 primes `𝔭` with `N𝔭 ≤ x`, `N𝔭 ≡ 1 (mod m)` and every
/// generator an `n`-th power mod `𝔭`. The ratio estimates `1/[K_{m,n}:K]`.
pub fn empirical_degree_check(group: &GroupSpec, m: u64, n: u64, x: u64) -> Result<EmpiricalCount> {
    if n == 0 || m % n != 0 {
        return Err(Error::domain("empirical_degree_check", format!("need n | m, got m={m}, n={n}")));
    }
    empirical::count_event(group, &Event::KummerSplit { m, n }, x)
}
