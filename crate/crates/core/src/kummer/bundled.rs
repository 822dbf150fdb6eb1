//! Degree tables shipped with the crate for base fields other than Q.

use super::table::{DegreeTable, Provenance};
use crate::error::{Error, Result};

/// `(field, generators, table text)`.
const BUNDLED: &[(&str, &str, &str)] = &[
    ("Qzeta3", "2", include_str!("../../data/tables/Qzeta3__2.deg")),
    ("Qzeta3", "16", include_str!("../../data/tables/Qzeta3__16.deg")),
    ("Qzeta3", "3", include_str!("../../data/tables/Qzeta3__3.deg")),
    ("Qzeta3", "27", include_str!("../../data/tables/Qzeta3__27.deg")),
    ("Qzeta3", "2,3", include_str!("../../data/tables/Qzeta3__2_3.deg")),
    ("Qzeta3", "16,27", include_str!("../../data/tables/Qzeta3__16_27.deg")),
    ("Qzeta3", "2,27,25", include_str!("../../data/tables/Qzeta3__2_27_25.deg")),
    ("Qzeta12", "2", include_str!("../../data/tables/Qzeta12__2.deg")),
    ("Qzeta12", "16", include_str!("../../data/tables/Qzeta12__16.deg")),
    ("Qzeta12", "3", include_str!("../../data/tables/Qzeta12__3.deg")),
    ("Qzeta12", "27", include_str!("../../data/tables/Qzeta12__27.deg")),
    ("Qzeta12", "2,3", include_str!("../../data/tables/Qzeta12__2_3.deg")),
    ("Qzeta12", "16,27", include_str!("../../data/tables/Qzeta12__16_27.deg")),
    ("Qzeta12", "2,27,25", include_str!("../../data/tables/Qzeta12__2_27_25.deg")),
    ("Qsqrtm5", "2", include_str!("../../data/tables/Qsqrtm5__2.deg")),
    ("Qsqrtm5", "16", include_str!("../../data/tables/Qsqrtm5__16.deg")),
    ("Qsqrtm5", "3", include_str!("../../data/tables/Qsqrtm5__3.deg")),
    ("Qsqrtm5", "27", include_str!("../../data/tables/Qsqrtm5__27.deg")),
    ("Qsqrtm5", "2,3", include_str!("../../data/tables/Qsqrtm5__2_3.deg")),
    ("Qsqrtm5", "16,27", include_str!("../../data/tables/Qsqrtm5__16_27.deg")),
    ("Qsqrtm5", "2,27,25", include_str!("../../data/tables/Qsqrtm5__2_27_25.deg")),
    ("Qzeta4", "2a", include_str!("../../data/tables/Qzeta4__2a.deg")),
    ("Qzeta4", "16a", include_str!("../../data/tables/Qzeta4__16a.deg")),
    ("Qzeta4", "3a", include_str!("../../data/tables/Qzeta4__3a.deg")),
    ("Qzeta4", "27a", include_str!("../../data/tables/Qzeta4__27a.deg")),
    ("Qzeta4", "2a,3a", include_str!("../../data/tables/Qzeta4__2a_3a.deg")),
    ("Qzeta4", "16a,27", include_str!("../../data/tables/Qzeta4__16a_27.deg")),
    ("Qzeta4", "2a,27,25", include_str!("../../data/tables/Qzeta4__2a_27_25.deg")),
    ("Qzeta4", "2", include_str!("../../data/tables/Qzeta4__2.deg")),
    ("Qzeta4", "16", include_str!("../../data/tables/Qzeta4__16.deg")),
    ("Qzeta4", "3", include_str!("../../data/tables/Qzeta4__3.deg")),
    ("Qzeta4", "27", include_str!("../../data/tables/Qzeta4__27.deg")),
    ("Qzeta4", "2,3", include_str!("../../data/tables/Qzeta4__2_3.deg")),
    ("Qzeta4", "16,27", include_str!("../../data/tables/Qzeta4__16_27.deg")),
    ("Qzeta4", "2,27,25", include_str!("../../data/tables/Qzeta4__2_27_25.deg")),
];

/// `(field, generators)` pairs with a bundled table.
pub fn bundled_groups() -> Vec<(&'static str, &'static str)> {
    BUNDLED.iter().map(|&(f, g, _)| (f, g)).collect()
}

pub fn bundled_table(field: &str, generators: &str) -> Result<DegreeTable> {
    let (_, _, text) = BUNDLED
        .iter()
        .find(|&&(f, g, _)| f == field && g == generators)
        .ok_or_else(|| Error::MissingBundle { field: field.to_string(), group: generators.to_string() })?;
    Ok(DegreeTable::from_text(text)?.with_provenance(Provenance::File))
}
