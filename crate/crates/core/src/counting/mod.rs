//! Exact representation counts by enumeration and by transforms, the Z^3 sign
//! decomposition, main terms and J-function sums.

mod asymptotic;
mod convolve;
mod count;
mod lattice;
mod table;

pub use asymptotic::{
    asymptotic_report, ball_volume, first_full_radius, j2, j2_table, j3, main_term_c, AsymReport,
    AsymRow, AsymptoticSpec, Window,
};
pub use convolve::{convolve_counts, convolve_counts_exact, MARGIN};
pub use count::{count_positive_at, count_positive_range, decompose_signs, sphere_counts, CountMethod};
pub use lattice::{multiplicity, SphereLattice};
pub use table::{CountTable, Domain, Method};

#[cfg(test)]
mod tests;
