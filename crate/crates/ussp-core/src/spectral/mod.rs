//! Unstable exact couples, their pages, and the pair of couples attached to
//! a bounded tower.

mod couple;
mod degeneracy;
mod pair;
mod rees;
mod tower;

pub use couple::{dd_failures, derived, page, page_direct, validate_couple, CoupleReport, DerivedCouple, Failure, Page, RightCouple, SlotSets};
pub use degeneracy::{
    degeneracy_check, diagonal_terms, index_set, large_line_check, truncated_degeneracy, DegeneracyReport, DiagonalEntry, DiagonalReport,
    E2Entry, LargeLineReport, TruncatedReport,
};
pub use pair::{couple_pair_pages, left_page_direct, left_slot_sets, LeftPage, PairMismatch, PairReport};
pub use rees::{product_system, ReesReport, ReesSystem, RelationCheck};
pub use tower::group_tower;

#[cfg(test)]
mod tests;
