//! Finite ranked posets standing in for schemes, sheaves on them, cohomology
//! with supports, and the coniveau machinery built on top.

mod adelic;
mod cm;
mod cousin;
mod model;
mod nerve;
mod sheaf;
mod subq;
mod support;
mod system;
mod theory;
mod torsor;

pub use cm::{cohen_macaulay_check, group_sections, CmReport};
pub use adelic::{adelic_double_coset, double_cosets, torsor_coset_map, DoubleCosets, TorsorCosetMap};
pub use cousin::{cousin_complex, cousin_conditions, cousin_verify, gersten_sheaf_complex, with_constant_summand, CousinComplex, CousinConditions, CousinVerdict, SheafComplex};
pub use model::{PointSet, RankedPosetModel, MAX_POINTS};
pub use nerve::{connecting, nerve_cohomology, Cochains, RelativeComplex};
pub use sheaf::{AbSheaf, AbSheafMap, GroupSheaf};
pub use subq::Subquotient;
pub use support::{cokernel_sheaf, decomposition, homology_sheaf, image_sheaf, kernel_sheaf, on_skeleton, sections_with_support, skeleton_decomposition, subquotient_sheaf, supported_in, LocalSections, SheafSubquotient};
pub use theory::{check_pair, check_theory, check_transfer, describe_points, long_sequence, pi_structure, EmTheory, Pair, SupportTheory, TheoryReport};
pub use torsor::{TorsorData, TorsorTheory};
pub use system::{coniveau_system, em_fringe_check, flag, functoriality_check, gersten_check, gersten_complex, gersten_from_system, stratum, tower_open, Effacement, FringeSlot, GerstenComplex, GerstenReport};
