//! Finite and finitely presented algebra: integer matrices, abelian groups,
//! finite groups, pointed sets and their morphisms.

pub mod ab;
pub mod group;
pub mod matrix;
pub mod objects;

pub use ab::{Ab, FgAbGroup, Hom, Sub};
pub use group::{product_coords, product_index, FinGroup};
pub use matrix::{smith_normal_form, solve, solve_with, Int, Mat, Smith};
pub use objects::{
    center, classify_map, kernel_image_cokernel, orbit_space, restricted_product, ActionCarrier, Cokernel,
    GroupAction, KernelImageCokernel, MapFlags, Morphism, OrbitSpace, PointedObject, PointedSet, Subobject,
};
