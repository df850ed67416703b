//! Two concrete representations of pointed objects behind one interface.
//!
//! [`Fin`] stores every object by enumeration (multiplication tables, index
//! maps); [`Lin`] stores finitely generated abelian groups with integer
//! matrices and handles infinite groups such as `Z`. Exactness, couple and
//! page algorithms are written once against [`World`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::Result;

mod fin;
mod lin;

pub use fin::{Fin, FinAct, FinMap, FinObj, FinQuot, FinSub};
pub use lin::{Lin, LinAct, LinQuot};

/// Object kind of a pointed object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Set,
    Group,
    Abelian,
}

pub trait World: Clone + Debug + 'static {
    type Obj: Clone + Debug;
    type Map: Clone + Debug;
    type Act: Clone + Debug;
    type Sub: Clone + Debug;
    type Quot: Clone + Debug;

    fn point() -> Self::Obj;
    fn kind(o: &Self::Obj) -> Kind;
    fn is_point(o: &Self::Obj) -> bool;
    fn cardinality(o: &Self::Obj) -> Option<u128>;
    fn same_obj(a: &Self::Obj, b: &Self::Obj) -> bool;
    fn describe(o: &Self::Obj) -> String;

    fn src(f: &Self::Map) -> &Self::Obj;
    fn tgt(f: &Self::Map) -> &Self::Obj;
    fn zero_map(src: &Self::Obj, tgt: &Self::Obj) -> Self::Map;
    fn identity(o: &Self::Obj) -> Self::Map;
    /// `g` after `f`.
    fn compose(g: &Self::Map, f: &Self::Map) -> Self::Map;
    fn map_eq(f: &Self::Map, g: &Self::Map) -> bool;
    fn is_trivial_map(f: &Self::Map) -> bool;
    /// `x -> f(x)^{-1}`; the identity operation when the target is not a group.
    fn invert(f: &Self::Map) -> Self::Map;
    fn is_pointed(f: &Self::Map) -> bool;
    /// Respects multiplication (vacuous unless both ends are groups).
    fn is_hom(f: &Self::Map) -> bool;
    fn is_iso(f: &Self::Map) -> bool;
    fn is_injective(f: &Self::Map) -> bool;
    /// Pointed cokernel: the target with the image collapsed to the base point
    /// (a quotient group in the linear world), with the projection.
    fn cokernel(f: &Self::Map) -> (Self::Obj, Self::Map);

    /// Product object; the base point and group law are componentwise.
    fn product(objs: &[Self::Obj]) -> Self::Obj;
    fn projection(objs: &[Self::Obj], i: usize) -> Self::Map;
    /// `f_1 x ... x f_k` between the products of sources and of targets.
    fn product_map(maps: &[Self::Map]) -> Self::Map;
    fn product_action(acts: &[Self::Act]) -> Self::Act;
    /// `x -> (f_1(x), ..., f_k(x))`; all maps share the source `src`.
    fn pairing(src: &Self::Obj, maps: &[Self::Map]) -> Self::Map;
    /// Two-sided inverse of an isomorphism.
    fn inverse(f: &Self::Map) -> Option<Self::Map>;

    fn full(o: &Self::Obj) -> Self::Sub;
    /// Subobjects generated by one element each, jointly generating `o`.
    /// A map kills `o` when it kills every atom.
    fn atoms(o: &Self::Obj) -> Vec<Self::Sub>;
    fn base(o: &Self::Obj) -> Self::Sub;
    fn image(f: &Self::Map, s: &Self::Sub) -> Self::Sub;
    fn preimage(f: &Self::Map, s: &Self::Sub) -> Self::Sub;
    /// `a ⊆ b`.
    fn sub_le(o: &Self::Obj, a: &Self::Sub, b: &Self::Sub) -> bool;
    fn sub_eq(o: &Self::Obj, a: &Self::Sub, b: &Self::Sub) -> bool {
        Self::sub_le(o, a, b) && Self::sub_le(o, b, a)
    }
    fn meet(o: &Self::Obj, a: &Self::Sub, b: &Self::Sub) -> Self::Sub;
    fn is_base(o: &Self::Obj, s: &Self::Sub) -> bool {
        Self::sub_le(o, s, &Self::base(o))
    }
    fn sub_card(o: &Self::Obj, s: &Self::Sub) -> Option<u128>;
    fn is_central(o: &Self::Obj, s: &Self::Sub) -> bool;
    /// A pair `(g, h)` with `g h g^-1` outside `s`, `g` ranging over `within`.
    fn normality_witness(o: &Self::Obj, s: &Self::Sub, within: &Self::Sub) -> Option<String>;

    fn act_group(a: &Self::Act) -> &Self::Obj;
    fn act_carrier(a: &Self::Act) -> &Self::Obj;
    /// `G` acting on the group `X` through `x -> f(g) x`.
    fn translation(f: &Self::Map) -> Self::Act;
    fn trivial_action(g: &Self::Obj, x: &Self::Obj) -> Self::Act;
    /// `a` restricted along a homomorphism `phi: H -> G`.
    fn act_pullback(a: &Self::Act, phi: &Self::Map) -> Self::Act;
    /// `a` moved along isomorphisms `g_inv: H -> G` and `x: X -> Y`, so that
    /// `h . y = x(g_inv(h) . x^-1(y))`.
    fn act_transport(a: &Self::Act, g_inv: &Self::Map, x: &Self::Map) -> Option<Self::Act>;
    /// `g -> g . *`.
    fn act_on_base(a: &Self::Act) -> Self::Map;
    fn act_is_valid(a: &Self::Act) -> bool;
    /// Each group element acts by a group automorphism of the carrier.
    fn act_by_automorphisms(a: &Self::Act) -> bool;
    /// `f(g . x) = f(x)`.
    fn is_invariant(a: &Self::Act, f: &Self::Map) -> bool;
    /// `d(g h) = g . d(h)`.
    fn is_equivariant_boundary(a: &Self::Act, d: &Self::Map) -> bool;
    /// `f(g . x) = phi(g) . f(x)`.
    fn is_equivariant(a_src: &Self::Act, a_tgt: &Self::Act, phi: &Self::Map, f: &Self::Map) -> bool;

    /// Orbits of `z` under the subgroup `k` of the acting group.
    fn orbits(a: &Self::Act, k: &Self::Sub, z: &Self::Sub) -> Result<Self::Quot>;
    /// `z` with `b ∩ z` collapsed to the base class, other classes singletons.
    fn collapse(o: &Self::Obj, z: &Self::Sub, b: &Self::Sub) -> Self::Quot;
    /// Restrict `q` to `z` and further merge `x ~ s . x` for `s` in `s`.
    fn refine(q: &Self::Quot, z: &Self::Sub, a: &Self::Act, s: &Self::Sub) -> Result<Self::Quot>;
    fn quot_eq(o: &Self::Obj, q1: &Self::Quot, q2: &Self::Quot) -> bool;
    fn quot_domain(q: &Self::Quot) -> &Self::Sub;
    /// The class of the base point, as a subobject of the carrier.
    fn base_class(o: &Self::Obj, q: &Self::Quot) -> Self::Sub;
    fn quot_card(o: &Self::Obj, q: &Self::Quot) -> Option<u128>;
    /// Distinct classes have distinct images under `f`.
    fn quot_injective(q: &Self::Quot, f: &Self::Map) -> bool;
    fn quot_describe(o: &Self::Obj, q: &Self::Quot) -> String;
}
