use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Kind, World};
use crate::algebra::{Ab, Hom, Mat, Sub};
use crate::{Error, Result};

/// The linear world: finitely generated abelian groups in Smith coordinates.
/// Actions are translations `x -> x + h(g)`; the trivial action is `h = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Lin;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinAct {
    pub h: Hom,
}

/// `z / b` with `b ⊆ z` (classes are cosets of `b` inside `z`).
#[derive(Clone, Debug)]
pub struct LinQuot {
    pub z: Sub,
    pub b: Sub,
}

impl World for Lin {
    type Obj = Ab;
    type Map = Hom;
    type Act = LinAct;
    type Sub = Sub;
    type Quot = LinQuot;

    fn point() -> Ab {
        Ab::trivial()
    }

    fn kind(_o: &Ab) -> Kind {
        Kind::Abelian
    }

    fn is_point(o: &Ab) -> bool {
        o.is_trivial()
    }

    fn cardinality(o: &Ab) -> Option<u128> {
        o.order()
    }

    fn same_obj(a: &Ab, b: &Ab) -> bool {
        a == b
    }

    fn describe(o: &Ab) -> String {
        format!("{o}")
    }

    fn src(f: &Hom) -> &Ab {
        &f.src
    }

    fn tgt(f: &Hom) -> &Ab {
        &f.tgt
    }

    fn zero_map(src: &Ab, tgt: &Ab) -> Hom {
        Hom::zero(src.clone(), tgt.clone())
    }

    fn identity(o: &Ab) -> Hom {
        Hom::identity(o.clone())
    }

    fn compose(g: &Hom, f: &Hom) -> Hom {
        g.compose(f)
    }

    fn map_eq(f: &Hom, g: &Hom) -> bool {
        f.m == g.m
    }

    fn is_trivial_map(f: &Hom) -> bool {
        f.is_zero()
    }

    fn invert(f: &Hom) -> Hom {
        f.negate()
    }

    fn is_pointed(_f: &Hom) -> bool {
        true
    }

    fn is_hom(_f: &Hom) -> bool {
        true
    }

    fn is_iso(f: &Hom) -> bool {
        f.is_injective() && f.is_surjective()
    }

    fn is_injective(f: &Hom) -> bool {
        f.is_injective()
    }

    fn cokernel(f: &Hom) -> (Ab, Hom) {
        let q = f.image().quotient(&f.tgt);
        let proj = Hom::new(f.tgt.clone(), q.ab.clone(), q.proj).expect("projection onto a quotient");
        (q.ab, proj)
    }

    fn product(objs: &[Ab]) -> Ab {
        Ab::direct_sum(objs).0
    }

    fn projection(objs: &[Ab], i: usize) -> Hom {
        let (sum, _, projs) = Ab::direct_sum(objs);
        Hom::new(sum, objs[i].clone(), projs[i].clone()).expect("projection of a direct sum")
    }

    fn product_map(maps: &[Hom]) -> Hom {
        let srcs: Vec<Ab> = maps.iter().map(|m| m.src.clone()).collect();
        let tgts: Vec<Ab> = maps.iter().map(|m| m.tgt.clone()).collect();
        let (s, _, ps) = Ab::direct_sum(&srcs);
        let (t, it, _) = Ab::direct_sum(&tgts);
        let mut m = Mat::zeros(t.dim(), s.dim());
        for (i, h) in maps.iter().enumerate() {
            let part = it[i].mul(&h.m).mul(&ps[i]);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    m.set(r, c, m.get(r, c) + part.get(r, c));
                }
            }
        }
        Hom::new(s, t, m).expect("product of homomorphisms")
    }

    fn product_action(acts: &[LinAct]) -> LinAct {
        let hs: Vec<Hom> = acts.iter().map(|a| a.h.clone()).collect();
        LinAct { h: Self::product_map(&hs) }
    }

    fn pairing(src: &Ab, maps: &[Hom]) -> Hom {
        let tgts: Vec<Ab> = maps.iter().map(|m| m.tgt.clone()).collect();
        let (t, it, _) = Ab::direct_sum(&tgts);
        let mut m = Mat::zeros(t.dim(), src.dim());
        for (i, h) in maps.iter().enumerate() {
            let part = it[i].mul(&h.m);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    m.set(r, c, m.get(r, c) + part.get(r, c));
                }
            }
        }
        Hom::new(src.clone(), t, m).expect("pairing of homomorphisms")
    }

    fn inverse(f: &Hom) -> Option<Hom> {
        f.inverse()
    }

    fn full(o: &Ab) -> Sub {
        Sub::full(o)
    }

    fn atoms(o: &Ab) -> Vec<Sub> {
        o.generators().into_iter().map(|g| Sub::new(alloc::vec![g])).collect()
    }

    fn base(_o: &Ab) -> Sub {
        Sub::trivial()
    }

    fn image(f: &Hom, s: &Sub) -> Sub {
        f.image_of(s)
    }

    fn preimage(f: &Hom, s: &Sub) -> Sub {
        f.preimage(s)
    }

    fn sub_le(o: &Ab, a: &Sub, b: &Sub) -> bool {
        b.le(a, o)
    }

    fn meet(o: &Ab, a: &Sub, b: &Sub) -> Sub {
        a.intersect(b, o)
    }

    fn is_base(o: &Ab, s: &Sub) -> bool {
        s.is_trivial(o)
    }

    fn sub_card(o: &Ab, s: &Sub) -> Option<u128> {
        s.order(o)
    }

    fn is_central(_o: &Ab, _s: &Sub) -> bool {
        true
    }

    fn normality_witness(_o: &Ab, _s: &Sub, _within: &Sub) -> Option<String> {
        None
    }

    fn act_group(a: &LinAct) -> &Ab {
        &a.h.src
    }

    fn act_carrier(a: &LinAct) -> &Ab {
        &a.h.tgt
    }

    fn translation(f: &Hom) -> LinAct {
        LinAct { h: f.clone() }
    }

    fn trivial_action(g: &Ab, x: &Ab) -> LinAct {
        LinAct { h: Hom::zero(g.clone(), x.clone()) }
    }

    fn act_pullback(a: &LinAct, phi: &Hom) -> LinAct {
        LinAct { h: a.h.compose(phi) }
    }

    fn act_transport(a: &LinAct, g_inv: &Hom, x: &Hom) -> Option<LinAct> {
        Some(LinAct { h: x.compose(&a.h.compose(g_inv)) })
    }

    fn act_on_base(a: &LinAct) -> Hom {
        a.h.clone()
    }

    fn act_is_valid(_a: &LinAct) -> bool {
        true
    }

    fn act_by_automorphisms(a: &LinAct) -> bool {
        a.h.is_zero()
    }

    fn is_invariant(a: &LinAct, f: &Hom) -> bool {
        f.compose(&a.h).is_zero()
    }

    fn is_equivariant_boundary(a: &LinAct, d: &Hom) -> bool {
        d.m == a.h.m
    }

    fn is_equivariant(a_src: &LinAct, a_tgt: &LinAct, phi: &Hom, f: &Hom) -> bool {
        f.compose(&a_src.h).m == a_tgt.h.compose(phi).m
    }

    fn orbits(a: &LinAct, k: &Sub, z: &Sub) -> Result<LinQuot> {
        let b = a.h.image_of(k);
        if !z.le(&b, &a.h.tgt) {
            return Err(Error::invalid("subgroup is not stable under the translation action"));
        }
        Ok(LinQuot { z: z.clone(), b })
    }

    fn collapse(o: &Ab, z: &Sub, b: &Sub) -> LinQuot {
        LinQuot { z: z.clone(), b: b.intersect(z, o) }
    }

    fn refine(q: &LinQuot, z: &Sub, a: &LinAct, s: &Sub) -> Result<LinQuot> {
        let o = &a.h.tgt;
        let extra = a.h.image_of(s);
        if !z.le(&extra, o) {
            return Err(Error::invalid("subgroup is not stable under the translation action"));
        }
        Ok(LinQuot { z: z.clone(), b: q.b.intersect(z, o).join(&extra) })
    }

    fn quot_eq(o: &Ab, q1: &LinQuot, q2: &LinQuot) -> bool {
        q1.z.same(&q2.z, o) && q1.b.intersect(&q1.z, o).same(&q2.b.intersect(&q2.z, o), o)
    }

    fn quot_domain(q: &LinQuot) -> &Sub {
        &q.z
    }

    fn base_class(o: &Ab, q: &LinQuot) -> Sub {
        q.b.intersect(&q.z, o)
    }

    fn quot_card(o: &Ab, q: &LinQuot) -> Option<u128> {
        q.z.subquotient(&q.b.intersect(&q.z, o), o).order()
    }

    fn quot_injective(q: &LinQuot, f: &Hom) -> bool {
        let o = &f.src;
        let k = f.kernel().intersect(&q.z, o);
        q.b.le(&k, o)
    }

    fn quot_describe(o: &Ab, q: &LinQuot) -> String {
        format!("{}", q.z.subquotient(&q.b.intersect(&q.z, o), o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Mat;

    fn times(k: i128) -> Hom {
        Hom::new(Ab::cyclic(0), Ab::cyclic(0), Mat::from_rows(&[alloc::vec![k]], 1)).unwrap()
    }

    #[test]
    fn translation_quotient_of_z() {
        let a = Lin::translation(&times(3));
        let q = Lin::orbits(&a, &Lin::full(&Ab::cyclic(0)), &Lin::full(&Ab::cyclic(0))).unwrap();
        assert_eq!(Lin::quot_card(&Ab::cyclic(0), &q), Some(3));
        assert_eq!(Lin::quot_describe(&Ab::cyclic(0), &q), "Z/3");
    }

    #[test]
    fn refine_adds_relations() {
        let z = Ab::cyclic(0);
        let q = Lin::orbits(&Lin::translation(&times(4)), &Lin::full(&z), &Lin::full(&z)).unwrap();
        let q2 = Lin::refine(&q, &Lin::full(&z), &Lin::translation(&times(6)), &Lin::full(&z)).unwrap();
        assert_eq!(Lin::quot_card(&z, &q2), Some(2));
    }

    #[test]
    fn injectivity_modulo_classes() {
        let z = Ab::cyclic(0);
        let q = Lin::orbits(&Lin::translation(&times(2)), &Lin::full(&z), &Lin::full(&z)).unwrap();
        let red = Hom::new(z.clone(), Ab::cyclic(2), Mat::from_rows(&[alloc::vec![1]], 1)).unwrap();
        assert!(Lin::quot_injective(&q, &red));
        let red4 = Hom::new(z.clone(), Ab::cyclic(4), Mat::from_rows(&[alloc::vec![1]], 1)).unwrap();
        assert!(Lin::quot_injective(&q, &red4));
        let zero = Hom::zero(z.clone(), Ab::cyclic(4));
        assert!(!Lin::quot_injective(&q, &zero));
    }
}
