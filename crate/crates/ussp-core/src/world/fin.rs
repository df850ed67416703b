use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{Kind, World};
use crate::algebra::{Ab, FinGroup};
use crate::{Error, Result};

/// The enumerated world: elements are indices `0..n`, base point `0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fin;

#[derive(Debug, PartialEq, Eq)]
pub struct FinData {
    pub n: usize,
    pub group: Option<FinGroup>,
}

/// A finite pointed set, optionally with a group law (identity = base point).
#[derive(Clone, Debug)]
pub struct FinObj(pub Arc<FinData>);

impl FinObj {
    pub fn set(n: usize) -> Self {
        assert!(n >= 1, "pointed sets are nonempty");
        FinObj(Arc::new(FinData { n, group: None }))
    }

    pub fn group(g: FinGroup) -> Self {
        FinObj(Arc::new(FinData { n: g.order(), group: Some(g) }))
    }

    pub fn abelian(a: &Ab) -> Result<Self> {
        Ok(Self::group(FinGroup::from_ab(a)?))
    }

    pub fn len(&self) -> usize {
        self.0.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grp(&self) -> Option<&FinGroup> {
        self.0.group.as_ref()
    }

    fn g(&self) -> &FinGroup {
        self.0.group.as_ref().expect("object carries no group law")
    }

    /// Forget the group law.
    pub fn underlying(&self) -> Self {
        Self::set(self.0.n)
    }
}

impl PartialEq for FinObj {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinMap {
    pub src: FinObj,
    pub tgt: FinObj,
    pub f: Vec<usize>,
}

impl FinMap {
    pub fn new(src: FinObj, tgt: FinObj, f: Vec<usize>) -> Result<Self> {
        if f.len() != src.len() || f.iter().any(|&y| y >= tgt.len()) {
            return Err(Error::invalid("map table does not match its source and target"));
        }
        Ok(FinMap { src, tgt, f })
    }
}

/// `table[g][x] = g . x`.
#[derive(Clone, Debug, PartialEq)]
pub struct FinAct {
    pub group: FinObj,
    pub carrier: FinObj,
    pub table: Vec<Vec<usize>>,
}

impl FinAct {
    pub fn new(group: FinObj, carrier: FinObj, table: Vec<Vec<usize>>) -> Result<Self> {
        if group.grp().is_none() {
            return Err(Error::invalid("acting object is not a group"));
        }
        if table.len() != group.len() || table.iter().any(|r| r.len() != carrier.len() || r.iter().any(|&y| y >= carrier.len())) {
            return Err(Error::invalid("action table has the wrong shape"));
        }
        Ok(FinAct { group, carrier, table })
    }
}

/// Sorted, duplicate-free element indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinSub(pub Vec<usize>);

impl FinSub {
    pub fn from_unsorted(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        FinSub(v)
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.0 {
            m[x] = true;
        }
        m
    }
}

const OUTSIDE: usize = usize::MAX;

/// Mixed-radix coordinates, last factor fastest (the layout of [`FinGroup::product`]).
pub fn radix_coords(sizes: &[usize], mut x: usize) -> Vec<usize> {
    let mut c = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        c[i] = x % sizes[i];
        x /= sizes[i];
    }
    c
}

pub fn radix_index(sizes: &[usize], coords: &[usize]) -> usize {
    sizes.iter().zip(coords).fold(0, |acc, (&n, &c)| acc * n + c)
}

/// A partition of a subset `z`, with classes numbered by first appearance
/// in increasing element order (so equal partitions have equal labels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinQuot {
    pub z: FinSub,
    pub class: Vec<usize>,
    pub count: usize,
}

impl FinQuot {
    fn from_uf(n: usize, z: &FinSub, uf: &mut UnionFind) -> Self {
        let mut class = vec![OUTSIDE; n];
        let mut label = vec![OUTSIDE; n];
        let mut count = 0;
        for &x in &z.0 {
            let r = uf.find(x);
            if label[r] == OUTSIDE {
                label[r] = count;
                count += 1;
            }
            class[x] = label[r];
        }
        FinQuot { z: z.clone(), class, count }
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for &x in &self.z.0 {
            out[self.class[x]].push(x);
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn merge_by(uf: &mut UnionFind, a: &FinAct, s: &FinSub, z: &FinSub, zmask: &[bool]) -> Result<()> {
    for &g in &s.0 {
        for &x in &z.0 {
            let y = a.table[g][x];
            if !zmask[y] {
                return Err(Error::invalid(format!("subset is not stable under the action (element {g} sends {x} to {y})")));
            }
            uf.union(x, y);
        }
    }
    Ok(())
}

impl World for Fin {
    type Obj = FinObj;
    type Map = FinMap;
    type Act = FinAct;
    type Sub = FinSub;
    type Quot = FinQuot;

    fn point() -> FinObj {
        FinObj::group(FinGroup::trivial())
    }

    fn kind(o: &FinObj) -> Kind {
        match o.grp() {
            None => Kind::Set,
            Some(g) if g.is_abelian() => Kind::Abelian,
            Some(_) => Kind::Group,
        }
    }

    fn is_point(o: &FinObj) -> bool {
        o.len() == 1
    }

    fn cardinality(o: &FinObj) -> Option<u128> {
        Some(o.len() as u128)
    }

    fn same_obj(a: &FinObj, b: &FinObj) -> bool {
        a == b
    }

    fn describe(o: &FinObj) -> String {
        match Self::kind(o) {
            Kind::Set => format!("set({})", o.len()),
            Kind::Group => format!("group({})", o.len()),
            Kind::Abelian => format!("ab({})", o.len()),
        }
    }

    fn src(f: &FinMap) -> &FinObj {
        &f.src
    }

    fn tgt(f: &FinMap) -> &FinObj {
        &f.tgt
    }

    fn zero_map(src: &FinObj, tgt: &FinObj) -> FinMap {
        FinMap { src: src.clone(), tgt: tgt.clone(), f: vec![0; src.len()] }
    }

    fn identity(o: &FinObj) -> FinMap {
        FinMap { src: o.clone(), tgt: o.clone(), f: (0..o.len()).collect() }
    }

    fn compose(g: &FinMap, f: &FinMap) -> FinMap {
        assert_eq!(f.tgt.len(), g.src.len(), "composition of incompatible maps");
        FinMap { src: f.src.clone(), tgt: g.tgt.clone(), f: f.f.iter().map(|&x| g.f[x]).collect() }
    }

    fn map_eq(f: &FinMap, g: &FinMap) -> bool {
        f.f == g.f
    }

    fn is_trivial_map(f: &FinMap) -> bool {
        f.f.iter().all(|&y| y == 0)
    }

    fn invert(f: &FinMap) -> FinMap {
        match f.tgt.grp() {
            Some(g) => FinMap { src: f.src.clone(), tgt: f.tgt.clone(), f: f.f.iter().map(|&y| g.inv(y)).collect() },
            None => f.clone(),
        }
    }

    fn is_pointed(f: &FinMap) -> bool {
        f.f.first() == Some(&0)
    }

    fn is_hom(f: &FinMap) -> bool {
        match (f.src.grp(), f.tgt.grp()) {
            (Some(a), Some(b)) => a.is_hom(b, &f.f),
            _ => Self::is_pointed(f),
        }
    }

    fn is_iso(f: &FinMap) -> bool {
        if f.src.len() != f.tgt.len() || f.src.grp().is_some() != f.tgt.grp().is_some() {
            return false;
        }
        let mut seen = vec![false; f.tgt.len()];
        for &y in &f.f {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        Self::is_hom(f)
    }

    fn is_injective(f: &FinMap) -> bool {
        let mut seen = vec![false; f.tgt.len()];
        f.f.iter().all(|&y| !core::mem::replace(&mut seen[y], true))
    }

    fn cokernel(f: &FinMap) -> (FinObj, FinMap) {
        let img = Self::image(f, &Self::full(&f.src));
        let mut proj = vec![0; f.tgt.len()];
        let mut k = 1;
        for (y, slot) in proj.iter_mut().enumerate() {
            if !img.contains(y) && y != 0 {
                *slot = k;
                k += 1;
            }
        }
        let c = FinObj::set(k);
        (c.clone(), FinMap { src: f.tgt.clone(), tgt: c, f: proj })
    }

    fn product(objs: &[FinObj]) -> FinObj {
        let groups: Option<Vec<FinGroup>> = objs.iter().map(|o| o.grp().cloned()).collect();
        match groups {
            Some(gs) => FinObj::group(FinGroup::product(&gs)),
            None => FinObj::set(objs.iter().map(|o| o.len()).product()),
        }
    }

    fn projection(objs: &[FinObj], i: usize) -> FinMap {
        let p = Self::product(objs);
        let sizes: Vec<usize> = objs.iter().map(|o| o.len()).collect();
        let f = (0..p.len()).map(|x| radix_coords(&sizes, x)[i]).collect();
        FinMap { src: p, tgt: objs[i].clone(), f }
    }

    fn product_map(maps: &[FinMap]) -> FinMap {
        let srcs: Vec<FinObj> = maps.iter().map(|m| m.src.clone()).collect();
        let tgts: Vec<FinObj> = maps.iter().map(|m| m.tgt.clone()).collect();
        let (ps, pt) = (Self::product(&srcs), Self::product(&tgts));
        let ss: Vec<usize> = srcs.iter().map(|o| o.len()).collect();
        let ts: Vec<usize> = tgts.iter().map(|o| o.len()).collect();
        let f = (0..ps.len())
            .map(|x| {
                let c = radix_coords(&ss, x);
                let d: Vec<usize> = c.iter().zip(maps).map(|(&ci, m)| m.f[ci]).collect();
                radix_index(&ts, &d)
            })
            .collect();
        FinMap { src: ps, tgt: pt, f }
    }

    fn product_action(acts: &[FinAct]) -> FinAct {
        let gs: Vec<FinObj> = acts.iter().map(|a| a.group.clone()).collect();
        let xs: Vec<FinObj> = acts.iter().map(|a| a.carrier.clone()).collect();
        let (pg, px) = (Self::product(&gs), Self::product(&xs));
        let gsz: Vec<usize> = gs.iter().map(|o| o.len()).collect();
        let xsz: Vec<usize> = xs.iter().map(|o| o.len()).collect();
        let table = (0..pg.len())
            .map(|g| {
                let cg = radix_coords(&gsz, g);
                (0..px.len())
                    .map(|x| {
                        let cx = radix_coords(&xsz, x);
                        let d: Vec<usize> = acts.iter().enumerate().map(|(i, a)| a.table[cg[i]][cx[i]]).collect();
                        radix_index(&xsz, &d)
                    })
                    .collect()
            })
            .collect();
        FinAct { group: pg, carrier: px, table }
    }

    fn pairing(src: &FinObj, maps: &[FinMap]) -> FinMap {
        let tgts: Vec<FinObj> = maps.iter().map(|m| m.tgt.clone()).collect();
        let pt = Self::product(&tgts);
        let ts: Vec<usize> = tgts.iter().map(|o| o.len()).collect();
        let f = (0..src.len())
            .map(|x| {
                let d: Vec<usize> = maps.iter().map(|m| m.f[x]).collect();
                radix_index(&ts, &d)
            })
            .collect();
        FinMap { src: src.clone(), tgt: pt, f }
    }

    fn inverse(f: &FinMap) -> Option<FinMap> {
        if !Self::is_iso(f) {
            return None;
        }
        let mut g = vec![0; f.src.len()];
        for (x, &y) in f.f.iter().enumerate() {
            g[y] = x;
        }
        Some(FinMap { src: f.tgt.clone(), tgt: f.src.clone(), f: g })
    }

    fn full(o: &FinObj) -> FinSub {
        FinSub((0..o.len()).collect())
    }

    fn atoms(o: &FinObj) -> Vec<FinSub> {
        (0..o.len()).map(|x| FinSub(vec![x])).collect()
    }

    fn base(_o: &FinObj) -> FinSub {
        FinSub(vec![0])
    }

    fn image(f: &FinMap, s: &FinSub) -> FinSub {
        FinSub::from_unsorted(s.0.iter().map(|&x| f.f[x]).collect())
    }

    fn preimage(f: &FinMap, s: &FinSub) -> FinSub {
        let m = s.mask(f.tgt.len());
        FinSub((0..f.src.len()).filter(|&x| m[f.f[x]]).collect())
    }

    fn sub_le(_o: &FinObj, a: &FinSub, b: &FinSub) -> bool {
        a.0.iter().all(|&x| b.contains(x))
    }

    fn sub_eq(_o: &FinObj, a: &FinSub, b: &FinSub) -> bool {
        a == b
    }

    fn meet(_o: &FinObj, a: &FinSub, b: &FinSub) -> FinSub {
        FinSub(a.0.iter().copied().filter(|&x| b.contains(x)).collect())
    }

    fn is_base(_o: &FinObj, s: &FinSub) -> bool {
        s.0.iter().all(|&x| x == 0)
    }

    fn sub_card(_o: &FinObj, s: &FinSub) -> Option<u128> {
        Some(s.0.len() as u128)
    }

    fn is_central(o: &FinObj, s: &FinSub) -> bool {
        match o.grp() {
            Some(g) => g.is_central(&s.0),
            None => true,
        }
    }

    fn normality_witness(o: &FinObj, s: &FinSub, within: &FinSub) -> Option<String> {
        let g = o.grp()?;
        for &a in &within.0 {
            for &h in &s.0 {
                let c = g.mul(g.mul(a, h), g.inv(a));
                if !s.contains(c) {
                    return Some(format!("conjugating {h} by {a} gives {c}"));
                }
            }
        }
        None
    }

    fn act_group(a: &FinAct) -> &FinObj {
        &a.group
    }

    fn act_carrier(a: &FinAct) -> &FinObj {
        &a.carrier
    }

    fn translation(f: &FinMap) -> FinAct {
        let x = f.tgt.g();
        let table = (0..f.src.len()).map(|g| (0..f.tgt.len()).map(|y| x.mul(f.f[g], y)).collect()).collect();
        FinAct { group: f.src.clone(), carrier: f.tgt.clone(), table }
    }

    fn trivial_action(g: &FinObj, x: &FinObj) -> FinAct {
        FinAct { group: g.clone(), carrier: x.clone(), table: vec![(0..x.len()).collect(); g.len()] }
    }

    fn act_pullback(a: &FinAct, phi: &FinMap) -> FinAct {
        FinAct { group: phi.src.clone(), carrier: a.carrier.clone(), table: phi.f.iter().map(|&g| a.table[g].clone()).collect() }
    }

    fn act_transport(a: &FinAct, g_inv: &FinMap, x: &FinMap) -> Option<FinAct> {
        let xi = Self::inverse(x)?;
        let table = g_inv.f.iter().map(|&g| xi.f.iter().map(|&y| x.f[a.table[g][y]]).collect()).collect();
        Some(FinAct { group: g_inv.src.clone(), carrier: x.tgt.clone(), table })
    }

    fn act_on_base(a: &FinAct) -> FinMap {
        FinMap { src: a.group.clone(), tgt: a.carrier.clone(), f: a.table.iter().map(|r| r[0]).collect() }
    }

    fn act_is_valid(a: &FinAct) -> bool {
        let g = a.group.g();
        let n = a.carrier.len();
        if a.table[0].iter().enumerate().any(|(x, &y)| x != y) {
            return false;
        }
        for s in 0..g.order() {
            for t in 0..g.order() {
                let st = g.mul(s, t);
                for x in 0..n {
                    if a.table[s][a.table[t][x]] != a.table[st][x] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn act_by_automorphisms(a: &FinAct) -> bool {
        let Some(x) = a.carrier.grp() else { return true };
        a.table.iter().all(|row| x.is_hom(x, row))
    }

    fn is_invariant(a: &FinAct, f: &FinMap) -> bool {
        a.table.iter().all(|row| (0..f.src.len()).all(|x| f.f[row[x]] == f.f[x]))
    }

    fn is_equivariant_boundary(a: &FinAct, d: &FinMap) -> bool {
        let g = a.group.g();
        (0..g.order()).all(|s| (0..g.order()).all(|t| d.f[g.mul(s, t)] == a.table[s][d.f[t]]))
    }

    fn is_equivariant(a_src: &FinAct, a_tgt: &FinAct, phi: &FinMap, f: &FinMap) -> bool {
        (0..a_src.group.len()).all(|s| (0..f.src.len()).all(|x| f.f[a_src.table[s][x]] == a_tgt.table[phi.f[s]][f.f[x]]))
    }

    fn orbits(a: &FinAct, k: &FinSub, z: &FinSub) -> Result<FinQuot> {
        let n = a.carrier.len();
        let mut uf = UnionFind::new(n);
        merge_by(&mut uf, a, k, z, &z.mask(n))?;
        Ok(FinQuot::from_uf(n, z, &mut uf))
    }

    fn collapse(o: &FinObj, z: &FinSub, b: &FinSub) -> FinQuot {
        let n = o.len();
        let mut uf = UnionFind::new(n);
        let inside: Vec<usize> = z.0.iter().copied().filter(|&x| b.contains(x)).collect();
        for w in inside.windows(2) {
            uf.union(w[0], w[1]);
        }
        if let Some(&x) = inside.first() {
            if z.contains(0) {
                uf.union(0, x);
            }
        }
        FinQuot::from_uf(n, z, &mut uf)
    }

    fn refine(q: &FinQuot, z: &FinSub, a: &FinAct, s: &FinSub) -> Result<FinQuot> {
        let n = q.class.len();
        let mut uf = UnionFind::new(n);
        let mut first = vec![OUTSIDE; q.count];
        for &x in &z.0 {
            let c = q.class[x];
            if c != OUTSIDE {
                if first[c] == OUTSIDE {
                    first[c] = x;
                } else {
                    uf.union(first[c], x);
                }
            }
        }
        merge_by(&mut uf, a, s, z, &z.mask(n))?;
        Ok(FinQuot::from_uf(n, z, &mut uf))
    }

    fn quot_eq(_o: &FinObj, q1: &FinQuot, q2: &FinQuot) -> bool {
        q1 == q2
    }

    fn quot_domain(q: &FinQuot) -> &FinSub {
        &q.z
    }

    fn base_class(_o: &FinObj, q: &FinQuot) -> FinSub {
        let c = q.class[0];
        if c == OUTSIDE {
            return FinSub::default();
        }
        FinSub(q.z.0.iter().copied().filter(|&x| q.class[x] == c).collect())
    }

    fn quot_card(_o: &FinObj, q: &FinQuot) -> Option<u128> {
        Some(q.count as u128)
    }

    fn quot_injective(q: &FinQuot, f: &FinMap) -> bool {
        let mut seen = vec![OUTSIDE; f.tgt.len()];
        for &x in &q.z.0 {
            let y = f.f[x];
            if seen[y] == OUTSIDE {
                seen[y] = q.class[x];
            } else if seen[y] != q.class[x] {
                return false;
            }
        }
        true
    }

    fn quot_describe(_o: &FinObj, q: &FinQuot) -> String {
        if q.count == 1 {
            String::from("*")
        } else {
            format!("{} classes", q.count)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transport_along_a_relabelling() {
        let a = swap_action();
        let g = a.group.clone();
        let x = a.carrier.clone();
        let y = FinObj::set(3);
        let relabel = FinMap::new(x, y, vec![0, 2, 1]).unwrap();
        let t = Fin::act_transport(&a, &Fin::identity(&g), &relabel).unwrap();
        assert_eq!(t.table, a.table);
        let p = Fin::pairing(&g, &[Fin::identity(&g), Fin::identity(&g)]);
        assert_eq!(p.f, vec![0, 3]);
        assert!(Fin::inverse(&p).is_none());
    }

    fn swap_action() -> FinAct {
        let g = FinObj::group(FinGroup::cyclic(2));
        let x = FinObj::set(3);
        FinAct::new(g, x, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap()
    }

    #[test]
    fn orbits_of_a_swap() {
        let a = swap_action();
        assert!(Fin::act_is_valid(&a));
        let q = Fin::orbits(&a, &Fin::full(&a.group), &Fin::full(&a.carrier)).unwrap();
        assert_eq!(q.count, 2);
        assert_eq!(q.classes(), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn unstable_subset_is_rejected() {
        let a = swap_action();
        assert!(Fin::orbits(&a, &Fin::full(&a.group), &FinSub(vec![0, 1])).is_err());
    }

    #[test]
    fn translation_orbits_are_cosets() {
        let g = FinGroup::symmetric(3);
        let s3 = FinObj::group(g.clone());
        let (sub, emb) = g.subgroup(&g.generate(&[1]));
        let inc = FinMap::new(FinObj::group(sub), s3.clone(), emb).unwrap();
        let act = Fin::translation(&inc);
        let q = Fin::orbits(&act, &Fin::full(&act.group), &Fin::full(&s3)).unwrap();
        assert_eq!(q.count * inc.src.len(), 6);
    }

    #[test]
    fn refine_merges_and_restricts() {
        let z4 = FinObj::group(FinGroup::cyclic(4));
        let id = Fin::identity(&z4);
        let act = Fin::translation(&id);
        let q0 = Fin::orbits(&act, &FinSub(vec![0]), &Fin::full(&z4)).unwrap();
        assert_eq!(q0.count, 4);
        let q1 = Fin::refine(&q0, &Fin::full(&z4), &act, &FinSub(vec![2])).unwrap();
        assert_eq!(q1.count, 2);
        assert_eq!(Fin::base_class(&z4, &q1), FinSub(vec![0, 2]));
        let q2 = Fin::orbits(&act, &FinSub(vec![0, 2]), &Fin::full(&z4)).unwrap();
        assert!(Fin::quot_eq(&z4, &q1, &q2));
    }

    #[test]
    fn collapse_joins_base() {
        let x = FinObj::set(4);
        let q = Fin::collapse(&x, &Fin::full(&x), &FinSub(vec![2, 3]));
        assert_eq!(q.classes(), vec![vec![0, 2, 3], vec![1]]);
    }

    #[test]
    fn injectivity_on_classes() {
        let a = swap_action();
        let q = Fin::orbits(&a, &Fin::full(&a.group), &Fin::full(&a.carrier)).unwrap();
        let f = FinMap::new(a.carrier.clone(), FinObj::set(2), vec![0, 1, 1]).unwrap();
        assert!(Fin::quot_injective(&q, &f));
        let g = FinMap::new(a.carrier.clone(), FinObj::set(2), vec![0, 0, 0]).unwrap();
        assert!(!Fin::quot_injective(&q, &g));
    }
}
