use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::model::{PointSet, RankedPosetModel};
use super::sheaf::GroupSheaf;
use super::theory::{check_pair, check_transfer, check_triple, Pair, SupportTheory};
use crate::algebra::FinGroup;
use crate::world::{Fin, FinAct, FinMap, FinObj, World};
use crate::{Error, Result};

/// Torsors under a sheaf of finite groups, as a theory with supports whose
/// only nontrivial degrees are 0 and 1.
///
/// `Π_0(U, Z)` is the set of torsors on `U` trivialized off `Z`, up to
/// isomorphism; `Π_1(U, Z)` is the group of sections trivial off `Z`.
/// A torsor is stored as a cocycle on the covering pairs `x < y`: the
/// chosen point of `P_x` goes to `h_{xy}` times the chosen point of `P_y`.
#[derive(Debug)]
pub struct TorsorTheory {
    sheaf: GroupSheaf,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
    cap: usize,
    cache: RefCell<BTreeMap<Pair, Rc<TorsorData>>>,
}

/// Enumerated homotopy of one pair.
#[derive(Clone, Debug)]
pub struct TorsorData {
    pub cocycles: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    /// Class of each cocycle; the trivial cocycle is in class 0.
    pub class: Vec<usize>,
    /// First cocycle of each class.
    pub reps: Vec<usize>,
    /// Sections trivial off the support, one entry per point of the model.
    pub sections: Vec<Vec<usize>>,
    section_index: BTreeMap<Vec<usize>, usize>,
    pub pi0: FinObj,
    pub pi1: FinObj,
}

impl TorsorData {
    pub fn class_of(&self, cocycle: &[usize]) -> Option<usize> {
        self.index.get(cocycle).map(|&i| self.class[i])
    }

    pub fn section_of(&self, s: &[usize]) -> Option<usize> {
        self.section_index.get(s).copied()
    }
}

impl TorsorTheory {
    /// `cap` bounds the number of cocycles and sections enumerated per pair.
    pub fn new(sheaf: &GroupSheaf, cap: usize) -> Self {
        let m = sheaf.model();
        let edges = m.covers();
        let mut out = vec![Vec::new(); m.len()];
        let mut into = vec![Vec::new(); m.len()];
        for (i, &(x, y)) in edges.iter().enumerate() {
            out[x].push(i);
            into[y].push(i);
        }
        TorsorTheory { sheaf: sheaf.clone(), edges, out, into, cap, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn sheaf(&self) -> &GroupSheaf {
        &self.sheaf
    }

    /// Covering pairs, in the order used by cocycles.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn data(&self, at: Pair) -> Result<Rc<TorsorData>> {
        if let Some(d) = self.cache.borrow().get(&at) {
            return Ok(d.clone());
        }
        check_pair(self.model(), at)?;
        let d = Rc::new(self.compute(at)?);
        self.cache.borrow_mut().insert(at, d.clone());
        Ok(d)
    }

    fn g(&self, x: usize) -> &FinGroup {
        self.sheaf.stalk(x)
    }

    fn compute(&self, at: Pair) -> Result<TorsorData> {
        let cocycles = self.cocycles(at)?;
        let index: BTreeMap<Vec<usize>, usize> = cocycles.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut parent: Vec<usize> = (0..cocycles.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, c) in cocycles.iter().enumerate() {
            for x in at.z.iter() {
                for k in self.g(x).generating_set() {
                    let j = index[&self.gauge(at.u, c, x, k)];
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut class = vec![0; cocycles.len()];
        let mut reps = Vec::new();
        let mut ids = BTreeMap::new();
        for i in 0..cocycles.len() {
            let r = find(&mut parent, i);
            class[i] = *ids.entry(r).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            });
        }
        let pi0 = if reps.len() == 1 { Fin::point() } else { FinObj::set(reps.len()) };
        let mut sections = self.sections(at)?;
        sections.sort();
        let factors = self.sheaf.stalks().to_vec();
        let pi1 = FinObj::group(FinGroup::from_tuples(&factors, &sections)?);
        let section_index = sections.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(TorsorData { cocycles, index, class, reps, sections, section_index, pi0, pi1 })
    }

    /// Changes the chosen point at `x` by `k`.
    fn gauge(&self, u: PointSet, c: &[usize], x: usize, k: usize) -> Vec<usize> {
        let mut c = c.to_vec();
        for &e in &self.out[x] {
            let y = self.edges[e].1;
            c[e] = self.g(y).mul(self.sheaf.res(x, y, k), c[e]);
        }
        let kinv = self.g(x).inv(k);
        for &e in self.into[x].iter().filter(|&&e| u.contains(self.edges[e].0)) {
            c[e] = self.g(x).mul(c[e], kinv);
        }
        c
    }

    fn cocycles(&self, at: Pair) -> Result<Vec<Vec<usize>>> {
        let m = self.model();
        let order: Vec<usize> = m.sorted(at.z);
        let n = m.len();
        let mut st = Search { h: vec![0; self.edges.len()], comp: vec![vec![0; n]; n], out: Vec::new(), visited: 0 };
        self.extend_cocycle(at, &order, 0, &mut st)?;
        Ok(st.out)
    }

    fn extend_cocycle(&self, at: Pair, order: &[usize], i: usize, st: &mut Search) -> Result<()> {
        st.visited += 1;
        if st.visited > self.cap {
            return Err(Error::limit(format!("more than {} partial cocycles on {:?}", self.cap, at)));
        }
        let Some(&x) = order.get(i) else {
            st.out.push(st.h.clone());
            return Ok(());
        };
        let m = self.model();
        let es: Vec<usize> = self.out[x].iter().copied().filter(|&e| at.u.contains(self.edges[e].1)).collect();
        let sizes: Vec<usize> = es.iter().map(|&e| self.g(self.edges[e].1).order()).collect();
        let total: usize = sizes.iter().product();
        let above: Vec<usize> = at.u.iter().filter(|&z| m.lt(x, z)).collect();
        'assign: for a in 0..total {
            let mut r = a;
            for (k, &e) in es.iter().enumerate() {
                st.h[e] = r % sizes[k];
                r /= sizes[k];
            }
            for &z in &above {
                let mut val = None;
                for &e in &es {
                    let y = self.edges[e].1;
                    if !m.le(y, z) {
                        continue;
                    }
                    let rest = if y == z { 0 } else { st.comp[y][z] };
                    let v = self.g(z).mul(self.sheaf.res(y, z, st.h[e]), rest);
                    match val {
                        None => val = Some(v),
                        Some(w) if w != v => continue 'assign,
                        _ => {}
                    }
                }
                st.comp[x][z] = val.expect("some cover lies below every point above");
            }
            self.extend_cocycle(at, order, i + 1, st)?;
        }
        for &e in &es {
            st.h[e] = 0;
        }
        for &z in &above {
            st.comp[x][z] = 0;
        }
        Ok(())
    }

    fn sections(&self, at: Pair) -> Result<Vec<Vec<usize>>> {
        let m = self.model();
        let free: Vec<usize> = m.minimal(at.u).inter(at.z).iter().collect();
        let sizes: Vec<usize> = free.iter().map(|&x| self.g(x).order()).collect();
        let total = sizes.iter().try_fold(1usize, |a, &s| a.checked_mul(s)).filter(|&t| t <= self.cap);
        let Some(total) = total else {
            return Err(Error::limit(format!("more than {} candidate sections on {:?}", self.cap, at)));
        };
        let mut by_depth = m.sorted(at.u);
        by_depth.reverse();
        let mut out = Vec::new();
        'cand: for a in 0..total {
            let mut s = vec![0; m.len()];
            let mut r = a;
            for (k, &x) in free.iter().enumerate() {
                s[x] = r % sizes[k];
                r /= sizes[k];
            }
            for &y in &by_depth {
                let mut val = None;
                for &e in &self.into[y] {
                    let x = self.edges[e].0;
                    if !at.u.contains(x) {
                        continue;
                    }
                    let v = self.sheaf.res(x, y, s[x]);
                    match val {
                        None => val = Some(v),
                        Some(w) if w != v => continue 'cand,
                        _ => {}
                    }
                }
                if let Some(v) = val {
                    s[y] = v;
                }
                if !at.z.contains(y) && s[y] != 0 {
                    continue 'cand;
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Torsors on the whole model, up to isomorphism.
    pub fn h1(&self) -> Result<usize> {
        let all = self.model().all();
        Ok(self.data(Pair::whole(all))?.reps.len())
    }
}

struct Search {
    h: Vec<usize>,
    comp: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
    visited: usize,
}

impl SupportTheory for TorsorTheory {
    type W = Fin;

    fn model(&self) -> &RankedPosetModel {
        self.sheaf.model()
    }

    fn top(&self) -> usize {
        1
    }

    fn pi(&self, at: Pair, n: usize) -> Result<FinObj> {
        match n {
            0 => Ok(self.data(at)?.pi0.clone()),
            1 => Ok(self.data(at)?.pi1.clone()),
            _ => Ok(Fin::point()),
        }
    }

    fn transfer(&self, from: Pair, to: Pair, n: usize) -> Result<FinMap> {
        check_transfer(self.model(), from, to)?;
        if n > 1 {
            return Ok(Fin::zero_map(&Fin::point(), &Fin::point()));
        }
        let (s, t) = (self.data(from)?, self.data(to)?);
        if n == 1 {
            let f = s
                .sections
                .iter()
                .map(|sec| {
                    let r: Vec<usize> = (0..sec.len()).map(|x| if to.u.contains(x) { sec[x] } else { 0 }).collect();
                    t.section_of(&r).ok_or_else(|| Error::invalid("restricted section is not trivial off the support"))
                })
                .collect::<Result<Vec<_>>>()?;
            return FinMap::new(s.pi1.clone(), t.pi1.clone(), f);
        }
        let f = s
            .reps
            .iter()
            .map(|&i| {
                let c = &s.cocycles[i];
                let r: Vec<usize> = (0..c.len()).map(|e| if to.u.contains(self.edges[e].0) { c[e] } else { 0 }).collect();
                t.class_of(&r).ok_or_else(|| Error::invalid("restricted cocycle is not trivial off the support"))
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(s.pi0.clone(), t.pi0.clone(), f)
    }

    fn boundary(&self, u: PointSet, t: PointSet, t_small: PointSet, n: usize) -> Result<FinMap> {
        check_triple(self.model(), u, t, t_small)?;
        if n == 0 {
            return Ok(Fin::act_on_base(&self.boundary_action(u, t, t_small)?));
        }
        let base = self.pi(Pair::new(u.minus(t_small), t.minus(t_small)), n + 1)?;
        Ok(Fin::zero_map(&base, &self.pi(Pair::new(u, t_small), n)?))
    }

    fn boundary_action(&self, u: PointSet, t: PointSet, t_small: PointSet) -> Result<FinAct> {
        check_triple(self.model(), u, t, t_small)?;
        let g = self.data(Pair::new(u.minus(t_small), t.minus(t_small)))?;
        let fib = self.data(Pair::new(u, t_small))?;
        let mut table = Vec::new();
        for sec in &g.sections {
            let mut row = Vec::new();
            for &i in &fib.reps {
                let mut c = fib.cocycles[i].clone();
                for (e, &(x, y)) in self.edges.iter().enumerate() {
                    if t_small.contains(x) && u.contains(y) && !t_small.contains(y) {
                        c[e] = self.g(y).mul(c[e], self.g(y).inv(sec[y]));
                    }
                }
                row.push(fib.class_of(&c).ok_or_else(|| Error::invalid("twisted cocycle left the enumeration"))?);
            }
            table.push(row);
        }
        FinAct::new(g.pi1.clone(), fib.pi0.clone(), table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coniveau::theory::check_theory;

    fn circle() -> RankedPosetModel {
        RankedPosetModel::from_ids(&[("a", 0), ("b", 0), ("s", 1), ("t", 1)], &[("s", "a"), ("s", "b"), ("t", "a"), ("t", "b")]).unwrap()
    }

    fn conjugacy_classes(g: &FinGroup) -> usize {
        let mut seen = vec![false; g.order()];
        let mut n = 0;
        for x in 0..g.order() {
            if !seen[x] {
                n += 1;
                for y in 0..g.order() {
                    seen[g.mul(g.mul(y, x), g.inv(y))] = true;
                }
            }
        }
        n
    }

    #[test]
    fn local_models_have_no_torsors() {
        for m in [RankedPosetModel::dvr(), RankedPosetModel::chain(2)] {
            let th = TorsorTheory::new(&GroupSheaf::constant(&m, &FinGroup::symmetric(3)), 1 << 16);
            assert_eq!(th.h1().unwrap(), 1);
        }
    }

    #[test]
    fn torsors_on_a_circle_are_conjugacy_classes() {
        let m = circle();
        for g in [FinGroup::cyclic(2), FinGroup::symmetric(3), FinGroup::quaternion()] {
            let th = TorsorTheory::new(&GroupSheaf::constant(&m, &g), 1 << 20);
            assert_eq!(th.h1().unwrap(), conjugacy_classes(&g));
        }
    }

    #[test]
    fn sections_with_support() {
        let m = RankedPosetModel::dvr();
        let th = TorsorTheory::new(&GroupSheaf::skyscraper(&m, 1, &FinGroup::cyclic(3)), 1 << 12);
        assert_eq!(Fin::cardinality(&th.pi(Pair::new(m.all(), PointSet::single(1)), 1).unwrap()), Some(3));
        let c = GroupSheaf::constant(&m, &FinGroup::cyclic(3));
        let th = TorsorTheory::new(&c, 1 << 12);
        assert!(Fin::is_point(&th.pi(Pair::new(m.all(), PointSet::single(1)), 1).unwrap()));
    }

    #[test]
    fn torsor_theories_satisfy_the_axioms() {
        let m = circle();
        let sheaves = [
            GroupSheaf::constant(&m, &FinGroup::symmetric(3)),
            GroupSheaf::skyscraper(&m, 2, &FinGroup::cyclic(2)),
            GroupSheaf::constant(&RankedPosetModel::dedekind(2), &FinGroup::cyclic(3)),
        ];
        for f in &sheaves {
            let rep = check_theory(&TorsorTheory::new(f, 1 << 20), 1 << 12).unwrap();
            assert!(rep.valid(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let th = TorsorTheory::new(&GroupSheaf::constant(&circle(), &FinGroup::symmetric(3)), 10);
        assert!(matches!(th.h1(), Err(Error::Limit(_))));
    }
}
