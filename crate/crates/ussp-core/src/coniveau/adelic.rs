use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::sheaf::GroupSheaf;
use super::theory::Pair;
use super::torsor::TorsorTheory;
use crate::algebra::group::{product_coords, product_index};
use crate::algebra::FinGroup;
use crate::{Error, Result};

/// `∏_x G(U_x)  \  ∏_x G(U_x - {x})  /  ∏_η G_η` over a model of dimension at
/// most one, with classes of all adelic tuples.
///
/// A tuple has one entry per covering pair `(x, η)`, in the order of
/// `edges`; `∏_x G(U_x)` acts on the left through restriction and the
/// generic groups act diagonally on the right.
#[derive(Clone, Debug)]
pub struct DoubleCosets {
    pub edges: Vec<(usize, usize)>,
    pub factors: Vec<FinGroup>,
    /// Class of each tuple, by mixed-radix index; the identity is in class 0.
    pub class: Vec<usize>,
    /// First tuple of each class.
    pub reps: Vec<usize>,
}

impl DoubleCosets {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn tuple(&self, i: usize) -> Vec<usize> {
        product_coords(&self.factors, i)
    }

    pub fn class_of(&self, tuple: &[usize]) -> usize {
        self.class[product_index(&self.factors, tuple)]
    }
}

/// Double cosets on any model with `dim <= 1`.
pub fn double_cosets(g: &GroupSheaf, cap: usize) -> Result<DoubleCosets> {
    let m = g.model();
    if m.dim() > 1 {
        return Err(Error::invalid(format!("double cosets need dimension at most 1, the model has dimension {}", m.dim())));
    }
    let edges = m.covers();
    let factors: Vec<FinGroup> = edges.iter().map(|&(_, y)| g.stalk(y).clone()).collect();
    let total = factors.iter().try_fold(1usize, |a, f| a.checked_mul(f.order()).filter(|&t| t <= cap));
    let Some(total) = total else {
        return Err(Error::limit(format!("more than {cap} adelic tuples")));
    };
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut moves: Vec<Vec<(usize, usize, bool)>> = Vec::new();
    for x in m.with_codim(1).iter() {
        for k in g.stalk(x).generating_set() {
            moves.push(edges.iter().enumerate().filter(|(_, e)| e.0 == x).map(|(i, &(_, y))| (i, g.res(x, y, k), true)).collect());
        }
    }
    for y in m.with_codim(0).iter() {
        for k in g.stalk(y).generating_set() {
            let inv = g.stalk(y).inv(k);
            moves.push(edges.iter().enumerate().filter(|(_, e)| e.1 == y).map(|(i, _)| (i, inv, false)).collect());
        }
    }
    for i in 0..total {
        let t = product_coords(&factors, i);
        for mv in &moves {
            let mut s = t.clone();
            for &(e, k, left) in mv {
                let f = &factors[e];
                s[e] = if left { f.mul(k, s[e]) } else { f.mul(s[e], k) };
            }
            let j = product_index(&factors, &s);
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class = alloc::vec![0; total];
    let mut reps = Vec::new();
    let mut ids = BTreeMap::new();
    for i in 0..total {
        let r = find(&mut parent, i);
        class[i] = *ids.entry(r).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
    }
    Ok(DoubleCosets { edges, factors, class, reps })
}

/// `G(#O_X) \ G(#A_X) / G(K)` for an irreducible model of dimension at most 1.
pub fn adelic_double_coset(g: &GroupSheaf, cap: usize) -> Result<DoubleCosets> {
    let m = g.model();
    if m.dim() > 1 {
        return Err(Error::invalid(format!("the adelic formula needs dimension 1, the model has dimension {}", m.dim())));
    }
    if !m.is_irreducible() || m.with_codim(0).len() != 1 {
        return Err(Error::invalid("the adelic formula needs an irreducible model"));
    }
    double_cosets(g, cap)
}

/// Torsor classes against double cosets, through the cocycle entries on the
/// covering pairs.
#[derive(Clone, Debug)]
pub struct TorsorCosetMap {
    pub torsor_classes: usize,
    pub cosets: usize,
    /// `map[c]`: the double coset of torsor class `c`.
    pub map: Vec<usize>,
    pub well_defined: bool,
}

impl TorsorCosetMap {
    pub fn is_bijection(&self) -> bool {
        if !self.well_defined || self.torsor_classes != self.cosets {
            return false;
        }
        let mut seen = alloc::vec![false; self.cosets];
        self.map.iter().all(|&c| !core::mem::replace(&mut seen[c], true))
    }
}

pub fn torsor_coset_map(th: &TorsorTheory, cosets: &DoubleCosets) -> Result<TorsorCosetMap> {
    let m = th.sheaf().model();
    let data = th.data(Pair::whole(m.all()))?;
    let pos: Vec<usize> = cosets
        .edges
        .iter()
        .map(|e| th.edges().iter().position(|f| f == e).ok_or_else(|| Error::invalid("torsor edges differ from the adelic edges")))
        .collect::<Result<_>>()?;
    let mut map: Vec<Option<usize>> = alloc::vec![None; data.reps.len()];
    let mut well_defined = true;
    for (i, c) in data.cocycles.iter().enumerate() {
        let t: Vec<usize> = pos.iter().map(|&e| c[e]).collect();
        let k = cosets.class_of(&t);
        match map[data.class[i]] {
            None => map[data.class[i]] = Some(k),
            Some(j) if j != k => well_defined = false,
            _ => {}
        }
    }
    Ok(TorsorCosetMap {
        torsor_classes: data.reps.len(),
        cosets: cosets.count(),
        map: map.into_iter().map(|c| c.expect("every class has a cocycle")).collect(),
        well_defined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coniveau::model::RankedPosetModel;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    const CAP: usize = 1 << 16;

    /// Orbits of the full group `∏ G_x × ∏ G_η` on tuples, element by element.
    fn brute_force(g: &GroupSheaf) -> usize {
        let m = g.model();
        let edges = m.covers();
        let factors: Vec<FinGroup> = edges.iter().map(|&(_, y)| g.stalk(y).clone()).collect();
        let closed: Vec<usize> = m.sorted(m.with_codim(1));
        let generic: Vec<usize> = m.sorted(m.with_codim(0));
        let acting: Vec<FinGroup> = closed.iter().chain(&generic).map(|&x| g.stalk(x).clone()).collect();
        let total: usize = factors.iter().map(FinGroup::order).product();
        let n_act: usize = acting.iter().map(FinGroup::order).product();
        let mut seen = BTreeSet::new();
        let mut orbits = 0;
        for i in 0..total {
            if seen.contains(&i) {
                continue;
            }
            orbits += 1;
            let t = product_coords(&factors, i);
            for a in 0..n_act {
                let ks = product_coords(&acting, a);
                let s: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .map(|(e, &(x, y))| {
                        let o = ks[closed.iter().position(|&c| c == x).unwrap()];
                        let k = ks[closed.len() + generic.iter().position(|&c| c == y).unwrap()];
                        let f = &factors[e];
                        f.mul(f.mul(g.res(x, y, o), t[e]), f.inv(k))
                    })
                    .collect();
                seen.insert(product_index(&factors, &s));
            }
        }
        orbits
    }

    fn s3_a3(points: usize) -> GroupSheaf {
        let m = RankedPosetModel::dedekind(points);
        let s3 = FinGroup::symmetric(3);
        let a3: Vec<usize> = (0..6).filter(|&a| s3.element_order(a) != 2).collect();
        let (sub, emb) = s3.subgroup(&a3);
        let mut stalks = vec![s3.clone()];
        let mut res = BTreeMap::new();
        for i in 1..=points {
            stalks.push(sub.clone());
            res.insert((i, 0), emb.clone());
        }
        GroupSheaf::new(&m, stalks, res).unwrap()
    }

    #[test]
    fn s3_over_a3_at_two_points() {
        let g = s3_a3(2);
        assert_eq!(brute_force(&g), 2);
        let d = adelic_double_coset(&g, CAP).unwrap();
        assert_eq!(d.count(), 2);
        let th = TorsorTheory::new(&g, CAP);
        let map = torsor_coset_map(&th, &d).unwrap();
        assert!(map.is_bijection(), "{map:?}");
    }

    #[test]
    fn constant_groups_have_one_class() {
        for k in 0..=3 {
            let m = RankedPosetModel::dedekind(k);
            let g = GroupSheaf::constant(&m, &FinGroup::symmetric(3));
            let d = double_cosets(&g, CAP).unwrap();
            assert_eq!(d.count(), 1);
            assert_eq!(brute_force(&g), 1);
        }
    }

    #[test]
    fn trivial_closed_stalks() {
        let m = RankedPosetModel::dedekind(2);
        let z3 = FinGroup::cyclic(3);
        let mut res = BTreeMap::new();
        res.insert((1, 0), vec![0]);
        res.insert((2, 0), vec![0]);
        let g = GroupSheaf::new(&m, vec![z3, FinGroup::trivial(), FinGroup::trivial()], res).unwrap();
        let d = adelic_double_coset(&g, CAP).unwrap();
        assert_eq!(d.count(), 3);
        assert_eq!(brute_force(&g), 3);
        let th = TorsorTheory::new(&g, CAP);
        assert!(torsor_coset_map(&th, &d).unwrap().is_bijection());
    }

    #[test]
    fn dimension_two_is_rejected() {
        let m = RankedPosetModel::chain(2);
        let g = GroupSheaf::constant(&m, &FinGroup::cyclic(2));
        assert!(adelic_double_coset(&g, CAP).is_err());
        let two = RankedPosetModel::from_ids(&[("a", 0), ("b", 0), ("s", 1)], &[("s", "a"), ("s", "b")]).unwrap();
        assert!(adelic_double_coset(&GroupSheaf::constant(&two, &FinGroup::cyclic(2)), CAP).is_err());
        assert!(double_cosets(&GroupSheaf::constant(&two, &FinGroup::cyclic(2)), CAP).is_ok());
    }
}
