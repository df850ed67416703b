use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::model::{PointSet, RankedPosetModel};
use crate::algebra::{Ab, FinGroup, Hom, Int, Mat};
use crate::{Error, Result};

/// Orders pairs `x < y` so that each pair comes after every pair spanning a
/// shorter codimension gap.
fn pairs_by_gap(m: &RankedPosetModel) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..m.len()).flat_map(|x| m.star(x).iter().filter(move |&y| y != x).map(move |y| (x, y))).collect();
    pairs.sort_by_key(|&(x, y)| (m.codim(x) - m.codim(y), x, y));
    pairs
}

/// Closes restrictions given on covering pairs under composition and checks
/// that every pair gets one well-defined map.
fn close_restrictions<M: Clone>(
    m: &RankedPosetModel,
    given: &BTreeMap<(usize, usize), M>,
    compose: impl Fn(&M, &M) -> M,
    eq: impl Fn(&M, &M) -> bool,
) -> Result<BTreeMap<(usize, usize), M>> {
    let covers = m.covers();
    for &(x, y) in given.keys() {
        if !m.lt(x, y) {
            return Err(Error::invalid(format!("restriction {} -> {} is not along a strict generization", m.id(x), m.id(y))));
        }
    }
    let mut res: BTreeMap<(usize, usize), M> = BTreeMap::new();
    for &(x, y) in &covers {
        let r = given.get(&(x, y)).ok_or_else(|| Error::invalid(format!("missing restriction {} -> {}", m.id(x), m.id(y))))?;
        res.insert((x, y), r.clone());
    }
    for (x, y) in pairs_by_gap(m) {
        let mut found: Option<M> = res.get(&(x, y)).cloned();
        for &(a, c) in &covers {
            if a != x || !m.le(c, y) || c == y {
                continue;
            }
            let r = compose(&res[&(c, y)], &res[&(x, c)]);
            match &found {
                None => found = Some(r),
                Some(f) if !eq(f, &r) => {
                    return Err(Error::invalid(format!("restrictions from {} to {} depend on the path", m.id(x), m.id(y))));
                }
                _ => {}
            }
        }
        let f = found.expect("every strict pair factors through a cover");
        if let Some(g) = given.get(&(x, y)) {
            if !eq(g, &f) {
                return Err(Error::invalid(format!("given restriction {} -> {} disagrees with the composite", m.id(x), m.id(y))));
            }
        }
        res.insert((x, y), f);
    }
    Ok(res)
}

/// A sheaf of finitely generated abelian groups on a model: a stalk per
/// point and a restriction `F_x -> F_y` for every `x <= y`.
#[derive(Clone, Debug)]
pub struct AbSheaf {
    model: RankedPosetModel,
    stalks: Vec<Ab>,
    res: BTreeMap<(usize, usize), Hom>,
}

impl AbSheaf {
    /// `restrictions` must cover every covering pair; other pairs are
    /// optional and checked against the composites.
    pub fn new(model: &RankedPosetModel, stalks: Vec<Ab>, restrictions: BTreeMap<(usize, usize), Hom>) -> Result<Self> {
        if stalks.len() != model.len() {
            return Err(Error::invalid("one stalk per point is required"));
        }
        for (&(x, y), h) in &restrictions {
            if x >= model.len() || y >= model.len() || h.src != stalks[x] || h.tgt != stalks[y] {
                return Err(Error::invalid(format!("restriction ({x}, {y}) does not match the stalks")));
            }
        }
        let res = close_restrictions(model, &restrictions, |g, f| g.compose(f), |a, b| a.m == b.m)?;
        Ok(AbSheaf { model: model.clone(), stalks, res })
    }

    pub fn constant(model: &RankedPosetModel, a: &Ab) -> Self {
        Self::twisted(model, a, 1)
    }

    /// Stalk `a` everywhere, restriction `x -> y` multiplication by
    /// `k^(δ(x) - δ(y))`.
    pub fn twisted(model: &RankedPosetModel, a: &Ab, k: Int) -> Self {
        let stalks = vec![a.clone(); model.len()];
        let res = model
            .covers()
            .into_iter()
            .map(|(x, y)| {
                let e = (model.codim(x) - model.codim(y)) as u32;
                let s = k.pow(e);
                let mut m = Mat::identity(a.dim());
                for i in 0..a.dim() {
                    m.set(i, i, s);
                }
                ((x, y), Hom::new(a.clone(), a.clone(), m).expect("scalar endomorphism"))
            })
            .collect();
        Self::new(model, stalks, res).expect("twisted constant sheaf")
    }

    /// `a` on the closed set `c`, zero elsewhere.
    pub fn on_closed(model: &RankedPosetModel, c: PointSet, a: &Ab) -> Result<Self> {
        if !model.is_closed_in(c, model.all()) {
            return Err(Error::invalid("support of the sheaf is not closed"));
        }
        Ok(Self::indicator(model, c, a))
    }

    /// `a` on the open set `v`, extended by zero.
    pub fn extension_by_zero(model: &RankedPosetModel, v: PointSet, a: &Ab) -> Result<Self> {
        if !model.is_open(v) {
            return Err(Error::invalid("extension by zero from a set that is not open"));
        }
        Ok(Self::indicator(model, v, a))
    }

    fn indicator(model: &RankedPosetModel, s: PointSet, a: &Ab) -> Self {
        let stalks: Vec<Ab> = (0..model.len()).map(|x| if s.contains(x) { a.clone() } else { Ab::trivial() }).collect();
        let res = model
            .covers()
            .into_iter()
            .map(|(x, y)| {
                let h = if s.contains(x) && s.contains(y) { Hom::identity(a.clone()) } else { Hom::zero(stalks[x].clone(), stalks[y].clone()) };
                ((x, y), h)
            })
            .collect();
        Self::new(model, stalks, res).expect("indicator sheaf")
    }

    /// `x_* a`: stalk `a` at every specialization of `x`.
    pub fn skyscraper(model: &RankedPosetModel, x: usize, a: &Ab) -> Self {
        Self::indicator(model, model.closure(x), a)
    }

    pub fn zero(model: &RankedPosetModel) -> Self {
        Self::indicator(model, PointSet::EMPTY, &Ab::trivial())
    }

    pub fn direct_sum(parts: &[AbSheaf]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::invalid("empty direct sum of sheaves"));
        };
        let model = &first.model;
        if parts.iter().any(|p| p.model != *model) {
            return Err(Error::invalid("summands live on different models"));
        }
        let mut stalks = Vec::new();
        let mut sums = Vec::new();
        for x in 0..model.len() {
            let (s, i, p) = Ab::direct_sum(&parts.iter().map(|f| f.stalks[x].clone()).collect::<Vec<_>>());
            stalks.push(s.clone());
            sums.push((s, i, p));
        }
        let mut res = BTreeMap::new();
        for (x, y) in model.covers() {
            let mut m = Mat::zeros(stalks[y].dim(), stalks[x].dim());
            for (k, f) in parts.iter().enumerate() {
                let part = sums[y].1[k].mul(&f.res(x, y).m).mul(&sums[x].2[k]);
                m = add(&m, &part);
            }
            res.insert((x, y), Hom::new(stalks[x].clone(), stalks[y].clone(), m)?);
        }
        Self::new(model, stalks, res)
    }

    pub fn model(&self) -> &RankedPosetModel {
        &self.model
    }

    pub fn stalk(&self, x: usize) -> &Ab {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[Ab] {
        &self.stalks
    }

    /// `F_x -> F_y` for `x <= y`.
    pub fn res(&self, x: usize, y: usize) -> Hom {
        if x == y {
            return Hom::identity(self.stalks[x].clone());
        }
        self.res.get(&(x, y)).cloned().unwrap_or_else(|| panic!("no restriction from {x} to {y}"))
    }

    /// Points with a nonzero stalk.
    pub fn support(&self) -> PointSet {
        PointSet::from_points((0..self.model.len()).filter(|&x| !self.stalks[x].is_trivial()))
    }
}

pub(crate) fn add(a: &Mat, b: &Mat) -> Mat {
    let mut m = a.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            m.set(r, c, m.get(r, c) + b.get(r, c));
        }
    }
    m
}

/// A morphism of abelian sheaves, one homomorphism per stalk.
#[derive(Clone, Debug)]
pub struct AbSheafMap {
    pub maps: Vec<Hom>,
}

impl AbSheafMap {
    /// The stalk maps commute with every restriction.
    pub fn is_natural(&self, src: &AbSheaf, tgt: &AbSheaf) -> bool {
        let m = src.model();
        (0..m.len()).all(|x| {
            self.maps[x].src == *src.stalk(x)
                && self.maps[x].tgt == *tgt.stalk(x)
                && m.star(x).iter().all(|y| tgt.res(x, y).compose(&self.maps[x]).m == self.maps[y].compose(&src.res(x, y)).m)
        })
    }

    pub fn compose(&self, first: &AbSheafMap) -> AbSheafMap {
        AbSheafMap { maps: self.maps.iter().zip(&first.maps).map(|(g, f)| g.compose(f)).collect() }
    }

    pub fn identity(f: &AbSheaf) -> AbSheafMap {
        AbSheafMap { maps: f.stalks().iter().map(|a| Hom::identity(a.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Hom::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|h| h.is_injective() && h.is_surjective())
    }
}

/// A sheaf of finite groups on a model.
#[derive(Clone, Debug)]
pub struct GroupSheaf {
    model: RankedPosetModel,
    stalks: Vec<FinGroup>,
    res: BTreeMap<(usize, usize), Vec<usize>>,
}

impl GroupSheaf {
    /// `restrictions` are homomorphism tables `G_x -> G_y`, at least on every
    /// covering pair.
    pub fn new(model: &RankedPosetModel, stalks: Vec<FinGroup>, restrictions: BTreeMap<(usize, usize), Vec<usize>>) -> Result<Self> {
        if stalks.len() != model.len() {
            return Err(Error::invalid("one stalk per point is required"));
        }
        for (&(x, y), f) in &restrictions {
            if x >= model.len() || y >= model.len() || f.len() != stalks[x].order() || f.iter().any(|&v| v >= stalks[y].order()) {
                return Err(Error::invalid(format!("restriction ({x}, {y}) does not match the stalks")));
            }
            if !stalks[x].is_hom(&stalks[y], f) {
                return Err(Error::invalid(format!("restriction {} -> {} is not a homomorphism", model.id(x), model.id(y))));
            }
        }
        let res = close_restrictions(model, &restrictions, |g, f| f.iter().map(|&a| g[a]).collect(), |a, b| a == b)?;
        Ok(GroupSheaf { model: model.clone(), stalks, res })
    }

    pub fn constant(model: &RankedPosetModel, g: &FinGroup) -> Self {
        let res = model.covers().into_iter().map(|e| (e, (0..g.order()).collect())).collect();
        Self::new(model, vec![g.clone(); model.len()], res).expect("constant group sheaf")
    }

    /// `x_* g`.
    pub fn skyscraper(model: &RankedPosetModel, x: usize, g: &FinGroup) -> Self {
        let c = model.closure(x);
        let stalks: Vec<FinGroup> = (0..model.len()).map(|y| if c.contains(y) { g.clone() } else { FinGroup::trivial() }).collect();
        let res = model
            .covers()
            .into_iter()
            .map(|(a, b)| {
                let t = if c.contains(a) && c.contains(b) { (0..g.order()).collect() } else { vec![0; stalks[a].order()] };
                ((a, b), t)
            })
            .collect();
        Self::new(model, stalks, res).expect("skyscraper group sheaf")
    }

    pub fn trivial(model: &RankedPosetModel) -> Self {
        Self::constant(model, &FinGroup::trivial())
    }

    pub fn model(&self) -> &RankedPosetModel {
        &self.model
    }

    pub fn stalk(&self, x: usize) -> &FinGroup {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[FinGroup] {
        &self.stalks
    }

    /// `ρ_{xy}(g)` for `x <= y`.
    pub fn res(&self, x: usize, y: usize, g: usize) -> usize {
        if x == y {
            return g;
        }
        self.res[&(x, y)][g]
    }

    pub fn res_table(&self, x: usize, y: usize) -> Vec<usize> {
        if x == y {
            return (0..self.stalks[x].order()).collect();
        }
        self.res[&(x, y)].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrictions_compose_along_the_chain() {
        let m = RankedPosetModel::chain(2);
        let z = Ab::cyclic(0);
        let f = AbSheaf::twisted(&m, &z, 3);
        assert_eq!(f.res(2, 0).m.get(0, 0), 9);
    }

    #[test]
    fn path_dependent_data_is_rejected() {
        let m = RankedPosetModel::from_ids(&[("g", 0), ("a", 1), ("b", 1), ("s", 2)], &[("a", "g"), ("b", "g"), ("s", "a"), ("s", "b")]).unwrap();
        let z3 = Ab::cyclic(3);
        let id = Hom::identity(z3.clone());
        let two = Hom::new(z3.clone(), z3.clone(), Mat::from_rows(&[vec![2]], 1)).unwrap();
        let mut res = BTreeMap::new();
        for e in m.covers() {
            res.insert(e, id.clone());
        }
        assert!(AbSheaf::new(&m, vec![z3.clone(); 4], res.clone()).is_ok());
        res.insert((3, 1), two);
        assert!(AbSheaf::new(&m, vec![z3; 4], res).is_err());
    }

    #[test]
    fn skyscraper_support() {
        let m = RankedPosetModel::dvr();
        let f = AbSheaf::skyscraper(&m, 1, &Ab::cyclic(2));
        assert_eq!(f.support(), PointSet::single(1));
        let g = AbSheaf::skyscraper(&m, 0, &Ab::cyclic(2));
        assert_eq!(g.support(), m.all());
        let s = GroupSheaf::skyscraper(&m, 1, &FinGroup::symmetric(3));
        assert_eq!(s.res(1, 0, 3), 0);
    }
}
