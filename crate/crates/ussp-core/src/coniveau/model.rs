use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest number of points a model may have.
pub const MAX_POINTS: usize = 64;

/// A set of points of a model, as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(pub u64);

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn single(x: usize) -> Self {
        PointSet(1 << x)
    }

    pub fn from_points(xs: impl IntoIterator<Item = usize>) -> Self {
        xs.into_iter().fold(PointSet::EMPTY, |s, x| s.with(x))
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn with(self, x: usize) -> Self {
        PointSet(self.0 | 1 << x)
    }

    pub fn union(self, o: Self) -> Self {
        PointSet(self.0 | o.0)
    }

    pub fn inter(self, o: Self) -> Self {
        PointSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        PointSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        core::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(x)
        })
    }
}

/// A finite poset with a codimension function, standing in for a scheme.
///
/// `x <= y` means `x` is a specialization of `y`. Opens are up-closed,
/// closed sets are down-closed, and `δ` strictly drops along generization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedPosetModel {
    ids: Vec<String>,
    codim: Vec<usize>,
    up: Vec<PointSet>,
    down: Vec<PointSet>,
}

impl RankedPosetModel {
    /// `specializations` lists pairs `(x, y)` with `x <= y`; the order is
    /// their reflexive-transitive closure.
    pub fn new(ids: Vec<String>, codim: Vec<usize>, specializations: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        if n > MAX_POINTS {
            return Err(Error::limit(format!("models have at most {MAX_POINTS} points, got {n}")));
        }
        if codim.len() != n {
            return Err(Error::invalid("one codimension per point is required"));
        }
        let mut seen = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            if seen.insert(id.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate point id {id:?}")));
            }
        }
        let mut up: Vec<PointSet> = (0..n).map(PointSet::single).collect();
        for &(x, y) in specializations {
            if x >= n || y >= n {
                return Err(Error::invalid(format!("specialization ({x}, {y}) names a missing point")));
            }
            up[x] = up[x].with(y);
        }
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    up[i] = up[i].union(up[k]);
                }
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(Error::invalid(format!("{} and {} specialize each other", ids[x], ids[y])));
                }
                if y != x && codim[x] <= codim[y] {
                    return Err(Error::invalid(format!(
                        "codimension must drop from {} (δ = {}) to its generization {} (δ = {})",
                        ids[x], codim[x], ids[y], codim[y]
                    )));
                }
            }
        }
        let down = (0..n).map(|y| PointSet::from_points((0..n).filter(|&x| up[x].contains(y)))).collect();
        Ok(RankedPosetModel { ids, codim, up, down })
    }

    /// Builds a model from string ids; `specializations` are `(special, generic)`.
    pub fn from_ids(points: &[(&str, usize)], specializations: &[(&str, &str)]) -> Result<Self> {
        let ids: Vec<String> = points.iter().map(|p| p.0.to_string()).collect();
        let codim = points.iter().map(|p| p.1).collect();
        let find = |s: &str| ids.iter().position(|i| i == s).ok_or_else(|| Error::invalid(format!("unknown point {s:?}")));
        let mut pairs = Vec::new();
        for &(a, b) in specializations {
            pairs.push((find(a)?, find(b)?));
        }
        Self::new(ids.clone(), codim, &pairs)
    }

    pub fn point() -> Self {
        Self::from_ids(&[("x", 0)], &[]).expect("point model")
    }

    /// Spectrum of a discrete valuation ring: `s <= η`.
    pub fn dvr() -> Self {
        Self::from_ids(&[("eta", 0), ("s", 1)], &[("s", "eta")]).expect("dvr model")
    }

    /// A chain `x_d < ... < x_1 < x_0` with `δ(x_i) = i`.
    pub fn chain(d: usize) -> Self {
        let ids: Vec<String> = (0..=d).map(|i| format!("x{i}")).collect();
        let pairs: Vec<(usize, usize)> = (1..=d).map(|i| (i, i - 1)).collect();
        Self::new(ids, (0..=d).collect(), &pairs).expect("chain model")
    }

    /// A generic point with `k` closed points of codimension 1.
    pub fn dedekind(k: usize) -> Self {
        let mut ids = vec![String::from("eta")];
        ids.extend((1..=k).map(|i| format!("s{i}")));
        let mut codim = vec![0];
        codim.extend(core::iter::repeat_n(1, k));
        let pairs: Vec<(usize, usize)> = (1..=k).map(|i| (i, 0)).collect();
        Self::new(ids, codim, &pairs).expect("dedekind model")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn all(&self) -> PointSet {
        PointSet(if self.len() == 64 { u64::MAX } else { (1u64 << self.len()) - 1 })
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn codim(&self, x: usize) -> usize {
        self.codim[x]
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    /// `U_x`: all generizations of `x`, the local scheme at `x`.
    pub fn star(&self, x: usize) -> PointSet {
        self.up[x]
    }

    /// The closure of `x`: all its specializations.
    pub fn closure(&self, x: usize) -> PointSet {
        self.down[x]
    }

    pub fn up_closure(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |a, x| a.union(self.up[x]))
    }

    pub fn down_closure(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |a, x| a.union(self.down[x]))
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.up_closure(s) == s
    }

    /// `z` is closed in the open `u`.
    pub fn is_closed_in(&self, z: PointSet, u: PointSet) -> bool {
        z.is_subset(u) && self.down_closure(z).inter(u) == z
    }

    /// `max δ`, or 0 for the empty model.
    pub fn dim(&self) -> usize {
        self.codim.iter().copied().max().unwrap_or(0)
    }

    pub fn dim_of(&self, s: PointSet) -> usize {
        s.iter().map(|x| self.codim[x]).max().unwrap_or(0)
    }

    /// `min δ` over `z`, `None` when `z` is empty.
    pub fn codim_of(&self, z: PointSet) -> Option<usize> {
        z.iter().map(|x| self.codim[x]).min()
    }

    pub fn with_codim(&self, p: usize) -> PointSet {
        PointSet::from_points((0..self.len()).filter(|&x| self.codim[x] == p))
    }

    /// `X^{<=p}`, an open.
    pub fn at_most(&self, p: usize) -> PointSet {
        PointSet::from_points((0..self.len()).filter(|&x| self.codim[x] <= p))
    }

    /// `Z^p = {δ >= p}`, a closed set.
    pub fn at_least(&self, p: usize) -> PointSet {
        PointSet::from_points((0..self.len()).filter(|&x| self.codim[x] >= p))
    }

    /// Pairs `x < y` with nothing strictly between them.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].iter() {
                if y != x && !self.up[x].iter().any(|z| z != x && z != y && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn minimal(&self, s: PointSet) -> PointSet {
        PointSet::from_points(s.iter().filter(|&x| !s.iter().any(|y| self.lt(y, x))))
    }

    pub fn maximal(&self, s: PointSet) -> PointSet {
        PointSet::from_points(s.iter().filter(|&x| !s.iter().any(|y| self.lt(x, y))))
    }

    /// A unique generic point.
    pub fn is_irreducible(&self) -> bool {
        self.maximal(self.all()).len() == 1
    }

    /// Points of `s` sorted by `(δ, id)`, the reporting order.
    pub fn sorted(&self, s: PointSet) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().collect();
        v.sort_by(|&a, &b| (self.codim[a], &self.ids[a]).cmp(&(self.codim[b], &self.ids[b])));
        v
    }

    /// Strict chains `x_0 < ... < x_n` inside `u`, grouped by length, each
    /// listed from its most special point.
    pub fn chains(&self, u: PointSet, max_len: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_len];
        if max_len == 0 {
            return out;
        }
        out[0] = u.iter().map(|x| vec![x]).collect();
        for k in 1..max_len {
            let mut next = Vec::new();
            for c in &out[k - 1] {
                let last = *c.last().expect("chains are nonempty");
                for y in self.up[last].inter(u).iter() {
                    if y != last {
                        let mut d = c.clone();
                        d.push(y);
                        next.push(d);
                    }
                }
            }
            out[k] = next;
        }
        out
    }

    /// All opens contained in `u`, in increasing mask order.
    pub fn opens_in(&self, u: PointSet, cap: usize) -> Result<Vec<PointSet>> {
        self.subsets_by(u, cap, |s| self.is_open(s))
    }

    /// All subsets of `u` closed in `u`, in increasing mask order.
    pub fn closed_in(&self, u: PointSet, cap: usize) -> Result<Vec<PointSet>> {
        self.subsets_by(u, cap, |s| self.is_closed_in(s, u))
    }

    fn subsets_by(&self, u: PointSet, cap: usize, keep: impl Fn(PointSet) -> bool) -> Result<Vec<PointSet>> {
        let pts: Vec<usize> = u.iter().collect();
        if pts.len() >= 32 || 1usize << pts.len() > cap.max(1) {
            return Err(Error::limit(format!("enumerating subsets of {} points exceeds the cap {cap}", pts.len())));
        }
        let mut out = Vec::new();
        for m in 0..1usize << pts.len() {
            let s = PointSet::from_points(pts.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &x)| x));
            if keep(s) {
                out.push(s);
            }
        }
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_shape() {
        let m = RankedPosetModel::chain(2);
        assert_eq!(m.dim(), 2);
        assert!(m.le(2, 0));
        assert_eq!(m.covers(), vec![(1, 0), (2, 1)]);
        assert_eq!(m.star(1), PointSet::from_points([0, 1]));
        assert!(m.is_open(m.at_most(1)));
        assert!(m.is_closed_in(m.at_least(1), m.all()));
        assert_eq!(m.chains(m.all(), 4).iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3, 1, 0]);
    }

    #[test]
    fn codimension_must_drop() {
        let bad = RankedPosetModel::from_ids(&[("a", 0), ("b", 0)], &[("a", "b")]);
        assert!(bad.is_err());
        let cyc = RankedPosetModel::from_ids(&[("a", 1), ("b", 0)], &[("a", "b"), ("b", "a")]);
        assert!(cyc.is_err());
    }

    #[test]
    fn opens_of_the_dvr() {
        let m = RankedPosetModel::dvr();
        let opens = m.opens_in(m.all(), 1 << 10).unwrap();
        assert_eq!(opens, vec![PointSet(0), PointSet(1), PointSet(3)]);
        let closed = m.closed_in(m.all(), 1 << 10).unwrap();
        assert_eq!(closed, vec![PointSet(0), PointSet(2), PointSet(3)]);
        assert!(m.is_irreducible());
        assert!(!RankedPosetModel::from_ids(&[("a", 0), ("b", 0)], &[]).unwrap().is_irreducible());
    }
}
