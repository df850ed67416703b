use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::model::{PointSet, RankedPosetModel};
use super::nerve::{connecting, RelativeComplex};
use super::sheaf::AbSheaf;
use crate::algebra::{Ab, Hom};
use crate::pi::{LongHtpySequence, PiMorphism, PiStructure};
use crate::world::{Lin, LinAct, World};
use crate::{Error, Result};

/// An open `u` with a closed subset `z` of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub u: PointSet,
    pub z: PointSet,
}

impl Pair {
    pub fn new(u: PointSet, z: PointSet) -> Self {
        Pair { u, z }
    }

    /// `(u, u)`: no condition on supports.
    pub fn whole(u: PointSet) -> Self {
        Pair { u, z: u }
    }
}

/// A cohomotopy theory with supports on the opens of a model.
///
/// `pi(Pair { u, z }, n)` is `Π_n(U, Z)`. Degrees above [`Self::top`] are
/// trivial.
pub trait SupportTheory {
    type W: World;

    fn model(&self) -> &RankedPosetModel;
    fn top(&self) -> usize;
    fn pi(&self, at: Pair, n: usize) -> Result<<Self::W as World>::Obj>;
    /// `Π_n(U, Z) -> Π_n(V, T)` for an open `V ⊂ U` and `Z ∩ V ⊂ T`:
    /// restriction followed by enlarging the support.
    fn transfer(&self, from: Pair, to: Pair, n: usize) -> Result<<Self::W as World>::Map>;
    /// `∂: Π_{n+1}(U - T', T - T') -> Π_n(U, T')` for `T' ⊂ T` closed in `U`.
    fn boundary(&self, u: PointSet, t: PointSet, t_small: PointSet, n: usize) -> Result<<Self::W as World>::Map>;
    /// `Π_1(U - T', T - T')` acting on `Π_0(U, T')`.
    fn boundary_action(&self, u: PointSet, t: PointSet, t_small: PointSet) -> Result<<Self::W as World>::Act>;
}

pub fn check_pair(m: &RankedPosetModel, p: Pair) -> Result<()> {
    if !m.is_open(p.u) || !m.is_closed_in(p.z, p.u) {
        return Err(Error::invalid(format!("{:?} is not a closed subset of an open set", p)));
    }
    Ok(())
}

pub fn check_transfer(m: &RankedPosetModel, from: Pair, to: Pair) -> Result<()> {
    check_pair(m, from)?;
    check_pair(m, to)?;
    if !to.u.is_subset(from.u) || !from.z.inter(to.u).is_subset(to.z) {
        return Err(Error::invalid(format!("no transfer from {:?} to {:?}", from, to)));
    }
    Ok(())
}

pub fn check_triple(m: &RankedPosetModel, u: PointSet, t: PointSet, t_small: PointSet) -> Result<()> {
    check_pair(m, Pair::new(u, t))?;
    if !m.is_closed_in(t_small, u) || !t_small.is_subset(t) {
        return Err(Error::invalid("the smaller support must be closed and contained in the larger"));
    }
    Ok(())
}

/// `Π_*(U, Z)` with trivial actions of degree 1 on higher degrees.
pub fn pi_structure<T: SupportTheory>(th: &T, at: Pair) -> Result<PiStructure<T::W>> {
    let terms = (0..=th.top().max(1)).map(|n| th.pi(at, n)).collect::<Result<Vec<_>>>()?;
    PiStructure::with_trivial_actions(terms)
}

/// The sequence of `T' ⊂ T` in `U`:
/// `Π(U, T') -> Π(U, T) -> Π(U - T', T - T')`.
pub fn long_sequence<T: SupportTheory>(th: &T, u: PointSet, t: PointSet, t_small: PointSet) -> Result<LongHtpySequence<T::W>> {
    check_triple(th.model(), u, t, t_small)?;
    let fibp = Pair::new(u, t_small);
    let totp = Pair::new(u, t);
    let basep = Pair::new(u.minus(t_small), t.minus(t_small));
    let top = th.top().max(1);
    let f = PiMorphism { maps: (0..=top).map(|n| th.transfer(fibp, totp, n)).collect::<Result<Vec<_>>>()? };
    let g = PiMorphism { maps: (0..=top).map(|n| th.transfer(totp, basep, n)).collect::<Result<Vec<_>>>()? };
    let boundary = (0..top).map(|n| th.boundary(u, t, t_small, n)).collect::<Result<Vec<_>>>()?;
    LongHtpySequence::new(
        pi_structure(th, fibp)?,
        pi_structure(th, totp)?,
        pi_structure(th, basep)?,
        f,
        g,
        boundary,
        th.boundary_action(u, t, t_small)?,
    )
}

/// Outcome of checking the axioms of a theory on every open of a model.
#[derive(Clone, Debug, Default)]
pub struct TheoryReport {
    pub sequences: usize,
    pub excisions: usize,
    pub additivities: usize,
    pub failures: Vec<String>,
}

impl TheoryReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_iso_all<T: SupportTheory>(th: &T, maps: impl Fn(usize) -> Result<<T::W as World>::Map>) -> Result<bool> {
    for n in 0..=th.top() {
        if !T::W::is_iso(&maps(n)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Long exact sequences of every triple `T' ⊂ T ⊂ U`, excision for every
/// open `V` between `Z` and `U`, and additivity for disjoint closed pieces.
pub fn check_theory<T: SupportTheory>(th: &T, cap: usize) -> Result<TheoryReport> {
    let m = th.model();
    let mut rep = TheoryReport::default();
    let opens = m.opens_in(m.all(), cap)?;
    for &u in &opens {
        let closed = m.closed_in(u, cap)?;
        for &t in &closed {
            for &ts in closed.iter().filter(|s| s.is_subset(t)) {
                let seq = long_sequence(th, u, t, ts)?;
                rep.sequences += 1;
                let v = seq.validate();
                if !v.all() {
                    rep.failures.push(format!("sequence {u:?} ⊃ {t:?} ⊃ {ts:?}: {}", v.failures.join("; ")));
                    continue;
                }
                let e = seq.exactness_unchecked();
                if !e.exact {
                    rep.failures.push(format!("sequence {u:?} ⊃ {t:?} ⊃ {ts:?} is not exact at {:?}", e.failures));
                }
            }
            for &v in opens.iter().filter(|v| t.is_subset(**v) && v.is_subset(u)) {
                rep.excisions += 1;
                if !is_iso_all(th, |n| th.transfer(Pair::new(u, t), Pair::new(v, t), n))? {
                    rep.failures.push(format!("excision fails for {t:?} in {v:?} ⊂ {u:?}"));
                }
            }
            for &z1 in closed.iter().filter(|s| s.is_subset(t)) {
                let z2 = t.minus(z1);
                if z1.0 > z2.0 || !m.is_closed_in(z2, u) {
                    continue;
                }
                rep.additivities += 1;
                let ok = is_iso_all(th, |n| {
                    let a = th.transfer(Pair::new(u, t), Pair::new(u.minus(z2), z1), n)?;
                    let b = th.transfer(Pair::new(u, t), Pair::new(u.minus(z1), z2), n)?;
                    Ok(T::W::pairing(&th.pi(Pair::new(u, t), n)?, &[a, b]))
                })?;
                if !ok {
                    rep.failures.push(format!("additivity fails for {z1:?} ⊔ {z2:?} in {u:?}"));
                }
            }
        }
    }
    Ok(rep)
}

/// The Eilenberg-MacLane theory `K(F, m)`: `Π_n(U, Z) = H^{m-n}_Z(U, F)`
/// for `n <= m`, computed by nerve cohomology.
#[derive(Debug)]
pub struct EmTheory {
    sheaf: AbSheaf,
    level: usize,
    cache: RefCell<BTreeMap<Pair, Rc<RelativeComplex>>>,
}

impl EmTheory {
    pub fn new(sheaf: &AbSheaf, level: usize) -> Self {
        EmTheory { sheaf: sheaf.clone(), level, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn sheaf(&self) -> &AbSheaf {
        &self.sheaf
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn complex(&self, at: Pair) -> Result<Rc<RelativeComplex>> {
        if let Some(c) = self.cache.borrow().get(&at) {
            return Ok(c.clone());
        }
        let c = Rc::new(RelativeComplex::new(&self.sheaf, at.u, at.z, self.level)?);
        self.cache.borrow_mut().insert(at, c.clone());
        Ok(c)
    }
}

impl SupportTheory for EmTheory {
    type W = Lin;

    fn model(&self) -> &RankedPosetModel {
        self.sheaf.model()
    }

    fn top(&self) -> usize {
        self.level
    }

    fn pi(&self, at: Pair, n: usize) -> Result<Ab> {
        if n > self.level {
            return Ok(Ab::trivial());
        }
        Ok(self.complex(at)?.h[self.level - n].ab.clone())
    }

    fn transfer(&self, from: Pair, to: Pair, n: usize) -> Result<Hom> {
        check_transfer(self.model(), from, to)?;
        if n > self.level {
            return Ok(Hom::zero(Ab::trivial(), Ab::trivial()));
        }
        self.complex(from)?.transfer(&*self.complex(to)?, self.level - n)
    }

    fn boundary(&self, u: PointSet, t: PointSet, t_small: PointSet, n: usize) -> Result<Hom> {
        check_triple(self.model(), u, t, t_small)?;
        let basep = Pair::new(u.minus(t_small), t.minus(t_small));
        let fibp = Pair::new(u, t_small);
        if n + 1 > self.level {
            return Ok(Hom::zero(self.pi(basep, n + 1)?, self.pi(fibp, n)?));
        }
        let i = self.level - n - 1;
        connecting(&*self.complex(basep)?, &*self.complex(Pair::new(u, t))?, &*self.complex(fibp)?, i)
    }

    fn boundary_action(&self, u: PointSet, t: PointSet, t_small: PointSet) -> Result<LinAct> {
        Ok(Lin::translation(&self.boundary(u, t, t_small, 0)?))
    }
}

/// Points of `s` in reporting order, as ids.
pub fn describe_points(m: &RankedPosetModel, s: PointSet) -> String {
    let ids: Vec<&str> = m.sorted(s).into_iter().map(|x| m.id(x)).collect();
    format!("{{{}}}", ids.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn em_theory_on_the_dvr() {
        let m = RankedPosetModel::dvr();
        let f = AbSheaf::constant(&m, &Ab::free(1));
        let th = EmTheory::new(&f, 1);
        assert_eq!(th.pi(Pair::whole(m.all()), 1).unwrap(), Ab::free(1));
        assert_eq!(th.pi(Pair::whole(m.all()), 0).unwrap(), Ab::trivial());
        assert_eq!(th.pi(Pair::new(m.all(), PointSet::single(1)), 0).unwrap(), Ab::trivial());
        let rep = check_theory(&th, 1 << 12).unwrap();
        assert!(rep.valid(), "{:?}", rep.failures);
        assert!(rep.sequences > 0 && rep.excisions > 0);
    }

    #[test]
    fn em_level_zero_is_sections() {
        let m = RankedPosetModel::dedekind(2);
        let f = AbSheaf::skyscraper(&m, 1, &Ab::cyclic(4));
        let th = EmTheory::new(&f, 0);
        assert_eq!(th.pi(Pair::whole(m.all()), 0).unwrap(), Ab::cyclic(4));
        assert_eq!(th.pi(Pair::whole(m.all()), 1).unwrap(), Ab::trivial());
        assert!(check_theory(&th, 1 << 12).unwrap().valid());
    }

    #[test]
    fn em_theories_satisfy_the_axioms() {
        let v = RankedPosetModel::from_ids(&[("a", 0), ("b", 0), ("s", 1)], &[("s", "a"), ("s", "b")]).unwrap();
        let sheaves = [
            AbSheaf::constant(&v, &Ab::cyclic(2)),
            AbSheaf::twisted(&RankedPosetModel::chain(2), &Ab::free(1), 2),
            AbSheaf::skyscraper(&RankedPosetModel::chain(2), 1, &Ab::cyclic(3)),
        ];
        for f in &sheaves {
            for level in 0..=2 {
                let rep = check_theory(&EmTheory::new(f, level), 1 << 12).unwrap();
                assert!(rep.valid(), "level {level}: {:?}", rep.failures);
            }
        }
    }

    #[test]
    fn long_sequence_matches_the_pair_sequence() {
        let m = RankedPosetModel::dvr();
        let f = AbSheaf::constant(&m, &Ab::free(1));
        let th = EmTheory::new(&f, 1);
        let seq = long_sequence(&th, m.all(), m.all(), PointSet::single(1)).unwrap();
        assert!(seq.validate().all());
        assert_eq!(seq.base.term(1), Ab::free(1));
        assert_eq!(seq.total.term(1), Ab::free(1));
        assert!(Lin::is_iso(&seq.g.maps[1]));
    }
}
