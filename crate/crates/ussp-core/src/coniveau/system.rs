use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::model::{PointSet, RankedPosetModel};
use super::nerve::nerve_cohomology;
use super::theory::{describe_points, EmTheory, Pair, SupportTheory};
use crate::algebra::Ab;
use crate::hcomplex::{check_exact, BiAugmentedComplex, HtpyComplex, Mode};
use crate::spectral::{degeneracy_check, ReesSystem};
use crate::world::{Lin, World};
use crate::{Error, Result};

/// `U ∩ X^{≤p}`.
pub fn tower_open(m: &RankedPosetModel, u: PointSet, p: isize) -> PointSet {
    if p < 0 {
        return PointSet::EMPTY;
    }
    u.inter(m.at_most(p as usize))
}

/// `U ∩ X^{=p}`.
pub fn stratum(m: &RankedPosetModel, u: PointSet, p: usize) -> PointSet {
    u.inter(m.with_codim(p))
}

/// `U ∩ Z^p`, `Z^p = {δ ≥ p}`.
pub fn flag(m: &RankedPosetModel, u: PointSet, p: usize) -> PointSet {
    u.inter(m.at_least(p))
}

fn signed<W: World>(m: W::Map, e: isize, n: usize) -> W::Map {
    if n >= 1 && e.rem_euclid(2) == 1 {
        W::invert(&m)
    } else {
        m
    }
}

/// The Rees system of the coniveau tower `U -> ... -> U ∩ X^{≤1} -> U ∩ X^{≤0}`
/// with `F_p = (X^{≤p}, X^{=p})` and `G_p = (U, Z^{p+1})`, bounded by the
/// largest codimension in `U`.
pub fn coniveau_system<T: SupportTheory>(th: &T, u: PointSet) -> Result<ReesSystem<T::W>> {
    let m = th.model();
    if !m.is_open(u) {
        return Err(Error::invalid(format!("{} is not open", describe_points(m, u))));
    }
    let pm = m.dim_of(u);
    let nm = th.top();
    let xp = |p: isize| Pair::whole(tower_open(m, u, p));
    let fp = |p: usize| Pair::new(tower_open(m, u, p as isize), stratum(m, u, p));
    let gp = |p: isize| if p < 0 { Pair::whole(u) } else { Pair::new(u, flag(m, u, p as usize + 1)) };
    let grid = |f: &dyn Fn(usize, usize) -> Result<<T::W as World>::Obj>| -> Result<Vec<Vec<_>>> {
        (0..=pm).map(|p| (0..=nm).map(|n| f(p, n)).collect()).collect()
    };
    let maps = |w: usize, f: &dyn Fn(usize, usize) -> Result<<T::W as World>::Map>| -> Result<Vec<Vec<_>>> {
        (0..=pm).map(|p| (0..w).map(|n| f(p, n)).collect()).collect()
    };
    let x = (0..=nm).map(|n| th.pi(Pair::whole(u), n)).collect::<Result<Vec<_>>>()?;
    let xps = grid(&|p, n| th.pi(xp(p as isize), n))?;
    let fs = grid(&|p, n| th.pi(fp(p), n))?;
    let gs = grid(&|p, n| th.pi(gp(p as isize), n))?;
    let a = maps(nm + 1, &|p, n| th.transfer(Pair::whole(u), xp(p as isize), n))?;
    let alpha = maps(nm + 1, &|p, n| {
        if p == 0 {
            Ok(T::W::zero_map(&xps[0][n], &T::W::point()))
        } else {
            th.transfer(xp(p as isize), xp(p as isize - 1), n)
        }
    })?;
    let beta = maps(nm, &|p, n| {
        if p == 0 {
            return Ok(T::W::zero_map(&T::W::point(), &fs[0][n]));
        }
        let t = tower_open(m, u, p as isize);
        Ok(signed::<T::W>(th.boundary(t, t, stratum(m, u, p), n)?, p as isize - 1, n))
    })?;
    let gamma = maps(nm + 1, &|p, n| th.transfer(fp(p), xp(p as isize), n))?;
    let b = maps(nm, &|p, n| Ok(signed::<T::W>(th.boundary(u, u, flag(m, u, p + 1), n)?, p as isize, n)))?;
    let c = maps(nm + 1, &|p, n| th.transfer(gp(p as isize), Pair::whole(u), n))?;
    let alpha_bar = maps(nm + 1, &|p, n| th.transfer(gp(p as isize), gp(p as isize - 1), n))?;
    let beta_bar = maps(nm + 1, &|p, n| th.transfer(gp(p as isize - 1), fp(p), n))?;
    let gamma_bar = maps(nm, &|p, n| Ok(signed::<T::W>(th.boundary(u, flag(m, u, p), flag(m, u, p + 1), n)?, p as isize + 1, n)))?;
    let mut act_f = Vec::new();
    let mut act_g = Vec::new();
    let mut act_gf = Vec::new();
    for p in 0..=pm {
        let t = tower_open(m, u, p as isize);
        act_f.push(if p == 0 { T::W::trivial_action(&T::W::point(), &fs[0][0]) } else { th.boundary_action(t, t, stratum(m, u, p))? });
        act_g.push(th.boundary_action(u, u, flag(m, u, p + 1))?);
        act_gf.push(th.boundary_action(u, flag(m, u, p), flag(m, u, p + 1))?);
    }
    Ok(ReesSystem {
        bound: pm,
        x,
        xp: xps,
        f: fs,
        g: gs,
        a,
        alpha,
        beta,
        gamma,
        b,
        c,
        alpha_bar,
        beta_bar,
        gamma_bar,
        act_f,
        act_g,
        act_gf,
    })
}

/// The Gersten complex of line `q` on `U`: `C^p = ∏_{x ∈ U^{(p)}} Π_{q-p}(U_x, {x})`.
#[derive(Clone, Debug)]
pub struct GerstenComplex<W: World> {
    pub q: usize,
    pub u: PointSet,
    /// `points[p]`: `U^{(p)}` in reporting order, the factors of `C^p`.
    pub points: Vec<Vec<usize>>,
    /// The factors of `C^p`.
    pub factors: Vec<Vec<W::Obj>>,
    pub complex: BiAugmentedComplex<W>,
    /// `φ_n: Π_n(F_{q-n}) -> C^{q-n}`, by the transfers to the local pairs.
    pub phi: Vec<W::Map>,
}

impl<W: World> GerstenComplex<W> {
    /// `C^p`.
    pub fn term(&self, p: usize) -> W::Obj {
        self.complex.c(p)
    }
}

/// The line-`q` complex of the coniveau system, carried over to the local
/// terms. Fails when a factorization `φ` is not an isomorphism.
pub fn gersten_complex<T: SupportTheory>(th: &T, u: PointSet, q: usize) -> Result<GerstenComplex<T::W>> {
    let sys = coniveau_system(th, u)?;
    gersten_from_system(th, u, q, &sys)
}

pub fn gersten_from_system<T: SupportTheory>(th: &T, u: PointSet, q: usize, sys: &ReesSystem<T::W>) -> Result<GerstenComplex<T::W>> {
    let m = th.model();
    let line = sys.line_complex(q)?;
    let cx = &line.complex;
    let mut points = vec![Vec::new(); q + 1];
    let mut factors = vec![Vec::new(); q + 1];
    let mut phi = Vec::new();
    let mut phi_inv = Vec::new();
    let mut terms = Vec::new();
    for n in 0..=q {
        let p = q - n;
        let pts = m.sorted(stratum(m, u, p));
        let from = Pair::new(tower_open(m, u, p as isize), stratum(m, u, p));
        let mut maps = Vec::new();
        for &x in &pts {
            let to = Pair::new(m.star(x), PointSet::single(x));
            let t = th.transfer(from, to, n)?;
            factors[p].push(T::W::tgt(&t).clone());
            maps.push(t);
        }
        let src = cx.term(n);
        let f = if maps.is_empty() { T::W::zero_map(&src, &T::W::product(&[])) } else { T::W::pairing(&src, &maps) };
        let inv = T::W::inverse(&f).ok_or_else(|| {
            Error::invalid(format!(
                "Π_{n} of the stratum of codimension {p} is not the product of its local terms at {}",
                describe_points(m, PointSet::from_points(pts.iter().copied()))
            ))
        })?;
        terms.push(T::W::tgt(&f).clone());
        points[p] = pts;
        phi.push(f);
        phi_inv.push(inv);
    }
    let diffs = (2..=q).map(|n| T::W::compose(&phi[n - 1], &T::W::compose(&cx.d(n), &phi_inv[n]))).collect();
    let action = if q >= 1 {
        T::W::act_transport(cx.action(), &phi_inv[1], &phi[0]).ok_or_else(|| Error::invalid("the action does not transport along φ"))?
    } else {
        T::W::trivial_action(&T::W::point(), &terms[0])
    };
    let complex = HtpyComplex::new(terms, diffs, action)?;
    let tau = T::W::compose(&phi[q], &line.tau);
    let eps = line.eps.as_ref().map(|e| T::W::compose(e, &phi_inv[0]));
    let complex = BiAugmentedComplex::new(complex, tau, eps)?;
    Ok(GerstenComplex { q, u, points, factors, complex, phi })
}

/// An element of `Π_{q-p}(U_x, Z)` killed by enlarging the support to `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Effacement {
    pub x: usize,
    pub p: usize,
    pub n: usize,
    pub z: PointSet,
    pub atom: usize,
    /// `None` when no admissible `T` kills the element.
    pub t: Option<PointSet>,
}

#[derive(Clone, Debug)]
pub struct GerstenReport {
    pub q: usize,
    /// Exactness of the local Gersten complexes.
    pub cond_i: bool,
    /// Local systems satisfy the vanishing condition on `c` and `b α`.
    pub cond_ii: bool,
    /// Effaceability for `n ∈ {p - 1, p}`, by search.
    pub cond_iii: bool,
    /// Effaceability for `n ∈ {p, p + 1}`.
    pub cond_iii_shifted: bool,
    /// The vanishing condition on `ᾱ`, reported alongside.
    pub alpha_bar_vanishes: bool,
    /// Points where the local Gersten complex is not exact.
    pub failing_points: Vec<usize>,
    pub witnesses: Vec<Effacement>,
    pub obstructions: Vec<Effacement>,
    pub notes: Vec<String>,
}

impl GerstenReport {
    pub fn gersten(&self) -> bool {
        self.cond_i
    }

    pub fn agree(&self) -> bool {
        self.cond_i == self.cond_ii && self.cond_ii == self.cond_iii
    }
}

/// Gersten in degree `q` on the whole model, through three independent
/// computations on every local model `U_x`.
pub fn gersten_check<T: SupportTheory>(th: &T, q: usize, cap: usize) -> Result<GerstenReport> {
    let m = th.model();
    let mut rep = GerstenReport {
        q,
        cond_i: true,
        cond_ii: true,
        cond_iii: true,
        cond_iii_shifted: true,
        alpha_bar_vanishes: true,
        failing_points: Vec::new(),
        witnesses: Vec::new(),
        obstructions: Vec::new(),
        notes: Vec::new(),
    };
    for x in m.sorted(m.all()) {
        let ux = m.star(x);
        let sys = coniveau_system(th, ux)?;
        let ge = gersten_from_system(th, ux, q, &sys)?;
        let v = check_exact(&ge.complex, Mode::Exact);
        if !v.tau_side {
            rep.cond_i = false;
            rep.failing_points.push(x);
            rep.notes.push(format!("{}: local complex fails at {:?}", m.id(x), v.failures));
        }
        let d = degeneracy_check(&sys, q)?;
        if !d.cond_ii {
            rep.cond_ii = false;
            rep.notes.push(format!("{}: {}", m.id(x), d.failures.join("; ")));
        }
        rep.alpha_bar_vanishes &= d.cond_i;
        let closed = m.closed_in(ux, cap)?;
        for p in 0..=q {
            for n in p.saturating_sub(1)..=p + 1 {
                for &z in &closed {
                    if z.is_empty() || m.codim_of(z).is_none_or(|c| c <= n) {
                        continue;
                    }
                    let pi = th.pi(Pair::new(ux, z), q - p)?;
                    let targets: Vec<PointSet> = closed.iter().copied().filter(|t| z.is_subset(*t) && m.codim_of(*t).is_none_or(|c| c >= n)).collect();
                    for (atom, s) in T::W::atoms(&pi).into_iter().enumerate() {
                        let mut found = None;
                        for &t in &targets {
                            let i = th.transfer(Pair::new(ux, z), Pair::new(ux, t), q - p)?;
                            if T::W::is_base(T::W::tgt(&i), &T::W::image(&i, &s)) {
                                found = Some(t);
                                break;
                            }
                        }
                        let e = Effacement { x, p, n, z, atom, t: found };
                        if found.is_some() {
                            if !T::W::is_base(&pi, &s) {
                                rep.witnesses.push(e);
                            }
                        } else {
                            rep.cond_iii &= n > p;
                            rep.cond_iii_shifted &= n < p;
                            rep.obstructions.push(e);
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Commutation of the projection `Ge(U) -> Ge(V)` with `τ`, `ε` and the
/// differentials, for an open `V ⊂ U`.
pub fn functoriality_check<T: SupportTheory>(th: &T, u: PointSet, v: PointSet, q: usize) -> Result<Vec<String>> {
    let m = th.model();
    if !v.is_subset(u) || !m.is_open(v) {
        return Err(Error::invalid("the smaller set must be an open subset"));
    }
    let (su, sv) = (coniveau_system(th, u)?, coniveau_system(th, v)?);
    let (gu, gv) = (gersten_from_system(th, u, q, &su)?, gersten_from_system(th, v, q, &sv)?);
    let proj = |p: usize| -> <T::W as World>::Map {
        let src = gu.term(p);
        let maps: Vec<_> = gv.points[p]
            .iter()
            .map(|x| {
                let i = gu.points[p].iter().position(|y| y == x).expect("points of V are points of U");
                T::W::projection(&gu.factors[p], i)
            })
            .collect();
        if maps.is_empty() {
            T::W::zero_map(&src, &gv.term(p))
        } else {
            T::W::pairing(&src, &maps)
        }
    };
    let mut failures = Vec::new();
    let res = th.transfer(Pair::whole(u), Pair::whole(v), q)?;
    if !T::W::map_eq(&T::W::compose(&proj(0), &gu.complex.tau), &T::W::compose(&gv.complex.tau, &res)) {
        failures.push(String::from("τ"));
    }
    for p in 0..q {
        let n = q - p;
        let du = gu.complex.complex.d(n);
        let dv = gv.complex.complex.d(n);
        if !T::W::map_eq(&T::W::compose(&proj(p + 1), &du), &T::W::compose(&dv, &proj(p))) {
            failures.push(format!("d^{p}"));
        }
    }
    if let (Some(_), Some(ev)) = (&gu.complex.eps, &gv.complex.eps) {
        let r = th.transfer(Pair::whole(tower_open(m, u, q as isize)), Pair::whole(tower_open(m, v, q as isize)), 0)?;
        let (_, pv) = T::W::cokernel(&sv.alpha(q as isize + 1, 0));
        let lhs = T::W::compose(ev, &proj(q));
        let inv0 = T::W::inverse(&gu.phi[0]).expect("φ is invertible");
        let rhs = T::W::compose(&pv, &T::W::compose(&r, &T::W::compose(&su.gamma(q as isize, 0), &inv0)));
        if !T::W::map_eq(&lhs, &rhs) {
            failures.push(String::from("ε"));
        }
    }
    Ok(failures)
}

/// One term of line `q` of `K(F, level)` against the local cohomology
/// computed directly.
#[derive(Clone, Debug)]
pub struct FringeSlot {
    pub p: usize,
    pub expected: Ab,
    pub found: Ab,
}

impl FringeSlot {
    pub fn matches(&self) -> bool {
        self.expected == self.found
    }
}

/// `E_1^{p}` on line `q` against `⊕_{x ∈ U^{(p)}} H^{level-q+p}_x(U_x, F)`,
/// zero in negative degrees.
pub fn em_fringe_check(th: &EmTheory, u: PointSet, q: usize) -> Result<Vec<FringeSlot>> {
    let m = th.model();
    let sys = coniveau_system(th, u)?;
    let mut out = Vec::new();
    for p in 0..=q {
        let found = sys.f_obj(p as isize, q - p);
        let mut parts = Vec::new();
        if th.level() + p >= q {
            let i = th.level() + p - q;
            for x in m.sorted(stratum(m, u, p)) {
                let h = nerve_cohomology(th.sheaf(), m.star(x), Some(PointSet::single(x)), 0..=i)?;
                parts.push(h[i].clone());
            }
        }
        let expected = Lin::product(&parts);
        out.push(FringeSlot { p, expected, found });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinGroup;
    use crate::coniveau::sheaf::{AbSheaf, GroupSheaf};
    use crate::coniveau::torsor::TorsorTheory;
    use crate::world::Fin;

    const CAP: usize = 1 << 16;

    fn valid<W: World>(s: &ReesSystem<W>) {
        let r = s.validate();
        assert!(r.valid, "{:?}", r.failures);
    }

    #[test]
    fn point_model_gives_a_trivial_tower() {
        let m = RankedPosetModel::point();
        let th = EmTheory::new(&AbSheaf::constant(&m, &Ab::free(1)), 1);
        let s = coniveau_system(&th, m.all()).unwrap();
        assert_eq!(s.bound, 0);
        valid(&s);
    }

    #[test]
    fn em_systems_are_valid() {
        let dvr = RankedPosetModel::dvr();
        let c2 = RankedPosetModel::chain(2);
        valid(&coniveau_system(&EmTheory::new(&AbSheaf::constant(&dvr, &Ab::free(1)), 1), dvr.all()).unwrap());
        valid(&coniveau_system(&EmTheory::new(&AbSheaf::constant(&c2, &Ab::free(1)), 2), c2.all()).unwrap());
        valid(&coniveau_system(&EmTheory::new(&AbSheaf::twisted(&c2, &Ab::free(1), 2), 2), c2.all()).unwrap());
        let d3 = RankedPosetModel::dedekind(3);
        valid(&coniveau_system(&EmTheory::new(&AbSheaf::skyscraper(&d3, 2, &Ab::cyclic(4)), 2), d3.all()).unwrap());
    }

    #[test]
    fn torsor_systems_are_valid() {
        let d2 = RankedPosetModel::dedekind(2);
        valid(&coniveau_system(&TorsorTheory::new(&GroupSheaf::constant(&d2, &FinGroup::symmetric(3)), CAP), d2.all()).unwrap());
        let c2 = RankedPosetModel::chain(2);
        valid(&coniveau_system(&TorsorTheory::new(&GroupSheaf::skyscraper(&c2, 1, &FinGroup::cyclic(2)), CAP), c2.all()).unwrap());
    }

    #[test]
    fn dvr_gersten_complex_of_z() {
        let m = RankedPosetModel::dvr();
        let th = EmTheory::new(&AbSheaf::constant(&m, &Ab::free(1)), 1);
        let g = gersten_complex(&th, m.all(), 1).unwrap();
        assert_eq!(g.term(0), Ab::free(1));
        assert_eq!(g.term(1), Ab::trivial());
        assert!(Lin::is_iso(&g.complex.tau));
        assert!(check_exact(&g.complex, Mode::Exact).tau_side);
        let q0 = gersten_complex(&th, m.all(), 0).unwrap();
        assert_eq!(q0.points, vec![vec![0]]);
    }

    #[test]
    fn skyscraper_on_the_dvr_is_not_gersten() {
        let m = RankedPosetModel::dvr();
        let a = Ab::cyclic(3);
        let th = EmTheory::new(&AbSheaf::skyscraper(&m, 1, &a), 1);
        let g = gersten_complex(&th, m.all(), 1).unwrap();
        assert_eq!(*Lin::src(&g.complex.tau), a);
        assert_eq!(g.term(0), Ab::trivial());
        let v = check_exact(&g.complex, Mode::Exact);
        assert!(v.failures.contains(&crate::hcomplex::CxSlot::TauKernel));
        let r = gersten_check(&th, 1, CAP).unwrap();
        assert!(!r.cond_i && !r.cond_iii);
        assert_eq!(r.failing_points, vec![1]);
        assert!(r.obstructions.iter().any(|e| e.x == 1 && e.z == PointSet::single(1)));
    }

    #[test]
    fn constant_sheaves_are_gersten() {
        for m in [RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(2)] {
            for level in 0..=2 {
                let th = EmTheory::new(&AbSheaf::constant(&m, &Ab::from_cyclic_factors(&[2, 0])), level);
                for q in 0..=3 {
                    let r = gersten_check(&th, q, CAP).unwrap();
                    assert!(r.gersten() && r.agree(), "level {level} q {q}: {:?}", r.notes);
                }
            }
        }
    }

    #[test]
    fn zero_dimensional_models_are_gersten() {
        let m = RankedPosetModel::from_ids(&[("a", 0), ("b", 0)], &[]).unwrap();
        let th = EmTheory::new(&AbSheaf::skyscraper(&m, 0, &Ab::cyclic(2)), 1);
        for q in 0..=2 {
            assert!(gersten_check(&th, q, CAP).unwrap().gersten());
        }
    }

    #[test]
    fn gersten_complexes_are_functorial() {
        let m = RankedPosetModel::dedekind(2);
        let th = EmTheory::new(&AbSheaf::twisted(&m, &Ab::free(1), 2), 1);
        for v in m.opens_in(m.all(), CAP).unwrap() {
            for q in 0..=2 {
                assert!(functoriality_check(&th, m.all(), v, q).unwrap().is_empty());
            }
        }
        let tt = TorsorTheory::new(&GroupSheaf::constant(&m, &FinGroup::symmetric(3)), CAP);
        for v in m.opens_in(m.all(), CAP).unwrap() {
            assert!(functoriality_check(&tt, m.all(), v, 1).unwrap().is_empty());
        }
    }

    #[test]
    fn fringe_matches_local_cohomology() {
        let m = RankedPosetModel::chain(2);
        for f in [AbSheaf::constant(&m, &Ab::free(1)), AbSheaf::twisted(&m, &Ab::free(1), 3), AbSheaf::skyscraper(&m, 2, &Ab::cyclic(2))] {
            for level in 0..=2 {
                let th = EmTheory::new(&f, level);
                for q in 0..=3 {
                    assert!(em_fringe_check(&th, m.all(), q).unwrap().iter().all(FringeSlot::matches));
                }
            }
        }
    }

    #[test]
    fn torsor_gersten_on_a_dedekind_model() {
        let m = RankedPosetModel::dedekind(2);
        let th = TorsorTheory::new(&GroupSheaf::constant(&m, &FinGroup::symmetric(3)), CAP);
        let r = gersten_check(&th, 1, CAP).unwrap();
        assert!(r.gersten() && r.agree(), "{:?}", r.notes);
        let g = gersten_complex(&th, m.all(), 1).unwrap();
        assert_eq!(Fin::cardinality(&g.term(0)), Some(6));
    }
}

