use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::model::RankedPosetModel;
use super::sheaf::{AbSheaf, AbSheafMap};
use super::subq::Subquotient;
use super::support::{cokernel_sheaf, decomposition, on_skeleton, sections_with_support, skeleton_decomposition};
use super::system::gersten_complex;
use super::theory::{EmTheory, Pair, SupportTheory};
use crate::algebra::{Ab, Hom, Mat};
use crate::world::{Lin, World};
use crate::{Error, Result};

/// An augmented complex of sheaves `F -> C^0 -> C^1 -> ... -> C^top`.
#[derive(Clone, Debug)]
pub struct SheafComplex {
    pub source: AbSheaf,
    pub terms: Vec<AbSheaf>,
    /// `d[p]: C^p -> C^{p+1}`.
    pub d: Vec<AbSheafMap>,
    pub aug: AbSheafMap,
}

impl SheafComplex {
    pub fn new(source: AbSheaf, terms: Vec<AbSheaf>, d: Vec<AbSheafMap>, aug: AbSheafMap) -> Result<Self> {
        if terms.is_empty() || d.len() + 1 != terms.len() {
            return Err(Error::invalid("a complex of sheaves needs one differential less than terms"));
        }
        if !aug.is_natural(&source, &terms[0]) {
            return Err(Error::invalid("the augmentation is not a map of sheaves"));
        }
        for (p, dp) in d.iter().enumerate() {
            if !dp.is_natural(&terms[p], &terms[p + 1]) {
                return Err(Error::invalid(format!("d^{p} is not a map of sheaves")));
            }
        }
        let c = SheafComplex { source, terms, d, aug };
        for p in 0..c.d.len() {
            if !c.d[p].compose(&c.d_in(p)).is_zero() {
                return Err(Error::invalid(format!("d^{p} does not kill the image of the previous map")));
            }
        }
        Ok(c)
    }

    pub fn model(&self) -> &RankedPosetModel {
        self.source.model()
    }

    pub fn top(&self) -> usize {
        self.terms.len() - 1
    }

    /// The map into `C^p`: the augmentation for `p = 0`.
    pub fn d_in(&self, p: usize) -> AbSheafMap {
        if p == 0 {
            self.aug.clone()
        } else {
            self.d[p - 1].clone()
        }
    }

    /// `d^p`, zero into the zero sheaf above the top.
    pub fn d_out(&self, p: usize) -> AbSheafMap {
        match self.d.get(p) {
            Some(d) => d.clone(),
            None => AbSheafMap { maps: self.terms[p].stalks().iter().map(|a| Hom::zero(a.clone(), Ab::trivial())).collect() },
        }
    }

    /// The complex cut at degree `top`, padded with zero sheaves if needed.
    pub fn truncated(&self, top: usize) -> SheafComplex {
        let mut terms = self.terms.clone();
        let mut d = self.d.clone();
        let zero = AbSheaf::zero(self.model());
        while terms.len() <= top {
            let last = terms.last().expect("nonempty").clone();
            d.push(AbSheafMap { maps: last.stalks().iter().map(|a| Hom::zero(a.clone(), Ab::trivial())).collect() });
            terms.push(zero.clone());
        }
        terms.truncate(top + 1);
        d.truncate(top);
        SheafComplex { source: self.source.clone(), terms, d, aug: self.aug.clone() }
    }
}

fn vanishes_below(m: &RankedPosetModel, k: usize, stalk: impl Fn(usize) -> Result<Ab>) -> Result<bool> {
    for x in 0..m.len() {
        if m.codim(x) < k && !stalk(x)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The support conditions on an augmented complex, numbered as in the
/// uniqueness theorem: (1)–(3) and (i)–(iii).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CousinConditions {
    /// (1) = (i): `C^p ≅ ∏_{x ∈ X^{(p)}} x_* C^p_x`.
    pub skeleton: Vec<bool>,
    /// The same through the unit `C^p -> H^0_{Z^p/Z^{p+1}}(C^p)`.
    pub skeleton_unit: Vec<bool>,
    /// (2): `(p, C^p / im C^{p-1} supported in Z^{p+1})`.
    pub quotients: Vec<(usize, bool)>,
    /// (3): kernel and cokernel of `F -> C^0` supported in `Z^1`.
    pub augmentation: bool,
    /// (ii): `(p, H^p supported in Z^{p+2})`.
    pub cohomology: Vec<(usize, bool)>,
    /// (iii): `ker(F -> H^0)` in `Z^1`, its cokernel in `Z^2`.
    pub augmentation_cohomology: bool,
}

impl CousinConditions {
    /// Failures of (1)–(3), in order.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (p, ok) in self.skeleton.iter().enumerate() {
            if !ok {
                out.push(format!("skeleton: C^{p} is not supported in X^({p})"));
            }
        }
        for &(p, ok) in &self.quotients {
            if !ok {
                out.push(format!("quotient: C^{p} / im C^{} is not supported in Z^{}", p - 1, p + 1));
            }
        }
        if !self.augmentation {
            out.push(String::from("augmentation: kernel or cokernel of F -> C^0 is not supported in Z^1"));
        }
        out
    }

    /// Failures of (i)–(iii).
    pub fn cohomological_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (p, ok) in self.skeleton.iter().enumerate() {
            if !ok {
                out.push(format!("skeleton: C^{p} is not supported in X^({p})"));
            }
        }
        for &(p, ok) in &self.cohomology {
            if !ok {
                out.push(format!("cohomology: H^{p} is not supported in Z^{}", p + 2));
            }
        }
        if !self.augmentation_cohomology {
            out.push(String::from("augmentation: F -> H^0 is not an isomorphism off Z^1 and Z^2"));
        }
        out
    }

    pub fn holds(&self) -> bool {
        self.failures().is_empty() && self.cohomological_failures().is_empty()
    }
}

/// Checks the conditions. A `full` complex is exact above its top, so (2)
/// and (ii) are checked in every positive degree; otherwise only below
/// the top.
pub fn cousin_conditions(cx: &SheafComplex, full: bool) -> Result<CousinConditions> {
    let m = cx.model();
    let top = cx.top();
    let last = if full { top } else { top.saturating_sub(1) };
    let mut skeleton = Vec::new();
    let mut skeleton_unit = Vec::new();
    for (p, c) in cx.terms.iter().enumerate() {
        skeleton.push(skeleton_decomposition(c, p).is_some());
        skeleton_unit.push(on_skeleton(c, p)?);
    }
    let mut quotients = Vec::new();
    let mut cohomology = Vec::new();
    for p in 1..=last {
        let din = cx.d_in(p);
        let dout = cx.d_out(p);
        let q = vanishes_below(m, p + 1, |x| Ok(Subquotient::quotient(cx.terms[p].stalk(x), &din.maps[x].image())?.ab))?;
        quotients.push((p, q));
        let h = vanishes_below(m, p + 2, |x| Ok(Subquotient::new(cx.terms[p].stalk(x), &dout.maps[x].kernel(), &din.maps[x].image())?.ab))?;
        cohomology.push((p, h));
    }
    let aug = &cx.aug;
    let ker = vanishes_below(m, 1, |x| Ok(Subquotient::sub(cx.source.stalk(x), &aug.maps[x].kernel())?.ab))?;
    let coker = vanishes_below(m, 1, |x| Ok(Subquotient::quotient(cx.terms[0].stalk(x), &aug.maps[x].image())?.ab))?;
    let d0 = cx.d_out(0);
    let h0_coker = vanishes_below(m, 2, |x| Ok(Subquotient::new(cx.terms[0].stalk(x), &d0.maps[x].kernel(), &aug.maps[x].image())?.ab))?;
    Ok(CousinConditions { skeleton, skeleton_unit, quotients, augmentation: ker && coker, cohomology, augmentation_cohomology: ker && h0_coker })
}

/// The Cousin complex with its condition report.
#[derive(Clone, Debug)]
pub struct CousinComplex {
    pub complex: SheafComplex,
    pub conditions: CousinConditions,
}

/// `C^0 = H^0_{X/Z^1}(H^0_{X/Z^1}(F))`, then
/// `C^{p+1} = H^0_{Z^{p+1}/Z^{p+2}}(C^p / im C^{p-1})` up to `dim`.
pub fn cousin_complex(f: &AbSheaf) -> Result<CousinComplex> {
    let m = f.model();
    let all = m.all();
    let g1 = sections_with_support(f, all, Some(m.at_least(1)))?;
    let u1 = g1.unit(f)?;
    let g2 = sections_with_support(&g1.sheaf, all, Some(m.at_least(1)))?;
    let u2 = g2.unit(&g1.sheaf)?;
    let aug = u2.compose(&u1);
    let mut terms = alloc::vec![g2.sheaf];
    let mut d: Vec<AbSheafMap> = Vec::new();
    for p in 0..m.dim() {
        let into = if p == 0 { aug.clone() } else { d[p - 1].clone() };
        let q = cokernel_sheaf(&into, &terms[p])?;
        let h = sections_with_support(&q.sheaf, m.at_least(p + 1), Some(m.at_least(p + 2)))?;
        let unit = h.unit(&q.sheaf).map_err(|_| Error::invalid(format!("C^{p} / im C^{} is not supported in Z^{}", p as isize - 1, p + 1)))?;
        d.push(unit.compose(&q.projection()));
        terms.push(h.sheaf);
    }
    let complex = SheafComplex::new(f.clone(), terms, d, aug)?;
    let conditions = cousin_conditions(&complex, true)?;
    Ok(CousinComplex { complex, conditions })
}

/// The outcome of comparing a candidate with the Cousin complex.
#[derive(Clone, Debug)]
pub enum CousinVerdict {
    /// `ψ^p: C^p(F) -> candidate^p`, one per degree.
    Isomorphic(Vec<AbSheafMap>),
    Failed(String),
}

impl CousinVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, CousinVerdict::Isomorphic(_))
    }
}

/// Glues maps given at the points of `X^{(p)}` along the decompositions of
/// two sheaves on that skeleton.
fn glue(src: &AbSheaf, tgt: &AbSheaf, p: usize, at: &BTreeMap<usize, Hom>) -> Result<AbSheafMap> {
    let m = src.model();
    let mut maps = Vec::new();
    for y in 0..m.len() {
        let xs = m.sorted(m.star(y).inter(m.with_codim(p)));
        let ds = decomposition(src, p, y);
        let dt = decomposition(tgt, p, y).inverse().ok_or_else(|| Error::invalid(format!("C^{p} does not decompose at {}", m.id(y))))?;
        let parts: Vec<Hom> = xs.iter().map(|x| at[x].clone()).collect();
        let mid = if parts.is_empty() { Hom::zero(ds.tgt.clone(), dt.src.clone()) } else { Lin::product_map(&parts) };
        maps.push(dt.compose(&mid.compose(&ds)));
    }
    Ok(AbSheafMap { maps })
}

fn same_map(a: &AbSheafMap, b: &AbSheafMap) -> bool {
    a.maps.iter().zip(&b.maps).all(|(f, g)| f.m == g.m)
}

/// Builds the comparison `ψ: C(F) -> candidate` degree by degree: at the
/// generic points from the augmentations, at `x ∈ X^{(p+1)}` by the factorization
/// `ψ^{p+1}_x d^p_x = d'^p_x ψ^p_x`, then glued along the decompositions.
pub fn cousin_verify(candidate: &SheafComplex) -> Result<CousinVerdict> {
    let conditions = cousin_conditions(candidate, false)?;
    if let Some(f) = conditions.failures().into_iter().next() {
        return Ok(CousinVerdict::Failed(f));
    }
    let m = candidate.model();
    let top = candidate.top();
    let cousin = cousin_complex(&candidate.source)?.complex.truncated(top);
    let mut psi: Vec<AbSheafMap> = Vec::new();
    let mut at = BTreeMap::new();
    for x in m.with_codim(0).iter() {
        let Some(inv) = cousin.aug.maps[x].inverse() else {
            return Ok(CousinVerdict::Failed(format!("the Cousin augmentation is not invertible at {}", m.id(x))));
        };
        at.insert(x, candidate.aug.maps[x].compose(&inv));
    }
    psi.push(glue(&cousin.terms[0], &candidate.terms[0], 0, &at)?);
    for p in 0..top {
        let mut at = BTreeMap::new();
        for x in m.with_codim(p + 1).iter() {
            let d = &cousin.d[p].maps[x];
            let along = candidate.d[p].maps[x].compose(&psi[p].maps[x]);
            let mut cols = Vec::new();
            for g in d.tgt.generators() {
                let Some(c) = d.lift(&g) else {
                    return Ok(CousinVerdict::Failed(format!("d^{p} of the Cousin complex is not onto at {}", m.id(x))));
                };
                cols.push(along.apply(&c));
            }
            let tgt = candidate.terms[p + 1].stalk(x).clone();
            let mat = if cols.is_empty() { Mat::zeros(tgt.dim(), 0) } else { Mat::from_cols(&cols, tgt.dim()) };
            match Hom::new(d.tgt.clone(), tgt, mat) {
                Ok(h) => at.insert(x, h),
                Err(_) => return Ok(CousinVerdict::Failed(format!("ψ^{} is not well defined at {}", p + 1, m.id(x)))),
            };
        }
        psi.push(glue(&cousin.terms[p + 1], &candidate.terms[p + 1], p + 1, &at)?);
    }
    for (p, f) in psi.iter().enumerate() {
        if !f.is_natural(&cousin.terms[p], &candidate.terms[p]) {
            return Ok(CousinVerdict::Failed(format!("ψ^{p} is not a map of sheaves")));
        }
        if !f.is_iso() {
            return Ok(CousinVerdict::Failed(format!("ψ^{p} is not an isomorphism")));
        }
    }
    if !same_map(&psi[0].compose(&cousin.aug), &candidate.aug) {
        return Ok(CousinVerdict::Failed(String::from("ψ^0 does not respect the augmentations")));
    }
    for p in 0..top {
        if !same_map(&candidate.d[p].compose(&psi[p]), &psi[p + 1].compose(&cousin.d[p])) {
            return Ok(CousinVerdict::Failed(format!("ψ does not commute with d^{p}")));
        }
    }
    Ok(CousinVerdict::Isomorphic(psi))
}

/// Line `q = level` of `K(F, level)` as a complex of sheaves: the stalk at
/// `y` is the Gersten complex of `U_y`, restrictions keep the factors at
/// generizations, and the augmentation is `F_y ≅ H^0(U_y, F)` followed by `τ`.
pub fn gersten_sheaf_complex(th: &EmTheory) -> Result<SheafComplex> {
    let m = th.model();
    let q = th.level();
    let f = th.sheaf();
    let locals = (0..m.len()).map(|y| gersten_complex(th, m.star(y), q)).collect::<Result<Vec<_>>>()?;
    let mut terms = Vec::new();
    for p in 0..=q {
        let stalks: Vec<Ab> = locals.iter().map(|g| g.term(p)).collect();
        let mut res = BTreeMap::new();
        for (y, z) in m.covers() {
            let (gy, gz) = (&locals[y], &locals[z]);
            let maps: Vec<Hom> = gz.points[p]
                .iter()
                .map(|x| Lin::projection(&gy.factors[p], gy.points[p].iter().position(|w| w == x).expect("generizations of z are generizations of y")))
                .collect();
            let h = if maps.is_empty() { Hom::zero(stalks[y].clone(), stalks[z].clone()) } else { Lin::pairing(&stalks[y], &maps) };
            res.insert((y, z), h);
        }
        terms.push(AbSheaf::new(m, stalks, res)?);
    }
    let d = (0..q)
        .map(|p| AbSheafMap { maps: locals.iter().map(|g| g.complex.complex.d(q - p)).collect() })
        .collect();
    let mut aug = Vec::new();
    for (y, g) in locals.iter().enumerate() {
        let rc = th.complex(Pair::whole(m.star(y)))?;
        let c0 = &rc.cochains[0];
        let h0 = &rc.h[0];
        let mut cols = Vec::new();
        for s in f.stalk(y).generators() {
            let values: Vec<_> = c0.chains.iter().map(|c| f.res(y, c[0]).apply(&s)).collect();
            cols.push(h0.coords(&c0.cochain(&values)).ok_or_else(|| Error::invalid("restrictions do not form a global section"))?);
        }
        let mat = if cols.is_empty() { Mat::zeros(h0.ab.dim(), 0) } else { Mat::from_cols(&cols, h0.ab.dim()) };
        let iso = Hom::new(f.stalk(y).clone(), h0.ab.clone(), mat)?;
        aug.push(g.complex.tau.compose(&iso));
    }
    SheafComplex::new(f.clone(), terms, d, AbSheafMap { maps: aug })
}

/// Adds a constant summand `a` to `C^p` with zero maps in and out.
pub fn with_constant_summand(cx: &SheafComplex, p: usize, a: &Ab) -> Result<SheafComplex> {
    let m = cx.model();
    let extra = AbSheaf::constant(m, a);
    let big = AbSheaf::direct_sum(&[cx.terms[p].clone(), extra.clone()])?;
    let incl = |x: usize| -> Hom {
        let (_, i, _) = Ab::direct_sum(&[cx.terms[p].stalk(x).clone(), extra.stalk(x).clone()]);
        Hom::new(cx.terms[p].stalk(x).clone(), big.stalk(x).clone(), i[0].clone()).expect("summand inclusion")
    };
    let proj = |x: usize| -> Hom {
        let (_, _, pr) = Ab::direct_sum(&[cx.terms[p].stalk(x).clone(), extra.stalk(x).clone()]);
        Hom::new(big.stalk(x).clone(), cx.terms[p].stalk(x).clone(), pr[0].clone()).expect("summand projection")
    };
    let mut out = cx.clone();
    out.terms[p] = big.clone();
    if p == 0 {
        out.aug = AbSheafMap { maps: (0..m.len()).map(|x| incl(x).compose(&cx.aug.maps[x])).collect() };
    } else {
        out.d[p - 1] = AbSheafMap { maps: (0..m.len()).map(|x| incl(x).compose(&cx.d[p - 1].maps[x])).collect() };
    }
    if p < cx.d.len() {
        out.d[p] = AbSheafMap { maps: (0..m.len()).map(|x| cx.d[p].maps[x].compose(&proj(x))).collect() };
    }
    SheafComplex::new(out.source, out.terms, out.d, out.aug)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coniveau::model::PointSet;

    fn fixtures() -> Vec<AbSheaf> {
        let dvr = RankedPosetModel::dvr();
        let c2 = RankedPosetModel::chain(2);
        let d2 = RankedPosetModel::dedekind(2);
        let two = RankedPosetModel::from_ids(&[("a", 0), ("b", 0), ("s", 1)], &[("s", "a"), ("s", "b")]).unwrap();
        alloc::vec![
            AbSheaf::constant(&dvr, &Ab::free(1)),
            AbSheaf::twisted(&dvr, &Ab::free(1), 2),
            AbSheaf::skyscraper(&dvr, 1, &Ab::cyclic(5)),
            AbSheaf::constant(&c2, &Ab::cyclic(4)),
            AbSheaf::twisted(&c2, &Ab::cyclic(8), 2),
            AbSheaf::skyscraper(&c2, 1, &Ab::free(1)),
            AbSheaf::constant(&d2, &Ab::from_cyclic_factors(&[2, 0])),
            AbSheaf::constant(&two, &Ab::free(1)),
            AbSheaf::extension_by_zero(&dvr, PointSet::single(0), &Ab::free(1)).unwrap(),
        ]
    }

    #[test]
    fn constant_sheaf_resolves_by_the_generic_skyscraper() {
        let m = RankedPosetModel::chain(2);
        let a = Ab::cyclic(6);
        let c = cousin_complex(&AbSheaf::constant(&m, &a)).unwrap();
        assert!(c.conditions.holds(), "{:?}", c.conditions);
        let cx = &c.complex;
        assert!(cx.terms[0].stalks().iter().all(|s| *s == a));
        assert!(cx.terms[1..].iter().all(|t| t.stalks().iter().all(Ab::is_trivial)));
        assert!(cx.aug.maps.iter().all(Hom::is_injective));
    }

    #[test]
    fn closed_point_skyscraper_has_no_generic_term() {
        let m = RankedPosetModel::dvr();
        let c = cousin_complex(&AbSheaf::skyscraper(&m, 1, &Ab::cyclic(3))).unwrap();
        assert!(c.complex.terms[0].stalks().iter().all(Ab::is_trivial));
        assert!(c.complex.terms[1].stalks().iter().all(Ab::is_trivial));
        assert!(c.conditions.holds());
        assert!(!c.complex.aug.maps[1].is_injective());
    }

    #[test]
    fn zero_sheaf_gives_the_zero_complex() {
        let m = RankedPosetModel::chain(2);
        let c = cousin_complex(&AbSheaf::zero(&m)).unwrap();
        assert!(c.complex.terms.iter().all(|t| t.stalks().iter().all(Ab::is_trivial)));
        assert!(c.conditions.holds());
    }

    #[test]
    fn twisted_sheaf_has_a_torsion_cousin_term() {
        let m = RankedPosetModel::dvr();
        let c = cousin_complex(&AbSheaf::twisted(&m, &Ab::free(1), 3)).unwrap();
        assert_eq!(c.complex.terms[1].stalk(1), &Ab::cyclic(3));
        assert!(c.conditions.holds());
    }

    #[test]
    fn cousin_complexes_satisfy_their_conditions_and_compare_to_themselves() {
        for f in fixtures() {
            let c = cousin_complex(&f).unwrap();
            assert!(c.conditions.holds(), "{:?}", c.conditions);
            match cousin_verify(&c.complex).unwrap() {
                CousinVerdict::Isomorphic(psi) => {
                    for (p, map) in psi.iter().enumerate() {
                        assert!(same_map(map, &AbSheafMap::identity(&c.complex.terms[p])));
                    }
                }
                CousinVerdict::Failed(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn gersten_complexes_are_cousin_complexes() {
        for f in fixtures() {
            let m = f.model().clone();
            for q in m.dim()..=m.dim() + 1 {
                let th = EmTheory::new(&f, q);
                let g = gersten_sheaf_complex(&th).unwrap();
                let v = cousin_verify(&g).unwrap();
                assert!(v.is_iso(), "{v:?}");
            }
        }
    }

    #[test]
    fn extra_summand_breaks_the_skeleton() {
        let m = RankedPosetModel::dvr();
        let c = cousin_complex(&AbSheaf::constant(&m, &Ab::free(1))).unwrap();
        let bad = with_constant_summand(&c.complex, 1, &Ab::cyclic(2)).unwrap();
        match cousin_verify(&bad).unwrap() {
            CousinVerdict::Failed(e) => assert!(e.starts_with("skeleton: C^1"), "{e}"),
            CousinVerdict::Isomorphic(_) => panic!("accepted a non-skeletal candidate"),
        }
    }
}
