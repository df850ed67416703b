//! Homotopical complexes, their homotopy and exactness, and the
//! cohomotopical presentation `C^n = E_{d-n}`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::world::{Kind, World};
use crate::{Error, Result};

/// `E_d -> ... -> E_2 -> E_1 => E_0`, with `d_1` given by the action of `E_1`
/// on `E_0` applied to the base point.
#[derive(Clone, Debug)]
pub struct HtpyComplex<W: World> {
    terms: Vec<W::Obj>,
    /// `diffs[k]` is `d_{k+2}: E_{k+2} -> E_{k+1}`.
    diffs: Vec<W::Map>,
    action: W::Act,
}

impl<W: World> HtpyComplex<W> {
    pub fn new(terms: Vec<W::Obj>, diffs: Vec<W::Map>, action: W::Act) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a complex needs a degree-0 term"));
        }
        let top = terms.len() - 1;
        if diffs.len() != top.saturating_sub(1) {
            return Err(Error::invalid(format!("expected {} differentials, got {}", top.saturating_sub(1), diffs.len())));
        }
        for (n, t) in terms.iter().enumerate() {
            let k = W::kind(t);
            if (n == 1 && k == Kind::Set) || (n >= 2 && k != Kind::Abelian) {
                return Err(Error::invalid(format!("term of degree {n} has the wrong kind")));
            }
        }
        let e1 = terms.get(1).cloned().unwrap_or_else(W::point);
        if !W::same_obj(W::act_group(&action), &e1) || !W::same_obj(W::act_carrier(&action), &terms[0]) {
            return Err(Error::invalid("the action must be of E_1 on E_0"));
        }
        if !W::act_is_valid(&action) {
            return Err(Error::invalid("the action of E_1 on E_0 violates the action axioms"));
        }
        for (k, d) in diffs.iter().enumerate() {
            let n = k + 2;
            if !W::same_obj(W::src(d), &terms[n]) || !W::same_obj(W::tgt(d), &terms[n - 1]) {
                return Err(Error::invalid(format!("d_{n} has the wrong source or target")));
            }
            if !W::is_hom(d) {
                return Err(Error::invalid(format!("d_{n} is not a homomorphism")));
            }
        }
        let c = HtpyComplex { terms, diffs, action };
        for n in 2..=c.top() {
            if !W::is_trivial_map(&W::compose(&c.d(n - 1), &c.d(n))) {
                return Err(Error::invalid(format!("d_{} o d_{n} is not trivial", n - 1)));
            }
        }
        Ok(c)
    }

    pub fn top(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, n: usize) -> W::Obj {
        self.terms.get(n).cloned().unwrap_or_else(W::point)
    }

    pub fn terms(&self) -> &[W::Obj] {
        &self.terms
    }

    pub fn action(&self) -> &W::Act {
        &self.action
    }

    /// `d_n` for `n >= 1`; trivial above the top.
    pub fn d(&self, n: usize) -> W::Map {
        if n == 1 {
            return W::act_on_base(&self.action);
        }
        match self.diffs.get(n - 2) {
            Some(m) => m.clone(),
            None => W::zero_map(&self.term(n), &self.term(n - 1)),
        }
    }

    pub fn structurally_eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(a, b)| W::same_obj(a, b))
            && self.diffs.iter().zip(&other.diffs).all(|(a, b)| W::map_eq(a, b))
            && W::map_eq(&W::act_on_base(&self.action), &W::act_on_base(&other.action))
    }
}

/// `ε: E_0 -> F`, constant on `E_1`-orbits.
#[derive(Clone, Debug)]
pub struct Augmentation<W: World> {
    pub eps: W::Map,
}

impl<W: World> Augmentation<W> {
    pub fn new(c: &HtpyComplex<W>, eps: W::Map) -> Result<Self> {
        if !W::same_obj(W::src(&eps), &c.term(0)) {
            return Err(Error::invalid("augmentation must start at E_0"));
        }
        if !W::is_pointed(&eps) || !W::is_invariant(c.action(), &eps) {
            return Err(Error::invalid("augmentation is not E_1-equivariant"));
        }
        Ok(Augmentation { eps })
    }

    pub fn to_point(c: &HtpyComplex<W>) -> Self {
        Augmentation { eps: W::zero_map(&c.term(0), &W::point()) }
    }
}

/// One homotopy object `π_n`, as a subquotient of `E_n`.
#[derive(Clone, Debug)]
pub struct Homotopy<W: World> {
    pub degree: usize,
    pub carrier: W::Obj,
    pub quot: W::Quot,
    pub cardinality: Option<u128>,
    pub label: String,
    /// Set for `π_1` when the image of `d_2` is normal but not central.
    pub warning: Option<String>,
}

impl<W: World> Homotopy<W> {
    pub fn is_trivial(&self) -> bool {
        self.cardinality == Some(1)
    }
}

/// `π_n` for `n = 0..=top`; `π_0` uses the augmentation (or the point).
pub fn homotopy_groups<W: World>(c: &HtpyComplex<W>, aug: Option<&Augmentation<W>>) -> Result<Vec<Homotopy<W>>> {
    let mut out = Vec::new();
    let pt;
    let aug = match aug {
        Some(a) => a,
        None => {
            pt = Augmentation::to_point(c);
            &pt
        }
    };
    let e0 = c.term(0);
    let ker_eps = W::preimage(&aug.eps, &W::base(W::tgt(&aug.eps)));
    let q0 = W::orbits(c.action(), &W::full(&c.term(1)), &ker_eps)?;
    out.push(make(0, e0, q0, None));
    for n in 1..=c.top() {
        let en = c.term(n);
        let ker = W::preimage(&c.d(n), &W::base(&c.term(n - 1)));
        let next = c.d(n + 1);
        let mut warning = None;
        if n == 1 {
            let im = W::image(&next, &W::full(&c.term(2)));
            if let Some(w) = W::normality_witness(&en, &im, &ker) {
                return Err(Error::NotNormal { degree: 1, witness: w });
            }
            if !W::is_central(&en, &im) {
                warning = Some(String::from("image of d_2 is normal but not central"));
            }
        }
        let q = W::orbits(&W::translation(&next), &W::full(&c.term(n + 1)), &ker)?;
        out.push(make(n, en, q, warning));
    }
    Ok(out)
}

fn make<W: World>(degree: usize, carrier: W::Obj, quot: W::Quot, warning: Option<String>) -> Homotopy<W> {
    let cardinality = W::quot_card(&carrier, &quot);
    let label = W::quot_describe(&carrier, &quot);
    Homotopy { degree, carrier, quot, cardinality, label, warning }
}

/// `X --τ--> C^0 -> ... => C^d --ε--> F`, stored in homotopical indexing.
#[derive(Clone, Debug)]
pub struct BiAugmentedComplex<W: World> {
    pub complex: HtpyComplex<W>,
    pub tau: W::Map,
    pub eps: Option<W::Map>,
}

impl<W: World> BiAugmentedComplex<W> {
    pub fn new(complex: HtpyComplex<W>, tau: W::Map, eps: Option<W::Map>) -> Result<Self> {
        let d = complex.top();
        if !W::same_obj(W::tgt(&tau), &complex.term(d)) {
            return Err(Error::invalid("tau must land in C^0"));
        }
        let want = match d {
            0 => None,
            1 => Some(Kind::Group),
            _ => Some(Kind::Abelian),
        };
        let kx = W::kind(W::src(&tau));
        let ok = match want {
            None => true,
            Some(Kind::Group) => kx != Kind::Set,
            Some(k) => kx == k,
        };
        if !ok || !W::is_hom(&tau) || !W::is_pointed(&tau) {
            return Err(Error::invalid("tau has the wrong kind for the truncation degree"));
        }
        if d >= 1 && !W::is_trivial_map(&W::compose(&complex.d(d), &tau)) {
            return Err(Error::invalid("d^0 o tau is not trivial"));
        }
        if let Some(e) = &eps {
            Augmentation::new(&complex, e.clone())?;
        }
        Ok(BiAugmentedComplex { complex, tau, eps })
    }

    pub fn truncation(&self) -> usize {
        self.complex.top()
    }

    pub fn x(&self) -> &W::Obj {
        W::src(&self.tau)
    }

    /// `C^n = E_{d-n}`.
    pub fn c(&self, n: usize) -> W::Obj {
        self.complex.term(self.truncation() - n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Strong,
}

/// A slot of a bi-augmented complex, named in cohomotopical degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CxSlot {
    /// `Ker τ != *`.
    TauKernel,
    /// `im τ != Ker d^0`.
    TauImage,
    /// Nontrivial homotopy at `C^n` for `0 < n < d`.
    Internal(usize),
    /// `E_1` does not act transitively on `Ker ε`.
    EpsTransitive,
    /// `E_0 / E_1 -> F` is not a monomorphism.
    EpsMono,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactVerdict {
    pub holds: bool,
    /// Exact on the `τ` side and internally (ignores `ε`).
    pub tau_side: bool,
    pub failures: Vec<CxSlot>,
}

pub fn check_exact<W: World>(c: &BiAugmentedComplex<W>, mode: Mode) -> ExactVerdict {
    let d = c.truncation();
    let cx = &c.complex;
    let mut failures = Vec::new();
    let top = cx.term(d);
    if !W::is_base(c.x(), &W::preimage(&c.tau, &W::base(&top))) {
        failures.push(CxSlot::TauKernel);
    }
    if d >= 1 {
        let im = W::image(&c.tau, &W::full(c.x()));
        let ker = W::preimage(&cx.d(d), &W::base(&cx.term(d - 1)));
        if !W::sub_eq(&top, &im, &ker) {
            failures.push(CxSlot::TauImage);
        }
    }
    for n in 1..d {
        let ker = W::preimage(&cx.d(n), &W::base(&cx.term(n - 1)));
        let im = W::image(&cx.d(n + 1), &W::full(&cx.term(n + 1)));
        if !W::sub_eq(&cx.term(n), &im, &ker) {
            failures.push(CxSlot::Internal(d - n));
        }
    }
    let tau_side = failures.is_empty();
    if let Some(eps) = &c.eps {
        let ker = W::preimage(eps, &W::base(W::tgt(eps)));
        let e1 = W::full(&cx.term(1));
        match W::orbits(cx.action(), &e1, &ker) {
            Ok(q) if W::quot_card(&cx.term(0), &q) == Some(1) => {}
            _ => failures.push(CxSlot::EpsTransitive),
        }
        if mode == Mode::Strong {
            let all = W::full(&cx.term(0));
            let mono = W::orbits(cx.action(), &e1, &all).map(|q| W::quot_injective(&q, eps)).unwrap_or(false);
            if !mono {
                failures.push(CxSlot::EpsMono);
            }
        }
    }
    ExactVerdict { holds: failures.is_empty(), tau_side, failures }
}

/// `C^0 -> C^1 -> ... => C^d` in cohomotopical indexing.
#[derive(Clone, Debug)]
pub struct CohomotopicalComplex<W: World> {
    pub c: Vec<W::Obj>,
    /// `d[k]: C^k -> C^{k+1}` for `k < d - 1`.
    pub d: Vec<W::Map>,
    /// `C^{d-1}` acting on `C^d`.
    pub last: W::Act,
}

/// Cohomotopical presentation of a complex truncated at `d`.
pub fn reindex<W: World>(e: &HtpyComplex<W>, d: usize) -> Result<CohomotopicalComplex<W>> {
    if e.terms.iter().skip(d + 1).any(|t| !W::is_point(t)) {
        return Err(Error::invalid(format!("complex is not {d}-truncated")));
    }
    let c = (0..=d).map(|n| e.term(d - n)).collect();
    let diffs = (0..d.saturating_sub(1)).map(|k| e.d(d - k)).collect();
    Ok(CohomotopicalComplex { c, d: diffs, last: e.action.clone() })
}

/// Back to homotopical indexing.
pub fn unindex<W: World>(c: &CohomotopicalComplex<W>) -> Result<HtpyComplex<W>> {
    let d = c.c.len() - 1;
    let terms = (0..=d).map(|n| c.c[d - n].clone()).collect();
    let diffs = (2..=d).map(|n| c.d[d - n].clone()).collect();
    HtpyComplex::new(terms, diffs, c.last.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ab, FinGroup, Hom, Mat};
    use crate::world::{Fin, FinAct, FinMap, FinObj, Lin};
    use alloc::vec;

    fn times2_z4() -> Hom {
        Hom::new(Ab::cyclic(4), Ab::cyclic(4), Mat::from_rows(&[vec![2]], 1)).unwrap()
    }

    #[test]
    fn middle_homotopy_of_times_two() {
        let z4 = Ab::cyclic(4);
        let m = times2_z4();
        let c = HtpyComplex::<Lin>::new(vec![Ab::trivial(), z4.clone(), z4.clone(), z4.clone()], vec![m.clone(), m], Lin::trivial_action(&z4, &Ab::trivial()))
            .unwrap();
        let h = homotopy_groups(&c, None).unwrap();
        assert!(h[2].is_trivial());
        assert_eq!(h[1].cardinality, Some(2));
        assert_eq!(h[3].cardinality, Some(2));
    }

    #[test]
    fn trivial_differentials_give_the_terms() {
        let z4 = Ab::cyclic(4);
        let z3 = Ab::cyclic(3);
        let c = HtpyComplex::<Lin>::new(vec![Ab::trivial(), z3.clone(), z4.clone()], vec![Hom::zero(z4.clone(), z3.clone())], Lin::trivial_action(&z3, &Ab::trivial()))
            .unwrap();
        let h = homotopy_groups(&c, None).unwrap();
        assert_eq!(h[1].cardinality, Some(3));
        assert_eq!(h[2].cardinality, Some(4));
    }

    #[test]
    fn injective_augmentation_gives_one_orbit() {
        let x = FinObj::set(3);
        let pt = Fin::point();
        let c = HtpyComplex::<Fin>::new(vec![x.clone(), pt.clone()], Vec::new(), Fin::trivial_action(&pt, &x)).unwrap();
        let eps = Augmentation::new(&c, FinMap::new(x.clone(), FinObj::set(3), vec![0, 1, 2]).unwrap()).unwrap();
        let h = homotopy_groups(&c, Some(&eps)).unwrap();
        assert!(h[0].is_trivial());
    }

    #[test]
    fn non_normal_image_is_an_error() {
        // d_2: Z/2 -> S_3 onto a transposition; d_1 trivial.
        let s3g = FinGroup::symmetric(3);
        let tr = (0..6).find(|&x| s3g.element_order(x) == 2).unwrap();
        let s3 = FinObj::group(s3g);
        let z2 = FinObj::group(FinGroup::cyclic(2));
        let pt = Fin::point();
        let d2 = FinMap::new(z2.clone(), s3.clone(), vec![0, tr]).unwrap();
        let c = HtpyComplex::<Fin>::new(vec![pt.clone(), s3.clone(), z2], vec![d2], Fin::trivial_action(&s3, &pt)).unwrap();
        match homotopy_groups(&c, None) {
            Err(Error::NotNormal { degree: 1, .. }) => {}
            other => panic!("expected a normality error, got {other:?}"),
        }
    }

    #[test]
    fn zero_truncated_exactness_is_kernel_of_tau() {
        let x = FinObj::set(3);
        let c0 = FinObj::set(2);
        let pt = Fin::point();
        let cx = HtpyComplex::<Fin>::new(vec![c0.clone()], Vec::new(), Fin::trivial_action(&pt, &c0)).unwrap();
        let good = BiAugmentedComplex::new(cx.clone(), FinMap::new(x.clone(), c0.clone(), vec![0, 1, 1]).unwrap(), None).unwrap();
        assert!(check_exact(&good, Mode::Exact).holds);
        let bad = BiAugmentedComplex::new(cx, FinMap::new(x, c0, vec![0, 0, 1]).unwrap(), None).unwrap();
        assert_eq!(check_exact(&bad, Mode::Exact).failures, vec![CxSlot::TauKernel]);
    }

    #[test]
    fn one_truncated_transitive_on_kernel() {
        // C^0 = S_3 acting on 6 cosets of the trivial group (regular action), ε to a point.
        let s3g = FinGroup::symmetric(3);
        let s3 = FinObj::group(s3g.clone());
        let carrier = FinObj::set(6);
        let table = (0..6).map(|g| (0..6).map(|x| s3g.mul(g, x)).collect()).collect();
        let act = FinAct::new(s3.clone(), carrier.clone(), table).unwrap();
        let cx = HtpyComplex::<Fin>::new(vec![carrier.clone(), s3.clone()], Vec::new(), act).unwrap();
        let pt = Fin::point();
        let tau = Fin::zero_map(&pt, &s3);
        let eps = Fin::zero_map(&carrier, &pt);
        let c = BiAugmentedComplex::new(cx, tau, Some(eps)).unwrap();
        let v = check_exact(&c, Mode::Strong);
        assert!(!v.failures.contains(&CxSlot::EpsTransitive));
        assert!(!v.failures.contains(&CxSlot::EpsMono));
        // Stabilizer of the base point is trivial, so im τ = * = Ker d^0.
        assert!(v.holds);
    }

    #[test]
    fn trivial_tau_with_nontrivial_source_fails() {
        let z2 = Ab::cyclic(2);
        let cx = HtpyComplex::<Lin>::new(vec![Ab::trivial(), Ab::trivial(), z2.clone()], vec![Hom::zero(z2.clone(), Ab::trivial())], Lin::trivial_action(&Ab::trivial(), &Ab::trivial()))
            .unwrap();
        let tau = Hom::zero(Ab::cyclic(3), z2);
        let c = BiAugmentedComplex::new(cx, tau, None).unwrap();
        let v = check_exact(&c, Mode::Exact);
        assert!(v.failures.contains(&CxSlot::TauKernel));
    }

    #[test]
    fn reindex_round_trip() {
        let z4 = Ab::cyclic(4);
        let m = times2_z4();
        let c = HtpyComplex::<Lin>::new(vec![Ab::trivial(), z4.clone(), z4.clone()], vec![m], Lin::trivial_action(&z4, &Ab::trivial())).unwrap();
        let r = reindex(&c, 2).unwrap();
        assert_eq!(r.c.len(), 3);
        assert_eq!(r.c[0], z4);
        let back = unindex(&r).unwrap();
        assert!(back.structurally_eq(&c));
        let single = HtpyComplex::<Fin>::new(vec![FinObj::set(2)], Vec::new(), Fin::trivial_action(&Fin::point(), &FinObj::set(2))).unwrap();
        assert!(unindex(&reindex(&single, 0).unwrap()).unwrap().structurally_eq(&single));
        assert!(reindex(&c, 1).is_err());
    }
}
