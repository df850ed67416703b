use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::pi::{ExactSlot, LongHtpySequence, PiMorphism, PiStructure};
use crate::world::World;
use crate::{Error, Result};

/// An unstable exact couple on the window `0 <= p <= P`, `0 <= n <= N`,
/// written with `n = q - p`.
///
/// Rows are the long sequences
/// `... -> D^{p-1}_{n+1} --β--> E^p_n --γ--> D^p_n --α--> D^{p-1}_n -> ...`
/// ending in `D^{p-1}_1` acting on `E^p_0`. `D^{-1} = *`; above `P` the
/// couple is constant (`α = id`, `E = *`), and degrees above `N` are trivial.
#[derive(Clone, Debug)]
pub struct RightCouple<W: World> {
    p_max: usize,
    n_max: usize,
    d: Vec<Vec<W::Obj>>,
    e: Vec<Vec<W::Obj>>,
    alpha: Vec<Vec<W::Map>>,
    beta: Vec<Vec<W::Map>>,
    gamma: Vec<Vec<W::Map>>,
    action: Vec<W::Act>,
}

/// A failed check, located at `(p, q)` when the location is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub what: String,
}

impl Failure {
    pub fn at(p: usize, q: usize, what: impl Into<String>) -> Self {
        Failure { p: Some(p), q: Some(q), what: what.into() }
    }

    pub fn row(p: usize, what: impl Into<String>) -> Self {
        Failure { p: Some(p), q: None, what: what.into() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CoupleReport {
    pub valid: bool,
    pub failures: Vec<Failure>,
}

impl<W: World> RightCouple<W> {
    /// `d[p][n]`, `e[p][n]`, `alpha[p][n]: D^p_n -> D^{p-1}_n`,
    /// `beta[p][n]: D^{p-1}_{n+1} -> E^p_n` for `n < N`,
    /// `gamma[p][n]: E^p_n -> D^p_n`, `action[p]`: `D^{p-1}_1` on `E^p_0`.
    pub fn new(
        d: Vec<Vec<W::Obj>>,
        e: Vec<Vec<W::Obj>>,
        alpha: Vec<Vec<W::Map>>,
        beta: Vec<Vec<W::Map>>,
        gamma: Vec<Vec<W::Map>>,
        action: Vec<W::Act>,
    ) -> Result<Self> {
        if d.is_empty() || d[0].is_empty() {
            return Err(Error::invalid("a couple needs at least one term"));
        }
        let p_max = d.len() - 1;
        let n_max = d[0].len() - 1;
        let shape = |x: &Vec<Vec<W::Obj>>| x.len() == p_max + 1 && x.iter().all(|r| r.len() == n_max + 1);
        if !shape(&d) || !shape(&e) {
            return Err(Error::invalid("D and E must cover the same rectangular window"));
        }
        let maps_shape = |x: &Vec<Vec<W::Map>>, w: usize| x.len() == p_max + 1 && x.iter().all(|r| r.len() == w);
        if !maps_shape(&alpha, n_max + 1) || !maps_shape(&gamma, n_max + 1) || !maps_shape(&beta, n_max) || action.len() != p_max + 1 {
            return Err(Error::invalid("maps do not cover the window"));
        }
        let c = RightCouple { p_max, n_max, d, e, alpha, beta, gamma, action };
        for p in 0..=p_max as isize {
            let pu = p as usize;
            for n in 0..=n_max {
                let ends = |m: &W::Map, s: &W::Obj, t: &W::Obj| W::same_obj(W::src(m), s) && W::same_obj(W::tgt(m), t);
                if !ends(&c.alpha[pu][n], &c.d_obj(p, n), &c.d_obj(p - 1, n)) {
                    return Err(Error::invalid(format!("alpha at (p, q) = ({p}, {}) has the wrong ends", pu + n)));
                }
                if !ends(&c.gamma[pu][n], &c.e_obj(p, n), &c.d_obj(p, n)) {
                    return Err(Error::invalid(format!("gamma at (p, q) = ({p}, {}) has the wrong ends", pu + n)));
                }
                if n < n_max && !ends(&c.beta[pu][n], &c.d_obj(p - 1, n + 1), &c.e_obj(p, n)) {
                    return Err(Error::invalid(format!("beta at (p, q) = ({p}, {}) has the wrong ends", pu + n)));
                }
            }
            let a = &c.action[pu];
            if !W::same_obj(W::act_group(a), &c.d_obj(p - 1, 1)) || !W::same_obj(W::act_carrier(a), &c.e_obj(p, 0)) {
                return Err(Error::invalid(format!("action in row {p} must be of D^{{p-1}}_1 on E^p_0")));
            }
        }
        Ok(c)
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn d_obj(&self, p: isize, n: usize) -> W::Obj {
        if p < 0 || n > self.n_max {
            return W::point();
        }
        self.d[(p as usize).min(self.p_max)][n].clone()
    }

    pub fn e_obj(&self, p: isize, n: usize) -> W::Obj {
        if p < 0 || p as usize > self.p_max || n > self.n_max {
            return W::point();
        }
        self.e[p as usize][n].clone()
    }

    fn in_window(&self, p: isize) -> bool {
        p >= 0 && p as usize <= self.p_max
    }

    /// `α: D^p_n -> D^{p-1}_n`.
    pub fn alpha(&self, p: isize, n: usize) -> W::Map {
        if n > self.n_max || p < 0 {
            return W::zero_map(&self.d_obj(p, n), &self.d_obj(p - 1, n));
        }
        if p as usize > self.p_max {
            return W::identity(&self.d_obj(p, n));
        }
        self.alpha[p as usize][n].clone()
    }

    /// `β: D^{p-1}_{n+1} -> E^p_n`.
    pub fn beta(&self, p: isize, n: usize) -> W::Map {
        if self.in_window(p) && n < self.n_max {
            return self.beta[p as usize][n].clone();
        }
        W::zero_map(&self.d_obj(p - 1, n + 1), &self.e_obj(p, n))
    }

    /// `γ: E^p_n -> D^p_n`.
    pub fn gamma(&self, p: isize, n: usize) -> W::Map {
        if self.in_window(p) && n <= self.n_max {
            return self.gamma[p as usize][n].clone();
        }
        W::zero_map(&self.e_obj(p, n), &self.d_obj(p, n))
    }

    /// `D^{p-1}_1` acting on `E^p_0`.
    pub fn action(&self, p: isize) -> W::Act {
        if self.in_window(p) {
            return self.action[p as usize].clone();
        }
        W::trivial_action(&self.d_obj(p - 1, 1), &self.e_obj(p, 0))
    }

    /// `D^{p-1}_{n+1}` acting on `E^p_n`: through `β` by translation for
    /// `n >= 1`, the row action for `n = 0`.
    pub fn beta_action(&self, p: isize, n: usize) -> W::Act {
        if n == 0 {
            self.action(p)
        } else {
            W::translation(&self.beta(p, n))
        }
    }

    /// `α^k: D^{from}_n -> D^{from-k}_n`.
    pub fn alpha_pow(&self, from: isize, k: usize, n: usize) -> W::Map {
        let mut m = W::identity(&self.d_obj(from, n));
        for j in 0..k as isize {
            m = W::compose(&self.alpha(from - j, n), &m);
        }
        m
    }

    /// `d_1 = β o γ: E^p_n -> E^{p+1}_{n-1}`.
    pub fn d1(&self, p: isize, n: usize) -> W::Map {
        W::compose(&self.beta(p + 1, n - 1), &self.gamma(p, n))
    }

    /// Row `p` as a long homotopy sequence `E^p -> D^p -> D^{p-1}`.
    pub fn row(&self, p: usize) -> Result<LongHtpySequence<W>> {
        let p = p as isize;
        let n = self.n_max;
        let fib = PiStructure::with_trivial_actions((0..=n).map(|k| self.e_obj(p, k)).collect())?;
        let total = PiStructure::with_trivial_actions((0..=n).map(|k| self.d_obj(p, k)).collect())?;
        let base = PiStructure::with_trivial_actions((0..=n).map(|k| self.d_obj(p - 1, k)).collect())?;
        let f = PiMorphism { maps: (0..=n).map(|k| self.gamma(p, k)).collect() };
        let g = PiMorphism { maps: (0..=n).map(|k| self.alpha(p, k)).collect() };
        let boundary = (0..n).map(|k| self.beta(p, k)).collect();
        LongHtpySequence::new(fib, total, base, f, g, boundary, self.action(p))
    }

    /// Degree-wise product of couples on a common window.
    pub fn product(cs: &[Self]) -> Result<Self> {
        let Some(first) = cs.first() else {
            return Err(Error::invalid("empty product of couples"));
        };
        let (pm, nm) = (first.p_max, first.n_max);
        if cs.iter().any(|c| c.p_max != pm || c.n_max != nm) {
            return Err(Error::invalid("couples in a product must share a window"));
        }
        let objs = |f: &dyn Fn(&Self, isize, usize) -> W::Obj, w: usize| -> Vec<Vec<W::Obj>> {
            (0..=pm as isize).map(|p| (0..w).map(|n| W::product(&cs.iter().map(|c| f(c, p, n)).collect::<Vec<_>>())).collect()).collect()
        };
        let maps = |f: &dyn Fn(&Self, isize, usize) -> W::Map, w: usize| -> Vec<Vec<W::Map>> {
            (0..=pm as isize).map(|p| (0..w).map(|n| W::product_map(&cs.iter().map(|c| f(c, p, n)).collect::<Vec<_>>())).collect()).collect()
        };
        let d = objs(&|c, p, n| c.d_obj(p, n), nm + 1);
        let e = objs(&|c, p, n| c.e_obj(p, n), nm + 1);
        let alpha = maps(&|c, p, n| c.alpha(p, n), nm + 1);
        let beta = maps(&|c, p, n| c.beta(p, n), nm);
        let gamma = maps(&|c, p, n| c.gamma(p, n), nm + 1);
        let action = (0..=pm as isize).map(|p| W::product_action(&cs.iter().map(|c| c.action(p)).collect::<Vec<_>>())).collect();
        Self::new(d, e, alpha, beta, gamma, action)
    }
}

/// Checks every row of the couple as a long homotopy sequence and reports
/// failures at `(p, q)`.
pub fn validate_couple<W: World>(c: &RightCouple<W>) -> CoupleReport {
    let mut failures = Vec::new();
    for p in 0..=c.p_max {
        let row = match c.row(p) {
            Ok(r) => r,
            Err(e) => {
                failures.push(Failure::row(p, format!("{e}")));
                continue;
            }
        };
        let ax = row.validate();
        if !ax.all() {
            failures.extend(ax.failures.into_iter().map(|m| Failure::row(p, m)));
            continue;
        }
        for slot in row.exactness_unchecked().failures {
            failures.push(match slot {
                ExactSlot::Total(n) => Failure::at(p, p + n, format!("row {p}: image of gamma differs from the kernel of alpha on D")),
                ExactSlot::Base(n) => Failure::at(p.saturating_sub(1), p - 1 + n, format!("row {p}: image of alpha differs from the kernel of beta")),
                ExactSlot::Fiber(n) => Failure::at(p, p + n, format!("row {p}: image of beta differs from the kernel of gamma on E")),
                ExactSlot::OrbitMono => Failure::at(p, p, format!("row {p}: orbit space of E^p_0 does not inject into D^p_0")),
            });
        }
    }
    CoupleReport { valid: failures.is_empty(), failures }
}

/// Page `E_r` of a couple: for each `(p, n)` a subquotient of `E^p_n`.
#[derive(Clone, Debug)]
pub struct Page<W: World> {
    pub r: usize,
    pub p_max: usize,
    pub n_max: usize,
    /// `terms[p][n]`.
    pub terms: Vec<Vec<W::Quot>>,
}

impl<W: World> Page<W> {
    pub fn term(&self, p: usize, n: usize) -> &W::Quot {
        &self.terms[p][n]
    }

    /// First slot `(p, q)` where the two pages differ.
    pub fn first_difference(&self, other: &Self, c: &RightCouple<W>) -> Option<(usize, usize)> {
        for p in 0..=self.p_max {
            for n in 0..=self.n_max {
                if !W::quot_eq(&c.e_obj(p as isize, n), &self.terms[p][n], &other.terms[p][n]) {
                    return Some((p, p + n));
                }
            }
        }
        None
    }

    pub fn cardinality(&self, c: &RightCouple<W>, p: usize, n: usize) -> Option<u128> {
        W::quot_card(&c.e_obj(p as isize, n), &self.terms[p][n])
    }

    pub fn describe(&self, c: &RightCouple<W>, p: usize, n: usize) -> String {
        W::quot_describe(&c.e_obj(p as isize, n), &self.terms[p][n])
    }
}

/// `E_r` in closed form: `γ^{-1}(im α^{r-1})` modulo the action of
/// `Ker α^{r-1}` through `β`.
pub fn page_direct<W: World>(c: &RightCouple<W>, r: usize) -> Result<Page<W>> {
    if r == 0 {
        return Err(Error::invalid("pages start at r = 1"));
    }
    let mut terms = Vec::with_capacity(c.p_max + 1);
    for p in 0..=c.p_max as isize {
        let mut row = Vec::with_capacity(c.n_max + 1);
        for n in 0..=c.n_max {
            let top = p + r as isize - 1;
            let im = W::image(&c.alpha_pow(top, r - 1, n), &W::full(&c.d_obj(top, n)));
            let z = W::preimage(&c.gamma(p, n), &im);
            let k = W::preimage(&c.alpha_pow(p - 1, r - 1, n + 1), &W::base(&c.d_obj(p - r as isize, n + 1)));
            row.push(W::orbits(&c.beta_action(p, n), &k, &z)?);
        }
        terms.push(row);
    }
    Ok(Page { r, p_max: c.p_max, n_max: c.n_max, terms })
}

/// The `r`-th derived couple, held as subobjects of the original one.
///
/// `D_r^p_n` is located at `im α^{r-1} ⊆ D^p_n`, `E_r^p_n` is a subquotient of
/// `E^p_n`, and `β_r` is built from `β_{r-1}` by lifting along `α`.
#[derive(Clone, Debug)]
pub struct DerivedCouple<'a, W: World> {
    pub base: &'a RightCouple<W>,
    pub r: usize,
    /// `dloc[s-1][p][n]` is `D_s` located in `D^p_n`, for `s <= r`.
    dloc: Vec<Vec<Vec<W::Sub>>>,
    quot: Vec<Vec<W::Quot>>,
}

/// Kernel of the outgoing and image of the incoming differential at a slot,
/// as subobjects of `E^p_n`. At `n = 0` the kernel is that of the augmentation
/// into `D_r^p_0 / α(D_r^{p+1}_0)`.
#[derive(Clone, Debug)]
pub struct SlotSets<W: World> {
    pub kernel: W::Sub,
    pub image: W::Sub,
}

impl<'a, W: World> DerivedCouple<'a, W> {
    pub fn first(c: &'a RightCouple<W>) -> Result<Self> {
        let dloc = vec![(0..=c.p_max as isize).map(|p| (0..=c.n_max).map(|n| W::full(&c.d_obj(p, n))).collect()).collect()];
        let mut quot = Vec::new();
        for p in 0..=c.p_max as isize {
            let mut row = Vec::new();
            for n in 0..=c.n_max {
                row.push(W::orbits(&c.beta_action(p, n), &W::base(&c.d_obj(p - 1, n + 1)), &W::full(&c.e_obj(p, n)))?);
            }
            quot.push(row);
        }
        Ok(DerivedCouple { base: c, r: 1, dloc, quot })
    }

    fn dloc(&self, s: usize, p: isize, n: usize) -> W::Sub {
        let c = self.base;
        if p < 0 || n > c.n_max || p as usize > c.p_max {
            return W::full(&c.d_obj(p, n));
        }
        self.dloc[s - 1][p as usize][n].clone()
    }

    /// `E_r^p_n`; the point outside the window.
    pub fn term(&self, p: isize, n: usize) -> W::Quot {
        let c = self.base;
        if p < 0 || p as usize > c.p_max || n > c.n_max {
            let pt = W::point();
            return W::collapse(&pt, &W::full(&pt), &W::base(&pt));
        }
        self.quot[p as usize][n].clone()
    }

    /// Lifts `a ⊆ D^{p-s}_{n+1}` to `D^{p-1}_{n+1}` through the located
    /// subobjects of the intermediate derived couples.
    fn lift(&self, s: usize, p: isize, n: usize, a: W::Sub) -> W::Sub {
        if s == 1 {
            return a;
        }
        let c = self.base;
        let loc = p - s as isize + 1;
        let pre = W::preimage(&c.alpha(loc, n + 1), &a);
        let cut = W::meet(&c.d_obj(loc, n + 1), &pre, &self.dloc(s - 1, loc, n + 1));
        self.lift(s - 1, p, n, cut)
    }

    /// `β_r^{-1}(t)` for `t ⊆ E^p_n`, located in `D^{p-r}_{n+1}`.
    fn beta_pre(&self, p: isize, n: usize, t: &W::Sub) -> W::Sub {
        let c = self.base;
        let mut s = W::preimage(&W::act_on_base(&c.beta_action(p, n)), t);
        for k in 1..self.r as isize {
            s = W::image(&c.alpha(p - k, n + 1), &s);
        }
        s
    }

    /// Acting set for the incoming differential at `(p, n)`, in `D^{p-1}_{n+1}`.
    fn incoming(&self, p: isize, n: usize) -> W::Sub {
        let c = self.base;
        let src = p - self.r as isize;
        let z = W::quot_domain(&self.term(src, n + 1)).clone();
        let a = W::image(&c.gamma(src, n + 1), &z);
        self.lift(self.r, p, n, a)
    }

    fn outgoing_kernel(&self, p: isize, n: usize, next_dloc: &W::Sub) -> W::Sub {
        let c = self.base;
        let e = c.e_obj(p, n);
        let z = W::quot_domain(&self.term(p, n)).clone();
        let target = if n >= 1 {
            let tp = p + self.r as isize;
            let t = W::base_class(&c.e_obj(tp, n - 1), &self.term(tp, n - 1));
            self.beta_pre(tp, n - 1, &t)
        } else {
            next_dloc.clone()
        };
        W::meet(&e, &z, &W::preimage(&c.gamma(p, n), &target))
    }

    fn next_dloc(&self, p: isize, n: usize) -> W::Sub {
        let c = self.base;
        W::image(&c.alpha(p + 1, n), &self.dloc(self.r, p + 1, n))
    }

    /// Kernel and image of `d_r` at `(p, n)`.
    pub fn slot_sets(&self, p: usize, n: usize) -> SlotSets<W> {
        let p = p as isize;
        let kernel = self.outgoing_kernel(p, n, &self.next_dloc(p, n));
        let image = W::image(&W::act_on_base(&self.base.beta_action(p, n)), &self.incoming(p, n));
        SlotSets { kernel, image }
    }

    /// The derived couple of degree `r + 1`.
    pub fn derive(&self) -> Result<Self> {
        let c = self.base;
        let mut next = Vec::new();
        let mut quot = Vec::new();
        for p in 0..=c.p_max as isize {
            let mut drow = Vec::new();
            let mut qrow = Vec::new();
            for n in 0..=c.n_max {
                let nd = self.next_dloc(p, n);
                let z = self.outgoing_kernel(p, n, &nd);
                let s = self.incoming(p, n);
                qrow.push(W::refine(&self.term(p, n), &z, &c.beta_action(p, n), &s)?);
                drow.push(nd);
            }
            next.push(drow);
            quot.push(qrow);
        }
        let mut dloc = self.dloc.clone();
        dloc.push(next);
        Ok(DerivedCouple { base: c, r: self.r + 1, dloc, quot })
    }

    pub fn page(&self) -> Page<W> {
        Page { r: self.r, p_max: self.base.p_max, n_max: self.base.n_max, terms: self.quot.clone() }
    }

    /// Exactness of the rows of the derived couple, checked on located
    /// subobjects. Failures are reported at `(p, q)`.
    pub fn validate(&self) -> CoupleReport {
        let c = self.base;
        let r = self.r;
        let mut failures = Vec::new();
        for p in 0..=c.p_max as isize {
            let pu = p as usize;
            for n in 0..=c.n_max {
                let q = pu + n;
                let e = c.e_obj(p, n);
                let d = c.d_obj(p, n);
                let z = W::quot_domain(&self.term(p, n)).clone();
                let ker_gamma = W::meet(&e, &z, &W::preimage(&c.gamma(p, n), &W::base(&d)));
                let src = p - r as isize;
                let lifted = self.lift(r, p, n, self.dloc(r, src, n + 1));
                let im_beta = W::image(&W::act_on_base(&c.beta_action(p, n)), &lifted);
                if !W::sub_eq(&e, &ker_gamma, &im_beta) {
                    failures.push(Failure::at(pu, q, format!("E_{r}: image of beta differs from the kernel of gamma")));
                }
                let im_gamma = W::image(&c.gamma(p, n), &z);
                let here = self.dloc(r, p, n);
                let ker_alpha = W::meet(&d, &here, &W::preimage(&c.alpha(p, n), &W::base(&c.d_obj(p - 1, n))));
                if !W::sub_eq(&d, &im_gamma, &ker_alpha) {
                    failures.push(Failure::at(pu, q, format!("D_{r}: image of gamma differs from the kernel of alpha")));
                }
                {
                    let loc = self.dloc(r, src, n + 1);
                    let t = W::base_class(&e, &self.term(p, n));
                    let ker_beta = W::meet(&c.d_obj(src, n + 1), &loc, &self.beta_pre(p, n, &t));
                    let im_alpha = W::image(&c.alpha(src + 1, n + 1), &self.dloc(r, src + 1, n + 1));
                    if !W::sub_eq(&c.d_obj(src, n + 1), &ker_beta, &im_alpha) {
                        failures.push(Failure::at(pu, q, format!("D_{r}: image of alpha differs from the kernel of beta")));
                    }
                }
                if n == 0 {
                    let mono = W::refine(&self.term(p, 0), &z, &c.action(p), &lifted)
                        .map(|orb| W::quot_injective(&orb, &c.gamma(p, 0)))
                        .unwrap_or(false);
                    if !mono {
                        failures.push(Failure::at(pu, q, format!("E_{r}: orbit space does not inject into D_{r}")));
                    }
                }
            }
        }
        CoupleReport { valid: failures.is_empty(), failures }
    }
}

/// `E_r` by iterated derivation of the couple.
pub fn page<W: World>(c: &RightCouple<W>, r: usize) -> Result<Page<W>> {
    Ok(derived(c, r)?.page())
}

/// The derived couple of degree `r`.
pub fn derived<W: World>(c: &RightCouple<W>, r: usize) -> Result<DerivedCouple<'_, W>> {
    if r == 0 {
        return Err(Error::invalid("pages start at r = 1"));
    }
    let mut dc = DerivedCouple::first(c)?;
    while dc.r < r {
        dc = dc.derive()?;
    }
    Ok(dc)
}

/// Slots where `d_r o d_r` fails to be trivial, as `(r, p, q)`.
pub fn dd_failures<W: World>(c: &RightCouple<W>, max_page: usize) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    let mut dc = DerivedCouple::first(c)?;
    loop {
        for p in 0..=c.p_max {
            for n in 0..=c.n_max {
                let s = dc.slot_sets(p, n);
                if !W::sub_le(&c.e_obj(p as isize, n), &s.image, &s.kernel) {
                    out.push((dc.r, p, p + n));
                }
            }
        }
        if dc.r >= max_page {
            break;
        }
        dc = dc.derive()?;
    }
    Ok(out)
}
