use alloc::format;
use alloc::vec::Vec;

use super::couple::{Failure, RightCouple};
use crate::hcomplex::{BiAugmentedComplex, HtpyComplex};
use crate::pi::{ExactSlot, LongHtpySequence, PiMorphism, PiStructure};
use crate::world::World;
use crate::{Error, Result};

/// Homotopy of a `d`-bounded tower `X -> ... -> X_1 -> X_0` together with the
/// fibres `F_p` of `X_p -> X_{p-1}` and `G_p` of `X -> X_p`.
///
/// All objects are indexed `[p][n]` with `0 <= p <= P`, `0 <= n <= N`;
/// `X_{-1} = *` and `G_{-1} = X`. Boundary maps are indexed by the degree of
/// their target.
#[derive(Clone, Debug)]
pub struct ReesSystem<W: World> {
    pub bound: usize,
    /// `Π_n(X)`.
    pub x: Vec<W::Obj>,
    /// `Π_n(X_p)`.
    pub xp: Vec<Vec<W::Obj>>,
    /// `Π_n(F_p)`.
    pub f: Vec<Vec<W::Obj>>,
    /// `Π_n(G_p)`.
    pub g: Vec<Vec<W::Obj>>,
    /// `a: Π_n(X) -> Π_n(X_p)`.
    pub a: Vec<Vec<W::Map>>,
    /// `α: Π_n(X_p) -> Π_n(X_{p-1})`.
    pub alpha: Vec<Vec<W::Map>>,
    /// `β: Π_{n+1}(X_{p-1}) -> Π_n(F_p)`, `n < N`.
    pub beta: Vec<Vec<W::Map>>,
    /// `γ: Π_n(F_p) -> Π_n(X_p)`.
    pub gamma: Vec<Vec<W::Map>>,
    /// `b: Π_{n+1}(X_p) -> Π_n(G_p)`, `n < N`.
    pub b: Vec<Vec<W::Map>>,
    /// `c: Π_n(G_p) -> Π_n(X)`.
    pub c: Vec<Vec<W::Map>>,
    /// `ᾱ: Π_n(G_p) -> Π_n(G_{p-1})`; for `p = 0` this is `c`.
    pub alpha_bar: Vec<Vec<W::Map>>,
    /// `β̄: Π_n(G_{p-1}) -> Π_n(F_p)`.
    pub beta_bar: Vec<Vec<W::Map>>,
    /// `γ̄: Π_{n+1}(F_p) -> Π_n(G_p)`, `n < N`.
    pub gamma_bar: Vec<Vec<W::Map>>,
    /// `Π_1(X_{p-1})` acting on `Π_0(F_p)`.
    pub act_f: Vec<W::Act>,
    /// `Π_1(X_p)` acting on `Π_0(G_p)`.
    pub act_g: Vec<W::Act>,
    /// `Π_1(F_p)` acting on `Π_0(G_p)`.
    pub act_gf: Vec<W::Act>,
}

/// One instance of a structural relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub p: usize,
    pub n: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ReesReport {
    pub valid: bool,
    pub rows: bool,
    pub relations: Vec<RelationCheck>,
    pub failures: Vec<Failure>,
}

impl<W: World> ReesSystem<W> {
    pub fn p_max(&self) -> usize {
        self.xp.len() - 1
    }

    pub fn n_max(&self) -> usize {
        self.x.len() - 1
    }

    pub fn x_obj(&self, n: usize) -> W::Obj {
        self.x.get(n).cloned().unwrap_or_else(W::point)
    }

    pub fn xp_obj(&self, p: isize, n: usize) -> W::Obj {
        if p < 0 || n > self.n_max() {
            return W::point();
        }
        self.xp[(p as usize).min(self.p_max())][n].clone()
    }

    pub fn f_obj(&self, p: isize, n: usize) -> W::Obj {
        if p < 0 || p as usize > self.p_max() || n > self.n_max() {
            return W::point();
        }
        self.f[p as usize][n].clone()
    }

    pub fn g_obj(&self, p: isize, n: usize) -> W::Obj {
        if n > self.n_max() {
            return W::point();
        }
        if p < 0 {
            return self.x_obj(n);
        }
        self.g[(p as usize).min(self.p_max())][n].clone()
    }

    fn window(&self, p: isize, n: usize) -> bool {
        p >= 0 && p as usize <= self.p_max() && n <= self.n_max()
    }

    pub fn a(&self, p: isize, n: usize) -> W::Map {
        if p >= 0 && n <= self.n_max() {
            return self.a[(p as usize).min(self.p_max())][n].clone();
        }
        W::zero_map(&self.x_obj(n), &self.xp_obj(p, n))
    }

    pub fn alpha(&self, p: isize, n: usize) -> W::Map {
        if p > 0 && p as usize > self.p_max() && n <= self.n_max() {
            return W::identity(&self.xp_obj(p, n));
        }
        if self.window(p, n) {
            return self.alpha[p as usize][n].clone();
        }
        W::zero_map(&self.xp_obj(p, n), &self.xp_obj(p - 1, n))
    }

    pub fn beta(&self, p: isize, n: usize) -> W::Map {
        if self.window(p, n) && n < self.n_max() {
            return self.beta[p as usize][n].clone();
        }
        W::zero_map(&self.xp_obj(p - 1, n + 1), &self.f_obj(p, n))
    }

    pub fn gamma(&self, p: isize, n: usize) -> W::Map {
        if self.window(p, n) {
            return self.gamma[p as usize][n].clone();
        }
        W::zero_map(&self.f_obj(p, n), &self.xp_obj(p, n))
    }

    pub fn b(&self, p: isize, n: usize) -> W::Map {
        if p >= 0 && n < self.n_max() {
            return self.b[(p as usize).min(self.p_max())][n].clone();
        }
        W::zero_map(&self.xp_obj(p, n + 1), &self.g_obj(p, n))
    }

    pub fn c(&self, p: isize, n: usize) -> W::Map {
        if n > self.n_max() {
            return W::zero_map(&W::point(), &W::point());
        }
        if p < 0 {
            return W::identity(&self.x_obj(n));
        }
        self.c[(p as usize).min(self.p_max())][n].clone()
    }

    /// `ᾱ: Π_n(G_p) -> Π_n(G_{p-1})`.
    pub fn alpha_bar(&self, p: isize, n: usize) -> W::Map {
        if n > self.n_max() {
            return W::zero_map(&W::point(), &W::point());
        }
        if p < 0 || p as usize > self.p_max() {
            return W::identity(&self.g_obj(p, n));
        }
        self.alpha_bar[p as usize][n].clone()
    }

    pub fn beta_bar(&self, p: isize, n: usize) -> W::Map {
        if self.window(p, n) {
            return self.beta_bar[p as usize][n].clone();
        }
        W::zero_map(&self.g_obj(p - 1, n), &self.f_obj(p, n))
    }

    pub fn gamma_bar(&self, p: isize, n: usize) -> W::Map {
        if self.window(p, n) && n < self.n_max() {
            return self.gamma_bar[p as usize][n].clone();
        }
        W::zero_map(&self.f_obj(p, n + 1), &self.g_obj(p, n))
    }

    pub fn act_f(&self, p: isize) -> W::Act {
        if self.window(p, 0) {
            return self.act_f[p as usize].clone();
        }
        W::trivial_action(&self.xp_obj(p - 1, 1), &self.f_obj(p, 0))
    }

    pub fn act_g(&self, p: isize) -> W::Act {
        if p >= 0 {
            return self.act_g[(p as usize).min(self.p_max())].clone();
        }
        W::trivial_action(&W::point(), &self.x_obj(0))
    }

    pub fn act_gf(&self, p: isize) -> W::Act {
        if self.window(p, 0) {
            return self.act_gf[p as usize].clone();
        }
        W::trivial_action(&self.f_obj(p, 1), &self.g_obj(p, 0))
    }

    /// `ᾱ^k: Π_n(G_from) -> Π_n(G_{from-k})`.
    pub fn alpha_bar_pow(&self, from: isize, k: usize, n: usize) -> W::Map {
        let mut m = W::identity(&self.g_obj(from, n));
        for j in 0..k as isize {
            m = W::compose(&self.alpha_bar(from - j, n), &m);
        }
        m
    }

    /// The right couple `(Π(X_p), Π(F_p); α, β, γ)`.
    pub fn right_couple(&self) -> Result<RightCouple<W>> {
        let (pm, nm) = (self.p_max() as isize, self.n_max());
        let grid = |f: &dyn Fn(isize, usize) -> W::Map, w: usize| (0..=pm).map(|p| (0..w).map(|n| f(p, n)).collect()).collect();
        RightCouple::new(
            self.xp.clone(),
            self.f.clone(),
            grid(&|p, n| self.alpha(p, n), nm + 1),
            grid(&|p, n| self.beta(p, n), nm),
            grid(&|p, n| self.gamma(p, n), nm + 1),
            (0..=pm).map(|p| self.act_f(p)).collect(),
        )
    }

    fn seq(
        &self,
        fib: Vec<W::Obj>,
        total: Vec<W::Obj>,
        base: Vec<W::Obj>,
        f: Vec<W::Map>,
        g: Vec<W::Map>,
        boundary: Vec<W::Map>,
        action: W::Act,
    ) -> Result<LongHtpySequence<W>> {
        LongHtpySequence::new(
            PiStructure::with_trivial_actions(fib)?,
            PiStructure::with_trivial_actions(total)?,
            PiStructure::with_trivial_actions(base)?,
            PiMorphism { maps: f },
            PiMorphism { maps: g },
            boundary,
            action,
        )
    }

    /// The three long sequences of row `p`: `F_p -> X_p -> X_{p-1}`,
    /// `G_p -> G_{p-1} -> F_p` and `G_p -> X -> X_p`.
    pub fn rows(&self, p: usize) -> Result<[LongHtpySequence<W>; 3]> {
        let p = p as isize;
        let ns = 0..=self.n_max();
        let bs = 0..self.n_max();
        let one = self.seq(
            ns.clone().map(|n| self.f_obj(p, n)).collect(),
            ns.clone().map(|n| self.xp_obj(p, n)).collect(),
            ns.clone().map(|n| self.xp_obj(p - 1, n)).collect(),
            ns.clone().map(|n| self.gamma(p, n)).collect(),
            ns.clone().map(|n| self.alpha(p, n)).collect(),
            bs.clone().map(|n| self.beta(p, n)).collect(),
            self.act_f(p),
        )?;
        let two = self.seq(
            ns.clone().map(|n| self.g_obj(p, n)).collect(),
            ns.clone().map(|n| self.g_obj(p - 1, n)).collect(),
            ns.clone().map(|n| self.f_obj(p, n)).collect(),
            ns.clone().map(|n| self.alpha_bar(p, n)).collect(),
            ns.clone().map(|n| self.beta_bar(p, n)).collect(),
            bs.clone().map(|n| self.gamma_bar(p, n)).collect(),
            self.act_gf(p),
        )?;
        let three = self.seq(
            ns.clone().map(|n| self.g_obj(p, n)).collect(),
            ns.clone().map(|n| self.x_obj(n)).collect(),
            ns.clone().map(|n| self.xp_obj(p, n)).collect(),
            ns.clone().map(|n| self.c(p, n)).collect(),
            ns.clone().map(|n| self.a(p, n)).collect(),
            bs.map(|n| self.b(p, n)).collect(),
            self.act_g(p),
        )?;
        Ok([one, two, three])
    }

    /// Exactness of the three row sequences, the commutation relations
    /// (with `-` the group inverse, no sign in degree 0) and boundedness.
    pub fn validate(&self) -> ReesReport {
        let mut failures = Vec::new();
        let mut relations = Vec::new();
        let (pm, nm) = (self.p_max(), self.n_max());
        if self.bound > pm {
            failures.push(Failure { p: None, q: None, what: format!("window P = {pm} is below the bound d = {}", self.bound) });
        }
        let names = ["F -> X_p -> X_{p-1}", "G_p -> G_{p-1} -> F_p", "G_p -> X -> X_p"];
        for p in 0..=pm {
            match self.rows(p) {
                Err(e) => failures.push(Failure::row(p, format!("{e}"))),
                Ok(seqs) => {
                    for (seq, name) in seqs.iter().zip(names) {
                        let ax = seq.validate();
                        if !ax.all() {
                            failures.extend(ax.failures.into_iter().map(|m| Failure::row(p, format!("{name}: {m}"))));
                            continue;
                        }
                        for slot in seq.exactness_unchecked().failures {
                            let (n, what) = match slot {
                                ExactSlot::Total(n) => (n, "not exact at the total space"),
                                ExactSlot::Base(n) => (n, "not exact at the base"),
                                ExactSlot::Fiber(n) => (n, "not exact at the fibre"),
                                ExactSlot::OrbitMono => (0, "orbit space does not inject"),
                            };
                            failures.push(Failure::at(p, p + n, format!("{name}: {what}")));
                        }
                    }
                }
            }
        }
        let rows = failures.is_empty();
        let signed = |m: W::Map, n: usize| if n >= 1 { W::invert(&m) } else { m };
        for p in 0..=pm as isize {
            for n in 0..=nm {
                let mut rel = |name: &'static str, l: W::Map, r: W::Map| {
                    let holds = W::map_eq(&l, &r);
                    if !holds {
                        failures.push(Failure::at(p as usize, p as usize + n, format!("relation {name} fails in degree {n}")));
                    }
                    relations.push(RelationCheck { name, p: p as usize, n, holds });
                };
                if n < nm {
                    rel("beta = beta_bar b", self.beta(p, n), W::compose(&self.beta_bar(p, n), &self.b(p - 1, n)));
                }
                rel("a = alpha a", self.a(p - 1, n), W::compose(&self.alpha(p, n), &self.a(p, n)));
                rel("c = c alpha_bar", self.c(p, n), W::compose(&self.c(p - 1, n), &self.alpha_bar(p, n)));
                rel("gamma beta_bar = a c", W::compose(&self.gamma(p, n), &self.beta_bar(p, n)), W::compose(&self.a(p, n), &self.c(p - 1, n)));
                if n < nm {
                    rel(
                        "b alpha = -alpha_bar b",
                        W::compose(&self.b(p - 1, n), &self.alpha(p, n + 1)),
                        signed(W::compose(&self.alpha_bar(p, n), &self.b(p, n)), n),
                    );
                    rel("b gamma = -gamma_bar", W::compose(&self.b(p, n), &self.gamma(p, n + 1)), signed(self.gamma_bar(p, n), n));
                }
            }
            let eq = W::is_equivariant(&self.act_g(p - 1), &self.act_f(p), &W::identity(&self.xp_obj(p - 1, 1)), &self.beta_bar(p, 0));
            if !eq {
                failures.push(Failure::at(p as usize, p as usize, "beta_bar is not equivariant in degree 0"));
            }
            relations.push(RelationCheck { name: "beta_bar equivariant", p: p as usize, n: 0, holds: eq });
        }
        for p in self.bound..=pm {
            for n in 0..=nm {
                if !W::is_iso(&self.a(p as isize, n)) {
                    failures.push(Failure::at(p, p + n, format!("X -> X_{p} is not an isomorphism above the bound")));
                }
            }
        }
        ReesReport { valid: failures.is_empty(), rows, relations, failures }
    }

    /// `d_1` of the right couple and of the left couple at `(p, n)`, `n >= 1`.
    pub fn d1_pair(&self, p: isize, n: usize) -> (W::Map, W::Map) {
        let right = W::compose(&self.beta(p + 1, n - 1), &self.gamma(p, n));
        let left = W::compose(&self.beta_bar(p + 1, n - 1), &self.gamma_bar(p, n - 1));
        (right, left)
    }

    /// Line `q` of the first page,
    /// `Π_q(X) --τ--> Π_q(F_0) -> ... => Π_0(F_q) --ε--> Π_0(X_q) / Π_0(X_{q+1})`.
    pub fn line_complex(&self, q: usize) -> Result<BiAugmentedComplex<W>> {
        let qi = q as isize;
        let terms: Vec<W::Obj> = (0..=q).map(|n| self.f_obj(qi - n as isize, n)).collect();
        let d = |n: usize| W::compose(&self.beta(qi - n as isize + 1, n - 1), &self.gamma(qi - n as isize, n));
        let diffs = (2..=q).map(d).collect();
        let e1 = if q >= 1 { terms[1].clone() } else { W::point() };
        let action = if q >= 1 {
            W::act_pullback(&self.act_f(qi), &self.gamma(qi - 1, 1))
        } else {
            W::trivial_action(&e1, &terms[0])
        };
        let complex = HtpyComplex::new(terms, diffs, action)?;
        let tau = self.beta_bar(0, q);
        let (_, proj) = W::cokernel(&self.alpha(qi + 1, 0));
        let eps = W::compose(&proj, &self.gamma(qi, 0));
        BiAugmentedComplex::new(complex, tau, Some(eps))
    }

    /// Checks the relations that make `τ` the map `γ^{-1} a` on line `q`.
    pub fn tau_is_lift(&self, q: usize) -> bool {
        W::map_eq(&W::compose(&self.gamma(0, q), &self.beta_bar(0, q)), &self.a(0, q))
    }
}

/// Product of systems with a common window; the bound is the maximum.
pub fn product_system<W: World>(ss: &[ReesSystem<W>]) -> Result<ReesSystem<W>> {
    let Some(first) = ss.first() else {
        return Err(Error::invalid("empty product of systems"));
    };
    let (pm, nm) = (first.p_max(), first.n_max());
    if ss.iter().any(|s| s.p_max() != pm || s.n_max() != nm) {
        return Err(Error::invalid("systems in a product must share a window"));
    }
    let ps = 0..=pm as isize;
    let objs = |f: &dyn Fn(&ReesSystem<W>, isize, usize) -> W::Obj| -> Vec<Vec<W::Obj>> {
        ps.clone().map(|p| (0..=nm).map(|n| W::product(&ss.iter().map(|s| f(s, p, n)).collect::<Vec<_>>())).collect()).collect()
    };
    let maps = |f: &dyn Fn(&ReesSystem<W>, isize, usize) -> W::Map, w: usize| -> Vec<Vec<W::Map>> {
        ps.clone().map(|p| (0..w).map(|n| W::product_map(&ss.iter().map(|s| f(s, p, n)).collect::<Vec<_>>())).collect()).collect()
    };
    let acts = |f: &dyn Fn(&ReesSystem<W>, isize) -> W::Act| -> Vec<W::Act> {
        ps.clone().map(|p| W::product_action(&ss.iter().map(|s| f(s, p)).collect::<Vec<_>>())).collect()
    };
    Ok(ReesSystem {
        bound: ss.iter().map(|s| s.bound).max().unwrap_or(0),
        x: (0..=nm).map(|n| W::product(&ss.iter().map(|s| s.x_obj(n)).collect::<Vec<_>>())).collect(),
        xp: objs(&|s, p, n| s.xp_obj(p, n)),
        f: objs(&|s, p, n| s.f_obj(p, n)),
        g: objs(&|s, p, n| s.g_obj(p, n)),
        a: maps(&|s, p, n| s.a(p, n), nm + 1),
        alpha: maps(&|s, p, n| s.alpha(p, n), nm + 1),
        beta: maps(&|s, p, n| s.beta(p, n), nm),
        gamma: maps(&|s, p, n| s.gamma(p, n), nm + 1),
        b: maps(&|s, p, n| s.b(p, n), nm),
        c: maps(&|s, p, n| s.c(p, n), nm + 1),
        alpha_bar: maps(&|s, p, n| s.alpha_bar(p, n), nm + 1),
        beta_bar: maps(&|s, p, n| s.beta_bar(p, n), nm + 1),
        gamma_bar: maps(&|s, p, n| s.gamma_bar(p, n), nm),
        act_f: acts(&|s, p| s.act_f(p)),
        act_g: acts(&|s, p| s.act_g(p)),
        act_gf: acts(&|s, p| s.act_gf(p)),
    })
}
