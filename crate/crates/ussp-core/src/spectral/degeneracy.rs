use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::couple::page_direct;
use super::rees::ReesSystem;
use crate::hcomplex::{check_exact, ExactVerdict, Mode};
use crate::world::{Kind, World};
use crate::Result;

/// One entry of the second page on line `q`, against its predicted value.
#[derive(Clone, Debug)]
pub struct E2Entry {
    pub p: usize,
    pub q: usize,
    pub cardinality: Option<u128>,
    pub description: String,
    pub expected: String,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct DegeneracyReport {
    pub q: usize,
    pub bound: usize,
    pub cond_i: bool,
    pub cond_i_prime: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub failures: Vec<String>,
    pub e2: Vec<E2Entry>,
    /// All four conditions hold and the second page has the predicted shape.
    pub collapse: bool,
}

impl DegeneracyReport {
    pub fn all_conditions(&self) -> bool {
        self.cond_i && self.cond_i_prime && self.cond_ii && self.cond_iii
    }
}

/// Pairs `(p, i)` with `0 <= p <= min(d, q)`, `i ∈ {0, 1}`, `(p, i) != (0, 1)`.
pub fn index_set(d: usize, q: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 0..=d.min(q) {
        for i in 0..2 {
            if !(p == 0 && i == 1) {
                out.push((p, i));
            }
        }
    }
    out
}

/// Conditions (i), (i'), (ii), (iii) on line `q` and the resulting shape of
/// the second page.
pub fn degeneracy_check<W: World>(s: &ReesSystem<W>, q: usize) -> Result<DegeneracyReport> {
    let d = s.bound;
    let mut failures = Vec::new();
    let (mut c1, mut c1p, mut c2) = (true, true, true);
    for (p, i) in index_set(d, q) {
        let k = q - p;
        let j = p as isize - i as isize;
        if !W::is_trivial_map(&s.alpha_bar(j, k)) {
            c1 = false;
            failures.push(format!("(i) alpha_bar on pi_{k}(G_{j}) is not trivial"));
        }
        let bb = s.beta_bar(j, k);
        let src = s.g_obj(j - 1, k);
        let kernel_trivial = W::is_base(&src, &W::preimage(&bb, &W::base(&s.f_obj(j, k))));
        if !kernel_trivial || (q > 0 && !W::is_injective(&bb)) {
            c1p = false;
            failures.push(format!("(i') beta_bar on pi_{k}(G_{}) is not injective", j - 1));
        }
        if !W::is_trivial_map(&s.c(j, k)) {
            c2 = false;
            failures.push(format!("(ii) c on pi_{k}(G_{j}) is not trivial"));
        }
        if !W::is_trivial_map(&W::compose(&s.b(j - 1, k), &s.alpha(j, k + 1))) {
            c2 = false;
            failures.push(format!("(ii) b alpha on pi_{}(X_{j}) is not trivial", k + 1));
        }
    }
    let line = s.line_complex(q)?;
    let v = check_exact(&line, Mode::Exact);
    let c3 = v.tau_side;
    if !c3 {
        failures.push(format!("(iii) line {q} is not exact: {:?}", v.failures));
    }
    let c = s.right_couple()?;
    let page = page_direct(&c, 2)?;
    let mut e2 = Vec::new();
    for p in 0..q.min(s.p_max() + 1) {
        let n = q - p;
        if n > s.n_max() || (p == 0 && q == 0) {
            continue;
        }
        let e = s.f_obj(p as isize, n);
        let cardinality = W::quot_card(&e, page.term(p, n));
        let description = W::quot_describe(&e, page.term(p, n));
        let (expected, matches) = if p == 0 {
            let x = s.x_obj(q);
            (W::describe(&x), cardinality.is_some() && cardinality == W::cardinality(&x) || (cardinality.is_none() && description == W::describe(&x)))
        } else {
            (String::from("*"), cardinality == Some(1))
        };
        e2.push(E2Entry { p, q, cardinality, description, expected, matches });
    }
    let all = c1 && c1p && c2 && c3;
    let collapse = all && e2.iter().all(|e| e.matches);
    Ok(DegeneracyReport { q, bound: d, cond_i: c1, cond_i_prime: c1p, cond_ii: c2, cond_iii: c3, failures, e2, collapse })
}

/// `E_r^{q,q}` against the closed forms valid for large `r`.
#[derive(Clone, Debug)]
pub struct DiagonalEntry {
    pub q: usize,
    pub applies: bool,
    pub cardinality: Option<u128>,
    pub description: String,
    /// `None` when the closed form does not apply at this page.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub r: usize,
    pub entries: Vec<DiagonalEntry>,
    /// Product of the orders of `E_r^{q,q}`, when every term is finite.
    pub graded_order: Option<u128>,
    /// Compared with `|Π_0(X)|` when every degree-0 object is abelian.
    pub reassembles: Option<bool>,
}

pub fn diagonal_terms<W: World>(s: &ReesSystem<W>, r: usize) -> Result<DiagonalReport> {
    let d = s.bound;
    let c = s.right_couple()?;
    let page = page_direct(&c, r)?;
    let mut entries = Vec::new();
    for q in 0..=s.p_max() {
        let qi = q as isize;
        let e = s.f_obj(qi, 0);
        let term = page.term(q, 0);
        let applies = if q == 0 {
            r > d
        } else if q <= d {
            r > (d - q).max(q - 1)
        } else {
            true
        };
        let holds = if !applies {
            None
        } else if q == 0 {
            let im = W::image(&s.beta_bar(0, 0), &W::full(&s.x_obj(0)));
            let want = W::orbits(&s.act_f(0), &W::base(&s.xp_obj(-1, 1)), &im)?;
            Some(W::quot_eq(&e, term, &want))
        } else if q <= d {
            let im = W::image(&s.a(qi, 0), &W::full(&s.x_obj(0)));
            let z = W::preimage(&s.gamma(qi, 0), &im);
            let want = W::orbits(&s.act_f(qi), &W::full(&s.xp_obj(qi - 1, 1)), &z)?;
            Some(W::quot_eq(&e, term, &want))
        } else {
            Some(W::quot_card(&e, term) == Some(1))
        };
        entries.push(DiagonalEntry { q, applies, cardinality: W::quot_card(&e, term), description: W::quot_describe(&e, term), holds });
    }
    let graded_order = entries.iter().try_fold(1u128, |acc, e| e.cardinality.and_then(|k| acc.checked_mul(k)));
    let abelian = W::kind(&s.x_obj(0)) == Kind::Abelian && (0..=s.p_max()).all(|q| W::kind(&s.f_obj(q as isize, 0)) == Kind::Abelian);
    let reassembles = if abelian && r > d { Some(graded_order.is_some() && graded_order == W::cardinality(&s.x_obj(0))) } else { None };
    Ok(DiagonalReport { r, entries, graded_order, reassembles })
}

#[derive(Clone, Debug)]
pub struct TruncatedReport {
    pub e: usize,
    pub q: usize,
    pub hypothesis: bool,
    /// Columns `p` where a hypothesis map is nontrivial.
    pub failing_columns: Vec<usize>,
    pub exact: bool,
    /// Homotopical degrees of the line where exactness fails.
    pub failing_degrees: Vec<usize>,
}

/// Exactness of line `q` from `Π_{q-e}(F_e)` on, against triviality of
/// `ᾱ` on `Π_{q-p}(G_p)` and `Π_{q-p}(G_{p-1})` for `e <= p <= min(d, q)`.
/// For `e = 0` the check includes the `τ` side.
pub fn truncated_degeneracy<W: World>(s: &ReesSystem<W>, e: usize, q: usize) -> Result<TruncatedReport> {
    let d = s.bound;
    let mut failing_columns = Vec::new();
    if e <= d.min(q) {
        for p in e..=d.min(q) {
            let k = q - p;
            let pi = p as isize;
            if !W::is_trivial_map(&s.alpha_bar(pi, k)) || !W::is_trivial_map(&s.alpha_bar(pi - 1, k)) {
                failing_columns.push(p);
            }
        }
    }
    let line = s.line_complex(q)?;
    let mut failing_degrees = Vec::new();
    if e == 0 {
        let v = check_exact(&line, Mode::Exact);
        if !v.tau_side {
            failing_degrees.push(q);
        }
    } else {
        let cx = &line.complex;
        for n in 1..q.saturating_sub(e) {
            let ker = W::preimage(&cx.d(n), &W::base(&cx.term(n - 1)));
            let im = W::image(&cx.d(n + 1), &W::full(&cx.term(n + 1)));
            if !W::sub_eq(&cx.term(n), &im, &ker) {
                failing_degrees.push(n);
            }
        }
    }
    Ok(TruncatedReport { e, q, hypothesis: failing_columns.is_empty(), failing_columns, exact: failing_degrees.is_empty(), failing_degrees })
}

/// Line `q` with its augmentation into the cokernel of `α`, checked for
/// exactness, and strong exactness when `q = 1`, `d <= 2`.
#[derive(Clone, Debug)]
pub struct LargeLineReport {
    pub q: usize,
    pub applies: bool,
    pub exact: ExactVerdict,
    pub strong: Option<ExactVerdict>,
}

pub fn large_line_check<W: World>(s: &ReesSystem<W>, q: usize) -> Result<LargeLineReport> {
    let d = s.bound;
    let line = s.line_complex(q)?;
    let exact = check_exact(&line, Mode::Exact);
    let strong = if q == 1 && d <= 2 { Some(check_exact(&line, Mode::Strong)) } else { None };
    Ok(LargeLineReport { q, applies: q + 1 >= d, exact, strong })
}
