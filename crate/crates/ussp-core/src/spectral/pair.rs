use alloc::vec::Vec;

use super::couple::{derived, SlotSets};
use super::rees::ReesSystem;
use crate::world::World;
use crate::Result;

/// Page `r` of the left couple `(Π(G_{p-1}), Π(F_p); ᾱ, β̄, γ̄)` in closed
/// form. In degree 0 the boundaries are collapsed to the base point.
#[derive(Clone, Debug)]
pub struct LeftPage<W: World> {
    pub r: usize,
    pub terms: Vec<Vec<W::Quot>>,
}

impl<W: World> LeftPage<W> {
    fn term(&self, s: &ReesSystem<W>, p: isize, n: usize) -> W::Quot {
        if p < 0 || p as usize > s.p_max() || n > s.n_max() {
            let pt = W::point();
            return W::collapse(&pt, &W::full(&pt), &W::base(&pt));
        }
        self.terms[p as usize][n].clone()
    }
}

pub fn left_page_direct<W: World>(s: &ReesSystem<W>, r: usize) -> Result<LeftPage<W>> {
    let mut terms = Vec::new();
    for p in 0..=s.p_max() as isize {
        let mut row = Vec::new();
        for n in 0..=s.n_max() {
            let f = s.f_obj(p, n);
            let z = left_cycles(s, r, p, n);
            let k = W::preimage(&s.alpha_bar_pow(p - 1, r - 1, n), &W::base(&s.g_obj(p - r as isize, n)));
            row.push(if n >= 1 {
                W::orbits(&W::translation(&s.beta_bar(p, n)), &k, &z)?
            } else {
                W::collapse(&f, &z, &W::image(&s.beta_bar(p, 0), &k))
            });
        }
        terms.push(row);
    }
    Ok(LeftPage { r, terms })
}

fn left_cycles<W: World>(s: &ReesSystem<W>, r: usize, p: isize, n: usize) -> W::Sub {
    let f = s.f_obj(p, n);
    if n == 0 {
        return W::full(&f);
    }
    let top = p + r as isize - 1;
    let im = W::image(&s.alpha_bar_pow(top, r - 1, n - 1), &W::full(&s.g_obj(top, n - 1)));
    W::preimage(&s.gamma_bar(p, n - 1), &im)
}

/// Kernel (for `n >= 1`) and image of the left differential at `(p, n)`.
pub fn left_slot_sets<W: World>(s: &ReesSystem<W>, lp: &LeftPage<W>, p: usize, n: usize) -> SlotSets<W> {
    let r = lp.r;
    let p = p as isize;
    let f = s.f_obj(p, n);
    let src = p - r as isize;
    let lifted = W::image(&s.gamma_bar(src, n), &left_cycles(s, r, src, n + 1));
    let pre = W::preimage(&s.alpha_bar_pow(p - 1, r - 1, n), &lifted);
    let image = W::image(&s.beta_bar(p, n), &pre);
    let kernel = if n >= 1 {
        let tp = p + r as isize;
        let t = W::base_class(&s.f_obj(tp, n - 1), &lp.term(s, tp, n - 1));
        let down = W::image(&s.alpha_bar_pow(tp - 1, r - 1, n - 1), &W::preimage(&s.beta_bar(tp, n - 1), &t));
        W::meet(&f, &left_cycles(s, r, p, n), &W::preimage(&s.gamma_bar(p, n - 1), &down))
    } else {
        W::full(&f)
    };
    SlotSets { kernel, image }
}

/// A slot where the two couples disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMismatch {
    pub r: usize,
    pub p: usize,
    pub q: usize,
    pub kernel: bool,
}

#[derive(Clone, Debug, Default)]
pub struct PairReport {
    pub pages: usize,
    pub agree: bool,
    pub mismatches: Vec<PairMismatch>,
    /// `(p, q, holds)` for `d_1 = -d̄_1` (no sign into degree 0).
    pub d1_sign: Vec<(usize, usize, bool)>,
}

/// Compares kernels and images of the differentials of the right and left
/// couples, as subobjects of `E_1`, on pages `1..=max_page`.
pub fn couple_pair_pages<W: World>(s: &ReesSystem<W>, max_page: usize) -> Result<PairReport> {
    let c = s.right_couple()?;
    let mut rep = PairReport { pages: max_page, ..Default::default() };
    let mut dc = derived(&c, 1)?;
    for r in 1..=max_page {
        if r > 1 {
            dc = dc.derive()?;
        }
        let lp = left_page_direct(s, r)?;
        for p in 0..=s.p_max() {
            for n in 0..=s.n_max() {
                let f = s.f_obj(p as isize, n);
                let right = dc.slot_sets(p, n);
                let left = left_slot_sets(s, &lp, p, n);
                if !W::sub_eq(&f, &right.image, &left.image) {
                    rep.mismatches.push(PairMismatch { r, p, q: p + n, kernel: false });
                }
                if n >= 1 && !W::sub_eq(&f, &right.kernel, &left.kernel) {
                    rep.mismatches.push(PairMismatch { r, p, q: p + n, kernel: true });
                }
            }
        }
    }
    for p in 0..=s.p_max() {
        for n in 1..=s.n_max() {
            let (right, left) = s.d1_pair(p as isize, n);
            let left = if n >= 2 { W::invert(&left) } else { left };
            rep.d1_sign.push((p, p + n, W::map_eq(&right, &left)));
        }
    }
    rep.agree = rep.mismatches.is_empty() && rep.d1_sign.iter().all(|t| t.2);
    Ok(rep)
}
