use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::rees::ReesSystem;
use crate::algebra::FinGroup;
use crate::world::{Fin, FinAct, FinMap, FinObj, World};
use crate::{Error, Result};

struct Cosets {
    obj: FinObj,
    ids: Vec<usize>,
    reps: Vec<usize>,
}

fn pointed(k: usize) -> FinObj {
    if k == 1 {
        Fin::point()
    } else {
        FinObj::set(k)
    }
}

fn cosets(g: &FinGroup, sub: &[usize]) -> Cosets {
    let ids = g.left_coset_ids(sub);
    let k = ids.iter().max().map_or(1, |m| m + 1);
    let mut reps = vec![0; k];
    for x in (0..g.order()).rev() {
        reps[ids[x]] = x;
    }
    Cosets { obj: pointed(k), ids, reps }
}

struct Subgrp {
    obj: FinObj,
    elems: Vec<usize>,
    pos: Vec<usize>,
}

fn subgroup(g: &FinGroup, set: &[usize]) -> Subgrp {
    let (h, elems) = g.subgroup(set);
    let obj = if h.order() == 1 { Fin::point() } else { FinObj::group(h) };
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    Subgrp { obj, elems, pos }
}

fn map(src: &FinObj, tgt: &FinObj, f: Vec<usize>) -> Result<FinMap> {
    FinMap::new(src.clone(), tgt.clone(), f)
}

fn left_mult(group: &FinObj, on: &Cosets, g: &FinGroup, through: &[usize]) -> Result<FinAct> {
    let table = through.iter().map(|&x| on.reps.iter().map(|&r| on.ids[g.mul(x, r)]).collect()).collect();
    FinAct::new(group.clone(), on.obj.clone(), table)
}

/// The system of classifying spaces of a tower of finite groups
/// `Γ_P -> ... -> Γ_0`, with `X = BΓ_P`. `maps[p - 1]` is `Γ_p -> Γ_{p-1}`.
///
/// `Π_1(F_p) = Ker(Γ_p -> Γ_{p-1})` and `Π_0(F_p)` is the coset set of the
/// image, acted on by left multiplication; likewise for `G_p`.
pub fn group_tower(groups: &[FinGroup], maps: &[Vec<usize>]) -> Result<ReesSystem<Fin>> {
    if groups.is_empty() || maps.len() + 1 != groups.len() {
        return Err(Error::invalid("a tower of P + 1 groups needs P maps"));
    }
    let pm = groups.len() - 1;
    for (i, m) in maps.iter().enumerate() {
        if m.len() != groups[i + 1].order() || !groups[i + 1].is_hom(&groups[i], m) {
            return Err(Error::invalid(format!("map {} -> {} is not a homomorphism", i + 1, i)));
        }
    }
    let top = &groups[pm];
    let trivial = FinGroup::trivial();
    let grp = |p: isize| if p < 0 { &trivial } else { &groups[p as usize] };
    let obj = |g: &FinGroup| if g.order() == 1 { Fin::point() } else { FinObj::group(g.clone()) };
    let gobj: Vec<FinObj> = groups.iter().map(obj).collect();
    let gobj_at = |p: isize| if p < 0 { Fin::point() } else { gobj[p as usize].clone() };
    let phi = |p: usize| -> Vec<usize> { if p == 0 { vec![0; groups[0].order()] } else { maps[p - 1].clone() } };
    let mut psi = vec![Vec::new(); pm + 1];
    psi[pm] = (0..top.order()).collect();
    for p in (0..pm).rev() {
        psi[p] = psi[p + 1].iter().map(|&x| maps[p][x]).collect();
    }
    let pt = Fin::point();
    let xg = gobj[pm].clone();
    let image = |f: &[usize]| {
        let mut v = f.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let kernel = |f: &[usize]| (0..f.len()).filter(|&x| f[x] == 0).collect::<Vec<_>>();

    let fcos: Vec<Cosets> = (0..=pm).map(|p| cosets(grp(p as isize - 1), &if p == 0 { vec![0] } else { image(&phi(p)) })).collect();
    let fker: Vec<Subgrp> = (0..=pm).map(|p| subgroup(&groups[p], &kernel(&phi(p)))).collect();
    let gcos: Vec<Cosets> = (0..=pm).map(|p| cosets(&groups[p], &image(&psi[p]))).collect();
    let gker: Vec<Subgrp> = (0..=pm).map(|p| subgroup(top, &kernel(&psi[p]))).collect();

    let mut s = ReesSystem {
        bound: 0,
        x: vec![pt.clone(), xg.clone()],
        xp: Vec::new(),
        f: Vec::new(),
        g: Vec::new(),
        a: Vec::new(),
        alpha: Vec::new(),
        beta: Vec::new(),
        gamma: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
        alpha_bar: Vec::new(),
        beta_bar: Vec::new(),
        gamma_bar: Vec::new(),
        act_f: Vec::new(),
        act_g: Vec::new(),
        act_gf: Vec::new(),
    };
    for p in 0..=pm {
        let pi = p as isize;
        let (fc, fk, gc, gk) = (&fcos[p], &fker[p], &gcos[p], &gker[p]);
        let prev = grp(pi - 1);
        s.xp.push(vec![pt.clone(), gobj[p].clone()]);
        s.f.push(vec![fc.obj.clone(), fk.obj.clone()]);
        s.g.push(vec![gc.obj.clone(), gk.obj.clone()]);
        s.a.push(vec![map(&pt, &pt, vec![0])?, map(&xg, &gobj[p], psi[p].clone())?]);
        s.alpha.push(vec![map(&pt, &pt, vec![0])?, map(&gobj[p], &gobj_at(pi - 1), phi(p))?]);
        s.beta.push(vec![map(&gobj_at(pi - 1), &fc.obj, (0..prev.order()).map(|x| fc.ids[x]).collect())?]);
        s.gamma.push(vec![map(&fc.obj, &pt, vec![0; fc.obj.len()])?, map(&fk.obj, &gobj[p], fk.elems.clone())?]);
        s.b.push(vec![map(&gobj[p], &gc.obj, gc.ids.clone())?]);
        s.c.push(vec![map(&gc.obj, &pt, vec![0; gc.obj.len()])?, map(&gk.obj, &xg, gk.elems.clone())?]);
        if p == 0 {
            s.alpha_bar.push(s.c[0].clone());
        } else {
            let pc = &gcos[p - 1];
            let on_cosets = gc.reps.iter().map(|&r| pc.ids[maps[p - 1][r]]).collect();
            let inc = gk.elems.iter().map(|&x| gker[p - 1].pos[x]).collect();
            s.alpha_bar.push(vec![map(&gc.obj, &pc.obj, on_cosets)?, map(&gk.obj, &gker[p - 1].obj, inc)?]);
        }
        let (gprev0, gprev1, gprev_elems, gprev_reps): (FinObj, FinObj, Vec<usize>, Vec<usize>) = if p == 0 {
            (pt.clone(), xg.clone(), (0..top.order()).collect(), vec![0])
        } else {
            let c = &gcos[p - 1];
            let k = &gker[p - 1];
            (c.obj.clone(), k.obj.clone(), k.elems.clone(), c.reps.clone())
        };
        let bb0 = gprev_reps.iter().map(|&r| fc.ids[r]).collect();
        let bb1 = gprev_elems.iter().map(|&x| fk.pos[psi[p][x]]).collect();
        s.beta_bar.push(vec![map(&gprev0, &fc.obj, bb0)?, map(&gprev1, &fk.obj, bb1)?]);
        s.gamma_bar.push(vec![map(&fk.obj, &gc.obj, fk.elems.iter().map(|&x| gc.ids[x]).collect())?]);
        let prev_obj = gobj_at(pi - 1);
        let prev_all: Vec<usize> = (0..prev.order()).collect();
        s.act_f.push(left_mult(&prev_obj, fc, prev, &prev_all)?);
        s.act_g.push(left_mult(&gobj[p], gc, &groups[p], &(0..groups[p].order()).collect::<Vec<_>>())?);
        s.act_gf.push(left_mult(&fk.obj, gc, &groups[p], &fk.elems)?);
    }
    s.bound = (0..=pm).rev().take_while(|&p| psi[p].len() == groups[p].order() && image(&psi[p]).len() == groups[p].order()).last().unwrap_or(pm);
    Ok(s)
}
