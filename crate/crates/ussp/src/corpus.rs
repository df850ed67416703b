//! Seeded random instances: groups, towers, models and sheaves.
//!
//! All generators draw from a caller-supplied ChaCha8 stream, so a seed
//! fixes the whole corpus.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ussp_core::algebra::{Ab, FinGroup, Int};
use ussp_core::coniveau::{AbSheaf, GroupSheaf, RankedPosetModel};
use ussp_core::spectral::{group_tower, ReesSystem};
use ussp_core::world::Fin;

use crate::format::{GroupDesc, TowerDesc};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Groups up to `max_order` elements, described and built.
pub fn small_groups(max_order: usize) -> Vec<(GroupDesc, FinGroup)> {
    let mut out: Vec<GroupDesc> = (1..=12).map(GroupDesc::Cyclic).collect();
    out.extend([
        GroupDesc::Product(vec![GroupDesc::Cyclic(2), GroupDesc::Cyclic(2)]),
        GroupDesc::Symmetric(3),
        GroupDesc::Dihedral(4),
        GroupDesc::Quaternion,
        GroupDesc::Product(vec![GroupDesc::Cyclic(2), GroupDesc::Cyclic(4)]),
        GroupDesc::Product(vec![GroupDesc::Cyclic(2), GroupDesc::Cyclic(2), GroupDesc::Cyclic(2)]),
        GroupDesc::Dihedral(5),
        GroupDesc::Alternating(4),
        GroupDesc::Dihedral(6),
        GroupDesc::Product(vec![GroupDesc::Symmetric(3), GroupDesc::Cyclic(2)]),
        GroupDesc::Product(vec![GroupDesc::Cyclic(3), GroupDesc::Cyclic(3)]),
        GroupDesc::Symmetric(4),
    ]);
    out.into_iter()
        .map(|d| {
            let g = d.build("").expect("built-in group");
            (d, g)
        })
        .filter(|(_, g)| g.order() <= max_order)
        .collect()
}

pub fn random_group(rng: &mut ChaCha8Rng, max_order: usize) -> (GroupDesc, FinGroup) {
    small_groups(max_order).choose(rng).cloned().expect("the trivial group is always available")
}

/// A homomorphism `src -> tgt`, from random images of generators; falls
/// back to the trivial map.
pub fn random_hom(rng: &mut ChaCha8Rng, src: &FinGroup, tgt: &FinGroup) -> Vec<usize> {
    let gens = src.generating_set();
    for _ in 0..16 {
        let images: Vec<usize> = gens.iter().map(|_| rng.gen_range(0..tgt.order())).collect();
        if let Some(f) = src.extend_hom(tgt, &gens, &images) {
            return f;
        }
    }
    vec![0; src.order()]
}

/// A tower of `2..=max_len` groups with random homomorphisms; injections,
/// surjections and identities are favoured so that nontrivial pages appear.
pub fn random_tower(rng: &mut ChaCha8Rng, max_len: usize, max_order: usize) -> TowerDesc {
    let len = rng.gen_range(2..=max_len.max(2));
    let mut groups: Vec<(GroupDesc, FinGroup)> = vec![random_group(rng, max_order)];
    let mut maps = Vec::new();
    for _ in 1..len {
        let (below_desc, below) = groups.last().cloned().expect("nonempty");
        let (d, g) = if rng.gen_bool(0.35) { (below_desc.clone(), below.clone()) } else { random_group(rng, max_order) };
        let f = if rng.gen_bool(0.3) && d == below_desc { (0..g.order()).collect() } else { random_hom(rng, &g, &below) };
        groups.push((d, g));
        maps.push(f);
    }
    TowerDesc { groups: groups.into_iter().map(|(d, _)| d).collect(), maps }
}

pub fn build_tower(t: &TowerDesc) -> ReesSystem<Fin> {
    let groups: Vec<FinGroup> = t.groups.iter().map(|d| d.build("").expect("generated group")).collect();
    group_tower(&groups, &t.maps).expect("generated tower")
}

/// A model with codimensions `0..=dim`: every point of codimension `k > 0`
/// specializes at least one point of codimension `k - 1`.
pub fn random_model(rng: &mut ChaCha8Rng, dim: usize, max_width: usize) -> RankedPosetModel {
    let mut ids = Vec::new();
    let mut codim = Vec::new();
    let mut pairs = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    for k in 0..=dim {
        let width = if k == 0 { rng.gen_range(1..=max_width.min(2)) } else { rng.gen_range(1..=max_width) };
        let mut level = Vec::new();
        for i in 0..width {
            let x = ids.len();
            ids.push(format!("{}{}", ["g", "c", "d", "e"][k.min(3)], i + 1));
            codim.push(k);
            if k > 0 {
                let mut ups: Vec<usize> = prev.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if ups.is_empty() {
                    ups.push(*prev.choose(rng).expect("previous level is nonempty"));
                }
                pairs.extend(ups.into_iter().map(|y| (x, y)));
            }
            level.push(x);
        }
        prev = level;
    }
    RankedPosetModel::new(ids, codim, &pairs).expect("generated model")
}

fn small_ab(rng: &mut ChaCha8Rng) -> Ab {
    let choices: [&[Int]; 6] = [&[0], &[2], &[3], &[4], &[0, 2], &[2, 2]];
    Ab::from_cyclic_factors(choices.choose(rng).expect("nonempty"))
}

/// Constant, twisted, skyscraper, extension by zero, closed support, or a
/// sum of two of these.
pub fn random_ab_sheaf(rng: &mut ChaCha8Rng, m: &RankedPosetModel) -> AbSheaf {
    fn one(rng: &mut ChaCha8Rng, m: &RankedPosetModel) -> AbSheaf {
        let a = small_ab(rng);
        let x = rng.gen_range(0..m.len());
        match rng.gen_range(0..5) {
            0 => AbSheaf::constant(m, &a),
            1 => AbSheaf::twisted(m, &a, rng.gen_range(2..=5)),
            2 => AbSheaf::skyscraper(m, x, &a),
            3 => AbSheaf::extension_by_zero(m, m.star(x), &a).expect("stars are open"),
            _ => AbSheaf::on_closed(m, m.closure(x), &a).expect("closures are closed"),
        }
    }
    if rng.gen_bool(0.25) {
        let parts = [one(rng, m), one(rng, m)];
        AbSheaf::direct_sum(&parts).expect("same model")
    } else {
        one(rng, m)
    }
}

/// Constant, skyscraper, trivial, or a sheaf of subgroups of one group with
/// inclusions as restrictions (stalks shrink under specialization).
pub fn random_group_sheaf(rng: &mut ChaCha8Rng, m: &RankedPosetModel, max_order: usize) -> GroupSheaf {
    let (_, g) = random_group(rng, max_order);
    match rng.gen_range(0..6) {
        0 => GroupSheaf::constant(m, &g),
        1 => GroupSheaf::skyscraper(m, rng.gen_range(0..m.len()), &g),
        2 => GroupSheaf::trivial(m),
        _ => subgroup_sheaf(rng, m, &g),
    }
}

pub fn subgroup_sheaf(rng: &mut ChaCha8Rng, m: &RankedPosetModel, g: &FinGroup) -> GroupSheaf {
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by_key(|&x| m.codim(x));
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); m.len()];
    for &x in &order {
        let ups: Vec<usize> = m.star(x).iter().filter(|&y| y != x).collect();
        let allowed: Vec<usize> = (0..g.order()).filter(|a| ups.iter().all(|&y| sets[y].contains(a))).collect();
        sets[x] = if ups.is_empty() {
            (0..g.order()).collect()
        } else if rng.gen_bool(0.5) {
            allowed
        } else {
            let gens: Vec<usize> = allowed.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
            let mut s = g.generate(&gens);
            s.sort_unstable();
            s
        };
    }
    let subs: Vec<(FinGroup, Vec<usize>)> = sets.iter().map(|s| g.subgroup(s)).collect();
    let mut res = BTreeMap::new();
    for (x, y) in m.covers() {
        let table = subs[x].1.iter().map(|a| subs[y].1.iter().position(|b| b == a).expect("nested subgroups")).collect();
        res.insert((x, y), table);
    }
    GroupSheaf::new(m, subs.into_iter().map(|(h, _)| h).collect(), res).expect("inclusions compose")
}

/// A model of dimension at most one with a single generic point.
pub fn dedekind_like(rng: &mut ChaCha8Rng, max_closed: usize) -> RankedPosetModel {
    RankedPosetModel::dedekind(rng.gen_range(0..=max_closed))
}
