use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use ussp_core::algebra::{product_coords, product_index, smith_normal_form, Ab, FinGroup, Int, Mat};
use ussp_core::coniveau::{
    cousin_verify, double_cosets, gersten_sheaf_complex, torsor_coset_map, AbSheaf, EmTheory, GroupSheaf, RankedPosetModel,
    TorsorTheory,
};
use ussp_core::spectral::{couple_pair_pages, dd_failures, group_tower, page, page_direct, validate_couple};

const CAP: usize = 1 << 16;

fn gcd(a: Int, b: Int) -> Int {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn matrix() -> impl Strategy<Value = Mat> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i128..10, c), r).prop_map(move |rows| Mat::from_rows(&rows, c))
    })
}

proptest! {
    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), Mat::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), Mat::identity(m.cols()));
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    prop_assert_eq!(s.d.get(r, c), 0);
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|&x| x > 0));
        prop_assert!(diag.windows(2).all(|w| w[1] % w[0] == 0));
        let content = m.to_rows().iter().flatten().fold(0, |g, &x| gcd(g, x));
        prop_assert_eq!(diag.first().copied().unwrap_or(0), content);
    }

    #[test]
    fn cyclic_hom_counts_are_gcds(n in 1usize..13, k in 1usize..13) {
        let (a, b) = (FinGroup::cyclic(n), FinGroup::cyclic(k));
        prop_assert_eq!(a.homs_to(&b).len() as Int, gcd(n as Int, k as Int));
    }
}

/// Cyclic towers `C_{n_0} <- C_{n_1} <- ...` with maps `x -> k x`.
fn cyclic_tower() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    proptest::collection::vec((1usize..7, 0usize..6), 2..5).prop_map(|v| {
        let orders: Vec<usize> = v.iter().map(|&(n, _)| n).collect();
        let picks: Vec<usize> = v[1..].iter().map(|&(_, k)| k).collect();
        (orders, picks)
    })
}

fn build((orders, picks): &(Vec<usize>, Vec<usize>)) -> (Vec<FinGroup>, Vec<Vec<usize>>) {
    let groups: Vec<FinGroup> = orders.iter().map(|&n| FinGroup::cyclic(n)).collect();
    let maps = (1..groups.len())
        .map(|i| {
            let homs = groups[i].homs_to(&groups[i - 1]);
            homs[picks[i - 1] % homs.len()].clone()
        })
        .collect();
    (groups, maps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tower_pages_match_their_closed_form(t in cyclic_tower()) {
        let (groups, maps) = build(&t);
        let s = group_tower(&groups, &maps).unwrap();
        prop_assert!(s.validate().valid);
        let c = s.right_couple().unwrap();
        prop_assert!(validate_couple(&c).valid);
        for r in 1..=4 {
            let a = page(&c, r).unwrap();
            let b = page_direct(&c, r).unwrap();
            prop_assert_eq!(a.first_difference(&b, &c), None);
        }
        prop_assert!(dd_failures(&c, 4).unwrap().is_empty());
        prop_assert!(couple_pair_pages(&s, 3).unwrap().agree);
    }
}

/// Orbits of `∏ G_x × G_η` on tuples over covering pairs, by direct enumeration.
fn orbit_count(g: &GroupSheaf) -> usize {
    let m = g.model();
    let edges = m.covers();
    let factors: Vec<FinGroup> = edges.iter().map(|&(_, y)| g.stalk(y).clone()).collect();
    let closed = m.sorted(m.with_codim(1));
    let generic = m.sorted(m.with_codim(0));
    let acting: Vec<FinGroup> = closed.iter().chain(&generic).map(|&x| g.stalk(x).clone()).collect();
    let total: usize = factors.iter().map(FinGroup::order).product();
    let n_act: usize = acting.iter().map(FinGroup::order).product();
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for i in 0..total {
        if !seen.insert(i) {
            continue;
        }
        orbits += 1;
        let t = product_coords(&factors, i);
        for a in 0..n_act {
            let ks = product_coords(&acting, a);
            let s: Vec<usize> = edges
                .iter()
                .enumerate()
                .map(|(e, &(x, y))| {
                    let o = ks[closed.iter().position(|&c| c == x).unwrap()];
                    let k = ks[closed.len() + generic.iter().position(|&c| c == y).unwrap()];
                    let f = &factors[e];
                    f.mul(f.mul(g.res(x, y, o), t[e]), f.inv(k))
                })
                .collect();
            seen.insert(product_index(&factors, &s));
        }
    }
    orbits
}

fn generic_group(i: usize) -> FinGroup {
    [FinGroup::cyclic(4), FinGroup::symmetric(3), FinGroup::dihedral(4), FinGroup::quaternion()][i % 4].clone()
}

/// A Dedekind-like model with generic stalk `G` and, at each closed point,
/// the subgroup generated by the chosen elements.
fn subgroup_sheaf(gi: usize, gens: &[Vec<usize>]) -> GroupSheaf {
    let g = generic_group(gi);
    let m = RankedPosetModel::dedekind(gens.len());
    let mut stalks = vec![g.clone()];
    let mut res = BTreeMap::new();
    for (i, gs) in gens.iter().enumerate() {
        let picked: Vec<usize> = gs.iter().map(|&a| a % g.order()).collect();
        let mut sub = g.generate(&picked);
        sub.sort_unstable();
        let (h, emb) = g.subgroup(&sub);
        stalks.push(h);
        res.insert((i + 1, 0), emb);
    }
    GroupSheaf::new(&m, stalks, res).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn torsors_match_double_cosets(gi in 0usize..4, gens in proptest::collection::vec(proptest::collection::vec(0usize..8, 0..3), 0..3)) {
        let g = subgroup_sheaf(gi, &gens);
        let d = double_cosets(&g, CAP).unwrap();
        prop_assert_eq!(d.count(), orbit_count(&g));
        let th = TorsorTheory::new(&g, CAP);
        prop_assert_eq!(th.h1().unwrap(), d.count());
        prop_assert!(torsor_coset_map(&th, &d).unwrap().is_bijection());
    }

    #[test]
    fn gersten_complexes_are_cousin_complexes(dim in 0usize..3, n in prop_oneof![Just(0i128), 2i128..6], twist in 0usize..3) {
        let m = RankedPosetModel::chain(dim);
        let a = Ab::from_cyclic_factors(&[n]);
        let f = match twist {
            0 => AbSheaf::constant(&m, &a),
            1 => AbSheaf::skyscraper(&m, dim, &a),
            _ => AbSheaf::twisted(&m, &a, 3),
        };
        for q in [dim, dim + 1] {
            let c = gersten_sheaf_complex(&EmTheory::new(&f, q)).unwrap();
            prop_assert!(cousin_verify(&c).unwrap().is_iso());
        }
    }
}
