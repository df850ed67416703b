use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::algebra::FinGroup;
use crate::world::Fin;

fn sign(s3: &FinGroup) -> Vec<usize> {
    (0..s3.order()).map(|g| usize::from(s3.element_order(g) == 2)).collect()
}

fn involution(g: &FinGroup) -> usize {
    (0..g.order()).find(|&x| g.element_order(x) == 2).unwrap()
}

fn check_all(s: &ReesSystem<Fin>, pages: usize) {
    let rep = s.validate();
    assert!(rep.valid, "{:?}", rep.failures);
    let c = s.right_couple().unwrap();
    assert!(validate_couple(&c).valid);
    for r in 1..=pages {
        let a = page_direct(&c, r).unwrap();
        let b = page(&c, r).unwrap();
        assert_eq!(a.first_difference(&b, &c), None, "page {r}");
        let dc = derived(&c, r).unwrap();
        let v = dc.validate();
        assert!(v.valid, "derived couple {r}: {:?}", v.failures);
    }
    assert!(dd_failures(&c, pages).unwrap().is_empty());
    let pair = couple_pair_pages(s, pages).unwrap();
    assert!(pair.agree, "{:?}", pair);
}

#[test]
fn z4_over_z2() {
    let z4 = FinGroup::cyclic(4);
    let z2 = FinGroup::cyclic(2);
    let s = group_tower(&[z2, z4], &[vec![0, 1, 0, 1]]).unwrap();
    assert_eq!(s.bound, 1);
    check_all(&s, 4);
    let c = s.right_couple().unwrap();
    let e3 = page(&c, 3).unwrap();
    assert_eq!(e3.cardinality(&c, 0, 1), Some(2));
    assert_eq!(e3.cardinality(&c, 1, 1), Some(2));
    let diag = diagonal_terms(&s, 2).unwrap();
    assert!(diag.entries.iter().all(|e| e.holds != Some(false)));
}

#[test]
fn inclusion_of_the_index_two_subgroup() {
    let z4 = FinGroup::cyclic(4);
    let z2 = FinGroup::cyclic(2);
    let s = group_tower(&[z4, z2], &[vec![0, 2]]).unwrap();
    check_all(&s, 4);
    let c = s.right_couple().unwrap();
    let e1 = page(&c, 1).unwrap();
    assert_eq!(e1.cardinality(&c, 1, 0), Some(2));
    let e2 = page(&c, 2).unwrap();
    assert_eq!(e2.cardinality(&c, 1, 0), Some(1));
    assert_eq!(e2.cardinality(&c, 0, 1), Some(2));
}

#[test]
fn nonabelian_towers() {
    let s3 = FinGroup::symmetric(3);
    let z2 = FinGroup::cyclic(2);
    let t = involution(&s3);
    let sys = group_tower(&[z2.clone(), s3.clone()], &[sign(&s3)]).unwrap();
    check_all(&sys, 3);
    let sys = group_tower(&[s3.clone(), z2.clone()], &[vec![0, t]]).unwrap();
    check_all(&sys, 3);
    assert_eq!(sys.f_obj(1, 0).len(), 3);
    let three = group_tower(&[z2.clone(), s3.clone(), z2.clone()], &[sign(&s3), vec![0, t]]).unwrap();
    assert_eq!(three.bound, 2);
    check_all(&three, 4);
}

#[test]
fn products_of_towers() {
    let s3 = FinGroup::symmetric(3);
    let z2 = FinGroup::cyclic(2);
    let z4 = FinGroup::cyclic(4);
    let a = group_tower(&[z2.clone(), s3.clone()], &[sign(&s3)]).unwrap();
    let b = group_tower(&[z4.clone(), z2.clone()], &[vec![0, 2]]).unwrap();
    let p = product_system(&[a, b]).unwrap();
    check_all(&p, 3);
}

#[test]
fn first_page_differential_is_the_row_composite() {
    let z4 = FinGroup::cyclic(4);
    let z2 = FinGroup::cyclic(2);
    let s = group_tower(&[z4, z2], &[vec![0, 2]]).unwrap();
    let line = s.line_complex(1).unwrap();
    assert_eq!(line.complex.top(), 1);
    assert!(s.tau_is_lift(1));
}

#[test]
fn degeneracy_on_a_split_tower() {
    let z2 = FinGroup::cyclic(2);
    let s = group_tower(&[z2.clone(), z2.clone()], &[vec![0, 1]]).unwrap();
    assert_eq!(s.bound, 0);
    let rep = degeneracy_check(&s, 1).unwrap();
    assert!(rep.all_conditions(), "{:?}", rep.failures);
    assert!(rep.collapse);
}

#[test]
fn index_set_excludes_the_corner() {
    assert_eq!(index_set(1, 3), vec![(0, 0), (1, 0), (1, 1)]);
    assert_eq!(index_set(3, 0), vec![(0, 0)]);
}
