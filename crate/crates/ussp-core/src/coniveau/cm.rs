use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::adelic::{double_cosets, torsor_coset_map};
use super::model::PointSet;
use super::sheaf::GroupSheaf;
use super::system::gersten_check;
use super::theory::{describe_points, Pair};
use super::torsor::TorsorTheory;
use crate::algebra::group::product_coords;
use crate::{Error, Result};

/// Sections over the open `v`, as families indexed by every point of the
/// model with the identity off `v`, sorted.
pub fn group_sections(g: &GroupSheaf, v: PointSet, cap: usize) -> Result<Vec<Vec<usize>>> {
    let m = g.model();
    let mins: Vec<usize> = m.sorted(m.minimal(v));
    let groups: Vec<_> = mins.iter().map(|&a| g.stalk(a).clone()).collect();
    let total = groups.iter().try_fold(1usize, |a, f| a.checked_mul(f.order()).filter(|&t| t <= cap));
    let Some(total) = total else {
        return Err(Error::limit(format!("more than {cap} candidate sections on {}", describe_points(m, v))));
    };
    let mut out = Vec::new();
    'tuple: for i in 0..total {
        let t = product_coords(&groups, i);
        let mut s = alloc::vec![0; m.len()];
        for y in v.iter() {
            let mut val = None;
            for (k, &a) in mins.iter().enumerate() {
                if !m.le(a, y) {
                    continue;
                }
                let r = g.res(a, y, t[k]);
                match val {
                    None => val = Some(r),
                    Some(w) if w != r => continue 'tuple,
                    _ => {}
                }
            }
            s[y] = val.expect("every point of an open lies above a minimal one");
        }
        out.push(s);
    }
    out.sort();
    Ok(out)
}

fn restrict(s: &[usize], keep: PointSet) -> Vec<usize> {
    s.iter().enumerate().map(|(x, &v)| if keep.contains(x) { v } else { 0 }).collect()
}

/// The five conditions of the homotopy Cohen–Macaulay criterion, each
/// computed on its own terms.
#[derive(Clone, Debug)]
pub struct CmReport {
    /// The local Gersten complexes of line 1 are exact on the `τ` side.
    pub cond_i: bool,
    /// `G(V)` is the set of generic families fixing the base point of every
    /// `H^1_x`, `x ∈ V^{(1)}`.
    pub cond_ii: bool,
    /// `G(V) -> G(V - Z)` is iso in codimension `> 1`, mono in codimension 1.
    pub cond_iii: bool,
    /// `H^i_x = *` for `i ∈ {0, 1}`, `i != δ(x)`.
    pub cond_iv: bool,
    /// Gersten in every degree.
    pub cond_v: bool,
    /// For `dim <= 1`: `H^1` maps bijectively onto the double cosets.
    pub torsor_map: Option<bool>,
    pub witnesses: Vec<String>,
}

impl CmReport {
    pub fn cm(&self) -> bool {
        self.cond_i
    }

    pub fn agree(&self) -> bool {
        [self.cond_ii, self.cond_iii, self.cond_iv, self.cond_v].iter().all(|&c| c == self.cond_i)
    }
}

pub fn cohen_macaulay_check(g: &GroupSheaf, cap: usize) -> Result<CmReport> {
    let m = g.model();
    let th = TorsorTheory::new(g, cap);
    let mut witnesses = Vec::new();

    let one = gersten_check(&th, 1, cap)?;
    let cond_i = one.cond_i;
    if !cond_i {
        witnesses.push(format!("(i) fails at {}", describe_points(m, PointSet::from_points(one.failing_points.iter().copied()))));
    }

    let opens = m.opens_in(m.all(), cap)?;
    let mut sections = alloc::collections::BTreeMap::new();
    for &v in &opens {
        sections.insert(v, group_sections(g, v, cap)?);
    }

    let mut cond_ii = true;
    for &v in &opens {
        let gens: Vec<usize> = m.sorted(v.inter(m.with_codim(0)));
        let groups: Vec<_> = gens.iter().map(|&e| g.stalk(e).clone()).collect();
        let images: BTreeSet<Vec<usize>> = sections[&v].iter().map(|s| gens.iter().map(|&e| s[e]).collect()).collect();
        if images.len() != sections[&v].len() {
            cond_ii = false;
            witnesses.push(format!("(ii) τ is not injective on {}", describe_points(m, v)));
            continue;
        }
        let total = groups.iter().try_fold(1usize, |a, f| a.checked_mul(f.order()).filter(|&t| t <= cap));
        let Some(total) = total else {
            return Err(Error::limit(format!("more than {cap} generic families on {}", describe_points(m, v))));
        };
        let local: Vec<(usize, BTreeSet<Vec<usize>>)> = v
            .inter(m.with_codim(1))
            .iter()
            .map(|x| {
                let above: Vec<usize> = gens.iter().copied().filter(|&e| m.lt(x, e)).collect();
                let stab = (0..g.stalk(x).order()).map(|k| above.iter().map(|&e| g.res(x, e, k)).collect()).collect();
                (x, stab)
            })
            .collect();
        for i in 0..total {
            let t = product_coords(&groups, i);
            let ok = local.iter().all(|(x, stab)| {
                let part: Vec<usize> = gens.iter().zip(&t).filter(|(&e, _)| m.lt(*x, e)).map(|(_, &a)| a).collect();
                stab.contains(&part)
            });
            if ok
                && !images.contains(&t) {
                    cond_ii = false;
                    witnesses.push(format!("(ii) a generic family fixing every base point does not come from {}", describe_points(m, v)));
                    break;
                }
        }
    }

    let mut cond_iii = true;
    for &v in &opens {
        for z in m.closed_in(v, cap)? {
            let Some(c) = m.codim_of(z) else { continue };
            if c == 0 {
                continue;
            }
            let rest = v.minus(z);
            let img: BTreeSet<Vec<usize>> = sections[&v].iter().map(|s| restrict(s, rest)).collect();
            let mono = img.len() == sections[&v].len();
            let iso = mono && img.len() == sections[&rest].len();
            if !mono || (c > 1 && !iso) {
                cond_iii = false;
                witnesses.push(format!(
                    "(iii) restriction from {} to {} is not {}",
                    describe_points(m, v),
                    describe_points(m, rest),
                    if mono { "onto" } else { "injective" }
                ));
            }
        }
    }

    let mut cond_iv = true;
    for x in m.sorted(m.all()) {
        let d = m.codim(x);
        let above: Vec<usize> = m.star(x).iter().filter(|&y| y != x).collect();
        let h0 = (0..g.stalk(x).order()).filter(|&k| above.iter().all(|&y| g.res(x, y, k) == 0)).count();
        let h1 = th.data(Pair::new(m.star(x), PointSet::single(x)))?.reps.len();
        if d != 0 && h0 != 1 {
            cond_iv = false;
            witnesses.push(format!("(iv) H^0 at {} has {h0} elements", m.id(x)));
        }
        if d != 1 && h1 != 1 {
            cond_iv = false;
            witnesses.push(format!("(iv) H^1 at {} has {h1} classes", m.id(x)));
        }
    }

    let mut cond_v = true;
    for q in 0..=m.dim() + 1 {
        let r = if q == 1 { one.clone() } else { gersten_check(&th, q, cap)? };
        if !r.gersten() {
            cond_v = false;
            witnesses.push(format!("(v) not Gersten in degree {q}"));
        }
    }

    let torsor_map = if m.dim() <= 1 {
        let dc = double_cosets(g, cap)?;
        Some(torsor_coset_map(&th, &dc)?.is_bijection())
    } else {
        None
    };

    Ok(CmReport { cond_i, cond_ii, cond_iii, cond_iv, cond_v, torsor_map, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinGroup;
    use crate::coniveau::model::RankedPosetModel;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    const CAP: usize = 1 << 16;

    fn models() -> Vec<RankedPosetModel> {
        vec![RankedPosetModel::point(), RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(2)]
    }

    #[test]
    fn sections_of_a_constant_sheaf() {
        let m = RankedPosetModel::dedekind(2);
        let g = GroupSheaf::constant(&m, &FinGroup::cyclic(3));
        assert_eq!(group_sections(&g, m.all(), CAP).unwrap().len(), 3);
        assert_eq!(group_sections(&g, PointSet::EMPTY, CAP).unwrap().len(), 1);
    }

    #[test]
    fn constant_sheaves_are_cm() {
        for m in models() {
            for grp in [FinGroup::cyclic(2), FinGroup::symmetric(3)] {
                let r = cohen_macaulay_check(&GroupSheaf::constant(&m, &grp), CAP).unwrap();
                assert!(r.cm() && r.agree(), "{r:?}");
                if m.dim() <= 1 {
                    assert_eq!(r.torsor_map, Some(true));
                }
            }
        }
    }

    #[test]
    fn trivial_sheaf_is_cm() {
        for m in models() {
            let r = cohen_macaulay_check(&GroupSheaf::trivial(&m), CAP).unwrap();
            assert!(r.cm() && r.agree());
        }
    }

    #[test]
    fn codimension_one_skyscraper_is_not_cm() {
        for m in [RankedPosetModel::dvr(), RankedPosetModel::dedekind(2), RankedPosetModel::chain(2)] {
            let s = m.sorted(m.with_codim(1))[0];
            let r = cohen_macaulay_check(&GroupSheaf::skyscraper(&m, s, &FinGroup::symmetric(3)), CAP).unwrap();
            assert!(!r.cond_iii, "{r:?}");
            assert!(!r.cm() && r.agree(), "{r:?}");
        }
    }

    #[test]
    fn non_normal_subgroup_at_the_closed_point_is_cm() {
        let m = RankedPosetModel::dvr();
        let s3 = FinGroup::symmetric(3);
        let t: Vec<usize> = (0..6).filter(|&a| a == 0 || (s3.element_order(a) == 2 && a == (0..6).find(|&b| s3.element_order(b) == 2).unwrap())).collect();
        let (sub, emb) = s3.subgroup(&t);
        let mut res = BTreeMap::new();
        res.insert((1, 0), emb);
        let g = GroupSheaf::new(&m, vec![s3, sub], res).unwrap();
        let r = cohen_macaulay_check(&g, CAP).unwrap();
        assert!(r.cm() && r.agree(), "{r:?}");
        assert_eq!(r.torsor_map, Some(true));
    }
}
