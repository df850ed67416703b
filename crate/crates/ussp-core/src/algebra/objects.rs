//! Pointed sets, morphisms of the three kinds, group actions, and the
//! kernel / image / cokernel / orbit calculus on them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ab::{Ab, FgAbGroup, Hom, Sub};
use super::group::FinGroup;
use super::matrix::Mat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedSet {
    labels: Vec<String>,
    basepoint: usize,
}

impl PointedSet {
    pub fn new(labels: Vec<String>, basepoint: usize) -> Result<Self> {
        if basepoint >= labels.len() {
            return Err(Error::invalid("basepoint index out of range"));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("pointed set labels must be distinct"));
        }
        Ok(PointedSet { labels, basepoint })
    }

    /// `{*, 1, .., n-1}` with basepoint 0.
    pub fn anonymous(n: usize) -> Self {
        let labels = (0..n.max(1)).map(|i| if i == 0 { String::from("*") } else { format!("{i}") }).collect();
        PointedSet { labels, basepoint: 0 }
    }

    pub fn point() -> Self {
        PointedSet::anonymous(1)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_point(&self) -> bool {
        self.labels.len() == 1
    }

    /// Permutation moving the basepoint to index 0 and keeping the rest in order.
    pub fn normalizing_order(&self) -> Vec<usize> {
        let mut order = vec![self.basepoint];
        order.extend((0..self.len()).filter(|&i| i != self.basepoint));
        order
    }
}

#[derive(Clone, Debug)]
pub enum Morphism {
    Pointed { src: PointedSet, tgt: PointedSet, map: Vec<usize> },
    Group { src: FinGroup, tgt: FinGroup, map: Vec<usize> },
    Abelian { src: FgAbGroup, tgt: FgAbGroup, matrix: Mat, hom: Hom },
}

impl Morphism {
    pub fn pointed(src: PointedSet, tgt: PointedSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != src.len() || map.iter().any(|&y| y >= tgt.len()) {
            return Err(Error::invalid("pointed map has the wrong shape"));
        }
        if map[src.basepoint()] != tgt.basepoint() {
            return Err(Error::invalid("map does not preserve the basepoint"));
        }
        Ok(Morphism::Pointed { src, tgt, map })
    }

    pub fn group(src: FinGroup, tgt: FinGroup, map: Vec<usize>) -> Result<Self> {
        if !src.is_hom(&tgt, &map) {
            return Err(Error::invalid("map is not a group homomorphism"));
        }
        Ok(Morphism::Group { src, tgt, map })
    }

    pub fn abelian(src: FgAbGroup, tgt: FgAbGroup, matrix: Mat) -> Result<Self> {
        let hom = src.hom_to(&tgt, &matrix)?;
        Ok(Morphism::Abelian { src, tgt, matrix, hom })
    }

    pub fn identity_pointed(s: &PointedSet) -> Self {
        Morphism::Pointed { src: s.clone(), tgt: s.clone(), map: (0..s.len()).collect() }
    }
}

/// A subobject: a subset of a finite carrier or a subgroup of an abelian group.
#[derive(Clone, Debug)]
pub enum Subobject {
    Elements(Vec<usize>),
    Subgroup(Sub),
}

impl Subobject {
    pub fn elements(&self) -> Option<&[usize]> {
        match self {
            Subobject::Elements(e) => Some(e),
            Subobject::Subgroup(_) => None,
        }
    }
}

/// The cokernel: a quotient group when one exists, otherwise a pointed set.
#[derive(Clone, Debug)]
pub enum Cokernel {
    Pointed(PointedSet),
    Group(FinGroup),
    Abelian(Ab),
}

impl Cokernel {
    pub fn is_trivial(&self) -> bool {
        match self {
            Cokernel::Pointed(s) => s.is_point(),
            Cokernel::Group(g) => g.is_trivial(),
            Cokernel::Abelian(a) => a.is_trivial(),
        }
    }

    pub fn cardinality(&self) -> Option<u128> {
        match self {
            Cokernel::Pointed(s) => Some(s.len() as u128),
            Cokernel::Group(g) => Some(g.order() as u128),
            Cokernel::Abelian(a) => a.order(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KernelImageCokernel {
    pub kernel: Subobject,
    pub image: Subobject,
    pub cokernel: Cokernel,
}

pub fn kernel_image_cokernel(f: &Morphism) -> KernelImageCokernel {
    match f {
        Morphism::Pointed { src, tgt, map } => {
            let kernel = (0..src.len()).filter(|&x| map[x] == tgt.basepoint()).collect();
            let mut image: Vec<usize> = map.clone();
            image.sort_unstable();
            image.dedup();
            // Collapse the image to the basepoint.
            let mut labels = vec![tgt.labels()[tgt.basepoint()].clone()];
            labels.extend((0..tgt.len()).filter(|y| image.binary_search(y).is_err()).map(|y| tgt.labels()[y].clone()));
            let cokernel = Cokernel::Pointed(PointedSet { labels, basepoint: 0 });
            KernelImageCokernel { kernel: Subobject::Elements(kernel), image: Subobject::Elements(image), cokernel }
        }
        Morphism::Group { src, tgt, map } => {
            let kernel = (0..src.order()).filter(|&x| map[x] == 0).collect();
            let mut image: Vec<usize> = map.clone();
            image.sort_unstable();
            image.dedup();
            let cokernel = match tgt.quotient(&image) {
                Ok((q, _)) => Cokernel::Group(q),
                Err(_) => {
                    let ids = tgt.left_coset_ids(&image);
                    let k = ids.iter().max().map_or(0, |m| m + 1);
                    Cokernel::Pointed(PointedSet::anonymous(k))
                }
            };
            KernelImageCokernel { kernel: Subobject::Elements(kernel), image: Subobject::Elements(image), cokernel }
        }
        Morphism::Abelian { hom, .. } => {
            let image = hom.image();
            let cokernel = Cokernel::Abelian(image.quotient(&hom.tgt).ab);
            KernelImageCokernel { kernel: Subobject::Subgroup(hom.kernel()), image: Subobject::Subgroup(image), cokernel }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapFlags {
    pub mono: bool,
    pub epi: bool,
    pub trivial_kernel: bool,
    /// With an action supplied: whether the domain is a single orbit, the
    /// situation in which a trivial kernel forces a monomorphism.
    pub transitive_domain: Option<bool>,
}

/// Action of a finite group on a pointed set or on an abelian group by automorphisms.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: FinGroup,
    pub carrier: ActionCarrier,
}

#[derive(Clone, Debug)]
pub enum ActionCarrier {
    /// `table[g][x]` is `g . x`.
    Set { set: PointedSet, table: Vec<Vec<usize>> },
    /// `mats[g]` acts on canonical coordinates.
    Abelian { group: Ab, mats: Vec<Mat> },
}

impl GroupAction {
    pub fn on_set(group: FinGroup, set: PointedSet, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() || table.iter().any(|r| r.len() != set.len() || r.iter().any(|&y| y >= set.len())) {
            return Err(Error::invalid("action table has the wrong shape"));
        }
        if (0..set.len()).any(|x| table[0][x] != x) {
            return Err(Error::invalid("identity does not act trivially"));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for x in 0..set.len() {
                    if table[group.mul(g, h)][x] != table[g][table[h][x]] {
                        return Err(Error::invalid("action is not compatible with multiplication"));
                    }
                }
            }
        }
        Ok(GroupAction { group, carrier: ActionCarrier::Set { set, table } })
    }

    pub fn on_abelian(group: FinGroup, ab: Ab, mats: Vec<Mat>) -> Result<Self> {
        if mats.len() != group.order() {
            return Err(Error::invalid("one matrix per group element is required"));
        }
        let homs: Vec<Hom> = mats.iter().map(|m| Hom::new(ab.clone(), ab.clone(), m.clone())).collect::<Result<_>>()?;
        if !homs[0].m.eq(&Hom::identity(ab.clone()).m) {
            return Err(Error::invalid("identity does not act trivially"));
        }
        for g in 0..group.order() {
            if !homs[g].is_injective() || !homs[g].is_surjective() {
                return Err(Error::invalid("group element does not act by an automorphism"));
            }
            for h in 0..group.order() {
                if homs[group.mul(g, h)].m != homs[g].compose(&homs[h]).m {
                    return Err(Error::invalid("action is not compatible with multiplication"));
                }
            }
        }
        Ok(GroupAction { group, carrier: ActionCarrier::Abelian { group: ab, mats } })
    }

    pub fn trivial_on(group: FinGroup, set: PointedSet) -> Self {
        let table = vec![(0..set.len()).collect::<Vec<_>>(); group.order()];
        GroupAction { group, carrier: ActionCarrier::Set { set, table } }
    }

    /// Left multiplication of a group on itself.
    pub fn regular(group: FinGroup) -> Self {
        let n = group.order();
        let table = (0..n).map(|g| (0..n).map(|x| group.mul(g, x)).collect()).collect();
        GroupAction { group, carrier: ActionCarrier::Set { set: PointedSet::anonymous(n), table } }
    }

    fn set_table(&self) -> Result<(usize, Vec<Vec<usize>>, usize)> {
        match &self.carrier {
            ActionCarrier::Set { set, table } => Ok((set.len(), table.clone(), set.basepoint())),
            ActionCarrier::Abelian { group, mats } => {
                let els = group.elements()?;
                let table = mats
                    .iter()
                    .map(|m| els.iter().map(|e| group.index_of(&group.reduced(m.apply(e)))).collect())
                    .collect();
                Ok((els.len(), table, 0))
            }
        }
    }
}

/// Orbits of an action, optionally restricted to an action-stable subset.
#[derive(Clone, Debug)]
pub struct OrbitSpace {
    pub orbits: PointedSet,
    /// Orbit index per carrier element (`usize::MAX` outside the restriction).
    pub class_of: Vec<usize>,
    pub transitive: bool,
}

pub fn orbit_space(action: &GroupAction, restrict_to: Option<&[usize]>) -> Result<OrbitSpace> {
    let (n, table, base) = action.set_table()?;
    let mut inside = vec![restrict_to.is_none(); n];
    if let Some(r) = restrict_to {
        for &x in r {
            if x >= n {
                return Err(Error::invalid("restriction element out of range"));
            }
            inside[x] = true;
        }
        for row in &table {
            for x in 0..n {
                if inside[x] && !inside[row[x]] {
                    return Err(Error::invalid("restriction is not stable under the action"));
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut next = 0;
    let mut order: Vec<usize> = vec![base];
    order.extend((0..n).filter(|&x| x != base));
    for x in order {
        if !inside[x] || class_of[x] != usize::MAX {
            continue;
        }
        for row in &table {
            class_of[row[x]] = next;
        }
        next += 1;
    }
    let base_in = inside[base];
    let mut labels = Vec::new();
    for c in 0..next {
        let rep = (0..n).find(|&x| class_of[x] == c).unwrap_or(0);
        labels.push(if base_in && c == 0 { String::from("*") } else { format!("[{rep}]") });
    }
    if labels.is_empty() {
        labels.push(String::from("*"));
    }
    let transitive = next <= 1;
    Ok(OrbitSpace { orbits: PointedSet { labels, basepoint: 0 }, class_of, transitive })
}

pub fn classify_map(f: &Morphism, action: Option<&GroupAction>) -> Result<MapFlags> {
    let kic = kernel_image_cokernel(f);
    let (mono, epi, trivial_kernel, domain) = match f {
        Morphism::Pointed { src, tgt, map } => {
            let mut seen = vec![false; tgt.len()];
            let mut injective = true;
            for &y in map {
                if seen[y] {
                    injective = false;
                }
                seen[y] = true;
            }
            let tk = kic.kernel.elements().is_some_and(|k| k.len() == 1);
            (injective, seen.iter().all(|&s| s), tk, src.len())
        }
        Morphism::Group { src, tgt, .. } => {
            let tk = kic.kernel.elements().is_some_and(|k| k.len() == 1);
            let img = kic.image.elements().map_or(0, |i| i.len());
            (tk, img == tgt.order(), tk, src.order())
        }
        Morphism::Abelian { hom, .. } => {
            let tk = hom.is_injective();
            (tk, hom.is_surjective(), tk, 0)
        }
    };
    let transitive_domain = match action {
        None => None,
        Some(a) => {
            let (n, table, _) = a.set_table()?;
            if n != domain {
                return Err(Error::invalid("action carrier differs from the map's domain"));
            }
            let map = match f {
                Morphism::Pointed { map, .. } | Morphism::Group { map, .. } => map,
                Morphism::Abelian { .. } => return Err(Error::invalid("actions on abelian domains are not supported here")),
            };
            // f must be compatible with the action: equal images stay equal.
            for row in &table {
                for x in 0..n {
                    for y in 0..n {
                        if map[x] == map[y] && map[row[x]] != map[row[y]] {
                            return Err(Error::invalid("map is not equivariant for the supplied action"));
                        }
                    }
                }
            }
            Some(orbit_space(a, None)?.transitive)
        }
    };
    Ok(MapFlags { mono, epi, trivial_kernel, transitive_domain })
}

/// Pointed objects that can be multiplied.
#[derive(Clone, Debug)]
pub enum PointedObject {
    Set(PointedSet),
    Group(FinGroup),
    Abelian(Ab),
}

impl PointedObject {
    pub fn cardinality(&self) -> Option<u128> {
        match self {
            PointedObject::Set(s) => Some(s.len() as u128),
            PointedObject::Group(g) => Some(g.order() as u128),
            PointedObject::Abelian(a) => a.order(),
        }
    }
}

/// Restricted product over a finite index set. For finitely many factors this
/// is the ordinary product; families of abelian groups give the direct sum.
pub fn restricted_product(family: &[PointedObject]) -> Result<PointedObject> {
    if family.is_empty() {
        return Ok(PointedObject::Set(PointedSet::point()));
    }
    if family.iter().all(|x| matches!(x, PointedObject::Abelian(_))) {
        let parts: Vec<Ab> = family
            .iter()
            .map(|x| match x {
                PointedObject::Abelian(a) => a.clone(),
                _ => unreachable!(),
            })
            .collect();
        return Ok(PointedObject::Abelian(Ab::direct_sum(&parts).0));
    }
    if family.iter().all(|x| !matches!(x, PointedObject::Set(_))) {
        let groups: Vec<FinGroup> = family
            .iter()
            .map(|x| match x {
                PointedObject::Group(g) => Ok(g.clone()),
                PointedObject::Abelian(a) => FinGroup::from_ab(a),
                PointedObject::Set(_) => unreachable!(),
            })
            .collect::<Result<_>>()?;
        return Ok(PointedObject::Group(FinGroup::product(&groups)));
    }
    // Pointed sets: tuples in lexicographic order, basepoint = tuple of basepoints.
    let sets: Vec<(Vec<String>, usize)> = family
        .iter()
        .map(|x| match x {
            PointedObject::Set(s) => Ok((s.labels().to_vec(), s.basepoint())),
            other => {
                let n = other.cardinality().ok_or_else(|| Error::limit("infinite factor in a pointed-set product"))?;
                Ok(((0..n).map(|i| format!("{i}")).collect(), 0))
            }
        })
        .collect::<Result<_>>()?;
    let total: usize = sets.iter().map(|s| s.0.len()).product();
    let mut labels = Vec::with_capacity(total);
    let mut base = 0;
    for idx in 0..total {
        let mut rest = idx;
        let mut parts = vec![0; sets.len()];
        for i in (0..sets.len()).rev() {
            parts[i] = rest % sets[i].0.len();
            rest /= sets[i].0.len();
        }
        if parts.iter().zip(&sets).all(|(p, s)| *p == s.1) {
            base = idx;
        }
        let names: Vec<&str> = parts.iter().zip(&sets).map(|(p, s)| s.0[*p].as_str()).collect();
        labels.push(format!("({})", names.join(",")));
    }
    Ok(PointedObject::Set(PointedSet { labels, basepoint: base }))
}

/// Center of a finite group, as a sorted element list.
pub fn center(g: &FinGroup) -> Vec<usize> {
    g.center()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pointed_cokernel_cardinality() {
        let src = PointedSet::new(labels(&["*", "a", "b"]), 0).unwrap();
        let tgt = PointedSet::new(labels(&["*", "c", "d", "e"]), 0).unwrap();
        let f = Morphism::pointed(src, tgt, vec![0, 1, 1]).unwrap();
        let k = kernel_image_cokernel(&f);
        assert_eq!(k.cokernel.cardinality(), Some(4 - 2 + 1));
    }

    #[test]
    fn trivial_kernel_is_not_mono_for_sets() {
        let src = PointedSet::new(labels(&["*", "a", "b"]), 0).unwrap();
        let tgt = PointedSet::new(labels(&["*", "c"]), 0).unwrap();
        let f = Morphism::pointed(src, tgt, vec![0, 1, 1]).unwrap();
        let flags = classify_map(&f, None).unwrap();
        assert!(flags.trivial_kernel && !flags.mono);
    }

    #[test]
    fn z2_into_z4() {
        let f = Morphism::group(FinGroup::cyclic(2), FinGroup::cyclic(4), vec![0, 2]).unwrap();
        let flags = classify_map(&f, None).unwrap();
        assert!(flags.mono && !flags.epi);
    }

    #[test]
    fn sign_map_kernel() {
        let s3 = FinGroup::symmetric(3);
        let z2 = FinGroup::cyclic(2);
        let map: Vec<usize> = (0..6).map(|g| if s3.element_order(g) == 2 { 1 } else { 0 }).collect();
        let f = Morphism::group(s3, z2, map).unwrap();
        let k = kernel_image_cokernel(&f);
        assert_eq!(k.kernel.elements().unwrap().len(), 3);
        assert!(k.cokernel.is_trivial());
    }

    #[test]
    fn swap_orbits() {
        let set = PointedSet::new(labels(&["*", "a", "b"]), 0).unwrap();
        let act = GroupAction::on_set(FinGroup::cyclic(2), set, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let o = orbit_space(&act, None).unwrap();
        assert_eq!(o.orbits.len(), 2);
        assert_eq!(o.class_of[1], o.class_of[2]);
        assert!(orbit_space(&act, Some(&[0, 1])).is_err());
    }

    #[test]
    fn regular_action_is_transitive() {
        let o = orbit_space(&GroupAction::regular(FinGroup::symmetric(3)), None).unwrap();
        assert!(o.transitive);
    }

    #[test]
    fn products() {
        let a = PointedSet::new(labels(&["*", "x"]), 0).unwrap();
        let b = PointedSet::new(labels(&["u", "*", "v"]), 1).unwrap();
        let p = restricted_product(&[PointedObject::Set(a), PointedObject::Set(b)]).unwrap();
        match p {
            PointedObject::Set(s) => {
                assert_eq!(s.len(), 6);
                assert_eq!(s.labels()[s.basepoint()], "(*,*)");
            }
            _ => panic!(),
        }
        assert_eq!(restricted_product(&[]).unwrap().cardinality(), Some(1));
        let z6 = restricted_product(&[PointedObject::Abelian(Ab::cyclic(2)), PointedObject::Abelian(Ab::cyclic(3))]).unwrap();
        assert_eq!(z6.cardinality(), Some(6));
    }
}
