use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::model::{PointSet, RankedPosetModel};
use super::sheaf::{AbSheaf, AbSheafMap};
use super::subq::Subquotient;
use crate::algebra::ab::Vector;
use crate::algebra::{Ab, Hom, Mat, Sub};
use crate::{Error, Result};

/// A sheaf whose stalks are subquotients of the stalks of an ambient family.
#[derive(Clone, Debug)]
pub struct SheafSubquotient {
    pub sheaf: AbSheaf,
    pub parts: Vec<Subquotient>,
}

impl SheafSubquotient {
    /// The map `self -> other` induced stalkwise by ambient maps.
    pub fn induced(&self, other: &SheafSubquotient, ambient: &[Mat]) -> Result<AbSheafMap> {
        let maps = self
            .parts
            .iter()
            .zip(&other.parts)
            .zip(ambient)
            .enumerate()
            .map(|(x, ((a, b), t))| a.induced(t, b).ok_or_else(|| Error::invalid(format!("map is not defined on the stalk at {}", self.sheaf.model().id(x)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(AbSheafMap { maps })
    }

    /// The inclusion into the ambient sheaf; meaningful for subsheaves.
    pub fn embedding(&self) -> AbSheafMap {
        AbSheafMap { maps: self.parts.iter().map(Subquotient::embedding).collect() }
    }

    /// The projection from the ambient sheaf; meaningful for quotients.
    pub fn projection(&self) -> AbSheafMap {
        AbSheafMap { maps: self.parts.iter().map(Subquotient::projection).collect() }
    }
}

fn assemble(model: &RankedPosetModel, parts: Vec<Subquotient>, ambient_res: impl Fn(usize, usize) -> Mat) -> Result<SheafSubquotient> {
    let stalks: Vec<Ab> = parts.iter().map(|p| p.ab.clone()).collect();
    let mut res = BTreeMap::new();
    for (x, y) in model.covers() {
        let h = parts[x]
            .induced(&ambient_res(x, y), &parts[y])
            .ok_or_else(|| Error::invalid(format!("restriction {} -> {} does not preserve the subquotient", model.id(x), model.id(y))))?;
        res.insert((x, y), h);
    }
    Ok(SheafSubquotient { sheaf: AbSheaf::new(model, stalks, res)?, parts })
}

/// Stalkwise `num_x / den_x` inside `g`.
pub fn subquotient_sheaf(g: &AbSheaf, num: &[Sub], den: &[Sub]) -> Result<SheafSubquotient> {
    let parts = (0..g.model().len()).map(|x| Subquotient::new(g.stalk(x), &num[x], &den[x])).collect::<Result<Vec<_>>>()?;
    assemble(g.model(), parts, |x, y| g.res(x, y).m)
}

pub fn kernel_sheaf(f: &AbSheafMap, src: &AbSheaf) -> Result<SheafSubquotient> {
    let num: Vec<Sub> = f.maps.iter().map(Hom::kernel).collect();
    subquotient_sheaf(src, &num, &alloc::vec![Sub::trivial(); num.len()])
}

pub fn image_sheaf(f: &AbSheafMap, tgt: &AbSheaf) -> Result<SheafSubquotient> {
    let num: Vec<Sub> = f.maps.iter().map(Hom::image).collect();
    subquotient_sheaf(tgt, &num, &alloc::vec![Sub::trivial(); num.len()])
}

pub fn cokernel_sheaf(f: &AbSheafMap, tgt: &AbSheaf) -> Result<SheafSubquotient> {
    let den: Vec<Sub> = f.maps.iter().map(Hom::image).collect();
    let num: Vec<Sub> = (0..den.len()).map(|x| Sub::full(tgt.stalk(x))).collect();
    subquotient_sheaf(tgt, &num, &den)
}

/// `ker g / im f` for `f: A -> B`, `g: B -> C`.
pub fn homology_sheaf(f: &AbSheafMap, g: &AbSheafMap, mid: &AbSheaf) -> Result<SheafSubquotient> {
    let num: Vec<Sub> = g.maps.iter().map(Hom::kernel).collect();
    let den: Vec<Sub> = f.maps.iter().map(Hom::image).collect();
    subquotient_sheaf(mid, &num, &den)
}

/// Sections of `g` over `v` vanishing off `w`, inside `⊕_{x ∈ v ∩ w} g_x`.
#[derive(Clone, Debug)]
struct Local {
    pts: Vec<usize>,
    incls: Vec<Mat>,
    projs: Vec<Mat>,
    sq: Subquotient,
}

fn local_sections(g: &AbSheaf, v: PointSet, w: PointSet) -> Result<Local> {
    let m = g.model();
    let pts = m.sorted(v.inter(w));
    let (sum, incls, projs) = Ab::direct_sum(&pts.iter().map(|&x| g.stalk(x).clone()).collect::<Vec<_>>());
    let block = |x: usize| pts.iter().position(|&p| p == x);
    let covers: Vec<(usize, usize)> = m.covers().into_iter().filter(|&(a, b)| v.contains(a) && v.contains(b) && (w.contains(a) || w.contains(b))).collect();
    let (tgt, tincls, _) = Ab::direct_sum(&covers.iter().map(|&(_, b)| g.stalk(b).clone()).collect::<Vec<_>>());
    let mut delta = Mat::zeros(tgt.dim(), sum.dim());
    for (k, &(a, b)) in covers.iter().enumerate() {
        if let Some(i) = block(a) {
            delta = super::sheaf::add(&delta, &tincls[k].mul(&g.res(a, b).m).mul(&projs[i]));
        }
        if let Some(j) = block(b) {
            let neg = Hom::identity(g.stalk(b).clone()).negate();
            delta = super::sheaf::add(&delta, &tincls[k].mul(&neg.m).mul(&projs[j]));
        }
    }
    let ker = Hom::new(sum.clone(), tgt, delta)?.kernel();
    let sq = Subquotient::sub(&sum, &ker)?;
    Ok(Local { pts, incls, projs, sq })
}

impl Local {
    /// Keep the coordinates at points also present in `other`.
    fn restrict_to(&self, other: &Local) -> Mat {
        let mut m = Mat::zeros(other.sq.ambient.dim(), self.sq.ambient.dim());
        for (j, x) in other.pts.iter().enumerate() {
            if let Some(i) = self.pts.iter().position(|p| p == x) {
                m = super::sheaf::add(&m, &other.incls[j].mul(&self.projs[i]));
            }
        }
        m
    }
}

/// `H^0_{Z/Z'}(G)`: stalk at `y` the sections of `G` over `U_y - Z'` with
/// support in `Z`. With `Z' = ∅` this is `Γ_Z(G)`.
#[derive(Clone, Debug)]
pub struct LocalSections {
    pub z: PointSet,
    pub z_small: PointSet,
    pub sheaf: AbSheaf,
    locals: Vec<Local>,
}

impl LocalSections {
    /// `G -> H^0_{Z/Z'}(G)`, `s ↦ (s|_v)_v`; needs `G` supported in `Z`.
    pub fn unit(&self, g: &AbSheaf) -> Result<AbSheafMap> {
        let m = g.model();
        let mut maps = Vec::new();
        for (y, loc) in self.locals.iter().enumerate() {
            let mut cols: Vec<Vector> = Vec::new();
            for s in g.stalk(y).generators() {
                let mut amb = alloc::vec![0; loc.sq.ambient.dim()];
                for (i, &v) in loc.pts.iter().enumerate() {
                    let part = loc.incls[i].apply(&g.res(y, v).apply(&s));
                    for (a, b) in amb.iter_mut().zip(part) {
                        *a += b;
                    }
                }
                let c = loc.sq.coords(&amb).ok_or_else(|| Error::invalid(format!("the sheaf is not supported in Z at {}", m.id(y))))?;
                cols.push(c);
            }
            let mat = if cols.is_empty() { Mat::zeros(loc.sq.ab.dim(), 0) } else { Mat::from_cols(&cols, loc.sq.ab.dim()) };
            maps.push(Hom::new(g.stalk(y).clone(), loc.sq.ab.clone(), mat)?);
        }
        let u = AbSheafMap { maps };
        if !u.is_natural(g, &self.sheaf) {
            return Err(Error::invalid("the sheaf is not supported in Z"));
        }
        Ok(u)
    }
}

/// `Γ_{Z/Z'}(G)` in its sheaf form `H^0_{Z/Z'}(G)`; `z_small` defaults to `∅`.
pub fn sections_with_support(g: &AbSheaf, z: PointSet, z_small: Option<PointSet>) -> Result<LocalSections> {
    let m = g.model();
    let zs = z_small.unwrap_or(PointSet::EMPTY);
    if !m.is_closed_in(z, m.all()) || !m.is_closed_in(zs, m.all()) || !zs.is_subset(z) {
        return Err(Error::invalid("supports must be nested closed sets"));
    }
    let locals = (0..m.len()).map(|y| local_sections(g, m.star(y).minus(zs), z)).collect::<Result<Vec<_>>>()?;
    let parts: Vec<Subquotient> = locals.iter().map(|l| l.sq.clone()).collect();
    let s = assemble(m, parts, |x, y| locals[x].restrict_to(&locals[y]))?;
    Ok(LocalSections { z, z_small: zs, sheaf: s.sheaf, locals })
}

/// Stalks vanish off `z`.
pub fn supported_in(g: &AbSheaf, z: PointSet) -> bool {
    g.support().is_subset(z)
}

/// `g_y -> ⊕_{x ∈ X^{(p)}, x >= y} g_x`, by restrictions.
pub fn decomposition(g: &AbSheaf, p: usize, y: usize) -> Hom {
    let m = g.model();
    let xs = m.sorted(m.star(y).inter(m.with_codim(p)));
    let parts: Vec<Ab> = xs.iter().map(|&x| g.stalk(x).clone()).collect();
    let (sum, incls, _) = Ab::direct_sum(&parts);
    let mut mat = Mat::zeros(sum.dim(), g.stalk(y).dim());
    for (i, &x) in xs.iter().enumerate() {
        mat = super::sheaf::add(&mat, &incls[i].mul(&g.res(y, x).m));
    }
    Hom::new(g.stalk(y).clone(), sum, mat).expect("restrictions into a direct sum")
}

/// `g ≅ ∏_{x ∈ X^{(p)}} x_* g_x`, witnessed by the isomorphisms
/// [`decomposition`] at every point.
pub fn skeleton_decomposition(g: &AbSheaf, p: usize) -> Option<Vec<Hom>> {
    (0..g.model().len())
        .map(|y| {
            let d = decomposition(g, p, y);
            (d.is_injective() && d.is_surjective()).then_some(d)
        })
        .collect()
}

/// `g` lies on the `X^{(p)}`-skeleton: supported in `Z^p` and the unit to
/// `H^0_{Z^p/Z^{p+1}}(g)` is an isomorphism.
pub fn on_skeleton(g: &AbSheaf, p: usize) -> Result<bool> {
    let m = g.model();
    if !supported_in(g, m.at_least(p)) {
        return Ok(false);
    }
    let h = sections_with_support(g, m.at_least(p), Some(m.at_least(p + 1)))?;
    Ok(h.unit(g)?.is_iso())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn full_support_gives_the_sheaf_back() {
        for m in [RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(2)] {
            let f = AbSheaf::twisted(&m, &Ab::from_cyclic_factors(&[4, 0]), 2);
            let g = sections_with_support(&f, m.all(), None).unwrap();
            assert_eq!(g.sheaf.stalks(), f.stalks());
            assert!(g.unit(&f).unwrap().is_iso());
        }
    }

    #[test]
    fn constant_sheaf_has_no_sections_supported_at_the_closed_point() {
        let m = RankedPosetModel::dvr();
        let f = AbSheaf::constant(&m, &Ab::free(1));
        let g = sections_with_support(&f, PointSet::single(1), None).unwrap();
        assert!(g.sheaf.stalks().iter().all(Ab::is_trivial));
        let t = AbSheaf::twisted(&m, &Ab::cyclic(4), 2);
        let g = sections_with_support(&t, PointSet::single(1), None).unwrap();
        assert_eq!(g.sheaf.stalk(1), &Ab::cyclic(2));
    }

    #[test]
    fn generic_sections_split_over_generic_points() {
        let m = RankedPosetModel::dedekind(2);
        let f = AbSheaf::constant(&m, &Ab::cyclic(3));
        let g = sections_with_support(&f, m.all(), Some(m.at_least(1))).unwrap();
        assert!(g.sheaf.stalks().iter().all(|a| *a == Ab::cyclic(3)));
        assert!(g.unit(&f).unwrap().is_iso());
        let two = RankedPosetModel::from_ids(&[("a", 0), ("b", 0), ("s", 1)], &[("s", "a"), ("s", "b")]).unwrap();
        let f = AbSheaf::constant(&two, &Ab::free(1));
        let g = sections_with_support(&f, two.all(), Some(PointSet::single(2))).unwrap();
        assert_eq!(g.sheaf.stalk(2), &Ab::free(2));
        let u = g.unit(&f).unwrap();
        assert!(u.maps[2].is_injective() && !u.maps[2].is_surjective());
    }

    #[test]
    fn skyscrapers_lie_on_their_skeleton() {
        let m = RankedPosetModel::dvr();
        let sky = AbSheaf::skyscraper(&m, 1, &Ab::cyclic(5));
        assert!(on_skeleton(&sky, 1).unwrap());
        assert!(skeleton_decomposition(&sky, 1).is_some());
        assert!(!on_skeleton(&sky, 0).unwrap());
        let c = AbSheaf::twisted(&m, &Ab::free(1), 2);
        assert!(!on_skeleton(&c, 0).unwrap());
        assert!(skeleton_decomposition(&c, 0).is_none());
        let gen = AbSheaf::skyscraper(&m, 0, &Ab::free(1));
        assert!(on_skeleton(&gen, 0).unwrap());
        assert!(skeleton_decomposition(&gen, 0).is_some());
    }

    #[test]
    fn unit_needs_the_support() {
        let m = RankedPosetModel::dvr();
        let c = AbSheaf::constant(&m, &Ab::free(1));
        let g = sections_with_support(&c, PointSet::single(1), None).unwrap();
        assert!(g.unit(&c).is_err());
    }

    #[test]
    fn kernels_and_cokernels() {
        let m = RankedPosetModel::dvr();
        let a = AbSheaf::constant(&m, &Ab::free(1));
        let b = AbSheaf::skyscraper(&m, 0, &Ab::free(1));
        let g = sections_with_support(&a, m.all(), Some(PointSet::single(1))).unwrap();
        assert_eq!(g.sheaf.stalks(), b.stalks());
        let u = g.unit(&a).unwrap();
        let k = kernel_sheaf(&u, &a).unwrap();
        assert_eq!(k.sheaf.stalks(), &[Ab::trivial(), Ab::trivial()]);
        let c = cokernel_sheaf(&u, &g.sheaf).unwrap();
        assert!(c.sheaf.stalks().iter().all(Ab::is_trivial));
        let zero = AbSheafMap { maps: vec![Hom::zero(Ab::free(1), Ab::free(1)), Hom::zero(Ab::free(1), Ab::free(1))] };
        let c = cokernel_sheaf(&zero, &a).unwrap();
        assert!(c.projection().is_iso());
    }
}
