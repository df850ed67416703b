use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use super::model::PointSet;
use super::sheaf::AbSheaf;
use super::subq::Subquotient;
use crate::algebra::ab::Vector;
use crate::algebra::{Ab, Hom, Mat, Sub};
use crate::{Error, Result};

/// Cochains of one degree: a copy of `F(x_n)` for each chain `x_0 < ... < x_n`.
#[derive(Clone, Debug)]
pub struct Cochains {
    pub chains: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    offsets: Vec<usize>,
    block_dim: usize,
    pub group: Ab,
    incl: Mat,
    proj: Mat,
}

impl Cochains {
    fn new(f: &AbSheaf, chains: Vec<Vec<usize>>) -> Self {
        let parts: Vec<Ab> = chains.iter().map(|c| f.stalk(*c.last().expect("nonempty chain")).clone()).collect();
        let mut offsets = Vec::new();
        let mut off = 0;
        for p in &parts {
            offsets.push(off);
            off += p.dim();
        }
        let (group, incls, projs) = Ab::direct_sum(&parts);
        let mut incl = Mat::zeros(group.dim(), 0);
        let mut proj = Mat::zeros(0, group.dim());
        for (i, p) in incls.iter().zip(&projs) {
            incl = incl.hstack(i);
            proj = proj.vstack(p);
        }
        let index = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Cochains { chains, index, offsets, block_dim: off, group, incl, proj }
    }

    /// The cochain with value `values[i]` on `chains[i]`.
    pub fn cochain(&self, values: &[Vector]) -> Vector {
        let flat: Vector = values.iter().flatten().copied().collect();
        self.group.reduced(self.incl.apply(&flat))
    }

    fn to_canonical(&self, src: &Cochains, block: &Mat) -> Mat {
        self.incl.mul(block).mul(&src.proj)
    }
}

fn place(big: &mut Mat, r0: usize, c0: usize, m: &Mat, sign: i128) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            big.set(r0 + r, c0 + c, big.get(r0 + r, c0 + c) + sign * m.get(r, c));
        }
    }
}

/// The relative cochain complex of `(U, Z)`: chains in `U` starting in `Z`,
/// with cohomology in degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct RelativeComplex {
    pub u: PointSet,
    pub z: PointSet,
    pub cochains: Vec<Cochains>,
    pub d: Vec<Hom>,
    pub h: Vec<Subquotient>,
}

impl RelativeComplex {
    pub fn new(f: &AbSheaf, u: PointSet, z: PointSet, top: usize) -> Result<Self> {
        let m = f.model();
        if !m.is_open(u) || !m.is_closed_in(z, u) {
            return Err(Error::invalid("supports must be closed in an open set"));
        }
        let all = m.chains(u, top + 2);
        let cochains: Vec<Cochains> = all.into_iter().map(|cs| Cochains::new(f, cs.into_iter().filter(|c| z.contains(c[0])).collect())).collect();
        let mut d = Vec::new();
        for i in 0..=top {
            let (src, tgt) = (&cochains[i], &cochains[i + 1]);
            let mut b = Mat::zeros(tgt.block_dim, src.block_dim);
            for (r, sigma) in tgt.chains.iter().enumerate() {
                let last = sigma[i + 1];
                for j in 0..=i + 1 {
                    let mut face = sigma.clone();
                    face.remove(j);
                    let Some(&c) = src.index.get(&face) else { continue };
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let block = if j == i + 1 { f.res(sigma[i], last).m } else { Mat::identity(f.stalk(last).dim()) };
                    place(&mut b, tgt.offsets[r], src.offsets[c], &block, sign);
                }
            }
            d.push(Hom::new(src.group.clone(), tgt.group.clone(), tgt.to_canonical(src, &b))?);
        }
        let mut h = Vec::new();
        for i in 0..=top {
            let ker = d[i].kernel();
            let im = if i == 0 { Sub::trivial() } else { d[i - 1].image() };
            h.push(Subquotient::new(&cochains[i].group, &ker, &im)?);
        }
        Ok(RelativeComplex { u, z, cochains, d, h })
    }

    /// Cochain matrix in degree `i` that keeps the value on chains shared
    /// with `tgt` and is zero elsewhere.
    pub fn transfer_matrix(&self, tgt: &RelativeComplex, i: usize) -> Mat {
        let (s, t) = (&self.cochains[i], &tgt.cochains[i]);
        let mut b = Mat::zeros(t.block_dim, s.block_dim);
        for (r, sigma) in t.chains.iter().enumerate() {
            if let Some(&c) = s.index.get(sigma) {
                let n = t.offsets.get(r + 1).copied().unwrap_or(t.block_dim) - t.offsets[r];
                place(&mut b, t.offsets[r], s.offsets[c], &Mat::identity(n), 1);
            }
        }
        t.to_canonical(s, &b)
    }

    /// The map in cohomological degree `i` induced by [`Self::transfer_matrix`].
    pub fn transfer(&self, tgt: &RelativeComplex, i: usize) -> Result<Hom> {
        let t = self.transfer_matrix(tgt, i);
        self.h[i].induced(&t, &tgt.h[i]).ok_or_else(|| Error::invalid("transfer does not preserve cocycles"))
    }
}

/// `H^i(U - T', T - T') -> H^{i+1}(U, T')`: extend by zero to `(U, T)`,
/// apply the differential and keep the chains starting in `T'`.
pub fn connecting(base: &RelativeComplex, mid: &RelativeComplex, fib: &RelativeComplex, i: usize) -> Result<Hom> {
    let t1 = base.transfer_matrix(mid, i);
    let t2 = mid.transfer_matrix(fib, i + 1);
    let m = t2.mul(&mid.d[i].m).mul(&t1);
    base.h[i].induced(&m, &fib.h[i + 1]).ok_or_else(|| Error::invalid("connecting map does not land in cocycles"))
}

/// `H^i_Z(U, F)` for `i` in `degrees`; `Z = U` when `z` is `None`.
pub fn nerve_cohomology(f: &AbSheaf, u: PointSet, z: Option<PointSet>, degrees: RangeInclusive<usize>) -> Result<Vec<Ab>> {
    let top = *degrees.end();
    let c = RelativeComplex::new(f, u, z.unwrap_or(u), top)?;
    Ok(degrees.map(|i| c.h[i].ab.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coniveau::model::RankedPosetModel;
    use alloc::vec;

    #[test]
    fn constant_sheaf_with_a_generic_point_is_acyclic() {
        for m in [RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(3)] {
            let a = Ab::from_cyclic_factors(&[2, 0]);
            let f = AbSheaf::constant(&m, &a);
            let h = nerve_cohomology(&f, m.all(), None, 0..=3).unwrap();
            assert_eq!(h[0], a);
            assert!(h[1..].iter().all(Ab::is_trivial));
        }
    }

    #[test]
    fn dvr_local_cohomology() {
        let m = RankedPosetModel::dvr();
        let s = PointSet::single(1);
        let f = AbSheaf::constant(&m, &Ab::free(1));
        assert!(nerve_cohomology(&f, m.all(), Some(s), 0..=2).unwrap().iter().all(Ab::is_trivial));
        let g = AbSheaf::skyscraper(&m, 1, &Ab::cyclic(5));
        let h = nerve_cohomology(&g, m.all(), Some(s), 0..=2).unwrap();
        assert_eq!(h, vec![Ab::cyclic(5), Ab::trivial(), Ab::trivial()]);
        let t = AbSheaf::twisted(&m, &Ab::free(1), 3);
        let h = nerve_cohomology(&t, m.all(), Some(s), 0..=1).unwrap();
        assert_eq!(h, vec![Ab::trivial(), Ab::cyclic(3)]);
    }

    #[test]
    fn two_generic_points_over_a_closed_point() {
        let m = RankedPosetModel::from_ids(&[("a", 0), ("b", 0), ("s", 1)], &[("s", "a"), ("s", "b")]).unwrap();
        let f = AbSheaf::constant(&m, &Ab::free(1));
        let h = nerve_cohomology(&f, m.all(), Some(PointSet::single(2)), 0..=2).unwrap();
        assert_eq!(h, vec![Ab::trivial(), Ab::free(1), Ab::trivial()]);
        let punctured = nerve_cohomology(&f, PointSet::from_points([0, 1]), None, 0..=1).unwrap();
        assert_eq!(punctured, vec![Ab::free(2), Ab::trivial()]);
    }
}
