use alloc::vec::Vec;

use crate::algebra::ab::{present, Vector};
use crate::algebra::{Ab, Hom, Int, Mat, Sub};
use crate::Result;

/// `num / den` inside an ambient group, with representatives of the
/// canonical generators and a coordinate solver.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: Ab,
    pub ab: Ab,
    /// Columns: ambient representatives of the generators of `ab`.
    reps: Mat,
    solver: Hom,
    qproj: Mat,
    to_canon: Mat,
}

impl Subquotient {
    /// Assumes `den <= num`.
    pub fn new(ambient: &Ab, num: &Sub, den: &Sub) -> Result<Self> {
        let k = num.gens.len();
        let g = if k == 0 { Mat::zeros(ambient.dim(), 0) } else { Mat::from_cols(&num.gens, ambient.dim()) };
        let q = den.quotient(ambient);
        let solver = Hom::new(Ab::free(k), q.ab.clone(), q.proj.mul(&g))?;
        let p = present(k, &solver.kernel().gens);
        let reps = g.mul(&p.from_canon);
        Ok(Subquotient { ambient: ambient.clone(), ab: p.ab, reps, solver, qproj: q.proj, to_canon: p.to_canon })
    }

    pub fn sub(ambient: &Ab, num: &Sub) -> Result<Self> {
        Self::new(ambient, num, &Sub::trivial())
    }

    pub fn quotient(ambient: &Ab, den: &Sub) -> Result<Self> {
        Self::new(ambient, &Sub::full(ambient), den)
    }

    pub fn rep(&self, i: usize) -> Vector {
        self.ambient.reduced(self.reps.col(i))
    }

    /// Coordinates of the class of `v`, `None` when `v` is not in `num`.
    pub fn coords(&self, v: &[Int]) -> Option<Vector> {
        let c = self.solver.lift(&self.qproj.apply(v))?;
        Some(self.ab.reduced(self.to_canon.apply(&c)))
    }

    /// The map induced by an ambient matrix `t` into `tgt`.
    pub fn induced(&self, t: &Mat, tgt: &Subquotient) -> Option<Hom> {
        let mut cols = Vec::new();
        for i in 0..self.ab.dim() {
            cols.push(tgt.coords(&t.apply(&self.rep(i)))?);
        }
        let m = if cols.is_empty() { Mat::zeros(tgt.ab.dim(), 0) } else { Mat::from_cols(&cols, tgt.ab.dim()) };
        Hom::new(self.ab.clone(), tgt.ab.clone(), m).ok()
    }

    /// `ab -> ambient` through the representatives; meaningful when `den = 0`.
    pub fn embedding(&self) -> Hom {
        Hom::new(self.ab.clone(), self.ambient.clone(), self.reps.clone()).expect("representatives of a subgroup")
    }

    /// `ambient -> ab`; meaningful when `num` is everything.
    pub fn projection(&self) -> Hom {
        let cols: Vec<Vector> = self.ambient.generators().iter().map(|g| self.coords(g).expect("quotient of the whole group")).collect();
        let m = if cols.is_empty() { Mat::zeros(self.ab.dim(), 0) } else { Mat::from_cols(&cols, self.ab.dim()) };
        Hom::new(self.ambient.clone(), self.ab.clone(), m).expect("projection onto a quotient")
    }
}
