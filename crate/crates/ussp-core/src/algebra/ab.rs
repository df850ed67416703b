//! Finitely generated abelian groups in Smith coordinates, their homomorphisms
//! and subgroups.
//!
//! An [`Ab`] is `Z/t_1 + ... + Z/t_k + Z^f` with `t_i | t_{i+1}` and `t_i >= 2`.
//! Elements are coordinate vectors of length `k + f`, torsion coordinates reduced
//! into `[0, t_i)`. A [`FgAbGroup`] is the user-facing presentation, which caches
//! the change of coordinates into its canonical [`Ab`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::matrix::{integer_kernel, smith_normal_form, solve, Int, Mat};
use crate::error::{Error, Result};

pub type Vector = Vec<Int>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ab {
    tors: Vec<Int>,
    free: usize,
}

impl fmt::Display for Ab {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.tors {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{t}")?;
            first = false;
        }
        if self.free > 0 {
            if !first {
                write!(f, " + ")?;
            }
            if self.free == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^{}", self.free)?;
            }
        }
        Ok(())
    }
}

impl Ab {
    pub fn new(tors: Vec<Int>, free: usize) -> Result<Self> {
        for w in tors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::invalid("torsion coefficients must divide successively"));
            }
        }
        if tors.iter().any(|&t| t < 2) {
            return Err(Error::invalid("torsion coefficients must be at least 2"));
        }
        Ok(Ab { tors, free })
    }

    pub fn trivial() -> Self {
        Ab { tors: Vec::new(), free: 0 }
    }

    pub fn cyclic(n: Int) -> Self {
        match n {
            0 => Ab { tors: Vec::new(), free: 1 },
            1 | -1 => Ab::trivial(),
            n => Ab { tors: vec![n.abs()], free: 0 },
        }
    }

    pub fn free(rank: usize) -> Self {
        Ab { tors: Vec::new(), free: rank }
    }

    /// Group with arbitrary cyclic factors `Z/n_i` (`0` meaning `Z`).
    pub fn from_cyclic_factors(factors: &[Int]) -> Self {
        let rels: Vec<Vector> = factors
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let mut v = vec![0; factors.len()];
                v[i] = n;
                v
            })
            .collect();
        present(factors.len(), &rels).ab
    }

    pub fn torsion(&self) -> &[Int] {
        &self.tors
    }

    pub fn free_rank(&self) -> usize {
        self.free
    }

    pub fn dim(&self) -> usize {
        self.tors.len() + self.free
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free == 0
    }

    pub fn order(&self) -> Option<u128> {
        if self.free > 0 {
            return None;
        }
        Some(self.tors.iter().map(|&t| t as u128).product())
    }

    pub fn zero(&self) -> Vector {
        vec![0; self.dim()]
    }

    pub fn reduce(&self, v: &mut [Int]) {
        for (x, &t) in v.iter_mut().zip(self.tors.iter()) {
            *x = x.rem_euclid(t);
        }
    }

    pub fn reduced(&self, mut v: Vector) -> Vector {
        self.reduce(&mut v);
        v
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vector {
        let v: Vector = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduced(v)
    }

    pub fn neg(&self, a: &[Int]) -> Vector {
        self.reduced(a.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, a: &[Int], b: &[Int]) -> Vector {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: Int, a: &[Int]) -> Vector {
        self.reduced(a.iter().map(|x| k * x).collect())
    }

    pub fn is_zero(&self, a: &[Int]) -> bool {
        let r = self.reduced(a.to_vec());
        r.iter().all(|&x| x == 0)
    }

    /// Standard basis vectors (the canonical generators).
    pub fn generators(&self) -> Vec<Vector> {
        (0..self.dim())
            .map(|i| {
                let mut v = self.zero();
                v[i] = 1;
                v
            })
            .collect()
    }

    /// All elements in lexicographic order; only for finite groups.
    pub fn elements(&self) -> Result<Vec<Vector>> {
        let order = self.order().ok_or_else(|| Error::limit("cannot enumerate an infinite group"))?;
        if order > 1 << 20 {
            return Err(Error::limit("group too large to enumerate"));
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = self.dim();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.tors[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Position of a reduced element in [`Ab::elements`].
    pub fn index_of(&self, v: &[Int]) -> usize {
        let r = self.reduced(v.to_vec());
        let mut idx = 0usize;
        for (x, &t) in r.iter().zip(self.tors.iter()) {
            idx = idx * t as usize + *x as usize;
        }
        idx
    }

    pub fn direct_sum(parts: &[Ab]) -> (Ab, Vec<Mat>, Vec<Mat>) {
        // Presentation as the block sum of the relation lattices.
        let total: usize = parts.iter().map(|p| p.dim()).sum();
        let mut rels = Vec::new();
        let mut off = 0;
        for p in parts {
            for (i, &t) in p.tors.iter().enumerate() {
                let mut v = vec![0; total];
                v[off + i] = t;
                rels.push(v);
            }
            off += p.dim();
        }
        let pr = present(total, &rels);
        let mut incl = Vec::new();
        let mut proj = Vec::new();
        let mut off = 0;
        for p in parts {
            let mut inc = Mat::zeros(total, p.dim());
            let mut prj = Mat::zeros(p.dim(), total);
            for i in 0..p.dim() {
                inc.set(off + i, i, 1);
                prj.set(i, off + i, 1);
            }
            incl.push(pr.to_canon.mul(&inc));
            proj.push(prj.mul(&pr.from_canon));
            off += p.dim();
        }
        (pr.ab, incl, proj)
    }
}

/// A presentation `Z^rank / <relations>` brought into canonical form.
#[derive(Clone, Debug)]
pub struct Presented {
    pub ab: Ab,
    /// `ab.dim() x rank`: presentation coordinates to canonical coordinates.
    pub to_canon: Mat,
    /// `rank x ab.dim()`: canonical generator images in presentation coordinates.
    pub from_canon: Mat,
}

pub fn present(rank: usize, relations: &[Vector]) -> Presented {
    let r = if relations.is_empty() { Mat::zeros(0, rank) } else { Mat::from_rows(relations, rank) };
    let s = smith_normal_form(&r);
    let diag = s.diagonal();
    let mut tors = Vec::new();
    let mut keep = Vec::new();
    for (i, &d) in diag.iter().enumerate() {
        if d > 1 {
            tors.push(d);
            keep.push(i);
        }
    }
    let free = rank - diag.len();
    keep.extend(diag.len()..rank);
    // Row vectors x in presentation coordinates become x V; as columns y = V^T x.
    let vt = s.v.transpose();
    let vinv = &s.v_inv;
    let mut to_canon = Mat::zeros(keep.len(), rank);
    let mut from_canon = Mat::zeros(rank, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        for c in 0..rank {
            to_canon.set(k, c, vt.get(i, c));
            from_canon.set(c, k, vinv.get(i, c));
        }
    }
    Presented { ab: Ab { tors, free }, to_canon, from_canon }
}

/// Homomorphism between canonical groups, as a `tgt.dim() x src.dim()` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub src: Ab,
    pub tgt: Ab,
    pub m: Mat,
}

impl Hom {
    pub fn new(src: Ab, tgt: Ab, m: Mat) -> Result<Self> {
        if m.rows() != tgt.dim() || m.cols() != src.dim() {
            return Err(Error::invalid("homomorphism matrix has the wrong shape"));
        }
        let h = Hom { src, tgt, m };
        for (i, &t) in h.src.tors.iter().enumerate() {
            let img = h.tgt.scale(t, &h.m.col(i));
            if !h.tgt.is_zero(&img) {
                return Err(Error::invalid("matrix does not respect the source relations"));
            }
        }
        Ok(h.normalized())
    }

    fn normalized(mut self) -> Self {
        for r in 0..self.m.rows() {
            if r < self.tgt.tors.len() {
                let t = self.tgt.tors[r];
                for c in 0..self.m.cols() {
                    let v = self.m.get(r, c).rem_euclid(t);
                    self.m.set(r, c, v);
                }
            }
        }
        self
    }

    pub fn zero(src: Ab, tgt: Ab) -> Self {
        let m = Mat::zeros(tgt.dim(), src.dim());
        Hom { src, tgt, m }
    }

    pub fn identity(a: Ab) -> Self {
        let m = Mat::identity(a.dim());
        Hom { src: a.clone(), tgt: a, m }
    }

    pub fn apply(&self, v: &[Int]) -> Vector {
        self.tgt.reduced(self.m.apply(v))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Hom) -> Hom {
        assert_eq!(first.tgt, self.src, "composition of incompatible homomorphisms");
        Hom { src: first.src.clone(), tgt: self.tgt.clone(), m: self.m.mul(&first.m) }.normalized()
    }

    pub fn negate(&self) -> Hom {
        let mut m = self.m.clone();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                m.set(r, c, -m.get(r, c));
            }
        }
        Hom { src: self.src.clone(), tgt: self.tgt.clone(), m }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn kernel(&self) -> Sub {
        kernel_gens(&self.m, &self.src, &self.tgt)
    }

    pub fn image(&self) -> Sub {
        self.image_of(&Sub::full(&self.src))
    }

    pub fn image_of(&self, s: &Sub) -> Sub {
        Sub::new(s.gens.iter().map(|g| self.apply(g)).collect())
    }

    pub fn preimage(&self, s: &Sub) -> Sub {
        let q = s.quotient(&self.tgt);
        let m = q.proj.mul(&self.m);
        kernel_gens(&m, &self.src, &q.ab)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial(&self.src)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().le(&Sub::full(&self.tgt), &self.tgt)
    }

    /// Some `x` with `self(x) = v`.
    pub fn lift(&self, v: &[Int]) -> Option<Vector> {
        let t = self.tgt.tors.len();
        let mut big = Mat::zeros(self.tgt.dim(), self.src.dim() + t);
        for r in 0..self.tgt.dim() {
            for c in 0..self.src.dim() {
                big.set(r, c, self.m.get(r, c));
            }
        }
        for (i, &ti) in self.tgt.tors.iter().enumerate() {
            big.set(i, self.src.dim() + i, ti);
        }
        let x = solve(&big, v)?;
        Some(self.src.reduced(x[..self.src.dim()].to_vec()))
    }

    pub fn inverse(&self) -> Option<Hom> {
        if !self.is_injective() {
            return None;
        }
        let mut cols = Vec::new();
        for g in self.tgt.generators() {
            cols.push(self.lift(&g)?);
        }
        let m = if cols.is_empty() { Mat::zeros(self.src.dim(), 0) } else { Mat::from_cols(&cols, self.src.dim()) };
        Hom::new(self.tgt.clone(), self.src.clone(), m).ok()
    }
}

fn kernel_gens(m: &Mat, src: &Ab, tgt: &Ab) -> Sub {
    // x with m x in the torsion lattice of tgt: kernel of [m | T].
    let t = tgt.tors.len();
    let mut big = Mat::zeros(tgt.dim(), src.dim() + t);
    for r in 0..tgt.dim() {
        for c in 0..src.dim() {
            big.set(r, c, m.get(r, c));
        }
    }
    for (i, &ti) in tgt.tors.iter().enumerate() {
        big.set(i, src.dim() + i, ti);
    }
    let gens = integer_kernel(&big)
        .into_iter()
        .map(|v| src.reduced(v[..src.dim()].to_vec()))
        .collect();
    Sub::new(gens)
}

/// A subgroup, by generators. Equality is mutual inclusion ([`Sub::same`]).
#[derive(Clone, Debug, Default)]
pub struct Sub {
    pub gens: Vec<Vector>,
}

/// Quotient of a canonical group by a subgroup, with its projection matrix.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ab: Ab,
    pub proj: Mat,
    pub lift: Mat,
}

impl Quotient {
    pub fn project(&self, v: &[Int]) -> Vector {
        self.ab.reduced(self.proj.apply(v))
    }

    pub fn lift(&self, v: &[Int]) -> Vector {
        self.lift.apply(v)
    }
}

impl Sub {
    pub fn new(gens: Vec<Vector>) -> Self {
        let gens = gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        Sub { gens }
    }

    pub fn trivial() -> Self {
        Sub { gens: Vec::new() }
    }

    pub fn full(a: &Ab) -> Self {
        Sub::new(a.generators())
    }

    pub fn quotient(&self, a: &Ab) -> Quotient {
        let mut rels = Vec::new();
        for (i, &t) in a.tors.iter().enumerate() {
            let mut v = a.zero();
            v[i] = t;
            rels.push(v);
        }
        rels.extend(self.gens.iter().cloned());
        let p = present(a.dim(), &rels);
        Quotient { ab: p.ab, proj: p.to_canon, lift: p.from_canon }
    }

    pub fn contains(&self, a: &Ab, v: &[Int]) -> bool {
        let q = self.quotient(a);
        q.ab.is_zero(&q.proj.apply(v))
    }

    /// `other` is contained in `self`.
    pub fn le(&self, other: &Sub, a: &Ab) -> bool {
        let q = self.quotient(a);
        other.gens.iter().all(|g| q.ab.is_zero(&q.proj.apply(g)))
    }

    pub fn same(&self, other: &Sub, a: &Ab) -> bool {
        self.le(other, a) && other.le(self, a)
    }

    pub fn is_trivial(&self, a: &Ab) -> bool {
        self.gens.iter().all(|g| a.is_zero(g))
    }

    pub fn join(&self, other: &Sub) -> Sub {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Sub::new(gens)
    }

    pub fn intersect(&self, other: &Sub, a: &Ab) -> Sub {
        let k = self.gens.len();
        if k == 0 {
            return Sub::trivial();
        }
        let g = Mat::from_cols(&self.gens, a.dim());
        let q = other.quotient(a);
        let m = q.proj.mul(&g);
        let coeffs = kernel_gens(&m, &Ab::free(k), &q.ab);
        Sub::new(coeffs.gens.iter().map(|c| a.reduced(g.apply(c))).collect())
    }

    /// The abstract isomorphism type of this subgroup.
    pub fn structure(&self, a: &Ab) -> Ab {
        self.subquotient(&Sub::trivial(), a)
    }

    /// The isomorphism type of `self / below` (assumes `below <= self`).
    pub fn subquotient(&self, below: &Sub, a: &Ab) -> Ab {
        let k = self.gens.len();
        if k == 0 {
            return Ab::trivial();
        }
        let g = Mat::from_cols(&self.gens, a.dim());
        let q = below.quotient(a);
        let m = q.proj.mul(&g);
        let rel = kernel_gens(&m, &Ab::free(k), &q.ab);
        present(k, &rel.gens).ab
    }

    pub fn order(&self, a: &Ab) -> Option<u128> {
        self.structure(a).order()
    }

    /// Index of the subgroup, `None` if infinite.
    pub fn index(&self, a: &Ab) -> Option<u128> {
        self.quotient(a).ab.order()
    }
}

/// A finitely generated abelian group given by generators and relations.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    rank: usize,
    relations: Vec<Vector>,
    canon: Presented,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.relations == other.relations
    }
}

impl FgAbGroup {
    pub fn new(rank: usize, relations: Vec<Vector>) -> Result<Self> {
        if relations.iter().any(|r| r.len() != rank) {
            return Err(Error::invalid("relation length differs from the rank"));
        }
        let canon = present(rank, &relations);
        Ok(FgAbGroup { rank, relations, canon })
    }

    pub fn from_ab(ab: &Ab) -> Self {
        let rels = ab
            .tors
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut v = vec![0; ab.dim()];
                v[i] = t;
                v
            })
            .collect();
        FgAbGroup::new(ab.dim(), rels).expect("canonical presentation is well formed")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    pub fn canonical(&self) -> &Ab {
        &self.canon.ab
    }

    /// Nontrivial invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> &[Int] {
        self.canon.ab.torsion()
    }

    pub fn free_rank(&self) -> usize {
        self.canon.ab.free_rank()
    }

    pub fn order(&self) -> Option<u128> {
        self.canon.ab.order()
    }

    pub fn to_canonical(&self, x: &[Int]) -> Vector {
        self.canon.ab.reduced(self.canon.to_canon.apply(x))
    }

    pub fn from_canonical(&self, y: &[Int]) -> Vector {
        self.canon.from_canon.apply(y)
    }

    /// Homomorphism given by generator images in presentation coordinates
    /// (`matrix` is `target.rank() x self.rank()`).
    pub fn hom_to(&self, target: &FgAbGroup, matrix: &Mat) -> Result<Hom> {
        if matrix.rows() != target.rank || matrix.cols() != self.rank {
            return Err(Error::invalid("homomorphism matrix has the wrong shape"));
        }
        for rel in &self.relations {
            if !target.canonical().is_zero(&target.to_canonical(&matrix.apply(rel))) {
                return Err(Error::invalid("matrix does not respect the source relations"));
            }
        }
        let m = target.canon.to_canon.mul(matrix).mul(&self.canon.from_canon);
        Hom::new(self.canonical().clone(), target.canonical().clone(), m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_an_automorphism() {
        let a = Ab::from_cyclic_factors(&[2, 4]);
        let m = Mat::from_rows(&[vec![1, 2], vec![0, 3]], 2);
        let f = Hom::new(a.clone(), a.clone(), m).unwrap();
        let g = f.inverse().unwrap();
        assert_eq!(g.compose(&f), Hom::identity(a.clone()));
        assert_eq!(f.compose(&g), Hom::identity(a));
        let z = Ab::cyclic(0);
        let two = Hom::new(z.clone(), z, Mat::from_rows(&[vec![2]], 1)).unwrap();
        assert!(two.inverse().is_none());
        assert_eq!(two.lift(&[4]), Some(vec![2]));
        assert_eq!(two.lift(&[3]), None);
    }

    #[test]
    fn times_two_on_z() {
        let z = Ab::cyclic(0);
        let f = Hom::new(z.clone(), z.clone(), Mat::from_rows(&[vec![2]], 1)).unwrap();
        assert!(f.kernel().is_trivial(&z));
        let img = f.image();
        assert_eq!(img.index(&z), Some(2));
        assert_eq!(img.quotient(&z).ab, Ab::cyclic(2));
    }

    #[test]
    fn reduction_z4_to_z2() {
        let z4 = Ab::cyclic(4);
        let z2 = Ab::cyclic(2);
        let f = Hom::new(z4.clone(), z2.clone(), Mat::from_rows(&[vec![1]], 1)).unwrap();
        assert_eq!(f.kernel().order(&z4), Some(2));
        assert!(f.is_surjective());
        assert!(f.image().quotient(&z2).ab.is_trivial());
        let double = Hom::new(Ab::free(1), Ab::free(1), Mat::from_rows(&[vec![2]], 1)).unwrap();
        assert!(double.is_injective() && !double.is_surjective());
    }

    #[test]
    fn invalid_hom_rejected() {
        let z2 = Ab::cyclic(2);
        let z3 = Ab::cyclic(3);
        assert!(Hom::new(z2, z3, Mat::from_rows(&[vec![1]], 1)).is_err());
    }

    #[test]
    fn normal_form_is_presentation_independent() {
        let a = FgAbGroup::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        let b = FgAbGroup::new(1, vec![vec![6]]).unwrap();
        let c = FgAbGroup::new(3, vec![vec![6, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]).unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(b.canonical(), c.canonical());
        assert_eq!(a.invariant_factors(), &[6]);
    }

    #[test]
    fn coordinates_round_trip() {
        let g = FgAbGroup::new(3, vec![vec![2, 4, 0], vec![0, 6, 0]]).unwrap();
        assert_eq!(g.free_rank(), 1);
        for x in [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![3, -2, 5]] {
            let y = g.to_canonical(&x);
            let back = g.from_canonical(&y);
            let diff: Vec<Int> = x.iter().zip(&back).map(|(a, b)| a - b).collect();
            assert!(g.canonical().is_zero(&g.to_canonical(&diff)));
        }
    }

    #[test]
    fn intersections_and_subquotients() {
        let a = Ab::from_cyclic_factors(&[12]);
        let s2 = Sub::new(vec![a.reduced(vec![2])]);
        let s3 = Sub::new(vec![a.reduced(vec![3])]);
        let i = s2.intersect(&s3, &a);
        assert_eq!(i.order(&a), Some(2));
        assert_eq!(s2.subquotient(&Sub::new(vec![vec![4]]), &a), Ab::cyclic(2));
    }

    #[test]
    fn enumeration_matches_order() {
        let a = Ab::from_cyclic_factors(&[2, 4]);
        let els = a.elements().unwrap();
        assert_eq!(els.len(), 8);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(a.index_of(e), i);
        }
    }
}
