//! Finite groups by multiplication table.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::ab::Ab;
use crate::error::{Error, Result};

/// A finite group on `0..order`, identity `0`, with a validated Cayley table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

impl FinGroup {
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("group order must be positive"));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::invalid("multiplication table is not square"));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::invalid("multiplication table entry out of range"));
            }
            table.extend_from_slice(row);
        }
        for a in 0..n {
            if table[a] != a || table[a * n] != a {
                return Err(Error::invalid("element 0 is not the identity"));
            }
        }
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                let x = table[a * n + b];
                if seen[x] {
                    return Err(Error::invalid("table row is not a permutation"));
                }
                seen[x] = true;
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b;
                }
            }
        }
        let g = FinGroup { n, table, inv };
        for a in 0..n {
            if g.mul(g.inv[a], a) != 0 {
                return Err(Error::invalid("left and right inverses differ"));
            }
        }
        // Light's test: associativity on a generating set suffices.
        for s in g.generating_set() {
            for x in 0..n {
                for y in 0..n {
                    if g.mul(g.mul(x, s), y) != g.mul(x, g.mul(s, y)) {
                        return Err(Error::invalid("multiplication is not associative"));
                    }
                }
            }
        }
        Ok(g)
    }

    fn from_table_unchecked(n: usize, table: Vec<usize>) -> Self {
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b;
                }
            }
        }
        FinGroup { n, table, inv }
    }

    pub fn trivial() -> Self {
        FinGroup { n: 1, table: vec![0], inv: vec![0] }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| self.table[a * self.n..(a + 1) * self.n].to_vec()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&x| inside[x]).collect()
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.n];
        inside[0] = true;
        for a in 1..self.n {
            if !inside[a] {
                gens.push(a);
                for x in self.generate(&gens) {
                    inside[x] = true;
                }
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &x in set {
            if x >= self.n {
                return false;
            }
            inside[x] = true;
        }
        inside[0] && set.iter().all(|&a| set.iter().all(|&b| inside[self.mul(a, self.inv(b))]))
    }

    /// Returns a pair `(h, g)` with `g h g^-1` outside `sub`, if any.
    pub fn normality_witness(&self, sub: &[usize]) -> Option<(usize, usize)> {
        let mut inside = vec![false; self.n];
        for &x in sub {
            inside[x] = true;
        }
        for &h in sub {
            for g in 0..self.n {
                if !inside[self.mul(self.mul(g, h), self.inv(g))] {
                    return Some((h, g));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        self.normality_witness(sub).is_none()
    }

    pub fn is_central(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| (0..self.n).all(|g| self.mul(a, g) == self.mul(g, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| (0..self.n).all(|g| self.mul(a, g) == self.mul(g, a))).collect()
    }

    /// Checks that `map` (indices into `tgt`) is a homomorphism.
    pub fn is_hom(&self, tgt: &FinGroup, map: &[usize]) -> bool {
        map.len() == self.n
            && map.iter().all(|&x| x < tgt.n)
            && (0..self.n).all(|a| (0..self.n).all(|b| map[self.mul(a, b)] == tgt.mul(map[a], map[b])))
    }

    /// Extends generator images to a homomorphism, if one exists.
    pub fn extend_hom(&self, tgt: &FinGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.n];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let v = tgt.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = v;
                    queue.push_back(y);
                } else if map[y] != v {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) || !self.is_hom(tgt, &map) {
            return None;
        }
        Some(map)
    }

    /// Closure of a set of permutations of `0..degree`; identity first, then
    /// elements in breadth-first discovery order.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut elems = vec![id.clone()];
        index.insert(id, 0);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                // (x * g)(k) = x(g(k))
                let y: Vec<usize> = (0..degree).map(|k| elems[i][g[k]]).collect();
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = (0..degree).map(|k| elems[a][elems[b][k]]).collect();
                table[a * n + b] = index[&p];
            }
        }
        FinGroup::from_table_unchecked(n, table)
    }

    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        FinGroup::from_table_unchecked(n, table)
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Self {
        let r: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
        let s: Vec<usize> = (0..n).map(|k| (n - k) % n).collect();
        FinGroup::from_permutations(n, &[r, s])
    }

    pub fn symmetric(n: usize) -> Self {
        if n < 2 {
            return FinGroup::trivial();
        }
        let cycle: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        FinGroup::from_permutations(n, &[cycle, swap])
    }

    pub fn alternating(n: usize) -> Self {
        if n < 3 {
            return FinGroup::trivial();
        }
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        FinGroup::from_permutations(n, &gens)
    }

    pub fn quaternion() -> Self {
        // Regular representation of Q8 on {±1, ±i, ±j, ±k} = 0..8.
        // Encoding: 0=1 1=-1 2=i 3=-i 4=j 5=-j 6=k 7=-k.
        let unit = |x: usize| x / 2;
        let sign = |x: usize| x % 2;
        let mul_units = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
        let sign_units = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 1, 1, 0], [0, 0, 1, 1]];
        let mul = |a: usize, b: usize| {
            let u = mul_units[unit(a)][unit(b)];
            let s = sign(a) ^ sign(b) ^ sign_units[unit(a)][unit(b)];
            2 * u + s
        };
        let li: Vec<usize> = (0..8).map(|x| mul(2, x)).collect();
        let lj: Vec<usize> = (0..8).map(|x| mul(4, x)).collect();
        FinGroup::from_permutations(8, &[li, lj])
    }

    /// Finite abelian group as a table group, elements in [`Ab::elements`] order.
    pub fn from_ab(ab: &Ab) -> Result<Self> {
        let els = ab.elements()?;
        let n = els.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = ab.index_of(&ab.add(&els[a], &els[b]));
            }
        }
        Ok(FinGroup::from_table_unchecked(n, table))
    }

    /// Direct product; element `(a_0, .., a_k)` is encoded mixed-radix with the
    /// last factor varying fastest.
    pub fn product(factors: &[FinGroup]) -> Self {
        let n: usize = factors.iter().map(|g| g.n).product();
        let mut table = vec![0; n * n];
        for a in 0..n {
            let ca = product_coords(factors, a);
            for b in 0..n {
                let cb = product_coords(factors, b);
                let c: Vec<usize> = factors.iter().enumerate().map(|(i, g)| g.mul(ca[i], cb[i])).collect();
                table[a * n + b] = product_index(factors, &c);
            }
        }
        FinGroup::from_table_unchecked(n, table)
    }

    /// The subgroup of `factors[0] x ... x factors[k]` listed by coordinate
    /// tuples, multiplied componentwise. The first tuple must be the identity
    /// and the list must be closed under multiplication.
    pub fn from_tuples(factors: &[FinGroup], tuples: &[Vec<usize>]) -> Result<Self> {
        let n = tuples.len();
        if n == 0 || tuples[0].iter().any(|&x| x != 0) {
            return Err(Error::invalid("the first tuple must be the identity"));
        }
        let index: BTreeMap<&[usize], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        if index.len() != n {
            return Err(Error::invalid("repeated tuple"));
        }
        let mut table = vec![0; n * n];
        let mut c = vec![0; factors.len()];
        for a in 0..n {
            for b in 0..n {
                for (i, g) in factors.iter().enumerate() {
                    c[i] = g.mul(tuples[a][i], tuples[b][i]);
                }
                table[a * n + b] = *index.get(c.as_slice()).ok_or_else(|| Error::invalid("tuples are not closed under multiplication"))?;
            }
        }
        Ok(FinGroup::from_table_unchecked(n, table))
    }

    /// Subgroup as a group in its own right, with the sorted embedding.
    pub fn subgroup(&self, sub: &[usize]) -> (FinGroup, Vec<usize>) {
        let mut elems: Vec<usize> = sub.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let k = elems.len();
        let mut table = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = pos[self.mul(elems[i], elems[j])];
            }
        }
        (FinGroup::from_table_unchecked(k, table), elems)
    }

    /// Class id of each element in `G / sub` for left cosets `g sub`,
    /// numbered by first appearance so that the identity coset is 0.
    pub fn left_coset_ids(&self, sub: &[usize]) -> Vec<usize> {
        let mut ids = vec![usize::MAX; self.n];
        let mut next = 0;
        for g in 0..self.n {
            if ids[g] == usize::MAX {
                for &h in sub {
                    ids[self.mul(g, h)] = next;
                }
                next += 1;
            }
        }
        ids
    }

    /// Quotient by a normal subgroup with the projection.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FinGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(Error::invalid("quotient by a non-normal subgroup"));
        }
        let ids = self.left_coset_ids(normal);
        let k = ids.iter().max().map_or(0, |m| m + 1);
        let mut reps = vec![0; k];
        for g in (0..self.n).rev() {
            reps[ids[g]] = g;
        }
        let mut table = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = ids[self.mul(reps[a], reps[b])];
            }
        }
        Ok((FinGroup::from_table_unchecked(k, table), ids))
    }

    /// All homomorphisms to `tgt`, by assigning images to a generating set.
    pub fn homs_to(&self, tgt: &FinGroup) -> Vec<Vec<usize>> {
        let gens = self.generating_set();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        loop {
            if let Some(m) = self.extend_hom(tgt, &gens, &images) {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return out;
                }
                images[i] += 1;
                if images[i] < tgt.n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }
}

pub fn product_coords(factors: &[FinGroup], mut x: usize) -> Vec<usize> {
    let mut c = vec![0; factors.len()];
    for i in (0..factors.len()).rev() {
        c[i] = x % factors[i].n;
        x /= factors[i].n;
    }
    c
}

pub fn product_index(factors: &[FinGroup], coords: &[usize]) -> usize {
    factors.iter().zip(coords).fold(0, |acc, (g, &c)| acc * g.n + c)
}
