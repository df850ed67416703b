//! Dense integer matrices and the Smith normal form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub type Int = i128;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>], cols: usize) -> Self {
        let mut m = Mat::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Int>], rows: usize) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix column");
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn diag(entries: &[Int]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Int {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Int> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut m = Mat::zeros(self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        // Bareiss fraction-free elimination.
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1;
        for k in 0..n - 1 {
            if a.get(k, k) == 0 {
                let Some(p) = (k + 1..n).find(|&i| a.get(i, k) != 0) else {
                    return 0;
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k);
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: Int) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(dst, c) + k * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: Int) {
        if k == 0 {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, dst) + k * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    fn neg_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    fn neg_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
    pub u_inv: Mat,
    pub v_inv: Mat,
}

impl Smith {
    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i)).take_while(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Computes unimodular `u`, `v` with `u * m * v` diagonal, nonnegative, and each
/// diagonal entry dividing the next. The inverses of `u` and `v` are tracked too.
pub fn smith_normal_form(m: &Mat) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = Mat::identity(rows);
    let mut u_inv = Mat::identity(rows);
    let mut v = Mat::identity(cols);
    let mut v_inv = Mat::identity(cols);

    // Row op on d: row[i] += k row[j]  <=>  u := E u, u_inv := u_inv E^{-1}
    macro_rules! row_add {
        ($i:expr, $j:expr, $k:expr) => {{
            let (i, j, k) = ($i, $j, $k);
            d.add_row(i, j, k);
            u.add_row(i, j, k);
            u_inv.add_col(j, i, -k);
        }};
    }
    macro_rules! col_add {
        ($i:expr, $j:expr, $k:expr) => {{
            let (i, j, k) = ($i, $j, $k);
            d.add_col(i, j, k);
            v.add_col(i, j, k);
            v_inv.add_row(j, i, -k);
        }};
    }
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            let (i, j) = ($i, $j);
            d.swap_rows(i, j);
            u.swap_rows(i, j);
            u_inv.swap_cols(i, j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            let (i, j) = ($i, $j);
            d.swap_cols(i, j);
            v.swap_cols(i, j);
            v_inv.swap_rows(i, j);
        }};
    }

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // Pivot: smallest nonzero absolute value in the trailing block.
            let mut best: Option<(usize, usize, Int)> = None;
            for r in t..rows {
                for c in t..cols {
                    let a = d.get(r, c).abs();
                    if a != 0 && best.is_none_or(|(_, _, b)| a < b) {
                        best = Some((r, c, a));
                    }
                }
            }
            let Some((pr, pc, _)) = best else {
                break;
            };
            row_swap!(t, pr);
            col_swap!(t, pc);
            let p = d.get(t, t);
            let mut clean = true;
            for r in t + 1..rows {
                let q = d.get(r, t) / p;
                row_add!(r, t, -q);
                if d.get(r, t) != 0 {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                let q = d.get(t, c) / p;
                col_add!(c, t, -q);
                if d.get(t, c) != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let mut bad_row = None;
            'outer: for r in t + 1..rows {
                for c in t + 1..cols {
                    if d.get(r, c) % p != 0 {
                        bad_row = Some(r);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(r) => row_add!(t, r, 1),
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.neg_row(t);
            u.neg_row(t);
            u_inv.neg_col(t);
        }
    }
    Smith { u, d, v, u_inv, v_inv }
}

/// An integer solution of `m x = b`, if one exists.
pub fn solve(m: &Mat, b: &[Int]) -> Option<Vec<Int>> {
    solve_with(&smith_normal_form(m), b)
}

/// [`solve`] against a precomputed Smith form of `m`.
pub fn solve_with(s: &Smith, b: &[Int]) -> Option<Vec<Int>> {
    let y = s.u.apply(b);
    let diag = s.diagonal();
    let mut z = vec![0; s.v.rows()];
    for (i, &yi) in y.iter().enumerate() {
        if i < diag.len() {
            if yi % diag[i] != 0 {
                return None;
            }
            z[i] = yi / diag[i];
        } else if yi != 0 {
            return None;
        }
    }
    Some(s.v.apply(&z))
}

/// Basis (as columns) of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &Mat) -> Vec<Vec<Int>> {
    let s = smith_normal_form(m);
    let r = s.rank();
    (r..m.cols()).map(|c| s.v.col(c)).collect()
}

/// Greatest common divisor, always nonnegative.
pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_finds_integer_solutions_only() {
        let m = Mat::from_rows(&[vec![2, 4], vec![0, 3]], 2);
        let x = solve(&m, &[6, 3]).unwrap();
        assert_eq!(m.apply(&x), vec![6, 3]);
        assert_eq!(solve(&Mat::from_rows(&[vec![2]], 1), &[3]), None);
        assert_eq!(solve(&Mat::from_rows(&[vec![1], vec![1]], 1), &[1, 2]), None);
    }

    fn check(m: &Mat) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), Mat::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), Mat::identity(m.cols()));
        assert_eq!(s.u.determinant().abs(), 1);
        assert_eq!(s.v.determinant().abs(), 1);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if r != c {
                    assert_eq!(s.d.get(r, c), 0);
                }
            }
        }
    }

    #[test]
    fn diag_two_three() {
        let m = Mat::diag(&[2, 3]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, Mat::diag(&[1, 6]));
        check(&m);
    }

    #[test]
    fn zero_matrix_keeps_identity_transforms() {
        let m = Mat::zeros(2, 3);
        let s = smith_normal_form(&m);
        assert!(s.d.is_zero());
        assert_eq!(s.u, Mat::identity(2));
        assert_eq!(s.v, Mat::identity(3));
    }

    #[test]
    fn identity_is_fixed() {
        let s = smith_normal_form(&Mat::identity(3));
        assert_eq!(s.d, Mat::identity(3));
    }

    #[test]
    fn assorted() {
        check(&Mat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3));
        check(&Mat::from_rows(&[vec![0, 0], vec![0, 5], vec![3, 0]], 2));
        check(&Mat::from_rows(&[vec![4, 6, 0, 8]], 4));
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = Mat::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]], 3);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn determinant_small() {
        let m = Mat::from_rows(&[vec![2, 1], vec![7, 4]], 2);
        assert_eq!(m.determinant(), 1);
        let m = Mat::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]], 3);
        assert_eq!(m.determinant(), -2);
    }
}
