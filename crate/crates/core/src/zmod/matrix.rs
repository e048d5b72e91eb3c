//! Dense and sparse integer matrices over arbitrary-precision integers.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Self {
            rows: r,
            cols,
            data,
        }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Reduces row `i` modulo `moduli[i]` (entries with modulus 0 are left alone).
    pub fn reduce_rows(&mut self, moduli: &[BigInt]) {
        assert_eq!(moduli.len(), self.rows);
        for (i, m) in moduli.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let x = self.get_mut(i, j);
                *x = x.mod_floor_big(m);
            }
        }
    }

    pub fn to_sparse_columns(&self) -> SparseMatrix {
        let mut cols = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut v = SparseVec::new();
            for i in 0..self.rows {
                let x = self.get(i, j);
                if !x.is_zero() {
                    v.push((i, x.clone()));
                }
            }
            cols.push(v);
        }
        SparseMatrix {
            rows: self.rows,
            columns: cols,
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Floor remainder helper for `BigInt`.
pub trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m.abs()
        } else {
            r
        }
    }
}

/// Sparse vector: strictly increasing indices, nonzero values.
pub type SparseVec = Vec<(usize, BigInt)>;

/// `dst += k * src` on sparse vectors.
pub fn axpy(dst: &mut SparseVec, k: &BigInt, src: &[(usize, BigInt)]) {
    if k.is_zero() || src.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let mut a = std::mem::take(dst).into_iter().peekable();
    let mut b = src.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => {
                if x.0 < y.0 {
                    out.push(a.next().unwrap());
                } else if y.0 < x.0 {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, k * v));
                } else {
                    let (i, v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    let s = v + k * w;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
            }
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => {
                let (i, v) = b.next().unwrap();
                out.push((*i, k * v));
            }
            (None, None) => break,
        }
    }
    *dst = out;
}

pub fn sparse_get(v: &[(usize, BigInt)], i: usize) -> Option<&BigInt> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|p| &v[p].1)
}

pub fn sparse_from_dense(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &[(usize, BigInt)], dim: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Reduces entries modulo the given per-coordinate moduli (0 = free coordinate).
pub fn sparse_reduce(v: &mut SparseVec, moduli: &[BigInt]) {
    v.retain_mut(|(i, x)| {
        let m = &moduli[*i];
        if !m.is_zero() {
            *x = x.mod_floor_big(m);
        }
        !x.is_zero()
    });
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Builds a matrix from unsorted `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(rows: usize, cols: usize, mut trips: Vec<(usize, usize, BigInt)>) -> Self {
        trips.sort_by_key(|a| (a.1, a.0));
        let mut columns: Vec<SparseVec> = vec![Vec::new(); cols];
        for (r, c, v) in trips {
            let col = &mut columns[c];
            match col.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => col.push((r, v)),
            }
        }
        for col in &mut columns {
            col.retain(|(_, v)| !v.is_zero());
        }
        Self { rows, columns }
    }

    pub fn apply(&self, v: &[(usize, BigInt)]) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v {
            axpy(&mut out, x, &self.columns[*j]);
        }
        out
    }

    pub fn compose(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in product");
        SparseMatrix {
            rows: self.rows,
            columns: rhs.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}
