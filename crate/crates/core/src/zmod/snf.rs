//! Smith normal form by row/column reduction with minimal-absolute-value pivots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Result of [`smith_normal_form`]: `u * m * v == s`, and `u_inv * u == 1`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    /// Inverse of `u`: row operations on `u` act as inverse column operations here.
    u_inv: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    /// When set, `modulus * Z^rows` lies in the column lattice, so entries of
    /// `a`, `u` and `u_inv` may be reduced modulo it.
    modulus: Option<BigInt>,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        let (src, dst) = two_mut(&mut self.a, j, i);
        add_scaled(dst, k, src);
        if let Some(u) = &mut self.u {
            let (src, dst) = two_mut(u, j, i);
            add_scaled(dst, k, src);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                if !row[i].is_zero() {
                    let t = k * &row[i];
                    row[j] -= t;
                }
            }
        }
        if let Some(d) = &self.modulus {
            reduce_all(&mut self.a[i], d);
            if let Some(u) = &mut self.u {
                reduce_all(&mut u[i], d);
            }
            if let Some(ui) = &mut self.u_inv {
                for row in ui.iter_mut() {
                    row[j] = residue(&row[j], d);
                }
            }
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for row in &mut self.a {
            if !row[j].is_zero() {
                let t = k * &row[j];
                row[i] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[j].is_zero() {
                    let t = k * &row[j];
                    row[i] += t;
                }
            }
        }
        if let Some(d) = &self.modulus {
            for row in &mut self.a {
                row[i] = residue(&row[i], d);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }
}

fn two_mut<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

/// Least absolute residue, which keeps pivots small.
fn residue(x: &BigInt, d: &BigInt) -> BigInt {
    let r = x.mod_floor(d);
    if &r + &r > *d {
        r - d
    } else {
        r
    }
}

fn reduce_all(v: &mut [BigInt], d: &BigInt) {
    for x in v {
        *x = residue(x, d);
    }
}

fn add_scaled(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += k * s;
        }
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::from(1);
            r
        })
        .collect()
}

fn reduce(m: &IntMatrix, transforms: bool, modulus: Option<&BigInt>) -> Work {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    if let Some(d) = modulus {
        a.iter_mut().for_each(|r| reduce_all(r, d));
    }
    let mut w = Work {
        a,
        modulus: modulus.cloned(),
        u: transforms.then(|| identity_rows(rows)),
        u_inv: transforms.then(|| identity_rows(rows)),
        v: (transforms && modulus.is_none()).then(|| identity_rows(cols)),
        rows,
        cols,
    };
    for t in 0..rows.min(cols) {
        loop {
            // Minimal nonzero |entry| in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..w.rows {
                for j in t..w.cols {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if w.a[bi][bj].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return w;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..w.rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.add_row(i, t, &-q);
                if !w.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..w.cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.add_col(j, t, &-q);
                if !w.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let p = w.a[t][t].clone();
            let bad =
                (t + 1..w.rows).find(|&i| (t + 1..w.cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
            if let Some(d) = &w.modulus {
                if let Some(u) = &mut w.u {
                    reduce_all(&mut u[t], d);
                }
                if let Some(ui) = &mut w.u_inv {
                    for row in ui.iter_mut() {
                        row[t] = residue(&row[t], d);
                    }
                }
            }
        }
    }
    w
}

/// Smith normal form with unimodular transforms: `u * m * v == s`, `s` diagonal,
/// diagonal entries non-negative and each dividing the next (zeros last).
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let w = reduce(m, true, None);
    let (rows, cols) = (w.rows, w.cols);
    let flat = |rs: Vec<Vec<BigInt>>, c: usize| IntMatrix::from_big_rows(rs, c);
    Smith {
        s: flat(w.a, cols),
        u: flat(w.u.unwrap(), rows),
        u_inv: flat(w.u_inv.unwrap(), rows),
        v: flat(w.v.unwrap(), cols),
    }
}

/// Smith form of the lattice spanned by the columns of `m` and `d * Z^rows`
/// (`d > 0`). Returns the row transform `u` and its inverse, both reduced and
/// only inverse modulo `d`, with the invariant factors `gcd(s_i, d)` (one per row).
pub fn smith_normal_form_mod(m: &IntMatrix, d: &BigInt) -> (IntMatrix, IntMatrix, Vec<BigInt>) {
    assert!(d.is_positive(), "modulus must be positive");
    let w = reduce(m, true, Some(d));
    let rows = w.rows;
    let diag = (0..rows)
        .map(|i| {
            let s = if i < w.cols {
                w.a[i][i].clone()
            } else {
                BigInt::zero()
            };
            s.gcd(d)
        })
        .collect();
    let flat = |rs: Vec<Vec<BigInt>>| IntMatrix::from_big_rows(rs, rows);
    (flat(w.u.unwrap()), flat(w.u_inv.unwrap()), diag)
}

/// Diagonal of the Smith normal form, without transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let w = reduce(m, false, None);
    (0..w.rows.min(w.cols)).map(|i| w.a[i][i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.s);
        assert!((&s.u_inv * &s.u).is_identity());
        assert!(s.u.determinant().abs() == BigInt::from(1));
        assert!(s.v.determinant().abs() == BigInt::from(1));
        let d = s.diagonal();
        for i in 0..s.s.rows() {
            for j in 0..s.s.cols() {
                if i != j {
                    assert!(s.s.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[0] >= BigInt::zero());
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert!(s.s.is_identity());
    }

    #[test]
    fn diag_two_three() {
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.s.is_zero());
    }

    #[test]
    fn rectangular() {
        let s = check(&IntMatrix::from_rows(&[
            [2, 4, 4],
            [-6, 6, 12],
            [10, -4, -16],
        ]));
        assert_eq!(
            s.diagonal(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        check(&IntMatrix::from_rows(&[[4, 6], [6, 9], [2, 3]]));
    }
}
