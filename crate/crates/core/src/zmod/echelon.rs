//! Sparse column echelon form over the integers.
//!
//! Columns are reduced row by row with gcd steps, always pivoting on the entry of
//! least absolute value. Every column carries a tag vector that receives the same
//! operations, which is how kernels and solutions are read off.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{axpy, SparseVec};

#[derive(Clone, Debug)]
pub struct EchelonColumn {
    pub vec: SparseVec,
    pub tag: SparseVec,
}

/// Lattice basis in echelon form: basis column `j` has leading row `pivots[j]`,
/// pivots strictly increase and the leading entries are positive.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub dim: usize,
    pub basis: Vec<EchelonColumn>,
    pub pivots: Vec<usize>,
    pivot_of_row: Vec<Option<usize>>,
    /// Tags of the columns that reduced to zero; they span the relation lattice
    /// among the input columns (restricted to tagged coordinates).
    pub kernel: Vec<SparseVec>,
}

fn lead(v: &SparseVec) -> Option<usize> {
    v.first().map(|e| e.0)
}

/// Least absolute residue, so that `m - 1` is seen as the unit `-1` when pivoting.
fn residue(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

/// Reduces the entries of `v` at rows `>= from` modulo `moduli`.
fn reduce_from(v: &mut SparseVec, from: usize, moduli: &[BigInt]) {
    v.retain_mut(|(i, x)| {
        if *i >= from && !moduli[*i].is_zero() {
            *x = residue(x, &moduli[*i]);
        }
        !x.is_zero()
    });
}

impl Echelon {
    pub fn new(dim: usize, columns: Vec<EchelonColumn>) -> Self {
        Self::build(dim, columns, None, None)
    }

    /// Echelon form of the columns together with the untagged vectors `m_i e_i`
    /// for the nonzero `moduli`. Entries are kept reduced modulo those vectors,
    /// which leaves tags unchanged and bounds coefficient growth.
    ///
    /// With `tag_moduli`, tags are reduced as well. This is sound when the columns
    /// are the images of a well-defined map out of `Z^n / diag(tag_moduli)`:
    /// kernel tags are then correct modulo the source moduli.
    pub fn with_moduli(
        dim: usize,
        mut columns: Vec<EchelonColumn>,
        moduli: &[BigInt],
        tag_moduli: Option<&[BigInt]>,
    ) -> Self {
        assert_eq!(
            moduli.len(),
            dim,
            "moduli do not match the ambient dimension"
        );
        for c in &mut columns {
            reduce_from(&mut c.vec, 0, moduli);
        }
        columns.extend(
            moduli
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .map(|(i, m)| EchelonColumn {
                    vec: vec![(i, m.clone())],
                    tag: Vec::new(),
                }),
        );
        Self::build(dim, columns, Some(moduli), tag_moduli)
    }

    fn build(
        dim: usize,
        columns: Vec<EchelonColumn>,
        moduli: Option<&[BigInt]>,
        tag_moduli: Option<&[BigInt]>,
    ) -> Self {
        let mut slab = columns;
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); dim];
        let mut kernel = Vec::new();
        for (id, c) in slab.iter_mut().enumerate() {
            match lead(&c.vec) {
                Some(r) => {
                    assert!(r < dim, "vector entry outside ambient dimension");
                    buckets[r].push(id);
                }
                None => {
                    if !c.tag.is_empty() {
                        kernel.push(std::mem::take(&mut c.tag));
                    }
                }
            }
        }
        let mut basis_ids = Vec::new();
        let mut pivots = Vec::new();
        for row in 0..dim {
            let mut live = std::mem::take(&mut buckets[row]);
            while live.len() > 1 {
                let p = *live
                    .iter()
                    .min_by(|&&a, &&b| {
                        let ka = (slab[a].vec[0].1.abs(), slab[a].vec.len());
                        let kb = (slab[b].vec[0].1.abs(), slab[b].vec.len());
                        ka.cmp(&kb)
                    })
                    .unwrap();
                let pivot = slab[p].clone();
                let pv = pivot.vec[0].1.clone();
                let mut keep = vec![p];
                for &c in &live {
                    if c == p {
                        continue;
                    }
                    let q = -(slab[c].vec[0].1.div_floor(&pv));
                    let col = &mut slab[c];
                    axpy(&mut col.vec, &q, &pivot.vec);
                    axpy(&mut col.tag, &q, &pivot.tag);
                    if let Some(m) = moduli {
                        reduce_from(&mut col.vec, row + 1, m);
                    }
                    if let Some(m) = tag_moduli {
                        super::matrix::sparse_reduce(&mut col.tag, m);
                    }
                    match lead(&col.vec) {
                        Some(r) if r == row => keep.push(c),
                        Some(r) => buckets[r].push(c),
                        None => {
                            if !col.tag.is_empty() {
                                kernel.push(std::mem::take(&mut col.tag));
                            }
                        }
                    }
                }
                live = keep;
            }
            if let Some(&p) = live.first() {
                let col = &mut slab[p];
                if col.vec[0].1.is_negative() {
                    for e in col.vec.iter_mut().chain(col.tag.iter_mut()) {
                        e.1 = -std::mem::take(&mut e.1);
                    }
                }
                basis_ids.push(p);
                pivots.push(row);
            }
        }
        let mut pivot_of_row = vec![None; dim];
        for (j, &r) in pivots.iter().enumerate() {
            pivot_of_row[r] = Some(j);
        }
        let basis = basis_ids
            .into_iter()
            .map(|id| {
                std::mem::replace(
                    &mut slab[id],
                    EchelonColumn {
                        vec: Vec::new(),
                        tag: Vec::new(),
                    },
                )
            })
            .collect();
        Self {
            dim,
            basis,
            pivots,
            pivot_of_row,
            kernel,
        }
    }

    /// Echelon basis of the lattice spanned by `vectors` (tags unused).
    pub fn of_vectors(dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        Self::new(
            dim,
            vectors
                .into_iter()
                .map(|vec| EchelonColumn {
                    vec,
                    tag: Vec::new(),
                })
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` is not in the lattice.
    pub fn coordinates(&self, v: &[(usize, BigInt)]) -> Option<SparseVec> {
        let mut rest: SparseVec = v.to_vec();
        let mut coeffs: SparseVec = Vec::new();
        while let Some((r, x)) = rest.first().cloned() {
            let j = self.pivot_of_row.get(r).copied().flatten()?;
            let b = &self.basis[j];
            let (q, rem) = x.div_rem(&b.vec[0].1);
            if !rem.is_zero() {
                return None;
            }
            axpy(&mut rest, &-&q, &b.vec);
            coeffs.push((j, q));
        }
        coeffs.sort_by_key(|e| e.0);
        Some(coeffs)
    }

    /// Combination of basis tags with the given coefficients.
    pub fn combine_tags(&self, coeffs: &[(usize, BigInt)]) -> SparseVec {
        let mut out = Vec::new();
        for (j, q) in coeffs {
            axpy(&mut out, q, &self.basis[*j].tag);
        }
        out
    }

    /// Combination of basis vectors with the given coefficients.
    pub fn combine(&self, coeffs: &[(usize, BigInt)]) -> SparseVec {
        let mut out = Vec::new();
        for (j, q) in coeffs {
            axpy(&mut out, q, &self.basis[*j].vec);
        }
        out
    }
}
