//! Subquotients `N / D` of lattices in `Z^dim`, with canonical coordinates.
//!
//! `N` and `D` are given by generators with `D ⊆ N`. The quotient is computed in
//! three steps: echelon bases for both lattices, Tietze elimination of unit
//! relations on the coordinate matrix of `D` in the basis of `N`, and a dense
//! Smith normal form of whatever survives. The recorded eliminations and the
//! Smith transforms give the witness maps (element -> canonical coordinates and
//! canonical generator -> representative).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::abelian::FgAbelianGroup;
use super::echelon::{Echelon, EchelonColumn};
use super::matrix::{axpy, sparse_get, IntMatrix, ModFloor, SparseMatrix, SparseVec};
use super::snf::{smith_normal_form, smith_normal_form_mod};
use crate::Error;

#[derive(Clone, Debug)]
struct Elimination {
    row: usize,
    /// The eliminated relation without its unit entry, scaled so that
    /// `x_row = sum(coeff * x_l)`.
    substitution: SparseVec,
}

/// A presentation of `Z^dim / R` on surviving generators, recorded as a chain
/// of substitutions.
#[derive(Clone, Debug)]
struct Reduction {
    dim: usize,
    eliminations: Vec<Elimination>,
    survivors: Vec<usize>,
}

impl Reduction {
    /// Image of `v` in `Z^survivors` (congruent to `v` modulo `R`).
    fn apply(&self, v: &[(usize, BigInt)]) -> SparseVec {
        let mut dense = vec![BigInt::zero(); self.dim];
        for (i, x) in v {
            dense[*i] += x;
        }
        for e in &self.eliminations {
            let x = std::mem::take(&mut dense[e.row]);
            if x.is_zero() {
                continue;
            }
            for (l, a) in &e.substitution {
                dense[*l] += &x * a;
            }
        }
        self.survivors
            .iter()
            .enumerate()
            .filter_map(|(s, &j)| {
                let x = std::mem::take(&mut dense[j]);
                (!x.is_zero()).then_some((s, x))
            })
            .collect()
    }

    fn include(&self, v: &[(usize, BigInt)]) -> SparseVec {
        v.iter()
            .map(|(s, x)| (self.survivors[*s], x.clone()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Subquotient {
    dim: usize,
    /// When set, the lattices below live in `Z^survivors` of this reduction.
    outer: Option<std::sync::Arc<Reduction>>,
    numer: Echelon,
    eliminations: Vec<Elimination>,
    /// Surviving generator indices (into the numerator basis).
    survivors: Vec<usize>,
    /// Smith row transform on the survivors, and its inverse.
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Smith rows that carry a nontrivial canonical coordinate.
    kept_rows: Vec<usize>,
    moduli: Vec<BigInt>,
    group: FgAbelianGroup,
}

impl Subquotient {
    pub fn new(
        dim: usize,
        numerator: impl IntoIterator<Item = SparseVec>,
        denominator: impl IntoIterator<Item = SparseVec>,
    ) -> Result<Self, Error> {
        let numer = Echelon::of_vectors(dim, numerator);
        let denom = Echelon::of_vectors(dim, denominator);
        Self::from_echelons(dim, numer, denom, None)
    }

    /// `exponent`, when given, must annihilate the quotient.
    fn from_echelons(
        dim: usize,
        numer: Echelon,
        denom: Echelon,
        exponent: Option<&BigInt>,
    ) -> Result<Self, Error> {
        let k = numer.rank();
        let mut relations: Vec<SparseVec> = Vec::with_capacity(denom.rank());
        for b in &denom.basis {
            let c = numer.coordinates(&b.vec).ok_or_else(|| {
                Error::NotAComplex("denominator lattice is not contained in the numerator".into())
            })?;
            relations.push(c);
        }
        let (eliminations, survivors, core) = tietze(k, relations);
        // With a known exponent the Smith form runs modulo it, which bounds
        // the transforms; coordinates only matter modulo divisors of it.
        let (u, u_inv, diag) = match exponent {
            Some(d) => smith_normal_form_mod(&core, d),
            None => {
                let smith = smith_normal_form(&core);
                let diag = smith.diagonal();
                (smith.u, smith.u_inv, diag)
            }
        };
        let n = survivors.len();
        let mut kept_rows = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..n {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                kept_rows.push(i);
                moduli.push(d);
            }
        }
        // Canonical order: torsion ascending first, free coordinates last.
        let mut order: Vec<usize> = (0..kept_rows.len()).collect();
        order.sort_by(|&a, &b| {
            let (da, db) = (&moduli[a], &moduli[b]);
            (da.is_zero(), da).cmp(&(db.is_zero(), db))
        });
        let kept_rows: Vec<usize> = order.iter().map(|&i| kept_rows[i]).collect();
        let moduli: Vec<BigInt> = order.iter().map(|&i| moduli[i].clone()).collect();
        let group = FgAbelianGroup::from_snf_diagonal(&moduli, 0);
        debug_assert_eq!(group.moduli(), moduli);
        Ok(Self {
            dim,
            outer: None,
            numer,
            eliminations,
            survivors,
            u,
            u_inv,
            kept_rows,
            moduli,
            group,
        })
    }

    /// `ker(map) / im(incoming)` for maps between presented groups `Z^m / diag(moduli)`.
    pub fn homology(
        incoming: Option<&SparseMatrix>,
        outgoing: Option<&SparseMatrix>,
        here_moduli: &[BigInt],
        target_moduli: &[BigInt],
    ) -> Result<Self, Error> {
        let dim = here_moduli.len();
        let cycles = match outgoing {
            Some(d) => kernel_generators(d, here_moduli, target_moduli),
            None => (0..dim).map(|i| vec![(i, BigInt::one())]).collect(),
        };
        if let Some(d) = incoming.filter(|d| d.columns.len() > dim) {
            return Self::homology_by_elimination(d, outgoing, here_moduli, target_moduli);
        }
        let mut boundaries: Vec<SparseVec> = Vec::new();
        if let Some(d) = incoming {
            assert_eq!(d.rows, dim, "incoming differential has wrong target");
            boundaries.extend(d.columns.iter().cloned());
        }
        if let (Some(a), Some(b)) = (outgoing, incoming) {
            let comp = a.compose(b);
            for col in &comp.columns {
                let mut c = col.clone();
                super::matrix::sparse_reduce(&mut c, target_moduli);
                if !c.is_empty() {
                    return Err(Error::NotAComplex(
                        "differentials do not compose to zero".into(),
                    ));
                }
            }
        }
        // Both lattices contain the moduli lattice, so entries can be kept reduced.
        let untagged = |vs: Vec<SparseVec>| -> Vec<EchelonColumn> {
            vs.into_iter()
                .map(|vec| EchelonColumn {
                    vec,
                    tag: Vec::new(),
                })
                .collect()
        };
        let numer = Echelon::with_moduli(dim, untagged(cycles), here_moduli, None);
        let denom = Echelon::with_moduli(dim, untagged(boundaries), here_moduli, None);
        let exponent = (dim > 0 && here_moduli.iter().all(|m| !m.is_zero()))
            .then(|| here_moduli.iter().fold(BigInt::one(), |acc, m| acc.lcm(m)));
        Self::from_echelons(dim, numer, denom, exponent.as_ref())
    }

    /// Homology when boundaries outnumber the ambient generators: Tietze
    /// elimination presents `C / B` on few generators, and cycles are computed
    /// as the kernel of the induced outgoing map there.
    fn homology_by_elimination(
        incoming: &SparseMatrix,
        outgoing: Option<&SparseMatrix>,
        here_moduli: &[BigInt],
        target_moduli: &[BigInt],
    ) -> Result<Self, Error> {
        let dim = here_moduli.len();
        let mut relations: Vec<SparseVec> = incoming
            .columns
            .iter()
            .map(|c| {
                let mut c = c.clone();
                super::matrix::sparse_reduce(&mut c, here_moduli);
                c
            })
            .filter(|c| !c.is_empty())
            .collect();
        relations.extend(moduli_vectors(here_moduli));
        let (eliminations, survivors, core) = tietze(dim, relations);
        let s = survivors.len();
        let core_cols: Vec<SparseVec> = (0..core.cols())
            .map(|j| {
                (0..s)
                    .filter(|&i| !core.get(i, j).is_zero())
                    .map(|i| (i, core.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let exponent = (dim > 0 && here_moduli.iter().all(|m| !m.is_zero()))
            .then(|| here_moduli.iter().fold(BigInt::one(), |acc, m| acc.lcm(m)));
        let cycles = match outgoing {
            Some(o) => {
                let induced = SparseMatrix {
                    rows: o.rows,
                    columns: survivors.iter().map(|&j| o.columns[j].clone()).collect(),
                };
                // Tags may be reduced by the exponent when it maps into the target moduli.
                let tag_moduli = exponent.as_ref().filter(|d| {
                    induced.columns.iter().all(|c| {
                        let mut v: SparseVec = c.iter().map(|(i, x)| (*i, x * *d)).collect();
                        super::matrix::sparse_reduce(&mut v, target_moduli);
                        v.is_empty()
                    })
                });
                let tag_moduli = tag_moduli.map(|d| vec![d.clone(); s]);
                let mut k = Echelon::with_moduli(
                    o.rows,
                    tagged_columns(&induced),
                    target_moduli,
                    tag_moduli.as_deref(),
                )
                .kernel;
                k.extend(core_cols.iter().cloned());
                k
            }
            None => (0..s).map(|i| vec![(i, BigInt::one())]).collect(),
        };
        let untagged = |vs: Vec<SparseVec>| -> Vec<EchelonColumn> {
            vs.into_iter()
                .map(|vec| EchelonColumn {
                    vec,
                    tag: Vec::new(),
                })
                .collect()
        };
        let (numer, denom) = match &exponent {
            // The exponent annihilates the quotient, so `d * Z^s` lies in both lattices.
            Some(d) => {
                let m = vec![d.clone(); s];
                (
                    Echelon::with_moduli(s, untagged(cycles), &m, None),
                    Echelon::with_moduli(s, untagged(core_cols), &m, None),
                )
            }
            None => (
                Echelon::of_vectors(s, cycles),
                Echelon::of_vectors(s, core_cols),
            ),
        };
        let mut inner = Self::from_echelons(s, numer, denom, exponent.as_ref())?;
        inner.dim = dim;
        inner.outer = Some(std::sync::Arc::new(Reduction {
            dim,
            eliminations,
            survivors,
        }));
        Ok(inner)
    }

    fn pull<'a>(&self, v: &'a [(usize, BigInt)]) -> std::borrow::Cow<'a, [(usize, BigInt)]> {
        match &self.outer {
            Some(r) => std::borrow::Cow::Owned(r.apply(v)),
            None => std::borrow::Cow::Borrowed(v),
        }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical presentation moduli (torsion first, 0 for free coordinates).
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn contains(&self, v: &[(usize, BigInt)]) -> bool {
        self.numer.coordinates(&self.pull(v)).is_some()
    }

    /// Canonical coordinates of the class of `v`, reduced modulo the invariant
    /// factors; `None` if `v` is not in the numerator lattice.
    pub fn coords(&self, v: &[(usize, BigInt)]) -> Option<Vec<BigInt>> {
        let c = self.numer.coordinates(&self.pull(v))?;
        let mut dense = vec![BigInt::zero(); self.numer.rank()];
        for (j, x) in c {
            dense[j] = x;
        }
        for e in &self.eliminations {
            let x = std::mem::take(&mut dense[e.row]);
            if x.is_zero() {
                continue;
            }
            for (l, a) in &e.substitution {
                dense[*l] += &x * a;
            }
        }
        let surv: Vec<BigInt> = self.survivors.iter().map(|&j| dense[j].clone()).collect();
        let y = self.u.mul_vec(&surv);
        Some(
            self.kept_rows
                .iter()
                .zip(&self.moduli)
                .map(|(&r, m)| {
                    if m.is_zero() {
                        y[r].clone()
                    } else {
                        y[r].mod_floor_big(m)
                    }
                })
                .collect(),
        )
    }

    /// Representative in the ambient lattice of canonical generator `i`.
    pub fn representative(&self, i: usize) -> SparseVec {
        let row = self.kept_rows[i];
        let mut coeffs: SparseVec = Vec::new();
        for (s, &j) in self.survivors.iter().enumerate() {
            let x = self.u_inv.get(s, row);
            if !x.is_zero() {
                coeffs.push((j, x.clone()));
            }
        }
        coeffs.sort_by_key(|e| e.0);
        let v = self.numer.combine(&coeffs);
        match &self.outer {
            Some(r) => r.include(&v),
            None => v,
        }
    }

    /// Representative of an element given in canonical coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> SparseVec {
        let mut out = Vec::new();
        for (i, x) in coords.iter().enumerate() {
            if !x.is_zero() {
                axpy(&mut out, x, &self.representative(i));
            }
        }
        out
    }

    /// Whether `v` lies in the denominator (is zero in the quotient).
    pub fn is_zero_class(&self, v: &[(usize, BigInt)]) -> bool {
        self.coords(v)
            .map(|c| c.iter().all(Zero::is_zero))
            .unwrap_or(false)
    }
}

/// Reduces canonical coordinates modulo `moduli`.
pub fn reduce_coords(v: &mut [BigInt], moduli: &[BigInt]) {
    for (x, m) in v.iter_mut().zip(moduli) {
        if !m.is_zero() {
            *x = x.mod_floor_big(m);
        }
    }
}

pub fn moduli_vectors(moduli: &[BigInt]) -> Vec<SparseVec> {
    moduli
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, m)| vec![(i, m.clone())])
        .collect()
}

/// Generators of `{x : map(x) ≡ 0 mod target_moduli}` in `Z^{map.cols()}`.
///
/// `map` must be well defined from `Z^cols / diag(source_moduli)`; the moduli
/// vectors of the source are included among the generators.
pub fn kernel_generators(
    map: &SparseMatrix,
    source_moduli: &[BigInt],
    target_moduli: &[BigInt],
) -> Vec<SparseVec> {
    assert_eq!(map.rows, target_moduli.len(), "target dimension mismatch");
    assert_eq!(
        map.columns.len(),
        source_moduli.len(),
        "source dimension mismatch"
    );
    let mut gens = Echelon::with_moduli(
        map.rows,
        tagged_columns(map),
        target_moduli,
        Some(source_moduli),
    )
    .kernel;
    gens.extend(moduli_vectors(source_moduli));
    gens
}

fn tagged_columns(map: &SparseMatrix) -> Vec<EchelonColumn> {
    map.columns
        .iter()
        .enumerate()
        .map(|(j, c)| EchelonColumn {
            vec: c.clone(),
            tag: vec![(j, BigInt::one())],
        })
        .collect()
}

/// Some `x` with `map(x) ≡ target mod target_moduli`, if one exists.
pub fn solve(
    map: &SparseMatrix,
    target_moduli: &[BigInt],
    target: &[(usize, BigInt)],
) -> Option<SparseVec> {
    let ech = Echelon::with_moduli(map.rows, tagged_columns(map), target_moduli, None);
    let mut t = target.to_vec();
    super::matrix::sparse_reduce(&mut t, target_moduli);
    let coeffs = ech.coordinates(&t)?;
    Some(ech.combine_tags(&coeffs))
}

/// Unit-pivot Tietze elimination. Returns the eliminations, the surviving
/// generators and the dense matrix of remaining relations on them.
fn tietze(k: usize, relations: Vec<SparseVec>) -> (Vec<Elimination>, Vec<usize>, IntMatrix) {
    let mut cols = relations;
    let mut alive_col = vec![true; cols.len()];
    let mut alive_row = vec![true; k];
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, c) in cols.iter().enumerate() {
        for (i, _) in c {
            occurs[*i].push(j);
        }
    }
    let mut eliminations = Vec::new();
    loop {
        let mut progress = false;
        for j in 0..cols.len() {
            if !alive_col[j] {
                continue;
            }
            let Some(&(row, ref unit)) = cols[j]
                .iter()
                .filter(|(_, x)| x.abs().is_one())
                .min_by_key(|(i, _)| occurs[*i].len())
            else {
                continue;
            };
            let unit = unit.clone();
            let pivot = cols[j].clone();
            let users = std::mem::take(&mut occurs[row]);
            for c in users {
                if c == j || !alive_col[c] {
                    continue;
                }
                let Some(x) = sparse_get(&cols[c], row).cloned() else {
                    continue;
                };
                // unit is ±1, so dividing by it is multiplying by it.
                let q = -(&x * &unit);
                let before: Vec<usize> = cols[c].iter().map(|e| e.0).collect();
                axpy(&mut cols[c], &q, &pivot);
                for (i, _) in &cols[c] {
                    if before.binary_search(i).is_err() {
                        occurs[*i].push(c);
                    }
                }
                if cols[c].is_empty() {
                    alive_col[c] = false;
                }
            }
            let substitution: SparseVec = pivot
                .iter()
                .filter(|(i, _)| *i != row)
                .map(|(i, a)| (*i, -(a * &unit)))
                .collect();
            eliminations.push(Elimination { row, substitution });
            alive_col[j] = false;
            alive_row[row] = false;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let survivors: Vec<usize> = (0..k).filter(|&i| alive_row[i]).collect();
    let mut index = vec![usize::MAX; k];
    for (s, &i) in survivors.iter().enumerate() {
        index[i] = s;
    }
    let live: Vec<usize> = (0..cols.len()).filter(|&j| alive_col[j]).collect();
    let mut core = IntMatrix::zeros(survivors.len(), live.len());
    for (c, &j) in live.iter().enumerate() {
        for (i, x) in &cols[j] {
            debug_assert!(alive_row[*i]);
            core.set(index[*i], c, x.clone());
        }
    }
    (eliminations, survivors, core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(d: &[i64]) -> SparseVec {
        d.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(i, x)| (i, BigInt::from(*x)))
            .collect()
    }

    #[test]
    fn quotient_z2_by_diag() {
        // Z^2 / <(2,0),(0,3)> = Z/6
        let q = Subquotient::new(
            2,
            vec![sv(&[1, 0]), sv(&[0, 1])],
            vec![sv(&[2, 0]), sv(&[0, 3])],
        )
        .unwrap();
        assert_eq!(q.group(), &FgAbelianGroup::cyclic(6));
        let g = q.representative(0);
        let c = q.coords(&g).unwrap();
        assert_eq!(c, vec![BigInt::one()]);
        // (1,1) generates, so its coordinate is a unit mod 6
        let c = q.coords(&sv(&[1, 1])).unwrap();
        assert!(c[0] == BigInt::from(1) || c[0] == BigInt::from(5));
        assert!(q.is_zero_class(&sv(&[4, 3])));
    }

    #[test]
    fn free_and_torsion() {
        let q = Subquotient::new(
            3,
            (0..3).map(|i| vec![(i, BigInt::one())]),
            vec![sv(&[2, 0, 0])],
        )
        .unwrap();
        assert_eq!(q.group().to_string(), "Z^2 + Z/2");
        for i in 0..3 {
            let r = q.representative(i);
            let mut e = vec![BigInt::zero(); 3];
            e[i] = BigInt::one();
            assert_eq!(q.coords(&r).unwrap(), e);
        }
    }

    #[test]
    fn kernel_mod_target() {
        // Z -> Z/3 by x ↦ x: kernel is 3Z.
        let m = SparseMatrix {
            rows: 1,
            columns: vec![sv(&[1])],
        };
        let k = kernel_generators(&m, &[BigInt::zero()], &[BigInt::from(3)]);
        let ech = Echelon::of_vectors(1, k);
        assert_eq!(ech.basis[0].vec, sv(&[3]));
        let x = solve(&m, &[BigInt::from(3)], &sv(&[2])).unwrap();
        let v = sparse_get(&x, 0).unwrap().mod_floor_big(&BigInt::from(3));
        assert_eq!(v, BigInt::from(2));
    }
}
