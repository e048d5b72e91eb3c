//! (Co)homology of groups with operators from the Γ-equivariant bar complexes,
//! together with Tate groups, Γ-derivations, cup products, long exact sequences
//! and universal-coefficient checks.

mod cup;
mod les;

pub use cup::{cup, cup_classes, leibniz_failures, random_cochain, CupTable};
pub use les::{exact_at, les, tate_splice, LesReport, LesRow};

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bar::{chain_complex, cochain_complex, BarComplex, BarOptions, Direction};
use crate::gmod::{Actors, GammaGModule};
use crate::zmod::{
    ext1, hom_group, kernel_generators, moduli_vectors, sparse_from_dense, sparse_to_dense, tensor,
    tor1, FgAbelianGroup, SparseMatrix, Subquotient,
};
use crate::Error;

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyResult {
    pub direction: Direction,
    /// `groups[n]` is the degree-`n` group, `0 ≤ n ≤ max_degree`.
    pub groups: Vec<FgAbelianGroup>,
    /// Rank of the presented (co)chain group in each degree.
    pub complex_sizes: Vec<usize>,
    pub normalized: bool,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

/// A complex together with its (co)homology subquotients, for callers that need
/// class representatives.
#[derive(Clone, Debug)]
pub struct WithClasses {
    pub complex: BarComplex,
    pub classes: Vec<Subquotient>,
}

impl WithClasses {
    pub fn new(complex: BarComplex) -> Result<Self, Error> {
        let classes = (0..=complex.max_degree())
            .into_par_iter()
            .map(|n| complex.homology(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { complex, classes })
    }

    /// Dense cocycle (or cycle) representing canonical generator `i` in degree `n`.
    pub fn representative(&self, n: usize, i: usize) -> Vec<BigInt> {
        sparse_to_dense(
            &self.classes[n].representative(i),
            self.complex.bases[n].dim(),
        )
    }

    /// Canonical class coordinates of a dense (co)cycle in degree `n`.
    pub fn class_of(&self, n: usize, z: &[BigInt]) -> Option<Vec<BigInt>> {
        self.classes[n].coords(&sparse_from_dense(z))
    }

    fn result(&self, started: Instant) -> CohomologyResult {
        CohomologyResult {
            direction: self.complex.direction,
            groups: self.classes.iter().map(|c| c.group().clone()).collect(),
            complex_sizes: self.complex.bases[..self.classes.len()]
                .iter()
                .map(|b| b.dim())
                .collect(),
            normalized: self.complex.normalized,
            elapsed_ms: started.elapsed().as_millis(),
        }
    }
}

/// `H^n_Γ(G, A)` for `0 ≤ n ≤ max_degree`.
pub fn cohomology(
    module: &GammaGModule,
    max_degree: usize,
    opts: &BarOptions,
) -> Result<CohomologyResult, Error> {
    let started = Instant::now();
    let w = WithClasses::new(cochain_complex(module, max_degree, opts)?)?;
    Ok(w.result(started))
}

/// `H_n^Γ(G, A)` for `0 ≤ n ≤ max_degree`.
pub fn homology(
    module: &GammaGModule,
    max_degree: usize,
    opts: &BarOptions,
) -> Result<CohomologyResult, Error> {
    let started = Instant::now();
    let w = WithClasses::new(chain_complex(module, max_degree, opts)?)?;
    Ok(w.result(started))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TateConvention {
    /// `Ĥ^0 = Ker N*`, `Ĥ^{-1} = Coker N*`.
    #[default]
    Paper,
    /// `Ĥ^0 = Coker N*`, `Ĥ^{-1} = Ker N*`.
    Classical,
}

#[derive(Clone, Debug, Serialize)]
pub struct TateResult {
    pub convention: TateConvention,
    /// `(n, Ĥ^n)` for `lo ≤ n ≤ hi`.
    pub groups: Vec<(i64, FgAbelianGroup)>,
}

impl TateResult {
    pub fn get(&self, n: i64) -> Option<&FgAbelianGroup> {
        self.groups.iter().find(|(k, _)| *k == n).map(|(_, g)| g)
    }
}

/// `Ker N*` and `Coker N*` for `N*: A_{G⋊Γ} -> A^{G⋊Γ}`, in the canonical
/// coordinates of those groups.
pub fn norm_kernel_cokernel(
    module: &GammaGModule,
) -> Result<(Subquotient, Subquotient, crate::gmod::NormMap), Error> {
    let nm = module.norm_map();
    let induced = nm.induced.clone().ok_or_else(|| {
        Error::Precondition(
            "Γ does not act trivially on N_G(A); equivariant Tate groups are undefined".into(),
        )
    })?;
    let sparse = induced.to_sparse_columns();
    let ker = Subquotient::homology(None, Some(&sparse), nm.source.moduli(), nm.target.moduli())?;
    let coker = Subquotient::homology(Some(&sparse), None, nm.target.moduli(), &[])?;
    Ok((ker, coker, nm))
}

/// Equivariant Tate groups `Ĥ^n_Γ(G, A)` for `lo ≤ n ≤ hi`.
pub fn tate(
    module: &GammaGModule,
    lo: i64,
    hi: i64,
    convention: TateConvention,
    opts: &BarOptions,
) -> Result<TateResult, Error> {
    if lo > hi {
        return Err(Error::Precondition(format!(
            "empty degree range {lo}..{hi}"
        )));
    }
    let (ker, coker, _) = norm_kernel_cokernel(module)?;
    let co = (hi >= 1)
        .then(|| cohomology(module, hi as usize, opts))
        .transpose()?;
    let ho = (lo <= -2)
        .then(|| homology(module, (-lo - 1) as usize, opts))
        .transpose()?;
    let (zero, minus_one) = match convention {
        TateConvention::Paper => (ker.group().clone(), coker.group().clone()),
        TateConvention::Classical => (coker.group().clone(), ker.group().clone()),
    };
    let groups = (lo..=hi)
        .map(|n| {
            let g = match n {
                0 => zero.clone(),
                -1 => minus_one.clone(),
                n if n >= 1 => co.as_ref().unwrap().groups[n as usize].clone(),
                n => ho.as_ref().unwrap().groups[(-n - 1) as usize].clone(),
            };
            (n, g)
        })
        .collect();
    Ok(TateResult { convention, groups })
}

#[derive(Clone, Debug)]
pub struct Derivations {
    /// `Der_Γ(G, A)` inside `⊕_{x∈G} A` (coordinate `x * rank + i`).
    pub derivations: Subquotient,
    /// Principal derivations `x ↦ x·a - a`, `a ∈ A^Γ`.
    pub principal: Subquotient,
    pub h1: Subquotient,
}

/// Γ-derivations by solving `f(gh) = f(g) + g·f(h)`, `f(^σg) = ^σf(g)` directly.
pub fn derivations(module: &GammaGModule) -> Result<Derivations, Error> {
    let action = module.action();
    let g = action.group();
    let gamma = action.gamma();
    let r = module.rank();
    let n = g.order();
    let dim = n * r;
    let here: Vec<BigInt> = (0..n)
        .flat_map(|_| module.moduli().iter().cloned())
        .collect();
    let mut trips = Vec::new();
    let mut eq = 0;
    let mut moduli = Vec::new();
    let add = |trips: &mut Vec<(usize, usize, BigInt)>,
               row: usize,
               x: usize,
               m: &crate::zmod::IntMatrix,
               sign: i64| {
        for i in 0..r {
            for j in 0..r {
                let v = m.get(i, j);
                if !v.is_zero() {
                    trips.push((row + i, x * r + j, v * sign));
                }
            }
        }
    };
    let id = crate::zmod::IntMatrix::identity(r);
    for a in g.elements() {
        for b in g.elements() {
            add(&mut trips, eq, g.mul(a, b), &id, 1);
            add(&mut trips, eq, a, &id, -1);
            add(&mut trips, eq, b, module.g_matrix(a), -1);
            eq += r;
            moduli.extend(module.moduli().iter().cloned());
        }
    }
    for s in gamma.generators() {
        for x in g.elements() {
            add(&mut trips, eq, action.act(s, x), &id, 1);
            add(&mut trips, eq, x, module.gamma_matrix(s), -1);
            eq += r;
            moduli.extend(module.moduli().iter().cloned());
        }
    }
    let system = SparseMatrix::from_triplets(eq, dim, trips);
    let source: Vec<BigInt> = g
        .elements()
        .flat_map(|_| module.moduli().iter().cloned())
        .collect();
    let der_gens = kernel_generators(&system, &source, &moduli);
    let fixed = module.invariants(Actors::Gamma);
    let principal_gens: Vec<_> = (0..fixed.group().rank())
        .map(|i| {
            let a = sparse_to_dense(&fixed.representative(i), r);
            let mut v = Vec::with_capacity(dim);
            for x in g.elements() {
                let ga = module.g_matrix(x).mul_vec(&a);
                v.extend(ga.iter().zip(&a).map(|(p, q)| p - q));
            }
            sparse_from_dense(&v)
        })
        .collect();
    let relations = moduli_vectors(&here);
    let derivations = Subquotient::new(dim, der_gens.clone(), relations.clone())?;
    let mut principal_all = principal_gens.clone();
    principal_all.extend(relations.iter().cloned());
    let principal = Subquotient::new(dim, principal_all.clone(), relations)?;
    let h1 = Subquotient::new(dim, der_gens, principal_all)?;
    Ok(Derivations {
        derivations,
        principal,
        h1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UctRow {
    pub degree: usize,
    pub cohomology: FgAbelianGroup,
    /// `Hom(H_n, A) ⊕ Ext(H_{n-1}, A)`.
    pub cohomology_formula: FgAbelianGroup,
    pub homology: FgAbelianGroup,
    /// `H_n ⊗ A ⊕ Tor(H_{n-1}, A)`.
    pub homology_formula: FgAbelianGroup,
}

impl UctRow {
    pub fn holds(&self) -> bool {
        self.cohomology == self.cohomology_formula && self.homology == self.homology_formula
    }
}

/// Universal coefficients against integral homology for trivial-action coefficients.
pub fn uct_check(
    module: &GammaGModule,
    max_degree: usize,
    opts: &BarOptions,
) -> Result<Vec<UctRow>, Error> {
    if !module.g_acts_trivially() || !module.gamma_acts_trivially() {
        return Err(Error::Precondition(
            "universal coefficients need trivial actions on A".into(),
        ));
    }
    let a = module.carrier();
    let z = GammaGModule::trivial_cyclic(module.action().clone(), 0);
    let hz = homology(&z, max_degree, opts)?;
    let co = cohomology(module, max_degree, opts)?;
    let ho = homology(module, max_degree, opts)?;
    Ok((0..=max_degree)
        .map(|n| {
            let prev = if n == 0 {
                FgAbelianGroup::trivial()
            } else {
                hz.groups[n - 1].clone()
            };
            UctRow {
                degree: n,
                cohomology: co.groups[n].clone(),
                cohomology_formula: hom_group(&hz.groups[n], &a).direct_sum(&ext1(&prev, &a)),
                homology: ho.groups[n].clone(),
                homology_formula: tensor(&hz.groups[n], &a).direct_sum(&tor1(&prev, &a)),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests;
