//! Γ-equivariant extensions `0 -> A -> B -> G -> 1` with a Γ-equivariant
//! set-level section, built from factor sets and compared by exhaustive search.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bar::{cochain_complex, BarComplex, BarOptions};
use crate::cohom::{cohomology, WithClasses};
use crate::eqgrp::{gamma_commutator, is_gamma_perfect, Subgroup};
use crate::gmod::{enumerate_elements, GammaGModule};
use crate::grp::{FiniteGroup, GammaAction};
use crate::zmod::{reduce_coords, sparse_to_dense, FgAbelianGroup, Subquotient};
use crate::Error;

/// Default bound on `|A|^|G|` for the equivalence search.
pub const EQUIVALENCE_CAP: u128 = 1 << 20;

/// Size limits for [`classify`].
#[derive(Clone, Copy, Debug)]
pub struct ClassifyCaps {
    pub max_group: usize,
    pub max_module: usize,
    pub max_gamma: usize,
}

impl Default for ClassifyCaps {
    fn default() -> Self {
        Self {
            max_group: 4,
            max_module: 4,
            max_gamma: 2,
        }
    }
}

/// A factor set as a table `f[x][y] ∈ A` (reduced coordinates).
pub type FactorSet = Vec<Vec<Vec<BigInt>>>;

/// Normalized Γ-equivariant 2-cocycles `Z^2`, as a subgroup of the normalized
/// cochain group `C^2`.
#[derive(Clone, Debug)]
pub struct CocycleGroup {
    pub complex: BarComplex,
    pub cocycles: Subquotient,
}

impl CocycleGroup {
    pub fn group(&self) -> &FgAbelianGroup {
        self.cocycles.group()
    }

    /// Cochain coordinates of canonical generator `i`.
    pub fn basis_element(&self, i: usize) -> Vec<BigInt> {
        sparse_to_dense(
            &self.cocycles.representative(i),
            self.complex.bases[2].dim(),
        )
    }

    /// Every cocycle, as cochain coordinates.
    pub fn all(&self) -> Result<Vec<Vec<BigInt>>, Error> {
        enumerate_elements(self.group().moduli().as_slice()).map(|cs| {
            cs.iter()
                .map(|c| {
                    let mut v =
                        sparse_to_dense(&self.cocycles.lift(c), self.complex.bases[2].dim());
                    reduce_coords(&mut v, self.complex.bases[2].moduli());
                    v
                })
                .collect()
        })
    }

    pub fn factor_set(&self, f: &[BigInt]) -> Result<FactorSet, Error> {
        factor_set(&self.complex, f)
    }
}

/// Values of a degree-2 cochain on all of `G^2`.
pub fn factor_set(complex: &BarComplex, f: &[BigInt]) -> Result<FactorSet, Error> {
    let g = complex.module().action().group();
    g.elements()
        .map(|x| {
            g.elements()
                .map(|y| complex.cochain_eval(f, &[x, y]))
                .collect()
        })
        .collect()
}

/// `Z^2_Γ(G, A)`; with `normalized` the cochains vanish on tuples containing `e`.
pub fn two_cocycles(
    module: &GammaGModule,
    normalized: bool,
    opts: &BarOptions,
) -> Result<CocycleGroup, Error> {
    if !module.is_finite() {
        return Err(Error::Precondition(
            "factor sets need a finite coefficient module".into(),
        ));
    }
    let opts = BarOptions {
        normalized,
        ..*opts
    };
    let complex = cochain_complex(module, 2, &opts)?;
    let cocycles = Subquotient::homology(
        None,
        Some(&complex.differentials[2]),
        complex.bases[2].moduli(),
        complex.bases[3].moduli(),
    )?;
    Ok(CocycleGroup { complex, cocycles })
}

/// `B = A × G` with `(a,x)(a',x') = (a + x·a' + f(x,x'), xx')`, stored at index
/// `a_index + |A|·x`, and `^σ(a,x) = (^σa, ^σx)`.
#[derive(Clone, Debug)]
pub struct GammaExtension {
    pub module: GammaGModule,
    pub factor_set: FactorSet,
    pub elements_a: Vec<Vec<BigInt>>,
    pub total: Arc<FiniteGroup>,
    pub total_action: GammaAction,
    /// `α: A -> B` on element indices.
    pub inclusion: Vec<usize>,
    /// `β: B -> G`.
    pub projection: Vec<usize>,
    /// `x ↦ (0, x)`.
    pub section: Vec<usize>,
}

fn index_of(elements: &[Vec<BigInt>], moduli: &[BigInt], v: &[BigInt]) -> usize {
    // lexicographic enumeration: mixed radix with the last coordinate fastest
    let mut idx = 0usize;
    for (x, m) in v.iter().zip(moduli) {
        idx = idx * m.to_usize().unwrap() + x.to_usize().unwrap();
    }
    debug_assert_eq!(elements[idx], v);
    idx
}

fn add(module: &GammaGModule, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    module.reduce_vec(&mut v);
    v
}

/// Checks that `f` is a normalized Γ-equivariant 2-cocycle.
pub fn check_factor_set(module: &GammaGModule, f: &FactorSet) -> Result<(), Error> {
    let action = module.action();
    let g = action.group();
    let n = g.order();
    if f.len() != n || f.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("factor set has the wrong shape".into()));
    }
    let zero = vec![BigInt::zero(); module.rank()];
    let red = |v: &[BigInt]| {
        let mut v = v.to_vec();
        module.reduce_vec(&mut v);
        v
    };
    for x in g.elements() {
        if red(&f[0][x]) != zero || red(&f[x][0]) != zero {
            return Err(Error::Precondition(format!(
                "factor set is not normalized at {}",
                g.name(x)
            )));
        }
    }
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                let lhs = add(module, &module.apply_g(x, &f[y][z]), &f[x][g.mul(y, z)]);
                let rhs = add(module, &f[g.mul(x, y)][z], &f[x][y]);
                if lhs != rhs {
                    return Err(Error::Precondition(format!(
                        "cocycle identity fails at ({}, {}, {})",
                        g.name(x),
                        g.name(y),
                        g.name(z)
                    )));
                }
            }
            for s in action.gamma().elements() {
                if red(&f[action.act(s, x)][action.act(s, y)]) != module.apply_gamma(s, &f[x][y]) {
                    return Err(Error::Precondition(format!(
                        "factor set is not Γ-equivariant at ({}, {})",
                        g.name(x),
                        g.name(y)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Extension of `G` by `A` with factor set `f`; the section `x ↦ (0,x)` is Γ-equivariant.
pub fn extension_from_cocycle(
    module: &GammaGModule,
    f: &FactorSet,
) -> Result<GammaExtension, Error> {
    check_factor_set(module, f)?;
    let action = module.action();
    let g = action.group();
    let elements_a = module.elements()?;
    let na = elements_a.len();
    let moduli = module.moduli();
    let f: FactorSet = f
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let mut v = v.clone();
                    module.reduce_vec(&mut v);
                    v
                })
                .collect()
        })
        .collect();
    let order = na * g.order();
    let split = |b: usize| (b % na, b / na);
    let table: Vec<Vec<usize>> = (0..order)
        .map(|b1| {
            let (a1, x1) = split(b1);
            (0..order)
                .map(|b2| {
                    let (a2, x2) = split(b2);
                    let xa = module.apply_g(x1, &elements_a[a2]);
                    let a = add(module, &add(module, &elements_a[a1], &xa), &f[x1][x2]);
                    index_of(&elements_a, moduli, &a) + na * g.mul(x1, x2)
                })
                .collect()
        })
        .collect();
    let names = (0..order)
        .map(|b| {
            let (a, x) = split(b);
            let coords: Vec<String> = elements_a[a].iter().map(|c| c.to_string()).collect();
            format!("({},{})", coords.join(" "), g.name(x))
        })
        .collect();
    let total = Arc::new(FiniteGroup::from_table(&table, Some(names))?);
    let images: Vec<(usize, Vec<usize>)> = action
        .gamma()
        .generators()
        .into_iter()
        .map(|s| {
            let perm = (0..order)
                .map(|b| {
                    let (a, x) = split(b);
                    index_of(&elements_a, moduli, &module.apply_gamma(s, &elements_a[a]))
                        + na * action.act(s, x)
                })
                .collect();
            (s, perm)
        })
        .collect();
    let total_action = GammaAction::new(action.gamma().clone(), total.clone(), &images)?;
    let ext = GammaExtension {
        module: module.clone(),
        factor_set: f,
        inclusion: (0..na).collect(),
        projection: (0..order).map(|b| b / na).collect(),
        section: g.elements().map(|x| na * x).collect(),
        elements_a,
        total,
        total_action,
    };
    ext.verify()?;
    Ok(ext)
}

impl GammaExtension {
    pub fn base(&self) -> &GammaAction {
        self.module.action()
    }

    /// Exactness, conjugation action, Γ-equivariance of every map and of the section.
    pub fn verify(&self) -> Result<(), Error> {
        let b = &self.total;
        let g = self.base().group();
        let gamma = self.base().gamma();
        let na = self.elements_a.len();
        let fail = |m: &str| Err(Error::CheckFailed(format!("extension invariant: {m}")));
        for x in b.elements() {
            for y in b.elements() {
                if self.projection[b.mul(x, y)] != g.mul(self.projection[x], self.projection[y]) {
                    return fail("β is not a homomorphism");
                }
            }
        }
        let kernel: Vec<usize> = b.elements().filter(|&x| self.projection[x] == 0).collect();
        if kernel != self.inclusion {
            return fail("Ker β ≠ Im α");
        }
        for a in 0..na {
            for c in 0..na {
                let sum = add(&self.module, &self.elements_a[a], &self.elements_a[c]);
                if b.mul(self.inclusion[a], self.inclusion[c])
                    != index_of(&self.elements_a, self.module.moduli(), &sum)
                {
                    return fail("α is not a homomorphism");
                }
            }
        }
        for x in g.elements() {
            let s = self.section[x];
            if self.projection[s] != x {
                return fail("β∘s ≠ id");
            }
            for a in 0..na {
                let conj = b.mul(b.mul(s, self.inclusion[a]), b.inv(s));
                let expect = index_of(
                    &self.elements_a,
                    self.module.moduli(),
                    &self.module.apply_g(x, &self.elements_a[a]),
                );
                if conj != self.inclusion[expect] {
                    return fail("conjugation does not induce the module action");
                }
            }
        }
        for sgm in gamma.elements() {
            for x in g.elements() {
                if self.total_action.act(sgm, self.section[x])
                    != self.section[self.base().act(sgm, x)]
                {
                    return fail("section is not Γ-equivariant");
                }
            }
            for y in b.elements() {
                if self.projection[self.total_action.act(sgm, y)]
                    != self.base().act(sgm, self.projection[y])
                {
                    return fail("β is not Γ-equivariant");
                }
            }
        }
        Ok(())
    }

    /// `α(A) ⊆ Z(B)` and Γ acts trivially on `A`.
    pub fn is_central(&self) -> bool {
        let b = &self.total;
        self.module.gamma_acts_trivially()
            && self
                .inclusion
                .iter()
                .all(|&a| b.elements().all(|y| b.mul(a, y) == b.mul(y, a)))
    }
}

fn same_data(e: &GammaExtension, f: &GammaExtension) -> bool {
    e.module.moduli() == f.module.moduli()
        && **e.base().group() == **f.base().group()
        && **e.base().gamma() == **f.base().gamma()
        && e.total.order() == f.total.order()
}

/// Whether there is a Γ-equivariant homomorphism `B -> B'` inducing the identity
/// on `A` and `G`. Such maps are `(a, x) ↦ (a + h(x), x)`; all `h: G -> A` are tried.
pub fn are_equivalent(e: &GammaExtension, f: &GammaExtension, cap: u128) -> Result<bool, Error> {
    if !same_data(e, f) {
        return Err(Error::Precondition(
            "extensions of different (G, Γ, A)".into(),
        ));
    }
    let g = e.base().group();
    let na = e.elements_a.len();
    let space = (na as u128)
        .checked_pow(g.order() as u32)
        .unwrap_or(u128::MAX);
    if space > cap {
        return Err(Error::CapExceeded {
            what: "equivalence search |A|^|G|".into(),
            needed: space,
            cap,
        });
    }
    let order = e.total.order();
    let moduli = e.module.moduli();
    let mut h = vec![0usize; g.order()];
    let gamma_gens = e.base().gamma().generators();
    loop {
        let phi: Vec<usize> = (0..order)
            .map(|b| {
                let (a, x) = (b % na, b / na);
                let sum = add(&e.module, &e.elements_a[a], &e.elements_a[h[x]]);
                index_of(&e.elements_a, moduli, &sum) + na * x
            })
            .collect();
        let hom = (0..order)
            .all(|x| (0..order).all(|y| phi[e.total.mul(x, y)] == f.total.mul(phi[x], phi[y])));
        let equivariant = hom
            && gamma_gens.iter().all(|&s| {
                (0..order).all(|b| phi[e.total_action.act(s, b)] == f.total_action.act(s, phi[b]))
            });
        if equivariant {
            return Ok(true);
        }
        // next h in mixed radix
        let mut i = 0;
        loop {
            if i == h.len() {
                return Ok(false);
            }
            h[i] += 1;
            if h[i] < na {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

/// Baer sum, realized as the extension of the sum of the factor sets.
pub fn baer_sum(e: &GammaExtension, f: &GammaExtension) -> Result<GammaExtension, Error> {
    if !same_data(e, f) {
        return Err(Error::Precondition(
            "extensions of different (G, Γ, A)".into(),
        ));
    }
    let sum: FactorSet = e
        .factor_set
        .iter()
        .zip(&f.factor_set)
        .map(|(r1, r2)| {
            r1.iter()
                .zip(r2)
                .map(|(a, b)| add(&e.module, a, b))
                .collect()
        })
        .collect();
    extension_from_cocycle(&e.module, &sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub h2: FgAbelianGroup,
    pub cocycle_group: FgAbelianGroup,
    /// One extension per cohomology class; group orders of the total groups.
    pub class_total_orders: Vec<usize>,
    pub pairwise_inequivalent: bool,
    /// Every cocycle's extension is equivalent to exactly the representative of its class.
    pub exhaustive: Option<bool>,
    pub count_matches: bool,
}

impl Classification {
    pub fn holds(&self) -> bool {
        self.pairwise_inequivalent && self.count_matches && self.exhaustive != Some(false)
    }
}

/// Extension classes from normalized cocycles modulo coboundaries, checked to be
/// pairwise inequivalent and counted against `|H^2_Γ(G, A)|`.
pub fn classify(
    module: &GammaGModule,
    caps: &ClassifyCaps,
    opts: &BarOptions,
) -> Result<Classification, Error> {
    let action = module.action();
    let a_order = module
        .carrier()
        .order()
        .ok_or_else(|| Error::Precondition("classification needs a finite module".into()))?;
    let checks = [
        ("|G|", action.group().order(), caps.max_group),
        (
            "|A|",
            a_order.to_usize().unwrap_or(usize::MAX),
            caps.max_module,
        ),
        ("|Γ|", action.gamma().order(), caps.max_gamma),
    ];
    for (what, v, cap) in checks {
        if v > cap {
            return Err(Error::CapExceeded {
                what: format!("classification {what}"),
                needed: v as u128,
                cap: cap as u128,
            });
        }
    }
    let h2 = cohomology(module, 2, opts)?.groups[2].clone();
    let norm = BarOptions {
        normalized: true,
        ..*opts
    };
    let w = WithClasses::new(cochain_complex(module, 2, &norm)?)?;
    let classes = &w.classes[2];
    let class_coords = enumerate_elements(&classes.group().moduli())?;
    let reps: Vec<GammaExtension> = class_coords
        .iter()
        .map(|c| {
            let f = sparse_to_dense(&classes.lift(c), w.complex.bases[2].dim());
            extension_from_cocycle(module, &factor_set(&w.complex, &f)?)
        })
        .collect::<Result<_, _>>()?;
    let mut pairwise_inequivalent = true;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if are_equivalent(&reps[i], &reps[j], EQUIVALENCE_CAP)? {
                pairwise_inequivalent = false;
            }
        }
    }
    let z2 = two_cocycles(module, true, opts)?;
    let exhaustive = if z2.group().order().is_some_and(|o| o <= BigInt::from(256)) {
        let mut ok = true;
        for f in z2.all()? {
            let class = classes
                .coords(&crate::zmod::sparse_from_dense(&f))
                .expect("cocycle");
            let ext = extension_from_cocycle(module, &z2.factor_set(&f)?)?;
            let own = class_coords
                .iter()
                .position(|c| *c == class)
                .expect("enumerated class");
            for (k, r) in reps.iter().enumerate() {
                if are_equivalent(&ext, r, EQUIVALENCE_CAP)? != (k == own) {
                    ok = false;
                }
            }
        }
        Some(ok)
    } else {
        None
    };
    let count_matches = h2.order() == Some(BigInt::from(reps.len()));
    Ok(Classification {
        cocycle_group: z2.group().clone(),
        h2,
        class_total_orders: reps.iter().map(|r| r.total.order()).collect(),
        pairwise_inequivalent,
        exhaustive,
        count_matches,
    })
}

#[derive(Clone, Debug)]
pub struct Subextension {
    pub subgroup: Subgroup,
    pub action: GammaAction,
    /// Restricted projection, indexed like `subgroup.elements()`.
    pub projection: Vec<usize>,
    /// A Γ-equivariant set-level section `G -> X'` (indices into `subgroup.elements()`).
    pub section: Vec<usize>,
    pub gamma_perfect: bool,
    pub surjective: bool,
}

/// `X' = [X,X]_Γ` for a central extension of a Γ-perfect group.
pub fn commutator_subextension(e: &GammaExtension) -> Result<Subextension, Error> {
    if !e.is_central() {
        return Err(Error::Precondition("extension is not central".into()));
    }
    if !is_gamma_perfect(e.base()) {
        return Err(Error::Precondition("base group is not Γ-perfect".into()));
    }
    let subgroup = gamma_commutator(&e.total_action, None)?;
    let sub = Arc::new(subgroup.as_group());
    let pos = |x: usize| {
        subgroup
            .elements()
            .binary_search(&x)
            .expect("Γ-stable subgroup")
    };
    let images: Vec<(usize, Vec<usize>)> = e
        .base()
        .gamma()
        .generators()
        .into_iter()
        .map(|s| {
            (
                s,
                subgroup
                    .elements()
                    .iter()
                    .map(|&x| pos(e.total_action.act(s, x)))
                    .collect(),
            )
        })
        .collect();
    let action = GammaAction::new(e.base().gamma().clone(), sub.clone(), &images)?;
    let projection: Vec<usize> = subgroup
        .elements()
        .iter()
        .map(|&x| e.projection[x])
        .collect();
    let g = e.base().group();
    let mut hit = vec![false; g.order()];
    for &p in &projection {
        hit[p] = true;
    }
    let surjective = hit.iter().all(|&h| h);
    let gamma = e.base().gamma();
    let mut section = vec![usize::MAX; g.order()];
    for x in g.elements() {
        if section[x] != usize::MAX {
            continue;
        }
        let stab: Vec<usize> = gamma
            .elements()
            .filter(|&s| e.base().act(s, x) == x)
            .collect();
        let y = (0..sub.order())
            .find(|&y| projection[y] == x && stab.iter().all(|&s| action.act(s, y) == y))
            .ok_or_else(|| {
                Error::CheckFailed(format!("no Γ-equivariant section value at {}", g.name(x)))
            })?;
        for s in gamma.elements() {
            let gx = e.base().act(s, x);
            if section[gx] == usize::MAX {
                section[gx] = action.act(s, y);
            }
        }
    }
    Ok(Subextension {
        gamma_perfect: is_gamma_perfect(&action),
        subgroup,
        action,
        projection,
        section,
        surjective,
    })
}

/// A group with operators has a universal central Γ-extension iff it is Γ-perfect.
pub fn has_universal_central_extension(action: &GammaAction) -> bool {
    is_gamma_perfect(action)
}
