//! Γ-equivariant G-modules (equivalently `G⋊Γ`-modules) on a fixed coordinate
//! presentation `Z/m_1 ⊕ ... ⊕ Z/m_r` (modulus 0 meaning a copy of `Z`).

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::grp::{FiniteGroup, GammaAction};
use crate::zmod::{
    kernel_generators, moduli_vectors, solve, sparse_from_dense, sparse_to_dense, FgAbelianGroup,
    IntMatrix, ModFloor, SparseMatrix, Subquotient,
};
use crate::Error;

/// Above this many `(σ, x)` pairs condition (1) is only checked on generators.
pub const EXHAUSTIVE_PAIR_CAP: usize = 10_000;

/// Cap on the number of elements enumerated when searching for sections.
pub const ENUMERATION_CAP: usize = 100_000;

/// Which actors an invariant or coinvariant computation ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Actors {
    Gamma,
    G,
    Both,
}

#[derive(Clone, Debug)]
pub struct GammaGModule {
    action: GammaAction,
    moduli: Vec<BigInt>,
    g_act: Vec<IntMatrix>,
    gamma_act: Vec<IntMatrix>,
}

/// Reduces every row of `m` modulo the presentation.
fn reduced(mut m: IntMatrix, moduli: &[BigInt]) -> IntMatrix {
    m.reduce_rows(moduli);
    m
}

/// Closes generator matrices to a map on all group elements.
fn close_representation(
    group: &FiniteGroup,
    gens: &[(usize, IntMatrix)],
    moduli: &[BigInt],
    who: &str,
) -> Result<Vec<IntMatrix>, Error> {
    let r = moduli.len();
    let mut rep: Vec<Option<IntMatrix>> = vec![None; group.order()];
    rep[0] = Some(reduced(IntMatrix::identity(r), moduli));
    let gens: Vec<(usize, IntMatrix)> = gens
        .iter()
        .map(|(s, m)| (*s, reduced(m.clone(), moduli)))
        .collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        let ma = rep[a].clone().unwrap();
        for (s, ms) in &gens {
            let p = group.mul(a, *s);
            let prod = reduced(&ma * ms, moduli);
            match &rep[p] {
                None => {
                    rep[p] = Some(prod);
                    queue.push_back(p);
                }
                Some(existing) if *existing != prod => {
                    return Err(Error::InvalidModule(format!(
                        "{who} action violates the homomorphism law at {}",
                        group.name(p)
                    )));
                }
                _ => {}
            }
        }
    }
    if let Some(missing) = rep.iter().position(Option::is_none) {
        return Err(Error::InvalidModule(format!(
            "{who} action matrices given on elements that do not generate (missing {})",
            group.name(missing)
        )));
    }
    Ok(rep.into_iter().map(Option::unwrap).collect())
}

impl GammaGModule {
    /// Validates a module from action matrices on (generating) elements of `G` and `Γ`.
    /// Unlisted generating sets default to the trivial action.
    pub fn new(
        action: GammaAction,
        moduli: Vec<BigInt>,
        g_gens: &[(usize, IntMatrix)],
        gamma_gens: &[(usize, IntMatrix)],
    ) -> Result<Self, Error> {
        let r = moduli.len();
        if moduli.iter().any(|m| m < &BigInt::zero()) {
            return Err(Error::InvalidModule("negative modulus".into()));
        }
        for (who, gens, grp) in [
            ("G", g_gens, action.group()),
            ("Γ", gamma_gens, action.gamma()),
        ] {
            for (s, m) in gens {
                if *s >= grp.order() {
                    return Err(Error::InvalidModule(format!(
                        "no {who} element with index {s}"
                    )));
                }
                if m.rows() != r || m.cols() != r {
                    return Err(Error::InvalidModule(format!(
                        "{who} matrix for {} is {}x{}, carrier has rank {r}",
                        grp.name(*s),
                        m.rows(),
                        m.cols()
                    )));
                }
                if !respects_presentation(m, &moduli) {
                    return Err(Error::InvalidModule(format!(
                        "{who} matrix for {} is not well defined on the carrier presentation",
                        grp.name(*s)
                    )));
                }
            }
        }
        let g_default: Vec<(usize, IntMatrix)>;
        let g_gens = if g_gens.is_empty() {
            g_default = action
                .group()
                .generators()
                .into_iter()
                .map(|x| (x, IntMatrix::identity(r)))
                .collect();
            &g_default[..]
        } else {
            g_gens
        };
        let gm_default: Vec<(usize, IntMatrix)>;
        let gamma_gens = if gamma_gens.is_empty() {
            gm_default = action
                .gamma()
                .generators()
                .into_iter()
                .map(|x| (x, IntMatrix::identity(r)))
                .collect();
            &gm_default[..]
        } else {
            gamma_gens
        };
        let g_act = close_representation(action.group(), g_gens, &moduli, "G")?;
        let gamma_act = close_representation(action.gamma(), gamma_gens, &moduli, "Γ")?;
        let module = Self {
            action,
            moduli,
            g_act,
            gamma_act,
        };
        module.validate()?;
        Ok(module)
    }

    /// `A` with both actions trivial.
    pub fn trivial(action: GammaAction, moduli: Vec<BigInt>) -> Self {
        let r = moduli.len();
        let id = IntMatrix::identity(r);
        Self {
            g_act: vec![id.clone(); action.group().order()],
            gamma_act: vec![id; action.gamma().order()],
            action,
            moduli,
        }
    }

    /// Trivial-action `Z`, `Z/n` shorthand (`n = 0` for `Z`).
    pub fn trivial_cyclic(action: GammaAction, n: u64) -> Self {
        Self::trivial(action, vec![BigInt::from(n)])
    }

    fn validate(&self) -> Result<(), Error> {
        let g = self.action.group();
        let gamma = self.action.gamma();
        let id = IntMatrix::identity(self.rank());
        for (who, grp, rep) in [("G", g, &self.g_act), ("Γ", gamma, &self.gamma_act)] {
            for x in grp.elements() {
                let prod = self.reduce(&(&rep[x] * &rep[grp.inv(x)]));
                if prod != self.reduce(&id) {
                    return Err(Error::InvalidModule(format!(
                        "{who} element {} does not act by an automorphism",
                        grp.name(x)
                    )));
                }
            }
            if grp.order() * grp.order() <= EXHAUSTIVE_PAIR_CAP {
                for a in grp.elements() {
                    for b in grp.elements() {
                        let lhs = &rep[grp.mul(a, b)];
                        let rhs = self.reduce(&(&rep[a] * &rep[b]));
                        if *lhs != rhs {
                            return Err(Error::InvalidModule(format!(
                                "{who} action violates the homomorphism law at ({}, {})",
                                grp.name(a),
                                grp.name(b)
                            )));
                        }
                    }
                }
            }
        }
        // Condition (1): ^σ(^x a) = ^{^σx}(^σ a).
        let pairs: Vec<(usize, usize)> = if g.order() * gamma.order() <= EXHAUSTIVE_PAIR_CAP {
            gamma
                .elements()
                .flat_map(|s| g.elements().map(move |x| (s, x)))
                .collect()
        } else {
            let gg = g.generators();
            gamma
                .generators()
                .into_iter()
                .flat_map(|s| gg.iter().map(move |&x| (s, x)))
                .collect()
        };
        for (s, x) in pairs {
            let lhs = self.reduce(&(&self.gamma_act[s] * &self.g_act[x]));
            let rhs = self.reduce(&(&self.g_act[self.action.act(s, x)] * &self.gamma_act[s]));
            if lhs != rhs {
                return Err(Error::InvalidModule(format!(
                    "compatibility condition fails for (σ, x) = ({}, {})",
                    gamma.name(s),
                    g.name(x)
                )));
            }
        }
        Ok(())
    }

    pub fn action(&self) -> &GammaAction {
        &self.action
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn carrier(&self) -> FgAbelianGroup {
        FgAbelianGroup::from_cyclic_orders(&self.moduli)
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|m| !m.is_zero())
    }

    pub fn g_matrix(&self, x: usize) -> &IntMatrix {
        &self.g_act[x]
    }

    pub fn gamma_matrix(&self, s: usize) -> &IntMatrix {
        &self.gamma_act[s]
    }

    pub fn reduce(&self, m: &IntMatrix) -> IntMatrix {
        reduced(m.clone(), &self.moduli)
    }

    pub fn reduce_vec(&self, v: &mut [BigInt]) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor_big(m);
            }
        }
    }

    /// `^x a` for `x ∈ G`, reduced.
    pub fn apply_g(&self, x: usize, a: &[BigInt]) -> Vec<BigInt> {
        let mut v = self.g_act[x].mul_vec(a);
        self.reduce_vec(&mut v);
        v
    }

    /// `^σ a` for `σ ∈ Γ`, reduced.
    pub fn apply_gamma(&self, s: usize, a: &[BigInt]) -> Vec<BigInt> {
        let mut v = self.gamma_act[s].mul_vec(a);
        self.reduce_vec(&mut v);
        v
    }

    pub fn gamma_acts_trivially(&self) -> bool {
        let id = self.reduce(&IntMatrix::identity(self.rank()));
        self.gamma_act.iter().all(|m| *m == id)
    }

    pub fn g_acts_trivially(&self) -> bool {
        let id = self.reduce(&IntMatrix::identity(self.rank()));
        self.g_act.iter().all(|m| *m == id)
    }

    fn actor_matrices(&self, who: Actors) -> Vec<&IntMatrix> {
        let mut v = Vec::new();
        if matches!(who, Actors::G | Actors::Both) {
            v.extend(
                self.action
                    .group()
                    .generators()
                    .into_iter()
                    .map(|x| &self.g_act[x]),
            );
        }
        if matches!(who, Actors::Gamma | Actors::Both) {
            v.extend(
                self.action
                    .gamma()
                    .generators()
                    .into_iter()
                    .map(|s| &self.gamma_act[s]),
            );
        }
        v
    }

    /// Elements fixed by every matrix in `mats`, as a subgroup of the carrier.
    pub fn fixed_by(&self, mats: &[&IntMatrix]) -> Subquotient {
        let r = self.rank();
        let id = IntMatrix::identity(r);
        let mut trips = Vec::new();
        for (k, m) in mats.iter().enumerate() {
            let d = m.sub(&id);
            for i in 0..r {
                for j in 0..r {
                    let x = d.get(i, j);
                    if !x.is_zero() {
                        trips.push((k * r + i, j, x.clone()));
                    }
                }
            }
        }
        let stacked = SparseMatrix::from_triplets(mats.len() * r, r, trips);
        let tgt: Vec<BigInt> = (0..mats.len())
            .flat_map(|_| self.moduli.iter().cloned())
            .collect();
        let numer = kernel_generators(&stacked, &self.moduli, &tgt);
        Subquotient::new(r, numer, moduli_vectors(&self.moduli))
            .expect("fixed points form a subgroup")
    }

    /// Carrier modulo the span of `^w a - a` over the matrices in `mats`.
    pub fn quotient_by(&self, mats: &[&IntMatrix]) -> Subquotient {
        let r = self.rank();
        let id = IntMatrix::identity(r);
        let mut denom = moduli_vectors(&self.moduli);
        for m in mats {
            let d = m.sub(&id).to_sparse_columns();
            denom.extend(d.columns);
        }
        Subquotient::new(r, (0..r).map(|i| vec![(i, BigInt::one())]), denom)
            .expect("coinvariants of a presented group")
    }

    /// Invariants `A^Γ`, `A^G` or `A^{G⋊Γ}` with the inclusion witness.
    pub fn invariants(&self, who: Actors) -> Subquotient {
        self.fixed_by(&self.actor_matrices(who))
    }

    /// Coinvariants `A_Γ`, `A_G` or `A_{G⋊Γ}` with the projection witness.
    pub fn coinvariants(&self, who: Actors) -> Subquotient {
        self.quotient_by(&self.actor_matrices(who))
    }

    /// `A^S` for a set `S` of Γ-elements.
    pub fn invariants_under_gamma(&self, elems: &[usize]) -> Subquotient {
        let mats: Vec<&IntMatrix> = elems.iter().map(|&s| &self.gamma_act[s]).collect();
        self.fixed_by(&mats)
    }

    /// `A_S` for a set `S` of Γ-elements.
    pub fn coinvariants_under_gamma(&self, elems: &[usize]) -> Subquotient {
        let mats: Vec<&IntMatrix> = elems.iter().map(|&s| &self.gamma_act[s]).collect();
        self.quotient_by(&mats)
    }

    /// Matrix of `N_G(a) = Σ_{s∈G} ^s a`.
    pub fn norm_matrix(&self) -> IntMatrix {
        let mut n = IntMatrix::zeros(self.rank(), self.rank());
        for m in &self.g_act {
            n = n.add(m);
        }
        self.reduce(&n)
    }

    /// Whether Γ acts trivially on `N_G(A)`.
    pub fn tate_precondition(&self) -> bool {
        let n = self.norm_matrix();
        let id = IntMatrix::identity(self.rank());
        self.gamma_act
            .iter()
            .all(|m| self.reduce(&(&m.sub(&id) * &n)).is_zero())
    }

    /// The norm map and the induced map `N*: A_{G⋊Γ} -> A^{G⋊Γ}`.
    pub fn norm_map(&self) -> NormMap {
        let matrix = self.norm_matrix();
        let source = self.coinvariants(Actors::Both);
        let target = self.invariants(Actors::Both);
        let precondition_holds = self.tate_precondition();
        let induced = precondition_holds.then(|| {
            let cols: Vec<Vec<BigInt>> = (0..source.group().rank())
                .map(|i| {
                    let a = sparse_to_dense(&source.representative(i), self.rank());
                    let na = sparse_from_dense(&matrix.mul_vec(&a));
                    target.coords(&na).expect("norm lands in the invariants")
                })
                .collect();
            let rows = target.group().rank();
            let mut m = IntMatrix::zeros(rows, cols.len());
            for (j, c) in cols.iter().enumerate() {
                for (i, x) in c.iter().enumerate() {
                    m.set(i, j, x.clone());
                }
            }
            m
        });
        NormMap {
            matrix,
            source,
            target,
            precondition_holds,
            induced,
        }
    }

    /// All elements of a finite carrier in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>, Error> {
        enumerate_elements(&self.moduli)
    }

    /// The same carrier and actions over `action` (used when restricting to a
    /// module that only needs the underlying data, e.g. dropping Γ).
    pub fn with_action(
        &self,
        action: GammaAction,
        gamma_gens: &[(usize, IntMatrix)],
    ) -> Result<Self, Error> {
        let g_gens: Vec<(usize, IntMatrix)> = self
            .action
            .group()
            .generators()
            .into_iter()
            .map(|x| (x, self.g_act[x].clone()))
            .collect();
        Self::new(action, self.moduli.clone(), &g_gens, gamma_gens)
    }

    /// `A^Γ` as a G-module with trivial operators. Requires Γ to act trivially on G.
    pub fn gamma_invariant_module(&self) -> Result<Self, Error> {
        self.induced_module(true)
    }

    /// `A_Γ` as a G-module with trivial operators. Requires Γ to act trivially on G.
    pub fn gamma_coinvariant_module(&self) -> Result<Self, Error> {
        self.induced_module(false)
    }

    fn induced_module(&self, invariants: bool) -> Result<Self, Error> {
        if !self.action.is_trivial() {
            return Err(Error::Precondition(
                "Γ must act trivially on G for A^Γ / A_Γ to be G-modules".into(),
            ));
        }
        let sq = if invariants {
            self.invariants(Actors::Gamma)
        } else {
            self.coinvariants(Actors::Gamma)
        };
        let k = sq.group().rank();
        let g = self.action.group();
        let g_gens: Vec<(usize, IntMatrix)> = g
            .generators()
            .into_iter()
            .map(|x| {
                let mut m = IntMatrix::zeros(k, k);
                for j in 0..k {
                    let a = sparse_to_dense(&sq.representative(j), self.rank());
                    let img = sparse_from_dense(&self.g_act[x].mul_vec(&a));
                    let c = sq.coords(&img).expect("G preserves the Γ-invariants");
                    for (i, v) in c.into_iter().enumerate() {
                        m.set(i, j, v);
                    }
                }
                (x, m)
            })
            .collect();
        Self::new(
            self.action.forget_operators(),
            sq.moduli().to_vec(),
            &g_gens,
            &[],
        )
    }
}

fn respects_presentation(m: &IntMatrix, moduli: &[BigInt]) -> bool {
    for (j, mj) in moduli.iter().enumerate() {
        if mj.is_zero() {
            continue;
        }
        for (i, mi) in moduli.iter().enumerate() {
            let v = m.get(i, j) * mj;
            let ok = if mi.is_zero() {
                v.is_zero()
            } else {
                v.is_multiple_of(mi)
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

pub fn enumerate_elements(moduli: &[BigInt]) -> Result<Vec<Vec<BigInt>>, Error> {
    let mut total: u128 = 1;
    for m in moduli {
        if m.is_zero() {
            return Err(Error::Undecidable(
                "cannot enumerate an infinite carrier".into(),
            ));
        }
        let m: u128 = m.try_into().unwrap_or(u128::MAX);
        total = total.saturating_mul(m);
    }
    if total > ENUMERATION_CAP as u128 {
        return Err(Error::CapExceeded {
            what: "carrier enumeration".into(),
            needed: total,
            cap: ENUMERATION_CAP as u128,
        });
    }
    let mut out = vec![Vec::new()];
    for m in moduli {
        let m: u64 = m.try_into().expect("bounded by the cap");
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |x| {
                    let mut w = v.clone();
                    w.push(BigInt::from(x));
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

/// Output of [`GammaGModule::norm_map`].
#[derive(Clone, Debug)]
pub struct NormMap {
    pub matrix: IntMatrix,
    /// `A_{G⋊Γ}` with witness.
    pub source: Subquotient,
    /// `A^{G⋊Γ}` with witness.
    pub target: Subquotient,
    pub precondition_holds: bool,
    /// `N*` in canonical coordinates; absent when the precondition fails.
    pub induced: Option<IntMatrix>,
}

/// The group ring `Z(G)`: basis `G`, `x·g = xg`, `^σ g = ^σg`.
pub fn group_ring(action: &GammaAction) -> GammaGModule {
    let g = action.group();
    let n = g.order();
    let perm_matrix = |f: &dyn Fn(usize) -> usize| {
        let mut m = IntMatrix::zeros(n, n);
        for b in 0..n {
            m.set(f(b), b, BigInt::one());
        }
        m
    };
    let g_gens: Vec<(usize, IntMatrix)> = g
        .generators()
        .into_iter()
        .map(|x| (x, perm_matrix(&|b| g.mul(x, b))))
        .collect();
    let gamma_gens: Vec<(usize, IntMatrix)> = action
        .gamma()
        .generators()
        .into_iter()
        .map(|s| (s, perm_matrix(&|b| action.act(s, b))))
        .collect();
    GammaGModule::new(
        action.clone(),
        vec![BigInt::zero(); n],
        &g_gens,
        &gamma_gens,
    )
    .expect("group ring is a G⋊Γ-module")
}

/// The augmentation ideal `I(G)` on the basis `b_g = g - e` (`g ≠ e`):
/// `x·b_g = b_{xg} - b_x`, `^σ b_g = b_{^σg}`.
pub fn augmentation_ideal(action: &GammaAction) -> GammaGModule {
    let g = action.group();
    let n = g.order() - 1;
    let idx = |x: usize| x - 1;
    let mut g_gens = Vec::new();
    for x in g.generators() {
        let mut m = IntMatrix::zeros(n, n);
        for b in 1..g.order() {
            let xb = g.mul(x, b);
            if xb != 0 {
                *m.get_mut(idx(xb), idx(b)) += 1;
            }
            if x != 0 {
                *m.get_mut(idx(x), idx(b)) -= 1;
            }
        }
        g_gens.push((x, m));
    }
    let mut gamma_gens = Vec::new();
    for s in action.gamma().generators() {
        let mut m = IntMatrix::zeros(n, n);
        for b in 1..g.order() {
            m.set(idx(action.act(s, b)), idx(b), BigInt::one());
        }
        gamma_gens.push((s, m));
    }
    GammaGModule::new(
        action.clone(),
        vec![BigInt::zero(); n],
        &g_gens,
        &gamma_gens,
    )
    .expect("augmentation ideal is a G⋊Γ-module")
}

fn kron(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut m = IntMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    m.set(i * rb + k, j * cb + l, x * b.get(k, l));
                }
            }
        }
    }
    m
}

/// `A ⊗_Z B` with the diagonal G- and Γ-actions; coordinate `(i, j)` sits at
/// index `i * rank(B) + j` with modulus `gcd(m_i, n_j)`.
pub fn tensor_modules(a: &GammaGModule, b: &GammaGModule) -> Result<GammaGModule, Error> {
    if !Arc::ptr_eq(a.action.group(), b.action.group()) && a.action.group() != b.action.group() {
        return Err(Error::Precondition("modules over different groups".into()));
    }
    let moduli: Vec<BigInt> = a
        .moduli
        .iter()
        .flat_map(|m| b.moduli.iter().map(move |n| m.gcd(n)))
        .collect();
    let g_gens: Vec<(usize, IntMatrix)> = a
        .action
        .group()
        .generators()
        .into_iter()
        .map(|x| (x, kron(&a.g_act[x], &b.g_act[x])))
        .collect();
    let gamma_gens: Vec<(usize, IntMatrix)> = a
        .action
        .gamma()
        .generators()
        .into_iter()
        .map(|s| (s, kron(&a.gamma_act[s], &b.gamma_act[s])))
        .collect();
    GammaGModule::new(a.action.clone(), moduli, &g_gens, &gamma_gens)
}

/// Tensor product of coordinate vectors, matching [`tensor_modules`].
pub fn tensor_elements(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// `M ⊗_{G⋊Γ} A`: coinvariants of the diagonal module `M ⊗ A`.
pub fn tensor_over_g_gamma(m: &GammaGModule, a: &GammaGModule) -> Result<FgAbelianGroup, Error> {
    let t = tensor_modules(m, a)?;
    Ok(t.coinvariants(Actors::Both).group().clone())
}

/// A homomorphism of `G⋊Γ`-modules in the fixed presentations.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: GammaGModule,
    pub target: GammaGModule,
    pub matrix: IntMatrix,
}

impl ModuleMap {
    pub fn new(
        source: GammaGModule,
        target: GammaGModule,
        matrix: IntMatrix,
    ) -> Result<Self, Error> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::InvalidModule(
                "map matrix has the wrong shape".into(),
            ));
        }
        let well_defined = source.moduli.iter().enumerate().all(|(j, mj)| {
            mj.is_zero()
                || target.moduli.iter().enumerate().all(|(i, mi)| {
                    let v = matrix.get(i, j) * mj;
                    if mi.is_zero() {
                        v.is_zero()
                    } else {
                        v.is_multiple_of(mi)
                    }
                })
        });
        if !well_defined {
            return Err(Error::InvalidModule(
                "map is not well defined on the presentations".into(),
            ));
        }
        let g = source.action.group();
        for x in g.elements() {
            let l = target.reduce(&(&matrix * &source.g_act[x]));
            let r = target.reduce(&(&target.g_act[x] * &matrix));
            if l != r {
                return Err(Error::InvalidModule(format!(
                    "map does not commute with G element {}",
                    g.name(x)
                )));
            }
        }
        let gamma = source.action.gamma();
        for s in gamma.elements() {
            let l = target.reduce(&(&matrix * &source.gamma_act[s]));
            let r = target.reduce(&(&target.gamma_act[s] * &matrix));
            if l != r {
                return Err(Error::InvalidModule(format!(
                    "map does not commute with Γ element {}",
                    gamma.name(s)
                )));
            }
        }
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    pub fn apply(&self, a: &[BigInt]) -> Vec<BigInt> {
        let mut v = self.matrix.mul_vec(a);
        self.target.reduce_vec(&mut v);
        v
    }

    pub fn sparse(&self) -> SparseMatrix {
        self.matrix.to_sparse_columns()
    }

    pub fn is_surjective(&self) -> bool {
        let m = self.sparse();
        (0..self.target.rank())
            .all(|i| solve(&m, &self.target.moduli, &[(i, BigInt::one())]).is_some())
    }

    pub fn is_injective(&self) -> bool {
        let k = kernel_generators(&self.sparse(), &self.source.moduli, &self.target.moduli);
        let q = Subquotient::new(self.source.rank(), k, moduli_vectors(&self.source.moduli))
            .expect("kernel contains the presentation");
        q.group().is_trivial()
    }
}

/// A Γ-equivariant set-level section of a surjection.
#[derive(Clone, Debug)]
pub enum GammaSection {
    /// Explicit table on a finite target (keys are reduced coordinate vectors).
    Table(HashMap<Vec<BigInt>, Vec<BigInt>>),
    /// Γ acts trivially on source and target: any deterministic preimage choice.
    TrivialGamma(ModuleMap),
}

impl GammaSection {
    pub fn apply(&self, c: &[BigInt]) -> Vec<BigInt> {
        match self {
            GammaSection::Table(t) => t
                .get(c)
                .cloned()
                .unwrap_or_else(|| panic!("section undefined at {c:?}")),
            GammaSection::TrivialGamma(beta) => {
                let x = solve(&beta.sparse(), &beta.target.moduli, &sparse_from_dense(c))
                    .expect("surjective map has preimages");
                let mut v = sparse_to_dense(&x, beta.source.rank());
                beta.source.reduce_vec(&mut v);
                v
            }
        }
    }
}

/// Searches for a Γ-equivariant set-level section of the surjection `beta`.
/// `Ok(None)` is definitive for finite carriers.
pub fn find_gamma_section(beta: &ModuleMap) -> Result<Option<GammaSection>, Error> {
    if !beta.is_surjective() {
        return Err(Error::Precondition("map is not surjective".into()));
    }
    let gamma = beta.source.action.gamma().clone();
    if beta.source.gamma_acts_trivially() && beta.target.gamma_acts_trivially() {
        if !(beta.source.is_finite() && beta.target.is_finite()) {
            return Ok(Some(GammaSection::TrivialGamma(beta.clone())));
        }
    } else if !(beta.source.is_finite() && beta.target.is_finite()) {
        return Err(Error::Undecidable(
            "Γ-section search on an infinite carrier with nontrivial Γ-action".into(),
        ));
    }
    let mut fibers: HashMap<Vec<BigInt>, Vec<Vec<BigInt>>> = HashMap::new();
    for x in beta.source.elements()? {
        fibers.entry(beta.apply(&x)).or_default().push(x);
    }
    let mut table: HashMap<Vec<BigInt>, Vec<BigInt>> = HashMap::new();
    for c in beta.target.elements()? {
        if table.contains_key(&c) {
            continue;
        }
        let stab: Vec<usize> = gamma
            .elements()
            .filter(|&s| beta.target.apply_gamma(s, &c) == c)
            .collect();
        let fiber = fibers.get(&c).expect("surjective");
        let Some(x) = fiber
            .iter()
            .find(|x| stab.iter().all(|&s| beta.source.apply_gamma(s, x) == **x))
        else {
            return Ok(None);
        };
        for s in gamma.elements() {
            table
                .entry(beta.target.apply_gamma(s, &c))
                .or_insert_with(|| beta.source.apply_gamma(s, x));
        }
    }
    Ok(Some(GammaSection::Table(table)))
}

/// `0 -> C1 --α--> C --β--> C2 -> 0` with a Γ-equivariant section of `β`.
#[derive(Clone, Debug)]
pub struct ProperSes {
    pub alpha: ModuleMap,
    pub beta: ModuleMap,
    pub section: GammaSection,
}

impl ProperSes {
    pub fn new(alpha: ModuleMap, beta: ModuleMap) -> Result<Self, Error> {
        if alpha.target.moduli != beta.source.moduli {
            return Err(Error::InvalidModule("α and β are not composable".into()));
        }
        if !alpha.is_injective() {
            return Err(Error::Precondition("α is not injective".into()));
        }
        let comp = beta.target.reduce(&(&beta.matrix * &alpha.matrix));
        if !comp.is_zero() {
            return Err(Error::Precondition("β∘α ≠ 0".into()));
        }
        // Im α = Ker β
        let ker = kernel_generators(&beta.sparse(), &beta.source.moduli, &beta.target.moduli);
        let mut img = alpha.sparse().columns;
        img.extend(moduli_vectors(&alpha.target.moduli));
        let image = crate::zmod::Echelon::of_vectors(alpha.target.rank(), img);
        if ker.iter().any(|k| image.coordinates(k).is_none()) {
            return Err(Error::Precondition("Im α ≠ Ker β".into()));
        }
        let section = find_gamma_section(&beta)?
            .ok_or_else(|| Error::NotProper("β admits no Γ-equivariant section".into()))?;
        Ok(Self {
            alpha,
            beta,
            section,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::FiniteGroup;

    fn c3_inversion() -> GammaAction {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let gamma = Arc::new(FiniteGroup::cyclic(2));
        GammaAction::new(gamma, g, &[(1, vec![0, 2, 1])]).unwrap()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn make_module_examples() {
        let act = c3_inversion();
        let z = GammaGModule::new(act.clone(), big(&[0]), &[], &[]).unwrap();
        assert!(z.g_acts_trivially());
        let z3neg = GammaGModule::new(act.clone(), big(&[3]), &[], &[(1, m(&[&[-1]]))]).unwrap();
        assert!(!z3neg.gamma_acts_trivially());
        // 2 has order 3 mod 7; with Γ trivial on A the compatibility condition fails.
        let bad = GammaGModule::new(act.clone(), big(&[7]), &[(1, m(&[&[2]]))], &[]);
        match bad {
            Err(Error::InvalidModule(msg)) => assert!(msg.contains("compatibility"), "{msg}"),
            other => panic!("expected failure, got {other:?}"),
        }
        // non-automorphism
        let bad = GammaGModule::new(act.clone(), big(&[0]), &[(1, m(&[&[2]]))], &[]);
        assert!(bad.is_err());
    }

    #[test]
    fn invariants_and_coinvariants() {
        let act = c3_inversion();
        let z3neg = GammaGModule::new(act.clone(), big(&[3]), &[], &[(1, m(&[&[-1]]))]).unwrap();
        assert!(z3neg.invariants(Actors::Gamma).group().is_trivial());
        assert!(z3neg.coinvariants(Actors::Gamma).group().is_trivial());
        let triv = GammaGModule::trivial_cyclic(act, 0);
        assert_eq!(
            triv.invariants(Actors::Both).group(),
            &FgAbelianGroup::free(1)
        );
        assert_eq!(
            triv.coinvariants(Actors::Both).group(),
            &FgAbelianGroup::free(1)
        );
        let c2 = GammaAction::without_operators(Arc::new(FiniteGroup::cyclic(2)));
        let sign = GammaGModule::new(c2, big(&[0]), &[(1, m(&[&[-1]]))], &[]).unwrap();
        assert!(sign.invariants(Actors::G).group().is_trivial());
        assert_eq!(
            sign.coinvariants(Actors::G).group(),
            &FgAbelianGroup::cyclic(2)
        );
    }

    #[test]
    fn norm_examples() {
        let c2 = GammaAction::without_operators(Arc::new(FiniteGroup::cyclic(2)));
        let z2 = GammaGModule::trivial_cyclic(c2.clone(), 2);
        assert!(z2.norm_matrix().is_zero());
        let z = GammaGModule::trivial_cyclic(c2.clone(), 0);
        let nm = z.norm_map();
        assert_eq!(nm.induced.unwrap(), m(&[&[2]]));
        let sign = GammaGModule::new(c2, big(&[0]), &[(1, m(&[&[-1]]))], &[]).unwrap();
        assert!(sign.norm_matrix().is_zero());
    }

    #[test]
    fn augmentation_examples() {
        let c2 = GammaAction::without_operators(Arc::new(FiniteGroup::cyclic(2)));
        let i = augmentation_ideal(&c2);
        assert_eq!(i.rank(), 1);
        assert_eq!(i.g_matrix(1), &m(&[&[-1]]));
        let t = augmentation_ideal(&GammaAction::without_operators(Arc::new(
            FiniteGroup::trivial(),
        )));
        assert_eq!(t.rank(), 0);
        let i3 = augmentation_ideal(&c3_inversion());
        assert_eq!(i3.rank(), 2);
        // ^σ(g - e) = g^2 - e
        assert_eq!(i3.gamma_matrix(1), &m(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn tensor_examples() {
        let act = c3_inversion();
        let z3neg = GammaGModule::new(act.clone(), big(&[3]), &[], &[(1, m(&[&[-1]]))]).unwrap();
        let zg = group_ring(&act);
        let lhs = tensor_over_g_gamma(&zg, &z3neg).unwrap();
        assert_eq!(&lhs, z3neg.coinvariants(Actors::Gamma).group());
        let z = GammaGModule::trivial_cyclic(act.clone(), 0);
        let lhs = tensor_over_g_gamma(&z, &z3neg).unwrap();
        assert_eq!(&lhs, z3neg.coinvariants(Actors::Both).group());
        let i = augmentation_ideal(&act);
        assert!(tensor_over_g_gamma(&i, &z).unwrap().is_trivial());
    }

    #[test]
    fn tensor_with_coprime_summands() {
        // Z/2 ⊗ Z/3 = Z/1 coordinates must not trip the action checks.
        let act = c3_inversion();
        let a = GammaGModule::new(
            act.clone(),
            big(&[3, 2]),
            &[],
            &[(1, m(&[&[-1, 0], &[0, 1]]))],
        )
        .unwrap();
        let t = tensor_modules(&a, &a).unwrap();
        assert_eq!(t.carrier(), FgAbelianGroup::cyclic(6));
    }

    #[test]
    fn section_examples() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let act = GammaAction::trivial(c2.clone(), Arc::new(FiniteGroup::trivial()));
        let swap = GammaGModule::new(
            act.clone(),
            big(&[2, 2]),
            &[],
            &[(1, m(&[&[0, 1], &[1, 0]]))],
        )
        .unwrap();
        let z2 = GammaGModule::trivial_cyclic(act.clone(), 2);
        let sum = ModuleMap::new(swap.clone(), z2.clone(), m(&[&[1, 1]])).unwrap();
        assert!(find_gamma_section(&sum).unwrap().is_none());
        // projection of a direct sum with diagonal Γ-action
        let proj = ModuleMap::new(swap.clone(), swap.clone(), IntMatrix::identity(2)).unwrap();
        assert!(find_gamma_section(&proj).unwrap().is_some());
        // trivial Γ: Z/4 -> Z/2 has a section
        let triv = GammaAction::without_operators(c2);
        let z4 = GammaGModule::trivial_cyclic(triv.clone(), 4);
        let z2t = GammaGModule::trivial_cyclic(triv.clone(), 2);
        let red = ModuleMap::new(z4.clone(), z2t.clone(), m(&[&[1]])).unwrap();
        let s = find_gamma_section(&red).unwrap().unwrap();
        assert_eq!(red.apply(&s.apply(&big(&[1]))), big(&[1]));
        let inc = ModuleMap::new(z2t, z4, m(&[&[2]])).unwrap();
        assert!(ProperSes::new(inc, red).is_ok());
    }

    #[test]
    fn infinite_section_rules() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let act = GammaAction::trivial(c2, Arc::new(FiniteGroup::trivial()));
        let zneg = GammaGModule::new(act.clone(), big(&[0]), &[], &[(1, m(&[&[-1]]))]).unwrap();
        let id = ModuleMap::new(zneg.clone(), zneg, IntMatrix::identity(1)).unwrap();
        assert!(matches!(
            find_gamma_section(&id),
            Err(Error::Undecidable(_))
        ));
        let z = GammaGModule::trivial_cyclic(act.clone(), 0);
        let z2 = GammaGModule::trivial_cyclic(act, 2);
        let red = ModuleMap::new(z, z2, m(&[&[1]])).unwrap();
        assert!(matches!(
            find_gamma_section(&red).unwrap(),
            Some(GammaSection::TrivialGamma(_))
        ));
    }
}
