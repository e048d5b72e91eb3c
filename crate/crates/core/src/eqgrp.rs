//! Group-theoretic functors of groups with operators: Γ-commutators,
//! Γ-abelianization, the lower Γ-central series, `T_Γ`, `Γ·G`, and the
//! right-hand exact sequences relating them to `H_1`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::bar::BarOptions;
use crate::cohom::homology;
use crate::gmod::GammaGModule;
use crate::grp::{FiniteGroup, GammaAction};
use crate::zmod::{FgAbelianGroup, Subquotient};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    normal: bool,
    gamma_stable: bool,
}

impl Subgroup {
    /// The subgroup generated by `gens`, with its flags computed against `action`.
    pub fn generated(action: &GammaAction, gens: &[usize]) -> Self {
        let g = action.group();
        Self::from_elements(action, g.closure(gens))
    }

    fn from_elements(action: &GammaAction, elements: Vec<usize>) -> Self {
        let g = action.group();
        let mut inside = vec![false; g.order()];
        for &x in &elements {
            inside[x] = true;
        }
        let normal = g.elements().all(|x| {
            elements
                .iter()
                .all(|&h| inside[g.mul(g.mul(x, h), g.inv(x))])
        });
        let gamma_stable = action
            .gamma()
            .elements()
            .all(|s| elements.iter().all(|&h| inside[action.act(s, h)]));
        Self {
            parent: g.clone(),
            elements,
            normal,
            gamma_stable,
        }
    }

    pub fn whole(action: &GammaAction) -> Self {
        Self::from_elements(action, action.group().elements().collect())
    }

    pub fn trivial(action: &GammaAction) -> Self {
        Self::from_elements(action, vec![0])
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_gamma_stable(&self) -> bool {
        self.gamma_stable
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn names(&self) -> Vec<&str> {
        self.elements.iter().map(|&x| self.parent.name(x)).collect()
    }

    /// The subgroup as a group in its own right (index `i` is `elements[i]`).
    pub fn as_group(&self) -> FiniteGroup {
        let pos = |x: usize| {
            self.elements
                .binary_search(&x)
                .expect("closed under products")
        };
        FiniteGroup::from_fn(
            self.order(),
            self.elements
                .iter()
                .map(|&x| self.parent.name(x).to_string())
                .collect(),
            |i, j| pos(self.parent.mul(self.elements[i], self.elements[j])),
        )
    }
}

/// `G/H` with its coset table and the projection `G -> G/H`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
}

/// Materializes `G/H` for a normal subgroup `H`. Cosets are numbered by their
/// least element, so the identity coset is 0.
pub fn quotient(g: &FiniteGroup, h: &Subgroup) -> Result<QuotientGroup, Error> {
    if !h.is_normal() {
        return Err(Error::Precondition(
            "quotient by a non-normal subgroup".into(),
        ));
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        for &y in h.elements() {
            projection[g.mul(x, y)] = reps.len();
        }
        reps.push(x);
    }
    let names = reps
        .iter()
        .map(|&x| {
            if x == 0 {
                "e".to_string()
            } else {
                format!("{}H", g.name(x))
            }
        })
        .collect();
    let group = FiniteGroup::from_fn(reps.len(), names, |a, b| {
        projection[g.mul(reps[a], reps[b])]
    });
    Ok(QuotientGroup { group, projection })
}

/// The Γ-action induced on `G/H` by a Γ-stable normal subgroup.
pub fn quotient_action(
    action: &GammaAction,
    h: &Subgroup,
) -> Result<(GammaAction, QuotientGroup), Error> {
    if !h.is_gamma_stable() {
        return Err(Error::Precondition(
            "quotient by a subgroup that is not Γ-stable".into(),
        ));
    }
    let q = quotient(action.group(), h)?;
    let n = q.group.order();
    let mut rep = vec![usize::MAX; n];
    for x in action.group().elements() {
        if rep[q.projection[x]] == usize::MAX {
            rep[q.projection[x]] = x;
        }
    }
    let images: Vec<(usize, Vec<usize>)> = action
        .gamma()
        .generators()
        .into_iter()
        .map(|s| {
            (
                s,
                (0..n)
                    .map(|c| q.projection[action.act(s, rep[c])])
                    .collect(),
            )
        })
        .collect();
    let qa = GammaAction::new(action.gamma().clone(), Arc::new(q.group.clone()), &images)?;
    Ok((qa, q))
}

/// Invariant factors of a finite abelian group given by its table.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<FgAbelianGroup, Error> {
    if !g.is_abelian() {
        return Err(Error::Precondition("group is not abelian".into()));
    }
    let n = g.order();
    let unit = |i: usize| vec![(i, BigInt::one())];
    let mut rels: Vec<Vec<(usize, BigInt)>> = vec![unit(0)];
    for a in g.generators() {
        for b in g.elements() {
            let mut v: std::collections::BTreeMap<usize, BigInt> = Default::default();
            *v.entry(a).or_default() += 1;
            *v.entry(b).or_default() += 1;
            *v.entry(g.mul(a, b)).or_default() -= 1;
            rels.push(
                v.into_iter()
                    .filter(|(_, x)| *x != BigInt::from(0))
                    .collect(),
            );
        }
    }
    Ok(Subquotient::new(n, (0..n).map(unit), rels)?.group().clone())
}

/// `[G, H]_Γ`, generated by `x·^σy·x⁻¹·y⁻¹` for `x ∈ G`, `y ∈ H`, `σ ∈ Γ`
/// (`H = G` when omitted).
pub fn gamma_commutator(action: &GammaAction, h: Option<&Subgroup>) -> Result<Subgroup, Error> {
    let g = action.group();
    let whole;
    let h = match h {
        Some(h) => {
            if !h.is_normal() || !h.is_gamma_stable() {
                return Err(Error::Precondition("H must be a normal Γ-subgroup".into()));
            }
            h
        }
        None => {
            whole = Subgroup::whole(action);
            &whole
        }
    };
    let mut gens = Vec::new();
    for x in g.elements() {
        for &y in h.elements() {
            for s in action.gamma().elements() {
                let c = g.mul(g.mul(x, action.act(s, y)), g.mul(g.inv(x), g.inv(y)));
                gens.push(c);
            }
        }
    }
    gens.sort_unstable();
    gens.dedup();
    Ok(Subgroup::generated(action, &gens))
}

/// The ordinary commutator subgroup `[G, G]`.
pub fn commutator_subgroup(action: &GammaAction) -> Subgroup {
    let g = action.group();
    let gens: Vec<usize> = g
        .elements()
        .flat_map(|x| {
            g.elements()
                .map(move |y| g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y))))
        })
        .collect();
    Subgroup::generated(action, &gens)
}

/// `Γ·G`, generated by `^σg·g⁻¹`.
pub fn gamma_dot(action: &GammaAction) -> Subgroup {
    let g = action.group();
    let gens: Vec<usize> = action
        .gamma()
        .elements()
        .flat_map(|s| g.elements().map(move |x| g.mul(action.act(s, x), g.inv(x))))
        .collect();
    Subgroup::generated(action, &gens)
}

/// `[G,G]_Γ` as the closure of `[G,G] ∪ Γ·G`.
pub fn gamma_commutator_via_dot(action: &GammaAction) -> Subgroup {
    let mut gens = commutator_subgroup(action).elements().to_vec();
    gens.extend_from_slice(gamma_dot(action).elements());
    Subgroup::generated(action, &gens)
}

#[derive(Clone, Debug)]
pub struct GammaAbelianization {
    pub group: FgAbelianGroup,
    pub commutator: Subgroup,
    pub quotient: QuotientGroup,
}

/// `G/[G,G]_Γ`. Checks that Γ acts trivially on the quotient.
pub fn gamma_abelianization(action: &GammaAction) -> Result<GammaAbelianization, Error> {
    let commutator = gamma_commutator(action, None)?;
    let q = quotient(action.group(), &commutator)?;
    let g = action.group();
    for s in action.gamma().elements() {
        if let Some(x) = g
            .elements()
            .find(|&x| q.projection[action.act(s, x)] != q.projection[x])
        {
            return Err(Error::CheckFailed(format!(
                "Γ acts nontrivially on G/[G,G]_Γ at {}",
                g.name(x)
            )));
        }
    }
    Ok(GammaAbelianization {
        group: abelian_invariants(&q.group)?,
        commutator,
        quotient: q,
    })
}

pub fn is_gamma_perfect(action: &GammaAction) -> bool {
    gamma_commutator(action, None)
        .map(|c| c.order() == action.group().order())
        .unwrap_or(false)
}

#[derive(Clone, Debug)]
pub struct LowerSeries {
    pub terms: Vec<Subgroup>,
    /// First index `i` with `Γ_{i+1} = Γ_i`, if reached within the requested depth.
    pub stabilized_at: Option<usize>,
}

/// `Γ_0 = G`, `Γ_{i+1} = [G, Γ_i]_Γ`, computed through index `depth`.
pub fn lower_gamma_series(action: &GammaAction, depth: usize) -> Result<LowerSeries, Error> {
    let mut terms = vec![Subgroup::whole(action)];
    let mut stabilized_at = None;
    for i in 0..depth {
        let next = gamma_commutator(action, Some(&terms[i]))?;
        if stabilized_at.is_none() && next == terms[i] {
            stabilized_at = Some(i);
        }
        terms.push(next);
    }
    Ok(LowerSeries {
        terms,
        stabilized_at,
    })
}

/// `T_Γ(G) = [G,G]_Γ / [G,G]`.
pub fn t_gamma(action: &GammaAction) -> Result<FgAbelianGroup, Error> {
    let big = gamma_commutator(action, None)?;
    let small = commutator_subgroup(action);
    let sub = big.as_group();
    let inner: Vec<usize> = small
        .elements()
        .iter()
        .map(|x| big.elements().binary_search(x).expect("[G,G] ⊆ [G,G]_Γ"))
        .collect();
    let sub_action = GammaAction::without_operators(Arc::new(sub.clone()));
    let q = quotient(&sub, &Subgroup::from_elements(&sub_action, inner))?;
    abelian_invariants(&q.group)
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Comparison {
    /// `Γ·G / ([G,G] ∩ Γ·G)`.
    pub kernel_term: FgAbelianGroup,
    /// Classical `H_1(G)` from the bar complex without operators.
    pub h1: FgAbelianGroup,
    /// `H_1^Γ(G)` from the equivariant bar complex.
    pub h1_gamma: FgAbelianGroup,
    pub injective: bool,
    pub exact_middle: bool,
    pub surjective: bool,
    pub orders_multiply: bool,
}

impl H1Comparison {
    pub fn holds(&self) -> bool {
        self.injective && self.exact_middle && self.surjective && self.orders_multiply
    }
}

fn bar_h1(action: &GammaAction, opts: &BarOptions) -> Result<FgAbelianGroup, Error> {
    let z = GammaGModule::trivial_cyclic(action.clone(), 0);
    Ok(homology(&z, 1, opts)?.groups[1].clone())
}

/// `0 -> Γ·G/([G,G]∩Γ·G) -> H_1(G) -> H_1^Γ(G) -> 0`, checked on cosets.
pub fn h1_comparison(action: &GammaAction, opts: &BarOptions) -> Result<H1Comparison, Error> {
    let g = action.group();
    let comm = commutator_subgroup(action);
    let dot = gamma_dot(action);
    let gcomm = gamma_commutator(action, None)?;
    let ab = quotient(g, &comm)?;
    let ab_gamma = quotient(g, &gcomm)?;
    let meet: Vec<usize> = dot
        .elements()
        .iter()
        .copied()
        .filter(|&x| comm.contains(x))
        .collect();
    let dot_action = GammaAction::without_operators(Arc::new(dot.as_group()));
    let meet_local: Vec<usize> = meet
        .iter()
        .map(|x| dot.elements().binary_search(x).unwrap())
        .collect();
    let k = quotient(
        &dot.as_group(),
        &Subgroup::from_elements(&dot_action, meet_local),
    )?;
    let kernel_term = abelian_invariants(&k.group)?;
    // K -> G/[G,G]: the coset of k ∈ Γ·G maps to k[G,G].
    let mut image_of = vec![usize::MAX; k.group.order()];
    let mut injective = true;
    for (i, &x) in dot.elements().iter().enumerate() {
        let c = ab.projection[x];
        let slot = &mut image_of[k.projection[i]];
        if *slot == usize::MAX {
            *slot = c;
        } else if *slot != c {
            injective = false;
        }
    }
    let mut image: Vec<usize> = image_of.clone();
    image.sort_unstable();
    image.dedup();
    injective &= image.len() == image_of.len();
    // G/[G,G] -> G/[G,G]_Γ is induced by the identity on G.
    let mut kernel: Vec<usize> = gcomm.elements().iter().map(|&x| ab.projection[x]).collect();
    kernel.sort_unstable();
    kernel.dedup();
    let exact_middle = image == kernel;
    let surjective = {
        let mut hit: Vec<usize> = g.elements().map(|x| ab_gamma.projection[x]).collect();
        hit.sort_unstable();
        hit.dedup();
        hit.len() == ab_gamma.group.order()
    };
    let h1 = bar_h1(&action.forget_operators(), opts)?;
    let h1_gamma = bar_h1(action, opts)?;
    let orders_multiply = match (h1.order(), h1_gamma.order(), kernel_term.order()) {
        (Some(a), Some(b), Some(c)) => a == b * c,
        _ => false,
    };
    Ok(H1Comparison {
        kernel_term,
        h1,
        h1_gamma,
        injective,
        exact_middle,
        surjective,
        orders_multiply,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiveTermTail {
    /// `N / [E, N]_Γ`.
    pub left: FgAbelianGroup,
    /// `H_1^Γ(E)`.
    pub middle: FgAbelianGroup,
    /// `H_1^Γ(E/N)`.
    pub right: FgAbelianGroup,
    pub exact_middle: bool,
    pub surjective: bool,
}

impl FiveTermTail {
    pub fn holds(&self) -> bool {
        self.exact_middle && self.surjective
    }
}

/// `N/[E,N]_Γ -> H_1^Γ(E) -> H_1^Γ(E/N) -> 0` for a normal Γ-subgroup `N` of `E`.
/// The `H_1^Γ` terms come from the bar complex; the maps are checked on
/// Γ-abelianizations (isomorphic to them, see [`gamma_abelianization`]).
pub fn five_term_tail(
    action: &GammaAction,
    n: &Subgroup,
    opts: &BarOptions,
) -> Result<FiveTermTail, Error> {
    if !n.is_normal() || !n.is_gamma_stable() {
        return Err(Error::Precondition(
            "N must be a normal Γ-subgroup of E".into(),
        ));
    }
    let e = action.group();
    let en = gamma_commutator(action, Some(n))?;
    let n_action = GammaAction::without_operators(Arc::new(n.as_group()));
    let en_local: Vec<usize> = en
        .elements()
        .iter()
        .map(|x| n.elements().binary_search(x).expect("[E,N]_Γ ⊆ N"))
        .collect();
    let left_q = quotient(&n.as_group(), &Subgroup::from_elements(&n_action, en_local))?;
    let left = abelian_invariants(&left_q.group)?;
    let ab_e = gamma_abelianization(action)?;
    let (g_action, proj) = quotient_action(action, n)?;
    let ab_g = gamma_abelianization(&g_action)?;
    // second map: x[E,E]_Γ ↦ π(x)[G,G]_Γ
    let to_g = |x: usize| ab_g.quotient.projection[proj.projection[x]];
    let mut kernel: Vec<usize> = e
        .elements()
        .filter(|&x| to_g(x) == 0)
        .map(|x| ab_e.quotient.projection[x])
        .collect();
    kernel.sort_unstable();
    kernel.dedup();
    let mut image: Vec<usize> = n
        .elements()
        .iter()
        .map(|&x| ab_e.quotient.projection[x])
        .collect();
    image.sort_unstable();
    image.dedup();
    let mut hit: Vec<usize> = e.elements().map(to_g).collect();
    hit.sort_unstable();
    hit.dedup();
    Ok(FiveTermTail {
        left,
        middle: bar_h1(action, opts)?,
        right: bar_h1(&g_action, opts)?,
        exact_middle: image == kernel,
        surjective: hit.len() == ab_g.quotient.group.order(),
    })
}
