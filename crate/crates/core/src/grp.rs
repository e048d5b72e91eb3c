//! Finite groups by multiplication table, operator-group actions, semidirect
//! products, and orbit/stabilizer data for the diagonal action on tuples.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::Error;

/// Default cap on the number of tuples `|G|^n` in any orbit enumeration.
pub const DEFAULT_TUPLE_CAP: usize = 200_000;

/// Default cap on the order of a group built from permutation generators.
pub const DEFAULT_GROUP_CAP: usize = 5_000;

/// A finite group on dense indices `0..order`, identity at index 0.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup(order {}: {})",
            self.order,
            self.names.join(", ")
        )
    }
}

impl FiniteGroup {
    /// Validates a full multiplication table. The identity is moved to index 0.
    pub fn from_table(table: &[Vec<usize>], names: Option<Vec<String>>) -> Result<Self, Error> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "entry {x} in row {i} is out of range"
                )));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == e && table[b][a] == e) {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        let names = match names {
            Some(v) => {
                if v.len() != n {
                    return Err(Error::InvalidGroup(format!(
                        "{} names for {n} elements",
                        v.len()
                    )));
                }
                v
            }
            None => (0..n)
                .map(|i| {
                    if i == e {
                        "e".to_string()
                    } else {
                        format!("x{i}")
                    }
                })
                .collect(),
        };
        // Permutation moving e to 0, keeping the relative order of the rest.
        let mut order_new: Vec<usize> = vec![e];
        order_new.extend((0..n).filter(|&x| x != e));
        let mut pos = vec![0; n];
        for (new, &old) in order_new.iter().enumerate() {
            pos[old] = new;
        }
        let mut flat = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[pos[a] * n + pos[b]] = pos[table[a][b]];
            }
        }
        let names: Vec<String> = order_new.iter().map(|&o| names[o].clone()).collect();
        Self::from_flat(n, flat, names)
    }

    fn from_flat(order: usize, table: Vec<usize>, names: Vec<String>) -> Result<Self, Error> {
        let mut seen = HashMap::new();
        for (i, nm) in names.iter().enumerate() {
            if let Some(j) = seen.insert(nm.clone(), i) {
                return Err(Error::InvalidGroup(format!(
                    "duplicate element name {nm:?} ({j} and {i})"
                )));
            }
        }
        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order)
                .find(|&b| table[a * order + b] == 0)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        Ok(Self {
            order,
            table,
            inverse,
            names,
        })
    }

    /// Builds a group from elements and an operation known to be a group law
    /// (element 0 must be the identity).
    pub fn from_fn(order: usize, names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mul(a, b);
            }
        }
        Self::from_flat(order, table, names).expect("from_fn requires a group law")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `C_n` with elements `e, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        Self::from_fn(n, names, |a, b| (a + b) % n)
    }

    /// Closure of permutations of `{0, ..., degree-1}` under composition
    /// `(p q)(x) = p(q(x))`. Elements are named in 1-based cycle notation.
    pub fn from_permutations(gens: &[Vec<usize>], cap: usize) -> Result<Self, Error> {
        let degree = gens.iter().map(Vec::len).max().unwrap_or(0);
        let mut clean = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let mut p = g.clone();
            p.extend(p.len()..degree);
            let mut seen = vec![false; degree];
            for &x in &p {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidGroup(format!(
                        "generator {i} is not a permutation"
                    )));
                }
                seen[x] = true;
            }
            clean.push(p);
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for g in &clean {
                let prod: Vec<usize> = (0..degree).map(|x| elems[a][g[x]]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "permutation group closure".into(),
                            needed: elems.len() as u128 + 1,
                            cap: cap as u128,
                        });
                    }
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|x| elems[a][elems[b][x]]).collect();
                table[a * n + b] = index[&prod];
            }
        }
        Self::from_flat(n, table, names)
    }

    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order, b.order);
        let names = (0..na * nb)
            .map(|i| {
                let (x, y) = (i % na, i / na);
                if i == 0 {
                    "e".to_string()
                } else {
                    format!("({},{})", a.name(x), b.name(y))
                }
            })
            .collect();
        Self::from_fn(na * nb, names, |p, q| {
            let (x1, y1) = (p % na, p / na);
            let (x2, y2) = (q % na, q / na);
            a.mul(x1, x2) + na * b.mul(y1, y2)
        })
    }

    /// Dihedral group of order `2n`: `r^i s^j` with `s r s = r^-1`.
    pub fn dihedral(n: usize) -> Self {
        let names = (0..2 * n)
            .map(|i| {
                let (k, s) = (i % n, i / n);
                match (k, s) {
                    (0, 0) => "e".to_string(),
                    (0, 1) => "s".to_string(),
                    (1, 0) => "r".to_string(),
                    (k, 0) => format!("r^{k}"),
                    (1, 1) => "rs".to_string(),
                    (k, _) => format!("r^{k}s"),
                }
            })
            .collect();
        Self::from_fn(2 * n, names, |a, b| {
            let (k1, s1) = (a % n, a / n);
            let (k2, s2) = (b % n, b / n);
            let k = if s1 == 0 {
                (k1 + k2) % n
            } else {
                (k1 + n - k2) % n
            };
            k + n * ((s1 + s2) % 2)
        })
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // index = 2*unit + sign, units 1,i,j,k
        let names = ["e", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        // unit products: (unit, sign)
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (x, 0),
                (x, y) if x == y => (0, 1),
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            }
        };
        Self::from_fn(8, names, |a, b| {
            let (u, s) = unit_mul(a / 2, b / 2);
            2 * u + ((a % 2 + b % 2 + s) % 2)
        })
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 10).expect("S3")
    }

    /// Preset groups by name: `C<n>`, `C2xC2`, `S3`, `D4`, `Q8`, `D<n>` (order 2n), `1`.
    pub fn preset(name: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidGroup(format!("unknown preset {name:?}"));
        Ok(match name {
            "1" | "C1" => Self::trivial(),
            "S3" => Self::symmetric3(),
            "Q8" => Self::quaternion(),
            "C2xC2" | "V4" => Self::direct_product(&Self::cyclic(2), &Self::cyclic(2)),
            "C2xC4" => Self::direct_product(&Self::cyclic(2), &Self::cyclic(4)),
            "C2xC2xC2" => Self::direct_product(
                &Self::direct_product(&Self::cyclic(2), &Self::cyclic(2)),
                &Self::cyclic(2),
            ),
            _ => {
                if let Some(n) = name.strip_prefix('C') {
                    let n: usize = n.parse().map_err(|_| bad())?;
                    if n == 0 {
                        return Err(bad());
                    }
                    Self::cyclic(n)
                } else if let Some(n) = name.strip_prefix('D') {
                    let n: usize = n.parse().map_err(|_| bad())?;
                    if n < 2 {
                        return Err(bad());
                    }
                    Self::dihedral(n)
                } else {
                    return Err(bad());
                }
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
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

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element set of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let p = self.mul(a, g);
                if !inside[p] {
                    inside[p] = true;
                    queue.push_back(p);
                }
            }
        }
        (0..self.order).filter(|&i| inside[i]).collect()
    }

    /// A deterministic generating set: scan elements in index order and keep
    /// each one not already generated.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for x in 1..self.order {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Extends generator images to a homomorphism `self -> target`.
    pub fn extend_hom(
        &self,
        target: &Self,
        images: &[(usize, usize)],
    ) -> Result<Vec<usize>, Error> {
        let mut map = vec![usize::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &(g, h) in images {
                let p = self.mul(a, g);
                let img = target.mul(map[a], h);
                if map[p] == usize::MAX {
                    map[p] = img;
                    queue.push_back(p);
                } else if map[p] != img {
                    return Err(Error::InvalidAction(format!(
                        "generator images do not define a homomorphism (conflict at {})",
                        self.name(p)
                    )));
                }
            }
        }
        if map.contains(&usize::MAX) {
            return Err(Error::InvalidAction(
                "given elements do not generate the group".into(),
            ));
        }
        for a in self.elements() {
            for b in self.elements() {
                if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidAction(format!(
                        "generator images do not define a homomorphism ({} * {})",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        Ok(map)
    }

    /// Whether `perm` is an automorphism of the group.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.order {
            return false;
        }
        let mut seen = vec![false; self.order];
        for &x in perm {
            if x >= self.order || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        self.elements().all(|a| {
            self.elements()
                .all(|b| perm[self.mul(a, b)] == self.mul(perm[a], perm[b]))
        })
    }

    /// All automorphisms, by brute force over generator images.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let ok_orders = gens
                .iter()
                .zip(&choice)
                .all(|(&g, &h)| self.element_order(g) == self.element_order(h));
            if ok_orders {
                let images: Vec<(usize, usize)> =
                    gens.iter().copied().zip(choice.iter().copied()).collect();
                if let Ok(map) = self.extend_hom(self, &images) {
                    if self.is_automorphism(&map) {
                        out.push(map);
                    }
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return out;
                }
                choice[i] += 1;
                if choice[i] < self.order {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Brute-force isomorphism test (intended for small groups).
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.order != other.order {
            return false;
        }
        let profile = |g: &Self| {
            let mut v: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
            v.sort();
            v
        };
        if profile(self) != profile(other) || self.is_abelian() != other.is_abelian() {
            return false;
        }
        let gens = self.generators();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<(usize, usize)> =
                gens.iter().copied().zip(choice.iter().copied()).collect();
            if gens
                .iter()
                .zip(&choice)
                .all(|(&g, &h)| self.element_order(g) == other.element_order(h))
            {
                if let Ok(map) = self.extend_hom(other, &images) {
                    let mut seen = vec![false; other.order];
                    if map.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        return true;
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return false;
                }
                choice[i] += 1;
                if choice[i] < other.order {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = p[x];
        }
        out.push('(');
        out.push_str(
            &cyc.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// An action of `Γ` on `G` by automorphisms: `phi[σ][x] = ^σx`.
#[derive(Clone, Debug)]
pub struct GammaAction {
    gamma: Arc<FiniteGroup>,
    g: Arc<FiniteGroup>,
    phi: Vec<Vec<usize>>,
}

impl GammaAction {
    /// Validates and closes an action given by images of some elements of `Γ`
    /// (typically generators).
    pub fn new(
        gamma: Arc<FiniteGroup>,
        g: Arc<FiniteGroup>,
        images: &[(usize, Vec<usize>)],
    ) -> Result<Self, Error> {
        for (s, perm) in images {
            if *s >= gamma.order() {
                return Err(Error::InvalidAction(format!("no Γ element with index {s}")));
            }
            if !g.is_automorphism(perm) {
                return Err(Error::InvalidAction(format!(
                    "image of Γ element {} is not an automorphism of G",
                    gamma.name(*s)
                )));
            }
        }
        let n = g.order();
        let mut phi: Vec<Option<Vec<usize>>> = vec![None; gamma.order()];
        phi[0] = Some((0..n).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            let pa = phi[a].clone().unwrap();
            for (s, ps) in images {
                let prod = gamma.mul(a, *s);
                let composed: Vec<usize> = (0..n).map(|x| pa[ps[x]]).collect();
                match &phi[prod] {
                    None => {
                        phi[prod] = Some(composed);
                        queue.push_back(prod);
                    }
                    Some(existing) if *existing != composed => {
                        return Err(Error::InvalidAction(format!(
                            "images do not define a homomorphism Γ -> Aut(G) (conflict at Γ element {})",
                            gamma.name(prod)
                        )));
                    }
                    _ => {}
                }
            }
        }
        if phi.iter().any(Option::is_none) {
            return Err(Error::InvalidAction(
                "given Γ elements do not generate Γ".into(),
            ));
        }
        let phi: Vec<Vec<usize>> = phi.into_iter().map(Option::unwrap).collect();
        for s in gamma.elements() {
            for t in gamma.elements() {
                let st = gamma.mul(s, t);
                if (0..n).any(|x| phi[st][x] != phi[s][phi[t][x]]) {
                    return Err(Error::InvalidAction(format!(
                        "phi({}·{}) differs from phi({})∘phi({})",
                        gamma.name(s),
                        gamma.name(t),
                        gamma.name(s),
                        gamma.name(t)
                    )));
                }
            }
        }
        Ok(Self { gamma, g, phi })
    }

    pub fn trivial(gamma: Arc<FiniteGroup>, g: Arc<FiniteGroup>) -> Self {
        let n = g.order();
        let phi = vec![(0..n).collect(); gamma.order()];
        Self { gamma, g, phi }
    }

    /// The trivial group acting on `g`.
    pub fn without_operators(g: Arc<FiniteGroup>) -> Self {
        Self::trivial(Arc::new(FiniteGroup::trivial()), g)
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    /// `^σx`.
    #[inline]
    pub fn act(&self, sigma: usize, x: usize) -> usize {
        self.phi[sigma][x]
    }

    pub fn automorphism(&self, sigma: usize) -> &[usize] {
        &self.phi[sigma]
    }

    pub fn is_trivial(&self) -> bool {
        self.phi
            .iter()
            .all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// Same `G` and action pattern with Γ replaced by the trivial group.
    pub fn forget_operators(&self) -> Self {
        Self::without_operators(self.g.clone())
    }
}

/// `G⋊Γ` on pairs `(x, σ)` stored at index `x + |G|·σ`, with
/// `(x,σ)(y,τ) = (x·^σy, στ)`.
pub fn semidirect_product(action: &GammaAction) -> FiniteGroup {
    let g = action.group();
    let gamma = action.gamma();
    let n = g.order();
    let names = (0..n * gamma.order())
        .map(|i| {
            let (x, s) = (i % n, i / n);
            match (x, s) {
                (0, 0) => "e".to_string(),
                (x, 0) => g.name(x).to_string(),
                (0, s) => format!("[{}]", gamma.name(s)),
                (x, s) => format!("{}[{}]", g.name(x), gamma.name(s)),
            }
        })
        .collect();
    FiniteGroup::from_fn(n * gamma.order(), names, |p, q| {
        let (x, s) = (p % n, p / n);
        let (y, t) = (q % n, q / n);
        g.mul(x, action.act(s, y)) + n * gamma.mul(s, t)
    })
}

/// Γ-orbits of `G^n` under the diagonal action.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    degree: usize,
    base: usize,
    reps: Vec<usize>,
    stabilizers: Vec<Vec<usize>>,
    point_rep: Vec<u32>,
    point_sigma: Vec<u32>,
}

impl OrbitDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of points `|G|^n`.
    pub fn size(&self) -> usize {
        self.point_rep.len()
    }

    pub fn num_orbits(&self) -> usize {
        self.reps.len()
    }

    /// Code of orbit representative `i` (lexicographically least tuple).
    pub fn rep_code(&self, i: usize) -> usize {
        self.reps[i]
    }

    pub fn rep_tuple(&self, i: usize) -> Vec<usize> {
        self.decode(self.reps[i])
    }

    pub fn stabilizer(&self, i: usize) -> &[usize] {
        &self.stabilizers[i]
    }

    /// `(rep index, σ)` with `^σ rep = point`.
    #[inline]
    pub fn transporter(&self, code: usize) -> (usize, usize) {
        (
            self.point_rep[code] as usize,
            self.point_sigma[code] as usize,
        )
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.degree);
        tuple.iter().fold(0, |acc, &x| acc * self.base + x)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0; self.degree];
        for i in (0..self.degree).rev() {
            out[i] = code % self.base;
            code /= self.base;
        }
        out
    }
}

fn checked_pow(base: usize, n: usize) -> Option<usize> {
    (0..n).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// Orbit decomposition of `G^n` under the diagonal Γ-action. Representatives
/// are lexicographically least tuples; transporters use the first σ (by index)
/// reaching each point.
pub fn orbits_on_tuples(
    action: &GammaAction,
    n: usize,
    cap: usize,
) -> Result<OrbitDecomposition, Error> {
    let base = action.group().order();
    let size = checked_pow(base, n)
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::CapExceeded {
            what: format!("|G|^{n} basis tuples"),
            needed: (base as u128).saturating_pow(n as u32),
            cap: cap as u128,
        })?;
    let gamma = action.gamma();
    let mut point_rep = vec![u32::MAX; size];
    let mut point_sigma = vec![0u32; size];
    let mut reps = Vec::new();
    let mut stabilizers = Vec::new();
    let mut digits = vec![0usize; n];
    for code in 0..size {
        if point_rep[code] != u32::MAX {
            continue;
        }
        let mut c = code;
        for i in (0..n).rev() {
            digits[i] = c % base;
            c /= base;
        }
        let idx = reps.len() as u32;
        let mut stab = Vec::new();
        for s in gamma.elements() {
            let img = digits
                .iter()
                .fold(0usize, |acc, &x| acc * base + action.act(s, x));
            if img == code {
                stab.push(s);
            }
            if point_rep[img] == u32::MAX {
                point_rep[img] = idx;
                point_sigma[img] = s as u32;
            }
        }
        reps.push(code);
        stabilizers.push(stab);
    }
    Ok(OrbitDecomposition {
        degree: n,
        base,
        reps,
        stabilizers,
        point_rep,
        point_sigma,
    })
}
