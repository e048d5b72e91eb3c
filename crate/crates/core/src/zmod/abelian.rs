//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::invariant_factors;

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ... | d_k`, every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[BigInt::from(n)])
    }

    /// Canonical form of `⊕ Z/m_i` where a modulus of 0 denotes a copy of `Z`.
    pub fn from_cyclic_orders(moduli: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = moduli.iter().map(|m| m.abs()).collect();
        Self::from_snf_diagonal(&invariant_factors(&IntMatrix::diagonal(&diag)), 0)
    }

    /// Cokernel of a map whose Smith diagonal is `diag`, on an ambient of
    /// `diag.len() + extra_free` generators.
    pub fn from_snf_diagonal(diag: &[BigInt], extra_free: usize) -> Self {
        let mut torsion = Vec::new();
        let mut free_rank = extra_free;
        for d in diag {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                torsion.push(d);
            }
        }
        torsion.sort();
        debug_assert!(torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        Self { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Presentation moduli in canonical coordinate order: torsion first, then free.
    pub fn moduli(&self) -> Vec<BigInt> {
        let mut m = self.torsion.clone();
        m.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        m
    }

    pub fn rank(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = self.moduli();
        m.extend(other.moduli());
        Self::from_cyclic_orders(&m)
    }

    /// Cyclic summands as moduli (0 = Z), in canonical order.
    fn summands(&self) -> Vec<BigInt> {
        self.moduli()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn pairwise(
    a: &FgAbelianGroup,
    b: &FgAbelianGroup,
    rule: impl Fn(&BigInt, &BigInt) -> Option<BigInt>,
) -> FgAbelianGroup {
    let mut out = Vec::new();
    for x in a.summands() {
        for y in b.summands() {
            if let Some(m) = rule(&x, &y) {
                out.push(m);
            }
        }
    }
    FgAbelianGroup::from_cyclic_orders(&out)
}

/// `Hom(A, B)`.
pub fn hom_group(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    pairwise(a, b, |m, n| match (m.is_zero(), n.is_zero()) {
        (true, _) => Some(n.clone()),
        (false, true) => None,
        (false, false) => Some(m.gcd(n)),
    })
}

/// `Ext^1(A, B)`.
pub fn ext1(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    pairwise(a, b, |m, n| match (m.is_zero(), n.is_zero()) {
        (true, _) => None,
        (false, true) => Some(m.clone()),
        (false, false) => Some(m.gcd(n)),
    })
}

/// `A ⊗ B`.
pub fn tensor(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    // gcd(0, n) = n and gcd(0, 0) = 0 give exactly Z ⊗ Z/n and Z ⊗ Z.
    pairwise(a, b, |m, n| Some(m.gcd(n)))
}

/// `Tor_1(A, B)`.
pub fn tor1(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    pairwise(a, b, |m, n| {
        (!m.is_zero() && !n.is_zero()).then(|| m.gcd(n))
    })
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FgAbelianGroup {
        FgAbelianGroup::cyclic(n)
    }

    #[test]
    fn canonical_form_merges_coprime() {
        let g = FgAbelianGroup::from_cyclic_orders(&[2.into(), 3.into(), 0.into(), 2.into()]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(6)]);
        assert_eq!(g.to_string(), "Z^1 + Z/2 + Z/6");
        assert_eq!(FgAbelianGroup::cyclic(1).to_string(), "0");
    }

    #[test]
    fn display_rule() {
        let g = FgAbelianGroup::from_cyclic_orders(&[2.into(), 0.into()]);
        assert_eq!(g.to_string(), "Z^1 + Z/2");
    }

    #[test]
    fn functor_examples() {
        let a = z(5).direct_sum(&FgAbelianGroup::free(1));
        assert_eq!(hom_group(&FgAbelianGroup::free(1), &a), a);
        assert_eq!(ext1(&z(2), &z(2)), z(2));
        assert!(tensor(&z(2), &z(3)).is_trivial());
        assert!(tor1(&z(2), &z(3)).is_trivial());
        assert_eq!(ext1(&z(4), &FgAbelianGroup::free(1)), z(4));
        assert!(hom_group(&z(4), &FgAbelianGroup::free(1)).is_trivial());
        assert_eq!(tor1(&z(4), &z(6)), z(2));
    }
}
