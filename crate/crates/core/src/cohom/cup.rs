//! Alexander–Whitney cup products of Γ-cochains with coefficients in `A ⊗ B`
//! (diagonal actions).

use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::WithClasses;
use crate::bar::{cochain_complex, BarComplex, BarOptions, Direction};
use crate::gmod::{tensor_elements, tensor_modules, GammaGModule};
use crate::zmod::{reduce_coords, FgAbelianGroup};
use crate::Error;

/// `(f ∪ g)(u_1..u_{p+q}) = f(u_1..u_p) ⊗ (u_1⋯u_p)·g(u_{p+1}..u_{p+q})`.
///
/// `ca`, `cb` and `cab` are cochain complexes over `A`, `B` and `A ⊗ B` (as
/// built by [`tensor_modules`]); `f` has degree `p ≥ 1` and `g` degree `q ≥ 1`.
pub fn cup(
    ca: &BarComplex,
    f: &[BigInt],
    p: usize,
    cb: &BarComplex,
    g: &[BigInt],
    q: usize,
    cab: &BarComplex,
) -> Result<Vec<BigInt>, Error> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition(
            "cup products are defined for p, q ≥ 1".into(),
        ));
    }
    if [ca, cb, cab]
        .iter()
        .any(|c| c.direction != Direction::Cochain)
    {
        return Err(Error::Precondition(
            "cup products need cochain complexes".into(),
        ));
    }
    if cab.module().rank() != ca.module().rank() * cb.module().rank() {
        return Err(Error::Precondition(
            "coefficient complex is not over A ⊗ B".into(),
        ));
    }
    if cab.max_degree() + 1 < p + q {
        return Err(Error::Precondition(format!(
            "no degree {} in the product complex",
            p + q
        )));
    }
    let group = ca.module().action().group().clone();
    let mut err = None;
    let out = cab.cochain_from_reps(p + q, |u| {
        let fa = ca.cochain_eval(f, &u[..p]);
        let gb = cb.cochain_eval(g, &u[p..]);
        match (fa, gb) {
            (Ok(fa), Ok(gb)) => {
                let prod = u[..p].iter().fold(0, |acc, &x| group.mul(acc, x));
                tensor_elements(&fa, &cb.module().apply_g(prod, &gb))
            }
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                vec![BigInt::from(0); cab.module().rank()]
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The pairing `H^p_Γ(G, A) × H^q_Γ(G, B) -> H^{p+q}_Γ(G, A ⊗ B)` on canonical generators.
#[derive(Clone, Debug, Serialize)]
pub struct CupTable {
    pub p: usize,
    pub q: usize,
    pub left: FgAbelianGroup,
    pub right: FgAbelianGroup,
    pub target: FgAbelianGroup,
    /// `table[i][j]` = class of `x_i ∪ y_j` in canonical coordinates of the target.
    #[serde(serialize_with = "serialize_table")]
    pub table: Vec<Vec<Vec<BigInt>>>,
}

fn serialize_table<S: serde::Serializer>(t: &[Vec<Vec<BigInt>>], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<Vec<Vec<String>>> = t
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.iter().map(|x| x.to_string()).collect())
                .collect()
        })
        .collect();
    strs.serialize(s)
}

impl CupTable {
    /// `x ∪ y` for classes given in canonical coordinates.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); self.target.rank()];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                for (k, c) in self.table[i][j].iter().enumerate() {
                    out[k] += xi * yj * c;
                }
            }
        }
        reduce_coords(&mut out, &self.target.moduli());
        out
    }
}

pub fn cup_classes(
    a: &GammaGModule,
    b: &GammaGModule,
    p: usize,
    q: usize,
    opts: &BarOptions,
) -> Result<CupTable, Error> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition(
            "cup products are defined for p, q ≥ 1".into(),
        ));
    }
    let ab = tensor_modules(a, b)?;
    let wa = WithClasses::new(cochain_complex(a, p, opts)?)?;
    let wb = WithClasses::new(cochain_complex(b, q, opts)?)?;
    let wab = WithClasses::new(cochain_complex(&ab, p + q, opts)?)?;
    let (left, right) = (wa.classes[p].group().clone(), wb.classes[q].group().clone());
    let mut table = Vec::with_capacity(left.rank());
    for i in 0..left.rank() {
        let f = wa.representative(p, i);
        let mut row = Vec::with_capacity(right.rank());
        for j in 0..right.rank() {
            let g = wb.representative(q, j);
            let fg = cup(&wa.complex, &f, p, &wb.complex, &g, q, &wab.complex)?;
            let c = wab.class_of(p + q, &fg).ok_or_else(|| {
                Error::CheckFailed("cup product of cocycles is not a cocycle".into())
            })?;
            row.push(c);
        }
        table.push(row);
    }
    Ok(CupTable {
        p,
        q,
        left,
        right,
        target: wab.classes[p + q].group().clone(),
        table,
    })
}

/// A uniformly random cochain of degree `n`; free coordinates are drawn from `[-bound, bound]`.
pub fn random_cochain(c: &BarComplex, n: usize, bound: i64, rng: &mut impl Rng) -> Vec<BigInt> {
    c.bases[n]
        .moduli()
        .iter()
        .map(|m| {
            if m.is_zero() {
                BigInt::from(rng.gen_range(-bound..=bound))
            } else {
                rng.gen_bigint_range(&BigInt::zero(), m)
            }
        })
        .collect()
}

/// Checks `δ(f ∪ g) = δf ∪ g + (-1)^p f ∪ δg` on `samples` random pairs of
/// arbitrary (not necessarily closed) cochains; returns the number of failures.
pub fn leibniz_failures(
    a: &GammaGModule,
    b: &GammaGModule,
    p: usize,
    q: usize,
    samples: usize,
    seed: u64,
    opts: &BarOptions,
) -> Result<usize, Error> {
    let ab = tensor_modules(a, b)?;
    let ca = cochain_complex(a, p, opts)?;
    let cb = cochain_complex(b, q, opts)?;
    let cab = cochain_complex(&ab, p + q, opts)?;
    let moduli = cab.bases[p + q + 1].moduli().to_vec();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let f = random_cochain(&ca, p, 5, &mut rng);
        let g = random_cochain(&cb, q, 5, &mut rng);
        let lhs = cab.differentiate(p + q, &cup(&ca, &f, p, &cb, &g, q, &cab)?);
        let left = cup(&ca, &ca.differentiate(p, &f), p + 1, &cb, &g, q, &cab)?;
        let right = cup(&ca, &f, p, &cb, &cb.differentiate(q, &g), q + 1, &cab)?;
        let mut rhs: Vec<BigInt> = if p.is_multiple_of(2) {
            left.iter().zip(&right).map(|(x, y)| x + y).collect()
        } else {
            left.iter().zip(&right).map(|(x, y)| x - y).collect()
        };
        reduce_coords(&mut rhs, &moduli);
        if lhs != rhs {
            failures += 1;
        }
    }
    Ok(failures)
}
