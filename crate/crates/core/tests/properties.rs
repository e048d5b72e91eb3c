//! Randomized structural properties across the library.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use eqcohom::bar::{cochain_complex, BarOptions};
use eqcohom::cohom::{cup, random_cochain};
use eqcohom::gmod::{tensor_modules, GammaGModule};
use eqcohom::grp::{
    orbits_on_tuples, semidirect_product, FiniteGroup, GammaAction, DEFAULT_TUPLE_CAP,
};
use eqcohom::zmod::{
    ext1, hom_group, smith_normal_form, tensor, tor1, FgAbelianGroup, IntMatrix, SparseMatrix,
    Subquotient,
};

const PRESETS: [&str; 10] = [
    "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C8", "D4", "Q8",
];

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=40, 1usize..=40).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-100i64..=100, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn abelian() -> impl Strategy<Value = FgAbelianGroup> {
    proptest::collection::vec(prop_oneof![Just(0u64), 2u64..=12], 0..4).prop_map(|orders| {
        let m: Vec<BigInt> = orders.into_iter().map(BigInt::from).collect();
        FgAbelianGroup::from_cyclic_orders(&m)
    })
}

/// A preset group with `Γ = C2` acting through an involutive automorphism.
fn c2_action() -> impl Strategy<Value = GammaAction> {
    (0..PRESETS.len(), any::<prop::sample::Index>()).prop_map(|(i, pick)| {
        let g = Arc::new(FiniteGroup::preset(PRESETS[i]).unwrap());
        let involutions: Vec<Vec<usize>> = g
            .automorphisms()
            .into_iter()
            .filter(|p| g.elements().all(|x| p[p[x]] == x))
            .collect();
        let perm = involutions[pick.index(involutions.len())].clone();
        GammaAction::new(Arc::new(FiniteGroup::cyclic(2)), g, &[(1, perm)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_round_trip(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.s.clone());
        prop_assert!((&s.u_inv * &s.u).is_identity());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        for i in 0..s.s.rows() {
            for j in 0..s.s.cols() {
                prop_assert!(i == j || s.s.get(i, j).is_zero());
            }
        }
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
    }
}

proptest! {
    #[test]
    fn functors_are_additive(a in abelian(), b in abelian(), c in abelian()) {
        let ab = a.direct_sum(&b);
        prop_assert_eq!(hom_group(&ab, &c), hom_group(&a, &c).direct_sum(&hom_group(&b, &c)));
        prop_assert_eq!(hom_group(&c, &ab), hom_group(&c, &a).direct_sum(&hom_group(&c, &b)));
        prop_assert_eq!(ext1(&ab, &c), ext1(&a, &c).direct_sum(&ext1(&b, &c)));
        prop_assert_eq!(ext1(&c, &ab), ext1(&c, &a).direct_sum(&ext1(&c, &b)));
        prop_assert_eq!(tensor(&ab, &c), tensor(&a, &c).direct_sum(&tensor(&b, &c)));
        prop_assert_eq!(tor1(&ab, &c), tor1(&a, &c).direct_sum(&tor1(&b, &c)));
    }

    #[test]
    fn finite_order_is_product_of_invariant_factors(a in abelian()) {
        if let Some(n) = a.order() {
            let product: BigInt = a.torsion.iter().product();
            prop_assert_eq!(n, product);
        }
    }

    #[test]
    fn two_term_euler_relation(
        m in 2u64..=12,
        rows in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 1..6), 1..6),
    ) {
        // 0 -> (Z/m)^a -d-> (Z/m)^b -> 0
        let width = rows[0].len();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| { r.resize(width, 0); r }).collect();
        let d = IntMatrix::from_rows(&rows).to_sparse_columns();
        let (a, b) = (d.cols(), d.rows);
        let m = BigInt::from(m);
        let src = vec![m.clone(); a];
        let tgt = vec![m.clone(); b];
        let h0 = Subquotient::homology(None, Some(&d), &src, &tgt).unwrap();
        let h1 = Subquotient::homology(Some(&d), None, &tgt, &[]).unwrap();
        let lhs = m.pow(a as u32) * h1.group().order().unwrap();
        let rhs = m.pow(b as u32) * h0.group().order().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn orbit_counts_and_transporters(action in c2_action(), n in 1usize..=3) {
        let g = action.group();
        let o = orbits_on_tuples(&action, n, DEFAULT_TUPLE_CAP).unwrap();
        let gamma = action.gamma().order();
        let total: usize = (0..o.num_orbits()).map(|i| gamma / o.stabilizer(i).len()).sum();
        prop_assert_eq!(total, g.order().pow(n as u32));
        for code in 0..o.size() {
            let (rep, sigma) = o.transporter(code);
            let moved: Vec<usize> = o.rep_tuple(rep).iter().map(|&x| action.act(sigma, x)).collect();
            prop_assert_eq!(moved, o.decode(code));
        }
    }

    #[test]
    fn actions_reject_non_automorphisms(i in 0..PRESETS.len(), seed in any::<u64>()) {
        let g = Arc::new(FiniteGroup::preset(PRESETS[i]).unwrap());
        let mut perm: Vec<usize> = g.elements().collect();
        let mut state = seed;
        for k in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (state >> 33) as usize % (k + 1));
        }
        let is_aut = perm[g.identity()] == g.identity()
            && g.elements().all(|a| g.elements().all(|b| perm[g.mul(a, b)] == g.mul(perm[a], perm[b])));
        let involutive = g.elements().all(|x| perm[perm[x]] == x);
        let built = GammaAction::new(Arc::new(FiniteGroup::cyclic(2)), g, &[(1, perm)]);
        prop_assert_eq!(built.is_ok(), is_aut && involutive);
    }

    #[test]
    fn semidirect_with_trivial_action_of_abelian_factors_is_abelian(i in 0..6usize, j in 0..6usize) {
        let abelian = ["C2", "C3", "C4", "C2xC2", "C5", "C6"];
        let g = Arc::new(FiniteGroup::preset(abelian[i]).unwrap());
        let gamma = Arc::new(FiniteGroup::preset(abelian[j]).unwrap());
        prop_assert!(semidirect_product(&GammaAction::trivial(gamma, g)).is_abelian());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cup_is_bilinear(action in c2_action(), m in prop_oneof![Just(0u64), Just(2), Just(4), Just(6)], seed in any::<u64>()) {
        use rand::SeedableRng;
        let module = GammaGModule::trivial_cyclic(action, m);
        let opts = BarOptions::default();
        let c = cochain_complex(&module, 1, &opts).unwrap();
        let cab = cochain_complex(&tensor_modules(&module, &module).unwrap(), 2, &opts).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let f = random_cochain(&c, 1, 5, &mut rng);
        let f2 = random_cochain(&c, 1, 5, &mut rng);
        let g = random_cochain(&c, 1, 5, &mut rng);
        let sum: Vec<BigInt> = f.iter().zip(&f2).map(|(x, y)| x + y).collect();
        let reduce = |v: Vec<BigInt>| -> Vec<BigInt> {
            v.into_iter()
                .zip(cab.bases[2].moduli())
                .map(|(x, q)| if q.is_zero() { x } else { x.mod_floor(q) })
                .collect()
        };
        let left = reduce(cup(&c, &sum, 1, &c, &g, 1, &cab).unwrap());
        let a = cup(&c, &f, 1, &c, &g, 1, &cab).unwrap();
        let b = cup(&c, &f2, 1, &c, &g, 1, &cab).unwrap();
        let right = reduce(a.iter().zip(&b).map(|(x, y)| x + y).collect());
        prop_assert_eq!(left, right);
        let zero = vec![BigInt::zero(); f.len()];
        prop_assert!(reduce(cup(&c, &zero, 1, &c, &g, 1, &cab).unwrap()).iter().all(Zero::is_zero));
    }

    #[test]
    fn truncated_bar_complex_euler_relation(action in c2_action(), m in prop_oneof![Just(2u64), Just(3), Just(4), Just(6)]) {
        // 0 -> C^0 -> C^1 -> C^2 -> 0 over a finite module.
        let module = GammaGModule::trivial_cyclic(action, m);
        let c = cochain_complex(&module, 2, &BarOptions::default()).unwrap();
        let moduli: Vec<&[BigInt]> = (0..=2).map(|n| c.bases[n].moduli()).collect();
        let d: &[SparseMatrix] = &c.differentials;
        let h0 = Subquotient::homology(None, Some(&d[0]), moduli[0], moduli[1]).unwrap();
        let h1 = Subquotient::homology(Some(&d[0]), Some(&d[1]), moduli[1], moduli[2]).unwrap();
        let h2 = Subquotient::homology(Some(&d[1]), None, moduli[2], &[]).unwrap();
        let size = |ms: &[BigInt]| -> BigInt { ms.iter().product() };
        let order = |s: &Subquotient| s.group().order().unwrap();
        prop_assert_eq!(size(moduli[0]) * size(moduli[2]) * order(&h1), size(moduli[1]) * order(&h0) * order(&h2));
    }
}
