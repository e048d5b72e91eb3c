use std::sync::Arc;

use super::*;
use crate::gmod::{ModuleMap, ProperSes};
use crate::grp::{FiniteGroup, GammaAction};
use crate::zmod::IntMatrix;

fn c2() -> GammaAction {
    GammaAction::without_operators(Arc::new(FiniteGroup::cyclic(2)))
}

fn c3_inversion() -> GammaAction {
    GammaAction::new(
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(3)),
        &[(1, vec![0, 2, 1])],
    )
    .unwrap()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn z2_to_z4_to_z2(act: &GammaAction) -> ProperSes {
    let z2 = GammaGModule::trivial_cyclic(act.clone(), 2);
    let z4 = GammaGModule::trivial_cyclic(act.clone(), 4);
    let alpha = ModuleMap::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[[2]])).unwrap();
    let beta = ModuleMap::new(z4, z2, IntMatrix::from_rows(&[[1]])).unwrap();
    ProperSes::new(alpha, beta).unwrap()
}

#[test]
fn c2_with_z2() {
    let m = GammaGModule::trivial_cyclic(c2(), 2);
    let r = cohomology(&m, 2, &BarOptions::default()).unwrap();
    assert!(r.groups.iter().all(|g| g == &FgAbelianGroup::cyclic(2)));
}

#[test]
fn trivial_group() {
    let act = GammaAction::trivial(
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::trivial()),
    );
    let m = GammaGModule::new(
        act,
        big(&[0, 0]),
        &[],
        &[(1, IntMatrix::from_rows(&[[0, 1], [1, 0]]))],
    )
    .unwrap();
    let co = cohomology(&m, 3, &BarOptions::default()).unwrap();
    assert_eq!(co.groups[0], FgAbelianGroup::free(1));
    assert!(co.groups[1..].iter().all(FgAbelianGroup::is_trivial));
    let ho = homology(&m, 3, &BarOptions::default()).unwrap();
    assert_eq!(ho.groups[0], FgAbelianGroup::free(1));
    assert!(ho.groups[1..].iter().all(FgAbelianGroup::is_trivial));
}

#[test]
fn tate_conventions() {
    let z = GammaGModule::trivial_cyclic(c2(), 0);
    let p = tate(&z, -3, 2, TateConvention::Paper, &BarOptions::default()).unwrap();
    assert!(p.get(0).unwrap().is_trivial());
    assert_eq!(p.get(-1).unwrap(), &FgAbelianGroup::cyclic(2));
    let c = tate(&z, -1, 0, TateConvention::Classical, &BarOptions::default()).unwrap();
    assert_eq!(c.get(0).unwrap(), &FgAbelianGroup::cyclic(2));
    assert!(c.get(-1).unwrap().is_trivial());
    let h = homology(&z, 2, &BarOptions::default()).unwrap();
    assert_eq!(p.get(-2).unwrap(), &h.groups[1]);
    assert_eq!(p.get(-3).unwrap(), &h.groups[2]);
    let z2 = GammaGModule::trivial_cyclic(c2(), 2);
    let t = tate(&z2, -1, 0, TateConvention::Paper, &BarOptions::default()).unwrap();
    assert_eq!(t.get(0).unwrap(), &FgAbelianGroup::cyclic(2));
    assert_eq!(t.get(-1).unwrap(), &FgAbelianGroup::cyclic(2));
}

#[test]
fn tate_refuses_without_precondition() {
    // Γ swaps two copies of Z with G = C2 acting trivially: N = 2 and Γ moves it.
    let act = GammaAction::trivial(
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(2)),
    );
    let m = GammaGModule::new(
        act,
        big(&[0, 0]),
        &[],
        &[(1, IntMatrix::from_rows(&[[0, 1], [1, 0]]))],
    )
    .unwrap();
    assert!(matches!(
        tate(&m, -1, 0, TateConvention::Paper, &BarOptions::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn derivation_examples() {
    let d = derivations(&GammaGModule::trivial_cyclic(c2(), 2)).unwrap();
    assert_eq!(d.derivations.group(), &FgAbelianGroup::cyclic(2));
    assert!(d.principal.group().is_trivial());
    assert_eq!(d.h1.group(), &FgAbelianGroup::cyclic(2));
    let neg = GammaGModule::new(
        c3_inversion(),
        big(&[3]),
        &[],
        &[(1, IntMatrix::from_rows(&[[-1]]))],
    )
    .unwrap();
    let d = derivations(&neg).unwrap();
    assert_eq!(d.derivations.group(), &FgAbelianGroup::cyclic(3));
    assert_eq!(d.h1.group(), &FgAbelianGroup::cyclic(3));
    let co = cohomology(&neg, 1, &BarOptions::default()).unwrap();
    assert_eq!(co.groups[1], FgAbelianGroup::cyclic(3));
}

#[test]
fn cup_on_c2() {
    let z2 = GammaGModule::trivial_cyclic(c2(), 2);
    let t = cup_classes(&z2, &z2, 1, 1, &BarOptions::default()).unwrap();
    assert_eq!(t.target, FgAbelianGroup::cyclic(2));
    assert_eq!(t.table[0][0], big(&[1]));
    assert!(matches!(
        cup_classes(&z2, &z2, 0, 1, &BarOptions::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn bockstein_on_c2() {
    let ses = z2_to_z4_to_z2(&c2());
    let r = les(&ses, 2, Direction::Cochain, &BarOptions::default()).unwrap();
    assert!(r.is_exact(), "{r:#?}");
    let h1 = r.rows.iter().find(|row| row.label == "H^1(A'')").unwrap();
    assert_eq!(h1.outgoing_zero, Some(false));
    let r = les(&ses, 2, Direction::Chain, &BarOptions::default()).unwrap();
    assert!(r.is_exact(), "{r:#?}");
}

#[test]
fn split_sequence_has_zero_connecting_maps() {
    let act = c2();
    let z2 = GammaGModule::trivial_cyclic(act.clone(), 2);
    let sum = GammaGModule::trivial(act.clone(), big(&[2, 2]));
    let alpha = ModuleMap::new(z2.clone(), sum.clone(), IntMatrix::from_rows(&[[1], [0]])).unwrap();
    let beta = ModuleMap::new(sum, z2, IntMatrix::from_rows(&[[0, 1]])).unwrap();
    let ses = ProperSes::new(alpha, beta).unwrap();
    let r = les(&ses, 2, Direction::Cochain, &BarOptions::default()).unwrap();
    assert!(r.is_exact());
    for row in r.rows.iter().filter(|row| row.label.ends_with("(A'')")) {
        assert_eq!(row.outgoing_zero, Some(true), "{}", row.label);
    }
}

#[test]
fn splice_on_c2() {
    let ses = z2_to_z4_to_z2(&c2());
    let r = tate_splice(&ses, &BarOptions::default()).unwrap();
    assert!(r.is_exact(), "{r:#?}");
}

#[test]
fn uct_examples() {
    let rows = uct_check(
        &GammaGModule::trivial_cyclic(c2(), 2),
        3,
        &BarOptions::default(),
    )
    .unwrap();
    assert!(rows.iter().all(UctRow::holds));
    assert_eq!(rows[2].cohomology, FgAbelianGroup::cyclic(2));
    let rows = uct_check(
        &GammaGModule::trivial_cyclic(c3_inversion(), 3),
        3,
        &BarOptions::default(),
    )
    .unwrap();
    assert!(rows.iter().all(UctRow::holds), "{rows:#?}");
}

#[test]
fn leibniz_holds_on_random_cochains() {
    let action = GammaAction::without_operators(Arc::new(FiniteGroup::symmetric3()));
    let a = GammaGModule::trivial_cyclic(action.clone(), 0);
    let b = GammaGModule::trivial_cyclic(action, 6);
    let opts = BarOptions::default();
    assert_eq!(leibniz_failures(&a, &b, 1, 1, 20, 7, &opts).unwrap(), 0);
    assert_eq!(leibniz_failures(&b, &b, 2, 1, 10, 8, &opts).unwrap(), 0);
}
