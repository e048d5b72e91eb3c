//! The property battery run by `verify`.

use crate::bar::Direction;
use crate::bar::{chain_complex, cochain_complex, BarOptions};
use crate::cohom::{
    cohomology, derivations, homology, leibniz_failures, les, tate, tate_splice, uct_check,
    TateConvention,
};
use crate::eqgrp::{five_term_tail, gamma_abelianization, h1_comparison};
use crate::ext::{classify, ClassifyCaps};
use crate::gmod::{augmentation_ideal, tensor_over_g_gamma, GammaGModule};
use crate::zmod::{tensor, FgAbelianGroup};
use crate::Error;

use super::report::Report;
use super::run::les_section;
use super::spec::Problem;

/// Random cochain pairs per Leibniz check.
pub const LEIBNIZ_SAMPLES: usize = 200;
const LEIBNIZ_SEED: u64 = 0x5eed;

fn same(name: &str, r: &mut Report, left: &[FgAbelianGroup], right: &[FgAbelianGroup]) {
    let detail = left
        .iter()
        .zip(right)
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(n, (a, b))| format!("degree {n}: {a} vs {b}"))
        .unwrap_or_default();
    r.check(name, left == right, detail);
}

fn list(gs: &[FgAbelianGroup]) -> String {
    gs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Whether the extension classifier runs on this module.
pub fn classification_in_caps(module: &GammaGModule, caps: &ClassifyCaps) -> bool {
    let action = module.action();
    module.is_finite()
        && action.group().order() <= caps.max_group
        && action.gamma().order() <= caps.max_gamma
        && module
            .carrier()
            .order()
            .is_some_and(|n| n <= num_bigint::BigInt::from(caps.max_module))
}

pub fn verify(problem: &Problem, r: &mut Report) -> Result<(), Error> {
    let s = &problem.settings;
    let module = &problem.module;
    let action = &problem.action;
    let n = s.max_degree;
    let unnorm = BarOptions {
        normalized: false,
        ..s.bar
    };
    let norm = BarOptions {
        normalized: true,
        ..s.bar
    };

    // Complexes.
    for opts in [unnorm, norm] {
        let tag = if opts.normalized {
            "normalized"
        } else {
            "unnormalized"
        };
        let ok = cochain_complex(module, n, &opts)?
            .check_square_zero()
            .is_ok();
        r.check(format!("δ∘δ = 0 ({tag})"), ok, "");
        let ok = chain_complex(module, n, &opts)?.check_square_zero().is_ok();
        r.check(format!("d∘d = 0 ({tag})"), ok, "");
    }
    let coh = cohomology(module, n, &unnorm)?.groups;
    let hom = homology(module, n, &unnorm)?.groups;
    r.value("H^*", list(&coh));
    r.value("H_*", list(&hom));
    same(
        "normalized cohomology agrees",
        r,
        &coh,
        &cohomology(module, n, &norm)?.groups,
    );
    same(
        "normalized homology agrees",
        r,
        &hom,
        &homology(module, n, &norm)?.groups,
    );

    // Degree one.
    let d = derivations(module)?;
    if n >= 1 {
        let ok = d.h1.group() == &coh[1];
        r.check(
            "Der/PDer equals H^1",
            ok,
            format!("{} vs {}", d.h1.group(), coh[1]),
        );
    }
    let cmp = h1_comparison(action, &unnorm)?;
    r.check(
        "0 → Γ·G/([G,G]∩Γ·G) → H_1(G) → H_1^Γ(G) → 0",
        cmp.holds(),
        format!("{} → {} → {}", cmp.kernel_term, cmp.h1, cmp.h1_gamma),
    );
    let z = GammaGModule::trivial_cyclic(action.clone(), 0);
    let h1z = homology(&z, 1, &unnorm)?.groups[1].clone();
    match gamma_abelianization(action) {
        Ok(ab) => r.check(
            "H_1^Γ(G) ≅ G/[G,G]_Γ",
            h1z == ab.group,
            format!("{h1z} vs {}", ab.group),
        ),
        Err(Error::CheckFailed(why)) => r.check("H_1^Γ(G) ≅ G/[G,G]_Γ", false, why),
        Err(e) => return Err(e),
    }
    let ig = augmentation_ideal(action);
    let iz = tensor_over_g_gamma(&ig, &z)?;
    r.check("H_1^Γ(G) ≅ I(G) ⊗ Z", h1z == iz, format!("{h1z} vs {iz}"));

    // Trivial-action coefficients.
    if module.g_acts_trivially() && module.gamma_acts_trivially() {
        let rows = uct_check(module, n, &unnorm)?;
        let bad = rows.iter().find(|row| !row.holds());
        r.check(
            "universal coefficients",
            bad.is_none(),
            bad.map(|row| format!("degree {}", row.degree))
                .unwrap_or_default(),
        );
        if let Ok(ab) = gamma_abelianization(action) {
            let lhs = tensor_over_g_gamma(&ig, module)?;
            let rhs = tensor(&ab.group, &module.carrier());
            r.check(
                "I(G) ⊗ A ≅ G/[G,G]_Γ ⊗ A",
                lhs == rhs,
                format!("{lhs} vs {rhs}"),
            );
        }
    }

    // Γ trivial on G.
    if action.is_trivial() && !module.gamma_acts_trivially() {
        let inv = module.gamma_invariant_module()?;
        let coinv = module.gamma_coinvariant_module()?;
        same(
            "H^n_Γ(G,A) = H^n(G,A^Γ)",
            r,
            &coh,
            &cohomology(&inv, n, &unnorm)?.groups,
        );
        same(
            "H_n^Γ(G,A) = H_n(G,A_Γ)",
            r,
            &hom,
            &homology(&coinv, n, &unnorm)?.groups,
        );
    }

    // Tate groups.
    if module.tate_precondition() {
        let paper = tate(module, -1, 0, TateConvention::Paper, &unnorm)?;
        let classical = tate(module, -1, 0, TateConvention::Classical, &unnorm)?;
        let swapped = paper.get(0) == classical.get(-1) && paper.get(-1) == classical.get(0);
        r.value(
            "Ĥ^{-1}, Ĥ^0 (paper)",
            list(&[
                paper.get(-1).unwrap().clone(),
                paper.get(0).unwrap().clone(),
            ]),
        );
        r.check("Tate conventions are swapped", swapped, "");
    } else {
        r.value("tate", "skipped: Γ acts nontrivially on N_G(A)");
    }

    // Cup products.
    let b = problem.cup_with.as_ref().unwrap_or(module);
    let failures = leibniz_failures(module, b, 1, 1, LEIBNIZ_SAMPLES, LEIBNIZ_SEED, &unnorm)?;
    r.check(
        "Leibniz rule",
        failures == 0,
        format!("{failures} of {LEIBNIZ_SAMPLES} random pairs fail"),
    );

    // Extensions.
    let caps = ClassifyCaps::default();
    if classification_in_caps(module, &caps) {
        let c = classify(module, &caps, &unnorm)?;
        r.check(
            "extension classes biject with H^2",
            c.holds(),
            format!("{} classes, H^2 = {}", c.class_total_orders.len(), c.h2),
        );
    }

    if let Some(ses) = &problem.ses {
        les_section(r, "cohomology", &les(ses, n, Direction::Cochain, &unnorm)?);
        les_section(r, "homology", &les(ses, n, Direction::Chain, &unnorm)?);
        match tate_splice(ses, &unnorm) {
            Ok(rep) => les_section(r, "tate", &rep),
            Err(Error::Precondition(why)) => r.value("tate splice", format!("skipped: {why}")),
            Err(e) => return Err(e),
        }
    }
    if let Some(sub) = &problem.normal_subgroup {
        let t = five_term_tail(action, sub, &unnorm)?;
        r.check(
            "N/[E,N]_Γ → H_1^Γ(E) → H_1^Γ(E/N) → 0",
            t.holds(),
            format!("{} → {} → {}", t.left, t.middle, t.right),
        );
    }
    Ok(())
}
