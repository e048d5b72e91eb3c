//! Writes the fixture battery: every group of the list, Γ ∈ {1, C2} with
//! involutive automorphisms up to conjugacy, and coefficient modules
//! Z, Z/2, Z/3, Z/4, Z/6 with trivial, Γ-negation and sign-character actions.
//!
//! Usage: `cargo run --example gen_battery -- <output dir>`

use std::path::{Path, PathBuf};

use eqcohom::grp::FiniteGroup;
use serde_json::{json, Map, Value};

const GROUPS: [&str; 10] = [
    "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C8", "D4", "Q8",
];
const COEFFICIENTS: [u64; 5] = [0, 2, 3, 4, 6];

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Involutive automorphisms (identity included), one per Aut-conjugacy class.
fn involution_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let auts = g.automorphisms();
    let id: Vec<usize> = g.elements().collect();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for a in auts.iter().filter(|a| compose(a, a) == id) {
        if seen.contains(a) {
            continue;
        }
        for b in &auts {
            let c = compose(&compose(b, a), &inverse(b));
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        reps.push(a.clone());
    }
    reps.sort_by_key(|a| (a != &id, a.clone()));
    reps
}

/// Nontrivial homomorphisms `G -> {±1}` invariant under `aut`, as values on generators.
fn sign_characters(g: &FiniteGroup, aut: &[usize]) -> Vec<Vec<i64>> {
    let c2 = FiniteGroup::cyclic(2);
    let gens = g.generators();
    let mut out = Vec::new();
    for mask in 1u32..(1 << gens.len()) {
        let pairs: Vec<(usize, usize)> = gens
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, ((mask >> i) & 1) as usize))
            .collect();
        let Ok(chi) = g.extend_hom(&c2, &pairs) else {
            continue;
        };
        if g.elements().any(|x| chi[aut[x]] != chi[x]) {
            continue;
        }
        let values: Vec<i64> = gens
            .iter()
            .map(|&x| if chi[x] == 1 { -1 } else { 1 })
            .collect();
        if !out.contains(&values) {
            out.push(values);
        }
    }
    out
}

fn coefficient_tag(m: u64) -> String {
    if m == 0 {
        "z".into()
    } else {
        format!("z{m}")
    }
}

fn write(dir: &Path, name: &str, doc: &Value) {
    let path: PathBuf = dir.join(format!("{name}.json"));
    let mut text = serde_json::to_string_pretty(doc).expect("json");
    text.push('\n');
    std::fs::write(&path, text).unwrap_or_else(|e| panic!("writing {}: {e}", path.display()));
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "battery".into()));
    std::fs::create_dir_all(&dir).expect("output directory");
    let mut count = 0;
    for gname in GROUPS {
        let g = FiniteGroup::preset(gname).expect("preset");
        let gens = g.generators();
        let id: Vec<usize> = g.elements().collect();
        let mut variants: Vec<(String, Option<Vec<usize>>)> = vec![("1".into(), None)];
        for (i, aut) in involution_classes(&g).into_iter().enumerate() {
            let tag = if aut == id {
                "c2-id".to_string()
            } else {
                format!("c2-a{i}")
            };
            variants.push((tag, Some(aut)));
        }
        for (gtag, aut) in variants {
            let mut base = Map::new();
            base.insert("group".into(), json!({ "preset": gname }));
            if let Some(aut) = &aut {
                base.insert("gamma".into(), json!({ "preset": "C2" }));
                if aut != &id {
                    let images: Map<String, Value> = gens
                        .iter()
                        .map(|&x| (g.name(x).to_string(), json!(g.name(aut[x]))))
                        .collect();
                    base.insert("action".into(), json!({ "g": images }));
                }
            }
            let aut_or_id = aut.clone().unwrap_or_else(|| id.clone());
            let chars = sign_characters(&g, &aut_or_id);
            for m in COEFFICIENTS {
                let ctag = coefficient_tag(m);
                let mut modules = vec![(ctag.clone(), json!({ "moduli": [m] }))];
                if m != 2 {
                    if aut.is_some() {
                        modules.push((
                            format!("{ctag}-neg"),
                            json!({ "moduli": [m], "gamma": { "g": [[-1]] } }),
                        ));
                    }
                    for (k, chi) in chars.iter().enumerate() {
                        let mats: Map<String, Value> = gens
                            .iter()
                            .zip(chi)
                            .map(|(&x, &s)| (g.name(x).to_string(), json!([[s]])))
                            .collect();
                        modules.push((
                            format!("{ctag}-sign{k}"),
                            json!({ "moduli": [m], "g": mats }),
                        ));
                    }
                }
                for (mtag, module) in modules {
                    let mut doc = base.clone();
                    doc.insert("module".into(), module);
                    write(
                        &dir,
                        &format!("{}_{gtag}_{mtag}", gname.to_lowercase()),
                        &Value::Object(doc),
                    );
                    count += 1;
                }
            }
        }
    }
    eprintln!("wrote {count} fixtures to {}", dir.display());
}
