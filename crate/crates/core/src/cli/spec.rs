//! The JSON problem document and its validation into library objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::bar::BarOptions;
use crate::cohom::TateConvention;
use crate::eqgrp::Subgroup;
use crate::gmod::{GammaGModule, ModuleMap, ProperSes};
use crate::grp::{FiniteGroup, GammaAction, DEFAULT_GROUP_CAP, DEFAULT_TUPLE_CAP};
use crate::zmod::IntMatrix;
use crate::Error;

/// Version of the problem document and of the structured report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub group: GroupSpec,
    #[serde(default)]
    pub gamma: Option<GroupSpec>,
    /// Γ element name -> (G generator name -> image name).
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub module: Option<ModuleSpec>,
    /// Second coefficient module for cup products (defaults to `module`).
    #[serde(default)]
    pub cup_with: Option<ModuleSpec>,
    /// `0 -> sub -> module -> quotient -> 0`.
    #[serde(default)]
    pub ses: Option<SesSpec>,
    /// Generators of a normal Γ-subgroup for the five-term tail.
    #[serde(default)]
    pub normal_subgroup: Option<Vec<String>>,
    #[serde(default)]
    pub options: OptionsSpec,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub preset: Option<String>,
    /// Full multiplication table on element indices.
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    /// Generating permutations as 1-based image lists.
    #[serde(default)]
    pub permutations: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    /// Carrier `⊕ Z/m_i`, with 0 for `Z`.
    pub moduli: Vec<u64>,
    /// G element name -> action matrix (rows).
    #[serde(default)]
    pub g: BTreeMap<String, Vec<Vec<i64>>>,
    /// Γ element name -> action matrix (rows).
    #[serde(default)]
    pub gamma: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SesSpec {
    pub sub: ModuleSpec,
    pub quotient: ModuleSpec,
    pub alpha: Vec<Vec<i64>>,
    pub beta: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    pub max_degree: Option<usize>,
    pub tate_from: Option<i64>,
    pub tate_to: Option<i64>,
    pub convention: Option<TateConvention>,
    pub normalized: Option<bool>,
    pub cap: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub depth: Option<usize>,
}

/// Resolved run settings (document options overridden by command-line flags).
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub max_degree: usize,
    pub tate_from: i64,
    pub tate_to: i64,
    pub convention: TateConvention,
    pub bar: BarOptions,
    pub p: usize,
    pub q: usize,
    pub depth: usize,
}

impl Settings {
    pub fn from_options(o: &OptionsSpec) -> Self {
        Self {
            max_degree: o.max_degree.unwrap_or(3),
            tate_from: o.tate_from.unwrap_or(-2),
            tate_to: o.tate_to.unwrap_or(2),
            convention: o.convention.unwrap_or_default(),
            bar: BarOptions {
                normalized: o.normalized.unwrap_or(false),
                cap: o.cap.unwrap_or(DEFAULT_TUPLE_CAP),
            },
            p: o.p.unwrap_or(1),
            q: o.q.unwrap_or(1),
            depth: o.depth.unwrap_or(4),
        }
    }
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub action: GammaAction,
    pub module: GammaGModule,
    pub cup_with: Option<GammaGModule>,
    pub ses: Option<ProperSes>,
    pub normal_subgroup: Option<Subgroup>,
    pub settings: Settings,
}

fn spec_err(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Spec {
        path: path.to_string(),
        reason: e.to_string(),
    }
}

/// Parses a JSON document; errors carry the path of the offending value.
pub fn parse_spec(text: &str) -> Result<ProblemSpec, Error> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        spec_err(if path == "." { "$" } else { &path }, inner)
    })
}

fn build_group(spec: &GroupSpec, path: &str) -> Result<FiniteGroup, Error> {
    let given = [
        spec.preset.is_some(),
        spec.table.is_some(),
        spec.permutations.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if given != 1 {
        return Err(spec_err(
            path,
            "exactly one of preset, table, permutations is required",
        ));
    }
    if spec.names.is_some() && spec.table.is_none() {
        return Err(spec_err(
            &format!("{path}.names"),
            "names are only accepted with a table",
        ));
    }
    let result = if let Some(p) = &spec.preset {
        FiniteGroup::preset(p).map_err(|e| (format!("{path}.preset"), e))
    } else if let Some(t) = &spec.table {
        FiniteGroup::from_table(t, spec.names.clone()).map_err(|e| (format!("{path}.table"), e))
    } else {
        let perms = spec.permutations.as_ref().unwrap();
        let mut zero_based = Vec::new();
        for (i, p) in perms.iter().enumerate() {
            if p.contains(&0) {
                return Err(spec_err(
                    &format!("{path}.permutations[{i}]"),
                    "images are 1-based",
                ));
            }
            zero_based.push(p.iter().map(|&x| x - 1).collect::<Vec<_>>());
        }
        FiniteGroup::from_permutations(&zero_based, DEFAULT_GROUP_CAP)
            .map_err(|e| (format!("{path}.permutations"), e))
    };
    result.map_err(|(p, e)| match e {
        Error::CapExceeded { .. } => e,
        other => spec_err(&p, other),
    })
}

fn element(g: &FiniteGroup, name: &str, path: &str) -> Result<usize, Error> {
    g.index_of(name).ok_or_else(|| {
        spec_err(
            path,
            format!(
                "no element named {name:?} (known: {})",
                g.names().join(", ")
            ),
        )
    })
}

fn matrix(rows: &[Vec<i64>], path: &str) -> Result<IntMatrix, Error> {
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(spec_err(&format!("{path}[{i}]"), "ragged matrix"));
    }
    Ok(IntMatrix::from_rows(rows))
}

fn build_module(
    spec: &ModuleSpec,
    action: &GammaAction,
    path: &str,
) -> Result<GammaGModule, Error> {
    let moduli: Vec<BigInt> = spec.moduli.iter().map(|&m| BigInt::from(m)).collect();
    let mut g_gens = Vec::new();
    for (name, rows) in &spec.g {
        let p = format!("{path}.g.{name}");
        g_gens.push((element(action.group(), name, &p)?, matrix(rows, &p)?));
    }
    let mut gamma_gens = Vec::new();
    for (name, rows) in &spec.gamma {
        let p = format!("{path}.gamma.{name}");
        gamma_gens.push((element(action.gamma(), name, &p)?, matrix(rows, &p)?));
    }
    let r = moduli.len();
    complete_generators(action.group(), &mut g_gens, r);
    complete_generators(action.gamma(), &mut gamma_gens, r);
    GammaGModule::new(action.clone(), moduli, &g_gens, &gamma_gens).map_err(|e| spec_err(path, e))
}

/// Unlisted generators act trivially once any action matrix is given.
fn complete_generators(group: &FiniteGroup, gens: &mut Vec<(usize, IntMatrix)>, rank: usize) {
    if gens.is_empty() {
        return;
    }
    let listed: Vec<usize> = gens.iter().map(|(i, _)| *i).collect();
    if group.closure(&listed).len() == group.order() {
        return;
    }
    for x in group.generators() {
        if !listed.contains(&x) {
            gens.push((x, IntMatrix::identity(rank)));
        }
    }
}

fn build_action(
    spec: &ProblemSpec,
    gamma: Arc<FiniteGroup>,
    g: Arc<FiniteGroup>,
) -> Result<GammaAction, Error> {
    if spec.action.is_empty() {
        return Ok(GammaAction::trivial(gamma, g));
    }
    let mut images = Vec::new();
    for (sname, gens) in &spec.action {
        let path = format!("action.{sname}");
        let s = element(&gamma, sname, &path)?;
        let mut pairs = Vec::new();
        for (x, y) in gens {
            let p = format!("{path}.{x}");
            pairs.push((element(&g, x, &p)?, element(&g, y, &p)?));
        }
        let perm = g
            .extend_hom(&g, &pairs)
            .map_err(|e| spec_err(&path, format!("Γ element {sname}: {e}")))?;
        if !g.is_automorphism(&perm) {
            return Err(spec_err(
                &path,
                format!("image of Γ element {sname} is not an automorphism of G"),
            ));
        }
        images.push((s, perm));
    }
    // Γ generators without listed images act trivially.
    let listed: Vec<usize> = images.iter().map(|(s, _)| *s).collect();
    if gamma.closure(&listed).len() < gamma.order() {
        for s in gamma.generators() {
            if !listed.contains(&s) {
                images.push((s, g.elements().collect()));
            }
        }
    }
    GammaAction::new(gamma, g, &images).map_err(|e| spec_err("action", e))
}

/// Validates a parsed document.
pub fn build_problem(spec: &ProblemSpec) -> Result<Problem, Error> {
    let g = Arc::new(build_group(&spec.group, "group")?);
    let gamma = Arc::new(match &spec.gamma {
        Some(s) => build_group(s, "gamma")?,
        None => FiniteGroup::trivial(),
    });
    let action = build_action(spec, gamma, g)?;
    let module = match &spec.module {
        Some(m) => build_module(m, &action, "module")?,
        None => GammaGModule::trivial_cyclic(action.clone(), 0),
    };
    let cup_with = spec
        .cup_with
        .as_ref()
        .map(|m| build_module(m, &action, "cup_with"))
        .transpose()?;
    let ses = match &spec.ses {
        None => None,
        Some(s) => {
            let sub = build_module(&s.sub, &action, "ses.sub")?;
            let quot = build_module(&s.quotient, &action, "ses.quotient")?;
            let alpha = ModuleMap::new(sub, module.clone(), matrix(&s.alpha, "ses.alpha")?)
                .map_err(|e| spec_err("ses.alpha", e))?;
            let beta = ModuleMap::new(module.clone(), quot, matrix(&s.beta, "ses.beta")?)
                .map_err(|e| spec_err("ses.beta", e))?;
            Some(ProperSes::new(alpha, beta).map_err(|e| match e {
                Error::NotProper(_) | Error::Undecidable(_) => e,
                other => spec_err("ses", other),
            })?)
        }
    };
    let normal_subgroup = match &spec.normal_subgroup {
        None => None,
        Some(names) => {
            let gens = names
                .iter()
                .enumerate()
                .map(|(i, n)| element(action.group(), n, &format!("normal_subgroup[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let h = Subgroup::generated(&action, &gens);
            if !h.is_normal() || !h.is_gamma_stable() {
                return Err(spec_err(
                    "normal_subgroup",
                    "generated subgroup is not a normal Γ-subgroup",
                ));
            }
            Some(h)
        }
    };
    Ok(Problem {
        action,
        module,
        cup_with,
        ses,
        normal_subgroup,
        settings: Settings::from_options(&spec.options),
    })
}
