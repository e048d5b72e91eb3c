//! Command dispatch.

use crate::bar::Direction;
use crate::cohom::{
    cohomology, cup_classes, derivations, homology, les, tate, tate_splice, LesReport,
};
use crate::eqgrp::{gamma_abelianization, is_gamma_perfect, lower_gamma_series, t_gamma, Subgroup};
use crate::ext::{classify, ClassifyCaps};
use crate::Error;

use super::report::Report;
use super::spec::{Problem, Settings};
use super::verify::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Cohomology,
    Homology,
    Tate,
    Derivations,
    Cup,
    Abelianize,
    GammaSeries,
    Extensions,
    Les,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Cohomology => "cohomology",
            Command::Homology => "homology",
            Command::Tate => "tate",
            Command::Derivations => "derivations",
            Command::Cup => "cup",
            Command::Abelianize => "abelianize",
            Command::GammaSeries => "gamma-series",
            Command::Extensions => "extensions",
            Command::Les => "les",
            Command::Verify => "verify",
        }
    }
}

fn echo(report: &mut Report, command: Command, s: &Settings) {
    match command {
        Command::Cohomology | Command::Homology | Command::Les | Command::Verify => {
            report.setting("max_degree", s.max_degree);
        }
        Command::Tate => {
            report.setting("from", s.tate_from);
            report.setting("to", s.tate_to);
            report.setting("convention", convention_name(s));
        }
        Command::Cup => {
            report.setting("p", s.p);
            report.setting("q", s.q);
        }
        Command::GammaSeries => report.setting("depth", s.depth),
        Command::Derivations | Command::Abelianize | Command::Extensions => {}
    }
    if !matches!(
        command,
        Command::Derivations | Command::Abelianize | Command::GammaSeries
    ) {
        report.setting("normalized", s.bar.normalized);
        report.setting("cap", s.bar.cap);
    }
}

pub(super) fn convention_name(s: &Settings) -> &'static str {
    match s.convention {
        crate::cohom::TateConvention::Paper => "paper",
        crate::cohom::TateConvention::Classical => "classical",
    }
}

pub(super) fn subgroup_text(h: &Subgroup) -> String {
    format!("{{{}}} (order {})", h.names().join(", "), h.order())
}

/// Runs one command on a validated problem.
pub fn run(command: Command, problem: &Problem) -> Result<Report, Error> {
    let s = &problem.settings;
    let module = &problem.module;
    let action = &problem.action;
    let mut r = Report::new(command.name());
    echo(&mut r, command, s);
    match command {
        Command::Cohomology => {
            let res = cohomology(module, s.max_degree, &s.bar)?;
            for (n, g) in res.groups.iter().enumerate() {
                r.group(format!("H^{n}"), g);
            }
        }
        Command::Homology => {
            let res = homology(module, s.max_degree, &s.bar)?;
            for (n, g) in res.groups.iter().enumerate() {
                r.group(format!("H_{n}"), g);
            }
        }
        Command::Tate => {
            let res = tate(module, s.tate_from, s.tate_to, s.convention, &s.bar)?;
            r.value("convention", convention_name(s));
            for (n, g) in &res.groups {
                r.group(format!("Ĥ^{n}"), g);
            }
        }
        Command::Derivations => {
            let d = derivations(module)?;
            r.group("Der", d.derivations.group());
            r.group("PDer", d.principal.group());
            r.group("H^1", d.h1.group());
        }
        Command::Cup => {
            let b = problem.cup_with.as_ref().unwrap_or(module);
            let t = cup_classes(module, b, s.p, s.q, &s.bar)?;
            r.group(format!("H^{}(A)", s.p), &t.left);
            r.group(format!("H^{}(B)", s.q), &t.right);
            r.group(format!("H^{}(A⊗B)", s.p + s.q), &t.target);
            let mut nonzero = false;
            for (i, row) in t.table.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    nonzero |= c.iter().any(|x| !num_traits::Zero::is_zero(x));
                    let coords: Vec<String> = c.iter().map(ToString::to_string).collect();
                    r.value(format!("x{i} ∪ y{j}"), format!("[{}]", coords.join(", ")));
                }
            }
            r.value("nonvanishing", nonzero);
        }
        Command::Abelianize => {
            let ab = gamma_abelianization(action)?;
            r.value("[G,G]_Γ", subgroup_text(&ab.commutator));
            r.group("G/[G,G]_Γ", &ab.group);
            r.group("T_Γ(G)", &t_gamma(action)?);
            r.value("Γ-perfect", is_gamma_perfect(action));
        }
        Command::GammaSeries => {
            let series = lower_gamma_series(action, s.depth)?;
            for (i, h) in series.terms.iter().enumerate() {
                r.value(format!("Γ_{i}"), subgroup_text(h));
            }
            match series.stabilized_at {
                Some(i) => r.value("stabilized_at", i),
                None => r.value("stabilized_at", "not within depth"),
            }
        }
        Command::Extensions => {
            let c = classify(module, &ClassifyCaps::default(), &s.bar)?;
            r.group("H^2", &c.h2);
            r.group("Z^2", &c.cocycle_group);
            r.value("classes", c.class_total_orders.len());
            let orders: Vec<String> = c
                .class_total_orders
                .iter()
                .map(ToString::to_string)
                .collect();
            r.value("total group orders", orders.join(", "));
            r.check("pairwise inequivalent", c.pairwise_inequivalent, "");
            r.check("count equals |H^2|", c.count_matches, "");
            if let Some(e) = c.exhaustive {
                r.check("every cocycle matches exactly one class", e, "");
            }
        }
        Command::Les => {
            let ses = problem.ses.as_ref().ok_or_else(|| Error::Spec {
                path: "ses".into(),
                reason: "the les command needs a short exact sequence".into(),
            })?;
            les_section(
                &mut r,
                "cohomology",
                &les(ses, s.max_degree, Direction::Cochain, &s.bar)?,
            );
            les_section(
                &mut r,
                "homology",
                &les(ses, s.max_degree, Direction::Chain, &s.bar)?,
            );
            match tate_splice(ses, &s.bar) {
                Ok(rep) => les_section(&mut r, "tate", &rep),
                Err(Error::Precondition(why)) => r.value("tate", format!("skipped: {why}")),
                Err(e) => return Err(e),
            }
        }
        Command::Verify => verify(problem, &mut r)?,
    }
    Ok(r)
}

pub(super) fn les_section(r: &mut Report, name: &str, rep: &LesReport) {
    for row in &rep.rows {
        r.group(format!("{name}: {}", row.label), &row.group);
    }
    let bad: Vec<&str> = rep
        .rows
        .iter()
        .filter(|row| row.exact == Some(false))
        .map(|row| row.label.as_str())
        .collect();
    let detail = if bad.is_empty() {
        String::new()
    } else {
        format!("not exact at {}", bad.join(", "))
    };
    r.check(format!("{name} sequence exact"), bad.is_empty(), detail);
    r.check(
        format!("{name} connecting maps additive"),
        rep.connecting_additive,
        "",
    );
}
