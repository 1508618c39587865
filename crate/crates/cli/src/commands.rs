use std::fmt::Write as _;

use serde::Serialize;
use voliso::criteria::{
    classification_verdict, classify_structure, Structure, DEFAULT_T_GRID, DEFAULT_Z_GRID,
};
use voliso::oracle::{brute_force_check, BruteForceReport, OracleVerdict, SampleSpec};
use voliso::report::{fmt_sig, ser_f64, EnergySummary, Report, SCHEMA_VERSION};
use voliso::scan::{emit_csv, emit_svg, scan_domain, CellVerdict, ScanSpec};
use voliso::stress::{
    infinitesimal_moduli, invertibility_verdict, linear_rank_one_check, principal_cauchy,
    InfinitesimalModuli, Invertibility, LinearVerdict, StressState, DEFAULT_INVERTIBILITY_GRID,
};
use voliso::{
    main_check, necessary_battery, voliso_check, ConditionReport, Grid, InfimumDomain,
    InfimumResult, Overall, RankOneVerdict, Route, SingularPair, SplitEnergy, Witness,
};

use crate::args::{CheckArgs, CommonArgs, OracleArgs, ReportFormat, ScanArgs, StressArgs};

pub struct Outcome {
    pub code: u8,
    pub output: String,
}

pub fn exit_code(o: Overall) -> u8 {
    match o {
        Overall::RankOneConvex => 0,
        Overall::NotRankOneConvex => 1,
        Overall::Inconclusive => 2,
    }
}

fn label<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => String::from("?"),
    }
}

fn num(x: f64) -> String {
    fmt_sig(x, 9)
}

fn witness_text(w: &Witness) -> String {
    [("t", w.t), ("z", w.z), ("x", w.x), ("y", w.y)]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| format!("{k} = {}", num(v))))
        .collect::<Vec<_>>()
        .join(", ")
}

fn energy_text(out: &mut String, e: &SplitEnergy) {
    let _ = writeln!(out, "energy    {}", e.name);
    let _ = writeln!(out, "h(t)      {}", e.h.source());
    let _ = writeln!(out, "f(z)      {}", e.f.source());
    if !e.params.is_empty() {
        let p: Vec<String> = e
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", num(*v)))
            .collect();
        let _ = writeln!(out, "params    {}", p.join(" "));
    }
}

fn conditions_text(out: &mut String, reports: &[ConditionReport]) {
    for r in reports {
        let _ = write!(
            out,
            "  {:<12} {:<10} margin {:>16}",
            r.id.to_string(),
            label(&r.verdict),
            num(r.worst_margin)
        );
        if let Some(w) = &r.witness {
            let _ = write!(out, "  at {}", witness_text(w));
        }
        out.push('\n');
    }
}

fn first_failure(reports: &[ConditionReport]) -> Option<Witness> {
    reports
        .iter()
        .find(|r| r.verdict.is_failure() && r.witness.is_some())
        .and_then(|r| r.witness)
}

#[derive(Debug, Serialize)]
struct Document<X: Serialize> {
    schema_version: u32,
    command: &'static str,
    energy: EnergySummary,
    #[serde(flatten)]
    body: X,
}

fn document<X: Serialize>(command: &'static str, e: &SplitEnergy, body: X) -> String {
    let d = Document {
        schema_version: SCHEMA_VERSION,
        command,
        energy: e.into(),
        body,
    };
    serde_json::to_string_pretty(&d).expect("document serializes") + "\n"
}

#[derive(Debug, Serialize)]
struct CrossRoute {
    route: Route,
    overall: Overall,
}

#[derive(Debug, Serialize)]
struct CheckExtra {
    h0: InfimumResult,
    f0: InfimumResult,
    necessary: Vec<ConditionReport>,
    cross_routes: Vec<CrossRoute>,
    routes_agree: bool,
    witness: Option<Witness>,
}

/// Combined verdict of the main route and its cross-checks. A decisive
/// primary verdict stands unless another route reaches the opposite
/// decisive verdict or a necessary condition fails under a convex verdict.
fn combine(
    primary: Overall,
    cross: &[CrossRoute],
    necessary: &[ConditionReport],
) -> (Overall, bool) {
    let opposite = |o: Overall| match primary {
        Overall::RankOneConvex => o == Overall::NotRankOneConvex,
        Overall::NotRankOneConvex => o == Overall::RankOneConvex,
        Overall::Inconclusive => false,
    };
    let necessary_broken =
        primary == Overall::RankOneConvex && necessary.iter().any(|r| r.verdict.is_failure());
    let agree = !necessary_broken && !cross.iter().any(|c| opposite(c.overall));
    (
        if agree {
            primary
        } else {
            Overall::Inconclusive
        },
        agree,
    )
}

pub fn check(a: &CheckArgs) -> anyhow::Result<Outcome> {
    let CommonArgs {
        energy,
        tol,
        report,
    } = &a.common;
    let e = energy.load()?;
    let t_grid = a.grid.t_grid(DEFAULT_T_GRID)?;
    let z_grid = a.grid.z_grid(DEFAULT_Z_GRID)?;
    let domain = InfimumDomain::new(a.inf_min, a.inf_max);

    let main = main_check(&e, &t_grid, &domain, *tol)?;
    let necessary = necessary_battery(&e, &t_grid, *tol)?;
    let vol = voliso_check(&e, &t_grid, &z_grid, *tol)?;
    let mut cross = vec![CrossRoute {
        route: vol.route,
        overall: vol.overall,
    }];
    if let Some(v) = classification_verdict(&classify_structure(&e), *tol) {
        cross.push(CrossRoute {
            route: v.route,
            overall: v.overall,
        });
    }
    let (overall, routes_agree) = combine(main.verdict.overall, &cross, &necessary);
    let witness = (overall == Overall::NotRankOneConvex)
        .then(|| first_failure(&main.verdict.reports))
        .flatten();

    let output = match report {
        ReportFormat::Json => {
            let extra = CheckExtra {
                h0: main.h0.clone(),
                f0: main.f0.clone(),
                necessary,
                cross_routes: cross,
                routes_agree,
                witness,
            };
            let mut r = Report::new(&e, &main.verdict, extra);
            r.overall = overall;
            r.to_json() + "\n"
        }
        ReportFormat::Text => {
            let mut out = String::new();
            energy_text(&mut out, &e);
            for (name, var, inf) in [("h0", "t", &main.h0), ("f0", "z", &main.f0)] {
                let _ = write!(
                    out,
                    "{name}        {} at {var} = {}",
                    num(inf.value),
                    num(inf.at)
                );
                if let Some(l) = inf.limit {
                    let _ = write!(out, " (boundary, {})", label(&l));
                }
                out.push('\n');
            }
            let _ = writeln!(out, "route     {}", label(&main.verdict.route));
            conditions_text(&mut out, &main.verdict.reports);
            let _ = writeln!(out, "necessary conditions");
            conditions_text(&mut out, &necessary);
            for c in &cross {
                let _ = writeln!(out, "cross     {:<14} {}", label(&c.route), c.overall);
            }
            if !routes_agree {
                let _ = writeln!(out, "routes disagree");
            }
            let _ = writeln!(out, "overall   {overall}");
            if let Some(w) = &witness {
                let _ = writeln!(out, "witness   {}", witness_text(w));
            }
            out
        }
    };
    Ok(Outcome {
        code: exit_code(overall),
        output,
    })
}

#[derive(Debug, Serialize)]
struct ClassifyExtra {
    structure: Structure,
}

pub fn classify(a: &CommonArgs) -> anyhow::Result<Outcome> {
    let e = a.energy.load()?;
    let structure = classify_structure(&e);
    let verdict = classification_verdict(&structure, a.tol)
        .unwrap_or_else(|| RankOneVerdict::new(Route::Classification, Vec::new()));
    let overall = if verdict.reports.is_empty() {
        Overall::Inconclusive
    } else {
        verdict.overall
    };
    let output = match a.report {
        ReportFormat::Json => {
            let mut r = Report::new(&e, &verdict, ClassifyExtra { structure });
            r.overall = overall;
            r.to_json() + "\n"
        }
        ReportFormat::Text => {
            let mut out = String::new();
            energy_text(&mut out, &e);
            let s = match structure {
                Structure::HadamardK { mu, .. } => format!("HadamardK (mu = {})", num(mu)),
                Structure::IdealizedSameH { mu, kappa, .. } => {
                    format!("IdealizedSameH (mu = {}, kappa = {})", num(mu), num(kappa))
                }
                Structure::General => "General".into(),
            };
            let _ = writeln!(out, "structure {s}");
            conditions_text(&mut out, &verdict.reports);
            let _ = writeln!(out, "overall   {overall}");
            out
        }
    };
    Ok(Outcome {
        code: exit_code(overall),
        output,
    })
}

#[derive(Debug, Serialize)]
struct OracleBody {
    spec: SampleSpec,
    result: BruteForceReport,
}

pub fn oracle(a: &OracleArgs) -> anyhow::Result<Outcome> {
    let e = a.common.energy.load()?;
    Grid::log(a.lambda_min, a.lambda_max, a.grid.max(2)).validate()?;
    let spec = SampleSpec {
        n_lambda: a.grid,
        lambda_lo: a.lambda_min,
        lambda_hi: a.lambda_max,
        refinements: a.samples,
        seed: a.seed,
        tol: a.common.tol,
        ..SampleSpec::default()
    };
    let result = brute_force_check(&e, &spec);
    let code = match result.verdict {
        OracleVerdict::NoViolationFound => 0,
        OracleVerdict::Violation { .. } => 1,
    };
    let output = match a.common.report {
        ReportFormat::Json => document("oracle", &e, OracleBody { spec, result }),
        ReportFormat::Text => {
            let mut out = String::new();
            energy_text(&mut out, &e);
            let w = &result.worst;
            let _ = writeln!(
                out,
                "samples   {} ({} skipped)",
                result.samples, result.skipped
            );
            let _ = writeln!(
                out,
                "minimum   {} at lambda = ({}, {})",
                num(result.min_normalized),
                num(w.lambda1),
                num(w.lambda2)
            );
            match result.verdict {
                OracleVerdict::NoViolationFound => {
                    let _ = writeln!(out, "verdict   no violation found");
                }
                OracleVerdict::Violation { f, xi, eta, value } => {
                    let _ = writeln!(out, "verdict   violation, D2W[xi x eta] = {}", num(value));
                    let _ = writeln!(
                        out,
                        "F         [[{}, {}], [{}, {}]]",
                        num(f.0[0][0]),
                        num(f.0[0][1]),
                        num(f.0[1][0]),
                        num(f.0[1][1])
                    );
                    let _ = writeln!(out, "xi        ({}, {})", num(xi.0[0]), num(xi.0[1]));
                    let _ = writeln!(out, "eta       ({}, {})", num(eta.0[0]), num(eta.0[1]));
                }
            }
            out
        }
    };
    Ok(Outcome { code, output })
}

#[derive(Debug, Serialize)]
struct PointStress {
    lambda1: f64,
    lambda2: f64,
    #[serde(flatten)]
    state: StressState,
}

#[derive(Debug, Serialize)]
struct StressBody {
    moduli: InfinitesimalModuli,
    linear: LinearVerdict,
    invertibility: Invertibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<PointStress>,
}

pub fn stress(a: &StressArgs) -> anyhow::Result<Outcome> {
    let e = a.common.energy.load()?;
    let t_grid = a.grid.t_grid(DEFAULT_INVERTIBILITY_GRID)?;
    let z_grid = a.grid.z_grid(DEFAULT_INVERTIBILITY_GRID)?;
    let moduli = infinitesimal_moduli(&e)?;
    let body = StressBody {
        moduli,
        linear: linear_rank_one_check(moduli.mu, moduli.kappa),
        invertibility: invertibility_verdict(&e, &t_grid, &z_grid, a.common.tol)?,
        at: match a.at.as_deref() {
            Some(&[l1, l2]) => Some(PointStress {
                lambda1: l1,
                lambda2: l2,
                state: principal_cauchy(&e, SingularPair::new(l1, l2)?)?,
            }),
            _ => None,
        },
    };
    let output = match a.common.report {
        ReportFormat::Json => document("stress", &e, body),
        ReportFormat::Text => {
            let mut out = String::new();
            energy_text(&mut out, &e);
            let m = &body.moduli;
            let _ = writeln!(
                out,
                "moduli    mu = {}, kappa = {}, lambda = {}, stress free: {}",
                num(m.mu),
                num(m.kappa),
                num(m.lame_lambda),
                m.stress_free
            );
            let _ = writeln!(out, "linear    {}", label(&body.linear));
            let inv = match &body.invertibility {
                Invertibility::LocallyInvertible { min_f2, min_th2_h1 } => format!(
                    "locally invertible (min f'' = {}, min t h'' + h' = {})",
                    num(*min_f2),
                    num(*min_th2_h1)
                ),
                Invertibility::NotCertified { reason } => format!("not certified: {reason}"),
                Invertibility::Degenerate { witness, value } => {
                    format!("degenerate, {} at {}", num(*value), witness_text(witness))
                }
            };
            let _ = writeln!(out, "invertibility {inv}");
            if let Some(p) = &body.at {
                let s = &p.state;
                let _ = writeln!(
                    out,
                    "at        lambda = ({}, {})",
                    num(p.lambda1),
                    num(p.lambda2)
                );
                let _ = writeln!(out, "sigma     ({}, {})", num(s.sigma1), num(s.sigma2));
                let _ = writeln!(out, "tau_iso   {}", num(s.tau_iso));
                let _ = writeln!(out, "tau_vol   {}", num(s.tau_vol));
                let _ = writeln!(out, "det       {}", num(s.det_d_sigma));
            }
            out
        }
    };
    Ok(Outcome { code: 0, output })
}

#[derive(Debug, Serialize)]
struct Counts {
    elliptic: usize,
    non_elliptic: usize,
    boundary: usize,
    error: usize,
}

#[derive(Debug, Serialize)]
struct ScanBody {
    spec: ScanSpec,
    counts: Counts,
    #[serde(serialize_with = "ser_f64")]
    min_margin: f64,
    outputs: Vec<String>,
}

pub fn scan(a: &ScanArgs) -> anyhow::Result<Outcome> {
    let e = a.common.energy.load()?;
    let mut spec = if a.linear {
        ScanSpec::linear_preset(a.grid)
    } else {
        let d = ScanSpec::default();
        let axis = Grid::log(
            a.lambda_min.unwrap_or(d.lambda1.lo),
            a.lambda_max.unwrap_or(d.lambda1.hi),
            a.grid,
        );
        ScanSpec {
            lambda1: axis,
            lambda2: axis,
            ..d
        }
    };
    spec.directions = a.directions;
    spec.tol = a.common.tol;
    let map = scan_domain(&e, &spec)?;
    let mut outputs = Vec::new();
    if let Some(p) = &a.out_csv {
        emit_csv(&map, p)?;
        outputs.push(p.display().to_string());
    }
    if let Some(p) = &a.out_svg {
        emit_svg(&map, p)?;
        outputs.push(p.display().to_string());
    }
    let body = ScanBody {
        spec,
        counts: Counts {
            elliptic: map.count(CellVerdict::Elliptic),
            non_elliptic: map.count(CellVerdict::NonElliptic),
            boundary: map.count(CellVerdict::Boundary),
            error: map.count(CellVerdict::Error),
        },
        min_margin: map
            .cells
            .iter()
            .map(|c| c.min_margin)
            .fold(f64::INFINITY, f64::min),
        outputs,
    };
    let output = match a.common.report {
        ReportFormat::Json => document("scan", &e, body),
        ReportFormat::Text => {
            let mut out = String::new();
            energy_text(&mut out, &e);
            let c = &body.counts;
            let _ = writeln!(
                out,
                "cells     {} x {}: {} elliptic, {} non-elliptic, {} boundary, {} error",
                map.lambda1.len(),
                map.lambda2.len(),
                c.elliptic,
                c.non_elliptic,
                c.boundary,
                c.error
            );
            let _ = writeln!(out, "minimum   {}", num(body.min_margin));
            for p in &body.outputs {
                let _ = writeln!(out, "wrote     {p}");
            }
            out
        }
    };
    Ok(Outcome { code: 0, output })
}
