//! Exit criteria. Every criterion runs at its stated tolerance and prints a
//! single PASS/FAIL line; the process fails if any criterion does.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voliso::criteria::{
    classification_verdict, classify_structure, DEFAULT_TOL, DEFAULT_T_GRID, DEFAULT_Z_GRID,
};
use voliso::energy::CatalogId;
use voliso::oracle::{
    acoustic_tensor, analytic_second_derivative, brute_force_check, fd_second_derivative, Mat2,
    OracleVerdict, RankOneDirection, SampleSpec,
};
use voliso::scalar_inf::convexity_verdict;
use voliso::scan::{scan_values, CellVerdict, DEFAULT_DIRECTIONS};
use voliso::stress::{
    infinitesimal_moduli, invertibility_verdict, linear_rank_one_check, principal_cauchy,
    stress_jacobian_det, Invertibility, LinearVerdict, DEFAULT_INVERTIBILITY_GRID,
};
use voliso::{
    catalog, ks_check, main_check, necessary_battery, voliso_check, ConditionId, Grid,
    InfimumDomain, Overall, PairGrid, SingularPair, SplitEnergy,
};

/// Accumulates the checks of one criterion.
struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    fn new() -> Self {
        Self { items: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.items.push((what.into(), ok));
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.check(
            format!("{what} = {got:.12} (want {want:.12}, |err| {err:.1e} < {tol:.0e})"),
            err < tol,
        );
    }
}

type Criterion = fn(&mut Checks) -> voliso::Result<()>;

fn energy(name: &str, h: &str, f: &str) -> SplitEnergy {
    SplitEnergy::new(name, h, f).expect("valid energy")
}

fn example(id: CatalogId) -> SplitEnergy {
    catalog(id).expect("catalog energy")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_matrix(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Mat2 {
    let (l1, l2) = (log_uniform(r, lo, hi), log_uniform(r, lo, hi));
    let (a, b) = (r.gen_range(0.0..2.0 * PI), r.gen_range(0.0..2.0 * PI));
    Mat2::rotation(a) * Mat2::diag(l1, l2) * Mat2::rotation(b)
}

fn random_direction(r: &mut ChaCha8Rng) -> RankOneDirection {
    RankOneDirection::from_angles(r.gen_range(0.0..PI), r.gen_range(0.0..PI))
}

/// `μ·ĥ(t)` and `(κ/2)·ĥ(z)` for a normalized profile in `@` with `ĥ″(1) = 1`.
fn idealized(mu: f64, kappa: f64, profile: &str) -> SplitEnergy {
    let h = format!("{mu}*({})", profile.replace('@', "t"));
    let f = format!("({kappa}/2)*({})", profile.replace('@', "z"));
    SplitEnergy::new("idealized", &h, &f).expect("idealized energy")
}

const DISTORTION: &str = "(1/2)*(@ + 1/@) - 1";

fn exp_profile(k: f64) -> String {
    format!("(exp({k}*log(@)^2) - 1)/(2*{k})")
}

fn example1(c: &mut Checks) -> voliso::Result<()> {
    let e = example(CatalogId::Example1);
    let m = main_check(&e, &DEFAULT_T_GRID, &InfimumDomain::default(), DEFAULT_TOL)?;
    c.close("f0", m.f0.value, 3f64.sqrt() / 15.0, 1e-8);
    c.close("argmin f0", m.f0.at, 3f64.powf(0.25), 1e-6);
    c.close("h0", m.h0.value, -0.101677, 1e-4);
    c.check(
        format!("main overall {}", m.verdict.overall),
        m.verdict.overall == Overall::RankOneConvex,
    );
    let v = voliso_check(&e, &DEFAULT_T_GRID, &DEFAULT_Z_GRID, DEFAULT_TOL)?;
    c.check(
        format!("conditions A-D overall {}", v.overall),
        v.overall == Overall::RankOneConvex,
    );
    let k = ks_check(&e.as_general(), &PairGrid::default(), DEFAULT_TOL)?;
    c.check(
        format!("KS overall {}", k.overall),
        k.overall == Overall::RankOneConvex,
    );
    let o = brute_force_check(&e, &SampleSpec::default());
    c.check(
        format!(
            "oracle {} samples, min normalized {:.3e}",
            o.samples, o.min_normalized
        ),
        o.verdict == OracleVerdict::NoViolationFound,
    );
    Ok(())
}

fn example2(c: &mut Checks) -> voliso::Result<()> {
    let e = example(CatalogId::Example2);
    let m = main_check(&e, &DEFAULT_T_GRID, &InfimumDomain::default(), DEFAULT_TOL)?;
    c.close("f0", m.f0.value, -8.0, 1e-8);
    c.close("argmin f0", m.f0.at, 1.0, 1e-8);
    c.close("h0", m.h0.value, 24.0 * 3f64.sqrt() / 5.0, 1e-6);
    c.check(
        format!("main overall {}", m.verdict.overall),
        m.verdict.overall == Overall::RankOneConvex,
    );
    let moduli = infinitesimal_moduli(&e)?;
    c.close("mu", moduli.mu, 48.0 / 5.0, 1e-9);
    c.close("kappa", moduli.kappa, -8.0, 1e-9);
    Ok(())
}

fn distortion_energies(c: &mut Checks) -> voliso::Result<()> {
    let convex = [
        (1.0, "(z - 1)^2"),
        (2.0, "(3/2)*(z - 1)^2"),
        (0.5, "z - 1 - log(z)"),
        (1.0, "(1/2)*(z + 1/z) - 1"),
        (3.0, "(z - 1/z)^2"),
        (1.0, "z^2 - z - 1 + 1/z"),
        (0.25, "z*log(z) - z + 1"),
        (1.0, "(z - 1)^4 + (z - 1)^2"),
        (5.0, "z^3/3 - z"),
        (1.0, "1/z + z^2/2"),
    ];
    let mut ok = 0;
    for (mu, f) in convex {
        let e = energy("k", &format!("{mu}*(1/2)*(t + 1/t)"), f);
        let v = classification_verdict(&classify_structure(&e), DEFAULT_TOL);
        if v.as_ref()
            .is_some_and(|v| v.overall == Overall::RankOneConvex)
        {
            ok += 1;
        } else {
            c.check(format!("mu = {mu}, f = {f}: {v:?}"), false);
        }
    }
    c.check(
        format!("{ok}/10 convex f classified RankOneConvex"),
        ok == 10,
    );

    let e = energy("k", "(1/2)*(t + 1/t)", "-(z - 1)^2");
    let v = classification_verdict(&classify_structure(&e), DEFAULT_TOL);
    c.check(
        "f = -(z-1)^2 classified NotRankOneConvex",
        v.is_some_and(|v| v.overall == Overall::NotRankOneConvex),
    );
    let m = main_check(&e, &DEFAULT_T_GRID, &InfimumDomain::default(), DEFAULT_TOL)?;
    let first = m.verdict.report(ConditionId::Main1).expect("Main1");
    c.check(
        format!(
            "main overall {}, condition 1 {:?} with witness {:?}",
            m.verdict.overall, first.verdict, first.witness
        ),
        m.verdict.overall == Overall::NotRankOneConvex
            && first.verdict.is_failure()
            && first.witness.is_some(),
    );
    let o = brute_force_check(&e, &SampleSpec::default());
    match o.verdict {
        OracleVerdict::Violation { f, xi, eta, value } => {
            let fd = fd_second_derivative(&e, &f, &RankOneDirection::new(xi, eta), None)?;
            c.check(
                format!("oracle violation D2W = {value:.4e}, finite differences {fd:.4e}"),
                value < 0.0 && fd < 0.0,
            );
        }
        OracleVerdict::NoViolationFound => c.check("oracle found no violation", false),
    }
    Ok(())
}

fn exp_hencky_cones(c: &mut Checks) -> voliso::Result<()> {
    let e = example(CatalogId::ExpHenckyIso { mu: 1.0, k: 0.1 });
    let k = ks_check(&e.as_general(), &PairGrid::default(), DEFAULT_TOL)?;
    c.check(
        format!("KS overall {}", k.overall),
        k.overall == Overall::NotRankOneConvex,
    );
    let m = main_check(&e, &DEFAULT_T_GRID, &InfimumDomain::default(), DEFAULT_TOL)?;
    c.check(
        format!("main overall {}", m.verdict.overall),
        m.verdict.overall == Overall::NotRankOneConvex,
    );

    let axis: Vec<f64> = (-40..=40).map(|k| 2f64.powf(k as f64 / 4.0)).collect();
    let map = scan_values(&e, &axis, &axis, DEFAULT_DIRECTIONS, DEFAULT_TOL);
    let n = axis.len() as i64;
    let (mut total, mut same) = (0usize, 0usize);
    for i in 0..n {
        for j in 0..n {
            for shift in [-4, 4] {
                let (a, b) = (i + shift, j + shift);
                if (0..n).contains(&a) && (0..n).contains(&b) {
                    total += 1;
                    let here = map.cell(i as usize, j as usize).verdict;
                    same += usize::from(here == map.cell(a as usize, b as usize).verdict);
                }
            }
        }
    }
    c.check(format!("ray invariance {same}/{total}"), same == total);
    let non = map.count(CellVerdict::NonElliptic);
    c.check(
        format!(
            "{non} non-elliptic and {} elliptic cells",
            map.count(CellVerdict::Elliptic)
        ),
        non > 0 && map.count(CellVerdict::Elliptic) > 0,
    );
    Ok(())
}

fn route_equivalence(c: &mut Checks) -> voliso::Result<()> {
    let g = Grid::log(1e-2, 1e2, 201);
    let grid = PairGrid::Split { t: g, z: g };
    let domain = InfimumDomain::new(g.lo, g.hi);
    let mut energies: Vec<SplitEnergy> =
        CatalogId::all_defaults().into_iter().map(example).collect();
    let mut r = rng(2024);
    for i in 0..20 {
        let (mu, kappa) = (
            log_uniform(&mut r, 0.1, 10.0),
            log_uniform(&mut r, 0.1, 10.0),
        );
        let profile = if i % 2 == 0 {
            DISTORTION.to_string()
        } else {
            exp_profile(r.gen_range(0.05..0.5))
        };
        energies.push(idealized(mu, kappa, &profile));
    }
    let mut agree = 0;
    for e in &energies {
        let ks = ks_check(&e.as_general(), &grid, DEFAULT_TOL)?.overall;
        let vol = voliso_check(e, &g, &g, DEFAULT_TOL)?.overall;
        let main = main_check(e, &g, &domain, DEFAULT_TOL)?.verdict.overall;
        if ks == vol && vol == main {
            agree += 1;
        } else {
            c.check(
                format!(
                    "{} (h = {}): KS {ks}, A-D {vol}, main {main}",
                    e.name,
                    e.h.source()
                ),
                false,
            );
        }
    }
    c.check(
        format!(
            "{agree}/{} energies agree across three routes",
            energies.len()
        ),
        agree == energies.len(),
    );
    Ok(())
}

fn oracle_cross_validation(c: &mut Checks) -> voliso::Result<()> {
    let mut r = rng(6);
    for id in CatalogId::all_defaults() {
        let e = example(id);
        let (mut worst_fd, mut worst_q) = (0f64, 0f64);
        for _ in 0..1000 {
            let f = random_matrix(&mut r, 1.0 / 3.0, 3.0);
            let d = random_direction(&mut r);
            let a = analytic_second_derivative(&e, &f, &d)?;
            let fd = fd_second_derivative(&e, &f, &d, None)?;
            worst_fd = worst_fd.max((a.value - fd).abs() / a.scale);
            let q = acoustic_tensor(&e, &f, d.eta, None)?;
            let contracted = q.quadratic(d.xi) * d.eta.norm_sq();
            worst_q = worst_q.max((contracted - a.value).abs() / a.scale);
        }
        c.check(
            format!("{id}: analytic vs FD {worst_fd:.1e} < 1e-6, acoustic {worst_q:.1e} < 1e-4"),
            worst_fd < 1e-6 && worst_q < 1e-4,
        );
    }
    Ok(())
}

fn linear_region(c: &mut Checks) -> voliso::Result<()> {
    let angles: Vec<f64> = (0..=180).map(|k| k as f64 * PI / 360.0).collect();
    let mut mismatches = 0;
    for i in -20..=20 {
        for j in -20..=20 {
            let (mu, kappa) = (i as f64 / 10.0, j as f64 / 10.0);
            let min = angles
                .iter()
                .map(|a| 0.5 * mu + 0.5 * kappa * a.cos().powi(2))
                .fold(f64::INFINITY, f64::min);
            let exact = mu >= 0.0 && mu + kappa >= 0.0;
            let strict = mu > 0.0 && mu + kappa > 0.0;
            let v = linear_rank_one_check(mu, kappa);
            let matches = (v != LinearVerdict::Not) == exact
                && (v == LinearVerdict::Strict) == strict
                && (min >= -1e-15) == exact;
            if !matches {
                mismatches += 1;
                c.check(
                    format!("mu = {mu}, kappa = {kappa}: {v:?}, sampled min {min:e}"),
                    false,
                );
            }
        }
    }
    c.check(
        format!("41x41 grid, {mismatches} mismatches"),
        mismatches == 0,
    );
    Ok(())
}

fn fd_jacobian_det(e: &SplitEnergy, l1: f64, l2: f64) -> voliso::Result<(f64, f64)> {
    let sigma = |a: f64, b: f64| -> voliso::Result<(f64, f64)> {
        let s = principal_cauchy(e, SingularPair::new(a, b)?)?;
        Ok((s.sigma1, s.sigma2))
    };
    let (h1, h2) = (1e-5 * l1, 1e-5 * l2);
    let (p1, m1) = (sigma(l1 + h1, l2)?, sigma(l1 - h1, l2)?);
    let (p2, m2) = (sigma(l1, l2 + h2)?, sigma(l1, l2 - h2)?);
    let j11 = (p1.0 - m1.0) / (2.0 * h1);
    let j21 = (p1.1 - m1.1) / (2.0 * h1);
    let j12 = (p2.0 - m2.0) / (2.0 * h2);
    let j22 = (p2.1 - m2.1) / (2.0 * h2);
    Ok((j11 * j22 - j12 * j21, (j11 * j22).abs() + (j12 * j21).abs()))
}

fn stress_invertibility(c: &mut Checks) -> voliso::Result<()> {
    let mut r = rng(8);
    let mut worst = 0f64;
    let energies = [
        example(CatalogId::Example1),
        example(CatalogId::Example2),
        example(CatalogId::HadamardK {
            mu: 1.0,
            kappa: 1.0,
        }),
        example(CatalogId::ExpHencky {
            mu: 1.0,
            k: 1.0,
            kappa: 1.0,
            khat: 1.0,
        }),
    ];
    for k in 0..1000 {
        let e = &energies[k % energies.len()];
        let (l1, l2) = (log_uniform(&mut r, 0.2, 5.0), log_uniform(&mut r, 0.2, 5.0));
        let closed = stress_jacobian_det(e, SingularPair::new(l1, l2)?)?;
        let (fd, scale) = fd_jacobian_det(e, l1, l2)?;
        worst = worst.max((closed - fd).abs() / scale.max(closed.abs()));
    }
    c.check(
        format!("Jacobian determinant vs FD on 1000 states, worst relative {worst:.1e} < 1e-6"),
        worst < 1e-6,
    );

    let g = DEFAULT_INVERTIBILITY_GRID;
    for (h, f) in [
        ("(1/2)*(t + 1/t)", "z + 1/z"),
        ("(t - 1/t)^2", "(z - 1)^2 + 1/z"),
        ("exp(log(t)^2)", "exp(z/10) + 1/z"),
    ] {
        let v = invertibility_verdict(&energy("u", h, f), &g, &g, DEFAULT_TOL)?;
        c.check(
            format!("h = {h}, f = {f}: {v:?}"),
            matches!(v, Invertibility::LocallyInvertible { .. }),
        );
    }
    let v = invertibility_verdict(&example(CatalogId::Example2), &g, &g, DEFAULT_TOL)?;
    c.check(
        format!("example 2: {v:?}"),
        matches!(v, Invertibility::Degenerate { witness, .. } if witness.z == Some(1.0)),
    );
    Ok(())
}

fn necessary_conditions(c: &mut Checks) -> voliso::Result<()> {
    let g = DEFAULT_T_GRID;
    for (id, h_convex) in [(CatalogId::Example1, false), (CatalogId::Example2, true)] {
        let e = example(id);
        let h = convexity_verdict(&e.h, g.lo, g.hi, g.points, DEFAULT_TOL)?;
        let f = convexity_verdict(&e.f, g.lo, g.hi, g.points, DEFAULT_TOL)?;
        let shape = if h_convex {
            h.is_convex() && f.is_non_convex()
        } else {
            h.is_non_convex() && f.is_convex()
        };
        c.check(format!("{id}: h {h:?}, f {f:?}"), shape);
        let battery = necessary_battery(&e, &g, DEFAULT_TOL)?;
        for want in [ConditionId::NecA, ConditionId::NecD] {
            let r = battery.iter().find(|r| r.id == want).expect("report");
            c.check(
                format!("{id}: {want} {:?} margin {:.3e}", r.verdict, r.worst_margin),
                r.verdict == voliso::Verdict::Holds,
            );
        }
    }
    Ok(())
}

fn idealized_family(c: &mut Checks) -> voliso::Result<()> {
    let mut r = rng(10);
    let domain = InfimumDomain::default();
    let mut samples: Vec<(f64, f64)> = vec![(1.0, 1.0), (0.01, 100.0), (100.0, 0.01)];
    samples.extend((0..20).map(|_| (r.gen_range(0.01..10.0), r.gen_range(0.01..10.0))));
    let non_convex = exp_profile(0.1);
    let (mut convex_ok, mut non_convex_ok) = (0, 0);
    for &(mu, kappa) in &samples {
        let e = idealized(mu, kappa, DISTORTION);
        let v = main_check(&e, &DEFAULT_T_GRID, &domain, DEFAULT_TOL)?
            .verdict
            .overall;
        convex_ok += usize::from(v == Overall::RankOneConvex);
        let e = idealized(mu, kappa, &non_convex);
        let v = main_check(&e, &DEFAULT_T_GRID, &domain, DEFAULT_TOL)?
            .verdict
            .overall;
        non_convex_ok += usize::from(v == Overall::NotRankOneConvex);
    }
    let n = samples.len();
    c.check(
        format!("convex profile: {convex_ok}/{n} RankOneConvex"),
        convex_ok == n,
    );
    c.check(
        format!("non-convex profile: {non_convex_ok}/{n} NotRankOneConvex"),
        non_convex_ok == n,
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("example 1 infima, verdict and oracle", example1),
        ("example 2 infima, verdict and moduli", example2),
        (
            "distortion energies classified by convexity of f",
            distortion_energies,
        ),
        (
            "isochoric exp-Hencky fails with ray-invariant cones",
            exp_hencky_cones,
        ),
        ("KS, A-D and main routes agree", route_equivalence),
        (
            "analytic vs finite-difference second derivatives",
            oracle_cross_validation,
        ),
        ("linearized rank-one convexity region", linear_region),
        ("stress Jacobian and invertibility", stress_invertibility),
        (
            "necessary conditions on the worked examples",
            necessary_conditions,
        ),
        (
            "idealized family convex iff profile convex",
            idealized_family,
        ),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut c = Checks::new();
        if let Err(err) = run(&mut c) {
            c.check(format!("error: {err}"), false);
        }
        let pass = c.items.iter().all(|(_, ok)| *ok);
        failed += usize::from(!pass);
        println!(
            "{} criterion {:>2}: {name} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
        for (what, ok) in &c.items {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAILED" });
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
