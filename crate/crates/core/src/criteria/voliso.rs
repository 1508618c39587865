use rayon::prelude::*;
use serde::Serialize;

use super::{margin, ConditionId, ConditionReport, RankOneVerdict, Route, Verdict, Witness, Worst};
use crate::energy::SplitEnergy;
use crate::error::Result;
use crate::expr::Jet2;
use crate::grid::Grid;
use crate::scalar_inf::{infimum_weighted_second, InfimumResult, DEFAULT_DOMAIN, DEFAULT_LEVELS};

/// Coefficients of the coupled conditions at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolisoCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl VolisoCoefficients {
    /// From `h′(t)` and `h″(t)`.
    pub fn new(t: f64, h1: f64, h2: f64) -> Self {
        Self {
            a: t * t * (t * t - 1.0) * h1 * h2 - 2.0 * t * h1 * h1,
            b: (t * t + 3.0) * h1 + 2.0 * t * (t * t + 1.0) * h2,
            c: 4.0 * t * (h1 + t * h2),
        }
    }

    pub fn from_jet(t: f64, h: Jet2) -> Self {
        Self::new(t, h.d1, h.d2)
    }
}

/// `b - c = (t-1)·[(t-3)h′ + 2t(t-1)h″]`, evaluated in factored form, with
/// the magnitude of its summands.
fn b_minus_c(t: f64, h1: f64, h2: f64) -> (f64, f64) {
    let (p, q) = ((t - 3.0) * h1, 2.0 * t * (t - 1.0) * h2);
    ((t - 1.0) * (p + q), (t - 1.0).abs() * (p.abs() + q.abs()))
}

/// `b + c = (t+1)·[(t+3)h′ + 2t(t+1)h″]`.
fn b_plus_c(t: f64, h1: f64, h2: f64) -> (f64, f64) {
    let (p, q) = ((t + 3.0) * h1, 2.0 * t * (t + 1.0) * h2);
    ((t + 1.0) * (p + q), (t + 1.0) * (p.abs() + q.abs()))
}

/// Everything about `h` the coupled conditions need at one `t`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TRow {
    pub t: f64,
    pub h1: f64,
    pub h2: f64,
    /// `t²h″(t)`.
    pub iso: f64,
    a: f64,
    a_scale: f64,
    bm: (f64, f64),
    bp: (f64, f64),
    /// `2t/(t-1)·h′ - t²h″`; `None` at `t = 1`.
    pc: Option<(f64, f64)>,
    /// `2t/(t+1)·h′ + t²h″`.
    pd: (f64, f64),
}

impl TRow {
    pub fn new(t: f64, h: Jet2) -> Self {
        let (h1, h2) = (h.d1, h.d2);
        let iso = t * t * h2;
        let (a1, a2) = (t * t * (t * t - 1.0) * h1 * h2, 2.0 * t * h1 * h1);
        let pc = ((t - 1.0).abs() > 1e-12).then(|| {
            let r = 2.0 * t / (t - 1.0) * h1;
            (r - iso, r.abs() + iso.abs())
        });
        let r = 2.0 * t / (t + 1.0) * h1;
        Self {
            t,
            h1,
            h2,
            iso,
            a: a1 - a2,
            a_scale: a1.abs() + a2.abs(),
            bm: b_minus_c(t, h1, h2),
            bp: b_plus_c(t, h1, h2),
            pc,
            pd: (r + iso, r.abs() + iso.abs()),
        }
    }

    pub fn margin_a(&self, w: f64) -> f64 {
        margin(self.iso + w, self.iso.abs() + w.abs())
    }

    /// Condition C for `z²f″ = w`; `None` at `t = 1`.
    pub fn margin_c(&self, w: f64) -> Option<f64> {
        let (p, ps) = self.pc?;
        let m1 = margin(p + w, ps + w.abs());
        let m2 = margin(self.a + self.bm.0 * w, self.a_scale + self.bm.1 * w.abs());
        Some(m1.max(m2))
    }

    pub fn margin_d(&self, w: f64) -> f64 {
        let (p, ps) = self.pd;
        let m1 = margin(p - w, ps + w.abs());
        let m2 = margin(self.a + self.bp.0 * w, self.a_scale + self.bp.1 * w.abs());
        m1.max(m2)
    }
}

pub(crate) fn t_rows(e: &SplitEnergy, grid: &Grid) -> Result<Vec<TRow>> {
    grid.validate()?;
    grid.values()
        .par_iter()
        .map(|&t| Ok(TRow::new(t, e.h_jet(t)?)))
        .collect()
}

/// `(z, z²f″(z))` on the grid.
pub(crate) fn z_weights(e: &SplitEnergy, grid: &Grid) -> Result<Vec<(f64, f64)>> {
    grid.validate()?;
    grid.values()
        .par_iter()
        .map(|&z| Ok((z, z * z * e.f_jet(z)?.d2)))
        .collect()
}

pub(crate) fn check_b(rows: &[TRow], tol: f64, id: ConditionId) -> ConditionReport {
    let mut w = Worst::default();
    for r in rows.iter().filter(|r| r.t >= 1.0) {
        w.observe(r.h1, Witness::t(r.t));
    }
    ConditionReport::from_worst(id, w, tol)
}

/// The split conditions A)–D) on a `(t, z)` grid.
pub fn voliso_check(
    e: &SplitEnergy,
    t_grid: &Grid,
    z_grid: &Grid,
    tol: f64,
) -> Result<RankOneVerdict> {
    let rows = t_rows(e, t_grid)?;
    let zs = z_weights(e, z_grid)?;
    let partial: Vec<[Worst; 3]> = rows
        .par_iter()
        .map(|r| {
            let mut acc = [Worst::default(); 3];
            for &(z, w) in &zs {
                let at = Witness::tz(r.t, z);
                acc[0].observe(r.margin_a(w), at);
                if let Some(m) = r.margin_c(w) {
                    acc[1].observe(m, at);
                }
                acc[2].observe(r.margin_d(w), at);
            }
            acc
        })
        .collect();
    let [a, c, d] = partial.into_iter().fold([Worst::default(); 3], |acc, p| {
        [acc[0].merge(p[0]), acc[1].merge(p[1]), acc[2].merge(p[2])]
    });
    let reports = vec![
        ConditionReport::from_worst(ConditionId::A, a, tol),
        check_b(&rows, tol, ConditionId::B),
        ConditionReport::from_worst(ConditionId::C, c, tol),
        ConditionReport::from_worst(ConditionId::D, d, tol),
    ];
    Ok(RankOneVerdict::new(Route::Voliso, reports))
}

/// Truncated domains for the infima `h₀` and `f₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfimumDomain {
    pub t: (f64, f64),
    pub z: (f64, f64),
    pub levels: usize,
}

impl Default for InfimumDomain {
    fn default() -> Self {
        Self {
            t: DEFAULT_DOMAIN,
            z: DEFAULT_DOMAIN,
            levels: DEFAULT_LEVELS,
        }
    }
}

impl InfimumDomain {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            t: (lo, hi),
            z: (lo, hi),
            levels: DEFAULT_LEVELS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainReport {
    pub verdict: RankOneVerdict,
    pub h0: InfimumResult,
    pub f0: InfimumResult,
}

/// The reduced conditions 1)–4), with `f₀` in place of every `z²f″(z)`.
pub fn main_check(
    e: &SplitEnergy,
    t_grid: &Grid,
    domain: &InfimumDomain,
    tol: f64,
) -> Result<MainReport> {
    let h0 = infimum_weighted_second(&e.h, domain.t.0, domain.t.1, domain.levels)?;
    let f0 = infimum_weighted_second(&e.f, domain.z.0, domain.z.1, domain.levels)?;
    let rows = t_rows(e, t_grid)?;
    let at = Witness::tz(h0.at, f0.at);

    let mut reports = Vec::with_capacity(4);
    let unbounded = h0.is_unbounded() || f0.is_unbounded();
    if unbounded {
        reports.push(ConditionReport {
            id: ConditionId::Main1,
            verdict: Verdict::Unbounded,
            worst_margin: f64::NEG_INFINITY,
            witness: Some(at),
            samples: 1,
            tolerance: tol,
        });
    } else {
        let mut w = Worst::default();
        w.observe(
            margin(h0.value + f0.value, h0.value.abs() + f0.value.abs()),
            at,
        );
        reports.push(ConditionReport::from_worst(ConditionId::Main1, w, tol));
    }
    reports.push(check_b(&rows, tol, ConditionId::Main2));

    if unbounded {
        for id in [ConditionId::Main3, ConditionId::Main4] {
            reports.push(ConditionReport {
                id,
                verdict: Verdict::Unbounded,
                worst_margin: f64::NEG_INFINITY,
                witness: None,
                samples: 0,
                tolerance: tol,
            });
        }
    } else {
        let f0v = f0.value;
        let (mut c, mut d) = (Worst::default(), Worst::default());
        for r in &rows {
            let at = Witness::tz(r.t, f0.at);
            if let Some(m) = r.margin_c(f0v) {
                c.observe(m, at);
            }
            d.observe(r.margin_d(f0v), at);
        }
        reports.push(ConditionReport::from_worst(ConditionId::Main3, c, tol));
        reports.push(ConditionReport::from_worst(ConditionId::Main4, d, tol));
    }
    Ok(MainReport {
        verdict: RankOneVerdict::new(Route::MainTheorem, reports),
        h0,
        f0,
    })
}
