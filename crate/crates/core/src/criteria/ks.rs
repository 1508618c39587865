use rayon::prelude::*;
use serde::Serialize;

use super::{margin, ConditionId, ConditionReport, RankOneVerdict, Route, Witness, Worst};
use crate::energy::IsotropicEnergy;
use crate::error::Result;
use crate::grid::Grid;

/// Sample pairs `(x, y)` of singular values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairGrid {
    Product {
        x: Grid,
        y: Grid,
    },
    /// Pairs `(√(tz), √(z/t))`, i.e. the same points a `(t, z)` grid visits.
    Split {
        t: Grid,
        z: Grid,
    },
}

impl Default for PairGrid {
    fn default() -> Self {
        let g = Grid::log(1e-2, 1e2, 513);
        PairGrid::Product { x: g, y: g }
    }
}

impl PairGrid {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.axes();
        a.validate()?;
        b.validate()
    }

    fn axes(&self) -> (&Grid, &Grid) {
        match self {
            PairGrid::Product { x, y } => (x, y),
            PairGrid::Split { t, z } => (t, z),
        }
    }

    /// Rows of pairs, one row per first-axis sample.
    pub fn rows(&self) -> Vec<Vec<(f64, f64)>> {
        match self {
            PairGrid::Product { x, y } => {
                let ys = y.values();
                x.values()
                    .into_iter()
                    .map(|x| ys.iter().map(|&y| (x, y)).collect())
                    .collect()
            }
            PairGrid::Split { t, z } => {
                let zs = z.values();
                t.values()
                    .into_iter()
                    .map(|t| {
                        zs.iter()
                            .map(|&z| ((t * z).sqrt(), (z / t).sqrt()))
                            .collect()
                    })
                    .collect()
            }
        }
    }

    /// Points `x` where condition iii) is evaluated at `(x, x)`.
    pub fn diagonal(&self) -> Vec<f64> {
        match self {
            PairGrid::Product { x, .. } => x.values(),
            PairGrid::Split { z, .. } => z.values().into_iter().map(f64::sqrt).collect(),
        }
    }
}

/// Knowles-Sternberg conditions i)–v) on `g(x, y)`.
pub fn ks_check(g: &dyn IsotropicEnergy, grid: &PairGrid, tol: f64) -> Result<RankOneVerdict> {
    grid.validate()?;
    let rows = grid.rows();
    let partial: Vec<[Worst; 4]> = rows
        .par_iter()
        .map(|row| {
            let mut acc = [Worst::default(); 4];
            for &(x, y) in row {
                let p = g.partials(x, y)?;
                let at = Witness::xy(x, y);
                acc[0].observe(margin(p.g_xx.min(p.g_yy), 0.0), at);
                let prod = p.g_xx * p.g_yy;
                let root = prod.max(0.0).sqrt();
                if x != y {
                    let (u, v) = (x * p.g_x, y * p.g_y);
                    let d = x - y;
                    acc[1].observe(margin((u - v) / d, (u.abs() + v.abs()) / d.abs()), at);
                    if prod >= 0.0 {
                        let q = (p.g_x - p.g_y) / d;
                        let s = root + p.g_xy.abs() + (p.g_x.abs() + p.g_y.abs()) / d.abs();
                        acc[2].observe(margin(root + p.g_xy + q, s), at);
                    }
                }
                if prod >= 0.0 {
                    let q = (p.g_x + p.g_y) / (x + y);
                    let s = root + p.g_xy.abs() + (p.g_x.abs() + p.g_y.abs()) / (x + y);
                    acc[3].observe(margin(root - p.g_xy + q, s), at);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let [i, ii, iv, v] = partial.into_iter().fold([Worst::default(); 4], |acc, p| {
        [
            acc[0].merge(p[0]),
            acc[1].merge(p[1]),
            acc[2].merge(p[2]),
            acc[3].merge(p[3]),
        ]
    });

    let mut iii = Worst::default();
    for x in grid.diagonal() {
        let p = g.partials(x, x)?;
        let m1 = margin(
            p.g_xx - p.g_xy + p.g_x / x,
            p.g_xx.abs() + p.g_xy.abs() + (p.g_x / x).abs(),
        );
        let m2 = margin(
            p.g_yy - p.g_xy + p.g_y / x,
            p.g_yy.abs() + p.g_xy.abs() + (p.g_y / x).abs(),
        );
        iii.observe(m1.min(m2), Witness::xy(x, x));
    }

    let reports = vec![
        ConditionReport::from_worst(ConditionId::KsI, i, tol),
        ConditionReport::from_worst(ConditionId::KsIi, ii, tol),
        ConditionReport::from_worst(ConditionId::KsIii, iii, tol),
        ConditionReport::from_worst(ConditionId::KsIv, iv, tol),
        ConditionReport::from_worst(ConditionId::KsV, v, tol),
    ];
    Ok(RankOneVerdict::new(Route::Ks, reports))
}
