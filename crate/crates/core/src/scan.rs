//! Ellipticity maps over the `(λ₁, λ₂)` quadrant.
//!
//! Each cell minimizes the closed-form rank-one second derivative at
//! `F = diag(λ₁, λ₂)` over a grid of directions `ξ`, `η`. Isotropy makes the
//! diagonal matrices representative of every `F` with those singular values.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::SplitEnergy;
use crate::error::Result;
use crate::grid::Grid;
use crate::oracle::{Mat2, MatrixPoint, RankOneDirection};
use crate::report::fmt_sig;

pub const DEFAULT_DIRECTIONS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub lambda1: Grid,
    pub lambda2: Grid,
    /// Angles per direction vector, uniform on `[0, π)`.
    pub directions: usize,
    /// A cell is non-elliptic when its normalized margin is below `-tol`.
    pub tol: f64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        let axis = Grid::log(10f64.powf(-2.5), 10f64.powf(2.5), 256);
        Self {
            lambda1: axis,
            lambda2: axis,
            directions: DEFAULT_DIRECTIONS,
            tol: 1e-8,
        }
    }
}

impl ScanSpec {
    /// Linear axes on `(0, 15]`, the visual range of the usual plots.
    pub fn linear_preset(points: usize) -> Self {
        let axis = Grid::linear(15.0 / points as f64, 15.0, points);
        Self {
            lambda1: axis,
            lambda2: axis,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellVerdict {
    Elliptic,
    NonElliptic,
    Boundary,
    /// The energy could not be evaluated at this cell.
    Error,
}

impl CellVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CellVerdict::Elliptic => "Elliptic",
            CellVerdict::NonElliptic => "NonElliptic",
            CellVerdict::Boundary => "Boundary",
            CellVerdict::Error => "Error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub verdict: CellVerdict,
    /// Smallest normalized second derivative over the direction grid.
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticityMap {
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
    /// Row-major: `cells[i * lambda2.len() + j]` is `(lambda1[i], lambda2[j])`.
    pub cells: Vec<Cell>,
}

impl EllipticityMap {
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.lambda2.len() + j]
    }

    pub fn count(&self, v: CellVerdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == v).count()
    }
}

fn direction_grid(n: usize) -> Vec<RankOneDirection> {
    let n = n.max(1);
    let angles: Vec<f64> = (0..n)
        .map(|k| std::f64::consts::PI * k as f64 / n as f64)
        .collect();
    angles
        .iter()
        .flat_map(|&a| {
            angles
                .iter()
                .map(move |&b| RankOneDirection::from_angles(a, b))
        })
        .collect()
}

fn classify_cell(e: &SplitEnergy, l1: f64, l2: f64, dirs: &[RankOneDirection], tol: f64) -> Cell {
    // Ordered so that (λ₁, λ₂) and (λ₂, λ₁) give bit-identical cells.
    let (a, b) = if l1 >= l2 { (l1, l2) } else { (l2, l1) };
    let Ok(point) = MatrixPoint::new(e, Mat2::diag(a, b)) else {
        return Cell {
            verdict: CellVerdict::Error,
            min_margin: f64::NAN,
        };
    };
    let min = dirs
        .iter()
        .map(|d| point.second_derivative(d).normalized())
        .fold(f64::INFINITY, f64::min);
    let verdict = if min.is_nan() {
        CellVerdict::Error
    } else if min < -tol {
        CellVerdict::NonElliptic
    } else if min < 0.0 {
        CellVerdict::Boundary
    } else {
        CellVerdict::Elliptic
    };
    Cell {
        verdict,
        min_margin: min,
    }
}

/// Scan explicit axis values.
pub fn scan_values(
    e: &SplitEnergy,
    lambda1: &[f64],
    lambda2: &[f64],
    directions: usize,
    tol: f64,
) -> EllipticityMap {
    let dirs = direction_grid(directions);
    let n2 = lambda2.len();
    let cells = (0..lambda1.len() * n2)
        .into_par_iter()
        .map(|k| classify_cell(e, lambda1[k / n2], lambda2[k % n2], &dirs, tol))
        .collect();
    EllipticityMap {
        lambda1: lambda1.to_vec(),
        lambda2: lambda2.to_vec(),
        cells,
    }
}

pub fn scan_domain(e: &SplitEnergy, spec: &ScanSpec) -> Result<EllipticityMap> {
    spec.lambda1.validate()?;
    spec.lambda2.validate()?;
    Ok(scan_values(
        e,
        &spec.lambda1.values(),
        &spec.lambda2.values(),
        spec.directions,
        spec.tol,
    ))
}

pub fn to_csv(m: &EllipticityMap) -> String {
    let mut out = String::from("lambda1,lambda2,verdict,min_margin\n");
    for (i, &l1) in m.lambda1.iter().enumerate() {
        for (j, &l2) in m.lambda2.iter().enumerate() {
            let c = m.cell(i, j);
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_sig(l1, 9),
                fmt_sig(l2, 9),
                c.verdict.as_str(),
                fmt_sig(c.min_margin, 9)
            );
        }
    }
    out
}

pub fn emit_csv(m: &EllipticityMap, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv(m))?;
    Ok(())
}

const CELL_PX: usize = 2;
const MARGIN_PX: usize = 48;

fn color(v: CellVerdict) -> &'static str {
    match v {
        CellVerdict::Elliptic => "#e8f1d4",
        CellVerdict::NonElliptic | CellVerdict::Boundary => "#4a2a6e",
        CellVerdict::Error => "#ffffff",
    }
}

/// SVG 1.1 with `λ₁` growing rightwards and `λ₂` upwards, one cell per
/// grid index.
pub fn to_svg(m: &EllipticityMap) -> String {
    let (n1, n2) = (m.lambda1.len(), m.lambda2.len());
    let (w, h) = (n1 * CELL_PX, n2 * CELL_PX);
    let (total_w, total_h) = (w + 2 * MARGIN_PX, h + 2 * MARGIN_PX);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for i in 0..n1 {
        for j in 0..n2 {
            let x = MARGIN_PX + i * CELL_PX;
            let y = MARGIN_PX + (n2 - 1 - j) * CELL_PX;
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="{}"/>"#,
                color(m.cell(i, j).verdict)
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let (x0, y0) = (MARGIN_PX, MARGIN_PX + h);
    let _ = writeln!(
        s,
        r##"<line x1="{x0}" y1="{y0}" x2="{}" y2="{MARGIN_PX}" stroke="#d62728" stroke-width="1"/>"##,
        MARGIN_PX + w
    );
    let _ = writeln!(
        s,
        r##"<rect x="{x0}" y="{MARGIN_PX}" width="{w}" height="{h}" fill="none" stroke="#000000"/>"##
    );
    let label = |v: &[f64], first: bool| {
        let x = if first { v[0] } else { v[v.len() - 1] };
        fmt_sig(x, 3)
    };
    let font = r#"font-family="sans-serif" font-size="12""#;
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" {font} text-anchor="middle">λ₁</text>"#,
        MARGIN_PX + w / 2,
        y0 + 32
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" {font} text-anchor="middle" transform="rotate(-90 {} {})">λ₂</text>"#,
        MARGIN_PX - 32,
        MARGIN_PX + h / 2,
        MARGIN_PX - 32,
        MARGIN_PX + h / 2
    );
    let _ = writeln!(
        s,
        r#"<text x="{x0}" y="{}" {font}>{}</text>"#,
        y0 + 16,
        label(&m.lambda1, true)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" {font} text-anchor="end">{}</text>"#,
        MARGIN_PX + w,
        y0 + 16,
        label(&m.lambda1, false)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{y0}" {font} text-anchor="end">{}</text>"#,
        MARGIN_PX - 4,
        label(&m.lambda2, true)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" {font} text-anchor="end">{}</text>"#,
        MARGIN_PX - 4,
        MARGIN_PX + 10,
        label(&m.lambda2, false)
    );
    let _ = writeln!(s, "</svg>");
    s
}

pub fn emit_svg(m: &EllipticityMap, path: &Path) -> Result<()> {
    std::fs::write(path, to_svg(m))?;
    Ok(())
}
