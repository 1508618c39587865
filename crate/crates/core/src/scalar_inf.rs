//! Global infima `inf x²·e″(x)` over a positive interval and sampled
//! convexity verdicts for one-variable expressions.
//!
//! The search runs in `s = log x` on a dense grid, refined by golden section
//! in the winning bracket. Minima on the boundary are reported with a limit
//! marker; minima that keep falling into a boundary are reported as `-∞`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::Grid;

pub const DEFAULT_DOMAIN: (f64, f64) = (1e-6, 1e6);
pub const DEFAULT_LEVELS: usize = 4;
/// Intervals of the finest grid level.
pub const FINEST_INTERVALS: usize = 8192;
pub const GOLDEN_REL_TOL: f64 = 1e-10;
/// Boundary values below this are treated as divergent.
pub const DIVERGENCE_FLOOR: f64 = -1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    ToZero,
    ToInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfimumResult {
    /// Infimum value; `-∞` when divergence was detected.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub value: f64,
    /// Point where `value` was evaluated (the boundary for limit minima).
    pub at: f64,
    /// Set when the minimum sits on a boundary of the truncated domain.
    pub limit: Option<Limit>,
    /// `(level, best value)` per grid level; the last entry is the golden
    /// section refinement.
    pub margin_history: Vec<(usize, f64)>,
}

impl InfimumResult {
    pub fn is_unbounded(&self) -> bool {
        self.value == f64::NEG_INFINITY
    }
}

/// `x²·e″(x)`.
pub fn weighted_second(e: &Expr, x: f64) -> Result<f64> {
    let j = e.eval_jet2(x)?;
    let v = x * x * j.d2;
    if v.is_nan() {
        return Err(Error::Overflow { at: x });
    }
    Ok(v)
}

fn golden_section(phi: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (phi(c)?, phi(d)?);
    for _ in 0..200 {
        if (b - a).abs() <= GOLDEN_REL_TOL * (1.0 + 0.5 * (a + b).abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// `inf_{x ∈ [lo, hi]} x²·e″(x)` with boundary and divergence detection.
pub fn infimum_weighted_second(e: &Expr, lo: f64, hi: f64, levels: usize) -> Result<InfimumResult> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "infimum domain must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let levels = levels.clamp(1, 10);
    let (sa, sb) = (lo.ln(), hi.ln());
    let n = FINEST_INTERVALS;
    let s_at = |i: usize| {
        if i == n {
            sb
        } else {
            sa + (sb - sa) * i as f64 / n as f64
        }
    };
    let phi = |s: f64| weighted_second(e, s.exp());
    let values: Vec<f64> = (0..=n).map(|i| phi(s_at(i))).collect::<Result<_>>()?;

    let mut history = Vec::with_capacity(levels + 1);
    let mut best_i = 0;
    for level in 0..levels {
        let stride = 1 << (levels - 1 - level);
        best_i = (0..=n)
            .step_by(stride)
            .fold(0, |b, i| if values[i] < values[b] { i } else { b });
        history.push((level, values[best_i]));
    }

    if best_i == 0 || best_i == n {
        let limit = if best_i == 0 {
            Limit::ToZero
        } else {
            Limit::ToInfinity
        };
        let x = if best_i == 0 { lo } else { hi };
        let vb = values[best_i];
        history.push((levels, vb));
        let value = if diverges(&values, best_i, sb - sa) {
            f64::NEG_INFINITY
        } else {
            vb
        };
        return Ok(InfimumResult {
            value,
            at: x,
            limit: Some(limit),
            margin_history: history,
        });
    }

    let (s_star, v_star) = golden_section(phi, s_at(best_i - 1), s_at(best_i + 1))?;
    let (s, value) = if v_star < values[best_i] {
        (s_star, v_star)
    } else {
        (s_at(best_i), values[best_i])
    };
    history.push((levels, value));
    Ok(InfimumResult {
        value,
        at: s.exp(),
        limit: None,
        margin_history: history,
    })
}

/// The minimum sits on a boundary; decide whether the function keeps
/// falling there. Divergent when the boundary value is below
/// [`DIVERGENCE_FLOOR`], or when it is negative, decreases monotonically
/// over the last two decades, and the last decade's drop is at least half
/// the previous one (a convergent tail shrinks its drops geometrically), or
/// it fell by more than a factor `1e3` over those two decades.
fn diverges(values: &[f64], boundary: usize, span: f64) -> bool {
    let vb = values[boundary];
    if vb < DIVERGENCE_FLOOR {
        return true;
    }
    let decade = std::f64::consts::LN_10;
    if vb >= 0.0 || span < 2.0 * decade {
        return false;
    }
    let n = values.len() - 1;
    let per_decade = ((n as f64) * decade / span).round() as usize;
    let inward = |k: usize| if boundary == 0 { k } else { n - k };
    let window = (2 * per_decade).min(n);
    let monotone = (0..window).all(|k| values[inward(k)] <= values[inward(k + 1)]);
    if !monotone {
        return false;
    }
    let v1 = values[inward(per_decade)];
    let v2 = values[inward(window)];
    let drop1 = v1 - vb;
    let drop2 = v2 - v1;
    drop1 > 0.0 && (drop1 >= 0.5 * drop2 || (v2 != 0.0 && vb / v2.abs() < -1e3))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Convexity {
    Convex { min_second: f64 },
    NonConvex { witness: f64, second: f64 },
    Marginal { at: f64, second: f64 },
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, Convexity::Convex { .. })
    }

    pub fn is_non_convex(&self) -> bool {
        matches!(self, Convexity::NonConvex { .. })
    }
}

pub const DEFAULT_CONVEXITY_TOL: f64 = 1e-10;

/// Sampled convexity of `e` on a log grid: `Convex` when `e″ ≥ -tol`
/// everywhere, `NonConvex` with the worst point when some `e″ < -tol`,
/// `Marginal` when the minimum lies in `[-tol, 0)`.
pub fn convexity_verdict(
    e: &Expr,
    lo: f64,
    hi: f64,
    n_samples: usize,
    tol: f64,
) -> Result<Convexity> {
    let grid = Grid::log(lo, hi, n_samples);
    grid.validate()?;
    let mut worst = (f64::INFINITY, lo);
    for x in grid.values() {
        let d2 = e.eval_jet2(x)?.d2;
        if d2 < worst.0 {
            worst = (d2, x);
        }
    }
    let (second, at) = worst;
    Ok(if second < -tol {
        Convexity::NonConvex {
            witness: at,
            second,
        }
    } else if second < 0.0 {
        Convexity::Marginal { at, second }
    } else {
        Convexity::Convex { min_second: second }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf(src: &str, var: &str) -> InfimumResult {
        let e = Expr::parse(src, var).unwrap();
        infimum_weighted_second(&e, DEFAULT_DOMAIN.0, DEFAULT_DOMAIN.1, DEFAULT_LEVELS).unwrap()
    }

    #[test]
    fn distortion_profile_has_limit_infimum_zero() {
        let r = inf("(1/2)*(t + 1/t)", "t");
        assert_eq!(r.limit, Some(Limit::ToInfinity));
        assert!((r.value - 1e-6).abs() < 1e-15);
        assert!(!r.is_unbounded());
    }

    #[test]
    fn example_one_volumetric_infimum() {
        let r = inf("(1/60)*(z - 1/z)^2", "z");
        assert!((r.value - 3f64.sqrt() / 15.0).abs() < 1e-12);
        assert!((r.at - 3f64.powf(0.25)).abs() < 1e-5);
        assert_eq!(r.limit, None);
    }

    // z = 1 is not stationary for 12z⁴ - 10z² - 30/z² + 20/z⁴ (slope 8
    // there); the minimizer is the root of its derivative near 0.978.
    pub(crate) const DOUBLE_WELL_INF: f64 = -8.090151482905082;
    pub(crate) const DOUBLE_WELL_ARGMIN: f64 = 0.977814806268941;

    #[test]
    fn example_two_volumetric_infimum() {
        let r = inf("(z - 1/z)^4 - (z - 1/z)^2", "z");
        assert!((r.value - DOUBLE_WELL_INF).abs() < 1e-10, "{}", r.value);
        assert!((r.at - DOUBLE_WELL_ARGMIN).abs() < 1e-5);
    }

    #[test]
    fn example_one_isochoric_infimum() {
        let r = inf("exp((1/10)*log(t)^2)", "t");
        assert!((r.value + 0.101677190112107).abs() < 1e-10, "{}", r.value);
        assert!((r.at - 16.8339220336142).abs() < 1e-4);
    }

    #[test]
    fn hencky_diverges() {
        let r = inf("(1/2)*log(t)^2", "t");
        assert!(r.is_unbounded());
        assert_eq!(r.limit, Some(Limit::ToInfinity));
        let r = inf("-t^2", "t");
        assert!(r.is_unbounded());
    }

    #[test]
    fn quadratic_infimum_at_lower_boundary() {
        let c = 3.5;
        let e = Expr::parse("(3.5/2)*(z - 2)^2", "z").unwrap();
        let r = infimum_weighted_second(&e, 1e-3, 1e3, 4).unwrap();
        assert_eq!(r.limit, Some(Limit::ToZero));
        assert!((r.value - c * 1e-6).abs() <= 1e-10 * c * 1e-6);
    }

    #[test]
    fn refinement_is_monotone() {
        for src in [
            "exp((1/10)*log(t)^2)",
            "(6/5)*(t - 1/t)^2",
            "cosh(log(t))^3",
        ] {
            let r = inf(src, "t");
            for w in r.margin_history.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-12, "{src}: {:?}", r.margin_history);
            }
        }
    }

    #[test]
    fn convexity_examples() {
        let e = Expr::parse("(z - 1)^2", "z").unwrap();
        assert!(convexity_verdict(&e, 1e-3, 1e3, 512, 1e-10)
            .unwrap()
            .is_convex());
        let e = Expr::parse("(z - 1/z)^4 - (z - 1/z)^2", "z").unwrap();
        match convexity_verdict(&e, 1e-3, 1e3, 512, 1e-10).unwrap() {
            Convexity::NonConvex { witness, second } => {
                assert!((0.5..1.5).contains(&witness) && second < 0.0);
            }
            other => panic!("{other:?}"),
        }
        let e = Expr::parse("(1/2)*(t + 1/t)", "t").unwrap();
        assert!(convexity_verdict(&e, 1e-3, 1e3, 512, 1e-10)
            .unwrap()
            .is_convex());
        let e = Expr::parse("-1e-12*t^2", "t").unwrap();
        assert!(matches!(
            convexity_verdict(&e, 1e-3, 1e3, 16, 1e-10).unwrap(),
            Convexity::Marginal { .. }
        ));
    }

    #[test]
    fn invalid_domain() {
        let e = Expr::parse("t", "t").unwrap();
        assert!(infimum_weighted_second(&e, 2.0, 1.0, 4).is_err());
        assert!(infimum_weighted_second(&e, 0.0, 1.0, 4).is_err());
    }
}
