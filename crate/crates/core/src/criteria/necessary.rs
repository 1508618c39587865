use rayon::prelude::*;

use super::voliso::t_rows;
use super::{margin, ConditionId, ConditionReport, Witness, Worst};
use crate::energy::SplitEnergy;
use crate::error::Result;
use crate::grid::Grid;
use crate::scalar_inf::{convexity_verdict, Convexity};

fn min_second(c: Convexity) -> (f64, f64) {
    match c {
        Convexity::Convex { min_second } => (min_second, f64::NAN),
        Convexity::NonConvex { witness, second } => (second, witness),
        Convexity::Marginal { at, second } => (second, at),
    }
}

/// Necessary conditions a)–e) and the corollary `b(t) + c(t) ≥ 0`, all on
/// `t_grid`. A failure is a certificate of non rank-one convexity.
pub fn necessary_battery(e: &SplitEnergy, t_grid: &Grid, tol: f64) -> Result<Vec<ConditionReport>> {
    let rows = t_rows(e, t_grid)?;
    let f2: Vec<f64> = rows
        .par_iter()
        .map(|r| Ok(e.f_jet(r.t)?.d2))
        .collect::<Result<_>>()?;

    let (lo, hi, n) = (t_grid.lo, t_grid.hi, t_grid.points);
    let (mh, th) = min_second(convexity_verdict(&e.h, lo, hi, n, tol)?);
    let (mf, tf) = min_second(convexity_verdict(&e.f, lo, hi, n, tol)?);
    let mut a = Worst::default();
    let witness = Witness {
        t: th.is_finite().then_some(th),
        z: tf.is_finite().then_some(tf),
        ..Witness::default()
    };
    a.observe(mh.max(mf), witness);

    let mut b = Worst::default();
    let mut c = Worst::default();
    let mut d = Worst::default();
    let mut ee = Worst::default();
    let mut bc = Worst::default();
    for (r, &f2) in rows.iter().zip(&f2) {
        let (t, h1, h2) = (r.t, r.h1, r.h2);
        let at = Witness::t(t);
        b.observe(margin(h2 + f2, h2.abs() + f2.abs()), at);
        if t != 1.0 {
            c.observe((t - 1.0).signum() * h1, at);
        }
        d.observe(margin(t * h2 + h1, (t * h2).abs() + h1.abs()), at);
        let (p, q) = ((t + 3.0) * h1, 2.0 * t * (t + 1.0) * h2);
        ee.observe(margin(p + q, p.abs() + q.abs()), at);
        let (p, q) = (
            (t * t + 4.0 * t + 3.0) * h1,
            2.0 * t * (t + 1.0).powi(2) * h2,
        );
        bc.observe(margin(p + q, p.abs() + q.abs()), at);
    }
    Ok(vec![
        ConditionReport::from_worst(ConditionId::NecA, a, tol),
        ConditionReport::from_worst(ConditionId::NecB, b, tol),
        ConditionReport::from_worst(ConditionId::NecC, c, tol),
        ConditionReport::from_worst(ConditionId::NecD, d, tol),
        ConditionReport::from_worst(ConditionId::NecE, ee, tol),
        ConditionReport::from_worst(ConditionId::CorollaryBC, bc, tol),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Verdict;
    use crate::energy::{catalog, CatalogId};

    fn verdicts(e: &SplitEnergy) -> Vec<(ConditionId, Verdict)> {
        necessary_battery(e, &Grid::log(1e-3, 1e3, 1001), 1e-8)
            .unwrap()
            .into_iter()
            .map(|r| (r.id, r.verdict))
            .collect()
    }

    #[test]
    fn paper_examples_pass() {
        for id in [CatalogId::Example1, CatalogId::Example2] {
            let e = catalog(id).unwrap();
            for (c, v) in verdicts(&e) {
                assert_eq!(v, Verdict::Holds, "{id}: {c}");
            }
        }
    }

    #[test]
    fn distortion_profile_d_closed_form() {
        let e = SplitEnergy::new("k", "(1/2)*(t + 1/t)", "0").unwrap();
        let r = necessary_battery(&e, &Grid::log(1e-2, 1e2, 201), 1e-8).unwrap();
        let d = &r[3];
        assert_eq!(d.id, ConditionId::NecD);
        let t = d.witness.unwrap().t.unwrap();
        assert!((d.worst_margin - (0.5 + 0.5 / (t * t))).abs() < 1e-14);
        assert_eq!(d.verdict, Verdict::Holds);
    }

    #[test]
    fn double_well_in_both_profiles_fails_a() {
        let e = SplitEnergy::new(
            "w",
            "(t - 1/t)^4 - (t - 1/t)^2",
            "(z - 1/z)^4 - (z - 1/z)^2",
        )
        .unwrap();
        let v = verdicts(&e);
        assert_eq!(v[0], (ConditionId::NecA, Verdict::Fails));
    }
}
