//! Slope charts for complexity-one windows.
//!
//! Once-punctured tori and four-holed spheres have curve complexes equal to
//! the Farey graph; a chart turns curves into slopes and back.  On the
//! ambient canonical `S_{1,1}` the chart is the closed-form coordinate map;
//! everywhere else (including subsurface windows) the chart is pinned by a
//! reference Farey triple `(u, v, w)` playing `1/0`, `0/1`, `1/1`, and
//! slopes are read off from intersection numbers with the references.  The
//! overall orientation of a chart is a convention; everything downstream
//! uses chart-invariant quantities.

use crate::curve::{self, Ctx, MultiCurve};
use crate::error::{Error, Result};
use crate::slope::Slope;

/// The intersection number of Farey neighbors in a window: 1 on the
/// once-punctured torus, 2 on the four-holed sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowChart {
    pub unit: u64,
    pub u: MultiCurve,
    pub v: MultiCurve,
    pub w: MultiCurve,
}

/// Closed-form chart on the canonical once-punctured torus (also used for
/// the closed torus): slope `p/q` has coordinates `(|q|, |p|, |p+q|)`.
pub fn s11_coords(p: i64, q: i64) -> Vec<u64> {
    vec![q.unsigned_abs(), p.unsigned_abs(), (p + q).unsigned_abs()]
}

/// Inverse of [`s11_coords`], up to overall sign.
pub fn s11_slope(coords: &[u64]) -> Result<Slope> {
    let (w0, w1, w2) = (coords[0] as i64, coords[1] as i64, coords[2] as i64);
    let (p, q) = if w2 == w0 + w1 {
        (w1, w0)
    } else if w2 == (w0 - w1).abs() {
        (w1, -w0)
    } else {
        return Err(Error::InconsistentCoordinates(format!(
            "not a slope vector: {coords:?}"
        )));
    };
    Slope::new(p, q)
}

impl WindowChart {
    /// Builds a chart from candidate curves of the window: the first
    /// Farey triple in the given (deterministic) order.
    pub fn from_candidates(ctx: &Ctx, candidates: &[MultiCurve], unit: u64) -> Result<WindowChart> {
        let ii = |a: &MultiCurve, b: &MultiCurve| curve::intersection_number_in(ctx, a, b);
        let u = candidates
            .first()
            .ok_or(Error::SimpleSubsurface)?
            .clone();
        let v = candidates
            .iter()
            .find(|c| matches!(ii(&u, c), Ok(n) if n == unit))
            .ok_or(Error::SimpleSubsurface)?
            .clone();
        let w = candidates
            .iter()
            .find(|c| {
                matches!(ii(&u, c), Ok(n) if n == unit) && matches!(ii(&v, c), Ok(n) if n == unit)
            })
            .ok_or(Error::SimpleSubsurface)?
            .clone();
        Ok(WindowChart { unit, u, v, w })
    }

    /// Slope of a curve of the window under this chart.
    pub fn slope_of(&self, ctx: &Ctx, c: &MultiCurve) -> Result<Slope> {
        let ii = |a: &MultiCurve, b: &MultiCurve| curve::intersection_number_in(ctx, a, b);
        let q = ii(c, &self.u)? / self.unit;
        let p = ii(c, &self.v)? / self.unit;
        let m = ii(c, &self.w)? / self.unit;
        let (p, q, m) = (p as i64, q as i64, m as i64);
        if p == 0 && q == 0 {
            return Err(Error::InconsistentCoordinates(
                "curve does not register on the chart".into(),
            ));
        }
        // w plays 1/1: intersections with it separate p - q from p + q.
        if m == (p - q).abs() {
            Slope::new(p, q)
        } else if m == p + q {
            Slope::new(p, -q)
        } else {
            Err(Error::InconsistentCoordinates(format!(
                "chart mismatch: p={p} q={q} m={m}"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::slope_curve;
    use crate::surface::Surface;

    #[test]
    fn s11_coords_roundtrip() {
        for (p, q) in [(1i64, 0i64), (0, 1), (1, 1), (2, -1), (5, 3), (-7, 4)] {
            let sl = s11_slope(&s11_coords(p, q)).unwrap();
            let orig = Slope::new(p, q).unwrap();
            // Defined up to overall sign, but slopes are canonical.
            assert_eq!(sl, orig, "({p},{q})");
        }
    }

    #[test]
    fn chart_on_ambient_s11_matches_determinant() {
        let s = Surface::new(1, 1).unwrap();
        let ctx = Ctx::new(&s).unwrap();
        let candidates: Vec<MultiCurve> = vec![
            slope_curve(&s, 1, 0),
            slope_curve(&s, 0, 1),
            slope_curve(&s, 1, 1),
            slope_curve(&s, 1, -1),
            slope_curve(&s, 2, 1),
            slope_curve(&s, 1, 2),
        ];
        let chart = WindowChart::from_candidates(&ctx, &candidates, 1).unwrap();
        // Slopes read through the chart must reproduce intersection
        // numbers through the determinant.
        for a in &candidates {
            for b in &candidates {
                let sa = chart.slope_of(&ctx, a).unwrap();
                let sb = chart.slope_of(&ctx, b).unwrap();
                let expect = curve::intersection_number_in(&ctx, a, b).unwrap();
                assert_eq!(sa.det_with(&sb) as u64, expect);
            }
        }
    }
}
