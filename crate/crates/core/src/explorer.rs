//! Exact desk-scale distances and geodesics in curve complexes.
//!
//! On the two Farey windows (`S_{1,1}`, `S_{0,4}`) distances route through
//! the continued-fraction engine and are exact at any scale.  Elsewhere the
//! module leans on the classification of small distances: `0` for equal
//! curves, `1` for distinct disjoint ones, `2` for crossing non-filling
//! pairs, and `>= 3` exactly for filling pairs.  A breadth-first search
//! over curves of bounded norm then either exhibits a length-3 witness
//! (making the value exact) or returns an honest interval whose upper end
//! comes from the intersection-number bound `d <= 2 log2(i(a,b)) + 2`.

use serde::{Deserialize, Serialize};

use crate::curve::{self, Ctx, MultiCurve};
use crate::error::{Error, Result};
use crate::geom::overlay::Overlay;
use crate::projection::window::{s11_slope, WindowChart};
use crate::slope::{self, Slope};
use crate::surface::Surface;

/// An exact value or an honest bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Distance {
    Exact(u32),
    Interval { lo: u32, hi: u32 },
}

impl Distance {
    pub fn lo(&self) -> u32 {
        match self {
            Distance::Exact(d) => *d,
            Distance::Interval { lo, .. } => *lo,
        }
    }

    pub fn hi(&self) -> u32 {
        match self {
            Distance::Exact(d) => *d,
            Distance::Interval { hi, .. } => *hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Distance::Exact(_))
    }

    /// Twice the midpoint, for interval-dominance comparisons without
    /// fractions.
    pub fn midpoint_times_two(&self) -> u32 {
        self.lo() + self.hi()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    FareyExact,
    BfsExact,
    FillingLowerBound,
    Cap,
}

/// A distance value with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub value: Distance,
    pub method: Method,
    pub witness_path: Option<Vec<MultiCurve>>,
    /// Norm bound of the enumeration the search ran over, if any.
    pub enumeration_bound: Option<u64>,
}

impl DistanceCertificate {
    fn exact(d: u32, method: Method) -> DistanceCertificate {
        DistanceCertificate {
            value: Distance::Exact(d),
            method,
            witness_path: None,
            enumeration_bound: None,
        }
    }
}

/// Exact Farey distance with a slope geodesic.
pub fn farey_distance(x: &Slope, y: &Slope) -> (u32, Vec<Slope>) {
    let path = slope::farey_geodesic(x, y);
    (path.len() as u32 - 1, path)
}

/// True exactly when the complement of the pair consists of disks and
/// boundary-parallel (once-marked) disks.
pub fn fills(ctx: &Ctx, a: &MultiCurve, b: &MultiCurve) -> Result<bool> {
    let sa = a.system(ctx)?;
    let sb = b.system(ctx)?;
    if sa.curves.len() != 1 || sb.curves.len() != 1 {
        return Err(Error::Unsupported("fills expects single curves".into()));
    }
    let ov = Overlay::minimal(&ctx.tri, &sa, &sb, ctx.forget())?;
    let aux = ctx.forget();
    for r in ov.regions() {
        let real = r.interior_vertices.iter().filter(|v| Some(**v) != aux).count();
        if r.euler != 1 || real > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the surface is a Farey window, and the edge unit if so.
pub fn farey_window(s: &Surface) -> Option<u64> {
    if s.genus == 1 && s.boundary_count <= 1 {
        Some(1)
    } else if s.genus == 0 && s.boundary_count == 4 {
        Some(2)
    } else {
        None
    }
}

/// Chart for the ambient window surface, built deterministically from the
/// small-curve enumeration.
pub fn ambient_chart(ctx: &Ctx) -> Result<WindowChart> {
    let unit = farey_window(&ctx.surface)
        .ok_or_else(|| Error::Unsupported("ambient chart exists only on Farey windows".into()))?;
    let candidates = curve::enumerate_curves(ctx, 8)?;
    WindowChart::from_candidates(ctx, &candidates, unit)
}

/// Slope of a curve on an ambient window surface.
pub fn ambient_slope(ctx: &Ctx, c: &MultiCurve) -> Result<Slope> {
    match farey_window(&ctx.surface) {
        Some(_) if ctx.surface.genus == 1 => s11_slope(&c.coords),
        Some(_) => {
            let chart = ambient_chart(ctx)?;
            chart.slope_of(ctx, c)
        }
        None => Err(Error::Unsupported("not a window surface".into())),
    }
}

/// Distance in the curve complex with certificate.  Exact on windows and
/// for all values up to 3; filling pairs beyond the witness search come
/// back as intervals.  `cap` bounds the search depth, `norm_bound` the
/// curve enumeration.
pub fn curve_distance(
    ctx: &Ctx,
    a: &MultiCurve,
    b: &MultiCurve,
    cap: u32,
    norm_bound: u64,
) -> Result<DistanceCertificate> {
    if ctx.surface.is_simple() {
        return Err(Error::Unsupported("curve distance needs a non-simple surface".into()));
    }
    if a.component_count(ctx)? != 1 || b.component_count(ctx)? != 1 {
        return Err(Error::Unsupported("curve distance is between single curves".into()));
    }
    if farey_window(&ctx.surface).is_some() {
        let sa = ambient_slope(ctx, a)?;
        let sb = ambient_slope(ctx, b)?;
        let (d, path) = farey_distance(&sa, &sb);
        let mut cert = DistanceCertificate::exact(d, Method::FareyExact);
        if ctx.surface.genus == 1 {
            cert.witness_path = Some(
                path.iter()
                    .map(|s| {
                        MultiCurve::from_normal_coords(
                            &ctx.surface,
                            crate::projection::window::s11_coords(s.p, s.q),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        return Ok(cert);
    }
    if curve::equal_in(ctx, a, b)? {
        return Ok(DistanceCertificate::exact(0, Method::BfsExact));
    }
    let i = curve::intersection_number_in(ctx, a, b)?;
    if i == 0 {
        let mut c = DistanceCertificate::exact(1, Method::BfsExact);
        c.witness_path = Some(vec![a.clone(), b.clone()]);
        return Ok(c);
    }
    if !fills(ctx, a, b)? {
        // Crossing but not filling: distance exactly 2.
        let mut cert = DistanceCertificate::exact(2, Method::BfsExact);
        cert.enumeration_bound = Some(norm_bound);
        for m in curve::enumerate_curves(ctx, norm_bound)? {
            if curve::intersection_number_in(ctx, &m, a)? == 0
                && curve::intersection_number_in(ctx, &m, b)? == 0
                && !curve::equal_in(ctx, &m, a)?
                && !curve::equal_in(ctx, &m, b)?
            {
                cert.witness_path = Some(vec![a.clone(), m, b.clone()]);
                break;
            }
        }
        return Ok(cert);
    }
    // Filling pair: d >= 3, d <= floor(log2(4 i^2)).
    let upper = (127 - (4 * (i as u128) * (i as u128)).leading_zeros()).max(3);
    let mut cert = DistanceCertificate {
        value: Distance::Interval { lo: 3, hi: upper },
        method: Method::FillingLowerBound,
        witness_path: None,
        enumeration_bound: Some(norm_bound),
    };
    if upper == 3 {
        cert.value = Distance::Exact(3);
        return Ok(cert);
    }
    if cap >= 3 {
        let pool = curve::enumerate_curves(ctx, norm_bound)?;
        let near_a: Vec<&MultiCurve> = pool
            .iter()
            .filter(|m| matches!(curve::intersection_number_in(ctx, m, a), Ok(0)))
            .collect();
        let near_b: Vec<&MultiCurve> = pool
            .iter()
            .filter(|m| matches!(curve::intersection_number_in(ctx, m, b), Ok(0)))
            .collect();
        'outer: for x in &near_a {
            for y in &near_b {
                if curve::intersection_number_in(ctx, x, y)? == 0 {
                    cert.value = Distance::Exact(3);
                    cert.method = Method::BfsExact;
                    cert.witness_path =
                        Some(vec![a.clone(), (*x).clone(), (*y).clone(), b.clone()]);
                    break 'outer;
                }
            }
        }
    }
    if !cert.value.is_exact() {
        cert.method = Method::Cap;
        cert.value = Distance::Interval { lo: 3, hi: upper.min(cap.max(3)) };
    }
    Ok(cert)
}

/// A ball in an enumerated complex, with its completeness data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexBall {
    pub center: MultiCurve,
    pub radius: u32,
    pub vertices: Vec<MultiCurve>,
    /// Adjacency lists into `vertices`.
    pub adjacency: Vec<Vec<usize>>,
    pub enumeration_bound: u64,
    /// Distance from the center within the enumerated graph.
    pub levels: Vec<u32>,
}

impl ComplexBall {
    /// Breadth-first ball over the norm-bounded enumeration.  Edges join
    /// disjoint curves, or curves meeting once/twice on the two Farey
    /// windows.
    pub fn build(
        ctx: &Ctx,
        center: &MultiCurve,
        radius: u32,
        norm_bound: u64,
    ) -> Result<ComplexBall> {
        let mut pool = curve::enumerate_curves(ctx, norm_bound)?;
        if !pool.iter().any(|c| c.coords == center.coords) {
            pool.push(center.clone());
        }
        let unit = farey_window(&ctx.surface).unwrap_or(0);
        let n = pool.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let ii = curve::intersection_number_in(ctx, &pool[i], &pool[j])?;
                let edge = if unit > 0 {
                    ii == unit
                } else {
                    ii == 0 && !curve::equal_in(ctx, &pool[i], &pool[j])?
                };
                if edge {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let start = pool.iter().position(|c| c.coords == center.coords).unwrap();
        let mut level = vec![u32::MAX; n];
        level[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            if level[x] >= radius {
                continue;
            }
            for &y in &adj[x] {
                if level[y] == u32::MAX {
                    level[y] = level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| level[i] != u32::MAX).collect();
        let renumber: std::collections::HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices: Vec<MultiCurve> = keep.iter().map(|&i| pool[i].clone()).collect();
        let levels: Vec<u32> = keep.iter().map(|&i| level[i]).collect();
        let adjacency: Vec<Vec<usize>> = keep
            .iter()
            .map(|&i| {
                let mut v: Vec<usize> =
                    adj[i].iter().filter_map(|j| renumber.get(j).cloned()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        Ok(ComplexBall {
            center: center.clone(),
            radius,
            vertices,
            adjacency,
            enumeration_bound: norm_bound,
            levels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::slope_curve;

    fn s11() -> Surface {
        Surface::new(1, 1).unwrap()
    }

    #[test]
    fn farey_distance_wrapper() {
        let (d, path) =
            farey_distance(&Slope::new(0, 1).unwrap(), &Slope::new(2, 5).unwrap());
        assert_eq!(d, 2);
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn fills_examples() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 1, 0);
        let b = slope_curve(&s, 0, 1);
        assert!(fills(&ctx, &a, &b).unwrap());
        assert!(!fills(&ctx, &a, &a.clone()).unwrap());
        let c = slope_curve(&s, 1, 3);
        assert!(fills(&ctx, &a, &c).unwrap());
    }

    #[test]
    fn window_distance_is_farey() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 1, 0);
        let b = slope_curve(&s, 5, 8);
        let cert = curve_distance(&ctx, &a, &b, 10, 8).unwrap();
        let expect =
            slope::farey_distance(&Slope::new(1, 0).unwrap(), &Slope::new(5, 8).unwrap());
        assert_eq!(cert.value, Distance::Exact(expect));
        assert_eq!(cert.method, Method::FareyExact);
        let path = cert.witness_path.unwrap();
        for w in path.windows(2) {
            assert_eq!(curve::intersection_number(&w[0], &w[1]).unwrap(), 1);
        }
    }

    #[test]
    fn lemma_upper_bound_arithmetic() {
        // i = 8: bound = 2 log2 8 + 2 = 8.
        let i: u128 = 8;
        let upper = 127 - (4 * i * i).leading_zeros();
        assert_eq!(upper, 8);
    }

    #[test]
    fn ball_on_s11_is_farey_like() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let center = slope_curve(&s, 0, 1);
        let ball = ComplexBall::build(&ctx, &center, 2, 6).unwrap();
        assert!(ball.vertices.len() > 3);
        for (i, nbrs) in ball.adjacency.iter().enumerate() {
            for &j in nbrs {
                assert_eq!(
                    curve::intersection_number(&ball.vertices[i], &ball.vertices[j]).unwrap(),
                    1
                );
                assert!(ball.levels[i].abs_diff(ball.levels[j]) <= 1);
            }
        }
    }
}
