//! Isotopy classes of multicurves via normal coordinates, and the
//! operations the rest of the crate leans on: exact geometric intersection
//! numbers, class equality, Dehn twists, and bounded enumeration.
//!
//! A [`MultiCurve`] stores its surface and one weight per edge of the
//! canonical triangulation.  Stored vectors are always in normal form
//! (matching and triangle inequalities hold), which pins the taut
//! representative; [`normalize`] accepts arbitrary realizable vectors and
//! tightens them.  On closed surfaces, operations forget the auxiliary
//! marked point, so values behave as classes on the closed surface.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::overlay::Overlay;
use crate::geom::poly::{self, PolyCurve, PolySystem, Portal};
use crate::surface::{Surface, Triangulation};

/// A surface together with its canonical triangulation, built once and
/// threaded through computations.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub surface: Surface,
    pub tri: Triangulation,
}

impl Ctx {
    pub fn new(surface: &Surface) -> Result<Ctx> {
        Ok(Ctx { surface: surface.clone(), tri: surface.canonical_triangulation()? })
    }

    /// The auxiliary vertex to forget on closed surfaces.
    pub fn forget(&self) -> Option<usize> {
        self.tri.aux_vertex
    }
}

/// An isotopy class of a closed multicurve in normal coordinates over the
/// canonical triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiCurve {
    pub surface: Surface,
    pub coords: Vec<u64>,
}

impl MultiCurve {
    /// Wraps an already-normal vector, validating it.
    pub fn from_normal_coords(surface: &Surface, coords: Vec<u64>) -> Result<MultiCurve> {
        let ctx = Ctx::new(surface)?;
        poly::validate_coords(&ctx.tri, &coords)?;
        Ok(MultiCurve { surface: surface.clone(), coords })
    }

    pub fn empty(surface: &Surface) -> Result<MultiCurve> {
        let ctx = Ctx::new(surface)?;
        Ok(MultiCurve { surface: surface.clone(), coords: vec![0; ctx.tri.edge_count] })
    }

    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|w| *w == 0)
    }

    pub fn norm(&self) -> u64 {
        self.coords.iter().sum()
    }

    pub fn system(&self, ctx: &Ctx) -> Result<PolySystem> {
        poly::system_from_coords(&ctx.tri, &self.coords)
    }

    pub fn component_count(&self, ctx: &Ctx) -> Result<usize> {
        Ok(self.system(ctx)?.curves.len())
    }

    /// Splits into per-component classes, in trace order.
    pub fn components(&self, ctx: &Ctx) -> Result<Vec<MultiCurve>> {
        let sys = self.system(ctx)?;
        sys.curves
            .iter()
            .map(|c| {
                let w = poly::coords_of(&ctx.tri, std::slice::from_ref(c));
                Ok(MultiCurve { surface: self.surface.clone(), coords: w })
            })
            .collect()
    }

    /// Pointwise sum of coordinates: the disjoint union when the parts are
    /// disjoint.
    pub fn union(&self, other: &MultiCurve) -> Result<MultiCurve> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch("union of curves".into()));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        MultiCurve::from_normal_coords(&self.surface, coords)
    }
}

/// Tightens a raw weight vector into normal form.
///
/// Vectors with an odd triangle sum are unrealizable and rejected.  A
/// vector violating a triangle inequality is realized by pairing the
/// excess points of the long side among themselves (nested, innermost
/// first) and tightened; trivial components that appear are dropped.  The
/// output equals the input when the input is already normal.
pub fn normalize(surface: &Surface, raw: &[u64]) -> Result<MultiCurve> {
    let ctx = Ctx::new(surface)?;
    let tri = &ctx.tri;
    if raw.len() != tri.edge_count {
        return Err(Error::InconsistentCoordinates(format!(
            "{} weights for {} edges",
            raw.len(),
            tri.edge_count
        )));
    }
    for (t, sides) in tri.tri_sides.iter().enumerate() {
        let s: u64 = sides.iter().map(|s| raw[s.edge]).sum();
        if s % 2 != 0 {
            return Err(Error::InconsistentCoordinates(format!(
                "odd crossing total in triangle {t}"
            )));
        }
    }
    if poly::validate_coords(tri, &raw.to_vec()).is_ok() {
        return MultiCurve::from_normal_coords(surface, raw.to_vec());
    }
    let curves = trace_with_returns(tri, raw)?;
    let sys = poly::canonicalize_closed(tri, curves)?;
    MultiCurve::from_normal_coords(surface, sys.coords(tri))
}

/// Traces a parity-valid vector into polylines, allowing same-side return
/// chords when a triangle inequality fails.
fn trace_with_returns(tri: &Triangulation, w: &[u64]) -> Result<Vec<PolyCurve>> {
    let sides = tri.edge_sides()?;
    // Pairing of side points per triangle: (side, pos) -> (side, pos).
    let mut pairing: Vec<std::collections::HashMap<(usize, u64), (usize, u64)>> = Vec::new();
    for t in 0..tri.triangle_count() {
        let ws = [
            w[tri.tri_sides[t][0].edge],
            w[tri.tri_sides[t][1].edge],
            w[tri.tri_sides[t][2].edge],
        ];
        let mut map = std::collections::HashMap::new();
        if let Some(c) = poly::corner_counts(ws) {
            for k in 0..3 {
                let s_prev = (k + 2) % 3;
                for j in 0..c[k] {
                    let a = (s_prev, ws[s_prev] - 1 - j);
                    let b = (k, j);
                    map.insert(a, b);
                    map.insert(b, a);
                }
            }
        } else {
            // One side dominates: the other sides' points pair into it
            // near their shared corners, the excess pairs up nested in the
            // middle of the long side.
            let long = (0..3).max_by_key(|&k| ws[k]).expect("three sides");
            let (s_next, s_prev) = ((long + 1) % 3, (long + 2) % 3);
            if ws[long] < ws[s_next] + ws[s_prev] {
                return Err(Error::InconsistentCoordinates(format!(
                    "unexpected weights {ws:?} in triangle {t}"
                )));
            }
            // Corner `long` joins sides long and s_prev; corner long+1
            // joins sides long and s_next.
            for j in 0..ws[s_prev] {
                let a = (long, j);
                let b = (s_prev, ws[s_prev] - 1 - j);
                map.insert(a, b);
                map.insert(b, a);
            }
            for j in 0..ws[s_next] {
                let a = (long, ws[long] - 1 - j);
                let b = (s_next, j);
                map.insert(a, b);
                map.insert(b, a);
            }
            let excess = ws[long] - ws[s_prev] - ws[s_next];
            let base = ws[s_prev];
            for j in 0..excess / 2 {
                let a = (long, base + j);
                let b = (long, base + excess - 1 - j);
                map.insert(a, b);
                map.insert(b, a);
            }
        }
        pairing.push(map);
    }
    // Trace closed strands through the pairings.
    let mut curves: Vec<PolyCurve> = Vec::new();
    let mut seen: std::collections::HashSet<(usize, u64, bool)> =
        std::collections::HashSet::new();
    for e0 in 0..tri.edge_count {
        for p0 in 0..w[e0] {
            for fw0 in [true, false] {
                if seen.contains(&(e0, p0, fw0)) {
                    continue;
                }
                let mut portals = Vec::new();
                let mut hop_tris = Vec::new();
                let (mut e, mut p, mut into_forward) = (e0, p0, fw0);
                loop {
                    seen.insert((e, p, into_forward));
                    portals.push(Portal::Edge(e));
                    let (floc, bloc) = sides[e];
                    let loc = if into_forward { floc } else { bloc };
                    let t = loc.tri;
                    hop_tris.push(t);
                    let we = w[e];
                    let sp = if into_forward { p } else { we - 1 - p };
                    let &(s2, sp2) = pairing[t]
                        .get(&(loc.side, sp))
                        .ok_or_else(|| Error::InconsistentCoordinates("unpaired point".into()))?;
                    let out_side = tri.tri_sides[t][s2];
                    let p2 = if out_side.forward { sp2 } else { w[out_side.edge] - 1 - sp2 };
                    into_forward = !out_side.forward;
                    e = out_side.edge;
                    p = p2;
                    if e == e0 && p == p0 && into_forward == fw0 {
                        break;
                    }
                    // Mark the reverse traversal visited too: each strand
                    // passes each of its points once in each direction.
                    seen.insert((e, p, !into_forward));
                }
                curves.push(PolyCurve { closed: true, portals, hop_tris });
            }
        }
    }
    Ok(curves)
}

/// Exact geometric intersection number.  On closed surfaces the auxiliary
/// point is forgotten.
pub fn intersection_number(a: &MultiCurve, b: &MultiCurve) -> Result<u64> {
    if a.surface != b.surface {
        return Err(Error::SurfaceMismatch(format!(
            "S_{{{},{}}} vs S_{{{},{}}}",
            a.surface.genus, a.surface.boundary_count, b.surface.genus, b.surface.boundary_count
        )));
    }
    let ctx = Ctx::new(&a.surface)?;
    intersection_number_in(&ctx, a, b)
}

pub fn intersection_number_in(ctx: &Ctx, a: &MultiCurve, b: &MultiCurve) -> Result<u64> {
    let sa = a.system(ctx)?;
    let sb = b.system(ctx)?;
    let ov = Overlay::minimal(&ctx.tri, &sa, &sb, ctx.forget())?;
    Ok(ov.intersection_number())
}

/// The two low-complexity windows where vertices are slopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeWindow {
    Torus,
    FourHoledSphere,
}

/// `|p_x q_y - q_x p_y|`, doubled in the four-holed-sphere window.
pub fn slope_intersection(x: &crate::slope::Slope, y: &crate::slope::Slope, w: SlopeWindow) -> i64 {
    let d = x.det_with(y);
    match w {
        SlopeWindow::Torus => d,
        SlopeWindow::FourHoledSphere => 2 * d,
    }
}

/// What a single closed component is, within its ambient surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    /// Bounds a disk (after forgetting the auxiliary point).
    Trivial,
    /// Cobounds a once-punctured disk with a real marked point.
    Peripheral,
    Essential,
}

/// Classifies a single closed curve.
pub fn classify_component(ctx: &Ctx, c: &MultiCurve) -> Result<ComponentClass> {
    let sys = c.system(ctx)?;
    if sys.curves.len() != 1 {
        return Err(Error::Unsupported("classify_component expects one component".into()));
    }
    let empty = PolySystem::empty(&ctx.tri);
    let ov = Overlay::minimal(&ctx.tri, &sys, &empty, None)?;
    let aux = ctx.forget();
    for r in ov.regions() {
        if r.euler != 1 || r.cycles.len() != 1 {
            continue;
        }
        let real = r.interior_vertices.iter().filter(|v| Some(**v) != aux).count();
        match real {
            0 => return Ok(ComponentClass::Trivial),
            1 => return Ok(ComponentClass::Peripheral),
            _ => {}
        }
    }
    Ok(ComponentClass::Essential)
}

/// True when every component is essential and no two are parallel; the
/// empty multicurve passes.
pub fn is_essential_multicurve(ctx: &Ctx, m: &MultiCurve) -> Result<bool> {
    let comps = m.components(ctx)?;
    for c in &comps {
        if classify_component(ctx, c)? != ComponentClass::Essential {
            return Ok(false);
        }
    }
    for i in 0..comps.len() {
        for j in (i + 1)..comps.len() {
            if equal_in(ctx, &comps[i], &comps[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Isotopy-class equality of single curves (closed classes on closed
/// surfaces).
pub fn equal_in(ctx: &Ctx, a: &MultiCurve, b: &MultiCurve) -> Result<bool> {
    if a.coords == b.coords {
        return Ok(true);
    }
    if ctx.forget().is_none() {
        // Normal coordinates are injective on punctured classes.
        return Ok(false);
    }
    let sa = a.system(ctx)?;
    let sb = b.system(ctx)?;
    if sa.curves.len() != 1 || sb.curves.len() != 1 {
        return Err(Error::Unsupported("equal_in expects single curves".into()));
    }
    let ov = Overlay::minimal(&ctx.tri, &sa, &sb, ctx.forget())?;
    if ov.intersection_number() != 0 {
        return Ok(false);
    }
    // Equal closed classes cobound an annulus containing at most the
    // auxiliary point.
    let aux = ctx.forget();
    for r in ov.regions() {
        if r.euler != 0 || r.cycles.len() != 2 {
            continue;
        }
        if r.interior_vertices.iter().any(|v| Some(*v) != aux) {
            continue;
        }
        let mut syss: Vec<usize> = r.cycles.iter().map(|c| c.darts[0].hop.sys).collect();
        syss.sort_unstable();
        if syss == vec![0, 1]
            && r.cycles
                .iter()
                .all(|c| c.darts.iter().all(|d| d.hop.sys == c.darts[0].hop.sys))
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The `n`-th power of the Dehn twist about `core`, applied to `target`,
/// realized by splicing copies of the core into the target at every
/// crossing and tightening.
pub fn twist(ctx: &Ctx, target: &MultiCurve, core: &MultiCurve, n: i64) -> Result<MultiCurve> {
    if n == 0 {
        return Ok(target.clone());
    }
    let score = core.system(ctx)?;
    if score.curves.len() != 1 {
        return Err(Error::Unsupported("twisting is along a single curve".into()));
    }
    let starget = target.system(ctx)?;
    let ov = Overlay::minimal(&ctx.tri, &score, &starget, ctx.forget())?;
    if ov.intersection_number() == 0 {
        return Ok(target.clone());
    }
    let core_curve = &ov.systems[0][0];
    let mut out: Vec<PolyCurve> = Vec::new();
    for (ci, c) in ov.systems[1].iter().enumerate() {
        let xs = ov.crossing_sequence(1, ci);
        if xs.is_empty() {
            out.push(c.clone());
            continue;
        }
        let mut portals: Vec<Portal> = Vec::new();
        let mut hops: Vec<usize> = Vec::new();
        for h in 0..c.hop_count() {
            let (i, _) = c.hop_ends(h);
            portals.push(c.portals[i]);
            hops.push(c.hop_tris[h]);
            for x in xs.iter().filter(|x| x.b.hop == h) {
                // The inserted copy runs with or against the core so that
                // the surgery is coherent at every crossing.
                let forward = (x.sign > 0) == (n > 0);
                let g = x.a.hop;
                let nc = core_curve.portals.len();
                for _rep in 0..n.unsigned_abs() {
                    if forward {
                        for k in 1..=nc {
                            let idx = (g + k) % nc;
                            portals.push(core_curve.portals[idx]);
                            let hop_t =
                                if k == nc { x.tri } else { core_curve.hop_tris[idx] };
                            hops.push(hop_t);
                        }
                    } else {
                        for k in 0..nc {
                            let idx = (g + nc - k) % nc;
                            portals.push(core_curve.portals[idx]);
                            let hop_t = if k == nc - 1 {
                                x.tri
                            } else {
                                core_curve.hop_tris[(idx + nc - 1) % nc]
                            };
                            hops.push(hop_t);
                        }
                    }
                }
            }
        }
        out.push(PolyCurve { closed: true, portals, hop_tris: hops });
    }
    let sys = poly::canonicalize_closed(&ctx.tri, out)?;
    MultiCurve::from_normal_coords(&ctx.surface, sys.coords(&ctx.tri))
}

/// All normal vectors of total weight at most `norm_bound` tracing single
/// essential non-peripheral curves, deduplicated by punctured class.
pub fn enumerate_curves(ctx: &Ctx, norm_bound: u64) -> Result<Vec<MultiCurve>> {
    let tri = &ctx.tri;
    // Triangles become checkable once their highest edge is assigned.
    let mut tri_ready: Vec<Vec<usize>> = vec![Vec::new(); tri.edge_count];
    for (t, sides) in tri.tri_sides.iter().enumerate() {
        let maxe = sides.iter().map(|s| s.edge).max().unwrap();
        tri_ready[maxe].push(t);
    }
    let mut out = Vec::new();
    let mut w = vec![0u64; tri.edge_count];
    rec_enumerate(ctx, &mut w, 0, norm_bound, &tri_ready, &mut out)?;
    Ok(out)
}

fn rec_enumerate(
    ctx: &Ctx,
    w: &mut Vec<u64>,
    e: usize,
    left: u64,
    tri_ready: &[Vec<usize>],
    out: &mut Vec<MultiCurve>,
) -> Result<()> {
    let tri = &ctx.tri;
    if e == tri.edge_count {
        if w.iter().all(|x| *x == 0) {
            return Ok(());
        }
        let sys = poly::system_from_coords(tri, w)?;
        if sys.curves.len() != 1 {
            return Ok(());
        }
        let m = MultiCurve { surface: ctx.surface.clone(), coords: w.clone() };
        if classify_component(ctx, &m)? == ComponentClass::Essential {
            out.push(m);
        }
        return Ok(());
    }
    for v in 0..=left {
        w[e] = v;
        let ok = tri_ready[e].iter().all(|&t| {
            let s = &tri.tri_sides[t];
            poly::corner_counts([w[s[0].edge], w[s[1].edge], w[s[2].edge]]).is_some()
        });
        if ok {
            rec_enumerate(ctx, w, e + 1, left - v, tri_ready, out)?;
        }
    }
    w[e] = 0;
    Ok(())
}

#[cfg(test)]
pub(crate) fn slope_curve(s: &Surface, p: i64, q: i64) -> MultiCurve {
    MultiCurve::from_normal_coords(
        s,
        vec![q.unsigned_abs(), p.unsigned_abs(), (p + q).unsigned_abs()],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s11() -> Surface {
        Surface::new(1, 1).unwrap()
    }

    #[test]
    fn normalize_identity_on_normal_input() {
        let s = s11();
        let m = normalize(&s, &[1, 1, 2]).unwrap();
        assert_eq!(m.coords, vec![1, 1, 2]);
    }

    #[test]
    fn normalize_rejects_odd_parity() {
        let s = s11();
        assert!(matches!(
            normalize(&s, &[1, 0, 0]),
            Err(Error::InconsistentCoordinates(_))
        ));
    }

    #[test]
    fn normalize_zero_is_empty() {
        let s = s11();
        let m = normalize(&s, &[0, 0, 0]).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn normalize_tightens_returns() {
        let s = s11();
        // (0, 0, 2): the two diagonal points pair as returns on both
        // sides, tracing a trivial circle that tightens away.
        let m = normalize(&s, &[0, 0, 2]).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn intersection_matches_slope_determinant() {
        let s = s11();
        let a = slope_curve(&s, 1, 0);
        let b = slope_curve(&s, 1, 3);
        assert_eq!(intersection_number(&a, &b).unwrap(), 3);
        assert_eq!(intersection_number(&b, &a).unwrap(), 3);
        assert_eq!(intersection_number(&a, &a).unwrap(), 0);
    }

    #[test]
    fn surface_mismatch_rejected() {
        let a = slope_curve(&s11(), 1, 0);
        let s04 = Surface::new(0, 4).unwrap();
        let b = MultiCurve::empty(&s04).unwrap();
        assert!(matches!(intersection_number(&a, &b), Err(Error::SurfaceMismatch(_))));
    }

    #[test]
    fn classify_slope_essential() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 1, 1);
        assert_eq!(classify_component(&ctx, &a).unwrap(), ComponentClass::Essential);
        let link = MultiCurve::from_normal_coords(&s, vec![2, 2, 2]).unwrap();
        assert_eq!(classify_component(&ctx, &link).unwrap(), ComponentClass::Peripheral);
        let c = Surface::closed(1).unwrap();
        let cctx = Ctx::new(&c).unwrap();
        let clink = MultiCurve::from_normal_coords(&c, vec![2, 2, 2]).unwrap();
        assert_eq!(classify_component(&cctx, &clink).unwrap(), ComponentClass::Trivial);
    }

    #[test]
    fn twist_acts_on_slopes() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 1, 0);
        let core = slope_curve(&s, 0, 1);
        let t = twist(&ctx, &a, &core, 1).unwrap();
        assert_eq!(intersection_number_in(&ctx, &t, &core).unwrap(), 1);
        assert_eq!(intersection_number_in(&ctx, &t, &a).unwrap(), 1);
        for n in [2i64, 3, -2] {
            let tn = twist(&ctx, &a, &core, n).unwrap();
            assert_eq!(
                intersection_number_in(&ctx, &tn, &a).unwrap(),
                n.unsigned_abs(),
                "power {n}"
            );
            assert_eq!(intersection_number_in(&ctx, &tn, &core).unwrap(), 1);
        }
    }

    #[test]
    fn twist_is_invertible() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 1, 2);
        let core = slope_curve(&s, 1, 0);
        let t = twist(&ctx, &a, &core, 1).unwrap();
        let back = twist(&ctx, &t, &core, -1).unwrap();
        assert_eq!(back.coords, a.coords);
    }

    #[test]
    fn twist_preserves_intersection_numbers() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 1, 0);
        let b = slope_curve(&s, 2, 1);
        let core = slope_curve(&s, 0, 1);
        let i0 = intersection_number_in(&ctx, &a, &b).unwrap();
        let ta = twist(&ctx, &a, &core, 1).unwrap();
        let tb = twist(&ctx, &b, &core, 1).unwrap();
        assert_eq!(intersection_number_in(&ctx, &ta, &tb).unwrap(), i0);
    }

    #[test]
    fn enumeration_finds_farey_neighbors() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let curves = enumerate_curves(&ctx, 4).unwrap();
        assert!(curves.len() >= 4);
        for c in &curves {
            assert_eq!(c.component_count(&ctx).unwrap(), 1);
        }
        for i in 0..curves.len() {
            for j in (i + 1)..curves.len() {
                assert!(!equal_in(&ctx, &curves[i], &curves[j]).unwrap());
            }
        }
    }

    #[test]
    fn closed_class_equality() {
        let c = Surface::closed(1).unwrap();
        let ctx = Ctx::new(&c).unwrap();
        let a = MultiCurve::from_normal_coords(&c, vec![0, 1, 1]).unwrap();
        let b = MultiCurve::from_normal_coords(&c, vec![1, 0, 1]).unwrap();
        assert!(equal_in(&ctx, &a, &a.clone()).unwrap());
        assert!(!equal_in(&ctx, &a, &b).unwrap());
    }
}
