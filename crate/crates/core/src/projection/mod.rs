//! Cutting, surgery, and subsurface projection relations; projection
//! distances including the annulus formula; hole detection for arc
//! complexes; and the distance-estimate aggregator.
//!
//! A subsurface is named by its boundary multicurve together with a sector
//! probe (a triangle corner) picking the complementary component, or by a
//! core curve for annuli.  Cutting overlays the boundary with a curve and
//! reads off the pieces inside the chosen component; surgery closes an arc
//! piece up along the boundary circles it touches; the projection is the
//! surgery of the cut.  Distances inside complexity-one windows are exact
//! through slope charts; annuli use the strip model of [`annulus`]; larger
//! windows report honest intervals.

pub mod annulus;
pub mod window;

use serde::{Deserialize, Serialize};

use crate::curve::{self, Ctx, MultiCurve};
use crate::error::{Error, Result};
use crate::explorer::{self, Distance};
use crate::geom::overlay::Overlay;
use crate::geom::poly::{self, PolyCurve, Portal};
use crate::surface::Surface;

use annulus::AnnularArcClass;
use window::WindowChart;

/// Names one complementary component: the corner sector of a triangle
/// lying inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorProbe {
    pub tri: usize,
    pub corner: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsurfaceKind {
    /// The whole surface.
    Whole,
    /// The annular neighborhood of a core curve.
    Annulus,
    /// A complementary component of the boundary multicurve.
    NonAnnular,
}

/// A cleanly embedded essential subsurface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsurfaceSpec {
    pub surface: Surface,
    /// Boundary multicurve for `NonAnnular`, the core curve for `Annulus`,
    /// empty for `Whole`.
    pub boundary: MultiCurve,
    /// Which complementary side is the subsurface (`NonAnnular` only).
    pub side: Option<SectorProbe>,
    pub kind: SubsurfaceKind,
}

/// Genus, boundary circles, and marked points of a subsurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubShape {
    pub genus: i64,
    pub boundary_cycles: usize,
    pub punctures_inside: usize,
}

impl SubShape {
    /// `xi = 3g - 3 + b` with boundary circles and punctures all counted.
    pub fn complexity(&self) -> i64 {
        3 * self.genus - 3 + (self.boundary_cycles + self.punctures_inside) as i64
    }
}

impl SubsurfaceSpec {
    pub fn whole(surface: &Surface) -> Result<SubsurfaceSpec> {
        Ok(SubsurfaceSpec {
            surface: surface.clone(),
            boundary: MultiCurve::empty(surface)?,
            side: None,
            kind: SubsurfaceKind::Whole,
        })
    }

    pub fn annulus(core: MultiCurve) -> SubsurfaceSpec {
        SubsurfaceSpec {
            surface: core.surface.clone(),
            boundary: core,
            side: None,
            kind: SubsurfaceKind::Annulus,
        }
    }

    pub fn component(boundary: MultiCurve, side: SectorProbe) -> SubsurfaceSpec {
        SubsurfaceSpec {
            surface: boundary.surface.clone(),
            boundary,
            side: Some(side),
            kind: SubsurfaceKind::NonAnnular,
        }
    }

    /// Clean embedding: every boundary component is essential, components
    /// pairwise non-parallel, and the side probe present where required.
    pub fn validate(&self, ctx: &Ctx) -> Result<()> {
        match self.kind {
            SubsurfaceKind::Whole => Ok(()),
            SubsurfaceKind::Annulus => {
                if self.boundary.component_count(ctx)? != 1 {
                    return Err(Error::Unsupported("annulus core must be a single curve".into()));
                }
                if curve::classify_component(ctx, &self.boundary)?
                    != curve::ComponentClass::Essential
                {
                    return Err(Error::Unsupported("annulus core must be essential".into()));
                }
                Ok(())
            }
            SubsurfaceKind::NonAnnular => {
                if self.boundary.is_empty() {
                    return Err(Error::Unsupported(
                        "non-annular strict subsurface needs a boundary".into(),
                    ));
                }
                if !curve::is_essential_multicurve(ctx, &self.boundary)? {
                    return Err(Error::Unsupported(
                        "subsurface boundary must be an essential multicurve".into(),
                    ));
                }
                if self.side.is_none() {
                    return Err(Error::Unsupported("side selector required".into()));
                }
                Ok(())
            }
        }
    }

    /// Topological shape of the named component.
    pub fn shape(&self, ctx: &Ctx) -> Result<SubShape> {
        match self.kind {
            SubsurfaceKind::Whole => Ok(SubShape {
                genus: ctx.surface.genus as i64,
                boundary_cycles: 0,
                punctures_inside: ctx.surface.boundary_count as usize,
            }),
            SubsurfaceKind::Annulus => {
                Ok(SubShape { genus: 0, boundary_cycles: 2, punctures_inside: 0 })
            }
            SubsurfaceKind::NonAnnular => {
                let probe = self.side.ok_or(Error::Unsupported("side selector".into()))?;
                let sb = self.boundary.system(ctx)?;
                let empty = poly::PolySystem::empty(&ctx.tri);
                let ov = Overlay::minimal(&ctx.tri, &sb, &empty, None)?;
                let rid = ov.region_of_sector(probe.tri, probe.corner);
                let r = &ov.regions()[rid];
                let aux = ctx.forget();
                let punctures =
                    r.interior_vertices.iter().filter(|v| Some(**v) != aux).count();
                Ok(SubShape {
                    genus: r.genus(),
                    boundary_cycles: r.boundary_count(),
                    punctures_inside: punctures,
                })
            }
        }
    }

    /// Canonical probes, one per complementary component of `boundary`.
    pub fn sides_of(ctx: &Ctx, boundary: &MultiCurve) -> Result<Vec<SectorProbe>> {
        let sb = boundary.system(ctx)?;
        let empty = poly::PolySystem::empty(&ctx.tri);
        let ov = Overlay::minimal(&ctx.tri, &sb, &empty, None)?;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for t in 0..ctx.tri.triangle_count() {
            for corner in 0..3 {
                let r = ov.region_of_sector(t, corner);
                if seen.insert(r) {
                    out.push(SectorProbe { tri: t, corner });
                }
            }
        }
        Ok(out)
    }
}

/// One arc of a cut, with everything surgery needs: the inner path of the
/// arc and the boundary circuits at its two ends.
#[derive(Clone, Debug)]
pub struct CutArc {
    /// Edges crossed strictly between the two end crossings.
    pub path_edges: Vec<usize>,
    /// Triangles along the walk; one longer than `path_edges`.
    pub path_tris: Vec<usize>,
    /// Boundary component polylines and the hop each end crossing sits on.
    pub delta_start: (PolyCurve, usize),
    pub delta_end: (PolyCurve, usize),
    pub same_component: bool,
}

/// Result of cutting a curve along a subsurface.
#[derive(Clone, Debug, Default)]
pub struct CutResult {
    pub closed: Vec<MultiCurve>,
    pub arcs: Vec<CutArc>,
}

impl CutResult {
    pub fn is_empty(&self) -> bool {
        self.closed.is_empty() && self.arcs.is_empty()
    }
}

/// Essential non-peripheral pieces of `alpha` inside the non-annular `x`.
pub fn cut(ctx: &Ctx, alpha: &MultiCurve, x: &SubsurfaceSpec) -> Result<CutResult> {
    match x.kind {
        SubsurfaceKind::Annulus => Err(Error::Unsupported(
            "annular cutting goes through the annular model".into(),
        )),
        SubsurfaceKind::Whole => {
            let mut out = CutResult::default();
            for c in alpha.components(ctx)? {
                if curve::classify_component(ctx, &c)? == curve::ComponentClass::Essential {
                    out.closed.push(c);
                }
            }
            Ok(out)
        }
        SubsurfaceKind::NonAnnular => {
            x.validate(ctx)?;
            let probe = x.side.expect("validated");
            let sb = x.boundary.system(ctx)?;
            let sa = alpha.system(ctx)?;
            let ov = Overlay::minimal(&ctx.tri, &sb, &sa, ctx.forget())?;
            let merged = ov.regions_ignoring(1);
            let x_id = merged[ov.region_of_sector(probe.tri, probe.corner)];
            let mut out = CutResult::default();
            for ci in 0..ov.systems[1].len() {
                let pieces = ov.curve_pieces(1, ci);
                if pieces.is_empty() {
                    let (l, _) = ov.curve_side_regions(1, ci);
                    if merged[l] != x_id {
                        continue;
                    }
                    let w =
                        poly::coords_of(&ctx.tri, std::slice::from_ref(&ov.systems[1][ci]));
                    let m = MultiCurve::from_normal_coords(&ctx.surface, w)?;
                    if in_subsurface_essential(ctx, x, &m)? {
                        out.closed.push(m);
                    }
                    continue;
                }
                let xs = ov.crossing_sequence(1, ci);
                for p in &pieces {
                    if merged[p.side_regions.0] != x_id {
                        continue;
                    }
                    let from = &xs[p.seq_from];
                    let to = &xs[p.seq_to];
                    let c = &ov.systems[1][ci];
                    let path_edges: Vec<usize> = p
                        .inner_portals
                        .iter()
                        .map(|&pi| c.portals[pi].edge().expect("closed curve portal"))
                        .collect();
                    let mut path_tris = Vec::with_capacity(path_edges.len() + 1);
                    path_tris.push(from.tri);
                    for &pi in &p.inner_portals {
                        path_tris.push(c.hop_tris[pi]);
                    }
                    debug_assert_eq!(*path_tris.last().unwrap(), to.tri);
                    out.arcs.push(CutArc {
                        path_edges,
                        path_tris,
                        same_component: from.a.curve == to.a.curve,
                        delta_start: (ov.systems[0][from.a.curve].clone(), from.a.hop),
                        delta_end: (ov.systems[0][to.a.curve].clone(), to.a.hop),
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Builder collecting portals with the triangle of the hop *arriving* at
/// each portal; rotating by one at the end yields the leaving-hop list a
/// `PolyCurve` stores.
#[derive(Default)]
struct LoopBuilder {
    portals: Vec<Portal>,
    arriving: Vec<usize>,
}

impl LoopBuilder {
    fn push(&mut self, p: Portal, arrived_via: usize) {
        self.portals.push(p);
        self.arriving.push(arrived_via);
    }

    /// Appends a full circuit of `d`, entered and left inside triangle `t`
    /// at mid-hop `g`.
    fn full_loop(&mut self, d: &PolyCurve, g: usize, t: usize) {
        let n = d.portals.len();
        for kk in 1..=n {
            let idx = (g + kk) % n;
            let via = if kk == 1 {
                t
            } else {
                d.hop_tris[(idx + n - 1) % n]
            };
            self.push(d.portals[idx], via);
        }
    }

    /// Appends the span of `d` from mid-hop `g_from` to mid-hop `g_to`,
    /// entering inside triangle `t`.
    fn span_forward(&mut self, d: &PolyCurve, g_from: usize, g_to: usize, t: usize) {
        let n = d.portals.len();
        let mut p = (g_from + 1) % n;
        let mut via = t;
        loop {
            self.push(d.portals[p], via);
            if p == g_to {
                break;
            }
            via = d.hop_tris[p];
            p = (p + 1) % n;
        }
    }

    fn span_backward(&mut self, d: &PolyCurve, g_from: usize, g_to: usize, t: usize) {
        let n = d.portals.len();
        let mut p = g_from;
        let mut via = t;
        loop {
            self.push(d.portals[p], via);
            if p == (g_to + 1) % n {
                break;
            }
            let prev = (p + n - 1) % n;
            via = d.hop_tris[prev];
            p = prev;
        }
    }

    fn into_curve(self) -> Option<PolyCurve> {
        let n = self.portals.len();
        if n == 0 {
            return None;
        }
        // hop_tris[i] is the triangle of the hop leaving portal i, which
        // is the arriving triangle of portal i+1.
        let hop_tris: Vec<usize> = (0..n).map(|i| self.arriving[(i + 1) % n]).collect();
        Some(PolyCurve { closed: true, portals: self.portals, hop_tris })
    }
}

/// Closes one cut arc along the boundary circles it touches: the essential
/// boundary components of a regular neighborhood of the arc union its
/// circles.
pub fn surgery_one(ctx: &Ctx, x: &SubsurfaceSpec, arc: &CutArc) -> Result<Vec<MultiCurve>> {
    let shape = x.shape(ctx)?;
    if shape.complexity() < 1 {
        return Err(Error::SimpleSubsurface);
    }
    let k = arc.path_edges.len();
    let t_start = arc.path_tris[0];
    let t_end = *arc.path_tris.last().unwrap();
    let push_fwd = |b: &mut LoopBuilder| {
        for i in 0..k {
            b.push(Portal::Edge(arc.path_edges[i]), arc.path_tris[i]);
        }
    };
    let push_bwd = |b: &mut LoopBuilder, first_via: usize| {
        for i in (0..k).rev() {
            let via = if i == k - 1 { first_via } else { arc.path_tris[i + 1] };
            b.push(Portal::Edge(arc.path_edges[i]), via);
        }
    };
    let mut candidates: Vec<PolyCurve> = Vec::new();
    if !arc.same_component {
        let (d2, g2) = &arc.delta_end;
        let (d1, g1) = &arc.delta_start;
        let mut b = LoopBuilder::default();
        push_fwd(&mut b);
        b.full_loop(d2, *g2, t_end);
        push_bwd(&mut b, t_end);
        b.full_loop(d1, *g1, t_start);
        candidates.extend(b.into_curve());
    } else {
        let (d, g1) = &arc.delta_start;
        let g2 = arc.delta_end.1;
        if g2 == *g1 {
            // Both crossings on one hop of the circle: the two sides are
            // the bare arc closure and the arc plus the full circuit.
            let mut b = LoopBuilder::default();
            push_fwd(&mut b);
            candidates.extend(b.into_curve());
            let mut b = LoopBuilder::default();
            push_fwd(&mut b);
            b.full_loop(d, g2, t_end);
            candidates.extend(b.into_curve());
        } else {
            let mut b = LoopBuilder::default();
            push_fwd(&mut b);
            b.span_forward(d, g2, *g1, t_end);
            candidates.extend(b.into_curve());
            let mut b = LoopBuilder::default();
            push_fwd(&mut b);
            b.span_backward(d, g2, *g1, t_end);
            candidates.extend(b.into_curve());
        }
    }
    let mut out: Vec<MultiCurve> = Vec::new();
    for cand in candidates {
        let Ok(sys) = poly::canonicalize_closed(&ctx.tri, vec![cand]) else { continue };
        if sys.curves.is_empty() {
            continue;
        }
        let m = MultiCurve::from_normal_coords(&ctx.surface, sys.coords(&ctx.tri))?;
        if in_subsurface_essential(ctx, x, &m)? && !out.iter().any(|o| o.coords == m.coords) {
            out.push(m);
        }
    }
    Ok(out)
}

/// A curve lies inside the subsurface and is essential, non-peripheral
/// there.
pub fn in_subsurface_essential(ctx: &Ctx, x: &SubsurfaceSpec, c: &MultiCurve) -> Result<bool> {
    match x.kind {
        SubsurfaceKind::Whole => {
            Ok(curve::classify_component(ctx, c)? == curve::ComponentClass::Essential)
        }
        SubsurfaceKind::Annulus => Ok(false),
        SubsurfaceKind::NonAnnular => {
            if curve::classify_component(ctx, c)? != curve::ComponentClass::Essential {
                return Ok(false);
            }
            let probe = x.side.expect("validated");
            let sb = x.boundary.system(ctx)?;
            let sc = c.system(ctx)?;
            let ov = Overlay::minimal(&ctx.tri, &sb, &sc, ctx.forget())?;
            if ov.intersection_number() != 0 {
                return Ok(false);
            }
            let merged = ov.regions_ignoring(1);
            let x_id = merged[ov.region_of_sector(probe.tri, probe.corner)];
            let (l, _) = ov.curve_side_regions(1, 0);
            if merged[l] != x_id {
                return Ok(false);
            }
            // Not parallel to a boundary component: no clean annulus
            // between c and the boundary.
            let aux = ctx.forget();
            for r in ov.regions() {
                if r.euler == 0
                    && r.cycles.len() == 2
                    && r.interior_vertices.iter().all(|v| Some(*v) == aux)
                {
                    let pure = r
                        .cycles
                        .iter()
                        .all(|cy| cy.darts.iter().all(|d| d.hop.sys == cy.darts[0].hop.sys));
                    let syss: std::collections::HashSet<usize> =
                        r.cycles.iter().map(|cy| cy.darts[0].hop.sys).collect();
                    if pure && syss.len() == 2 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// The outcome of a subsurface projection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum ProjectionValue {
    Curves(Vec<MultiCurve>),
    Annular(Vec<AnnularArcClass>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub value: ProjectionValue,
    pub empty: bool,
}

/// Subsurface projection: surgery of the cut for non-annular targets, the
/// strip model for annuli.
pub fn project(ctx: &Ctx, alpha: &MultiCurve, x: &SubsurfaceSpec) -> Result<ProjectionResult> {
    match x.kind {
        SubsurfaceKind::Annulus => {
            let classes = annular_project(ctx, alpha, &x.boundary)?;
            Ok(ProjectionResult {
                empty: classes.is_empty(),
                value: ProjectionValue::Annular(classes),
            })
        }
        _ => {
            let cutres = cut(ctx, alpha, x)?;
            let mut verts: Vec<MultiCurve> = Vec::new();
            for c in &cutres.closed {
                if !verts.iter().any(|v| v.coords == c.coords) {
                    verts.push(c.clone());
                }
            }
            for arc in &cutres.arcs {
                for m in surgery_one(ctx, x, arc)? {
                    if !verts.iter().any(|v| v.coords == m.coords) {
                        verts.push(m);
                    }
                }
            }
            verts.sort_by(|a, b| a.coords.cmp(&b.coords));
            Ok(ProjectionResult { empty: verts.is_empty(), value: ProjectionValue::Curves(verts) })
        }
    }
}

/// Annular projection through the slope model; exact on the torus windows,
/// where the curve equal to the core projects to nothing and disjoint
/// curves miss.
pub fn annular_project(
    ctx: &Ctx,
    alpha: &MultiCurve,
    core: &MultiCurve,
) -> Result<Vec<AnnularArcClass>> {
    if explorer::farey_window(&ctx.surface) != Some(1) {
        return Err(Error::Unsupported(
            "annular projection is modeled on the torus windows".into(),
        ));
    }
    let sa = explorer::ambient_slope(ctx, alpha)?;
    let sc = explorer::ambient_slope(ctx, core)?;
    annulus::project_slope(&sa, &sc)
}

/// Options for distance computations inside subsurfaces.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DistanceOpts {
    pub cap: u32,
    pub norm_bound: u64,
    pub chart_bound: u64,
}

impl Default for DistanceOpts {
    fn default() -> Self {
        DistanceOpts { cap: 6, norm_bound: 8, chart_bound: 8 }
    }
}

/// Chart of a complexity-one subsurface window.
pub fn window_chart(ctx: &Ctx, x: &SubsurfaceSpec, chart_bound: u64) -> Result<WindowChart> {
    let shape = x.shape(ctx)?;
    if shape.complexity() != 1 {
        return Err(Error::Unsupported("window charts need complexity one".into()));
    }
    let unit = if shape.genus == 1 { 1 } else { 2 };
    let pool = curve::enumerate_curves(ctx, chart_bound)?;
    let mut candidates = Vec::new();
    for c in pool {
        if in_subsurface_essential(ctx, x, &c)? {
            candidates.push(c);
        }
    }
    WindowChart::from_candidates(ctx, &candidates, unit)
}

/// `diam_X(pi_X(a) u pi_X(b))`: the subsurface projection distance.
pub fn subsurface_distance(
    ctx: &Ctx,
    a: &MultiCurve,
    b: &MultiCurve,
    x: &SubsurfaceSpec,
    opts: &DistanceOpts,
) -> Result<Distance> {
    match x.kind {
        SubsurfaceKind::Annulus => {
            let pa = annular_project(ctx, a, &x.boundary)?;
            let pb = annular_project(ctx, b, &x.boundary)?;
            if pa.is_empty() {
                return Err(Error::MissesSubsurface(0));
            }
            if pb.is_empty() {
                return Err(Error::MissesSubsurface(1));
            }
            Ok(Distance::Exact(annulus::annular_diameter(&pa, &pb) as u32))
        }
        SubsurfaceKind::Whole => {
            let cert = explorer::curve_distance(ctx, a, b, opts.cap, opts.norm_bound)?;
            Ok(cert.value)
        }
        SubsurfaceKind::NonAnnular => {
            let pa = match project(ctx, a, x)?.value {
                ProjectionValue::Curves(v) => v,
                ProjectionValue::Annular(_) => unreachable!(),
            };
            let pb = match project(ctx, b, x)?.value {
                ProjectionValue::Curves(v) => v,
                ProjectionValue::Annular(_) => unreachable!(),
            };
            if pa.is_empty() {
                return Err(Error::MissesSubsurface(0));
            }
            if pb.is_empty() {
                return Err(Error::MissesSubsurface(1));
            }
            let shape = x.shape(ctx)?;
            if shape.complexity() < 1 {
                return Err(Error::SimpleSubsurface);
            }
            let all: Vec<&MultiCurve> = pa.iter().chain(pb.iter()).collect();
            if shape.complexity() == 1 {
                let chart = window_chart(ctx, x, opts.chart_bound)?;
                let mut best = 0u32;
                for i in 0..all.len() {
                    for j in (i + 1)..all.len() {
                        let si = chart.slope_of(ctx, all[i])?;
                        let sj = chart.slope_of(ctx, all[j])?;
                        best = best.max(crate::slope::farey_distance(&si, &sj));
                    }
                }
                return Ok(Distance::Exact(best));
            }
            // Larger windows: honest interval from the small-distance
            // ladder inside X.
            let mut lo = 0u32;
            for i in 0..all.len() {
                for j in (i + 1)..all.len() {
                    let lij = if all[i].coords == all[j].coords
                        || curve::equal_in(ctx, all[i], all[j])?
                    {
                        0
                    } else if curve::intersection_number_in(ctx, all[i], all[j])? == 0 {
                        1
                    } else if fills_in_subsurface(ctx, x, all[i], all[j])? {
                        3
                    } else {
                        2
                    };
                    lo = lo.max(lij);
                }
            }
            if lo <= 1 {
                return Ok(Distance::Exact(lo));
            }
            Ok(Distance::Interval { lo, hi: lo.max(opts.cap) })
        }
    }
}

/// Whether two curves inside `x` fill it: every complementary region on
/// the X side is a disk with at most one marked point.
pub fn fills_in_subsurface(
    ctx: &Ctx,
    x: &SubsurfaceSpec,
    a: &MultiCurve,
    b: &MultiCurve,
) -> Result<bool> {
    if x.kind == SubsurfaceKind::Whole {
        return explorer::fills(ctx, a, b);
    }
    let probe = x.side.expect("validated");
    // Isotope `a` into closed-minimal position against the boundary, so
    // the union below is realizable coordinatewise.
    let sb = x.boundary.system(ctx)?;
    let sa = a.system(ctx)?;
    let pre = Overlay::minimal(&ctx.tri, &sb, &sa, ctx.forget())?;
    if pre.intersection_number() != 0 {
        return Err(Error::Unsupported("fills_in_subsurface needs curves inside x".into()));
    }
    let wa = poly::coords_of(&ctx.tri, &pre.systems[1]);
    let union_coords: Vec<u64> =
        x.boundary.coords.iter().zip(&wa).map(|(p, q)| p + q).collect();
    let union = MultiCurve::from_normal_coords(&ctx.surface, union_coords)?;
    let su = union.system(ctx)?;
    let sbb = b.system(ctx)?;
    let ov = Overlay::minimal(&ctx.tri, &su, &sbb, ctx.forget())?;
    let nb = sb.curves.len();
    let merged = ov.regions_merged_by(&|hop| hop.sys == 0 && hop.curve < nb);
    let x_id = merged[ov.region_of_sector(probe.tri, probe.corner)];
    let aux = ctx.forget();
    for r in ov.regions() {
        if merged[r.id] != x_id {
            continue;
        }
        let real = r.interior_vertices.iter().filter(|v| Some(**v) != aux).count();
        if r.euler != 1 || real > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Arc-complex hole test: `X` is a hole for `A(S, Delta)` exactly when
/// every circle of `Delta` is a boundary component of `X`.
pub fn is_hole_for_arc_complex(ctx: &Ctx, x: &SubsurfaceSpec, delta: &[usize]) -> Result<bool> {
    if delta.is_empty() {
        return Err(Error::EmptyDelta);
    }
    for d in delta {
        if *d >= ctx.surface.boundary_count as usize {
            return Err(Error::InvalidIndex(*d));
        }
    }
    match x.kind {
        SubsurfaceKind::Whole => Ok(true),
        SubsurfaceKind::Annulus => Ok(false),
        SubsurfaceKind::NonAnnular => {
            x.validate(ctx)?;
            let probe = x.side.expect("validated");
            let sb = x.boundary.system(ctx)?;
            let empty = poly::PolySystem::empty(&ctx.tri);
            let ov = Overlay::minimal(&ctx.tri, &sb, &empty, None)?;
            let rid = ov.region_of_sector(probe.tri, probe.corner);
            let inside = &ov.regions()[rid].interior_vertices;
            // The canonical triangulation numbers boundary circles by
            // their vertices.
            Ok(delta.iter().all(|d| inside.contains(d)))
        }
    }
}

/// `sum_X [d_X(a, b)]_c` over the listed holes with the cutoff `c`.
pub fn distance_estimate_sum(
    ctx: &Ctx,
    a: &MultiCurve,
    b: &MultiCurve,
    holes: &[SubsurfaceSpec],
    cutoff: u32,
    opts: &DistanceOpts,
) -> Result<Distance> {
    if cutoff == 0 {
        return Err(Error::Unsupported("cutoff must be positive".into()));
    }
    let cut = |v: u32| if v < cutoff { 0 } else { v };
    let mut lo = 0u32;
    let mut hi = 0u32;
    let mut exact = true;
    for x in holes {
        let d = subsurface_distance(ctx, a, b, x, opts)?;
        lo += cut(d.lo());
        hi += cut(d.hi());
        exact &= d.is_exact();
    }
    Ok(if exact { Distance::Exact(lo) } else { Distance::Interval { lo, hi } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::slope_curve;

    fn s11() -> Surface {
        Surface::new(1, 1).unwrap()
    }

    #[test]
    fn whole_surface_projection_is_identity() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let x = SubsurfaceSpec::whole(&s).unwrap();
        let a = slope_curve(&s, 1, 0);
        let p = project(&ctx, &a, &x).unwrap();
        match p.value {
            ProjectionValue::Curves(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].coords, a.coords);
            }
            _ => panic!("curves expected"),
        }
    }

    #[test]
    fn annular_distance_via_strip() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let core = slope_curve(&s, 0, 1);
        let x = SubsurfaceSpec::annulus(core.clone());
        let a = slope_curve(&s, 1, 0);
        let b = curve::twist(&ctx, &a, &core, 4).unwrap();
        let d = subsurface_distance(&ctx, &a, &b, &x, &DistanceOpts::default()).unwrap();
        assert!(d.is_exact());
        assert!(d.lo() >= 4 && d.lo() <= 6, "got {}", d.lo());
    }

    #[test]
    fn missing_curve_reported() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let core = slope_curve(&s, 0, 1);
        let x = SubsurfaceSpec::annulus(core.clone());
        let a = slope_curve(&s, 1, 0);
        let err = subsurface_distance(&ctx, &core, &a, &x, &DistanceOpts::default());
        assert!(matches!(err, Err(Error::MissesSubsurface(0))));
    }

    #[test]
    fn estimate_sum_zero_for_equal() {
        let s = s11();
        let ctx = Ctx::new(&s).unwrap();
        let a = slope_curve(&s, 2, 1);
        let x = SubsurfaceSpec::whole(&s).unwrap();
        let d =
            distance_estimate_sum(&ctx, &a, &a.clone(), &[x], 1, &DistanceOpts::default())
                .unwrap();
        assert_eq!(d, Distance::Exact(0));
    }
}
