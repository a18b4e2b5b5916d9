//! Common position of two curve systems and everything downstream of it:
//! exact intersection numbers, complementary regions with their topology,
//! and bigon removal.
//!
//! Both systems are drawn over the triangulation with an explicit merged
//! order of strand points on every edge.  Per triangle, the hops become
//! chords of a convex arrangement ([`super::arrange`]); gluing the
//! arrangement cells across edge gaps yields the complementary regions of
//! the union.  A bigon is a disk region with exactly two crossing corners,
//! one side from each system; removing bigons until none remain puts the
//! pair in minimal position, so the surviving crossing count is the
//! geometric intersection number.
//!
//! Two removal moves exist.  A bigon containing no vertex is undone by
//! swapping the strand order on the edge gaps its corridor crosses.  On a
//! closed surface the auxiliary marked point is invisible to isotopy, so a
//! bigon whose interior holds exactly that vertex is undone by rerouting
//! one side parallel to the other, re-canonicalizing, and rebuilding; each
//! reroute strictly drops the crossing count, so the loop terminates.

use std::collections::{HashMap, HashSet};

use super::arrange::{self, Arrangement, ChordSpec, Dart, Node, SegKind};
use super::poly::{self, PolyCurve, PolySystem, Portal};
use crate::error::{Error, Result};
use crate::surface::{SideLoc, Triangulation};

/// A strand point of one of the two systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OPoint {
    pub sys: usize,
    pub curve: usize,
    pub idx: usize,
}

/// Identity of a hop (one chord) of one of the two systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HopRef {
    pub sys: usize,
    pub curve: usize,
    pub hop: usize,
}

/// A crossing between the two systems, reported in the `(sys 0, sys 1)`
/// frame: `sign = +1` when the pair (sys-0 direction, sys-1 direction) is
/// positively oriented.
#[derive(Clone, Copy, Debug)]
pub struct CrossingRef {
    pub tri: usize,
    pub a: HopRef,
    pub b: HopRef,
    pub sign: i8,
}

/// Global 1-cell of the glued picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum GCell1 {
    Gap { edge: usize, gap: usize },
    Seg { tri: usize, seg: usize },
}

/// Global 0-cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GNode {
    Vertex(usize),
    EdgePt { edge: usize, pos: usize },
    Cross { tri: usize, id: usize },
    Bend { tri: usize, chord: usize },
}

/// One directed boundary piece of a region: a chord piece with the region
/// on its left.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryDart {
    pub tri: usize,
    pub seg: usize,
    pub forward: bool,
    pub hop: HopRef,
}

/// A boundary cycle of a region.
#[derive(Clone, Debug, Default)]
pub struct BoundaryCycle {
    pub darts: Vec<BoundaryDart>,
    /// Junction nodes between consecutive darts (same length as `darts`;
    /// entry `i` sits between darts `i` and `i+1`, cyclically).
    pub junctions: Vec<GNode>,
}

impl BoundaryCycle {
    pub fn crossing_junctions(&self) -> usize {
        self.junctions
            .iter()
            .filter(|j| matches!(j, GNode::Cross { .. }))
            .count()
    }

    pub fn vertex_touches(&self) -> Vec<usize> {
        self.junctions
            .iter()
            .filter_map(|j| match j {
                GNode::Vertex(v) => Some(*v),
                _ => None,
            })
            .collect()
    }

    /// Maximal runs of darts per system, cyclically.
    pub fn runs(&self) -> Vec<(usize, Vec<BoundaryDart>)> {
        let mut runs: Vec<(usize, Vec<BoundaryDart>)> = Vec::new();
        for d in &self.darts {
            match runs.last_mut() {
                Some((s, v)) if *s == d.hop.sys => v.push(*d),
                _ => runs.push((d.hop.sys, vec![*d])),
            }
        }
        if runs.len() >= 2 && runs[0].0 == runs.last().unwrap().0 {
            let (_, first) = runs.remove(0);
            runs.last_mut().unwrap().1.extend(first);
        }
        runs
    }
}

/// A stretch of a curve between two consecutive crossings.
#[derive(Clone, Debug)]
pub struct CurvePiece {
    /// Index into the curve's crossing sequence where the piece starts.
    pub seq_from: usize,
    pub seq_to: usize,
    /// Portal indices passed strictly between the crossings.
    pub inner_portals: Vec<usize>,
    /// Fine regions flanking the piece right after its first crossing.
    pub side_regions: (usize, usize),
}

/// Topological summary of one complementary region.
#[derive(Clone, Debug)]
pub struct RegionStats {
    pub id: usize,
    pub euler: i64,
    pub interior_vertices: Vec<usize>,
    pub cycles: Vec<BoundaryCycle>,
    pub cells: Vec<(usize, usize)>,
}

impl RegionStats {
    pub fn boundary_count(&self) -> usize {
        self.cycles.len()
    }

    /// Genus from chi and boundary count (orientable).
    pub fn genus(&self) -> i64 {
        (2 - self.euler - self.boundary_count() as i64) / 2
    }

    pub fn is_disk(&self) -> bool {
        self.euler == 1
    }

    pub fn is_annulus(&self) -> bool {
        self.euler == 0 && self.boundary_count() == 2
    }
}

struct TriPicture {
    arr: Arrangement,
    chords: Vec<HopRef>,
    slots: Vec<SlotMeta>,
    corner_slot: [usize; 3],
}

#[derive(Clone, Copy, Debug)]
enum SlotMeta {
    Corner(usize),
    Point(OPoint),
}

pub struct Overlay<'t> {
    pub tri: &'t Triangulation,
    sides: Vec<(SideLoc, SideLoc)>,
    pub systems: [Vec<PolyCurve>; 2],
    orders: Vec<Vec<OPoint>>,
    pics: Vec<TriPicture>,
    crossings: Vec<CrossingRef>,
    cell_region: HashMap<(usize, usize), usize>,
    regions: Vec<RegionStats>,
    end_vertices: HashSet<usize>,
}

impl<'t> Overlay<'t> {
    /// Lays the two systems over each other and reduces to minimal
    /// position.  `forget`, when set, names the auxiliary vertex of a
    /// closed surface: bigons containing exactly that vertex are removed
    /// too, by rerouting, which computes intersection numbers of the
    /// closed (point-forgotten) classes.
    pub fn minimal(
        tri: &'t Triangulation,
        a: &PolySystem,
        b: &PolySystem,
        forget: Option<usize>,
    ) -> Result<Overlay<'t>> {
        let mut ov =
            Overlay::fresh(tri, a.curves.clone(), b.curves.clone(), naive_orders(tri, a, b))?;
        ov.reduce(forget)?;
        Ok(ov)
    }

    fn reduce(&mut self, forget: Option<usize>) -> Result<()> {
        loop {
            while let Some(big) = self.find_bigon(None) {
                self.resolve_by_swap(big)?;
            }
            let Some(v) = forget else { return Ok(()) };
            match self.find_bigon(Some(v)) {
                Some(big) => {
                    let (sys0, sys1, orders) = self.rerouted(big)?;
                    *self = Overlay::fresh(self.tri, sys0, sys1, orders)?;
                }
                None => return Ok(()),
            }
        }
    }

    /// Builds the picture for the given strand orders without reduction.
    pub fn fresh(
        tri: &'t Triangulation,
        sys0: Vec<PolyCurve>,
        sys1: Vec<PolyCurve>,
        orders: Vec<Vec<OPoint>>,
    ) -> Result<Overlay<'t>> {
        let sides = tri.edge_sides()?;
        let mut ov = Overlay {
            tri,
            sides,
            systems: [sys0, sys1],
            orders,
            pics: Vec::new(),
            crossings: Vec::new(),
            cell_region: HashMap::new(),
            regions: Vec::new(),
            end_vertices: HashSet::new(),
        };
        ov.rebuild()?;
        Ok(ov)
    }

    pub fn intersection_number(&self) -> u64 {
        self.crossings.len() as u64
    }

    pub fn regions(&self) -> &[RegionStats] {
        &self.regions
    }

    pub fn crossing_list(&self) -> &[CrossingRef] {
        &self.crossings
    }

    fn curve(&self, sys: usize, c: usize) -> &PolyCurve {
        &self.systems[sys][c]
    }

    fn rebuild(&mut self) -> Result<()> {
        self.end_vertices.clear();
        for sys in 0..2 {
            for c in &self.systems[sys] {
                if !c.closed {
                    for last in [false, true] {
                        if let Some(v) = c.end_vertex(self.tri, last) {
                            self.end_vertices.insert(v);
                        }
                    }
                }
            }
        }
        self.pics = (0..self.tri.triangle_count())
            .map(|t| self.build_tri(t))
            .collect::<Result<Vec<_>>>()?;
        self.crossings.clear();
        for (t, pic) in self.pics.iter().enumerate() {
            for x in &pic.arr.crossings {
                let ha = pic.chords[x.chord_a];
                let hb = pic.chords[x.chord_b];
                if ha.sys == hb.sys {
                    return Err(Error::InconsistentCoordinates(format!(
                        "self-crossing within system {} in triangle {t}",
                        ha.sys
                    )));
                }
                let (a, b, sign) =
                    if ha.sys == 0 { (ha, hb, x.sign) } else { (hb, ha, -x.sign) };
                self.crossings.push(CrossingRef { tri: t, a, b, sign });
            }
        }
        self.glue_regions();
        Ok(())
    }

    fn build_tri(&self, t: usize) -> Result<TriPicture> {
        let mut slots: Vec<SlotMeta> = Vec::new();
        let mut corner_slot = [0usize; 3];
        let mut point_slot: HashMap<(usize, usize), usize> = HashMap::new();
        for k in 0..3 {
            corner_slot[k] = slots.len();
            slots.push(SlotMeta::Corner(k));
            let side = self.tri.tri_sides[t][k];
            let pts = &self.orders[side.edge];
            let range: Vec<usize> = if side.forward {
                (0..pts.len()).collect()
            } else {
                (0..pts.len()).rev().collect()
            };
            for pos in range {
                point_slot.insert((side.edge, pos), slots.len());
                slots.push(SlotMeta::Point(pts[pos]));
            }
        }
        let mut chords: Vec<ChordSpec> = Vec::new();
        let mut hop_ids: Vec<HopRef> = Vec::new();
        for sys in 0..2 {
            for (ci, c) in self.systems[sys].iter().enumerate() {
                for h in 0..c.hop_count() {
                    if c.hop_tris[h] != t {
                        continue;
                    }
                    let (i, j) = c.hop_ends(h);
                    let slot_of = |pidx: usize| -> Result<usize> {
                        match c.portals[pidx] {
                            Portal::Edge(e) => {
                                let pos = self.orders[e]
                                    .iter()
                                    .position(|p| *p == OPoint { sys, curve: ci, idx: pidx })
                                    .ok_or_else(|| {
                                        Error::InconsistentCoordinates(
                                            "strand point missing from edge order".into(),
                                        )
                                    })?;
                                Ok(point_slot[&(e, pos)])
                            }
                            Portal::Corner(k) => Ok(corner_slot[k]),
                        }
                    };
                    chords.push(ChordSpec { a: slot_of(i)?, b: slot_of(j)? });
                    hop_ids.push(HopRef { sys, curve: ci, hop: h });
                }
            }
        }
        let arr = arrange::arrange(slots.len(), &chords);
        Ok(TriPicture { arr, chords: hop_ids, slots, corner_slot })
    }

    fn glue_regions(&mut self) {
        let mut offsets = Vec::with_capacity(self.pics.len());
        let mut total = 0usize;
        for pic in &self.pics {
            offsets.push(total);
            total += pic.arr.cells.len();
        }
        let mut uf = UnionFind::new(total);
        for e in 0..self.tri.edge_count {
            let (floc, bloc) = self.sides[e];
            let w = self.orders[e].len();
            for gap in 0..=w {
                let fa = self.gap_cell(floc, true, gap, w);
                let fb = self.gap_cell(bloc, false, gap, w);
                uf.union(offsets[floc.tri] + fa, offsets[bloc.tri] + fb);
            }
        }
        let mut region_of_root: HashMap<usize, usize> = HashMap::new();
        let mut regions: Vec<RegionStats> = Vec::new();
        let mut cell_region: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, pic) in self.pics.iter().enumerate() {
            for cid in 0..pic.arr.cells.len() {
                let root = uf.find(offsets[t] + cid);
                let rid = *region_of_root.entry(root).or_insert_with(|| {
                    regions.push(RegionStats {
                        id: regions.len(),
                        euler: 0,
                        interior_vertices: Vec::new(),
                        cycles: Vec::new(),
                        cells: Vec::new(),
                    });
                    regions.len() - 1
                });
                regions[rid].cells.push((t, cid));
                cell_region.insert((t, cid), rid);
            }
        }
        // Interior vertices: vertices without arc ends whose sectors all
        // glue into the region.
        let mut sector_region: HashMap<usize, HashSet<usize>> = HashMap::new();
        for (t, pic) in self.pics.iter().enumerate() {
            for k in 0..3 {
                let v = self.tri.tri_vertices[t][k];
                if let Some(cs) = pic.arr.node_cells.get(&Node::Slot(pic.corner_slot[k])) {
                    for c in cs {
                        sector_region.entry(v).or_default().insert(cell_region[&(t, *c)]);
                    }
                }
            }
        }
        for (v, rs) in &sector_region {
            if self.end_vertices.contains(v) {
                continue;
            }
            debug_assert_eq!(rs.len(), 1, "sectors of a free vertex glue into one region");
            for rid in rs {
                regions[*rid].interior_vertices.push(*v);
            }
        }
        for r in &mut regions {
            r.interior_vertices.sort_unstable();
        }
        // Euler characteristic of the open region: 2-cells minus interior
        // 1-cells plus interior 0-cells.  Strand pieces are never interior
        // to a complement region; gap arcs always are (their two sides
        // glue); the only interior 0-cells are free vertices.
        for r in &mut regions {
            let mut gaps: HashSet<GCell1> = HashSet::new();
            for &(t, cid) in &r.cells {
                let pic = &self.pics[t];
                for d in &pic.arr.cells[cid] {
                    if let SegKind::Boundary(_) = pic.arr.segments[d.seg].kind {
                        gaps.insert(self.gcell1(t, d.seg));
                    }
                }
            }
            r.euler =
                r.cells.len() as i64 - gaps.len() as i64 + r.interior_vertices.len() as i64;
        }
        self.cell_region = cell_region;
        self.regions = regions;
        self.trace_boundaries();
    }

    fn gcell1(&self, t: usize, seg: usize) -> GCell1 {
        match self.pics[t].arr.segments[seg].kind {
            SegKind::Boundary(slot) => {
                let (edge, gap) = self.slot_arc_to_gap(t, slot);
                GCell1::Gap { edge, gap }
            }
            SegKind::ChordPiece { .. } => GCell1::Seg { tri: t, seg },
        }
    }

    fn gnode(&self, t: usize, n: Node) -> GNode {
        let pic = &self.pics[t];
        match n {
            Node::Slot(s) => match pic.slots[s] {
                SlotMeta::Corner(k) => GNode::Vertex(self.tri.tri_vertices[t][k]),
                SlotMeta::Point(op) => {
                    let (e, pos) = self.point_edge_pos(op);
                    GNode::EdgePt { edge: e, pos }
                }
            },
            Node::Cross(i) => GNode::Cross { tri: t, id: i },
            Node::Bend(c) => GNode::Bend { tri: t, chord: c },
        }
    }

    fn point_edge_pos(&self, op: OPoint) -> (usize, usize) {
        let e = match self.curve(op.sys, op.curve).portals[op.idx] {
            Portal::Edge(e) => e,
            Portal::Corner(_) => unreachable!("edge point expected"),
        };
        let pos = self.orders[e].iter().position(|p| *p == op).expect("ordered");
        (e, pos)
    }

    /// The boundary arc starting at slot `slot` of triangle `t`, in edge
    /// coordinates `(edge, gap)`.
    fn slot_arc_to_gap(&self, t: usize, slot: usize) -> (usize, usize) {
        let pic = &self.pics[t];
        let k = (0..3).rev().find(|&k| slot >= pic.corner_slot[k]).expect("slot layout");
        let side = self.tri.tri_sides[t][k];
        let w = self.orders[side.edge].len();
        let local = slot - pic.corner_slot[k];
        debug_assert!(local <= w);
        let gap = if side.forward { local } else { w - local };
        (side.edge, gap)
    }

    /// Inner cell adjacent to a gap, seen from one side of the edge.
    fn gap_cell(&self, loc: SideLoc, forward: bool, gap: usize, w: usize) -> usize {
        let pic = &self.pics[loc.tri];
        let local = if forward { gap } else { w - gap };
        let slot = pic.corner_slot[loc.side] + local;
        pic.arr.boundary_cell[slot]
    }

    fn dart_cell(&self, t: usize, d: Dart) -> Option<usize> {
        let (l, r) = self.pics[t].arr.seg_cells[d.seg];
        let c = if d.forward { l } else { r };
        if c == usize::MAX {
            None
        } else {
            Some(c)
        }
    }

    fn dart_region(&self, t: usize, d: Dart) -> Option<usize> {
        self.dart_cell(t, d).map(|c| self.cell_region[&(t, c)])
    }

    fn dart_head(&self, t: usize, d: Dart) -> GNode {
        let seg = &self.pics[t].arr.segments[d.seg];
        self.gnode(t, if d.forward { seg.to } else { seg.from })
    }

    /// All boundary darts (chord pieces separating two distinct regions),
    /// in deterministic order.
    fn boundary_darts(&self) -> Vec<(usize, Dart)> {
        let mut out = Vec::new();
        for (t, pic) in self.pics.iter().enumerate() {
            for (si, seg) in pic.arr.segments.iter().enumerate() {
                if let SegKind::ChordPiece { .. } = seg.kind {
                    let (l, r) = pic.arr.seg_cells[si];
                    if self.cell_region[&(t, l)] != self.cell_region[&(t, r)] {
                        out.push((t, Dart { seg: si, forward: true }));
                        out.push((t, Dart { seg: si, forward: false }));
                    }
                }
            }
        }
        out
    }

    /// The boundary dart following `d`, pivoting around `d`'s head node.
    fn next_boundary_dart(&self, t: usize, d: Dart) -> (usize, Dart) {
        let rid = self.dart_region(t, d).expect("boundary dart");
        let next_in_cell = |t: usize, d: Dart| -> Dart {
            let cell = self.dart_cell(t, d).expect("inner dart");
            let cyc = &self.pics[t].arr.cells[cell];
            let i = cyc.iter().position(|x| *x == d).expect("dart in its cell cycle");
            cyc[(i + 1) % cyc.len()]
        };
        let (mut wt, mut wd) = (t, d);
        loop {
            let y = next_in_cell(wt, wd);
            let seg = &self.pics[wt].arr.segments[y.seg];
            match seg.kind {
                SegKind::ChordPiece { .. } => {
                    let other = Dart { seg: y.seg, forward: !y.forward };
                    if self.dart_region(wt, other) != Some(rid) {
                        return (wt, y);
                    }
                    // Interior strand piece: hop over it, keep pivoting.
                    wd = other;
                }
                SegKind::Boundary(slot) => {
                    // Cross the edge gluing and keep pivoting around the
                    // same global node (the tail of y).
                    let tail = self.gnode(wt, if y.forward { seg.from } else { seg.to });
                    let (edge, gap) = self.slot_arc_to_gap(wt, slot);
                    let (ot, od) = self.twin_gap_dart(wt, edge, gap, tail);
                    wt = ot;
                    wd = od;
                }
            }
        }
    }

    /// The twin of a gap arc on the other side of the edge, directed so
    /// that its head is the given global node.
    fn twin_gap_dart(&self, t: usize, edge: usize, gap: usize, head: GNode) -> (usize, Dart) {
        let (floc, bloc) = self.sides[edge];
        let oloc = if floc.tri == t && self.slot_arc_matches(floc, gap) {
            bloc
        } else if bloc.tri == t && self.slot_arc_matches(bloc, gap) {
            floc
        } else if floc.tri == t {
            bloc
        } else {
            floc
        };
        let oforward = {
            // Recompute which side of the edge oloc is.
            oloc == floc
        };
        let w = self.orders[edge].len();
        let local = if oforward { gap } else { w - gap };
        let slot = self.pics[oloc.tri].corner_slot[oloc.side] + local;
        // Boundary arcs are the first `m` segments, indexed by start slot.
        let seg = slot;
        for fwd in [true, false] {
            let d = Dart { seg, forward: fwd };
            if self.dart_head(oloc.tri, d) == head && self.dart_cell(oloc.tri, d).is_some() {
                return (oloc.tri, d);
            }
        }
        // The inner side may be the reversed dart; pick by head only.
        for fwd in [true, false] {
            let d = Dart { seg, forward: fwd };
            if self.dart_head(oloc.tri, d) == head {
                return (oloc.tri, d);
            }
        }
        unreachable!("twin gap dart not found");
    }

    fn slot_arc_matches(&self, loc: SideLoc, _gap: usize) -> bool {
        // Both sides carry an arc for every gap; disambiguation between
        // the two sides of a self-glued triangle pair is by triangle only.
        let _ = loc;
        true
    }

    fn trace_boundaries(&mut self) {
        let pending = self.boundary_darts();
        let mut seen: HashSet<(usize, usize, bool)> = HashSet::new();
        let mut cycles_of_region: HashMap<usize, Vec<BoundaryCycle>> = HashMap::new();
        for &(t0, d0) in &pending {
            if seen.contains(&(t0, d0.seg, d0.forward)) {
                continue;
            }
            let rid = self.dart_region(t0, d0).expect("boundary dart has inner side");
            let mut cyc = BoundaryCycle::default();
            let (mut t, mut d) = (t0, d0);
            loop {
                seen.insert((t, d.seg, d.forward));
                let hop = match self.pics[t].arr.segments[d.seg].kind {
                    SegKind::ChordPiece { chord, .. } => self.pics[t].chords[chord],
                    SegKind::Boundary(_) => unreachable!(),
                };
                cyc.darts.push(BoundaryDart { tri: t, seg: d.seg, forward: d.forward, hop });
                cyc.junctions.push(self.dart_head(t, d));
                let (nt, nd) = self.next_boundary_dart(t, d);
                t = nt;
                d = nd;
                if t == t0 && d == d0 {
                    break;
                }
            }
            cycles_of_region.entry(rid).or_default().push(cyc);
        }
        for r in &mut self.regions {
            r.cycles = cycles_of_region.remove(&r.id).unwrap_or_default();
        }
    }

    /// Finds a removable bigon: disk region, one cycle, two crossing
    /// junctions, one run per system, no vertex touches, and interior
    /// vertices exactly `{}` (or `{aux}`).
    fn find_bigon(&self, aux: Option<usize>) -> Option<usize> {
        for r in &self.regions {
            if r.euler != 1 || r.cycles.len() != 1 {
                continue;
            }
            let cyc = &r.cycles[0];
            if cyc.crossing_junctions() != 2 || !cyc.vertex_touches().is_empty() {
                continue;
            }
            let runs = cyc.runs();
            if runs.len() != 2 || runs[0].0 == runs[1].0 {
                continue;
            }
            match aux {
                None => {
                    if !r.interior_vertices.is_empty() {
                        continue;
                    }
                }
                Some(v) => {
                    if r.interior_vertices != vec![v] {
                        continue;
                    }
                }
            }
            return Some(r.id);
        }
        None
    }

    /// Order-swap removal of a vertex-free bigon.
    fn resolve_by_swap(&mut self, region: usize) -> Result<()> {
        let r = &self.regions[region];
        let mut swaps: Vec<(usize, usize)> = Vec::new();
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut counts: HashMap<GCell1, usize> = HashMap::new();
        for &(t, cid) in &r.cells {
            let pic = &self.pics[t];
            for d in &pic.arr.cells[cid] {
                if let SegKind::Boundary(_) = pic.arr.segments[d.seg].kind {
                    *counts.entry(self.gcell1(t, d.seg)).or_insert(0) += 1;
                }
            }
        }
        // Gaps interior to the region are those seen from both sides.
        for (g, n) in counts {
            if n == 2 {
                if let GCell1::Gap { edge, gap } = g {
                    if seen.insert((edge, gap)) {
                        swaps.push((edge, gap));
                    }
                }
            }
        }
        for (edge, gap) in swaps {
            if gap == 0 || gap == self.orders[edge].len() {
                return Err(Error::InconsistentCoordinates(
                    "vertex-adjacent gap inside a vertex-free bigon".into(),
                ));
            }
            let ord = &mut self.orders[edge];
            if ord[gap - 1].sys == ord[gap].sys {
                return Err(Error::InconsistentCoordinates(
                    "bigon corridor gap not between the two systems".into(),
                ));
            }
            ord.swap(gap - 1, gap);
        }
        self.rebuild()
    }

    /// Reroute removal of an aux-vertex bigon: the system-1 run is
    /// replaced by a parallel copy of the system-0 run.  Candidate splices
    /// are validated by rebuilding and checking that the crossing count
    /// strictly dropped.
    #[allow(clippy::type_complexity)]
    fn rerouted(&self, region: usize) -> Result<(Vec<PolyCurve>, Vec<PolyCurve>, Vec<Vec<OPoint>>)> {
        let r = &self.regions[region];
        let cyc = &r.cycles[0];
        let runs = cyc.runs();
        let (run0, run1) = if runs[0].0 == 0 {
            (&runs[0].1, &runs[1].1)
        } else {
            (&runs[1].1, &runs[0].1)
        };
        let a_hops = hop_sequence(run0);
        let b_hops = hop_sequence(run1);
        let b_curve = run1[0].hop.curve;
        let bc = &self.systems[1][b_curve];
        let ac_curve = run0[0].hop.curve;
        let ac = &self.systems[0][ac_curve];
        // Normalize B's chain to forward order along its own indexing.
        let n_b = bc.portals.len();
        let b_forward = b_hops.len() < 2 || b_hops[1] == (b_hops[0] + 1) % n_b;
        let chain: Vec<usize> = if b_forward {
            b_hops.clone()
        } else {
            b_hops.iter().rev().cloned().collect()
        };
        // A-corridor portal path (edges + middle triangles), in the run's
        // recorded order; both directions are tried.
        let n_a = ac.portals.len();
        let mut a_chain = a_hops.clone();
        let a_fwd = a_chain.len() < 2 || a_chain[1] == (a_chain[0] + 1) % n_a;
        if !a_fwd {
            a_chain.reverse();
        }
        let mid: Vec<(usize, usize)> = a_chain
            .windows(2)
            .map(|w| {
                let shared = w[1]; // portal starting hop w[1]
                let e = ac.portals[shared].edge().expect("closed curve portal");
                (e, ac.hop_tris[w[1]])
            })
            .collect();
        let tris_first = ac.hop_tris[a_chain[0]];
        let old = self.intersection_number();
        let mut candidates = Vec::new();
        for flip in [false, true] {
            let mut edges: Vec<usize> = mid.iter().map(|(e, _)| *e).collect();
            // Middle hop triangles: hop i runs between mid portal i-1 and
            // i; derive from the chain triangles.
            let mut tris: Vec<usize> = a_chain.iter().skip(1).map(|h| ac.hop_tris[*h]).collect();
            let mut t_first = tris_first;
            let mut t_last = ac.hop_tris[*a_chain.last().unwrap()];
            if flip {
                edges.reverse();
                tris = {
                    let mut v: Vec<usize> =
                        a_chain.iter().rev().skip(1).map(|h| ac.hop_tris[*h]).collect();
                    // reversing the corridor swaps roles of hop triangles
                    v.pop();
                    let mut w: Vec<usize> =
                        a_chain.iter().rev().take(a_chain.len() - 1).map(|h| ac.hop_tris[*h]).collect();
                    std::mem::swap(&mut v, &mut w);
                    v
                };
                std::mem::swap(&mut t_first, &mut t_last);
            }
            if let Some(new_b) = splice_replacement(bc, &chain, &edges, &tris, t_first, t_last) {
                candidates.push(new_b);
            }
        }
        for cand in candidates {
            let mut sys1 = self.systems[1].clone();
            sys1[b_curve] = cand;
            let Ok(s1) = poly::canonicalize_closed(self.tri, sys1) else { continue };
            let Ok(s0) = poly::canonicalize_closed(self.tri, self.systems[0].clone()) else {
                continue;
            };
            let orders = naive_orders(self.tri, &s0, &s1);
            let Ok(mut trial) = Overlay::fresh(self.tri, s0.curves.clone(), s1.curves.clone(), orders)
            else {
                continue;
            };
            let mut ok = true;
            while let Some(big) = trial.find_bigon(None) {
                if trial.resolve_by_swap(big).is_err() {
                    ok = false;
                    break;
                }
            }
            if ok && trial.intersection_number() < old {
                let orders = trial.orders.clone();
                return Ok((trial.systems[0].clone(), trial.systems[1].clone(), orders));
            }
        }
        Err(Error::InconsistentCoordinates(
            "aux bigon reroute found no strictly improving splice".into(),
        ))
    }

    /// Region containing the corner sector probe `(tri, corner)`: the cell
    /// just counterclockwise of the corner.
    pub fn region_of_sector(&self, t: usize, corner: usize) -> usize {
        let pic = &self.pics[t];
        let slot = pic.corner_slot[corner];
        let c = pic.arr.boundary_cell[slot];
        self.cell_region[&(t, c)]
    }

    /// Crossings along a curve in traversal order.
    pub fn crossing_sequence(&self, sys: usize, curve: usize) -> Vec<CrossingRef> {
        let c = self.curve(sys, curve);
        let mut out = Vec::new();
        for h in 0..c.hop_count() {
            let hop = HopRef { sys, curve, hop: h };
            let t = c.hop_tris[h];
            let pic = &self.pics[t];
            let Some(chord) = pic.chords.iter().position(|x| *x == hop) else { continue };
            for &xid in &pic.arr.chord_crossings[chord] {
                let x = &pic.arr.crossings[xid];
                let other = if x.chord_a == chord { x.chord_b } else { x.chord_a };
                let other_hop = pic.chords[other];
                let sign = if x.chord_a == chord { x.sign } else { -x.sign };
                let (a, b, s) = if sys == 0 {
                    (hop, other_hop, sign)
                } else {
                    (other_hop, hop, -sign)
                };
                out.push(CrossingRef { tri: t, a, b, sign: s });
            }
        }
        out
    }

    /// The two fine regions flanking a curve (left, right of its first
    /// hop).  Meaningful for curves with no crossings.
    pub fn curve_side_regions(&self, sys: usize, curve: usize) -> (usize, usize) {
        let c = self.curve(sys, curve);
        let t = c.hop_tris[0];
        let pic = &self.pics[t];
        let hop = HopRef { sys, curve, hop: 0 };
        let chord = pic.chords.iter().position(|x| *x == hop).expect("hop chord");
        let (si, _) = pic
            .arr
            .segments
            .iter()
            .enumerate()
            .find(|(_, s)| matches!(s.kind, SegKind::ChordPiece { chord: ch, .. } if ch == chord))
            .expect("chord has a piece");
        let (l, r) = pic.arr.seg_cells[si];
        (self.cell_region[&(t, l)], self.cell_region[&(t, r)])
    }

    /// Pieces of a curve between consecutive crossings (cyclically), in
    /// traversal order.  Empty when the curve has no crossings.
    pub fn curve_pieces(&self, sys: usize, curve: usize) -> Vec<CurvePiece> {
        let xs = self.crossing_sequence(sys, curve);
        if xs.is_empty() {
            return Vec::new();
        }
        let c = self.curve(sys, curve);
        let nh = c.hop_count();
        let n = xs.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let from = &xs[i];
            let to = &xs[(i + 1) % n];
            let from_hop = if sys == 0 { from.a.hop } else { from.b.hop };
            let to_hop = if sys == 0 { to.a.hop } else { to.b.hop };
            // Portals strictly between the crossings.  Two chord-adjacent
            // crossings share a hop with nothing between; the piece from
            // the last crossing back to the first wraps the whole curve.
            let full_wrap = from_hop == to_hop && (i + 1) % n == 0;
            let mut portals = Vec::new();
            if full_wrap {
                // The piece passes every portal once, ending back on its
                // own hop.
                for k in 1..=nh {
                    portals.push((from_hop + k) % nh);
                }
            } else {
                let mut h = from_hop;
                while h != to_hop {
                    let next = (h + 1) % nh;
                    portals.push(next);
                    h = next;
                }
            }
            // Side regions: from the segment leaving the `from` crossing.
            let t = from.tri;
            let pic = &self.pics[t];
            let hop = HopRef { sys, curve, hop: from_hop };
            let chord = pic.chords.iter().position(|x| *x == hop).expect("hop chord");
            let xid = pic
                .arr
                .crossings
                .iter()
                .position(|cr| {
                    let ha = pic.chords[cr.chord_a];
                    let hb = pic.chords[cr.chord_b];
                    (ha == from.a && hb == from.b) || (ha == from.b && hb == from.a)
                })
                .expect("crossing present in its triangle");
            let (si, _) = pic
                .arr
                .segments
                .iter()
                .enumerate()
                .find(|(_, s)| {
                    matches!(s.kind, SegKind::ChordPiece { chord: ch, .. } if ch == chord)
                        && s.from == Node::Cross(xid)
                })
                .expect("every crossing has an outgoing chord piece");
            let (l, r) = pic.arr.seg_cells[si];
            out.push(CurvePiece {
                seq_from: i,
                seq_to: (i + 1) % n,
                inner_portals: portals,
                side_regions: (self.cell_region[&(t, l)], self.cell_region[&(t, r)]),
            });
        }
        out
    }

    /// Region ids after merging across all strands of one system: locates
    /// cells relative to the *other* system's complement.  Returns, for
    /// each fine region id, the merged id.
    pub fn regions_ignoring(&self, sys: usize) -> Vec<usize> {
        self.regions_merged_by(&|hop| hop.sys != sys)
    }

    /// Region ids after merging across every strand whose hop fails the
    /// `keep` predicate.
    pub fn regions_merged_by(&self, keep: &dyn Fn(HopRef) -> bool) -> Vec<usize> {
        let mut uf = UnionFind::new(self.regions.len());
        for (t, pic) in self.pics.iter().enumerate() {
            for (si, seg) in pic.arr.segments.iter().enumerate() {
                if let SegKind::ChordPiece { chord, .. } = seg.kind {
                    if keep(pic.chords[chord]) {
                        continue;
                    }
                    let (l, r) = pic.arr.seg_cells[si];
                    let rl = self.cell_region[&(t, l)];
                    let rr = self.cell_region[&(t, r)];
                    uf.union(rl, rr);
                }
            }
        }
        let mut canonical: HashMap<usize, usize> = HashMap::new();
        (0..self.regions.len())
            .map(|r| {
                let root = uf.find(r);
                let next = canonical.len();
                *canonical.entry(root).or_insert(next)
            })
            .collect()
    }
}

/// Hop ids visited by a run, deduplicating consecutive repeats.
fn hop_sequence(run: &[BoundaryDart]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for d in run {
        if out.last() != Some(&d.hop.hop) {
            out.push(d.hop.hop);
        }
    }
    out
}

/// Builds the rerouted copy of `bc`: the chain of hops `chain` (forward
/// along the curve) is replaced by crossings of `edges` through `tris`,
/// entering at `t_first` and leaving at `t_last`.  Returns None when the
/// splice is structurally impossible (an edge not bounding its triangle).
fn splice_replacement(
    bc: &PolyCurve,
    chain: &[usize],
    edges: &[usize],
    tris: &[usize],
    t_first: usize,
    t_last: usize,
) -> Option<PolyCurve> {
    let n = bc.portals.len();
    let h_first = chain[0];
    let h_last = *chain.last().unwrap();
    // Kept portals: from (h_last + 1) around to h_first, inclusive.
    let mut portals = Vec::new();
    let mut hops = Vec::new();
    let mut i = (h_last + 1) % n;
    loop {
        portals.push(bc.portals[i]);
        if i == h_first {
            break;
        }
        hops.push(bc.hop_tris[i]);
        i = (i + 1) % n;
    }
    // Now append the replacement: hop in t_first, then the corridor.
    hops.push(t_first);
    for (k, e) in edges.iter().enumerate() {
        portals.push(Portal::Edge(*e));
        let t = if k + 1 < edges.len() { tris[k] } else { t_last };
        hops.push(t);
    }
    if edges.is_empty() {
        // Single replacement hop from portal h_first to portal h_last+1:
        // the entering and leaving triangles must agree.
        if t_first != t_last {
            return None;
        }
        hops.pop();
        hops.push(t_first);
    }
    let out = PolyCurve { closed: true, portals, hop_tris: hops };
    if out.portals.len() != out.hop_tris.len() {
        return None;
    }
    Some(out)
}

/// Initial merged orders: system 0's points first, then system 1's.
pub fn naive_orders(tri: &Triangulation, a: &PolySystem, b: &PolySystem) -> Vec<Vec<OPoint>> {
    let mut orders = Vec::with_capacity(tri.edge_count);
    for e in 0..tri.edge_count {
        let mut v: Vec<OPoint> = Vec::new();
        for p in &a.edge_orders[e] {
            v.push(OPoint { sys: 0, curve: p.curve, idx: p.idx });
        }
        for p in &b.edge_orders[e] {
            v.push(OPoint { sys: 1, curve: p.curve, idx: p.idx });
        }
        orders.push(v);
    }
    orders
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::poly::system_from_coords;
    use crate::surface::Surface;

    fn s11() -> Triangulation {
        Surface::new(1, 1).unwrap().canonical_triangulation().unwrap()
    }

    /// Slope (p, q) as normal coordinates on the canonical S_{1,1}
    /// triangulation: (|q|, |p|, |p + q|).
    fn slope_coords(p: i64, q: i64) -> Vec<u64> {
        vec![q.unsigned_abs(), p.unsigned_abs(), (p + q).unsigned_abs()]
    }

    fn ii(tri: &Triangulation, a: &[u64], b: &[u64]) -> u64 {
        let sa = system_from_coords(tri, &a.to_vec()).unwrap();
        let sb = system_from_coords(tri, &b.to_vec()).unwrap();
        Overlay::minimal(tri, &sa, &sb, None).unwrap().intersection_number()
    }

    #[test]
    fn empty_overlay_single_region() {
        let tri = s11();
        let a = PolySystem::empty(&tri);
        let b = PolySystem::empty(&tri);
        let ov = Overlay::minimal(&tri, &a, &b, None).unwrap();
        assert_eq!(ov.intersection_number(), 0);
        assert_eq!(ov.regions().len(), 1);
        let r = &ov.regions()[0];
        // Complement of nothing: the whole once-punctured torus, chi = 0
        // as a CW complex with its single vertex.
        assert_eq!(r.euler, 0);
        assert_eq!(r.interior_vertices, vec![0]);
    }

    #[test]
    fn farey_neighbors_meet_once() {
        let tri = s11();
        assert_eq!(ii(&tri, &slope_coords(1, 0), &slope_coords(0, 1)), 1);
        assert_eq!(ii(&tri, &slope_coords(1, 0), &slope_coords(1, 1)), 1);
        assert_eq!(ii(&tri, &slope_coords(0, 1), &slope_coords(1, 1)), 1);
    }

    #[test]
    fn slope_intersections_match_determinant() {
        let tri = s11();
        let samples = [(1i64, 0i64), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 2), (2, -3)];
        for &(p, q) in &samples {
            for &(r, s) in &samples {
                let expected = (p * s - q * r).unsigned_abs();
                let got = ii(&tri, &slope_coords(p, q), &slope_coords(r, s));
                assert_eq!(got, expected, "ι({p}/{q}, {r}/{s})");
            }
        }
    }

    #[test]
    fn parallel_copies_are_disjoint() {
        let tri = s11();
        assert_eq!(ii(&tri, &slope_coords(1, 0), &[0, 2, 2]), 0);
        assert_eq!(ii(&tri, &[0, 2, 2], &[0, 3, 3]), 0);
    }

    #[test]
    fn filling_pair_complement_is_punctured_disk() {
        let tri = s11();
        let a = system_from_coords(&tri, &slope_coords(1, 0)).unwrap();
        let b = system_from_coords(&tri, &slope_coords(0, 1)).unwrap();
        let ov = Overlay::minimal(&tri, &a, &b, None).unwrap();
        assert_eq!(ov.intersection_number(), 1);
        // One complementary region: a disk containing the puncture.
        assert_eq!(ov.regions().len(), 1);
        let r = &ov.regions()[0];
        assert!(r.is_disk());
        assert_eq!(r.interior_vertices, vec![0]);
    }

    #[test]
    fn disjoint_pair_cobounds_annulus() {
        let tri = s11();
        let a = system_from_coords(&tri, &slope_coords(1, 0)).unwrap();
        let b = system_from_coords(&tri, &vec![0, 2, 2]).unwrap();
        let ov = Overlay::minimal(&tri, &a, &b, None).unwrap();
        assert_eq!(ov.intersection_number(), 0);
        // Regions: between the three parallel strands.  At least one is an
        // annulus with one side from each system.
        let has_mixed_annulus = ov.regions().iter().any(|r| {
            r.is_annulus()
                && r.interior_vertices.is_empty()
                && r.cycles.len() == 2
                && {
                    let syss: HashSet<usize> = r
                        .cycles
                        .iter()
                        .flat_map(|c| c.darts.iter().map(|d| d.hop.sys))
                        .collect();
                    syss.len() == 2
                }
        });
        assert!(has_mixed_annulus);
    }

    #[test]
    fn vertex_link_is_disjoint_from_slopes() {
        // The vertex-linking curve (2,2,2) is peripheral: disjoint from
        // every slope curve, with or without the marked point.
        let s = Surface::closed(1).unwrap();
        let tri = s.canonical_triangulation().unwrap();
        let a = system_from_coords(&tri, &vec![0, 1, 1]).unwrap();
        let b = system_from_coords(&tri, &vec![2, 2, 2]).unwrap();
        let punctured = Overlay::minimal(&tri, &a, &b, None).unwrap();
        assert_eq!(punctured.intersection_number(), 0);
        let closed = Overlay::minimal(&tri, &a, &b, Some(0)).unwrap();
        assert_eq!(closed.intersection_number(), 0);
    }

    #[test]
    fn closed_torus_slopes_meet_once() {
        let s = Surface::closed(1).unwrap();
        let tri = s.canonical_triangulation().unwrap();
        let a = system_from_coords(&tri, &vec![0, 1, 1]).unwrap();
        let b = system_from_coords(&tri, &vec![1, 0, 1]).unwrap();
        let ov = Overlay::minimal(&tri, &a, &b, Some(0)).unwrap();
        assert_eq!(ov.intersection_number(), 1);
    }
}
