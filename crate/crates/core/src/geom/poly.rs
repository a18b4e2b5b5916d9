//! Explicit transverse polylines over an ideal triangulation.
//!
//! A [`PolyCurve`] records the itinerary of one component: the sequence of
//! portals it passes through (edge crossings, or triangle corners for the
//! endpoints of ideal arcs) and, for every hop between consecutive portals,
//! the triangle the hop runs through.  Corner portals name the corner index
//! inside the adjacent hop's triangle, which pins down the vertex
//! occurrence even on one-vertex triangulations.
//!
//! Raw polylines (`Vec<PolyCurve>`) come out of constructions like twisting
//! and rerouting; [`tighten`] removes U-turns and end returns until the
//! itinerary crosses each edge minimally.  A [`PolySystem`] is the
//! canonical embedded form of a closed family, rebuilt from its normal
//! coordinates (which determine the taut representative uniquely) together
//! with a total order of strand points on every edge.
//!
//! The kernel assumes every triangle has three distinct edges, which holds
//! for all canonical triangulations produced by this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{SideLoc, Triangulation};

/// Per-edge non-negative crossing weights.
pub type Coords = Vec<u64>;

/// One stop of an itinerary: crossing an edge, or ending at a corner of
/// the adjacent hop's triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Portal {
    Edge(usize),
    Corner(usize),
}

impl Portal {
    pub fn edge(&self) -> Option<usize> {
        match self {
            Portal::Edge(e) => Some(*e),
            Portal::Corner(_) => None,
        }
    }
}

/// A single transverse component.
///
/// Closed components treat `portals` cyclically: hop `i` runs from portal
/// `i` to portal `(i + 1) % n` inside `hop_tris[i]`.  Open components
/// (ideal arcs) start and end at `Portal::Corner` entries and have `n - 1`
/// hops.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyCurve {
    pub closed: bool,
    pub portals: Vec<Portal>,
    pub hop_tris: Vec<usize>,
}

impl PolyCurve {
    pub fn hop_count(&self) -> usize {
        self.hop_tris.len()
    }

    /// Portal indices at the two ends of hop `h`.
    pub fn hop_ends(&self, h: usize) -> (usize, usize) {
        let n = self.portals.len();
        if self.closed {
            (h, (h + 1) % n)
        } else {
            (h, h + 1)
        }
    }

    pub fn is_arc(&self) -> bool {
        !self.closed
    }

    /// The vertex an arc endpoint sits at.
    pub fn end_vertex(&self, tri: &Triangulation, last: bool) -> Option<usize> {
        if self.closed {
            return None;
        }
        let (idx, hop) = if last {
            (self.portals.len() - 1, self.hop_count() - 1)
        } else {
            (0, 0)
        };
        match self.portals[idx] {
            Portal::Corner(k) => Some(tri.tri_vertices[self.hop_tris[hop]][k]),
            Portal::Edge(_) => None,
        }
    }
}

/// Identifies one strand point: component `curve`, portal index `idx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointRef {
    pub curve: usize,
    pub idx: usize,
}

/// A disjoint family of closed components with explicit per-edge point
/// orders along each edge's canonical direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySystem {
    pub curves: Vec<PolyCurve>,
    pub edge_orders: Vec<Vec<PointRef>>,
}

impl PolySystem {
    pub fn empty(tri: &Triangulation) -> PolySystem {
        PolySystem {
            curves: Vec::new(),
            edge_orders: vec![Vec::new(); tri.edge_count],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Crossing counts per edge.
    pub fn coords(&self, tri: &Triangulation) -> Coords {
        coords_of(tri, &self.curves)
    }

    /// Position of a point in its edge order.
    pub fn edge_position(&self, pt: PointRef, edge: usize) -> usize {
        self.edge_orders[edge]
            .iter()
            .position(|p| *p == pt)
            .expect("point listed on its edge")
    }
}

/// Crossing counts per edge of a raw family.
pub fn coords_of(tri: &Triangulation, curves: &[PolyCurve]) -> Coords {
    let mut w = vec![0u64; tri.edge_count];
    for c in curves {
        for p in &c.portals {
            if let Portal::Edge(e) = p {
                w[*e] += 1;
            }
        }
    }
    w
}

/// Corner counts of a triangle from its three side weights, or `None` when
/// parity or a triangle inequality fails.
pub fn corner_counts(w: [u64; 3]) -> Option<[u64; 3]> {
    let s: u64 = w.iter().sum();
    if s % 2 != 0 {
        return None;
    }
    let mut c = [0u64; 3];
    for k in 0..3 {
        // corner k touches sides k and k-1; side k+1 is opposite
        let touching = w[k] + w[(k + 2) % 3];
        let opposite = w[(k + 1) % 3];
        if touching < opposite {
            return None;
        }
        c[k] = (touching - opposite) / 2;
    }
    Some(c)
}

/// Validates a raw weight vector against the triangulation: right length
/// and, in every triangle, even total and all triangle inequalities.
pub fn validate_coords(tri: &Triangulation, w: &Coords) -> Result<()> {
    if w.len() != tri.edge_count {
        return Err(Error::InconsistentCoordinates(format!(
            "{} weights for {} edges",
            w.len(),
            tri.edge_count
        )));
    }
    for (t, sides) in tri.tri_sides.iter().enumerate() {
        let tw = [w[sides[0].edge], w[sides[1].edge], w[sides[2].edge]];
        if corner_counts(tw).is_none() {
            return Err(Error::InconsistentCoordinates(format!(
                "matching fails in triangle {t}: weights {tw:?}"
            )));
        }
    }
    Ok(())
}

/// The unique side of triangle `t` running along edge `e`.
pub fn side_of_edge(tri: &Triangulation, t: usize, e: usize) -> usize {
    tri.tri_sides[t]
        .iter()
        .position(|s| s.edge == e)
        .expect("edge bounds the triangle")
}

/// Where a strand sits on one side of a triangle.
#[derive(Clone, Copy, Debug)]
struct SidePoint {
    side: usize,
    /// Position along the side direction (corner `side` to corner `side+1`).
    pos: u64,
}

/// The canonical chord partner of a side point inside its triangle.
fn chord_partner(w: [u64; 3], at: SidePoint) -> SidePoint {
    let c = corner_counts(w).expect("validated");
    let s = at.side;
    // Positions 0..c[s] belong to corner s, the rest to corner s+1.
    if at.pos < c[s] {
        // corner s arc number `at.pos`: partner sits at the far end of
        // side s-1, which abuts corner s.
        let s2 = (s + 2) % 3;
        SidePoint { side: s2, pos: w[s2] - 1 - at.pos }
    } else {
        // corner s+1 arc number j, with j = 0 innermost.
        let j = w[s] - 1 - at.pos;
        let s2 = (s + 1) % 3;
        SidePoint { side: s2, pos: j }
    }
}

fn side_to_edge_pos(tri: &Triangulation, t: usize, sp: SidePoint, w: &Coords) -> (usize, u64) {
    let side = tri.tri_sides[t][sp.side];
    let we = w[side.edge];
    let pos = if side.forward { sp.pos } else { we - 1 - sp.pos };
    (side.edge, pos)
}

fn edge_to_side_pos(loc: SideLoc, forward: bool, pos: u64, we: u64) -> SidePoint {
    let p = if forward { pos } else { we - 1 - pos };
    SidePoint { side: loc.side, pos: p }
}

/// Builds the canonical nested polyline realizing a closed normal
/// coordinate vector.  Components come out sorted by their smallest
/// `(edge, position)` visit.
pub fn system_from_coords(tri: &Triangulation, w: &Coords) -> Result<PolySystem> {
    validate_coords(tri, w)?;
    let sides = tri.edge_sides()?;
    let tri_w = |t: usize| -> [u64; 3] {
        let s = &tri.tri_sides[t];
        [w[s[0].edge], w[s[1].edge], w[s[2].edge]]
    };
    let mut curves: Vec<PolyCurve> = Vec::new();
    let mut assignment: Vec<Vec<Option<PointRef>>> =
        (0..tri.edge_count).map(|e| vec![None; w[e] as usize]).collect();
    for e0 in 0..tri.edge_count {
        for p0 in 0..w[e0] {
            if assignment[e0][p0 as usize].is_some() {
                continue;
            }
            let curve_idx = curves.len();
            let mut portals = Vec::new();
            let mut hop_tris = Vec::new();
            let (mut e, mut p) = (e0, p0);
            let mut into_forward = true;
            loop {
                assignment[e][p as usize] =
                    Some(PointRef { curve: curve_idx, idx: portals.len() });
                portals.push(Portal::Edge(e));
                let (floc, bloc) = sides[e];
                let loc = if into_forward { floc } else { bloc };
                let t = loc.tri;
                hop_tris.push(t);
                let ww = tri_w(t);
                let sp = edge_to_side_pos(loc, into_forward, p, w[e]);
                let out = chord_partner(ww, sp);
                let (e2, p2) = side_to_edge_pos(tri, t, out, w);
                let out_side = tri.tri_sides[t][out.side];
                into_forward = !out_side.forward;
                e = e2;
                p = p2;
                if e == e0 && p == p0 {
                    debug_assert!(into_forward, "strand re-entered its start sideways");
                    break;
                }
            }
            curves.push(PolyCurve { closed: true, portals, hop_tris });
        }
    }
    let mut edge_orders: Vec<Vec<PointRef>> = Vec::with_capacity(tri.edge_count);
    for e in 0..tri.edge_count {
        edge_orders.push((0..w[e]).map(|p| assignment[e][p as usize].unwrap()).collect());
    }
    Ok(PolySystem { curves, edge_orders })
}

/// Removes U-turn hops and end returns until the itinerary is locally
/// taut.  Components that shrink to nothing are dropped; returns how many.
pub fn tighten(tri: &Triangulation, curves: &mut Vec<PolyCurve>) -> usize {
    let sides = tri.edge_sides().expect("valid triangulation");
    let mut dropped = 0;
    let mut i = 0;
    while i < curves.len() {
        if tighten_one(tri, &sides, &mut curves[i]) {
            dropped += 1;
            curves.remove(i);
        } else {
            i += 1;
        }
    }
    dropped
}

/// Tightens one component in place; returns true when it became trivial.
fn tighten_one(tri: &Triangulation, sides: &[(SideLoc, SideLoc)], c: &mut PolyCurve) -> bool {
    loop {
        let n = c.portals.len();
        if c.closed && n <= 1 {
            return true;
        }
        if !c.closed && n == 2 {
            return false; // bare corner-to-corner hop: taut
        }
        if let Some(h) = find_uturn(c) {
            remove_uturn(sides, c, h);
            continue;
        }
        if !c.closed {
            if let Some(first) = find_end_return(tri, c) {
                remove_end_return(tri, sides, c, first);
                continue;
            }
        }
        return false;
    }
}

fn find_uturn(c: &PolyCurve) -> Option<usize> {
    for h in 0..c.hop_count() {
        let (i, j) = c.hop_ends(h);
        if let (Portal::Edge(e1), Portal::Edge(e2)) = (c.portals[i], c.portals[j]) {
            if e1 == e2 {
                return Some(h);
            }
        }
    }
    None
}

/// An end return: the arc's terminal hop runs from an edge crossing to a
/// corner touching that very edge, so the endpoint slides across it.
/// Returns `Some(true)` for the first end, `Some(false)` for the last.
fn find_end_return(tri: &Triangulation, c: &PolyCurve) -> Option<bool> {
    let n = c.portals.len();
    if n < 3 {
        return None;
    }
    if let (Portal::Corner(k), Portal::Edge(e)) = (c.portals[0], c.portals[1]) {
        let t = c.hop_tris[0];
        let s = side_of_edge(tri, t, e);
        if s == k || (s + 1) % 3 == k {
            return Some(true);
        }
    }
    if let (Portal::Edge(e), Portal::Corner(k)) = (c.portals[n - 2], c.portals[n - 1]) {
        let t = c.hop_tris[c.hop_count() - 1];
        let s = side_of_edge(tri, t, e);
        if s == k || (s + 1) % 3 == k {
            return Some(false);
        }
    }
    None
}

/// Removes the U-turn hop `h`: both portals drop out and the neighboring
/// hops merge into one in the triangle across the edge.
fn remove_uturn(sides: &[(SideLoc, SideLoc)], c: &mut PolyCurve, h: usize) {
    let (i, j) = c.hop_ends(h);
    let e = c.portals[i].edge().expect("return crosses an edge");
    let t_return = c.hop_tris[h];
    let (floc, bloc) = sides[e];
    let t_far = if floc.tri == t_return { bloc.tri } else { floc.tri };
    let n = c.portals.len();
    if c.closed && n == 2 {
        c.portals.clear();
        c.hop_tris.clear();
        return;
    }
    // Hops are indexed by their start portal, so dropping portals i and j
    // drops hops i and j; the hop arriving at portal i (index i-1) already
    // runs in `t_far` and silently extends to portal j+1.
    if c.closed {
        debug_assert_eq!(c.hop_tris[(i + n - 1) % n], t_far);
    } else {
        debug_assert!(i >= 1, "arc U-turn cannot start at an end");
        debug_assert_eq!(c.hop_tris[i - 1], t_far);
    }
    let mut portals = Vec::with_capacity(n - 2);
    let mut hops = Vec::with_capacity(c.hop_tris.len().saturating_sub(2));
    for k in 0..n {
        if k != i && k != j {
            portals.push(c.portals[k]);
            if k < c.hop_tris.len() {
                hops.push(c.hop_tris[k]);
            }
        }
    }
    if !c.closed {
        // Open arcs have one fewer hop than portals; the filter above kept
        // hop entries aligned with their start portals, and the final
        // portal contributes no hop, so trim if needed.
        hops.truncate(portals.len() - 1);
    }
    c.portals = portals;
    c.hop_tris = hops;
}

/// Slides an arc endpoint across the edge its terminal hop crosses.
fn remove_end_return(
    tri: &Triangulation,
    sides: &[(SideLoc, SideLoc)],
    c: &mut PolyCurve,
    first: bool,
) {
    let n = c.portals.len();
    let (kpos, epos, hop) = if first { (0, 1, 0) } else { (n - 1, n - 2, c.hop_count() - 1) };
    let k = match c.portals[kpos] {
        Portal::Corner(k) => k,
        Portal::Edge(_) => unreachable!(),
    };
    let e = c.portals[epos].edge().unwrap();
    let t = c.hop_tris[hop];
    let s = side_of_edge(tri, t, e);
    let (floc, bloc) = sides[e];
    let (near, far) = if floc.tri == t && floc.side == s {
        (floc, bloc)
    } else {
        (bloc, floc)
    };
    debug_assert_eq!(near.tri, t);
    // Corner correspondence across the gluing: tail of one side matches
    // head of the other.
    let k2 = if k == s {
        (far.side + 1) % 3
    } else {
        debug_assert_eq!(k, (s + 1) % 3);
        far.side
    };
    debug_assert_eq!(
        tri.tri_vertices[t][k],
        tri.tri_vertices[far.tri][k2],
        "gluing must preserve the endpoint vertex"
    );
    if first {
        c.portals.remove(1);
        c.portals[0] = Portal::Corner(k2);
        c.hop_tris.remove(0);
        if c.hop_tris.is_empty() {
            c.hop_tris.push(far.tri);
        } else {
            c.hop_tris[0] = far.tri;
        }
    } else {
        c.portals.remove(n - 2);
        let m = c.portals.len();
        c.portals[m - 1] = Portal::Corner(k2);
        c.hop_tris.pop();
        if c.hop_tris.is_empty() {
            c.hop_tris.push(far.tri);
        } else {
            let l = c.hop_tris.len() - 1;
            c.hop_tris[l] = far.tri;
        }
    }
}

/// Tightens a raw closed family and rebuilds the canonical embedded form
/// through its normal coordinates.
pub fn canonicalize_closed(tri: &Triangulation, mut curves: Vec<PolyCurve>) -> Result<PolySystem> {
    for c in &curves {
        if !c.closed {
            return Err(Error::Unsupported(
                "canonicalize_closed expects closed components".into(),
            ));
        }
    }
    tighten(tri, &mut curves);
    let w = coords_of(tri, &curves);
    let sys = system_from_coords(tri, &w)?;
    if sys.curves.len() != curves.len() {
        return Err(Error::InconsistentCoordinates(format!(
            "component count changed in canonicalization: {} -> {}",
            curves.len(),
            sys.curves.len()
        )));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Surface;

    fn s11() -> Triangulation {
        Surface::new(1, 1).unwrap().canonical_triangulation().unwrap()
    }

    #[test]
    fn corner_counts_basic() {
        assert_eq!(corner_counts([1, 1, 2]), Some([1, 0, 1]));
        assert_eq!(corner_counts([0, 0, 0]), Some([0, 0, 0]));
        assert_eq!(corner_counts([1, 0, 0]), None); // parity
        assert_eq!(corner_counts([4, 1, 1]), None); // triangle inequality
    }

    #[test]
    fn zero_vector_is_empty_system() {
        let tri = s11();
        let sys = system_from_coords(&tri, &vec![0, 0, 0]).unwrap();
        assert!(sys.curves.is_empty());
    }

    #[test]
    fn s11_slope_vectors_trace_single_curves() {
        let tri = s11();
        for w in [vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 2]] {
            let sys = system_from_coords(&tri, &w).unwrap();
            assert_eq!(sys.curves.len(), 1, "coords {w:?}");
            assert_eq!(sys.coords(&tri), w);
        }
    }

    #[test]
    fn parallel_copies_trace_separately() {
        let tri = s11();
        let sys = system_from_coords(&tri, &vec![2, 2, 0]).unwrap();
        assert_eq!(sys.curves.len(), 2);
    }

    #[test]
    fn invalid_vectors_rejected() {
        let tri = s11();
        assert!(matches!(
            validate_coords(&tri, &vec![1, 0, 0]),
            Err(Error::InconsistentCoordinates(_))
        ));
        assert!(validate_coords(&tri, &vec![1, 1]).is_err());
    }

    #[test]
    fn canonicalize_round_trips() {
        let tri = s11();
        for w in [vec![1, 1, 2], vec![2, 2, 0], vec![1, 2, 3]] {
            let sys = system_from_coords(&tri, &w).unwrap();
            let again = canonicalize_closed(&tri, sys.curves.clone()).unwrap();
            assert_eq!(again.coords(&tri), w);
        }
    }

    #[test]
    fn uturn_removal() {
        let tri = s11();
        // Take the (0,1,1) curve and insert an artificial U-turn through
        // edge 0: the tightened curve must return to the original.
        let sys = system_from_coords(&tri, &vec![0, 1, 1]).unwrap();
        let orig = sys.curves[0].clone();
        let mut bent = orig.clone();
        // Find the hop and its triangle; inject a detour across edge 0 and
        // back inside that triangle's neighbor.
        let t = bent.hop_tris[0];
        let sides = tri.edge_sides().unwrap();
        let (floc, bloc) = sides[0];
        let t_far = if floc.tri == t { bloc.tri } else { floc.tri };
        bent.portals.insert(1, Portal::Edge(0));
        bent.portals.insert(2, Portal::Edge(0));
        bent.hop_tris.insert(1, t_far);
        bent.hop_tris.insert(2, t);
        let mut curves = vec![bent];
        let dropped = tighten(&tri, &mut curves);
        assert_eq!(dropped, 0);
        assert_eq!(coords_of(&tri, &curves), vec![0, 1, 1]);
        assert_eq!(curves[0].portals.len(), orig.portals.len());
    }
}
