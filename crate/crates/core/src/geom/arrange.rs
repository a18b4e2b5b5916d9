//! Exact chord arrangements inside one triangle.
//!
//! The boundary slots of a triangle (its three corners and the strand
//! points along each side, in cyclic order) are placed on a strictly convex
//! polygon with rational coordinates.  Chords are the strand hops through
//! the triangle; their pairwise crossings, the pieces they are divided
//! into, and the cells of the resulting arrangement are computed with exact
//! rational arithmetic.
//!
//! Two non-generic situations are handled deterministically: a chord
//! joining two cyclically consecutive slots (which would hug the boundary)
//! is bent through an interior point, and if any exact coincidence shows up
//! (three concurrent segments, tied crossing parameters) the whole picture
//! is rebuilt with the next perturbation seed.  Only the in-triangle
//! wiggle changes, never the isotopy classes, so any seed that avoids
//! coincidences yields a correct arrangement.

use num::rational::Ratio;
use num::{One, Signed, Zero};

pub type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

fn q(n: i128) -> Q {
    Ratio::from_integer(n)
}

fn cross(o: Pt, a: Pt, b: Pt) -> Q {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// A chord between two boundary slots, oriented `a -> b` along its strand.
#[derive(Clone, Copy, Debug)]
pub struct ChordSpec {
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Slot(usize),
    Cross(usize),
    Bend(usize),
}

/// An undirected 1-cell of the arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegKind {
    /// Boundary arc from slot `i` to slot `i + 1 (mod m)`.
    Boundary(usize),
    /// Piece `piece` of chord `chord`, in chord direction.
    ChordPiece { chord: usize, piece: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub kind: SegKind,
    pub from: Node,
    pub to: Node,
}

/// A crossing of two chords, with the crossing sign: `+1` when the frame
/// (direction of `chord_a`, direction of `chord_b`) is positively oriented.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub chord_a: usize,
    pub chord_b: usize,
    pub sign: i8,
}

/// A directed use of a segment: `forward` means from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub seg: usize,
    pub forward: bool,
}

pub struct Arrangement {
    pub slot_count: usize,
    pub crossings: Vec<Crossing>,
    pub segments: Vec<Segment>,
    /// Face cycles, outer face excluded; each face lists its darts in
    /// order (face lies to the left of each dart).
    pub cells: Vec<Vec<Dart>>,
    /// For each segment, `(left cell, right cell)` seen along the segment
    /// direction; the outer face appears as `usize::MAX`.
    pub seg_cells: Vec<(usize, usize)>,
    /// Cell incident to each boundary arc (indexed by starting slot).
    pub boundary_cell: Vec<usize>,
    /// Crossing order along each chord: crossing ids from `a` to `b`.
    pub chord_crossings: Vec<Vec<usize>>,
    /// Cell ids incident to each node (deduplicated).
    pub node_cells: std::collections::HashMap<Node, Vec<usize>>,
    /// CCW rotations at crossing nodes, as darts pointing away.
    pub rotations: std::collections::HashMap<Node, Vec<Dart>>,
}

struct Builder<'a> {
    chords: &'a [ChordSpec],
    m: usize,
    seed: i128,
}

#[derive(Debug)]
struct Degenerate;

impl<'a> Builder<'a> {
    fn slot_pt(&self, i: usize) -> Pt {
        let x = q(i as i128);
        Pt { x, y: x * x }
    }

    /// Interior reference point for bending consecutive-slot chords.
    fn bend_pt(&self, chord_idx: usize, a: usize, b: usize) -> Pt {
        let pa = self.slot_pt(a);
        let pb = self.slot_pt(b);
        let mid = Pt { x: (pa.x + pb.x) / q(2), y: (pa.y + pb.y) / q(2) };
        // Centroid of the whole slot set is safely interior.
        let n = self.m as i128;
        let cx: Q = (0..n).map(q).sum::<Q>() / q(n);
        let cy: Q = (0..n).map(|i| q(i) * q(i)).sum::<Q>() / q(n);
        let eps = Ratio::new(1i128, (chord_idx as i128 + 2) * (self.seed + 1) * 4096);
        Pt { x: mid.x + (cx - mid.x) * eps, y: mid.y + (cy - mid.y) * eps }
    }

    fn needs_bend(&self, c: &ChordSpec) -> bool {
        (c.a + 1) % self.m == c.b || (c.b + 1) % self.m == c.a
    }

    fn build(&self) -> Result<Arrangement, Degenerate> {
        let m = self.m;
        // Geometric polylines per chord: one or two legs.
        let legs: Vec<Vec<(Pt, Pt)>> = self
            .chords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let pa = self.slot_pt(c.a);
                let pb = self.slot_pt(c.b);
                if self.needs_bend(c) {
                    let p = self.bend_pt(i, c.a, c.b);
                    vec![(pa, p), (p, pb)]
                } else {
                    vec![(pa, pb)]
                }
            })
            .collect();
        // Pairwise crossings; params along each chord (leg index + t).
        let mut crossings: Vec<Crossing> = Vec::new();
        let mut cross_pts: Vec<Pt> = Vec::new();
        // (chord, param) -> crossing id
        let mut per_chord: Vec<Vec<(Q, usize)>> = vec![Vec::new(); self.chords.len()];
        for i in 0..self.chords.len() {
            for j in (i + 1)..self.chords.len() {
                let (ca, cb) = (&self.chords[i], &self.chords[j]);
                if ca.a == cb.a || ca.a == cb.b || ca.b == cb.a || ca.b == cb.b {
                    continue; // sharing a slot: never a transverse crossing
                }
                for (li, (a1, a2)) in legs[i].iter().enumerate() {
                    for (lj, (b1, b2)) in legs[j].iter().enumerate() {
                        if let Some((p, ta, tb)) = seg_intersect(*a1, *a2, *b1, *b2)? {
                            let id = crossings.len();
                            let d1 = Pt { x: a2.x - a1.x, y: a2.y - a1.y };
                            let d2 = Pt { x: b2.x - b1.x, y: b2.y - b1.y };
                            let s = d1.x * d2.y - d1.y * d2.x;
                            if s.is_zero() {
                                return Err(Degenerate);
                            }
                            crossings.push(Crossing {
                                chord_a: i,
                                chord_b: j,
                                sign: if s.is_positive() { 1 } else { -1 },
                            });
                            cross_pts.push(p);
                            per_chord[i].push((q(li as i128) + ta, id));
                            per_chord[j].push((q(lj as i128) + tb, id));
                        }
                    }
                }
            }
        }
        for v in &mut per_chord {
            v.sort_by(|a, b| a.0.cmp(&b.0));
            for w in v.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Degenerate);
                }
            }
        }
        // Segments.
        let mut segments: Vec<Segment> = Vec::new();
        for i in 0..m {
            segments.push(Segment {
                kind: SegKind::Boundary(i),
                from: Node::Slot(i),
                to: Node::Slot((i + 1) % m),
            });
        }
        let mut chord_crossings: Vec<Vec<usize>> = vec![Vec::new(); self.chords.len()];
        for (ci, c) in self.chords.iter().enumerate() {
            let mut stops: Vec<Node> = vec![Node::Slot(c.a)];
            let bend_param = q(1); // bend sits between legs 0 and 1
            let mut placed_bend = legs[ci].len() == 1;
            for (param, xid) in &per_chord[ci] {
                if !placed_bend && *param >= bend_param {
                    stops.push(Node::Bend(ci));
                    placed_bend = true;
                }
                stops.push(Node::Cross(*xid));
                chord_crossings[ci].push(*xid);
            }
            if !placed_bend {
                stops.push(Node::Bend(ci));
            }
            stops.push(Node::Slot(c.b));
            for (piece, w) in stops.windows(2).enumerate() {
                segments.push(Segment {
                    kind: SegKind::ChordPiece { chord: ci, piece },
                    from: w[0],
                    to: w[1],
                });
            }
        }
        // Node coordinates.
        let node_pt = |n: Node| -> Pt {
            match n {
                Node::Slot(i) => self.slot_pt(i),
                Node::Cross(i) => cross_pts[i],
                Node::Bend(ci) => self.bend_pt(ci, self.chords[ci].a, self.chords[ci].b),
            }
        };
        // Rotation system: darts pointing away from each node, CCW.
        use std::collections::HashMap;
        let mut at_node: HashMap<Node, Vec<Dart>> = HashMap::new();
        for (si, s) in segments.iter().enumerate() {
            at_node.entry(s.from).or_default().push(Dart { seg: si, forward: true });
            at_node.entry(s.to).or_default().push(Dart { seg: si, forward: false });
        }
        let dart_dir = |d: Dart| -> Pt {
            let s = &segments[d.seg];
            let (a, b) = if d.forward { (s.from, s.to) } else { (s.to, s.from) };
            let (pa, pb) = (node_pt(a), node_pt(b));
            Pt { x: pb.x - pa.x, y: pb.y - pa.y }
        };
        for (_n, darts) in at_node.iter_mut() {
            // CCW by pseudo-angle, exact.
            darts.sort_by(|&d1, &d2| {
                let v1 = dart_dir(d1);
                let v2 = dart_dir(d2);
                angle_cmp(v1, v2)
            });
            for w in darts.windows(2) {
                let v1 = dart_dir(w[0]);
                let v2 = dart_dir(w[1]);
                if angle_cmp(v1, v2) == std::cmp::Ordering::Equal {
                    return Err(Degenerate);
                }
            }
        }
        // Face tracing: next dart after arriving via d = the rotation
        // predecessor of reverse(d) at the head node.  Faces lie to the
        // left of their darts.
        let head = |d: Dart| -> Node {
            let s = &segments[d.seg];
            if d.forward {
                s.to
            } else {
                s.from
            }
        };
        let next_dart = |d: Dart| -> Dart {
            let n = head(d);
            let rev = Dart { seg: d.seg, forward: !d.forward };
            let rot = &at_node[&n];
            let idx = rot.iter().position(|x| *x == rev).expect("dart at node");
            rot[(idx + rot.len() - 1) % rot.len()]
        };
        let mut face_of: HashMap<Dart, usize> = HashMap::new();
        let mut faces: Vec<Vec<Dart>> = Vec::new();
        for si in 0..segments.len() {
            for fw in [true, false] {
                let d0 = Dart { seg: si, forward: fw };
                if face_of.contains_key(&d0) {
                    continue;
                }
                let id = faces.len();
                let mut cyc = Vec::new();
                let mut d = d0;
                loop {
                    face_of.insert(d, id);
                    cyc.push(d);
                    d = next_dart(d);
                    if d == d0 {
                        break;
                    }
                }
                faces.push(cyc);
            }
        }
        // Outer face: to the left of the reversed closing boundary arc
        // (slot m-1 -> slot 0 reversed walks the hull clockwise).
        let outer = face_of[&Dart { seg: m - 1, forward: false }];
        let mut cell_ids: Vec<usize> = vec![usize::MAX; faces.len()];
        let mut cells: Vec<Vec<Dart>> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            if fi != outer {
                cell_ids[fi] = cells.len();
                cells.push(f.clone());
            }
        }
        let mut seg_cells = vec![(usize::MAX, usize::MAX); segments.len()];
        for (si, _) in segments.iter().enumerate() {
            let lf = face_of[&Dart { seg: si, forward: true }];
            let rf = face_of[&Dart { seg: si, forward: false }];
            seg_cells[si] = (cell_ids[lf], cell_ids[rf]);
        }
        let mut boundary_cell = vec![usize::MAX; m];
        for i in 0..m {
            let (l, r) = seg_cells[i];
            // Exactly one side of a boundary arc is interior.
            if l == usize::MAX && r == usize::MAX {
                return Err(Degenerate);
            }
            boundary_cell[i] = if l != usize::MAX { l } else { r };
        }
        let mut node_cells: HashMap<Node, Vec<usize>> = HashMap::new();
        for (ci, f) in cells.iter().enumerate() {
            for d in f {
                let s = &segments[d.seg];
                for n in [s.from, s.to] {
                    let e = node_cells.entry(n).or_default();
                    if !e.contains(&ci) {
                        e.push(ci);
                    }
                }
            }
        }
        let rotations = at_node;
        Ok(Arrangement {
            slot_count: m,
            crossings,
            segments,
            cells,
            seg_cells,
            boundary_cell,
            chord_crossings,
            node_cells,
            rotations,
        })
    }
}

/// Proper intersection of open segments, with parameters along both.
#[allow(clippy::type_complexity)]
fn seg_intersect(a1: Pt, a2: Pt, b1: Pt, b2: Pt) -> Result<Option<(Pt, Q, Q)>, Degenerate> {
    let d1 = Pt { x: a2.x - a1.x, y: a2.y - a1.y };
    let d2 = Pt { x: b2.x - b1.x, y: b2.y - b1.y };
    let denom = d1.x * d2.y - d1.y * d2.x;
    if denom.is_zero() {
        // Parallel: either disjoint (fine) or collinear overlap (bad).
        if cross(a1, a2, b1).is_zero() && cross(a1, a2, b2).is_zero() {
            // Collinear: only acceptable when the segments do not overlap.
            let on = |p: Pt| -> bool {
                let tmin = a1.x.min(a2.x);
                let tmax = a1.x.max(a2.x);
                if a1.x != a2.x {
                    p.x > tmin && p.x < tmax
                } else {
                    p.y > a1.y.min(a2.y) && p.y < a1.y.max(a2.y)
                }
            };
            if on(b1) || on(b2) {
                return Err(Degenerate);
            }
        }
        return Ok(None);
    }
    let ex = b1.x - a1.x;
    let ey = b1.y - a1.y;
    let ta = (ex * d2.y - ey * d2.x) / denom;
    let tb = (ex * d1.y - ey * d1.x) / denom;
    let zero = Q::zero();
    let one = Q::one();
    if ta == zero || ta == one || tb == zero || tb == one {
        // Touching at an endpoint of a piece: with shared slots already
        // excluded this is a coincidence.
        return Err(Degenerate);
    }
    if ta > zero && ta < one && tb > zero && tb < one {
        let p = Pt { x: a1.x + ta * d1.x, y: a1.y + ta * d1.y };
        Ok(Some((p, ta, tb)))
    } else {
        Ok(None)
    }
}

/// Exact CCW angle comparison of direction vectors, starting just above
/// the positive x-axis.
fn angle_cmp(a: Pt, b: Pt) -> std::cmp::Ordering {
    let half = |v: Pt| -> u8 {
        if v.y > Q::zero() || (v.y == Q::zero() && v.x > Q::zero()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let c = a.x * b.y - a.y * b.x;
    if c.is_positive() {
        std::cmp::Ordering::Less
    } else if c.is_negative() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

/// Builds the arrangement of `chords` over `slot_count` convex boundary
/// slots, retrying perturbation seeds until the picture is generic.
pub fn arrange(slot_count: usize, chords: &[ChordSpec]) -> Arrangement {
    assert!(slot_count >= 3, "a triangle has at least its three corners");
    for seed in 0..64 {
        let b = Builder { chords, m: slot_count, seed };
        if let Ok(a) = b.build() {
            return a;
        }
    }
    panic!("no generic perturbation seed found for chord arrangement");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_triangle_one_cell() {
        let a = arrange(3, &[]);
        assert_eq!(a.cells.len(), 1);
        assert_eq!(a.crossings.len(), 0);
        assert_eq!(a.boundary_cell, vec![0, 0, 0]);
    }

    #[test]
    fn single_chord_two_cells() {
        // Slots: corners 0,1,2 and one point on each of two sides.
        // Chord from slot 1 to slot 4 (a corner arc).
        let a = arrange(6, &[ChordSpec { a: 1, b: 4 }]);
        assert_eq!(a.cells.len(), 2);
        assert_eq!(a.crossings.len(), 0);
    }

    #[test]
    fn crossing_chords() {
        // Two chords that must cross: 0-3 and 1-4 interleave.
        let a = arrange(6, &[ChordSpec { a: 0, b: 3 }, ChordSpec { a: 1, b: 4 }]);
        assert_eq!(a.crossings.len(), 1);
        assert_eq!(a.cells.len(), 4);
    }

    #[test]
    fn non_crossing_chords() {
        let a = arrange(6, &[ChordSpec { a: 0, b: 1 }, ChordSpec { a: 2, b: 5 }]);
        assert_eq!(a.crossings.len(), 0);
        assert_eq!(a.cells.len(), 3);
    }

    #[test]
    fn bent_chord_between_consecutive_slots() {
        let a = arrange(4, &[ChordSpec { a: 0, b: 1 }]);
        assert_eq!(a.crossings.len(), 0);
        assert_eq!(a.cells.len(), 2);
    }

    #[test]
    fn crossing_sign_flips_with_order() {
        let a = arrange(6, &[ChordSpec { a: 0, b: 3 }, ChordSpec { a: 1, b: 4 }]);
        let b = arrange(6, &[ChordSpec { a: 0, b: 3 }, ChordSpec { a: 4, b: 1 }]);
        assert_eq!(a.crossings[0].sign, -b.crossings[0].sign);
    }

    #[test]
    fn parallel_bare_chords_do_not_cross() {
        let a = arrange(3, &[ChordSpec { a: 0, b: 1 }, ChordSpec { a: 0, b: 1 }]);
        assert_eq!(a.crossings.len(), 0);
        assert_eq!(a.cells.len(), 3);
    }
}
