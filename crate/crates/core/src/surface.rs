//! Combinatorial surface descriptors and canonical triangulations.
//!
//! Surfaces are stored as `(genus, boundary count)` with a per-boundary
//! marker distinguishing honest boundary circles from punctures.  The
//! canonical triangulation is an ideal one: marked points are the vertices,
//! every edge is interior, and boundary components are realized as
//! punctures.  This is the coordinate scaffold for normal coordinates; a
//! closed surface receives one auxiliary marked point (curve classes are
//! recovered by a bigon-correction pass in the curve engine).
//!
//! The construction is frozen: a genus-`g` surface starts from the fan
//! triangulation of the standard `4g`-gon (all corners identified to one
//! vertex) and each additional marked point is inserted into the
//! highest-index triangle of the current list.  `S_{0,b}` starts from the
//! double of a triangle.  Same input, bit-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A compact connected orientable surface `S_{g,b}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    pub genus: u32,
    #[serde(rename = "boundary")]
    pub boundary_count: u32,
    /// `true` marks a puncture, `false` an honest boundary circle.  The
    /// distinction is bookkeeping only; curves and arcs cannot tell.
    #[serde(default)]
    pub puncture_flags: Vec<bool>,
}

/// Outcome of the simplicity classification, with the clause that fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Simplicity {
    Simple,
    NonSimple(NonSimpleWitness),
}

/// Which clause of the classification made the surface non-simple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonSimpleWitness {
    /// `chi(S) < -1`.
    ChiBelowMinusOne,
    /// The once-punctured torus.
    OncePuncturedTorus,
    /// The closed torus.
    ClosedTorus,
    /// The annulus.
    Annulus,
}

impl Surface {
    pub fn new(genus: u32, boundary_count: u32) -> Result<Self> {
        let s = Surface {
            genus,
            boundary_count,
            puncture_flags: vec![false; boundary_count as usize],
        };
        s.check()?;
        Ok(s)
    }

    pub fn closed(genus: u32) -> Result<Self> {
        Surface::new(genus, 0)
    }

    fn check(&self) -> Result<()> {
        if self.puncture_flags.len() != self.boundary_count as usize {
            return Err(Error::InvalidSurface(format!(
                "{} puncture flags for {} boundary components",
                self.puncture_flags.len(),
                self.boundary_count
            )));
        }
        if self.genus == 0 && self.boundary_count < 2 {
            return Err(Error::InvalidSurface(
                "sphere with fewer than two marked points".into(),
            ));
        }
        Ok(())
    }

    /// `chi(S) = 2 - 2g - b`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    /// `xi(S) = 3g - 3 + b`.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.boundary_count as i64
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundary_count == 2
    }

    /// Classifies the surface as simple or non-simple: non-simple exactly
    /// when `chi(S) < -1` or the surface is `S_{1,1}`, `S_1` or the annulus.
    pub fn classify_simplicity(&self) -> Simplicity {
        if self.euler_characteristic() < -1 {
            Simplicity::NonSimple(NonSimpleWitness::ChiBelowMinusOne)
        } else if self.genus == 1 && self.boundary_count == 1 {
            Simplicity::NonSimple(NonSimpleWitness::OncePuncturedTorus)
        } else if self.genus == 1 && self.boundary_count == 0 {
            Simplicity::NonSimple(NonSimpleWitness::ClosedTorus)
        } else if self.is_annulus() {
            Simplicity::NonSimple(NonSimpleWitness::Annulus)
        } else {
            Simplicity::Simple
        }
    }

    pub fn is_simple(&self) -> bool {
        self.classify_simplicity() == Simplicity::Simple
    }

    /// The deterministic ideal triangulation described in the module docs.
    pub fn canonical_triangulation(&self) -> Result<Triangulation> {
        self.check()?;
        if self.is_annulus() {
            return Err(Error::AnnulusUnsupported);
        }
        let mut tri = if self.genus == 0 {
            Triangulation::three_holed_sphere()
        } else {
            Triangulation::one_vertex_closed(self.genus)
        };
        let target_vertices = if self.boundary_count == 0 {
            tri.aux_vertex = Some(0);
            1
        } else if self.genus == 0 {
            self.boundary_count as usize
        } else {
            self.boundary_count as usize
        };
        while tri.vertex_count < target_vertices {
            tri.insert_vertex_in_last_triangle();
        }
        tri.validate()?;
        debug_assert_eq!(tri.euler_characteristic(), 2 - 2 * self.genus as i64);
        Ok(tri)
    }
}

/// One side of a triangle: which edge it runs along and whether it agrees
/// with the edge's canonical direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SideRef {
    pub edge: usize,
    pub forward: bool,
}

/// An ideal triangulation.  Side `i` of a triangle runs from corner `i` to
/// corner `i + 1 (mod 3)`; triangles are oriented counterclockwise, so each
/// edge is traversed once in each direction by its two incident sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub vertex_count: usize,
    /// Auxiliary marked point on a closed surface, if any.
    pub aux_vertex: Option<usize>,
    pub edge_count: usize,
    /// Corner vertices of each triangle.
    pub tri_vertices: Vec<[usize; 3]>,
    /// Edge references of the three sides of each triangle.
    pub tri_sides: Vec<[SideRef; 3]>,
    /// Always empty in the ideal model: boundary circles are punctures.
    pub boundary_edges: Vec<usize>,
}

/// Location of one side inside the triangle list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SideLoc {
    pub tri: usize,
    pub side: usize,
}

impl Triangulation {
    /// Double of a triangle: the three-punctured sphere.
    fn three_holed_sphere() -> Triangulation {
        Triangulation {
            vertex_count: 3,
            aux_vertex: None,
            edge_count: 3,
            tri_vertices: vec![[0, 1, 2], [1, 0, 2]],
            tri_sides: vec![
                [
                    SideRef { edge: 0, forward: true },
                    SideRef { edge: 1, forward: true },
                    SideRef { edge: 2, forward: true },
                ],
                [
                    SideRef { edge: 0, forward: false },
                    SideRef { edge: 2, forward: false },
                    SideRef { edge: 1, forward: false },
                ],
            ],
            boundary_edges: vec![],
        }
    }

    /// Fan triangulation of the standard `4g`-gon with all corners glued to
    /// a single vertex.
    fn one_vertex_closed(genus: u32) -> Triangulation {
        let g = genus as usize;
        let n = 4 * g;
        // Edge ids: 0..2g are the glued polygon sides (side j and its
        // partner), 2g.. are the fan diagonals (0, i) for i = 2..n-2.
        // Polygon side j belongs to edge pair_id(j); sides 4k, 4k+1 are the
        // forward occurrences, 4k+2, 4k+3 the reversed ones.
        let pair_id = |j: usize| -> (usize, bool) {
            let k = j / 4;
            match j % 4 {
                0 => (2 * k, true),
                1 => (2 * k + 1, true),
                2 => (2 * k, false),
                _ => (2 * k + 1, false),
            }
        };
        let diag_id = |i: usize| -> usize {
            // diagonal (0, i), i in 2..=n-2
            2 * g + (i - 2)
        };
        let edge_count = 2 * g + (n - 3);
        let mut tri_vertices = Vec::new();
        let mut tri_sides = Vec::new();
        for i in 1..=(n - 2) {
            // triangle (corner 0, corner i, corner i+1)
            tri_vertices.push([0usize, 0, 0]);
            let side0 = if i == 1 {
                // corner 0 -> corner 1 is polygon side 0
                let (e, f) = pair_id(0);
                SideRef { edge: e, forward: f }
            } else {
                SideRef { edge: diag_id(i), forward: true }
            };
            let (e1, f1) = pair_id(i);
            let side1 = SideRef { edge: e1, forward: f1 };
            let side2 = if i == n - 2 {
                // corner n-1 -> corner 0 is polygon side n-1, traversed
                // in its own direction.
                let (e, f) = pair_id(n - 1);
                SideRef { edge: e, forward: f }
            } else {
                SideRef { edge: diag_id(i + 1), forward: false }
            };
            tri_sides.push([side0, side1, side2]);
        }
        Triangulation {
            vertex_count: 1,
            aux_vertex: None,
            edge_count,
            tri_vertices,
            tri_sides,
            boundary_edges: vec![],
        }
    }

    /// Splits the highest-index triangle into three around a new vertex.
    fn insert_vertex_in_last_triangle(&mut self) {
        let t = self.tri_sides.len() - 1;
        let [a, b, c] = self.tri_sides[t];
        let [vx, vy, vz] = self.tri_vertices[t];
        let v = self.vertex_count;
        self.vertex_count += 1;
        let exv = self.edge_count; // edge (x, v)
        let eyv = self.edge_count + 1; // edge (y, v)
        let ezv = self.edge_count + 2; // edge (z, v)
        self.edge_count += 3;
        self.tri_vertices[t] = [vx, vy, v];
        self.tri_sides[t] = [
            a,
            SideRef { edge: eyv, forward: true },
            SideRef { edge: exv, forward: false },
        ];
        self.tri_vertices.push([vy, vz, v]);
        self.tri_sides.push([
            b,
            SideRef { edge: ezv, forward: true },
            SideRef { edge: eyv, forward: false },
        ]);
        self.tri_vertices.push([vz, vx, v]);
        self.tri_sides.push([
            c,
            SideRef { edge: exv, forward: true },
            SideRef { edge: ezv, forward: false },
        ]);
    }

    pub fn triangle_count(&self) -> usize {
        self.tri_sides.len()
    }

    /// The two side locations incident to each edge, forward first.
    pub fn edge_sides(&self) -> Result<Vec<(SideLoc, SideLoc)>> {
        let mut fwd: Vec<Option<SideLoc>> = vec![None; self.edge_count];
        let mut bwd: Vec<Option<SideLoc>> = vec![None; self.edge_count];
        for (t, sides) in self.tri_sides.iter().enumerate() {
            for (s, side) in sides.iter().enumerate() {
                let slot = if side.forward { &mut fwd } else { &mut bwd };
                if side.edge >= self.edge_count {
                    return Err(Error::InvalidSurface(format!(
                        "edge id {} out of range",
                        side.edge
                    )));
                }
                if slot[side.edge].is_some() {
                    return Err(Error::InvalidSurface(format!(
                        "edge {} traversed twice in the same direction",
                        side.edge
                    )));
                }
                slot[side.edge] = Some(SideLoc { tri: t, side: s });
            }
        }
        let mut out = Vec::with_capacity(self.edge_count);
        for e in 0..self.edge_count {
            match (fwd[e], bwd[e]) {
                (Some(f), Some(b)) => out.push((f, b)),
                _ => {
                    return Err(Error::InvalidSurface(format!(
                        "edge {e} is not incident to exactly two sides"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// CW Euler characteristic `V - E + F` of the filled surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count as i64 + self.triangle_count() as i64
    }

    /// Structural validation: every edge interior with consistent gluing
    /// orientation, connected, consistent corner vertices.  Idempotent and
    /// total on canonical triangulations.
    pub fn validate(&self) -> Result<()> {
        if self.triangle_count() == 0 {
            return Err(Error::InvalidSurface("no triangles".into()));
        }
        let sides = self.edge_sides()?;
        // Corner vertices must agree across each gluing: the forward side
        // runs tail -> head of the edge, the backward side head -> tail.
        for (f, b) in &sides {
            let tail_f = self.tri_vertices[f.tri][f.side];
            let head_f = self.tri_vertices[f.tri][(f.side + 1) % 3];
            let tail_b = self.tri_vertices[b.tri][b.side];
            let head_b = self.tri_vertices[b.tri][(b.side + 1) % 3];
            if tail_f != head_b || head_f != tail_b {
                return Err(Error::InvalidSurface(
                    "edge gluing disagrees on corner vertices".into(),
                ));
            }
        }
        // Connectivity across edge gluings.
        let n = self.triangle_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for side in &self.tri_sides[t] {
                let (f, b) = sides[side.edge];
                for loc in [f, b] {
                    if !seen[loc.tri] {
                        seen[loc.tri] = true;
                        stack.push(loc.tri);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSurface("triangulation is disconnected".into()));
        }
        for verts in &self.tri_vertices {
            for &v in verts {
                if v >= self.vertex_count {
                    return Err(Error::InvalidSurface(format!("vertex {v} out of range")));
                }
            }
        }
        Ok(())
    }

    /// Vertices of the edge: `(tail, head)` in the canonical direction.
    pub fn edge_vertices(&self, sides: &[(SideLoc, SideLoc)], e: usize) -> (usize, usize) {
        let f = sides[e].0;
        (
            self.tri_vertices[f.tri][f.side],
            self.tri_vertices[f.tri][(f.side + 1) % 3],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_values() {
        assert_eq!(Surface::new(0, 4).unwrap().complexity(), 1);
        assert_eq!(Surface::new(1, 1).unwrap().complexity(), 1);
        assert_eq!(Surface::new(0, 3).unwrap().complexity(), 0);
        assert_eq!(Surface::closed(2).unwrap().complexity(), 3);
    }

    #[test]
    fn simplicity_classification() {
        assert_eq!(
            Surface::new(0, 3).unwrap().classify_simplicity(),
            Simplicity::Simple
        );
        assert_eq!(
            Surface::new(1, 1).unwrap().classify_simplicity(),
            Simplicity::NonSimple(NonSimpleWitness::OncePuncturedTorus)
        );
        assert_eq!(
            Surface::closed(2).unwrap().classify_simplicity(),
            Simplicity::NonSimple(NonSimpleWitness::ChiBelowMinusOne)
        );
        assert_eq!(
            Surface::new(0, 2).unwrap().classify_simplicity(),
            Simplicity::NonSimple(NonSimpleWitness::Annulus)
        );
        assert_eq!(
            Surface::new(0, 4).unwrap().classify_simplicity(),
            Simplicity::NonSimple(NonSimpleWitness::ChiBelowMinusOne)
        );
    }

    #[test]
    fn invalid_surfaces_rejected() {
        assert!(Surface::new(0, 0).is_err());
        assert!(Surface::new(0, 1).is_err());
    }

    #[test]
    fn once_punctured_torus_triangulation() {
        let s = Surface::new(1, 1).unwrap();
        let t = s.canonical_triangulation().unwrap();
        assert_eq!(t.triangle_count(), 2);
        assert_eq!(t.edge_count, 3);
        assert_eq!(t.vertex_count, 1);
        assert_eq!(t.euler_characteristic(), 0);
        t.validate().unwrap();
    }

    #[test]
    fn four_holed_sphere_triangulation() {
        let s = Surface::new(0, 4).unwrap();
        let t = s.canonical_triangulation().unwrap();
        assert_eq!(t.triangle_count(), 4);
        assert_eq!(t.edge_count, 6);
        assert_eq!(t.vertex_count, 4);
        // chi of the filled sphere
        assert_eq!(t.euler_characteristic(), 2);
        t.validate().unwrap();
    }

    #[test]
    fn triangle_count_formula() {
        for (g, b) in [(0u32, 3u32), (0, 4), (0, 5), (1, 1), (1, 2), (2, 1)] {
            let t = Surface::new(g, b).unwrap().canonical_triangulation().unwrap();
            assert_eq!(
                t.triangle_count() as i64,
                4 * g as i64 - 4 + 2 * b as i64,
                "S_{{{g},{b}}}"
            );
        }
        // closed surfaces carry the auxiliary vertex
        for g in [1u32, 2, 3] {
            let t = Surface::closed(g).unwrap().canonical_triangulation().unwrap();
            assert_eq!(t.triangle_count() as i64, 4 * g as i64 - 2);
            assert_eq!(t.aux_vertex, Some(0));
        }
    }

    #[test]
    fn annulus_unsupported() {
        let s = Surface::new(0, 2).unwrap();
        assert_eq!(s.canonical_triangulation(), Err(Error::AnnulusUnsupported));
    }

    #[test]
    fn deterministic_construction() {
        let a = Surface::new(2, 2).unwrap().canonical_triangulation().unwrap();
        let b = Surface::new(2, 2).unwrap().canonical_triangulation().unwrap();
        assert_eq!(a, b);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn validation_idempotent() {
        let t = Surface::new(0, 5).unwrap().canonical_triangulation().unwrap();
        t.validate().unwrap();
        t.validate().unwrap();
    }
}
