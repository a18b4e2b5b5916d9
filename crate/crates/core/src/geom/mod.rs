//! The exact kernel: curve systems drawn over an ideal triangulation.
//!
//! A system is stored twice over: as normal coordinates (one weight per
//! edge) and as an explicit transverse polyline (a cyclic itinerary of
//! triangle crossings together with a total order of strand points on every
//! edge).  Intersection numbers, complements, and subsurface cuts are all
//! computed on an [`overlay::Overlay`] of two systems: lay both polylines
//! over the triangulation, look at the complementary cell structure, and
//! remove bigons until the position is minimal.

pub mod arrange;
pub mod overlay;
pub mod poly;

pub use poly::{Coords, PolyCurve, PolySystem, Portal};
