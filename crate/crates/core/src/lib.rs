//! Exact combinatorial computation with curves, arcs, disks and train tracks
//! on compact surfaces and handlebodies.
//!
//! The crate is organized around a small exact kernel: surfaces carry a fixed
//! ideal triangulation, isotopy classes of multicurves are stored as normal
//! coordinates over that triangulation, and geometric intersection numbers
//! are computed by laying two curve systems over each other and removing
//! bigons until the position is minimal.  Everything else is layered on top:
//!
//! * [`slope`] / [`explorer`] — the Farey graph, exact distances and
//!   geodesics in curve and arc complexes at desk scale;
//! * [`projection`] — cutting, surgery and subsurface projection, the
//!   annular model and the distance-estimate aggregator;
//! * [`track`] — measured train tracks, slides and splits, vertex sets;
//! * [`handlebody`] — cut systems, disk sets, Whitehead minimization;
//! * [`hempel`] — the coarse projection to a disk set and the coarse
//!   distance of a Heegaard diagram;
//! * [`hyperbolicity`] — finite-graph hyperbolicity diagnostics.

pub mod error;
pub mod geom;
pub mod slope;
pub mod surface;

pub mod curve;
pub mod marking;

pub mod explorer;
pub mod projection;

pub mod handlebody;
pub mod track;

pub mod hempel;
pub mod hyperbolicity;

pub mod fixtures;

pub use curve::MultiCurve;
pub use error::Error;
pub use slope::Slope;
pub use surface::{Surface, Triangulation};
